//! JSON encoding of Clifford modules.
//!
//! Matrices are row-major arrays of rows, each entry a `[re, im]` pair.
//! Floats use shortest round-trip formatting, so an export followed by an
//! import reproduces every matrix exactly.

use serde::{Deserialize, Serialize};

use crate::clifford::{CliffordModule, Signature};
use crate::error::{Error, Result};
use crate::linalg::{AntilinearOp, ComplexMatrix, C64};

pub type MatrixRows = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleDocument {
    pub p: usize,
    pub q: usize,
    pub branch: i8,
    pub dim: usize,
    pub gammas: Vec<MatrixRows>,
    #[serde(rename = "P")]
    pub product: MatrixRows,
    pub chirality: MatrixRows,
    #[serde(rename = "J_matrix")]
    pub j_matrix: MatrixRows,
    #[serde(
        rename = "Jhat_matrix",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub jhat_matrix: Option<MatrixRows>,
}

pub fn encode_matrix(m: &ComplexMatrix) -> MatrixRows {
    m.rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn decode_matrix(rows: &MatrixRows, dim: usize, what: &str) -> Result<ComplexMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Import(format!("{what} is not {dim}x{dim}")));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Import(format!("{what} has non-finite entries")));
    }
    Ok(ComplexMatrix::from_fn(dim, |i, j| {
        let [re, im] = rows[i][j];
        C64::new(re, im)
    }))
}

impl ModuleDocument {
    pub fn from_module(m: &CliffordModule) -> Self {
        Self {
            p: m.signature.p,
            q: m.signature.q,
            branch: m.branch,
            dim: m.dim(),
            gammas: m.gammas.iter().map(encode_matrix).collect(),
            product: encode_matrix(&m.product),
            chirality: encode_matrix(&m.chirality),
            j_matrix: encode_matrix(m.j.matrix()),
            jhat_matrix: m.jhat.as_ref().map(|j| encode_matrix(j.matrix())),
        }
    }

    /// Rebuilds the module from stored matrices without recomputing them.
    pub fn into_module(&self) -> Result<CliffordModule> {
        let signature = Signature::new(self.p, self.q);
        let n = signature.n();
        if self.branch != 1 && self.branch != -1 {
            return Err(Error::Import(format!("branch {} is not ±1", self.branch)));
        }
        let expected_dim = 1usize << (n / 2);
        if self.dim != expected_dim {
            return Err(Error::Import(format!(
                "dim {} does not match 2^floor({n}/2) = {expected_dim}",
                self.dim
            )));
        }
        if self.gammas.len() != n {
            return Err(Error::Import(format!(
                "{} gammas for p + q = {n}",
                self.gammas.len()
            )));
        }
        let gammas = self
            .gammas
            .iter()
            .enumerate()
            .map(|(a, g)| decode_matrix(g, self.dim, &format!("gammas[{a}]")))
            .collect::<Result<Vec<_>>>()?;
        let jhat = self
            .jhat_matrix
            .as_ref()
            .map(|m| decode_matrix(m, self.dim, "Jhat_matrix").map(AntilinearOp::new))
            .transpose()?;
        Ok(CliffordModule {
            signature,
            branch: self.branch,
            gammas,
            product: decode_matrix(&self.product, self.dim, "P")?,
            chirality: decode_matrix(&self.chirality, self.dim, "chirality")?,
            j: AntilinearOp::new(decode_matrix(&self.j_matrix, self.dim, "J_matrix")?),
            jhat,
        })
    }
}

pub fn export_module_json(m: &CliffordModule) -> String {
    serde_json::to_string_pretty(&ModuleDocument::from_module(m)).expect("plain data serializes")
}

pub fn import_module_json(text: &str) -> Result<CliffordModule> {
    let doc: ModuleDocument =
        serde_json::from_str(text).map_err(|e| Error::Import(e.to_string()))?;
    doc.into_module()
}
