//! Irreducible unitary Clifford modules `Cl(p,q)` and their structure maps.
//!
//! Gamma matrices are built from a Pauli chain: for `n = 2m`
//!
//! ```text
//! g^{2k-1} = s3 ⊗ .. ⊗ s3 ⊗ s1 ⊗ 1 ⊗ .. ⊗ 1
//! g^{2k}   = s3 ⊗ .. ⊗ s3 ⊗ s2 ⊗ 1 ⊗ .. ⊗ 1
//! ```
//!
//! with `k - 1` leading `s3` factors, and for odd `n` the extra generator
//! `branch * s3 ⊗ .. ⊗ s3`. The first `p` generators are the Hermitian `g^a`,
//! the remaining `q` are `i g^a`. The real structure `J` is obtained by
//! solving the antilinear commutant problem with the sign `eps'` for every
//! generator.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    kron_all, sigma, solve_antilinear_commutant, AntilinearOp, ComplexMatrix, C64, I,
};

/// Signature `(p, q)` of a real quadratic form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl Signature {
    pub const fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    pub const fn n(&self) -> usize {
        self.p + self.q
    }

    /// `(q - p) mod 8`
    pub fn s(&self) -> u8 {
        (self.q as i64 - self.p as i64).rem_euclid(8) as u8
    }

    pub fn metric(&self) -> MetricTensor {
        MetricTensor::canonical(*self)
    }

    /// All signatures with `p + q <= max_n`, ordered by `n` then by `p` descending.
    pub fn all_up_to(max_n: usize) -> Vec<Signature> {
        (0..=max_n)
            .flat_map(|n| (0..=n).rev().map(move |p| Signature::new(p, n - p)))
            .collect()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Diagonal metric with entries `+1` / `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricTensor {
    pub diag: Vec<i8>,
}

impl MetricTensor {
    /// `p` entries `+1` followed by `q` entries `-1`.
    pub fn canonical(sig: Signature) -> Self {
        let mut diag = vec![1; sig.p];
        diag.extend(std::iter::repeat_n(-1, sig.q));
        Self { diag }
    }

    pub fn from_diag(diag: Vec<i8>) -> Self {
        assert!(
            diag.iter().all(|&d| d == 1 || d == -1),
            "metric entries must be ±1"
        );
        Self { diag }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `eta^{ab}`
    pub fn entry(&self, a: usize, b: usize) -> f64 {
        if a == b {
            f64::from(self.diag[a])
        } else {
            0.0
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            diag: self.diag.iter().map(|d| -d).collect(),
        }
    }

    /// Block sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut diag = self.diag.clone();
        diag.extend_from_slice(&other.diag);
        Self { diag }
    }

    pub fn signature(&self) -> Signature {
        let p = self.diag.iter().filter(|&&d| d == 1).count();
        Signature::new(p, self.diag.len() - p)
    }
}

/// Signs `(eps, eps', eps'')` of a real structure.
///
/// `eps_double_prime` is `None` when the chirality operator is a scalar (odd
/// `n`), where commuting with it carries no information.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignTriple {
    pub eps: i8,
    pub eps_prime: i8,
    pub eps_double_prime: Option<i8>,
}

const EPS: [i8; 8] = [1, 1, -1, -1, -1, -1, 1, 1];
const EPS_PRIME: [i8; 8] = [1, -1, 1, 1, 1, -1, 1, 1];
const EPS_DOUBLE_PRIME: [i8; 8] = [1, 1, -1, 1, 1, 1, -1, 1];

impl SignTriple {
    /// Row `s` of the sign table.
    pub fn for_s(s: u8) -> Self {
        let s = usize::from(s % 8);
        Self {
            eps: EPS[s],
            eps_prime: EPS_PRIME[s],
            eps_double_prime: (s % 2 == 0).then_some(EPS_DOUBLE_PRIME[s]),
        }
    }

    /// The table row reproduced by these signs, if any. Triples carrying an
    /// `eps''` are matched against even rows only, the rest against odd rows.
    pub fn matching_s(&self) -> Option<u8> {
        (0..8u8).find(|&s| SignTriple::for_s(s) == *self)
    }
}

impl fmt::Display for SignTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.eps_double_prime {
            Some(e) => write!(f, "({:+}, {:+}, {:+})", self.eps, self.eps_prime, e),
            None => write!(f, "({:+}, {:+}, -)", self.eps, self.eps_prime),
        }
    }
}

/// Picks the sign `±1` whose residual is below `tol`. Returns `None` when
/// neither or both fit.
pub fn measure_sign(residual_plus: f64, residual_minus: f64, tol: f64) -> Option<i8> {
    match (residual_plus < tol, residual_minus < tol) {
        (true, false) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    }
}

/// Irreducible unitary module for `Cl(p,q)` with its structure maps.
#[derive(Clone, Debug)]
pub struct CliffordModule {
    pub signature: Signature,
    /// Sign of the last generator for odd `n`; always `+1` for even `n`.
    pub branch: i8,
    pub gammas: Vec<ComplexMatrix>,
    pub product: ComplexMatrix,
    pub chirality: ComplexMatrix,
    pub j: AntilinearOp,
    pub jhat: Option<AntilinearOp>,
}

/// Pauli-chain Hermitian generators `g^1..g^n`.
fn pauli_chain(n: usize, branch: i8) -> Vec<ComplexMatrix> {
    let m = n / 2;
    let mut out = Vec::with_capacity(n);
    for k in 1..=m {
        for middle in [1, 2] {
            let factors: Vec<ComplexMatrix> = (1..=m)
                .map(|slot| match slot.cmp(&k) {
                    std::cmp::Ordering::Less => sigma(3),
                    std::cmp::Ordering::Equal => sigma(middle),
                    std::cmp::Ordering::Greater => sigma(0),
                })
                .collect();
            out.push(kron_all(&factors));
        }
    }
    if n % 2 == 1 {
        let factors = vec![sigma(3); m];
        out.push(kron_all(&factors).scale_re(f64::from(branch)));
    }
    out
}

/// Ordered product `g_1 g_2 .. g_n` (identity for an empty list).
pub fn ordered_product(dim: usize, gammas: &[ComplexMatrix]) -> ComplexMatrix {
    gammas
        .iter()
        .fold(ComplexMatrix::identity(dim), |acc, g| &acc * g)
}

/// `i^k`
pub fn i_pow(k: usize) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => I,
        2 => C64::new(-1.0, 0.0),
        _ => -I,
    }
}

impl CliffordModule {
    /// Builds the irreducible module of dimension `2^floor(n/2)`.
    ///
    /// Output is a deterministic function of the arguments.
    pub fn build_irrep(sig: Signature, branch: i8) -> Self {
        assert!(branch == 1 || branch == -1, "branch must be ±1");
        let n = sig.n();
        let branch = if n % 2 == 1 { branch } else { 1 };
        let gammas: Vec<ComplexMatrix> = pauli_chain(n, branch)
            .into_iter()
            .enumerate()
            .map(|(a, g)| if a < sig.p { g } else { g.scale(I) })
            .collect();
        let dim = 1usize << (n / 2);
        let product = ordered_product(dim, &gammas);
        let chirality = chirality_from_product(sig.s(), &product);
        let mut module = Self {
            signature: sig,
            branch,
            gammas,
            product,
            chirality,
            j: AntilinearOp::conjugation(dim),
            jhat: None,
        };
        module.j = module
            .real_structure()
            .expect("irreducible modules carry a real structure");
        module.jhat = module.hatted_real_structure().ok();
        module
    }

    pub fn dim(&self) -> usize {
        self.product.dim()
    }

    pub fn n(&self) -> usize {
        self.signature.n()
    }

    pub fn s(&self) -> u8 {
        self.signature.s()
    }

    pub fn metric(&self) -> MetricTensor {
        self.signature.metric()
    }

    /// `P = gamma^1 gamma^2 .. gamma^n` in increasing index order.
    pub fn product_element(&self) -> &ComplexMatrix {
        &self.product
    }

    /// `i^{s(s+1)/2} P`
    pub fn chirality_op(&self) -> &ComplexMatrix {
        &self.chirality
    }

    /// Solves for `J` with `J gamma^a = eps' gamma^a J`.
    pub fn real_structure(&self) -> Result<AntilinearOp> {
        let eps_prime = SignTriple::for_s(self.s()).eps_prime;
        let signs = vec![eps_prime; self.gammas.len()];
        solve_antilinear_commutant(self.dim(), &self.gammas, &signs).map(|sol| sol.op)
    }

    /// `J^ = J P`, defined for even `s`.
    pub fn hatted_real_structure(&self) -> Result<AntilinearOp> {
        if self.s() % 2 == 1 {
            return Err(Error::OddSignature(self.s()));
        }
        Ok(self.j.after_linear(&self.product))
    }

    /// max-abs of `{g^a, g^b} - 2 eta^{ab}` over all pairs.
    pub fn clifford_residual(&self) -> f64 {
        clifford_relation_residual(&self.gammas, &self.metric())
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.gammas
            .iter()
            .map(ComplexMatrix::unitarity_residual)
            .fold(0.0, f64::max)
    }

    /// Hermitian for `a < p`, anti-Hermitian otherwise.
    pub fn hermiticity_residual(&self) -> f64 {
        self.gammas
            .iter()
            .enumerate()
            .map(|(a, g)| {
                let sign = if a < self.signature.p { 1.0 } else { -1.0 };
                g.dist(&g.adjoint().scale_re(sign))
            })
            .fold(0.0, f64::max)
    }

    /// Measures `(eps, eps', eps'')` from the stored `J`.
    pub fn measure_signs(&self, tol: f64) -> SignTriple {
        measure_signs_of(
            &self.j,
            &self.gammas,
            &self.chirality,
            self.n() % 2 == 1,
            tol,
        )
    }

    /// Scalar `lambda` with `J P = lambda P J`, or `None` when no such scalar
    /// of modulus one fits.
    pub fn j_past_product(&self, tol: f64) -> Option<i8> {
        measure_sign(
            self.j.relation_residual(&self.product, 1.0),
            self.j.relation_residual(&self.product, -1.0),
            tol,
        )
    }
}

fn chirality_from_product(s: u8, product: &ComplexMatrix) -> ComplexMatrix {
    let s = usize::from(s);
    product.scale(i_pow(s * (s + 1) / 2))
}

/// max-abs of `{g^a, g^b} - 2 eta^{ab} I` over all pairs.
pub fn clifford_relation_residual(gammas: &[ComplexMatrix], eta: &MetricTensor) -> f64 {
    let mut worst = 0.0_f64;
    for (a, ga) in gammas.iter().enumerate() {
        for (b, gb) in gammas.iter().enumerate().skip(a) {
            let target = ComplexMatrix::identity(ga.dim()).scale_re(2.0 * eta.entry(a, b));
            worst = worst.max(ga.anticommutator(gb).dist(&target));
        }
    }
    worst
}

/// Measures the sign triple of an antilinear `J` against a gamma family and a
/// chirality operator. `scalar_chirality` suppresses `eps''`.
pub fn measure_signs_of(
    j: &AntilinearOp,
    gammas: &[ComplexMatrix],
    chirality: &ComplexMatrix,
    scalar_chirality: bool,
    tol: f64,
) -> SignTriple {
    let dim = j.dim();
    let sq = j.square();
    let id = ComplexMatrix::identity(dim);
    let eps = measure_sign(sq.dist(&id), sq.dist(&-&id), tol).unwrap_or(0);
    let eps_prime = common_sign(j, gammas, tol).unwrap_or(0);
    let eps_double_prime = if scalar_chirality {
        None
    } else {
        Some(
            measure_sign(
                j.relation_residual(chirality, 1.0),
                j.relation_residual(chirality, -1.0),
                tol,
            )
            .unwrap_or(0),
        )
    };
    SignTriple {
        eps,
        eps_prime,
        eps_double_prime,
    }
}

/// The common sign `c` with `J g = c g J` for every `g`, if one exists.
/// An empty family gives `+1`.
fn common_sign(j: &AntilinearOp, gammas: &[ComplexMatrix], tol: f64) -> Option<i8> {
    let plus = gammas
        .iter()
        .map(|g| j.relation_residual(g, 1.0))
        .fold(0.0, f64::max);
    let minus = gammas
        .iter()
        .map(|g| j.relation_residual(g, -1.0))
        .fold(0.0, f64::max);
    if gammas.is_empty() {
        return Some(1);
    }
    measure_sign(plus, minus, tol)
}

/// One row of the sign-table reproduction.
#[derive(Clone, Debug, Serialize)]
pub struct SignRow {
    pub signature: Signature,
    pub branch: i8,
    pub s: u8,
    pub expected: SignTriple,
    pub measured: SignTriple,
    /// `J P = lambda P J`
    pub lambda: Option<i8>,
    /// Measured sign of `J^2` (and of `J^ gamma^a = -gamma^a J^`) for even `s`.
    pub jhat_square: Option<i8>,
    pub max_residual: f64,
    pub pass: bool,
}

/// Builds each module and compares its measured signs with the table.
pub fn verify_signatures(sigs: &[Signature], tol: f64) -> Vec<SignRow> {
    let mut rows = Vec::new();
    for &sig in sigs {
        let branches: &[i8] = if sig.n() % 2 == 1 { &[1, -1] } else { &[1] };
        for &branch in branches {
            rows.push(sign_row(&CliffordModule::build_irrep(sig, branch), tol));
        }
    }
    rows
}

/// Every `(p,q)` with `p + q <= max_n`, both branches for odd `n`.
pub fn verify_module_signs(max_n: usize, tol: f64) -> Vec<SignRow> {
    verify_signatures(&Signature::all_up_to(max_n), tol)
}

/// Residual threshold separating `+1` from `-1` when measuring signs.
const SIGN_TOL: f64 = 1e-6;

fn sign_row(m: &CliffordModule, tol: f64) -> SignRow {
    let s = m.s();
    let expected = SignTriple::for_s(s);
    let measured = m.measure_signs(SIGN_TOL);
    let dim = m.dim();
    let id = ComplexMatrix::identity(dim);

    let s_us = usize::from(s);
    let p_sq_sign = if (s_us * (s_us + 1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    let mut residuals = vec![
        m.clifford_residual(),
        m.unitarity_residual(),
        m.hermiticity_residual(),
        (m.product_element() * m.product_element()).dist(&id.scale_re(p_sq_sign)),
        (m.chirality_op() * m.chirality_op()).dist(&id),
        m.chirality_op().hermiticity_residual(),
        m.j.unitarity_residual(),
    ];
    let sq = m.j.square();
    residuals.push(sq.dist(&id.scale_re(f64::from(expected.eps))));
    for g in &m.gammas {
        residuals.push(m.j.relation_residual(g, f64::from(expected.eps_prime)));
    }
    if let Some(e2) = expected.eps_double_prime {
        residuals.push(m.j.relation_residual(m.chirality_op(), f64::from(e2)));
    }
    let lambda = m.j_past_product(SIGN_TOL);
    residuals.push(m.j.relation_residual(m.product_element(), f64::from(expected.eps_prime)));

    let mut jhat_ok = true;
    let jhat_square = m.jhat.as_ref().map(|jh| {
        let e2 = expected.eps_double_prime.expect("even s");
        let target = f64::from(e2 * expected.eps);
        residuals.push(jh.square().dist(&id.scale_re(target)));
        for g in &m.gammas {
            residuals.push(jh.relation_residual(g, -1.0));
        }
        residuals.push(jh.relation_residual(m.chirality_op(), f64::from(e2)));
        let sq = jh.square();
        let measured = measure_sign(sq.dist(&id), sq.dist(&-&id), SIGN_TOL).unwrap_or(0);
        jhat_ok = i16::from(measured) == i16::from(e2 * expected.eps);
        measured
    });
    if m.n() % 2 == 1 {
        // chirality is a multiple of the identity; the two branches differ in its sign
        let c = m.chirality_op().get(0, 0);
        residuals.push(m.chirality_op().dist(&id.scale(c)));
    }

    let max_residual = residuals.into_iter().fold(0.0, f64::max);
    let pass = measured == expected
        && lambda == Some(expected.eps_prime)
        && jhat_ok
        && (m.jhat.is_some() == s.is_multiple_of(2))
        && max_residual < tol;
    SignRow {
        signature: m.signature,
        branch: m.branch,
        s,
        expected,
        measured,
        lambda,
        jhat_square,
        max_residual,
        pass,
    }
}
