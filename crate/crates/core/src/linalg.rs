//! Dense complex linear algebra used by every other module.
//!
//! Matrices are small (dimension at most a few dozen), so everything is dense
//! and allocation-happy. Residuals are always measured in the max-abs entry
//! norm. SVD and LU come from `nalgebra`; the antilinear commutant solver and
//! the exponential are implemented here.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default residual tolerance used by verification helpers.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative threshold under which a singular value counts as zero.
pub const NULL_SPACE_RTOL: f64 = 1e-9;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Square dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix({}x{})", self.dim(), self.dim())?;
        if self.dim() <= 8 {
            write!(f, "{}", self.0)?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn scalar(dim: usize, c: C64) -> Self {
        Self(DMatrix::identity(dim, dim) * c)
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    /// Builds from row-major rows. Panics on a ragged or non-square input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self::from_fn(n, |i, j| rows[i][j])
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self::from_fn(n, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn diag(entries: &[C64]) -> Self {
        Self::from_fn(entries.len(), |i, j| if i == j { entries[i] } else { ZERO })
    }

    /// Wraps a square nalgebra matrix.
    pub fn from_nalgebra(m: DMatrix<C64>) -> Self {
        assert!(m.is_square(), "matrix must be square");
        Self(m)
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.0[(i, j)] = v;
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self(&self.0 * c)
    }

    pub fn scale_re(&self, c: f64) -> Self {
        Self(&self.0 * C64::new(c, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn dist(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).norm()))
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// `{self, other}`
    pub fn anticommutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 + &other.0 * &self.0)
    }

    /// max-abs of `U U† - I`.
    pub fn unitarity_residual(&self) -> f64 {
        (self * &self.adjoint()).dist(&Self::identity(self.dim()))
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.dist(&self.adjoint())
    }

    /// Determinant via LU factorization.
    pub fn det(&self) -> C64 {
        self.0.clone().lu().determinant()
    }

    pub fn inverse(&self) -> Result<Self> {
        self.0
            .clone()
            .try_inverse()
            .map(Self)
            .ok_or(Error::Singular)
    }

    /// Compression `B† A B` onto the column span of an isometry `B`.
    pub fn compress(&self, basis: &Isometry) -> Self {
        Self(basis.0.adjoint() * &self.0 * &basis.0)
    }

    /// The top-left `k x k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        Self(self.0.view((0, 0), (k, k)).into_owned())
    }

    /// max-abs over entries outside the two diagonal blocks split at `k`.
    pub fn off_block_norm(&self, k: usize) -> f64 {
        let n = self.dim();
        let mut m = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                if (i < k) != (j < k) {
                    m = m.max(self.0[(i, j)].norm());
                }
            }
        }
        m
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(self.0 * rhs.0)
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: C64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale_re(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(self.0 + rhs.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.0 += &rhs.0;
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(self.0 - rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0)
    }
}

/// Matrix with orthonormal columns, used to restrict operators to a subspace.
#[derive(Clone, Debug)]
pub struct Isometry(DMatrix<C64>);

impl Isometry {
    pub fn rank(&self) -> usize {
        self.0.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.nrows()
    }

    /// Orthonormal basis for the range of an orthogonal projector.
    pub fn range_of_projector(proj: &ComplexMatrix) -> Self {
        let (u, sv, _) = sorted_svd(proj.as_nalgebra());
        let rank = sv.iter().filter(|&&s| s > 0.5).count();
        Self(u.columns(0, rank).into_owned())
    }
}

/// Kronecker product, first factor major: entry `(i*dB + k, j*dB + l) = A[i,j] B[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let db = b.dim();
    ComplexMatrix::from_fn(a.dim() * db, |r, c| {
        a.get(r / db, c / db) * b.get(r % db, c % db)
    })
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.dim();
    // infinity norm
    let norm = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).norm()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale_re(0.5_f64.powi(squarings as i32));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=40 {
        term = (&term * &scaled).scale_re(1.0 / k as f64);
        sum += &term;
        if term.max_abs() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// Antilinear operator `v -> K conj(v)`.
///
/// Composition of two antilinear maps is linear: `(J1 J2)(v) = K1 conj(K2) v`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntilinearOp {
    k: ComplexMatrix,
}

impl AntilinearOp {
    pub fn new(k: ComplexMatrix) -> Self {
        Self { k }
    }

    /// Plain complex conjugation on `C^dim`.
    pub fn conjugation(dim: usize) -> Self {
        Self::new(ComplexMatrix::identity(dim))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let conj = DVector::from_iterator(v.len(), v.iter().map(|z| z.conj()));
        (self.k.as_nalgebra() * conj).iter().copied().collect()
    }

    /// The linear operator `J J' `.
    pub fn compose(&self, other: &AntilinearOp) -> ComplexMatrix {
        &self.k * &other.k.conj()
    }

    /// `J^2` as a linear operator.
    pub fn square(&self) -> ComplexMatrix {
        self.compose(self)
    }

    /// Antilinear map `J A` for linear `A`.
    pub fn after_linear(&self, a: &ComplexMatrix) -> AntilinearOp {
        Self::new(&self.k * &a.conj())
    }

    /// Antilinear map `A J` for linear `A`.
    pub fn before_linear(&self, a: &ComplexMatrix) -> AntilinearOp {
        Self::new(a * &self.k)
    }

    /// `J A J^{-1}` for unitary `K`.
    pub fn conjugate_linear(&self, a: &ComplexMatrix) -> ComplexMatrix {
        &(&self.k * &a.conj()) * &self.k.adjoint()
    }

    /// max-abs of `J A - sign A J`.
    pub fn relation_residual(&self, a: &ComplexMatrix, sign: f64) -> f64 {
        (&self.k * &a.conj()).dist(&(a * &self.k).scale_re(sign))
    }

    pub fn tensor(&self, other: &AntilinearOp) -> AntilinearOp {
        Self::new(kron(&self.k, &other.k))
    }

    pub fn scale(&self, c: C64) -> AntilinearOp {
        Self::new(self.k.scale(c))
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.k.unitarity_residual()
    }
}

/// Solution of the antilinear commutant problem `K conj(g_a) = sign_a g_a K`.
#[derive(Clone, Debug)]
pub struct CommutantSolution {
    pub op: AntilinearOp,
    /// Sign `c` with `K conj(K) = c I`.
    pub square_sign: i8,
    pub residual: f64,
}

/// Finds the unique (up to phase) unitary antilinear map with the given
/// commutation signs against `gammas`.
pub fn solve_antilinear_commutant(
    dim: usize,
    gammas: &[ComplexMatrix],
    signs: &[i8],
) -> Result<CommutantSolution> {
    assert_eq!(gammas.len(), signs.len(), "one sign per generator");
    for g in gammas {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: g.dim(),
                right: dim,
            });
        }
    }
    let blocks: Vec<DMatrix<C64>> = gammas
        .iter()
        .zip(signs)
        .map(|(g, &s)| {
            let gc = g.conj();
            // K gc - s g K, acting on row-major vec(K)
            let left = right_mul_operator(&gc);
            let right = left_mul_operator(g);
            left - right * C64::new(f64::from(s), 0.0)
        })
        .collect();
    let basis = null_space(&stack_rows(&blocks, dim * dim));
    match basis.len() {
        0 => Err(Error::EmptySolutionSpace),
        1 => {
            let k = unvec(&basis[0], dim);
            let u = polar_unitary(&k)?;
            let op = AntilinearOp::new(u);
            let sq = op.square();
            let square_sign = if sq.dist(&ComplexMatrix::identity(dim))
                <= sq.dist(&ComplexMatrix::identity(dim).scale_re(-1.0))
            {
                1
            } else {
                -1
            };
            let residual = gammas
                .iter()
                .zip(signs)
                .map(|(g, &s)| op.relation_residual(g, f64::from(s)))
                .fold(0.0, f64::max);
            Ok(CommutantSolution {
                op,
                square_sign,
                residual,
            })
        }
        d => Err(Error::ReducibleInput(d)),
    }
}

/// Unitary factor `U` of the polar decomposition `A = U H`.
pub fn polar_unitary(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    if a.dim() == 0 {
        return Ok(a.clone());
    }
    let (u, sv, vt) = sorted_svd(a.as_nalgebra());
    let smax = sv[0];
    let smin = sv[sv.len() - 1];
    if smax == 0.0 || smin <= NULL_SPACE_RTOL * smax {
        return Err(Error::Singular);
    }
    Ok(ComplexMatrix(u * vt))
}

/// Orthonormal null-space basis of a (possibly rectangular) matrix.
///
/// The first returned vector is the one whose leading entry has the largest
/// modulus; every vector is phase-normalized so that its first nonzero entry
/// is positive real.
pub fn null_space(m: &DMatrix<C64>) -> Vec<DVector<C64>> {
    let cols = m.ncols();
    if cols == 0 {
        return Vec::new();
    }
    let padded = if m.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let (_, sv, vt) = sorted_svd(&padded);
    let smax = sv.first().copied().unwrap_or(0.0);
    let mut basis: Vec<DVector<C64>> = sv
        .iter()
        .enumerate()
        .filter(|(_, &s)| smax == 0.0 || s < NULL_SPACE_RTOL * smax)
        .map(|(i, _)| phase_normalize(vt.row(i).adjoint()))
        .collect();
    basis.sort_by(|a, b| b[0].norm().total_cmp(&a[0].norm()));
    basis
}

/// SVD with singular values in non-increasing order.
pub(crate) fn sorted_svd(m: &DMatrix<C64>) -> (DMatrix<C64>, Vec<f64>, DMatrix<C64>) {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u_sorted = DMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
    let vt_sorted = DMatrix::from_fn(order.len(), vt.ncols(), |r, c| vt[(order[r], c)]);
    (u_sorted, sv, vt_sorted)
}

fn phase_normalize(v: DVector<C64>) -> DVector<C64> {
    let scale = v.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    match v.iter().find(|z| z.norm() > 1e-8 * scale) {
        Some(lead) => {
            let phase = lead.conj() / lead.norm();
            v * phase
        }
        None => v,
    }
}

/// Operator `vec(K) -> vec(K B)` on row-major vectorizations.
pub(crate) fn right_mul_operator(b: &ComplexMatrix) -> DMatrix<C64> {
    let d = b.dim();
    DMatrix::from_fn(d * d, d * d, |row, col| {
        let (i, j) = (row / d, row % d);
        let (i2, l) = (col / d, col % d);
        if i == i2 {
            b.get(l, j)
        } else {
            ZERO
        }
    })
}

/// Operator `vec(K) -> vec(A K)` on row-major vectorizations.
pub(crate) fn left_mul_operator(a: &ComplexMatrix) -> DMatrix<C64> {
    let d = a.dim();
    DMatrix::from_fn(d * d, d * d, |row, col| {
        let (i, j) = (row / d, row % d);
        let (l, j2) = (col / d, col % d);
        if j == j2 {
            a.get(i, l)
        } else {
            ZERO
        }
    })
}

pub(crate) fn stack_rows(blocks: &[DMatrix<C64>], cols: usize) -> DMatrix<C64> {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, 0), (b.nrows(), cols)).copy_from(b);
        at += b.nrows();
    }
    out
}

pub(crate) fn unvec(v: &DVector<C64>, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, |i, j| v[i * d + j])
}

/// Orthonormal basis (modified Gram-Schmidt, two passes) of a real span of
/// complex matrices viewed as vectors in `R^{2 d^2}`.
#[derive(Default, Clone, Debug)]
pub struct RealSpan {
    basis: Vec<Vec<f64>>,
}

impl RealSpan {
    pub fn flatten(m: &ComplexMatrix) -> Vec<f64> {
        m.as_nalgebra().iter().flat_map(|z| [z.re, z.im]).collect()
    }

    fn residual(&self, mut v: Vec<f64>) -> Vec<f64> {
        for _ in 0..2 {
            for e in &self.basis {
                let dot: f64 = v.iter().zip(e).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(e).for_each(|(x, y)| *x -= dot * y);
            }
        }
        v
    }

    pub fn push(&mut self, m: &ComplexMatrix) {
        let v = Self::flatten(m);
        let scale = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let r = self.residual(v);
        let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-10 * scale.max(1.0) {
            self.basis.push(r.into_iter().map(|x| x / norm).collect());
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// max-abs entry of the component orthogonal to the span.
    pub fn distance(&self, m: &ComplexMatrix) -> f64 {
        let r = self.residual(Self::flatten(m));
        r.chunks(2)
            .map(|z| (z[0] * z[0] + z[1] * z[1]).sqrt())
            .fold(0.0, f64::max)
    }
}

/// Pauli matrices.
pub fn sigma(k: usize) -> ComplexMatrix {
    match k {
        0 => ComplexMatrix::identity(2),
        1 => ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]),
        2 => ComplexMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]),
        3 => ComplexMatrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]]),
        _ => panic!("no Pauli matrix sigma_{k}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn lcg_matrix(dim: usize, seed: u64, scale: f64) -> ComplexMatrix {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        ComplexMatrix::from_fn(dim, |_, _| c(next() * scale, next() * scale))
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(k, ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_sigma1_sigma3_blocks() {
        let k = kron(&sigma(1), &sigma(3));
        let z = ComplexMatrix::zeros(2);
        let s3 = sigma(3);
        // [[0, s3], [s3, 0]]
        let expected = ComplexMatrix::from_fn(4, |i, j| {
            let block = match (i / 2, j / 2) {
                (0, 1) | (1, 0) => &s3,
                _ => &z,
            };
            block.get(i % 2, j % 2)
        });
        assert_eq!(k, expected);
    }

    #[test]
    fn kron_mixed_product() {
        let (a, b, cc, d) = (
            lcg_matrix(2, 1, 1.0),
            lcg_matrix(2, 2, 1.0),
            lcg_matrix(2, 3, 1.0),
            lcg_matrix(2, 4, 1.0),
        );
        // brute-force: multiply the two 4x4 products entry by entry
        let lhs = &kron(&a, &b) * &kron(&cc, &d);
        let ac = &a * &cc;
        let bd = &b * &d;
        let mut rhs = ComplexMatrix::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        rhs.set(i * 2 + k, j * 2 + l, ac.get(i, j) * bd.get(k, l));
                    }
                }
            }
        }
        assert!(lhs.dist(&rhs) < 1e-12);
    }

    #[test]
    fn expm_zero_is_identity() {
        let e = expm(&ComplexMatrix::zeros(3)).unwrap();
        assert_eq!(e, ComplexMatrix::identity(3));
    }

    #[test]
    fn expm_quarter_turn_of_involution() {
        // gamma^2 = I => exp(i pi gamma / 4) = (I + i gamma)/sqrt(2)
        let g = kron(&sigma(3), &sigma(1));
        let e = expm(&g.scale(I * std::f64::consts::FRAC_PI_4)).unwrap();
        let closed = (&ComplexMatrix::identity(4) + &g.scale(I)).scale_re(0.5_f64.sqrt());
        assert!(e.dist(&closed) < 1e-13);
    }

    #[test]
    fn expm_matches_series_oracle() {
        // Unscaled Taylor series, summed far past convergence for a small norm.
        let a = lcg_matrix(3, 9, 0.3);
        let mut oracle = ComplexMatrix::identity(3);
        let mut term = ComplexMatrix::identity(3);
        for k in 1..60 {
            term = (&term * &a).scale_re(1.0 / k as f64);
            oracle += &term;
        }
        assert!(expm(&a).unwrap().dist(&oracle) < 1e-13);
    }

    #[test]
    fn expm_inverse_pair() {
        for seed in 0..5 {
            let a = lcg_matrix(4, seed, 2.0);
            let p = &expm(&a).unwrap() * &expm(&-&a).unwrap();
            assert!(p.dist(&ComplexMatrix::identity(4)) < 1e-12);
        }
    }

    #[test]
    fn expm_rejects_nan() {
        let mut a = ComplexMatrix::zeros(2);
        a.set(0, 1, c(f64::NAN, 0.0));
        assert_eq!(expm(&a), Err(Error::NonFinite));
    }

    #[test]
    fn polar_examples() {
        let two = ComplexMatrix::identity(2).scale_re(2.0);
        assert!(
            polar_unitary(&two)
                .unwrap()
                .dist(&ComplexMatrix::identity(2))
                < 1e-14
        );

        let u = expm(&lcg_matrix(3, 5, 1.0).scale(I)).unwrap();
        let herm_gen = &u + &u.adjoint();
        let unitary = expm(&herm_gen.scale(I)).unwrap();
        assert!(polar_unitary(&unitary).unwrap().dist(&unitary) < 1e-12);

        let d = ComplexMatrix::diag(&[c(2.0, 0.0), c(0.0, 3.0)]);
        let expected = ComplexMatrix::diag(&[ONE, I]);
        assert!(polar_unitary(&d).unwrap().dist(&expected) < 1e-14);
    }

    #[test]
    fn polar_rejects_singular() {
        let m = ComplexMatrix::diag(&[ONE, ZERO]);
        assert_eq!(polar_unitary(&m), Err(Error::Singular));
    }

    #[test]
    fn commutant_scalar_case() {
        // gamma = i on C^1 with sign -1: plain conjugation
        let sol = solve_antilinear_commutant(1, &[ComplexMatrix::scalar(1, I)], &[-1]).unwrap();
        assert!(sol.op.matrix().dist(&ComplexMatrix::identity(1)) < 1e-14);
        assert_eq!(sol.square_sign, 1);
    }

    #[test]
    fn commutant_quaternionic_case() {
        let gammas: Vec<_> = (1..=3).map(|k| sigma(k).scale(I)).collect();
        // all three signs -1 admit no solution: K would commute with s1, s3 and anticommute with s2
        assert_eq!(
            solve_antilinear_commutant(2, &gammas, &[-1, -1, -1]).unwrap_err(),
            Error::EmptySolutionSpace
        );
        let sol = solve_antilinear_commutant(2, &gammas, &[1, 1, 1]).unwrap();
        assert_eq!(sol.square_sign, -1);
        // K proportional to sigma_2: entries (0,0) and (1,1) vanish
        let k = sol.op.matrix();
        assert!(k.get(0, 0).norm() < 1e-12 && k.get(1, 1).norm() < 1e-12);
        let ratio = k.get(0, 1) / sigma(2).get(0, 1);
        assert!(k.dist(&sigma(2).scale(ratio)) < 1e-12);
        assert!(sol.residual < 1e-12);
        // phase convention: first nonzero entry positive real
        assert!(k.get(0, 1).im.abs() < 1e-12 && k.get(0, 1).re > 0.0);
    }

    #[test]
    fn commutant_reports_reducible_input() {
        let g = sigma(0).scale(I);
        let doubled = vec![g];
        let err = solve_antilinear_commutant(2, &doubled, &[-1]).unwrap_err();
        assert_eq!(err, Error::ReducibleInput(4));
        assert_eq!(err.to_string(), "solution space dimension 4");

        // two copies of the quaternionic module
        let gammas: Vec<_> = (1..=3)
            .map(|k| kron(&ComplexMatrix::identity(2), &sigma(k).scale(I)))
            .collect();
        let err = solve_antilinear_commutant(4, &gammas, &[1, 1, 1]).unwrap_err();
        assert_eq!(err, Error::ReducibleInput(4));
    }

    #[test]
    fn commutant_empty_for_wrong_signs() {
        // A K = -A K' with A = identity has no nonzero solution
        let err = solve_antilinear_commutant(1, &[ComplexMatrix::identity(1)], &[-1]).unwrap_err();
        assert_eq!(err, Error::EmptySolutionSpace);
    }

    #[test]
    fn antilinear_composition_rule() {
        let k1 = expm(&lcg_matrix(2, 11, 1.0)).unwrap();
        let k2 = expm(&lcg_matrix(2, 12, 1.0)).unwrap();
        let (j1, j2) = (AntilinearOp::new(k1.clone()), AntilinearOp::new(k2.clone()));
        let v = vec![c(0.3, -1.0), c(2.0, 0.5)];
        let direct = j1.apply(&j2.apply(&v));
        let composed = j1.compose(&j2);
        for (i, d) in direct.iter().enumerate() {
            let lin: C64 = (0..2).map(|j| composed.get(i, j) * v[j]).sum();
            assert!((lin - d).norm() < 1e-12);
        }
    }

    #[test]
    fn null_space_phase_and_order() {
        // rows kill e0 component only
        let m = DMatrix::from_row_slice(1, 2, &[ONE, ZERO]);
        let ns = null_space(&m);
        assert_eq!(ns.len(), 1);
        assert!(ns[0][0].norm() < 1e-14);
        assert!((ns[0][1] - ONE).norm() < 1e-14);
    }

    #[test]
    fn real_span_projection_oracle() {
        let mut span = RealSpan::default();
        span.push(&sigma(1));
        span.push(&sigma(3));
        assert!(span.distance(&(&sigma(1) * 2.0 - sigma(3))) < 1e-14);
        // i s1 is outside the real span of s1 and s3
        assert!((span.distance(&sigma(1).scale(I)) - 1.0).abs() < 1e-14);
    }
}
