//! Spinor representations of `so(p,q)` by quadratic monomials.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::clifford::{CliffordModule, MetricTensor};
use crate::error::{Error, Result};
use crate::linalg::{
    left_mul_operator, null_space, right_mul_operator, sorted_svd, stack_rows, unvec,
    ComplexMatrix, Isometry, C64,
};

/// Generators `T^{AB}` of `so(eta)` acting on `C^dim`.
///
/// Only `A < B` is stored, in lexicographic order; other index pairs are
/// reached through antisymmetry with `T^{AA} = 0`.
#[derive(Clone, Debug)]
pub struct SoRepresentation {
    pub eta: MetricTensor,
    pub dim: usize,
    generators: Vec<ComplexMatrix>,
}

impl SoRepresentation {
    /// Generators given by `f(A, B)` for `A < B`.
    pub fn from_fn(
        eta: MetricTensor,
        dim: usize,
        mut f: impl FnMut(usize, usize) -> ComplexMatrix,
    ) -> Self {
        let n = eta.len();
        let mut generators = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for a in 0..n {
            for b in a + 1..n {
                let g = f(a, b);
                assert_eq!(g.dim(), dim, "generator dimension");
                generators.push(g);
            }
        }
        Self {
            eta,
            dim,
            generators,
        }
    }

    /// Number of metric dimensions `N`.
    pub fn rank(&self) -> usize {
        self.eta.len()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    fn index(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < b);
        let n = self.rank();
        a * (2 * n - a - 1) / 2 + (b - a - 1)
    }

    /// Stored generator `T^{AB}` for `A < B`.
    pub fn get(&self, a: usize, b: usize) -> &ComplexMatrix {
        assert!(a < b, "stored generators have A < B");
        &self.generators[self.index(a, b)]
    }

    /// `T^{AB}` for any index pair.
    pub fn generator(&self, a: usize, b: usize) -> ComplexMatrix {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => self.get(a, b).clone(),
            std::cmp::Ordering::Greater => -self.get(b, a),
            std::cmp::Ordering::Equal => ComplexMatrix::zeros(self.dim),
        }
    }

    /// `(A, B, T^{AB})` for `A < B`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &ComplexMatrix)> {
        let n = self.rank();
        (0..n)
            .flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
            .zip(self.generators.iter())
            .map(|((a, b), g)| (a, b, g))
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    /// `T~ = -T` with `eta~ = -eta`.
    pub fn negated(&self) -> Self {
        Self {
            eta: self.eta.negated(),
            dim: self.dim,
            generators: self.generators.iter().map(|g| -g).collect(),
        }
    }

    /// Same generators, different metric (used for negative controls).
    pub fn with_metric(&self, eta: MetricTensor) -> Self {
        assert_eq!(eta.len(), self.rank());
        Self {
            eta,
            dim: self.dim,
            generators: self.generators.clone(),
        }
    }

    /// Compression of every generator onto an invariant subspace.
    pub fn restrict(&self, basis: &Isometry) -> Self {
        Self {
            eta: self.eta.clone(),
            dim: basis.rank(),
            generators: self.generators.iter().map(|g| g.compress(basis)).collect(),
        }
    }

    /// Right-hand side of the `so(eta)` bracket `[T^{AB}, T^{CD}]`.
    pub fn bracket_rhs(&self, a: usize, b: usize, c: usize, d: usize) -> ComplexMatrix {
        let eta = &self.eta;
        let mut out = ComplexMatrix::zeros(self.dim);
        let terms = [
            (eta.entry(b, c), a, d),
            (-eta.entry(a, c), b, d),
            (eta.entry(b, d), c, a),
            (-eta.entry(a, d), c, b),
        ];
        for (coef, x, y) in terms {
            if coef != 0.0 && x != y {
                out += &self.generator(x, y).scale_re(coef);
            }
        }
        out
    }

    /// max-abs of `[T^{AB}, T^{CD}] - rhs` over all stored pairs.
    pub fn bracket_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (a, b, tab) in self.iter() {
            for (c, d, tcd) in self.iter() {
                let lhs = tab.commutator(tcd);
                worst = worst.max(lhs.dist(&self.bracket_rhs(a, b, c, d)));
            }
        }
        worst
    }

    /// max-abs of `[T^{AB}, X]` over all generators.
    pub fn commutation_residual(&self, x: &ComplexMatrix) -> f64 {
        self.generators
            .iter()
            .map(|g| g.commutator(x).max_abs())
            .fold(0.0, f64::max)
    }

    /// max-abs of `T1^{AB} - T2^{AB}`.
    pub fn dist(&self, other: &Self) -> f64 {
        assert_eq!(self.rank(), other.rank());
        self.generators
            .iter()
            .zip(&other.generators)
            .map(|(x, y)| x.dist(y))
            .fold(0.0, f64::max)
    }
}

/// `T^{ab} = 1/2 gamma^a gamma^b`.
pub fn so_generators(m: &CliffordModule) -> SoRepresentation {
    quadratic_monomials(m.metric(), m.dim(), &m.gammas)
}

/// Quadratic monomials of an arbitrary gamma family.
pub fn quadratic_monomials(
    eta: MetricTensor,
    dim: usize,
    gammas: &[ComplexMatrix],
) -> SoRepresentation {
    SoRepresentation::from_fn(eta, dim, |a, b| (&gammas[a] * &gammas[b]).scale_re(0.5))
}

/// Heap's algorithm; calls `visit(perm, sign)` for every permutation of `0..n`.
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize], i8)) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1i8;
    visit(&perm, sign);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            visit(&perm, sign);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// `(2^{N/2} / N!) eps_{a1..aN} T^{a1 a2} .. T^{a(N-1) aN}` by a full
/// permutation sum.
pub fn casimir_p(rep: &SoRepresentation) -> Result<ComplexMatrix> {
    let n = rep.rank();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let mut sum = ComplexMatrix::zeros(rep.dim);
    let mut factorial = 1.0_f64;
    for k in 2..=n {
        factorial *= k as f64;
    }
    for_each_permutation(n, |perm, sign| {
        let mut term = ComplexMatrix::identity(rep.dim);
        for pair in perm.chunks(2) {
            term = &term * &rep.generator(pair[0], pair[1]);
        }
        sum += &term.scale_re(f64::from(sign));
    });
    Ok(sum.scale_re(2f64.powi((n / 2) as i32) / factorial))
}

/// Chirality projectors `(I ± gamma) / 2`.
pub fn weyl_projectors(m: &CliffordModule) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = m.n();
    if n == 0 {
        return Err(Error::EmptySignature);
    }
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let id = ComplexMatrix::identity(m.dim());
    let plus = (&id + m.chirality_op()).scale_re(0.5);
    let minus = (&id - m.chirality_op()).scale_re(0.5);
    Ok((plus, minus))
}

/// The two Weyl representations, restricted to the `±1` chirality eigenspaces.
pub fn weyl_pieces(m: &CliffordModule) -> Result<(SoRepresentation, SoRepresentation)> {
    let (plus, minus) = weyl_projectors(m)?;
    let rep = so_generators(m);
    Ok((
        rep.restrict(&Isometry::range_of_projector(&plus)),
        rep.restrict(&Isometry::range_of_projector(&minus)),
    ))
}

/// An invertible `W` with `W T_A = T_B W`.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    pub w: ComplexMatrix,
    pub residual: f64,
    /// Smallest over largest singular value of `W`.
    pub condition: f64,
}

/// Smallest relative singular value accepted as invertible.
pub const INTERTWINER_RTOL: f64 = 1e-6;

/// Searches for an invertible intertwiner between two representations of the
/// same `so(eta)`. `None` means the intertwiner space has no invertible
/// element.
pub fn find_intertwiner(
    rep_a: &SoRepresentation,
    rep_b: &SoRepresentation,
) -> Result<Option<Intertwiner>> {
    if rep_a.dim != rep_b.dim {
        return Err(Error::DimensionMismatch {
            left: rep_a.dim,
            right: rep_b.dim,
        });
    }
    if rep_a.eta != rep_b.eta {
        return Err(Error::WrongSignatures(format!(
            "metrics differ: {:?} vs {:?}",
            rep_a.eta.diag, rep_b.eta.diag
        )));
    }
    let d = rep_a.dim;
    let blocks: Vec<DMatrix<C64>> = rep_a
        .generators
        .iter()
        .zip(&rep_b.generators)
        .map(|(ta, tb)| right_mul_operator(ta) - left_mul_operator(tb))
        .collect();
    let basis = if blocks.is_empty() {
        (0..d * d)
            .map(|k| {
                nalgebra::DVector::from_fn(d * d, |i, _| C64::from(f64::from(u8::from(i == k))))
            })
            .collect()
    } else {
        null_space(&stack_rows(&blocks, d * d))
    };
    if basis.is_empty() {
        return Ok(None);
    }
    // generic combination: fixed, incommensurate weights
    let combo = basis
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let t = k as f64;
            v * C64::new(
                (1.0 + t * 0.618_033_988_75).cos(),
                (t * std::f64::consts::SQRT_2).sin(),
            )
        })
        .fold(nalgebra::DVector::zeros(d * d), |acc, v| acc + v);
    let w = unvec(&combo, d);
    let (_, sv, _) = sorted_svd(w.as_nalgebra());
    let condition = if sv[0] > 0.0 {
        sv[sv.len() - 1] / sv[0]
    } else {
        0.0
    };
    if condition <= INTERTWINER_RTOL {
        return Ok(None);
    }
    let residual = rep_a
        .generators
        .iter()
        .zip(&rep_b.generators)
        .map(|(ta, tb)| (&w * ta).dist(&(tb * &w)))
        .fold(0.0, f64::max);
    Ok(Some(Intertwiner {
        w,
        residual,
        condition,
    }))
}

/// Which structure maps commute with an irreducible spinor representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructureExpectation {
    pub s: u8,
    pub has_j: bool,
    pub has_p: bool,
}

/// Table lookup: `P` iff `s` even, `J` iff `s` in `{0,1,3,4,5,7}`.
pub fn expected_structure(s: u8) -> StructureExpectation {
    let s = s % 8;
    StructureExpectation {
        s,
        has_j: !matches!(s, 2 | 6),
        has_p: s.is_multiple_of(2),
    }
}

/// Measures which structure maps survive on the irreducible pieces of a
/// module's spinor representation.
///
/// `P` counts when it commutes with the generators without being a scalar.
/// `J` counts when it commutes (antilinearly) with the generators and, for
/// even `n`, preserves each Weyl piece.
pub fn observed_structure(m: &CliffordModule, tol: f64) -> StructureExpectation {
    let rep = so_generators(m);
    let p = m.product_element();
    let p_scalar = p.dist(&ComplexMatrix::scalar(m.dim(), p.get(0, 0))) < tol;
    let has_p = !p_scalar && rep.commutation_residual(p) < tol;
    let j_commutes = rep
        .generators()
        .iter()
        .all(|g| m.j.relation_residual(g, 1.0) < tol);
    let preserves_pieces = m.n() % 2 == 1 || m.j.relation_residual(m.chirality_op(), 1.0) < tol;
    StructureExpectation {
        s: m.s(),
        has_j: j_commutes && preserves_pieces,
        has_p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Signature;
    use crate::linalg::{sigma, I};

    fn module(p: usize, q: usize) -> CliffordModule {
        CliffordModule::build_irrep(Signature::new(p, q), 1)
    }

    #[test]
    fn empty_representation() {
        let rep = so_generators(&module(0, 0));
        assert!(rep.is_empty());
        assert_eq!(rep.bracket_residual(), 0.0);
    }

    #[test]
    fn two_dimensional_generator() {
        let rep = so_generators(&module(0, 2));
        assert_eq!(rep.len(), 1);
        // 1/2 (i s1)(i s2) = -(i/2) s3
        assert!(rep.get(0, 1).dist(&sigma(3).scale(-I * 0.5)) < 1e-15);
    }

    #[test]
    fn su2_brackets() {
        let rep = so_generators(&module(0, 3));
        assert_eq!(rep.len(), 3);
        assert!(rep.bracket_residual() < 1e-12);
    }

    #[test]
    fn sign_flip_breaks_brackets() {
        let rep = so_generators(&module(0, 3));
        let mut gens = rep.generators().to_vec();
        gens[0] = -&gens[0];
        let mut it = gens.into_iter();
        let bad = SoRepresentation::from_fn(rep.eta.clone(), rep.dim, |_, _| it.next().unwrap());
        assert!(bad.bracket_residual() >= 0.5);
    }

    #[test]
    fn heap_permutations_have_correct_parity() {
        let mut count = 0;
        let mut signed_sum = 0i32;
        for_each_permutation(4, |perm, sign| {
            count += 1;
            signed_sum += i32::from(sign);
            // brute-force parity by inversion count
            let inversions = (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            assert_eq!(sign, if inversions % 2 == 0 { 1 } else { -1 });
        });
        assert_eq!(count, 24);
        assert_eq!(signed_sum, 0);
    }

    #[test]
    fn casimir_two_terms() {
        let m = module(0, 2);
        let rep = so_generators(&m);
        // T^{12} - T^{21} = 2 T^{12} = gamma^1 gamma^2
        let p = casimir_p(&rep).unwrap();
        assert!(p.dist(m.product_element()) < 1e-14);
        assert_eq!(
            casimir_p(&so_generators(&module(0, 3))).unwrap_err(),
            Error::OddDimension(3)
        );
    }

    #[test]
    fn weyl_projector_ranks() {
        let (plus, minus) = weyl_projectors(&module(1, 1)).unwrap();
        assert_eq!(Isometry::range_of_projector(&plus).rank(), 1);
        assert_eq!(Isometry::range_of_projector(&minus).rank(), 1);
        assert!((&plus + &minus).dist(&ComplexMatrix::identity(2)) < 1e-15);

        let m = module(4, 0);
        let (plus, minus) = weyl_projectors(&m).unwrap();
        assert_eq!(Isometry::range_of_projector(&plus).rank(), 2);
        assert_eq!(Isometry::range_of_projector(&minus).rank(), 2);
        assert!((&plus * &plus).dist(&plus) < 1e-14);
        let rep = so_generators(&m);
        assert!(rep.commutation_residual(&plus) < 1e-14);

        assert_eq!(
            weyl_projectors(&module(0, 0)).unwrap_err(),
            Error::EmptySignature
        );
        assert_eq!(
            weyl_projectors(&module(2, 1)).unwrap_err(),
            Error::OddDimension(3)
        );
    }

    #[test]
    fn identity_intertwiner() {
        let rep = so_generators(&module(1, 2));
        let w = find_intertwiner(&rep, &rep).unwrap().unwrap();
        assert!(w.residual < 1e-10);
        // Schur: a multiple of the identity
        let c = w.w.get(0, 0);
        assert!(w.w.dist(&ComplexMatrix::scalar(rep.dim, c)) < 1e-10);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = so_generators(&module(0, 2));
        let b = so_generators(&module(0, 4));
        assert!(matches!(
            find_intertwiner(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn structure_table_lookup() {
        assert_eq!(
            expected_structure(0),
            StructureExpectation {
                s: 0,
                has_j: true,
                has_p: true
            }
        );
        assert_eq!(
            expected_structure(2),
            StructureExpectation {
                s: 2,
                has_j: false,
                has_p: true
            }
        );
        assert_eq!(
            expected_structure(5),
            StructureExpectation {
                s: 5,
                has_j: true,
                has_p: false
            }
        );
    }

    #[test]
    fn observed_structure_matches_table() {
        for sig in Signature::all_up_to(6).into_iter().filter(|s| s.n() > 0) {
            let m = CliffordModule::build_irrep(sig, 1);
            assert_eq!(
                observed_structure(&m, 1e-9),
                expected_structure(m.s()),
                "{sig}"
            );
        }
    }
}
