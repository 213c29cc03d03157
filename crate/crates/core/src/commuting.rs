//! Commuting actions of two Clifford algebras on a tensor product, and the
//! orthogonal Lie algebra generated by their mixed quadratic monomials.
//!
//! With `Gamma1^a = gamma1^a ⊗ 1` and `Gamma2^alpha = 1 ⊗ gamma2^alpha` the
//! generators
//!
//! ```text
//! T1^{ab}    = 1/2 Gamma1^a Gamma1^b
//! T2^{ab}    = 1/2 Gamma2^a Gamma2^b
//! U^{a beta} = 1/2 Gamma1^a Gamma2^beta
//! ```
//!
//! assemble into `so(q1 + p2, p1 + q2)` over the metric `(-eta1) ⊕ eta2`:
//! `T^{ab} = -T1^{ab}`, `T^{a, n1+beta} = U^{a beta}`,
//! `T^{n1+alpha, n1+beta} = T2^{alpha beta}`. Factor order matters: the sign
//! flip always lands on the first factor.

use serde::Serialize;

use crate::clifford::{
    clifford_relation_residual, i_pow, ordered_product, CliffordModule, MetricTensor, Signature,
};
use crate::error::{Error, Result};
use crate::liealg::{quadratic_monomials, SoRepresentation};
use crate::linalg::{expm, kron, sigma, AntilinearOp, ComplexMatrix, RealSpan, C64, I};

/// Two irreducible Clifford modules acting on `C^{k1} ⊗ C^{k2}`.
#[derive(Clone, Debug)]
pub struct CommutingAction {
    pub mod1: CliffordModule,
    pub mod2: CliffordModule,
    /// `gamma1^a ⊗ 1`
    pub gamma1: Vec<ComplexMatrix>,
    /// `1 ⊗ gamma2^alpha`
    pub gamma2: Vec<ComplexMatrix>,
}

impl CommutingAction {
    pub fn build(sig1: Signature, branch1: i8, sig2: Signature, branch2: i8) -> Self {
        Self::from_modules(
            CliffordModule::build_irrep(sig1, branch1),
            CliffordModule::build_irrep(sig2, branch2),
        )
    }

    pub fn from_modules(mod1: CliffordModule, mod2: CliffordModule) -> Self {
        let id1 = ComplexMatrix::identity(mod1.dim());
        let id2 = ComplexMatrix::identity(mod2.dim());
        let gamma1 = mod1.gammas.iter().map(|g| kron(g, &id2)).collect();
        let gamma2 = mod2.gammas.iter().map(|g| kron(&id1, g)).collect();
        Self {
            mod1,
            mod2,
            gamma1,
            gamma2,
        }
    }

    /// The same two modules in the opposite order.
    pub fn swapped(&self) -> Self {
        Self::from_modules(self.mod2.clone(), self.mod1.clone())
    }

    pub fn dim(&self) -> usize {
        self.mod1.dim() * self.mod2.dim()
    }

    pub fn n1(&self) -> usize {
        self.mod1.n()
    }

    pub fn n2(&self) -> usize {
        self.mod2.n()
    }

    /// `(q1 + p2, p1 + q2)`
    pub fn product_signature(&self) -> Signature {
        let (s1, s2) = (self.mod1.signature, self.mod2.signature);
        Signature::new(s1.q + s2.p, s1.p + s2.q)
    }

    /// `(s2 - s1) mod 8`, the `s` of the product signature.
    pub fn s(&self) -> u8 {
        self.product_signature().s()
    }

    /// `(-eta1) ⊕ eta2`
    pub fn product_metric(&self) -> MetricTensor {
        self.mod1.metric().negated().direct_sum(&self.mod2.metric())
    }

    /// max-abs of `[Gamma1^a, Gamma2^alpha]`.
    pub fn commutation_residual(&self) -> f64 {
        self.gamma1
            .iter()
            .flat_map(|a| self.gamma2.iter().map(move |b| a.commutator(b).max_abs()))
            .fold(0.0, f64::max)
    }

    /// Clifford relations of each family separately.
    pub fn family_residual(&self) -> f64 {
        clifford_relation_residual(&self.gamma1, &self.mod1.metric()).max(
            clifford_relation_residual(&self.gamma2, &self.mod2.metric()),
        )
    }
}

/// The three generator families and their assembly into one `so` algebra.
#[derive(Clone, Debug)]
pub struct ProductGenerators {
    pub t1: SoRepresentation,
    pub t2: SoRepresentation,
    /// `U^{a beta}` stored row-major, `n1 x n2`.
    u: Vec<ComplexMatrix>,
    n2: usize,
    pub combined: SoRepresentation,
}

impl ProductGenerators {
    /// Builds the generators from two gamma families acting on the same
    /// space. The families are not required to commute, so this also serves
    /// negative controls.
    pub fn from_families(
        eta1: MetricTensor,
        gamma1: &[ComplexMatrix],
        eta2: MetricTensor,
        gamma2: &[ComplexMatrix],
        dim: usize,
    ) -> Self {
        let (n1, n2) = (gamma1.len(), gamma2.len());
        let t1 = quadratic_monomials(eta1.clone(), dim, gamma1);
        let t2 = quadratic_monomials(eta2.clone(), dim, gamma2);
        let u: Vec<ComplexMatrix> = gamma1
            .iter()
            .flat_map(|a| gamma2.iter().map(move |b| (a * b).scale_re(0.5)))
            .collect();
        let metric = eta1.negated().direct_sum(&eta2);
        let combined = SoRepresentation::from_fn(metric, dim, |x, y| match (x < n1, y < n1) {
            (true, true) => -t1.get(x, y),
            (true, false) => u[x * n2 + (y - n1)].clone(),
            (false, false) => t2.get(x - n1, y - n1).clone(),
            (false, true) => unreachable!("x < y"),
        });
        Self {
            t1,
            t2,
            u,
            n2,
            combined,
        }
    }

    /// `U^{a beta}`
    pub fn u(&self, a: usize, beta: usize) -> &ComplexMatrix {
        &self.u[a * self.n2 + beta]
    }

    pub fn n1(&self) -> usize {
        self.t1.rank()
    }

    pub fn n2(&self) -> usize {
        self.n2
    }
}

pub fn product_so_generators(ca: &CommutingAction) -> ProductGenerators {
    ProductGenerators::from_families(
        ca.mod1.metric(),
        &ca.gamma1,
        ca.mod2.metric(),
        &ca.gamma2,
        ca.dim(),
    )
}

/// Bracket residual of the combined generators against `eta1 ⊕ eta2`, i.e.
/// without the sign flip on the first factor. Expected to be large.
pub fn unflipped_metric_residual(ca: &CommutingAction) -> f64 {
    let metric = ca.mod1.metric().direct_sum(&ca.mod2.metric());
    product_so_generators(ca)
        .combined
        .with_metric(metric)
        .bracket_residual()
}

/// Per-family residuals of the five bracket identities.
#[derive(Clone, Debug, Serialize)]
pub struct BracketTableReport {
    pub t1_t1: f64,
    pub t2_t2: f64,
    pub t1_u: f64,
    pub u_t2: f64,
    pub u_u: f64,
}

impl BracketTableReport {
    pub fn max(&self) -> f64 {
        [self.t1_t1, self.t2_t2, self.t1_u, self.u_t2, self.u_u]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn families(&self) -> [(&'static str, f64); 5] {
        [
            ("T1-T1", self.t1_t1),
            ("T2-T2", self.t2_t2),
            ("T1-U", self.t1_u),
            ("U-T2", self.u_t2),
            ("U-U", self.u_u),
        ]
    }
}

pub fn verify_bracket_table(ca: &CommutingAction) -> BracketTableReport {
    verify_bracket_families(&product_so_generators(ca))
}

/// Checks
///
/// ```text
/// [T1^{ab}, U^{c d}]  = eta1^{bc} U^{a d} - eta1^{ac} U^{b d}
/// [U^{a b}, T2^{c d}] = eta2^{bc} U^{a d} - eta2^{bd} U^{a c}
/// [U^{a b}, U^{c d}]  = eta1^{ac} T2^{b d} - eta2^{b d} T1^{c a}
/// ```
///
/// together with the `so(eta1)` and `so(eta2)` brackets of each factor.
pub fn verify_bracket_families(pg: &ProductGenerators) -> BracketTableReport {
    let (n1, n2) = (pg.n1(), pg.n2());
    let eta1 = &pg.t1.eta;
    let eta2 = &pg.t2.eta;

    let mut t1_u = 0.0_f64;
    for (a, b, t) in pg.t1.iter() {
        for c in 0..n1 {
            for d in 0..n2 {
                let lhs = t.commutator(pg.u(c, d));
                let rhs =
                    &pg.u(a, d).scale_re(eta1.entry(b, c)) - &pg.u(b, d).scale_re(eta1.entry(a, c));
                t1_u = t1_u.max(lhs.dist(&rhs));
            }
        }
    }

    let mut u_t2 = 0.0_f64;
    for a in 0..n1 {
        for b in 0..n2 {
            for (c, d, t) in pg.t2.iter() {
                let lhs = pg.u(a, b).commutator(t);
                let rhs =
                    &pg.u(a, d).scale_re(eta2.entry(b, c)) - &pg.u(a, c).scale_re(eta2.entry(b, d));
                u_t2 = u_t2.max(lhs.dist(&rhs));
            }
        }
    }

    let mut u_u = 0.0_f64;
    for a in 0..n1 {
        for b in 0..n2 {
            for c in 0..n1 {
                for d in 0..n2 {
                    let lhs = pg.u(a, b).commutator(pg.u(c, d));
                    let rhs = &pg.t2.generator(b, d).scale_re(eta1.entry(a, c))
                        - &pg.t1.generator(c, a).scale_re(eta2.entry(b, d));
                    u_u = u_u.max(lhs.dist(&rhs));
                }
            }
        }
    }

    BracketTableReport {
        t1_t1: pg.t1.bracket_residual(),
        t2_t2: pg.t2.bracket_residual(),
        t1_u,
        u_t2,
        u_u,
    }
}

/// Outcome of the even-factor equivalence construction.
#[derive(Clone, Debug, Serialize)]
pub struct EvenEquivalenceReport {
    /// Clifford relations of the reference gammas `i gamma1^a ⊗ 1`, `gamma1 ⊗ gamma2^beta`.
    pub reference_clifford_residual: f64,
    /// `V S V^{-1}` against the product generators.
    pub generator_residual: f64,
    /// Closed form of `V` against `expm(i pi gamma1 / 4) ⊗ 1`.
    pub v_expm_residual: f64,
    pub v_unitarity_residual: f64,
    /// `V P V^{-1} - P` for the product of the reference gammas.
    pub p_invariance_residual: f64,
    /// `P - (-1)^{n1/2} P1 ⊗ P2`, only when `n2` is even too.
    pub p_formula_residual: Option<f64>,
}

impl EvenEquivalenceReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.reference_clifford_residual,
            self.generator_residual,
            self.v_expm_residual,
            self.v_unitarity_residual,
            self.p_invariance_residual,
            self.p_formula_residual.unwrap_or(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Conjugates the quadratic monomials of the Dirac module
/// `{i gamma1^a ⊗ 1, gamma1 ⊗ gamma2^beta}` by `V = exp(i pi gamma1/4) ⊗ 1`
/// and compares with the product generators.
pub fn equivalence_even(ca: &CommutingAction) -> Result<EvenEquivalenceReport> {
    let n1 = ca.n1();
    if n1 % 2 == 1 {
        return Err(Error::OddDimension(n1));
    }
    let chi1 = ca.mod1.chirality_op();
    let k1 = ca.mod1.dim();
    let id1 = ComplexMatrix::identity(k1);
    let id2 = ComplexMatrix::identity(ca.mod2.dim());

    let mut reference: Vec<ComplexMatrix> = ca
        .mod1
        .gammas
        .iter()
        .map(|g| kron(&g.scale(I), &id2))
        .collect();
    reference.extend(ca.mod2.gammas.iter().map(|g| kron(chi1, g)));
    let metric = ca.product_metric();
    let reference_clifford_residual = clifford_relation_residual(&reference, &metric);

    let v1 = (&id1 + &chi1.scale(I)).scale_re(std::f64::consts::FRAC_1_SQRT_2);
    let v = kron(&v1, &id2);
    let v_oracle = kron(&expm(&chi1.scale(I * std::f64::consts::FRAC_PI_4))?, &id2);
    let v_inv = v.adjoint();

    let s = quadratic_monomials(metric, ca.dim(), &reference);
    let target = product_so_generators(ca).combined;
    let generator_residual = s
        .generators()
        .iter()
        .zip(target.generators())
        .map(|(sg, tg)| (&(&v * sg) * &v_inv).dist(tg))
        .fold(0.0, f64::max);

    let p_ref = ordered_product(ca.dim(), &reference);
    let p_invariance_residual = (&(&v * &p_ref) * &v_inv).dist(&p_ref);
    let p_formula_residual = ca.n2().is_multiple_of(2).then(|| {
        let sign = if (n1 / 2).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        p_ref.dist(&kron(ca.mod1.product_element(), ca.mod2.product_element()).scale_re(sign))
    });

    Ok(EvenEquivalenceReport {
        reference_clifford_residual,
        generator_residual,
        v_expm_residual: v.dist(&v_oracle),
        v_unitarity_residual: v.unitarity_residual(),
        p_invariance_residual,
        p_formula_residual,
    })
}

/// Outcome of the odd-odd doubling construction.
#[derive(Clone, Debug, Serialize)]
pub struct OddOddReport {
    pub doubled_clifford_residual: f64,
    /// Largest entry of any quadratic monomial outside the two `t`-blocks.
    pub off_block: f64,
    /// Upper-left block of the doubled monomials against the product generators.
    pub generator_residual: f64,
    /// Upper-left block of the doubled `P` against `(-1)^{(n1-1)/2} P1 ⊗ P2`.
    pub p_block_residual: f64,
}

impl OddOddReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.doubled_clifford_residual,
            self.off_block,
            self.generator_residual,
            self.p_block_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Builds the Dirac module on `C^2 ⊗ C^{k1} ⊗ C^{k2}` with gammas
/// `[[0, g1],[-g1, 0]] ⊗ 1` and `[[0,1],[1,0]] ⊗ g2`, and checks that its
/// monomials restricted to the `t = +1` block are the product generators.
pub fn equivalence_odd_odd(ca: &CommutingAction) -> Result<OddOddReport> {
    let (n1, n2) = (ca.n1(), ca.n2());
    if n1 % 2 == 0 {
        return Err(Error::WrongSignatures(format!("n1 = {n1} is even")));
    }
    if n2 % 2 == 0 {
        return Err(Error::WrongSignatures(format!("n2 = {n2} is even")));
    }
    let i_sigma2 = sigma(2).scale(I); // [[0,1],[-1,0]]
    let sigma1 = sigma(1);
    let half = ca.dim();

    let mut doubled: Vec<ComplexMatrix> = ca.gamma1.iter().map(|g| kron(&i_sigma2, g)).collect();
    doubled.extend(ca.gamma2.iter().map(|g| kron(&sigma1, g)));
    let metric = ca.product_metric();
    let doubled_clifford_residual = clifford_relation_residual(&doubled, &metric);

    let monomials = quadratic_monomials(metric, 2 * half, &doubled);
    let target = product_so_generators(ca).combined;
    let off_block = monomials
        .generators()
        .iter()
        .map(|g| g.off_block_norm(half))
        .fold(0.0, f64::max);
    let generator_residual = monomials
        .generators()
        .iter()
        .zip(target.generators())
        .map(|(g, t)| g.leading_block(half).dist(t))
        .fold(0.0, f64::max);

    let p_doubled = ordered_product(2 * half, &doubled);
    let sign = if ((n1 - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let p_formula = kron(ca.mod1.product_element(), ca.mod2.product_element()).scale_re(sign);
    let p_block_residual = p_doubled
        .leading_block(half)
        .dist(&p_formula)
        .max(p_doubled.off_block_norm(half));

    Ok(OddOddReport {
        doubled_clifford_residual,
        off_block,
        generator_residual,
        p_block_residual,
    })
}

/// Product element of the combined representation.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub p: ComplexMatrix,
    pub commutation_residual: f64,
    /// `P^2 - (-1)^{s(s+1)/2}`
    pub square_residual: f64,
}

/// `P = (-1)^{n1/2} P1 ⊗ P2` (even-even) or `(-1)^{(n1-1)/2} P1 ⊗ P2`
/// (odd-odd).
pub fn tensor_product_element(ca: &CommutingAction) -> Result<TensorProduct> {
    let s = ca.s();
    if s % 2 == 1 {
        return Err(Error::OddSignature(s));
    }
    let n1 = ca.n1();
    let half_n1 = if n1.is_multiple_of(2) {
        n1 / 2
    } else {
        (n1 - 1) / 2
    };
    let sign = if half_n1 % 2 == 0 { 1.0 } else { -1.0 };
    let p = kron(ca.mod1.product_element(), ca.mod2.product_element()).scale_re(sign);
    let rep = product_so_generators(ca).combined;
    let s_us = usize::from(s);
    let target_sq = i_pow(2 * (s_us * (s_us + 1) / 2));
    let square_residual = (&p * &p).dist(&ComplexMatrix::scalar(ca.dim(), target_sq));
    Ok(TensorProduct {
        commutation_residual: rep.commutation_residual(&p),
        square_residual,
        p,
    })
}

/// Which factor structure maps make up the tensor real structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RealStructureCase {
    /// `J1 ⊗ J2`, both factors even.
    EvenEven,
    /// `J1 ⊗ J2`, both odd with `s` in `{0, 4}`.
    OddOdd,
    /// `J1 ⊗ J2`, factor 1 even, `s2` in `{3, 7}`.
    EvenOdd,
    /// `J^1 ⊗ J2`, factor 1 even, `s2` in `{1, 5}`.
    EvenOddHatted,
    /// `J1 ⊗ J2`, factor 2 even, `s1` in `{3, 7}`.
    OddEven,
    /// `J1 ⊗ J^2`, factor 2 even, `s1` in `{1, 5}`.
    OddEvenHatted,
}

#[derive(Clone, Debug)]
pub struct TensorRealStructure {
    pub case: RealStructureCase,
    pub j: AntilinearOp,
    /// `J^ = (-1)^{n1/2} J^1 ⊗ J^2`, even-even only.
    pub jhat: Option<AntilinearOp>,
    /// max-abs of `K conj(T) - T K` over all combined generators.
    pub commutation_residual: f64,
}

/// Assembles an antilinear structure map commuting with the combined
/// generators, or `None` for the odd-odd cases with `s` in `{2, 6}`.
pub fn tensor_real_structure(ca: &CommutingAction) -> Option<TensorRealStructure> {
    let (m1, m2) = (&ca.mod1, &ca.mod2);
    let (even1, even2) = (m1.n() % 2 == 0, m2.n() % 2 == 0);
    let (s1, s2) = (m1.s(), m2.s());
    let hat = |m: &CliffordModule| m.jhat.clone().expect("even factor has J^");

    let (case, j) = match (even1, even2) {
        (true, true) => (RealStructureCase::EvenEven, m1.j.tensor(&m2.j)),
        (false, false) => match ca.s() {
            0 | 4 => (RealStructureCase::OddOdd, m1.j.tensor(&m2.j)),
            _ => return None,
        },
        (true, false) => match s2 {
            3 | 7 => (RealStructureCase::EvenOdd, m1.j.tensor(&m2.j)),
            _ => (RealStructureCase::EvenOddHatted, hat(m1).tensor(&m2.j)),
        },
        (false, true) => match s1 {
            3 | 7 => (RealStructureCase::OddEven, m1.j.tensor(&m2.j)),
            _ => (RealStructureCase::OddEvenHatted, m1.j.tensor(&hat(m2))),
        },
    };
    let jhat = (case == RealStructureCase::EvenEven).then(|| {
        let sign = if (m1.n() / 2) % 2 == 0 { 1.0 } else { -1.0 };
        hat(m1).tensor(&hat(m2)).scale(C64::new(sign, 0.0))
    });
    let rep = product_so_generators(ca).combined;
    let commutation_residual = rep
        .generators()
        .iter()
        .map(|t| j.relation_residual(t, 1.0))
        .fold(0.0, f64::max);
    Some(TensorRealStructure {
        case,
        j,
        jhat,
        commutation_residual,
    })
}

/// Largest distance of a commutator of two quadratic monomials from the real
/// span of `{I} ∪ {quadratic monomials}`, for three mutually commuting
/// Clifford actions on a triple tensor product.
pub fn three_action_closure_defect(
    sig_a: Signature,
    sig_b: Signature,
    sig_c: Signature,
) -> Result<f64> {
    if [sig_a, sig_b, sig_c].iter().any(|s| s.n() == 0) {
        return Err(Error::EmptySignature);
    }
    let mods: Vec<CliffordModule> = [sig_a, sig_b, sig_c]
        .into_iter()
        .map(|s| CliffordModule::build_irrep(s, 1))
        .collect();
    let ids: Vec<ComplexMatrix> = mods
        .iter()
        .map(|m| ComplexMatrix::identity(m.dim()))
        .collect();
    let mut gammas = Vec::new();
    for (slot, m) in mods.iter().enumerate() {
        for g in &m.gammas {
            let factors: Vec<&ComplexMatrix> = (0..3)
                .map(|k| if k == slot { g } else { &ids[k] })
                .collect();
            gammas.push(
                factors[1..]
                    .iter()
                    .fold(factors[0].clone(), |acc, f| kron(&acc, f)),
            );
        }
    }
    let dim = gammas[0].dim();
    let mut quadratics = Vec::new();
    for a in 0..gammas.len() {
        for b in a + 1..gammas.len() {
            quadratics.push((&gammas[a] * &gammas[b]).scale_re(0.5));
        }
    }
    let mut span = RealSpan::default();
    span.push(&ComplexMatrix::identity(dim));
    for q in &quadratics {
        span.push(q);
    }
    let mut defect = 0.0_f64;
    for a in 0..quadratics.len() {
        for b in a + 1..quadratics.len() {
            let c = quadratics[a].commutator(&quadratics[b]);
            defect = defect.max(span.distance(&c));
        }
    }
    Ok(defect)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn action(p1: usize, q1: usize, p2: usize, q2: usize) -> CommutingAction {
        CommutingAction::build(Signature::new(p1, q1), 1, Signature::new(p2, q2), 1)
    }

    #[test]
    fn scalar_actions_commute() {
        let ca = action(0, 1, 0, 1);
        assert_eq!(ca.dim(), 1);
        assert_eq!(ca.gamma1, vec![ComplexMatrix::scalar(1, I)]);
        assert_eq!(ca.commutation_residual(), 0.0);
    }

    #[test]
    fn quaternion_times_complex() {
        let ca = action(0, 3, 0, 1);
        assert_eq!(ca.dim(), 2);
        assert_eq!(ca.gamma1.len() + ca.gamma2.len(), 4);
        assert!(ca.commutation_residual() < 1e-15);
        assert!(ca.family_residual() < 1e-15);
        let pg = product_so_generators(&ca);
        assert_eq!(pg.combined.eta.diag, vec![1, 1, 1, -1]);
        assert_eq!(ca.product_signature(), Signature::new(3, 1));
        assert!(pg.combined.bracket_residual() < 1e-12);
    }

    #[test]
    fn abelian_single_generator() {
        let ca = action(0, 1, 1, 0);
        let pg = product_so_generators(&ca);
        assert_eq!(pg.combined.len(), 1);
        assert!(pg.u(0, 0).dist(&ComplexMatrix::scalar(1, I * 0.5)) < 1e-15);
        assert_eq!(pg.combined.bracket_residual(), 0.0);
    }

    #[test]
    fn pati_salam_metric_is_definite() {
        let ca = action(4, 0, 0, 6);
        assert_eq!(ca.dim(), 32);
        assert_eq!(ca.product_metric().diag, vec![-1; 10]);
        assert_eq!(ca.product_signature(), Signature::new(0, 10));
    }

    #[test]
    fn productrep_index_map() {
        let ca = action(1, 1, 2, 0);
        let pg = product_so_generators(&ca);
        let n1 = ca.n1();
        assert!(pg.combined.get(0, 1).dist(&-pg.t1.get(0, 1)) < 1e-15);
        assert!(pg.combined.get(0, n1 + 1).dist(pg.u(0, 1)) < 1e-15);
        assert!(pg.combined.get(n1, n1 + 1).dist(pg.t2.get(0, 1)) < 1e-15);
        // T^{alpha+n1, b} = -U^{b alpha}
        assert!(pg.combined.generator(n1 + 1, 0).dist(&-pg.u(0, 1)) < 1e-15);
    }

    #[test]
    fn anticommuting_split_fails_mixed_family() {
        // one Cl(0,4) module split into 3 + 1 generators: the families anticommute
        let m = CliffordModule::build_irrep(Signature::new(0, 4), 1);
        let pg = ProductGenerators::from_families(
            Signature::new(0, 3).metric(),
            &m.gammas[..3],
            Signature::new(0, 1).metric(),
            &m.gammas[3..],
            m.dim(),
        );
        let report = verify_bracket_families(&pg);
        assert!(report.t1_t1 < 1e-12);
        assert!(report.u_u > 0.5, "{report:?}");
    }

    #[test]
    fn even_equivalence_small() {
        let r = equivalence_even(&action(2, 0, 0, 1)).unwrap();
        assert!(r.max_residual() < 1e-12, "{r:?}");
        let r = equivalence_even(&action(2, 0, 0, 0)).unwrap();
        assert!(r.max_residual() < 1e-12, "{r:?}");
        assert!(r.p_formula_residual.is_some());
        assert_eq!(
            equivalence_even(&action(0, 3, 0, 1)).unwrap_err(),
            Error::OddDimension(3)
        );
    }

    #[test]
    fn odd_odd_small() {
        let r = equivalence_odd_odd(&action(0, 3, 0, 1)).unwrap();
        assert!(r.max_residual() < 1e-12, "{r:?}");
        let r = equivalence_odd_odd(&action(1, 0, 0, 1)).unwrap();
        assert!(r.max_residual() < 1e-12, "{r:?}");
        assert!(equivalence_odd_odd(&action(2, 0, 0, 1)).is_err());
    }

    #[test]
    fn tensor_p_examples() {
        let t = tensor_product_element(&action(0, 3, 0, 1)).unwrap();
        assert!(t.p.dist(&ComplexMatrix::scalar(2, -I)) < 1e-14);
        assert!(t.square_residual < 1e-14);

        let t = tensor_product_element(&action(0, 0, 0, 0)).unwrap();
        assert_eq!(t.p, ComplexMatrix::identity(1));

        let ca = action(4, 0, 0, 6);
        let t = tensor_product_element(&ca).unwrap();
        let direct = kron(ca.mod1.product_element(), ca.mod2.product_element());
        assert!(t.p.dist(&direct) < 1e-14);
        assert!(t.commutation_residual < 1e-12);

        assert_eq!(
            tensor_product_element(&action(0, 1, 0, 0)).unwrap_err(),
            Error::OddSignature(7)
        );
    }

    #[test]
    fn tensor_real_structure_cases() {
        let none = tensor_real_structure(&action(0, 3, 0, 1));
        assert!(none.is_none());
        let js = tensor_real_structure(&action(2, 0, 0, 1)).unwrap();
        assert_eq!(js.case, RealStructureCase::EvenOddHatted);
        assert!(js.commutation_residual < 1e-12);
    }

    #[test]
    fn three_scalar_actions_close() {
        let s = Signature::new(0, 1);
        assert!(three_action_closure_defect(s, s, s).unwrap() < 1e-14);
        assert_eq!(
            three_action_closure_defect(s, Signature::new(0, 0), s).unwrap_err(),
            Error::EmptySignature
        );
    }
}
