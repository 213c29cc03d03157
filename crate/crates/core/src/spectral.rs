//! The finite real spectral triple built on `Cl(4,0) ⊗ Cl(0,6)` acting on
//! `C^4 ⊗ C^8 = C^32`.
//!
//! The algebra is `Cl(4,0)_even ⊕ Cl(0,6)_even`, acting on the left by
//!
//! ```text
//! l(a) = a1 ⊗ pi+ + 1 ⊗ a2 pi-
//! ```
//!
//! where `pi± = (1 ± gamma2)/2` are the chirality projectors of the second
//! factor. The right action is `r(a) = J l(a*) J^{-1}`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::Serialize;

use crate::clifford::{measure_sign, CliffordModule, SignTriple, Signature};
use crate::commuting::{product_so_generators, CommutingAction};
use crate::error::{Error, Result};
use crate::liealg::{so_generators, SoRepresentation};
use crate::linalg::{expm, kron, AntilinearOp, ComplexMatrix, RealSpan};

pub const FIRST_FACTOR: Signature = Signature::new(4, 0);
pub const SECOND_FACTOR: Signature = Signature::new(0, 6);

/// Threshold used to decide a measured sign.
const SIGN_TOL: f64 = 1e-6;

/// Which antilinear map serves as the real structure of the triple.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum RealStructureVariant {
    /// `J1 ⊗ J2`
    Plain,
    /// `J1 ⊗ J^2`
    #[default]
    HattedSecond,
}

impl RealStructureVariant {
    pub const ALL: [RealStructureVariant; 2] = [Self::Plain, Self::HattedSecond];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Plain => "plain",
            Self::HattedSecond => "hattedSecond",
        }
    }
}

/// Ordered products `gamma^{a1} .. gamma^{ak}` over increasing index subsets,
/// filtered by degree parity, in order of degree then lexicographic.
pub fn monomials(m: &CliffordModule, even: bool) -> Vec<ComplexMatrix> {
    let n = m.n();
    let mut subsets: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect::<Vec<_>>())
        .filter(|s| (s.len() % 2 == 0) == even)
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    subsets
        .iter()
        .map(|s| {
            s.iter().fold(ComplexMatrix::identity(m.dim()), |acc, &i| {
                &acc * &m.gammas[i]
            })
        })
        .collect()
}

/// Dimension of the real span of a family of matrices.
pub fn real_dimension(family: &[ComplexMatrix]) -> usize {
    let mut span = RealSpan::default();
    for m in family {
        span.push(m);
    }
    span.dim()
}

/// `(a1, a2)` in `Cl(4,0)_even ⊕ Cl(0,6)_even`.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    pub a1: ComplexMatrix,
    pub a2: ComplexMatrix,
}

impl AlgebraElement {
    pub fn new(a1: ComplexMatrix, a2: ComplexMatrix) -> Self {
        Self { a1, a2 }
    }

    pub fn star(&self) -> Self {
        Self {
            a1: self.a1.adjoint(),
            a2: self.a2.adjoint(),
        }
    }
}

/// `d_a gamma1^a ⊗ 1` for a real 4-vector `d`.
#[derive(Clone, Debug)]
pub struct DiracData {
    pub d: [f64; 4],
    pub matrix: ComplexMatrix,
}

/// `(u1, u2)` in `Spin(4) × Spin(6)`.
#[derive(Clone, Debug)]
pub struct GaugeElement {
    pub u1: ComplexMatrix,
    pub u2: ComplexMatrix,
}

impl GaugeElement {
    pub fn as_algebra(&self) -> AlgebraElement {
        AlgebraElement::new(self.u1.clone(), self.u2.clone())
    }

    pub fn star(&self) -> Self {
        Self {
            u1: self.u1.adjoint(),
            u2: self.u2.adjoint(),
        }
    }
}

/// Hilbert space, algebra action, real structure and grading of the triple.
#[derive(Clone, Debug)]
pub struct SpectralTriple {
    pub action: CommutingAction,
    pub variant: RealStructureVariant,
    pub j: AntilinearOp,
    /// `gamma1 ⊗ gamma2`
    pub chirality: ComplexMatrix,
    /// `(1 ± gamma2)/2` on the second factor.
    pub pi2_plus: ComplexMatrix,
    pub pi2_minus: ComplexMatrix,
    /// `1 ⊗ pi±` on the full space.
    pub pi_plus: ComplexMatrix,
    pub pi_minus: ComplexMatrix,
    /// Signs measured with `J^2`, the `gamma1^a ⊗ 1` family and the grading.
    pub signs: SignTriple,
    even1: Vec<ComplexMatrix>,
    even2: Vec<ComplexMatrix>,
    odd1: Vec<ComplexMatrix>,
}

pub fn build_pati_salam(variant: RealStructureVariant) -> SpectralTriple {
    SpectralTriple::from_action(
        CommutingAction::build(FIRST_FACTOR, 1, SECOND_FACTOR, 1),
        variant,
    )
    .expect("signatures are fixed")
}

fn check_signatures(ca: &CommutingAction) -> Result<()> {
    if ca.mod1.signature != FIRST_FACTOR || ca.mod2.signature != SECOND_FACTOR {
        return Err(Error::WrongSignatures(format!(
            "expected {FIRST_FACTOR} x {SECOND_FACTOR}, got {} x {}",
            ca.mod1.signature, ca.mod2.signature
        )));
    }
    Ok(())
}

impl SpectralTriple {
    pub fn from_action(action: CommutingAction, variant: RealStructureVariant) -> Result<Self> {
        check_signatures(&action)?;
        let (m1, m2) = (&action.mod1, &action.mod2);
        let j2 = match variant {
            RealStructureVariant::Plain => m2.j.clone(),
            RealStructureVariant::HattedSecond => m2.jhat.clone().expect("s = 6 module carries J^"),
        };
        let j = m1.j.tensor(&j2);
        let chirality = kron(m1.chirality_op(), m2.chirality_op());
        let id1 = ComplexMatrix::identity(m1.dim());
        let id2 = ComplexMatrix::identity(m2.dim());
        let pi2_plus = (&id2 + m2.chirality_op()).scale_re(0.5);
        let pi2_minus = (&id2 - m2.chirality_op()).scale_re(0.5);
        let pi_plus = kron(&id1, &pi2_plus);
        let pi_minus = kron(&id1, &pi2_minus);

        let id = ComplexMatrix::identity(action.dim());
        let sq = j.square();
        let eps = measure_sign(sq.dist(&id), sq.dist(&-&id), SIGN_TOL).unwrap_or(0);
        let dirac_family = &action.gamma1;
        let eps_prime = measure_sign(
            dirac_family
                .iter()
                .map(|g| j.relation_residual(g, 1.0))
                .fold(0.0, f64::max),
            dirac_family
                .iter()
                .map(|g| j.relation_residual(g, -1.0))
                .fold(0.0, f64::max),
            SIGN_TOL,
        )
        .unwrap_or(0);
        let eps_double_prime = measure_sign(
            j.relation_residual(&chirality, 1.0),
            j.relation_residual(&chirality, -1.0),
            SIGN_TOL,
        );
        let signs = SignTriple {
            eps,
            eps_prime,
            eps_double_prime,
        };

        let even1 = monomials(m1, true);
        let even2 = monomials(m2, true);
        let odd1 = monomials(m1, false);
        Ok(Self {
            action,
            variant,
            j,
            chirality,
            pi2_plus,
            pi2_minus,
            pi_plus,
            pi_minus,
            signs,
            even1,
            even2,
            odd1,
        })
    }

    pub fn dim(&self) -> usize {
        self.action.dim()
    }

    pub fn first(&self) -> &CliffordModule {
        &self.action.mod1
    }

    pub fn second(&self) -> &CliffordModule {
        &self.action.mod2
    }

    /// Even monomial bases of the two factors (real dimensions 8 and 32).
    pub fn even_bases(&self) -> (&[ComplexMatrix], &[ComplexMatrix]) {
        (&self.even1, &self.even2)
    }

    pub fn odd_basis_first(&self) -> &[ComplexMatrix] {
        &self.odd1
    }

    pub fn identity_element(&self) -> AlgebraElement {
        AlgebraElement::new(
            ComplexMatrix::identity(self.first().dim()),
            ComplexMatrix::identity(self.second().dim()),
        )
    }

    /// Real combination of the even monomials with standard normal weights.
    pub fn sample_algebra_element<R: Rng + ?Sized>(&self, rng: &mut R) -> AlgebraElement {
        let combo = |basis: &[ComplexMatrix], rng: &mut R| {
            basis
                .iter()
                .fold(ComplexMatrix::zeros(basis[0].dim()), |acc, m| {
                    let w: f64 = StandardNormal.sample(rng);
                    acc + m.scale_re(w)
                })
        };
        let a1 = combo(&self.even1, rng);
        let a2 = combo(&self.even2, rng);
        AlgebraElement::new(a1, a2)
    }

    /// `l(a) = a1 ⊗ pi+ + 1 ⊗ a2 pi-`
    pub fn left_action(&self, a: &AlgebraElement) -> ComplexMatrix {
        let id1 = ComplexMatrix::identity(self.first().dim());
        kron(&a.a1, &self.pi2_plus) + kron(&id1, &(&a.a2 * &self.pi2_minus))
    }

    /// `r(a) = J l(a*) J^{-1}`
    pub fn right_action(&self, a: &AlgebraElement) -> ComplexMatrix {
        self.j.conjugate_linear(&self.left_action(&a.star()))
    }

    /// `a1* ⊗ pi- + 1 ⊗ a2* pi+`
    pub fn right_action_formula(&self, a: &AlgebraElement) -> ComplexMatrix {
        let id1 = ComplexMatrix::identity(self.first().dim());
        kron(&a.a1.adjoint(), &self.pi2_minus) + kron(&id1, &(&a.a2.adjoint() * &self.pi2_plus))
    }

    /// Membership in the real even subalgebras: commutes with each factor's
    /// chirality and with each factor's `J`.
    pub fn membership_residual(&self, a: &AlgebraElement) -> f64 {
        let (m1, m2) = (self.first(), self.second());
        [
            a.a1.commutator(m1.chirality_op()).max_abs(),
            m1.j.relation_residual(&a.a1, 1.0),
            a.a2.commutator(m2.chirality_op()).max_abs(),
            m2.j.relation_residual(&a.a2, 1.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn dirac(&self, d: [f64; 4]) -> DiracData {
        let matrix = self
            .action
            .gamma1
            .iter()
            .zip(d)
            .fold(ComplexMatrix::zeros(self.dim()), |acc, (g, c)| {
                acc + g.scale_re(c)
            });
        DiracData { d, matrix }
    }

    /// `d_a = Re tr(D (gamma1^a ⊗ 1)) / 32`
    pub fn dirac_coefficients(&self, matrix: &ComplexMatrix) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (a, g) in self.action.gamma1.iter().enumerate() {
            out[a] = (matrix * g).trace().re / self.dim() as f64;
        }
        out
    }

    /// `J pi+ - pi- J`
    pub fn projector_swap_residual(&self) -> f64 {
        (self.j.matrix() * &self.pi_plus.conj()).dist(&(&self.pi_minus * self.j.matrix()))
    }

    pub fn sample_dirac<R: Rng + ?Sized>(&self, rng: &mut R) -> DiracData {
        let mut d = [0.0; 4];
        for x in &mut d {
            *x = StandardNormal.sample(rng);
        }
        self.dirac(d)
    }

    /// `u1 = exp(sum theta_ab T1^{ab})`, `u2 = exp(sum phi T2)` with angles
    /// uniform in `[-scale, scale]`.
    pub fn sample_gauge_element<R: Rng + ?Sized>(&self, rng: &mut R, scale: f64) -> GaugeElement {
        assert!(scale > 0.0, "scale must be positive");
        let dist = Uniform::new_inclusive(-scale, scale).expect("finite scale");
        let t1 = so_generators(self.first());
        let t2 = so_generators(self.second());
        let theta: Vec<f64> = (0..t1.len()).map(|_| dist.sample(rng)).collect();
        let phi: Vec<f64> = (0..t2.len()).map(|_| dist.sample(rng)).collect();
        self.gauge_from_angles(&theta, &phi)
    }

    /// Gauge element from explicit angles over the `A < B` generators of
    /// each factor.
    pub fn gauge_from_angles(&self, theta: &[f64], phi: &[f64]) -> GaugeElement {
        let t1 = so_generators(self.first());
        let t2 = so_generators(self.second());
        GaugeElement {
            u1: exp_combination(&t1, theta),
            u2: exp_combination(&t2, phi),
        }
    }

    /// Unitarity, evenness and reality of both components.
    pub fn gauge_membership_residual(&self, u: &GaugeElement) -> f64 {
        self.membership_residual(&u.as_algebra())
            .max(u.u1.unitarity_residual())
            .max(u.u2.unitarity_residual())
    }
}

fn exp_combination(rep: &SoRepresentation, coefs: &[f64]) -> ComplexMatrix {
    assert_eq!(coefs.len(), rep.len(), "one angle per generator");
    let x = rep
        .generators()
        .iter()
        .zip(coefs)
        .fold(ComplexMatrix::zeros(rep.dim), |acc, (g, &c)| {
            acc + g.scale_re(c)
        });
    expm(&x).expect("finite angles")
}

/// Worst zeroth- and first-order commutators over sampled algebra pairs.
#[derive(Clone, Debug, Serialize)]
pub struct OrderReport {
    pub samples: usize,
    pub dirac_count: usize,
    pub zeroth: f64,
    pub first: f64,
}

/// Samples `samples` algebra pairs and checks every pair against each Dirac
/// operator in `diracs`.
pub fn check_order_conditions<R: Rng + ?Sized>(
    t: &SpectralTriple,
    diracs: &[DiracData],
    samples: usize,
    rng: &mut R,
) -> OrderReport {
    assert!(samples >= 1, "at least one sample");
    let mut zeroth = 0.0_f64;
    let mut first = 0.0_f64;
    for _ in 0..samples {
        let a = t.sample_algebra_element(rng);
        let b = t.sample_algebra_element(rng);
        let (la, rb) = (t.left_action(&a), t.right_action(&b));
        zeroth = zeroth.max(la.commutator(&rb).max_abs());
        for d in diracs {
            first = first.max(d.matrix.commutator(&la).commutator(&rb).max_abs());
        }
    }
    OrderReport {
        samples,
        dirac_count: diracs.len(),
        zeroth,
        first,
    }
}

/// Zeroth-order commutator when the chirality projectors are dropped from
/// the left action: `a1 ⊗ 1 + 1 ⊗ a2`. Expected to fail.
pub fn unprojected_zeroth_order<R: Rng + ?Sized>(
    t: &SpectralTriple,
    samples: usize,
    rng: &mut R,
) -> f64 {
    let id1 = ComplexMatrix::identity(t.first().dim());
    let id2 = ComplexMatrix::identity(t.second().dim());
    let full = |a: &AlgebraElement| kron(&a.a1, &id2) + kron(&id1, &a.a2);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let a = t.sample_algebra_element(rng);
        let b = t.sample_algebra_element(rng);
        let rb = t.j.conjugate_linear(&full(&b.star()));
        worst = worst.max(full(&a).commutator(&rb).max_abs());
    }
    worst
}

/// Measured signs of a triple with a given Dirac operator and the matched
/// sign-table row.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KoDimension {
    pub eps: Option<i8>,
    /// `None` when `D` commutes and anticommutes with `J` (e.g. `D = 0`).
    pub eps_prime: Option<i8>,
    pub eps_double_prime: Option<i8>,
    pub s: Option<u8>,
}

pub fn ko_dimension(t: &SpectralTriple, dirac: &DiracData) -> KoDimension {
    let id = ComplexMatrix::identity(t.dim());
    let sq = t.j.square();
    let eps = measure_sign(sq.dist(&id), sq.dist(&-&id), SIGN_TOL);
    let eps_prime = measure_sign(
        t.j.relation_residual(&dirac.matrix, 1.0),
        t.j.relation_residual(&dirac.matrix, -1.0),
        SIGN_TOL,
    );
    let eps_double_prime = measure_sign(
        t.j.relation_residual(&t.chirality, 1.0),
        t.j.relation_residual(&t.chirality, -1.0),
        SIGN_TOL,
    );
    let s = match (eps, eps_prime, eps_double_prime) {
        (Some(eps), Some(eps_prime), Some(e2)) => SignTriple {
            eps,
            eps_prime,
            eps_double_prime: Some(e2),
        }
        .matching_s(),
        _ => None,
    };
    KoDimension {
        eps,
        eps_prime,
        eps_double_prime,
        s,
    }
}

/// Gauge action `l(u) r(u*)` and its checks.
#[derive(Clone, Debug)]
pub struct GaugeAction {
    pub matrix: ComplexMatrix,
    /// `l(u) r(u*) - u1 ⊗ u2`
    pub factorization_residual: f64,
    /// `|det l(u) - 1|`
    pub det_defect: f64,
}

pub fn adjoint_gauge_action(t: &SpectralTriple, u: &GaugeElement) -> GaugeAction {
    let a = u.as_algebra();
    let lu = t.left_action(&a);
    let matrix = &lu * &t.right_action(&a.star());
    let factorization_residual = matrix.dist(&kron(&u.u1, &u.u2));
    let det_defect = (lu.det() - 1.0).norm();
    GaugeAction {
        matrix,
        factorization_residual,
        det_defect,
    }
}

/// Transformation of the Dirac operator under a gauge element.
#[derive(Clone, Debug, Serialize)]
pub struct HiggsReport {
    /// `l(u) r(u*) D l(u*) r(u) - (u1 d u1*) ⊗ 1`
    pub residual: f64,
    pub d: [f64; 4],
    pub d_prime: [f64; 4],
    /// `| |d'| - |d| |`
    pub norm_defect: f64,
    /// Reconstruction `D' - d'_a gamma1^a ⊗ 1` (vanishes iff `D'` stays in the family).
    pub reconstruction_residual: f64,
}

pub fn higgs_transform(t: &SpectralTriple, dirac: &DiracData, u: &GaugeElement) -> HiggsReport {
    let forward = adjoint_gauge_action(t, u).matrix;
    let backward = adjoint_gauge_action(t, &u.star()).matrix;
    let transformed = &(&forward * &dirac.matrix) * &backward;

    let d1 = t
        .first()
        .gammas
        .iter()
        .zip(dirac.d)
        .fold(ComplexMatrix::zeros(t.first().dim()), |acc, (g, c)| {
            acc + g.scale_re(c)
        });
    let rotated = &(&u.u1 * &d1) * &u.u1.adjoint();
    let expected = kron(&rotated, &ComplexMatrix::identity(t.second().dim()));
    let d_prime = t.dirac_coefficients(&transformed);
    let norm = |v: &[f64; 4]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    HiggsReport {
        residual: transformed.dist(&expected),
        d: dirac.d,
        d_prime,
        norm_defect: (norm(&d_prime) - norm(&dirac.d)).abs(),
        reconstruction_residual: transformed.dist(&t.dirac(d_prime).matrix),
    }
}

/// Hermitian part of a random real odd element of `Cl(4,0)`, projected onto
/// the odd monomials. Returns `(max |degree-3 coefficient|, max |imaginary
/// part of degree-1 coefficients|, max |degree-1 coefficient - original|)`.
pub fn hermitian_odd_projection<R: Rng + ?Sized>(
    t: &SpectralTriple,
    rng: &mut R,
) -> (f64, f64, f64) {
    let basis = t.odd_basis_first();
    let weights: Vec<f64> = basis.iter().map(|_| StandardNormal.sample(rng)).collect();
    let x = basis
        .iter()
        .zip(&weights)
        .fold(ComplexMatrix::zeros(basis[0].dim()), |acc, (m, &w)| {
            acc + m.scale_re(w)
        });
    let h = (&x + &x.adjoint()).scale_re(0.5);
    let dim = h.dim() as f64;
    let mut cubic = 0.0_f64;
    let mut imag = 0.0_f64;
    let mut linear_defect = 0.0_f64;
    let degree_one = t.first().n();
    for (k, m) in basis.iter().enumerate() {
        // monomials are unitary and trace-orthogonal
        let c = (&m.adjoint() * &h).trace() / dim;
        if k < degree_one {
            imag = imag.max(c.im.abs());
            linear_defect = linear_defect.max((c.re - weights[k]).abs());
        } else {
            cubic = cubic.max(c.norm());
        }
    }
    (cubic, imag, linear_defect)
}

/// Checks of the full `so(10)` action against the gauge and algebra actions.
#[derive(Clone, Debug, Serialize)]
pub struct Spin10Report {
    pub generator_count: usize,
    pub bracket_residual: f64,
    /// `exp(-sum theta T^{ab})` over the first block against `l(u) r(u*)` with `u2 = 1`.
    pub first_block_residual: f64,
    /// `exp(sum phi T^{n1+a, n1+b})` against `l(u) r(u*)` with `u1 = 1`.
    pub second_block_residual: f64,
    /// Smallest `|[U, l(a)]|` over the mixed generators for a generic `a`.
    pub mixed_min_commutator: f64,
    /// `J T = T J` over all generators (plain variant).
    pub plain_equivariance: f64,
    /// Hatted variant: commutes with both blocks, anticommutes with the mixed generators.
    pub hatted_block_equivariance: f64,
    pub hatted_mixed_anti_equivariance: f64,
}

pub fn spin10_action<R: Rng + ?Sized>(ca: &CommutingAction, rng: &mut R) -> Result<Spin10Report> {
    check_signatures(ca)?;
    let plain = SpectralTriple::from_action(ca.clone(), RealStructureVariant::Plain)?;
    let hatted = SpectralTriple::from_action(ca.clone(), RealStructureVariant::HattedSecond)?;
    let pg = product_so_generators(ca);
    let rep = &pg.combined;
    let n1 = ca.n1();

    let dist = Uniform::new_inclusive(-1.0, 1.0).expect("finite");
    let theta: Vec<f64> = (0..pg.t1.len()).map(|_| dist.sample(rng)).collect();
    let phi: Vec<f64> = (0..pg.t2.len()).map(|_| dist.sample(rng)).collect();

    let mut first_block = ComplexMatrix::zeros(ca.dim());
    let mut second_block = ComplexMatrix::zeros(ca.dim());
    let (mut ti, mut pi) = (0, 0);
    let mut mixed = Vec::new();
    for (a, b, g) in rep.iter() {
        match (a < n1, b < n1) {
            (true, true) => {
                first_block += &g.scale_re(theta[ti]);
                ti += 1;
            }
            (false, false) => {
                second_block += &g.scale_re(phi[pi]);
                pi += 1;
            }
            _ => mixed.push(g),
        }
    }
    let zeros1 = vec![0.0; pg.t1.len()];
    let zeros2 = vec![0.0; pg.t2.len()];
    // combined T^{ab} = -T1^{ab}: undo the sign
    let u_first = plain.gauge_from_angles(&theta, &zeros2);
    let u_second = plain.gauge_from_angles(&zeros1, &phi);
    let first_block_residual =
        expm(&-first_block)?.dist(&adjoint_gauge_action(&plain, &u_first).matrix);
    let second_block_residual =
        expm(&second_block)?.dist(&adjoint_gauge_action(&plain, &u_second).matrix);

    let la = plain.left_action(&plain.sample_algebra_element(rng));
    let mixed_min_commutator = mixed
        .iter()
        .map(|g| g.commutator(&la).max_abs())
        .fold(f64::INFINITY, f64::min);

    let plain_equivariance = rep
        .generators()
        .iter()
        .map(|g| plain.j.relation_residual(g, 1.0))
        .fold(0.0, f64::max);
    let mut hatted_block_equivariance = 0.0_f64;
    let mut hatted_mixed_anti_equivariance = 0.0_f64;
    for (a, b, g) in rep.iter() {
        if (a < n1) == (b < n1) {
            hatted_block_equivariance =
                hatted_block_equivariance.max(hatted.j.relation_residual(g, 1.0));
        } else {
            hatted_mixed_anti_equivariance =
                hatted_mixed_anti_equivariance.max(hatted.j.relation_residual(g, -1.0));
        }
    }

    Ok(Spin10Report {
        generator_count: rep.len(),
        bracket_residual: rep.bracket_residual(),
        first_block_residual,
        second_block_residual,
        mixed_min_commutator,
        plain_equivariance,
        hatted_block_equivariance,
        hatted_mixed_anti_equivariance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn measured_signs_per_variant() {
        let plain = build_pati_salam(RealStructureVariant::Plain);
        assert_eq!(
            plain.signs,
            SignTriple {
                eps: -1,
                eps_prime: 1,
                eps_double_prime: Some(-1)
            }
        );
        assert_eq!(plain.signs.matching_s(), Some(2));
        let hatted = build_pati_salam(RealStructureVariant::HattedSecond);
        assert_eq!(
            hatted.signs,
            SignTriple {
                eps: 1,
                eps_prime: 1,
                eps_double_prime: Some(-1)
            }
        );
        assert_eq!(hatted.signs.matching_s(), Some(6));
        assert_eq!(
            RealStructureVariant::default(),
            RealStructureVariant::HattedSecond
        );
    }

    #[test]
    fn identity_acts_trivially() {
        let t = build_pati_salam(RealStructureVariant::default());
        let e = t.identity_element();
        let id = ComplexMatrix::identity(32);
        assert!(t.left_action(&e).dist(&id) < 1e-15);
        assert!(t.right_action(&e).dist(&id) < 1e-14);
    }

    #[test]
    fn algebra_real_dimensions() {
        let t = build_pati_salam(RealStructureVariant::default());
        let (e1, e2) = t.even_bases();
        assert_eq!((e1.len(), e2.len()), (8, 32));
        assert_eq!(real_dimension(e1), 8);
        assert_eq!(real_dimension(e2), 32);
    }

    #[test]
    fn right_action_block_example() {
        // a = (gamma1^1 gamma1^2, 1): r(a) = (gamma^1 gamma^2)* ⊗ pi- + 1 ⊗ pi+
        let t = build_pati_salam(RealStructureVariant::Plain);
        let g = &t.first().gammas;
        let a1 = &g[0] * &g[1];
        let a = AlgebraElement::new(a1.clone(), ComplexMatrix::identity(8));
        let expected =
            kron(&(&g[1] * &g[0]), &t.pi2_minus) + kron(&ComplexMatrix::identity(4), &t.pi2_plus);
        assert!(t.right_action(&a).dist(&expected) < 1e-12);
    }

    #[test]
    fn trivial_pairs_commute_exactly() {
        let t = build_pati_salam(RealStructureVariant::default());
        let e = t.identity_element();
        let d = t.dirac([1.0, 0.0, 0.0, 0.0]);
        let (la, rb) = (t.left_action(&e), t.right_action(&e));
        assert!(la.commutator(&rb).max_abs() < 1e-14);
        assert!(d.matrix.commutator(&la).commutator(&rb).max_abs() < 1e-14);
    }

    #[test]
    fn zero_dirac_is_indeterminate() {
        let t = build_pati_salam(RealStructureVariant::default());
        let ko = ko_dimension(&t, &t.dirac([0.0; 4]));
        assert_eq!(ko.eps_prime, None);
        assert_eq!(ko.s, None);
    }

    #[test]
    fn gauge_closed_form_half_turn() {
        let t = build_pati_salam(RealStructureVariant::default());
        let mut theta = vec![0.0; 6];
        theta[0] = std::f64::consts::PI;
        let u = t.gauge_from_angles(&theta, &[0.0; 15]);
        // (T^{12})^2 = -1/4: exp(pi T) = cos(pi/2) + 2 sin(pi/2) T = gamma^1 gamma^2
        let g = &t.first().gammas;
        assert!(u.u1.dist(&(&g[0] * &g[1])) < 1e-12);
        assert!(t.gauge_membership_residual(&u) < 1e-12);

        let zero = t.gauge_from_angles(&[0.0; 6], &[0.0; 15]);
        assert!(zero.u1.dist(&ComplexMatrix::identity(4)) < 1e-15);
        assert!(zero.u2.dist(&ComplexMatrix::identity(8)) < 1e-15);
    }

    #[test]
    fn z2_kernel_element() {
        let t = build_pati_salam(RealStructureVariant::default());
        let mut theta = vec![0.0; 6];
        theta[0] = 2.0 * std::f64::consts::PI;
        let u = t.gauge_from_angles(&theta, &[0.0; 15]);
        assert!(u.u1.dist(&ComplexMatrix::identity(4).scale_re(-1.0)) < 1e-12);
        let g = adjoint_gauge_action(&t, &u);
        assert!(g.matrix.dist(&ComplexMatrix::identity(32).scale_re(-1.0)) < 1e-12);
        assert!(g.det_defect < 1e-8);
    }

    #[test]
    fn second_factor_leaves_dirac_alone() {
        let t = build_pati_salam(RealStructureVariant::default());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let phi: Vec<f64> = (0..15).map(|k| 0.1 * k as f64 - 0.7).collect();
        let u = t.gauge_from_angles(&[0.0; 6], &phi);
        let d = t.sample_dirac(&mut rng);
        let h = higgs_transform(&t, &d, &u);
        assert!(h.residual < 1e-10);
        for a in 0..4 {
            assert!((h.d_prime[a] - d.d[a]).abs() < 1e-10);
        }
    }

    #[test]
    fn wrong_signatures_rejected() {
        let ca = CommutingAction::build(Signature::new(0, 3), 1, Signature::new(0, 1), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            spin10_action(&ca, &mut rng),
            Err(Error::WrongSignatures(_))
        ));
    }
}
