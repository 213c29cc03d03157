//! Verification suites that turn the numerical checks into pass/fail reports.
//!
//! Every randomized check draws from its own generator, seeded from the run
//! seed and the check name, so reports do not depend on check order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::clifford::{verify_signatures, CliffordModule, SignTriple, Signature};
use crate::commuting::{
    equivalence_even, equivalence_odd_odd, tensor_product_element, tensor_real_structure,
    three_action_closure_defect, unflipped_metric_residual, verify_bracket_table, CommutingAction,
};
use crate::error::Result;
use crate::liealg::{
    casimir_p, expected_structure, find_intertwiner, observed_structure, so_generators, weyl_pieces,
};
use crate::linalg::ComplexMatrix;
use crate::spectral::{
    adjoint_gauge_action, build_pati_salam, check_order_conditions, hermitian_odd_projection,
    higgs_transform, ko_dimension, real_dimension, spin10_action, unprojected_zeroth_order,
    RealStructureVariant, FIRST_FACTOR, SECOND_FACTOR,
};

/// Lower bound that negative controls must exceed.
pub const CONTROL_FLOOR: f64 = 0.1;
/// Bound on `|det l(u) - 1|`.
pub const DET_TOL: f64 = 1e-8;
/// Lower bound for the mixed generators failing to commute with the algebra.
pub const MIXED_FLOOR: f64 = 0.01;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SuiteConfig {
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            seed: 0,
            samples: 100,
        }
    }
}

impl SuiteConfig {
    /// Tolerance for identities that hold to rounding in exact arithmetic
    /// (sign table, brackets, equivalences): a hundredth of `tol`.
    pub fn strict_tol(&self) -> f64 {
        self.tol * 1e-2
    }

    /// Deterministic generator for one named check.
    pub fn rng_for(&self, check_name: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a(check_name.as_bytes()))
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub check_name: String,
    pub pass: bool,
    pub max_residual: f64,
    pub tolerance: f64,
    pub details: Vec<Value>,
}

impl Report {
    /// Passes when `max_residual < tolerance` (and `structural` holds).
    pub fn upper(
        name: impl Into<String>,
        max_residual: f64,
        tolerance: f64,
        structural: bool,
    ) -> Self {
        Self {
            check_name: name.into(),
            pass: structural && max_residual < tolerance,
            max_residual,
            tolerance,
            details: Vec::new(),
        }
    }

    /// Negative control: passes when `value > floor`.
    pub fn lower(name: impl Into<String>, value: f64, floor: f64) -> Self {
        Self {
            check_name: name.into(),
            pass: value > floor,
            max_residual: value,
            tolerance: floor,
            details: vec![json!({ "bound": "lower" })],
        }
    }

    /// Table lookup or other exact match, no residual.
    pub fn structural(name: impl Into<String>, pass: bool) -> Self {
        Self {
            check_name: name.into(),
            pass,
            max_residual: 0.0,
            tolerance: 0.0,
            details: Vec::new(),
        }
    }

    pub fn with_details(mut self, details: Vec<Value>) -> Self {
        self.details.extend(details);
        self
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.details.push(detail);
        self
    }
}

pub fn all_pass(reports: &[Report]) -> bool {
    reports.iter().all(|r| r.pass)
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn signs_json(t: &SignTriple) -> Value {
    json!({
        "eps": t.eps,
        "epsPrime": t.eps_prime,
        "epsDoublePrime": t.eps_double_prime,
        "row": t.matching_s(),
    })
}

/// Defining relations, unitarity and table signs of one irreducible module.
pub fn irrep_suite(sig: Signature, branch: i8, cfg: &SuiteConfig) -> Vec<Report> {
    let rows = verify_signatures(&[sig], cfg.strict_tol());
    let m = CliffordModule::build_irrep(sig, branch);
    let row = rows
        .into_iter()
        .find(|r| r.branch == m.branch)
        .expect("one row per branch");
    vec![Report::upper(
        format!("irrep {sig} branch {}", m.branch),
        row.max_residual,
        cfg.strict_tol(),
        row.pass,
    )
    .with_detail(json!({
        "dim": m.dim(),
        "s": m.s(),
        "expected": signs_json(&row.expected),
        "measured": signs_json(&row.measured),
    }))]
}

/// Signatures covered by the sign-table check.
pub fn sign_signatures(max_n: usize) -> Vec<Signature> {
    let mut sigs = Signature::all_up_to(max_n);
    for extra in [FIRST_FACTOR, SECOND_FACTOR] {
        if !sigs.contains(&extra) {
            sigs.push(extra);
        }
    }
    sigs
}

pub fn signs_suite(max_n: usize, cfg: &SuiteConfig) -> Vec<Report> {
    let tol = cfg.strict_tol();
    let rows = verify_signatures(&sign_signatures(max_n), tol);
    let sign_report = Report::upper(
        "sign table",
        max_of(rows.iter().map(|r| r.max_residual)),
        tol,
        rows.iter().all(|r| r.pass),
    )
    .with_details(
        rows.iter()
            .map(|r| {
                json!({
                    "signature": r.signature.to_string(),
                    "branch": r.branch,
                    "s": r.s,
                    "expected": signs_json(&r.expected),
                    "measured": signs_json(&r.measured),
                    "lambda": r.lambda,
                    "maxResidual": r.max_residual,
                    "pass": r.pass,
                })
            })
            .collect(),
    );

    let mut structure_ok = true;
    let mut details = Vec::new();
    for sig in Signature::all_up_to(max_n)
        .into_iter()
        .filter(|s| s.n() > 0)
    {
        let m = CliffordModule::build_irrep(sig, 1);
        let observed = observed_structure(&m, cfg.tol);
        let expected = expected_structure(m.s());
        structure_ok &= observed == expected;
        details.push(json!({
            "signature": sig.to_string(),
            "s": m.s(),
            "expectedJ": expected.has_j,
            "expectedP": expected.has_p,
            "observedJ": observed.has_j,
            "observedP": observed.has_p,
        }));
    }
    vec![
        sign_report,
        Report::structural("spinor structure maps", structure_ok).with_details(details),
    ]
}

pub fn brackets_suite(max_n: usize, cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let tol = cfg.strict_tol();
    let mut worst = 0.0_f64;
    let mut details = Vec::new();
    for sig in sign_signatures(max_n) {
        let rep = so_generators(&CliffordModule::build_irrep(sig, 1));
        let direct = rep.bracket_residual();
        let flipped = rep.negated().bracket_residual();
        worst = worst.max(direct).max(flipped);
        details.push(json!({
            "signature": sig.to_string(),
            "generators": rep.len(),
            "bracket": direct,
            "signFlip": flipped,
        }));
    }
    let mut reports = vec![Report::upper("so brackets", worst, tol, true).with_details(details)];

    let mut worst = 0.0_f64;
    let mut details = Vec::new();
    for sig in Signature::all_up_to(6)
        .into_iter()
        .filter(|s| [2, 4, 6].contains(&s.n()))
    {
        let m = CliffordModule::build_irrep(sig, 1);
        let r = casimir_p(&so_generators(&m))?.dist(m.product_element());
        worst = worst.max(r);
        details.push(json!({ "signature": sig.to_string(), "residual": r }));
    }
    reports
        .push(Report::upper("product from generators", worst, cfg.tol, true).with_details(details));

    reports.extend(intertwiner_suite(cfg)?);
    Ok(reports)
}

/// Branch `±` Dirac representations are equivalent for odd `n`; the two Weyl
/// pieces are not for even `n`.
pub fn intertwiner_suite(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let mut reports = Vec::new();
    for sig in [Signature::new(0, 3), Signature::new(1, 2)] {
        let plus = so_generators(&CliffordModule::build_irrep(sig, 1));
        let minus = so_generators(&CliffordModule::build_irrep(sig, -1));
        let found = find_intertwiner(&plus, &minus)?;
        let name = format!("branch equivalence {sig}");
        reports.push(match found {
            Some(w) => Report::upper(name, w.residual, cfg.tol, true)
                .with_detail(json!({ "condition": w.condition })),
            None => Report::structural(name, false).with_detail(json!({ "found": false })),
        });
    }
    for sig in [Signature::new(0, 2), Signature::new(4, 0)] {
        let (plus, minus) = weyl_pieces(&CliffordModule::build_irrep(sig, 1))?;
        let found = find_intertwiner(&plus, &minus)?;
        reports.push(
            Report::structural(format!("weyl pieces inequivalent {sig}"), found.is_none())
                .with_detail(json!({ "found": found.is_some() })),
        );
    }
    Ok(reports)
}

/// Commuting-action checks for one pair of signatures.
pub fn commuting_suite(sig1: Signature, sig2: Signature, cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let strict = cfg.strict_tol();
    let ca = CommutingAction::build(sig1, 1, sig2, 1);
    let label = format!("{sig1}x{sig2}");
    let mut reports = vec![Report::upper(
        format!("commuting families {label}"),
        ca.commutation_residual().max(ca.family_residual()),
        strict,
        true,
    )
    .with_detail(json!({
        "dim": ca.dim(),
        "productSignature": ca.product_signature().to_string(),
        "s": ca.s(),
    }))];

    let table = verify_bracket_table(&ca);
    reports.push(
        Report::upper(format!("bracket table {label}"), table.max(), strict, true).with_details(
            table
                .families()
                .iter()
                .map(|(name, r)| json!({ "family": name, "residual": r }))
                .collect(),
        ),
    );
    // with n1 + n2 <= 2 there is at most one generator and no bracket to break
    if ca.n1() + ca.n2() > 2 {
        reports.push(Report::lower(
            format!("unflipped metric control {label}"),
            unflipped_metric_residual(&ca),
            0.5,
        ));
    }

    if ca.n1().is_multiple_of(2) || ca.n2().is_multiple_of(2) {
        let (action, order) = if ca.n1().is_multiple_of(2) {
            (ca.clone(), "as given")
        } else {
            (ca.swapped(), "swapped")
        };
        let eq = equivalence_even(&action)?;
        reports.push(
            Report::upper(
                format!("even equivalence {label}"),
                eq.max_residual(),
                strict,
                true,
            )
            .with_detail(json!({ "order": order, "report": eq })),
        );
    } else {
        let eq = equivalence_odd_odd(&ca)?;
        reports.push(
            Report::upper(
                format!("odd-odd equivalence {label}"),
                eq.max_residual(),
                strict,
                true,
            )
            .with_detail(json!({ "report": eq })),
        );
    }

    if ca.s().is_multiple_of(2) && ca.dim() > 0 {
        let tp = tensor_product_element(&ca)?;
        let scalar = tp.p.dist(&ComplexMatrix::scalar(ca.dim(), tp.p.get(0, 0))) < cfg.tol;
        let odd_odd = ca.n1() % 2 == 1 && ca.n2() % 2 == 1;
        // odd-odd: irreducible under the generators, so P must be a scalar unit
        let structural = !odd_odd || (scalar && (tp.p.get(0, 0).norm() - 1.0).abs() < cfg.tol);
        reports.push(
            Report::upper(
                format!("tensor product element {label}"),
                tp.commutation_residual.max(tp.square_residual),
                cfg.tol,
                structural,
            )
            .with_detail(json!({ "scalar": scalar, "oddOdd": odd_odd })),
        );
    }

    match tensor_real_structure(&ca) {
        Some(trs) => {
            let mut worst = trs.commutation_residual;
            let mut detail = json!({ "case": trs.case });
            if let Some(jhat) = &trs.jhat {
                let tp = tensor_product_element(&ca)?;
                let r = jhat.matrix().dist(trs.j.after_linear(&tp.p).matrix());
                worst = worst.max(r);
                detail["hatIdentity"] = json!(r);
            }
            reports.push(
                Report::upper(
                    format!("tensor real structure {label}"),
                    worst,
                    cfg.tol,
                    true,
                )
                .with_detail(detail),
            );
        }
        None => reports.push(
            Report::structural(format!("tensor real structure {label}"), true)
                .with_detail(json!({ "case": "none" })),
        ),
    }
    Ok(reports)
}

/// Signature pairs exercised by `all`.
pub fn commuting_pairs() -> Vec<(Signature, Signature)> {
    [
        ((0, 3), (0, 1)),
        ((4, 0), (0, 6)),
        ((1, 1), (2, 0)),
        ((0, 7), (3, 0)),
        ((2, 0), (0, 1)),
        ((2, 0), (0, 2)),
        ((0, 2), (1, 0)),
        ((0, 1), (2, 0)),
        ((1, 0), (0, 2)),
        ((0, 1), (0, 1)),
        ((0, 3), (2, 1)),
    ]
    .into_iter()
    .map(|((p1, q1), (p2, q2))| (Signature::new(p1, q1), Signature::new(p2, q2)))
    .collect()
}

pub fn three_actions_suite() -> Result<Vec<Report>> {
    let triples = [((2, 0), (2, 0), (2, 0)), ((0, 3), (0, 3), (0, 1))];
    let mut reports = Vec::new();
    for (a, b, c) in triples {
        let (a, b, c) = (
            Signature::new(a.0, a.1),
            Signature::new(b.0, b.1),
            Signature::new(c.0, c.1),
        );
        reports.push(Report::lower(
            format!("three actions {a}x{b}x{c}"),
            three_action_closure_defect(a, b, c)?,
            CONTROL_FLOOR,
        ));
    }
    Ok(reports)
}

/// Expected sign-table row for each real-structure variant.
pub fn expected_row(variant: RealStructureVariant) -> u8 {
    match variant {
        RealStructureVariant::Plain => 2,
        RealStructureVariant::HattedSecond => 6,
    }
}

pub fn pati_salam_suite(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let mut reports = Vec::new();
    let samples = cfg.samples.max(1);
    let gauge_samples = samples.max(50);

    for variant in RealStructureVariant::ALL {
        let t = build_pati_salam(variant);
        let v = variant.name();
        let is_default = variant == RealStructureVariant::default();

        let name = format!("pati-salam signs {v}");
        let mut rng = cfg.rng_for(&name);
        let d = t.sample_dirac(&mut rng);
        let ko = ko_dimension(&t, &d);
        let row = t.signs.matching_s();
        reports.push(
            Report::structural(name, row == Some(expected_row(variant)) && ko.s == row)
                .with_detail(json!({
                    "variant": v,
                    "default": is_default,
                    "measured": signs_json(&t.signs),
                    "koDimension": ko,
                })),
        );

        let name = format!("order conditions {v}");
        let mut rng = cfg.rng_for(&name);
        let mut diracs = vec![t.dirac([1.0, 0.0, 0.0, 0.0])];
        diracs.extend((0..9).map(|_| t.sample_dirac(&mut rng)));
        let order = check_order_conditions(&t, &diracs, samples, &mut rng);
        reports.push(
            Report::upper(name, order.zeroth.max(order.first), cfg.tol, true)
                .with_detail(json!(order)),
        );

        let name = format!("unprojected action control {v}");
        let mut rng = cfg.rng_for(&name);
        reports.push(Report::lower(
            name,
            unprojected_zeroth_order(&t, samples.min(10), &mut rng),
            CONTROL_FLOOR,
        ));

        reports.push(Report::upper(
            format!("projector swap {v}"),
            t.projector_swap_residual(),
            cfg.strict_tol(),
            true,
        ));

        let name = format!("right action formula {v}");
        let mut rng = cfg.rng_for(&name);
        let worst = max_of((0..samples.min(20)).map(|_| {
            let a = t.sample_algebra_element(&mut rng);
            t.right_action(&a).dist(&t.right_action_formula(&a))
        }));
        reports.push(Report::upper(name, worst, cfg.tol, true));
    }

    // the remaining checks do not involve the real structure
    let t = build_pati_salam(RealStructureVariant::default());

    let name = "algebra".to_string();
    let mut rng = cfg.rng_for(&name);
    let (e1, e2) = t.even_bases();
    let dims = (real_dimension(e1), real_dimension(e2));
    let worst = max_of(
        (0..samples.min(20)).map(|_| t.membership_residual(&t.sample_algebra_element(&mut rng))),
    );
    reports.push(
        Report::upper(name, worst, cfg.tol, dims == (8, 32))
            .with_detail(json!({ "realDimensions": [dims.0, dims.1] })),
    );

    let name = "gauge action".to_string();
    let mut rng = cfg.rng_for(&name);
    let mut factor = 0.0_f64;
    let mut det = 0.0_f64;
    for _ in 0..gauge_samples {
        let u = t.sample_gauge_element(&mut rng, 1.0);
        let g = adjoint_gauge_action(&t, &u);
        factor = factor
            .max(g.factorization_residual)
            .max(t.gauge_membership_residual(&u));
        det = det.max(g.det_defect);
    }
    reports.push(
        Report::upper(name, factor, cfg.tol, true).with_detail(json!({ "samples": gauge_samples })),
    );
    reports.push(Report::upper("unimodularity", det, DET_TOL, true));

    let name = "higgs covariance".to_string();
    let mut rng = cfg.rng_for(&name);
    let mut worst = 0.0_f64;
    for k in 0..gauge_samples {
        let u = t.sample_gauge_element(&mut rng, 1.0);
        let d = if k == 0 {
            t.dirac([1.0, 0.0, 0.0, 0.0])
        } else {
            t.sample_dirac(&mut rng)
        };
        let h = higgs_transform(&t, &d, &u);
        worst = worst
            .max(h.residual)
            .max(h.norm_defect)
            .max(h.reconstruction_residual);
    }
    reports.push(
        Report::upper(name, worst, cfg.tol, true).with_detail(json!({ "samples": gauge_samples })),
    );

    let name = "hermitian odd elements".to_string();
    let mut rng = cfg.rng_for(&name);
    let worst = max_of((0..samples.min(20)).map(|_| {
        let (cubic, imag, linear) = hermitian_odd_projection(&t, &mut rng);
        cubic.max(imag).max(linear)
    }));
    reports.push(Report::upper(name, worst, cfg.tol, true));

    let name = "spin10".to_string();
    let mut rng = cfg.rng_for(&name);
    let s10 = spin10_action(&t.action, &mut rng)?;
    let worst = max_of([
        s10.bracket_residual,
        s10.first_block_residual,
        s10.second_block_residual,
        s10.plain_equivariance,
        s10.hatted_block_equivariance,
        s10.hatted_mixed_anti_equivariance,
    ]);
    let structural = s10.generator_count == 45 && s10.mixed_min_commutator > MIXED_FLOOR;
    reports.push(Report::upper(name, worst, cfg.tol, structural).with_detail(json!(s10)));

    Ok(reports)
}

pub fn all_suite(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let mut reports = Vec::new();
    reports.extend(signs_suite(7, cfg));
    reports.extend(brackets_suite(7, cfg)?);
    for (a, b) in commuting_pairs() {
        reports.extend(commuting_suite(a, b, cfg)?);
    }
    reports.extend(three_actions_suite()?);
    reports.extend(pati_salam_suite(cfg)?);
    Ok(reports)
}
