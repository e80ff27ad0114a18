//! One executor per `check` kind. Each returns the numbers of a report
//! record; errors are classified by the runner.

use schwarz_core::bochner::{
    bochner_residual, power_sandwich, psh_check, royden_bound_check, royden_quartic, BochnerInstance, PSH_THRESHOLD,
};
use schwarz_core::curvfun::{
    holo_sec, orth_bisec, ric_perp, ric_sigma, ricci, scal_sigma, SearchBudget, SubspaceFrame,
};
use schwarz_core::holomap::HolomorphicMapModel;
use schwarz_core::metrics::{curvature, CurvatureTensor, MetricSpec};
use schwarz_core::sampling::{complex_gaussian, gaussian_matrix, gaussian_vector, haar_unitary, rng_for, sphere_point, SeededRng};
use schwarz_core::schwarz::{metric_equivalence_check, run_scenario, ConstantsMode, Scenario, ScenarioSpec, VerdictStatus};
use schwarz_core::xlinalg::{
    c, compound_matrix, operator_norm, partial_det_bound_check, partial_trace_bound_check, singular_values, CMatrix,
    CVector, HermitianForm,
};
use schwarz_core::{Error, Result};
use serde_json::json;

use crate::config::*;
use crate::report::{Provenance, Status};

/// Slack allowed on the majorization inequalities.
pub const MAJORIZATION_SLACK: f64 = 1e-10;
/// Relative tolerance of the compound matrix laws.
pub const COMPOUND_TOL: f64 = 1e-9;
/// Relative tolerance of curvature structure checks.
pub const CURVATURE_TOL: f64 = 1e-6;
/// Absolute tolerance for flat curvature.
pub const FLAT_TOL: f64 = 1e-10;
pub const BOCHNER_ABS_TOL: f64 = 1e-4;
pub const BOCHNER_REL_TOL: f64 = 1e-3;
pub const BOCHNER_MIN_ORDER: f64 = 1.8;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub quantity: String,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub provenance: Provenance,
    pub message: Option<String>,
    pub detail: serde_json::Value,
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn cvec(p: &[[f64; 2]]) -> CVector {
    CVector::from_iterator(p.len(), p.iter().map(|z| c(z[0], z[1])))
}

fn map_model(source: &MetricSpec, target: &MetricSpec, map: &schwarz_core::holomap::MapSpec) -> Result<HolomorphicMapModel> {
    HolomorphicMapModel::new(source.build()?, target.build()?, map)
}

fn random_pd(rng: &mut SeededRng, n: usize) -> HermitianForm {
    let x = gaussian_matrix(rng, n, n);
    HermitianForm::new(&x * x.adjoint() + CMatrix::identity(n, n) * c(0.1, 0.0)).expect("Gram matrix is Hermitian")
}

fn random_psd(rng: &mut SeededRng, n: usize, rank: usize) -> HermitianForm {
    let y = gaussian_matrix(rng, n, rank);
    HermitianForm::new(&y * y.adjoint()).expect("Gram matrix is Hermitian")
}

pub fn theorem(spec: &ScenarioSpec, seed: u64) -> Result<Outcome> {
    let scn = Scenario::build(spec, seed)?;
    let v = run_scenario(&scn)?;
    let status = match v.status {
        VerdictStatus::Pass => Status::Pass,
        VerdictStatus::Fail => Status::Fail,
        VerdictStatus::Inconclusive => Status::Inconclusive,
    };
    Ok(Outcome {
        status,
        quantity: v.quantity.label(),
        value: v.lhs,
        bound: v.bound,
        margin: v.margin,
        tolerance: v.tolerance,
        provenance: match spec.constants {
            ConstantsMode::Analytic => Provenance::Analytic,
            ConstantsMode::Measured => Provenance::Measured,
        },
        message: v.note.clone(),
        detail: serde_json::to_value(&v).expect("verdict serializes"),
    })
}

pub fn majorization(cfg: &MajorizationConfig, seed: u64) -> Result<Outcome> {
    let max_dim = cfg.max_dim.max(1);
    let (mut checks, mut trace_bad, mut det_bad) = (0usize, 0usize, 0usize);
    let mut worst = 0.0f64;
    for t in 0..cfg.trials {
        let mut rng = rng_for(seed, t as u64);
        let n = 1 + t % max_dim;
        let rank = 1 + (t / max_dim) % n;
        let g = random_pd(&mut rng, n);
        let a = random_psd(&mut rng, n, rank);
        for ell in 1..=n {
            let tb = partial_trace_bound_check(&a, &g, ell)?;
            let v = (tb.u - tb.sigma).max(0.0) / tb.sigma.abs().max(1.0);
            trace_bad += usize::from(v > MAJORIZATION_SLACK);
            let db = partial_det_bound_check(&a, &g, ell)?;
            let w = (db.w - db.product).max(0.0) / db.product.abs().max(1.0);
            det_bad += usize::from(w > MAJORIZATION_SLACK);
            worst = worst.max(v).max(w);
            checks += 2;
        }
    }
    // diag(g) and diag(a·g) with a descending: both bounds are equalities
    let (mut eq_detected, mut eq_total) = (0usize, 0usize);
    let mut eq_gap = 0.0f64;
    for t in 0..cfg.equality_trials {
        let mut rng = rng_for(seed ^ 0xe9a1, t as u64);
        let n = 1 + t % max_dim;
        let g: Vec<f64> = (0..n).map(|_| 0.5 + complex_gaussian(&mut rng).norm()).collect();
        let mut ratio: Vec<f64> = (0..n).map(|_| 0.1 + 3.0 * complex_gaussian(&mut rng).norm()).collect();
        ratio.sort_by(|x, y| y.total_cmp(x));
        let a: Vec<f64> = ratio.iter().zip(&g).map(|(r, gi)| r * gi).collect();
        let (gf, af) = (HermitianForm::from_real_diagonal(&g), HermitianForm::from_real_diagonal(&a));
        for ell in 1..=n {
            let tb = partial_trace_bound_check(&af, &gf, ell)?;
            let db = partial_det_bound_check(&af, &gf, ell)?;
            let gap_t = (tb.sigma - tb.u).abs() / tb.sigma.max(1.0);
            let gap_d = (db.product - db.w).abs() / db.product.max(1.0);
            eq_gap = eq_gap.max(gap_t).max(gap_d);
            eq_total += 2;
            eq_detected += usize::from(gap_t <= MAJORIZATION_SLACK) + usize::from(gap_d <= MAJORIZATION_SLACK);
        }
    }
    let ok = trace_bad == 0 && det_bad == 0 && eq_detected == eq_total;
    Ok(Outcome {
        status: pass_if(ok),
        quantity: "majorization_violation".into(),
        value: worst,
        bound: MAJORIZATION_SLACK,
        margin: MAJORIZATION_SLACK - worst,
        tolerance: MAJORIZATION_SLACK,
        provenance: Provenance::Analytic,
        message: None,
        detail: json!({
            "pairs": cfg.trials,
            "checks": checks,
            "trace_violations": trace_bad,
            "det_violations": det_bad,
            "equality_checks": eq_total,
            "equality_detected": eq_detected,
            "max_equality_gap": eq_gap,
        }),
    })
}

fn rel_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

pub fn compound(cfg: &CompoundConfig, seed: u64) -> Result<Outcome> {
    let span = cfg.max_dim.max(1);
    let (mut worst_functor, mut worst_norm, mut checks) = (0.0f64, 0.0f64, 0usize);
    for t in 0..cfg.trials {
        let mut rng = rng_for(seed, t as u64);
        let n = 1 + t % span;
        let m = 1 + (t / span) % span;
        let k = 1 + (t / (span * span)) % span;
        let a = gaussian_matrix(&mut rng, n, m);
        let b = gaussian_matrix(&mut rng, m, k);
        let ab = &a * &b;
        for ell in 1..=n.min(m).min(k) {
            let lhs = compound_matrix(&ab, ell)?;
            let rhs = compound_matrix(&a, ell)? * compound_matrix(&b, ell)?;
            worst_functor = worst_functor.max(rel_diff(&lhs, &rhs));
            checks += 1;
        }
        let s = singular_values(&a);
        for ell in 1..=n.min(m) {
            let top: f64 = s[..ell].iter().product();
            let norm = operator_norm(&compound_matrix(&a, ell)?);
            worst_norm = worst_norm.max((norm - top).abs() / top.max(f64::MIN_POSITIVE));
            checks += 1;
        }
    }
    let worst = worst_functor.max(worst_norm);
    Ok(Outcome {
        status: pass_if(worst <= COMPOUND_TOL),
        quantity: "compound_relative_error".into(),
        value: worst,
        bound: COMPOUND_TOL,
        margin: COMPOUND_TOL - worst,
        tolerance: COMPOUND_TOL,
        provenance: Provenance::Analytic,
        message: None,
        detail: json!({
            "instances": cfg.trials,
            "checks": checks,
            "functoriality_error": worst_functor,
            "norm_identity_error": worst_norm,
        }),
    })
}

pub fn sandwich(cfg: &SandwichConfig, seed: u64) -> Result<Outcome> {
    let max_len = cfg.max_len.max(1);
    let (mut bad, mut checks) = (0usize, 0usize);
    let mut worst_ratio = 0.0f64;
    for t in 0..cfg.trials {
        let mut rng = rng_for(seed, t as u64);
        let len = 1 + t % max_len;
        let mut v: Vec<f64> = (0..len).map(|_| complex_gaussian(&mut rng).norm()).collect();
        if t % 3 == 2 {
            // rank-deficient spectra
            let zeros = 1 + t % len;
            v.iter_mut().rev().take(zeros.min(len - 1)).for_each(|x| *x = 0.0);
        }
        v.sort_by(|x, y| y.total_cmp(x));
        for k in 1..=len {
            let (sum4, u2, holds) = power_sandwich(&v, k);
            bad += usize::from(!holds);
            if sum4 > 0.0 {
                worst_ratio = worst_ratio.max(u2 / (k as f64 * sum4));
            }
            checks += 1;
        }
    }
    Ok(Outcome {
        status: pass_if(bad == 0),
        quantity: "sandwich_upper_ratio".into(),
        value: worst_ratio,
        bound: 1.0,
        margin: 1.0 - worst_ratio,
        tolerance: 1e-12,
        provenance: Provenance::Analytic,
        message: None,
        detail: json!({ "spectra": cfg.trials, "checks": checks, "violations": bad }),
    })
}

pub fn curvature_check(cfg: &CurvatureConfig, seed: u64, fd_steps: Option<schwarz_core::fd::FdSteps>) -> Result<Outcome> {
    let g = cfg.metric.build()?;
    let points = cfg.region.sample(g.dim(), seed)?;
    match cfg.mode {
        CurvatureMode::ConstantH => {
            let hol = g.constant_holomorphic_curvature().ok_or_else(|| {
                Error::Precondition(format!("{} has no constant holomorphic sectional curvature", g.label()))
            })?;
            let mut worst = 0.0f64;
            for p in &points {
                let curv = curvature(&g, p)?;
                let defect = if hol == 0.0 {
                    curv.r.max_abs()
                } else {
                    let model = CurvatureTensor::constant_holomorphic(&curv.g, hol);
                    curv.r.max_abs_diff(&model) / model.max_abs()
                };
                worst = worst.max(defect);
            }
            let tol = if hol == 0.0 { FLAT_TOL } else { CURVATURE_TOL };
            Ok(Outcome {
                status: pass_if(worst <= tol),
                quantity: if hol == 0.0 { "max_abs_curvature" } else { "constant_h_defect" }.into(),
                value: worst,
                bound: tol,
                margin: tol - worst,
                tolerance: tol,
                provenance: Provenance::Analytic,
                message: None,
                detail: json!({ "metric": g.label(), "holomorphic_curvature": hol, "points": points.len() }),
            })
        }
        CurvatureMode::FdAgreement => {
            let mut fd = g.potential_fd();
            if let Some(steps) = fd_steps {
                fd = fd.with_fd_steps(steps);
            }
            let mut worst = 0.0f64;
            for p in &points {
                let exact = curvature(&g, p)?;
                let approx = curvature(&fd, p)?;
                worst = worst.max(approx.r.max_abs_diff(&exact.r) / exact.r.max_abs().max(1.0));
            }
            Ok(Outcome {
                status: pass_if(worst <= CURVATURE_TOL),
                quantity: "fd_relative_error".into(),
                value: worst,
                bound: CURVATURE_TOL,
                margin: CURVATURE_TOL - worst,
                tolerance: CURVATURE_TOL,
                provenance: Provenance::Fd,
                message: None,
                detail: json!({ "metric": g.label(), "points": points.len() }),
            })
        }
    }
}

pub fn functionals(cfg: &FunctionalsConfig, seed: u64) -> Result<Outcome> {
    let g = cfg.metric.build()?;
    let m = g.dim();
    let hol = g.constant_holomorphic_curvature().ok_or_else(|| {
        Error::Precondition(format!("{} has no constant holomorphic sectional curvature", g.label()))
    })?;
    let points = cfg.region.sample(m, seed)?;
    let (mut worst_closed, mut worst_perp, mut checks) = (0.0f64, 0.0f64, 0usize);
    let rel = |x: f64, want: f64| (x - want).abs() / want.abs().max(f64::MIN_POSITIVE);
    for (k, p) in points.iter().enumerate() {
        let curv = curvature(&g, p)?;
        let mut rng = rng_for(seed, k as u64);
        for ell in 1..=m {
            let u = haar_unitary(&mut rng, m);
            let sigma = SubspaceFrame::from_unitary(&curv.g, &u, ell)?;
            let v = sigma.columns() * gaussian_vector(&mut rng, ell);
            let l = ell as f64;
            worst_closed = worst_closed
                .max(rel(ric_sigma(&curv, &sigma, &v)?, 0.5 * hol * (l + 1.0)))
                .max(rel(scal_sigma(&curv, &sigma), 0.5 * hol * l * (l + 1.0)));
            checks += 2;
        }
        // Ric⊥(X) against the orthogonal sum over a unitary completion
        let full = SubspaceFrame::from_unitary(&curv.g, &haar_unitary(&mut rng, m), m)?;
        let x = full.vector(0);
        let sum: f64 = (1..m).map(|j| orth_bisec(&curv, &x, &full.vector(j))).sum::<Result<f64>>()?;
        let rp = ric_perp(&curv, &x)?;
        let direct = ricci(&curv, &x)? - holo_sec(&curv, &x)?;
        let scale = rp.abs().max(1.0);
        worst_perp = worst_perp.max((rp - sum).abs() / scale).max((rp - direct).abs() / scale);
        checks += 2;
    }
    let worst = worst_closed.max(worst_perp);
    Ok(Outcome {
        status: pass_if(worst <= CURVATURE_TOL),
        quantity: "closed_form_relative_error".into(),
        value: worst,
        bound: CURVATURE_TOL,
        margin: CURVATURE_TOL - worst,
        tolerance: CURVATURE_TOL,
        provenance: Provenance::Analytic,
        message: None,
        detail: json!({
            "metric": g.label(),
            "holomorphic_curvature": hol,
            "checks": checks,
            "restricted_error": worst_closed,
            "ric_perp_error": worst_perp,
        }),
    })
}

pub fn bochner(cfg: &BochnerConfig, seed: u64) -> Result<Outcome> {
    let map = map_model(&cfg.source, &cfg.target, &cfg.map)?;
    let x0 = cvec(&cfg.point);
    let dir = match &cfg.direction {
        Some(d) => cvec(d),
        None => sphere_point(&mut rng_for(seed, 0), map.source_dim()),
    };
    let mut inst = BochnerInstance::new(&map, &x0, &dir, cfg.ell)?;
    if let Some(step) = cfg.step {
        inst = inst.with_step(step);
    }
    let r = bochner_residual(&inst, cfg.barrier)?;
    let tol = BOCHNER_ABS_TOL.max(BOCHNER_REL_TOL * r.rhs.abs());
    let order_ok = r.order.is_none_or(|o| o >= BOCHNER_MIN_ORDER);
    let ok = r.within(BOCHNER_ABS_TOL, BOCHNER_REL_TOL) && order_ok && r.barrier_violations == 0;
    let message = (!order_ok).then(|| format!("observed order {:.3} below {BOCHNER_MIN_ORDER}", r.order.unwrap_or(0.0)));
    Ok(Outcome {
        status: pass_if(ok),
        quantity: format!("ddbar_log_{}_{}", if cfg.barrier == schwarz_core::bochner::Barrier::U { "u" } else { "w" }, cfg.ell),
        value: r.lhs,
        bound: r.rhs,
        margin: tol - r.abs_residual,
        tolerance: tol,
        provenance: Provenance::Fd,
        message,
        detail: json!({
            "map": map.label(),
            "rank": inst.charts.spectrum.rank(),
            "singular_values": inst.charts.spectrum.values,
            "residual": r,
        }),
    })
}

pub fn quartic(cfg: &QuarticConfig, seed: u64) -> Result<Outcome> {
    let map = map_model(&cfg.source, &cfg.target, &cfg.map)?;
    let x0 = cvec(&cfg.point);
    let spec = map.singular_spectrum(&x0)?;
    let curv = curvature(map.target(), &map.value(&x0)?)?;
    let kappa = match cfg.kappa {
        Some(k) => k,
        None => -map.target().constant_holomorphic_curvature().ok_or_else(|| {
            Error::Precondition("kappa must be given for targets without constant curvature".into())
        })?,
    };
    let chk = royden_bound_check(&curv, &spec, cfg.ell, kappa)?;
    let q = royden_quartic(&curv, &spec, chk.ell_prime, cfg.samples, seed)?;
    let scale = q.exact.abs().max(f64::MIN_POSITIVE);
    let moment_ok = (q.moment - q.exact).abs() <= 1e-9 * scale;
    let mc_ok = (q.mc - q.exact).abs() <= 4.0 * q.mc_stderr + 1e-12 * scale;
    let tol = 1e-9 * chk.bound.abs().max(chk.quartic.abs());
    let ok = chk.holds && chk.sandwich_holds && moment_ok && mc_ok;
    Ok(Outcome {
        status: pass_if(ok),
        quantity: format!("quartic_{}", chk.ell_prime),
        value: chk.quartic,
        bound: chk.bound,
        margin: chk.margin,
        tolerance: tol,
        provenance: Provenance::Measured,
        message: None,
        detail: json!({
            "map": map.label(),
            "kappa": kappa,
            "tight": chk.margin.abs() <= 1e-6 * chk.bound.abs(),
            "moment_agrees": moment_ok,
            "mc_within_4_stderr": mc_ok,
            "quartic": q,
            "bound_check": chk,
        }),
    })
}

pub fn psh(cfg: &PshConfig, seed: u64) -> Result<Outcome> {
    let map = map_model(&cfg.source, &cfg.target, &cfg.map)?;
    let rep = psh_check(&map, &cfg.region, cfg.ell, cfg.lines, seed)?;
    Ok(Outcome {
        status: pass_if(rep.passed()),
        quantity: format!("min_line_hessian_log_sigma_{}", cfg.ell),
        value: rep.min_value,
        bound: PSH_THRESHOLD,
        margin: rep.min_value - PSH_THRESHOLD,
        tolerance: -PSH_THRESHOLD,
        provenance: Provenance::Fd,
        message: None,
        detail: json!({ "map": map.label(), "report": rep }),
    })
}

pub fn equivalence(cfg: &EquivalenceConfig, seed: u64, default_budget: Option<SearchBudget>) -> Result<Outcome> {
    let g1 = cfg.first.build()?;
    let g2 = cfg.second.build()?;
    let budget = cfg.budget.or(default_budget).unwrap_or_default();
    let r = metric_equivalence_check(&g1, &g2, &cfg.region, cfg.probes, budget, seed)?;
    let worst = (r.max_ratio_21 / (r.l1 / r.u2)).max(r.max_ratio_12 / (r.l2 / r.u1));
    Ok(Outcome {
        status: pass_if(r.holds),
        quantity: "equivalence_ratio".into(),
        value: worst,
        bound: 1.0,
        margin: 1.0 - worst,
        tolerance: schwarz_core::schwarz::VERDICT_TOL,
        provenance: Provenance::Measured,
        message: None,
        detail: serde_json::to_value(&r).expect("report serializes"),
    })
}
