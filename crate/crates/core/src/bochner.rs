//! `∂∂̄`-Bochner identities for `log U_ℓ` and `log W_ℓ`, plurisubharmonicity
//! of `log σ_ℓ`, and the sphere-averaging identity for the quartic curvature
//! form behind the Royden-type estimate.

use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use crate::curvfun::{bound_search_at, BoundKind, Functional, SearchBudget};
use crate::error::{Error, Result};
use crate::fd::{observed_order, quarter_laplacian_richardson, LaplacianEstimate};
use crate::holomap::{AdaptedCharts, HolomorphicMapModel, SingularSpectrum};
use crate::metrics::CurvatureData;
use crate::sampling::{derive_seed, haar_unitary, rng_for, sphere_point, SampleRegion};
use crate::xlinalg::{c, CMatrix, CVector, C64};

/// Which barrier function an identity is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Barrier {
    /// `U_ℓ`, trace of the leading block.
    U,
    /// `W_ℓ`, determinant ratio of the leading blocks.
    W,
}

/// Line step, in units of the source length scale, for the `¼Δ_t` stencil.
pub const DEFAULT_LINE_STEP: f64 = 0.05;

/// Smallest `λ_ℓ` accepted for `log W_ℓ` instances.
pub const MIN_LAMBDA_FOR_W: f64 = 1e-6;

/// A base point, direction and `ℓ` for the Bochner identities, with normal
/// coordinates on both sides adapted to the singular frames at `x₀`.
#[derive(Debug, Clone)]
pub struct BochnerInstance {
    pub map: HolomorphicMapModel,
    pub charts: AdaptedCharts,
    /// Unit direction in source normal coordinates.
    pub direction: CVector,
    pub ell: usize,
    /// Line step relative to the source length scale.
    pub step: f64,
}

impl BochnerInstance {
    pub fn new(map: &HolomorphicMapModel, x0: &CVector, direction: &CVector, ell: usize) -> Result<Self> {
        let charts = AdaptedCharts::new(map, x0)?;
        Self::with_charts(map, charts, direction, ell)
    }

    pub fn with_charts(map: &HolomorphicMapModel, charts: AdaptedCharts, direction: &CVector, ell: usize) -> Result<Self> {
        let m = map.source_dim();
        if direction.len() != m {
            return Err(Error::Dimension(format!("direction has {} entries, source has {m}", direction.len())));
        }
        let norm = direction.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        if ell == 0 || ell > m {
            return Err(Error::OutOfRange(format!("ell = {ell} outside 1..={m}")));
        }
        Ok(BochnerInstance {
            map: map.clone(),
            charts,
            direction: direction / c(norm, 0.0),
            ell,
            step: DEFAULT_LINE_STEP,
        })
    }

    /// Same instance with adapted frames post-rotated inside the
    /// singular-value eigenspaces.
    pub fn rerotated(&self, seed: u64) -> Result<Self> {
        let spectrum = rotate_within_eigenspaces(&self.charts.spectrum, seed);
        let charts = AdaptedCharts::with_spectrum(&self.map, &self.charts.base, spectrum)?;
        Ok(BochnerInstance { charts, ..self.clone() })
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    fn barrier_value(&self, which: Barrier, w: &CVector) -> Result<f64> {
        match which {
            Barrier::U => self.charts.u_ell(&self.map, w, self.ell),
            Barrier::W => self.charts.w_ell(&self.map, w, self.ell),
        }
    }

    /// Step in the complex line parameter `t`, where `w = t·v`.
    fn line_step(&self) -> f64 {
        let scale = self.map.source().length_scale(&self.charts.base);
        let stretch = self.charts.source.linear.norm().max(f64::MIN_POSITIVE);
        self.step * scale / stretch
    }

    fn check_nondegenerate(&self, which: Barrier) -> Result<()> {
        let s = &self.charts.spectrum;
        match which {
            Barrier::U if s.sigma(self.ell)? <= 0.0 => Err(Error::Degenerate("U_ell vanishes at the base point".into())),
            Barrier::W if s.values[self.ell - 1] < MIN_LAMBDA_FOR_W => Err(Error::Degenerate(format!(
                "lambda_ell = {:e} below {MIN_LAMBDA_FOR_W:e}",
                s.values[self.ell - 1]
            ))),
            _ => Ok(()),
        }
    }
}

/// Re-rotates singular frames inside blocks of equal singular values, using
/// the same unitary on both sides so the Jacobian stays diagonal.
pub fn rotate_within_eigenspaces(spectrum: &SingularSpectrum, seed: u64) -> SingularSpectrum {
    let vals = &spectrum.values;
    let k = vals.len().min(spectrum.target_frame.ncols());
    let mut rng = rng_for(seed, 0);
    let mut out = spectrum.clone();
    let mut start = 0;
    while start < k {
        let mut end = start + 1;
        while end < k && (vals[end] - vals[start]).abs() <= 1e-9 * vals[0].max(1e-300) {
            end += 1;
        }
        let size = end - start;
        if size > 1 {
            let u = haar_unitary(&mut rng, size);
            let src = spectrum.source_frame.columns(start, size) * &u;
            let tgt = spectrum.target_frame.columns(start, size) * &u;
            out.source_frame.columns_mut(start, size).copy_from(&src);
            out.target_frame.columns_mut(start, size).copy_from(&tgt);
        }
        start = end;
    }
    out
}

/// Comparison of the two sides of an identity.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityResidual {
    pub barrier: Barrier,
    pub ell: usize,
    /// Richardson-extrapolated left-hand side.
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    /// Line step `h` in the complex parameter.
    pub step: f64,
    pub lhs_coarse: f64,
    pub lhs_fine: f64,
    /// Convergence order of the unextrapolated estimates at `h` and `h/2`;
    /// absent when both errors are at roundoff level.
    pub order: Option<f64>,
    /// Stencil points where `U_ℓ > σ_ℓ` or `W_ℓ > Π λ²` beyond roundoff.
    pub barrier_violations: usize,
}

impl IdentityResidual {
    /// `|lhs − rhs| ≤ max(abs, rel·|rhs|)`.
    pub fn within(&self, abs: f64, rel: f64) -> bool {
        self.abs_residual <= abs.max(rel * self.rhs.abs())
    }
}

/// `⟨√−1∂∂̄ log B, (1/√−1) v∧v̄⟩ = ¼Δ_t log B(t v)` at `t = 0` by the
/// five-point stencil with one Richardson level, `B` evaluated in the frozen
/// adapted coordinates of `x₀`.
pub fn bochner_lhs(inst: &BochnerInstance, which: Barrier) -> Result<LaplacianEstimate> {
    inst.check_nondegenerate(which)?;
    let h = inst.line_step();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let f = |t: C64| -> f64 {
        let w = &inst.direction * t;
        match inst.barrier_value(which, &w) {
            Ok(b) if b > 0.0 => b.ln(),
            Ok(b) => {
                failure.borrow_mut().get_or_insert(Error::Degenerate(format!("barrier value {b:e} on the stencil")));
                f64::NAN
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let est = quarter_laplacian_richardson(&f, h);
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(est),
    }
}

/// Right-hand side assembled from the frame covariant Hessian, the spectrum
/// and both curvature tensors at the centers.
pub fn bochner_rhs(inst: &BochnerInstance, which: Barrier) -> Result<f64> {
    inst.check_nondegenerate(which)?;
    let map = &inst.map;
    let (m, n) = (map.source_dim(), map.target_dim());
    let ell = inst.ell;
    let lam = &inst.charts.spectrum.values;
    let hess = inst.charts.frame_hessian(map)?;
    let (rm, rn) = inst.charts.frame_curvatures(map)?;
    let v = &inst.direction;
    // f^i_{α v} = Σ_γ f^i_{αγ} v^γ
    let fav = |i: usize, a: usize| -> C64 { (0..m).map(|g| hess[i][(a, g)] * v[g]).sum() };
    // ∂f(v) in target frame coordinates
    let dfv = CVector::from_iterator(n, (0..n).map(|i| if i < m { v[i] * lam[i] } else { c(0.0, 0.0) }));
    let e_src = |a: usize| CVector::from_iterator(m, (0..m).map(|k| c(f64::from(u8::from(k == a)), 0.0)));
    let e_tgt = |a: usize| CVector::from_iterator(n, (0..n).map(|k| c(f64::from(u8::from(k == a)), 0.0)));
    let curv_term = |a: usize| -> f64 {
        let target = if a < n { rn.bisectional(&e_tgt(a), &dfv) } else { 0.0 };
        rm.bisectional(&e_src(a), v) - target
    };
    match which {
        Barrier::U => {
            let u: f64 = lam[..ell].iter().map(|l| l * l).sum();
            let hess_sq: f64 = (0..ell).map(|a| (0..n).map(|i| fav(i, a).norm_sqr()).sum::<f64>()).sum();
            let cross: C64 = (0..ell.min(n)).map(|a| fav(a, a) * lam[a]).sum();
            let curv: f64 = (0..ell).map(|a| lam[a] * lam[a] * curv_term(a)).sum();
            Ok((u * hess_sq - cross.norm_sqr()) / (u * u) + curv / u)
        }
        Barrier::W => {
            let normal: f64 = (0..ell)
                .map(|a| (ell..n).map(|i| fav(i, a).norm_sqr()).sum::<f64>() / (lam[a] * lam[a]))
                .sum();
            let curv: f64 = (0..ell).map(curv_term).sum();
            Ok(normal + curv)
        }
    }
}

/// Both sides of the identity, the residual, its convergence order and the
/// in-situ barrier inequalities on the stencil.
pub fn bochner_residual(inst: &BochnerInstance, which: Barrier) -> Result<IdentityResidual> {
    let est = bochner_lhs(inst, which)?;
    let rhs = bochner_rhs(inst, which)?;
    let abs_residual = (est.extrapolated - rhs).abs();
    let (ec, ef) = (est.coarse - rhs, est.fine - rhs);
    let floor = 1e-10 * rhs.abs().max(1.0);
    let order = (ef.abs() > floor).then(|| observed_order(ec, ef));
    Ok(IdentityResidual {
        barrier: which,
        ell: inst.ell,
        lhs: est.extrapolated,
        rhs,
        abs_residual,
        rel_residual: abs_residual / rhs.abs().max(f64::MIN_POSITIVE),
        step: est.step,
        lhs_coarse: est.coarse,
        lhs_fine: est.fine,
        order,
        barrier_violations: stencil_violations(inst, est.step)?,
    })
}

fn stencil_violations(inst: &BochnerInstance, h: f64) -> Result<usize> {
    let mut bad = 0;
    let offsets = [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
    for scale in [h, 0.5 * h] {
        for o in offsets {
            let w = &inst.direction * (o * scale);
            let z = inst.charts.source.to_chart(&w);
            let spec = inst.map.singular_spectrum(&z)?;
            let (u, wv) = inst.charts.block_functionals(&inst.map, &w, inst.ell)?;
            let sigma = spec.sigma(inst.ell)?;
            let prod = spec.lambda_norm_sq(inst.ell)?;
            if u > sigma + 1e-10 * sigma.max(1.0) {
                bad += 1;
            }
            if wv > prod + 1e-10 * prod.max(1.0) {
                bad += 1;
            }
        }
    }
    Ok(bad)
}

/// The quartic `Σ_{α,β≤ℓ′} R^N_{αᾱββ̄} λ_α² λ_β²` three ways.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RoydenQuartic {
    pub ell_prime: usize,
    /// Direct sum over the singular frame.
    pub exact: f64,
    /// Full four-index contraction against the sphere moments
    /// `E[w^i w̄^j w^k w̄^l] = (δ_ij δ_kl + δ_il δ_kj)/(ℓ′(ℓ′+1))`.
    pub moment: f64,
    /// `ℓ′(ℓ′+1)/2` times the Monte Carlo sphere mean of `R(Y,Ȳ,Y,Ȳ)`.
    pub mc: f64,
    pub mc_stderr: f64,
    pub mc_samples: usize,
}

/// `curv` is the target curvature at `f(x₀)`; `spectrum` the singular data
/// of `∂f` at `x₀`.
pub fn royden_quartic(
    curv: &CurvatureData,
    spectrum: &SingularSpectrum,
    ell_prime: usize,
    mc_samples: usize,
    seed: u64,
) -> Result<RoydenQuartic> {
    let k = ell_prime;
    if k > spectrum.rank() || k > spectrum.target_frame.ncols() {
        return Err(Error::OutOfRange(format!("ell' = {k} exceeds the rank {}", spectrum.rank())));
    }
    let lam = &spectrum.values[..k];
    let frame: CMatrix = spectrum.target_frame.columns(0, k).into_owned();
    let r = curv.r.in_frame(&frame);
    let mut exact = 0.0;
    for a in 0..k {
        for b in 0..k {
            exact += r.get(a, a, b, b).re * lam[a] * lam[a] * lam[b] * lam[b];
        }
    }
    let mut moment = c(0.0, 0.0);
    if k > 0 {
        let norm = (k * (k + 1)) as f64;
        for i in 0..k {
            for j in 0..k {
                for p in 0..k {
                    for q in 0..k {
                        let delta = |x: usize, y: usize| f64::from(u8::from(x == y));
                        let e = (delta(i, j) * delta(p, q) + delta(i, q) * delta(p, j)) / norm;
                        if e != 0.0 {
                            moment += r.get(i, j, p, q) * (lam[i] * lam[j] * lam[p] * lam[q] * e);
                        }
                    }
                }
            }
        }
        moment *= 0.5 * norm;
    }
    let (mut mean, mut m2) = (0.0f64, 0.0f64);
    if k > 0 {
        let factor = 0.5 * (k * (k + 1)) as f64;
        let lam_c = CVector::from_iterator(k, lam.iter().map(|&l| c(l, 0.0)));
        let mut rng = rng_for(derive_seed(seed, "royden-mc"), 0);
        for s in 0..mc_samples {
            let y = sphere_point(&mut rng, k).component_mul(&lam_c);
            let val = factor * r.bisectional(&y, &y);
            let delta = val - mean;
            mean += delta / (s + 1) as f64;
            m2 += delta * (val - mean);
        }
    }
    let var = if mc_samples > 1 { m2 / (mc_samples - 1) as f64 } else { 0.0 };
    Ok(RoydenQuartic {
        ell_prime: k,
        exact,
        moment: moment.re,
        mc: mean,
        mc_stderr: (var / mc_samples.max(1) as f64).sqrt(),
        mc_samples,
    })
}

/// `Σλ⁴`, `U²` and whether `Σλ⁴ ≤ U² ≤ ℓ′Σλ⁴` over the first `ℓ′` values.
pub fn power_sandwich(values: &[f64], ell_prime: usize) -> (f64, f64, bool) {
    let v = &values[..ell_prime.min(values.len())];
    let sum4: f64 = v.iter().map(|l| l.powi(4)).sum();
    let u: f64 = v.iter().map(|l| l * l).sum();
    let u2 = u * u;
    let tol = 1e-12 * u2.max(f64::MIN_POSITIVE);
    (sum4, u2, sum4 <= u2 + tol && u2 <= ell_prime as f64 * sum4 + tol)
}

/// Outcome of comparing the quartic against the curvature bound.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RoydenBoundCheck {
    pub ell: usize,
    pub ell_prime: usize,
    pub kappa: f64,
    pub u: f64,
    pub quartic: f64,
    /// `−((ℓ′+1)/(2ℓ′))κU²` for `κ > 0`, `−κU²` otherwise.
    pub bound: f64,
    /// `bound − quartic`, nonnegative when the estimate holds.
    pub margin: f64,
    pub holds: bool,
    pub sandwich_holds: bool,
}

pub fn royden_bound(kappa: f64, ell_prime: usize, u: f64) -> f64 {
    if ell_prime == 0 {
        return 0.0;
    }
    if kappa > 0.0 {
        -((ell_prime + 1) as f64 / (2 * ell_prime) as f64) * kappa * u * u
    } else {
        -kappa * u * u
    }
}

/// Checks the quartic against the bound for `H^N ≤ −κ`; `ℓ′` is `ℓ`
/// capped by the rank of `∂f` at the point.
pub fn royden_bound_check(curv: &CurvatureData, spectrum: &SingularSpectrum, ell: usize, kappa: f64) -> Result<RoydenBoundCheck> {
    let ell_prime = ell.min(spectrum.rank());
    let q = royden_quartic(curv, spectrum, ell_prime, 0, 0)?;
    let u = spectrum.sigma(ell)?;
    let bound = royden_bound(kappa, ell_prime, u);
    let margin = bound - q.exact;
    let (_, _, sandwich_holds) = power_sandwich(&spectrum.values, ell_prime);
    Ok(RoydenBoundCheck {
        ell,
        ell_prime,
        kappa,
        u,
        quartic: q.exact,
        bound,
        margin,
        holds: margin >= -1e-9 * bound.abs().max(q.exact.abs()).max(1e-300),
        sandwich_holds,
    })
}

/// A line where `¼Δ_t log σ_ℓ` fell below the threshold.
#[derive(Debug, Clone, Serialize)]
pub struct PshWitness {
    pub point: Vec<[f64; 2]>,
    pub direction: Vec<[f64; 2]>,
    pub value: f64,
}

/// Plurisubharmonicity sweep of `log σ_ℓ`.
#[derive(Debug, Clone, Serialize)]
pub struct PshReport {
    pub ell: usize,
    pub probes: usize,
    /// Points where `σ_ℓ` vanished.
    pub skipped: usize,
    pub min_value: f64,
    /// Measured lower bound of the source bisectional curvature.
    pub source_bisec_min: f64,
    /// Measured upper bound of the target bisectional curvature.
    pub target_bisec_max: f64,
    pub threshold: f64,
    pub failures: Vec<PshWitness>,
}

impl PshReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Line Hessian threshold for `log σ_ℓ`.
pub const PSH_THRESHOLD: f64 = -1e-6;

fn pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// Samples `region`, and at each point with `σ_ℓ > 0` evaluates
/// `¼Δ_t log σ_ℓ(z + t v)` along `lines` random complex directions. The
/// curvature signs the statement needs are measured on the same points
/// first; a sign violation is reported as an unmet hypothesis.
pub fn psh_check(
    map: &HolomorphicMapModel,
    region: &SampleRegion,
    ell: usize,
    lines: usize,
    seed: u64,
) -> Result<PshReport> {
    let m = map.source_dim();
    let points = region.sample(m, seed)?;
    let images = points.iter().map(|p| map.value(p)).collect::<Result<Vec<_>>>()?;
    let budget = SearchBudget { frames: 8, refine: 10 };
    let src = bound_search_at(map.source(), &points, Functional::Bisec, 1, BoundKind::Lower, budget, seed)?;
    let tgt = bound_search_at(map.target(), &images, Functional::Bisec, 1, BoundKind::Upper, budget, seed)?;
    let tol = 1e-9;
    if src.value < -tol || tgt.value > tol {
        return Err(Error::Precondition(format!(
            "needs source bisectional >= 0 and target bisectional <= 0; measured {:e} and {:e}",
            src.value, tgt.value
        )));
    }
    let mut rng = rng_for(derive_seed(seed, "psh-lines"), 0);
    let mut report = PshReport {
        ell,
        probes: 0,
        skipped: 0,
        min_value: f64::INFINITY,
        source_bisec_min: src.value,
        target_bisec_max: tgt.value,
        threshold: PSH_THRESHOLD,
        failures: Vec::new(),
    };
    for z in &points {
        let dirs: Vec<CVector> = (0..lines).map(|_| sphere_point(&mut rng, m)).collect();
        if map.sigma_ell(z, ell)? <= 1e-300 {
            report.skipped += 1;
            continue;
        }
        let h = 1e-2 * map.source().length_scale(z);
        for v in dirs {
            let err: RefCell<Option<Error>> = RefCell::new(None);
            let f = |t: C64| -> f64 {
                match map.sigma_ell(&(z + &v * t), ell) {
                    Ok(s) => s.ln(),
                    Err(e) => {
                        err.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                }
            };
            let value = quarter_laplacian_richardson(&f, h).extrapolated;
            if let Some(e) = err.into_inner() {
                return Err(e);
            }
            report.probes += 1;
            report.min_value = report.min_value.min(value);
            if !(value >= PSH_THRESHOLD) {
                report.failures.push(PshWitness {
                    point: pairs(z),
                    direction: pairs(&v),
                    value,
                });
            }
        }
    }
    Ok(report)
}
