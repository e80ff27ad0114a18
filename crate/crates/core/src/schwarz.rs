//! End-to-end checks of Schwarz-type inequalities on sampled instances:
//! upper bounds on `‖∂f‖²`, `‖∂f‖₀²`, `σ_ℓ` and `‖Λ^ℓ∂f‖₀²` under negative
//! target curvature, and lower bounds on their maxima under positive
//! curvature.
//!
//! Curvature constants are measured by [`crate::curvfun`] on the sample
//! points (source) and on their images (target), or taken from the closed
//! forms of constant-curvature models. Every bound formula is shared between
//! the theorems that coincide for `ℓ = 1` or `ℓ = m`, so coinciding checks
//! produce identical numbers.

use serde::{Deserialize, Serialize};

use crate::curvfun::{bound_search_at, BoundKind, Canonical, Functional, SearchBudget};
use crate::error::{Error, Result};
use crate::holomap::{HolomorphicMapModel, MapSpec, SingularSpectrum};
use crate::metrics::{ChartedKahlerMetric, MetricSpec};
use crate::sampling::{derive_seed, rng_for, sphere_point, SampleRegion};
use crate::xlinalg::{c, CVector};

/// Relative tolerance of a verdict.
pub const VERDICT_TOL: f64 = 1e-6;
/// Absolute floor of the verdict tolerance.
pub const VERDICT_ABS_TOL: f64 = 1e-12;
/// A verdict is tight when `|margin| ≤ TIGHT_REL · |bound|`.
pub const TIGHT_REL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    /// `‖∂f‖² ≤ (2d/(d+1)) K/κ` under `Ric^M ≥ −K`, `H^N ≤ −κ`.
    #[serde(rename = "royden")]
    Royden,
    /// `‖∂f‖₀² ≤ K/κ` under `H^M ≥ −K`, `H^N ≤ −κ`.
    #[serde(rename = "norm0")]
    Norm0,
    /// `‖Λ^m∂f‖₀² ≤ (K/(mκ))^m` under `S^M ≥ −K`, `Ric^N_m ≤ −κ`.
    #[serde(rename = "jacobian")]
    Jacobian,
    /// `σ_ℓ ≤ (2ℓ′/(ℓ′+1)) K/κ` under `Ric^M_ℓ ≥ −K`, `H^N ≤ −κ`.
    #[serde(rename = "interpolating-i")]
    InterpolatingI,
    /// `‖Λ^ℓ∂f‖₀² ≤ (K/(ℓκ))^ℓ` under `S^M_ℓ ≥ −K`, `Ric^N_ℓ ≤ −κ`.
    #[serde(rename = "interpolating-ii")]
    InterpolatingII,
    /// Lower bounds on maxima under positive curvature, see [`LowerPart`].
    #[serde(rename = "positive-lower")]
    PositiveLower,
}

impl TheoremId {
    pub const ALL: [TheoremId; 6] = [
        TheoremId::Royden,
        TheoremId::Norm0,
        TheoremId::Jacobian,
        TheoremId::InterpolatingI,
        TheoremId::InterpolatingII,
        TheoremId::PositiveLower,
    ];

    pub fn id(self) -> &'static str {
        match self {
            TheoremId::Royden => "royden",
            TheoremId::Norm0 => "norm0",
            TheoremId::Jacobian => "jacobian",
            TheoremId::InterpolatingI => "interpolating-i",
            TheoremId::InterpolatingII => "interpolating-ii",
            TheoremId::PositiveLower => "positive-lower",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            TheoremId::Royden => "sup |df|^2 <= (2d/(d+1)) K/kappa; Ric(M) >= -K, H(N) <= -kappa < 0, d = rank",
            TheoremId::Norm0 => "sup |df|_0^2 <= K/kappa; H(M) >= -K, H(N) <= -kappa < 0",
            TheoremId::Jacobian => "sup |L^m df|_0^2 <= (K/(m kappa))^m; S(M) >= -K, Ric_m(N) <= -kappa < 0, m <= n",
            TheoremId::InterpolatingI => {
                "sup sigma_l <= (2l'/(l'+1)) K/kappa; Ric_l(M) >= -K, H(N) <= -kappa < 0, l' = min(l, rank)"
            }
            TheoremId::InterpolatingII => "sup |L^l df|_0^2 <= (K/(l kappa))^l; S_l(M) >= -K, Ric_l(N) <= -kappa < 0",
            TheoremId::PositiveLower => "max sigma_l or |L^l df|_0^2 bounded below; parts i-iv, positive K and kappa",
        }
    }
}

/// Parts of the lower-bound family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LowerPart {
    /// `max σ_ℓ ≥ K/κ` under `Ric^M_ℓ ≥ K`, `H^N ≤ κ`.
    #[default]
    I,
    /// `max σ_ℓ ≥ ℓK/κ` (`ℓ < m`) under `B⊥^M ≥ K`, `B⊥^N ≤ κ`.
    II,
    /// `max ‖Λ^ℓ∂f‖₀² ≥ (K/κ)^ℓ` under `Ric^M_ℓ ≥ K`, `Ric^N_ℓ ≤ κ`, rank `≥ ℓ`.
    III,
    /// `max ‖Λ^m∂f‖₀² ≥ (K/((m−1)κ))^m` under `Ric⊥^M ≥ K`, `B⊥^N ≤ κ`.
    IV,
}

/// Where curvature constants come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ConstantsMode {
    /// Closed forms for constant holomorphic sectional curvature models.
    Analytic,
    /// Empirical bound search on the sampled points.
    #[default]
    Measured,
}

/// One verification scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    pub theorem: TheoremId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part: Option<LowerPart>,
    pub source: MetricSpec,
    pub target: MetricSpec,
    pub map: MapSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    pub region: SampleRegion,
    #[serde(default)]
    pub constants: ConstantsMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub budget: SearchBudget,
    /// Local refinement steps for lower-bound maxima.
    #[serde(default = "default_refine")]
    pub refine: usize,
}

fn default_refine() -> usize {
    200
}

/// A scenario with metrics, map, samples and spectra built.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub spec: ScenarioSpec,
    pub map: HolomorphicMapModel,
    pub seed: u64,
    pub points: Vec<CVector>,
    pub images: Vec<CVector>,
    pub spectra: Vec<SingularSpectrum>,
}

impl Scenario {
    /// `default_seed` is used when the `ScenarioSpec` carries no seed.
    pub fn build(spec: &ScenarioSpec, default_seed: u64) -> Result<Self> {
        let source = spec.source.build()?;
        let target = spec.target.build()?;
        let map = HolomorphicMapModel::new(source, target, &spec.map)?;
        Self::from_map(spec, map, default_seed)
    }

    /// Uses an already built map (for maps without a serializable spec).
    pub fn from_map(spec: &ScenarioSpec, map: HolomorphicMapModel, default_seed: u64) -> Result<Self> {
        let seed = spec.seed.unwrap_or(default_seed);
        let points = spec.region.sample(map.source_dim(), derive_seed(seed, "region"))?;
        let images = points.iter().map(|p| map.value(p)).collect::<Result<Vec<_>>>()?;
        let spectra = points.iter().map(|p| map.singular_spectrum(p)).collect::<Result<Vec<_>>>()?;
        Ok(Scenario {
            spec: spec.clone(),
            map,
            seed,
            points,
            images,
            spectra,
        })
    }

    pub fn source_dim(&self) -> usize {
        self.map.source_dim()
    }

    pub fn target_dim(&self) -> usize {
        self.map.target_dim()
    }

    /// `ℓ` from the `ScenarioSpec`, required to lie in `1..=m`.
    pub fn ell(&self) -> Result<usize> {
        let m = self.source_dim();
        let ell = self
            .spec
            .ell
            .ok_or_else(|| Error::Precondition(format!("theorem {} needs ell", self.spec.theorem.id())))?;
        if ell == 0 || ell > m {
            return Err(Error::OutOfRange(format!("ell = {ell} outside 1..={m}")));
        }
        Ok(ell)
    }

    /// Largest numerical rank of `∂f` over the samples.
    pub fn image_dim(&self) -> usize {
        self.spectra.iter().map(SingularSpectrum::rank).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Source,
    Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Analytic,
    Measured,
}

/// A curvature extreme used as a hypothesis constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureConstant {
    pub side: Side,
    pub functional: String,
    pub kind: BoundKind,
    pub value: f64,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<[f64; 2]>>,
    pub samples: usize,
}

fn pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// Extreme of `functional` on one side of the scenario.
pub fn curvature_constant(
    scn: &Scenario,
    side: Side,
    functional: Functional,
    ell: usize,
    kind: BoundKind,
) -> Result<CurvatureConstant> {
    let (metric, points) = match side {
        Side::Source => (scn.map.source(), &scn.points),
        Side::Target => (scn.map.target(), &scn.images),
    };
    let canon = Canonical::resolve(functional, ell, metric.dim())?;
    match scn.spec.constants {
        ConstantsMode::Analytic => {
            let hol = metric.constant_holomorphic_curvature().ok_or_else(|| {
                Error::Unsupported(format!("no closed-form curvature for {}", metric.label()))
            })?;
            let (lo, hi) = canon.constant_curvature_range(hol, metric.dim());
            Ok(CurvatureConstant {
                side,
                functional: canon.label(),
                kind,
                value: if kind == BoundKind::Lower { lo } else { hi },
                provenance: Provenance::Analytic,
                witness: None,
                samples: 0,
            })
        }
        ConstantsMode::Measured => {
            let seed = derive_seed(scn.seed, if side == Side::Source { "source" } else { "target" });
            let rep = bound_search_at(metric, points, functional, ell, kind, scn.spec.budget, seed)?;
            Ok(CurvatureConstant {
                side,
                functional: canon.label(),
                kind,
                value: rep.value,
                provenance: Provenance::Measured,
                witness: Some(pairs(&rep.witness.point)),
                samples: rep.samples,
            })
        }
    }
}

/// Map functional compared against a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "name", content = "ell")]
pub enum Quantity {
    /// `σ_ℓ = Σ_{α≤ℓ} λ_α²`.
    Sigma(usize),
    /// `‖Λ^ℓ∂f‖₀² = Π_{α≤ℓ} λ_α²`.
    LambdaNormSq(usize),
}

impl Quantity {
    pub fn eval(self, s: &SingularSpectrum) -> Result<f64> {
        match self {
            Quantity::Sigma(l) => s.sigma(l),
            Quantity::LambdaNormSq(l) => s.lambda_norm_sq(l),
        }
    }

    pub fn label(self) -> String {
        match self {
            Quantity::Sigma(l) => format!("sigma_{l}"),
            Quantity::LambdaNormSq(l) => format!("lambda_norm_sq_{l}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Pass,
    Fail,
    Inconclusive,
}

/// Outcome of comparing a sampled extreme against a bound.
#[derive(Debug, Clone, Serialize)]
pub struct BoundVerdict {
    pub scenario: String,
    pub theorem: TheoremId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub part: Option<LowerPart>,
    pub quantity: Quantity,
    /// `Upper`: the bound is an upper bound on the supremum.
    pub kind: BoundKind,
    pub lhs: f64,
    pub bound: f64,
    /// Signed distance to the bound, nonnegative when it holds.
    pub margin: f64,
    pub tolerance: f64,
    pub tight: bool,
    pub status: VerdictStatus,
    pub witness: Vec<[f64; 2]>,
    pub samples: usize,
    /// Numerical rank of `∂f` maximized over the samples.
    pub image_dim: usize,
    pub k: f64,
    pub kappa: f64,
    pub source_constant: CurvatureConstant,
    pub target_constant: CurvatureConstant,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundVerdict {
    pub fn passed(&self) -> bool {
        self.status == VerdictStatus::Pass
    }

    /// The quantity recomputed at the witness point.
    pub fn reevaluate(&self, map: &HolomorphicMapModel) -> Result<f64> {
        let z = CVector::from_iterator(self.witness.len(), self.witness.iter().map(|p| c(p[0], p[1])));
        self.quantity.eval(&map.singular_spectrum(&z)?)
    }
}

fn verdict_tolerance(lhs: f64, bound: f64) -> f64 {
    VERDICT_TOL * lhs.abs().max(bound.abs()) + VERDICT_ABS_TOL
}

/// `(2ℓ′/(ℓ′+1)) · K/κ`; `ℓ′ = 1` gives `K/κ` exactly.
pub fn trace_bound(ell_prime: usize, k: f64, kappa: f64) -> f64 {
    let lp = ell_prime as f64;
    (2.0 * lp / (lp + 1.0)) * (k / kappa)
}

/// `(K/(ℓκ))^ℓ`.
pub fn product_bound(ell: usize, k: f64, kappa: f64) -> f64 {
    (k / (ell as f64 * kappa)).powi(ell as i32)
}

/// Index and value of the sampled supremum.
fn sampled_sup(scn: &Scenario, q: Quantity) -> Result<(usize, f64)> {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, s) in scn.spectra.iter().enumerate() {
        let v = q.eval(s)?;
        if v > best.1 {
            best = (i, v);
        }
    }
    Ok(best)
}

fn hypothesis_error(scn: &Scenario, what: &str, constant: &CurvatureConstant) -> Error {
    let at = constant
        .witness
        .as_ref()
        .map(|w| format!(" at {w:?}"))
        .unwrap_or_default();
    Error::Precondition(format!(
        "scenario {}: {what}; {} {} of {} is {:e}{at}",
        scn.spec.name,
        match constant.kind {
            BoundKind::Lower => "inf",
            BoundKind::Upper => "sup",
        },
        constant.functional,
        match constant.side {
            Side::Source => "source",
            Side::Target => "target",
        },
        constant.value,
    ))
}

/// Hypotheses `F^M ≥ −K` (any `K ≥ 0`) and `G^N ≤ −κ` with `κ > 0`.
fn negative_constants(
    scn: &Scenario,
    src: (Functional, usize),
    tgt: (Functional, usize),
) -> Result<(f64, f64, CurvatureConstant, CurvatureConstant)> {
    let sc = curvature_constant(scn, Side::Source, src.0, src.1, BoundKind::Lower)?;
    let tc = curvature_constant(scn, Side::Target, tgt.0, tgt.1, BoundKind::Upper)?;
    let k = (-sc.value).max(0.0);
    let kappa = -tc.value;
    if !(kappa > VERDICT_ABS_TOL) {
        return Err(hypothesis_error(scn, "target curvature must be bounded above by -kappa < 0", &tc));
    }
    Ok((k, kappa, sc, tc))
}

#[allow(clippy::too_many_arguments)]
fn upper_verdict(
    scn: &Scenario,
    quantity: Quantity,
    bound: f64,
    k: f64,
    kappa: f64,
    sc: CurvatureConstant,
    tc: CurvatureConstant,
    part: Option<LowerPart>,
) -> Result<BoundVerdict> {
    let (idx, lhs) = sampled_sup(scn, quantity)?;
    let margin = bound - lhs;
    let tolerance = verdict_tolerance(lhs, bound);
    Ok(BoundVerdict {
        scenario: scn.spec.name.clone(),
        theorem: scn.spec.theorem,
        part,
        quantity,
        kind: BoundKind::Upper,
        lhs,
        bound,
        margin,
        tolerance,
        tight: margin.abs() <= TIGHT_REL * bound.abs(),
        status: if margin >= -tolerance { VerdictStatus::Pass } else { VerdictStatus::Fail },
        witness: pairs(&scn.points[idx]),
        samples: scn.points.len(),
        image_dim: scn.image_dim(),
        k,
        kappa,
        source_constant: sc,
        target_constant: tc,
        note: None,
    })
}

/// `‖∂f‖² = σ_m` against `(2d/(d+1)) K/κ`.
pub fn check_royden(scn: &Scenario) -> Result<BoundVerdict> {
    let m = scn.source_dim();
    let (k, kappa, sc, tc) = negative_constants(scn, (Functional::Ricci, m), (Functional::HoloSec, 1))?;
    let d = scn.image_dim();
    upper_verdict(scn, Quantity::Sigma(m), trace_bound(d, k, kappa), k, kappa, sc, tc, None)
}

/// `‖∂f‖₀² = σ_1` against `K/κ`.
pub fn check_norm0(scn: &Scenario) -> Result<BoundVerdict> {
    let (k, kappa, sc, tc) = negative_constants(scn, (Functional::HoloSec, 1), (Functional::HoloSec, 1))?;
    let mut v = upper_verdict(scn, Quantity::Sigma(1), trace_bound(1, k, kappa), k, kappa, sc, tc, None)?;
    if k == 0.0 {
        v.note = Some("K = 0: the map must be constant".into());
    }
    Ok(v)
}

/// `‖Λ^m∂f‖₀²` against `(K/(mκ))^m`, for `m ≤ n`.
pub fn check_jacobian(scn: &Scenario) -> Result<BoundVerdict> {
    let (m, n) = (scn.source_dim(), scn.target_dim());
    if m > n {
        return Err(Error::Precondition(format!(
            "scenario {}: source dimension {m} exceeds target dimension {n}",
            scn.spec.name
        )));
    }
    let (k, kappa, sc, tc) = negative_constants(scn, (Functional::Scalar, m), (Functional::RicEll, m))?;
    upper_verdict(scn, Quantity::LambdaNormSq(m), product_bound(m, k, kappa), k, kappa, sc, tc, None)
}

/// Which half of the interpolating family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InterpPart {
    I,
    II,
}

/// Part `I`: `σ_ℓ` against `(2ℓ′/(ℓ′+1)) K/κ`. Part `II`: `‖Λ^ℓ∂f‖₀²`
/// against `(K/(ℓκ))^ℓ`.
pub fn check_interpolating(scn: &Scenario, part: InterpPart) -> Result<BoundVerdict> {
    let ell = scn.ell()?;
    match part {
        InterpPart::I => {
            let (k, kappa, sc, tc) =
                negative_constants(scn, (Functional::RicEll, ell), (Functional::HoloSec, 1))?;
            let ell_prime = ell.min(scn.image_dim());
            upper_verdict(scn, Quantity::Sigma(ell), trace_bound(ell_prime, k, kappa), k, kappa, sc, tc, None)
        }
        InterpPart::II => {
            let n = scn.target_dim();
            if ell > n {
                return Err(Error::Precondition(format!(
                    "scenario {}: Ric_{ell} of an {n}-dimensional target is undefined",
                    scn.spec.name
                )));
            }
            let (k, kappa, sc, tc) = negative_constants(scn, (Functional::ScalEll, ell), (Functional::RicEll, ell))?;
            upper_verdict(scn, Quantity::LambdaNormSq(ell), product_bound(ell, k, kappa), k, kappa, sc, tc, None)
        }
    }
}

/// Result of a local ascent from the best sample.
#[derive(Debug, Clone)]
struct Ascent {
    point: CVector,
    value: f64,
    /// Step shrank below resolution without further improvement.
    converged: bool,
    /// The final point lies strictly inside the sampled region.
    interior: bool,
}

/// Compass search for a local maximum of `q` inside the region ball.
fn ascend(scn: &Scenario, q: Quantity, start: &CVector, start_value: f64) -> Result<Ascent> {
    let region = &scn.spec.region;
    let center = region.center_in(scn.source_dim())?;
    let radius = region.radius;
    let m = scn.source_dim();
    let (mut point, mut value) = (start.clone(), start_value);
    let mut step = 0.25 * radius;
    let resolution = 1e-7 * radius.max(1e-3);
    let eval = |z: &CVector| -> Option<f64> {
        if (z - &center).norm() > radius {
            return None;
        }
        scn.map.singular_spectrum(z).ok().and_then(|s| q.eval(&s).ok())
    };
    let mut iterations = 0;
    while step > resolution && iterations < scn.spec.refine {
        iterations += 1;
        let mut moved = false;
        for k in 0..m {
            for dir in [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)] {
                let mut z = point.clone();
                z[k] += dir * step;
                if let Some(v) = eval(&z) {
                    if v > value {
                        point = z;
                        value = v;
                        moved = true;
                    }
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    Ok(Ascent {
        interior: radius > 0.0 && (&point - &center).norm() < radius * (1.0 - 1e-3),
        converged: radius > 0.0 && step <= resolution,
        point,
        value,
    })
}

/// Lower bounds on the maximum of `σ_ℓ` or `‖Λ^ℓ∂f‖₀²` for maps between
/// positively curved spaces. A sampled maximum below the bound is a
/// failure only when local ascent converged to an interior maximum that is
/// still below; otherwise the sampling is reported as inconclusive.
pub fn check_positive_lower(scn: &Scenario, part: LowerPart) -> Result<BoundVerdict> {
    let m = scn.source_dim();
    let d = scn.image_dim();
    if d == 0 {
        return Err(Error::Degenerate(format!("scenario {}: constant map", scn.spec.name)));
    }
    let ell = match part {
        LowerPart::IV => m,
        _ => scn.ell()?,
    };
    let (src, tgt, quantity) = match part {
        LowerPart::I => ((Functional::RicEll, ell), (Functional::HoloSec, 1), Quantity::Sigma(ell)),
        LowerPart::II => {
            if ell >= m {
                return Err(Error::Precondition(format!("scenario {}: part ii needs ell < m", scn.spec.name)));
            }
            ((Functional::OrthBisec, 1), (Functional::OrthBisec, 1), Quantity::Sigma(ell))
        }
        LowerPart::III => {
            if d < ell {
                return Err(Error::Precondition(format!(
                    "scenario {}: part iii needs rank >= {ell}, sampled rank {d}",
                    scn.spec.name
                )));
            }
            if ell > scn.target_dim() {
                return Err(Error::Precondition(format!("scenario {}: ell exceeds target dimension", scn.spec.name)));
            }
            ((Functional::RicEll, ell), (Functional::RicEll, ell), Quantity::LambdaNormSq(ell))
        }
        LowerPart::IV => {
            if m < 2 || d + 1 < m {
                return Err(Error::Precondition(format!(
                    "scenario {}: part iv needs m >= 2 and rank >= m - 1",
                    scn.spec.name
                )));
            }
            ((Functional::RicPerp, 1), (Functional::OrthBisec, 1), Quantity::LambdaNormSq(m))
        }
    };
    let sc = curvature_constant(scn, Side::Source, src.0, src.1, BoundKind::Lower)?;
    let tc = curvature_constant(scn, Side::Target, tgt.0, tgt.1, BoundKind::Upper)?;
    let (k, kappa) = (sc.value, tc.value);
    if !(k > VERDICT_ABS_TOL) {
        return Err(hypothesis_error(scn, "source curvature must be bounded below by K > 0", &sc));
    }
    if !(kappa > VERDICT_ABS_TOL) {
        return Err(hypothesis_error(scn, "target curvature must be bounded above by kappa > 0", &tc));
    }
    let bound = match part {
        LowerPart::I => k / kappa,
        LowerPart::II => ell as f64 * (k / kappa),
        LowerPart::III => (k / kappa).powi(ell as i32),
        LowerPart::IV => (k / ((m - 1) as f64 * kappa)).powi(m as i32),
    };
    let (idx, sampled) = sampled_sup(scn, quantity)?;
    let tolerance = verdict_tolerance(sampled, bound);
    let (lhs, witness, status, note) = if sampled - bound >= -tolerance {
        (sampled, pairs(&scn.points[idx]), VerdictStatus::Pass, None)
    } else {
        let asc = ascend(scn, quantity, &scn.points[idx], sampled)?;
        let status = if asc.value - bound >= -tolerance {
            VerdictStatus::Pass
        } else if asc.converged && asc.interior {
            VerdictStatus::Fail
        } else {
            VerdictStatus::Inconclusive
        };
        let note = match status {
            VerdictStatus::Inconclusive => Some("sampled maximum below the bound; ascent did not reach an interior maximum".into()),
            VerdictStatus::Fail => Some("bound violated at a converged interior maximum".into()),
            VerdictStatus::Pass => Some("bound reached after local ascent".into()),
        };
        (asc.value, pairs(&asc.point), status, note)
    };
    let margin = lhs - bound;
    Ok(BoundVerdict {
        scenario: scn.spec.name.clone(),
        theorem: scn.spec.theorem,
        part: Some(part),
        quantity,
        kind: BoundKind::Lower,
        lhs,
        bound,
        margin,
        tolerance,
        tight: margin.abs() <= TIGHT_REL * bound.abs(),
        status,
        witness,
        samples: scn.points.len(),
        image_dim: d,
        k,
        kappa,
        source_constant: sc,
        target_constant: tc,
        note,
    })
}

/// Runs the check named by the scenario's theorem id.
pub fn run_scenario(scn: &Scenario) -> Result<BoundVerdict> {
    match scn.spec.theorem {
        TheoremId::Royden => check_royden(scn),
        TheoremId::Norm0 => check_norm0(scn),
        TheoremId::Jacobian => check_jacobian(scn),
        TheoremId::InterpolatingI => check_interpolating(scn, InterpPart::I),
        TheoremId::InterpolatingII => check_interpolating(scn, InterpPart::II),
        TheoremId::PositiveLower => check_positive_lower(scn, scn.spec.part.unwrap_or_default()),
    }
}

/// Pointwise comparison of two metrics pinched in holomorphic sectional
/// curvature, `−L_i ≤ H_{g_i} ≤ −U_i`: `|v|²_{g₂} ≤ (L₁/U₂)|v|²_{g₁}` and
/// `|v|²_{g₁} ≤ (L₂/U₁)|v|²_{g₂}`.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub l1: f64,
    pub u1: f64,
    pub l2: f64,
    pub u2: f64,
    pub probes: usize,
    /// Largest `|v|²_{g₂}/|v|²_{g₁}` seen.
    pub max_ratio_21: f64,
    pub max_ratio_12: f64,
    pub holds: bool,
}

pub fn metric_equivalence_check(
    g1: &ChartedKahlerMetric,
    g2: &ChartedKahlerMetric,
    region: &SampleRegion,
    probes: usize,
    budget: SearchBudget,
    seed: u64,
) -> Result<EquivalenceReport> {
    if g1.dim() != g2.dim() {
        return Err(Error::Dimension("metrics live on charts of different dimension".into()));
    }
    let m = g1.dim();
    let points = region.sample(m, derive_seed(seed, "region"))?;
    let hol = |g: &ChartedKahlerMetric, kind| bound_search_at(g, &points, Functional::HoloSec, 1, kind, budget, seed);
    let (l1, u1) = (-hol(g1, BoundKind::Lower)?.value, -hol(g1, BoundKind::Upper)?.value);
    let (l2, u2) = (-hol(g2, BoundKind::Lower)?.value, -hol(g2, BoundKind::Upper)?.value);
    if !(u1 > 0.0 && u2 > 0.0) {
        return Err(Error::Precondition(format!(
            "both metrics need negative holomorphic sectional curvature; measured sup H = {:e}, {:e}",
            -u1, -u2
        )));
    }
    let mut rng = rng_for(derive_seed(seed, "equivalence"), 0);
    let (mut r21, mut r12) = (0.0f64, 0.0f64);
    for i in 0..probes {
        let z = &points[i % points.len()];
        let v = sphere_point(&mut rng, m);
        let n1 = g1.gram(z)?.norm_sq(&v);
        let n2 = g2.gram(z)?.norm_sq(&v);
        r21 = r21.max(n2 / n1);
        r12 = r12.max(n1 / n2);
    }
    let tol = 1.0 + VERDICT_TOL;
    Ok(EquivalenceReport {
        l1,
        u1,
        l2,
        u2,
        probes,
        max_ratio_21: r21,
        max_ratio_12: r12,
        holds: r21 <= (l1 / u2) * tol && r12 <= (l2 / u1) * tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(theorem: TheoremId, source: MetricSpec, target: MetricSpec, map: MapSpec) -> ScenarioSpec {
        ScenarioSpec {
            name: "t".into(),
            theorem,
            part: None,
            source,
            target,
            map,
            ell: None,
            region: SampleRegion::ball(0.4, 8),
            constants: ConstantsMode::Measured,
            seed: Some(1),
            budget: SearchBudget { frames: 6, refine: 6 },
            refine: 50,
        }
    }

    #[test]
    fn flat_target_is_rejected() {
        let s = spec(
            TheoremId::Norm0,
            MetricSpec::PoincareBall { dim: 1, scale: 1.0 },
            MetricSpec::Flat { dim: 1 },
            MapSpec::Identity,
        );
        let scn = Scenario::build(&s, 0).unwrap();
        assert!(matches!(check_norm0(&scn), Err(Error::Precondition(_))));
    }

    #[test]
    fn disk_identity_is_sharp() {
        let s = spec(
            TheoremId::Norm0,
            MetricSpec::PoincareBall { dim: 1, scale: 3.0 },
            MetricSpec::PoincareBall { dim: 1, scale: 1.0 },
            MapSpec::Identity,
        );
        let v = check_norm0(&Scenario::build(&s, 0).unwrap()).unwrap();
        assert!(v.passed() && v.tight, "{v:?}");
        assert!((v.lhs - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn bound_formulas_coincide() {
        assert_eq!(trace_bound(1, 0.7, 1.3), 0.7 / 1.3);
        assert_eq!(product_bound(1, 0.7, 1.3), 0.7 / 1.3);
        let s = SingularSpectrum {
            values: vec![0.3, 0.2],
            source_frame: crate::xlinalg::CMatrix::identity(2, 2),
            target_frame: crate::xlinalg::CMatrix::identity(2, 2),
        };
        assert_eq!(Quantity::Sigma(1).eval(&s).unwrap(), Quantity::LambdaNormSq(1).eval(&s).unwrap());
    }

    #[test]
    fn theorem_ids_round_trip() {
        for t in TheoremId::ALL {
            let json = serde_json::to_string(&t).unwrap();
            assert_eq!(json, format!("\"{}\"", t.id()));
            assert_eq!(serde_json::from_str::<TheoremId>(&json).unwrap(), t);
        }
    }
}
