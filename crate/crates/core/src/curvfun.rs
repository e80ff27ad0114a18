//! Curvature functionals of a Kähler curvature tensor and empirical bound
//! search over points and subspaces.
//!
//! All functionals are evaluated on `g`-unitary vectors. A random unitary
//! `U` in orthonormal coordinates becomes the `g`-unitary basis `C⁻* U`
//! where `g = C C*`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{curvature, ChartedKahlerMetric, CurvatureData};
use crate::sampling::{cayley_unitary, derive_seed, haar_unitary, random_hermitian, rng_for, SampleRegion};
use crate::xlinalg::{c, cholesky, hermitian_eigen, lower_inverse, relative_eigen, CMatrix, CVector, HermitianForm};

/// Tolerance for membership and orthogonality preconditions.
pub const SUBSPACE_TOL: f64 = 1e-8;
const ORTHONORMAL_TOL: f64 = 1e-10;

/// `ℓ` vectors spanning `Σ ⊂ T'_x M`, orthonormal for the metric at `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceFrame {
    columns: CMatrix,
}

impl SubspaceFrame {
    pub fn new(g: &HermitianForm, columns: CMatrix) -> Result<Self> {
        if columns.nrows() != g.dim() || columns.ncols() == 0 || columns.ncols() > g.dim() {
            return Err(Error::Dimension(format!(
                "frame is {}x{}, metric has dim {}",
                columns.nrows(),
                columns.ncols(),
                g.dim()
            )));
        }
        let gram = columns.adjoint() * g.matrix() * &columns;
        let k = columns.ncols();
        let defect = (gram - CMatrix::identity(k, k)).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if defect > ORTHONORMAL_TOL {
            return Err(Error::NotOrthogonal { inner: defect });
        }
        Ok(SubspaceFrame { columns })
    }

    /// First `ell` columns of `C⁻* U` for a unitary `U`.
    pub fn from_unitary(g: &HermitianForm, u: &CMatrix, ell: usize) -> Result<Self> {
        let basis = unitary_basis(g)? * u;
        Self::new(g, basis.columns(0, ell).into_owned())
    }

    /// A `g`-unitary basis of the whole tangent space.
    pub fn full(g: &HermitianForm) -> Result<Self> {
        Self::new(g, unitary_basis(g)?)
    }

    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }

    pub fn columns(&self) -> &CMatrix {
        &self.columns
    }

    pub fn vector(&self, i: usize) -> CVector {
        self.columns.column(i).into_owned()
    }

    /// `Σ'` spanned by `E U` for an `ℓ x ℓ` unitary `U`.
    pub fn reframed(&self, u: &CMatrix) -> SubspaceFrame {
        SubspaceFrame {
            columns: &self.columns * u,
        }
    }
}

/// `C⁻*` for `g = C C*`: its columns are a `g`-unitary basis.
pub fn unitary_basis(g: &HermitianForm) -> Result<CMatrix> {
    Ok(lower_inverse(&cholesky(g)?)?.adjoint())
}

fn nonzero_norm_sq(curv: &CurvatureData, x: &CVector) -> Result<f64> {
    let n = curv.norm_sq(x);
    if !(n > 0.0) || x.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::ZeroVector);
    }
    Ok(n)
}

/// `H(X) = R(X, X̄, X, X̄) / |X|⁴`.
pub fn holo_sec(curv: &CurvatureData, x: &CVector) -> Result<f64> {
    let n = nonzero_norm_sq(curv, x)?;
    Ok(curv.r.bisectional(x, x) / (n * n))
}

/// `R(X, X̄, Y, Ȳ) / (|X|² |Y|²)` for arbitrary nonzero `X`, `Y`.
pub fn bisec(curv: &CurvatureData, x: &CVector, y: &CVector) -> Result<f64> {
    let nx = nonzero_norm_sq(curv, x)?;
    let ny = nonzero_norm_sq(curv, y)?;
    Ok(curv.r.bisectional(x, y) / (nx * ny))
}

/// Orthogonal bisectional curvature; requires `⟨X, Ȳ⟩ = 0`.
pub fn orth_bisec(curv: &CurvatureData, x: &CVector, y: &CVector) -> Result<f64> {
    let nx = nonzero_norm_sq(curv, x)?;
    let ny = nonzero_norm_sq(curv, y)?;
    let inner = curv.inner(x, y).norm() / (nx * ny).sqrt();
    if inner > ORTHONORMAL_TOL {
        return Err(Error::NotOrthogonal { inner });
    }
    Ok(curv.r.bisectional(x, y) / (nx * ny))
}

/// `Ric(x, Σ)(v, v̄) / |v|²` with `Σ` spanned by `sigma`.
pub fn ric_sigma(curv: &CurvatureData, sigma: &SubspaceFrame, v: &CVector) -> Result<f64> {
    let nv = nonzero_norm_sq(curv, v)?;
    let e = sigma.columns();
    let coeffs = e.adjoint() * curv.g.matrix() * v;
    let resid = curv.norm_sq(&(v - e * coeffs)).max(0.0).sqrt() / nv.sqrt();
    if resid > SUBSPACE_TOL {
        return Err(Error::NotInSubspace { residual: resid });
    }
    let sum: f64 = (0..sigma.dim()).map(|i| curv.r.bisectional(&sigma.vector(i), v)).sum();
    Ok(sum / nv)
}

/// `S(x, Σ) = Σ_{i,j} R(E_i, Ē_i, E_j, Ē_j)`.
pub fn scal_sigma(curv: &CurvatureData, sigma: &SubspaceFrame) -> f64 {
    let k = sigma.dim();
    let cols: Vec<CVector> = (0..k).map(|i| sigma.vector(i)).collect();
    let mut s = 0.0;
    for i in 0..k {
        for j in 0..k {
            s += curv.r.bisectional(&cols[i], &cols[j]);
        }
    }
    s
}

/// The Hermitian form `Q[(b, a)] = Σ_j R(E_j, Ē_j, E_a, Ē_b)` of `Ric(x, Σ)`
/// in the basis of `Σ`.
pub fn ric_sigma_form(curv: &CurvatureData, sigma: &SubspaceFrame) -> HermitianForm {
    let k = sigma.dim();
    let cols: Vec<CVector> = (0..k).map(|i| sigma.vector(i)).collect();
    let mut q = CMatrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            q[(b, a)] = cols.iter().map(|e| curv.r.eval(e, e, &cols[a], &cols[b])).sum();
        }
    }
    HermitianForm::new(q).expect("restricted Ricci form of a Kähler tensor is Hermitian")
}

/// Ricci form in coordinates, `ric[(d, c)] = Σ_j R(E_j, Ē_j, ∂_c, ∂̄_d)`.
pub fn ricci_form(curv: &CurvatureData) -> Result<HermitianForm> {
    let full = SubspaceFrame::full(&curv.g)?;
    let n = curv.dim();
    let cols: Vec<CVector> = (0..n).map(|i| full.vector(i)).collect();
    let mut q = CMatrix::zeros(n, n);
    for cidx in 0..n {
        for d in 0..n {
            let mut ec = CVector::zeros(n);
            let mut ed = CVector::zeros(n);
            ec[cidx] = c(1.0, 0.0);
            ed[d] = c(1.0, 0.0);
            q[(d, cidx)] = cols.iter().map(|e| curv.r.eval(e, e, &ec, &ed)).sum();
        }
    }
    HermitianForm::new(q)
}

/// `Ric(X, X̄) / |X|²`.
pub fn ricci(curv: &CurvatureData, x: &CVector) -> Result<f64> {
    ric_sigma(curv, &SubspaceFrame::full(&curv.g)?, x)
}

/// `Ric⊥(X, X̄) / |X|² = Ric(X, X̄)/|X|² - H(X)`.
pub fn ric_perp(curv: &CurvatureData, x: &CVector) -> Result<f64> {
    Ok(ricci(curv, x)? - holo_sec(curv, x)?)
}

/// Scalar curvature `Σ_{i,j} R(E_i, Ē_i, E_j, Ē_j)` over a unitary basis.
pub fn scalar(curv: &CurvatureData) -> Result<f64> {
    Ok(scal_sigma(curv, &SubspaceFrame::full(&curv.g)?))
}

/// Curvature functionals that take a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    /// Holomorphic sectional curvature `H`.
    HoloSec,
    /// Bisectional curvature over all pairs.
    Bisec,
    /// Bisectional curvature over orthogonal pairs, `B⊥`.
    OrthBisec,
    Ricci,
    RicPerp,
    /// `Ric_ℓ`: `Ric(x, Σ)` over all `ℓ`-dimensional `Σ` and unit `v ∈ Σ`.
    RicEll,
    /// `S_ℓ`: `S(x, Σ)` over all `ℓ`-dimensional `Σ`.
    ScalEll,
    Scalar,
}

impl Functional {
    pub const ALL: [Functional; 8] = [
        Functional::HoloSec,
        Functional::Bisec,
        Functional::OrthBisec,
        Functional::Ricci,
        Functional::RicPerp,
        Functional::RicEll,
        Functional::ScalEll,
        Functional::Scalar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Functional::HoloSec => "holo_sec",
            Functional::Bisec => "bisec",
            Functional::OrthBisec => "orth_bisec",
            Functional::Ricci => "ricci",
            Functional::RicPerp => "ric_perp",
            Functional::RicEll => "ric_ell",
            Functional::ScalEll => "scal_ell",
            Functional::Scalar => "scalar",
        }
    }

    pub fn uses_ell(self) -> bool {
        matches!(self, Functional::RicEll | Functional::ScalEll)
    }
}

/// A functional with its subspace dimension resolved. `Ric_1` and `S_1`
/// are `H`, `Ric_m` is `Ric` and `S_m` is the scalar curvature; these are
/// mapped to the same evaluation so that coinciding bounds agree exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Canonical {
    HoloSec,
    Bisec,
    OrthBisec,
    Ricci,
    RicPerp,
    RicEll(usize),
    ScalEll(usize),
    Scalar,
}

impl Canonical {
    pub fn resolve(functional: Functional, ell: usize, dim: usize) -> Result<Self> {
        let needs_ell = functional.uses_ell();
        if needs_ell && (ell == 0 || ell > dim) {
            return Err(Error::OutOfRange(format!(
                "subspace dimension {ell} outside 1..={dim}"
            )));
        }
        Ok(match functional {
            Functional::HoloSec => Canonical::HoloSec,
            Functional::Bisec => Canonical::Bisec,
            Functional::OrthBisec => {
                if dim < 2 {
                    return Err(Error::Unsupported(
                        "orthogonal bisectional curvature needs dimension at least 2".into(),
                    ));
                }
                Canonical::OrthBisec
            }
            Functional::Ricci => Canonical::Ricci,
            Functional::RicPerp => Canonical::RicPerp,
            Functional::Scalar => Canonical::Scalar,
            Functional::RicEll if ell == 1 => Canonical::HoloSec,
            Functional::RicEll if ell == dim => Canonical::Ricci,
            Functional::RicEll => Canonical::RicEll(ell),
            Functional::ScalEll if ell == 1 => Canonical::HoloSec,
            Functional::ScalEll if ell == dim => Canonical::Scalar,
            Functional::ScalEll => Canonical::ScalEll(ell),
        })
    }

    pub fn label(self) -> String {
        match self {
            Canonical::HoloSec => "holo_sec".into(),
            Canonical::Bisec => "bisec".into(),
            Canonical::OrthBisec => "orth_bisec".into(),
            Canonical::Ricci => "ricci".into(),
            Canonical::RicPerp => "ric_perp".into(),
            Canonical::RicEll(l) => format!("ric_ell[{l}]"),
            Canonical::ScalEll(l) => format!("scal_ell[{l}]"),
            Canonical::Scalar => "scalar".into(),
        }
    }

    /// Number of independent random unitaries a search state needs.
    fn frames_needed(self) -> usize {
        match self {
            Canonical::Bisec => 2,
            Canonical::Ricci | Canonical::Scalar => 0,
            _ => 1,
        }
    }

    /// Extreme values `(min, max)` on a space of constant holomorphic
    /// sectional curvature `c` and dimension `m`, where
    /// `R = (c/2)(g ⊗ g + swap)`.
    pub fn constant_curvature_range(self, c: f64, m: usize) -> (f64, f64) {
        let mf = m as f64;
        let both = |v: f64| (v, v);
        match self {
            Canonical::HoloSec => both(c),
            // (c/2)(1 + |⟨X, Y⟩|²) for unit X, Y
            Canonical::Bisec => {
                let (a, b) = (0.5 * c, c);
                (a.min(b), a.max(b))
            }
            Canonical::OrthBisec => both(0.5 * c),
            Canonical::Ricci => both(0.5 * c * (mf + 1.0)),
            Canonical::RicPerp => both(0.5 * c * (mf - 1.0)),
            Canonical::RicEll(l) => both(0.5 * c * (l as f64 + 1.0)),
            Canonical::ScalEll(l) => both(0.5 * c * (l as f64) * (l as f64 + 1.0)),
            Canonical::Scalar => both(0.5 * c * mf * (mf + 1.0)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Lower,
    Upper,
}

/// Point, subspace and vectors at which a reported extreme value occurs.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub point: CVector,
    pub frame: Option<SubspaceFrame>,
    pub vectors: Vec<CVector>,
}

/// Sampling effort for [`bound_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchBudget {
    /// Random frames drawn per point.
    pub frames: usize,
    /// Accept-if-better perturbation steps from the best frame at a point.
    pub refine: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { frames: 24, refine: 40 }
    }
}

/// Empirical extreme value of a curvature functional. Sampling cannot
/// certify a bound; `empirical` is always set.
#[derive(Debug, Clone)]
pub struct CurvatureBoundReport {
    pub functional: Canonical,
    pub kind: BoundKind,
    pub value: f64,
    pub witness: Witness,
    pub points: usize,
    pub samples: usize,
    pub refinements: usize,
    pub seed: u64,
    pub empirical: bool,
}

impl CurvatureBoundReport {
    /// Value of the functional recomputed from the witness alone.
    pub fn reevaluate(&self, metric: &ChartedKahlerMetric) -> Result<f64> {
        let curv = curvature(metric, &self.witness.point)?;
        evaluate_witness(&curv, self.functional, &self.witness)
    }
}

fn evaluate_witness(curv: &CurvatureData, f: Canonical, w: &Witness) -> Result<f64> {
    let v = |i: usize| {
        w.vectors
            .get(i)
            .ok_or_else(|| Error::Precondition("witness is missing a vector".into()))
    };
    let frame = || {
        w.frame
            .as_ref()
            .ok_or_else(|| Error::Precondition("witness is missing a frame".into()))
    };
    match f {
        Canonical::HoloSec => holo_sec(curv, v(0)?),
        Canonical::Bisec => bisec(curv, v(0)?, v(1)?),
        Canonical::OrthBisec => orth_bisec(curv, v(0)?, v(1)?),
        Canonical::Ricci => ricci(curv, v(0)?),
        Canonical::RicPerp => ric_perp(curv, v(0)?),
        Canonical::RicEll(_) => ric_sigma(curv, frame()?, v(0)?),
        Canonical::ScalEll(_) | Canonical::Scalar => Ok(scal_sigma(curv, frame()?)),
    }
}

struct Candidate {
    value: f64,
    frame: Option<SubspaceFrame>,
    vectors: Vec<CVector>,
}

/// Evaluates the functional on the search state `us` (unitaries in
/// orthonormal coordinates), extremizing over the direction inside `Σ`
/// exactly where that is an eigenvalue problem.
fn evaluate_state(curv: &CurvatureData, f: Canonical, kind: BoundKind, basis: &CMatrix, us: &[CMatrix]) -> Result<Candidate> {
    let col = |u: &CMatrix, i: usize| -> CVector { basis * u.column(i) };
    let pick = |vals: &[f64]| match kind {
        BoundKind::Lower => vals.len() - 1,
        BoundKind::Upper => 0,
    };
    Ok(match f {
        Canonical::HoloSec => {
            let x = col(&us[0], 0);
            Candidate { value: holo_sec(curv, &x)?, frame: None, vectors: vec![x] }
        }
        Canonical::Bisec => {
            let (x, y) = (col(&us[0], 0), col(&us[1], 0));
            Candidate { value: bisec(curv, &x, &y)?, frame: None, vectors: vec![x, y] }
        }
        Canonical::OrthBisec => {
            let (x, y) = (col(&us[0], 0), col(&us[0], 1));
            Candidate { value: orth_bisec(curv, &x, &y)?, frame: None, vectors: vec![x, y] }
        }
        Canonical::RicPerp => {
            let x = col(&us[0], 0);
            Candidate { value: ric_perp(curv, &x)?, frame: None, vectors: vec![x] }
        }
        Canonical::Ricci => {
            let spec = relative_eigen(&ricci_form(curv)?, &curv.g)?;
            let i = pick(&spec.values);
            Candidate {
                value: spec.values[i],
                frame: None,
                vectors: vec![spec.vectors.column(i).into_owned()],
            }
        }
        Canonical::RicEll(l) => {
            let frame = SubspaceFrame::new(&curv.g, (basis * &us[0]).columns(0, l).into_owned())?;
            let spec = hermitian_eigen(&ric_sigma_form(curv, &frame));
            let i = pick(&spec.values);
            let v = frame.columns() * spec.vectors.column(i);
            Candidate { value: spec.values[i], frame: Some(frame), vectors: vec![v] }
        }
        Canonical::ScalEll(l) => {
            let frame = SubspaceFrame::new(&curv.g, (basis * &us[0]).columns(0, l).into_owned())?;
            Candidate { value: scal_sigma(curv, &frame), frame: Some(frame), vectors: Vec::new() }
        }
        Canonical::Scalar => {
            let frame = SubspaceFrame::full(&curv.g)?;
            Candidate { value: scal_sigma(curv, &frame), frame: Some(frame), vectors: Vec::new() }
        }
    })
}

fn better(kind: BoundKind, a: f64, b: f64) -> bool {
    match kind {
        BoundKind::Lower => a < b,
        BoundKind::Upper => a > b,
    }
}

struct PointResult {
    cand: Candidate,
    samples: usize,
    refinements: usize,
}

fn search_point(
    curv: &CurvatureData,
    f: Canonical,
    kind: BoundKind,
    budget: SearchBudget,
    seed: u64,
    stream: u64,
) -> Result<PointResult> {
    let n = curv.dim();
    let basis = unitary_basis(&curv.g)?;
    let k = f.frames_needed();
    if k == 0 {
        return Ok(PointResult {
            cand: evaluate_state(curv, f, kind, &basis, &[])?,
            samples: 1,
            refinements: 0,
        });
    }
    let mut rng = rng_for(seed, stream);
    let mut best: Option<(Vec<CMatrix>, Candidate)> = None;
    for _ in 0..budget.frames.max(1) {
        let us: Vec<CMatrix> = (0..k).map(|_| haar_unitary(&mut rng, n)).collect();
        // Bisec contains H on the diagonal X = Y, which random pairs miss.
        let diagonal = (f == Canonical::Bisec).then(|| vec![us[0].clone(), us[0].clone()]);
        for state in std::iter::once(us).chain(diagonal) {
            let cand = evaluate_state(curv, f, kind, &basis, &state)?;
            if best.as_ref().is_none_or(|(_, b)| better(kind, cand.value, b.value)) {
                best = Some((state, cand));
            }
        }
    }
    let (mut us, mut cand) = best.expect("at least one frame drawn");
    let mut step = 0.5;
    let mut refinements = 0;
    for _ in 0..budget.refine {
        let trial: Vec<CMatrix> = us
            .iter()
            .map(|u| u * cayley_unitary(&random_hermitian(&mut rng, n), step))
            .collect();
        let tc = evaluate_state(curv, f, kind, &basis, &trial)?;
        if better(kind, tc.value, cand.value) {
            us = trial;
            cand = tc;
            refinements += 1;
        } else {
            step *= 0.8;
        }
    }
    Ok(PointResult {
        cand,
        samples: budget.frames.max(1),
        refinements,
    })
}

/// Empirical extreme of `functional` over `points`, random Haar frames and
/// local unitary refinement. Points are processed in parallel with one
/// random stream per point, so the result does not depend on scheduling.
pub fn bound_search_at(
    metric: &ChartedKahlerMetric,
    points: &[CVector],
    functional: Functional,
    ell: usize,
    kind: BoundKind,
    budget: SearchBudget,
    seed: u64,
) -> Result<CurvatureBoundReport> {
    if points.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let canon = Canonical::resolve(functional, ell, metric.dim())?;
    let side = match kind {
        BoundKind::Lower => "lower",
        BoundKind::Upper => "upper",
    };
    let run_seed = derive_seed(seed, &format!("{}:{side}", canon.label()));
    let results: Vec<Result<(CVector, PointResult)>> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let curv = curvature(metric, p)?;
            Ok((p.clone(), search_point(&curv, canon, kind, budget, run_seed, i as u64)?))
        })
        .collect();
    let mut best: Option<(CVector, Candidate)> = None;
    let (mut samples, mut refinements) = (0, 0);
    for r in results {
        let (p, res) = r?;
        samples += res.samples;
        refinements += res.refinements;
        if best.as_ref().is_none_or(|(_, b)| better(kind, res.cand.value, b.value)) {
            best = Some((p, res.cand));
        }
    }
    let (point, cand) = best.expect("nonempty point set");
    Ok(CurvatureBoundReport {
        functional: canon,
        kind,
        value: cand.value,
        witness: Witness {
            point,
            frame: cand.frame,
            vectors: cand.vectors,
        },
        points: points.len(),
        samples,
        refinements,
        seed,
        empirical: true,
    })
}

/// [`bound_search_at`] over a seeded sample of `region`.
pub fn bound_search(
    metric: &ChartedKahlerMetric,
    functional: Functional,
    ell: usize,
    kind: BoundKind,
    region: &SampleRegion,
    budget: SearchBudget,
    seed: u64,
) -> Result<CurvatureBoundReport> {
    let points = region.sample(metric.dim(), seed)?;
    bound_search_at(metric, &points, functional, ell, kind, budget, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(v.len(), v.iter().map(|&(a, b)| c(a, b)))
    }

    #[test]
    fn flat_functionals_vanish() {
        let g = ChartedKahlerMetric::flat(3).unwrap();
        let curv = curvature(&g, &pt(&[(0.1, 0.0), (0.0, 0.2), (0.3, 0.3)])).unwrap();
        let x = pt(&[(1.0, 0.0), (0.0, 1.0), (2.0, 0.0)]);
        assert_eq!(holo_sec(&curv, &x).unwrap(), 0.0);
        assert_eq!(scalar(&curv).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = ChartedKahlerMetric::poincare_ball(2, 1.0).unwrap();
        let curv = curvature(&g, &pt(&[(0.1, 0.0), (0.0, 0.2)])).unwrap();
        assert_eq!(holo_sec(&curv, &CVector::zeros(2)), Err(Error::ZeroVector));
        let x = pt(&[(1.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(orth_bisec(&curv, &x, &x), Err(Error::NotOrthogonal { .. })));
        let frame = SubspaceFrame::from_unitary(&curv.g, &CMatrix::identity(2, 2), 1).unwrap();
        let off = frame.vector(0) + unitary_basis(&curv.g).unwrap().column(1);
        assert!(matches!(ric_sigma(&curv, &frame, &off), Err(Error::NotInSubspace { .. })));
    }

    #[test]
    fn canonical_forms_collapse_endpoints() {
        assert_eq!(Canonical::resolve(Functional::RicEll, 1, 3).unwrap(), Canonical::HoloSec);
        assert_eq!(Canonical::resolve(Functional::RicEll, 3, 3).unwrap(), Canonical::Ricci);
        assert_eq!(Canonical::resolve(Functional::ScalEll, 3, 3).unwrap(), Canonical::Scalar);
        assert_eq!(Canonical::resolve(Functional::RicEll, 2, 3).unwrap(), Canonical::RicEll(2));
        assert!(Canonical::resolve(Functional::RicEll, 4, 3).is_err());
        assert!(Canonical::resolve(Functional::OrthBisec, 1, 1).is_err());
    }

    #[test]
    fn search_on_flat_is_zero() {
        let g = ChartedKahlerMetric::flat(2).unwrap();
        let reg = SampleRegion::ball(1.0, 4);
        for f in Functional::ALL {
            let r = bound_search(&g, f, 1, BoundKind::Lower, &reg, SearchBudget { frames: 3, refine: 3 }, 1).unwrap();
            assert_eq!(r.value, 0.0, "{f:?}");
        }
    }
}
