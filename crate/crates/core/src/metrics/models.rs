//! Model Kähler metrics on coordinate charts and their 2-jets.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::{dz, dzbar, wirtinger_extrapolated, FdSteps};
use crate::xlinalg::{c, CMatrix, CVector, HermitianForm, C64};

/// Potential-backed evaluation is refused where the local length scale drops
/// below this: fourth-derivative stencils then lose their accuracy to roundoff.
pub const MIN_FD_LENGTH_SCALE: f64 = 0.02;

/// Metric Gram matrix with its first and mixed second derivatives at a point.
///
/// `g` is in Gram convention (`g[(b, a)] = g_{a b̄}`), `dg[k] = ∂g/∂z^k` and
/// `ddg[k][l] = ∂²g/∂z^k∂z̄^l`.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub g: HermitianForm,
    pub dg: Vec<CMatrix>,
    pub ddg: Vec<Vec<CMatrix>>,
}

impl MetricJet {
    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    /// Jet of the pulled-back metric under the linear chart change `z = M w`.
    pub fn pullback_linear(&self, m: &CMatrix) -> MetricJet {
        let n = self.dim();
        let conj = |a: &CMatrix| m.adjoint() * a * m;
        let dg = (0..n)
            .map(|k| {
                (0..n).fold(CMatrix::zeros(n, n), |acc, q| acc + conj(&self.dg[q]) * m[(q, k)])
            })
            .collect();
        let ddg = (0..n)
            .map(|k| {
                (0..n)
                    .map(|l| {
                        let mut acc = CMatrix::zeros(n, n);
                        for p in 0..n {
                            for q in 0..n {
                                acc += conj(&self.ddg[p][q]) * (m[(p, k)] * m[(q, l)].conj());
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        MetricJet {
            g: self.g.congruence(m),
            dg,
            ddg,
        }
    }

    fn scaled(mut self, s: f64) -> MetricJet {
        let f = c(s, 0.0);
        self.g = self.g.scaled(s);
        self.dg.iter_mut().for_each(|d| *d *= f);
        self.ddg.iter_mut().flatten().for_each(|d| *d *= f);
        self
    }
}

/// Radial potential profiles `φ = s ψ(|z|²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Profile {
    Flat,
    FubiniStudy,
    Poincare,
}

impl Profile {
    /// `(ψ, ψ', ψ'', ψ''', ψ'''')` at `r`.
    fn derivatives(self, r: f64) -> [f64; 5] {
        match self {
            Profile::Flat => [r, 1.0, 0.0, 0.0, 0.0],
            Profile::FubiniStudy => {
                let a = 1.0 + r;
                [a.ln(), 1.0 / a, -1.0 / (a * a), 2.0 / a.powi(3), -6.0 / a.powi(4)]
            }
            Profile::Poincare => {
                let a = 1.0 - r;
                [-a.ln(), 1.0 / a, 1.0 / (a * a), 2.0 / a.powi(3), 6.0 / a.powi(4)]
            }
        }
    }
}

fn radial_jet(profile: Profile, scale: f64, z: &CVector) -> MetricJet {
    let m = z.len();
    let r = z.norm_squared();
    let [_, p1, p2, p3, p4] = profile.derivatives(r);
    let id = CMatrix::identity(m, m);
    let zz = z * z.adjoint();
    let e = |k: usize| {
        let mut v = CVector::zeros(m);
        v[k] = c(1.0, 0.0);
        v
    };
    let g = (&id * c(p1, 0.0) + &zz * c(p2, 0.0)) * c(scale, 0.0);
    let dg: Vec<CMatrix> = (0..m)
        .map(|k| {
            let zc = z[k].conj();
            (&id * (zc * p2) + &zz * (zc * p3) + e(k) * z.adjoint() * c(p2, 0.0)) * c(scale, 0.0)
        })
        .collect();
    let ddg = (0..m)
        .map(|k| {
            (0..m)
                .map(|l| {
                    let zk = z[k].conj();
                    let zl = z[l];
                    let delta = if k == l { 1.0 } else { 0.0 };
                    let mut acc = &id * (zl * zk * p3 + c(delta * p2, 0.0));
                    acc += &zz * (zl * zk * p4 + c(delta * p3, 0.0));
                    acc += z * e(l).transpose() * (zk * p3);
                    acc += e(k) * z.adjoint() * (zl * p3);
                    acc += e(k) * e(l).transpose() * c(p2, 0.0);
                    acc * c(scale, 0.0)
                })
                .collect()
        })
        .collect();
    MetricJet {
        g: HermitianForm::new(g).expect("radial metric is Hermitian"),
        dg,
        ddg,
    }
}

type PotentialFn = dyn Fn(&CVector) -> f64 + Send + Sync;

/// A metric given only through a Kähler potential; all derivatives come
/// from Richardson-extrapolated Wirtinger differences.
#[derive(Clone)]
pub struct PotentialMetric {
    label: String,
    potential: Arc<PotentialFn>,
    boundary: Arc<PotentialFn>,
    length_scale: Arc<PotentialFn>,
    steps: FdSteps,
}

impl fmt::Debug for PotentialMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialMetric")
            .field("label", &self.label)
            .field("steps", &self.steps)
            .finish()
    }
}

#[derive(Debug, Clone)]
enum Model {
    Radial { profile: Profile, scale: f64 },
    Scaled { factor: f64, inner: Box<ChartedKahlerMetric> },
    Product(Box<ChartedKahlerMetric>, Box<ChartedKahlerMetric>),
    Potential(PotentialMetric),
}

/// A Kähler metric on a complex coordinate chart.
#[derive(Debug, Clone)]
pub struct ChartedKahlerMetric {
    dim: usize,
    model: Model,
}

/// Which model family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Flat,
    FubiniStudy,
    PoincareBall,
}

impl ChartedKahlerMetric {
    fn radial(profile: Profile, dim: usize, scale: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("metric dimension must be at least 1".into()));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::OutOfRange(format!("scale must be positive, got {scale}")));
        }
        Ok(ChartedKahlerMetric {
            dim,
            model: Model::Radial { profile, scale },
        })
    }

    pub fn flat(dim: usize) -> Result<Self> {
        Self::radial(Profile::Flat, dim, 1.0)
    }

    /// Potential `s log(1 + |z|²)` on all of `C^dim` (affine chart of `P^dim`).
    pub fn fubini_study(dim: usize, scale: f64) -> Result<Self> {
        Self::radial(Profile::FubiniStudy, dim, scale)
    }

    /// Potential `-s log(1 - |z|²)` on the unit ball.
    pub fn poincare_ball(dim: usize, scale: f64) -> Result<Self> {
        Self::radial(Profile::Poincare, dim, scale)
    }

    pub fn model(kind: ModelKind, dim: usize, scale: f64) -> Result<Self> {
        match kind {
            ModelKind::Flat => Self::radial(Profile::Flat, dim, scale),
            ModelKind::FubiniStudy => Self::fubini_study(dim, scale),
            ModelKind::PoincareBall => Self::poincare_ball(dim, scale),
        }
    }

    /// `factor · g`.
    pub fn scaled(inner: ChartedKahlerMetric, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::OutOfRange(format!("scale factor must be positive, got {factor}")));
        }
        Ok(ChartedKahlerMetric {
            dim: inner.dim,
            model: Model::Scaled {
                factor,
                inner: Box::new(inner),
            },
        })
    }

    /// Block-diagonal product metric on `C^{m1} x C^{m2}`.
    pub fn product(first: ChartedKahlerMetric, second: ChartedKahlerMetric) -> Self {
        ChartedKahlerMetric {
            dim: first.dim + second.dim,
            model: Model::Product(Box::new(first), Box::new(second)),
        }
    }

    /// Metric backed only by a potential. `boundary` returns the distance to
    /// the chart boundary (positive inside, `f64::INFINITY` if unbounded).
    pub fn from_potential<P, B>(label: &str, dim: usize, potential: P, boundary: B) -> Result<Self>
    where
        P: Fn(&CVector) -> f64 + Send + Sync + 'static,
        B: Fn(&CVector) -> f64 + Send + Sync + 'static,
    {
        if dim == 0 {
            return Err(Error::Dimension("metric dimension must be at least 1".into()));
        }
        let boundary: Arc<PotentialFn> = Arc::new(boundary);
        let b2 = boundary.clone();
        Ok(ChartedKahlerMetric {
            dim,
            model: Model::Potential(PotentialMetric {
                label: label.to_string(),
                potential: Arc::new(potential),
                boundary,
                length_scale: Arc::new(move |z| b2(z).min(1.0)),
                steps: FdSteps::default(),
            }),
        })
    }

    /// The same metric, evaluated from its potential by finite differences.
    pub fn potential_fd(&self) -> ChartedKahlerMetric {
        if let Model::Potential(_) = self.model {
            return self.clone();
        }
        let (a, b, l) = (self.clone(), self.clone(), self.clone());
        ChartedKahlerMetric {
            dim: self.dim,
            model: Model::Potential(PotentialMetric {
                label: format!("fd[{}]", self.label()),
                potential: Arc::new(move |z| a.potential(z)),
                boundary: Arc::new(move |z| b.boundary_distance(z)),
                length_scale: Arc::new(move |z| l.length_scale(z)),
                steps: FdSteps::default(),
            }),
        }
    }

    pub fn with_fd_steps(mut self, steps: FdSteps) -> Self {
        if let Model::Potential(p) = &mut self.model {
            p.steps = steps;
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_fd_backed(&self) -> bool {
        matches!(self.model, Model::Potential(_))
    }

    pub fn label(&self) -> String {
        match &self.model {
            Model::Radial { profile, scale } => {
                let name = match profile {
                    Profile::Flat => "flat",
                    Profile::FubiniStudy => "fubini_study",
                    Profile::Poincare => "poincare_ball",
                };
                format!("{name}(m={}, s={scale})", self.dim)
            }
            Model::Scaled { factor, inner } => format!("{factor}*{}", inner.label()),
            Model::Product(a, b) => format!("{} x {}", a.label(), b.label()),
            Model::Potential(p) => p.label.clone(),
        }
    }

    fn split(&self, z: &CVector, first_dim: usize) -> (CVector, CVector) {
        (
            z.rows(0, first_dim).into_owned(),
            z.rows(first_dim, z.len() - first_dim).into_owned(),
        )
    }

    /// Euclidean coordinate distance to the chart boundary; infinite for
    /// unbounded charts, nonpositive outside.
    pub fn boundary_distance(&self, z: &CVector) -> f64 {
        match &self.model {
            Model::Radial { profile: Profile::Poincare, .. } => 1.0 - z.norm(),
            Model::Radial { .. } => f64::INFINITY,
            Model::Scaled { inner, .. } => inner.boundary_distance(z),
            Model::Product(a, b) => {
                let (za, zb) = self.split(z, a.dim);
                a.boundary_distance(&za).min(b.boundary_distance(&zb))
            }
            Model::Potential(p) => (p.boundary)(z),
        }
    }

    pub fn contains(&self, z: &CVector) -> bool {
        z.len() == self.dim && self.boundary_distance(z) > 0.0
    }

    /// Coordinate length over which the metric varies appreciably.
    pub fn length_scale(&self, z: &CVector) -> f64 {
        match &self.model {
            Model::Radial { profile, .. } => match profile {
                Profile::Flat => 1.0,
                Profile::FubiniStudy => (1.0 + z.norm_squared()).sqrt(),
                Profile::Poincare => (1.0 - z.norm()).min(1.0),
            },
            Model::Scaled { inner, .. } => inner.length_scale(z),
            Model::Product(a, b) => {
                let (za, zb) = self.split(z, a.dim);
                a.length_scale(&za).min(b.length_scale(&zb))
            }
            Model::Potential(p) => (p.length_scale)(z),
        }
    }

    /// Kähler potential.
    pub fn potential(&self, z: &CVector) -> f64 {
        match &self.model {
            Model::Radial { profile, scale } => scale * profile.derivatives(z.norm_squared())[0],
            Model::Scaled { factor, inner } => factor * inner.potential(z),
            Model::Product(a, b) => {
                let (za, zb) = self.split(z, a.dim);
                a.potential(&za) + b.potential(&zb)
            }
            Model::Potential(p) => (p.potential)(z),
        }
    }

    /// Holomorphic sectional curvature when it is the same constant at every
    /// point and in every direction.
    pub fn constant_holomorphic_curvature(&self) -> Option<f64> {
        match &self.model {
            Model::Radial { profile, scale } => Some(match profile {
                Profile::Flat => 0.0,
                Profile::FubiniStudy => 2.0 / scale,
                Profile::Poincare => -2.0 / scale,
            }),
            Model::Scaled { factor, inner } => inner.constant_holomorphic_curvature().map(|h| h / factor),
            Model::Product(a, b) => match (a.constant_holomorphic_curvature(), b.constant_holomorphic_curvature()) {
                (Some(x), Some(y)) if x == 0.0 && y == 0.0 => Some(0.0),
                _ => None,
            },
            Model::Potential(_) => None,
        }
    }

    fn check_point(&self, z: &CVector) -> Result<()> {
        if z.len() != self.dim {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, chart has {}",
                z.len(),
                self.dim
            )));
        }
        let d = self.boundary_distance(z);
        if !(d > 0.0) {
            return Err(Error::Domain { distance_to_boundary: d });
        }
        Ok(())
    }

    /// Metric Gram matrix at `z`.
    pub fn gram(&self, z: &CVector) -> Result<HermitianForm> {
        self.check_point(z)?;
        match &self.model {
            Model::Potential(p) => {
                let h = p.steps.second * (p.length_scale)(z);
                self.check_stencil(z, 2.0 * h)?;
                potential_gram(p, z, h)
            }
            _ => Ok(self.jet(z)?.g),
        }
    }

    fn check_stencil(&self, z: &CVector, reach: f64) -> Result<()> {
        let d = self.boundary_distance(z);
        if d <= 2.0 * reach || (self.length_scale(z)) < MIN_FD_LENGTH_SCALE {
            return Err(Error::Domain { distance_to_boundary: d });
        }
        Ok(())
    }

    /// Metric with first and mixed second derivatives at `z`.
    pub fn jet(&self, z: &CVector) -> Result<MetricJet> {
        self.check_point(z)?;
        match &self.model {
            Model::Radial { profile, scale } => Ok(radial_jet(*profile, *scale, z)),
            Model::Scaled { factor, inner } => Ok(inner.jet(z)?.scaled(*factor)),
            Model::Product(a, b) => {
                let (za, zb) = self.split(z, a.dim);
                Ok(block_jet(&a.jet(&za)?, &b.jet(&zb)?))
            }
            Model::Potential(p) => {
                let scale = (p.length_scale)(z);
                self.check_stencil(z, 4.0 * p.steps.fourth * scale)?;
                potential_jet(p, z, scale)
            }
        }
    }
}

fn block_jet(a: &MetricJet, b: &MetricJet) -> MetricJet {
    let (ma, mb) = (a.dim(), b.dim());
    let m = ma + mb;
    let embed = |x: Option<&CMatrix>, y: Option<&CMatrix>| {
        let mut out = CMatrix::zeros(m, m);
        if let Some(x) = x {
            out.view_mut((0, 0), (ma, ma)).copy_from(x);
        }
        if let Some(y) = y {
            out.view_mut((ma, ma), (mb, mb)).copy_from(y);
        }
        out
    };
    let g = embed(Some(a.g.matrix()), Some(b.g.matrix()));
    let dg = (0..m)
        .map(|k| if k < ma { embed(Some(&a.dg[k]), None) } else { embed(None, Some(&b.dg[k - ma])) })
        .collect();
    let ddg = (0..m)
        .map(|k| {
            (0..m)
                .map(|l| match (k < ma, l < ma) {
                    (true, true) => embed(Some(&a.ddg[k][l]), None),
                    (false, false) => embed(None, Some(&b.ddg[k - ma][l - ma])),
                    _ => CMatrix::zeros(m, m),
                })
                .collect()
        })
        .collect();
    MetricJet {
        g: HermitianForm::new(g).expect("block metric is Hermitian"),
        dg,
        ddg,
    }
}

fn potential_gram(p: &PotentialMetric, z: &CVector, h: f64) -> Result<HermitianForm> {
    let m = z.len();
    let f = |w: &CVector| c((p.potential)(w), 0.0);
    let mut g = CMatrix::zeros(m, m);
    for a in 0..m {
        for b in a..m {
            // g[(b, a)] = ∂_a ∂_b̄ φ
            let v = wirtinger_extrapolated(&f, z, &[dz(a), dzbar(b)], h);
            g[(b, a)] = v;
            g[(a, b)] = v.conj();
        }
        g[(a, a)].im = 0.0;
    }
    HermitianForm::new(g)
}

fn potential_jet(p: &PotentialMetric, z: &CVector, scale: f64) -> Result<MetricJet> {
    let m = z.len();
    let f = |w: &CVector| c((p.potential)(w), 0.0);
    let g = potential_gram(p, z, p.steps.second * scale)?;
    let h3 = p.steps.third * scale;
    let h4 = p.steps.fourth * scale;
    let dg = (0..m)
        .map(|k| {
            CMatrix::from_fn(m, m, |b, a| wirtinger_extrapolated(&f, z, &[dz(k), dz(a), dzbar(b)], h3))
        })
        .collect();
    let mut ddg = vec![vec![CMatrix::zeros(m, m); m]; m];
    for k in 0..m {
        for l in 0..m {
            for a in 0..m {
                for b in 0..m {
                    // symmetric in (k, a) and in (l, b)
                    if k > a || l > b {
                        continue;
                    }
                    let v: C64 = wirtinger_extrapolated(&f, z, &[dz(k), dzbar(l), dz(a), dzbar(b)], h4);
                    ddg[k][l][(b, a)] = v;
                    ddg[a][l][(b, k)] = v;
                    ddg[k][b][(l, a)] = v;
                    ddg[a][b][(l, k)] = v;
                }
            }
        }
    }
    Ok(MetricJet { g, dg, ddg })
}

/// Serializable description of a model metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricSpec {
    Flat {
        dim: usize,
    },
    FubiniStudy {
        dim: usize,
        #[serde(default = "one")]
        scale: f64,
    },
    PoincareBall {
        dim: usize,
        #[serde(default = "one")]
        scale: f64,
    },
    Scaled {
        factor: f64,
        inner: Box<MetricSpec>,
    },
    Product {
        factors: Vec<MetricSpec>,
    },
}

fn one() -> f64 {
    1.0
}

impl MetricSpec {
    pub fn build(&self) -> Result<ChartedKahlerMetric> {
        match self {
            MetricSpec::Flat { dim } => ChartedKahlerMetric::flat(*dim),
            MetricSpec::FubiniStudy { dim, scale } => ChartedKahlerMetric::fubini_study(*dim, *scale),
            MetricSpec::PoincareBall { dim, scale } => ChartedKahlerMetric::poincare_ball(*dim, *scale),
            MetricSpec::Scaled { factor, inner } => ChartedKahlerMetric::scaled(inner.build()?, *factor),
            MetricSpec::Product { factors } => {
                let mut it = factors.iter();
                let first = it
                    .next()
                    .ok_or_else(|| Error::Dimension("product needs at least one factor".into()))?
                    .build()?;
                it.try_fold(first, |acc, f| Ok(ChartedKahlerMetric::product(acc, f.build()?)))
            }
        }
    }

    /// Replaces the metric by `factor` times itself.
    pub fn scaled_by(&self, factor: f64) -> MetricSpec {
        MetricSpec::Scaled {
            factor,
            inner: Box::new(self.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::wirtinger_richardson;

    fn pt(v: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(v.len(), v.iter().map(|&(a, b)| c(a, b)))
    }

    #[test]
    fn flat_jet_is_trivial() {
        let g = ChartedKahlerMetric::flat(2).unwrap();
        let j = g.jet(&pt(&[(0.4, -1.0), (3.0, 2.0)])).unwrap();
        assert_eq!(j.g.matrix(), &CMatrix::identity(2, 2));
        assert!(j.dg.iter().all(|d| d.norm() == 0.0));
        assert!(j.ddg.iter().flatten().all(|d| d.norm() == 0.0));
    }

    #[test]
    fn origin_values() {
        let p = ChartedKahlerMetric::poincare_ball(1, 1.0).unwrap();
        assert!((p.gram(&pt(&[(0.0, 0.0)])).unwrap().matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        let fs = ChartedKahlerMetric::fubini_study(2, 1.0).unwrap();
        let g = fs.gram(&pt(&[(0.0, 0.0), (0.0, 0.0)])).unwrap();
        assert!((g.matrix() - CMatrix::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn poincare_disk_closed_form() {
        // m = 1: g = s / (1 - |z|²)²
        let p = ChartedKahlerMetric::poincare_ball(1, 2.0).unwrap();
        let z = pt(&[(0.3, 0.4)]);
        let g = p.gram(&z).unwrap().matrix()[(0, 0)];
        assert!((g.re - 2.0 / (0.75f64 * 0.75)).abs() < 1e-13);
    }

    #[test]
    fn domain_errors() {
        let p = ChartedKahlerMetric::poincare_ball(1, 1.0).unwrap();
        assert!(matches!(p.gram(&pt(&[(1.2, 0.0)])), Err(Error::Domain { .. })));
        let fd = p.potential_fd();
        match fd.jet(&pt(&[(0.99, 0.0)])) {
            Err(Error::Domain { distance_to_boundary }) => assert!((distance_to_boundary - 0.01).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        assert!(ChartedKahlerMetric::fubini_study(1, 0.0).is_err());
    }

    #[test]
    fn analytic_jet_matches_fd_of_analytic_gram() {
        let fs = ChartedKahlerMetric::fubini_study(2, 1.5).unwrap();
        let z = pt(&[(0.3, -0.2), (0.1, 0.5)]);
        let jet = fs.jet(&z).unwrap();
        for (b, a) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let entry = |w: &CVector| fs.gram(w).unwrap().matrix()[(b, a)];
            for k in 0..2 {
                let d = wirtinger_richardson(&entry, &z, &[dz(k)], 1e-4);
                assert!((d - jet.dg[k][(b, a)]).norm() < 1e-9);
                for l in 0..2 {
                    let dd = wirtinger_richardson(&entry, &z, &[dz(k), dzbar(l)], 1e-3);
                    assert!((dd - jet.ddg[k][l][(b, a)]).norm() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn product_is_block_diagonal() {
        let a = ChartedKahlerMetric::poincare_ball(1, 1.0).unwrap();
        let b = ChartedKahlerMetric::fubini_study(1, 2.0).unwrap();
        let p = ChartedKahlerMetric::product(a, b);
        let jet = p.jet(&pt(&[(0.2, 0.1), (0.5, -0.5)])).unwrap();
        assert_eq!(jet.g.matrix()[(0, 1)], c(0.0, 0.0));
        assert_eq!(jet.ddg[0][1].norm(), 0.0);
        assert!(jet.dg[1][(1, 1)].norm() > 0.0);
    }

    #[test]
    fn spec_round_trip() {
        let spec: MetricSpec = MetricSpec::Product {
            factors: vec![
                MetricSpec::PoincareBall { dim: 1, scale: 1.0 },
                MetricSpec::Scaled {
                    factor: 2.0,
                    inner: Box::new(MetricSpec::FubiniStudy { dim: 1, scale: 1.0 }),
                },
            ],
        };
        let m = spec.build().unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.constant_holomorphic_curvature(), None);
        let s = MetricSpec::PoincareBall { dim: 2, scale: 1.0 }.scaled_by(4.0).build().unwrap();
        assert_eq!(s.constant_holomorphic_curvature(), Some(-0.5));
    }
}
