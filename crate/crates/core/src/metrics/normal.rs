//! Holomorphic normal coordinates centered at a point.

use crate::error::{Error, Result};
use crate::xlinalg::{c, cholesky, lower_inverse, CMatrix, CVector, HermitianForm};

use super::curvature::{christoffels, contract_christoffel};
use super::models::ChartedKahlerMetric;

/// Coordinates `w` around `center` with
/// `z(w) = center + M (w - q(w))`, `q^a(w) = c^a_{bc} w^b w^c`,
/// `c^a_{bc} = ½ Γ'^a_{bc}` the Christoffel symbols at the center expressed
/// in the frame `M`. The pulled-back metric is the identity at `w = 0` with
/// vanishing first derivatives.
#[derive(Debug, Clone)]
pub struct NormalFrame {
    pub center: CVector,
    /// `M`: columns are the coordinate vectors `∂/∂w^a` at the center.
    pub linear: CMatrix,
    /// `L = M⁻¹`, so `w ≈ L (z - center)` to first order.
    pub linear_inv: CMatrix,
    /// `quadratic[a][(b, c)] = c^a_{bc}`.
    pub quadratic: Vec<CMatrix>,
}

impl NormalFrame {
    /// Frame from the Cholesky factor `g(p) = C C*` (`M = C⁻* U`), optionally
    /// post-composed with a unitary `U`.
    pub fn new(metric: &ChartedKahlerMetric, p: &CVector, align: Option<&CMatrix>) -> Result<Self> {
        let g = metric.gram(p)?;
        let ch = cholesky(&g)?;
        let mut linear = lower_inverse(&ch)?.adjoint();
        if let Some(u) = align {
            if u.shape() != (g.dim(), g.dim()) {
                return Err(Error::Dimension(format!(
                    "alignment unitary is {:?}, metric has dim {}",
                    u.shape(),
                    g.dim()
                )));
            }
            linear *= u;
        }
        let gamma = christoffels(metric, p)?;
        Self::from_parts(p.clone(), linear, &gamma)
    }

    /// Frame whose coordinate vectors at the center are the columns of
    /// `linear`, which must be unitary for the metric at `p`.
    pub fn with_linear(metric: &ChartedKahlerMetric, p: &CVector, linear: CMatrix) -> Result<Self> {
        let g = metric.gram(p)?;
        if linear.shape() != (g.dim(), g.dim()) {
            return Err(Error::Dimension(format!(
                "frame is {:?}, metric has dim {}",
                linear.shape(),
                g.dim()
            )));
        }
        let n = g.dim();
        let defect = (linear.adjoint() * g.matrix() * &linear - CMatrix::identity(n, n))
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        if defect > 1e-9 {
            return Err(Error::NotOrthogonal { inner: defect });
        }
        let gamma = christoffels(metric, p)?;
        Self::from_parts(p.clone(), linear, &gamma)
    }

    fn from_parts(center: CVector, linear: CMatrix, gamma: &[CMatrix]) -> Result<Self> {
        let n = linear.nrows();
        let linear_inv = linear
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("normal frame linear part".into()))?;
        let cols: Vec<CVector> = (0..n).map(|j| linear.column(j).into_owned()).collect();
        let gamma = gamma.to_vec();
        let mut quadratic = vec![CMatrix::zeros(n, n); n];
        for b in 0..n {
            for d in 0..n {
                let v = &linear_inv * contract_christoffel(&gamma, &cols[b], &cols[d]) * c(0.5, 0.0);
                for a in 0..n {
                    quadratic[a][(b, d)] = v[a];
                }
            }
        }
        Ok(NormalFrame {
            center,
            linear,
            linear_inv,
            quadratic,
        })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    fn q(&self, w: &CVector) -> CVector {
        CVector::from_iterator(
            self.dim(),
            self.quadratic.iter().map(|qa| (w.transpose() * qa * w)[(0, 0)]),
        )
    }

    /// `Dq(w)[(a, b)] = ∂q^a/∂w^b`.
    fn dq(&self, w: &CVector) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (a, qa) in self.quadratic.iter().enumerate() {
            let row = (qa + qa.transpose()) * w;
            for b in 0..n {
                out[(a, b)] = row[b];
            }
        }
        out
    }

    /// Chart point for normal coordinates `w`.
    pub fn to_chart(&self, w: &CVector) -> CVector {
        &self.center + &self.linear * (w - self.q(w))
    }

    /// `∂z/∂w` at `w`.
    pub fn jacobian(&self, w: &CVector) -> CMatrix {
        let n = self.dim();
        &self.linear * (CMatrix::identity(n, n) - self.dq(w))
    }

    /// Normal coordinates of chart point `z` (Newton on the quadratic map).
    pub fn from_chart(&self, z: &CVector) -> Result<CVector> {
        let n = self.dim();
        let y = &self.linear_inv * (z - &self.center);
        let mut w = y.clone();
        for _ in 0..50 {
            let resid = &w - self.q(&w) - &y;
            if resid.norm() <= 1e-15 * (1.0 + y.norm()) {
                return Ok(w);
            }
            let jac = CMatrix::identity(n, n) - self.dq(&w);
            let step = jac
                .lu()
                .solve(&resid)
                .ok_or_else(|| Error::Singular("normal chart inversion".into()))?;
            w -= step;
        }
        let resid = (&w - self.q(&w) - &y).norm();
        if resid <= 1e-12 * (1.0 + y.norm()) {
            Ok(w)
        } else {
            Err(Error::NoConvergence(format!(
                "normal coordinate inversion residual {resid:e}"
            )))
        }
    }

    /// Metric in normal coordinates at `w`: `J* g(z(w)) J`.
    pub fn pulled_back_gram(&self, metric: &ChartedKahlerMetric, w: &CVector) -> Result<HermitianForm> {
        let z = self.to_chart(w);
        Ok(metric.gram(&z)?.congruence(&self.jacobian(w)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::{dz, dzbar, wirtinger_richardson};

    fn pt(v: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(v.len(), v.iter().map(|&(a, b)| c(a, b)))
    }

    fn first_derivative_defect(metric: &ChartedKahlerMetric, frame: &NormalFrame) -> f64 {
        let n = frame.dim();
        let zero = CVector::zeros(n);
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let entry = |w: &CVector| frame.pulled_back_gram(metric, w).unwrap().matrix()[(b, a)];
                for k in 0..n {
                    for op in [dz(k), dzbar(k)] {
                        worst = worst.max(wirtinger_richardson(&entry, &zero, &[op], 1e-4).norm());
                    }
                }
            }
        }
        worst
    }

    #[test]
    fn flat_frame_is_identity() {
        let g = ChartedKahlerMetric::flat(2).unwrap();
        let f = NormalFrame::new(&g, &pt(&[(1.0, 1.0), (0.0, 2.0)]), None).unwrap();
        assert!((&f.linear - CMatrix::identity(2, 2)).norm() < 1e-15);
        assert!(f.quadratic.iter().all(|q| q.norm() == 0.0));
    }

    #[test]
    fn poincare_normal_coordinates() {
        let g = ChartedKahlerMetric::poincare_ball(1, 1.0).unwrap();
        let f = NormalFrame::new(&g, &pt(&[(0.3, 0.0)]), None).unwrap();
        let g0 = f.pulled_back_gram(&g, &CVector::zeros(1)).unwrap();
        assert!((g0.matrix() - CMatrix::identity(1, 1)).norm() < 1e-10);
        assert!(first_derivative_defect(&g, &f) < 1e-7);
    }

    #[test]
    fn aligned_frames_in_higher_dimension() {
        let g = ChartedKahlerMetric::fubini_study(2, 1.0).unwrap();
        let p = pt(&[(0.4, -0.3), (0.2, 0.7)]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(0.0, s), c(0.0, s), c(s, 0.0)]);
        let f = NormalFrame::new(&g, &p, Some(&u)).unwrap();
        let g0 = f.pulled_back_gram(&g, &CVector::zeros(2)).unwrap();
        assert!((g0.matrix() - CMatrix::identity(2, 2)).norm() < 1e-10);
        assert!(first_derivative_defect(&g, &f) < 1e-7);
        let w = pt(&[(0.05, 0.01), (-0.02, 0.03)]);
        let back = f.from_chart(&f.to_chart(&w)).unwrap();
        assert!((back - w).norm() < 1e-14);
    }
}
