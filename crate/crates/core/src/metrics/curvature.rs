//! Christoffel symbols and the curvature tensor of a Kähler metric.
//!
//! Conventions: `Γ^b_{ac} = ∂_c g_{a d̄} g^{d̄ b}` and
//! `R_{a b̄ c d̄} = -∂_c ∂_d̄ g_{a b̄} + ∂_c g_{a s̄} g^{s̄ r} ∂_d̄ g_{r b̄}`,
//! which reduces to `-∂_c∂_d̄ g_{a b̄}` at the center of normal coordinates.
//! Fubini–Study has positive holomorphic sectional curvature.

use crate::error::Result;
use crate::xlinalg::{cholesky, lower_inverse, CMatrix, CVector, HermitianForm, C64};

use super::models::{ChartedKahlerMetric, MetricJet};

/// `R_{a b̄ c d̄}` stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    dim: usize,
    data: Vec<C64>,
}

impl CurvatureTensor {
    pub fn zeros(dim: usize) -> Self {
        CurvatureTensor {
            dim,
            data: vec![C64::new(0.0, 0.0); dim.pow(4)],
        }
    }

    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.dim + b) * self.dim + c) * self.dim + d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> C64 {
        self.data[self.idx(a, b, c, d)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: C64) {
        let i = self.idx(a, b, c, d);
        self.data[i] = v;
    }

    /// `R(X, Ȳ, Z, W̄) = R_{a b̄ c d̄} X^a conj(Y^b) Z^c conj(W^d)`.
    pub fn eval(&self, x: &CVector, y: &CVector, z: &CVector, w: &CVector) -> C64 {
        let n = self.dim;
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..n {
            if x[a] == C64::new(0.0, 0.0) {
                continue;
            }
            for b in 0..n {
                let xy = x[a] * y[b].conj();
                if xy == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    let xyz = xy * z[c];
                    for d in 0..n {
                        acc += self.get(a, b, c, d) * xyz * w[d].conj();
                    }
                }
            }
        }
        acc
    }

    /// `R(X, X̄, Y, Ȳ)`, real for a Kähler curvature tensor.
    pub fn bisectional(&self, x: &CVector, y: &CVector) -> f64 {
        self.eval(x, x, y, y).re
    }

    /// Tensor in the frame given by the columns of `m`:
    /// `R'_{a b̄ c d̄} = R(m_a, m̄_b, m_c, m̄_d)`.
    pub fn in_frame(&self, m: &CMatrix) -> CurvatureTensor {
        let k = m.ncols();
        let cols: Vec<CVector> = (0..k).map(|j| m.column(j).into_owned()).collect();
        let mut out = CurvatureTensor::zeros(k);
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    for d in 0..k {
                        out.set(a, b, c, d, self.eval(&cols[a], &cols[b], &cols[c], &cols[d]));
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &CurvatureTensor) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// Largest violation of `R_{a b̄ c d̄} = conj(R_{b ā d c̄})` and of
    /// `R_{a b̄ c d̄} = R_{c b̄ a d̄}`.
    pub fn symmetry_defect(&self) -> (f64, f64) {
        let n = self.dim;
        let (mut herm, mut kahler) = (0.0f64, 0.0f64);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let r = self.get(a, b, c, d);
                        herm = herm.max((r - self.get(b, a, d, c).conj()).norm());
                        kahler = kahler.max((r - self.get(c, b, a, d)).norm());
                    }
                }
            }
        }
        (herm, kahler)
    }

    /// `(c/2)(g_{a b̄} g_{c d̄} + g_{a d̄} g_{c b̄})`, the tensor of constant
    /// holomorphic sectional curvature `c` for the Gram matrix `g`.
    pub fn constant_holomorphic(g: &HermitianForm, hol: f64) -> CurvatureTensor {
        let n = g.dim();
        let gm = g.matrix();
        // g_{a b̄} = gm[(b, a)]
        let low = |a: usize, b: usize| gm[(b, a)];
        let mut out = CurvatureTensor::zeros(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        out.set(a, b, c, d, (low(a, b) * low(c, d) + low(a, d) * low(c, b)) * (0.5 * hol));
                    }
                }
            }
        }
        out
    }
}

/// Christoffel symbols, `gamma[c][(b, a)] = Γ^b_{ac}`.
pub type Christoffels = Vec<CMatrix>;

/// Contracts `Γ(x, y)^b = Γ^b_{ac} x^a y^c`.
pub fn contract_christoffel(gamma: &Christoffels, x: &CVector, y: &CVector) -> CVector {
    gamma
        .iter()
        .enumerate()
        .fold(CVector::zeros(x.len()), |acc, (c, g)| acc + g * x * y[c])
}

/// Curvature and connection data at a point.
#[derive(Debug, Clone)]
pub struct CurvatureData {
    pub point: CVector,
    pub g: HermitianForm,
    pub g_inv: CMatrix,
    pub gamma: Christoffels,
    pub r: CurvatureTensor,
}

impl CurvatureData {
    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn norm_sq(&self, x: &CVector) -> f64 {
        self.g.norm_sq(x)
    }

    pub fn inner(&self, x: &CVector, y: &CVector) -> C64 {
        self.g.pair(x, y)
    }

    /// Largest deviation from the constant-holomorphic-curvature tensor.
    pub fn constant_h_defect(&self, hol: f64) -> f64 {
        self.r
            .max_abs_diff(&CurvatureTensor::constant_holomorphic(&self.g, hol))
    }
}

fn inverse_gram(g: &HermitianForm) -> Result<CMatrix> {
    let ch = cholesky(g)?;
    let ci = lower_inverse(&ch)?;
    Ok(ci.adjoint() * ci)
}

fn christoffels_from_jet(jet: &MetricJet, g_inv: &CMatrix) -> Christoffels {
    jet.dg.iter().map(|d| g_inv * d).collect()
}

pub fn curvature_from_jet(point: &CVector, jet: &MetricJet) -> Result<CurvatureData> {
    let n = jet.dim();
    let g_inv = inverse_gram(&jet.g)?;
    let gamma = christoffels_from_jet(jet, &g_inv);
    let mut r = CurvatureTensor::zeros(n);
    for c in 0..n {
        for d in 0..n {
            // block[(b, a)] = R_{a b̄ c d̄}
            let block = jet.dg[d].adjoint() * &g_inv * &jet.dg[c] - &jet.ddg[c][d];
            for a in 0..n {
                for b in 0..n {
                    r.set(a, b, c, d, block[(b, a)]);
                }
            }
        }
    }
    Ok(CurvatureData {
        point: point.clone(),
        g: jet.g.clone(),
        g_inv,
        gamma,
        r,
    })
}

/// Christoffel symbols of `metric` at `p`.
pub fn christoffels(metric: &ChartedKahlerMetric, p: &CVector) -> Result<Christoffels> {
    let jet = metric.jet(p)?;
    let g_inv = inverse_gram(&jet.g)?;
    Ok(christoffels_from_jet(&jet, &g_inv))
}

/// Full curvature data of `metric` at `p`.
pub fn curvature(metric: &ChartedKahlerMetric, p: &CVector) -> Result<CurvatureData> {
    curvature_from_jet(p, &metric.jet(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::{dz, wirtinger_richardson};
    use crate::xlinalg::c;

    fn pt(v: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(v.len(), v.iter().map(|&(a, b)| c(a, b)))
    }

    fn holo(curv: &CurvatureData, x: &CVector) -> f64 {
        curv.r.bisectional(x, x) / curv.norm_sq(x).powi(2)
    }

    #[test]
    fn flat_has_no_curvature() {
        let g = ChartedKahlerMetric::flat(3).unwrap();
        let cd = curvature(&g, &pt(&[(1.0, 2.0), (0.0, -1.0), (3.0, 0.0)])).unwrap();
        assert_eq!(cd.r.max_abs(), 0.0);
        assert!(cd.gamma.iter().all(|m| m.norm() == 0.0));
    }

    #[test]
    fn poincare_disk_christoffels() {
        let g = ChartedKahlerMetric::poincare_ball(1, 1.0).unwrap();
        let at0 = christoffels(&g, &pt(&[(0.0, 0.0)])).unwrap();
        assert!(at0[0].norm() < 1e-15);
        // Γ = (∂g/∂z) / g with g = (1 - |z|²)^-2, derivative by FD of the analytic g
        let z = pt(&[(0.3, 0.0)]);
        let gfun = |w: &CVector| g.gram(w).unwrap().matrix()[(0, 0)];
        let dg = wirtinger_richardson(&gfun, &z, &[dz(0)], 1e-4);
        let expected = dg / gfun(&z);
        let got = christoffels(&g, &z).unwrap()[0][(0, 0)];
        assert!((got - expected).norm() < 1e-7, "{got} vs {expected}");
        // closed form: 2 z̄ / (1 - |z|²)
        assert!((got - c(2.0 * 0.3 / (1.0 - 0.09), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn poincare_disk_holomorphic_curvature_is_constant() {
        // Hand expansion: g = (1-|z|²)^-2 gives R_{11̄11̄} = -2 / (1-|z|²)^4,
        // so H = -2 at every point.
        let g = ChartedKahlerMetric::poincare_ball(1, 1.0).unwrap();
        let x = pt(&[(1.0, 0.0)]);
        for z in [pt(&[(0.0, 0.0)]), pt(&[(0.4, 0.2)])] {
            let cd = curvature(&g, &z).unwrap();
            assert!((holo(&cd, &x) + 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetries_hold() {
        let g = ChartedKahlerMetric::product(
            ChartedKahlerMetric::fubini_study(2, 1.0).unwrap(),
            ChartedKahlerMetric::poincare_ball(1, 3.0).unwrap(),
        );
        let cd = curvature(&g, &pt(&[(0.3, 0.1), (-0.5, 0.2), (0.1, 0.6)])).unwrap();
        let (h, k) = cd.r.symmetry_defect();
        assert!(h < 1e-12 && k < 1e-12, "{h} {k}");
        for c in 0..3 {
            let gm = &cd.gamma[c];
            for a in 0..3 {
                for b in 0..3 {
                    assert!((gm[(b, a)] - cd.gamma[a][(b, c)]).norm() < 1e-12);
                }
            }
        }
    }
}
