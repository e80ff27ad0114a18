//! Finite-difference stencils in complex coordinates with one level of
//! Richardson extrapolation.
//!
//! All stencils here are central, so their error expansions contain only
//! even powers of the step and `(4 D(h/2) - D(h)) / 3` removes the `h²` term.

use serde::{Deserialize, Serialize};

use crate::xlinalg::{c, CVector, C64};

/// Step multipliers (times the local length scale) per derivative order.
/// Higher orders trade truncation for roundoff at larger steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FdSteps {
    pub first: f64,
    pub second: f64,
    pub third: f64,
    pub fourth: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        FdSteps {
            first: 1e-4,
            second: 1e-2,
            third: 2e-2,
            fourth: 2e-2,
        }
    }
}

impl FdSteps {
    pub fn for_order(&self, order: usize) -> f64 {
        match order {
            0 | 1 => self.first,
            2 => self.second,
            3 => self.third,
            _ => self.fourth,
        }
    }
}

pub fn richardson<T>(coarse: T, fine: T) -> T
where
    T: std::ops::Mul<f64, Output = T> + std::ops::Sub<Output = T>,
{
    fine * (4.0 / 3.0) - coarse * (1.0 / 3.0)
}

/// A Wirtinger derivative `∂/∂z^k` (`conj = false`) or `∂/∂z̄^k` (`conj = true`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Wirtinger {
    pub index: usize,
    pub conj: bool,
}

pub const fn dz(index: usize) -> Wirtinger {
    Wirtinger { index, conj: false }
}

pub const fn dzbar(index: usize) -> Wirtinger {
    Wirtinger { index, conj: true }
}

/// Composition of central Wirtinger differences with step `h`:
/// `∂_k ≈ ½(D_x - i D_y)`, `∂_k̄ ≈ ½(D_x + i D_y)`.
pub fn wirtinger_fd<F>(f: &F, z: &CVector, ops: &[Wirtinger], h: f64) -> C64
where
    F: Fn(&CVector) -> C64 + ?Sized,
{
    let Some((op, rest)) = ops.split_first() else {
        return f(z);
    };
    let mut zp = z.clone();
    let base = z[op.index];
    let mut eval = |shift: C64| {
        zp[op.index] = base + shift;
        wirtinger_fd(f, &zp, rest, h)
    };
    let dx = (eval(c(h, 0.0)) - eval(c(-h, 0.0))) / (2.0 * h);
    let dy = (eval(c(0.0, h)) - eval(c(0.0, -h))) / (2.0 * h);
    let sign = if op.conj { 1.0 } else { -1.0 };
    (dx + c(0.0, sign) * dy) * 0.5
}

pub fn wirtinger_richardson<F>(f: &F, z: &CVector, ops: &[Wirtinger], h: f64) -> C64
where
    F: Fn(&CVector) -> C64 + ?Sized,
{
    richardson(wirtinger_fd(f, z, ops, h), wirtinger_fd(f, z, ops, 0.5 * h))
}

/// Two Richardson levels over steps `h`, `h/2`, `h/4`; removes the `h²` and
/// `h⁴` terms. Used for the third and fourth derivatives of potentials.
pub fn wirtinger_extrapolated<F>(f: &F, z: &CVector, ops: &[Wirtinger], h: f64) -> C64
where
    F: Fn(&CVector) -> C64 + ?Sized,
{
    let d1 = wirtinger_fd(f, z, ops, h);
    let d2 = wirtinger_fd(f, z, ops, 0.5 * h);
    let d4 = wirtinger_fd(f, z, ops, 0.25 * h);
    let r1 = richardson(d1, d2);
    let r2 = richardson(d2, d4);
    (r2 * 16.0 - r1) / 15.0
}

/// Holomorphic central difference `∂f/∂z^k` of a vector-valued map along the
/// real axis (valid because `f` is holomorphic), Richardson-extrapolated.
pub fn holomorphic_partial<F>(f: &F, z: &CVector, k: usize, h: f64) -> CVector
where
    F: Fn(&CVector) -> CVector + ?Sized,
{
    let d = |step: f64| {
        let mut zp = z.clone();
        let mut zm = z.clone();
        zp[k] += c(step, 0.0);
        zm[k] -= c(step, 0.0);
        (f(&zp) - f(&zm)) / c(2.0 * step, 0.0)
    };
    let coarse = d(h);
    let fine = d(0.5 * h);
    fine * c(4.0 / 3.0, 0.0) - coarse * c(1.0 / 3.0, 0.0)
}

/// `¼ Δ_t F(t)` at `t = 0` for a real function of one complex parameter,
/// five-point stencil.
pub fn quarter_laplacian<F>(f: &F, h: f64) -> f64
where
    F: Fn(C64) -> f64 + ?Sized,
{
    let f0 = f(c(0.0, 0.0));
    let s = f(c(h, 0.0)) + f(c(-h, 0.0)) + f(c(0.0, h)) + f(c(0.0, -h));
    0.25 * (s - 4.0 * f0) / (h * h)
}

/// Line Laplacian estimates at `h` and `h/2` plus their extrapolation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LaplacianEstimate {
    pub coarse: f64,
    pub fine: f64,
    pub extrapolated: f64,
    pub step: f64,
}

pub fn quarter_laplacian_richardson<F>(f: &F, h: f64) -> LaplacianEstimate
where
    F: Fn(C64) -> f64 + ?Sized,
{
    let coarse = quarter_laplacian(f, h);
    let fine = quarter_laplacian(f, 0.5 * h);
    LaplacianEstimate {
        coarse,
        fine,
        extrapolated: richardson(coarse, fine),
        step: h,
    }
}

/// Observed convergence order from errors at `h` and `h/2`.
pub fn observed_order(err_coarse: f64, err_fine: f64) -> f64 {
    (err_coarse.abs() / err_fine.abs()).log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wirtinger_of_modulus_squared() {
        // |z|^2 = z z̄: ∂∂̄ = 1, ∂ = z̄
        let f = |z: &CVector| c(z[0].norm_sqr(), 0.0);
        let z = CVector::from_vec(vec![c(0.3, -0.7)]);
        let dd = wirtinger_richardson(&f, &z, &[dz(0), dzbar(0)], 1e-3);
        assert!((dd - c(1.0, 0.0)).norm() < 1e-9);
        let d = wirtinger_richardson(&f, &z, &[dz(0)], 1e-4);
        assert!((d - z[0].conj()).norm() < 1e-10);
    }

    #[test]
    fn fourth_mixed_derivative_of_log_potential() {
        // φ = log(1 + |z|²): ∂∂̄∂∂̄ φ at 0 equals -2.
        let f = |z: &CVector| c((1.0 + z[0].norm_sqr()).ln(), 0.0);
        let z = CVector::from_vec(vec![c(0.0, 0.0)]);
        let v = wirtinger_extrapolated(&f, &z, &[dz(0), dzbar(0), dz(0), dzbar(0)], 2e-2);
        assert!((v - c(-2.0, 0.0)).norm() < 1e-7, "{v}");
    }

    #[test]
    fn laplacian_of_harmonic_and_quadratic() {
        let harmonic = |t: C64| (t * t).re;
        assert!(quarter_laplacian(&harmonic, 1e-2).abs() < 1e-10);
        let quad = |t: C64| t.norm_sqr();
        let est = quarter_laplacian_richardson(&quad, 1e-2);
        assert!((est.extrapolated - 1.0).abs() < 1e-10);
    }

    #[test]
    fn second_order_convergence() {
        let f = |t: C64| (1.0 + t.norm_sqr()).ln() + (t * t).re * t.im;
        let exact = 1.0; // ¼Δ log(1+|t|²) = 1/(1+|t|²)² at 0; the cubic term is harmonic
        let e1 = quarter_laplacian(&f, 0.1) - exact;
        let e2 = quarter_laplacian(&f, 0.05) - exact;
        let order = observed_order(e1, e2);
        assert!((order - 2.0).abs() < 0.1, "order {order}");
    }
}
