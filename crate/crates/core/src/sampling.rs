//! Seeded random sampling: complex Gaussians, Haar unitaries, points in
//! chart regions and uniform directions on complex spheres.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::xlinalg::{c, CMatrix, CVector, C64};

pub type SeededRng = ChaCha8Rng;

/// Independent generator for `(seed, stream)`; per-point streams keep
/// parallel sampling reproducible regardless of scheduling.
pub fn rng_for(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Mixes a label into a seed (FNV-1a over the label bytes).
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| complex_gaussian(rng))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let z = gaussian_matrix(rng, n, n);
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        let col = q.column(j) * phase;
        q.set_column(j, &col);
    }
    q
}

/// Uniform point on the unit sphere `S^{2n-1} ⊂ C^n`.
pub fn sphere_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    loop {
        let v = gaussian_vector(rng, n);
        let nv = v.norm();
        if nv > 1e-300 {
            return v / c(nv, 0.0);
        }
    }
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let z = gaussian_matrix(rng, n, n);
    (&z + z.adjoint()) * c(0.5, 0.0)
}

/// Cayley transform of a Hermitian `k`: `(I - i t k/2)⁻¹ (I + i t k/2)`, an
/// exactly unitary matrix close to the identity for small `t`.
pub fn cayley_unitary(k: &CMatrix, t: f64) -> CMatrix {
    let n = k.nrows();
    let half = k * c(0.0, 0.5 * t);
    let id = CMatrix::identity(n, n);
    let lhs = &id - &half;
    let rhs = &id + &half;
    lhs.lu().solve(&rhs).expect("Cayley transform of a Hermitian matrix is nonsingular")
}

/// Where to sample chart points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRegion {
    /// Ball center; defaults to the origin.
    #[serde(default)]
    pub center: Vec<[f64; 2]>,
    /// Euclidean radius of the coordinate ball.
    pub radius: f64,
    /// Number of random points; the center is always included as point 0.
    pub points: usize,
}

impl SampleRegion {
    pub fn ball(radius: f64, points: usize) -> Self {
        SampleRegion {
            center: Vec::new(),
            radius,
            points,
        }
    }

    pub fn center_in(&self, dim: usize) -> Result<CVector> {
        if self.center.is_empty() {
            return Ok(CVector::zeros(dim));
        }
        if self.center.len() != dim {
            return Err(Error::Dimension(format!(
                "region center has {} coordinates, chart has {dim}",
                self.center.len()
            )));
        }
        Ok(CVector::from_iterator(dim, self.center.iter().map(|p| c(p[0], p[1]))))
    }

    /// Deterministic sample: the center followed by points uniform in the
    /// coordinate ball.
    pub fn sample(&self, dim: usize, seed: u64) -> Result<Vec<CVector>> {
        if self.points == 0 || !(self.radius >= 0.0) {
            return Err(Error::EmptyRegion);
        }
        let center = self.center_in(dim)?;
        let mut rng = rng_for(seed, 0x5eed);
        let mut out = vec![center.clone()];
        for _ in 1..self.points {
            let dir = sphere_point(&mut rng, dim);
            let u: f64 = rng.random();
            let r = self.radius * u.powf(1.0 / (2 * dim) as f64);
            out.push(&center + dir * c(r, 0.0));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_is_unitary_and_deterministic() {
        let mut r1 = rng_for(7, 3);
        let mut r2 = rng_for(7, 3);
        let u1 = haar_unitary(&mut r1, 4);
        let u2 = haar_unitary(&mut r2, 4);
        assert_eq!(u1, u2);
        assert!((u1.adjoint() * &u1 - CMatrix::identity(4, 4)).norm() < 1e-13);
    }

    #[test]
    fn streams_differ() {
        let a: u64 = rng_for(1, 0).random();
        let b: u64 = rng_for(1, 1).random();
        assert_ne!(a, b);
    }

    #[test]
    fn cayley_is_unitary() {
        let mut rng = rng_for(2, 0);
        let k = random_hermitian(&mut rng, 3);
        let u = cayley_unitary(&k, 0.1);
        assert!((u.adjoint() * &u - CMatrix::identity(3, 3)).norm() < 1e-13);
    }

    #[test]
    fn region_sampling() {
        let reg = SampleRegion::ball(0.5, 20);
        let pts = reg.sample(2, 11).unwrap();
        assert_eq!(pts.len(), 20);
        assert!(pts[0].norm() == 0.0);
        assert!(pts.iter().all(|p| p.norm() <= 0.5 + 1e-15));
        assert_eq!(SampleRegion::ball(0.5, 0).sample(2, 1), Err(Error::EmptyRegion));
    }
}
