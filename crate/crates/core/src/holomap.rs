//! Holomorphic maps between charted Kähler metrics: jets, pullback forms,
//! singular spectra and the functionals `σ_ℓ`, `‖Λ^ℓ∂f‖₀`, `U_ℓ`, `W_ℓ`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::{dzbar, holomorphic_partial, wirtinger_richardson};
use crate::metrics::{christoffels, contract_christoffel, curvature, ChartedKahlerMetric, CurvatureTensor, NormalFrame};
use crate::xlinalg::{
    c, cholesky, compound_matrix, full_svd, leading_block_det_ratio, leading_block_trace, lower_inverse,
    operator_norm, CMatrix, CVector, HermitianForm, C64,
};

/// Relative threshold below which a singular value counts as zero.
pub const RANK_TOL: f64 = 1e-9;

const FD_FIRST: f64 = 1e-3;
const FD_SECOND: f64 = 2e-3;

/// Value, first and second holomorphic derivatives of a map at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct MapJet {
    pub value: CVector,
    /// `jacobian[(i, a)] = ∂f^i/∂z^a`.
    pub jacobian: CMatrix,
    /// `hessian[i][(a, b)] = ∂²f^i/∂z^a∂z^b`.
    pub hessian: Vec<CMatrix>,
}

/// `coeff · Π_k z_k^{powers[k]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    pub coeff: [f64; 2],
    pub powers: Vec<u32>,
}

impl Monomial {
    fn coefficient(&self) -> C64 {
        c(self.coeff[0], self.coeff[1])
    }

    /// `∂^{k}/∂z^{idx...}` of the monomial at `z` for up to two indices.
    fn derivative(&self, z: &CVector, idx: &[usize]) -> C64 {
        let mut pw: Vec<u32> = self.powers.clone();
        let mut factor = self.coefficient();
        for &i in idx {
            if pw[i] == 0 {
                return c(0.0, 0.0);
            }
            factor *= pw[i] as f64;
            pw[i] -= 1;
        }
        pw.iter().enumerate().fold(factor, |acc, (k, &p)| acc * z[k].powu(p))
    }
}

/// Serializable description of a holomorphic map between charts of
/// dimension `m` (source) and `n` (target).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    Identity,
    Constant {
        value: Vec<[f64; 2]>,
    },
    /// `z ↦ factor · z`.
    Scale {
        factor: [f64; 2],
    },
    /// `z ↦ matrix · z + offset`, `matrix` given by rows.
    Linear {
        matrix: Vec<Vec<[f64; 2]>>,
        #[serde(default)]
        offset: Vec<[f64; 2]>,
    },
    /// `z ↦ (z_{keep[0]}, z_{keep[1]}, ...)`.
    Projection {
        keep: Vec<usize>,
    },
    /// One list of monomials per target coordinate.
    Polynomial {
        components: Vec<Vec<Monomial>>,
    },
}

fn cnum(p: [f64; 2]) -> C64 {
    c(p[0], p[1])
}

fn unit_powers(m: usize, k: usize) -> Vec<u32> {
    (0..m).map(|j| u32::from(j == k)).collect()
}

impl MapSpec {
    /// Polynomial components for source dimension `m` and target `n`.
    fn components(&self, m: usize, n: usize) -> Result<Vec<Vec<Monomial>>> {
        let mono = |coeff: C64, powers: Vec<u32>| Monomial {
            coeff: [coeff.re, coeff.im],
            powers,
        };
        let mismatch = |what: &str| Err(Error::Dimension(format!("{what} does not fit a map C^{m} -> C^{n}")));
        Ok(match self {
            MapSpec::Identity | MapSpec::Scale { .. } => {
                if m != n {
                    return mismatch("identity/scale map");
                }
                let a = match self {
                    MapSpec::Scale { factor } => cnum(*factor),
                    _ => c(1.0, 0.0),
                };
                (0..n).map(|i| vec![mono(a, unit_powers(m, i))]).collect()
            }
            MapSpec::Constant { value } => {
                if value.len() != n {
                    return mismatch("constant value");
                }
                value.iter().map(|v| vec![mono(cnum(*v), vec![0; m])]).collect()
            }
            MapSpec::Linear { matrix, offset } => {
                if matrix.len() != n || matrix.iter().any(|r| r.len() != m) || !(offset.is_empty() || offset.len() == n) {
                    return mismatch("linear map matrix");
                }
                matrix
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        let mut terms: Vec<Monomial> =
                            row.iter().enumerate().map(|(k, a)| mono(cnum(*a), unit_powers(m, k))).collect();
                        if let Some(o) = offset.get(i) {
                            terms.push(mono(cnum(*o), vec![0; m]));
                        }
                        terms
                    })
                    .collect()
            }
            MapSpec::Projection { keep } => {
                if keep.len() != n || keep.iter().any(|&k| k >= m) {
                    return mismatch("projection");
                }
                keep.iter().map(|&k| vec![mono(c(1.0, 0.0), unit_powers(m, k))]).collect()
            }
            MapSpec::Polynomial { components } => {
                if components.len() != n || components.iter().flatten().any(|t| t.powers.len() != m) {
                    return mismatch("polynomial");
                }
                components.clone()
            }
        })
    }
}

type MapFn = dyn Fn(&CVector) -> CVector + Send + Sync;

#[derive(Clone)]
enum MapKind {
    Polynomial(Vec<Vec<Monomial>>),
    /// Evaluated pointwise; derivatives by holomorphic central differences.
    Custom(Arc<MapFn>),
}

impl fmt::Debug for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapKind::Polynomial(p) => f.debug_tuple("Polynomial").field(p).finish(),
            MapKind::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A holomorphic map `f: (U ⊂ C^m, g) → (V ⊂ C^n, h)`.
#[derive(Debug, Clone)]
pub struct HolomorphicMapModel {
    label: String,
    source: ChartedKahlerMetric,
    target: ChartedKahlerMetric,
    kind: MapKind,
}

impl HolomorphicMapModel {
    pub fn new(source: ChartedKahlerMetric, target: ChartedKahlerMetric, spec: &MapSpec) -> Result<Self> {
        let comps = spec.components(source.dim(), target.dim())?;
        Ok(HolomorphicMapModel {
            label: format!("{spec:?}"),
            source,
            target,
            kind: MapKind::Polynomial(comps),
        })
    }

    /// Map given only by its values; derivatives come from finite
    /// differences, which is valid for holomorphic `f` (see
    /// [`HolomorphicMapModel::cauchy_riemann_residual`]).
    pub fn from_fn<F>(label: &str, source: ChartedKahlerMetric, target: ChartedKahlerMetric, f: F) -> Self
    where
        F: Fn(&CVector) -> CVector + Send + Sync + 'static,
    {
        HolomorphicMapModel {
            label: label.to_string(),
            source,
            target,
            kind: MapKind::Custom(Arc::new(f)),
        }
    }

    /// `(f, g)` with the source metric replaced; used for scaling laws.
    pub fn with_metrics(&self, source: ChartedKahlerMetric, target: ChartedKahlerMetric) -> Result<Self> {
        if source.dim() != self.source.dim() || target.dim() != self.target.dim() {
            return Err(Error::Dimension("replacement metrics change the chart dimensions".into()));
        }
        Ok(HolomorphicMapModel {
            label: self.label.clone(),
            source,
            target,
            kind: self.kind.clone(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn source(&self) -> &ChartedKahlerMetric {
        &self.source
    }

    pub fn target(&self) -> &ChartedKahlerMetric {
        &self.target
    }

    pub fn source_dim(&self) -> usize {
        self.source.dim()
    }

    pub fn target_dim(&self) -> usize {
        self.target.dim()
    }

    pub fn is_fd_backed(&self) -> bool {
        matches!(self.kind, MapKind::Custom(_))
    }

    fn raw_value(&self, z: &CVector) -> CVector {
        match &self.kind {
            MapKind::Polynomial(comps) => CVector::from_iterator(
                comps.len(),
                comps.iter().map(|terms| terms.iter().map(|t| t.derivative(z, &[])).sum()),
            ),
            MapKind::Custom(f) => f(z),
        }
    }

    fn check_source(&self, z: &CVector) -> Result<()> {
        if z.len() != self.source_dim() {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, source chart has {}",
                z.len(),
                self.source_dim()
            )));
        }
        let d = self.source.boundary_distance(z);
        if !(d > 0.0) {
            return Err(Error::Domain { distance_to_boundary: d });
        }
        Ok(())
    }

    /// `f(z)`, required to land in the target chart.
    pub fn value(&self, z: &CVector) -> Result<CVector> {
        self.check_source(z)?;
        let w = self.raw_value(z);
        if w.len() != self.target_dim() {
            return Err(Error::Dimension(format!(
                "map produced {} coordinates, target chart has {}",
                w.len(),
                self.target_dim()
            )));
        }
        let d = self.target.boundary_distance(&w);
        if !(d > 0.0) {
            return Err(Error::Domain { distance_to_boundary: d });
        }
        Ok(w)
    }

    pub fn jet(&self, z: &CVector) -> Result<MapJet> {
        let value = self.value(z)?;
        let (m, n) = (self.source_dim(), self.target_dim());
        match &self.kind {
            MapKind::Polynomial(comps) => {
                let jacobian = CMatrix::from_fn(n, m, |i, a| comps[i].iter().map(|t| t.derivative(z, &[a])).sum());
                let hessian = comps
                    .iter()
                    .map(|terms| CMatrix::from_fn(m, m, |a, b| terms.iter().map(|t| t.derivative(z, &[a, b])).sum()))
                    .collect();
                Ok(MapJet { value, jacobian, hessian })
            }
            MapKind::Custom(f) => {
                let h1 = FD_FIRST * self.source.length_scale(z);
                let h2 = FD_SECOND * self.source.length_scale(z);
                let mut jacobian = CMatrix::zeros(n, m);
                for a in 0..m {
                    jacobian.set_column(a, &holomorphic_partial(f.as_ref(), z, a, h1));
                }
                let mut hessian = vec![CMatrix::zeros(m, m); n];
                for b in 0..m {
                    let col_b = |w: &CVector| holomorphic_partial(f.as_ref(), w, b, h1);
                    for a in 0..m {
                        let d = holomorphic_partial(&col_b, z, a, h2);
                        for i in 0..n {
                            hessian[i][(a, b)] = d[i];
                        }
                    }
                }
                for hm in hessian.iter_mut() {
                    let sym = (&*hm + hm.transpose()) * c(0.5, 0.0);
                    *hm = sym;
                }
                Ok(MapJet { value, jacobian, hessian })
            }
        }
    }

    /// Largest `|∂f^i/∂z̄^k|` by finite differences at `z`.
    pub fn cauchy_riemann_residual(&self, z: &CVector) -> Result<f64> {
        self.value(z)?;
        let h = FD_FIRST * self.source.length_scale(z);
        let mut worst = 0.0f64;
        for i in 0..self.target_dim() {
            let comp = |w: &CVector| self.raw_value(w)[i];
            for k in 0..self.source_dim() {
                worst = worst.max(wirtinger_richardson(&comp, z, &[dzbar(k)], h).norm());
            }
        }
        Ok(worst)
    }

    /// `A_{a b̄} = f^i_a conj(f^j_b) h_{i j̄}(f(z))`, stored like a Gram matrix.
    pub fn pullback_form(&self, z: &CVector) -> Result<HermitianForm> {
        let jet = self.jet(z)?;
        Ok(self.target.gram(&jet.value)?.congruence(&jet.jacobian))
    }

    /// Singular values of `∂f: (T_z, g) → (T_{f(z)}, h)` with adapted frames.
    pub fn singular_spectrum(&self, z: &CVector) -> Result<SingularSpectrum> {
        let jet = self.jet(z)?;
        spectrum_from(&self.source.gram(z)?, &self.target.gram(&jet.value)?, &jet.jacobian)
    }

    pub fn sigma_ell(&self, z: &CVector, ell: usize) -> Result<f64> {
        self.singular_spectrum(z)?.sigma(ell)
    }

    pub fn lambda_ell_norm(&self, z: &CVector, ell: usize) -> Result<f64> {
        self.singular_spectrum(z)?.lambda_norm(ell)
    }

    /// `‖Λ^ℓ∂f‖₀` as the operator norm of the `ℓ`-th compound of the
    /// Jacobian written in unitary bases of both metrics.
    pub fn lambda_ell_norm_compound(&self, z: &CVector, ell: usize) -> Result<f64> {
        let jet = self.jet(z)?;
        let b = whitened_jacobian(&self.source.gram(z)?, &self.target.gram(&jet.value)?, &jet.jacobian)?;
        if ell > b.nrows() || ell > b.ncols() {
            return Ok(0.0);
        }
        Ok(operator_norm(&compound_matrix(&b, ell)?))
    }

    /// Second covariant derivative
    /// `f^i_{ac} = ∂_a∂_c f^i - Γ^d_{ac}(M) f^i_d + Γ^i_{jk}(N) f^j_a f^k_c`,
    /// returned as `out[i][(a, c)]`.
    pub fn covariant_hessian(&self, z: &CVector) -> Result<Vec<CMatrix>> {
        let jet = self.jet(z)?;
        let gm = christoffels(&self.source, z)?;
        let gn = christoffels(&self.target, &jet.value)?;
        let m = self.source_dim();
        let cols: Vec<CVector> = (0..m).map(|a| jet.jacobian.column(a).into_owned()).collect();
        let mut out = jet.hessian.clone();
        for cidx in 0..m {
            // (J Γ_c)[(i, a)] = Σ_d f^i_d Γ^d_{a c}
            let jg = &jet.jacobian * &gm[cidx];
            for a in 0..m {
                let target_term = contract_christoffel(&gn, &cols[a], &cols[cidx]);
                for (i, oi) in out.iter_mut().enumerate() {
                    oi[(a, cidx)] += target_term[i] - jg[(i, a)];
                }
            }
        }
        Ok(out)
    }
}

/// `D* J C⁻*` for `g = C C*`, `h = D D*`: the Jacobian in unitary bases.
fn whitened_jacobian(g: &HermitianForm, h: &HermitianForm, j: &CMatrix) -> Result<CMatrix> {
    let cg = cholesky(g)?;
    let ch = cholesky(h)?;
    Ok(ch.adjoint() * j * lower_inverse(&cg)?.adjoint())
}

/// Singular data of a linear map between Hermitian spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    /// `|λ_1| ≥ ... ≥ |λ_m|`, padded with zeros when `m > n`.
    pub values: Vec<f64>,
    /// `g`-unitary columns `e_a` with `∂f(e_a) = λ_a ẽ_a`.
    pub source_frame: CMatrix,
    /// `h`-unitary columns `ẽ_i`.
    pub target_frame: CMatrix,
}

/// Spectrum of `j: (C^m, g) → (C^n, h)`.
pub fn spectrum_from(g: &HermitianForm, h: &HermitianForm, j: &CMatrix) -> Result<SingularSpectrum> {
    let cg = cholesky(g)?;
    let ch = cholesky(h)?;
    let b = ch.adjoint() * j * lower_inverse(&cg)?.adjoint();
    let (u, s, v) = full_svd(&b);
    let mut values = s;
    values.resize(j.ncols(), 0.0);
    Ok(SingularSpectrum {
        values,
        source_frame: lower_inverse(&cg)?.adjoint() * v,
        target_frame: lower_inverse(&ch)?.adjoint() * u,
    })
}

fn check_ell(ell: usize, m: usize) -> Result<()> {
    if ell == 0 || ell > m {
        return Err(Error::OutOfRange(format!("ell = {ell} outside 1..={m}")));
    }
    Ok(())
}

impl SingularSpectrum {
    pub fn source_dim(&self) -> usize {
        self.values.len()
    }

    /// `σ_ℓ = Σ_{a ≤ ℓ} |λ_a|²`.
    pub fn sigma(&self, ell: usize) -> Result<f64> {
        check_ell(ell, self.values.len())?;
        Ok(self.values[..ell].iter().map(|s| s * s).sum())
    }

    /// `‖Λ^ℓ∂f‖₀ = Π_{a ≤ ℓ} |λ_a|`.
    pub fn lambda_norm(&self, ell: usize) -> Result<f64> {
        check_ell(ell, self.values.len())?;
        Ok(self.values[..ell].iter().product())
    }

    /// `‖Λ^ℓ∂f‖₀² = Π_{a ≤ ℓ} |λ_a|²`.
    pub fn lambda_norm_sq(&self, ell: usize) -> Result<f64> {
        check_ell(ell, self.values.len())?;
        Ok(self.values[..ell].iter().map(|s| s * s).product())
    }

    /// Number of values above `RANK_TOL · |λ_1|`.
    pub fn rank(&self) -> usize {
        let top = self.values.first().copied().unwrap_or(0.0);
        self.values.iter().filter(|&&s| s > 0.0 && s > RANK_TOL * top).count()
    }
}

/// Normal coordinates at `x₀` and `f(x₀)` whose coordinate vectors at the
/// centers are the singular frames, so that `∂f` is diagonal there.
#[derive(Debug, Clone)]
pub struct AdaptedCharts {
    pub base: CVector,
    pub spectrum: SingularSpectrum,
    pub source: NormalFrame,
    pub target: NormalFrame,
}

impl AdaptedCharts {
    pub fn new(map: &HolomorphicMapModel, x0: &CVector) -> Result<Self> {
        let spectrum = map.singular_spectrum(x0)?;
        Self::with_spectrum(map, x0, spectrum)
    }

    /// Uses the given (possibly re-rotated) adapted frames.
    pub fn with_spectrum(map: &HolomorphicMapModel, x0: &CVector, spectrum: SingularSpectrum) -> Result<Self> {
        let y0 = map.value(x0)?;
        let source = NormalFrame::with_linear(map.source(), x0, spectrum.source_frame.clone())?;
        let target = NormalFrame::with_linear(map.target(), &y0, spectrum.target_frame.clone())?;
        Ok(AdaptedCharts {
            base: x0.clone(),
            spectrum,
            source,
            target,
        })
    }

    /// Pullback form and source metric at source normal coordinates `w`.
    pub fn forms_at(&self, map: &HolomorphicMapModel, w: &CVector) -> Result<(HermitianForm, HermitianForm)> {
        let z = self.source.to_chart(w);
        let jac = self.source.jacobian(w);
        let a = map.pullback_form(&z)?.congruence(&jac);
        let g = map.source().gram(&z)?.congruence(&jac);
        Ok((a, g))
    }

    /// `(U_ℓ, W_ℓ)` at source normal coordinates `w`: the compressed trace
    /// `tr(G_ℓ⁻¹ A_ℓ)` and `det A_ℓ / det G_ℓ` of the leading blocks.
    pub fn block_functionals(&self, map: &HolomorphicMapModel, w: &CVector, ell: usize) -> Result<(f64, f64)> {
        let (a, g) = self.forms_at(map, w)?;
        Ok((leading_block_trace(&a, &g, ell)?, leading_block_det_ratio(&a, &g, ell)?))
    }

    pub fn u_ell(&self, map: &HolomorphicMapModel, w: &CVector, ell: usize) -> Result<f64> {
        let (a, g) = self.forms_at(map, w)?;
        leading_block_trace(&a, &g, ell)
    }

    pub fn w_ell(&self, map: &HolomorphicMapModel, w: &CVector, ell: usize) -> Result<f64> {
        let (a, g) = self.forms_at(map, w)?;
        leading_block_det_ratio(&a, &g, ell)
    }

    /// Covariant Hessian at `x₀` in the adapted frames:
    /// `out[i][(a, c)] = ẽ^i(∇df(e_a, e_c))`.
    pub fn frame_hessian(&self, map: &HolomorphicMapModel) -> Result<Vec<CMatrix>> {
        let hess = map.covariant_hessian(&self.base)?;
        let (m, n) = (map.source_dim(), map.target_dim());
        let e = &self.source.linear;
        let l = &self.target.linear_inv;
        Ok((0..n)
            .map(|i| {
                let mixed = (0..n).fold(CMatrix::zeros(m, m), |acc, j| acc + &hess[j] * l[(i, j)]);
                e.transpose() * mixed * e
            })
            .collect())
    }

    /// Curvature tensors of source and target at `x₀`, `f(x₀)` in the
    /// adapted frames.
    pub fn frame_curvatures(&self, map: &HolomorphicMapModel) -> Result<(CurvatureTensor, CurvatureTensor)> {
        let rm = curvature(map.source(), &self.base)?.r.in_frame(&self.source.linear);
        let rn = curvature(map.target(), &self.target.center)?.r.in_frame(&self.target.linear);
        Ok((rm, rn))
    }
}
