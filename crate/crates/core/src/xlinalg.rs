//! Complex Hermitian linear algebra: eigen-decompositions, relative
//! eigenvalues of a pencil `(A, G)`, compound matrices on exterior powers
//! and the partial-trace / partial-determinant majorization checks.
//!
//! Hermitian forms are stored in Gram convention: the form `P` pairs two
//! vectors as `<x, y> = y* P x`. For a Kähler metric this means
//! `P[(b, a)] = g_{a b̄}`.

use itertools::Itertools;
use nalgebra::{Complex, DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Absolute slack for unit-scale checks.
pub const ABS_TOL: f64 = 1e-10;
/// Relative slack for everything else.
pub const REL_TOL: f64 = 1e-9;
/// Conjugate-symmetry tolerance accepted by [`HermitianForm::new`], relative to the largest entry.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Largest `|a_ij - conj(a_ji)|` together with the largest `|im a_ii|`.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// A square matrix with conjugate symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianForm(CMatrix);

impl HermitianForm {
    /// Validates conjugate symmetry (to [`HERMITIAN_TOL`] relative) and
    /// stores the exact Hermitian part.
    pub fn new(a: CMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() || a.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "Hermitian form must be square and nonempty, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Degenerate("non-finite entry".into()));
        }
        let defect = hermitian_defect(&a);
        if defect > HERMITIAN_TOL * max_abs(&a).max(1.0) {
            return Err(Error::NotHermitian {
                max_asymmetry: defect,
            });
        }
        Ok(Self::hermitian_part(&a))
    }

    fn hermitian_part(a: &CMatrix) -> Self {
        HermitianForm((a + a.adjoint()) * c(0.5, 0.0))
    }

    pub fn identity(n: usize) -> Self {
        HermitianForm(CMatrix::identity(n, n))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let v = CVector::from_iterator(d.len(), d.iter().map(|&x| c(x, 0.0)));
        HermitianForm(CMatrix::from_diagonal(&v))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// `y* P x`.
    pub fn pair(&self, x: &CVector, y: &CVector) -> C64 {
        (y.adjoint() * &self.0 * x)[(0, 0)]
    }

    pub fn norm_sq(&self, x: &CVector) -> f64 {
        self.pair(x, x).re
    }

    /// Upper-left `ell x ell` block.
    pub fn leading_block(&self, ell: usize) -> HermitianForm {
        HermitianForm(self.0.view((0, 0), (ell, ell)).into_owned())
    }

    /// `M* P M`, the form expressed in the frame given by the columns of `m`.
    pub fn congruence(&self, m: &CMatrix) -> HermitianForm {
        Self::hermitian_part(&(m.adjoint() * &self.0 * m))
    }

    pub fn scaled(&self, s: f64) -> HermitianForm {
        HermitianForm(&self.0 * c(s, 0.0))
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn determinant(&self) -> f64 {
        self.0.clone().determinant().re
    }
}

/// Descending eigenvalues and an orthonormal eigenvector frame (columns).
#[derive(Debug, Clone)]
pub struct EigenSpectrum {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenSpectrum {
    pub fn top_sum(&self, ell: usize) -> f64 {
        self.values.iter().take(ell).sum()
    }

    pub fn top_product(&self, ell: usize) -> f64 {
        self.values.iter().take(ell).product()
    }
}

/// Eigen-decomposition of a Hermitian form, eigenvalues descending.
///
/// Equal eigenvalues keep the solver's output order (stable sort).
pub fn hermitian_eigen(a: &HermitianForm) -> EigenSpectrum {
    let eig = a.matrix().clone().symmetric_eigen();
    let n = a.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    EigenSpectrum { values, vectors }
}

/// Lower-triangular `C` with `G = C C*`.
pub fn cholesky(g: &HermitianForm) -> Result<CMatrix> {
    // nalgebra takes complex square roots of the pivots, so a negative pivot
    // does not fail by itself.
    let factor = g.matrix().clone().cholesky().map(|ch| ch.l()).filter(|l| {
        l.diagonal()
            .iter()
            .all(|d| d.re > 0.0 && d.im.abs() <= 1e-12 * d.re && d.re.is_finite())
    });
    match factor {
        Some(l) => Ok(l),
        None => Err(Error::NotPositiveDefinite {
            min_eigenvalue: hermitian_eigen(g).values.last().copied().unwrap_or(0.0),
        }),
    }
}

/// Inverse of a lower-triangular matrix.
pub fn lower_inverse(l: &CMatrix) -> Result<CMatrix> {
    let n = l.nrows();
    let id = CMatrix::identity(n, n);
    l.solve_lower_triangular(&id)
        .ok_or_else(|| Error::Singular("triangular factor".into()))
}

/// Eigenvalues of `A` relative to `G` (roots of `det(A - t G) = 0`),
/// descending, with `G`-orthonormal eigenvectors.
///
/// Reduces the pencil through `G = C C*` to the Hermitian problem for
/// `C⁻¹ A C⁻*`.
pub fn relative_eigen(a: &HermitianForm, g: &HermitianForm) -> Result<EigenSpectrum> {
    if a.dim() != g.dim() {
        return Err(Error::Dimension(format!(
            "pencil dims {} vs {}",
            a.dim(),
            g.dim()
        )));
    }
    let ch = cholesky(g)?;
    let ci = lower_inverse(&ch)?;
    let reduced = HermitianForm::hermitian_part(&(&ci * a.matrix() * ci.adjoint()));
    let spec = hermitian_eigen(&reduced);
    Ok(EigenSpectrum {
        values: spec.values,
        vectors: ci.adjoint() * spec.vectors,
    })
}

/// Singular values in descending order.
pub fn singular_values(l: &CMatrix) -> Vec<f64> {
    if l.nrows() == 0 || l.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = l.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn operator_norm(l: &CMatrix) -> f64 {
    singular_values(l).first().copied().unwrap_or(0.0)
}

/// Full singular value decomposition `L = U diag(s) V*` with square
/// unitary `U` (rows x rows) and `V` (cols x cols), values descending.
pub fn full_svd(l: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let (n, m) = l.shape();
    let k = n.min(m);
    let svd = l.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V*");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let mut uk = CMatrix::zeros(n, k);
    let mut vk = CMatrix::zeros(m, k);
    let mut s = Vec::with_capacity(k);
    for (pos, &i) in order.iter().enumerate() {
        uk.set_column(pos, &u.column(i));
        vk.set_column(pos, &vt.row(i).adjoint());
        s.push(svd.singular_values[i]);
    }
    (complete_unitary(&uk), s, complete_unitary(&vk))
}

/// Extends orthonormal columns to a square unitary matrix by Gram-Schmidt
/// against the standard basis.
pub fn complete_unitary(cols: &CMatrix) -> CMatrix {
    let n = cols.nrows();
    let mut out = CMatrix::zeros(n, n);
    let mut filled = 0;
    for j in 0..cols.ncols().min(n) {
        out.set_column(filled, &cols.column(j));
        filled += 1;
    }
    let mut e = 0;
    while filled < n && e < n {
        let mut v = CVector::zeros(n);
        v[e] = c(1.0, 0.0);
        for _ in 0..2 {
            for k in 0..filled {
                let q = out.column(k).into_owned();
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let nv = v.norm();
        if nv > 1e-6 {
            out.set_column(filled, &(v / c(nv, 0.0)));
            filled += 1;
        }
        e += 1;
    }
    out
}

/// Strictly increasing coordinate indices (zero-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>, dim: usize) -> Result<Self> {
        if indices.len() > dim {
            return Err(Error::OutOfRange(format!(
                "multi-index of length {} in dimension {dim}",
                indices.len()
            )));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) || indices.iter().any(|&i| i >= dim) {
            return Err(Error::OutOfRange(format!(
                "{indices:?} is not strictly increasing within 0..{dim}"
            )));
        }
        Ok(MultiIndex(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All multi-indices of length `ell` in `0..dim`, lexicographic.
    pub fn all(dim: usize, ell: usize) -> Vec<MultiIndex> {
        (0..dim).combinations(ell).map(MultiIndex).collect()
    }
}

pub fn submatrix(l: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), cols.len(), |i, j| l[(rows[i], cols[j])])
}

/// Matrix of `ell x ell` minors of `l`: entry `(I, J) = det L[I, J]` with
/// row and column multi-indices in lexicographic order. This is the matrix
/// of `Λ^ell L` in the induced unitary frames.
pub fn compound_matrix(l: &CMatrix, ell: usize) -> Result<CMatrix> {
    let (n, m) = l.shape();
    if ell == 0 || ell > n.min(m) {
        return Err(Error::OutOfRange(format!(
            "compound order {ell} for a {n}x{m} matrix"
        )));
    }
    let rows = MultiIndex::all(n, ell);
    let cols = MultiIndex::all(m, ell);
    let mut out = CMatrix::zeros(rows.len(), cols.len());
    for (a, ri) in rows.iter().enumerate() {
        for (b, ci) in cols.iter().enumerate() {
            out[(a, b)] = submatrix(l, ri.indices(), ci.indices()).determinant();
        }
    }
    Ok(out)
}

/// A simple multivector `v_1 ∧ … ∧ v_ell`, stored by its factors (columns).
#[derive(Debug, Clone)]
pub struct SimpleMultivector {
    factors: CMatrix,
}

impl SimpleMultivector {
    pub fn new(factors: CMatrix) -> Self {
        SimpleMultivector { factors }
    }

    pub fn degree(&self) -> usize {
        self.factors.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.factors.nrows()
    }

    pub fn factors(&self) -> &CMatrix {
        &self.factors
    }

    /// Coefficients in the lexicographic basis `e_I`: the `ell x ell` minors
    /// of the factor matrix.
    pub fn coefficients(&self) -> CVector {
        let ell = self.degree();
        let idx = MultiIndex::all(self.ambient_dim(), ell);
        let cols: Vec<usize> = (0..ell).collect();
        CVector::from_iterator(
            idx.len(),
            idx.iter()
                .map(|i| submatrix(&self.factors, i.indices(), &cols).determinant()),
        )
    }

    /// Image under a linear map, `L v_1 ∧ … ∧ L v_ell`.
    pub fn pushed(&self, l: &CMatrix) -> SimpleMultivector {
        SimpleMultivector {
            factors: l * &self.factors,
        }
    }
}

/// `<a, b̄> = det(<v_i, w̄_j>)` for simple multivectors with the standard
/// Hermitian product on the factors.
pub fn wedge_inner(a: &SimpleMultivector, b: &SimpleMultivector) -> Result<C64> {
    if a.degree() != b.degree() {
        return Err(Error::Dimension(format!(
            "wedge degrees {} vs {}",
            a.degree(),
            b.degree()
        )));
    }
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::Dimension(format!(
            "ambient dims {} vs {}",
            a.ambient_dim(),
            b.ambient_dim()
        )));
    }
    // gram[(i, j)] = <v_i, w̄_j> = w_j* v_i
    let gram = (b.factors.adjoint() * &a.factors).transpose();
    Ok(gram.determinant())
}

/// Outcome of the partial-trace comparison `σ_ell ≥ U_ell`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TraceBound {
    pub sigma: f64,
    pub u: f64,
    pub holds: bool,
}

/// Outcome of the partial-product comparison `∏ λ_α ≥ W_ell`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DetBound {
    pub product: f64,
    pub w: f64,
    pub holds: bool,
}

fn check_ell(ell: usize, dim: usize) -> Result<()> {
    if ell == 0 || ell > dim {
        Err(Error::OutOfRange(format!("ell = {ell} in dimension {dim}")))
    } else {
        Ok(())
    }
}

/// Trace of `A` compressed to the span of the first `ell` coordinate
/// vectors, measured in a `G`-orthonormal basis of that span:
/// `tr(G_ell⁻¹ A_ell)`.
pub fn leading_block_trace(a: &HermitianForm, g: &HermitianForm, ell: usize) -> Result<f64> {
    check_ell(ell, a.dim())?;
    let ch = cholesky(&g.leading_block(ell))?;
    let ci = lower_inverse(&ch)?;
    Ok((&ci * a.leading_block(ell).matrix() * ci.adjoint()).trace().re)
}

/// `det(A_ell) / det(G_ell)` on the leading blocks.
pub fn leading_block_det_ratio(a: &HermitianForm, g: &HermitianForm, ell: usize) -> Result<f64> {
    check_ell(ell, a.dim())?;
    let gd = g.leading_block(ell).determinant();
    if gd.abs() <= f64::MIN_POSITIVE {
        return Err(Error::Singular(format!("det(G_{ell}) = {gd:e}")));
    }
    Ok(a.leading_block(ell).determinant() / gd)
}

/// Sum of the top `ell` eigenvalues of `A` relative to `G` against the
/// leading-block trace.
pub fn partial_trace_bound_check(
    a: &HermitianForm,
    g: &HermitianForm,
    ell: usize,
) -> Result<TraceBound> {
    check_ell(ell, a.dim())?;
    let spec = relative_eigen(a, g)?;
    let sigma = spec.top_sum(ell);
    let u = leading_block_trace(a, g, ell)?;
    Ok(TraceBound {
        sigma,
        u,
        holds: sigma >= u - ABS_TOL,
    })
}

/// Product of the top `ell` relative eigenvalues against
/// `det(A_ell)/det(G_ell)`.
pub fn partial_det_bound_check(
    a: &HermitianForm,
    g: &HermitianForm,
    ell: usize,
) -> Result<DetBound> {
    check_ell(ell, a.dim())?;
    let spec = relative_eigen(a, g)?;
    let product = spec.top_product(ell);
    let w = leading_block_det_ratio(a, g, ell)?;
    Ok(DetBound {
        product,
        w,
        holds: product >= w - ABS_TOL * product.abs().max(1.0),
    })
}
