use proptest::prelude::*;
use schwarz_core::curvfun::*;
use schwarz_core::metrics::{curvature, ChartedKahlerMetric, CurvatureData};
use schwarz_core::sampling::{gaussian_vector, haar_unitary, rng_for, SampleRegion};
use schwarz_core::xlinalg::{c, CMatrix, CVector, C64};

/// `Σ_i R(E_i, Ē_i, v, v̄)` summed directly over tensor components.
fn brute_ric(curv: &CurvatureData, frame: &CMatrix, v: &CVector) -> f64 {
    let n = curv.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..frame.ncols() {
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    for d in 0..n {
                        acc += curv.r.get(a, b, cc, d) * frame[(a, i)] * frame[(b, i)].conj() * v[cc] * v[d].conj();
                    }
                }
            }
        }
    }
    acc.re / curv.norm_sq(v)
}

fn brute_scal(curv: &CurvatureData, frame: &CMatrix) -> f64 {
    (0..frame.ncols())
        .map(|j| {
            let e = frame.column(j).into_owned();
            brute_ric(curv, frame, &e)
        })
        .sum()
}

fn constant_models() -> Vec<(ChartedKahlerMetric, f64)> {
    vec![
        (ChartedKahlerMetric::poincare_ball(2, 1.0).unwrap(), 0.8),
        (ChartedKahlerMetric::poincare_ball(3, 2.0).unwrap(), 0.8),
        (ChartedKahlerMetric::fubini_study(3, 1.0).unwrap(), 2.0),
        (ChartedKahlerMetric::fubini_study(4, 0.5).unwrap(), 2.0),
    ]
}

#[test]
fn restricted_ricci_and_scalar_closed_forms() {
    for (g, radius) in constant_models() {
        let m = g.dim();
        let hol = g.constant_holomorphic_curvature().unwrap();
        for (k, p) in SampleRegion::ball(radius, 5).sample(m, 11).unwrap().into_iter().enumerate() {
            let curv = curvature(&g, &p).unwrap();
            let mut rng = rng_for(k as u64, 3);
            for ell in 1..=m {
                let u = haar_unitary(&mut rng, m);
                let sigma = SubspaceFrame::from_unitary(&curv.g, &u, ell).unwrap();
                let coeffs = gaussian_vector(&mut rng, ell);
                let v = sigma.columns() * coeffs;
                let want_ric = 0.5 * hol * (ell as f64 + 1.0);
                let want_scal = 0.5 * hol * (ell * (ell + 1)) as f64;
                let brute = brute_ric(&curv, sigma.columns(), &v);
                let fast = ric_sigma(&curv, &sigma, &v).unwrap();
                assert!((brute - want_ric).abs() <= 1e-6 * want_ric.abs());
                assert!((fast - want_ric).abs() <= 1e-6 * want_ric.abs());
                let bs = brute_scal(&curv, sigma.columns());
                assert!((bs - want_scal).abs() <= 1e-6 * want_scal.abs());
                assert!((scal_sigma(&curv, &sigma) - want_scal).abs() <= 1e-6 * want_scal.abs());
                let can_r = Canonical::resolve(Functional::RicEll, ell, m).unwrap();
                let can_s = Canonical::resolve(Functional::ScalEll, ell, m).unwrap();
                assert!((can_r.constant_curvature_range(hol, m).0 - want_ric).abs() <= 1e-12 * want_ric.abs());
                assert!((can_s.constant_curvature_range(hol, m).0 - want_scal).abs() <= 1e-12 * want_scal.abs());
            }
        }
    }
}

#[test]
fn ricci_perp_is_the_orthogonal_sum() {
    // Ric⊥(X) = Σ_{j ≥ 2} B⊥(X, E_j) for a unitary completion of X/|X|.
    let g = ChartedKahlerMetric::product(
        ChartedKahlerMetric::poincare_ball(1, 1.0).unwrap(),
        ChartedKahlerMetric::fubini_study(2, 1.5).unwrap(),
    );
    for (k, p) in SampleRegion::ball(0.6, 6).sample(3, 5).unwrap().into_iter().enumerate() {
        let curv = curvature(&g, &p).unwrap();
        let mut rng = rng_for(k as u64, 6);
        let u = haar_unitary(&mut rng, 3);
        let frame = SubspaceFrame::from_unitary(&curv.g, &u, 3).unwrap();
        let x = frame.vector(0) * c(1.7, -0.4);
        let sum: f64 = (1..3).map(|j| orth_bisec(&curv, &x, &frame.vector(j)).unwrap()).sum();
        let rp = ric_perp(&curv, &x).unwrap();
        assert!((rp - sum).abs() <= 1e-10 * (1.0 + rp.abs()));
        // and Ric⊥ ≥ (m - 1) min B⊥ along the same frame
        let min_b = (1..3)
            .map(|j| orth_bisec(&curv, &x, &frame.vector(j)).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(rp >= 2.0 * min_b - 1e-12);
    }
}

#[test]
fn orthogonal_bisectional_bound_implies_ricci_perp_bound() {
    let g = ChartedKahlerMetric::product(
        ChartedKahlerMetric::fubini_study(1, 1.0).unwrap(),
        ChartedKahlerMetric::fubini_study(2, 2.0).unwrap(),
    );
    let region = SampleRegion::ball(1.0, 6);
    let budget = SearchBudget { frames: 24, refine: 40 };
    let b = bound_search(&g, Functional::OrthBisec, 1, BoundKind::Lower, &region, budget, 9).unwrap();
    let r = bound_search(&g, Functional::RicPerp, 1, BoundKind::Lower, &region, budget, 9).unwrap();
    // B⊥ ≥ 0 on a product of positively curved factors, hence Ric⊥ ≥ 0
    assert!(b.value > -1e-9, "{}", b.value);
    assert!(r.value > -1e-9, "{}", r.value);
}

#[test]
fn functionals_do_not_depend_on_the_frame_of_sigma() {
    let g = ChartedKahlerMetric::product(
        ChartedKahlerMetric::poincare_ball(2, 1.0).unwrap(),
        ChartedKahlerMetric::fubini_study(1, 1.0).unwrap(),
    );
    let p = CVector::from_vec(vec![c(0.2, 0.1), c(-0.3, 0.2), c(0.7, 0.5)]);
    let curv = curvature(&g, &p).unwrap();
    let mut rng = rng_for(1, 1);
    let u = haar_unitary(&mut rng, 3);
    let sigma = SubspaceFrame::from_unitary(&curv.g, &u, 2).unwrap();
    let v = sigma.vector(0) + sigma.vector(1) * c(0.3, 0.9);
    let w = haar_unitary(&mut rng, 2);
    let other = sigma.reframed(&w);
    let (a, b) = (ric_sigma(&curv, &sigma, &v).unwrap(), ric_sigma(&curv, &other, &v).unwrap());
    assert!((a - b).abs() < 1e-12);
    assert!((scal_sigma(&curv, &sigma) - scal_sigma(&curv, &other)).abs() < 1e-12);
    let q = ric_sigma_form(&curv, &sigma);
    assert!((q.trace() - scal_sigma(&curv, &sigma)).abs() < 1e-12);
    let coords = sigma.columns().adjoint() * curv.g.matrix() * &v;
    assert!((q.norm_sq(&coords) / coords.norm_squared() - a).abs() < 1e-12);
    // Ricci form contracted with the metric inverse gives the scalar curvature
    let ric = ricci_form(&curv).unwrap();
    let tr = (&curv.g_inv * ric.matrix()).trace().re;
    assert!((tr - scalar(&curv).unwrap()).abs() < 1e-10);
}

#[test]
fn search_recovers_constant_curvature_values() {
    let budget = SearchBudget::default();
    for (g, radius) in constant_models() {
        let m = g.dim();
        let hol = g.constant_holomorphic_curvature().unwrap();
        let region = SampleRegion::ball(radius, 3);
        for f in Functional::ALL {
            for ell in [1, 2] {
                let canon = Canonical::resolve(f, ell, m).unwrap();
                let (lo, hi) = canon.constant_curvature_range(hol, m);
                let low = bound_search(&g, f, ell, BoundKind::Lower, &region, budget, 4).unwrap();
                let high = bound_search(&g, f, ell, BoundKind::Upper, &region, budget, 4).unwrap();
                assert!(low.value >= lo - 1e-6 * lo.abs().max(1.0), "{} {}", canon.label(), g.label());
                assert!(high.value <= hi + 1e-6 * hi.abs().max(1.0));
                if lo == hi {
                    assert!((low.value - lo).abs() <= 1e-6 * lo.abs().max(1.0));
                } else {
                    // bisectional extremes are reached by refinement
                    assert!((low.value - lo).abs() <= 1e-3 * lo.abs(), "{} vs {lo} on {}", low.value, g.label());
                    assert!((high.value - hi).abs() <= 1e-3 * hi.abs(), "{} vs {hi} on {}", high.value, g.label());
                }
                let again = low.reevaluate(&g).unwrap();
                assert!((again - low.value).abs() <= 1e-12 * (1.0 + again.abs()));
            }
        }
    }
}

#[test]
fn search_finds_the_extremes_of_a_product() {
    // H on pb(1) x fs(1) at the origin is -2|x1|⁴ + 2|x2|⁴ for unit X.
    let g = ChartedKahlerMetric::product(
        ChartedKahlerMetric::poincare_ball(1, 1.0).unwrap(),
        ChartedKahlerMetric::fubini_study(1, 1.0).unwrap(),
    );
    let points = vec![CVector::zeros(2)];
    let budget = SearchBudget::default();
    let lo = bound_search_at(&g, &points, Functional::HoloSec, 1, BoundKind::Lower, budget, 1).unwrap();
    let hi = bound_search_at(&g, &points, Functional::HoloSec, 1, BoundKind::Upper, budget, 1).unwrap();
    assert!((lo.value + 2.0).abs() < 1e-3, "{}", lo.value);
    assert!((hi.value - 2.0).abs() < 1e-3, "{}", hi.value);
    let again = bound_search_at(&g, &points, Functional::HoloSec, 1, BoundKind::Lower, budget, 1).unwrap();
    assert_eq!(again.value.to_bits(), lo.value.to_bits());
    assert!(lo.empirical);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ricci_is_the_full_restricted_ricci(seed in any::<u64>(), m in 2usize..4) {
        let g = ChartedKahlerMetric::product(
            ChartedKahlerMetric::poincare_ball(1, 1.0).unwrap(),
            ChartedKahlerMetric::fubini_study(m - 1, 1.0).unwrap(),
        );
        let p = SampleRegion::ball(0.5, 2).sample(m, seed).unwrap().pop().unwrap();
        let curv = curvature(&g, &p).unwrap();
        let mut rng = rng_for(seed, 2);
        let x = gaussian_vector(&mut rng, m);
        let full = SubspaceFrame::full(&curv.g).unwrap();
        let a = ricci(&curv, &x).unwrap();
        prop_assert!((a - brute_ric(&curv, full.columns(), &x)).abs() <= 1e-10 * (1.0 + a.abs()));
        let h = holo_sec(&curv, &x).unwrap();
        prop_assert!((ric_perp(&curv, &x).unwrap() - (a - h)).abs() <= 1e-12 * (1.0 + a.abs()));
    }
}
