use proptest::prelude::*;
use schwarz_core::bochner::*;
use schwarz_core::holomap::{HolomorphicMapModel, MapSpec, Monomial};
use schwarz_core::metrics::{curvature, ChartedKahlerMetric};
use schwarz_core::sampling::{rng_for, sphere_point, SampleRegion};
use schwarz_core::xlinalg::{c, CVector};
use schwarz_core::Error;

fn pt(v: &[(f64, f64)]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|&(a, b)| c(a, b)))
}

fn poly(terms: &[&[(f64, &[u32])]]) -> MapSpec {
    MapSpec::Polynomial {
        components: terms
            .iter()
            .map(|comp| {
                comp.iter()
                    .map(|&(k, p)| Monomial { coeff: [k, 0.0], powers: p.to_vec() })
                    .collect()
            })
            .collect(),
    }
}

fn pb(m: usize, s: f64) -> ChartedKahlerMetric {
    ChartedKahlerMetric::poincare_ball(m, s).unwrap()
}

fn fs(m: usize, s: f64) -> ChartedKahlerMetric {
    ChartedKahlerMetric::fubini_study(m, s).unwrap()
}

fn flat(m: usize) -> ChartedKahlerMetric {
    ChartedKahlerMetric::flat(m).unwrap()
}

fn assert_identity(map: &HolomorphicMapModel, x0: &CVector, ell: usize, which: Barrier, seed: u64) {
    let mut rng = rng_for(seed, 0);
    let dir = sphere_point(&mut rng, map.source_dim());
    let inst = BochnerInstance::new(map, x0, &dir, ell).unwrap();
    let r = bochner_residual(&inst, which).unwrap();
    assert!(r.within(1e-4, 1e-3), "{} {which:?} ell={ell}: {r:?}", map.label());
    if let Some(order) = r.order {
        assert!(order >= 1.8, "{} order {order}", map.label());
    }
    assert_eq!(r.barrier_violations, 0);
}

#[test]
fn identities_hold_across_model_pairs() {
    let cases = [
        (
            HolomorphicMapModel::new(fs(2, 1.0), pb(2, 1.0), &poly(&[&[(0.3, &[1, 0]), (0.2, &[0, 2])], &[(0.25, &[1, 1])]])).unwrap(),
            pt(&[(0.3, 0.2), (-0.4, 0.1)]),
        ),
        (
            HolomorphicMapModel::new(flat(2), fs(3, 1.0), &poly(&[&[(1.0, &[1, 0])], &[(1.0, &[0, 2])], &[(0.5, &[1, 1])]])).unwrap(),
            pt(&[(0.2, -0.1), (0.5, 0.3)]),
        ),
        (
            HolomorphicMapModel::new(pb(2, 1.0), pb(3, 1.5), &poly(&[&[(0.5, &[1, 0]), (0.25, &[0, 2])], &[(0.3, &[1, 1])], &[(0.4, &[0, 1])]])).unwrap(),
            pt(&[(0.1, 0.3), (0.2, -0.2)]),
        ),
        (
            HolomorphicMapModel::new(fs(2, 1.0), fs(3, 2.0), &poly(&[&[(1.0, &[1, 0])], &[(0.7, &[0, 2])], &[(0.4, &[1, 1])]])).unwrap(),
            pt(&[(0.4, 0.1), (-0.2, 0.6)]),
        ),
    ];
    for (k, (map, x0)) in cases.iter().enumerate() {
        for ell in 1..=2 {
            for which in [Barrier::U, Barrier::W] {
                assert_identity(map, x0, ell, which, k as u64 * 10 + ell as u64);
            }
        }
    }
}

#[test]
fn rank_deficient_maps_satisfy_the_trace_identity() {
    // f = (φ, φ²/2), φ = (z1 + z2)/2, has rank one everywhere
    let map = HolomorphicMapModel::new(
        pb(2, 1.0),
        pb(2, 1.0),
        &poly(&[&[(0.5, &[1, 0]), (0.5, &[0, 1])], &[(0.125, &[2, 0]), (0.25, &[1, 1]), (0.125, &[0, 2])]]),
    )
    .unwrap();
    let x0 = pt(&[(0.2, 0.1), (-0.1, 0.3)]);
    assert_eq!(map.singular_spectrum(&x0).unwrap().rank(), 1);
    assert_identity(&map, &x0, 2, Barrier::U, 3);
    assert_identity(&map, &x0, 1, Barrier::U, 4);
    assert_identity(&map, &x0, 1, Barrier::W, 5);
    let inst = BochnerInstance::new(&map, &x0, &pt(&[(1.0, 0.0), (0.0, 0.0)]), 2).unwrap();
    assert!(matches!(bochner_residual(&inst, Barrier::W), Err(Error::Degenerate(_))));
}

#[test]
fn repeated_singular_values_do_not_depend_on_the_frame() {
    // scaled identity: every singular value coincides
    let map = HolomorphicMapModel::new(pb(3, 1.0), pb(3, 2.0), &MapSpec::Scale { factor: [0.5, 0.0] }).unwrap();
    let x0 = pt(&[(0.1, 0.2), (-0.3, 0.0), (0.2, 0.1)]);
    let inst = BochnerInstance::new(&map, &x0, &pt(&[(1.0, 0.0), (0.5, 0.5), (0.0, -1.0)]), 2).unwrap();
    let base = bochner_residual(&inst, Barrier::U).unwrap();
    for seed in 1..4 {
        let other = bochner_residual(&inst.rerotated(seed).unwrap(), Barrier::U).unwrap();
        assert!((other.rhs - base.rhs).abs() <= 1e-9 * (1.0 + base.rhs.abs()));
        assert!(other.within(1e-4, 1e-3));
    }
}

#[test]
fn finer_steps_reduce_the_residual_quadratically() {
    let map = HolomorphicMapModel::new(pb(1, 1.0), pb(1, 1.0), &poly(&[&[(1.0, &[2])]])).unwrap();
    let x0 = pt(&[(0.3, 0.1)]);
    let inst = BochnerInstance::new(&map, &x0, &pt(&[(1.0, 0.0)]), 1).unwrap();
    let r = bochner_residual(&inst.clone().with_step(0.1), Barrier::U).unwrap();
    let order = r.order.expect("coarse errors above roundoff");
    assert!((order - 2.0).abs() < 0.2, "{order}");
    assert!((r.lhs_coarse - r.rhs).abs() > (r.lhs_fine - r.rhs).abs());
}

#[test]
fn quartic_three_ways_agree() {
    let target = pb(3, 1.0);
    let map = HolomorphicMapModel::new(
        pb(3, 1.0),
        target.clone(),
        &poly(&[&[(0.5, &[1, 0, 0]), (0.2, &[0, 1, 1])], &[(0.3, &[0, 1, 0])], &[(0.2, &[0, 0, 1]), (0.1, &[2, 0, 0])]]),
    )
    .unwrap();
    let x0 = pt(&[(0.1, 0.1), (0.2, -0.1), (0.0, 0.3)]);
    let spec = map.singular_spectrum(&x0).unwrap();
    let curv = curvature(&target, &map.value(&x0).unwrap()).unwrap();
    for k in 1..=3 {
        let q = royden_quartic(&curv, &spec, k, 100_000, 17).unwrap();
        assert!((q.moment - q.exact).abs() <= 1e-12 * q.exact.abs().max(1e-12));
        assert!((q.mc - q.exact).abs() <= 4.0 * q.mc_stderr + 1e-12 * q.exact.abs(), "{q:?}");
        let chk = royden_bound_check(&curv, &spec, k, 2.0).unwrap();
        assert!(chk.holds && chk.sandwich_holds);
    }
}

#[test]
fn equal_singular_values_attain_the_quartic_bound() {
    let target = pb(3, 1.0);
    for (ell, kappa) in [(1, 2.0), (2, 2.0), (3, 2.0)] {
        let map = HolomorphicMapModel::new(pb(3, 1.0), target.clone(), &MapSpec::Scale { factor: [0.6, 0.0] }).unwrap();
        // at the center all singular values of z ↦ 0.6 z coincide
        let x0 = CVector::zeros(3);
        let spec = map.singular_spectrum(&x0).unwrap();
        let curv = curvature(&target, &map.value(&x0).unwrap()).unwrap();
        let chk = royden_bound_check(&curv, &spec, ell, kappa).unwrap();
        assert!(chk.margin.abs() <= 1e-6 * chk.bound.abs(), "{chk:?}");
    }
}

#[test]
fn plurisubharmonicity_on_qualifying_maps() {
    let cases = vec![
        (
            HolomorphicMapModel::new(flat(2), pb(2, 1.0), &poly(&[&[(0.5, &[1, 0])], &[(0.25, &[1, 1])]])).unwrap(),
            SampleRegion::ball(0.9, 25),
            1,
        ),
        (
            HolomorphicMapModel::new(fs(2, 1.0), pb(2, 1.0), &MapSpec::Scale { factor: [0.3, 0.0] }).unwrap(),
            SampleRegion::ball(2.0, 25),
            2,
        ),
        (
            HolomorphicMapModel::new(fs(1, 1.0), flat(1), &poly(&[&[(1.0, &[2])]])).unwrap(),
            SampleRegion::ball(1.5, 25),
            1,
        ),
    ];
    for (map, region, ell) in cases {
        let rep = psh_check(&map, &region, ell, 8, 5).unwrap();
        assert!(rep.passed(), "{}: {:?}", map.label(), rep.failures.first());
        assert!(rep.probes + 8 * rep.skipped >= 200);
        assert!(rep.min_value >= PSH_THRESHOLD);
    }
}

#[test]
fn plurisubharmonicity_needs_curvature_signs() {
    let map = HolomorphicMapModel::new(pb(1, 1.0), pb(1, 1.0), &poly(&[&[(1.0, &[2])]])).unwrap();
    let err = psh_check(&map, &SampleRegion::ball(0.5, 4), 1, 2, 1).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn power_sandwich_holds(values in proptest::collection::vec(0.0f64..10.0, 1..6)) {
        let mut v = values.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        for k in 1..=v.len() {
            let (sum4, u2, holds) = power_sandwich(&v, k);
            prop_assert!(holds, "{v:?} k={k}: {sum4} {u2}");
        }
    }
}
