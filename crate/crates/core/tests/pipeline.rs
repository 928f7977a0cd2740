use hesse_core::classify::{classify, example_cubic, p4_suite};
use hesse_core::cone::{cone_test, projection_lemma_check, HyperplaneChart};
use hesse_core::field::rational;
use hesse_core::gn::{random_instance, GnSkeleton};
use hesse_core::hessian::{hessian_vanishes, polar_image_dim, HessianMode, VerdictMode};
use hesse_core::poly::parse_in;
use hesse_core::psi::{
    build_psi, check_fiber_lines, check_inclusions, check_invariance, check_second_derivative_relation,
    find_polar_relation, sample_image, taylor_check, CheckMode,
};
use hesse_core::{Error, Exec, Rational, Seed};

#[test]
fn cubic_end_to_end() {
    let f = example_cubic();
    let v = hessian_vanishes(&f, HessianMode::Symbolic, Seed(0)).unwrap();
    assert!(v.vanishes);
    assert_eq!(v.mode, VerdictMode::Symbolic);
    assert!(!cone_test(&f).unwrap().is_cone());
    assert_eq!(polar_image_dim(&f, 5, Seed(0)).unwrap(), 3);

    let rel = find_polar_relation(&f, 4).unwrap().unwrap();
    assert_eq!(rel.degree, 2);
    let expected = parse_in("y1^2 - 4*y0*y2", "y", 5).unwrap();
    assert!(rel.g == expected || rel.g == -expected);

    let psi = build_psi(&f, rel, false).unwrap();
    assert!(check_second_derivative_relation(&f, &psi).unwrap());
    for big_f in std::iter::once(&f).chain(psi.components.iter()) {
        assert!(check_invariance(big_f, &psi, CheckMode::Symbolic, Seed(0)).unwrap().holds());
    }
    for h in &psi.components {
        assert!(taylor_check(h, &psi).unwrap());
    }
    let img = sample_image(&psi, 16, Seed(0)).unwrap();
    assert!(check_inclusions(&f, &psi, &img, false).unwrap().passed());
    assert!(check_fiber_lines(&f, &psi, &img, 4, Seed(0)).unwrap().passed());
}

#[test]
fn gn_instances_have_psi_identities() {
    let skel = GnSkeleton { n: 4, t: 2, m: 1, hdeg: 2, psideg: 1, d: 3 };
    for s in 0..3 {
        let inst = random_instance(&skel, Seed(s)).unwrap();
        let f = &inst.f;
        let rel = find_polar_relation(f, 4).unwrap().unwrap();
        let psi = build_psi(f, rel, false).unwrap();
        assert!(check_second_derivative_relation(f, &psi).unwrap());
        let c = check_invariance(f, &psi, CheckMode::Sampled { points: 6 }, Seed(s)).unwrap();
        assert!(c.holds() && c.consistent());
        let img = sample_image(&psi, 12, Seed(s)).unwrap();
        assert!(check_inclusions(f, &psi, &img, false).unwrap().passed());
    }
}

#[test]
fn projection_lemma_on_instances() {
    let skel = GnSkeleton { n: 4, t: 2, m: 1, hdeg: 2, psideg: 1, d: 4 };
    for s in 0..3 {
        let inst = random_instance(&skel, Seed(s)).unwrap();
        let dual: Vec<Rational> = (0..5).map(|i| rational(i as i64 - 2)).collect();
        let chart = HyperplaneChart::random(dual, Seed(s)).unwrap();
        let r = projection_lemma_check(&inst.f, &chart, 10, Seed(s)).unwrap();
        assert!(r.passed && r.checked > 0);
    }
}

#[test]
fn p4_suite_small() {
    let reports = p4_suite(2, Seed(5), Exec::Parallel).unwrap();
    assert_eq!(reports.len(), 3);
    for r in &reports {
        assert!(r.passed(), "{}: {:?}", r.id, r.failures);
        let curve = r.plane_curve.as_ref().unwrap();
        assert_eq!(curve.span_rank, 3);
        assert!(curve.curve_degree.unwrap() <= 6);
    }
    assert_eq!(reports, p4_suite(2, Seed(5), Exec::Sequential).unwrap());
}

#[test]
fn cones_and_errors() {
    let f = parse_in("x0^3 + x1^3 + x2^3", "x", 5).unwrap();
    let r = classify("fermat-cone", &f, Seed(1)).unwrap();
    assert!(r.vanishes && r.cone && r.passed());
    assert_eq!(r.dim_z, 2);
    assert!(r.plane_curve.is_none());
    let fermat = parse_in("x0^3 + x1^3 + x2^3", "x", 3).unwrap();
    let r = classify("fermat", &fermat, Seed(1)).unwrap();
    assert!(!r.vanishes && !r.cone && r.passed());
    let inhom = parse_in("x0^2 + x1", "x", 2).unwrap();
    assert_eq!(hessian_vanishes(&inhom, HessianMode::Symbolic, Seed(0)), Err(Error::NotHomogeneous));
}
