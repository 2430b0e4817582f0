mod common;

use common::{permutations, random_config, random_mobius, rng, same_set, torsion_order};
use num_complex::Complex64;
use sphere_sections::elliptic::*;
use sphere_sections::mobius::*;

fn lambda_of(out: &SectionOutput) -> Complex64 {
    serde_json::from_value(out.parameters["lambda"].clone()).unwrap()
}

fn specs() -> Vec<TorsionSpec> {
    let mut v: Vec<TorsionSpec> = [2, 3, 4, 6].into_iter().map(TorsionSpec::full).collect();
    v.extend([1, 2, 3].into_iter().map(TorsionSpec::primitive));
    v
}

#[test]
fn counts_and_oracle_on_random_configurations() {
    let tol = Tolerances::default();
    let mut r = rng(40);
    for trial in 0..20 {
        let config = random_config(&mut r, 4, 0.1);
        for spec in specs() {
            let out = section_four_torsion(&config, &spec, &tol).unwrap();
            let expected = if spec.primitive {
                primitive_count(4 * spec.k) / 2
            } else {
                2 * spec.k * spec.k - 2
            };
            assert_eq!(out.new_points.len(), expected, "trial {trial} {spec:?}");
            let lambda = lambda_of(&out);
            let curve = LegendreCurve::new(lambda).unwrap();
            for x in torsion_x_values(&curve, &spec).unwrap() {
                let (order, residual) = torsion_order(lambda, x, 64);
                let order = order.unwrap_or_else(|| panic!("trial {trial} {spec:?}: x = {x} has no small order"));
                assert!(residual < 1e-6);
                if spec.primitive {
                    assert_eq!(order, spec.order(), "trial {trial} {spec:?}");
                } else {
                    assert!(order > 2 && spec.order() % order == 0, "trial {trial} {spec:?}: order {order}");
                }
            }
        }
    }
}

#[test]
fn two_division_polynomial_and_degrees() {
    let curve = LegendreCurve::new(Complex64::new(-0.4, 1.3)).unwrap();
    let p2 = division_polynomial(&curve, 2).unwrap();
    let roots = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), curve.lambda()];
    assert_eq!(p2.degree(), 3);
    let scale: f64 = p2.coeffs().iter().map(|c| c.norm()).sum();
    for x in roots {
        let v = p2.coeffs().iter().rev().fold(Complex64::default(), |acc, &c| acc * x + c);
        assert!(v.norm() < 1e-14 * scale);
    }
    assert_eq!(division_polynomial(&curve, 3).unwrap().degree(), 4);
    assert_eq!(division_polynomial(&curve, 5).unwrap().degree(), 12);
    assert_eq!(division_polynomial(&curve, 4).unwrap().degree(), 9);
}

#[test]
fn four_torsion_at_harmonic_lambda() {
    // λ = −1: doubling a point above each x-value of ψ₄/ψ₂ lands on 2-torsion.
    let lambda = Complex64::new(-1.0, 0.0);
    let curve = LegendreCurve::new(lambda).unwrap();
    let xs = torsion_x_values(&curve, &TorsionSpec::full(2)).unwrap();
    assert_eq!(xs.len(), 6);
    for &x in &xs {
        assert_eq!(torsion_order(lambda, x, 8).0, Some(4), "x = {x}");
    }
    // The section on {0, 1, ∞, −1} in that labeling returns the same set.
    let tol = Tolerances::default();
    let config = Configuration::new(
        vec![ProjectivePoint::real(0.0), ProjectivePoint::real(1.0), ProjectivePoint::infinity(), ProjectivePoint::real(-1.0)],
        &tol,
    )
    .unwrap();
    let (c, n) = legendre_from_config(&config).unwrap();
    assert!((c.lambda() - lambda).norm() < 1e-15);
    let p = ProjectivePoint::finite(Complex64::new(0.3, -0.7));
    assert!(chordal_distance(&n.apply(&p), &p) < 1e-15);
    let out = section_four_torsion(&config, &TorsionSpec::full(2), &tol).unwrap();
    let expected: Vec<ProjectivePoint> = xs.iter().map(|&x| ProjectivePoint::finite(x)).collect();
    assert!(same_set(&out.new_points, &expected, 1e-10));
}

#[test]
fn relabeling_moves_lambda_within_its_orbit() {
    let mut r = rng(9);
    let config = random_config(&mut r, 4, 0.1);
    let (c, _) = legendre_from_config(&config).unwrap();
    let orbit = d3_orbit(&ProjectivePoint::finite(c.lambda()), 1e-10);
    for p in permutations(4) {
        let (c2, n2) = legendre_from_config(&config.relabel(&p).unwrap()).unwrap();
        let l2 = ProjectivePoint::finite(c2.lambda());
        assert!(orbit.iter().any(|q| chordal_distance(q, &l2) < 1e-9), "{p:?}");
        // N maps the configuration onto {0, 1, ∞, λ}.
        let image: Vec<ProjectivePoint> = config.points().iter().map(|z| n2.apply(z)).collect();
        let target = [ProjectivePoint::real(0.0), ProjectivePoint::real(1.0), ProjectivePoint::infinity(), l2];
        assert!(same_set(&image, &target, 1e-9));
    }
}

#[test]
fn torsion_section_equivariant() {
    let tol = Tolerances::default();
    let mut r = rng(77);
    let all = specs();
    for trial in 0..100 {
        let config = random_config(&mut r, 4, 0.1);
        let map = random_mobius(&mut r, 25.0);
        let spec = all[trial % all.len()];
        let Ok(moved) = config.transform(&map, &tol) else { continue };
        let out = section_four_torsion(&config, &spec, &tol).unwrap();
        let expected: Vec<ProjectivePoint> = out.new_points.iter().map(|p| map.apply(p)).collect();
        let got = section_four_torsion(&moved, &spec, &tol).unwrap();
        let mismatch = set_distance(&got.new_points, &expected);
        assert!(mismatch < 1e-8, "trial {trial} {spec:?}: {mismatch:.3e}");
    }
}

#[test]
fn torsion_section_label_invariant() {
    let tol = Tolerances::default();
    let mut r = rng(12);
    for spec in [TorsionSpec::full(2), TorsionSpec::full(3), TorsionSpec::primitive(2), TorsionSpec::full(6)] {
        let config = random_config(&mut r, 4, 0.1);
        let base = section_four_torsion(&config, &spec, &tol).unwrap();
        for p in permutations(4) {
            let out = section_four_torsion(&config.relabel(&p).unwrap(), &spec, &tol).unwrap();
            assert!(set_distance(&out.new_points, &base.new_points) < 1e-9, "{spec:?} {p:?}");
        }
    }
}

#[test]
fn conditioning_guard_rejects_near_degenerate() {
    let tol = Tolerances::default();
    let config = Configuration::new(
        vec![ProjectivePoint::real(0.0), ProjectivePoint::real(1.0), ProjectivePoint::infinity(), ProjectivePoint::real(1e-6)],
        &tol,
    )
    .unwrap();
    let err = section_four_torsion(&config, &TorsionSpec::full(2), &tol).unwrap_err();
    assert!(matches!(err, sphere_sections::Error::IllConditioned { .. }));
    assert!(err.is_numerical());
}

#[test]
fn invalid_specs_rejected() {
    assert!(TorsionSpec::full(1).validate().is_err());
    assert!(TorsionSpec::primitive(0).validate().is_err());
    assert!(TorsionSpec::full(40).validate().is_err());
    let tol = Tolerances::default();
    assert!(section_four_torsion(&Configuration::roots_of_unity(5), &TorsionSpec::full(2), &tol).is_err());
}

#[test]
fn primitive_count_is_multiplicative() {
    assert_eq!(primitive_count(1), 1);
    assert_eq!(primitive_count(8), 48);
    assert_eq!(primitive_count(12), primitive_count(4) * primitive_count(3));
    for k in 1..40usize {
        // brute force over (ℤ/k)²
        let gcd = |mut a: usize, mut b: usize| {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        };
        let exact = (0..k)
            .flat_map(|a| (0..k).map(move |b| (a, b)))
            .filter(|&(a, b)| gcd(gcd(a, b), k) == 1)
            .count();
        assert_eq!(primitive_count(k), exact, "k = {k}");
    }
}

#[test]
fn planner_examples() {
    let tol = Tolerances::default();
    let config = random_config(&mut rng(2), 4, 0.1);
    for (m, base, levels) in [(70, 70, 0), (94, 70, 1), (72, 0, 3), (78, 6, 3), (88, 16, 3)] {
        let out = section_four_planned(&config, m, &tol).unwrap();
        assert_eq!(out.new_points.len(), m);
        assert_eq!(out.parameters["base"], base);
        assert_eq!(out.parameters["levels"], levels);
        assert!(out.report(&config, &tol).valid);
    }
    for m in [22, 40, 71, 76] {
        assert!(section_four_planned(&config, m, &tol).is_err(), "m = {m}");
    }
}
