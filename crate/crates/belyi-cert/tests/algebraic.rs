//! Integration checks of the exact algebra on both bundled datasets.

use belyi_cert::belyi::{
    branch_cycle_consistency, critical_divisor_check, discriminant_square_evidence,
    emit_galois_polynomial, riemann_hurwitz_genus, specialization_evidence, verify_difference,
    DiscFamily, Substitution,
};
use belyi_cert::datainput::load_builtin;
use belyi_cert::permgroup::{minimal_block_systems, orbit, StabilizerChain};
use belyi_cert::qpoly::{discriminant_at, parse_rational, same_squarefree_part, DiscError};
use num_bigint::BigUint;

#[test]
fn map1_difference_factorization_and_recovery() {
    let d = load_builtin("hs-map-1").unwrap();
    let ex = d.map.expand();
    assert_eq!(ex.p.degree(), Some(100));
    assert_eq!(ex.q.degree(), Some(100));
    assert_eq!(ex.r.degree(), Some(98));

    let diff = verify_difference(&d.map, &ex, 7).unwrap();
    assert!(diff.passed(), "findings: {:?}", diff.findings);
    assert_eq!(diff.simple_degree, 6);
    assert_eq!(diff.double_degree, 46);
    // Constant is exactly 2^2 * 3^14 * 5^3.
    assert_eq!(diff.constant_matches, Some(true));

    let simple = diff.simple_factors.as_ref().unwrap();
    let degs: Vec<usize> = simple.iter().map(|f| f.degree().unwrap()).collect();
    assert_eq!(degs, vec![1, 5]);
    let double = diff.double_factors.as_ref().unwrap();
    let degs: Vec<usize> = double.iter().map(|f| f.degree().unwrap()).collect();
    assert_eq!(degs, vec![10, 16, 20]);
    // X - 1 is the declared linear factor.
    assert_eq!(simple[0], belyi_cert::qpoly::UniPoly::from_int_coeffs(&[-1, 1]));
    // All six factors carry certificates.
    assert_eq!(diff.irreducibility.len(), 5);
    for (label, cert) in &diff.irreducibility {
        assert!(cert.is_some(), "missing certificate for {label}");
    }
}

#[test]
fn map2_difference_split() {
    let d = load_builtin("hs-map-2").unwrap();
    let ex = d.map.expand();
    assert_eq!(ex.r.degree(), Some(100));
    let diff = verify_difference(&d.map, &ex, 7).unwrap();
    assert!(diff.passed(), "findings: {:?}", diff.findings);
    assert_eq!(diff.simple_degree, 30);
    assert_eq!(diff.double_degree, 35);
}

#[test]
fn critical_divisor_identities() {
    for (name, expected_deg) in [("hs-map-1", 197usize), ("hs-map-2", 198)] {
        let d = load_builtin(name).unwrap();
        let ex = d.map.expand();
        let diff = verify_difference(&d.map, &ex, 7).unwrap();
        let crit = critical_divisor_check(&d.map, &ex, &diff);
        assert!(crit.passed(), "{name}: {:?}", crit.findings);
        assert_eq!(crit.w_degree, expected_deg, "{name}");
        assert!(crit.identity_holds, "{name}");
    }
}

#[test]
fn branch_cycles_and_genus() {
    for name in ["hs-map-1", "hs-map-2"] {
        let d = load_builtin(name).unwrap();
        let ex = d.map.expand();
        let diff = verify_difference(&d.map, &ex, 7).unwrap();
        let bc = branch_cycle_consistency(&d.map, &ex, &diff);
        assert!(bc.passed(), "{name}: {:?}", bc.findings);
        let genus = riemann_hurwitz_genus(
            &[
                bc.profile.over_zero.clone(),
                bc.profile.over_one.clone(),
                bc.profile.over_infinity.clone(),
            ],
            100,
        )
        .unwrap();
        assert_eq!(genus, 0, "{name}");
    }
}

#[test]
fn group_certificates_for_both_triples() {
    for name in ["hs-map-1", "hs-map-2"] {
        let d = load_builtin(name).unwrap();
        // Triple product is the identity.
        let xyz = d.x.compose(&d.y).unwrap().compose(&d.z).unwrap();
        assert!(xyz.is_identity(), "{name}");
        // Transitive of degree 100.
        let gens = [d.x.clone(), d.y.clone()];
        assert_eq!(orbit(&gens, 1).unwrap().len(), 100, "{name}");
        // Exact order.
        let chain = StabilizerChain::build(&gens).unwrap();
        assert_eq!(chain.order(), BigUint::from(88_704_000u64), "{name}");
        // Rank 3 with subdegrees 1, 22, 77.
        let sub = StabilizerChain::subdegrees(&gens, 1).unwrap();
        assert_eq!(sub, vec![1, 22, 77], "{name}");
        // Primitive.
        assert!(minimal_block_systems(&gens).unwrap().is_empty(), "{name}");
    }
    // Parity: map 1 has sign(y) = -1.
    let d1 = load_builtin("hs-map-1").unwrap();
    assert_eq!(d1.y.sign(), -1);
    assert_eq!(d1.x.sign(), 1);
    assert_eq!(d1.z.sign(), -1);
}

#[test]
fn orbit_of_x_matches_first_cycle() {
    let d = load_builtin("hs-map-1").unwrap();
    let orb = orbit(&[d.x.clone()], 1).unwrap();
    let got: Vec<u32> = orb.into_iter().collect();
    let mut expected = vec![1u32, 64, 8, 54, 37];
    expected.sort_unstable();
    assert_eq!(got, expected);
}

#[test]
fn discriminant_family_evidence_map1() {
    let d = load_builtin("hs-map-1").unwrap();
    let ex = d.map.expand();

    // Degree drops at t0 = 1 (p - q has degree 98), reported as an error.
    let t1 = parse_rational("1").unwrap();
    assert!(matches!(
        discriminant_at(&ex.p, &ex.q, &t1),
        Err(DiscError::DegreeDrop { expected: 100, found: 98 })
    ));

    let samples: Vec<_> = ["3", "-1", "1/2", "7", "-5/3"]
        .iter()
        .map(|s| parse_rational(s).unwrap())
        .collect();
    let report = discriminant_square_evidence(&ex, DiscFamily::T, &samples, 5);
    assert!(report.passed(), "{:?}", report.samples);

    let samples2: Vec<_> = ["1", "2", "1/2", "-3", "3/2"]
        .iter()
        .map(|s| parse_rational(s).unwrap())
        .collect();
    let report2 =
        discriminant_square_evidence(&ex, DiscFamily::TwoTSquaredPlusOne, &samples2, 5);
    assert!(report2.passed(), "{:?}", report2.samples);

    // Spot check: at t0 = 3 the discriminant itself lies in the square
    // class of 2(3-1) = 4, i.e. is a square.
    let delta3 = discriminant_at(&ex.p, &ex.q, &parse_rational("3").unwrap()).unwrap();
    let four = parse_rational("4").unwrap();
    assert!(same_squarefree_part(&delta3, &four).unwrap());
}

#[test]
fn specialization_patterns_refine_subdegrees() {
    let d = load_builtin("hs-map-1").unwrap();
    let ex = d.map.expand();
    let samples: Vec<_> = ["2", "3", "-1/2"]
        .iter()
        .map(|s| parse_rational(s).unwrap())
        .collect();
    let report = specialization_evidence(&d.map, &ex, &samples, 3, 3);
    assert!(report.passed(), "{:#?}", report.samples);
    for s in &report.samples {
        assert!(s.skipped.is_none(), "{:?}", s.skipped);
        assert_eq!(s.patterns.len(), 3);
        // Every pattern contains a part of size 1: X = w is a rational root.
        for (_, pattern, refines) in &s.patterns {
            assert!(refines);
            assert!(pattern.contains(&1), "{pattern:?}");
        }
    }
}

#[test]
fn emitted_galois_polynomial_leading_terms() {
    let d = load_builtin("hs-map-1").unwrap();
    let ex = d.map.expand();
    let t_family = emit_galois_polynomial(&ex, &Substitution::T);
    // X-leading coefficient is 3^14 - 3^14 t.
    assert!(t_family.starts_with("4782969*X^100*t^0 + -4782969*X^100*t^1"));
    let s_family = emit_galois_polynomial(&ex, &Substitution::TwoTSquaredPlusOne);
    // 3^14 (1 - (2t^2+1)) = -2 * 3^14 t^2: the t^0 term vanishes at X^100.
    assert!(s_family.starts_with("-9565938*X^100*t^2"), "{}", &s_family[..60]);
    let p_only = emit_galois_polynomial(&ex, &Substitution::Constant(0.into()));
    assert!(p_only.starts_with("4782969*X^100*t^0"));
    assert!(!p_only.contains("t^1"));
}
