mod common;

use newton_atlas::newton::{construct, detect, validate_multipliers, NotNewtonReason, DEFAULT_TOL};
use newton_atlas::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::fixed_config(200))]

    #[test]
    fn detect_inverts_construct(data in common::newton_data()) {
        let (roots, q) = data;
        let (map, _) = construct(&roots, &q).unwrap();
        let det = detect(&map, DEFAULT_TOL).unwrap();
        let cert = det.certificate().expect("Newton map rejected");
        let worst = common::match_roots(&roots, cert).expect("roots or multiplicities differ");
        prop_assert!(worst < 1e-7, "root error {worst:e}");
        for i in 1..=q.degree_or_zero().max(cert.q.degree_or_zero()) {
            prop_assert!((cert.q.coeff(i) - q.coeff(i)).norm() < 1e-7);
        }
    }

    #[test]
    fn degree_law(data in common::newton_data()) {
        let (roots, q) = data;
        let (map, cert) = construct(&roots, &q).unwrap();
        prop_assert_eq!(map.degree(), roots.len() + q.degree_or_zero());
        prop_assert_eq!(cert.degree, map.degree());
        let excess: u32 = roots.iter().map(|r| r.1 - 1).sum();
        prop_assert_eq!(map.cancelled_degree(), excess as usize);
        prop_assert_eq!(map.cancelled_degree() > 0, roots.iter().any(|r| r.1 >= 2));
    }

    #[test]
    fn multipliers_and_residues_agree(data in common::newton_data()) {
        let (roots, q) = data;
        let (map, _) = construct(&roots, &q).unwrap();
        let det = detect(&map, DEFAULT_TOL).unwrap();
        let cert = det.certificate().unwrap();
        let report = validate_multipliers(&map, cert, 1e-6).unwrap();
        prop_assert!(report.worst_deviation < 1e-6);
        let deriv = map.derivative().unwrap();
        for r in det.residues.iter().filter(|r| r.order == 1) {
            let from_multiplier = (Complex64::new(1.0, 0.0) - deriv.eval(r.z)).inv();
            prop_assert!((r.residue - from_multiplier).norm() < 1e-8);
        }
    }

    #[test]
    fn perturbed_residue_is_rejected(data in common::newton_data(), pick in any::<prop::sample::Index>(), sign in any::<bool>()) {
        let (roots, q) = data;
        prop_assume!(!roots.is_empty());
        // 1/(z − N) = Σ r_i/(z − z_i) + q' with one r_i moved 0.3 off its integer.
        let i = pick.index(roots.len());
        let offset = if sign { 0.3 } else { -0.3 };
        let weights: Vec<f64> = roots.iter().enumerate().map(|(j, r)| r.1 as f64 + if j == i { offset } else { 0.0 }).collect();
        let map = common::map_from_residues(&roots.iter().map(|r| r.0).collect::<Vec<_>>(), &weights, &q);
        prop_assume!(map.degree() >= 2);
        let det = detect(&map, DEFAULT_TOL).unwrap();
        match det.reason() {
            Some(NotNewtonReason::NonIntegerResidue { z, value }) => {
                prop_assert!((z - roots[i].0).norm() < 1e-6);
                prop_assert!((value.re - weights[i]).abs() < 1e-6);
            }
            other => prop_assert!(false, "unexpected verdict {other:?}"),
        }
    }
}
