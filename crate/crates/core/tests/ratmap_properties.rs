mod common;

use newton_atlas::newton::construct;
use newton_atlas::poly::Polynomial;
use newton_atlas::ratmap::{RationalMap, SpherePoint};
use newton_atlas::Complex64;
use proptest::prelude::*;

fn complex_in(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(a, b)| Complex64::new(a, b))
}

/// Newton maps of degree at most 8.
fn small_newton() -> impl Strategy<Value = (Vec<(Complex64, u32)>, Polynomial)> {
    common::newton_data().prop_filter("degree ≤ 8", |(r, q)| r.len() + q.degree_or_zero() <= 8)
}

proptest! {
    #![proptest_config(common::fixed_config(64))]

    #[test]
    fn decomposition_reassembles(data in small_newton(), pts in prop::collection::vec(complex_in(2.0), 100)) {
        let (map, _) = construct(&data.0, &data.1).unwrap();
        let pf = map.partial_fractions_of_displacement().unwrap();
        let poles: Vec<Complex64> = map.poles().unwrap().map(|p| p.locations().collect()).unwrap_or_default();
        let fixed: Vec<Complex64> = pf.poles.iter().map(|p| p.location).collect();
        for z in pts {
            if poles.iter().chain(&fixed).any(|w| (z - w).norm() < 0.1) {
                continue;
            }
            let direct = (z - map.eval(z)).inv();
            prop_assert!((pf.eval(z) - direct).norm() < 1e-8, "at {z}: {} vs {direct}", pf.eval(z));
        }
    }

    #[test]
    fn residue_is_inverse_of_one_minus_multiplier(data in small_newton()) {
        let (map, _) = construct(&data.0, &data.1).unwrap();
        let deriv = map.derivative().unwrap();
        let pf = map.partial_fractions_of_displacement().unwrap();
        for pole in pf.poles.iter().filter(|p| p.order() == 1) {
            let lambda = deriv.eval(pole.location);
            let expected = (Complex64::new(1.0, 0.0) - lambda).inv();
            prop_assert!((pole.residue() - expected).norm() < 1e-8);
        }
    }

    #[test]
    fn fixed_point_count_matches_displacement_degree(data in small_newton()) {
        let (map, _) = construct(&data.0, &data.1).unwrap();
        let finite: usize = map
            .fixed_points()
            .unwrap()
            .iter()
            .filter(|f| matches!(f.location, SpherePoint::Finite(_)))
            .map(|f| f.fixed_multiplicity)
            .sum();
        prop_assert_eq!(finite, map.displacement_numerator().degree_or_zero());
    }

    #[test]
    fn common_factors_cancel(
        a in prop::collection::vec(complex_in(1.0), 2..5),
        b in prop::collection::vec(complex_in(1.0), 1..4),
        g in prop::collection::vec(complex_in(1.0), 1..=3),
    ) {
        // Roots of A, B and g kept apart so that only g is shared.
        let all: Vec<&Complex64> = a.iter().chain(&b).chain(&g).collect();
        let apart = all.iter().enumerate().all(|(i, x)| all[i + 1..].iter().all(|y| (**x - **y).norm() >= 0.2));
        prop_assume!(apart);
        let from = |r: &[Complex64]| Polynomial::from_roots(&r.iter().map(|&z| (z, 1)).collect::<Vec<_>>());
        let (pa, pb, pg) = (from(&a), from(&b), from(&g));
        let plain = RationalMap::normalize(pa.clone(), pb.clone()).unwrap();
        let padded = RationalMap::normalize(&pa * &pg, &pb * &pg).unwrap();
        prop_assert_eq!(padded.cancelled_degree(), g.len());
        prop_assert_eq!(padded.num().degree(), plain.num().degree());
        prop_assert_eq!(padded.den().degree(), plain.den().degree());
        // Same map up to a common scale: A₁B₂ − A₂B₁ = 0.
        let cross = &(plain.num() * padded.den()) - &(padded.num() * plain.den());
        let scale = (plain.num() * padded.den()).norm_inf();
        prop_assert!(cross.norm_inf() < 1e-8 * scale, "cross {}", cross.norm_inf());
    }
}
