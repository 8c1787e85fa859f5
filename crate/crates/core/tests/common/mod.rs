#![allow(dead_code)]

use newton_atlas::newton::NewtonCertificate;
use newton_atlas::poly::Polynomial;
use newton_atlas::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn in_unit_disk(rng: &mut impl Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm() < 1.0 {
            return z;
        }
    }
}

/// Random Newton data: up to 5 roots in the unit disk at mutual distance
/// ≥ 0.1, multiplicities up to 3, q of degree up to 4 with unit-disk
/// coefficients, and k + deg q ≥ 2.
pub fn random_newton_data(rng: &mut impl Rng) -> (Vec<(Complex64, u32)>, Polynomial) {
    loop {
        let k = rng.gen_range(0..=5usize);
        let n = rng.gen_range(0..=4usize);
        if k + n < 2 {
            continue;
        }
        let mut roots: Vec<(Complex64, u32)> = Vec::new();
        while roots.len() < k {
            let z = in_unit_disk(rng);
            if roots.iter().all(|(w, _)| (z - w).norm() >= 0.1) {
                roots.push((z, rng.gen_range(1..=3)));
            }
        }
        let mut q: Vec<Complex64> = vec![Complex64::new(0.0, 0.0)];
        for _ in 0..n {
            q.push(in_unit_disk(rng));
        }
        // Keep the leading coefficient away from 0 so deg q is what we asked for.
        if n > 0 && q[n].norm() < 0.05 {
            continue;
        }
        return (roots, Polynomial::new(q));
    }
}

/// Pairs up recovered roots with the originals; returns the worst distance,
/// or `None` if the multisets do not match.
pub fn match_roots(want: &[(Complex64, u32)], got: &NewtonCertificate) -> Option<f64> {
    if want.len() != got.roots.len() {
        return None;
    }
    let mut worst: f64 = 0.0;
    for &(z, m) in want {
        let best = got
            .roots
            .iter()
            .min_by(|a, b| (a.z - z).norm().partial_cmp(&(b.z - z).norm()).unwrap())?;
        if best.m != m {
            return None;
        }
        worst = worst.max((best.z - z).norm());
    }
    Some(worst)
}

/// Property-test settings with a fixed seed so runs are reproducible.
pub fn fixed_config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x6e65_7774_6f6e),
        failure_persistence: None,
        ..Default::default()
    }
}

/// Strategy over the same family as [`random_newton_data`].
pub fn newton_data() -> impl proptest::strategy::Strategy<Value = (Vec<(Complex64, u32)>, Polynomial)> {
    use proptest::prelude::*;
    any::<u64>().prop_map(|seed| random_newton_data(&mut rng(seed)))
}

/// The map with `1/(z − N) = Σ w_i/(z − z_i) + q'`, i.e.
/// `N = z − P/(Σ w_i P_i + P q')` where `P = ∏(z − z_i)` and `P_i = P/(z − z_i)`.
pub fn map_from_residues(zs: &[Complex64], weights: &[f64], q: &Polynomial) -> newton_atlas::ratmap::RationalMap {
    let p = Polynomial::from_roots(&zs.iter().map(|&z| (z, 1)).collect::<Vec<_>>());
    let mut den = &p * &q.derivative();
    for (i, &w) in weights.iter().enumerate() {
        let others: Vec<_> = zs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &z)| (z, 1)).collect();
        den = &den + &Polynomial::from_roots(&others).scale(Complex64::new(w, 0.0));
    }
    let num = &den.shift_up(1) - &p;
    newton_atlas::ratmap::RationalMap::normalize(num, den).unwrap()
}
