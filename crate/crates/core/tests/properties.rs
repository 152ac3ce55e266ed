//! Property tests over the crate's algebraic invariants.

use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rmtsense_core::*;

fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lrt_statistic_is_permutation_invariant(
        mut eigs in proptest::collection::vec(0.5f64..50.0, 3..12),
        c in 1.1f64..8.0,
        shift in 0usize..12,
    ) {
        let p = eigs.len();
        let a = lrt_statistic(&eigs, p, c).unwrap();
        eigs.rotate_left(shift % p);
        let b = lrt_statistic(&eigs, p, c).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn ring_cdf_is_monotone_and_bounded(
        c in 0.05f64..=1.0,
        l in 1usize..=30,
        r1 in 0.0f64..1.5,
        r2 in 0.0f64..1.5,
    ) {
        let params = laws::RingLawParams::new(c, l).unwrap();
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let a = ring_radial_cdf(lo, params);
        let b = ring_radial_cdf(hi, params);
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(a <= b);
    }

    #[test]
    fn inner_radius_decreases_in_l(c in 0.05f64..0.95, l in 1usize..20) {
        let a = ring_inner_radius(laws::RingLawParams::new(c, l).unwrap());
        let b = ring_inner_radius(laws::RingLawParams::new(c, l + 1).unwrap());
        prop_assert!(b < a);
    }

    #[test]
    fn binomial_series_matches_closed_form(a in -3.0f64..3.0, x in -0.9f64..0.9) {
        let v = hypergeometric_pfq(&[a], &[], x).unwrap();
        let expect = (1.0 - x).powf(-a);
        prop_assert!((v - expect).abs() <= 1e-9 * expect.abs().max(1.0));
    }

    #[test]
    fn q_round_trip(p in 0.001f64..0.999) {
        let x = q_inverse(p).unwrap();
        prop_assert!((q_function(x) - p).abs() < 1e-9);
    }

    #[test]
    fn scale_equivariant_inner_estimate(
        moduli in proptest::collection::vec(0.01f64..10.0, 2..40),
        q in 0.0f64..0.49,
        s in 0.1f64..10.0,
    ) {
        let values: Vec<C64> = moduli.iter().map(|&m| C64::new(m, 0.0)).collect();
        let spec = rmt::ComplexSpectrum::new(values, moduli.len(), rmt::PipelineTag::Raw).unwrap();
        let base = inner_radius_estimate(&spec, q).unwrap();
        let scaled = spec.scaled(s);
        let v = inner_radius_estimate(&scaled, q).unwrap();
        prop_assert!((v - s * base).abs() <= 1e-9 * (s * base).abs().max(1e-12));
    }
}

proptest! {
    // matrix-sized cases are kept fewer
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sve_preserves_singular_values(n in 2usize..6, extra in 0usize..4, seed in 0u64..1000) {
        let t = n + extra;
        let x = gen_ginibre(n, t, seed).unwrap();
        let mut r = rng(seed ^ 0xabcd);
        let y = sve_transform(&x, &mut r).unwrap();
        let sx = x.mat().svd().unwrap();
        let sy = y.svd().unwrap();
        for i in 0..n {
            let a = sx.S()[i].re;
            let b = sy.S()[i].re;
            prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
        }
    }

    #[test]
    fn general_eig_sum_matches_trace(n in 2usize..8, seed in 0u64..1000) {
        let x = gen_ginibre(n, n, seed).unwrap();
        let spec = eigenvalues_general(x.mat()).unwrap();
        let sum: C64 = spec.values().iter().sum();
        let tr: C64 = (0..n).map(|i| x.entry(i, i)).sum();
        prop_assert!((sum - tr).norm() <= 1e-9 * tr.norm().max(1.0));
    }

    #[test]
    fn capture_round_trips(n in 1usize..5, t in 1usize..7, seed in 0u64..500) {
        let dir = tempfile::tempdir().unwrap();
        let m = gen_ginibre(n, t, seed).unwrap();

        // CSV: doubles survive exactly through the debug formatter
        let pc = dir.path().join("x.csv");
        save_capture(&pc, CaptureFormat::Csv, &m).unwrap();
        let mc = load_capture(&pc, CaptureFormat::Csv, Some((n, t))).unwrap();
        for j in 0..t {
            for i in 0..n {
                prop_assert!((m.entry(i, j) - mc.entry(i, j)).norm() < 1e-12);
            }
        }

        // Iq32: quantizes once, then the file round-trips byte-exactly
        let p1 = dir.path().join("x.iq32");
        let p2 = dir.path().join("y.iq32");
        save_capture(&p1, CaptureFormat::Iq32, &m).unwrap();
        let m1 = load_capture(&p1, CaptureFormat::Iq32, Some((n, t))).unwrap();
        save_capture(&p2, CaptureFormat::Iq32, &m1).unwrap();
        prop_assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }

    #[test]
    fn gmean_is_lth_root_of_product(l in 1usize..5, seed in 0u64..200) {
        let snaps: Vec<_> = (0..l)
            .map(|j| gen_ginibre(4, 8, seed * 31 + j as u64).unwrap())
            .collect();
        let e = rmt::SnapshotEnsemble::new(snaps, AcquisitionMode::TimeEvolving).unwrap();
        let mut r1 = rng(seed);
        let mut r2 = rng(seed);
        let p = product_chain(&e, ChainOptions::default(), &mut r1).unwrap();
        let g = geometric_mean_spectrum(&e, ChainOptions::default(), &mut r2).unwrap();
        for (a, b) in p.values().iter().zip(g.values()) {
            prop_assert!((a.norm().powf(1.0 / l as f64) - b.norm()).abs() < 1e-10);
        }
    }
}
