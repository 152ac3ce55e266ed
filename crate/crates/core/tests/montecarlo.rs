//! Monte Carlo validation of the statistical claims the library rests on.

use rand_chacha::rand_core::SeedableRng;
use rayon::prelude::*;
use rmtsense_core::*;

fn rng(seed: u64, stream: u64) -> rand_chacha::ChaCha8Rng {
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn ks_vs_cdf(sample: &mut Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sample.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sample.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

fn std_normal_cdf(x: f64) -> f64 {
    1.0 - q_function(x)
}

/// The CLT the distributed algorithm rests on: standardized L_D over 2000
/// trials passes a KS normality check at the 1% level.
#[test]
fn distributed_statistic_is_asymptotically_normal() {
    let servers = 2usize;
    let (p, n) = (64usize, 192usize);
    let c = n as f64 / p as f64;
    let h0 = lrt_clt_closed(c, &SpikeModel::none()).unwrap();
    let mu_d = servers as f64 * p as f64 * h0.mu;
    let sd_d = (servers as f64 * h0.sigma2).sqrt();
    let trials = 2000usize;
    let mut z: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut l_d = 0.0;
            for s in 0..servers {
                let x = gen_spiked_samples(
                    p,
                    n,
                    &SpikeModel::none(),
                    900_000 + (t * servers + s) as u64,
                )
                .unwrap();
                l_d += server_compute(s, &x).unwrap().statistic;
            }
            (l_d - mu_d) / sd_d
        })
        .collect();
    let ks = ks_vs_cdf(&mut z, std_normal_cdf);
    // 1% critical value for n = 2000 is about 1.63 / sqrt(n)
    let crit = 1.63 / (trials as f64).sqrt();
    assert!(ks < crit, "KS {ks:.4} exceeds 1% critical value {crit:.4}");
}

/// Null statistics stay within four standard deviations of the CLT mean in
/// at least 99% of trials (p = 100, n = 300).
#[test]
fn null_statistics_respect_clt_band() {
    let (p, n) = (100usize, 300usize);
    let c = n as f64 / p as f64;
    let h0 = lrt_clt_closed(c, &SpikeModel::none()).unwrap();
    let trials = 200usize;
    let in_band: usize = (0..trials)
        .into_par_iter()
        .map(|t| {
            let x = gen_spiked_samples(p, n, &SpikeModel::none(), 910_000 + t as u64).unwrap();
            let l = server_compute(0, &x).unwrap().statistic;
            let dev = (l - p as f64 * h0.mu).abs();
            usize::from(dev <= 4.0 * h0.sd())
        })
        .sum();
    assert!(
        in_band * 100 >= trials * 99,
        "{in_band}/{trials} inside the 4-sigma band"
    );
}

/// AR(1) lag-k autocorrelation is r^k for the first few lags.
#[test]
fn ar_lag_k_autocorrelation() {
    let r = 0.5;
    let y = gen_ar_signal(r, 100_000, 920).unwrap();
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let var: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
    for k in 1..=3usize {
        let cov: f64 = y[..y.len() - k]
            .iter()
            .zip(y[k..].iter())
            .map(|(a, b)| (a - mean) * (b - mean))
            .sum();
        let rho = cov / var;
        assert!(
            (rho - r.powi(k as i32)).abs() < 0.03,
            "lag-{k} autocorrelation {rho:.4} vs {:.4}",
            r.powi(k as i32)
        );
    }
}

/// An AR source mixed at -inf dB is indistinguishable from white noise: the
/// real-part marginal passes a KS test against N(0, 1/2) at the 1% level.
#[test]
fn minus_infinity_snr_is_white_noise() {
    let e = acquire(
        &SourceSpec::ar(0.9, Some(f64::NEG_INFINITY)),
        AcquisitionMode::TimeEvolving,
        8,
        512,
        1,
        930,
    )
    .unwrap();
    let snap = &e.snapshots()[0];
    let mut re: Vec<f64> = Vec::with_capacity(8 * 512);
    for j in 0..512 {
        for i in 0..8 {
            re.push(snap.entry(i, j).re);
        }
    }
    let sd = std::f64::consts::FRAC_1_SQRT_2;
    let ks = ks_vs_cdf(&mut re, |x| std_normal_cdf(x / sd));
    let crit = 1.63 / (4096f64).sqrt();
    assert!(ks < crit, "KS {ks:.4} exceeds {crit:.4}");
}

/// Correlated (AR 0.9, 0 dB) captures shrink the product-chain inner radius
/// relative to noise in at least 95 of 100 paired trials.
#[test]
fn paired_inner_radius_signal_below_noise() {
    let (n, t, l) = (256usize, 512usize, 10usize);
    let trials = 100usize;
    let wins: usize = (0..trials)
        .into_par_iter()
        .map(|k| {
            let seed = 940_000 + k as u64;
            let noise = acquire(
                &SourceSpec::white_noise(),
                AcquisitionMode::TimeEvolving,
                n,
                t,
                l,
                seed,
            )
            .unwrap();
            let signal = acquire(
                &SourceSpec::ar(0.9, Some(0.0)),
                AcquisitionMode::TimeEvolving,
                n,
                t,
                l,
                seed + 50_000,
            )
            .unwrap();
            let mut r1 = rng(seed, 1);
            let mut r2 = rng(seed, 2);
            let sn = product_chain(&noise, ChainOptions::default(), &mut r1).unwrap();
            let ss = product_chain(&signal, ChainOptions::default(), &mut r2).unwrap();
            let rn = inner_radius_estimate(&sn, 0.02).unwrap();
            let rs = inner_radius_estimate(&ss, 0.02).unwrap();
            usize::from(rs < rn)
        })
        .sum();
    assert!(wins >= 95, "signal inner radius below noise in {wins}/100 trials");
}

/// Mobility tracking separates white-noise segments from correlated ones,
/// and stays stable within a constant-noise stream.
#[test]
fn mobility_track_separates_segments() {
    let (n, t, l) = (64usize, 128usize, 5usize);
    let params = laws::RingLawParams::new(0.5, l).unwrap();
    let mk = |spec: &SourceSpec, base: u64| -> Vec<SnapshotEnsemble> {
        (0..6)
            .map(|k| acquire(spec, AcquisitionMode::TimeEvolving, n, t, l, base + k).unwrap())
            .collect()
    };
    let mut stream = mk(&SourceSpec::white_noise(), 950);
    stream.extend(mk(&SourceSpec::ar(0.9, Some(0.0)), 960));
    let mut r = rng(955, 0);
    let series = mobility_track(stream, params, 0.02, &mut r).unwrap();
    assert_eq!(series.len(), 12);

    let med = |xs: &[f64]| -> f64 {
        let mut v = xs.to_vec();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        0.5 * (v[v.len() / 2] + v[(v.len() - 1) / 2])
    };
    let noise_med = med(&series[..6].iter().map(|s| s.1).collect::<Vec<_>>());
    let signal_med = med(&series[6..].iter().map(|s| s.1).collect::<Vec<_>>());
    assert!(
        signal_med < noise_med,
        "signal median {signal_med:.4} not below noise median {noise_med:.4}"
    );

    // constant-noise stability: coefficient of variation under 0.2
    let noise_vals: Vec<f64> = series[..6].iter().map(|s| s.1).collect();
    let m = noise_vals.iter().sum::<f64>() / 6.0;
    let sd = (noise_vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / 6.0).sqrt();
    assert!(sd / m < 0.2, "noise-series CV {:.3}", sd / m);
}

/// The coordinator's aggregate law matches the empirical mean of L_D.
#[test]
fn coordinator_mean_matches_monte_carlo() {
    let cfg = ScenarioConfig {
        servers: 4,
        p: 64,
        n: 128,
        source: SourceSpec::white_noise(),
        epsilon: 0.05,
        seed: 970,
        trials: 1,
    };
    let trials = 2000usize;
    let sums: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|round| run_distributed(&cfg, round, false).unwrap().0.l_d)
        .collect();
    let mean = sums.iter().sum::<f64>() / trials as f64;
    let (coord, _) = run_distributed(&cfg, 0, false).unwrap();
    let tol = 4.0 * coord.sigma_d / (trials as f64).sqrt() + 0.3;
    assert!(
        (mean - coord.mu_d).abs() < tol,
        "empirical mean {mean:.4} vs mu_D {:.4} (tol {tol:.4})",
        coord.mu_d
    );
}
