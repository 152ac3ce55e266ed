//! The distributed streaming detection round: N servers each compute the
//! linear statistic of their own capture and send that single scalar to a
//! coordinator, which sums, thresholds and decides.

use super::source::gen_spiked_with_streams;
use super::{SourceKind, SourceSpec};
use crate::clt::{clt_quadrature, lrt_clt_closed, q_function, q_inverse, AnalyticFn, CltParams, SpikeModel};
use crate::detect::{decide, DetectionReport};
use crate::error::{Error, Result};
use crate::rmt::rng::{complex_gaussian_mat, rng_for};
use crate::rmt::{eigenvalues_hermitian, sample_covariance, SnapshotMatrix};
use rayon::prelude::*;

/// One server's contribution to a round: its id and scalar statistic. That
/// scalar is the entire communication payload.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ServerResult {
    pub server_id: usize,
    /// The linear statistic L_i.
    pub statistic: f64,
    /// Dimensions (p, n) the server used.
    pub p: usize,
    pub n: usize,
}

/// Coordinator output: the summed statistic, its Gaussian law under the
/// null, and the resulting report.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct CoordinatorResult {
    /// L_D = L_1 + ... + L_N, summed in server-id order.
    pub l_d: f64,
    /// Null mean of L_D.
    pub mu_d: f64,
    /// Null standard deviation of L_D.
    pub sigma_d: f64,
    pub report: DetectionReport,
}

/// A full scenario for [`run_distributed`]: geometry, source, target
/// false-alarm rate, seed, and how many rounds a campaign should run.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ScenarioConfig {
    pub servers: usize,
    pub p: usize,
    pub n: usize,
    pub source: SourceSpec,
    pub epsilon: f64,
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
}

fn default_trials() -> usize {
    1
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.servers == 0 {
            return Err(Error::invalid_argument("need at least one server"));
        }
        if self.p == 0 || self.n <= self.p {
            return Err(Error::invalid_argument(format!(
                "need n > p >= 1 for the LRT (c > 1), got p={}, n={}",
                self.p, self.n
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::invalid_argument(format!(
                "epsilon must be in (0,1), got {}",
                self.epsilon
            )));
        }
        if self.trials == 0 {
            return Err(Error::invalid_argument("trials must be >= 1"));
        }
        self.source.validate()
    }
}

/// Computes one server's statistic: S_i = sample covariance, then
/// L_i = Σ f_L(λ/p) over the eigenvalues of n·S_i, which equals
/// Tr(S_i) − ln det(S_i) − p.
pub fn server_compute(server_id: usize, x: &SnapshotMatrix) -> Result<ServerResult> {
    let p = x.nrows();
    let n = x.ncols();
    if n <= p {
        return Err(Error::domain(format!(
            "server {server_id}: LRT needs n > p (c > 1), got p={p}, n={n}"
        )));
    }
    let s = sample_covariance(x)?;
    let scaled = s.scaled(n as f64);
    let eigs = eigenvalues_hermitian(&scaled)?;
    let statistic = crate::detect::lrt_statistic(&eigs, p, n as f64 / p as f64)?;
    Ok(ServerResult {
        server_id,
        statistic,
        p,
        n,
    })
}

/// CLT parameters for the LRT at ratio c with the given spikes: closed form
/// for at most one spike, bulk closed form plus per-spike quadrature shifts
/// beyond that.
pub fn clt_params_for(c: f64, spikes: &SpikeModel) -> Result<CltParams> {
    if spikes.rank() <= 1 {
        lrt_clt_closed(c, spikes)
    } else {
        let bulk = lrt_clt_closed(c, &SpikeModel::none())?;
        let f = AnalyticFn::lrt(c)?;
        let quad = clt_quadrature(&f, c, spikes)?;
        Ok(CltParams {
            mu_bar: quad.mu_bar,
            ..bulk
        })
    }
}

/// Coordinator: sums the server statistics in id order, aggregates the
/// per-server null laws (means add; variances add under the enforced
/// independent-seed regime), thresholds at the target ε and reports.
///
/// `params_h0` must be spike-free; `params_h1`, when supplied, predicts the
/// detection probability of the same threshold under the alternative.
pub fn coordinate(
    results: &[ServerResult],
    params_h0: &[CltParams],
    params_h1: Option<&[CltParams]>,
    epsilon: f64,
) -> Result<CoordinatorResult> {
    if results.is_empty() {
        return Err(Error::invalid_argument("no server results to aggregate"));
    }
    if params_h0.len() != results.len() {
        return Err(Error::invalid_argument(format!(
            "{} results but {} null parameter sets",
            results.len(),
            params_h0.len()
        )));
    }
    if let Some(h1) = params_h1 {
        if h1.len() != results.len() {
            return Err(Error::invalid_argument(format!(
                "{} results but {} alternative parameter sets",
                results.len(),
                h1.len()
            )));
        }
    }
    if params_h0.iter().any(|p| !p.mu_bar.is_empty()) {
        return Err(Error::invalid_argument(
            "null parameters must be spike-free; pass spikes through params_h1",
        ));
    }
    let (p0, n0) = (results[0].p, results[0].n);
    if results.iter().any(|r| r.p != p0 || r.n != n0) {
        return Err(Error::invalid_argument(
            "servers disagree on (p, n) within one round",
        ));
    }

    let mut ordered: Vec<&ServerResult> = results.iter().collect();
    ordered.sort_by_key(|r| r.server_id);
    // fixed summation order keeps reruns bit-identical
    let l_d: f64 = ordered.iter().map(|r| r.statistic).sum();

    let mu_d: f64 = ordered
        .iter()
        .zip(params_h0.iter())
        .map(|(r, prm)| prm.mean(r.p))
        .sum();
    let var_d: f64 = params_h0.iter().map(|prm| prm.sigma2).sum();
    if var_d <= 0.0 {
        return Err(Error::domain("aggregate variance must be positive"));
    }
    let sigma_d = var_d.sqrt();

    let gamma = mu_d + sigma_d * q_inverse(epsilon)?;
    let predicted_pd = match params_h1 {
        Some(h1) => {
            let m1: f64 = ordered
                .iter()
                .zip(h1.iter())
                .map(|(r, prm)| prm.mean(r.p))
                .sum();
            let v1: f64 = h1.iter().map(|prm| prm.sigma2).sum();
            Some(q_function((gamma - m1) / v1.sqrt()))
        }
        None => None,
    };

    Ok(CoordinatorResult {
        l_d,
        mu_d,
        sigma_d,
        report: DetectionReport {
            statistic: l_d,
            threshold: gamma,
            decision: decide(l_d, gamma),
            epsilon,
            predicted_pfa: q_function((gamma - mu_d) / sigma_d),
            predicted_pd,
            threshold_rule: crate::detect::THRESHOLD_RULE.to_string(),
        },
    })
}

/// Draws the capture server `i` sees in `round` of a scenario. Streams are
/// keyed by (round, server) so every server works on independent data and
/// any execution order reproduces the same bits.
fn server_snapshot(cfg: &ScenarioConfig, round: usize, server: usize) -> Result<SnapshotMatrix> {
    let base = (round as u64)
        .wrapping_mul(cfg.servers as u64)
        .wrapping_add(server as u64)
        .wrapping_mul(4);
    match &cfg.source.kind {
        SourceKind::WhiteNoise => {
            let mut rng = rng_for(cfg.seed, base);
            Ok(SnapshotMatrix::from_mat_unchecked(complex_gaussian_mat(
                cfg.p, cfg.n, &mut rng,
            )))
        }
        SourceKind::Spiked { deltas } => {
            let spikes = SpikeModel::new(deltas.clone())?;
            gen_spiked_with_streams(cfg.p, cfg.n, &spikes, cfg.seed, base, base + 1)
        }
        SourceKind::Ar { .. } => {
            // AR rows with per-(round, server) streams through acquire's model
            let e = super::acquire(
                &cfg.source,
                crate::rmt::AcquisitionMode::SpaceDistributed,
                cfg.p,
                cfg.n,
                1,
                cfg.seed ^ base.wrapping_mul(0x9e37_79b9_7f4a_7c15),
            )?;
            Ok(e.snapshots()[0].clone())
        }
    }
}

/// Runs one scenario round: all servers compute their statistic (in parallel
/// when asked — the output is bit-identical either way), then the coordinator
/// aggregates. Any server failure aborts the round with its id attached;
/// partial aggregation is not a thing.
pub fn run_distributed(
    cfg: &ScenarioConfig,
    round: usize,
    parallel: bool,
) -> Result<(CoordinatorResult, Vec<ServerResult>)> {
    cfg.validate()?;
    let c = cfg.n as f64 / cfg.p as f64;
    let h0 = lrt_clt_closed(c, &SpikeModel::none())?;
    let h1 = match cfg.source.spike_model()? {
        Some(spikes) => Some(clt_params_for(c, &spikes)?),
        None => None,
    };

    let compute = |i: usize| -> Result<ServerResult> {
        let x = server_snapshot(cfg, round, i).map_err(|e| Error::Server {
            server_id: i,
            source: Box::new(e),
        })?;
        server_compute(i, &x).map_err(|e| Error::Server {
            server_id: i,
            source: Box::new(e),
        })
    };

    let results: Vec<ServerResult> = if parallel {
        (0..cfg.servers)
            .into_par_iter()
            .map(compute)
            .collect::<Result<Vec<_>>>()?
    } else {
        (0..cfg.servers)
            .map(compute)
            .collect::<Result<Vec<_>>>()?
    };

    let params_h0 = vec![h0; cfg.servers];
    let params_h1 = h1.map(|p| vec![p; cfg.servers]);
    let coord = coordinate(
        &results,
        &params_h0,
        params_h1.as_deref(),
        cfg.epsilon,
    )?;
    Ok((coord, results))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmt::gen_ginibre;

    fn h0_params(c: f64) -> CltParams {
        lrt_clt_closed(c, &SpikeModel::none()).unwrap()
    }

    #[test]
    fn single_server_reduces_to_plain_detection() {
        let x = gen_ginibre(20, 60, 5).unwrap();
        let r = server_compute(0, &x).unwrap();
        let h0 = h0_params(3.0);
        let coord = coordinate(&[r], &[h0.clone()], None, 0.05).unwrap();
        assert_eq!(coord.l_d, r.statistic);
        assert!((coord.mu_d - h0.mean(20)).abs() < 1e-12);
        assert!((coord.sigma_d - h0.sd()).abs() < 1e-12);
        // threshold round trip
        assert!((coord.report.predicted_pfa - 0.05).abs() < 1e-9);
    }

    #[test]
    fn aggregate_mean_and_variance_add() {
        // 8 identical-spec servers, c=2, p=200
        let h0 = h0_params(2.0);
        let results: Vec<ServerResult> = (0..8)
            .map(|i| ServerResult {
                server_id: i,
                statistic: 1.0,
                p: 200,
                n: 400,
            })
            .collect();
        let coord = coordinate(&results, &vec![h0.clone(); 8], None, 0.05).unwrap();
        assert!((coord.l_d - 8.0).abs() < 1e-15);
        assert!((coord.mu_d - 8.0 * 200.0 * h0.mu).abs() < 1e-9);
        assert!((coord.sigma_d * coord.sigma_d - 8.0 * h0.sigma2).abs() < 1e-12);
    }

    #[test]
    fn identity_covariance_gives_zero_statistic() {
        // orthogonal rows with squared norm n make S_i exactly I, so
        // L_i = Tr(I) - ln det(I) - p = 0
        let p = 2;
        let n = 4;
        let scale = (n as f64 / (n / p) as f64).sqrt();
        let x = SnapshotMatrix::from_fn(p, n, |i, j| {
            if j % p == i {
                crate::C64::new(scale, 0.0)
            } else {
                crate::C64::new(0.0, 0.0)
            }
        })
        .unwrap();
        let r = server_compute(0, &x).unwrap();
        assert!(r.statistic.abs() < 1e-12, "L = {}", r.statistic);
    }

    #[test]
    fn server_compute_matches_trace_logdet() {
        let x = gen_ginibre(30, 90, 8).unwrap();
        let r = server_compute(2, &x).unwrap();
        let s = sample_covariance(&x).unwrap();
        let eigs = eigenvalues_hermitian(&s).unwrap();
        let oracle: f64 = eigs.iter().map(|&e| e - e.ln() - 1.0).sum();
        assert!((r.statistic - oracle).abs() <= 1e-8 * oracle.abs());
        assert_eq!(r.server_id, 2);
    }

    #[test]
    fn server_compute_rejects_fat_matrix() {
        let x = gen_ginibre(10, 10, 0).unwrap();
        assert!(server_compute(0, &x).is_err());
    }

    #[test]
    fn coordinate_rejects_mismatches() {
        let r = ServerResult {
            server_id: 0,
            statistic: 0.0,
            p: 10,
            n: 30,
        };
        assert!(coordinate(&[], &[], None, 0.05).is_err());
        assert!(coordinate(&[r], &[], None, 0.05).is_err());
        let spiked = lrt_clt_closed(3.0, &SpikeModel::single(1.0).unwrap()).unwrap();
        assert!(coordinate(&[r], &[spiked], None, 0.05).is_err());
    }

    #[test]
    fn parallel_matches_sequential_bit_for_bit() {
        let cfg = ScenarioConfig {
            servers: 4,
            p: 16,
            n: 48,
            source: SourceSpec::white_noise(),
            epsilon: 0.05,
            seed: 314,
            trials: 1,
        };
        let (ca, ra) = run_distributed(&cfg, 0, true).unwrap();
        let (cb, rb) = run_distributed(&cfg, 0, false).unwrap();
        assert_eq!(ca.l_d.to_bits(), cb.l_d.to_bits());
        assert_eq!(ca.report.threshold.to_bits(), cb.report.threshold.to_bits());
        for (x, y) in ra.iter().zip(rb.iter()) {
            assert_eq!(x.statistic.to_bits(), y.statistic.to_bits());
        }
    }

    #[test]
    fn spiked_scenario_reports_pd() {
        let cfg = ScenarioConfig {
            servers: 2,
            p: 16,
            n: 48,
            source: SourceSpec::spiked(vec![1.5]),
            epsilon: 0.05,
            seed: 9,
            trials: 1,
        };
        let (coord, _) = run_distributed(&cfg, 0, false).unwrap();
        let pd = coord.report.predicted_pd.expect("alternative supplied");
        assert!(pd > 0.05 && pd <= 1.0);
    }

    #[test]
    fn multi_spike_params_sum_quadrature_shifts() {
        let spikes = SpikeModel::new(vec![2.0, 1.0]).unwrap();
        let prm = clt_params_for(2.0, &spikes).unwrap();
        assert_eq!(prm.mu_bar.len(), 2);
        let closed: f64 = spikes.deltas().iter().map(|&d| d - (1.0 + d).ln()).sum();
        let total: f64 = prm.mu_bar.iter().sum();
        assert!((total - closed).abs() < 1e-6, "{total} vs {closed}");
    }
}
