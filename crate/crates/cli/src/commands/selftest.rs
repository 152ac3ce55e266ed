//! `rmtsense selftest` — the oracle identities, as a machine-readable report.

use anyhow::Result;
use rmtsense_core::laws::{ginibre_product_mass, RingLawParams};
use rmtsense_core::*;
use std::process::ExitCode;

#[derive(clap::Args)]
pub struct SelftestArgs {
    /// Also run the slower identities (multi-spike quadrature, k up to 6).
    #[arg(long)]
    thorough: bool,
}

#[derive(serde::Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

#[derive(serde::Serialize)]
struct Report {
    checks: Vec<Check>,
    all_pass: bool,
}

fn check(
    checks: &mut Vec<Check>,
    name: &'static str,
    run: impl FnOnce() -> std::result::Result<String, String>,
) {
    let (pass, detail) = match run() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    checks.push(Check { name, pass, detail });
}

pub fn run(args: &SelftestArgs) -> Result<ExitCode> {
    let mut checks = Vec::new();

    check(&mut checks, "clt_quadrature_vs_closed_forms", || {
        let mut worst = 0.0f64;
        for &c in &[1.5f64, 2.0, 4.0] {
            let spikes = SpikeModel::single(1.0).map_err(|e| e.to_string())?;
            let f = AnalyticFn::lrt(c).map_err(|e| e.to_string())?;
            let q = clt_quadrature(&f, c, &spikes).map_err(|e| e.to_string())?;
            let closed = lrt_clt_closed(c, &spikes).map_err(|e| e.to_string())?;
            worst = worst
                .max((q.mu - closed.mu).abs())
                .max((q.sigma2 - closed.sigma2).abs())
                .max((q.mu_bar[0] - closed.mu_bar[0]).abs());
        }
        if worst < 1e-6 {
            Ok(format!("worst deviation {worst:.2e}"))
        } else {
            Err(format!("worst deviation {worst:.2e} >= 1e-6"))
        }
    });

    check(&mut checks, "ginibre_k1_matches_marchenko_pastur", || {
        let mut worst = 0.0f64;
        for t in 1..=20 {
            let x = 4.0 * t as f64 / 21.0;
            let a = ginibre_product_pdf(x, 1).map_err(|e| e.to_string())?;
            let b = mp_pdf(x, 1.0).map_err(|e| e.to_string())?;
            worst = worst.max((a - b).abs() / b);
        }
        if worst < 1e-6 {
            Ok(format!("worst rel deviation {worst:.2e}"))
        } else {
            Err(format!("worst rel deviation {worst:.2e} >= 1e-6"))
        }
    });

    check(&mut checks, "ginibre_k2_matches_closed_form", || {
        let mut worst = 0.0f64;
        for t in 1..=50 {
            let x = 6.75 * t as f64 / 51.0;
            let a = ginibre_product_pdf(x, 2).map_err(|e| e.to_string())?;
            let b = ginibre_product_pdf_k2(x);
            worst = worst.max((a - b).abs() / b.abs().max(1e-12));
        }
        if worst < 1e-6 {
            Ok(format!("worst rel deviation {worst:.2e}"))
        } else {
            Err(format!("worst rel deviation {worst:.2e} >= 1e-6"))
        }
    });

    check(&mut checks, "ring_radial_pdf_mass", || {
        let p = RingLawParams::new(0.5, 5).map_err(|e| e.to_string())?;
        let inner = ring_inner_radius(p);
        let m = 200_000;
        let h = (1.0 - inner) / m as f64;
        let mut acc = 0.0;
        for k in 0..m {
            acc += ring_radial_pdf(inner + (k as f64 + 0.5) * h, p);
        }
        acc *= h;
        if (acc - 1.0).abs() < 1e-8 {
            Ok(format!("mass {acc:.12}"))
        } else {
            Err(format!("mass {acc:.12} not within 1e-8 of 1"))
        }
    });

    check(&mut checks, "q_function_round_trip", || {
        let mut worst = 0.0f64;
        for k in 1..20 {
            let p = k as f64 / 20.0;
            let x = q_inverse(p).map_err(|e| e.to_string())?;
            worst = worst.max((q_function(x) - p).abs());
        }
        if worst < 1e-9 {
            Ok(format!("worst |Q(Qinv(p)) - p| = {worst:.2e}"))
        } else {
            Err(format!("worst deviation {worst:.2e} >= 1e-9"))
        }
    });

    check(&mut checks, "parallel_sequential_bit_identity", || {
        let cfg = ScenarioConfig {
            servers: 3,
            p: 24,
            n: 72,
            source: SourceSpec::white_noise(),
            epsilon: 0.05,
            seed: 7,
            trials: 1,
        };
        let (a, _) = run_distributed(&cfg, 0, true).map_err(|e| e.to_string())?;
        let (b, _) = run_distributed(&cfg, 0, false).map_err(|e| e.to_string())?;
        if a.l_d.to_bits() == b.l_d.to_bits() {
            Ok(format!("L_D = {}", a.l_d))
        } else {
            Err(format!("parallel {} != sequential {}", a.l_d, b.l_d))
        }
    });

    if args.thorough {
        check(&mut checks, "multi_spike_quadrature", || {
            let spikes = SpikeModel::new(vec![2.0, 1.0]).map_err(|e| e.to_string())?;
            let prm = sensing::clt_params_for(2.0, &spikes).map_err(|e| e.to_string())?;
            let closed: f64 = spikes.deltas().iter().map(|&d| d - (1.0 + d).ln()).sum();
            let total: f64 = prm.mu_bar.iter().sum();
            if (total - closed).abs() < 1e-6 {
                Ok(format!("sum of shifts {total:.9}"))
            } else {
                Err(format!("sum {total:.9} vs closed {closed:.9}"))
            }
        });

        check(&mut checks, "ginibre_masses_to_k6", || {
            for k in 1..=6 {
                let m = ginibre_product_mass(k).map_err(|e| e.to_string())?;
                if (m - 1.0).abs() >= 1e-5 {
                    return Err(format!("k={k}: mass {m}"));
                }
            }
            Ok("masses within 1e-5 of 1".into())
        });
    }

    let all_pass = checks.iter().all(|c| c.pass);
    let report = Report { checks, all_pass };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
