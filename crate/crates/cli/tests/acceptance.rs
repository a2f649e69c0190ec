//! Acceptance suite: runs every criterion, prints one `PASS` or `FAIL` line
//! for each, and exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use quantrate::experiments::report::{from_json, rate_to_csv};
use quantrate::experiments::{
    run_coverage, run_rate_monte_carlo, CoverageConfig, RateExperimentConfig, RateMode, RateReport,
};
use quantrate::numeric::{
    binomial_upper_tail, bivariate_normal_cdf, quantile_rank, sample_quantile, std_normal_cdf, std_normal_quantile, Edf,
};
use quantrate::oracles::{c5_probability, markov_cf, markov_count_distribution, markov_cumulants, standardization};
use quantrate::presets::{markov_presets, preset};
use quantrate::processes::{simulate_stream, FiniteMarkov, ProcessModel};
use quantrate::theory::lemma33_check;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);

const CRITERIA: &[(u32, fn() -> Outcome)] = &[
    (1, criterion_1_exact_iid_rate),
    (2, criterion_2_exact_markov_rate),
    (3, criterion_3_lemma33_margins),
    (4, criterion_4_c5_exactness),
    (5, criterion_5_oracle_equivalence),
    (6, criterion_6_monte_carlo_rate),
    (7, criterion_7_coverage),
    (8, criterion_8_numeric_primitives),
    (9, criterion_9_determinism),
];

fn main() -> ExitCode {
    let mut failed = 0;
    for &(id, check) in CRITERIA {
        let (pass, detail) = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        println!("{} criterion {id}: {detail}", if pass { "PASS" } else { "FAIL" });
        failed += usize::from(!pass);
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_quantrate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn cli_rate(args: &[&str]) -> RateReport {
    let out = cli(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    from_json(&String::from_utf8(out.stdout).unwrap()).unwrap()
}

fn ratio(r: &RateReport) -> f64 {
    let v: Vec<f64> = r.points.iter().map(|p| p.sqrt_n_delta).collect();
    v.iter().copied().fold(f64::MIN, f64::max) / v.iter().copied().fold(f64::MAX, f64::min)
}

fn criterion_1_exact_iid_rate() -> Outcome {
    let start = Instant::now();
    let r = cli_rate(&[
        "rate",
        "--model",
        "iid_uniform",
        "--p",
        "0.5",
        "--mode",
        "exact-iid",
        "--n-grid",
        "101,201,401,801,1601,3201",
        "--format",
        "json",
    ]);
    let elapsed = start.elapsed();
    let slope = r.fit.slope;
    let pass = (-0.60..=-0.40).contains(&slope) && ratio(&r) <= 3.0 && elapsed < Duration::from_secs(10);
    (
        pass,
        format!(
            "exact-iid uniform p=0.5 slope {slope:.4} (band [-0.60,-0.40]), √nΔ ratio {:.3} (≤ 3), {elapsed:.2?}",
            ratio(&r)
        ),
    )
}

fn criterion_2_exact_markov_rate() -> Outcome {
    let start = Instant::now();
    let r = cli_rate(&[
        "rate",
        "--model",
        "markov_lazy3",
        "--p",
        "0.5",
        "--mode",
        "exact-markov",
        "--n-grid",
        "64,128,256,512,1024",
        "--format",
        "json",
    ]);
    let elapsed = start.elapsed();
    let slope = r.fit.slope;
    let pass = (-0.65..=-0.35).contains(&slope) && elapsed < Duration::from_secs(30);
    (
        pass,
        format!("exact-markov lazy3 slope {slope:.4} (band [-0.65,-0.35]), {elapsed:.2?}"),
    )
}

fn criterion_3_lemma33_margins() -> Outcome {
    let start = Instant::now();
    let t: Vec<f64> = (0..64).map(|i| -PI + 2.0 * PI * i as f64 / 63.0).collect();
    let p = 0.5;
    let mut checked = Vec::new();
    let mut worst = f64::INFINITY;
    for (name, model) in markov_presets() {
        let chain = model.as_chain().unwrap();
        let xi = chain.quantile(p).unwrap();
        if c5_probability(chain, xi).g >= p {
            continue;
        }
        let v = chain.values();
        let r = lemma33_check(chain, p, 0.05, v[v.len() - 1] - v[0], &t).unwrap();
        worst = worst.min(r.min_margin());
        checked.push(name);
    }
    let elapsed = start.elapsed();
    let pass = worst >= -1e-12 && !checked.is_empty() && elapsed < Duration::from_secs(1);
    (pass, format!("min margin {worst:.3e} over {checked:?}, {elapsed:.2?}"))
}

/// `P(G₀(ξ) = 1)` by summing over neighbour pairs whose every reachable
/// middle state lies at or below `ξ`.
fn forced_by_hand(chain: &FiniteMarkov, xi: f64) -> f64 {
    let p = chain.transition();
    let s = chain.states();
    let mut g = 0.0;
    for a in 0..s {
        for c in 0..s {
            let mids: Vec<usize> = (0..s).filter(|&b| p[a][b] * p[b][c] > 0.0).collect();
            if !mids.is_empty() && mids.iter().all(|&b| chain.values()[b] <= xi) {
                g += chain.stationary()[a] * mids.iter().map(|&b| p[a][b] * p[b][c]).sum::<f64>();
            }
        }
    }
    g
}

fn criterion_4_c5_exactness() -> Outcome {
    let mut worst_identity: f64 = 0.0;
    let mut full_support_g: f64 = 0.0;
    let mut forcing = None;
    for (name, model) in markov_presets() {
        let chain = model.as_chain().unwrap();
        for &xi in chain.values() {
            let r = c5_probability(chain, xi);
            worst_identity = worst_identity.max(r.identity_error());
            if chain.has_full_support() && chain.cdf(xi) < 1.0 {
                full_support_g = full_support_g.max(r.g);
            }
        }
        if name == "markov_forcing3" {
            let xi = chain.quantile(0.5).unwrap();
            forcing = Some((c5_probability(chain, xi).g, forced_by_hand(chain, xi)));
        }
    }
    let (g, hand) = forcing.expect("forcing preset ships");
    let pass = full_support_g == 0.0 && hand > 0.0 && (g - hand).abs() <= 1e-12 && worst_identity <= 1e-12;
    (
        pass,
        format!(
            "full-support g max {full_support_g}, forcing g {g} vs hand {hand}, identity error {worst_identity:.1e}"
        ),
    )
}

fn enumerate_paths(chain: &FiniteMarkov, n: usize) -> Vec<(Vec<usize>, f64)> {
    let s = chain.states();
    let mut out: Vec<(Vec<usize>, f64)> = (0..s).map(|a| (vec![a], chain.stationary()[a])).collect();
    for _ in 1..n {
        out = out
            .into_iter()
            .flat_map(|(path, w)| {
                let last = *path.last().unwrap();
                (0..s).map(move |b| {
                    let mut q = path.clone();
                    q.push(b);
                    (q, w * chain.transition()[last][b])
                })
            })
            .collect();
    }
    out
}

fn random_chain(rng: &mut ChaCha8Rng, s: usize) -> FiniteMarkov {
    let rows = (0..s)
        .map(|_| {
            let w: Vec<f64> = (0..s).map(|_| rng.random_range(0.05..1.0)).collect();
            let t: f64 = w.iter().sum();
            w.iter().map(|x| x / t).collect()
        })
        .collect();
    FiniteMarkov::new(rows, (0..s).map(|v| v as f64).collect()).unwrap()
}

fn criterion_5_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut chains: Vec<FiniteMarkov> = markov_presets()
        .iter()
        .map(|(_, m)| m.as_chain().unwrap().clone())
        .collect();
    chains.push(random_chain(&mut rng, 2));
    chains.push(random_chain(&mut rng, 3));

    // (a) duality: ξ̂ ≤ y exactly when the count reaches ⌈np⌉, path by path
    let mut duality_ok = true;
    let mut paths_seen = 0usize;
    for chain in &chains {
        for n in 1..=6 {
            for (path, _) in enumerate_paths(chain, n) {
                paths_seen += 1;
                let x: Vec<f64> = path.iter().map(|&s| chain.values()[s]).collect();
                let edf = Edf::new(&x).unwrap();
                for &p in &[0.1, 0.3, 0.5, 2.0 / 3.0, 0.9] {
                    let q = sample_quantile(&edf, p).unwrap();
                    for &y in chain.values().iter().chain(&[-0.5, 0.5, 1.5, 9.0]) {
                        let count = x.iter().filter(|&&v| v <= y).count();
                        duality_ok &= (q <= y) == (count >= quantile_rank(n, p));
                    }
                }
            }
        }
    }

    // (b) transfer-product CF against the Fourier transform of the DP pmf
    let mut cf_err: f64 = 0.0;
    for _ in 0..100 {
        let s = rng.random_range(2..=4);
        let chain = random_chain(&mut rng, s);
        let y = rng.random_range(0..s - 1) as f64 + 0.5;
        let n = rng.random_range(1..=64);
        let t = rng.random_range(-6.0..6.0);
        let st = standardization(&chain, y, n).unwrap();
        let pmf = markov_count_distribution(&chain, y, n).unwrap();
        let scale = t / (st.sigma_n * (n as f64).sqrt());
        let fourier: Complex64 = pmf
            .pmf()
            .iter()
            .enumerate()
            .map(|(k, &m)| m * Complex64::from_polar(1.0, scale * (k as f64 - n as f64 * st.f)))
            .sum();
        cf_err = cf_err.max((markov_cf(&chain, y, n, t).unwrap().value - fourier).norm());
    }

    // (c) DP pmf against simulated count frequencies, 4σ bands
    let model = preset("markov_lazy3").unwrap();
    let chain = model.as_chain().unwrap();
    let (n, y, reps) = (20usize, 1.5, 100_000u64);
    let mut hist = vec![0u64; n + 1];
    for i in 0..reps {
        let ts = simulate_stream(&model, n, 55, i).unwrap();
        hist[ts.values.iter().filter(|&&v| v <= y).count()] += 1;
    }
    let pmf = markov_count_distribution(chain, y, n).unwrap();
    let mut worst_z: f64 = 0.0;
    let mut band_ok = true;
    for (k, &m) in pmf.pmf().iter().enumerate() {
        let freq = hist[k] as f64 / reps as f64;
        let sd = (m * (1.0 - m) / reps as f64).sqrt();
        let dev = (freq - m).abs();
        band_ok &= dev <= 4.0 * sd.max(1.0 / reps as f64);
        if sd > 0.0 {
            worst_z = worst_z.max(dev / sd);
        }
    }

    // (d) binomial tails against bit-pattern enumeration
    let mut tail_err: f64 = 0.0;
    for n in 1..=12u64 {
        for &q in &[0.0f64, 0.03, 0.25, 0.5, 0.7, 0.99, 1.0] {
            // patterns counted exactly by popcount, then weighted
            let mut patterns = vec![0u64; n as usize + 1];
            for mask in 0u32..(1 << n) {
                patterns[mask.count_ones() as usize] += 1;
            }
            for k0 in 0..=n + 1 {
                let want: f64 = (k0..=n)
                    .map(|k| patterns[k as usize] as f64 * q.powi(k as i32) * (1.0 - q).powi((n - k) as i32))
                    .sum();
                tail_err = tail_err.max((binomial_upper_tail(n, q, k0).unwrap() - want).abs());
            }
        }
    }

    let pass = duality_ok && cf_err <= 1e-10 && band_ok && tail_err <= 1e-14;
    (
        pass,
        format!(
            "(a) duality exact on {paths_seen} paths: {duality_ok}; (b) CF error {cf_err:.1e}; \
             (c) max |z| {worst_z:.2} at R=1e5: {band_ok}; (d) tail error {tail_err:.1e}"
        ),
    )
}

fn criterion_6_monte_carlo_rate() -> Outcome {
    let model = ProcessModel::doeblin_copula(quantrate::processes::MarginalLaw::StdNormal, 0.6, 0.7).unwrap();
    let mut cfg = RateExperimentConfig::new(model, 0.9, RateMode::MonteCarlo, vec![200, 400, 800, 1600, 3200]);
    cfg.replicates = 5000;
    cfg.threads = 8;
    let start = Instant::now();
    let r = run_rate_monte_carlo(&cfg).unwrap();
    let elapsed = start.elapsed();
    let slope = r.fit.slope;
    let last = r.points.last().unwrap().delta;
    let pass = (-0.8..=-0.2).contains(&slope) && last < 0.05 && elapsed < Duration::from_secs(300);
    (
        pass,
        format!("Monte Carlo slope {slope:.4} (band [-0.8,-0.2]), KS at n=3200 {last:.4} (< 0.05), {elapsed:.2?}"),
    )
}

fn criterion_7_coverage() -> Outcome {
    let cfg = CoverageConfig::new(preset("doeblin_normal").unwrap(), 0.9, 0.95, 2000, 2000);
    let r = run_coverage(&cfg).unwrap();
    let pass = (0.92..=0.975).contains(&r.coverage);
    (
        pass,
        format!(
            "coverage {:.4} ± {:.4} (band [0.92,0.975]), {} plug-in failures",
            r.coverage, r.std_error, r.failures
        ),
    )
}

fn criterion_8_numeric_primitives() -> Outcome {
    let mut bvn_err: f64 = 0.0;
    for i in -99..=99 {
        let rho = i as f64 / 100.0;
        let want = 0.25 + rho.asin() / (2.0 * PI);
        bvn_err = bvn_err.max((bivariate_normal_cdf(0.0, 0.0, rho).unwrap() - want).abs());
    }
    let mut trip_err: f64 = 0.0;
    for i in 1..10_000 {
        let p = i as f64 / 10_000.0;
        trip_err = trip_err.max((std_normal_cdf(std_normal_quantile(p).unwrap()).unwrap() - p).abs());
    }
    for &p in &[1e-12, 1e-8, 1e-4, 1.0 - 1e-4, 1.0 - 1e-8] {
        trip_err = trip_err.max((std_normal_cdf(std_normal_quantile(p).unwrap()).unwrap() - p).abs());
    }
    let mut chi2_err: f64 = 0.0;
    let mut calls = 0;
    for (_, model) in markov_presets() {
        let chain = model.as_chain().unwrap();
        let v = chain.values();
        for w in v.windows(2) {
            let y = 0.5 * (w[0] + w[1]);
            for &n in &[1usize, 2, 7, 64, 257, 1024] {
                for order in 2..=5 {
                    if let Ok(c) = markov_cumulants(chain, y, n, order) {
                        chi2_err = chi2_err.max((c[2] - 1.0).abs());
                        calls += 1;
                    }
                }
            }
        }
    }
    let pass = bvn_err <= 1e-9 && trip_err <= 1e-8 && chi2_err <= 1e-10 && calls > 0;
    (
        pass,
        format!(
            "Φ₂ arcsine error {bvn_err:.1e}, Φ round trip {trip_err:.1e}, χ₂ error {chi2_err:.1e} over {calls} calls"
        ),
    )
}

fn criterion_9_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "4", "8"] {
        let path = dir.path().join(format!("rate_{threads}.csv"));
        let out = cli(&[
            "rate",
            "--model",
            "doeblin_normal",
            "--p",
            "0.9",
            "--mode",
            "mc",
            "--n-grid",
            "200,400,800",
            "--replicates",
            "500",
            "--seed",
            "42",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        files.push(std::fs::read(&path).unwrap());
    }
    let mut cfg = RateExperimentConfig::new(
        preset("doeblin_normal").unwrap(),
        0.9,
        RateMode::MonteCarlo,
        vec![200, 400, 800],
    );
    cfg.replicates = 500;
    cfg.master_seed = 42;
    cfg.threads = 2;
    let library = rate_to_csv(&run_rate_monte_carlo(&cfg).unwrap()).into_bytes();
    let pass = files.windows(2).all(|w| w[0] == w[1]) && files[0] == library;
    (
        pass,
        format!("CSV bytes identical across threads 1/4/8 and the library call: {pass}"),
    )
}
