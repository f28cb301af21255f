//! Acceptance gate: runs every criterion, prints one `[PASS]` or `[FAIL]`
//! line each, and exits nonzero if any failed.

use std::time::{Duration, Instant};

use primefam::measure::{self, AtomReport, HitReport, SamplerConfig};
use primefam::verify::{self, Scale, NON_DYADIC_BASIS};
use primefam::{Context, Rat};

const SEED: u64 = 0;

fn report(n: u32, what: &str, ok: bool, elapsed: Duration, detail: &str) -> bool {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {n}: {what} ({:.2}s) {detail}", elapsed.as_secs_f64());
    ok
}

fn suite(n: u32, what: &str, name: &str, budget: Option<Duration>) -> bool {
    let start = Instant::now();
    let result = verify::run_suite(name, SEED, Scale::Small).expect("known suite");
    let elapsed = start.elapsed();
    let in_budget = budget.is_none_or(|b| elapsed <= b);
    let detail = if result.passed() {
        format!("{} cases", result.cases_run)
    } else {
        let first: Vec<String> = result
            .failures
            .iter()
            .take(3)
            .map(|f| format!("{} [{}]: expected {}, got {}", f.case, f.inputs, f.expected, f.got))
            .collect();
        format!("{} failures; {}", result.failures.len(), first.join("; "))
    };
    let detail = if in_budget { detail } else { format!("{detail}; over budget {budget:?}") };
    report(n, what, result.passed() && in_budget, elapsed, &detail)
}

fn basis() -> Vec<Rat> {
    NON_DYADIC_BASIS.iter().map(|s| s.parse().unwrap()).collect()
}

fn annihilation_runs(ctx: &Context) -> (HitReport, HitReport) {
    let fine = SamplerConfig { bits: 64, seed: SEED, depth: 8, n_samples: 10_000 };
    let coarse = SamplerConfig { bits: 3, ..fine };
    let five_eighths: Rat = "5/8".parse().unwrap();
    (
        measure::annihilation_experiment(ctx, &fine, &basis(), 64).unwrap(),
        measure::annihilation_experiment(ctx, &coarse, &[five_eighths], 64).unwrap(),
    )
}

fn atom_run(ctx: &Context) -> AtomReport {
    let cfg = SamplerConfig { bits: 64, seed: SEED, depth: 8, n_samples: 1_000 };
    measure::atomlessness_experiment(ctx, &cfg, 64).unwrap()
}

fn criterion_01_family_oracle_equivalence() -> bool {
    suite(1, "e_of agrees with the rational-floor oracle", "family-oracle", Some(Duration::from_secs(10)))
}

fn criterion_02_intersection_soundness() -> bool {
    suite(2, "intersection certificates match brute force", "intersection", Some(Duration::from_secs(30)))
}

fn criterion_03_monotonicity() -> bool {
    suite(3, "e antitone in t, f doubling in j", "monotonicity", None)
}

fn criterion_04_independence_witnesses() -> bool {
    suite(4, "witness pairing matrices are diagonal", "witness", None)
}

fn criterion_05_norm_bound() -> bool {
    suite(5, "l1 norm of embed(t, 8) below 2^-(f_1 - 1)", "norms", None)
}

fn criterion_06_limit_points() -> bool {
    suite(6, "limit points at 0, 1 and both sides of S", "limits", None)
}

fn criterion_07_prime_gap_envelope() -> bool {
    suite(7, "prime gap envelope on [10^3, 10^6]", "gap", Some(Duration::from_secs(60)))
}

fn criterion_08_annihilation() -> bool {
    let ctx = Context::default();
    let start = Instant::now();
    let (fine, coarse) = annihilation_runs(&ctx);
    let basis = basis();
    let unverified = fine
        .witnesses
        .iter()
        .filter(|w| !matches!(measure::verify_escape(&ctx, &w.t, &basis, &w.escape), Ok(true)))
        .count();
    let elapsed = start.elapsed();
    let p = 1.0 / 7.0;
    let rate = coarse.hits as f64 / coarse.n_samples as f64;
    let se = (p * (1.0 - p) / coarse.n_samples as f64).sqrt();
    let ok = fine.hits == 0
        && fine.errors.is_empty()
        && fine.witnesses.len() == fine.n_samples
        && unverified == 0
        && (rate - p).abs() <= 3.0 * se
        && elapsed <= Duration::from_secs(60);
    let detail = format!(
        "bits=64: {} hits, {} witnesses, {} unverified, {} errors; bits=3: rate {rate:.4} vs {p:.4} +- {:.4}",
        fine.hits,
        fine.witnesses.len(),
        unverified,
        fine.errors.len(),
        3.0 * se
    );
    report(8, "annihilation of sampled points", ok, elapsed, &detail)
}

fn criterion_09_atomlessness() -> bool {
    let ctx = Context::default();
    let start = Instant::now();
    let r = atom_run(&ctx);
    let elapsed = start.elapsed();
    let ok = r.failures.is_empty()
        && r.errors.is_empty()
        && r.certified == r.pairs
        && r.max_v_star <= 64
        && elapsed <= Duration::from_secs(60);
    let detail = format!(
        "{} distinct of {}, {} of {} pairs certified, max v* {}, {} uncertified",
        r.distinct,
        r.n_samples,
        r.certified,
        r.pairs,
        r.max_v_star,
        r.failures.len()
    );
    report(9, "all distinct sampled pairs certified within depth 64", ok, elapsed, &detail)
}

fn criterion_10_determinism() -> bool {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let ctx = Context::default();
            let (fine, coarse) = annihilation_runs(&ctx);
            let atoms = atom_run(&ctx);
            [
                serde_json::to_string(&fine).unwrap(),
                serde_json::to_string(&coarse).unwrap(),
                serde_json::to_string(&atoms).unwrap(),
            ]
        })
    };
    let start = Instant::now();
    let one = run(1);
    let many = run(std::thread::available_parallelism().map_or(8, |n| n.get()).max(4));
    let elapsed = start.elapsed();
    let same = one == many;
    let bytes: usize = one.iter().map(String::len).sum();
    report(10, "reports byte-identical across thread counts", same, elapsed, &format!("{bytes} bytes compared"))
}

fn main() {
    let criteria: [fn() -> bool; 10] = [
        criterion_01_family_oracle_equivalence,
        criterion_02_intersection_soundness,
        criterion_03_monotonicity,
        criterion_04_independence_witnesses,
        criterion_05_norm_bound,
        criterion_06_limit_points,
        criterion_07_prime_gap_envelope,
        criterion_08_annihilation,
        criterion_09_atomlessness,
        criterion_10_determinism,
    ];
    let passed = criteria.iter().filter(|c| c()).count();
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed < criteria.len() {
        std::process::exit(1);
    }
}
