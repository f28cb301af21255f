// Pairwise distinctness of sampled embeddings, certified exactly.

use primefam::measure::{atomlessness_experiment, SamplerConfig};
use primefam::Context;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = Context::default();
    let cfg = SamplerConfig { bits: 32, seed: 5, depth: 8, n_samples: 300 };
    for cap in [64, 4096] {
        let r = atomlessness_experiment(&ctx, &cfg, cap)?;
        println!(
            "cap {cap}: {} distinct, {}/{} pairs certified, max v* {}",
            r.distinct, r.certified, r.pairs, r.max_v_star
        );
        for f in r.failures.iter().take(3) {
            println!("  uncertified {} vs {}: {}", f.t, f.t_prime, f.reason);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
