// Sampled points almost never land in a finite-dimensional span.

use primefam::measure::{annihilation_experiment, SamplerConfig};
use primefam::{Context, Rat};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = Context::default();
    let basis: Vec<Rat> = ["1/3", "2/5", "3/7"].iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    let cfg = SamplerConfig { bits: 64, seed: 11, depth: 8, n_samples: 1_000 };
    let r = annihilation_experiment(&ctx, &cfg, &basis, 64)?;
    println!("bits 64: {} hits in {} samples", r.hits, r.n_samples);

    let coarse = SamplerConfig { bits: 3, ..cfg };
    let r = annihilation_experiment(&ctx, &coarse, &["5/8".parse()?], 64)?;
    println!("bits 3 against [5/8]: {} hits in {} samples (about 1/7 expected)", r.hits, r.n_samples);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
