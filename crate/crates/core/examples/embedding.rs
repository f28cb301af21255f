// Truncated embeddings, their norm bounds, and the binary-digit baseline.

use primefam::embedding::{baseline_embed, embed, l1_norm_bounds};
use primefam::{Context, Rat};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = Context::default();
    for t in ["1/2", "1/3", "5/8"] {
        let t: Rat = t.parse()?;
        let x = embed(&ctx, &t, 4)?;
        let (lo, hi) = l1_norm_bounds(&x);
        println!("x_{t} = {}", serde_json::to_string(&x)?);
        let exps = |d: &primefam::Dyadic| d.exponents().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
        println!("  |x|_1 between sums of 2^-e over {{{}}} and {{{}}}", exps(&lo), exps(&hi));
        println!("  baseline {}", serde_json::to_string(&baseline_embed(&t, 8)?)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
