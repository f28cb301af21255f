// A diagonal witness proving ten embeddings linearly independent.

use primefam::embedding::{coordinate_pairing, embed, independence_witness};
use primefam::{Context, Rat};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = Context::default();
    let points: Vec<Rat> = (1..=10u64).map(|k| Rat::from_u64(k, 11)).collect::<Result<_, _>>()?;
    let w = independence_witness(&ctx, &points, 64)?;
    println!("witness depth {}", w.depth_used);
    for (t, wi) in points.iter().zip(&w.witness_indices) {
        let x = embed(&ctx, t, w.depth_used)?;
        let row: Vec<bool> = w
            .witness_indices
            .iter()
            .map(|wj| !coordinate_pairing(&x, wj).is_zero())
            .collect();
        println!("{t:>6} via coordinate {wi}: {row:?}");
    }
    w.verify(&ctx)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
