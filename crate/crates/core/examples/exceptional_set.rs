// Points p^(-1/i) where the family jumps, and the right limit there.

use num_bigint::BigUint;
use primefam::family::{e_at_algebraic, e_right_limit, in_s};
use primefam::{AlgebraicPoint, Context, Rat};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = Context::default();
    for t in ["1/3", "1/4", "1/7", "2/3"] {
        let t: Rat = t.parse()?;
        match in_s(&t) {
            Some(pt) => println!("{t} = {pt}"),
            None => println!("{t} is not of the form p^(-1/i)"),
        }
    }
    let pt = AlgebraicPoint::new(BigUint::from(3u32), 2)?;
    for j in 1..=6 {
        println!(
            "{pt}: e_{j} = {}, right limit {}",
            e_at_algebraic(&ctx, &pt, j)?,
            e_right_limit(&ctx, &pt, j)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
