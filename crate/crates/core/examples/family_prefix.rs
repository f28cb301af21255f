// The primes e_j(t) and products f_j(t) for a few parameters.

use primefam::family::family_prefix;
use primefam::{Context, Rat};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = Context::default();
    for t in ["1/2", "1/3", "2/3", "99/100"] {
        let t: Rat = t.parse()?;
        let prefix = family_prefix(&ctx, &t, 6)?;
        println!("{}", serde_json::to_string(&prefix)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
