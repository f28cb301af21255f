// Relative prime gaps over dyadic blocks.

use primefam::PrimeOracle;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let oracle = PrimeOracle::new(1 << 32);
    let all = oracle.gap_stats(1_000, 1_000_000)?;
    println!("[10^3, 10^6]: {} at p = {}", all.max_ratio, all.argmax_p);
    for k in 10..=19u32 {
        let s = oracle.gap_stats(1 << k, 1 << (k + 1))?;
        println!("[2^{k}, 2^{}]: {} at p = {}", k + 1, s.max_ratio, s.argmax_p);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
