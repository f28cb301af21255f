// Predecessor and successor primes across the table, window and test regimes.

use num_bigint::BigUint;
use primefam::PrimeOracle;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let oracle = PrimeOracle::new(1 << 32);
    for n in [10u64, 1 << 20, 5_000_000_000, u64::MAX] {
        let n = BigUint::from(n);
        println!("prev({n}) = {}  succ({n}) = {}", oracle.prev_prime(&n)?, oracle.succ_prime(&n)?);
    }
    let big: BigUint = "1000000000000000000000000000000".parse()?;
    println!("prev(10^30) = {}", oracle.prev_prime(&big)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
