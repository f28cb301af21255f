/// Primes up to and including `limit`, by the sieve of Eratosthenes over odd numbers.
pub(crate) fn primes_up_to(limit: u64) -> Vec<u32> {
    assert!(limit <= u32::MAX as u64, "table sieve limited to u32 range");
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    // index i represents 2i + 1
    let len = limit / 2 + 1;
    let mut composite = vec![false; len];
    composite[0] = true;
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut m = p * p / 2;
            while m < len {
                composite[m] = true;
                m += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(len / 8);
    primes.push(2);
    primes.extend(
        composite
            .iter()
            .enumerate()
            .filter(|&(i, &c)| !c && 2 * i < limit)
            .map(|(i, _)| (2 * i + 1) as u32),
    );
    primes
}

/// Primes in the closed window `[lo, hi]`, sieved with `base` (which must
/// contain every prime up to `sqrt(hi)`).
pub(crate) fn primes_in_window(lo: u64, hi: u64, base: &[u32]) -> Vec<u64> {
    if hi < lo || hi < 2 {
        return Vec::new();
    }
    let lo = lo.max(2);
    let width = (hi - lo + 1) as usize;
    let mut composite = vec![false; width];
    for &p in base {
        let p = p as u64;
        if p * p > hi {
            break;
        }
        let first = (p * p).max(lo.div_ceil(p) * p);
        let mut m = first;
        while m <= hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| lo + i as u64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        assert_eq!(primes_up_to(1), Vec::<u32>::new());
        assert_eq!(primes_up_to(2), vec![2]);
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(1 << 16).len(), 6542);
    }

    #[test]
    fn windows_agree_with_table() {
        let base = primes_up_to(1 << 12);
        let table = primes_up_to(1 << 20);
        for (lo, hi) in [(0u64, 100u64), (999_000, 1_000_100), (65_536, 70_000), (7, 7)] {
            let want: Vec<u64> = table
                .iter()
                .map(|&p| p as u64)
                .filter(|&p| p >= lo && p <= hi)
                .collect();
            assert_eq!(primes_in_window(lo, hi, &base), want, "[{lo}, {hi}]");
        }
    }
}
