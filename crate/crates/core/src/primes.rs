//! Prime sieving shared by the Euler-product tails and the curve scans.

use std::sync::{Mutex, OnceLock};

/// All primes `<= limit`, ascending.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = vec![2u64];
    let mut i = 3usize;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    let mut k = 3usize;
    while k <= n {
        if !composite[k] {
            primes.push(k as u64);
        }
        k += 2;
    }
    primes
}

static SHARED: OnceLock<Mutex<(u64, std::sync::Arc<Vec<u64>>)>> = OnceLock::new();

/// Cached sieve, grown on demand. Returns primes `<= limit` as a shared vector
/// (possibly longer than requested; callers slice by `partition_point`).
pub fn shared_primes(limit: u64) -> std::sync::Arc<Vec<u64>> {
    let cell = SHARED.get_or_init(|| Mutex::new((0, std::sync::Arc::new(Vec::new()))));
    let mut guard = cell.lock().unwrap();
    if guard.0 < limit {
        let grown = limit.max(guard.0 * 2).max(1 << 16);
        *guard = (grown, std::sync::Arc::new(sieve_primes(grown)));
    }
    guard.1.clone()
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < lo {
        return Vec::new();
    }
    let all = shared_primes(hi);
    let start = all.partition_point(|&p| p < lo);
    let end = all.partition_point(|&p| p <= hi);
    all[start..end].to_vec()
}
