use std::sync::OnceLock;

pub const DEFAULT_SIEVE_LIMIT: u64 = 1_000_000;

/// Sieve of Eratosthenes up to a fixed limit. Read-only after construction.
#[derive(Debug, Clone)]
pub struct Sieve {
    limit: u64,
    composite: Vec<bool>,
    primes: Vec<u64>,
}

impl Sieve {
    pub fn new(limit: u64) -> Self {
        let n = limit as usize;
        let mut composite = vec![false; n + 1];
        composite[0] = true;
        if n >= 1 {
            composite[1] = true;
        }
        let mut i = 2;
        while i * i <= n {
            if !composite[i] {
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
            i += 1;
        }
        let primes = (2..=n).filter(|&k| !composite[k]).map(|k| k as u64).collect();
        Sieve { limit, composite, primes }
    }

    /// The process-wide sieve up to [`DEFAULT_SIEVE_LIMIT`].
    pub fn global() -> &'static Sieve {
        static SIEVE: OnceLock<Sieve> = OnceLock::new();
        SIEVE.get_or_init(|| Sieve::new(DEFAULT_SIEVE_LIMIT))
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `None` when `n` is above the sieve limit.
    pub fn is_prime(&self, n: u64) -> Option<bool> {
        (n <= self.limit).then(|| !self.composite[n as usize])
    }

    pub fn primes_up_to(&self, x: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= x);
        &self.primes[..end]
    }
}

/// All primes `p <= x`, ascending.
pub fn primes_up_to(x: u64) -> Vec<u64> {
    let sieve = Sieve::global();
    if x <= sieve.limit() {
        sieve.primes_up_to(x).to_vec()
    } else {
        Sieve::new(x).primes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sieve() {
        let s = Sieve::new(30);
        assert_eq!(s.primes(), &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(s.is_prime(29), Some(true));
        assert_eq!(s.is_prime(1), Some(false));
        assert_eq!(s.is_prime(31), None);
        assert_eq!(s.primes_up_to(12), &[2, 3, 5, 7, 11]);
    }

    #[test]
    fn prime_counts() {
        assert_eq!(primes_up_to(100).len(), 25);
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
        assert!(primes_up_to(1).is_empty());
    }
}
