use std::sync::{Arc, OnceLock, RwLock};

/// Primes `<= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u32) -> Vec<u32> {
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut i = 2;
    while i * i <= limit {
        if !composite[i] {
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (2..=limit)
        .filter(|&n| !composite[n])
        .map(|n| n as u32)
        .collect()
}

/// Shared table that only ever grows to the largest bound requested.
pub(crate) fn small_primes(bound: u32) -> Arc<Vec<u32>> {
    static TABLE: OnceLock<RwLock<(u32, Arc<Vec<u32>>)>> = OnceLock::new();
    let table = TABLE.get_or_init(|| RwLock::new((0, Arc::new(Vec::new()))));
    {
        let guard = table.read().unwrap_or_else(|e| e.into_inner());
        if guard.0 >= bound {
            return Arc::clone(&guard.1);
        }
    }
    let mut guard = table.write().unwrap_or_else(|e| e.into_inner());
    if guard.0 < bound {
        *guard = (bound, Arc::new(primes_up_to(bound)));
    }
    Arc::clone(&guard.1)
}
