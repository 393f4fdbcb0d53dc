use crate::error::{Error, Result};
use std::sync::{Arc, RwLock};

/// Largest sieve bound accepted by default.
pub const DEFAULT_SIEVE_LIMIT: u64 = 100_000_000;

/// `Λ(n)` for `2 ≤ n ≤ N`, stored sparsely: only prime powers carry a
/// nonzero value, so the table keeps `(n, log p)` pairs in increasing `n`.
#[derive(Debug, Clone)]
pub struct VonMangoldtTable {
    limit: u64,
    entries: Vec<(u64, f64)>,
}

impl VonMangoldtTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `Λ(n)`; zero outside `2..=limit` and for non prime powers.
    pub fn get(&self, n: u64) -> f64 {
        match self.entries.binary_search_by_key(&n, |e| e.0) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0.0,
        }
    }

    /// Prime powers `n ≤ limit` with their `Λ(n)`.
    pub fn prime_powers(&self) -> &[(u64, f64)] {
        &self.entries
    }

    /// Prime powers not exceeding `n`.
    pub fn up_to(&self, n: u64) -> &[(u64, f64)] {
        let end = self.entries.partition_point(|e| e.0 <= n);
        &self.entries[..end]
    }

    /// Chebyshev `ψ(x) = Σ_{n≤x} Λ(n)`.
    pub fn psi(&self, x: u64) -> f64 {
        self.up_to(x).iter().map(|e| e.1).sum()
    }
}

/// Builds the table with the default capacity limit.
pub fn von_mangoldt(n: u64) -> Result<VonMangoldtTable> {
    von_mangoldt_capped(n, DEFAULT_SIEVE_LIMIT)
}

/// Linear (Euler) sieve for the primes up to `n`, followed by their powers.
pub fn von_mangoldt_capped(n: u64, cap: u64) -> Result<VonMangoldtTable> {
    if n < 2 {
        return Err(Error::Domain(format!("sieve bound {n} must be at least 2")));
    }
    if n > cap {
        return Err(Error::Capacity {
            needed: n,
            limit: cap,
        });
    }
    let size = n as usize + 1;
    let mut composite = vec![false; size];
    let mut primes: Vec<u64> = Vec::new();
    for i in 2..size {
        if !composite[i] {
            primes.push(i as u64);
        }
        for &p in &primes {
            let m = i * p as usize;
            if m >= size {
                break;
            }
            composite[m] = true;
            if i % p as usize == 0 {
                break;
            }
        }
    }
    drop(composite);

    let mut entries = Vec::with_capacity(primes.len() + primes.len() / 8);
    for &p in &primes {
        let log_p = (p as f64).ln();
        let mut q = p;
        loop {
            entries.push((q, log_p));
            match q.checked_mul(p) {
                Some(next) if next <= n => q = next,
                _ => break,
            }
        }
    }
    entries.sort_unstable_by_key(|e| e.0);
    Ok(VonMangoldtTable { limit: n, entries })
}

static SHARED: RwLock<Option<Arc<VonMangoldtTable>>> = RwLock::new(None);

/// Process-wide table covering at least `n`. The table is rebuilt (at
/// least doubling) when a larger bound is requested and is otherwise shared
/// read-only.
pub fn shared_table(n: u64) -> Result<Arc<VonMangoldtTable>> {
    let n = n.max(2);
    if let Some(t) = SHARED.read().expect("sieve cache poisoned").as_ref() {
        if t.limit >= n {
            return Ok(Arc::clone(t));
        }
    }
    if n > DEFAULT_SIEVE_LIMIT {
        return Err(Error::Capacity {
            needed: n,
            limit: DEFAULT_SIEVE_LIMIT,
        });
    }
    let mut guard = SHARED.write().expect("sieve cache poisoned");
    if let Some(t) = guard.as_ref() {
        if t.limit >= n {
            return Ok(Arc::clone(t));
        }
    }
    let old = guard.as_ref().map_or(0, |t| t.limit);
    let target = n
        .max(old.saturating_mul(2))
        .clamp(1 << 16, DEFAULT_SIEVE_LIMIT);
    let table = Arc::new(von_mangoldt(target)?);
    *guard = Some(Arc::clone(&table));
    Ok(table)
}
