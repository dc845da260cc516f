use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u32 = 1_000_000;

/// Miller-Rabin with the first 13 prime bases is deterministic below this.
pub const MILLER_RABIN_BOUND: &str = "3317044064679887385961981";

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n + 1];
        let mut out = Vec::new();
        for i in 2..=n {
            if composite[i] {
                continue;
            }
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        out
    })
}

fn mr_bound() -> &'static BigUint {
    static BOUND: OnceLock<BigUint> = OnceLock::new();
    BOUND.get_or_init(|| MILLER_RABIN_BOUND.parse().unwrap())
}

/// Prime factorization as an ordered map prime -> exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization {
    factors: BTreeMap<BigUint, u32>,
}

impl Factorization {
    pub fn iter(&self) -> impl Iterator<Item = (&BigUint, u32)> {
        self.factors.iter().map(|(p, &e)| (p, e))
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.keys()
    }

    pub fn exponent(&self, p: &BigUint) -> u32 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    /// Multiplies the factorization back out.
    pub fn product(&self) -> BigUint {
        self.iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(e))
    }

    fn add(&mut self, p: BigUint, e: u32) {
        *self.factors.entry(p).or_insert(0) += e;
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for (k, (p, e)) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(" * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Complete, deterministic prime factorization of `n >= 1`.
///
/// Trial division by every prime up to 10^6, then Brent's variant of
/// Pollard rho on the cofactor. Primality of the pieces is decided by
/// Miller-Rabin with a base set that is provably exact below
/// [`MILLER_RABIN_BOUND`]; a cofactor above that bound that no base can
/// prove composite is reported as an error instead of being guessed.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    if n.sign() != Sign::Plus {
        return Err(Error::NonPositive(n.to_string()));
    }
    let mut out = Factorization::default();
    let mut rest = n.magnitude().clone();

    if let Some(mut small) = rest.to_u64() {
        for &p in small_primes() {
            let p = p as u64;
            if p * p > small {
                break;
            }
            let mut e = 0;
            while small % p == 0 {
                small /= p;
                e += 1;
            }
            if e > 0 {
                out.add(BigUint::from(p), e);
            }
        }
        rest = BigUint::from(small);
    } else {
        for &p in small_primes() {
            let mut e = 0;
            loop {
                let (quo, rem) = rest.div_rem(&BigUint::from(p));
                if !rem.is_zero() {
                    break;
                }
                rest = quo;
                e += 1;
            }
            if e > 0 {
                out.add(BigUint::from(p), e);
            }
            if rest.to_u64().is_some_and(|r| (p as u64) * (p as u64) > r) {
                break;
            }
        }
    }

    if rest.is_one() {
        return Ok(out);
    }
    // every prime factor of `rest` now exceeds the trial bound
    let limit = BigUint::from(TRIAL_LIMIT);
    if rest < &limit * &limit {
        out.add(rest, 1);
        return Ok(out);
    }

    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if is_prime(&m)? {
            out.add(m, 1);
            continue;
        }
        let d = pollard_brent(&m).ok_or_else(|| Error::RhoFailed(m.to_string()))?;
        let other = &m / &d;
        stack.push(d);
        stack.push(other);
    }
    Ok(out)
}

/// Primality test, exact below [`MILLER_RABIN_BOUND`].
///
/// Above the bound a `false` answer is still certain (a base witnessed
/// compositeness); a would-be `true` is returned as an error.
pub fn is_prime(n: &BigUint) -> Result<bool> {
    if let Some(small) = n.to_u32() {
        if small <= TRIAL_LIMIT {
            return Ok(small_primes().binary_search(&small).is_ok());
        }
    }
    for &p in &small_primes()[..100] {
        if (n % p).is_zero() {
            return Ok(false);
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let witnesses_composite = |a: u32| {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };
    if MR_BASES.iter().any(|&a| witnesses_composite(a)) {
        return Ok(false);
    }
    if n < mr_bound() {
        Ok(true)
    } else {
        Err(Error::BeyondDeterministicRange(n.to_string()))
    }
}

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a > b {
        a - b
    } else {
        b - a
    }
}

/// Nontrivial factor of a composite `n` with no small prime factors.
fn pollard_brent(n: &BigUint) -> Option<BigUint> {
    (1u32..=64).find_map(|c| brent_attempt(n, c))
}

fn brent_attempt(n: &BigUint, c: u32) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let f = |x: &BigUint| (x * x + c) % n;
    let one = BigUint::one();
    let mut y = BigUint::from(2u32);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut g = one.clone();
    let mut q = one.clone();
    let mut r: u64 = 1;

    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = f(&y);
                q = q * abs_diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        r *= 2;
        if r > 1 << 32 {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}
