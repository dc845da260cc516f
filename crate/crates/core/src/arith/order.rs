use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Order of the `i`-th power of a generator of the cyclic group of order `n`,
/// i.e. `n / gcd(n, i)`.
///
/// Panics if `n < 1`.
pub fn cyclic_order(n: &BigInt, i: &BigInt) -> BigInt {
    assert!(n.is_positive(), "cyclic group order must be positive, got {n}");
    n / n.gcd(i)
}

/// Returns `e` with `p^e = n`, if there is one.
pub fn is_power_of(n: &BigInt, p: &BigInt) -> Option<u32> {
    if !n.is_positive() || *p < BigInt::from(2) {
        return None;
    }
    let mut rest = n.clone();
    let mut e = 0;
    while !rest.is_one() {
        let (quo, rem) = rest.div_rem(p);
        if !rem.is_zero() {
            return None;
        }
        rest = quo;
        e += 1;
    }
    Some(e)
}

/// Products of exact results above this many bits are never expanded.
const EXACT_BITS: u64 = 1 << 20;

/// Exact comparison of `base_a^exp_a` with `base_b^exp_b` (bases >= 1).
///
/// Small instances are expanded directly. Otherwise both sides are bracketed
/// by integer logarithms: `log2(base)` lies in `[(L-1)/K, L/K)` where `L` is
/// the bit length of `base^K`, and `K` doubles until the brackets separate.
/// Equal values are caught beforehand by reducing each base to its primitive
/// root (`c` with `base = c^k`, `c` not a perfect power): two such powers
/// coincide only if the roots are equal.
pub fn exp_compare(base_a: &BigUint, exp_a: &BigUint, base_b: &BigUint, exp_b: &BigUint) -> Ordering {
    assert!(!base_a.is_zero() && !base_b.is_zero(), "bases must be >= 1");
    let a_is_one = base_a.is_one() || exp_a.is_zero();
    let b_is_one = base_b.is_one() || exp_b.is_zero();
    match (a_is_one, b_is_one) {
        (true, true) => return Ordering::Equal,
        (true, false) => return Ordering::Less,
        (false, true) => return Ordering::Greater,
        (false, false) => {}
    }

    let size_a = exp_a * base_a.bits();
    let size_b = exp_b * base_b.bits();
    let limit = BigUint::from(EXACT_BITS);
    if size_a <= limit && size_b <= limit {
        let pa = base_a.pow(exp_a.to_u32().unwrap());
        let pb = base_b.pow(exp_b.to_u32().unwrap());
        return pa.cmp(&pb);
    }

    let (root_a, k_a) = primitive_root(base_a);
    let (root_b, k_b) = primitive_root(base_b);
    if root_a == root_b {
        return (exp_a * k_a).cmp(&(exp_b * k_b));
    }

    let mut pow_a = base_a.clone();
    let mut pow_b = base_b.clone();
    loop {
        let (la, lb) = (pow_a.bits(), pow_b.bits());
        // with K the current power: 2^(exp*(L-1)/K) <= value < 2^(exp*L/K)
        if exp_a * la <= exp_b * (lb - 1) {
            return Ordering::Less;
        }
        if exp_b * lb <= exp_a * (la - 1) {
            return Ordering::Greater;
        }
        pow_a = &pow_a * &pow_a;
        pow_b = &pow_b * &pow_b;
    }
}

/// `(c, k)` with `n = c^k` and `k` maximal.
fn primitive_root(n: &BigUint) -> (BigUint, u64) {
    let mut best = (n.clone(), 1u64);
    let mut k = 2u64;
    while k <= n.bits() {
        let c = n.nth_root(k as u32);
        if c.pow(k as u32) == *n {
            best = (c, k);
        }
        k += 1;
    }
    if best.1 > 1 {
        let (c, inner) = primitive_root(&best.0);
        return (c, best.1 * inner);
    }
    best
}
