//! Integer factorization for building closed forms.
//!
//! Trial division covers everything that comes out of desk-scale inputs; the
//! odd parts of dyadic sums (`Σ 2^-l`) can carry larger prime factors, which
//! are split with Miller–Rabin and Pollard–Brent.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_LIMIT: u32 = 1 << 14;

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Prime factorization of `n > 0` as `prime → exponent`. `factorize(1)` is
/// empty.
pub fn factorize(n: &BigUint) -> BTreeMap<BigUint, u32> {
    assert!(!n.is_zero(), "factorize(0)");
    let mut out = BTreeMap::new();
    let mut rest = n.clone();
    if let Some(small) = rest.to_u64() {
        let (factors, leftover) = trial_divide_u64(small);
        for (p, e) in factors {
            *out.entry(BigUint::from(p)).or_insert(0) += e;
        }
        rest = BigUint::from(leftover);
        if leftover == 1 {
            return out;
        }
    } else {
        let mut p = 2u32;
        while p < TRIAL_LIMIT {
            let bp = BigUint::from(p);
            while (&rest % &bp).is_zero() {
                rest /= &bp;
                *out.entry(bp.clone()).or_insert(0) += 1;
            }
            p += if p == 2 { 1 } else { 2 };
        }
    }
    split_large(rest, &mut out);
    out
}

fn trial_divide_u64(mut n: u64) -> (Vec<(u64, u32)>, u64) {
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p < TRIAL_LIMIT as u64 && p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 && (p * p > n || n < (TRIAL_LIMIT as u64) * (TRIAL_LIMIT as u64)) {
        factors.push((n, 1));
        n = 1;
    }
    (factors, n)
}

fn split_large(n: BigUint, out: &mut BTreeMap<BigUint, u32>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = pollard_brent(&n);
    let other = &n / &d;
    split_large(d, out);
    split_large(other, out);
}

/// Miller–Rabin with the first thirteen prime bases; deterministic below
/// 3.3·10^24.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for &b in &MR_BASES {
        let b = BigUint::from(b);
        if n == &b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &b in &MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Returns a non-trivial divisor of the odd composite `n`.
fn pollard_brent(n: &BigUint) -> BigUint {
    const BATCH: u64 = 128;
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let absdiff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut r = 1u64;
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
                    q = (q * absdiff(&x, &y)) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = absdiff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}
