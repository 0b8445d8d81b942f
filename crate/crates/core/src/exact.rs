//! Exact integer helpers: binomial rows, logarithms of big integers and
//! correctly scaled conversions of big ratios to `f64`.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

/// Row `n` of Pascal's triangle, `[C(n,0), …, C(n,n)]`.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * BigUint::from(n - k) / BigUint::from(k + 1);
        row.push(c.clone());
    }
    row
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

/// Natural logarithm of a big unsigned integer; `-inf` for zero.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = mantissa_exponent(x);
    m.ln() + e as f64 * std::f64::consts::LN_2
}

// x = m · 2^e with m in [1, 2), keeping the exponent out of the logarithm
// so that ln of exact powers of two is exact.
fn mantissa_exponent(x: &BigUint) -> (f64, i64) {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().expect("at most 64 bits remain") as f64;
    let top_bits = (bits - shift) as i32;
    (top / 2f64.powi(top_bits - 1), bits as i64 - 1)
}

/// `num / den` rounded to `f64` with the big parts cancelled exactly before
/// any floating point operation, so the result is accurate even when both
/// operands overflow `f64`.
pub fn ratio_to_f64(num: &BigInt, den: &BigUint) -> f64 {
    assert!(!den.is_zero(), "zero denominator");
    let (sign, mag) = split_sign(num);
    if mag.is_zero() {
        return 0.0;
    }
    let (q, exp2) = scaled_quotient(&mag, den);
    let v = ldexp(q.to_f64().expect("quotient fits"), -exp2);
    if sign == Sign::Minus {
        -v
    } else {
        v
    }
}

/// `ln |num / den|`, `-inf` when `num` is zero.
pub fn ln_ratio(num: &BigInt, den: &BigUint) -> f64 {
    let (_, mag) = split_sign(num);
    if mag.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (q, exp2) = scaled_quotient(&mag, den);
    let (m, e) = mantissa_exponent(&q);
    m.ln() + (e - exp2) as f64 * std::f64::consts::LN_2
}

fn split_sign(x: &BigInt) -> (Sign, BigUint) {
    (x.sign(), x.magnitude().clone())
}

// Returns (q, e) with q ≈ num/den · 2^e and q holding about 64 significant bits.
fn scaled_quotient(num: &BigUint, den: &BigUint) -> (BigUint, i64) {
    let e = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if e >= 0 {
        (num << e as u64) / den
    } else {
        num / (den << (-e) as u64)
    };
    (q, e)
}

/// `x · 2^e` without intermediate overflow or premature underflow.
pub fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}
