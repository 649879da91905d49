//! Fixed-point big-number helpers: arbitrary-precision natural logarithms of
//! big integers and accurate conversion of huge rationals to `f64`.
//!
//! Values are represented as `BigInt` scaled by `2^PREC`. 256 fractional bits
//! are far more than the `f64` outputs need; the headroom keeps every
//! intermediate truncation irrelevant.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

/// Fractional bits of the fixed-point representation.
pub const PREC: u64 = 256;

fn fp_one() -> BigInt {
    BigInt::from(1u8) << PREC
}

fn fp_div(a: &BigInt, b: &BigInt) -> BigInt {
    (a << PREC) / b
}

/// 1/q in fixed point for a plain integer q.
fn fp_inv(q: u64) -> BigInt {
    fp_one() / BigInt::from(q)
}

/// atanh(t) = t + t^3/3 + t^5/5 + ... for |t| < 1 (fixed point).
fn fp_atanh(t: &BigInt) -> BigInt {
    let t2_num = t * t; // scaled by 2^(2*PREC)
    let mut power = t.clone();
    let mut sum = t.clone();
    let mut k = 1u64;
    loop {
        power = (&power * &t2_num) >> (2 * PREC);
        if power.is_zero() {
            break;
        }
        k += 2;
        let term = &power / BigInt::from(k);
        if term.is_zero() {
            break;
        }
        sum += term;
    }
    sum
}

/// ln 2 = 2 atanh(1/3).
pub fn fp_ln2() -> &'static BigInt {
    static LN2: OnceLock<BigInt> = OnceLock::new();
    LN2.get_or_init(|| fp_atanh(&fp_inv(3)) << 1)
}

/// arctan(1/q) via the alternating inverse-power series (fixed point).
fn fp_atan_inv(q: u64) -> BigInt {
    let q2 = BigInt::from(q) * BigInt::from(q);
    let mut power = fp_inv(q);
    let mut sum = power.clone();
    let mut k = 1u64;
    let mut sign = -1i8;
    loop {
        power = &power / &q2;
        if power.is_zero() {
            break;
        }
        k += 2;
        let term = &power / BigInt::from(k);
        if term.is_zero() {
            break;
        }
        if sign > 0 {
            sum += term;
        } else {
            sum -= term;
        }
        sign = -sign;
    }
    sum
}

/// pi by Machin's formula: 16 arctan(1/5) - 4 arctan(1/239).
pub fn fp_pi() -> &'static BigInt {
    static PI: OnceLock<BigInt> = OnceLock::new();
    PI.get_or_init(|| (fp_atan_inv(5) << 4) - (fp_atan_inv(239) << 2))
}

/// ln(2*pi) in fixed point.
pub fn fp_ln_2pi() -> &'static BigInt {
    static LN_2PI: OnceLock<BigInt> = OnceLock::new();
    // pi/2 is in [1, 2), so ln(pi) = ln 2 + ln(pi/2).
    LN_2PI.get_or_init(|| {
        let half_pi = fp_pi() >> 1;
        (fp_ln2() << 1) + fp_ln_mantissa(&half_pi)
    })
}

/// ln(v) for a fixed-point v in [1, 2): 2 atanh((v-1)/(v+1)).
fn fp_ln_mantissa(v: &BigInt) -> BigInt {
    let num = v - fp_one();
    let den = v + fp_one();
    fp_atanh(&fp_div(&num, &den)) << 1
}

/// ln(x) of an arbitrary positive big integer, in fixed point.
pub fn fp_ln_big(x: &BigUint) -> BigInt {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    let e = bits as i64 - 1;
    // Normalize to a fixed-point mantissa in [1, 2).
    let shift = PREC as i64 - e;
    let mant = if shift >= 0 {
        BigInt::from_biguint(Sign::Plus, x << shift as u64)
    } else {
        BigInt::from_biguint(Sign::Plus, x >> (-shift) as u64)
    };
    fp_ln_mantissa(&mant) + BigInt::from(e) * fp_ln2()
}

/// v * 2^e as f64, for a big integer v of any size.
pub fn big_to_f64_shifted(v: &BigInt, e: i64) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let mag = v.magnitude();
    let bits = mag.bits() as i64;
    let (top, extra) = if bits <= 62 {
        (mag.to_u64().expect("fits"), 0i64)
    } else {
        let t = (mag >> (bits - 62) as u64).to_u64().expect("62 bits fit");
        (t, bits - 62)
    };
    let x = libm::scalbn(top as f64, (e + extra).clamp(i32::MIN as i64, i32::MAX as i64) as i32);
    if v.is_negative() {
        -x
    } else {
        x
    }
}

/// Fixed-point value to f64.
pub fn fp_to_f64(v: &BigInt) -> f64 {
    big_to_f64_shifted(v, -(PREC as i64))
}

/// Accurate n/d as f64 for nonnegative big integers of any magnitude.
pub fn big_ratio_to_f64(n: &BigUint, d: &BigUint) -> f64 {
    assert!(!d.is_zero(), "zero denominator");
    if n.is_zero() {
        return 0.0;
    }
    // Scale the quotient to ~64 significant bits, then rescale.
    let s = d.bits() as i64 + 64 - n.bits() as i64;
    let q = if s >= 0 {
        (n << s as u64) / d
    } else {
        n / (d << (-s) as u64)
    };
    big_to_f64_shifted(&BigInt::from_biguint(Sign::Plus, q), -s)
}
