//! Arbitrary-precision binary floating point.
//!
//! A [`BigReal`] is `mant · 2^exp` with a signed big-integer mantissa that is
//! kept to at most `prec + 1` significant bits. Every value carries its own
//! working precision; binary operations produce a result at the larger of
//! the two operand precisions.
//!
//! Error contract: `+ − × ÷ sqrt` are rounded to nearest (division and square
//! root are truncated two bits below the last kept bit), so each introduces a
//! relative error of at most `2^-(P-1)`. The transcendental kernels (`exp`,
//! `ln`, `sin`, `pi`, `ln2`, `root`) evaluate internally with guard bits and
//! return a value within `2^-(P-4)` relative of the exact result, taking the
//! argument as exact. Callers that chain many operations declare their own
//! guard `G` and compare against `2^-(P-G)`.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Working precision used when a caller does not specify one.
pub const DEFAULT_PREC: u32 = 256;

const LOG2_E: f64 = core::f64::consts::LOG2_E;

#[derive(Clone, Debug)]
pub struct BigReal {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn bits_of(m: &BigInt) -> i64 {
    m.bits() as i64
}

/// Shift right by `s` bits rounding the magnitude to nearest.
fn shr_round(m: BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m;
    }
    let (sign, mag) = m.into_parts();
    let half = BigUint::one() << (s - 1);
    let mag = (mag + half) >> s;
    BigInt::from_biguint(sign, mag)
}

/// Shift right by `s` bits truncating the magnitude.
fn shr_trunc(m: &BigInt, s: u64) -> BigInt {
    let (sign, mag) = (m.sign(), m.magnitude());
    BigInt::from_biguint(sign, mag >> s)
}

fn shift(m: &BigInt, by: i64) -> BigInt {
    if by >= 0 {
        m << (by as u64)
    } else {
        shr_trunc(m, (-by) as u64)
    }
}

/// `round(num / den)` for `den > 0`.
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = num.div_mod_floor(den);
    if &r * &two >= *den {
        q + 1
    } else {
        q
    }
}

fn isqrt_u32(v: u32) -> u32 {
    (v as u64).sqrt() as u32
}

impl BigReal {
    fn raw(mant: BigInt, exp: i64, prec: u32) -> Self {
        BigReal { mant, exp, prec }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let b = bits_of(&self.mant);
        let p = self.prec.max(2) as i64;
        if b > p {
            let s = (b - p) as u64;
            self.mant = shr_round(core::mem::take(&mut self.mant), s);
            self.exp += s as i64;
        }
        self
    }

    pub fn zero(prec: u32) -> Self {
        BigReal {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::raw(BigInt::from(v), 0, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::raw(v.clone(), 0, prec)
    }

    /// Exact conversion of a finite `f64` (then rounded to `prec`).
    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "non-finite f64");
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let neg = bits >> 63 == 1;
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, ex) = if e == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), e - 1075)
        };
        let m = BigInt::from(m);
        Self::raw(if neg { -m } else { m }, ex, prec)
    }

    /// `num / den` rounded to `prec` bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        if num.is_zero() {
            return Ok(Self::zero(prec));
        }
        let s = (prec as i64 + 8 + bits_of(&den) - bits_of(&num)).max(0);
        let q = div_round(&(num << (s as u64)), &den);
        Ok(Self::raw(q, -s, prec))
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Same value re-rounded (or exactly extended) to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::raw(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        BigReal {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// `floor(log2 |x|)`, or `None` for zero.
    pub fn ilog2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + bits_of(&self.mant) - 1)
        }
    }

    /// True iff `|x| < 2^k`.
    pub fn abs_lt_pow2(&self, k: i64) -> bool {
        match self.ilog2() {
            None => true,
            Some(e) => e < k,
        }
    }

    /// `x · 2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigReal {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    /// Relative distance `|a − b| / max(|a|, |b|)`; zero when both vanish.
    pub fn rel_diff(&self, other: &BigReal) -> BigReal {
        let p = self.prec.max(other.prec);
        let d = (self - other).abs();
        let scale = if self.abs() >= other.abs() {
            self.abs()
        } else {
            other.abs()
        };
        if scale.is_zero() {
            return Self::zero(p);
        }
        &d / &scale
    }

    pub fn checked_div(&self, other: &BigReal) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(div_impl(self, other))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one(self.prec).checked_div(self)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::NegativeRadicand);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let p = self.prec as i64;
        let b = bits_of(&self.mant);
        let mut s = (2 * (p + 4) - b).max(0);
        if (self.exp - s).is_odd() {
            s += 1;
        }
        let m = (&self.mant << (s as u64)).sqrt();
        Ok(Self::raw(m, (self.exp - s) / 2, self.prec))
    }

    /// Integer power by binary exponentiation.
    pub fn pow_i64(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Ok(Self::one(self.prec));
        }
        let p = self.prec;
        let wp = p + 2 * (64 - n.unsigned_abs().leading_zeros()) + 8;
        let mut base = self.with_prec(wp);
        let mut acc = Self::one(wp);
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        let acc = if n < 0 { acc.recip()? } else { acc };
        Ok(acc.with_prec(p))
    }

    /// `round(x · 2^bits)` as an integer.
    pub fn to_fixed(&self, bits: u32) -> BigInt {
        let s = self.exp + bits as i64;
        if s >= 0 {
            &self.mant << (s as u64)
        } else {
            shr_round(self.mant.clone(), (-s) as u64)
        }
    }

    pub fn from_fixed(v: BigInt, bits: u32, prec: u32) -> Self {
        Self::raw(v, -(bits as i64), prec)
    }

    /// Nearest integer (ties away from zero).
    pub fn round_to_bigint(&self) -> BigInt {
        self.to_fixed(0)
    }

    pub fn floor_to_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as u64)
        } else {
            &self.mant >> ((-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = bits_of(&self.mant);
        let s = (b - 64).max(0);
        let top = shr_trunc(&self.mant, s as u64);
        let v = top.abs().to_u64().unwrap_or(u64::MAX) as f64;
        let v = if self.is_negative() { -v } else { v };
        scale_f64(v, self.exp + s)
    }

    /// π to `prec` bits (Machin's formula in fixed point).
    pub fn pi(prec: u32) -> Self {
        let wp = prec + 24;
        let a = atan_inv_fixed(5, wp);
        let b = atan_inv_fixed(239, wp);
        let v = (a << 4u32) - (b << 2u32);
        Self::from_fixed(v, wp, prec)
    }

    /// ln 2 to `prec` bits via `2·atanh(1/3)`.
    pub fn ln2(prec: u32) -> Self {
        let wp = prec + 24;
        let v = atanh_inv_fixed(3, wp) << 1u32;
        Self::from_fixed(v, wp, prec)
    }

    /// `e^x`. Panics if `|x| ≥ 2^50`.
    pub fn exp(&self) -> Self {
        let p = self.prec;
        if self.is_zero() {
            return Self::one(p);
        }
        let xf = self.to_f64();
        assert!(xf.abs() < 1.0e15, "exp argument out of range");
        let t = xf * LOG2_E;
        let n = if t >= 0.0 {
            (t + 0.5) as i64
        } else {
            (t - 0.5) as i64
        };
        let k = (isqrt_u32(p) / 2).max(4);
        let nbits = 64 - n.unsigned_abs().leading_zeros();
        let wp = p + k + 32 + nbits;
        let r = &self.with_prec(wp) - &(&Self::ln2(wp) * &Self::from_i64(n, wp));
        let rf = r.mul_pow2(-(k as i64)).to_fixed(wp);
        let one = BigInt::one() << wp;
        let mut sum = one.clone();
        let mut term = one;
        let mut i = 1u32;
        loop {
            term = (&term * &rf) >> wp;
            term /= i;
            if term.is_zero() {
                break;
            }
            sum += &term;
            i += 1;
        }
        for _ in 0..k {
            sum = (&sum * &sum) >> wp;
        }
        Self::from_fixed(sum, wp, p).mul_pow2(n)
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(domain!("ln of a non-positive value"));
        }
        let p = self.prec;
        let e = self.ilog2().unwrap_or(0);
        let k = (isqrt_u32(p) / 2).max(4);
        let ebits = 64 - e.unsigned_abs().leading_zeros();
        let wp = p + k + 32 + ebits;
        let mut y = self.mul_pow2(-e).with_prec(wp);
        for _ in 0..k {
            y = y.sqrt()?;
        }
        let one = Self::one(wp);
        let s = div_impl(&(&y - &one), &(&y + &one));
        let sf = s.to_fixed(wp);
        let s2 = (&sf * &sf) >> wp;
        let mut pow = sf.clone();
        let mut sum = sf;
        let mut i = 1u32;
        loop {
            pow = (&pow * &s2) >> wp;
            let t = &pow / (2 * i + 1);
            if t.is_zero() {
                break;
            }
            sum += t;
            i += 1;
        }
        let lnm = Self::from_fixed(sum, wp, wp).mul_pow2(k as i64 + 1);
        let r = &lnm + &(&Self::ln2(wp) * &Self::from_i64(e, wp));
        Ok(r.with_prec(p))
    }

    pub fn sin(&self) -> Self {
        let p = self.prec;
        if self.is_zero() {
            return self.clone();
        }
        let mag = self.ilog2().unwrap_or(0).max(0) as u32;
        let wp = p + 32 + mag;
        let pi = Self::pi(wp);
        let two_pi = pi.mul_pow2(1);
        let x = self.with_prec(wp);
        let turns = div_impl(&x, &two_pi).round_to_bigint();
        let mut r = &x - &(&two_pi * &Self::from_bigint(&turns, wp));
        let half_pi = pi.mul_pow2(-1);
        if r > half_pi {
            r = &pi - &r;
        } else if r < -&half_pi {
            r = &(-&pi) - &r;
        }
        let rf = r.to_fixed(wp);
        let r2 = (&rf * &rf) >> wp;
        let mut term = rf.clone();
        let mut sum = rf;
        let mut i = 1u32;
        loop {
            term = -((&term * &r2) >> wp);
            term /= (2 * i) * (2 * i + 1);
            if term.is_zero() {
                break;
            }
            sum += &term;
            i += 1;
        }
        Self::from_fixed(sum, wp, p)
    }

    /// Positive real `k`-th root of a positive value.
    pub fn root(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(domain!("zeroth root"));
        }
        if k == 1 {
            return Ok(self.clone());
        }
        if k == 2 {
            return self.sqrt();
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        if self.is_negative() {
            return Err(Error::NegativeRadicand);
        }
        let p = self.prec;
        let wp = p + 24 + (64 - self.ilog2().unwrap_or(0).unsigned_abs().leading_zeros());
        let l = self.with_prec(wp).ln()?;
        Ok(div_impl(&l, &Self::from_i64(k as i64, wp))
            .exp()
            .with_prec(p))
    }

    /// `x^y` for `x > 0`.
    pub fn powf(&self, y: &BigReal) -> Result<Self> {
        if !self.is_positive() {
            return Err(domain!("powf needs a positive base"));
        }
        let p = self.prec.max(y.prec);
        let l = self.with_prec(p + 32).ln()?;
        let t = &l * &y.with_prec(p + 32);
        let extra = t.ilog2().unwrap_or(0).max(0) as u32;
        let t = if extra > 0 {
            let l = self.with_prec(p + 32 + extra).ln()?;
            &l * &y.with_prec(p + 32 + extra)
        } else {
            t
        };
        Ok(t.exp().with_prec(p))
    }

    /// Decimal rendering with `sig` significant digits. Fixed notation for
    /// moderate magnitudes, otherwise `d.ddd…e±N`.
    pub fn to_decimal_string(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.is_zero() {
            return String::from("0");
        }
        let (digits, e10) = self.decimal_digits(sig);
        let mut out = String::new();
        if self.is_negative() {
            out.push('-');
        }
        if (-8..=20).contains(&e10) {
            if e10 < 0 {
                out.push_str("0.");
                for _ in 0..(-e10 - 1) {
                    out.push('0');
                }
                out.push_str(&digits);
            } else {
                let int_len = (e10 + 1) as usize;
                if digits.len() <= int_len {
                    out.push_str(&digits);
                    for _ in digits.len()..int_len {
                        out.push('0');
                    }
                } else {
                    out.push_str(&digits[..int_len]);
                    out.push('.');
                    out.push_str(&digits[int_len..]);
                }
            }
        } else {
            out.push_str(&digits[..1]);
            if digits.len() > 1 {
                out.push('.');
                out.push_str(&digits[1..]);
            }
            out.push('e');
            out.push_str(&alloc::format!("{e10}"));
        }
        out
    }

    /// Scientific rendering `d.ddd…e±N` with `sig` significant digits.
    pub fn to_sci_string(&self, sig: usize) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let (digits, e10) = self.decimal_digits(sig.max(1));
        let mut out = String::new();
        if self.is_negative() {
            out.push('-');
        }
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push_str(&alloc::format!("e{e10}"));
        out
    }

    /// Significant digits of `|x|` and the decimal exponent of the first one.
    fn decimal_digits(&self, sig: usize) -> (String, i64) {
        let l2 = self.ilog2().unwrap_or(0);
        let mut e10 = ((l2 as f64) * core::f64::consts::LOG10_2) as i64;
        if (l2 as f64) * core::f64::consts::LOG10_2 < 0.0 {
            e10 -= 1;
        }
        let ten = BigInt::from(10);
        let lo = num_traits::pow(ten.clone(), sig - 1);
        let hi = &lo * &ten;
        loop {
            let k = sig as i64 - 1 - e10;
            let n = self.abs().scaled_by_pow10_rounded(k);
            if n >= hi {
                e10 += 1;
            } else if n < lo {
                e10 -= 1;
            } else {
                return (n.to_str_radix(10), e10);
            }
        }
    }

    /// `round(x · 10^k)` computed exactly from the binary representation.
    fn scaled_by_pow10_rounded(&self, k: i64) -> BigInt {
        let ten = BigInt::from(10);
        let mut num = self.mant.clone();
        let mut den = BigInt::one();
        if k >= 0 {
            num *= num_traits::pow(ten, k as usize);
        } else {
            den *= num_traits::pow(ten, (-k) as usize);
        }
        if self.exp >= 0 {
            num <<= self.exp as u64;
        } else {
            den <<= (-self.exp) as u64;
        }
        div_round(&num, &den)
    }

    /// Parse `[-]ddd[.ddd][e[±]ddd]` exactly, then round to `prec`.
    pub fn parse_decimal(s: &str, prec: u32) -> Result<Self> {
        let t = s.trim();
        let err = || Error::Parse(alloc::format!("invalid decimal literal {t:?}"));
        let (neg, body) = match t.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (mant_s, exp_s) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], Some(&body[i + 1..])),
            None => (body, None),
        };
        let (int_s, frac_s) = match mant_s.find('.') {
            Some(i) => (&mant_s[..i], &mant_s[i + 1..]),
            None => (mant_s, ""),
        };
        if int_s.is_empty() && frac_s.is_empty() {
            return Err(err());
        }
        if !int_s
            .chars()
            .chain(frac_s.chars())
            .all(|c| c.is_ascii_digit())
        {
            return Err(err());
        }
        let mut digits = String::from(int_s);
        digits.push_str(frac_s);
        let m = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(err)?;
        let mut e10: i64 = -(frac_s.len() as i64);
        if let Some(es) = exp_s {
            e10 += es.parse::<i64>().map_err(|_| err())?;
        }
        let m = if neg { -m } else { m };
        let ten = BigInt::from(10);
        if e10 >= 0 {
            Ok(Self::from_bigint(
                &(m * num_traits::pow(ten, e10 as usize)),
                prec,
            ))
        } else {
            Self::from_ratio(&m, &num_traits::pow(ten, (-e10) as usize), prec)
        }
    }

    fn cmp_value(&self, other: &BigReal) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let ta = self.exp + bits_of(&self.mant);
        let tb = other.exp + bits_of(&other.mant);
        let mag = if ta != tb {
            ta.cmp(&tb)
        } else {
            let lo = self.exp.min(other.exp);
            let a = shift(&self.mant.abs(), self.exp - lo);
            let b = shift(&other.mant.abs(), other.exp - lo);
            a.cmp(&b)
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

fn scale_f64(mut v: f64, mut e: i64) -> f64 {
    while e > 1000 {
        v *= f64::from_bits(((1000 + 1023) as u64) << 52);
        e -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while e < -1000 {
        v *= f64::from_bits(((-1000i64 + 1023) as u64) << 52);
        e += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * f64::from_bits(((e + 1023) as u64) << 52)
}

/// `atan(1/x) · 2^wp` by the alternating Gregory series.
fn atan_inv_fixed(x: u32, wp: u32) -> BigInt {
    let x2 = BigInt::from(x as u64 * x as u64);
    let mut term = (BigInt::one() << wp) / x;
    let mut sum = term.clone();
    let mut i = 1u64;
    loop {
        term /= &x2;
        let t = &term / (2 * i + 1);
        if t.is_zero() {
            break;
        }
        if i % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        i += 1;
    }
    sum
}

/// `atanh(1/x) · 2^wp`.
fn atanh_inv_fixed(x: u32, wp: u32) -> BigInt {
    let x2 = BigInt::from(x as u64 * x as u64);
    let mut term = (BigInt::one() << wp) / x;
    let mut sum = term.clone();
    let mut i = 1u64;
    loop {
        term /= &x2;
        let t = &term / (2 * i + 1);
        if t.is_zero() {
            break;
        }
        sum += t;
        i += 1;
    }
    sum
}

fn add_impl(a: &BigReal, b: &BigReal, negate_b: bool) -> BigReal {
    let prec = a.prec.max(b.prec);
    if b.is_zero() {
        return a.with_prec(prec);
    }
    let bm = if negate_b { -&b.mant } else { b.mant.clone() };
    if a.is_zero() {
        return BigReal::raw(bm, b.exp, prec);
    }
    let top = (a.exp + bits_of(&a.mant)).max(b.exp + bits_of(&b.mant));
    let lo = a.exp.min(b.exp).max(top - prec as i64 - 8);
    let am = shift(&a.mant, a.exp - lo);
    let bm = shift(&bm, b.exp - lo);
    BigReal::raw(am + bm, lo, prec)
}

fn mul_impl(a: &BigReal, b: &BigReal) -> BigReal {
    let prec = a.prec.max(b.prec);
    BigReal::raw(&a.mant * &b.mant, a.exp + b.exp, prec)
}

fn div_impl(a: &BigReal, b: &BigReal) -> BigReal {
    assert!(!b.is_zero(), "BigReal division by zero");
    let prec = a.prec.max(b.prec);
    if a.is_zero() {
        return BigReal::zero(prec);
    }
    let s = (prec as i64 + 4 + bits_of(&b.mant) - bits_of(&a.mant)).max(0);
    let q = (&a.mant << (s as u64)) / &b.mant;
    BigReal::raw(q, a.exp - s - b.exp, prec)
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &'a BigReal) -> BigReal {
                $body(self, rhs)
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                $body(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &'a BigReal) -> BigReal {
                $body(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| add_impl(a, b, false));
forward_binop!(Sub, sub, |a, b| add_impl(a, b, true));
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f
            .precision()
            .unwrap_or(((self.prec as f64) * core::f64::consts::LOG10_2) as usize);
        f.write_str(&self.to_decimal_string(sig.max(1)))
    }
}

/// Product of a slice of values at the precision of the first one.
pub fn product(values: &[BigReal]) -> Option<BigReal> {
    let mut it = values.iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, v| &acc * v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> BigReal {
        BigReal::parse_decimal(s, 256).unwrap()
    }

    #[test]
    fn pi_digits() {
        let pi = BigReal::pi(256);
        assert_eq!(
            pi.to_decimal_string(60),
            "3.14159265358979323846264338327950288419716939937510582097494"
        );
    }

    #[test]
    fn ln2_and_e() {
        assert_eq!(
            BigReal::ln2(200).to_decimal_string(40),
            "0.6931471805599453094172321214581765680755"
        );
        assert_eq!(
            BigReal::one(200).exp().to_decimal_string(40),
            "2.718281828459045235360287471352662497757"
        );
    }

    #[test]
    fn exp_ln_inverse() {
        for s in [
            "0.001",
            "0.5",
            "1",
            "3.75",
            "123.456",
            "1e-30",
            "98765.4321",
        ] {
            let x = r(s);
            let y = x.ln().unwrap().exp();
            assert!(y.rel_diff(&x).abs_lt_pow2(-248), "{s}");
        }
        let x = r("-17.25");
        let y = x.exp().ln().unwrap();
        assert!((&y - &x).abs_lt_pow2(-245));
    }

    #[test]
    fn sqrt_and_root() {
        let two = BigReal::from_i64(2, 256);
        let s = two.sqrt().unwrap();
        assert!((&(&s * &s) - &two).abs_lt_pow2(-253));
        let c = BigReal::from_i64(27, 256).root(3).unwrap();
        assert!((&c - &BigReal::from_i64(3, 256)).abs_lt_pow2(-250));
        assert_eq!(
            BigReal::from_i64(-1, 64).sqrt(),
            Err(Error::NegativeRadicand)
        );
    }

    #[test]
    fn sin_values() {
        let pi = BigReal::pi(256);
        let half = BigReal::from_i64(1, 256).mul_pow2(-1);
        let s = (&pi / &BigReal::from_i64(6, 256)).sin();
        assert!((&s - &half).abs_lt_pow2(-250));
        let s = (&pi * &BigReal::from_i64(7, 256) / BigReal::from_i64(6, 256)).sin();
        assert!((&s + &half).abs_lt_pow2(-250));
    }

    #[test]
    fn decimal_roundtrip_and_format() {
        assert_eq!(r("0.0125").to_decimal_string(3), "0.0125");
        assert_eq!(r("-12345.678").to_decimal_string(6), "-12345.7");
        assert_eq!(r("1e-20").to_decimal_string(2), "1.0e-20");
        assert_eq!(r("2.5e30").to_sci_string(2), "2.5e30");
        assert_eq!(BigReal::from_i64(100, 64).to_decimal_string(5), "100.00");
        assert!(BigReal::parse_decimal("1.2.3", 64).is_err());
        assert!(BigReal::parse_decimal("", 64).is_err());
    }

    #[test]
    fn ordering_is_exact() {
        let a = BigReal::from_i64(1, 512);
        let b = &a + &BigReal::from_i64(1, 512).mul_pow2(-400);
        assert!(b > a);
        assert!(-&b < -&a);
        assert_eq!(a, BigReal::from_i64(1, 64));
    }

    #[test]
    fn to_f64_matches() {
        assert_eq!(r("0.1").to_f64(), 0.1);
        assert_eq!(r("-3.5e100").to_f64(), -3.5e100);
        assert_eq!(BigReal::from_f64(0.3, 53).to_f64(), 0.3);
    }

    #[test]
    fn pow_integer() {
        let x = r("1.5");
        assert!((&x.pow_i64(10).unwrap() - &r("57.6650390625")).abs_lt_pow2(-240));
        assert!((&x.pow_i64(-2).unwrap()
            - &(BigReal::from_i64(4, 256) / BigReal::from_i64(9, 256)))
            .abs_lt_pow2(-250));
    }
}
