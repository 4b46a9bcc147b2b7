//! Quadratic discriminants, binary quadratic forms, class numbers, genus
//! characters and fundamental units.
//!
//! Forms are `ax² + bxy + cy²` with discriminant `b² − 4ac`.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bigreal::BigReal;
use crate::error::{domain, Error, Result};

/// A quadratic discriminant: nonzero, `≡ 0, 1 (mod 4)`, not a square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Disc {
    d: i64,
    fundamental: bool,
}

impl Disc {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d.rem_euclid(4) > 1 {
            return Err(domain!("{d} is not a discriminant"));
        }
        if d > 0 && Roots::sqrt(&(d as u64)).pow(2) == d as u64 {
            return Err(domain!("{d} is a square"));
        }
        Ok(Disc {
            d,
            fundamental: is_fundamental(d),
        })
    }

    /// Like [`Disc::new`] but also requires a fundamental discriminant.
    pub fn fundamental(d: i64) -> Result<Self> {
        let disc = Self::new(d)?;
        if !disc.fundamental {
            return Err(domain!("{d} is not a fundamental discriminant"));
        }
        Ok(disc)
    }

    pub fn value(&self) -> i64 {
        self.d
    }

    pub fn is_fundamental(&self) -> bool {
        self.fundamental
    }

    pub fn is_negative(&self) -> bool {
        self.d < 0
    }

    /// Squarefree `D` with `Q(√d) = Q(√D)`, for fundamental `d`.
    pub fn radicand(&self) -> i64 {
        if self.d.rem_euclid(4) == 0 {
            self.d / 4
        } else {
            self.d
        }
    }

    /// Number of roots of unity in `Q(√d)`.
    pub fn roots_of_unity(&self) -> u32 {
        match self.d {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }
}

impl fmt::Display for Disc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.d)
    }
}

fn squarefree(n: u64) -> bool {
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Prime factorization of `n > 0` as `(p, e)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The Kronecker symbol `(a|n)` for `n ≥ 1`.
pub fn kronecker_symbol(a: i64, n: u64) -> i32 {
    if n == 0 {
        return if a.unsigned_abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result = 1i32;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if tz % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
        n >>= tz;
    }
    // Jacobi symbol (a mod n | n) for odd n.
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t % 2 == 1 && matches!(n % 8, 3 | 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        core::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// A binary quadratic form `ax² + bxy + cy²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        QForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// Reducedness of a positive definite form.
    pub fn is_reduced(&self) -> bool {
        self.a > 0
            && self.b.abs() <= self.a
            && self.a <= self.c
            && (self.b >= 0 || (self.b.abs() != self.a && self.a != self.c))
    }

    /// The reduced form equivalent to a positive definite form.
    pub fn reduce(&self) -> Result<QForm> {
        if self.discriminant() >= 0 || self.a <= 0 {
            return Err(domain!("reduction needs a positive definite form"));
        }
        let (mut a, mut b, mut c) = (self.a, self.b, self.c);
        loop {
            if b > a || b <= -a {
                // translate b into (−a, a]
                let k = Integer::div_floor(&(a - b), &(2 * a));
                let nb = b + 2 * k * a;
                c += k * (b + k * a);
                b = nb;
            }
            if a > c {
                core::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            return Ok(QForm { a, b, c });
        }
    }
}

impl fmt::Display for QForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// One reduced primitive form per class of discriminant `d < 0`, sorted.
pub fn reduced_forms(d: Disc) -> Result<Vec<QForm>> {
    let d = d.value();
    if d > 0 {
        return Err(domain!("reduced_forms needs d < 0, got {d}"));
    }
    let n = -d;
    let mut out = Vec::new();
    let amax = Roots::sqrt(&((n / 3) as u64)) as i64 + 1;
    for a in 1..=amax {
        for b in -a + 1..=a {
            if (b * b + n) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b + n) / (4 * a);
            let f = QForm { a, b, c };
            if c >= a && f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The fundamental unit `x + y√D > 1`, with `x, y` halves of integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadUnit {
    /// Squarefree positive radicand.
    pub radicand: i64,
    /// `2x`.
    pub x2: BigInt,
    /// `2y`.
    pub y2: BigInt,
    /// `x² − Dy²`, either `1` or `−1`.
    pub norm: i32,
}

impl QuadUnit {
    /// `x² − Dy²` evaluated exactly.
    pub fn exact_norm(&self) -> BigInt {
        (&self.x2 * &self.x2 - BigInt::from(self.radicand) * &self.y2 * &self.y2) / 4
    }

    pub fn to_bigreal(&self, prec: u32) -> BigReal {
        let wp = prec + 16 + self.y2.bits() as u32;
        let s = BigReal::from_i64(self.radicand, wp)
            .sqrt()
            .expect("positive radicand");
        let v = &BigReal::from_bigint(&self.x2, wp) + &(&BigReal::from_bigint(&self.y2, wp) * &s);
        v.mul_pow2(-1).with_prec(prec)
    }

    /// `ln ε` at `prec` bits.
    pub fn ln(&self, prec: u32) -> BigReal {
        self.to_bigreal(prec + 8)
            .ln()
            .expect("unit > 1")
            .with_prec(prec)
    }
}

fn fmt_half(v: &BigInt, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if v.is_even() {
        write!(f, "{}", v / 2)
    } else {
        write!(f, "{v}/2")
    }
}

impl fmt::Display for QuadUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_half(&self.x2, f)?;
        f.write_str("+")?;
        if self.y2 != BigInt::from(2) {
            fmt_half(&self.y2, f)?;
        }
        write!(f, "√{}", self.radicand)
    }
}

/// Fundamental unit of `Q(√d)` from the continued fraction of `(d mod 2 + √d)/2`.
pub fn fundamental_unit(d: Disc) -> Result<QuadUnit> {
    let dv = d.value();
    if dv <= 0 || !d.is_fundamental() {
        return Err(domain!(
            "fundamental_unit needs a positive fundamental discriminant"
        ));
    }
    let p0 = dv.rem_euclid(2);
    let sq = Roots::sqrt(&(dv as u64)) as i64;
    let c0 = BigInt::from((p0 * p0 - dv) / 4);
    let (mut pp, mut p) = (BigInt::zero(), BigInt::one());
    let (mut qp, mut q) = (BigInt::one(), BigInt::zero());
    // ω = (P + √d)/Q
    let (mut pn, mut qn) = (p0, 2i64);
    loop {
        let a = Integer::div_floor(&(pn + sq), &qn);
        let np = &p * a + &pp;
        let nq = &q * a + &qp;
        pp = core::mem::replace(&mut p, np);
        qp = core::mem::replace(&mut q, nq);
        let norm = &p * &p - &p * &q * p0 + &c0 * &q * &q;
        if norm.abs().is_one() {
            let x2 = &p * 2 - &q * p0;
            let (x2, y2) = if dv % 4 == 0 {
                (x2, &q * 2)
            } else {
                (x2, q.clone())
            };
            return Ok(QuadUnit {
                radicand: d.radicand(),
                x2,
                y2,
                norm: norm.to_i32().expect("±1"),
            });
        }
        pn = a * qn - pn;
        qn = (dv - pn * pn) / qn;
    }
}

/// Class number of a fundamental discriminant: reduced-form count for
/// `d < 0`, the analytic formula (wide class number) for `d > 0`.
pub fn class_number(d: Disc) -> Result<u64> {
    if d.is_negative() {
        return Ok(reduced_forms(d)?.len() as u64);
    }
    if !d.is_fundamental() {
        return Err(domain!(
            "real class numbers need a fundamental discriminant"
        ));
    }
    match analytic_real_class_number(d, 80) {
        Err(Error::PrecisionExhausted(_)) => analytic_real_class_number(d, 160),
        r => r,
    }
}

/// `h = −∑_{0<a<d} χ(a) ln sin(πa/d) / (2 ln ε)`.
pub fn analytic_real_class_number(d: Disc, prec: u32) -> Result<u64> {
    let dv = d.value();
    let eps = fundamental_unit(d)?;
    let wp = prec + 64 - (dv as u64).leading_zeros();
    let pi = BigReal::pi(wp);
    let dd = BigReal::from_i64(dv, wp);
    let mut acc = BigReal::zero(wp);
    // χ is even for d > 0, so fold a and d − a
    for a in 1..=(dv - 1) / 2 {
        let chi = kronecker_symbol(dv, a as u64);
        if chi == 0 {
            continue;
        }
        let s = (&(&pi * &BigReal::from_i64(a, wp)) / &dd).sin();
        let l = s.ln()?;
        acc = if chi > 0 { &acc - &l } else { &acc + &l };
    }
    let h = &acc / &eps.ln(wp);
    let r = h.round_to_bigint();
    let err = (&h - &BigReal::from_bigint(&r, wp)).abs();
    if !err.abs_lt_pow2(-2) || !r.is_positive() {
        return Err(Error::PrecisionExhausted(alloc::format!(
            "analytic class number of {dv} is not near an integer"
        )));
    }
    Ok(r.to_u64().expect("small class number"))
}

/// `h = −(w/(2|d|)) ∑_{0<a<|d|} χ(a)·a` for fundamental `d < 0`.
pub fn analytic_imag_class_number(d: Disc) -> Result<u64> {
    let dv = d.value();
    if dv >= 0 || !d.is_fundamental() {
        return Err(domain!("needs a negative fundamental discriminant"));
    }
    let n = -dv;
    let s: i64 = (1..n)
        .map(|a| kronecker_symbol(dv, a as u64) as i64 * a)
        .sum();
    let num = -(d.roots_of_unity() as i64) * s;
    if num <= 0 || num % (2 * n) != 0 {
        return Err(Error::Consistency(alloc::format!(
            "character sum for {dv} is {s}"
        )));
    }
    Ok((num / (2 * n)) as u64)
}

/// Prime discriminants whose product is the fundamental discriminant `d`.
pub fn prime_discriminants(d: Disc) -> Result<Vec<i64>> {
    if !d.is_fundamental() {
        return Err(domain!("{d} is not fundamental"));
    }
    let dv = d.value();
    let mut out = Vec::new();
    let mut rest = dv;
    for (p, _) in factorize(dv.unsigned_abs()) {
        if p == 2 {
            continue;
        }
        let p = p as i64;
        let star = if p % 4 == 1 { p } else { -p };
        out.push(star);
        rest /= star;
    }
    if rest != 1 {
        out.push(rest);
    }
    out.sort();
    Ok(out)
}

/// All `(d1, d2)` with `d1·d2 = d`, `d1 > 0` a product of prime
/// discriminants of `d`; includes `(1, d)`. Sorted by `d1`.
pub fn decomposition_pairs(d: Disc) -> Result<Vec<(i64, i64)>> {
    if d.value() >= 0 {
        return Err(domain!("decompositions need d < 0"));
    }
    let primes = prime_discriminants(d)?;
    let mut out = Vec::new();
    for mask in 0u32..(1 << primes.len()) {
        let d1: i64 = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| *p)
            .product();
        if d1 > 0 {
            out.push((d1, d.value() / d1));
        }
    }
    out.sort();
    Ok(out)
}

/// A factorization `d = d1·d2` of a negative discriminant with its class-field data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub d1: i64,
    pub d2: i64,
    pub h1: u64,
    pub h2: u64,
    pub w2: u32,
    /// Fundamental unit of `Q(√d1)`; `None` for the trivial factor `d1 = 1`.
    pub eps: Option<QuadUnit>,
}

impl Decomposition {
    pub fn is_trivial(&self) -> bool {
        self.d1 == 1
    }
}

pub fn decompositions(d: Disc) -> Result<Vec<Decomposition>> {
    decomposition_pairs(d)?
        .into_iter()
        .map(|(d1, d2)| enrich(d1, d2))
        .collect()
}

/// Class-field data for a single pair.
pub fn enrich(d1: i64, d2: i64) -> Result<Decomposition> {
    let disc2 = Disc::fundamental(d2)?;
    let (h1, eps) = if d1 == 1 {
        (1, None)
    } else {
        let disc1 = Disc::fundamental(d1)?;
        (class_number(disc1)?, Some(fundamental_unit(disc1)?))
    };
    Ok(Decomposition {
        d1,
        d2,
        h1,
        h2: class_number(disc2)?,
        w2: disc2.roots_of_unity(),
        eps,
    })
}

/// The primitive ideal `[a, b + Ω]`, with `Ω = √(d/4)` for `d ≡ 0 (mod 4)`
/// and `Ω = (1 + √d)/2` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdealBasis {
    pub a: i64,
    pub b: i64,
}

/// Form `N(ax + (b+Ω)y)/a` attached to an ideal.
pub fn ideal_to_form(ideal: IdealBasis, d: Disc) -> Result<QForm> {
    let dv = d.value();
    let IdealBasis { a, b } = ideal;
    if a <= 0 {
        return Err(domain!("ideal norm must be positive"));
    }
    let (mid, norm) = if dv.rem_euclid(4) == 0 {
        (2 * b, b * b - dv / 4)
    } else {
        (2 * b + 1, b * b + b + (1 - dv) / 4)
    };
    if norm % a != 0 {
        return Err(domain!("{a} does not divide the norm {norm} of {b}+Ω"));
    }
    Ok(QForm::new(a, mid, norm / a))
}

const CHARACTER_WINDOWS: [i64; 3] = [8, 32, 128];

/// Genus character `χ(f) = (d1|r)` for any `r` represented by `f` prime to `d1`.
pub fn genus_character(d1: i64, f: &QForm) -> Result<i32> {
    if d1 == 1 {
        return Ok(1);
    }
    for w in CHARACTER_WINDOWS {
        if let Some(r) = coprime_value(f, d1, w) {
            return Ok(kronecker_symbol(d1, r as u64));
        }
    }
    Err(Error::SearchExhausted(alloc::format!(
        "no value of {f} prime to {d1}"
    )))
}

/// Smallest positive value of `f` on `|x|, |y| ≤ w` prime to `m`.
pub fn coprime_value(f: &QForm, m: i64, w: i64) -> Option<i64> {
    let mut best: Option<i64> = None;
    for x in -w..=w {
        for y in -w..=w {
            let r = f.eval(x, y);
            if r > 0 && r.gcd(&m) == 1 && best.map_or(true, |b| r < b) {
                best = Some(r);
            }
        }
    }
    best
}

/// `(number of genera, classes per genus)`. For `d > 0` the count refers to
/// the narrow class group.
pub fn genera_structure(d: Disc) -> Result<(u64, u64)> {
    let mu = prime_discriminants(d)?.len() as u32;
    let genera = 1u64 << (mu - 1);
    let h = if d.is_negative() {
        class_number(d)?
    } else {
        narrow_class_number(d)?
    };
    if h % genera != 0 {
        return Err(Error::Consistency(alloc::format!(
            "h = {h} is not divisible by {genera} genera"
        )));
    }
    Ok((genera, h / genera))
}

/// `h⁺ = h` if the fundamental unit has norm `−1`, else `2h`.
pub fn narrow_class_number(d: Disc) -> Result<u64> {
    let h = class_number(d)?;
    if d.is_negative() || fundamental_unit(d)?.norm < 0 {
        Ok(h)
    } else {
        Ok(2 * h)
    }
}

/// Per-discriminant summary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassData {
    pub d: Disc,
    pub h: u64,
    /// Empty for `d > 0`.
    pub reduced_forms: Vec<QForm>,
    pub num_genera: u64,
    pub classes_per_genus: u64,
    pub w: u32,
    /// `Some` for `d > 0`.
    pub unit: Option<QuadUnit>,
}

impl ClassData {
    pub fn compute(d: Disc) -> Result<Self> {
        if !d.is_fundamental() {
            return Err(domain!("{d} is not fundamental"));
        }
        let (reduced, unit) = if d.is_negative() {
            (reduced_forms(d)?, None)
        } else {
            (Vec::new(), Some(fundamental_unit(d)?))
        };
        let (num_genera, classes_per_genus) = genera_structure(d)?;
        Ok(ClassData {
            d,
            h: class_number(d)?,
            reduced_forms: reduced,
            num_genera,
            classes_per_genus,
            w: d.roots_of_unity(),
            unit,
        })
    }
}
