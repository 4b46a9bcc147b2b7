//! Closed-form expressions, integer polynomials, and minimal-polynomial
//! recovery by integral LLL reduction.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bigreal::BigReal;
use crate::error::{domain, Error, Result};

/// Expression tree over the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedFormExpr {
    Int(BigInt),
    Add(Box<ClosedFormExpr>, Box<ClosedFormExpr>),
    Sub(Box<ClosedFormExpr>, Box<ClosedFormExpr>),
    Mul(Box<ClosedFormExpr>, Box<ClosedFormExpr>),
    Div(Box<ClosedFormExpr>, Box<ClosedFormExpr>),
    Neg(Box<ClosedFormExpr>),
    Sqrt(Box<ClosedFormExpr>),
    Pow(Box<ClosedFormExpr>, i64),
}

use ClosedFormExpr as E;

impl ClosedFormExpr {
    pub fn int(v: i64) -> Self {
        E::Int(BigInt::from(v))
    }

    pub fn sqrt(self) -> Self {
        E::Sqrt(Box::new(self))
    }

    pub fn pow(self, k: i64) -> Self {
        E::Pow(Box::new(self), k)
    }

    pub fn depth(&self) -> u32 {
        match self {
            E::Int(_) => 0,
            E::Neg(a) | E::Sqrt(a) | E::Pow(a, _) => 1 + a.depth(),
            E::Add(a, b) | E::Sub(a, b) | E::Mul(a, b) | E::Div(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Value at `prec` bits. The working precision absorbs up to 64 bits of
    /// cancellation on top of `8·depth`.
    pub fn eval(&self, prec: u32) -> Result<BigReal> {
        let wp = prec + 8 * self.depth() + 64;
        Ok(self.eval_at(wp)?.with_prec(prec))
    }

    fn eval_at(&self, wp: u32) -> Result<BigReal> {
        Ok(match self {
            E::Int(v) => BigReal::from_bigint(v, wp),
            E::Add(a, b) => &a.eval_at(wp)? + &b.eval_at(wp)?,
            E::Sub(a, b) => &a.eval_at(wp)? - &b.eval_at(wp)?,
            E::Mul(a, b) => &a.eval_at(wp)? * &b.eval_at(wp)?,
            E::Div(a, b) => a.eval_at(wp)?.checked_div(&b.eval_at(wp)?)?,
            E::Neg(a) => -&a.eval_at(wp)?,
            E::Sqrt(a) => a.eval_at(wp)?.sqrt()?,
            E::Pow(a, k) => a.eval_at(wp)?.pow_i64(*k)?,
        })
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $v:ident) => {
        impl core::ops::$tr for ClosedFormExpr {
            type Output = ClosedFormExpr;
            fn $f(self, rhs: ClosedFormExpr) -> ClosedFormExpr {
                E::$v(Box::new(self), Box::new(rhs))
            }
        }
    };
}
binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl core::ops::Neg for ClosedFormExpr {
    type Output = ClosedFormExpr;
    fn neg(self) -> ClosedFormExpr {
        E::Neg(Box::new(self))
    }
}

/// Prefix notation, e.g. `(pow (sub (sqrt 2) 1) 2)`.
impl fmt::Display for ClosedFormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            E::Int(v) => write!(f, "{v}"),
            E::Add(a, b) => write!(f, "(add {a} {b})"),
            E::Sub(a, b) => write!(f, "(sub {a} {b})"),
            E::Mul(a, b) => write!(f, "(mul {a} {b})"),
            E::Div(a, b) => write!(f, "(div {a} {b})"),
            E::Neg(a) => write!(f, "(neg {a})"),
            E::Sqrt(a) => write!(f, "(sqrt {a})"),
            E::Pow(a, k) => write!(f, "(pow {a} {k})"),
        }
    }
}

fn tokenize(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some(st) = start.take() {
                out.push(&s[st..i]);
            }
            if !c.is_whitespace() {
                out.push(&s[i..i + 1]);
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push(&s[st..]);
    }
    out
}

struct Parser<'a> {
    toks: Vec<&'a str>,
    pos: usize,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl<'a> Parser<'a> {
    fn next(&mut self) -> Result<&'a str> {
        let t = self
            .toks
            .get(self.pos)
            .copied()
            .ok_or_else(|| parse_err("unexpected end"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expr(&mut self) -> Result<ClosedFormExpr> {
        let t = self.next()?;
        if t == ")" {
            return Err(parse_err("unexpected ')'"));
        }
        if t != "(" {
            let v: BigInt = t
                .parse()
                .map_err(|_| parse_err(alloc::format!("bad integer {t:?}")))?;
            return Ok(E::Int(v));
        }
        let op = self.next()?;
        let e = match op {
            "add" | "mul" => {
                let mut acc = self.expr()?;
                while self.toks.get(self.pos) != Some(&")") {
                    let rhs = self.expr()?;
                    acc = if op == "add" { acc + rhs } else { acc * rhs };
                }
                acc
            }
            "sub" => {
                let a = self.expr()?;
                a - self.expr()?
            }
            "div" => {
                let a = self.expr()?;
                a / self.expr()?
            }
            "neg" => -self.expr()?,
            "sqrt" => self.expr()?.sqrt(),
            "pow" => {
                let a = self.expr()?;
                let k = self.next()?;
                let k: i64 = k
                    .parse()
                    .map_err(|_| parse_err(alloc::format!("bad exponent {k:?}")))?;
                a.pow(k)
            }
            other => return Err(parse_err(alloc::format!("unknown operator {other:?}"))),
        };
        if self.next()? != ")" {
            return Err(parse_err(alloc::format!("too many operands for {op}")));
        }
        Ok(e)
    }
}

impl FromStr for ClosedFormExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            toks: tokenize(s),
            pos: 0,
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(parse_err("trailing input"));
        }
        Ok(e)
    }
}

/// Integer polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Primitive, positive leading coefficient. Fails on the zero polynomial.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        let mut c = coeffs;
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        if c.is_empty() {
            return Err(domain!("zero polynomial"));
        }
        let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let sign = if c.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let g = g * sign;
        Ok(IntPoly {
            coeffs: c.into_iter().map(|x| x / &g).collect(),
        })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    /// `xᵈ p(1/x)`, normalized.
    pub fn reversed(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c).expect("nonzero")
    }

    pub fn eval(&self, x: &BigReal) -> BigReal {
        let p = x.prec();
        self.coeffs.iter().rev().fold(BigReal::zero(p), |acc, c| {
            &(&acc * x) + &BigReal::from_bigint(c, p)
        })
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if !mag.is_one() || i == 0 {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Monic with constant term `±1`.
pub fn is_unit_poly(p: &IntPoly) -> bool {
    p.leading().is_one() && p.coeffs[0].abs().is_one()
}

/// Integral LLL with `δ = 3/4` (Cohen, Alg. 2.6.7) on linearly independent rows.
pub fn lll_reduce(basis: &mut [Vec<BigInt>]) -> Result<()> {
    let n = basis.len();
    if n < 2 {
        return Ok(());
    }
    let dot = |a: &[BigInt], b: &[BigInt]| -> BigInt { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    // d[i] holds Cohen's d_i for i = 0..=n; lam[k][j] for j < k, 0-based rows.
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[0] = BigInt::one();
    d[1] = dot(&basis[0], &basis[0]);
    let mut k = 1usize;
    let mut kmax = 0usize;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&basis[k], &basis[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(domain!("lattice basis is linearly dependent"));
                    }
                    d[k + 1] = u;
                }
            }
        }
        loop {
            redi(basis, &mut lam, &d, k, k - 1);
            let lhs = BigInt::from(4) * &d[k + 1] * &d[k - 1];
            let rhs =
                BigInt::from(3) * &d[k] * &d[k] - BigInt::from(4) * &lam[k][k - 1] * &lam[k][k - 1];
            if lhs < rhs {
                swapi(basis, &mut lam, &mut d, k, kmax);
                if k > 1 {
                    k -= 1;
                }
            } else {
                break;
            }
        }
        for l in (0..k.saturating_sub(1)).rev() {
            redi(basis, &mut lam, &d, k, l);
        }
        k += 1;
    }
    Ok(())
}

fn redi(basis: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    let two_lam: BigInt = &lam[k][l] * 2;
    if two_lam.abs() <= d[l + 1] {
        return;
    }
    let den = &d[l + 1] * 2;
    let q = Integer::div_floor(&(two_lam + &d[l + 1]), &den);
    let (lo, hi) = basis.split_at_mut(k);
    for (bk, bl) in hi[0].iter_mut().zip(&lo[l]) {
        *bk -= &q * bl;
    }
    lam[k][l] -= &q * &d[l + 1];
    let (above, below) = lam.split_at_mut(k);
    for (ki, li) in below[0].iter_mut().zip(&above[l]).take(l) {
        *ki -= &q * li;
    }
}

#[allow(clippy::needless_range_loop)]
fn swapi(
    basis: &mut [Vec<BigInt>],
    lam: &mut [Vec<BigInt>],
    d: &mut [BigInt],
    k: usize,
    kmax: usize,
) {
    basis.swap(k, k - 1);
    for j in 0..k - 1 {
        let t = core::mem::take(&mut lam[k][j]);
        lam[k][j] = core::mem::replace(&mut lam[k - 1][j], t);
    }
    let l = lam[k][k - 1].clone();
    let b = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
    for i in k + 1..=kmax {
        let t = lam[i][k].clone();
        lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
        lam[i][k - 1] = (&b * &t + &l * &lam[i][k]) / &d[k + 1];
    }
    d[k] = b;
}

/// Lowest-degree integer polynomial vanishing at `x`.
///
/// The lattice uses the leading `prec` bits of `x`; candidates are then
/// re-checked against the full value, so `x` must carry at least `2·prec` bits.
pub fn min_poly(x: &BigReal, max_deg: usize, prec: u32) -> Result<IntPoly> {
    if x.prec() < 2 * prec {
        return Err(domain!(
            "min_poly at {prec} bits needs x to {} bits, got {}",
            2 * prec,
            x.prec()
        ));
    }
    if x.is_zero() {
        return IntPoly::from_i64(&[0, 1]);
    }
    for deg in 1..=max_deg {
        if let Some(p) = candidate(x, deg, prec)? {
            if verify(&p, x) {
                return Ok(p);
            }
        }
    }
    Err(Error::NotFound(alloc::format!(
        "no polynomial of degree ≤ {max_deg} at {prec} bits"
    )))
}

fn candidate(x: &BigReal, deg: usize, prec: u32) -> Result<Option<IntPoly>> {
    let scale = prec.saturating_sub(16 * deg as u32).max(32);
    let xp = x.with_prec(prec + 64);
    let mut basis = Vec::with_capacity(deg + 1);
    let mut pw = BigReal::one(prec + 64);
    for i in 0..=deg {
        let mut row = vec![BigInt::zero(); deg + 2];
        row[i] = BigInt::one();
        row[deg + 1] = pw.to_fixed(scale);
        basis.push(row);
        pw = &pw * &xp;
    }
    lll_reduce(&mut basis)?;
    let coeffs: Vec<BigInt> = basis[0][..=deg].to_vec();
    if coeffs[deg].is_zero() {
        return Ok(None);
    }
    Ok(Some(IntPoly::new(coeffs)?))
}

/// `|p(x)| ≤ 2^{−3Q/4}·‖p‖∞·max(1,|x|)^deg` at the full precision `Q` of `x`.
fn verify(p: &IntPoly, x: &BigReal) -> bool {
    let q = x.prec();
    let v = p.eval(&x.with_prec(q + 32)).abs();
    let mag = x.ilog2().unwrap_or(0).max(0) * p.degree() as i64;
    let bound = -(3 * q as i64 / 4) + p.max_coeff_bits() as i64 + mag;
    v.abs_lt_pow2(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn parse(s: &str) -> ClosedFormExpr {
        s.parse().unwrap()
    }

    #[test]
    fn parse_print_roundtrip() {
        for s in [
            "(pow (sub (sqrt 2) 1) 2)",
            "(mul (sub (mul 16 (sqrt 23)) (mul 29 (sqrt 7))) (sub (mul 58 (sqrt 2)) (mul 31 (sqrt 7))))",
            "(div (neg 3) (pow 5 -2))",
        ] {
            assert_eq!(parse(s).to_string(), s);
        }
        assert_eq!(parse("(add 1 2 3)").to_string(), "(add (add 1 2) 3)");
        assert!("(pow 2)".parse::<ClosedFormExpr>().is_err());
        assert!("(frob 2)".parse::<ClosedFormExpr>().is_err());
        assert!("(sqrt 2) 3".parse::<ClosedFormExpr>().is_err());
    }

    #[test]
    fn eval_examples() {
        let v = parse("(pow (sub (sqrt 2) 1) 2)").eval(256).unwrap();
        let w = parse("(sub 3 (mul 2 (sqrt 2)))").eval(256).unwrap();
        assert!((&v - &w).abs_lt_pow2(-250));
        assert!(parse("(sub 1 1)").eval(64).unwrap().is_zero());
        let v = parse("(mul (sub (sqrt 10) 3) (add (sqrt 10) 3))")
            .eval(256)
            .unwrap();
        assert!((&v - &BigReal::one(256)).abs_lt_pow2(-250));
        assert_eq!(parse("(sqrt -2)").eval(64), Err(Error::NegativeRadicand));
        assert_eq!(
            parse("(div 1 (sub 2 2))").eval(64),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn poly_normalization() {
        let p = IntPoly::from_i64(&[2, 0, -4, 0]).unwrap();
        assert_eq!(p.to_string(), "2x^2 - 1");
        assert_eq!(
            IntPoly::from_i64(&[1, -6, 1]).unwrap().to_string(),
            "x^2 - 6x + 1"
        );
        assert!(IntPoly::from_i64(&[0, 0]).is_err());
    }

    #[test]
    fn unit_polys() {
        assert!(is_unit_poly(&IntPoly::from_i64(&[1, -6, 1]).unwrap()));
        assert!(!is_unit_poly(&IntPoly::from_i64(&[-2, 0, 1]).unwrap()));
        assert!(is_unit_poly(&IntPoly::from_i64(&[-1, 1]).unwrap()));
    }

    #[test]
    fn recognizes_quadratics() {
        let s2 = BigReal::from_i64(2, 512).sqrt().unwrap();
        assert_eq!(
            min_poly(&s2, 4, 256).unwrap(),
            IntPoly::from_i64(&[-2, 0, 1]).unwrap()
        );
        let b = parse("(pow (sub (sqrt 2) 1) 2)").eval(512).unwrap();
        assert_eq!(
            min_poly(&b, 4, 256).unwrap(),
            IntPoly::from_i64(&[1, -6, 1]).unwrap()
        );
        assert!(min_poly(&b, 4, 300).is_err());
    }

    #[test]
    fn rejects_transcendental() {
        let pi = BigReal::pi(512);
        assert!(matches!(min_poly(&pi, 3, 256), Err(Error::NotFound(_))));
    }
}
