//! Class invariants `g_{7k}` and `g_{k/7}` from a closed form of `b_{k,7}`.
//!
//! With `r = g_{7k}/g_{k/7}`, `P = g_{7k}·g_{k/7}` and `x = r² + r⁻²`:
//!
//! ```text
//! b + 1/b = (x³ − 11x)/7
//! 2√2 (P³ + P⁻³) = r⁴ + r⁻⁴ − 7
//! ```

use crate::bigreal::BigReal;
use crate::derive;
use crate::error::{domain, Error, Result};
use crate::qseries::{class_invariant_numeric, InvariantKind, GUARD};
use crate::rational::PosRational;

/// Which root of each quadratic the outputs were taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `r > 1`, `P > 1`.
    Principal,
    /// Both roots inverted.
    Reciprocal,
}

#[derive(Clone, Debug)]
pub struct GnPair {
    pub k: u64,
    /// `g_{7k}`.
    pub big: BigReal,
    /// `g_{k/7}`.
    pub small: BigReal,
    pub ratio: BigReal,
    pub product: BigReal,
    pub x: BigReal,
    pub b: BigReal,
    pub branch: Branch,
    /// `max(|big − g_{7k}|, |small − g_{k/7}|)` against the q-series.
    pub certification: BigReal,
    /// Residual of the degree-7 modular equation on the outputs.
    pub modeq_residual: BigReal,
}

fn cubic(x: &BigReal, rhs: &BigReal) -> BigReal {
    let p = x.prec();
    &(&(x * x) * x) - &(&(x * &BigReal::from_i64(11, p)) + rhs)
}

/// Root `x ≥ 2` of `x³ − 11x − 7(b + 1/b) = 0`.
pub fn solve_x_from_b(b: &BigReal, prec: u32) -> Result<BigReal> {
    let one = BigReal::one(prec);
    if !b.is_positive() || *b > one {
        return Err(domain!("b must lie in (0, 1]"));
    }
    let wp = prec + GUARD;
    let b = b.with_prec(wp);
    let rhs = &BigReal::from_i64(7, wp) * &(&b + &b.recip()?);
    // bracket [2, 3·max(2, rhs^{1/3})]; the cubic is increasing on it
    let mut lo = BigReal::from_i64(2, wp);
    let cr = rhs.root(3)?;
    let two = BigReal::from_i64(2, wp);
    let mut hi = &BigReal::from_i64(3, wp) * if cr > two { &cr } else { &two };
    if cubic(&lo, &rhs).is_positive() || cubic(&hi, &rhs).is_negative() {
        return Err(Error::Consistency("cubic root not bracketed".into()));
    }
    for _ in 0..64 {
        let mid = (&lo + &hi).mul_pow2(-1);
        if cubic(&mid, &rhs).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = (&lo + &hi).mul_pow2(-1);
    let three = BigReal::from_i64(3, wp);
    let eleven = BigReal::from_i64(11, wp);
    for _ in 0..64 {
        let f = cubic(&x, &rhs);
        let df = &(&three * &(&x * &x)) - &eleven;
        let step = &f / &df;
        x = &x - &step;
        if step.is_zero() || (&step / &x).abs_lt_pow2(-(wp as i64 - 4)) {
            break;
        }
    }
    Ok(x.with_prec(prec))
}

/// `r > 1` with `r² + r⁻² = x`.
pub fn ratio_from_x(x: &BigReal, prec: u32) -> Result<BigReal> {
    let wp = prec + GUARD;
    let x = x.with_prec(wp);
    let disc = &(&x * &x) - &BigReal::from_i64(4, wp);
    if disc.is_negative() {
        return Err(domain!("x < 2 has no real ratio"));
    }
    let r2 = (&x + &disc.sqrt()?).mul_pow2(-1);
    Ok(r2.sqrt()?.with_prec(prec))
}

/// `(r⁴ + r⁻⁴ − 7)/(2√2)`.
fn modeq_rhs(r: &BigReal, wp: u32) -> Result<BigReal> {
    let r4 = r.with_prec(wp).pow_i64(4)?;
    let s = &(&r4 + &r4.recip()?) - &BigReal::from_i64(7, wp);
    Ok(&s / &BigReal::from_i64(8, wp).sqrt()?)
}

/// The root `P ≥ 1` of `2√2(P³ + P⁻³) = r⁴ + r⁻⁴ − 7`.
pub fn solve_product_from_ratio(r: &BigReal, prec: u32) -> Result<BigReal> {
    let wp = prec + GUARD;
    if *r <= BigReal::one(prec) {
        return Err(domain!("ratio must exceed 1"));
    }
    let s = modeq_rhs(r, wp)?;
    let mut disc = &(&s * &s) - &BigReal::from_i64(4, wp);
    if disc.is_negative() {
        // S within rounding of 2 is the double root P = 1
        if !(&s - &BigReal::from_i64(2, wp)).abs_lt_pow2(-(prec as i64 - 8)) {
            return Err(domain!("(r⁴ + r⁻⁴ − 7)/(2√2) < 2"));
        }
        disc = BigReal::zero(wp);
    }
    let p3 = (&s + &disc.sqrt()?).mul_pow2(-1);
    Ok(p3.root(3)?.with_prec(prec))
}

/// `2√2(P³ + P⁻³) − (r⁴ + r⁻⁴ − 7)` for `P = g₁g₂`, `r = g₁/g₂`.
pub fn modular_equation_residual(g_big: &BigReal, g_small: &BigReal, prec: u32) -> Result<BigReal> {
    let wp = prec + GUARD;
    let (a, b) = (g_big.with_prec(wp), g_small.with_prec(wp));
    let p3 = (&a * &b).pow_i64(3)?;
    let lhs = &BigReal::from_i64(8, wp).sqrt()? * &(&p3 + &p3.recip()?);
    let r4 = (&a / &b).pow_i64(4)?;
    let rhs = &(&r4 + &r4.recip()?) - &BigReal::from_i64(7, wp);
    Ok((&lhs - &rhs).with_prec(prec))
}

/// From `b_{k,7}` to `(g_{7k}, g_{k/7})`, certified against the q-series.
///
/// `k` must be even with `(k/2, 7)` admissible for [`derive::derive_b`].
pub fn derive_gn_pipeline(k: u64, prec: u32) -> Result<GnPair> {
    if k % 2 != 0 {
        return Err(domain!("k = {k} must be even"));
    }
    let wp = prec + GUARD;
    let report = derive::derive_b(k / 2, 7, prec.min(256))?;
    let b = report.product.value(wp)?;
    let x = solve_x_from_b(&b, wp)?;
    let r = ratio_from_x(&x, wp)?;
    let pg = solve_product_from_ratio(&r, wp)?;
    let big0 = (&r * &pg).sqrt()?;
    let small0 = (&pg / &r).sqrt()?;
    let g_big = class_invariant_numeric(InvariantKind::SmallG, PosRational::integer(7 * k)?, wp)?;
    let g_small = class_invariant_numeric(InvariantKind::SmallG, PosRational::new(k, 7)?, wp)?;
    let tol = -(prec as i64 - 64);
    let mut worst = None;
    for branch in [Branch::Principal, Branch::Reciprocal] {
        let (big, small) = match branch {
            Branch::Principal => (big0.clone(), small0.clone()),
            Branch::Reciprocal => (big0.recip()?, small0.recip()?),
        };
        let err = {
            let e1 = (&big - &g_big).abs();
            let e2 = (&small - &g_small).abs();
            if e1 > e2 {
                e1
            } else {
                e2
            }
        };
        if err.abs_lt_pow2(tol) {
            let modeq_residual = modular_equation_residual(&big, &small, prec)?;
            return Ok(GnPair {
                k,
                ratio: (&big / &small).with_prec(prec),
                product: (&big * &small).with_prec(prec),
                big: big.with_prec(prec),
                small: small.with_prec(prec),
                x: x.with_prec(prec),
                b: b.with_prec(prec),
                branch,
                certification: err.with_prec(64),
                modeq_residual,
            });
        }
        worst = Some(err);
    }
    Err(Error::Consistency(alloc::format!(
        "g_{} and g_{k}/7 disagree with the q-series on both branches (2^{})",
        7 * k,
        worst.and_then(|e| e.ilog2()).unwrap_or(0)
    )))
}
