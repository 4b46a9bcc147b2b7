//! Euler products, Ramanujan's theta functions, the Dedekind eta function on
//! the imaginary axis, and the theta quotients `b_{m,n}`, `a_{m,n}`, `g_n`,
//! `G_n`.
//!
//! Every public function takes an output precision `P` and works internally
//! at `P + GUARD` bits; results are accurate to `2^-(P-32)` relative.
//!
//! Negative nomes are always handled through product forms, never by
//! alternating summation, e.g. `φ(−q) = (q;q²)²∞ (q²;q²)∞`. The summation forms
//! are exported only as independent cross-checks.

use crate::bigreal::BigReal;
use crate::error::{domain, Error, Result};
use crate::rational::PosRational;

/// Guard bits carried by every internal computation.
pub const GUARD: u32 = 32;

/// Bits of agreement required between independent routes: `P − 32`.
pub const ROUTE_TOLERANCE_GUARD: u32 = 32;

/// Product length above which a nome is considered too close to 1.
const MAX_TERMS: u64 = 2_000_000;

/// Which factor the class invariant uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InvariantKind {
    /// `g_n = 2^{-1/4} q^{-1/24} (q;q²)∞`
    SmallG,
    /// `G_n = 2^{-1/4} q^{-1/24} (−q;q²)∞`
    BigG,
}

/// Route used for `(q;q)∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EulerRoute {
    /// Pentagonal series when `q > 2^{-P/64}`, raw product otherwise.
    Auto,
    Pentagonal,
    Product,
}

/// The nome `q = e^{−π√(m/n)}` of `b_{m,n}`.
#[derive(Clone, Debug)]
pub struct Nome {
    pub m: PosRational,
    pub n: u32,
    /// `π√(m/n)`, i.e. `ln(1/q)`.
    pub log_inv: BigReal,
    pub q: BigReal,
}

impl Nome {
    pub fn new(m: PosRational, n: u32, prec: u32) -> Result<Self> {
        if n == 0 {
            return Err(domain!("n must be a positive integer"));
        }
        let ratio = m.div_int(n as u64)?;
        let log_inv = &BigReal::pi(prec) * &ratio.sqrt(prec);
        let q = (-&log_inv).exp();
        Ok(Nome { m, n, log_inv, q })
    }

    /// `q^k = e^{−k·π√(m/n)}` for a rational power `num/den`.
    pub fn power(&self, num: i64, den: i64) -> BigReal {
        let p = self.log_inv.prec();
        let k = &BigReal::from_i64(num, p) / &BigReal::from_i64(den, p);
        (-(&self.log_inv * &k)).exp()
    }
}

/// `log2(1/q)` to double precision, for term-count estimates.
fn log2_inv(q: &BigReal) -> f64 {
    let l = q.with_prec(64).ln().expect("q > 0");
    -l.to_f64() / core::f64::consts::LN_2
}

fn check_nome(q: &BigReal) -> Result<()> {
    let one = BigReal::one(q.prec());
    if !q.is_positive() || *q >= one {
        return Err(domain!("base q must lie in (0, 1)"));
    }
    Ok(())
}

/// Number of factors of `(a;q)∞` after which the tail is below `2^{-(bits+16)}`.
fn product_terms(a: &BigReal, q: &BigReal, bits: u32) -> Result<u64> {
    let lq = log2_inv(q);
    let one = BigReal::one(q.prec());
    let gap = (&one - q).ilog2().unwrap_or(0);
    let amag = a.ilog2().unwrap_or(0).max(0) as f64 + 1.0;
    let need = bits as f64 + 16.0 + (-gap) as f64 + 1.0 + amag;
    let k = need / lq + 2.0;
    if k.is_nan() || k >= MAX_TERMS as f64 {
        return Err(domain!(
            "q too close to 1: {k:.0} factors needed at {bits} bits"
        ));
    }
    Ok(k as u64)
}

/// `(a;q)∞ = ∏_{k≥1}(1 − a q^{k−1})` for `q ∈ (0,1)`.
pub fn qpochhammer_inf(a: &BigReal, q: &BigReal, prec: u32) -> Result<BigReal> {
    check_nome(q)?;
    let wp = prec + GUARD;
    Ok(qpoch_raw(a, q, wp)?.with_prec(prec))
}

fn qpoch_raw(a: &BigReal, q: &BigReal, wp: u32) -> Result<BigReal> {
    if a.is_zero() {
        return Ok(BigReal::one(wp));
    }
    let terms = product_terms(a, q, wp)?;
    let one = BigReal::one(wp);
    let q = q.with_prec(wp);
    let mut term = a.with_prec(wp);
    let mut acc = one.clone();
    for _ in 0..terms {
        acc = &acc * &(&one - &term);
        term = &term * &q;
    }
    Ok(acc)
}

fn check_unit_disc(q: &BigReal) -> Result<()> {
    if q.abs() >= BigReal::one(q.prec()) {
        return Err(domain!("|q| must be < 1"));
    }
    Ok(())
}

/// `φ(q) = ∑ q^{n²} = (−q;q²)²∞ (q²;q²)∞`, any real `|q| < 1`.
pub fn theta_phi(q: &BigReal, prec: u32) -> Result<BigReal> {
    check_unit_disc(q)?;
    if q.is_zero() {
        return Ok(BigReal::one(prec));
    }
    let wp = prec + GUARD;
    let q = q.with_prec(wp);
    let q2 = &q * &q;
    let a = qpoch_raw(&-&q, &q2, wp)?;
    let b = qpoch_raw(&q2, &q2, wp)?;
    Ok((&(&a * &a) * &b).with_prec(prec))
}

/// `φ(−q)`.
pub fn phi_neg(q: &BigReal, prec: u32) -> Result<BigReal> {
    theta_phi(&-q, prec)
}

/// `ψ(q) = ∑_{n≥0} q^{n(n+1)/2} = (q²;q²)∞ / (q;q²)∞`, any real `|q| < 1`.
pub fn theta_psi(q: &BigReal, prec: u32) -> Result<BigReal> {
    check_unit_disc(q)?;
    if q.is_zero() {
        return Ok(BigReal::one(prec));
    }
    let wp = prec + GUARD;
    let q = q.with_prec(wp);
    let q2 = &q * &q;
    let num = qpoch_raw(&q2, &q2, wp)?;
    let den = qpoch_raw(&q, &q2, wp)?;
    Ok((&num / &den).with_prec(prec))
}

/// `ψ(−q)`.
pub fn psi_neg(q: &BigReal, prec: u32) -> Result<BigReal> {
    theta_psi(&-q, prec)
}

/// Stop exponent for a series whose terms decay at least geometrically in `|q|`.
fn series_cutoff(q: &BigReal, bits: u32) -> i64 {
    let one = BigReal::one(q.prec());
    let gap = (&one - &q.abs()).ilog2().unwrap_or(0);
    -(bits as i64 + 16) + gap - 1
}

/// `φ(q)` by direct summation of `1 + 2∑ q^{n²}`.
pub fn theta_phi_sum(q: &BigReal, prec: u32) -> Result<BigReal> {
    check_unit_disc(q)?;
    let wp = prec + GUARD;
    let q = q.with_prec(wp);
    let cut = series_cutoff(&q, wp);
    let q2 = &q * &q;
    let mut step = q.clone();
    let mut term = q.clone();
    let mut acc = BigReal::zero(wp);
    while !term.abs_lt_pow2(cut) {
        acc = &acc + &term;
        step = &step * &q2;
        term = &term * &step;
    }
    Ok((&BigReal::one(wp) + &acc.mul_pow2(1)).with_prec(prec))
}

/// `ψ(q)` by direct summation of `∑_{n≥0} q^{n(n+1)/2}`.
pub fn theta_psi_sum(q: &BigReal, prec: u32) -> Result<BigReal> {
    check_unit_disc(q)?;
    let wp = prec + GUARD;
    let q = q.with_prec(wp);
    let cut = series_cutoff(&q, wp);
    let mut step = BigReal::one(wp);
    let mut term = BigReal::one(wp);
    let mut acc = BigReal::zero(wp);
    while !term.abs_lt_pow2(cut) {
        acc = &acc + &term;
        step = &step * &q;
        term = &term * &step;
    }
    Ok(acc.with_prec(prec))
}

/// `f(−q) = (q;q)∞` for `q ∈ (0,1)`.
pub fn euler_function(q: &BigReal, route: EulerRoute, prec: u32) -> Result<BigReal> {
    check_nome(q)?;
    let wp = prec + GUARD;
    let route = match route {
        EulerRoute::Auto => {
            if log2_inv(q) < prec as f64 / 64.0 {
                EulerRoute::Pentagonal
            } else {
                EulerRoute::Product
            }
        }
        r => r,
    };
    let v = match route {
        EulerRoute::Pentagonal => pentagonal(q, wp)?,
        _ => qpoch_raw(q, q, wp)?,
    };
    Ok(v.with_prec(prec))
}

/// `∑ (−1)^k q^{k(3k−1)/2}` over all integers `k`.
fn pentagonal(q: &BigReal, wp: u32) -> Result<BigReal> {
    // The sum is far smaller than its largest term when q is near 1:
    // log2(1/(q;q)∞) ≈ π²/(6 ln2 · ln(1/q)).
    let ln_inv = log2_inv(q) * core::f64::consts::LN_2;
    let lost = (core::f64::consts::PI * core::f64::consts::PI
        / (6.0 * core::f64::consts::LN_2 * ln_inv)) as u32;
    let wp2 = wp + lost + 8;
    if lost > 64 * wp {
        return Err(domain!("q too close to 1 for the pentagonal series"));
    }
    let q = q.with_prec(wp2);
    let q3 = &(&q * &q) * &q;
    let mut qk = q.clone();
    let mut a = q.clone();
    let mut step = &q3 * &q;
    let mut acc = BigReal::one(wp2);
    let cut = -(wp2 as i64) - 16;
    let mut k = 1u64;
    while !a.abs_lt_pow2(cut) {
        let b = &a * &qk;
        let pair = &a + &b;
        acc = if k % 2 == 1 {
            &acc - &pair
        } else {
            &acc + &pair
        };
        a = &a * &step;
        step = &step * &q3;
        qk = &qk * &q;
        k += 1;
    }
    Ok(acc.with_prec(wp))
}

/// `η(it) = e^{−πt/12} (e^{−2πt}; e^{−2πt})∞` for `t > 0`.
pub fn eta_imag(t: &BigReal, prec: u32) -> Result<BigReal> {
    eta_imag_via(t, EulerRoute::Auto, prec)
}

pub fn eta_imag_via(t: &BigReal, route: EulerRoute, prec: u32) -> Result<BigReal> {
    if !t.is_positive() {
        return Err(domain!("eta_imag needs t > 0"));
    }
    let mag = t.ilog2().unwrap_or(0).max(0) as u32;
    let wp = prec + GUARD + mag;
    let t = t.with_prec(wp);
    let pit = &BigReal::pi(wp) * &t;
    let q = (-&pit.mul_pow2(1)).exp();
    let pre = (-&(&pit / &BigReal::from_i64(12, wp))).exp();
    let f = euler_function(&q, route, wp)?;
    Ok((&pre * &f).with_prec(prec))
}

fn nonzero_index(n: u32) -> Result<()> {
    if n == 0 {
        Err(domain!("n must be a positive integer"))
    } else {
        Ok(())
    }
}

/// `b_{m,n}` from the theta quotient
/// `n q^{(n−1)/4} ψ²(−qⁿ) φ²(−q^{2n}) / (ψ²(−q) φ²(−q²))`, `q = e^{−π√(m/n)}`.
pub fn b_numeric(m: PosRational, n: u32, prec: u32) -> Result<BigReal> {
    nonzero_index(n)?;
    if n == 1 {
        return Ok(BigReal::one(prec));
    }
    Ok(b_theta_route(m, n, prec + GUARD)?.with_prec(prec))
}

fn b_theta_route(m: PosRational, n: u32, wp: u32) -> Result<BigReal> {
    let nome = Nome::new(m, n, wp + 8)?;
    let n = n as i64;
    let q = &nome.q;
    let qn = nome.power(n, 1);
    let q2 = q * q;
    let q2n = &qn * &qn;
    let num = &psi_neg(&qn, wp)?.pow_i64(2)? * &phi_neg(&q2n, wp)?.pow_i64(2)?;
    let den = &psi_neg(q, wp)?.pow_i64(2)? * &phi_neg(&q2, wp)?.pow_i64(2)?;
    let pre = &BigReal::from_i64(n, wp) * &nome.power(n - 1, 4);
    Ok(&(&pre * &num) / &den)
}

/// `b_{m,n} = n η⁴(½√(−mn)) g²_{m/n} / (η⁴(½√(−m/n)) g²_{mn})`.
fn b_eta_invariant_route(m: PosRational, n: u32, wp: u32) -> Result<BigReal> {
    let mn = m.mul_int(n as u64)?;
    let m_over_n = m.div_int(n as u64)?;
    let eta_big = eta_imag(&mn.sqrt(wp).mul_pow2(-1), wp)?;
    let eta_small = eta_imag(&m_over_n.sqrt(wp).mul_pow2(-1), wp)?;
    let g_small = class_invariant_numeric(InvariantKind::SmallG, m_over_n, wp)?;
    let g_big = class_invariant_numeric(InvariantKind::SmallG, mn, wp)?;
    let num = &(&BigReal::from_i64(n as i64, wp) * &eta_big.pow_i64(4)?) * &g_small.pow_i64(2)?;
    let den = &eta_small.pow_i64(4)? * &g_big.pow_i64(2)?;
    Ok(&num / &den)
}

/// `b_{m,n} = n η²(½√(−mn)) η²(√(−mn)) / (η²(½√(−m/n)) η²(√(−m/n)))`.
fn b_eta_quotient_route(m: PosRational, n: u32, wp: u32) -> Result<BigReal> {
    let s_big = m.mul_int(n as u64)?.sqrt(wp);
    let s_small = m.div_int(n as u64)?.sqrt(wp);
    let e1 = eta_imag(&s_big.mul_pow2(-1), wp)?;
    let e2 = eta_imag(&s_big, wp)?;
    let e3 = eta_imag(&s_small.mul_pow2(-1), wp)?;
    let e4 = eta_imag(&s_small, wp)?;
    let num = &BigReal::from_i64(n as i64, wp) * &(&e1 * &e2).pow_i64(2)?;
    let den = (&e3 * &e4).pow_i64(2)?;
    Ok(&num / &den)
}

/// The three independent evaluations of `b_{m,n}`.
#[derive(Clone, Debug)]
pub struct BRepresentations {
    /// Theta-function quotient.
    pub theta: BigReal,
    /// Eta functions combined with the class invariants `g_{m/n}`, `g_{mn}`.
    pub eta_invariant: BigReal,
    /// Pure eta quotient.
    pub eta_quotient: BigReal,
    /// Largest pairwise relative disagreement.
    pub spread: BigReal,
}

impl BRepresentations {
    /// The theta-route value, the reference representation.
    pub fn value(&self) -> &BigReal {
        &self.theta
    }
}

/// `b_{m,n}` by all three representations, failing with
/// [`Error::PrecisionExhausted`] if any two differ by more than `2^-(P-32)`.
pub fn b_numeric_checked(m: PosRational, n: u32, prec: u32) -> Result<BRepresentations> {
    nonzero_index(n)?;
    let wp = prec + GUARD;
    let (theta, eta_invariant, eta_quotient) = if n == 1 {
        let one = BigReal::one(wp);
        (one.clone(), one.clone(), one)
    } else {
        (
            b_theta_route(m, n, wp)?,
            b_eta_invariant_route(m, n, wp)?,
            b_eta_quotient_route(m, n, wp)?,
        )
    };
    let spread = [
        theta.rel_diff(&eta_invariant),
        theta.rel_diff(&eta_quotient),
        eta_invariant.rel_diff(&eta_quotient),
    ]
    .into_iter()
    .fold(BigReal::zero(wp), |a, b| if b > a { b } else { a });
    if !spread.abs_lt_pow2(-((prec - ROUTE_TOLERANCE_GUARD.min(prec)) as i64)) {
        return Err(Error::PrecisionExhausted(alloc::format!(
            "b_{{{m},{n}}}: representations disagree by 2^{}",
            spread.ilog2().unwrap_or(0)
        )));
    }
    Ok(BRepresentations {
        theta: theta.with_prec(prec),
        eta_invariant: eta_invariant.with_prec(prec),
        eta_quotient: eta_quotient.with_prec(prec),
        spread: spread.with_prec(64),
    })
}

/// Ramanujan's `a_{m,n}`: as `b_{m,n}` but with `ψ²` at the positive nomes.
pub fn a_numeric(m: PosRational, n: u32, prec: u32) -> Result<BigReal> {
    nonzero_index(n)?;
    if n == 1 {
        return Ok(BigReal::one(prec));
    }
    let wp = prec + GUARD;
    let nome = Nome::new(m, n, wp + 8)?;
    let k = n as i64;
    let q = &nome.q;
    let qn = nome.power(k, 1);
    let q2 = q * q;
    let q2n = &qn * &qn;
    let num = &theta_psi(&qn, wp)?.pow_i64(2)? * &phi_neg(&q2n, wp)?.pow_i64(2)?;
    let den = &theta_psi(q, wp)?.pow_i64(2)? * &phi_neg(&q2, wp)?.pow_i64(2)?;
    let pre = &BigReal::from_i64(k, wp) * &nome.power(k - 1, 4);
    Ok((&(&pre * &num) / &den).with_prec(prec))
}

/// `g_n` or `G_n` at `q = e^{−π√n}`.
pub fn class_invariant_numeric(kind: InvariantKind, n: PosRational, prec: u32) -> Result<BigReal> {
    let wp = prec + GUARD;
    let s = &BigReal::pi(wp) * &n.sqrt(wp);
    let q = (-&s).exp();
    let q2 = &q * &q;
    let a = match kind {
        InvariantKind::SmallG => q.clone(),
        InvariantKind::BigG => -&q,
    };
    let prod = qpoch_raw(&a, &q2, wp)?;
    let pre = &(&s / &BigReal::from_i64(24, wp)).exp() / &BigReal::from_i64(2, wp).root(4)?;
    Ok((&pre * &prod).with_prec(prec))
}
