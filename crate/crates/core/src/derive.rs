//! Closed forms of `b_{2m,n}` as products of fundamental units.
//!
//! For `d = −8mn` with ideals `B₀ = [1, Ω]`, `B₁ = [2, Ω]`, `B₂ = [n, Ω]`,
//! `B₃ = [2n, Ω]` (`Ω = √(−2mn)`), Kronecker's limit formula gives
//!
//! ```text
//! b^{h/4} = ∏ ε₁^{−w·h₁·h₂/w₂}
//! ```
//!
//! over the decompositions `d = d₁d₂` whose genus character takes the value
//! `−1` on both `B₂` and `B₃`. The identity is used only when the number of
//! such characters is exactly `h/4`; that holds whenever every genus has one
//! or two classes and the hypothesis is checked rather than assumed.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::qseries::{self, GUARD};
use crate::quadfields::{
    self, decomposition_pairs, genera_structure, genus_character, ideal_to_form, Decomposition,
    Disc, IdealBasis, QForm, QuadUnit,
};
use crate::rational::PosRational;

/// A signed product of rational powers of quadratic units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitProduct {
    pub factors: Vec<(QuadUnit, Ratio<i64>)>,
}

impl UnitProduct {
    pub fn value(&self, prec: u32) -> Result<BigReal> {
        let wp = prec + 16;
        let mut acc = BigReal::one(wp);
        for (eps, e) in &self.factors {
            let x = eps.to_bigreal(wp + 8 * e.numer().unsigned_abs() as u32);
            let p = x.pow_i64(*e.numer())?;
            let r = match *e.denom() {
                1 => p,
                2 => p.sqrt()?,
                k => p.root(k as u32)?,
            };
            acc = &acc * &r;
        }
        Ok(acc.with_prec(prec))
    }

    /// Every factor raised to the power `k`.
    pub fn pow(&self, k: i64) -> UnitProduct {
        UnitProduct {
            factors: self
                .factors
                .iter()
                .map(|(u, e)| (u.clone(), e * k))
                .collect(),
        }
    }
}

impl fmt::Display for UnitProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (u, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" · ")?;
            }
            write!(f, "({u})^({e})")?;
        }
        Ok(())
    }
}

/// A decomposition together with its character values on `B₀..B₃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterRow {
    pub decomposition: Decomposition,
    pub chi: [i32; 4],
    pub selected: bool,
}

impl CharacterRow {
    /// `w·h₁·h₂/w₂` for `w = 2`.
    pub fn weight(&self, w: u32) -> Ratio<i64> {
        let dec = &self.decomposition;
        Ratio::new((w as u64 * dec.h1 * dec.h2) as i64, dec.w2 as i64)
    }
}

/// Audit record of one derivation.
#[derive(Clone, Debug)]
pub struct DerivationReport {
    pub m: u64,
    pub n: u64,
    pub d: Disc,
    pub h: u64,
    pub w: u32,
    pub num_genera: u64,
    pub classes_per_genus: u64,
    /// Forms of `B₀, B₁, B₂, B₃`.
    pub ideal_forms: [QForm; 4],
    pub rows: Vec<CharacterRow>,
    /// Closed form of `b_{2m,n}`.
    pub product: UnitProduct,
    pub value: BigReal,
    pub numeric: BigReal,
    pub residual: BigReal,
    pub prec: u32,
}

impl DerivationReport {
    pub fn selected(&self) -> impl Iterator<Item = &CharacterRow> {
        self.rows.iter().filter(|r| r.selected)
    }

    /// `h/4`, the power of `b` that the unit product represents.
    pub fn root_index(&self) -> u64 {
        self.h / 4
    }
}

fn hypothesis(msg: alloc::string::String) -> Error {
    Error::Hypothesis(msg)
}

/// Discriminant `−8mn` after checking the arithmetic preconditions.
fn admissible_disc(m: u64, n: u64) -> Result<Disc> {
    if m == 0 || n == 0 || m.is_even() || n.is_even() {
        return Err(hypothesis(alloc::format!(
            "m = {m} and n = {n} must be odd and positive"
        )));
    }
    if n == 1 {
        return Err(hypothesis("n = 1 makes B₂ = B₀".into()));
    }
    let d = (m as i64)
        .checked_mul(n as i64)
        .and_then(|x| x.checked_mul(-8))
        .ok_or_else(|| hypothesis("8mn overflows".into()))?;
    Disc::fundamental(d)
        .map_err(|_| hypothesis(alloc::format!("2mn = {} is not squarefree", 2 * m * n)))
}

struct Skeleton {
    d: Disc,
    h: u64,
    genera: u64,
    per_genus: u64,
    forms: [QForm; 4],
    pairs: Vec<((i64, i64), [i32; 4])>,
}

impl Skeleton {
    fn selected(&self) -> usize {
        self.pairs
            .iter()
            .filter(|(_, c)| c[2] == -1 && c[3] == -1)
            .count()
    }
}

fn skeleton(m: u64, n: u64) -> Result<Skeleton> {
    let d = admissible_disc(m, n)?;
    let (genera, per_genus) = genera_structure(d)?;
    let n = n as i64;
    let mut forms = [QForm::new(1, 0, 0); 4];
    for (f, a) in forms.iter_mut().zip([1, 2, n, 2 * n]) {
        *f = ideal_to_form(IdealBasis { a, b: 0 }, d)?;
    }
    let mut pairs = Vec::new();
    for (d1, d2) in decomposition_pairs(d)? {
        let mut chi = [1; 4];
        for (c, f) in chi.iter_mut().zip(&forms) {
            *c = genus_character(d1, f)?;
        }
        pairs.push(((d1, d2), chi));
    }
    Ok(Skeleton {
        d,
        h: genera * per_genus,
        genera,
        per_genus,
        forms,
        pairs,
    })
}

/// The unit-product closed form of `b_{2m,n}`, audited against the q-series.
pub fn derive_b(m: u64, n: u64, prec: u32) -> Result<DerivationReport> {
    let sk = skeleton(m, n)?;
    if !(1..=2).contains(&sk.per_genus) {
        return Err(hypothesis(alloc::format!(
            "{} classes per genus for d = {}",
            sk.per_genus,
            sk.d
        )));
    }
    let big_n = sk.h / 4;
    let count = sk.selected() as u64;
    if sk.h % 4 != 0 || count != big_n {
        return Err(hypothesis(alloc::format!(
            "{count} characters vanish on B₂, B₃ but h/4 = {}/4",
            sk.h
        )));
    }
    let w = sk.d.roots_of_unity();
    let mut rows = Vec::new();
    let mut factors = Vec::new();
    for ((d1, d2), chi) in &sk.pairs {
        let selected = chi[2] == -1 && chi[3] == -1;
        let row = CharacterRow {
            decomposition: quadfields::enrich(*d1, *d2)?,
            chi: *chi,
            selected,
        };
        if selected {
            let e = -row.weight(w) / big_n as i64;
            let eps = row.decomposition.eps.clone().expect("selected d1 > 1");
            factors.push((eps, e));
        }
        rows.push(row);
    }
    let product = UnitProduct { factors };
    let value = product.value(prec + GUARD)?;
    let mm = PosRational::integer(2 * m)?;
    let numeric = qseries::b_numeric(mm, n as u32, prec + GUARD)?;
    let residual = (&value - &numeric).abs();
    if !residual.abs_lt_pow2(-(prec as i64 - 32)) {
        return Err(Error::Consistency(alloc::format!(
            "b_{{{},{n}}}: unit product differs from the q-series by 2^{}",
            2 * m,
            residual.ilog2().unwrap_or(0)
        )));
    }
    Ok(DerivationReport {
        m,
        n,
        d: sk.d,
        h: sk.h,
        w,
        num_genera: sk.genera,
        classes_per_genus: sk.per_genus,
        ideal_forms: sk.forms,
        rows,
        product,
        value: value.with_prec(prec),
        numeric: numeric.with_prec(prec),
        residual: residual.with_prec(64),
        prec,
    })
}

/// `F([a, Ω]) = η(i√(2mn)/a)² / √a`.
pub fn f_value(m: u64, n: u64, a: u64, prec: u32) -> Result<BigReal> {
    let t =
        &PosRational::integer(2 * m * n)?.sqrt(prec + 8) / &BigReal::from_i64(a as i64, prec + 8);
    let eta = qseries::eta_imag(&t, prec + 8)?;
    let sa = BigReal::from_i64(a as i64, prec + 8).sqrt()?;
    Ok((&(&eta * &eta) / &sa).with_prec(prec))
}

/// Both sides of the limit identity `∏ ε^{−w h₁h₂/w₂} = (F(B₂)F(B₃)/(F(B₀)F(B₁)))^{−h/4}`.
#[derive(Clone, Debug)]
pub struct LimitIdentity {
    pub lhs: BigReal,
    pub rhs: BigReal,
    pub residual: BigReal,
}

pub fn verify_limit_identity(m: u64, n: u64, prec: u32) -> Result<LimitIdentity> {
    let report = derive_b(m, n, prec)?;
    let wp = prec + GUARD;
    let k = report.root_index() as i64;
    let lhs = report.product.pow(k).value(wp)?;
    let f: Result<Vec<BigReal>> = [1, 2, n, 2 * n]
        .iter()
        .map(|&a| f_value(m, n, a, wp))
        .collect();
    let f = f?;
    let ratio = &(&f[2] * &f[3]) / &(&f[0] * &f[1]);
    let rhs = ratio.pow_i64(-k)?;
    let residual = (&lhs - &rhs).abs();
    Ok(LimitIdentity {
        lhs: lhs.with_prec(prec),
        rhs: rhs.with_prec(prec),
        residual: residual.with_prec(64),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    OneClass,
    TwoClass,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::OneClass => "one-class",
            CaseTag::TwoClass => "two-class",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Admissible {
    pub m: u64,
    pub n: u64,
    pub tag: CaseTag,
}

/// Whether `(m, n)` has four genera, one or two classes per genus and
/// exactly `h/4` characters vanishing on `B₂, B₃`.
pub fn classify(m: u64, n: u64) -> Result<Option<CaseTag>> {
    let sk = match skeleton(m, n) {
        Ok(sk) => sk,
        Err(Error::Hypothesis(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let tag = match sk.per_genus {
        1 => CaseTag::OneClass,
        2 => CaseTag::TwoClass,
        _ => return Ok(None),
    };
    let ok = sk.genera == 4 && sk.selected() as u64 == sk.h / 4 && sk.selected() > 0;
    Ok(ok.then_some(tag))
}

/// Admissible pairs with `m > n ≥ 3` and `8mn ≤ bound`, sorted by `(8mn, n)`.
pub fn enumerate_admissible(bound: u64) -> Result<Vec<Admissible>> {
    enumerate_with(bound, true)
}

/// As [`enumerate_admissible`] but without the `m > n` canonicalization.
pub fn enumerate_admissible_all(bound: u64) -> Result<Vec<Admissible>> {
    enumerate_with(bound, false)
}

fn enumerate_with(bound: u64, canonical: bool) -> Result<Vec<Admissible>> {
    let mut out = Vec::new();
    for n in (3..).step_by(2).take_while(|n| 8 * n * 3 <= bound) {
        for m in (3..).step_by(2).take_while(|m| 8 * m * n <= bound) {
            if m == n || (canonical && m < n) {
                continue;
            }
            if let Some(tag) = classify(m, n)? {
                out.push(Admissible { m, n, tag });
            }
        }
    }
    out.sort_by_key(|a| (a.m * a.n, a.n));
    Ok(out)
}
