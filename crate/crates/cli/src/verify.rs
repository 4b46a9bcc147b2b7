//! Checks each corpus entry against an independent engine computation.

use rayon::prelude::*;
use serde::Serialize;
use theta_units_core::algrec::ClosedFormExpr;
use theta_units_core::derive::{self, DerivationReport};
use theta_units_core::modeq::{self, Branch, GnPair};
use theta_units_core::qseries;
use theta_units_core::{BigReal, Error, PosRational};

use crate::corpus::{
    BValue, BranchTag, ClassRow, Corpus, DecRow, Entry, PipelineValue, Quantity, Typo,
};

/// Bits below the working precision tolerated in every comparison.
pub const TOLERANCE_GUARD: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    /// The printed data fails; the recorded correction passes.
    PassCorrected,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryResult {
    pub id: String,
    pub kind: &'static str,
    pub status: Status,
    /// Relative residual of the decisive comparison, in scientific notation.
    pub residual: String,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub typo_corrected: usize,
    pub failed: usize,
    pub results: Vec<EntryResult>,
}

impl Summary {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn count(&self, kind: &str, ok: bool) -> usize {
        self.results
            .iter()
            .filter(|r| r.kind == kind && (r.status != Status::Fail) == ok)
            .count()
    }
}

/// Outcome of comparing one set of printed data.
struct Check {
    residual: BigReal,
    mismatches: Vec<String>,
}

impl Check {
    fn ok(&self, prec: u32) -> bool {
        self.mismatches.is_empty() && within(&self.residual, prec)
    }
}

fn within(rel: &BigReal, prec: u32) -> bool {
    rel.abs_lt_pow2(-((prec - TOLERANCE_GUARD.min(prec - 1)) as i64))
}

fn eval(expr: &str, prec: u32) -> Result<BigReal, Error> {
    expr.parse::<ClosedFormExpr>()?.eval(prec)
}

fn sci(x: &BigReal) -> String {
    x.to_sci_string(4)
}

pub fn verify_corpus(corpus: &Corpus, prec: u32, parallel: bool) -> Summary {
    let mut results: Vec<EntryResult> = if parallel {
        corpus
            .entry
            .par_iter()
            .map(|e| verify_entry(e, prec))
            .collect()
    } else {
        corpus.entry.iter().map(|e| verify_entry(e, prec)).collect()
    };
    results.sort_by(|a, b| a.id.cmp(&b.id));
    let count = |s| results.iter().filter(|r| r.status == s).count();
    Summary {
        total: results.len(),
        passed: count(Status::Pass),
        typo_corrected: count(Status::PassCorrected),
        failed: count(Status::Fail),
        results,
    }
}

pub fn verify_entry(entry: &Entry, prec: u32) -> EntryResult {
    let outcome = match entry {
        Entry::BValue(e) => check_b(e, prec),
        Entry::ClassData(e) => check_class(e, prec),
        Entry::GValue(e) | Entry::ModularIdentity(e) => check_pipeline(e, prec),
    };
    resolve(entry.id(), entry.kind(), entry.typo(), outcome, prec)
}

/// Compares an existing derivation with the printed class table `row`.
pub fn annotate_derivation(r: &DerivationReport, row: &ClassRow, prec: u32) -> EntryResult {
    let outcome = class_outcome(r, row, prec);
    resolve(&row.id, "class-data", row.typo.as_ref(), outcome, prec)
}

fn resolve(
    id: &str,
    kind: &'static str,
    typo: Option<&Typo>,
    outcome: Checked,
    prec: u32,
) -> EntryResult {
    let mut notes = Vec::new();
    let (status, residual) = match outcome {
        Err(err) => {
            notes.push(format!("engine error: {err}"));
            (Status::Fail, String::from("-"))
        }
        Ok((printed, corrected)) => {
            let res = sci(&printed.residual);
            if printed.ok(prec) {
                if typo.is_some() {
                    notes.push("typo flag set but the printed data verifies".into());
                }
                (Status::Pass, res)
            } else {
                notes.extend(printed.mismatches.iter().cloned());
                if !within(&printed.residual, prec) {
                    notes.push(format!("printed display residual {res}"));
                }
                match (typo, corrected) {
                    (Some(t), Some(c)) if c.ok(prec) => {
                        notes.push(format!("typo: {}", t.note));
                        (Status::PassCorrected, sci(&c.residual))
                    }
                    (Some(t), Some(c)) => {
                        notes.push(format!("typo: {} (correction also fails)", t.note));
                        notes.extend(c.mismatches.iter().cloned());
                        (Status::Fail, sci(&c.residual))
                    }
                    _ => (Status::Fail, res),
                }
            }
        }
    };
    EntryResult {
        id: id.to_string(),
        kind,
        status,
        residual,
        notes,
    }
}

type Checked = Result<(Check, Option<Check>), Error>;

fn check_b(e: &BValue, prec: u32) -> Checked {
    let b = qseries::b_numeric_checked(PosRational::integer(e.m)?, e.n, prec)?;
    let compare = |expr: &str| -> Result<Check, Error> {
        Ok(Check {
            residual: b.value().rel_diff(&eval(expr, prec)?),
            mismatches: vec![],
        })
    };
    let printed = compare(&e.expr)?;
    let corrected = e
        .typo
        .as_ref()
        .and_then(|t| t.expr.as_deref())
        .map(compare)
        .transpose()?;
    Ok((printed, corrected))
}

fn check_class(e: &ClassRow, prec: u32) -> Checked {
    let r = derive::derive_b(e.m, e.n, prec)?;
    class_outcome(&r, e, prec)
}

fn class_outcome(r: &DerivationReport, e: &ClassRow, prec: u32) -> Checked {
    let printed = class_check(r, e, &e.decompositions, &e.unit_product, prec)?;
    let corrected = match &e.typo {
        Some(t) if t.decompositions.is_some() || t.unit_product.is_some() => Some(class_check(
            r,
            e,
            t.decompositions.as_ref().unwrap_or(&e.decompositions),
            t.unit_product.as_ref().unwrap_or(&e.unit_product),
            prec,
        )?),
        _ => None,
    };
    Ok((printed, corrected))
}

fn class_check(
    r: &DerivationReport,
    e: &ClassRow,
    decs: &[DecRow],
    unit_product: &str,
    prec: u32,
) -> Result<Check, Error> {
    let mut mismatches = Vec::new();
    let mut field = |name: &str, printed: i64, engine: i64| {
        if printed != engine {
            mismatches.push(format!("{name}: printed {printed}, engine {engine}"));
        }
    };
    field("d", e.d, r.d.value());
    field("h", e.h as i64, r.h as i64);
    field("w", e.w as i64, r.w as i64);
    field(
        "classes per genus",
        e.classes_per_genus as i64,
        r.classes_per_genus as i64,
    );
    let selected: Vec<_> = r.selected().collect();
    field(
        "selected decompositions",
        decs.len() as i64,
        selected.len() as i64,
    );
    for dec in decs {
        let Some(row) = selected.iter().find(|s| s.decomposition.d1 == dec.d1) else {
            mismatches.push(format!(
                "decomposition {}×({}) is not selected",
                dec.d1, dec.d2
            ));
            continue;
        };
        let ed = &row.decomposition;
        let tag = format!("{}×({})", dec.d1, dec.d2);
        if ed.d2 != dec.d2 {
            mismatches.push(format!("{tag}: engine cofactor {}", ed.d2));
        }
        if (ed.h1, ed.h2, ed.w2) != (dec.h1, dec.h2, dec.w2) {
            mismatches.push(format!(
                "{tag}: printed h1,h2,w2 = {},{},{}; engine {},{},{}",
                dec.h1, dec.h2, dec.w2, ed.h1, ed.h2, ed.w2
            ));
        }
        let eps = ed.eps.as_ref().expect("selected d1 > 1");
        if !within(&eps.to_bigreal(prec).rel_diff(&eval(&dec.eps, prec)?), prec) {
            mismatches.push(format!("{tag}: printed unit differs from engine {eps}"));
        }
    }
    let value = r.value.pow_i64(e.power)?;
    let residual = value.rel_diff(&eval(unit_product, prec)?);
    Ok(Check {
        residual,
        mismatches,
    })
}

fn quantity(g: &GnPair, q: Quantity, prec: u32) -> Result<BigReal, Error> {
    Ok(match q {
        Quantity::Big => g.big.clone(),
        Quantity::Small => g.small.clone(),
        Quantity::Ratio => g.ratio.clone(),
        Quantity::Product => g.product.clone(),
        Quantity::X => g.x.clone(),
        Quantity::S => {
            let p3 = g.product.with_prec(prec + 16).pow_i64(3)?;
            (&p3 + &p3.recip()?).with_prec(prec)
        }
    })
}

fn check_pipeline(e: &PipelineValue, prec: u32) -> Checked {
    let g = modeq::derive_gn_pipeline(e.k, prec)?;
    let mut base = quantity(&g, e.quantity, prec)?;
    // outputs are always certified on the principal branch
    if g.branch == Branch::Reciprocal {
        base = base.recip()?;
    }
    let power = match e.branch {
        BranchTag::Principal => e.power,
        BranchTag::Reciprocal => -e.power,
    };
    let target = base.pow_i64(power)?;
    let compare = |expr: &str| -> Result<Check, Error> {
        Ok(Check {
            residual: target.rel_diff(&eval(expr, prec)?),
            mismatches: vec![],
        })
    };
    let printed = compare(&e.expr)?;
    let corrected = e
        .typo
        .as_ref()
        .and_then(|t| t.expr.as_deref())
        .map(compare)
        .transpose()?;
    Ok((printed, corrected))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_entries() {
        let c = Corpus::embedded();
        let r = verify_entry(c.get("b_10_3").unwrap(), 256);
        assert_eq!(r.status, Status::Pass);
        let r = verify_entry(c.get("class_46_7").unwrap(), 256);
        assert_eq!(r.status, Status::PassCorrected, "{:?}", r.notes);
        assert!(r.notes.iter().any(|n| n.contains("184")));
        let r = verify_entry(c.get("g_322").unwrap(), 256);
        assert_eq!(r.status, Status::Pass, "{:?}", r.notes);
    }
}
