//! One function per subcommand, each producing a JSON document.

use std::fmt;
use std::time::Instant;

use serde_json::{json, Map, Value};
use theta_units_core::algrec::{self, IntPoly};
use theta_units_core::derive::{self, DerivationReport};
use theta_units_core::modeq::{self, Branch};
use theta_units_core::qseries::{self, InvariantKind};
use theta_units_core::quadfields::{ClassData, Disc, QForm, QuadUnit};
use theta_units_core::{BigReal, Error, PosRational};

use crate::corpus::{Corpus, CorpusError};
use crate::render::{decimal, sci};
use crate::verify::{self, Status};
use crate::{exit_code, Cli, Command, Kind};

/// A rendered document and the exit status that goes with it.
#[derive(Debug)]
pub struct Output {
    pub doc: Value,
    pub exit: i32,
}

impl Output {
    fn ok(doc: Value) -> Output {
        Output { doc, exit: 0 }
    }
}

#[derive(Debug)]
pub enum CliError {
    Engine(Error),
    Corpus(CorpusError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(e) => exit_code(e),
            CliError::Corpus(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Engine(e) => e.fmt(f),
            CliError::Corpus(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Corpus(e)
    }
}

type CmdResult = Result<Output, CliError>;

pub fn run(cli: &Cli) -> CmdResult {
    let prec = cli.prec;
    if prec < 64 {
        return Err(Error::Domain(format!("--prec {prec} is below the 64-bit minimum")).into());
    }
    let start = Instant::now();
    let out = match &cli.command {
        Command::Eval { kind, m, n } => eval(*kind, m, n, prec),
        Command::Derive { m, n } => derive_cmd(*m, *n, prec),
        Command::VerifyPaper { parallel, corpus } => {
            let c = match corpus {
                Some(path) => Corpus::load(path)?,
                None => Corpus::embedded(),
            };
            Ok(verify_paper(&c, prec, *parallel))
        }
        Command::Enumerate { bound, all } => enumerate(*bound, *all),
        Command::Classdata { d } => classdata(*d, prec),
        Command::Recognize { literal, max_deg } => recognize(literal, *max_deg, prec),
        Command::DeriveGn { k } => derive_gn(*k, prec),
    };
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    out
}

fn parse_rational(s: &str) -> Result<PosRational, Error> {
    s.parse()
}

fn parse_index(s: &str) -> Result<u32, Error> {
    s.trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Parse(format!("expected a positive integer, got {s:?}")))
}

pub fn eval(kind: Kind, m: &str, n: &str, prec: u32) -> CmdResult {
    let doc = match kind {
        Kind::B => {
            let (m, n) = (parse_rational(m)?, parse_index(n)?);
            let r = qseries::b_numeric_checked(m, n, prec)?;
            json!({
                "kind": "b",
                "m": m.to_string(),
                "n": n,
                "prec": prec,
                "value": decimal(r.value(), prec),
                "representations": {
                    "theta": decimal(&r.theta, prec),
                    "eta_invariant": decimal(&r.eta_invariant, prec),
                    "eta_quotient": decimal(&r.eta_quotient, prec),
                },
                "spread": sci(&r.spread),
            })
        }
        Kind::A => {
            let (m, n) = (parse_rational(m)?, parse_index(n)?);
            let v = qseries::a_numeric(m, n, prec)?;
            json!({"kind": "a", "m": m.to_string(), "n": n, "prec": prec, "value": decimal(&v, prec)})
        }
        Kind::SmallG | Kind::BigG => {
            let n = parse_rational(n)?;
            let (ik, name) = match kind {
                Kind::SmallG => (InvariantKind::SmallG, "g"),
                _ => (InvariantKind::BigG, "G"),
            };
            let v = qseries::class_invariant_numeric(ik, n, prec)?;
            json!({"kind": name, "n": n.to_string(), "prec": prec, "value": decimal(&v, prec)})
        }
    };
    Ok(Output::ok(doc))
}

fn form(f: &QForm) -> Value {
    json!([f.a, f.b, f.c])
}

fn unit(u: &QuadUnit, prec: u32) -> Value {
    json!({"display": u.to_string(), "norm": u.norm, "value": decimal(&u.to_bigreal(prec), prec)})
}

fn report_doc(r: &DerivationReport) -> Value {
    let prec = r.prec;
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            let dec = &row.decomposition;
            let mut obj = json!({
                "d1": dec.d1,
                "d2": dec.d2,
                "h1": dec.h1,
                "h2": dec.h2,
                "w2": dec.w2,
                "chi": row.chi,
                "selected": row.selected,
            });
            if let Some(eps) = &dec.eps {
                obj["eps"] = Value::String(eps.to_string());
            }
            if row.selected {
                obj["weight"] = Value::String(row.weight(r.w).to_string());
            }
            obj
        })
        .collect();
    json!({
        "b": format!("b_{{{},{}}}", 2 * r.m, r.n),
        "m": r.m,
        "n": r.n,
        "d": r.d.value(),
        "h": r.h,
        "w": r.w,
        "genera": r.num_genera,
        "classes_per_genus": r.classes_per_genus,
        "ideal_forms": r.ideal_forms.iter().map(form).collect::<Vec<_>>(),
        "decompositions": rows,
        "unit_product": r.product.to_string(),
        "value": decimal(&r.value, prec),
        "numeric": decimal(&r.numeric, prec),
        "residual": sci(&r.residual),
        "prec": prec,
    })
}

pub fn derive_cmd(m: u64, n: u64, prec: u32) -> CmdResult {
    let r = derive::derive_b(m, n, prec)?;
    let mut doc = report_doc(&r);
    if let Some(row) = Corpus::embedded().class_row(m, n) {
        let check = verify::annotate_derivation(&r, row, prec);
        doc["printed_table"] = json!({
            "id": check.id,
            "status": check.status,
            "notes": check.notes,
        });
    }
    Ok(Output::ok(doc))
}

pub fn verify_paper(corpus: &Corpus, prec: u32, parallel: bool) -> Output {
    let s = verify::verify_corpus(corpus, prec, parallel);
    let mut kinds = Map::new();
    for kind in ["b-value", "class-data", "g-value", "modular-identity"] {
        let pass = s.count(kind, true);
        let total = pass + s.count(kind, false);
        if total > 0 {
            kinds.insert(kind.into(), Value::String(format!("{pass}/{total}")));
        }
    }
    let failed: Vec<&str> = s
        .results
        .iter()
        .filter(|r| r.status == Status::Fail)
        .map(|r| r.id.as_str())
        .collect();
    let doc = json!({
        "prec": prec,
        "summary": {
            "total": s.total,
            "pass": s.passed,
            "pass_corrected": s.typo_corrected,
            "fail": s.failed,
            "by_kind": kinds,
            "failed_ids": failed,
        },
        "entries": s.results,
    });
    Output {
        doc,
        exit: if s.all_pass() { 0 } else { 1 },
    }
}

pub fn enumerate(bound: u64, all: bool) -> CmdResult {
    let list = if all {
        derive::enumerate_admissible_all(bound)?
    } else {
        derive::enumerate_admissible(bound)?
    };
    let count = |t| list.iter().filter(|a| a.tag == t).count();
    let pairs: Vec<Value> = list
        .iter()
        .map(|a| json!({"m": a.m, "n": a.n, "b": format!("b_{{{},{}}}", 2 * a.m, a.n), "case": a.tag.to_string()}))
        .collect();
    Ok(Output::ok(json!({
        "bound": bound,
        "canonical": !all,
        "one_class": count(derive::CaseTag::OneClass),
        "two_class": count(derive::CaseTag::TwoClass),
        "pairs": pairs,
    })))
}

pub fn classdata(d: i64, prec: u32) -> CmdResult {
    let c = ClassData::compute(Disc::new(d)?)?;
    let mut doc = json!({
        "d": d,
        "h": c.h,
        "w": c.w,
        "genera": c.num_genera,
        "classes_per_genus": c.classes_per_genus,
    });
    if d < 0 {
        doc["reduced_forms"] = c.reduced_forms.iter().map(form).collect();
    }
    if let Some(u) = &c.unit {
        doc["unit"] = unit(u, prec);
    }
    Ok(Output::ok(doc))
}

/// Bits carried by the significant digits of a decimal literal.
fn literal_bits(s: &str) -> u32 {
    let mantissa = s.trim().split(['e', 'E']).next().unwrap_or("");
    let digits = mantissa
        .chars()
        .filter(char::is_ascii_digit)
        .skip_while(|&c| c == '0')
        .count();
    (digits as f64 * std::f64::consts::LOG2_10).floor() as u32
}

fn poly_doc(p: &IntPoly) -> Value {
    json!({
        "polynomial": p.to_string(),
        "coefficients": p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "degree": p.degree(),
        "unit": algrec::is_unit_poly(p),
    })
}

pub fn recognize(literal: &str, max_deg: usize, prec: u32) -> CmdResult {
    let bits = literal_bits(literal);
    let used = prec.min(bits / 2);
    if used < 32 {
        return Err(Error::Domain(format!("{literal:?} carries only {bits} bits")).into());
    }
    let x = BigReal::parse_decimal(literal, 2 * used)?;
    let p = algrec::min_poly(&x, max_deg, used)?;
    let mut doc = poly_doc(&p);
    doc["literal_bits"] = json!(bits);
    doc["prec"] = json!(used);
    Ok(Output::ok(doc))
}

pub fn derive_gn(k: u64, prec: u32) -> CmdResult {
    let g = modeq::derive_gn_pipeline(k, prec)?;
    let branch = match g.branch {
        Branch::Principal => "principal",
        Branch::Reciprocal => "reciprocal",
    };
    Ok(Output::ok(json!({
        "k": k,
        "g_big": format!("g_{}", 7 * k),
        "g_small": format!("g_{k}/7"),
        "big": decimal(&g.big, prec),
        "small": decimal(&g.small, prec),
        "ratio": decimal(&g.ratio, prec),
        "product": decimal(&g.product, prec),
        "x": decimal(&g.x, prec),
        "b": decimal(&g.b, prec),
        "branch": branch,
        "certification": sci(&g.certification),
        "modeq_residual": sci(&g.modeq_residual),
        "prec": prec,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_bit_count() {
        assert_eq!(literal_bits("0.00123"), 9);
        assert_eq!(literal_bits("-1.5e10"), 6);
    }
}
