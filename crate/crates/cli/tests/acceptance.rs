//! The ten acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`); exits nonzero if any
//! criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{rngs::StdRng, Rng, SeedableRng};
use theta_units::corpus::{Corpus, Entry};
use theta_units::verify::{self, Status};
use theta_units_core::algrec::{self, ClosedFormExpr};
use theta_units_core::derive::{self, CaseTag};
use theta_units_core::modeq;
use theta_units_core::qseries::{self, InvariantKind};
use theta_units_core::quadfields::{self, Disc};
use theta_units_core::{BigReal, PosRational};

const PAIRS: [(u64, u64); 10] = [
    (5, 3),
    (7, 3),
    (7, 5),
    (13, 3),
    (17, 3),
    (13, 5),
    (19, 5),
    (17, 7),
    (23, 7),
    (47, 7),
];

type Outcome = Result<String, String>;

fn ev(expr: &str, prec: u32) -> Result<BigReal, String> {
    expr.parse::<ClosedFormExpr>()
        .and_then(|e| e.eval(prec))
        .map_err(|e| format!("{expr}: {e}"))
}

fn log2(x: &BigReal) -> String {
    match x.ilog2() {
        Some(k) => format!("2^{k}"),
        None => "0".into(),
    }
}

/// Tracks the largest residual seen.
#[derive(Default)]
struct Worst(Option<BigReal>);

impl Worst {
    fn add(&mut self, r: &BigReal) {
        let r = r.abs();
        if self.0.as_ref().map_or(true, |w| r > *w) {
            self.0 = Some(r);
        }
    }

    fn show(&self) -> String {
        self.0.as_ref().map_or("0".into(), log2)
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn b_displays(corpus: &Corpus) -> Outcome {
    let mut worst = Worst::default();
    let mut slowest = Duration::ZERO;
    let mut count = 0;
    for e in &corpus.entry {
        let Entry::BValue(b) = e else { continue };
        let t = Instant::now();
        let m = PosRational::integer(b.m).map_err(|e| e.to_string())?;
        let v = qseries::b_numeric(m, b.n, 256).map_err(|e| e.to_string())?;
        let want = ev(&b.expr, 256)?;
        let elapsed = t.elapsed();
        let diff = &v - &want;
        ensure(diff.abs_lt_pow2(-192), || {
            format!("{}: residual {}", b.id, log2(&diff))
        })?;
        ensure(elapsed < Duration::from_secs(1), || {
            format!("{}: took {elapsed:?}", b.id)
        })?;
        worst.add(&diff);
        slowest = slowest.max(elapsed);
        count += 1;
    }
    ensure(count == 10, || format!("{count} b displays in the corpus"))?;
    Ok(format!(
        "10 displays, max residual {}, slowest {:.0?}",
        worst.show(),
        slowest
    ))
}

fn derivations(corpus: &Corpus) -> Outcome {
    let mut worst = Worst::default();
    for &(m, n) in &PAIRS {
        let r = derive::derive_b(m, n, 256).map_err(|e| format!("({m},{n}): {e}"))?;
        let diff = &r.value - &r.numeric;
        ensure(diff.abs_lt_pow2(-192), || {
            format!("({m},{n}): residual {}", log2(&diff))
        })?;
        worst.add(&diff);
        let row = corpus
            .class_row(m, n)
            .ok_or_else(|| format!("no table for ({m},{n})"))?;
        let check = verify::annotate_derivation(&r, row, 256);
        let expected = if (m, n) == (23, 7) {
            Status::PassCorrected
        } else {
            Status::Pass
        };
        ensure(check.status == expected, || {
            format!(
                "{}: {:?} ({})",
                row.id,
                check.status,
                check.notes.join("; ")
            )
        })?;
    }
    let r = derive::derive_b(23, 7, 256).map_err(|e| e.to_string())?;
    let pairs: Vec<_> = r
        .selected()
        .map(|s| (s.decomposition.d1, s.decomposition.d2))
        .collect();
    ensure(pairs == [(56, -23), (161, -8)], || {
        format!("b_46,7 selects {pairs:?}")
    })?;
    let radicands: Vec<_> = r.product.factors.iter().map(|(u, _)| u.radicand).collect();
    ensure(radicands.contains(&161), || {
        format!("b_46,7 units over {radicands:?}")
    })?;
    Ok(format!(
        "10 unit products, max residual {}; 9 tables as printed, b_46,7 via 56×(−23) and √161",
        worst.show()
    ))
}

fn representations() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x7e7a);
    let mut worst = Worst::default();
    for _ in 0..20 {
        let den = rng.gen_range(1..=12u64);
        let num = rng.gen_range(1..=50 * den);
        let n = rng.gen_range(1..=9u32);
        let m = PosRational::new(num, den).map_err(|e| e.to_string())?;
        let r = qseries::b_numeric_checked(m, n, 256).map_err(|e| format!("({m},{n}): {e}"))?;
        ensure(r.spread.abs_lt_pow2(-224), || {
            format!("(m, n) = ({m}, {n}): spread {}", log2(&r.spread))
        })?;
        worst.add(&r.spread);
    }
    Ok(format!("20 random (m, n), max spread {}", worst.show()))
}

fn class_numbers() -> Outcome {
    let mut checked = 0;
    for d in -2000..0i64 {
        if !quadfields::is_fundamental(d) {
            continue;
        }
        let disc = Disc::fundamental(d).map_err(|e| e.to_string())?;
        let forms = quadfields::reduced_forms(disc)
            .map_err(|e| e.to_string())?
            .len() as u64;
        let analytic = quadfields::analytic_imag_class_number(disc).map_err(|e| e.to_string())?;
        ensure(forms == analytic, || {
            format!("h({d}): forms {forms}, analytic {analytic}")
        })?;
        checked += 1;
    }
    let table = [
        (-120, 4),
        (-168, 4),
        (-280, 4),
        (-312, 4),
        (-408, 4),
        (-520, 4),
        (-760, 4),
        (-952, 8),
        (-1288, 8),
        (-2632, 8),
    ];
    for (d, h) in table {
        let got = Disc::fundamental(d)
            .and_then(quadfields::class_number)
            .map_err(|e| e.to_string())?;
        ensure(got == h, || format!("h({d}) = {got}, expected {h}"))?;
    }
    Ok(format!(
        "{checked} discriminants agree, 10 tabulated values hold"
    ))
}

fn units(corpus: &Corpus) -> Outcome {
    let mut printed = BTreeMap::new();
    for e in &corpus.entry {
        let Entry::ClassData(row) = e else { continue };
        let decs = row
            .typo
            .as_ref()
            .and_then(|t| t.decompositions.as_ref())
            .unwrap_or(&row.decompositions);
        for dec in decs {
            printed.insert(dec.d1, dec.eps.clone());
        }
    }
    let ds = [8, 17, 24, 40, 56, 65, 136, 161, 329, 376];
    for d1 in ds {
        let eps = quadfields::fundamental_unit(Disc::fundamental(d1).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let norm = eps.exact_norm();
        ensure(norm == eps.norm.into() && eps.norm.abs() == 1, || {
            format!("d = {d1}: norm {norm}")
        })?;
        let want = ev(
            printed
                .get(&d1)
                .ok_or_else(|| format!("no printed unit for {d1}"))?,
            256,
        )?;
        let rel = eps.to_bigreal(256).rel_diff(&want);
        ensure(rel.abs_lt_pow2(-224), || {
            format!("d = {d1}: {eps} differs from the table")
        })?;
    }
    Ok("10 units match the tables, norms ±1 exactly".into())
}

fn unit_polys() -> Outcome {
    let mut degrees = Vec::new();
    for &(m, n) in &PAIRS {
        let r = derive::derive_b(m, n, 256).map_err(|e| e.to_string())?;
        let x = r.product.value(2048).map_err(|e| e.to_string())?;
        let p = algrec::min_poly(&x, 8, 1024).map_err(|e| format!("({m},{n}): {e}"))?;
        ensure(algrec::is_unit_poly(&p) && p.degree() <= 8, || {
            format!("({m},{n}): {p}")
        })?;
        // re-check at twice the precision used to find it
        let x = r.product.value(4096).map_err(|e| e.to_string())?;
        let res = p.eval(&x);
        ensure(res.abs_lt_pow2(-3000), || {
            format!("({m},{n}): p(b) = {}", log2(&res))
        })?;
        degrees.push(p.degree());
    }
    Ok(format!("10 unit polynomials, degrees {degrees:?}"))
}

fn limit_identity() -> Outcome {
    let mut worst = Worst::default();
    for &(m, n) in &PAIRS {
        let li = derive::verify_limit_identity(m, n, 256).map_err(|e| format!("({m},{n}): {e}"))?;
        ensure(li.residual.abs_lt_pow2(-216), || {
            format!("({m},{n}): residual {}", log2(&li.residual))
        })?;
        worst.add(&li.residual);
    }
    Ok(format!("10 pairs, max residual {}", worst.show()))
}

fn enumeration() -> Outcome {
    let t = Instant::now();
    let list = derive::enumerate_admissible(10000).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let one: Vec<_> = list
        .iter()
        .filter(|a| a.tag == CaseTag::OneClass)
        .map(|a| (a.m, a.n))
        .collect();
    let two: Vec<_> = list
        .iter()
        .filter(|a| a.tag == CaseTag::TwoClass)
        .map(|a| (a.m, a.n))
        .collect();
    ensure(one == PAIRS[..7], || format!("one-class pairs {one:?}"))?;
    ensure(two == PAIRS[7..], || format!("two-class pairs {two:?}"))?;
    ensure(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("7 one-class + 3 two-class in {:.0?}", elapsed))
}

fn pipeline(corpus: &Corpus) -> Outcome {
    let prec = 512;
    for (k, x) in [
        (46, "(add 29 (mul 4 (sqrt 46)))"),
        (94, "(add 159 (mul 42 (sqrt 14)))"),
    ] {
        let g = modeq::derive_gn_pipeline(k, prec).map_err(|e| format!("k = {k}: {e}"))?;
        ensure(g.certification.abs_lt_pow2(-448), || {
            format!("k = {k}: certified to {}", log2(&g.certification))
        })?;
        let dx = g.x.rel_diff(&ev(x, prec)?);
        ensure(dx.abs_lt_pow2(-448), || {
            format!("k = {k}: x off by {}", log2(&dx))
        })?;
        ensure(g.modeq_residual.abs_lt_pow2(-464), || {
            format!(
                "k = {k}: modular equation residual {}",
                log2(&g.modeq_residual)
            )
        })?;
    }
    let mut shown = 0;
    let mut reciprocal = 0;
    for e in &corpus.entry {
        let (Entry::GValue(p) | Entry::ModularIdentity(p)) = e else {
            continue;
        };
        let r = verify::verify_entry(e, prec);
        ensure(r.status != Status::Fail, || {
            format!("{}: {}", r.id, r.notes.join("; "))
        })?;
        shown += 1;
        if p.branch == theta_units::corpus::BranchTag::Reciprocal {
            reciprocal += 1;
        }
    }
    Ok(format!(
        "g_322, g_658 certified; {shown} displays matched ({reciprocal} on the reciprocal branch)"
    ))
}

fn modular_equation() -> Outcome {
    let mut worst = Worst::default();
    for n in [3u64, 5, 9, 11, 46] {
        let inv = |r: Result<PosRational, _>| {
            r.and_then(|r| qseries::class_invariant_numeric(InvariantKind::SmallG, r, 256))
                .map_err(|e: theta_units_core::Error| e.to_string())
        };
        let big = inv(PosRational::integer(7 * n))?;
        let small = inv(PosRational::new(n, 7))?;
        let res = modeq::modular_equation_residual(&big, &small, 256).map_err(|e| e.to_string())?;
        ensure(res.abs_lt_pow2(-208), || {
            format!("n = {n}: residual {}", log2(&res))
        })?;
        worst.add(&res);
    }
    Ok(format!(
        "n = 3, 5, 9, 11, 46, max residual {}",
        worst.show()
    ))
}

fn main() -> ExitCode {
    let corpus = Corpus::embedded();
    let criteria: [(&str, &dyn Fn() -> Outcome); 10] = [
        ("closed-form displays vs q-series", &|| b_displays(&corpus)),
        ("derivation vs printed class tables", &|| {
            derivations(&corpus)
        }),
        ("three representations of b agree", &representations),
        ("class numbers, forms vs analytic", &class_numbers),
        ("fundamental units", &|| units(&corpus)),
        ("derived b are algebraic units", &unit_polys),
        ("limit identity", &limit_identity),
        ("enumeration counts", &enumeration),
        ("g_322 and g_658 pipeline", &|| pipeline(&corpus)),
        ("degree-7 modular equation on q-series", &modular_equation),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2} s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
