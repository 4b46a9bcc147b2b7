use std::collections::BTreeSet;

use proptest::prelude::*;
use theta_units_core::quadfields::{self, ClassData, Disc, QForm};

/// Narrow class number of `d > 0` by counting cycles of reduced indefinite
/// forms under the reduction operator ρ.
fn cycle_count(d: i64) -> u64 {
    let s = (1..).take_while(|k: &i64| k * k < d).last().unwrap_or(0);
    // 0 < b < √d and √d − b < 2|a| < √d + b, with √d irrational
    let reduced = |a: i64, b: i64| b <= s && 2 * a.abs() > s - b && 2 * a.abs() <= s + b;
    let mut forms = BTreeSet::new();
    for b in 1..=s {
        if (b * b - d) % 4 != 0 {
            continue;
        }
        let ac = (b * b - d) / 4;
        for a in (1..=ac.abs()).filter(|a| ac % a == 0) {
            for a in [a, -a] {
                if reduced(a, b) {
                    forms.insert((a, b, ac / a));
                }
            }
        }
    }
    let rho = |(_, b, c): (i64, i64, i64)| {
        let m = 2 * c.abs();
        let nb = s - (s + b).rem_euclid(m);
        (c, nb, (nb * nb - d) / (4 * c))
    };
    let mut seen = BTreeSet::new();
    let mut cycles = 0;
    for &f in &forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        loop {
            assert!(
                forms.contains(&g),
                "ρ{f:?} left the reduced set at {g:?} for d = {d}"
            );
            seen.insert(g);
            g = rho(g);
            if g == f {
                break;
            }
        }
    }
    cycles
}

#[test]
fn class_numbers_double_oracle() {
    let mut count = 0;
    for d in (-2000..=2000i64).filter(|&d| quadfields::is_fundamental(d)) {
        let disc = Disc::fundamental(d).unwrap();
        if d < 0 {
            let forms = quadfields::reduced_forms(disc).unwrap().len() as u64;
            assert_eq!(
                forms,
                quadfields::analytic_imag_class_number(disc).unwrap(),
                "d = {d}"
            );
            assert_eq!(quadfields::class_number(disc).unwrap(), forms);
        } else {
            let narrow = quadfields::narrow_class_number(disc).unwrap();
            assert_eq!(narrow, cycle_count(d), "d = {d}");
        }
        count += 1;
    }
    assert!(count > 1200);
}

#[test]
fn tabulated_values() {
    // real fields of small class number greater than 1
    for (d, h) in [
        (40, 2),
        (60, 2),
        (316, 3),
        (229, 3),
        (328, 4),
        (-4, 1),
        (-23, 3),
        (-56, 4),
    ] {
        assert_eq!(
            quadfields::class_number(Disc::fundamental(d).unwrap()).unwrap(),
            h,
            "d = {d}"
        );
    }
}

#[test]
fn units_have_exact_norm() {
    for d in (5..=3000i64).filter(|&d| quadfields::is_fundamental(d)) {
        let u = quadfields::fundamental_unit(Disc::fundamental(d).unwrap()).unwrap();
        assert_eq!(u.exact_norm(), u.norm.into(), "d = {d}");
        assert!(u.norm.abs() == 1);
    }
    let u = quadfields::fundamental_unit(Disc::fundamental(376).unwrap()).unwrap();
    assert_eq!(u.to_string(), "2143295+221064√94");
}

#[test]
fn genera_divide_class_number() {
    for d in (-2000..0i64).filter(|&d| quadfields::is_fundamental(d)) {
        let c = ClassData::compute(Disc::fundamental(d).unwrap()).unwrap();
        let t = quadfields::prime_discriminants(c.d).unwrap();
        assert_eq!(t.iter().product::<i64>(), d);
        assert_eq!(c.num_genera, 1 << (t.len() - 1));
        assert_eq!(c.num_genera * c.classes_per_genus, c.h);
    }
}

fn act(f: QForm, (p, q, r, s): (i64, i64, i64, i64)) -> QForm {
    QForm::new(
        f.a * p * p + f.b * p * r + f.c * r * r,
        2 * f.a * p * q + f.b * (p * s + q * r) + 2 * f.c * r * s,
        f.a * q * q + f.b * q * s + f.c * s * s,
    )
}

fn sl2() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    prop::collection::vec(-2i64..=2, 1..5).prop_map(|ks| {
        // product of T^k S
        ks.into_iter().fold((1, 0, 0, 1), |(p, q, r, s), k| {
            let (p, q, r, s) = (p, p * k + q, r, r * k + s);
            (q, -p, s, -r)
        })
    })
}

const DISCS: [i64; 8] = [-120, -280, -408, -520, -952, -1288, -2632, -1155];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn characters_are_class_invariants(di in 0..DISCS.len(), fi in 0usize..64, g in sl2()) {
        let d = Disc::fundamental(DISCS[di]).unwrap();
        let forms = quadfields::reduced_forms(d).unwrap();
        let f = forms[fi % forms.len()];
        let h = act(f, g);
        prop_assert_eq!(h.discriminant(), d.value());
        prop_assert_eq!(h.reduce().unwrap(), f);
        let mut product = 1;
        for d1 in quadfields::prime_discriminants(d).unwrap() {
            let chi = quadfields::genus_character(d1, &f).unwrap();
            prop_assert_eq!(chi, quadfields::genus_character(d1, &h).unwrap());
            product *= chi;
            // every represented value prime to d1 gives the same symbol
            for (x, y) in [(1, 0), (0, 1), (1, 1), (2, 1), (1, -2), (3, 2)] {
                let v = f.eval(x, y);
                if num_integer::gcd(v, d1) == 1 {
                    prop_assert_eq!(quadfields::kronecker_symbol(d1, v as u64), chi);
                }
            }
        }
        prop_assert_eq!(product, 1);
    }
}

#[test]
fn principal_form_is_in_the_principal_genus() {
    for d in DISCS {
        let d = Disc::fundamental(d).unwrap();
        let principal = quadfields::reduced_forms(d).unwrap()[0];
        assert_eq!(principal.a, 1);
        for (d1, _) in quadfields::decomposition_pairs(d).unwrap() {
            assert_eq!(quadfields::genus_character(d1, &principal).unwrap(), 1);
        }
    }
}
