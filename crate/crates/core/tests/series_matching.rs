//! Exact-rational checks of every compiled-in coefficient table.

use chernoff_core::pade::{
    derive, exact_series, first_mismatch, leading_gap_sign, same_function, shape, table_matches,
    taylor_of,
};
use chernoff_core::{
    pade_table, series_coefficients, ApproxOrder, ExponentKind, Provenance, RationalApprox,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use ApproxOrder::*;
use ExponentKind::*;

fn ints(c: &[i64]) -> Vec<BigRational> {
    c.iter()
        .map(|&v| BigRational::from_integer(BigInt::from(v)))
        .collect()
}

#[test]
fn float_series_agree_with_exact_series() {
    for kind in ExponentKind::ALL {
        let exact = exact_series(kind, 12);
        let float = series_coefficients(kind, 12).unwrap();
        for (e, f) in exact.iter().zip(float.iter()) {
            assert_eq!(e.to_f64().unwrap(), *f, "{kind}");
        }
    }
}

#[test]
fn quadratic_gap_orders() {
    // O(δ⁴) for the upper quadratics, O(δ⁵) for the lower ones.
    assert_eq!(
        first_mismatch(PredUpper, pade_table(PredUpper, Pade2).unwrap(), 12),
        4
    );
    assert_eq!(
        first_mismatch(RegUpper, pade_table(RegUpper, Pade2).unwrap(), 12),
        4
    );
    assert_eq!(
        first_mismatch(PredLower, pade_table(PredLower, Pade2).unwrap(), 12),
        5
    );
    assert_eq!(
        first_mismatch(RegLower, pade_table(RegLower, Pade2).unwrap(), 12),
        5
    );
}

#[test]
fn classic_gap_order() {
    for kind in [PredUpper, PredLower] {
        assert_eq!(
            first_mismatch(kind, pade_table(kind, Classic).unwrap(), 12),
            3
        );
    }
}

#[test]
fn higher_orders_match_further() {
    let expected = [
        (PredUpper, Pade3, 6),
        (PredUpper, Pade4, 8),
        (PredLower, Pade3, 7),
        (PredLower, Pade4, 9),
        (RegUpper, Pade3, 6),
        (RegUpper, Pade4, 8),
        (RegLower, Pade3, 7),
        (RegLower, Pade4, 9),
    ];
    for (kind, order, gap) in expected {
        let table = pade_table(kind, order).unwrap();
        let quad = first_mismatch(kind, pade_table(kind, Pade2).unwrap(), 12);
        let got = first_mismatch(kind, table, 12);
        assert_eq!(got, gap, "{kind} {order}");
        assert!(got > quad);
        if order == Pade4 {
            assert!(got > first_mismatch(kind, pade_table(kind, Pade3).unwrap(), 12));
        }
    }
}

#[test]
fn tables_equal_rederived_pade_forms() {
    for kind in ExponentKind::ALL {
        for order in [Pade2, Pade3, Pade4] {
            let (m, n) = shape(kind, order).unwrap();
            let (p, q) = derive(kind, m, n).unwrap();
            let table = pade_table(kind, order).unwrap();
            assert!(table_matches(table, &p, &q), "{kind} {order}");
            let expected = if order == Pade2 {
                Provenance::Transcribed
            } else {
                Provenance::Rederived
            };
            assert_eq!(table.provenance, expected);
        }
    }
}

#[test]
fn every_table_lies_above_the_exponent_near_zero() {
    for kind in ExponentKind::ALL {
        for order in ApproxOrder::ALL {
            if let Ok(table) = pade_table(kind, order) {
                assert_eq!(leading_gap_sign(kind, table, 12), -1, "{kind} {order}");
            }
        }
    }
}

#[test]
fn published_higher_order_forms() {
    // Integer closed forms of the cubic and quartic tables.
    let cases: [(ExponentKind, ApproxOrder, &[i64], &[i64]); 7] = [
        (PredUpper, Pade3, &[0, 0, -15, -7], &[30, 24, 3]),
        (
            PredUpper,
            Pade4,
            &[0, 0, -210, -200, -35],
            &[420, 540, 180, 12],
        ),
        (PredLower, Pade3, &[0, 0, -210, 125], &[420, -390, 60, 3]),
        (
            PredLower,
            Pade4,
            &[0, 0, 7350, -8260, 1975],
            &[-14700, 21420, -8640, 780, 18],
        ),
        (
            RegUpper,
            Pade4,
            &[0, 0, -210, -220, -45],
            &[420, 720, 360, 48],
        ),
        (RegLower, Pade3, &[0, 0, -240, 155], &[480, -630, 180, 3]),
        (
            RegLower,
            Pade4,
            &[0, 0, 3150, -3780, 985],
            &[-6300, 11760, -6660, 1080, 6],
        ),
    ];
    for (kind, order, num, den) in cases {
        let table = pade_table(kind, order).unwrap();
        assert!(
            table_matches(table, &ints(num), &ints(den)),
            "{kind} {order}"
        );
    }
}

#[test]
fn reg_lower_cubic_with_unit_cubic_coefficient_is_wrong() {
    // "… + 180δ² + δ³" in the denominator does not match the series.
    let num = ints(&[0, 0, -240, 155]);
    let bad = ints(&[480, -630, 180, 1]);
    let (p, q) = derive(RegLower, 1, 3).unwrap();
    assert!(!same_function(&num, &bad, &p, &q));
}

#[test]
fn reg_upper_three_three_form_lies_below_exponent() {
    // The [3/3] approximant of −δ + ln(1+δ) matches through δ⁶ but its first
    // error term has the wrong sign, so it is not an upper bound.
    static THREE_THREE: RationalApprox = RationalApprox {
        numerator: &[0, 0, 240, 155],
        denominator: &[-480, -630, -180, 3],
        provenance: Provenance::Rederived,
    };
    let (p, q) = derive(RegUpper, 1, 3).unwrap();
    assert!(table_matches(&THREE_THREE, &p, &q));
    assert_eq!(first_mismatch(RegUpper, &THREE_THREE, 12), 7);
    assert_eq!(leading_gap_sign(RegUpper, &THREE_THREE, 12), 1);
    for &x in &[0.05, 0.2, 0.5, 1.0, 3.0] {
        assert!(THREE_THREE.eval(x) < -x + x.ln_1p(), "{x}");
    }
}

#[test]
fn taylor_of_matches_quadratic_expansions() {
    let rat = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let s = taylor_of(pade_table(PredUpper, Pade2).unwrap(), 7);
    assert_eq!(
        s[2..].to_vec(),
        vec![rat(-1, 2), rat(1, 6), rat(-1, 18), rat(1, 54), rat(-1, 162)]
    );
    let s = taylor_of(pade_table(PredLower, Pade2).unwrap(), 7);
    assert_eq!(
        s[2..].to_vec(),
        vec![
            rat(-1, 2),
            rat(-1, 6),
            rat(-1, 12),
            rat(-1, 27),
            rat(-11, 648)
        ]
    );
}
