use num_complex::Complex64;
use proptest::prelude::*;

use zassenhaus::coefficients::{format_rational, parse_rational, rat, CoeffKind, CoeffTable};
use zassenhaus::falgebra::{parse_ang_spec, FTerm};
use zassenhaus::spectral::{read_state_dump, write_state_dump, Grid, StateVector};
use zassenhaus::splitting::{cost, kinetic_exponent, parse_sigma, potential_exponent, zassenhaus, Splitting};
use zassenhaus::symfunc::{parse_expr, Symbol};

#[test]
fn tables_round_trip_through_json() {
    for kind in ["pi", "lambda", "mu", "gamma"] {
        let kind: CoeffKind = kind.parse().unwrap();
        let table = CoeffTable::build(kind, 6).unwrap();
        assert_eq!(CoeffTable::from_json(&table.to_json()).unwrap(), table);
    }
    assert!(CoeffTable::build(CoeffKind::Pi, 13).is_err());
    assert!(CoeffTable::from_json("{\"kind\":\"pi\",\"entries\":[{\"k\":0,\"l\":0,\"n\":1,\"i\":0,\"value\":\"1\"}]}").is_err());
}

#[test]
fn splittings_round_trip_through_json() {
    let v = Symbol::new("V").unwrap();
    for n in 0..=2 {
        for sigma in [rat(1, 2), rat(1, 1), rat(3, 2)] {
            let s = zassenhaus(&kinetic_exponent(), &potential_exponent(&v), n, &sigma).unwrap();
            assert_eq!(Splitting::from_json(&s.to_json()).unwrap(), s);
        }
    }
}

#[test]
fn documented_commutators() {
    let c = |a: &str, b: &str| parse_ang_spec(a).unwrap().commutator(&parse_ang_spec(b).unwrap()).to_string();
    assert_eq!(c("f:2", "g:1"), "⟨−½ f D³g − Df D²g⟩₀ + ⟨2 f Dg − Df g⟩₂");
    assert_eq!(c("V:0", "V:0"), "0");
    assert_eq!(c("V:0", "1:2"), "−2⟨DV⟩₁");
    assert_eq!(FTerm::zero().to_string(), "0");
}

#[test]
fn cost_values() {
    assert_eq!(cost(1, &rat(1, 1)).unwrap(), 12);
    assert_eq!(cost(2, &rat(1, 1)).unwrap(), 44);
    assert!(cost(2, &parse_sigma("1/3").unwrap()).is_err());
    assert!(parse_sigma("0").is_err());
    assert!(parse_sigma("-1/2").is_err());
}

proptest! {
    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = rat(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn dumps_round_trip(log_m in 2u32..7, seed in prop::collection::vec(-1e3f64..1e3, 2..3)) {
        let m = 1usize << log_m;
        let g = Grid::new(m).unwrap();
        let data = (0..m).map(|j| Complex64::new(seed[0] * j as f64, seed[1] / (j as f64 + 1.0))).collect();
        let u = StateVector::new(g, data).unwrap();
        let mut buf = Vec::new();
        write_state_dump(&mut buf, &u).unwrap();
        prop_assert_eq!(buf.len(), 16 + 16 * m);
        prop_assert_eq!(read_state_dump(&buf).unwrap(), u);
    }

    #[test]
    fn printed_expressions_reparse(a in -5i32..5, b in 1i32..4) {
        let src = format!("{a}*cos({b}*pi*x) - exp(-x^2)/{b}");
        let e = parse_expr(&src).unwrap();
        let again = parse_expr(&e.to_string()).unwrap();
        for x in [-0.9, -0.1, 0.4, 1.0] {
            prop_assert!((e.eval(x) - again.eval(x)).abs() < 1e-12);
        }
    }
}
