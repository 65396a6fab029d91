use intchain::bounds::{
    best_coefficient, burcsi_nagy, chenli_coeff, equality_check, grosz_ck, grosz_coeff, la_upper, report,
    theorem_main, Equality,
};
use intchain::gallery::{gallery, params};
use intchain::par::Exec;
use num_bigint::BigInt;
use num_rational::BigRational;

fn q(s: &str) -> BigRational {
    s.parse().unwrap()
}

#[test]
fn substitution_examples() {
    assert_eq!(burcsi_nagy(4, 3), (5, q("5/2")));
    assert_eq!(burcsi_nagy(16, 5), (19, q("19/2")));
    assert_eq!(burcsi_nagy(2, 2), (2, q("1")));
    assert_eq!(theorem_main(16, 5, 3), (16, q("8")));
    assert_eq!(theorem_main(7, 3, 1), (7, q("7/2")));
    assert_eq!(theorem_main(9, 4, 0), burcsi_nagy(9, 4));
    assert_eq!(grosz_ck(16, 5, 2).unwrap(), BigInt::from(19));
    assert_eq!(grosz_ck(16, 5, 3).unwrap(), BigInt::from(47));
    assert_eq!(grosz_ck(4, 3, 4).unwrap(), BigInt::from(59));
    assert_eq!(chenli_coeff(4, 3, 1).unwrap(), q("5/2"));
    assert_eq!(chenli_coeff(4, 3, 2).unwrap(), q("11/3"));
    assert_eq!(chenli_coeff(16, 5, 3).unwrap(), q("47/4"));
    assert_eq!(grosz_coeff(4, 3, 2).unwrap(), q("5/2"));
    assert_eq!(grosz_coeff(4, 3, 3).unwrap(), q("23/4"));
}

#[test]
#[allow(clippy::reversed_empty_ranges)]
fn invalid_widths() {
    assert!(grosz_ck(4, 3, 1).is_err());
    assert!(grosz_coeff(4, 3, 0).is_err());
    assert!(chenli_coeff(4, 3, 0).is_err());
    assert!(best_coefficient(4, 3, 3..=2).is_err());
}

#[test]
fn best_is_a_minimum() {
    let b = best_coefficient(16, 5, 1..=6).unwrap();
    let exact = b.exact.clone().unwrap();
    for k in 1..=6 {
        assert!(exact <= chenli_coeff(16, 5, k).unwrap());
        if k >= 2 {
            assert!(exact <= grosz_coeff(16, 5, k).unwrap());
        }
    }
}

#[test]
fn fig2_report() {
    let r = report(16, 5, Some(3), 3, Some(10)).unwrap();
    let find = |name: &str| r.entries.iter().find(|e| e.name == name).unwrap();
    assert_eq!(find("theorem4").c2_bound.as_deref(), Some("16"));
    assert_eq!(find("burcsi_nagy").c2_bound.as_deref(), Some("19"));
    // 8 * C(10,5)
    assert_eq!(find("theorem4").la_n_bound.as_deref(), Some("2016"));
    assert_eq!(r.best.name, "theorem4");
    assert_eq!(la_upper(&q("8"), 10), q("2016"));

    let r = report(16, 5, None, 3, None).unwrap();
    assert!(r.entries.iter().all(|e| e.name != "theorem4" && e.la_n_bound.is_none()));
}

#[test]
fn equality_outcomes() {
    let d2 = gallery("D", &params(&[("k", 2)])).unwrap();
    let r = equality_check(&d2, 5, Exec::Parallel).unwrap();
    assert_eq!(r.target, "5/2");
    assert!(matches!(r.result, Equality::Fails { e: 2, window: Some(_), .. }));

    let b = gallery("B", &params(&[])).unwrap();
    let r = equality_check(&b, 6, Exec::Parallel).unwrap();
    assert_eq!(r.result, Equality::Holds { n: 6 });

    let s1 = gallery("S'", &params(&[])).unwrap();
    let r = equality_check(&s1, 6, Exec::Parallel).unwrap();
    assert_eq!((r.alpha, r.target.as_str()), (2, "4"));
}
