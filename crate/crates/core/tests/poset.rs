use intchain::embed::is_isomorphic;
use intchain::gallery::{gallery, params};
use intchain::{format, oplus, otimes, Error, GradedPoset, Poset};

fn diamond() -> Poset {
    Poset::from_covers(
        &["a", "b", "c", "d"],
        &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
    )
    .unwrap()
}

fn entry(name: &str) -> Poset {
    gallery(name, &params(&[])).unwrap()
}

fn level_names(p: &Poset) -> Vec<Vec<String>> {
    p.mirsky_levels()
        .levels
        .iter()
        .map(|l| l.iter().map(|&e| p.name_of(e).to_string()).collect())
        .collect()
}

#[test]
fn singleton_and_diamond_closure() {
    let s = Poset::from_covers(&["a"], &[]).unwrap();
    assert_eq!((s.len(), s.height()), (1, 1));

    let d = diamond();
    assert_eq!(d.relation_count(), 5);
    for (x, y) in [("a", "b"), ("a", "c"), ("a", "d"), ("b", "d"), ("c", "d")] {
        assert!(d.lt(d.index_of(x).unwrap(), d.index_of(y).unwrap()));
    }
}

#[test]
fn two_cycle_is_rejected() {
    let err = Poset::from_covers(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
    assert!(matches!(err, Error::CycleDetected(_)));
}

#[test]
fn heights() {
    assert_eq!(Poset::chain(4).height(), 4);
    assert_eq!(diamond().height(), 3);
    assert_eq!(entry("fig2").height(), 5);
}

#[test]
fn fig2_levels() {
    let p = entry("fig2");
    let levels = level_names(&p);
    assert_eq!(p.mirsky_levels().sizes(), vec![2, 5, 2, 4, 3]);
    assert_eq!(levels[0], vec!["z1", "z2"]);
    assert_eq!(levels[1], vec!["y1", "y2", "y3", "y4", "y5"]);
    assert_eq!(levels[2], vec!["x1", "x2"]);
    assert_eq!(levels[3], vec!["s1", "s2", "s3", "s4"]);
    assert_eq!(levels[4], vec!["r1", "r2", "r3"]);
    assert!(p.is_graded());
}

#[test]
fn remark_levels_and_gradedness() {
    let p = entry("remark");
    let levels = level_names(&p);
    let mut first = vec!["u1".to_string()];
    first.extend((1..=12).map(|j| format!("v{j}")));
    assert_eq!(levels[0], first);
    assert_eq!(&levels[1..], &[vec!["u2"], vec!["u3"], vec!["u4"]]);

    let check = p.graded_check();
    assert!(!check.graded);
    let w: Vec<&str> = check.witness.unwrap().iter().map(|&e| p.name_of(e)).collect();
    assert_eq!(w.len(), 2);
    assert!(w[0].starts_with('v') && w[1] == "u4");
    assert!(matches!(GradedPoset::new(p), Err(Error::NotGraded(_))));
}

#[test]
fn duals() {
    let v = entry("V");
    assert!(is_isomorphic(&v.dual(), &entry("Lambda")).unwrap());
    assert!(is_isomorphic(&diamond().dual(), &diamond()).unwrap());

    let p1 = gallery("P1", &params(&[("n", 3)])).unwrap();
    let d = p1.dual();
    assert_eq!(d.len(), p1.len());
    assert_eq!(d.relation_count(), p1.relation_count());
    for a in 0..p1.len() {
        for b in 0..p1.len() {
            assert_eq!(p1.lt(a, b), d.lt(b, a));
        }
    }
}

#[test]
fn linear_sums() {
    let pt = entry("point");
    let two = oplus(&pt, &pt).unwrap();
    assert!(is_isomorphic(&two, &Poset::chain(2)).unwrap());

    let v1 = oplus(&entry("V"), &pt).unwrap();
    assert_eq!((v1.len(), v1.height()), (4, 3));

    let dd = oplus(&diamond(), &diamond()).unwrap();
    assert_eq!((dd.len(), dd.height()), (8, 6));
}

#[test]
fn glued_sums() {
    let c2 = Poset::chain(2);
    assert!(is_isomorphic(&otimes(&c2, &c2).unwrap(), &Poset::chain(3)).unwrap());

    let dd = otimes(&diamond(), &diamond()).unwrap();
    assert_eq!((dd.len(), dd.height()), (7, 5));

    let err = otimes(&entry("V"), &diamond()).unwrap_err();
    assert!(matches!(err, Error::NoGreatestElement));
}

#[test]
fn incomparability() {
    let d = diamond();
    assert!(d.incomparable("b", "c").unwrap());
    assert!(!d.incomparable("a", "d").unwrap());
    let f = entry("fig2");
    assert!(f.incomparable("s1", "r2").unwrap());
    assert!(!f.incomparable("s1", "r1").unwrap());
    assert!(d.incomparable("a", "zz").is_err());
}

#[test]
fn text_format() {
    let text = "# a comment\nposet d\nelements: a b c d  # trailing\nrelations: a<b<d a<c c<d\n";
    let p = format::parse(text).unwrap();
    assert_eq!(p.name(), Some("d"));
    assert!(is_isomorphic(&p, &diamond()).unwrap());

    let again = format::parse(&format::write(&p)).unwrap();
    assert_eq!(again.names(), p.names());
    assert_eq!(again.covers(), p.covers());

    match format::parse("elements: a b\nrelations: a<\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("unexpected {other:?}"),
    }
    assert!(format::parse("elements: a\nposet late\n").is_err());
    assert!(matches!(format::parse("elements: a b\n"), Err(Error::Disconnected(_))));
}
