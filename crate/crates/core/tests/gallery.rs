use intchain::auxgraph::{alpha_dp, build_aux_graph};
use intchain::embed::is_isomorphic;
use intchain::gallery::{
    excluded_pairs, expected, facts, gallery, gallery_checked, lambda_extension, list, params, random_graded_poset,
    self_test, vee_extension, AuxShape,
};
use intchain::{format, Error, GradedPoset};

fn graded(name: &str) -> GradedPoset {
    GradedPoset::new(gallery(name, &params(&[])).unwrap()).unwrap()
}

fn default_params(name: &str) -> Vec<(&'static str, usize)> {
    match name {
        "P1" => vec![("n", 3)],
        "P2" => vec![("n", 5)],
        "P3" => vec![("n", 2)],
        "P4" => vec![("n", 3)],
        "chain" => vec![("k", 4)],
        "D" => vec![("k", 3)],
        _ => vec![],
    }
}

#[test]
fn every_entry_passes_its_self_test() {
    for info in list() {
        let ps = params(&default_params(info.name));
        let p = gallery_checked(info.name, &ps).unwrap_or_else(|e| panic!("{}: {e}", info.name));
        let again = format::parse(&format::write(&p)).unwrap();
        assert!(is_isomorphic(&p, &again).unwrap(), "{}", info.name);
        if info.name != "remark" {
            assert!(expected(info.name, &ps).is_some(), "{}", info.name);
        }
    }
}

#[test]
fn named_examples() {
    let p5 = gallery("P5", &params(&[])).unwrap();
    let mut names = p5.names().to_vec();
    names.sort();
    assert_eq!(names, ["x1", "x2", "y1", "y2", "y3", "y4", "z1", "z2"]);
    let f = facts(&p5);
    assert_eq!((f.size, f.height, f.alpha), (8, 3, Some(1)));

    let d3 = gallery("D", &params(&[("k", 3)])).unwrap();
    assert_eq!((d3.len(), d3.height()), (5, 3));

    let s1 = graded("S'");
    assert_eq!(s1.levels().sizes(), [2, 4, 3]);
    assert_eq!(facts(s1.poset()).aux, Some(AuxShape::two_k1()));

    let s2 = gallery("S''", &params(&[])).unwrap();
    let f = facts(&s2);
    assert_eq!(f.alpha, Some(2));
    assert_eq!(f.aux, Some(AuxShape::k4_minus_incident_pair()));
}

#[test]
fn bad_requests() {
    assert!(matches!(gallery("P9", &params(&[])), Err(Error::UnknownEntry(_))));
    assert!(matches!(gallery("P1", &params(&[("n", 2)])), Err(Error::BadParams(_))));
    assert!(matches!(gallery("P1", &params(&[])), Err(Error::BadParams(_))));
    assert!(matches!(gallery("B", &params(&[("n", 2)])), Err(Error::BadParams(_))));

    let d2 = gallery("D", &params(&[("k", 2)])).unwrap();
    assert!(matches!(
        self_test("fig2", &params(&[]), &d2),
        Err(Error::SelfTest { .. })
    ));
}

#[test]
fn s_extensions_reproduce_s_prime() {
    let s = graded("S");
    let target = gallery("S'", &params(&[])).unwrap();
    let mut found = false;
    for top in excluded_pairs(&s, 2) {
        let step = lambda_extension(&s, 3, top, None).unwrap();
        assert_eq!(step.levels().sizes(), [1, 4, 3]);
        for bottom in excluded_pairs(&step, 2) {
            let q = vee_extension(&step, 1, bottom, None).unwrap();
            assert_eq!(q.levels().sizes(), [2, 4, 3]);
            assert!(q.poset().is_connected());
            if is_isomorphic(q.poset(), &target).unwrap() {
                found = true;
            }
        }
    }
    assert!(found);
}

#[test]
fn extension_grows_aux_graph() {
    let q = graded("Q");
    let before = build_aux_graph(&q).len();
    let pair = excluded_pairs(&q, 2)[0];
    let ext = lambda_extension(&q, 3, pair, Some("x")).unwrap();
    assert!(ext.poset().index_of("x").is_some());
    let g = build_aux_graph(&ext);
    assert!(g.len() > before);
    assert!(alpha_dp(&g).size >= 1);
}

#[test]
fn extension_errors() {
    let d2 = graded("B");
    let pair = excluded_pairs(&d2, 1)[0];
    assert!(matches!(
        lambda_extension(&d2, 2, pair, None),
        Err(Error::LevelTooSmall { level: 1, size: 2 })
    ));
    let s = graded("S");
    let pair = excluded_pairs(&s, 2)[0];
    assert!(lambda_extension(&s, 2, pair, None).is_err());
    assert!(lambda_extension(&s, 3, [pair[0], pair[0]], None).is_err());
    assert!(lambda_extension(&s, 3, pair, Some("m1")).is_err());
}

#[test]
fn vee_is_dual_lambda() {
    let s = graded("S");
    let h = s.height();
    let dual = GradedPoset::new(s.poset().dual()).unwrap();
    for pair in excluded_pairs(&s, 2) {
        let v = vee_extension(&s, 1, pair, Some("x")).unwrap();
        let l = lambda_extension(&dual, h, pair, Some("x")).unwrap();
        assert!(is_isomorphic(v.poset(), &l.poset().dual()).unwrap());
    }
}

#[test]
fn random_posets_are_deterministic() {
    for seed in 0..50 {
        let a = random_graded_poset(seed, 12, 5);
        let b = random_graded_poset(seed, 12, 5);
        assert_eq!(format::write(a.poset()), format::write(b.poset()));
        assert!(a.len() <= 12 && a.height() <= 5);
        assert!(a.poset().is_connected() && a.poset().is_graded());
    }
}
