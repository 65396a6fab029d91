use intchain::chain::{boolean_lattice, build_interval_chain, double_chain};
use intchain::embed::{embed_into_family, embeds, is_p_free, verify_embedding};
use intchain::gallery::{gallery, params, witness_family};
use intchain::la::{c2_stabilization, e_estimate, la_chain_sequence, la_exact, la_exact_with, LaOptions, WindowMode};
use intchain::par::Exec;
use intchain::{Error, Poset};

fn entry(name: &str, ps: &[(&str, usize)]) -> Poset {
    gallery(name, &params(ps)).unwrap()
}

#[test]
fn embeddings() {
    let d2 = entry("D", &[("k", 2)]);
    let b2 = boolean_lattice(2).unwrap();
    let e = embeds(&d2, b2.as_poset()).unwrap().unwrap();
    assert!(e.verified);
    verify_embedding(&d2, b2.as_poset(), &e.map).unwrap();

    let c3 = double_chain(3).unwrap();
    assert!(embeds(&Poset::chain(4), c3.as_poset()).unwrap().is_some());
    assert!(embeds(&Poset::chain(5), c3.as_poset()).unwrap().is_none());
}

#[test]
fn verification_rejects_bad_maps() {
    let d2 = entry("D", &[("k", 2)]);
    let b2 = boolean_lattice(2).unwrap();
    assert!(verify_embedding(&d2, b2.as_poset(), &[0, 0, 1, 3]).is_err());
    assert!(verify_embedding(&d2, b2.as_poset(), &[3, 1, 2, 0]).is_err());
    assert!(verify_embedding(&d2, b2.as_poset(), &[0, 1]).is_err());
}

#[test]
fn witness_families_are_free() {
    let c = double_chain(12).unwrap();
    let p1 = entry("P1", &[("n", 3)]);
    let f1 = witness_family(1, 0, 3).unwrap();
    assert_eq!(f1.elements, ["r1", "l2", "r2", "r3", "l4", "r4", "r5"]);
    let fam = f1.resolve(&c).unwrap();
    assert!(is_p_free(&fam, &p1, c.as_poset()).unwrap());
    assert!(embed_into_family(&p1, c.as_poset(), &fam).unwrap().is_none());

    let f4 = witness_family(4, 3, 0).unwrap().resolve(&c).unwrap();
    assert_eq!(f4.len(), 8);
    assert!(is_p_free(&f4, &entry("P5", &[]), c.as_poset()).unwrap());
    let f5 = witness_family(5, 3, 0).unwrap().resolve(&c).unwrap();
    assert!(is_p_free(&f5, &entry("P7", &[]), c.as_poset()).unwrap());
    assert!(witness_family(4, 2, 0).is_err());

    // pigeonhole
    let small: Vec<usize> = (0..p1.len() - 1).collect();
    assert!(is_p_free(&small, &p1, c.as_poset()).unwrap());
    // the whole chain is not free
    let all: Vec<usize> = (0..c.len()).collect();
    assert!(!is_p_free(&all, &p1, c.as_poset()).unwrap());
}

#[test]
fn la_on_full_chain() {
    for name in ["B", "V", "fig2"] {
        let p = entry(name, &[]);
        let n = p.len() - 1;
        let c = build_interval_chain(n, 1).unwrap();
        assert_eq!(la_exact(c.as_poset(), &p).unwrap().value, p.len() - 1, "{name}");
    }
}

#[test]
fn la_sharp_for_p1() {
    let c = double_chain(11).unwrap();
    let p1 = entry("P1", &[("n", 3)]);
    let r = la_exact(c.as_poset(), &p1).unwrap();
    assert_eq!(r.value, 7);
    assert_eq!(r.witness.len(), 7);
    assert!(is_p_free(&r.witness, &p1, c.as_poset()).unwrap());
}

#[test]
fn la_diamond_under_bound() {
    let c = double_chain(9).unwrap();
    let d2 = entry("D", &[("k", 2)]);
    let seq = la_exact_with(c.as_poset(), &d2, LaOptions { cap: 26, exec: Exec::Sequential }).unwrap();
    let par = la_exact_with(c.as_poset(), &d2, LaOptions { cap: 26, exec: Exec::Parallel }).unwrap();
    assert!(seq.value <= 5);
    assert_eq!(seq.value, par.value);
    assert_eq!(seq.witness, par.witness);
}

#[test]
fn la_respects_cap() {
    let c = double_chain(20).unwrap();
    let err = la_exact_with(c.as_poset(), &Poset::chain(3), LaOptions { cap: 26, exec: Exec::Parallel });
    assert!(matches!(err, Err(Error::TooLarge { .. })));
}

#[test]
fn chain_sequences() {
    let v = entry("V", &[]);
    let s = la_chain_sequence(&v, 4, 2, LaOptions::default()).unwrap();
    assert_eq!(s.values.len(), 2);
    assert_eq!(s.values[0].value, 2);
    assert!(s.monotone);

    let d2 = entry("D", &[("k", 2)]);
    let s = la_chain_sequence(&d2, 4, 4, LaOptions::default()).unwrap();
    assert!(s.monotone);
    let b4 = boolean_lattice(4).unwrap();
    assert_eq!(s.values[3].value, la_exact(b4.as_poset(), &d2).unwrap().value);
    assert!(la_chain_sequence(&d2, 4, 5, LaOptions::default()).is_err());
}

#[test]
fn stabilization() {
    let p1 = entry("P1", &[("n", 3)]);
    let s = c2_stabilization(&p1, 7, 12, LaOptions::default()).unwrap();
    assert!(s.stabilized_at.is_some());
    assert_eq!(s.values.last().unwrap().1, 7);
}

#[test]
fn window_estimates() {
    let d2 = entry("D", &[("k", 2)]);
    let r = e_estimate(&d2, 6, WindowMode::Every, Exec::Parallel).unwrap();
    for w in &r.per_n[1..] {
        assert_eq!(w.e, 2, "n={}", w.n);
        let (i, m) = w.blocking_window.unwrap();
        assert_eq!(m, 3);
        assert!(i + m <= w.n + 1);
    }
    assert!(r.stabilized);

    for k in 2..=4 {
        let r = e_estimate(&Poset::chain(k), 5, WindowMode::Every, Exec::Sequential).unwrap();
        for w in r.per_n.iter().filter(|w| w.n + 1 >= k) {
            assert_eq!(w.e, k - 1, "k={k} n={}", w.n);
        }
    }

    let b = entry("B", &[]);
    let r = e_estimate(&b, 6, WindowMode::Every, Exec::Parallel).unwrap();
    // B_2 is too small to hold two maximal elements above two minimal ones
    assert_eq!(r.per_n[1].e, 3);
    assert!(r.per_n[2..].iter().all(|w| w.e == 2));

    let exists = e_estimate(&b, 5, WindowMode::Exists, Exec::Parallel).unwrap();
    for (a, b) in exists.per_n.iter().zip(&r.per_n) {
        assert!(a.e >= b.e);
    }
}
