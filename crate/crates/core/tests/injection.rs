use intchain::auxgraph::{build_aux_graph, TripleVertex};
use intchain::chain::double_chain;
use intchain::embed::verify_embedding;
use intchain::gallery::{gallery, params, random_graded_poset};
use intchain::injection::{
    construct_embedding, construct_embedding_with, max_independent_set, required_family_size, theorem_check,
    InjectOptions, TheoremOptions,
};
use intchain::par::Exec;
use intchain::{Error, GradedPoset, Poset};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graded(name: &str, ps: &[(&str, usize)]) -> GradedPoset {
    GradedPoset::new(gallery(name, &params(ps)).unwrap()).unwrap()
}

fn vertices(gp: &GradedPoset, sets: &[[&str; 3]]) -> Vec<TripleVertex> {
    let g = build_aux_graph(gp);
    sets.iter()
        .map(|s| g.vertex(g.find_vertex(gp.poset(), s).unwrap()).clone())
        .collect()
}

#[test]
fn fig2_sampled_families() {
    let gp = graded("fig2", &[]);
    let i = vertices(&gp, &[["y4", "y5", "z1"], ["x2", "y2", "y3"], ["r1", "r2", "s4"]]);
    assert_eq!(required_family_size(&gp, i.len()), 17);
    let c = double_chain(25).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let mut fam = sample(&mut rng, c.len(), 17).into_vec();
        fam.sort_unstable();
        let out = construct_embedding(&gp, &i, &c, &fam).unwrap();
        assert_eq!(out.plan.skips.len(), 1);
        assert_eq!(out.plan.triples.len(), 3);
        verify_embedding(gp.poset(), c.as_poset(), &out.embedding.map).unwrap();
        assert!(out.embedding.map.iter().all(|e| fam.contains(e)));
    }
}

#[test]
fn diamond_families_use_two_skips() {
    let gp = graded("D", &[("k", 2)]);
    let c = double_chain(8).unwrap();
    let mut count = 0;
    let mut mask: u32 = (1 << 6) - 1;
    while mask < 1 << c.len() {
        let fam: Vec<usize> = (0..c.len()).filter(|&j| mask >> j & 1 == 1).collect();
        let out = construct_embedding(&gp, &[], &c, &fam).unwrap();
        assert_eq!(out.plan.skips.len(), 2);
        count += 1;
        let low = mask & mask.wrapping_neg();
        let r = mask + low;
        mask = (((r ^ mask) >> 2) / low) | r;
    }
    assert_eq!(count, 8008);
}

#[test]
fn chains_need_no_triples() {
    for k in 2..=5 {
        let gp = GradedPoset::new(Poset::chain(k)).unwrap();
        let c = double_chain(2 * k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        for _ in 0..50 {
            let mut fam = sample(&mut rng, c.len(), 2 * k - 1).into_vec();
            fam.sort_unstable();
            let out = construct_embedding(&gp, &[], &c, &fam).unwrap();
            assert_eq!(out.plan.skips.len(), k - 1);
        }
    }
}

#[test]
fn precondition_errors() {
    let gp = graded("fig2", &[]);
    let c = double_chain(25).unwrap();
    let fam: Vec<usize> = (0..17).collect();
    let clique = vertices(&gp, &[["r1", "s3", "s4"], ["r2", "s1", "s4"]]);
    assert!(matches!(
        construct_embedding(&gp, &clique, &c, &fam),
        Err(Error::NotIndependent(_))
    ));

    let i = max_independent_set(&gp);
    assert_eq!(i.len(), 3);
    assert!(matches!(
        construct_embedding(&gp, &i, &c, &fam[..16]),
        Err(Error::FamilyTooSmall { have: 16, need: 17 })
    ));

    let b3 = intchain::chain::build_interval_chain(4, 3).unwrap();
    assert!(construct_embedding(&gp, &i, &b3, &fam[..4]).is_err());
}

#[test]
fn theorem_check_exhaustive_and_sampled() {
    let gp = graded("D", &[("k", 2)]);
    let r = theorem_check(&gp, 7, &TheoremOptions::default()).unwrap();
    assert_eq!(r.total_families, "3003");
    assert_eq!(r.families_checked, 3003);
    assert!(r.passed());

    let opts = TheoremOptions { sample: Some(100), seed: Some(1), ..TheoremOptions::default() };
    let a = theorem_check(&gp, 12, &opts).unwrap();
    let b = theorem_check(&gp, 12, &TheoremOptions { exec: Exec::Sequential, ..opts }).unwrap();
    assert!(a.sampled && a.passed());
    assert_eq!(a.families_checked, 100);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());

    let no_seed = TheoremOptions { sample: Some(10), seed: None, ..TheoremOptions::default() };
    assert!(matches!(theorem_check(&gp, 12, &no_seed), Err(Error::InvalidParams(_))));

    let tiny = TheoremOptions { max_families: 10, ..TheoremOptions::default() };
    assert!(matches!(theorem_check(&gp, 7, &tiny), Err(Error::TooLarge { .. })));
}

#[test]
fn failures_carry_plans() {
    // intersecting triples where the sweep leaves a cover broken
    let gp = random_graded_poset(3, 11, 5);
    let c = double_chain(10).unwrap();
    let names = ["l0", "l1", "r1", "l2", "r2", "r3", "r4", "l5", "r5", "l7", "l9"];
    let fam = c.family_from_names(&names).unwrap();
    let i = max_independent_set(&gp);
    let opts = InjectOptions { fallback_search: true };
    match construct_embedding_with(&gp, &i, &c, &fam, opts) {
        Err(Error::ConstructionFailed(f)) => {
            assert!(!f.plan.assignment.is_empty());
            assert_eq!(f.fallback_embeds, Some(true));
        }
        Ok(_) => panic!("expected the documented failure"),
        Err(e) => panic!("unexpected error {e}"),
    }
}
