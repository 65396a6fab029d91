//! Constructive injection of a graded poset into a double-chain family.
//!
//! The sweep matches `L_1, L_2, ...` consecutively into `F` (canonical order
//! `l0, l1, r1, l2, ...`). A boundary without a chosen triple spends one
//! skipped slot; a boundary carrying a triple from the independent set spends
//! none and instead reorders the triple's images with the switch rules.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::auxgraph::{adjacent, alpha_dp, build_aux_graph, enumerate_triples, TripleType, TripleVertex};
use crate::chain::{binom, double_chain, IntervalChain};
use crate::embed::{embed_into_family, verify_embedding, Embedding};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::poset::{Elem, GradedPoset};

/// Slot of the canonical order: `l_i` or `r_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    L(usize),
    R(usize),
}

fn slot(pos: usize) -> Slot {
    if pos == 0 {
        Slot::L(0)
    } else if pos % 2 == 1 {
        Slot::L(pos.div_ceil(2))
    } else {
        Slot::R(pos / 2)
    }
}

fn slot_name(pos: usize) -> String {
    match slot(pos) {
        Slot::L(i) => format!("l{i}"),
        Slot::R(i) => format!("r{i}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlannedTriple {
    /// `t` with the triple inside `L_t ∪ L_{t+1}`.
    pub boundary: usize,
    pub vtype: String,
    pub elements: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub level: usize,
    pub element: String,
    pub slot: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skip {
    /// Skipped between `L_boundary` and `L_{boundary+1}`.
    pub boundary: usize,
    pub slot: String,
    /// `guard` when the slot is the `r_i` that would break a cover, `filler` otherwise.
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Switch {
    /// `1.1`, `1.2`, `2.1` or `2.2`.
    pub rule: String,
    pub step: String,
    pub boundary: usize,
    pub elements: [String; 2],
    /// Slots after the exchange, in the order of `elements`.
    pub slots: [String; 2],
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectionPlan {
    pub level_order: Vec<Vec<String>>,
    pub triples: Vec<PlannedTriple>,
    /// Consecutive matching before any exchange.
    pub trace: Vec<TraceStep>,
    pub skips: Vec<Skip>,
    pub switches: Vec<Switch>,
    /// Final `(element, slot)` pairs in declaration order.
    pub assignment: Vec<(String, String)>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ConstructionFailure {
    pub diagnostic: String,
    pub plan: InjectionPlan,
    /// With `fallback_search`, whether the embedding search finds any embedding.
    pub fallback_embeds: Option<bool>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct InjectOptions {
    pub fallback_search: bool,
}

#[derive(Clone, Debug)]
pub struct Constructed {
    /// Map into the elements of the double chain.
    pub embedding: Embedding,
    pub plan: InjectionPlan,
}

/// A maximum independent set of `G_P` from the level DP.
pub fn max_independent_set(gp: &GradedPoset) -> Vec<TripleVertex> {
    let g = build_aux_graph(gp);
    let alpha = alpha_dp(&g);
    alpha.witness.iter().map(|&v| g.vertex(v).clone()).collect()
}

fn check_independent(gp: &GradedPoset, set: &[TripleVertex]) -> Result<()> {
    let p = gp.poset();
    let triples = enumerate_triples(gp);
    for v in set {
        if !triples.iter().any(|t| t.elems == v.elems) {
            return Err(Error::NotIndependent(format!("{} is not a triple of this poset", v.id(p))));
        }
    }
    for (a, v) in set.iter().enumerate() {
        for w in &set[a + 1..] {
            if v.pair_index == w.pair_index || adjacent(v, w, gp)? {
                return Err(Error::NotIndependent(format!("{} and {} are adjacent", v.id(p), w.id(p))));
            }
        }
    }
    Ok(())
}

/// Family size the construction needs: `|P| + h - |I| - 1`.
pub fn required_family_size(gp: &GradedPoset, independent: usize) -> usize {
    (gp.len() + gp.height()).saturating_sub(independent + 1)
}

pub fn construct_embedding(
    gp: &GradedPoset,
    independent: &[TripleVertex],
    chain: &IntervalChain,
    family: &[Elem],
) -> Result<Constructed> {
    construct_embedding_with(gp, independent, chain, family, InjectOptions::default())
}

pub fn construct_embedding_with(
    gp: &GradedPoset,
    independent: &[TripleVertex],
    chain: &IntervalChain,
    family: &[Elem],
    opts: InjectOptions,
) -> Result<Constructed> {
    if chain.k() != 2 {
        return Err(Error::InvalidParams("the construction targets C_2".into()));
    }
    let mut fam = family.to_vec();
    fam.sort_unstable();
    fam.dedup();
    if let Some(&e) = fam.iter().find(|&&e| e >= chain.len()) {
        return Err(Error::UnknownElement(format!("#{e}")));
    }
    check_independent(gp, independent)?;
    let need = required_family_size(gp, independent.len());
    if fam.len() < need {
        return Err(Error::FamilyTooSmall {
            have: fam.len(),
            need,
        });
    }
    let mut sweep = Sweep::new(gp, independent, &fam);
    let outcome = sweep.run();
    let plan = sweep.finish_plan();
    let fail = |diagnostic: String, plan: InjectionPlan| {
        let fallback_embeds = opts.fallback_search.then(|| {
            embed_into_family(gp.poset(), chain.as_poset(), &fam)
                .map(|e| e.is_some())
                .unwrap_or(false)
        });
        Err(Error::ConstructionFailed(Box::new(ConstructionFailure {
            diagnostic,
            plan,
            fallback_embeds,
        })))
    };
    if let Err(d) = outcome {
        return fail(d, plan);
    }
    let map: Vec<Elem> = sweep.img.iter().map(|&i| fam[i]).collect();
    if let Err(d) = verify_embedding(gp.poset(), chain.as_poset(), &map) {
        return fail(d, plan);
    }
    Ok(Constructed {
        embedding: Embedding { map, verified: true },
        plan,
    })
}

struct Sweep<'a> {
    gp: &'a GradedPoset,
    fam: &'a [Elem],
    /// `triple_at[t]` is the chosen triple of boundary `t`.
    triple_at: Vec<Option<&'a TripleVertex>>,
    order: Vec<Vec<Elem>>,
    /// Family index of each element.
    img: Vec<usize>,
    owner: Vec<Option<Elem>>,
    /// Family indices of each level, first to last, before exchanges.
    level_slots: Vec<Vec<usize>>,
    trace: Vec<(usize, Elem, usize)>,
    skips: Vec<(usize, usize, &'static str)>,
    switches: Vec<RawSwitch>,
    notes: Vec<String>,
}

/// Rule, step, boundary, the two elements and their new family indices.
type RawSwitch = (String, &'static str, usize, [Elem; 2], [usize; 2]);

impl<'a> Sweep<'a> {
    fn new(gp: &'a GradedPoset, independent: &'a [TripleVertex], fam: &'a [Elem]) -> Self {
        let h = gp.height();
        let mut triple_at = vec![None; h + 1];
        for v in independent {
            triple_at[v.pair_index] = Some(v);
        }
        Sweep {
            gp,
            fam,
            triple_at,
            order: Vec::new(),
            img: vec![usize::MAX; gp.len()],
            owner: vec![None; fam.len()],
            level_slots: vec![Vec::new(); h + 1],
            trace: Vec::new(),
            skips: Vec::new(),
            switches: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn name(&self, e: Elem) -> String {
        self.gp.poset().name_of(e).to_string()
    }

    fn pos(&self, idx: usize) -> Slot {
        slot(self.fam[idx])
    }

    /// Triple of boundary `t - 1` and triple of boundary `t` when they meet in `L_t`.
    fn intersecting(&self, t: usize) -> Option<(&'a TripleVertex, &'a TripleVertex, Elem)> {
        let below = self.triple_at.get(t.checked_sub(1)?).copied().flatten()?;
        let above = self.triple_at.get(t).copied().flatten()?;
        let common = below.intersection(above);
        (!common.is_empty()).then(|| (below, above, common[0]))
    }

    fn level_orders(&mut self) -> Result<(), String> {
        let gp = self.gp;
        let h = gp.height();
        for t in 1..=h {
            let level = gp.levels().level(t);
            let up: Vec<Elem> = self.triple_at[t - 1].map(|v| v.upper(gp)).unwrap_or_default();
            let lo: Vec<Elem> = self.triple_at.get(t).copied().flatten().map(|v| v.lower(gp)).unwrap_or_default();
            let mut order = Vec::with_capacity(level.len());
            if let Some((below, above, shared)) = self.intersecting(t) {
                let common = below.intersection(above);
                if below.vtype != TripleType::V
                    || above.vtype != TripleType::Lambda
                    || common.len() != 1
                    || !(3..=4).contains(&level.len())
                {
                    return Err(format!(
                        "intersecting triples {} and {} are not V-then-Λ sharing one element of a level of size 3 or 4",
                        below.id(gp.poset()),
                        above.id(gp.poset())
                    ));
                }
                if self.intersecting(t + 1).is_some() {
                    self.notes
                        .push(format!("triples of three consecutive classes meet around L_{t}"));
                }
                order.extend(up.iter().copied().filter(|&e| e != shared));
                order.extend(level.iter().copied().filter(|e| !up.contains(e) && !lo.contains(e)));
                order.push(shared);
                order.extend(lo.iter().copied().filter(|&e| e != shared));
            } else {
                order.extend(up.iter().copied());
                order.extend(level.iter().copied().filter(|e| !up.contains(e) && !lo.contains(e)));
                order.extend(lo.iter().copied());
            }
            self.order.push(order);
        }
        Ok(())
    }

    fn place(&mut self, t: usize, idxs: &[usize]) {
        for (k, &idx) in idxs.iter().enumerate() {
            let e = self.order[t - 1][k];
            self.img[e] = idx;
            self.owner[idx] = Some(e);
            self.trace.push((t, e, idx));
        }
        self.level_slots[t] = idxs.to_vec();
    }

    fn exchange(&mut self, rule: String, step: &'static str, t: usize, a: usize, b: usize) {
        let (ea, eb) = (self.owner[a].unwrap(), self.owner[b].unwrap());
        self.owner[a] = Some(eb);
        self.owner[b] = Some(ea);
        self.img[ea] = b;
        self.img[eb] = a;
        self.switches.push((rule, step, t, [ea, eb], [b, a]));
    }

    fn run(&mut self) -> Result<(), String> {
        self.level_orders()?;
        let h = self.gp.height();
        let n = self.fam.len();
        let first: Vec<usize> = (0..self.order[0].len()).collect();
        self.place(1, &first);
        let mut cursor = first.len();
        for t in 1..h {
            let size = self.order[t].len();
            let mut idxs = Vec::with_capacity(size);
            if self.triple_at[t].is_none() {
                let skip = self.skip_index(cursor);
                let kind = if skip.1 { "guard" } else { "filler" };
                self.skips.push((t, skip.0, kind));
                let mut i = cursor;
                while idxs.len() < size && i < n {
                    if i != skip.0 {
                        idxs.push(i);
                    }
                    i += 1;
                }
                cursor = i;
            } else {
                idxs.extend((cursor..n).take(size));
                cursor += idxs.len();
            }
            if idxs.len() < size {
                return Err(format!("family exhausted while matching L_{}", t + 1));
            }
            self.place(t + 1, &idxs);
            if let Some(v) = self.triple_at[t] {
                self.apply_rules(t, v);
            }
        }
        Ok(())
    }

    /// The slot to skip after the last consumed index; the flag marks a guard.
    fn skip_index(&self, cursor: usize) -> (usize, bool) {
        let target = match self.pos(cursor - 1) {
            Slot::L(k) => Some(Slot::R(k)),
            Slot::R(k) => Some(Slot::R(k + 1)),
        };
        for q in cursor..(cursor + 2).min(self.fam.len()) {
            if Some(self.pos(q)) == target {
                return (q, true);
            }
        }
        (cursor, false)
    }

    fn apply_rules(&mut self, t: usize, v: &TripleVertex) {
        let gp = self.gp;
        let b = self.level_slots[t + 1].clone();
        let b1 = b[0];
        let lower = self.intersecting(t);
        let upper = self.intersecting(t + 1);
        let tag = |size: usize| if size == 3 { "2.1" } else { "2.2" };
        match v.vtype {
            TripleType::Lambda => {
                let z = v.upper(gp)[0];
                let rule = match lower {
                    Some(_) => tag(gp.levels().size(t)).to_string(),
                    None => "1.1".to_string(),
                };
                if self.owner[b1] != Some(z) {
                    self.notes.push(format!(
                        "boundary {t}: {} is not first in L_{}",
                        self.name(z),
                        t + 1
                    ));
                    return;
                }
                let Slot::L(i) = self.pos(b1) else { return };
                match b.get(1) {
                    Some(&b2) if self.pos(b2) == Slot::R(i) => {
                        let step = if lower.is_some() { "z'<->w'" } else { "z<->w" };
                        self.exchange(rule, step, t, b1, b2);
                    }
                    Some(_) => {}
                    None => self.notes.push(format!(
                        "boundary {t}: {} is alone in L_{}, no exchange partner",
                        self.name(z),
                        t + 1
                    )),
                }
            }
            TripleType::V => {
                let x = v.lower(gp)[0];
                let (y, shared) = match upper {
                    Some((_, _, s)) => (v.upper(gp).into_iter().find(|&e| e != s).unwrap(), Some(s)),
                    None => (v.upper(gp)[0], None),
                };
                let rule = match upper {
                    Some(_) => tag(gp.levels().size(t + 1)),
                    None => "1.2",
                };
                if b1 == 0 || self.owner[b1 - 1] != Some(x) || self.owner[b1] != Some(y) {
                    self.notes.push(format!("boundary {t}: triple not at the level seam"));
                    return;
                }
                let a1 = b1 - 1;
                let mut switched = false;
                if let (Slot::L(i), Slot::R(j)) = (self.pos(a1), self.pos(b1)) {
                    if i == j && i >= 2 && a1 >= 1 && self.pos(a1 - 1) == Slot::R(i - 1) {
                        self.exchange(rule.to_string(), "x<->y", t, a1, b1);
                        switched = true;
                    }
                }
                if rule == "2.2" {
                    // w must not sit directly above x on the r side
                    let w = self.order[t][1];
                    if let Slot::R(m) = self.pos(self.img[x]) {
                        let zs = self.img[shared.unwrap()];
                        let ws = self.img[w];
                        if self.pos(ws) == Slot::R(m + 1) {
                            if switched {
                                self.exchange(rule.to_string(), "w<->z", t, ws, zs);
                            } else {
                                // x kept its own r slot, so y's slot l_{m+1} is free for w
                                let ys = self.img[y];
                                self.exchange(rule.to_string(), "w<->y", t, ws, ys);
                            }
                        }
                    }
                    return;
                }
                if !switched {
                    return;
                }
                let Slot::R(i) = self.pos(self.img[x]) else { return };
                let b2 = b[1];
                match b.get(2) {
                    Some(&b3) if self.pos(b2) == Slot::L(i + 1) && self.pos(b3) == Slot::R(i + 1) => {
                        let step = if rule == "2.1" { "z<->y'" } else { "z<->u" };
                        self.exchange(rule.to_string(), step, t, b2, b3);
                    }
                    None if self.pos(b2) == Slot::L(i + 1) => self.notes.push(format!(
                        "boundary {t}: L_{} ends at l{}, the next boundary guards r{}",
                        t + 1,
                        i + 1,
                        i + 1
                    )),
                    _ => {}
                }
            }
        }
    }

    fn finish_plan(&self) -> InjectionPlan {
        let gp = self.gp;
        let p = gp.poset();
        let names = |es: &[Elem]| es.iter().map(|&e| p.name_of(e).to_string()).collect::<Vec<_>>();
        let triples = self
            .triple_at
            .iter()
            .flatten()
            .map(|v| PlannedTriple {
                boundary: v.pair_index,
                vtype: v.vtype.symbol().to_string(),
                elements: names(&v.elems),
            })
            .collect();
        let sname = |idx: usize| slot_name(self.fam[idx]);
        InjectionPlan {
            level_order: self.order.iter().map(|o| names(o)).collect(),
            triples,
            trace: self
                .trace
                .iter()
                .map(|&(level, e, idx)| TraceStep {
                    level,
                    element: self.name(e),
                    slot: sname(idx),
                })
                .collect(),
            skips: self
                .skips
                .iter()
                .map(|&(boundary, idx, reason)| Skip {
                    boundary,
                    slot: sname(idx),
                    reason: reason.to_string(),
                })
                .collect(),
            switches: self
                .switches
                .iter()
                .map(|(rule, step, boundary, [a, b], [sa, sb])| Switch {
                    rule: rule.clone(),
                    step: step.to_string(),
                    boundary: *boundary,
                    elements: [self.name(*a), self.name(*b)],
                    slots: [sname(*sa), sname(*sb)],
                })
                .collect(),
            assignment: (0..gp.len())
                .filter(|&e| self.img[e] != usize::MAX)
                .map(|e| (self.name(e), sname(self.img[e])))
                .collect(),
            notes: self.notes.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TheoremOptions {
    /// Check this many random families instead of all of them.
    pub sample: Option<usize>,
    pub seed: Option<u64>,
    /// Largest family count checked exhaustively.
    pub max_families: u128,
    pub exec: Exec,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        TheoremOptions {
            sample: None,
            seed: None,
            max_families: 2_000_000,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyFailure {
    pub family: Vec<String>,
    pub diagnostic: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TheoremReport {
    pub pattern: String,
    pub n: usize,
    pub size: usize,
    pub height: usize,
    pub alpha: usize,
    pub independent_set: Vec<Vec<String>>,
    pub family_size: usize,
    pub total_families: String,
    pub families_checked: usize,
    pub sampled: bool,
    pub seed: Option<u64>,
    /// Families the embedding search could not embed into.
    pub oracle_failures: usize,
    pub construction_failures: usize,
    /// Constructed plans whose skip count differs from `(h-1) - |I|`.
    pub skip_count_mismatches: usize,
    pub first_oracle_failure: Option<Vec<String>>,
    pub first_construction_failure: Option<FamilyFailure>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.oracle_failures == 0 && self.construction_failures == 0 && self.skip_count_mismatches == 0
    }
}

/// Next mask with the same popcount (Gosper's hack).
fn next_combination(x: u128) -> u128 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

fn mask_members(mask: u128) -> Vec<Elem> {
    (0..128).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Checks every family of size `|P| + h - α - 1` in `C_2(n)` (or a seeded
/// sample) with the embedding search and with the construction.
pub fn theorem_check(gp: &GradedPoset, n: usize, opts: &TheoremOptions) -> Result<TheoremReport> {
    let chain = double_chain(n)?;
    let universe = chain.len();
    if universe > 128 {
        return Err(Error::TooLarge {
            what: "double chain".into(),
            size: universe,
            cap: 128,
        });
    }
    let g = build_aux_graph(gp);
    let alpha = alpha_dp(&g);
    let independent: Vec<TripleVertex> = alpha.witness.iter().map(|&v| g.vertex(v).clone()).collect();
    let m = required_family_size(gp, independent.len());
    let total = binom(universe, m);
    let (masks, sampled) = match opts.sample {
        Some(k) if (k as u128) < total => {
            let seed = opts
                .seed
                .ok_or_else(|| Error::InvalidParams("sampling needs a seed".into()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut masks: Vec<u128> = (0..k)
                .map(|_| sample(&mut rng, universe, m).iter().fold(0u128, |acc, i| acc | 1u128 << i))
                .collect();
            masks.sort_unstable();
            (masks, true)
        }
        _ => {
            if total > opts.max_families {
                return Err(Error::TooLarge {
                    what: format!("family count C({universe},{m})"),
                    size: usize::try_from(total).unwrap_or(usize::MAX),
                    cap: usize::try_from(opts.max_families).unwrap_or(usize::MAX),
                });
            }
            let mut masks = Vec::with_capacity(total as usize);
            if m <= universe {
                let last = if m == 0 { 0 } else { ((1u128 << m) - 1) << (universe - m) };
                let mut x = if m == 0 { 0 } else { (1u128 << m) - 1 };
                loop {
                    masks.push(x);
                    if x == last {
                        break;
                    }
                    x = next_combination(x);
                }
            }
            (masks, false)
        }
    };
    let host = chain.as_poset();
    let p = gp.poset();
    let want_skips = gp.height().saturating_sub(1) - independent.len();
    let outcomes = par::map(opts.exec, &masks, |&mask| {
        let fam = mask_members(mask);
        let oracle = embed_into_family(p, host, &fam).map(|e| e.is_some()).unwrap_or(false);
        let built = match construct_embedding(gp, &independent, &chain, &fam) {
            Ok(c) => Ok(c.plan.skips.len() == want_skips),
            Err(e) => Err(e.to_string()),
        };
        (oracle, built)
    });
    let mut report = TheoremReport {
        pattern: p.name().unwrap_or("P").to_string(),
        n,
        size: gp.len(),
        height: gp.height(),
        alpha: alpha.size,
        independent_set: independent
            .iter()
            .map(|v| v.names(p).into_iter().map(String::from).collect())
            .collect(),
        family_size: m,
        total_families: total.to_string(),
        families_checked: masks.len(),
        sampled,
        seed: if sampled { opts.seed } else { None },
        oracle_failures: 0,
        construction_failures: 0,
        skip_count_mismatches: 0,
        first_oracle_failure: None,
        first_construction_failure: None,
    };
    for (&mask, (oracle, built)) in masks.iter().zip(outcomes) {
        let names = || chain.family_names(&mask_members(mask));
        if !oracle {
            report.oracle_failures += 1;
            report.first_oracle_failure.get_or_insert_with(names);
        }
        match built {
            Ok(true) => {}
            Ok(false) => report.skip_count_mismatches += 1,
            Err(diagnostic) => {
                report.construction_failures += 1;
                if report.first_construction_failure.is_none() {
                    report.first_construction_failure = Some(FamilyFailure {
                        family: names(),
                        diagnostic,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{gallery, params};
    use crate::poset::Poset;

    fn graded(name: &str, ps: &[(&str, usize)]) -> GradedPoset {
        GradedPoset::new(gallery(name, &params(ps)).unwrap()).unwrap()
    }

    #[test]
    fn slots_follow_the_canonical_order() {
        assert_eq!(slot(0), Slot::L(0));
        assert_eq!(slot(1), Slot::L(1));
        assert_eq!(slot(2), Slot::R(1));
        assert_eq!(slot(3), Slot::L(2));
        assert_eq!(slot(IntervalChain::pos_r(5)), Slot::R(5));
        assert_eq!(slot(IntervalChain::pos_l(5)), Slot::L(5));
    }

    #[test]
    fn chain_sweep() {
        let gp = GradedPoset::new(Poset::chain(4)).unwrap();
        let c = double_chain(6).unwrap();
        let fam: Vec<Elem> = (0..7).collect();
        let out = construct_embedding(&gp, &[], &c, &fam).unwrap();
        assert_eq!(out.plan.skips.len(), 3);
        assert!(out.embedding.verified);
    }

    #[test]
    fn rejects_small_family_and_dependent_sets() {
        let gp = graded("P1", &[("n", 3)]);
        let c = double_chain(10).unwrap();
        let fam: Vec<Elem> = (0..7).collect();
        let i = max_independent_set(&gp);
        assert!(matches!(
            construct_embedding(&gp, &i, &c, &fam),
            Err(Error::FamilyTooSmall { have: 7, need: 8 })
        ));
        let all = enumerate_triples(&gp);
        assert!(matches!(
            construct_embedding(&gp, &all, &c, &(0..9).collect::<Vec<_>>()),
            Err(Error::NotIndependent(_))
        ));
    }

    #[test]
    fn diamond_exhaustive() {
        let gp = graded("D", &[("k", 2)]);
        let r = theorem_check(&gp, 7, &TheoremOptions::default()).unwrap();
        assert_eq!(r.families_checked, 3003);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn fig2_sampled() {
        let gp = graded("fig2", &[]);
        let opts = TheoremOptions {
            sample: Some(300),
            seed: Some(7),
            ..Default::default()
        };
        let r = theorem_check(&gp, 12, &opts).unwrap();
        assert_eq!(r.family_size, 17);
        assert!(r.sampled);
        assert!(r.passed(), "{r:?}");
    }
}
