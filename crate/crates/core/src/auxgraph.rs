//! Incomparable triples across consecutive levels and the graph on them.
//!
//! A vertex is a set of three mutually incomparable elements spread 1+2
//! (V-type) or 2+1 (Λ-type) over levels `L_j ∪ L_{j+1}`; `j` is its class.
//! Classes are cliques and only consecutive classes can be joined, which is
//! what makes the level-sweep DP for α work.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::poset::{Elem, GradedPoset, Poset};

pub const DEFAULT_BRUTEFORCE_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TripleType {
    V,
    #[serde(rename = "Lambda")]
    Lambda,
}

impl TripleType {
    pub fn symbol(self) -> &'static str {
        match self {
            TripleType::V => "V",
            TripleType::Lambda => "Λ",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TripleVertex {
    /// Sorted by declaration index.
    pub elems: [Elem; 3],
    pub vtype: TripleType,
    /// `j` with `elems ⊆ L_j ∪ L_{j+1}` (1-based).
    pub pair_index: usize,
    fingerprint: u64,
}

impl TripleVertex {
    pub fn contains(&self, e: Elem) -> bool {
        self.elems.contains(&e)
    }

    pub fn intersection(&self, other: &TripleVertex) -> Vec<Elem> {
        self.elems
            .iter()
            .copied()
            .filter(|&e| other.contains(e))
            .collect()
    }

    /// Elements in the level `level` (1-based).
    pub fn in_level(&self, gp: &GradedPoset, level: usize) -> Vec<Elem> {
        self.elems
            .iter()
            .copied()
            .filter(|&e| gp.rank(e) == level)
            .collect()
    }

    pub fn lower(&self, gp: &GradedPoset) -> Vec<Elem> {
        self.in_level(gp, self.pair_index)
    }

    pub fn upper(&self, gp: &GradedPoset) -> Vec<Elem> {
        self.in_level(gp, self.pair_index + 1)
    }

    /// Canonical id: pair index plus sorted element names.
    pub fn id(&self, p: &Poset) -> String {
        let mut names: Vec<&str> = self.elems.iter().map(|&e| p.name_of(e)).collect();
        names.sort_unstable();
        format!("{}:{}", self.pair_index, names.join(","))
    }

    pub fn names<'a>(&self, p: &'a Poset) -> Vec<&'a str> {
        self.elems.iter().map(|&e| p.name_of(e)).collect()
    }
}

fn fingerprint(p: &Poset) -> u64 {
    let mut h = DefaultHasher::new();
    p.names().hash(&mut h);
    p.covers().hash(&mut h);
    h.finish()
}

/// All V- and Λ-type triples, ordered by (pair index, declaration order).
pub fn enumerate_triples(gp: &GradedPoset) -> Vec<TripleVertex> {
    enumerate_triples_with(gp, Exec::default())
}

pub fn enumerate_triples_with(gp: &GradedPoset, exec: Exec) -> Vec<TripleVertex> {
    let p = gp.poset();
    let fp = fingerprint(p);
    let h = gp.height();
    let levels = gp.levels();
    let per_class = par::map_range(exec, h.saturating_sub(1), |j0| {
        let (lo, hi) = (levels.level(j0 + 1), levels.level(j0 + 2));
        let mut out = Vec::new();
        let inc = |a: Elem, b: Elem| p.incomparable_idx(a, b);
        let push = |out: &mut Vec<TripleVertex>, mut e: [Elem; 3], t| {
            e.sort_unstable();
            out.push(TripleVertex {
                elems: e,
                vtype: t,
                pair_index: j0 + 1,
                fingerprint: fp,
            });
        };
        for (ai, &a) in lo.iter().enumerate() {
            // V: a below, two above
            for (bi, &b) in hi.iter().enumerate() {
                if !inc(a, b) {
                    continue;
                }
                for &c in &hi[bi + 1..] {
                    if inc(a, c) {
                        push(&mut out, [a, b, c], TripleType::V);
                    }
                }
            }
            // Λ: a and b below, one above
            for &b in &lo[ai + 1..] {
                for &c in hi {
                    if inc(a, c) && inc(b, c) {
                        push(&mut out, [a, b, c], TripleType::Lambda);
                    }
                }
            }
        }
        out.sort_by(|x, y| x.elems.cmp(&y.elems).then(x.vtype.cmp(&y.vtype)));
        out
    });
    per_class.into_iter().flatten().collect()
}

/// Which clause of the adjacency definition decided a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Adjacency {
    Same,
    SameClass,
    Cond1,
    Cond2,
    Cond3,
    Cond4,
    /// Consecutive classes but no condition applies.
    NotAdjacent,
    /// Consecutive classes sharing a level of size 1, which no condition covers.
    Uncovered,
    /// Classes two or more apart.
    Distant,
}

impl Adjacency {
    pub fn is_edge(self) -> bool {
        matches!(
            self,
            Adjacency::SameClass
                | Adjacency::Cond1
                | Adjacency::Cond2
                | Adjacency::Cond3
                | Adjacency::Cond4
        )
    }
}

pub fn adjacent(v: &TripleVertex, w: &TripleVertex, gp: &GradedPoset) -> Result<bool> {
    Ok(classify(v, w, gp)?.is_edge())
}

pub fn classify(v: &TripleVertex, w: &TripleVertex, gp: &GradedPoset) -> Result<Adjacency> {
    let fp = fingerprint(gp.poset());
    if v.fingerprint != fp || w.fingerprint != fp {
        return Err(Error::MixedPosets);
    }
    Ok(classify_unchecked(v, w, gp))
}

fn classify_unchecked(v: &TripleVertex, w: &TripleVertex, gp: &GradedPoset) -> Adjacency {
    if v == w {
        return Adjacency::Same;
    }
    if v.pair_index == w.pair_index {
        return Adjacency::SameClass;
    }
    let (lo, up) = if v.pair_index < w.pair_index {
        (v, w)
    } else {
        (w, v)
    };
    if up.pair_index - lo.pair_index != 1 {
        return Adjacency::Distant;
    }
    let i = up.pair_index;
    let size = gp.levels().size(i);
    let meet = lo.intersection(up).len();
    match size {
        0 | 1 => Adjacency::Uncovered,
        2 => Adjacency::Cond4,
        3 | 4 => {
            if meet > 0 {
                let exception =
                    lo.vtype == TripleType::V && up.vtype == TripleType::Lambda && meet == 1;
                if exception {
                    Adjacency::NotAdjacent
                } else {
                    Adjacency::Cond2
                }
            } else if lo.in_level(gp, i).len() + up.in_level(gp, i).len() == size {
                Adjacency::Cond3
            } else {
                Adjacency::NotAdjacent
            }
        }
        _ => {
            if meet > 0 {
                Adjacency::Cond1
            } else {
                Adjacency::NotAdjacent
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct AuxGraph {
    vertices: Vec<TripleVertex>,
    /// `classes[j-1]` lists the vertex ids of `V_j`, for `j = 1..h-1`.
    classes: Vec<Vec<usize>>,
    adj: Vec<FixedBitSet>,
    /// Pairs that fell through every condition on a size-1 shared level.
    pub uncovered: Vec<(usize, usize)>,
}

pub fn build_aux_graph(gp: &GradedPoset) -> AuxGraph {
    build_aux_graph_with(gp, Exec::default())
}

pub fn build_aux_graph_with(gp: &GradedPoset, exec: Exec) -> AuxGraph {
    let vertices = enumerate_triples_with(gp, exec);
    let n = vertices.len();
    let mut classes = vec![Vec::new(); gp.height().saturating_sub(1)];
    for (id, v) in vertices.iter().enumerate() {
        classes[v.pair_index - 1].push(id);
    }
    // only the same and the next class can hold neighbours
    let rows = par::map_range(exec, n, |a| {
        let j = vertices[a].pair_index;
        let mut row = Vec::new();
        let mut odd = Vec::new();
        for cls in [j - 1, j] {
            let Some(ids) = classes.get(cls) else { continue };
            for &b in ids {
                if b <= a {
                    continue;
                }
                match classify_unchecked(&vertices[a], &vertices[b], gp) {
                    Adjacency::Uncovered => odd.push((a, b)),
                    c if c.is_edge() => row.push(b),
                    _ => {}
                }
            }
        }
        (row, odd)
    });
    let mut adj = vec![FixedBitSet::with_capacity(n); n];
    let mut uncovered = Vec::new();
    for (a, (row, odd)) in rows.into_iter().enumerate() {
        for b in row {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        uncovered.extend(odd);
    }
    AuxGraph {
        vertices,
        classes,
        adj,
        uncovered,
    }
}

impl AuxGraph {
    /// Graph with explicit classes and edges; used for synthetic tests of the DP.
    pub fn from_parts(class_of: &[usize], classes: usize, edges: &[(usize, usize)]) -> AuxGraph {
        let n = class_of.len();
        let mut cls = vec![Vec::new(); classes];
        for (v, &c) in class_of.iter().enumerate() {
            cls[c - 1].push(v);
        }
        let vertices = class_of
            .iter()
            .enumerate()
            .map(|(v, &c)| TripleVertex {
                elems: [3 * v, 3 * v + 1, 3 * v + 2],
                vtype: TripleType::V,
                pair_index: c,
                fingerprint: 0,
            })
            .collect();
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for ids in &cls {
            for &a in ids {
                for &b in ids {
                    if a != b {
                        adj[a].insert(b);
                    }
                }
            }
        }
        for &(a, b) in edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        AuxGraph {
            vertices,
            classes: cls,
            adj,
            uncovered: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[TripleVertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &TripleVertex {
        &self.vertices[id]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn neighbours(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[a].ones()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            out.extend(self.adj[a].ones().filter(|&b| b > a).map(|b| (a, b)));
        }
        out
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adj[a].count_ones(..)
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| a != b && !self.is_edge(a, b)))
    }

    pub fn find_vertex(&self, p: &Poset, names: &[&str]) -> Option<usize> {
        let mut want: Vec<Elem> = names.iter().filter_map(|n| p.index_of(n)).collect();
        if want.len() != 3 {
            return None;
        }
        want.sort_unstable();
        self.vertices.iter().position(|v| v.elems[..] == want[..])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaResult {
    pub size: usize,
    /// Vertex ids, ascending.
    pub witness: Vec<usize>,
    /// Adjacency look-ups performed (the DP's cost measure).
    pub pair_evaluations: usize,
}

#[derive(Clone, Copy)]
enum Source {
    /// Best set avoids this vertex and uses neighbour `v'` of the previous class.
    Neighbour(usize),
    /// Best set is the one for non-neighbour `v''` plus this vertex.
    Extend(usize),
    /// Best set is the optimum over classes `<= j-2` plus this vertex.
    Gap,
}

/// α(G) by the level-sweep DP.
///
/// `f(v)` for `v ∈ V_j` is α of the classes below `j` plus `v`:
///
/// ```text
/// f(v) = max( f(v')     for v'  ∈ V_{j-1} ∩ N(v),
///             f(v'') + 1 for v'' ∈ V_{j-1} \ N(v),
///             g(j-2) + 1 )
/// ```
///
/// with `g(k)` the optimum over classes `<= k`. The last term covers an
/// optimum that skips `V_{j-1}` entirely, which the two-term form misses when
/// every vertex of `V_{j-1}` is a neighbour of `v`; it also makes empty
/// classes harmless.
pub fn alpha_dp(g: &AuxGraph) -> AlphaResult {
    let n = g.len();
    let mut f = vec![0usize; n];
    let mut src = vec![Source::Gap; n];
    let classes = g.classes();
    // best[k] = (g(k), argmax vertex) over classes 1..=k; index 0 is "nothing".
    let mut best: Vec<(usize, Option<usize>)> = vec![(0, None); classes.len() + 1];
    let mut evals = 0usize;

    for (j0, cls) in classes.iter().enumerate() {
        let gap = if j0 >= 1 { best[j0 - 1].0 } else { 0 };
        let prev: &[usize] = if j0 >= 1 { &classes[j0 - 1] } else { &[] };
        for &v in cls {
            let mut val = gap + 1;
            let mut how = Source::Gap;
            for &u in prev {
                evals += 1;
                let cand = if g.is_edge(u, v) { f[u] } else { f[u] + 1 };
                if cand > val {
                    val = cand;
                    how = if g.is_edge(u, v) {
                        Source::Neighbour(u)
                    } else {
                        Source::Extend(u)
                    };
                }
            }
            f[v] = val;
            src[v] = how;
        }
        let mut here = best[j0];
        for &v in cls {
            if f[v] > here.0 {
                here = (f[v], Some(v));
            }
        }
        best[j0 + 1] = here;
    }

    let (size, top) = *best.last().unwrap();
    let mut witness = Vec::with_capacity(size);
    let mut cur = top;
    while let Some(v) = cur {
        match src[v] {
            Source::Neighbour(u) => cur = Some(u),
            Source::Extend(u) => {
                witness.push(v);
                cur = Some(u);
            }
            Source::Gap => {
                witness.push(v);
                let j = g.vertex(v).pair_index;
                cur = if j >= 2 { best[j - 2].1 } else { None };
            }
        }
    }
    witness.sort_unstable();
    debug_assert_eq!(witness.len(), size);
    AlphaResult {
        size,
        witness,
        pair_evaluations: evals,
    }
}

/// Exact maximum independent set by branch and bound with a greedy
/// clique-cover bound. The first optimum found in include-first order is
/// returned, so the witness is deterministic.
pub fn alpha_bruteforce(g: &AuxGraph, cap: usize) -> Result<AlphaResult> {
    let n = g.len();
    if n > cap || n > 128 {
        return Err(Error::TooLarge {
            what: "auxiliary graph".into(),
            size: n,
            cap: cap.min(128),
        });
    }
    let adj: Vec<u128> = (0..n)
        .map(|a| g.adj[a].ones().fold(0u128, |m, b| m | 1u128 << b))
        .collect();
    let mut search = Mis {
        adj: &adj,
        best: Vec::new(),
        cur: Vec::new(),
        nodes: 0,
    };
    let all = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    search.go(all);
    let mut witness = search.best;
    witness.sort_unstable();
    Ok(AlphaResult {
        size: witness.len(),
        witness,
        pair_evaluations: search.nodes,
    })
}

struct Mis<'a> {
    adj: &'a [u128],
    best: Vec<usize>,
    cur: Vec<usize>,
    nodes: usize,
}

impl Mis<'_> {
    fn cover_bound(&self, mut cand: u128) -> usize {
        let mut k = 0;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let mut clique = 1u128 << v;
            let mut rest = cand & self.adj[v];
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                clique |= 1u128 << u;
                rest &= self.adj[u];
            }
            cand &= !clique;
            k += 1;
        }
        k
    }

    fn go(&mut self, cand: u128) {
        self.nodes += 1;
        if cand == 0 {
            if self.cur.len() > self.best.len() {
                self.best = self.cur.clone();
            }
            return;
        }
        if self.cur.len() + self.cover_bound(cand) <= self.best.len() {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        self.cur.push(v);
        self.go(cand & !self.adj[v] & !(1u128 << v));
        self.cur.pop();
        self.go(cand & !(1u128 << v));
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexReport {
    pub id: usize,
    pub key: String,
    pub elems: Vec<String>,
    #[serde(rename = "type")]
    pub vtype: TripleType,
    pub pair: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuxReport {
    pub vertices: Vec<VertexReport>,
    pub edges: Vec<[usize; 2]>,
    pub alpha: usize,
    pub witness: Vec<usize>,
}

impl AuxReport {
    pub fn new(g: &AuxGraph, p: &Poset, alpha: &AlphaResult) -> AuxReport {
        AuxReport {
            vertices: g
                .vertices()
                .iter()
                .enumerate()
                .map(|(id, v)| VertexReport {
                    id,
                    key: v.id(p),
                    elems: v.names(p).into_iter().map(String::from).collect(),
                    vtype: v.vtype,
                    pair: v.pair_index,
                })
                .collect(),
            edges: g.edges().into_iter().map(|(a, b)| [a, b]).collect(),
            alpha: alpha.size,
            witness: alpha.witness.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;

    fn graded(elements: &[&str], covers: &[(&str, &str)]) -> GradedPoset {
        GradedPoset::new(Poset::from_covers(elements, covers).unwrap()).unwrap()
    }

    #[test]
    fn diamond_has_no_triples() {
        let d = graded(
            &["x", "y", "z", "w"],
            &[("x", "y"), ("x", "z"), ("y", "w"), ("z", "w")],
        );
        let g = build_aux_graph(&d);
        assert!(g.is_empty());
        assert_eq!(alpha_dp(&g).size, 0);
        assert_eq!(alpha_bruteforce(&g, 24).unwrap().size, 0);
    }

    #[test]
    fn single_class_is_a_clique() {
        // three minimal elements and a top covering only one of them
        let p = graded(
            &["a", "b", "c", "t", "u"],
            &[("a", "t"), ("b", "u"), ("c", "u"), ("a", "u")],
        );
        let g = build_aux_graph(&p);
        assert!(!g.is_empty());
        assert_eq!(alpha_dp(&g).size, 1);
    }

    #[test]
    fn two_term_recurrence_misses_skipped_class() {
        // path a - b - v over three classes; {a, v} is independent
        let g = AuxGraph::from_parts(&[1, 2, 3], 3, &[(0, 1), (1, 2)]);
        let r = alpha_dp(&g);
        assert_eq!(r.size, 2);
        assert_eq!(r.witness, vec![0, 2]);
        assert_eq!(alpha_bruteforce(&g, 24).unwrap().size, 2);
    }

    #[test]
    fn empty_middle_class() {
        let g = AuxGraph::from_parts(&[1, 3, 3], 3, &[]);
        let r = alpha_dp(&g);
        assert_eq!(r.size, 2);
        assert!(g.is_independent(&r.witness));
    }

    #[test]
    fn bruteforce_cap() {
        let g = AuxGraph::from_parts(&[1; 5], 1, &[]);
        assert!(matches!(alpha_bruteforce(&g, 4), Err(Error::TooLarge { .. })));
        assert_eq!(alpha_bruteforce(&g, 5).unwrap().size, 1);
    }

    #[test]
    fn mixed_posets_rejected() {
        let p = graded(
            &["a", "b", "c", "t", "u"],
            &[("a", "t"), ("b", "u"), ("c", "u"), ("a", "u")],
        );
        let q = graded(
            &["a", "b", "c", "t", "u", "w"],
            &[("a", "t"), ("b", "u"), ("c", "u"), ("a", "u"), ("c", "w")],
        );
        let gp = build_aux_graph(&p);
        let gq = build_aux_graph(&q);
        assert!(matches!(
            adjacent(gp.vertex(0), gq.vertex(0), &p),
            Err(Error::MixedPosets)
        ));
    }
}
