//! Finite strict partial orders.
//!
//! A [`Poset`] keeps its elements in declaration order together with the full
//! strict order relation (as up-sets and down-sets) and the Hasse diagram.
//! Input relations are generating pairs: the builder takes the transitive
//! closure and re-derives the covers, so callers may list non-cover pairs.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Index of an element inside its poset (declaration order).
pub type Elem = usize;

#[derive(Clone)]
pub struct Poset {
    name: Option<String>,
    names: Vec<String>,
    index: HashMap<String, Elem>,
    /// `up[a]` holds every `b` with `a < b`.
    up: Vec<FixedBitSet>,
    /// `down[b]` holds every `a` with `a < b`.
    down: Vec<FixedBitSet>,
    covers: Vec<(Elem, Elem)>,
    rank: Vec<usize>,
    height: usize,
    connected: bool,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.up == other.up
    }
}

impl Eq for Poset {}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers
            .iter()
            .map(|&(a, b)| format!("{}<{}", self.names[a], self.names[b]))
            .collect();
        f.debug_struct("Poset")
            .field("name", &self.name)
            .field("elements", &self.names)
            .field("covers", &covers)
            .finish()
    }
}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_')
}

/// Incremental construction of a [`Poset`] from elements and generating pairs.
#[derive(Clone, Debug, Default)]
pub struct PosetBuilder {
    name: Option<String>,
    names: Vec<String>,
    index: HashMap<String, Elem>,
    relations: Vec<(Elem, Elem)>,
    allow_disconnected: bool,
}

impl PosetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = Some(name.into());
    }

    /// Hosts and families are routinely disconnected; patterns are not.
    pub fn allow_disconnected(mut self, allow: bool) -> Self {
        self.allow_disconnected = allow;
        self
    }

    pub fn element(&mut self, name: &str) -> Result<Elem> {
        if !valid_name(name) {
            return Err(Error::InvalidName(name.to_string()));
        }
        if self.index.contains_key(name) {
            return Err(Error::DuplicateElement(name.to_string()));
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn elements<'a>(&mut self, names: impl IntoIterator<Item = &'a str>) -> Result<()> {
        for name in names {
            self.element(name)?;
        }
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Adds the generating pair `lower < upper`.
    pub fn relation(&mut self, lower: &str, upper: &str) -> Result<()> {
        let a = self
            .lookup(lower)
            .ok_or_else(|| Error::UnknownElement(lower.to_string()))?;
        let b = self
            .lookup(upper)
            .ok_or_else(|| Error::UnknownElement(upper.to_string()))?;
        self.relations.push((a, b));
        Ok(())
    }

    pub fn relation_idx(&mut self, lower: Elem, upper: Elem) {
        assert!(lower < self.names.len() && upper < self.names.len());
        self.relations.push((lower, upper));
    }

    pub fn build(self) -> Result<Poset> {
        let n = self.names.len();
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in &self.relations {
            if !succ[a].contains(&b) {
                succ[a].push(b);
            }
        }
        let topo = match topological_order(&succ) {
            Ok(order) => order,
            Err(cycle) => {
                return Err(Error::CycleDetected(
                    cycle.into_iter().map(|i| self.names[i].clone()).collect(),
                ))
            }
        };

        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &a in topo.iter().rev() {
            let mut acc = FixedBitSet::with_capacity(n);
            for &b in &succ[a] {
                acc.insert(b);
                acc.union_with(&up[b]);
            }
            up[a] = acc;
        }
        let poset = Poset::from_closure(self.name, self.names, self.index, up);
        if !poset.connected && !self.allow_disconnected {
            return Err(Error::Disconnected(poset.component_names()));
        }
        Ok(poset)
    }
}

/// Kahn-free DFS topological sort; on failure returns one directed cycle.
fn topological_order(succ: &[Vec<Elem>]) -> std::result::Result<Vec<Elem>, Vec<Elem>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let n = succ.len();
    let mut mark = vec![Mark::New; n];
    let mut post = Vec::with_capacity(n);
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        // (node, next successor to visit)
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Open;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&w) = succ[v].get(*next) {
                *next += 1;
                match mark[w] {
                    Mark::New => {
                        mark[w] = Mark::Open;
                        stack.push((w, 0));
                    }
                    Mark::Open => {
                        let start = stack.iter().position(|&(u, _)| u == w).unwrap();
                        return Err(stack[start..].iter().map(|&(u, _)| u).collect());
                    }
                    Mark::Done => {}
                }
            } else {
                mark[v] = Mark::Done;
                post.push(v);
                stack.pop();
            }
        }
    }
    post.reverse();
    Ok(post)
}

impl Poset {
    fn from_closure(
        name: Option<String>,
        names: Vec<String>,
        index: HashMap<String, Elem>,
        up: Vec<FixedBitSet>,
    ) -> Poset {
        let n = names.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (a, ups) in up.iter().enumerate() {
            for b in ups.ones() {
                down[b].insert(a);
            }
        }
        let mut covers = Vec::new();
        for (a, ups) in up.iter().enumerate() {
            for b in ups.ones() {
                if ups.is_disjoint(&down[b]) {
                    covers.push((a, b));
                }
            }
        }

        // |down| strictly grows along the order, so sorting by it is a linear extension.
        let mut order: Vec<Elem> = (0..n).collect();
        order.sort_by_key(|&e| down[e].count_ones(..));
        let mut rank = vec![0usize; n];
        for &b in &order {
            rank[b] = 1 + down[b].ones().map(|a| rank[a]).max().unwrap_or(0);
        }
        let height = rank.iter().copied().max().unwrap_or(0);

        let mut dsu = Dsu::new(n);
        for &(a, b) in &covers {
            dsu.union(a, b);
        }
        let connected = n <= 1 || (0..n).all(|e| dsu.find(e) == dsu.find(0));

        Poset {
            name,
            names,
            index,
            up,
            down,
            covers,
            rank,
            height,
            connected,
        }
    }

    /// Builds a poset from a strict order given as a predicate. The predicate
    /// must already be transitive (inclusion orders are); connectivity is not
    /// enforced.
    pub fn from_order_fn(
        name: Option<String>,
        names: Vec<String>,
        lt: impl Fn(Elem, Elem) -> bool,
    ) -> Result<Poset> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, s) in names.iter().enumerate() {
            if !valid_name(s) {
                return Err(Error::InvalidName(s.clone()));
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::DuplicateElement(s.clone()));
            }
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter_mut().enumerate() {
            for b in 0..n {
                if a != b && lt(a, b) {
                    row.insert(b);
                }
            }
        }
        Ok(Poset::from_closure(name, names, index, up))
    }

    /// Builds a connected poset from cover (or any generating) pairs.
    pub fn from_covers(elements: &[&str], covers: &[(&str, &str)]) -> Result<Poset> {
        let mut b = PosetBuilder::new();
        b.elements(elements.iter().copied())?;
        for &(lo, hi) in covers {
            b.relation(lo, hi)?;
        }
        b.build()
    }

    /// A chain `c1 < c2 < ... < ck`.
    pub fn chain(k: usize) -> Poset {
        assert!(k >= 1);
        let mut b = PosetBuilder::new().named(format!("chain{k}"));
        for i in 1..=k {
            b.element(&format!("c{i}")).unwrap();
        }
        for i in 1..k {
            b.relation_idx(i - 1, i);
        }
        b.build().unwrap()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = Some(name.into());
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name_of(&self, e: Elem) -> &str {
        &self.names[e]
    }

    pub fn index_of(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<Elem> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// Strict order `a < b`.
    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        self.up[a].contains(b)
    }

    pub fn le(&self, a: Elem, b: Elem) -> bool {
        a == b || self.lt(a, b)
    }

    pub fn comparable(&self, a: Elem, b: Elem) -> bool {
        a == b || self.lt(a, b) || self.lt(b, a)
    }

    pub fn incomparable_idx(&self, a: Elem, b: Elem) -> bool {
        !self.comparable(a, b)
    }

    pub fn incomparable(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.incomparable_idx(self.require(a)?, self.require(b)?))
    }

    pub fn up_set(&self, a: Elem) -> &FixedBitSet {
        &self.up[a]
    }

    pub fn down_set(&self, b: Elem) -> &FixedBitSet {
        &self.down[b]
    }

    /// Number of strict comparable pairs.
    pub fn relation_count(&self) -> usize {
        self.up.iter().map(|s| s.count_ones(..)).sum()
    }

    /// Hasse diagram, sorted by (lower, upper) index.
    pub fn covers(&self) -> &[(Elem, Elem)] {
        &self.covers
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn components(&self) -> Vec<Vec<Elem>> {
        let mut dsu = Dsu::new(self.len());
        for &(a, b) in &self.covers {
            dsu.union(a, b);
        }
        let mut groups: Vec<Vec<Elem>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for e in 0..self.len() {
            let root = dsu.find(e);
            let idx = *slot.entry(root).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[idx].push(e);
        }
        groups
    }

    fn component_names(&self) -> Vec<Vec<String>> {
        self.components()
            .into_iter()
            .map(|c| c.into_iter().map(|e| self.names[e].clone()).collect())
            .collect()
    }

    pub fn minimal(&self) -> Vec<Elem> {
        (0..self.len()).filter(|&e| self.down[e].is_clear()).collect()
    }

    pub fn maximal(&self) -> Vec<Elem> {
        (0..self.len()).filter(|&e| self.up[e].is_clear()).collect()
    }

    pub fn greatest(&self) -> Option<Elem> {
        match self.maximal().as_slice() {
            [g] if self.down[*g].count_ones(..) + 1 == self.len() => Some(*g),
            _ => None,
        }
    }

    pub fn least(&self) -> Option<Elem> {
        match self.minimal().as_slice() {
            [l] if self.up[*l].count_ones(..) + 1 == self.len() => Some(*l),
            _ => None,
        }
    }

    /// Largest chain cardinality.
    pub fn height(&self) -> usize {
        self.height
    }

    /// Mirsky rank (1-based): the number of elements on a longest chain ending at `e`.
    pub fn rank(&self, e: Elem) -> usize {
        self.rank[e]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// Levels by iterated minimal-element stripping.
    pub fn mirsky_levels(&self) -> LevelDecomposition {
        let mut levels = vec![Vec::new(); self.height];
        for e in 0..self.len() {
            levels[self.rank[e] - 1].push(e);
        }
        LevelDecomposition {
            levels,
            rank: self.rank.clone(),
        }
    }

    /// Graded iff every maximal chain has `height` elements.
    pub fn graded_check(&self) -> GradedCheck {
        for &(a, b) in &self.covers {
            if self.rank[b] != self.rank[a] + 1 {
                let mut chain = self.descend_to_minimal(a);
                chain.push(b);
                chain.extend(self.ascend_to_maximal(b).into_iter().skip(1));
                return GradedCheck {
                    graded: false,
                    witness: Some(chain),
                };
            }
        }
        for e in self.maximal() {
            if self.rank[e] != self.height {
                return GradedCheck {
                    graded: false,
                    witness: Some(self.descend_to_minimal(e)),
                };
            }
        }
        GradedCheck {
            graded: true,
            witness: None,
        }
    }

    pub fn is_graded(&self) -> bool {
        self.graded_check().graded
    }

    /// Cover path from a minimal element up to `e` (first lower cover each step).
    fn descend_to_minimal(&self, e: Elem) -> Vec<Elem> {
        let mut path = vec![e];
        let mut cur = e;
        while let Some(&(a, _)) = self.covers.iter().find(|&&(_, b)| b == cur) {
            path.push(a);
            cur = a;
        }
        path.reverse();
        path
    }

    fn ascend_to_maximal(&self, e: Elem) -> Vec<Elem> {
        let mut path = vec![e];
        let mut cur = e;
        while let Some(&(_, b)) = self.covers.iter().find(|&&(a, _)| a == cur) {
            path.push(b);
            cur = b;
        }
        path
    }

    /// Declaration order when it is already a linear extension, otherwise a
    /// stable sort of it by Mirsky rank.
    pub fn linear_extension(&self) -> Vec<Elem> {
        let declared_ok = self.covers.iter().all(|&(a, b)| a < b);
        let mut order: Vec<Elem> = (0..self.len()).collect();
        if !declared_ok {
            order.sort_by_key(|&e| self.rank[e]);
        }
        order
    }

    /// Order-reversed copy with the same element names.
    pub fn dual(&self) -> Poset {
        let name = self.name.as_ref().map(|n| match n.strip_suffix("_dual") {
            Some(orig) => orig.to_string(),
            None => format!("{n}_dual"),
        });
        Poset::from_closure(name, self.names.clone(), self.index.clone(), self.down.clone())
    }

    /// Induced subposet on `members` (kept in the given order).
    pub fn induced(&self, members: &[Elem]) -> Poset {
        let n = members.len();
        let names: Vec<String> = members.iter().map(|&e| self.names[e].clone()).collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                if self.lt(a, b) {
                    up[i].insert(j);
                }
            }
        }
        Poset::from_closure(None, names, index, up)
    }

    /// Same order with every element renamed by `f`.
    pub fn renamed(&self, f: impl Fn(&str) -> String) -> Result<Poset> {
        let mut b = PosetBuilder::new().allow_disconnected(true);
        if let Some(n) = &self.name {
            b.set_name(n.clone());
        }
        for name in &self.names {
            b.element(&f(name))?;
        }
        for &(a, c) in &self.covers {
            b.relation_idx(a, c);
        }
        b.build()
    }

    /// Builder preloaded with this poset's elements and covers.
    pub fn to_builder(&self) -> PosetBuilder {
        let mut b = PosetBuilder::new();
        b.name = self.name.clone();
        for name in &self.names {
            b.element(name).expect("names already valid");
        }
        b.relations = self.covers.clone();
        b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelDecomposition {
    /// `levels[i]` is L_{i+1}, in declaration order.
    pub levels: Vec<Vec<Elem>>,
    /// 1-based level of each element.
    pub rank: Vec<usize>,
}

impl LevelDecomposition {
    pub fn height(&self) -> usize {
        self.levels.len()
    }

    /// Size of L_i (1-based); 0 outside 1..=h.
    pub fn size(&self, i: usize) -> usize {
        if i == 0 || i > self.levels.len() {
            0
        } else {
            self.levels[i - 1].len()
        }
    }

    pub fn level(&self, i: usize) -> &[Elem] {
        &self.levels[i - 1]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCheck {
    pub graded: bool,
    /// On failure, a maximal chain with fewer than `height` elements.
    pub witness: Option<Vec<Elem>>,
}

/// A connected graded poset together with its level decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPoset {
    poset: Poset,
    levels: LevelDecomposition,
}

impl GradedPoset {
    pub fn new(poset: Poset) -> Result<Self> {
        if !poset.is_connected() {
            return Err(Error::Disconnected(poset.component_names()));
        }
        let check = poset.graded_check();
        if let Some(w) = check.witness {
            return Err(Error::NotGraded(
                w.into_iter().map(|e| poset.names[e].clone()).collect(),
            ));
        }
        let levels = poset.mirsky_levels();
        Ok(GradedPoset { poset, levels })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn into_poset(self) -> Poset {
        self.poset
    }

    pub fn levels(&self) -> &LevelDecomposition {
        &self.levels
    }

    pub fn height(&self) -> usize {
        self.levels.height()
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn rank(&self, e: Elem) -> usize {
        self.levels.rank[e]
    }
}

fn disjoint_names(p1: &Poset, p2: &Poset, skip2: Option<Elem>) -> Result<(Poset, Poset)> {
    let clash = p2
        .names
        .iter()
        .enumerate()
        .any(|(i, n)| Some(i) != skip2 && p1.index.contains_key(n));
    if clash {
        Ok((
            p1.renamed(|n| format!("a_{n}"))?,
            p2.renamed(|n| format!("b_{n}"))?,
        ))
    } else {
        Ok((p1.clone(), p2.clone()))
    }
}

fn joined_name(p1: &Poset, p2: &Poset, op: &str) -> Option<String> {
    match (p1.name(), p2.name()) {
        (Some(a), Some(b)) => Some(format!("{a}_{op}_{b}")),
        _ => None,
    }
}

/// Linear sum: every element of `p1` below every element of `p2`.
/// Colliding names are disambiguated with `a_` / `b_` prefixes.
pub fn oplus(p1: &Poset, p2: &Poset) -> Result<Poset> {
    let (a, b) = disjoint_names(p1, p2, None)?;
    let mut builder = PosetBuilder::new().allow_disconnected(true);
    if let Some(n) = joined_name(p1, p2, "plus") {
        builder.set_name(n);
    }
    builder.elements(a.names.iter().map(String::as_str))?;
    builder.elements(b.names.iter().map(String::as_str))?;
    let off = a.len();
    for &(x, y) in a.covers() {
        builder.relation_idx(x, y);
    }
    for &(x, y) in b.covers() {
        builder.relation_idx(x + off, y + off);
    }
    for &top in &a.maximal() {
        for &bot in &b.minimal() {
            builder.relation_idx(top, bot + off);
        }
    }
    builder.build()
}

/// Glues the greatest element of `p1` to the least element of `p2`; the glued
/// element keeps its name from `p1`.
pub fn otimes(p1: &Poset, p2: &Poset) -> Result<Poset> {
    let g = p1.greatest().ok_or(Error::NoGreatestElement)?;
    let l = p2.least().ok_or(Error::NoLeastElement)?;
    let (a, b) = if p2.names[l] == p1.names[g] {
        disjoint_names(p1, p2, Some(l))?
    } else {
        disjoint_names(p1, p2, None)?
    };
    let mut builder = PosetBuilder::new().allow_disconnected(true);
    if let Some(n) = joined_name(p1, p2, "glue") {
        builder.set_name(n);
    }
    builder.elements(a.names.iter().map(String::as_str))?;
    let mut map = vec![0; b.len()];
    for (i, name) in b.names.iter().enumerate() {
        map[i] = if i == l { g } else { builder.element(name)? };
    }
    for &(x, y) in a.covers() {
        builder.relation_idx(x, y);
    }
    for &(x, y) in b.covers() {
        builder.relation_idx(map[x], map[y]);
    }
    builder.build()
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
