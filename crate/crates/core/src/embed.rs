//! Weak-subposet search.
//!
//! An embedding of `P` into `Q` is an injective map with `a <_P b ⇒ f(a) <_Q f(b)`.
//! Comparabilities in `Q` need not be reflected. The engine works on `u128`
//! masks, so hosts are limited to 128 elements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{Elem, Poset};

pub const MAX_ENGINE_HOST: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    /// `map[p]` is the host element assigned to pattern element `p`.
    pub map: Vec<Elem>,
    pub verified: bool,
}

impl Embedding {
    pub fn named(&self, pattern: &Poset, host: &Poset) -> Vec<(String, String)> {
        self.map
            .iter()
            .enumerate()
            .map(|(p, &h)| (pattern.name_of(p).to_string(), host.name_of(h).to_string()))
            .collect()
    }
}

/// Independent check of injectivity and order preservation, straight from the
/// relation matrices.
pub fn verify_embedding(pattern: &Poset, host: &Poset, map: &[Elem]) -> std::result::Result<(), String> {
    if map.len() != pattern.len() {
        return Err(format!(
            "map covers {} of {} pattern elements",
            map.len(),
            pattern.len()
        ));
    }
    for (p, &h) in map.iter().enumerate() {
        if h >= host.len() {
            return Err(format!("{} maps outside the host", pattern.name_of(p)));
        }
    }
    for a in 0..map.len() {
        for b in 0..map.len() {
            if a != b && map[a] == map[b] {
                return Err(format!(
                    "{} and {} share the image {}",
                    pattern.name_of(a),
                    pattern.name_of(b),
                    host.name_of(map[a])
                ));
            }
            if pattern.lt(a, b) && !host.lt(map[a], map[b]) {
                return Err(format!(
                    "{} < {} but {} is not below {}",
                    pattern.name_of(a),
                    pattern.name_of(b),
                    host.name_of(map[a]),
                    host.name_of(map[b])
                ));
            }
        }
    }
    Ok(())
}

fn check_host(host: &Poset) -> Result<()> {
    if host.len() > MAX_ENGINE_HOST {
        return Err(Error::TooLarge {
            what: "embedding host".into(),
            size: host.len(),
            cap: MAX_ENGINE_HOST,
        });
    }
    Ok(())
}

/// Host relation masks over positions `0..n` (positions are host indices).
#[derive(Clone, Debug)]
pub(crate) struct HostMasks {
    pub up: Vec<u128>,
    pub down: Vec<u128>,
}

impl HostMasks {
    /// Masks with elements relabelled by `order` (position `i` is `order[i]`).
    pub fn new(host: &Poset, order: &[Elem]) -> HostMasks {
        let n = order.len();
        let mut pos = vec![usize::MAX; host.len()];
        for (i, &e) in order.iter().enumerate() {
            pos[e] = i;
        }
        let mut up = vec![0u128; n];
        let mut down = vec![0u128; n];
        for (i, &e) in order.iter().enumerate() {
            for b in host.up_set(e).ones() {
                if pos[b] != usize::MAX {
                    up[i] |= 1u128 << pos[b];
                }
            }
            for a in host.down_set(e).ones() {
                if pos[a] != usize::MAX {
                    down[i] |= 1u128 << pos[a];
                }
            }
        }
        HostMasks { up, down }
    }

    pub fn identity(host: &Poset) -> HostMasks {
        let order: Vec<Elem> = (0..host.len()).collect();
        HostMasks::new(host, &order)
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }
}

/// Pattern preprocessed for a fixed placement order.
#[derive(Clone, Debug)]
pub(crate) struct CompiledPattern {
    /// Placement order of pattern elements.
    order: Vec<Elem>,
    /// For step `s`, earlier steps whose element lies below / above `order[s]`.
    below: Vec<Vec<usize>>,
    above: Vec<Vec<usize>>,
    rank: Vec<usize>,
    corank: Vec<usize>,
    downsize: Vec<u32>,
    upsize: Vec<u32>,
    anchor: Option<Elem>,
}

fn coranks(p: &Poset) -> Vec<usize> {
    let mut order: Vec<Elem> = (0..p.len()).collect();
    order.sort_by_key(|&e| std::cmp::Reverse(p.rank(e)));
    let mut co = vec![0usize; p.len()];
    for &a in &order {
        co[a] = 1 + p.up_set(a).ones().map(|b| co[b]).max().unwrap_or(0);
    }
    co
}

impl CompiledPattern {
    pub fn new(p: &Poset, anchor: Option<Elem>) -> CompiledPattern {
        let n = p.len();
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let start = |order: &mut Vec<Elem>, placed: &mut Vec<bool>, e: Elem| {
            placed[e] = true;
            order.push(e);
        };
        if let Some(a) = anchor {
            start(&mut order, &mut placed, a);
        }
        // greedy: most comparabilities with what is placed, then most overall
        let degree: Vec<usize> = (0..n)
            .map(|e| p.up_set(e).count_ones(..) + p.down_set(e).count_ones(..))
            .collect();
        while order.len() < n {
            let next = (0..n)
                .filter(|&e| !placed[e])
                .max_by_key(|&e| {
                    let links = order.iter().filter(|&&q| p.comparable(q, e)).count();
                    (links, degree[e], std::cmp::Reverse(e))
                })
                .unwrap();
            start(&mut order, &mut placed, next);
        }
        let mut below = Vec::with_capacity(n);
        let mut above = Vec::with_capacity(n);
        for s in 0..n {
            let e = order[s];
            below.push((0..s).filter(|&t| p.lt(order[t], e)).collect());
            above.push((0..s).filter(|&t| p.lt(e, order[t])).collect());
        }
        CompiledPattern {
            rank: order.iter().map(|&e| p.rank(e)).collect(),
            corank: {
                let co = coranks(p);
                order.iter().map(|&e| co[e]).collect()
            },
            downsize: order.iter().map(|&e| p.down_set(e).count_ones(..) as u32).collect(),
            upsize: order.iter().map(|&e| p.up_set(e).count_ones(..) as u32).collect(),
            order,
            below,
            above,
            anchor,
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }
}

/// Search state for one (pattern, host family) pair.
pub(crate) struct Matcher<'a> {
    pat: &'a CompiledPattern,
    host: &'a HostMasks,
    base: Vec<u128>,
    img: Vec<usize>,
    pub nodes: u64,
}

fn ranks_in(host: &HostMasks, fam: u128) -> (Vec<usize>, Vec<usize>) {
    let n = host.len();
    let mut rank = vec![0usize; n];
    let mut co = vec![0usize; n];
    // positions are a linear extension when callers pass one; otherwise iterate
    // to a fixpoint, which terminates because the order is acyclic
    let members: Vec<usize> = (0..n).filter(|&i| fam >> i & 1 == 1).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &i in &members {
            let mut r = 1;
            let mut d = host.down[i] & fam;
            while d != 0 {
                let j = d.trailing_zeros() as usize;
                d &= d - 1;
                r = r.max(rank[j] + 1);
            }
            if r != rank[i] {
                rank[i] = r;
                changed = true;
            }
        }
    }
    changed = true;
    while changed {
        changed = false;
        for &i in members.iter().rev() {
            let mut r = 1;
            let mut u = host.up[i] & fam;
            while u != 0 {
                let j = u.trailing_zeros() as usize;
                u &= u - 1;
                r = r.max(co[j] + 1);
            }
            if r != co[i] {
                co[i] = r;
                changed = true;
            }
        }
    }
    (rank, co)
}

impl<'a> Matcher<'a> {
    /// Restricts the host to the members of `fam`.
    pub fn new(pat: &'a CompiledPattern, host: &'a HostMasks, fam: u128) -> Matcher<'a> {
        let (rank, co) = ranks_in(host, fam);
        let mut base = vec![0u128; pat.len()];
        let mut f = fam;
        while f != 0 {
            let h = f.trailing_zeros() as usize;
            f &= f - 1;
            let dn = (host.down[h] & fam).count_ones();
            let upn = (host.up[h] & fam).count_ones();
            for (s, b) in base.iter_mut().enumerate() {
                if rank[h] >= pat.rank[s]
                    && co[h] >= pat.corank[s]
                    && dn >= pat.downsize[s]
                    && upn >= pat.upsize[s]
                {
                    *b |= 1u128 << h;
                }
            }
        }
        Matcher {
            pat,
            host,
            base,
            img: vec![usize::MAX; pat.len()],
            nodes: 0,
        }
    }

    /// Runs the search; `anchor_at` pins the compiled anchor element.
    pub fn run(&mut self, anchor_at: Option<usize>) -> bool {
        if self.pat.len() == 0 {
            return true;
        }
        if let (Some(_), Some(h)) = (self.pat.anchor, anchor_at) {
            if self.base[0] >> h & 1 == 0 {
                return false;
            }
            self.base[0] = 1u128 << h;
        }
        self.step(0, 0)
    }

    fn step(&mut self, s: usize, used: u128) -> bool {
        self.nodes += 1;
        if s == self.pat.len() {
            return true;
        }
        let mut cand = self.base[s] & !used;
        for &t in &self.pat.below[s] {
            cand &= self.host.up[self.img[t]];
        }
        for &t in &self.pat.above[s] {
            cand &= self.host.down[self.img[t]];
        }
        while cand != 0 {
            let h = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            self.img[s] = h;
            if self.step(s + 1, used | 1u128 << h) {
                return true;
            }
        }
        false
    }

    /// `map[p]` in host positions, valid after a successful `run`.
    pub fn mapping(&self) -> Vec<usize> {
        let mut map = vec![0; self.pat.len()];
        for (s, &e) in self.pat.order.iter().enumerate() {
            map[e] = self.img[s];
        }
        map
    }
}

fn full_mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Some embedding of `pattern` into `host`, verified independently.
pub fn embeds(pattern: &Poset, host: &Poset) -> Result<Option<Embedding>> {
    check_host(host)?;
    if pattern.len() > host.len() || pattern.height() > host.height() {
        return Ok(None);
    }
    let pat = CompiledPattern::new(pattern, None);
    let masks = HostMasks::identity(host);
    let mut m = Matcher::new(&pat, &masks, full_mask(host.len()));
    if !m.run(None) {
        return Ok(None);
    }
    let map = m.mapping();
    let verified = verify_embedding(pattern, host, &map).is_ok();
    assert!(verified, "embedding engine produced an invalid map");
    Ok(Some(Embedding { map, verified }))
}

/// Whether the induced subposet on `family` avoids `pattern`.
pub fn is_p_free(family: &[Elem], pattern: &Poset, host: &Poset) -> Result<bool> {
    check_host(host)?;
    if family.len() < pattern.len() {
        return Ok(true);
    }
    let mut fam = 0u128;
    for &e in family {
        if e >= host.len() {
            return Err(Error::UnknownElement(format!("#{e}")));
        }
        fam |= 1u128 << e;
    }
    Ok(!contains_in(pattern, host, fam))
}

fn contains_in(pattern: &Poset, host: &Poset, fam: u128) -> bool {
    let pat = CompiledPattern::new(pattern, None);
    let masks = HostMasks::identity(host);
    Matcher::new(&pat, &masks, fam).run(None)
}

/// Embedding of `pattern` into the family `fam` of `host`, in host indices.
pub fn embed_into_family(pattern: &Poset, host: &Poset, family: &[Elem]) -> Result<Option<Embedding>> {
    check_host(host)?;
    let fam = family.iter().fold(0u128, |m, &e| m | 1u128 << e);
    let pat = CompiledPattern::new(pattern, None);
    let masks = HostMasks::identity(host);
    let mut m = Matcher::new(&pat, &masks, fam);
    if !m.run(None) {
        return Ok(None);
    }
    let map = m.mapping();
    let verified = verify_embedding(pattern, host, &map).is_ok();
    assert!(verified, "embedding engine produced an invalid map");
    Ok(Some(Embedding { map, verified }))
}

/// Posets of equal size and equal relation count with an embedding between
/// them are isomorphic: the injective map is a bijection and sends the
/// relations of one injectively onto the relations of the other.
pub fn is_isomorphic(p: &Poset, q: &Poset) -> Result<bool> {
    if p.len() != q.len() || p.relation_count() != q.relation_count() || p.height() != q.height()
    {
        return Ok(false);
    }
    Ok(embeds(p, q)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{boolean_lattice, double_chain};

    fn diamond() -> Poset {
        Poset::from_covers(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
        )
        .unwrap()
    }

    #[test]
    fn diamond_into_b2() {
        let b2 = boolean_lattice(2).unwrap();
        let e = embeds(&diamond(), b2.as_poset()).unwrap().unwrap();
        assert!(e.verified);
    }

    #[test]
    fn chain_lengths_in_double_chain() {
        let c = double_chain(3).unwrap();
        assert!(embeds(&Poset::chain(4), c.as_poset()).unwrap().is_some());
        assert!(embeds(&Poset::chain(5), c.as_poset()).unwrap().is_none());
    }

    #[test]
    fn small_families_are_free() {
        let c = double_chain(4).unwrap();
        assert!(is_p_free(&[0, 1, 2], &diamond(), c.as_poset()).unwrap());
    }

    #[test]
    fn weak_not_induced() {
        // comparabilities need not be reflected, so a 2-chain hosts an antichain
        let mut b = crate::poset::PosetBuilder::new().allow_disconnected(true);
        b.elements(["p", "q"]).unwrap();
        let anti = b.build().unwrap();
        assert!(embeds(&anti, &Poset::chain(2)).unwrap().is_some());
        assert!(embeds(&Poset::chain(2), &anti).unwrap().is_none());
    }

    #[test]
    fn isomorphism() {
        let d = diamond();
        assert!(is_isomorphic(&d, &d.dual()).unwrap());
        let b2 = boolean_lattice(2).unwrap();
        assert!(is_isomorphic(&d, b2.as_poset()).unwrap());
        assert!(!is_isomorphic(&d, &Poset::chain(4)).unwrap());
    }

    #[test]
    fn verifier_rejects_bad_maps() {
        let d = diamond();
        let c = Poset::chain(4);
        assert!(verify_embedding(&d, &c, &[0, 1, 2, 3]).is_ok());
        assert!(verify_embedding(&d, &c, &[0, 1, 1, 3]).is_err());
        assert!(verify_embedding(&d, &c, &[3, 1, 2, 0]).is_err());
        assert!(verify_embedding(&d, &c, &[0, 1, 2]).is_err());
    }
}
