//! Boolean lattices, k-interval chains and level windows.
//!
//! The underlying full chain is `∅ ⊂ {1} ⊂ {1,2} ⊂ ... ⊂ [n]`. Subsets of
//! `[n]` are stored as `u128` masks with bit `j-1` standing for `j`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{Elem, Poset};

/// Largest ground set accepted by the constructions.
pub const MAX_GROUND: usize = 127;
/// Largest host poset the constructions will materialise.
pub const MAX_HOST_ELEMENTS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainElement {
    /// `l_i = {1..i}`.
    Full(usize),
    /// `l_m ∪ T` with `T ⊆ {m+2..m+k}` nonempty; bit `j` of `mask` is `m+1+j`.
    /// Bit 0 is always clear, which makes `m` the longest full-chain prefix.
    Side { m: usize, mask: u64 },
}

impl ChainElement {
    pub fn set(self) -> u128 {
        match self {
            ChainElement::Full(i) => prefix(i),
            ChainElement::Side { m, mask } => prefix(m) | ((mask as u128) << m),
        }
    }
}

fn prefix(i: usize) -> u128 {
    if i >= 128 {
        u128::MAX
    } else {
        (1u128 << i) - 1
    }
}

pub fn is_subset(a: u128, b: u128) -> bool {
    a & !b == 0
}

/// `C_k` over `[n]` together with its element encodings.
#[derive(Clone, Debug)]
pub struct IntervalChain {
    n: usize,
    k: usize,
    elements: Vec<ChainElement>,
    poset: Poset,
}

/// `C_k(n)`: the full chain plus every set strictly between `l_m` and `l_{m+k}`.
///
/// Elements are declared in a linear extension sorted by (smallest `t` with
/// `S ⊆ l_t`, `|S|`, mask). For `k = 2` this is the canonical order
/// `l0, l1, r1, l2, r2, ..., l_n`.
pub fn build_interval_chain(n: usize, k: usize) -> Result<IntervalChain> {
    if k < 1 || k > n {
        return Err(Error::InvalidParams(format!(
            "interval width k={k} must satisfy 1 <= k <= n={n}"
        )));
    }
    if n > MAX_GROUND || k > 63 {
        return Err(Error::InvalidParams(format!("n={n} is too large")));
    }
    let approx = (n + 1).saturating_add(n.saturating_mul(1usize << (k - 1).min(20)));
    if approx > 4 * MAX_HOST_ELEMENTS {
        return Err(Error::TooLarge {
            what: format!("C_{k}({n})"),
            size: approx,
            cap: MAX_HOST_ELEMENTS,
        });
    }

    let mut elements: Vec<ChainElement> = (0..=n).map(ChainElement::Full).collect();
    for m in 0..n.saturating_sub(1) {
        let width = k.min(n - m);
        for mask in 1u64..(1u64 << width) {
            if mask & 1 == 0 {
                elements.push(ChainElement::Side { m, mask });
            }
        }
    }
    if elements.len() > MAX_HOST_ELEMENTS {
        return Err(Error::TooLarge {
            what: format!("C_{k}({n})"),
            size: elements.len(),
            cap: MAX_HOST_ELEMENTS,
        });
    }
    elements.sort_by_key(|e| {
        let s = e.set();
        (128 - s.leading_zeros(), s.count_ones(), s)
    });

    let names = elements.iter().map(|&e| element_name(e, k)).collect();
    let sets: Vec<u128> = elements.iter().map(|e| e.set()).collect();
    let mut poset = Poset::from_order_fn(Some(chain_name(n, k)), names, |a, b| {
        sets[a] != sets[b] && is_subset(sets[a], sets[b])
    })?;
    poset.set_name(chain_name(n, k));
    Ok(IntervalChain {
        n,
        k,
        elements,
        poset,
    })
}

fn chain_name(n: usize, k: usize) -> String {
    format!("C{k}_n{n}")
}

fn element_name(e: ChainElement, k: usize) -> String {
    match e {
        ChainElement::Full(i) => format!("l{i}"),
        ChainElement::Side { m, mask } if k == 2 && mask == 0b10 => format!("r{}", m + 1),
        ChainElement::Side { m, mask } => format!("S_{m}_{mask}"),
    }
}

/// The double chain `C_2(n)`.
pub fn double_chain(n: usize) -> Result<IntervalChain> {
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "the double chain needs n >= 2, got {n}"
        )));
    }
    build_interval_chain(n, 2)
}

/// `B_n`, realised as `C_n(n)`.
pub fn boolean_lattice(n: usize) -> Result<IntervalChain> {
    if n > 12 {
        return Err(Error::TooLarge {
            what: format!("B_{n}"),
            size: 1 << n.min(60),
            cap: MAX_HOST_ELEMENTS,
        });
    }
    if n == 0 {
        return Err(Error::InvalidParams("B_0 is a single point".into()));
    }
    build_interval_chain(n, n)
}

impl IntervalChain {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn as_poset(&self) -> &Poset {
        &self.poset
    }

    pub fn into_poset(self) -> Poset {
        self.poset
    }

    pub fn element(&self, e: Elem) -> ChainElement {
        self.elements[e]
    }

    pub fn set_of(&self, e: Elem) -> u128 {
        self.elements[e].set()
    }

    /// Sorted members of the subset behind `e`, 1-based.
    pub fn members(&self, e: Elem) -> Vec<usize> {
        let s = self.set_of(e);
        (0..128).filter(|&j| s >> j & 1 == 1).map(|j| j + 1).collect()
    }

    /// The canonical order `l0, l1, r1, ..., l_n`; only defined for `k = 2`.
    pub fn linear_order(&self) -> Option<Vec<Elem>> {
        (self.k == 2).then(|| (0..self.len()).collect())
    }

    /// Index of `l_i` in the canonical order (k = 2).
    pub fn pos_l(i: usize) -> usize {
        if i == 0 {
            0
        } else {
            2 * i - 1
        }
    }

    /// Index of `r_i` (i >= 1) in the canonical order (k = 2).
    pub fn pos_r(i: usize) -> usize {
        2 * i
    }

    /// Resolves `l3`, `r4`, ... (or any element name) to canonical positions,
    /// sorted and deduplicated.
    pub fn family_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<Elem>> {
        let mut fam = Vec::with_capacity(names.len());
        for s in names {
            let s = s.as_ref().trim();
            let name = match s.strip_prefix('ℓ') {
                Some(rest) => format!("l{rest}"),
                None => s.to_string(),
            };
            fam.push(self.poset.require(&name)?);
        }
        fam.sort_unstable();
        fam.dedup();
        Ok(fam)
    }

    /// Family given as a bitmask over the declaration order.
    pub fn family_from_mask(&self, mask: u128) -> Result<Vec<Elem>> {
        if self.len() < 128 && mask >> self.len() != 0 {
            return Err(Error::InvalidParams(format!(
                "family mask has bits beyond the {} host elements",
                self.len()
            )));
        }
        Ok((0..self.len().min(128)).filter(|&i| mask >> i & 1 == 1).collect())
    }

    pub fn family_names(&self, fam: &[Elem]) -> Vec<String> {
        fam.iter().map(|&e| self.poset.name_of(e).to_string()).collect()
    }
}

fn subset_name(s: u128) -> String {
    if s == 0 {
        return "s0".to_string();
    }
    let parts: Vec<String> = (0..128)
        .filter(|&j| s >> j & 1 == 1)
        .map(|j| (j + 1).to_string())
        .collect();
    format!("s{}", parts.join("_"))
}

/// Induced subposet of `B_n` on all sets of size `i..i+m-1`.
pub fn level_window(n: usize, i: usize, m: usize) -> Result<Poset> {
    if m < 1 || i + m > n + 1 {
        return Err(Error::InvalidParams(format!(
            "window i={i}, m={m} does not fit in B_{n}"
        )));
    }
    if n > MAX_GROUND {
        return Err(Error::InvalidParams(format!("n={n} is too large")));
    }
    let size: u128 = (i..i + m).map(|r| binom(n, r)).sum();
    if size > MAX_HOST_ELEMENTS as u128 {
        return Err(Error::TooLarge {
            what: format!("window n={n}, i={i}, m={m}"),
            size: size.min(usize::MAX as u128) as usize,
            cap: MAX_HOST_ELEMENTS,
        });
    }
    let mut sets = Vec::with_capacity(size as usize);
    for r in i..i + m {
        sets.extend(k_subsets(n, r));
    }
    let names = sets.iter().map(|&s| subset_name(s)).collect();
    let mut p = Poset::from_order_fn(None, names, |a, b| {
        sets[a] != sets[b] && is_subset(sets[a], sets[b])
    })?;
    p.set_name(format!("window_n{n}_i{i}_m{m}"));
    Ok(p)
}

pub(crate) fn binom(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for j in 0..r {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc
}

/// All `r`-subsets of `[n]` in colex order.
fn k_subsets(n: usize, r: usize) -> Vec<u128> {
    let mut out = Vec::new();
    if r == 0 {
        out.push(0);
        return out;
    }
    if r > n {
        return out;
    }
    let mut s: u128 = (1u128 << r) - 1;
    let limit = if n >= 128 { u128::MAX } else { 1u128 << n };
    while s < limit {
        out.push(s);
        // Gosper's hack
        let c = s & s.wrapping_neg();
        let rr = s + c;
        if rr == 0 {
            break;
        }
        s = (((rr ^ s) >> 2) / c) | rr;
    }
    out
}

/// Host specification strings: `chain:k=2,n=10`, `boolean:n=5`,
/// `window:n=5,i=1,m=3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HostSpec {
    Chain { k: usize, n: usize },
    Boolean { n: usize },
    Window { n: usize, i: usize, m: usize },
}

/// A materialised host together with its chain structure when it has one.
#[derive(Clone, Debug)]
pub struct Host {
    pub spec: HostSpec,
    pub poset: Poset,
    pub chain: Option<IntervalChain>,
}

impl HostSpec {
    pub fn build(self) -> Result<Host> {
        match self {
            HostSpec::Chain { k, n } => {
                let c = build_interval_chain(n, k)?;
                Ok(Host {
                    spec: self,
                    poset: c.as_poset().clone(),
                    chain: Some(c),
                })
            }
            HostSpec::Boolean { n } => {
                let c = boolean_lattice(n)?;
                Ok(Host {
                    spec: self,
                    poset: c.as_poset().clone(),
                    chain: Some(c),
                })
            }
            HostSpec::Window { n, i, m } => Ok(Host {
                spec: self,
                poset: level_window(n, i, m)?,
                chain: None,
            }),
        }
    }
}

impl fmt::Display for HostSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            HostSpec::Chain { k, n } => write!(f, "chain:k={k},n={n}"),
            HostSpec::Boolean { n } => write!(f, "boolean:n={n}"),
            HostSpec::Window { n, i, m } => write!(f, "window:n={n},i={i},m={m}"),
        }
    }
}

impl FromStr for HostSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidParams(format!("host spec `{s}`: {why}"));
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad("missing `:`"))?;
        let mut k = None;
        let mut n = None;
        let mut i = None;
        let mut m = None;
        for kv in rest.split(',').filter(|t| !t.trim().is_empty()) {
            let (key, val) = kv.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let val: usize = val.trim().parse().map_err(|_| bad("value is not a number"))?;
            let slot = match key.trim() {
                "k" => &mut k,
                "n" => &mut n,
                "i" => &mut i,
                "m" => &mut m,
                other => return Err(bad(&format!("unknown key `{other}`"))),
            };
            *slot = Some(val);
        }
        let need = |v: Option<usize>, key: &str| v.ok_or_else(|| bad(&format!("missing `{key}`")));
        match kind.trim() {
            "chain" => Ok(HostSpec::Chain {
                k: need(k, "k")?,
                n: need(n, "n")?,
            }),
            "boolean" => Ok(HostSpec::Boolean { n: need(n, "n")? }),
            "window" => Ok(HostSpec::Window {
                n: need(n, "n")?,
                i: need(i, "i")?,
                m: need(m, "m")?,
            }),
            other => Err(bad(&format!("unknown host kind `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c1_is_a_chain() {
        let c = build_interval_chain(4, 1).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.as_poset().height(), 5);
    }

    #[test]
    fn double_chain_labels() {
        let c = double_chain(4).unwrap();
        assert_eq!(c.len(), 8);
        let names: Vec<&str> = c.as_poset().names().iter().map(String::as_str).collect();
        assert_eq!(names, ["l0", "l1", "r1", "l2", "r2", "l3", "r3", "l4"]);
        let p = c.as_poset();
        let r1 = p.index_of("r1").unwrap();
        assert_eq!(c.members(r1), vec![2]);
        assert_eq!(c.members(p.index_of("r2").unwrap()), vec![1, 3]);
        assert_eq!(IntervalChain::pos_r(1), r1);
        assert_eq!(IntervalChain::pos_l(3), p.index_of("l3").unwrap());
    }

    #[test]
    fn double_chain_incomparabilities() {
        let c = double_chain(3).unwrap();
        let p = c.as_poset();
        assert!(p.incomparable("r1", "l1").unwrap());
        assert!(p.incomparable("r1", "r2").unwrap());
        assert!(!p.incomparable("r1", "l2").unwrap());
        assert_eq!(p.height(), 4);
        let c2 = double_chain(2).unwrap();
        let q = c2.as_poset();
        let r1 = q.index_of("r1").unwrap();
        let inc: Vec<&str> = (0..q.len())
            .filter(|&e| q.incomparable_idx(e, r1) && e != r1)
            .map(|e| q.name_of(e))
            .collect();
        assert_eq!(inc, ["l1"]);
    }

    #[test]
    fn boolean_is_top_interval_chain() {
        let b = boolean_lattice(3).unwrap();
        assert_eq!(b.len(), 8);
        let mut sets: Vec<u128> = (0..b.len()).map(|e| b.set_of(e)).collect();
        sets.sort_unstable();
        sets.dedup();
        assert_eq!(sets.len(), 8);
        assert_eq!(b.as_poset().height(), 4);
    }

    #[test]
    fn windows() {
        let w = level_window(4, 2, 1).unwrap();
        assert_eq!(w.len(), 6);
        assert_eq!(w.relation_count(), 0);
        let v = level_window(3, 0, 2).unwrap();
        assert_eq!(v.len(), 4);
        assert_eq!(v.minimal(), vec![0]);
        assert!(level_window(3, 3, 2).is_err());
    }

    #[test]
    fn host_specs() {
        let h: HostSpec = "chain:k=2,n=10".parse().unwrap();
        assert_eq!(h, HostSpec::Chain { k: 2, n: 10 });
        assert_eq!(h.to_string(), "chain:k=2,n=10");
        assert_eq!(
            "window:n=5,i=1,m=3".parse::<HostSpec>().unwrap(),
            HostSpec::Window { n: 5, i: 1, m: 3 }
        );
        assert!("boolean:k=3".parse::<HostSpec>().is_err());
        assert!("ring:n=3".parse::<HostSpec>().is_err());
        assert_eq!(h.build().unwrap().poset.len(), 20);
    }

    #[test]
    fn families() {
        let c = double_chain(6).unwrap();
        let f = c.family_from_names(&["r2", "l1", "ℓ3"]).unwrap();
        assert_eq!(c.family_names(&f), ["l1", "r2", "l3"]);
        assert_eq!(c.family_from_mask(0b111).unwrap(), vec![0, 1, 2]);
        assert!(c.family_from_names(&["r9"]).is_err());
    }
}
