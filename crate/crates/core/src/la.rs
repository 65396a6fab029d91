//! Exact `La(Q, P)` for small hosts and level-window estimates of `e(P)`.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::chain::{build_interval_chain, double_chain, level_window};
use crate::embed::{self, CompiledPattern, HostMasks, Matcher};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::poset::{Elem, Poset};

pub const DEFAULT_LA_CAP: usize = 26;

#[derive(Clone, Copy, Debug)]
pub struct LaOptions {
    pub cap: usize,
    pub exec: Exec,
}

impl Default for LaOptions {
    fn default() -> Self {
        LaOptions {
            cap: DEFAULT_LA_CAP,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LaResult {
    pub host: String,
    pub pattern: Option<String>,
    pub value: usize,
    /// Host indices, ascending.
    pub witness: Vec<Elem>,
    pub witness_names: Vec<String>,
    pub nodes: u64,
    pub time_ms: u128,
}

/// Anchored containment test shared by the Russian-doll levels.
struct Freeness<'a> {
    masks: HostMasks,
    anchored: Vec<CompiledPattern>,
    pattern: &'a Poset,
}

impl Freeness<'_> {
    /// `fam` contains `x` as its last position, so `x` is maximal in `fam` and
    /// any new copy of the pattern sends a maximal pattern element to `x`.
    fn contains_with(&self, fam: u128, x: usize, nodes: &mut u64) -> bool {
        if (fam.count_ones() as usize) < self.pattern.len() {
            return false;
        }
        self.anchored.iter().any(|pat| {
            let mut m = Matcher::new(pat, &self.masks, fam);
            let hit = m.run(Some(x));
            *nodes += m.nodes;
            hit
        })
    }
}

/// Largest `P`-free subfamily of `host`, by Russian-doll branch and bound over
/// a linear extension of the host.
///
/// Level `i` asks whether a free family of size `c[i+1] + 1` starts at
/// position `i`. Candidates that fail are dropped for the whole subtree, since
/// containing `P` is inherited by supersets. The witness is the family found
/// at the smallest top-level branch, so it does not depend on thread count.
pub fn la_exact(host: &Poset, pattern: &Poset) -> Result<LaResult> {
    la_exact_with(host, pattern, LaOptions::default())
}

pub fn la_exact_with(host: &Poset, pattern: &Poset, opts: LaOptions) -> Result<LaResult> {
    let cap = opts.cap.min(embed::MAX_ENGINE_HOST);
    if host.len() > cap {
        return Err(Error::TooLarge {
            what: "La host".into(),
            size: host.len(),
            cap,
        });
    }
    let start = Instant::now();
    let order = host.linear_extension();
    let n = order.len();
    let free = Freeness {
        masks: HostMasks::new(host, &order),
        anchored: pattern
            .maximal()
            .into_iter()
            .map(|m| CompiledPattern::new(pattern, Some(m)))
            .collect(),
        pattern,
    };
    let nodes = AtomicU64::new(0);

    let mut c = vec![0usize; n + 1];
    let mut best_fam = 0u128;
    if pattern.len() >= 2 {
        for i in (0..n).rev() {
            let target = c[i + 1] + 1;
            let found = if target == 1 {
                Some(1u128 << i)
            } else {
                level_search(&free, &c, i, target, opts.exec, &nodes)
            };
            match found {
                Some(fam) => {
                    c[i] = target;
                    best_fam = fam;
                }
                None => c[i] = c[i + 1],
            }
        }
    }

    let mut witness: Vec<Elem> = (0..n)
        .filter(|&pos| best_fam >> pos & 1 == 1)
        .map(|pos| order[pos])
        .collect();
    witness.sort_unstable();
    debug_assert!(embed::is_p_free(&witness, pattern, host)?);
    Ok(LaResult {
        host: host.name().unwrap_or("host").to_string(),
        pattern: pattern.name().map(String::from),
        value: c[0],
        witness_names: witness.iter().map(|&e| host.name_of(e).to_string()).collect(),
        witness,
        nodes: nodes.load(Ordering::Relaxed),
        time_ms: start.elapsed().as_millis(),
    })
}

fn level_search(
    free: &Freeness<'_>,
    c: &[usize],
    i: usize,
    target: usize,
    exec: Exec,
    nodes: &AtomicU64,
) -> Option<u128> {
    let n = c.len() - 1;
    let root = 1u128 << i;
    let mut local = 0u64;
    // elements that keep {i, j} free; only those can appear with i at all
    let valid = (i + 1..n)
        .filter(|&j| !free.contains_with(root | 1u128 << j, j, &mut local))
        .fold(0u128, |m, j| m | 1u128 << j);
    nodes.fetch_add(local, Ordering::Relaxed);
    let seconds: Vec<usize> = (i + 1..n)
        .filter(|&j| valid >> j & 1 == 1 && 1 + c[j] >= target)
        .collect();
    let first_hit = AtomicUsize::new(usize::MAX);

    let hits = par::map(exec, &seconds, |&j| {
        if first_hit.load(Ordering::Relaxed) < j {
            return None;
        }
        let mut count = 0u64;
        let above = if j + 1 >= 128 { 0 } else { !((1u128 << (j + 1)) - 1) };
        let r = dfs(free, c, root | 1u128 << j, 2, valid & above, target, &mut count);
        nodes.fetch_add(count, Ordering::Relaxed);
        if r.is_some() {
            first_hit.fetch_min(j, Ordering::Relaxed);
        }
        r
    });
    hits.into_iter().flatten().next()
}

fn dfs(
    free: &Freeness<'_>,
    c: &[usize],
    fam: u128,
    size: usize,
    mut cand: u128,
    target: usize,
    nodes: &mut u64,
) -> Option<u128> {
    *nodes += 1;
    if size >= target {
        return Some(fam);
    }
    while cand != 0 {
        if size + (cand.count_ones() as usize) < target {
            return None;
        }
        let j = cand.trailing_zeros() as usize;
        if size + c[j] < target {
            return None;
        }
        cand &= cand - 1;
        let next = fam | 1u128 << j;
        if free.contains_with(next, j, nodes) {
            continue;
        }
        if let Some(r) = dfs(free, c, next, size + 1, cand, target, nodes) {
            return Some(r);
        }
    }
    None
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LaSequence {
    pub n: usize,
    pub values: Vec<LaResult>,
    pub monotone: bool,
}

/// `La(C_k(n), P)` for `k = 1..=k_max`; the hosts are nested, so the values
/// must be non-decreasing.
pub fn la_chain_sequence(pattern: &Poset, n: usize, k_max: usize, opts: LaOptions) -> Result<LaSequence> {
    if k_max < 1 || k_max > n {
        return Err(Error::InvalidParams(format!(
            "k_max={k_max} must lie in 1..={n}"
        )));
    }
    let mut values = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let c = build_interval_chain(n, k)?;
        values.push(la_exact_with(c.as_poset(), pattern, opts)?);
    }
    let monotone = values.windows(2).all(|w| w[0].value <= w[1].value);
    Ok(LaSequence {
        n,
        values,
        monotone,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Stabilization {
    /// `(n, La(C_2(n), P))` in the order computed.
    pub values: Vec<(usize, usize)>,
    /// First `n` whose value repeats the previous one.
    pub stabilized_at: Option<usize>,
}

/// Grows the double-chain window until two consecutive values agree.
pub fn c2_stabilization(pattern: &Poset, n_from: usize, n_to: usize, opts: LaOptions) -> Result<Stabilization> {
    let mut values = Vec::new();
    let mut stabilized_at = None;
    for n in n_from.max(2)..=n_to {
        let c = double_chain(n)?;
        let v = la_exact_with(c.as_poset(), pattern, opts)?.value;
        if let Some(&(_, prev)) = values.last() {
            if prev == v {
                values.push((n, v));
                stabilized_at = Some(n);
                break;
            }
        }
        values.push((n, v));
    }
    Ok(Stabilization {
        values,
        stabilized_at,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowMode {
    /// Every window of `m` consecutive levels is `P`-free.
    Every,
    /// Some window of `m` consecutive levels is `P`-free.
    Exists,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WindowEntry {
    pub n: usize,
    pub e: usize,
    /// For `every`: a window `(i, m)` of `e + 1` levels that contains `P`.
    pub blocking_window: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EReport {
    pub mode: WindowMode,
    pub per_n: Vec<WindowEntry>,
    /// The last two computed values agree.
    pub stabilized: bool,
    pub last: Option<usize>,
}

/// `e_n(P)` for `n = 1..=n_max` from window searches in `B_n`.
pub fn e_estimate(pattern: &Poset, n_max: usize, mode: WindowMode, exec: Exec) -> Result<EReport> {
    let mut per_n = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        per_n.push(e_at(pattern, n, mode, exec)?);
    }
    let stabilized = per_n.len() >= 2 && per_n[per_n.len() - 1].e == per_n[per_n.len() - 2].e;
    Ok(EReport {
        mode,
        last: per_n.last().map(|w| w.e),
        per_n,
        stabilized,
    })
}

fn e_at(pattern: &Poset, n: usize, mode: WindowMode, exec: Exec) -> Result<WindowEntry> {
    let mut e = 0;
    for m in 1..=n + 1 {
        let starts: Vec<usize> = (0..=n + 1 - m).collect();
        let free = par::map(exec, &starts, |&i| -> Result<bool> {
            let w = level_window(n, i, m)?;
            Ok(embed::embeds(pattern, &w)?.is_none())
        });
        let free: Vec<bool> = free.into_iter().collect::<Result<_>>()?;
        let ok = match mode {
            WindowMode::Every => free.iter().all(|&f| f),
            WindowMode::Exists => free.iter().any(|&f| f),
        };
        if !ok {
            let blocking = match mode {
                WindowMode::Every => free.iter().position(|&f| !f).map(|i| (i, m)),
                WindowMode::Exists => None,
            };
            return Ok(WindowEntry {
                n,
                e,
                blocking_window: blocking,
            });
        }
        e = m;
    }
    Ok(WindowEntry {
        n,
        e,
        blocking_window: None,
    })
}
