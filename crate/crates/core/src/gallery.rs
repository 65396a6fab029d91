//! Named posets, the double-chain families that avoid them, and the Λ/V
//! extensions.
//!
//! Every entry carries the facts it is expected to satisfy (size, height, α
//! and the shape of its auxiliary graph); [`self_test`] recomputes them.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::auxgraph::{alpha_dp, build_aux_graph, TripleType};
use crate::chain::IntervalChain;
use crate::error::{Error, Result};
use crate::poset::{Elem, GradedPoset, Poset, PosetBuilder};

pub type Params = BTreeMap<String, usize>;

#[derive(Clone, Debug, Serialize)]
pub struct EntryInfo {
    pub name: &'static str,
    pub params: &'static str,
    pub description: &'static str,
    /// The transcription involves a reading choice (see the docs).
    pub interpretive: bool,
}

pub fn list() -> Vec<EntryInfo> {
    let e = |name, params, description, interpretive| EntryInfo {
        name,
        params,
        description,
        interpretive,
    };
    vec![
        e("fig2", "", "16-element graded poset of height 5 with α = 3", false),
        e("remark", "", "u1<u2<u3<u4 with v1..v12 below u4 (not graded)", false),
        e("P1", "n>=3", "x1<y_k<z1 (k>=3), x2<y_k<z2 (all k)", false),
        e("P2", "n>=5", "x1<y_k<z2 (all k), x2<y_k (k!=2,3), y_k<z1 (k!=1,2)", false),
        e("P3", "n>=2", "x3<y1<z3, x_m<y_k<z_m (all m, k>=2)", false),
        e("P4", "n>=3", "x1<y_k (k>=3), x2<y_k, y_k<z1,z2 (k>=2), y_k<z3", true),
        e("P5", "", "x1<y_k, x2<y1,y2, y3,y4<z1, y_k<z2", false),
        e("P6", "", "x1<y_k, x2<y1, y2,y3<z1,z2, y_k<z3", false),
        e("P7", "", "x_k<y1<z3, x1<y2<z_k", false),
        e("chain", "k>=1", "chain c1<...<ck", false),
        e("D", "k>=1", "generalised diamond: bottom, k middles, top", false),
        e("B", "", "butterfly: two minimal below two maximal", false),
        e("V", "", "one minimal below two maximal", true),
        e("Lambda", "", "two minimal below one maximal", false),
        e("point", "", "single element", false),
        e("Q", "", "complete three-level poset 2+3+2", false),
        e("S", "", "complete three-level poset 1+4+2", false),
        e("R", "", "complete four-level poset 1+4+4+1", false),
        e("S'", "", "S with a Λ-extension at level 3 and a V-extension at level 1", false),
        e("S''", "", "S' without the cover b2<m4", false),
    ]
}

fn param(params: &Params, key: &str, min: usize, entry: &str) -> Result<usize> {
    let v = *params
        .get(key)
        .ok_or_else(|| Error::BadParams(format!("{entry} needs `{key}`")))?;
    if v < min {
        return Err(Error::BadParams(format!("{entry} needs {key} >= {min}, got {v}")));
    }
    Ok(v)
}

fn no_params(params: &Params, entry: &str) -> Result<()> {
    match params.keys().next() {
        Some(k) => Err(Error::BadParams(format!("{entry} takes no parameter `{k}`"))),
        None => Ok(()),
    }
}

/// Builds a poset from element names and `lower<upper` pairs.
fn build(name: &str, elements: &[String], rels: &[(String, String)]) -> Poset {
    let mut b = PosetBuilder::new().named(name);
    b.elements(elements.iter().map(String::as_str)).expect("gallery names are valid");
    for (lo, hi) in rels {
        b.relation(lo, hi).expect("gallery relations name declared elements");
    }
    b.build().expect("gallery entries are connected posets")
}

fn names(prefix: &str, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

fn rel(a: impl Into<String>, b: impl Into<String>) -> (String, String) {
    (a.into(), b.into())
}

/// Three-or-more-level poset in which consecutive levels are completely joined.
fn complete_levels(name: &str, sizes: &[usize]) -> Poset {
    let tags = ["a", "b", "c", "d", "e", "f"];
    let levels: Vec<Vec<String>> = sizes
        .iter()
        .enumerate()
        .map(|(t, &s)| {
            if s == 1 {
                vec![tags[t].to_string()]
            } else {
                names(tags[t], 1..=s)
            }
        })
        .collect();
    let mut rels = Vec::new();
    for w in levels.windows(2) {
        for lo in &w[0] {
            for hi in &w[1] {
                rels.push(rel(lo, hi));
            }
        }
    }
    let elements: Vec<String> = levels.concat();
    build(name, &elements, &rels)
}

pub fn gallery(name: &str, params: &Params) -> Result<Poset> {
    let p = match name {
        "fig2" => {
            no_params(params, name)?;
            fig2()
        }
        "remark" => {
            no_params(params, name)?;
            let mut els = names("u", 1..=4);
            els.extend(names("v", 1..=12));
            let mut rels: Vec<_> = (1..4).map(|i| rel(format!("u{i}"), format!("u{}", i + 1))).collect();
            rels.extend((1..=12).map(|j| rel(format!("v{j}"), "u4")));
            build("remark", &els, &rels)
        }
        "P1" => p1(param(params, "n", 3, name)?),
        "P2" => p2(param(params, "n", 5, name)?),
        "P3" => p3(param(params, "n", 2, name)?),
        "P4" => p4(param(params, "n", 3, name)?),
        "P5" => {
            no_params(params, name)?;
            p5()
        }
        "P6" => {
            no_params(params, name)?;
            p6()
        }
        "P7" => {
            no_params(params, name)?;
            p7()
        }
        "chain" => {
            let mut c = Poset::chain(param(params, "k", 1, name)?);
            c.set_name(format!("chain{}", params["k"]));
            c
        }
        "D" => {
            let k = param(params, "k", 1, name)?;
            complete_levels(&format!("D{k}"), &[1, k, 1])
        }
        "B" => {
            no_params(params, name)?;
            complete_levels("B", &[2, 2])
        }
        "V" => {
            no_params(params, name)?;
            complete_levels("V", &[1, 2])
        }
        "Lambda" => {
            no_params(params, name)?;
            complete_levels("Lambda", &[2, 1])
        }
        "point" => {
            no_params(params, name)?;
            build("point", &["a".to_string()], &[])
        }
        "Q" => {
            no_params(params, name)?;
            complete_levels("Q", &[2, 3, 2])
        }
        "S" => {
            no_params(params, name)?;
            s_poset()
        }
        "R" => {
            no_params(params, name)?;
            complete_levels("R", &[1, 4, 4, 1])
        }
        "S'" => {
            no_params(params, name)?;
            s_prime(true)
        }
        "S''" => {
            no_params(params, name)?;
            s_prime(false)
        }
        other => return Err(Error::UnknownEntry(other.to_string())),
    };
    Ok(p)
}

/// `gallery` followed by [`self_test`].
pub fn gallery_checked(name: &str, params: &Params) -> Result<Poset> {
    let p = gallery(name, params)?;
    self_test(name, params, &p)?;
    Ok(p)
}

pub fn params(pairs: &[(&str, usize)]) -> Params {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn fig2() -> Poset {
    let mut els = names("z", 1..=2);
    els.extend(names("y", 1..=5));
    els.extend(names("x", 1..=2));
    els.extend(names("s", 1..=4));
    els.extend(names("r", 1..=3));
    let covers = [
        ("z1", "y1"),
        ("z1", "y2"),
        ("z1", "y3"),
        ("z2", "y3"),
        ("z2", "y4"),
        ("z2", "y5"),
        ("y1", "x1"),
        ("y2", "x1"),
        ("y3", "x1"),
        ("y4", "x2"),
        ("y5", "x2"),
        ("x1", "s1"),
        ("x1", "s2"),
        ("x2", "s3"),
        ("x2", "s4"),
        ("s1", "r1"),
        ("s2", "r1"),
        ("s2", "r2"),
        ("s3", "r2"),
        ("s3", "r3"),
        ("s4", "r3"),
    ];
    let rels: Vec<_> = covers.iter().map(|&(a, b)| rel(a, b)).collect();
    build("fig2", &els, &rels)
}

/// The thirteen triples of `fig2` with their labels and types.
pub const FIG2_TRIPLES: [(&str, [&str; 3], TripleType); 13] = [
    ("t1", ["r1", "s3", "s4"], TripleType::Lambda),
    ("t2", ["r2", "s1", "s4"], TripleType::Lambda),
    ("t3", ["r3", "s1", "s2"], TripleType::Lambda),
    ("t4", ["r2", "r3", "s1"], TripleType::V),
    ("t5", ["r1", "r2", "s4"], TripleType::V),
    ("u1", ["s1", "s2", "x2"], TripleType::V),
    ("u2", ["s3", "s4", "x1"], TripleType::V),
    ("v1", ["x1", "y4", "y5"], TripleType::Lambda),
    ("v2", ["x2", "y1", "y2"], TripleType::Lambda),
    ("v3", ["x2", "y1", "y3"], TripleType::Lambda),
    ("v4", ["x2", "y2", "y3"], TripleType::Lambda),
    ("w1", ["y1", "y2", "z2"], TripleType::V),
    ("w2", ["y4", "y5", "z1"], TripleType::V),
];

fn xyz(nx: usize, n: usize, nz: usize) -> Vec<String> {
    let mut els = names("x", 1..=nx);
    els.extend(names("y", 1..=n));
    els.extend(names("z", 1..=nz));
    els
}

fn p1(n: usize) -> Poset {
    let mut rels = Vec::new();
    for k in 1..=n {
        let y = format!("y{k}");
        if k >= 3 {
            rels.push(rel("x1", &y));
            rels.push(rel(&y, "z1"));
        }
        rels.push(rel("x2", &y));
        rels.push(rel(&y, "z2"));
    }
    build(&format!("P1_n{n}"), &xyz(2, n, 2), &rels)
}

fn p2(n: usize) -> Poset {
    let mut rels = Vec::new();
    for k in 1..=n {
        let y = format!("y{k}");
        rels.push(rel("x1", &y));
        rels.push(rel(&y, "z2"));
        if k != 2 && k != 3 {
            rels.push(rel("x2", &y));
        }
        if k != 1 && k != 2 {
            rels.push(rel(&y, "z1"));
        }
    }
    build(&format!("P2_n{n}"), &xyz(2, n, 2), &rels)
}

fn p3(n: usize) -> Poset {
    let mut rels = vec![rel("x3", "y1"), rel("y1", "z3")];
    for m in 1..=3 {
        for k in 2..=n {
            rels.push(rel(format!("x{m}"), format!("y{k}")));
            rels.push(rel(format!("y{k}"), format!("z{m}")));
        }
    }
    build(&format!("P3_n{n}"), &xyz(3, n, 3), &rels)
}

/// Follows the Hasse diagram: the text omits the relations of `z3` and
/// writes `x2 <= y3 for all k`.
fn p4(n: usize) -> Poset {
    let mut rels = Vec::new();
    for k in 1..=n {
        let y = format!("y{k}");
        if k >= 3 {
            rels.push(rel("x1", &y));
        }
        rels.push(rel("x2", &y));
        if k >= 2 {
            rels.push(rel(&y, "z1"));
            rels.push(rel(&y, "z2"));
        }
        rels.push(rel(&y, "z3"));
    }
    build(&format!("P4_n{n}"), &xyz(2, n, 3), &rels)
}

fn p5() -> Poset {
    let mut rels = Vec::new();
    for k in 1..=4 {
        let y = format!("y{k}");
        rels.push(rel("x1", &y));
        if k <= 2 {
            rels.push(rel("x2", &y));
        } else {
            rels.push(rel(&y, "z1"));
        }
        rels.push(rel(&y, "z2"));
    }
    build("P5", &xyz(2, 4, 2), &rels)
}

fn p6() -> Poset {
    let mut rels = vec![rel("x2", "y1")];
    for k in 1..=3 {
        let y = format!("y{k}");
        rels.push(rel("x1", &y));
        if k >= 2 {
            rels.push(rel(&y, "z1"));
            rels.push(rel(&y, "z2"));
        }
        rels.push(rel(&y, "z3"));
    }
    build("P6", &xyz(2, 3, 3), &rels)
}

fn p7() -> Poset {
    let mut rels = vec![rel("y1", "z3"), rel("x1", "y2")];
    for k in 1..=3 {
        rels.push(rel(format!("x{k}"), "y1"));
        rels.push(rel("y2", format!("z{k}")));
    }
    build("P7", &xyz(3, 2, 3), &rels)
}

fn s_poset() -> Poset {
    let mut els = vec!["b".to_string()];
    els.extend(names("m", 1..=4));
    els.extend(names("t", 1..=2));
    let mut rels = Vec::new();
    for m in 1..=4 {
        rels.push(rel("b", format!("m{m}")));
        for t in 1..=2 {
            rels.push(rel(format!("m{m}"), format!("t{t}")));
        }
    }
    build("S", &els, &rels)
}

fn s_prime(with_b2_m4: bool) -> Poset {
    let mut els = names("b", 1..=2);
    els.extend(names("m", 1..=4));
    els.extend(names("t", 1..=3));
    let mut rels = Vec::new();
    for m in 1..=4 {
        rels.push(rel("b1", format!("m{m}")));
        rels.push(rel(format!("m{m}"), "t1"));
        rels.push(rel(format!("m{m}"), "t3"));
    }
    rels.push(rel("b2", "m3"));
    if with_b2_m4 {
        rels.push(rel("b2", "m4"));
    }
    rels.push(rel("m1", "t2"));
    rels.push(rel("m4", "t2"));
    build(if with_b2_m4 { "S'" } else { "S''" }, &els, &rels)
}

/// Shape of an auxiliary graph: vertex count and sorted degree sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxShape {
    pub vertices: usize,
    pub degrees: Vec<usize>,
}

impl AuxShape {
    pub fn k2() -> Self {
        AuxShape {
            vertices: 2,
            degrees: vec![1, 1],
        }
    }

    pub fn two_k1() -> Self {
        AuxShape {
            vertices: 2,
            degrees: vec![0, 0],
        }
    }

    /// `K_4` minus two edges sharing a vertex; the degree sequence fixes it.
    pub fn k4_minus_incident_pair() -> Self {
        AuxShape {
            vertices: 4,
            degrees: vec![1, 2, 2, 3],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facts {
    pub size: usize,
    pub height: usize,
    pub graded: bool,
    pub alpha: Option<usize>,
    pub aux: Option<AuxShape>,
}

pub fn facts(p: &Poset) -> Facts {
    match GradedPoset::new(p.clone()) {
        Ok(gp) => {
            let g = build_aux_graph(&gp);
            let mut degrees: Vec<usize> = (0..g.len()).map(|v| g.degree(v)).collect();
            degrees.sort_unstable();
            Facts {
                size: p.len(),
                height: p.height(),
                graded: true,
                alpha: Some(alpha_dp(&g).size),
                aux: Some(AuxShape {
                    vertices: g.len(),
                    degrees,
                }),
            }
        }
        Err(_) => Facts {
            size: p.len(),
            height: p.height(),
            graded: false,
            alpha: None,
            aux: None,
        },
    }
}

/// Expected `(size, height, α, aux shape)`; `None` entries are not checked.
pub fn expected(name: &str, params: &Params) -> Option<(usize, usize, Option<usize>, Option<AuxShape>)> {
    let n = params.get("n").copied().unwrap_or(0);
    let k = params.get("k").copied().unwrap_or(0);
    let k2 = Some(AuxShape::k2());
    Some(match name {
        "fig2" => (16, 5, Some(3), None),
        "remark" => (16, 4, None, None),
        "P1" | "P2" => (n + 4, 3, Some(1), k2),
        "P3" => (n + 6, 3, Some(1), k2),
        "P4" => (n + 5, 3, Some(1), k2),
        "P5" | "P6" | "P7" => (8, 3, Some(1), k2),
        "chain" => (k, k, Some(0), None),
        "D" => (k + 2, 3, Some(0), None),
        "B" => (4, 2, Some(0), None),
        "V" | "Lambda" => (3, 2, Some(0), None),
        "point" => (1, 1, Some(0), None),
        "Q" => (7, 3, Some(0), None),
        "S" => (7, 3, Some(0), None),
        "R" => (10, 4, Some(0), None),
        "S'" => (9, 3, Some(2), Some(AuxShape::two_k1())),
        "S''" => (9, 3, Some(2), Some(AuxShape::k4_minus_incident_pair())),
        _ => return None,
    })
}

pub fn self_test(name: &str, params: &Params, p: &Poset) -> Result<Facts> {
    let got = facts(p);
    let Some((size, height, alpha, aux)) = expected(name, params) else {
        return Ok(got);
    };
    let fail = |reason: String| Error::SelfTest {
        entry: name.to_string(),
        reason,
    };
    if got.size != size || got.height != height {
        return Err(fail(format!(
            "size/height {}/{} instead of {size}/{height}",
            got.size, got.height
        )));
    }
    if alpha.is_some() && got.alpha != alpha {
        return Err(fail(format!("α = {:?} instead of {alpha:?}", got.alpha)));
    }
    if aux.is_some() && got.aux != aux {
        return Err(fail(format!("aux graph {:?} instead of {aux:?}", got.aux)));
    }
    if name == "remark" && got.graded {
        return Err(fail("expected a non-graded poset".into()));
    }
    Ok(got)
}

/// One of the five double-chain families that avoid the `P_i` posets.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessFamily {
    pub index: usize,
    pub anchor: usize,
    /// Element names in canonical order.
    pub elements: Vec<String>,
    /// Gallery entries this family avoids.
    pub avoids: Vec<String>,
    /// Smallest `n` with the family inside `C_2(n)`.
    pub min_n: usize,
}

impl WitnessFamily {
    pub fn resolve(&self, chain: &IntervalChain) -> Result<Vec<Elem>> {
        if chain.k() != 2 || chain.n() < self.min_n {
            return Err(Error::BadParams(format!(
                "F{} needs C_2(n) with n >= {}",
                self.index, self.min_n
            )));
        }
        chain.family_from_names(&self.elements)
    }
}

/// `F_index` with offset `anchor`; `n` is the parameter of the matching
/// `P_i` for families 1 to 3 and is ignored for 4 and 5.
pub fn witness_family(index: usize, anchor: usize, n: usize) -> Result<WitnessFamily> {
    let i = anchor;
    let r = |a: usize, b: usize| (a..=b).map(|t| format!("r{t}")).collect::<Vec<_>>();
    let l = |t: usize| format!("l{t}");
    let (mut elements, avoids, top_r): (Vec<String>, Vec<&str>, usize) = match index {
        1 => {
            let mut e = r(i + 1, i + n + 2);
            e.extend([l(i + 2), l(i + n + 1)]);
            (e, vec!["P1", "P2"], i + n + 2)
        }
        2 => {
            let mut e = r(i + 1, i + n + 4);
            e.extend([l(i + 2), l(i + n + 3)]);
            (e, vec!["P3"], i + n + 4)
        }
        3 => {
            let mut e = r(i + 1, i + n + 4);
            e.push(l(i + 2));
            (e, vec!["P4"], i + n + 4)
        }
        4 | 5 => {
            if i < 3 {
                return Err(Error::BadParams(format!("F{index} needs anchor >= 3")));
            }
            let mut e = r(i - 2, i + 2);
            if index == 4 {
                e.extend([l(i - 1), l(i), l(i + 1)]);
                (e, vec!["P5", "P6"], i + 2)
            } else {
                e.extend([l(i - 2), l(i), l(i + 2)]);
                (e, vec!["P7"], i + 2)
            }
        }
        _ => return Err(Error::BadParams(format!("no witness family F{index}"))),
    };
    if index <= 3 && n < 2 {
        return Err(Error::BadParams(format!("F{index} needs n >= 2")));
    }
    // canonical order: l_t sits before r_t
    let key = |s: &String| {
        let t: usize = s[1..].parse().unwrap();
        if s.starts_with('l') {
            2 * t
        } else {
            2 * t + 1
        }
    };
    elements.sort_by_key(key);
    Ok(WitnessFamily {
        index,
        anchor,
        elements,
        avoids: avoids.into_iter().map(String::from).collect(),
        min_n: top_r + 1,
    })
}

/// The family index that avoids gallery entry `name`.
pub fn family_for(name: &str) -> Option<usize> {
    match name {
        "P1" | "P2" => Some(1),
        "P3" => Some(2),
        "P4" => Some(3),
        "P5" | "P6" => Some(4),
        "P7" => Some(5),
        _ => None,
    }
}

fn fresh_name(p: &Poset, wanted: Option<&str>) -> Result<String> {
    if let Some(w) = wanted {
        if p.index_of(w).is_some() {
            return Err(Error::DuplicateElement(w.to_string()));
        }
        return Ok(w.to_string());
    }
    Ok((1..)
        .map(|i| format!("n{i}"))
        .find(|s| p.index_of(s).is_none())
        .unwrap())
}

fn extend(
    gp: &GradedPoset,
    name: &str,
    below: impl Iterator<Item = Elem>,
    above: impl Iterator<Item = Elem>,
) -> Result<GradedPoset> {
    let p = gp.poset();
    let mut b = p.to_builder();
    let x = b.element(name)?;
    for e in below {
        b.relation_idx(e, x);
    }
    for e in above {
        b.relation_idx(x, e);
    }
    let q = b.build()?;
    GradedPoset::new(q).map_err(|_| Error::NotGradedAfter)
}

fn check_excluded(gp: &GradedPoset, level: usize, excluded: [Elem; 2]) -> Result<()> {
    let size = gp.levels().size(level);
    if size < 3 {
        return Err(Error::LevelTooSmall { level, size });
    }
    if excluded[0] == excluded[1] || excluded.iter().any(|&e| e >= gp.len() || gp.rank(e) != level) {
        return Err(Error::InvalidParams(format!(
            "the excluded pair must be two distinct elements of level {level}"
        )));
    }
    Ok(())
}

/// Adds `x` at level `i`, below all of `L_{i+1}` and above all of `L_{i-1}`
/// except the two `excluded` elements. `i = h` adds a new maximal element.
pub fn lambda_extension(gp: &GradedPoset, i: usize, excluded: [Elem; 2], name: Option<&str>) -> Result<GradedPoset> {
    let h = gp.height();
    if i < 2 || i > h {
        return Err(Error::InvalidParams(format!("Λ-extension level {i} outside 2..={h}")));
    }
    check_excluded(gp, i - 1, excluded)?;
    let x = fresh_name(gp.poset(), name)?;
    let lv = gp.levels();
    let below = lv.level(i - 1).iter().copied().filter(|e| !excluded.contains(e));
    let above: Vec<Elem> = if i < h { lv.level(i + 1).to_vec() } else { Vec::new() };
    extend(gp, &x, below, above.into_iter())
}

/// Adds `x` at level `i`, above all of `L_{i-1}` and below all of `L_{i+1}`
/// except the two `excluded` elements. `i = 1` adds a new minimal element.
pub fn vee_extension(gp: &GradedPoset, i: usize, excluded: [Elem; 2], name: Option<&str>) -> Result<GradedPoset> {
    let h = gp.height();
    if i < 1 || i >= h {
        return Err(Error::InvalidParams(format!("V-extension level {i} outside 1..{h}")));
    }
    check_excluded(gp, i + 1, excluded)?;
    let x = fresh_name(gp.poset(), name)?;
    let lv = gp.levels();
    let below: Vec<Elem> = if i > 1 { lv.level(i - 1).to_vec() } else { Vec::new() };
    let above = lv.level(i + 1).iter().copied().filter(|e| !excluded.contains(e));
    extend(gp, &x, below.into_iter(), above)
}

/// Every excluded pair from `level`, in declaration order.
pub fn excluded_pairs(gp: &GradedPoset, level: usize) -> Vec<[Elem; 2]> {
    if level == 0 || level > gp.height() {
        return Vec::new();
    }
    let l = gp.levels().level(level);
    let mut out = Vec::new();
    for (a, &x) in l.iter().enumerate() {
        for &y in &l[a + 1..] {
            out.push([x, y]);
        }
    }
    out
}

/// Seeded connected graded poset with at most `max_size` elements and
/// height at most `max_height`.
pub fn random_graded_poset(seed: u64, max_size: usize, max_height: usize) -> GradedPoset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_size = max_size.max(1);
    let h = rng.gen_range(1..=max_height.max(1).min(max_size));
    if h == 1 {
        let p = build("rand", &["p1_1".to_string()], &[]);
        return GradedPoset::new(p).unwrap();
    }
    let total = rng.gen_range(h..=max_size.max(h));
    let mut sizes = vec![1usize; h];
    for _ in h..total {
        let t = rng.gen_range(0..h);
        sizes[t] += 1;
    }
    let levels: Vec<Vec<String>> = sizes
        .iter()
        .enumerate()
        .map(|(t, &s)| (1..=s).map(|k| format!("p{}_{k}", t + 1)).collect())
        .collect();
    let density: f64 = rng.gen_range(0.2..0.8);
    let mut rels: Vec<(usize, usize, usize, usize)> = Vec::new();
    for t in 0..h - 1 {
        let (lo, hi) = (sizes[t], sizes[t + 1]);
        let mut covered = vec![false; lo];
        for b in 0..hi {
            let mut any = false;
            for (a, c) in covered.iter_mut().enumerate() {
                if rng.gen_bool(density) {
                    rels.push((t, a, t + 1, b));
                    *c = true;
                    any = true;
                }
            }
            if !any {
                let a = rng.gen_range(0..lo);
                rels.push((t, a, t + 1, b));
                covered[a] = true;
            }
        }
        for (a, c) in covered.iter().enumerate() {
            if !c {
                rels.push((t, a, t + 1, rng.gen_range(0..hi)));
            }
        }
    }
    // join components through the two bottom levels; every component spans all levels
    let offset: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let id = |t: usize, k: usize| offset[t] + k;
    let n: usize = sizes.iter().sum();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for &(t, a, u, b) in &rels {
        let (ra, rb) = (find(&mut parent, id(t, a)), find(&mut parent, id(u, b)));
        parent[ra] = rb;
    }
    let mut bottoms: Vec<usize> = (0..sizes[0]).collect();
    bottoms.shuffle(&mut rng);
    for a in bottoms {
        for b in 0..sizes[1] {
            let (ra, rb) = (find(&mut parent, id(0, a)), find(&mut parent, id(1, b)));
            if ra != rb {
                rels.push((0, a, 1, b));
                parent[ra] = rb;
            }
        }
    }
    let elements: Vec<String> = levels.concat();
    let pairs: Vec<(String, String)> = rels
        .into_iter()
        .map(|(t, a, u, b)| (levels[t][a].clone(), levels[u][b].clone()))
        .collect();
    let p = build(&format!("rand{seed}"), &elements, &pairs);
    GradedPoset::new(p).expect("level-by-level covers give a graded poset")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::is_isomorphic;

    #[test]
    fn every_entry_passes_its_self_test() {
        for info in list() {
            let ps = match info.name {
                "P1" | "P4" => params(&[("n", 3)]),
                "P2" => params(&[("n", 5)]),
                "P3" => params(&[("n", 2)]),
                "chain" => params(&[("k", 4)]),
                "D" => params(&[("k", 3)]),
                _ => Params::new(),
            };
            gallery_checked(info.name, &ps).unwrap_or_else(|e| panic!("{}: {e}", info.name));
        }
    }

    #[test]
    fn larger_parameters() {
        for n in 3..7 {
            gallery_checked("P1", &params(&[("n", n)])).unwrap();
            gallery_checked("P4", &params(&[("n", n)])).unwrap();
        }
        for n in 5..8 {
            gallery_checked("P2", &params(&[("n", n)])).unwrap();
        }
        for n in 2..6 {
            gallery_checked("P3", &params(&[("n", n)])).unwrap();
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(gallery("P1", &params(&[("n", 2)])), Err(Error::BadParams(_))));
        assert!(matches!(gallery("P2", &Params::new()), Err(Error::BadParams(_))));
        assert!(matches!(gallery("P5", &params(&[("n", 2)])), Err(Error::BadParams(_))));
        assert!(matches!(gallery("nope", &Params::new()), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn s_prime_from_extensions() {
        let s = GradedPoset::new(gallery("S", &Params::new()).unwrap()).unwrap();
        let p = s.poset();
        let m = |n: &str| p.index_of(n).unwrap();
        let lam = lambda_extension(&s, 3, [m("m2"), m("m3")], Some("t3")).unwrap();
        assert_eq!(lam.len(), 8);
        let q = lam.poset();
        let vee = vee_extension(&lam, 1, [q.index_of("m1").unwrap(), q.index_of("m2").unwrap()], None).unwrap();
        assert_eq!(vee.levels().sizes(), vec![2, 4, 3]);
        let sp = gallery("S'", &Params::new()).unwrap();
        assert!(is_isomorphic(vee.poset(), &sp).unwrap());
    }

    #[test]
    fn extension_preconditions() {
        let b = GradedPoset::new(gallery("B", &Params::new()).unwrap()).unwrap();
        assert!(matches!(
            lambda_extension(&b, 2, [0, 1], None),
            Err(Error::LevelTooSmall { level: 1, size: 2 })
        ));
        let s = GradedPoset::new(gallery("S", &Params::new()).unwrap()).unwrap();
        let lam = lambda_extension(&s, 2, [1, 2], None);
        assert!(lam.is_err());
    }

    #[test]
    fn witness_family_shapes() {
        let f1 = witness_family(1, 0, 3).unwrap();
        assert_eq!(f1.elements, ["r1", "l2", "r2", "r3", "l4", "r4", "r5"]);
        assert_eq!(f1.min_n, 6);
        assert_eq!(witness_family(4, 3, 0).unwrap().elements.len(), 8);
        assert_eq!(witness_family(5, 3, 0).unwrap().elements.len(), 8);
        assert!(witness_family(4, 2, 0).is_err());
        assert!(witness_family(6, 3, 0).is_err());
    }

    #[test]
    fn random_posets_are_graded_and_reproducible() {
        for seed in 0..200 {
            let a = random_graded_poset(seed, 12, 5);
            let b = random_graded_poset(seed, 12, 5);
            assert_eq!(a.poset(), b.poset());
            assert!(a.poset().is_connected());
            assert!(a.len() <= 12);
        }
    }
}
