//! Closed-form bounds on `La(C_k, P)` and on the coefficient of
//! `binom(n, n/2)` in `La(n, P)`, all in exact arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::auxgraph::{alpha_dp, build_aux_graph};
use crate::error::{Error, Result};
use crate::la::{e_estimate, EReport, WindowMode};
use crate::par::Exec;
use crate::poset::{GradedPoset, Poset};

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

/// `(|P| + h - 2, (|P| + h - 2) / 2)`.
pub fn burcsi_nagy(size: usize, h: usize) -> (i64, BigRational) {
    let c2 = size as i64 + h as i64 - 2;
    (c2, ratio(int(c2), int(2)))
}

/// `(|P| + h - α - 2, (|P| + h - α - 2) / 2)`.
pub fn theorem_main(size: usize, h: usize, alpha: usize) -> (i64, BigRational) {
    let c2 = size as i64 + h as i64 - alpha as i64 - 2;
    (c2, ratio(int(c2), int(2)))
}

/// `|P| + (h - 1)(3k - 5) 2^(k-2) - 1`.
pub fn grosz_ck(size: usize, h: usize, k: usize) -> Result<BigInt> {
    if k < 2 {
        return Err(Error::InvalidParams(format!("the C_k bound needs k >= 2, got {k}")));
    }
    Ok(int(size as i64) + int(h as i64 - 1) * int(3 * k as i64 - 5) * pow2(k - 2) - 1)
}

/// `(|P| + (k² + 3k - 2)(h - 1)/2 - 1) / (k + 1)`.
pub fn chenli_coeff(size: usize, h: usize, k: usize) -> Result<BigRational> {
    if k < 1 {
        return Err(Error::InvalidParams("the coefficient needs k >= 1".into()));
    }
    let k = k as i64;
    let num = int(2 * (size as i64 - 1)) + int(k * k + 3 * k - 2) * int(h as i64 - 1);
    Ok(ratio(num, int(2 * (k + 1))))
}

/// `(|P| + (3k - 5)(h 2^(k-2) - 1) - 1) / 2^(k-1)`.
pub fn grosz_coeff(size: usize, h: usize, k: usize) -> Result<BigRational> {
    if k < 2 {
        return Err(Error::InvalidParams(format!("the coefficient needs k >= 2, got {k}")));
    }
    let num = int(size as i64) + int(3 * k as i64 - 5) * (int(h as i64) * pow2(k - 2) - 1) - 1;
    Ok(ratio(num, pow2(k - 1)))
}

pub fn binom_big(n: usize, r: usize) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for j in 0..r {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// `coeff · binom(n, ⌊n/2⌋)`.
pub fn la_upper(coeff: &BigRational, n: usize) -> BigRational {
    coeff * BigRational::from_integer(binom_big(n, n / 2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coefficient {
    pub name: String,
    pub k: Option<usize>,
    /// Exact value written `p/q` (or `p`).
    pub value: String,
    #[serde(skip)]
    pub exact: Option<BigRational>,
}

impl Coefficient {
    fn new(name: &str, k: Option<usize>, exact: BigRational) -> Self {
        Coefficient {
            name: name.to_string(),
            k,
            value: exact.to_string(),
            exact: Some(exact),
        }
    }
}

/// Smallest coefficient over Chen–Li (`k` in range) and Grosz (`k >= 2` in range).
pub fn best_coefficient(size: usize, h: usize, ks: std::ops::RangeInclusive<usize>) -> Result<Coefficient> {
    let mut best: Option<Coefficient> = None;
    for k in ks {
        let mut cands = vec![Coefficient::new("chen_li", Some(k), chenli_coeff(size, h, k)?)];
        if k >= 2 {
            cands.push(Coefficient::new("grosz", Some(k), grosz_coeff(size, h, k)?));
        }
        for c in cands {
            if best.as_ref().map_or(true, |b| c.exact < b.exact) {
                best = Some(c);
            }
        }
    }
    best.ok_or_else(|| Error::InvalidParams("empty k range".into()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub k: Option<usize>,
    pub c2_bound: Option<String>,
    pub ck_bound: Option<String>,
    pub coefficient: Option<String>,
    pub la_n_bound: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub size: usize,
    pub height: usize,
    pub alpha: Option<usize>,
    pub entries: Vec<BoundEntry>,
    pub best: Coefficient,
}

/// Every bound recomputed from `(|P|, h, α)`; `n` adds `La(n, P)` upper bounds.
pub fn report(size: usize, h: usize, alpha: Option<usize>, k_max: usize, n: Option<usize>) -> Result<BoundReport> {
    let k_max = k_max.max(1);
    let times = |c: &BigRational| n.map(|n| la_upper(c, n).to_string());
    let mut entries = Vec::new();
    let (bn, bn_c) = burcsi_nagy(size, h);
    entries.push(BoundEntry {
        name: "burcsi_nagy".into(),
        k: None,
        c2_bound: Some(bn.to_string()),
        ck_bound: None,
        coefficient: Some(bn_c.to_string()),
        la_n_bound: times(&bn_c),
    });
    if let Some(a) = alpha {
        let (t, t_c) = theorem_main(size, h, a);
        entries.push(BoundEntry {
            name: "theorem4".into(),
            k: None,
            c2_bound: Some(t.to_string()),
            ck_bound: None,
            coefficient: Some(t_c.to_string()),
            la_n_bound: times(&t_c),
        });
    }
    for k in 1..=k_max {
        let c = chenli_coeff(size, h, k)?;
        entries.push(BoundEntry {
            name: "chen_li".into(),
            k: Some(k),
            c2_bound: None,
            ck_bound: None,
            coefficient: Some(c.to_string()),
            la_n_bound: times(&c),
        });
    }
    for k in 2..=k_max.max(2) {
        let c = grosz_coeff(size, h, k)?;
        entries.push(BoundEntry {
            name: "grosz".into(),
            k: Some(k),
            c2_bound: None,
            ck_bound: Some(grosz_ck(size, h, k)?.to_string()),
            coefficient: Some(c.to_string()),
            la_n_bound: times(&c),
        });
    }
    let mut best = best_coefficient(size, h, 1..=k_max.max(2))?;
    if let Some(a) = alpha {
        let (_, t_c) = theorem_main(size, h, a);
        if best.exact.as_ref().map_or(true, |b| &t_c < b) {
            best = Coefficient::new("theorem4", None, t_c);
        }
    }
    Ok(BoundReport {
        size,
        height: h,
        alpha,
        entries,
        best,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "UPPERCASE")]
pub enum Equality {
    /// The stabilised `e_n` equals the target at the tested `n`.
    Holds { n: usize },
    /// The stabilised `e_n` differs from the target. `window` is a block of
    /// `e_n + 1` consecutive levels containing the pattern.
    Fails { n: usize, e: usize, window: Option<(usize, usize)> },
    /// The last two values of `e_n` disagree.
    Unstable,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EqualityReport {
    pub size: usize,
    pub height: usize,
    pub alpha: usize,
    pub target: String,
    pub windows: EReport,
    pub result: Equality,
}

/// Compares the window estimate of `e(P)` with `(|P| + h - α - 2) / 2`.
/// Only per-`n` evidence is reported.
pub fn equality_check(p: &Poset, n_max: usize, exec: Exec) -> Result<EqualityReport> {
    let gp = GradedPoset::new(p.clone())?;
    let alpha = alpha_dp(&build_aux_graph(&gp)).size;
    let (_, target) = theorem_main(gp.len(), gp.height(), alpha);
    let windows = e_estimate(p, n_max, WindowMode::Every, exec)?;
    let result = if !windows.stabilized {
        Equality::Unstable
    } else {
        let last = windows.per_n.last().expect("stabilized implies two entries");
        if BigRational::from_integer(BigInt::from(last.e)) == target {
            Equality::Holds { n: last.n }
        } else {
            Equality::Fails {
                n: last.n,
                e: last.e,
                window: last.blocking_window,
            }
        }
    };
    Ok(EqualityReport {
        size: gp.len(),
        height: gp.height(),
        alpha,
        target: target.to_string(),
        windows,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        s.parse().unwrap()
    }

    #[test]
    fn substitutions() {
        assert_eq!(burcsi_nagy(4, 3), (5, q("5/2")));
        assert_eq!(burcsi_nagy(16, 5), (19, q("19/2")));
        assert_eq!(burcsi_nagy(2, 2), (2, q("1")));
        assert_eq!(theorem_main(16, 5, 3).0, 16);
        assert_eq!(theorem_main(7, 3, 1).0, 7);
        assert_eq!(grosz_ck(16, 5, 3).unwrap(), int(47));
        assert_eq!(grosz_ck(4, 3, 4).unwrap(), int(59));
        assert_eq!(chenli_coeff(4, 3, 2).unwrap(), q("11/3"));
        assert_eq!(chenli_coeff(16, 5, 3).unwrap(), q("47/4"));
        assert_eq!(grosz_coeff(4, 3, 3).unwrap(), q("23/4"));
        assert!(grosz_ck(4, 3, 1).is_err());
        assert!(grosz_coeff(4, 3, 1).is_err());
        assert!(chenli_coeff(4, 3, 0).is_err());
    }

    #[test]
    fn coefficients_coincide_at_small_k() {
        for size in 1..30 {
            for h in 1..8 {
                let bn = burcsi_nagy(size, h);
                assert_eq!(chenli_coeff(size, h, 1).unwrap(), bn.1);
                assert_eq!(grosz_coeff(size, h, 2).unwrap(), bn.1);
                assert_eq!(grosz_ck(size, h, 2).unwrap(), int(bn.0));
                assert_eq!(theorem_main(size, h, 0), bn);
            }
        }
    }

    #[test]
    fn best_and_big_binomials() {
        let b = best_coefficient(4, 3, 1..=4).unwrap();
        assert_eq!(b.exact.unwrap(), q("5/2"));
        assert_eq!(binom_big(4, 2), int(6));
        assert_eq!(la_upper(&q("5/2"), 4), q("15"));
        assert_eq!(binom_big(100, 50).to_string(), "100891344545564193334812497256");
    }
}
