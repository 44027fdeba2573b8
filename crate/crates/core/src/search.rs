//! Exhaustive value sets of integer group determinants over boxes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boxes::{AssignmentBox, RunOptions};
use crate::det::{group_determinant, Assignment, DetKernel};
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::parity::divisible_by_power_of_two;

#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    pub run: RunOptions,
    /// Keep only values with `|v| <= cap`.
    pub value_cap: Option<BigInt>,
    /// Evaluate one assignment per translation orbit. The report is identical
    /// to the unpruned one.
    pub prune_translations: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCounts {
    /// Points in the box.
    pub assignments: u64,
    /// Determinants actually computed.
    pub evaluated: u64,
    /// Distinct values kept.
    pub distinct: u64,
}

/// Achieved values over `[-B, B]^|G|`, each with its lexicographically first
/// witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ReportWire", try_from = "ReportWire")]
pub struct SearchReport {
    group: AbelianGroup,
    bound: i64,
    counts: SearchCounts,
    achieved: BTreeMap<BigInt, Vec<i64>>,
}

impl SearchReport {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn counts(&self) -> SearchCounts {
        self.counts
    }

    pub fn achieved(&self) -> &BTreeMap<BigInt, Vec<i64>> {
        &self.achieved
    }

    pub fn contains(&self, v: &BigInt) -> bool {
        self.achieved.contains_key(v)
    }

    pub fn witness(&self, v: &BigInt) -> Option<&[i64]> {
        self.achieved.get(v).map(Vec::as_slice)
    }

    /// Smallest 2-adic valuation among nonzero even values.
    pub fn even_valuation_min(&self) -> Option<u64> {
        self.achieved
            .keys()
            .filter_map(BigInt::trailing_zeros)
            .filter(|&v| v > 0)
            .min()
    }

    /// Re-evaluates every witness; returns the first value that does not reproduce.
    pub fn first_unsound(&self) -> Result<Option<BigInt>> {
        for (v, w) in &self.achieved {
            let x = Assignment::from_i64(&self.group, w)?;
            if &group_determinant(&self.group, &x)? != v {
                return Ok(Some(v.clone()));
            }
        }
        Ok(None)
    }
}

#[derive(Serialize, Deserialize)]
struct ValueWire {
    v: String,
    witness: Vec<i64>,
    val2: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct ReportWire {
    group: String,
    #[serde(rename = "box")]
    bound: i64,
    counts: SearchCounts,
    #[serde(default)]
    even_valuation_min: Option<u64>,
    values: Vec<ValueWire>,
}

impl From<SearchReport> for ReportWire {
    fn from(r: SearchReport) -> Self {
        let even_valuation_min = r.even_valuation_min();
        ReportWire {
            group: r.group.to_string(),
            bound: r.bound,
            counts: r.counts,
            even_valuation_min,
            values: r
                .achieved
                .into_iter()
                .map(|(v, witness)| ValueWire {
                    val2: v.trailing_zeros(),
                    v: v.to_string(),
                    witness,
                })
                .collect(),
        }
    }
}

impl TryFrom<ReportWire> for SearchReport {
    type Error = Error;

    fn try_from(w: ReportWire) -> Result<Self> {
        let group: AbelianGroup = w.group.parse()?;
        let mut achieved = BTreeMap::new();
        for item in w.values {
            let v: BigInt = item.v.parse().map_err(|_| Error::ParseGroup {
                spec: item.v.clone(),
                reason: "value is not a decimal integer".into(),
            })?;
            if item.witness.len() != group.order() {
                return Err(Error::LengthMismatch {
                    expected: group.order(),
                    actual: item.witness.len(),
                });
            }
            achieved.insert(v, item.witness);
        }
        Ok(SearchReport {
            group,
            bound: w.bound,
            counts: w.counts,
            achieved,
        })
    }
}

/// Translations `g -> g + a` as index permutations with their signs.
struct Translations {
    perms: Vec<Vec<usize>>,
    signs: Vec<i8>,
}

impl Translations {
    fn new(group: &AbelianGroup) -> Self {
        let n = group.order();
        let elems = group.elements();
        let mut perms = Vec::with_capacity(n);
        let mut signs = Vec::with_capacity(n);
        for a in &elems {
            let p: Vec<usize> = elems
                .iter()
                .map(|g| {
                    group.index_unchecked(group.op(g, a).expect("elements of the group").residues())
                })
                .collect();
            signs.push(permutation_sign(&p));
            perms.push(p);
        }
        Self { perms, signs }
    }

    /// True when no translate of `xs` is lexicographically smaller.
    fn is_orbit_min(&self, xs: &[i64]) -> bool {
        self.perms[1..].iter().all(|p| {
            for (g, &src) in p.iter().enumerate() {
                match xs[src].cmp(&xs[g]) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => return true,
                    std::cmp::Ordering::Equal => {}
                }
            }
            true
        })
    }
}

fn permutation_sign(p: &[usize]) -> i8 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for start in 0..p.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

#[derive(Default)]
struct ShardResult {
    evaluated: u64,
    best: HashMap<BigInt, u64>,
}

impl ShardResult {
    fn offer(&mut self, v: BigInt, rank: u64) {
        self.best
            .entry(v)
            .and_modify(|r| *r = (*r).min(rank))
            .or_insert(rank);
    }
}

/// Evaluates the group determinant on every point of `[-bound, bound]^|G|`.
pub fn search_values(
    group: &AbelianGroup,
    bound: i64,
    opts: &SearchOptions,
) -> Result<SearchReport> {
    let bx = AssignmentBox::new(group.order(), bound, &opts.run)?;
    let translations = opts.prune_translations.then(|| Translations::new(group));
    let keep = |v: &BigInt| opts.value_cap.as_ref().map_or(true, |cap| &v.abs() <= cap);

    let shards = bx.shards();
    let partials: Vec<ShardResult> = opts.run.install(|| {
        shards
            .par_iter()
            .map(|range| {
                let mut kernel = DetKernel::new(group);
                let mut out = ShardResult::default();
                let mut moved = vec![0i64; group.order()];
                bx.walk(range.clone(), |rank, xs| match &translations {
                    None => {
                        out.evaluated += 1;
                        let v = kernel.eval(xs);
                        if keep(&v) {
                            out.offer(v, rank);
                        }
                    }
                    Some(t) => {
                        if !t.is_orbit_min(xs) {
                            return;
                        }
                        out.evaluated += 1;
                        let v = kernel.eval(xs);
                        let neg = -&v;
                        if !keep(&v) {
                            return;
                        }
                        for (p, &s) in t.perms.iter().zip(&t.signs) {
                            for (m, &src) in moved.iter_mut().zip(p) {
                                *m = xs[src];
                            }
                            let r = bx.rank(&moved).expect("translates stay in the box");
                            out.offer(if s > 0 { v.clone() } else { neg.clone() }, r);
                        }
                    }
                });
                out
            })
            .collect()
    });

    let mut evaluated = 0;
    let mut best: HashMap<BigInt, u64> = HashMap::new();
    for part in partials {
        evaluated += part.evaluated;
        for (v, r) in part.best {
            best.entry(v).and_modify(|x| *x = (*x).min(r)).or_insert(r);
        }
    }
    let achieved: BTreeMap<BigInt, Vec<i64>> =
        best.into_iter().map(|(v, r)| (v, bx.point(r))).collect();
    Ok(SearchReport {
        group: group.clone(),
        bound,
        counts: SearchCounts {
            assignments: bx.size(),
            evaluated,
            distinct: achieved.len() as u64,
        },
        achieved,
    })
}

/// Values that break a check, with their witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violations {
    pub violations: Vec<(BigInt, Vec<i64>)>,
}

impl Violations {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every even achieved value, zero included, must be divisible by `2^exponent`.
pub fn check_even_divisibility(rep: &SearchReport, exponent: u64) -> Violations {
    collect_violations(rep, |v| {
        v.is_odd() || divisible_by_power_of_two(v, exponent)
    })
}

/// Built-in characterisations of value sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipSpec {
    /// `4m + 1`, `2^4 (2m + 1)`, `2^6 m`.
    Z2Z2,
    /// `8m + 1`, `2^8 (4m + 1)`, `2^12 m`.
    Z2Z2Z2,
    /// `8m + 1`, `2^8 m`.
    Z4Z2,
    /// Values of `Z/2p` for an odd prime `p`: (odd or `4 | v`) and
    /// (coprime to `p` or `p^2 | v`).
    S2p(u64),
}

impl MembershipSpec {
    pub fn contains(&self, v: &BigInt) -> bool {
        let residue = |m: u64| v.mod_floor(&BigInt::from(m));
        let is = |m: u64, r: u64| residue(m) == BigInt::from(r);
        let val2 = v.trailing_zeros();
        let odd_part_is = |m: u64, r: u64| {
            (v >> val2.unwrap_or(0)).mod_floor(&BigInt::from(m)) == BigInt::from(r)
        };
        match *self {
            MembershipSpec::Z2Z2 => {
                is(4, 1) || (val2 == Some(4)) || divisible_by_power_of_two(v, 6)
            }
            MembershipSpec::Z2Z2Z2 => {
                is(8, 1)
                    || (val2 == Some(8) && odd_part_is(4, 1))
                    || divisible_by_power_of_two(v, 12)
            }
            MembershipSpec::Z4Z2 => is(8, 1) || divisible_by_power_of_two(v, 8),
            MembershipSpec::S2p(p) => {
                let two_part = v.is_odd() || is(4, 0);
                let p_part = v.gcd(&BigInt::from(p)) == BigInt::from(1u8) || is(p * p, 0);
                two_part && p_part
            }
        }
    }
}

impl fmt::Display for MembershipSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipSpec::Z2Z2 => f.write_str("Z2Z2"),
            MembershipSpec::Z2Z2Z2 => f.write_str("Z2Z2Z2"),
            MembershipSpec::Z4Z2 => f.write_str("Z4Z2"),
            MembershipSpec::S2p(p) => write!(f, "S2p({p})"),
        }
    }
}

impl FromStr for MembershipSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownSpec(s.to_string());
        match s.trim() {
            "Z2Z2" => Ok(MembershipSpec::Z2Z2),
            "Z2Z2Z2" => Ok(MembershipSpec::Z2Z2Z2),
            "Z4Z2" => Ok(MembershipSpec::Z4Z2),
            other => {
                let p: u64 = other
                    .strip_prefix("S2p(")
                    .and_then(|rest| rest.strip_suffix(')'))
                    .and_then(|p| p.trim().parse().ok())
                    .ok_or_else(unknown)?;
                if p < 3 || !is_prime(p) {
                    return Err(unknown());
                }
                Ok(MembershipSpec::S2p(p))
            }
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Every achieved value must lie in the set described by `spec`.
pub fn check_membership(rep: &SearchReport, spec: MembershipSpec) -> Violations {
    collect_violations(rep, |v| spec.contains(v))
}

fn collect_violations(rep: &SearchReport, ok: impl Fn(&BigInt) -> bool) -> Violations {
    Violations {
        violations: rep
            .achieved
            .iter()
            .filter(|(v, _)| !ok(v))
            .map(|(v, w)| (v.clone(), w.clone()))
            .collect(),
    }
}

/// Lexicographically first assignment in the box whose determinant is `target`.
pub fn find_witness(
    group: &AbelianGroup,
    bound: i64,
    target: &BigInt,
    opts: &RunOptions,
) -> Result<Option<Vec<i64>>> {
    let bx = AssignmentBox::new(group.order(), bound, opts)?;
    let shards = bx.shards();
    Ok(opts.install(|| {
        shards.par_iter().find_map_first(|range| {
            let mut kernel = DetKernel::new(group);
            bx.walk_until(range.clone(), |_, xs| {
                (&kernel.eval(xs) == target).then(|| xs.to_vec())
            })
        })
    }))
}
