//! 2-adic divisibility of integer group determinants of `G = H x (Z/2)^l`.
//!
//! If `2^M` divides every even integer group determinant of `H`, then every
//! even integer group determinant of `G` is divisible by `2^(M * 2^l)`. The
//! argument: each factor `alpha_chi` of the `(Z/2)^l` split is itself an
//! integer group determinant of `H`, and all of them are congruent mod 2 to
//! the trivial-character factor. This module holds the table of known `M`
//! values, the bound, per-assignment checks and an exhaustive box verifier.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::boxes::{AssignmentBox, RunOptions};
use crate::dedekind::theorem1_integer_factors;
use crate::det::{bareiss_det_i128, group_determinant, Assignment, DetKernel};
use crate::error::{Error, Result};
use crate::group::AbelianGroup;

/// Largest `e` with `2^e | v`.
pub fn two_adic_valuation(v: &BigInt) -> Result<u64> {
    v.trailing_zeros().ok_or(Error::UndefinedValuation)
}

/// Where a tabulated `M` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// `Theta = x_e`, so the even values are exactly `2Z`.
    TrivialGroup,
    /// Even values of `Z/2` are exactly `4Z`.
    CyclicTwo,
    /// Even values of `Z/2^n`, `n >= 2`, lie in `2^(n+2) Z` and not in `2^(n+3) Z`.
    CyclicTwoPower,
    /// Value set of `Z/2 x Z/2`: `4m+1`, `2^4 (2m+1)`, `2^6 m`.
    ValueSetTwoByTwo,
    /// Value set of `(Z/2)^3`: `8m+1`, `2^8 (4m+1)`, `2^12 m`.
    ValueSetTwoCubed,
    /// Value set of `Z/4 x Z/2`: `8m+1`, `2^8 m`.
    ValueSetFourByTwo,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::TrivialGroup => "trivial-group",
            Provenance::CyclicTwo => "cyclic-two",
            Provenance::CyclicTwoPower => "cyclic-two-power",
            Provenance::ValueSetTwoByTwo => "value-set-2x2",
            Provenance::ValueSetTwoCubed => "value-set-2x2x2",
            Provenance::ValueSetFourByTwo => "value-set-4x2",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MTableEntry {
    /// Factor orders of `H` as given by the caller.
    pub group: Vec<usize>,
    pub m: u64,
    pub provenance: Provenance,
}

/// Tabulated `M` for `H`, matched up to factor order and trivial factors.
pub fn known_m(h: &AbelianGroup) -> Option<MTableEntry> {
    let mut key: Vec<usize> = h.orders().iter().copied().filter(|&n| n > 1).collect();
    key.sort_unstable();
    let (m, provenance) = match key.as_slice() {
        [] => (1, Provenance::TrivialGroup),
        [2] => (2, Provenance::CyclicTwo),
        [n] if n.is_power_of_two() => (n.trailing_zeros() as u64 + 2, Provenance::CyclicTwoPower),
        [2, 2] => (4, Provenance::ValueSetTwoByTwo),
        [2, 2, 2] => (8, Provenance::ValueSetTwoCubed),
        [2, 4] => (8, Provenance::ValueSetFourByTwo),
        _ => return None,
    };
    Some(MTableEntry {
        group: h.orders().to_vec(),
        m,
        provenance,
    })
}

/// `M * 2^l`, with `M` from the table unless `m_override` is given.
pub fn theorem2_bound_exponent(h: &AbelianGroup, l: u32, m_override: Option<u64>) -> Result<u64> {
    let m = match m_override {
        Some(m) => m,
        None => known_m(h).ok_or_else(|| Error::UnknownM(h.to_string()))?.m,
    };
    1u64.checked_shl(l)
        .and_then(|k| m.checked_mul(k))
        .ok_or_else(|| Error::GroupTooLarge(format!("bound exponent for l = {l}")))
}

/// `2^(M * 2^l)`.
pub fn theorem2_bound(h: &AbelianGroup, l: u32, m_override: Option<u64>) -> Result<BigInt> {
    let e = theorem2_bound_exponent(h, l, m_override)?;
    Ok(BigInt::one() << e)
}

/// Outcome of a divisibility or congruence check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The statement says nothing about this input (odd determinant).
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem2Check {
    pub determinant: BigInt,
    /// `None` for a zero determinant (divisible by every power of 2).
    pub valuation: Option<u64>,
    pub bound_exponent: u64,
    pub verdict: Verdict,
}

fn judge_theorem2(determinant: BigInt, bound_exponent: u64) -> Theorem2Check {
    let valuation = determinant.trailing_zeros();
    let verdict = match valuation {
        Some(0) => Verdict::NotApplicable,
        Some(v) if v < bound_exponent => Verdict::Fail,
        _ => Verdict::Pass,
    };
    Theorem2Check {
        determinant,
        valuation,
        bound_exponent,
        verdict,
    }
}

fn split_group(h: &AbelianGroup, l: u32) -> Result<(AbelianGroup, AbelianGroup)> {
    let k = AbelianGroup::elementary_two(l as usize)?;
    let g = h.product(&k)?;
    Ok((k, g))
}

/// Checks `2^(M * 2^l) | Theta(G)(x)` for even determinants.
pub fn check_theorem2(
    h: &AbelianGroup,
    l: u32,
    x: &Assignment,
    m_override: Option<u64>,
) -> Result<Theorem2Check> {
    let bound_exponent = theorem2_bound_exponent(h, l, m_override)?;
    let (_, g) = split_group(h, l)?;
    let det = group_determinant(&g, x)?;
    Ok(judge_theorem2(det, bound_exponent))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceCheck {
    /// `alpha_chi` in character order, trivial character first.
    pub factors: Vec<BigInt>,
    pub verdict: Verdict,
}

fn judge_congruence(factors: Vec<BigInt>) -> CongruenceCheck {
    let parity = |v: &BigInt| v.bit(0);
    let first = parity(&factors[0]);
    let verdict = if factors.iter().all(|f| parity(f) == first) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    CongruenceCheck { factors, verdict }
}

/// Checks `alpha_chi = alpha_trivial (mod 2)` for every character of `(Z/2)^l`.
pub fn check_factor_congruence(
    h: &AbelianGroup,
    l: u32,
    x: &Assignment,
) -> Result<CongruenceCheck> {
    let (k, _) = split_group(h, l)?;
    Ok(judge_congruence(theorem1_integer_factors(h, &k, x)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    /// Even determinant below the bound.
    Divisibility,
    /// Factors with mixed parity.
    Congruence,
    /// Factor product differs from the direct determinant.
    FactorProduct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyFailure {
    pub kind: FailureKind,
    pub witness: Vec<i64>,
    pub determinant: BigInt,
}

/// Aggregate of an exhaustive check over a box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem2Summary {
    pub group: AbelianGroup,
    pub bound: i64,
    pub assignments_checked: u64,
    /// Even determinants, zero included.
    pub even_count: u64,
    /// Smallest valuation among nonzero even determinants.
    pub min_even_valuation: Option<u64>,
    pub bound_exponent: u64,
    /// In rank order.
    pub failures: Vec<VerifyFailure>,
}

impl Theorem2Summary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Integer factors `alpha_chi` on small assignments without allocation.
struct FactorKernel {
    h_order: usize,
    k_order: usize,
    h_table: Vec<usize>,
    // signs[c * |K| + k] = chi_c(k)
    signs: Vec<i64>,
    ys: Vec<i64>,
    scratch: Vec<i128>,
    h: AbelianGroup,
}

impl FactorKernel {
    fn new(h: &AbelianGroup, k: &AbelianGroup) -> Self {
        let signs = crate::characters::exponent_table(k)
            .into_iter()
            .map(|e| if e == 0 { 1 } else { -1 })
            .collect();
        Self {
            h_order: h.order(),
            k_order: k.order(),
            h_table: h.quotient_table(),
            signs,
            ys: vec![0; h.order()],
            scratch: vec![0; h.order() * h.order()],
            h: h.clone(),
        }
    }

    fn factors(&mut self, xs: &[i64]) -> Vec<BigInt> {
        let (nh, nk) = (self.h_order, self.k_order);
        (0..nk)
            .map(|c| {
                let chi = &self.signs[c * nk..(c + 1) * nk];
                for (ih, y) in self.ys.iter_mut().enumerate() {
                    *y = xs[ih * nk..(ih + 1) * nk]
                        .iter()
                        .zip(chi)
                        .map(|(x, s)| x * s)
                        .sum();
                }
                for (slot, &q) in self.scratch.iter_mut().zip(&self.h_table) {
                    *slot = self.ys[q] as i128;
                }
                match bareiss_det_i128(&mut self.scratch, nh) {
                    Some(d) => BigInt::from(d),
                    None => {
                        let ys = self.ys.iter().map(|&y| BigInt::from(y)).collect();
                        let a = Assignment::new(&self.h, ys).expect("length matches |H|");
                        group_determinant(&self.h, &a).expect("length matches |H|")
                    }
                }
            })
            .collect()
    }
}

#[derive(Default)]
struct Partial {
    checked: u64,
    even: u64,
    min_even: Option<u64>,
    failures: Vec<(u64, VerifyFailure)>,
}

/// Runs [`check_theorem2`] and [`check_factor_congruence`] on every
/// assignment of `[-bound, bound]^|G|` for `G = H x (Z/2)^l`, also checking
/// that the factor product equals the direct determinant.
pub fn verify_theorem2(
    h: &AbelianGroup,
    l: u32,
    bound: i64,
    m_override: Option<u64>,
    opts: &RunOptions,
) -> Result<Theorem2Summary> {
    let bound_exponent = theorem2_bound_exponent(h, l, m_override)?;
    let (k, g) = split_group(h, l)?;
    let bx = AssignmentBox::new(g.order(), bound, opts)?;
    let shards = bx.shards();

    let partials: Vec<Partial> = opts.install(|| {
        shards
            .par_iter()
            .map(|range| {
                let mut det_kernel = DetKernel::new(&g);
                let mut factor_kernel = FactorKernel::new(h, &k);
                let mut p = Partial::default();
                bx.walk(range.clone(), |rank, xs| {
                    let det = det_kernel.eval(xs);
                    let factors = factor_kernel.factors(xs);
                    let product = factors.iter().fold(BigInt::one(), |acc, f| acc * f);
                    let fail = |kind| VerifyFailure {
                        kind,
                        witness: xs.to_vec(),
                        determinant: det.clone(),
                    };
                    p.checked += 1;
                    if product != det {
                        p.failures.push((rank, fail(FailureKind::FactorProduct)));
                    }
                    if judge_congruence(factors).verdict == Verdict::Fail {
                        p.failures.push((rank, fail(FailureKind::Congruence)));
                    }
                    let check = judge_theorem2(det.clone(), bound_exponent);
                    if check.verdict != Verdict::NotApplicable {
                        p.even += 1;
                    }
                    if let Some(v) = check.valuation.filter(|&v| v > 0) {
                        p.min_even = Some(p.min_even.map_or(v, |m| m.min(v)));
                    }
                    if check.verdict == Verdict::Fail {
                        p.failures.push((rank, fail(FailureKind::Divisibility)));
                    }
                });
                p
            })
            .collect()
    });

    let mut total = Partial::default();
    for p in partials {
        total.checked += p.checked;
        total.even += p.even;
        total.min_even = match (total.min_even, p.min_even) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        total.failures.extend(p.failures);
    }
    total
        .failures
        .sort_by_key(|(rank, f)| (*rank, f.kind as u8));
    Ok(Theorem2Summary {
        group: g,
        bound,
        assignments_checked: total.checked,
        even_count: total.even,
        min_even_valuation: total.min_even,
        bound_exponent,
        failures: total.failures.into_iter().map(|(_, f)| f).collect(),
    })
}

/// True when `v` is zero or divisible by `2^exponent`.
pub fn divisible_by_power_of_two(v: &BigInt, exponent: u64) -> bool {
    v.is_zero() || v.trailing_zeros().is_some_and(|t| t >= exponent)
}
