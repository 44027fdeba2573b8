//! Character-product evaluation of group determinants.
//!
//! For an abelian group `G`, `Theta(G)` at an integer point is the product over
//! all characters `chi` of the linear forms `sum_g chi(g) x_g`. For a split
//! `G = H x K` the same linear forms regroup into one factor per character of
//! `K`:
//!
//! ```text
//! alpha_chi = Theta(H)[x_h -> sum_k chi(k) x_{hk}]
//! ```
//!
//! and the coprime circulant split `C_{rs} = prod_i C_r(y^i)` is the special
//! case `Z/rs = <s> x <r>`. Every path here is computed exactly in
//! `Z[zeta_L]` and cross-checked against the Bareiss determinant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::characters::exponent_table;
use crate::cyclotomic::CyclotomicInt;
use crate::det::{circulant_det, group_determinant, Assignment};
use crate::error::{Error, Result};
use crate::group::{crt_decompose, AbelianGroup};

/// How `G` was split for a [`FactorizationReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Split {
    /// `G = H x K`, one factor per character of `K`.
    Product { h: AbelianGroup, k: AbelianGroup },
    /// `Z/rs` with `gcd(r, s) = 1`, one factor per `i` in `0..s`.
    Coprime { r: usize, s: usize },
}

impl std::fmt::Display for Split {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Split::Product { h, k } => write!(f, "H={h}, K={k}"),
            Split::Coprime { r, s } => write!(f, "r={r}, s={s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationReport {
    pub split: Split,
    pub factors: Vec<CyclotomicInt>,
    pub product: BigInt,
    pub direct_det: BigInt,
    pub matched: bool,
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, actual })
    }
}

fn product_of(level: usize, factors: &[CyclotomicInt]) -> Result<BigInt> {
    let mut acc = CyclotomicInt::one(level);
    for f in factors {
        acc = acc.try_mul(f)?;
    }
    acc.to_integer()
        .map_err(|e| Error::Inconsistency(format!("character product is not rational: {e}")))
}

/// The linear forms `sum_g chi(g) x_g`, one per character in enumeration
/// order, at the group exponent level.
pub fn dedekind_linear_forms(group: &AbelianGroup, x: &Assignment) -> Result<Vec<CyclotomicInt>> {
    let n = group.order();
    check_len(n, x.values().len())?;
    let level = group.exponent();
    let table = exponent_table(group);
    Ok(table
        .chunks(n)
        .map(|row| {
            let mut sums = vec![BigInt::zero(); level];
            for (&k, v) in row.iter().zip(x.values()) {
                sums[k] += v;
            }
            CyclotomicInt::from_poly(level, sums)
        })
        .collect())
}

/// `Theta(G)` at `x` as the product of all character linear forms.
pub fn dedekind_product(group: &AbelianGroup, x: &Assignment) -> Result<BigInt> {
    let forms = dedekind_linear_forms(group, x)?;
    product_of(group.exponent(), &forms)
}

/// The inner linear forms of the `H x K` regrouping: entry `[c][p]` is
/// `sum_h psi_p(h) (sum_k chi_c(k) x_{hk})` at level `lcm(exp H, exp K)`.
///
/// `x` is indexed by `i_H * |K| + i_K`.
pub fn theorem1_linear_forms(
    h: &AbelianGroup,
    k: &AbelianGroup,
    x: &Assignment,
) -> Result<Vec<Vec<CyclotomicInt>>> {
    let (nh, nk) = (h.order(), k.order());
    check_len(nh * nk, x.values().len())?;
    let level = h.exponent().lcm(&k.exponent());
    let h_step = (level / h.exponent()) as i64;
    let k_table = exponent_table(k);
    let h_table = exponent_table(h);
    let values = x.values();

    let mut out = Vec::with_capacity(nk);
    for chi in k_table.chunks(nk) {
        // y_h = sum_k chi(k) x_{hk}, built at level exp(K) then embedded
        let ys = (0..nh)
            .map(|ih| {
                let mut sums = vec![BigInt::zero(); k.exponent()];
                for (ik, &e) in chi.iter().enumerate() {
                    sums[e] += &values[ih * nk + ik];
                }
                CyclotomicInt::from_poly(k.exponent(), sums).embed(level)
            })
            .collect::<Result<Vec<_>>>()?;
        let forms = h_table
            .chunks(nh)
            .map(|psi| {
                ys.iter()
                    .zip(psi)
                    .try_fold(CyclotomicInt::zero(level), |acc, (y, &e)| {
                        acc.try_add(&y.mul_root_power(e as i64 * h_step))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(forms);
    }
    Ok(out)
}

/// Factors `Theta(H x K)` into one `alpha_chi` per character of `K`.
pub fn theorem1_factors(
    h: &AbelianGroup,
    k: &AbelianGroup,
    x: &Assignment,
) -> Result<FactorizationReport> {
    let level = h.exponent().lcm(&k.exponent());
    let factors = theorem1_linear_forms(h, k, x)?
        .iter()
        .map(|forms| {
            forms
                .iter()
                .try_fold(CyclotomicInt::one(level), |acc, f| acc.try_mul(f))
        })
        .collect::<Result<Vec<_>>>()?;
    let product = product_of(level, &factors)?;
    let g = h.product(k)?;
    let direct_det = group_determinant(&g, &Assignment::new(&g, x.values().to_vec())?)?;
    Ok(FactorizationReport {
        split: Split::Product {
            h: h.clone(),
            k: k.clone(),
        },
        matched: product == direct_det,
        factors,
        product,
        direct_det,
    })
}

/// The factors `alpha_chi` for an elementary abelian 2-group `K`, computed
/// over `Z` with `chi(k) = +-1`. Each one is an integer group determinant of `H`.
pub fn theorem1_integer_factors(
    h: &AbelianGroup,
    k: &AbelianGroup,
    x: &Assignment,
) -> Result<Vec<BigInt>> {
    if !k.is_elementary_two() {
        return Err(Error::UnsupportedGroup(k.to_string()));
    }
    let (nh, nk) = (h.order(), k.order());
    check_len(nh * nk, x.values().len())?;
    let values = x.values();
    exponent_table(k)
        .chunks(nk)
        .map(|chi| {
            let ys = (0..nh)
                .map(|ih| {
                    chi.iter()
                        .enumerate()
                        .fold(BigInt::zero(), |acc, (ik, &e)| {
                            let v = &values[ih * nk + ik];
                            if e == 0 {
                                acc + v
                            } else {
                                acc - v
                            }
                        })
                })
                .collect();
            group_determinant(h, &Assignment::new(h, ys)?)
        })
        .collect()
}

fn coprime_split(r: usize, s: usize) -> Result<usize> {
    let n = r.checked_mul(s).ok_or(Error::InvalidSplit { n: 0, r, s })?;
    if r == 0 || s == 0 || r.gcd(&s) != 1 {
        return Err(Error::InvalidSplit { n, r, s });
    }
    Ok(n)
}

/// Splits the circulant `C_{rs}(xs)` into `prod_{i<s} C_r(y^i)` with
/// `y_j^i = sum_{k<s} zeta_s^{i(kr+j-1)} x_{kr+j}`.
///
/// `xs` is 0-based: `xs[m]` is `x_{m+1}` in the 1-based circulant
/// convention, the value at residue `m`. The `y^i` live at level `s`; each factor is evaluated as a
/// character product over `Z/r` at level `rs`.
pub fn laquer_split(r: usize, s: usize, xs: &[BigInt]) -> Result<FactorizationReport> {
    let n = coprime_split(r, s)?;
    check_len(n, xs.len())?;
    let level = n;
    let mut factors = Vec::with_capacity(s);
    for i in 0..s {
        // y[j-1] = y_j^i
        let ys = (1..=r)
            .map(|j| {
                let mut sums = vec![BigInt::zero(); s];
                for kk in 0..s {
                    let m = kk * r + j - 1;
                    sums[(i * m) % s] += &xs[m];
                }
                CyclotomicInt::from_poly(s, sums).embed(level)
            })
            .collect::<Result<Vec<_>>>()?;
        // C_r(y) = prod_l sum_j zeta_r^{l(j-1)} y_j, with zeta_r = zeta_rs^s
        let mut factor = CyclotomicInt::one(level);
        for l in 0..r {
            let form = ys
                .iter()
                .enumerate()
                .try_fold(CyclotomicInt::zero(level), |acc, (j0, y)| {
                    acc.try_add(&y.mul_root_power(((l * j0) % r * s) as i64))
                })?;
            factor = factor.try_mul(&form)?;
        }
        factors.push(factor);
    }
    let product = product_of(level, &factors)?;
    let direct_det = circulant_det(n, xs)?;
    Ok(FactorizationReport {
        split: Split::Coprime { r, s },
        matched: product == direct_det,
        factors,
        product,
        direct_det,
    })
}

/// Moves a circulant assignment on `Z/rs` to `Z/r x Z/s` along
/// `a*s + b*r -> (a, b)`.
pub fn transport_to_product(r: usize, s: usize, xs: &[BigInt]) -> Result<Assignment> {
    let n = coprime_split(r, s)?;
    check_len(n, xs.len())?;
    let g = AbelianGroup::new(&[r, s])?;
    let mut values = vec![BigInt::zero(); n];
    for (m, v) in xs.iter().enumerate() {
        let (a, b) = crt_decompose(n, r, s, m)?;
        values[a * s + b] = v.clone();
    }
    Assignment::new(&g, values)
}

/// Checks that the coprime circulant split agrees with the `Z/r x Z/s`
/// product split: same multiset of factors, both products equal `C_{rs}(xs)`.
pub fn laquer_vs_theorem1(r: usize, s: usize, xs: &[BigInt]) -> Result<bool> {
    let laquer = laquer_split(r, s, xs)?;
    let x = transport_to_product(r, s, xs)?;
    let h = AbelianGroup::cyclic(r)?;
    let k = AbelianGroup::cyclic(s)?;
    let t1 = theorem1_factors(&h, &k, &x)?;
    let mut a = laquer.factors.clone();
    let mut b = t1.factors.clone();
    a.sort();
    b.sort();
    Ok(a == b
        && laquer.matched
        && t1.matched
        && laquer.product == t1.product
        && laquer.direct_det == t1.direct_det)
}
