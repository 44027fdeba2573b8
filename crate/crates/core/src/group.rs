//! Finite abelian groups given as explicit direct products of cyclic groups.
//!
//! A group is the ordered list of its cyclic factor orders `(n_1, ..., n_t)`.
//! The list is kept exactly as given: it is never sorted or reduced to
//! invariant factors, because element indexing and positional splits
//! `G = H x K` both depend on it.
//!
//! Elements are enumerated in mixed-radix order with the last coordinate
//! varying fastest, so for `(2, 3)` the order is
//! `(0,0), (0,1), (0,2), (1,0), (1,1), (1,2)`. Assignments, group matrices,
//! characters and reports all share this convention.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite abelian group `Z/n_1 x ... x Z/n_t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct AbelianGroup {
    orders: Vec<usize>,
    order: usize,
    exponent: usize,
    // strides[i] = product of orders[i+1..]
    strides: Vec<usize>,
}

/// An element of an [`AbelianGroup`] as its tuple of residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    residues: Vec<usize>,
}

impl GroupElement {
    pub fn new(residues: Vec<usize>) -> Self {
        Self { residues }
    }

    pub fn residues(&self) -> &[usize] {
        &self.residues
    }
}

impl From<Vec<usize>> for GroupElement {
    fn from(residues: Vec<usize>) -> Self {
        Self::new(residues)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

impl AbelianGroup {
    /// Builds the group with the given cyclic factor orders, in the given order.
    pub fn new(orders: &[usize]) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::NoFactors);
        }
        if let Some(&bad) = orders.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidOrder(bad as i64));
        }
        let order = orders
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .ok_or_else(|| Error::GroupTooLarge(format!("{orders:?}")))?;
        let exponent = orders.iter().fold(1usize, |acc, &n| acc.lcm(&n));
        let mut strides = vec![1usize; orders.len()];
        for i in (0..orders.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1];
        }
        Ok(Self {
            orders: orders.to_vec(),
            order,
            exponent,
            strides,
        })
    }

    /// The cyclic group `Z/nZ`.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(&[n])
    }

    /// The trivial group, represented as `(1)`.
    pub fn trivial() -> Self {
        Self::new(&[1]).expect("(1) is a valid group")
    }

    /// `(2, 2, ..., 2)` with `l` factors.
    pub fn elementary_two(l: usize) -> Result<Self> {
        Self::new(&vec![2; l])
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    /// Number of cyclic factors `t`.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// `|G|`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// lcm of the factor orders.
    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(vec![0; self.rank()])
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.residues.len() == self.rank() && g.residues.iter().zip(&self.orders).all(|(r, n)| r < n)
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                residues: g.residues.clone(),
                orders: self.orders.clone(),
            })
        }
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.order)
            .map(|i| self.element_at_unchecked(i))
            .collect()
    }

    /// Mixed-radix rank of `g`.
    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        self.check(g)?;
        Ok(self.index_unchecked(&g.residues))
    }

    pub(crate) fn index_unchecked(&self, residues: &[usize]) -> usize {
        residues.iter().zip(&self.strides).map(|(r, s)| r * s).sum()
    }

    pub fn element_at(&self, index: usize) -> Result<GroupElement> {
        if index >= self.order {
            return Err(Error::IndexOutOfRange {
                index,
                order: self.order,
            });
        }
        Ok(self.element_at_unchecked(index))
    }

    fn element_at_unchecked(&self, index: usize) -> GroupElement {
        let residues = self
            .orders
            .iter()
            .zip(&self.strides)
            .map(|(n, s)| (index / s) % n)
            .collect();
        GroupElement::new(residues)
    }

    /// `g + h`, componentwise modulo the factor orders.
    pub fn op(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        let residues = g
            .residues
            .iter()
            .zip(&h.residues)
            .zip(&self.orders)
            .map(|((a, b), n)| (a + b) % n)
            .collect();
        Ok(GroupElement::new(residues))
    }

    pub fn inv(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        let residues = g
            .residues
            .iter()
            .zip(&self.orders)
            .map(|(a, n)| (n - a) % n)
            .collect();
        Ok(GroupElement::new(residues))
    }

    /// Table `t[i * |G| + j] = index_of(g_i * g_j^{-1})`.
    pub fn quotient_table(&self) -> Vec<usize> {
        let n = self.order;
        let elems = self.elements();
        let mut table = Vec::with_capacity(n * n);
        let mut buf = vec![0usize; self.rank()];
        for g in &elems {
            for h in &elems {
                for (k, slot) in buf.iter_mut().enumerate() {
                    let m = self.orders[k];
                    *slot = (g.residues[k] + m - h.residues[k]) % m;
                }
                table.push(self.index_unchecked(&buf));
            }
        }
        table
    }

    /// Splits `G = H x K` with `H` the first `cut` factors and `K` the rest.
    ///
    /// Under the shared indexing convention the element of `G` at index
    /// `i_H * |K| + i_K` is the pair of the `H` element at `i_H` and the `K`
    /// element at `i_K`.
    pub fn split(&self, cut: usize) -> Result<(AbelianGroup, AbelianGroup)> {
        if cut == 0 || cut >= self.rank() {
            return Err(Error::CutOutOfRange {
                cut,
                factors: self.rank(),
            });
        }
        Ok((
            Self::new(&self.orders[..cut])?,
            Self::new(&self.orders[cut..])?,
        ))
    }

    /// The direct product with `other`, factors of `self` first.
    pub fn product(&self, other: &AbelianGroup) -> Result<AbelianGroup> {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        Self::new(&orders)
    }

    /// True when every factor order divides 2.
    pub fn is_elementary_two(&self) -> bool {
        self.exponent <= 2
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.orders.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

/// Parses `"4x2"` into the orders `(4, 2)`.
impl FromStr for AbelianGroup {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let parse_err = |reason: String| Error::ParseGroup {
            spec: spec.to_string(),
            reason,
        };
        let mut orders = Vec::new();
        for part in spec.trim().split(['x', 'X']) {
            let part = part.trim();
            let n: i64 = part
                .parse()
                .map_err(|_| parse_err(format!("{part:?} is not an integer")))?;
            if n <= 0 {
                return Err(Error::InvalidOrder(n));
            }
            orders.push(usize::try_from(n).map_err(|e| parse_err(e.to_string()))?);
        }
        Self::new(&orders)
    }
}

impl TryFrom<Vec<usize>> for AbelianGroup {
    type Error = Error;

    fn try_from(orders: Vec<usize>) -> Result<Self> {
        Self::new(&orders)
    }
}

impl From<AbelianGroup> for Vec<usize> {
    fn from(g: AbelianGroup) -> Self {
        g.orders
    }
}

fn mod_inverse(a: usize, m: usize) -> Option<usize> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i64).extended_gcd(&(m as i64));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i64) as usize)
}

/// Decomposes `x mod n` along `Z/n = <s> x <r>` for coprime `n = r * s`.
///
/// Returns the unique `(a, b)` with `0 <= a < r`, `0 <= b < s` and
/// `a*s + b*r = x (mod n)`.
pub fn crt_decompose(n: usize, r: usize, s: usize, x: usize) -> Result<(usize, usize)> {
    let invalid = || Error::InvalidSplit { n, r, s };
    if r == 0 || s == 0 || r.checked_mul(s) != Some(n) || r.gcd(&s) != 1 {
        return Err(invalid());
    }
    let x = x % n;
    // a*s = x (mod r), b*r = x (mod s)
    let s_inv = mod_inverse(s % r, r).ok_or_else(invalid)?;
    let r_inv = mod_inverse(r % s, s).ok_or_else(invalid)?;
    let a = (x % r) * s_inv % r;
    let b = (x % s) * r_inv % s;
    Ok((a, b))
}
