//! Group matrices and exact determinants.
//!
//! The group matrix of `G` under an assignment `x` has entry
//! `x_{g_i g_j^{-1}}` at `(i, j)`, with elements in the shared mixed-radix
//! order. Determinants use fraction-free (Bareiss) elimination, generic over
//! any [`BareissDomain`]; rational integers additionally get a checked `i128`
//! fast path that falls back to big integers on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::cyclotomic::CyclotomicInt;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};

/// Integer values `x_g`, one per group element in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    group: AbelianGroup,
    values: Vec<BigInt>,
}

impl Assignment {
    pub fn new(group: &AbelianGroup, values: Vec<BigInt>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::LengthMismatch {
                expected: group.order(),
                actual: values.len(),
            });
        }
        Ok(Self {
            group: group.clone(),
            values,
        })
    }

    pub fn from_i64(group: &AbelianGroup, values: &[i64]) -> Result<Self> {
        Self::new(group, values.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// `x_e = 1`, every other `x_g = 0`.
    pub fn identity(group: &AbelianGroup) -> Self {
        let mut values = vec![BigInt::zero(); group.order()];
        values[0] = BigInt::one();
        Self {
            group: group.clone(),
            values,
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn into_values(self) -> Vec<BigInt> {
        self.values
    }

    /// `g -> x_{g + a}`.
    pub fn translate(&self, a: &GroupElement) -> Result<Self> {
        self.group.index_of(a)?;
        let values = self
            .group
            .elements()
            .iter()
            .map(|g| {
                let ga = self.group.op(g, a).expect("elements of the group");
                self.values[self.group.index_unchecked(ga.residues())].clone()
            })
            .collect();
        Self::new(&self.group, values)
    }

    /// `g -> x_{u g}`, for `u` a unit modulo every factor order.
    pub fn scale(&self, u: usize) -> Result<Self> {
        if let Some(&modulus) = self.group.orders().iter().find(|&&n| u.gcd(&n) != 1) {
            return Err(Error::NotUnit { u, modulus });
        }
        let values = self
            .group
            .elements()
            .iter()
            .map(|g| {
                let ug: Vec<usize> = g
                    .residues()
                    .iter()
                    .zip(self.group.orders())
                    .map(|(&r, &n)| (u % n) * r % n)
                    .collect();
                self.values[self.group.index_unchecked(&ug)].clone()
            })
            .collect();
        Self::new(&self.group, values)
    }

    /// `(x * y)_g = sum_h x_h y_{g - h}`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(
                self.group.to_string(),
                other.group.to_string(),
            ));
        }
        let n = self.group.order();
        let table = self.group.quotient_table();
        let mut values = vec![BigInt::zero(); n];
        for (g, out) in values.iter_mut().enumerate() {
            for h in 0..n {
                *out += &self.values[h] * &other.values[table[g * n + h]];
            }
        }
        Self::new(&self.group, values)
    }
}

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn new(dim: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

/// Integral domains Bareiss elimination can run over.
pub trait BareissDomain: Clone {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn times(&self, other: &Self) -> Result<Self>;
    fn minus(&self, other: &Self) -> Result<Self>;
    fn negated(&self) -> Self;
    /// `self / divisor`; [`Error::InexactDivision`] if the quotient is not in the domain.
    fn divide_exact(&self, divisor: &Self) -> Result<Self>;
}

impl BareissDomain for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn zero_like(&self) -> Self {
        BigInt::zero()
    }

    fn one_like(&self) -> Self {
        BigInt::one()
    }

    fn times(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }

    fn minus(&self, other: &Self) -> Result<Self> {
        Ok(self - other)
    }

    fn negated(&self) -> Self {
        -self
    }

    fn divide_exact(&self, divisor: &Self) -> Result<Self> {
        if Zero::is_zero(divisor) {
            return Err(Error::InexactDivision);
        }
        let (q, r) = self.div_rem(divisor);
        if Zero::is_zero(&r) {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }
}

impl BareissDomain for CyclotomicInt {
    fn is_zero(&self) -> bool {
        CyclotomicInt::is_zero(self)
    }

    fn zero_like(&self) -> Self {
        CyclotomicInt::zero(self.level())
    }

    fn one_like(&self) -> Self {
        CyclotomicInt::one(self.level())
    }

    fn times(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)
    }

    fn minus(&self, other: &Self) -> Result<Self> {
        self.try_sub(other)
    }

    fn negated(&self) -> Self {
        -self
    }

    fn divide_exact(&self, divisor: &Self) -> Result<Self> {
        self.exact_div(divisor)?.ok_or(Error::InexactDivision)
    }
}

/// Exact determinant by fraction-free elimination.
///
/// Zero pivots are replaced by the first nonzero entry below them (flipping
/// the sign); a column with no nonzero candidate makes the determinant zero.
/// Every division is checked to be exact.
pub fn bareiss_det<T: BareissDomain>(m: &Matrix<T>) -> Result<T> {
    let n = m.dim;
    assert!(n > 0, "determinant of an empty matrix");
    let mut a = m.entries.clone();
    let mut prev = a[0].one_like();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                return Ok(a[0].zero_like());
            };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            negate = !negate;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            let lead = a[i * n + k].clone();
            for j in k + 1..n {
                let t = a[i * n + j]
                    .times(&pivot)?
                    .minus(&lead.times(&a[k * n + j])?)?;
                a[i * n + j] = t.divide_exact(&prev)?;
            }
        }
        prev = pivot;
    }
    let det = a[n * n - 1].clone();
    Ok(if negate { det.negated() } else { det })
}

/// The matrix `(x_{g h^{-1}})_{g,h}`.
pub fn build_group_matrix(group: &AbelianGroup, x: &Assignment) -> Result<Matrix<BigInt>> {
    if x.values().len() != group.order() {
        return Err(Error::LengthMismatch {
            expected: group.order(),
            actual: x.values().len(),
        });
    }
    let table = group.quotient_table();
    Ok(Matrix {
        dim: group.order(),
        entries: table.iter().map(|&q| x.values[q].clone()).collect(),
    })
}

/// `Theta(G)` evaluated at the integer assignment `x`.
pub fn group_determinant(group: &AbelianGroup, x: &Assignment) -> Result<BigInt> {
    let m = build_group_matrix(group, x)?;
    Ok(integer_det(&m))
}

/// Determinant of an integer matrix, trying `i128` first.
pub fn integer_det(m: &Matrix<BigInt>) -> BigInt {
    let small: Option<Vec<i128>> = m.entries.iter().map(ToPrimitive::to_i128).collect();
    if let Some(mut small) = small {
        if let Some(d) = bareiss_det_i128(&mut small, m.dim) {
            return BigInt::from(d);
        }
    }
    bareiss_det(m).expect("Bareiss divisions over Z are exact")
}

/// Bareiss over `i128` with overflow checks; `None` on overflow.
///
/// Clobbers `a` (row-major, `n * n`).
pub fn bareiss_det_i128(a: &mut [i128], n: usize) -> Option<i128> {
    let mut prev: i128 = 1;
    let mut negate = false;
    for k in 0..n.saturating_sub(1) {
        if a[k * n + k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
                return Some(0);
            };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            negate = !negate;
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let lead = a[i * n + k];
            for j in k + 1..n {
                let t = a[i * n + j]
                    .checked_mul(pivot)?
                    .checked_sub(lead.checked_mul(a[k * n + j])?)?;
                debug_assert_eq!(t % prev, 0);
                a[i * n + j] = t / prev;
            }
        }
        prev = pivot;
    }
    let det = a[n * n - 1];
    Some(if negate { -det } else { det })
}

/// Reusable evaluator of `Theta(G)` on small integer assignments.
///
/// Holds the quotient table and a scratch matrix so the hot loops of the
/// exhaustive searches do not allocate per assignment.
#[derive(Debug, Clone)]
pub struct DetKernel {
    group: AbelianGroup,
    table: Vec<usize>,
    scratch: Vec<i128>,
}

impl DetKernel {
    pub fn new(group: &AbelianGroup) -> Self {
        let n = group.order();
        Self {
            group: group.clone(),
            table: group.quotient_table(),
            scratch: vec![0; n * n],
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// `Theta(G)` at `xs` (length `|G|`).
    pub fn eval(&mut self, xs: &[i64]) -> BigInt {
        debug_assert_eq!(xs.len(), self.group.order());
        for (slot, &q) in self.scratch.iter_mut().zip(&self.table) {
            *slot = xs[q] as i128;
        }
        match bareiss_det_i128(&mut self.scratch, self.group.order()) {
            Some(d) => BigInt::from(d),
            None => {
                let m = Matrix {
                    dim: self.group.order(),
                    entries: self.table.iter().map(|&q| BigInt::from(xs[q])).collect(),
                };
                bareiss_det(&m).expect("Bareiss divisions over Z are exact")
            }
        }
    }
}

/// The circulant determinant `C_n(x_1, ..., x_n)`, with `xs[i]` the value at residue `i`.
pub fn circulant_det(n: usize, xs: &[BigInt]) -> Result<BigInt> {
    if xs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: xs.len(),
        });
    }
    let group = AbelianGroup::cyclic(n)?;
    group_determinant(&group, &Assignment::new(&group, xs.to_vec())?)
}
