//! Exact arithmetic in the cyclotomic integers `Z[zeta_N]`.
//!
//! An element is stored as its unique representative of degree `< phi(N)`
//! in `Z[x] / Phi_N(x)`, so two elements are equal exactly when their levels
//! and coefficient vectors are equal. Arithmetic between different levels is
//! an error; move values to a common level with [`CyclotomicInt::embed`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Euler's totient.
pub fn euler_phi(n: usize) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Exact quotient of `num` by the monic polynomial `den` (coefficients low to high).
fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut rem = num.to_vec();
    if rem.len() <= dd {
        assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = std::mem::take(&mut rem[k + dd]);
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den[..dd].iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    quot
}

fn phi_cache() -> &'static RwLock<HashMap<usize, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Coefficients (constant term first) of the `n`-th cyclotomic polynomial.
///
/// Computed as `(x^n - 1) / prod_{d | n, d < n} Phi_d(x)` with exact long
/// division, memoized per `n`.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn cyclotomic_polynomial(n: usize) -> Arc<Vec<BigInt>> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    if let Some(p) = phi_cache().read().expect("phi cache poisoned").get(&n) {
        return Arc::clone(p);
    }
    let mut poly = vec![BigInt::zero(); n + 1];
    poly[0] = -BigInt::one();
    poly[n] = BigInt::one();
    for d in divisors(n) {
        if d < n {
            poly = div_exact_monic(&poly, &cyclotomic_polynomial(d));
        }
    }
    let poly = Arc::new(poly);
    // Concurrent builders compute identical values, so first writer wins.
    Arc::clone(
        phi_cache()
            .write()
            .expect("phi cache poisoned")
            .entry(n)
            .or_insert(poly),
    )
}

/// An element of `Z[zeta_N]` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclotomicInt {
    level: usize,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInt {
    pub fn zero(level: usize) -> Self {
        Self::from_integer(level, BigInt::zero())
    }

    pub fn one(level: usize) -> Self {
        Self::from_integer(level, BigInt::one())
    }

    pub fn from_integer(level: usize, value: BigInt) -> Self {
        assert!(level > 0, "cyclotomic level must be positive");
        let mut coeffs = vec![BigInt::zero(); euler_phi(level)];
        coeffs[0] = value;
        Self { level, coeffs }
    }

    /// Reduces `sum_k poly[k] * zeta^k` to canonical form. `poly` may have
    /// any length; exponents are taken modulo `level` first.
    pub fn from_poly(level: usize, poly: Vec<BigInt>) -> Self {
        assert!(level > 0, "cyclotomic level must be positive");
        let mut folded = if poly.len() <= level {
            poly
        } else {
            let mut f = vec![BigInt::zero(); level];
            for (k, c) in poly.into_iter().enumerate() {
                f[k % level] += c;
            }
            f
        };
        let phi = cyclotomic_polynomial(level);
        let deg = phi.len() - 1;
        for top in (deg..folded.len()).rev() {
            let c = std::mem::take(&mut folded[top]);
            if c.is_zero() {
                continue;
            }
            for (j, pj) in phi[..deg].iter().enumerate() {
                folded[top - deg + j] -= &c * pj;
            }
        }
        folded.resize(deg, BigInt::zero());
        Self {
            level,
            coeffs: folded,
        }
    }

    /// `zeta_N^k`.
    pub fn root_power(level: usize, k: i64) -> Self {
        assert!(level > 0, "cyclotomic level must be positive");
        let e = k.rem_euclid(level as i64) as usize;
        let mut poly = vec![BigInt::zero(); e + 1];
        poly[e] = BigInt::one();
        Self::from_poly(level, poly)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Canonical coefficients, `phi(level)` of them, constant term first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_level(&self, other: &Self) -> Result<()> {
        if self.level == other.level {
            Ok(())
        } else {
            Err(Error::LevelMismatch(self.level, other.level))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_level(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            level: self.level,
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_level(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            level: self.level,
            coeffs,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_level(other)?;
        let d = self.coeffs.len();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_poly(self.level, prod))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Multiplies by `zeta^k` (a cyclic shift followed by reduction).
    pub fn mul_root_power(&self, k: i64) -> Self {
        let n = self.level;
        let shift = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(i + shift) % n] += c;
        }
        Self::from_poly(n, poly)
    }

    /// The rational integer `c_0`, or an error if any higher coefficient is nonzero.
    pub fn to_integer(&self) -> Result<BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Ok(self.coeffs[0].clone())
        } else {
            Err(Error::NotRational(self.to_string()))
        }
    }

    /// Image under `zeta_N -> zeta_M^{M/N}`.
    pub fn embed(&self, target: usize) -> Result<Self> {
        if target == 0 || target % self.level != 0 {
            return Err(Error::NotDivisibleLevel {
                from: self.level,
                to: target,
            });
        }
        if target == self.level {
            return Ok(self.clone());
        }
        let step = target / self.level;
        let mut poly = vec![BigInt::zero(); target];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Ok(Self::from_poly(target, poly))
    }

    /// `zeta -> zeta^u` for `u` coprime to the level.
    fn conjugate(&self, u: usize) -> Self {
        let n = self.level;
        let mut poly = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(i * u) % n] += c;
        }
        Self::from_poly(n, poly)
    }

    /// `self / divisor` when the quotient lies in `Z[zeta_N]`, else `None`.
    ///
    /// Multiplies through by the product of the nontrivial conjugates of the
    /// divisor, which turns the divisor into its (rational) norm.
    pub fn exact_div(&self, divisor: &Self) -> Result<Option<Self>> {
        self.same_level(divisor)?;
        if divisor.is_zero() {
            return Ok(None);
        }
        let n = self.level;
        let mut cofactor = Self::one(n);
        for u in 2..n {
            if u.gcd(&n) == 1 {
                cofactor = cofactor.try_mul(&divisor.conjugate(u))?;
            }
        }
        let norm = divisor.try_mul(&cofactor)?.to_integer()?;
        let num = self.try_mul(&cofactor)?;
        let mut coeffs = Vec::with_capacity(num.coeffs.len());
        for c in num.coeffs {
            let (q, r) = c.div_rem(&norm);
            if !r.is_zero() {
                return Ok(None);
            }
            coeffs.push(q);
        }
        Ok(Some(Self { level: n, coeffs }))
    }
}

impl std::ops::Neg for CyclotomicInt {
    type Output = CyclotomicInt;

    fn neg(self) -> Self {
        Self {
            level: self.level,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl std::ops::Neg for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn neg(self) -> CyclotomicInt {
        -self.clone()
    }
}

/// Renders as `c0 + c1*z + c2*z^2 (level N)`, skipping zero terms.
impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " (level {})", self.level)
    }
}
