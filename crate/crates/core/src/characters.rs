//! Characters of finite abelian groups.
//!
//! The character with exponent tuple `(a_1, ..., a_t)` sends `g` to
//! `zeta_N^{sum_i (N / n_i) a_i g_i}`, where `N` is the group exponent. All
//! values are produced at level `N`, and characters are enumerated in the same
//! mixed-radix order as group elements, so the trivial character comes first.

use std::fmt;

use crate::cyclotomic::CyclotomicInt;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    group: AbelianGroup,
    exponents: Vec<usize>,
}

impl Character {
    pub fn new(group: &AbelianGroup, exponents: Vec<usize>) -> Result<Self> {
        if !group.contains(&GroupElement::new(exponents.clone())) {
            return Err(Error::InvalidElement {
                residues: exponents,
                orders: group.orders().to_vec(),
            });
        }
        Ok(Self {
            group: group.clone(),
            exponents,
        })
    }

    pub fn trivial(group: &AbelianGroup) -> Self {
        Self {
            group: group.clone(),
            exponents: vec![0; group.rank()],
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    /// The `k` in `chi(g) = zeta_N^k`, reduced into `[0, N)`.
    pub fn root_exponent(&self, g: &GroupElement) -> Result<usize> {
        if !self.group.contains(g) {
            return Err(Error::InvalidElement {
                residues: g.residues().to_vec(),
                orders: self.group.orders().to_vec(),
            });
        }
        Ok(root_exponent(&self.group, &self.exponents, g.residues()))
    }

    /// `chi(g)` as an exact root of unity at the group exponent level.
    pub fn value(&self, g: &GroupElement) -> Result<CyclotomicInt> {
        let k = self.root_exponent(g)?;
        Ok(CyclotomicInt::root_power(self.group.exponent(), k as i64))
    }

    /// `chi(g)` as `+1` or `-1`, for groups of exponent dividing 2.
    pub fn sign(&self, g: &GroupElement) -> Result<i32> {
        if !self.group.is_elementary_two() {
            return Err(Error::UnsupportedGroup(self.group.to_string()));
        }
        let k = self.root_exponent(g)?;
        Ok(if k == 0 { 1 } else { -1 })
    }
}

pub(crate) fn root_exponent(
    group: &AbelianGroup,
    exponents: &[usize],
    residues: &[usize],
) -> usize {
    let n = group.exponent();
    group
        .orders()
        .iter()
        .zip(exponents)
        .zip(residues)
        .map(|((&order, &a), &g)| (n / order) * ((a * g) % order))
        .sum::<usize>()
        % n
}

/// Renders as `chi=(1,0)`.
impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi={}", GroupElement::new(self.exponents.clone()))
    }
}

/// All `|G|` characters, trivial first, in mixed-radix exponent order.
pub fn enumerate_characters(group: &AbelianGroup) -> Vec<Character> {
    group
        .elements()
        .into_iter()
        .map(|e| Character {
            group: group.clone(),
            exponents: e.residues().to_vec(),
        })
        .collect()
}

/// Table `t[c * |G| + g]` of root exponents for every character and element.
pub(crate) fn exponent_table(group: &AbelianGroup) -> Vec<usize> {
    let elems = group.elements();
    let mut table = Vec::with_capacity(elems.len() * elems.len());
    for chi in &elems {
        for g in &elems {
            table.push(root_exponent(group, chi.residues(), g.residues()));
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn grp(orders: &[usize]) -> AbelianGroup {
        AbelianGroup::new(orders).unwrap()
    }

    fn el(r: &[usize]) -> GroupElement {
        GroupElement::new(r.to_vec())
    }

    const GROUPS: &[&[usize]] = &[
        &[1],
        &[2],
        &[3],
        &[4],
        &[2, 2],
        &[2, 3],
        &[4, 2],
        &[2, 2, 2],
        &[3, 3],
        &[6, 2],
        &[4, 4],
        &[2, 2, 2, 2],
        &[16],
    ];

    #[test]
    fn enumeration_examples() {
        let chars = enumerate_characters(&grp(&[2, 2]));
        assert_eq!(chars.len(), 4);
        assert!(chars[0].is_trivial());
        let c3 = enumerate_characters(&grp(&[3]));
        for (a, chi) in c3.iter().enumerate() {
            for g in 0..3 {
                assert_eq!(
                    chi.value(&el(&[g])).unwrap(),
                    CyclotomicInt::root_power(3, (a * g) as i64)
                );
            }
        }
        let c1 = enumerate_characters(&grp(&[1]));
        assert_eq!(c1.len(), 1);
        assert!(c1[0].is_trivial());
    }

    #[test]
    fn value_examples() {
        let g = grp(&[2, 3]);
        let trivial = Character::trivial(&g);
        for x in g.elements() {
            assert_eq!(trivial.value(&x).unwrap(), CyclotomicInt::one(6));
        }
        let chi = Character::new(&grp(&[4]), vec![1]).unwrap();
        assert_eq!(
            chi.value(&el(&[1])).unwrap(),
            CyclotomicInt::root_power(4, 1)
        );
        let chi = Character::new(&grp(&[2, 2]), vec![1, 1]).unwrap();
        assert_eq!(chi.value(&el(&[1, 1])).unwrap(), CyclotomicInt::one(2));
        assert!(chi.value(&el(&[2, 0])).is_err());
    }

    #[test]
    fn sign_examples() {
        let g = grp(&[2, 2]);
        assert_eq!(Character::trivial(&g).sign(&el(&[1, 1])), Ok(1));
        let chi = Character::new(&grp(&[2]), vec![1]).unwrap();
        assert_eq!(chi.sign(&el(&[1])), Ok(-1));
        let chi = Character::new(&g, vec![1, 0]).unwrap();
        assert_eq!(chi.sign(&el(&[1, 1])), Ok(-1));
        let chi = Character::new(&grp(&[4]), vec![1]).unwrap();
        assert!(matches!(
            chi.sign(&el(&[1])),
            Err(Error::UnsupportedGroup(_))
        ));
    }

    #[test]
    fn rendering() {
        let chi = Character::new(&grp(&[2, 2]), vec![1, 0]).unwrap();
        assert_eq!(chi.to_string(), "chi=(1,0)");
    }

    #[test]
    fn values_are_multiplicative() {
        for &orders in GROUPS {
            let g = grp(orders);
            let elems = g.elements();
            for chi in enumerate_characters(&g) {
                for a in &elems {
                    for b in &elems {
                        let lhs = chi.value(&g.op(a, b).unwrap()).unwrap();
                        let rhs = chi
                            .value(a)
                            .unwrap()
                            .try_mul(&chi.value(b).unwrap())
                            .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality() {
        for &orders in GROUPS {
            let g = grp(orders);
            let n = g.exponent();
            let order = BigInt::from(g.order());
            let chars = enumerate_characters(&g);
            for chi in &chars {
                let mut sum = CyclotomicInt::zero(n);
                for x in g.elements() {
                    sum = sum.try_add(&chi.value(&x).unwrap()).unwrap();
                }
                let expected = if chi.is_trivial() {
                    order.clone()
                } else {
                    BigInt::from(0)
                };
                assert_eq!(sum, CyclotomicInt::from_integer(n, expected), "{g} {chi}");
            }
            for x in g.elements() {
                let mut sum = CyclotomicInt::zero(n);
                for chi in &chars {
                    sum = sum.try_add(&chi.value(&x).unwrap()).unwrap();
                }
                let expected = if x == g.identity() {
                    order.clone()
                } else {
                    BigInt::from(0)
                };
                assert_eq!(sum, CyclotomicInt::from_integer(n, expected), "{g} {x}");
            }
        }
    }

    #[test]
    fn product_structure() {
        for orders in [
            &[2, 2][..],
            &[2, 3],
            &[4, 2],
            &[2, 2, 2],
            &[3, 3],
            &[2, 2, 3],
            &[4, 4],
        ] {
            let g = grp(orders);
            for cut in 1..g.rank() {
                let (h, k) = g.split(cut).unwrap();
                for chi in enumerate_characters(&g) {
                    let ch = Character::new(&h, chi.exponents()[..cut].to_vec()).unwrap();
                    let ck = Character::new(&k, chi.exponents()[cut..].to_vec()).unwrap();
                    for x in g.elements() {
                        let vh = ch
                            .value(&el(&x.residues()[..cut]))
                            .unwrap()
                            .embed(g.exponent())
                            .unwrap();
                        let vk = ck
                            .value(&el(&x.residues()[cut..]))
                            .unwrap()
                            .embed(g.exponent())
                            .unwrap();
                        assert_eq!(chi.value(&x).unwrap(), vh.try_mul(&vk).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn sign_agrees_with_value() {
        for orders in [&[1][..], &[2], &[2, 2], &[2, 2, 2], &[2, 1, 2]] {
            let g = grp(orders);
            for chi in enumerate_characters(&g) {
                for x in g.elements() {
                    let v = chi.value(&x).unwrap().to_integer().unwrap();
                    assert_eq!(BigInt::from(chi.sign(&x).unwrap()), v);
                }
            }
        }
    }
}
