//! Cohomology of the Stiefel manifolds `V_q(R^{p,q})` with `q = ⌊p/2⌋`.
//!
//! The basis is indexed by subsets `S ⊆ {p-q, ..., p-1}`. The projection
//! `SO(p,q) → V_q(R^{p,q})` induces the injection `π*[S] = β_S`, and products
//! are computed by pulling `so_mul` back along it.

use std::fmt;

use serde::Serialize;

use crate::coeff::BiDegree;
use crate::element::{BasisLabel, FreeAlgebra, FreeElement};
use crate::error::{Error, Result};
use crate::grading::{FreeModule, Sphere, SphereBasis, SphereElement};
use crate::rotation::{AdmissibleSequence, RotElement, RotationGroup, MAX_INDEX_P};

/// A basis class `[i_1, ..., i_n]`; the empty set is the unit `[0]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FrameBasisElement(u32);

impl FrameBasisElement {
    pub const UNIT: FrameBasisElement = FrameBasisElement(0);

    /// Builds `[S]` from distinct positive indices in any order.
    pub fn new(indices: &[u32]) -> Result<Self> {
        let mut mask = 0u32;
        for &i in indices {
            if i == 0 || i >= MAX_INDEX_P {
                return Err(Error::InvalidArgument(format!("index {i} out of range")));
            }
            if mask >> i & 1 == 1 {
                return Err(Error::InvalidArgument(format!("index {i} repeated")));
            }
            mask |= 1 << i;
        }
        Ok(FrameBasisElement(mask))
    }

    pub fn from_mask(mask: u32) -> Self {
        FrameBasisElement(mask & !1)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    /// Indices in decreasing order.
    pub fn indices(self) -> Vec<u32> {
        (1..MAX_INDEX_P)
            .rev()
            .filter(|&i| self.0 >> i & 1 == 1)
            .collect()
    }

    pub fn is_unit(self) -> bool {
        self.0 == 0
    }

    pub fn degree(self) -> BiDegree {
        self.as_sequence().degree()
    }

    pub fn as_sequence(self) -> AdmissibleSequence {
        AdmissibleSequence::from_mask(self.0)
    }
}

impl fmt::Display for FrameBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("[0]");
        }
        let parts: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl BasisLabel for FrameBasisElement {
    fn is_unit(&self) -> bool {
        self.0 == 0
    }
}

pub type StiefelElement = FreeElement<FrameBasisElement>;

/// Bitmask of `{p-q, ..., p-1}`.
fn range_mask(p: u32) -> u32 {
    let q = p / 2;
    ((1u64 << p) - (1u64 << (p - q))) as u32
}

/// The `2^{⌊p/2⌋}` basis classes of `H(V_q(R^{p,q}))` with their bidegrees.
pub fn stiefel_basis(p: u32) -> Result<Vec<(FrameBasisElement, BiDegree)>> {
    if p < 2 {
        return Err(Error::InvalidArgument(format!(
            "V_q(R^(p,q)) needs p >= 2, got {p}"
        )));
    }
    if p > MAX_INDEX_P {
        return Err(Error::Unsupported(format!("p = {p} exceeds {MAX_INDEX_P}")));
    }
    let q = p / 2;
    let low = p - q;
    Ok((0u32..1 << q)
        .map(|m| {
            let s = FrameBasisElement(m << low);
            (s, s.degree())
        })
        .collect())
}

pub fn stiefel_generators(p: u32) -> Result<FreeModule> {
    FreeModule::new(
        stiefel_basis(p)?
            .into_iter()
            .map(|(s, d)| (s.to_string(), d))
            .collect(),
    )
}

/// `H(V_q(R^{p,q}))` for `q = ⌊p/2⌋`.
#[derive(Debug)]
pub struct StiefelManifold {
    p: u32,
    group: RotationGroup,
}

impl StiefelManifold {
    pub fn new(p: u32) -> Result<Self> {
        Ok(StiefelManifold {
            p,
            group: RotationGroup::new(p)?,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.p / 2
    }

    /// The rotation group whose products are pulled back.
    pub fn rotation_group(&self) -> &RotationGroup {
        &self.group
    }

    pub fn class(&self, indices: &[u32]) -> Result<StiefelElement> {
        let s = FrameBasisElement::new(indices)?;
        if !self.contains(&s) {
            return Err(Error::NotInAmbient {
                basis: s.to_string(),
                space: self.name(),
            });
        }
        Ok(StiefelElement::basis(s))
    }

    /// `π*[S] = β_S`.
    pub fn pi_star(&self, x: &StiefelElement) -> Result<RotElement> {
        self.check(x)?;
        Ok(x.map_basis(|s| s.as_sequence()))
    }

    /// Inverse of `π*` on its image.
    pub fn pi_star_preimage(&self, x: &RotElement) -> Result<StiefelElement> {
        let range = range_mask(self.p);
        for (s, _) in x.terms() {
            if s.mask() & !range != 0 {
                return Err(Error::NotInSpan);
            }
        }
        Ok(x.map_basis(|s| FrameBasisElement(s.mask())))
    }
}

impl FreeAlgebra for StiefelManifold {
    type Basis = FrameBasisElement;

    fn name(&self) -> String {
        format!("stiefel:{}", self.p)
    }

    fn degree(&self, b: &FrameBasisElement) -> BiDegree {
        b.degree()
    }

    fn unit(&self) -> FrameBasisElement {
        FrameBasisElement::UNIT
    }

    fn contains(&self, b: &FrameBasisElement) -> bool {
        b.0 & !range_mask(self.p) == 0
    }

    fn basis_through(&self, max_dim: i64) -> Vec<FrameBasisElement> {
        stiefel_basis(self.p)
            .expect("p validated at construction")
            .into_iter()
            .filter(|(_, d)| d.p <= max_dim)
            .map(|(s, _)| s)
            .collect()
    }

    fn top_dim(&self) -> Option<i64> {
        let q = self.p / 2;
        Some((self.p - q..self.p).map(i64::from).sum())
    }

    fn mul_basis(&self, x: &FrameBasisElement, y: &FrameBasisElement) -> Result<StiefelElement> {
        for s in [x, y] {
            if !self.contains(s) {
                return Err(Error::NotInAmbient {
                    basis: s.to_string(),
                    space: self.name(),
                });
            }
        }
        if self.p == 2 {
            let to_sphere = |s: &FrameBasisElement| {
                if s.is_unit() {
                    SphereBasis::One
                } else {
                    SphereBasis::Gen
                }
            };
            let sphere = Sphere::new(BiDegree::new(1, 1))?;
            let prod = sphere.mul(
                &SphereElement::basis(to_sphere(x)),
                &SphereElement::basis(to_sphere(y)),
            )?;
            return Ok(prod.map_basis(|b| match b {
                SphereBasis::One => FrameBasisElement::UNIT,
                SphereBasis::Gen => FrameBasisElement(0b10),
            }));
        }
        let prod = self.group.mul_basis(&x.as_sequence(), &y.as_sequence())?;
        self.pi_star_preimage(&prod).map_err(|_| {
            Error::Consistency(format!(
                "{x}*{y} pulls back to {prod}, outside the image of pi*"
            ))
        })
    }
}

pub fn stiefel_mul(
    manifold: &StiefelManifold,
    x: &StiefelElement,
    y: &StiefelElement,
) -> Result<StiefelElement> {
    manifold.mul(x, y)
}

pub fn pi_star(manifold: &StiefelManifold, x: &StiefelElement) -> Result<RotElement> {
    manifold.pi_star(x)
}

/// `[S∪T]` when `S` and `T` are disjoint, zero otherwise.
pub fn disjoint_union_rule(x: FrameBasisElement, y: FrameBasisElement) -> StiefelElement {
    if x.0 & y.0 == 0 {
        StiefelElement::basis(FrameBasisElement(x.0 | y.0))
    } else {
        StiefelElement::zero()
    }
}

/// A basis product whose pulled-back value differs from the disjoint-union
/// rule.
#[derive(Clone, Debug, Serialize)]
pub struct RuleDeviation {
    pub left: String,
    pub right: String,
    pub rule: String,
    pub computed: String,
}

/// Every basis pair of `V_q(R^{p,q})` where the computed product is not the
/// disjoint-union rule.
pub fn disjoint_union_deviations(manifold: &StiefelManifold) -> Result<Vec<RuleDeviation>> {
    let basis = manifold.basis_through(i64::MAX);
    let mut out = Vec::new();
    for (k, x) in basis.iter().enumerate() {
        for y in &basis[k..] {
            let computed = manifold.mul_basis(x, y)?;
            let rule = disjoint_union_rule(*x, *y);
            if computed != rule {
                out.push(RuleDeviation {
                    left: x.to_string(),
                    right: y.to_string(),
                    rule: rule.to_string(),
                    computed: computed.to_string(),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffElement;
    use crate::grading::{module_iso_check, sphere_product_module};
    use proptest::prelude::*;

    fn degrees(p: u32) -> Vec<(i64, i64)> {
        stiefel_basis(p)
            .unwrap()
            .into_iter()
            .map(|(_, d)| (d.p, d.q))
            .collect()
    }

    #[test]
    fn basis_examples() {
        assert_eq!(degrees(5), vec![(0, 0), (3, 2), (4, 2), (7, 4)]);
        assert_eq!(degrees(4), vec![(0, 0), (2, 1), (3, 2), (5, 3)]);
        assert_eq!(degrees(2), vec![(0, 0), (1, 1)]);
        assert!(stiefel_basis(1).is_err());
    }

    #[test]
    fn basis_is_a_sphere_product() {
        for p in 2..=14u32 {
            let dims: Vec<BiDegree> = (p - p / 2..p)
                .map(|k| BiDegree::twisted_cell(k.into()))
                .collect();
            assert!(module_iso_check(
                &stiefel_generators(p).unwrap(),
                &sphere_product_module(&dims)
            ));
            assert_eq!(stiefel_basis(p).unwrap().len(), 1 << (p / 2));
        }
    }

    #[test]
    fn labels() {
        assert_eq!(
            FrameBasisElement::new(&[3, 4]).unwrap().to_string(),
            "[4,3]"
        );
        assert_eq!(FrameBasisElement::UNIT.to_string(), "[0]");
        assert!(FrameBasisElement::new(&[3, 3]).is_err());
    }

    #[test]
    fn products_in_v2_r52() {
        let v = StiefelManifold::new(5).unwrap();
        let c = |s: &[u32]| v.class(s).unwrap();
        assert_eq!(v.mul(&c(&[3]), &c(&[4])).unwrap(), c(&[3, 4]));
        assert!(v.mul(&c(&[3]), &c(&[3])).unwrap().is_zero());
        assert_eq!(v.mul(&c(&[]), &c(&[4])).unwrap(), c(&[4]));
        assert!(v.class(&[2]).is_err());
    }

    #[test]
    fn product_in_v3_r73() {
        let v = StiefelManifold::new(7).unwrap();
        let prod = v
            .mul(&v.class(&[4]).unwrap(), &v.class(&[5, 6]).unwrap())
            .unwrap();
        assert_eq!(prod, v.class(&[4, 5, 6]).unwrap());
    }

    #[test]
    fn pi_star_examples() {
        let v = StiefelManifold::new(5).unwrap();
        let img = v.pi_star(&v.class(&[3, 4]).unwrap()).unwrap();
        assert_eq!(img.to_string(), "B[4,3]");
        assert_eq!(v.pi_star(&v.one()).unwrap(), v.rotation_group().one());
        let v7 = StiefelManifold::new(7).unwrap();
        assert_eq!(
            v7.pi_star(&v7.class(&[5]).unwrap()).unwrap().to_string(),
            "B[5]"
        );
    }

    #[test]
    fn low_rank_case_is_the_sphere() {
        let v = StiefelManifold::new(2).unwrap();
        let x = v.class(&[1]).unwrap();
        assert_eq!(v.mul(&x, &x).unwrap(), x.scale(&CoeffElement::rho()));
        let pulled = v
            .pi_star_preimage(
                &v.rotation_group()
                    .mul(&v.pi_star(&x).unwrap(), &v.pi_star(&x).unwrap())
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(pulled, v.mul(&x, &x).unwrap());
    }

    // disjoint union, except that [p/2]^2 = ρ[p-1] when p ≡ 2 mod 4
    fn expected(p: u32, x: FrameBasisElement, y: FrameBasisElement) -> StiefelElement {
        let (s, t) = (x.mask(), y.mask());
        let overlap = s & t;
        if overlap == 0 {
            return StiefelElement::basis(FrameBasisElement(s | t));
        }
        let rest = s ^ t;
        let top = 1 << (p - 1);
        if p % 4 == 2 && overlap == 1 << (p / 2) && rest & top == 0 {
            return StiefelElement::term(CoeffElement::rho(), FrameBasisElement(rest | top));
        }
        StiefelElement::zero()
    }

    #[test]
    fn all_basis_products() {
        for p in 3..=10u32 {
            let v = StiefelManifold::new(p).unwrap();
            let basis = v.basis_through(i64::MAX);
            for x in &basis {
                for y in &basis {
                    assert_eq!(
                        v.mul_basis(x, y).unwrap(),
                        expected(p, *x, *y),
                        "p={p} {x}*{y}"
                    );
                }
            }
            let devs = disjoint_union_deviations(&v).unwrap();
            assert_eq!(devs.is_empty(), p % 4 != 2, "p={p}");
        }
    }

    proptest! {
        #[test]
        fn pi_star_is_multiplicative(p in 3u32..=8, a in any::<u32>(), b in any::<u32>()) {
            let v = StiefelManifold::new(p).unwrap();
            let basis = v.basis_through(i64::MAX);
            let x = StiefelElement::basis(basis[a as usize % basis.len()]);
            let y = StiefelElement::basis(basis[b as usize % basis.len()]);
            let lhs = v.pi_star(&v.mul(&x, &y).unwrap()).unwrap();
            let rhs = v.rotation_group().mul(&v.pi_star(&x).unwrap(), &v.pi_star(&y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
