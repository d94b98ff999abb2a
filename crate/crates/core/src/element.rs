//! Elements of free modules over the point ring, and the interface shared by
//! every algebra in the crate.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::{BiDegree, CoeffElement, ConeMonomial};
use crate::error::{Error, Result};
use crate::grading::FreeModule;

/// A basis label of a free module.
pub trait BasisLabel: Clone + Ord + fmt::Debug + fmt::Display {
    fn is_unit(&self) -> bool;
}

/// A finite sum `Σ c_b · b` with coefficients in the point ring.
///
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeElement<B: Ord> {
    terms: BTreeMap<B, CoeffElement>,
}

impl<B: Ord> Default for FreeElement<B> {
    fn default() -> Self {
        FreeElement {
            terms: BTreeMap::new(),
        }
    }
}

impl<B: BasisLabel> FreeElement<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: B) -> Self {
        Self::term(CoeffElement::one(), b)
    }

    pub fn term(c: CoeffElement, b: B) -> Self {
        let mut out = Self::zero();
        out.add_term(b, &c);
        out
    }

    pub fn monomial(m: ConeMonomial, b: B) -> Self {
        Self::term(m.into(), b)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&B, &CoeffElement)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (B, CoeffElement)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, b: &B) -> CoeffElement {
        self.terms.get(b).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, b: B, c: &CoeffElement) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(b.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn toggle(&mut self, b: B, m: ConeMonomial) {
        let slot = self.terms.entry(b.clone()).or_default();
        slot.toggle(m);
        if slot.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add_assign(&mut self, other: &FreeElement<B>) {
        for (b, c) in &other.terms {
            self.add_term(b.clone(), c);
        }
    }

    pub fn sum(&self, other: &FreeElement<B>) -> FreeElement<B> {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn scale(&self, c: &CoeffElement) -> FreeElement<B> {
        let mut out = Self::zero();
        for (b, x) in &self.terms {
            out.add_term(b.clone(), &(x * c));
        }
        out
    }

    pub fn map_basis<C: BasisLabel>(&self, mut f: impl FnMut(&B) -> C) -> FreeElement<C> {
        let mut out = FreeElement::zero();
        for (b, c) in &self.terms {
            out.add_term(f(b), c);
        }
        out
    }

    /// Bidegree of a nonzero homogeneous element, given the degree of each
    /// basis label.
    pub fn degree_by(&self, deg: impl Fn(&B) -> BiDegree) -> Option<BiDegree> {
        let mut out = None;
        for (b, c) in &self.terms {
            let d = c.degree()? + deg(b);
            match out {
                None => out = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        out
    }

    pub fn homogeneous_component_by(&self, d: BiDegree, deg: impl Fn(&B) -> BiDegree) -> Self {
        let mut out = Self::zero();
        for (b, c) in &self.terms {
            out.add_term(b.clone(), &c.homogeneous_component(d - deg(b)));
        }
        out
    }
}

impl<B: BasisLabel> FromIterator<(B, CoeffElement)> for FreeElement<B> {
    fn from_iter<I: IntoIterator<Item = (B, CoeffElement)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (b, c) in iter {
            out.add_term(b, &c);
        }
        out
    }
}

/// Renders as `coeff*basis` terms joined by ` + `; inhomogeneous coefficients
/// are split into one term per monomial.
impl<B: BasisLabel> fmt::Display for FreeElement<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (b, c) in &self.terms {
            for m in c.monomials() {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                if b.is_unit() {
                    write!(f, "{m}")?;
                } else if m == ConeMonomial::ONE {
                    write!(f, "{b}")?;
                } else {
                    write!(f, "{m}*{b}")?;
                }
            }
        }
        Ok(())
    }
}

impl<B: BasisLabel> fmt::Debug for FreeElement<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An algebra over the point ring that is free as a module, presented on an
/// explicit homogeneous basis.
pub trait FreeAlgebra {
    type Basis: BasisLabel;

    /// Short name of the space, e.g. `so:5`.
    fn name(&self) -> String;

    fn degree(&self, b: &Self::Basis) -> BiDegree;

    fn unit(&self) -> Self::Basis;

    fn contains(&self, b: &Self::Basis) -> bool;

    /// Basis elements of topological degree at most `max_dim`, in canonical
    /// order.
    fn basis_through(&self, max_dim: i64) -> Vec<Self::Basis>;

    /// Top topological degree of a basis element, `None` if unbounded.
    fn top_dim(&self) -> Option<i64>;

    fn mul_basis(&self, x: &Self::Basis, y: &Self::Basis) -> Result<FreeElement<Self::Basis>>;

    fn check(&self, x: &FreeElement<Self::Basis>) -> Result<()> {
        for (b, _) in x.terms() {
            if !self.contains(b) {
                return Err(Error::NotInAmbient {
                    basis: b.to_string(),
                    space: self.name(),
                });
            }
        }
        Ok(())
    }

    fn mul(
        &self,
        x: &FreeElement<Self::Basis>,
        y: &FreeElement<Self::Basis>,
    ) -> Result<FreeElement<Self::Basis>> {
        self.check(x)?;
        self.check(y)?;
        let mut out = FreeElement::zero();
        for (bx, cx) in x.terms() {
            for (by, cy) in y.terms() {
                let c = cx * cy;
                if c.is_zero() {
                    continue;
                }
                out.add_assign(&self.mul_basis(bx, by)?.scale(&c));
            }
        }
        Ok(out)
    }

    fn one(&self) -> FreeElement<Self::Basis> {
        FreeElement::basis(self.unit())
    }

    fn pow(&self, x: &FreeElement<Self::Basis>, n: u32) -> Result<FreeElement<Self::Basis>> {
        let mut out = self.one();
        for _ in 0..n {
            out = self.mul(&out, x)?;
        }
        Ok(out)
    }

    fn degree_of(&self, x: &FreeElement<Self::Basis>) -> Option<BiDegree> {
        x.degree_by(|b| self.degree(b))
    }

    /// Generators of the underlying free module.
    fn module(&self) -> Result<FreeModule> {
        let top = self
            .top_dim()
            .ok_or_else(|| Error::Unsupported(format!("{} has an infinite basis", self.name())))?;
        FreeModule::new(
            self.basis_through(top)
                .into_iter()
                .map(|b| (b.to_string(), self.degree(&b)))
                .collect(),
        )
    }
}
