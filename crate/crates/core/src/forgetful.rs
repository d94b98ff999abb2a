//! The forgetful map `ψ` to singular `Z/2`-cohomology, classical Poincaré
//! series, and the exactness check for the sequence
//!
//! ```text
//! H^{p,q}(X) --ρ--> H^{p+1,q+1}(X) --ψ--> H^{p+1}(X; Z/2)
//! ```
//!
//! On the free-module presentations `ψ` specializes coefficients: `τ^b ↦ 1`,
//! everything divisible by `ρ` and the whole bottom cone `↦ 0`. Classical
//! products are computed by applying `ψ` to equivariant products.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::coeff::{BiDegree, CoeffElement, ConeMonomial};
use crate::element::{FreeAlgebra, FreeElement};
use crate::error::{Error, Result};
use crate::gf2::{Echelon, SparseVec};
use crate::grading::Window;
use crate::rotation::{AdmissibleSequence, RotationGroup};

/// `ψ` on a point-ring monomial.
pub fn psi_coeff(m: ConeMonomial) -> bool {
    matches!(m, ConeMonomial::Top { rho: 0, .. })
}

/// `ψ` on a point-ring element.
pub fn psi_coeff_element(c: &CoeffElement) -> bool {
    c.monomials().filter(|m| psi_coeff(*m)).count() % 2 == 1
}

/// A class in singular `Z/2`-cohomology, written on the images of an
/// equivariant basis. Each label carries its topological degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClassicalElement<B: Ord> {
    terms: BTreeMap<B, i64>,
}

impl<B: Ord> Default for ClassicalElement<B> {
    fn default() -> Self {
        ClassicalElement {
            terms: BTreeMap::new(),
        }
    }
}

impl<B: Ord + Clone> ClassicalElement<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: B, degree: i64) -> Self {
        let mut out = Self::zero();
        out.toggle(b, degree);
        out
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

    pub fn terms(&self) -> impl Iterator<Item = (&B, i64)> {
        self.terms.iter().map(|(b, d)| (b, *d))
    }

    pub fn toggle(&mut self, b: B, degree: i64) {
        if self.terms.remove(&b).is_none() {
            self.terms.insert(b, degree);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (b, d) in &other.terms {
            self.toggle(b.clone(), *d);
        }
    }
}

impl<B: Ord + fmt::Display> fmt::Display for ClassicalElement<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.keys().map(|b| b.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<B: Ord + fmt::Display> fmt::Debug for ClassicalElement<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Applies `ψ` to every coefficient and forgets weights.
pub fn psi_element<A: FreeAlgebra>(
    space: &A,
    x: &FreeElement<A::Basis>,
) -> ClassicalElement<A::Basis> {
    let mut out = ClassicalElement::zero();
    for (b, c) in x.terms() {
        if psi_coeff_element(c) {
            out.toggle(b.clone(), space.degree(b).p);
        }
    }
    out
}

/// Classical product, obtained as `ψ` of the equivariant product of basis
/// lifts.
pub fn classical_mul<A: FreeAlgebra>(
    space: &A,
    x: &ClassicalElement<A::Basis>,
    y: &ClassicalElement<A::Basis>,
) -> Result<ClassicalElement<A::Basis>> {
    let mut out = ClassicalElement::zero();
    for (bx, _) in x.terms() {
        for (by, _) in y.terms() {
            out.add_assign(&psi_element(space, &space.mul_basis(bx, by)?));
        }
    }
    Ok(out)
}

/// A polynomial with natural-number coefficients in one variable `t`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PoincarePolynomial {
    coefficients: BTreeMap<i64, u64>,
}

impl PoincarePolynomial {
    pub fn one() -> Self {
        PoincarePolynomial {
            coefficients: BTreeMap::from([(0, 1)]),
        }
    }

    /// `∏ (1 + t^e)`.
    pub fn from_factors(exponents: impl IntoIterator<Item = i64>) -> Self {
        exponents.into_iter().fold(Self::one(), |acc, e| {
            let mut out = acc.clone();
            for (d, c) in &acc.coefficients {
                *out.coefficients.entry(d + e).or_default() += c;
            }
            out
        })
    }

    /// Counts of the given degrees.
    pub fn from_degrees(degrees: impl IntoIterator<Item = i64>) -> Self {
        let mut coefficients = BTreeMap::new();
        for d in degrees {
            *coefficients.entry(d).or_default() += 1;
        }
        PoincarePolynomial { coefficients }
    }

    pub fn coefficient(&self, d: i64) -> u64 {
        self.coefficients.get(&d).copied().unwrap_or(0)
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, u64> {
        &self.coefficients
    }

    pub fn eval_at_one(&self) -> u64 {
        self.coefficients.values().sum()
    }
}

/// `1+t+t^2+2t^3+...`
impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coefficients
            .iter()
            .filter(|(_, c)| **c > 0)
            .map(|(&d, &c)| {
                let var = match d {
                    0 => String::new(),
                    1 => "t".into(),
                    _ => format!("t^{d}"),
                };
                match (c, d) {
                    (_, 0) => c.to_string(),
                    (1, _) => var,
                    _ => format!("{c}{var}"),
                }
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

/// Spaces with a classical Poincaré series oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalSpace {
    /// `SO(p)`.
    Rotation(u32),
    /// `V_{⌊p/2⌋}(R^p)`.
    Stiefel(u32),
}

impl fmt::Display for ClassicalSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassicalSpace::Rotation(p) => write!(f, "SO({p})"),
            ClassicalSpace::Stiefel(p) => write!(f, "V_{}(R^{p})", p / 2),
        }
    }
}

/// `∏_{i=1}^{p-1} (1+t^i)` for `SO(p)`, `∏_{i=p-q}^{p-1} (1+t^i)` for the
/// Stiefel manifold.
pub fn classical_poincare(space: ClassicalSpace) -> PoincarePolynomial {
    match space {
        ClassicalSpace::Rotation(p) => PoincarePolynomial::from_factors((1..p).map(i64::from)),
        ClassicalSpace::Stiefel(p) => {
            PoincarePolynomial::from_factors((p - p / 2..p).map(i64::from))
        }
    }
}

/// Poincaré series of `ψ` applied to the equivariant basis: the rank, per
/// topological degree, of the span of the `ψ`-images.
pub fn psi_image_poincare<A: FreeAlgebra>(space: &A) -> Result<PoincarePolynomial> {
    let top = space
        .top_dim()
        .ok_or_else(|| Error::Unsupported(format!("{} has an infinite basis", space.name())))?;
    let mut by_degree: BTreeMap<i64, Vec<ClassicalElement<A::Basis>>> = BTreeMap::new();
    for b in space.basis_through(top) {
        let img = psi_element(space, &FreeElement::basis(b.clone()));
        by_degree.entry(space.degree(&b).p).or_default().push(img);
    }
    let mut coefficients = BTreeMap::new();
    for (d, images) in by_degree {
        let rank = classical_rank(&images);
        if rank > 0 {
            coefficients.insert(d, rank as u64);
        }
    }
    Ok(PoincarePolynomial { coefficients })
}

fn classical_rank<B: Ord + Clone>(elements: &[ClassicalElement<B>]) -> usize {
    let mut index: BTreeMap<B, usize> = BTreeMap::new();
    let vectors = elements
        .iter()
        .map(|e| {
            let keys = e
                .terms()
                .map(|(b, _)| {
                    let n = index.len();
                    *index.entry(b.clone()).or_insert(n)
                })
                .collect();
            SparseVec::from_keys(keys)
        })
        .collect();
    Echelon::new(vectors).rank()
}

/// Comparison of a truncated polynomial presentation `Z/2[β_i]/(β_i^{e_i})`
/// with the classical cohomology of `SO(p)` as seen through `ψ`.
#[derive(Clone, Debug, Serialize)]
pub struct TruncatedPresentationReport {
    pub p: u32,
    /// `(i, e_i)` pairs.
    pub presentation: Vec<(u32, u32)>,
    /// `∏ e_i`.
    pub presentation_dimension: u64,
    pub classical_dimension: u64,
    pub psi_image_dimension: u64,
    /// Relations `β_i^{e_i} = 0` that fail after `ψ`, with the computed power.
    pub failed_relations: Vec<(String, String)>,
    pub flagged: bool,
}

/// Checks a claimed presentation of `ψ(H(SO(p, ⌊p/2⌋)))`.
pub fn truncated_presentation_check(
    group: &RotationGroup,
    presentation: &[(u32, u32)],
) -> Result<TruncatedPresentationReport> {
    let p = group.p();
    let presentation_dimension = presentation.iter().map(|&(_, e)| u64::from(e)).product();
    let classical_dimension = classical_poincare(ClassicalSpace::Rotation(p)).eval_at_one();
    let psi_image_dimension = psi_image_poincare(group)?.eval_at_one();
    let mut failed_relations = Vec::new();
    for &(i, e) in presentation {
        let power = group.pow(&group.generator(i)?, e)?;
        let image = psi_element(group, &power);
        if !image.is_zero() {
            failed_relations.push((format!("B{i}^{e}"), image.to_string()));
        }
    }
    let flagged = presentation_dimension != classical_dimension
        || psi_image_dimension != classical_dimension
        || !failed_relations.is_empty();
    Ok(TruncatedPresentationReport {
        p,
        presentation: presentation.to_vec(),
        presentation_dimension,
        classical_dimension,
        psi_image_dimension,
        failed_relations,
        flagged,
    })
}

/// Independent classical product in `H*(SO(n); Z/2)` on the basis `β_I`:
/// `β_i β_J = β_{J∪i}` if `i ∉ J`, else `β_{2i} β_{J∖i}`, zero once an
/// index reaches `n`.
pub fn classical_so_product(
    n: u32,
    x: AdmissibleSequence,
    y: AdmissibleSequence,
) -> Option<AdmissibleSequence> {
    let mut acc = y;
    for i in x.indices() {
        acc = insert_index(n, i, acc)?;
    }
    Some(acc)
}

fn insert_index(n: u32, i: u32, s: AdmissibleSequence) -> Option<AdmissibleSequence> {
    if i >= n {
        return None;
    }
    if !s.contains(i) {
        return Some(s.union(AdmissibleSequence::generator(i)));
    }
    insert_index(n, 2 * i, s.without(i))
}

/// A bidegree where `im(·ρ) ≠ ker(ψ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesFailure {
    pub p: i64,
    pub q: i64,
    pub im_dim: usize,
    pub ker_dim: usize,
    /// Whether some `ρx` has nonzero `ψ`.
    pub not_contained: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LesReport {
    pub space: String,
    pub checked: Vec<(i64, i64)>,
    pub failures: Vec<LesFailure>,
}

impl LesReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// The window `[-3, top+3] × [-top-4, top+4]`, which contains every
/// bidegree where the top cone of a generator meets the bottom cone of
/// another.
pub fn standard_window(top_dim: i64) -> Window {
    Window::new(-3, top_dim + 3, -top_dim - 4, top_dim + 4).expect("nonempty window")
}

/// Checks `im(·ρ) = ker(ψ)` in `H^{p+1,q+1}` for every `(p, q)` in `window`.
pub fn les_exactness_check<A: FreeAlgebra>(space: &A, window: &Window) -> Result<LesReport> {
    let top = space
        .top_dim()
        .ok_or_else(|| Error::Unsupported(format!("{} has an infinite basis", space.name())))?;
    let basis = space.basis_through(top);
    let rho = FreeElement::term(CoeffElement::rho(), space.unit());
    let index: BTreeMap<&A::Basis, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut checked = Vec::new();
    let mut failures = Vec::new();
    for d in window.points() {
        checked.push((d.p, d.q));
        let target = d + BiDegree::new(1, 1);
        // H^{d} and H^{d+(1,1)} have at most one class m·g per generator g
        let source: Vec<FreeElement<A::Basis>> = basis
            .iter()
            .filter_map(|g| {
                ConeMonomial::at(d - space.degree(g)).map(|m| FreeElement::monomial(m, g.clone()))
            })
            .collect();
        let target_basis: Vec<(usize, ConeMonomial)> = basis
            .iter()
            .enumerate()
            .filter_map(|(i, g)| ConeMonomial::at(target - space.degree(g)).map(|m| (i, m)))
            .collect();
        let mut image_vectors = Vec::with_capacity(source.len());
        let mut not_contained = false;
        for x in &source {
            let y = space.mul(&rho, x)?;
            let mut keys = Vec::new();
            for (g, c) in y.terms() {
                let c = c.homogeneous_component(target - space.degree(g));
                if !c.is_zero() {
                    keys.push(index[g]);
                }
            }
            if !psi_element(space, &y).is_zero() {
                not_contained = true;
            }
            image_vectors.push(SparseVec::from_keys(keys));
        }
        let im_dim = Echelon::new(image_vectors).rank();
        let psi_vectors = target_basis
            .iter()
            .map(|&(i, m)| SparseVec::from_keys(if psi_coeff(m) { vec![i] } else { vec![] }))
            .collect();
        let ker_dim = target_basis.len() - Echelon::new(psi_vectors).rank();
        if not_contained || im_dim != ker_dim {
            failures.push(LesFailure {
                p: d.p,
                q: d.q,
                im_dim,
                ker_dim,
                not_contained,
            });
        }
    }
    Ok(LesReport {
        space: space.name(),
        checked,
        failures,
    })
}
