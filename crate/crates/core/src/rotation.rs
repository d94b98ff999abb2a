//! Cohomology of the rotation groups `SO(p, q)` with `q = ⌊p/2⌋`.
//!
//! Additively the cohomology is free on classes `β_I`, one per admissible
//! sequence `p > i_1 > ... > i_m > 0`. Multiplication is computed through the
//! injective ring map
//!
//! ```text
//! ω*: H(SO(p,q)) → H(RP^{p-1}_tw) ⊗ ... ⊗ H(RP^1_tw)
//! ```
//!
//! which sends the generator `β_i` to `Σ_{j>=i} c_i^{(j)}`, where `c_i^{(j)}`
//! is the `i`-cell monomial (`a b^{(i-1)/2}` or `b^{i/2}`) of the factor
//! `RP^j_tw`, and `β_I` to the product of its generators' images. A product
//! `β_I β_J` is the unique point-ring combination of the `ω*(β_K)` equal to
//! `ω*(β_I) ω*(β_J)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use crate::coeff::{BiDegree, CoeffElement};
use crate::element::{BasisLabel, FreeAlgebra, FreeElement};
use crate::error::{Error, Result};
use crate::grading::FreeModule;
use crate::projective::{ProjMonomial, SpanSolver, TensorAlgebra, TensorElement, MAX_FACTOR_DIM};

/// Largest `p` for which an index set fits the bitmask representation.
pub const MAX_INDEX_P: u32 = 32;

/// Largest `p` for which the ring structure can be computed.
pub const MAX_RING_P: u32 = MAX_FACTOR_DIM + 1;

/// A strictly decreasing sequence of positive indices. The empty sequence
/// is the unit class.
///
/// Stored as a bitmask with bit `i` set when `i` occurs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AdmissibleSequence(u32);

impl AdmissibleSequence {
    pub const EMPTY: AdmissibleSequence = AdmissibleSequence(0);

    /// Validates that `indices` are positive and strictly decreasing.
    pub fn new(indices: &[u32]) -> Result<Self> {
        let mut mask = 0u32;
        for (k, &i) in indices.iter().enumerate() {
            if i == 0 || i >= MAX_INDEX_P {
                return Err(Error::InvalidArgument(format!("index {i} out of range")));
            }
            if k > 0 && indices[k - 1] <= i {
                return Err(Error::InvalidArgument(format!(
                    "sequence {indices:?} is not strictly decreasing"
                )));
            }
            mask |= 1 << i;
        }
        Ok(AdmissibleSequence(mask))
    }

    /// The sequence listing the given distinct indices in decreasing order.
    pub fn from_set(indices: &[u32]) -> Result<Self> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(&sorted)
    }

    pub fn generator(i: u32) -> Self {
        assert!(i > 0 && i < MAX_INDEX_P);
        AdmissibleSequence(1 << i)
    }

    pub fn from_mask(mask: u32) -> Self {
        AdmissibleSequence(mask & !1)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    /// Indices in decreasing order.
    pub fn indices(self) -> Vec<u32> {
        (1..MAX_INDEX_P)
            .rev()
            .filter(|&i| self.contains(i))
            .collect()
    }

    pub fn contains(self, i: u32) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        AdmissibleSequence(self.0 | other.0)
    }

    pub fn max_index(self) -> Option<u32> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros())
    }

    pub fn without(self, i: u32) -> Self {
        AdmissibleSequence(self.0 & !(1 << i))
    }

    /// `Σ (i, ⌈i/2⌉)` over the indices.
    pub fn degree(self) -> BiDegree {
        self.indices().into_iter().fold(BiDegree::ZERO, |acc, i| {
            acc + BiDegree::twisted_cell(i64::from(i))
        })
    }

    /// Whether all indices lie below `p`.
    pub fn valid_for(self, p: u32) -> bool {
        p >= MAX_INDEX_P || self.0 >> p == 0
    }
}

/// `B[i1,i2,...]`, with `B[0]` for the unit.
impl fmt::Display for AdmissibleSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("B[0]");
        }
        let parts: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "B[{}]", parts.join(","))
    }
}

impl BasisLabel for AdmissibleSequence {
    fn is_unit(&self) -> bool {
        self.is_empty()
    }
}

pub type RotElement = FreeElement<AdmissibleSequence>;

fn check_p(p: u32) -> Result<()> {
    if p < 2 {
        return Err(Error::InvalidArgument(format!(
            "SO(p,q) needs p >= 2, got {p}"
        )));
    }
    if p > MAX_INDEX_P {
        return Err(Error::Unsupported(format!("p = {p} exceeds {MAX_INDEX_P}")));
    }
    Ok(())
}

/// All `2^{p-1}` admissible sequences for `SO(p, ⌊p/2⌋)`, in canonical order.
pub fn admissible_sequences(p: u32) -> Result<Vec<AdmissibleSequence>> {
    check_p(p)?;
    Ok((0u64..1 << (p - 1))
        .map(|m| AdmissibleSequence((m as u32) << 1))
        .collect())
}

/// Generators of `H(SO(p, ⌊p/2⌋))` as a free module, one per cell.
pub fn so_generators(p: u32) -> Result<FreeModule> {
    let gens = admissible_sequences(p)?
        .into_iter()
        .map(|s| (s.to_string(), s.degree()))
        .collect();
    FreeModule::new(gens)
}

/// The smallest power of two `n` with `i·n >= p`, for `2 <= i < p`.
pub fn exponent_bound(i: u32, p: u32) -> Result<u32> {
    if i < 2 || i >= p {
        return Err(Error::InvalidArgument(format!(
            "exponent bound needs 2 <= i < p, got i={i}, p={p}"
        )));
    }
    let mut n = 1;
    while i * n < p {
        n *= 2;
    }
    Ok(n)
}

/// `H(SO(p, ⌊p/2⌋))` with multiplication computed through `ω*`.
///
/// Generator images, per-bidegree solvers and basis products are cached on
/// first use. The caches are write-once: racing threads compute the same
/// value and whichever insertion lands first is kept.
pub struct RotationGroup {
    p: u32,
    tensor: TensorAlgebra,
    images: OnceLock<Vec<TensorElement>>,
    solvers: RwLock<HashMap<BiDegree, Arc<SpanSolver>>>,
    products: RwLock<HashMap<(AdmissibleSequence, AdmissibleSequence), RotElement>>,
}

impl fmt::Debug for RotationGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RotationGroup")
            .field("p", &self.p)
            .finish_non_exhaustive()
    }
}

impl RotationGroup {
    pub fn new(p: u32) -> Result<Self> {
        check_p(p)?;
        if p > MAX_RING_P {
            return Err(Error::Unsupported(format!(
                "ring structure of SO({p}) needs p <= {MAX_RING_P}"
            )));
        }
        let tensor = TensorAlgebra::new((1..p).rev().collect())?;
        Ok(RotationGroup {
            p,
            tensor,
            images: OnceLock::new(),
            solvers: RwLock::new(HashMap::new()),
            products: RwLock::new(HashMap::new()),
        })
    }

    /// Only the weight `q = ⌊p/2⌋` is supported.
    pub fn with_weight(p: u32, q: u32) -> Result<Self> {
        if q != p / 2 {
            return Err(Error::Unsupported(format!(
                "SO({p},{q}): only q = floor(p/2) = {} is supported",
                p / 2
            )));
        }
        Self::new(p)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.p / 2
    }

    /// The Künneth algebra `H(RP^{p-1}_tw) ⊗ ... ⊗ H(RP^1_tw)`.
    pub fn tensor(&self) -> &TensorAlgebra {
        &self.tensor
    }

    pub fn generator(&self, i: u32) -> Result<RotElement> {
        if i == 0 || i >= self.p {
            return Err(Error::NotInAmbient {
                basis: format!("B{i}"),
                space: self.name(),
            });
        }
        Ok(RotElement::basis(AdmissibleSequence::generator(i)))
    }

    /// Basis class `β_I`.
    pub fn class(&self, indices: &[u32]) -> Result<RotElement> {
        let s = AdmissibleSequence::from_set(indices)?;
        if !self.contains(&s) {
            return Err(Error::NotInAmbient {
                basis: s.to_string(),
                space: self.name(),
            });
        }
        Ok(RotElement::basis(s))
    }

    fn generator_image(&self, i: u32) -> TensorElement {
        let cell = ProjMonomial::from_cell(i);
        (i..self.p)
            .map(|j| {
                (
                    self.tensor
                        .embed(j, cell)
                        .expect("cell i fits RP^j for j >= i"),
                    CoeffElement::one(),
                )
            })
            .collect()
    }

    fn images(&self) -> &[TensorElement] {
        self.images.get_or_init(|| {
            let count = 1usize << (self.p - 1);
            let gens: Vec<TensorElement> = (0..self.p)
                .map(|i| {
                    if i == 0 {
                        TensorElement::zero()
                    } else {
                        self.generator_image(i)
                    }
                })
                .collect();
            let mut out: Vec<TensorElement> = Vec::with_capacity(count);
            out.push(TensorElement::basis(self.tensor.unit_monomial()));
            for idx in 1..count {
                let s = AdmissibleSequence((idx as u32) << 1);
                let top = s.max_index().expect("nonempty");
                let rest = s.without(top).mask() >> 1;
                let img = self
                    .tensor
                    .mul(&out[rest as usize], &gens[top as usize])
                    .expect("images live in the tensor algebra");
                out.push(img);
            }
            out
        })
    }

    /// `ω*(β_I)`.
    pub fn image(&self, s: AdmissibleSequence) -> Result<&TensorElement> {
        if !self.contains(&s) {
            return Err(Error::NotInAmbient {
                basis: s.to_string(),
                space: self.name(),
            });
        }
        Ok(&self.images()[(s.mask() >> 1) as usize])
    }

    /// `ω*` extended linearly over the point ring.
    pub fn omega_star(&self, x: &RotElement) -> Result<TensorElement> {
        self.check(x)?;
        let mut out = TensorElement::zero();
        for (s, c) in x.terms() {
            out.add_assign(&self.image(*s)?.scale(c));
        }
        Ok(out)
    }

    /// Solver for the span of all `ω*(β_K)` in bidegree `d`.
    pub fn solver(&self, d: BiDegree) -> Result<Arc<SpanSolver>> {
        if let Some(s) = self.solvers.read().expect("solver cache poisoned").get(&d) {
            return Ok(s.clone());
        }
        let basis = self.basis_through(i64::MAX);
        let images = self.images();
        let family: Vec<(BiDegree, &TensorElement)> = basis
            .iter()
            .map(|s| (s.degree(), &images[(s.mask() >> 1) as usize]))
            .collect();
        let solver = Arc::new(SpanSolver::new(&family, d)?);
        let mut cache = self.solvers.write().expect("solver cache poisoned");
        Ok(cache.entry(d).or_insert(solver).clone())
    }

    /// Writes a tensor element in the image of `ω*` back as an element of
    /// `H(SO(p,q))`. Fails with [`Error::NotInSpan`] outside the image.
    pub fn pull_back(&self, target: &TensorElement) -> Result<RotElement> {
        if target.is_zero() {
            return Ok(RotElement::zero());
        }
        let d = self.tensor.degree_of(target).ok_or(Error::Inhomogeneous)?;
        let coords = self.solver(d)?.solve(target)?;
        let basis = self.basis_through(i64::MAX);
        Ok(basis.into_iter().zip(coords).collect())
    }

    /// Number of basis products computed so far.
    pub fn cached_products(&self) -> usize {
        self.products.read().expect("product cache poisoned").len()
    }

    /// Recomputes every cached product from scratch and reports the first
    /// disagreement.
    pub fn validate_cache(&self) -> Result<()> {
        let entries: Vec<_> = self
            .products
            .read()
            .expect("product cache poisoned")
            .iter()
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        for ((x, y), cached) in entries {
            let fresh = self.compute_product(x, y)?;
            if fresh != cached {
                return Err(Error::Consistency(format!(
                    "cached {x}*{y} = {cached}, recomputed {fresh}"
                )));
            }
        }
        Ok(())
    }

    /// Bidegrees among `degrees` where the family `{ω*(β_K)}` has a
    /// point-ring linear relation.
    pub fn dependent_bidegrees(
        &self,
        degrees: impl IntoIterator<Item = BiDegree>,
    ) -> Result<Vec<BiDegree>> {
        let mut out = Vec::new();
        for d in degrees {
            if !self.solver(d)?.is_independent() {
                out.push(d);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Generator pairs `(i, j)` where `ω*(β_i β_j) ≠ ω*(β_i) ω*(β_j)`.
    pub fn ring_map_failures(&self) -> Result<Vec<(u32, u32)>> {
        let mut out = Vec::new();
        for i in 1..self.p {
            for j in i..self.p {
                let (x, y) = (self.generator(i)?, self.generator(j)?);
                let lhs = self.omega_star(&self.mul(&x, &y)?)?;
                let rhs = self
                    .tensor
                    .mul(&self.omega_star(&x)?, &self.omega_star(&y)?)?;
                if lhs != rhs {
                    out.push((i, j));
                }
            }
        }
        Ok(out)
    }

    fn compute_product(&self, x: AdmissibleSequence, y: AdmissibleSequence) -> Result<RotElement> {
        let images = self.images();
        let target = self.tensor.mul(
            &images[(x.mask() >> 1) as usize],
            &images[(y.mask() >> 1) as usize],
        )?;
        self.pull_back(&target).map_err(|e| match e {
            Error::NotInSpan => Error::Consistency(format!(
                "ω*({x})·ω*({y}) is not in the image of ω* for SO({})",
                self.p
            )),
            other => other,
        })
    }
}

impl FreeAlgebra for RotationGroup {
    type Basis = AdmissibleSequence;

    fn name(&self) -> String {
        format!("so:{}", self.p)
    }

    fn degree(&self, b: &AdmissibleSequence) -> BiDegree {
        b.degree()
    }

    fn unit(&self) -> AdmissibleSequence {
        AdmissibleSequence::EMPTY
    }

    fn contains(&self, b: &AdmissibleSequence) -> bool {
        b.valid_for(self.p) && !b.contains(0)
    }

    fn basis_through(&self, max_dim: i64) -> Vec<AdmissibleSequence> {
        admissible_sequences(self.p)
            .expect("p validated at construction")
            .into_iter()
            .filter(|s| s.degree().p <= max_dim)
            .collect()
    }

    fn top_dim(&self) -> Option<i64> {
        Some(i64::from(self.p) * i64::from(self.p - 1) / 2)
    }

    fn mul_basis(&self, x: &AdmissibleSequence, y: &AdmissibleSequence) -> Result<RotElement> {
        for s in [x, y] {
            if !self.contains(s) {
                return Err(Error::NotInAmbient {
                    basis: s.to_string(),
                    space: self.name(),
                });
            }
        }
        if x.is_empty() {
            return Ok(RotElement::basis(*y));
        }
        if y.is_empty() {
            return Ok(RotElement::basis(*x));
        }
        let key = if x <= y { (*x, *y) } else { (*y, *x) };
        if let Some(v) = self
            .products
            .read()
            .expect("product cache poisoned")
            .get(&key)
        {
            return Ok(v.clone());
        }
        let value = self.compute_product(key.0, key.1)?;
        let mut cache = self.products.write().expect("product cache poisoned");
        Ok(cache.entry(key).or_insert(value).clone())
    }
}

pub fn so_mul(group: &RotationGroup, x: &RotElement, y: &RotElement) -> Result<RotElement> {
    group.mul(x, y)
}

/// One relation of the closed-form presentation, checked against the
/// `ω*` oracle.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    /// E.g. `B3^2` or `B2^4`.
    pub relation: String,
    pub claimed: String,
    pub oracle: String,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationReport {
    pub p: u32,
    pub relations: Vec<RelationCheck>,
}

impl PresentationReport {
    pub fn all_match(&self) -> bool {
        self.relations.iter().all(|r| r.matches)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &RelationCheck> {
        self.relations.iter().filter(|r| !r.matches)
    }
}

impl fmt::Display for PresentationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SO({},{}) presentation check", self.p, self.p / 2)?;
        for r in &self.relations {
            let mark = if r.matches { "ok      " } else { "MISMATCH" };
            writeln!(
                f,
                "  {mark} {} : claimed {} ; oracle {}",
                r.relation, r.claimed, r.oracle
            )?;
        }
        Ok(())
    }
}

/// Default bound on `p` for presentation checks.
pub const DEFAULT_CHECK_MAX_P: u32 = 8;

/// Compares the closed-form presentation against products computed through
/// `ω*`: `β_1² = ρβ_1 + τβ_2`; `β_i² = β_{2i}` for `i > 1`, read as zero when
/// `2i >= p`; and `β_i^{n_i} = 0` for `i = 2` and odd `i >= 3`.
pub fn check_presentation(group: &RotationGroup) -> Result<PresentationReport> {
    let p = group.p();
    let gen = |i: u32| -> RotElement {
        if i < p {
            RotElement::basis(AdmissibleSequence::generator(i))
        } else {
            RotElement::zero()
        }
    };
    let mut relations = Vec::new();
    for i in 1..p {
        let b = gen(i);
        let claimed = if i == 1 {
            b.scale(&CoeffElement::rho())
                .sum(&gen(2).scale(&CoeffElement::tau()))
        } else {
            gen(2 * i)
        };
        let oracle = group.mul(&b, &b)?;
        relations.push(RelationCheck {
            relation: format!("B{i}^2"),
            claimed: claimed.to_string(),
            oracle: oracle.to_string(),
            matches: claimed == oracle,
        });
    }
    for i in 2..p {
        if i != 2 && i % 2 == 0 {
            continue;
        }
        let n = exponent_bound(i, p)?;
        if n == 2 {
            // already covered by the square relation
            continue;
        }
        let oracle = group.pow(&gen(i), n)?;
        relations.push(RelationCheck {
            relation: format!("B{i}^{n}"),
            claimed: "0".into(),
            oracle: oracle.to_string(),
            matches: oracle.is_zero(),
        });
    }
    Ok(PresentationReport { p, relations })
}
