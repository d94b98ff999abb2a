//! Twisted real projective spaces `RP^n_tw`, their Künneth tensor products,
//! and per-bidegree expansion of tensor elements against a family of
//! homogeneous elements.
//!
//! `H(RP^n_tw)` is free on the monomials `a^ε b^j` with `ε ∈ {0,1}` and
//! `ε + 2j <= n`, where `a ∈ (1,1)` and `b ∈ (2,1)`. Such a monomial is
//! determined by its cell dimension `k = ε + 2j`, which sits in bidegree
//! `(k, ⌈k/2⌉)`. Products are reduced with `a² = ρa + τb` and monomials of
//! cell dimension above `n` are dropped; for `n = 1` this leaves `a² = ρa`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::coeff::{BiDegree, CoeffElement, ConeMonomial};
use crate::element::{BasisLabel, FreeAlgebra, FreeElement};
use crate::error::{Error, Result};
use crate::gf2::{Echelon, SparseVec};

/// Dimension of a twisted projective space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RpDim {
    Finite(u32),
    Infinite,
}

impl RpDim {
    fn admits(self, cell: u32) -> bool {
        match self {
            RpDim::Finite(n) => cell <= n,
            RpDim::Infinite => true,
        }
    }
}

impl fmt::Display for RpDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RpDim::Finite(n) => write!(f, "{n}"),
            RpDim::Infinite => f.write_str("inf"),
        }
    }
}

/// The basis monomial `a^ε b^j` of `H(RP^n_tw)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjMonomial {
    cell: u32,
}

impl ProjMonomial {
    pub const ONE: ProjMonomial = ProjMonomial { cell: 0 };
    pub const A: ProjMonomial = ProjMonomial { cell: 1 };
    pub const B: ProjMonomial = ProjMonomial { cell: 2 };

    pub fn new(eps: u32, j: u32) -> Result<Self> {
        if eps > 1 {
            return Err(Error::InvalidArgument(format!(
                "exponent of a must be 0 or 1, got {eps}"
            )));
        }
        Ok(ProjMonomial { cell: eps + 2 * j })
    }

    pub fn from_cell(cell: u32) -> Self {
        ProjMonomial { cell }
    }

    pub fn cell(self) -> u32 {
        self.cell
    }

    /// Exponent of `a`.
    pub fn eps(self) -> u32 {
        self.cell % 2
    }

    /// Exponent of `b`.
    pub fn j(self) -> u32 {
        self.cell / 2
    }

    pub fn degree(self) -> BiDegree {
        BiDegree::twisted_cell(i64::from(self.cell))
    }

    fn render(self, subscript: &str) -> String {
        let mut parts = Vec::new();
        if self.eps() == 1 {
            parts.push(format!("a{subscript}"));
        }
        match self.j() {
            0 => {}
            1 => parts.push(format!("b{subscript}")),
            j => parts.push(format!("b{subscript}^{j}")),
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for ProjMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(""))
    }
}

impl BasisLabel for ProjMonomial {
    fn is_unit(&self) -> bool {
        self.cell == 0
    }
}

pub type ProjElement = FreeElement<ProjMonomial>;

/// Product of the basis monomials with cells `x` and `y` in `RP^n_tw`, as at
/// most two terms `(coefficient, cell)`.
fn cell_product(n: RpDim, x: u32, y: u32) -> impl Iterator<Item = (ConeMonomial, u32)> {
    let eps = x % 2 + y % 2;
    let j = x / 2 + y / 2;
    let terms = if eps < 2 {
        [Some((ConeMonomial::ONE, eps + 2 * j)), None]
    } else {
        [
            Some((ConeMonomial::RHO, 1 + 2 * j)),
            Some((ConeMonomial::TAU, 2 + 2 * j)),
        ]
    };
    terms
        .into_iter()
        .flatten()
        .filter(move |(_, cell)| n.admits(*cell))
}

/// The algebra `H(RP^n_tw)`, `1 <= n <= ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectiveSpace {
    dim: RpDim,
}

impl ProjectiveSpace {
    pub fn new(dim: RpDim) -> Result<Self> {
        if dim == RpDim::Finite(0) {
            return Err(Error::InvalidArgument(
                "RP^0 is a point; need n >= 1".into(),
            ));
        }
        Ok(ProjectiveSpace { dim })
    }

    pub fn finite(n: u32) -> Result<Self> {
        Self::new(RpDim::Finite(n))
    }

    pub fn infinite() -> Self {
        ProjectiveSpace {
            dim: RpDim::Infinite,
        }
    }

    pub fn dim(&self) -> RpDim {
        self.dim
    }

    pub fn a(&self) -> ProjElement {
        ProjElement::basis(ProjMonomial::A)
    }

    pub fn b(&self) -> Result<ProjElement> {
        let b = ProjMonomial::B;
        if !self.contains(&b) {
            return Err(Error::NotInAmbient {
                basis: b.to_string(),
                space: self.name(),
            });
        }
        Ok(ProjElement::basis(b))
    }
}

impl FreeAlgebra for ProjectiveSpace {
    type Basis = ProjMonomial;

    fn name(&self) -> String {
        format!("rp:{}", self.dim)
    }

    fn degree(&self, b: &ProjMonomial) -> BiDegree {
        b.degree()
    }

    fn unit(&self) -> ProjMonomial {
        ProjMonomial::ONE
    }

    fn contains(&self, b: &ProjMonomial) -> bool {
        self.dim.admits(b.cell)
    }

    fn basis_through(&self, max_dim: i64) -> Vec<ProjMonomial> {
        rp_cells(self.dim)
            .take_while(|m| i64::from(m.cell) <= max_dim)
            .collect()
    }

    fn top_dim(&self) -> Option<i64> {
        match self.dim {
            RpDim::Finite(n) => Some(i64::from(n)),
            RpDim::Infinite => None,
        }
    }

    fn mul_basis(&self, x: &ProjMonomial, y: &ProjMonomial) -> Result<ProjElement> {
        let mut out = ProjElement::zero();
        for (c, cell) in cell_product(self.dim, x.cell, y.cell) {
            out.toggle(ProjMonomial::from_cell(cell), c);
        }
        Ok(out)
    }
}

fn rp_cells(dim: RpDim) -> impl Iterator<Item = ProjMonomial> {
    (0u32..)
        .map(ProjMonomial::from_cell)
        .take_while(move |m| dim.admits(m.cell))
}

/// Basis monomials of `H(RP^n_tw)` in order of cell dimension; unbounded
/// for `n = ∞`.
pub fn rp_basis(dim: RpDim) -> Result<impl Iterator<Item = ProjMonomial>> {
    ProjectiveSpace::new(dim)?;
    Ok(rp_cells(dim))
}

pub fn rp_mul(dim: RpDim, x: &ProjElement, y: &ProjElement) -> Result<ProjElement> {
    ProjectiveSpace::new(dim)?.mul(x, y)
}

/// Image under restriction to `RP^n_tw`: drops monomials above cell `n`.
pub fn truncate(x: &ProjElement, n: u32) -> ProjElement {
    x.terms()
        .filter(|(m, _)| m.cell <= n)
        .map(|(m, c)| (*m, c.clone()))
        .collect()
}

/// Largest supported ambient dimension of a tensor factor.
pub const MAX_FACTOR_DIM: u32 = 15;
/// Largest supported number of tensor factors.
pub const MAX_FACTORS: usize = 16;

/// A basis monomial of `H(RP^{n_1}_tw) ⊗ ... ⊗ H(RP^{n_m}_tw)`.
///
/// Both the ambient dimensions and the cell of each factor are packed four
/// bits per factor. Ambients are at least 1, so the number of factors is the
/// number of nonzero ambient nibbles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorMonomial {
    ambients: u64,
    cells: u64,
}

impl TensorMonomial {
    fn nibble(word: u64, i: usize) -> u32 {
        (word >> (4 * i) & 0xf) as u32
    }

    pub fn len(&self) -> usize {
        (0..MAX_FACTORS)
            .take_while(|&i| Self::nibble(self.ambients, i) != 0)
            .count()
    }

    pub fn is_empty(&self) -> bool {
        self.ambients == 0
    }

    pub fn ambient(&self, i: usize) -> u32 {
        Self::nibble(self.ambients, i)
    }

    pub fn cell(&self, i: usize) -> u32 {
        Self::nibble(self.cells, i)
    }

    pub fn factor(&self, i: usize) -> ProjMonomial {
        ProjMonomial::from_cell(self.cell(i))
    }

    fn with_cell(mut self, i: usize, cell: u32) -> Self {
        self.cells &= !(0xf << (4 * i));
        self.cells |= u64::from(cell) << (4 * i);
        self
    }

    pub fn degree(&self) -> BiDegree {
        (0..self.len()).fold(BiDegree::ZERO, |acc, i| acc + self.factor(i).degree())
    }
}

/// Non-unit factors as `a3*b3^2`, joined by `|`; the unit prints as `1`.
impl fmt::Display for TensorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.len())
            .filter(|&i| self.cell(i) != 0)
            .map(|i| self.factor(i).render(&self.ambient(i).to_string()))
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("|"))
        }
    }
}

impl BasisLabel for TensorMonomial {
    fn is_unit(&self) -> bool {
        self.cells == 0
    }
}

pub type TensorElement = FreeElement<TensorMonomial>;

/// The Künneth algebra `⊗_k H(RP^{n_k}_tw)` over the point ring.
///
/// Factor ambients are distinct, so a factor is named by its ambient
/// dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorAlgebra {
    ambients: Vec<u32>,
    packed: u64,
}

impl TensorAlgebra {
    pub fn new(ambients: Vec<u32>) -> Result<Self> {
        if ambients.len() > MAX_FACTORS {
            return Err(Error::Unsupported(format!(
                "at most {MAX_FACTORS} tensor factors"
            )));
        }
        let mut packed = 0u64;
        for (i, &n) in ambients.iter().enumerate() {
            if n == 0 || n > MAX_FACTOR_DIM {
                return Err(Error::Unsupported(format!(
                    "tensor factor RP^{n}: ambient must be between 1 and {MAX_FACTOR_DIM}"
                )));
            }
            if ambients[..i].contains(&n) {
                return Err(Error::InvalidArgument(format!(
                    "repeated tensor factor RP^{n}"
                )));
            }
            packed |= u64::from(n) << (4 * i);
        }
        Ok(TensorAlgebra { ambients, packed })
    }

    pub fn ambients(&self) -> &[u32] {
        &self.ambients
    }

    pub fn factor_index(&self, ambient: u32) -> Option<usize> {
        self.ambients.iter().position(|&n| n == ambient)
    }

    pub fn unit_monomial(&self) -> TensorMonomial {
        TensorMonomial {
            ambients: self.packed,
            cells: 0,
        }
    }

    /// The monomial with the given cell in each factor.
    pub fn monomial(&self, cells: &[u32]) -> Result<TensorMonomial> {
        if cells.len() != self.ambients.len() {
            return Err(Error::AmbientMismatch {
                left: format!("{} cells", cells.len()),
                right: format!("{} factors", self.ambients.len()),
            });
        }
        let mut m = self.unit_monomial();
        for (i, (&c, &n)) in cells.iter().zip(&self.ambients).enumerate() {
            if c > n {
                return Err(Error::NotInAmbient {
                    basis: format!("cell {c}"),
                    space: format!("rp:{n}"),
                });
            }
            m = m.with_cell(i, c);
        }
        Ok(m)
    }

    /// The monomial `x` placed in the factor of ambient `ambient`, `1` elsewhere.
    pub fn embed(&self, ambient: u32, x: ProjMonomial) -> Result<TensorMonomial> {
        let i = self
            .factor_index(ambient)
            .ok_or_else(|| Error::NotInAmbient {
                basis: format!("factor RP^{ambient}"),
                space: self.name(),
            })?;
        if x.cell > ambient {
            return Err(Error::NotInAmbient {
                basis: x.render(&ambient.to_string()),
                space: self.name(),
            });
        }
        Ok(self.unit_monomial().with_cell(i, x.cell))
    }

    /// Calls `emit` once per term of the product of two monomials.
    pub fn mul_monomials(
        &self,
        x: TensorMonomial,
        y: TensorMonomial,
        mut emit: impl FnMut(ConeMonomial, TensorMonomial),
    ) {
        let mut partial: Vec<(u32, u32, TensorMonomial)> = vec![(0, 0, self.unit_monomial())];
        let mut next = Vec::new();
        for (i, &n) in self.ambients.iter().enumerate() {
            let (cx, cy) = (x.cell(i), y.cell(i));
            if cx == 0 || cy == 0 {
                let cell = cx + cy;
                for entry in &mut partial {
                    entry.2 = entry.2.with_cell(i, cell);
                }
                continue;
            }
            next.clear();
            for (c, cell) in cell_product(RpDim::Finite(n), cx, cy) {
                let (dr, dt) = match c {
                    ConeMonomial::Top { rho, tau } => (rho, tau),
                    ConeMonomial::Bot { .. } => {
                        unreachable!("projective relations have top-cone coefficients")
                    }
                };
                next.extend(
                    partial
                        .iter()
                        .map(|&(r, t, m)| (r + dr, t + dt, m.with_cell(i, cell))),
                );
            }
            if next.is_empty() {
                return;
            }
            std::mem::swap(&mut partial, &mut next);
        }
        for (rho, tau, m) in partial {
            emit(ConeMonomial::Top { rho, tau }, m);
        }
    }
}

impl FreeAlgebra for TensorAlgebra {
    type Basis = TensorMonomial;

    fn name(&self) -> String {
        let factors: Vec<String> = self.ambients.iter().map(|n| n.to_string()).collect();
        format!("tensor:{}", factors.join(","))
    }

    fn degree(&self, b: &TensorMonomial) -> BiDegree {
        b.degree()
    }

    fn unit(&self) -> TensorMonomial {
        self.unit_monomial()
    }

    fn contains(&self, b: &TensorMonomial) -> bool {
        b.ambients == self.packed && (0..self.ambients.len()).all(|i| b.cell(i) <= b.ambient(i))
    }

    fn basis_through(&self, max_dim: i64) -> Vec<TensorMonomial> {
        let mut out = vec![self.unit_monomial()];
        for (i, &n) in self.ambients.iter().enumerate() {
            out = out
                .into_iter()
                .flat_map(|m| (0..=n).map(move |c| m.with_cell(i, c)))
                .filter(|m| m.degree().p <= max_dim)
                .collect();
        }
        out.sort();
        out
    }

    fn top_dim(&self) -> Option<i64> {
        Some(self.ambients.iter().map(|&n| i64::from(n)).sum())
    }

    fn mul_basis(&self, x: &TensorMonomial, y: &TensorMonomial) -> Result<TensorElement> {
        let mut out = TensorElement::zero();
        self.mul_monomials(*x, *y, |c, m| out.toggle(m, c));
        Ok(out)
    }

    fn mul(&self, x: &TensorElement, y: &TensorElement) -> Result<TensorElement> {
        self.check(x)?;
        self.check(y)?;
        let mut acc: HashMap<TensorMonomial, CoeffElement> = HashMap::new();
        for (mx, cx) in x.terms() {
            for (my, cy) in y.terms() {
                let c = cx * cy;
                if c.is_zero() {
                    continue;
                }
                self.mul_monomials(*mx, *my, |top, m| {
                    let slot = acc.entry(m).or_default();
                    for term in c.monomials() {
                        if let Some(t) = term.mul(top) {
                            slot.toggle(t);
                        }
                    }
                });
            }
        }
        let sorted: BTreeMap<TensorMonomial, CoeffElement> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(sorted.into_iter().collect())
    }
}

/// Product in a Künneth algebra; the characteristic is 2, so no signs occur.
pub fn tensor_mul(
    algebra: &TensorAlgebra,
    x: &TensorElement,
    y: &TensorElement,
) -> Result<TensorElement> {
    algebra.mul(x, y)
}

/// Coordinates of a homogeneous element in bidegree `d` over the `Z/2` basis
/// `{m·T}`, which is indexed by the tensor monomials `T` alone since each
/// bidegree of the point ring holds at most one monomial `m`.
fn coordinates(x: &TensorElement, d: BiDegree) -> Result<SparseVec<TensorMonomial>> {
    let mut keys = Vec::with_capacity(x.len());
    for (m, c) in x.terms() {
        let expected = ConeMonomial::at(d - m.degree());
        match (c.len(), expected) {
            (1, Some(e)) if c.contains(e) => keys.push(*m),
            _ => return Err(Error::Inhomogeneous),
        }
    }
    Ok(SparseVec::from_keys(keys))
}

/// The span over the point ring of a family of homogeneous tensor elements,
/// restricted to one bidegree.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    degree: BiDegree,
    family_len: usize,
    /// `(family index, multiplier)` for each column.
    columns: Vec<(usize, ConeMonomial)>,
    echelon: Echelon<TensorMonomial>,
}

impl SpanSolver {
    /// `family` lists each element with its bidegree; zero elements have no
    /// column.
    pub fn new(family: &[(BiDegree, &TensorElement)], d: BiDegree) -> Result<Self> {
        let mut columns = Vec::new();
        let mut vectors = Vec::new();
        for (i, (e, x)) in family.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let Some(m) = ConeMonomial::at(d - *e) else {
                continue;
            };
            let scaled = x.scale(&m.into());
            columns.push((i, m));
            vectors.push(coordinates(&scaled, d)?);
        }
        Ok(SpanSolver {
            degree: d,
            family_len: family.len(),
            columns,
            echelon: Echelon::new(vectors),
        })
    }

    pub fn degree(&self) -> BiDegree {
        self.degree
    }

    /// Whether the family is linearly independent over the point ring in this
    /// bidegree.
    pub fn is_independent(&self) -> bool {
        self.echelon.is_independent()
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// Point-ring coefficients `c_i`, homogeneous of degree `d - deg(x_i)`,
    /// with `Σ c_i x_i = target`.
    pub fn solve(&self, target: &TensorElement) -> Result<Vec<CoeffElement>> {
        let mut out = vec![CoeffElement::zero(); self.family_len];
        if target.is_zero() {
            return Ok(out);
        }
        let comb = self
            .echelon
            .solve(coordinates(target, self.degree)?)
            .ok_or(Error::NotInSpan)?;
        for col in comb.iter() {
            let (i, m) = self.columns[col];
            out[i].toggle(m);
        }
        Ok(out)
    }
}

/// Expresses a homogeneous `target` as a point-ring combination of `basis`.
///
/// The solution is unique when `basis` is independent in the target's
/// bidegree. A zero target gets zero coordinates.
pub fn expand_in_basis(
    algebra: &TensorAlgebra,
    basis: &[TensorElement],
    target: &TensorElement,
) -> Result<Vec<CoeffElement>> {
    algebra.check(target)?;
    let mut family = Vec::with_capacity(basis.len());
    for x in basis {
        algebra.check(x)?;
        let d = if x.is_zero() {
            BiDegree::ZERO
        } else {
            algebra.degree_of(x).ok_or(Error::Inhomogeneous)?
        };
        family.push((d, x));
    }
    if target.is_zero() {
        return Ok(vec![CoeffElement::zero(); basis.len()]);
    }
    let d = algebra.degree_of(target).ok_or(Error::Inhomogeneous)?;
    SpanSolver::new(&family, d)?.solve(target)
}
