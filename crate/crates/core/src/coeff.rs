//! Arithmetic in the cohomology ring of a point with constant `Z/2`
//! coefficients.
//!
//! The ring is bigraded by `(p, q)`. Its nonzero groups fill two cones, each
//! lattice point carrying a single `Z/2`:
//!
//! * the top cone `p >= 0, q >= p`, a polynomial algebra on `ρ ∈ (1,1)` and
//!   `τ ∈ (0,1)`;
//! * the bottom cone `p <= 0, q <= p - 2`, spanned by the classes
//!   `θ/(ρ^a τ^b)`, where `θ ∈ (0,-2)`.
//!
//! Because every bidegree holds at most one nonzero class, a homogeneous
//! element is either zero or a single [`ConeMonomial`].

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A bidegree `(p, q)`: topological degree and weight.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct BiDegree {
    pub p: i64,
    pub q: i64,
}

impl BiDegree {
    pub const ZERO: BiDegree = BiDegree { p: 0, q: 0 };

    pub const fn new(p: i64, q: i64) -> Self {
        BiDegree { p, q }
    }

    /// The bidegree `(k, ⌈k/2⌉)` of the `k`-cell of a twisted projective space.
    pub const fn twisted_cell(k: i64) -> Self {
        BiDegree {
            p: k,
            q: (k + 1).div_euclid(2),
        }
    }
}

impl Add for BiDegree {
    type Output = BiDegree;
    fn add(self, rhs: BiDegree) -> BiDegree {
        BiDegree::new(self.p + rhs.p, self.q + rhs.q)
    }
}

impl AddAssign for BiDegree {
    fn add_assign(&mut self, rhs: BiDegree) {
        self.p += rhs.p;
        self.q += rhs.q;
    }
}

impl Sub for BiDegree {
    type Output = BiDegree;
    fn sub(self, rhs: BiDegree) -> BiDegree {
        BiDegree::new(self.p - rhs.p, self.q - rhs.q)
    }
}

impl Neg for BiDegree {
    type Output = BiDegree;
    fn neg(self) -> BiDegree {
        BiDegree::new(-self.p, -self.q)
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Dimension over `Z/2` of the point ring at `d` (0 or 1).
pub fn dim_at(d: BiDegree) -> u32 {
    u32::from(ConeMonomial::at(d).is_some())
}

/// Dimension over `Z/2` of the cohomology of the free orbit at `d`.
///
/// That ring is a Laurent polynomial ring on a class `t ∈ (0,1)`, so it is
/// one-dimensional exactly along the line `p = 0`.
pub fn orbit_dim_at(d: BiDegree) -> u32 {
    u32::from(d.p == 0)
}

/// A monomial of the point ring.
///
/// `Top { rho: a, tau: b }` is `ρ^a τ^b` in bidegree `(a, a+b)`;
/// `Bot { rho: a, tau: b }` is `θ/(ρ^a τ^b)` in bidegree `(-a, -a-b-2)`.
/// The derived order (top before bottom, then `(a, b)` lexicographically) is
/// the canonical serialization order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConeMonomial {
    Top { rho: u32, tau: u32 },
    Bot { rho: u32, tau: u32 },
}

impl ConeMonomial {
    pub const ONE: ConeMonomial = ConeMonomial::Top { rho: 0, tau: 0 };
    pub const RHO: ConeMonomial = ConeMonomial::Top { rho: 1, tau: 0 };
    pub const TAU: ConeMonomial = ConeMonomial::Top { rho: 0, tau: 1 };
    pub const THETA: ConeMonomial = ConeMonomial::Bot { rho: 0, tau: 0 };

    pub fn degree(self) -> BiDegree {
        match self {
            ConeMonomial::Top { rho, tau } => {
                let (a, b) = (i64::from(rho), i64::from(tau));
                BiDegree::new(a, a + b)
            }
            ConeMonomial::Bot { rho, tau } => {
                let (a, b) = (i64::from(rho), i64::from(tau));
                BiDegree::new(-a, -a - b - 2)
            }
        }
    }

    /// The unique monomial in bidegree `d`, if the group there is nonzero.
    pub fn at(d: BiDegree) -> Option<ConeMonomial> {
        if d.p >= 0 && d.q >= d.p {
            Some(ConeMonomial::Top {
                rho: u32::try_from(d.p).ok()?,
                tau: u32::try_from(d.q - d.p).ok()?,
            })
        } else if d.p <= 0 && d.q <= d.p - 2 {
            Some(ConeMonomial::Bot {
                rho: u32::try_from(-d.p).ok()?,
                tau: u32::try_from(d.p - d.q - 2).ok()?,
            })
        } else {
            None
        }
    }

    pub fn is_top(self) -> bool {
        matches!(self, ConeMonomial::Top { .. })
    }

    /// Product of two monomials, `None` when it vanishes.
    ///
    /// Top-cone monomials multiply as polynomials and divide bottom-cone
    /// classes. The product of two bottom-cone classes is zero; see
    /// [`bottom_product`].
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: ConeMonomial) -> Option<ConeMonomial> {
        use ConeMonomial::*;
        match (self, other) {
            (Top { rho: a, tau: b }, Top { rho: c, tau: d }) => Some(Top {
                rho: a + c,
                tau: b + d,
            }),
            (Top { rho: c, tau: d }, Bot { rho: a, tau: b })
            | (Bot { rho: a, tau: b }, Top { rho: c, tau: d }) => {
                if a >= c && b >= d {
                    Some(Bot {
                        rho: a - c,
                        tau: b - d,
                    })
                } else {
                    None
                }
            }
            (Bot { .. }, Bot { .. }) => bottom_product(self, other),
        }
    }
}

/// The product rule for two bottom-cone classes. It is always zero.
pub fn bottom_product(_x: ConeMonomial, _y: ConeMonomial) -> Option<ConeMonomial> {
    None
}

impl fmt::Display for ConeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConeMonomial::Top { rho: 0, tau: 0 } => f.write_str("1"),
            ConeMonomial::Top { rho, tau } => f.write_str(&rho_tau(rho, tau)),
            ConeMonomial::Bot { rho: 0, tau: 0 } => f.write_str("th"),
            ConeMonomial::Bot { rho, tau } => write!(f, "th/({})", rho_tau(rho, tau)),
        }
    }
}

fn rho_tau(rho: u32, tau: u32) -> String {
    let power = |sym: &str, e: u32| match e {
        0 => None,
        1 => Some(sym.to_string()),
        e => Some(format!("{sym}^{e}")),
    };
    [power("r", rho), power("t", tau)]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join(" ")
}

/// An element of the point ring: a `Z/2` formal sum of distinct monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoeffElement {
    support: BTreeSet<ConeMonomial>,
}

impl CoeffElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        ConeMonomial::ONE.into()
    }

    pub fn rho() -> Self {
        ConeMonomial::RHO.into()
    }

    pub fn tau() -> Self {
        ConeMonomial::TAU.into()
    }

    pub fn theta() -> Self {
        ConeMonomial::THETA.into()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.support.len() == 1 && self.support.contains(&ConeMonomial::ONE)
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Monomials in canonical order.
    pub fn monomials(&self) -> impl Iterator<Item = ConeMonomial> + '_ {
        self.support.iter().copied()
    }

    pub fn contains(&self, m: ConeMonomial) -> bool {
        self.support.contains(&m)
    }

    /// Adds `m` with `Z/2` cancellation.
    pub fn toggle(&mut self, m: ConeMonomial) {
        if !self.support.remove(&m) {
            self.support.insert(m);
        }
    }

    /// The bidegree of a nonzero homogeneous element.
    pub fn degree(&self) -> Option<BiDegree> {
        let mut degrees = self.support.iter().map(|m| m.degree());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn homogeneous_component(&self, d: BiDegree) -> CoeffElement {
        self.support
            .iter()
            .copied()
            .filter(|m| m.degree() == d)
            .collect()
    }

    pub fn mul_monomial(&self, m: ConeMonomial) -> CoeffElement {
        self.support.iter().filter_map(|x| x.mul(m)).collect()
    }
}

/// Bilinear product in the point ring.
pub fn coeff_mul(x: &CoeffElement, y: &CoeffElement) -> CoeffElement {
    let mut out = CoeffElement::zero();
    for a in &x.support {
        for b in &y.support {
            if let Some(m) = a.mul(*b) {
                out.toggle(m);
            }
        }
    }
    out
}

impl From<ConeMonomial> for CoeffElement {
    fn from(m: ConeMonomial) -> Self {
        CoeffElement {
            support: BTreeSet::from([m]),
        }
    }
}

/// Collects with `Z/2` cancellation, so repeated monomials pair off.
impl FromIterator<ConeMonomial> for CoeffElement {
    fn from_iter<I: IntoIterator<Item = ConeMonomial>>(iter: I) -> Self {
        let mut out = CoeffElement::zero();
        for m in iter {
            out.toggle(m);
        }
        out
    }
}

impl AddAssign<&CoeffElement> for CoeffElement {
    fn add_assign(&mut self, rhs: &CoeffElement) {
        for m in &rhs.support {
            self.toggle(*m);
        }
    }
}

impl Add for &CoeffElement {
    type Output = CoeffElement;
    fn add(self, rhs: &CoeffElement) -> CoeffElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Mul for &CoeffElement {
    type Output = CoeffElement;
    fn mul(self, rhs: &CoeffElement) -> CoeffElement {
        coeff_mul(self, rhs)
    }
}

impl fmt::Display for CoeffElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.support.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}
