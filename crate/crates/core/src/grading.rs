//! Free-module bookkeeping: generator lists, Betti numbers per bidegree, the
//! collapsed Künneth formula for free modules, and the cohomology of spheres.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::coeff::{dim_at, BiDegree, CoeffElement};
use crate::element::{BasisLabel, FreeAlgebra, FreeElement};
use crate::error::{Error, Result};

/// A free module over the point ring, given by labelled generators.
///
/// Comparisons ignore labels and order: two modules are isomorphic exactly
/// when their generator-degree multisets agree.
#[derive(Clone, Debug, Default, Serialize)]
pub struct FreeModule {
    generators: Vec<(String, BiDegree)>,
}

impl FreeModule {
    /// Builds a module, rejecting duplicate labels.
    pub fn new(generators: Vec<(String, BiDegree)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (label, _) in &generators {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate generator label {label}"
                )));
            }
        }
        Ok(FreeModule { generators })
    }

    /// The module with the given generator degrees, labelled `g0, g1, ...`.
    pub fn from_degrees(degrees: impl IntoIterator<Item = BiDegree>) -> Self {
        FreeModule {
            generators: degrees
                .into_iter()
                .enumerate()
                .map(|(i, d)| (format!("g{i}"), d))
                .collect(),
        }
    }

    /// The point ring itself.
    pub fn point() -> Self {
        FreeModule {
            generators: vec![("1".to_string(), BiDegree::ZERO)],
        }
    }

    pub fn generators(&self) -> &[(String, BiDegree)] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Generator degrees, sorted.
    pub fn degree_multiset(&self) -> Vec<BiDegree> {
        let mut out: Vec<BiDegree> = self.generators.iter().map(|(_, d)| *d).collect();
        out.sort();
        out
    }

    /// Number of generators in each topological degree.
    pub fn topological_counts(&self) -> BTreeMap<i64, u64> {
        let mut out = BTreeMap::new();
        for (_, d) in &self.generators {
            *out.entry(d.p).or_insert(0) += 1;
        }
        out
    }
}

/// `Z/2`-dimension of the module in bidegree `d`.
pub fn betti(m: &FreeModule, d: BiDegree) -> u32 {
    m.generators.iter().map(|(_, g)| dim_at(d - *g)).sum()
}

/// Generator labels contributing a class in bidegree `d`.
pub fn contributors(m: &FreeModule, d: BiDegree) -> Vec<&str> {
    m.generators
        .iter()
        .filter(|(_, g)| dim_at(d - *g) == 1)
        .map(|(l, _)| l.as_str())
        .collect()
}

/// Tensor product over the point ring of two free modules.
pub fn tensor_module(m: &FreeModule, n: &FreeModule) -> FreeModule {
    let mut generators = Vec::with_capacity(m.rank() * n.rank());
    for (lm, dm) in &m.generators {
        for (ln, dn) in &n.generators {
            generators.push((format!("{lm}|{ln}"), *dm + *dn));
        }
    }
    FreeModule { generators }
}

/// Cohomology of `S^{d_1} × ... × S^{d_k}`: one generator per subset of the
/// factors, in the sum of their degrees.
pub fn sphere_product_module(dims: &[BiDegree]) -> FreeModule {
    assert!(dims.len() < 32, "too many sphere factors");
    let generators = (0u32..1 << dims.len())
        .map(|mask| {
            let chosen: Vec<usize> = (0..dims.len()).filter(|i| mask >> i & 1 == 1).collect();
            let degree = chosen.iter().fold(BiDegree::ZERO, |acc, &i| acc + dims[i]);
            let label = if chosen.is_empty() {
                "1".to_string()
            } else {
                chosen
                    .iter()
                    .map(|i| format!("x{}", i + 1))
                    .collect::<Vec<_>>()
                    .join("*")
            };
            (label, degree)
        })
        .collect();
    FreeModule { generators }
}

pub fn module_iso_check(m: &FreeModule, n: &FreeModule) -> bool {
    m.degree_multiset() == n.degree_multiset()
}

/// An inclusive rectangle of bidegrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub p0: i64,
    pub p1: i64,
    pub q0: i64,
    pub q1: i64,
}

impl Window {
    pub fn new(p0: i64, p1: i64, q0: i64, q1: i64) -> Result<Self> {
        if p0 > p1 || q0 > q1 {
            return Err(Error::InvalidArgument(format!(
                "empty window {p0}:{p1},{q0}:{q1}"
            )));
        }
        Ok(Window { p0, p1, q0, q1 })
    }

    pub fn points(&self) -> impl Iterator<Item = BiDegree> + '_ {
        (self.q0..=self.q1).flat_map(move |q| (self.p0..=self.p1).map(move |p| BiDegree::new(p, q)))
    }

    pub fn count(&self) -> usize {
        ((self.p1 - self.p0 + 1) * (self.q1 - self.q0 + 1)) as usize
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{},{}:{}", self.p0, self.p1, self.q0, self.q1)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiEntry {
    pub p: i64,
    pub q: i64,
    pub dim: u32,
}

/// Betti numbers of a free module over a window.
#[derive(Clone, Debug)]
pub struct BettiTable {
    pub space: String,
    pub window: Window,
    entries: BTreeMap<BiDegree, u32>,
}

impl BettiTable {
    pub fn compute(space: impl Into<String>, m: &FreeModule, window: Window) -> Self {
        let entries = window.points().map(|d| (d, betti(m, d))).collect();
        BettiTable {
            space: space.into(),
            window,
            entries,
        }
    }

    pub fn get(&self, d: BiDegree) -> Option<u32> {
        self.entries.get(&d).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (BiDegree, u32)> + '_ {
        self.entries.iter().map(|(d, n)| (*d, *n))
    }

    /// Header `q\p,<p0>,...,<p1>`, then one row per weight from `q1` down to
    /// `q0`.
    pub fn to_csv(&self) -> String {
        let w = self.window;
        let mut out = String::from("q\\p");
        for p in w.p0..=w.p1 {
            write!(out, ",{p}").unwrap();
        }
        out.push('\n');
        for q in (w.q0..=w.q1).rev() {
            write!(out, "{q}").unwrap();
            for p in w.p0..=w.p1 {
                write!(out, ",{}", self.entries[&BiDegree::new(p, q)]).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Doc<'a> {
            space: &'a str,
            entries: Vec<BettiEntry>,
        }
        let entries = self
            .entries
            .iter()
            .map(|(d, n)| BettiEntry {
                p: d.p,
                q: d.q,
                dim: *n,
            })
            .collect();
        serde_json::to_value(Doc {
            space: &self.space,
            entries,
        })
        .expect("plain data serializes")
    }

    /// Lattice picture with `q` increasing upward; zero groups print as `.`.
    pub fn to_ascii(&self) -> String {
        let w = self.window;
        let width = [w.p0, w.p1, w.q0, w.q1]
            .iter()
            .map(|v| v.to_string().len())
            .chain(self.entries.values().map(|n| n.to_string().len()))
            .max()
            .unwrap_or(1)
            .max(2);
        let mut out = format!("{}\n", self.space);
        for q in (w.q0..=w.q1).rev() {
            write!(out, "{q:>width$} |").unwrap();
            for p in w.p0..=w.p1 {
                match self.entries[&BiDegree::new(p, q)] {
                    0 => write!(out, " {:>width$}", ".").unwrap(),
                    n => write!(out, " {n:>width$}").unwrap(),
                }
            }
            out.push('\n');
        }
        write!(out, "{:>width$} +", "").unwrap();
        out.push_str(&"-".repeat((width + 1) * (w.p1 - w.p0 + 1) as usize));
        out.push('\n');
        write!(out, "{:>width$}  ", "q\\p").unwrap();
        for p in w.p0..=w.p1 {
            write!(out, "{p:>width$} ").unwrap();
        }
        out.truncate(out.trim_end().len());
        out.push('\n');
        out
    }
}

/// Basis of `H(S^{p,q})`: the unit and the fundamental class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SphereBasis {
    One,
    Gen,
}

impl fmt::Display for SphereBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SphereBasis::One => "1",
            SphereBasis::Gen => "x",
        })
    }
}

impl BasisLabel for SphereBasis {
    fn is_unit(&self) -> bool {
        *self == SphereBasis::One
    }
}

pub type SphereElement = FreeElement<SphereBasis>;

/// `H(S^{p,q})`: `x² = ρx` for `S^{1,1}`, `x² = 0` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sphere {
    dim: BiDegree,
}

impl Sphere {
    pub fn new(dim: BiDegree) -> Result<Self> {
        if dim == BiDegree::ZERO {
            return Err(Error::InvalidArgument(
                "S^{0,0} is not a connected sphere".into(),
            ));
        }
        if dim.p < 0 || dim.q < 0 || dim.q > dim.p {
            return Err(Error::InvalidArgument(format!(
                "no representation sphere of dimension {dim}"
            )));
        }
        Ok(Sphere { dim })
    }

    pub fn dim(&self) -> BiDegree {
        self.dim
    }
}

impl FreeAlgebra for Sphere {
    type Basis = SphereBasis;

    fn name(&self) -> String {
        format!("sphere:{},{}", self.dim.p, self.dim.q)
    }

    fn degree(&self, b: &SphereBasis) -> BiDegree {
        match b {
            SphereBasis::One => BiDegree::ZERO,
            SphereBasis::Gen => self.dim,
        }
    }

    fn unit(&self) -> SphereBasis {
        SphereBasis::One
    }

    fn contains(&self, _b: &SphereBasis) -> bool {
        true
    }

    fn basis_through(&self, max_dim: i64) -> Vec<SphereBasis> {
        let mut out = vec![];
        if max_dim >= 0 {
            out.push(SphereBasis::One);
        }
        if max_dim >= self.dim.p {
            out.push(SphereBasis::Gen);
        }
        out
    }

    fn top_dim(&self) -> Option<i64> {
        Some(self.dim.p)
    }

    fn mul_basis(&self, x: &SphereBasis, y: &SphereBasis) -> Result<SphereElement> {
        Ok(match (x, y) {
            (SphereBasis::One, b) | (b, SphereBasis::One) => SphereElement::basis(*b),
            (SphereBasis::Gen, SphereBasis::Gen) if self.dim == BiDegree::new(1, 1) => {
                SphereElement::term(CoeffElement::rho(), SphereBasis::Gen)
            }
            _ => SphereElement::zero(),
        })
    }
}

pub fn sphere_mul(dim: BiDegree, x: &SphereElement, y: &SphereElement) -> Result<SphereElement> {
    Sphere::new(dim)?.mul(x, y)
}

/// The unit class of a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointBasis;

impl fmt::Display for PointBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("1")
    }
}

impl BasisLabel for PointBasis {
    fn is_unit(&self) -> bool {
        true
    }
}

/// The point ring as an algebra of rank one over itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Point;

impl FreeAlgebra for Point {
    type Basis = PointBasis;

    fn name(&self) -> String {
        "pt".into()
    }

    fn degree(&self, _b: &PointBasis) -> BiDegree {
        BiDegree::ZERO
    }

    fn unit(&self) -> PointBasis {
        PointBasis
    }

    fn contains(&self, _b: &PointBasis) -> bool {
        true
    }

    fn basis_through(&self, max_dim: i64) -> Vec<PointBasis> {
        if max_dim >= 0 {
            vec![PointBasis]
        } else {
            vec![]
        }
    }

    fn top_dim(&self) -> Option<i64> {
        Some(0)
    }

    fn mul_basis(&self, _x: &PointBasis, _y: &PointBasis) -> Result<FreeElement<PointBasis>> {
        Ok(FreeElement::basis(PointBasis))
    }
}
