//! Space selectors and evaluation of parsed expressions.

use std::fmt;
use std::str::FromStr;

use eqcohom::forgetful::psi_element;
use eqcohom::grading::{PointBasis, SphereBasis};
use eqcohom::projective::TensorMonomial;
use eqcohom::{
    AdmissibleSequence, BiDegree, CoeffElement, FrameBasisElement, FreeAlgebra, FreeElement, Point,
    ProjMonomial, ProjectiveSpace, RotationGroup, RpDim, Sphere, StiefelManifold, TensorAlgebra,
};

use crate::expr::{parse, Expr, ParseError, Var};
use crate::CliError;

/// `pt`, `sphere:p,q`, `rp:n`, `rp:inf`, `tensor:n1,n2,...`, `so:p`, `stiefel:p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Space {
    Point,
    Sphere(BiDegree),
    Rp(RpDim),
    Tensor(Vec<u32>),
    So(u32),
    Stiefel(u32),
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Point => f.write_str("pt"),
            Space::Sphere(d) => write!(f, "sphere:{},{}", d.p, d.q),
            Space::Rp(n) => write!(f, "rp:{n}"),
            Space::Tensor(ns) => {
                let parts: Vec<String> = ns.iter().map(|n| n.to_string()).collect();
                write!(f, "tensor:{}", parts.join(","))
            }
            Space::So(p) => write!(f, "so:{p}"),
            Space::Stiefel(p) => write!(f, "stiefel:{p}"),
        }
    }
}

fn parse_list<T: FromStr>(s: &str) -> Option<Vec<T>> {
    s.split(',').map(|x| x.trim().parse().ok()).collect()
}

pub fn parse_rp_dim(s: &str) -> Result<RpDim, CliError> {
    if s == "inf" {
        return Ok(RpDim::Infinite);
    }
    s.parse()
        .map(RpDim::Finite)
        .map_err(|_| CliError::Usage(format!("expected a dimension or 'inf', got '{s}'")))
}

impl FromStr for Space {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("unknown space '{s}'"));
        if s == "pt" {
            return Ok(Space::Point);
        }
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "sphere" => match parse_list::<i64>(arg).as_deref() {
                Some(&[p, q]) => Ok(Space::Sphere(BiDegree::new(p, q))),
                _ => Err(bad()),
            },
            "rp" => Ok(Space::Rp(parse_rp_dim(arg)?)),
            "tensor" => Ok(Space::Tensor(parse_list(arg).ok_or_else(bad)?)),
            "so" => Ok(Space::So(arg.parse().map_err(|_| bad())?)),
            "stiefel" => Ok(Space::Stiefel(arg.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

/// A constructed algebra for a [`Space`].
#[derive(Debug)]
pub enum Algebra {
    Point(Point),
    Sphere(Sphere),
    Rp(ProjectiveSpace),
    Tensor(TensorAlgebra),
    So(RotationGroup),
    Stiefel(StiefelManifold),
}

impl Algebra {
    pub fn new(space: &Space) -> Result<Self, CliError> {
        Ok(match space {
            Space::Point => Algebra::Point(Point),
            Space::Sphere(d) => Algebra::Sphere(Sphere::new(*d)?),
            Space::Rp(n) => Algebra::Rp(ProjectiveSpace::new(*n)?),
            Space::Tensor(ns) => Algebra::Tensor(TensorAlgebra::new(ns.clone())?),
            Space::So(p) => Algebra::So(RotationGroup::new(*p)?),
            Space::Stiefel(p) => Algebra::Stiefel(StiefelManifold::new(*p)?),
        })
    }

    /// Evaluates `input` and renders the result.
    pub fn evaluate(&self, input: &str) -> Result<String, CliError> {
        let e = parse(input)?;
        Ok(match self {
            Algebra::Point(a) => eval(a, &e, &|v, o| point_leaf(a, v, o))?.to_string(),
            Algebra::Sphere(a) => eval(a, &e, &|v, o| sphere_leaf(a, v, o))?.to_string(),
            Algebra::Rp(a) => eval(a, &e, &|v, o| rp_leaf(a, v, o))?.to_string(),
            Algebra::Tensor(a) => eval(a, &e, &|v, o| tensor_leaf(a, v, o))?.to_string(),
            Algebra::So(a) => eval(a, &e, &|v, o| so_leaf(a, v, o))?.to_string(),
            Algebra::Stiefel(a) => eval(a, &e, &|v, o| stiefel_leaf(a, v, o))?.to_string(),
        })
    }

    /// Evaluates `input` and renders its image under `ψ`.
    pub fn psi(&self, input: &str) -> Result<String, CliError> {
        let e = parse(input)?;
        Ok(match self {
            Algebra::Point(a) => {
                psi_element(a, &eval(a, &e, &|v, o| point_leaf(a, v, o))?).to_string()
            }
            Algebra::Sphere(a) => {
                psi_element(a, &eval(a, &e, &|v, o| sphere_leaf(a, v, o))?).to_string()
            }
            Algebra::Rp(a) => psi_element(a, &eval(a, &e, &|v, o| rp_leaf(a, v, o))?).to_string(),
            Algebra::Tensor(a) => {
                psi_element(a, &eval(a, &e, &|v, o| tensor_leaf(a, v, o))?).to_string()
            }
            Algebra::So(a) => psi_element(a, &eval(a, &e, &|v, o| so_leaf(a, v, o))?).to_string(),
            Algebra::Stiefel(a) => {
                psi_element(a, &eval(a, &e, &|v, o| stiefel_leaf(a, v, o))?).to_string()
            }
        })
    }
}

type Leaf<'a, B> = dyn Fn(&Var, usize) -> Result<FreeElement<B>, CliError> + 'a;

/// Evaluates an expression in `algebra`, resolving leaves with `leaf`.
pub fn eval<A: FreeAlgebra>(
    algebra: &A,
    e: &Expr,
    leaf: &Leaf<'_, A::Basis>,
) -> Result<FreeElement<A::Basis>, CliError> {
    Ok(match e {
        Expr::Zero => FreeElement::zero(),
        Expr::One => algebra.one(),
        Expr::Coeff(m) => FreeElement::monomial(*m, algebra.unit()),
        Expr::Leaf { var, offset } => leaf(var, *offset)?,
        Expr::Sum(terms) => {
            let mut out = FreeElement::zero();
            for t in terms {
                out.add_assign(&eval(algebra, t, leaf)?);
            }
            out
        }
        Expr::Product(factors) => {
            let mut out = algebra.one();
            for f in factors {
                out = algebra.mul(&out, &eval(algebra, f, leaf)?)?;
            }
            out
        }
        Expr::Power(base, n) => algebra.pow(&eval(algebra, base, leaf)?, *n)?,
    })
}

fn unknown(var: &Var, offset: usize, space: String) -> CliError {
    CliError::Parse(ParseError::UnknownGenerator {
        token: var.to_string(),
        offset,
        space,
    })
}

pub fn point_leaf(
    a: &Point,
    var: &Var,
    offset: usize,
) -> Result<FreeElement<PointBasis>, CliError> {
    Err(unknown(var, offset, a.name()))
}

pub fn sphere_leaf(
    a: &Sphere,
    var: &Var,
    offset: usize,
) -> Result<FreeElement<SphereBasis>, CliError> {
    match var {
        Var::X => Ok(FreeElement::basis(SphereBasis::Gen)),
        _ => Err(unknown(var, offset, a.name())),
    }
}

pub fn rp_leaf(
    a: &ProjectiveSpace,
    var: &Var,
    offset: usize,
) -> Result<FreeElement<ProjMonomial>, CliError> {
    match var {
        Var::A(None) => Ok(a.a()),
        Var::B(None) => a.b().map_err(|_| unknown(var, offset, a.name())),
        _ => Err(unknown(var, offset, a.name())),
    }
}

pub fn tensor_leaf(
    a: &TensorAlgebra,
    var: &Var,
    offset: usize,
) -> Result<FreeElement<TensorMonomial>, CliError> {
    let (j, m) = match var {
        Var::A(Some(j)) => (*j, ProjMonomial::A),
        Var::B(Some(j)) => (*j, ProjMonomial::B),
        _ => return Err(unknown(var, offset, a.name())),
    };
    a.embed(j, m)
        .map(FreeElement::basis)
        .map_err(|_| unknown(var, offset, a.name()))
}

pub fn so_leaf(
    a: &RotationGroup,
    var: &Var,
    offset: usize,
) -> Result<FreeElement<AdmissibleSequence>, CliError> {
    let found = match var {
        Var::Gen(i) => a.generator(*i).ok(),
        Var::Seq(v) => AdmissibleSequence::new(v)
            .ok()
            .filter(|s| a.contains(s))
            .map(FreeElement::basis),
        _ => None,
    };
    found.ok_or_else(|| unknown(var, offset, a.name()))
}

pub fn stiefel_leaf(
    a: &StiefelManifold,
    var: &Var,
    offset: usize,
) -> Result<FreeElement<FrameBasisElement>, CliError> {
    let found = match var {
        Var::Bracket(v) => a.class(v).ok(),
        _ => None,
    };
    found.ok_or_else(|| unknown(var, offset, a.name()))
}

/// Parses and evaluates `input` in an SO algebra.
pub fn so_element(
    a: &RotationGroup,
    input: &str,
) -> Result<FreeElement<AdmissibleSequence>, CliError> {
    eval(a, &parse(input)?, &|v, o| so_leaf(a, v, o))
}

/// Parses and evaluates `input` in a Stiefel algebra.
pub fn stiefel_element(
    a: &StiefelManifold,
    input: &str,
) -> Result<FreeElement<FrameBasisElement>, CliError> {
    eval(a, &parse(input)?, &|v, o| stiefel_leaf(a, v, o))
}

/// Parses and evaluates `input` in a projective space.
pub fn rp_element(a: &ProjectiveSpace, input: &str) -> Result<FreeElement<ProjMonomial>, CliError> {
    eval(a, &parse(input)?, &|v, o| rp_leaf(a, v, o))
}

/// Parses and evaluates `input` in a tensor algebra.
pub fn tensor_element(
    a: &TensorAlgebra,
    input: &str,
) -> Result<FreeElement<TensorMonomial>, CliError> {
    eval(a, &parse(input)?, &|v, o| tensor_leaf(a, v, o))
}

/// Parses and evaluates `input` as a point-ring element.
pub fn coeff_element(input: &str) -> Result<CoeffElement, CliError> {
    let x = eval(&Point, &parse(input)?, &|v, o| point_leaf(&Point, v, o))?;
    Ok(x.coefficient(&PointBasis))
}
