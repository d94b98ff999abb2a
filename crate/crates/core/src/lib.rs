//! RO(Z/2)-graded Bredon cohomology with constant `Z/2` coefficients of
//! points, spheres, twisted projective spaces, the rotation groups
//! `SO(p, ⌊p/2⌋)` and the Stiefel manifolds `V_q(R^{p,q})`.
//!
//! Every space here has cohomology that is free over the cohomology of a
//! point, so each algebra is presented by an explicit homogeneous basis and
//! a rule for multiplying basis elements (see [`FreeAlgebra`]).

pub mod coeff;
pub mod element;
pub mod error;
pub mod forgetful;
pub mod gf2;
pub mod grading;
pub mod projective;
pub mod rotation;
pub mod stiefel;

pub use coeff::{coeff_mul, dim_at, orbit_dim_at, BiDegree, CoeffElement, ConeMonomial};
pub use element::{BasisLabel, FreeAlgebra, FreeElement};
pub use error::{Error, Result};
pub use forgetful::{
    classical_poincare, les_exactness_check, psi_coeff, psi_element, psi_image_poincare,
    ClassicalElement, ClassicalSpace, LesReport, PoincarePolynomial,
};
pub use grading::{
    betti, module_iso_check, sphere_mul, sphere_product_module, tensor_module, BettiTable,
    FreeModule, Point, Sphere, Window,
};
pub use projective::{
    rp_mul, tensor_mul, ProjElement, ProjMonomial, ProjectiveSpace, RpDim, TensorAlgebra,
    TensorElement,
};
pub use rotation::{
    admissible_sequences, check_presentation, exponent_bound, so_generators, so_mul,
    AdmissibleSequence, PresentationReport, RotElement, RotationGroup,
};
pub use stiefel::{
    pi_star, stiefel_basis, stiefel_mul, FrameBasisElement, StiefelElement, StiefelManifold,
};
