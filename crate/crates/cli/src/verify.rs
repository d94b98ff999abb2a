//! The `verify` suites.
//!
//! Checks run concurrently and are reported in a fixed order. A check either
//! passes, fails, or is flagged: flagged checks compare the computed algebra
//! with a closed-form statement that it is known to contradict, and do not
//! affect the exit status.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use eqcohom::forgetful::{standard_window, truncated_presentation_check};
use eqcohom::stiefel::{disjoint_union_deviations, stiefel_generators};
use eqcohom::{
    check_presentation, classical_poincare, les_exactness_check, module_iso_check,
    psi_image_poincare, so_generators, sphere_product_module, BiDegree, ClassicalSpace,
    FreeAlgebra, Point, ProjectiveSpace, RotElement, RotationGroup, Sphere, StiefelManifold,
};
use rayon::prelude::*;

use crate::CliError;

/// Depth used when neither `--max-p` nor `EQCOHOM_MAX_P` is given.
pub const DEFAULT_MAX_P: u32 = 8;

/// Deepest `p` the suites accept.
pub const LIMIT_MAX_P: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Additive,
    Ring,
    Forgetful,
    Stiefel,
    All,
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "additive" => Suite::Additive,
            "ring" => Suite::Ring,
            "forgetful" => Suite::Forgetful,
            "stiefel" => Suite::Stiefel,
            "all" => Suite::All,
            _ => return Err(CliError::Usage(format!("unknown suite '{s}'"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Suite::Additive => "additive",
            Suite::Ring => "ring",
            Suite::Forgetful => "forgetful",
            Suite::Stiefel => "stiefel",
            Suite::All => "all",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Flag,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Flag => "FLAG",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub suite: Suite,
    pub name: String,
    pub status: Status,
    pub detail: String,
}

struct Check {
    suite: Suite,
    name: String,
    run: Box<dyn Fn() -> Result<(Status, String), eqcohom::Error> + Send + Sync>,
}

impl Check {
    fn new(
        suite: Suite,
        name: impl Into<String>,
        run: impl Fn() -> Result<(Status, String), eqcohom::Error> + Send + Sync + 'static,
    ) -> Self {
        Check {
            suite,
            name: name.into(),
            run: Box::new(run),
        }
    }
}

fn pass_if(ok: bool, detail: impl Into<String>) -> (Status, String) {
    (if ok { Status::Pass } else { Status::Fail }, detail.into())
}

fn flag_if(deviates: bool, detail: impl Into<String>) -> (Status, String) {
    (
        if deviates { Status::Flag } else { Status::Pass },
        detail.into(),
    )
}

fn twisted_cells(range: std::ops::Range<u32>) -> Vec<BiDegree> {
    range.map(|k| BiDegree::twisted_cell(k.into())).collect()
}

fn additive_checks(max_p: u32) -> Vec<Check> {
    let mut out = Vec::new();
    for p in 2..=max_p {
        out.push(Check::new(
            Suite::Additive,
            format!("so:{p} generators = sphere product"),
            move || {
                let m = so_generators(p)?;
                let ok = m.rank() == 1 << (p - 1)
                    && module_iso_check(&m, &sphere_product_module(&twisted_cells(1..p)));
                Ok(pass_if(ok, format!("{} generators", m.rank())))
            },
        ));
    }
    for n in 1..=max_p.max(6) {
        out.push(Check::new(
            Suite::Additive,
            format!("rp:{n} one cell per dimension"),
            move || {
                let m = ProjectiveSpace::finite(n)?.module()?;
                let ok = module_iso_check(
                    &m,
                    &eqcohom::FreeModule::from_degrees(twisted_cells(0..n + 1)),
                );
                Ok(pass_if(ok, format!("{} generators", m.rank())))
            },
        ));
    }
    out
}

fn ring_checks(max_p: u32) -> Vec<Check> {
    let mut out = Vec::new();
    for p in 2..=max_p {
        out.push(Check::new(
            Suite::Ring,
            format!("so:{p} omega* injective"),
            move || {
                let g = RotationGroup::new(p)?;
                let bad = g.dependent_bidegrees(
                    g.basis_through(i64::MAX).into_iter().map(|s| s.degree()),
                )?;
                Ok(pass_if(bad.is_empty(), format!("dependent at {bad:?}")))
            },
        ));
        out.push(Check::new(
            Suite::Ring,
            format!("so:{p} omega* multiplicative"),
            move || {
                let bad = RotationGroup::new(p)?.ring_map_failures()?;
                Ok(pass_if(
                    bad.is_empty(),
                    format!("failing generator pairs {bad:?}"),
                ))
            },
        ));
        out.push(Check::new(
            Suite::Ring,
            format!("so:{p} commutative and associative"),
            move || {
                let g = RotationGroup::new(p)?;
                let gens: Vec<RotElement> =
                    (1..p).map(|i| g.generator(i)).collect::<Result<_, _>>()?;
                let mut bad = 0;
                for x in &gens {
                    for y in &gens {
                        if g.mul(x, y)? != g.mul(y, x)? {
                            bad += 1;
                        }
                        for z in &gens {
                            if g.mul(&g.mul(x, y)?, z)? != g.mul(x, &g.mul(y, z)?)? {
                                bad += 1;
                            }
                        }
                    }
                }
                g.validate_cache()?;
                Ok(pass_if(
                    bad == 0,
                    format!("{bad} violations on generator triples"),
                ))
            },
        ));
        out.push(Check::new(
            Suite::Ring,
            format!("so:{p} closed-form presentation"),
            move || {
                let report = check_presentation(&RotationGroup::new(p)?)?;
                let mism: Vec<String> = report
                    .mismatches()
                    .map(|r| format!("{} = {} (claimed {})", r.relation, r.oracle, r.claimed))
                    .collect();
                Ok(flag_if(
                    !mism.is_empty(),
                    if mism.is_empty() {
                        "all relations match".into()
                    } else {
                        mism.join("; ")
                    },
                ))
            },
        ));
    }
    out
}

fn forgetful_checks(max_p: u32) -> Vec<Check> {
    let mut out = Vec::new();
    for p in 2..=max_p {
        out.push(Check::new(
            Suite::Forgetful,
            format!("so:{p} psi image = classical"),
            move || {
                let got = psi_image_poincare(&RotationGroup::new(p)?)?;
                let want = classical_poincare(ClassicalSpace::Rotation(p));
                Ok(pass_if(got == want, format!("{got}")))
            },
        ));
        out.push(Check::new(
            Suite::Forgetful,
            format!("stiefel:{p} psi image = classical"),
            move || {
                let got = psi_image_poincare(&StiefelManifold::new(p)?)?;
                let want = classical_poincare(ClassicalSpace::Stiefel(p));
                Ok(pass_if(got == want, format!("{got}")))
            },
        ));
    }
    out.push(Check::new(
        Suite::Forgetful,
        "so:4 truncated presentation B1^3, B3^2",
        || {
            let r = truncated_presentation_check(&RotationGroup::new(4)?, &[(1, 3), (3, 2)])?;
            Ok(flag_if(
                r.flagged,
                format!(
                    "presentation dim {}, classical dim {}, psi image dim {}, failed {:?}",
                    r.presentation_dimension,
                    r.classical_dimension,
                    r.psi_image_dimension,
                    r.failed_relations
                ),
            ))
        },
    ));
    fn les<A: FreeAlgebra>(a: &A) -> Result<(Status, String), eqcohom::Error> {
        let top = a.top_dim().expect("finite");
        let r = les_exactness_check(a, &standard_window(top))?;
        Ok(pass_if(
            r.passed(),
            format!(
                "{} bidegrees, {} failures",
                r.checked.len(),
                r.failures.len()
            ),
        ))
    }
    out.push(Check::new(Suite::Forgetful, "pt rho/psi exactness", || {
        les(&Point)
    }));
    out.push(Check::new(
        Suite::Forgetful,
        "sphere:1,1 rho/psi exactness",
        || les(&Sphere::new(BiDegree::new(1, 1))?),
    ));
    for n in 1..=6 {
        out.push(Check::new(
            Suite::Forgetful,
            format!("rp:{n} rho/psi exactness"),
            move || les(&ProjectiveSpace::finite(n)?),
        ));
    }
    for p in 2..=max_p.min(6) {
        out.push(Check::new(
            Suite::Forgetful,
            format!("so:{p} rho/psi exactness"),
            move || les(&RotationGroup::new(p)?),
        ));
    }
    for p in 2..=max_p {
        out.push(Check::new(
            Suite::Forgetful,
            format!("stiefel:{p} rho/psi exactness"),
            move || les(&StiefelManifold::new(p)?),
        ));
    }
    out
}

fn stiefel_checks(max_p: u32) -> Vec<Check> {
    let mut out = Vec::new();
    for p in 2..=max_p {
        out.push(Check::new(
            Suite::Stiefel,
            format!("stiefel:{p} basis = sphere product"),
            move || {
                let m = stiefel_generators(p)?;
                let ok = m.rank() == 1 << (p / 2)
                    && module_iso_check(&m, &sphere_product_module(&twisted_cells(p - p / 2..p)));
                Ok(pass_if(ok, format!("{} classes", m.rank())))
            },
        ));
        out.push(Check::new(
            Suite::Stiefel,
            format!("stiefel:{p} pi* multiplicative"),
            move || {
                let v = StiefelManifold::new(p)?;
                let basis = v.basis_through(i64::MAX);
                let mut bad = 0;
                for x in &basis {
                    for y in &basis {
                        let (x, y) = (
                            eqcohom::StiefelElement::basis(*x),
                            eqcohom::StiefelElement::basis(*y),
                        );
                        let g = v.rotation_group();
                        if v.pi_star(&v.mul(&x, &y)?)? != g.mul(&v.pi_star(&x)?, &v.pi_star(&y)?)? {
                            bad += 1;
                        }
                    }
                }
                Ok(pass_if(bad == 0, format!("{bad} failing pairs")))
            },
        ));
        if p == 2 {
            // V_1(R^{2,1}) is the sphere S^{1,1}, outside the rule's range
            continue;
        }
        out.push(Check::new(
            Suite::Stiefel,
            format!("stiefel:{p} disjoint-union rule"),
            move || {
                let devs = disjoint_union_deviations(&StiefelManifold::new(p)?)?;
                let detail: Vec<String> = devs
                    .iter()
                    .map(|d| format!("{}*{} = {}", d.left, d.right, d.computed))
                    .collect();
                Ok(flag_if(
                    !devs.is_empty(),
                    if devs.is_empty() {
                        "holds".into()
                    } else {
                        detail.join("; ")
                    },
                ))
            },
        ));
    }
    out
}

/// Runs the selected suites up to `max_p`. Output order does not depend on
/// scheduling.
pub fn run_suites(suite: Suite, max_p: u32) -> Vec<Outcome> {
    let mut checks = Vec::new();
    let want = |s: Suite| suite == Suite::All || suite == s;
    if want(Suite::Additive) {
        checks.extend(additive_checks(max_p));
    }
    if want(Suite::Ring) {
        checks.extend(ring_checks(max_p));
    }
    if want(Suite::Forgetful) {
        checks.extend(forgetful_checks(max_p));
    }
    if want(Suite::Stiefel) {
        checks.extend(stiefel_checks(max_p));
    }
    checks
        .par_iter()
        .map(|c| {
            let (status, detail) = match (c.run)() {
                Ok(r) => r,
                Err(e) => (Status::Fail, e.to_string()),
            };
            Outcome {
                suite: c.suite,
                name: c.name.clone(),
                status,
                detail,
            }
        })
        .collect()
}

pub fn render(outcomes: &[Outcome]) -> String {
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for o in outcomes {
        let _ = writeln!(
            out,
            "{:<10} {:<width$}  {}  {}",
            o.suite, o.name, o.status, o.detail
        );
    }
    let count = |s: Status| outcomes.iter().filter(|o| o.status == s).count();
    let _ = writeln!(
        out,
        "{} checks: {} passed, {} failed, {} flagged",
        outcomes.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Flag)
    );
    out
}

/// `--max-p`, capped by `EQCOHOM_MAX_P` when that is set.
pub fn effective_max_p(flag: Option<u32>, env: Option<&str>) -> Result<u32, CliError> {
    let cap =
        match env {
            Some(s) => Some(s.trim().parse::<u32>().map_err(|_| {
                CliError::Usage(format!("EQCOHOM_MAX_P must be a number, got '{s}'"))
            })?),
            None => None,
        };
    let p = match (flag, cap) {
        (Some(f), Some(c)) => f.min(c),
        (Some(f), None) => f,
        (None, Some(c)) => c.min(DEFAULT_MAX_P),
        (None, None) => DEFAULT_MAX_P,
    };
    if p < 2 {
        return Err(CliError::Usage(format!(
            "max p must be at least 2, got {p}"
        )));
    }
    if p > LIMIT_MAX_P {
        return Err(CliError::Usage(format!(
            "max p must be at most {LIMIT_MAX_P}, got {p}"
        )));
    }
    Ok(p)
}
