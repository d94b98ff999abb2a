//! Acceptance gate. Runs every criterion, prints one line per criterion and
//! exits nonzero if any of them fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use eqcohom::forgetful::{standard_window, truncated_presentation_check};
use eqcohom::stiefel::stiefel_generators;
use eqcohom::{
    admissible_sequences, check_presentation, classical_poincare, coeff_mul, dim_at,
    les_exactness_check, module_iso_check, psi_image_poincare, so_generators,
    sphere_product_module, stiefel_basis, tensor_module, AdmissibleSequence, BiDegree,
    ClassicalSpace, CoeffElement, ConeMonomial, FrameBasisElement, FreeAlgebra, FreeModule,
    PoincarePolynomial, Point, ProjectiveSpace, RotElement, RotationGroup, Sphere, StiefelElement,
    StiefelManifold,
};

/// Every criterion is an exact comparison over Z/2, so the only pinned
/// tolerance is the wall-clock budget.
const BUDGETS: [(u32, Duration); 9] = [
    (1, Duration::from_secs(1)),
    (2, Duration::from_secs(5)),
    (3, Duration::from_secs(10)),
    (4, Duration::from_secs(60)),
    (5, Duration::from_secs(60)),
    (6, Duration::from_secs(30)),
    (7, Duration::from_secs(5)),
    (8, Duration::from_secs(120)),
    (9, Duration::from_secs(120)),
];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn math<T>(r: eqcohom::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// 1. Point chart

/// Counts monomials `ρ^aτ^b` at `(a, a+b)` and `θ/(ρ^aτ^b)` at
/// `(-a, -a-b-2)` by brute enumeration.
fn point_oracle(p: i64, q: i64) -> u32 {
    let mut n = 0;
    for a in 0..=20i64 {
        for b in 0..=20i64 {
            if (a, a + b) == (p, q) {
                n += 1;
            }
            if (-a, -a - b - 2) == (p, q) {
                n += 1;
            }
        }
    }
    n
}

fn criterion_1() -> Outcome {
    let mut points = 0;
    for p in -4..=4 {
        for q in -5..=5 {
            points += 1;
            let (got, want) = (dim_at(BiDegree::new(p, q)), point_oracle(p, q));
            ensure(got == want, || {
                format!("dim H^({p},{q}) = {got}, expected {want}")
            })?;
        }
    }
    let named = [
        (ConeMonomial::THETA, BiDegree::new(0, -2)),
        (ConeMonomial::Bot { rho: 0, tau: 1 }, BiDegree::new(0, -3)),
        (ConeMonomial::Bot { rho: 1, tau: 0 }, BiDegree::new(-1, -3)),
    ];
    for (m, d) in named {
        ensure(m.degree() == d && ConeMonomial::at(d) == Some(m), || {
            format!("{m} is not the class at {d}")
        })?;
    }
    ensure(dim_at(BiDegree::new(0, -1)) == 0, || {
        "gap at (0,-1) is nonzero".into()
    })?;
    Ok(format!(
        "{points} lattice points agree; th, th/t, th/r placed"
    ))
}

// 2. Additive collapse

fn sphere_fold(p: u32) -> FreeModule {
    (1..p as i64).fold(FreeModule::from_degrees([BiDegree::ZERO]), |acc, k| {
        tensor_module(
            &acc,
            &FreeModule::from_degrees([BiDegree::ZERO, BiDegree::twisted_cell(k)]),
        )
    })
}

fn criterion_2() -> Outcome {
    for p in 2..=12u32 {
        let gens = math(so_generators(p))?;
        let dims: Vec<BiDegree> = (1..p as i64).map(BiDegree::twisted_cell).collect();
        let spheres = sphere_product_module(&dims);
        ensure(gens.rank() == 1 << (p - 1), || {
            format!("p={p}: {} generators", gens.rank())
        })?;
        ensure(module_iso_check(&gens, &spheres), || {
            format!("p={p}: differs from the sphere product")
        })?;
        ensure(
            gens.degree_multiset() == sphere_fold(p).degree_multiset(),
            || format!("p={p}: differs from the tensor fold"),
        )?;
    }
    Ok("p = 2..12 match the product of spheres".into())
}

// 3. Worked examples

enum Claim {
    /// A product of generators equals an expression.
    Equals(&'static str, Vec<u32>, RotElement),
    /// A product of generators is zero.
    Zero(&'static str, Vec<u32>),
    /// A product of generators is a single basis class with unit coefficient
    /// at the given bidegree.
    FreeGenerator(&'static str, Vec<u32>, (i64, i64)),
}

fn product(g: &RotationGroup, factors: &[u32]) -> Result<RotElement, String> {
    let mut x = g.one();
    for &i in factors {
        x = math(g.mul(&x, &math(g.generator(i))?))?;
    }
    Ok(x)
}

fn free_generator(g: &RotationGroup, x: &RotElement, d: (i64, i64)) -> Option<AdmissibleSequence> {
    let mut terms = x.terms();
    let (b, c) = terms.next()?;
    (terms.next().is_none() && c.is_one() && g.degree(b) == BiDegree::new(d.0, d.1)).then_some(*b)
}

fn check_claims(g: &RotationGroup, claims: &[Claim]) -> Result<usize, String> {
    let mut generators = BTreeSet::new();
    for claim in claims {
        match claim {
            Claim::Equals(name, f, rhs) => {
                let lhs = product(g, f)?;
                ensure(&lhs == rhs, || {
                    format!(
                        "SO({},{}): {name} gives {lhs}, expected {rhs}",
                        g.p(),
                        g.q()
                    )
                })?;
            }
            Claim::Zero(name, f) => {
                let lhs = product(g, f)?;
                ensure(lhs.is_zero(), || {
                    format!("SO({},{}): {name} gives {lhs}, expected 0", g.p(), g.q())
                })?;
            }
            Claim::FreeGenerator(name, f, d) => {
                let x = product(g, f)?;
                let b = free_generator(g, &x, *d).ok_or_else(|| {
                    format!(
                        "SO({},{}): {name} = {x} is not a free generator at {d:?}",
                        g.p(),
                        g.q()
                    )
                })?;
                ensure(generators.insert(b), || {
                    format!("SO({},{}): {name} repeats the generator {b}", g.p(), g.q())
                })?;
            }
        }
    }
    Ok(claims.len())
}

fn criterion_3() -> Outcome {
    use Claim::*;
    let so4 = math(RotationGroup::new(4))?;
    let e = |g: &RotationGroup, terms: &[(CoeffElement, &[u32])]| -> Result<RotElement, String> {
        let mut out = RotElement::zero();
        for (c, f) in terms {
            out.add_assign(&product(g, f)?.scale(c));
        }
        Ok(out)
    };
    let (r, t) = (CoeffElement::rho(), CoeffElement::tau());
    let b1_sq_4 = e(&so4, &[(r.clone(), &[1]), (t.clone(), &[2])])?;
    let b1_cube_4 = e(&so4, &[(r.clone(), &[1, 1]), (t.clone(), &[1, 2])])?;
    ensure(!b1_cube_4.is_zero(), || {
        "SO(4,2): r*B1^2 + t*B1*B2 vanishes".into()
    })?;
    let so4_claims = vec![
        Equals("B1^2 = r*B1 + t*B2", vec![1, 1], b1_sq_4),
        Equals("B1^3 = r*B1^2 + t*B1*B2", vec![1, 1, 1], b1_cube_4),
        FreeGenerator("B1*B2", vec![1, 2], (3, 2)),
        Zero("B2^2", vec![2, 2]),
        FreeGenerator("B1*B3", vec![1, 3], (4, 3)),
        FreeGenerator("B2*B3", vec![2, 3], (5, 3)),
        Zero("B3^2", vec![3, 3]),
        FreeGenerator("B1*B2*B3", vec![1, 2, 3], (6, 4)),
    ];
    let n4 = check_claims(&so4, &so4_claims)?;

    let so5 = math(RotationGroup::new(5))?;
    let b1_sq_5 = e(&so5, &[(r.clone(), &[1]), (t.clone(), &[2])])?;
    let b4 = math(so5.generator(4))?;
    let so5_claims = vec![
        FreeGenerator("B1", vec![1], (1, 1)),
        FreeGenerator("B2", vec![2], (2, 1)),
        Equals("B1^2 = r*B1 + t*B2", vec![1, 1], b1_sq_5),
        FreeGenerator("B3", vec![3], (3, 2)),
        FreeGenerator("B1*B2", vec![1, 2], (3, 2)),
        Equals("B2^2 = B4", vec![2, 2], b4),
        FreeGenerator("B2^2", vec![2, 2], (4, 2)),
        FreeGenerator("B1*B3", vec![1, 3], (4, 3)),
        FreeGenerator("B1*B2^2", vec![1, 2, 2], (5, 3)),
        FreeGenerator("B2*B3", vec![2, 3], (5, 3)),
        FreeGenerator("B2^3", vec![2, 2, 2], (6, 3)),
        Zero("B3^2", vec![3, 3]),
        FreeGenerator("B1*B2*B3", vec![1, 2, 3], (6, 4)),
        FreeGenerator("B1*B2^3", vec![1, 2, 2, 2], (7, 4)),
        FreeGenerator("B2^2*B3", vec![2, 2, 3], (7, 4)),
        Zero("B2^4", vec![2, 2, 2, 2]),
        FreeGenerator("B1*B2^2*B3", vec![1, 2, 2, 3], (8, 5)),
        FreeGenerator("B2^3*B3", vec![2, 2, 2, 3], (9, 5)),
        FreeGenerator("B1*B2^3*B3", vec![1, 2, 2, 2, 3], (10, 6)),
    ];
    let n5 = check_claims(&so5, &so5_claims)?;
    Ok(format!("SO(4,2) {n4} checks, SO(5,2) {n5} checks"))
}

// 4. Injectivity and ring map

fn criterion_4() -> Outcome {
    for p in 2..=8u32 {
        let g = math(RotationGroup::new(p))?;
        let degrees: Vec<BiDegree> = math(admissible_sequences(p))?
            .into_iter()
            .map(|s| s.degree())
            .collect();
        let dependent = math(g.dependent_bidegrees(degrees))?;
        ensure(dependent.is_empty(), || {
            format!("p={p}: images dependent at {dependent:?}")
        })?;
        let failures = math(g.ring_map_failures())?;
        ensure(failures.is_empty(), || {
            format!("p={p}: generator products {failures:?} not preserved")
        })?;
    }
    Ok("p = 2..8 independent images, generator products preserved".into())
}

// 5. Presentation audit

fn internally_consistent(g: &RotationGroup) -> Result<(), String> {
    let p = g.p();
    let basis = g.basis_through(i64::MAX);
    for x in &basis {
        for y in &basis {
            let xy = math(g.mul_basis(x, y))?;
            let lhs = math(g.omega_star(&xy))?;
            let rhs = math(g.tensor().mul(math(g.image(*x))?, math(g.image(*y))?))?;
            ensure(lhs == rhs, || {
                format!("p={p}: w*({x}*{y}) != w*({x})w*({y})")
            })?;
        }
    }
    for x in &basis {
        for y in &basis {
            let xy = math(g.mul_basis(x, y))?;
            for i in 1..p {
                let gi = AdmissibleSequence::generator(i);
                let left = math(g.mul(&xy, &RotElement::basis(gi)))?;
                let right = math(g.mul(&RotElement::basis(*x), &math(g.mul_basis(y, &gi))?))?;
                ensure(left == right, || {
                    format!("p={p}: ({x}*{y})*B{i} != {x}*({y}*B{i})")
                })?;
            }
        }
    }
    math(g.validate_cache())
}

fn criterion_5() -> Outcome {
    let mut mismatches = Vec::new();
    for p in 2..=6u32 {
        let g = math(RotationGroup::new(p))?;
        let report = math(check_presentation(&g))?;
        for m in report.mismatches() {
            mismatches.push(format!(
                "p={p} {}: claimed {}, computed {}",
                m.relation, m.claimed, m.oracle
            ));
        }
    }
    let mut audited = Vec::new();
    for p in [7u32, 8] {
        let g = math(RotationGroup::new(p))?;
        let report = math(check_presentation(&g))?;
        internally_consistent(&g)?;
        audited.push(format!(
            "p={p} {} of {} relations differ",
            report.mismatches().count(),
            report.relations.len()
        ));
    }
    ensure(mismatches.is_empty(), || mismatches.join("; "))?;
    Ok(format!(
        "p = 2..6 match; {} and consistent",
        audited.join(", ")
    ))
}

// 6. Stiefel manifolds

fn criterion_6() -> Outcome {
    let mut square_failures = Vec::new();
    for p in 2..=10u32 {
        let v = math(StiefelManifold::new(p))?;
        let q = p / 2;
        let basis = math(stiefel_basis(p))?;
        ensure(basis.len() == 1 << q, || {
            format!("p={p}: {} basis elements", basis.len())
        })?;
        let dims: Vec<BiDegree> = (i64::from(p - q)..i64::from(p))
            .map(BiDegree::twisted_cell)
            .collect();
        ensure(
            module_iso_check(&math(stiefel_generators(p))?, &sphere_product_module(&dims)),
            || format!("p={p}: bidegrees differ from the sphere product"),
        )?;
        let g = v.rotation_group();
        let images: BTreeSet<RotElement> = basis
            .iter()
            .map(|(b, _)| math(v.pi_star(&StiefelElement::basis(*b))))
            .collect::<Result<_, _>>()?;
        ensure(images.len() == basis.len(), || {
            format!("p={p}: pi* identifies basis classes")
        })?;
        for x in &images {
            ensure(
                free_generator(g, x, (g.degree_of(x).unwrap().p, g.degree_of(x).unwrap().q))
                    .is_some(),
                || format!("p={p}: pi* image {x} is not a basis class"),
            )?;
        }
        for (x, _) in &basis {
            for (y, _) in &basis {
                let xy = math(v.mul_basis(x, y))?;
                let lhs = math(v.pi_star(&xy))?;
                let rhs = math(g.mul(
                    &math(v.pi_star(&StiefelElement::basis(*x)))?,
                    &math(v.pi_star(&StiefelElement::basis(*y)))?,
                ))?;
                ensure(lhs == rhs, || {
                    format!("p={p}: pi*({x}*{y}) = {lhs}, pi*({x})pi*({y}) = {rhs}")
                })?;
            }
        }
        if p > 2 {
            for i in p - q..p {
                let x = math(v.class(&[i]))?;
                let sq = math(v.mul(&x, &x))?;
                if !sq.is_zero() {
                    square_failures.push(format!("p={p} [{i}]^2 = {sq}"));
                }
            }
        }
    }
    let v5 = math(StiefelManifold::new(5))?;
    let prod = math(v5.mul(&math(v5.class(&[3]))?, &math(v5.class(&[4]))?))?;
    ensure(
        prod == StiefelElement::basis(math(FrameBasisElement::new(&[3, 4]))?),
        || format!("p=5: [3]*[4] = {prod}"),
    )?;
    ensure(square_failures.is_empty(), || {
        format!("squares nonzero: {}", square_failures.join("; "))
    })?;
    Ok("p = 2..10 basis, pi* injective ring map, squares vanish".into())
}

// 7. Forgetful consistency

fn criterion_7() -> Outcome {
    for p in 2..=12u32 {
        let g = math(RotationGroup::new(p))?;
        let (got, want) = (
            math(psi_image_poincare(&g))?,
            classical_poincare(ClassicalSpace::Rotation(p)),
        );
        ensure(got == want, || {
            format!("SO({p}): psi image {got}, classical {want}")
        })?;
        let oracle = PoincarePolynomial::from_degrees(classical_degrees(1..p));
        ensure(want == oracle, || {
            format!("SO({p}): product formula {want} vs subset count {oracle}")
        })?;
        let v = math(StiefelManifold::new(p))?;
        let (got, want) = (
            math(psi_image_poincare(&v))?,
            classical_poincare(ClassicalSpace::Stiefel(p)),
        );
        ensure(got == want, || {
            format!("V(R^{p}): psi image {got}, classical {want}")
        })?;
        let oracle = PoincarePolynomial::from_degrees(classical_degrees(p - p / 2..p));
        ensure(want == oracle, || {
            format!("V(R^{p}): product formula {want} vs subset count {oracle}")
        })?;
    }
    let so4 = math(RotationGroup::new(4))?;
    let truncated = math(truncated_presentation_check(&so4, &[(1, 3), (3, 2)]))?;
    ensure(truncated.flagged, || {
        "SO(4) truncated presentation was not flagged".into()
    })?;
    ensure(truncated.psi_image_dimension == 8, || {
        format!(
            "SO(4) psi image dimension {}",
            truncated.psi_image_dimension
        )
    })?;
    Ok(format!(
        "p = 2..12 agree; SO(4) truncated presentation flagged (dim {}, classical {}, psi image {})",
        truncated.presentation_dimension, truncated.classical_dimension, truncated.psi_image_dimension
    ))
}

/// Degrees of all subsets of `range`, summed.
fn classical_degrees(range: std::ops::Range<u32>) -> Vec<i64> {
    let items: Vec<i64> = range.map(i64::from).collect();
    (0u32..1 << items.len())
        .map(|m| {
            items
                .iter()
                .enumerate()
                .filter(|(k, _)| m >> k & 1 == 1)
                .map(|(_, d)| d)
                .sum()
        })
        .collect()
}

// 8. Forgetful long exact sequence

fn les<A: FreeAlgebra>(space: &A) -> Result<usize, String> {
    let w = standard_window(space.top_dim().unwrap_or(0));
    let report = math(les_exactness_check(space, &w))?;
    ensure(report.passed(), || {
        format!("{}: {:?}", space.name(), report.failures)
    })?;
    Ok(report.checked.len())
}

fn criterion_8() -> Outcome {
    let mut checked = les(&Point)?;
    checked += les(&math(Sphere::new(BiDegree::new(1, 1)))?)?;
    for n in 1..=6 {
        checked += les(&math(ProjectiveSpace::finite(n))?)?;
    }
    for p in 2..=6 {
        checked += les(&math(RotationGroup::new(p))?)?;
    }
    for p in 2..=8 {
        checked += les(&math(StiefelManifold::new(p))?)?;
    }
    Ok(format!("{checked} bidegrees exact"))
}

// 9. Algebra laws

fn laws<A: FreeAlgebra>(space: &A) -> Result<usize, String> {
    let basis = space.basis_through(space.top_dim().unwrap_or(0));
    let mut table = BTreeMap::new();
    for x in &basis {
        for y in &basis {
            table.insert((x.clone(), y.clone()), math(space.mul_basis(x, y))?);
        }
    }
    for x in &basis {
        for y in &basis {
            ensure(
                table[&(x.clone(), y.clone())] == table[&(y.clone(), x.clone())],
                || format!("{}: {x}*{y} != {y}*{x}", space.name()),
            )?;
            for z in &basis {
                let left = math(space.mul(
                    &table[&(x.clone(), y.clone())],
                    &eqcohom::FreeElement::basis(z.clone()),
                ))?;
                let right = math(space.mul(
                    &eqcohom::FreeElement::basis(x.clone()),
                    &table[&(y.clone(), z.clone())],
                ))?;
                ensure(left == right, || {
                    format!("{}: ({x}*{y})*{z} != {x}*({y}*{z})", space.name())
                })?;
            }
        }
    }
    Ok(basis.len().pow(3))
}

fn coeff_monomials() -> Vec<ConeMonomial> {
    let mut out = Vec::new();
    for rho in 0..=4 {
        for tau in 0..=4 {
            out.push(ConeMonomial::Top { rho, tau });
            out.push(ConeMonomial::Bot { rho, tau });
        }
    }
    out
}

fn criterion_9() -> Outcome {
    let ms: Vec<CoeffElement> = coeff_monomials()
        .into_iter()
        .map(CoeffElement::from)
        .collect();
    for x in &ms {
        for y in &ms {
            let xy = coeff_mul(x, y);
            ensure(xy == coeff_mul(y, x), || {
                format!("coeff: {x}*{y} not commutative")
            })?;
            for z in &ms {
                ensure(coeff_mul(&xy, z) == coeff_mul(x, &coeff_mul(y, z)), || {
                    format!("coeff: ({x}*{y})*{z} not associative")
                })?;
            }
        }
    }
    let mut triples = ms.len().pow(3);
    for n in 1..=6 {
        triples += laws(&math(ProjectiveSpace::finite(n))?)?;
    }
    for p in 2..=6 {
        triples += laws(&math(RotationGroup::new(p))?)?;
    }
    for p in 2..=8 {
        triples += laws(&math(StiefelManifold::new(p))?)?;
    }
    Ok(format!("{triples} triples commutative and associative"))
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 9] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
    ];
    let mut failed = 0;
    for ((n, budget), run) in BUDGETS.into_iter().zip(criteria) {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let line = match outcome {
            Ok(_) if elapsed > budget => Err(format!("over budget ({:.2?} > {budget:?})", elapsed)),
            other => other,
        };
        match line {
            Ok(detail) => println!("criterion {n}: PASS {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n}: FAIL {detail} [{elapsed:.2?}]");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        BUDGETS.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
