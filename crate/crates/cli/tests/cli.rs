use eqcohom::{
    AdmissibleSequence, CoeffElement, ConeMonomial, FreeAlgebra, ProjElement, ProjMonomial,
    ProjectiveSpace, RotElement, RotationGroup, StiefelElement, StiefelManifold,
};
use eqcohom_cli::space::{coeff_element, rp_element, so_element, stiefel_element, tensor_element};
use eqcohom_cli::verify::{render, run_suites, Suite};
use proptest::prelude::*;

fn run(args: &[&str]) -> (i32, String, String) {
    run_env(args, None)
}

fn run_env(args: &[&str], env: Option<&str>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("eqcohom").chain(args.iter().copied());
    let code = eqcohom_cli::run(argv, env, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn so_mul_example() {
    let (code, out, _) = run(&["so", "5", "mul", "B2*B2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "B[4]\n");
    let (_, out, _) = run(&["so", "5", "mul", "r*B1 + t*B2"]);
    assert_eq!(out, "r*B[1] + t*B[2]\n");
    let (_, out, _) = run(&["so", "5", "mul", "B1^2"]);
    assert_eq!(out, "r*B[1] + t*B[2]\n");
}

#[test]
fn point_chart_csv() {
    let (code, out, _) = run(&["point", "chart", "--window", "-2:2,-4:3", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "q\\p,-2,-1,0,1,2");
    assert_eq!(lines.len(), 1 + 8);
    // row q = -2: only θ at p = 0
    let row = lines.iter().find(|l| l.starts_with("-2,")).unwrap();
    assert_eq!(*row, "-2,0,0,1,0,0");
}

fn chart_dims(format: &str) -> Vec<(i64, i64, u32)> {
    let (code, out, _) = run(&[
        "point",
        "chart",
        "--window",
        "-3:3,-4:4",
        "--format",
        format,
    ]);
    assert_eq!(code, 0);
    let mut dims = Vec::new();
    match format {
        "json" => {
            let v: serde_json::Value = serde_json::from_str(&out).unwrap();
            for e in v["entries"].as_array().unwrap() {
                dims.push((
                    e["p"].as_i64().unwrap(),
                    e["q"].as_i64().unwrap(),
                    e["dim"].as_u64().unwrap() as u32,
                ));
            }
        }
        "csv" => {
            let mut lines = out.lines();
            let ps: Vec<i64> = lines
                .next()
                .unwrap()
                .split(',')
                .skip(1)
                .map(|x| x.parse().unwrap())
                .collect();
            for line in lines {
                let mut cells = line.split(',');
                let q: i64 = cells.next().unwrap().parse().unwrap();
                for (p, c) in ps.iter().zip(cells) {
                    dims.push((*p, q, c.parse().unwrap()));
                }
            }
        }
        _ => {
            // rows from q = 4 down to q = -4, one character per p
            let rows: Vec<&str> = out.lines().filter(|l| l.contains('|')).collect();
            assert_eq!(rows.len(), 9);
            for (k, row) in rows.iter().enumerate() {
                let (label, cells) = row.split_once('|').unwrap();
                let q: i64 = label.trim().parse().unwrap();
                assert_eq!(q, 4 - k as i64);
                for (i, ch) in cells.split_whitespace().enumerate() {
                    let d = if ch == "." { 0 } else { ch.parse().unwrap() };
                    dims.push((-3 + i as i64, q, d));
                }
            }
        }
    }
    dims.sort();
    dims
}

#[test]
fn chart_formats_agree() {
    let json = chart_dims("json");
    assert_eq!(json.len(), 63);
    assert_eq!(chart_dims("csv"), json);
    assert_eq!(chart_dims("ascii"), json);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["so", "5", "mul", "B2 +"]).0, 2);
    let (code, _, err) = run(&["so", "5", "mul", "B2*B9"]);
    assert_eq!(code, 2);
    assert!(err.contains("B9") && err.contains("so:5"), "{err}");
    assert_eq!(run(&["so", "5", "--q", "1", "basis"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["verify", "--suite", "nope"]).0, 2);
    assert_eq!(run(&["verify", "--max-p", "1"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn other_commands() {
    let (_, out, _) = run(&["stiefel", "5", "mul", "[3]*[4]"]);
    assert_eq!(out, "[4,3]\n");
    let (_, out, _) = run(&["stiefel", "5", "basis"]);
    assert_eq!(out, "[0] (0,0)\n[3] (3,2)\n[4] (4,2)\n[4,3] (7,4)\n");
    let (_, out, _) = run(&["rp", "3", "mul", "a*a"]);
    assert_eq!(out, "r*a + t*b\n");
    let (_, out, _) = run(&["rp", "inf", "mul", "b*b"]);
    assert_eq!(out, "b^2\n");
    let (_, out, _) = run(&["rp", "4", "present"]);
    assert_eq!(out, "H[a,b]/(a^2 = r*a + t*b, b^3 = 0, a*b^2 = 0)\n");
    let (_, out, _) = run(&["rp", "inf", "basis"]);
    assert!(out.ends_with("...\n"));
    let (_, out, _) = run(&["so", "4", "omega", "B3"]);
    assert_eq!(out, "a3*b3\n");
    let (_, out, _) = run(&["so", "4", "basis"]);
    assert_eq!(out.lines().count(), 8);
    let (_, out, _) = run(&["psi", "so:4", "B1*B1"]);
    assert_eq!(out, "B[2]\n");
    let (code, out, _) = run(&["so", "4", "betti", "--window", "0:3,0:3", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("q\\p,0,1,2,3"));
}

#[test]
fn check_presentation_reports() {
    let (code, out, _) = run(&["so", "5", "check-presentation"]);
    assert_eq!(code, 0);
    assert!(!out.contains("MISMATCH"), "{out}");
    let (code, out, _) = run(&["so", "7", "check-presentation", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let b3 = v["relations"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["relation"] == "B3^2")
        .unwrap();
    assert_eq!(b3["oracle"], "r*B[5] + t*B[6]");
    assert_eq!(b3["claimed"], "B[6]");
}

#[test]
fn verify_small_depth_succeeds() {
    let (code, out, _) = run(&["verify", "--max-p", "4", "--suite", "all"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("0 failed"));
    // EQCOHOM_MAX_P caps the flag
    let (code, out, _) = run_env(
        &["verify", "--max-p", "9", "--suite", "additive"],
        Some("3"),
    );
    assert_eq!(code, 0);
    assert!(!out.contains("so:4"));
}

#[test]
fn verify_is_deterministic_across_thread_counts() {
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = one.install(|| render(&run_suites(Suite::All, 5)));
    let b = four.install(|| render(&run_suites(Suite::All, 5)));
    let c = four.install(|| render(&run_suites(Suite::All, 5)));
    assert_eq!(a, b);
    assert_eq!(b, c);
}

fn monomial(k: u8, e: u8) -> ConeMonomial {
    let (a, b) = (u32::from(e % 3), u32::from(e / 3 % 3));
    match k % 3 {
        0 => ConeMonomial::Top { rho: a, tau: b },
        1 => ConeMonomial::Bot { rho: a, tau: b },
        _ => ConeMonomial::ONE,
    }
}

fn coeff(pairs: &[(u8, u8)]) -> CoeffElement {
    pairs.iter().map(|&(k, e)| monomial(k, e)).collect()
}

proptest! {
    #[test]
    fn so_round_trip(p in 2u32..=7, terms in prop::collection::vec((any::<u32>(), prop::collection::vec((any::<u8>(), any::<u8>()), 0..3)), 0..5)) {
        let g = RotationGroup::new(p).unwrap();
        let x: RotElement = terms
            .iter()
            .map(|(k, c)| (AdmissibleSequence::from_mask((k % (1 << (p - 1))) << 1), coeff(c)))
            .collect();
        prop_assert_eq!(so_element(&g, &x.to_string()).unwrap(), x.clone());
        let t = g.omega_star(&x).unwrap();
        prop_assert_eq!(tensor_element(g.tensor(), &t.to_string()).unwrap(), t);
    }

    #[test]
    fn stiefel_round_trip(p in 2u32..=9, terms in prop::collection::vec((any::<u32>(), prop::collection::vec((any::<u8>(), any::<u8>()), 0..3)), 0..5)) {
        let v = StiefelManifold::new(p).unwrap();
        let basis = v.basis_through(i64::MAX);
        let x: StiefelElement = terms.iter().map(|(k, c)| (basis[*k as usize % basis.len()], coeff(c))).collect();
        prop_assert_eq!(stiefel_element(&v, &x.to_string()).unwrap(), x);
    }

    #[test]
    fn rp_round_trip(n in 1u32..=9, terms in prop::collection::vec((any::<u32>(), prop::collection::vec((any::<u8>(), any::<u8>()), 0..3)), 0..5)) {
        let rp = ProjectiveSpace::finite(n).unwrap();
        let x: ProjElement = terms.iter().map(|(k, c)| (ProjMonomial::from_cell(k % (n + 1)), coeff(c))).collect();
        prop_assert_eq!(rp_element(&rp, &x.to_string()).unwrap(), x);
    }

    #[test]
    fn coeff_round_trip(c in prop::collection::vec((any::<u8>(), any::<u8>()), 0..6)) {
        let x = coeff(&c);
        prop_assert_eq!(coeff_element(&x.to_string()).unwrap(), x);
    }
}
