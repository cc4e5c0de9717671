//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use qga::algebra::{build_quotient, QuotientAlgebra, DEFAULT_MAX_LEN};
use qga::autos::{candidate_from_images, enumerate_automorphisms, inner_automorphism, AutomorphismCandidate};
use qga::field::{Field, Rational, Ring, F2, F3, F5};
use qga::gradings::{
    apply_shift, grade_algebra, grading_lattice, ideal_is_homogeneous, is_relation_homogeneous, DegreeAssignment,
};
use qga::linalg::Matrix;
use qga::presentation::{builtin, Element, Family, Path};

use common::props::*;
use common::{q1e_relations, span_dimension, word_name, words, MonomialRewriter};

type Outcome = Result<String, String>;

fn run_cli(args: &[&str]) -> Result<(String, Duration), String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_qga")).args(args).output().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(format!("`qga {}` exited with {:?}", args.join(" "), out.status.code()));
    }
    Ok((String::from_utf8_lossy(&out.stdout).into_owned(), elapsed))
}

/// The value after `label: ` on its own line.
fn field<'a>(out: &'a str, label: &str) -> Option<&'a str> {
    out.lines().find_map(|l| l.trim().strip_prefix(label)?.strip_prefix(": "))
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn algebra<F: Field>(family: Family, n: i64) -> QuotientAlgebra<F> {
    build_quotient(&builtin(family, &[n]).unwrap(), DEFAULT_MAX_LEN).unwrap()
}

fn path<F: Field>(a: &QuotientAlgebra<F>, names: &[&str]) -> Element<F> {
    Element::from_path(a.quiver().path(names).unwrap())
}

fn q1e_rigidity() -> Outcome {
    let mut notes = Vec::new();
    for r in [2, 3, 4, 8] {
        let (out, t) = run_cli(&["gradings", "--builtin", &format!("q1e:{r}")])?;
        let rank = field(&out, "kernel rank");
        expect(rank == Some("0"), || format!("q1e:{r} kernel rank {rank:?}"))?;
        expect(t < Duration::from_secs(1), || format!("q1e:{r} took {t:?}"))?;
        notes.push(format!("r={r} {:.0?}", t));
    }
    Ok(notes.join(", "))
}

fn two_loop_gradings() -> Outcome {
    for r in [1, 2, 3] {
        let (out, _) = run_cli(&["gradings", "--builtin", &format!("two_loop:{r}")])?;
        let ranks = (field(&out, "kernel rank"), field(&out, "class rank"));
        expect(ranks == (Some("2"), Some("2")), || format!("two_loop:{r} ranks {ranks:?}"))?;
    }
    Ok("kernel rank 2, class rank 2 for r = 1, 2, 3".into())
}

fn q1e_2_structure() -> Outcome {
    let a = algebra::<Rational>(Family::Q1e, 2);
    expect(a.dim() == 8, || format!("dimension {}", a.dim()))?;
    let layers = a.radical_series();
    expect(layers.iter().sum::<usize>() == 8 && layers.first() == Some(&1), || format!("radical layers {layers:?}"))?;

    let socle = a.socle();
    let abab = path(&a, &["a", "b", "a", "b"]);
    let spanned = socle.len() == 1 && {
        let c = socle[0].coefficient(&a.quiver().path(&["a", "b", "a", "b"]).unwrap());
        !c.is_zero() && socle[0].scale(&c.inv()) == abab
    };
    expect(spanned, || format!("socle {socle:?}"))?;

    let oracle = MonomialRewriter::q1e2();
    let expected: BTreeSet<String> =
        words(2, 6).into_iter().filter(|w| oracle.is_irreducible(w)).map(|w| word_name(&w, &["a", "b"])).collect();
    let basis: BTreeSet<String> = a.basis().iter().map(|p| a.quiver().path_name(p)).collect();
    expect(basis == expected, || format!("basis {basis:?} != oracle {expected:?}"))?;
    for w in words(2, 6) {
        let value = w.iter().fold(a.identity(), |x, &l| a.multiply(&x, &Element::from_path(a.quiver().arrow_path(l.into()))));
        let want = match oracle.reduce(&w) {
            Some(v) if v.is_empty() => a.identity(),
            Some(v) => Element::from_path(a.quiver().path_from_arrows(v.iter().map(|&l| l.into()).collect()).unwrap()),
            None => Element::zero(),
        };
        expect(value == want, || format!("{} reduces differently", word_name(&w, &["a", "b"])))?;
    }
    let span = span_dimension(&q1e_relations(2), 2, 6);
    expect(span == 8, || format!("span oracle dimension {span}"))?;
    Ok(format!("dimension 8, layers {layers:?}, socle = a*b*a*b, basis = oracle's {} words", expected.len()))
}

fn unipotent_degree_8<F: Field>(c: &AutomorphismCandidate<F>) -> bool {
    let m = &c.induced_matrix;
    m.sub(&Matrix::identity(m.rows())).pow(8).is_zero()
}

fn q1e_2_automorphisms() -> Outcome {
    let (out, t) = run_cli(&["autos", "--builtin", "q1e:2", "--field", "F2"])?;
    expect(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    expect(field(&out, "all_unipotent") == Some("true"), || format!("report:\n{out}"))?;

    let a = algebra::<F2>(Family::Q1e, 2);
    let e = enumerate_automorphisms(&a, 1 << 24, 1).map_err(|e| e.to_string())?;
    expect(e.automorphisms.iter().any(|c| c.is_identity()), || "identity missing".into())?;
    let swap = candidate_from_images(&a, &[path(&a, &["b"]), path(&a, &["a"])]).map_err(|e| e.to_string())?;
    expect(e.automorphisms.contains(&swap), || "swap missing".into())?;
    let u = Element::from_path(Path::trivial(0)).add(&path(&a, &["a"]));
    let inner = inner_automorphism(&a, &u).map_err(|e| e.to_string())?;
    expect(e.automorphisms.contains(&inner), || "inner automorphism by e+a missing".into())?;
    expect(e.report.all_unipotent, || "library reports a non-unipotent automorphism".into())?;
    let bad = e.automorphisms.iter().filter(|c| !unipotent_degree_8(c)).count();
    expect(bad == 0, || format!("{bad} candidates with (M-I)^8 != 0"))?;
    Ok(format!("{} automorphisms in {:.1?}, identity, swap and inner by e+a present, all (M-I)^8 = 0", e.automorphisms.len(), t))
}

fn anti_rigidity_control() -> Outcome {
    let (out, _) = run_cli(&["gradings", "--builtin", "truncated_poly:2"])?;
    expect(field(&out, "kernel rank") == Some("1"), || format!("report:\n{out}"))?;
    let (out, _) = run_cli(&["autos", "--builtin", "truncated_poly:2", "--field", "F3"])?;
    expect(field(&out, "all_unipotent") == Some("false"), || format!("report:\n{out}"))?;
    expect(out.lines().any(|l| l.trim() == "witness: x -> 2*x"), || format!("report:\n{out}"))?;

    let a = algebra::<F3>(Family::TruncatedPoly, 2);
    let x = path(&a, &["x"]);
    let doubling = candidate_from_images(&a, &[x.scale(&F3::from_i64(2))]).map_err(|e| e.to_string())?;
    let e = enumerate_automorphisms(&a, 1 << 24, 1).map_err(|e| e.to_string())?;
    expect(e.automorphisms.contains(&doubling), || "x -> 2x not found".into())?;
    expect(!unipotent_degree_8(&doubling), || "x -> 2x reported unipotent".into())?;
    Ok("kernel rank 1; x -> 2*x found over F3 and not unipotent".into())
}

fn shift_triviality() -> Outcome {
    let p = builtin(Family::LinearAn, &[2]).unwrap();
    let (out, _) = run_cli(&["gradings", "--builtin", "linear_an:2"])?;
    let ranks = (field(&out, "kernel rank"), field(&out, "class rank"));
    expect(ranks == (Some("1"), Some("0")), || format!("ranks {ranks:?}"))?;
    let shifted = apply_shift(p.quiver(), &DegreeAssignment::trivial(1), &[0, 1]);
    expect(shifted.degrees() == [1], || format!("apply_shift gave {shifted}"))?;
    Ok("kernel rank 1, class rank 0, apply_shift(0, (0, 1)) = (1)".into())
}

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<String, String> {
    let cases = 256;
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))?;
    Ok(format!("{name} {cases}"))
}

fn property_suites() -> Outcome {
    let start = Instant::now();
    let over_f5: Vec<QuotientAlgebra<F5>> = fixture_algebras();
    let over_q: Vec<QuotientAlgebra<Rational>> = fixture_algebras();
    let mut notes = vec![
        run_property("snf", arb_matrix(), |(cols, rows)| snf_identities(cols, &rows))?,
        run_property("associativity", arb_coefficients(), |(pick, c)| associativity_random(&over_f5, pick, &c))?,
        run_property("normal-form", arb_path_element(), |(pick, t)| normal_form_idempotent(&over_q, pick, &t))?,
        run_property("shift-invariance", (arb_presentation(), prop::collection::vec(-5i64..=5, 3)), |(p, d)| {
            kernel_shift_invariance(&p, &d)
        })?,
    ];
    let small: Vec<&QuotientAlgebra<Rational>> = over_q.iter().filter(|a| a.dim() <= 64).collect();
    for a in &small {
        associativity_exhaustive(*a)?;
    }
    notes.push(format!("all basis triples of {} fixtures", small.len()));
    let t = start.elapsed();
    expect(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!("{} in {:.1?}", notes.join(", "), t))
}

fn homogeneity_semantics() -> Outcome {
    let mut checked = 0;
    for p in fixtures() {
        let a: QuotientAlgebra<Rational> = build_quotient(&p, DEFAULT_MAX_LEN).map_err(|e| e.to_string())?;
        for g in grading_lattice(&p).kernel_basis {
            let name = format!("{} at {g}", p.name());
            let rels = is_relation_homogeneous(&p, &g);
            expect(rels.iter().all(|&h| h), || format!("{name}: relations {rels:?}"))?;
            let ideal = ideal_is_homogeneous(&a, &g).map_err(|e| e.to_string())?;
            expect(ideal, || format!("{name}: ideal not homogeneous"))?;
            let graded = grade_algebra(&a, &g).map_err(|e| format!("{name}: {e}"))?;
            let total: usize = graded.graded_dims.values().sum();
            expect(total == a.dim(), || format!("{name}: graded dims sum to {total}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} kernel vectors across all fixtures"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("q1e rigidity", q1e_rigidity),
        ("two-loop gradings", two_loop_gradings),
        ("q1e(2) structure", q1e_2_structure),
        ("q1e(2) automorphisms over F2", q1e_2_automorphisms),
        ("anti-rigidity control", anti_rigidity_control),
        ("shift triviality", shift_triviality),
        ("property suites", property_suites),
        ("homogeneity semantics", homogeneity_semantics),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
