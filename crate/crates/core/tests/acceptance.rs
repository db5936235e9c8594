//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL line;
//! the test fails if any criterion does. Runs without the test harness so the
//! lines are always shown.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use common::*;
use silt::agreement::{cancel_named, ginzburg_agreement};
use silt::algebra::{sign, ArrowName, DgQuiver, Element, Path, VertexId};
use silt::cli::{self, EXIT_FAIL, EXIT_OK};
use silt::compare::{equal_under, iso_search, ArrowCorrespondence, IsoResult, ScalarDomain, DEFAULT_NODE_CAP};
use silt::fixtures::{self, poly, Terms};
use silt::format::{self, Document, ParseOptions};
use silt::mutation::{mutate, mutate_right, MutationContext};
use silt::potential::{ginzburg3, higher_ginzburg, verify_derivative_lemma, QuiverWithPotential};
use silt::reduction::{
    cancel_pair, euler_characteristic, find_cancellable, maximal_reductions, simplify, DEFAULT_MAX_STEPS,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("silt").chain(args.iter().copied()), &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned() + &String::from_utf8_lossy(&err),
    )
}

fn arrows_of(dg: &DgQuiver) -> Vec<(String, u32, u32, i64)> {
    let mut v: Vec<_> = dg
        .quiver()
        .arrows()
        .map(|a| (a.name.to_string(), a.source.0, a.target.0, a.degree))
        .collect();
    v.sort();
    v
}

fn owned(list: &[(&str, u32, u32, i64)]) -> Vec<(String, u32, u32, i64)> {
    let mut v: Vec<_> = list.iter().map(|&(n, s, t, d)| (n.to_string(), s, t, d)).collect();
    v.sort();
    v
}

fn check_diffs(dg: &DgQuiver, expected: &[(&str, Terms<'_>)]) -> Result<(), String> {
    let q = dg.quiver();
    for (name, terms) in expected {
        let want = poly(q, terms);
        let got = dg.d(&ArrowName::from(*name));
        ensure!(
            got == want,
            "d {name} = {} instead of {}",
            got.render(q),
            want.render(q)
        );
    }
    let nonzero = dg.diff_map().values().filter(|v| !v.is_zero()).count();
    let listed = expected.iter().filter(|(_, t)| !t.is_empty()).count();
    ensure!(nonzero == listed, "{nonzero} nonzero differentials, expected {listed}");
    Ok(())
}

fn example_41() -> Outcome {
    let m = mutate(&fixtures::a3_rad2(), VertexId(1)).map_err(|e| e.to_string())?;
    ensure!(
        arrows_of(&m)
            == owned(&[
                ("(omega|phi^-1)", 2, 3, 1),
                ("omega", 1, 3, 0),
                ("phi*", 2, 1, 0),
                ("psi", 2, 3, 0),
            ]),
        "mutated arrows {:?}",
        arrows_of(&m)
    );
    check_diffs(&m, &[("(omega|phi^-1)", &[(1, &["omega", "phi*"]), (-1, &["psi"])])])?;
    let s = simplify(&m, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())?;
    ensure!(
        arrows_of(&s.dg) == owned(&[("omega", 1, 3, 0), ("phi*", 2, 1, 0)]),
        "simplified arrows {:?}",
        arrows_of(&s.dg)
    );
    check_diffs(&s.dg, &[])?;
    let golden = fs::read_to_string(fixture("example41_reduced.dgq")).map_err(|e| e.to_string())?;
    ensure!(
        format::serialize_dg_quiver(&s.dg) == golden,
        "serialized form differs from the golden file"
    );
    Ok("4 arrows after mutation, 2 arrows with zero differential after simplify".into())
}

fn example_42() -> Outcome {
    let m = mutate(&fixtures::example_42(), VertexId(2)).map_err(|e| e.to_string())?;
    let expected = owned(&[
        ("alpha", 1, 2, 1),
        ("beta*", 3, 2, 0),
        ("delta*", 5, 2, 0),
        ("s", 2, 4, 0),
        ("(beta|alpha)", 1, 3, 0),
        ("(delta|alpha)", 1, 5, 0),
        ("r", 1, 3, 1),
        ("(s|beta^-1)", 3, 4, 1),
        ("(s|delta^-1)", 5, 4, 1),
        ("x", 1, 4, 2),
        ("gamma", 3, 4, 0),
    ]);
    ensure!(arrows_of(&m) == expected, "mutated arrows {:?}", arrows_of(&m));
    check_diffs(
        &m,
        &[
            (
                "alpha",
                &[(1, &["beta*", "(beta|alpha)"]), (1, &["delta*", "(delta|alpha)"])],
            ),
            ("r", &[(1, &["(beta|alpha)"])]),
            ("s", &[]),
            (
                "x",
                &[
                    (1, &["s", "alpha"]),
                    (-1, &["(s|beta^-1)", "(beta|alpha)"]),
                    (-1, &["(s|delta^-1)", "(delta|alpha)"]),
                    (-1, &["gamma", "r"]),
                ],
            ),
            ("(s|beta^-1)", &[(1, &["s", "beta*"]), (-1, &["gamma"])]),
            ("(s|delta^-1)", &[(1, &["s", "delta*"])]),
        ],
    )?;
    let step = cancel_named(&m, &"r".into(), &"(beta|alpha)".into()).map_err(|e| e.to_string())?;
    let r = cancel_named(&step, &"(s|beta^-1)".into(), &"gamma".into()).map_err(|e| e.to_string())?;
    ensure!(r.arrow_count() == 7, "{} arrows after cancelling", r.arrow_count());
    check_diffs(
        &r,
        &[
            ("x", &[(1, &["s", "alpha"]), (-1, &["(s|delta^-1)", "(delta|alpha)"])]),
            ("alpha", &[(1, &["delta*", "(delta|alpha)"])]),
            ("(s|delta^-1)", &[(1, &["s", "delta*"])]),
        ],
    )?;
    Ok("11 arrows after mutation, 7 after two cancellations".into())
}

/// `phi^op` and `(phi^op|alpha^-1)` for the arrows `phi` into `v`, and `l_v`.
fn named_families(qp: &QuiverWithPotential, v: VertexId, mutation_set: &BTreeSet<ArrowName>) -> BTreeSet<ArrowName> {
    let mut out = BTreeSet::from([ArrowName::ginzburg_loop(v)]);
    for phi in qp.quiver().arrows_into(v) {
        out.insert(phi.name.op());
        for alpha in mutation_set {
            out.insert(ArrowName::anti_comp(&phi.name.op(), alpha));
        }
    }
    out
}

fn classical_agreement() -> Outcome {
    let mut notes = Vec::new();
    for (file, qp) in [
        ("linear_a3.qp", fixtures::linear_a3()),
        ("triangle.qp", fixtures::triangle()),
    ] {
        let path = fixture(file);
        let (code, text) = run_cli(&["mutate-verify-ginzburg", "-i", "2", path.to_str().unwrap()]);
        ensure!(code == EXIT_OK, "{file}: exit code {code}\n{text}");
        ensure!(
            text.lines().any(|l| l == "match"),
            "{file}: explicit correspondence not used\n{text}"
        );

        let a = ginzburg_agreement(&qp, VertexId(2)).map_err(|e| e.to_string())?;
        ensure!(a.passed(), "{file}: {:?}", a.mismatch);
        let ctx = MutationContext::new(ginzburg3(&qp).unwrap().quiver(), VertexId(2)).unwrap();
        let negated: BTreeSet<ArrowName> = a.negated().into_iter().collect();
        let families = named_families(&qp, VertexId(2), ctx.mutation_set());
        ensure!(
            negated == families,
            "{file}: negated {negated:?}, expected {families:?}"
        );
        let search =
            iso_search(&a.reduced, &a.expected, ScalarDomain::Signs, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
        ensure!(
            matches!(search, IsoResult::Found(_)),
            "{file}: sign search gave {search:?}"
        );
        let names: Vec<_> = negated.iter().map(ToString::to_string).collect();
        notes.push(format!("{file} negates {}", names.join(" ")));
    }
    Ok(notes.join("; "))
}

fn higher_agreement() -> Outcome {
    let mut runs = 0;
    let mut dims = BTreeSet::new();
    for (name, qp) in qp_corpus() {
        let d = qp.dimension();
        for v in qp.quiver().vertices() {
            let a = ginzburg_agreement(&qp, v).map_err(|e| format!("{name} at {v}: {e}"))?;
            ensure!(a.passed(), "{name} at {v}: {:?}", a.mismatch);
            let loop_v = ArrowName::ginzburg_loop(v);
            let s = sign(d);
            ensure!(
                a.map.get(&loop_v) == Some((&loop_v, &s)),
                "{name} at {v}: l_i is sent to {:?}",
                a.map.get(&loop_v)
            );
            let g = higher_ginzburg(&qp).map_err(|e| e.to_string())?;
            let ctx = MutationContext::new(g.quiver(), v).map_err(|e| e.to_string())?;
            for alpha in ctx.mutation_set() {
                let target = alpha.star().op();
                let comp = ArrowName::comp(alpha, &loop_v);
                ensure!(
                    a.map.get(&comp) == Some((&target, &s)),
                    "{name} at {v}: {comp} is sent to {:?}",
                    a.map.get(&comp)
                );
            }
            runs += 1;
        }
        dims.insert(d);
    }
    ensure!(dims == BTreeSet::from([3, 4, 5]), "dimensions covered: {dims:?}");
    Ok(format!(
        "{} quivers with potential, {runs} mutations, d in {dims:?}",
        qp_corpus().len()
    ))
}

fn derivative_lemma() -> Outcome {
    let mut checks = 0;
    for (name, qp) in qp_corpus() {
        for v in qp.quiver().vertices() {
            let report = verify_derivative_lemma(&qp, v).map_err(|e| format!("{name} at {v}: {e}"))?;
            if let Some(bad) = report.mismatches().next() {
                return Err(format!(
                    "{name} at {v}: formula {} at {}: {} vs {}",
                    bad.formula, bad.arrow, bad.lhs, bad.rhs
                ));
            }
            checks += report.checks.len();
        }
    }
    ensure!(checks > 0, "no checks ran");
    Ok(format!("{checks} checks, 0 mismatches"))
}

/// Mutated dg quivers the reduction checks run on: the random Ginzburg
/// algebras at every admissible vertex, and the fixtures at every vertex.
fn mutated_suite() -> Result<Vec<(String, DgQuiver)>, String> {
    let mut out = Vec::new();
    for seed in 0..200u64 {
        let qp = random_classical_qp(&mut rng(seed));
        let g = ginzburg3(&qp).map_err(|e| format!("seed {seed}: {e}"))?;
        for v in admissible_vertices(g.quiver()) {
            let m = mutate(&g, v).map_err(|e| format!("seed {seed} at {v}: {e}"))?;
            out.push((format!("seed {seed} at {v}"), m));
        }
    }
    for (name, dg) in dg_corpus() {
        for v in dg.quiver().vertices() {
            out.push((format!("{name} at {v}"), mutate(&dg, v).map_err(|e| e.to_string())?));
            out.push((
                format!("{name} right at {v}"),
                mutate_right(&dg, v).map_err(|e| e.to_string())?,
            ));
        }
    }
    Ok(out)
}

fn d_squared() -> Outcome {
    let suite = mutated_suite()?;
    for (name, m) in &suite {
        let report = m.check_d_squared();
        ensure!(report.passed(), "{name}: {:?}", report.failures);
    }
    Ok(format!(
        "200 random quivers with potential plus fixtures, {} mutations",
        suite.len()
    ))
}

fn order_results_agree(name: &str, dg: &DgQuiver) -> Result<usize, String> {
    let finals = maximal_reductions(dg, DEFAULT_MAX_STEPS).map_err(|e| format!("{name}: {e}"))?;
    ensure!(!finals.is_empty(), "{name}: no reductions");
    for other in &finals[1..] {
        let r = iso_search(&finals[0], other, ScalarDomain::Field, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
        ensure!(
            matches!(r, IsoResult::Found(_)),
            "{name}: two cancellation orders give {r:?}"
        );
    }
    Ok(finals.len())
}

fn reduction_safety() -> Outcome {
    let mut suite = mutated_suite()?;
    for (name, qp) in qp_corpus() {
        for v in qp.quiver().vertices() {
            let a = ginzburg_agreement(&qp, v).map_err(|e| e.to_string())?;
            suite.push((format!("{name} at {v}"), a.mutated));
        }
    }
    let (mut done, mut diverged) = (0, 0);
    for (name, m) in &suite {
        let chi = euler_characteristic(m.quiver());
        for pair in find_cancellable(m) {
            match cancel_pair(m, &pair, DEFAULT_MAX_STEPS) {
                Ok(c) => {
                    ensure!(
                        c.check_d_squared().passed(),
                        "{name}: d² fails after cancelling {}",
                        pair.rho.name
                    );
                    ensure!(
                        euler_characteristic(c.quiver()) == chi,
                        "{name}: Euler characteristic changes after cancelling {}",
                        pair.rho.name
                    );
                    done += 1;
                }
                Err(silt::Error::NonTermination { .. }) => diverged += 1,
                Err(e) => return Err(format!("{name}: {e}")),
            }
        }
    }

    let mut orders = Vec::new();
    let fixtures_mutated = [
        ("a3_rad2 at 1", mutate(&fixtures::a3_rad2(), VertexId(1)).unwrap()),
        ("example_42 at 2", mutate(&fixtures::example_42(), VertexId(2)).unwrap()),
    ];
    for (name, m) in &fixtures_mutated {
        orders.push(format!("{name}: {}", order_results_agree(name, m)?));
    }
    for (name, qp) in [
        ("linear_a3 at 2", fixtures::linear_a3()),
        ("triangle at 2", fixtures::triangle()),
    ] {
        let a = ginzburg_agreement(&qp, VertexId(2)).map_err(|e| e.to_string())?;
        orders.push(format!("{name}: {}", order_results_agree(name, &a.mutated)?));
    }
    Ok(format!(
        "{done} cancellations ({diverged} non-terminating skipped); maximal reductions per fixture [{}], all isomorphic",
        orders.join(", ")
    ))
}

fn decomposition() -> Outcome {
    let mut r = rng(8);
    let mut tested = 0;
    while tested < 1000 {
        let vertices = r.gen_range(1..=4);
        let arrows = r.gen_range(0..=8);
        let q = random_quiver(&mut r, vertices, arrows, 2);
        let Some(&v) = admissible_vertices(&q).choose(&mut r) else {
            continue;
        };
        let ctx = MutationContext::new(&q, v).map_err(|e| e.to_string())?;
        let x = random_element(&mut r, &q, 6, 5);
        let mut rebuilt = ctx.red(&x);
        for alpha in ctx.mutation_set() {
            let a = Element::from_path(Path::arrow(q.get(alpha).unwrap()));
            rebuilt += ctx
                .slash(&x, alpha)
                .map_err(|e| e.to_string())?
                .mul(&a)
                .map_err(|e| e.to_string())?;
        }
        ensure!(rebuilt == x, "fails on {}", x.render(&q));
        tested += 1;
    }
    Ok(format!("{tested} random elements"))
}

fn round_trip_and_check() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut files: Vec<_> = fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "qp" || x == "dgq"))
        .collect();
    files.sort();
    let mut compared = 0;
    for path in &files {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
        let doc = format::parse(&text, ParseOptions { check_d_squared: false }).map_err(|e| format!("{name}: {e}"))?;
        let out = format::serialize(&doc);
        // comments are not kept, so only canonical files are compared byte for byte
        if text.lines().any(|l| l.trim_start().starts_with('#')) {
            let again = format::serialize(&format::parse(&out, ParseOptions { check_d_squared: false }).unwrap());
            ensure!(again == out, "{name}: serialization is not stable");
        } else {
            ensure!(out == text, "{name}: round trip differs\n{out}");
        }
        if let Document::DgQuiver(dg) = &doc {
            ensure!(
                equal_under(&ArrowCorrespondence::identity(dg.quiver()), dg, dg)
                    .unwrap()
                    .is_none(),
                "{name}: not equal to itself"
            );
        }
        compared += 1;
    }
    ensure!(compared >= 8, "only {compared} fixture files");

    let (ok, text) = run_cli(&["check", fixture("example42.dgq").to_str().unwrap()]);
    ensure!(ok == EXIT_OK, "check example42.dgq exits {ok}: {text}");
    let (bad, text) = run_cli(&["check", fixture("bad.dgq").to_str().unwrap()]);
    ensure!(bad == EXIT_FAIL, "check bad.dgq exits {bad}: {text}");
    Ok(format!(
        "{compared} fixture files; check exits {ok} on example42.dgq and {bad} on bad.dgq"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("mutation and simplification of the three-vertex example", example_41),
        ("mutation and two cancellations of the five-vertex example", example_42),
        (
            "classical Ginzburg agreement with the negated families",
            classical_agreement,
        ),
        ("higher Ginzburg agreement for d = 3, 4, 5", higher_agreement),
        ("cyclic derivative formulas after mutation", derivative_lemma),
        ("d² = 0 after mutating random Ginzburg algebras", d_squared),
        (
            "cancellation keeps d² = 0, Euler characteristic and result",
            reduction_safety,
        ),
        ("decomposition x = red x + sum of (x / alpha) alpha", decomposition),
        ("text round trip and check exit codes", round_trip_and_check),
    ];
    let mut failed = Vec::new();
    for (k, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        let took = start.elapsed();
        let n = k + 1;
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS  {title} ({detail}) [{}]", secs(took)),
            Err(why) => {
                println!("criterion {n}: FAIL  {title}: {why} [{}]", secs(took));
                failed.push(n);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}
