//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p ordercert-cli --test acceptance -- --nocapture`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ordercert_core::exactpl::{int, rat, Rational};
use ordercert_core::orderlogic::search::{CayleyOracle, LatticeOracle};
use ordercert_core::orderlogic::soundness::lattice_soundness;
use ordercert_core::orderlogic::*;
use ordercert_core::plane::verify_mirrored_relations;
use ordercert_core::skew::{compute_epsilon, generator, verify_relations, Gen, GeneratorWord, Generators};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use tempfile::TempDir;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<(i32, Duration), String> {
    let start = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_ordercert"))
        .args(args)
        .current_dir(dir)
        .env_remove("ORDERCERT_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    Ok((o.status.code().unwrap_or(-1), start.elapsed()))
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn relations() -> Outcome {
    let rel = verify_relations();
    let mir = verify_mirrored_relations();
    ensure(rel.all_hold(), format!("failed: {:?}", rel.failures().map(|e| &e.id).collect::<Vec<_>>()))?;
    ensure(mir.all_hold(), format!("mirrored failed: {:?}", mir.failures().map(|e| &e.id).collect::<Vec<_>>()))?;
    let dir = TempDir::new().map_err(|e| e.to_string())?;
    let (code, t) = run_cli(dir.path(), &["verify"])?;
    ensure(code == 0, format!("verify exited {code}"))?;
    ensure(t < Duration::from_secs(1), format!("verify took {t:?}"))?;
    Ok(format!("{} relations and {} mirrored hold; verify exit 0 in {t:.2?}", rel.entries.len(), mir.entries.len()))
}

fn epsilon() -> Outcome {
    let start = Instant::now();
    let gens = Generators::standard();
    let eps = compute_epsilon();
    ensure(eps == gens.beta.power(-36), "epsilon differs from b^-36")?;
    let factors = gens.epsilon_factors();
    let origin = (int(0), int(0));
    let offsets: Vec<Rational> = factors.iter().map(|f| f.eval_point(&origin).1).collect();
    let expected: Vec<Rational> = [3, -1, -2, -3, -2, -1].into_iter().map(int).collect();
    ensure(offsets == expected, format!("offsets {offsets:?}"))?;
    ensure(offsets.iter().fold(int(0), |a, b| a + b) == int(-6), "offset sum")?;
    let gd: Vec<Rational> = vec![int(0), rat(1, 6), rat(1, 2), rat(5, 6)];
    ensure(factors[0].breakpoint_xs() == gd, format!("breakpoints of c^d: {:?}", factors[0].breakpoint_xs()))?;
    let sixths = |x: &Rational| (x * int(6)).is_integer();
    for f in factors.iter().chain([&eps]) {
        ensure(f.breakpoint_xs().iter().all(sixths), "breakpoint outside (1/6)Z")?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), format!("took {t:?}"))?;
    Ok(format!("epsilon = b^-36, offsets sum to -6, breakpoints in (1/6)Z, {t:.2?}"))
}

fn theorem_certificate() -> Outcome {
    let dir = TempDir::new().map_err(|e| e.to_string())?;
    let (code, t1) = run_cli(dir.path(), &["prove", "--out", "theorem.cert.json"])?;
    ensure(code == 0, format!("prove exited {code}"))?;
    let (code, t2) = run_cli(dir.path(), &["check-cert", "theorem.cert.json"])?;
    ensure(code == 0, format!("check-cert exited {code}"))?;
    ensure(t1 + t2 < Duration::from_secs(10), format!("took {:?}", t1 + t2))?;
    let d = script_theorem_main();
    Ok(format!("{} steps, {} branches; prove {t1:.2?}, re-check from disk {t2:.2?}", d.steps().len(), d.leaf_count()))
}

fn mutation_suite() -> Outcome {
    let (lemma_table, _, _) = lemma_table();
    let theorem = theorem_table();
    let mut reports = Vec::new();
    for (d, table, per_kind) in [(script_lemma_gen(), &lemma_table, 15), (script_theorem_main(), &theorem.table, 10)] {
        let muts = sample_mutations(generate_mutations(&d), per_kind);
        let first: Vec<String> = run_mutations(&d, &muts, table).iter().map(|o| format!("{} {}", o.caught(), o)).collect();
        let again: Vec<String> = run_mutations(&d, &muts, table).iter().map(|o| format!("{} {}", o.caught(), o)).collect();
        ensure(first == again, "reports differ between runs")?;
        reports.extend(first);
    }
    let missed: Vec<&String> = reports.iter().filter(|r| !r.starts_with("true")).collect();
    ensure(missed.is_empty(), format!("not caught: {missed:?}"))?;
    ensure(reports.len() >= 40, format!("only {} mutations", reports.len()))?;
    Ok(format!("{} of {} mutations rejected at the mutated step", reports.len(), reports.len()))
}

fn oracle_equivalence() -> Outcome {
    let gens = Generators::standard();
    let inverses: Vec<_> = Gen::ALL.iter().map(|&g| (g, generator(g).invert())).collect();
    let strategy = (common::letters(12), vec(common::point(), 100));
    runner(1000)
        .run(&strategy, |(w, points)| {
            let element = gens.eval_word(&GeneratorWord::new(w.iter().copied()));
            for p in &points {
                let stepwise = w.iter().fold(p.clone(), |q, &(g, e)| {
                    if e > 0 {
                        gens.get(g).eval_point(&q)
                    } else {
                        inverses.iter().find(|(h, _)| *h == g).unwrap().1.eval_point(&q)
                    }
                });
                prop_assert_eq!(element.eval_point(p), stepwise);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("1000 words x 100 points agree exactly".into())
}

fn soundness() -> Outcome {
    let report = lattice_soundness(10_000, 0x5eed);
    ensure(report.sound(), format!("violations: {:?}", report.violations))?;
    let labels: Vec<String> = vec!["x".into(), "y".into()];
    let lattice = sign_search(&labels, &LatticeOracle::standard(2), SearchBound::depth(6)).map_err(|e| e.to_string())?;
    ensure(lattice.is_none(), "found a witness on Z^2")?;
    let z2 = CayleyOracle::z2();
    let w = sign_search(&["g".into()], &z2, SearchBound::depth(2)).map_err(|e| e.to_string())?;
    let w = w.ok_or("no witness for g^2 = 1")?;
    ensure(verify_nonlo_witness(&w, &z2), "z2 witness rejected")?;
    Ok(format!(
        "10000 lattice instances over {} rule kinds hold; Z^2 depth 6 has no witness; g^2=1 witness verifies",
        report.per_rule.len()
    ))
}

fn algebra_properties() -> Outcome {
    use common::*;
    let checks: Vec<(&str, Box<dyn Fn(&mut TestRunner) -> Result<(), String>>)> = vec![
        ("associativity", Box::new(|r| r.run(&(pl_map(), pl_map(), pl_map()), |(f, g, h)| associativity(&f, &g, &h)).map_err(|e| e.to_string()))),
        ("inverse", Box::new(|r| r.run(&(pl_map(), rational()), |(f, x)| inverse(&f, &x)).map_err(|e| e.to_string()))),
        (
            "equivariance",
            Box::new(|r| r.run(&(pl_map(), cocycle(), rational(), -5i64..5), |(f, c, x, k)| equivariance(&f, &c, &x, k)).map_err(|e| e.to_string())),
        ),
        ("idempotence", Box::new(|r| r.run(&(pl_map(), cocycle()), |(f, c)| idempotence(&f, &c)).map_err(|e| e.to_string()))),
        ("pullback", Box::new(|r| r.run(&(cocycle(), pl_map(), rational()), |(c, f, x)| pullback(&c, &f, &x)).map_err(|e| e.to_string()))),
    ];
    let mut names = Vec::new();
    for (name, check) in checks {
        check(&mut runner(1000)).map_err(|e| format!("{name}: {e}"))?;
        names.push(name);
    }
    Ok(format!("{} x 1000 cases: {}", names.len(), names.join(", ")))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("relation suite", relations),
        ("epsilon computation", epsilon),
        ("theorem certificate", theorem_certificate),
        ("mutation suite", mutation_suite),
        ("oracle equivalence", oracle_equivalence),
        ("soundness sanity", soundness),
        ("algebra properties", algebra_properties),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {}. {name}: {why}", i + 1);
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
