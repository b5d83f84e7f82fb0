use std::collections::BTreeSet;

use ordercert_core::orderlogic::derivation::{Block, SplitRule};
use ordercert_core::orderlogic::search::{CayleyOracle, LatticeOracle, SkewOracle};
use ordercert_core::orderlogic::soundness::lattice_soundness;
use ordercert_core::orderlogic::*;
use ordercert_core::skew::{generator, Gen};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random order of each block's steps that still lists every premise first.
fn shuffle_block(b: &mut Block, rng: &mut ChaCha8Rng) {
    let local: BTreeSet<String> = b.steps.iter().map(|s| s.id.clone()).collect();
    let mut remaining = std::mem::take(&mut b.steps);
    let mut placed = BTreeSet::new();
    while !remaining.is_empty() {
        let ready: Vec<usize> = (0..remaining.len())
            .filter(|&i| remaining[i].premises.iter().all(|p| !local.contains(p) || placed.contains(p)))
            .collect();
        let s = remaining.remove(ready[rng.gen_range(0..ready.len())]);
        placed.insert(s.id.clone());
        b.steps.push(s);
    }
    if let Some(split) = &mut b.split {
        for br in &mut split.branches {
            shuffle_block(&mut br.body, rng);
        }
    }
}

fn shuffled(d: &Derivation, seed: u64) -> Derivation {
    let mut d = d.clone();
    shuffle_block(&mut d.root, &mut ChaCha8Rng::seed_from_u64(seed));
    d
}

fn ids_in(b: &Block, out: &mut BTreeSet<String>) {
    out.extend(b.steps.iter().map(|s| s.id.clone()));
    if let Some(s) = &b.split {
        out.insert(s.id.clone());
        for br in &s.branches {
            ids_in(&br.body, out);
        }
    }
}

/// Every id under the third branch of a trichotomy whose middle branch cites `F8`.
fn reversed_case_ids(d: &Derivation) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for s in d.splits() {
        let cites_f8 = s.branches.get(1).is_some_and(|br| br.body.steps.iter().any(|st| st.facts.iter().any(|f| f == "F8")));
        if matches!(s.rule, SplitRule::Trichotomy { .. }) && cites_f8 {
            ids_in(&s.branches[2].body, &mut out);
        }
    }
    out
}

#[test]
fn shipped_scripts_check() {
    let (table, _, _) = lemma_table();
    assert_eq!(check_derivation(&script_lemma_gen(), &table), Verdict::Valid);
    let base = theorem_table();
    assert!(base.all_verified());
    assert_eq!(check_derivation(&script_theorem_main(), &base.table), Verdict::Valid);
}

#[test]
fn theorem_is_order_independent() {
    let base = theorem_table();
    let d = script_theorem_main();
    for seed in 0..3 {
        let s = shuffled(&d, seed);
        assert_ne!(s, d);
        assert_eq!(check_derivation(&s, &base.table), Verdict::Valid, "seed {seed}");
    }
}

#[test]
fn mirrored_facts_are_needed_only_in_the_reversed_case() {
    let mut base = theorem_table();
    base.table.remove_facts(|f| f.id.starts_with('M'));
    let d = script_theorem_main();
    let reversed = reversed_case_ids(&d);
    assert!(!reversed.is_empty());
    match check_derivation(&d, &base.table) {
        Verdict::Invalid { at, reason } => {
            assert!(reversed.contains(&at), "failure at {at} lies outside the reversed case");
            assert!(reason.is_fact_problem(), "{reason}");
        }
        Verdict::Valid => panic!("accepted without mirrored facts"),
    }
}

#[test]
fn equality_case_needs_the_separation_fact() {
    let mut base = theorem_table();
    base.table.remove_facts(|f| f.id == "F8");
    let d = script_theorem_main();
    let first_f8 = d.steps().into_iter().find(|s| s.facts.iter().any(|f| f == "F8")).unwrap();
    assert_eq!(first_f8.rule, Rule::Distinct);
    assert_eq!(
        check_derivation(&d, &base.table),
        Verdict::Invalid { at: first_f8.id.clone(), reason: CheckError::UnknownFact("F8".into()) }
    );
}

#[test]
fn every_rule_is_sound_on_the_lattice() {
    let report = lattice_soundness(10_000, 0x5eed);
    assert!(report.sound(), "{:?}", report.violations);
    assert_eq!(report.per_rule.len(), 11, "{:?}", report.per_rule);
    assert!(report.per_rule.values().all(|&n| n > 0));
}

#[test]
fn sampled_theorem_mutations_are_caught() {
    let base = theorem_table();
    let d = script_theorem_main();
    let muts = sample_mutations(generate_mutations(&d), 6);
    assert!(muts.len() >= 20);
    for o in run_mutations(&d, &muts, &base.table) {
        assert!(o.caught(), "{o}");
    }
}

#[test]
fn search_outcomes() {
    let z2 = CayleyOracle::z2();
    let w = sign_search(&["g".into()], &z2, SearchBound::depth(2)).unwrap().unwrap();
    assert!(verify_nonlo_witness(&w, &z2));
    assert_eq!(w.lines().len(), 2);
    let labels: Vec<String> = vec!["x".into(), "y".into()];
    assert!(sign_search(&labels, &LatticeOracle::standard(2), SearchBound::depth(6)).unwrap().is_none());
    let skew = SkewOracle { atoms: vec![generator(Gen::Alpha), generator(Gen::Beta)] };
    assert!(sign_search(&labels, &skew, SearchBound::depth(4)).unwrap().is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lemma_is_order_independent(seed in any::<u64>()) {
        let (table, _, _) = lemma_table();
        prop_assert_eq!(check_derivation(&shuffled(&script_lemma_gen(), seed), &table), Verdict::Valid);
    }

    #[test]
    fn mutation_verdicts_survive_reordering(pick in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let (table, _, _) = lemma_table();
        let d = script_lemma_gen();
        let muts = sample_mutations(generate_mutations(&d), 25);
        let m = &muts[pick.index(muts.len())];
        let mutated = m.apply(&d);
        let original = check_derivation(&mutated, &table);
        let caught = matches!(&original, Verdict::Invalid { at, .. } if *at == m.target);
        prop_assert!(caught, "{}", m.description);
        prop_assert_eq!(check_derivation(&shuffled(&mutated, seed), &table), original);
    }

    #[test]
    fn found_witnesses_always_verify(n in 2usize..7, atoms in proptest::collection::vec(1usize..7, 1..3), depth in 1usize..7) {
        let mut oracle = CayleyOracle::cyclic(n);
        oracle.atoms = atoms.iter().map(|a| a % n).collect();
        let labels: Vec<String> = (0..oracle.atoms.len()).map(|i| format!("g{i}")).collect();
        if let Some(w) = sign_search(&labels, &oracle, SearchBound::depth(depth)).unwrap() {
            prop_assert!(verify_nonlo_witness(&w, &oracle));
            let mut broken = w.clone();
            broken.cases.pop();
            prop_assert!(!verify_nonlo_witness(&broken, &oracle));
        }
        // Every element of a finite cyclic group has order at most n.
        if oracle.atoms.iter().all(|&a| a != 0) && depth >= n {
            prop_assert!(sign_search(&labels, &oracle, SearchBound::depth(depth)).unwrap().is_some());
        }
    }

    #[test]
    fn lattices_never_yield_witnesses(vs in proptest::collection::vec((-3i64..4, -3i64..4), 1..4)) {
        let oracle = LatticeOracle { atoms: vs.iter().map(|&(x, y)| vec![x, y]).collect() };
        let labels: Vec<String> = (0..vs.len()).map(|i| format!("v{i}")).collect();
        let found = sign_search(&labels, &oracle, SearchBound::depth(4)).unwrap();
        if vs.iter().any(|&(x, y)| x == 0 && y == 0) {
            prop_assert!(found.is_none());
        } else if let Some(w) = found {
            prop_assert!(verify_nonlo_witness(&w, &oracle));
        }
    }
}
