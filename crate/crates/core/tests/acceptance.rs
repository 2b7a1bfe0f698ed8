//! One PASS/FAIL line per acceptance criterion, written straight to stdout
//! so it shows up without `--nocapture`.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use combproof::formula::Connective;
use combproof::io::fuzz::{mutate, random_net_instance};
use combproof::io::random::{random_formula_with, random_net};
use combproof::io::{emit_figure, load_proof, save_proof_with_mix, validate_dot, FuzzConfig};
use combproof::proof::Stage;
use combproof::resolution::{cliques, count_resolutions, is_clique};
use combproof::{
    dr_check_exhaustive, dr_check_fast, prove_combinatorial, verify, CombinatorialProof, Formula, LeafMap, Linking,
    Literal, Nnf,
};

const PEIRCE: &str = include_str!("../fixtures/peirce.json");
const MIX_SEPARATION: &str = include_str!("../fixtures/mix_separation.json");

fn report(name: &str, ok: bool, detail: impl AsRef<str>) {
    let status = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "[{status}] {name}: {}", detail.as_ref()).expect("stdout");
    out.flush().expect("stdout");
}

#[test]
fn peirce_fixture() {
    let start = Instant::now();
    let p = load_proof(PEIRCE).expect("fixture loads").proof;
    let accepted = verify(&p, false);

    let mut swapped = p.clone();
    swapped.map.0[2] = 1;
    let labels = verify(&swapped, false);

    let mut corrupted = p.clone();
    corrupted.linking = Linking::new([(0, 1), (2, 3)]);
    let linking = verify(&corrupted, false);

    let mut uncrossed = p.clone();
    uncrossed.linking = Linking::new([(0, 2), (1, 3)]);
    let other_pairing = verify(&uncrossed, false);

    let elapsed = start.elapsed();
    let ok = accepted.is_accepted()
        && other_pairing.is_accepted()
        && labels.stage() == Some(Stage::Labels)
        && labels.to_string().contains("upper leaf 2")
        && linking.stage() == Some(Stage::Linking)
        && linking.to_string().contains("(0,1)")
        && elapsed < Duration::from_secs(1);
    report(
        "peirce fixture",
        ok,
        format!("{accepted} (other pairing {other_pairing}); label-swapped: {labels}; link-corrupted: {linking}; {elapsed:.2?}"),
    );
    assert!(ok);
}

/// Every binary tree with `n` leaves and a connective at each branch node.
fn templates(n: usize) -> Vec<Nnf> {
    if n == 1 {
        return vec![Nnf::pos("_")];
    }
    let mut out = Vec::new();
    for k in 1..n {
        let (lefts, rights) = (templates(k), templates(n - k));
        for a in &lefts {
            for b in &rights {
                out.push(Nnf::and(a.clone(), b.clone()));
                out.push(Nnf::or(a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Literal sequences over at most three variables, one per orbit of
/// renaming variables and flipping their polarity: variables appear in
/// order of first use and each first use is positive.
fn literal_sequences(n: usize) -> Vec<Vec<Literal>> {
    fn go(n: usize, used: usize, cur: &mut Vec<Literal>, out: &mut Vec<Vec<Literal>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..(used + 1).min(3) {
            for negated in [false, true] {
                if v == used && negated {
                    continue;
                }
                cur.push(Literal { var: ["P", "Q", "R"][v].to_string(), negated });
                go(n, used.max(v + 1), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, 0, &mut Vec::new(), &mut out);
    out
}

fn fill(t: &Nnf, lits: &mut std::slice::Iter<'_, Literal>) -> Nnf {
    match t {
        Nnf::Lit(_) => Nnf::Lit(lits.next().expect("one literal per leaf").clone()),
        Nnf::And(a, b) => {
            let a = fill(a, lits);
            Nnf::and(a, fill(b, lits))
        }
        Nnf::Or(a, b) => {
            let a = fill(a, lits);
            Nnf::or(a, fill(b, lits))
        }
    }
}

#[test]
fn theorem_at_desk_scale() {
    let budget = Duration::from_secs(600);
    let start = Instant::now();
    let (mut formulas, mut valid) = (0u64, 0u64);
    let mut discrepancies = Vec::new();
    let mut finished = 0;
    let mut timed_out = false;
    'layers: for n in 1..=8 {
        let lits = literal_sequences(n);
        for t in templates(n) {
            if start.elapsed() > budget {
                timed_out = true;
                break 'layers;
            }
            for seq in &lits {
                let f = Formula::from_nnf(&fill(&t, &mut seq.iter()));
                formulas += 1;
                let taut = f.is_tautology();
                match prove_combinatorial(&f) {
                    Ok(p) => {
                        valid += 1;
                        let verdict = verify(&p, false);
                        if !taut || !verdict.is_accepted() {
                            discrepancies.push(format!("{f}: tautology={taut}, {verdict}"));
                        }
                    }
                    Err(e) if taut => discrepancies.push(format!("{f}: no proof: {e}")),
                    Err(_) => {}
                }
            }
        }
        finished = n;
    }
    let elapsed = start.elapsed();
    let ok = discrepancies.is_empty() && !timed_out && finished == 8;
    let coverage = if timed_out {
        format!("stopped at the {budget:.0?} budget with leaf counts 1..={finished} complete")
    } else {
        format!("leaf counts 1..={finished} complete")
    };
    report(
        "theorem at desk scale",
        ok,
        format!(
            "{formulas} formulas ({valid} proved), {} discrepancies, {coverage}, {elapsed:.1?}",
            discrepancies.len()
        ),
    );
    assert!(discrepancies.is_empty(), "{discrepancies:#?}");
    assert!(ok, "enumeration did not finish within {budget:?}");
}

/// A label-preserving map where possible; random targets otherwise.
fn labelled_map(rng: &mut ChaCha8Rng, upper: &Formula, lower: &Formula) -> LeafMap {
    let image = upper
        .leaves()
        .map(|(_, lit)| {
            let same: Vec<usize> = lower.leaves().filter(|(_, l)| *l == lit).map(|(k, _)| k).collect();
            if same.is_empty() {
                rng.gen_range(0..lower.leaf_count())
            } else {
                same[rng.gen_range(0..same.len())]
            }
        })
        .collect();
    LeafMap(image)
}

/// Proofs of random tautologies with their mutants, and proof nets with
/// random lower formulas and label-preserving maps.
fn corpus(size: usize, seed: u64) -> Vec<(CombinatorialProof, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        if rng.gen_bool(0.5) {
            let f = random_formula_with(&mut rng, 8, 3);
            if let Ok(p) = prove_combinatorial(&f) {
                for _ in 0..4 {
                    let m = mutate(&mut rng, &p);
                    let mix = rng.gen_bool(0.5);
                    out.push((m, mix));
                }
                out.push((p, false));
            }
        } else {
            let mix = rng.gen_bool(0.5);
            let (upper, linking) = random_net(&mut rng, 8, 2, mix);
            let lower = random_formula_with(&mut rng, 6, 2);
            let map = labelled_map(&mut rng, &upper, &lower);
            out.push((CombinatorialProof { lower, upper, linking, map }, mix));
        }
    }
    out.truncate(size);
    out
}

#[test]
fn soundness_corpus() {
    let docs = corpus(12_000, 2024);
    let (mut accepted, mut violations) = (0, Vec::new());
    for (p, mix) in &docs {
        let text = save_proof_with_mix(p, *mix);
        let loaded = load_proof(&text).expect("saved documents load");
        let verdict = verify(&loaded.proof, loaded.mix);
        if verdict.is_accepted() {
            accepted += 1;
            if !loaded.proof.lower.is_tautology() {
                violations.push(loaded.proof.lower.print());
            }
        }
    }
    let ok = violations.is_empty() && docs.len() >= 10_000;
    report(
        "soundness corpus",
        ok,
        format!("{} documents, {accepted} accepted, {} violations", docs.len(), violations.len()),
    );
    assert!(ok, "{violations:#?}");
}

/// The clique family computed directly from its recursive description:
/// a leaf alone, unions across a conjunction, either side of a
/// disjunction.
fn clique_family(f: &Formula, node: usize) -> BTreeSet<Vec<usize>> {
    match f.children(node) {
        None => BTreeSet::from([vec![f.leaf_range(node).start]]),
        Some((l, r)) => {
            let (a, b) = (clique_family(f, l), clique_family(f, r));
            match f.connective(node) {
                Some(Connective::Or) => a.union(&b).cloned().collect(),
                _ => a
                    .iter()
                    .flat_map(|x| b.iter().map(move |y| x.iter().chain(y).copied().collect()))
                    .collect(),
            }
        }
    }
}

#[test]
fn clique_machinery() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut violations, mut brute) = (Vec::new(), 0);
    for i in 0..1000 {
        let f = random_formula_with(&mut rng, 12, 4);
        let family = clique_family(&f, f.root());
        let listed: Vec<Vec<usize>> = cliques(&f).iter().map(|c| c.leaves().to_vec()).collect();
        if listed.len() as u128 != count_resolutions(&f) {
            violations.push(format!("#{i} {f}: {} cliques, {} resolutions", listed.len(), count_resolutions(&f)));
        }
        if listed.iter().cloned().collect::<BTreeSet<_>>() != family {
            violations.push(format!("#{i} {f}: clique list differs from the recursive family"));
        }
        let n = f.leaf_count();
        if n <= 10 {
            brute += 1;
            for mask in 1u32..(1 << n) {
                let subset: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
                if is_clique(&f, &subset) != Ok(family.contains(&subset)) {
                    violations.push(format!("#{i} {f}: is_clique wrong on {subset:?}"));
                }
            }
        } else {
            for c in &family {
                if is_clique(&f, c) != Ok(true) {
                    violations.push(format!("#{i} {f}: clique {c:?} rejected"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = violations.is_empty() && elapsed < Duration::from_secs(300);
    report(
        "clique machinery",
        ok,
        format!("1000 formulas ({brute} with every subset checked), {} violations, {elapsed:.1?}", violations.len()),
    );
    assert!(ok, "{violations:#?}");
}

#[test]
fn net_checker_agreement() {
    let config = FuzzConfig::new(0, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut disagreements, mut accepted, mut max_leaves) = (Vec::new(), [0, 0], 0);
    let instances = 10_000;
    for i in 0..instances {
        let (f, l) = random_net_instance(&mut rng, &config);
        max_leaves = max_leaves.max(f.leaf_count());
        for (k, mix) in [false, true].into_iter().enumerate() {
            let (fast, slow) = (dr_check_fast(&f, &l, mix), dr_check_exhaustive(&f, &l, mix));
            accepted[k] += usize::from(slow);
            if fast != slow {
                disagreements.push(format!("#{i} {f} {:?} mix={mix}", l.pairs()));
            }
        }
    }
    let ok = disagreements.is_empty();
    report(
        "net-checker agreement",
        ok,
        format!(
            "{instances} instances up to {max_leaves} leaves, accepted {} strict / {} with MIX, {} disagreements",
            accepted[0],
            accepted[1],
            disagreements.len()
        ),
    );
    assert!(ok, "{disagreements:#?}");
}

#[test]
fn mix_separation() {
    let p = load_proof(MIX_SEPARATION).expect("fixture loads").proof;
    let (strict, mixed) = (verify(&p, false), verify(&p, true));
    let ok = strict.stage() == Some(Stage::Net) && mixed.is_accepted();
    report("MIX separation", ok, format!("mix=false: {strict}; mix=true: {mixed}"));
    assert!(ok);
}

#[test]
fn round_trips() {
    let docs = corpus(12_000, 99);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let mut formulas = 0;
    let mut check_formula = |f: &Formula, failures: &mut Vec<String>| {
        formulas += 1;
        if Formula::parse(&f.print()).as_ref() != Ok(f) {
            failures.push(format!("print/parse: {f}"));
        }
    };
    for _ in 0..10_000 {
        check_formula(&random_formula_with(&mut rng, 12, 4), &mut failures);
    }
    for (p, mix) in &docs {
        check_formula(&p.lower, &mut failures);
        check_formula(&p.upper, &mut failures);
        match load_proof(&save_proof_with_mix(p, *mix)) {
            Ok(back) if back.proof == *p && back.mix == *mix => {}
            _ => failures.push(format!("save/load: {}", p.lower)),
        }
        if let Err(e) = validate_dot(&emit_figure(p)) {
            failures.push(format!("dot: {e}"));
        }
    }
    let ok = failures.is_empty();
    report(
        "round-trips",
        ok,
        format!("{formulas} formulas, {} documents and figures, {} failures", docs.len(), failures.len()),
    );
    assert!(ok, "{failures:#?}");
}
