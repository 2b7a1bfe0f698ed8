//! Differential harness: prover against truth tables, verifier against
//! the truth table on mutated proofs, and the fast net checker against the
//! exhaustive one.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::document::{load_proof, save_proof_with_mix};
use super::dot::{emit_figure, validate_dot};
use super::random::{flip_connective, random_formula_with, random_linked, random_net};
use crate::formula::{Formula, Literal, Nnf};
use crate::net::{dr_check_exhaustive, dr_check_fast, Linking};
use crate::proof::{verify, CombinatorialProof, LeafMap};
use crate::sequent::{prove_combinatorial, ProveError};

pub type NetChecker = fn(&Formula, &Linking, bool) -> bool;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub n: u64,
    pub seed: u64,
    pub max_leaves: usize,
    pub max_vars: usize,
    /// Leaf bound for the net-checker instances.
    pub net_max_leaves: usize,
    pub mutants_per_proof: usize,
}

impl FuzzConfig {
    pub fn new(n: u64, seed: u64) -> Self {
        FuzzConfig { n, seed, max_leaves: 8, max_vars: 3, net_max_leaves: 16, mutants_per_proof: 4 }
    }
}

/// The two net checkers under comparison; replaceable for fault injection.
#[derive(Clone, Copy)]
pub struct Checkers {
    pub fast: NetChecker,
    pub exhaustive: NetChecker,
}

impl Default for Checkers {
    fn default() -> Self {
        Checkers { fast: dr_check_fast, exhaustive: dr_check_exhaustive }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FuzzReport {
    pub formulas: u64,
    pub tautologies: u64,
    pub proofs_accepted: u64,
    pub mutants: u64,
    pub mutants_accepted: u64,
    pub net_instances: u64,
    pub nets_accepted: u64,
    pub violations: Vec<String>,
}

impl FuzzReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(&mut self, other: FuzzReport) {
        self.formulas += other.formulas;
        self.tautologies += other.tautologies;
        self.proofs_accepted += other.proofs_accepted;
        self.mutants += other.mutants;
        self.mutants_accepted += other.mutants_accepted;
        self.net_instances += other.net_instances;
        self.nets_accepted += other.nets_accepted;
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "formulas:         {}", self.formulas)?;
        writeln!(f, "tautologies:      {}", self.tautologies)?;
        writeln!(f, "proofs accepted:  {}", self.proofs_accepted)?;
        writeln!(f, "mutants:          {}", self.mutants)?;
        writeln!(f, "mutants accepted: {}", self.mutants_accepted)?;
        writeln!(f, "net instances:    {}", self.net_instances)?;
        writeln!(f, "nets accepted:    {}", self.nets_accepted)?;
        write!(f, "violations:       {}", self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

pub fn run_differential(n: u64, seed: u64) -> FuzzReport {
    run_differential_with(&FuzzConfig::new(n, seed), &Checkers::default())
}

/// Each instance draws from its own stream of the seeded generator, so a
/// report depends only on the configuration.
pub fn run_differential_with(config: &FuzzConfig, checkers: &Checkers) -> FuzzReport {
    let mut report = FuzzReport::default();
    for i in 0..config.n {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(i);
        report.merge(instance(config, checkers, i, &mut rng));
    }
    report
}

fn instance(config: &FuzzConfig, checkers: &Checkers, i: u64, rng: &mut ChaCha8Rng) -> FuzzReport {
    let mut r = FuzzReport { formulas: 1, ..FuzzReport::default() };
    let f = random_formula_with(rng, config.max_leaves, config.max_vars);

    match Formula::parse(&f.print()) {
        Ok(g) if g == f => {}
        _ => r.violations.push(format!("#{i}: print/parse round trip failed for {f}")),
    }

    let valid = f.is_tautology();
    r.tautologies += u64::from(valid);
    match (prove_combinatorial(&f), valid) {
        (Ok(p), true) => {
            let verdict = verify(&p, false);
            if verdict.is_accepted() {
                r.proofs_accepted += 1;
            } else {
                r.violations.push(format!("#{i}: proof of {f} {verdict}"));
            }
            check_io(&p, i, &mut r);
            for m in 0..config.mutants_per_proof {
                let mutant = mutate(rng, &p);
                check_io(&mutant, i, &mut r);
                r.mutants += 1;
                let strict = verify(&mutant, false).is_accepted();
                let mixed = verify(&mutant, true).is_accepted();
                if strict && !mixed {
                    r.violations.push(format!("#{i}.{m}: accepted without MIX but rejected with it"));
                }
                if mixed {
                    r.mutants_accepted += 1;
                    if !mutant.lower.is_tautology() {
                        r.violations.push(format!("#{i}.{m}: accepted proof of non-tautology {}", mutant.lower));
                    }
                }
            }
        }
        (Ok(_), false) => r.violations.push(format!("#{i}: proved non-tautology {f}")),
        (Err(ProveError::NotValid), false) => {}
        (Err(e), _) => r.violations.push(format!("#{i}: no proof of {f}: {e}")),
    }

    let (g, l) = random_net_instance(rng, config);
    r.net_instances += 1;
    for mix in [false, true] {
        let fast = (checkers.fast)(&g, &l, mix);
        let slow = (checkers.exhaustive)(&g, &l, mix);
        if fast != slow {
            r.violations.push(format!(
                "#{i}: net checkers disagree on {g} with {:?} (mix={mix}): fast={fast}, exhaustive={slow}",
                l.pairs()
            ));
        }
        r.nets_accepted += u64::from(slow && !mix);
    }
    r
}

fn check_io(p: &CombinatorialProof, i: u64, r: &mut FuzzReport) {
    let text = save_proof_with_mix(p, false);
    match load_proof(&text) {
        Ok(back) if back.proof == *p => {}
        Ok(_) => r.violations.push(format!("#{i}: save/load changed the proof")),
        Err(e) => r.violations.push(format!("#{i}: saved proof does not load: {e}")),
    }
    if let Err(e) = validate_dot(&emit_figure(p)) {
        r.violations.push(format!("#{i}: figure is not valid DOT: {e}"));
    }
}

/// A (formula, linking) pair: a correct net, a correct MIX net, a correct
/// net with one connective flipped, or a random linking, with equal odds.
pub fn random_net_instance<R: Rng>(rng: &mut R, config: &FuzzConfig) -> (Formula, Linking) {
    let (leaves, vars) = (config.net_max_leaves.max(2), config.max_vars);
    match rng.gen_range(0..4) {
        0 => random_net(rng, leaves, vars, false),
        1 => random_net(rng, leaves, vars, true),
        2 => {
            let mix = rng.gen_bool(0.5);
            let (f, l) = random_net(rng, leaves, vars, mix);
            (flip_connective(rng, &f), l)
        }
        _ => random_linked(rng, leaves, vars),
    }
}

/// One random perturbation of the links, the map or either formula.
pub fn mutate<R: Rng>(rng: &mut R, p: &CombinatorialProof) -> CombinatorialProof {
    let mut m = p.clone();
    match rng.gen_range(0..6) {
        0 if m.linking.len() >= 2 => {
            // exchange partners between two links
            let mut pairs = m.linking.pairs().to_vec();
            let i = rng.gen_range(0..pairs.len());
            let j = (i + rng.gen_range(1..pairs.len())) % pairs.len();
            let (b, d) = (pairs[i].1, pairs[j].1);
            pairs[i].1 = d;
            pairs[j].1 = b;
            m.linking = Linking::new(pairs);
        }
        1 => {
            let mut pairs = m.linking.pairs().to_vec();
            pairs.remove(rng.gen_range(0..pairs.len()));
            m.linking = Linking::new(pairs);
        }
        2 => {
            // retarget one leaf to another leaf with the same label
            let u = rng.gen_range(0..m.map.len());
            let lit = m.upper.literal(u).clone();
            let same: Vec<usize> = m.lower.leaves().filter(|(_, l)| **l == lit).map(|(k, _)| k).collect();
            m.map.0[u] = *same.choose(rng).expect("image has the label");
        }
        3 => {
            let u = rng.gen_range(0..m.map.len());
            m.map.0[u] = rng.gen_range(0..m.lower.leaf_count());
        }
        4 => m.upper = flip_connective(rng, &m.upper),
        _ => {
            if rng.gen_bool(0.5) {
                m.lower = flip_connective(rng, &m.lower);
            } else {
                // negate one lower literal
                let k = rng.gen_range(0..m.lower.leaf_count());
                m.lower = replace_literal(&m.lower, k, m.lower.literal(k).dual());
            }
        }
    }
    m
}

fn replace_literal(f: &Formula, leaf: usize, lit: Literal) -> Formula {
    let mut literals: Vec<Literal> = f.leaves().map(|(_, l)| l.clone()).collect();
    literals[leaf] = lit;
    let mut it = literals.into_iter();
    fn go(f: &Formula, node: usize, it: &mut dyn Iterator<Item = Literal>) -> Nnf {
        match f.children(node) {
            None => Nnf::Lit(it.next().expect("one literal per leaf")),
            Some((l, r)) => {
                let (a, b) = (go(f, l, it), go(f, r, it));
                match f.connective(node) {
                    Some(crate::formula::Connective::And) => Nnf::and(a, b),
                    _ => Nnf::or(a, b),
                }
            }
        }
    }
    Formula::from_nnf(&go(f, f.root(), &mut it))
}

/// A uniformly random map into the lower formula, for corpus generation.
pub fn random_map<R: Rng>(rng: &mut R, upper: &Formula, lower: &Formula) -> LeafMap {
    LeafMap((0..upper.leaf_count()).map(|_| rng.gen_range(0..lower.leaf_count())).collect())
}
