//! Seeded generators for formulas, linkings and proof nets.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Formula, Literal, Nnf};
use crate::net::Linking;

const NAMES: [&str; 8] = ["P", "Q", "R", "S", "T", "U", "V", "W"];

pub fn var_name(i: usize) -> String {
    NAMES.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("X{i}"))
}

/// Deterministic for a fixed seed; at most `max_leaves` leaves over at
/// most `max_vars` variables.
pub fn random_formula(seed: u64, max_leaves: usize, max_vars: usize) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_formula_with(&mut rng, max_leaves, max_vars)
}

pub fn random_formula_with<R: Rng>(rng: &mut R, max_leaves: usize, max_vars: usize) -> Formula {
    assert!(max_leaves >= 1 && max_vars >= 1);
    let n = rng.gen_range(1..=max_leaves);
    let literals: Vec<Literal> = (0..n).map(|_| random_literal(rng, max_vars)).collect();
    Formula::from_nnf(&random_shape(rng, &literals))
}

fn random_literal<R: Rng>(rng: &mut R, vars: usize) -> Literal {
    Literal { var: var_name(rng.gen_range(0..vars)), negated: rng.gen_bool(0.5) }
}

/// Random binary tree with random connectives over the given leaves, in
/// order.
pub fn random_shape<R: Rng>(rng: &mut R, leaves: &[Literal]) -> Nnf {
    if leaves.len() == 1 {
        return Nnf::Lit(leaves[0].clone());
    }
    let split = rng.gen_range(1..leaves.len());
    let left = random_shape(rng, &leaves[..split]);
    let right = random_shape(rng, &leaves[split..]);
    if rng.gen_bool(0.5) {
        Nnf::and(left, right)
    } else {
        Nnf::or(left, right)
    }
}

/// A random formula with a random valid linking: leaves are paired first
/// and each pair gets dual literals. Usually not a proof net.
pub fn random_linked<R: Rng>(rng: &mut R, max_leaves: usize, max_vars: usize) -> (Formula, Linking) {
    assert!(max_leaves >= 2);
    let pairs = rng.gen_range(1..=max_leaves / 2);
    let mut slots: Vec<usize> = (0..2 * pairs).collect();
    slots.shuffle(rng);
    let mut literals = vec![Literal::pos(""); 2 * pairs];
    let mut links = Vec::with_capacity(pairs);
    for pair in slots.chunks(2) {
        let lit = random_literal(rng, max_vars);
        literals[pair[1]] = lit.dual();
        literals[pair[0]] = lit;
        links.push((pair[0], pair[1]));
    }
    (Formula::from_nnf(&random_shape(rng, &literals)), Linking::new(links))
}

/// A proof net built from a random MLL derivation (with MIX steps when
/// `mix`), so it passes the corresponding criterion by construction.
pub fn random_net<R: Rng>(rng: &mut R, max_leaves: usize, max_vars: usize, mix: bool) -> (Formula, Linking) {
    assert!(max_leaves >= 2);
    let pairs = rng.gen_range(1..=max_leaves / 2);
    // axiom k is over the placeholder variable "#k"
    let mut pieces: Vec<Vec<Nnf>> = (0..pairs)
        .map(|k| {
            let mut s = vec![Nnf::pos(format!("#{k}")), Nnf::neg(format!("#{k}"))];
            s.shuffle(rng);
            s
        })
        .collect();
    while pieces.len() > 1 || pieces[0].len() > 1 {
        let parable: Vec<usize> = (0..pieces.len()).filter(|&i| pieces[i].len() >= 2).collect();
        let can_join = pieces.len() >= 2;
        let join = can_join && (parable.is_empty() || rng.gen_bool(0.5));
        if join {
            let i = rng.gen_range(0..pieces.len());
            let mut j = rng.gen_range(0..pieces.len() - 1);
            if j >= i {
                j += 1;
            }
            let (hi, lo) = (i.max(j), i.min(j));
            let mut b = pieces.swap_remove(hi);
            let mut a = pieces.swap_remove(lo);
            if mix && rng.gen_bool(0.25) {
                a.append(&mut b);
            } else {
                let x = a.swap_remove(rng.gen_range(0..a.len()));
                let y = b.swap_remove(rng.gen_range(0..b.len()));
                a.append(&mut b);
                a.push(if rng.gen_bool(0.5) { Nnf::and(x, y) } else { Nnf::and(y, x) });
            }
            a.shuffle(rng);
            pieces.push(a);
        } else {
            let piece = &mut pieces[*parable.choose(rng).expect("some piece has two formulas")];
            piece.shuffle(rng);
            let x = piece.pop().expect("len >= 2");
            let y = piece.pop().expect("len >= 2");
            let insert = rng.gen_range(0..=piece.len());
            piece.insert(insert, Nnf::or(x, y));
        }
    }
    let tree = pieces.pop().and_then(|mut p| p.pop()).expect("one formula remains");

    let placeholder = Formula::from_nnf(&tree);
    let mut by_axiom: HashMap<&str, Vec<usize>> = HashMap::new();
    for (leaf, lit) in placeholder.leaves() {
        by_axiom.entry(lit.var.as_str()).or_default().push(leaf);
    }
    let mut names: Vec<&str> = by_axiom.keys().copied().collect();
    names.sort_unstable();
    let mut relabel: HashMap<&str, (String, bool)> = HashMap::new();
    for name in names {
        relabel.insert(name, (var_name(rng.gen_range(0..max_vars)), rng.gen_bool(0.5)));
    }
    let literals: Vec<Literal> = placeholder
        .leaves()
        .map(|(_, lit)| {
            let (var, flip) = &relabel[lit.var.as_str()];
            Literal { var: var.clone(), negated: lit.negated != *flip }
        })
        .collect();
    let linking = Linking::new(by_axiom.values().map(|v| (v[0], v[1])));
    (relabel_tree(&tree, &mut literals.into_iter()), linking)
}

fn relabel_tree(tree: &Nnf, literals: &mut impl Iterator<Item = Literal>) -> Formula {
    fn go(tree: &Nnf, literals: &mut dyn Iterator<Item = Literal>) -> Nnf {
        match tree {
            Nnf::Lit(_) => Nnf::Lit(literals.next().expect("one literal per leaf")),
            Nnf::And(a, b) => {
                let a = go(a, literals);
                Nnf::and(a, go(b, literals))
            }
            Nnf::Or(a, b) => {
                let a = go(a, literals);
                Nnf::or(a, go(b, literals))
            }
        }
    }
    Formula::from_nnf(&go(tree, literals))
}

/// Flips the connective at a random branch node (the linking stays valid).
pub fn flip_connective<R: Rng>(rng: &mut R, f: &Formula) -> Formula {
    let branches: Vec<usize> = (0..f.node_count()).filter(|&n| !f.is_leaf_node(n)).collect();
    let Some(&target) = branches.choose(rng) else { return f.clone() };
    fn go(f: &Formula, node: usize, target: usize) -> Nnf {
        match f.children(node) {
            None => f.subtree(node),
            Some((l, r)) => {
                let (a, b) = (go(f, l, target), go(f, r, target));
                let is_and = f.connective(node) == Some(crate::formula::Connective::And);
                if is_and != (node == target) {
                    Nnf::and(a, b)
                } else {
                    Nnf::or(a, b)
                }
            }
        }
    }
    Formula::from_nnf(&go(f, f.root(), target))
}
