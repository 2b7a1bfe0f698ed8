//! Sequent proofs to combinatorial proofs.
//!
//! The translation walks the derivation bottom-up (from the axioms) and
//! keeps a list of upper formulas ("parts"). Each part is tagged with the
//! member of the current conclusion its leaves map into. Axioms create two
//! one-leaf parts, `And` tensors together the parts tagged to its two
//! active members, and the structural rules only move tags around. At the
//! root all parts are joined by `Or` into the upper formula.

use std::collections::HashMap;

use thiserror::Error;

use super::{check_sequent_proof, Rule, Sequent, SequentError, SequentProof};
use crate::formula::{Formula, LeafId, Nnf};
use crate::net::{dr_check_fast, Linking};
use crate::proof::{check_cliques, check_labels, CombinatorialProof, LeafMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranslateError {
    #[error("malformed sequent proof: {0}")]
    Malformed(#[from] SequentError),
    #[error("translation invariant broken at node {node}: {reason}")]
    Invariant { node: usize, reason: String },
}

/// Upper leaves are named by tokens that stay fixed while parts are
/// merged and reordered.
type Token = usize;

#[derive(Clone, Debug)]
struct Part {
    formula: Nnf,
    tag: usize,
    leaves: Vec<Token>,
}

#[derive(Clone, Debug, Default)]
struct Tagged {
    parts: Vec<Part>,
    links: Vec<(Token, Token)>,
    /// Leaf of the tagged member each token maps to.
    image: HashMap<Token, LeafId>,
}

impl Tagged {
    fn retag(&mut self, f: impl Fn(usize) -> usize) {
        for part in &mut self.parts {
            part.tag = f(part.tag);
        }
    }

    fn shift(&mut self, part: usize, offset: usize) {
        for t in &self.parts[part].leaves {
            *self.image.get_mut(t).expect("every token has an image") += offset;
        }
    }
}

struct Translator {
    next_token: Token,
    check: bool,
    node: usize,
}

pub fn translate(p: &SequentProof) -> Result<CombinatorialProof, TranslateError> {
    run(p, false)
}

/// Like [`translate`], but re-checks the translation invariants after every
/// rule: each part maps label-correctly into its tagged member, cliques of
/// each part map to cliques of that member, and the parts form a proof net
/// without MIX.
pub fn translate_checked(p: &SequentProof) -> Result<CombinatorialProof, TranslateError> {
    run(p, true)
}

fn run(p: &SequentProof, check: bool) -> Result<CombinatorialProof, TranslateError> {
    check_sequent_proof(p)?;
    let mut tr = Translator { next_token: 0, check, node: 0 };
    let tagged = tr.go(p)?;
    Ok(assemble(&p.conclusion, &tagged))
}

impl Translator {
    fn go(&mut self, p: &SequentProof) -> Result<Tagged, TranslateError> {
        let node = self.node;
        self.node += 1;
        let out = match p.rule {
            Rule::Axiom => {
                let (a, b) = (self.next_token, self.next_token + 1);
                self.next_token += 2;
                let parts = p
                    .conclusion
                    .members()
                    .iter()
                    .zip([a, b])
                    .enumerate()
                    .map(|(tag, (m, t))| Part { formula: m.clone(), tag, leaves: vec![t] })
                    .collect();
                Tagged { parts, links: vec![(a, b)], image: HashMap::from([(a, 0), (b, 0)]) }
            }
            Rule::Or { at } => {
                let premise = &p.premises[0];
                let mut t = self.go(premise)?;
                let offset = premise.conclusion.0[at].leaf_count();
                for i in 0..t.parts.len() {
                    if t.parts[i].tag == at + 1 {
                        t.shift(i, offset);
                    }
                }
                t.retag(|tag| if tag > at { tag - 1 } else { tag });
                t
            }
            Rule::Contract { keep, drop } => {
                let mut t = self.go(&p.premises[0])?;
                let keep = if keep > drop { keep - 1 } else { keep };
                t.retag(|tag| match tag {
                    tag if tag == drop => keep,
                    tag if tag > drop => tag - 1,
                    tag => tag,
                });
                t
            }
            Rule::Weaken { at } => {
                let mut t = self.go(&p.premises[0])?;
                t.retag(|tag| if tag >= at { tag + 1 } else { tag });
                t
            }
            Rule::And { left, right } => {
                let (first, second) = (&p.premises[0], &p.premises[1]);
                let t1 = self.go(first)?;
                let t2 = self.go(second)?;
                and_step(t1, t2, left, right, first.conclusion.len(), first.conclusion.0[left].leaf_count())
            }
        };
        if self.check {
            check_invariants(node, &p.conclusion, &out)?;
        }
        Ok(out)
    }
}

fn and_step(t1: Tagged, mut t2: Tagged, left: usize, right: usize, first_len: usize, left_leaves: usize) -> Tagged {
    let retag_second = |tag: usize| {
        if tag == right {
            left
        } else {
            first_len + tag - usize::from(tag > right)
        }
    };
    let has_left = t1.parts.iter().any(|p| p.tag == left);
    let has_right = t2.parts.iter().any(|p| p.tag == right);
    if !has_left {
        // premise one already proves the conclusion
        return t1;
    }
    if !has_right {
        t2.retag(retag_second);
        return t2;
    }

    for i in 0..t2.parts.len() {
        if t2.parts[i].tag == right {
            t2.shift(i, left_leaves);
        }
    }
    let mut image = t1.image;
    image.extend(t2.image);
    let mut links = t1.links;
    links.extend(t2.links);

    // merged part goes after the remaining parts of premise one
    let (us, mut rest): (Vec<Part>, Vec<Part>) = t1.parts.into_iter().partition(|p| p.tag == left);
    let (vs, others): (Vec<Part>, Vec<Part>) = t2.parts.into_iter().partition(|p| p.tag == right);

    let u_formula = Nnf::or_all(us.iter().map(|p| p.formula.clone())).expect("nonempty");
    let v_formula = Nnf::or_all(vs.iter().map(|p| p.formula.clone())).expect("nonempty");
    let leaves = us.iter().chain(vs.iter()).flat_map(|p| p.leaves.iter().copied()).collect();
    let merged = Part { formula: Nnf::and(u_formula, v_formula), tag: left, leaves };
    rest.push(merged);
    rest.extend(others.into_iter().map(|mut p| {
        p.tag = retag_second(p.tag);
        p
    }));
    Tagged { parts: rest, links, image }
}

fn member_offsets(conclusion: &Sequent) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(conclusion.len());
    let mut acc = 0;
    for m in conclusion.members() {
        offsets.push(acc);
        acc += m.leaf_count();
    }
    offsets
}

/// Joins the parts into one upper formula over the disjunction of the
/// conclusion.
fn assemble(conclusion: &Sequent, t: &Tagged) -> CombinatorialProof {
    let lower = Formula::from_nnf(&conclusion.disjunction().expect("conclusions are nonempty"));
    let upper = Formula::from_nnf(&Nnf::or_all(t.parts.iter().map(|p| p.formula.clone())).expect("parts are nonempty"));
    let offsets = member_offsets(conclusion);
    let mut index = HashMap::new();
    let mut map = Vec::new();
    for part in &t.parts {
        for tok in &part.leaves {
            index.insert(*tok, map.len());
            map.push(offsets[part.tag] + t.image[tok]);
        }
    }
    let linking = Linking::new(t.links.iter().map(|(a, b)| (index[a], index[b])));
    CombinatorialProof { lower, upper, linking, map: LeafMap(map) }
}

fn check_invariants(node: usize, conclusion: &Sequent, t: &Tagged) -> Result<(), TranslateError> {
    let fail = |reason: String| Err(TranslateError::Invariant { node, reason });
    if t.parts.is_empty() {
        return fail("no upper formulas".into());
    }
    for (i, part) in t.parts.iter().enumerate() {
        let Some(member) = conclusion.members().get(part.tag) else {
            return fail(format!("part {i} tagged to missing member {}", part.tag));
        };
        let upper = Formula::from_nnf(&part.formula);
        let lower = Formula::from_nnf(member);
        let map = LeafMap(part.leaves.iter().map(|tok| t.image[tok]).collect());
        if let Err(e) = check_labels(&upper, &lower, &map) {
            return fail(format!("part {i}: {e}"));
        }
        if let Err(e) = check_cliques(&upper, &lower, &map) {
            return fail(format!("part {i}: {e}"));
        }
    }
    let whole = assemble(conclusion, t);
    if !dr_check_fast(&whole.upper, &whole.linking, false) {
        return fail("upper parts do not form a proof net without MIX".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::{verify, Verdict};
    use crate::sequent::prove;

    fn nnf(s: &str) -> Nnf {
        Formula::parse(s).unwrap().to_nnf()
    }

    #[test]
    fn excluded_middle_translation() {
        let f = Formula::parse("~P | P").unwrap();
        let cp = translate_checked(&prove(&f).unwrap()).unwrap();
        assert_eq!(cp.upper, f);
        assert_eq!(cp.lower, f);
        assert_eq!(cp.linking, Linking::new([(0, 1)]));
        assert_eq!(cp.map, LeafMap(vec![0, 1]));
        assert_eq!(verify(&cp, false), Verdict::Accepted);
    }

    #[test]
    fn peirce_translation() {
        let f = Formula::parse("((P -> Q) -> P) -> P").unwrap();
        let cp = translate_checked(&prove(&f).unwrap()).unwrap();
        assert_eq!(cp.lower, f);
        assert_eq!(verify(&cp, false), Verdict::Accepted);
    }

    #[test]
    fn weakened_member_receives_nothing() {
        let ax = SequentProof { conclusion: Sequent(vec![nnf("~P"), nnf("P")]), rule: Rule::Axiom, premises: vec![] };
        let w = SequentProof {
            conclusion: Sequent(vec![nnf("~P"), nnf("P"), nnf("Q & R")]),
            rule: Rule::Weaken { at: 2 },
            premises: vec![ax],
        };
        let cp = translate_checked(&w).unwrap();
        assert_eq!(cp.lower.print(), "~P | P | (Q & R)");
        assert!(cp.map.as_slice().iter().all(|&x| x < 2));
        assert_eq!(verify(&cp, false), Verdict::Accepted);
    }

    #[test]
    fn and_with_unused_premise_is_pruned() {
        // from ⊢ ~P, P, Q and ⊢ R, ~R infer ⊢ ~P, P, Q & R, ~R; the active
        // member Q of the first premise receives no leaves
        let ax1 = SequentProof { conclusion: Sequent(vec![nnf("~P"), nnf("P")]), rule: Rule::Axiom, premises: vec![] };
        let w1 = SequentProof {
            conclusion: Sequent(vec![nnf("~P"), nnf("P"), nnf("Q")]),
            rule: Rule::Weaken { at: 2 },
            premises: vec![ax1],
        };
        let ax2 = SequentProof { conclusion: Sequent(vec![nnf("R"), nnf("~R")]), rule: Rule::Axiom, premises: vec![] };
        let and = SequentProof {
            conclusion: Sequent(vec![nnf("~P"), nnf("P"), nnf("Q & R"), nnf("~R")]),
            rule: Rule::And { left: 2, right: 0 },
            premises: vec![w1, ax2],
        };
        let cp = translate_checked(&and).unwrap();
        assert_eq!(cp.upper.leaf_count(), 2);
        assert_eq!(verify(&cp, false), Verdict::Accepted);
    }

    #[test]
    fn malformed_input_is_refused() {
        let bad = SequentProof { conclusion: Sequent(vec![nnf("P"), nnf("Q")]), rule: Rule::Axiom, premises: vec![] };
        assert!(matches!(translate(&bad), Err(TranslateError::Malformed(_))));
    }
}
