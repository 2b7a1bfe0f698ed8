//! One-sided cut-free sequent calculus for NNF formulas.
//!
//! ```text
//!  ------------ Ax        ⊢ Γ, A, B, Δ             ⊢ Γ, A, Γ'    ⊢ Δ, B, Δ'
//!   ⊢ ~P, P              ------------- Or        ------------------------- And
//!                         ⊢ Γ, A|B, Δ              ⊢ Γ, A&B, Γ', Δ, Δ'
//!
//!   ⊢ Γ, A, Δ, A, Θ                 ⊢ Γ, Δ
//!  ----------------- Contract     ----------- Weaken
//!   ⊢ Γ, A, Δ, Θ                   ⊢ Γ, A, Δ
//! ```
//!
//! Positions are explicit in every rule, so no exchange rule is needed.

mod translate;

use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, Nnf};
use crate::proof::CombinatorialProof;

pub use translate::{translate, translate_checked, TranslateError};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Sequent(pub Vec<Nnf>);

impl Sequent {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn members(&self) -> &[Nnf] {
        &self.0
    }

    /// Left-associated disjunction of the members.
    pub fn disjunction(&self) -> Option<Nnf> {
        Nnf::or_all(self.0.iter().cloned())
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|-")?;
        for (i, m) in self.0.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { " " } else { ", " }, m)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Axiom,
    /// Members `at` and `at + 1` of the premise become one disjunction.
    Or { at: usize },
    /// Member `left` of the first premise is conjoined with member `right`
    /// of the second; the second premise's context is appended.
    And { left: usize, right: usize },
    /// Drops member `drop`, an identical copy of member `keep`.
    Contract { keep: usize, drop: usize },
    /// Conclusion member `at` is new.
    Weaken { at: usize },
}

impl Rule {
    fn arity(self) -> usize {
        match self {
            Rule::Axiom => 0,
            Rule::And { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequentProof {
    pub conclusion: Sequent,
    pub rule: Rule,
    pub premises: Vec<SequentProof>,
}

impl SequentProof {
    /// Number of rule applications.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(SequentProof::size).sum::<usize>()
    }

    pub fn count_rule(&self, pred: impl Fn(&Rule) -> bool + Copy) -> usize {
        usize::from(pred(&self.rule)) + self.premises.iter().map(|p| p.count_rule(pred)).sum::<usize>()
    }
}

/// `node` is the pre-order index of the offending rule application.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("node {node} ({rule:?}): {reason}")]
pub struct SequentError {
    pub node: usize,
    pub rule: Rule,
    pub reason: String,
}

/// The conclusion a rule yields from the given premises.
pub fn apply_rule(rule: Rule, premises: &[&Sequent], conclusion: &Sequent) -> Result<Sequent, String> {
    if premises.len() != rule.arity() {
        return Err(format!("expected {} premises, found {}", rule.arity(), premises.len()));
    }
    match rule {
        Rule::Axiom => match conclusion.members() {
            [Nnf::Lit(a), Nnf::Lit(b)] if a.is_dual_of(b) => Ok(conclusion.clone()),
            _ => Err("axiom conclusion must be two dual literals".into()),
        },
        Rule::Or { at } => {
            let p = premises[0].members();
            if at + 1 >= p.len() {
                return Err(format!("position {at} has no right neighbour in a sequent of {}", p.len()));
            }
            let mut out = p[..at].to_vec();
            out.push(Nnf::or(p[at].clone(), p[at + 1].clone()));
            out.extend_from_slice(&p[at + 2..]);
            Ok(Sequent(out))
        }
        Rule::And { left, right } => {
            let (p, q) = (premises[0].members(), premises[1].members());
            if left >= p.len() || right >= q.len() {
                return Err(format!("active positions ({left}, {right}) out of range"));
            }
            let mut out = p.to_vec();
            out[left] = Nnf::and(p[left].clone(), q[right].clone());
            out.extend(q.iter().enumerate().filter(|&(i, _)| i != right).map(|(_, m)| m.clone()));
            Ok(Sequent(out))
        }
        Rule::Contract { keep, drop } => {
            let p = premises[0].members();
            if keep == drop || keep >= p.len() || drop >= p.len() {
                return Err(format!("positions ({keep}, {drop}) must be distinct and in range"));
            }
            if p[keep] != p[drop] {
                return Err(format!("formulas not identical: {} and {}", p[keep], p[drop]));
            }
            let mut out = p.to_vec();
            out.remove(drop);
            Ok(Sequent(out))
        }
        Rule::Weaken { at } => {
            let p = premises[0].members();
            if at > p.len() || conclusion.len() != p.len() + 1 {
                return Err(format!("weakening at {at} must add exactly one member"));
            }
            let mut out = p.to_vec();
            out.insert(at, conclusion.0[at].clone());
            Ok(Sequent(out))
        }
    }
}

/// Checks every rule application, reporting the first bad node in
/// pre-order.
pub fn check_sequent_proof(p: &SequentProof) -> Result<(), SequentError> {
    fn go(p: &SequentProof, counter: &mut usize) -> Result<(), SequentError> {
        let node = *counter;
        *counter += 1;
        let premises: Vec<&Sequent> = p.premises.iter().map(|q| &q.conclusion).collect();
        match apply_rule(p.rule, &premises, &p.conclusion) {
            Ok(expected) if expected == p.conclusion => {}
            Ok(expected) => {
                return Err(SequentError {
                    node,
                    rule: p.rule,
                    reason: format!("conclusion should be {expected}, found {}", p.conclusion),
                })
            }
            Err(reason) => return Err(SequentError { node, rule: p.rule, reason }),
        }
        for q in &p.premises {
            go(q, counter)?;
        }
        Ok(())
    }
    go(p, &mut 0)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProveError {
    #[error("not valid: proof search failed")]
    NotValid,
    #[error(transparent)]
    Translate(#[from] TranslateError),
}

/// Proof search for `⊢ f`. Succeeds exactly on tautologies.
///
/// The strategy is invertible at every step: decompose the leftmost
/// disjunction; else close on the first dual literal pair and weaken the
/// rest; else split the leftmost conjunction keeping the whole context on
/// both sides and contract the duplicated copy away.
pub fn prove(f: &Formula) -> Result<SequentProof, ProveError> {
    let goal = f.to_nnf();
    search(&[&goal]).ok_or(ProveError::NotValid)
}

fn owned(seq: &[&Nnf]) -> Sequent {
    Sequent(seq.iter().map(|&m| m.clone()).collect())
}

fn search(seq: &[&Nnf]) -> Option<SequentProof> {
    if let Some(i) = seq.iter().position(|m| matches!(m, Nnf::Or(..))) {
        let Nnf::Or(a, b) = seq[i] else { unreachable!() };
        let mut premise = Vec::with_capacity(seq.len() + 1);
        premise.extend_from_slice(&seq[..i]);
        premise.push(&**a);
        premise.push(&**b);
        premise.extend_from_slice(&seq[i + 1..]);
        let sub = search(&premise)?;
        return Some(SequentProof { conclusion: owned(seq), rule: Rule::Or { at: i }, premises: vec![sub] });
    }

    if let Some((i, j)) = dual_pair(seq) {
        let mut proof = SequentProof { conclusion: owned(&[seq[i], seq[j]]), rule: Rule::Axiom, premises: vec![] };
        for p in (0..seq.len()).filter(|&p| p != i && p != j) {
            let mut members = proof.conclusion.0.clone();
            members.insert(p, seq[p].clone());
            proof = SequentProof { conclusion: Sequent(members), rule: Rule::Weaken { at: p }, premises: vec![proof] };
        }
        return Some(proof);
    }

    let i = seq.iter().position(|m| matches!(m, Nnf::And(..)))?;
    let Nnf::And(a, b) = seq[i] else { unreachable!() };
    let n = seq.len();
    let mut left_seq = seq.to_vec();
    left_seq[i] = a;
    let mut right_seq = seq.to_vec();
    right_seq[i] = b;
    let left = search(&left_seq)?;
    let right = search(&right_seq)?;

    let mut members: Vec<Nnf> = seq.iter().map(|&m| m.clone()).collect();
    members.extend(seq.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &m)| m.clone()));
    let mut proof = SequentProof {
        conclusion: Sequent(members),
        rule: Rule::And { left: i, right: i },
        premises: vec![left, right],
    };
    // the copy of context member t sits at n + t
    for t in (0..n - 1).rev() {
        let keep = if t < i { t } else { t + 1 };
        let mut members = proof.conclusion.0.clone();
        members.remove(n + t);
        proof = SequentProof {
            conclusion: Sequent(members),
            rule: Rule::Contract { keep, drop: n + t },
            premises: vec![proof],
        };
    }
    Some(proof)
}

fn dual_pair(seq: &[&Nnf]) -> Option<(usize, usize)> {
    for (i, a) in seq.iter().enumerate() {
        let Some(a) = a.as_literal() else { continue };
        for (j, b) in seq.iter().enumerate().skip(i + 1) {
            if b.as_literal().is_some_and(|b| a.is_dual_of(b)) {
                return Some((i, j));
            }
        }
    }
    None
}

/// `translate(prove(f))`: a combinatorial proof of `f`, or failure exactly
/// when `f` is not valid.
pub fn prove_combinatorial(f: &Formula) -> Result<CombinatorialProof, ProveError> {
    Ok(translate(&prove(f)?)?)
}
