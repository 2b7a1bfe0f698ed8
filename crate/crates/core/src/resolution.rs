//! ∨-resolutions and cliques.
//!
//! A resolution deletes one argument subtree of every surviving `Or` node;
//! the leaves that remain form a clique. Only `Or` nodes that survive the
//! choices made above them carry a choice, so distinct resolutions give
//! distinct cliques.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::formula::{Connective, Formula, FormulaError, LeafId, Node, NodeId, Side};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Resolution {
    pub choices: BTreeMap<NodeId, Side>,
}

impl Resolution {
    pub fn new(choices: impl IntoIterator<Item = (NodeId, Side)>) -> Self {
        Resolution { choices: choices.into_iter().collect() }
    }
}

/// Sorted, duplicate-free set of leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clique(Vec<LeafId>);

impl Clique {
    pub fn new(leaves: impl IntoIterator<Item = LeafId>) -> Self {
        let set: BTreeSet<LeafId> = leaves.into_iter().collect();
        Clique(set.into_iter().collect())
    }

    pub fn leaves(&self) -> &[LeafId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, leaf: LeafId) -> bool {
        self.0.binary_search(&leaf).is_ok()
    }
}

impl fmt::Display for Clique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("no choice for surviving or-node {0}")]
    MissingChoice(NodeId),
    #[error("choice at node {0}, which is not a surviving or-node")]
    UnexpectedChoice(NodeId),
}

/// Every resolution exactly once, depth-first with `Left` before `Right`.
pub fn enumerate_resolutions(f: &Formula) -> Vec<Resolution> {
    fn go(f: &Formula, node: NodeId) -> Vec<Vec<(NodeId, Side)>> {
        match f.node(node) {
            Node::Leaf { .. } => vec![Vec::new()],
            Node::Branch { op: Connective::And, left, right } => {
                let rs = go(f, *right);
                let mut out = Vec::new();
                for l in go(f, *left) {
                    for r in &rs {
                        let mut c = l.clone();
                        c.extend_from_slice(r);
                        out.push(c);
                    }
                }
                out
            }
            Node::Branch { op: Connective::Or, left, right } => {
                let mut out = Vec::new();
                for (side, child) in [(Side::Left, *left), (Side::Right, *right)] {
                    for mut c in go(f, child) {
                        c.push((node, side));
                        out.push(c);
                    }
                }
                out
            }
        }
    }
    go(f, f.root()).into_iter().map(Resolution::new).collect()
}

/// Closed-form count: 1 at a leaf, product at `And`, sum at `Or`.
pub fn count_resolutions(f: &Formula) -> u128 {
    fn go(f: &Formula, node: NodeId) -> u128 {
        match f.node(node) {
            Node::Leaf { .. } => 1,
            Node::Branch { op: Connective::And, left, right } => go(f, *left).saturating_mul(go(f, *right)),
            Node::Branch { op: Connective::Or, left, right } => go(f, *left).saturating_add(go(f, *right)),
        }
    }
    go(f, f.root())
}

/// Leaves surviving the resolution. The choice map must cover exactly the
/// surviving `Or` nodes.
pub fn resolution_leaves(f: &Formula, r: &Resolution) -> Result<Clique, ResolutionError> {
    let mut leaves = Vec::new();
    let mut used = 0;
    let mut stack = vec![f.root()];
    while let Some(node) = stack.pop() {
        match f.node(node) {
            Node::Leaf { leaf, .. } => leaves.push(*leaf),
            Node::Branch { op: Connective::And, left, right } => {
                stack.push(*right);
                stack.push(*left);
            }
            Node::Branch { op: Connective::Or, left, right } => {
                let side = r.choices.get(&node).ok_or(ResolutionError::MissingChoice(node))?;
                used += 1;
                stack.push(if *side == Side::Left { *left } else { *right });
            }
        }
    }
    if used != r.choices.len() {
        let surviving: HashSet<NodeId> = surviving_or_nodes(f, r);
        let extra = r.choices.keys().find(|n| !surviving.contains(n)).copied();
        return Err(ResolutionError::UnexpectedChoice(extra.unwrap_or_default()));
    }
    Ok(Clique::new(leaves))
}

fn surviving_or_nodes(f: &Formula, r: &Resolution) -> HashSet<NodeId> {
    let mut out = HashSet::new();
    let mut stack = vec![f.root()];
    while let Some(node) = stack.pop() {
        if let Node::Branch { op, left, right } = f.node(node) {
            match op {
                Connective::And => stack.extend([*left, *right]),
                Connective::Or => {
                    out.insert(node);
                    match r.choices.get(&node) {
                        Some(Side::Left) => stack.push(*left),
                        Some(Side::Right) => stack.push(*right),
                        None => {}
                    }
                }
            }
        }
    }
    out
}

/// All cliques of `f`, in resolution enumeration order.
pub fn cliques(f: &Formula) -> Vec<Clique> {
    let mut seen = HashSet::new();
    enumerate_resolutions(f)
        .iter()
        .map(|r| resolution_leaves(f, r).expect("enumerated resolutions are valid"))
        .filter(|c| seen.insert(c.clone()))
        .collect()
}

/// Clique test without enumeration: nonempty, every pair meets at `And`,
/// and no outside leaf meets every member at `And`.
pub fn is_clique(f: &Formula, leaves: &[LeafId]) -> Result<bool, FormulaError> {
    for &l in leaves {
        f.check_leaf(l)?;
    }
    let set: BTreeSet<LeafId> = leaves.iter().copied().collect();
    if set.is_empty() {
        return Ok(false);
    }
    let members: Vec<LeafId> = set.iter().copied().collect();
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            if f.meet_unchecked(a, b) != Connective::And {
                return Ok(false);
            }
        }
    }
    let extendable = (0..f.leaf_count())
        .filter(|x| !set.contains(x))
        .any(|x| members.iter().all(|&m| f.meet_unchecked(x, m) == Connective::And));
    Ok(!extendable)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn peirce() -> Formula {
        Formula::parse("((~P | Q) & ~P) | P").unwrap()
    }

    #[test]
    fn resolution_counts() {
        assert_eq!(enumerate_resolutions(&Formula::parse("P | Q").unwrap()).len(), 2);
        assert_eq!(enumerate_resolutions(&peirce()).len(), 3);
        let pq = enumerate_resolutions(&Formula::parse("P & Q").unwrap());
        assert_eq!(pq, vec![Resolution::default()]);
        assert_eq!(count_resolutions(&Formula::parse("P").unwrap()), 1);
        assert_eq!(count_resolutions(&peirce()), 3);
        assert_eq!(count_resolutions(&Formula::parse("(P | Q) & (R | S)").unwrap()), 4);
    }

    #[test]
    fn enumeration_order_is_left_first() {
        let rs = enumerate_resolutions(&peirce());
        // outer or = node 0, inner or = node 2
        assert_eq!(rs[0], Resolution::new([(0, Side::Left), (2, Side::Left)]));
        assert_eq!(rs[1], Resolution::new([(0, Side::Left), (2, Side::Right)]));
        assert_eq!(rs[2], Resolution::new([(0, Side::Right)]));
    }

    #[test]
    fn leaves_of_resolutions() {
        let f = peirce();
        let r = Resolution::new([(0, Side::Left), (2, Side::Left)]);
        assert_eq!(resolution_leaves(&f, &r), Ok(Clique::new([0, 2])));
        let r = Resolution::new([(0, Side::Right)]);
        assert_eq!(resolution_leaves(&f, &r), Ok(Clique::new([3])));
        let g = Formula::parse("P & Q").unwrap();
        assert_eq!(resolution_leaves(&g, &Resolution::default()), Ok(Clique::new([0, 1])));
    }

    #[test]
    fn invalid_choice_maps() {
        let f = peirce();
        assert_eq!(
            resolution_leaves(&f, &Resolution::new([(0, Side::Left)])),
            Err(ResolutionError::MissingChoice(2))
        );
        // node 2 is deleted when the outer or keeps its right argument
        assert_eq!(
            resolution_leaves(&f, &Resolution::new([(0, Side::Right), (2, Side::Left)])),
            Err(ResolutionError::UnexpectedChoice(2))
        );
        assert_eq!(
            resolution_leaves(&f, &Resolution::new([(0, Side::Right), (1, Side::Left)])),
            Err(ResolutionError::UnexpectedChoice(1))
        );
    }

    #[test]
    fn clique_families() {
        assert_eq!(
            cliques(&peirce()),
            vec![Clique::new([0, 2]), Clique::new([1, 2]), Clique::new([3])]
        );
        assert_eq!(cliques(&Formula::parse("P").unwrap()), vec![Clique::new([0])]);
        let upper = Formula::parse("(~P & ~P) | (P | P)").unwrap();
        assert_eq!(
            cliques(&upper),
            vec![Clique::new([0, 1]), Clique::new([2]), Clique::new([3])]
        );
    }

    #[test]
    fn clique_characterization() {
        let f = peirce();
        assert_eq!(is_clique(&f, &[0, 2]), Ok(true));
        assert_eq!(is_clique(&f, &[0]), Ok(false));
        assert_eq!(is_clique(&f, &[0, 1]), Ok(false));
        assert_eq!(is_clique(&f, &[3]), Ok(true));
        assert_eq!(is_clique(&f, &[]), Ok(false));
        assert!(is_clique(&f, &[9]).is_err());
    }
}
