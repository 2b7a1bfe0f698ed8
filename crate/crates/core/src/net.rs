//! Axiom linkings and the switching correctness criterion.
//!
//! A formula is read as an MLL formula (`And` = tensor, `Or` = par). A
//! linking pairs up its leaves with dual literals. The structure is a
//! proof net when every switching graph is acyclic and, unless MIX is
//! allowed, connected.
//!
//! [`dr_check_exhaustive`] enumerates all `2^#Or` switchings and is the
//! reference. [`dr_check_fast`] decides the same property by
//! sequentialization: terminal pars are stripped, components are split
//! apart, and a terminal tensor whose removal disconnects its premises is
//! removed. An acyclic structure without terminal pars always has such a
//! splitting tensor in every nontrivial component, so getting stuck means
//! some switching has a cycle.

use std::collections::BTreeMap;
use std::fmt;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::formula::{Connective, Formula, LeafId, Literal, NodeId, Side};

/// Axiom links as normalized unordered pairs (`a < b`, sorted).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Linking {
    pairs: Vec<(LeafId, LeafId)>,
}

impl Linking {
    pub fn new(pairs: impl IntoIterator<Item = (LeafId, LeafId)>) -> Self {
        let mut pairs: Vec<(LeafId, LeafId)> =
            pairs.into_iter().map(|(a, b)| if a <= b { (a, b) } else { (b, a) }).collect();
        pairs.sort_unstable();
        Linking { pairs }
    }

    pub fn pairs(&self) -> &[(LeafId, LeafId)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinkingError {
    #[error("pair ({a},{b}) names leaf {leaf}, but the formula has {leaf_count} leaves")]
    LeafOutOfRange { a: LeafId, b: LeafId, leaf: LeafId, leaf_count: usize },
    #[error("pair ({0},{0}) links a leaf to itself")]
    SelfLink(LeafId),
    #[error("leaf {leaf} is linked twice (pair ({a},{b}))")]
    LinkedTwice { leaf: LeafId, a: LeafId, b: LeafId },
    #[error("pair ({a},{b}) joins non-dual literals {left} and {right}")]
    NotDual { a: LeafId, b: LeafId, left: Literal, right: Literal },
    #[error("leaf {0} unlinked")]
    Unlinked(LeafId),
}

/// Partner of every leaf, checking the partition and duality conditions.
pub fn partners(f: &Formula, l: &Linking) -> Result<Vec<LeafId>, LinkingError> {
    let n = f.leaf_count();
    let mut partner = vec![usize::MAX; n];
    for &(a, b) in l.pairs() {
        if let Some(&leaf) = [a, b].iter().find(|&&x| x >= n) {
            return Err(LinkingError::LeafOutOfRange { a, b, leaf, leaf_count: n });
        }
        if a == b {
            return Err(LinkingError::SelfLink(a));
        }
        if let Some(&leaf) = [a, b].iter().find(|&&x| partner[x] != usize::MAX) {
            return Err(LinkingError::LinkedTwice { leaf, a, b });
        }
        let (left, right) = (f.literal(a), f.literal(b));
        if !left.is_dual_of(right) {
            return Err(LinkingError::NotDual { a, b, left: left.clone(), right: right.clone() });
        }
        partner[a] = b;
        partner[b] = a;
    }
    match partner.iter().position(|&p| p == usize::MAX) {
        Some(leaf) => Err(LinkingError::Unlinked(leaf)),
        None => Ok(partner),
    }
}

pub fn validate_linking(f: &Formula, l: &Linking) -> Result<(), LinkingError> {
    partners(f, l).map(|_| ())
}

/// A choice of premise for every `Or` (par) node.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Switching {
    pub choices: BTreeMap<NodeId, Side>,
}

impl Switching {
    pub fn new(choices: impl IntoIterator<Item = (NodeId, Side)>) -> Self {
        Switching { choices: choices.into_iter().collect() }
    }

    /// The `index`-th switching: bit `i` picks the side of the `i`-th `Or`
    /// node in `NodeId` order, `0` meaning `Left`.
    pub fn from_index(f: &Formula, index: u64) -> Self {
        let choices = f
            .nodes_with(Connective::Or)
            .into_iter()
            .enumerate()
            .map(|(i, n)| (n, if (index >> i) & 1 == 0 { Side::Left } else { Side::Right }));
        Switching::new(choices)
    }
}

impl fmt::Display for Switching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (node, side)) in self.choices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{node}:{side}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetError {
    #[error(transparent)]
    Linking(#[from] LinkingError),
    #[error("switching has no choice for or-node {0}")]
    PartialSwitching(NodeId),
    #[error("switching chooses at node {0}, which is not an or-node")]
    NotAnOrNode(NodeId),
}

/// Undirected graph over the formula's `NodeId`s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchGraph {
    pub vertex_count: usize,
    pub edges: Vec<(NodeId, NodeId)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphShape {
    pub acyclic: bool,
    pub components: usize,
}

impl SwitchGraph {
    pub fn shape(&self) -> GraphShape {
        let mut uf = UnionFind::new(self.vertex_count);
        let mut acyclic = true;
        let mut components = self.vertex_count;
        for &(a, b) in &self.edges {
            if uf.union(a, b) {
                components -= 1;
            } else {
                acyclic = false;
            }
        }
        GraphShape { acyclic, components }
    }
}

/// Switching graph: tensor nodes keep both premise edges, par nodes keep
/// the chosen one, and each axiom pair adds a leaf-leaf edge.
pub fn switch_graph(f: &Formula, l: &Linking, s: &Switching) -> Result<SwitchGraph, NetError> {
    validate_linking(f, l)?;
    if let Some(&n) = s.choices.keys().find(|&&n| n >= f.node_count() || f.connective(n) != Some(Connective::Or)) {
        return Err(NetError::NotAnOrNode(n));
    }
    let mut edges = Vec::new();
    for node in 0..f.node_count() {
        let Some((left, right)) = f.children(node) else { continue };
        match f.connective(node) {
            Some(Connective::And) => {
                edges.push((node, left));
                edges.push((node, right));
            }
            _ => match s.choices.get(&node) {
                Some(Side::Left) => edges.push((node, left)),
                Some(Side::Right) => edges.push((node, right)),
                None => return Err(NetError::PartialSwitching(node)),
            },
        }
    }
    for &(a, b) in l.pairs() {
        edges.push((f.leaf_node(a), f.leaf_node(b)));
    }
    Ok(SwitchGraph { vertex_count: f.node_count(), edges })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwitchFailure {
    Cycle,
    Disconnected,
}

impl fmt::Display for SwitchFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SwitchFailure::Cycle => "has a cycle",
            SwitchFailure::Disconnected => "is disconnected",
        })
    }
}

/// First switching in index order whose graph fails the criterion.
/// `None` also when the linking itself is invalid.
pub fn first_failing_switching(f: &Formula, l: &Linking, mix: bool) -> Option<(Switching, SwitchFailure)> {
    validate_linking(f, l).ok()?;
    let ors = f.nodes_with(Connective::Or).len();
    assert!(ors < 64, "{ors} or-nodes cannot be enumerated");
    for index in 0..(1u64 << ors) {
        let s = Switching::from_index(f, index);
        let g = switch_graph(f, l, &s).expect("linking validated and switching total");
        let shape = g.shape();
        if !shape.acyclic {
            return Some((s, SwitchFailure::Cycle));
        }
        if !mix && shape.components != 1 {
            return Some((s, SwitchFailure::Disconnected));
        }
    }
    None
}

/// Reference criterion: every switching graph acyclic, and connected
/// unless `mix`. Invalid linkings are rejected.
pub fn dr_check_exhaustive(f: &Formula, l: &Linking, mix: bool) -> bool {
    validate_linking(f, l).is_ok() && first_failing_switching(f, l, mix).is_none()
}

/// Same verdict as [`dr_check_exhaustive`] in polynomial time.
pub fn dr_check_fast(f: &Formula, l: &Linking, mix: bool) -> bool {
    let Ok(partner) = partners(f, l) else { return false };
    if !mix {
        // an acyclic switching graph is connected iff |E| = |V| - 1, and
        // |E| is the same for every switching
        let ands = f.nodes_with(Connective::And).len();
        let ors = f.nodes_with(Connective::Or).len();
        if 2 * ands + ors + l.len() + 1 != f.node_count() {
            return false;
        }
    }
    every_switching_acyclic(f, &partner)
}

fn every_switching_acyclic(f: &Formula, partner: &[LeafId]) -> bool {
    let mut owner = vec![0usize; f.leaf_count()];
    let mut pending: Vec<Vec<NodeId>> = vec![vec![f.root()]];
    while let Some(roots) = pending.pop() {
        // a terminal par has degree one in every switching
        let mut stripped = Vec::with_capacity(roots.len());
        let mut work = roots;
        while let Some(r) = work.pop() {
            match (f.connective(r), f.children(r)) {
                (Some(Connective::Or), Some((a, b))) => work.extend([a, b]),
                _ => stripped.push(r),
            }
        }
        stripped.sort_unstable();

        for component in components(f, partner, &stripped, &mut owner) {
            if component.iter().all(|&r| f.is_leaf_node(r)) {
                // only axiom pairs remain
                continue;
            }
            match splitting_tensor(f, partner, &component, &mut owner) {
                Some(next) => pending.push(next),
                None => return false,
            }
        }
    }
    true
}

/// Groups root subtrees into connected components of the full structure
/// (tree edges plus axiom links).
fn components(f: &Formula, partner: &[LeafId], roots: &[NodeId], owner: &mut [usize]) -> Vec<Vec<NodeId>> {
    let mut uf = link_roots(f, partner, roots, owner);
    let mut groups: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
    for (i, &r) in roots.iter().enumerate() {
        groups.entry(uf.find_mut(i)).or_default().push(r);
    }
    groups.into_values().collect()
}

fn link_roots(f: &Formula, partner: &[LeafId], roots: &[NodeId], owner: &mut [usize]) -> UnionFind<usize> {
    for (i, &r) in roots.iter().enumerate() {
        for leaf in f.leaf_range(r) {
            owner[leaf] = i;
        }
    }
    let mut uf = UnionFind::new(roots.len());
    for (i, &r) in roots.iter().enumerate() {
        for leaf in f.leaf_range(r) {
            uf.union(i, owner[partner[leaf]]);
        }
    }
    uf
}

/// Removes the first terminal tensor whose two premises end up in
/// different components, returning the remaining roots.
fn splitting_tensor(f: &Formula, partner: &[LeafId], roots: &[NodeId], owner: &mut [usize]) -> Option<Vec<NodeId>> {
    for (i, &t) in roots.iter().enumerate() {
        if f.connective(t) != Some(Connective::And) {
            continue;
        }
        let (a, b) = f.children(t)?;
        let mut next: Vec<NodeId> = roots.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &r)| r).collect();
        next.push(a);
        next.push(b);
        let k = next.len();
        let mut uf = link_roots(f, partner, &next, owner);
        if uf.find_mut(k - 2) != uf.find_mut(k - 1) {
            return Some(next);
        }
    }
    None
}
