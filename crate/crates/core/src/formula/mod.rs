//! Classical propositional formulas in negation normal form.
//!
//! Surface syntax is parsed into an [`InputFormula`] (with `~`, `&`, `|`,
//! `->`), normalized into an [`Nnf`] tree, and finally indexed into a
//! [`Formula`]: an arena over the parse tree where every node has a stable
//! [`NodeId`] (pre-order) and every leaf a positional [`LeafId`]
//! (left-to-right).

mod parse;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;

use thiserror::Error;

pub use parse::{parse_input, ParseError};

/// Position of a leaf in left-to-right order, `0..n`.
pub type LeafId = usize;

/// Pre-order index of a node in a [`Formula`]; the root is `0`.
pub type NodeId = usize;

/// Default cap on the number of variables accepted by truth-table checks.
pub const TAUTOLOGY_VAR_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: String,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: impl Into<String>) -> Self {
        Literal { var: var.into(), negated: false }
    }

    pub fn neg(var: impl Into<String>) -> Self {
        Literal { var: var.into(), negated: true }
    }

    pub fn dual(&self) -> Literal {
        Literal { var: self.var.clone(), negated: !self.negated }
    }

    pub fn is_dual_of(&self, other: &Literal) -> bool {
        self.var == other.var && self.negated != other.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~{}", self.var)
        } else {
            f.write_str(&self.var)
        }
    }
}

/// Binary connective of an NNF formula. Read as MLL, `And` is tensor and
/// `Or` is par.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Connective {
    And,
    Or,
}

impl Connective {
    fn symbol(self) -> &'static str {
        match self {
            Connective::And => "&",
            Connective::Or => "|",
        }
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Connective::And => "and",
            Connective::Or => "or",
        })
    }
}

/// Which argument of a binary node is kept (by a resolution) or followed
/// (by a switching).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "L",
            Side::Right => "R",
        })
    }
}

/// Surface syntax tree, before normalization.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum InputFormula {
    Atom(String),
    Not(Box<InputFormula>),
    And(Box<InputFormula>, Box<InputFormula>),
    Or(Box<InputFormula>, Box<InputFormula>),
    Implies(Box<InputFormula>, Box<InputFormula>),
}

/// Recursive NNF tree. Convenient for building and rewriting formulas; use
/// [`Formula`] for anything that needs node or leaf indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nnf {
    Lit(Literal),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
}

impl Nnf {
    pub fn pos(var: impl Into<String>) -> Self {
        Nnf::Lit(Literal::pos(var))
    }

    pub fn neg(var: impl Into<String>) -> Self {
        Nnf::Lit(Literal::neg(var))
    }

    pub fn and(left: Nnf, right: Nnf) -> Self {
        Nnf::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Nnf, right: Nnf) -> Self {
        Nnf::Or(Box::new(left), Box::new(right))
    }

    /// Left-associated disjunction of a nonempty sequence.
    pub fn or_all(items: impl IntoIterator<Item = Nnf>) -> Option<Nnf> {
        items.into_iter().reduce(Nnf::or)
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Nnf::Lit(_) => 1,
            Nnf::And(a, b) | Nnf::Or(a, b) => a.leaf_count() + b.leaf_count(),
        }
    }

    /// Literals in left-to-right order.
    pub fn literals(&self) -> Vec<&Literal> {
        fn go<'a>(n: &'a Nnf, out: &mut Vec<&'a Literal>) {
            match n {
                Nnf::Lit(l) => out.push(l),
                Nnf::And(a, b) | Nnf::Or(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Nnf::Lit(l) => Some(l),
            _ => None,
        }
    }
}

impl fmt::Display for Nnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Formula::from_nnf(self).print())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf { literal: Literal, leaf: LeafId },
    Branch { op: Connective, left: NodeId, right: NodeId },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("leaf {leaf} out of range (formula has {leaf_count} leaves)")]
    LeafOutOfRange { leaf: LeafId, leaf_count: usize },
    #[error("meet of leaf {0} with itself is undefined")]
    SameLeaf(LeafId),
    #[error("assignment has no value for variable {0}")]
    MissingVariable(String),
    #[error("formula has {found} variables, more than the cap of {cap}")]
    TooManyVariables { found: usize, cap: usize },
}

/// Leaf-indexed NNF parse tree.
#[derive(Clone, Debug)]
pub struct Formula {
    nodes: Vec<Node>,
    parents: Vec<Option<NodeId>>,
    depths: Vec<usize>,
    leaf_ranges: Vec<Range<LeafId>>,
    leaf_nodes: Vec<NodeId>,
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
    }
}

impl Eq for Formula {}

impl Formula {
    pub fn from_nnf(tree: &Nnf) -> Self {
        let mut f = Formula {
            nodes: Vec::new(),
            parents: Vec::new(),
            depths: Vec::new(),
            leaf_ranges: Vec::new(),
            leaf_nodes: Vec::new(),
        };
        f.push(tree, None, 0);
        f
    }

    fn push(&mut self, tree: &Nnf, parent: Option<NodeId>, depth: usize) -> NodeId {
        let id = self.nodes.len();
        let first_leaf = self.leaf_nodes.len();
        // placeholder, patched once the children are in
        self.nodes.push(Node::Leaf { literal: Literal::pos(""), leaf: 0 });
        self.parents.push(parent);
        self.depths.push(depth);
        self.leaf_ranges.push(0..0);
        match tree {
            Nnf::Lit(l) => {
                self.nodes[id] = Node::Leaf { literal: l.clone(), leaf: first_leaf };
                self.leaf_nodes.push(id);
            }
            Nnf::And(a, b) | Nnf::Or(a, b) => {
                let op = if matches!(tree, Nnf::And(..)) { Connective::And } else { Connective::Or };
                let left = self.push(a, Some(id), depth + 1);
                let right = self.push(b, Some(id), depth + 1);
                self.nodes[id] = Node::Branch { op, left, right };
            }
        }
        self.leaf_ranges[id] = first_leaf..self.leaf_nodes.len();
        id
    }

    /// Parses surface syntax and normalizes it.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Ok(to_nnf(&parse_input(text)?))
    }

    pub fn to_nnf(&self) -> Nnf {
        self.subtree(self.root())
    }

    /// The subformula rooted at `node`.
    pub fn subtree(&self, node: NodeId) -> Nnf {
        match &self.nodes[node] {
            Node::Leaf { literal, .. } => Nnf::Lit(literal.clone()),
            Node::Branch { op: Connective::And, left, right } => {
                Nnf::and(self.subtree(*left), self.subtree(*right))
            }
            Node::Branch { op: Connective::Or, left, right } => {
                Nnf::or(self.subtree(*left), self.subtree(*right))
            }
        }
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_nodes.len()
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.parents[id]
    }

    pub fn children(&self, id: NodeId) -> Option<(NodeId, NodeId)> {
        match self.nodes[id] {
            Node::Branch { left, right, .. } => Some((left, right)),
            Node::Leaf { .. } => None,
        }
    }

    pub fn connective(&self, id: NodeId) -> Option<Connective> {
        match self.nodes[id] {
            Node::Branch { op, .. } => Some(op),
            Node::Leaf { .. } => None,
        }
    }

    pub fn is_leaf_node(&self, id: NodeId) -> bool {
        matches!(self.nodes[id], Node::Leaf { .. })
    }

    /// Leaves below `node`; contiguous because leaves are numbered in order.
    pub fn leaf_range(&self, node: NodeId) -> Range<LeafId> {
        self.leaf_ranges[node].clone()
    }

    pub fn leaf_node(&self, leaf: LeafId) -> NodeId {
        self.leaf_nodes[leaf]
    }

    pub fn literal(&self, leaf: LeafId) -> &Literal {
        match &self.nodes[self.leaf_nodes[leaf]] {
            Node::Leaf { literal, .. } => literal,
            Node::Branch { .. } => unreachable!("leaf table points at a branch"),
        }
    }

    /// In-order `(LeafId, Literal)` pairs.
    pub fn leaves(&self) -> impl Iterator<Item = (LeafId, &Literal)> + '_ {
        (0..self.leaf_count()).map(move |i| (i, self.literal(i)))
    }

    /// Nodes with the given connective, in `NodeId` order.
    pub fn nodes_with(&self, op: Connective) -> Vec<NodeId> {
        (0..self.nodes.len()).filter(|&n| self.connective(n) == Some(op)).collect()
    }

    pub fn variables(&self) -> BTreeSet<&str> {
        self.leaves().map(|(_, l)| l.var.as_str()).collect()
    }

    pub fn check_leaf(&self, leaf: LeafId) -> Result<(), FormulaError> {
        if leaf < self.leaf_count() {
            Ok(())
        } else {
            Err(FormulaError::LeafOutOfRange { leaf, leaf_count: self.leaf_count() })
        }
    }

    /// Label of the least common ancestor of two distinct leaves.
    pub fn meet(&self, a: LeafId, b: LeafId) -> Result<Connective, FormulaError> {
        self.check_leaf(a)?;
        self.check_leaf(b)?;
        if a == b {
            return Err(FormulaError::SameLeaf(a));
        }
        Ok(self.meet_unchecked(a, b))
    }

    pub(crate) fn meet_unchecked(&self, a: LeafId, b: LeafId) -> Connective {
        let mut x = self.leaf_nodes[a];
        let mut y = self.leaf_nodes[b];
        while self.depths[x] > self.depths[y] {
            x = self.parents[x].expect("non-root node has a parent");
        }
        while self.depths[y] > self.depths[x] {
            y = self.parents[y].expect("non-root node has a parent");
        }
        while x != y {
            x = self.parents[x].expect("non-root node has a parent");
            y = self.parents[y].expect("non-root node has a parent");
        }
        self.connective(x).expect("common ancestor of distinct leaves is a branch")
    }

    pub fn eval(&self, assignment: &HashMap<String, bool>) -> Result<bool, FormulaError> {
        let mut values = Vec::with_capacity(self.leaf_count());
        for (_, lit) in self.leaves() {
            let v = assignment
                .get(&lit.var)
                .ok_or_else(|| FormulaError::MissingVariable(lit.var.clone()))?;
            values.push(*v != lit.negated);
        }
        Ok(self.eval_leaves(self.root(), &values))
    }

    fn eval_leaves(&self, node: NodeId, values: &[bool]) -> bool {
        match &self.nodes[node] {
            Node::Leaf { leaf, .. } => values[*leaf],
            Node::Branch { op: Connective::And, left, right } => {
                self.eval_leaves(*left, values) && self.eval_leaves(*right, values)
            }
            Node::Branch { op: Connective::Or, left, right } => {
                self.eval_leaves(*left, values) || self.eval_leaves(*right, values)
            }
        }
    }

    /// Exhaustive truth-table validity check. No variable cap; see
    /// [`Formula::check_tautology`] for the capped version.
    pub fn is_tautology(&self) -> bool {
        self.falsifying_assignment().is_none()
    }

    pub fn check_tautology(&self, cap: usize) -> Result<bool, FormulaError> {
        let found = self.variables().len();
        if found > cap {
            return Err(FormulaError::TooManyVariables { found, cap });
        }
        Ok(self.is_tautology())
    }

    /// First truth-table row on which the formula is false. Variables are
    /// sorted by name; variable `i` is bit `i` of the row number.
    pub fn falsifying_assignment(&self) -> Option<BTreeMap<String, bool>> {
        let vars: Vec<&str> = self.variables().into_iter().collect();
        let index: HashMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let leaf_var: Vec<usize> = self.leaves().map(|(_, l)| index[l.var.as_str()]).collect();
        let k = vars.len();
        assert!(k < 64, "truth table over {k} variables is not enumerable");

        // 64 rows per word: variables 0..6 vary inside a word, the rest
        // are constant per word.
        let rows: u64 = 1 << k;
        let words = rows.div_ceil(64);
        let live = if rows >= 64 { u64::MAX } else { (1u64 << rows) - 1 };
        const PATTERNS: [u64; 6] = [
            0xAAAA_AAAA_AAAA_AAAA,
            0xCCCC_CCCC_CCCC_CCCC,
            0xF0F0_F0F0_F0F0_F0F0,
            0xFF00_FF00_FF00_FF00,
            0xFFFF_0000_FFFF_0000,
            0xFFFF_FFFF_0000_0000,
        ];
        let mut var_words = vec![0u64; k];
        let mut leaf_words = vec![0u64; self.leaf_count()];
        for w in 0..words {
            for (v, word) in var_words.iter_mut().enumerate() {
                *word = if v < 6 {
                    PATTERNS[v]
                } else if (w >> (v - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                };
            }
            for (leaf, word) in leaf_words.iter_mut().enumerate() {
                let x = var_words[leaf_var[leaf]];
                *word = if self.literal(leaf).negated { !x } else { x };
            }
            let value = self.eval_words(self.root(), &leaf_words);
            let falsified = !value & live;
            if falsified != 0 {
                let row = w * 64 + u64::from(falsified.trailing_zeros());
                return Some(
                    vars.iter()
                        .enumerate()
                        .map(|(v, name)| (name.to_string(), (row >> v) & 1 == 1))
                        .collect(),
                );
            }
        }
        None
    }

    fn eval_words(&self, node: NodeId, leaves: &[u64]) -> u64 {
        match &self.nodes[node] {
            Node::Leaf { leaf, .. } => leaves[*leaf],
            Node::Branch { op: Connective::And, left, right } => {
                self.eval_words(*left, leaves) & self.eval_words(*right, leaves)
            }
            Node::Branch { op: Connective::Or, left, right } => {
                self.eval_words(*left, leaves) | self.eval_words(*right, leaves)
            }
        }
    }

    /// Surface syntax that parses back to this exact tree.
    pub fn print(&self) -> String {
        let mut out = String::new();
        self.print_node(self.root(), &mut out);
        out
    }

    fn print_node(&self, node: NodeId, out: &mut String) {
        match &self.nodes[node] {
            Node::Leaf { literal, .. } => out.push_str(&literal.to_string()),
            Node::Branch { op, left, right } => {
                self.print_child(*left, *op, Side::Left, out);
                out.push(' ');
                out.push_str(op.symbol());
                out.push(' ');
                self.print_child(*right, *op, Side::Right, out);
            }
        }
    }

    // A branch child is bracketed unless it continues a left-leaning chain
    // of the same connective.
    fn print_child(&self, child: NodeId, parent_op: Connective, side: Side, out: &mut String) {
        let bare = match self.connective(child) {
            None => true,
            Some(op) => op == parent_op && side == Side::Left,
        };
        if bare {
            self.print_node(child, out);
        } else {
            out.push('(');
            self.print_node(child, out);
            out.push(')');
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print())
    }
}

impl From<&Nnf> for Formula {
    fn from(tree: &Nnf) -> Self {
        Formula::from_nnf(tree)
    }
}

impl From<Nnf> for Formula {
    fn from(tree: Nnf) -> Self {
        Formula::from_nnf(&tree)
    }
}

/// Desugars `->`, pushes negation to the atoms and drops double negations.
pub fn to_nnf(input: &InputFormula) -> Formula {
    Formula::from_nnf(&nnf_tree(input, false))
}

pub fn nnf_tree(input: &InputFormula, negate: bool) -> Nnf {
    match input {
        InputFormula::Atom(v) => Nnf::Lit(Literal { var: v.clone(), negated: negate }),
        InputFormula::Not(g) => nnf_tree(g, !negate),
        InputFormula::And(a, b) => {
            let (a, b) = (nnf_tree(a, negate), nnf_tree(b, negate));
            if negate { Nnf::or(a, b) } else { Nnf::and(a, b) }
        }
        InputFormula::Or(a, b) => {
            let (a, b) = (nnf_tree(a, negate), nnf_tree(b, negate));
            if negate { Nnf::and(a, b) } else { Nnf::or(a, b) }
        }
        InputFormula::Implies(a, b) => {
            let (a, b) = (nnf_tree(a, !negate), nnf_tree(b, negate));
            if negate { Nnf::and(a, b) } else { Nnf::or(a, b) }
        }
    }
}
