use std::collections::HashMap;

use proptest::prelude::*;

use combproof::formula::{parse_input, to_nnf, Connective, InputFormula};
use combproof::{Formula, Literal, Nnf};

const VARS: [&str; 4] = ["P", "Q", "R", "S"];

fn input() -> impl Strategy<Value = InputFormula> {
    let atom = (0..VARS.len()).prop_map(|v| InputFormula::Atom(VARS[v].to_string()));
    atom.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| InputFormula::Not(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| InputFormula::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| InputFormula::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| InputFormula::Implies(Box::new(a), Box::new(b))),
        ]
    })
}

fn nnf() -> impl Strategy<Value = Nnf> {
    let lit = (0..VARS.len(), any::<bool>()).prop_map(|(v, negated)| Nnf::Lit(Literal { var: VARS[v].into(), negated }));
    lit.prop_recursive(5, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Nnf::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Nnf::or(a, b)),
        ]
    })
}

/// Fully parenthesized, with randomly chosen spellings of negation.
fn render(f: &InputFormula, bang: bool) -> String {
    match f {
        InputFormula::Atom(v) => v.clone(),
        InputFormula::Not(a) => format!("{}{}", if bang { "!" } else { "~" }, render(a, !bang)),
        InputFormula::And(a, b) => format!("({} & {})", render(a, bang), render(b, bang)),
        InputFormula::Or(a, b) => format!("({} | {})", render(a, bang), render(b, bang)),
        InputFormula::Implies(a, b) => format!("({} -> {})", render(a, bang), render(b, bang)),
    }
}

fn eval_input(f: &InputFormula, row: &HashMap<String, bool>) -> bool {
    match f {
        InputFormula::Atom(v) => row[v],
        InputFormula::Not(a) => !eval_input(a, row),
        InputFormula::And(a, b) => eval_input(a, row) && eval_input(b, row),
        InputFormula::Or(a, b) => eval_input(a, row) || eval_input(b, row),
        InputFormula::Implies(a, b) => !eval_input(a, row) || eval_input(b, row),
    }
}

fn rows() -> impl Iterator<Item = HashMap<String, bool>> {
    (0u32..1 << VARS.len()).map(|bits| VARS.iter().enumerate().map(|(i, v)| (v.to_string(), bits >> i & 1 == 1)).collect())
}

/// Connective at the lowest common ancestor, found by walking parents.
fn meet_by_parents(f: &Formula, a: usize, b: usize) -> Connective {
    let mut ancestors = Vec::new();
    let mut n = Some(f.leaf_node(a));
    while let Some(x) = n {
        ancestors.push(x);
        n = f.parent(x);
    }
    let mut m = f.leaf_node(b);
    while !ancestors.contains(&m) {
        m = f.parent(m).expect("root is a common ancestor");
    }
    f.connective(m).expect("distinct leaves meet at a branch")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn parser_reads_rendered_input(f in input(), bang in any::<bool>()) {
        prop_assert_eq!(parse_input(&render(&f, bang)).unwrap(), f);
    }

    #[test]
    fn normalization_preserves_truth(f in input()) {
        let g = to_nnf(&f);
        for row in rows() {
            prop_assert_eq!(g.eval(&row).unwrap(), eval_input(&f, &row));
        }
    }

    #[test]
    fn normalization_is_idempotent(f in input()) {
        let g = to_nnf(&f);
        prop_assert_eq!(Formula::parse(&g.print()).unwrap(), g.clone());
        prop_assert_eq!(Formula::from_nnf(&g.to_nnf()), g);
    }

    #[test]
    fn print_parse_round_trip(t in nnf()) {
        let f = Formula::from_nnf(&t);
        let back = Formula::parse(&f.print()).unwrap();
        prop_assert_eq!(back.to_nnf(), t);
        prop_assert_eq!(back, f);
    }

    #[test]
    fn tautology_matches_truth_table(f in input()) {
        let g = to_nnf(&f);
        let oracle = rows().all(|row| eval_input(&f, &row));
        prop_assert_eq!(g.is_tautology(), oracle);
        match g.falsifying_assignment() {
            None => prop_assert!(oracle),
            Some(row) => {
                let row: HashMap<String, bool> = row.into_iter().collect();
                prop_assert!(!g.eval(&row).unwrap());
            }
        }
    }

    #[test]
    fn meet_is_symmetric_and_matches_ancestors(t in nnf()) {
        let f = Formula::from_nnf(&t);
        let n = f.leaf_count();
        for a in 0..n {
            prop_assert!(f.meet(a, a).is_err());
            for b in a + 1..n {
                let m = f.meet(a, b).unwrap();
                prop_assert_eq!(m, f.meet(b, a).unwrap());
                prop_assert_eq!(m, meet_by_parents(&f, a, b));
            }
        }
    }

    #[test]
    fn leaf_ranges_are_in_order(t in nnf()) {
        let f = Formula::from_nnf(&t);
        prop_assert_eq!(f.leaf_range(f.root()), 0..f.leaf_count());
        for node in 0..f.node_count() {
            if let Some((l, r)) = f.children(node) {
                prop_assert!(l < r);
                prop_assert_eq!(f.leaf_range(l).end, f.leaf_range(r).start);
                prop_assert_eq!(f.leaf_range(l).start, f.leaf_range(node).start);
                prop_assert_eq!(f.leaf_range(r).end, f.leaf_range(node).end);
            }
        }
        let literals: Vec<&Literal> = f.leaves().map(|(_, l)| l).collect();
        prop_assert_eq!(literals, t.literals());
    }
}
