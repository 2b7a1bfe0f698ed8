//! Combinatorial proofs: an MLL proof net on an upper formula together with
//! a label- and clique-preserving map from its leaves to the leaves of the
//! lower formula being proved.

use std::fmt;

use thiserror::Error;

use crate::formula::{Connective, Formula, LeafId, Literal};
use crate::net::{dr_check_fast, first_failing_switching, partners, LinkingError, SwitchFailure, Switching};
use crate::net::Linking;
use crate::resolution::{cliques, is_clique, Clique};

/// Image of every upper leaf, indexed by upper `LeafId`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LeafMap(pub Vec<LeafId>);

impl LeafMap {
    pub fn image(&self, upper_leaf: LeafId) -> Option<LeafId> {
        self.0.get(upper_leaf).copied()
    }

    pub fn as_slice(&self) -> &[LeafId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialProof {
    pub lower: Formula,
    pub upper: Formula,
    pub linking: Linking,
    pub map: LeafMap,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelError {
    #[error("map has {found} entries but the upper formula has {expected} leaves")]
    WrongLength { expected: usize, found: usize },
    #[error("upper leaf {upper_leaf} maps to lower leaf {target}, which does not exist")]
    TargetOutOfRange { upper_leaf: LeafId, target: LeafId },
    #[error("upper leaf {upper_leaf} ({upper}) maps to lower leaf {lower_leaf} ({lower})")]
    Mismatch { upper_leaf: LeafId, lower_leaf: LeafId, upper: Literal, lower: Literal },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("image of upper clique {clique} is {image}, not a clique")]
pub struct CliqueError {
    pub clique: Clique,
    pub image: Clique,
}

pub fn check_labels(upper: &Formula, lower: &Formula, map: &LeafMap) -> Result<(), LabelError> {
    if map.len() != upper.leaf_count() {
        return Err(LabelError::WrongLength { expected: upper.leaf_count(), found: map.len() });
    }
    for (upper_leaf, &target) in map.as_slice().iter().enumerate() {
        if target >= lower.leaf_count() {
            return Err(LabelError::TargetOutOfRange { upper_leaf, target });
        }
        let (u, l) = (upper.literal(upper_leaf), lower.literal(target));
        if u != l {
            return Err(LabelError::Mismatch {
                upper_leaf,
                lower_leaf: target,
                upper: u.clone(),
                lower: l.clone(),
            });
        }
    }
    Ok(())
}

/// Every upper clique must map onto a clique of the lower formula. The
/// first failure in resolution enumeration order is reported.
pub fn check_cliques(upper: &Formula, lower: &Formula, map: &LeafMap) -> Result<(), CliqueError> {
    for clique in cliques(upper) {
        let image = Clique::new(clique.leaves().iter().map(|&x| map.0[x]));
        let ok = is_clique(lower, image.leaves()).expect("targets checked by check_labels");
        if !ok {
            return Err(CliqueError { clique, image });
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Linking,
    Net,
    Labels,
    Cliques,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Linking => "linking",
            Stage::Net => "net",
            Stage::Labels => "labels",
            Stage::Cliques => "cliques",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Linking(LinkingError),
    /// `None` only if no failing switching could be located.
    Switching(Option<(Switching, SwitchFailure)>),
    Label(LabelError),
    Clique(CliqueError),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Linking(e) => write!(f, "{e}"),
            Witness::Switching(Some((s, why))) => write!(f, "switching {s} {why}"),
            Witness::Switching(None) => write!(f, "not a proof net"),
            Witness::Label(e) => write!(f, "{e}"),
            Witness::Clique(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected { stage: Stage, witness: Witness },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }

    pub fn stage(&self) -> Option<Stage> {
        match self {
            Verdict::Accepted => None,
            Verdict::Rejected { stage, .. } => Some(*stage),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted => write!(f, "ACCEPTED"),
            Verdict::Rejected { stage, witness } => write!(f, "REJECTED: {stage}: {witness}"),
        }
    }
}

/// Above this many or-nodes a rejected net gets no switching witness.
pub const WITNESS_SEARCH_CAP: usize = 20;

/// Net check of the upper formula alone, with the same stages and
/// witnesses as [`verify`].
pub fn check_net(upper: &Formula, linking: &Linking, mix: bool) -> Verdict {
    if let Err(e) = partners(upper, linking) {
        return Verdict::Rejected { stage: Stage::Linking, witness: Witness::Linking(e) };
    }
    if !dr_check_fast(upper, linking, mix) {
        let searchable = upper.nodes_with(Connective::Or).len() <= WITNESS_SEARCH_CAP;
        let witness = Witness::Switching(searchable.then(|| first_failing_switching(upper, linking, mix)).flatten());
        return Verdict::Rejected { stage: Stage::Net, witness };
    }
    Verdict::Accepted
}

/// Stages run in order: linking, net, labels, cliques.
pub fn verify(p: &CombinatorialProof, mix: bool) -> Verdict {
    let net = check_net(&p.upper, &p.linking, mix);
    if !net.is_accepted() {
        return net;
    }
    if let Err(e) = check_labels(&p.upper, &p.lower, &p.map) {
        return Verdict::Rejected { stage: Stage::Labels, witness: Witness::Label(e) };
    }
    if let Err(e) = check_cliques(&p.upper, &p.lower, &p.map) {
        return Verdict::Rejected { stage: Stage::Cliques, witness: Witness::Clique(e) };
    }
    Verdict::Accepted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Nnf;

    fn peirce() -> CombinatorialProof {
        CombinatorialProof {
            lower: Formula::parse("((P -> Q) -> P) -> P").unwrap(),
            upper: Formula::parse("(~P & ~P) | (P | P)").unwrap(),
            linking: Linking::new([(0, 3), (1, 2)]),
            map: LeafMap(vec![0, 2, 3, 3]),
        }
    }

    #[test]
    fn labels() {
        let p = peirce();
        assert_eq!(check_labels(&p.upper, &p.lower, &p.map), Ok(()));
        assert_eq!(check_labels(&p.lower, &p.lower, &LeafMap(vec![0, 1, 2, 3])), Ok(()));
        let bad = LeafMap(vec![0, 2, 1, 3]);
        assert!(matches!(
            check_labels(&p.upper, &p.lower, &bad),
            Err(LabelError::Mismatch { upper_leaf: 2, lower_leaf: 1, .. })
        ));
        assert!(matches!(
            check_labels(&p.upper, &p.lower, &LeafMap(vec![0, 2, 3])),
            Err(LabelError::WrongLength { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn cliques_preserved() {
        let p = peirce();
        assert_eq!(check_cliques(&p.upper, &p.lower, &p.map), Ok(()));
        let squashed = LeafMap(vec![0, 0, 3, 3]);
        assert_eq!(
            check_cliques(&p.upper, &p.lower, &squashed),
            Err(CliqueError { clique: Clique::new([0, 1]), image: Clique::new([0]) })
        );
        let em = Formula::parse("~P | P").unwrap();
        assert_eq!(check_cliques(&em, &em, &LeafMap(vec![0, 1])), Ok(()));
    }

    #[test]
    fn peirce_is_accepted() {
        assert_eq!(verify(&peirce(), false), Verdict::Accepted);
        assert_eq!(verify(&peirce(), true), Verdict::Accepted);
        let mut other = peirce();
        other.linking = Linking::new([(0, 2), (1, 3)]);
        assert_eq!(verify(&other, false), Verdict::Accepted);
    }

    #[test]
    fn rejections_report_stage() {
        let mut p = peirce();
        p.linking = Linking::new([(0, 1), (2, 3)]);
        let v = verify(&p, false);
        assert_eq!(v.stage(), Some(Stage::Linking));
        assert!(v.to_string().starts_with("REJECTED: linking: pair (0,1) joins non-dual literals ~P and ~P"));

        let mut p = peirce();
        p.map = LeafMap(vec![0, 2, 1, 3]);
        assert_eq!(verify(&p, false).stage(), Some(Stage::Labels));

        let mut p = peirce();
        p.map = LeafMap(vec![0, 0, 3, 3]);
        let v = verify(&p, false);
        assert_eq!(v.to_string(), "REJECTED: cliques: image of upper clique {0,1} is {0}, not a clique");
    }

    #[test]
    fn mix_stage() {
        let f = Formula::parse("(~P | P) | (~Q | Q)").unwrap();
        let p = CombinatorialProof {
            lower: f.clone(),
            upper: f,
            linking: Linking::new([(0, 1), (2, 3)]),
            map: LeafMap(vec![0, 1, 2, 3]),
        };
        let v = verify(&p, false);
        assert_eq!(v.stage(), Some(Stage::Net));
        assert_eq!(v.to_string(), "REJECTED: net: switching {0:L,1:L,4:L} is disconnected");
        assert_eq!(verify(&p, true), Verdict::Accepted);
    }

    #[test]
    fn large_nets_skip_the_witness_search() {
        let pars: Vec<Nnf> = (0..12).map(|k| Nnf::or(Nnf::neg(format!("X{k}")), Nnf::pos(format!("X{k}")))).collect();
        let upper = Formula::from_nnf(&Nnf::or_all(pars).unwrap());
        let linking = Linking::new((0..12).map(|k| (2 * k, 2 * k + 1)));
        assert_eq!(check_net(&upper, &linking, false).to_string(), "REJECTED: net: not a proof net");
        assert!(check_net(&upper, &linking, true).is_accepted());
    }
}
