//! JSON trees for finitary terms, forests and proof terms.
//!
//! Formulas and sequents are stored as strings in the textual syntax.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finitary::{FinAlt, FinTerm};
use crate::forest::{EAlt, Forest};
use crate::lambda_bar::ProofTerm;
use crate::parse::{parse_formula, parse_sequent, ParseError};
use crate::syntax::Var;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Tree {
    Lam { var: String, ann: String, body: Box<Tree> },
    Gfp { var: String, sequent: String, alts: Vec<Tree> },
    Sum { alts: Vec<Tree> },
    Fpvar { var: String, sequent: String },
    Alt { head: String, args: Vec<Tree> },
    Cut,
}

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("expected {expected}, found `{found}` node")]
    Unexpected { expected: &'static str, found: &'static str },
    #[error("in annotation: {0}")]
    Parse(#[from] ParseError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Tree {
    fn kind(&self) -> &'static str {
        match self {
            Tree::Lam { .. } => "lam",
            Tree::Gfp { .. } => "gfp",
            Tree::Sum { .. } => "sum",
            Tree::Fpvar { .. } => "fpvar",
            Tree::Alt { .. } => "alt",
            Tree::Cut => "cut",
        }
    }

    fn unexpected<T>(&self, expected: &'static str) -> Result<T, TreeError> {
        Err(TreeError::Unexpected {
            expected,
            found: self.kind(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trees serialize")
    }

    pub fn from_json(text: &str) -> Result<Tree, TreeError> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn fin_to_tree(t: &FinTerm) -> Tree {
    let alts = |alts: &[FinAlt]| {
        alts.iter()
            .map(|a| Tree::Alt {
                head: a.head.to_string(),
                args: a.args.iter().map(fin_to_tree).collect(),
            })
            .collect()
    };
    match t {
        FinTerm::Lam { var, ann, body } => Tree::Lam {
            var: var.to_string(),
            ann: ann.to_string(),
            body: Box::new(fin_to_tree(body)),
        },
        FinTerm::Gfp { var, sequent, alts: a } => Tree::Gfp {
            var: var.to_string(),
            sequent: sequent.to_string(),
            alts: alts(a),
        },
        FinTerm::Sum(a) => Tree::Sum { alts: alts(a) },
        FinTerm::FpOcc { var, sequent } => Tree::Fpvar {
            var: var.to_string(),
            sequent: sequent.to_string(),
        },
    }
}

pub fn tree_to_fin(t: &Tree) -> Result<FinTerm, TreeError> {
    let alts = |alts: &[Tree]| -> Result<Vec<FinAlt>, TreeError> {
        alts.iter()
            .map(|a| match a {
                Tree::Alt { head, args } => Ok(FinAlt::new(
                    Var::new(head),
                    args.iter().map(tree_to_fin).collect::<Result<_, _>>()?,
                )),
                other => other.unexpected("alt"),
            })
            .collect()
    };
    Ok(match t {
        Tree::Lam { var, ann, body } => FinTerm::lam(Var::new(var), parse_formula(ann)?, tree_to_fin(body)?),
        Tree::Gfp { var, sequent, alts: a } => FinTerm::Gfp {
            var: Var::new(var),
            sequent: parse_sequent(sequent)?,
            alts: alts(a)?,
        },
        Tree::Sum { alts: a } => FinTerm::Sum(alts(a)?),
        Tree::Fpvar { var, sequent } => FinTerm::FpOcc {
            var: Var::new(var),
            sequent: parse_sequent(sequent)?,
        },
        other => return other.unexpected("finitary term"),
    })
}

pub fn forest_to_tree(f: &Forest) -> Tree {
    match f {
        Forest::Lam { var, ann, body } => Tree::Lam {
            var: var.to_string(),
            ann: ann.to_string(),
            body: Box::new(forest_to_tree(body)),
        },
        Forest::Sum(alts) => Tree::Sum {
            alts: alts
                .iter()
                .map(|a| Tree::Alt {
                    head: a.head.to_string(),
                    args: a.args.iter().map(forest_to_tree).collect(),
                })
                .collect(),
        },
        Forest::Cut => Tree::Cut,
    }
}

pub fn tree_to_forest(t: &Tree) -> Result<Forest, TreeError> {
    Ok(match t {
        Tree::Lam { var, ann, body } => Forest::lam(Var::new(var), parse_formula(ann)?, tree_to_forest(body)?),
        Tree::Sum { alts } => Forest::Sum(
            alts.iter()
                .map(|a| match a {
                    Tree::Alt { head, args } => Ok(EAlt::new(
                        Var::new(head),
                        args.iter().map(tree_to_forest).collect::<Result<_, _>>()?,
                    )),
                    other => other.unexpected("alt"),
                })
                .collect::<Result<_, _>>()?,
        ),
        Tree::Cut => Forest::Cut,
        other => return other.unexpected("forest"),
    })
}

pub fn proof_to_tree(t: &ProofTerm) -> Tree {
    match t {
        ProofTerm::Lam { var, ann, body } => Tree::Lam {
            var: var.to_string(),
            ann: ann.to_string(),
            body: Box::new(proof_to_tree(body)),
        },
        ProofTerm::App { head, args } => Tree::Alt {
            head: head.to_string(),
            args: args.iter().map(proof_to_tree).collect(),
        },
    }
}

pub fn tree_to_proof(t: &Tree) -> Result<ProofTerm, TreeError> {
    Ok(match t {
        Tree::Lam { var, ann, body } => ProofTerm::lam(Var::new(var), parse_formula(ann)?, tree_to_proof(body)?),
        Tree::Alt { head, args } => ProofTerm::app(
            Var::new(head),
            args.iter().map(tree_to_proof).collect::<Result<_, _>>()?,
        ),
        other => return other.unexpected("proof term"),
    })
}
