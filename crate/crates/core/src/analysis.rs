//! Decision procedures and enumeration working on finitary terms.
//!
//! A closed term is a finite graph once each fixed-point occurrence is
//! linked back to its binder. Inhabitation is the least solution of the
//! boolean equations read off that graph, solvability the greatest, and
//! minimum member sizes a shortest-path problem. Co-contraction only adds
//! alternatives that copy existing ones under another head, so none of
//! these quantities depends on the annotations.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::finitary::{represent, FinAlt, FinTerm, FpContext};
use crate::lambda_bar::ProofTerm;
use crate::syntax::{Context, Formula, Sequent, Var};
use crate::ternary::Ternary;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("fixed-point variable `{0}` is free")]
    Open(Var),
    #[error("head `{0}` is not declared")]
    UnknownHead(Var),
}

enum Node {
    Lam(usize),
    Alts(Vec<Vec<usize>>),
    Occ(usize),
}

/// The graph of a closed finitary term, typed in `ctx`.
pub struct Analysis<'a> {
    root: &'a FinTerm,
    ctx: Context,
    nodes: Vec<Node>,
    ids: HashMap<*const FinTerm, usize>,
    inhabited: Vec<bool>,
    solvable: Vec<bool>,
    min_size: Vec<Option<usize>>,
}

impl<'a> Analysis<'a> {
    pub fn new(root: &'a FinTerm, ctx: &Context) -> Result<Analysis<'a>, AnalysisError> {
        let mut a = Analysis {
            root,
            ctx: ctx.clone(),
            nodes: Vec::new(),
            ids: HashMap::new(),
            inhabited: Vec::new(),
            solvable: Vec::new(),
            min_size: Vec::new(),
        };
        a.build(root, &mut Vec::new())?;
        a.inhabited = a.fixpoint(false);
        a.solvable = a.fixpoint(true);
        a.min_size = a.min_sizes();
        Ok(a)
    }

    // Children receive smaller ids than their parents, except that a binder
    // is numbered before its body so occurrences can refer to it.
    fn build(&mut self, t: &'a FinTerm, fps: &mut Vec<(&'a Var, usize)>) -> Result<usize, AnalysisError> {
        let id = self.nodes.len();
        self.nodes.push(Node::Alts(Vec::new()));
        self.ids.insert(t as *const FinTerm, id);
        let node = match t {
            FinTerm::Lam { body, .. } => Node::Lam(self.build(body, fps)?),
            FinTerm::Gfp { var, alts, .. } => {
                fps.push((var, id));
                let r = self.build_alts(alts, fps);
                fps.pop();
                Node::Alts(r?)
            }
            FinTerm::Sum(alts) => Node::Alts(self.build_alts(alts, fps)?),
            FinTerm::FpOcc { var, .. } => match fps.iter().rev().find(|(x, _)| *x == var) {
                Some(&(_, target)) => Node::Occ(target),
                None => return Err(AnalysisError::Open(var.clone())),
            },
        };
        self.nodes[id] = node;
        Ok(id)
    }

    fn build_alts(&mut self, alts: &'a [FinAlt], fps: &mut Vec<(&'a Var, usize)>) -> Result<Vec<Vec<usize>>, AnalysisError> {
        alts.iter()
            .map(|a| a.args.iter().map(|x| self.build(x, fps)).collect())
            .collect()
    }

    fn fixpoint(&self, init: bool) -> Vec<bool> {
        let mut val = vec![init; self.nodes.len()];
        loop {
            let mut changed = false;
            for id in (0..self.nodes.len()).rev() {
                let v = match &self.nodes[id] {
                    Node::Lam(b) => val[*b],
                    Node::Alts(alts) => alts.iter().any(|args| args.iter().all(|&x| val[x])),
                    Node::Occ(g) => val[*g],
                };
                if v != val[id] {
                    val[id] = v;
                    changed = true;
                }
            }
            if !changed {
                return val;
            }
        }
    }

    fn min_sizes(&self) -> Vec<Option<usize>> {
        let mut val: Vec<Option<usize>> = vec![None; self.nodes.len()];
        loop {
            let mut changed = false;
            for id in (0..self.nodes.len()).rev() {
                let v = match &self.nodes[id] {
                    Node::Lam(b) => val[*b].map(|n| n + 1),
                    Node::Alts(alts) => alts
                        .iter()
                        .filter_map(|args| args.iter().try_fold(1usize, |acc, &x| val[x].map(|n| acc + n)))
                        .min(),
                    Node::Occ(g) => val[*g],
                };
                if v.is_some() && (val[id].is_none() || v < val[id]) {
                    val[id] = v;
                    changed = true;
                }
            }
            if !changed {
                return val;
            }
        }
    }

    fn id(&self, t: &FinTerm) -> usize {
        self.ids[&(t as *const FinTerm)]
    }

    pub fn inhabited(&self) -> bool {
        self.inhabited[0]
    }

    pub fn solvable(&self) -> bool {
        self.solvable[0]
    }

    /// Size of the smallest member, if any.
    pub fn min_size(&self) -> Option<usize> {
        self.min_size[0]
    }

    /// Whether the set of finite members is finite. Infinitely many members
    /// exist exactly when some occurrence is reachable from the root through
    /// alternatives whose arguments are all inhabited: the path can then be
    /// pumped.
    pub fn finite(&self) -> Ternary {
        if !self.inhabited() {
            return Ternary::Yes;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            if std::mem::replace(&mut seen[id], true) {
                continue;
            }
            match &self.nodes[id] {
                Node::Occ(_) => return Ternary::No,
                Node::Lam(b) => stack.push(*b),
                Node::Alts(alts) => {
                    for args in alts {
                        if args.iter().all(|&x| self.inhabited[x]) {
                            stack.extend(args);
                        }
                    }
                }
            }
        }
        Ternary::Yes
    }

    /// All members of size at most `max_size`, up to alpha, ordered by size
    /// and then structurally.
    pub fn enumerate(&self, max_size: usize) -> Result<Vec<ProofTerm>, AnalysisError> {
        let taken: BTreeSet<&str> = self.ctx.vars().map(|v| v.name()).collect();
        let mut prefix = String::from("v");
        while taken.iter().any(|n| n.strip_prefix(prefix.as_str()).is_some_and(|rest| rest.chars().all(|c| c.is_ascii_digit()))) {
            prefix.push('_');
        }
        let scope: Scope = Arc::new(self.ctx.vars().map(|v| (v.clone(), v.clone())).collect());
        let env = Env {
            scope,
            fps: Arc::new(Vec::new()),
            pending: Arc::new(Vec::new()),
            depth: 0,
        };
        let mut out = Enumerator { analysis: self, prefix }.term(self.root, max_size, &env)?;
        let mut keyed: Vec<_> = out.drain(..).map(|t| ((t.size(), t.key()), t)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        Ok(keyed.into_iter().map(|(_, t)| t).collect())
    }
}

type Scope = Arc<HashMap<Var, Var>>;

/// A pending co-contraction in output names: heads declared in `small`
/// may be replaced by the variables of `extra` with the same type.
struct Cocontraction {
    small: HashMap<Var, Formula>,
    extra: Vec<(Var, Formula)>,
}

struct FpEntry<'a> {
    var: &'a Var,
    alts: &'a [FinAlt],
    sequent: &'a Sequent,
    scope: Scope,
    fps: Arc<Vec<Arc<FpEntry<'a>>>>,
}

#[derive(Clone)]
struct Env<'a> {
    scope: Scope,
    fps: Arc<Vec<Arc<FpEntry<'a>>>>,
    pending: Arc<Vec<Arc<Cocontraction>>>,
    depth: usize,
}

struct Enumerator<'a, 'b> {
    analysis: &'b Analysis<'a>,
    prefix: String,
}

impl<'a, 'b> Enumerator<'a, 'b> {
    fn min(&self, t: &FinTerm) -> Option<usize> {
        self.analysis.min_size[self.analysis.id(t)]
    }

    fn term(&self, t: &'a FinTerm, budget: usize, env: &Env<'a>) -> Result<Vec<ProofTerm>, AnalysisError> {
        match self.min(t) {
            Some(m) if m <= budget => {}
            _ => return Ok(Vec::new()),
        }
        match t {
            FinTerm::Lam { var, ann, body } => {
                let name = Var::new(&format!("{}{}", self.prefix, env.depth + 1));
                let mut scope = (*env.scope).clone();
                scope.insert(var.clone(), name.clone());
                let inner = Env {
                    scope: Arc::new(scope),
                            depth: env.depth + 1,
                    ..env.clone()
                };
                Ok(self
                    .term(body, budget - 1, &inner)?
                    .into_iter()
                    .map(|m| ProofTerm::lam(name.clone(), ann.clone(), m))
                    .collect())
            }
            FinTerm::Gfp { var, sequent, alts } => {
                let entry = Arc::new(FpEntry {
                    var,
                    alts,
                    sequent,
                    scope: env.scope.clone(),
                    fps: env.fps.clone(),
                });
                let mut fps = (*env.fps).clone();
                fps.push(entry);
                let inner = Env {
                    fps: Arc::new(fps),
                    ..env.clone()
                };
                self.alts(alts, budget, &inner)
            }
            FinTerm::Sum(alts) => self.alts(alts, budget, env),
            FinTerm::FpOcc { var, sequent } => {
                let entry = env
                    .fps
                    .iter()
                    .rev()
                    .find(|e| e.var == var)
                    .ok_or_else(|| AnalysisError::Open(var.clone()))?
                    .clone();
                let lookup = |scope: &Scope, x: &Var| scope.get(x).cloned().ok_or_else(|| AnalysisError::UnknownHead(x.clone()));
                let mut small = HashMap::new();
                for (x, a) in entry.sequent.ctx.iter() {
                    small.insert(lookup(&entry.scope, x)?, a.clone());
                }
                let mut extra = Vec::new();
                for (x, a) in sequent.ctx.iter() {
                    if !entry.sequent.ctx.has_decl(x, a) {
                        extra.push((lookup(&env.scope, x)?, a.clone()));
                    }
                }
                let mut pending = vec![Arc::new(Cocontraction { small, extra })];
                pending.extend(env.pending.iter().cloned());
                let mut fps = (*entry.fps).clone();
                fps.push(entry.clone());
                let inner = Env {
                    scope: entry.scope.clone(),
                    fps: Arc::new(fps),
                    pending: Arc::new(pending),
                    depth: env.depth,
                };
                self.alts(entry.alts, budget, &inner)
            }
        }
    }

    fn heads(&self, head: &Var, env: &Env<'a>) -> Result<Vec<Var>, AnalysisError> {
        let mut heads = vec![env.scope.get(head).cloned().ok_or_else(|| AnalysisError::UnknownHead(head.clone()))?];
        for c in env.pending.iter() {
            let mut next = Vec::new();
            for z in heads {
                if let Some(a) = c.small.get(&z) {
                    next.extend(c.extra.iter().filter(|(_, b)| b == a).map(|(w, _)| w.clone()));
                }
                next.push(z);
            }
            next.sort();
            next.dedup();
            heads = next;
        }
        Ok(heads)
    }

    fn alts(&self, alts: &'a [FinAlt], budget: usize, env: &Env<'a>) -> Result<Vec<ProofTerm>, AnalysisError> {
        let mut out = Vec::new();
        for alt in alts {
            let mins: Option<Vec<usize>> = alt.args.iter().map(|x| self.min(x)).collect();
            let Some(mins) = mins else { continue };
            let total: usize = 1 + mins.iter().sum::<usize>();
            if total > budget {
                continue;
            }
            let slack = budget - total;
            let mut choices = Vec::with_capacity(alt.args.len());
            for (x, m) in alt.args.iter().zip(&mins) {
                choices.push(self.term(x, m + slack, env)?);
            }
            let heads = self.heads(&alt.head, env)?;
            let mut combos: Vec<(usize, Vec<ProofTerm>)> = vec![(1, Vec::new())];
            for opts in &choices {
                let mut next = Vec::new();
                for (size, prefix) in &combos {
                    for o in opts {
                        let s = size + o.size();
                        if s <= budget {
                            let mut v = prefix.clone();
                            v.push(o.clone());
                            next.push((s, v));
                        }
                    }
                }
                combos = next;
            }
            for (_, args) in combos {
                for h in &heads {
                    out.push(ProofTerm::app(h.clone(), args.clone()));
                }
            }
        }
        Ok(out)
    }
}

/// Outcome of [`decide`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub inhabited: bool,
    pub solvable: bool,
    /// The set of inhabitants is finite, possibly empty.
    pub finitely_inhabited: Ternary,
    /// A smallest inhabitant.
    pub witness: Option<ProofTerm>,
}

fn analyse<R>(s: &Sequent, f: impl FnOnce(&Analysis) -> R) -> R {
    let t = represent(s, &FpContext::new()).expect("representation of a sequent with no fixed-point context");
    let a = Analysis::new(&t, &s.ctx).expect("representations are closed");
    f(&a)
}

pub fn decide_inhabited(s: &Sequent) -> bool {
    analyse(s, |a| a.inhabited())
}

pub fn decide_solvable(s: &Sequent) -> bool {
    analyse(s, |a| a.solvable())
}

pub fn decide_finite(s: &Sequent) -> Ternary {
    analyse(s, |a| a.finite())
}

/// Inhabitants of `s` of size at most `max_size`.
pub fn enumerate_members(s: &Sequent, max_size: usize) -> Vec<ProofTerm> {
    analyse(s, |a| a.enumerate(max_size).expect("representations are well scoped"))
}

pub fn count_members(s: &Sequent, max_size: usize) -> usize {
    enumerate_members(s, max_size).len()
}

pub fn decide(s: &Sequent) -> Verdict {
    analyse(s, |a| Verdict {
        inhabited: a.inhabited(),
        solvable: a.solvable(),
        finitely_inhabited: a.finite(),
        witness: a
            .min_size()
            .and_then(|n| a.enumerate(n).expect("representations are well scoped").into_iter().next()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_bar::{enumerate_proofs_by_size, typecheck};
    use crate::parse::{parse_proof_term, parse_sequent};

    fn s(text: &str) -> Sequent {
        parse_sequent(text).unwrap()
    }

    #[test]
    fn boole() {
        let b = s("|- p -> p -> p");
        let v = decide(&b);
        assert!(v.inhabited && v.solvable);
        assert_eq!(v.finitely_inhabited, Ternary::Yes);
        assert_eq!(count_members(&b, 10), 2);
    }

    #[test]
    fn infty_is_solvable_only() {
        let v = decide(&s("|- (p -> p) -> p"));
        assert!(!v.inhabited && v.solvable && v.witness.is_none());
    }

    #[test]
    fn peirce_is_empty() {
        let v = decide(&s("|- ((p -> q) -> p) -> p"));
        assert!(!v.inhabited && !v.solvable);
        assert_eq!(count_members(&s("|- ((p -> q) -> p) -> p"), 12), 0);
    }

    #[test]
    fn church_numerals() {
        let c = s("|- (p -> p) -> p -> p");
        for n in 0..6 {
            assert_eq!(count_members(&c, n + 3), n + 1);
        }
        assert_eq!(decide_finite(&c), Ternary::No);
        let w = decide(&c).witness.unwrap();
        assert!(w.alpha_eq(&parse_proof_term("\\f:p -> p. \\x:p. x").unwrap()));
    }

    #[test]
    fn three_and_dnpeirce() {
        for text in ["|- ((p -> p) -> p) -> p", "|- ((((p -> q) -> p) -> p) -> q) -> q"] {
            let sq = s(text);
            let v = decide(&sq);
            assert!(v.inhabited, "{text}");
            assert!(typecheck(&sq.ctx, v.witness.as_ref().unwrap(), &sq.goal));
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for text in [
            "|- ((p -> p) -> p) -> p",
            "|- ((((p -> q) -> p) -> p) -> q) -> q",
            "x: p, f: p -> p |- p",
            "|- ((p -> p) -> p -> p) -> p",
            "y: (q -> p) -> p, g: p -> q |- p -> q",
        ] {
            let sq = s(text);
            let ours: BTreeSet<_> = enumerate_members(&sq, 9).into_iter().map(|t| t.key()).collect();
            let oracle: BTreeSet<_> = enumerate_proofs_by_size(&sq, 9).into_iter().map(|t| t.key()).collect();
            assert_eq!(ours, oracle, "{text}");
        }
    }

    #[test]
    fn open_terms_are_rejected() {
        let t = crate::parse::parse_fin_term("X{|- p}").unwrap();
        assert!(matches!(Analysis::new(&t, &Context::new()), Err(AnalysisError::Open(_))));
    }
}
