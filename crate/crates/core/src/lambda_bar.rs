//! Cut-free proof terms `λx^A.t | x⟨t₁,…,t_k⟩`, their typing rules,
//! variable renaming, and a brute-force enumerator of typed terms.
//!
//! The enumerator does not share any code with the solution-space machinery
//! and serves as the reference those are tested against.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::syntax::{fresh_var, Context, Formula, Sequent, Var};

#[derive(Clone)]
pub enum ProofTerm {
    Lam {
        var: Var,
        ann: Formula,
        body: Box<ProofTerm>,
    },
    App {
        head: Var,
        args: Vec<ProofTerm>,
    },
}

/// Alpha-invariant shape of a term: bound variables become binder levels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermKey {
    Lam(Formula, Box<TermKey>),
    App(HeadKey, Vec<TermKey>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HeadKey {
    Bound(usize),
    Free(Var),
}

/// Resolves a variable against a stack of binders, innermost last.
pub fn head_key(binders: &[Var], x: &Var) -> HeadKey {
    match binders.iter().rposition(|b| b == x) {
        Some(level) => HeadKey::Bound(level),
        None => HeadKey::Free(x.clone()),
    }
}

impl ProofTerm {
    pub fn lam(var: Var, ann: Formula, body: ProofTerm) -> ProofTerm {
        ProofTerm::Lam {
            var,
            ann,
            body: Box::new(body),
        }
    }

    pub fn app(head: Var, args: Vec<ProofTerm>) -> ProofTerm {
        ProofTerm::App { head, args }
    }

    pub fn var(name: &str) -> ProofTerm {
        ProofTerm::app(Var::new(name), Vec::new())
    }

    /// Number of abstraction and application nodes.
    pub fn size(&self) -> usize {
        match self {
            ProofTerm::Lam { body, .. } => 1 + body.size(),
            ProofTerm::App { args, .. } => 1 + args.iter().map(ProofTerm::size).sum::<usize>(),
        }
    }

    /// Height of the typing derivation, counted in edges: a variable with
    /// no arguments has depth 0.
    pub fn depth(&self) -> usize {
        match self {
            ProofTerm::Lam { body, .. } => 1 + body.depth(),
            ProofTerm::App { args, .. } => args
                .iter()
                .map(|a| 1 + a.depth())
                .max()
                .unwrap_or(0),
        }
    }

    pub fn key(&self) -> TermKey {
        fn go(t: &ProofTerm, binders: &mut Vec<Var>) -> TermKey {
            match t {
                ProofTerm::Lam { var, ann, body } => {
                    binders.push(var.clone());
                    let k = go(body, binders);
                    binders.pop();
                    TermKey::Lam(ann.clone(), Box::new(k))
                }
                ProofTerm::App { head, args } => TermKey::App(
                    head_key(binders, head),
                    args.iter().map(|a| go(a, binders)).collect(),
                ),
            }
        }
        go(self, &mut Vec::new())
    }

    pub fn alpha_eq(&self, other: &ProofTerm) -> bool {
        self.key() == other.key()
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        fn go(t: &ProofTerm, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
            match t {
                ProofTerm::Lam { var, body, .. } => {
                    bound.push(var.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                ProofTerm::App { head, args } => {
                    if !bound.contains(head) {
                        out.insert(head.clone());
                    }
                    for a in args {
                        go(a, bound, out);
                    }
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    fn all_vars_into(&self, out: &mut BTreeSet<Var>) {
        match self {
            ProofTerm::Lam { var, body, .. } => {
                out.insert(var.clone());
                body.all_vars_into(out);
            }
            ProofTerm::App { head, args } => {
                out.insert(head.clone());
                for a in args {
                    a.all_vars_into(out);
                }
            }
        }
    }
}

impl PartialEq for ProofTerm {
    fn eq(&self, other: &ProofTerm) -> bool {
        self.alpha_eq(other)
    }
}

impl Eq for ProofTerm {}

impl Hash for ProofTerm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl fmt::Display for ProofTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofTerm::Lam { var, ann, body } => write!(f, "\\{var}:{ann}. {body}"),
            ProofTerm::App { head, args } => {
                write!(f, "{head}")?;
                if !args.is_empty() {
                    f.write_str("<")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(">")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for ProofTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Why a typing judgment fails, with the offending subterm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeError {
    pub term: String,
    pub goal: Formula,
    pub reason: String,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}` does not have type `{}`: {}", self.term, self.goal, self.reason)
    }
}

impl std::error::Error for TypeError {}

/// `Γ ⊢ t : A` by the two rules of the cut-free calculus.
pub fn typecheck(ctx: &Context, t: &ProofTerm, goal: &Formula) -> bool {
    check_diagnostic(ctx, t, goal).is_ok()
}

/// As [`typecheck`], reporting the first failing node.
pub fn check_diagnostic(ctx: &Context, t: &ProofTerm, goal: &Formula) -> Result<(), TypeError> {
    let fail = |reason: String| TypeError {
        term: t.to_string(),
        goal: goal.clone(),
        reason,
    };
    match t {
        ProofTerm::Lam { var, ann, body } => match goal.as_imp() {
            Some((a, b)) if a == ann => check_diagnostic(&ctx.shadowed(var.clone(), ann.clone()), body, b),
            Some((a, _)) => Err(fail(format!("binder annotated `{ann}` but the goal expects `{a}`"))),
            None => Err(fail("an abstraction cannot have atomic type".into())),
        },
        ProofTerm::App { head, args } => {
            let Some(p) = goal.as_atom() else {
                return Err(fail("an application needs an atomic goal".into()));
            };
            let Some(decl) = ctx.get(head) else {
                return Err(fail(format!("`{head}` is not declared")));
            };
            let (params, target) = decl.decompose();
            if &target != p {
                return Err(fail(format!("`{head}` : `{decl}` does not end in `{p}`")));
            }
            if params.len() != args.len() {
                return Err(fail(format!(
                    "`{head}` takes {} arguments, {} given",
                    params.len(),
                    args.len()
                )));
            }
            for (a, b) in args.iter().zip(&params) {
                check_diagnostic(ctx, a, b)?;
            }
            Ok(())
        }
    }
}

/// `[to/from]t`, renaming binders of `t` where they would capture `to`.
pub fn rename(t: &ProofTerm, from: &Var, to: &Var) -> ProofTerm {
    if from == to {
        return t.clone();
    }
    match t {
        ProofTerm::Lam { var, ann, body } => {
            if var == from {
                return t.clone();
            }
            if var == to && body.free_vars().contains(from) {
                let mut taken = BTreeSet::new();
                body.all_vars_into(&mut taken);
                taken.insert(from.clone());
                taken.insert(to.clone());
                let fresh = fresh_var(var.name(), |n| taken.contains(n));
                let body = rename(body, var, &fresh);
                return ProofTerm::lam(fresh, ann.clone(), rename(&body, from, to));
            }
            ProofTerm::lam(var.clone(), ann.clone(), rename(body, from, to))
        }
        ProofTerm::App { head, args } => ProofTerm::app(
            if head == from { to.clone() } else { head.clone() },
            args.iter().map(|a| rename(a, from, to)).collect(),
        ),
    }
}

fn binder_for(ctx: &Context) -> Var {
    fresh_var("v", |n| ctx.contains(n))
}

fn sort_dedup(terms: Vec<ProofTerm>) -> Vec<ProofTerm> {
    let mut keyed: Vec<(usize, TermKey, ProofTerm)> =
        terms.into_iter().map(|t| (t.size(), t.key(), t)).collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    keyed.dedup_by(|a, b| a.1 == b.1);
    keyed.into_iter().map(|(_, _, t)| t).collect()
}

/// All terms `t` with `Γ ⊢ t : A` and derivation depth at most `max_depth`,
/// up to alpha, ordered by (size, shape).
pub fn enumerate_proofs(s: &Sequent, max_depth: usize) -> Vec<ProofTerm> {
    sort_dedup(by_depth(&s.ctx, &s.goal, max_depth))
}

fn by_depth(ctx: &Context, goal: &Formula, depth: usize) -> Vec<ProofTerm> {
    if let Some((a, b)) = goal.as_imp() {
        if depth == 0 {
            return Vec::new();
        }
        let x = binder_for(ctx);
        let inner = ctx.extended(x.clone(), a.clone());
        return by_depth(&inner, b, depth - 1)
            .into_iter()
            .map(|t| ProofTerm::lam(x.clone(), a.clone(), t))
            .collect();
    }
    let p = goal.as_atom().expect("non-implication is an atom");
    let mut out = Vec::new();
    for (y, decl) in ctx.iter() {
        let (params, target) = decl.decompose();
        if &target != p {
            continue;
        }
        if params.is_empty() {
            out.push(ProofTerm::app(y.clone(), Vec::new()));
            continue;
        }
        if depth == 0 {
            continue;
        }
        let choices: Vec<Vec<ProofTerm>> =
            params.iter().map(|b| by_depth(ctx, b, depth - 1)).collect();
        for args in cartesian(&choices) {
            out.push(ProofTerm::app(y.clone(), args));
        }
    }
    out
}

fn cartesian(choices: &[Vec<ProofTerm>]) -> Vec<Vec<ProofTerm>> {
    let mut acc: Vec<Vec<ProofTerm>> = vec![Vec::new()];
    for options in choices {
        let mut next = Vec::with_capacity(acc.len() * options.len());
        for prefix in &acc {
            for o in options {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// All terms `t` with `Γ ⊢ t : A` and `size(t) ≤ max_size`, up to alpha,
/// ordered by (size, shape).
pub fn enumerate_proofs_by_size(s: &Sequent, max_size: usize) -> Vec<ProofTerm> {
    sort_dedup(
        by_size(&s.ctx, &s.goal, max_size)
            .into_iter()
            .map(|(t, _)| t)
            .collect(),
    )
}

fn by_size(ctx: &Context, goal: &Formula, budget: usize) -> Vec<(ProofTerm, usize)> {
    if budget == 0 {
        return Vec::new();
    }
    if let Some((a, b)) = goal.as_imp() {
        let x = binder_for(ctx);
        let inner = ctx.extended(x.clone(), a.clone());
        return by_size(&inner, b, budget - 1)
            .into_iter()
            .map(|(t, n)| (ProofTerm::lam(x.clone(), a.clone(), t), n + 1))
            .collect();
    }
    let p = goal.as_atom().expect("non-implication is an atom");
    let mut out = Vec::new();
    for (y, decl) in ctx.iter() {
        let (params, target) = decl.decompose();
        if &target != p || params.len() > budget - 1 {
            continue;
        }
        for (args, n) in args_by_size(ctx, &params, budget - 1) {
            out.push((ProofTerm::app(y.clone(), args), n + 1));
        }
    }
    out
}

fn args_by_size(ctx: &Context, params: &[Formula], budget: usize) -> Vec<(Vec<ProofTerm>, usize)> {
    let Some((first, rest)) = params.split_first() else {
        return vec![(Vec::new(), 0)];
    };
    let mut out = Vec::new();
    let reserve = rest.len();
    if budget < 1 + reserve {
        return out;
    }
    for (t, n) in by_size(ctx, first, budget - reserve) {
        for (mut tail, m) in args_by_size(ctx, rest, budget - n) {
            tail.insert(0, t.clone());
            out.push((tail, n + m));
        }
    }
    out
}

/// Whether `Γ ⊢ A` has a proof of derivation depth at most `max_depth`.
///
/// Only the set of formulas in `Γ` matters, so results are memoized on it;
/// this keeps the question cheap at depths where listing proofs is not.
pub struct ProvabilityOracle {
    memo: HashMap<(BTreeSet<Formula>, Formula, usize), bool>,
}

impl Default for ProvabilityOracle {
    fn default() -> Self {
        ProvabilityOracle::new()
    }
}

impl ProvabilityOracle {
    pub fn new() -> ProvabilityOracle {
        ProvabilityOracle { memo: HashMap::new() }
    }

    pub fn provable(&mut self, s: &Sequent, max_depth: usize) -> bool {
        self.within(s.ctx.formula_set(), &s.goal, max_depth)
    }

    fn within(&mut self, hyps: BTreeSet<Formula>, goal: &Formula, depth: usize) -> bool {
        let key = (hyps, goal.clone(), depth);
        if let Some(&b) = self.memo.get(&key) {
            return b;
        }
        let (hyps, _, _) = &key;
        let result = if let Some((a, b)) = goal.as_imp() {
            depth > 0 && {
                let mut inner = hyps.clone();
                inner.insert(a.clone());
                self.within(inner, b, depth - 1)
            }
        } else {
            let p = goal.as_atom().expect("atom");
            let hyps_vec: Vec<Formula> = hyps.iter().cloned().collect();
            hyps_vec.iter().any(|decl| {
                let (params, target) = decl.decompose();
                &target == p
                    && (params.is_empty()
                        || (depth > 0
                            && params
                                .iter()
                                .all(|b| self.within(hyps.clone(), b, depth - 1))))
            })
        };
        self.memo.insert(key, result);
        result
    }
}
