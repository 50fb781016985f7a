//! Formulas of implicational logic, typing contexts and sequents.
//!
//! Formulas are hash-consed: structurally equal formulas share one
//! allocation, so equality and hashing are pointer operations. Ordering is
//! structural, which keeps every sorted collection reproducible across runs.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

/// A propositional variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Atom {
        Atom(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A proof-term variable (also used for the hypotheses of a context).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Var {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl std::ops::Deref for Var {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Var {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Returns `prefix1`, `prefix2`, ... : the first candidate rejected by `taken`.
pub fn fresh_var(prefix: &str, taken: impl Fn(&str) -> bool) -> Var {
    (1..)
        .map(|i| format!("{prefix}{i}"))
        .find(|name| !taken(name))
        .map(|name| Var::new(&name))
        .expect("unbounded candidate supply")
}

#[derive(PartialEq, Eq, Hash)]
pub enum FormulaNode {
    Atom(Atom),
    Imp(Formula, Formula),
}

/// An implicational formula, interned.
#[derive(Clone)]
pub struct Formula(Arc<FormulaNode>);

fn interner() -> &'static Mutex<HashSet<Arc<FormulaNode>>> {
    static INTERNER: OnceLock<Mutex<HashSet<Arc<FormulaNode>>>> = OnceLock::new();
    INTERNER.get_or_init(Default::default)
}

impl Formula {
    fn intern(node: FormulaNode) -> Formula {
        let mut table = interner().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(existing) = table.get(&node) {
            return Formula(existing.clone());
        }
        let shared = Arc::new(node);
        table.insert(shared.clone());
        Formula(shared)
    }

    pub fn atom(name: &str) -> Formula {
        Formula::intern(FormulaNode::Atom(Atom::new(name)))
    }

    pub fn from_atom(atom: Atom) -> Formula {
        Formula::intern(FormulaNode::Atom(atom))
    }

    pub fn imp(left: Formula, right: Formula) -> Formula {
        Formula::intern(FormulaNode::Imp(left, right))
    }

    /// `A1 -> ... -> Ak -> target`, right-nested.
    pub fn compose(args: &[Formula], target: &Atom) -> Formula {
        args.iter()
            .rev()
            .fold(Formula::from_atom(target.clone()), |acc, a| {
                Formula::imp(a.clone(), acc)
            })
    }

    pub fn node(&self) -> &FormulaNode {
        &self.0
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self.node() {
            FormulaNode::Atom(a) => Some(a),
            FormulaNode::Imp(..) => None,
        }
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self.node() {
            FormulaNode::Imp(a, b) => Some((a, b)),
            FormulaNode::Atom(_) => None,
        }
    }

    pub fn is_atom(&self) -> bool {
        self.as_atom().is_some()
    }

    /// Splits `A1 -> ... -> Ak -> p` into `([A1, ..., Ak], p)`.
    pub fn decompose(&self) -> (Vec<Formula>, Atom) {
        let mut args = Vec::new();
        let mut cur = self;
        loop {
            match cur.node() {
                FormulaNode::Atom(p) => return (args, p.clone()),
                FormulaNode::Imp(a, b) => {
                    args.push(a.clone());
                    cur = b;
                }
            }
        }
    }

    /// Target atom of the vectorial decomposition.
    pub fn target(&self) -> &Atom {
        let mut cur = self;
        loop {
            match cur.node() {
                FormulaNode::Atom(p) => return p,
                FormulaNode::Imp(_, b) => cur = b,
            }
        }
    }

    pub fn arity(&self) -> usize {
        let mut n = 0;
        let mut cur = self;
        while let FormulaNode::Imp(_, b) = cur.node() {
            n += 1;
            cur = b;
        }
        n
    }

    /// `rank(p) = 0`, `rank(A -> B) = max(rank(A) + 1, rank(B))`.
    pub fn rank(&self) -> usize {
        match self.node() {
            FormulaNode::Atom(_) => 0,
            FormulaNode::Imp(a, b) => (a.rank() + 1).max(b.rank()),
        }
    }

    /// Number of connectives and atoms.
    pub fn size(&self) -> usize {
        match self.node() {
            FormulaNode::Atom(_) => 1,
            FormulaNode::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn subformulas_into(&self, out: &mut BTreeSet<Formula>) {
        if out.insert(self.clone()) {
            if let FormulaNode::Imp(a, b) = self.node() {
                a.subformulas_into(out);
                b.subformulas_into(out);
            }
        }
    }

    pub fn atoms_into(&self, out: &mut BTreeSet<Atom>) {
        match self.node() {
            FormulaNode::Atom(p) => {
                out.insert(p.clone());
            }
            FormulaNode::Imp(a, b) => {
                a.atoms_into(out);
                b.atoms_into(out);
            }
        }
    }
}

/// Subformula closure of a set of formulas.
pub fn subformula_closure<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for f in formulas {
        f.subformulas_into(&mut out);
    }
    out
}

impl PartialEq for Formula {
    fn eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.0) as usize).hash(state)
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Formula) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match (self.node(), other.node()) {
            (FormulaNode::Atom(a), FormulaNode::Atom(b)) => a.cmp(b),
            (FormulaNode::Atom(_), FormulaNode::Imp(..)) => Ordering::Less,
            (FormulaNode::Imp(..), FormulaNode::Atom(_)) => Ordering::Greater,
            (FormulaNode::Imp(a1, b1), FormulaNode::Imp(a2, b2)) => {
                a1.cmp(a2).then_with(|| b1.cmp(b2))
            }
        }
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Formula) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            FormulaNode::Atom(p) => write!(f, "{p}"),
            FormulaNode::Imp(a, b) => {
                if a.is_atom() {
                    write!(f, "{a} -> {b}")
                } else {
                    write!(f, "({a}) -> {b}")
                }
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("variable `{0}` is declared twice")]
    Duplicate(Var),
}

/// A typing context: declarations `x : A`, no variable declared twice.
///
/// Equality is set equality of declarations. Iteration follows insertion
/// order, which fixes the enumeration order of alternatives everywhere.
#[derive(Clone, Default)]
pub struct Context {
    decls: Vec<(Var, Formula)>,
    index: HashMap<Var, usize>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn from_decls(
        decls: impl IntoIterator<Item = (Var, Formula)>,
    ) -> Result<Context, ContextError> {
        let mut ctx = Context::new();
        for (x, a) in decls {
            ctx.push(x, a)?;
        }
        Ok(ctx)
    }

    pub fn push(&mut self, var: Var, formula: Formula) -> Result<(), ContextError> {
        if self.index.contains_key(&var) {
            return Err(ContextError::Duplicate(var));
        }
        self.index.insert(var.clone(), self.decls.len());
        self.decls.push((var, formula));
        Ok(())
    }

    /// `self, var : formula`. Panics if `var` is already declared.
    pub fn extended(&self, var: Var, formula: Formula) -> Context {
        let mut ctx = self.clone();
        ctx.push(var, formula)
            .expect("extension by an undeclared variable");
        ctx
    }

    /// `self, var : formula`, dropping any earlier declaration of `var`.
    pub fn shadowed(&self, var: Var, formula: Formula) -> Context {
        if !self.contains(&var) {
            return self.extended(var, formula);
        }
        let mut ctx = Context::from_decls(self.decls.iter().filter(|(x, _)| *x != var).cloned())
            .expect("subset of a context is a context");
        ctx.push(var, formula).expect("variable was removed");
        ctx
    }

    pub fn get(&self, var: &str) -> Option<&Formula> {
        self.index.get(var).map(|&i| &self.decls[i].1)
    }

    pub fn contains(&self, var: &str) -> bool {
        self.index.contains_key(var)
    }

    /// Position of `var` in declaration order.
    pub fn position(&self, var: &str) -> Option<usize> {
        self.index.get(var).copied()
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Formula)> + '_ {
        self.decls.iter().map(|(x, a)| (x, a))
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> + '_ {
        self.decls.iter().map(|(x, _)| x)
    }

    /// `|Γ|`: the set of formulas declared, duplicates collapsed.
    pub fn formula_set(&self) -> BTreeSet<Formula> {
        self.decls.iter().map(|(_, a)| a.clone()).collect()
    }

    pub fn has_decl(&self, var: &str, formula: &Formula) -> bool {
        self.get(var) == Some(formula)
    }

    /// Inclusion of declaration sets.
    pub fn is_subset(&self, other: &Context) -> bool {
        self.decls.iter().all(|(x, a)| other.has_decl(x, a))
    }

    /// Declarations of `self` not present in `smaller`, in `self`'s order.
    pub fn difference(&self, smaller: &Context) -> Vec<(Var, Formula)> {
        self.decls
            .iter()
            .filter(|(x, a)| !smaller.has_decl(x, a))
            .cloned()
            .collect()
    }

    /// Declarations present in both, in `self`'s order.
    pub fn intersection(&self, other: &Context) -> Context {
        Context::from_decls(
            self.decls
                .iter()
                .filter(|(x, a)| other.has_decl(x, a))
                .cloned(),
        )
        .expect("subset of a context is a context")
    }

    /// The inessential-extension order: `self ⊆ other` with `|self| = |other|`.
    pub fn leq(&self, other: &Context) -> bool {
        self.is_subset(other) && self.formula_set() == other.formula_set()
    }
}

pub fn context_leq(small: &Context, big: &Context) -> bool {
    small.leq(big)
}

impl PartialEq for Context {
    fn eq(&self, other: &Context) -> bool {
        self.len() == other.len() && self.is_subset(other)
    }
}

impl Eq for Context {}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, a)) in self.decls.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}: {a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// A proof-search problem `Γ ⇒ A`.
#[derive(Clone, PartialEq, Eq)]
pub struct Sequent {
    pub ctx: Context,
    pub goal: Formula,
}

impl Sequent {
    pub fn new(ctx: Context, goal: Formula) -> Sequent {
        Sequent { ctx, goal }
    }

    pub fn closed(goal: Formula) -> Sequent {
        Sequent::new(Context::new(), goal)
    }

    pub fn is_atomic(&self) -> bool {
        self.goal.is_atom()
    }

    /// `σ ≤ σ'`: contexts in the inessential-extension order, equal goals.
    pub fn leq(&self, other: &Sequent) -> bool {
        self.goal == other.goal && self.ctx.leq(&other.ctx)
    }

    /// `|σ|`, defined for atomic sequents.
    pub fn strip(&self) -> Option<StrippedSequent> {
        self.goal.as_atom().map(|p| StrippedSequent {
            formulas: self.ctx.formula_set(),
            goal_atom: p.clone(),
        })
    }
}

pub fn sequent_leq(small: &Sequent, big: &Sequent) -> bool {
    small.leq(big)
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.is_empty() {
            write!(f, "|- {}", self.goal)
        } else {
            write!(f, "{} |- {}", self.ctx, self.goal)
        }
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A sequent with its context collapsed to a set of formulas.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrippedSequent {
    pub formulas: BTreeSet<Formula>,
    pub goal_atom: Atom,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_formula, parse_sequent};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn ctx(s: &str) -> Context {
        parse_sequent(&format!("{s} |- p")).unwrap().ctx
    }

    #[test]
    fn decompose_examples() {
        let p = Atom::new("p");
        assert_eq!(f("p").decompose(), (vec![], p.clone()));
        assert_eq!(f("p -> p -> p").decompose(), (vec![f("p"), f("p")], p.clone()));
        assert_eq!(f("(p -> p) -> p").decompose(), (vec![f("p -> p")], p));
    }

    #[test]
    fn interning_shares_structure() {
        let a = f("(p -> q) -> p");
        let b = Formula::imp(Formula::imp(Formula::atom("p"), Formula::atom("q")), Formula::atom("p"));
        assert!(Arc::ptr_eq(&a.0, &b.0));
    }

    #[test]
    fn rank_of_examples() {
        assert_eq!(f("p").rank(), 0);
        assert_eq!(f("p -> p -> p").rank(), 1);
        assert_eq!(f("((p -> p) -> p) -> p").rank(), 3);
    }

    #[test]
    fn context_leq_examples() {
        assert!(ctx("x: p").leq(&ctx("x: p")));
        assert!(ctx("x: p").leq(&ctx("x: p, y: p")));
        assert!(!ctx("x: p").leq(&ctx("x: p, y: q")));
        assert!(!ctx("x: p, y: p").leq(&ctx("x: p")));
        // Renaming is not an extension.
        assert!(!ctx("x: p").leq(&ctx("y: p")));
    }

    #[test]
    fn sequent_leq_examples() {
        let s = |t: &str| parse_sequent(t).unwrap();
        assert!(s("x: p |- p").leq(&s("x: p |- p")));
        assert!(s("x: p |- p").leq(&s("x: p, y: p |- p")));
        assert!(!s("x: p |- p").leq(&s("x: p |- q")));
    }

    #[test]
    fn context_equality_ignores_order() {
        assert_eq!(ctx("x: p, y: q"), ctx("y: q, x: p"));
        assert_ne!(ctx("x: p, y: q"), ctx("y: p, x: q"));
    }

    #[test]
    fn duplicate_declaration_is_rejected() {
        let mut c = ctx("x: p");
        assert_eq!(c.push(Var::new("x"), f("q")), Err(ContextError::Duplicate(Var::new("x"))));
    }

    #[test]
    fn stripping() {
        let s = parse_sequent("x: p, y: p, f: p -> q |- q").unwrap();
        let st = s.strip().unwrap();
        assert_eq!(st.formulas.len(), 2);
        assert_eq!(st.goal_atom, Atom::new("q"));
        assert!(parse_sequent("|- p -> p").unwrap().strip().is_none());
    }
}
