//! Finitary terms: abstractions, elimination alternatives and greatest
//! fixed points whose variables are annotated with atomic sequents.
//!
//! A fixed point `gfp X^σ. ΣE` binds every free occurrence `X^{σ′}` in its
//! alternatives, whatever `σ′` is; occurrences are resolved lexically to the
//! innermost enclosing fixed point of the same name.
//!
//! [`represent`] computes the finitary representation of a sequent's
//! solution space.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::lambda_bar::{head_key, HeadKey};
use crate::syntax::{fresh_var, subformula_closure, Atom, Context, Formula, Sequent, StrippedSequent, Var};

#[derive(Clone)]
pub enum FinTerm {
    Lam {
        var: Var,
        ann: Formula,
        body: Box<FinTerm>,
    },
    Gfp {
        var: Var,
        sequent: Sequent,
        alts: Vec<FinAlt>,
    },
    /// A fixed point whose variable does not occur, written as its sum.
    Sum(Vec<FinAlt>),
    FpOcc {
        var: Var,
        sequent: Sequent,
    },
}

#[derive(Clone)]
pub struct FinAlt {
    pub head: Var,
    pub args: Vec<FinTerm>,
}

impl FinAlt {
    pub fn new(head: Var, args: Vec<FinTerm>) -> FinAlt {
        FinAlt { head, args }
    }
}

/// Declarations `X : σ` of fixed-point variables, no name twice.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct FpContext {
    decls: Vec<(Var, Sequent)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpContextError {
    #[error("fixed-point variable `{0}` is declared twice")]
    Duplicate(Var),
    #[error("fixed-point variable `{0}` must be typed by an atomic sequent")]
    NotAtomic(Var),
}

impl FpContext {
    pub fn new() -> FpContext {
        FpContext::default()
    }

    pub fn from_decls(decls: impl IntoIterator<Item = (Var, Sequent)>) -> Result<FpContext, FpContextError> {
        let mut xi = FpContext::new();
        for (x, s) in decls {
            xi.push(x, s)?;
        }
        Ok(xi)
    }

    pub fn push(&mut self, var: Var, sequent: Sequent) -> Result<(), FpContextError> {
        if self.get(&var).is_some() {
            return Err(FpContextError::Duplicate(var));
        }
        if !sequent.is_atomic() {
            return Err(FpContextError::NotAtomic(var));
        }
        self.decls.push((var, sequent));
        Ok(())
    }

    /// `self, var : sequent`, replacing an earlier declaration of `var`.
    pub fn shadowed(&self, var: Var, sequent: Sequent) -> FpContext {
        let mut decls: Vec<(Var, Sequent)> = self.decls.iter().filter(|(x, _)| *x != var).cloned().collect();
        decls.push((var, sequent));
        FpContext { decls }
    }

    pub fn get(&self, var: &Var) -> Option<&Sequent> {
        self.decls.iter().find(|(x, _)| x == var).map(|(_, s)| s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Sequent)> + '_ {
        self.decls.iter().map(|(x, s)| (x, s))
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    /// Inclusion of declaration lists, order ignored.
    pub fn is_subset(&self, other: &FpContext) -> bool {
        self.decls.iter().all(|(x, s)| other.get(x) == Some(s))
    }
}

impl fmt::Display for FpContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, s)) in self.decls.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{x}: {s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FpContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Alpha-invariant shape of a finitary term. Abstraction-bound names are
/// replaced by levels, including inside sequent annotations, and fixed-point
/// names by the level of their binder.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FinKey {
    Lam(Formula, Box<FinKey>),
    Gfp(SequentKey, Vec<FinAltKey>),
    Sum(Vec<FinAltKey>),
    Bound(usize, SequentKey),
    Free(Var, SequentKey),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinAltKey {
    pub head: HeadKey,
    pub args: Vec<FinKey>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SequentKey {
    pub ctx: Vec<(HeadKey, Formula)>,
    pub goal: Formula,
}

fn sequent_key(binders: &[Var], s: &Sequent) -> SequentKey {
    let mut ctx: Vec<(HeadKey, Formula)> = s.ctx.iter().map(|(x, a)| (head_key(binders, x), a.clone())).collect();
    ctx.sort();
    SequentKey {
        ctx,
        goal: s.goal.clone(),
    }
}

impl FinTerm {
    pub fn lam(var: Var, ann: Formula, body: FinTerm) -> FinTerm {
        FinTerm::Lam {
            var,
            ann,
            body: Box::new(body),
        }
    }

    /// Wraps `body` in abstractions over `binders`, outermost first.
    pub fn lams(binders: Vec<(Var, Formula)>, body: FinTerm) -> FinTerm {
        binders.into_iter().rev().fold(body, |acc, (x, a)| FinTerm::lam(x, a, acc))
    }

    pub fn key(&self) -> FinKey {
        self.key_in(&mut Vec::new(), &mut Vec::new())
    }

    fn key_in(&self, binders: &mut Vec<Var>, fps: &mut Vec<Var>) -> FinKey {
        match self {
            FinTerm::Lam { var, ann, body } => {
                binders.push(var.clone());
                let k = body.key_in(binders, fps);
                binders.pop();
                FinKey::Lam(ann.clone(), Box::new(k))
            }
            FinTerm::Gfp { var, sequent, alts } => {
                let sk = sequent_key(binders, sequent);
                fps.push(var.clone());
                let keys = alt_keys(alts, binders, fps);
                fps.pop();
                FinKey::Gfp(sk, keys)
            }
            FinTerm::Sum(alts) => FinKey::Sum(alt_keys(alts, binders, fps)),
            FinTerm::FpOcc { var, sequent } => {
                let sk = sequent_key(binders, sequent);
                match fps.iter().rposition(|x| x == var) {
                    Some(level) => FinKey::Bound(level, sk),
                    None => FinKey::Free(var.clone(), sk),
                }
            }
        }
    }

    /// Equality up to renaming of bound names and sum-as-set.
    pub fn same_as(&self, other: &FinTerm) -> bool {
        self.key() == other.key()
    }

    /// Free fixed-point variable occurrences, with their annotations.
    pub fn fpv(&self) -> Vec<(Var, Sequent)> {
        let mut out = Vec::new();
        self.fpv_into(&mut Vec::new(), &mut out);
        out
    }

    fn fpv_into(&self, bound: &mut Vec<Var>, out: &mut Vec<(Var, Sequent)>) {
        match self {
            FinTerm::Lam { body, .. } => body.fpv_into(bound, out),
            FinTerm::Gfp { var, alts, .. } => {
                bound.push(var.clone());
                for a in alts {
                    a.fpv_into(bound, out);
                }
                bound.pop();
            }
            FinTerm::Sum(alts) => {
                for a in alts {
                    a.fpv_into(bound, out);
                }
            }
            FinTerm::FpOcc { var, sequent } => {
                if !bound.contains(var) {
                    out.push((var.clone(), sequent.clone()));
                }
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.fpv().is_empty()
    }

    /// Number of fixed-point binders (elided ones excluded).
    pub fn gfp_count(&self) -> usize {
        match self {
            FinTerm::Lam { body, .. } => body.gfp_count(),
            FinTerm::Gfp { alts, .. } => 1 + alts.iter().map(FinAlt::gfp_count).sum::<usize>(),
            FinTerm::Sum(alts) => alts.iter().map(FinAlt::gfp_count).sum(),
            FinTerm::FpOcc { .. } => 0,
        }
    }

    /// Renames every occurrence of the term variable `from`, including in
    /// sequent annotations, stopping under a rebinding abstraction.
    pub fn rename_var(&self, from: &Var, to: &Var) -> FinTerm {
        let seq = |s: &Sequent| rename_in_sequent(s, from, to);
        match self {
            FinTerm::Lam { var, ann, body } => {
                if var == from {
                    self.clone()
                } else {
                    FinTerm::lam(var.clone(), ann.clone(), body.rename_var(from, to))
                }
            }
            FinTerm::Gfp { var, sequent, alts } => FinTerm::Gfp {
                var: var.clone(),
                sequent: seq(sequent),
                alts: alts.iter().map(|a| a.rename_var(from, to)).collect(),
            },
            FinTerm::Sum(alts) => FinTerm::Sum(alts.iter().map(|a| a.rename_var(from, to)).collect()),
            FinTerm::FpOcc { var, sequent } => FinTerm::FpOcc {
                var: var.clone(),
                sequent: seq(sequent),
            },
        }
    }

    fn all_vars_into(&self, out: &mut BTreeSet<Var>) {
        let seq = |s: &Sequent, out: &mut BTreeSet<Var>| out.extend(s.ctx.vars().cloned());
        match self {
            FinTerm::Lam { var, body, .. } => {
                out.insert(var.clone());
                body.all_vars_into(out);
            }
            FinTerm::Gfp { sequent, alts, .. } => {
                seq(sequent, out);
                for a in alts {
                    out.insert(a.head.clone());
                    for x in &a.args {
                        x.all_vars_into(out);
                    }
                }
            }
            FinTerm::Sum(alts) => {
                for a in alts {
                    out.insert(a.head.clone());
                    for x in &a.args {
                        x.all_vars_into(out);
                    }
                }
            }
            FinTerm::FpOcc { sequent, .. } => seq(sequent, out),
        }
    }
}

fn rename_in_sequent(s: &Sequent, from: &Var, to: &Var) -> Sequent {
    if !s.ctx.contains(from.name()) {
        return s.clone();
    }
    let ctx = Context::from_decls(s.ctx.iter().map(|(x, a)| (if x == from { to.clone() } else { x.clone() }, a.clone())))
        .expect("renaming to a fresh name keeps declarations distinct");
    Sequent::new(ctx, s.goal.clone())
}

fn alt_keys(alts: &[FinAlt], binders: &mut Vec<Var>, fps: &mut Vec<Var>) -> Vec<FinAltKey> {
    let mut keys: Vec<FinAltKey> = alts
        .iter()
        .map(|a| FinAltKey {
            head: head_key(binders, &a.head),
            args: a.args.iter().map(|x| x.key_in(binders, fps)).collect(),
        })
        .collect();
    keys.sort();
    keys.dedup();
    keys
}

impl FinAlt {
    fn fpv_into(&self, bound: &mut Vec<Var>, out: &mut Vec<(Var, Sequent)>) {
        for x in &self.args {
            x.fpv_into(bound, out);
        }
    }

    fn gfp_count(&self) -> usize {
        self.args.iter().map(FinTerm::gfp_count).sum()
    }

    fn rename_var(&self, from: &Var, to: &Var) -> FinAlt {
        FinAlt::new(
            if &self.head == from { to.clone() } else { self.head.clone() },
            self.args.iter().map(|x| x.rename_var(from, to)).collect(),
        )
    }

    pub fn fpv(&self) -> Vec<(Var, Sequent)> {
        let mut out = Vec::new();
        self.fpv_into(&mut Vec::new(), &mut out);
        out
    }
}

impl PartialEq for FinTerm {
    fn eq(&self, other: &FinTerm) -> bool {
        self.same_as(other)
    }
}

fn write_alts(f: &mut fmt::Formatter<'_>, alts: &[FinAlt]) -> fmt::Result {
    if alts.is_empty() {
        return f.write_str("O");
    }
    for (i, a) in alts.iter().enumerate() {
        if i > 0 {
            f.write_str(" + ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

impl fmt::Display for FinTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinTerm::Lam { var, ann, body } => write!(f, "\\{var}:{ann}. {body}"),
            FinTerm::Gfp { var, sequent, alts } => {
                write!(f, "gfp {var}{{{sequent}}}. ")?;
                write_alts(f, alts)
            }
            FinTerm::Sum(alts) => write_alts(f, alts),
            FinTerm::FpOcc { var, sequent } => write!(f, "{var}{{{sequent}}}"),
        }
    }
}

impl fmt::Display for FinAlt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.args.is_empty() {
            f.write_str("<")?;
            for (i, a) in self.args.iter().enumerate() {
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

impl fmt::Debug for FinTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Every fixed point `gfp X^σ` satisfies `σ ≤ σ′` for each occurrence
/// `X^{σ′}` it binds.
pub fn is_well_bound(t: &FinTerm) -> bool {
    well_bound_violation(t).is_none()
}

/// The first binder/occurrence pair breaking well-boundness.
pub fn well_bound_violation(t: &FinTerm) -> Option<(Var, Sequent, Sequent)> {
    match t {
        FinTerm::Lam { body, .. } => well_bound_violation(body),
        FinTerm::FpOcc { .. } => None,
        FinTerm::Sum(alts) => alts.iter().flat_map(|a| &a.args).find_map(well_bound_violation),
        FinTerm::Gfp { var, sequent, alts } => {
            for a in alts {
                for (x, s) in a.fpv() {
                    if &x == var && !sequent.leq(&s) {
                        return Some((x, sequent.clone(), s));
                    }
                }
            }
            alts.iter().flat_map(|a| &a.args).find_map(well_bound_violation)
        }
    }
}

fn grouped(fpv: Vec<(Var, Sequent)>) -> Vec<(Var, Vec<Sequent>)> {
    let mut groups: Vec<(Var, Vec<Sequent>)> = Vec::new();
    for (x, s) in fpv {
        match groups.iter_mut().find(|(y, _)| *y == x) {
            Some((_, v)) => v.push(s),
            None => groups.push((x, vec![s])),
        }
    }
    groups
}

/// The greatest candidate lower bound of a family of sequents: common goal,
/// intersection of contexts. It is a lower bound iff any lower bound exists.
pub fn common_lower_bound(sequents: &[Sequent]) -> Option<Sequent> {
    let (first, rest) = sequents.split_first()?;
    if rest.iter().any(|s| s.goal != first.goal) {
        return None;
    }
    let ctx = rest.iter().fold(first.ctx.clone(), |acc, s| acc.intersection(&s.ctx));
    let candidate = Sequent::new(ctx, first.goal.clone());
    sequents.iter().all(|s| candidate.leq(s)).then_some(candidate)
}

/// Each free fixed-point name has a common lower bound for the sequents it
/// is annotated with.
pub fn is_regular(t: &FinTerm) -> bool {
    regular_fpv(t.fpv())
}

fn regular_fpv(fpv: Vec<(Var, Sequent)>) -> bool {
    grouped(fpv).iter().all(|(_, ss)| common_lower_bound(ss).is_some())
}

/// Each free fixed-point name occurs with a single annotation.
pub fn is_trivially_regular(t: &FinTerm) -> bool {
    grouped(t.fpv()).iter().all(|(_, ss)| ss.iter().all(|s| s == &ss[0]))
}

/// Every subexpression, alternatives included, is regular.
pub fn is_strongly_regular(t: &FinTerm) -> bool {
    match t {
        FinTerm::Lam { body, .. } => is_strongly_regular(body),
        FinTerm::FpOcc { .. } => true,
        FinTerm::Gfp { alts, .. } | FinTerm::Sum(alts) => {
            is_regular(t)
                && alts
                    .iter()
                    .all(|a| regular_fpv(a.fpv()) && a.args.iter().all(is_strongly_regular))
        }
    }
}

/// `Ξ; Γ ⊢ t : goal` in the typing system for finitary terms.
pub fn fin_typecheck(xi: &FpContext, ctx: &Context, t: &FinTerm, goal: &Formula) -> bool {
    match t {
        FinTerm::FpOcc { var, sequent } => {
            let Some(p) = goal.as_atom() else { return false };
            match xi.get(var) {
                Some(sigma) => {
                    sigma.leq(sequent) && sequent.goal.as_atom() == Some(p) && sequent.ctx.is_subset(ctx)
                }
                None => false,
            }
        }
        FinTerm::Gfp { var, sequent, alts } => {
            let Some(p) = goal.as_atom() else { return false };
            if sequent.goal.as_atom() != Some(p) || !sequent.ctx.is_subset(ctx) {
                return false;
            }
            let inner = xi.shadowed(var.clone(), sequent.clone());
            alts.iter().all(|a| alt_typecheck(&inner, ctx, a, p))
        }
        FinTerm::Sum(alts) => match goal.as_atom() {
            Some(p) => alts.iter().all(|a| alt_typecheck(xi, ctx, a, p)),
            None => false,
        },
        FinTerm::Lam { var, ann, body } => {
            let Some((a, b)) = goal.as_imp() else { return false };
            if a != ann {
                return false;
            }
            if ctx.contains(var.name()) {
                let mut taken = BTreeSet::new();
                body.all_vars_into(&mut taken);
                let fresh = fresh_var(var.name(), |n| ctx.contains(n) || taken.contains(n));
                let body = body.rename_var(var, &fresh);
                fin_typecheck(xi, &ctx.extended(fresh, ann.clone()), &body, b)
            } else {
                fin_typecheck(xi, &ctx.extended(var.clone(), ann.clone()), body, b)
            }
        }
    }
}

fn alt_typecheck(xi: &FpContext, ctx: &Context, alt: &FinAlt, p: &Atom) -> bool {
    let Some(decl) = ctx.get(alt.head.name()) else { return false };
    let (params, target) = decl.decompose();
    &target == p
        && params.len() == alt.args.len()
        && alt.args.iter().zip(&params).all(|(x, b)| fin_typecheck(xi, ctx, x, b))
}

/// Replaces fixed points whose variable has no occurrence by plain sums.
pub fn elide_vacuous_gfp(t: &FinTerm) -> FinTerm {
    let alts_of = |alts: &[FinAlt]| -> Vec<FinAlt> {
        alts.iter()
            .map(|a| FinAlt::new(a.head.clone(), a.args.iter().map(elide_vacuous_gfp).collect()))
            .collect()
    };
    match t {
        FinTerm::Lam { var, ann, body } => FinTerm::lam(var.clone(), ann.clone(), elide_vacuous_gfp(body)),
        FinTerm::Gfp { var, sequent, alts } => {
            let used = alts.iter().any(|a| a.fpv().iter().any(|(x, _)| x == var));
            if used {
                FinTerm::Gfp {
                    var: var.clone(),
                    sequent: sequent.clone(),
                    alts: alts_of(alts),
                }
            } else {
                FinTerm::Sum(alts_of(alts))
            }
        }
        FinTerm::Sum(alts) => FinTerm::Sum(alts_of(alts)),
        FinTerm::FpOcc { .. } => t.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentError {
    #[error("invalid fixed-point context: {0}")]
    Context(#[from] FpContextError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("termination measure did not decrease at depth {depth}: {previous} then {current}")]
    MeasureNotDecreasing { depth: usize, previous: String, current: String },
    #[error("invariant broken during recursion at depth {depth}: {reason}")]
    Invariant { depth: usize, reason: String },
}

/// One recursive call of [`represent_traced`]: the sequent, the number `m` of
/// fixed-point declarations, and the measure `size(𝒜) − m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureStep {
    pub depth: usize,
    /// Index in the trace of the calling step.
    pub parent: Option<usize>,
    pub sequent: Sequent,
    pub declarations: usize,
    /// `None` when `size(𝒜)` exceeds `u128`.
    pub measure: Option<u128>,
}

/// The finitary representation `𝓕(σ; Ξ)`, without elision of vacuous
/// fixed points.
pub fn represent(s: &Sequent, xi: &FpContext) -> Result<FinTerm, RepresentError> {
    represent_traced(s, xi).map(|(t, _)| t)
}

/// [`represent`] followed by [`elide_vacuous_gfp`].
pub fn represent_elided(s: &Sequent, xi: &FpContext) -> Result<FinTerm, RepresentError> {
    represent(s, xi).map(|t| elide_vacuous_gfp(&t))
}

/// [`represent`], also returning the measure at every recursive call.
pub fn represent_traced(s: &Sequent, xi: &FpContext) -> Result<(FinTerm, Vec<MeasureStep>), RepresentError> {
    let universe = {
        let mut roots: Vec<Formula> = s.ctx.formula_set().into_iter().collect();
        roots.push(s.goal.clone());
        for (_, th) in xi.iter() {
            roots.push(th.goal.clone());
            roots.extend(th.ctx.formula_set());
        }
        subformula_closure(&roots)
    };
    let atoms = universe.iter().filter(|f| f.is_atom()).count() as u32;
    let formulas = universe.len() as u32;
    let size = 2u128
        .checked_pow(formulas)
        .and_then(|k| k.checked_mul(atoms as u128));
    let mut rep = Representer {
        universe,
        size,
        decls: xi.iter().map(|(x, s)| (x.clone(), s.clone())).collect(),
        reserved: xi.iter().map(|(x, _)| x.clone()).collect(),
        counter: 0,
        trace: Vec::new(),
    };
    rep.check_invariant(&s.ctx, &s.goal)
        .map_err(RepresentError::Precondition)?;
    let t = rep.go(&s.ctx, &s.goal, 0, None)?;
    Ok((t, rep.trace))
}

struct Representer {
    universe: BTreeSet<Formula>,
    size: Option<u128>,
    decls: Vec<(Var, Sequent)>,
    reserved: BTreeSet<Var>,
    counter: usize,
    trace: Vec<MeasureStep>,
}

impl Representer {
    fn fresh_fp(&mut self) -> Var {
        loop {
            self.counter += 1;
            let name = Var::new(&format!("X{}", self.counter));
            if !self.reserved.contains(&name) {
                return name;
            }
        }
    }

    fn measure(&self) -> Option<u128> {
        self.size.map(|s| s.saturating_sub(self.decls.len() as u128))
    }

    /// The invariant under which the recursion terminates: formulas stay in
    /// the universe, the declared contexts form a chain included in `Γ`,
    /// declared goals are in the universe, and strippings are pairwise
    /// distinct.
    fn check_invariant(&self, ctx: &Context, goal: &Formula) -> Result<(), String> {
        if let Some(f) = ctx.formula_set().into_iter().chain([goal.clone()]).find(|f| !self.universe.contains(f)) {
            return Err(format!("`{f}` is outside the subformula universe"));
        }
        for w in self.decls.windows(2) {
            if !w[0].1.ctx.is_subset(&w[1].1.ctx) {
                return Err(format!("context of `{}` is not included in that of `{}`", w[0].0, w[1].0));
            }
        }
        if let Some((x, last)) = self.decls.last() {
            if !last.ctx.is_subset(ctx) {
                return Err(format!("context of `{x}` is not included in `{ctx}`"));
            }
        }
        let mut strippings: BTreeSet<StrippedSequent> = BTreeSet::new();
        for (x, s) in &self.decls {
            if !self.universe.contains(&s.goal) {
                return Err(format!("goal of `{x}` is outside the subformula universe"));
            }
            let st = s.strip().ok_or_else(|| format!("`{x}` is typed by a non-atomic sequent"))?;
            if !strippings.insert(st) {
                return Err(format!("`{x}` repeats the stripping of an earlier declaration"));
            }
        }
        if let Some(size) = self.size {
            if (self.decls.len() as u128) > size {
                return Err("more declarations than stripped sequents".into());
            }
        }
        Ok(())
    }

    fn go(&mut self, ctx: &Context, goal: &Formula, depth: usize, parent: Option<usize>) -> Result<FinTerm, RepresentError> {
        self.check_invariant(ctx, goal)
            .map_err(|reason| RepresentError::Invariant { depth, reason })?;
        let measure = self.measure();
        if let Some(prev) = parent.map(|i| self.trace[i].measure) {
            let decreased = match (prev, measure) {
                (Some(a), Some(b)) => b < a,
                (None, _) => true,
                (Some(_), None) => false,
            };
            if !decreased {
                return Err(RepresentError::MeasureNotDecreasing {
                    depth,
                    previous: format!("{prev:?}"),
                    current: format!("{measure:?}"),
                });
            }
        }
        let index = self.trace.len();
        self.trace.push(MeasureStep {
            depth,
            parent,
            sequent: Sequent::new(ctx.clone(), goal.clone()),
            declarations: self.decls.len(),
            measure,
        });

        let (params, p) = goal.decompose();
        let mut delta = ctx.clone();
        let mut binders = Vec::new();
        for a in &params {
            let z = fresh_var("z", |n| delta.contains(n) || self.decls.iter().any(|(_, s)| s.ctx.contains(n)) || self.reserved.contains(n));
            delta.push(z.clone(), a.clone()).expect("fresh binder");
            binders.push((z, a.clone()));
        }
        let sigma = Sequent::new(delta.clone(), Formula::from_atom(p.clone()));
        let target_set = delta.formula_set();

        let reuse = self.decls.iter().rposition(|(_, th)| {
            th.goal.as_atom() == Some(&p) && th.ctx.is_subset(ctx) && th.ctx.formula_set() == target_set
        });
        if let Some(i) = reuse {
            let var = self.decls[i].0.clone();
            return Ok(FinTerm::lams(binders, FinTerm::FpOcc { var, sequent: sigma }));
        }

        let y = self.fresh_fp();
        self.decls.push((y.clone(), sigma.clone()));
        let mut alts = Vec::new();
        let heads: Vec<(Var, Vec<Formula>)> = delta
            .iter()
            .filter(|(_, b)| b.target() == &p)
            .map(|(x, b)| (x.clone(), b.decompose().0))
            .collect();
        for (head, args) in heads {
            let mut sub = Vec::with_capacity(args.len());
            for b in &args {
                match self.go(&delta, b, depth + 1, Some(index)) {
                    Ok(t) => sub.push(t),
                    Err(e) => {
                        self.decls.pop();
                        return Err(e);
                    }
                }
            }
            alts.push(FinAlt::new(head, sub));
        }
        self.decls.pop();
        Ok(FinTerm::lams(
            binders,
            FinTerm::Gfp {
                var: y,
                sequent: sigma,
                alts,
            },
        ))
    }
}

/// Free term variables of `t` in the sense of the typing system: heads and
/// annotation contexts not bound by an enclosing abstraction.
pub fn free_term_vars(t: &FinTerm) -> BTreeSet<Var> {
    fn go(t: &FinTerm, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let seq = |s: &Sequent, bound: &Vec<Var>, out: &mut BTreeSet<Var>| {
            out.extend(s.ctx.vars().filter(|x| !bound.contains(x)).cloned())
        };
        match t {
            FinTerm::Lam { var, body, .. } => {
                bound.push(var.clone());
                go(body, bound, out);
                bound.pop();
            }
            FinTerm::Gfp { sequent, alts, .. } => {
                seq(sequent, bound, out);
                alt_vars(alts, bound, out);
            }
            FinTerm::Sum(alts) => alt_vars(alts, bound, out),
            FinTerm::FpOcc { sequent, .. } => seq(sequent, bound, out),
        }
    }
    fn alt_vars(alts: &[FinAlt], bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        for a in alts {
            if !bound.contains(&a.head) {
                out.insert(a.head.clone());
            }
            for x in &a.args {
                go(x, bound, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Fixed-point names bound somewhere in `t`, in preorder.
pub fn gfp_names(t: &FinTerm) -> Vec<Var> {
    fn go(t: &FinTerm, out: &mut Vec<Var>) {
        match t {
            FinTerm::Lam { body, .. } => go(body, out),
            FinTerm::Gfp { var, alts, .. } => {
                out.push(var.clone());
                for a in alts {
                    for x in &a.args {
                        go(x, out);
                    }
                }
            }
            FinTerm::Sum(alts) => {
                for a in alts {
                    for x in &a.args {
                        go(x, out);
                    }
                }
            }
            FinTerm::FpOcc { .. } => {}
        }
    }
    let mut out = Vec::new();
    go(t, &mut out);
    out
}

/// Counts occurrences of each fixed-point name, bound or free.
pub fn occurrence_counts(t: &FinTerm) -> HashMap<Var, usize> {
    fn go(t: &FinTerm, out: &mut HashMap<Var, usize>) {
        match t {
            FinTerm::Lam { body, .. } => go(body, out),
            FinTerm::Gfp { alts, .. } | FinTerm::Sum(alts) => {
                for a in alts {
                    for x in &a.args {
                        go(x, out);
                    }
                }
            }
            FinTerm::FpOcc { var, .. } => *out.entry(var.clone()).or_default() += 1,
        }
    }
    let mut out = HashMap::new();
    go(t, &mut out);
    out
}
