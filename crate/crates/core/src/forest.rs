//! Böhm forests, the coinductive solution spaces of sequents, rendered as
//! truncations: below a fuel horizon a subtree is replaced by [`Forest::Cut`].
//!
//! Fuel is spent by abstractions and by elimination alternatives, one unit
//! each. Sums are finite and cost nothing.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::lambda_bar::{head_key, HeadKey, ProofTerm};
use crate::syntax::{fresh_var, Context, Formula, Sequent, Var};
use crate::ternary::Ternary;

#[derive(Clone)]
pub enum Forest {
    Lam {
        var: Var,
        ann: Formula,
        body: Box<Forest>,
    },
    Sum(Vec<EAlt>),
    /// The truncation horizon: nothing is known below this point.
    Cut,
}

/// An elimination alternative `x⟨N₁,…,N_k⟩`.
#[derive(Clone)]
pub struct EAlt {
    pub head: Var,
    pub args: Vec<Forest>,
}

impl EAlt {
    pub fn new(head: Var, args: Vec<Forest>) -> EAlt {
        EAlt { head, args }
    }
}

/// Alpha-invariant shape of a forest, with sums as sorted sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ForestKey {
    Lam(Formula, Box<ForestKey>),
    Sum(Vec<AltKey>),
    Cut,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AltKey {
    pub head: HeadKey,
    pub args: Vec<ForestKey>,
}

impl Forest {
    pub fn lam(var: Var, ann: Formula, body: Forest) -> Forest {
        Forest::Lam {
            var,
            ann,
            body: Box::new(body),
        }
    }

    /// The empty sum.
    pub fn empty() -> Forest {
        Forest::Sum(Vec::new())
    }

    pub fn is_total(&self) -> bool {
        match self {
            Forest::Lam { body, .. } => body.is_total(),
            Forest::Sum(alts) => alts.iter().all(|a| a.args.iter().all(Forest::is_total)),
            Forest::Cut => false,
        }
    }

    pub fn key(&self) -> ForestKey {
        self.key_in(&mut Vec::new())
    }

    fn key_in(&self, binders: &mut Vec<Var>) -> ForestKey {
        match self {
            Forest::Lam { var, ann, body } => {
                binders.push(var.clone());
                let k = body.key_in(binders);
                binders.pop();
                ForestKey::Lam(ann.clone(), Box::new(k))
            }
            Forest::Sum(alts) => {
                let mut keys: Vec<AltKey> = alts.iter().map(|a| a.key_in(binders)).collect();
                keys.sort();
                keys.dedup();
                ForestKey::Sum(keys)
            }
            Forest::Cut => ForestKey::Cut,
        }
    }

    /// Syntactic equality modulo alpha and sum-as-set.
    pub fn same_as(&self, other: &Forest) -> bool {
        self.key() == other.key()
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        fn go(f: &Forest, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
            match f {
                Forest::Lam { var, body, .. } => {
                    bound.push(var.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                Forest::Sum(alts) => {
                    for a in alts {
                        if !bound.contains(&a.head) {
                            out.insert(a.head.clone());
                        }
                        for x in &a.args {
                            go(x, bound, out);
                        }
                    }
                }
                Forest::Cut => {}
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    fn all_vars_into(&self, out: &mut BTreeSet<Var>) {
        match self {
            Forest::Lam { var, body, .. } => {
                out.insert(var.clone());
                body.all_vars_into(out);
            }
            Forest::Sum(alts) => {
                for a in alts {
                    out.insert(a.head.clone());
                    for x in &a.args {
                        x.all_vars_into(out);
                    }
                }
            }
            Forest::Cut => {}
        }
    }

    /// Replaces free occurrences of `from` by `to`, which must not be bound
    /// anywhere in `self`.
    fn rename_free(&self, from: &Var, to: &Var) -> Forest {
        match self {
            Forest::Lam { var, ann, body } => {
                if var == from {
                    self.clone()
                } else {
                    Forest::lam(var.clone(), ann.clone(), body.rename_free(from, to))
                }
            }
            Forest::Sum(alts) => Forest::Sum(
                alts.iter()
                    .map(|a| {
                        EAlt::new(
                            if &a.head == from { to.clone() } else { a.head.clone() },
                            a.args.iter().map(|x| x.rename_free(from, to)).collect(),
                        )
                    })
                    .collect(),
            ),
            Forest::Cut => Forest::Cut,
        }
    }

    /// Deduplicates every sum and orders its alternatives by the position of
    /// the head in the local context, then by shape.
    pub fn normalized(&self, ctx: &Context) -> Forest {
        self.normalized_in(ctx, &mut Vec::new())
    }

    fn normalized_in(&self, ctx: &Context, binders: &mut Vec<Var>) -> Forest {
        match self {
            Forest::Lam { var, ann, body } => {
                let inner = ctx.shadowed(var.clone(), ann.clone());
                binders.push(var.clone());
                let b = body.normalized_in(&inner, binders);
                binders.pop();
                Forest::lam(var.clone(), ann.clone(), b)
            }
            Forest::Sum(alts) => {
                let mut keyed: Vec<(usize, AltKey, EAlt)> = alts
                    .iter()
                    .map(|a| {
                        let a = EAlt::new(
                            a.head.clone(),
                            a.args.iter().map(|x| x.normalized_in(ctx, binders)).collect(),
                        );
                        (
                            ctx.position(&a.head).unwrap_or(usize::MAX),
                            a.key_in(binders),
                            a,
                        )
                    })
                    .collect();
                keyed.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
                keyed.dedup_by(|x, y| x.1 == y.1);
                Forest::Sum(keyed.into_iter().map(|(_, _, a)| a).collect())
            }
            Forest::Cut => Forest::Cut,
        }
    }

    /// Number of nodes (abstractions, alternatives and cuts).
    pub fn node_count(&self) -> usize {
        match self {
            Forest::Lam { body, .. } => 1 + body.node_count(),
            Forest::Sum(alts) => alts
                .iter()
                .map(|a| 1 + a.args.iter().map(Forest::node_count).sum::<usize>())
                .sum(),
            Forest::Cut => 1,
        }
    }

    /// Renames every binder to `#level`, which cannot clash with parsed names.
    fn level_named(&self, depth: usize, map: &mut Vec<(Var, Var)>) -> Forest {
        match self {
            Forest::Lam { var, ann, body } => {
                let canon = Var::new(&format!("#{depth}"));
                map.push((var.clone(), canon.clone()));
                let b = body.level_named(depth + 1, map);
                map.pop();
                Forest::lam(canon, ann.clone(), b)
            }
            Forest::Sum(alts) => Forest::Sum(
                alts.iter()
                    .map(|a| {
                        let head = map
                            .iter()
                            .rev()
                            .find(|(x, _)| x == &a.head)
                            .map(|(_, c)| c.clone())
                            .unwrap_or_else(|| a.head.clone());
                        EAlt::new(head, a.args.iter().map(|x| x.level_named(depth, map)).collect())
                    })
                    .collect(),
            ),
            Forest::Cut => Forest::Cut,
        }
    }
}

impl EAlt {
    fn key_in(&self, binders: &mut Vec<Var>) -> AltKey {
        AltKey {
            head: head_key(binders, &self.head),
            args: self.args.iter().map(|x| x.key_in(binders)).collect(),
        }
    }
}

impl PartialEq for Forest {
    fn eq(&self, other: &Forest) -> bool {
        self.same_as(other)
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Forest::Lam { var, ann, body } => write!(f, "\\{var}:{ann}. {body}"),
            Forest::Sum(alts) if alts.is_empty() => f.write_str("O"),
            Forest::Sum(alts) => {
                for (i, a) in alts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{a}")?;
                }
                Ok(())
            }
            Forest::Cut => f.write_str("?"),
        }
    }
}

impl fmt::Display for EAlt {
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

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Smallest `z1, z2, …` not declared in `ctx`.
pub fn fresh_binder(ctx: &Context) -> Var {
    fresh_var("z", |n| ctx.contains(n))
}

/// The solution space of `s`, truncated at `fuel`.
///
/// An atomic goal with no usable hypothesis yields the empty sum at any fuel,
/// since no alternative exists to be cut off.
pub fn expand(s: &Sequent, fuel: usize) -> Forest {
    expand_in(&s.ctx, &s.goal, fuel)
}

fn expand_in(ctx: &Context, goal: &Formula, fuel: usize) -> Forest {
    if let Some((a, b)) = goal.as_imp() {
        if fuel == 0 {
            return Forest::Cut;
        }
        let z = fresh_binder(ctx);
        let inner = ctx.extended(z.clone(), a.clone());
        return Forest::lam(z, a.clone(), expand_in(&inner, b, fuel - 1));
    }
    let p = goal.as_atom().expect("atom");
    let heads: Vec<(&Var, Vec<Formula>)> = ctx
        .iter()
        .filter(|(_, decl)| decl.target() == p)
        .map(|(y, decl)| (y, decl.decompose().0))
        .collect();
    if heads.is_empty() {
        return Forest::empty();
    }
    if fuel == 0 {
        return Forest::Cut;
    }
    Forest::Sum(
        heads
            .into_iter()
            .map(|(y, params)| {
                EAlt::new(
                    y.clone(),
                    params.iter().map(|b| expand_in(ctx, b, fuel - 1)).collect(),
                )
            })
            .collect(),
    )
}

/// Equality of `a` and `b` down to depth `fuel`, comparing sums as sets and
/// binders up to alpha. A cut on either side matches anything.
pub fn bisim_upto(a: &Forest, b: &Forest, fuel: usize) -> bool {
    let a = a.level_named(0, &mut Vec::new());
    let b = b.level_named(0, &mut Vec::new());
    Bisim::default().forest(&a, &b, fuel)
}

#[derive(Default)]
struct Bisim {
    memo: HashMap<(usize, usize, usize), bool>,
}

impl Bisim {
    fn forest(&mut self, a: &Forest, b: &Forest, fuel: usize) -> bool {
        if fuel == 0 {
            return true;
        }
        let key = (a as *const Forest as usize, b as *const Forest as usize, fuel);
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let r = match (a, b) {
            (Forest::Cut, _) | (_, Forest::Cut) => true,
            (
                Forest::Lam { var: x, ann: a1, body: b1 },
                Forest::Lam { var: y, ann: a2, body: b2 },
            ) => x == y && a1 == a2 && self.forest(b1, b2, fuel - 1),
            (Forest::Sum(xs), Forest::Sum(ys)) => {
                xs.iter().all(|e| ys.iter().any(|f| self.alt(e, f, fuel)))
                    && ys.iter().all(|f| xs.iter().any(|e| self.alt(e, f, fuel)))
            }
            _ => false,
        };
        self.memo.insert(key, r);
        r
    }

    fn alt(&mut self, e: &EAlt, f: &EAlt, fuel: usize) -> bool {
        e.head == f.head
            && e.args.len() == f.args.len()
            && e.args.iter().zip(&f.args).all(|(x, y)| self.forest(x, y, fuel - 1))
    }
}

/// Whether the finite term `t` is a member of `f`. `Unknown` when every
/// candidate derivation runs into a cut.
pub fn mem(t: &ProofTerm, f: &Forest) -> Ternary {
    mem_in(t, f, &mut Vec::new(), &mut Vec::new())
}

fn mem_in(t: &ProofTerm, f: &Forest, tb: &mut Vec<Var>, fb: &mut Vec<Var>) -> Ternary {
    match (t, f) {
        (_, Forest::Cut) => Ternary::Unknown,
        (ProofTerm::Lam { var: x, ann: a, body: tb_body }, Forest::Lam { var: y, ann: b, body: fb_body }) => {
            if a != b {
                return Ternary::No;
            }
            tb.push(x.clone());
            fb.push(y.clone());
            let r = mem_in(tb_body, fb_body, tb, fb);
            tb.pop();
            fb.pop();
            r
        }
        (ProofTerm::App { head, args }, Forest::Sum(alts)) => {
            let h = head_key(tb, head);
            Ternary::any(alts.iter().map(|alt| {
                if head_key(fb, &alt.head) != h || alt.args.len() != args.len() {
                    return Ternary::No;
                }
                Ternary::all(
                    args.iter()
                        .zip(&alt.args)
                        .map(|(m, n)| mem_in(m, n, tb, fb)),
                )
            }))
        }
        _ => Ternary::No,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocontractError {
    #[error("`{small}` is not an inessential restriction of `{big}`")]
    NotExtension { small: String, big: String },
}

/// `[Γ′/Γ]f`: every alternative headed by some `z` declared in `Γ` becomes
/// the sum over `z` and the variables of `Γ′ ∖ Γ` of the same type.
///
/// Binders of `f` that clash with `dom(Γ′)` are renamed first.
pub fn cocontract(small: &Context, big: &Context, f: &Forest) -> Result<Forest, CocontractError> {
    if !small.leq(big) {
        return Err(CocontractError::NotExtension {
            small: small.to_string(),
            big: big.to_string(),
        });
    }
    let extra = big.difference(small);
    Ok(cocontract_unchecked(small, big, &extra, f))
}

fn cocontract_unchecked(small: &Context, big: &Context, extra: &[(Var, Formula)], f: &Forest) -> Forest {
    match f {
        Forest::Lam { var, ann, body } => {
            if big.contains(var) {
                let mut taken = BTreeSet::new();
                body.all_vars_into(&mut taken);
                let fresh = fresh_var(var.name(), |n| big.contains(n) || taken.contains(n));
                let body = body.rename_free(var, &fresh);
                Forest::lam(fresh, ann.clone(), cocontract_unchecked(small, big, extra, &body))
            } else {
                Forest::lam(var.clone(), ann.clone(), cocontract_unchecked(small, big, extra, body))
            }
        }
        Forest::Sum(alts) => {
            let mut out: Vec<EAlt> = Vec::new();
            let mut seen: BTreeSet<AltKey> = BTreeSet::new();
            let mut push = |alt: EAlt, out: &mut Vec<EAlt>| {
                if seen.insert(alt.key_in(&mut Vec::new())) {
                    out.push(alt);
                }
            };
            for alt in alts {
                let args: Vec<Forest> = alt
                    .args
                    .iter()
                    .map(|x| cocontract_unchecked(small, big, extra, x))
                    .collect();
                match small.get(&alt.head) {
                    None => push(EAlt::new(alt.head.clone(), args), &mut out),
                    Some(a) => {
                        push(EAlt::new(alt.head.clone(), args.clone()), &mut out);
                        for (w, b) in extra {
                            if b == a {
                                push(EAlt::new(w.clone(), args.clone()), &mut out);
                            }
                        }
                    }
                }
            }
            Forest::Sum(out)
        }
        Forest::Cut => Forest::Cut,
    }
}

/// `[σ′/σ]f` for sequents with equal goals.
pub fn cocontract_sequents(small: &Sequent, big: &Sequent, f: &Forest) -> Result<Forest, CocontractError> {
    if small.goal != big.goal {
        return Err(CocontractError::NotExtension {
            small: small.to_string(),
            big: big.to_string(),
        });
    }
    cocontract(&small.ctx, &big.ctx, f)
}

/// Whether every sum of `f`, down to depth `fuel`, is saturated: for each
/// summand `x⟨N⃗⟩` and each `y` with the same type as `x` in the local
/// extension of `ctx`, a summand `y⟨N⃗⟩` is also present.
pub fn is_max_cocontracted(ctx: &Context, f: &Forest, fuel: usize) -> Ternary {
    if !f.free_vars().iter().all(|x| ctx.contains(x)) {
        return Ternary::No;
    }
    saturated(ctx, f, fuel)
}

fn saturated(ctx: &Context, f: &Forest, fuel: usize) -> Ternary {
    if fuel == 0 {
        return Ternary::Yes;
    }
    match f {
        Forest::Cut => Ternary::Unknown,
        Forest::Lam { var, ann, body } => saturated(&ctx.shadowed(var.clone(), ann.clone()), body, fuel - 1),
        Forest::Sum(alts) => Ternary::all(alts.iter().map(|alt| {
            let Some(ty) = ctx.get(&alt.head) else {
                return Ternary::No;
            };
            let siblings = Ternary::all(ctx.iter().filter(|(_, b)| *b == ty).map(|(y, _)| {
                Ternary::any(alts.iter().filter(|s| &s.head == y).map(|s| {
                    let same_args = s.args.len() == alt.args.len()
                        && s.args.iter().zip(&alt.args).all(|(m, n)| bisim_upto(m, n, fuel - 1));
                    Ternary::from_bool(same_args)
                }))
            }));
            siblings.and(Ternary::all(alt.args.iter().map(|x| saturated(ctx, x, fuel - 1))))
        })),
    }
}

/// Typing of forests: a cut has every type.
pub fn forest_typecheck(ctx: &Context, f: &Forest, goal: &Formula) -> bool {
    match f {
        Forest::Cut => true,
        Forest::Lam { var, ann, body } => match goal.as_imp() {
            Some((a, b)) => a == ann && forest_typecheck(&ctx.shadowed(var.clone(), ann.clone()), body, b),
            None => false,
        },
        Forest::Sum(alts) => {
            let Some(p) = goal.as_atom() else {
                return false;
            };
            alts.iter().all(|alt| match ctx.get(&alt.head) {
                Some(decl) => {
                    let (params, target) = decl.decompose();
                    &target == p
                        && params.len() == alt.args.len()
                        && alt.args.iter().zip(&params).all(|(x, b)| forest_typecheck(ctx, x, b))
                }
                None => false,
            })
        }
    }
}

/// Finite members of `f` of size at most `max_size`, ignoring anything
/// below a cut.
pub fn total_members(f: &Forest, max_size: usize) -> Vec<ProofTerm> {
    let mut out: Vec<(usize, ProofTerm)> = members_in(f, max_size);
    out.sort_by_key(|(size, t)| (*size, t.key()));
    out.dedup_by(|a, b| a.1 == b.1);
    out.into_iter().map(|(_, t)| t).collect()
}

fn members_in(f: &Forest, budget: usize) -> Vec<(usize, ProofTerm)> {
    if budget == 0 {
        return Vec::new();
    }
    match f {
        Forest::Cut => Vec::new(),
        Forest::Lam { var, ann, body } => members_in(body, budget - 1)
            .into_iter()
            .map(|(n, t)| (n + 1, ProofTerm::lam(var.clone(), ann.clone(), t)))
            .collect(),
        Forest::Sum(alts) => {
            let mut out = Vec::new();
            for alt in alts {
                for (n, args) in member_args(&alt.args, budget - 1) {
                    out.push((n + 1, ProofTerm::app(alt.head.clone(), args)));
                }
            }
            out
        }
    }
}

fn member_args(args: &[Forest], budget: usize) -> Vec<(usize, Vec<ProofTerm>)> {
    let Some((first, rest)) = args.split_first() else {
        return vec![(0, Vec::new())];
    };
    if budget < args.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (n, t) in members_in(first, budget - rest.len()) {
        for (m, mut tail) in member_args(rest, budget - n) {
            tail.insert(0, t.clone());
            out.push((n + m, tail));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_bar::enumerate_proofs;
    use crate::parse::{parse_forest, parse_proof_term, parse_sequent};

    fn s(text: &str) -> Sequent {
        parse_sequent(text).unwrap()
    }

    fn fo(text: &str) -> Forest {
        parse_forest(text).unwrap()
    }

    fn ctx(text: &str) -> Context {
        s(&format!("{text} |- p")).ctx
    }

    #[test]
    fn expand_boole() {
        let f = expand(&s("|- p -> p -> p"), 10);
        assert!(f.is_total());
        assert!(f.same_as(&fo("\\x:p. \\y:p. x + y")));
    }

    #[test]
    fn expand_peirce() {
        let f = expand(&s("|- ((p -> q) -> p) -> p"), 10);
        assert!(f.is_total());
        assert!(f.same_as(&fo("\\x:(p -> q) -> p. x<\\y:p. O>")));
    }

    #[test]
    fn expand_iteration_truncates() {
        let f = expand(&s("f: p -> p |- p"), 3);
        assert!(f.same_as(&fo("f<f<f<?>>>")));
        assert_eq!(f.to_string(), "f<f<f<?>>>");
    }

    #[test]
    fn fuel_zero_cuts_unless_nothing_applies() {
        assert!(expand(&s("f: p -> p |- p"), 0).same_as(&Forest::Cut));
        assert!(expand(&s("f: p -> p |- q"), 0).same_as(&Forest::empty()));
        assert!(expand(&s("|- p -> p"), 0).same_as(&Forest::Cut));
    }

    #[test]
    fn bisim_examples() {
        assert!(bisim_upto(&fo("x + y"), &fo("y + x"), 5));
        assert!(bisim_upto(&fo("x + y + y"), &fo("x + y"), 5));
        assert!(bisim_upto(&fo("f<?>"), &fo("f<g>"), 5));
        assert!(!bisim_upto(&fo("f<h>"), &fo("f<g>"), 5));
        assert!(bisim_upto(&fo("f<h>"), &fo("f<g>"), 1));
        assert!(bisim_upto(&fo("\\a:p. a"), &fo("\\b:p. b"), 5));
        assert!(!bisim_upto(&fo("\\a:p. a"), &fo("\\b:q. b"), 5));
        assert!(!bisim_upto(&fo("\\a:p. \\b:p. a"), &fo("\\a:p. \\b:p. b"), 5));
    }

    #[test]
    fn membership() {
        let boole = expand(&s("|- p -> p -> p"), 10);
        let t = parse_proof_term("\\a:p. \\b:p. a").unwrap();
        assert_eq!(mem(&t, &boole), Ternary::Yes);
        assert_eq!(mem(&t, &Forest::empty()), Ternary::No);
        let it = expand(&s("f: p -> p, x: p |- p"), 2);
        assert_eq!(mem(&parse_proof_term("f<f<x>>").unwrap(), &it), Ternary::Unknown);
        assert_eq!(mem(&parse_proof_term("f<x>").unwrap(), &it), Ternary::Yes);
        assert_eq!(mem(&parse_proof_term("g<x>").unwrap(), &it), Ternary::No);
    }

    #[test]
    fn cocontraction_duplicates_arguments() {
        let small = ctx("f: p -> p -> q, x: p");
        let big = ctx("f: p -> p -> q, x: p, y: p");
        let r = cocontract(&small, &big, &fo("f<x, x>")).unwrap();
        assert!(r.same_as(&fo("f<x + y, x + y>")));
    }

    #[test]
    fn cocontraction_identity() {
        let g = ctx("f: p -> p, x: p");
        let f = expand(&s("f: p -> p, x: p |- p"), 6);
        assert!(bisim_upto(&cocontract(&g, &g, &f).unwrap(), &f, 6));
    }

    #[test]
    fn cocontraction_idempotent_sums() {
        let small = ctx("x: p, z: p");
        let big = ctx("x: p, z: p, y: p");
        let r = cocontract(&small, &big, &fo("x + z")).unwrap();
        match &r {
            Forest::Sum(alts) => assert_eq!(alts.len(), 3),
            _ => panic!("expected a sum"),
        }
        assert!(r.same_as(&fo("x + y + z")));
    }

    #[test]
    fn cocontraction_requires_inessential_extension() {
        assert!(cocontract(&ctx("x: p"), &ctx("x: p, y: q"), &fo("x")).is_err());
    }

    #[test]
    fn cocontraction_renames_clashing_binders() {
        let small = ctx("x: p");
        let big = ctx("x: p, y: p");
        let r = cocontract(&small, &big, &fo("\\y:p. x + y")).unwrap();
        // The bound `y` is not the new hypothesis `y`.
        assert!(r.same_as(&fo("\\w:p. x + y + w")));
    }

    #[test]
    fn maximal_cocontraction_examples() {
        let g = ctx("z: p");
        assert_eq!(is_max_cocontracted(&g, &fo("\\x:p. z"), 5), Ternary::No);
        assert_eq!(is_max_cocontracted(&g, &fo("\\x:p. z + x"), 5), Ternary::Yes);
        assert_eq!(is_max_cocontracted(&g, &fo("\\x:p. ?"), 5), Ternary::Unknown);
        for text in ["|- ((((p -> q) -> p) -> p) -> q) -> q", "|- ((p -> p) -> p) -> p", "f: p -> p, x: p, y: p |- p"] {
            let sq = s(text);
            let f = expand(&sq, 8);
            assert_eq!(is_max_cocontracted(&sq.ctx, &f, 7), Ternary::Yes, "{text}");
        }
    }

    #[test]
    fn expansions_typecheck() {
        for text in ["|- ((((p -> q) -> p) -> p) -> q) -> q", "|- (p -> p) -> p -> p", "f: p -> p -> q, x: p |- q"] {
            let sq = s(text);
            for fuel in 0..7 {
                assert!(forest_typecheck(&sq.ctx, &expand(&sq, fuel), &sq.goal));
            }
        }
    }

    #[test]
    fn oracle_proofs_are_members() {
        let sq = s("|- ((((p -> q) -> p) -> p) -> q) -> q");
        let f = expand(&sq, 12);
        for t in enumerate_proofs(&sq, 8) {
            assert_eq!(mem(&t, &f), Ternary::Yes, "{t}");
        }
    }

    #[test]
    fn normalization_orders_by_declaration() {
        let g = ctx("x: p, y: p, z: p");
        let f = fo("z + x + y + x");
        assert_eq!(f.normalized(&g).to_string(), "x + y + z");
    }

    #[test]
    fn members_of_a_truncation() {
        let f = expand(&s("|- (p -> p) -> p -> p"), 8);
        assert_eq!(total_members(&f, 5).len(), 3);
    }
}
