//! Interpretation of finitary terms as (truncated) forests.
//!
//! A fixed point is unfolded lazily: its variable is bound in the
//! environment to a description of the fixed point itself, and an
//! occurrence `X^{σ′}` of a variable bound at `σ` denotes the co-contraction
//! `[σ′/σ]` of what the variable stands for. Unfoldings are memoized per
//! binder and fuel, so the work is linear in the fuel for each binder.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::finitary::{represent, well_bound_violation, FinAlt, FinTerm, FpContext, RepresentError};
use crate::forest::{bisim_upto, cocontract_sequents, expand, CocontractError, EAlt, Forest};
use crate::syntax::{Sequent, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("term is not well bound: `{var}` bound at `{binder}` occurs at `{occurrence}`")]
    NotWellBound { var: Var, binder: String, occurrence: String },
    #[error("fixed-point variable `{0}` is not bound by the environment")]
    Unbound(Var),
    #[error("occurrence `{var}{{{occurrence}}}` is not an inessential extension of `{bound}`")]
    NotAdmissible { var: Var, bound: String, occurrence: String },
    #[error(transparent)]
    Cocontract(#[from] CocontractError),
    #[error(transparent)]
    Represent(#[from] RepresentError),
}

enum Base<'a> {
    /// `gfp name^sequent. Σ alts`, closed over `env`.
    Fix {
        alts: &'a [FinAlt],
        env: Environment<'a>,
        name: Var,
        sequent: Sequent,
    },
    /// The solution space of a sequent, standing for a free variable.
    Space(Sequent),
}

/// Bindings of fixed-point variables, innermost last.
#[derive(Clone, Default)]
pub struct Environment<'a> {
    entries: Vec<(Var, Sequent, Arc<Base<'a>>)>,
}

impl<'a> Environment<'a> {
    pub fn new() -> Environment<'a> {
        Environment::default()
    }

    /// Binds `var` to the solution space of `sequent`.
    pub fn with_space(&self, var: Var, sequent: Sequent) -> Environment<'a> {
        let base = Arc::new(Base::Space(sequent.clone()));
        self.with(var, sequent, base)
    }

    /// The environment giving every declaration of `xi` its solution space.
    pub fn from_fp_context(xi: &FpContext) -> Environment<'a> {
        xi.iter()
            .fold(Environment::new(), |env, (x, s)| env.with_space(x.clone(), s.clone()))
    }

    fn with(&self, var: Var, sequent: Sequent, base: Arc<Base<'a>>) -> Environment<'a> {
        let mut entries = self.entries.clone();
        entries.push((var, sequent, base));
        Environment { entries }
    }

    fn lookup(&self, var: &Var) -> Option<&(Var, Sequent, Arc<Base<'a>>)> {
        self.entries.iter().rev().find(|(x, _, _)| x == var)
    }

    pub fn sequent_of(&self, var: &Var) -> Option<&Sequent> {
        self.lookup(var).map(|(_, s, _)| s)
    }
}

/// `[[t]]` for a closed term, truncated at `fuel`.
pub fn interpret(t: &FinTerm, fuel: usize) -> Result<Forest, SemanticsError> {
    interpret_in(t, &Environment::new(), fuel)
}

/// `[[t]]` under `env`, truncated at `fuel`.
///
/// The term must be well bound, and each free occurrence must be an
/// inessential extension of the sequent its variable is bound to.
pub fn interpret_in<'a>(t: &'a FinTerm, env: &Environment<'a>, fuel: usize) -> Result<Forest, SemanticsError> {
    if let Some((var, binder, occurrence)) = well_bound_violation(t) {
        return Err(SemanticsError::NotWellBound {
            var,
            binder: binder.to_string(),
            occurrence: occurrence.to_string(),
        });
    }
    for (x, s) in t.fpv() {
        let bound = env.sequent_of(&x).ok_or_else(|| SemanticsError::Unbound(x.clone()))?;
        if !bound.leq(&s) {
            return Err(SemanticsError::NotAdmissible {
                var: x,
                bound: bound.to_string(),
                occurrence: s.to_string(),
            });
        }
    }
    Interpreter::default().term(t, env, fuel)
}

#[derive(Default)]
struct Interpreter<'a> {
    memo: HashMap<(usize, usize), Forest>,
    // Keeps every memoized base alive so that addresses are not reused.
    keep: Vec<Arc<Base<'a>>>,
}

impl<'a> Interpreter<'a> {
    fn term(&mut self, t: &'a FinTerm, env: &Environment<'a>, fuel: usize) -> Result<Forest, SemanticsError> {
        match t {
            FinTerm::Lam { var, ann, body } => {
                if fuel == 0 {
                    return Ok(Forest::Cut);
                }
                Ok(Forest::lam(var.clone(), ann.clone(), self.term(body, env, fuel - 1)?))
            }
            FinTerm::Gfp { var, sequent, alts } => {
                let base = Arc::new(Base::Fix {
                    alts,
                    env: env.clone(),
                    name: var.clone(),
                    sequent: sequent.clone(),
                });
                self.force(&base, fuel)
            }
            FinTerm::Sum(alts) => self.alts(alts, env, fuel),
            FinTerm::FpOcc { var, sequent } => {
                let (_, bound, base) = env.lookup(var).ok_or_else(|| SemanticsError::Unbound(var.clone()))?;
                let (bound, base) = (bound.clone(), base.clone());
                let f = self.force(&base, fuel)?;
                Ok(cocontract_sequents(&bound, sequent, &f)?)
            }
        }
    }

    fn force(&mut self, base: &Arc<Base<'a>>, fuel: usize) -> Result<Forest, SemanticsError> {
        let key = (Arc::as_ptr(base) as *const () as usize, fuel);
        if let Some(f) = self.memo.get(&key) {
            return Ok(f.clone());
        }
        let f = match &**base {
            Base::Fix { alts, env, name, sequent } => {
                let inner = env.with(name.clone(), sequent.clone(), base.clone());
                self.alts(alts, &inner, fuel)?
            }
            Base::Space(s) => expand(s, fuel),
        };
        self.keep.push(base.clone());
        self.memo.insert(key, f.clone());
        Ok(f)
    }

    fn alts(&mut self, alts: &'a [FinAlt], env: &Environment<'a>, fuel: usize) -> Result<Forest, SemanticsError> {
        if alts.is_empty() {
            return Ok(Forest::empty());
        }
        if fuel == 0 {
            return Ok(Forest::Cut);
        }
        let mut out = Vec::with_capacity(alts.len());
        for a in alts {
            let mut args = Vec::with_capacity(a.args.len());
            for x in &a.args {
                args.push(self.term(x, env, fuel - 1)?);
            }
            out.push(EAlt::new(a.head.clone(), args));
        }
        Ok(Forest::Sum(out))
    }
}

/// Whether `[[𝓕(s)]]` and the solution space of `s` agree down to `fuel`.
pub fn check_equivalence(s: &Sequent, fuel: usize) -> bool {
    try_check_equivalence(s, &FpContext::new(), fuel).unwrap_or(false)
}

/// [`check_equivalence`] for `𝓕(s; Ξ)`, with each declaration of `Ξ`
/// interpreted as its solution space. Errors when `Ξ` does not satisfy the
/// preconditions of the representation.
pub fn try_check_equivalence(s: &Sequent, xi: &FpContext, fuel: usize) -> Result<bool, SemanticsError> {
    let t = represent(s, xi)?;
    let env = Environment::from_fp_context(xi);
    let lhs = interpret_in(&t, &env, fuel)?;
    Ok(bisim_upto(&lhs, &expand(s, fuel), fuel))
}
