//! Seeded random sequents and corpus files.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::parse::{parse_sequent, ParseError};
use crate::syntax::{fresh_var, Atom, Context, Formula, Sequent};

/// Shape bounds for generated sequents.
#[derive(Debug, Clone)]
pub struct Shape {
    pub atoms: Vec<Atom>,
    pub max_rank: usize,
    pub max_context: usize,
    /// Upper bound on the number of connectives in each formula.
    pub max_size: usize,
}

impl Default for Shape {
    fn default() -> Shape {
        Shape {
            atoms: ["p", "q", "r"].iter().map(|a| Atom::new(a)).collect(),
            max_rank: 3,
            max_context: 4,
            max_size: 5,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_formula<R: Rng>(rng: &mut R, shape: &Shape) -> Formula {
    let mut budget = shape.max_size;
    formula(rng, shape, shape.max_rank, &mut budget)
}

fn formula<R: Rng>(rng: &mut R, shape: &Shape, rank: usize, budget: &mut usize) -> Formula {
    let target = shape.atoms.choose(rng).expect("at least one atom").clone();
    if rank == 0 || *budget == 0 {
        return Formula::from_atom(target);
    }
    let arity = rng.gen_range(0..=2usize.min(*budget));
    let mut args = Vec::with_capacity(arity);
    for _ in 0..arity {
        if *budget == 0 {
            break;
        }
        *budget -= 1;
        let r = rng.gen_range(0..rank);
        args.push(formula(rng, shape, r, budget));
    }
    Formula::compose(&args, &target)
}

pub fn random_sequent<R: Rng>(rng: &mut R, shape: &Shape) -> Sequent {
    let n = rng.gen_range(0..=shape.max_context);
    let mut ctx = Context::new();
    for i in 1..=n {
        ctx.push(crate::syntax::Var::new(&format!("x{i}")), random_formula(rng, shape))
            .expect("distinct names");
    }
    Sequent::new(ctx, random_formula(rng, shape))
}

/// `count` sequents drawn from `seed` with the default shape.
pub fn random_sequents(seed: u64, count: usize) -> Vec<Sequent> {
    let mut r = rng(seed);
    let shape = Shape::default();
    (0..count).map(|_| random_sequent(&mut r, &shape)).collect()
}

/// A random `Γ′` with `Γ ≤ Γ′`: up to `max_new` fresh variables typed by
/// formulas already in `Γ`.
pub fn random_extension<R: Rng>(rng: &mut R, ctx: &Context, max_new: usize) -> Context {
    let formulas: Vec<Formula> = ctx.formula_set().into_iter().collect();
    let mut big = ctx.clone();
    if formulas.is_empty() {
        return big;
    }
    for _ in 0..rng.gen_range(0..=max_new) {
        let w = fresh_var("w", |n| big.contains(n));
        big.push(w, formulas.choose(rng).expect("nonempty").clone())
            .expect("fresh name");
    }
    big
}

/// Parses one sequent per line, skipping blank lines and `#` comments.
/// Errors carry the 1-based line number.
pub fn parse_corpus(text: &str) -> Result<Vec<Sequent>, (usize, ParseError)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let l = l.trim();
            !l.is_empty() && !l.starts_with('#')
        })
        .map(|(i, l)| parse_sequent(l.trim()).map_err(|e| (i + 1, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(random_sequents(7, 20), random_sequents(7, 20));
        assert_ne!(random_sequents(7, 20), random_sequents(8, 20));
    }

    #[test]
    fn shape_bounds_hold() {
        let shape = Shape::default();
        for s in random_sequents(1, 200) {
            assert!(s.ctx.len() <= shape.max_context);
            for (_, a) in s.ctx.iter() {
                assert!(a.rank() <= shape.max_rank);
            }
            assert!(s.goal.rank() <= shape.max_rank);
        }
    }

    #[test]
    fn extensions_are_inessential() {
        let mut r = rng(3);
        for s in random_sequents(3, 50) {
            let big = random_extension(&mut r, &s.ctx, 3);
            assert!(s.ctx.leq(&big));
        }
    }

    #[test]
    fn corpus_skips_comments() {
        let c = parse_corpus("# header\n\n|- p -> p\nx: p |- p\n").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(parse_corpus("|- p\n|- ->").unwrap_err().0, 2);
    }
}
