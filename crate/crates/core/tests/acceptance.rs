//! The acceptance suite: one line per criterion, non-zero exit on failure.
//!
//! Random sequents come from seed 0 with the default corpus shape (atoms
//! p, q, r; rank at most 3; at most 4 hypotheses).

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use ljt_core::analysis::{count_members, decide, decide_inhabited, decide_solvable, enumerate_members};
use ljt_core::corpus::{random_extension, random_formula, random_sequents, rng, Shape};
use ljt_core::finitary::{
    fin_typecheck, is_regular, is_strongly_regular, is_trivially_regular, is_well_bound, represent, represent_elided,
    represent_traced, FinAlt, FinTerm, FpContext,
};
use ljt_core::forest::{bisim_upto, cocontract, expand, forest_typecheck, Forest};
use ljt_core::lambda_bar::{enumerate_proofs_by_size, typecheck, ProvabilityOracle};
use ljt_core::parse::{parse_fin_term, parse_forest, parse_sequent};
use ljt_core::semantics::{check_equivalence, interpret};
use ljt_core::syntax::{Context, Formula, Sequent, Var};
use rand::Rng;

const SEED: u64 = 0;

const BOOLE: &str = "|- p -> p -> p";
const INFTY: &str = "|- (p -> p) -> p";
const CHURCH: &str = "|- (p -> p) -> p -> p";
const PEIRCE: &str = "|- ((p -> q) -> p) -> p";
const DNPEIRCE: &str = "|- ((((p -> q) -> p) -> p) -> q) -> q";
const THREE: &str = "|- ((p -> p) -> p) -> p";
const EXAMPLES: [&str; 6] = [BOOLE, INFTY, CHURCH, PEIRCE, DNPEIRCE, THREE];

fn s(text: &str) -> Sequent {
    parse_sequent(text).unwrap()
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn golden() -> Outcome {
    let dn = "(((p -> q) -> p) -> p) -> q";
    let pq = "(p -> q) -> p";
    let inner = format!("x: {dn}, y: {pq}, z: p, y1: {pq}, z1: p |- q");
    let cases = [
        (BOOLE, "\\x:p. \\y:p. x + y".to_string()),
        (INFTY, "\\f:p -> p. gfp X{f: p -> p |- p}. f<X{f: p -> p |- p}>".to_string()),
        (
            CHURCH,
            "\\f:p -> p. \\x:p. gfp X{f: p -> p, x: p |- p}. f<X{f: p -> p, x: p |- p}> + x".to_string(),
        ),
        (PEIRCE, "\\x:(p -> q) -> p. x<\\y:p. O>".to_string()),
        (
            THREE,
            "\\x:(p -> p) -> p. x<\\y:p. gfp Y{x: (p -> p) -> p, y: p |- p}. x<\\z:p. Y{x: (p -> p) -> p, y: p, z: p |- p}> + y>"
                .to_string(),
        ),
        (
            DNPEIRCE,
            format!(
                "\\x:{dn}. x<\\y:{pq}. y<\\z:p. gfp X3{{x: {dn}, y: {pq}, z: p |- q}}. \
                 x<\\y1:{pq}. y<\\z1:p. X3{{{inner}}}> + z + y1<\\z1:p. X3{{{inner}}}>>>>"
            ),
        ),
    ];
    let mut slowest = Duration::ZERO;
    for (seq, expected) in cases {
        let start = Instant::now();
        let got = represent_elided(&s(seq), &FpContext::new()).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        let expected = parse_fin_term(&expected).map_err(|e| e.to_string())?;
        ensure(got.same_as(&expected), || format!("{seq}: got {got}"))?;
        ensure(elapsed < Duration::from_secs(1), || format!("{seq}: took {elapsed:?}"))?;
    }
    Ok(format!("6 terms, slowest {slowest:?}"))
}

fn equivalence() -> Outcome {
    let start = Instant::now();
    for text in EXAMPLES {
        for fuel in 1..=10 {
            ensure(check_equivalence(&s(text), fuel), || format!("{text} at fuel {fuel}"))?;
        }
    }
    let corpus = random_sequents(SEED, 500);
    for sq in &corpus {
        ensure(check_equivalence(sq, 6), || format!("{sq} at fuel 6"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("6 example types x fuel 1..10, 500 random at fuel 6, {elapsed:?}"))
}

fn cocontraction_laws() -> Outcome {
    for sq in random_sequents(SEED, 100) {
        let t = expand(&sq, 6);
        let same = cocontract(&sq.ctx, &sq.ctx, &t).map_err(|e| e.to_string())?;
        ensure(bisim_upto(&same, &t, 6), || format!("identity fails on {sq}"))?;
    }

    let g = s("f: p -> p -> q, x: p |- q").ctx;
    let g2 = s("f: p -> p -> q, x: p, y: p |- q").ctx;
    let u = parse_forest("f<x, x>").unwrap();
    let got = cocontract(&g, &g2, &u).map_err(|e| e.to_string())?;
    ensure(got.same_as(&parse_forest("f<x + y, x + y>").unwrap()), || format!("f<x, x> gave {got}"))?;
    let members = ljt_core::forest::total_members(&got, 10);
    ensure(members.len() == 4, || format!("f<x + y, x + y> has {} members", members.len()))?;

    let theta = s("x: p, z: p |- p").ctx;
    let theta2 = s("x: p, y: p, z: p |- p").ctx;
    let got = cocontract(&theta, &theta2, &expand(&s("x: p, z: p |- p"), 3)).map_err(|e| e.to_string())?;
    match &got {
        Forest::Sum(alts) if alts.len() == 3 => {}
        other => return Err(format!("idempotence: {other}")),
    }
    ensure(got.same_as(&expand(&s("x: p, y: p, z: p |- p"), 3)), || format!("idempotence: {got}"))?;

    let mut r = rng(SEED);
    let mut triples = 0;
    for sq in random_sequents(SEED + 1, 1000) {
        if sq.ctx.is_empty() {
            continue;
        }
        let big = random_extension(&mut r, &sq.ctx, 3);
        let lhs = expand(&Sequent::new(big.clone(), sq.goal.clone()), 6);
        let rhs = cocontract(&sq.ctx, &big, &expand(&sq, 6)).map_err(|e| e.to_string())?;
        ensure(bisim_upto(&lhs, &rhs, 6), || format!("{sq} extended to {big}"))?;
        triples += 1;
        if triples == 200 {
            break;
        }
    }
    ensure(triples == 200, || format!("only {triples} triples"))?;
    Ok("identity, f<x + y, x + y>, (x + y) + (z + y), 200 random triples at fuel 6".into())
}

fn adequacy() -> Outcome {
    let mut oracle = ProvabilityOracle::new();
    let mut inhabited = 0;
    for sq in random_sequents(SEED, 300) {
        let ours = decide_inhabited(&sq);
        if ours != oracle.provable(&sq, 8) {
            let deeper = oracle.provable(&sq, 14);
            return Err(format!(
                "inhabitation of {sq}: decided {ours}, depth-8 oracle disagrees (depth-14 oracle says {deeper})"
            ));
        }
        inhabited += ours as usize;
        let members: BTreeSet<_> = enumerate_members(&sq, 10).into_iter().map(|t| t.key()).collect();
        let reference: BTreeSet<_> = enumerate_proofs_by_size(&sq, 10).into_iter().map(|t| t.key()).collect();
        ensure(members == reference, || {
            format!("members of {sq}: {} vs {} from the oracle", members.len(), reference.len())
        })?;
        let v = decide(&sq);
        ensure(v.witness.is_some() == ours, || format!("witness presence for {sq}"))?;
        if let Some(w) = &v.witness {
            ensure(typecheck(&sq.ctx, w, &sq.goal), || format!("witness {w} for {sq}"))?;
        }
    }
    Ok(format!("300 sequents ({inhabited} inhabited), zero disagreements"))
}

fn verdicts() -> Outcome {
    let boole = decide(&s(BOOLE));
    ensure(boole.inhabited && count_members(&s(BOOLE), 12) == 2, || "BOOLE".into())?;
    let infty = decide(&s(INFTY));
    ensure(infty.solvable && !infty.inhabited, || "INFTY".into())?;
    let church = s(CHURCH);
    ensure(decide_inhabited(&church), || "CHURCH not inhabited".into())?;
    for n in 0..=7 {
        let ours = count_members(&church, n + 3);
        let oracle = enumerate_proofs_by_size(&church, n + 3).len();
        ensure(ours == n + 1 && oracle == n + 1, || format!("CHURCH at size {}: {ours}, oracle {oracle}", n + 3))?;
    }
    let peirce = s(PEIRCE);
    ensure(
        !decide_solvable(&peirce) && !decide_inhabited(&peirce) && count_members(&peirce, 12) == 0,
        || "PEIRCE".into(),
    )?;
    ensure(decide_inhabited(&s(DNPEIRCE)), || "DNPEIRCE".into())?;
    ensure(decide_inhabited(&s(THREE)), || "THREE".into())?;
    Ok("BOOLE, INFTY, CHURCH (numerals 0..7), PEIRCE, DNPEIRCE, THREE".into())
}

struct Judgment {
    xi: FpContext,
    ctx: Context,
    term: FinTerm,
    ty: Formula,
}

fn judgments(xi: &FpContext, ctx: &Context, t: &FinTerm, ty: &Formula, out: &mut Vec<Judgment>) {
    out.push(Judgment {
        xi: xi.clone(),
        ctx: ctx.clone(),
        term: t.clone(),
        ty: ty.clone(),
    });
    let alts = |xi: &FpContext, alts: &[FinAlt], out: &mut Vec<Judgment>| {
        for a in alts {
            let (params, _) = ctx.get(&a.head).expect("typed head").decompose();
            for (x, b) in a.args.iter().zip(&params) {
                judgments(xi, ctx, x, b, out);
            }
        }
    };
    match t {
        FinTerm::Lam { var, ann, body } => {
            let (_, b) = ty.as_imp().expect("arrow");
            judgments(xi, &ctx.extended(var.clone(), ann.clone()), body, b, out);
        }
        FinTerm::Gfp { var, sequent, alts: a } => alts(&xi.shadowed(var.clone(), sequent.clone()), a, out),
        FinTerm::Sum(a) => alts(xi, a, out),
        FinTerm::FpOcc { .. } => {}
    }
}

/// Drops a random hypothesis from some occurrence annotations.
fn mutate<R: Rng>(r: &mut R, t: &FinTerm) -> FinTerm {
    let alts = |r: &mut R, alts: &[FinAlt]| -> Vec<FinAlt> {
        alts.iter()
            .map(|a| FinAlt::new(a.head.clone(), a.args.iter().map(|x| mutate(r, x)).collect()))
            .collect()
    };
    match t {
        FinTerm::Lam { var, ann, body } => FinTerm::lam(var.clone(), ann.clone(), mutate(r, body)),
        FinTerm::Gfp { var, sequent, alts: a } => FinTerm::Gfp {
            var: var.clone(),
            sequent: sequent.clone(),
            alts: alts(r, a),
        },
        FinTerm::Sum(a) => FinTerm::Sum(alts(r, a)),
        FinTerm::FpOcc { var, sequent } => {
            if sequent.ctx.is_empty() || r.gen_bool(0.5) {
                return t.clone();
            }
            let drop = r.gen_range(0..sequent.ctx.len());
            let ctx = Context::from_decls(
                sequent.ctx.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, (x, a))| (x.clone(), a.clone())),
            )
            .unwrap();
            FinTerm::FpOcc {
                var: var.clone(),
                sequent: Sequent::new(ctx, sequent.goal.clone()),
            }
        }
    }
}

fn metatheory() -> Outcome {
    let shape = Shape::default();
    let mut r = rng(SEED);
    let corpus = random_sequents(SEED, 500);
    let mut all = Vec::new();
    for sq in &corpus {
        let t = represent(sq, &FpContext::new()).map_err(|e| e.to_string())?;
        ensure(fin_typecheck(&FpContext::new(), &sq.ctx, &t, &sq.goal), || format!("F({sq}) ill-typed"))?;
        for fuel in 0..=6 {
            let f = interpret(&t, fuel).map_err(|e| e.to_string())?;
            ensure(forest_typecheck(&sq.ctx, &f, &sq.goal), || format!("[[F({sq})]] at fuel {fuel} ill-typed"))?;
        }
        judgments(&FpContext::new(), &sq.ctx, &t, &sq.goal, &mut all);
    }
    let with_xi = all.iter().filter(|j| !j.xi.is_empty()).count();
    let step = (all.len() / 200).max(1);
    let mut weakened = 0;
    for j in all.iter().step_by(step).take(200) {
        ensure(fin_typecheck(&j.xi, &j.ctx, &j.term, &j.ty), || format!("judgment for {} rejected", j.term))?;
        ensure(is_well_bound(&j.term), || format!("typable but not well bound: {}", j.term))?;
        let w = Var::new(&format!("weak{weakened}"));
        let ctx = j.ctx.extended(w, random_formula(&mut r, &shape));
        ensure(fin_typecheck(&j.xi, &ctx, &j.term, &j.ty), || format!("weakening fails for {}", j.term))?;
        weakened += 1;
    }
    let mut rejected = 0;
    let mut accepted = 0;
    for sq in &corpus {
        let t = mutate(&mut r, &represent(sq, &FpContext::new()).unwrap());
        if fin_typecheck(&FpContext::new(), &sq.ctx, &t, &sq.goal) {
            accepted += 1;
            ensure(is_well_bound(&t), || format!("typable but not well bound: {t}"))?;
        } else {
            rejected += 1;
        }
    }
    ensure(weakened == 200, || format!("only {weakened} judgments"))?;
    Ok(format!(
        "weakening on 200 of {} judgments ({with_xi} under a nonempty fixed-point context); \
         well-boundness on {accepted} accepted mutants ({rejected} rejected); F and [[F]] well typed",
        all.len()
    ))
}

fn termination() -> Outcome {
    let mut calls = 0;
    for sq in random_sequents(SEED, 500).iter().chain(EXAMPLES.map(s).iter()) {
        let (_, trace) = represent_traced(sq, &FpContext::new()).map_err(|e| format!("{sq}: {e}"))?;
        for step in &trace {
            if let Some(p) = step.parent {
                let parent = &trace[p];
                let ok = match (parent.measure, step.measure) {
                    (Some(a), Some(b)) => b < a,
                    _ => false,
                };
                ensure(ok, || format!("{sq}: measure {:?} then {:?}", parent.measure, step.measure))?;
            }
        }
        calls += trace.len();
    }
    Ok(format!("{calls} recursive calls over 506 sequents, all decreasing"))
}

fn regularity() -> Outcome {
    let g = "y1: q -> p, y2: (r -> q) -> p, x: r";
    let xi = FpContext::from_decls([(Var::new("X"), s(&format!("{g} |- q")))]).map_err(|e| e.to_string())?;
    let t = represent(&s(&format!("{g} |- p")), &xi).map_err(|e| e.to_string())?;
    let printed = parse_fin_term(&format!(
        "gfp Y{{{g} |- p}}. y1<X{{{g} |- q}}> + y2<\\z:r. X{{{g}, z: r |- q}}>"
    ))
    .unwrap();
    ensure(t.same_as(&printed), || format!("not the printed term: {t}"))?;
    ensure(is_regular(&t) && !is_trivially_regular(&t), || "two-annotation term misclassified".into())?;

    let g2 = format!("{g}, y: p -> q");
    let outer = represent(&s(&format!("{g2} |- q")), &FpContext::new()).map_err(|e| e.to_string())?;
    let printed = parse_fin_term(&format!(
        "gfp X{{{g2} |- q}}. y<gfp Y{{{g2} |- p}}. y1<X{{{g2} |- q}}> + y2<\\z:r. X{{{g2}, z: r |- q}}>>"
    ))
    .unwrap();
    ensure(outer.same_as(&printed), || format!("not the printed term: {outer}"))?;
    let hidden = match &outer {
        FinTerm::Gfp { alts, .. } => alts[0].args[0].clone(),
        other => return Err(format!("unexpected shape {other}")),
    };
    ensure(is_trivially_regular(&outer), || "outer term not trivially regular".into())?;
    ensure(is_regular(&hidden) && !is_trivially_regular(&hidden), || "hidden subterm misclassified".into())?;
    ensure(is_strongly_regular(&outer), || "outer term not strongly regular".into())?;

    let mut count = 0;
    for sq in random_sequents(SEED, 500).iter().chain(EXAMPLES.map(s).iter()) {
        let t = represent(sq, &FpContext::new()).map_err(|e| e.to_string())?;
        ensure(is_strongly_regular(&t), || format!("F({sq}) not strongly regular"))?;
        count += 1;
    }
    Ok(format!("two-annotation and hidden-irregularity terms; {count} representations strongly regular"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("golden finitary representations", golden),
        ("equivalence of representation and solution space", equivalence),
        ("co-contraction laws", cocontraction_laws),
        ("adequacy against brute force", adequacy),
        ("verdicts on the standard examples", verdicts),
        ("typing metatheory", metatheory),
        ("termination measure", termination),
        ("regularity", regularity),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
