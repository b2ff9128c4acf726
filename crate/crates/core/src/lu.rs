//! De Bruijn calculus with lift/shift substitutions: eight reduction rules,
//! typing, the expansion into pure terms via re-indexing functions, the
//! flattening of erased substitutions, the skeleton order, and the
//! initialization/simulation machinery built on them.

use std::fmt;

use thiserror::Error;

use crate::kernel::{
    redexes, replay, search_simulant, LessdotWitness, ReductionStep, RewriteSystem, RuleLabel,
    StepInstr, TermLike, Trace,
};
use crate::pure::PureTermDB;
use crate::syntax::{parse_type, Cursor, ParseError, TokKind};
use crate::types::{DbEnv, SimpleType, TypeError};

pub const B: RuleLabel = RuleLabel("B");
pub const APP: RuleLabel = RuleLabel("App");
pub const LAMBDA: RuleLabel = RuleLabel("Lambda");
pub const FVAR: RuleLabel = RuleLabel("FVar");
pub const RVAR: RuleLabel = RuleLabel("RVar");
pub const FVARLIFT: RuleLabel = RuleLabel("FVarLift");
pub const RVARLIFT: RuleLabel = RuleLabel("RVarLift");
pub const VARSHIFT: RuleLabel = RuleLabel("VarShift");

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LuTerm {
    Idx(usize),
    App(Box<LuTerm>, Box<LuTerm>),
    Lam(Option<SimpleType>, Box<LuTerm>),
    Clo(Box<LuTerm>, LuSub),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LuSub {
    Slash(Box<LuTerm>),
    LiftOf(Box<LuSub>),
    Shift,
}

impl LuTerm {
    pub fn idx(n: usize) -> Self {
        assert!(n >= 1);
        LuTerm::Idx(n)
    }

    pub fn app(f: LuTerm, a: LuTerm) -> Self {
        LuTerm::App(Box::new(f), Box::new(a))
    }

    pub fn lam(annot: Option<SimpleType>, b: LuTerm) -> Self {
        LuTerm::Lam(annot, Box::new(b))
    }

    pub fn clo(t: LuTerm, s: LuSub) -> Self {
        LuTerm::Clo(Box::new(t), s)
    }

    /// Contains no substitution nodes at all.
    pub fn is_pure(&self) -> bool {
        match self {
            LuTerm::Idx(_) => true,
            LuTerm::App(f, a) => f.is_pure() && a.is_pure(),
            LuTerm::Lam(_, b) => b.is_pure(),
            LuTerm::Clo(_, _) => false,
        }
    }

    /// Contains lift and shift nowhere (plain `t[u/]` closures allowed).
    pub fn is_slash_only(&self) -> bool {
        match self {
            LuTerm::Idx(_) => true,
            LuTerm::App(f, a) => f.is_slash_only() && a.is_slash_only(),
            LuTerm::Lam(_, b) => b.is_slash_only(),
            LuTerm::Clo(t, s) => match s {
                LuSub::Slash(u) => t.is_slash_only() && u.is_slash_only(),
                _ => false,
            },
        }
    }
}

impl LuSub {
    pub fn slash(t: LuTerm) -> Self {
        LuSub::Slash(Box::new(t))
    }

    pub fn lift(s: LuSub) -> Self {
        LuSub::LiftOf(Box::new(s))
    }

    /// Peel the lift spine: `lift^i(base)` with base a slash or shift.
    pub fn decompose(&self) -> (usize, &LuSub) {
        let mut i = 0;
        let mut cur = self;
        while let LuSub::LiftOf(inner) = cur {
            i += 1;
            cur = inner;
        }
        (i, cur)
    }

    pub fn lift_times(i: usize, base: LuSub) -> LuSub {
        (0..i).fold(base, |s, _| LuSub::lift(s))
    }

    fn size(&self) -> usize {
        match self {
            LuSub::Slash(t) => 1 + t.size(),
            LuSub::LiftOf(s) => 1 + s.size(),
            LuSub::Shift => 1,
        }
    }
}

impl TermLike for LuTerm {
    fn children(&self) -> Vec<Self> {
        match self {
            LuTerm::Idx(_) => vec![],
            LuTerm::App(f, a) => vec![(**f).clone(), (**a).clone()],
            LuTerm::Lam(_, b) => vec![(**b).clone()],
            LuTerm::Clo(t, s) => {
                let mut v = vec![(**t).clone()];
                let (_, base) = s.decompose();
                if let LuSub::Slash(u) = base {
                    v.push((**u).clone());
                }
                v
            }
        }
    }

    fn with_child(&self, idx: usize, child: Self) -> Self {
        match (self, idx) {
            (LuTerm::App(_, a), 0) => LuTerm::app(child, (**a).clone()),
            (LuTerm::App(f, _), 1) => LuTerm::app((**f).clone(), child),
            (LuTerm::Lam(an, _), 0) => LuTerm::lam(an.clone(), child),
            (LuTerm::Clo(_, s), 0) => LuTerm::clo(child, s.clone()),
            (LuTerm::Clo(t, s), 1) => {
                let (i, base) = s.decompose();
                match base {
                    LuSub::Slash(_) => LuTerm::Clo(
                        t.clone(),
                        LuSub::lift_times(i, LuSub::slash(child)),
                    ),
                    _ => panic!("no term child inside this substitution"),
                }
            }
            _ => panic!("bad child index {} for {:?}", idx, self),
        }
    }

    fn size(&self) -> usize {
        match self {
            LuTerm::Idx(_) => 1,
            LuTerm::App(f, a) => 1 + f.size() + a.size(),
            LuTerm::Lam(_, b) => 1 + b.size(),
            LuTerm::Clo(t, s) => 1 + t.size() + s.size(),
        }
    }
}

fn lu_root(t: &LuTerm) -> Vec<(RuleLabel, LuTerm)> {
    let mut out = Vec::new();
    match t {
        LuTerm::App(f, a) => {
            if let LuTerm::Lam(_, b) = &**f {
                out.push((B, LuTerm::clo((**b).clone(), LuSub::slash((**a).clone()))));
            }
        }
        LuTerm::Clo(body, s) => match &**body {
            LuTerm::App(t1, t2) => out.push((
                APP,
                LuTerm::app(
                    LuTerm::clo((**t1).clone(), s.clone()),
                    LuTerm::clo((**t2).clone(), s.clone()),
                ),
            )),
            LuTerm::Lam(an, b) => out.push((
                LAMBDA,
                LuTerm::lam(an.clone(), LuTerm::clo((**b).clone(), LuSub::lift(s.clone()))),
            )),
            LuTerm::Idx(1) => match s {
                LuSub::Slash(u) => out.push((FVAR, (**u).clone())),
                LuSub::LiftOf(_) => out.push((FVARLIFT, LuTerm::Idx(1))),
                LuSub::Shift => out.push((VARSHIFT, LuTerm::Idx(2))),
            },
            LuTerm::Idx(n) => match s {
                LuSub::Slash(_) => out.push((RVAR, LuTerm::Idx(n - 1))),
                LuSub::LiftOf(s2) => out.push((
                    RVARLIFT,
                    LuTerm::clo(
                        LuTerm::clo(LuTerm::Idx(n - 1), (**s2).clone()),
                        LuSub::Shift,
                    ),
                )),
                LuSub::Shift => out.push((VARSHIFT, LuTerm::Idx(n + 1))),
            },
            LuTerm::Clo(_, _) => {}
        },
        _ => {}
    }
    out
}

pub fn lu_rules() -> RewriteSystem<LuTerm> {
    RewriteSystem::new(
        "lu",
        vec![B, APP, LAMBDA, FVAR, RVAR, FVARLIFT, RVARLIFT, VARSHIFT],
        lu_root,
        |t| t.clone(),
    )
}

pub fn strict_rules() -> Vec<RuleLabel> {
    vec![B]
}

pub fn lax_rules() -> Vec<RuleLabel> {
    vec![APP, LAMBDA, FVAR, RVAR, FVARLIFT, RVARLIFT, VARSHIFT]
}

// ---------------------------------------------------------------------------
// Typing

pub fn lu_typecheck(env: &DbEnv, t: &LuTerm) -> Result<SimpleType, TypeError> {
    match t {
        LuTerm::Idx(n) => {
            env.lookup(*n).cloned().ok_or(TypeError::IndexOutOfRange(*n, env.len()))
        }
        LuTerm::App(f, a) => {
            let tf = lu_typecheck(env, f)?;
            let ta = lu_typecheck(env, a)?;
            match tf {
                SimpleType::Arrow(dom, cod) => {
                    if *dom == ta {
                        Ok(*cod)
                    } else {
                        Err(TypeError::Mismatch { expected: dom.to_string(), found: ta.to_string() })
                    }
                }
                other => Err(TypeError::NotArrow(other.to_string())),
            }
        }
        LuTerm::Lam(annot, b) => {
            let dom = annot.clone().ok_or_else(|| TypeError::MissingAnnot("_".into()))?;
            let cod = lu_typecheck(&env.pushed(dom.clone()), b)?;
            Ok(SimpleType::arrow(dom, cod))
        }
        LuTerm::Clo(body, s) => {
            let env2 = lu_sub_typecheck(env, s)?;
            lu_typecheck(&env2, body)
        }
    }
}

/// Synthesize the target environment of a substitution. The lift rule is the
/// literal one: in environment `A,G`, `lift(s)` requires `s` to map `G` to
/// some `B,G`, and then maps `A,G` to `A,B,G`.
pub fn lu_sub_typecheck(env: &DbEnv, s: &LuSub) -> Result<DbEnv, TypeError> {
    match s {
        LuSub::Slash(t) => {
            let a = lu_typecheck(env, t)?;
            Ok(env.pushed(a))
        }
        LuSub::Shift => {
            if env.is_empty() {
                Err(TypeError::EnvShape("shift needs a nonempty environment".into()))
            } else {
                Ok(DbEnv(env.0[1..].to_vec()))
            }
        }
        LuSub::LiftOf(inner) => {
            if env.is_empty() {
                return Err(TypeError::EnvShape("lift needs a nonempty environment".into()));
            }
            let a = env.0[0].clone();
            let g = DbEnv(env.0[1..].to_vec());
            let target = lu_sub_typecheck(&g, inner)?;
            if target.is_empty() || DbEnv(target.0[1..].to_vec()) != g {
                return Err(TypeError::EnvShape(format!(
                    "lift body maps to {} which is not of the form B,{}",
                    target, g
                )));
            }
            let b = target.0[0].clone();
            Ok(DbEnv::concat(&DbEnv(vec![a, b]), &g))
        }
    }
}

// ---------------------------------------------------------------------------
// Re-indexing functions

#[derive(Debug, Error, PartialEq, Eq)]
#[error("re-indexing functions are only defined without lift/shift substitutions")]
pub struct ReindexError;

/// Re-index as if one `lift^i(shift)` substitution had been propagated:
/// indices above `i` move up by one. Defined on terms whose only
/// substitutions are plain slashes.
pub fn flift_shift(i: usize, t: &LuTerm) -> Result<LuTerm, ReindexError> {
    match t {
        LuTerm::Idx(n) => Ok(LuTerm::Idx(if *n > i { n + 1 } else { *n })),
        LuTerm::App(f, a) => Ok(LuTerm::app(flift_shift(i, f)?, flift_shift(i, a)?)),
        LuTerm::Lam(an, b) => Ok(LuTerm::lam(an.clone(), flift_shift(i + 1, b)?)),
        LuTerm::Clo(body, LuSub::Slash(u)) => Ok(LuTerm::clo(
            flift_shift(i + 1, body)?,
            LuSub::slash(flift_shift(i, u)?),
        )),
        LuTerm::Clo(_, _) => Err(ReindexError),
    }
}

/// Re-index as if `i` shift substitutions had been propagated: the i-fold
/// composition of `flift_shift` at level 0. On an index this is `n + i`.
pub fn fshift(i: usize, t: &LuTerm) -> Result<LuTerm, ReindexError> {
    let mut cur = t.clone();
    for _ in 0..i {
        cur = flift_shift(0, &cur)?;
    }
    Ok(cur)
}

/// Prepare a term to be applied to a substitution stripped of `i` lifts:
/// free index `i+1` becomes 1, free indices at most `i` move up by one,
/// larger indices stay. The rotated window sits above the `depth` indices
/// bound by binders crossed on the way in, so that the level-0 function is
/// the identity and flattening is idempotent.
pub fn flift_cons(i: usize, t: &LuTerm) -> Result<LuTerm, ReindexError> {
    flift_cons_at(0, i, t)
}

fn flift_cons_at(depth: usize, i: usize, t: &LuTerm) -> Result<LuTerm, ReindexError> {
    match t {
        LuTerm::Idx(n) => {
            let m = if *n <= depth {
                *n
            } else if *n <= depth + i {
                n + 1
            } else if *n == depth + i + 1 {
                depth + 1
            } else {
                *n
            };
            Ok(LuTerm::Idx(m))
        }
        LuTerm::App(f, a) => {
            Ok(LuTerm::app(flift_cons_at(depth, i, f)?, flift_cons_at(depth, i, a)?))
        }
        LuTerm::Lam(an, b) => Ok(LuTerm::lam(an.clone(), flift_cons_at(depth + 1, i, b)?)),
        LuTerm::Clo(body, LuSub::Slash(u)) => Ok(LuTerm::clo(
            flift_cons_at(depth + 1, i, body)?,
            LuSub::slash(flift_cons_at(depth, i, u)?),
        )),
        LuTerm::Clo(_, _) => Err(ReindexError),
    }
}

// ---------------------------------------------------------------------------
// Expansion

fn ateb_term(t: &LuTerm) -> LuTerm {
    match t {
        LuTerm::Idx(n) => LuTerm::Idx(*n),
        LuTerm::App(f, a) => LuTerm::app(ateb_term(f), ateb_term(a)),
        LuTerm::Lam(an, b) => LuTerm::lam(an.clone(), ateb_term(b)),
        LuTerm::Clo(body, s) => {
            let (i, base) = s.decompose();
            match base {
                LuSub::Slash(u) => {
                    let body2 = flift_cons(i, &ateb_term(body)).expect("expansion output is pure");
                    let u2 = fshift(i, &ateb_term(u)).expect("expansion output is pure");
                    LuTerm::app(LuTerm::lam(None, body2), u2)
                }
                LuSub::Shift => {
                    flift_shift(i, &ateb_term(body)).expect("expansion output is pure")
                }
                LuSub::LiftOf(_) => unreachable!("decompose strips lifts"),
            }
        }
    }
}

/// Expansion into a pure De Bruijn term; every slash substitution becomes a
/// `B` redex and every erased lift/shift is pre-applied by re-indexing.
pub fn lu_ateb(t: &LuTerm) -> PureTermDB {
    to_pure(&ateb_term(t)).expect("expansion output is substitution-free")
}

pub fn to_pure(t: &LuTerm) -> Option<PureTermDB> {
    match t {
        LuTerm::Idx(n) => Some(PureTermDB::Idx(*n)),
        LuTerm::App(f, a) => Some(PureTermDB::app(to_pure(f)?, to_pure(a)?)),
        LuTerm::Lam(an, b) => Some(PureTermDB::Lam(an.clone(), Box::new(to_pure(b)?))),
        LuTerm::Clo(_, _) => None,
    }
}

pub fn embed_pure(t: &PureTermDB) -> LuTerm {
    match t {
        PureTermDB::Idx(n) => LuTerm::Idx(*n),
        PureTermDB::App(f, a) => LuTerm::app(embed_pure(f), embed_pure(a)),
        PureTermDB::Lam(an, b) => LuTerm::lam(an.clone(), embed_pure(b)),
    }
}

/// Typed expansion: manufactured binders get the synthesized type of the
/// substituend, so the output typechecks (same environment, same type).
pub fn lu_ateb_typed(env: &DbEnv, t: &LuTerm) -> Result<PureTermDB, TypeError> {
    let out = ateb_typed_term(env, t)?;
    Ok(to_pure(&out).expect("expansion output is substitution-free"))
}

fn ateb_typed_term(env: &DbEnv, t: &LuTerm) -> Result<LuTerm, TypeError> {
    match t {
        LuTerm::Idx(n) => Ok(LuTerm::Idx(*n)),
        LuTerm::App(f, a) => Ok(LuTerm::app(ateb_typed_term(env, f)?, ateb_typed_term(env, a)?)),
        LuTerm::Lam(an, b) => {
            let dom = an.clone().ok_or_else(|| TypeError::MissingAnnot("_".into()))?;
            Ok(LuTerm::lam(Some(dom.clone()), ateb_typed_term(&env.pushed(dom), b)?))
        }
        LuTerm::Clo(body, s) => {
            let (i, base) = s.decompose();
            let inner_env = lu_sub_typecheck(env, s)?;
            match base {
                LuSub::Slash(u) => {
                    if env.len() < i {
                        return Err(TypeError::EnvShape("environment shorter than lift depth".into()));
                    }
                    let u_env = DbEnv(env.0[i..].to_vec());
                    let b_ty = lu_typecheck(&u_env, u)?;
                    let body2 = flift_cons(i, &ateb_typed_term(&inner_env, body)?)
                        .expect("expansion output is pure");
                    let u2 = fshift(i, &ateb_typed_term(&u_env, u)?)
                        .expect("expansion output is pure");
                    Ok(LuTerm::app(LuTerm::lam(Some(b_ty), body2), u2))
                }
                LuSub::Shift => Ok(flift_shift(i, &ateb_typed_term(&inner_env, body)?)
                    .expect("expansion output is pure")),
                LuSub::LiftOf(_) => unreachable!("decompose strips lifts"),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Flattening (overline)

/// Erase lifts and shifts by applying the re-indexing functions; the output
/// contains only slash substitutions.
pub fn lu_overline(t: &LuTerm) -> LuTerm {
    match t {
        LuTerm::Idx(n) => LuTerm::Idx(*n),
        LuTerm::App(f, a) => LuTerm::app(lu_overline(f), lu_overline(a)),
        LuTerm::Lam(an, b) => LuTerm::lam(an.clone(), lu_overline(b)),
        LuTerm::Clo(body, s) => {
            let (i, base) = s.decompose();
            match base {
                LuSub::Slash(u) => {
                    let body2 =
                        flift_cons(i, &lu_overline(body)).expect("flattened output is slash-only");
                    let u2 = fshift(i, &lu_overline(u)).expect("flattened output is slash-only");
                    LuTerm::clo(body2, LuSub::slash(u2))
                }
                LuSub::Shift => {
                    flift_shift(i, &lu_overline(body)).expect("flattened output is slash-only")
                }
                LuSub::LiftOf(_) => unreachable!("decompose strips lifts"),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Skeleton order and the simulation relation

/// The inductive order on term skeletons: `u <= t` when `t` carries lift and
/// shift structure only where `u` may lack it.
pub fn lu_preceq(u: &LuTerm, t: &LuTerm) -> bool {
    // u <= t' whenever t = t'[lift^i(shift)] and u <= t': the shift-dropping
    // clause in the general form the initialization and simulation arguments
    // use (bare [shift] is the i = 0 instance)
    if let LuTerm::Clo(t2, s) = t {
        let (_, base) = s.decompose();
        if matches!(base, LuSub::Shift) && lu_preceq(u, t2) {
            return true;
        }
    }
    match (u, t) {
        (LuTerm::Idx(_), LuTerm::Idx(_)) => true,
        (LuTerm::App(f1, a1), LuTerm::App(f2, a2)) => lu_preceq(f1, f2) && lu_preceq(a1, a2),
        (LuTerm::Lam(_, b1), LuTerm::Lam(_, b2)) => lu_preceq(b1, b2),
        (LuTerm::Clo(t1, s1), LuTerm::Clo(t2, s2)) => lu_preceq(t1, t2) && sub_preceq(s1, s2),
        _ => false,
    }
}

fn sub_preceq(u: &LuSub, t: &LuSub) -> bool {
    // u <= lift(t') whenever u <= t'
    if let LuSub::LiftOf(t2) = t {
        if sub_preceq(u, t2) {
            return true;
        }
    }
    match (u, t) {
        (LuSub::Shift, LuSub::Shift) => true,
        (LuSub::Slash(a), LuSub::Slash(b)) => lu_preceq(a, b),
        (LuSub::LiftOf(a), LuSub::LiftOf(b)) => sub_preceq(a, b),
        _ => false,
    }
}

/// The simulation relation: equal flattenings plus the skeleton order.
pub fn lu_lessdot(u: &LuTerm, t: &LuTerm) -> bool {
    lu_preceq(u, t) && lu_overline(u) == lu_overline(t)
}

// ---------------------------------------------------------------------------
// Initialization and simulation

/// Witness construction for the initialization lemma: one `B` step per
/// slash-substitution node; lifts and shifts are pre-applied by re-indexing
/// and never need recovering.
pub fn lu_init_witness(t: &LuTerm) -> Result<LessdotWitness<LuTerm>, crate::kernel::KernelError> {
    let (witness, instrs) = init_plan(t);
    let start = embed_pure(&lu_ateb(t));
    let trace = replay(&lu_rules(), &start, &instrs)?;
    Ok(LessdotWitness { witness, trace })
}

fn init_plan(t: &LuTerm) -> (LuTerm, Vec<StepInstr>) {
    match t {
        LuTerm::Idx(n) => (LuTerm::Idx(*n), vec![]),
        LuTerm::App(t1, t2) => {
            let (w1, i1) = init_plan(t1);
            let (w2, i2) = init_plan(t2);
            let mut instrs: Vec<StepInstr> = i1.iter().map(|s| s.prefixed(0)).collect();
            instrs.extend(i2.iter().map(|s| s.prefixed(1)));
            (LuTerm::app(w1, w2), instrs)
        }
        LuTerm::Lam(an, b) => {
            let (w, i) = init_plan(b);
            (LuTerm::lam(an.clone(), w), i.iter().map(|s| s.prefixed(0)).collect())
        }
        LuTerm::Clo(body, s) => {
            let (i, base) = s.decompose();
            match base {
                LuSub::Shift => {
                    // the expansion is the re-indexed expansion of the body,
                    // and re-indexing preserves redex positions
                    let (w, instrs) = init_plan(body);
                    let w2 = flift_shift(i, &w).expect("witnesses are slash-only");
                    (w2, instrs)
                }
                LuSub::Slash(u) => {
                    let (w1, i1) = init_plan(body);
                    let (w2, i2) = init_plan(u);
                    let mut instrs: Vec<StepInstr> =
                        i1.iter().map(|s| s.prefixed(0).prefixed(0)).collect();
                    instrs.extend(i2.iter().map(|s| s.prefixed(1)));
                    instrs.push(StepInstr::new(B, crate::kernel::Path::root()));
                    let wb = flift_cons(i, &w1).expect("witnesses are slash-only");
                    let wu = fshift(i, &w2).expect("witnesses are slash-only");
                    (LuTerm::clo(wb, LuSub::slash(wu)), instrs)
                }
                LuSub::LiftOf(_) => unreachable!("decompose strips lifts"),
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("no simulating term within depth {depth} for reduct {reduct}")]
pub struct SimulationGap {
    pub reduct: String,
    pub depth: usize,
}

/// Simulation search depth for non-strict steps.
pub const SIM_DEPTH: usize = 3;

/// Given `u` related to `t` and a one-step reduction of `t`, find `u'`
/// related to the reduct: a single `B` step when the step was `B`, at most
/// [`SIM_DEPTH`] arbitrary steps otherwise.
pub fn lu_simulate_step(
    _t: &LuTerm,
    step: &ReductionStep<LuTerm>,
    u: &LuTerm,
) -> Result<(LuTerm, Trace<LuTerm>), SimulationGap> {
    let sys = lu_rules();
    let t2 = &step.after;
    let strict: Option<&[RuleLabel]> = if step.rule == B { Some(&[B]) } else { None };
    match search_simulant(&sys, u, |cand| lu_lessdot(cand, t2), strict, SIM_DEPTH) {
        Some(trace) => Ok((trace.end().clone(), trace)),
        None => Err(SimulationGap { reduct: t2.to_string(), depth: SIM_DEPTH }),
    }
}

// ---------------------------------------------------------------------------
// Enumeration

/// Every term of node count <= `max_size`, indices bounded by
/// `max_size + 1`, unannotated.
pub fn enumerate(max_size: usize) -> Vec<LuTerm> {
    let max_idx = max_size + 1;
    let mut terms: Vec<Vec<LuTerm>> = vec![Vec::new(); max_size + 1];
    let mut subs: Vec<Vec<LuSub>> = vec![Vec::new(); max_size + 1];
    for s in 1..=max_size {
        let mut t_out = Vec::new();
        if s == 1 {
            for n in 1..=max_idx {
                t_out.push(LuTerm::Idx(n));
            }
        }
        if s >= 2 {
            for b in &terms[s - 1] {
                t_out.push(LuTerm::lam(None, b.clone()));
            }
        }
        if s >= 3 {
            for ls in 1..=(s - 2) {
                let rs = s - 1 - ls;
                for f in &terms[ls] {
                    for a in &terms[rs] {
                        t_out.push(LuTerm::app(f.clone(), a.clone()));
                    }
                }
                for t in &terms[ls] {
                    for sub in &subs[rs] {
                        t_out.push(LuTerm::clo(t.clone(), sub.clone()));
                    }
                }
            }
        }
        let mut s_out = Vec::new();
        if s == 1 {
            s_out.push(LuSub::Shift);
        }
        if s >= 2 {
            for t in &terms[s - 1] {
                s_out.push(LuSub::slash(t.clone()));
            }
            for sub in &subs[s - 1] {
                s_out.push(LuSub::lift(sub.clone()));
            }
        }
        terms[s] = t_out;
        subs[s] = s_out;
    }
    terms.into_iter().flatten().collect()
}

/// All ways of annotating every binder from the type pool.
pub fn annotate(t: &LuTerm) -> Vec<LuTerm> {
    match t {
        LuTerm::Idx(_) => vec![t.clone()],
        LuTerm::App(f, a) => {
            let fs = annotate(f);
            let aas = annotate(a);
            let mut out = Vec::with_capacity(fs.len() * aas.len());
            for f in &fs {
                for a in &aas {
                    out.push(LuTerm::app(f.clone(), a.clone()));
                }
            }
            out
        }
        LuTerm::Lam(_, b) => {
            let bs = annotate(b);
            let mut out = Vec::new();
            for ty in SimpleType::pool() {
                for b in &bs {
                    out.push(LuTerm::lam(Some(ty.clone()), b.clone()));
                }
            }
            out
        }
        LuTerm::Clo(body, s) => {
            let bodies = annotate(body);
            let ss = annotate_sub(s);
            let mut out = Vec::with_capacity(bodies.len() * ss.len());
            for b in &bodies {
                for s in &ss {
                    out.push(LuTerm::Clo(Box::new(b.clone()), s.clone()));
                }
            }
            out
        }
    }
}

fn annotate_sub(s: &LuSub) -> Vec<LuSub> {
    match s {
        LuSub::Shift => vec![LuSub::Shift],
        LuSub::Slash(t) => annotate(t).into_iter().map(LuSub::slash).collect(),
        LuSub::LiftOf(inner) => annotate_sub(inner).into_iter().map(LuSub::lift).collect(),
    }
}

// ---------------------------------------------------------------------------
// Surface syntax: `t[u/]`, `t[^(s)]` for lift, `t[!]` for shift

impl fmt::Display for LuTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print_term(self, f, false)
    }
}

fn print_term(t: &LuTerm, f: &mut fmt::Formatter<'_>, atom: bool) -> fmt::Result {
    match t {
        LuTerm::Idx(n) => write!(f, "{}", n),
        LuTerm::App(fun, arg) => {
            if atom {
                f.write_str("(")?;
            }
            match **fun {
                LuTerm::App(_, _) => print_term(fun, f, false)?,
                _ => print_term(fun, f, true)?,
            }
            f.write_str(" ")?;
            print_term(arg, f, true)?;
            if atom {
                f.write_str(")")?;
            }
            Ok(())
        }
        LuTerm::Lam(annot, b) => {
            if atom {
                f.write_str("(")?;
            }
            match annot {
                Some(ty) => write!(f, "\\{}. ", ty)?,
                None => f.write_str("\\. ")?,
            }
            print_term(b, f, false)?;
            if atom {
                f.write_str(")")?;
            }
            Ok(())
        }
        LuTerm::Clo(body, s) => {
            print_term(body, f, true)?;
            f.write_str("[")?;
            print_sub(s, f)?;
            f.write_str("]")
        }
    }
}

fn print_sub(s: &LuSub, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match s {
        LuSub::Shift => f.write_str("!"),
        LuSub::Slash(t) => {
            print_term(t, f, false)?;
            f.write_str("/")
        }
        LuSub::LiftOf(inner) => {
            f.write_str("^(")?;
            print_sub(inner, f)?;
            f.write_str(")")
        }
    }
}

pub fn parse_lu(input: &str) -> Result<LuTerm, ParseError> {
    let mut c = Cursor::new(input)?;
    let t = parse_term_c(&mut c)?;
    c.expect_end()?;
    Ok(t)
}

pub(crate) fn parse_term_c(c: &mut Cursor) -> Result<LuTerm, ParseError> {
    if c.eat_sym("\\") {
        let annot = if c.eat_sym(".") {
            None
        } else {
            let ty = parse_type(c)?;
            c.expect_sym(".")?;
            Some(ty)
        };
        let body = parse_term_c(c)?;
        return Ok(LuTerm::lam(annot, body));
    }
    let mut acc = parse_postfix(c)?;
    while matches!(c.peek(), Some(TokKind::Nat(_)) | Some(TokKind::Sym("("))) {
        let arg = parse_postfix(c)?;
        acc = LuTerm::app(acc, arg);
    }
    Ok(acc)
}

fn parse_postfix(c: &mut Cursor) -> Result<LuTerm, ParseError> {
    let mut acc = parse_atom(c)?;
    while c.eat_sym("[") {
        let s = parse_sub(c)?;
        c.expect_sym("]")?;
        acc = LuTerm::Clo(Box::new(acc), s);
    }
    Ok(acc)
}

fn parse_sub(c: &mut Cursor) -> Result<LuSub, ParseError> {
    if c.eat_sym("!") {
        return Ok(LuSub::Shift);
    }
    if c.eat_sym("^") {
        c.expect_sym("(")?;
        let inner = parse_sub(c)?;
        c.expect_sym(")")?;
        return Ok(LuSub::lift(inner));
    }
    let t = parse_term_c(c)?;
    c.expect_sym("/")?;
    Ok(LuSub::slash(t))
}

fn parse_atom(c: &mut Cursor) -> Result<LuTerm, ParseError> {
    if c.eat_sym("(") {
        let t = parse_term_c(c)?;
        c.expect_sym(")")?;
        return Ok(t);
    }
    let n = c.expect_nat()?;
    if n == 0 {
        return Err(c.error("De Bruijn indices start at 1"));
    }
    Ok(LuTerm::Idx(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::validate_trace;

    fn t(s: &str) -> LuTerm {
        parse_lu(s).unwrap()
    }

    #[test]
    fn rule_examples() {
        let sys = lu_rules();
        // 1[^(!)] -> 1 by FVarLift
        let reds = redexes(&sys, &t("1[^(!)]"), None);
        assert_eq!(reds[0].0, FVARLIFT);
        assert_eq!(reds[0].2, t("1"));
        // 2[^(!)] -> 1[!][!] by RVarLift
        let reds = redexes(&sys, &t("2[^(!)]"), None);
        assert_eq!(reds[0].0, RVARLIFT);
        assert_eq!(reds[0].2, t("1[!][!]"));
        // 3[!] -> 4 by VarShift
        let reds = redexes(&sys, &t("3[!]"), None);
        assert_eq!(reds[0].0, VARSHIFT);
        assert_eq!(reds[0].2, t("4"));
        // 1[1/] -> 1 by FVar
        let reds = redexes(&sys, &t("1[1/]"), None);
        assert_eq!(reds[0].0, FVAR);
        assert_eq!(reds[0].2, t("1"));
    }

    #[test]
    fn reindex_examples() {
        assert_eq!(flift_shift(2, &t("3")).unwrap(), t("4"));
        assert_eq!(flift_shift(2, &t("2")).unwrap(), t("2"));
        assert_eq!(flift_shift(0, &t("\\. 1")).unwrap(), t("\\. 1"));
        assert_eq!(fshift(3, &t("2")).unwrap(), t("5"));
        assert_eq!(fshift(0, &t("\\. 2 1")).unwrap(), t("\\. 2 1"));
        assert_eq!(fshift(1, &t("\\. 2")).unwrap(), t("\\. 3"));
        assert_eq!(flift_cons(2, &t("3")).unwrap(), t("1"));
        assert_eq!(flift_cons(2, &t("5")).unwrap(), t("5"));
        assert_eq!(flift_cons(2, &t("1")).unwrap(), t("2"));
        assert!(flift_shift(0, &t("1[!]")).is_err());
    }

    #[test]
    fn typing_examples() {
        let i = SimpleType::iota;
        // [A] |- ! |> []
        let env = DbEnv(vec![i()]);
        assert_eq!(lu_sub_typecheck(&env, &LuSub::Shift), Ok(DbEnv::empty()));
        // [] |- (\i. 1)/ |> [i -> i]
        let s = LuSub::slash(t("(\\i. 1)"));
        assert_eq!(
            lu_sub_typecheck(&DbEnv::empty(), &s),
            Ok(DbEnv(vec![SimpleType::arrow(i(), i())]))
        );
        // [i] |- 2 is out of range
        assert!(lu_typecheck(&DbEnv(vec![i()]), &t("2")).is_err());
    }

    #[test]
    fn ateb_examples() {
        assert_eq!(lu_ateb(&t("1[2/]")).to_string(), "(\\. 1) 2");
        // the worked re-indexing example, instantiated at 1, 1, 4, 1
        let big = t("(1[1/] 4[^(^(^(1/)))])[^(^(!))]");
        assert_eq!(lu_ateb(&big).to_string(), "(\\. 1) 1 ((\\. 1) 5)");
        // shape identity: the outer double-lifted shift re-indexes the inner
        // expansion at level 2
        let inner = t("1[1/] 4[^(^(^(1/)))]");
        let expect = flift_shift(2, &embed_pure(&lu_ateb(&inner))).unwrap();
        assert_eq!(embed_pure(&lu_ateb(&big)), expect);
    }

    #[test]
    fn overline_examples() {
        assert_eq!(lu_overline(&t("3[!]")), t("4"));
        assert_eq!(lu_overline(&t("7")), t("7"));
        assert_eq!(lu_overline(&t("1[^(2/)]")), t("2[3/]"));
    }

    #[test]
    fn preceq_examples() {
        assert!(lu_preceq(&t("1"), &t("9")));
        assert!(lu_preceq(&t("1[^(1/)]"), &t("1[!][^(^(^(1/)))]")));
        assert!(!sub_preceq(&LuSub::Shift, &LuSub::slash(t("1"))));
    }

    #[test]
    fn lessdot_examples() {
        for s in ["1", "2[1/]", "(\\. 1) 2", "1[^(!)]"] {
            assert!(lu_lessdot(&t(s), &t(s)), "{} not related to itself", s);
        }
        assert!(lu_lessdot(&t("4"), &t("3[!]")));
        assert!(!lu_lessdot(&t("5"), &t("3[!]")));
    }

    #[test]
    fn init_witness_examples() {
        let sys = lu_rules();
        // t = n: witness n, empty trace
        let w = lu_init_witness(&t("7")).unwrap();
        assert_eq!(w.witness, t("7"));
        assert!(w.trace.is_empty());
        // t = 1[2/]: one B step from (\. 1) 2
        let w = lu_init_witness(&t("1[2/]")).unwrap();
        assert_eq!(w.witness, t("1[2/]"));
        assert_eq!(w.trace.len(), 1);
        assert_eq!(w.trace.rules(), vec![B]);
        assert!(lu_lessdot(&w.witness, &t("1[2/]")));
        // t = 3[!]: expansion is 4 already
        let w = lu_init_witness(&t("3[!]")).unwrap();
        assert_eq!(w.witness, t("4"));
        assert!(w.trace.is_empty());
        validate_trace(&sys, &w.trace, Some(&[B])).unwrap();
    }

    #[test]
    fn init_witness_small_sweep() {
        let sys = lu_rules();
        for term in enumerate(5) {
            let w = lu_init_witness(&term)
                .unwrap_or_else(|e| panic!("witness failed for {}: {}", term, e));
            assert_eq!(w.trace.start, embed_pure(&lu_ateb(&term)));
            validate_trace(&sys, &w.trace, Some(&[B])).unwrap();
            assert_eq!(w.trace.end(), &w.witness, "trace end for {}", term);
            assert!(lu_lessdot(&w.witness, &term), "witness not related for {}", term);
        }
    }

    #[test]
    fn simulate_examples() {
        let sys = lu_rules();
        // t = (\. 1) 2 -B-> 1[2/], u = t
        let start = t("(\\. 1) 2");
        let reds = redexes(&sys, &start, None);
        let step = ReductionStep {
            rule: reds[0].0,
            at: reds[0].1.clone(),
            before: start.clone(),
            after: reds[0].2.clone(),
        };
        let (u2, tr) = lu_simulate_step(&start, &step, &start).unwrap();
        assert_eq!(u2, t("1[2/]"));
        assert_eq!(tr.len(), 1);
        // t = 3[!] -VarShift-> 4, u = 4: nothing to do
        let start = t("3[!]");
        let reds = redexes(&sys, &start, None);
        let step = ReductionStep {
            rule: reds[0].0,
            at: reds[0].1.clone(),
            before: start.clone(),
            after: reds[0].2.clone(),
        };
        let (u2, tr) = lu_simulate_step(&start, &step, &t("4")).unwrap();
        assert_eq!(u2, t("4"));
        assert!(tr.is_empty());
        // t = 2[^(!)] -RVarLift-> 1[!][!], u = t follows with the same rule
        let start = t("2[^(!)]");
        let reds = redexes(&sys, &start, None);
        let step = ReductionStep {
            rule: reds[0].0,
            at: reds[0].1.clone(),
            before: start.clone(),
            after: reds[0].2.clone(),
        };
        let (u2, _) = lu_simulate_step(&start, &step, &start).unwrap();
        assert_eq!(u2, t("1[!][!]"));
    }

    #[test]
    fn size_counts_substitution_nodes() {
        assert_eq!(t("1[!]").size(), 3);
        assert_eq!(t("1[^(2/)]").size(), 5);
        assert_eq!(t("1[2/]").size(), 4);
    }

    #[test]
    fn parse_print_round_trip() {
        for term in enumerate(5) {
            let printed = term.to_string();
            assert_eq!(parse_lu(&printed).unwrap(), term, "{}", printed);
        }
        let annotated = t("\\i -> i. 1[2/]");
        assert_eq!(parse_lu(&annotated.to_string()).unwrap(), annotated);
    }
}
