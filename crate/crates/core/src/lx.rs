//! Named lambda calculus with explicit substitution nodes `t[u/x]`, five
//! reduction rules, simple typing, and the expansion back into pure terms.

use std::collections::BTreeSet;
use std::fmt;

use crate::kernel::{RewriteSystem, RuleLabel, TermLike};
use crate::pure::{fresh_name, PureTermN};
use crate::syntax::{parse_type, Cursor, ParseError, TokKind};
use crate::types::{NamedEnv, SimpleType, TypeError};

pub const BETA: RuleLabel = RuleLabel("Beta");
pub const APP: RuleLabel = RuleLabel("App");
pub const LAMBDA: RuleLabel = RuleLabel("Lambda");
pub const VAR1: RuleLabel = RuleLabel("Var1");
pub const VAR2: RuleLabel = RuleLabel("Var2");

/// `Subst(t, u, x)` is the explicit substitution `t[u/x]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LxTerm {
    Var(String),
    App(Box<LxTerm>, Box<LxTerm>),
    Lam(String, Option<SimpleType>, Box<LxTerm>),
    Subst(Box<LxTerm>, Box<LxTerm>, String),
}

impl LxTerm {
    pub fn var(x: &str) -> Self {
        LxTerm::Var(x.to_string())
    }

    pub fn app(f: LxTerm, a: LxTerm) -> Self {
        LxTerm::App(Box::new(f), Box::new(a))
    }

    pub fn lam(x: &str, annot: Option<SimpleType>, body: LxTerm) -> Self {
        LxTerm::Lam(x.to_string(), annot, Box::new(body))
    }

    pub fn subst(body: LxTerm, repl: LxTerm, x: &str) -> Self {
        LxTerm::Subst(Box::new(body), Box::new(repl), x.to_string())
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            LxTerm::Var(x) => std::iter::once(x.clone()).collect(),
            LxTerm::App(f, a) => {
                let mut s = f.free_vars();
                s.extend(a.free_vars());
                s
            }
            LxTerm::Lam(x, _, b) => {
                let mut s = b.free_vars();
                s.remove(x);
                s
            }
            // t[u/x]: x is bound in t, free in neither direction through u
            LxTerm::Subst(t, u, x) => {
                let mut s = t.free_vars();
                s.remove(x);
                s.extend(u.free_vars());
                s
            }
        }
    }

    pub fn subst_count(&self) -> usize {
        match self {
            LxTerm::Var(_) => 0,
            LxTerm::App(f, a) => f.subst_count() + a.subst_count(),
            LxTerm::Lam(_, _, b) => b.subst_count(),
            LxTerm::Subst(t, u, _) => 1 + t.subst_count() + u.subst_count(),
        }
    }

    pub fn is_pure(&self) -> bool {
        self.subst_count() == 0
    }
}

/// Rename free occurrences of `from` to `to` without touching binders that
/// shadow it. Only used with a fresh `to`, so no capture can occur.
fn rename_free(t: &LxTerm, from: &str, to: &str) -> LxTerm {
    match t {
        LxTerm::Var(x) => {
            if x == from {
                LxTerm::var(to)
            } else {
                t.clone()
            }
        }
        LxTerm::App(f, a) => LxTerm::app(rename_free(f, from, to), rename_free(a, from, to)),
        LxTerm::Lam(x, annot, b) => {
            if x == from {
                t.clone()
            } else {
                LxTerm::lam(x, annot.clone(), rename_free(b, from, to))
            }
        }
        LxTerm::Subst(body, u, x) => {
            let u2 = rename_free(u, from, to);
            if x == from {
                LxTerm::Subst(body.clone(), Box::new(u2), x.clone())
            } else {
                LxTerm::Subst(Box::new(rename_free(body, from, to)), Box::new(u2), x.clone())
            }
        }
    }
}

impl TermLike for LxTerm {
    fn children(&self) -> Vec<Self> {
        match self {
            LxTerm::Var(_) => vec![],
            LxTerm::App(f, a) => vec![(**f).clone(), (**a).clone()],
            LxTerm::Lam(_, _, b) => vec![(**b).clone()],
            LxTerm::Subst(t, u, _) => vec![(**t).clone(), (**u).clone()],
        }
    }

    fn with_child(&self, idx: usize, child: Self) -> Self {
        match (self, idx) {
            (LxTerm::App(_, a), 0) => LxTerm::app(child, (**a).clone()),
            (LxTerm::App(f, _), 1) => LxTerm::app((**f).clone(), child),
            (LxTerm::Lam(x, annot, _), 0) => LxTerm::lam(x, annot.clone(), child),
            (LxTerm::Subst(_, u, x), 0) => LxTerm::Subst(Box::new(child), u.clone(), x.clone()),
            (LxTerm::Subst(t, _, x), 1) => LxTerm::Subst(t.clone(), Box::new(child), x.clone()),
            _ => panic!("bad child index {} for {:?}", idx, self),
        }
    }
}

/// Alpha-canonical form (Lam and Subst both bind).
pub fn alpha_canon(t: &LxTerm) -> LxTerm {
    fn go(t: &LxTerm, depth: usize, map: &mut Vec<(String, String)>) -> LxTerm {
        match t {
            LxTerm::Var(x) => {
                for (orig, canon) in map.iter().rev() {
                    if orig == x {
                        return LxTerm::Var(canon.clone());
                    }
                }
                t.clone()
            }
            LxTerm::App(f, a) => LxTerm::app(go(f, depth, map), go(a, depth, map)),
            LxTerm::Lam(x, annot, b) => {
                let canon = format!("#{}", depth);
                map.push((x.clone(), canon.clone()));
                let b2 = go(b, depth + 1, map);
                map.pop();
                LxTerm::Lam(canon, annot.clone(), Box::new(b2))
            }
            LxTerm::Subst(body, u, x) => {
                let u2 = go(u, depth, map);
                let canon = format!("#{}", depth);
                map.push((x.clone(), canon.clone()));
                let b2 = go(body, depth + 1, map);
                map.pop();
                LxTerm::Subst(Box::new(b2), Box::new(u2), canon)
            }
        }
    }
    go(t, 0, &mut Vec::new())
}

fn lx_root(t: &LxTerm) -> Vec<(RuleLabel, LxTerm)> {
    let mut out = Vec::new();
    match t {
        LxTerm::App(f, a) => {
            if let LxTerm::Lam(x, _, b) = &**f {
                out.push((BETA, LxTerm::subst((**b).clone(), (**a).clone(), x)));
            }
        }
        LxTerm::Subst(body, u, x) => match &**body {
            LxTerm::App(t1, t2) => {
                out.push((
                    APP,
                    LxTerm::app(
                        LxTerm::subst((**t1).clone(), (**u).clone(), x),
                        LxTerm::subst((**t2).clone(), (**u).clone(), x),
                    ),
                ));
            }
            LxTerm::Lam(y, annot, b) => {
                // propagate under the binder; alpha-convert eagerly when the
                // bound name clashes with x or occurs free in u
                let needs_rename = y == x || u.free_vars().contains(y);
                let (y2, b2) = if needs_rename {
                    let mut avoid = u.free_vars();
                    avoid.extend(b.free_vars());
                    avoid.insert(x.clone());
                    avoid.insert(y.clone());
                    let fresh = fresh_name(y, &avoid);
                    let renamed = rename_free(b, y, &fresh);
                    (fresh, renamed)
                } else {
                    (y.clone(), (**b).clone())
                };
                out.push((
                    LAMBDA,
                    LxTerm::lam(&y2, annot.clone(), LxTerm::subst(b2, (**u).clone(), x)),
                ));
            }
            LxTerm::Var(y) => {
                if y == x {
                    out.push((VAR1, (**u).clone()));
                } else {
                    out.push((VAR2, LxTerm::Var(y.clone())));
                }
            }
            _ => {}
        },
        _ => {}
    }
    out
}

pub fn lx_rules() -> RewriteSystem<LxTerm> {
    RewriteSystem::new("lx", vec![BETA, APP, LAMBDA, VAR1, VAR2], lx_root, alpha_canon)
}

pub fn lx_typecheck(env: &NamedEnv, t: &LxTerm) -> Result<SimpleType, TypeError> {
    match t {
        LxTerm::Var(x) => env.lookup(x).cloned().ok_or_else(|| TypeError::Unbound(x.clone())),
        LxTerm::App(f, a) => {
            let tf = lx_typecheck(env, f)?;
            let ta = lx_typecheck(env, a)?;
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
        LxTerm::Lam(x, annot, b) => {
            let dom = annot.clone().ok_or_else(|| TypeError::MissingAnnot(x.clone()))?;
            let cod = lx_typecheck(&env.bound(x, dom.clone()), b)?;
            Ok(SimpleType::arrow(dom, cod))
        }
        // the binder of t[u/x] carries no annotation; its type is the
        // synthesized type of u
        LxTerm::Subst(body, u, x) => {
            let b = lx_typecheck(env, u)?;
            lx_typecheck(&env.bound(x, b), body)
        }
    }
}

/// Expansion into a pure term: every substitution node becomes a Beta redex.
pub fn lx_ateb(t: &LxTerm) -> PureTermN {
    match t {
        LxTerm::Var(x) => PureTermN::var(x),
        LxTerm::App(f, a) => PureTermN::app(lx_ateb(f), lx_ateb(a)),
        LxTerm::Lam(x, annot, b) => PureTermN::lam(x, annot.clone(), lx_ateb(b)),
        LxTerm::Subst(body, u, x) => {
            PureTermN::app(PureTermN::lam(x, None, lx_ateb(body)), lx_ateb(u))
        }
    }
}

/// Like [`lx_ateb`] but annotates every manufactured binder with the
/// synthesized type of the substituend, so the output typechecks under the
/// pure rules. Requires `t` to typecheck under `env`.
pub fn lx_ateb_typed(env: &NamedEnv, t: &LxTerm) -> Result<PureTermN, TypeError> {
    match t {
        LxTerm::Var(x) => Ok(PureTermN::var(x)),
        LxTerm::App(f, a) => Ok(PureTermN::app(lx_ateb_typed(env, f)?, lx_ateb_typed(env, a)?)),
        LxTerm::Lam(x, annot, b) => {
            let dom = annot.clone().ok_or_else(|| TypeError::MissingAnnot(x.clone()))?;
            let body = lx_ateb_typed(&env.bound(x, dom.clone()), b)?;
            Ok(PureTermN::lam(x, Some(dom), body))
        }
        LxTerm::Subst(body, u, x) => {
            let b = lx_typecheck(env, u)?;
            let body2 = lx_ateb_typed(&env.bound(x, b.clone()), body)?;
            let u2 = lx_ateb_typed(env, u)?;
            Ok(PureTermN::app(PureTermN::lam(x, Some(b), body2), u2))
        }
    }
}

/// Embed a pure term back into the explicit-substitution syntax.
pub fn embed_pure(t: &PureTermN) -> LxTerm {
    match t {
        PureTermN::Var(x) => LxTerm::var(x),
        PureTermN::App(f, a) => LxTerm::app(embed_pure(f), embed_pure(a)),
        PureTermN::Lam(x, annot, b) => LxTerm::lam(x, annot.clone(), embed_pure(b)),
    }
}

// ---------------------------------------------------------------------------
// Enumeration

pub const NAME_POOL: [&str; 3] = ["x", "y", "z"];

/// Every term of node count <= `max_size` over the 3-name pool, unannotated.
pub fn enumerate(max_size: usize) -> Vec<LxTerm> {
    let mut by_size: Vec<Vec<LxTerm>> = vec![Vec::new(); max_size + 1];
    for s in 1..=max_size {
        let mut out = Vec::new();
        if s == 1 {
            for n in NAME_POOL {
                out.push(LxTerm::var(n));
            }
        }
        if s >= 2 {
            for n in NAME_POOL {
                for b in by_size[s - 1].clone() {
                    out.push(LxTerm::lam(n, None, b));
                }
            }
        }
        if s >= 3 {
            for fs in 1..=(s - 2) {
                let as_ = s - 1 - fs;
                for f in &by_size[fs] {
                    for a in &by_size[as_] {
                        out.push(LxTerm::app(f.clone(), a.clone()));
                    }
                }
            }
            for ts in 1..=(s - 2) {
                let us = s - 1 - ts;
                for t in &by_size[ts] {
                    for u in &by_size[us] {
                        for n in NAME_POOL {
                            out.push(LxTerm::subst(t.clone(), u.clone(), n));
                        }
                    }
                }
            }
        }
        by_size[s] = out;
    }
    by_size.into_iter().flatten().collect()
}

/// All ways of annotating every Lam binder from the type pool (Subst binders
/// stay bare).
pub fn annotate(t: &LxTerm) -> Vec<LxTerm> {
    match t {
        LxTerm::Var(_) => vec![t.clone()],
        LxTerm::App(f, a) => {
            let fs = annotate(f);
            let aas = annotate(a);
            let mut out = Vec::with_capacity(fs.len() * aas.len());
            for f in &fs {
                for a in &aas {
                    out.push(LxTerm::app(f.clone(), a.clone()));
                }
            }
            out
        }
        LxTerm::Lam(x, _, b) => {
            let bs = annotate(b);
            let mut out = Vec::new();
            for ty in SimpleType::pool() {
                for b in &bs {
                    out.push(LxTerm::lam(x, Some(ty.clone()), b.clone()));
                }
            }
            out
        }
        LxTerm::Subst(body, u, x) => {
            let bodies = annotate(body);
            let us = annotate(u);
            let mut out = Vec::with_capacity(bodies.len() * us.len());
            for b in &bodies {
                for u in &us {
                    out.push(LxTerm::subst(b.clone(), u.clone(), x));
                }
            }
            out
        }
    }
}

// ---------------------------------------------------------------------------
// Surface syntax: `t[u/x]` postfix, binding tighter than application

impl fmt::Display for LxTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print_lx(self, f, false)
    }
}

fn print_lx(t: &LxTerm, f: &mut fmt::Formatter<'_>, atom: bool) -> fmt::Result {
    match t {
        LxTerm::Var(x) => f.write_str(x),
        LxTerm::App(fun, arg) => {
            if atom {
                f.write_str("(")?;
            }
            match **fun {
                LxTerm::App(_, _) => print_lx(fun, f, false)?,
                _ => print_lx(fun, f, true)?,
            }
            f.write_str(" ")?;
            print_lx(arg, f, true)?;
            if atom {
                f.write_str(")")?;
            }
            Ok(())
        }
        LxTerm::Lam(x, annot, b) => {
            if atom {
                f.write_str("(")?;
            }
            match annot {
                Some(ty) => write!(f, "\\{}:{}. ", x, ty)?,
                None => write!(f, "\\{}. ", x)?,
            }
            print_lx(b, f, false)?;
            if atom {
                f.write_str(")")?;
            }
            Ok(())
        }
        LxTerm::Subst(body, u, x) => {
            print_lx(body, f, true)?;
            f.write_str("[")?;
            print_lx(u, f, false)?;
            write!(f, "/{}]", x)
        }
    }
}

pub fn parse_lx(input: &str) -> Result<LxTerm, ParseError> {
    let mut c = Cursor::new(input)?;
    let t = parse_term(&mut c)?;
    c.expect_end()?;
    Ok(t)
}

pub(crate) fn parse_term(c: &mut Cursor) -> Result<LxTerm, ParseError> {
    if c.eat_sym("\\") {
        let x = c.expect_ident()?;
        let annot = if c.eat_sym(":") { Some(parse_type(c)?) } else { None };
        c.expect_sym(".")?;
        let body = parse_term(c)?;
        return Ok(LxTerm::lam(&x, annot, body));
    }
    let mut acc = parse_postfix(c)?;
    while matches!(c.peek(), Some(TokKind::Ident(_)) | Some(TokKind::Sym("("))) {
        let arg = parse_postfix(c)?;
        acc = LxTerm::app(acc, arg);
    }
    Ok(acc)
}

fn parse_postfix(c: &mut Cursor) -> Result<LxTerm, ParseError> {
    let mut acc = parse_atom(c)?;
    while c.eat_sym("[") {
        let u = parse_term(c)?;
        c.expect_sym("/")?;
        let x = c.expect_ident()?;
        c.expect_sym("]")?;
        acc = LxTerm::subst(acc, u, &x);
    }
    Ok(acc)
}

fn parse_atom(c: &mut Cursor) -> Result<LxTerm, ParseError> {
    if c.eat_sym("(") {
        let t = parse_term(c)?;
        c.expect_sym(")")?;
        return Ok(t);
    }
    match c.peek().cloned() {
        Some(TokKind::Ident(x)) => {
            c.bump();
            Ok(LxTerm::Var(x))
        }
        Some(k) => Err(c.error(format!("expected a term, found {}", k))),
        None => Err(c.error("expected a term, found end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{is_sn, reachable, redexes, SnVerdict};

    fn i() -> SimpleType {
        SimpleType::iota()
    }

    #[test]
    fn redex_examples() {
        let sys = lx_rules();
        assert!(redexes(&sys, &LxTerm::var("x"), None).is_empty());
        // (\x. x) y -> x[y/x] by Beta
        let t = parse_lx("(\\x. x) y").unwrap();
        let reds = redexes(&sys, &t, None);
        assert_eq!(reds.len(), 1);
        assert_eq!(reds[0].0, BETA);
        assert_eq!(reds[0].2, parse_lx("x[y/x]").unwrap());
        // (t u)[v/x] -> (t[v/x]) (u[v/x])
        let t = parse_lx("(x y)[z/x]").unwrap();
        let reds = redexes(&sys, &t, None);
        assert_eq!(reds[0].0, APP);
        assert_eq!(reds[0].2, parse_lx("x[z/x] y[z/x]").unwrap());
        // y[t/x] -> y
        let t = parse_lx("y[z/x]").unwrap();
        assert_eq!(redexes(&sys, &t, None)[0].0, VAR2);
    }

    #[test]
    fn lambda_rule_renames_on_clash() {
        let sys = lx_rules();
        // (\x. x)[y/x]: the bound x clashes with the substitution variable
        let t = parse_lx("(\\x. x)[y/x]").unwrap();
        let reds = redexes(&sys, &t, None);
        assert_eq!(reds.len(), 1);
        assert_eq!(reds[0].0, LAMBDA);
        // after Var2/Var1 cleanup the result is alpha-equal to \z. z
        let target = parse_lx("\\z. z").unwrap();
        let tr = reachable(&sys, &t, &target, None, 3).unwrap();
        assert!(tr.len() <= 2);
        // capture case: (\y. x)[y/x] must not capture the substituted y
        let t = parse_lx("(\\y. x)[y/x]").unwrap();
        let target = parse_lx("\\w. y").unwrap();
        assert!(reachable(&sys, &t, &target, None, 3).is_some());
    }

    #[test]
    fn typecheck_examples() {
        // y:i |- x[y/x] : i
        let env = NamedEnv::from_pairs(&[("y", i())]);
        assert_eq!(lx_typecheck(&env, &parse_lx("x[y/x]").unwrap()), Ok(i()));
        assert_eq!(
            lx_typecheck(&NamedEnv::empty(), &parse_lx("\\x:i. x").unwrap()),
            Ok(SimpleType::arrow(i(), i()))
        );
        assert!(lx_typecheck(&NamedEnv::empty(), &parse_lx("x[y/x]").unwrap()).is_err());
    }

    #[test]
    fn ateb_examples() {
        assert_eq!(lx_ateb(&parse_lx("x").unwrap()), PureTermN::var("x"));
        assert_eq!(
            lx_ateb(&parse_lx("x[y/x]").unwrap()).to_string(),
            "(\\x. x) y"
        );
        assert_eq!(
            lx_ateb(&parse_lx("(x[y/x])[z/y]").unwrap()).to_string(),
            "(\\y. (\\x. x) y) z"
        );
    }

    #[test]
    fn ateb_output_is_substitution_free() {
        for t in enumerate(5) {
            assert!(embed_pure(&lx_ateb(&t)).is_pure());
        }
    }

    #[test]
    fn expansion_small() {
        let sys = lx_rules();
        for t in enumerate(5) {
            let start = embed_pure(&lx_ateb(&t));
            let k = t.subst_count();
            let tr = reachable(&sys, &start, &t, Some(&[BETA]), k)
                .unwrap_or_else(|| panic!("no Beta path to {}", t));
            assert_eq!(tr.len(), k, "trace length for {}", t);
        }
    }

    #[test]
    fn typed_terms_are_sn_small() {
        let sys = lx_rules();
        let env = crate::pure::default_named_env();
        for t in enumerate(4) {
            for at in annotate(&t) {
                if lx_typecheck(&env, &at).is_ok() {
                    assert!(
                        is_sn(&sys, &at, 100_000).is_proved(),
                        "typed term not proved SN: {}",
                        at
                    );
                }
            }
        }
    }

    #[test]
    fn omega_loops() {
        let sys = lx_rules();
        let omega = parse_lx("(\\x. x x) (\\x. x x)").unwrap();
        match is_sn(&sys, &omega, 1000) {
            SnVerdict::BudgetExhausted { loop_witness: Some(w), .. } => {
                assert_eq!(&w.start, w.end());
            }
            v => panic!("expected loop witness, got {:?}", v),
        }
    }

    #[test]
    fn parse_print_round_trip() {
        for t in enumerate(5) {
            let printed = t.to_string();
            assert_eq!(parse_lx(&printed).unwrap(), t, "{}", printed);
        }
        let err = parse_lx("x[y/").unwrap_err();
        assert_eq!(err.col, 5);
    }
}
