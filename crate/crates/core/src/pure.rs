//! Pure lambda calculus, named and De Bruijn: meta-level substitution,
//! beta reduction and simple typing. Every expansion lands here (or in the
//! sub-language of an explicit-substitution calculus that mirrors it).

use std::collections::BTreeSet;
use std::fmt;

use crate::kernel::{redexes, RewriteSystem, RuleLabel, TermLike};
use crate::syntax::{parse_type, Cursor, ParseError, TokKind};
use crate::types::{DbEnv, NamedEnv, SimpleType, TypeError};

pub const BETA: RuleLabel = RuleLabel("Beta");

// ---------------------------------------------------------------------------
// Named terms

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PureTermN {
    Var(String),
    App(Box<PureTermN>, Box<PureTermN>),
    Lam(String, Option<SimpleType>, Box<PureTermN>),
}

impl PureTermN {
    pub fn var(x: &str) -> Self {
        PureTermN::Var(x.to_string())
    }

    pub fn app(f: PureTermN, a: PureTermN) -> Self {
        PureTermN::App(Box::new(f), Box::new(a))
    }

    pub fn lam(x: &str, annot: Option<SimpleType>, body: PureTermN) -> Self {
        PureTermN::Lam(x.to_string(), annot, Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            PureTermN::Var(x) => std::iter::once(x.clone()).collect(),
            PureTermN::App(f, a) => {
                let mut s = f.free_vars();
                s.extend(a.free_vars());
                s
            }
            PureTermN::Lam(x, _, b) => {
                let mut s = b.free_vars();
                s.remove(x);
                s
            }
        }
    }
}

/// First name of the form `base1`, `base2`, ... not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    for k in 1.. {
        let cand = format!("{}{}", base, k);
        if !avoid.contains(&cand) {
            return cand;
        }
    }
    unreachable!()
}

/// Capture-avoiding substitution of `u` for free `x` in `t`. Binders that
/// would capture are renamed from the fresh supply.
pub fn subst_meta(t: &PureTermN, x: &str, u: &PureTermN) -> PureTermN {
    match t {
        PureTermN::Var(y) => {
            if y == x {
                u.clone()
            } else {
                t.clone()
            }
        }
        PureTermN::App(f, a) => PureTermN::app(subst_meta(f, x, u), subst_meta(a, x, u)),
        PureTermN::Lam(y, annot, b) => {
            if y == x {
                t.clone()
            } else if u.free_vars().contains(y) && b.free_vars().contains(x) {
                let mut avoid = u.free_vars();
                avoid.extend(b.free_vars());
                avoid.insert(x.to_string());
                avoid.insert(y.clone());
                let y2 = fresh_name(y, &avoid);
                let renamed = subst_meta(b, y, &PureTermN::var(&y2));
                PureTermN::lam(&y2, annot.clone(), subst_meta(&renamed, x, u))
            } else {
                PureTermN::lam(y, annot.clone(), subst_meta(b, x, u))
            }
        }
    }
}

/// Alpha-canonical form: bound names become `#0`, `#1`, ... in traversal
/// order. `#` cannot be lexed, so canonical binders never collide with
/// source names.
pub fn alpha_canon_n(t: &PureTermN) -> PureTermN {
    fn go(t: &PureTermN, depth: usize, map: &mut Vec<(String, String)>) -> PureTermN {
        match t {
            PureTermN::Var(x) => {
                for (orig, canon) in map.iter().rev() {
                    if orig == x {
                        return PureTermN::Var(canon.clone());
                    }
                }
                t.clone()
            }
            PureTermN::App(f, a) => {
                PureTermN::app(go(f, depth, map), go(a, depth, map))
            }
            PureTermN::Lam(x, annot, b) => {
                let canon = format!("#{}", depth);
                map.push((x.clone(), canon.clone()));
                let b2 = go(b, depth + 1, map);
                map.pop();
                PureTermN::Lam(canon, annot.clone(), Box::new(b2))
            }
        }
    }
    go(t, 0, &mut Vec::new())
}

impl TermLike for PureTermN {
    fn children(&self) -> Vec<Self> {
        match self {
            PureTermN::Var(_) => vec![],
            PureTermN::App(f, a) => vec![(**f).clone(), (**a).clone()],
            PureTermN::Lam(_, _, b) => vec![(**b).clone()],
        }
    }

    fn with_child(&self, idx: usize, child: Self) -> Self {
        match (self, idx) {
            (PureTermN::App(_, a), 0) => PureTermN::app(child, (**a).clone()),
            (PureTermN::App(f, _), 1) => PureTermN::app((**f).clone(), child),
            (PureTermN::Lam(x, annot, _), 0) => PureTermN::lam(x, annot.clone(), child),
            _ => panic!("bad child index {} for {:?}", idx, self),
        }
    }
}

fn pure_n_root(t: &PureTermN) -> Vec<(RuleLabel, PureTermN)> {
    if let PureTermN::App(f, a) = t {
        if let PureTermN::Lam(x, _, b) = &**f {
            return vec![(BETA, subst_meta(b, x, a))];
        }
    }
    vec![]
}

pub fn pure_n_rules() -> RewriteSystem<PureTermN> {
    RewriteSystem::new("pure", vec![BETA], pure_n_root, alpha_canon_n)
}

pub fn beta_step_all_n(t: &PureTermN) -> Vec<PureTermN> {
    redexes(&pure_n_rules(), t, None).into_iter().map(|(_, _, t)| t).collect()
}

pub fn typecheck_pure_n(env: &NamedEnv, t: &PureTermN) -> Result<SimpleType, TypeError> {
    match t {
        PureTermN::Var(x) => {
            env.lookup(x).cloned().ok_or_else(|| TypeError::Unbound(x.clone()))
        }
        PureTermN::App(f, a) => {
            let tf = typecheck_pure_n(env, f)?;
            let ta = typecheck_pure_n(env, a)?;
            match tf {
                SimpleType::Arrow(dom, cod) => {
                    if *dom == ta {
                        Ok(*cod)
                    } else {
                        Err(TypeError::Mismatch {
                            expected: dom.to_string(),
                            found: ta.to_string(),
                        })
                    }
                }
                other => Err(TypeError::NotArrow(other.to_string())),
            }
        }
        PureTermN::Lam(x, annot, b) => {
            let dom = annot.clone().ok_or_else(|| TypeError::MissingAnnot(x.clone()))?;
            let cod = typecheck_pure_n(&env.bound(x, dom.clone()), b)?;
            Ok(SimpleType::arrow(dom, cod))
        }
    }
}

// ---------------------------------------------------------------------------
// De Bruijn terms

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PureTermDB {
    Idx(usize),
    App(Box<PureTermDB>, Box<PureTermDB>),
    Lam(Option<SimpleType>, Box<PureTermDB>),
}

impl PureTermDB {
    pub fn idx(n: usize) -> Self {
        assert!(n >= 1, "De Bruijn indices start at 1");
        PureTermDB::Idx(n)
    }

    pub fn app(f: PureTermDB, a: PureTermDB) -> Self {
        PureTermDB::App(Box::new(f), Box::new(a))
    }

    pub fn lam(annot: Option<SimpleType>, body: PureTermDB) -> Self {
        PureTermDB::Lam(annot, Box::new(body))
    }
}

/// Add `d` to every index greater than `cutoff`.
pub fn shift_db(t: &PureTermDB, d: isize, cutoff: usize) -> PureTermDB {
    match t {
        PureTermDB::Idx(n) => {
            if *n > cutoff {
                let m = (*n as isize + d) as usize;
                PureTermDB::Idx(m)
            } else {
                t.clone()
            }
        }
        PureTermDB::App(f, a) => PureTermDB::app(shift_db(f, d, cutoff), shift_db(a, d, cutoff)),
        PureTermDB::Lam(annot, b) => PureTermDB::Lam(annot.clone(), Box::new(shift_db(b, d, cutoff + 1))),
    }
}

/// Substitute `u` for index `k` in `t`, adjusting the remaining indices.
pub fn subst_db(t: &PureTermDB, k: usize, u: &PureTermDB) -> PureTermDB {
    match t {
        PureTermDB::Idx(n) => {
            if *n == k {
                shift_db(u, k as isize - 1, 0)
            } else if *n > k {
                PureTermDB::Idx(n - 1)
            } else {
                t.clone()
            }
        }
        PureTermDB::App(f, a) => PureTermDB::app(subst_db(f, k, u), subst_db(a, k, u)),
        PureTermDB::Lam(annot, b) => PureTermDB::Lam(annot.clone(), Box::new(subst_db(b, k + 1, u))),
    }
}

impl TermLike for PureTermDB {
    fn children(&self) -> Vec<Self> {
        match self {
            PureTermDB::Idx(_) => vec![],
            PureTermDB::App(f, a) => vec![(**f).clone(), (**a).clone()],
            PureTermDB::Lam(_, b) => vec![(**b).clone()],
        }
    }

    fn with_child(&self, idx: usize, child: Self) -> Self {
        match (self, idx) {
            (PureTermDB::App(_, a), 0) => PureTermDB::app(child, (**a).clone()),
            (PureTermDB::App(f, _), 1) => PureTermDB::app((**f).clone(), child),
            (PureTermDB::Lam(annot, _), 0) => PureTermDB::Lam(annot.clone(), Box::new(child)),
            _ => panic!("bad child index {} for {:?}", idx, self),
        }
    }
}

fn pure_db_root(t: &PureTermDB) -> Vec<(RuleLabel, PureTermDB)> {
    if let PureTermDB::App(f, a) = t {
        if let PureTermDB::Lam(_, b) = &**f {
            return vec![(BETA, subst_db(b, 1, a))];
        }
    }
    vec![]
}

pub fn pure_db_rules() -> RewriteSystem<PureTermDB> {
    RewriteSystem::new("pure-db", vec![BETA], pure_db_root, |t| t.clone())
}

pub fn beta_step_all_db(t: &PureTermDB) -> Vec<PureTermDB> {
    redexes(&pure_db_rules(), t, None).into_iter().map(|(_, _, t)| t).collect()
}

pub fn typecheck_pure_db(env: &DbEnv, t: &PureTermDB) -> Result<SimpleType, TypeError> {
    match t {
        PureTermDB::Idx(n) => {
            env.lookup(*n).cloned().ok_or(TypeError::IndexOutOfRange(*n, env.len()))
        }
        PureTermDB::App(f, a) => {
            let tf = typecheck_pure_db(env, f)?;
            let ta = typecheck_pure_db(env, a)?;
            match tf {
                SimpleType::Arrow(dom, cod) => {
                    if *dom == ta {
                        Ok(*cod)
                    } else {
                        Err(TypeError::Mismatch {
                            expected: dom.to_string(),
                            found: ta.to_string(),
                        })
                    }
                }
                other => Err(TypeError::NotArrow(other.to_string())),
            }
        }
        PureTermDB::Lam(annot, b) => {
            let dom = annot.clone().ok_or_else(|| TypeError::MissingAnnot("_".into()))?;
            let cod = typecheck_pure_db(&env.pushed(dom.clone()), b)?;
            Ok(SimpleType::arrow(dom, cod))
        }
    }
}

/// Convert a named term to indices. Free variables take their position in
/// `pool` after the binder stack, so alpha-equivalent terms convert
/// identically.
pub fn named_to_db(t: &PureTermN, pool: &[&str]) -> Option<PureTermDB> {
    fn go(t: &PureTermN, stack: &mut Vec<String>, pool: &[&str]) -> Option<PureTermDB> {
        match t {
            PureTermN::Var(x) => {
                if let Some(k) = stack.iter().rev().position(|b| b == x) {
                    Some(PureTermDB::Idx(k + 1))
                } else {
                    let p = pool.iter().position(|n| n == x)?;
                    Some(PureTermDB::Idx(stack.len() + p + 1))
                }
            }
            PureTermN::App(f, a) => {
                Some(PureTermDB::app(go(f, stack, pool)?, go(a, stack, pool)?))
            }
            PureTermN::Lam(x, annot, b) => {
                stack.push(x.clone());
                let b2 = go(b, stack, pool)?;
                stack.pop();
                Some(PureTermDB::Lam(annot.clone(), Box::new(b2)))
            }
        }
    }
    go(t, &mut Vec::new(), pool)
}

// ---------------------------------------------------------------------------
// Enumeration

pub const NAME_POOL: [&str; 3] = ["x", "y", "z"];

/// Every named pure term of node count <= `max_size` over the 3-name pool,
/// unannotated, each exactly once.
pub fn enumerate_pure_n(max_size: usize) -> Vec<PureTermN> {
    let mut by_size: Vec<Vec<PureTermN>> = vec![Vec::new(); max_size + 1];
    for s in 1..=max_size {
        let mut out = Vec::new();
        if s == 1 {
            for n in NAME_POOL {
                out.push(PureTermN::var(n));
            }
        }
        if s >= 2 {
            for n in NAME_POOL {
                for b in by_size[s - 1].clone() {
                    out.push(PureTermN::lam(n, None, b));
                }
            }
        }
        if s >= 3 {
            for fs in 1..=(s - 2) {
                let as_ = s - 1 - fs;
                for f in &by_size[fs] {
                    for a in &by_size[as_] {
                        out.push(PureTermN::app(f.clone(), a.clone()));
                    }
                }
            }
        }
        by_size[s] = out;
    }
    by_size.into_iter().flatten().collect()
}

/// Every De Bruijn pure term of node count <= `max_size`, indices bounded by
/// `max_size + 1`.
pub fn enumerate_pure_db(max_size: usize) -> Vec<PureTermDB> {
    let max_idx = max_size + 1;
    let mut by_size: Vec<Vec<PureTermDB>> = vec![Vec::new(); max_size + 1];
    for s in 1..=max_size {
        let mut out = Vec::new();
        if s == 1 {
            for n in 1..=max_idx {
                out.push(PureTermDB::Idx(n));
            }
        }
        if s >= 2 {
            for b in by_size[s - 1].clone() {
                out.push(PureTermDB::Lam(None, Box::new(b)));
            }
        }
        if s >= 3 {
            for fs in 1..=(s - 2) {
                let as_ = s - 1 - fs;
                for f in &by_size[fs] {
                    for a in &by_size[as_] {
                        out.push(PureTermDB::app(f.clone(), a.clone()));
                    }
                }
            }
        }
        by_size[s] = out;
    }
    by_size.into_iter().flatten().collect()
}

/// All ways of annotating every binder of `t` with a type from the pool.
pub fn annotate_pure_n(t: &PureTermN) -> Vec<PureTermN> {
    match t {
        PureTermN::Var(_) => vec![t.clone()],
        PureTermN::App(f, a) => {
            let fs = annotate_pure_n(f);
            let aas = annotate_pure_n(a);
            let mut out = Vec::with_capacity(fs.len() * aas.len());
            for f in &fs {
                for a in &aas {
                    out.push(PureTermN::app(f.clone(), a.clone()));
                }
            }
            out
        }
        PureTermN::Lam(x, _, b) => {
            let bs = annotate_pure_n(b);
            let mut out = Vec::new();
            for ty in SimpleType::pool() {
                for b in &bs {
                    out.push(PureTermN::lam(x, Some(ty.clone()), b.clone()));
                }
            }
            out
        }
    }
}

pub fn annotate_pure_db(t: &PureTermDB) -> Vec<PureTermDB> {
    match t {
        PureTermDB::Idx(_) => vec![t.clone()],
        PureTermDB::App(f, a) => {
            let fs = annotate_pure_db(f);
            let aas = annotate_pure_db(a);
            let mut out = Vec::with_capacity(fs.len() * aas.len());
            for f in &fs {
                for a in &aas {
                    out.push(PureTermDB::app(f.clone(), a.clone()));
                }
            }
            out
        }
        PureTermDB::Lam(_, b) => {
            let bs = annotate_pure_db(b);
            let mut out = Vec::new();
            for ty in SimpleType::pool() {
                for b in &bs {
                    out.push(PureTermDB::Lam(Some(ty.clone()), Box::new(b.clone())));
                }
            }
            out
        }
    }
}

/// The fixed environment enumerated typing tests run under: x:i, y:i->i,
/// z:(i->i)->i.
pub fn default_named_env() -> NamedEnv {
    let pool = SimpleType::pool();
    NamedEnv::from_pairs(&[("x", pool[0].clone()), ("y", pool[1].clone()), ("z", pool[2].clone())])
}

/// De Bruijn counterpart of [`default_named_env`].
pub fn default_db_env() -> DbEnv {
    DbEnv(SimpleType::pool())
}

// ---------------------------------------------------------------------------
// Surface syntax

impl fmt::Display for PureTermN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print_n(self, f, false)
    }
}

fn print_n(t: &PureTermN, f: &mut fmt::Formatter<'_>, atom: bool) -> fmt::Result {
    match t {
        PureTermN::Var(x) => f.write_str(x),
        PureTermN::App(fun, arg) => {
            if atom {
                f.write_str("(")?;
            }
            print_n_app(fun, f)?;
            f.write_str(" ")?;
            print_n(arg, f, true)?;
            if atom {
                f.write_str(")")?;
            }
            Ok(())
        }
        PureTermN::Lam(x, annot, b) => {
            if atom {
                f.write_str("(")?;
            }
            match annot {
                Some(ty) => write!(f, "\\{}:{}. ", x, ty)?,
                None => write!(f, "\\{}. ", x)?,
            }
            print_n(b, f, false)?;
            if atom {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

fn print_n_app(t: &PureTermN, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        PureTermN::App(_, _) => print_n(t, f, false),
        _ => print_n(t, f, true),
    }
}

impl fmt::Display for PureTermDB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print_db(self, f, false)
    }
}

fn print_db(t: &PureTermDB, f: &mut fmt::Formatter<'_>, atom: bool) -> fmt::Result {
    match t {
        PureTermDB::Idx(n) => write!(f, "{}", n),
        PureTermDB::App(fun, arg) => {
            if atom {
                f.write_str("(")?;
            }
            match **fun {
                PureTermDB::App(_, _) => print_db(fun, f, false)?,
                _ => print_db(fun, f, true)?,
            }
            f.write_str(" ")?;
            print_db(arg, f, true)?;
            if atom {
                f.write_str(")")?;
            }
            Ok(())
        }
        PureTermDB::Lam(annot, b) => {
            if atom {
                f.write_str("(")?;
            }
            match annot {
                Some(ty) => write!(f, "\\{}. ", ty)?,
                None => f.write_str("\\. ")?,
            }
            print_db(b, f, false)?;
            if atom {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

pub fn parse_pure_n(input: &str) -> Result<PureTermN, ParseError> {
    let mut c = Cursor::new(input)?;
    let t = parse_n_term(&mut c)?;
    c.expect_end()?;
    Ok(t)
}

pub(crate) fn parse_n_term(c: &mut Cursor) -> Result<PureTermN, ParseError> {
    if c.eat_sym("\\") {
        let x = c.expect_ident()?;
        let annot = if c.eat_sym(":") { Some(parse_type(c)?) } else { None };
        c.expect_sym(".")?;
        let body = parse_n_term(c)?;
        return Ok(PureTermN::lam(&x, annot, body));
    }
    let mut acc = parse_n_atom(c)?;
    loop {
        match c.peek() {
            Some(TokKind::Ident(_)) | Some(TokKind::Sym("(")) | Some(TokKind::Sym("\\")) => {
                let arg = if c.eat_sym("\\") {
                    // lambda argument must be parenthesized; rewind and stop
                    return Err(c.error("lambda must be parenthesized in argument position"));
                } else {
                    parse_n_atom(c)?
                };
                acc = PureTermN::app(acc, arg);
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_n_atom(c: &mut Cursor) -> Result<PureTermN, ParseError> {
    if c.eat_sym("(") {
        let t = parse_n_term(c)?;
        c.expect_sym(")")?;
        return Ok(t);
    }
    match c.peek().cloned() {
        Some(TokKind::Ident(x)) => {
            c.bump();
            Ok(PureTermN::Var(x))
        }
        Some(k) => Err(c.error(format!("expected a term, found {}", k))),
        None => Err(c.error("expected a term, found end of input")),
    }
}

pub fn parse_pure_db(input: &str) -> Result<PureTermDB, ParseError> {
    let mut c = Cursor::new(input)?;
    let t = parse_db_term(&mut c)?;
    c.expect_end()?;
    Ok(t)
}

pub(crate) fn parse_db_term(c: &mut Cursor) -> Result<PureTermDB, ParseError> {
    if c.eat_sym("\\") {
        let annot = if c.eat_sym(".") {
            None
        } else {
            let ty = parse_type(c)?;
            c.expect_sym(".")?;
            Some(ty)
        };
        let body = parse_db_term(c)?;
        return Ok(PureTermDB::Lam(annot, Box::new(body)));
    }
    let mut acc = parse_db_atom(c)?;
    while matches!(c.peek(), Some(TokKind::Nat(_)) | Some(TokKind::Sym("("))) {
        let arg = parse_db_atom(c)?;
        acc = PureTermDB::app(acc, arg);
    }
    Ok(acc)
}

fn parse_db_atom(c: &mut Cursor) -> Result<PureTermDB, ParseError> {
    if c.eat_sym("(") {
        let t = parse_db_term(c)?;
        c.expect_sym(")")?;
        return Ok(t);
    }
    let n = c.expect_nat()?;
    if n == 0 {
        return Err(c.error("De Bruijn indices start at 1"));
    }
    Ok(PureTermDB::Idx(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::is_sn;
    use crate::kernel::SnVerdict;

    fn i() -> SimpleType {
        SimpleType::iota()
    }

    #[test]
    fn subst_examples() {
        let x = PureTermN::var("x");
        let y = PureTermN::var("y");
        // subst_meta(x, x, y) = y
        assert_eq!(subst_meta(&x, "x", &y), y);
        // shadowed binder: subst_meta(\x. x, x, y) = \x. x
        let id = PureTermN::lam("x", None, x.clone());
        assert_eq!(subst_meta(&id, "x", &y), id);
        // capture: subst_meta(\y. x, x, y) renames the binder
        let t = PureTermN::lam("y", None, x.clone());
        let r = subst_meta(&t, "x", &y);
        match &r {
            PureTermN::Lam(b, _, body) => {
                assert_ne!(b, "y");
                assert_eq!(**body, y);
            }
            _ => panic!("expected lambda"),
        }
    }

    #[test]
    fn beta_examples() {
        // (\x. x) y -> y
        let t = PureTermN::app(PureTermN::lam("x", None, PureTermN::var("x")), PureTermN::var("y"));
        assert_eq!(beta_step_all_n(&t), vec![PureTermN::var("y")]);
        assert!(beta_step_all_n(&PureTermN::var("x")).is_empty());
        // (\ 1) 2 -> 2
        let t = PureTermDB::app(PureTermDB::lam(None, PureTermDB::Idx(1)), PureTermDB::Idx(2));
        assert_eq!(beta_step_all_db(&t), vec![PureTermDB::Idx(2)]);
    }

    #[test]
    fn typecheck_examples() {
        let env = NamedEnv::empty();
        let idty = typecheck_pure_n(&env, &PureTermN::lam("x", Some(i()), PureTermN::var("x")));
        assert_eq!(idty, Ok(SimpleType::arrow(i(), i())));
        // x:i |- x x is ill typed
        let env = NamedEnv::from_pairs(&[("x", i())]);
        let xx = PureTermN::app(PureTermN::var("x"), PureTermN::var("x"));
        assert!(typecheck_pure_n(&env, &xx).is_err());
        // |- \x:i->i. \y:i. x y : (i->i)->i->i
        let t = PureTermN::lam(
            "x",
            Some(SimpleType::arrow(i(), i())),
            PureTermN::lam("y", Some(i()), PureTermN::app(PureTermN::var("x"), PureTermN::var("y"))),
        );
        assert_eq!(
            typecheck_pure_n(&NamedEnv::empty(), &t),
            Ok(SimpleType::arrow(SimpleType::arrow(i(), i()), SimpleType::arrow(i(), i())))
        );
    }

    #[test]
    fn alpha_canon_identifies_alpha_equivalent() {
        let a = parse_pure_n("\\x. x y").unwrap();
        let b = parse_pure_n("\\z. z y").unwrap();
        let c = parse_pure_n("\\z. z z").unwrap();
        assert_eq!(alpha_canon_n(&a), alpha_canon_n(&b));
        assert_ne!(alpha_canon_n(&a), alpha_canon_n(&c));
    }

    #[test]
    fn enumeration_counts_small() {
        // size 1: three variables; size 2: 9 lambdas
        let ts = enumerate_pure_n(2);
        assert_eq!(ts.len(), 3 + 9);
        let db = enumerate_pure_db(1);
        assert_eq!(db.len(), 2);
    }

    #[test]
    fn enumeration_is_duplicate_free() {
        use std::collections::HashSet;
        let ts = enumerate_pure_n(4);
        let set: HashSet<_> = ts.iter().cloned().collect();
        assert_eq!(set.len(), ts.len());
        let ts = enumerate_pure_db(4);
        let set: HashSet<_> = ts.iter().cloned().collect();
        assert_eq!(set.len(), ts.len());
    }

    #[test]
    fn named_db_agreement_small() {
        // converting named->DB commutes with beta (sizes <= 4 here; the full
        // size-5 sweep runs in the invariants suite)
        for t in enumerate_pure_n(4) {
            let Some(db) = named_to_db(&t, &NAME_POOL) else { continue };
            let mut named_then: Vec<_> = beta_step_all_n(&t)
                .iter()
                .map(|r| named_to_db(r, &NAME_POOL).unwrap())
                .collect();
            let mut db_then = beta_step_all_db(&db);
            named_then.sort_by_key(|t| format!("{}", t));
            db_then.sort_by_key(|t| format!("{}", t));
            assert_eq!(named_then, db_then, "term {}", t);
        }
    }

    #[test]
    fn omega_is_not_proved_sn() {
        let omega = parse_pure_n("(\\x. x x) (\\x. x x)").unwrap();
        match is_sn(&pure_n_rules(), &omega, 50) {
            SnVerdict::BudgetExhausted { loop_witness, .. } => {
                assert!(loop_witness.is_some());
            }
            v => panic!("expected budget exhaustion, got {:?}", v),
        }
    }

    #[test]
    fn parse_print_round_trip() {
        for t in enumerate_pure_n(4) {
            let printed = t.to_string();
            assert_eq!(parse_pure_n(&printed).unwrap(), t, "{}", printed);
        }
        for t in enumerate_pure_db(4) {
            let printed = t.to_string();
            assert_eq!(parse_pure_db(&printed).unwrap(), t, "{}", printed);
        }
        let annotated = parse_pure_n("\\x:i -> i. x (\\y. y)").unwrap();
        assert_eq!(parse_pure_n(&annotated.to_string()).unwrap(), annotated);
    }
}
