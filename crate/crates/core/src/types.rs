//! Simple types and typing environments shared by all calculi.
//!
//! Surface syntax: `i` (the default base type), `A -> B` (right
//! associative), `A - B` (subtraction, used only by the sequent calculus).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    Base(String),
    Arrow(Box<SimpleType>, Box<SimpleType>),
    Sub(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn base(name: &str) -> Self {
        SimpleType::Base(name.to_string())
    }

    /// The default base type.
    pub fn iota() -> Self {
        SimpleType::base("i")
    }

    pub fn arrow(dom: SimpleType, cod: SimpleType) -> Self {
        SimpleType::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn sub(left: SimpleType, right: SimpleType) -> Self {
        SimpleType::Sub(Box::new(left), Box::new(right))
    }

    /// The pool every enumerated typing test draws from.
    pub fn pool() -> Vec<SimpleType> {
        let i = SimpleType::iota();
        let ii = SimpleType::arrow(i.clone(), i.clone());
        let iii = SimpleType::arrow(ii.clone(), i.clone());
        vec![i, ii, iii]
    }
}

pub fn types_equal(a: &SimpleType, b: &SimpleType) -> bool {
    a == b
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Base(n) => f.write_str(n),
            SimpleType::Arrow(d, c) => {
                match **d {
                    SimpleType::Base(_) => write!(f, "{} -> {}", d, c),
                    _ => write!(f, "({}) -> {}", d, c),
                }
            }
            SimpleType::Sub(l, r) => {
                match **l {
                    SimpleType::Base(_) => write!(f, "{} - ", l)?,
                    _ => write!(f, "({}) - ", l)?,
                }
                match **r {
                    SimpleType::Base(_) => write!(f, "{}", r),
                    _ => write!(f, "({})", r),
                }
            }
        }
    }
}

/// Ordered environment for De Bruijn judgments; the leftmost entry is
/// index 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DbEnv(pub Vec<SimpleType>);

impl DbEnv {
    pub fn empty() -> Self {
        DbEnv(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based lookup.
    pub fn lookup(&self, n: usize) -> Option<&SimpleType> {
        if n >= 1 {
            self.0.get(n - 1)
        } else {
            None
        }
    }

    /// New environment with `ty` pushed at the front (index 1).
    pub fn pushed(&self, ty: SimpleType) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(ty);
        v.extend_from_slice(&self.0);
        DbEnv(v)
    }

    pub fn concat(prefix: &DbEnv, suffix: &DbEnv) -> Self {
        let mut v = prefix.0.clone();
        v.extend_from_slice(&suffix.0);
        DbEnv(v)
    }
}

impl fmt::Display for DbEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, ty) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", ty)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("split index {index} out of range for environment of length {len}")]
pub struct SplitError {
    pub index: usize,
    pub len: usize,
}

/// Split after the first `i` entries; concatenating the results gives back
/// the input.
pub fn env_split_db(env: &DbEnv, i: usize) -> Result<(DbEnv, DbEnv), SplitError> {
    if i > env.len() {
        return Err(SplitError { index: i, len: env.len() });
    }
    let (a, b) = env.0.split_at(i);
    Ok((DbEnv(a.to_vec()), DbEnv(b.to_vec())))
}

/// Name-keyed environment for named judgments; at most one binding per name
/// (insertion shadows).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NamedEnv(pub BTreeMap<String, SimpleType>);

impl NamedEnv {
    pub fn empty() -> Self {
        NamedEnv(BTreeMap::new())
    }

    pub fn from_pairs(pairs: &[(&str, SimpleType)]) -> Self {
        NamedEnv(pairs.iter().map(|(n, t)| (n.to_string(), t.clone())).collect())
    }

    pub fn lookup(&self, name: &str) -> Option<&SimpleType> {
        self.0.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains_key(name)
    }

    /// New environment with `name` bound to `ty`, shadowing any previous
    /// binding.
    pub fn bound(&self, name: &str, ty: SimpleType) -> Self {
        let mut m = self.0.clone();
        m.insert(name.to_string(), ty);
        NamedEnv(m)
    }

    /// New environment with every name in `names` removed.
    pub fn without<'a, I: IntoIterator<Item = &'a String>>(&self, names: I) -> Self {
        let mut m = self.0.clone();
        for n in names {
            m.remove(n);
        }
        NamedEnv(m)
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }
}

impl fmt::Display for NamedEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (n, ty)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}:{}", n, ty)?;
        }
        Ok(())
    }
}

/// Two-sided environment for sequent judgments: term variables on the left,
/// context variables on the right. The two name sorts are disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TwoSidedEnv {
    pub left: NamedEnv,
    pub right: NamedEnv,
}

impl TwoSidedEnv {
    pub fn new(left: NamedEnv, right: NamedEnv) -> Result<Self, TypeError> {
        for n in left.names() {
            if right.contains(n) {
                return Err(TypeError::SortClash(n.clone()));
            }
        }
        Ok(TwoSidedEnv { left, right })
    }

    pub fn bind_left(&self, name: &str, ty: SimpleType) -> Result<Self, TypeError> {
        if self.right.contains(name) {
            return Err(TypeError::SortClash(name.to_string()));
        }
        Ok(TwoSidedEnv { left: self.left.bound(name, ty), right: self.right.clone() })
    }

    pub fn bind_right(&self, name: &str, ty: SimpleType) -> Result<Self, TypeError> {
        if self.left.contains(name) {
            return Err(TypeError::SortClash(name.to_string()));
        }
        Ok(TwoSidedEnv { left: self.left.clone(), right: self.right.bound(name, ty) })
    }
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum TypeError {
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("index {0} out of range in environment of length {1}")]
    IndexOutOfRange(usize, usize),
    #[error("type mismatch: expected {expected}, found {found}")]
    Mismatch { expected: String, found: String },
    #[error("{0} is not a function type")]
    NotArrow(String),
    #[error("missing annotation on binder {0}")]
    MissingAnnot(String),
    #[error("side condition violated: {0}")]
    SideCondition(String),
    #[error("environment shape mismatch: {0}")]
    EnvShape(String),
    #[error("name {0} used in both variable sorts")]
    SortClash(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i() -> SimpleType {
        SimpleType::iota()
    }

    #[test]
    fn split_examples() {
        let abc = DbEnv(vec![i(), SimpleType::arrow(i(), i()), SimpleType::base("o")]);
        let (p, s) = env_split_db(&abc, 0).unwrap();
        assert!(p.is_empty());
        assert_eq!(s, abc);
        let (p, s) = env_split_db(&abc, 2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(s.len(), 1);
        assert_eq!(DbEnv::concat(&p, &s), abc);
        assert!(env_split_db(&DbEnv(vec![i()]), 2).is_err());
    }

    #[test]
    fn equality_is_structural() {
        assert!(types_equal(&SimpleType::arrow(i(), i()), &SimpleType::arrow(i(), i())));
        assert!(!types_equal(&i(), &SimpleType::base("o")));
        assert!(!types_equal(&SimpleType::sub(i(), i()), &SimpleType::arrow(i(), i())));
    }

    #[test]
    fn split_round_trips() {
        // concat(split(e, i)) = e for every i <= |e|, |e| <= 8
        let pool = SimpleType::pool();
        for len in 0..=8usize {
            let env = DbEnv((0..len).map(|k| pool[k % 3].clone()).collect());
            for i in 0..=len {
                let (p, s) = env_split_db(&env, i).unwrap();
                assert_eq!(DbEnv::concat(&p, &s), env);
            }
        }
    }

    #[test]
    fn display_parenthesizes_arrows() {
        let ii = SimpleType::arrow(i(), i());
        assert_eq!(ii.to_string(), "i -> i");
        assert_eq!(SimpleType::arrow(ii.clone(), i()).to_string(), "(i -> i) -> i");
        assert_eq!(SimpleType::arrow(i(), ii).to_string(), "i -> i -> i");
        assert_eq!(SimpleType::sub(i(), i()).to_string(), "i - i");
    }
}
