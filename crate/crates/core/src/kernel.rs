//! Calculus-agnostic rewriting machinery: redex enumeration, fuel-bounded
//! normalization, reachability search and a bounded strong-normalization
//! oracle.
//!
//! Every calculus plugs in as a [`RewriteSystem`]: a fixed rule table, a
//! root-redex matcher and a canonicalizer (identity for De Bruijn syntax,
//! alpha-renaming for named syntax). The functions here never assume
//! confluence; `redexes` reports every rule that fires at every position, in
//! a deterministic order (preorder position, then rule-table order).

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

/// Name of a reduction rule, drawn from a fixed per-calculus table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleLabel(pub &'static str);

impl fmt::Display for RuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// Position of a subterm: child selectors from the root (empty = root).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// This path with `i` prepended; used when lifting a redex found in a
    /// child up to its parent.
    pub fn prefixed(&self, i: usize) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(i);
        v.extend_from_slice(&self.0);
        Path(v)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}", i)?;
        }
        Ok(())
    }
}

/// Tree interface the kernel walks. Multi-sorted calculi implement this on a
/// node enum covering all their syntactic categories, so redexes inside
/// substitutions are reachable by ordinary child paths.
pub trait TermLike: Clone + Eq + Hash + fmt::Display {
    fn children(&self) -> Vec<Self>;

    /// Rebuild this node with child `idx` replaced. Panics on a bad index;
    /// callers only use indices obtained from `children`.
    fn with_child(&self, idx: usize, child: Self) -> Self;

    fn subterm(&self, path: &Path) -> Option<Self> {
        let mut cur = self.clone();
        for &i in &path.0 {
            cur = cur.children().into_iter().nth(i)?;
        }
        Some(cur)
    }

    fn replace_at(&self, path: &Path, new: Self) -> Option<Self> {
        fn go<T: TermLike>(t: &T, steps: &[usize], new: T) -> Option<T> {
            match steps.split_first() {
                None => Some(new),
                Some((&i, rest)) => {
                    let child = t.children().into_iter().nth(i)?;
                    let rebuilt = go(&child, rest, new)?;
                    Some(t.with_child(i, rebuilt))
                }
            }
        }
        go(self, &path.0, new)
    }

    /// Node count. Calculi whose annotations carry weight (weakening sets)
    /// override this.
    fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

/// One-step rewrite record. `after` is the whole term with the subterm at
/// `at` contracted by `rule`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep<T> {
    pub rule: RuleLabel,
    pub at: Path,
    pub before: T,
    pub after: T,
}

/// A reduction sequence from `start`; each step's `before` is the previous
/// step's `after`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace<T> {
    pub start: T,
    pub steps: Vec<ReductionStep<T>>,
}

impl<T: Clone> Trace<T> {
    pub fn empty(start: T) -> Self {
        Trace { start, steps: Vec::new() }
    }

    pub fn end(&self) -> &T {
        self.steps.last().map(|s| &s.after).unwrap_or(&self.start)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn rules(&self) -> Vec<RuleLabel> {
        self.steps.iter().map(|s| s.rule).collect()
    }
}

/// A (rule, path) pair to be replayed; witness constructions are assembled
/// from these and validated by actually rewriting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepInstr {
    pub rule: RuleLabel,
    pub at: Path,
}

impl StepInstr {
    pub fn new(rule: RuleLabel, at: Path) -> Self {
        StepInstr { rule, at }
    }

    pub fn prefixed(&self, i: usize) -> Self {
        StepInstr { rule: self.rule, at: self.at.prefixed(i) }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("no {rule} redex at path {at}")]
    NoSuchRedex { rule: RuleLabel, at: Path },
    #[error("path {0} does not address a subterm")]
    BadPath(Path),
    #[error("step {index}: trace mismatch: {reason}")]
    TraceMismatch { index: usize, reason: String },
    #[error("rule {0} is not in this system's rule table")]
    UnknownRule(RuleLabel),
}

/// Per-calculus bundle: rule table, root-redex matcher, canonicalizer.
///
/// `root` must return every rule instance whose redex is the given node
/// itself, in rule-table order. `canon` maps a term to its equality
/// representative (alpha-canonical form for named calculi, identity
/// otherwise).
pub struct RewriteSystem<T: TermLike> {
    pub name: &'static str,
    pub rules: Vec<RuleLabel>,
    root: fn(&T) -> Vec<(RuleLabel, T)>,
    canon: fn(&T) -> T,
}

impl<T: TermLike> RewriteSystem<T> {
    pub fn new(
        name: &'static str,
        rules: Vec<RuleLabel>,
        root: fn(&T) -> Vec<(RuleLabel, T)>,
        canon: fn(&T) -> T,
    ) -> Self {
        RewriteSystem { name, rules, root, canon }
    }

    pub fn canon(&self, t: &T) -> T {
        (self.canon)(t)
    }

    pub fn equal(&self, a: &T, b: &T) -> bool {
        (self.canon)(a) == (self.canon)(b)
    }

    pub fn has_rule(&self, rule: RuleLabel) -> bool {
        self.rules.contains(&rule)
    }

    /// Rule instances rooted at this node, in rule-table order, with
    /// unregistered labels rejected loudly.
    fn root_redexes(&self, t: &T) -> Vec<(RuleLabel, T)> {
        let found = (self.root)(t);
        debug_assert!(found.iter().all(|(r, _)| self.has_rule(*r)));
        found
    }
}

fn allowed(restrict: Option<&[RuleLabel]>, rule: RuleLabel) -> bool {
    restrict.map_or(true, |rs| rs.contains(&rule))
}

/// Every one-step reduct of `t`, optionally restricted to a rule subset.
/// Order: preorder position, then rule-table order at each position.
pub fn redexes<T: TermLike>(
    sys: &RewriteSystem<T>,
    t: &T,
    restrict: Option<&[RuleLabel]>,
) -> Vec<(RuleLabel, Path, T)> {
    let mut out = Vec::new();
    collect(sys, t, restrict, t, &mut Vec::new(), &mut out);
    out
}

fn collect<T: TermLike>(
    sys: &RewriteSystem<T>,
    whole: &T,
    restrict: Option<&[RuleLabel]>,
    node: &T,
    at: &mut Vec<usize>,
    out: &mut Vec<(RuleLabel, Path, T)>,
) {
    for (rule, contractum) in sys.root_redexes(node) {
        if allowed(restrict, rule) {
            let path = Path(at.clone());
            let after = whole
                .replace_at(&path, contractum)
                .expect("redex path addresses a subterm");
            out.push((rule, path, after));
        }
    }
    for (i, child) in node.children().into_iter().enumerate() {
        at.push(i);
        collect(sys, whole, restrict, &child, at, out);
        at.pop();
    }
}

/// Contract the `rule` redex at `path`, if it is there.
pub fn apply_rule_at<T: TermLike>(
    sys: &RewriteSystem<T>,
    t: &T,
    rule: RuleLabel,
    path: &Path,
) -> Result<T, KernelError> {
    let node = t.subterm(path).ok_or_else(|| KernelError::BadPath(path.clone()))?;
    for (r, contractum) in sys.root_redexes(&node) {
        if r == rule {
            return t
                .replace_at(path, contractum)
                .ok_or_else(|| KernelError::BadPath(path.clone()));
        }
    }
    Err(KernelError::NoSuchRedex { rule, at: path.clone() })
}

/// Replay (rule, path) instructions from `start`, failing if any instruction
/// does not name an actual redex.
pub fn replay<T: TermLike>(
    sys: &RewriteSystem<T>,
    start: &T,
    instrs: &[StepInstr],
) -> Result<Trace<T>, KernelError> {
    let mut trace = Trace::empty(start.clone());
    let mut cur = start.clone();
    for instr in instrs {
        let after = apply_rule_at(sys, &cur, instr.rule, &instr.at)?;
        trace.steps.push(ReductionStep {
            rule: instr.rule,
            at: instr.at.clone(),
            before: cur.clone(),
            after: after.clone(),
        });
        cur = after;
    }
    Ok(trace)
}

/// Check a trace step by step through single-position rewriting. `restrict`
/// additionally pins the allowed rules (e.g. expansion traces must be
/// Beta-only).
pub fn validate_trace<T: TermLike>(
    sys: &RewriteSystem<T>,
    trace: &Trace<T>,
    restrict: Option<&[RuleLabel]>,
) -> Result<(), KernelError> {
    let mut cur = trace.start.clone();
    for (index, step) in trace.steps.iter().enumerate() {
        if step.before != cur {
            return Err(KernelError::TraceMismatch {
                index,
                reason: format!("before-term differs from previous result: {}", step.before),
            });
        }
        if !allowed(restrict, step.rule) {
            return Err(KernelError::TraceMismatch {
                index,
                reason: format!("rule {} not allowed here", step.rule),
            });
        }
        let after = apply_rule_at(sys, &cur, step.rule, &step.at).map_err(|e| {
            KernelError::TraceMismatch { index, reason: e.to_string() }
        })?;
        if after != step.after {
            return Err(KernelError::TraceMismatch {
                index,
                reason: format!("recorded after-term differs: {}", step.after),
            });
        }
        cur = after;
    }
    Ok(())
}

/// Result of fuel-bounded normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized<T> {
    Complete(T),
    FuelExhausted(T),
}

impl<T> Normalized<T> {
    pub fn term(&self) -> &T {
        match self {
            Normalized::Complete(t) | Normalized::FuelExhausted(t) => t,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, Normalized::Complete(_))
    }

    pub fn into_complete(self) -> Option<T> {
        match self {
            Normalized::Complete(t) => Some(t),
            Normalized::FuelExhausted(_) => None,
        }
    }
}

/// Repeatedly contract the first redex in deterministic order. The trace is
/// returned in both outcomes; on fuel exhaustion it is the partial trace.
pub fn normalize<T: TermLike>(
    sys: &RewriteSystem<T>,
    t: &T,
    restrict: Option<&[RuleLabel]>,
    fuel: usize,
) -> (Normalized<T>, Trace<T>) {
    let mut trace = Trace::empty(t.clone());
    let mut cur = t.clone();
    for _ in 0..fuel {
        let mut reds = redexes(sys, &cur, restrict);
        if reds.is_empty() {
            return (Normalized::Complete(cur), trace);
        }
        let (rule, at, after) = reds.remove(0);
        trace.steps.push(ReductionStep { rule, at, before: cur, after: after.clone() });
        cur = after;
    }
    if redexes(sys, &cur, restrict).is_empty() {
        (Normalized::Complete(cur), trace)
    } else {
        (Normalized::FuelExhausted(cur), trace)
    }
}

/// BFS over the restricted reduction graph modulo `sys.equal`; returns a
/// shortest trace from `from` to `to` if one exists within `max_depth`.
pub fn reachable<T: TermLike>(
    sys: &RewriteSystem<T>,
    from: &T,
    to: &T,
    restrict: Option<&[RuleLabel]>,
    max_depth: usize,
) -> Option<Trace<T>> {
    let target = sys.canon(to);
    bfs_search(sys, from, |t| sys.canon(t) == target, restrict, max_depth)
}

/// BFS for the nearest reduct satisfying `found`, the trace-producing core
/// of both `reachable` and the simulation searches.
pub fn bfs_search<T: TermLike>(
    sys: &RewriteSystem<T>,
    from: &T,
    found: impl Fn(&T) -> bool,
    restrict: Option<&[RuleLabel]>,
    max_depth: usize,
) -> Option<Trace<T>> {
    if found(from) {
        return Some(Trace::empty(from.clone()));
    }
    // visited set keyed by canonical form, nodes carry parent links
    let mut seen: HashMap<T, usize> = HashMap::new();
    let mut nodes: Vec<(T, Option<(usize, ReductionStep<T>)>)> = Vec::new();
    seen.insert(sys.canon(from), 0);
    nodes.push((from.clone(), None));
    let mut frontier = vec![0usize];
    for _ in 0..max_depth {
        let mut next = Vec::new();
        for &idx in &frontier {
            let term = nodes[idx].0.clone();
            for (rule, at, after) in redexes(sys, &term, restrict) {
                let key = sys.canon(&after);
                if seen.contains_key(&key) {
                    continue;
                }
                let step = ReductionStep { rule, at, before: term.clone(), after: after.clone() };
                nodes.push((after.clone(), Some((idx, step))));
                let new_idx = nodes.len() - 1;
                seen.insert(key, new_idx);
                if found(&nodes[new_idx].0) {
                    return Some(unwind(from, &nodes, new_idx));
                }
                next.push(new_idx);
            }
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}

/// Search for a simulating reduct of `u`. With `strict` rules given, the
/// simulant must be an exactly-one-step reduct by one of those rules;
/// otherwise any reduct within `max_depth` steps (including `u` itself)
/// qualifies.
pub fn search_simulant<T: TermLike>(
    sys: &RewriteSystem<T>,
    u: &T,
    target: impl Fn(&T) -> bool,
    strict: Option<&[RuleLabel]>,
    max_depth: usize,
) -> Option<Trace<T>> {
    match strict {
        Some(rules) => {
            for (rule, at, after) in redexes(sys, u, Some(rules)) {
                if target(&after) {
                    let step = ReductionStep { rule, at, before: u.clone(), after };
                    return Some(Trace { start: u.clone(), steps: vec![step] });
                }
            }
            None
        }
        None => bfs_search(sys, u, target, None, max_depth),
    }
}

/// A pair (witness, trace) certifying an initialization lemma: the trace
/// runs from the expansion of some `t` to `witness`, and `witness` relates
/// to `t` by the calculus's simulation order.
#[derive(Debug, Clone)]
pub struct LessdotWitness<T> {
    pub witness: T,
    pub trace: Trace<T>,
}

fn unwind<T: TermLike>(
    from: &T,
    nodes: &[(T, Option<(usize, ReductionStep<T>)>)],
    mut idx: usize,
) -> Trace<T> {
    let mut steps = Vec::new();
    while let Some((parent, step)) = &nodes[idx].1 {
        steps.push(step.clone());
        idx = *parent;
    }
    steps.reverse();
    Trace { start: from.clone(), steps }
}

/// Verdict of the bounded SN oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SnVerdict<T> {
    /// The whole reduction graph was exhausted; no path exceeds `max_depth`
    /// and no term repeats along a path.
    ProvedSn { max_depth: usize },
    /// The search gave up. `loop_witness`, when present, is a nonempty trace
    /// from some reachable term back to itself: concrete proof of a cycle.
    BudgetExhausted { visited: usize, loop_witness: Option<Trace<T>> },
}

impl<T> SnVerdict<T> {
    pub fn is_proved(&self) -> bool {
        matches!(self, SnVerdict::ProvedSn { .. })
    }
}

/// Exhaustive DFS of the reduction graph with on-path cycle detection,
/// staged by iterative deepening so short cycles are found even when a
/// sibling branch grows without bound. `budget` caps the number of node
/// expansions; exhaustion is reported as such, never interpreted as non-SN.
pub fn is_sn<T: TermLike>(sys: &RewriteSystem<T>, t: &T, budget: usize) -> SnVerdict<T> {
    struct Dfs<'a, T: TermLike> {
        sys: &'a RewriteSystem<T>,
        // depths of subtrees whose graphs were fully exhausted
        memo: HashMap<T, usize>,
        on_path: HashMap<T, usize>,
        trail: Vec<ReductionStep<T>>,
        visited: usize,
        budget: usize,
        loop_witness: Option<Trace<T>>,
    }

    enum Outcome {
        /// Whole subtree exhausted; longest path has this many steps.
        Exhausted(usize),
        /// Some branch was cut off at the depth limit.
        HitLimit,
        /// Cycle found or budget exceeded.
        GaveUp,
    }

    impl<'a, T: TermLike> Dfs<'a, T> {
        fn go(&mut self, t: &T, depth: usize, limit: usize) -> Outcome {
            let key = self.sys.canon(t);
            if let Some(&d) = self.memo.get(&key) {
                return Outcome::Exhausted(d);
            }
            if let Some(&at) = self.on_path.get(&key) {
                // Cycle: the trail from its first occurrence closes a loop.
                let steps: Vec<_> = self.trail[at..].to_vec();
                let start =
                    steps.first().map(|s| s.before.clone()).unwrap_or_else(|| t.clone());
                self.loop_witness = Some(Trace { start, steps });
                return Outcome::GaveUp;
            }
            self.visited += 1;
            if self.visited > self.budget {
                return Outcome::GaveUp;
            }
            let reds = redexes(self.sys, t, None);
            if reds.is_empty() {
                self.memo.insert(key, 0);
                return Outcome::Exhausted(0);
            }
            if depth >= limit {
                return Outcome::HitLimit;
            }
            self.on_path.insert(key.clone(), self.trail.len());
            let mut max_depth = 0usize;
            let mut hit_limit = false;
            for (rule, at, after) in reds {
                self.trail.push(ReductionStep {
                    rule,
                    at,
                    before: t.clone(),
                    after: after.clone(),
                });
                let sub = self.go(&after, depth + 1, limit);
                self.trail.pop();
                match sub {
                    Outcome::Exhausted(d) => max_depth = max_depth.max(1 + d),
                    Outcome::HitLimit => hit_limit = true,
                    Outcome::GaveUp => {
                        self.on_path.remove(&key);
                        return Outcome::GaveUp;
                    }
                }
            }
            self.on_path.remove(&key);
            if hit_limit {
                Outcome::HitLimit
            } else {
                self.memo.insert(key, max_depth);
                Outcome::Exhausted(max_depth)
            }
        }
    }

    let mut dfs = Dfs {
        sys,
        memo: HashMap::new(),
        on_path: HashMap::new(),
        trail: Vec::new(),
        visited: 0,
        budget,
        loop_witness: None,
    };
    let mut limit = 4usize;
    loop {
        match dfs.go(t, 0, limit) {
            Outcome::Exhausted(d) => return SnVerdict::ProvedSn { max_depth: d },
            Outcome::GaveUp => {
                return SnVerdict::BudgetExhausted {
                    visited: dfs.visited,
                    loop_witness: dfs.loop_witness,
                }
            }
            Outcome::HitLimit => {
                if dfs.visited >= dfs.budget {
                    return SnVerdict::BudgetExhausted {
                        visited: dfs.visited,
                        loop_witness: dfs.loop_witness,
                    };
                }
                limit *= 2;
            }
        }
    }
}

/// All reduction paths of length <= `max_len` from `t`, as traces. Used to
/// drive simulation chains along every branch of the (non-confluent)
/// reduction graph.
pub fn all_paths<T: TermLike>(
    sys: &RewriteSystem<T>,
    t: &T,
    restrict: Option<&[RuleLabel]>,
    max_len: usize,
) -> Vec<Trace<T>> {
    let mut out = Vec::new();
    let mut steps = Vec::new();
    fn go<T: TermLike>(
        sys: &RewriteSystem<T>,
        root: &T,
        cur: &T,
        restrict: Option<&[RuleLabel]>,
        left: usize,
        steps: &mut Vec<ReductionStep<T>>,
        out: &mut Vec<Trace<T>>,
    ) {
        out.push(Trace { start: root.clone(), steps: steps.clone() });
        if left == 0 {
            return;
        }
        for (rule, at, after) in redexes(sys, cur, restrict) {
            steps.push(ReductionStep { rule, at, before: cur.clone(), after: after.clone() });
            go(sys, root, &after, restrict, left - 1, steps, out);
            steps.pop();
        }
    }
    go(sys, t, t, restrict, max_len, &mut steps, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // Tiny test calculus: unary numbers with a "pred" rule and a looping
    // "spin" rule on a marked node.
    #[derive(Debug, Clone, PartialEq, Eq, Hash)]
    enum Toy {
        Zero,
        Succ(Box<Toy>),
        Spin,
    }

    impl fmt::Display for Toy {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match self {
                Toy::Zero => f.write_str("0"),
                Toy::Succ(t) => write!(f, "S{}", t),
                Toy::Spin => f.write_str("spin"),
            }
        }
    }

    impl TermLike for Toy {
        fn children(&self) -> Vec<Self> {
            match self {
                Toy::Succ(t) => vec![(**t).clone()],
                _ => vec![],
            }
        }
        fn with_child(&self, idx: usize, child: Self) -> Self {
            match (self, idx) {
                (Toy::Succ(_), 0) => Toy::Succ(Box::new(child)),
                _ => panic!("bad child index"),
            }
        }
    }

    const PRED: RuleLabel = RuleLabel("Pred");
    const SPIN: RuleLabel = RuleLabel("Spin");

    fn toy_root(t: &Toy) -> Vec<(RuleLabel, Toy)> {
        match t {
            Toy::Succ(inner) => vec![(PRED, (**inner).clone())],
            Toy::Spin => vec![(SPIN, Toy::Spin)],
            Toy::Zero => vec![],
        }
    }

    fn sys() -> RewriteSystem<Toy> {
        RewriteSystem::new("toy", vec![PRED, SPIN], toy_root, |t| t.clone())
    }

    fn num(n: usize) -> Toy {
        (0..n).fold(Toy::Zero, |t, _| Toy::Succ(Box::new(t)))
    }

    #[test]
    fn redexes_are_preorder() {
        let s = sys();
        let t = num(2);
        let reds = redexes(&s, &t, None);
        assert_eq!(reds.len(), 2);
        assert_eq!(reds[0].1, Path::root());
        assert_eq!(reds[1].1, Path(vec![0]));
    }

    #[test]
    fn normalize_counts_down() {
        let s = sys();
        let (n, trace) = normalize(&s, &num(3), None, 10);
        assert_eq!(n, Normalized::Complete(Toy::Zero));
        assert_eq!(trace.len(), 3);
        validate_trace(&s, &trace, None).unwrap();
    }

    #[test]
    fn normalize_fuel_zero_on_normal_form() {
        let s = sys();
        let (n, trace) = normalize(&s, &Toy::Zero, None, 0);
        assert_eq!(n, Normalized::Complete(Toy::Zero));
        assert!(trace.is_empty());
    }

    #[test]
    fn normalize_fuel_exhaustion() {
        let s = sys();
        let (n, trace) = normalize(&s, &num(5), None, 2);
        assert!(matches!(n, Normalized::FuelExhausted(_)));
        assert_eq!(trace.len(), 2);
    }

    #[test]
    fn reachable_finds_shortest() {
        let s = sys();
        let tr = reachable(&s, &num(3), &num(1), None, 5).unwrap();
        assert_eq!(tr.len(), 2);
        assert_eq!(tr.end(), &num(1));
    }

    #[test]
    fn reachable_self_is_empty_trace() {
        let s = sys();
        let tr = reachable(&s, &num(2), &num(2), None, 0).unwrap();
        assert!(tr.is_empty());
    }

    #[test]
    fn is_sn_depth() {
        let s = sys();
        assert_eq!(is_sn(&s, &num(4), 100), SnVerdict::ProvedSn { max_depth: 4 });
        assert_eq!(is_sn(&s, &Toy::Zero, 100), SnVerdict::ProvedSn { max_depth: 0 });
    }

    #[test]
    fn is_sn_detects_loop() {
        let s = sys();
        match is_sn(&s, &Toy::Succ(Box::new(Toy::Spin)), 100) {
            SnVerdict::BudgetExhausted { loop_witness: Some(w), .. } => {
                assert!(!w.is_empty());
                assert_eq!(&w.start, w.end());
                validate_trace(&s, &w, None).unwrap();
            }
            v => panic!("expected loop witness, got {:?}", v),
        }
    }

    #[test]
    fn validate_rejects_corrupted_step() {
        let s = sys();
        let (_, mut trace) = normalize(&s, &num(3), None, 10);
        trace.steps[1].after = num(7);
        assert!(validate_trace(&s, &trace, None).is_err());
    }

    #[test]
    fn apply_rule_at_misses() {
        let s = sys();
        let err = apply_rule_at(&s, &Toy::Zero, PRED, &Path::root()).unwrap_err();
        assert!(matches!(err, KernelError::NoSuchRedex { .. }));
    }
}
