//! Rule-based transformations: path matching, maximal non-intersecting
//! selection of occurrences, and substitution.

use std::rc::Rc;

use rand::seq::SliceRandom;

use crate::collections::{Collection, Position, Value};
use crate::error::RuntimeError;
use crate::eval::{Binding, Env, Evaluator, TransValue};
use crate::syntax::{ElemPattern, Link, Pattern, PatternItem, Rule};
use crate::types::BaseTopo;

/// Order in which anchor positions are tried for each rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Rules in textual order, anchors in canonical position order.
    #[default]
    Priority,
    /// Rules in textual order, anchors shuffled by a generator seeded with the value.
    Random(u64),
}

/// What a pattern variable matched.
#[derive(Debug, Clone)]
pub enum Bound {
    One { value: Value, position: Position },
    Star { values: Vec<Value>, positions: Vec<Position> },
}

#[derive(Debug, Clone)]
pub struct Occurrence {
    pub rule: usize,
    /// Matched positions in path order.
    pub positions: Vec<Position>,
    pub bindings: Vec<(String, Bound)>,
}

#[derive(Debug, Clone, Default)]
pub struct MatchSelection {
    pub occurrences: Vec<Occurrence>,
}

impl MatchSelection {
    /// Each position of the collection is covered by exactly one occurrence.
    pub fn is_partition(&self, len: usize) -> bool {
        let mut seen = vec![false; len];
        for p in self.occurrences.iter().flat_map(|o| &o.positions) {
            if p.0 >= len || seen[p.0] {
                return false;
            }
            seen[p.0] = true;
        }
        seen.into_iter().all(|s| s)
    }
}

/// Positions of a match in path order, with the variable bindings.
pub type Match = (Vec<Position>, Vec<(String, Bound)>);

/// Constraint on the next position consumed by a path.
#[derive(Debug, Clone, Copy)]
enum Step {
    Anchor(Position),
    From(Position, Link),
    Impossible,
}

fn merge_links(a: Link, b: Link) -> Option<Link> {
    match (a, b) {
        (Link::Comma, l) | (l, Link::Comma) => Some(l),
        (Link::Direction(d1), Link::Direction(d2)) => (d1 == d2).then_some(a),
    }
}

/// Step into the element after a star that consumed nothing.
fn skip_star(pending: Step, next: Option<Link>) -> Step {
    match (pending, next) {
        (Step::From(p, l1), Some(l2)) => match merge_links(l1, l2) {
            Some(l) => Step::From(p, l),
            None => Step::Impossible,
        },
        (other, _) => other,
    }
}

pub(crate) fn bound_env(base: &Env, source: &Rc<Collection>, bindings: &[(String, Bound)]) -> Env {
    let mut env = base.clone();
    for (name, b) in bindings {
        env = match b {
            Bound::One { value, position } => env.bind(
                name.clone(),
                Binding::Located { value: value.clone(), position: *position, source: source.clone() },
            ),
            Bound::Star { values, .. } => env.with_value(name.clone(), Value::coll(Collection::Seq(values.clone()))),
        };
    }
    env
}

struct Matcher<'a> {
    ev: &'a mut Evaluator,
    coll: &'a Rc<Collection>,
    items: &'a [PatternItem],
    env: &'a Env,
    free: Vec<bool>,
    path: Vec<Position>,
    bindings: Vec<(String, Bound)>,
}

impl Matcher<'_> {
    fn candidates(&self, step: Step) -> Result<Vec<Position>, RuntimeError> {
        let raw = match step {
            Step::Impossible => Vec::new(),
            Step::Anchor(p) => vec![p],
            Step::From(p, Link::Comma) => {
                if self.coll.topology() == BaseTopo::Seq {
                    // right neighbor first
                    let mut c = Vec::with_capacity(2);
                    if p.0 + 1 < self.coll.len() {
                        c.push(Position(p.0 + 1));
                    }
                    if p.0 > 0 {
                        c.push(Position(p.0 - 1));
                    }
                    c
                } else {
                    self.coll.neighbors(p)?
                }
            }
            Step::From(p, Link::Direction(d)) => self.coll.direction_step(p, d)?.into_iter().collect(),
        };
        Ok(raw.into_iter().filter(|q| self.free[q.0]).collect())
    }

    fn next_link(&self, j: usize) -> Option<Link> {
        self.items.get(j + 1).and_then(|i| i.link)
    }

    fn after(&self, j: usize, last: Position) -> Step {
        match self.next_link(j) {
            Some(l) => Step::From(last, l),
            None => Step::Impossible,
        }
    }

    fn extend(&mut self, j: usize, pending: Step) -> Result<bool, RuntimeError> {
        let Some(item) = self.items.get(j) else {
            return Ok(!self.path.is_empty());
        };
        match &item.elem {
            ElemPattern::Plain(name) | ElemPattern::Guarded(name, _) => {
                for q in self.candidates(pending)? {
                    self.take(q);
                    let value = self.coll.get(q)?.clone();
                    self.bindings.push((name.clone(), Bound::One { value, position: q }));
                    let ok = match item.elem.guard() {
                        Some(g) => {
                            let env = bound_env(self.env, self.coll, &self.bindings);
                            self.ev.eval(&env, g)?.as_bool()?
                        }
                        None => true,
                    };
                    if ok && self.extend(j + 1, self.after(j, q))? {
                        return Ok(true);
                    }
                    self.bindings.pop();
                    self.release(q);
                }
                Ok(false)
            }
            ElemPattern::Star(name) => {
                let budget = self.free.iter().filter(|f| **f).count();
                for len in 0..=budget {
                    if self.star(j, name, len, pending, 0)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    /// Tries every simple path of exactly `len` positions for the star at `j`.
    fn star(&mut self, j: usize, name: &str, len: usize, pending: Step, taken: usize) -> Result<bool, RuntimeError> {
        if taken == len {
            let positions = self.path[self.path.len() - len..].to_vec();
            let values = positions.iter().map(|p| self.coll.get(*p).cloned()).collect::<Result<_, _>>()?;
            let next = match positions.last() {
                Some(last) => self.after(j, *last),
                None => skip_star(pending, self.next_link(j)),
            };
            self.bindings.push((name.to_string(), Bound::Star { values, positions }));
            if self.extend(j + 1, next)? {
                return Ok(true);
            }
            self.bindings.pop();
            return Ok(false);
        }
        let step = if taken == 0 { pending } else { Step::From(*self.path.last().unwrap(), Link::Comma) };
        for q in self.candidates(step)? {
            self.take(q);
            if self.star(j, name, len, pending, taken + 1)? {
                return Ok(true);
            }
            self.release(q);
        }
        Ok(false)
    }

    fn take(&mut self, q: Position) {
        self.free[q.0] = false;
        self.path.push(q);
    }

    fn release(&mut self, q: Position) {
        self.free[q.0] = true;
        self.path.pop();
    }
}

/// First occurrence of `pattern` anchored at `start` that only uses positions
/// marked available. `env` must already bind `self`.
pub fn match_rule(
    ev: &mut Evaluator,
    coll: &Rc<Collection>,
    pattern: &Pattern,
    env: &Env,
    available: &[bool],
    start: Position,
) -> Result<Option<Match>, RuntimeError> {
    let mut m = Matcher {
        ev,
        coll,
        items: &pattern.items,
        env,
        free: available.to_vec(),
        path: Vec::new(),
        bindings: Vec::new(),
    };
    if m.extend(0, Step::Anchor(start))? {
        Ok(Some((m.path, m.bindings)))
    } else {
        Ok(None)
    }
}

/// Greedy maximal selection: each rule in turn claims every occurrence it can
/// find among the still-unclaimed positions; the final default rule takes the rest.
pub fn select_occurrences(
    ev: &mut Evaluator,
    coll: &Rc<Collection>,
    rules: &[Rule],
    env: &Env,
) -> Result<MatchSelection, RuntimeError> {
    let mut available = vec![true; coll.len()];
    let mut occurrences = Vec::new();
    let Some((default, guarded)) = rules.split_last() else {
        return Ok(MatchSelection::default());
    };
    for (i, rule) in guarded.iter().enumerate() {
        let mut anchors: Vec<Position> = coll.positions().collect();
        if let Strategy::Random(_) = ev.config.strategy {
            anchors.shuffle(&mut ev.rng);
        }
        for a in anchors {
            if !available[a.0] {
                continue;
            }
            if let Some((positions, bindings)) = match_rule(ev, coll, &rule.pattern, env, &available, a)? {
                for p in &positions {
                    available[p.0] = false;
                }
                occurrences.push(Occurrence { rule: i, positions, bindings });
            }
        }
    }
    let name = default.pattern.bare_var().unwrap_or("_").to_string();
    for p in coll.positions().filter(|p| available[p.0]) {
        let value = coll.get(p)?.clone();
        occurrences.push(Occurrence {
            rule: guarded.len(),
            positions: vec![p],
            bindings: vec![(name.clone(), Bound::One { value, position: p })],
        });
    }
    Ok(MatchSelection { occurrences })
}

/// One application of a transformation to a collection.
pub fn apply_transformation(
    ev: &mut Evaluator,
    t: &TransValue,
    coll: Rc<Collection>,
) -> Result<Collection, RuntimeError> {
    let env = t.env.with_value("self", Value::Coll(coll.clone()));
    let selection = select_occurrences(ev, &coll, &t.rules, &env)?;
    let mut replacements = Vec::with_capacity(selection.occurrences.len());
    for occ in &selection.occurrences {
        let body_env = bound_env(&env, &coll, &occ.bindings);
        let v = ev.eval(&body_env, &t.rules[occ.rule].body)?;
        let seq = match v.as_coll()?.as_ref() {
            Collection::Seq(vs) => vs.clone(),
            other => {
                return Err(RuntimeError::TypeMismatch(format!(
                    "rule body produced a {} instead of a sequence",
                    other.topology().name()
                )))
            }
        };
        replacements.push(seq);
    }
    substitute(&coll, &selection, replacements)
}

/// Builds the result collection from the selected occurrences and their
/// replacement sequences.
pub fn substitute(
    coll: &Collection,
    selection: &MatchSelection,
    replacements: Vec<Vec<Value>>,
) -> Result<Collection, RuntimeError> {
    if let Collection::Grid { rows, cols, cells } = coll {
        let mut cells = cells.clone();
        for (occ, repl) in selection.occurrences.iter().zip(replacements) {
            if repl.len() != occ.positions.len() {
                return Err(RuntimeError::Structural {
                    matched: occ.positions.len(),
                    replacement: repl.len(),
                    rows: *rows,
                    cols: *cols,
                });
            }
            for (p, v) in occ.positions.iter().zip(repl) {
                cells[p.0] = v;
            }
        }
        return Collection::grid(*rows, *cols, cells);
    }
    let n = coll.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (i, occ) in selection.occurrences.iter().enumerate() {
        let first = occ.positions.iter().min().expect("occurrences are non-empty");
        owner[first.0] = Some(i);
    }
    let mut replacements: Vec<Option<Vec<Value>>> = replacements.into_iter().map(Some).collect();
    let mut out = Vec::with_capacity(n);
    for slot in owner.into_iter().flatten() {
        out.extend(replacements[slot].take().unwrap_or_default());
    }
    match coll.topology() {
        BaseTopo::Seq => Ok(Collection::Seq(out)),
        topo => Collection::from_values(topo, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::EvalConfig;
    use crate::syntax::parse_expr;

    fn run_with(strategy: Strategy, src: &str) -> Result<Value, RuntimeError> {
        let mut ev = Evaluator::new(EvalConfig { strategy, ..EvalConfig::default() });
        ev.eval(&Env::new(), &parse_expr(src).unwrap())
    }

    fn show(src: &str) -> String {
        run_with(Strategy::Priority, src).unwrap_or_else(|e| panic!("{src}: {e}")).to_string()
    }

    #[test]
    fn identity_transformation() {
        assert_eq!(show("trans [ x => [x] ] (1::2::3::empty_seq)"), "(1::2::3::empty_seq)");
        assert_eq!(show("trans [ x => [x] ] empty_seq"), "empty_seq");
    }

    #[test]
    fn deletion_and_duplication() {
        assert_eq!(show("trans [ x/(x = 2) => empty_seq ; y => [y] ] (1::2::3::empty_seq)"), "(1::3::empty_seq)");
        assert_eq!(show("trans [ x => x :: x :: empty_seq ] (1::2::empty_seq)"), "(1::1::2::2::empty_seq)");
    }

    #[test]
    fn pairs_are_disjoint() {
        // every occurrence of `x, y` takes two elements
        assert_eq!(show("trans [ x, y => [x + y] ; z => [z] ] (1::2::3::4::5::empty_seq)"), "(3::7::5::empty_seq)");
    }

    #[test]
    fn comma_prefers_the_right_neighbor() {
        assert_eq!(
            show("trans [ x, y/(y < x) => y :: x :: empty_seq ; z => [z] ] (1::3::2::empty_seq)"),
            "(1::2::3::empty_seq)"
        );
    }

    #[test]
    fn sets_rebuild_without_duplicates() {
        assert_eq!(show("trans [ x => [x mod 2] ] (1::2::3::empty_set)"), "{1, 0}set");
        assert_eq!(show("trans [ x => [x mod 2] ] (1::2::3::empty_bag)"), "{1, 1, 0}bag");
    }

    #[test]
    fn star_matches_the_shortest_segment() {
        assert_eq!(
            show("trans [ x/(x = 0), * as s, y/(y = 0) => [size s] ; z => [z] ] (0::5::6::0::9::empty_seq)"),
            "(2::9::empty_seq)"
        );
        assert_eq!(
            show("trans [ x/(x = 1), * as s, y/(y = 2) => [size s] ; z => [z] ] (1::2::empty_seq)"),
            "(0::empty_seq)"
        );
    }

    #[test]
    fn directional_links() {
        assert_eq!(show("trans [ x |right> y => [x * 10 + y] ; z => [z] ] (1::2::3::empty_seq)"), "(12::3::empty_seq)");
        // `x |left> y` puts y before x, the replacement goes to the leftmost position
        assert_eq!(show("trans [ x |left> y => [x * 10 + y] ; z => [z] ] (1::2::3::empty_seq)"), "(21::3::empty_seq)");
    }

    #[test]
    fn grid_rewrites_in_place() {
        let src = "rows (trans [ x |south> y/(y > x) => y :: x :: empty_seq ; z => [z] ] \
                   (grid_from_rows ((1::5::empty_seq)::(2::0::empty_seq)::empty_seq)))";
        assert_eq!(show(src), "((2::5::empty_seq)::(1::0::empty_seq)::empty_seq)");
    }

    #[test]
    fn grid_replacement_length_must_match() {
        let src = "trans [ x => empty_seq ] (grid_from_rows ((1::2::empty_seq)::empty_seq))";
        let err = run_with(Strategy::Priority, src).unwrap_err();
        assert_eq!(err, RuntimeError::Structural { matched: 1, replacement: 0, rows: 1, cols: 2 });
        assert_eq!(
            err.to_string(),
            "structural error: pattern matched 1 positions, replacement has 0 elements (grid 1x2)"
        );
    }

    #[test]
    fn self_is_the_collection_before_the_pass() {
        assert_eq!(show("trans [ x => [size self] ] (7::8::9::empty_seq)"), "(3::3::3::empty_seq)");
    }

    #[test]
    fn random_strategy_is_reproducible() {
        let src = "trans [ x, y => [x * 10 + y] ; z => [z] ] (1::2::3::4::5::6::7::empty_seq)";
        let a = run_with(Strategy::Random(7), src).unwrap();
        let b = run_with(Strategy::Random(7), src).unwrap();
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn selection_is_a_partition() {
        let mut ev = Evaluator::default();
        let coll = Rc::new(Collection::Seq((1..=9).map(Value::Int).collect()));
        let e = parse_expr("trans [ x, y/(x < y) => [x] ; z => [z] ]").unwrap();
        let Value::Trans(t) = ev.eval(&Env::new(), &e).unwrap() else { unreachable!() };
        let env = t.env.with_value("self", Value::Coll(coll.clone()));
        let sel = select_occurrences(&mut ev, &coll, &t.rules, &env).unwrap();
        assert!(sel.is_partition(9));
        assert_eq!(sel.occurrences.iter().filter(|o| o.rule == 0).count(), 4);
    }

    #[test]
    fn impossible_direction_pair_around_empty_star() {
        let src = "trans [ x/(x = 1) |right> * as s |left> y => [0] ; z => [z] ] (1::2::empty_seq)";
        assert_eq!(show(src), "(1::2::empty_seq)");
    }

    fn first_match(values: &[i64], pattern: &str) -> Option<Match> {
        let coll = Rc::new(Collection::Seq(values.iter().map(|v| Value::Int(*v)).collect()));
        let pattern = crate::syntax::parse_pattern(pattern).unwrap();
        let env = Env::new().with_value("self", Value::Coll(coll.clone()));
        let mut ev = Evaluator::default();
        match_rule(&mut ev, &coll, &pattern, &env, &vec![true; values.len()], Position(0)).unwrap()
    }

    #[test]
    fn match_rule_binds_pairs() {
        let (positions, bindings) = first_match(&[3, 1], "x, y/(y<x)").unwrap();
        assert_eq!(positions, vec![Position(0), Position(1)]);
        assert_eq!(bindings[0].0, "x");
        assert!(matches!(bindings[1].1, Bound::One { value: Value::Int(1), position: Position(1) }));
        assert!(first_match(&[1, 3], "x, y/(y<x)").is_none());
    }

    #[test]
    fn match_rule_star_reaches_the_other_zero() {
        let (positions, bindings) = first_match(&[0, 5, 5, 0], "x/(x=0), * as y, z/(z=0)").unwrap();
        assert_eq!(positions, (0..4).map(Position).collect::<Vec<_>>());
        match &bindings[1].1 {
            Bound::Star { values, .. } => assert_eq!(values.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn neighbor_pairs_keep_the_left_element() {
        assert_eq!(
            show("trans [ l, x => (l :: l+x :: empty_seq) ; x=>[x] ] (1::2::3::4::empty_seq)"),
            "(1::3::3::7::empty_seq)"
        );
    }
}
