//! Generators and reference implementations shared by the integration tests.
//! Nothing here calls into the matcher or the unifier.

#![allow(dead_code)]

use std::rc::Rc;

use rand::Rng;
use tml_core::collections::{Collection, Value};
use tml_core::error::RuntimeError;
use tml_core::eval::{Env, EvalConfig, Evaluator};
use tml_core::syntax::{parse_expr, Direction, ExprKind, Rule};
use tml_core::transform::{select_occurrences, MatchSelection, Strategy};
use tml_core::types::{BaseTopo, RVar, Substitution, TVar, Topology, Type};

pub fn eval_with(config: EvalConfig, src: &str) -> Result<Value, RuntimeError> {
    let e = parse_expr(src).unwrap_or_else(|err| panic!("{src}: {err}"));
    Evaluator::new(config).eval(&Env::new(), &e)
}

pub fn eval(src: &str) -> Result<Value, RuntimeError> {
    eval_with(EvalConfig::default(), src)
}

pub fn ints(v: &Value) -> Vec<i64> {
    v.as_coll().unwrap().values().iter().map(|x| x.as_int().unwrap()).collect()
}

pub fn int_literal(x: i64) -> String {
    if x < 0 {
        format!("(0 - {})", x.unsigned_abs())
    } else {
        x.to_string()
    }
}

pub fn seq_literal(xs: &[i64]) -> String {
    let mut s: String = xs.iter().map(|x| format!("{} :: ", int_literal(*x))).collect();
    s.push_str("empty_seq");
    s
}

pub fn set_literal(xs: impl IntoIterator<Item = i64>) -> String {
    let mut s: String = xs.into_iter().map(|x| format!("{} :: ", int_literal(x))).collect();
    s.push_str("empty_set");
    s
}

pub fn is_prime(n: i64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Grid of booleans after letting every `true` fall to the bottom of its column.
pub fn gravity(rows: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let height = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut out = vec![vec![false; width]; height];
    for c in 0..width {
        let count = rows.iter().filter(|r| r[c]).count();
        for row in out.iter_mut().skip(height - count) {
            row[c] = true;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Random collections and patterns with a native model of their guards.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Seq,
    Set,
    Bag,
    Grid(usize, usize),
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub shape: Shape,
    pub values: Vec<i64>,
}

impl Sample {
    pub fn collection(&self) -> Collection {
        let vals = self.values.iter().map(|v| Value::Int(*v));
        match self.shape {
            Shape::Seq => Collection::Seq(vals.collect()),
            Shape::Set => Collection::from_values(BaseTopo::Set, vals).unwrap(),
            Shape::Bag => Collection::from_values(BaseTopo::Bag, vals).unwrap(),
            Shape::Grid(r, c) => Collection::grid(r, c, vals.collect()).unwrap(),
        }
    }
}

pub fn random_sample(rng: &mut impl Rng) -> Sample {
    let shape = match rng.gen_range(0..4) {
        0 => Shape::Seq,
        1 => Shape::Set,
        2 => Shape::Bag,
        _ => {
            let r = rng.gen_range(1..=3);
            let c = rng.gen_range(1..=8 / r);
            Shape::Grid(r, c)
        }
    };
    let len = match shape {
        Shape::Grid(r, c) => r * c,
        _ => rng.gen_range(0..=8),
    };
    let values = (0..len).map(|_| rng.gen_range(0..6)).collect();
    Sample { shape, values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guard {
    Any,
    Above(i64),
    Even,
    BelowPrevious,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkSpec {
    Comma,
    Dir(Direction),
}

#[derive(Debug, Clone)]
pub struct ElemSpec {
    pub link: Option<LinkSpec>,
    pub star: bool,
    pub guard: Guard,
}

#[derive(Debug, Clone)]
pub struct PatternSpec {
    pub elems: Vec<ElemSpec>,
}

impl PatternSpec {
    pub fn source(&self) -> String {
        let mut s = String::new();
        for (i, e) in self.elems.iter().enumerate() {
            match e.link {
                Some(LinkSpec::Comma) => s.push_str(", "),
                Some(LinkSpec::Dir(d)) => s.push_str(&format!(" |{}> ", d.name())),
                None => {}
            }
            let v = format!("v{i}");
            if e.star {
                s.push_str(&format!("* as {v}"));
                continue;
            }
            s.push_str(&v);
            match e.guard {
                Guard::Any => {}
                Guard::Above(k) => s.push_str(&format!("/({v} > {k})")),
                Guard::Even => s.push_str(&format!("/({v} mod 2 = 0)")),
                Guard::BelowPrevious => s.push_str(&format!("/({v} < v{})", i - 1)),
            }
        }
        s
    }
}

pub fn random_pattern(rng: &mut impl Rng, shape: Shape) -> PatternSpec {
    let n = rng.gen_range(1..=3);
    let mut elems: Vec<ElemSpec> = Vec::new();
    for i in 0..n {
        let link = (i > 0).then(|| {
            let dirs: &[Direction] = match shape {
                Shape::Seq => &[Direction::Left, Direction::Right],
                Shape::Grid(..) => &[Direction::North, Direction::South, Direction::East, Direction::West],
                _ => &[],
            };
            if dirs.is_empty() || rng.gen_bool(0.6) {
                LinkSpec::Comma
            } else {
                LinkSpec::Dir(dirs[rng.gen_range(0..dirs.len())])
            }
        });
        let star = i > 0 && i + 1 < n && rng.gen_bool(0.3);
        let prev_plain = i > 0 && !elems[i - 1].star;
        let guard = if star {
            Guard::Any
        } else {
            match rng.gen_range(0..4) {
                0 => Guard::Any,
                1 => Guard::Above(rng.gen_range(0..5)),
                2 => Guard::Even,
                _ if prev_plain => Guard::BelowPrevious,
                _ => Guard::Any,
            }
        };
        elems.push(ElemSpec { link, star, guard });
    }
    PatternSpec { elems }
}

/// Reference neighborhood: positions are indices into the collection's values.
pub fn adjacent(shape: Shape, p: usize, q: usize) -> bool {
    match shape {
        Shape::Seq => p.abs_diff(q) == 1,
        Shape::Set | Shape::Bag => p != q,
        Shape::Grid(_, c) => {
            let (pr, pc, qr, qc) = (p / c, p % c, q / c, q % c);
            pr.abs_diff(qr) + pc.abs_diff(qc) == 1
        }
    }
}

/// Reference direction: `q` is the `d` neighbor of `p`.
pub fn toward(shape: Shape, p: usize, q: usize, d: Direction) -> bool {
    match shape {
        Shape::Seq => match d {
            Direction::Right => q == p + 1,
            Direction::Left => q + 1 == p,
            _ => false,
        },
        Shape::Grid(_, c) => {
            let (pr, pc, qr, qc) = (p / c, p % c, q / c, q % c);
            match d {
                Direction::North => qc == pc && qr + 1 == pr,
                Direction::South => qc == pc && qr == pr + 1,
                Direction::East => qr == pr && qc == pc + 1,
                Direction::West => qr == pr && qc + 1 == pc,
                _ => false,
            }
        }
        _ => false,
    }
}

/// Brute force: is there any path of positions in `allowed` matching the pattern?
pub fn exists_occurrence(shape: Shape, values: &[i64], pattern: &PatternSpec, allowed: &[bool]) -> bool {
    let mut used = vec![false; values.len()];
    search(shape, values, pattern, allowed, &mut used, 0, None, Vec::new(), None)
}

#[allow(clippy::too_many_arguments)]
fn search(
    shape: Shape,
    values: &[i64],
    pattern: &PatternSpec,
    allowed: &[bool],
    used: &mut Vec<bool>,
    j: usize,
    prev: Option<usize>,
    mut links: Vec<LinkSpec>,
    prev_value: Option<i64>,
) -> bool {
    let Some(elem) = pattern.elems.get(j) else { return true };
    links.extend(elem.link);
    let fits = |q: usize, used: &[bool], links: &[LinkSpec]| {
        allowed[q]
            && !used[q]
            && prev.is_none_or(|p| {
                links.iter().all(|l| match l {
                    LinkSpec::Comma => adjacent(shape, p, q),
                    LinkSpec::Dir(d) => toward(shape, p, q, *d),
                })
            })
    };
    if elem.star {
        return star_search(shape, values, pattern, allowed, used, j, prev, links, prev_value);
    }
    for q in 0..values.len() {
        if !fits(q, used, &links) {
            continue;
        }
        let v = values[q];
        let ok = match elem.guard {
            Guard::Any => true,
            Guard::Above(k) => v > k,
            Guard::Even => v % 2 == 0,
            Guard::BelowPrevious => v < prev_value.expect("previous element is plain"),
        };
        if !ok {
            continue;
        }
        used[q] = true;
        let found = search(shape, values, pattern, allowed, used, j + 1, Some(q), Vec::new(), Some(v));
        used[q] = false;
        if found {
            return true;
        }
    }
    false
}

/// A star either stops here (its links then constrain the next element too)
/// or consumes one more position.
#[allow(clippy::too_many_arguments)]
fn star_search(
    shape: Shape,
    values: &[i64],
    pattern: &PatternSpec,
    allowed: &[bool],
    used: &mut Vec<bool>,
    j: usize,
    prev: Option<usize>,
    links: Vec<LinkSpec>,
    prev_value: Option<i64>,
) -> bool {
    if search(shape, values, pattern, allowed, used, j + 1, prev, links.clone(), prev_value) {
        return true;
    }
    for q in 0..values.len() {
        let fits = allowed[q]
            && !used[q]
            && prev.is_none_or(|p| {
                links.iter().all(|l| match l {
                    LinkSpec::Comma => adjacent(shape, p, q),
                    LinkSpec::Dir(d) => toward(shape, p, q, *d),
                })
            });
        if !fits {
            continue;
        }
        used[q] = true;
        let found = star_search(shape, values, pattern, allowed, used, j, Some(q), vec![LinkSpec::Comma], prev_value);
        used[q] = false;
        if found {
            return true;
        }
    }
    false
}

pub fn rules_of(src: &str) -> Rc<[Rule]> {
    match parse_expr(src).unwrap_or_else(|e| panic!("{src}: {e}")).kind {
        ExprKind::Trans(rules) => rules,
        _ => panic!("not a transformation: {src}"),
    }
}

/// Runs one selection of `patterns` (plus a default rule) on `sample` and
/// returns the list of invariant violations found by the reference search.
pub fn check_selection(sample: &Sample, patterns: &[PatternSpec], strategy: Strategy) -> Vec<String> {
    let mut src = String::from("trans [ ");
    for p in patterns {
        src.push_str(&p.source());
        src.push_str(" => [0] ; ");
    }
    src.push_str("z => [z] ]");
    let rules = rules_of(&src);
    let coll = Rc::new(sample.collection());
    let values: Vec<i64> = coll.values().iter().map(|v| v.as_int().unwrap()).collect();
    let mut ev = Evaluator::new(EvalConfig { strategy, ..EvalConfig::default() });
    let env = Env::new().with_value("self", Value::Coll(coll.clone()));
    let selection: MatchSelection = match select_occurrences(&mut ev, &coll, &rules, &env) {
        Ok(s) => s,
        Err(e) => return vec![format!("{src}: selection failed: {e}")],
    };
    let mut problems = Vec::new();
    if !selection.is_partition(values.len()) {
        problems.push(format!("{src} on {values:?}: not a partition"));
    }
    for occ in &selection.occurrences {
        if occ.rule < patterns.len() {
            let mut only = vec![false; values.len()];
            for p in &occ.positions {
                only[p.0] = true;
            }
            if !exists_occurrence(sample.shape, &values, &patterns[occ.rule], &only) {
                problems.push(format!("{src} on {values:?}: occurrence {:?} does not match", occ.positions));
            }
        }
    }
    let claimed_by = |upto: usize| {
        let mut free = vec![true; values.len()];
        for occ in selection.occurrences.iter().filter(|o| o.rule <= upto) {
            for p in &occ.positions {
                free[p.0] = false;
            }
        }
        free
    };
    let defaulted = claimed_by(patterns.len() - 1);
    for (i, p) in patterns.iter().enumerate() {
        if exists_occurrence(sample.shape, &values, p, &defaulted) {
            problems.push(format!("{src} on {values:?}: rule {i} still matches unclaimed positions"));
        }
        if exists_occurrence(sample.shape, &values, p, &claimed_by(i)) {
            problems.push(format!("{src} on {values:?}: rule {i} was not applied maximally"));
        }
    }
    problems
}

// ---------------------------------------------------------------------------
// Unifiable pairs built from a common instance.

pub fn random_topo(rng: &mut impl Rng) -> Topology {
    match rng.gen_range(0..6) {
        0 => Topology::Base(BaseTopo::Seq),
        1 => Topology::Base(BaseTopo::Set),
        2 => Topology::Base(BaseTopo::Bag),
        3 => Topology::Base(BaseTopo::Grid),
        _ => Topology::Var(RVar(rng.gen_range(0..3))),
    }
}

pub fn random_type(rng: &mut impl Rng, depth: u32) -> Type {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..5) {
            0 => Type::INT,
            1 => Type::BOOL,
            2 => Type::STRING,
            _ => Type::Var(TVar(rng.gen_range(0..4))),
        };
    }
    match rng.gen_range(0..3) {
        0 => Type::arrow(random_type(rng, depth - 1), random_type(rng, depth - 1)),
        1 => Type::product(random_type(rng, depth - 1), random_type(rng, depth - 1)),
        _ => Type::coll(random_type(rng, depth - 1), random_topo(rng)),
    }
}

/// Replaces random subterms of `t` by new variables, recording in `witness`
/// what each new variable stood for.
pub fn abstract_type(rng: &mut impl Rng, t: &Type, next: &mut u32, witness: &mut Substitution) -> Type {
    if rng.gen_bool(0.2) {
        *next += 1;
        witness.tmap.insert(TVar(*next), t.clone());
        return Type::Var(TVar(*next));
    }
    match t {
        Type::Arrow(a, b) => Type::arrow(abstract_type(rng, a, next, witness), abstract_type(rng, b, next, witness)),
        Type::Product(a, b) => {
            Type::product(abstract_type(rng, a, next, witness), abstract_type(rng, b, next, witness))
        }
        Type::Coll(c, r) => {
            let r = if rng.gen_bool(0.3) {
                *next += 1;
                witness.rmap.insert(RVar(*next), *r);
                Topology::Var(RVar(*next))
            } else {
                *r
            };
            Type::coll(abstract_type(rng, c, next, witness), r)
        }
        other => other.clone(),
    }
}

/// Two generalizations of one random type together with a unifier of them.
pub fn unifiable_pair(rng: &mut impl Rng, next: &mut u32, witness: &mut Substitution) -> (Type, Type) {
    let t = random_type(rng, 4);
    let l = abstract_type(rng, &t, next, witness);
    let r = abstract_type(rng, &t, next, witness);
    (l, r)
}
