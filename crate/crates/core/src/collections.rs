//! Runtime values and topological collections: positions carrying values plus
//! a neighborhood relation over positions.

use std::fmt;
use std::rc::Rc;

use crate::error::RuntimeError;
use crate::eval::{BuiltinApp, Closure, TransValue};
use crate::syntax::{float_text, quote_str, Direction};
use crate::types::BaseTopo;

#[derive(Debug, Clone)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(Rc<str>),
    Pair(Rc<(Value, Value)>),
    Closure(Rc<Closure>),
    Trans(Rc<TransValue>),
    Builtin(Rc<BuiltinApp>),
    Coll(Rc<Collection>),
}

impl Value {
    pub fn coll(c: Collection) -> Value {
        Value::Coll(Rc::new(c))
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Rc::new((a, b)))
    }

    pub fn as_int(&self) -> Result<i64, RuntimeError> {
        match self {
            Value::Int(n) => Ok(*n),
            other => Err(RuntimeError::TypeMismatch(format!("expected an int, got {other}"))),
        }
    }

    pub fn as_float(&self) -> Result<f64, RuntimeError> {
        match self {
            Value::Float(x) => Ok(*x),
            other => Err(RuntimeError::TypeMismatch(format!("expected a float, got {other}"))),
        }
    }

    pub fn as_bool(&self) -> Result<bool, RuntimeError> {
        match self {
            Value::Bool(b) => Ok(*b),
            other => Err(RuntimeError::TypeMismatch(format!("expected a bool, got {other}"))),
        }
    }

    pub fn as_coll(&self) -> Result<&Rc<Collection>, RuntimeError> {
        match self {
            Value::Coll(c) => Ok(c),
            other => Err(RuntimeError::TypeMismatch(format!("expected a collection, got {other}"))),
        }
    }
}

/// Structural equality. Functional values are incomparable.
pub fn value_equal(a: &Value, b: &Value) -> Result<bool, RuntimeError> {
    Ok(match (a, b) {
        (Value::Int(x), Value::Int(y)) => x == y,
        (Value::Float(x), Value::Float(y)) => x.to_bits() == y.to_bits(),
        (Value::Bool(x), Value::Bool(y)) => x == y,
        (Value::Str(x), Value::Str(y)) => x == y,
        (Value::Pair(p), Value::Pair(q)) => value_equal(&p.0, &q.0)? && value_equal(&p.1, &q.1)?,
        (Value::Coll(c), Value::Coll(d)) => Rc::ptr_eq(c, d) || collection_equal(c, d)?,
        (Value::Closure(_) | Value::Trans(_) | Value::Builtin(_), _)
        | (_, Value::Closure(_) | Value::Trans(_) | Value::Builtin(_)) => return Err(RuntimeError::IncomparableValue),
        _ => return Err(RuntimeError::TypeMismatch(format!("comparing {a} with {b}"))),
    })
}

fn collection_equal(c: &Collection, d: &Collection) -> Result<bool, RuntimeError> {
    match (c, d) {
        (Collection::Seq(xs), Collection::Seq(ys)) => slices_equal(xs, ys),
        (Collection::Set(xs), Collection::Set(ys)) => {
            if xs.len() != ys.len() {
                return Ok(false);
            }
            for x in xs {
                if position_of(ys, x)?.is_none() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Collection::Bag(xs), Collection::Bag(ys)) => {
            if xs.len() != ys.len() {
                return Ok(false);
            }
            for x in xs {
                if count_of(xs, x)? != count_of(ys, x)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Collection::Grid { rows: r1, cols: c1, cells: xs }, Collection::Grid { rows: r2, cols: c2, cells: ys }) => {
            Ok(r1 == r2 && c1 == c2 && slices_equal(xs, ys)?)
        }
        _ => Err(RuntimeError::TypeMismatch("comparing collections of different topologies".into())),
    }
}

fn slices_equal(xs: &[Value], ys: &[Value]) -> Result<bool, RuntimeError> {
    if xs.len() != ys.len() {
        return Ok(false);
    }
    for (x, y) in xs.iter().zip(ys) {
        if !value_equal(x, y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn position_of(xs: &[Value], v: &Value) -> Result<Option<usize>, RuntimeError> {
    for (i, x) in xs.iter().enumerate() {
        if value_equal(x, v)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

fn count_of(xs: &[Value], v: &Value) -> Result<usize, RuntimeError> {
    let mut n = 0;
    for x in xs {
        if value_equal(x, v)? {
            n += 1;
        }
    }
    Ok(n)
}

/// A position in a collection: the index in canonical order (sequence index,
/// set/bag iteration order, row-major grid cell).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(pub usize);

#[derive(Debug, Clone)]
pub enum Collection {
    Seq(Vec<Value>),
    /// Distinct values in insertion order.
    Set(Vec<Value>),
    /// Values in insertion order; equal values are kept adjacent.
    Bag(Vec<Value>),
    /// Row-major cells, row 0 on top.
    Grid {
        rows: usize,
        cols: usize,
        cells: Vec<Value>,
    },
}

impl Collection {
    pub fn empty(topo: BaseTopo) -> Collection {
        match topo {
            BaseTopo::Seq => Collection::Seq(Vec::new()),
            BaseTopo::Set => Collection::Set(Vec::new()),
            BaseTopo::Bag => Collection::Bag(Vec::new()),
            BaseTopo::Grid => Collection::Grid { rows: 0, cols: 0, cells: Vec::new() },
        }
    }

    /// Builds a sequence, set or bag from values in order.
    pub fn from_values(topo: BaseTopo, values: impl IntoIterator<Item = Value>) -> Result<Collection, RuntimeError> {
        let mut c = Collection::empty(topo);
        match &mut c {
            Collection::Seq(xs) => xs.extend(values),
            Collection::Grid { .. } => return Err(RuntimeError::GridUnsupportedOp("insertion")),
            _ => {
                for v in values {
                    c.insert(v)?;
                }
            }
        }
        Ok(c)
    }

    pub fn grid(rows: usize, cols: usize, cells: Vec<Value>) -> Result<Collection, RuntimeError> {
        if cells.len() != rows * cols {
            return Err(RuntimeError::RaggedGrid);
        }
        Ok(Collection::Grid { rows, cols, cells })
    }

    pub fn grid_from_rows(rows: &[Vec<Value>]) -> Result<Collection, RuntimeError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(RuntimeError::RaggedGrid);
        }
        let cols = if rows.is_empty() { 0 } else { cols };
        Collection::grid(rows.len(), cols, rows.concat())
    }

    pub fn topology(&self) -> BaseTopo {
        match self {
            Collection::Seq(_) => BaseTopo::Seq,
            Collection::Set(_) => BaseTopo::Set,
            Collection::Bag(_) => BaseTopo::Bag,
            Collection::Grid { .. } => BaseTopo::Grid,
        }
    }

    /// Elements in canonical position order.
    pub fn values(&self) -> &[Value] {
        match self {
            Collection::Seq(xs) | Collection::Set(xs) | Collection::Bag(xs) => xs,
            Collection::Grid { cells, .. } => cells,
        }
    }

    pub fn len(&self) -> usize {
        self.values().len()
    }

    pub fn is_empty(&self) -> bool {
        self.values().is_empty()
    }

    pub fn size(&self) -> usize {
        self.len()
    }

    pub fn positions(&self) -> impl Iterator<Item = Position> {
        (0..self.len()).map(Position)
    }

    pub fn get(&self, p: Position) -> Result<&Value, RuntimeError> {
        self.values().get(p.0).ok_or(RuntimeError::InvalidPosition(p.0))
    }

    fn check(&self, p: Position) -> Result<(), RuntimeError> {
        self.get(p).map(|_| ())
    }

    pub fn grid_dims(&self) -> Option<(usize, usize)> {
        match self {
            Collection::Grid { rows, cols, .. } => Some((*rows, *cols)),
            _ => None,
        }
    }

    /// Neighbors of `p` in ascending position order.
    pub fn neighbors(&self, p: Position) -> Result<Vec<Position>, RuntimeError> {
        self.check(p)?;
        let n = self.len();
        Ok(match self {
            Collection::Seq(_) => {
                let mut out = Vec::with_capacity(2);
                if p.0 > 0 {
                    out.push(Position(p.0 - 1));
                }
                if p.0 + 1 < n {
                    out.push(Position(p.0 + 1));
                }
                out
            }
            Collection::Set(_) | Collection::Bag(_) => (0..n).filter(|&q| q != p.0).map(Position).collect(),
            Collection::Grid { .. } => {
                // north, west, east, south is ascending row-major order
                [Direction::North, Direction::West, Direction::East, Direction::South]
                    .into_iter()
                    .filter_map(|d| self.grid_step(p, d))
                    .collect()
            }
        })
    }

    fn grid_step(&self, p: Position, d: Direction) -> Option<Position> {
        let (rows, cols) = self.grid_dims()?;
        let (r, c) = (p.0 / cols, p.0 % cols);
        let (r, c) = match d {
            Direction::North => (r.checked_sub(1)?, c),
            Direction::South => (r + 1, c),
            Direction::West => (r, c.checked_sub(1)?),
            Direction::East => (r, c + 1),
            Direction::Left | Direction::Right => return None,
        };
        (r < rows && c < cols).then_some(Position(r * cols + c))
    }

    /// The neighbor of `p` in direction `d`, if it exists.
    pub fn direction_step(&self, p: Position, d: Direction) -> Result<Option<Position>, RuntimeError> {
        self.check(p)?;
        let mismatch = || RuntimeError::DirectionTopologyMismatch { direction: d, topology: self.topology() };
        match (self, d) {
            (Collection::Seq(_), Direction::Left) => Ok(p.0.checked_sub(1).map(Position)),
            (Collection::Seq(xs), Direction::Right) => Ok((p.0 + 1 < xs.len()).then_some(Position(p.0 + 1))),
            (Collection::Grid { .. }, d) if !d.is_seq() => Ok(self.grid_step(p, d)),
            _ => Err(mismatch()),
        }
    }

    /// Adds an element: prepends on sequences, inserts on sets and bags.
    pub fn cons(&self, v: Value) -> Result<Collection, RuntimeError> {
        let mut c = self.clone();
        match &mut c {
            Collection::Seq(xs) => xs.insert(0, v),
            Collection::Grid { .. } => return Err(RuntimeError::GridUnsupportedOp("::")),
            _ => c.insert(v)?,
        }
        Ok(c)
    }

    fn insert(&mut self, v: Value) -> Result<(), RuntimeError> {
        match self {
            Collection::Set(xs) => {
                if position_of(xs, &v)?.is_none() {
                    xs.push(v);
                }
            }
            Collection::Bag(xs) => match position_of(xs, &v)? {
                Some(first) => {
                    let mut end = first + 1;
                    while end < xs.len() && value_equal(&xs[end], &v)? {
                        end += 1;
                    }
                    xs.insert(end, v);
                }
                None => xs.push(v),
            },
            Collection::Seq(xs) => xs.push(v),
            Collection::Grid { .. } => return Err(RuntimeError::GridUnsupportedOp("insertion")),
        }
        Ok(())
    }

    /// The distinguished element: the head of a sequence, the first element in
    /// iteration order of a set or bag.
    pub fn oneof(&self) -> Result<Value, RuntimeError> {
        if let Collection::Grid { .. } = self {
            return Err(RuntimeError::GridUnsupportedOp("oneof"));
        }
        self.values().first().cloned().ok_or(RuntimeError::EmptyCollection("oneof"))
    }

    /// The collection without the element returned by [`Collection::oneof`].
    pub fn rest(&self) -> Result<Collection, RuntimeError> {
        let mut c = self.clone();
        match &mut c {
            Collection::Grid { .. } => return Err(RuntimeError::GridUnsupportedOp("rest")),
            Collection::Seq(xs) | Collection::Set(xs) | Collection::Bag(xs) => {
                if xs.is_empty() {
                    return Err(RuntimeError::EmptyCollection("rest"));
                }
                xs.remove(0);
            }
        }
        Ok(c)
    }

    /// The rows of a grid as sequences.
    pub fn rows(&self) -> Result<Vec<Vec<Value>>, RuntimeError> {
        match self {
            Collection::Grid { cols, cells, .. } if *cols > 0 => {
                Ok(cells.chunks(*cols).map(<[Value]>::to_vec).collect())
            }
            Collection::Grid { .. } => Ok(Vec::new()),
            _ => Err(RuntimeError::TypeMismatch("`rows` expects a grid".into())),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Float(x) => f.write_str(&float_text(*x)),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => f.write_str(&quote_str(s)),
            Value::Pair(p) => write!(f, "({}, {})", p.0, p.1),
            Value::Closure(_) => f.write_str("<fun>"),
            Value::Trans(_) => f.write_str("<trans>"),
            Value::Builtin(b) => write!(f, "<builtin {}>", b.op),
            Value::Coll(c) => c.fmt(f),
        }
    }
}

impl fmt::Display for Collection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Collection::Seq(xs) if xs.is_empty() => f.write_str("empty_seq"),
            Collection::Seq(xs) => {
                f.write_str("(")?;
                for x in xs {
                    write!(f, "{x}::")?;
                }
                f.write_str("empty_seq)")
            }
            Collection::Set(xs) | Collection::Bag(xs) => {
                f.write_str("{")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}{}", self.topology().name())
            }
            Collection::Grid { rows, cols, cells } => {
                write!(f, "grid({rows} x {cols})[ ")?;
                if *cols > 0 {
                    for row in cells.chunks(*cols) {
                        f.write_str("[")?;
                        for (i, x) in row.iter().enumerate() {
                            if i > 0 {
                                f.write_str(" ")?;
                            }
                            write!(f, "{x}")?;
                        }
                        f.write_str("] ")?;
                    }
                }
                f.write_str("]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<Value> {
        xs.iter().map(|&n| Value::Int(n)).collect()
    }

    fn seq(xs: &[i64]) -> Collection {
        Collection::Seq(ints(xs))
    }

    fn set(xs: &[i64]) -> Collection {
        Collection::from_values(BaseTopo::Set, ints(xs)).unwrap()
    }

    fn bag(xs: &[i64]) -> Collection {
        Collection::from_values(BaseTopo::Bag, ints(xs)).unwrap()
    }

    fn eq(a: &Collection, b: &Collection) -> bool {
        value_equal(&Value::coll(a.clone()), &Value::coll(b.clone())).unwrap()
    }

    fn bool_grid(rows: usize, cols: usize) -> Collection {
        Collection::grid(rows, cols, vec![Value::Bool(false); rows * cols]).unwrap()
    }

    #[test]
    fn seq_neighbors() {
        assert_eq!(seq(&[1, 2, 3]).neighbors(Position(1)).unwrap(), vec![Position(0), Position(2)]);
        assert_eq!(seq(&[1, 2, 3]).neighbors(Position(0)).unwrap(), vec![Position(1)]);
    }

    #[test]
    fn set_elements_are_all_neighbors() {
        let s = set(&[7, 8, 9]);
        assert_eq!(s.neighbors(Position(0)).unwrap(), vec![Position(1), Position(2)]);
    }

    #[test]
    fn grid_von_neumann_corner() {
        let g = bool_grid(2, 2);
        assert_eq!(g.neighbors(Position(0)).unwrap(), vec![Position(1), Position(2)]);
        let g = bool_grid(3, 3);
        assert_eq!(g.neighbors(Position(4)).unwrap(), vec![Position(1), Position(3), Position(5), Position(7)]);
    }

    #[test]
    fn invalid_position() {
        assert_eq!(seq(&[1]).neighbors(Position(3)), Err(RuntimeError::InvalidPosition(3)));
    }

    #[test]
    fn direction_steps() {
        assert_eq!(seq(&[1, 2, 3]).direction_step(Position(0), Direction::Left).unwrap(), None);
        assert_eq!(seq(&[1, 2, 3]).direction_step(Position(0), Direction::Right).unwrap(), Some(Position(1)));
        // 3 rows x 2 cols, (2,0) north is (1,0)
        let g = bool_grid(3, 2);
        assert_eq!(g.direction_step(Position(4), Direction::North).unwrap(), Some(Position(2)));
        assert_eq!(g.direction_step(Position(4), Direction::South).unwrap(), None);
        assert_eq!(g.direction_step(Position(4), Direction::East).unwrap(), Some(Position(5)));
        assert_eq!(g.direction_step(Position(4), Direction::West).unwrap(), None);
        assert!(matches!(
            set(&[1, 2]).direction_step(Position(0), Direction::Left),
            Err(RuntimeError::DirectionTopologyMismatch { .. })
        ));
        assert!(matches!(
            g.direction_step(Position(0), Direction::Left),
            Err(RuntimeError::DirectionTopologyMismatch { .. })
        ));
    }

    #[test]
    fn cons_prepends_on_sequences() {
        let c = Collection::empty(BaseTopo::Seq).cons(Value::Int(1)).unwrap().cons(Value::Int(0)).unwrap();
        assert!(eq(&c, &seq(&[0, 1])));
        assert!(matches!(bool_grid(1, 1).cons(Value::Bool(true)), Err(RuntimeError::GridUnsupportedOp(_))));
    }

    #[test]
    fn oneof_and_rest_partition_a_set() {
        let s = set(&[2, 3, 5]);
        let x = s.oneof().unwrap();
        let r = s.rest().unwrap();
        assert_eq!(r.len(), 2);
        assert!(!r.values().iter().any(|v| value_equal(v, &x).unwrap()));
        assert!(eq(&r.cons(x).unwrap(), &s));
    }

    #[test]
    fn empty_and_grid_destructors() {
        let e = Collection::empty(BaseTopo::Bag);
        assert_eq!(e.oneof().unwrap_err(), RuntimeError::EmptyCollection("oneof"));
        assert_eq!(e.rest().unwrap_err(), RuntimeError::EmptyCollection("rest"));
        assert!(matches!(bool_grid(2, 2).oneof(), Err(RuntimeError::GridUnsupportedOp(_))));
        assert_eq!(bool_grid(3, 4).size(), 12);
    }

    #[test]
    fn equality() {
        assert!(!eq(&seq(&[1, 2]), &seq(&[2, 1])));
        assert!(eq(&bag(&[1, 1, 2]), &bag(&[1, 2, 1])));
        assert!(!eq(&bag(&[1, 1, 2]), &bag(&[1, 2, 2])));
        assert!(eq(&set(&[1, 2]), &set(&[2, 1, 1])));
        assert!(value_equal(&Value::Float(0.1 + 0.2), &Value::Float(0.1 + 0.2)).unwrap());
        assert!(!value_equal(&Value::Float(0.0), &Value::Float(-0.0)).unwrap());
    }

    #[test]
    fn sets_deduplicate_and_bags_group() {
        assert_eq!(set(&[1, 2, 1, 3]).len(), 3);
        let b = bag(&[1, 2, 1]);
        assert_eq!(b.to_string(), "{1, 1, 2}bag");
    }

    #[test]
    fn printing() {
        assert_eq!(seq(&[1, 2]).to_string(), "(1::2::empty_seq)");
        assert_eq!(seq(&[]).to_string(), "empty_seq");
        assert_eq!(set(&[3, 1]).to_string(), "{3, 1}set");
        let g = Collection::grid_from_rows(&[
            vec![Value::Bool(true), Value::Bool(false)],
            vec![Value::Bool(false), Value::Bool(true)],
        ])
        .unwrap();
        assert_eq!(g.to_string(), "grid(2 x 2)[ [true false] [false true] ]");
        let nested = Collection::Seq(vec![Value::coll(seq(&[1])), Value::pair(Value::Int(1), Value::Str("a".into()))]);
        assert_eq!(nested.to_string(), "((1::empty_seq)::(1, \"a\")::empty_seq)");
    }

    #[test]
    fn ragged_grids_are_rejected() {
        let err = Collection::grid_from_rows(&[ints(&[1, 2]), ints(&[3])]).unwrap_err();
        assert_eq!(err, RuntimeError::RaggedGrid);
    }
}
