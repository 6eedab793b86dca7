//! Call-by-value evaluation of the core language and the builtin constants.

use std::rc::Rc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::collections::{value_equal, Collection, Position, Value};
use crate::error::RuntimeError;
use crate::syntax::{Direction, Expr, ExprKind, Literal, Rule, POSITIONAL_OPS};
use crate::transform::{self, Strategy};
use crate::types::BaseTopo;

pub const DEFAULT_MAX_STEPS: usize = 100_000;

/// What a name is bound to. Pattern variables inside a rule also remember
/// where their value sits in the transformed collection.
#[derive(Debug, Clone)]
pub enum Binding {
    Value(Value),
    Located { value: Value, position: Position, source: Rc<Collection> },
}

impl Binding {
    pub fn value(&self) -> &Value {
        match self {
            Binding::Value(v) | Binding::Located { value: v, .. } => v,
        }
    }
}

/// Persistent runtime environment; later bindings shadow earlier ones.
#[derive(Debug, Clone, Default)]
pub struct Env(Option<Rc<EnvNode>>);

#[derive(Debug)]
struct EnvNode {
    name: String,
    binding: Binding,
    next: Env,
}

impl Env {
    pub fn new() -> Self {
        Env(None)
    }

    pub fn bind(&self, name: impl Into<String>, binding: Binding) -> Env {
        Env(Some(Rc::new(EnvNode { name: name.into(), binding, next: self.clone() })))
    }

    pub fn with_value(&self, name: impl Into<String>, v: Value) -> Env {
        self.bind(name, Binding::Value(v))
    }

    pub fn lookup(&self, name: &str) -> Option<&Binding> {
        let mut cur = self.0.as_deref();
        while let Some(node) = cur {
            if node.name == name {
                return Some(&node.binding);
            }
            cur = node.next.0.as_deref();
        }
        None
    }
}

#[derive(Debug)]
pub struct Closure {
    pub param: String,
    pub body: Expr,
    pub env: Env,
}

#[derive(Debug)]
pub struct TransValue {
    pub rules: Rc<[Rule]>,
    pub env: Env,
}

/// A builtin constant applied to fewer arguments than its arity.
#[derive(Debug, Clone)]
pub struct BuiltinApp {
    pub op: &'static str,
    pub args: Vec<Arg>,
}

#[derive(Debug, Clone)]
pub enum Arg {
    Value(Value),
    /// A pattern variable passed to a positional operator.
    Located {
        name: String,
        position: Position,
        source: Rc<Collection>,
    },
}

const BUILTINS: &[(&str, usize)] = &[
    ("::", 2),
    ("oneof", 1),
    ("rest", 1),
    ("size", 1),
    ("fixpoint", 2),
    ("left", 2),
    ("right", 2),
    ("is_left", 2),
    ("is_right", 2),
    ("north", 2),
    ("south", 2),
    ("east", 2),
    ("west", 2),
    ("is_north", 2),
    ("is_south", 2),
    ("is_east", 2),
    ("is_west", 2),
    ("grid_from_rows", 1),
    ("rows", 1),
    ("not", 1),
    ("&&", 2),
    ("||", 2),
    ("=", 2),
    ("<", 2),
    (">", 2),
    ("+", 2),
    ("-", 2),
    ("*", 2),
    ("/", 2),
    ("mod", 2),
    ("+.", 2),
    ("-.", 2),
    ("*.", 2),
    ("/.", 2),
];

fn builtin(name: &str) -> Option<(&'static str, usize)> {
    BUILTINS.iter().find(|(n, _)| *n == name).copied()
}

/// Value of a builtin constant referenced by name.
pub fn builtin_value(name: &str) -> Option<Value> {
    match name {
        "empty_seq" => Some(Value::coll(Collection::empty(BaseTopo::Seq))),
        "empty_set" => Some(Value::coll(Collection::empty(BaseTopo::Set))),
        "empty_bag" => Some(Value::coll(Collection::empty(BaseTopo::Bag))),
        _ => builtin(name).map(|(op, _)| Value::Builtin(Rc::new(BuiltinApp { op, args: Vec::new() }))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    pub strategy: Strategy,
    /// Iteration budget of `fixpoint`.
    pub max_steps: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { strategy: Strategy::Priority, max_steps: DEFAULT_MAX_STEPS }
    }
}

pub struct Evaluator {
    pub config: EvalConfig,
    pub(crate) rng: ChaCha8Rng,
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator::new(EvalConfig::default())
    }
}

impl Evaluator {
    pub fn new(config: EvalConfig) -> Self {
        let seed = match config.strategy {
            Strategy::Priority => 0,
            Strategy::Random(seed) => seed,
        };
        Evaluator { config, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn eval(&mut self, env: &Env, e: &Expr) -> Result<Value, RuntimeError> {
        match &e.kind {
            ExprKind::Var(name) => match env.lookup(name) {
                Some(b) => Ok(b.value().clone()),
                None => builtin_value(name).ok_or_else(|| RuntimeError::Unbound(name.clone())),
            },
            ExprKind::Const(lit) => Ok(match lit {
                Literal::Int(n) => Value::Int(*n),
                Literal::Float(x) => Value::Float(*x),
                Literal::Bool(b) => Value::Bool(*b),
                Literal::Str(s) => Value::Str(Rc::from(s.as_str())),
            }),
            ExprKind::Pair(a, b) => {
                let a = self.eval(env, a)?;
                let b = self.eval(env, b)?;
                Ok(Value::pair(a, b))
            }
            ExprKind::Fun(param, body) => {
                Ok(Value::Closure(Rc::new(Closure { param: param.clone(), body: (**body).clone(), env: env.clone() })))
            }
            ExprKind::Let(x, bound, body) => {
                let v = self.eval(env, bound)?;
                self.eval(&env.with_value(x.clone(), v), body)
            }
            ExprKind::Trans(rules) => Ok(Value::Trans(Rc::new(TransValue { rules: rules.clone(), env: env.clone() }))),
            ExprKind::App(f, arg) => {
                if let Some(v) = self.eval_special(env, f, arg)? {
                    return Ok(v);
                }
                let fv = self.eval(env, f)?;
                let av = self.eval(env, arg)?;
                self.apply(fv, av)
            }
        }
    }

    /// Short-circuit boolean operators and positional operator arguments.
    fn eval_special(&mut self, env: &Env, f: &Expr, arg: &Expr) -> Result<Option<Value>, RuntimeError> {
        if let ExprKind::App(op, lhs) = &f.kind {
            if let ExprKind::Var(op) = &op.kind {
                if (op == "&&" || op == "||") && env.lookup(op).is_none() {
                    let l = self.eval(env, lhs)?.as_bool()?;
                    if l == (op == "||") {
                        return Ok(Some(Value::Bool(l)));
                    }
                    return self.eval(env, arg).map(Some);
                }
            }
            return Ok(None);
        }
        let ExprKind::Var(op) = &f.kind else { return Ok(None) };
        if env.lookup(op).is_some() || !POSITIONAL_OPS.contains(&op.as_str()) {
            return Ok(None);
        }
        let (op, _) = builtin(op).expect("positional operators are builtins");
        let located = match &arg.kind {
            ExprKind::Var(x) => match env.lookup(x) {
                Some(Binding::Located { position, source, .. }) => {
                    Arg::Located { name: x.clone(), position: *position, source: source.clone() }
                }
                _ => return Err(RuntimeError::PositionalArgNotPatternVar(op.to_string())),
            },
            _ => return Err(RuntimeError::PositionalArgNotPatternVar(op.to_string())),
        };
        Ok(Some(Value::Builtin(Rc::new(BuiltinApp { op, args: vec![located] }))))
    }

    pub fn apply(&mut self, f: Value, arg: Value) -> Result<Value, RuntimeError> {
        match f {
            Value::Closure(c) => {
                let env = c.env.with_value(c.param.clone(), arg);
                self.eval(&env, &c.body)
            }
            Value::Trans(t) => {
                let coll = arg.as_coll()?.clone();
                Ok(Value::coll(transform::apply_transformation(self, &t, coll)?))
            }
            Value::Builtin(b) => {
                let (_, arity) = builtin(b.op).expect("known builtin");
                let mut args = b.args.clone();
                args.push(Arg::Value(arg));
                if args.len() < arity {
                    return Ok(Value::Builtin(Rc::new(BuiltinApp { op: b.op, args })));
                }
                self.apply_builtin(b.op, args)
            }
            other => Err(RuntimeError::TypeMismatch(format!("{other} is not a function"))),
        }
    }

    pub fn apply_builtin(&mut self, op: &'static str, args: Vec<Arg>) -> Result<Value, RuntimeError> {
        if POSITIONAL_OPS.contains(&op) {
            return positional(op, &args);
        }
        let vals: Vec<Value> = args
            .into_iter()
            .map(|a| match a {
                Arg::Value(v) => Ok(v),
                Arg::Located { .. } => Err(RuntimeError::TypeMismatch(format!("`{op}` is not positional"))),
            })
            .collect::<Result<_, _>>()?;
        let int = |i: usize| vals[i].as_int();
        let float = |i: usize| vals[i].as_float();
        Ok(match op {
            "::" => Value::coll(vals[1].as_coll()?.cons(vals[0].clone())?),
            "oneof" => vals[0].as_coll()?.oneof()?,
            "rest" => Value::coll(vals[0].as_coll()?.rest()?),
            "size" => Value::Int(vals[0].as_coll()?.size() as i64),
            "fixpoint" => self.fixpoint(vals[0].clone(), vals[1].clone())?,
            "grid_from_rows" => {
                let rows = vals[0]
                    .as_coll()?
                    .values()
                    .iter()
                    .map(|r| Ok(r.as_coll()?.values().to_vec()))
                    .collect::<Result<Vec<_>, RuntimeError>>()?;
                Value::coll(Collection::grid_from_rows(&rows)?)
            }
            "rows" => {
                let rows = vals[0].as_coll()?.rows()?;
                Value::coll(Collection::Seq(rows.into_iter().map(|r| Value::coll(Collection::Seq(r))).collect()))
            }
            "not" => Value::Bool(!vals[0].as_bool()?),
            "&&" => Value::Bool(vals[0].as_bool()? && vals[1].as_bool()?),
            "||" => Value::Bool(vals[0].as_bool()? || vals[1].as_bool()?),
            "=" => Value::Bool(value_equal(&vals[0], &vals[1])?),
            "<" => Value::Bool(int(0)? < int(1)?),
            ">" => Value::Bool(int(0)? > int(1)?),
            "+" => Value::Int(int(0)?.wrapping_add(int(1)?)),
            "-" => Value::Int(int(0)?.wrapping_sub(int(1)?)),
            "*" => Value::Int(int(0)?.wrapping_mul(int(1)?)),
            "/" | "mod" => {
                let d = int(1)?;
                if d == 0 {
                    return Err(RuntimeError::DivisionByZero);
                }
                Value::Int(if op == "/" { int(0)?.wrapping_div(d) } else { int(0)?.wrapping_rem(d) })
            }
            "+." => Value::Float(float(0)? + float(1)?),
            "-." => Value::Float(float(0)? - float(1)?),
            "*." => Value::Float(float(0)? * float(1)?),
            "/." => Value::Float(float(0)? / float(1)?),
            _ => return Err(RuntimeError::Unbound(op.to_string())),
        })
    }

    /// Applies `f` until the result stops changing.
    pub fn fixpoint(&mut self, f: Value, start: Value) -> Result<Value, RuntimeError> {
        let mut cur = start;
        for _ in 0..self.config.max_steps {
            let next = self.apply(f.clone(), cur.clone())?;
            if value_equal(&next, &cur)? {
                return Ok(next);
            }
            cur = next;
        }
        Err(RuntimeError::FixpointDivergence(self.config.max_steps))
    }
}

fn positional(op: &'static str, args: &[Arg]) -> Result<Value, RuntimeError> {
    let (Arg::Located { position, source, .. }, Arg::Value(target)) = (&args[0], &args[1]) else {
        return Err(RuntimeError::PositionalArgNotPatternVar(op.to_string()));
    };
    let target = target.as_coll()?;
    if !Rc::ptr_eq(source, target) && !value_equal(&Value::Coll(source.clone()), &Value::Coll(target.clone()))? {
        return Err(RuntimeError::PositionalArgNotPatternVar(op.to_string()));
    }
    let (predicate, dir_name) = match op.strip_prefix("is_") {
        Some(d) => (true, d),
        None => (false, op),
    };
    let dir = Direction::from_name(dir_name).expect("positional operators are directions");
    let step = target.direction_step(*position, dir)?;
    if predicate {
        return Ok(Value::Bool(step.is_none()));
    }
    match step {
        Some(q) => Ok(target.get(q)?.clone()),
        None => Err(RuntimeError::NoNeighbor(op.to_string())),
    }
}
