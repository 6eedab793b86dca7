//! Algorithm W extended with topology variables and transformations.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::syntax::{Direction, ElemPattern, Expr, ExprKind, Item, Link, Literal, Rule, Span};
use crate::types::{
    canonicalize, generalize, instantiate, is_instance, parse_type_with, BaseTopo, FreshSupply, Scheme, Substitution,
    Topology, Type, TypeEnv,
};
use crate::unify::{mgu_r, unify, UnifyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeErrorKind {
    #[error(transparent)]
    Unify(#[from] UnifyError),
    #[error("unbound identifier `{0}`")]
    UnboundIdentifier(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub span: Span,
    /// What was being checked when unification failed.
    pub context: Option<String>,
}

impl TypeError {
    fn new(kind: TypeErrorKind, span: Span) -> Self {
        TypeError { kind, span, context: None }
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type error at {}: {}", self.span, self.kind)?;
        if let Some(ctx) = &self.context {
            write!(f, " ({ctx})")?;
        }
        Ok(())
    }
}

/// Type schemes of the builtin constants.
#[derive(Debug)]
pub struct ConstantTable {
    schemes: HashMap<&'static str, Scheme>,
}

const SIGNATURES: &[(&str, &str)] = &[
    ("::", "'a -> ['a]!t -> ['a]!t"),
    ("oneof", "['a]!t -> 'a"),
    ("rest", "['a]!t -> ['a]!t"),
    ("size", "['a]!t -> int"),
    ("empty_seq", "['a]seq"),
    ("empty_set", "['a]set"),
    ("empty_bag", "['a]bag"),
    ("fixpoint", "(['a]!t -> ['a]!t) -> ['a]!t -> ['a]!t"),
    ("left", "'a -> ['a]seq -> 'a"),
    ("right", "'a -> ['a]seq -> 'a"),
    ("is_left", "'a -> ['a]seq -> bool"),
    ("is_right", "'a -> ['a]seq -> bool"),
    ("north", "'a -> ['a]grid -> 'a"),
    ("south", "'a -> ['a]grid -> 'a"),
    ("east", "'a -> ['a]grid -> 'a"),
    ("west", "'a -> ['a]grid -> 'a"),
    ("is_north", "'a -> ['a]grid -> bool"),
    ("is_south", "'a -> ['a]grid -> bool"),
    ("is_east", "'a -> ['a]grid -> bool"),
    ("is_west", "'a -> ['a]grid -> bool"),
    ("grid_from_rows", "[['a]seq]seq -> ['a]grid"),
    ("rows", "['a]grid -> [['a]seq]seq"),
    ("not", "bool -> bool"),
    ("&&", "bool -> bool -> bool"),
    ("||", "bool -> bool -> bool"),
    ("=", "'a -> 'a -> bool"),
    ("<", "int -> int -> bool"),
    (">", "int -> int -> bool"),
    ("+", "int -> int -> int"),
    ("-", "int -> int -> int"),
    ("*", "int -> int -> int"),
    ("/", "int -> int -> int"),
    ("mod", "int -> int -> int"),
    ("+.", "float -> float -> float"),
    ("-.", "float -> float -> float"),
    ("*.", "float -> float -> float"),
    ("/.", "float -> float -> float"),
];

impl ConstantTable {
    pub fn builtin() -> &'static ConstantTable {
        static TABLE: OnceLock<ConstantTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            let schemes = SIGNATURES
                .iter()
                .map(|&(name, sig)| {
                    let t = parse_type_with(sig, &mut FreshSupply::new())
                        .unwrap_or_else(|e| panic!("bad builtin signature for {name}: {e}"));
                    (name, generalize(&t, &TypeEnv::new()))
                })
                .collect();
            ConstantTable { schemes }
        })
    }

    pub fn get(&self, name: &str) -> Option<&Scheme> {
        self.schemes.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.schemes.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        SIGNATURES.iter().map(|(n, _)| *n)
    }
}

pub fn tc_lookup(name: &str) -> Result<&'static Scheme, TypeErrorKind> {
    ConstantTable::builtin().get(name).ok_or_else(|| TypeErrorKind::UnknownConstant(name.to_string()))
}

/// The running substitution and the variable supply of one inference run.
#[derive(Debug, Default)]
pub struct InferState {
    pub subst: Substitution,
    pub supply: FreshSupply,
}

impl InferState {
    pub fn new() -> Self {
        InferState::default()
    }

    fn unify_at(&mut self, lhs: &Type, rhs: &Type, span: Span, what: &str) -> Result<(), TypeError> {
        let lhs = self.subst.apply(lhs);
        let rhs = self.subst.apply(rhs);
        let s = unify(&lhs, &rhs).map_err(|e| TypeError { kind: e.into(), span, context: Some(what.to_string()) })?;
        self.subst = Substitution::compose(&s, &self.subst);
        Ok(())
    }

    fn unify_topo_at(&mut self, topo: Topology, base: BaseTopo, span: Span, d: Direction) -> Result<(), TypeError> {
        let s = mgu_r(self.subst.apply_topo(topo), Topology::Base(base)).map_err(|e| TypeError {
            kind: e.into(),
            span,
            context: Some(format!("direction `{d}` requires a {} topology", base.name())),
        })?;
        self.subst = Substitution::compose(&s, &self.subst);
        Ok(())
    }
}

/// One step of W. The returned type is relative to `state.subst`.
pub fn infer_w(env: &TypeEnv, e: &Expr, state: &mut InferState) -> Result<Type, TypeError> {
    match &e.kind {
        ExprKind::Var(name) => {
            let scheme = match env.get(name) {
                Some(s) => s,
                None => ConstantTable::builtin()
                    .get(name)
                    .ok_or_else(|| TypeError::new(TypeErrorKind::UnboundIdentifier(name.clone()), e.span))?,
            };
            Ok(instantiate(scheme, &mut state.supply))
        }
        ExprKind::Const(lit) => Ok(match lit {
            Literal::Int(_) => Type::INT,
            Literal::Float(_) => Type::FLOAT,
            Literal::Bool(_) => Type::BOOL,
            Literal::Str(_) => Type::STRING,
        }),
        ExprKind::Pair(a, b) => {
            let ta = infer_w(env, a, state)?;
            let tb = infer_w(env, b, state)?;
            Ok(Type::product(ta, tb))
        }
        ExprKind::Fun(x, body) => {
            let alpha = state.supply.fresh_type();
            let tbody = infer_w(&env.extended(x.clone(), Scheme::mono(alpha.clone())), body, state)?;
            Ok(Type::arrow(alpha, tbody))
        }
        ExprKind::App(f, arg) => {
            let tf = infer_w(env, f, state)?;
            let targ = infer_w(env, arg, state)?;
            let alpha = state.supply.fresh_type();
            state.unify_at(&tf, &Type::arrow(targ, alpha.clone()), e.span, "in this application")?;
            Ok(alpha)
        }
        ExprKind::Let(x, bound, body) => {
            let tbound = infer_w(env, bound, state)?;
            let scheme = generalize(&state.subst.apply(&tbound), &state.subst.apply_env(env));
            infer_w(&env.extended(x.clone(), scheme), body, state)
        }
        ExprKind::Trans(rules) => infer_trans(env, rules, state),
    }
}

fn infer_trans(env: &TypeEnv, rules: &[Rule], state: &mut InferState) -> Result<Type, TypeError> {
    let alpha = state.supply.fresh_type();
    let beta = state.supply.fresh_type();
    let theta = state.supply.fresh_topo();
    let self_type = Type::coll(alpha.clone(), theta);
    let env = env.extended("self", Scheme::mono(self_type.clone()));
    for rule in rules {
        let mut rule_env = env.clone();
        for item in &rule.pattern.items {
            if let Some(Link::Direction(d)) = item.link {
                let base = if d.is_seq() { BaseTopo::Seq } else { BaseTopo::Grid };
                let span = item.elem.guard().map_or(rule.body.span, |g| g.span);
                state.unify_topo_at(theta, base, span, d)?;
            }
            let binding = match &item.elem {
                ElemPattern::Star(_) => Type::seq(alpha.clone()),
                ElemPattern::Plain(_) | ElemPattern::Guarded(..) => alpha.clone(),
            };
            rule_env.insert(item.elem.name(), Scheme::mono(binding));
            if let Some(guard) = item.elem.guard() {
                let tguard = infer_w(&rule_env, guard, state)?;
                state.unify_at(&tguard, &Type::BOOL, guard.span, "a guard must be a bool")?;
            }
        }
        let tbody = infer_w(&rule_env, &rule.body, state)?;
        state.unify_at(
            &tbody,
            &Type::seq(beta.clone()),
            rule.body.span,
            "the right-hand side of a rule must be a sequence ['b]seq",
        )?;
    }
    Ok(Type::arrow(self_type, Type::coll(beta, theta)))
}

/// Principal type of `e` under `env`, with the final substitution applied.
pub fn infer_type(env: &TypeEnv, e: &Expr) -> Result<Type, TypeError> {
    let mut state = InferState::new();
    let t = infer_w(env, e, &mut state)?;
    Ok(state.subst.apply(&t))
}

/// Principal type scheme of `e` under `env`.
pub fn infer_scheme(env: &TypeEnv, e: &Expr) -> Result<Scheme, TypeError> {
    let t = infer_type(env, e)?;
    Ok(generalize(&t, env))
}

/// Verification mode: whether `claimed` is an instance of the principal
/// scheme of `e`. Variables of `claimed` are rigid.
pub fn check_type(env: &TypeEnv, e: &Expr, claimed: &Type) -> Result<bool, TypeError> {
    let mut state = InferState::new();
    let t = infer_w(env, e, &mut state)?;
    let scheme = generalize(&state.subst.apply(&t), &state.subst.apply_env(env));
    // move the claimed type's variables clear of everything used so far
    let mut rename = Substitution::empty();
    let canon = canonicalize(claimed);
    for v in crate::types::FreeVars::free_type_vars(&canon) {
        rename.tmap.insert(v, state.supply.fresh_type());
    }
    for r in crate::types::FreeVars::free_topo_vars(&canon) {
        rename.rmap.insert(r, state.supply.fresh_topo());
    }
    Ok(is_instance(&scheme, &rename.apply(&canon)))
}

/// Type-checks one top-level item, extending `env` with a binding's scheme.
/// Returns the bound name (if any) and the item's scheme.
pub fn infer_item(env: &mut TypeEnv, item: &Item) -> Result<(Option<String>, Scheme), TypeError> {
    match item {
        Item::Binding { name, expr } => {
            let scheme = infer_scheme(env, expr)?;
            env.insert(name.clone(), scheme.clone());
            Ok((Some(name.clone()), scheme))
        }
        Item::Expr(e) => Ok((None, infer_scheme(env, e)?)),
    }
}
