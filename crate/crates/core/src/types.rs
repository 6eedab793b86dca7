//! The two-sorted type algebra: types whose collection constructor carries a
//! topology, type schemes quantified over both sorts, and substitutions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TVar(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RVar(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseType {
    Int,
    Float,
    Bool,
    String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseTopo {
    Bag,
    Set,
    Seq,
    Grid,
}

impl BaseType {
    pub fn name(self) -> &'static str {
        match self {
            BaseType::Int => "int",
            BaseType::Float => "float",
            BaseType::Bool => "bool",
            BaseType::String => "string",
        }
    }
}

impl BaseTopo {
    pub fn name(self) -> &'static str {
        match self {
            BaseTopo::Bag => "bag",
            BaseTopo::Set => "set",
            BaseTopo::Seq => "seq",
            BaseTopo::Grid => "grid",
        }
    }

    pub fn from_name(name: &str) -> Option<BaseTopo> {
        Some(match name {
            "bag" => BaseTopo::Bag,
            "set" => BaseTopo::Set,
            "seq" => BaseTopo::Seq,
            "grid" => BaseTopo::Grid,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Topology {
    Base(BaseTopo),
    Var(RVar),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Base(BaseType),
    Var(TVar),
    Arrow(Box<Type>, Box<Type>),
    Product(Box<Type>, Box<Type>),
    /// `[content]topology`
    Coll(Box<Type>, Topology),
}

impl Type {
    pub const INT: Type = Type::Base(BaseType::Int);
    pub const FLOAT: Type = Type::Base(BaseType::Float);
    pub const BOOL: Type = Type::Base(BaseType::Bool);
    pub const STRING: Type = Type::Base(BaseType::String);

    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }

    pub fn product(a: Type, b: Type) -> Type {
        Type::Product(Box::new(a), Box::new(b))
    }

    pub fn coll(content: Type, topo: Topology) -> Type {
        Type::Coll(Box::new(content), topo)
    }

    pub fn seq(content: Type) -> Type {
        Type::coll(content, Topology::Base(BaseTopo::Seq))
    }

    pub fn occurs(&self, v: TVar) -> bool {
        match self {
            Type::Base(_) => false,
            Type::Var(w) => *w == v,
            Type::Arrow(a, b) | Type::Product(a, b) => a.occurs(v) || b.occurs(v),
            Type::Coll(c, _) => c.occurs(v),
        }
    }

    fn visit_vars(&self, on_t: &mut impl FnMut(TVar), on_r: &mut impl FnMut(RVar)) {
        match self {
            Type::Base(_) => {}
            Type::Var(v) => on_t(*v),
            Type::Arrow(a, b) | Type::Product(a, b) => {
                a.visit_vars(on_t, on_r);
                b.visit_vars(on_t, on_r);
            }
            Type::Coll(c, topo) => {
                if let Topology::Var(r) = topo {
                    on_r(*r);
                }
                c.visit_vars(on_t, on_r);
            }
        }
    }
}

/// Free type variables and free topology variables.
pub trait FreeVars {
    fn free_type_vars(&self) -> BTreeSet<TVar>;
    fn free_topo_vars(&self) -> BTreeSet<RVar>;
}

impl FreeVars for Type {
    fn free_type_vars(&self) -> BTreeSet<TVar> {
        let mut out = BTreeSet::new();
        self.visit_vars(
            &mut |v| {
                out.insert(v);
            },
            &mut |_| {},
        );
        out
    }

    fn free_topo_vars(&self) -> BTreeSet<RVar> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |_| {}, &mut |r| {
            out.insert(r);
        });
        out
    }
}

impl FreeVars for Scheme {
    fn free_type_vars(&self) -> BTreeSet<TVar> {
        &self.body.free_type_vars() - &self.tvars
    }

    fn free_topo_vars(&self) -> BTreeSet<RVar> {
        &self.body.free_topo_vars() - &self.rvars
    }
}

impl FreeVars for TypeEnv {
    fn free_type_vars(&self) -> BTreeSet<TVar> {
        self.map.values().flat_map(|s| s.free_type_vars()).collect()
    }

    fn free_topo_vars(&self) -> BTreeSet<RVar> {
        self.map.values().flat_map(|s| s.free_topo_vars()).collect()
    }
}

/// `∀[tvars][rvars]. body`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    pub tvars: BTreeSet<TVar>,
    pub rvars: BTreeSet<RVar>,
    pub body: Type,
}

impl Scheme {
    pub fn mono(body: Type) -> Scheme {
        Scheme { tvars: BTreeSet::new(), rvars: BTreeSet::new(), body }
    }

    /// Builds a scheme, dropping quantifiers that do not occur in the body.
    pub fn new(tvars: BTreeSet<TVar>, rvars: BTreeSet<RVar>, body: Type) -> Scheme {
        let mut s = Scheme { tvars, rvars, body };
        s.normalize();
        s
    }

    pub fn normalize(&mut self) {
        let ft = self.body.free_type_vars();
        let fr = self.body.free_topo_vars();
        self.tvars.retain(|v| ft.contains(v));
        self.rvars.retain(|v| fr.contains(v));
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    pub tmap: BTreeMap<TVar, Type>,
    pub rmap: BTreeMap<RVar, Topology>,
}

impl Substitution {
    pub fn empty() -> Self {
        Substitution::default()
    }

    pub fn bind_type(v: TVar, t: Type) -> Self {
        let mut s = Substitution::empty();
        s.tmap.insert(v, t);
        s
    }

    pub fn bind_topo(v: RVar, r: Topology) -> Self {
        let mut s = Substitution::empty();
        s.rmap.insert(v, r);
        s
    }

    pub fn is_empty(&self) -> bool {
        self.tmap.is_empty() && self.rmap.is_empty()
    }

    pub fn apply_topo(&self, r: Topology) -> Topology {
        match r {
            Topology::Var(v) => self.rmap.get(&v).copied().unwrap_or(r),
            Topology::Base(_) => r,
        }
    }

    /// Simultaneous replacement in both sorts.
    pub fn apply(&self, t: &Type) -> Type {
        if self.is_empty() {
            return t.clone();
        }
        match t {
            Type::Base(_) => t.clone(),
            Type::Var(v) => self.tmap.get(v).cloned().unwrap_or_else(|| t.clone()),
            Type::Arrow(a, b) => Type::arrow(self.apply(a), self.apply(b)),
            Type::Product(a, b) => Type::product(self.apply(a), self.apply(b)),
            Type::Coll(c, r) => Type::coll(self.apply(c), self.apply_topo(*r)),
        }
    }

    /// Applies to the free variables of a scheme only.
    pub fn apply_scheme(&self, s: &Scheme) -> Scheme {
        let mut restricted = self.clone();
        restricted.tmap.retain(|v, _| !s.tvars.contains(v));
        restricted.rmap.retain(|v, _| !s.rvars.contains(v));
        Scheme { tvars: s.tvars.clone(), rvars: s.rvars.clone(), body: restricted.apply(&s.body) }
    }

    pub fn apply_env(&self, env: &TypeEnv) -> TypeEnv {
        TypeEnv { map: env.map.iter().map(|(k, s)| (k.clone(), self.apply_scheme(s))).collect() }
    }

    /// `after ∘ before`: applying the result equals applying `before` then `after`.
    pub fn compose(after: &Substitution, before: &Substitution) -> Substitution {
        let mut tmap: BTreeMap<TVar, Type> = before.tmap.iter().map(|(v, t)| (*v, after.apply(t))).collect();
        for (v, t) in &after.tmap {
            tmap.entry(*v).or_insert_with(|| t.clone());
        }
        let mut rmap: BTreeMap<RVar, Topology> = before.rmap.iter().map(|(v, r)| (*v, after.apply_topo(*r))).collect();
        for (v, r) in &after.rmap {
            rmap.entry(*v).or_insert(*r);
        }
        tmap.retain(|v, t| *t != Type::Var(*v));
        rmap.retain(|v, r| *r != Topology::Var(*v));
        Substitution { tmap, rmap }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypeEnv {
    map: BTreeMap<String, Scheme>,
}

impl TypeEnv {
    pub fn new() -> Self {
        TypeEnv::default()
    }

    pub fn get(&self, name: &str) -> Option<&Scheme> {
        self.map.get(name)
    }

    pub fn insert(&mut self, name: impl Into<String>, scheme: Scheme) {
        self.map.insert(name.into(), scheme);
    }

    pub fn extended(&self, name: impl Into<String>, scheme: Scheme) -> TypeEnv {
        let mut env = self.clone();
        env.insert(name, scheme);
        env
    }

    pub fn contains(&self, name: &str) -> bool {
        self.map.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }
}

/// Source of fresh variables of both sorts; confined to one inference run.
#[derive(Debug, Clone, Default)]
pub struct FreshSupply {
    next_tvar: u32,
    next_rvar: u32,
}

impl FreshSupply {
    pub fn new() -> Self {
        FreshSupply::default()
    }

    /// A supply whose variables are all greater than every variable of `t`.
    pub fn above(t: &Type) -> Self {
        let mut s = FreshSupply::new();
        s.reserve(t);
        s
    }

    pub fn reserve(&mut self, t: &Type) {
        if let Some(v) = t.free_type_vars().last() {
            self.next_tvar = self.next_tvar.max(v.0 + 1);
        }
        if let Some(r) = t.free_topo_vars().last() {
            self.next_rvar = self.next_rvar.max(r.0 + 1);
        }
    }

    pub fn fresh_t(&mut self) -> TVar {
        let v = TVar(self.next_tvar);
        self.next_tvar += 1;
        v
    }

    pub fn fresh_r(&mut self) -> RVar {
        let v = RVar(self.next_rvar);
        self.next_rvar += 1;
        v
    }

    pub fn fresh_type(&mut self) -> Type {
        Type::Var(self.fresh_t())
    }

    pub fn fresh_topo(&mut self) -> Topology {
        Topology::Var(self.fresh_r())
    }
}

/// Quantifies the variables free in `t` but not in `env`.
pub fn generalize(t: &Type, env: &TypeEnv) -> Scheme {
    Scheme {
        tvars: &t.free_type_vars() - &env.free_type_vars(),
        rvars: &t.free_topo_vars() - &env.free_topo_vars(),
        body: t.clone(),
    }
}

/// Replaces every quantified variable by a fresh one of the same sort.
pub fn instantiate(s: &Scheme, fresh: &mut FreshSupply) -> Type {
    let mut sub = Substitution::empty();
    for v in &s.tvars {
        sub.tmap.insert(*v, fresh.fresh_type());
    }
    for r in &s.rvars {
        sub.rmap.insert(*r, fresh.fresh_topo());
    }
    sub.apply(&s.body)
}

/// Renames variables of both sorts to `0, 1, …` in order of first occurrence.
pub fn canonicalize(t: &Type) -> Type {
    canonicalize_all(std::slice::from_ref(t)).pop().expect("one type")
}

/// Canonicalizes several types with one shared renaming.
pub fn canonicalize_all(ts: &[Type]) -> Vec<Type> {
    let mut sub = Substitution::empty();
    let (mut nt, mut nr) = (0u32, 0u32);
    for t in ts {
        t.visit_vars(
            &mut |v| {
                sub.tmap.entry(v).or_insert_with(|| {
                    nt += 1;
                    Type::Var(TVar(nt - 1))
                });
            },
            &mut |r| {
                sub.rmap.entry(r).or_insert_with(|| {
                    nr += 1;
                    Topology::Var(RVar(nr - 1))
                });
            },
        );
    }
    ts.iter().map(|t| sub.apply(t)).collect()
}

/// Equality up to a consistent renaming of type and topology variables.
pub fn alpha_eq(a: &Type, b: &Type) -> bool {
    canonicalize(a) == canonicalize(b)
}

/// Whether `t` is an instance of `s`: some substitution of the quantified
/// variables turns the body into `t`. Other variables are rigid on both sides.
pub fn is_instance(s: &Scheme, t: &Type) -> bool {
    let mut sub = Substitution::empty();
    match_type(s, &s.body, t, &mut sub)
}

fn match_type(s: &Scheme, pat: &Type, t: &Type, sub: &mut Substitution) -> bool {
    match (pat, t) {
        (Type::Var(v), _) if s.tvars.contains(v) => match sub.tmap.get(v) {
            Some(bound) => bound == t,
            None => {
                sub.tmap.insert(*v, t.clone());
                true
            }
        },
        (Type::Var(v), Type::Var(w)) => v == w,
        (Type::Base(a), Type::Base(b)) => a == b,
        (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) | (Type::Product(a1, b1), Type::Product(a2, b2)) => {
            match_type(s, a1, a2, sub) && match_type(s, b1, b2, sub)
        }
        (Type::Coll(c1, r1), Type::Coll(c2, r2)) => {
            let topo_ok = match r1 {
                Topology::Var(v) if s.rvars.contains(v) => match sub.rmap.get(v) {
                    Some(bound) => bound == r2,
                    None => {
                        sub.rmap.insert(*v, *r2);
                        true
                    }
                },
                _ => r1 == r2,
            };
            topo_ok && match_type(s, c1, c2, sub)
        }
        _ => false,
    }
}

/// Assigns printable names to variables in order of first use.
#[derive(Debug, Default)]
pub struct Namer {
    tnames: HashMap<TVar, String>,
    rnames: HashMap<RVar, String>,
}

impl Namer {
    pub fn new() -> Self {
        Namer::default()
    }

    fn tname(&mut self, v: TVar) -> String {
        let n = self.tnames.len();
        self.tnames.entry(v).or_insert_with(|| format!("'{}", letter_name(b"abcdefghijklmnopqrstuvwxyz", n))).clone()
    }

    fn rname(&mut self, r: RVar) -> String {
        let n = self.rnames.len();
        self.rnames.entry(r).or_insert_with(|| format!("!{}", letter_name(b"tuvwxyz", n))).clone()
    }

    pub fn topo(&mut self, r: Topology) -> String {
        match r {
            Topology::Base(b) => b.name().to_string(),
            Topology::Var(v) => self.rname(v),
        }
    }

    pub fn show(&mut self, t: &Type) -> String {
        let mut out = String::new();
        self.write(&mut out, t, 0);
        out
    }

    // 0: arrow context, 1: arrow lhs, 2: product operand
    fn write(&mut self, out: &mut String, t: &Type, ctx: u8) {
        match t {
            Type::Base(b) => out.push_str(b.name()),
            Type::Var(v) => out.push_str(&self.tname(*v)),
            Type::Coll(c, r) => {
                out.push('[');
                self.write(out, c, 0);
                out.push(']');
                out.push_str(&self.topo(*r));
            }
            Type::Arrow(a, b) => {
                if ctx > 0 {
                    out.push('(');
                }
                self.write(out, a, 1);
                out.push_str(" -> ");
                self.write(out, b, 0);
                if ctx > 0 {
                    out.push(')');
                }
            }
            Type::Product(a, b) => {
                if ctx > 1 {
                    out.push('(');
                }
                self.write(out, a, 2);
                out.push_str(" * ");
                self.write(out, b, 2);
                if ctx > 1 {
                    out.push(')');
                }
            }
        }
    }
}

fn letter_name(letters: &[u8], n: usize) -> String {
    let c = letters[n % letters.len()] as char;
    match n / letters.len() {
        0 => c.to_string(),
        k => format!("{c}{k}"),
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Namer::new().show(self))
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Namer::new().topo(*self))
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.body.fmt(f)
    }
}

/// Parses the printed type syntax, e.g. `('a -> 'b) -> ['a]!t -> ['b]!t`.
/// Named variables receive fresh ids from `fresh`.
pub fn parse_type_with(src: &str, fresh: &mut FreshSupply) -> Result<Type, String> {
    let mut p =
        TypeParser { chars: src.chars().collect(), pos: 0, fresh, tnames: HashMap::new(), rnames: HashMap::new() };
    let t = p.arrow()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(format!("unexpected `{}` at offset {}", p.chars[p.pos], p.pos));
    }
    Ok(t)
}

pub fn parse_type(src: &str) -> Result<Type, String> {
    parse_type_with(src, &mut FreshSupply::new())
}

struct TypeParser<'a> {
    chars: Vec<char>,
    pos: usize,
    fresh: &'a mut FreshSupply,
    tnames: HashMap<String, TVar>,
    rnames: HashMap<String, RVar>,
}

impl TypeParser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        if self.chars[self.pos..].iter().take(n).copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> String {
        let mut w = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_alphanumeric() || c == '_' {
                w.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        w
    }

    fn arrow(&mut self) -> Result<Type, String> {
        let lhs = self.product()?;
        if self.eat("->") {
            return Ok(Type::arrow(lhs, self.arrow()?));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Type, String> {
        let mut t = self.atom()?;
        while self.eat("*") {
            t = Type::product(t, self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Type, String> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let t = self.arrow()?;
                if !self.eat(")") {
                    return Err("expected `)`".into());
                }
                Ok(t)
            }
            Some('[') => {
                self.pos += 1;
                let content = self.arrow()?;
                if !self.eat("]") {
                    return Err("expected `]`".into());
                }
                let topo = self.topology()?;
                Ok(Type::coll(content, topo))
            }
            Some('\'') => {
                self.pos += 1;
                let name = self.word();
                let fresh = &mut *self.fresh;
                let v = *self.tnames.entry(name).or_insert_with(|| fresh.fresh_t());
                Ok(Type::Var(v))
            }
            Some(_) => match self.word().as_str() {
                "int" => Ok(Type::INT),
                "float" => Ok(Type::FLOAT),
                "bool" => Ok(Type::BOOL),
                "string" => Ok(Type::STRING),
                w => Err(format!("unknown type `{w}`")),
            },
            None => Err("unexpected end of type".into()),
        }
    }

    fn topology(&mut self) -> Result<Topology, String> {
        self.skip_ws();
        if self.eat("!") {
            let name = self.word();
            let fresh = &mut *self.fresh;
            let r = *self.rnames.entry(name).or_insert_with(|| fresh.fresh_r());
            return Ok(Topology::Var(r));
        }
        let w = self.word();
        BaseTopo::from_name(&w).map(Topology::Base).ok_or_else(|| format!("unknown topology `{w}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: u32) -> Type {
        Type::Var(TVar(n))
    }

    fn t(n: u32) -> Topology {
        Topology::Var(RVar(n))
    }

    fn ty(src: &str) -> Type {
        parse_type(src).unwrap()
    }

    #[test]
    fn free_vars_of_collection() {
        let c = Type::coll(a(0), t(0));
        assert_eq!(c.free_type_vars(), BTreeSet::from([TVar(0)]));
        let nested = Type::coll(Type::coll(Type::INT, t(1)), t(2));
        assert_eq!(nested.free_topo_vars(), BTreeSet::from([RVar(1), RVar(2)]));
        assert!(Type::INT.free_type_vars().is_empty());
        assert!(Type::arrow(Type::INT, Type::INT).free_topo_vars().is_empty());
    }

    #[test]
    fn free_vars_of_scheme_subtract_quantified() {
        // ∀[a1][t1]. [a1]t1 → [a2]t2
        let s = Scheme {
            tvars: BTreeSet::from([TVar(1)]),
            rvars: BTreeSet::from([RVar(1)]),
            body: Type::arrow(Type::coll(a(1), t(1)), Type::coll(a(2), t(2))),
        };
        assert_eq!(s.free_type_vars(), BTreeSet::from([TVar(2)]));
        assert_eq!(s.free_topo_vars(), BTreeSet::from([RVar(2)]));
    }

    #[test]
    fn free_vars_of_environment() {
        let mut env = TypeEnv::new();
        env.insert("x", Scheme::mono(Type::coll(a(3), t(4))));
        env.insert("y", Scheme::new(BTreeSet::from([TVar(5)]), BTreeSet::new(), a(5)));
        assert_eq!(env.free_type_vars(), BTreeSet::from([TVar(3)]));
        assert_eq!(env.free_topo_vars(), BTreeSet::from([RVar(4)]));
    }

    #[test]
    fn apply_substitution() {
        let mut s = Substitution::bind_type(TVar(0), Type::INT);
        s.rmap.insert(RVar(0), Topology::Base(BaseTopo::Seq));
        assert_eq!(s.apply(&Type::coll(a(0), t(0))), ty("[int]seq"));
        let c = Type::coll(a(0), t(0));
        assert_eq!(Substitution::empty().apply(&c), c);
    }

    #[test]
    fn composition_law() {
        let first = Substitution::bind_type(TVar(0), a(1));
        let second = Substitution::bind_type(TVar(1), Type::BOOL);
        let both = Substitution::compose(&second, &first);
        assert_eq!(both.apply(&a(0)), Type::BOOL);
        assert_eq!(both.apply(&a(1)), Type::BOOL);
    }

    #[test]
    fn generalize_examples() {
        let id = Type::arrow(Type::coll(a(0), t(0)), Type::coll(a(0), t(0)));
        let s = generalize(&id, &TypeEnv::new());
        assert_eq!(s.tvars, BTreeSet::from([TVar(0)]));
        assert_eq!(s.rvars, BTreeSet::from([RVar(0)]));

        let mut env = TypeEnv::new();
        env.insert("y", Scheme::mono(a(0)));
        let s = generalize(&Type::arrow(Type::coll(a(0), t(0)), Type::INT), &env);
        assert!(s.tvars.is_empty());
        assert_eq!(s.rvars, BTreeSet::from([RVar(0)]));

        let s = generalize(&Type::INT, &TypeEnv::new());
        assert!(s.tvars.is_empty() && s.rvars.is_empty());
    }

    #[test]
    fn instantiate_cons_scheme() {
        let body = ty("'a -> ['a]!t -> ['a]!t");
        let scheme = generalize(&body, &TypeEnv::new());
        let mut fresh = FreshSupply::above(&body);
        let i1 = instantiate(&scheme, &mut fresh);
        let i2 = instantiate(&scheme, &mut fresh);
        assert!(alpha_eq(&i1, &body));
        assert!(i1.free_type_vars().is_disjoint(&scheme.tvars));
        assert!(i1.free_topo_vars().is_disjoint(&scheme.rvars));
        assert!(i1.free_type_vars().is_disjoint(&i2.free_type_vars()));
        assert!(i1.free_topo_vars().is_disjoint(&i2.free_topo_vars()));
        assert_eq!(instantiate(&Scheme::mono(Type::INT), &mut fresh), Type::INT);
    }

    #[test]
    fn printing() {
        assert_eq!(ty("['x]!q -> ['x]!q").to_string(), "['a]!t -> ['a]!t");
        assert_eq!(ty("('a -> 'b) -> ['a]!t -> ['b]!t").to_string(), "('a -> 'b) -> ['a]!t -> ['b]!t");
        assert_eq!(ty("[int]seq -> [int]seq").to_string(), "[int]seq -> [int]seq");
        assert_eq!(ty("(int * bool) * ('a -> 'a)").to_string(), "(int * bool) * ('a -> 'a)");
        assert_eq!(ty("[[bool]!u]!v").to_string(), "[[bool]!t]!u");
        assert_eq!(ty("(int -> int) -> int").to_string(), "(int -> int) -> int");
    }

    #[test]
    fn alpha_equivalence_is_per_sort() {
        assert!(alpha_eq(&ty("['a]!t -> ['b]!u"), &ty("['b]!u -> ['c]!w")));
        assert!(!alpha_eq(&ty("['a]!t -> ['b]!t"), &ty("['a]!t -> ['a]!t")));
        assert!(!alpha_eq(&ty("['a]!t -> ['a]!u"), &ty("['a]!t -> ['a]!t")));
    }

    #[test]
    fn instances() {
        let id = generalize(&ty("['a]!t -> ['a]!t"), &TypeEnv::new());
        assert!(is_instance(&id, &ty("[int]seq -> [int]seq")));
        assert!(!is_instance(&id, &ty("[int]seq -> [int]set")));
        let prefix_sum = Scheme::mono(ty("[int]seq -> [int]seq"));
        let mut fresh = FreshSupply::new();
        fresh.fresh_r();
        let rigid = parse_type_with("[int]!r -> [int]!r", &mut fresh).unwrap();
        assert!(!is_instance(&prefix_sum, &rigid));
    }

    #[test]
    fn scheme_normalization_drops_vacuous_quantifiers() {
        let s = Scheme::new(BTreeSet::from([TVar(0), TVar(9)]), BTreeSet::from([RVar(3)]), a(0));
        assert_eq!(s.tvars, BTreeSet::from([TVar(0)]));
        assert!(s.rvars.is_empty());
    }
}
