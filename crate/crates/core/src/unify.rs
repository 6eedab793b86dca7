//! Most-general unification over types and topologies.

use std::fmt;

use crate::types::{Namer, Substitution, Topology, Type};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub lhs: Type,
    pub rhs: Type,
}

impl Constraint {
    pub fn new(lhs: Type, rhs: Type) -> Self {
        Constraint { lhs, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnifyError {
    #[error("{}", show_pair("cannot unify", .0, .1))]
    Mismatch(Type, Type),
    #[error("{}", show_pair("occurs check failed:", &Type::Var(*.0), .1))]
    OccursCheck(crate::types::TVar, Type),
    #[error("topology mismatch: {0} and {1} are different topologies")]
    TopoMismatch(Topology, Topology),
}

fn show_pair(prefix: &str, a: &Type, b: &Type) -> String {
    let mut namer = Namer::new();
    let (a, b) = (namer.show(a), namer.show(b));
    format!("{prefix} {a} with {b}")
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut namer = Namer::new();
        let lhs = namer.show(&self.lhs);
        write!(f, "{lhs} = {}", namer.show(&self.rhs))
    }
}

/// Unifier of two topologies. Topologies are not recursive, so no occurs check
/// is needed.
pub fn mgu_r(lhs: Topology, rhs: Topology) -> Result<Substitution, UnifyError> {
    match (lhs, rhs) {
        _ if lhs == rhs => Ok(Substitution::empty()),
        (Topology::Var(v), r) | (r, Topology::Var(v)) => Ok(Substitution::bind_topo(v, r)),
        (Topology::Base(_), Topology::Base(_)) => Err(UnifyError::TopoMismatch(lhs, rhs)),
    }
}

/// Most general unifier of a set of equations.
pub fn mgu(constraints: &[Constraint]) -> Result<Substitution, UnifyError> {
    let mut work: Vec<(Type, Type)> = constraints.iter().rev().map(|c| (c.lhs.clone(), c.rhs.clone())).collect();
    let mut acc = Substitution::empty();
    while let Some((lhs, rhs)) = work.pop() {
        let step = match (lhs, rhs) {
            (a, b) if a == b => continue,
            (Type::Var(v), t) | (t, Type::Var(v)) => {
                if t.occurs(v) {
                    return Err(UnifyError::OccursCheck(v, t));
                }
                Substitution::bind_type(v, t)
            }
            (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) | (Type::Product(a1, b1), Type::Product(a2, b2)) => {
                work.push((*b1, *b2));
                work.push((*a1, *a2));
                continue;
            }
            (Type::Coll(c1, r1), Type::Coll(c2, r2)) => {
                let phi = mgu_r(r1, r2)?;
                work.push((phi.apply(&c1), phi.apply(&c2)));
                phi
            }
            (a, b) => return Err(UnifyError::Mismatch(a, b)),
        };
        for (a, b) in work.iter_mut() {
            *a = step.apply(a);
            *b = step.apply(b);
        }
        acc = Substitution::compose(&step, &acc);
    }
    Ok(acc)
}

/// Unifier of a single pair.
pub fn unify(lhs: &Type, rhs: &Type) -> Result<Substitution, UnifyError> {
    mgu(&[Constraint::new(lhs.clone(), rhs.clone())])
}
