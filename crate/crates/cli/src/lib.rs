//! Interpreter session shared by the `run`, `type` and `repl` commands.

use std::collections::BTreeSet;
use std::fmt;

use tml_core::collections::Value;
use tml_core::error::RuntimeError;
use tml_core::eval::{Env, EvalConfig, Evaluator};
use tml_core::infer::{infer_item, infer_scheme, TypeError};
use tml_core::syntax::{parse_expr_with, parse_program_with, Item, Program, SyntaxError};
use tml_core::types::{Scheme, TypeEnv};

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("runtime error: {0}")]
    Runtime(#[from] RuntimeError),
}

impl SessionError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            SessionError::Syntax(_) | SessionError::Type(_) => 1,
            SessionError::Runtime(_) => 2,
        }
    }
}

/// Result of one top-level item.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub name: Option<String>,
    pub scheme: Scheme,
    pub value: Option<Value>,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name.as_deref().unwrap_or("-");
        write!(f, "{name} : {}", self.scheme)?;
        if let Some(v) = &self.value {
            write!(f, " = {v}")?;
        }
        Ok(())
    }
}

/// Type and runtime environments accumulated over a sequence of items.
pub struct Session {
    types: TypeEnv,
    values: Env,
    globals: BTreeSet<String>,
    evaluator: Evaluator,
}

impl Session {
    pub fn new(config: EvalConfig) -> Self {
        Session {
            types: TypeEnv::new(),
            values: Env::new(),
            globals: BTreeSet::new(),
            evaluator: Evaluator::new(config),
        }
    }

    pub fn parse(&self, src: &str) -> Result<Program, SyntaxError> {
        parse_program_with(src, &self.globals)
    }

    /// Types every item without changing the session.
    pub fn check(&self, program: &Program) -> Result<Vec<Outcome>, TypeError> {
        let mut types = self.types.clone();
        program
            .items
            .iter()
            .map(|item| infer_item(&mut types, item).map(|(name, scheme)| Outcome { name, scheme, value: None }))
            .collect()
    }

    /// Type-checks the whole program, then evaluates it item by item,
    /// handing each result to `emit` as soon as it is available.
    pub fn run(&mut self, program: &Program, mut emit: impl FnMut(&Outcome)) -> Result<(), SessionError> {
        let typed = self.check(program)?;
        for (item, mut outcome) in program.items.iter().zip(typed) {
            match item {
                Item::Binding { name, expr } => {
                    let v = self.evaluator.eval(&self.values, expr)?;
                    self.values = self.values.with_value(name.clone(), v.clone());
                    self.types.insert(name.clone(), outcome.scheme.clone());
                    self.globals.insert(name.clone());
                    outcome.value = Some(v);
                }
                Item::Expr(e) => {
                    outcome.value = Some(self.evaluator.eval(&self.values, e)?);
                }
            }
            emit(&outcome);
        }
        Ok(())
    }

    pub fn run_source(&mut self, src: &str) -> Result<Vec<Outcome>, SessionError> {
        let program = self.parse(src)?;
        let mut out = Vec::new();
        self.run(&program, |o| out.push(o.clone()))?;
        Ok(out)
    }

    /// Principal type of an expression in the current environment.
    pub fn type_of(&self, src: &str) -> Result<Scheme, SessionError> {
        let e = parse_expr_with(src, &self.globals)?;
        Ok(infer_scheme(&self.types, &e)?)
    }
}
