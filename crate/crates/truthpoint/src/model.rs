//! The finite base model over a resolved pool: term evaluation, classical
//! truth of base (truth-free) literals, and negative extensions of sets.
//!
//! The base model interprets the domain `0..N`, saturating `succ`/`+`, the
//! arithmetic relations, and `sent(t)` as "the value of `t` codes a pool
//! statement". Everything about the truth predicate lives in the satisfaction
//! relations built on top (`crate::schemes`).

use std::fmt;

use thiserror::Error;

use crate::set::TruthSet;
use crate::syntax::{Formula, Rel, SentencePool, Term};

/// Errors from base-model evaluation.
#[derive(Error, Debug)]
pub enum ModelError {
    #[error("unresolved self-code `#{0}`")]
    UnresolvedSelfCode(String),
    #[error("unbound variable `{0}`")]
    UnboundVar(String),
    #[error("`{0}` is not a base literal")]
    NotBaseLiteral(String),
}

/// Variable environment for evaluation under quantifiers. Bindings shadow
/// from the right (innermost quantifier wins).
#[derive(Default)]
pub struct Env<'f> {
    stack: Vec<(&'f str, u32)>,
}

impl<'f> Env<'f> {
    pub fn new() -> Env<'f> {
        Env { stack: Vec::new() }
    }

    pub fn push(&mut self, var: &'f str, val: u32) {
        self.stack.push((var, val));
    }

    pub fn pop(&mut self) {
        self.stack.pop();
    }

    pub fn get(&self, var: &str) -> Option<u32> {
        self.stack
            .iter()
            .rev()
            .find(|(v, _)| *v == var)
            .map(|&(_, val)| val)
    }
}

/// Read-only base-model view of a pool.
pub struct BaseModel<'p> {
    pool: &'p SentencePool,
}

impl<'p> BaseModel<'p> {
    pub fn new(pool: &'p SentencePool) -> BaseModel<'p> {
        BaseModel { pool }
    }

    pub fn pool(&self) -> &'p SentencePool {
        self.pool
    }

    pub fn domain_size(&self) -> u32 {
        self.pool.domain_size
    }

    /// Evaluate a term under an environment, saturating at `N - 1`.
    pub fn eval_term(&self, t: &Term, env: &Env<'_>) -> Result<u32, ModelError> {
        let max = self.pool.domain_size - 1;
        Ok(match t {
            Term::Numeral(n) => (*n).min(max),
            Term::SelfCode(name) => {
                return Err(ModelError::UnresolvedSelfCode(name.clone()))
            }
            Term::Var(v) => env
                .get(v)
                .ok_or_else(|| ModelError::UnboundVar(v.clone()))?,
            Term::Succ(inner) => (self.eval_term(inner, env)? + 1).min(max),
            Term::Plus(a, b) => {
                (self.eval_term(a, env)? + self.eval_term(b, env)?).min(max)
            }
        })
    }

    /// Classical truth of a closed base literal: an arithmetic or sentencehood
    /// atom, possibly under one negation. Anything else is an error.
    pub fn true0(&self, f: &Formula) -> Result<bool, ModelError> {
        let env = Env::new();
        match f {
            Formula::ArithAtom(rel, a, b) => {
                Ok(rel.eval(self.eval_term(a, &env)?, self.eval_term(b, &env)?))
            }
            Formula::SentAtom(t) => {
                Ok(self.pool.is_sent_code(self.eval_term(t, &env)?))
            }
            Formula::Not(inner) => match &**inner {
                Formula::ArithAtom(..) | Formula::SentAtom(_) => {
                    Ok(!self.true0(inner)?)
                }
                _ => Err(ModelError::NotBaseLiteral(f.to_string())),
            },
            _ => Err(ModelError::NotBaseLiteral(f.to_string())),
        }
    }

    /// Whether the domain value `v` lies in the negative extension of `x`:
    /// it is a non-sentence code, or it codes a statement whose negation
    /// partner is in `x`.
    pub fn in_negative_extension(&self, v: u32, x: &TruthSet) -> bool {
        match self.pool.stmt_of_code(v) {
            None => true,
            Some(idx) => x.contains(self.pool.partner_idx(idx)),
        }
    }

    /// Statement-level negative extension: indices whose partners are in `x`
    /// (the partner image of `x`). Non-sentence codes are handled by
    /// [`BaseModel::in_negative_extension`].
    pub fn negative_extension(&self, x: &TruthSet) -> TruthSet {
        let mut out = TruthSet::empty(x.capacity());
        for i in x.iter() {
            out.insert(self.pool.partner_idx(i));
        }
        out
    }

    /// Code-level negative extension, for display: partner codes of members
    /// of `x` plus every non-sentence code, sorted.
    pub fn negative_extension_codes(&self, x: &TruthSet) -> Vec<u32> {
        let mut out = Vec::new();
        for v in 0..self.pool.domain_size {
            if self.in_negative_extension(v, x) {
                out.push(v);
            }
        }
        out
    }
}

impl fmt::Debug for BaseModel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BaseModel(domain {})", self.pool.domain_size)
    }
}

/// Convenience: classical truth of a relation between two closed terms.
pub fn eval_rel(rel: Rel, a: u32, b: u32) -> bool {
    rel.eval(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::load_pool;

    fn pool() -> SentencePool {
        load_pool(
            "domain 8;\nsentence tau := Tr(#tau);\nsentence lam := not Tr(#lam);\nclose negation;\nclose instances;",
        )
        .unwrap()
    }

    #[test]
    fn term_evaluation_saturates_and_reads_env() {
        let p = pool();
        let m = BaseModel::new(&p);
        let mut env = Env::new();
        env.push("x", 3);
        let t = Term::Plus(
            Box::new(Term::Var("x".into())),
            Box::new(Term::Numeral(6)),
        );
        assert_eq!(m.eval_term(&t, &env).unwrap(), 7); // saturates at N-1
        env.push("x", 1); // shadowing
        assert_eq!(m.eval_term(&t, &env).unwrap(), 7.min(1 + 6));
        env.pop();
        env.pop();
        assert!(matches!(
            m.eval_term(&Term::Var("x".into()), &env),
            Err(ModelError::UnboundVar(_))
        ));
    }

    #[test]
    fn base_literal_truth() {
        let p = pool();
        let m = BaseModel::new(&p);
        assert_eq!(m.true0(&Formula::truth()).unwrap(), true);
        assert_eq!(m.true0(&Formula::falsity()).unwrap(), false);
        assert_eq!(
            m.true0(&Formula::not(Formula::falsity())).unwrap(),
            true
        );
        // sent: codes 1 (tau) and 2 (its partner) and 3/4 (lam family) exist.
        assert_eq!(
            m.true0(&Formula::SentAtom(Term::Numeral(1))).unwrap(),
            true
        );
        assert_eq!(
            m.true0(&Formula::SentAtom(Term::Numeral(0))).unwrap(),
            false
        );
        assert!(m.true0(&Formula::tr(1)).is_err());
        assert!(m
            .true0(&Formula::and(Formula::truth(), Formula::truth()))
            .is_err());
    }

    #[test]
    fn negative_extension_tracks_partners_and_nonsentences() {
        let p = pool();
        let m = BaseModel::new(&p);
        let tau = p.stmt_of_code(1).unwrap();
        let neg_tau_code = p.partner_code(1).unwrap();
        let mut x = p.empty_set();
        x.insert(tau);
        // The partner of tau is negatively supported; tau itself is not.
        assert!(m.in_negative_extension(neg_tau_code, &x));
        assert!(!m.in_negative_extension(1, &x));
        // Non-sentence codes are always in the negative extension.
        assert!(m.in_negative_extension(0, &x));
        assert!(m.in_negative_extension(7, &x));
        let neg = m.negative_extension(&x);
        assert_eq!(neg.card(), 1);
        assert!(neg.contains(p.stmt_of_code(neg_tau_code).unwrap()));
        let codes = m.negative_extension_codes(&x);
        assert!(codes.contains(&0) && codes.contains(&neg_tau_code) && !codes.contains(&1));
    }
}
