//! Model checking of the axiomatic truth theories over a pool, the
//! compositional truth-definition family backing the weakest of them, and
//! the categoricity sweep comparing fixed-point membership against model
//! membership across entire candidate spaces.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::consequence::{implication_tables, ConsequenceMode, ImplicationTables};
use crate::fixpoint::{
    classically_sound, neg_tr_downward_closed, tr_downward_closed, CandidateSpace,
};
use crate::jumps::{JumpConfig, JumpEngine, JumpError, JumpKind, WitnessPolicy};
use crate::model::BaseModel;
use crate::schemes::{
    classical_sat, com_instance, con_instance, is_com_shaped, is_con_shaped, xi_onestep,
    xi_star_onestep,
};
use crate::set::TruthSet;
use crate::syntax::{instantiate, is_tr_positive, Formula, PoolError, SentencePool, Term};

/// The axiom systems the checker knows.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TheoryKind {
    IT,
    ITMinus,
    ITStar,
    ITStarC,
    ITStarMC,
    PK,
    PKPlus,
}

impl TheoryKind {
    pub const ALL: [TheoryKind; 7] = [
        TheoryKind::IT,
        TheoryKind::ITMinus,
        TheoryKind::ITStar,
        TheoryKind::ITStarC,
        TheoryKind::ITStarMC,
        TheoryKind::PK,
        TheoryKind::PKPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoryKind::IT => "it",
            TheoryKind::ITMinus => "it-minus",
            TheoryKind::ITStar => "it-star",
            TheoryKind::ITStarC => "it-star-c",
            TheoryKind::ITStarMC => "it-star-mc",
            TheoryKind::PK => "pk",
            TheoryKind::PKPlus => "pk-plus",
        }
    }

    /// The starred variants read their witness scheme downward through
    /// ascriptions.
    pub fn uses_starred_scheme(self) -> bool {
        matches!(
            self,
            TheoryKind::ITStar | TheoryKind::ITStarC | TheoryKind::ITStarMC
        )
    }

    pub fn needs_pi_family(self) -> bool {
        matches!(self, TheoryKind::PK | TheoryKind::PKPlus)
    }
}

impl std::str::FromStr for TheoryKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        // Accept the canonical kebab name plus common spellings: case is
        // ignored, `-`/`_` are dropped, `*` reads as "star", `+` as "plus"
        // (so "IT", "ITminus", "it*c", "PK+" all resolve).
        let norm: String = s
            .to_ascii_lowercase()
            .replace('*', "star")
            .replace('+', "plus")
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        TheoryKind::ALL
            .into_iter()
            .find(|t| t.name().replace('-', "") == norm)
            .ok_or_else(|| format!("unknown theory `{s}`"))
    }
}

/// Individual axioms, shared across the theories.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AxiomId {
    It1,
    It2,
    It3,
    It4,
    It5,
    It6,
    It7,
    /// The one-directional (upward) half of the ascription biconditional.
    ItMinus6,
    /// The one-directional (upward) half of the negated-ascription
    /// biconditional.
    ItMinus7,
    It8,
    It9,
    It10,
    TrOut,
    /// Every coded consistency instance is true.
    ConAx,
    /// Every coded completeness instance is true.
    ComAx,
    /// The truth-definition biconditional at every base statement.
    TbPi,
    /// Truth is exactly what follows from a true truth-definition instance.
    PkTr,
    /// The uniform disquotation biconditional for truth-positive statements.
    Putb,
}

impl AxiomId {
    pub fn name(self) -> &'static str {
        match self {
            AxiomId::It1 => "IT1",
            AxiomId::It2 => "IT2",
            AxiomId::It3 => "IT3",
            AxiomId::It4 => "IT4",
            AxiomId::It5 => "IT5",
            AxiomId::It6 => "IT6",
            AxiomId::It7 => "IT7",
            AxiomId::ItMinus6 => "IT6-",
            AxiomId::ItMinus7 => "IT7-",
            AxiomId::It8 => "IT8",
            AxiomId::It9 => "IT9",
            AxiomId::It10 => "IT10",
            AxiomId::TrOut => "Tr-Out",
            AxiomId::ConAx => "CON",
            AxiomId::ComAx => "COM",
            AxiomId::TbPi => "TBpi",
            AxiomId::PkTr => "PK-Tr",
            AxiomId::Putb => "PUTB",
        }
    }
}

/// The axiom list of each theory, in checking order.
pub fn theory_axioms(theory: TheoryKind) -> Vec<AxiomId> {
    use AxiomId::*;
    match theory {
        TheoryKind::IT => vec![It1, It2, It3, It4, It5, It6, It7, It8, It9, It10, TrOut],
        TheoryKind::ITMinus => vec![
            It1, It2, It3, It4, It5, ItMinus6, ItMinus7, It8, It9, It10,
        ],
        TheoryKind::ITStar => vec![It1, It2, It3, It4, It5, It6, It7, It8, It9, It10],
        TheoryKind::ITStarC => vec![It1, It2, It3, It4, It5, It6, It7, It8, It9, It10, ConAx],
        TheoryKind::ITStarMC => vec![It1, It2, It3, It4, It5, It6, It7, It8, It9, It10, ComAx],
        TheoryKind::PK => vec![TbPi, PkTr],
        TheoryKind::PKPlus => vec![Putb, PkTr, TrOut],
    }
}

/// Errors from theory checking and sweeping.
#[derive(Error, Debug)]
pub enum TheoryError {
    #[error("theory `{0}` needs a generated truth-definition family")]
    MissingPiFamily(&'static str),
    #[error("pool has {statements} statements; the sweep is capped at {limit} bits")]
    PoolTooLarge { statements: usize, limit: usize },
    #[error(transparent)]
    Jump(#[from] JumpError),
    #[error(transparent)]
    Pool(#[from] PoolError),
}

/// The compositional truth-definition family: one defining sentence per
/// base statement, realized as coded pool sentences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiFamily {
    /// Codes of the statements present before the family was generated; the
    /// defining sentences and the existential witness ranges are stratified
    /// to these.
    pub base_codes: Vec<u32>,
    /// Base statement code -> code of its defining sentence.
    pub pi_of: BTreeMap<u32, u32>,
}

/// Generate the truth-definition family for every statement currently in
/// the pool, extending the pool with the defining sentences (and their
/// negation partners) that are not yet coded.
///
/// The defining sentence of a statement follows its shape: literals fold to
/// their truth value; a truth ascription stays itself; a negated ascription
/// becomes the ascription of the partner (or the true atom at a non-sentence
/// code); connectives and quantifiers recurse through the definitions of
/// their immediate constituents, with negations pushed through dually.
pub fn build_pi_family(pool: &mut SentencePool) -> Result<PiFamily, PoolError> {
    let base_codes: Vec<u32> = (0..pool.n_statements()).map(|i| pool.code_of(i)).collect();
    let mut memo: HashMap<Formula, u32> = HashMap::new();
    let mut pi_of = BTreeMap::new();
    for &n in &base_codes {
        let ast = pool.statements[pool.stmt_of_code(n).expect("base code")].clone();
        let code = pi_code_of(pool, &mut memo, &ast)?;
        pi_of.insert(n, code);
    }
    Ok(PiFamily { base_codes, pi_of })
}

/// The code of the defining sentence for `ast`, extending the pool when the
/// sentence is not yet coded.
fn pi_code_of(
    pool: &mut SentencePool,
    memo: &mut HashMap<Formula, u32>,
    ast: &Formula,
) -> Result<u32, PoolError> {
    if let Some(&c) = memo.get(ast) {
        return Ok(c);
    }
    let body = pi_body(pool, memo, ast)?;
    let code = match pool.lookup(&body) {
        Some(i) => pool.code_of(i),
        None => {
            let added = pool.extend_with(std::slice::from_ref(&body))?;
            pool.code_of(added[0])
        }
    };
    memo.insert(ast.clone(), code);
    Ok(code)
}

fn pi_body(
    pool: &mut SentencePool,
    memo: &mut HashMap<Formula, u32>,
    ast: &Formula,
) -> Result<Formula, PoolError> {
    // Truth-free literals fold to their fixed truth value.
    if ast.is_base_literal() {
        let v = BaseModel::new(pool)
            .true0(ast)
            .expect("base literals evaluate");
        return Ok(if v { Formula::truth() } else { Formula::falsity() });
    }
    match ast {
        Formula::TrAtom(Term::Numeral(v)) => Ok(Formula::tr(*v)),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::TrAtom(Term::Numeral(v)) => Ok(match pool.partner_code(*v) {
                Some(nc) => Formula::tr(nc),
                // Non-sentence codes are never true, so the negated
                // ascription is simply true.
                None => Formula::truth(),
            }),
            Formula::Not(y) => Ok(Formula::tr(pi_code_of(pool, memo, y)?)),
            Formula::And(a, b) => {
                let na = pi_code_of(pool, memo, &a.partner_ast())?;
                let nb = pi_code_of(pool, memo, &b.partner_ast())?;
                Ok(Formula::or(Formula::tr(na), Formula::tr(nb)))
            }
            Formula::Or(a, b) => {
                let na = pi_code_of(pool, memo, &a.partner_ast())?;
                let nb = pi_code_of(pool, memo, &b.partner_ast())?;
                Ok(Formula::and(Formula::tr(na), Formula::tr(nb)))
            }
            // A negated universal holds exactly when some negated instance
            // does, and a negated existential when all do — the folds run
            // dual to the positive clauses below.
            Formula::ForAll(v, body) => {
                let insts = instance_pi_codes(pool, memo, v, body, true)?;
                Ok(fold_tr(&insts, true))
            }
            Formula::Exists(v, body) => {
                let insts = instance_pi_codes(pool, memo, v, body, true)?;
                Ok(fold_tr(&insts, false))
            }
            _ => unreachable!("negated literals handled above"),
        },
        Formula::And(a, b) => {
            let ca = pi_code_of(pool, memo, a)?;
            let cb = pi_code_of(pool, memo, b)?;
            Ok(Formula::and(Formula::tr(ca), Formula::tr(cb)))
        }
        Formula::Or(a, b) => {
            let ca = pi_code_of(pool, memo, a)?;
            let cb = pi_code_of(pool, memo, b)?;
            Ok(Formula::or(Formula::tr(ca), Formula::tr(cb)))
        }
        Formula::ForAll(v, body) => {
            let insts = instance_pi_codes(pool, memo, v, body, false)?;
            Ok(fold_tr(&insts, false))
        }
        Formula::Exists(v, body) => {
            let insts = instance_pi_codes(pool, memo, v, body, false)?;
            Ok(fold_tr(&insts, true))
        }
        _ => unreachable!("remaining shapes are literals"),
    }
}

/// Definition codes of the (negated) instances of a quantified body, first
/// occurrence order, deduplicated.
fn instance_pi_codes(
    pool: &mut SentencePool,
    memo: &mut HashMap<Formula, u32>,
    var: &str,
    body: &Formula,
    negated: bool,
) -> Result<Vec<u32>, PoolError> {
    let mut out = Vec::new();
    for d in 0..pool.domain_size {
        let mut inst = instantiate(body, var, d, pool.domain_size);
        if negated {
            inst = inst.partner_ast();
        }
        let c = pi_code_of(pool, memo, &inst)?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Right-folded chain of truth ascriptions (disjunctive when `any`).
fn fold_tr(codes: &[u32], any: bool) -> Formula {
    let mut iter = codes.iter().rev();
    let first = *iter.next().expect("finite domains are nonempty");
    let mut acc = Formula::tr(first);
    for &c in iter {
        acc = if any {
            Formula::or(Formula::tr(c), acc)
        } else {
            Formula::and(Formula::tr(c), acc)
        };
    }
    acc
}

/// Extend the pool with whatever the theory's axioms quantify over: the
/// consistency/completeness instances for the internal-discipline theories,
/// the truth-definition family for the compositional ones. Returns the
/// family when one was built.
pub fn ensure_theory_closure(
    pool: &mut SentencePool,
    theory: TheoryKind,
) -> Result<Option<PiFamily>, PoolError> {
    match theory {
        TheoryKind::IT | TheoryKind::ITMinus | TheoryKind::ITStar => Ok(None),
        TheoryKind::ITStarC => {
            inject_instances(pool, con_instance, is_con_shaped)?;
            Ok(None)
        }
        TheoryKind::ITStarMC => {
            inject_instances(pool, com_instance, is_com_shaped)?;
            Ok(None)
        }
        TheoryKind::PK | TheoryKind::PKPlus => build_pi_family(pool).map(Some),
    }
}

fn inject_instances(
    pool: &mut SentencePool,
    builder: fn(&SentencePool, u32) -> Option<Formula>,
    shaped: fn(&SentencePool, &Formula) -> bool,
) -> Result<(), PoolError> {
    let mut missing = Vec::new();
    for i in 0..pool.n_statements() {
        if shaped(pool, &pool.statements[i]) {
            continue;
        }
        if let Some(inst) = builder(pool, pool.code_of(i)) {
            if pool.lookup(&inst).is_none() && !missing.contains(&inst) {
                missing.push(inst);
            }
        }
    }
    if !missing.is_empty() {
        pool.extend_with(&missing)?;
    }
    Ok(())
}

/// Verdict on one axiom against one set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AxiomVerdict {
    #[serde(serialize_with = "serialize_axiom_name")]
    pub id: AxiomId,
    pub holds: bool,
    /// No instance of the axiom was checkable on this pool.
    pub vacuous: bool,
    /// Codes instantiating the first failure (empty when the axiom holds).
    pub witness_codes: Vec<u32>,
}

fn serialize_axiom_name<S: serde::Serializer>(id: &AxiomId, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(id.name())
}

/// Verdict on a whole theory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TheoryVerdict {
    pub holds: bool,
    pub axioms: Vec<AxiomVerdict>,
}

impl TheoryVerdict {
    pub fn failing(&self) -> Option<&AxiomVerdict> {
        self.axioms.iter().find(|a| !a.holds)
    }
}

/// A theory checker specialized to one pool, with implication tables built.
pub struct TheoryChecker<'p> {
    pub pool: &'p SentencePool,
    pub theory: TheoryKind,
    pub mode: ConsequenceMode,
    pi: Option<&'p PiFamily>,
    tables: ImplicationTables,
}

impl<'p> TheoryChecker<'p> {
    pub fn new(
        pool: &'p SentencePool,
        theory: TheoryKind,
        mode: ConsequenceMode,
        pi: Option<&'p PiFamily>,
    ) -> Result<TheoryChecker<'p>, TheoryError> {
        if theory.needs_pi_family() && pi.is_none() {
            return Err(TheoryError::MissingPiFamily(theory.name()));
        }
        Ok(TheoryChecker {
            pool,
            theory,
            mode,
            pi,
            tables: implication_tables(pool, mode),
        })
    }

    /// Witnesses supported by the theory's one-step scheme under `s`.
    fn scheme_mask(&self, s: &TruthSet) -> TruthSet {
        let star = self.theory.uses_starred_scheme();
        let mut mask = TruthSet::empty(self.pool.witnesses.len());
        for (wi, w) in self.pool.witnesses.iter().enumerate() {
            let hit = if star {
                xi_star_onestep(self.pool, w, s)
            } else {
                xi_onestep(self.pool, w, s)
            };
            if hit {
                mask.insert(wi);
            }
        }
        mask
    }

    /// Check one axiom.
    pub fn check_axiom(&self, s: &TruthSet, id: AxiomId) -> AxiomVerdict {
        let xi = match id {
            AxiomId::It3 | AxiomId::It5 => Some(self.scheme_mask(s)),
            _ => None,
        };
        self.eval_axiom(s, id, xi.as_ref())
    }

    /// Check the theory's whole axiom list.
    pub fn check_theory(&self, s: &TruthSet) -> TheoryVerdict {
        let ids = theory_axioms(self.theory);
        let needs_xi = ids.contains(&AxiomId::It3) || ids.contains(&AxiomId::It5);
        let xi = needs_xi.then(|| self.scheme_mask(s));
        let axioms: Vec<AxiomVerdict> = ids
            .into_iter()
            .map(|id| self.eval_axiom(s, id, xi.as_ref()))
            .collect();
        TheoryVerdict {
            holds: axioms.iter().all(|a| a.holds),
            axioms,
        }
    }

    /// Short-circuit theory check: Ok, or the first failing axiom with its
    /// witness codes.
    fn check_theory_short(&self, s: &TruthSet) -> Result<(), (AxiomId, Vec<u32>)> {
        let ids = theory_axioms(self.theory);
        let needs_xi = ids.contains(&AxiomId::It3) || ids.contains(&AxiomId::It5);
        let xi = needs_xi.then(|| self.scheme_mask(s));
        for id in ids {
            let v = self.eval_axiom(s, id, xi.as_ref());
            if !v.holds {
                return Err((id, v.witness_codes));
            }
        }
        Ok(())
    }

    fn eval_axiom(&self, s: &TruthSet, id: AxiomId, xi: Option<&TruthSet>) -> AxiomVerdict {
        let pool = self.pool;
        let n = pool.n_statements();
        let dom = pool.domain_size;
        let mut checked: u64 = 0;
        let mut fail: Option<Vec<u32>> = None;

        match id {
            AxiomId::It1 => {
                // Canonical coding folds every true closed equation to the
                // one true atom and every false one to the one false atom.
                let t_idx = pool.lookup(&Formula::truth());
                let f_idx = pool.lookup(&Formula::falsity());
                'it1: for x in 0..dom {
                    for y in 0..dom {
                        for (truthy, idx) in [
                            (x == y, if x == y { t_idx } else { f_idx }),
                            (x != y, if x != y { t_idx } else { f_idx }),
                        ] {
                            if let Some(i) = idx {
                                checked += 1;
                                if s.contains(i) != truthy {
                                    fail = Some(vec![x, y, pool.code_of(i)]);
                                    break 'it1;
                                }
                            }
                        }
                    }
                }
            }
            AxiomId::It2 => {
                for (i, st) in pool.statements.iter().enumerate() {
                    if let Formula::And(a, b) = st {
                        let (Some(ai), Some(bi)) = (pool.lookup(a), pool.lookup(b)) else {
                            continue;
                        };
                        checked += 1;
                        if s.contains(ai) && s.contains(bi) && !s.contains(i) {
                            fail = Some(vec![
                                pool.code_of(ai),
                                pool.code_of(bi),
                                pool.code_of(i),
                            ]);
                            break;
                        }
                    }
                }
            }
            AxiomId::It3 => {
                let xi = xi.expect("scheme mask provided");
                for (i, st) in pool.statements.iter().enumerate() {
                    if let Formula::Or(a, b) = st {
                        let (Some(ai), Some(bi)) = (pool.lookup(a), pool.lookup(b)) else {
                            continue;
                        };
                        checked += 1;
                        let lhs = s.contains(ai)
                            || s.contains(bi)
                            || xi.intersects(&self.tables.impliers[i]);
                        if lhs != s.contains(i) {
                            fail = Some(vec![
                                pool.code_of(ai),
                                pool.code_of(bi),
                                pool.code_of(i),
                            ]);
                            break;
                        }
                    }
                }
            }
            AxiomId::It4 => {
                for (i, st) in pool.statements.iter().enumerate() {
                    if let Formula::ForAll(v, body) = st {
                        checked += 1;
                        let all_in = (0..dom).all(|d| {
                            let inst = instantiate(body, v, d, dom);
                            pool.lookup(&inst).is_some_and(|j| s.contains(j))
                        });
                        if all_in && !s.contains(i) {
                            fail = Some(vec![pool.code_of(i)]);
                            break;
                        }
                    }
                }
            }
            AxiomId::It5 => {
                let xi = xi.expect("scheme mask provided");
                for (i, st) in pool.statements.iter().enumerate() {
                    if let Formula::Exists(v, body) = st {
                        checked += 1;
                        let some_in = (0..dom).any(|d| {
                            let inst = instantiate(body, v, d, dom);
                            pool.lookup(&inst).is_some_and(|j| s.contains(j))
                        });
                        let lhs = some_in || xi.intersects(&self.tables.impliers[i]);
                        if lhs != s.contains(i) {
                            fail = Some(vec![pool.code_of(i)]);
                            break;
                        }
                    }
                }
            }
            AxiomId::It6 | AxiomId::ItMinus6 => {
                for x in 0..dom {
                    let Some(asc) = pool.lookup(&Formula::tr(x)) else {
                        continue;
                    };
                    checked += 1;
                    let lhs = pool.stmt_of_code(x).is_some_and(|i| s.contains(i));
                    let rhs = s.contains(asc);
                    let bad = if id == AxiomId::It6 {
                        lhs != rhs
                    } else {
                        lhs && !rhs
                    };
                    if bad {
                        fail = Some(vec![x, pool.code_of(asc)]);
                        break;
                    }
                }
            }
            AxiomId::It7 | AxiomId::ItMinus7 => {
                for x in 0..dom {
                    let Some(nasc) = pool.lookup(&Formula::not(Formula::tr(x))) else {
                        continue;
                    };
                    checked += 1;
                    let lhs = match pool.stmt_of_code(x) {
                        Some(i) => s.contains(pool.partner_idx(i)),
                        None => true, // a non-sentence code is never true
                    };
                    let rhs = s.contains(nasc);
                    let bad = if id == AxiomId::It7 {
                        lhs != rhs
                    } else {
                        lhs && !rhs
                    };
                    if bad {
                        fail = Some(vec![x, pool.code_of(nasc)]);
                        break;
                    }
                }
            }
            AxiomId::It8 => {
                'it8: for i in s.iter() {
                    for j in 0..n {
                        if self.tables.stmt_imp[i].contains(j) {
                            checked += 1;
                            if !s.contains(j) {
                                fail = Some(vec![pool.code_of(i), pool.code_of(j)]);
                                break 'it8;
                            }
                        }
                    }
                }
            }
            AxiomId::It9 => {
                for i in 0..n {
                    if s.contains(pool.partner_idx(i)) {
                        checked += 1;
                        if s.contains(i) {
                            fail = Some(vec![pool.code_of(i)]);
                            break;
                        }
                    }
                }
            }
            AxiomId::It10 => {
                // The quoted sentence asserts that only sentences are true.
                // Coding it would need an ascription instance (plus partner)
                // for every domain element, which no domain can hold beside
                // it; the axiom is reported vacuous rather than silently
                // dropped.
                let quoted = Formula::ForAll(
                    "x".to_string(),
                    Box::new(Formula::or(
                        Formula::not(Formula::TrAtom(Term::Var("x".to_string()))),
                        Formula::SentAtom(Term::Var("x".to_string())),
                    )),
                );
                if let Some(i) = pool.lookup(&quoted) {
                    checked += 1;
                    if !s.contains(i) {
                        fail = Some(vec![pool.code_of(i)]);
                    }
                }
            }
            AxiomId::TrOut => {
                for i in s.iter() {
                    checked += 1;
                    if !classical_sat(pool, s, &pool.statements[i]) {
                        fail = Some(vec![pool.code_of(i)]);
                        break;
                    }
                }
            }
            AxiomId::ConAx | AxiomId::ComAx => {
                let (builder, shaped): (
                    fn(&SentencePool, u32) -> Option<Formula>,
                    fn(&SentencePool, &Formula) -> bool,
                ) = if id == AxiomId::ConAx {
                    (con_instance, is_con_shaped)
                } else {
                    (com_instance, is_com_shaped)
                };
                for x in 0..dom {
                    let Some(i) = pool.stmt_of_code(x) else { continue };
                    if shaped(pool, &pool.statements[i]) {
                        continue;
                    }
                    let Some(inst) = builder(pool, x) else { continue };
                    let Some(j) = pool.lookup(&inst) else { continue };
                    checked += 1;
                    if !s.contains(j) {
                        fail = Some(vec![x, pool.code_of(j)]);
                        break;
                    }
                }
            }
            AxiomId::TbPi => {
                let pi = self.pi.expect("family checked at construction");
                for &b in &pi.base_codes {
                    let pc = pi.pi_of[&b];
                    let j = pool.stmt_of_code(pc).expect("definition is coded");
                    checked += 1;
                    let lhs = s.contains(j);
                    let rhs = classical_sat(pool, s, &pool.statements[j]);
                    if lhs != rhs {
                        fail = Some(vec![b, pc]);
                        break;
                    }
                }
            }
            AxiomId::PkTr => {
                let pi = self.pi.expect("family checked at construction");
                for i in 0..n {
                    checked += 1;
                    let lhs = s.contains(i);
                    let rhs = pi.base_codes.iter().any(|&y| {
                        let yi = pool.stmt_of_code(y).expect("base code");
                        let pj = pool.stmt_of_code(pi.pi_of[&y]).expect("definition");
                        self.tables.stmt_imp[yi].contains(i)
                            && classical_sat(pool, s, &pool.statements[pj])
                    });
                    if lhs != rhs {
                        fail = Some(vec![pool.code_of(i)]);
                        break;
                    }
                }
            }
            AxiomId::Putb => {
                for (i, st) in pool.statements.iter().enumerate() {
                    if !is_tr_positive(st) {
                        continue;
                    }
                    checked += 1;
                    if s.contains(i) != classical_sat(pool, s, st) {
                        fail = Some(vec![pool.code_of(i)]);
                        break;
                    }
                }
            }
        }

        AxiomVerdict {
            id,
            holds: fail.is_none(),
            vacuous: checked == 0,
            witness_codes: fail.unwrap_or_default(),
        }
    }

    /// Semantic checks of the compositional consequences the weakest
    /// compositional theory proves: ascription biconditionals, double
    /// negation, conjunction, the witnessed disjunction/existential
    /// biconditionals, and the downward (only) universal direction.
    pub fn pk_lemma_items(&self, s: &TruthSet) -> Vec<PkLemmaVerdict> {
        let pool = self.pool;
        let pi = self.pi.expect("lemma checks need the definition family");
        let dom = pool.domain_size;
        let mut out = Vec::new();

        // A disjunct of the witnessed biconditionals: some base statement
        // whose definition holds classically implies the target.
        let witness_implies = |s: &TruthSet, i: usize| -> bool {
            pi.base_codes.iter().any(|&y| {
                let yi = pool.stmt_of_code(y).expect("base code");
                let pj = pool.stmt_of_code(pi.pi_of[&y]).expect("definition");
                self.tables.stmt_imp[yi].contains(i)
                    && classical_sat(pool, s, &pool.statements[pj])
            })
        };

        // 1: ascription biconditional.
        let mut v = PkLemmaVerdict::new(1);
        for x in 0..dom {
            if let Some(asc) = pool.lookup(&Formula::tr(x)) {
                v.checked += 1;
                let lhs = s.contains(asc);
                let rhs = pool.stmt_of_code(x).is_some_and(|i| s.contains(i));
                if lhs != rhs {
                    v.fail(&[x, pool.code_of(asc)]);
                    break;
                }
            }
        }
        out.push(v);

        // 2: negated ascription biconditional.
        let mut v = PkLemmaVerdict::new(2);
        for x in 0..dom {
            if let Some(nasc) = pool.lookup(&Formula::not(Formula::tr(x))) {
                v.checked += 1;
                let lhs = s.contains(nasc);
                let rhs = match pool.stmt_of_code(x) {
                    Some(i) => s.contains(pool.partner_idx(i)),
                    None => true,
                };
                if lhs != rhs {
                    v.fail(&[x, pool.code_of(nasc)]);
                    break;
                }
            }
        }
        out.push(v);

        // 3: double negation.
        let mut v = PkLemmaVerdict::new(3);
        for x in 0..dom {
            let Some(i) = pool.stmt_of_code(x) else { continue };
            let ddn = Formula::Not(Box::new(Formula::Not(Box::new(
                pool.statements[i].clone(),
            ))));
            if let Some(j) = pool.lookup(&ddn) {
                v.checked += 1;
                if s.contains(j) != s.contains(i) {
                    v.fail(&[x, pool.code_of(j)]);
                    break;
                }
            }
        }
        out.push(v);

        // 4: conjunction biconditional.
        let mut v = PkLemmaVerdict::new(4);
        for (i, st) in pool.statements.iter().enumerate() {
            if let Formula::And(a, b) = st {
                let (Some(ai), Some(bi)) = (pool.lookup(a), pool.lookup(b)) else {
                    continue;
                };
                v.checked += 1;
                if s.contains(i) != (s.contains(ai) && s.contains(bi)) {
                    v.fail(&[pool.code_of(ai), pool.code_of(bi), pool.code_of(i)]);
                    break;
                }
            }
        }
        out.push(v);

        // 5: witnessed disjunction biconditional.
        let mut v = PkLemmaVerdict::new(5);
        for (i, st) in pool.statements.iter().enumerate() {
            if let Formula::Or(a, b) = st {
                let (Some(ai), Some(bi)) = (pool.lookup(a), pool.lookup(b)) else {
                    continue;
                };
                v.checked += 1;
                let lhs = s.contains(ai) || s.contains(bi) || witness_implies(s, i);
                if lhs != s.contains(i) {
                    v.fail(&[pool.code_of(ai), pool.code_of(bi), pool.code_of(i)]);
                    break;
                }
            }
        }
        out.push(v);

        // 6: universal downward direction only.
        let mut v = PkLemmaVerdict::new(6);
        for (i, st) in pool.statements.iter().enumerate() {
            if let Formula::ForAll(var, body) = st {
                if !s.contains(i) {
                    continue;
                }
                v.checked += 1;
                let all_in = (0..dom).all(|d| {
                    let inst = instantiate(body, var, d, dom);
                    pool.lookup(&inst).is_some_and(|j| s.contains(j))
                });
                if !all_in {
                    v.fail(&[pool.code_of(i)]);
                    break;
                }
            }
        }
        out.push(v);

        // 7: witnessed existential biconditional.
        let mut v = PkLemmaVerdict::new(7);
        for (i, st) in pool.statements.iter().enumerate() {
            if let Formula::Exists(var, body) = st {
                v.checked += 1;
                let some_in = (0..dom).any(|d| {
                    let inst = instantiate(body, var, d, dom);
                    pool.lookup(&inst).is_some_and(|j| s.contains(j))
                });
                let lhs = some_in || witness_implies(s, i);
                if lhs != s.contains(i) {
                    v.fail(&[pool.code_of(i)]);
                    break;
                }
            }
        }
        out.push(v);

        out
    }
}

/// Verdict on one semantic lemma item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PkLemmaVerdict {
    pub item: u8,
    pub holds: bool,
    pub checked: u64,
    pub witness_codes: Vec<u32>,
}

impl PkLemmaVerdict {
    fn new(item: u8) -> PkLemmaVerdict {
        PkLemmaVerdict {
            item,
            holds: true,
            checked: 0,
            witness_codes: Vec::new(),
        }
    }
    fn fail(&mut self, codes: &[u32]) {
        self.holds = false;
        self.witness_codes = codes.to_vec();
    }
}

/// Options for a categoricity sweep.
#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    /// Walk the whole consistent candidate space (bounded by
    /// `max_pool_bits`); otherwise sample `samples` candidates.
    pub exhaustive: bool,
    pub samples: u64,
    pub seed: u64,
    pub jobs: usize,
    pub max_pool_bits: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            exhaustive: true,
            samples: 0,
            seed: 0,
            jobs: 1,
            max_pool_bits: 14,
        }
    }
}

/// One candidate set where the fixed-point side and the model side of the
/// categoricity biconditional disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Discrepancy {
    pub set: Vec<u32>,
    pub fixpoint_side: bool,
    pub model_side: bool,
    pub failing_axiom: Option<String>,
    pub witness_codes: Vec<u32>,
}

/// The sweep's canonical report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepReport {
    pub theory: String,
    pub jump: String,
    pub pool_hash: String,
    pub checked: u64,
    pub discrepancies: Vec<Discrepancy>,
}

/// For every consistent candidate set, compare fixed-point membership under
/// the jump against model membership under the theory; report every
/// disagreement with a witness trace.
pub fn categoricity_sweep(
    pool: &SentencePool,
    theory: TheoryKind,
    jump: JumpConfig,
    pi: Option<&PiFamily>,
    opts: SweepOptions,
) -> Result<SweepReport, TheoryError> {
    let n = pool.n_statements();
    let space = CandidateSpace::consistent(pool);
    let total = space.total();

    // The definitional truth axiom quantifies its existential witness over
    // the base statements only, so a definition-family sweep draws the
    // jump's support from the same range: single witnesses from the base
    // prefix of the witness list. Without the shared range the two sides
    // quantify over different sentence classes and the comparison is
    // meaningless.
    let jump = match (pi, jump.kind) {
        (Some(family), JumpKind::SSK) => JumpConfig {
            witness_policy: WitnessPolicy::SingleWitness,
            witness_limit: Some(family.base_codes.len()),
            ..jump
        },
        _ => jump,
    };

    let evaluate = |checker: &TheoryChecker,
                    engine: &JumpEngine,
                    s: &TruthSet|
     -> Result<Option<Discrepancy>, JumpError> {
        let image = engine.apply(s)?;
        let fixpoint_side = image == *s;
        let model = checker.check_theory_short(s);
        let model_side = model.is_ok();
        if fixpoint_side == model_side {
            return Ok(None);
        }
        let (failing_axiom, witness_codes) = match model {
            Err((id, codes)) => (Some(id.name().to_string()), codes),
            Ok(()) => {
                // The model side holds but the set is not a fixed point:
                // witness with the symmetric difference against the image.
                let mut diff = Vec::new();
                for i in 0..n {
                    if s.contains(i) != image.contains(i) {
                        diff.push(pool.code_of(i));
                    }
                }
                (None, diff)
            }
        };
        Ok(Some(Discrepancy {
            set: pool.set_to_codes(s),
            fixpoint_side,
            model_side,
            failing_axiom,
            witness_codes,
        }))
    };

    let (checked, mut discrepancies) = if opts.exhaustive {
        if n > opts.max_pool_bits {
            return Err(TheoryError::PoolTooLarge {
                statements: n,
                limit: opts.max_pool_bits,
            });
        }
        let jobs = opts.jobs.max(1).min(total.max(1) as usize);
        let chunk = total.div_ceil(jobs as u64);
        let results: Result<Vec<(u64, Vec<Discrepancy>)>, TheoryError> =
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..jobs)
                    .map(|j| {
                        let lo = j as u64 * chunk;
                        let hi = (lo + chunk).min(total);
                        let space = &space;
                        let evaluate = &evaluate;
                        scope.spawn(move || -> Result<(u64, Vec<Discrepancy>), TheoryError> {
                            let checker = TheoryChecker::new(pool, theory, jump.mode, pi)?;
                            let engine = JumpEngine::new(pool, jump);
                            let mut count = 0;
                            let mut found = Vec::new();
                            for idx in lo..hi {
                                if let Some(s) = space.get(idx) {
                                    count += 1;
                                    if let Some(d) = evaluate(&checker, &engine, &s)? {
                                        found.push(d);
                                    }
                                }
                            }
                            Ok((count, found))
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("sweep worker panicked"))
                    .collect()
            });
        let results = results?;
        let checked = results.iter().map(|(c, _)| c).sum();
        let discrepancies = results.into_iter().flat_map(|(_, d)| d).collect();
        (checked, discrepancies)
    } else {
        let checker = TheoryChecker::new(pool, theory, jump.mode, pi)?;
        let engine = JumpEngine::new(pool, jump);
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut found = Vec::new();
        let mut checked = 0;
        for _ in 0..opts.samples {
            let s = loop {
                let idx = rng.gen_range(0..total);
                if let Some(s) = space.get(idx) {
                    break s;
                }
            };
            checked += 1;
            if let Some(d) = evaluate(&checker, &engine, &s)? {
                found.push(d);
            }
        }
        (checked, found)
    };

    discrepancies.sort_by(|a, b| a.set.cmp(&b.set));
    Ok(SweepReport {
        theory: theory.name().to_string(),
        jump: jump.kind.name().to_string(),
        pool_hash: pool.pool_hash(),
        checked,
        discrepancies,
    })
}

/// The four equivalent characterizations, evaluated side by side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FourWaySides {
    /// The set models the full theory.
    pub it_model: bool,
    /// Fixed point of the starred implication jump, classically sound.
    pub theta_star_sound: bool,
    /// Fixed point of the plain implication jump, classically sound, closed
    /// downward through ascriptions and negated ascriptions.
    pub theta_sound_closed: bool,
    /// The starred theory plus total soundness.
    pub it_star_plus_tr_out: bool,
}

impl FourWaySides {
    pub fn all_agree(&self) -> bool {
        self.it_model == self.theta_star_sound
            && self.it_model == self.theta_sound_closed
            && self.it_model == self.it_star_plus_tr_out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FourWayFailure {
    pub set: Vec<u32>,
    pub sides: FourWaySides,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FourWayReport {
    pub pool_hash: String,
    pub checked: u64,
    pub failures: Vec<FourWayFailure>,
}

/// Check the four-way equivalence over EVERY subset of the statements
/// (consistency is not assumed; each side implies it on its own).
pub fn four_way_equivalence(
    pool: &SentencePool,
    mode: ConsequenceMode,
    jobs: usize,
    max_pool_bits: usize,
) -> Result<FourWayReport, TheoryError> {
    let n = pool.n_statements();
    if n > max_pool_bits {
        return Err(TheoryError::PoolTooLarge {
            statements: n,
            limit: max_pool_bits,
        });
    }
    let space = CandidateSpace::all(pool);
    let total = space.total();
    let jobs = jobs.max(1).min(total.max(1) as usize);
    let chunk = total.div_ceil(jobs as u64);

    let results: Result<Vec<Vec<FourWayFailure>>, TheoryError> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let lo = j as u64 * chunk;
                let hi = (lo + chunk).min(total);
                let space = &space;
                scope.spawn(move || -> Result<Vec<FourWayFailure>, TheoryError> {
                    let it = TheoryChecker::new(pool, TheoryKind::IT, mode, None)?;
                    let star = TheoryChecker::new(pool, TheoryKind::ITStar, mode, None)?;
                    let theta =
                        JumpEngine::new(pool, JumpConfig::new(JumpKind::Theta).with_mode(mode));
                    let theta_star = JumpEngine::new(
                        pool,
                        JumpConfig::new(JumpKind::ThetaStar).with_mode(mode),
                    );
                    let mut out = Vec::new();
                    for idx in lo..hi {
                        let Some(s) = space.get(idx) else { continue };
                        let sound = classically_sound(pool, &s);
                        let sides = FourWaySides {
                            it_model: it.check_theory_short(&s).is_ok(),
                            theta_star_sound: sound
                                && theta_star.apply(&s).expect("total on any input") == s,
                            theta_sound_closed: sound
                                && tr_downward_closed(pool, &s)
                                && neg_tr_downward_closed(pool, &s)
                                && theta.apply(&s).expect("total on any input") == s,
                            it_star_plus_tr_out: star.check_theory_short(&s).is_ok()
                                && star.check_axiom(&s, AxiomId::TrOut).holds,
                        };
                        if !sides.all_agree() {
                            out.push(FourWayFailure {
                                set: pool.set_to_codes(&s),
                                sides,
                            });
                        }
                    }
                    Ok(out)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("equivalence worker panicked"))
            .collect()
    });
    let mut failures: Vec<FourWayFailure> = results?.concat();
    failures.sort_by(|a, b| a.set.cmp(&b.set));
    Ok(FourWayReport {
        pool_hash: pool.pool_hash(),
        checked: total,
        failures,
    })
}
