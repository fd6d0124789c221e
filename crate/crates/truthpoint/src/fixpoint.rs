//! Fixed points of the jump operators: iteration, exhaustive enumeration,
//! classification, and the intrinsic-fixpoint report.

use serde::Serialize;
use thiserror::Error;

use crate::jumps::{JumpConfig, JumpEngine, JumpError};
use crate::model::BaseModel;
use crate::schemes::{classical_sat, con};
use crate::set::TruthSet;
use crate::syntax::{instantiate, Formula, SentencePool, Term};

/// Result of iterating a jump from a starting set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IterateOutcome {
    /// The iteration reached a set the jump maps to itself.
    Converged { fixpoint: TruthSet, steps: usize },
    /// The jump dropped a member of the current set, so the iteration is not
    /// an increasing chain from here; both sides of the step are reported.
    NonIncreasing {
        at_step: usize,
        set: TruthSet,
        image: TruthSet,
    },
}

/// Iterate the jump from `start` until it converges or stops increasing.
/// Monotone jumps converge from any set below its own image in at most one
/// step per statement.
pub fn iterate(engine: &JumpEngine, start: &TruthSet) -> Result<IterateOutcome, JumpError> {
    let mut current = start.clone();
    for step in 0..=engine.pool().n_statements() + 1 {
        let next = engine.apply(&current)?;
        if next == current {
            return Ok(IterateOutcome::Converged {
                fixpoint: current,
                steps: step,
            });
        }
        if !current.is_subset(&next) {
            return Ok(IterateOutcome::NonIncreasing {
                at_step: step,
                set: current,
                image: next,
            });
        }
        current = next;
    }
    unreachable!("an increasing chain exhausts the pool within n steps");
}

/// The least fixed point: the limit of iterating from the empty set.
pub fn minimal_fixpoint(engine: &JumpEngine) -> Result<TruthSet, JumpError> {
    match iterate(engine, &engine.pool().empty_set())? {
        IterateOutcome::Converged { fixpoint, .. } => Ok(fixpoint),
        IterateOutcome::NonIncreasing { .. } => {
            unreachable!("the empty set is below every jump image")
        }
    }
}

/// Options for exhaustive fixed-point enumeration.
#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    /// Refuse pools with more statements than this (the search is 2^n or
    /// 3^(n/2) in the statement count).
    pub max_pool_bits: usize,
    /// Worker threads; the candidate index space is partitioned evenly and
    /// results are merged in index order, so the output is identical for
    /// every job count.
    pub jobs: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            max_pool_bits: 14,
            jobs: 1,
        }
    }
}

/// Errors from the enumeration entry points.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FixpointError {
    #[error("pool has {statements} statements; enumeration is capped at {limit} bits")]
    PoolTooLarge { statements: usize, limit: usize },
    #[error(transparent)]
    Jump(#[from] JumpError),
}

/// An indexable space of candidate statement sets for exhaustive walks.
///
/// The consistent space walks three choices per partner pair when partnering
/// is involutive (neither, the statement, its partner) and otherwise filters
/// the full subset space through the consistency check.
pub struct CandidateSpace<'p> {
    pool: &'p SentencePool,
    pairs: Option<Vec<(usize, usize)>>,
    consistent_only: bool,
}

impl<'p> CandidateSpace<'p> {
    /// Every subset of the statements.
    pub fn all(pool: &'p SentencePool) -> CandidateSpace<'p> {
        CandidateSpace {
            pool,
            pairs: None,
            consistent_only: false,
        }
    }

    /// Every consistent subset of the statements.
    pub fn consistent(pool: &'p SentencePool) -> CandidateSpace<'p> {
        let n = pool.n_statements();
        let pairs = pool.partner_is_involution().then(|| {
            let mut seen = vec![false; n];
            let mut ps = Vec::new();
            for i in 0..n {
                if !seen[i] {
                    let p = pool.partner_idx(i);
                    seen[i] = true;
                    seen[p] = true;
                    ps.push((i, p));
                }
            }
            ps
        });
        CandidateSpace {
            pool,
            pairs,
            consistent_only: true,
        }
    }

    /// Number of candidate indices (some indices of a filtered space yield
    /// no set).
    pub fn total(&self) -> u64 {
        match &self.pairs {
            Some(ps) => 3u64.pow(ps.len() as u32),
            None => 1u64 << self.pool.n_statements(),
        }
    }

    /// The candidate at an index, or None when the index is filtered out.
    pub fn get(&self, idx: u64) -> Option<TruthSet> {
        let n = self.pool.n_statements();
        match &self.pairs {
            Some(ps) => {
                let mut s = TruthSet::empty(n);
                let mut k = idx;
                for &(a, b) in ps {
                    match k % 3 {
                        1 => s.insert(a),
                        2 => s.insert(b),
                        _ => {}
                    }
                    k /= 3;
                }
                Some(s)
            }
            None => {
                let s = TruthSet::from_mask(n, idx);
                if self.consistent_only && !con(self.pool, &s) {
                    return None;
                }
                Some(s)
            }
        }
    }
}

/// All fixed points of the jump, in ascending set order.
///
/// Jumps that are undefined on inconsistent inputs are enumerated over
/// consistent candidate sets only; the scheme and implication jumps are
/// enumerated over every subset.
pub fn enumerate_fixpoints(
    pool: &SentencePool,
    config: JumpConfig,
    opts: EnumerateOptions,
) -> Result<Vec<TruthSet>, FixpointError> {
    let n = pool.n_statements();
    if n > opts.max_pool_bits {
        return Err(FixpointError::PoolTooLarge {
            statements: n,
            limit: opts.max_pool_bits,
        });
    }
    assert!(n <= 30, "mask enumeration is limited to 30 bits");

    let space = if config.kind.requires_consistent_input() {
        CandidateSpace::consistent(pool)
    } else {
        CandidateSpace::all(pool)
    };
    let total = space.total();

    let jobs = opts.jobs.max(1).min(total.max(1) as usize);
    let chunk = total.div_ceil(jobs as u64);
    let mut found: Vec<TruthSet> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let lo = j as u64 * chunk;
                let hi = (lo + chunk).min(total);
                let space = &space;
                scope.spawn(move || -> Result<Vec<TruthSet>, JumpError> {
                    let engine = JumpEngine::new(pool, config);
                    let mut out = Vec::new();
                    for idx in lo..hi {
                        if let Some(x) = space.get(idx) {
                            if engine.apply(&x)? == x {
                                out.push(x);
                            }
                        }
                    }
                    Ok(out)
                })
            })
            .collect();
        let mut all = Vec::new();
        for h in handles {
            all.push(h.join().expect("enumeration worker panicked"));
        }
        all.into_iter()
            .collect::<Result<Vec<_>, _>>()
            .map(|vs| vs.concat())
    })?;
    found.sort();
    Ok(found)
}

/// Structural classification of a candidate set under a jump.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FixpointClassification {
    /// The jump maps the set to itself (false when the jump is undefined on it).
    pub is_fixpoint: bool,
    /// No statement sits in the set together with its negation partner.
    pub consistent: bool,
    /// Every member is classically true when the set is read as the truth
    /// predicate's extension.
    pub classically_sound: bool,
    /// Every truth ascription in the set has the ascribed statement in the
    /// set too.
    pub tr_down_closed: bool,
    /// Every negated truth ascription in the set has the ascribed
    /// statement's partner in the set.
    pub neg_tr_down_closed: bool,
    /// Membership of a statement and of its coded truth ascription is a
    /// biconditional, in both the positive and the negated direction.
    pub kripke_set: bool,
    /// Every universal statement whose instances are all in the set is in
    /// the set itself.
    pub omega_closed: bool,
}

/// Every member is classically true when the set is read as the truth
/// predicate's extension.
pub fn classically_sound(pool: &SentencePool, x: &TruthSet) -> bool {
    x.iter().all(|i| classical_sat(pool, x, &pool.statements[i]))
}

/// Every truth ascription in the set has the ascribed statement in the set.
pub fn tr_downward_closed(pool: &SentencePool, x: &TruthSet) -> bool {
    x.iter().all(|i| match &pool.statements[i] {
        Formula::TrAtom(Term::Numeral(c)) => pool.stmt_of_code(*c).is_some_and(|j| x.contains(j)),
        _ => true,
    })
}

/// Every negated truth ascription in the set has the ascribed statement's
/// partner in the set. A negated ascription at a non-sentence code requires
/// nothing: there is no ascribed statement to descend to.
pub fn neg_tr_downward_closed(pool: &SentencePool, x: &TruthSet) -> bool {
    x.iter().all(|i| match &pool.statements[i] {
        Formula::Not(inner) => match inner.as_ref() {
            Formula::TrAtom(Term::Numeral(c)) => match pool.stmt_of_code(*c) {
                Some(j) => x.contains(pool.partner_idx(j)),
                None => true,
            },
            _ => true,
        },
        _ => true,
    })
}

/// Both ascription biconditionals hold: a statement and its coded truth
/// ascription co-occur in the set, and a statement's negation and the coded
/// negated ascription co-occur. Equivalently: descent through ascriptions
/// and negated ascriptions, plus the two upward closures, all gated on the
/// ascription being coded in the pool.
pub fn is_kripke_set(pool: &SentencePool, x: &TruthSet) -> bool {
    if !tr_downward_closed(pool, x) || !neg_tr_downward_closed(pool, x) {
        return false;
    }
    pool.statements.iter().enumerate().all(|(i, st)| match st {
        // Upward: the ascribed statement in the set puts the ascription in.
        Formula::TrAtom(Term::Numeral(c)) => match pool.stmt_of_code(*c) {
            Some(j) => !x.contains(j) || x.contains(i),
            None => true,
        },
        // Upward: the ascribed statement's negation in the set puts the
        // negated ascription in.
        Formula::Not(inner) => match inner.as_ref() {
            Formula::TrAtom(Term::Numeral(c)) => match pool.stmt_of_code(*c) {
                Some(j) => !x.contains(pool.partner_idx(j)) || x.contains(i),
                None => true,
            },
            _ => true,
        },
        _ => true,
    })
}

/// Every universal statement whose instances are all in the set is in the
/// set itself.
pub fn is_omega_closed(pool: &SentencePool, x: &TruthSet) -> bool {
    pool.statements.iter().enumerate().all(|(i, st)| {
        if let Formula::ForAll(v, body) = st {
            let all_in = (0..pool.domain_size).all(|d| {
                let inst = instantiate(body, v, d, pool.domain_size);
                pool.lookup(&inst).is_some_and(|j| x.contains(j))
            });
            !all_in || x.contains(i)
        } else {
            true
        }
    })
}

/// Classify `x` under the engine's jump.
pub fn classify(engine: &JumpEngine, x: &TruthSet) -> FixpointClassification {
    let pool = engine.pool();
    FixpointClassification {
        is_fixpoint: matches!(engine.apply(x), Ok(image) if image == *x),
        consistent: con(pool, x),
        classically_sound: classically_sound(pool, x),
        tr_down_closed: tr_downward_closed(pool, x),
        neg_tr_down_closed: neg_tr_downward_closed(pool, x),
        kripke_set: is_kripke_set(pool, x),
        omega_closed: is_omega_closed(pool, x),
    }
}

/// Two sets are compatible when neither asserts a statement the other
/// denies: each is disjoint from the other's negative extension.
pub fn compatible(pool: &SentencePool, x: &TruthSet, y: &TruthSet) -> bool {
    let m = BaseModel::new(pool);
    !x.intersects(&m.negative_extension(y)) && !y.intersects(&m.negative_extension(x))
}

/// The intrinsic fixed points of a jump and their maximum, if one exists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntrinsicReport {
    /// Fixed points compatible with every fixed point, ascending set order.
    pub intrinsic: Vec<TruthSet>,
    /// The intrinsic fixed point containing all others, when there is one.
    pub maximal: Option<TruthSet>,
}

/// Enumerate all fixed points, keep those compatible with every fixed point,
/// and report the greatest one when the intrinsic family has a maximum.
pub fn maximal_intrinsic(
    pool: &SentencePool,
    config: JumpConfig,
    opts: EnumerateOptions,
) -> Result<IntrinsicReport, FixpointError> {
    let fps = enumerate_fixpoints(pool, config, opts)?;
    let m = BaseModel::new(pool);
    // x is compatible with every fixpoint iff it avoids the union of their
    // negative extensions and its own negative extension avoids their union.
    let mut neg_union = pool.empty_set();
    let mut pos_union = pool.empty_set();
    for y in &fps {
        neg_union.union_with(&m.negative_extension(y));
        pos_union.union_with(y);
    }
    let intrinsic: Vec<TruthSet> = fps
        .iter()
        .filter(|x| {
            !x.intersects(&neg_union) && !m.negative_extension(x).intersects(&pos_union)
        })
        .cloned()
        .collect();
    let maximal = intrinsic
        .iter()
        .find(|top| intrinsic.iter().all(|x| x.is_subset(top)))
        .cloned();
    Ok(IntrinsicReport { intrinsic, maximal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jumps::JumpKind;
    use crate::syntax::load_pool;

    fn mini_core() -> SentencePool {
        load_pool(
            "domain 24;\nsentence tau := Tr(#tau);\nsentence negtau := not Tr(#tau);\nsentence lam := not Tr(#lam);\nsentence lem := (not Tr(#lam)) or (not not Tr(#lam));\nsentence truth := 0 = 0;\nsentence t00 := Tr(#truth);\nclose negation;\nclose instances;",
        )
        .unwrap()
    }

    fn teller_pool() -> SentencePool {
        load_pool(
            "domain 8;\nsentence tau := Tr(#tau);\nsentence negtau := not Tr(#tau);\nclose negation;\nclose instances;",
        )
        .unwrap()
    }

    fn idx(p: &SentencePool, name: &str) -> usize {
        p.stmt_of_code(p.code_of_name(name).unwrap()).unwrap()
    }

    fn named_set(p: &SentencePool, names: &[&str]) -> TruthSet {
        let mut s = p.empty_set();
        for n in names {
            s.insert(idx(p, n));
        }
        s
    }

    #[test]
    fn minimal_fixpoints_agree_across_the_supervaluation_triangle() {
        let p = mini_core();
        let expected = named_set(&p, &["truth", "lem", "t00"]);
        for kind in [
            JumpKind::Theta,
            JumpKind::ThetaStar,
            JumpKind::VB,
            JumpKind::SSK,
        ] {
            let eng = JumpEngine::new(&p, JumpConfig::new(kind));
            let mfp = minimal_fixpoint(&eng).unwrap();
            assert_eq!(
                p.set_to_codes(&mfp),
                p.set_to_codes(&expected),
                "minimal fixpoint of {} diverged",
                kind.name()
            );
        }
        // The one-step jump grounds strictly less: the excluded-middle
        // disjunction never enters.
        let sk = JumpEngine::new(&p, JumpConfig::new(JumpKind::SKJump));
        let sk_mfp = minimal_fixpoint(&sk).unwrap();
        assert!(!sk_mfp.contains(idx(&p, "lem")));
        assert!(sk_mfp.contains(idx(&p, "truth")));
    }

    #[test]
    fn iteration_reports_non_increasing_starts() {
        let p = mini_core();
        let eng = JumpEngine::new(&p, JumpConfig::new(JumpKind::SKJump));
        let start = named_set(&p, &["lam"]);
        match iterate(&eng, &start).unwrap() {
            IterateOutcome::NonIncreasing { at_step, set, image } => {
                assert_eq!(at_step, 0);
                assert!(set.contains(idx(&p, "lam")));
                assert!(!image.contains(idx(&p, "lam")));
            }
            other => panic!("expected a non-increasing report, got {other:?}"),
        }
    }

    #[test]
    fn enumeration_finds_the_teller_fixpoints() {
        let p = teller_pool();
        let tau = idx(&p, "tau");
        let negtau = idx(&p, "negtau");
        // The implication jump has four fixpoints: empty, either teller
        // decision, and the inconsistent pair.
        let theta = enumerate_fixpoints(
            &p,
            JumpConfig::new(JumpKind::Theta),
            EnumerateOptions::default(),
        )
        .unwrap();
        assert_eq!(theta.len(), 4);
        assert!(theta.iter().any(|s| s.is_empty()));
        assert!(theta.iter().any(|s| s.contains(tau) && s.contains(negtau)));
        // The valuation jump sees only the three consistent ones.
        let vb = enumerate_fixpoints(
            &p,
            JumpConfig::new(JumpKind::VB),
            EnumerateOptions::default(),
        )
        .unwrap();
        assert_eq!(vb.len(), 3);
        assert!(vb.iter().all(|s| con(&p, s)));
    }

    #[test]
    fn enumeration_is_identical_across_job_counts() {
        let p = mini_core();
        for kind in [JumpKind::Theta, JumpKind::VB] {
            let serial = enumerate_fixpoints(
                &p,
                JumpConfig::new(kind),
                EnumerateOptions {
                    jobs: 1,
                    ..Default::default()
                },
            )
            .unwrap();
            let parallel = enumerate_fixpoints(
                &p,
                JumpConfig::new(kind),
                EnumerateOptions {
                    jobs: 3,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(serial, parallel);
        }
    }

    #[test]
    fn enumeration_rejects_oversized_pools() {
        let p = mini_core();
        let err = enumerate_fixpoints(
            &p,
            JumpConfig::new(JumpKind::Theta),
            EnumerateOptions {
                max_pool_bits: 4,
                jobs: 1,
            },
        )
        .unwrap_err();
        assert!(matches!(err, FixpointError::PoolTooLarge { .. }));
    }

    #[test]
    fn classification_flags_describe_the_minimal_fixpoint() {
        let p = mini_core();
        let eng = JumpEngine::new(&p, JumpConfig::new(JumpKind::Theta));
        let mfp = minimal_fixpoint(&eng).unwrap();
        let c = classify(&eng, &mfp);
        assert!(c.is_fixpoint);
        assert!(c.consistent);
        assert!(c.classically_sound);
        assert!(c.tr_down_closed);
        assert!(c.neg_tr_down_closed);
        assert!(c.omega_closed);
        // `truth` and its ascription `t00` co-occur, and every other
        // truth-ascription in the pool points at an uncoded or absent
        // statement, so both biconditional closures hold.
        assert!(c.kripke_set);

        // Dropping the ascribed statement breaks downward closure.
        let broken = named_set(&p, &["t00"]);
        let cb = classify(&eng, &broken);
        assert!(!cb.tr_down_closed);
        assert!(!cb.kripke_set);

        // Holding a statement without its coded ascription breaks the
        // upward half even though descent is fine.
        let half = named_set(&p, &["truth"]);
        let ch = classify(&eng, &half);
        assert!(ch.tr_down_closed);
        assert!(ch.neg_tr_down_closed);
        assert!(!ch.kripke_set);
    }

    #[test]
    fn omega_closure_flags_universal_statements() {
        let p = load_pool(
            "domain 12;\nsentence all := forall x . Tr(8 + x);\nsentence t8 @ 8 := Tr(#t8);\nsentence t9 @ 9 := Tr(#t9);\nsentence t10 @ 10 := Tr(#t10);\nsentence t11 @ 11 := Tr(#t11);\nclose negation;\nclose instances;",
        )
        .unwrap();
        let eng = JumpEngine::new(&p, JumpConfig::new(JumpKind::Theta));
        let instances_only = named_set(&p, &["t8", "t9", "t10", "t11"]);
        assert!(!classify(&eng, &instances_only).omega_closed);
        let mut with_all = instances_only.clone();
        with_all.insert(idx(&p, "all"));
        assert!(classify(&eng, &with_all).omega_closed);
    }

    #[test]
    fn compatibility_is_clash_freedom() {
        let p = teller_pool();
        let yes = named_set(&p, &["tau"]);
        let no = named_set(&p, &["negtau"]);
        assert!(!compatible(&p, &yes, &no));
        assert!(compatible(&p, &yes, &p.empty_set()));
        assert!(compatible(&p, &yes, &yes));
    }

    #[test]
    fn teller_decisions_are_not_intrinsic() {
        let p = teller_pool();
        let report = maximal_intrinsic(
            &p,
            JumpConfig::new(JumpKind::VB),
            EnumerateOptions::default(),
        )
        .unwrap();
        assert_eq!(report.intrinsic.len(), 1);
        assert_eq!(report.maximal, Some(p.empty_set()));
    }

    #[test]
    fn the_minimal_valuation_fixpoint_is_the_maximal_intrinsic_one() {
        let p = mini_core();
        let eng = JumpEngine::new(&p, JumpConfig::new(JumpKind::VB));
        let mfp = minimal_fixpoint(&eng).unwrap();
        let report = maximal_intrinsic(
            &p,
            JumpConfig::new(JumpKind::VB),
            EnumerateOptions::default(),
        )
        .unwrap();
        assert_eq!(report.maximal, Some(mfp));
    }
}
