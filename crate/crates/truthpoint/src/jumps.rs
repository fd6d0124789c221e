//! The jump operators: one revision step of each semantic discipline.
//!
//! Every jump maps a set of statements to a set of statements. The kinds:
//!
//! * `SKJump` — the compositional one-step scheme applied to each statement.
//! * `SV`, `VB`, `VC`, `MC` — valuation-quantifying jumps: a statement enters
//!   when it is classically true under **every** admissible extension of the
//!   input (any superset; supersets avoiding the negative extension;
//!   consistent supersets; maximal consistent supersets). Evaluated per
//!   statement by projecting onto the codes the statement actually mentions.
//! * `SSK` — witnesses that are Strong Kleene true act as premises; a
//!   statement enters when it follows from them (as one premise set, or via
//!   a single implying witness under [`WitnessPolicy::SingleWitness`]).
//! * `Theta`/`ThetaStar` — witnesses supported by the one-step scheme (plain
//!   or starred) push statements in through single-witness implication.
//! * `ThetaC`/`ThetaMC`/`ThetaStarC`/`ThetaStarMC` — the same with the coded
//!   consistency (respectively completeness) instances available as witnesses
//!   unconditionally.
//!
//! The valuation-quantifying jumps and `SSK` are undefined on inconsistent
//! inputs. All jumps are monotone on their domain of definition.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::consequence::{
    implication_tables, ConsequenceEngine, ConsequenceMode, ImplicationTables,
};
use crate::model::BaseModel;
use crate::schemes::{
    classical_sat, con, con_instance, com_instance, is_com_shaped, is_con_shaped, sk_sat,
    xi_onestep, xi_star_onestep,
};
use crate::set::TruthSet;
use crate::syntax::{Formula, SentencePool, Term};

/// The jump operator family.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum JumpKind {
    SKJump,
    SV,
    VB,
    VC,
    MC,
    SSK,
    Theta,
    ThetaStar,
    ThetaC,
    ThetaMC,
    ThetaStarC,
    ThetaStarMC,
}

impl JumpKind {
    pub const ALL: [JumpKind; 12] = [
        JumpKind::SKJump,
        JumpKind::SV,
        JumpKind::VB,
        JumpKind::VC,
        JumpKind::MC,
        JumpKind::SSK,
        JumpKind::Theta,
        JumpKind::ThetaStar,
        JumpKind::ThetaC,
        JumpKind::ThetaMC,
        JumpKind::ThetaStarC,
        JumpKind::ThetaStarMC,
    ];

    pub fn name(self) -> &'static str {
        match self {
            JumpKind::SKJump => "sk",
            JumpKind::SV => "sv",
            JumpKind::VB => "vb",
            JumpKind::VC => "vc",
            JumpKind::MC => "mc",
            JumpKind::SSK => "ssk",
            JumpKind::Theta => "theta",
            JumpKind::ThetaStar => "theta-star",
            JumpKind::ThetaC => "theta-c",
            JumpKind::ThetaMC => "theta-mc",
            JumpKind::ThetaStarC => "theta-star-c",
            JumpKind::ThetaStarMC => "theta-star-mc",
        }
    }

    /// Jumps that are undefined on inconsistent inputs.
    pub fn requires_consistent_input(self) -> bool {
        matches!(
            self,
            JumpKind::SV | JumpKind::VB | JumpKind::VC | JumpKind::MC | JumpKind::SSK
        )
    }

    /// The witness-implication jumps built on the one-step schemes.
    pub fn is_theta_family(self) -> bool {
        matches!(
            self,
            JumpKind::Theta
                | JumpKind::ThetaStar
                | JumpKind::ThetaC
                | JumpKind::ThetaMC
                | JumpKind::ThetaStarC
                | JumpKind::ThetaStarMC
        )
    }

    fn uses_starred_scheme(self) -> bool {
        matches!(
            self,
            JumpKind::ThetaStar | JumpKind::ThetaStarC | JumpKind::ThetaStarMC
        )
    }
}

impl std::str::FromStr for JumpKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        // Accept the canonical kebab name plus common spellings: case is
        // ignored, `-`/`_` are dropped, `*` reads as "star" (so "SK",
        // "theta*", "Theta-Star-MC" all resolve).
        let norm: String = s
            .to_ascii_lowercase()
            .replace('*', "star")
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        JumpKind::ALL
            .into_iter()
            .find(|k| k.name().replace('-', "") == norm)
            .ok_or_else(|| format!("unknown jump kind `{s}`"))
    }
}

/// How witness support turns into statement membership.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WitnessPolicy {
    /// Some single supported witness implies the statement.
    SingleWitness,
    /// The supported witnesses jointly entail the statement.
    PremiseSet,
}

impl std::str::FromStr for WitnessPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" => Ok(WitnessPolicy::SingleWitness),
            "set" => Ok(WitnessPolicy::PremiseSet),
            other => Err(format!("unknown witness policy `{other}`")),
        }
    }
}

/// Full jump configuration.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct JumpConfig {
    pub kind: JumpKind,
    pub mode: ConsequenceMode,
    pub witness_policy: WitnessPolicy,
    /// Restrict witness support to the first `n` witnesses (witness indices
    /// below `n`). Witnesses are ordered statements-first, so a limit equal
    /// to a statement count restricts support to those statements.
    pub witness_limit: Option<usize>,
}

impl JumpConfig {
    /// Defaults: finitary consequence; premise-set support for `SSK`, single
    /// witnesses for the implication jumps.
    pub fn new(kind: JumpKind) -> JumpConfig {
        JumpConfig {
            kind,
            mode: ConsequenceMode::Finitary,
            witness_policy: if kind == JumpKind::SSK {
                WitnessPolicy::PremiseSet
            } else {
                WitnessPolicy::SingleWitness
            },
            witness_limit: None,
        }
    }

    pub fn with_mode(mut self, mode: ConsequenceMode) -> JumpConfig {
        self.mode = mode;
        self
    }

    pub fn with_policy(mut self, policy: WitnessPolicy) -> JumpConfig {
        self.witness_policy = policy;
        self
    }

    pub fn with_witness_limit(mut self, limit: usize) -> JumpConfig {
        self.witness_limit = Some(limit);
        self
    }
}

/// Errors applying a jump.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum JumpError {
    #[error("jump is undefined on an inconsistent input set")]
    InconsistentInput,
    #[error(
        "the maximal-consistent projection requires involutive partnering \
         (the pool has double-negation statements)"
    )]
    NonInvolutivePartnering,
}

/// A jump operator specialized to one pool, with its tables precomputed.
pub struct JumpEngine<'p> {
    pool: &'p SentencePool,
    pub config: JumpConfig,
    /// Witness-to-statement implication tables (witness jumps only).
    tables: Option<ImplicationTables>,
    /// Statements implied by the unconditional consistency/completeness
    /// witnesses (the `*C`/`*MC` variants only).
    instance_implied: TruthSet,
    /// Per-statement indices of the statements whose codes its truth atoms
    /// mention (valuation jumps only).
    rel: Vec<Vec<usize>>,
    /// Premise-set memo: supported-witness mask → resulting statement set.
    memo: RefCell<HashMap<TruthSet, TruthSet>>,
}

impl<'p> JumpEngine<'p> {
    pub fn new(pool: &'p SentencePool, config: JumpConfig) -> JumpEngine<'p> {
        let kind = config.kind;
        let needs_tables = kind.is_theta_family()
            || (kind == JumpKind::SSK && config.witness_policy == WitnessPolicy::SingleWitness);
        let tables = needs_tables.then(|| implication_tables(pool, config.mode));

        let ns = pool.n_statements();
        let mut instance_implied = TruthSet::empty(ns);
        let instance_builder: Option<(&dyn Fn(&SentencePool, u32) -> Option<Formula>, _)> =
            match kind {
                JumpKind::ThetaC | JumpKind::ThetaStarC => Some((
                    &con_instance as &dyn Fn(&SentencePool, u32) -> Option<Formula>,
                    is_con_shaped as fn(&SentencePool, &Formula) -> bool,
                )),
                JumpKind::ThetaMC | JumpKind::ThetaStarMC => Some((
                    &com_instance as &dyn Fn(&SentencePool, u32) -> Option<Formula>,
                    is_com_shaped as fn(&SentencePool, &Formula) -> bool,
                )),
                _ => None,
            };
        if let (Some((builder, shaped)), Some(tables)) = (instance_builder, tables.as_ref()) {
            for i in 0..ns {
                if shaped(pool, &pool.statements[i]) {
                    continue; // instances are generated one level deep only
                }
                if let Some(instance) = builder(pool, pool.code_of(i)) {
                    if let Some(widx) = pool.lookup(&instance) {
                        // The instance is a coded statement; statements are a
                        // prefix of the witness list, so its implication row
                        // is the statement-to-statement row.
                        instance_implied.union_with(&tables.stmt_imp[widx]);
                    }
                }
            }
        }

        let rel = if matches!(
            kind,
            JumpKind::SV | JumpKind::VB | JumpKind::VC | JumpKind::MC
        ) {
            pool.statements
                .iter()
                .map(|f| {
                    let mut codes = BTreeSet::new();
                    collect_tr_codes(pool, f, &mut codes);
                    codes
                        .into_iter()
                        .filter_map(|c| pool.stmt_of_code(c))
                        .collect()
                })
                .collect()
        } else {
            Vec::new()
        };

        JumpEngine {
            pool,
            config,
            tables,
            instance_implied,
            rel,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn pool(&self) -> &'p SentencePool {
        self.pool
    }

    /// One application of the jump.
    pub fn apply(&self, x: &TruthSet) -> Result<TruthSet, JumpError> {
        let kind = self.config.kind;
        if kind.requires_consistent_input() && !con(self.pool, x) {
            return Err(JumpError::InconsistentInput);
        }
        match kind {
            JumpKind::SKJump => Ok(self.apply_onestep(x)),
            JumpKind::SV | JumpKind::VB | JumpKind::VC | JumpKind::MC => {
                self.apply_valuation(kind, x)
            }
            JumpKind::SSK => Ok(self.apply_witnessed(x, |pool, w, s| sk_sat(pool, s, w))),
            _ => {
                let starred = kind.uses_starred_scheme();
                let mut out = self.apply_witnessed(x, move |pool, w, s| {
                    if starred {
                        xi_star_onestep(pool, w, s)
                    } else {
                        xi_onestep(pool, w, s)
                    }
                });
                out.union_with(&self.instance_implied);
                Ok(out)
            }
        }
    }

    fn apply_onestep(&self, x: &TruthSet) -> TruthSet {
        let mut out = self.pool.empty_set();
        for (i, st) in self.pool.statements.iter().enumerate() {
            if xi_onestep(self.pool, st, x) {
                out.insert(i);
            }
        }
        out
    }

    /// Witness-supported jumps: compute the supported-witness mask and turn
    /// it into statement membership per the witness policy.
    fn apply_witnessed(
        &self,
        x: &TruthSet,
        supported: impl Fn(&SentencePool, &Formula, &TruthSet) -> bool,
    ) -> TruthSet {
        let limit = self
            .config
            .witness_limit
            .unwrap_or(self.pool.witnesses.len())
            .min(self.pool.witnesses.len());
        let mut mask = TruthSet::empty(self.pool.witnesses.len());
        for (wi, w) in self.pool.witnesses[..limit].iter().enumerate() {
            if supported(self.pool, w, x) {
                mask.insert(wi);
            }
        }
        match self.config.witness_policy {
            WitnessPolicy::SingleWitness => {
                let tables = self.tables.as_ref().expect("tables built for this policy");
                let mut out = self.pool.empty_set();
                for i in 0..self.pool.n_statements() {
                    if mask.intersects(&tables.impliers[i]) {
                        out.insert(i);
                    }
                }
                out
            }
            WitnessPolicy::PremiseSet => {
                if let Some(hit) = self.memo.borrow().get(&mask) {
                    return hit.clone();
                }
                let eng = ConsequenceEngine::new(self.pool, self.config.mode);
                let premises: Vec<&Formula> =
                    mask.iter().map(|wi| &self.pool.witnesses[wi]).collect();
                let mut out = self.pool.empty_set();
                for (i, st) in self.pool.statements.iter().enumerate() {
                    if eng.entails(&premises, st) {
                        out.insert(i);
                    }
                }
                self.memo.borrow_mut().insert(mask, out.clone());
                out
            }
        }
    }

    /// The valuation-quantifying jumps, one statement at a time, projected
    /// onto the statement's relevant codes.
    fn apply_valuation(&self, kind: JumpKind, x: &TruthSet) -> Result<TruthSet, JumpError> {
        if kind == JumpKind::MC && !self.pool.partner_is_involution() {
            return Err(JumpError::NonInvolutivePartnering);
        }
        let pool = self.pool;
        // The negative extension of the input (partner image): statements no
        // admissible extension may contain under VB, VC, or MC.
        let xneg = BaseModel::new(pool).negative_extension(x);
        let mut out = pool.empty_set();
        'stmt: for (i, st) in pool.statements.iter().enumerate() {
            let rel = &self.rel[i];
            // Relevant positions split three ways: forced in (already in the
            // input), forced out (discipline forbids them), free.
            let mut free: Vec<usize> = Vec::new();
            let mut base = pool.empty_set();
            for &r in rel {
                if x.contains(r) {
                    base.insert(r);
                    continue;
                }
                let blocked = match kind {
                    JumpKind::SV => false,
                    JumpKind::VB => xneg.contains(r),
                    // Adding r must leave the whole set consistent: r may
                    // neither clash with an input statement nor be clashed
                    // with by one (these differ on partner chains).
                    _ => xneg.contains(r) || x.contains(pool.partner_idx(r)),
                };
                if !blocked {
                    free.push(r);
                }
            }
            debug_assert!(free.len() <= 24, "projection grew unexpectedly large");
            'choice: for choice in 0u64..(1u64 << free.len()) {
                let mut r_set = base.clone();
                for (bit, &idx) in free.iter().enumerate() {
                    if choice >> bit & 1 == 1 {
                        r_set.insert(idx);
                    }
                }
                if matches!(kind, JumpKind::VC | JumpKind::MC) {
                    // Consistency of input-plus-choice: no chosen statement
                    // may have its partner chosen too (the input side is
                    // already covered by the forced-out positions).
                    for (bit, &idx) in free.iter().enumerate() {
                        if choice >> bit & 1 == 1 && r_set.contains(pool.partner_idx(idx)) {
                            continue 'choice;
                        }
                    }
                }
                if kind == JumpKind::MC {
                    // Maximality is visible inside the projection only for
                    // partner pairs lying entirely within the relevant codes:
                    // one of the two must be present. Pairs that straddle the
                    // boundary can always be completed outside.
                    for &idx in rel {
                        let p = pool.partner_idx(idx);
                        if rel.contains(&p) && !r_set.contains(idx) && !r_set.contains(p) {
                            continue 'choice;
                        }
                    }
                }
                if !classical_sat(pool, &r_set, st) {
                    continue 'stmt; // some admissible extension falsifies it
                }
            }
            out.insert(i);
        }
        Ok(out)
    }
}

/// Convenience: build an engine and apply once.
pub fn apply(
    pool: &SentencePool,
    config: JumpConfig,
    x: &TruthSet,
) -> Result<TruthSet, JumpError> {
    JumpEngine::new(pool, config).apply(x)
}

/// All values truth atoms take in `f` across environments.
fn collect_tr_codes(pool: &SentencePool, f: &Formula, out: &mut BTreeSet<u32>) {
    fn eval<'f>(t: &Term, env: &[(&'f str, u32)], n: u32) -> u32 {
        let max = n - 1;
        match t {
            Term::Numeral(v) => (*v).min(max),
            Term::Var(v) => env
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|&(_, val)| val)
                .expect("closed in context"),
            Term::SelfCode(_) => unreachable!("resolved pools have no self-codes"),
            Term::Succ(inner) => (eval(inner, env, n) + 1).min(max),
            Term::Plus(a, b) => (eval(a, env, n) + eval(b, env, n)).min(max),
        }
    }
    fn go<'f>(
        pool: &SentencePool,
        f: &'f Formula,
        env: &mut Vec<(&'f str, u32)>,
        out: &mut BTreeSet<u32>,
    ) {
        match f {
            Formula::TrAtom(t) => {
                out.insert(eval(t, env, pool.domain_size));
            }
            Formula::ArithAtom(..) | Formula::SentAtom(_) => {}
            Formula::Not(inner) => go(pool, inner, env, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                go(pool, a, env, out);
                go(pool, b, env, out);
            }
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                for d in 0..pool.domain_size {
                    env.push((v, d));
                    go(pool, body, env, out);
                    env.pop();
                }
            }
        }
    }
    go(pool, f, &mut Vec::new(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::load_pool;

    fn mini_core() -> SentencePool {
        load_pool(
            "domain 24;\nsentence tau := Tr(#tau);\nsentence negtau := not Tr(#tau);\nsentence lam := not Tr(#lam);\nsentence lem := (not Tr(#lam)) or (not not Tr(#lam));\nsentence truth := 0 = 0;\nsentence t00 := Tr(#truth);\nclose negation;\nclose instances;",
        )
        .unwrap()
    }

    fn idx(p: &SentencePool, name: &str) -> usize {
        p.stmt_of_code(p.code_of_name(name).unwrap()).unwrap()
    }

    #[test]
    fn onestep_jump_oscillates_on_the_liar() {
        let p = mini_core();
        let lam = idx(&p, "lam");
        let nlam = p.partner_idx(lam);
        let eng = JumpEngine::new(&p, JumpConfig::new(JumpKind::SKJump));
        let mut x = p.empty_set();
        x.insert(nlam);
        let jumped = eng.apply(&x).unwrap();
        assert!(jumped.contains(lam));
        assert!(!jumped.contains(nlam));
        let jumped2 = eng.apply(&jumped).unwrap();
        assert!(jumped2.contains(nlam));
        assert!(!jumped2.contains(lam));
    }

    #[test]
    fn valuation_jumps_see_the_excluded_middle() {
        let p = mini_core();
        let lem = idx(&p, "lem");
        let truth = idx(&p, "truth");
        let tau = idx(&p, "tau");
        let empty = p.empty_set();
        for kind in [JumpKind::SV, JumpKind::VB, JumpKind::VC, JumpKind::MC] {
            let eng = JumpEngine::new(&p, JumpConfig::new(kind));
            let out = eng.apply(&empty).unwrap();
            assert!(out.contains(lem), "{} missed the excluded middle", kind.name());
            assert!(out.contains(truth), "{} missed the base truth", kind.name());
            assert!(!out.contains(tau), "{} decided the truth-teller", kind.name());
        }
        // The one-step jump cannot see it: neither disjunct is in the set
        // (the second disjunct is not even coded).
        let sk = JumpEngine::new(&p, JumpConfig::new(JumpKind::SKJump));
        assert!(!sk.apply(&empty).unwrap().contains(lem));
    }

    #[test]
    fn valuation_jumps_error_on_inconsistent_input() {
        let p = mini_core();
        let tau = idx(&p, "tau");
        let mut x = p.empty_set();
        x.insert(tau);
        x.insert(p.partner_idx(tau));
        for kind in [
            JumpKind::SV,
            JumpKind::VB,
            JumpKind::VC,
            JumpKind::MC,
            JumpKind::SSK,
        ] {
            let eng = JumpEngine::new(&p, JumpConfig::new(kind));
            assert_eq!(eng.apply(&x).unwrap_err(), JumpError::InconsistentInput);
        }
        // The scheme jumps stay defined there.
        for kind in [JumpKind::SKJump, JumpKind::Theta, JumpKind::ThetaStar] {
            let eng = JumpEngine::new(&p, JumpConfig::new(kind));
            assert!(eng.apply(&x).is_ok());
        }
    }

    #[test]
    fn vb_respects_the_negative_extension() {
        let p = mini_core();
        let tau = idx(&p, "tau");
        let negtau = idx(&p, "negtau");
        let mut x = p.empty_set();
        x.insert(negtau);
        // Under VB, extensions avoid tau (the partner of an input member), so
        // "not Tr(1)" is true under every admissible extension.
        let vb = JumpEngine::new(&p, JumpConfig::new(JumpKind::VB));
        assert!(vb.apply(&x).unwrap().contains(negtau));
        // Under SV, the extension {negtau, tau} is admissible and falsifies
        // it (classically Tr(1) holds there), so SV does not add it.
        let sv = JumpEngine::new(&p, JumpConfig::new(JumpKind::SV));
        assert!(!sv.apply(&x).unwrap().contains(negtau));
        let _ = tau;
    }

    #[test]
    fn theta_jumps_move_supported_witnesses_through_implication() {
        let p = mini_core();
        let truth = idx(&p, "truth");
        let lem = idx(&p, "lem");
        let tau = idx(&p, "tau");
        let eng = JumpEngine::new(&p, JumpConfig::new(JumpKind::Theta));
        let out = eng.apply(&p.empty_set()).unwrap();
        // Base truths support themselves as witnesses; implication closes
        // over tautologies like the coded excluded middle.
        assert!(out.contains(truth));
        assert!(out.contains(lem), "a true witness implies the tautology");
        assert!(!out.contains(tau));
    }

    #[test]
    fn starred_jump_descends_through_ascriptions() {
        let p = load_pool(
            "domain 12;\nsentence tau := Tr(#tau);\nsentence negtau := not Tr(#tau);\nsentence asc := Tr(#negtau);\nclose negation;\nclose instances;",
        )
        .unwrap();
        let negtau = idx(&p, "negtau");
        let asc = idx(&p, "asc");
        let mut x = p.empty_set();
        x.insert(asc);
        let star = JumpEngine::new(&p, JumpConfig::new(JumpKind::ThetaStar));
        let plain = JumpEngine::new(&p, JumpConfig::new(JumpKind::Theta));
        assert!(star.apply(&x).unwrap().contains(negtau));
        assert!(!plain.apply(&x).unwrap().contains(negtau));
    }

    #[test]
    fn consistency_instances_are_unconditional_witnesses() {
        let p = load_pool(
            "domain 16;\nsentence tau := Tr(#tau);\nsentence negtau := not Tr(#tau);\nsentence contau := not (Tr(#tau) and Tr(#negtau));\nsentence connegtau := not (Tr(#negtau) and Tr(#tau));\nclose negation;\nclose instances;",
        )
        .unwrap();
        let contau = idx(&p, "contau");
        let c = JumpEngine::new(&p, JumpConfig::new(JumpKind::ThetaC));
        let plain = JumpEngine::new(&p, JumpConfig::new(JumpKind::Theta));
        let empty = p.empty_set();
        assert!(c.apply(&empty).unwrap().contains(contau));
        assert!(!plain.apply(&empty).unwrap().contains(contau));
    }

    #[test]
    fn ssk_policies_nest() {
        let p = mini_core();
        let mut x = p.empty_set();
        x.insert(idx(&p, "truth"));
        x.insert(idx(&p, "negtau"));
        let single = JumpEngine::new(
            &p,
            JumpConfig::new(JumpKind::SSK).with_policy(WitnessPolicy::SingleWitness),
        );
        let set = JumpEngine::new(&p, JumpConfig::new(JumpKind::SSK));
        let a = single.apply(&x).unwrap();
        let b = set.apply(&x).unwrap();
        assert!(a.is_subset(&b), "single-witness support must nest in premise-set support");
        assert!(b.contains(idx(&p, "truth")));
    }

    #[test]
    fn witness_limit_restricts_support() {
        let p = load_pool(
            "domain 12;\nsentence tau := Tr(#tau);\nsentence truth := 0 = 0;\nclose negation;\nclose instances;\nwitness Tr(#tau) and 0 = 0;",
        )
        .unwrap();
        let tau = idx(&p, "tau");
        // The extra witness "Tr(1) and 0 = 0" is Strong Kleene true when tau
        // is in the set and implies tau.
        let mut x = p.empty_set();
        x.insert(tau);
        let full = JumpEngine::new(
            &p,
            JumpConfig::new(JumpKind::SSK).with_policy(WitnessPolicy::SingleWitness),
        );
        assert!(full.apply(&x).unwrap().contains(tau));
        // Limiting witnesses to the statement prefix keeps tau supported
        // (tau supports itself), but limiting below tau's own index cannot.
        let none = JumpEngine::new(
            &p,
            JumpConfig::new(JumpKind::SSK)
                .with_policy(WitnessPolicy::SingleWitness)
                .with_witness_limit(0),
        );
        assert!(none.apply(&x).unwrap().is_empty());
    }

    #[test]
    fn jumps_are_monotone_on_samples() {
        let p = mini_core();
        let truth = idx(&p, "truth");
        let negtau = idx(&p, "negtau");
        let t00 = idx(&p, "t00");
        let mut x = p.empty_set();
        x.insert(truth);
        let mut y = x.clone();
        y.insert(negtau);
        y.insert(t00);
        for kind in JumpKind::ALL {
            let eng = JumpEngine::new(&p, JumpConfig::new(kind));
            let (jx, jy) = (eng.apply(&x), eng.apply(&y));
            if kind == JumpKind::MC && jx.is_err() {
                continue;
            }
            let (jx, jy) = (jx.unwrap(), jy.unwrap());
            assert!(
                jx.is_subset(&jy),
                "{} not monotone between nested consistent sets",
                kind.name()
            );
        }
    }
}
