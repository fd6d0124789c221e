//! Satisfaction relations and evaluation schemes over a pool.
//!
//! Four graded readings of "the set `X` makes `φ` hold":
//!
//! * [`classical_sat`] — total classical truth, reading `Tr(t)` as "the value
//!   of `t` codes a statement in `X`".
//! * [`sk_sat`] — Strong Kleene positive satisfaction: `Tr` is asserted from
//!   membership in `X` and denied from membership in the negative extension
//!   (values that code no statement count as denied). Monotone in `X`.
//! * [`xi_onestep`] — the compositional one-step scheme: a statement enters
//!   on the basis of its outermost shape and its constituents' membership in
//!   `X`, with negated constituents read through negation partners.
//! * [`xi_star_onestep`] — the one-step scheme plus the two downward truth
//!   clauses: a statement also enters when its coded truth ascription is in
//!   `X`, or when the negated ascription of its partner is.
//!
//! Shape clauses fire only when the constituents they mention are actually
//! coded in the pool; an uncoded constituent never supports membership.
//!
//! The module also houses set predicates (consistency, maximal consistency),
//! the consistency/completeness instance builders, and the four admissible
//! extension disciplines used by the valuation-quantifying jumps.

use crate::model::{BaseModel, Env};
use crate::set::TruthSet;
use crate::syntax::{instantiate, Formula, SentencePool, Term};

/// Classical truth over the pool with `Tr` read off `x`.
pub fn classical_sat(pool: &SentencePool, x: &TruthSet, f: &Formula) -> bool {
    let m = BaseModel::new(pool);
    fn go<'f>(
        pool: &SentencePool,
        m: &BaseModel<'_>,
        x: &TruthSet,
        f: &'f Formula,
        env: &mut Env<'f>,
    ) -> bool {
        match f {
            Formula::ArithAtom(rel, a, b) => {
                let av = m.eval_term(a, env).expect("closed in context");
                let bv = m.eval_term(b, env).expect("closed in context");
                rel.eval(av, bv)
            }
            Formula::SentAtom(t) => {
                let v = m.eval_term(t, env).expect("closed in context");
                pool.is_sent_code(v)
            }
            Formula::TrAtom(t) => {
                let v = m.eval_term(t, env).expect("closed in context");
                pool.stmt_of_code(v).is_some_and(|i| x.contains(i))
            }
            Formula::Not(inner) => !go(pool, m, x, inner, env),
            Formula::And(a, b) => {
                go(pool, m, x, a, env) && go(pool, m, x, b, env)
            }
            Formula::Or(a, b) => go(pool, m, x, a, env) || go(pool, m, x, b, env),
            Formula::ForAll(v, body) => (0..pool.domain_size).all(|d| {
                env.push(v, d);
                let r = go(pool, m, x, body, env);
                env.pop();
                r
            }),
            Formula::Exists(v, body) => (0..pool.domain_size).any(|d| {
                env.push(v, d);
                let r = go(pool, m, x, body, env);
                env.pop();
                r
            }),
        }
    }
    go(pool, &m, x, f, &mut Env::new())
}

/// Strong Kleene positive satisfaction (monotone in `x`).
pub fn sk_sat(pool: &SentencePool, x: &TruthSet, f: &Formula) -> bool {
    let m = BaseModel::new(pool);
    sk_polarity(pool, &m, x, f, true, &mut Env::new())
}

fn sk_polarity<'f>(
    pool: &SentencePool,
    m: &BaseModel<'_>,
    x: &TruthSet,
    f: &'f Formula,
    positive: bool,
    env: &mut Env<'f>,
) -> bool {
    match f {
        Formula::ArithAtom(rel, a, b) => {
            let av = m.eval_term(a, env).expect("closed in context");
            let bv = m.eval_term(b, env).expect("closed in context");
            rel.eval(av, bv) == positive
        }
        Formula::SentAtom(t) => {
            let v = m.eval_term(t, env).expect("closed in context");
            pool.is_sent_code(v) == positive
        }
        Formula::TrAtom(t) => {
            let v = m.eval_term(t, env).expect("closed in context");
            if positive {
                pool.stmt_of_code(v).is_some_and(|i| x.contains(i))
            } else {
                m.in_negative_extension(v, x)
            }
        }
        Formula::Not(inner) => sk_polarity(pool, m, x, inner, !positive, env),
        Formula::And(a, b) => {
            if positive {
                sk_polarity(pool, m, x, a, true, env) && sk_polarity(pool, m, x, b, true, env)
            } else {
                sk_polarity(pool, m, x, a, false, env) || sk_polarity(pool, m, x, b, false, env)
            }
        }
        Formula::Or(a, b) => {
            if positive {
                sk_polarity(pool, m, x, a, true, env) || sk_polarity(pool, m, x, b, true, env)
            } else {
                sk_polarity(pool, m, x, a, false, env) && sk_polarity(pool, m, x, b, false, env)
            }
        }
        Formula::ForAll(v, body) => {
            let all = positive;
            quantifier_sweep(pool, m, x, v, body, positive, all, env)
        }
        Formula::Exists(v, body) => {
            let all = !positive;
            quantifier_sweep(pool, m, x, v, body, positive, all, env)
        }
    }
}

fn quantifier_sweep<'f>(
    pool: &SentencePool,
    m: &BaseModel<'_>,
    x: &TruthSet,
    var: &'f str,
    body: &'f Formula,
    positive: bool,
    conjunctive: bool,
    env: &mut Env<'f>,
) -> bool {
    for d in 0..pool.domain_size {
        env.push(var, d);
        let r = sk_polarity(pool, m, x, body, positive, env);
        env.pop();
        if conjunctive && !r {
            return false;
        }
        if !conjunctive && r {
            return true;
        }
    }
    conjunctive
}

fn member(pool: &SentencePool, x: &TruthSet, f: &Formula) -> bool {
    pool.lookup(f).is_some_and(|i| x.contains(i))
}

fn partner_member(pool: &SentencePool, x: &TruthSet, f: &Formula) -> bool {
    member(pool, x, &f.partner_ast())
}

/// The compositional one-step scheme: shape-directed membership conditions.
pub fn xi_onestep(pool: &SentencePool, w: &Formula, x: &TruthSet) -> bool {
    let m = BaseModel::new(pool);
    if w.is_base_literal() {
        return m.true0(w).expect("base literal");
    }
    let n = pool.domain_size;
    match w {
        Formula::TrAtom(t) => {
            let v = m.eval_term(t, &Env::new()).expect("closed witness");
            pool.stmt_of_code(v).is_some_and(|i| x.contains(i))
        }
        Formula::And(a, b) => member(pool, x, a) && member(pool, x, b),
        Formula::Or(a, b) => member(pool, x, a) || member(pool, x, b),
        Formula::ForAll(v, body) => {
            (0..n).all(|d| member(pool, x, &instantiate(body, v, d, n)))
        }
        Formula::Exists(v, body) => {
            (0..n).any(|d| member(pool, x, &instantiate(body, v, d, n)))
        }
        Formula::Not(inner) => match &**inner {
            Formula::TrAtom(t) => {
                let v = m.eval_term(t, &Env::new()).expect("closed witness");
                m.in_negative_extension(v, x)
            }
            Formula::Not(y) => member(pool, x, y),
            Formula::And(a, b) => {
                partner_member(pool, x, a) || partner_member(pool, x, b)
            }
            Formula::Or(a, b) => {
                partner_member(pool, x, a) && partner_member(pool, x, b)
            }
            Formula::ForAll(v, body) => (0..n)
                .any(|d| partner_member(pool, x, &instantiate(body, v, d, n))),
            Formula::Exists(v, body) => (0..n)
                .all(|d| partner_member(pool, x, &instantiate(body, v, d, n))),
            // Negated base literals were handled as base literals above.
            Formula::ArithAtom(..) | Formula::SentAtom(_) => unreachable!(),
        },
        // Bare base literals were handled above.
        Formula::ArithAtom(..) | Formula::SentAtom(_) => unreachable!(),
    }
}

/// One-step scheme plus the downward truth clauses: a coded statement also
/// enters when its truth ascription `Tr(c̄)` is a statement in `x`, or when
/// the negated ascription `not Tr(c̄')` of its partner's code is.
pub fn xi_star_onestep(pool: &SentencePool, w: &Formula, x: &TruthSet) -> bool {
    if xi_onestep(pool, w, x) {
        return true;
    }
    if let Some(idx) = pool.lookup(w) {
        let c = pool.code_of(idx);
        let ascription = Formula::tr(c);
        if member(pool, x, &ascription) {
            return true;
        }
        let partner_c = pool.code_of(pool.partner_idx(idx));
        let negated_ascription = Formula::not(Formula::tr(partner_c));
        if member(pool, x, &negated_ascription) {
            return true;
        }
    }
    false
}

/// No statement sits in `x` together with its negation partner.
pub fn con(pool: &SentencePool, x: &TruthSet) -> bool {
    x.iter().all(|i| !x.contains(pool.partner_idx(i)))
}

/// Maximal consistency: consistent, and every statement or its partner is in.
pub fn mxc(pool: &SentencePool, x: &TruthSet) -> bool {
    con(pool, x)
        && (0..pool.n_statements()).all(|i| x.contains(i) || x.contains(pool.partner_idx(i)))
}

/// The consistency instance for the statement coded `c`:
/// `not (Tr(c̄) and Tr(c̄'))` with `c'` the partner code.
pub fn con_instance(pool: &SentencePool, c: u32) -> Option<Formula> {
    let nc = pool.partner_code(c)?;
    Some(Formula::not(Formula::and(Formula::tr(c), Formula::tr(nc))))
}

/// The completeness instance for the statement coded `c`: the desugared
/// biconditional `(not Tr(c̄)) <-> Tr(c̄')`, i.e.
/// `(not not Tr(c̄) or Tr(c̄')) and (not Tr(c̄') or not Tr(c̄))`.
pub fn com_instance(pool: &SentencePool, c: u32) -> Option<Formula> {
    let nc = pool.partner_code(c)?;
    let a = Formula::not(Formula::tr(c));
    Some(Formula::and(
        Formula::or(Formula::not(a.clone()), Formula::tr(nc)),
        Formula::or(Formula::not(Formula::tr(nc)), a),
    ))
}

/// Recognize a consistency instance or its partner (the bare conjunction),
/// used to stratify instance generation: instances are generated only for
/// statements that are not themselves part of the consistency layer.
pub fn is_con_shaped(pool: &SentencePool, f: &Formula) -> bool {
    let inner = match f {
        Formula::Not(inner) => &**inner,
        other => other,
    };
    if let Formula::And(a, b) = inner {
        if let (Formula::TrAtom(Term::Numeral(c)), Formula::TrAtom(Term::Numeral(d))) =
            (&**a, &**b)
        {
            return pool.partner_code(*c) == Some(*d);
        }
    }
    false
}

/// Recognize a completeness instance or its partner.
pub fn is_com_shaped(pool: &SentencePool, f: &Formula) -> bool {
    let inner = match f {
        Formula::Not(inner) => &**inner,
        other => other,
    };
    for (c, nc) in code_pairs(pool) {
        if let Some(com) = com_instance_raw(c, nc) {
            if *inner == com {
                return true;
            }
        }
    }
    false
}

fn com_instance_raw(c: u32, nc: u32) -> Option<Formula> {
    let a = Formula::not(Formula::tr(c));
    Some(Formula::and(
        Formula::or(Formula::not(a.clone()), Formula::tr(nc)),
        Formula::or(Formula::not(Formula::tr(nc)), a),
    ))
}

fn code_pairs(pool: &SentencePool) -> Vec<(u32, u32)> {
    (0..pool.n_statements())
        .map(|i| {
            (
                pool.code_of(i),
                pool.code_of(pool.partner_idx(i)),
            )
        })
        .collect()
}

/// Extension disciplines for the valuation-quantifying jumps.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Admissibility {
    /// Any superset of the input.
    SV,
    /// Supersets avoiding the input's negative extension.
    VB,
    /// Consistent supersets.
    VC,
    /// Maximal consistent supersets.
    MC,
}

/// Whether `y` is an admissible extension of `x` under the discipline.
pub fn admissible(
    pool: &SentencePool,
    kind: Admissibility,
    x: &TruthSet,
    y: &TruthSet,
) -> bool {
    if !x.is_subset(y) {
        return false;
    }
    match kind {
        Admissibility::SV => true,
        Admissibility::VB => {
            let m = BaseModel::new(pool);
            let neg = m.negative_extension(x);
            !y.intersects(&neg)
        }
        Admissibility::VC => con(pool, y),
        Admissibility::MC => mxc(pool, y),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::load_pool;

    fn liar_pool() -> SentencePool {
        load_pool(
            "domain 12;\nsentence tau := Tr(#tau);\nsentence negtau := not Tr(#tau);\nsentence asc := Tr(#negtau);\nsentence truth := 0 = 0;\nclose negation;\nclose instances;",
        )
        .unwrap()
    }

    #[test]
    fn classical_sat_reads_tr_from_the_set() {
        let p = liar_pool();
        let tau = p.stmt_of_code(1).unwrap();
        let mut x = p.empty_set();
        assert!(!classical_sat(&p, &x, &Formula::tr(1)));
        x.insert(tau);
        assert!(classical_sat(&p, &x, &Formula::tr(1)));
        assert!(!classical_sat(&p, &x, &Formula::not(Formula::tr(1))));
        // Tr at a non-sentence code is classically false.
        assert!(!classical_sat(&p, &x, &Formula::tr(0)));
        assert!(classical_sat(
            &p,
            &x,
            &Formula::not(Formula::tr(0))
        ));
        // Quantifier: exists x . Tr(x) holds since code 1 is in the set.
        let ex = Formula::Exists(
            "v".into(),
            Box::new(Formula::TrAtom(Term::Var("v".into()))),
        );
        assert!(classical_sat(&p, &x, &ex));
        assert!(!classical_sat(&p, &p.empty_set(), &ex));
    }

    #[test]
    fn sk_sat_is_partial_on_the_liar() {
        let p = load_pool(
            "domain 8;\nsentence lam := not Tr(#lam);\nclose negation;\nclose instances;",
        )
        .unwrap();
        let lam = p.stmt_of_code(1).unwrap();
        let nlam = p.partner_idx(lam);
        let lam_f = p.statements[lam].clone();
        let nlam_f = p.statements[nlam].clone();
        let empty = p.empty_set();
        // Neither the liar nor its partner is Strong Kleene true at the
        // empty set: the truth atom has no positive or negative support.
        assert!(!sk_sat(&p, &empty, &lam_f));
        assert!(!sk_sat(&p, &empty, &nlam_f));
        // With the partner Tr(c) in the set, the liar's denial is supported.
        let mut x = p.empty_set();
        x.insert(nlam);
        assert!(sk_sat(&p, &x, &lam_f));
        assert!(!sk_sat(&p, &x, &nlam_f));
    }

    #[test]
    fn sk_sat_monotone_under_growth() {
        let p = liar_pool();
        let mut x = p.empty_set();
        x.insert(p.stmt_of_code(1).unwrap());
        let mut y = x.clone();
        y.insert(p.stmt_of_code(3).unwrap());
        for f in &p.witnesses {
            if sk_sat(&p, &x, f) {
                assert!(sk_sat(&p, &y, f), "monotonicity broke on {f}");
            }
        }
    }

    #[test]
    fn xi_base_clauses() {
        let p = liar_pool();
        let empty = p.empty_set();
        // Base literals enter by base-model truth regardless of the set.
        assert!(xi_onestep(&p, &Formula::truth(), &empty));
        assert!(!xi_onestep(&p, &Formula::falsity(), &empty));
        assert!(xi_onestep(
            &p,
            &Formula::not(Formula::falsity()),
            &empty
        ));
        assert!(xi_onestep(&p, &Formula::SentAtom(Term::Numeral(1)), &empty));
        assert!(!xi_onestep(&p, &Formula::SentAtom(Term::Numeral(0)), &empty));
    }

    #[test]
    fn xi_truth_clauses_use_codes() {
        let p = liar_pool();
        let tau_idx = p.stmt_of_code(1).unwrap();
        let negtau_idx = p.stmt_of_code(2).unwrap();
        let tau = p.statements[tau_idx].clone();
        let negtau = p.statements[negtau_idx].clone();
        let empty = p.empty_set();
        assert!(!xi_onestep(&p, &tau, &empty));
        let mut with_tau = p.empty_set();
        with_tau.insert(tau_idx);
        assert!(xi_onestep(&p, &tau, &with_tau));
        // The negated truth ascription supports itself through the partner.
        let mut with_negtau = p.empty_set();
        with_negtau.insert(negtau_idx);
        assert!(xi_onestep(&p, &negtau, &with_negtau));
        assert!(!xi_onestep(&p, &negtau, &empty));
        // A truth atom at a non-sentence value enters negated form always.
        let f = Formula::not(Formula::tr(11));
        assert!(xi_onestep(&p, &f, &empty));
    }

    #[test]
    fn xi_connective_clauses_use_partner_codes() {
        let p = load_pool(
            "domain 16;\nsentence tau0 := Tr(#tau0);\nsentence tau1 := Tr(#tau1);\nsentence disj := Tr(#tau0) or Tr(#tau1);\nsentence conj := Tr(#tau0) and Tr(#tau1);\nclose negation;\nclose instances;",
        )
        .unwrap();
        let g = |name: &str| p.stmt_of_code(p.code_of_name(name).unwrap()).unwrap();
        let disj = p.statements[g("disj")].clone();
        let conj = p.statements[g("conj")].clone();
        let ndisj = disj.partner_ast();
        let nconj = conj.partner_ast();
        let mut x = p.empty_set();
        x.insert(g("tau0"));
        assert!(xi_onestep(&p, &disj, &x));
        assert!(!xi_onestep(&p, &conj, &x));
        // ¬conj fires from a negated conjunct's partner membership.
        let mut y = p.empty_set();
        y.insert(p.partner_idx(g("tau0")));
        assert!(xi_onestep(&p, &nconj, &y));
        assert!(!xi_onestep(&p, &ndisj, &y));
        // ¬disj needs both partners.
        let mut z = y.clone();
        z.insert(p.partner_idx(g("tau1")));
        assert!(xi_onestep(&p, &ndisj, &z));
    }

    #[test]
    fn xi_star_adds_downward_clauses_only() {
        let p = liar_pool();
        let tau_idx = p.stmt_of_code(1).unwrap();
        let negtau_idx = p.stmt_of_code(2).unwrap();
        let asc_idx = p.stmt_of_code(3).unwrap(); // asc = Tr(2)
        let tau = p.statements[tau_idx].clone();
        let negtau = p.statements[negtau_idx].clone();
        // First downward clause: the ascription Tr(2) in the set lets the
        // ascribed statement (negtau, coded 2) descend; the plain scheme
        // does not fire on this set.
        let mut x = p.empty_set();
        x.insert(asc_idx);
        assert!(xi_star_onestep(&p, &negtau, &x));
        assert!(!xi_onestep(&p, &negtau, &x));
        // Second downward clause: not Tr(2) in the set supports the
        // statement whose PARTNER is coded 2 — that is tau.
        let nasc_idx = p.partner_idx(asc_idx); // not Tr(2)
        let mut z = p.empty_set();
        z.insert(nasc_idx);
        assert!(xi_star_onestep(&p, &tau, &z));
        assert!(!xi_onestep(&p, &tau, &z));
        // On sets where the plain scheme already fires, the starred scheme
        // agrees (it only adds clauses).
        for s in [&x, &z] {
            for w in &p.witnesses {
                if xi_onestep(&p, w, s) {
                    assert!(xi_star_onestep(&p, w, s));
                }
            }
        }
    }

    #[test]
    fn con_and_mxc() {
        let p = liar_pool();
        let tau = p.stmt_of_code(1).unwrap();
        let negtau = p.stmt_of_code(2).unwrap();
        let mut x = p.empty_set();
        x.insert(tau);
        assert!(con(&p, &x));
        assert!(!mxc(&p, &x));
        x.insert(negtau);
        assert!(!con(&p, &x));
        // Build a maximal consistent set: one of each partner pair.
        let mut m = p.empty_set();
        for i in 0..p.n_statements() {
            if !m.contains(p.partner_idx(i)) && !m.contains(i) {
                m.insert(i);
            }
        }
        assert!(mxc(&p, &m));
    }

    #[test]
    fn instance_builders() {
        let p = liar_pool();
        let ci = con_instance(&p, 1).unwrap();
        assert_eq!(
            ci,
            Formula::not(Formula::and(Formula::tr(1), Formula::tr(2)))
        );
        assert!(is_con_shaped(&p, &ci));
        assert!(is_con_shaped(&p, &ci.partner_ast()));
        let mi = com_instance(&p, 1).unwrap();
        let a = Formula::not(Formula::tr(1));
        assert_eq!(
            mi,
            Formula::and(
                Formula::or(Formula::not(a.clone()), Formula::tr(2)),
                Formula::or(Formula::not(Formula::tr(2)), a),
            )
        );
        assert!(is_com_shaped(&p, &mi));
        assert!(!is_con_shaped(&p, &p.statements[0]));
        assert!(!is_com_shaped(&p, &p.statements[0]));
        assert!(con_instance(&p, 0).is_none());
    }

    #[test]
    fn admissibility_disciplines() {
        let p = liar_pool();
        let tau = p.stmt_of_code(1).unwrap();
        let negtau = p.stmt_of_code(2).unwrap();
        let mut x = p.empty_set();
        x.insert(tau);
        let mut y_incon = x.clone();
        y_incon.insert(negtau);
        // SV admits any superset, even inconsistent ones.
        assert!(admissible(&p, Admissibility::SV, &x, &y_incon));
        // VB rejects supersets that meet the negative extension.
        assert!(!admissible(&p, Admissibility::VB, &x, &y_incon));
        // VC rejects inconsistent supersets.
        assert!(!admissible(&p, Admissibility::VC, &x, &y_incon));
        let mut y_ok = x.clone();
        y_ok.insert(p.stmt_of_code(3).unwrap());
        assert!(admissible(&p, Admissibility::VB, &x, &y_ok));
        assert!(admissible(&p, Admissibility::VC, &x, &y_ok));
        assert!(!admissible(&p, Admissibility::MC, &x, &y_ok));
        // Non-supersets are never admissible.
        assert!(!admissible(&p, Admissibility::SV, &x, &p.empty_set()));
        // MC needs a full choice across partner pairs.
        let mut m = x.clone();
        for i in 0..p.n_statements() {
            if !m.contains(i) && !m.contains(p.partner_idx(i)) {
                m.insert(i);
            }
        }
        assert!(admissible(&p, Admissibility::MC, &x, &m));
    }
}
