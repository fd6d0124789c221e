//! Classical consequence between pool formulas, in two strengths.
//!
//! * **Finitary**: truth-free subformulas evaluate to constants in the base
//!   model, truth atoms `Tr(c̄)` become propositional atoms, and quantified
//!   subformulas that mention truth become opaque atoms linked to their
//!   instances by one-directional bridge implications — a universal implies
//!   each instance, an instance implies the existential, and nothing implies
//!   a universal from below. Entailment is propositional refutation over this
//!   skeleton. The missing upward direction is deliberate: it is what a
//!   finitary notion of proof can see.
//! * **Validity**: truth of the conclusion in every truth-valuation of the
//!   relevant statement codes that makes the premises true, with `Tr` fixed
//!   false at values that code no statement. Quantifiers range over the whole
//!   domain, so universals do follow from their instances.
//!
//! Refutation enumerates a truth table up to 20 atoms and switches to DPLL on
//! a Tseitin translation above that. Formulas are first split into connected
//! components by shared atoms: the conclusion only interacts with its own
//! component, and any all-premise component that is itself unsatisfiable
//! yields entailment by explosion.

use std::collections::{BTreeSet, HashMap};

use crate::schemes::classical_sat;
use crate::set::TruthSet;
use crate::syntax::{eval_closed_term, instantiate, Formula, SentencePool};

/// Which consequence relation to use.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConsequenceMode {
    Finitary,
    Validity,
}

impl ConsequenceMode {
    pub fn name(self) -> &'static str {
        match self {
            ConsequenceMode::Finitary => "finitary",
            ConsequenceMode::Validity => "validity",
        }
    }
}

impl std::str::FromStr for ConsequenceMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "finitary" => Ok(ConsequenceMode::Finitary),
            "validity" => Ok(ConsequenceMode::Validity),
            other => Err(format!("unknown consequence mode `{other}`")),
        }
    }
}

// ---------------------------------------------------------------------------
// Propositional skeletons
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum AtomKey {
    Tr(u32),
    Opaque(Formula),
}

#[derive(Clone, Debug)]
enum Prop {
    Const(bool),
    Atom(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
}

impl Prop {
    fn not(p: Prop) -> Prop {
        match p {
            Prop::Const(b) => Prop::Const(!b),
            other => Prop::Not(Box::new(other)),
        }
    }

    fn and(a: Prop, b: Prop) -> Prop {
        match (a, b) {
            (Prop::Const(false), _) | (_, Prop::Const(false)) => Prop::Const(false),
            (Prop::Const(true), x) | (x, Prop::Const(true)) => x,
            (a, b) => Prop::And(Box::new(a), Box::new(b)),
        }
    }

    fn or(a: Prop, b: Prop) -> Prop {
        match (a, b) {
            (Prop::Const(true), _) | (_, Prop::Const(true)) => Prop::Const(true),
            (Prop::Const(false), x) | (x, Prop::Const(false)) => x,
            (a, b) => Prop::Or(Box::new(a), Box::new(b)),
        }
    }

    fn eval(&self, assignment: u64) -> bool {
        match self {
            Prop::Const(b) => *b,
            Prop::Atom(i) => assignment >> i & 1 == 1,
            Prop::Not(p) => !p.eval(assignment),
            Prop::And(a, b) => a.eval(assignment) && b.eval(assignment),
            Prop::Or(a, b) => a.eval(assignment) || b.eval(assignment),
        }
    }

    fn atoms_into(&self, out: &mut BTreeSet<usize>) {
        match self {
            Prop::Const(_) => {}
            Prop::Atom(i) => {
                out.insert(*i);
            }
            Prop::Not(p) => p.atoms_into(out),
            Prop::And(a, b) | Prop::Or(a, b) => {
                a.atoms_into(out);
                b.atoms_into(out);
            }
        }
    }

    /// Rewrite atoms through a mapping (used to compact a component's atom
    /// space before refutation).
    fn remap(&self, map: &HashMap<usize, usize>) -> Prop {
        match self {
            Prop::Const(b) => Prop::Const(*b),
            Prop::Atom(i) => Prop::Atom(map[i]),
            Prop::Not(p) => Prop::Not(Box::new(p.remap(map))),
            Prop::And(a, b) => Prop::And(Box::new(a.remap(map)), Box::new(b.remap(map))),
            Prop::Or(a, b) => Prop::Or(Box::new(a.remap(map)), Box::new(b.remap(map))),
        }
    }
}

struct Skeletonizer<'p> {
    pool: &'p SentencePool,
    atoms: Vec<AtomKey>,
    index: HashMap<AtomKey, usize>,
    bridges: Vec<Prop>,
    expanded: Vec<bool>,
}

impl<'p> Skeletonizer<'p> {
    fn new(pool: &'p SentencePool) -> Skeletonizer<'p> {
        Skeletonizer {
            pool,
            atoms: Vec::new(),
            index: HashMap::new(),
            bridges: Vec::new(),
            expanded: Vec::new(),
        }
    }

    fn intern(&mut self, key: AtomKey) -> usize {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.atoms.len();
        self.atoms.push(key.clone());
        self.index.insert(key, i);
        self.expanded.push(false);
        i
    }

    fn skel(&mut self, f: &Formula) -> Prop {
        if !f.contains_tr() {
            // Truth-free material is decided outright by the base model;
            // true statements of the base sort are free premises.
            let empty = self.pool.empty_set();
            return Prop::Const(classical_sat(self.pool, &empty, f));
        }
        match f {
            Formula::TrAtom(t) => {
                let v = eval_closed_term(t, self.pool.domain_size)
                    .expect("closed formula in consequence");
                Prop::Atom(self.intern(AtomKey::Tr(v)))
            }
            Formula::Not(inner) => Prop::not(self.skel(inner)),
            Formula::And(a, b) => {
                let a = self.skel(a);
                let b = self.skel(b);
                Prop::and(a, b)
            }
            Formula::Or(a, b) => {
                let a = self.skel(a);
                let b = self.skel(b);
                Prop::or(a, b)
            }
            Formula::ForAll(..) | Formula::Exists(..) => {
                let atom = self.intern(AtomKey::Opaque(f.clone()));
                self.expand_bridges(atom, f);
                Prop::Atom(atom)
            }
            Formula::ArithAtom(..) | Formula::SentAtom(_) => {
                unreachable!("truth-free atoms were folded to constants")
            }
        }
    }

    fn expand_bridges(&mut self, atom: usize, f: &Formula) {
        if self.expanded[atom] {
            return;
        }
        self.expanded[atom] = true;
        let n = self.pool.domain_size;
        match f {
            Formula::ForAll(v, body) => {
                for d in 0..n {
                    let inst = instantiate(body, v, d, n);
                    let s = self.skel(&inst);
                    // universal → instance
                    self.bridges.push(Prop::or(Prop::not(Prop::Atom(atom)), s));
                }
            }
            Formula::Exists(v, body) => {
                for d in 0..n {
                    let inst = instantiate(body, v, d, n);
                    let s = self.skel(&inst);
                    // instance → existential
                    self.bridges.push(Prop::or(Prop::not(s), Prop::Atom(atom)));
                }
            }
            _ => unreachable!(),
        }
    }
}

// ---------------------------------------------------------------------------
// Refutation: truth table, then DPLL over a Tseitin translation
// ---------------------------------------------------------------------------

const TABLE_LIMIT: usize = 20;

/// Satisfiability of a conjunction of props over `n_atoms` atoms.
fn satisfiable(props: &[Prop], n_atoms: usize) -> bool {
    if props.iter().any(|p| matches!(p, Prop::Const(false))) {
        return false;
    }
    let live: Vec<&Prop> = props
        .iter()
        .filter(|p| !matches!(p, Prop::Const(true)))
        .collect();
    if live.is_empty() {
        return true;
    }
    if n_atoms <= TABLE_LIMIT {
        for assignment in 0u64..(1u64 << n_atoms) {
            if live.iter().all(|p| p.eval(assignment)) {
                return true;
            }
        }
        false
    } else {
        let mut cnf = Tseitin::new(n_atoms);
        for p in live {
            let lit = cnf.translate(p);
            cnf.clauses.push(vec![lit]);
        }
        dpll(cnf.clauses, cnf.n_vars)
    }
}

struct Tseitin {
    n_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl Tseitin {
    fn new(n_atoms: usize) -> Tseitin {
        Tseitin {
            n_vars: n_atoms,
            clauses: Vec::new(),
        }
    }

    fn fresh(&mut self) -> i32 {
        self.n_vars += 1;
        self.n_vars as i32
    }

    /// Return a literal equisatisfiably representing `p` (1-based DIMACS-ish).
    fn translate(&mut self, p: &Prop) -> i32 {
        match p {
            Prop::Const(b) => {
                let v = self.fresh();
                self.clauses.push(vec![if *b { v } else { -v }]);
                v
            }
            Prop::Atom(i) => (*i as i32) + 1,
            Prop::Not(inner) => -self.translate(inner),
            Prop::And(a, b) => {
                let la = self.translate(a);
                let lb = self.translate(b);
                let v = self.fresh();
                self.clauses.push(vec![-v, la]);
                self.clauses.push(vec![-v, lb]);
                self.clauses.push(vec![v, -la, -lb]);
                v
            }
            Prop::Or(a, b) => {
                let la = self.translate(a);
                let lb = self.translate(b);
                let v = self.fresh();
                self.clauses.push(vec![-v, la, lb]);
                self.clauses.push(vec![v, -la]);
                self.clauses.push(vec![v, -lb]);
                v
            }
        }
    }
}

/// Plain DPLL with unit propagation. Assignments: 0 unset, 1 true, 2 false.
fn dpll(clauses: Vec<Vec<i32>>, n_vars: usize) -> bool {
    fn solve(clauses: &[Vec<i32>], assign: &mut Vec<u8>) -> bool {
        // Unit propagation to a fixed point.
        let mut trail: Vec<usize> = Vec::new();
        loop {
            let mut unit: Option<i32> = None;
            for clause in clauses {
                let mut unassigned = None;
                let mut n_unassigned = 0;
                let mut satisfied = false;
                for &lit in clause {
                    let var = lit.unsigned_abs() as usize;
                    match assign[var] {
                        0 => {
                            n_unassigned += 1;
                            unassigned = Some(lit);
                        }
                        1 if lit > 0 => satisfied = true,
                        2 if lit < 0 => satisfied = true,
                        _ => {}
                    }
                    if satisfied {
                        break;
                    }
                }
                if satisfied {
                    continue;
                }
                match n_unassigned {
                    0 => {
                        // conflict: undo trail
                        for &v in &trail {
                            assign[v] = 0;
                        }
                        return false;
                    }
                    1 => {
                        unit = unassigned;
                        break;
                    }
                    _ => {}
                }
            }
            match unit {
                Some(lit) => {
                    let var = lit.unsigned_abs() as usize;
                    assign[var] = if lit > 0 { 1 } else { 2 };
                    trail.push(var);
                }
                None => break,
            }
        }
        // Pick a branching variable.
        let var = match assign.iter().skip(1).position(|&a| a == 0) {
            Some(i) => i + 1,
            None => return true, // everything assigned, no conflict
        };
        for value in [1u8, 2u8] {
            assign[var] = value;
            if solve(clauses, assign) {
                return true;
            }
            assign[var] = 0;
        }
        for &v in &trail {
            assign[v] = 0;
        }
        false
    }
    let mut assign = vec![0u8; n_vars + 1];
    solve(&clauses, &mut assign)
}

// ---------------------------------------------------------------------------
// The engine
// ---------------------------------------------------------------------------

/// Consequence checking over one pool in one mode.
pub struct ConsequenceEngine<'p> {
    pool: &'p SentencePool,
    pub mode: ConsequenceMode,
}

impl<'p> ConsequenceEngine<'p> {
    pub fn new(pool: &'p SentencePool, mode: ConsequenceMode) -> ConsequenceEngine<'p> {
        ConsequenceEngine { pool, mode }
    }

    /// Does the conclusion follow from the premises?
    pub fn entails(&self, premises: &[&Formula], conclusion: &Formula) -> bool {
        match self.mode {
            ConsequenceMode::Finitary => self.entails_finitary(premises, conclusion),
            ConsequenceMode::Validity => self.entails_validity(premises, conclusion),
        }
    }

    /// `{w} ⊢ φ` — the single-witness implication used by the
    /// witness-quantifying jumps.
    pub fn provable_implication(&self, w: &Formula, phi: &Formula) -> bool {
        self.entails(&[w], phi)
    }

    fn entails_finitary(&self, premises: &[&Formula], conclusion: &Formula) -> bool {
        let mut sk = Skeletonizer::new(self.pool);
        let mut hyps: Vec<Prop> = premises.iter().map(|p| sk.skel(p)).collect();
        let concl = sk.skel(conclusion);
        hyps.append(&mut sk.bridges);

        // Constant fast paths.
        if hyps.iter().any(|p| matches!(p, Prop::Const(false))) {
            return true; // explosion
        }
        if matches!(concl, Prop::Const(true)) {
            return true;
        }

        // Union-find over atoms to split hypotheses into independent
        // components.
        let n_atoms = sk.atoms.len();
        let mut uf: Vec<usize> = (0..n_atoms).collect();
        fn find(uf: &mut Vec<usize>, i: usize) -> usize {
            if uf[i] != i {
                let r = find(uf, uf[i]);
                uf[i] = r;
            }
            uf[i]
        }
        let mut hyp_atoms: Vec<BTreeSet<usize>> = Vec::with_capacity(hyps.len());
        for h in &hyps {
            let mut s = BTreeSet::new();
            h.atoms_into(&mut s);
            let mut it = s.iter();
            if let Some(&first) = it.next() {
                for &a in it {
                    let (ra, rf) = (find(&mut uf, a), find(&mut uf, first));
                    uf[ra] = rf;
                }
            }
            hyp_atoms.push(s);
        }
        let mut concl_atoms = BTreeSet::new();
        concl.atoms_into(&mut concl_atoms);
        let concl_roots: BTreeSet<usize> = concl_atoms
            .iter()
            .map(|&a| find(&mut uf, a))
            .collect();

        // Conclusion component: hypotheses sharing a class with the
        // conclusion, together with the negated conclusion.
        let mut main: Vec<Prop> = vec![Prop::not(concl.clone())];
        let mut rest: HashMap<usize, Vec<Prop>> = HashMap::new();
        for (h, atoms) in hyps.iter().zip(&hyp_atoms) {
            match atoms.iter().next() {
                None => {
                    // Constant true hypothesis (false handled above): drop.
                }
                Some(&a) => {
                    let root = find(&mut uf, a);
                    if concl_roots.contains(&root) {
                        main.push(h.clone());
                    } else {
                        rest.entry(root).or_default().push(h.clone());
                    }
                }
            }
        }

        if !component_satisfiable(&main) {
            return true;
        }
        // Explosion through an unsatisfiable premise-only component.
        rest.values().any(|props| !component_satisfiable(props))
    }

    fn entails_validity(&self, premises: &[&Formula], conclusion: &Formula) -> bool {
        let pool = self.pool;
        let mut codes: BTreeSet<u32> = BTreeSet::new();
        for f in premises.iter().copied().chain(std::iter::once(conclusion)) {
            collect_tr_codes(pool, f, &mut codes);
        }
        let atoms: Vec<usize> = codes
            .iter()
            .filter_map(|&c| pool.stmt_of_code(c))
            .collect();
        assert!(
            atoms.len() <= 22,
            "validity check over {} truth atoms is out of scale",
            atoms.len()
        );
        for mask in 0u64..(1u64 << atoms.len()) {
            let mut x = pool.empty_set();
            for (bit, &idx) in atoms.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    x.insert(idx);
                }
            }
            if premises.iter().all(|p| classical_sat(pool, &x, p))
                && !classical_sat(pool, &x, conclusion)
            {
                return false;
            }
        }
        true
    }
}

fn component_satisfiable(props: &[Prop]) -> bool {
    // Compact the atom space before refutation.
    let mut atoms = BTreeSet::new();
    for p in props {
        p.atoms_into(&mut atoms);
    }
    let map: HashMap<usize, usize> = atoms
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let remapped: Vec<Prop> = props.iter().map(|p| p.remap(&map)).collect();
    satisfiable(&remapped, atoms.len())
}

/// All values a truth atom takes in `f` across every environment.
fn collect_tr_codes(pool: &SentencePool, f: &Formula, out: &mut BTreeSet<u32>) {
    fn go<'f>(
        pool: &SentencePool,
        f: &'f Formula,
        env: &mut Vec<(&'f str, u32)>,
        out: &mut BTreeSet<u32>,
    ) {
        match f {
            Formula::TrAtom(t) => {
                out.insert(eval_with_env(t, env, pool.domain_size));
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
    fn eval_with_env(t: &crate::syntax::Term, env: &[(&str, u32)], n: u32) -> u32 {
        use crate::syntax::Term;
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
            Term::Succ(inner) => (eval_with_env(inner, env, n) + 1).min(max),
            Term::Plus(a, b) => {
                (eval_with_env(a, env, n) + eval_with_env(b, env, n)).min(max)
            }
        }
    }
    go(pool, f, &mut Vec::new(), out)
}

// ---------------------------------------------------------------------------
// Precomputed implication tables
// ---------------------------------------------------------------------------

/// Implication matrices for one pool and mode. Statements are a prefix of
/// the witness list, so statement-to-statement implications embed in the
/// witness-to-statement matrix.
pub struct ImplicationTables {
    /// `impliers[s]`: the set of witness indices `w` with `{w} ⊢ statement s`.
    pub impliers: Vec<TruthSet>,
    /// `stmt_imp[x]`: the set of statement indices `y` with `{x} ⊢ y`.
    pub stmt_imp: Vec<TruthSet>,
}

/// Build both matrices by one pass over witnesses × statements.
pub fn implication_tables(pool: &SentencePool, mode: ConsequenceMode) -> ImplicationTables {
    let eng = ConsequenceEngine::new(pool, mode);
    let ns = pool.n_statements();
    let nw = pool.witnesses.len();
    let mut impliers = vec![TruthSet::empty(nw); ns];
    for (wi, w) in pool.witnesses.iter().enumerate() {
        for si in 0..ns {
            if eng.provable_implication(w, &pool.statements[si]) {
                impliers[si].insert(wi);
            }
        }
    }
    let mut stmt_imp = vec![TruthSet::empty(ns); ns];
    for (si, row) in impliers.iter().enumerate() {
        for x in 0..ns {
            if row.contains(x) {
                stmt_imp[x].insert(si);
            }
        }
    }
    ImplicationTables { impliers, stmt_imp }
}
