//! A minimal DPLL decision procedure with two watched literals.
//!
//! Deliberately small: chronological backtracking, no clause learning, a
//! static variable order, and a conflict budget. It serves as a test
//! oracle for equivalence checking, not as a general-purpose solver.

/// DIMACS-style clause: positive/negative 1-based variable indices.
pub type Clause = Vec<i64>;

#[derive(Clone, Debug)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
    /// CNF variable of each miter primary input, when it is in the cone.
    pub input_vars: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Satisfying assignment, indexed by 0-based variable.
    Sat(Vec<bool>),
    Unsat,
    BudgetExceeded,
}

// Internal literal encoding: 2*var + sign (sign 1 = negated).
fn enc(lit: i64) -> usize {
    let var = lit.unsigned_abs() as usize - 1;
    var << 1 | (lit < 0) as usize
}

fn neg(e: usize) -> usize {
    e ^ 1
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Val {
    Unassigned,
    True,
    False,
}

struct Solver {
    // Watched literals occupy clause slots 0 and 1.
    clauses: Vec<Vec<usize>>, // encoded literals
    watches: Vec<Vec<usize>>, // watches[e] = clauses watching encoded lit e
    assign: Vec<Val>,
    trail: Vec<usize>,
    // (trail mark, decision literal, phase already flipped)
    decisions: Vec<(usize, usize, bool)>,
    prop_head: usize,
    conflicts: u64,
}

impl Cnf {
    pub fn solve(&self, conflict_budget: u64) -> SolveOutcome {
        let mut s = Solver {
            clauses: Vec::with_capacity(self.clauses.len()),
            watches: vec![Vec::new(); self.num_vars * 2],
            assign: vec![Val::Unassigned; self.num_vars],
            trail: Vec::with_capacity(self.num_vars),
            decisions: Vec::new(),
            prop_head: 0,
            conflicts: 0,
        };
        let mut units: Vec<usize> = Vec::new();
        for c in &self.clauses {
            if c.is_empty() {
                return SolveOutcome::Unsat;
            }
            let mut lits: Vec<usize> = c.iter().map(|&l| enc(l)).collect();
            lits.sort_unstable();
            lits.dedup();
            // Tautologies (x with !x) are vacuous.
            if lits.windows(2).any(|w| w[0] == neg(w[1])) {
                continue;
            }
            if lits.len() == 1 {
                units.push(lits[0]);
                continue;
            }
            let ci = s.clauses.len();
            s.watches[lits[0]].push(ci);
            s.watches[lits[1]].push(ci);
            s.clauses.push(lits);
        }
        for u in units {
            match s.value(u) {
                Val::False => return SolveOutcome::Unsat,
                Val::True => {}
                Val::Unassigned => s.push_lit(u),
            }
        }
        s.run(conflict_budget)
    }
}

impl Solver {
    fn value(&self, e: usize) -> Val {
        match self.assign[e >> 1] {
            Val::Unassigned => Val::Unassigned,
            Val::True => {
                if e & 1 == 0 {
                    Val::True
                } else {
                    Val::False
                }
            }
            Val::False => {
                if e & 1 == 0 {
                    Val::False
                } else {
                    Val::True
                }
            }
        }
    }

    fn push_lit(&mut self, e: usize) {
        debug_assert!(matches!(self.value(e), Val::Unassigned));
        self.assign[e >> 1] = if e & 1 == 0 { Val::True } else { Val::False };
        self.trail.push(e);
    }

    /// Watched-literal unit propagation; returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.prop_head < self.trail.len() {
            let lit = self.trail[self.prop_head];
            self.prop_head += 1;
            let false_lit = neg(lit);
            let mut ws = std::mem::take(&mut self.watches[false_lit]);
            let mut i = 0;
            while i < ws.len() {
                let ci = ws[i];
                // Keep the falsified watch in slot 1.
                if self.clauses[ci][0] == false_lit {
                    self.clauses[ci].swap(0, 1);
                }
                debug_assert_eq!(self.clauses[ci][1], false_lit);
                let w0 = self.clauses[ci][0];
                if self.value(w0) == Val::True {
                    i += 1;
                    continue;
                }
                // Look for a non-false replacement beyond the watches.
                let repl = (2..self.clauses[ci].len())
                    .find(|&k| self.value(self.clauses[ci][k]) != Val::False);
                if let Some(k) = repl {
                    self.clauses[ci].swap(1, k);
                    let new_watch = self.clauses[ci][1];
                    self.watches[new_watch].push(ci);
                    ws.swap_remove(i);
                    continue;
                }
                match self.value(w0) {
                    Val::Unassigned => {
                        self.push_lit(w0);
                        i += 1;
                    }
                    Val::False => {
                        self.watches[false_lit] = ws;
                        return false;
                    }
                    Val::True => unreachable!(),
                }
            }
            self.watches[false_lit] = ws;
        }
        true
    }

    fn run(&mut self, budget: u64) -> SolveOutcome {
        let mut decide_from = 0usize;
        loop {
            if !self.propagate() {
                self.conflicts += 1;
                if self.conflicts >= budget {
                    return SolveOutcome::BudgetExceeded;
                }
                match self.backtrack() {
                    Some(var) => decide_from = var,
                    None => return SolveOutcome::Unsat,
                }
                continue;
            }
            // Static order: lowest unassigned variable, phase false first.
            // `decide_from` is a resume cursor; it only moves back on
            // backtracking, so the scan stays near-linear overall.
            while decide_from < self.assign.len()
                && self.assign[decide_from] != Val::Unassigned
            {
                decide_from += 1;
            }
            if decide_from == self.assign.len() {
                let model = self.assign.iter().map(|v| matches!(v, Val::True)).collect();
                return SolveOutcome::Sat(model);
            }
            let e = decide_from << 1 | 1; // try false first
            self.decisions.push((self.trail.len(), e, false));
            self.push_lit(e);
        }
    }

    /// Chronological backtracking: undo to the most recent decision with
    /// an untried phase, flip it. Returns the variable to resume the
    /// decision scan from, or None when the search space is exhausted.
    fn backtrack(&mut self) -> Option<usize> {
        while let Some((mark, lit, flipped)) = self.decisions.pop() {
            while self.trail.len() > mark {
                let e = self.trail.pop().unwrap();
                self.assign[e >> 1] = Val::Unassigned;
            }
            self.prop_head = self.trail.len();
            if !flipped {
                let nl = neg(lit);
                self.decisions.push((self.trail.len(), nl, true));
                self.push_lit(nl);
                return Some(nl >> 1);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(clauses: Vec<Clause>, nv: usize) -> SolveOutcome {
        Cnf {
            num_vars: nv,
            clauses,
            input_vars: Vec::new(),
        }
        .solve(100_000)
    }

    fn check_model(clauses: &[Clause], model: &[bool]) {
        for c in clauses {
            assert!(
                c.iter().any(|&l| {
                    let v = model[l.unsigned_abs() as usize - 1];
                    if l > 0 {
                        v
                    } else {
                        !v
                    }
                }),
                "clause {c:?} unsatisfied"
            );
        }
    }

    #[test]
    fn unit_and_contradiction() {
        assert!(matches!(solve(vec![vec![1]], 1), SolveOutcome::Sat(_)));
        assert_eq!(solve(vec![vec![1], vec![-1]], 1), SolveOutcome::Unsat);
        assert_eq!(solve(vec![vec![]], 1), SolveOutcome::Unsat);
    }

    #[test]
    fn tautologies_and_duplicates_are_handled() {
        let clauses = vec![vec![1, -1], vec![2, 2, 2]];
        match solve(clauses.clone(), 2) {
            SolveOutcome::Sat(m) => check_model(&clauses, &m),
            other => panic!("expected sat, got {other:?}"),
        }
    }

    #[test]
    fn small_satisfiable() {
        let clauses = vec![vec![1, 2], vec![-2, 3], vec![-1, -3], vec![2, 3]];
        match solve(clauses.clone(), 3) {
            SolveOutcome::Sat(m) => check_model(&clauses, &m),
            other => panic!("expected sat, got {other:?}"),
        }
    }

    #[test]
    fn pigeonhole_three_in_two_unsat() {
        let v = |i: usize, h: usize| (2 * i + h + 1) as i64;
        let mut clauses: Vec<Clause> = Vec::new();
        for i in 0..3 {
            clauses.push(vec![v(i, 0), v(i, 1)]);
        }
        for h in 0..2 {
            for i in 0..3 {
                for j in i + 1..3 {
                    clauses.push(vec![-v(i, h), -v(j, h)]);
                }
            }
        }
        assert_eq!(solve(clauses, 6), SolveOutcome::Unsat);
    }

    #[test]
    fn random_3sat_instances_agree_with_brute_force() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..80 {
            let nv = 8;
            let nc = rng.random_range(10..40);
            let clauses: Vec<Clause> = (0..nc)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = rng.random_range(1..=nv as i64);
                            if rng.random_bool(0.5) {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            let brute_sat = (0..1u32 << nv).any(|m| {
                clauses.iter().all(|c| {
                    c.iter().any(|&l| {
                        let bit = m >> (l.unsigned_abs() - 1) & 1 == 1;
                        if l > 0 {
                            bit
                        } else {
                            !bit
                        }
                    })
                })
            });
            match solve(clauses.clone(), nv) {
                SolveOutcome::Sat(m) => {
                    assert!(brute_sat);
                    check_model(&clauses, &m);
                }
                SolveOutcome::Unsat => assert!(!brute_sat),
                SolveOutcome::BudgetExceeded => panic!("budget too small for toy instance"),
            }
        }
    }

    #[test]
    fn budget_is_respected() {
        let v = |i: i64, h: i64| 4 * i + h + 1;
        let mut clauses: Vec<Clause> = Vec::new();
        for i in 0..5 {
            clauses.push((0..4).map(|h| v(i, h)).collect());
        }
        for h in 0..4 {
            for i in 0..5 {
                for j in i + 1..5 {
                    clauses.push(vec![-v(i, h), -v(j, h)]);
                }
            }
        }
        let out = Cnf {
            num_vars: 20,
            clauses,
            input_vars: Vec::new(),
        }
        .solve(3);
        assert_eq!(out, SolveOutcome::BudgetExceeded);
    }
}
