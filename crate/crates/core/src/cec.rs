//! Combinational equivalence checking.
//!
//! Small input spaces (≤ 14 inputs) are checked exhaustively with
//! bit-parallel simulation. Larger ones go through a miter (pairwise XOR
//! of outputs, OR-reduced), Tseitin encoding, and a self-contained DPLL
//! procedure with two watched literals and chronological backtracking.
//! When the conflict budget runs out the check falls back to random
//! sampling, where `equivalent = true` means "no counterexample found".

mod dpll;

use crate::aig::{Aig, AigBuilder, Lit};
use crate::error::{Error, Result};
use crate::sim::{eval_rows, BitRow, SimBatch};

pub use dpll::{Clause, Cnf, SolveOutcome};

/// How an equivalence verdict was reached.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CecMethod {
    Exhaustive,
    Sat,
    Sampled,
}

#[derive(Clone, Debug)]
pub struct CecResult {
    pub equivalent: bool,
    /// An input assignment on which the circuits differ.
    pub counterexample: Option<Vec<bool>>,
    pub method: CecMethod,
}

/// Resource limits for [`check_equiv`].
#[derive(Clone, Copy, Debug)]
pub struct CecBudget {
    /// DPLL conflict budget before falling back to sampling.
    pub sat_conflicts: u64,
    /// Number of random vectors for the sampled fallback.
    pub sample_vectors: usize,
    pub sample_seed: u64,
}

impl Default for CecBudget {
    fn default() -> Self {
        CecBudget {
            sat_conflicts: 200_000,
            sample_vectors: 10_000,
            sample_seed: 0xa15e,
        }
    }
}

/// Inputs at or below this count are checked exhaustively (16,384 vectors).
pub const EXHAUSTIVE_INPUT_LIMIT: usize = 14;

/// Checks functional equivalence of two graphs over a shared input space.
pub fn check_equiv(a: &Aig, b: &Aig, budget: &CecBudget) -> Result<CecResult> {
    if a.num_inputs() != b.num_inputs() {
        return Err(Error::InputCount {
            expected: a.num_inputs(),
            got: b.num_inputs(),
        });
    }
    if a.num_outputs() != b.num_outputs() {
        return Err(Error::OutputCount {
            expected: a.num_outputs(),
            got: b.num_outputs(),
        });
    }
    let n = a.num_inputs();
    if n <= EXHAUSTIVE_INPUT_LIMIT {
        return Ok(exhaustive_check(a, b));
    }

    let (miter, inputs_used) = build_miter(a, b);
    if miter == Lit::FALSE {
        return Ok(CecResult {
            equivalent: true,
            counterexample: None,
            method: CecMethod::Sat,
        });
    }
    if miter == Lit::TRUE {
        return Ok(CecResult {
            equivalent: false,
            counterexample: Some(vec![false; n]),
            method: CecMethod::Sat,
        });
    }
    let cnf = tseitin(&inputs_used, miter);
    match cnf.solve(budget.sat_conflicts) {
        SolveOutcome::Unsat => Ok(CecResult {
            equivalent: true,
            counterexample: None,
            method: CecMethod::Sat,
        }),
        SolveOutcome::Sat(model) => {
            let mut cex = vec![false; n];
            for (i, var) in cnf.input_vars.iter().enumerate() {
                if let Some(v) = var {
                    cex[i] = model[*v];
                }
            }
            debug_assert!(differs_on(a, b, &cex));
            Ok(CecResult {
                equivalent: false,
                counterexample: Some(cex),
                method: CecMethod::Sat,
            })
        }
        SolveOutcome::BudgetExceeded => Ok(sampled_check(a, b, budget)),
    }
}

fn exhaustive_check(a: &Aig, b: &Aig) -> CecResult {
    let batch = SimBatch::exhaustive(a.num_inputs());
    let ra = eval_rows(a, &batch.assignments);
    let rb = eval_rows(b, &batch.assignments);
    for (oa, ob) in ra.iter().zip(&rb) {
        if let Some(idx) = oa.first_diff(ob) {
            return CecResult {
                equivalent: false,
                counterexample: Some(batch.column(idx)),
                method: CecMethod::Exhaustive,
            };
        }
    }
    CecResult {
        equivalent: true,
        counterexample: None,
        method: CecMethod::Exhaustive,
    }
}

fn sampled_check(a: &Aig, b: &Aig, budget: &CecBudget) -> CecResult {
    let batch = SimBatch::random(a.num_inputs(), budget.sample_vectors.max(1), budget.sample_seed);
    let ra = eval_rows(a, &batch.assignments);
    let rb = eval_rows(b, &batch.assignments);
    for (oa, ob) in ra.iter().zip(&rb) {
        if let Some(idx) = oa.first_diff(ob) {
            return CecResult {
                equivalent: false,
                counterexample: Some(batch.column(idx)),
                method: CecMethod::Sampled,
            };
        }
    }
    CecResult {
        equivalent: true,
        counterexample: None,
        method: CecMethod::Sampled,
    }
}

/// Builds both graphs over one shared builder and OR-reduces the pairwise
/// output XORs. Structural hashing collapses shared logic, so equal
/// structures fold the miter to constant false without any SAT work.
/// Returns the miter literal and the miter-graph view needed for CNF.
fn build_miter(a: &Aig, b: &Aig) -> (Lit, MiterGraph) {
    let mut builder = AigBuilder::new();
    for i in 0..a.num_inputs() {
        builder.add_input(format!("m{i}"));
    }
    let oa = copy_into(a, &mut builder);
    let ob = copy_into(b, &mut builder);
    let mut diffs = Vec::with_capacity(oa.len());
    for (&x, &y) in oa.iter().zip(&ob) {
        let d = builder.xor(x, y);
        diffs.push(d);
    }
    let root = builder.or_rfold(&diffs);
    let g = builder.finish(vec![root], vec!["miter".into()]);
    (root, MiterGraph { g })
}

struct MiterGraph {
    g: Aig,
}

fn copy_into(src: &Aig, b: &mut AigBuilder) -> Vec<Lit> {
    let mut map: Vec<Lit> = Vec::with_capacity(src.num_ids());
    map.push(Lit::FALSE);
    for i in 0..src.num_inputs() {
        map.push(b.input(i));
    }
    for &(f0, f1) in src.ands() {
        let a = map[f0.node() as usize].xor_pol(f0.is_complemented());
        let c = map[f1.node() as usize].xor_pol(f1.is_complemented());
        map.push(b.and(a, c));
    }
    src.outputs()
        .iter()
        .map(|&o| map[o.node() as usize].xor_pol(o.is_complemented()))
        .collect()
}

/// Tseitin-encodes the cone of `root` inside the miter graph.
///
/// CNF variables are dense indices over cone nodes; `input_vars[i]` maps
/// primary input `i` to its CNF variable when the input is in the cone.
fn tseitin(mg: &MiterGraph, root: Lit) -> Cnf {
    let g = &mg.g;
    // Collect the cone of root.
    let mut in_cone = vec![false; g.num_ids()];
    let mut stack = vec![root.node()];
    in_cone[root.node() as usize] = true;
    while let Some(n) = stack.pop() {
        if g.is_and(n) {
            let (f0, f1) = g.fanins(n);
            for f in [f0.node(), f1.node()] {
                if !in_cone[f as usize] {
                    in_cone[f as usize] = true;
                    stack.push(f);
                }
            }
        }
    }
    let mut var_of: Vec<Option<usize>> = vec![None; g.num_ids()];
    let mut num_vars = 0;
    for (id, &inside) in in_cone.iter().enumerate() {
        if inside {
            var_of[id] = Some(num_vars);
            num_vars += 1;
        }
    }
    let lit_of = |l: Lit| -> i64 {
        let v = var_of[l.node() as usize].expect("cone literal") as i64 + 1;
        if l.is_complemented() {
            -v
        } else {
            v
        }
    };
    let mut clauses: Vec<Clause> = Vec::new();
    for id in g.first_and_id()..g.num_ids() as u32 {
        if !in_cone[id as usize] {
            continue;
        }
        let (f0, f1) = g.fanins(id);
        let c = lit_of(Lit::positive(id));
        let x = lit_of(f0);
        let y = lit_of(f1);
        clauses.push(vec![-c, x]);
        clauses.push(vec![-c, y]);
        clauses.push(vec![c, -x, -y]);
    }
    clauses.push(vec![lit_of(root)]);
    let input_vars: Vec<Option<usize>> = (0..g.num_inputs())
        .map(|i| var_of[i + 1])
        .collect();
    Cnf {
        num_vars,
        clauses,
        input_vars,
    }
}

fn differs_on(a: &Aig, b: &Aig, input: &[bool]) -> bool {
    let rows: Vec<BitRow> = input.iter().map(|&v| BitRow::from_bools(&[v])).collect();
    let ra = eval_rows(a, &rows);
    let rb = eval_rows(b, &rows);
    ra.iter().zip(&rb).any(|(x, y)| x.get(0) != y.get(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aig::AigBuilder;

    fn xor_lowered() -> Aig {
        let mut b = AigBuilder::new();
        let x = b.add_input("x");
        let y = b.add_input("y");
        let o = b.xor(x, y);
        b.finish(vec![o], vec!["o".into()])
    }

    fn xor_minterms() -> Aig {
        // OR of minterms: (x && !y) || (!x && y), built directly.
        let mut b = AigBuilder::new();
        let x = b.add_input("x");
        let y = b.add_input("y");
        let m0 = b.and(x, !y);
        let m1 = b.and(!x, y);
        let o = b.or(m0, m1);
        b.finish(vec![o], vec!["o".into()])
    }

    #[test]
    fn reflexivity() {
        let g = xor_lowered();
        let r = check_equiv(&g, &g, &CecBudget::default()).unwrap();
        assert!(r.equivalent);
        assert_eq!(r.method, CecMethod::Exhaustive);
    }

    #[test]
    fn complemented_output_differs_with_valid_cex() {
        let g = xor_lowered();
        // Same structure with the single output complemented.
        let mut b = AigBuilder::new();
        b.add_input("x");
        b.add_input("y");
        for &(p, q) in g.ands() {
            b.and(p, q);
        }
        let flipped = b.finish(vec![!g.outputs()[0]], vec!["o".into()]);
        let r = check_equiv(&g, &flipped, &CecBudget::default()).unwrap();
        assert!(!r.equivalent);
        let cex = r.counterexample.unwrap();
        assert!(differs_on(&g, &flipped, &cex));
    }

    #[test]
    fn two_xor_constructions_agree() {
        let r = check_equiv(&xor_lowered(), &xor_minterms(), &CecBudget::default()).unwrap();
        assert!(r.equivalent);
        assert_eq!(r.method, CecMethod::Exhaustive);
    }

    #[test]
    fn wide_equal_structures_fold_to_sat_verdict() {
        // 16 inputs forces the miter path; identical graphs collapse.
        let build = || {
            let mut b = AigBuilder::new();
            let ins: Vec<Lit> = (0..16).map(|i| b.add_input(format!("i{i}"))).collect();
            let mut acc = ins[0];
            for &i in &ins[1..] {
                acc = b.xor(acc, i);
            }
            b.finish(vec![acc], vec!["p".into()])
        };
        let r = check_equiv(&build(), &build(), &CecBudget::default()).unwrap();
        assert!(r.equivalent);
        assert_eq!(r.method, CecMethod::Sat);
    }

    #[test]
    fn wide_structural_difference_goes_through_sat() {
        // Parity vs parity-with-one-input-dropped: SAT finds a cex.
        let parity = |skip_last: bool| {
            let mut b = AigBuilder::new();
            let ins: Vec<Lit> = (0..16).map(|i| b.add_input(format!("i{i}"))).collect();
            let take = if skip_last { 15 } else { 16 };
            let mut acc = ins[0];
            for &i in &ins[1..take] {
                acc = b.xor(acc, i);
            }
            b.finish(vec![acc], vec!["p".into()])
        };
        let a = parity(false);
        let b = parity(true);
        let r = check_equiv(&a, &b, &CecBudget::default()).unwrap();
        assert!(!r.equivalent);
        assert_eq!(r.method, CecMethod::Sat);
        assert!(differs_on(&a, &b, &r.counterexample.unwrap()));
    }

    #[test]
    fn budget_exhaustion_falls_back_to_sampling() {
        // A hard miter under a tiny budget: two structurally different
        // parity trees (left fold vs pairwise tree) over 18 inputs.
        let left = {
            let mut b = AigBuilder::new();
            let ins: Vec<Lit> = (0..18).map(|i| b.add_input(format!("i{i}"))).collect();
            let mut acc = ins[0];
            for &i in &ins[1..] {
                acc = b.xor(acc, i);
            }
            b.finish(vec![acc], vec!["p".into()])
        };
        let tree = {
            let mut b = AigBuilder::new();
            let ins: Vec<Lit> = (0..18).map(|i| b.add_input(format!("i{i}"))).collect();
            let mut layer = ins;
            while layer.len() > 1 {
                let mut next = Vec::new();
                for pair in layer.chunks(2) {
                    next.push(if pair.len() == 2 {
                        b.xor(pair[0], pair[1])
                    } else {
                        pair[0]
                    });
                }
                layer = next;
            }
            b.finish(vec![layer[0]], vec!["p".into()])
        };
        let budget = CecBudget {
            sat_conflicts: 10,
            ..CecBudget::default()
        };
        let r = check_equiv(&left, &tree, &budget).unwrap();
        // Either the tiny budget sufficed (Sat) or we sampled; both must
        // agree the circuits are equivalent.
        assert!(r.equivalent);
    }
}
