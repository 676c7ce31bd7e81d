//! Bit-parallel simulation.
//!
//! A [`SimBatch`] carries one bit-row per primary input; [`simulate`]
//! evaluates the graph topologically, 64 vectors per machine word.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::aig::Aig;
use crate::error::{Error, Result};

/// A packed row of simulation bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRow {
    width: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(width: usize) -> BitRow {
        BitRow {
            width,
            words: vec![0; width.div_ceil(64)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> BitRow {
        let mut row = BitRow::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                row.words[i / 64] |= 1 << (i % 64);
            }
        }
        row
    }

    pub fn random(width: usize, rng: &mut ChaCha8Rng) -> BitRow {
        let mut row = BitRow::zeros(width);
        for w in &mut row.words {
            *w = rng.next_u64();
        }
        row.mask_tail();
        row
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.width);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the first bit where the two rows differ.
    pub fn first_diff(&self, other: &BitRow) -> Option<usize> {
        debug_assert_eq!(self.width, other.width);
        for (i, (a, b)) in self.words.iter().zip(&other.words).enumerate() {
            let x = a ^ b;
            if x != 0 {
                return Some(i * 64 + x.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn count_diff(&self, other: &BitRow) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    fn mask_tail(&mut self) {
        let tail = self.width % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }
}

/// A batch of parallel input vectors plus, after simulation, the output rows.
#[derive(Clone, Debug)]
pub struct SimBatch {
    width: usize,
    pub assignments: Vec<BitRow>,
    pub results: Vec<BitRow>,
}

impl SimBatch {
    pub fn new(assignments: Vec<BitRow>) -> SimBatch {
        let width = assignments.first().map_or(0, |r| r.width());
        debug_assert!(assignments.iter().all(|r| r.width() == width));
        SimBatch {
            width,
            assignments,
            results: Vec::new(),
        }
    }

    /// Seeded uniform random batch with one row per input.
    pub fn random(num_inputs: usize, width: usize, seed: u64) -> SimBatch {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SimBatch::new((0..num_inputs).map(|_| BitRow::random(width, &mut rng)).collect())
    }

    /// All `2^num_inputs` patterns; input `i` toggles with period `2^i`.
    pub fn exhaustive(num_inputs: usize) -> SimBatch {
        assert!(num_inputs <= 20, "exhaustive batch too wide");
        let width = 1usize << num_inputs;
        let mut rows = Vec::with_capacity(num_inputs);
        for i in 0..num_inputs {
            let mut row = BitRow::zeros(width);
            for v in 0..width {
                if v >> i & 1 == 1 {
                    row.words[v / 64] |= 1 << (v % 64);
                }
            }
            rows.push(row);
        }
        SimBatch::new(rows)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// The input assignment at column `i`, as a plain bool vector.
    pub fn column(&self, i: usize) -> Vec<bool> {
        self.assignments.iter().map(|r| r.get(i)).collect()
    }
}

/// Evaluates the graph on every column of the batch and returns the batch
/// with `results` filled in (one row per output).
pub fn simulate(g: &Aig, batch: &SimBatch) -> Result<SimBatch> {
    if batch.assignments.len() != g.num_inputs() {
        return Err(Error::InputCount {
            expected: g.num_inputs(),
            got: batch.assignments.len(),
        });
    }
    let rows = eval_rows(g, &batch.assignments);
    Ok(SimBatch {
        width: batch.width,
        assignments: batch.assignments.clone(),
        results: rows,
    })
}

/// Core evaluation: one word-row per node, complement applied per edge.
pub(crate) fn eval_rows(g: &Aig, inputs: &[BitRow]) -> Vec<BitRow> {
    let width = inputs.first().map_or(0, |r| r.width());
    let words = width.div_ceil(64);
    let mut vals: Vec<Vec<u64>> = Vec::with_capacity(g.num_ids());
    vals.push(vec![0; words]);
    for row in inputs {
        vals.push(row.words.clone());
    }
    let first = g.first_and_id() as usize;
    for (i, &(a, b)) in g.ands().iter().enumerate() {
        let mut out = Vec::with_capacity(words);
        let (ra, rb) = (&vals[a.node() as usize], &vals[b.node() as usize]);
        let (ma, mb) = (
            if a.is_complemented() { !0u64 } else { 0 },
            if b.is_complemented() { !0u64 } else { 0 },
        );
        for w in 0..words {
            out.push((ra[w] ^ ma) & (rb[w] ^ mb));
        }
        vals.push(out);
        debug_assert_eq!(vals.len(), first + i + 1);
    }
    g.outputs()
        .iter()
        .map(|&o| {
            let src = &vals[o.node() as usize];
            let m = if o.is_complemented() { !0u64 } else { 0 };
            let mut row = BitRow {
                width,
                words: src.iter().map(|w| w ^ m).collect(),
            };
            row.mask_tail();
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aig::AigBuilder;

    fn full_adder() -> Aig {
        let mut b = AigBuilder::new();
        let a = b.add_input("a");
        let x = b.add_input("b");
        let cin = b.add_input("cin");
        let axb = b.xor(a, x);
        let sum = b.xor(axb, cin);
        let c0 = b.and(a, x);
        let c1 = b.and(axb, cin);
        let cout = b.or(c0, c1);
        b.finish(vec![sum, cout], vec!["sum".into(), "cout".into()])
    }

    #[test]
    fn constant_false_output_is_all_zero() {
        let mut b = AigBuilder::new();
        b.add_input("a");
        let g = b.finish(vec![crate::aig::Lit::FALSE], vec!["z".into()]);
        let batch = SimBatch::random(1, 777, 3);
        let out = simulate(&g, &batch).unwrap();
        assert_eq!(out.results[0].count_ones(), 0);
    }

    #[test]
    fn full_adder_truth_table() {
        let g = full_adder();
        let batch = SimBatch::exhaustive(3);
        let out = simulate(&g, &batch).unwrap();
        for v in 0..8usize {
            let (a, b, cin) = (v & 1, v >> 1 & 1, v >> 2 & 1);
            let total = a + b + cin;
            assert_eq!(out.results[0].get(v), total & 1 == 1, "sum at {v}");
            assert_eq!(out.results[1].get(v), total >= 2, "cout at {v}");
        }
    }

    #[test]
    fn simulate_is_deterministic() {
        let g = full_adder();
        let batch = SimBatch::random(3, 1000, 42);
        let r0 = simulate(&g, &batch).unwrap();
        let r1 = simulate(&g, &batch).unwrap();
        assert_eq!(r0.results, r1.results);
    }

    #[test]
    fn input_count_mismatch_is_reported() {
        let g = full_adder();
        let batch = SimBatch::random(2, 8, 0);
        assert!(matches!(
            simulate(&g, &batch),
            Err(crate::Error::InputCount { expected: 3, got: 2 })
        ));
    }
}
