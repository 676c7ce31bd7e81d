//! Seeded random combinational circuits for the desk-scale benchmark tier.
//!
//! The generator mixes AND/OR/XOR/MUX structures with occasional
//! re-associated duplicates so that every synthesis transformation has
//! something to chew on. Outputs are biased toward otherwise-unused wires,
//! which keeps most of the generated logic live.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::aig::{compact, Aig, AigBuilder, Lit};

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub num_inputs: usize,
    pub num_outputs: usize,
    /// Approximate AND-node count of the result.
    pub target_nodes: usize,
}

impl GenConfig {
    pub fn new(num_inputs: usize, num_outputs: usize, target_nodes: usize) -> GenConfig {
        GenConfig {
            num_inputs,
            num_outputs,
            target_nodes,
        }
    }
}

/// Generates a random DAG circuit; identical `(cfg, seed)` pairs produce
/// bit-identical graphs.
pub fn random_aig(cfg: &GenConfig, seed: u64) -> Aig {
    assert!(cfg.num_inputs >= 2 && cfg.num_outputs >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = AigBuilder::new();
    let inputs: Vec<Lit> = (0..cfg.num_inputs)
        .map(|i| b.add_input(format!("x{i}")))
        .collect();
    let mut pool: Vec<Lit> = inputs.clone();
    let mut used = vec![false; cfg.num_inputs + 1];

    let pick = |pool: &[Lit], used: &mut Vec<bool>, rng: &mut ChaCha8Rng| -> Lit {
        let l = *pool.choose(rng).unwrap();
        used[l.node() as usize] = true;
        l.xor_pol(rng.random_bool(0.3))
    };

    while b.node_count() < cfg.target_nodes {
        let op = rng.random_range(0..100);
        let a = pick(&pool, &mut used, &mut rng);
        let c = pick(&pool, &mut used, &mut rng);
        let lit = if op < 40 {
            b.and(a, c)
        } else if op < 65 {
            b.or(a, c)
        } else if op < 80 {
            b.xor(a, c)
        } else if op < 92 {
            let s = pick(&pool, &mut used, &mut rng);
            b.mux(s, a, c)
        } else {
            // A deliberately re-associated chain: AND(a, AND(c, d)) next
            // to AND(AND(a, c), d), leaving structural redundancy behind.
            let d = pick(&pool, &mut used, &mut rng);
            let t0 = b.and(c, d);
            let left = b.and(a, t0);
            let t1 = b.and(a, c);
            let right = b.and(t1, d);
            let both = b.or(left, right);
            both
        };
        if !lit.is_constant() {
            pool.push(lit);
            while used.len() < lit.node() as usize + 1 {
                used.push(false);
            }
        }
    }

    // Outputs: fold every unused wire into some output group so the
    // generated logic stays live through compaction.
    let unused: Vec<Lit> = pool
        .iter()
        .copied()
        .filter(|l| !l.is_constant() && !(*used.get(l.node() as usize).unwrap_or(&true)))
        .collect();
    let mut outs: Vec<Lit> = Vec::new();
    if unused.len() >= cfg.num_outputs {
        let per = unused.len().div_ceil(cfg.num_outputs);
        for group in unused.chunks(per) {
            outs.push(b.or_rfold(group));
        }
    } else {
        outs = unused;
    }
    while outs.len() < cfg.num_outputs {
        outs.push(*pool.choose(&mut rng).unwrap());
    }
    outs.truncate(cfg.num_outputs);
    let names = (0..outs.len()).map(|i| format!("y{i}")).collect();
    compact(&b.finish(outs, names))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_under_seed() {
        let cfg = GenConfig::new(12, 4, 150);
        let a = random_aig(&cfg, 9);
        let b = random_aig(&cfg, 9);
        assert_eq!(a.ands(), b.ands());
        assert_eq!(a.outputs(), b.outputs());
        let c = random_aig(&cfg, 10);
        assert_ne!(a.ands(), c.ands());
    }

    #[test]
    fn respects_shape_roughly() {
        let cfg = GenConfig::new(10, 3, 200);
        let g = random_aig(&cfg, 1);
        assert_eq!(g.num_inputs(), 10);
        assert_eq!(g.num_outputs(), 3);
        assert!(g.node_count() >= 120, "only {} nodes stayed live", g.node_count());
        assert!(g.strash_is_canonical());
    }
}
