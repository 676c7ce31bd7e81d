//! Depth-oriented tree balancing.
//!
//! Every maximal fanout-free AND tree is collected into its leaf list and
//! rebuilt by repeatedly combining the two shallowest operands, which
//! minimizes the rebuilt tree's depth for the given leaf levels. The
//! rebuild is a full reconstruction, so dead logic is dropped on the way.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::aig::{Aig, AigBuilder, Lit};

pub(crate) fn balance(g: &Aig) -> Aig {
    let n = g.num_ids();
    let first = g.first_and_id();

    // Liveness and per-node consumption profile over live logic.
    let mut live = vec![false; n];
    let mut stack: Vec<u32> = g.outputs().iter().map(|o| o.node()).collect();
    for &o in &stack {
        live[o as usize] = true;
    }
    while let Some(id) = stack.pop() {
        if g.is_and(id) {
            let (a, b) = g.fanins(id);
            for f in [a.node(), b.node()] {
                if !live[f as usize] {
                    live[f as usize] = true;
                    stack.push(f);
                }
            }
        }
    }
    let mut plain_uses = vec![0u32; n];
    let mut compl_uses = vec![0u32; n];
    for id in first..n as u32 {
        if !live[id as usize] {
            continue;
        }
        let (a, b) = g.fanins(id);
        for f in [a, b] {
            if f.is_complemented() {
                compl_uses[f.node() as usize] += 1;
            } else {
                plain_uses[f.node() as usize] += 1;
            }
        }
    }
    for &o in g.outputs() {
        if o.is_complemented() {
            compl_uses[o.node() as usize] += 1;
        } else {
            plain_uses[o.node() as usize] += 1;
        }
    }

    // A node melts into its parent tree when its only use is a single
    // plain fanin edge.
    let expandable = |id: u32| -> bool {
        g.is_and(id)
            && plain_uses[id as usize] == 1
            && compl_uses[id as usize] == 0
    };

    let mut b = AigBuilder::new();
    for name in g.input_names() {
        b.add_input(name.clone());
    }
    let mut map: Vec<Option<Lit>> = vec![None; n];
    map[0] = Some(Lit::FALSE);
    for pi in 1..first {
        map[pi as usize] = Some(Lit::positive(pi));
    }

    // Tree roots in topological order; leaves of later trees are earlier
    // roots, inputs, or complemented edges, all already mapped.
    for id in first..n as u32 {
        if !live[id as usize] || expandable(id) {
            continue;
        }
        let mut leaves: Vec<Lit> = Vec::new();
        let mut walk = vec![id];
        while let Some(t) = walk.pop() {
            let (x, y) = g.fanins(t);
            for f in [x, y] {
                if !f.is_complemented() && expandable(f.node()) {
                    walk.push(f.node());
                } else {
                    leaves.push(f);
                }
            }
        }
        // Combine the two shallowest operands first; ties break on the
        // literal encoding for determinism.
        let mut heap: BinaryHeap<Reverse<(u32, u32)>> = leaves
            .into_iter()
            .map(|l| {
                let m = map[l.node() as usize].expect("leaf mapped").xor_pol(l.is_complemented());
                Reverse((b.level(m), m.encoded()))
            })
            .collect();
        while heap.len() > 1 {
            let Reverse((_, e0)) = heap.pop().unwrap();
            let Reverse((_, e1)) = heap.pop().unwrap();
            let m = b.and(Lit::from_encoded(e0), Lit::from_encoded(e1));
            heap.push(Reverse((b.level(m), m.encoded())));
        }
        let root = Lit::from_encoded(heap.pop().unwrap().0 .1);
        map[id as usize] = Some(root);
    }

    let outputs: Vec<Lit> = g
        .outputs()
        .iter()
        .map(|&o| map[o.node() as usize].expect("output mapped").xor_pol(o.is_complemented()))
        .collect();
    b.finish(outputs, g.output_names().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cec::{check_equiv, CecBudget};

    #[test]
    fn chain_becomes_tree() {
        // ((a·b)·c)·d: depth 3 -> 2, node count stays 3.
        let mut bld = AigBuilder::new();
        let ins: Vec<Lit> = (0..4).map(|i| bld.add_input(format!("i{i}"))).collect();
        let mut acc = ins[0];
        for &i in &ins[1..] {
            acc = bld.and(acc, i);
        }
        let g = bld.finish(vec![acc], vec!["y".into()]);
        assert_eq!(g.depth(), 3);
        let h = balance(&g);
        assert_eq!(h.depth(), 2);
        assert_eq!(h.node_count(), 3);
        assert!(check_equiv(&g, &h, &CecBudget::default()).unwrap().equivalent);
    }

    #[test]
    fn balance_is_idempotent() {
        let g = crate::gen::random_aig(&crate::gen::GenConfig::new(8, 3, 120), 17);
        let once = balance(&g);
        let twice = balance(&once);
        assert_eq!(once.ands(), twice.ands());
        assert_eq!(once.outputs(), twice.outputs());
    }

    #[test]
    fn preserves_function_and_inputs() {
        for seed in 0..5 {
            let g = crate::gen::random_aig(&crate::gen::GenConfig::new(9, 3, 100), seed);
            let h = balance(&g);
            assert_eq!(h.num_inputs(), g.num_inputs());
            let r = check_equiv(&g, &h, &CecBudget::default()).unwrap();
            assert!(r.equivalent, "seed {seed}");
            assert!(h.depth() <= g.depth(), "depth must not grow (seed {seed})");
        }
    }
}
