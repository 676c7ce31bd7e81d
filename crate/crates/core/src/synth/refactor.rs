//! Refactoring: reconvergence-driven cuts re-expressed as AND-OR cones.
//!
//! Each node gets a cut of up to 10 leaves grown by the expansion that
//! adds the fewest fresh leaves. The cut function's irredundant SOP
//! (Minato-Morreale) is rebuilt as a balanced AND-OR cone and accepted on
//! positive gain (non-negative for the zero-gain variant).

use crate::aig::{Aig, Lit};

use super::mini::MiniAig;
use super::tables::{isop, Cube, Table};
use super::work::WorkAig;

pub(crate) const REFACTOR_LEAVES: usize = 10;

pub(crate) fn refactor(g: &Aig, zero_gain: bool) -> Aig {
    let mut w = WorkAig::from_aig(g);
    let snapshot: Vec<u32> = (g.first_and_id()..g.num_ids() as u32).collect();
    let threshold: i64 = if zero_gain { 0 } else { 1 };

    for n in snapshot {
        if !w.live(n) {
            continue;
        }
        if !w.prelude(n) {
            continue;
        }
        let leaves = reconvergence_cut(&mut w, n, REFACTOR_LEAVES);
        if leaves.len() < 2 || leaves.len() > REFACTOR_LEAVES {
            continue;
        }
        let Some(tt) = cone_table(&mut w, n, &leaves) else {
            continue;
        };
        let mini = sop_to_mini(&tt, leaves.len());
        let leaf_lits: Vec<Lit> = leaves.iter().map(|&l| Lit::positive(l)).collect();
        let mffc = w.mffc_size(n, &leaves) as i64;
        let cost = w.trial_cost(&mini, &leaf_lits) as i64;
        if mffc - cost < threshold {
            continue;
        }
        let lit = w.instantiate(&mini, &leaf_lits);
        if lit.node() != n {
            w.replace(n, lit);
        }
    }
    w.extract()
}

/// Grows a cut from the node's fanins by repeatedly expanding the leaf
/// whose fanins add the fewest new leaves (ties: lowest node id). Stops
/// when no expansion fits within `max_leaves`.
pub(crate) fn reconvergence_cut(w: &mut WorkAig, node: u32, max_leaves: usize) -> Vec<u32> {
    let (a, b) = w.fanins(node);
    let mut leaves: Vec<u32> = vec![a.node(), b.node()];
    leaves.sort_unstable();
    leaves.dedup();
    loop {
        let mut best: Option<(usize, usize)> = None; // (cost, leaf index)
        for (i, &l) in leaves.iter().enumerate() {
            if !w.is_and(l) {
                continue;
            }
            let (x, y) = w.fanins(l);
            let fresh = [x.node(), y.node()]
                .iter()
                .filter(|f| !leaves.contains(f))
                .count();
            if leaves.len() - 1 + fresh > max_leaves {
                continue;
            }
            if best.is_none_or(|(bc, _)| fresh < bc) {
                best = Some((fresh, i));
            }
        }
        let Some((_, i)) = best else { break };
        let l = leaves.remove(i);
        let (x, y) = w.fanins(l);
        for f in [x.node(), y.node()] {
            if !leaves.contains(&f) {
                leaves.push(f);
            }
        }
        leaves.sort_unstable();
        if leaves.iter().all(|&l| !w.is_and(l)) {
            break;
        }
    }
    leaves
}

/// Truth table of `node` over the cut leaves; `None` when the cone walks
/// out of the cut (shouldn't happen for a well-formed cut).
pub(crate) fn cone_table(w: &mut WorkAig, node: u32, leaves: &[u32]) -> Option<Table> {
    let order = w.cone_interior(node, leaves);
    if order.is_empty() || *order.last().unwrap() != node {
        return None;
    }
    let nvars = leaves.len();
    let mut tabs: std::collections::HashMap<u32, Table> = std::collections::HashMap::new();
    for (i, &l) in leaves.iter().enumerate() {
        tabs.insert(l, Table::proj(nvars, i));
    }
    for &id in &order {
        let (a, b) = w.fanins(id);
        let ta = tabs.get(&a.node())?.clone();
        let tb = tabs.get(&b.node())?.clone();
        let ta = if a.is_complemented() { ta.not() } else { ta };
        let tb = if b.is_complemented() { tb.not() } else { tb };
        tabs.insert(id, ta.and(&tb));
    }
    tabs.remove(&node)
}

/// Balanced AND-OR cone for the function's irredundant SOP.
pub(crate) fn sop_to_mini(tt: &Table, num_leaves: usize) -> MiniAig {
    let mut mini = MiniAig::new(num_leaves);
    if tt.is_zero() {
        mini.set_root(Lit::FALSE);
        return mini;
    }
    if tt.is_ones() {
        mini.set_root(Lit::TRUE);
        return mini;
    }
    let cubes = isop(tt, tt);
    let cube_lits: Vec<Lit> = cubes
        .iter()
        .map(|c| cube_to_mini(c, num_leaves, &mut mini))
        .collect();
    let root = mini.or_balanced(&cube_lits);
    mini.set_root(root);
    mini
}

fn cube_to_mini(c: &Cube, num_leaves: usize, mini: &mut MiniAig) -> Lit {
    let mut lits = Vec::new();
    for v in 0..num_leaves {
        if c.pos >> v & 1 == 1 {
            lits.push(MiniAig::leaf(v));
        }
        if c.neg >> v & 1 == 1 {
            lits.push(!MiniAig::leaf(v));
        }
    }
    mini.and_balanced(&lits)
}
