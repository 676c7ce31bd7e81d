//! K-feasible cut enumeration with truth tables (K = 4, priority cuts).

use crate::aig::Lit;

use super::npn::Tt16;
use super::work::WorkAig;

pub(crate) const CUT_LEAVES: usize = 4;
pub(crate) const CUTS_PER_NODE: usize = 8;

const PROJ: [Tt16; 4] = [0xAAAA, 0xCCCC, 0xF0F0, 0xFF00];

/// A cut: sorted leaf node ids and the root function over them, padded to
/// four variables (leaf `i` is variable `i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Cut {
    pub leaves: Vec<u32>,
    pub tt: Tt16,
}

impl Cut {
    fn unit(node: u32) -> Cut {
        Cut {
            leaves: vec![node],
            tt: PROJ[0],
        }
    }
}

/// Per-pass memo of cut sets, computed on demand in dependency order.
pub(crate) struct CutDb {
    memo: Vec<Option<Vec<Cut>>>,
}

impl CutDb {
    pub fn new() -> CutDb {
        CutDb { memo: Vec::new() }
    }

    /// Cuts of `node` in the current graph. Fanins must be final, which
    /// holds for processed original nodes and freshly created ones.
    pub fn cuts_of(&mut self, w: &WorkAig, node: u32) -> Vec<Cut> {
        self.ensure(w, node);
        self.memo[node as usize].clone().unwrap()
    }

    fn ensure(&mut self, w: &WorkAig, node: u32) {
        if self.memo.len() < w.num_ids() {
            self.memo.resize(w.num_ids(), None);
        }
        if self.memo[node as usize].is_some() {
            return;
        }
        // Iterative dependency resolution.
        let mut stack = vec![node];
        while let Some(&n) = stack.last() {
            if self.memo[n as usize].is_some() {
                stack.pop();
                continue;
            }
            if !w.is_and(n) {
                self.memo[n as usize] = Some(vec![Cut::unit(n)]);
                stack.pop();
                continue;
            }
            let (a, b) = w.fanins(n);
            let need_a = self.memo[a.node() as usize].is_none();
            let need_b = self.memo[b.node() as usize].is_none();
            if need_a {
                stack.push(a.node());
            }
            if need_b {
                stack.push(b.node());
            }
            if !need_a && !need_b {
                let cuts = self.merge(n, a, b);
                self.memo[n as usize] = Some(cuts);
                stack.pop();
            }
        }
    }

    fn merge(&self, node: u32, a: Lit, b: Lit) -> Vec<Cut> {
        let ca = self.memo[a.node() as usize].as_ref().unwrap();
        let cb = self.memo[b.node() as usize].as_ref().unwrap();
        let mut out: Vec<Cut> = Vec::new();
        for x in ca {
            for y in cb {
                let Some(leaves) = union_leaves(&x.leaves, &y.leaves) else {
                    continue;
                };
                let ta = expand_tt(x.tt, &x.leaves, &leaves);
                let tb = expand_tt(y.tt, &y.leaves, &leaves);
                let ta = if a.is_complemented() { !ta } else { ta };
                let tb = if b.is_complemented() { !tb } else { tb };
                let cut = Cut {
                    leaves,
                    tt: ta & tb,
                };
                if !out.iter().any(|c| c.leaves == cut.leaves) {
                    out.push(cut);
                }
            }
        }
        // Prefer small cuts; deterministic order by leaf vector.
        out.sort_by(|p, q| p.leaves.len().cmp(&q.leaves.len()).then(p.leaves.cmp(&q.leaves)));
        out.truncate(CUTS_PER_NODE - 1);
        out.push(Cut::unit(node));
        out
    }
}

fn union_leaves(a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    let mut out = Vec::with_capacity(CUT_LEAVES);
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = if j == b.len() || (i < a.len() && a[i] <= b[j]) {
            if j < b.len() && a[i] == b[j] {
                j += 1;
            }
            let v = a[i];
            i += 1;
            v
        } else {
            let v = b[j];
            j += 1;
            v
        };
        if out.len() == CUT_LEAVES {
            return None;
        }
        out.push(next);
    }
    Some(out)
}

/// Re-expresses a table over `from` leaves as a table over `to` leaves
/// (`from ⊆ to`, both sorted).
fn expand_tt(tt: Tt16, from: &[u32], to: &[u32]) -> Tt16 {
    if from.len() == to.len() {
        return tt;
    }
    let mut pos = [0usize; CUT_LEAVES];
    for (i, f) in from.iter().enumerate() {
        pos[i] = to.iter().position(|t| t == f).expect("from ⊆ to");
    }
    let mut out: Tt16 = 0;
    for m in 0..16u32 {
        let mut src = 0u32;
        for (i, &p) in pos.iter().enumerate().take(from.len()) {
            src |= (m >> p & 1) << i;
        }
        if tt >> src & 1 == 1 {
            out |= 1 << m;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    #[test]
    fn tt_expansion_is_consistent() {
        // f(a) = a over leaves [5]; expand into [3,5]: variable moves to
        // position 1, table becomes 0xCCCC.
        assert_eq!(expand_tt(0xAAAA, &[5], &[3, 5]), 0xCCCC);
        assert_eq!(expand_tt(0xAAAA, &[3], &[3, 5]), 0xAAAA);
    }

    #[test]
    fn cut_tables_match_cone_simulation() {
        // Random small circuit: for every cut of every node, evaluating
        // the cone on all leaf assignments must match the cut table.
        let g = crate::gen::random_aig(&crate::gen::GenConfig::new(6, 2, 40), 5);
        let mut w = WorkAig::from_aig(&g);
        let mut db = CutDb::new();
        for id in g.first_and_id()..g.num_ids() as u32 {
            if !w.live(id) {
                continue;
            }
            for cut in db.cuts_of(&w, id) {
                // Evaluate the cone over 16 minterm columns.
                let mut vals: std::collections::HashMap<u32, u16> =
                    std::collections::HashMap::new();
                for (i, &l) in cut.leaves.iter().enumerate() {
                    vals.insert(l, PROJ[i]);
                }
                let tt = eval_cone(&w, id, &mut vals);
                assert_eq!(tt, cut.tt, "node {id} cut {:?}", cut.leaves);
            }
        }

        fn eval_cone(
            w: &WorkAig,
            n: u32,
            vals: &mut std::collections::HashMap<u32, u16>,
        ) -> u16 {
            if let Some(&v) = vals.get(&n) {
                return v;
            }
            let (a, b) = w.fanins(n);
            let ta = eval_cone(w, a.node(), vals);
            let tb = eval_cone(w, b.node(), vals);
            let ta = if a.is_complemented() { !ta } else { ta };
            let tb = if b.is_complemented() { !tb } else { tb };
            let v = ta & tb;
            vals.insert(n, v);
            v
        }
    }
}
