//! Mutable work graph shared by the rewriting transforms.
//!
//! Nodes are processed in the original topological order. A replaced node
//! gets a substitution literal; consumers resolve through the map when
//! their own turn comes, so fanout lists are never needed. Reference
//! counts track liveness exactly: a node whose count reaches zero is
//! detached (its fanin edges are released recursively) and is never
//! revived — structural reuse happens only through strash hits on live
//! nodes. This keeps the gain accounting of every accepted move exact.

use std::collections::HashMap;

use crate::aig::{Aig, AigBuilder, Lit};

use super::mini::MiniAig;

pub(crate) struct WorkAig {
    num_inputs: usize,
    input_names: Vec<String>,
    output_names: Vec<String>,
    f0: Vec<Lit>,
    f1: Vec<Lit>,
    refs: Vec<u32>,
    detached: Vec<bool>,
    subst: Vec<Option<Lit>>,
    strash: HashMap<(Lit, Lit), u32>,
    outputs: Vec<Lit>,
    first_and: u32,
    // Epoch-tagged marks for MFFC labeling and cone walks.
    mark: Vec<u32>,
    pin: Vec<u32>,
    epoch: u32,
}

impl WorkAig {
    pub fn from_aig(g: &Aig) -> WorkAig {
        let n = g.num_ids();
        let first_and = g.first_and_id();
        let mut w = WorkAig {
            num_inputs: g.num_inputs(),
            input_names: g.input_names().to_vec(),
            output_names: g.output_names().to_vec(),
            f0: vec![Lit::FALSE; first_and as usize],
            f1: vec![Lit::FALSE; first_and as usize],
            refs: vec![0; n],
            detached: vec![false; n],
            subst: vec![None; n],
            strash: HashMap::with_capacity(g.node_count() * 2),
            outputs: g.outputs().to_vec(),
            first_and,
            mark: vec![0; n],
            pin: vec![0; n],
            epoch: 0,
        };
        for (i, &(a, b)) in g.ands().iter().enumerate() {
            w.f0.push(a);
            w.f1.push(b);
            w.strash.insert((a, b), first_and + i as u32);
            w.refs[a.node() as usize] += 1;
            w.refs[b.node() as usize] += 1;
        }
        // Pin the constant, the inputs, and every output cone root.
        w.refs[0] += 1;
        for pi in 1..=w.num_inputs {
            w.refs[pi] += 1;
        }
        for o in w.outputs.clone() {
            w.refs[o.node() as usize] += 1;
        }
        // Release nodes that start out dead.
        for id in (first_and..n as u32).rev() {
            if w.refs[id as usize] == 0 && !w.detached[id as usize] {
                w.detach(id);
            }
        }
        w
    }

    pub fn num_ids(&self) -> usize {
        self.f0.len()
    }

    pub fn is_and(&self, node: u32) -> bool {
        node >= self.first_and
    }

    pub fn is_input(&self, node: u32) -> bool {
        node >= 1 && node < self.first_and
    }

    pub fn first_and(&self) -> u32 {
        self.first_and
    }

    pub fn live(&self, node: u32) -> bool {
        !self.detached[node as usize] && (self.refs[node as usize] > 0 || !self.is_and(node))
    }

    pub fn fanins(&self, node: u32) -> (Lit, Lit) {
        debug_assert!(self.is_and(node));
        (self.f0[node as usize], self.f1[node as usize])
    }

    pub fn live_and_count(&self) -> usize {
        (self.first_and as usize..self.num_ids())
            .filter(|&i| self.refs[i] > 0 && !self.detached[i])
            .count()
    }

    /// Follows the substitution chain of a literal, with path compression.
    pub fn resolve(&mut self, lit: Lit) -> Lit {
        let mut cur = lit;
        while let Some(next) = self.subst[cur.node() as usize] {
            cur = next.xor_pol(cur.is_complemented());
        }
        // Compress: point every node on the chain at the final literal.
        let mut walk = lit;
        while let Some(next) = self.subst[walk.node() as usize] {
            let following = next.xor_pol(walk.is_complemented());
            self.subst[walk.node() as usize] = Some(cur.xor_pol(walk.is_complemented()));
            walk = following;
        }
        cur
    }

    fn detach(&mut self, node: u32) {
        debug_assert!(self.is_and(node));
        debug_assert_eq!(self.refs[node as usize], 0);
        let mut stack = vec![node];
        self.detached[node as usize] = true;
        while let Some(n) = stack.pop() {
            let (a, b) = (self.f0[n as usize], self.f1[n as usize]);
            for f in [a.node(), b.node()] {
                self.refs[f as usize] -= 1;
                if self.refs[f as usize] == 0 && self.is_and(f) && !self.detached[f as usize] {
                    self.detached[f as usize] = true;
                    stack.push(f);
                }
            }
        }
    }

    /// Structurally hashed AND over already-resolved literals. Creates a
    /// fresh node unless a live structural twin exists.
    pub fn and(&mut self, a: Lit, b: Lit) -> Lit {
        debug_assert!(self.subst[a.node() as usize].is_none());
        debug_assert!(self.subst[b.node() as usize].is_none());
        if a == Lit::FALSE || b == Lit::FALSE {
            return Lit::FALSE;
        }
        if a == Lit::TRUE {
            return b;
        }
        if b == Lit::TRUE {
            return a;
        }
        if a == b {
            return a;
        }
        if a == !b {
            return Lit::FALSE;
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if let Some(&m) = self.strash.get(&(a, b)) {
            if !self.detached[m as usize] {
                return Lit::positive(m);
            }
        }
        let id = self.num_ids() as u32;
        self.f0.push(a);
        self.f1.push(b);
        self.refs.push(0);
        self.detached.push(false);
        self.subst.push(None);
        self.mark.push(0);
        self.pin.push(0);
        self.refs[a.node() as usize] += 1;
        self.refs[b.node() as usize] += 1;
        self.strash.insert((a, b), id);
        Lit::positive(id)
    }

    /// Re-canonicalizes a node after resolving its fanins. Returns `false`
    /// when the node folded away or merged with a structural twin (its
    /// substitution is set and consumers will pick it up lazily).
    pub fn prelude(&mut self, node: u32) -> bool {
        debug_assert!(self.is_and(node));
        let a = self.resolve(self.f0[node as usize]);
        let b = self.resolve(self.f1[node as usize]);
        let folded = if a == Lit::FALSE || b == Lit::FALSE {
            Some(Lit::FALSE)
        } else if a == Lit::TRUE {
            Some(b)
        } else if b == Lit::TRUE {
            Some(a)
        } else if a == b {
            Some(a)
        } else if a == !b {
            Some(Lit::FALSE)
        } else {
            None
        };
        if let Some(f) = folded {
            self.replace(node, f);
            return false;
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let old_key = (self.f0[node as usize], self.f1[node as usize]);
        if (a, b) == old_key {
            return true;
        }
        if let Some(&m) = self.strash.get(&(a, b)) {
            if m != node && !self.detached[m as usize] {
                self.replace(node, Lit::positive(m));
                return false;
            }
        }
        if self.strash.get(&old_key) == Some(&node) {
            self.strash.remove(&old_key);
        }
        // Edge counts were transferred when the old fanins were replaced;
        // only the stored literals change here.
        self.f0[node as usize] = a;
        self.f1[node as usize] = b;
        self.strash.insert((a, b), node);
        true
    }

    /// Substitutes `node` by `replacement`: transfers the pending consumer
    /// count and releases the node's exclusive cone.
    pub fn replace(&mut self, node: u32, replacement: Lit) {
        debug_assert!(self.is_and(node));
        debug_assert_ne!(replacement.node(), node);
        debug_assert!(!self.detached[replacement.node() as usize]);
        let key = (self.f0[node as usize], self.f1[node as usize]);
        if self.strash.get(&key) == Some(&node) {
            self.strash.remove(&key);
        }
        self.subst[node as usize] = Some(replacement);
        self.refs[replacement.node() as usize] += self.refs[node as usize];
        self.refs[node as usize] = 0;
        self.detach(node);
    }

    /// Size of the maximal fanout-free cone of `node` with the given cut
    /// leaves pinned, and marks its members for [`WorkAig::trial_cost`].
    pub fn mffc_size(&mut self, node: u32, leaves: &[u32]) -> u32 {
        self.epoch += 1;
        let epoch = self.epoch;
        for &l in leaves {
            self.pin[l as usize] = epoch;
        }
        let count = self.mffc_deref(node, epoch);
        self.mffc_restore(node, epoch);
        count
    }

    fn mffc_deref(&mut self, node: u32, epoch: u32) -> u32 {
        self.mark[node as usize] = epoch;
        let mut count = 1;
        let (a, b) = (self.f0[node as usize], self.f1[node as usize]);
        for f in [a.node(), b.node()] {
            self.refs[f as usize] -= 1;
            if self.refs[f as usize] == 0
                && self.is_and(f)
                && self.pin[f as usize] != epoch
            {
                count += self.mffc_deref(f, epoch);
            }
        }
        count
    }

    fn mffc_restore(&mut self, node: u32, epoch: u32) {
        let (a, b) = (self.f0[node as usize], self.f1[node as usize]);
        for f in [a.node(), b.node()] {
            if self.refs[f as usize] == 0
                && self.is_and(f)
                && self.pin[f as usize] != epoch
            {
                self.mffc_restore(f, epoch);
            }
            self.refs[f as usize] += 1;
        }
    }

    /// Whether `node` was marked by the latest [`WorkAig::mffc_size`].
    pub fn in_mffc(&self, node: u32) -> bool {
        self.mark[node as usize] == self.epoch
    }

    /// Whether a live AND over the (resolved) pair already exists.
    pub fn and_exists(&self, a: Lit, b: Lit) -> bool {
        let key = if a <= b { (a, b) } else { (b, a) };
        matches!(self.strash.get(&key), Some(&m) if !self.detached[m as usize])
    }

    /// Counts the fresh nodes an instantiation of `mini` would create.
    /// MFFC members found in the table count as new (they are about to be
    /// freed), which keeps `mffc_size - trial_cost` an exact lower bound
    /// on the live-node reduction.
    pub fn trial_cost(&self, mini: &MiniAig, leaf_lits: &[Lit]) -> u32 {
        let mut map: Vec<Option<Lit>> = vec![None; mini.num_ids()];
        map[0] = Some(Lit::FALSE);
        for (k, &l) in leaf_lits.iter().enumerate() {
            map[k + 1] = Some(l);
        }
        let mut cost = 0;
        for (i, &(ma, mb)) in mini.ands().iter().enumerate() {
            let id = mini.first_and() + i;
            let a = map[ma.node() as usize].map(|l| l.xor_pol(ma.is_complemented()));
            let b = map[mb.node() as usize].map(|l| l.xor_pol(mb.is_complemented()));
            map[id] = match (a, b) {
                (Some(x), Some(y)) => {
                    if let Some(f) = fold(x, y) {
                        Some(f)
                    } else {
                        let key = if x <= y { (x, y) } else { (y, x) };
                        match self.strash.get(&key) {
                            Some(&m) if !self.detached[m as usize] => {
                                if self.mark[m as usize] == self.epoch {
                                    cost += 1;
                                }
                                Some(Lit::positive(m))
                            }
                            _ => {
                                cost += 1;
                                None
                            }
                        }
                    }
                }
                _ => {
                    cost += 1;
                    None
                }
            };
        }
        cost
    }

    /// Builds `mini` over the given leaves and returns the root literal.
    pub fn instantiate(&mut self, mini: &MiniAig, leaf_lits: &[Lit]) -> Lit {
        let mut map: Vec<Lit> = vec![Lit::FALSE; mini.num_ids()];
        for (k, &l) in leaf_lits.iter().enumerate() {
            map[k + 1] = l;
        }
        for (i, &(ma, mb)) in mini.ands().iter().enumerate() {
            let id = mini.first_and() + i;
            let a = map[ma.node() as usize].xor_pol(ma.is_complemented());
            let b = map[mb.node() as usize].xor_pol(mb.is_complemented());
            map[id] = self.and(a, b);
        }
        let root = mini.root();
        map[root.node() as usize].xor_pol(root.is_complemented())
    }

    /// Rebuilds the final immutable graph from the live cones.
    pub fn extract(&mut self) -> Aig {
        let mut b = AigBuilder::new();
        for name in &self.input_names {
            b.add_input(name.clone());
        }
        let mut map: Vec<Option<Lit>> = vec![None; self.num_ids()];
        map[0] = Some(Lit::FALSE);
        for pi in 1..self.first_and {
            map[pi as usize] = Some(Lit::positive(pi));
        }
        let outputs: Vec<Lit> = self
            .outputs
            .clone()
            .into_iter()
            .map(|o| {
                let r = self.resolve(o);
                let lit = self.extract_cone(r.node(), &mut map, &mut b);
                lit.xor_pol(r.is_complemented())
            })
            .collect();
        b.finish(outputs, self.output_names.clone())
    }

    fn extract_cone(&self, node: u32, map: &mut Vec<Option<Lit>>, b: &mut AigBuilder) -> Lit {
        if let Some(l) = map[node as usize] {
            return l;
        }
        let mut stack = vec![node];
        while let Some(&n) = stack.last() {
            if map[n as usize].is_some() {
                stack.pop();
                continue;
            }
            debug_assert!(self.subst[n as usize].is_none(), "live node with substitution");
            let (fa, fb) = (self.f0[n as usize], self.f1[n as usize]);
            let need_a = map[fa.node() as usize].is_none();
            let need_b = map[fb.node() as usize].is_none();
            if need_a {
                stack.push(fa.node());
            }
            if need_b {
                stack.push(fb.node());
            }
            if !need_a && !need_b {
                let x = map[fa.node() as usize].unwrap().xor_pol(fa.is_complemented());
                let y = map[fb.node() as usize].unwrap().xor_pol(fb.is_complemented());
                map[n as usize] = Some(b.and(x, y));
                stack.pop();
            }
        }
        map[node as usize].unwrap()
    }

    /// Interior nodes of the cone of `root` bounded by `leaves`, in
    /// topological (children-first) order. `root` is included.
    pub fn cone_interior(&mut self, root: u32, leaves: &[u32]) -> Vec<u32> {
        self.epoch += 1;
        let epoch = self.epoch;
        for &l in leaves {
            self.pin[l as usize] = epoch;
        }
        let mut order = Vec::new();
        // Iterative post-order: (node, children_expanded)
        let mut stack = vec![(root, false)];
        while let Some((n, expanded)) = stack.pop() {
            if self.pin[n as usize] == epoch || !self.is_and(n) {
                continue;
            }
            if expanded {
                order.push(n);
                continue;
            }
            if self.mark[n as usize] == epoch {
                continue;
            }
            self.mark[n as usize] = epoch;
            stack.push((n, true));
            let (a, b) = (self.f0[n as usize], self.f1[n as usize]);
            stack.push((a.node(), false));
            stack.push((b.node(), false));
        }
        order
    }
}

fn fold(a: Lit, b: Lit) -> Option<Lit> {
    if a == Lit::FALSE || b == Lit::FALSE {
        Some(Lit::FALSE)
    } else if a == Lit::TRUE {
        Some(b)
    } else if b == Lit::TRUE {
        Some(a)
    } else if a == b {
        Some(a)
    } else if a == !b {
        Some(Lit::FALSE)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aig::AigBuilder;

    fn chain() -> Aig {
        let mut b = AigBuilder::new();
        let x = b.add_input("x");
        let y = b.add_input("y");
        let z = b.add_input("z");
        let n0 = b.and(x, y);
        let n1 = b.and(n0, z);
        b.finish(vec![n1], vec!["o".into()])
    }

    #[test]
    fn from_aig_counts_refs_and_prunes_dead() {
        let mut b = AigBuilder::new();
        let x = b.add_input("x");
        let y = b.add_input("y");
        let live = b.and(x, y);
        b.and(!x, !y); // dead
        let g = b.finish(vec![live], vec!["o".into()]);
        let w = WorkAig::from_aig(&g);
        assert_eq!(w.live_and_count(), 1);
    }

    #[test]
    fn replace_transfers_and_releases() {
        let g = chain();
        let mut w = WorkAig::from_aig(&g);
        let n0 = g.first_and_id();
        let n1 = n0 + 1;
        // Replace n1 with constant: n0 dies too (its only consumer).
        w.replace(n1, Lit::FALSE);
        assert_eq!(w.live_and_count(), 0);
        assert!(!w.live(n0));
        let out = w.extract();
        assert_eq!(out.node_count(), 0);
        assert_eq!(out.outputs()[0], Lit::FALSE);
    }

    #[test]
    fn mffc_restores_refcounts() {
        let g = chain();
        let mut w = WorkAig::from_aig(&g);
        let n1 = g.first_and_id() + 1;
        let before = w.refs.clone();
        let size = w.mffc_size(n1, &[1, 2, 3]);
        assert_eq!(size, 2); // n1 plus its exclusive n0
        assert_eq!(w.refs, before);
    }

    #[test]
    fn trial_matches_instantiate() {
        let g = chain();
        let mut w = WorkAig::from_aig(&g);
        // mini computing AND(l0, l1) over two leaves: should hit n0.
        let mut mini = MiniAig::new(2);
        let l0 = MiniAig::leaf(0);
        let l1 = MiniAig::leaf(1);
        let r = mini.and(l0, l1);
        mini.set_root(r);
        w.epoch += 1; // no marks set: nothing counts as MFFC
        let cost_hit = w.trial_cost(&mini, &[Lit::positive(1), Lit::positive(2)]);
        assert_eq!(cost_hit, 0);
        let cost_new = w.trial_cost(&mini, &[Lit::positive(1), Lit::positive(3)]);
        assert_eq!(cost_new, 1);
        let before = w.live_and_count();
        let lit = w.instantiate(&mini, &[Lit::positive(1), Lit::positive(2)]);
        assert_eq!(lit, Lit::positive(g.first_and_id()));
        assert_eq!(w.live_and_count(), before);
    }
}
