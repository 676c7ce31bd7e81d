//! Tiny standalone AIG fragments over k leaves.
//!
//! Used for library structures (rewrite), SOP cones (refactor) and
//! resubstitution candidates. Ids: 0 is constant false, `1..=k` are the
//! leaves, AND nodes follow. Construction folds constants and dedupes
//! identical pairs by linear scan — fragments stay small.

use crate::aig::Lit;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MiniAig {
    num_leaves: usize,
    ands: Vec<(Lit, Lit)>,
    root: Lit,
}

impl MiniAig {
    pub fn new(num_leaves: usize) -> MiniAig {
        MiniAig {
            num_leaves,
            ands: Vec::new(),
            root: Lit::FALSE,
        }
    }

    pub fn leaf(k: usize) -> Lit {
        Lit::positive(k as u32 + 1)
    }

    pub fn num_leaves(&self) -> usize {
        self.num_leaves
    }

    pub fn first_and(&self) -> usize {
        1 + self.num_leaves
    }

    pub fn num_ids(&self) -> usize {
        1 + self.num_leaves + self.ands.len()
    }

    pub fn ands(&self) -> &[(Lit, Lit)] {
        &self.ands
    }

    pub fn num_ands(&self) -> usize {
        self.ands.len()
    }

    pub fn root(&self) -> Lit {
        self.root
    }

    pub fn set_root(&mut self, root: Lit) {
        debug_assert!((root.node() as usize) < self.num_ids());
        self.root = root;
    }

    pub fn and(&mut self, a: Lit, b: Lit) -> Lit {
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
        for (i, &(x, y)) in self.ands.iter().enumerate() {
            if (x, y) == (a, b) {
                return Lit::positive((self.first_and() + i) as u32);
            }
        }
        let id = self.num_ids() as u32;
        self.ands.push((a, b));
        Lit::positive(id)
    }

    pub fn or(&mut self, a: Lit, b: Lit) -> Lit {
        !self.and(!a, !b)
    }

    /// Balanced AND over a list (recursive halving).
    pub fn and_balanced(&mut self, lits: &[Lit]) -> Lit {
        match lits.len() {
            0 => Lit::TRUE,
            1 => lits[0],
            n => {
                let (l, r) = lits.split_at(n / 2);
                let a = self.and_balanced(l);
                let b = self.and_balanced(r);
                self.and(a, b)
            }
        }
    }

    pub fn or_balanced(&mut self, lits: &[Lit]) -> Lit {
        match lits.len() {
            0 => Lit::FALSE,
            1 => lits[0],
            n => {
                let (l, r) = lits.split_at(n / 2);
                let a = self.or_balanced(l);
                let b = self.or_balanced(r);
                self.or(a, b)
            }
        }
    }

    /// Evaluates the fragment over per-leaf truth tables (one word each).
    pub fn eval_u64(&self, leaf_tables: &[u64]) -> u64 {
        debug_assert_eq!(leaf_tables.len(), self.num_leaves);
        let mut vals = Vec::with_capacity(self.num_ids());
        vals.push(0u64);
        vals.extend_from_slice(leaf_tables);
        for &(a, b) in &self.ands {
            let x = vals[a.node() as usize] ^ if a.is_complemented() { !0 } else { 0 };
            let y = vals[b.node() as usize] ^ if b.is_complemented() { !0 } else { 0 };
            vals.push(x & y);
        }
        let r = vals[self.root.node() as usize];
        r ^ if self.root.is_complemented() { !0 } else { 0 }
    }

    /// Serializes as `<root>:<f0>.<f1>,<f0>.<f1>,...` using raw literal
    /// encodings (the cache-file structure encoding).
    pub fn encode(&self) -> String {
        let nodes: Vec<String> = self
            .ands
            .iter()
            .map(|(a, b)| format!("{}.{}", a.encoded(), b.encoded()))
            .collect();
        format!("{}:{}", self.root.encoded(), nodes.join(","))
    }

    pub fn decode(num_leaves: usize, s: &str) -> Option<MiniAig> {
        let (root_s, nodes_s) = s.split_once(':')?;
        let root = Lit::from_encoded(root_s.parse().ok()?);
        let mut mini = MiniAig::new(num_leaves);
        if !nodes_s.is_empty() {
            for part in nodes_s.split(',') {
                let (a, b) = part.split_once('.')?;
                let a = Lit::from_encoded(a.parse().ok()?);
                let b = Lit::from_encoded(b.parse().ok()?);
                let max = mini.num_ids() as u32;
                if a.node() >= max || b.node() >= max {
                    return None;
                }
                mini.ands.push((a, b));
            }
        }
        if root.node() as usize >= mini.num_ids() {
            return None;
        }
        mini.root = root;
        Some(mini)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_encode_round_trip() {
        let mut m = MiniAig::new(2);
        let a = MiniAig::leaf(0);
        let b = MiniAig::leaf(1);
        let x = m.or(a, !b);
        m.set_root(x);
        // a = 0b1010, b = 0b1100 over two vars.
        assert_eq!(m.eval_u64(&[0xA, 0xC]) & 0xF, 0xB); // a | !b
        let enc = m.encode();
        let back = MiniAig::decode(2, &enc).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn balanced_builders() {
        let mut m = MiniAig::new(4);
        let lits: Vec<Lit> = (0..4).map(MiniAig::leaf).collect();
        let r = m.and_balanced(&lits);
        m.set_root(r);
        assert_eq!(m.num_ands(), 3);
        let t = m.eval_u64(&[0xAAAA, 0xCCCC, 0xF0F0, 0xFF00]) & 0xFFFF;
        assert_eq!(t, 0x8000);
    }
}
