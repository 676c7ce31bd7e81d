//! Resubstitution: re-express a node with existing divisors.
//!
//! Divisors are the interior nodes of the node's reconvergence-driven
//! 8-leaf window (excluding the node's own MFFC) plus the cut leaves.
//! 0-resub replaces the node with a divisor or its complement; 1-resub
//! with an AND/OR of two divisors under any polarity. Candidates are
//! validated exactly on the window truth tables.

use crate::aig::{Aig, Lit};

use super::refactor::{cone_table, reconvergence_cut};
use super::tables::Table;
use super::work::WorkAig;

pub(crate) const RESUB_LEAVES: usize = 8;
const MAX_DIVISORS: usize = 64;

pub(crate) fn resub(g: &Aig, zero_gain: bool) -> Aig {
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
        let leaves = reconvergence_cut(&mut w, n, RESUB_LEAVES);
        if leaves.len() > RESUB_LEAVES {
            continue;
        }
        let interior = w.cone_interior(n, &leaves);
        // Label the MFFC so exclusive nodes are excluded from divisors
        // (they die with the replacement).
        let mffc = w.mffc_size(n, &leaves) as i64;
        let mut divisors: Vec<u32> = leaves.clone();
        divisors.extend(
            interior
                .iter()
                .copied()
                .filter(|&d| d != n && !w.in_mffc(d)),
        );
        divisors.sort_unstable();
        divisors.truncate(MAX_DIVISORS);

        let nvars = leaves.len();
        let mut tabs: Vec<(u32, Table)> = Vec::with_capacity(divisors.len());
        let Some(tn) = cone_table(&mut w, n, &leaves) else {
            continue;
        };
        for &d in &divisors {
            let t = if let Some(i) = leaves.iter().position(|&l| l == d) {
                Table::proj(nvars, i)
            } else {
                match cone_table(&mut w, d, &leaves) {
                    Some(t) => t,
                    None => continue,
                }
            };
            tabs.push((d, t));
        }
        let tn_not = tn.not();

        // 0-resub: a divisor (or its complement) already computes n.
        let mut replacement: Option<(i64, Lit, Option<(Lit, Lit)>)> = None;
        for (d, t) in &tabs {
            if *t == tn {
                replacement = Some((mffc, Lit::positive(*d), None));
                break;
            }
            if *t == tn_not {
                replacement = Some((mffc, !Lit::positive(*d), None));
                break;
            }
        }

        // 1-resub: n == root_pol( AND(da ^ pa, db ^ pb) ).
        if replacement.is_none() {
            'outer: for i in 0..tabs.len() {
                for j in i + 1..tabs.len() {
                    for (pa, pb) in [(false, false), (false, true), (true, false), (true, true)] {
                        let ta = if pa { tabs[i].1.not() } else { tabs[i].1.clone() };
                        let tb = if pb { tabs[j].1.not() } else { tabs[j].1.clone() };
                        let t = ta.and(&tb);
                        let root_pol = if t == tn {
                            Some(false)
                        } else if t == tn_not {
                            Some(true)
                        } else {
                            None
                        };
                        let Some(neg_root) = root_pol else { continue };
                        let la = Lit::positive(tabs[i].0).xor_pol(pa);
                        let lb = Lit::positive(tabs[j].0).xor_pol(pb);
                        let cost = if w.and_exists(la, lb) { 0 } else { 1 };
                        let gain = mffc - cost;
                        if gain < threshold {
                            continue;
                        }
                        replacement = Some((gain, Lit::new(0, neg_root), Some((la, lb))));
                        break 'outer;
                    }
                }
            }
        }

        match replacement {
            Some((gain, lit, None)) if gain >= threshold => {
                if lit.node() != n {
                    w.replace(n, lit);
                }
            }
            Some((_, root_pol, Some((la, lb)))) => {
                let lit = w.and(la, lb).xor_pol(root_pol.is_complemented());
                if lit.node() != n {
                    w.replace(n, lit);
                }
            }
            _ => {}
        }
    }
    w.extract()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aig::AigBuilder;
    use crate::cec::{check_equiv, CecBudget};

    #[test]
    fn zero_resub_merges_reassociated_trees() {
        // f = a·(b·c) and d = (a·b)·c compute the same function with
        // different structure; resub collapses one onto the other.
        let mut bld = AigBuilder::new();
        let a = bld.add_input("a");
        let b = bld.add_input("b");
        let c = bld.add_input("c");
        let x = bld.add_input("x");
        let t0 = bld.and(b, c);
        let f = bld.and(a, t0);
        let t1 = bld.and(a, b);
        let d = bld.and(t1, c);
        let o0 = bld.and(f, x);
        let o1 = bld.and(d, !x);
        let g = bld.finish(vec![o0, o1], vec!["y0".into(), "y1".into()]);
        let before = g.node_count();
        let h = resub(&g, false);
        assert!(h.node_count() < before, "{} -> {}", before, h.node_count());
        assert!(check_equiv(&g, &h, &CecBudget::default()).unwrap().equivalent);
    }

    #[test]
    fn never_increases_and_preserves() {
        for seed in 0..8 {
            let g = crate::gen::random_aig(&crate::gen::GenConfig::new(10, 3, 120), seed);
            for z in [false, true] {
                let h = resub(&g, z);
                assert!(
                    h.node_count() <= g.node_count(),
                    "seed {seed} z {z}: {} -> {}",
                    g.node_count(),
                    h.node_count()
                );
                let r = check_equiv(&g, &h, &CecBudget::default()).unwrap();
                assert!(r.equivalent, "seed {seed} z {z}");
            }
        }
    }
}
