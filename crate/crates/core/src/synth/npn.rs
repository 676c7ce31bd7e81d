//! Precomputed structure library for cut rewriting.
//!
//! A breadth-first enumeration over 4-input AIG fragments (tree cost up
//! to 7 nodes) maps every reachable truth table to a minimal structure.
//! Only NPN-canonical tables are stored; a lookup canonicalizes the cut
//! function and searches for the input permutation / polarity / output
//! polarity that transforms the canonical structure back. Tables the
//! enumeration never reaches simply have no entry — rewrite skips them.

use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use crate::aig::Lit;
use crate::error::{Error, Result};

use super::mini::MiniAig;

/// Truth table of a 4-input function, one bit per minterm.
pub type Tt16 = u16;

const MAX_TREE_COST: u32 = 7;
const PROJ: [Tt16; 4] = [0xAAAA, 0xCCCC, 0xF0F0, 0xFF00];

/// All 24 permutations of four indices, lexicographic.
fn perms4() -> &'static [[usize; 4]; 24] {
    static PERMS: OnceLock<[[usize; 4]; 24]> = OnceLock::new();
    PERMS.get_or_init(|| {
        let mut out = [[0usize; 4]; 24];
        let mut idx = 0;
        let mut items = [0usize, 1, 2, 3];
        heap_permute(&mut items, 4, &mut |p| {
            out[idx] = *p;
            idx += 1;
        });
        out.sort_unstable();
        out
    })
}

fn heap_permute(items: &mut [usize; 4], k: usize, visit: &mut impl FnMut(&[usize; 4])) {
    if k == 1 {
        visit(items);
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, visit);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// `G(x) = out_neg ^ F(y)` with `y_i = x[perm[i]] ^ neg_i`: the table of
/// the NPN-transformed function.
pub fn apply_npn(t: Tt16, perm: &[usize; 4], neg: u8, out_neg: bool) -> Tt16 {
    let mut r: Tt16 = 0;
    for m in 0..16u32 {
        let mut y = 0u32;
        for (i, &p) in perm.iter().enumerate() {
            let xi = m >> p & 1;
            y |= (xi ^ (neg as u32 >> i & 1)) << i;
        }
        let v = (t >> y & 1 != 0) ^ out_neg;
        r |= (v as Tt16) << m;
    }
    r
}

/// The minimum table over all 768 NPN transforms.
///
/// Backed by a lazily built full map: each orbit is enumerated once and
/// its minimum propagated to every member, so the whole 2^16 space costs
/// one 768-transform sweep per equivalence class.
pub fn canonical(t: Tt16) -> Tt16 {
    static MAP: OnceLock<Vec<Tt16>> = OnceLock::new();
    let map = MAP.get_or_init(|| {
        let mut canon = vec![Tt16::MAX; 1 << 16];
        let mut orbit: Vec<Tt16> = Vec::with_capacity(1536);
        for t in 0..=u16::MAX {
            if canon[t as usize] != Tt16::MAX {
                continue;
            }
            orbit.clear();
            let mut best = Tt16::MAX;
            for perm in perms4().iter() {
                for neg in 0..16u8 {
                    let base = apply_npn(t, perm, neg, false);
                    best = best.min(base).min(!base);
                    orbit.push(base);
                    orbit.push(!base);
                }
            }
            for &m in &orbit {
                canon[m as usize] = best;
            }
        }
        canon
    });
    map[t as usize]
}

#[derive(Clone, Copy, Debug)]
enum How {
    Unreached,
    Const0,
    Proj(u8),
    Not(Tt16),
    And(Tt16, Tt16),
}

/// The persistent structure library.
pub struct NpnLibrary {
    entries: HashMap<Tt16, MiniAig>,
}

/// A library hit: instantiate `mini` over
/// `leaves[i] = cut_leaf[perm[i]] ^ neg_i`, then complement the root when
/// `out_neg` is set.
pub(crate) struct Replacement<'a> {
    pub mini: &'a MiniAig,
    pub perm: [usize; 4],
    pub neg: u8,
    pub out_neg: bool,
}

impl<'a> Replacement<'a> {
    /// Materializes the leaf literal vector for the instantiation.
    pub fn leaf_lits(&self, cut_leaves: &[Lit]) -> Vec<Lit> {
        debug_assert!(cut_leaves.len() <= 4);
        let get = |i: usize| {
            if i < cut_leaves.len() {
                cut_leaves[i]
            } else {
                // Padding variable: the function cannot depend on it, any
                // literal works; constant keeps folding trivial.
                Lit::FALSE
            }
        };
        (0..4)
            .map(|i| get(self.perm[i]).xor_pol(self.neg >> i & 1 == 1))
            .collect()
    }
}

impl NpnLibrary {
    /// Breadth-first enumeration up to the tree-cost bound.
    pub fn build() -> NpnLibrary {
        let mut cost = vec![u8::MAX; 1 << 16];
        let mut how = vec![How::Unreached; 1 << 16];
        let mut classes: Vec<Vec<Tt16>> = vec![Vec::new(); MAX_TREE_COST as usize + 1];

        let seed = |t: Tt16, h: How, classes: &mut Vec<Vec<Tt16>>, cost: &mut Vec<u8>, how: &mut Vec<How>| {
            if cost[t as usize] == u8::MAX {
                cost[t as usize] = 0;
                how[t as usize] = h;
                classes[0].push(t);
            }
        };
        seed(0, How::Const0, &mut classes, &mut cost, &mut how);
        seed(!0, How::Not(0), &mut classes, &mut cost, &mut how);
        for (k, &p) in PROJ.iter().enumerate() {
            seed(p, How::Proj(k as u8), &mut classes, &mut cost, &mut how);
            seed(!p, How::Not(p), &mut classes, &mut cost, &mut how);
        }

        for total in 1..=MAX_TREE_COST {
            for i in 0..total {
                let j = total - 1 - i;
                if i > j {
                    break;
                }
                for fi in 0..classes[i as usize].len() {
                    let f = classes[i as usize][fi];
                    let start = if i == j { fi } else { 0 };
                    for gi in start..classes[j as usize].len() {
                        let g = classes[j as usize][gi];
                        let h = f & g;
                        if cost[h as usize] == u8::MAX {
                            cost[h as usize] = total as u8;
                            how[h as usize] = How::And(f, g);
                            classes[total as usize].push(h);
                        }
                        let hn = !h;
                        if cost[hn as usize] == u8::MAX {
                            cost[hn as usize] = total as u8;
                            how[hn as usize] = How::Not(h);
                            classes[total as usize].push(hn);
                        }
                    }
                }
            }
        }

        // Keep only canonical representatives, flattened to MiniAigs.
        let mut entries = HashMap::new();
        for t in 0..=u16::MAX {
            if cost[t as usize] == u8::MAX || canonical(t) != t {
                continue;
            }
            let mut mini = MiniAig::new(4);
            let mut memo: HashMap<Tt16, Lit> = HashMap::new();
            let root = flatten(t, &how, &mut mini, &mut memo);
            mini.set_root(root);
            debug_assert_eq!(mini.eval_u64(&[0xAAAA, 0xCCCC, 0xF0F0, 0xFF00]) as u16, t);
            entries.insert(t, mini);
        }
        NpnLibrary { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Looks up a replacement structure for an arbitrary 4-var table.
    pub(crate) fn lookup(&self, tt: Tt16) -> Option<Replacement<'_>> {
        let canon = canonical(tt);
        let mini = self.entries.get(&canon)?;
        for perm in perms4().iter() {
            for neg in 0..16u8 {
                let base = apply_npn(canon, perm, neg, false);
                if base == tt {
                    return Some(Replacement {
                        mini,
                        perm: *perm,
                        neg,
                        out_neg: false,
                    });
                }
                if !base == tt {
                    return Some(Replacement {
                        mini,
                        perm: *perm,
                        neg,
                        out_neg: true,
                    });
                }
            }
        }
        // canonical() found a transform of tt reaching canon, so the
        // reverse search cannot fail.
        unreachable!("NPN transform search must succeed");
    }

    /// Cache-file round trip: `ALMOST-NPN v1` header, then
    /// `<hex table> <structure>` lines.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut lines: Vec<(Tt16, String)> = self
            .entries
            .iter()
            .map(|(t, m)| (*t, format!("{t:04x} {}", m.encode())))
            .collect();
        lines.sort_unstable_by_key(|(t, _)| *t);
        let body: Vec<&str> = lines.iter().map(|(_, s)| s.as_str()).collect();
        let text = format!("ALMOST-NPN v1\n{}\n", body.join("\n"));
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
        std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<NpnLibrary> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "ALMOST-NPN v1")) => {}
            _ => return Err(Error::parse("npn-cache", 1, "bad header")),
        }
        let mut entries = HashMap::new();
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (hex, enc) = line
                .split_once(' ')
                .ok_or_else(|| Error::parse("npn-cache", idx + 1, "bad entry"))?;
            let t = u16::from_str_radix(hex, 16)
                .map_err(|_| Error::parse("npn-cache", idx + 1, "bad table"))?;
            let mini = MiniAig::decode(4, enc)
                .ok_or_else(|| Error::parse("npn-cache", idx + 1, "bad structure"))?;
            entries.insert(t, mini);
        }
        Ok(NpnLibrary { entries })
    }

    /// Loads the cache when present and valid, otherwise builds the
    /// library and tries to persist it (build failures to write are
    /// reported, a stale cache is rebuilt).
    pub fn load_or_build(path: &Path) -> Result<NpnLibrary> {
        if path.exists() {
            if let Ok(lib) = NpnLibrary::read_cache(path) {
                if !lib.is_empty() {
                    return Ok(lib);
                }
            }
        }
        let lib = NpnLibrary::build();
        lib.write_cache(path)?;
        Ok(lib)
    }

    /// The process-wide shared library, built once on first use.
    pub fn global() -> &'static NpnLibrary {
        static LIB: OnceLock<NpnLibrary> = OnceLock::new();
        LIB.get_or_init(NpnLibrary::build)
    }
}

fn flatten(t: Tt16, how: &[How], mini: &mut MiniAig, memo: &mut HashMap<Tt16, Lit>) -> Lit {
    if let Some(&l) = memo.get(&t) {
        return l;
    }
    let lit = match how[t as usize] {
        How::Unreached => unreachable!("flatten of unreached table"),
        How::Const0 => Lit::FALSE,
        How::Proj(k) => MiniAig::leaf(k as usize),
        How::Not(x) => !flatten(x, how, mini, memo),
        How::And(f, g) => {
            let a = flatten(f, how, mini, memo);
            let b = flatten(g, how, mini, memo);
            mini.and(a, b)
        }
    };
    memo.insert(t, lit);
    lit
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_npn_identity_and_negation() {
        let t: Tt16 = 0x8000; // AND of all four inputs
        let id = [0usize, 1, 2, 3];
        assert_eq!(apply_npn(t, &id, 0, false), t);
        assert_eq!(apply_npn(t, &id, 0, true), !t);
        // Negating every input maps the top minterm to minterm 0.
        assert_eq!(apply_npn(t, &id, 0xF, false), 0x0001);
    }

    #[test]
    fn canonical_is_invariant_on_the_class() {
        let t: Tt16 = 0x6666; // XOR of first two inputs
        let c = canonical(t);
        for perm in perms4().iter() {
            for neg in [0u8, 3, 9, 15] {
                for out in [false, true] {
                    assert_eq!(canonical(apply_npn(t, perm, neg, out)), c);
                }
            }
        }
    }

    #[test]
    fn library_contains_basic_structures() {
        let lib = NpnLibrary::global();
        // AND4: exhaustive enumeration is the oracle for minimality.
        let and4 = lib.lookup(0x8000).expect("AND4 reachable");
        assert_eq!(and4.mini.num_ands(), 3);
        // XOR2 padded to four vars.
        let xor2 = lib.lookup(0x6666).expect("XOR2 reachable");
        assert_eq!(xor2.mini.num_ands(), 3);
        // Constant zero: a constant literal with no nodes.
        let c0 = lib.lookup(0x0000).expect("const reachable");
        assert_eq!(c0.mini.num_ands(), 0);
        assert!(c0.mini.root().is_constant());
    }

    #[test]
    fn lookup_reconstructs_the_exact_function() {
        let lib = NpnLibrary::global();
        // Check a batch of tables: instantiating the replacement over
        // projection tables must reproduce the table bit for bit.
        let mut checked = 0;
        for t in (0..=u16::MAX).step_by(97) {
            let Some(r) = lib.lookup(t) else { continue };
            let mut leaves = [0u64; 4];
            for (i, l) in r
                .leaf_lits(&[
                    Lit::positive(1),
                    Lit::positive(2),
                    Lit::positive(3),
                    Lit::positive(4),
                ])
                .iter()
                .enumerate()
            {
                let base = match l.node() {
                    0 => 0u64,
                    k => PROJ[(k - 1) as usize] as u64,
                };
                leaves[i] = if l.is_complemented() { !base } else { base };
            }
            let got = r.mini.eval_u64(&leaves) as u16;
            let got = if r.out_neg { !got } else { got };
            assert_eq!(got, t, "table {t:04x} reconstructed wrong");
            checked += 1;
        }
        assert!(checked > 300, "only {checked} tables reachable");
    }
}
