//! Word-packed truth tables over up to 16 variables, plus the
//! Minato-Morreale irredundant SOP extraction used by refactoring.

/// A truth table over `nvars` variables: bit `m` of the table is the
/// function value on minterm `m`. One `u64` per 64 minterms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Table {
    pub nvars: usize,
    pub words: Vec<u64>,
}

fn word_count(nvars: usize) -> usize {
    if nvars <= 6 {
        1
    } else {
        1 << (nvars - 6)
    }
}

fn full_mask(nvars: usize) -> u64 {
    if nvars >= 6 {
        !0
    } else {
        (1u64 << (1 << nvars)) - 1
    }
}

impl Table {
    pub fn zeros(nvars: usize) -> Table {
        Table {
            nvars,
            words: vec![0; word_count(nvars)],
        }
    }

    pub fn ones(nvars: usize) -> Table {
        Table {
            nvars,
            words: vec![full_mask(nvars); word_count(nvars)],
        }
    }

    /// Projection of variable `v`.
    pub fn proj(nvars: usize, v: usize) -> Table {
        debug_assert!(v < nvars);
        let mut t = Table::zeros(nvars);
        if v < 6 {
            let pattern = PROJ6[v] & full_mask(nvars);
            for w in &mut t.words {
                *w = pattern;
            }
        } else {
            let stride = 1usize << (v - 6);
            for (i, w) in t.words.iter_mut().enumerate() {
                if i / stride % 2 == 1 {
                    *w = !0;
                }
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_ones(&self) -> bool {
        let m = full_mask(self.nvars);
        self.words.iter().all(|&w| w == m)
    }

    pub fn not(&self) -> Table {
        let m = full_mask(self.nvars);
        Table {
            nvars: self.nvars,
            words: self.words.iter().map(|w| !w & m).collect(),
        }
    }

    pub fn and(&self, o: &Table) -> Table {
        Table {
            nvars: self.nvars,
            words: self.words.iter().zip(&o.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn or(&self, o: &Table) -> Table {
        Table {
            nvars: self.nvars,
            words: self.words.iter().zip(&o.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn andn(&self, o: &Table) -> Table {
        Table {
            nvars: self.nvars,
            words: self.words.iter().zip(&o.words).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn get(&self, m: usize) -> bool {
        self.words[m / 64] >> (m % 64) & 1 == 1
    }

    /// Negative/positive cofactor with respect to variable `v`: the value
    /// on the half-space is replicated into both halves.
    pub fn cofactor(&self, v: usize, value: bool) -> Table {
        let mut t = Table::zeros(self.nvars);
        if v < 6 {
            let shift = 1usize << v;
            let mask = if value { PROJ6[v] } else { !PROJ6[v] };
            for (i, w) in self.words.iter().enumerate() {
                let half = w & mask;
                t.words[i] = if value {
                    half | (half >> shift)
                } else {
                    half | (half << shift)
                } & full_mask(self.nvars);
            }
        } else {
            let stride = 1usize << (v - 6);
            for i in 0..self.words.len() {
                let src = if i / stride % 2 == (value as usize) {
                    i
                } else if value {
                    i + stride
                } else {
                    i - stride
                };
                t.words[i] = self.words[src];
            }
        }
        t
    }

    pub fn depends_on(&self, v: usize) -> bool {
        self.cofactor(v, false) != self.cofactor(v, true)
    }
}

const PROJ6: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// A product term: variable masks over the table's variable order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) struct Cube {
    pub pos: u16,
    pub neg: u16,
}

impl Cube {
    pub fn table(&self, nvars: usize) -> Table {
        let mut t = Table::ones(nvars);
        for v in 0..nvars {
            if self.pos >> v & 1 == 1 {
                t = t.and(&Table::proj(nvars, v));
            }
            if self.neg >> v & 1 == 1 {
                t = t.andn(&Table::proj(nvars, v));
            }
        }
        t
    }

    pub fn num_literals(&self) -> u32 {
        self.pos.count_ones() + self.neg.count_ones()
    }
}

pub(crate) fn sop_table(cubes: &[Cube], nvars: usize) -> Table {
    let mut t = Table::zeros(nvars);
    for c in cubes {
        t = t.or(&c.table(nvars));
    }
    t
}

/// Minato-Morreale irredundant SOP: returns a cover `F` of the interval
/// `lower ⊆ F ⊆ upper`; calling it with `lower == upper == f` yields an
/// irredundant cover of `f`.
pub(crate) fn isop(lower: &Table, upper: &Table) -> Vec<Cube> {
    let mut cubes = Vec::new();
    isop_rec(lower, upper, 0, &mut cubes);
    cubes
}

fn isop_rec(lower: &Table, upper: &Table, from_var: usize, out: &mut Vec<Cube>) -> Table {
    debug_assert!(lower.andn(upper).is_zero(), "lower must imply upper");
    if lower.is_zero() {
        return Table::zeros(lower.nvars);
    }
    if upper.is_ones() {
        out.push(Cube { pos: 0, neg: 0 });
        return Table::ones(lower.nvars);
    }
    // Splitting variable: the lowest one either bound depends on.
    let mut var = None;
    for v in from_var..lower.nvars {
        if lower.depends_on(v) || upper.depends_on(v) {
            var = Some(v);
            break;
        }
    }
    let v = var.expect("non-constant interval must have support");
    let l0 = lower.cofactor(v, false);
    let l1 = lower.cofactor(v, true);
    let u0 = upper.cofactor(v, false);
    let u1 = upper.cofactor(v, true);

    // Cubes forced to carry !v, then those forced to carry v.
    let mut f0 = Vec::new();
    let t0 = isop_rec(&l0.andn(&u1), &u0, v + 1, &mut f0);
    let mut f1 = Vec::new();
    let t1 = isop_rec(&l1.andn(&u0), &u1, v + 1, &mut f1);
    // Remaining required minterms are covered independently of v.
    let l_rest = l0.andn(&t0).or(&l1.andn(&t1));
    let mut fs = Vec::new();
    let ts = isop_rec(&l_rest, &u0.and(&u1), v + 1, &mut fs);

    for c in &mut f0 {
        c.neg |= 1 << v;
    }
    for c in &mut f1 {
        c.pos |= 1 << v;
    }
    out.extend_from_slice(&f0);
    out.extend_from_slice(&f1);
    out.extend_from_slice(&fs);

    let pv = Table::proj(lower.nvars, v);
    pv.not().and(&t0).or(&pv.and(&t1)).or(&ts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    fn random_table(nvars: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Table {
        let mut t = Table::zeros(nvars);
        for w in &mut t.words {
            *w = rng.random();
        }
        if nvars < 6 {
            t.words[0] &= full_mask(nvars);
        }
        t
    }

    #[test]
    fn cofactor_matches_pointwise_definition() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for nvars in [2usize, 5, 7, 8] {
            let t = random_table(nvars, &mut rng);
            for v in 0..nvars {
                let c0 = t.cofactor(v, false);
                let c1 = t.cofactor(v, true);
                for m in 0..1usize << nvars {
                    let m0 = m & !(1 << v);
                    let m1 = m | 1 << v;
                    assert_eq!(c0.get(m), t.get(m0), "c0 var {v} minterm {m}");
                    assert_eq!(c1.get(m), t.get(m1), "c1 var {v} minterm {m}");
                }
            }
        }
    }

    #[test]
    fn isop_covers_exactly_and_irredundantly() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for nvars in [3usize, 4, 6, 8] {
            for _ in 0..20 {
                let f = random_table(nvars, &mut rng);
                let cubes = isop(&f, &f);
                let cover = sop_table(&cubes, nvars);
                assert_eq!(cover, f, "cover must equal the function");
                // Irredundant: dropping any cube loses a minterm.
                for skip in 0..cubes.len() {
                    let rest: Vec<Cube> = cubes
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, c)| *c)
                        .collect();
                    assert_ne!(sop_table(&rest, nvars), f, "cube {skip} is redundant");
                }
            }
        }
    }

    #[test]
    fn isop_handles_constants() {
        let z = Table::zeros(4);
        assert!(isop(&z, &z).is_empty());
        let o = Table::ones(4);
        let cubes = isop(&o, &o);
        assert_eq!(cubes.len(), 1);
        assert_eq!(cubes[0].num_literals(), 0);
    }
}
