//! And-inverter graphs with structural hashing.
//!
//! An [`Aig`] is a DAG of two-input AND nodes whose edges may carry a
//! complement bit. Node id 0 is the constant-FALSE node, ids `1..=I` are
//! the primary inputs, and AND nodes follow in topological order: every
//! fanin refers to a node with a strictly smaller id.
//!
//! Construction goes through [`AigBuilder`], which applies constant
//! folding, idempotence, complement annihilation and hash-consing, so a
//! finished graph never contains two AND nodes with the same canonically
//! ordered fanin pair.

use std::collections::HashMap;
use std::fmt;
use std::ops::Not;

/// An edge reference: a node id plus a complement bit, encoded as
/// `2 * node_id + complement`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    /// Constant false: the positive literal of node 0.
    pub const FALSE: Lit = Lit(0);
    /// Constant true: the complemented literal of node 0.
    pub const TRUE: Lit = Lit(1);

    pub fn new(node: u32, complemented: bool) -> Lit {
        debug_assert!(node < (1 << 31));
        Lit(node << 1 | complemented as u32)
    }

    pub fn positive(node: u32) -> Lit {
        Lit::new(node, false)
    }

    pub fn node(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_complemented(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn is_constant(self) -> bool {
        self.node() == 0
    }

    /// Applies an extra complement when `c` is true.
    pub fn xor_pol(self, c: bool) -> Lit {
        Lit(self.0 ^ c as u32)
    }

    /// The raw `2n + c` encoding (AIGER literal convention).
    pub fn encoded(self) -> u32 {
        self.0
    }

    pub fn from_encoded(raw: u32) -> Lit {
        Lit(raw)
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_complemented() {
            write!(f, "!n{}", self.node())
        } else {
            write!(f, "n{}", self.node())
        }
    }
}

/// An immutable combinational and-inverter graph.
#[derive(Clone, Debug)]
pub struct Aig {
    num_inputs: usize,
    ands: Vec<(Lit, Lit)>,
    outputs: Vec<Lit>,
    input_names: Vec<String>,
    output_names: Vec<String>,
}

impl Aig {
    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    /// Number of AND nodes (complement edges are free).
    pub fn node_count(&self) -> usize {
        self.ands.len()
    }

    /// Total node ids in use: constant + inputs + ANDs.
    pub fn num_ids(&self) -> usize {
        1 + self.num_inputs + self.ands.len()
    }

    /// Id of the first AND node.
    pub fn first_and_id(&self) -> u32 {
        1 + self.num_inputs as u32
    }

    pub fn is_input(&self, node: u32) -> bool {
        node >= 1 && node <= self.num_inputs as u32
    }

    pub fn is_and(&self, node: u32) -> bool {
        node >= self.first_and_id() && (node as usize) < self.num_ids()
    }

    /// Fanins of an AND node.
    pub fn fanins(&self, node: u32) -> (Lit, Lit) {
        self.ands[(node - self.first_and_id()) as usize]
    }

    pub fn ands(&self) -> &[(Lit, Lit)] {
        &self.ands
    }

    pub fn outputs(&self) -> &[Lit] {
        &self.outputs
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn output_names(&self) -> &[String] {
        &self.output_names
    }

    pub fn input_lit(&self, index: usize) -> Lit {
        debug_assert!(index < self.num_inputs);
        Lit::positive(index as u32 + 1)
    }

    /// Printable name of a wire: input names are preserved through
    /// parsing, everything else gets a generated `n<id>` name.
    pub fn wire_name(&self, node: u32) -> String {
        if self.is_input(node) {
            self.input_names[(node - 1) as usize].clone()
        } else {
            format!("n{node}")
        }
    }

    /// Resolves a wire name back to a node id.
    pub fn node_by_name(&self, name: &str) -> Option<u32> {
        if let Some(pos) = self.input_names.iter().position(|n| n == name) {
            return Some(pos as u32 + 1);
        }
        let id: u32 = name.strip_prefix('n')?.parse().ok()?;
        if (id as usize) < self.num_ids() {
            Some(id)
        } else {
            None
        }
    }

    /// Per-node logic level: constants and inputs are level 0, an AND is
    /// one above its deepest fanin. Complement edges are free.
    pub fn levels(&self) -> Vec<u32> {
        let mut levels = vec![0u32; self.num_ids()];
        let first = self.first_and_id();
        for (i, &(a, b)) in self.ands.iter().enumerate() {
            let id = first as usize + i;
            levels[id] = 1 + levels[a.node() as usize].max(levels[b.node() as usize]);
        }
        levels
    }

    /// Depth of the graph: the maximum level over all output drivers.
    pub fn depth(&self) -> u32 {
        let levels = self.levels();
        self.outputs
            .iter()
            .map(|o| levels[o.node() as usize])
            .max()
            .unwrap_or(0)
    }

    /// Scans for duplicate canonical fanin pairs; `true` when the
    /// hash-consing invariant holds.
    pub fn strash_is_canonical(&self) -> bool {
        let mut seen = HashMap::new();
        for &(a, b) in &self.ands {
            if seen.insert((a, b), ()).is_some() {
                return false;
            }
        }
        true
    }
}

/// Mutable builder with structural hashing.
///
/// Inputs are registered first; AND nodes are created through
/// [`AigBuilder::and`] and the derived helpers, which keep the graph
/// canonical (ordered fanins, folded constants, hash-consed pairs).
pub struct AigBuilder {
    ands: Vec<(Lit, Lit)>,
    strash: HashMap<(Lit, Lit), Lit>,
    levels: Vec<u32>,
    input_names: Vec<String>,
}

impl AigBuilder {
    pub fn new() -> AigBuilder {
        AigBuilder {
            ands: Vec::new(),
            strash: HashMap::new(),
            levels: vec![0],
            input_names: Vec::new(),
        }
    }

    /// Registers the next primary input and returns its literal.
    /// All inputs must be added before the first AND node.
    pub fn add_input(&mut self, name: impl Into<String>) -> Lit {
        assert!(self.ands.is_empty(), "inputs must precede AND nodes");
        self.input_names.push(name.into());
        self.levels.push(0);
        Lit::positive(self.input_names.len() as u32)
    }

    pub fn num_inputs(&self) -> usize {
        self.input_names.len()
    }

    pub fn input(&self, index: usize) -> Lit {
        debug_assert!(index < self.input_names.len());
        Lit::positive(index as u32 + 1)
    }

    pub fn node_count(&self) -> usize {
        self.ands.len()
    }

    /// Level of the node behind a literal (complement edges are free).
    pub fn level(&self, lit: Lit) -> u32 {
        self.levels[lit.node() as usize]
    }

    /// Structurally hashed AND. Applies constant folding, idempotence,
    /// complement annihilation and hash lookup before allocating.
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
        if let Some(&lit) = self.strash.get(&(a, b)) {
            return lit;
        }
        let id = (1 + self.input_names.len() + self.ands.len()) as u32;
        self.ands.push((a, b));
        self.levels
            .push(1 + self.level(a).max(self.level(b)));
        let lit = Lit::positive(id);
        self.strash.insert((a, b), lit);
        lit
    }

    pub fn or(&mut self, a: Lit, b: Lit) -> Lit {
        !self.and(!a, !b)
    }

    /// XOR lowered as `!AND(!AND(a,!b), !AND(!a,b))` — three AND nodes
    /// before hashing.
    pub fn xor(&mut self, a: Lit, b: Lit) -> Lit {
        let n0 = self.and(a, !b);
        let n1 = self.and(!a, b);
        self.or(n0, n1)
    }

    pub fn xnor(&mut self, a: Lit, b: Lit) -> Lit {
        !self.xor(a, b)
    }

    /// `if s then t else e`.
    pub fn mux(&mut self, s: Lit, t: Lit, e: Lit) -> Lit {
        let on = self.and(s, t);
        let off = self.and(!s, e);
        self.or(on, off)
    }

    /// Right-associative fold: `AND(a, AND(b, AND(c, ...)))`.
    pub fn and_rfold(&mut self, lits: &[Lit]) -> Lit {
        match lits.split_last() {
            None => Lit::TRUE,
            Some((&last, rest)) => rest
                .iter()
                .rev()
                .fold(last, |acc, &l| self.and(l, acc)),
        }
    }

    pub fn or_rfold(&mut self, lits: &[Lit]) -> Lit {
        match lits.split_last() {
            None => Lit::FALSE,
            Some((&last, rest)) => rest.iter().rev().fold(last, |acc, &l| self.or(l, acc)),
        }
    }

    pub fn finish(self, outputs: Vec<Lit>, output_names: Vec<String>) -> Aig {
        debug_assert_eq!(outputs.len(), output_names.len());
        Aig {
            num_inputs: self.input_names.len(),
            ands: self.ands,
            outputs,
            input_names: self.input_names,
            output_names,
        }
    }
}

impl Default for AigBuilder {
    fn default() -> Self {
        AigBuilder::new()
    }
}

/// Rebuilds a graph from its outputs, dropping dead nodes and keeping
/// every primary input (synthesis must never lose a key input).
pub fn compact(g: &Aig) -> Aig {
    let mut b = AigBuilder::new();
    for name in g.input_names() {
        b.add_input(name.clone());
    }
    let mut map: Vec<Option<Lit>> = vec![None; g.num_ids()];
    map[0] = Some(Lit::FALSE);
    for i in 0..g.num_inputs() {
        map[i + 1] = Some(g.input_lit(i));
    }
    let mut outputs = Vec::with_capacity(g.num_outputs());
    for &o in g.outputs() {
        let lit = map_cone(g, o.node(), &mut map, &mut b);
        outputs.push(lit.xor_pol(o.is_complemented()));
    }
    b.finish(outputs, g.output_names().to_vec())
}

fn map_cone(g: &Aig, node: u32, map: &mut Vec<Option<Lit>>, b: &mut AigBuilder) -> Lit {
    if let Some(l) = map[node as usize] {
        return l;
    }
    // Iterative post-order to avoid deep recursion on long AND chains.
    let mut stack = vec![node];
    while let Some(&n) = stack.last() {
        if map[n as usize].is_some() {
            stack.pop();
            continue;
        }
        let (a, c) = g.fanins(n);
        let need_a = map[a.node() as usize].is_none();
        let need_c = map[c.node() as usize].is_none();
        if need_a {
            stack.push(a.node());
        }
        if need_c {
            stack.push(c.node());
        }
        if !need_a && !need_c {
            let fa = map[a.node() as usize].unwrap().xor_pol(a.is_complemented());
            let fc = map[c.node() as usize].unwrap().xor_pol(c.is_complemented());
            map[n as usize] = Some(b.and(fa, fc));
            stack.pop();
        }
    }
    map[node as usize].unwrap()
}
