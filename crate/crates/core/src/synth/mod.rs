//! The synthesis engine: seven AIG transformations and recipe handling.
//!
//! A [`Recipe`] is a fixed-length sequence over the transform alphabet
//! `{b, rw, rwz, rf, rfz, rs, rsz}`; [`apply_recipe`] left-folds
//! [`apply_transform`] over the steps. Transforms are pure and
//! deterministic — all stochasticity lives in recipe choice and locking —
//! and each returns a functionally equivalent graph.

mod balance;
mod cuts;
mod mini;
pub mod npn;
mod refactor;
mod resub;
mod rewrite;
mod tables;
mod work;

use std::fmt;
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::aig::Aig;
use crate::error::{Error, Result};

pub use npn::NpnLibrary;

/// The seven transformation identifiers (M = 7).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TransformId {
    Balance,
    Rewrite,
    RewriteZ,
    Refactor,
    RefactorZ,
    Resub,
    ResubZ,
}

impl TransformId {
    pub const ALL: [TransformId; 7] = [
        TransformId::Balance,
        TransformId::Rewrite,
        TransformId::RewriteZ,
        TransformId::Refactor,
        TransformId::RefactorZ,
        TransformId::Resub,
        TransformId::ResubZ,
    ];

    pub fn mnemonic(self) -> &'static str {
        match self {
            TransformId::Balance => "b",
            TransformId::Rewrite => "rw",
            TransformId::RewriteZ => "rwz",
            TransformId::Refactor => "rf",
            TransformId::RefactorZ => "rfz",
            TransformId::Resub => "rs",
            TransformId::ResubZ => "rsz",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<TransformId> {
        match s {
            "b" => Some(TransformId::Balance),
            "rw" => Some(TransformId::Rewrite),
            "rwz" => Some(TransformId::RewriteZ),
            "rf" => Some(TransformId::Refactor),
            "rfz" => Some(TransformId::RefactorZ),
            "rs" => Some(TransformId::Resub),
            "rsz" => Some(TransformId::ResubZ),
            _ => None,
        }
    }

    /// The equivalent command in an ABC-style script.
    pub fn abc_command(self) -> &'static str {
        match self {
            TransformId::Balance => "balance",
            TransformId::Rewrite => "rewrite",
            TransformId::RewriteZ => "rewrite -z",
            TransformId::Refactor => "refactor",
            TransformId::RefactorZ => "refactor -z",
            TransformId::Resub => "resub",
            TransformId::ResubZ => "resub -z",
        }
    }
}

impl fmt::Display for TransformId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// Default recipe length (L).
pub const DEFAULT_RECIPE_LEN: usize = 10;

/// A fixed-length sequence of transforms — the annealer's search variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Recipe {
    steps: Vec<TransformId>,
}

impl Recipe {
    pub fn new(steps: Vec<TransformId>) -> Recipe {
        assert!(!steps.is_empty());
        Recipe { steps }
    }

    pub fn steps(&self) -> &[TransformId] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn with_step(&self, index: usize, t: TransformId) -> Recipe {
        let mut steps = self.steps.clone();
        steps[index] = t;
        Recipe { steps }
    }

    /// Parses the dotted mnemonic form, e.g. `b.rw.rfz.b`.
    pub fn parse(s: &str) -> Result<Recipe> {
        let steps: Vec<TransformId> = s
            .split('.')
            .map(|m| {
                TransformId::from_mnemonic(m.trim())
                    .ok_or_else(|| Error::Config(format!("unknown transform mnemonic \"{m}\"")))
            })
            .collect::<Result<_>>()?;
        if steps.is_empty() {
            return Err(Error::Config("empty recipe".into()));
        }
        Ok(Recipe { steps })
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.steps.iter().map(|t| t.mnemonic()).collect();
        f.write_str(&parts.join("."))
    }
}

/// Reads a recipe file: one mnemonic per line, `#` comments.
pub fn read_recipe_file(path: &Path) -> Result<Recipe> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_recipe_file(&text)
}

pub fn parse_recipe_file(text: &str) -> Result<Recipe> {
    let mut steps = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let t = TransformId::from_mnemonic(line)
            .ok_or_else(|| Error::parse("recipe", idx + 1, format!("unknown mnemonic \"{line}\"")))?;
        steps.push(t);
    }
    if steps.is_empty() {
        return Err(Error::parse("recipe", 0, "recipe file lists no steps"));
    }
    Ok(Recipe { steps })
}

pub fn write_recipe_file(r: &Recipe, path: &Path) -> Result<()> {
    let mut text = String::from("# synthesis recipe, one transform per line\n");
    for t in r.steps() {
        text.push_str(t.mnemonic());
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// The classical 10-step baseline: `b rw rf b rw rwz b rfz rwz b`.
pub fn resyn2_baseline() -> Recipe {
    use TransformId::*;
    Recipe::new(vec![
        Balance, Rewrite, Refactor, Balance, Rewrite, RewriteZ, Balance, RefactorZ, RewriteZ,
        Balance,
    ])
}

/// Uniform i.i.d. recipe of length `len`.
pub fn random_recipe(len: usize, seed: u64) -> Result<Recipe> {
    if len == 0 {
        return Err(Error::Config("recipe length must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps = (0..len)
        .map(|_| TransformId::ALL[rng.random_range(0..TransformId::ALL.len())])
        .collect();
    Ok(Recipe { steps })
}

/// Per-step and end-to-end size/depth bookkeeping.
#[derive(Clone, Debug)]
pub struct SynthStats {
    pub nodes_before: usize,
    pub nodes_after: usize,
    pub depth_before: u32,
    pub depth_after: u32,
    pub per_step: Vec<StepStats>,
}

#[derive(Clone, Debug)]
pub struct StepStats {
    pub transform: TransformId,
    pub nodes_after: usize,
    pub depth_after: u32,
}

/// Applies one transform; the result is functionally equivalent, with all
/// inputs (key inputs included) treated as free variables.
pub fn apply_transform(g: &Aig, t: TransformId) -> (Aig, SynthStats) {
    let nodes_before = g.node_count();
    let depth_before = g.depth();
    let out = match t {
        TransformId::Balance => balance::balance(g),
        TransformId::Rewrite => rewrite::rewrite(g, false, NpnLibrary::global()),
        TransformId::RewriteZ => rewrite::rewrite(g, true, NpnLibrary::global()),
        TransformId::Refactor => refactor::refactor(g, false),
        TransformId::RefactorZ => refactor::refactor(g, true),
        TransformId::Resub => resub::resub(g, false),
        TransformId::ResubZ => resub::resub(g, true),
    };
    let stats = SynthStats {
        nodes_before,
        nodes_after: out.node_count(),
        depth_before,
        depth_after: out.depth(),
        per_step: vec![StepStats {
            transform: t,
            nodes_after: out.node_count(),
            depth_after: out.depth(),
        }],
    };
    (out, stats)
}

/// Left-fold of [`apply_transform`] over the recipe steps.
pub fn apply_recipe(g: &Aig, r: &Recipe) -> (Aig, SynthStats) {
    let nodes_before = g.node_count();
    let depth_before = g.depth();
    let mut cur = g.clone();
    let mut per_step = Vec::with_capacity(r.len());
    for &t in r.steps() {
        let (next, s) = apply_transform(&cur, t);
        per_step.push(StepStats {
            transform: t,
            nodes_after: s.nodes_after,
            depth_after: s.depth_after,
        });
        cur = next;
    }
    let stats = SynthStats {
        nodes_before,
        nodes_after: cur.node_count(),
        depth_before,
        depth_after: cur.depth(),
        per_step,
    };
    (cur, stats)
}

/// Writes an ABC-style command file for cross-checking against an
/// external synthesizer; the toolkit never invokes one itself.
pub fn emit_abc_script(r: &Recipe) -> String {
    let parts: Vec<&str> = r.steps().iter().map(|t| t.abc_command()).collect();
    format!("{}\n", parts.join("; "))
}
