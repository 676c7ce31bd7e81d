//! AIGER ASCII ("aag") reader and writer, combinational subset.
//!
//! Version 1 format, header `aag M I L O A` with `L = 0`. Node ids map
//! one-to-one onto AIGER variables, so literals are exactly the `2v + c`
//! encoding of [`Lit`]. Symbol-table lines are read and written so input
//! and output names survive a round trip.

use crate::aig::{Aig, AigBuilder, Lit};
use crate::error::{Error, Result};

const CONTEXT: &str = "aiger";

/// Parses `aag` text into a structurally hashed [`Aig`].
///
/// Duplicate AND definitions collapse through hashing, so the node count
/// of a non-canonical file may shrink; simulation semantics are preserved.
pub fn parse_aiger_ascii(text: &str) -> Result<Aig> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(CONTEXT, 1, "empty file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 6 || fields[0] != "aag" {
        return Err(Error::parse(CONTEXT, 1, "malformed header, expected \"aag M I L O A\""));
    }
    let nums: Vec<usize> = fields[1..]
        .iter()
        .map(|s| s.parse().map_err(|_| Error::parse(CONTEXT, 1, "malformed header count")))
        .collect::<Result<_>>()?;
    let (m, i, l, o, a) = (nums[0], nums[1], nums[2], nums[3], nums[4]);
    if l != 0 {
        return Err(Error::parse(CONTEXT, 1, "latches are not supported (combinational only)"));
    }
    if m < i + a {
        return Err(Error::parse(CONTEXT, 1, "header M smaller than I + A"));
    }

    let mut next = |what: &str| -> Result<(usize, &str)> {
        for (idx, line) in lines.by_ref() {
            let line = line.trim();
            if !line.is_empty() {
                return Ok((idx + 1, line));
            }
        }
        Err(Error::parse(CONTEXT, 0, format!("unexpected end of file, expected {what}")))
    };

    // Input literals must be the consecutive even literals 2, 4, ...
    for k in 0..i {
        let (ln, line) = next("input literal")?;
        let lit: usize = line
            .parse()
            .map_err(|_| Error::parse(CONTEXT, ln, "bad input literal"))?;
        if lit != 2 * (k + 1) {
            return Err(Error::parse(
                CONTEXT,
                ln,
                format!("input literal {lit}, expected {}", 2 * (k + 1)),
            ));
        }
    }

    let max_lit = 2 * m + 1;
    let mut out_raw = Vec::with_capacity(o);
    for _ in 0..o {
        let (ln, line) = next("output literal")?;
        let lit: usize = line
            .parse()
            .map_err(|_| Error::parse(CONTEXT, ln, "bad output literal"))?;
        if lit > max_lit {
            return Err(Error::parse(CONTEXT, ln, format!("output literal {lit} out of range")));
        }
        out_raw.push(lit);
    }

    let mut b = AigBuilder::new();
    let mut input_names: Vec<Option<String>> = vec![None; i];
    let mut output_names: Vec<Option<String>> = vec![None; o];
    for _ in 0..i {
        b.add_input(String::new()); // placeholder, named below
    }
    // map[var] = literal in the rebuilt graph
    let mut map: Vec<Option<Lit>> = vec![None; m + 1];
    map[0] = Some(Lit::FALSE);
    for k in 0..i {
        map[k + 1] = Some(Lit::positive(k as u32 + 1));
    }
    let lookup = |map: &Vec<Option<Lit>>, raw: usize, ln: usize| -> Result<Lit> {
        let var = raw >> 1;
        match map.get(var).copied().flatten() {
            Some(l) => Ok(l.xor_pol(raw & 1 == 1)),
            None => Err(Error::parse(
                CONTEXT,
                ln,
                format!("literal {raw} refers to an undefined or out-of-order variable"),
            )),
        }
    };

    for _ in 0..a {
        let (ln, line) = next("and line")?;
        let parts: Vec<usize> = line
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| Error::parse(CONTEXT, ln, "bad and line")))
            .collect::<Result<_>>()?;
        if parts.len() != 3 {
            return Err(Error::parse(CONTEXT, ln, "and line needs three literals"));
        }
        let (lhs, r0, r1) = (parts[0], parts[1], parts[2]);
        if lhs % 2 != 0 || lhs / 2 <= i || lhs > max_lit {
            return Err(Error::parse(CONTEXT, ln, format!("bad and lhs {lhs}")));
        }
        let var = lhs >> 1;
        if map[var].is_some() {
            return Err(Error::parse(CONTEXT, ln, format!("variable {var} defined twice")));
        }
        if r0 >= lhs || r1 >= lhs {
            return Err(Error::parse(CONTEXT, ln, "and fanin not topologically ordered"));
        }
        let f0 = lookup(&map, r0, ln)?;
        let f1 = lookup(&map, r1, ln)?;
        map[var] = Some(b.and(f0, f1));
    }

    // Optional symbol table and comment section.
    for (idx, line) in lines {
        let ln = idx + 1;
        let line = line.trim_end();
        if line == "c" {
            break;
        }
        if line.is_empty() {
            continue;
        }
        let (kind, rest) = line.split_at(1);
        let Some(space) = rest.find(' ') else {
            return Err(Error::parse(CONTEXT, ln, "malformed symbol line"));
        };
        let pos: usize = rest[..space]
            .parse()
            .map_err(|_| Error::parse(CONTEXT, ln, "malformed symbol index"))?;
        let name = rest[space + 1..].to_string();
        match kind {
            "i" if pos < i => input_names[pos] = Some(name),
            "o" if pos < o => output_names[pos] = Some(name),
            "i" | "o" => return Err(Error::parse(CONTEXT, ln, "symbol index out of range")),
            _ => return Err(Error::parse(CONTEXT, ln, "unknown symbol kind")),
        }
    }

    let outputs: Vec<Lit> = out_raw
        .iter()
        .map(|&raw| lookup(&map, raw, 0))
        .collect::<Result<_>>()?;
    let out_names: Vec<String> = output_names
        .iter()
        .enumerate()
        .map(|(k, n)| n.clone().unwrap_or_else(|| format!("o{k}")))
        .collect();
    let mut g = b.finish(outputs, out_names);
    // Patch input names in place (builder was seeded with placeholders).
    let names: Vec<String> = input_names
        .iter()
        .enumerate()
        .map(|(k, n)| n.clone().unwrap_or_else(|| format!("i{k}")))
        .collect();
    g = rename_inputs(&g, names);
    Ok(g)
}

fn rename_inputs(g: &Aig, names: Vec<String>) -> Aig {
    let mut b = AigBuilder::new();
    for name in names {
        b.add_input(name);
    }
    for &(a, c) in g.ands() {
        b.and(a, c); // ids are identical, rebuilding preserves them
    }
    b.finish(g.outputs().to_vec(), g.output_names().to_vec())
}

/// Writes an [`Aig`] as `aag` text with a symbol table.
pub fn write_aiger_ascii(g: &Aig) -> String {
    let i = g.num_inputs();
    let a = g.node_count();
    let m = i + a;
    let mut s = format!("aag {m} {i} 0 {} {a}\n", g.num_outputs());
    for k in 0..i {
        s.push_str(&format!("{}\n", 2 * (k + 1)));
    }
    for &o in g.outputs() {
        s.push_str(&format!("{}\n", o.encoded()));
    }
    for idx in 0..a {
        let id = g.first_and_id() + idx as u32;
        let (f0, f1) = g.fanins(id);
        let (hi, lo) = if f0.encoded() >= f1.encoded() {
            (f0, f1)
        } else {
            (f1, f0)
        };
        s.push_str(&format!("{} {} {}\n", 2 * id, hi.encoded(), lo.encoded()));
    }
    for (k, name) in g.input_names().iter().enumerate() {
        s.push_str(&format!("i{k} {name}\n"));
    }
    for (k, name) in g.output_names().iter().enumerate() {
        s.push_str(&format!("o{k} {name}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aig::AigBuilder;
    use crate::sim::{simulate, SimBatch};

    #[test]
    fn constant_true_output() {
        let g = parse_aiger_ascii("aag 0 0 0 1 0\n1\n").unwrap();
        assert_eq!(g.num_inputs(), 0);
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.outputs()[0], Lit::TRUE);
    }

    #[test]
    fn header_counts_by_construction() {
        let mut b = AigBuilder::new();
        let x = b.add_input("x");
        let y = b.add_input("y");
        b.add_input("z");
        let t = b.xor(x, y); // 3 AND nodes for 3 inputs
        let g = b.finish(vec![t], vec!["o".into()]);
        let text = write_aiger_ascii(&g);
        assert!(text.starts_with("aag 6 3 0 1 3\n"), "got {text}");
    }

    #[test]
    fn round_trip_preserves_semantics_and_counts() {
        let text = "aag 7 2 0 2 5\n2\n4\n13\n15\n6 2 4\n8 3 5\n10 7 9\n12 2 11\n14 4 10\ni0 a\ni1 b\no0 y\no1 z\n";
        let g = parse_aiger_ascii(text).unwrap();
        let written = write_aiger_ascii(&g);
        let g2 = parse_aiger_ascii(&written).unwrap();
        assert_eq!(g.node_count(), g2.node_count());
        assert_eq!(g.num_inputs(), g2.num_inputs());
        assert_eq!(g.num_outputs(), g2.num_outputs());
        let batch = SimBatch::random(2, 1000, 11);
        let r0 = simulate(&g, &batch).unwrap();
        let r1 = simulate(&g2, &batch).unwrap();
        assert_eq!(r0.results, r1.results);
        assert_eq!(g2.input_names(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn rejects_latches_and_bad_literals() {
        assert!(parse_aiger_ascii("aag 1 0 1 0 0\n2 3\n").is_err());
        assert!(parse_aiger_ascii("aag 1 1 0 1 0\n2\n9\n").is_err());
        assert!(parse_aiger_ascii("oops\n").is_err());
        // Fanin above lhs: not topologically ordered.
        assert!(parse_aiger_ascii("aag 3 1 0 1 2\n2\n4\n4 6 2\n6 2 2\n").is_err());
    }
}
