//! Line-oriented text format for problem instances.
//!
//! Header line: `kind ℓ [k fns | edge_count | sub_count]`, then payload
//! lines. Best-of-Traps emits one permutation line and one optimum line per
//! sub-problem; MaxCut one `i j w` line per edge; worst-of-maxcuts nests one
//! complete maxcut block per sub-instance. Generator seeds travel in
//! `# seed N` comment lines so round-trips restore the full instance.
//! Bi-objective problems are two instance files referenced from a small
//! `mo` document. All files are UTF-8 with LF line endings.

use std::fmt::Write as _;
use std::path::Path;

use super::{BotInstance, Edge, MaxCutInstance, SingleInstance, TrapSubProblem, WorstOfMaxCutsInstance};
use crate::genotype::Genotype;
use crate::{Error, Result};

pub fn serialize_single(instance: &SingleInstance) -> String {
    let mut out = String::new();
    match instance {
        SingleInstance::Bot(b) => write_bot(&mut out, b),
        SingleInstance::MaxCut(m) => write_maxcut(&mut out, m),
        SingleInstance::WorstOfMaxCuts(w) => {
            let _ = writeln!(
                out,
                "worstofmaxcuts {} {}",
                w.vertex_count(),
                w.instances().len()
            );
            for m in w.instances() {
                write_maxcut(&mut out, m);
            }
        }
    }
    out
}

fn write_bot(out: &mut String, b: &BotInstance) {
    let _ = writeln!(out, "bot {} {} {}", b.length(), b.block_size(), b.fns());
    let _ = writeln!(out, "# seed {}", b.seed());
    for sp in b.sub_problems() {
        let perm: Vec<String> = sp.permutation().iter().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "{}", perm.join(" "));
        let _ = writeln!(out, "{}", sp.optimum().to_bitstring());
    }
}

fn write_maxcut(out: &mut String, m: &MaxCutInstance) {
    let _ = writeln!(out, "maxcut {} {}", m.vertex_count(), m.edges().len());
    let _ = writeln!(out, "# seed {}", m.seed());
    for e in m.edges() {
        let _ = writeln!(out, "{} {} {}", e.a, e.b, e.weight);
    }
}

/// An `mo` document referencing the two objective instance files by path
/// (interpreted relative to the document's own location).
pub fn serialize_mo_reference(length: usize, paths: [&str; 2]) -> String {
    format!("mo {length} 2\n{}\n{}\n", paths[0], paths[1])
}

pub fn parse_mo_reference(text: &str) -> Result<(usize, [String; 2])> {
    let mut lines = Lines::new(text);
    let header = lines.next_content()?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 || fields[0] != "mo" || fields[2] != "2" {
        return lines.fail("expected header `mo <length> 2`");
    }
    let length = lines.parse_field::<usize>(fields[1], "length")?;
    let first = lines.next_content()?.trim().to_string();
    let second = lines.next_content()?.trim().to_string();
    Ok((length, [first, second]))
}

/// Cursor over content lines; comments are skipped but a `# seed N` comment
/// is captured for the instance currently being read.
struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
    seed: Option<u64>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            iter: text.lines().enumerate(),
            line: 0,
            seed: None,
        }
    }

    fn next_content(&mut self) -> Result<&'a str> {
        for (idx, raw) in self.iter.by_ref() {
            self.line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                let mut parts = comment.split_whitespace();
                if parts.next() == Some("seed") {
                    if let Some(v) = parts.next().and_then(|v| v.parse().ok()) {
                        self.seed = Some(v);
                    }
                }
                continue;
            }
            return Ok(raw);
        }
        self.line += 1;
        Err(Error::Parse {
            line: self.line,
            message: "unexpected end of document".into(),
        })
    }

    fn take_seed(&mut self) -> u64 {
        self.seed.take().unwrap_or(0)
    }

    fn fail<T>(&self, message: &str) -> Result<T> {
        Err(Error::Parse {
            line: self.line,
            message: message.into(),
        })
    }

    fn parse_field<T: std::str::FromStr>(&self, field: &str, what: &str) -> Result<T> {
        field.parse().map_err(|_| Error::Parse {
            line: self.line,
            message: format!("invalid {what}: {field:?}"),
        })
    }
}

pub fn parse_single(text: &str) -> Result<SingleInstance> {
    let mut lines = Lines::new(text);
    let header = lines.next_content()?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    match fields.first().copied() {
        Some("bot") => parse_bot(&mut lines, &fields).map(SingleInstance::Bot),
        Some("maxcut") => parse_maxcut(&mut lines, &fields).map(SingleInstance::MaxCut),
        Some("worstofmaxcuts") => {
            if fields.len() != 3 {
                return lines.fail("expected header `worstofmaxcuts <vertices> <sub_count>`");
            }
            let vertices: usize = lines.parse_field(fields[1], "vertex count")?;
            let subs: usize = lines.parse_field(fields[2], "sub-instance count")?;
            let mut instances = Vec::with_capacity(subs);
            for _ in 0..subs {
                let sub_header = lines.next_content()?;
                let sub_fields: Vec<&str> = sub_header.split_whitespace().collect();
                if sub_fields.first().copied() != Some("maxcut") {
                    return lines.fail("expected nested `maxcut` block");
                }
                let inst = parse_maxcut(&mut lines, &sub_fields)?;
                if inst.vertex_count() != vertices {
                    return lines.fail("sub-instance vertex count differs from header");
                }
                instances.push(inst);
            }
            WorstOfMaxCutsInstance::new(instances).map(SingleInstance::WorstOfMaxCuts)
        }
        _ => lines.fail("unknown instance kind in header"),
    }
}

fn parse_bot(lines: &mut Lines, fields: &[&str]) -> Result<BotInstance> {
    if fields.len() != 4 {
        return lines.fail("expected header `bot <length> <block_size> <fns>`");
    }
    let length: usize = lines.parse_field(fields[1], "length")?;
    let block_size: u32 = lines.parse_field(fields[2], "block size")?;
    let fns: usize = lines.parse_field(fields[3], "fns")?;
    if fns == 0 {
        return lines.fail("fns must be at least 1");
    }
    let mut subs = Vec::with_capacity(fns);
    for _ in 0..fns {
        let perm_line = lines.next_content()?;
        let permutation = perm_line
            .split_whitespace()
            .map(|f| lines.parse_field::<u32>(f, "permutation index"))
            .collect::<Result<Vec<u32>>>()?;
        let opt_line = lines.next_content()?;
        let optimum: Genotype = opt_line.trim().parse().map_err(|_| Error::Parse {
            line: lines.line,
            message: "invalid optimum bit string".into(),
        })?;
        if optimum.len() != length || permutation.len() != length {
            return lines.fail("sub-problem line length differs from header length");
        }
        let sub = TrapSubProblem::new(permutation, optimum, block_size).map_err(|e| {
            Error::Parse {
                line: lines.line,
                message: e.to_string(),
            }
        })?;
        subs.push(sub);
    }
    let seed = lines.take_seed();
    BotInstance::new(subs, seed)
}

fn parse_maxcut(lines: &mut Lines, fields: &[&str]) -> Result<MaxCutInstance> {
    if fields.len() != 3 {
        return lines.fail("expected header `maxcut <vertices> <edge_count>`");
    }
    let vertices: usize = lines.parse_field(fields[1], "vertex count")?;
    let edge_count: usize = lines.parse_field(fields[2], "edge count")?;
    let mut edges = Vec::with_capacity(edge_count);
    for _ in 0..edge_count {
        let line = lines.next_content()?;
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return lines.fail("expected edge line `i j w`");
        }
        edges.push(Edge {
            a: lines.parse_field(parts[0], "edge endpoint")?,
            b: lines.parse_field(parts[1], "edge endpoint")?,
            weight: lines.parse_field(parts[2], "edge weight")?,
        });
    }
    let seed = lines.take_seed();
    MaxCutInstance::new(vertices, edges, seed).map_err(|e| Error::Parse {
        line: lines.line,
        message: e.to_string(),
    })
}

pub fn write_single_instance(path: &Path, instance: &SingleInstance) -> Result<()> {
    std::fs::write(path, serialize_single(instance))?;
    Ok(())
}

pub fn read_single_instance(path: &Path) -> Result<SingleInstance> {
    parse_single(&std::fs::read_to_string(path)?)
}
