//! Line-based decomposition format.
//!
//! ```text
//! c comment
//! b 1 1 2
//! b 2 2 3
//! e 1 2
//! ```
//!
//! `b <id> <vertices...>` declares a node, `e <id> <id>` a tree edge. Node
//! ids are arbitrary non-negative integers; lines starting with `c` or `#`
//! are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{NiceTreeDecomposition, NodeKind, TreeDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TdParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: node id {id} declared twice")]
    DuplicateNode { line: usize, id: u64 },
    #[error("line {line}: edge mentions undeclared node {id}")]
    UnknownNode { line: usize, id: u64 },
}

pub fn parse_td(text: &str) -> Result<TreeDecomposition, TdParseError> {
    let mut ids: BTreeMap<u64, usize> = BTreeMap::new();
    let mut bags = Vec::new();
    let mut raw_edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let mut toks = line.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        let nums: Result<Vec<u64>, _> = toks.map(str::parse::<u64>).collect();
        let syntax = |msg: &str| TdParseError::Syntax {
            line: line_no,
            msg: msg.to_string(),
        };
        match tag {
            t if t.starts_with('c') || t.starts_with('#') => continue,
            "b" => {
                let nums = nums.map_err(|_| syntax("expected integers"))?;
                let (&id, verts) = nums
                    .split_first()
                    .ok_or_else(|| syntax("missing node id"))?;
                if verts.contains(&0) {
                    return Err(syntax("vertices are numbered from 1"));
                }
                if ids.insert(id, bags.len()).is_some() {
                    return Err(TdParseError::DuplicateNode { line: line_no, id });
                }
                bags.push(verts.iter().map(|&v| v as usize).collect::<Vec<_>>());
            }
            "e" => {
                let nums = nums.map_err(|_| syntax("expected integers"))?;
                if nums.len() != 2 {
                    return Err(syntax("an edge needs exactly two node ids"));
                }
                raw_edges.push((line_no, nums[0], nums[1]));
            }
            other => return Err(syntax(&format!("unknown line type {other:?}"))),
        }
    }
    let mut edges = Vec::new();
    for (line, a, b) in raw_edges {
        let lookup = |id: u64| {
            ids.get(&id)
                .copied()
                .ok_or(TdParseError::UnknownNode { line, id })
        };
        edges.push((lookup(a)?, lookup(b)?));
    }
    Ok(TreeDecomposition::new(bags, edges))
}

/// Writes nodes with ids `1..`.
pub fn write_td(td: &TreeDecomposition) -> String {
    let mut out = String::new();
    for (i, bag) in td.bags.iter().enumerate() {
        write!(out, "b {}", i + 1).unwrap();
        for v in bag {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        writeln!(out, "e {} {}", a + 1, b + 1).unwrap();
    }
    out
}

/// One line per node: `<id> <kind> [vertex] : <bag> ; <children>`.
pub fn write_nice(ntd: &NiceTreeDecomposition) -> String {
    let mut out = String::new();
    let roots: Vec<String> = ntd.roots.iter().map(|r| r.to_string()).collect();
    writeln!(out, "roots {}", roots.join(" ")).unwrap();
    for (i, node) in ntd.nodes.iter().enumerate() {
        let kind = match node.kind {
            NodeKind::Leaf => "leaf".to_string(),
            NodeKind::Introduce(v) => format!("introduce {v}"),
            NodeKind::Forget(v) => format!("forget {v}"),
            NodeKind::Join => "join".to_string(),
        };
        let bag: Vec<String> = node.bag.iter().map(|v| v.to_string()).collect();
        let kids: Vec<String> = node.children.iter().map(|c| c.to_string()).collect();
        writeln!(out, "{i} {kind} : {} ; {}", bag.join(" "), kids.join(" ")).unwrap();
    }
    out
}
