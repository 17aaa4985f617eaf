//! Graph input format.
//!
//! ```text
//! c triangle with terminals
//! p 3 3
//! e 1 2
//! e 2 3
//! e 1 3
//! t 1 3
//! ```
//!
//! Besides the `p <n> <m>` header and `e <u> <v>` edges, a file may carry
//! `t <s1> <s2> ...` (terminals), `pi <u> <v> <i1> ... <it>` (the image list
//! of a label permutation on `1..=t` for edge `uv`), `l <v> <c1> ...` (the
//! list of pattern vertices allowed at `v`), and a pattern graph given by
//! `hp <k>` (vertices `1..=k`) and `he <a> <b>` edges, where `a = b` is a
//! loop. Lines starting with `c` or `#` are comments.

use std::collections::{BTreeMap, BTreeSet};

use crate::csp::Var;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PatternGraph {
    pub k: usize,
    /// Normalized `(a, b)` with `a <= b`; `a == b` is a loop.
    pub edges: BTreeSet<(usize, usize)>,
}

impl PatternGraph {
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphInput {
    pub n: usize,
    /// Normalized `(u, v)` with `u < v`, sorted and duplicate-free.
    pub edges: Vec<(Var, Var)>,
    /// Permutation per edge, keyed by the normalized edge, as the image list
    /// of `1..=t` read from the smaller endpoint to the larger.
    pub perms: BTreeMap<(Var, Var), Vec<i64>>,
    pub terminals: Vec<Var>,
    pub lists: BTreeMap<Var, Vec<i64>>,
    pub pattern: Option<PatternGraph>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing \"p <n> <m>\" header")]
    MissingHeader,
    #[error("header announces {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("edge {0}-{1} is out of range")]
    EdgeOutOfRange(Var, Var),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Var),
    #[error("permutation on edge {0}-{1} is not a bijection of 1..=t")]
    NotAPermutation(Var, Var),
    #[error("permutation given for {0}-{1}, which is not an edge")]
    PermutationOnNonEdge(Var, Var),
    #[error("permutations have different lengths")]
    MixedLabelCounts,
    #[error("terminal {0} is repeated or out of range")]
    BadTerminal(Var),
    #[error("list of vertex {0} names a vertex outside the pattern graph")]
    BadList(Var),
}

impl GraphInput {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Var, Var)>) -> Self {
        let mut e: Vec<(Var, Var)> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        e.sort_unstable();
        e.dedup();
        GraphInput {
            n,
            edges: e,
            ..Default::default()
        }
    }

    pub fn complete(n: usize) -> Self {
        GraphInput::new(n, (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))))
    }

    pub fn path(n: usize) -> Self {
        GraphInput::new(n, (1..n).map(|u| (u, u + 1)))
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = GraphInput::path(n);
        if n >= 3 {
            g.edges.push((1, n));
            g.edges.sort_unstable();
        }
        g
    }

    /// Label count implied by the permutations, if any are given.
    pub fn label_count(&self) -> Option<usize> {
        self.perms.values().next().map(Vec::len)
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        for &(u, v) in &self.edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if u == 0 || v > self.n {
                return Err(GraphError::EdgeOutOfRange(u, v));
            }
        }
        let t = self.label_count();
        for (&(u, v), p) in &self.perms {
            if self.edges.binary_search(&(u, v)).is_err() {
                return Err(GraphError::PermutationOnNonEdge(u, v));
            }
            if Some(p.len()) != t {
                return Err(GraphError::MixedLabelCounts);
            }
            let mut sorted = p.clone();
            sorted.sort_unstable();
            if sorted != (1..=p.len() as i64).collect::<Vec<_>>() {
                return Err(GraphError::NotAPermutation(u, v));
            }
        }
        let mut seen = BTreeSet::new();
        for &s in &self.terminals {
            if s == 0 || s > self.n || !seen.insert(s) {
                return Err(GraphError::BadTerminal(s));
            }
        }
        if let Some(h) = &self.pattern {
            for (&v, list) in &self.lists {
                if list.iter().any(|&c| c < 1 || c as usize > h.k) {
                    return Err(GraphError::BadList(v));
                }
            }
        }
        Ok(())
    }
}

pub fn parse_graph(text: &str) -> Result<GraphInput, GraphError> {
    let mut g = GraphInput::default();
    let mut header: Option<(usize, Option<usize>)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        if tag.starts_with('c') || tag.starts_with('#') {
            continue;
        }
        let rest: Vec<&str> = toks.collect();
        let syntax = |msg: &str| GraphError::Syntax {
            line,
            msg: msg.to_string(),
        };
        let ints = |toks: &[&str]| -> Result<Vec<i64>, GraphError> {
            toks.iter()
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| syntax(&format!("bad integer {t:?}")))
                })
                .collect()
        };
        let vertex = |x: i64| -> Result<usize, GraphError> {
            usize::try_from(x).map_err(|_| syntax("vertices are positive"))
        };
        match tag {
            "p" => {
                // tolerate a format word such as "edge"
                let nums: Vec<&str> = rest
                    .iter()
                    .copied()
                    .filter(|t| t.parse::<i64>().is_ok())
                    .collect();
                let nums = ints(&nums)?;
                match nums.as_slice() {
                    [n] => header = Some((vertex(*n)?, None)),
                    [n, m] => header = Some((vertex(*n)?, Some(vertex(*m)?))),
                    _ => return Err(syntax("expected \"p <n> <m>\"")),
                }
            }
            "e" => {
                let nums = ints(&rest)?;
                let [u, v] = nums[..] else {
                    return Err(syntax("expected \"e <u> <v>\""));
                };
                edges.push((vertex(u)?, vertex(v)?));
            }
            "t" => {
                for x in ints(&rest)? {
                    g.terminals.push(vertex(x)?);
                }
            }
            "pi" => {
                let nums = ints(&rest)?;
                if nums.len() < 3 {
                    return Err(syntax("expected \"pi <u> <v> <images...>\""));
                }
                let (u, v) = (vertex(nums[0])?, vertex(nums[1])?);
                let images = nums[2..].to_vec();
                let (key, perm) = if u < v {
                    ((u, v), images)
                } else {
                    // store the inverse, read from the smaller endpoint
                    let mut inv = vec![0i64; images.len()];
                    for (i, &img) in images.iter().enumerate() {
                        if img >= 1 && (img as usize) <= images.len() {
                            inv[img as usize - 1] = i as i64 + 1;
                        }
                    }
                    ((v, u), inv)
                };
                if g.perms.insert(key, perm).is_some() {
                    return Err(syntax("permutation given twice for one edge"));
                }
            }
            "l" => {
                let nums = ints(&rest)?;
                let (&v, list) = nums
                    .split_first()
                    .ok_or_else(|| syntax("expected \"l <v> ...\""))?;
                let mut list = list.to_vec();
                list.sort_unstable();
                list.dedup();
                g.lists.insert(vertex(v)?, list);
            }
            "hp" => {
                let nums = ints(&rest)?;
                let [k] = nums[..] else {
                    return Err(syntax("expected \"hp <k>\""));
                };
                g.pattern.get_or_insert_with(Default::default).k = vertex(k)?;
            }
            "he" => {
                let nums = ints(&rest)?;
                let [a, b] = nums[..] else {
                    return Err(syntax("expected \"he <a> <b>\""));
                };
                let (a, b) = (vertex(a)?, vertex(b)?);
                g.pattern
                    .get_or_insert_with(Default::default)
                    .edges
                    .insert((a.min(b), a.max(b)));
            }
            other => return Err(syntax(&format!("unknown line type {other:?}"))),
        }
    }
    let (n, m) = header.ok_or(GraphError::MissingHeader)?;
    g.n = n;
    if let Some(h) = &g.pattern {
        if let Some(&(a, b)) = h.edges.iter().find(|&&(a, b)| a == 0 || b > h.k) {
            return Err(GraphError::EdgeOutOfRange(a, b));
        }
    }
    for &(u, v) in &edges {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
    }
    let found = edges.len();
    let normalized = GraphInput::new(n, edges);
    if let Some(m) = m {
        if m != found {
            return Err(GraphError::EdgeCount { expected: m, found });
        }
    }
    g.edges = normalized.edges;
    g.validate()?;
    Ok(g)
}

pub fn write_graph(g: &GraphInput) -> String {
    use std::fmt::Write as _;
    let mut out = format!("p {} {}\n", g.n, g.edges.len());
    for (u, v) in &g.edges {
        writeln!(out, "e {u} {v}").unwrap();
    }
    if !g.terminals.is_empty() {
        let ts: Vec<String> = g.terminals.iter().map(|t| t.to_string()).collect();
        writeln!(out, "t {}", ts.join(" ")).unwrap();
    }
    for ((u, v), p) in &g.perms {
        let ps: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        writeln!(out, "pi {u} {v} {}", ps.join(" ")).unwrap();
    }
    if let Some(h) = &g.pattern {
        writeln!(out, "hp {}", h.k).unwrap();
        for (a, b) in &h.edges {
            writeln!(out, "he {a} {b}").unwrap();
        }
    }
    for (v, l) in &g.lists {
        let ls: Vec<String> = l.iter().map(|x| x.to_string()).collect();
        writeln!(out, "l {v} {}", ls.join(" ")).unwrap();
    }
    out
}
