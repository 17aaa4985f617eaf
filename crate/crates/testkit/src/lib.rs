//! Exhaustive solvers for small graph problems. They work on plain edge
//! lists with vertices `1..=n` and share no code with the library under test.

pub type Edge = (usize, usize);

/// Calls `f` on every vector in `{0..k}^n`, in lexicographic order.
fn for_each_labeling(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k == 0 {
        if n == 0 {
            f(&[]);
        }
        return;
    }
    let mut x = vec![0usize; n];
    loop {
        f(&x);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            x[i] += 1;
            if x[i] < k {
                break;
            }
            x[i] = 0;
        }
    }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..1 << n).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
}

pub fn is_proper_coloring(edges: &[Edge], colors: &[usize]) -> bool {
    edges.iter().all(|&(u, v)| colors[u - 1] != colors[v - 1])
}

pub fn chromatic_number(n: usize, edges: &[Edge]) -> usize {
    (0..=n)
        .find(|&k| {
            let mut found = false;
            for_each_labeling(n, k, |c| found |= is_proper_coloring(edges, c));
            found
        })
        .expect("n colors always suffice")
}

fn cut_size(edges: &[Edge], side: &[bool]) -> usize {
    edges
        .iter()
        .filter(|&&(u, v)| side[u - 1] != side[v - 1])
        .count()
}

pub fn max_cut(n: usize, edges: &[Edge]) -> usize {
    subsets(n).map(|s| cut_size(edges, &s)).max().unwrap_or(0)
}

/// Fewest edges whose removal leaves a bipartite graph.
pub fn edge_bipartization(n: usize, edges: &[Edge]) -> usize {
    subsets(n)
        .map(|s| edges.iter().filter(|&&(u, v)| s[u - 1] == s[v - 1]).count())
        .min()
        .unwrap_or(0)
}

pub fn max_independent_set(n: usize, edges: &[Edge]) -> usize {
    subsets(n)
        .filter(|s| edges.iter().all(|&(u, v)| !(s[u - 1] && s[v - 1])))
        .map(|s| s.iter().filter(|&&b| b).count())
        .max()
        .unwrap_or(0)
}

pub fn min_vertex_cover(n: usize, edges: &[Edge]) -> usize {
    subsets(n)
        .filter(|s| edges.iter().all(|&(u, v)| s[u - 1] || s[v - 1]))
        .map(|s| s.iter().filter(|&&b| b).count())
        .min()
        .unwrap_or(0)
}

fn bipartite(n: usize, edges: &[Edge], keep: &[bool]) -> bool {
    let mut found = false;
    for_each_labeling(n, 2, |c| {
        found |= edges
            .iter()
            .filter(|&&(u, v)| keep[u - 1] && keep[v - 1])
            .all(|&(u, v)| c[u - 1] != c[v - 1]);
    });
    found || n == 0
}

/// Fewest vertices whose deletion leaves a bipartite graph.
pub fn odd_cycle_transversal(n: usize, edges: &[Edge]) -> usize {
    subsets(n)
        .filter(|del| {
            let keep: Vec<bool> = del.iter().map(|&d| !d).collect();
            bipartite(n, edges, &keep)
        })
        .map(|s| s.iter().filter(|&&b| b).count())
        .min()
        .unwrap_or(0)
}

/// Fewest cut edges over all partitions placing terminal `i` in part `i`.
pub fn multiway_cut(n: usize, edges: &[Edge], terminals: &[usize]) -> usize {
    let t = terminals.len();
    let mut best = usize::MAX;
    for_each_labeling(n, t, |part| {
        if terminals.iter().enumerate().all(|(i, &s)| part[s - 1] == i) {
            best = best.min(
                edges
                    .iter()
                    .filter(|&&(u, v)| part[u - 1] != part[v - 1])
                    .count(),
            );
        }
    });
    best
}

/// Most satisfied edges; `perm(u, v)` maps labels `0..t` of `u` to labels of
/// `v` for the edge `(u, v)` with `u < v`.
pub fn unique_games(
    n: usize,
    edges: &[Edge],
    t: usize,
    perm: impl Fn(usize, usize) -> Vec<usize>,
) -> usize {
    let perms: Vec<Vec<usize>> = edges.iter().map(|&(u, v)| perm(u, v)).collect();
    let mut best = 0;
    for_each_labeling(n, t, |x| {
        let sat = edges
            .iter()
            .zip(&perms)
            .filter(|(&(u, v), p)| p[x[u - 1]] == x[v - 1])
            .count();
        best = best.max(sat);
    });
    best
}

/// Whether some map `x` with `x(v) ∈ lists[v - 1]` sends every edge to an
/// edge (or loop) of the pattern graph `h_edges`.
pub fn list_h_colorable(n: usize, edges: &[Edge], lists: &[Vec<usize>], h_edges: &[Edge]) -> bool {
    let adjacent = |a: usize, b: usize| h_edges.contains(&(a, b)) || h_edges.contains(&(b, a));
    let k = lists.iter().map(Vec::len).max().unwrap_or(0);
    let mut found = false;
    for_each_labeling(n, k, |pick| {
        if found || (0..n).any(|v| pick[v] >= lists[v].len()) {
            return;
        }
        let x = |v: usize| lists[v - 1][pick[v - 1]];
        found = edges.iter().all(|&(u, v)| adjacent(x(u), x(v)));
    });
    found
}

pub fn complete(n: usize) -> Vec<Edge> {
    (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .collect()
}

pub fn cycle(n: usize) -> Vec<Edge> {
    let mut e: Vec<Edge> = (1..n).map(|u| (u, u + 1)).collect();
    if n >= 3 {
        e.push((1, n));
    }
    e
}
