//! Builders and recognizers for star, ring (wheel), grid and
//! complete-with-loops graphs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::model::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("{family} needs {requirement}")]
    BadSize {
        family: &'static str,
        requirement: &'static str,
    },
}

pub fn grid_node_id(row: usize, col: usize) -> String {
    format!("r{row}c{col}")
}

/// Satellites `x1..xn` around a centre `C`.
pub fn build_star(n: usize) -> Result<Graph, TopologyError> {
    if n == 0 {
        return Err(TopologyError::BadSize {
            family: "star",
            requirement: "n >= 1",
        });
    }
    let mut g = Graph::new();
    g.add_node("C");
    for i in 1..=n {
        let id = format!("x{i}");
        g.add_node(id.clone());
        g.add_edge(&id, "C").expect("nodes exist");
    }
    Ok(g)
}

/// Ring nodes `x1..xn` in a cycle, each joined to the centre `x0`.
pub fn build_ring(n: usize) -> Result<Graph, TopologyError> {
    if n < 2 {
        return Err(TopologyError::BadSize {
            family: "ring",
            requirement: "n >= 2",
        });
    }
    let mut g = Graph::new();
    for i in 0..=n {
        g.add_node(format!("x{i}"));
    }
    for i in 1..=n {
        let next = i % n + 1;
        g.add_edge(&format!("x{i}"), &format!("x{next}"))
            .expect("nodes exist");
        g.add_edge(&format!("x{i}"), "x0").expect("nodes exist");
    }
    Ok(g)
}

/// The `m`-row, `n`-column lattice with nodes `r{i}c{j}`.
pub fn build_grid(m: usize, n: usize) -> Result<Graph, TopologyError> {
    if m == 0 || n == 0 {
        return Err(TopologyError::BadSize {
            family: "grid",
            requirement: "both dimensions >= 1",
        });
    }
    let mut g = Graph::new();
    for i in 1..=m {
        for j in 1..=n {
            g.add_node(grid_node_id(i, j));
        }
    }
    for i in 1..=m {
        for j in 1..=n {
            if i < m {
                g.add_edge(&grid_node_id(i, j), &grid_node_id(i + 1, j))
                    .expect("nodes exist");
            }
            if j < n {
                g.add_edge(&grid_node_id(i, j), &grid_node_id(i, j + 1))
                    .expect("nodes exist");
            }
        }
    }
    Ok(g)
}

/// Nodes `x1..xn`, every pair joined, every node with a loop.
pub fn build_complete_with_loops(n: usize) -> Result<Graph, TopologyError> {
    if n == 0 {
        return Err(TopologyError::BadSize {
            family: "complete graph",
            requirement: "n >= 1",
        });
    }
    let mut g = Graph::new();
    let ids: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    for id in &ids {
        g.add_node(id.clone());
    }
    for (i, a) in ids.iter().enumerate() {
        for b in &ids[i..] {
            g.add_edge(a, b).expect("nodes exist");
        }
    }
    Ok(g)
}

fn has_loops(g: &Graph) -> bool {
    g.edges().any(|e| e.is_loop())
}

/// The centre of a star graph. For the two-node star either endpoint
/// qualifies and the smaller id is returned.
pub fn is_star(g: &Graph) -> Option<String> {
    let n = g.node_count();
    if n < 2 || g.edge_count() != n - 1 || has_loops(g) {
        return None;
    }
    g.nodes().find(|c| g.degree(c) == n - 1).map(str::to_string)
}

/// The centre of a wheel: a hub adjacent to every other node, which form a
/// single cycle (a single edge when there are two of them). For the wheel on
/// four nodes every node qualifies and the smallest id is returned.
pub fn is_ring(g: &Graph) -> Option<String> {
    let total = g.node_count();
    if total < 3 || has_loops(g) {
        return None;
    }
    let rim = total - 1;
    let expected_edges = if rim == 2 { 3 } else { 2 * rim };
    if g.edge_count() != expected_edges {
        return None;
    }
    g.nodes()
        .filter(|c| g.degree(c) == rim)
        .find(|c| rim_is_cycle(g, c))
        .map(str::to_string)
}

fn rim_is_cycle(g: &Graph, center: &str) -> bool {
    let rim: Vec<&str> = g.nodes().filter(|n| *n != center).collect();
    let rim_degree = |n: &str| g.neighbors(n).into_iter().filter(|m| *m != center).count();
    if rim.len() == 2 {
        return g.has_edge(rim[0], rim[1]);
    }
    if rim.iter().any(|n| rim_degree(n) != 2) {
        return false;
    }
    // 2-regular on the rim; connected means one cycle.
    let mut seen = BTreeSet::from([rim[0]]);
    let mut queue = VecDeque::from([rim[0]]);
    while let Some(n) = queue.pop_front() {
        for m in g.neighbors(n) {
            if m != center && seen.insert(m) {
                queue.push_back(m);
            }
        }
    }
    seen.len() == rim.len()
}

pub fn is_complete_with_loops(g: &Graph) -> bool {
    let n = g.node_count();
    n >= 1 && g.edge_count() == n * (n - 1) / 2 + n && g.nodes().all(|x| g.has_loop(x) && g.degree(x) == n)
}

fn bfs_distances<'g>(g: &'g Graph, from: &str) -> BTreeMap<&'g str, usize> {
    let mut dist = BTreeMap::new();
    let start = g.nodes().find(|n| *n == from).expect("node exists");
    dist.insert(start, 0);
    let mut queue = VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        let d = dist[n];
        for m in g.neighbors(n) {
            if !dist.contains_key(m) {
                dist.insert(m, d + 1);
                queue.push_back(m);
            }
        }
    }
    dist
}

/// Dimensions `(rows, cols)` of a grid graph, with `rows <= cols` since the
/// two orientations are isomorphic.
pub fn is_grid(g: &Graph) -> Option<(usize, usize)> {
    let total = g.node_count();
    if total == 0 || has_loops(g) {
        return None;
    }
    if total == 1 {
        return (g.edge_count() == 0).then_some((1, 1));
    }
    let corners: Vec<&str> = g.nodes().filter(|n| g.degree(n) <= 2).collect();
    for m in 1..=total {
        if !total.is_multiple_of(m) {
            continue;
        }
        let n = total / m;
        if m > n || g.edge_count() != m * (n - 1) + n * (m - 1) {
            continue;
        }
        for &c0 in &corners {
            let d0 = bfs_distances(g, c0);
            if d0.len() != total {
                return None;
            }
            for &c1 in &corners {
                if d0[c1] != n - 1 {
                    continue;
                }
                let d1 = bfs_distances(g, c1);
                if embeds_as_grid(g, &d0, &d1, m, n) {
                    return Some((m, n));
                }
            }
        }
    }
    None
}

/// Recovers coordinates from distances to two adjacent corners and checks
/// that the graph is exactly the lattice on them.
fn embeds_as_grid(
    g: &Graph,
    d0: &BTreeMap<&str, usize>,
    d1: &BTreeMap<&str, usize>,
    m: usize,
    n: usize,
) -> bool {
    let mut coords: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    let mut used = BTreeSet::new();
    for (&node, &a) in d0 {
        let b = d1[node];
        // a = row + col, b = row + (n - 1 - col), zero-based
        let sum = a + b + 1;
        if sum < n || !(sum - n).is_multiple_of(2) {
            return false;
        }
        let row = (sum - n) / 2;
        if a < row {
            return false;
        }
        let col = a - row;
        if row >= m || col >= n || !used.insert((row, col)) {
            return false;
        }
        coords.insert(node, (row, col));
    }
    g.edges().all(|e| {
        let (x, y) = e.endpoints();
        let (r1, c1) = coords[x];
        let (r2, c2) = coords[y];
        r1.abs_diff(r2) + c1.abs_diff(c2) == 1
    })
}

/// Largest number of incident edges; a loop adds one.
pub fn max_degree(g: &Graph) -> usize {
    g.nodes().map(|n| g.degree(n)).max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Star { center: String },
    Ring { center: String },
    Grid { rows: usize, cols: usize },
    CompleteWithLoops,
}

/// Every named family the graph belongs to.
pub fn classify(g: &Graph) -> Vec<Family> {
    let mut out = Vec::new();
    if let Some(center) = is_star(g) {
        out.push(Family::Star { center });
    }
    if let Some(center) = is_ring(g) {
        out.push(Family::Ring { center });
    }
    if let Some((rows, cols)) = is_grid(g) {
        out.push(Family::Grid { rows, cols });
    }
    if is_complete_with_loops(g) {
        out.push(Family::CompleteWithLoops);
    }
    out
}
