//! Exact graph coloring.
//!
//! `color_exact` decides k-colorability with a DSATUR-ordered branch and
//! bound: vertices are picked by saturation degree, candidate colors are
//! limited to one fresh color beyond the highest used so far, and a greedy
//! clique is pre-colored to break color symmetry. Intended for the coloring
//! graphs this crate builds (tens of vertices, occasionally a couple hundred);
//! not a general-purpose solver.

use crate::ugraph::SimpleGraph;
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

/// Colors any proper coloring may use: `0..budget`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub budget: usize,
    pub color_of: Vec<usize>,
}

impl Coloring {
    pub fn is_proper(&self, g: &SimpleGraph) -> bool {
        if self.color_of.len() != g.vertex_count() {
            return false;
        }
        if self.color_of.iter().any(|&c| c >= self.budget) {
            return false;
        }
        for u in 0..g.vertex_count() {
            for &v in g.neighbors(u) {
                if v > u && self.color_of[u] == self.color_of[v] {
                    return false;
                }
            }
        }
        true
    }

    pub fn colors_used(&self) -> usize {
        self.color_of.iter().map(|&c| c + 1).max().unwrap_or(0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("deadline exceeded")]
    Timeout,
    #[error("color budget {0} exceeds the 64-color limit")]
    BudgetTooLarge(usize),
    #[error("chromatic number is at least {got}, oracle cap is {cap}")]
    Cap { got: usize, cap: usize },
}

const UNSET: usize = usize::MAX;

/// Deterministic maximal clique, returned ascending: seed with the
/// highest-degree vertex, then admit vertices (degree descending, index
/// ascending) adjacent to everything picked so far.
pub fn greedy_clique(g: &SimpleGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut clique: Vec<usize> = Vec::new();
    for v in order {
        if clique.iter().all(|&u| g.adjacent(u, v)) {
            clique.push(v);
        }
    }
    clique.sort_unstable();
    clique
}

struct Search<'a> {
    g: &'a SimpleGraph,
    budget: usize,
    color_of: Vec<usize>,
    /// Bit c set iff some neighbor has color c.
    mask: Vec<u64>,
    /// counts[v][c] = colored-c neighbors of v; drives mask bit clearing.
    counts: Vec<Vec<u32>>,
    uncolored: usize,
    deadline: Option<Instant>,
    ticks: u64,
}

impl Search<'_> {
    fn assign(&mut self, v: usize, c: usize) {
        self.color_of[v] = c;
        self.uncolored -= 1;
        for &u in self.g.neighbors(v) {
            if self.counts[u][c] == 0 {
                self.mask[u] |= 1 << c;
            }
            self.counts[u][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.color_of[v] = UNSET;
        self.uncolored += 1;
        for &u in self.g.neighbors(v) {
            self.counts[u][c] -= 1;
            if self.counts[u][c] == 0 {
                self.mask[u] &= !(1 << c);
            }
        }
    }

    fn select(&self) -> usize {
        let mut best = UNSET;
        let mut key = (0usize, 0usize);
        for v in 0..self.g.vertex_count() {
            if self.color_of[v] != UNSET {
                continue;
            }
            let cand = (self.mask[v].count_ones() as usize, self.g.degree(v));
            if best == UNSET || cand > key {
                best = v;
                key = cand;
            }
        }
        best
    }

    fn go(&mut self, max_used: usize) -> Result<bool, ColoringError> {
        if self.ticks & 0xFF == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(ColoringError::Timeout);
                }
            }
        }
        self.ticks += 1;
        if self.uncolored == 0 {
            return Ok(true);
        }
        let v = self.select();
        // One fresh color at most: unused colors are interchangeable.
        let limit = (self.budget - 1).min(max_used + 1);
        for c in 0..=limit {
            if self.mask[v] & (1 << c) != 0 {
                continue;
            }
            self.assign(v, c);
            if self.go(max_used.max(c))? {
                return Ok(true);
            }
            self.unassign(v, c);
        }
        Ok(false)
    }
}

/// Finds a proper coloring with at most `budget` colors, or proves none
/// exists. The search is deterministic; `_seed` is accepted for interface
/// uniformity. `Ok(None)` is a proof of non-colorability, `Err(Timeout)` is
/// not.
pub fn color_exact(
    g: &SimpleGraph,
    budget: usize,
    _seed: u64,
    deadline: Option<Instant>,
) -> Result<Option<Coloring>, ColoringError> {
    if budget > 64 {
        return Err(ColoringError::BudgetTooLarge(budget));
    }
    let n = g.vertex_count();
    if n == 0 {
        return Ok(Some(Coloring { budget, color_of: Vec::new() }));
    }
    if budget == 0 {
        return Ok(None);
    }
    let clique = greedy_clique(g);
    if clique.len() > budget {
        return Ok(None);
    }
    let mut s = Search {
        g,
        budget,
        color_of: vec![UNSET; n],
        mask: vec![0; n],
        counts: vec![vec![0; budget]; n],
        uncolored: n,
        deadline,
        ticks: 0,
    };
    // Coloring the clique 0..k-1 is forced up to color permutation; the
    // clique is non-empty because n >= 1.
    for (c, &v) in clique.iter().enumerate() {
        s.assign(v, c);
    }
    if s.go(clique.len() - 1)? {
        Ok(Some(Coloring { budget, color_of: s.color_of }))
    } else {
        Ok(None)
    }
}

pub const CHROMATIC_ORACLE_CAP: usize = 20;

/// Exact chromatic number, refusing graphs that need more than `cap` colors.
pub fn chromatic_number_oracle_with_cap(
    g: &SimpleGraph,
    cap: usize,
) -> Result<usize, ColoringError> {
    if g.vertex_count() == 0 {
        return Ok(0);
    }
    let lb = greedy_clique(g).len().max(1);
    for budget in lb..=cap.min(g.vertex_count()) {
        if color_exact(g, budget, 0, None)?.is_some() {
            return Ok(budget);
        }
    }
    if g.vertex_count() <= cap {
        // A graph on n vertices is always n-colorable; loop above covered it.
        unreachable!("n-coloring cannot fail");
    }
    Err(ColoringError::Cap { got: cap + 1, cap })
}

pub fn chromatic_number_oracle(g: &SimpleGraph) -> Result<usize, ColoringError> {
    chromatic_number_oracle_with_cap(g, CHROMATIC_ORACLE_CAP)
}

/// Linear-time bipartition check; `None` means an odd cycle exists.
pub fn two_colorable(g: &SimpleGraph) -> Option<Coloring> {
    let n = g.vertex_count();
    let mut color = vec![UNSET; n];
    let mut queue = std::collections::VecDeque::new();
    for root in 0..n {
        if color[root] != UNSET {
            continue;
        }
        color[root] = 0;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &u in g.neighbors(v) {
                if color[u] == UNSET {
                    color[u] = 1 - color[v];
                    queue.push_back(u);
                } else if color[u] == color[v] {
                    return None;
                }
            }
        }
    }
    Some(Coloring { budget: 2, color_of: color })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    fn cycle(n: usize) -> SimpleGraph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SimpleGraph::from_edges(n, &edges)
    }

    fn complete(n: usize) -> SimpleGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        SimpleGraph::from_edges(n, &edges)
    }

    fn petersen() -> SimpleGraph {
        let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
        edges.extend((0..5).map(|i| (i, i + 5)));
        SimpleGraph::from_edges(10, &edges)
    }

    #[test]
    fn complete_graph_needs_exactly_its_size() {
        let g = complete(4);
        assert_eq!(color_exact(&g, 3, 0, None), Ok(None));
        let c = color_exact(&g, 4, 0, None).unwrap().unwrap();
        assert!(c.is_proper(&g));
        assert_eq!(c.colors_used(), 4);
        assert_eq!(chromatic_number_oracle(&g), Ok(4));
    }

    #[test]
    fn odd_cycle_needs_three_colors() {
        let g = cycle(5);
        assert!(two_colorable(&g).is_none());
        assert_eq!(color_exact(&g, 2, 0, None), Ok(None));
        let c = color_exact(&g, 3, 0, None).unwrap().unwrap();
        assert!(c.is_proper(&g));
        assert_eq!(chromatic_number_oracle(&g), Ok(3));
    }

    #[test]
    fn even_cycle_is_bipartite() {
        let g = cycle(6);
        let c = two_colorable(&g).unwrap();
        assert!(c.is_proper(&g));
        assert!(color_exact(&g, 2, 0, None).unwrap().is_some());
        assert_eq!(chromatic_number_oracle(&g), Ok(2));
    }

    #[test]
    fn petersen_is_three_chromatic() {
        let g = petersen();
        assert_eq!(chromatic_number_oracle(&g), Ok(3));
        let c = color_exact(&g, 3, 0, None).unwrap().unwrap();
        assert!(c.is_proper(&g));
    }

    #[test]
    fn edgeless_and_empty_graphs() {
        let g = SimpleGraph::with_size(3);
        assert_eq!(chromatic_number_oracle(&g), Ok(1));
        let c = color_exact(&g, 1, 0, None).unwrap().unwrap();
        assert_eq!(c.color_of, vec![0, 0, 0]);
        let empty = SimpleGraph::with_size(0);
        assert_eq!(chromatic_number_oracle(&empty), Ok(0));
        assert!(color_exact(&empty, 0, 0, None).unwrap().is_some());
        assert_eq!(color_exact(&g, 0, 0, None), Ok(None));
    }

    #[test]
    fn greedy_clique_is_a_clique_and_finds_triangles() {
        let g = complete(4);
        assert_eq!(greedy_clique(&g), vec![0, 1, 2, 3]);
        // Triangle with a pendant vertex.
        let g = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        let q = greedy_clique(&g);
        assert_eq!(q, vec![0, 1, 2]);
    }

    #[test]
    fn budget_over_64_is_rejected() {
        let g = complete(3);
        assert_eq!(color_exact(&g, 65, 0, None), Err(ColoringError::BudgetTooLarge(65)));
    }

    #[test]
    fn expired_deadline_reports_timeout() {
        let g = complete(4);
        let past = Instant::now();
        while Instant::now() <= past {
            std::hint::spin_loop();
        }
        assert_eq!(color_exact(&g, 4, 0, Some(past)), Err(ColoringError::Timeout));
    }

    #[test]
    fn generous_deadline_is_harmless() {
        let g = petersen();
        let far = Instant::now() + Duration::from_secs(60);
        assert!(color_exact(&g, 3, 0, Some(far)).unwrap().is_some());
    }

    #[test]
    fn oracle_cap_is_enforced() {
        let g = complete(6);
        assert_eq!(
            chromatic_number_oracle_with_cap(&g, 5),
            Err(ColoringError::Cap { got: 6, cap: 5 })
        );
    }

    #[test]
    fn seed_does_not_change_the_result() {
        let g = petersen();
        let a = color_exact(&g, 3, 7, None).unwrap().unwrap();
        let b = color_exact(&g, 3, 99, None).unwrap().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn two_colorable_agrees_with_exact_on_small_graphs() {
        for g in [cycle(4), cycle(5), cycle(7), petersen(), complete(2), complete(3)] {
            let fast = two_colorable(&g).is_some();
            let exact = color_exact(&g, 2, 0, None).unwrap().is_some();
            assert_eq!(fast, exact);
        }
    }
}
