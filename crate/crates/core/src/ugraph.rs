//! Minimal simple undirected graph: adjacency matrix plus sorted neighbor
//! lists, sized for the coloring instances this crate produces (at most a few
//! hundred vertices).

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    names: Vec<String>,
    adj: Vec<Vec<bool>>,
    nbrs: Vec<Vec<usize>>,
    edge_count: usize,
}

impl SimpleGraph {
    pub fn new(names: Vec<String>) -> Self {
        let n = names.len();
        SimpleGraph { names, adj: vec![vec![false; n]; n], nbrs: vec![Vec::new(); n], edge_count: 0 }
    }

    /// Anonymous vertices `0..n`, named by index.
    pub fn with_size(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string()).collect())
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::with_size(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Idempotent; self-loops are a caller bug.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "self-loop at vertex {u}");
        if self.adj[u][v] {
            return;
        }
        self.adj[u][v] = true;
        self.adj[v][u] = true;
        self.edge_count += 1;
        let pos = self.nbrs[u].binary_search(&v).unwrap_err();
        self.nbrs[u].insert(pos, v);
        let pos = self.nbrs[v].binary_search(&u).unwrap_err();
        self.nbrs[v].insert(pos, u);
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u][v]
    }

    /// Ascending by index.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn complement(&self) -> SimpleGraph {
        let n = self.vertex_count();
        let mut c = SimpleGraph::new(self.names.clone());
        for u in 0..n {
            for v in u + 1..n {
                if !self.adj[u][v] {
                    c.add_edge(u, v);
                }
            }
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_edge_is_symmetric_and_idempotent() {
        let mut g = SimpleGraph::with_size(4);
        g.add_edge(2, 0);
        g.add_edge(0, 2);
        g.add_edge(0, 1);
        assert_eq!(g.edge_count(), 2);
        assert!(g.adjacent(0, 2) && g.adjacent(2, 0));
        assert_eq!(g.neighbors(0), &[1, 2]);
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.degree(3), 0);
    }

    #[test]
    #[should_panic(expected = "self-loop")]
    fn self_loop_panics() {
        let mut g = SimpleGraph::with_size(2);
        g.add_edge(1, 1);
    }

    #[test]
    fn complement_of_path_graph() {
        // P4: 0-1-2-3; complement edges: 0-2, 0-3, 1-3.
        let g = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let c = g.complement();
        assert_eq!(c.edge_count(), 3);
        assert!(c.adjacent(0, 2) && c.adjacent(0, 3) && c.adjacent(1, 3));
        assert!(!c.adjacent(0, 1));
        assert_eq!(c.complement(), g);
    }

    #[test]
    fn named_lookup() {
        let g = SimpleGraph::new(vec!["a".into(), "b".into()]);
        assert_eq!(g.index_of("b"), Some(1));
        assert_eq!(g.index_of("z"), None);
        assert_eq!(g.name(0), "a");
    }
}
