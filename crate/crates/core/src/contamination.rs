//! Which foreign streams can mix into each path's data.
//!
//! When two paths of different sinks traverse a common edge, whatever flows on
//! the earlier path from that point on can blend into the later one (and vice
//! versa): coding at shared edges combines inputs. Contamination is therefore
//! directional along each path — only the suffix from the shared edge onward
//! matters — and transitive: a partner path may itself already carry foreign
//! streams picked up further upstream on *its* route.
//!
//! For every path `p` and position `i` we compute the set `T[p][i]` of paths
//! onto which a symbol riding `p` from position `i` onward can spread:
//!
//! ```text
//! T[p][len] = {}
//! T[p][i]   = T[p][i+1]  ∪  ⋃ over partners q sharing edge p[i]:
//!                              {q} ∪ T[q][pos_q(p[i]) + 1]
//! ```
//!
//! iterated to the least fixed point. The reported set for `p` is `T[p][0]`
//! restricted to paths of *other* sinks: same-sink members are tracked during
//! the computation (they can relay contamination onward) but spreading onto a
//! path of one's own sink is harmless — that sink decodes `p`'s stream anyway
//! — so they never constitute a decoding obstruction.

use crate::flows::{PathDecomposition, PathId};
use crate::netgraph::NetworkInstance;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContaminationReport {
    /// For each path, the cross-sink paths its stream can spread onto.
    pub sets: BTreeMap<PathId, BTreeSet<PathId>>,
    /// `m[j][j2]` = number of sink-`j` paths whose streams reach sink `j2`.
    pub m: Vec<Vec<usize>>,
    /// Directly shared edges per unordered path pair, keyed smaller id first.
    pub overlap_edges: BTreeMap<(PathId, PathId), Vec<usize>>,
}

pub fn contamination_sets(g: &NetworkInstance, d: &PathDecomposition) -> ContaminationReport {
    assert_eq!(d.per_sink.len(), g.sinks.len(), "decomposition matches network");
    let ids = d.ids();

    // edge -> (path, position) occupants. Same-sink paths are edge-disjoint,
    // so every partner relation here is cross-sink.
    let mut occupants: BTreeMap<usize, Vec<(PathId, usize)>> = BTreeMap::new();
    for &p in &ids {
        for (i, &e) in d.path(p).iter().enumerate() {
            occupants.entry(e).or_default().push((p, i));
        }
    }
    for (e, occ) in &occupants {
        for a in 0..occ.len() {
            for b in a + 1..occ.len() {
                assert!(
                    occ[a].0.sink != occ[b].0.sink,
                    "paths {} and {} of one sink share edge #{e}",
                    occ[a].0,
                    occ[b].0
                );
            }
        }
    }

    let mut t: BTreeMap<PathId, Vec<BTreeSet<PathId>>> = ids
        .iter()
        .map(|&p| (p, vec![BTreeSet::new(); d.path(p).len() + 1]))
        .collect();

    loop {
        let mut changed = false;
        for &p in &ids {
            for i in (0..d.path(p).len()).rev() {
                let mut next: BTreeSet<PathId> = t[&p][i + 1].clone();
                let e = d.path(p)[i];
                for &(q, qpos) in &occupants[&e] {
                    if q == p {
                        continue;
                    }
                    next.insert(q);
                    next.extend(t[&q][qpos + 1].iter().copied());
                }
                if next != t[&p][i] {
                    t.get_mut(&p).unwrap()[i] = next;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let sets: BTreeMap<PathId, BTreeSet<PathId>> = ids
        .iter()
        .map(|&p| {
            let cross: BTreeSet<PathId> =
                t[&p][0].iter().copied().filter(|q| q.sink != p.sink).collect();
            (p, cross)
        })
        .collect();

    let s = g.sinks.len();
    let mut m = vec![vec![0usize; s]; s];
    for (&p, dset) in &sets {
        let hit: BTreeSet<usize> = dset.iter().map(|q| q.sink).collect();
        for j2 in hit {
            m[p.sink][j2] += 1;
        }
    }

    let mut overlap_edges: BTreeMap<(PathId, PathId), Vec<usize>> = BTreeMap::new();
    for (&e, occ) in &occupants {
        for a in 0..occ.len() {
            for b in a + 1..occ.len() {
                let (p, q) = (occ[a].0.min(occ[b].0), occ[a].0.max(occ[b].0));
                overlap_edges.entry((p, q)).or_default().push(e);
            }
        }
    }
    // occupants is keyed ascending, so each overlap list is already sorted.

    ContaminationReport { sets, m, overlap_edges }
}

/// Convenience accessor: the cross-contamination count matrix.
pub fn overlap_matrix(r: &ContaminationReport) -> Vec<Vec<usize>> {
    r.m.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::flows::{decompose, parse_paths_override};

    fn pid(s: &str) -> PathId {
        PathId::parse(s).unwrap()
    }

    fn set(ids: &[&str]) -> BTreeSet<PathId> {
        ids.iter().map(|s| pid(s)).collect()
    }

    #[test]
    fn butterfly_sets_matrix_and_overlaps() {
        let g = fixtures::butterfly();
        let d = decompose(&g);
        let r = contamination_sets(&g, &d);
        assert_eq!(r.sets[&pid("1.1")], set(&["2.1"]));
        assert_eq!(r.sets[&pid("1.2")], set(&["2.1", "2.2"]));
        assert_eq!(r.sets[&pid("2.1")], set(&["1.1", "1.2"]));
        assert_eq!(r.sets[&pid("2.2")], set(&["1.2"]));
        assert_eq!(r.m, vec![vec![0, 2], vec![2, 0]]);
        let pairs: Vec<_> = r.overlap_edges.iter().collect();
        assert_eq!(
            pairs,
            vec![
                (&(pid("1.1"), pid("2.1")), &vec![0]),
                (&(pid("1.2"), pid("2.1")), &vec![5]),
                (&(pid("1.2"), pid("2.2")), &vec![1]),
            ]
        );
    }

    #[test]
    fn extended_butterfly_adds_a_clean_path() {
        let g = fixtures::extended_butterfly();
        let d = decompose(&g);
        let r = contamination_sets(&g, &d);
        assert_eq!(r.sets[&pid("1.1")], set(&["2.1"]));
        assert_eq!(r.sets[&pid("1.2")], set(&["2.1", "2.2"]));
        assert_eq!(r.sets[&pid("2.1")], set(&["1.1", "1.2"]));
        assert_eq!(r.sets[&pid("2.2")], set(&["1.2"]));
        assert_eq!(r.sets[&pid("2.3")], set(&[]));
        assert_eq!(r.m, vec![vec![0, 2], vec![2, 0]]);
    }

    #[test]
    fn counterexample_has_asymmetric_matrix() {
        let g = fixtures::counterexample();
        let d = decompose(&g);
        let r = contamination_sets(&g, &d);
        assert_eq!(r.sets[&pid("1.1")], set(&["2.1", "2.2"]));
        assert_eq!(r.sets[&pid("2.1")], set(&["1.1"]));
        assert_eq!(r.sets[&pid("2.2")], set(&["1.1"]));
        assert_eq!(r.m, vec![vec![0, 1], vec![2, 0]]);
    }

    #[test]
    fn contamination_is_directional_and_transitive() {
        // pA and pC never touch, yet C's stream reaches A via B: B meets C
        // *after* it met A on B's own route, so the mixing only travels one way.
        let g = fixtures::three_chain();
        let d = parse_paths_override(&g, fixtures::three_chain_paths()).unwrap();
        let r = contamination_sets(&g, &d);
        assert_eq!(r.sets[&pid("1.1")], set(&["2.1", "3.1"]));
        assert_eq!(r.sets[&pid("2.1")], set(&["1.1", "3.1"]));
        assert_eq!(r.sets[&pid("3.1")], set(&["2.1"]));
        // No direct A/C overlap even though C contaminates A.
        assert!(!r.overlap_edges.contains_key(&(pid("1.1"), pid("3.1"))));
    }

    #[test]
    fn non_berge_sets_with_override_paths() {
        let g = fixtures::non_berge();
        let d = parse_paths_override(&g, fixtures::non_berge_paths()).unwrap();
        let r = contamination_sets(&g, &d);
        assert_eq!(r.sets[&pid("1.1")], set(&["2.1", "2.2", "3.1"]));
        assert_eq!(r.sets[&pid("1.2")], set(&[]));
        assert_eq!(r.sets[&pid("2.1")], set(&["1.1"]));
        assert_eq!(r.sets[&pid("2.2")], set(&["3.1"]));
        assert_eq!(r.sets[&pid("3.1")], set(&["1.1", "2.1", "2.2"]));
        assert_eq!(r.sets[&pid("3.2")], set(&[]));
        for k in 0..3 {
            assert_eq!(r.sets[&PathId::new(3, k)], set(&[]));
        }
        assert_eq!(
            r.m,
            vec![
                vec![0, 1, 1, 0],
                vec![1, 0, 1, 0],
                vec![1, 1, 0, 0],
                vec![0, 0, 0, 0],
            ]
        );
    }

    #[test]
    fn source_out_edge_sharing_counts_as_contamination() {
        // Two sinks fed by one link off the source: the blend happens at the
        // very first hop.
        let g = crate::netgraph::parse_network(
            "source s\nsink t1\nsink t2\nedge s a\nedge a t1\nedge a t2\n",
        )
        .unwrap();
        let d = decompose(&g);
        let r = contamination_sets(&g, &d);
        assert_eq!(r.sets[&pid("1.1")], set(&["2.1"]));
        assert_eq!(r.sets[&pid("2.1")], set(&["1.1"]));
        assert_eq!(r.overlap_edges[&(pid("1.1"), pid("2.1"))], vec![0]);
    }

    #[test]
    fn disjoint_paths_stay_clean() {
        let g = crate::netgraph::parse_network(
            "source s\nsink t1\nsink t2\nedge s t1\nedge s t2\n",
        )
        .unwrap();
        let r = contamination_sets(&g, &decompose(&g));
        assert!(r.sets.values().all(|s| s.is_empty()));
        assert_eq!(r.m, vec![vec![0, 0], vec![0, 0]]);
        assert!(r.overlap_edges.is_empty());
    }

    #[test]
    fn matrix_accessor_matches_report() {
        let g = fixtures::butterfly();
        let r = contamination_sets(&g, &decompose(&g));
        assert_eq!(overlap_matrix(&r), r.m);
    }
}
