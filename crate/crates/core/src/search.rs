//! Largest unit sets with pairwise unit differences, found as maximum cliques
//! of the unit-difference graph.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElement};

pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                (word != 0).then(|| {
                    let bit = word.trailing_zeros() as usize;
                    word &= word - 1;
                    w * 64 + bit
                })
            })
        })
    }

    /// Vertices with index strictly above `v`.
    fn above(&self, v: usize) -> Bits {
        let mut out = self.clone();
        let (word, bit) = (v / 64, v % 64);
        out.0[..word].fill(0);
        out.0[word] &= u64::MAX.checked_shl(bit as u32 + 1).unwrap_or(0);
        out
    }
}

/// Graph on the units of a ring; `x ~ y` iff `x − y` is a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceGraph {
    vertices: Vec<RingElement>,
    adjacency: Vec<Bits>,
}

impl DifferenceGraph {
    pub fn new(ring: &Ring) -> Self {
        let vertices = ring.list_units();
        let n = vertices.len();
        let mut adjacency = vec![Bits::empty(n); n];
        for i in 0..n {
            for j in i + 1..n {
                if ring.is_unit(&ring.sub(&vertices[i], &vertices[j])) {
                    adjacency[i].set(j);
                    adjacency[j].set(i);
                }
            }
        }
        Self {
            vertices,
            adjacency,
        }
    }

    pub fn vertices(&self) -> &[RingElement] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].get(j)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].count()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.len()).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    /// Colour count of a greedy colouring; no clique is larger.
    pub fn clique_upper_bound(&self) -> usize {
        self.colour_bound(&self.all())
    }

    fn all(&self) -> Bits {
        let mut b = Bits::empty(self.len());
        for i in 0..self.len() {
            b.set(i);
        }
        b
    }

    fn labels(&self, clique: &[usize]) -> Vec<RingElement> {
        clique.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    /// Sequential greedy colouring of `candidates`; the colour count bounds
    /// any clique inside it.
    fn colour_bound(&self, candidates: &Bits) -> usize {
        let mut uncoloured = candidates.clone();
        let mut colours = 0;
        while !uncoloured.is_empty() {
            colours += 1;
            let mut class_pool = uncoloured.clone();
            while let Some(v) = class_pool.first() {
                uncoloured.clear(v);
                class_pool.clear(v);
                class_pool = class_pool.and_not(&self.adjacency[v]);
            }
        }
        colours
    }
}

pub fn difference_graph(ring: &Ring) -> DifferenceGraph {
    DifferenceGraph::new(ring)
}

struct Search<'g> {
    graph: &'g DifferenceGraph,
    limit: u64,
    nodes: &'g AtomicU64,
    best: Vec<usize>,
    aborted: bool,
}

impl Search<'_> {
    // Branches on candidates in increasing index order, so cliques are
    // visited in lexicographic order and the first maximum found is the
    // lexicographically smallest one.
    fn expand(&mut self, clique: &mut Vec<usize>, candidates: &Bits) {
        if self.aborted {
            return;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.limit {
            self.aborted = true;
            return;
        }
        if clique.len() > self.best.len() {
            self.best = clique.clone();
        }
        let mut remaining = candidates.clone();
        for v in candidates.iter() {
            if clique.len() + remaining.count() <= self.best.len() {
                break;
            }
            remaining.clear(v);
            let next = remaining.and(&self.graph.adjacency[v]);
            if clique.len() + 1 + self.graph.colour_bound(&next) <= self.best.len() {
                continue;
            }
            clique.push(v);
            self.expand(clique, &next);
            clique.pop();
            if self.aborted {
                return;
            }
        }
    }
}

/// Outcome of an exact clique search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueResult {
    pub clique: Vec<RingElement>,
    pub nodes: u64,
}

/// Maximum clique by branch and bound with greedy-colouring bounds. Among
/// maximum cliques the lexicographically smallest index sequence is
/// returned. Fails with [`Error::NodeLimitExceeded`] carrying the best
/// clique found once more than `node_limit` nodes have been expanded.
pub fn max_clique(graph: &DifferenceGraph, node_limit: u64) -> Result<Vec<RingElement>> {
    max_clique_counted(graph, node_limit).map(|r| r.clique)
}

pub fn max_clique_counted(graph: &DifferenceGraph, node_limit: u64) -> Result<CliqueResult> {
    let nodes = AtomicU64::new(0);
    let mut search = Search {
        graph,
        limit: node_limit,
        nodes: &nodes,
        best: Vec::new(),
        aborted: false,
    };
    search.expand(&mut Vec::new(), &graph.all());
    let clique = graph.labels(&search.best);
    if search.aborted {
        return Err(Error::NodeLimitExceeded {
            limit: node_limit,
            best: clique,
        });
    }
    Ok(CliqueResult {
        clique,
        nodes: nodes.into_inner(),
    })
}

/// Parallel variant: each root vertex `v` is searched independently over
/// its higher-indexed neighbours, and the largest result with the smallest
/// root wins, which is the same clique the sequential search returns. The
/// node budget is shared.
pub fn max_clique_parallel(graph: &DifferenceGraph, node_limit: u64) -> Result<CliqueResult> {
    let nodes = AtomicU64::new(0);
    let all = graph.all();
    let roots: Vec<(usize, Vec<usize>, bool)> = (0..graph.len())
        .into_par_iter()
        .map(|v| {
            let mut search = Search {
                graph,
                limit: node_limit,
                nodes: &nodes,
                best: Vec::new(),
                aborted: false,
            };
            let mut clique = vec![v];
            search.expand(&mut clique, &all.above(v).and(&graph.adjacency[v]));
            (v, search.best, search.aborted)
        })
        .collect();
    let aborted = roots.iter().any(|r| r.2);
    let best = roots.into_iter().fold(
        Vec::new(),
        |acc: Vec<usize>, (_, c, _)| if c.len() > acc.len() { c } else { acc },
    );
    let clique = graph.labels(&best);
    if aborted {
        return Err(Error::NodeLimitExceeded {
            limit: node_limit,
            best: clique,
        });
    }
    Ok(CliqueResult {
        clique,
        nodes: nodes.into_inner(),
    })
}

/// Lowest-index-first greedy maximal clique.
pub fn greedy_set(graph: &DifferenceGraph) -> Vec<RingElement> {
    let mut candidates = graph.all();
    let mut clique = Vec::new();
    while let Some(v) = candidates.first() {
        clique.push(v);
        candidates = candidates.and(&graph.adjacency[v]);
        candidates.clear(v);
    }
    graph.labels(&clique)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;
    use crate::weyl::validate_set_condition;

    fn ring(spec: RingSpec) -> Ring {
        Ring::new(spec).unwrap()
    }

    fn scalar(x: u64) -> RingElement {
        RingElement::new(vec![vec![x]])
    }

    #[test]
    fn bitset_above() {
        let mut b = Bits::empty(130);
        for i in [0, 5, 63, 64, 65, 129] {
            b.set(i);
        }
        assert_eq!(b.above(5).iter().collect::<Vec<_>>(), vec![63, 64, 65, 129]);
        assert_eq!(b.above(63).iter().collect::<Vec<_>>(), vec![64, 65, 129]);
        assert_eq!(b.above(64).iter().collect::<Vec<_>>(), vec![65, 129]);
        assert!(b.above(129).is_empty());
    }

    #[test]
    fn graph_examples() {
        let f9 = difference_graph(&ring(RingSpec::fields(9)));
        assert_eq!(f9.len(), 8);
        assert_eq!(f9.edge_count(), 28);

        let z9 = difference_graph(&ring(RingSpec::integers_mod(9)));
        assert_eq!(z9.len(), 6);
        for i in 0..6 {
            assert!(!z9.has_edge(i, i));
            for j in 0..6 {
                let (x, y) = (z9.vertices()[i].parts[0][0], z9.vertices()[j].parts[0][0]);
                assert_eq!(z9.has_edge(i, j), i != j && (x + 9 - y) % 3 != 0);
            }
        }

        let f15 = difference_graph(&ring(RingSpec::fields(15)));
        assert_eq!(f15.len(), 8);
        for i in 0..8 {
            for j in 0..8 {
                let (x, y) = (&f15.vertices()[i].parts, &f15.vertices()[j].parts);
                assert_eq!(f15.has_edge(i, j), x[0] != y[0] && x[1] != y[1]);
            }
        }
    }

    #[test]
    fn clique_examples() {
        let z9 = difference_graph(&ring(RingSpec::integers_mod(9)));
        assert_eq!(
            max_clique(&z9, DEFAULT_NODE_LIMIT).unwrap(),
            vec![scalar(1), scalar(2)]
        );
        let f9r = ring(RingSpec::fields(9));
        let f9 = difference_graph(&f9r);
        assert_eq!(
            max_clique(&f9, DEFAULT_NODE_LIMIT).unwrap(),
            f9r.list_units()
        );
        let f15 = difference_graph(&ring(RingSpec::fields(15)));
        assert_eq!(max_clique(&f15, DEFAULT_NODE_LIMIT).unwrap().len(), 2);
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(
            greedy_set(&difference_graph(&ring(RingSpec::fields(9)))).len(),
            8
        );
        let z15 = ring(RingSpec::integers_mod(15));
        let greedy = greedy_set(&difference_graph(&z15));
        assert_eq!(greedy, vec![z15.from_integer(1), z15.from_integer(2)]);
        assert_eq!(
            greedy_set(&difference_graph(&ring(RingSpec::integers_mod(9)))).len(),
            2
        );
    }

    #[test]
    fn node_limit_reports_best() {
        let g = difference_graph(&ring(RingSpec::fields(27)));
        match max_clique(&g, 3) {
            Err(Error::NodeLimitExceeded { limit: 3, best }) => {
                assert!(!best.is_empty() && best.len() < 26);
            }
            other => panic!("expected node limit, got {other:?}"),
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        for spec in [
            RingSpec::integers_mod(21),
            RingSpec::fields(21),
            RingSpec::fields(25),
            RingSpec::integers_mod(30),
            RingSpec::fields(28),
        ] {
            let r = ring(spec);
            let g = difference_graph(&r);
            let seq = max_clique(&g, DEFAULT_NODE_LIMIT).unwrap();
            let par = max_clique_parallel(&g, DEFAULT_NODE_LIMIT).unwrap().clique;
            assert_eq!(seq, par);
            assert!(validate_set_condition(&r, &seq).is_ok());
        }
    }
}
