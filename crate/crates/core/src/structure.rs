//! Reaction-graph structure and stoichiometry.

use alloc::vec::Vec;

use crate::linalg::{to_rational_rows, RationalBasis};
use crate::network::{Complex, ReactionNetwork};

/// Connected components of the undirected complex graph. Each block lists
/// complex indices (into `distinct_complexes`) in ascending order; blocks
/// are ordered by their smallest member.
pub fn linkage_classes(net: &ReactionNetwork) -> Vec<Vec<usize>> {
    let (complexes, edges) = net.complex_index();
    let n = complexes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(s, p) in &edges {
        let (a, b) = (find(&mut parent, s), find(&mut parent, p));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut label = alloc::vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for c in 0..n {
        let root = find(&mut parent, c);
        if label[root] == usize::MAX {
            label[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[label[root]].push(c);
    }
    blocks
}

/// Strongly connected components of a directed graph on `n` nodes
/// (Tarjan, iterative). Returns the component id of every node.
pub fn strongly_connected_components(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = alloc::vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    let mut index = alloc::vec![usize::MAX; n];
    let mut low = alloc::vec![0usize; n];
    let mut on_stack = alloc::vec![false; n];
    let mut comp = alloc::vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (node, next child position)
        let mut call: Vec<(usize, usize)> = alloc::vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < adj[v].len() {
                let w = adj[v][top.1];
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// True iff every reaction's endpoints lie in the same strongly connected
/// component of the directed complex graph.
pub fn is_weakly_reversible(net: &ReactionNetwork) -> bool {
    let (complexes, edges) = net.complex_index();
    let comp = strongly_connected_components(complexes.len(), &edges);
    edges.iter().all(|&(s, p)| comp[s] == comp[p])
}

/// Exact basis of the stoichiometric subspace spanned by the reaction
/// vectors.
pub fn stoichiometric_basis(net: &ReactionNetwork) -> RationalBasis {
    let m = net.species_count();
    let rows: Vec<Vec<i64>> = (0..net.reactions().len()).map(|r| net.reaction_vector(r)).collect();
    RationalBasis::span_of(to_rational_rows(&rows), m)
}

/// Exact basis of the orthogonal complement of the stoichiometric subspace
/// (the linear conservation laws).
pub fn conservation_basis(net: &ReactionNetwork) -> RationalBasis {
    stoichiometric_basis(net).orthogonal_complement()
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    /// Number of distinct complexes.
    pub n: usize,
    /// Number of linkage classes.
    pub l: usize,
    /// Dimension of the stoichiometric subspace.
    pub s: usize,
    /// `n - l - s`; computed in signed arithmetic so a negative value (an
    /// internal fault) is visible rather than wrapped.
    pub deficiency: i64,
    pub weakly_reversible: bool,
    pub complexes: Vec<Complex>,
    pub linkage_classes: Vec<Vec<usize>>,
    pub stoichiometric_basis: RationalBasis,
    pub conservation_basis: RationalBasis,
    /// Set when `deficiency < 0`, which cannot happen for a correct
    /// computation.
    pub inconsistent: bool,
}

impl StructureReport {
    pub fn deficiency_zero_hypotheses(&self) -> bool {
        self.weakly_reversible && self.deficiency == 0
    }
}

pub fn structure_report(net: &ReactionNetwork) -> StructureReport {
    let complexes = net.distinct_complexes();
    let classes = linkage_classes(net);
    let s_basis = stoichiometric_basis(net);
    let c_basis = s_basis.orthogonal_complement();
    let n = complexes.len();
    let l = classes.len();
    let s = s_basis.rank();
    let deficiency = n as i64 - l as i64 - s as i64;
    StructureReport {
        n,
        l,
        s,
        deficiency,
        weakly_reversible: is_weakly_reversible(net),
        complexes,
        linkage_classes: classes,
        stoichiometric_basis: s_basis,
        conservation_basis: c_basis,
        inconsistent: deficiency < 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_network;
    use alloc::vec;
    use num_bigint::BigInt;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn single_reaction() {
        let net = parse_network("A -> B ; k=1").unwrap();
        assert_eq!(linkage_classes(&net), vec![vec![0, 1]]);
        assert!(!is_weakly_reversible(&net));
        let r = structure_report(&net);
        assert_eq!((r.n, r.l, r.s, r.deficiency), (2, 1, 1, 0));
    }

    #[test]
    fn directed_cycle_is_weakly_reversible() {
        let net = parse_network("A -> B ; k=1\nB -> C ; k=1\nC -> A ; k=1").unwrap();
        assert!(is_weakly_reversible(&net));
        let net = parse_network("A -> B ; k=1\nB -> C ; k=1\nC -> B ; k=1").unwrap();
        assert!(!is_weakly_reversible(&net));
    }

    #[test]
    fn scc_two_cycles_joined() {
        let comp = strongly_connected_components(5, &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 2), (4, 4)]);
        assert_eq!(comp[0], comp[1]);
        assert_eq!(comp[2], comp[3]);
        assert_ne!(comp[0], comp[2]);
        assert_ne!(comp[4], comp[0]);
    }

    #[test]
    fn reversible_pair_bases() {
        let net = parse_network("A <-> B ; kf=1, kr=2").unwrap();
        let s = stoichiometric_basis(&net);
        assert_eq!(s.rank(), 1);
        assert!(s.same_span(&RationalBasis { dimension: 2, vectors: vec![ints(&[-1, 1])] }));
        assert_eq!(conservation_basis(&net).vectors, vec![ints(&[1, 1])]);
    }

    #[test]
    fn deficiency_one_network() {
        let net = parse_network("A <-> B ; kf=1, kr=1\n2A <-> 2B ; kf=1, kr=1").unwrap();
        let r = structure_report(&net);
        assert_eq!((r.n, r.l, r.s, r.deficiency), (4, 2, 1, 1));
        assert!(r.weakly_reversible);
        assert!(!r.deficiency_zero_hypotheses());
    }
}
