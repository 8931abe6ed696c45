//! Seeded random networks and dense oracles shared by the integration tests.
#![allow(dead_code)]

use crn_core::network::{Complex, Reaction};
use crn_core::ReactionNetwork;
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_complex<R: Rng>(rng: &mut R, m: usize) -> Complex {
    let terms: Vec<(usize, u32)> = (0..m)
        .filter_map(|i| match rng.gen_range(0..6) {
            0 => Some((i, 2)),
            1 | 2 => Some((i, 1)),
            _ => None,
        })
        .collect();
    Complex::from_terms(terms).unwrap()
}

/// Drops unused species and relabels the rest densely as `X0, X1, ...`.
fn compact(m: usize, reactions: Vec<Reaction>) -> Option<ReactionNetwork> {
    let mut used = vec![false; m];
    for r in &reactions {
        for i in r.source.species().chain(r.product.species()) {
            used[i] = true;
        }
    }
    let mut map = vec![usize::MAX; m];
    let mut k = 0;
    for i in 0..m {
        if used[i] {
            map[i] = k;
            k += 1;
        }
    }
    if k == 0 {
        return None;
    }
    let relabel = |c: &Complex| Complex::from_terms(c.terms().iter().map(|&(i, v)| (map[i], v))).unwrap();
    let reactions = reactions
        .iter()
        .map(|r| Reaction { source: relabel(&r.source), product: relabel(&r.product), rate: r.rate })
        .collect();
    ReactionNetwork::new((0..k).map(|i| format!("X{}", i)).collect(), reactions).ok()
}

/// Arbitrary network with at most `max_species` species and `max_reactions`
/// reactions; unused species, duplicates and trivial reactions are avoided.
pub fn random_network<R: Rng>(rng: &mut R, max_species: usize, max_reactions: usize) -> ReactionNetwork {
    loop {
        let m = rng.gen_range(1..=max_species);
        let r = rng.gen_range(1..=max_reactions);
        let mut reactions: Vec<Reaction> = Vec::new();
        for _ in 0..r {
            let source = random_complex(rng, m);
            let product = random_complex(rng, m);
            if source == product || reactions.iter().any(|x| x.source == source && x.product == product) {
                continue;
            }
            reactions.push(Reaction { source, product, rate: rng.gen_range(0.5..2.0) });
        }
        if reactions.is_empty() {
            continue;
        }
        if let Some(net) = compact(m, reactions) {
            return net;
        }
    }
}

/// Weakly reversible network built from reversible pairs.
pub fn random_reversible_network<R: Rng>(rng: &mut R, max_species: usize, max_pairs: usize) -> ReactionNetwork {
    loop {
        let m = rng.gen_range(1..=max_species);
        let pairs = rng.gen_range(1..=max_pairs);
        let mut reactions: Vec<Reaction> = Vec::new();
        for _ in 0..pairs {
            let a = random_complex(rng, m);
            let b = random_complex(rng, m);
            if a == b || reactions.iter().any(|x| (x.source == a && x.product == b) || (x.source == b && x.product == a)) {
                continue;
            }
            reactions.push(Reaction { source: a.clone(), product: b.clone(), rate: rng.gen_range(0.5..2.0) });
            reactions.push(Reaction { source: b, product: a, rate: rng.gen_range(0.5..2.0) });
        }
        if reactions.is_empty() {
            continue;
        }
        if let Some(net) = compact(m, reactions) {
            return net;
        }
    }
}

/// Stoichiometric matrix, species by reactions.
pub fn stoichiometric_matrix(net: &ReactionNetwork) -> DMatrix<f64> {
    let m = net.species_count();
    let r = net.reactions().len();
    DMatrix::from_fn(m, r, |i, j| net.reaction_vector(j)[i] as f64)
}

pub fn svd_rank(a: &DMatrix<f64>, tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    a.clone().svd(false, false).singular_values.iter().filter(|&&s| s > tol).count()
}

/// Rows of `a` indexed by `rows`.
pub fn select_rows(a: &DMatrix<f64>, rows: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), a.ncols(), |i, j| a[(rows[i], j)])
}

/// Semi-locking test written directly from the definition.
pub fn naive_semi_locking(net: &ReactionNetwork, mask: u64) -> bool {
    let inside = |i: usize| mask >> i & 1 == 1;
    net.reactions()
        .iter()
        .all(|r| !r.product.species().any(inside) || r.source.species().any(inside))
}
