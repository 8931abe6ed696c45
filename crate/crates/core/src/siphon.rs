//! Semi-locking sets (siphons) and locking sets.
//!
//! A nonempty species set `W` is semi-locking if every reaction that
//! produces a member of `W` also consumes one. It is locking if every
//! reaction's source complex meets `W`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use thiserror::Error;

use crate::network::ReactionNetwork;

/// Hard upper bound on species count for bitset operations.
pub const MAX_SET_SPECIES: usize = 64;
/// Default cap for exhaustive minimal-set enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;
/// Largest species count for which the full (non-minimal) catalog is built.
pub const FULL_CATALOG_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SiphonError {
    #[error("{species} species is too large for exhaustive enumeration (cap {cap})")]
    TooLarge { species: usize, cap: usize },
}

/// A set of species indices, backed by a 64-bit mask.
///
/// Ordered by size, then lexicographically by sorted member list.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SpeciesSet(u64);

impl SpeciesSet {
    pub const EMPTY: SpeciesSet = SpeciesSet(0);

    pub fn from_mask(mask: u64) -> Self {
        SpeciesSet(mask)
    }

    /// Panics if an index is `>= 64`.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut mask = 0u64;
        for i in indices {
            assert!(i < MAX_SET_SPECIES, "species index {} exceeds bitset width", i);
            mask |= 1 << i;
        }
        SpeciesSet(mask)
    }

    /// Set of species whose names are listed. Unknown names yield `None`.
    pub fn from_names(net: &ReactionNetwork, names: &[&str]) -> Option<Self> {
        let mut idx = Vec::new();
        for n in names {
            idx.push(net.species_index(n)?);
        }
        Some(Self::from_indices(idx))
    }

    /// `{0, .., m-1}`.
    pub fn full(m: usize) -> Self {
        assert!(m <= MAX_SET_SPECIES);
        if m == 64 {
            SpeciesSet(u64::MAX)
        } else {
            SpeciesSet((1u64 << m) - 1)
        }
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_SET_SPECIES && self.0 >> i & 1 == 1
    }

    pub fn is_subset(self, other: SpeciesSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SpeciesSet) -> SpeciesSet {
        SpeciesSet(self.0 | other.0)
    }

    pub fn intersects(self, other: SpeciesSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn complement(self, m: usize) -> SpeciesSet {
        SpeciesSet(!self.0 & Self::full(m).0)
    }

    pub fn members(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..MAX_SET_SPECIES).filter(move |&i| mask >> i & 1 == 1)
    }

    pub fn names(self, net: &ReactionNetwork) -> Vec<alloc::string::String> {
        self.members().map(|i| net.species()[i].name.clone()).collect()
    }
}

impl Ord for SpeciesSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.members().cmp(other.members()))
    }
}

impl PartialOrd for SpeciesSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SpeciesSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members()).finish()
    }
}

/// Source and product supports of every reaction as bitmasks.
struct Supports {
    source: Vec<u64>,
    product: Vec<u64>,
}

impl Supports {
    fn of(net: &ReactionNetwork) -> Self {
        let mask = |c: &crate::network::Complex| c.species().fold(0u64, |acc, i| acc | 1 << i);
        Supports {
            source: net.reactions().iter().map(|r| mask(&r.source)).collect(),
            product: net.reactions().iter().map(|r| mask(&r.product)).collect(),
        }
    }

    fn semi_locking(&self, w: u64) -> bool {
        w != 0
            && self
                .source
                .iter()
                .zip(&self.product)
                .all(|(&s, &p)| p & w == 0 || s & w != 0)
    }

    fn locking(&self, w: u64) -> bool {
        w != 0 && self.source.iter().all(|&s| s & w != 0)
    }
}

fn check_width(net: &ReactionNetwork) {
    assert!(
        net.species_count() <= MAX_SET_SPECIES,
        "species sets support at most {} species",
        MAX_SET_SPECIES
    );
}

pub fn is_semi_locking(net: &ReactionNetwork, w: SpeciesSet) -> bool {
    check_width(net);
    Supports::of(net).semi_locking(w.0)
}

pub fn is_locking(net: &ReactionNetwork, w: SpeciesSet) -> bool {
    check_width(net);
    Supports::of(net).locking(w.0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Siphon {
    pub species: SpeciesSet,
    pub locking: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiphonCatalog {
    /// Inclusion-minimal semi-locking sets in canonical order.
    pub minimal: Vec<Siphon>,
    /// Number of all semi-locking sets, when the network is small enough
    /// for the full catalog.
    pub all_semi_locking_count: Option<usize>,
}

impl SiphonCatalog {
    pub fn sets(&self) -> Vec<SpeciesSet> {
        self.minimal.iter().map(|s| s.species).collect()
    }
}

/// Iterator over all `k`-subsets of `{0..m}` as masks (Gosper's hack).
fn k_subsets(m: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit: u128 = 1u128 << m;
    let mut cur: u128 = if k == 0 || k > m { limit } else { (1u128 << k) - 1 };
    core::iter::from_fn(move || {
        if cur >= limit {
            return None;
        }
        let out = cur as u64;
        let c = cur & cur.wrapping_neg();
        let r = cur + c;
        cur = (((r ^ cur) >> 2) / c) | r;
        Some(out)
    })
}

/// Enumerates inclusion-minimal semi-locking sets with a size-ascending
/// sweep that skips supersets of sets already found.
pub fn minimal_semi_locking_sets(net: &ReactionNetwork) -> Result<SiphonCatalog, SiphonError> {
    minimal_semi_locking_sets_with_cap(net, DEFAULT_ENUMERATION_CAP)
}

pub fn minimal_semi_locking_sets_with_cap(
    net: &ReactionNetwork,
    cap: usize,
) -> Result<SiphonCatalog, SiphonError> {
    let m = net.species_count();
    let cap = cap.min(MAX_SET_SPECIES);
    if m > cap {
        return Err(SiphonError::TooLarge { species: m, cap });
    }
    let sup = Supports::of(net);
    let mut found: Vec<u64> = Vec::new();
    for k in 1..=m {
        for w in k_subsets(m, k) {
            if found.iter().any(|&f| f & !w == 0) {
                continue;
            }
            if sup.semi_locking(w) {
                found.push(w);
            }
        }
    }
    let mut minimal: Vec<Siphon> = found
        .into_iter()
        .map(|w| Siphon { species: SpeciesSet(w), locking: sup.locking(w) })
        .collect();
    minimal.sort_by_key(|s| s.species);
    let all_semi_locking_count = if m <= FULL_CATALOG_CAP {
        Some((1..(1u64 << m)).filter(|&w| sup.semi_locking(w)).count())
    } else {
        None
    };
    Ok(SiphonCatalog { minimal, all_semi_locking_count })
}

/// Every semi-locking set, in canonical order. Only for `m <= 12`.
pub fn all_semi_locking_sets(net: &ReactionNetwork) -> Result<Vec<SpeciesSet>, SiphonError> {
    let m = net.species_count();
    if m > FULL_CATALOG_CAP {
        return Err(SiphonError::TooLarge { species: m, cap: FULL_CATALOG_CAP });
    }
    let sup = Supports::of(net);
    let mut all: Vec<SpeciesSet> = (1..(1u64 << m))
        .filter(|&w| sup.semi_locking(w))
        .map(SpeciesSet)
        .collect();
    all.sort();
    Ok(all)
}

/// Closure of `sets` under pairwise union, in canonical order. Returns
/// `None` if the closure would exceed `limit` sets.
pub fn union_closure(sets: &[SpeciesSet], limit: usize) -> Option<Vec<SpeciesSet>> {
    let mut out: alloc::collections::BTreeSet<SpeciesSet> = sets.iter().copied().collect();
    let mut frontier: Vec<SpeciesSet> = out.iter().copied().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &a in &frontier {
            for &b in sets {
                let u = a.union(b);
                if out.insert(u) {
                    if out.len() > limit {
                        return None;
                    }
                    next.push(u);
                }
            }
        }
        frontier = next;
    }
    Some(out.into_iter().collect())
}
