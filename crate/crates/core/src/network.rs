//! Network data model: species, complexes, reactions.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// A chemical species with its position in the network's species order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Species {
    pub name: String,
    pub index: usize,
}

/// A complex: a nonnegative integer combination of species.
///
/// Stored sparsely as `(species index, multiplicity)` pairs sorted by index,
/// with zero multiplicities omitted. The empty complex (written `0`) has no
/// entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Complex {
    terms: Vec<(usize, u32)>,
}

impl Complex {
    pub fn empty() -> Self {
        Complex { terms: Vec::new() }
    }

    /// Builds a complex from `(index, multiplicity)` pairs. Repeated indices
    /// are summed and zero multiplicities dropped.
    pub fn from_terms<I: IntoIterator<Item = (usize, u32)>>(terms: I) -> Result<Self, NetworkError> {
        let mut map: BTreeMap<usize, u32> = BTreeMap::new();
        for (idx, mult) in terms {
            let entry = map.entry(idx).or_insert(0);
            *entry = entry
                .checked_add(mult)
                .ok_or(NetworkError::CoefficientOverflow)?;
        }
        Ok(Complex {
            terms: map.into_iter().filter(|&(_, c)| c > 0).collect(),
        })
    }

    pub fn terms(&self) -> &[(usize, u32)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, species: usize) -> u32 {
        self.terms
            .binary_search_by_key(&species, |&(i, _)| i)
            .map(|pos| self.terms[pos].1)
            .unwrap_or(0)
    }

    pub fn contains(&self, species: usize) -> bool {
        self.coefficient(species) > 0
    }

    pub fn species(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().map(|&(i, _)| i)
    }

    /// Dense coefficient vector of length `m`.
    pub fn to_dense(&self, m: usize) -> Vec<i64> {
        let mut v = alloc::vec![0i64; m];
        for &(i, c) in &self.terms {
            v[i] = c as i64;
        }
        v
    }

    fn remap(&self, new_index: &[usize]) -> Complex {
        let mut terms: Vec<(usize, u32)> = self.terms.iter().map(|&(i, c)| (new_index[i], c)).collect();
        terms.sort_unstable();
        Complex { terms }
    }

    /// Formats the complex using the supplied species names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> ComplexDisplay<'a> {
        ComplexDisplay { complex: self, names }
    }
}

pub struct ComplexDisplay<'a> {
    complex: &'a Complex,
    names: &'a [String],
}

impl fmt::Display for ComplexDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.complex.is_empty() {
            return f.write_str("0");
        }
        for (pos, &(i, c)) in self.complex.terms.iter().enumerate() {
            if pos > 0 {
                f.write_str(" + ")?;
            }
            if c != 1 {
                write!(f, "{}", c)?;
            }
            f.write_str(&self.names[i])?;
        }
        Ok(())
    }
}

/// A directed reaction `source -> product` with a positive rate constant.
#[derive(Clone, Debug, PartialEq)]
pub struct Reaction {
    pub source: Complex,
    pub product: Complex,
    pub rate: f64,
}

impl Reaction {
    /// Dense reaction vector `product - source` over `m` species.
    pub fn reaction_vector(&self, m: usize) -> Vec<i64> {
        let mut v = self.product.to_dense(m);
        for &(i, c) in self.source.terms() {
            v[i] -= c as i64;
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("network has no reactions")]
    NoReactions,
    #[error("invalid species name `{0}`")]
    InvalidSpeciesName(String),
    #[error("duplicate species name `{0}`")]
    DuplicateSpecies(String),
    #[error("species `{0}` does not appear in any complex")]
    UnusedSpecies(String),
    #[error("reaction {0} references species index {1} out of range")]
    SpeciesOutOfRange(usize, usize),
    #[error("reaction {0} has identical source and product")]
    TrivialReaction(usize),
    #[error("reaction {0} has nonpositive or non-finite rate")]
    NonPositiveRate(usize),
    #[error("duplicate reaction {0} (same source and product as reaction {1})")]
    DuplicateReaction(usize, usize),
    #[error("stoichiometric coefficient overflows 32 bits")]
    CoefficientOverflow,
    #[error("species permutation is not a bijection")]
    BadPermutation,
}

pub(crate) fn is_valid_species_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A validated reaction network. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ReactionNetwork {
    species: Vec<Species>,
    reactions: Vec<Reaction>,
}

impl ReactionNetwork {
    pub fn new(species_names: Vec<String>, reactions: Vec<Reaction>) -> Result<Self, NetworkError> {
        let m = species_names.len();
        let mut seen = BTreeMap::new();
        for name in &species_names {
            if !is_valid_species_name(name) {
                return Err(NetworkError::InvalidSpeciesName(name.clone()));
            }
            if seen.insert(name.as_str(), ()).is_some() {
                return Err(NetworkError::DuplicateSpecies(name.clone()));
            }
        }
        if reactions.is_empty() {
            return Err(NetworkError::NoReactions);
        }
        let mut used = alloc::vec![false; m];
        let mut pairs: BTreeMap<(&Complex, &Complex), usize> = BTreeMap::new();
        for (r, rx) in reactions.iter().enumerate() {
            for i in rx.source.species().chain(rx.product.species()) {
                if i >= m {
                    return Err(NetworkError::SpeciesOutOfRange(r, i));
                }
                used[i] = true;
            }
            if rx.source == rx.product {
                return Err(NetworkError::TrivialReaction(r));
            }
            if !(rx.rate.is_finite() && rx.rate > 0.0) {
                return Err(NetworkError::NonPositiveRate(r));
            }
            if let Some(&prev) = pairs.get(&(&rx.source, &rx.product)) {
                return Err(NetworkError::DuplicateReaction(r, prev));
            }
            pairs.insert((&rx.source, &rx.product), r);
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(NetworkError::UnusedSpecies(species_names[i].clone()));
        }
        let species = species_names
            .into_iter()
            .enumerate()
            .map(|(index, name)| Species { name, index })
            .collect();
        Ok(ReactionNetwork { species, reactions })
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn species_count(&self) -> usize {
        self.species.len()
    }

    pub fn species_names(&self) -> Vec<String> {
        self.species.iter().map(|s| s.name.clone()).collect()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn rates(&self) -> Vec<f64> {
        self.reactions.iter().map(|r| r.rate).collect()
    }

    /// Same network with rate constants replaced.
    pub fn with_rates(&self, rates: &[f64]) -> Result<Self, NetworkError> {
        assert_eq!(rates.len(), self.reactions.len(), "rate count mismatch");
        let reactions = self
            .reactions
            .iter()
            .zip(rates)
            .map(|(r, &rate)| Reaction { rate, ..r.clone() })
            .collect();
        ReactionNetwork::new(self.species_names(), reactions)
    }

    /// Distinct complexes in order of first appearance (source before
    /// product, reactions in order).
    pub fn distinct_complexes(&self) -> Vec<Complex> {
        self.complex_index().0
    }

    /// Distinct complexes plus, for each reaction, the indices of its source
    /// and product in that list.
    pub fn complex_index(&self) -> (Vec<Complex>, Vec<(usize, usize)>) {
        let mut list: Vec<Complex> = Vec::new();
        let mut lookup: BTreeMap<Complex, usize> = BTreeMap::new();
        let mut edges = Vec::with_capacity(self.reactions.len());
        let mut id = |c: &Complex, list: &mut Vec<Complex>| -> usize {
            if let Some(&k) = lookup.get(c) {
                return k;
            }
            list.push(c.clone());
            lookup.insert(c.clone(), list.len() - 1);
            list.len() - 1
        };
        for r in &self.reactions {
            let s = id(&r.source, &mut list);
            let p = id(&r.product, &mut list);
            edges.push((s, p));
        }
        (list, edges)
    }

    pub fn reaction_vector(&self, reaction: usize) -> Vec<i64> {
        self.reactions[reaction].reaction_vector(self.species.len())
    }

    /// Relabels species: species `i` becomes species `perm[i]`.
    pub fn permute_species(&self, perm: &[usize]) -> Result<Self, NetworkError> {
        let m = self.species.len();
        if perm.len() != m {
            return Err(NetworkError::BadPermutation);
        }
        let mut names = alloc::vec![None; m];
        for (i, &p) in perm.iter().enumerate() {
            if p >= m || names[p].is_some() {
                return Err(NetworkError::BadPermutation);
            }
            names[p] = Some(self.species[i].name.clone());
        }
        let names = names.into_iter().map(|n| n.unwrap()).collect();
        let reactions = self
            .reactions
            .iter()
            .map(|r| Reaction {
                source: r.source.remap(perm),
                product: r.product.remap(perm),
                rate: r.rate,
            })
            .collect();
        ReactionNetwork::new(names, reactions)
    }

    /// Reorders species so that they follow `order` (a list of all names).
    pub fn reorder_species(&self, order: &[&str]) -> Result<Self, NetworkError> {
        if order.len() != self.species.len() {
            return Err(NetworkError::BadPermutation);
        }
        let mut perm = alloc::vec![usize::MAX; order.len()];
        for (new, name) in order.iter().enumerate() {
            let old = self.species_index(name).ok_or(NetworkError::BadPermutation)?;
            perm[old] = new;
        }
        self.permute_species(&perm)
    }

    /// Same network with reactions in a different order: reaction `order[k]`
    /// becomes reaction `k`.
    pub fn reorder_reactions(&self, order: &[usize]) -> Result<Self, NetworkError> {
        let mut seen = alloc::vec![false; self.reactions.len()];
        if order.len() != self.reactions.len() {
            return Err(NetworkError::BadPermutation);
        }
        for &k in order {
            if k >= seen.len() || seen[k] {
                return Err(NetworkError::BadPermutation);
            }
            seen[k] = true;
        }
        let reactions = order.iter().map(|&k| self.reactions[k].clone()).collect();
        ReactionNetwork::new(self.species_names(), reactions)
    }

    pub fn format_complex(&self, c: &Complex) -> String {
        use alloc::string::ToString;
        let names = self.species_names();
        c.display(&names).to_string()
    }
}

/// Serializes in the `.crn` text format, one directed reaction per line.
impl fmt::Display for ReactionNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.species_names();
        for r in &self.reactions {
            writeln!(
                f,
                "{} -> {} ; k={}",
                r.source.display(&names),
                r.product.display(&names),
                r.rate
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_network;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn complex_merges_repeated_species() {
        let c = Complex::from_terms([(1, 1), (0, 2), (1, 1), (2, 0)]).unwrap();
        assert_eq!(c.terms(), &[(0, 2), (1, 2)]);
        assert!(!c.contains(2));
    }

    #[test]
    fn empty_complex_is_distinct() {
        let net = parse_network("0 -> A ; k=1\nA -> 0 ; k=2").unwrap();
        let cs = net.distinct_complexes();
        assert_eq!(cs.len(), 2);
        assert!(cs[0].is_empty());
        assert_eq!(net.to_string(), "0 -> A ; k=1\nA -> 0 ; k=2\n");
    }

    #[test]
    fn reaction_vectors_by_coefficient_subtraction() {
        let net = parse_network("2A + C -> A + D ; k=1\nB + C -> E ; k=1")
            .unwrap()
            .reorder_species(&["A", "B", "C", "D", "E"])
            .unwrap();
        assert_eq!(net.reaction_vector(0), vec![-1, 0, -1, 1, 0]);
        assert_eq!(net.reaction_vector(1), vec![0, -1, -1, 0, 1]);
        let ab = parse_network("A -> B ; k=1").unwrap();
        assert_eq!(ab.reaction_vector(0), vec![-1, 1]);
    }

    #[test]
    fn constructor_rejects_invalid() {
        let a = Complex::from_terms([(0, 1)]).unwrap();
        let b = Complex::from_terms([(1, 1)]).unwrap();
        let names = || vec!["A".to_string(), "B".to_string()];
        let rx = |s: &Complex, p: &Complex, k| Reaction { source: s.clone(), product: p.clone(), rate: k };
        assert_eq!(ReactionNetwork::new(names(), vec![]), Err(NetworkError::NoReactions));
        assert_eq!(
            ReactionNetwork::new(names(), vec![rx(&a, &a, 1.0)]),
            Err(NetworkError::TrivialReaction(0))
        );
        assert_eq!(
            ReactionNetwork::new(names(), vec![rx(&a, &b, 0.0)]),
            Err(NetworkError::NonPositiveRate(0))
        );
        assert_eq!(
            ReactionNetwork::new(names(), vec![rx(&a, &b, 1.0), rx(&a, &b, 2.0)]),
            Err(NetworkError::DuplicateReaction(1, 0))
        );
        assert_eq!(
            ReactionNetwork::new(vec!["A".into(), "B".into(), "C".into()], vec![rx(&a, &b, 1.0)]),
            Err(NetworkError::UnusedSpecies("C".into()))
        );
        assert!(matches!(
            ReactionNetwork::new(vec!["1A".into(), "B".into()], vec![rx(&a, &b, 1.0)]),
            Err(NetworkError::InvalidSpeciesName(_))
        ));
    }

    #[test]
    fn permutation_relabels_consistently() {
        let net = parse_network("2A + C <-> A + D ; kf=1, kr=3").unwrap();
        let p = net.reorder_species(&["D", "C", "A"]).unwrap();
        assert_eq!(p.species_names(), vec!["D", "C", "A"]);
        assert_eq!(p.reaction_vector(0), vec![1, -1, -1]);
        assert_eq!(p.reactions()[1].rate, 3.0);
        assert!(net.reorder_species(&["A", "A", "C"]).is_err());
    }
}
