//! Global-stability certification for weakly reversible, deficiency zero
//! mass-action networks.
//!
//! For every semi-locking set `W` the boundary face `L_W` (species of `W`
//! zero, all others positive) is tested against the compatibility classes:
//!
//! * `DISCRETE`: the only `z` in `S` vanishing on `W` is zero, so each class
//!   meets `L_W` in at most isolated points.
//! * `EMPTY_ALL_CLASSES`: no `s` in `S` is strictly negative on `W`, so no
//!   positive class reaches the closed face `{x_W = 0}`. Certified by a
//!   nonnegative conservation law supported on `W` (Farkas dual).
//! * `INCONCLUSIVE`: neither test passes.
//!
//! The network is certified when it is weakly reversible with deficiency
//! zero and no face is inconclusive. Emptiness is decided on the closed face,
//! which implies emptiness of the strict face `L_W`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linalg::{combine, dot, int_to_rational, integer_direction, nullspace, rational, Rational, RationalBasis};
use crate::network::ReactionNetwork;
use crate::simplex::feasible_point;
use crate::siphon::{
    all_semi_locking_sets, is_locking, is_semi_locking, minimal_semi_locking_sets_with_cap, union_closure,
    SiphonCatalog, SiphonError, SpeciesSet, DEFAULT_ENUMERATION_CAP, FULL_CATALOG_CAP, MAX_SET_SPECIES,
};
use crate::structure::{structure_report, StructureReport};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Siphon(#[from] SiphonError),
    #[error("vector has {got} entries, network has {expected} species")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector has a negative or non-finite entry at position {0}")]
    NegativeEntry(usize),
    #[error("point is strictly positive; it lies on no boundary face")]
    InteriorPoint,
    #[error("network has more than {} species", MAX_SET_SPECIES)]
    TooManySpecies,
    #[error("internal error: primal and Farkas dual feasibility disagree for {0:?}")]
    FarkasMismatch(SpeciesSet),
}

/// Result of the kernel test on a face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteCheck {
    pub discrete: bool,
    /// Nonzero `z` in `S` with `z_i = 0` for every `i` in `W`, when one
    /// exists.
    pub witness: Option<Vec<BigInt>>,
}

/// Basis vector coordinates restricted to `W`, as the matrix
/// `M[i][k] = b_k[i]` for `i` in `W`.
fn restricted_rows(basis: &RationalBasis, w: SpeciesSet) -> Vec<Vec<Rational>> {
    let vecs = basis.rational_vectors();
    w.members()
        .filter(|&i| i < basis.dimension)
        .map(|i| vecs.iter().map(|b| b[i].clone()).collect())
        .collect()
}

/// Decides whether `S ∩ {z : z_W = 0} = {0}` exactly.
pub fn check_discrete(basis: &RationalBasis, w: SpeciesSet) -> DiscreteCheck {
    let s = basis.rank();
    let rows = restricted_rows(basis, w);
    let kernel = if rows.is_empty() {
        // Nothing constrained: every coefficient vector is in the kernel.
        (0..s)
            .map(|k| (0..s).map(|j| rational((j == k) as i64)).collect())
            .collect()
    } else {
        nullspace(&rows, s)
    };
    match kernel.first() {
        None => DiscreteCheck { discrete: true, witness: None },
        Some(alpha) => {
            let z = combine(alpha, &basis.rational_vectors(), basis.dimension);
            DiscreteCheck { discrete: false, witness: Some(crate::linalg::primitive_integer(&z)) }
        }
    }
}

/// Outcome of the emptiness test on a face, with an exact witness either
/// way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmptinessCheck {
    /// No `s` in `S` is strictly negative on `W`. The witness is a nonzero
    /// `λ >= 0` supported on `W` and orthogonal to `S`.
    Empty { separating: Vec<BigInt> },
    /// Some `s` in `S` has `s_i < 0` for all `i` in `W`.
    Reachable { direction: Vec<BigInt> },
}

impl EmptinessCheck {
    pub fn is_empty(&self) -> bool {
        matches!(self, EmptinessCheck::Empty { .. })
    }
}

/// Primal route: find `α` with `(Σ α_k b_k)_i <= -1` for all `i` in `W`.
pub fn negative_direction(basis: &RationalBasis, w: SpeciesSet) -> Option<Vec<Rational>> {
    let s = basis.rank();
    let rows = restricted_rows(basis, w);
    let nw = rows.len();
    // Variables: α⁺ (s), α⁻ (s), slack (nw). Row i: -Mα⁺ + Mα⁻ - t_i = 1.
    let nvars = 2 * s + nw;
    let a: Vec<Vec<Rational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = Vec::with_capacity(nvars);
            row.extend(r.iter().map(|x| -x.clone()));
            row.extend(r.iter().cloned());
            row.extend((0..nw).map(|j| rational(-((i == j) as i64))));
            row
        })
        .collect();
    let b = alloc::vec![rational(1); nw];
    let x = feasible_point(&a, &b, nvars)?;
    let alpha: Vec<Rational> = (0..s).map(|k| &x[k] - &x[s + k]).collect();
    Some(combine(&alpha, &basis.rational_vectors(), basis.dimension))
}

/// Dual route: find `λ >= 0` on `W`, `Σ λ = 1`, with `λ ⟂ S`.
pub fn separating_conservation_law(basis: &RationalBasis, w: SpeciesSet) -> Option<Vec<Rational>> {
    let members: Vec<usize> = w.members().filter(|&i| i < basis.dimension).collect();
    let vecs = basis.rational_vectors();
    let mut a: Vec<Vec<Rational>> = vecs
        .iter()
        .map(|b| members.iter().map(|&i| b[i].clone()).collect())
        .collect();
    a.push(alloc::vec![rational(1); members.len()]);
    let mut rhs = alloc::vec![Rational::zero(); vecs.len()];
    rhs.push(rational(1));
    let lam = feasible_point(&a, &rhs, members.len())?;
    let mut full = alloc::vec![Rational::zero(); basis.dimension];
    for (&i, l) in members.iter().zip(lam) {
        full[i] = l;
    }
    Some(full)
}

/// Decides whether no compatibility class through a positive point meets
/// the closed face `{x_W = 0}`. Both Farkas alternatives are computed
/// independently and exactly one must hold.
pub fn check_empty_all_classes(basis: &RationalBasis, w: SpeciesSet) -> Result<EmptinessCheck, CertifyError> {
    if let Some(s) = negative_direction(basis, w) {
        debug_assert!(w.members().all(|i| s[i] <= rational(-1)));
        return Ok(EmptinessCheck::Reachable { direction: integer_direction(&s) });
    }
    let lam = separating_conservation_law(basis, w).ok_or(CertifyError::FarkasMismatch(w))?;
    let ok = lam.iter().all(|x| !x.is_negative())
        && lam.iter().any(|x| x.is_positive())
        && basis.rational_vectors().iter().all(|b| dot(b, &lam).is_zero());
    if !ok {
        return Err(CertifyError::FarkasMismatch(w));
    }
    Ok(EmptinessCheck::Empty { separating: integer_direction(&lam) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceStatus {
    EmptyAllClasses,
    Discrete,
    Inconclusive,
}

impl FaceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FaceStatus::EmptyAllClasses => "EMPTY_ALL_CLASSES",
            FaceStatus::Discrete => "DISCRETE",
            FaceStatus::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceVerdict {
    pub set: SpeciesSet,
    pub status: FaceStatus,
    /// Whether `set` is an inclusion-minimal semi-locking set.
    pub minimal: bool,
    pub locking: bool,
    /// Nonzero element of `S` vanishing on the set (present unless
    /// `DISCRETE`).
    pub kernel_witness: Option<Vec<BigInt>>,
    /// Element of `S` strictly negative on the set (`INCONCLUSIVE` only).
    pub negative_direction: Option<Vec<BigInt>>,
    /// Nonnegative conservation law supported on the set
    /// (`EMPTY_ALL_CLASSES` only).
    pub separating: Option<Vec<BigInt>>,
}

pub fn face_verdict(basis: &RationalBasis, w: SpeciesSet) -> Result<FaceVerdict, CertifyError> {
    let disc = check_discrete(basis, w);
    let mut v = FaceVerdict {
        set: w,
        status: FaceStatus::Discrete,
        minimal: false,
        locking: false,
        kernel_witness: disc.witness,
        negative_direction: None,
        separating: None,
    };
    if disc.discrete {
        return Ok(v);
    }
    match check_empty_all_classes(basis, w)? {
        EmptinessCheck::Empty { separating } => {
            v.status = FaceStatus::EmptyAllClasses;
            v.separating = Some(separating);
        }
        EmptinessCheck::Reachable { direction } => {
            v.status = FaceStatus::Inconclusive;
            v.negative_direction = Some(direction);
        }
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overall {
    GloballyStable,
    NotCertified,
}

impl Overall {
    pub fn as_str(self) -> &'static str {
        match self {
            Overall::GloballyStable => "GLOBALLY_STABLE",
            Overall::NotCertified => "NOT_CERTIFIED",
        }
    }
}

/// Which family of semi-locking sets the verdicts cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceScope {
    /// Every semi-locking set (exhaustive, small networks).
    AllSemiLocking,
    /// Union closure of the minimal sets.
    UnionClosure,
    /// Minimal sets only; supersets inherit their verdicts.
    MinimalOnly,
    /// No faces evaluated because the hypotheses failed.
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub structure: StructureReport,
    pub catalog: SiphonCatalog,
    pub verdicts: Vec<FaceVerdict>,
    pub scope: FaceScope,
    pub overall: Overall,
    pub reasons: Vec<String>,
}

impl Certificate {
    pub fn verdict(&self, w: SpeciesSet) -> Option<&FaceVerdict> {
        self.verdicts.iter().find(|v| v.set == w)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    pub enumeration_cap: usize,
    /// Largest number of faces evaluated through union closure before
    /// falling back to minimal sets.
    pub max_faces: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { enumeration_cap: DEFAULT_ENUMERATION_CAP, max_faces: 4096 }
    }
}

pub const HYPOTHESES_FAIL: &str = "hypotheses of Deficiency Zero Theorem fail";

pub fn certify(net: &ReactionNetwork) -> Result<Certificate, CertifyError> {
    certify_with(net, CertifyOptions::default())
}

pub fn certify_with(net: &ReactionNetwork, opts: CertifyOptions) -> Result<Certificate, CertifyError> {
    let structure = structure_report(net);
    let catalog = minimal_semi_locking_sets_with_cap(net, opts.enumeration_cap)?;
    let mut reasons = Vec::new();

    if !structure.weakly_reversible {
        reasons.push(format!("{}: network is not weakly reversible", HYPOTHESES_FAIL));
    }
    if structure.deficiency != 0 {
        reasons.push(format!("{}: deficiency is {}, not 0", HYPOTHESES_FAIL, structure.deficiency));
    }
    if !reasons.is_empty() {
        return Ok(Certificate {
            structure,
            catalog,
            verdicts: Vec::new(),
            scope: FaceScope::None,
            overall: Overall::NotCertified,
            reasons,
        });
    }

    let minimal = catalog.sets();
    let (faces, scope) = if net.species_count() <= FULL_CATALOG_CAP {
        (all_semi_locking_sets(net)?, FaceScope::AllSemiLocking)
    } else if let Some(closure) = union_closure(&minimal, opts.max_faces) {
        (closure, FaceScope::UnionClosure)
    } else {
        reasons.push(format!(
            "union closure exceeds {} faces; evaluating minimal sets only (both tests are monotone under enlarging W)",
            opts.max_faces
        ));
        (minimal.clone(), FaceScope::MinimalOnly)
    };

    let basis = &structure.stoichiometric_basis;
    let mut verdicts = Vec::with_capacity(faces.len());
    for w in faces {
        let mut v = face_verdict(basis, w)?;
        v.minimal = minimal.contains(&w);
        v.locking = is_locking(net, w);
        debug_assert!(is_semi_locking(net, w));
        verdicts.push(v);
    }

    let names = net.species_names();
    let label = |w: SpeciesSet| -> String {
        let parts: Vec<&str> = w.members().map(|i| names[i].as_str()).collect();
        format!("{{{}}}", parts.join(","))
    };
    let inconclusive: Vec<&FaceVerdict> =
        verdicts.iter().filter(|v| v.status == FaceStatus::Inconclusive).collect();
    let overall = if inconclusive.is_empty() {
        reasons.push(String::from(
            "weakly reversible, deficiency zero, and every semi-locking set meets each compatibility class in an empty or discrete set",
        ));
        Overall::GloballyStable
    } else {
        for v in &inconclusive {
            reasons.push(format!(
                "semi-locking set {} admits a nonzero direction in S vanishing on it and a direction strictly negative on it; criterion inconclusive",
                label(v.set)
            ));
        }
        Overall::NotCertified
    };

    Ok(Certificate { structure, catalog, verdicts, scope, overall, reasons })
}

fn validate_point(net: &ReactionNetwork, y: &[f64]) -> Result<SpeciesSet, CertifyError> {
    let m = net.species_count();
    if y.len() != m {
        return Err(CertifyError::DimensionMismatch { expected: m, got: y.len() });
    }
    if m > MAX_SET_SPECIES {
        return Err(CertifyError::TooManySpecies);
    }
    if let Some(i) = y.iter().position(|&v| !(v.is_finite() && v >= 0.0)) {
        return Err(CertifyError::NegativeEntry(i));
    }
    Ok(SpeciesSet::from_indices((0..m).filter(|&i| y[i] == 0.0)))
}

/// Whether a nonnegative `y` is an extreme point of `(y + S) ∩ R^m_{>=0}`;
/// equivalent to the kernel test on its zero set.
pub fn is_extreme_point(net: &ReactionNetwork, y: &[f64]) -> Result<bool, CertifyError> {
    let w = validate_point(net, y)?;
    Ok(check_discrete(&crate::structure::stoichiometric_basis(net), w).discrete)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPoint {
    pub zero_set: SpeciesSet,
    pub face_is_semi_locking: bool,
    /// A boundary equilibrium must have a semi-locking zero set.
    pub is_equilibrium_candidate: bool,
}

pub fn classify_boundary_point(net: &ReactionNetwork, y: &[f64]) -> Result<BoundaryPoint, CertifyError> {
    let w = validate_point(net, y)?;
    if w.is_empty() {
        return Err(CertifyError::InteriorPoint);
    }
    let semi = is_semi_locking(net, w);
    Ok(BoundaryPoint { zero_set: w, face_is_semi_locking: semi, is_equilibrium_candidate: semi })
}

/// Exact check that a witness claimed for `W` lies in `S` and vanishes on
/// `W`.
pub fn verify_kernel_witness(basis: &RationalBasis, w: SpeciesSet, z: &[BigInt]) -> bool {
    let zq = int_to_rational(z);
    !z.iter().all(|x| x.is_zero()) && w.members().all(|i| z[i].is_zero()) && basis.contains(&zq)
}
