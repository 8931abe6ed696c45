//! File formats and report builders for the `crn-cert` command.
//!
//! Every JSON document carries `"schema": "crn-cert/1"`. Field order is
//! fixed by the structs below, so output is byte-stable for a given input.

use std::fmt::Display;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use crn_core::certify::FaceScope;
use crn_core::dynamics::{EquilibriumOptions, EquilibriumResult, OmegaDiagnostic, Trajectory};
use crn_core::{Certificate, ReactionNetwork, SiphonCatalog, SpeciesSet, StructureReport};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "crn-cert/1";

/// Reads and parses a `.crn` file; errors name the file, line and column.
pub fn read_network(path: &Path) -> Result<ReactionNetwork> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    crn_core::parse_network(&text).map_err(|e| anyhow::anyhow!("{}: {}", path.display(), e))
}

/// Integers as JSON numbers when they fit in `i64`, decimal strings
/// otherwise.
fn int_vector<T: ToPrimitive + Display>(v: &[T]) -> Vec<Value> {
    v.iter()
        .map(|x| match x.to_i64() {
            Some(n) => Value::from(n),
            None => Value::from(x.to_string()),
        })
        .collect()
}

fn set_names(net: &ReactionNetwork, w: SpeciesSet) -> Vec<String> {
    w.names(net)
}

#[derive(Serialize)]
pub struct StructureJson {
    pub species: Vec<String>,
    pub n: usize,
    pub l: usize,
    pub s: usize,
    pub deficiency: i64,
    pub weakly_reversible: bool,
    pub complexes: Vec<String>,
    pub linkage_classes: Vec<Vec<String>>,
    pub s_basis: Vec<Vec<Value>>,
    pub conservation_basis: Vec<Vec<Value>>,
}

impl StructureJson {
    pub fn new(net: &ReactionNetwork, rep: &StructureReport) -> Self {
        let complexes: Vec<String> = rep.complexes.iter().map(|c| net.format_complex(c)).collect();
        StructureJson {
            species: net.species_names(),
            n: rep.n,
            l: rep.l,
            s: rep.s,
            deficiency: rep.deficiency,
            weakly_reversible: rep.weakly_reversible,
            linkage_classes: rep
                .linkage_classes
                .iter()
                .map(|cl| cl.iter().map(|&i| complexes[i].clone()).collect())
                .collect(),
            complexes,
            s_basis: rep.stoichiometric_basis.vectors.iter().map(|v| int_vector(v)).collect(),
            conservation_basis: rep.conservation_basis.vectors.iter().map(|v| int_vector(v)).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct SiphonJson {
    pub species: Vec<String>,
    pub locking: bool,
}

fn siphons_json(net: &ReactionNetwork, cat: &SiphonCatalog) -> Vec<SiphonJson> {
    cat.minimal
        .iter()
        .map(|s| SiphonJson { species: set_names(net, s.species), locking: s.locking })
        .collect()
}

#[derive(Serialize)]
pub struct AnalyzeJson {
    pub schema: &'static str,
    pub structure: StructureJson,
    pub siphons: Vec<SiphonJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semi_locking_count: Option<usize>,
}

pub fn analyze_json(net: &ReactionNetwork, rep: &StructureReport, cat: &SiphonCatalog) -> AnalyzeJson {
    AnalyzeJson {
        schema: SCHEMA,
        structure: StructureJson::new(net, rep),
        siphons: siphons_json(net, cat),
        semi_locking_count: cat.all_semi_locking_count,
    }
}

#[derive(Serialize)]
pub struct VerdictJson {
    #[serde(rename = "W")]
    pub w: Vec<String>,
    pub status: &'static str,
    pub minimal: bool,
    pub locking: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative_direction: Option<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separating: Option<Vec<Value>>,
}

#[derive(Serialize)]
pub struct CertificateJson {
    pub schema: &'static str,
    pub structure: StructureJson,
    pub siphons: Vec<SiphonJson>,
    pub scope: &'static str,
    pub verdicts: Vec<VerdictJson>,
    pub overall: &'static str,
    pub reasons: Vec<String>,
}

fn scope_str(scope: FaceScope) -> &'static str {
    match scope {
        FaceScope::AllSemiLocking => "all_semi_locking",
        FaceScope::UnionClosure => "union_closure",
        FaceScope::MinimalOnly => "minimal_only",
        FaceScope::None => "none",
    }
}

pub fn certificate_json(net: &ReactionNetwork, cert: &Certificate) -> CertificateJson {
    CertificateJson {
        schema: SCHEMA,
        structure: StructureJson::new(net, &cert.structure),
        siphons: siphons_json(net, &cert.catalog),
        scope: scope_str(cert.scope),
        verdicts: cert
            .verdicts
            .iter()
            .map(|v| VerdictJson {
                w: set_names(net, v.set),
                status: v.status.as_str(),
                minimal: v.minimal,
                locking: v.locking,
                witness: v.kernel_witness.as_deref().map(int_vector),
                negative_direction: v.negative_direction.as_deref().map(int_vector),
                separating: v.separating.as_deref().map(int_vector),
            })
            .collect(),
        overall: cert.overall.as_str(),
        reasons: cert.reasons.clone(),
    }
}

#[derive(Serialize)]
pub struct SolverJson {
    pub max_iterations: usize,
    pub gradient_tol: f64,
    pub shrink: f64,
    pub positivity_floor: f64,
    pub residual_tol: f64,
}

#[derive(Serialize)]
pub struct EquilibriumJson {
    pub schema: &'static str,
    pub species: Vec<String>,
    pub x_bar: Vec<f64>,
    pub x_star: Vec<f64>,
    pub class_anchor: Vec<f64>,
    pub residual_rhs: f64,
    pub complex_balance_residual: f64,
    pub newton_iterations: usize,
    pub solver: SolverJson,
}

pub fn equilibrium_json(net: &ReactionNetwork, r: &EquilibriumResult, opts: &EquilibriumOptions) -> EquilibriumJson {
    EquilibriumJson {
        schema: SCHEMA,
        species: net.species_names(),
        x_bar: r.x_bar.clone(),
        x_star: r.x_star.clone(),
        class_anchor: r.class_anchor.clone(),
        residual_rhs: r.residual_rhs,
        complex_balance_residual: r.complex_balance_residual,
        newton_iterations: r.newton_iterations,
        solver: SolverJson {
            max_iterations: opts.max_iterations,
            gradient_tol: opts.gradient_tol,
            shrink: opts.shrink,
            positivity_floor: opts.positivity_floor,
            residual_tol: opts.residual_tol,
        },
    }
}

#[derive(Serialize)]
pub struct SimulationSummary {
    pub schema: &'static str,
    pub samples: usize,
    pub rejected_steps: usize,
    pub persistence_margin: f64,
    pub final_v: Option<f64>,
    pub max_conservation_residual: f64,
    pub zero_set: Vec<String>,
    pub zero_set_semi_locking: bool,
}

pub fn simulation_summary(net: &ReactionNetwork, traj: &Trajectory, omega: &OmegaDiagnostic) -> SimulationSummary {
    SimulationSummary {
        schema: SCHEMA,
        samples: traj.len(),
        rejected_steps: traj.rejected_steps,
        persistence_margin: crn_core::dynamics::persistence_margin(traj),
        final_v: traj.lyapunov.as_ref().and_then(|v| v.last().copied()),
        max_conservation_residual: traj.conservation_residual.iter().copied().fold(0.0, f64::max),
        zero_set: set_names(net, omega.zero_set),
        zero_set_semi_locking: omega.semi_locking,
    }
}

/// Writes `t,<species...>,V,conservation_residual`; `V` is left empty when
/// no reference equilibrium was available.
pub fn write_trajectory_csv<W: Write>(out: W, net: &ReactionNetwork, traj: &Trajectory) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend(net.species_names());
    header.push("V".into());
    header.push("conservation_residual".into());
    w.write_record(&header)?;
    for k in 0..traj.len() {
        let mut row = Vec::with_capacity(header.len());
        row.push(traj.times[k].to_string());
        row.extend(traj.states[k].iter().map(|v| v.to_string()));
        row.push(traj.lyapunov.as_ref().map(|v| v[k].to_string()).unwrap_or_default());
        row.push(traj.conservation_residual[k].to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses `v1,v2,...` into a vector of the expected length.
pub fn parse_vector(text: &str, expected: usize, what: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("{}: `{}` is not a number", what, p.trim())))
        .collect::<Result<_>>()?;
    anyhow::ensure!(
        v.len() == expected,
        "{} has {} entries but the network has {} species",
        what,
        v.len(),
        expected
    );
    anyhow::ensure!(v.iter().all(|x| x.is_finite() && *x > 0.0), "{} must be strictly positive", what);
    Ok(v)
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors_are_checked() {
        assert_eq!(parse_vector("1, 2.5,3", 3, "--x0").unwrap(), vec![1.0, 2.5, 3.0]);
        assert!(parse_vector("1,2", 3, "--x0").is_err());
        assert!(parse_vector("1,0,2", 3, "--x0").is_err());
        assert!(parse_vector("1,x,2", 3, "--x0").is_err());
    }

    #[test]
    fn wide_integers_become_strings() {
        let v = int_vector(&[1u128, u128::MAX]);
        assert_eq!(v[0], Value::from(1));
        assert_eq!(v[1], Value::from(u128::MAX.to_string()));
    }
}
