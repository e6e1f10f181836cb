//! Serializable reports. Field order is fixed so that identical inputs give
//! byte-identical JSON apart from `wallTimeSeconds`.

use std::fmt::Write as _;

use gife_core::detect::{DfsVerdict, IfeVerdict};
use gife_core::gife::{ClassResidual, GifeVerdict, SupportPattern};
use serde::Serialize;

use crate::config::{Eigenbasis, ScenarioConfig};
use crate::formats::{matrix_to_json, MatrixJson};

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: ScenarioConfig,
    pub hamiltonian: HamiltonianSummary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub states: Vec<StateReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub dfs: Vec<DfsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchReport>,
    pub passed: bool,
    pub failures: Vec<String>,
    pub wall_time_seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HamiltonianSummary {
    pub dim_a: usize,
    pub dim_b: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<&'static str>,
    /// Ascending eigenvalues of the total Hamiltonian.
    pub eigenvalues: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IfeReport {
    pub is_ife: bool,
    pub phase: f64,
    pub phase_imaginary: f64,
    pub krylov_residuals: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynamic_fidelity_deficit: Option<f64>,
    pub tolerance: f64,
}

impl From<&IfeVerdict> for IfeReport {
    fn from(v: &IfeVerdict) -> Self {
        IfeReport {
            is_ife: v.is_ife,
            phase: v.phase,
            phase_imaginary: v.phase_imaginary,
            krylov_residuals: v.krylov_residuals.clone(),
            dynamic_fidelity_deficit: v.dynamic_fidelity_deficit,
            tolerance: v.tolerance,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassResidualReport {
    pub order: usize,
    pub delta: f64,
    pub magnitude: f64,
    pub tuples: usize,
}

impl From<&ClassResidual> for ClassResidualReport {
    fn from(r: &ClassResidual) -> Self {
        ClassResidualReport { order: r.order, delta: r.delta, magnitude: r.magnitude, tuples: r.tuples }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GifeReport {
    pub is_gife: bool,
    pub is_proper_gife: bool,
    /// `max_drift[k - 1]` is the peak-to-peak variation of `tr ρ_B^k`.
    pub max_drift: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebraic_is_gife: Option<bool>,
    pub algebraic_residuals: Vec<ClassResidualReport>,
    pub disagreement: bool,
    pub tolerance: f64,
}

impl From<&GifeVerdict> for GifeReport {
    fn from(v: &GifeVerdict) -> Self {
        GifeReport {
            is_gife: v.is_gife,
            is_proper_gife: v.is_proper_gife,
            max_drift: v.max_drift.clone(),
            algebraic_is_gife: v.algebraic_is_gife,
            algebraic_residuals: v.algebraic_residuals.iter().map(Into::into).collect(),
            disagreement: v.disagreement(),
            tolerance: v.tolerance,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AssertionReport {
    pub name: &'static str,
    pub expected: bool,
    pub actual: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrajectoryFiles {
    /// File names relative to the output directory.
    pub functionals: String,
    pub schmidt: String,
    pub schmidt_coefficient_drift: f64,
    pub degenerate_tracking: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StateReport {
    pub label: String,
    pub schmidt_coefficients: Vec<f64>,
    pub ife_algebraic: IfeReport,
    pub ife_dynamic: IfeReport,
    pub gife: GifeReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub assertions: Vec<AssertionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectories: Option<TrajectoryFiles>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DfsTermReport {
    pub weight: f64,
    pub scalar: f64,
    pub scalar_imaginary: f64,
    pub scalar_defect: f64,
    pub leakage: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DfsReport {
    pub basis_index: usize,
    pub dimension: usize,
    pub is_dfs: bool,
    pub scalars: Vec<f64>,
    pub terms: Vec<DfsTermReport>,
    pub system_leakage: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effective_env_hamiltonian: Option<MatrixJson>,
    pub tolerance: f64,
}

impl DfsReport {
    pub fn new(basis_index: usize, dimension: usize, v: &DfsVerdict) -> Self {
        DfsReport {
            basis_index,
            dimension,
            is_dfs: v.is_dfs,
            scalars: v.scalars.clone(),
            terms: v
                .terms
                .iter()
                .map(|t| DfsTermReport {
                    weight: t.weight,
                    scalar: t.scalar,
                    scalar_imaginary: t.scalar_imaginary,
                    scalar_defect: t.scalar_defect,
                    leakage: t.leakage,
                })
                .collect(),
            system_leakage: v.system_leakage,
            effective_env_hamiltonian: v.effective_env_hamiltonian.as_ref().map(matrix_to_json),
            tolerance: v.tolerance,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SupportReport {
    /// Sorted 0-based indices into `SearchReport::eigenvalues`.
    pub support: Vec<usize>,
    pub is_proper_gife: bool,
    pub max_residual: f64,
    pub ife_residual: f64,
    /// Worst trace-power drift of the random draws under the full
    /// evolution.
    pub dynamic_max_drift: f64,
}

impl SupportReport {
    pub fn new(p: &SupportPattern, dynamic_max_drift: f64) -> Self {
        SupportReport {
            support: p.support.clone(),
            is_proper_gife: p.is_proper_gife,
            max_residual: p.max_residual,
            ife_residual: p.ife_residual,
            dynamic_max_drift,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchReport {
    pub eigenbasis: Eigenbasis,
    pub eigenvalues: Vec<f64>,
    pub k_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub supports_tested: usize,
    pub families: Vec<SupportReport>,
    pub singletons: Vec<SupportReport>,
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn max(v: &[f64]) -> f64 {
    v.iter().cloned().fold(0.0, f64::max)
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let h = &self.hamiltonian;
        let _ = writeln!(
            out,
            "{} {}: {}x{} system{}",
            self.tool,
            self.command,
            h.dim_a,
            h.dim_b,
            h.family.map(|f| format!(" ({f})")).unwrap_or_default()
        );
        for s in &self.states {
            let _ = writeln!(out, "{}:", s.label);
            let _ = writeln!(
                out,
                "  IFE algebraic {} (residual {:.3e}, phase {:.6}), dynamic {} (deficit {:.3e})",
                yes(s.ife_algebraic.is_ife),
                max(&s.ife_algebraic.krylov_residuals),
                s.ife_algebraic.phase,
                yes(s.ife_dynamic.is_ife),
                s.ife_dynamic.dynamic_fidelity_deficit.unwrap_or(0.0)
            );
            let _ = writeln!(
                out,
                "  GIFE {} (drift {:.3e}), proper {}, algebraic {} (residual {:.3e})",
                yes(s.gife.is_gife),
                max(&s.gife.max_drift),
                yes(s.gife.is_proper_gife),
                s.gife.algebraic_is_gife.map(yes).unwrap_or("-"),
                s.gife.algebraic_residuals.iter().map(|r| r.magnitude).fold(0.0, f64::max)
            );
            for a in &s.assertions {
                let _ = writeln!(
                    out,
                    "  assert {} = {}: {}",
                    a.name,
                    a.expected,
                    if a.passed { "ok" } else { "FAILED" }
                );
            }
            if let Some(t) = &s.trajectories {
                let _ = writeln!(out, "  wrote {} and {}", t.functionals, t.schmidt);
            }
        }
        for d in &self.dfs {
            let _ = writeln!(
                out,
                "DFS basis {} (dim {}): {} (scalars {:?})",
                d.basis_index,
                d.dimension,
                yes(d.is_dfs),
                d.scalars
            );
        }
        if let Some(s) = &self.search {
            let basis = match s.eigenbasis {
                Eigenbasis::Ascending => "ascending",
                Eigenbasis::Reference => "reference",
            };
            let _ = writeln!(out, "search over {} eigenvectors ({basis} order), {} supports tested", s.eigenvalues.len(), s.supports_tested);
            for f in &s.families {
                let _ = writeln!(
                    out,
                    "  {:?}: {} (residual {:.3e}, drift {:.3e})",
                    f.support,
                    if f.is_proper_gife { "proper GIFE" } else { "IFE" },
                    f.max_residual,
                    f.dynamic_max_drift
                );
            }
        }
        for f in &self.failures {
            let _ = writeln!(out, "failure: {f}");
        }
        let _ = writeln!(out, "{}", if self.passed { "passed" } else { "FAILED" });
        out
    }
}
