//! Scenario configuration (`"schema": 1`) and its resolution into
//! Hamiltonians, eigensystems and states.

use std::path::{Path, PathBuf};

use gife_core::dynamics::{Evolution, TimeGrid};
use gife_core::families::{
    pure_dephasing, random_projector_family, spin_boson_dephasing, two_qubit_xy, FamilyInstance, TwoQubitXyMetadata,
};
use gife_core::gife::DEFAULT_TRIALS;
use gife_core::model::assemble_total;
use gife_core::{BipartiteHamiltonian, CVector, EigenSystem, PureState, C64, DEFAULT_TOL};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::formats::{
    square_matrix_from_json, vector_from_json, ComplexJson, HamiltonianJson, MatrixJson, VectorJson,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema: u32,
    pub hamiltonian: HamiltonianSource,
    #[serde(default)]
    pub states: StatesSpec,
    /// Extra system-subspace bases for the DFS check, as lists of vectors.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dfs_bases: Vec<Vec<VectorJson>>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Highest trace power checked; defaults to `min(dimA, dimB)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Random coefficient draws per support in the search.
    #[serde(default = "default_trials")]
    pub trials: usize,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub enum HamiltonianSource {
    Inline(HamiltonianJson),
    File(PathBuf),
    Family(FamilySpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", rename_all_fields = "camelCase", deny_unknown_fields)]
pub enum FamilySpec {
    TwoQubitXy {
        omega_a: f64,
        omega_b: f64,
        gamma: f64,
    },
    SpinBoson {
        spins: usize,
        spin_frequencies: Vec<f64>,
        mode_frequencies: Vec<f64>,
        couplings: Vec<f64>,
        fock_cutoff: usize,
    },
    PureDephasing {
        epsilon: Vec<f64>,
        h_b: MatrixJson,
        couplings: Vec<MatrixJson>,
    },
    Projector {
        dim_a: usize,
        dim_b: usize,
        rank_a: usize,
        rank_b: usize,
        #[serde(default)]
        commuting: bool,
        #[serde(default)]
        seed: u64,
    },
}

impl FamilySpec {
    pub fn build(&self) -> CliResult<FamilyInstance> {
        Ok(match self {
            FamilySpec::TwoQubitXy { omega_a, omega_b, gamma } => two_qubit_xy(*omega_a, *omega_b, *gamma)?,
            FamilySpec::SpinBoson { spins, spin_frequencies, mode_frequencies, couplings, fock_cutoff } => {
                spin_boson_dephasing(*spins, spin_frequencies, mode_frequencies, couplings, *fock_cutoff)?
            }
            FamilySpec::PureDephasing { epsilon, h_b, couplings } => {
                let h_b = square_matrix_from_json(h_b, "hB")?;
                let b = couplings
                    .iter()
                    .enumerate()
                    .map(|(k, m)| square_matrix_from_json(m, &format!("coupling {k}")))
                    .collect::<CliResult<Vec<_>>>()?;
                pure_dephasing(epsilon, h_b, b)?
            }
            FamilySpec::Projector { dim_a, dim_b, rank_a, rank_b, commuting, seed } => {
                random_projector_family(*dim_a, *dim_b, *rank_a, *rank_b, *commuting, *seed)?
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StatesSpec {
    /// `"search"`: no explicit states, run the support search.
    Keyword(StatesKeyword),
    List(Vec<StateSpec>),
}

impl Default for StatesSpec {
    fn default() -> Self {
        StatesSpec::List(Vec::new())
    }
}

impl StatesSpec {
    pub fn list(&self) -> &[StateSpec] {
        match self {
            StatesSpec::List(l) => l,
            _ => &[],
        }
    }

    pub fn is_search(&self) -> bool {
        matches!(self, StatesSpec::Keyword(StatesKeyword::Search))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatesKeyword {
    Search,
}

/// One state; exactly one of `amplitudes`, `product`, `eigenCoefficients`
/// and `known` must be given.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StateSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<VectorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<ProductSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen_coefficients: Option<Vec<ComplexJson>>,
    /// Basis for `eigenCoefficients`; `reference` needs a family with a
    /// closed-form eigensystem and is the default for such families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenbasis: Option<Eigenbasis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known: Option<KnownState>,
    /// Renormalize the amplitudes instead of rejecting non-unit input.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub normalize: bool,
    #[serde(default, skip_serializing_if = "Expectations::is_empty")]
    pub expect: Expectations,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpec {
    pub a: VectorJson,
    pub b: VectorJson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Eigenbasis {
    Ascending,
    Reference,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KnownKind {
    Gife,
    Ife,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnownState {
    pub kind: KnownKind,
    pub index: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_ife: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_gife: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_proper_gife: Option<bool>,
}

impl Expectations {
    pub fn is_empty(&self) -> bool {
        self.is_ife.is_none() && self.is_gife.is_none() && self.is_proper_gife.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GridSpec {
    pub t_max: f64,
    pub samples: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { t_max: 20.0, samples: 200 }
    }
}

/// Flag values that replace the corresponding config entries.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub k_max: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

impl ScenarioConfig {
    pub fn from_hamiltonian_file(path: PathBuf) -> Self {
        ScenarioConfig {
            schema: SCHEMA_VERSION,
            hamiltonian: HamiltonianSource::File(path),
            states: StatesSpec::default(),
            dfs_bases: Vec::new(),
            grid: GridSpec::default(),
            tol: DEFAULT_TOL,
            k_max: None,
            seed: 0,
            trials: DEFAULT_TRIALS,
        }
    }

    pub fn parse(text: &str, what: &str) -> CliResult<Self> {
        let config: ScenarioConfig =
            serde_json::from_str(text).map_err(|source| CliError::Json { what: what.to_string(), source })?;
        if config.schema != SCHEMA_VERSION {
            return Err(CliError::Input(format!("unsupported config schema {}, expected {SCHEMA_VERSION}", config.schema)));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(t) = o.t_max {
            self.grid.t_max = t;
        }
        if let Some(n) = o.samples {
            self.grid.samples = n;
        }
        if let Some(t) = o.tol {
            self.tol = t;
        }
        if o.k_max.is_some() {
            self.k_max = o.k_max;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(t) = o.trials {
            self.trials = t;
        }
    }

    /// Relative file paths are resolved against `base`.
    pub fn resolve(&self, base: Option<&Path>) -> CliResult<Scenario> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Input(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.grid.samples < 2 || !(self.grid.t_max > 0.0 && self.grid.t_max.is_finite()) {
            return Err(CliError::Input(format!(
                "grid needs at least 2 samples and a positive tMax, got {} samples up to {}",
                self.grid.samples, self.grid.t_max
            )));
        }
        let grid = TimeGrid::uniform(self.grid.t_max, self.grid.samples)?;
        let (hamiltonian, family) = match &self.hamiltonian {
            HamiltonianSource::Inline(j) => (j.to_hamiltonian()?, None),
            HamiltonianSource::File(p) => {
                let path = match base {
                    Some(b) if p.is_relative() => b.join(p),
                    _ => p.clone(),
                };
                let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
                let j: HamiltonianJson = serde_json::from_str(&text)
                    .map_err(|source| CliError::Json { what: path.display().to_string(), source })?;
                (j.to_hamiltonian()?, None)
            }
            HamiltonianSource::Family(spec) => {
                let f = spec.build()?;
                (f.hamiltonian.clone(), Some(f))
            }
        };
        let n = hamiltonian.dims.schmidt_rank_bound();
        let k_max = self.k_max.unwrap_or(n);
        if k_max == 0 || k_max > n {
            return Err(CliError::Input(format!("kMax must be in 1..={n}, got {k_max}")));
        }
        if self.trials == 0 {
            return Err(CliError::Input("trials must be at least 1".into()));
        }
        let evolution = Evolution::new(&assemble_total(&hamiltonian)?)?;
        let reference = family
            .as_ref()
            .and_then(TwoQubitXyMetadata::from_instance)
            .map(|m| m.reference.clone());

        let mut scenario = Scenario {
            hamiltonian,
            family,
            evolution,
            reference,
            dfs_bases: Vec::new(),
            states: Vec::new(),
            grid,
            tol: self.tol,
            k_max,
            seed: self.seed,
            trials: self.trials,
        };
        for (i, spec) in self.states.list().iter().enumerate() {
            let state = scenario.build_state(spec).map_err(|e| match e {
                CliError::Input(m) => CliError::Input(format!("state {i}: {m}")),
                CliError::Core(c) => CliError::Input(format!("state {i}: {c}")),
                other => other,
            })?;
            let label = spec.label.clone().unwrap_or_else(|| format!("state-{i}"));
            scenario.states.push(ScenarioState { label, state, expect: spec.expect });
        }
        let da = scenario.hamiltonian.dims.dim_a();
        let mut bases: Vec<Vec<CVector>> = scenario.family.as_ref().map(|f| f.known_dfs_bases.clone()).unwrap_or_default();
        for (i, basis) in self.dfs_bases.iter().enumerate() {
            bases.push(
                basis
                    .iter()
                    .map(|v| vector_from_json(v, da, &format!("dfsBases[{i}]")))
                    .collect::<CliResult<Vec<_>>>()?,
            );
        }
        scenario.dfs_bases = bases;
        Ok(scenario)
    }
}

#[derive(Clone, Debug)]
pub struct ScenarioState {
    pub label: String,
    pub state: PureState,
    pub expect: Expectations,
}

/// A fully resolved configuration.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub hamiltonian: BipartiteHamiltonian,
    pub family: Option<FamilyInstance>,
    /// Evolution in the ascending eigenbasis of the total Hamiltonian.
    pub evolution: Evolution,
    /// Closed-form eigensystem for families that provide one.
    pub reference: Option<EigenSystem>,
    pub dfs_bases: Vec<Vec<CVector>>,
    pub states: Vec<ScenarioState>,
    pub grid: TimeGrid,
    pub tol: f64,
    pub k_max: usize,
    pub seed: u64,
    pub trials: usize,
}

impl Scenario {
    /// The reference eigensystem when available, else the ascending one.
    pub fn labelled_eigensystem(&self) -> (&EigenSystem, Eigenbasis) {
        match &self.reference {
            Some(r) => (r, Eigenbasis::Reference),
            None => (self.evolution.eigensystem(), Eigenbasis::Ascending),
        }
    }

    fn build_state(&self, spec: &StateSpec) -> CliResult<PureState> {
        let dims = self.hamiltonian.dims;
        let given = [
            spec.amplitudes.is_some(),
            spec.product.is_some(),
            spec.eigen_coefficients.is_some(),
            spec.known.is_some(),
        ];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(CliError::Input(
                "exactly one of amplitudes, product, eigenCoefficients, known is required".into(),
            ));
        }
        let make = |v: CVector| -> CliResult<PureState> {
            Ok(if spec.normalize { PureState::normalized(dims, v)? } else { PureState::new(dims, v)? })
        };
        if let Some(a) = &spec.amplitudes {
            return make(vector_from_json(a, dims.total(), "amplitudes")?);
        }
        if let Some(p) = &spec.product {
            let a = vector_from_json(&p.a, dims.dim_a(), "product.a")?;
            let b = vector_from_json(&p.b, dims.dim_b(), "product.b")?;
            return Ok(PureState::product(dims, &a, &b)?);
        }
        if let Some(c) = &spec.eigen_coefficients {
            let es = match spec.eigenbasis {
                Some(Eigenbasis::Ascending) => self.evolution.eigensystem(),
                Some(Eigenbasis::Reference) => self
                    .reference
                    .as_ref()
                    .ok_or_else(|| CliError::Input("this Hamiltonian has no reference eigenbasis".into()))?,
                None => self.labelled_eigensystem().0,
            };
            let c: Vec<C64> = vector_from_json(c, dims.total(), "eigenCoefficients")?.into_inner();
            let v = es.combine(&c);
            return Ok(make(v)?.with_expansion(es)?);
        }
        let known = spec.known.expect("one source given");
        let family = self
            .family
            .as_ref()
            .ok_or_else(|| CliError::Input("known states need a family Hamiltonian".into()))?;
        let list = match known.kind {
            KnownKind::Gife => &family.known_gife_states,
            KnownKind::Ife => &family.known_ife_states,
        };
        list.get(known.index)
            .cloned()
            .ok_or_else(|| CliError::Input(format!("known state index {} out of range ({} available)", known.index, list.len())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_QUBIT: &str = r#"{
        "schema": 1,
        "hamiltonian": {"family": {"name": "two-qubit-xy", "omegaA": 1.0, "omegaB": 0.7, "gamma": 0.3}},
        "states": [{"eigenCoefficients": [[0,0],[0.7071067811865476,0],[0,0],[0.7071067811865476,0]], "expect": {"isGife": true}}]
    }"#;

    #[test]
    fn parses_defaults() {
        let c = ScenarioConfig::parse(TWO_QUBIT, "test").unwrap();
        assert_eq!(c.grid, GridSpec { t_max: 20.0, samples: 200 });
        assert_eq!(c.tol, 1e-8);
        assert_eq!(c.trials, 8);
        let s = c.resolve(None).unwrap();
        assert_eq!(s.k_max, 2);
        assert_eq!(s.states.len(), 1);
        assert_eq!(s.states[0].label, "state-0");
        assert!(s.reference.is_some());
    }

    #[test]
    fn search_keyword_and_round_trip() {
        let text = r#"{"schema":1,"hamiltonian":{"family":{"name":"projector","dimA":2,"dimB":3,"rankA":1,"rankB":2}},"states":"search"}"#;
        let c = ScenarioConfig::parse(text, "test").unwrap();
        assert!(c.states.is_search());
        let again = ScenarioConfig::parse(&serde_json::to_string(&c).unwrap(), "echo").unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rejections() {
        assert!(ScenarioConfig::parse(&TWO_QUBIT.replace("\"schema\": 1", "\"schema\": 2"), "t").is_err());
        assert!(ScenarioConfig::parse("{", "t").is_err());
        let both = r#"{"schema":1,"hamiltonian":{"file":"a.json","family":{"name":"two-qubit-xy","omegaA":1,"omegaB":1,"gamma":1}}}"#;
        assert!(ScenarioConfig::parse(both, "t").is_err());
        let mut c = ScenarioConfig::parse(TWO_QUBIT, "t").unwrap();
        c.apply(&Overrides { t_max: Some(0.0), ..Default::default() });
        assert!(matches!(c.resolve(None), Err(CliError::Input(_))));
        let mut c = ScenarioConfig::parse(TWO_QUBIT, "t").unwrap();
        c.apply(&Overrides { k_max: Some(3), ..Default::default() });
        assert!(c.resolve(None).is_err());
        let mut c = ScenarioConfig::parse(TWO_QUBIT, "t").unwrap();
        c.states = StatesSpec::List(vec![StateSpec { known: Some(KnownState { kind: KnownKind::Ife, index: 9 }), ..Default::default() }]);
        assert!(c.resolve(None).is_err());
    }
}
