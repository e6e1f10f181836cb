use std::fs;
use std::path::Path;
use std::time::Instant;

use gife_core::detect::{dfs_check, ife_algebraic_check, ife_dynamic_check_with};
use gife_core::dynamics::{functional_trajectories_with, schmidt_trajectory_with, Evolution};
use gife_core::families::{
    FamilyInstance, FamilyMetadata, ProjectorFamilyMetadata, PureDephasingMetadata, SpinBosonMetadata,
    TwoQubitXyMetadata,
};
use gife_core::gife::{find_gife_supports, gife_dynamic_check_with, AlgebraicChecker, SupportPattern, MAX_SEARCH_DIMENSION};
use gife_core::numerics::schmidt_decompose;
use gife_core::random::{random_supported, rng};
use gife_core::{Error, PureState};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Expectations, Scenario, ScenarioConfig, ScenarioState};
use crate::error::{CliError, CliResult};
use crate::formats::{matrix_to_json, vector_to_json, HamiltonianJson, StateJson};
use crate::report::{
    AssertionReport, DfsReport, HamiltonianSummary, Report, SearchReport, StateReport, SupportReport, TrajectoryFiles,
};

fn summary(s: &Scenario) -> HamiltonianSummary {
    HamiltonianSummary {
        dim_a: s.hamiltonian.dims.dim_a(),
        dim_b: s.hamiltonian.dims.dim_b(),
        family: s.family.as_ref().map(|f| f.metadata.name()),
        eigenvalues: s.evolution.eigensystem().eigenvalues().to_vec(),
    }
}

fn assertions(expect: &Expectations, is_ife: bool, is_gife: bool, is_proper: bool) -> Vec<AssertionReport> {
    [("isIfe", expect.is_ife, is_ife), ("isGife", expect.is_gife, is_gife), ("isProperGife", expect.is_proper_gife, is_proper)]
        .into_iter()
        .filter_map(|(name, expected, actual)| {
            expected.map(|expected| AssertionReport { name, expected, actual, passed: expected == actual })
        })
        .collect()
}

fn check_state(
    s: &Scenario,
    free: &Evolution,
    checker: &AlgebraicChecker<'_>,
    st: &ScenarioState,
) -> CliResult<StateReport> {
    let h = &s.hamiltonian;
    let ife_alg = ife_algebraic_check(h, &st.state, s.tol)?;
    let ife_dyn = ife_dynamic_check_with(h, &s.evolution, free, &st.state, &s.grid, s.tol)?;
    let gife = gife_dynamic_check_with(h, &s.evolution, &st.state, &s.grid, s.tol)?
        .with_algebraic(checker, &st.state, s.k_max)?;
    let dims = h.dims;
    let schmidt = schmidt_decompose(st.state.amplitudes(), dims.dim_a(), dims.dim_b())?;
    Ok(StateReport {
        label: st.label.clone(),
        schmidt_coefficients: schmidt.coefficients,
        ife_algebraic: (&ife_alg).into(),
        ife_dynamic: (&ife_dyn).into(),
        assertions: assertions(&st.expect, ife_alg.is_ife, gife.is_gife, gife.is_proper_gife),
        gife: (&gife).into(),
        trajectories: None,
    })
}

fn check_states(s: &Scenario) -> CliResult<Vec<StateReport>> {
    let free = Evolution::new(&s.hamiltonian.free_part()?)?;
    let checker = AlgebraicChecker::new(s.labelled_eigensystem().0, s.hamiltonian.dims, None)?;
    s.states.par_iter().map(|st| check_state(s, &free, &checker, st)).collect()
}

fn state_failures(states: &[StateReport], failures: &mut Vec<String>) {
    for st in states {
        for a in st.assertions.iter().filter(|a| !a.passed) {
            failures.push(format!("{}: expected {} = {}, got {}", st.label, a.name, a.expected, a.actual));
        }
        if st.gife.disagreement {
            failures.push(format!("{}: algebraic and dynamic GIFE verdicts disagree", st.label));
        }
        if st.ife_algebraic.is_ife != st.ife_dynamic.is_ife {
            failures.push(format!("{}: algebraic and dynamic IFE verdicts disagree", st.label));
        }
    }
}

fn dfs_reports(s: &Scenario, failures: &mut Vec<String>) -> CliResult<Vec<DfsReport>> {
    let mut out = Vec::new();
    for (i, basis) in s.dfs_bases.iter().enumerate() {
        let v = dfs_check(&s.hamiltonian, basis, s.tol)?;
        if !v.is_dfs {
            failures.push(format!("DFS basis {i} is not decoherence-free"));
        }
        out.push(DfsReport::new(i, basis.len(), &v));
    }
    Ok(out)
}

fn search_report(s: &Scenario, failures: &mut Vec<String>) -> CliResult<SearchReport> {
    let (es, basis) = s.labelled_eigensystem();
    if es.dim() > MAX_SEARCH_DIMENSION {
        return Err(Error::Capacity { what: "support search dimension", requested: es.dim(), limit: MAX_SEARCH_DIMENSION }.into());
    }
    let found = find_gife_supports(&s.hamiltonian, es, s.k_max, s.trials, s.seed, s.tol)?;
    // Every reported family is re-drawn and checked under the full evolution.
    let verify = |p: &SupportPattern| -> CliResult<SupportReport> {
        let mut r = rng(s.seed ^ 0xD1B5_4A32_D192_ED03 ^ p.support.iter().fold(0u64, |m, &i| m | 1 << i));
        let mut worst: f64 = 0.0;
        for _ in 0..s.trials {
            let c = random_supported(&mut r, es.dim(), &p.support);
            let chi = PureState::from_eigen_coefficients(s.hamiltonian.dims, es, &c)?;
            let v = gife_dynamic_check_with(&s.hamiltonian, &s.evolution, &chi, &s.grid, s.tol)?;
            worst = worst.max(v.max_drift());
        }
        Ok(SupportReport::new(p, worst))
    };
    let families: Vec<SupportReport> = found.families.par_iter().map(verify).collect::<CliResult<_>>()?;
    let singletons: Vec<SupportReport> = found.singletons.par_iter().map(verify).collect::<CliResult<_>>()?;
    for f in families.iter().chain(&singletons) {
        if f.dynamic_max_drift > s.tol {
            failures.push(format!(
                "support {:?} passed the algebraic conditions but drifts by {:e} under the full evolution",
                f.support, f.dynamic_max_drift
            ));
        }
    }
    Ok(SearchReport {
        eigenbasis: basis,
        eigenvalues: es.eigenvalues().to_vec(),
        k_max: found.k_max,
        trials: found.trials,
        seed: found.seed,
        tolerance: found.tolerance,
        supports_tested: found.supports_tested,
        families,
        singletons,
    })
}

fn finish(command: &'static str, config: &ScenarioConfig, s: &Scenario, start: Instant) -> Report {
    Report {
        tool: "gife",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config: config.clone(),
        hamiltonian: summary(s),
        states: Vec::new(),
        dfs: Vec::new(),
        search: None,
        passed: true,
        failures: Vec::new(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
    }
}

/// IFE and GIFE checks for every configured state, DFS checks for known
/// and configured bases, and the support search when `states` is
/// `"search"`.
pub fn cmd_check(config: &ScenarioConfig, base: Option<&Path>) -> CliResult<Report> {
    let start = Instant::now();
    let s = config.resolve(base)?;
    let mut failures = Vec::new();
    let states = check_states(&s)?;
    state_failures(&states, &mut failures);
    let dfs = dfs_reports(&s, &mut failures)?;
    let search = if config.states.is_search() { Some(search_report(&s, &mut failures)?) } else { None };
    let mut report = finish("check", config, &s, start);
    report.states = states;
    report.dfs = dfs;
    report.search = search;
    report.passed = failures.is_empty();
    report.failures = failures;
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Support search over the eigenbasis (the closed-form one for families
/// that have it).
pub fn cmd_search(config: &ScenarioConfig, base: Option<&Path>) -> CliResult<Report> {
    let start = Instant::now();
    let s = config.resolve(base)?;
    let mut failures = Vec::new();
    let search = search_report(&s, &mut failures)?;
    let mut report = finish("search", config, &s, start);
    report.search = Some(search);
    report.passed = failures.is_empty();
    report.failures = failures;
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn write_trajectories(s: &Scenario, index: usize, st: &ScenarioState, out: &Path) -> CliResult<TrajectoryFiles> {
    let functionals = format!("state-{index}-functionals.csv");
    let schmidt = format!("state-{index}-schmidt.csv");
    let times = s.grid.samples();

    let fs_path = out.join(&functionals);
    let mut w = csv::Writer::from_path(&fs_path)?;
    w.write_record(["t", "k", "value"])?;
    for f in functional_trajectories_with(&s.evolution, &st.state, &s.grid, s.k_max)? {
        for (t, v) in times.iter().zip(&f.values) {
            w.write_record([t.to_string(), f.k.to_string(), v.to_string()])?;
        }
    }
    w.flush().map_err(|e| CliError::io(&fs_path, e))?;

    let n = s.hamiltonian.dims.schmidt_rank_bound();
    let traj = schmidt_trajectory_with(&s.evolution, &st.state, &s.grid)?;
    let sc_path = out.join(&schmidt);
    let mut w = csv::Writer::from_path(&sc_path)?;
    w.write_record(["t", "l", "p_l"])?;
    for (t, sample) in times.iter().zip(&traj.samples) {
        for (l, c) in sample.padded_coefficients(n).iter().enumerate() {
            w.write_record([t.to_string(), (l + 1).to_string(), (c * c).to_string()])?;
        }
    }
    w.flush().map_err(|e| CliError::io(&sc_path, e))?;

    Ok(TrajectoryFiles {
        functionals,
        schmidt,
        schmidt_coefficient_drift: traj.coefficient_drift(n),
        degenerate_tracking: traj.degenerate_tracking,
    })
}

/// As [`cmd_check`] for the configured states, additionally writing
/// `state-<i>-functionals.csv` (`t,k,value`) and `state-<i>-schmidt.csv`
/// (`t,l,p_l`) into `out`.
pub fn cmd_evolve(config: &ScenarioConfig, base: Option<&Path>, out: &Path) -> CliResult<Report> {
    let start = Instant::now();
    let s = config.resolve(base)?;
    if s.states.is_empty() {
        return Err(CliError::Input("evolve needs at least one state".into()));
    }
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let mut states = check_states(&s)?;
    for (i, (report, st)) in states.iter_mut().zip(&s.states).enumerate() {
        report.trajectories = Some(write_trajectories(&s, i, st, out)?);
    }
    let mut failures = Vec::new();
    state_failures(&states, &mut failures);
    let mut report = finish("evolve", config, &s, start);
    report.states = states;
    report.passed = failures.is_empty();
    report.failures = failures;
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn states_json(states: &[PureState]) -> Vec<StateJson> {
    states.iter().map(StateJson::from_state).collect()
}

/// Family-specific metadata plus the known subspaces and states.
pub fn family_metadata(f: &FamilyInstance) -> Value {
    let details = match &f.metadata {
        FamilyMetadata::TwoQubitXy(m) => two_qubit_details(m),
        FamilyMetadata::SpinBoson(m) => spin_boson_details(m),
        FamilyMetadata::PureDephasing(m) => dephasing_details(m),
        FamilyMetadata::Projector(m) => projector_details(m),
    };
    json!({
        "family": f.metadata.name(),
        "details": details,
        "knownDfsBases": f.known_dfs_bases.iter().map(|b| b.iter().map(vector_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "knownGifeStates": states_json(&f.known_gife_states),
        "knownIfeStates": states_json(&f.known_ife_states),
    })
}

fn two_qubit_details(m: &TwoQubitXyMetadata) -> Value {
    json!({
        "omegaA": m.omega_a,
        "omegaB": m.omega_b,
        "gamma": m.gamma,
        "eigenvalues": m.eigenvalues,
        "eigenvectors": (0..4).map(|i| vector_to_json(&m.reference.vector(i))).collect::<Vec<_>>(),
        "omegaTilde": m.omega_tilde,
        "supports": m.families.iter().map(|f| json!({"support": f.support, "ife": f.ife})).collect::<Vec<_>>(),
    })
}

fn spin_boson_details(m: &SpinBosonMetadata) -> Value {
    json!({
        "spinFrequencies": m.spin_frequencies,
        "modeFrequencies": m.mode_frequencies,
        "couplings": m.couplings,
        "fockCutoff": m.fock_cutoff,
        "sectors": m.sectors.iter().map(|s| json!({
            "m": s.m,
            "dimension": s.basis.len(),
            "interactionFree": s.interaction_free,
            "effectiveEnvHamiltonian": matrix_to_json(&s.effective_env_hamiltonian),
        })).collect::<Vec<_>>(),
    })
}

fn dephasing_details(m: &PureDephasingMetadata) -> Value {
    json!({
        "epsilon": m.epsilon,
        "couplings": m.couplings.iter().map(matrix_to_json).collect::<Vec<_>>(),
        "zOperators": m.z_operators.iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

fn projector_details(m: &ProjectorFamilyMetadata) -> Value {
    json!({
        "seed": m.seed,
        "perpScale": m.perp_scale,
        "commuting": m.commuting,
        "piA": matrix_to_json(&m.pi_a),
        "piB": matrix_to_json(&m.pi_b),
        "deltaPerp": matrix_to_json(&m.delta_perp),
        "hAEff": matrix_to_json(&m.h_a_eff),
        "hBEff": matrix_to_json(&m.h_b_eff),
        "hIEff": matrix_to_json(&m.h_i_eff),
        "ifeBlocks": m.ife_blocks.iter().map(|b| json!({
            "alpha": b.alpha,
            "beta": b.beta,
            "basisA": b.basis_a.iter().map(vector_to_json).collect::<Vec<_>>(),
            "basisB": b.basis_b.iter().map(vector_to_json).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

/// Writes `hamiltonian.json` and `metadata.json` into `out`, or returns
/// both in one document when `out` is `None`.
pub fn cmd_generate(f: &FamilyInstance, out: Option<&Path>) -> CliResult<Option<String>> {
    let hamiltonian = HamiltonianJson::from_hamiltonian(&f.hamiltonian);
    let metadata = family_metadata(f);
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            for (name, text) in [("hamiltonian.json", compact(&hamiltonian)), ("metadata.json", compact(&metadata))] {
                let path = dir.join(name);
                fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
            }
            Ok(None)
        }
        None => Ok(Some(compact(&json!({ "hamiltonian": hamiltonian, "metadata": metadata })))),
    }
}

fn compact<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}
