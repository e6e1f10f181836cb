use gife_core::detect::{dfs_check, ife_algebraic_check, ife_dynamic_check};
use gife_core::dynamics::TimeGrid;
use gife_core::families::{
    pure_dephasing, random_projector_family, spin_boson_dephasing, two_qubit_xy, FamilyInstance,
};
use gife_core::gife::gife_dynamic_check;
use gife_core::random::{random_hermitian, rng};
use gife_core::DEFAULT_TOL;
use rand::Rng;

fn check_instance(f: &FamilyInstance, grid: &TimeGrid, label: &str) {
    let h = &f.hamiltonian;
    for basis in &f.known_dfs_bases {
        let v = dfs_check(h, basis, DEFAULT_TOL).unwrap();
        assert!(v.is_dfs, "{label}: DFS residuals {:?}", v.residuals());
    }
    for s in &f.known_ife_states {
        let a = ife_algebraic_check(h, s, DEFAULT_TOL).unwrap();
        assert!(a.is_ife, "{label}: Krylov residual {}", a.max_krylov_residual());
        let d = ife_dynamic_check(h, s, grid, DEFAULT_TOL).unwrap();
        assert!(d.is_ife, "{label}: fidelity deficit {:?}", d.dynamic_fidelity_deficit);
    }
    for s in &f.known_gife_states {
        let v = gife_dynamic_check(h, s, grid, DEFAULT_TOL).unwrap();
        assert!(v.is_gife, "{label}: drift {:?}", v.max_drift);
    }
}

#[test]
fn two_qubit_known_states_over_random_parameters() {
    let grid = TimeGrid::default();
    let mut r = rng(11);
    for seed in 0..10 {
        let (wa, wb, g) = (r.random_range(0.2..2.0), r.random_range(0.2..2.0), r.random_range(0.05..1.0));
        check_instance(&two_qubit_xy(wa, wb, g).unwrap(), &grid, &format!("two-qubit seed {seed}"));
    }
}

#[test]
fn spin_boson_known_states_over_random_parameters() {
    let grid = TimeGrid::default();
    let mut r = rng(12);
    for seed in 0..10 {
        let spins = [r.random_range(0.3..1.5), r.random_range(0.3..1.5)];
        let f = spin_boson_dephasing(2, &spins, &[r.random_range(0.5..1.5)], &[r.random_range(0.05..0.4)], 4).unwrap();
        check_instance(&f, &grid, &format!("spin-boson seed {seed}"));
    }
}

#[test]
fn pure_dephasing_known_states_over_random_parameters() {
    let grid = TimeGrid::default();
    for seed in 0..10 {
        let mut r = rng(100 + seed);
        let eps: Vec<f64> = (0..3).map(|_| r.random_range(-1.0..1.0)).collect();
        let h_b = random_hermitian(&mut r, 3);
        let b = (0..3).map(|_| random_hermitian(&mut r, 3).scale_real(0.3)).collect();
        let f = pure_dephasing(&eps, h_b, b).unwrap();
        check_instance(&f, &grid, &format!("dephasing seed {seed}"));
    }
}

#[test]
fn projector_known_states_over_seeds() {
    let grid = TimeGrid::default();
    for seed in 0..10 {
        for commuting in [false, true] {
            let f = random_projector_family(4, 4, 2, 2, commuting, seed).unwrap();
            check_instance(&f, &grid, &format!("projector seed {seed} commuting {commuting}"));
        }
    }
}
