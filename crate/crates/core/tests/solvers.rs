mod common;

use scuq_core::experiments::ex4_bottom;
use scuq_core::solvers::*;
use scuq_core::Error;

fn sod_density_l1(cells: usize) -> f64 {
    let exact = common::sod();
    let grid = Grid1D::new(0.0, 1.0, cells).unwrap();
    let model = Euler::new(1.4);
    let init = model
        .state_from_primitive(&grid, |x| if x <= 0.5 { (1.0, 0.0, 1.0) } else { (0.125, 0.0, 0.1) })
        .unwrap();
    let params = SolverParams { t_final: 0.1644, ..SolverParams::default() };
    let sol = solve(&model, &grid, init, &params).unwrap();
    assert_eq!(sol.time, 0.1644);
    grid.centers()
        .iter()
        .zip(sol.state.component(0))
        .map(|(&x, &rho)| (rho - exact.sample((x - 0.5) / 0.1644).0).abs() * grid.dx())
        .sum()
}

#[test]
fn exact_riemann_star_state() {
    let sod = common::sod();
    assert!((sod.p_star - 0.30313017805).abs() < 1e-9);
    assert!((sod.u_star - 0.92745262004).abs() < 1e-8);
}

#[test]
fn sod_converges_at_first_order_or_better() {
    let errors: Vec<f64> = [100, 200, 400].map(sod_density_l1).to_vec();
    assert!(errors[1] < 0.01, "{errors:?}");
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order > 0.6, "order {order} from {errors:?}");
    }
}

#[test]
fn euler_conserves_mass_and_energy() {
    // the waves stay inside the domain, so free boundaries are closed
    let grid = Grid1D::new(0.0, 1.0, 200).unwrap();
    let model = Euler::new(1.4);
    let init = model
        .state_from_primitive(&grid, |x| if x <= 0.5 { (1.0, 0.0, 1.0) } else { (0.125, 0.0, 0.1) })
        .unwrap();
    let totals = |s: &State<f64>| (0..3).map(|m| s.component(m).iter().sum::<f64>()).collect::<Vec<_>>();
    let before = totals(&init);
    let sol = solve(&model, &grid, init, &SolverParams { t_final: 0.15, ..SolverParams::default() }).unwrap();
    let after = totals(&sol.state);
    assert!((after[0] - before[0]).abs() < 1e-12 * before[0]);
    assert!((after[2] - before[2]).abs() < 1e-12 * before[2]);
}

#[test]
fn negative_pressure_is_reported_with_its_cell() {
    let grid = Grid1D::new(0.0, 1.0, 50).unwrap();
    let model = Euler::new(1.4);
    let mut init = model.state_from_primitive(&grid, |_| (1.0, 0.0, 1.0)).unwrap();
    let mut components = init.components().to_vec();
    // kinetic energy above the total energy
    components[1][17] = 10.0;
    init = State::new(components).unwrap();
    match solve(&model, &grid, init, &SolverParams::default()) {
        Err(Error::State { cell, .. }) => assert_eq!(cell, 17),
        other => panic!("expected a state error, got {other:?}"),
    }
}

#[test]
fn lake_at_rest_over_the_bump() {
    let grid = Grid1D::with_spacing(-1.0, 1.0, 1.0 / 400.0).unwrap();
    for xi in [-1.0, -0.2, 0.6, 1.0] {
        let model = Swe::new(1.0, &grid, ex4_bottom(xi), 1.0).unwrap();
        let mut state = model.state_from_surface(&grid, |_| (1.0, 0.0)).unwrap();
        for _ in 0..1000 {
            let dt = cfl_dt(&state, &model, &grid, 0.45, 1.3).unwrap();
            state = ssp_rk3_step(&state, dt, |u| Ok(central_upwind_rhs(u, &model, &grid, 1.3)?.rate)).unwrap();
        }
        let out = model.output(&state);
        let w = &out.iter().find(|(n, _)| *n == "w").unwrap().1;
        assert!(w.iter().all(|v| (v - 1.0).abs() < 1e-12), "ξ = {xi}");
        assert!(state.component(1).iter().all(|v| v.abs() < 1e-12), "ξ = {xi}");
    }
}

#[test]
fn dam_break_conserves_water() {
    let grid = Grid1D::with_spacing(-1.0, 1.0, 1.0 / 400.0).unwrap();
    let model = Swe::new(1.0, &grid, ex4_bottom(0.5), 1.0).unwrap();
    let init = model.state_from_surface(&grid, |x| (if x < 0.0 { 1.0 } else { 0.5 }, 0.0)).unwrap();
    let mass0: f64 = init.component(0).iter().sum();
    let sol = solve(&model, &grid, init, &SolverParams { t_final: 0.8, ..SolverParams::default() }).unwrap();
    let mass: f64 = sol.state.component(0).iter().sum();
    assert!((mass - mass0).abs() < 1e-12 * mass0);
    assert!(sol.state.component(0).iter().all(|&h| h >= 0.0));
}

#[test]
fn dry_bed_stays_nonnegative() {
    let grid = Grid1D::new(-1.0, 1.0, 200).unwrap();
    let model = Swe::new(9.81, &grid, |x: f64| if x > 0.3 { 2.0 } else { 0.0 }, 1.0).unwrap();
    let init = model.state_from_surface(&grid, |x| (if x < 0.0 { 1.0 } else { 0.0 }, 0.0)).unwrap();
    let sol = solve(&model, &grid, init, &SolverParams { t_final: 0.3, ..SolverParams::default() }).unwrap();
    assert!(sol.state.component(0).iter().all(|&h| h >= 0.0 && h.is_finite()));
}
