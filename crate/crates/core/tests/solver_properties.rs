use leastgrad_core::cut_height;
use leastgrad_core::solver::{
    build_grid, chord_sum_reference, default_band_width, nonattainment_experiment, sample_trace, sample_trace_rotated,
    solve_tv, CellKind, Coupling, DiskGrid, SolverConfig,
};
use proptest::prelude::*;

fn grid(resolution: usize) -> DiskGrid {
    build_grid(resolution, default_band_width(resolution)).unwrap()
}

fn energy(g: &DiskGrid, n: usize, rotation: f64) -> f64 {
    let t = sample_trace_rotated(g, n, rotation).unwrap();
    solve_tv(g, &t, &SolverConfig::default()).unwrap().energy
}

#[test]
fn energy_ignores_rotation() {
    let g = grid(512);
    let base = energy(&g, 0, 0.0);
    for rotation in [1.0, 2.0, -2.6] {
        let turned = energy(&g, 0, rotation);
        assert!((turned - base).abs() < 0.01 * base, "{rotation}: {turned} vs {base}");
    }
}

#[test]
fn superlevel_set_hugs_the_segment() {
    let g = grid(256);
    let t = sample_trace(&g, 0).unwrap();
    let r = solve_tv(&g, &t, &SolverConfig::default()).unwrap();
    let floor = cut_height() - 3.0 * g.h();
    let mut above = 0;
    for (c, kind) in g.kinds().iter().enumerate() {
        if *kind != CellKind::Interior || r.field.values[c] <= 0.5 {
            continue;
        }
        let (x, y) = g.centre(c);
        assert!(y >= floor, "cell at ({x}, {y}) with u = {}", r.field.values[c]);
        above += 1;
    }
    assert!(above > 0);
}

#[test]
fn refinement_moves_less_than_the_current_error() {
    for n in [0, 1] {
        let reference = chord_sum_reference(n);
        let energies: Vec<f64> = [64, 128, 256].iter().map(|r| energy(&grid(*r), n, 0.0)).collect();
        for w in energies.windows(2) {
            let error = (w[0] - reference).abs();
            assert!((w[1] - w[0]).abs() <= error + 1e-6, "n = {n}: {energies:?}");
        }
    }
}

#[test]
fn couplings_agree_on_resolved_traces() {
    let g = grid(128);
    let t = sample_trace(&g, 0).unwrap();
    let circle = solve_tv(&g, &t, &SolverConfig::default()).unwrap();
    let band = SolverConfig {
        coupling: Coupling::Band,
        ..SolverConfig::default()
    };
    let band = solve_tv(&g, &t, &band).unwrap();
    assert!((circle.energy - band.energy).abs() < 0.03 * circle.energy);
}

#[test]
fn small_experiment_descends() {
    let table = nonattainment_experiment(3, 128, &SolverConfig::default()).unwrap();
    assert_eq!(table.rows.len(), 4);
    assert!(table.energy_decreasing());
    assert!(table.energies_above(0.01));
    assert!(table.mass_decreasing());
    for row in &table.rows {
        assert!(row.energy <= row.k_n * 1.03, "{row:?}");
        assert!(row.converged);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn maximum_principle(n in 0usize..6, rotation in -3.0f64..3.0, band in any::<bool>()) {
        let g = grid(64);
        let t = sample_trace_rotated(&g, n, rotation).unwrap();
        let config = SolverConfig {
            coupling: if band { Coupling::Band } else { Coupling::Circle },
            ..SolverConfig::default()
        };
        let r = solve_tv(&g, &t, &config).unwrap();
        prop_assert!(r.field.values.iter().all(|v| (-1e-6..=1.0 + 1e-6).contains(v)));
        prop_assert!(r.energy >= 0.0 && r.gap >= 0.0);
    }
}
