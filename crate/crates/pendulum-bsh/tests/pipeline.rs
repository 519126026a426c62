use pendulum_bsh::classical::{component_action, period};
use pendulum_bsh::holonomy::{is_bohr_sommerfeld, parallel_transport, FiberValue};
use pendulum_bsh::minus_one::{odd_reduced_spectrum, orbit_pair_count, reconstruct_odd};
use pendulum_bsh::operators::{LadderAlgebra, QuantumState};
use pendulum_bsh::reduction::{reconstruct_even, reduced_spectrum};
use pendulum_bsh::spectrum::{build_spectrum, validate_hbar};
use pendulum_bsh::{Error, HbarRejection};
use std::f64::consts::{PI, TAU};

const HBARS: [f64; 4] = [0.3, 0.4, 0.5, 0.7];

#[test]
fn every_level_has_trivial_holonomy() {
    for hbar in HBARS {
        let spectrum = build_spectrum(hbar, 10).unwrap();
        for level in spectrum.levels().iter().filter(|l| l.energy > 0.0) {
            let z = parallel_transport(level.energy, FiberValue::new(1.0, 0.0), hbar, 1e-10).unwrap();
            assert!((z - 1.0).norm() < 1e-5, "hbar {hbar} level {}", level.n);
            assert_eq!(is_bohr_sommerfeld(level.energy, hbar, 1e-8), Some(level.n));
        }
    }
}

#[test]
fn level_spacing_follows_the_period() {
    // Neighbouring levels differ by ħ in action, so by about 2πħ/T in energy.
    let hbar = 0.05;
    let spectrum = build_spectrum(hbar, 30).unwrap();
    for pair in spectrum.oscillation().collect::<Vec<_>>().windows(2).skip(1).take(20) {
        let mid = 0.5 * (pair[0].energy + pair[1].energy);
        let predicted = TAU * hbar / period(mid).unwrap();
        let gap = pair[1].energy - pair[0].energy;
        assert!((gap / predicted - 1.0).abs() < 1e-3, "gap {gap} predicted {predicted}");
        let step = 1e-5;
        let slope = (component_action(mid + step).unwrap() - component_action(mid - step).unwrap()) / (2.0 * step);
        assert!((slope * TAU / period(mid).unwrap() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn parity_tables_partition_the_oscillation_levels() {
    for hbar in HBARS {
        let spectrum = build_spectrum(hbar, 10).unwrap();
        let even = reconstruct_even(&reduced_spectrum(hbar, 10).unwrap(), &spectrum).unwrap();
        let odd = reconstruct_odd(&odd_reduced_spectrum(hbar, 10).unwrap(), &spectrum).unwrap();
        for level in spectrum.oscillation() {
            let table = if level.n % 2 == 0 { &even } else { &odd };
            let other = if level.n % 2 == 0 { &odd } else { &even };
            assert!(table.iter().any(|q| q == level), "hbar {hbar} n {}", level.n);
            assert!(!other.iter().any(|q| q == level));
            assert_eq!(orbit_pair_count(level.energy, hbar, 1e-9).unwrap() as u64, level.n.div_ceil(2));
        }
    }
}

#[test]
fn ladder_walks_the_whole_lattice() {
    for hbar in HBARS {
        let spectrum = build_spectrum(hbar, 6).unwrap();
        let alg = LadderAlgebra::new(&spectrum);
        let basis = alg.lattice.basis();
        for &from in &basis {
            for &to in &basis {
                let word = alg.transitivity_witness(from, to).unwrap();
                let mut state = QuantumState::basis(from);
                for g in word {
                    state = alg.generator(g).apply(&state);
                }
                assert_eq!(state.as_single().map(|(i, _)| i), Some(to));
            }
        }
    }
}

#[test]
fn colliding_hbar_is_rejected() {
    let hbar = 8.0 / PI / 3.0;
    assert!(matches!(validate_hbar(hbar), Err(HbarRejection::OscillationCollision { n: 3, .. })));
    assert!(matches!(build_spectrum(hbar, 4), Err(Error::RejectedHbar { .. })));
    assert!(matches!(validate_hbar(-1.0), Err(HbarRejection::NotPositive)));
}
