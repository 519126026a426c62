//! Property suites: each check reports a measured residual against a tolerance.

use crate::classical::{
    angle, flow, hamiltonian, oscillation_action, period, reference_point, rotation_action,
    EnergyRegion, PhasePoint, SEPARATRIX_BRANCH_ACTION, SEPARATRIX_FULL_ACTION,
};
use crate::elliptic::quad;
use crate::error::{Error, Result};
use crate::holonomy::{holonomy_phase, parallel_transport, transport_along, FiberValue};
use crate::minus_one::{
    half_orbit_ratio, invariants8, jacobian_rank, odd_reduced_spectrum, orbit_pair_count,
    pi_inverse, psi, regular_by_description, relations_residual, reconstruct_odd,
    sample_on_variety, ReducedBundlePoint, Stratum, RANK_TOL,
};
use crate::operators::{
    adjoint, commutator, BasisIndex, ExtendedAction, LadderAlgebra, Lattice, QuantumState, Side,
};
use crate::reduction::{
    bracket, casimir, orbit_map, reconstruct_even, reduced_action, reduced_flow, reduced_period,
    reduced_spectrum, FnField, Polynomial,
};
use crate::spectrum::{build_spectrum, solve_level, Spectrum};
use num_complex::{Complex, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// One measured invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `residual ≤ tolerance`; a NaN residual fails.
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }

    /// Passes when `residual > threshold`.
    pub fn above(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance: threshold,
            pass: residual > threshold,
        }
    }
}

/// Named property suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Classical,
    Holonomy,
    Operators,
    Reduction,
    MinusOne,
    All,
}

/// Parameters shared by the suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub hbar: f64,
    pub m_max: u64,
    pub tol: f64,
    pub seed: u64,
}

impl SuiteConfig {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// Runs `suite` and returns its checks in a fixed order.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::Classical => classical_checks(config)?,
        Suite::Holonomy => holonomy_checks(config)?,
        Suite::Operators => operator_checks(config)?,
        Suite::Reduction => reduction_checks(config)?,
        Suite::MinusOne => minus_one_checks(config)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::Classical, Suite::Holonomy, Suite::Operators, Suite::Reduction, Suite::MinusOne] {
                all.extend(run_suite(s, config)?);
            }
            all
        }
    })
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m: f64, v| if m.is_nan() || v.is_nan() { f64::NAN } else { m.max(v.abs()) })
}

fn count(flags: impl IntoIterator<Item = bool>) -> f64 {
    flags.into_iter().filter(|b| *b).count() as f64
}

/// Energies sampled uniformly from two bands around the separatrix.
fn sample_energies(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| if rng.gen_bool(0.5) { rng.gen_range(0.05..1.95) } else { rng.gen_range(2.05..8.0) })
        .collect()
}

/// Grid of `n` energies split evenly over `[0.1, 1.9]` and `[2.1, 6]`.
pub fn period_action_grid(n: usize) -> Vec<f64> {
    let half = n / 2;
    let lin = |a: f64, b: f64, k: usize| (0..k).map(move |i| a + (b - a) * i as f64 / (k - 1) as f64);
    lin(0.1, 1.9, half).chain(lin(2.1, 6.0, n - half)).collect()
}

/// Largest relative gap between `dI/de` (centered differences) and `T/2π`.
pub fn period_action_defect(energies: &[f64], step: f64) -> Result<f64> {
    let action = |e: f64| if e < 2.0 { oscillation_action(e) } else { rotation_action(e) };
    let mut worst = 0.0_f64;
    for &e in energies {
        let slope = (action(e + step)? - action(e - step)?) / (2.0 * step);
        let expected = period(e)? / TAU;
        worst = worst.max(((slope - expected) / expected).abs());
    }
    Ok(worst)
}

fn classical_checks(c: &SuiteConfig) -> Result<Vec<Check>> {
    let mut out = vec![
        Check::new(
            "classical.separatrix_limit_oscillation",
            (oscillation_action(2.0 - 1e-6)? - SEPARATRIX_FULL_ACTION).abs(),
            1e-3,
        ),
        Check::new(
            "classical.separatrix_limit_rotation",
            (rotation_action(2.0 + 1e-6)? - SEPARATRIX_BRANCH_ACTION).abs(),
            1e-3,
        ),
        Check::new("classical.harmonic_limit", (oscillation_action(1e-3)? / 1e-3 - 1.0).abs(), 1e-3),
        Check::new("classical.rotor_limit", (rotation_action(200.0)? / 400f64.sqrt() - 1.0).abs(), 1e-2),
        Check::new("classical.small_period", (period(1e-4)? - TAU).abs(), 1e-3),
        Check::new("classical.period_action_identity", period_action_defect(&period_action_grid(40), 1e-5)?, 1e-4),
    ];

    let mut rng = c.rng(1);
    let mut drift = 0.0_f64;
    let mut phase = 0.0_f64;
    for e in sample_energies(&mut rng, 6) {
        let t = period(e)?;
        let start = flow(reference_point(e)?, rng.gen_range(0.0..t), c.tol)?;
        let end = flow(start, 3.0 * t + 0.25 * t, c.tol)?;
        drift = drift.max((hamiltonian(end) - e).abs());
        let d = (angle(end)? - angle(start)? - 0.25 * TAU).rem_euclid(TAU);
        phase = phase.max(d.min(TAU - d));
    }
    out.push(Check::new("classical.flow_energy_drift", drift, 1e3 * c.tol));
    out.push(Check::new("classical.angle_advances_linearly", phase, 1e-6));
    Ok(out)
}

/// `|z - 1|` after one transport around the level, with the singular torus
/// transported along its constant path.
fn level_defect(energy: f64, hbar: f64, tol: f64) -> Result<f64> {
    let one = FiberValue::new(1.0, 0.0);
    let z = if energy == 0.0 {
        transport_along(PhasePoint::new(0.0, 0.0), one, hbar, 1.0, tol)?.1
    } else {
        parallel_transport(energy, one, hbar, tol)?
    };
    Ok((z - 1.0).norm())
}

/// Energies with action `(j + ½)ħ`, the middle of the gaps between levels.
pub fn midgap_energies(spectrum: &Spectrum, count: usize) -> Result<Vec<f64>> {
    let hbar = spectrum.hbar();
    let mut out = Vec::new();
    for n in 0..spectrum.top() {
        let target = (n as f64 + 0.5) * hbar;
        out.push(crate::spectrum::solve_oscillation(target, oscillation_action)?);
    }
    let mut m = spectrum.first_rotation();
    while out.len() < count {
        out.push(crate::spectrum::solve_rotation((m as f64 + 0.5) * hbar, rotation_action)?);
        m += 1;
    }
    out.truncate(count);
    Ok(out)
}

fn holonomy_checks(c: &SuiteConfig) -> Result<Vec<Check>> {
    let spectrum = build_spectrum(c.hbar, c.m_max)?;
    let mut worst = 0.0_f64;
    for level in spectrum.levels() {
        worst = worst.max(level_defect(level.energy, c.hbar, c.tol)?);
    }
    let one = FiberValue::new(1.0, 0.0);
    let mut weakest = f64::INFINITY;
    for e in midgap_energies(&spectrum, 20)? {
        weakest = weakest.min((parallel_transport(e, one, c.hbar, c.tol)? - 1.0).norm());
    }
    let mut rng = c.rng(2);
    let mut gap = 0.0_f64;
    for e in sample_energies(&mut rng, 50) {
        let z = parallel_transport(e, one, c.hbar, c.tol)?;
        gap = gap.max((z - holonomy_phase(e, c.hbar)?.value()).norm());
    }
    Ok(vec![
        Check::new("holonomy.levels_are_trivial", worst, 1e-5),
        Check::above("holonomy.midgap_is_nontrivial", weakest, 0.1),
        Check::new("holonomy.ode_matches_analytic", gap, 1e-5),
    ])
}

/// Exact commutator checks for one spectrum, in units of ħ.
fn commutator_checks(spectrum: &Spectrum, tag: &str) -> Result<Vec<Check>> {
    let alg = LadderAlgebra::new(spectrum);
    let l = alg.lattice;
    let (top, first) = (l.top() as i64, l.first_rotation() as i64);
    let mut rule = 0.0;
    let mut zero = 0.0;
    let mut interior = 0.0;
    let mut boundary = 0.0_f64;
    let mut cross = 0.0;
    for side in [Side::Plus, Side::Minus] {
        let lower = alg
            .lowering(side)
            .to_integer()
            .ok_or_else(|| Error::InvalidArgument("lowering has non-integer entries".into()))?;
        let own = ExtendedAction::new(side);
        let other = ExtendedAction::new(side.opposite());
        let comm = commutator(&own.quanta_operator(l), &lower);
        let comm_other = commutator(&other.quanta_operator(l), &lower);
        for idx in l.basis() {
            let image = lower.apply_basis(idx);
            let got = comm.apply_basis(idx);
            let expected = QuantumState::from_pairs(
                image.iter().map(|(i, v)| (*i, *v * Complex::new(own.quanta(*i) - own.quanta(idx), 0))),
            );
            rule += count([got != expected]);
            let scaled = |f: i64| QuantumState::from_pairs(image.iter().map(|(i, v)| (*i, *v * Complex::new(f, 0))));
            match idx.side() {
                None => zero += count([got != scaled(-1)]),
                Some(s) if s == side && idx.quantum() as i64 > first => {
                    interior += count([got != scaled(-2)]);
                    cross += count([!comm_other.apply_basis(idx).is_zero()]);
                }
                Some(s) if s == side => {
                    let (_, v) = got.as_single().unwrap_or((idx, Complex::new(0, 0)));
                    boundary = boundary.max((v.re - (top - 2 * first)) as f64);
                    let cross_value = comm_other.apply_basis(idx);
                    let expected_cross = QuantumState::from_pairs([(l.zero(l.top()).unwrap(), Complex::new(top, 0))]);
                    cross += count([cross_value != expected_cross]);
                }
                Some(_) => cross += count([!got.is_zero() || !comm_other.apply_basis(idx).is_zero()]),
            }
        }
    }
    Ok(vec![
        Check::new(format!("operators.{tag}.commutator_rule_exact"), rule, 0.0),
        Check::new(format!("operators.{tag}.commutator_zero_sector"), zero, 0.0),
        Check::new(format!("operators.{tag}.commutator_rotation_interior"), interior, 0.0),
        Check::new(format!("operators.{tag}.commutator_boundary_column"), boundary.abs(), 0.0),
        Check::new(format!("operators.{tag}.cross_sector_commutators"), cross, 0.0),
    ])
}

fn boundary_crossing(spectrum: &Spectrum) -> f64 {
    let alg = LadderAlgebra::new(spectrum);
    let l = alg.lattice;
    let top = l.zero(l.top()).unwrap();
    let mut bad = 0.0;
    for side in [Side::Plus, Side::Minus] {
        let first = l.rotation(side, l.first_rotation()).unwrap();
        let one = Complex64::new(1.0, 0.0);
        bad += count([alg.lowering(side).apply_basis(first) != QuantumState::from_pairs([(top, one)])]);
        bad += count([alg.raising(side).apply_basis(top) != QuantumState::from_pairs([(first, one)])]);
    }
    bad
}

fn random_state(rng: &mut ChaCha8Rng, l: &Lattice) -> QuantumState {
    QuantumState::from_pairs(
        l.basis()
            .into_iter()
            .map(|i| (i, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))),
    )
}

fn operator_checks(c: &SuiteConfig) -> Result<Vec<Check>> {
    let spectrum = build_spectrum(c.hbar, c.m_max)?;
    let alg = LadderAlgebra::new(&spectrum);
    let l = alg.lattice;
    let mut out = commutator_checks(&spectrum, "config")?;

    let mut annihilate = 0.0;
    for side in [Side::Plus, Side::Minus] {
        annihilate += count([!alg.lowering(side).apply_basis(l.zero(0).unwrap()).is_zero()]);
        for m in l.first_rotation()..=l.m_max() {
            let other = l.rotation(side.opposite(), m).unwrap();
            annihilate += count([!alg.lowering(side).apply_basis(other).is_zero()]);
            annihilate += count([!alg.raising(side).apply_basis(other).is_zero()]);
        }
    }
    out.push(Check::new("operators.annihilation_rules", annihilate, 0.0));

    let mut rng = c.rng(3);
    let mut pairing = 0.0_f64;
    for _ in 0..20 {
        let (x, y) = (random_state(&mut rng, &l), random_state(&mut rng, &l));
        for side in [Side::Plus, Side::Minus] {
            let lhs = alg.lowering(side).apply(&x).inner(&y);
            let rhs = x.inner(&alg.raising(side).apply(&y));
            pairing = pairing.max((lhs - rhs).norm());
        }
    }
    out.push(Check::new("operators.adjoint_pairing", pairing, 1e-14));
    let adj = count([adjoint(&alg.lower_plus).entries() != alg.raise_plus.entries()]);
    out.push(Check::new("operators.raising_is_adjoint", adj, 0.0));

    let sq = alg.swap.compose(&alg.swap);
    let swap_bad = count(l.basis().into_iter().map(|i| {
        let expected = if i.side().is_some() { QuantumState::basis(i) } else { QuantumState::zero() };
        sq.apply_basis(i) != expected
    }));
    out.push(Check::new("operators.swap_squares_to_rotation_projector", swap_bad, 0.0));

    for (tag, hbar) in [("even_top", 0.4), ("odd_top", 0.5)] {
        let s = build_spectrum(hbar, 8)?;
        out.push(Check::new(format!("operators.{tag}.boundary_crossing"), boundary_crossing(&s), 0.0));
        out.extend(commutator_checks(&s, tag)?);
    }

    let small = build_spectrum(c.hbar, 8.max(spectrum.first_rotation()))?;
    let small_alg = LadderAlgebra::new(&small);
    let basis = small_alg.lattice.basis();
    let mut missing = 0.0;
    for &i in &basis {
        for &j in &basis {
            if !witness_reaches(&small_alg, i, j) {
                missing += 1.0;
            }
        }
    }
    out.push(Check::new("operators.transitivity_witnesses", missing, 0.0));
    Ok(out)
}

fn witness_reaches(alg: &LadderAlgebra, from: BasisIndex, to: BasisIndex) -> bool {
    let Ok(word) = alg.transitivity_witness(from, to) else { return false };
    let mut state = QuantumState::basis(from);
    for g in word {
        state = alg.generator(g).apply(&state);
    }
    matches!(state.as_single(), Some((idx, v)) if idx == to && v.norm() > 0.0)
}

/// Random on-variety points of the reduced space.
fn sample_reduced(rng: &mut ChaCha8Rng, n: usize) -> Vec<[f64; 3]> {
    (0..n)
        .map(|_| orbit_map(PhasePoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(-PI..PI))).to_array())
        .collect()
}

/// Reduced action from its own defining quadrature.
pub fn reduced_action_by_quadrature(e: f64) -> Result<f64> {
    if e < 2.0 {
        let m = e / 2.0;
        Ok(2.0 * e / PI * quad(|t| t.cos().powi(2) / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-14)?)
    } else {
        let m = 2.0 / e;
        Ok(2.0 * (2.0 * e).sqrt() / PI * quad(|t| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-14)?)
    }
}

fn reduction_checks(c: &SuiteConfig) -> Result<Vec<Check>> {
    let mut rng = c.rng(4);
    let mut drift = 0.0_f64;
    for e in [0.5, 1.5, 3.0] {
        let start = orbit_map(flow(reference_point(e)?, rng.gen_range(0.0..1.0), c.tol)?);
        let end = reduced_flow(start, 10.0 * reduced_period(e)?, c.tol)?;
        drift = drift.max(casimir(end.to_array()).abs());
        drift = drift.max((reduced_action(end.tau3)? - reduced_action(e)?).abs());
    }
    let mut equiv = 0.0_f64;
    for _ in 0..8 {
        let pt = PhasePoint::new(rng.gen_range(-2.5..2.5), rng.gen_range(-PI..PI));
        let t = rng.gen_range(0.1..5.0);
        let lhs = orbit_map(flow(pt, t, c.tol)?).to_array();
        let rhs = reduced_flow(orbit_map(pt), t, c.tol)?.to_array();
        equiv = equiv.max(max_abs(lhs.iter().zip(rhs).map(|(a, b)| a - b)));
    }

    let mut antisym = 0.0_f64;
    let mut leibniz = 0.0_f64;
    let mut jacobi_fd = 0.0_f64;
    let mut jacobi_exact = 0.0_f64;
    let mut central = 0.0_f64;
    let cas = Polynomial::casimir();
    for tau in sample_reduced(&mut rng, 100) {
        let [f, g, h] = [0, 1, 2].map(|_| Polynomial::random(&mut rng, 3, 4));
        antisym = antisym.max((bracket(&f, &g, tau) + bracket(&g, &f, tau)).abs());
        let lhs = bracket(&f, &g.mul(&h), tau);
        let rhs = g.eval(tau) * bracket(&f, &h, tau) + bracket(&f, &g, tau) * h.eval(tau);
        leibniz = leibniz.max((lhs - rhs).abs());
        let outer = |a: &Polynomial, b: &Polynomial, cc: &Polynomial| {
            let inner = FnField(|t: [f64; 3]| bracket(b, cc, t));
            bracket(a, &inner, tau)
        };
        jacobi_fd = jacobi_fd.max((outer(&f, &g, &h) + outer(&g, &h, &f) + outer(&h, &f, &g)).abs());
        let exact = f.bracket(&g.bracket(&h)).add(&g.bracket(&h.bracket(&f))).add(&h.bracket(&f.bracket(&g)));
        jacobi_exact = jacobi_exact.max(exact.eval(tau).abs());
        central = central.max(bracket(&cas, &f, tau).abs());
    }

    let mut below = 0.0_f64;
    let mut above = 0.0_f64;
    for i in 0..20 {
        let e = 0.05 + 1.9 * i as f64 / 19.0;
        below = below.max((reduced_action_by_quadrature(e)? - oscillation_action(e)? / 2.0).abs());
        let e = 2.05 + 8.0 * i as f64 / 19.0;
        above = above.max((reduced_action_by_quadrature(e)? - rotation_action(e)?).abs());
    }

    let spectrum = build_spectrum(c.hbar, c.m_max)?;
    let reduced = reduced_spectrum(c.hbar, spectrum.m_max())?;
    let rebuilt = reconstruct_even(&reduced, &spectrum)?;
    let mismatch = rebuilt
        .iter()
        .zip(&reduced)
        .map(|(q, r)| (q.energy - r.energy).abs())
        .fold(0.0, f64::max);
    let missing = count(spectrum.oscillation().filter(|q| q.n % 2 == 0).map(|q| !rebuilt.contains(q)));

    Ok(vec![
        Check::new("reduction.casimir_and_action_drift", drift, 1e-7),
        Check::new("reduction.flow_equivariance", equiv, 1e-6),
        Check::new("reduction.bracket_antisymmetry", antisym, 0.0),
        Check::new("reduction.leibniz", leibniz, 1e-8),
        Check::new("reduction.jacobi_finite_difference", jacobi_fd, 1e-6),
        Check::new("reduction.jacobi_polynomial", jacobi_exact, 1e-10),
        Check::new("reduction.casimir_is_central", central, 1e-8),
        Check::new("reduction.reduced_action_below", below, 1e-10),
        Check::new("reduction.reduced_action_above", above, 1e-10),
        Check::new("reduction.even_reconstruction_energy", mismatch, 1e-8),
        Check::new("reduction.even_levels_recovered", missing, 0.0),
    ])
}

fn minus_one_checks(c: &SuiteConfig) -> Result<Vec<Check>> {
    let mut rng = c.rng(5);
    let mut residual = 0.0_f64;
    for _ in 0..1000 {
        let z = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let pt = PhasePoint::new(rng.gen_range(-3.0..3.0), rng.gen_range(-PI..PI));
        residual = residual.max(max_abs(relations_residual(&invariants8(z, pt))));
    }

    let mut mismatched = 0.0;
    for t in sample_on_variety(&mut rng, 1000) {
        let regular = jacobian_rank(&t, RANK_TOL)?.class == Stratum::Regular;
        mismatched += count([regular != regular_by_description(&t)]);
    }

    let mut pi_psi = 0.0_f64;
    let mut psi_pi = 0.0_f64;
    for _ in 0..200 {
        let pt = PhasePoint::new(rng.gen_range(0.2..3.0), rng.gen_range(-PI..PI));
        let b = ReducedBundlePoint {
            tau: orbit_map(pt).to_array(),
            nu: [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
        };
        let back = pi_inverse(&psi(&b)?)?;
        pi_psi = pi_psi.max(max_abs(back.tau.iter().chain(&back.nu).zip(b.tau.iter().chain(&b.nu)).map(|(a, b)| a - b)));

        let z = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let s = invariants8(z, pt);
        let round = psi(&pi_inverse(&s)?)?;
        let size = max_abs(s.as_vector());
        let conditioning = 1.0_f64.max(1.0 / s.rho());
        let err = max_abs(round.as_vector().iter().zip(s.as_vector()).map(|(a, b)| a - b));
        psi_pi = psi_pi.max(err / (size * conditioning));
    }

    let spectrum = build_spectrum(c.hbar, c.m_max)?;
    let evens = reconstruct_even(&reduced_spectrum(c.hbar, spectrum.m_max())?, &spectrum)?;
    let odds = reconstruct_odd(&odd_reduced_spectrum(c.hbar, spectrum.m_max())?, &spectrum)?;
    let mut partition = 0.0_f64;
    let mut uncovered = 0.0;
    for level in spectrum.oscillation() {
        let hits: Vec<_> = evens.iter().chain(&odds).filter(|q| q.n == level.n && !q.region.is_rotation()).collect();
        uncovered += count([hits.len() != 1]);
        for q in hits {
            partition = partition.max((q.energy - level.energy).abs());
        }
    }
    let odd_energy = odd_reduced_spectrum(c.hbar, spectrum.m_max())?
        .iter()
        .filter(|l| l.region == EnergyRegion::Oscillation)
        .map(|l| (l.energy - solve_level(2 * l.k - 1, c.hbar, EnergyRegion::Oscillation).unwrap_or(f64::NAN)).abs())
        .fold(0.0, f64::max);

    let mut pairs = 0.0;
    let mut parity = 0.0_f64;
    for level in spectrum.oscillation() {
        pairs += count([orbit_pair_count(level.energy, c.hbar, 1e-9)? as u64 != level.n.div_ceil(2)]);
        if level.n > 0 {
            let (_, _, ratio) = half_orbit_ratio(level.energy, c.hbar, 0.37, c.tol)?;
            let expected = if level.n % 2 == 1 { -1.0 } else { 1.0 };
            parity = parity.max((ratio - expected).norm());
        }
    }

    Ok(vec![
        Check::new("minusone.relations_vanish", residual, 1e-12),
        Check::new("minusone.rank_dichotomy_mismatches", mismatched, 0.0),
        Check::new("minusone.pi_after_psi", pi_psi, 1e-12),
        Check::new("minusone.psi_after_pi_scaled", psi_pi, 1e-12),
        Check::new("minusone.parity_partition_energy", partition, 1e-8),
        Check::new("minusone.parity_partition_coverage", uncovered, 0.0),
        Check::new("minusone.odd_levels_solve_half_integer_rule", odd_energy, 1e-10),
        Check::new("minusone.orbit_pair_count", pairs, 0.0),
        Check::new("minusone.half_orbit_parity", parity, 1e-6),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> SuiteConfig {
        SuiteConfig { hbar: 0.4, m_max: 12, tol: 1e-10, seed: DEFAULT_SEED }
    }

    fn assert_all_pass(checks: &[Check]) {
        for c in checks {
            assert!(c.pass, "{} residual {} tolerance {}", c.name, c.residual, c.tolerance);
        }
    }

    #[test]
    fn classical_suite_passes() {
        assert_all_pass(&run_suite(Suite::Classical, &config()).unwrap());
    }

    #[test]
    fn operator_suite_passes() {
        assert_all_pass(&run_suite(Suite::Operators, &config()).unwrap());
    }

    #[test]
    fn reduction_suite_passes() {
        assert_all_pass(&run_suite(Suite::Reduction, &config()).unwrap());
    }

    #[test]
    fn minus_one_suite_passes() {
        assert_all_pass(&run_suite(Suite::MinusOne, &config()).unwrap());
    }

    #[test]
    fn holonomy_suite_passes() {
        assert_all_pass(&run_suite(Suite::Holonomy, &config()).unwrap());
    }

    #[test]
    fn checks_reject_nan() {
        assert!(!Check::new("x", f64::NAN, 1.0).pass);
        assert!(!Check::above("x", f64::NAN, 1.0).pass);
        assert!(max_abs([1.0, f64::NAN, 2.0]).is_nan());
    }

    #[test]
    fn grid_shape() {
        let g = period_action_grid(40);
        assert_eq!(g.len(), 40);
        assert_eq!((g[0], g[19], g[20], g[39]), (0.1, 1.9, 2.1, 6.0));
    }
}
