//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qfluct_core::linalg::{c, frobenius, trace, CMatrix};
use qfluct_core::me_analysis::{family_scan, family_total_variance, uniform_grid, PUBLISHED_ENDPOINTS};
use qfluct_core::measurements::{pauli, su_d_set};
use qfluct_core::oscillator::{
    fock_state, quadrature_total_variance, required_nmax, squeezed_total_closed_form,
    squeezed_total_published, squeezed_vacuum,
};
use qfluct_core::{
    check_me, equivalence_witness, me_basis, minimize_orbit, pauli_set, random, states, three_tangle,
    total_variance, Error, PureState, QuditSystem, SloccOptions,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("runtime {elapsed:?} exceeds {limit:?}"))
}

fn err(e: Error) -> String {
    e.to_string()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ghz_total_variance() -> Outcome {
    let start = Instant::now();
    let ghz = states::ghz(3);
    let set = pauli_set(ghz.system()).map_err(err)?;
    let report = total_variance(&ghz, &set).map_err(err)?;
    let verdict = check_me(&ghz, &set, 1e-9).map_err(err)?;
    let elapsed = start.elapsed();
    ensure((report.total - 9.0).abs() <= 1e-12, || format!("total {}", report.total))?;
    ensure(verdict.is_me, || "GHZ not certified".into())?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("V(GHZ) = {} in {elapsed:?}", report.total))
}

fn w_total_variance() -> Outcome {
    let start = Instant::now();
    let w = states::w(3);
    let set = pauli_set(w.system()).map_err(err)?;
    let report = total_variance(&w, &set).map_err(err)?;
    let verdict = check_me(&w, &set, 1e-9).map_err(err)?;
    let elapsed = start.elapsed();
    ensure((report.total - 26.0 / 3.0).abs() <= 1e-12, || format!("total {}", report.total))?;
    ensure(!verdict.is_me, || "W certified as ME".into())?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("V(W) = {} in {elapsed:?}", report.total))
}

fn casimir_identity() -> Outcome {
    let start = Instant::now();
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for k in 0..500 {
        let n = 1 + k % 4;
        let system = QuditSystem::qubits(n).map_err(err)?;
        let psi = random::pure_state(&mut r, &system);
        let report = total_variance(&psi, &pauli_set(&system).map_err(err)?).map_err(err)?;
        // Expectations through the marginals, independent of the report.
        let mut sum_sq = 0.0;
        for j in 0..n {
            let rho = psi.reduced_density(j).map_err(err)?;
            for a in 1..=3 {
                sum_sq += trace(&(&rho * pauli(a))).re.powi(2);
            }
        }
        worst = worst.max((report.total - (3.0 * n as f64 - sum_sq)).abs());
    }
    let elapsed = start.elapsed();
    ensure(worst <= 1e-10, || format!("max deviation {worst:e}"))?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("max |V - (3N - sum <s>^2)| = {worst:.2e} over 500 states in {elapsed:?}"))
}

fn route_equivalence() -> Outcome {
    let start = Instant::now();
    let mut r = rng(4);
    let system = QuditSystem::qubits(3).map_err(err)?;
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let w = equivalence_witness(&random::pure_state(&mut r, &system)).map_err(err)?;
        worst = worst.max(w.xy_discrepancy).max(w.z_discrepancy);
    }
    let elapsed = start.elapsed();
    ensure(worst <= 1e-12, || format!("max discrepancy {worst:e}"))?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("max slice/observable discrepancy = {worst:.2e} in {elapsed:?}"))
}

fn basis_orthonormal() -> Outcome {
    let start = Instant::now();
    let mut worst_gram = 0.0f64;
    for n in 2..=5 {
        let basis = me_basis(n).map_err(err)?;
        ensure(basis.len() == 1 << n, || format!("N={n}: {} elements", basis.len()))?;
        let set = pauli_set(&QuditSystem::qubits(n).map_err(err)?).map_err(err)?;
        for (i, a) in basis.iter().enumerate() {
            let v = check_me(&a.state, &set, 1e-12).map_err(err)?;
            ensure(v.is_me, || format!("N={n} element {} fails check_me", a.label()))?;
            for (j, b) in basis.iter().enumerate() {
                let want = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                worst_gram = worst_gram.max((a.state.inner(&b.state).map_err(err)? - want).norm());
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(worst_gram <= 1e-12, || format!("Gram deviation {worst_gram:e}"))?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("N=2..5 Gram deviation {worst_gram:.1e}, all certified, {elapsed:?}"))
}

fn mu_vs_concurrence() -> Outcome {
    let start = Instant::now();
    let mut r = rng(6);
    let system = QuditSystem::qubits(2).map_err(err)?;
    let opts = SloccOptions::default();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let psi = random::pure_state(&mut r, &system);
        let a = psi.amplitudes();
        let conc = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
        let res = minimize_orbit(&psi, &opts).map_err(err)?;
        ensure(res.converged, || format!("not converged (residual {:e})", res.moment_residual))?;
        worst = worst.max((res.mu - conc).abs());
    }
    let elapsed = start.elapsed();
    ensure(worst <= 1e-6, || format!("max |mu - C| = {worst:e}"))?;
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("max |mu - 2|det psi|| = {worst:.2e} over 100 states in {elapsed:?}"))
}

fn ghz_class_state(r: &mut ChaCha8Rng) -> PureState {
    let mut psi = states::ghz(3);
    for j in 0..3 {
        psi = psi.apply_local(j, &random::ginibre(r, 2, 2)).expect("2x2 operator");
    }
    psi.normalize().expect("invertible ops keep GHZ nonzero")
}

fn mu_squared_vs_tangle() -> Outcome {
    let start = Instant::now();
    let mut r = rng(7);
    let opts = SloccOptions::default();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let psi = ghz_class_state(&mut r);
        let tau = three_tangle(&psi).map_err(err)?;
        let res = minimize_orbit(&psi, &opts).map_err(err)?;
        ensure(res.converged, || format!("not converged (residual {:e}, tau {tau})", res.moment_residual))?;
        worst = worst.max((res.mu * res.mu - tau).abs());
    }
    let elapsed = start.elapsed();
    ensure(worst <= 1e-4, || format!("max |mu^2 - tau| = {worst:e}"))?;
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!("max |mu^2 - tau| = {worst:.2e} over 50 GHZ-class states in {elapsed:?}"))
}

fn null_cone() -> Outcome {
    let opts = SloccOptions::default();
    let w = minimize_orbit(&states::w(3), &opts).map_err(err)?;
    ensure(w.null_cone && w.mu == 0.0, || format!("W: null_cone={} mu={}", w.null_cone, w.mu))?;
    let g = minimize_orbit(&states::ghz(3), &opts).map_err(err)?;
    ensure(g.converged && g.iterations <= 2, || format!("GHZ: {} iterations", g.iterations))?;
    ensure((g.mu - 1.0).abs() <= 1e-10, || format!("GHZ mu {}", g.mu))?;
    Ok(format!(
        "W null cone after {} iterations; GHZ mu = {} after {} iterations",
        w.iterations, g.mu, g.iterations
    ))
}

fn minimal_vector_bridge() -> Outcome {
    let mut r = rng(9);
    let system = QuditSystem::qubits(3).map_err(err)?;
    let set = su_d_set(&system).map_err(err)?;
    let opts = SloccOptions::default();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let psi = random::pure_state(&mut r, &system);
        let res = minimize_orbit(&psi, &opts).map_err(err)?;
        ensure(res.converged && !res.null_cone, || "random state not semistable/converged".into())?;
        let unit = res.minimal_vector.normalize().map_err(err)?;
        let v = check_me(&unit, &set, 1e-6).map_err(err)?;
        ensure(v.is_me, || format!("minimal vector max |<M>| = {:e}", v.max_abs_expectation))?;
        worst = worst.max(v.max_abs_expectation);
    }
    Ok(format!("50 minimal vectors certified, max |<M>| = {worst:.2e}"))
}

fn family_scan_values() -> Outcome {
    let at_half = family_total_variance(0.5).map_err(err)?;
    let at_top = family_total_variance(std::f64::consts::FRAC_1_SQRT_2).map_err(err)?;
    ensure((at_half - 8.0).abs() <= 1e-12, || format!("V(1/2) = {at_half}"))?;
    ensure((at_top - 9.0).abs() <= 1e-12, || format!("V(1/sqrt2) = {at_top}"))?;

    // Roots of 16 x²(1/2 − x²) = 1/3 through u = x²: 16u² − 8u + 1/3 = 0.
    let disc = (64.0f64 - 64.0 / 3.0).sqrt();
    let roots = [((8.0 - disc) / 32.0).sqrt(), ((8.0 + disc) / 32.0).sqrt()];
    let scan = family_scan(&uniform_grid(101), &SloccOptions::default()).map_err(err)?;
    ensure(scan.rows.len() == 101, || format!("{} rows", scan.rows.len()))?;
    ensure(scan.crossings.len() == 2, || format!("crossings {:?}", scan.crossings))?;
    for (got, want) in scan.crossings.iter().zip(roots) {
        ensure((got - want).abs() <= 1e-9, || format!("crossing {got} vs root {want}"))?;
    }
    Ok(format!(
        "V(1/2) = {at_half}, V(1/sqrt2) = {at_top}; crossings {:.12?} (published endpoints {:?}, not reproduced)",
        scan.crossings, PUBLISHED_ENDPOINTS
    ))
}

fn oscillator_totals() -> Outcome {
    let mut worst_fock = 0.0f64;
    for n in 0..=20 {
        let total = quadrature_total_variance(&fock_state(n, 40).map_err(err)?).map_err(err)?.total;
        worst_fock = worst_fock.max((total - (2 * n + 1) as f64 / 2.0).abs());
    }
    ensure(worst_fock <= 1e-10, || format!("Fock deviation {worst_fock:e}"))?;
    let mut lines = Vec::new();
    for r in [0.25, 0.5, 1.0] {
        let n_max = required_nmax(r).max(40);
        let total = quadrature_total_variance(&squeezed_vacuum(r, n_max).map_err(err)?).map_err(err)?.total;
        let oracle = squeezed_total_closed_form(r);
        ensure((total - oracle).abs() <= 1e-6, || format!("r={r}: {total} vs {oracle}"))?;
        lines.push(format!("r={r}: {total:.10} (published form {:.10})", squeezed_total_published(r)));
    }
    Ok(format!("Fock deviation {worst_fock:.1e}; {}", lines.join("; ")))
}

fn purification() -> Outcome {
    let mut r = rng(12);
    let mut worst = 0.0f64;
    for n in [1usize, 2] {
        let system = QuditSystem::qubits(n).map_err(err)?;
        let dim = system.total_dim();
        for k in 0..100 {
            let rho = random::density(&mut r, &system, 1 + k % dim).map_err(err)?;
            let psi = rho.purify().map_err(err)?;
            let keep: Vec<usize> = (0..n).collect();
            let back: CMatrix = psi.to_density().map_err(err)?.partial_trace(&keep).map_err(err)?;
            worst = worst.max(frobenius(&(back - rho.matrix())));
        }
    }
    ensure(worst <= 1e-10, || format!("Frobenius deviation {worst:e}"))?;
    Ok(format!("max Frobenius deviation {worst:.2e} over 200 density matrices"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("1 GHZ total variance", ghz_total_variance),
        ("2 W total variance", w_total_variance),
        ("3 Casimir identity", casimir_identity),
        ("4 route equivalence", route_equivalence),
        ("5 ME basis", basis_orthonormal),
        ("6 mu vs concurrence", mu_vs_concurrence),
        ("7 mu^2 vs 3-tangle", mu_squared_vs_tangle),
        ("8 null cone", null_cone),
        ("9 minimal-vector bridge", minimal_vector_bridge),
        ("10 family scan", family_scan_values),
        ("11 oscillator", oscillator_totals),
        ("12 purification", purification),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
