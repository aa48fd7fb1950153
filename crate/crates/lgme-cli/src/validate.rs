//! In-process invariant suites behind `lgme validate`.
//!
//! Each suite re-checks a library-level invariant from the outside, plus a
//! deliberate mutation check that confirms the purity detector actually
//! fires on a corrupted covariance builder.

use std::time::Instant;

use lgme_core::entanglement::{ggm_fmsv_closed_form, ggm_pure_fock};
use lgme_core::fock::{
    added_fmsv_closed_form, build_fmsv_fock, degaussified_fmsv, normalization_constant,
    subtracted_fmsv_closed_form, FockState, PhotonOpKind,
};
use lgme_core::gaussian::{
    condition_on_gaussian_measurement, condition_on_homodyne, ggm_pure_gaussian, lgme_gaussian,
    CovarianceMatrix, GaussianMeasurement, GridSearch, Quadrature,
};
use lgme_core::measurement::{lgme_photon_counting, outcome_distribution};

type Check = fn() -> Result<(), String>;

fn lgme_counting(lambda: f64, kind: PhotonOpKind, m: [u32; 4]) -> Result<f64, String> {
    let parent = degaussified_fmsv(lambda.atanh(), kind, m, 1e-10).map_err(|e| e.to_string())?;
    let res =
        lgme_photon_counting(&parent, 3, 1e-8, ggm_pure_fock).map_err(|e| e.to_string())?;
    Ok(res.lower)
}

fn gaussian_closed_form() -> Result<(), String> {
    for lambda in [0.1f64, 0.3, 0.5, 0.7] {
        let r = lambda.atanh();
        let g = lgme_gaussian(r, &GridSearch::default()).map_err(|e| e.to_string())?;
        let want = (0.5 * r).tanh().powi(2);
        if (g.optimal_value - want).abs() > 1e-9 {
            return Err(format!(
                "λ={lambda}: optimized {} vs closed form {want}",
                g.optimal_value
            ));
        }
    }
    Ok(())
}

fn conditioning_purity() -> Result<(), String> {
    for r in [0.3f64, 1.0] {
        let cov = CovarianceMatrix::fmsv(r);
        for rp in [0.0f64, 2.0, 5.0] {
            for phi in [0.0f64, 1.0] {
                let meas = GaussianMeasurement::SqueezedCoherent { squeeze: rp, angle: phi };
                let out = condition_on_gaussian_measurement(&cov, 3, &meas)
                    .map_err(|e| e.to_string())?;
                if !out.is_pure(1e-8).map_err(|e| e.to_string())? {
                    return Err(format!("impure conditional state at r={r} r'={rp} φ={phi}"));
                }
            }
        }
        for q in [Quadrature::X, Quadrature::P] {
            let out = condition_on_homodyne(&cov, 3, q).map_err(|e| e.to_string())?;
            if !out.is_pure(1e-8).map_err(|e| e.to_string())? {
                return Err(format!("impure homodyne conditional state at r={r}"));
            }
        }
    }
    Ok(())
}

fn homodyne_optimality() -> Result<(), String> {
    let cov = CovarianceMatrix::fmsv(1.0);
    let hom = ggm_pure_gaussian(&condition_on_homodyne(&cov, 3, Quadrature::X).unwrap())
        .map_err(|e| e.to_string())?;
    let mut at_ten = 0.0;
    for i in 0..=20 {
        let rp = 0.5 * i as f64;
        let meas = GaussianMeasurement::SqueezedCoherent { squeeze: rp, angle: 0.0 };
        let g = ggm_pure_gaussian(
            &condition_on_gaussian_measurement(&cov, 3, &meas).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        if g > hom + 1e-9 {
            return Err(format!("finite squeezing r'={rp} exceeds homodyne: {g} > {hom}"));
        }
        at_ten = g;
    }
    if (at_ten - hom).abs() > 1e-8 {
        return Err(format!("r'=10 value {at_ten} not at homodyne limit {hom}"));
    }
    Ok(())
}

fn cross_engine_ggm() -> Result<(), String> {
    for i in 1..=8 {
        let lambda = 0.1 * i as f64;
        let r = lambda.atanh();
        let state = build_fmsv_fock(r, 1e-10).map_err(|e| e.to_string())?;
        let fock = ggm_pure_fock(&state).map_err(|e| e.to_string())?;
        let closed = ggm_fmsv_closed_form(r);
        let tol = 1e-6f64.max(3.0 * state.tail_bound());
        if (fock - closed).abs() > tol {
            return Err(format!("λ={lambda}: fock {fock} vs closed {closed} (tol {tol})"));
        }
    }
    Ok(())
}

fn entrywise(a: &FockState, b: &FockState, tol: f64) -> Result<(), String> {
    if a.len() != b.len() {
        return Err(format!("support sizes differ: {} vs {}", a.len(), b.len()));
    }
    for (occ, amp) in a.iter() {
        let other = b.amplitude(occ);
        if (amp - other).abs() > tol {
            return Err(format!("entry {occ:?}: {amp} vs {other}"));
        }
    }
    Ok(())
}

fn operator_vs_closed_forms() -> Result<(), String> {
    let r = 0.5f64.atanh();
    for m in [[1u32, 0, 0, 0], [0, 2, 0, 0], [1, 0, 1, 1], [0, 1, 0, 2]] {
        let add_op = degaussified_fmsv(r, PhotonOpKind::Add, m, 1e-10).map_err(|e| e.to_string())?;
        let add_cf = added_fmsv_closed_form(r, m, 1e-10).map_err(|e| e.to_string())?;
        entrywise(&add_op, &add_cf, 1e-10).map_err(|e| format!("add {m:?}: {e}"))?;
        let sub_op =
            degaussified_fmsv(r, PhotonOpKind::Subtract, m, 1e-10).map_err(|e| e.to_string())?;
        let sub_cf = subtracted_fmsv_closed_form(r, m, 1e-10).map_err(|e| e.to_string())?;
        entrywise(&sub_op, &sub_cf, 1e-10).map_err(|e| format!("sub {m:?}: {e}"))?;
    }
    Ok(())
}

fn normalization_constants() -> Result<(), String> {
    let r = 0.5f64.atanh();
    let cosh2 = r.cosh().powi(2);
    let state = build_fmsv_fock(r, 1e-12).map_err(|e| e.to_string())?;
    for kind in [PhotonOpKind::Add, PhotonOpKind::Subtract] {
        let bare = normalization_constant(kind, r, [0; 4], state.n_max())
            .map_err(|e| e.to_string())?;
        if ((bare - cosh2) / cosh2).abs() > 1e-9 {
            return Err(format!("bare constant {bare} vs cosh²r {cosh2}"));
        }
    }
    // N/cosh²r must equal the squared norm of the raw operator output.
    for (kind, m) in [(PhotonOpKind::Add, [2u32, 0, 0, 0]), (PhotonOpKind::Subtract, [1, 0, 0, 1])]
    {
        let n = normalization_constant(kind, r, m, state.n_max()).map_err(|e| e.to_string())?;
        let mut sq = 0.0f64;
        for (occ, amp) in state.iter() {
            let mut w = amp * amp;
            for (mode, &count) in m.iter().enumerate() {
                let nn = occ[mode] as f64;
                for t in 0..count {
                    w *= match kind {
                        PhotonOpKind::Add => nn + 1.0 + t as f64,
                        PhotonOpKind::Subtract => nn - t as f64,
                    }
                    .max(0.0);
                }
            }
            sq += w;
        }
        let want = n / cosh2;
        if ((sq - want) / want).abs() > 1e-9 {
            return Err(format!("{kind:?} {m:?}: raw norm² {sq} vs N/cosh²r {want}"));
        }
    }
    Ok(())
}

fn outcome_completeness() -> Result<(), String> {
    let r = 0.5f64.atanh();
    let parents = [
        build_fmsv_fock(r, 1e-10).map_err(|e| e.to_string())?,
        degaussified_fmsv(r, PhotonOpKind::Add, [0, 2, 0, 0], 1e-10).map_err(|e| e.to_string())?,
        degaussified_fmsv(r, PhotonOpKind::Subtract, [1, 0, 0, 0], 1e-10)
            .map_err(|e| e.to_string())?,
    ];
    for parent in &parents {
        let dist = outcome_distribution(parent, 3, 1e-15).map_err(|e| e.to_string())?;
        let total: f64 = dist.entries.iter().map(|o| o.probability).sum();
        let sq = parent.norm() * parent.norm();
        if (total - sq).abs() > 1e-9 {
            return Err(format!("Σp = {total} vs norm² = {sq}"));
        }
    }
    Ok(())
}

fn photon_count_symmetries() -> Result<(), String> {
    let splits = [[2u32, 0, 0, 0], [1, 0, 1, 0], [0, 0, 2, 0]];
    let base = lgme_counting(0.5, PhotonOpKind::Subtract, splits[0])?;
    for m in &splits[1..] {
        let v = lgme_counting(0.5, PhotonOpKind::Subtract, *m)?;
        if (v - base).abs() > 1e-8 {
            return Err(format!("sub split {m:?}: {v} vs {base}"));
        }
    }
    let a = lgme_counting(0.5, PhotonOpKind::Add, [2, 0, 1, 0])?;
    let b = lgme_counting(0.5, PhotonOpKind::Add, [1, 0, 2, 0])?;
    if (a - b).abs() > 1e-8 {
        return Err(format!("add m1↔m3: {a} vs {b}"));
    }
    let c = lgme_counting(0.5, PhotonOpKind::Subtract, [0, 1, 0, 0])?;
    let d = lgme_counting(0.5, PhotonOpKind::Subtract, [0, 0, 0, 1])?;
    if (c - d).abs() > 1e-8 {
        return Err(format!("sub m2↔m4: {c} vs {d}"));
    }
    Ok(())
}

fn corrupted_builder_is_detected() -> Result<(), String> {
    // Sanity of the harness itself: break the neighbor correlations of the
    // state builder and confirm the purity detector fires.
    let good = CovarianceMatrix::fmsv(1.0);
    let mut mat = good.matrix().clone();
    mat[(0, 2)] *= 1.1;
    mat[(2, 0)] *= 1.1;
    let bad = CovarianceMatrix::new(4, mat).map_err(|e| e.to_string())?;
    if bad.is_pure(1e-6).map_err(|e| e.to_string())? {
        return Err("corrupted covariance passed the purity check".into());
    }
    if ggm_pure_gaussian(&bad).is_ok() {
        return Err("ggm accepted an impure covariance".into());
    }
    Ok(())
}

const SUITES: &[(&str, Check)] = &[
    ("gaussian closed form", gaussian_closed_form),
    ("conditioning purity", conditioning_purity),
    ("homodyne optimality", homodyne_optimality),
    ("cross-engine ggm", cross_engine_ggm),
    ("operator vs closed forms", operator_vs_closed_forms),
    ("normalization constants", normalization_constants),
    ("outcome completeness", outcome_completeness),
    ("photon-count symmetries", photon_count_symmetries),
    ("mutation harness", corrupted_builder_is_detected),
];

/// Runs every suite, prints the pass/fail table with per-suite wall times,
/// and returns `true` iff all pass.
pub fn run_validate() -> bool {
    let mut all_ok = true;
    println!("{:<28} {:<6} {:>9}", "suite", "result", "wall");
    for (name, check) in SUITES {
        let t0 = Instant::now();
        let result = check();
        let dt = t0.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("{name:<28} {:<6} {dt:>8.2}s", "pass"),
            Err(msg) => {
                all_ok = false;
                println!("{name:<28} {:<6} {dt:>8.2}s  {msg}", "FAIL");
            }
        }
    }
    println!("overall: {}", if all_ok { "pass" } else { "FAIL" });
    all_ok
}
