//! End-to-end acceptance checks, one test per criterion.
//!
//! Each test prints a single `[acceptance] criterion NN: PASS/FAIL` line
//! (run with `--nocapture` to see them on success) and then asserts.

use std::collections::BTreeMap;
use std::time::Instant;

use lgme_core::entanglement::{ggm_fmsv_closed_form, ggm_pure_fock};
use lgme_core::fock::{
    added_fmsv_closed_form, build_fmsv_fock, degaussified_fmsv, subtracted_fmsv_closed_form,
    FockState, PhotonOpKind,
};
use lgme_core::gaussian::{
    condition_on_gaussian_measurement, condition_on_homodyne, ggm_pure_gaussian, lgme_gaussian,
    CovarianceMatrix, GaussianMeasurement, GridSearch, Quadrature,
};
use lgme_core::measurement::{lgme_photon_counting, outcome_distribution, photon_count_project};

fn report(id: u32, label: &str, result: Result<(), String>) {
    match &result {
        Ok(()) => println!("[acceptance] criterion {id:02}: PASS — {label}"),
        Err(e) => println!("[acceptance] criterion {id:02}: FAIL — {label}: {e}"),
    }
    if let Err(e) = result {
        panic!("criterion {id} failed: {e}");
    }
}

fn counting_lower(lambda: f64, kind: Option<PhotonOpKind>, m: [u32; 4]) -> Result<f64, String> {
    let r = lambda.atanh();
    let parent = match kind {
        None => build_fmsv_fock(r, 1e-10),
        Some(k) => degaussified_fmsv(r, k, m, 1e-10),
    }
    .map_err(|e| e.to_string())?;
    lgme_photon_counting(&parent, 3, 1e-8, ggm_pure_fock)
        .map(|res| res.lower)
        .map_err(|e| e.to_string())
}

#[test]
fn criterion_01_closed_form_gaussian_lgme() {
    let check = || -> Result<(), String> {
        let t0 = Instant::now();
        for i in 0..20 {
            let lambda = 0.05 + (0.9 - 0.05) * i as f64 / 19.0;
            let r = lambda.atanh();
            let g = lgme_gaussian(r, &GridSearch::default()).map_err(|e| e.to_string())?;
            let want = (0.5 * r).tanh().powi(2);
            if (g.optimal_value - want).abs() > 1e-9 {
                return Err(format!("λ={lambda}: {} vs {want}", g.optimal_value));
            }
        }
        let dt = t0.elapsed().as_secs_f64();
        if dt >= 10.0 {
            return Err(format!("took {dt:.1}s, budget 10s"));
        }
        Ok(())
    };
    report(1, "optimized gaussian LGME equals tanh²(r/2) on 20 λ values", check());
}

#[test]
fn criterion_02_homodyne_optimality() {
    let check = || -> Result<(), String> {
        let cov = CovarianceMatrix::fmsv(1.0);
        let hom = ggm_pure_gaussian(
            &condition_on_homodyne(&cov, 3, Quadrature::X).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        let search = GridSearch::default();
        for i in 0..search.squeeze_steps {
            let rp = search.squeeze_max * i as f64 / (search.squeeze_steps - 1) as f64;
            for j in 0..search.angle_steps {
                let phi = core::f64::consts::PI * j as f64 / search.angle_steps as f64;
                let meas = GaussianMeasurement::SqueezedCoherent { squeeze: rp, angle: phi };
                let g = ggm_pure_gaussian(
                    &condition_on_gaussian_measurement(&cov, 3, &meas)
                        .map_err(|e| e.to_string())?,
                )
                .map_err(|e| e.to_string())?;
                if g > hom + 1e-9 {
                    return Err(format!("grid point r'={rp} φ={phi}: {g} > homodyne {hom}"));
                }
            }
        }
        let meas = GaussianMeasurement::SqueezedCoherent { squeeze: 10.0, angle: 0.0 };
        let g = ggm_pure_gaussian(
            &condition_on_gaussian_measurement(&cov, 3, &meas).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        if (g - hom).abs() > 1e-8 {
            return Err(format!("r'=10, φ=0: {g} vs homodyne {hom}"));
        }
        Ok(())
    };
    report(2, "finite-squeezing grid never beats the homodyne limit", check());
}

#[test]
fn criterion_03_cross_engine_ggm() {
    let check = || -> Result<(), String> {
        for i in 1..=8 {
            let lambda = 0.1 * i as f64;
            let r = lambda.atanh();
            let state = build_fmsv_fock(r, 1e-10).map_err(|e| e.to_string())?;
            let fock = ggm_pure_fock(&state).map_err(|e| e.to_string())?;
            let closed = ggm_fmsv_closed_form(r);
            let tol = 1e-6f64.max(3.0 * state.tail_bound());
            if (fock - closed).abs() > tol {
                return Err(format!("λ={lambda}: fock {fock} vs closed {closed}"));
            }
            let gauss = ggm_pure_gaussian(&CovarianceMatrix::fmsv(r)).map_err(|e| e.to_string())?;
            if (gauss - closed).abs() > 1e-10 {
                return Err(format!("λ={lambda}: gaussian {gauss} vs closed {closed}"));
            }
        }
        Ok(())
    };
    report(3, "fock and gaussian GGM engines agree with the closed form", check());
}

#[test]
fn criterion_04_fig1_dominance() {
    let check = || -> Result<(), String> {
        let t0 = Instant::now();
        for i in 1..=18 {
            let lambda = 0.05 * i as f64;
            let lower = counting_lower(lambda, None, [0; 4])?;
            let gauss = (0.5 * lambda.atanh()).tanh().powi(2);
            if lower < gauss - 1e-6 {
                return Err(format!("λ={lambda}: counting {lower} < gaussian {gauss}"));
            }
        }
        let dt = t0.elapsed().as_secs_f64();
        if dt >= 120.0 {
            return Err(format!("took {dt:.1}s, budget 120s"));
        }
        Ok(())
    };
    report(4, "photon counting dominates the gaussian value on the λ grid", check());
}

#[test]
fn criterion_05_subtraction_depends_on_sums_only() {
    let check = || -> Result<(), String> {
        for total in 2u32..=4 {
            let base = counting_lower(0.5, Some(PhotonOpKind::Subtract), [total, 0, 0, 0])?;
            for m1 in 0..=total {
                let v = counting_lower(
                    0.5,
                    Some(PhotonOpKind::Subtract),
                    [m1, 0, total - m1, 0],
                )?;
                if (v - base).abs() > 1e-8 {
                    return Err(format!("m1+m3={total}, split {m1}: {v} vs {base}"));
                }
            }
        }
        for (a, b) in [([0u32, 2, 0, 1], [0u32, 1, 0, 2]), ([0, 2, 0, 0], [0, 0, 0, 2])] {
            let va = counting_lower(0.5, Some(PhotonOpKind::Subtract), a)?;
            let vb = counting_lower(0.5, Some(PhotonOpKind::Subtract), b)?;
            if (va - vb).abs() > 1e-8 {
                return Err(format!("m2↔m4 {a:?} vs {b:?}: {va} vs {vb}"));
            }
        }
        Ok(())
    };
    report(5, "subtracted-state LGME is a function of m1+m3 and m2+m4", check());
}

#[test]
fn criterion_06_addition_mode13_exchange() {
    let check = || -> Result<(), String> {
        for total in 1u32..=4 {
            for m1 in 0..=total / 2 {
                let a = counting_lower(0.5, Some(PhotonOpKind::Add), [m1, 0, total - m1, 0])?;
                let b = counting_lower(0.5, Some(PhotonOpKind::Add), [total - m1, 0, m1, 0])?;
                if (a - b).abs() > 1e-8 {
                    return Err(format!("(m1,m3)=({m1},{}): {a} vs {b}", total - m1));
                }
            }
        }
        Ok(())
    };
    report(6, "added-state LGME is invariant under m1↔m3", check());
}

#[test]
fn criterion_07_addition_breaks_mode24_symmetry() {
    let check = || -> Result<(), String> {
        for m in 1u32..=3 {
            let two = counting_lower(0.5, Some(PhotonOpKind::Add), [0, m, 0, 0])?;
            let four = counting_lower(0.5, Some(PhotonOpKind::Add), [0, 0, 0, m])?;
            if two <= four {
                return Err(format!("m={m}: mode-2 {two} not above mode-4 {four}"));
            }
        }
        Ok(())
    };
    report(7, "photon addition on mode 2 beats mode 4", check());
}

#[test]
fn criterion_08_subtraction_dominates_addition() {
    let check = || -> Result<(), String> {
        for mode in 0usize..4 {
            for m in 1u32..=4 {
                let mut spec = [0u32; 4];
                spec[mode] = m;
                let sub = counting_lower(0.5, Some(PhotonOpKind::Subtract), spec)?;
                let add = counting_lower(0.5, Some(PhotonOpKind::Add), spec)?;
                if sub < add - 1e-9 {
                    return Err(format!("mode {}, m={m}: sub {sub} < add {add}", mode + 1));
                }
            }
        }
        Ok(())
    };
    report(8, "subtraction never localizes less than matched addition", check());
}

// ---- independent coefficient-function oracles for criterion 9 ----

fn ln_fact(n: u32) -> f64 {
    (2..=n as u64).map(|i| (i as f64).ln()).sum()
}

fn ln_binom(n: u32, k: u32) -> f64 {
    ln_fact(n) - ln_fact(k) - ln_fact(n - k)
}

fn normalize(map: &mut BTreeMap<Vec<u32>, f64>) {
    let norm = map.values().map(|v| v * v).sum::<f64>().sqrt();
    for v in map.values_mut() {
        *v /= norm;
    }
}

fn added_post_oracle(lambda: f64, m: [u32; 4], k: u32, n_max: u32) -> BTreeMap<Vec<u32>, f64> {
    let [m1, m2, m3, m4] = m;
    let mut out = BTreeMap::new();
    for n in k.saturating_sub(m4)..=n_max {
        if k < m4 || k - m4 > n {
            continue;
        }
        let kk = k - m4;
        for r1 in 0..=n {
            let lg = n as f64 * (0.5 * lambda).ln()
                + 0.5 * ln_binom(n, r1)
                + 0.5 * ln_binom(n, kk)
                + 0.5 * (ln_fact(n + m1 - r1) - ln_fact(n - r1))
                + 0.5 * (ln_fact(n + m2 + m4 - k) - ln_fact(n + m4 - k))
                + 0.5 * (ln_fact(r1 + m3) - ln_fact(r1))
                + 0.5 * (ln_fact(k) - ln_fact(k - m4));
            let key = vec![n + m1 - r1, n + m2 + m4 - k, r1 + m3];
            *out.entry(key).or_insert(0.0) += lg.exp();
        }
    }
    normalize(&mut out);
    out
}

fn subtracted_post_oracle(lambda: f64, m: [u32; 4], k: u32, n_max: u32) -> BTreeMap<Vec<u32>, f64> {
    let [m1, m2, m3, m4] = m;
    let big_m = (m1 + m3).max(m2 + m4);
    let mut out = BTreeMap::new();
    let n_min = (k + m2 + m4).saturating_sub(big_m);
    for n in n_min..=n_max.saturating_sub(big_m) {
        let total = n + big_m;
        if total > n_max || total < k + m2 + m4 {
            continue;
        }
        let b2 = total - k - m2 - m4;
        for r1 in 0..=(total - m1 - m3) {
            let lg = n as f64 * (0.5 * lambda).ln() + ln_fact(total)
                - 0.5
                    * (ln_fact(r1) + ln_fact(k) + ln_fact(total - r1 - m1 - m3) + ln_fact(b2));
            let key = vec![total - m1 - m3 - r1, b2, r1];
            *out.entry(key).or_insert(0.0) += lg.exp();
        }
    }
    normalize(&mut out);
    out
}

fn entrywise(a: &FockState, b: &FockState, tol: f64) -> Result<(), String> {
    if a.len() != b.len() {
        return Err(format!("support sizes {} vs {}", a.len(), b.len()));
    }
    for (occ, amp) in a.iter() {
        let other = b.amplitude(occ);
        if (amp - other).abs() > tol {
            return Err(format!("entry {occ:?}: {amp} vs {other}"));
        }
    }
    Ok(())
}

fn all_specs_up_to(total: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for s in 1..=total {
        for m1 in 0..=s {
            for m2 in 0..=s - m1 {
                for m3 in 0..=s - m1 - m2 {
                    out.push([m1, m2, m3, s - m1 - m2 - m3]);
                }
            }
        }
    }
    out
}

#[test]
fn criterion_09_oracle_equivalence() {
    let check = || -> Result<(), String> {
        let lambda = 0.5f64;
        let r = lambda.atanh();
        for m in all_specs_up_to(4) {
            let add_op =
                degaussified_fmsv(r, PhotonOpKind::Add, m, 1e-10).map_err(|e| e.to_string())?;
            let add_cf = added_fmsv_closed_form(r, m, 1e-10).map_err(|e| e.to_string())?;
            entrywise(&add_op, &add_cf, 1e-10).map_err(|e| format!("add {m:?}: {e}"))?;
            let sub_op = degaussified_fmsv(r, PhotonOpKind::Subtract, m, 1e-10)
                .map_err(|e| e.to_string())?;
            let sub_cf = subtracted_fmsv_closed_form(r, m, 1e-10).map_err(|e| e.to_string())?;
            entrywise(&sub_op, &sub_cf, 1e-10).map_err(|e| format!("sub {m:?}: {e}"))?;
        }
        for m in [[1u32, 0, 1, 1], [2, 1, 0, 0], [0, 0, 0, 1], [1, 1, 1, 1]] {
            for kind in [PhotonOpKind::Add, PhotonOpKind::Subtract] {
                let parent =
                    degaussified_fmsv(r, kind, m, 1e-10).map_err(|e| e.to_string())?;
                for k in [0u32, 1, 2, 3] {
                    let (p, post) =
                        photon_count_project(&parent, 3, k).map_err(|e| e.to_string())?;
                    if p == 0.0 {
                        continue;
                    }
                    let want = match kind {
                        PhotonOpKind::Add => added_post_oracle(lambda, m, k, parent.n_max()),
                        PhotonOpKind::Subtract => {
                            subtracted_post_oracle(lambda, m, k, parent.n_max())
                        }
                    };
                    let post = post.unwrap();
                    if post.len() != want.len() {
                        return Err(format!(
                            "{kind:?} {m:?} k={k}: support {} vs {}",
                            post.len(),
                            want.len()
                        ));
                    }
                    for (occ, amp) in post.iter() {
                        let w = want.get(occ).copied().unwrap_or(0.0);
                        if (amp - w).abs() > 1e-10 {
                            return Err(format!(
                                "{kind:?} {m:?} k={k} entry {occ:?}: {amp} vs {w}"
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    };
    report(9, "operator pipeline matches closed-form state and post-measurement oracles", check());
}

#[test]
fn criterion_10_probability_completeness() {
    let check = || -> Result<(), String> {
        let r = 0.5f64.atanh();
        let mut parents = vec![build_fmsv_fock(r, 1e-10).map_err(|e| e.to_string())?];
        for kind in [PhotonOpKind::Add, PhotonOpKind::Subtract] {
            for m in [[1u32, 0, 0, 0], [0, 2, 0, 0], [1, 0, 1, 1], [0, 0, 0, 3]] {
                parents.push(degaussified_fmsv(r, kind, m, 1e-10).map_err(|e| e.to_string())?);
            }
        }
        for parent in &parents {
            let dist = outcome_distribution(parent, 3, 1e-15).map_err(|e| e.to_string())?;
            let total: f64 = dist.entries.iter().map(|o| o.probability).sum();
            // residual from the distribution plus the truncation tail must
            // close the budget to 1.
            if (total + dist.residual - 1.0).abs() > 1e-12 {
                return Err(format!("Σp + residual = {}", total + dist.residual));
            }
            if total + parent.tail_bound() < 1.0 - 1e-9 {
                return Err(format!(
                    "Σp = {total}, tail {} leaves unexplained mass",
                    parent.tail_bound()
                ));
            }
        }
        Ok(())
    };
    report(10, "outcome probabilities and residual close to unity", check());
}

#[test]
fn criterion_11_monotonicity_in_lambda() {
    let check = || -> Result<(), String> {
        let mut prev_gauss = f64::NEG_INFINITY;
        let mut prev_count = f64::NEG_INFINITY;
        for i in 1..=18 {
            let lambda = 0.05 * i as f64;
            let g = lgme_gaussian(lambda.atanh(), &GridSearch::default())
                .map_err(|e| e.to_string())?
                .optimal_value;
            let c = counting_lower(lambda, None, [0; 4])?;
            if g <= prev_gauss {
                return Err(format!("gaussian not increasing at λ={lambda}: {g}"));
            }
            if c <= prev_count {
                return Err(format!("counting not increasing at λ={lambda}: {c}"));
            }
            prev_gauss = g;
            prev_count = c;
        }
        Ok(())
    };
    report(11, "plain-FMSV LGME strictly increases in λ for both engines", check());
}
