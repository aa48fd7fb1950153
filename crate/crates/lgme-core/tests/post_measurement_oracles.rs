//! Closed-form oracles for the photon-counting post-measurement states of
//! added/subtracted FMSV parents, checked entrywise against the generic
//! operator + projection pipeline.
//!
//! The oracles below are written directly from the analytic coefficient
//! functions, independently of the library's operator code path.

use std::collections::BTreeMap;

use lgme_core::fock::{degaussified_fmsv, PhotonOpKind};
use lgme_core::measurement::photon_count_project;

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

/// Post-measurement state of the photon-added FMSV when `k` photons click
/// on mode 4. One correction relative to the printed coefficient function:
/// the binomial in the measured-mode pair is `C(n, k - m4)`, not `C(n, k)`
/// (the two coincide for `m4 = 0`); only the former is consistent with the
/// parent expansion, as the entrywise comparison below confirms.
fn added_post_oracle(lambda: f64, m: [u32; 4], k: u32, n_max: u32) -> BTreeMap<Vec<u32>, f64> {
    let [m1, m2, m3, m4] = m;
    let mut out = BTreeMap::new();
    for n in k.saturating_sub(m4)..=n_max {
        if k < m4 || k - m4 > n || n + m4 < k {
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

/// Post-measurement state of the photon-subtracted FMSV for outcome `k` on
/// mode 4, from the compact coefficient function
/// `f ∝ (λ/2)^n (n+M)! / sqrt(r1! k! (n+M-r1-m1-m3)! (n+M-k-m2-m4)!)`
/// with `M = max(m1+m3, m2+m4)`; entries with expansion index beyond the
/// parent truncation are dropped to match the truncated pipeline.
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
                    * (ln_fact(r1)
                        + ln_fact(k)
                        + ln_fact(total - r1 - m1 - m3)
                        + ln_fact(b2));
            let key = vec![total - m1 - m3 - r1, b2, r1];
            *out.entry(key).or_insert(0.0) += lg.exp();
        }
    }
    normalize(&mut out);
    out
}

fn assert_state_matches(
    got: &lgme_core::fock::FockState,
    want: &BTreeMap<Vec<u32>, f64>,
    tol: f64,
    label: &str,
) {
    assert_eq!(got.len(), want.len(), "{label}: support size");
    for (occ, amp) in got.iter() {
        let w = want.get(occ).copied().unwrap_or(0.0);
        assert!(
            (amp - w).abs() < tol,
            "{label}: entry {occ:?}: {amp} vs {w}"
        );
    }
}

#[test]
fn subtracted_post_measurement_matches_coefficient_function() {
    let lambda = 0.5f64;
    let r = lambda.atanh();
    for m in [[1u32, 0, 1, 1], [2, 0, 0, 0], [0, 1, 0, 1], [1, 1, 1, 1]] {
        let parent = degaussified_fmsv(r, PhotonOpKind::Subtract, m, 1e-10).unwrap();
        for k in [0u32, 1, 3] {
            let (p, post) = photon_count_project(&parent, 3, k).unwrap();
            if p == 0.0 {
                continue;
            }
            let oracle = subtracted_post_oracle(lambda, m, k, parent.n_max());
            assert_state_matches(&post.unwrap(), &oracle, 1e-10, &format!("sub {m:?} k={k}"));
        }
    }
}

#[test]
fn added_post_measurement_matches_coefficient_function() {
    let lambda = 0.5f64;
    let r = lambda.atanh();
    for m in [[1u32, 0, 2, 2], [2, 1, 0, 0], [0, 0, 0, 1], [1, 1, 1, 1]] {
        let parent = degaussified_fmsv(r, PhotonOpKind::Add, m, 1e-10).unwrap();
        for k in [1u32, 2, 3, 5] {
            let (p, post) = photon_count_project(&parent, 3, k).unwrap();
            if p == 0.0 {
                continue;
            }
            let oracle = added_post_oracle(lambda, m, k, parent.n_max());
            assert_state_matches(&post.unwrap(), &oracle, 1e-10, &format!("add {m:?} k={k}"));
        }
    }
}

#[test]
fn bare_fmsv_post_measurement_is_the_zero_op_special_case() {
    let lambda = 0.5f64;
    let r = lambda.atanh();
    let parent = lgme_core::fock::build_fmsv_fock(r, 1e-10).unwrap();
    for k in [0u32, 2] {
        let (p, post) = photon_count_project(&parent, 3, k).unwrap();
        assert!(p > 0.0);
        let oracle = subtracted_post_oracle(lambda, [0, 0, 0, 0], k, parent.n_max());
        assert_state_matches(&post.unwrap(), &oracle, 1e-10, &format!("fmsv k={k}"));
    }
}
