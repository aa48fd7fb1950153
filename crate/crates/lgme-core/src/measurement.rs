//! Photon-counting (non-Gaussian) measurement of one mode of a four-mode
//! Fock state, outcome distributions, and LGME aggregation.
//!
//! Because the Fock expansion is truncated, the localized entanglement is
//! reported as an interval: the lower bound sums `p_k · GGM(ψ_k)` over the
//! enumerated outcomes, the upper bound charges the residual probability
//! mass at the maximal GGM of 1.

use alloc::vec::Vec;

use crate::fock::FockState;
use crate::{Error, Result};

/// One photon-counting outcome: the count, its probability, and the
/// normalized post-measurement state on the remaining modes.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub count: u32,
    pub probability: f64,
    pub post_state: FockState,
}

/// Enumerated outcomes of counting photons on one mode, plus the residual
/// probability left unenumerated.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    pub mode: usize,
    pub entries: Vec<Outcome>,
    pub residual: f64,
}

/// LGME under photon counting, as a rigorous interval.
#[derive(Debug, Clone, PartialEq)]
pub struct LgmeResult {
    /// `Σ p_k · GGM(ψ_k)` over enumerated outcomes.
    pub lower: f64,
    /// `lower + residual` (GGM ≤ 1 charges the unenumerated mass fully).
    pub upper: f64,
    /// Number of outcomes with nonzero probability that were enumerated.
    pub k_used: usize,
    pub residual: f64,
    /// Per-outcome `(k, p_k, GGM)` rows in ascending `k`.
    pub per_outcome: Vec<(u32, f64, f64)>,
}

/// Projects onto `k` photons in `mode`: returns the outcome probability and
/// the normalized post-measurement state on the remaining modes, or `None`
/// when the outcome has zero probability.
pub fn photon_count_project(
    state: &FockState,
    mode: usize,
    k: u32,
) -> Result<(f64, Option<FockState>)> {
    if mode >= state.modes() {
        return Err(Error::InvalidModeIndex { index: mode, modes: state.modes() });
    }
    let mut entries = Vec::new();
    let mut p = 0.0f64;
    for (occ, amp) in state.iter() {
        if occ[mode] != k {
            continue;
        }
        p += amp * amp;
        let rest: Vec<u32> = occ
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != mode)
            .map(|(_, &n)| n)
            .collect();
        entries.push((rest, amp));
    }
    if p == 0.0 {
        return Ok((0.0, None));
    }
    let post = FockState::from_entries(state.modes() - 1, entries, state.n_max(), state.tail_bound())?
        .normalize()?;
    Ok((p, Some(post)))
}

/// Enumerates outcomes `k = 0, 1, 2, …` until the accumulated probability
/// reaches `1 − residual_cap` or `k` exceeds the largest stored occupation
/// on the measured mode.
pub fn outcome_distribution(
    state: &FockState,
    mode: usize,
    residual_cap: f64,
) -> Result<OutcomeDistribution> {
    if !(0.0..1.0).contains(&residual_cap) || residual_cap == 0.0 {
        return Err(Error::InvalidArgument("residual_cap must lie in (0, 1)".into()));
    }
    let k_top = state.max_occupation(mode)?;
    let mut entries = Vec::new();
    let mut total = 0.0f64;
    for k in 0..=k_top {
        if total >= 1.0 - residual_cap {
            break;
        }
        let (p, post) = photon_count_project(state, mode, k)?;
        if let Some(post_state) = post {
            total += p;
            entries.push(Outcome { count: k, probability: p, post_state });
        }
    }
    Ok(OutcomeDistribution {
        mode,
        entries,
        residual: (1.0 - total).max(0.0),
    })
}

/// LGME of a four-mode state under photon counting on `mode`:
/// the probability-weighted GGM of the post-measurement states, aggregated
/// in ascending `k` (fixed summation order keeps results bit-stable).
pub fn lgme_photon_counting<F>(
    state: &FockState,
    mode: usize,
    residual_cap: f64,
    ggm: F,
) -> Result<LgmeResult>
where
    F: Fn(&FockState) -> Result<f64>,
{
    if state.modes() != 4 {
        return Err(Error::InvalidArgument("photon-counting LGME expects a 4-mode parent".into()));
    }
    let dist = outcome_distribution(state, mode, residual_cap)?;
    let mut lower = 0.0f64;
    let mut per_outcome = Vec::with_capacity(dist.entries.len());
    for outcome in &dist.entries {
        let g = ggm(&outcome.post_state)?;
        lower += outcome.probability * g;
        per_outcome.push((outcome.count, outcome.probability, g));
    }
    Ok(LgmeResult {
        lower,
        upper: lower + dist.residual,
        k_used: dist.entries.len(),
        residual: dist.residual,
        per_outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::ggm_pure_fock;
    use crate::fock::{build_fmsv_fock, degaussified_fmsv, PhotonOpKind};
    use alloc::vec;

    fn vacuum4() -> FockState {
        FockState::from_entries(4, [(vec![0, 0, 0, 0], 1.0)], 0, 0.0).unwrap()
    }

    #[test]
    fn vacuum_projects_to_vacuum_with_certainty() {
        let (p, post) = photon_count_project(&vacuum4(), 3, 0).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
        let post = post.unwrap();
        assert_eq!(post.modes(), 3);
        assert!((post.amplitude(&[0, 0, 0]) - 1.0).abs() < 1e-15);

        let dist = outcome_distribution(&vacuum4(), 3, 1e-8).unwrap();
        assert_eq!(dist.entries.len(), 1);
        assert!(dist.residual < 1e-15);
    }

    #[test]
    fn zero_probability_outcomes_are_skipped() {
        let (p, post) = photon_count_project(&vacuum4(), 3, 5).unwrap();
        assert_eq!(p, 0.0);
        assert!(post.is_none());

        // Adding two photons on mode 4 shifts its support: p_0 = p_1 = 0.
        let r = libm::atanh(0.5);
        let added = degaussified_fmsv(r, PhotonOpKind::Add, [0, 0, 0, 2], 1e-10).unwrap();
        for k in 0..2 {
            let (p, _) = photon_count_project(&added, 3, k).unwrap();
            assert_eq!(p, 0.0);
        }
        let dist = outcome_distribution(&added, 3, 1e-8).unwrap();
        assert!(dist.entries.iter().all(|o| o.count >= 2));
    }

    #[test]
    fn vacuum_projection_of_fmsv_has_geometric_probability() {
        // k = 0 on mode 4 keeps the r2 = 0 slice:
        // p_0 = (1/cosh²r) Σ_n (tanh²r / 2)^n.
        let lambda = 0.5f64;
        let r = libm::atanh(lambda);
        let state = build_fmsv_fock(r, 1e-14).unwrap();
        let (p0, _) = photon_count_project(&state, 3, 0).unwrap();
        let q = lambda * lambda / 2.0;
        let closed = (1.0 - lambda * lambda) / (1.0 - q);
        assert!((p0 - closed).abs() < 1e-12, "{p0} vs {closed}");
    }

    #[test]
    fn probabilities_are_complete_on_stored_support() {
        let r = libm::atanh(0.5);
        let state = build_fmsv_fock(r, 1e-10).unwrap();
        let dist = outcome_distribution(&state, 3, 1e-15).unwrap();
        let total: f64 = dist.entries.iter().map(|o| o.probability).sum();
        let sq = state.norm() * state.norm();
        assert!((total - sq).abs() < 1e-12);
    }

    #[test]
    fn lgme_interval_is_well_formed() {
        let r = libm::atanh(0.5);
        let state = build_fmsv_fock(r, 1e-10).unwrap().normalize().unwrap();
        let res = lgme_photon_counting(&state, 3, 1e-8, ggm_pure_fock).unwrap();
        assert!(res.lower >= 0.0);
        assert!(res.lower <= res.upper);
        assert!(res.upper <= 1.0 + 1e-12);
        assert!(res.residual <= 1e-8 + 1e-12);
        assert_eq!(res.k_used, res.per_outcome.len());
        // non-Gaussian beats the Gaussian closed form
        let gauss = crate::gaussian::lgme_fmsv_closed_form(r);
        assert!(res.lower >= gauss - 1e-6);
    }

    #[test]
    fn vacuum_parent_localizes_nothing() {
        let res = lgme_photon_counting(&vacuum4(), 3, 1e-8, ggm_pure_fock).unwrap();
        assert_eq!(res.lower, 0.0);
        assert!(res.upper < 1e-15);
    }

    #[test]
    fn subtraction_mode_choice_is_symmetric() {
        // Corollary: LGME^sub(m1 = 1) = LGME^sub(m3 = 1).
        let r = libm::atanh(0.5);
        let a = degaussified_fmsv(r, PhotonOpKind::Subtract, [1, 0, 0, 0], 1e-10).unwrap();
        let b = degaussified_fmsv(r, PhotonOpKind::Subtract, [0, 0, 1, 0], 1e-10).unwrap();
        let la = lgme_photon_counting(&a, 3, 1e-8, ggm_pure_fock).unwrap();
        let lb = lgme_photon_counting(&b, 3, 1e-8, ggm_pure_fock).unwrap();
        assert!((la.lower - lb.lower).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_arguments() {
        let state = vacuum4();
        assert!(photon_count_project(&state, 4, 0).is_err());
        assert!(outcome_distribution(&state, 3, 0.0).is_err());
        assert!(outcome_distribution(&state, 3, 1.0).is_err());
        let three = FockState::from_entries(3, [(vec![0, 0, 0], 1.0)], 0, 0.0).unwrap();
        assert!(lgme_photon_counting(&three, 0, 1e-8, ggm_pure_fock).is_err());
    }
}
