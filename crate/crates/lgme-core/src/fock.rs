//! Sparse truncated Fock-space representation of the FMSV state and its
//! photon-added/-subtracted variants.
//!
//! The FMSV support is the three-parameter family `(n, r1, r2)` living on
//! occupations `(n-r1, n-r2, r1, r2)` inside a four-index space, so states
//! are kept as a sparse map from occupation tuples to real amplitudes. The
//! map is ordered (a B-tree), which makes iteration, summation and the text
//! dump deterministic.
//!
//! Truncation is by the global expansion index `n`, for which the exact
//! geometric tail bound `tanh^(2(n_max+1)) r` is available.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::math::{ln_binomial, ln_falling_ratio, ln_rising_ratio};
use crate::{Error, Result};

/// Photon occupation numbers, one per mode.
pub type Occupation = Vec<u32>;

/// A pure state with real amplitudes over a sparse set of Fock basis kets.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    modes: usize,
    amplitudes: BTreeMap<Occupation, f64>,
    n_max: u32,
    tail_bound: f64,
}

/// Photon addition (`a†^m`) or subtraction (`a^m`) on a single mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhotonOpKind {
    Add,
    Subtract,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhotonOp {
    pub mode: usize,
    pub count: u32,
    pub kind: PhotonOpKind,
}

impl FockState {
    /// Builds a state from raw (occupation, amplitude) entries. Zero
    /// amplitudes are dropped; duplicate occupations accumulate.
    pub fn from_entries<I>(modes: usize, entries: I, n_max: u32, tail_bound: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (Occupation, f64)>,
    {
        let mut amplitudes = BTreeMap::new();
        for (occ, amp) in entries {
            if occ.len() != modes {
                return Err(Error::InvalidArgument(alloc::format!(
                    "occupation tuple has {} entries, expected {modes}",
                    occ.len()
                )));
            }
            if amp != 0.0 {
                *amplitudes.entry(occ).or_insert(0.0) += amp;
            }
        }
        amplitudes.retain(|_, a| *a != 0.0);
        Ok(Self { modes, amplitudes, n_max, tail_bound })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// Upper bound on the squared norm discarded by truncation.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Iterates entries in lexicographic occupation order.
    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, f64)> {
        self.amplitudes.iter().map(|(k, &v)| (k, v))
    }

    pub fn amplitude(&self, occ: &[u32]) -> f64 {
        self.amplitudes.get(occ).copied().unwrap_or(0.0)
    }

    /// Euclidean norm of the amplitude map.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amplitudes.values().map(|a| a * a).sum())
    }

    /// Returns the unit-norm copy of this state.
    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n <= 0.0 {
            return Err(Error::EmptyState);
        }
        let mut out = self.clone();
        for a in out.amplitudes.values_mut() {
            *a /= n;
        }
        Ok(out)
    }

    /// Largest occupation present on `mode`.
    pub fn max_occupation(&self, mode: usize) -> Result<u32> {
        if mode >= self.modes {
            return Err(Error::InvalidModeIndex { index: mode, modes: self.modes });
        }
        Ok(self.amplitudes.keys().map(|occ| occ[mode]).max().unwrap_or(0))
    }
}

/// Truncated Fock expansion of the FMSV state with squeezing `r`:
/// amplitudes `(1/cosh r)(tanh r / 2)^n sqrt(C(n,r1)) sqrt(C(n,r2))` on
/// occupations `(n-r1, n-r2, r1, r2)`, for all `n <= n_max`, where `n_max`
/// is the smallest integer with `tanh^(2(n_max+1)) r < epsilon`.
pub fn build_fmsv_fock(r: f64, epsilon: f64) -> Result<FockState> {
    let lambda = libm::tanh(r);
    if !(0.0..1.0 - 1e-12).contains(&lambda) {
        return Err(Error::TruncationDiverges { lambda });
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let mut n_max = 0u32;
    let mut tail = lambda * lambda;
    while tail >= epsilon {
        n_max += 1;
        tail *= lambda * lambda;
    }
    let inv_cosh = 1.0 / libm::cosh(r);
    let ln_half_lambda = if lambda > 0.0 { libm::log(0.5 * lambda) } else { 0.0 };
    let mut entries = Vec::new();
    for n in 0..=n_max {
        if lambda == 0.0 && n > 0 {
            break;
        }
        for r1 in 0..=n {
            for r2 in 0..=n {
                let lg = n as f64 * ln_half_lambda
                    + 0.5 * ln_binomial(n, r1)
                    + 0.5 * ln_binomial(n, r2);
                entries.push((
                    alloc::vec![n - r1, n - r2, r1, r2],
                    inv_cosh * libm::exp(lg),
                ));
            }
        }
    }
    FockState::from_entries(4, entries, n_max, tail)
}

/// Applies `a†^m` or `a^m` on one mode and renormalizes.
///
/// The truncation tail bound is updated conservatively: it is scaled by the
/// largest squared coefficient growth over the surviving entries, divided by
/// the squared norm of the raw result. This is a diagnostic, not an exact
/// bound.
pub fn apply_photon_op(state: &FockState, op: &PhotonOp) -> Result<FockState> {
    if op.mode >= state.modes() {
        return Err(Error::InvalidModeIndex { index: op.mode, modes: state.modes() });
    }
    if op.count == 0 {
        return Err(Error::InvalidArgument("photon count must be >= 1".into()));
    }
    let mut entries = Vec::with_capacity(state.len());
    let mut max_growth = 0.0f64;
    for (occ, amp) in state.iter() {
        let n = occ[op.mode];
        let (new_n, factor) = match op.kind {
            PhotonOpKind::Add => (
                n + op.count,
                libm::exp(0.5 * ln_rising_ratio(n, op.count)),
            ),
            PhotonOpKind::Subtract => {
                if n < op.count {
                    continue;
                }
                (n - op.count, libm::exp(0.5 * ln_falling_ratio(n, op.count)))
            }
        };
        max_growth = max_growth.max(factor * factor);
        let mut new_occ = occ.clone();
        new_occ[op.mode] = new_n;
        entries.push((new_occ, amp * factor));
    }
    let raw = FockState::from_entries(state.modes(), entries, state.n_max(), 0.0)?;
    if raw.is_empty() {
        return Err(Error::EmptyState);
    }
    let sq_norm = raw.norm() * raw.norm();
    let mut out = raw.normalize()?;
    out.tail_bound = state.tail_bound() * max_growth / sq_norm;
    Ok(out)
}

/// Evaluates the normalization sum `N^add` or `N^sub` of the photon-added or
/// -subtracted FMSV, truncated at `n_max`, with all factorial ratios in
/// log-gamma space.
///
/// The sums follow the convention in which the bare FMSV (all `m_i = 0`)
/// gives `cosh²r`; equivalently, `N / cosh²r` equals the squared norm of the
/// unnormalized operator output on the normalized FMSV.
pub fn normalization_constant(kind: PhotonOpKind, r: f64, m: [u32; 4], n_max: u32) -> Result<f64> {
    let lambda = libm::tanh(r);
    if !(0.0..1.0 - 1e-12).contains(&lambda) {
        return Err(Error::TruncationDiverges { lambda });
    }
    let ln_q = if lambda > 0.0 {
        2.0 * libm::log(0.5 * lambda)
    } else {
        0.0
    };
    let mut total = 0.0f64;
    for n in 0..=n_max {
        if lambda == 0.0 && n > 0 {
            break;
        }
        let base = n as f64 * ln_q;
        let mut sum1 = 0.0f64;
        let mut sum2 = 0.0f64;
        match kind {
            PhotonOpKind::Add => {
                for r1 in 0..=n {
                    sum1 += libm::exp(
                        ln_binomial(n, r1)
                            + ln_rising_ratio(n - r1, m[0])
                            + ln_rising_ratio(r1, m[2]),
                    );
                }
                for r2 in 0..=n {
                    sum2 += libm::exp(
                        ln_binomial(n, r2)
                            + ln_rising_ratio(n - r2, m[1])
                            + ln_rising_ratio(r2, m[3]),
                    );
                }
            }
            PhotonOpKind::Subtract => {
                if n >= m[0] + m[2] {
                    for r1 in m[2]..=(n - m[0]) {
                        sum1 += libm::exp(
                            ln_binomial(n, r1)
                                + ln_falling_ratio(n - r1, m[0])
                                + ln_falling_ratio(r1, m[2]),
                        );
                    }
                }
                if n >= m[1] + m[3] {
                    for r2 in m[3]..=(n - m[1]) {
                        sum2 += libm::exp(
                            ln_binomial(n, r2)
                                + ln_falling_ratio(n - r2, m[1])
                                + ln_falling_ratio(r2, m[3]),
                        );
                    }
                }
            }
        }
        total += libm::exp(base) * sum1 * sum2;
    }
    if total <= 0.0 {
        return Err(Error::EmptyState);
    }
    Ok(total)
}

/// Direct construction of the photon-added FMSV from its closed-form
/// coefficients; retained as an independent oracle for [`apply_photon_op`].
pub fn added_fmsv_closed_form(r: f64, m: [u32; 4], epsilon: f64) -> Result<FockState> {
    let lambda = libm::tanh(r);
    let parent = build_fmsv_fock(r, epsilon)?;
    let n_max = parent.n_max();
    let ln_half_lambda = if lambda > 0.0 { libm::log(0.5 * lambda) } else { 0.0 };
    let mut entries = Vec::new();
    for n in 0..=n_max {
        if lambda == 0.0 && n > 0 {
            break;
        }
        for r1 in 0..=n {
            for r2 in 0..=n {
                let lg = n as f64 * ln_half_lambda
                    + 0.5 * (ln_binomial(n, r1) + ln_binomial(n, r2))
                    + 0.5 * (ln_rising_ratio(n - r1, m[0]) + ln_rising_ratio(n - r2, m[1]))
                    + 0.5 * (ln_rising_ratio(r1, m[2]) + ln_rising_ratio(r2, m[3]));
                entries.push((
                    alloc::vec![n - r1 + m[0], n - r2 + m[1], r1 + m[2], r2 + m[3]],
                    libm::exp(lg),
                ));
            }
        }
    }
    FockState::from_entries(4, entries, n_max, parent.tail_bound())?.normalize()
}

/// Direct construction of the photon-subtracted FMSV; oracle counterpart of
/// [`added_fmsv_closed_form`].
pub fn subtracted_fmsv_closed_form(r: f64, m: [u32; 4], epsilon: f64) -> Result<FockState> {
    let lambda = libm::tanh(r);
    let parent = build_fmsv_fock(r, epsilon)?;
    let n_max = parent.n_max();
    let ln_half_lambda = if lambda > 0.0 { libm::log(0.5 * lambda) } else { 0.0 };
    let start = (m[0] + m[2]).max(m[1] + m[3]);
    let mut entries = Vec::new();
    for n in start..=n_max {
        if lambda == 0.0 && n > 0 {
            break;
        }
        for r1 in m[2]..=(n - m[0]) {
            for r2 in m[3]..=(n - m[1]) {
                let lg = n as f64 * ln_half_lambda
                    + 0.5 * (ln_binomial(n, r1) + ln_binomial(n, r2))
                    + 0.5 * (ln_falling_ratio(n - r1, m[0]) + ln_falling_ratio(n - r2, m[1]))
                    + 0.5 * (ln_falling_ratio(r1, m[2]) + ln_falling_ratio(r2, m[3]));
                entries.push((
                    alloc::vec![n - r1 - m[0], n - r2 - m[1], r1 - m[2], r2 - m[3]],
                    libm::exp(lg),
                ));
            }
        }
    }
    let state = FockState::from_entries(4, entries, n_max, parent.tail_bound())?;
    if state.is_empty() {
        return Err(Error::EmptyState);
    }
    state.normalize()
}

/// Applies a per-mode add/subtract specification to the truncated FMSV by
/// sequential operator application.
pub fn degaussified_fmsv(r: f64, kind: PhotonOpKind, m: [u32; 4], epsilon: f64) -> Result<FockState> {
    let mut state = build_fmsv_fock(r, epsilon)?;
    for (mode, &count) in m.iter().enumerate() {
        if count > 0 {
            state = apply_photon_op(&state, &PhotonOp { mode, count, kind })?;
        }
    }
    Ok(state)
}
