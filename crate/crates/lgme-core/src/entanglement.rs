//! Generalized geometric measure for pure states in the Fock representation.
//!
//! For every bipartition the amplitude map is reshaped into a sparse matrix
//! indexed by (side-A occupations) × (side-B occupations); the largest
//! squared Schmidt coefficient is the top eigenvalue of the side-A reduced
//! density matrix, obtained by power iteration with a dense fallback.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::fock::FockState;
use crate::{Error, Result};

/// Relative-change stopping threshold for the power iteration.
const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITERS: usize = 10_000;
/// Dense eigensolver fallback applies below this side-A dimension.
const DENSE_FALLBACK_DIM: usize = 400;

/// A bipartition of mode indices, canonicalized so that `|side_a| <= |side_b|`
/// with lexicographic tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Bipartition {
    /// Builds the cut separating `side_a` from its complement in `0..modes`.
    pub fn new(modes: usize, side_a: &[usize]) -> Result<Self> {
        if side_a.is_empty() || side_a.len() >= modes {
            return Err(Error::EmptySelection);
        }
        let mut a: Vec<usize> = side_a.to_vec();
        a.sort_unstable();
        for (i, &m) in a.iter().enumerate() {
            if m >= modes || (i > 0 && a[i - 1] == m) {
                return Err(Error::InvalidModeIndex { index: m, modes });
            }
        }
        let b: Vec<usize> = (0..modes).filter(|m| !a.contains(m)).collect();
        if a.len() > b.len() || (a.len() == b.len() && a > b) {
            Ok(Self { side_a: b, side_b: a })
        } else {
            Ok(Self { side_a: a, side_b: b })
        }
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    /// All canonical bipartitions of an N-mode system with
    /// `|side_a| <= ⌊N/2⌋`: the single-mode cuts, plus (for N = 4) the three
    /// distinct 2:2 cuts.
    pub fn canonical_cuts(modes: usize) -> Vec<Bipartition> {
        let mut cuts = Vec::new();
        for m in 0..modes {
            cuts.push(Bipartition::new(modes, &[m]).expect("single-mode cut"));
        }
        if modes == 4 {
            for other in 1..4 {
                cuts.push(Bipartition::new(modes, &[0, other]).expect("2:2 cut"));
            }
        }
        cuts
    }
}

/// Deterministic pseudo-random stream for power-iteration start vectors.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Largest squared Schmidt coefficient of `state` across `cut`.
pub fn max_schmidt_sq(state: &FockState, cut: &Bipartition) -> Result<f64> {
    if state.is_empty() {
        return Err(Error::EmptyState);
    }
    // Index dictionaries over the stored support only. Indices follow the
    // sorted order of the projected keys and triplets are sorted by (i, j),
    // so the computed value is invariant under mode relabeling of the input.
    let mut a_index: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut b_index: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for (occ, _) in state.iter() {
        a_index.insert(cut.side_a().iter().map(|&m| occ[m]).collect(), 0);
        b_index.insert(cut.side_b().iter().map(|&m| occ[m]).collect(), 0);
    }
    for (i, (_, v)) in a_index.iter_mut().enumerate() {
        *v = i;
    }
    for (j, (_, v)) in b_index.iter_mut().enumerate() {
        *v = j;
    }
    let mut triplets: Vec<(usize, usize, f64)> = Vec::with_capacity(state.len());
    for (occ, amp) in state.iter() {
        let ka: Vec<u32> = cut.side_a().iter().map(|&m| occ[m]).collect();
        let kb: Vec<u32> = cut.side_b().iter().map(|&m| occ[m]).collect();
        triplets.push((a_index[&ka], b_index[&kb], amp));
    }
    triplets.sort_unstable_by_key(|&(i, j, _)| (i, j));
    let (na, nb) = (a_index.len(), b_index.len());
    if na == 1 {
        // Rank-one side: the reduced density matrix is the scalar |ψ|².
        return Ok(triplets.iter().map(|&(_, _, a)| a * a).sum());
    }

    if let Some(top) = power_iteration(&triplets, na, nb) {
        return Ok(top);
    }
    if na <= DENSE_FALLBACK_DIM {
        let mut rho: DMatrix<f64> = DMatrix::zeros(na, na);
        // rho_A = M Mᵀ assembled column-by-column of M.
        let mut cols: Vec<Vec<(usize, f64)>> = alloc::vec![Vec::new(); nb];
        for &(i, j, v) in &triplets {
            cols[j].push((i, v));
        }
        for col in &cols {
            for &(i, vi) in col {
                for &(k, vk) in col {
                    rho[(i, k)] += vi * vk;
                }
            }
        }
        let eig = nalgebra::linalg::SymmetricEigen::new(rho);
        return Ok(eig.eigenvalues.iter().fold(f64::NEG_INFINITY, |a, &x| a.max(x)));
    }
    Err(Error::PowerIterationFailed { dimension: na })
}

/// Top eigenvalue of `M Mᵀ` by power iteration on the sparse triplets;
/// `None` if the relative change has not fallen below tolerance in time.
fn power_iteration(triplets: &[(usize, usize, f64)], na: usize, nb: usize) -> Option<f64> {
    let mut seed = 0x6c67_6d65_u64; // fixed: results must be reproducible
    let mut v: Vec<f64> = (0..na)
        .map(|_| 0.5 + (splitmix64(&mut seed) >> 11) as f64 / (1u64 << 53) as f64)
        .collect();
    let norm = libm::sqrt(v.iter().map(|x| x * x).sum());
    v.iter_mut().for_each(|x| *x /= norm);

    let mut prev = 0.0f64;
    let mut w = alloc::vec![0.0f64; nb];
    let mut u = alloc::vec![0.0f64; na];
    for _ in 0..POWER_MAX_ITERS {
        w.iter_mut().for_each(|x| *x = 0.0);
        for &(i, j, val) in triplets {
            w[j] += val * v[i];
        }
        u.iter_mut().for_each(|x| *x = 0.0);
        for &(i, j, val) in triplets {
            u[i] += val * w[j];
        }
        let lambda: f64 = v.iter().zip(&u).map(|(a, b)| a * b).sum();
        let unorm = libm::sqrt(u.iter().map(|x| x * x).sum());
        if unorm == 0.0 {
            return Some(0.0);
        }
        v.iter_mut().zip(&u).for_each(|(a, &b)| *a = b / unorm);
        if (lambda - prev).abs() <= POWER_TOL * lambda.abs().max(1.0) {
            return Some(lambda);
        }
        prev = lambda;
    }
    None
}

/// GGM of a normalized pure Fock state with at least three modes:
/// `1 − max over canonical bipartitions of the top squared Schmidt
/// coefficient`.
pub fn ggm_pure_fock(state: &FockState) -> Result<f64> {
    if state.modes() < 3 {
        return Err(Error::InvalidArgument("GGM needs at least three modes".into()));
    }
    if state.is_empty() {
        return Err(Error::EmptyState);
    }
    let mut worst = f64::NEG_INFINITY;
    for cut in Bipartition::canonical_cuts(state.modes()) {
        worst = worst.max(max_schmidt_sq(state, &cut)?);
    }
    Ok(1.0 - worst)
}

/// Closed-form GGM of the FMSV state,
/// `1 − max{2/(1+cosh²r), 2/(1+cosh 2r), (2/(1+cosh r))²}`.
pub fn ggm_fmsv_closed_form(r: f64) -> f64 {
    let c = libm::cosh(r);
    let branch = (2.0 / (1.0 + c * c))
        .max(2.0 / (1.0 + libm::cosh(2.0 * r)))
        .max((2.0 / (1.0 + c)) * (2.0 / (1.0 + c)));
    1.0 - branch
}
