//! Covariance-matrix engine for the Gaussian pathway.
//!
//! States are pure Gaussian states described by their covariance matrix in
//! the vacuum-variance-1/2 convention (quadrature ordering
//! `q1, p1, …, qm, pm`). Gaussian measurements on one mode condition the
//! remaining modes through a Schur-complement update; since the conditioned
//! covariance is outcome-independent, no averaging over outcomes is needed.
//!
//! The generalized geometric measure of a pure Gaussian state is computed
//! from the symplectic spectra of all its few-mode reductions.

use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};

use crate::{Error, Result};

/// Relative tolerance for the symmetry check on covariance matrices.
const SYMMETRY_TOL: f64 = 1e-12;

/// Tolerance for the `±iν` pairing of the eigenvalues of `J·Λ`.
const PAIRING_TOL: f64 = 1e-8;

/// Lenient purity gate for GGM preconditions; conditioned states accumulate
/// rounding at extreme measurement squeezing.
const PURITY_GATE: f64 = 1e-6;

/// The symplectic form `J` of an m-mode system: block-diagonal 2×2 blocks
/// `[[0, 1], [-1, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    modes: usize,
}

impl SymplecticForm {
    pub fn new(modes: usize) -> Self {
        Self { modes }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(2 * self.modes, 2 * self.modes);
        for i in 0..self.modes {
            j[(2 * i, 2 * i + 1)] = 1.0;
            j[(2 * i + 1, 2 * i)] = -1.0;
        }
        j
    }
}

/// Which quadrature a homodyne detector reads out. `X` is the `φ = 0`,
/// `r' → ∞` limit of the squeezed-coherent measurement family; `P` the
/// `φ = π` limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    X,
    P,
}

/// A single-mode Gaussian measurement: a squeezed-coherent projection with
/// finite squeezing `r'` and quadrature angle `φ`, or its infinite-squeezing
/// homodyne limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaussianMeasurement {
    SqueezedCoherent { squeeze: f64, angle: f64 },
    Homodyne(Quadrature),
}

impl GaussianMeasurement {
    /// Covariance matrix of the squeezed-coherent measurement state,
    ///
    /// ```text
    /// [[cosh 2r' + cos φ sinh 2r',  sin φ sinh 2r'          ],
    ///  [sin φ sinh 2r',             cosh 2r' - cos φ sinh 2r']]
    /// ```
    ///
    /// Note this form is normalized to vacuum variance 1 (det = 1); the
    /// conditioning below rescales it by 1/2 to match the state convention.
    /// Homodyne measurements have no finite covariance and must go through
    /// [`condition_on_homodyne`].
    pub fn covariance(&self) -> Result<Matrix2<f64>> {
        match *self {
            GaussianMeasurement::SqueezedCoherent { squeeze, angle } => {
                let ch = libm::cosh(2.0 * squeeze);
                let sh = libm::sinh(2.0 * squeeze);
                let (s, c) = (libm::sin(angle), libm::cos(angle));
                Ok(Matrix2::new(ch + c * sh, s * sh, s * sh, ch - c * sh))
            }
            GaussianMeasurement::Homodyne(_) => Err(Error::WrongMeasurementBranch),
        }
    }
}

/// Covariance matrix of an m-mode Gaussian state (2m × 2m, symmetric,
/// vacuum variance 1/2).
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    modes: usize,
    mat: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Wraps a raw matrix, validating its shape and symmetry.
    pub fn new(modes: usize, mat: DMatrix<f64>) -> Result<Self> {
        if modes == 0 || mat.nrows() != 2 * modes || mat.ncols() != 2 * modes {
            return Err(Error::InvalidArgument(alloc::format!(
                "expected a {n}x{n} matrix for {modes} modes",
                n = 2 * modes
            )));
        }
        let scale = mat.iter().fold(1.0f64, |a, &x| a.max(x.abs()));
        let mut worst = 0.0f64;
        for i in 0..mat.nrows() {
            for j in (i + 1)..mat.ncols() {
                worst = worst.max((mat[(i, j)] - mat[(j, i)]).abs());
            }
        }
        if worst > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric { max_asymmetry: worst });
        }
        Ok(Self { modes, mat })
    }

    /// The m-mode vacuum, `(1/2)·I`.
    pub fn vacuum(modes: usize) -> Self {
        Self {
            modes,
            mat: DMatrix::identity(2 * modes, 2 * modes) * 0.5,
        }
    }

    /// Covariance matrix of the four-mode squeezed vacuum with squeezing
    /// strength `r`: diagonal blocks `(1/2)cosh²r·I₂`, nearest-neighbour
    /// blocks `(1/4)sinh 2r·σ_z`, opposite blocks `(1/2)sinh²r·I₂`.
    pub fn fmsv(r: f64) -> Self {
        let c2 = 0.5 * libm::cosh(r) * libm::cosh(r);
        let s2 = 0.5 * libm::sinh(r) * libm::sinh(r);
        let cross = 0.25 * libm::sinh(2.0 * r);
        let mut mat = DMatrix::zeros(8, 8);
        for i in 0..4usize {
            for j in 0..4usize {
                let (d, z) = match (j + 4 - i) % 4 {
                    0 => (c2, 0.0),
                    2 => (s2, 0.0),
                    _ => (0.0, cross),
                };
                mat[(2 * i, 2 * j)] = d + z;
                mat[(2 * i + 1, 2 * j + 1)] = d - z;
            }
        }
        Self { modes: 4, mat }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    /// Partial trace: keeps the quadrature rows/columns of `modes`,
    /// preserving the given order.
    pub fn reduce(&self, modes: &[usize]) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::EmptySelection);
        }
        for (i, &m) in modes.iter().enumerate() {
            if m >= self.modes || modes[..i].contains(&m) {
                return Err(Error::InvalidModeIndex { index: m, modes: self.modes });
            }
        }
        let rows: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let mut sub = DMatrix::zeros(rows.len(), rows.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in rows.iter().enumerate() {
                sub[(a, b)] = self.mat[(i, j)];
            }
        }
        Ok(Self { modes: modes.len(), mat: sub })
    }

    /// Williamson invariants: the eigenvalues of `J·Λ` come in `±iν` pairs;
    /// returns the `ν_i`, one per mode, sorted descending.
    ///
    /// Computed from the symmetric matrix `−(Λ^½ J Λ^½)²`, whose spectrum is
    /// `{ν_i², ν_i²}`; unsymmetric Schur iteration on `J·Λ` itself can fail
    /// to converge for perfectly benign inputs.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        let eig = SymmetricEigen::new(self.mat.clone());
        let mut sqrt_mat = eig.eigenvectors.clone();
        for (c, &ev) in eig.eigenvalues.iter().enumerate() {
            let s = libm::sqrt(ev.max(0.0));
            for r in 0..sqrt_mat.nrows() {
                sqrt_mat[(r, c)] *= s;
            }
        }
        let sqrt_mat = sqrt_mat * eig.eigenvectors.transpose();
        let j = SymplecticForm::new(self.modes).matrix();
        let k = &sqrt_mat * j * &sqrt_mat;
        let mut m = -(&k * &k);
        for i in 0..m.nrows() {
            for jj in 0..i {
                let avg = 0.5 * (m[(i, jj)] + m[(jj, i)]);
                m[(i, jj)] = avg;
                m[(jj, i)] = avg;
            }
        }
        let mut ims: Vec<f64> = SymmetricEigen::new(m)
            .eigenvalues
            .iter()
            .map(|&v| libm::sqrt(v.max(0.0)))
            .collect();
        ims.sort_unstable_by(|a, b| b.total_cmp(a));
        let mut out = Vec::with_capacity(self.modes);
        for pair in ims.chunks_exact(2) {
            let mismatch = pair[0] - pair[1];
            if mismatch > PAIRING_TOL * pair[0].max(1.0) {
                return Err(Error::SymplecticPairingBroken { mismatch });
            }
            out.push(0.5 * (pair[0] + pair[1]));
        }
        Ok(out)
    }

    /// True when every symplectic eigenvalue equals 1/2 within `tol`.
    pub fn is_pure(&self, tol: f64) -> Result<bool> {
        Ok(self
            .symplectic_eigenvalues()?
            .iter()
            .all(|&nu| (nu - 0.5).abs() <= tol))
    }
}

/// All k-subsets of `0..n`, in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// GGM of a pure N-mode Gaussian state:
/// `1 − max over all m-mode reductions (m ≤ ⌊N/2⌋) of Π_i 2/(1 + 2ν_i)`.
pub fn ggm_pure_gaussian(cov: &CovarianceMatrix) -> Result<f64> {
    if cov.modes() < 3 {
        return Err(Error::InvalidArgument(
            "GGM needs at least three modes".into(),
        ));
    }
    let nus = cov.symplectic_eigenvalues()?;
    if let Some(&worst) = nus
        .iter()
        .find(|&&nu| (nu - 0.5).abs() > PURITY_GATE)
    {
        return Err(Error::ImpureState { worst_eigenvalue: worst });
    }
    let n = cov.modes();
    let mut best = f64::NEG_INFINITY;
    for m in 1..=(n / 2) {
        for subset in combinations(n, m) {
            let red = cov.reduce(&subset)?;
            let prod: f64 = red
                .symplectic_eigenvalues()?
                .iter()
                .map(|&nu| 2.0 / (1.0 + 2.0 * nu))
                .product();
            best = best.max(prod);
        }
    }
    Ok(1.0 - best)
}

/// Conditions a state on a Gaussian measurement of one mode.
///
/// For a squeezed-coherent measurement this is the Schur-complement update
/// `Λ' = A − C (σ_m/2 + B)⁻¹ Cᵀ`, with `A` the unmeasured block, `B` the
/// measured 2×2 block and `C` the cross block. The measurement covariance is
/// halved to bring it into the vacuum-1/2 convention of the state (its raw
/// form has det 1). Homodyne measurements dispatch to
/// [`condition_on_homodyne`].
pub fn condition_on_gaussian_measurement(
    cov: &CovarianceMatrix,
    mode: usize,
    meas: &GaussianMeasurement,
) -> Result<CovarianceMatrix> {
    let (squeeze, angle) = match *meas {
        GaussianMeasurement::Homodyne(q) => return condition_on_homodyne(cov, mode, q),
        GaussianMeasurement::SqueezedCoherent { squeeze, angle } => (squeeze, angle),
    };
    let (a, b, c) = partition(cov, mode)?;
    // σ_m/2 = R(φ/2) diag(e^{2r'}, e^{-2r'})/2 R(φ/2)ᵀ. Inverting σ_m/2 + B
    // in the rotated frame keeps every term of the determinant expansion
    // cancellation-free (h·s = 1/4 exactly), which matters at large r':
    // the naive det(σ_m/2 + B) loses ~e^{4r'}·ε absolutely.
    let h = 0.5 * libm::exp(2.0 * squeeze);
    let s = 0.5 * libm::exp(-2.0 * squeeze);
    if !h.is_finite() {
        return Err(Error::SingularConditioning { condition_number: f64::INFINITY });
    }
    let (sn, cn) = (libm::sin(0.5 * angle), libm::cos(0.5 * angle));
    let rot = Matrix2::new(cn, -sn, sn, cn);
    let br = rot.transpose() * b * rot;
    let (b11, b12, b22) = (br[(0, 0)], br[(0, 1)], br[(1, 1)]);
    let det = 0.25 + h * b22 + s * b11 + (b11 * b22 - b12 * b12);
    if !det.is_finite() || det <= 0.0 {
        return Err(Error::SingularConditioning {
            condition_number: (h + b11) / (s + b22).abs().max(1e-300),
        });
    }
    let inv_rotated = Matrix2::new(s + b22, -b12, -b12, h + b11) / det;
    let inv = rot * inv_rotated * rot.transpose();
    schur_update(cov.modes() - 1, &a, &c, &inv)
}

/// Conditions on an ideal homodyne readout of `quadrature` — the infinite
/// squeezing limit, realized exactly through the projector pseudo-inverse
/// `Λ' = A − C (π B π)⁺ Cᵀ`.
pub fn condition_on_homodyne(
    cov: &CovarianceMatrix,
    mode: usize,
    quadrature: Quadrature,
) -> Result<CovarianceMatrix> {
    let (a, b, c) = partition(cov, mode)?;
    // At φ = 0 the measurement state's second quadrature variance vanishes
    // as r' grows, so the X limit projects onto index 1 (and P onto 0).
    let idx = match quadrature {
        Quadrature::X => 1,
        Quadrature::P => 0,
    };
    let diag = b[(idx, idx)];
    if diag.abs() <= 1e-300 {
        return Err(Error::DegenerateHomodyne);
    }
    let mut pinv = Matrix2::zeros();
    pinv[(idx, idx)] = 1.0 / diag;
    schur_update(cov.modes() - 1, &a, &c, &pinv)
}

/// Splits `cov` into the unmeasured block `A`, the measured 2×2 block `B`,
/// and the cross block `C` (unmeasured × measured), preserving mode order.
fn partition(
    cov: &CovarianceMatrix,
    mode: usize,
) -> Result<(DMatrix<f64>, Matrix2<f64>, DMatrix<f64>)> {
    if mode >= cov.modes() {
        return Err(Error::InvalidModeIndex { index: mode, modes: cov.modes() });
    }
    let keep: Vec<usize> = (0..cov.modes())
        .filter(|&m| m != mode)
        .flat_map(|m| [2 * m, 2 * m + 1])
        .collect();
    let meas = [2 * mode, 2 * mode + 1];
    let dim = keep.len();
    let mut a = DMatrix::zeros(dim, dim);
    let mut c = DMatrix::zeros(dim, 2);
    for (p, &i) in keep.iter().enumerate() {
        for (q, &j) in keep.iter().enumerate() {
            a[(p, q)] = cov.matrix()[(i, j)];
        }
        for (q, &j) in meas.iter().enumerate() {
            c[(p, q)] = cov.matrix()[(i, j)];
        }
    }
    let b = Matrix2::new(
        cov.matrix()[(meas[0], meas[0])],
        cov.matrix()[(meas[0], meas[1])],
        cov.matrix()[(meas[1], meas[0])],
        cov.matrix()[(meas[1], meas[1])],
    );
    Ok((a, b, c))
}

fn schur_update(
    modes: usize,
    a: &DMatrix<f64>,
    c: &DMatrix<f64>,
    middle: &Matrix2<f64>,
) -> Result<CovarianceMatrix> {
    let mut out = a - c * middle * c.transpose();
    // Symmetrize away inversion round-off.
    for i in 0..out.nrows() {
        for j in (i + 1)..out.ncols() {
            let s = 0.5 * (out[(i, j)] + out[(j, i)]);
            out[(i, j)] = s;
            out[(j, i)] = s;
        }
    }
    CovarianceMatrix::new(modes, out)
}

/// Grid-plus-refinement search configuration for [`lgme_gaussian`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSearch {
    pub squeeze_max: f64,
    pub squeeze_steps: usize,
    pub angle_steps: usize,
    pub refine_rounds: usize,
    pub refine_steps: usize,
}

impl Default for GridSearch {
    fn default() -> Self {
        Self {
            squeeze_max: 10.0,
            squeeze_steps: 41,
            angle_steps: 64,
            refine_rounds: 3,
            refine_steps: 9,
        }
    }
}

/// Result of the Gaussian-measurement optimization.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianLgme {
    /// Best GGM over the searched measurement family (homodyne included).
    pub optimal_value: f64,
    /// The measurement achieving `optimal_value`.
    pub best: GaussianMeasurement,
    /// `tanh²(r/2)` — the closed-form optimum.
    pub closed_form: f64,
    /// Best value among the finite-squeezing grid points only.
    pub best_finite: f64,
}

/// Closed-form Gaussian-measurement LGME of the FMSV state: `tanh²(r/2)`.
pub fn lgme_fmsv_closed_form(r: f64) -> f64 {
    let t = libm::tanh(0.5 * r);
    t * t
}

/// Optimizes the Gaussian-measurement LGME of the FMSV state over the
/// squeezed-coherent family `(r', φ)` on mode 4, with homodyne-x and
/// homodyne-p always included as explicit candidates.
pub fn lgme_gaussian(r: f64, search: &GridSearch) -> Result<GaussianLgme> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidArgument("squeezing must be finite and >= 0".into()));
    }
    if search.squeeze_steps == 0 || search.angle_steps == 0 {
        return Err(Error::EmptySelection);
    }
    let cov = CovarianceMatrix::fmsv(r);
    let measured = 3;

    let eval = |rp: f64, phi: f64| -> Result<f64> {
        let meas = GaussianMeasurement::SqueezedCoherent { squeeze: rp, angle: phi };
        ggm_pure_gaussian(&condition_on_gaussian_measurement(&cov, measured, &meas)?)
    };

    let mut best_finite = f64::NEG_INFINITY;
    let mut best_point = (0.0f64, 0.0f64);
    let dr = if search.squeeze_steps > 1 {
        search.squeeze_max / (search.squeeze_steps - 1) as f64
    } else {
        0.0
    };
    let dphi = core::f64::consts::TAU / search.angle_steps as f64;
    for i in 0..search.squeeze_steps {
        let rp = dr * i as f64;
        for k in 0..search.angle_steps {
            let phi = dphi * k as f64;
            let g = eval(rp, phi)?;
            if g > best_finite {
                best_finite = g;
                best_point = (rp, phi);
            }
        }
    }

    let (mut hr, mut hphi) = (dr.max(1e-3), dphi);
    for _ in 0..search.refine_rounds {
        let center = best_point;
        let steps = search.refine_steps.max(2);
        for i in 0..steps {
            let rp = (center.0 - hr + 2.0 * hr * i as f64 / (steps - 1) as f64)
                .clamp(0.0, search.squeeze_max);
            for k in 0..steps {
                let phi = center.1 - hphi + 2.0 * hphi * k as f64 / (steps - 1) as f64;
                let g = eval(rp, phi)?;
                if g > best_finite {
                    best_finite = g;
                    best_point = (rp, phi);
                }
            }
        }
        hr *= 0.25;
        hphi *= 0.25;
    }

    let mut optimal_value = best_finite;
    let mut best = GaussianMeasurement::SqueezedCoherent {
        squeeze: best_point.0,
        angle: best_point.1,
    };
    for q in [Quadrature::X, Quadrature::P] {
        let g = ggm_pure_gaussian(&condition_on_homodyne(&cov, measured, q)?)?;
        if g > optimal_value {
            optimal_value = g;
            best = GaussianMeasurement::Homodyne(q);
        }
    }

    Ok(GaussianLgme {
        optimal_value,
        best,
        closed_form: lgme_fmsv_closed_form(r),
        best_finite,
    })
}
