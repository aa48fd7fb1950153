//! Sweep configuration, point evaluation, and the bounded worker pool.
//!
//! Each figure runner expands its parameter grid into an ordered list of
//! points, evaluates them on the pool (capped by `LGME_THREADS`), and
//! collects rows back in input order so the emitted CSV is deterministic.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use lgme_core::entanglement::ggm_pure_fock;
use lgme_core::fock::{build_fmsv_fock, degaussified_fmsv, FockState, PhotonOpKind};
use lgme_core::gaussian::{lgme_gaussian, GridSearch};
use lgme_core::measurement::lgme_photon_counting;
use lgme_core::Result;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub experiment: &'static str,
    pub lambda_grid: Vec<f64>,
    /// Measured mode, zero-based.
    pub measured_mode: usize,
    pub epsilon: f64,
    pub residual_cap: f64,
}

impl SweepConfig {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.lambda_grid.is_empty() {
            return Err("lambda grid must be nonempty".into());
        }
        for &l in &self.lambda_grid {
            if !(0.0..1.0).contains(&l) {
                return Err(format!("lambda {l} outside [0, 1)"));
            }
        }
        if self.measured_mode >= 4 {
            return Err("measured mode must be 1..=4".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err("epsilon must lie in (0, 1)".into());
        }
        if !(self.residual_cap > 0.0 && self.residual_cap < 1.0) {
            return Err("residual cap must lie in (0, 1)".into());
        }
        Ok(())
    }
}

/// One emitted result row. `wall_time` feeds the progress lines only; it is
/// never written to the CSV.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub experiment: &'static str,
    pub lambda: f64,
    pub kind: &'static str,
    pub photons: [u32; 4],
    pub lgme_lower: f64,
    pub lgme_upper: f64,
    pub gaussian_opt: Option<f64>,
    pub gaussian_closed: Option<f64>,
    pub residual: f64,
    pub n_max: u32,
    pub flagged: bool,
    pub wall_time: f64,
}

pub fn kind_name(kind: Option<PhotonOpKind>) -> &'static str {
    match kind {
        None => "none",
        Some(PhotonOpKind::Add) => "add",
        Some(PhotonOpKind::Subtract) => "sub",
    }
}

pub fn thread_count() -> usize {
    if let Ok(v) = std::env::var("LGME_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
        eprintln!("warning: ignoring invalid LGME_THREADS={v:?}");
    }
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Evaluates `n` points on a bounded pool; rows come back in input order.
pub fn run_points<F>(label: &str, n: usize, f: F) -> Result<Vec<SweepRow>>
where
    F: Fn(usize) -> Result<SweepRow> + Sync,
{
    let workers = thread_count().min(n.max(1));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, Result<SweepRow>)>> = Mutex::new(Vec::with_capacity(n));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let t0 = Instant::now();
                let row = f(i).map(|mut r| {
                    r.wall_time = t0.elapsed().as_secs_f64();
                    println!(
                        "[{label}] point {}/{} λ={} done in {:.2}s",
                        i + 1,
                        n,
                        r.lambda,
                        r.wall_time
                    );
                    r
                });
                results.lock().unwrap().push((i, row));
            });
        }
    });
    let mut v = results.into_inner().unwrap();
    v.sort_by_key(|(i, _)| *i);
    v.into_iter().map(|(_, r)| r).collect()
}

pub fn build_parent(
    lambda: f64,
    kind: Option<PhotonOpKind>,
    m: [u32; 4],
    epsilon: f64,
) -> Result<FockState> {
    let r = lambda.atanh();
    match kind {
        None => build_fmsv_fock(r, epsilon),
        Some(k) => degaussified_fmsv(r, k, m, epsilon),
    }
}

/// Photon-counting LGME row for one (λ, operation, counts) point.
pub fn counting_point(
    cfg: &SweepConfig,
    lambda: f64,
    kind: Option<PhotonOpKind>,
    m: [u32; 4],
    with_gaussian: bool,
) -> Result<SweepRow> {
    let parent = build_parent(lambda, kind, m, cfg.epsilon)?;
    let res = lgme_photon_counting(&parent, cfg.measured_mode, cfg.residual_cap, ggm_pure_fock)?;
    let (gaussian_opt, gaussian_closed) = if with_gaussian {
        let r = lambda.atanh();
        let g = lgme_gaussian(r, &GridSearch::default())?;
        (Some(g.optimal_value), Some(g.closed_form))
    } else {
        (None, None)
    };
    Ok(SweepRow {
        experiment: cfg.experiment,
        lambda,
        kind: kind_name(kind),
        photons: m,
        lgme_lower: res.lower,
        lgme_upper: res.upper,
        gaussian_opt,
        gaussian_closed,
        residual: res.residual,
        n_max: parent.n_max(),
        flagged: res.residual > cfg.residual_cap,
        wall_time: 0.0,
    })
}

pub type Series = Vec<(String, Vec<(f64, f64)>)>;

fn series_from<F: Fn(&SweepRow) -> (String, f64)>(rows: &[SweepRow], key_x: F) -> Series {
    let mut out: Series = Vec::new();
    for row in rows {
        let (label, x) = key_x(row);
        match out.iter_mut().find(|(l, _)| *l == label) {
            Some((_, pts)) => pts.push((x, row.lgme_lower)),
            None => out.push((label, vec![(x, row.lgme_lower)])),
        }
    }
    out
}

/// Gaussian vs photon-counting localization of the plain FMSV over λ.
pub fn run_fig1(cfg: &SweepConfig) -> Result<(Vec<SweepRow>, Series)> {
    let grid = cfg.lambda_grid.clone();
    let rows = run_points("fig1", grid.len(), |i| {
        counting_point(cfg, grid[i], None, [0; 4], true)
    })?;
    let mut series = series_from(&rows, |r| ("photon counting".into(), r.lambda));
    let gauss: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.lambda, r.gaussian_closed.unwrap_or(0.0)))
        .collect();
    series.push(("gaussian (closed form)".into(), gauss));
    Ok((rows, series))
}

/// Single-mode photon operations: add/sub on each requested mode, m photons.
pub fn run_fig2(
    cfg: &SweepConfig,
    modes: &[usize],
    max_photons: u32,
) -> Result<(Vec<SweepRow>, Series)> {
    let mut points = Vec::new();
    for &lambda in &cfg.lambda_grid {
        for kind in [PhotonOpKind::Add, PhotonOpKind::Subtract] {
            for &mode in modes {
                for m in 0..=max_photons {
                    let mut spec = [0u32; 4];
                    spec[mode] = m;
                    points.push((lambda, kind, spec, mode, m));
                }
            }
        }
    }
    let rows = run_points("fig2", points.len(), |i| {
        let (lambda, kind, spec, _, _) = points[i];
        counting_point(cfg, lambda, Some(kind), spec, false)
    })?;
    let series = points
        .iter()
        .zip(rows.iter())
        .fold(Series::new(), |mut acc, (p, r)| {
            let label = format!("{} mode {}", r.kind, p.3 + 1);
            let pt = (p.4 as f64, r.lgme_lower);
            match acc.iter_mut().find(|(l, _)| *l == label) {
                Some((_, pts)) => pts.push(pt),
                None => acc.push((label, vec![pt])),
            }
            acc
        });
    Ok((rows, series))
}

/// Fixed-total sweeps: m_i + m_j = total along a mode pair.
pub fn run_fig3(
    cfg: &SweepConfig,
    pairs: &[(usize, usize)],
    total: u32,
) -> Result<(Vec<SweepRow>, Series)> {
    let mut points = Vec::new();
    for &lambda in &cfg.lambda_grid {
        for kind in [PhotonOpKind::Add, PhotonOpKind::Subtract] {
            for &(i, j) in pairs {
                for mi in 0..=total {
                    let mut spec = [0u32; 4];
                    spec[i] = mi;
                    spec[j] = total - mi;
                    points.push((lambda, kind, spec, (i, j), mi));
                }
            }
        }
    }
    let rows = run_points("fig3", points.len(), |i| {
        let (lambda, kind, spec, _, _) = points[i];
        counting_point(cfg, lambda, Some(kind), spec, false)
    })?;
    let series = points
        .iter()
        .zip(rows.iter())
        .fold(Series::new(), |mut acc, (p, r)| {
            let label = format!("{} modes ({},{})", r.kind, p.3 .0 + 1, p.3 .1 + 1);
            let pt = (p.4 as f64, r.lgme_lower);
            match acc.iter_mut().find(|(l, _)| *l == label) {
                Some((_, pts)) => pts.push(pt),
                None => acc.push((label, vec![pt])),
            }
            acc
        });
    Ok((rows, series))
}

/// Equal-count sweeps: m_i = m_j = m along a mode pair.
pub fn run_fig4(
    cfg: &SweepConfig,
    pairs: &[(usize, usize)],
    max_photons: u32,
) -> Result<(Vec<SweepRow>, Series)> {
    let mut points = Vec::new();
    for &lambda in &cfg.lambda_grid {
        for kind in [PhotonOpKind::Add, PhotonOpKind::Subtract] {
            for &(i, j) in pairs {
                for m in 0..=max_photons {
                    let mut spec = [0u32; 4];
                    spec[i] = m;
                    spec[j] = m;
                    points.push((lambda, kind, spec, (i, j), m));
                }
            }
        }
    }
    let rows = run_points("fig4", points.len(), |i| {
        let (lambda, kind, spec, _, _) = points[i];
        counting_point(cfg, lambda, Some(kind), spec, false)
    })?;
    let series = points
        .iter()
        .zip(rows.iter())
        .fold(Series::new(), |mut acc, (p, r)| {
            let label = format!("{} modes ({},{})", r.kind, p.3 .0 + 1, p.3 .1 + 1);
            let pt = (p.4 as f64, r.lgme_lower);
            match acc.iter_mut().find(|(l, _)| *l == label) {
                Some((_, pts)) => pts.push(pt),
                None => acc.push((label, vec![pt])),
            }
            acc
        });
    Ok((rows, series))
}
