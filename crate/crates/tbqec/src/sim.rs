//! Depolarizing-noise Monte-Carlo estimation of logical error rates,
//! heuristic curve fitting, pseudo-threshold extraction, and the rotated
//! surface-code baseline.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::code::CssCode;
use crate::decoder::{oracle_min_weight_decode, BpOsdDecoder, DecoderConfig};
use crate::distance::derive_rng;
use crate::gf2::{BinaryMatrix, BinaryVector, Echelon};

/// Shots per scheduling batch. Stopping decisions happen on batch
/// boundaries only, so failure counts do not depend on the worker count.
const BATCH: u64 = 10_000;

/// A Pauli error in symplectic form; Y on qubit q sets bit q in both parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliError {
    pub x_part: BinaryVector,
    pub z_part: BinaryVector,
}

impl PauliError {
    pub fn identity(n: usize) -> Self {
        Self {
            x_part: BinaryVector::zeros(n),
            z_part: BinaryVector::zeros(n),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x_part.is_zero() && self.z_part.is_zero()
    }
}

/// Each qubit independently: no error with probability 1-p; X, Y, Z each
/// with probability p/3.
pub fn sample_depolarizing(n: usize, p: f64, rng: &mut impl Rng) -> PauliError {
    assert!((0.0..=1.0).contains(&p));
    let mut e = PauliError::identity(n);
    for q in 0..n {
        let u: f64 = rng.gen();
        if u < p {
            // Subdivide the hit uniformly over the three Pauli kinds.
            let r = u / p * 3.0;
            if r < 1.0 {
                e.x_part.set(q, true);
            } else if r < 2.0 {
                e.z_part.set(q, true);
            } else {
                e.x_part.set(q, true);
                e.z_part.set(q, true);
            }
        }
    }
    e
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "decoder")]
pub enum DecoderChoice {
    BpOsd {
        #[serde(flatten)]
        config: DecoderConfig,
    },
    Oracle {
        w_max: usize,
    },
}

/// Per-worker decoder state.
pub struct DecoderScratch {
    z_side: Option<BpOsdDecoder>,
    x_side: Option<BpOsdDecoder>,
}

/// Monte-Carlo engine for one code and decoder choice. The row-space
/// echelon caches are shared read-only across workers.
pub struct Simulator {
    css: CssCode,
    choice: DecoderChoice,
    rs_x: Echelon,
    rs_z: Echelon,
}

impl Simulator {
    pub fn new(css: &CssCode, choice: DecoderChoice) -> Self {
        Self {
            css: css.clone(),
            choice,
            rs_x: Echelon::from_matrix(&css.h_x),
            rs_z: Echelon::from_matrix(&css.h_z),
        }
    }

    pub fn css(&self) -> &CssCode {
        &self.css
    }

    pub fn scratch(&self) -> DecoderScratch {
        match self.choice {
            DecoderChoice::BpOsd { config } => DecoderScratch {
                z_side: Some(BpOsdDecoder::new(&self.css.h_x, config)),
                x_side: Some(BpOsdDecoder::new(&self.css.h_z, config)),
            },
            DecoderChoice::Oracle { .. } => DecoderScratch {
                z_side: None,
                x_side: None,
            },
        }
    }

    fn decode_side(
        &self,
        scratch: &mut DecoderScratch,
        z_side: bool,
        syndrome: &BinaryVector,
        prior: f64,
    ) -> Option<BinaryVector> {
        let h = if z_side { &self.css.h_x } else { &self.css.h_z };
        if syndrome.is_zero() {
            return Some(BinaryVector::zeros(h.cols()));
        }
        match self.choice {
            DecoderChoice::BpOsd { .. } => {
                let dec = if z_side {
                    scratch.z_side.as_mut()
                } else {
                    scratch.x_side.as_mut()
                }
                .expect("scratch built for BP-OSD");
                let priors = vec![prior.clamp(1e-12, 1.0 - 1e-12); h.cols()];
                Some(dec.decode(syndrome, &priors).estimate)
            }
            DecoderChoice::Oracle { w_max } => oracle_min_weight_decode(h, syndrome, w_max),
        }
    }

    /// Decodes one injected error and reports failure. Both sides run
    /// independently with per-bit prior 2p/3 (the probability of Z-or-Y,
    /// respectively X-or-Y). Failure means some residual is not a
    /// stabilizer: r_z outside rs(H_Z) or r_x outside rs(H_X).
    pub fn decode_error(&self, scratch: &mut DecoderScratch, p: f64, error: &PauliError) -> bool {
        let prior = 2.0 * p / 3.0;
        let s_x = self.css.h_x.mul_vector(&error.z_part);
        let s_z = self.css.h_z.mul_vector(&error.x_part);
        let Some(est_z) = self.decode_side(scratch, true, &s_x, prior) else {
            return true;
        };
        let Some(est_x) = self.decode_side(scratch, false, &s_z, prior) else {
            return true;
        };
        let mut r_z = est_z;
        r_z.xor_assign(&error.z_part);
        if !self.rs_z.contains(&r_z) {
            return true;
        }
        let mut r_x = est_x;
        r_x.xor_assign(&error.x_part);
        !self.rs_x.contains(&r_x)
    }

    /// One Monte-Carlo shot: sample, decode, classify.
    pub fn run_shot(&self, scratch: &mut DecoderScratch, p: f64, rng: &mut impl Rng) -> bool {
        let error = sample_depolarizing(self.css.n, p, rng);
        if error.is_identity() {
            return false;
        }
        self.decode_error(scratch, p, &error)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct StopRule {
    pub max_shots: u64,
    pub target_failures: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            max_shots: 10_000_000,
            target_failures: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SimStats {
    pub p: f64,
    pub shots: u64,
    pub failures: u64,
    pub p_l: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

/// 95% Wilson score interval; correct coverage even with few failures.
pub fn wilson_interval(failures: u64, shots: u64) -> (f64, f64) {
    if shots == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = shots as f64;
    let p = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // Containment of the point estimate can be lost to rounding at the
    // boundaries p = 0 and p = 1; restore it explicitly.
    (
        (center - half).clamp(0.0, p),
        (center + half).clamp(p, 1.0),
    )
}

/// Runs shots per point until the failure target or the shot budget is hit.
/// RNG streams are derived per (seed, point index, shot index), so the
/// counts are bitwise independent of the worker count.
pub fn monte_carlo(
    css: &CssCode,
    choice: DecoderChoice,
    p_list: &[f64],
    stop: StopRule,
    seed: u64,
) -> Vec<SimStats> {
    assert!(!p_list.is_empty());
    let sim = Simulator::new(css, choice);
    p_list
        .iter()
        .enumerate()
        .map(|(pi, &p)| {
            let mut shots = 0u64;
            let mut failures = 0u64;
            while shots < stop.max_shots && failures < stop.target_failures {
                let batch = BATCH.min(stop.max_shots - shots);
                let batch_failures: u64 = (shots..shots + batch)
                    .into_par_iter()
                    .map_init(
                        || sim.scratch(),
                        |scratch, shot| {
                            let mut rng = derive_rng(seed, pi as u64, shot);
                            u64::from(sim.run_shot(scratch, p, &mut rng))
                        },
                    )
                    .sum();
                shots += batch;
                failures += batch_failures;
            }
            let (ci_low, ci_high) = wilson_interval(failures, shots);
            SimStats {
                p,
                shots,
                failures,
                p_l: failures as f64 / shots as f64,
                ci_low,
                ci_high,
                seed,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitParams {
    pub d_fit: f64,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl FitParams {
    /// The fitted model p_L(p) = p^(d_fit/2) exp(c0 + c1 p + c2 p^2).
    pub fn evaluate(&self, p: f64) -> f64 {
        (self.d_fit / 2.0 * p.ln() + self.c0 + self.c1 * p + self.c2 * p * p).exp()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("need at least 4 points with p_l > 0, got {0}")]
    TooFewPoints(usize),
    #[error("singular design matrix")]
    Singular,
    #[error("no break-even crossing in (1e-6, 0.5)")]
    NoCrossing,
}

/// Least squares for ln p_l = (d_fit/2) ln p + c0 + c1 p + c2 p^2.
/// The model is linear in its four parameters, so the normal equations give
/// the exact optimum.
pub fn fit_curve(points: &[(f64, f64)]) -> Result<FitParams, FitError> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(p, pl)| p > 0.0 && pl > 0.0)
        .collect();
    if usable.len() < 4 {
        return Err(FitError::TooFewPoints(usable.len()));
    }
    // Normal equations over the basis [ln p, 1, p, p^2].
    let mut ata = [[0.0f64; 4]; 4];
    let mut aty = [0.0f64; 4];
    for &(p, pl) in &usable {
        let row = [p.ln(), 1.0, p, p * p];
        let y = pl.ln();
        for i in 0..4 {
            for j in 0..4 {
                ata[i][j] += row[i] * row[j];
            }
            aty[i] += row[i] * y;
        }
    }
    let beta = solve4(ata, aty).ok_or(FitError::Singular)?;
    Ok(FitParams {
        d_fit: 2.0 * beta[0],
        c0: beta[1],
        c1: beta[2],
        c2: beta[3],
    })
}

fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..4 {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..4 {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = [0.0; 4];
    for i in 0..4 {
        x[i] = b[i] / a[i][i];
    }
    Some(x)
}

/// Break-even failure probability of k unencoded qubits.
pub fn breakeven(p: f64, k: usize) -> f64 {
    1.0 - (1.0 - p).powi(k as i32)
}

/// Pseudo-threshold: the crossing of the fitted model with the break-even
/// curve 1 - (1-p)^k, found by scan plus bisection on (1e-6, 0.5).
///
/// The published thresholds for these codes satisfy p_L(p0) = p0, which is
/// the k = 1 break-even (one unencoded qubit); pass the code's k instead to
/// break even against k idle qubits.
pub fn pseudo_threshold(fit: &FitParams, k: usize) -> Result<f64, FitError> {
    let f = |p: f64| fit.evaluate(p) - breakeven(p, k);
    let (lo, hi) = (1e-6f64, 0.5f64);
    let steps = 4000;
    let at = |i: usize| lo * (hi / lo).powf(i as f64 / steps as f64);
    let mut bracket = None;
    let mut prev = f(at(0));
    for i in 1..=steps {
        let cur = f(at(i));
        if prev <= 0.0 && cur > 0.0 || prev >= 0.0 && cur < 0.0 {
            bracket = Some((at(i - 1), at(i)));
            break;
        }
        prev = cur;
    }
    let (mut a, mut b) = bracket.ok_or(FitError::NoCrossing)?;
    let fa = f(a);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if f(mid).signum() == fa.signum() {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Combined logical error rate of k independent surface-code patches.
pub fn surface_code_combine(p_l_single: f64, k: usize) -> f64 {
    1.0 - (1.0 - p_l_single).powi(k as i32)
}

/// Rotated planar surface code with parameters [[d^2, 1, d]], as the
/// decoder baseline. Stabilizer cells live on a (d+1) x (d+1) grid of
/// plaquette positions over the d x d qubit array; interior cells have
/// weight 4 and alternate X/Z in checkerboard fashion, boundary cells keep
/// the weight-2 checks whose type matches their side.
pub fn surface_code_baseline(d: usize) -> CssCode {
    assert!(d >= 2, "rotated surface code needs d >= 2");
    let qubit = |r: usize, c: usize| r * d + c;
    let mut x_rows: Vec<BinaryVector> = Vec::new();
    let mut z_rows: Vec<BinaryVector> = Vec::new();
    for r in 0..=d {
        for c in 0..=d {
            let mut cell = Vec::new();
            for (dr, dc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let (qr, qc) = (r + dr, c + dc);
                if (1..=d).contains(&qr) && (1..=d).contains(&qc) {
                    cell.push(qubit(qr - 1, qc - 1));
                }
            }
            let is_z = (r + c) % 2 == 0;
            let keep = match cell.len() {
                4 => true,
                2 => {
                    if r == 0 || r == d {
                        !is_z // top and bottom edges carry X checks
                    } else {
                        is_z // left and right edges carry Z checks
                    }
                }
                _ => false,
            };
            if keep {
                let row = BinaryVector::from_support(d * d, &cell);
                if is_z {
                    z_rows.push(row);
                } else {
                    x_rows.push(row);
                }
            }
        }
    }
    let h_x = BinaryMatrix::from_rows(&x_rows);
    let h_z = BinaryMatrix::from_rows(&z_rows);
    let css = CssCode::from_checks(h_x, h_z);
    assert_eq!(css.n, d * d);
    assert_eq!(css.k, 1);
    css
}
