//! Code distance: exact enumeration over kernel cosets and a randomized
//! information-set upper bound for codes too large to enumerate.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::code::CssCode;
use crate::gf2::{BinaryMatrix, BinaryVector, Echelon};

pub const DEFAULT_DIM_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    Exact,
    UpperBound,
}

/// Which logical side realizes the minimum: Z means ker(H_X) \ rs(H_Z),
/// X means ker(H_Z) \ rs(H_X).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    X,
    Z,
    Both,
}

#[derive(Debug, Clone)]
pub struct DistanceResult {
    pub value: usize,
    pub certainty: Certainty,
    pub witness: BinaryVector,
    pub side: Side,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DistanceError {
    #[error("code has no logical operators (k = 0)")]
    NoLogicals,
    #[error("kernel dimension {dim} exceeds enumeration cap {cap}")]
    CapExceeded { dim: usize, cap: usize },
}

/// A connected piece of a CSS code: the data columns it owns and the induced
/// check matrices. The distance of a direct-sum code is the minimum over
/// its pieces, which keeps enumeration feasible for disconnected codes.
struct SubCode {
    cols: Vec<usize>,
    h_x: BinaryMatrix,
    h_z: BinaryMatrix,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn css_components(css: &CssCode) -> Vec<SubCode> {
    let n = css.n;
    let rx = css.h_x.rows();
    let rz = css.h_z.rows();
    let mut parent: Vec<usize> = (0..n + rx + rz).collect();
    let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    };
    for r in 0..rx {
        for c in css.h_x.row(r).support() {
            union(&mut parent, n + r, c);
        }
    }
    for r in 0..rz {
        for c in css.h_z.row(r).support() {
            union(&mut parent, n + rx + r, c);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for c in 0..n {
        let root = find(&mut parent, c);
        groups.entry(root).or_default().push(c);
    }
    groups
        .into_values()
        .map(|cols| {
            let xrows: Vec<usize> = (0..rx)
                .filter(|&r| cols.iter().any(|&c| css.h_x.get(r, c)))
                .collect();
            let zrows: Vec<usize> = (0..rz)
                .filter(|&r| cols.iter().any(|&c| css.h_z.get(r, c)))
                .collect();
            SubCode {
                h_x: css.h_x.submatrix(&xrows, &cols),
                h_z: css.h_z.submatrix(&zrows, &cols),
                cols,
            }
        })
        .collect()
}

/// Minimum weight over the nonzero kernel-coefficient space, skipping
/// row-space members. Gray-code iteration: each candidate differs from the
/// previous by one basis XOR. Parallel over coefficient prefixes; the result
/// (min weight, lexicographically smallest witness) is independent of the
/// worker count.
fn min_logical_weight(kernel: &BinaryMatrix, rs: &Echelon) -> Option<(usize, BinaryVector)> {
    let kd = kernel.rows();
    if kd == 0 {
        return None;
    }
    let basis: Vec<BinaryVector> = (0..kd).map(|i| kernel.row(i)).collect();
    let suffix_bits = kd.min(18);
    let prefix_bits = kd - suffix_bits;

    fn consider(
        v: &BinaryVector,
        rs: &Echelon,
        local: &mut Option<(usize, BinaryVector)>,
    ) {
        let w = v.weight();
        if local.as_ref().is_none_or(|(bw, _)| w < *bw) && !rs.contains(v) {
            *local = Some((w, v.clone()));
        }
    }

    (0u64..1 << prefix_bits)
        .into_par_iter()
        .map(|prefix| {
            let mut v = BinaryVector::zeros(kernel.cols());
            for b in 0..prefix_bits {
                if prefix >> b & 1 == 1 {
                    v.xor_assign(&basis[suffix_bits + b]);
                }
            }
            let mut local: Option<(usize, BinaryVector)> = None;
            if prefix != 0 {
                consider(&v, rs, &mut local);
            }
            for s in 1u64..1 << suffix_bits {
                let flip = s.trailing_zeros() as usize;
                v.xor_assign(&basis[flip]);
                consider(&v, rs, &mut local);
            }
            local
        })
        .reduce(|| None, min_candidate)
}

fn min_candidate(
    a: Option<(usize, BinaryVector)>,
    b: Option<(usize, BinaryVector)>,
) -> Option<(usize, BinaryVector)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if (y.0, y.1.words()) < (x.0, x.1.words()) {
            y
        } else {
            x
        }),
    }
}

fn embed(local: &BinaryVector, cols: &[usize], n: usize) -> BinaryVector {
    let mut out = BinaryVector::zeros(n);
    for i in local.support() {
        out.set(cols[i], true);
    }
    out
}

fn combine_sides(
    z: Option<(usize, BinaryVector)>,
    x: Option<(usize, BinaryVector)>,
    certainty: Certainty,
) -> Result<DistanceResult, DistanceError> {
    match (z, x) {
        (None, None) => Err(DistanceError::NoLogicals),
        (Some((w, v)), None) => Ok(DistanceResult {
            value: w,
            certainty,
            witness: v,
            side: Side::Z,
        }),
        (None, Some((w, v))) => Ok(DistanceResult {
            value: w,
            certainty,
            witness: v,
            side: Side::X,
        }),
        (Some((wz, vz)), Some((wx, vx))) => {
            let (value, witness, side) = if wz < wx {
                (wz, vz, Side::Z)
            } else if wx < wz {
                (wx, vx, Side::X)
            } else {
                (wz, vz, Side::Both)
            };
            Ok(DistanceResult {
                value,
                certainty,
                witness,
                side,
            })
        }
    }
}

/// Exact distance by exhaustive kernel enumeration, per connected component
/// and per side. The paper's formula is the Z side,
/// min{|v| : v in ker(H_X) \ rs(H_Z)}; both sides are enumerated and the
/// minimum reported.
pub fn exact_distance(css: &CssCode, dim_cap: usize) -> Result<DistanceResult, DistanceError> {
    if css.k == 0 {
        return Err(DistanceError::NoLogicals);
    }
    struct Prepared {
        cols: Vec<usize>,
        kernel: BinaryMatrix,
        rs: Echelon,
        side: Side,
    }
    let mut work = Vec::new();
    for comp in css_components(css) {
        for (h_ker, h_rs, side) in [
            (&comp.h_x, &comp.h_z, Side::Z),
            (&comp.h_z, &comp.h_x, Side::X),
        ] {
            let kernel = h_ker.kernel_basis();
            let rs = Echelon::from_matrix(h_rs);
            if kernel.rows() == rs.rank() {
                continue; // this side of this component has no logicals
            }
            if kernel.rows() > dim_cap {
                return Err(DistanceError::CapExceeded {
                    dim: kernel.rows(),
                    cap: dim_cap,
                });
            }
            work.push(Prepared {
                cols: comp.cols.clone(),
                kernel,
                rs,
                side,
            });
        }
    }
    let mut best_z: Option<(usize, BinaryVector)> = None;
    let mut best_x: Option<(usize, BinaryVector)> = None;
    for w in &work {
        if let Some((wt, local)) = min_logical_weight(&w.kernel, &w.rs) {
            let global = embed(&local, &w.cols, css.n);
            let slot = if w.side == Side::Z { &mut best_z } else { &mut best_x };
            if slot.as_ref().is_none_or(|(bw, _)| wt < *bw) {
                *slot = Some((wt, global));
            }
        }
    }
    combine_sides(best_z, best_x, Certainty::Exact)
}

/// Counter-based stream: every (seed, stream, index) triple maps to an
/// independent generator, so parallel consumers stay reproducible.
pub(crate) fn derive_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    let mut key = [0u8; 32];
    let mut state = splitmix(seed).wrapping_add(splitmix(stream.wrapping_mul(0x51_7c_c1_b7_27_22_0a_95)))
        ^ splitmix(index.wrapping_add(0xd1b5_4a32_d192_ed03));
    for chunk in key.chunks_mut(8) {
        state = splitmix(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// One information-set trial: re-eliminate the kernel basis with a random
/// column priority and keep the lightest resulting row outside the row space.
fn isd_trial(
    basis: &[BinaryVector],
    rs: &Echelon,
    rng: &mut ChaCha8Rng,
    n: usize,
) -> Option<(usize, BinaryVector)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut rows: Vec<BinaryVector> = basis.to_vec();
    let mut done = 0usize;
    for &col in &order {
        let Some(pivot) = (done..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(done, pivot);
        let pivot_row = rows[done].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != done && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        done += 1;
        if done == rows.len() {
            break;
        }
    }
    let mut best: Option<(usize, BinaryVector)> = None;
    for row in &rows {
        let w = row.weight();
        if best.as_ref().is_none_or(|(bw, _)| w < *bw) && !rs.contains(row) {
            best = Some((w, row.clone()));
        }
    }
    best
}

/// Randomized distance upper bound via information-set search over both
/// sides. Deterministic for a fixed seed regardless of worker count; with
/// zero trials it returns the best kernel-basis row outside the row space.
pub fn distance_upper_bound(
    css: &CssCode,
    trials: usize,
    seed: u64,
) -> Result<DistanceResult, DistanceError> {
    if css.k == 0 {
        return Err(DistanceError::NoLogicals);
    }
    let mut sides = Vec::new();
    for (h_ker, h_rs, stream) in [(&css.h_x, &css.h_z, 0u64), (&css.h_z, &css.h_x, 1u64)] {
        let kernel = h_ker.kernel_basis();
        let rs = Echelon::from_matrix(h_rs);
        let basis: Vec<BinaryVector> = (0..kernel.rows()).map(|i| kernel.row(i)).collect();
        // k > 0 guarantees at least one basis row lies outside the row space,
        // which seeds the search before any randomized trial runs.
        let mut best: Option<(usize, BinaryVector)> = None;
        for row in &basis {
            let w = row.weight();
            if best.as_ref().is_none_or(|(bw, _)| w < *bw) && !rs.contains(row) {
                best = Some((w, row.clone()));
            }
        }
        let trial_best = (0..trials as u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = derive_rng(seed, stream, t);
                isd_trial(&basis, &rs, &mut rng, css.n)
            })
            .reduce(|| None, min_candidate);
        sides.push(min_candidate(best, trial_best));
    }
    let x = sides.pop().unwrap();
    let z = sides.pop().unwrap();
    combine_sides(z, x, Certainty::UpperBound)
}

/// Checks the witness contract: in the kernel of the checking side, outside
/// the opposite row space, and of the stated weight.
pub fn verify_witness(css: &CssCode, result: &DistanceResult) -> bool {
    let ok_weight = result.witness.weight() == result.value;
    let z_ok = || {
        css.h_x.mul_vector(&result.witness).is_zero()
            && !Echelon::from_matrix(&css.h_z).contains(&result.witness)
    };
    let x_ok = || {
        css.h_z.mul_vector(&result.witness).is_zero()
            && !Echelon::from_matrix(&css.h_x).contains(&result.witness)
    };
    ok_weight
        && match result.side {
            Side::Z => z_ok(),
            Side::X => x_ok(),
            Side::Both => z_ok() || x_ok(),
        }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_code, CodeSpec};

    fn code(spec: &str) -> crate::code::TbCode {
        build_code(&CodeSpec::parse(spec).unwrap()).unwrap()
    }

    #[test]
    fn weight5_code_distance_is_5() {
        let c = code("l=3 m=5 A=x+z^4 B=x+y^2+z^2");
        let d = exact_distance(&c.css, 24).unwrap();
        assert_eq!(d.value, 5);
        assert_eq!(d.certainty, Certainty::Exact);
        assert!(verify_witness(&c.css, &d));
    }

    #[test]
    fn weight6_30_6_4_distance_is_4() {
        let c = code("l=5 m=3 A=x^4+z^3 B=x^4+x+z^4+y");
        let d = exact_distance(&c.css, 24).unwrap();
        assert_eq!(d.value, 4);
        assert!(verify_witness(&c.css, &d));
    }

    #[test]
    fn disconnected_112_code_distance_via_components() {
        // Whole-code kernel dimension is 60; its four components have
        // dimension 15 each, so enumeration is only feasible per component.
        let c = code("l=7 m=8 A=z^2+z^6 B=x+x^6");
        let comps = css_components(&c.css);
        assert_eq!(comps.len(), 4);
        for comp in &comps {
            assert_eq!(comp.cols.len(), 28);
            let kc = 28 - comp.h_x.rank() - comp.h_z.rank();
            assert_eq!(kc, 2);
        }
        let d = exact_distance(&c.css, 24).unwrap();
        assert_eq!(d.value, 5);
        assert!(verify_witness(&c.css, &d));
    }

    #[test]
    fn cap_exceeded_reported() {
        let c = code("l=3 m=5 A=x+z^4 B=x+y^2+z^2");
        assert!(matches!(
            exact_distance(&c.css, 10),
            Err(DistanceError::CapExceeded { dim: 17, cap: 10 })
        ));
    }

    #[test]
    fn k_zero_has_no_distance() {
        let c = code("l=1 m=1 A=1 B=1");
        assert!(matches!(
            exact_distance(&c.css, 24),
            Err(DistanceError::NoLogicals)
        ));
        assert!(matches!(
            distance_upper_bound(&c.css, 10, 1),
            Err(DistanceError::NoLogicals)
        ));
    }

    #[test]
    fn upper_bound_matches_exact_on_weight5_code() {
        let c = code("l=3 m=5 A=x+z^4 B=x+y^2+z^2");
        let ub = distance_upper_bound(&c.css, 1000, 7).unwrap();
        assert_eq!(ub.value, 5);
        assert_eq!(ub.certainty, Certainty::UpperBound);
        assert!(verify_witness(&c.css, &ub));
        let exact = exact_distance(&c.css, 24).unwrap();
        assert!(exact.value <= ub.value);
    }

    #[test]
    fn zero_trials_returns_basis_initialization() {
        let c = code("l=3 m=5 A=x+z^4 B=x+y^2+z^2");
        let ub = distance_upper_bound(&c.css, 0, 7).unwrap();
        assert!(ub.value >= 5);
        assert!(verify_witness(&c.css, &ub));
    }

    #[test]
    fn upper_bound_deterministic_across_worker_counts() {
        let c = code("l=4 m=5 A=x^2+y B=y^4+y^2+x^3+x");
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let r1 = pool1.install(|| distance_upper_bound(&c.css, 200, 42).unwrap());
        let r4 = pool4.install(|| distance_upper_bound(&c.css, 200, 42).unwrap());
        assert_eq!(r1.value, r4.value);
        assert_eq!(r1.witness, r4.witness);
    }

    #[test]
    fn exact_distance_deterministic_across_worker_counts() {
        let c = code("l=5 m=3 A=x^4+z^3 B=x^4+x+z^4+y");
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let r1 = pool1.install(|| exact_distance(&c.css, 24).unwrap());
        let r4 = pool4.install(|| exact_distance(&c.css, 24).unwrap());
        assert_eq!(r1.value, r4.value);
        assert_eq!(r1.witness, r4.witness);
    }

    #[test]
    fn xz_swap_preserves_distance() {
        // (A, B) -> (B^T, A^T) swaps the roles of the two sides.
        let c = code("l=5 m=3 A=x^4+z^3 B=x^4+x+z^4+y");
        let d = exact_distance(&c.css, 24).unwrap();
        let swapped = crate::code::CssCode::from_checks(c.css.h_z.clone(), c.css.h_x.clone());
        let d2 = exact_distance(&swapped, 24).unwrap();
        assert_eq!(d.value, d2.value);
    }
}
