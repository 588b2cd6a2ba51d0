//! Syndrome decoding: belief propagation on the check-matrix factor graph,
//! ordered-statistics post-processing, and an exhaustive minimum-weight
//! oracle for small instances.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{BinaryMatrix, BinaryVector};

/// Message clamp, in LLR units.
const LLR_CLAMP: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BpVariant {
    SumProduct,
    MinSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecoderConfig {
    pub variant: BpVariant,
    pub max_iterations: usize,
    pub min_sum_scale: f64,
    pub osd_order: usize,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            variant: BpVariant::SumProduct,
            max_iterations: 100,
            min_sum_scale: 0.75,
            osd_order: 4,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecoderError {
    #[error("syndrome is inconsistent with the check matrix (internal bug)")]
    InconsistentSyndrome,
}

#[derive(Debug, Clone)]
pub struct BpOutcome {
    /// Posterior error probability per bit after the final sweep.
    pub marginals: Vec<f64>,
    pub hard_decision: BinaryVector,
    pub converged: bool,
    pub iterations_used: usize,
}

#[derive(Debug, Clone)]
pub struct DecodeOutcome {
    pub estimate: BinaryVector,
    pub bp_converged: bool,
    pub iterations_used: usize,
}

/// Syndrome BP+OSD decoder for one fixed check matrix.
///
/// Holds the sparse adjacency and reusable message buffers; one instance per
/// worker thread, no state carries over between calls.
#[derive(Debug, Clone)]
pub struct BpOsdDecoder {
    h: BinaryMatrix,
    cfg: DecoderConfig,
    n: usize,
    checks: usize,
    /// Per check: (variable, edge id).
    check_adj: Vec<Vec<(usize, usize)>>,
    /// Per variable: (check, edge id).
    var_adj: Vec<Vec<(usize, usize)>>,
    edge_count: usize,
    var_to_check: Vec<f64>,
    check_to_var: Vec<f64>,
}

impl BpOsdDecoder {
    pub fn new(h: &BinaryMatrix, cfg: DecoderConfig) -> Self {
        assert!(cfg.max_iterations >= 1);
        assert!(cfg.min_sum_scale > 0.0 && cfg.min_sum_scale <= 1.0);
        let checks = h.rows();
        let n = h.cols();
        let mut check_adj = vec![Vec::new(); checks];
        let mut var_adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for r in 0..checks {
            for c in h.row(r).support() {
                check_adj[r].push((c, edge_count));
                var_adj[c].push((r, edge_count));
                edge_count += 1;
            }
        }
        Self {
            h: h.clone(),
            cfg,
            n,
            checks,
            check_adj,
            var_adj,
            edge_count,
            var_to_check: vec![0.0; edge_count],
            check_to_var: vec![0.0; edge_count],
        }
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.cfg
    }

    /// Syndrome-conditioned BP with a flooding schedule. Converged means the
    /// hard decision reproduced the syndrome at some sweep (early exit).
    pub fn bp(&mut self, syndrome: &BinaryVector, priors: &[f64]) -> BpOutcome {
        assert_eq!(syndrome.len(), self.checks);
        assert_eq!(priors.len(), self.n);
        let prior_llr: Vec<f64> = priors
            .iter()
            .map(|&p| {
                debug_assert!(p > 0.0 && p < 1.0, "priors must be in (0, 1)");
                ((1.0 - p) / p).ln().clamp(-LLR_CLAMP, LLR_CLAMP)
            })
            .collect();
        for e in 0..self.edge_count {
            self.check_to_var[e] = 0.0;
        }
        for v in 0..self.n {
            for &(_, e) in &self.var_adj[v] {
                self.var_to_check[e] = prior_llr[v];
            }
        }
        let mut posterior = vec![0.0; self.n];
        let mut hard = BinaryVector::zeros(self.n);
        for iter in 1..=self.cfg.max_iterations {
            for r in 0..self.checks {
                let sign_flip = if syndrome.get(r) { -1.0 } else { 1.0 };
                let adj = &self.check_adj[r];
                match self.cfg.variant {
                    BpVariant::SumProduct => {
                        for (slot, &(_, e_out)) in adj.iter().enumerate() {
                            let mut prod = 1.0f64;
                            for (other, &(_, e_in)) in adj.iter().enumerate() {
                                if other != slot {
                                    prod *= (self.var_to_check[e_in] / 2.0).tanh();
                                }
                            }
                            let msg = 2.0 * prod.clamp(-0.999_999_999_999, 0.999_999_999_999).atanh();
                            self.check_to_var[e_out] =
                                (sign_flip * msg).clamp(-LLR_CLAMP, LLR_CLAMP);
                        }
                    }
                    BpVariant::MinSum => {
                        for (slot, &(_, e_out)) in adj.iter().enumerate() {
                            let mut sign = sign_flip;
                            let mut min_abs = f64::INFINITY;
                            for (other, &(_, e_in)) in adj.iter().enumerate() {
                                if other != slot {
                                    let m = self.var_to_check[e_in];
                                    if m < 0.0 {
                                        sign = -sign;
                                    }
                                    min_abs = min_abs.min(m.abs());
                                }
                            }
                            if !min_abs.is_finite() {
                                min_abs = 0.0;
                            }
                            self.check_to_var[e_out] =
                                (sign * self.cfg.min_sum_scale * min_abs).clamp(-LLR_CLAMP, LLR_CLAMP);
                        }
                    }
                }
            }
            for v in 0..self.n {
                let total: f64 = prior_llr[v]
                    + self.var_adj[v]
                        .iter()
                        .map(|&(_, e)| self.check_to_var[e])
                        .sum::<f64>();
                let total = total.clamp(-LLR_CLAMP, LLR_CLAMP);
                posterior[v] = total;
                // LLR tie resolves to bit = 0.
                hard.set(v, total < 0.0);
                for &(_, e) in &self.var_adj[v] {
                    self.var_to_check[e] =
                        (total - self.check_to_var[e]).clamp(-LLR_CLAMP, LLR_CLAMP);
                }
            }
            if self.h.mul_vector(&hard) == *syndrome {
                return BpOutcome {
                    marginals: posterior.iter().map(|&l| 1.0 / (1.0 + l.exp())).collect(),
                    hard_decision: hard,
                    converged: true,
                    iterations_used: iter,
                };
            }
        }
        BpOutcome {
            marginals: posterior.iter().map(|&l| 1.0 / (1.0 + l.exp())).collect(),
            hard_decision: hard,
            converged: false,
            iterations_used: self.cfg.max_iterations,
        }
    }

    /// Full BP+OSD decode. The returned estimate always satisfies
    /// H * e = syndrome: the BP hard decision when BP converged, otherwise
    /// the best OSD candidate.
    pub fn decode(&mut self, syndrome: &BinaryVector, priors: &[f64]) -> DecodeOutcome {
        let bp = self.bp(syndrome, priors);
        if bp.converged {
            return DecodeOutcome {
                estimate: bp.hard_decision,
                bp_converged: true,
                iterations_used: bp.iterations_used,
            };
        }
        let estimate = osd_postprocess(&self.h, syndrome, &bp.marginals, priors, self.cfg.osd_order)
            .expect("syndromes from real errors are consistent");
        DecodeOutcome {
            estimate,
            bp_converged: false,
            iterations_used: bp.iterations_used,
        }
    }
}

/// Functional wrapper around [`BpOsdDecoder::bp`].
pub fn bp_decode(
    h: &BinaryMatrix,
    syndrome: &BinaryVector,
    priors: &[f64],
    cfg: DecoderConfig,
) -> BpOutcome {
    BpOsdDecoder::new(h, cfg).bp(syndrome, priors)
}

/// Ordered-statistics post-processing (order-w sweep).
///
/// Columns are ranked most-error-likely first by the BP marginals (ties by
/// column index); an information set is selected greedily by rank over that
/// order. The 2^osd_order assignments of the osd_order least reliable
/// remaining bits are swept, each solving the dependent pivot bits exactly.
/// Candidates are ranked by prior-weighted log-likelihood, which reduces to
/// Hamming weight under uniform priors.
pub fn osd_postprocess(
    h: &BinaryMatrix,
    syndrome: &BinaryVector,
    marginals: &[f64],
    priors: &[f64],
    osd_order: usize,
) -> Result<BinaryVector, DecoderError> {
    let n = h.cols();
    let rows = h.rows();
    assert_eq!(marginals.len(), n);
    assert_eq!(priors.len(), n);
    assert_eq!(syndrome.len(), rows);
    assert!(osd_order < 64, "osd_order sweep size would overflow");

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        marginals[b]
            .partial_cmp(&marginals[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    // Eliminate [H | s] choosing pivots in ranked column order.
    let mut work: Vec<BinaryVector> = (0..rows).map(|r| h.row(r)).collect();
    let mut rhs: Vec<bool> = (0..rows).map(|r| syndrome.get(r)).collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut done = 0usize;
    for &col in &order {
        let Some(p) = (done..rows).find(|&r| work[r].get(col)) else {
            continue;
        };
        work.swap(done, p);
        rhs.swap(done, p);
        let pivot_row = work[done].clone();
        let pivot_rhs = rhs[done];
        for r in 0..rows {
            if r != done && work[r].get(col) {
                work[r].xor_assign(&pivot_row);
                rhs[r] ^= pivot_rhs;
            }
        }
        pivot_cols.push(col);
        done += 1;
        if done == rows {
            break;
        }
    }
    // A leftover rhs bit on a zero row means the syndrome is outside the
    // column space.
    if rhs.iter().skip(done).any(|&b| b) {
        return Err(DecoderError::InconsistentSyndrome);
    }

    // OSD-0 candidate: free bits zero, pivot bits read off the rhs.
    let mut base = BinaryVector::zeros(n);
    for (ri, &col) in pivot_cols.iter().enumerate() {
        if rhs[ri] {
            base.set(col, true);
        }
    }
    let llr: Vec<f64> = priors
        .iter()
        .map(|&p| ((1.0 - p) / p).ln().clamp(-LLR_CLAMP, LLR_CLAMP))
        .collect();
    let score_of = |e: &BinaryVector| -> f64 {
        e.support().iter().map(|&i| llr[i]).sum::<f64>()
    };

    let in_pivot: Vec<bool> = {
        let mut mask = vec![false; n];
        for &c in &pivot_cols {
            mask[c] = true;
        }
        mask
    };
    // Sweep bits: the most error-likely free columns, in rank order.
    let sweep: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&c| !in_pivot[c])
        .take(osd_order)
        .collect();
    // Toggling free bit f also flips the pivot bits on column f's reduced form.
    let toggles: Vec<BinaryVector> = sweep
        .iter()
        .map(|&f| {
            let mut t = BinaryVector::zeros(n);
            t.set(f, true);
            for (ri, &col) in pivot_cols.iter().enumerate() {
                if work[ri].get(f) {
                    t.set(col, true);
                }
            }
            t
        })
        .collect();

    let mut best = base.clone();
    let mut best_score = score_of(&base);
    let mut current = base;
    // Gray-code sweep over free-bit assignments.
    for s in 1u64..1 << toggles.len() {
        let flip = s.trailing_zeros() as usize;
        current.xor_assign(&toggles[flip]);
        let score = score_of(&current);
        if score < best_score {
            best_score = score;
            best = current.clone();
        }
    }
    debug_assert_eq!(h.mul_vector(&best), *syndrome);
    Ok(best)
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let w = combo.len();
    for i in (0..w).rev() {
        if combo[i] < n - w + i {
            combo[i] += 1;
            for j in i + 1..w {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exhaustive minimum-weight decoder: enumerates error patterns of weight
/// 0..=w_max in lexicographic combination order and returns the first one
/// reproducing the syndrome.
pub fn oracle_min_weight_decode(
    h: &BinaryMatrix,
    syndrome: &BinaryVector,
    w_max: usize,
) -> Option<BinaryVector> {
    let n = h.cols();
    if syndrome.is_zero() {
        return Some(BinaryVector::zeros(n));
    }
    let ht = h.transpose();
    for w in 1..=w_max.min(n) {
        let mut combo: Vec<usize> = (0..w).collect();
        loop {
            let mut s = BinaryVector::zeros(h.rows());
            for &c in &combo {
                s.xor_assign(&ht.row(c));
            }
            if s == *syndrome {
                return Some(BinaryVector::from_support(n, &combo));
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_code, CodeSpec};
    use crate::gf2::Echelon;

    fn repetition_h() -> BinaryMatrix {
        BinaryMatrix::from_rows(&[
            BinaryVector::from_bits(&[1, 1, 0]),
            BinaryVector::from_bits(&[0, 1, 1]),
        ])
    }

    #[test]
    fn bp_trivial_syndrome_converges_immediately() {
        let h = repetition_h();
        let out = bp_decode(
            &h,
            &BinaryVector::zeros(2),
            &[0.1, 0.1, 0.1],
            DecoderConfig::default(),
        );
        assert!(out.converged);
        assert_eq!(out.iterations_used, 1);
        assert!(out.hard_decision.is_zero());
    }

    /// Exhaustive 8-case oracle for the repetition example: (1,0,0) is the
    /// unique weight-1 error with syndrome (1,0).
    #[test]
    fn bp_repetition_code_weight1() {
        let h = repetition_h();
        let s = BinaryVector::from_bits(&[1, 0]);
        let mut best: Option<BinaryVector> = None;
        for mask in 0u8..8 {
            let e = BinaryVector::from_bits(&[mask & 1, mask >> 1 & 1, mask >> 2 & 1]);
            if h.mul_vector(&e) == s && best.as_ref().is_none_or(|b| e.weight() < b.weight()) {
                best = Some(e);
            }
        }
        assert_eq!(best.as_ref().unwrap().support(), vec![0]);

        let out = bp_decode(&h, &s, &[0.1, 0.1, 0.1], DecoderConfig::default());
        assert!(out.converged);
        assert_eq!(out.hard_decision, best.unwrap());
    }

    #[test]
    fn osd_order_zero_on_repetition_example() {
        let h = repetition_h();
        let s = BinaryVector::from_bits(&[1, 0]);
        let bp = bp_decode(&h, &s, &[0.1, 0.1, 0.1], DecoderConfig::default());
        let e = osd_postprocess(&h, &s, &bp.marginals, &[0.1, 0.1, 0.1], 0).unwrap();
        assert_eq!(e.support(), vec![0]);
    }

    #[test]
    fn osd_inconsistent_syndrome_is_an_error() {
        let h = BinaryMatrix::zeros(2, 3);
        let s = BinaryVector::from_bits(&[1, 0]);
        assert_eq!(
            osd_postprocess(&h, &s, &[0.1; 3], &[0.1; 3], 2),
            Err(DecoderError::InconsistentSyndrome)
        );
    }

    #[test]
    fn oracle_decoder_basics() {
        let h = repetition_h();
        assert_eq!(
            oracle_min_weight_decode(&h, &BinaryVector::zeros(2), 0).unwrap(),
            BinaryVector::zeros(3)
        );
        let s = BinaryVector::from_bits(&[1, 0]);
        assert_eq!(oracle_min_weight_decode(&h, &s, 2).unwrap().support(), vec![0]);
        assert!(oracle_min_weight_decode(&h, &s, 0).is_none());
    }

    #[test]
    fn bp_corrects_every_single_z_error_on_weight5_code() {
        let c = build_code(&CodeSpec::parse("l=3 m=5 A=x+z^4 B=x+y^2+z^2").unwrap()).unwrap();
        let h = &c.css.h_x;
        let priors = vec![0.01; 30];
        let mut dec = BpOsdDecoder::new(h, DecoderConfig::default());
        for q in 0..30 {
            let e = BinaryVector::from_support(30, &[q]);
            let s = h.mul_vector(&e);
            let out = dec.decode(&s, &priors);
            assert!(out.bp_converged, "BP should converge on weight-1 error at {q}");
            assert_eq!(out.estimate, e);
        }
    }

    #[test]
    fn bposd_corrects_weight2_z_errors_up_to_stabilizer() {
        // d = 5, so every weight-2 error is correctable in principle; the
        // heuristic decoder is expected to succeed on all 435 cases here.
        let c = build_code(&CodeSpec::parse("l=3 m=5 A=x+z^4 B=x+y^2+z^2").unwrap()).unwrap();
        let h = &c.css.h_x;
        let rs_z = Echelon::from_matrix(&c.css.h_z);
        let priors = vec![0.01; 30];
        let mut dec = BpOsdDecoder::new(h, DecoderConfig::default());
        let mut failures = 0;
        for q1 in 0..30 {
            for q2 in q1 + 1..30 {
                let e = BinaryVector::from_support(30, &[q1, q2]);
                let s = h.mul_vector(&e);
                let out = dec.decode(&s, &priors);
                assert_eq!(h.mul_vector(&out.estimate), s, "syndrome contract");
                let mut residual = out.estimate.clone();
                residual.xor_assign(&e);
                if !rs_z.contains(&residual) {
                    failures += 1;
                }
            }
        }
        assert_eq!(failures, 0, "{failures} of 435 weight-2 errors misdecoded");
    }

    #[test]
    fn oracle_corrects_all_weight2_errors_on_weight5_code() {
        let c = build_code(&CodeSpec::parse("l=3 m=5 A=x+z^4 B=x+y^2+z^2").unwrap()).unwrap();
        let h = &c.css.h_x;
        let rs_z = Echelon::from_matrix(&c.css.h_z);
        for q1 in 0..30 {
            for q2 in q1..30 {
                let e = if q1 == q2 {
                    BinaryVector::from_support(30, &[q1])
                } else {
                    BinaryVector::from_support(30, &[q1, q2])
                };
                let s = h.mul_vector(&e);
                let est = oracle_min_weight_decode(h, &s, 2).expect("weight <= 2 must decode");
                let mut residual = est;
                residual.xor_assign(&e);
                assert!(rs_z.contains(&residual), "oracle failed at ({q1},{q2})");
            }
        }
    }

    #[test]
    fn min_sum_variant_also_decodes() {
        let c = build_code(&CodeSpec::parse("l=3 m=5 A=x+z^4 B=x+y^2+z^2").unwrap()).unwrap();
        let cfg = DecoderConfig {
            variant: BpVariant::MinSum,
            ..DecoderConfig::default()
        };
        let h = &c.css.h_x;
        let priors = vec![0.01; 30];
        let mut dec = BpOsdDecoder::new(h, cfg);
        for q in 0..30 {
            let e = BinaryVector::from_support(30, &[q]);
            let s = h.mul_vector(&e);
            let out = dec.decode(&s, &priors);
            assert_eq!(h.mul_vector(&out.estimate), s);
        }
    }

    #[test]
    fn decoder_is_deterministic() {
        let c = build_code(&CodeSpec::parse("l=5 m=3 A=x^4+z^3 B=x^4+x+z^4+y").unwrap()).unwrap();
        let h = &c.css.h_x;
        let priors = vec![0.02; 30];
        let e = BinaryVector::from_support(30, &[3, 17, 22]);
        let s = h.mul_vector(&e);
        let mut d1 = BpOsdDecoder::new(h, DecoderConfig::default());
        let mut d2 = BpOsdDecoder::new(h, DecoderConfig::default());
        let o1 = d1.decode(&s, &priors);
        let o2 = d2.decode(&s, &priors);
        assert_eq!(o1.estimate, o2.estimate);
        // Reusing one instance does not change the answer either.
        let o3 = d1.decode(&s, &priors);
        assert_eq!(o1.estimate, o3.estimate);
    }
}
