//! PSLQ integer-relation detection over multiprecision floats.
//!
//! Standard PSLQ with the gamma = sqrt(4/3) pivot weighting and deterministic
//! tie-breaking (smallest pivot index wins). Two exits:
//!
//! - a column of the B matrix whose y-entry collapses below the detection
//!   threshold is a candidate relation; it is accepted after a residual check
//!   against the original inputs;
//! - the running lower bound 1/max_j |H_jj| on the 2-norm of any relation
//!   exceeds height * sqrt(n), certifying that no relation with max-norm up
//!   to `height` exists at this precision.
//!
//! When several y-entries collapse in the same sweep, the reported relation
//! is the residual-valid candidate with the smallest max-norm, ties broken
//! lexicographically on the sign-normalized vector.

use rug::ops::Pow;
use rug::{Complete, Float, Integer};

use crate::{Error, Result};

pub(crate) enum PslqOutcome {
    Found {
        coefficients: Vec<Integer>,
        residual: Float,
        iterations: usize,
    },
    NoneBelowHeight {
        /// Certified lower bound on the max-norm of any relation.
        norm_bound: f64,
        iterations: usize,
    },
}

struct State {
    n: usize,
    bits: u32,
    y: Vec<Float>,
    h: Vec<Vec<Float>>, // n x (n-1)
    a: Vec<Vec<Integer>>,
    b: Vec<Vec<Integer>>,
}

impl State {
    fn new(x: &[Float], bits: u32) -> State {
        let n = x.len();
        // s_k = sqrt(sum_{j >= k} x_j^2), y = x / s_0
        let mut s = vec![Float::new(bits); n];
        let mut acc = Float::new(bits);
        for k in (0..n).rev() {
            acc += Float::with_val(bits, &x[k] * &x[k]);
            s[k] = acc.clone().sqrt();
        }
        let norm = s[0].clone();
        let y: Vec<Float> = x
            .iter()
            .map(|xi| Float::with_val(bits, xi / &norm))
            .collect();
        for sk in s.iter_mut() {
            *sk /= &norm;
        }

        let mut h = vec![vec![Float::new(bits); n - 1]; n];
        for i in 0..n {
            for j in 0..n - 1 {
                if i < j {
                    continue;
                }
                if i == j {
                    h[i][j] = Float::with_val(bits, &s[j + 1] / &s[j]);
                } else {
                    let num = Float::with_val(bits, &y[i] * &y[j]);
                    let den = Float::with_val(bits, &s[j] * &s[j + 1]);
                    h[i][j] = -Float::with_val(bits, num / den);
                }
            }
        }

        let ident = |_: ()| -> Vec<Vec<Integer>> {
            (0..n)
                .map(|i| (0..n).map(|j| Integer::from((i == j) as u32)).collect())
                .collect()
        };
        State {
            n,
            bits,
            y,
            h,
            a: ident(()),
            b: ident(()),
        }
    }

    /// Row operation: row_i -= t * row_j on y, H, A; column update on B.
    fn reduce_rows(&mut self, i: usize, j: usize) {
        let t_f = Float::with_val(self.bits, &self.h[i][j] / &self.h[j][j]);
        let t_rounded = t_f.round();
        if t_rounded.is_zero() {
            return;
        }
        let t = t_rounded
            .to_integer()
            .expect("finite rounded float converts to integer");
        let tf = Float::with_val(self.bits, &t);
        let dy = Float::with_val(self.bits, &tf * &self.y[i]);
        self.y[j] += dy;
        for k in 0..=j {
            let d = Float::with_val(self.bits, &tf * &self.h[j][k]);
            self.h[i][k] -= &d;
        }
        for k in 0..self.n {
            let da = (&t * &self.a[j][k]).complete();
            self.a[i][k] -= da;
            let db = (&t * &self.b[k][i]).complete();
            self.b[k][j] += db;
        }
    }

    fn full_reduction(&mut self) {
        for i in 1..self.n {
            for j in (0..i.min(self.n - 1)).rev() {
                if self.h[j][j].is_zero() {
                    continue;
                }
                self.reduce_rows(i, j);
            }
        }
    }

    fn swap_rows(&mut self, m: usize) {
        self.y.swap(m, m + 1);
        self.h.swap(m, m + 1);
        self.a.swap(m, m + 1);
        for row in self.b.iter_mut() {
            row.swap(m, m + 1);
        }
    }

    /// Givens rotation restoring lower-trapezoidal shape after a swap at m.
    fn corner(&mut self, m: usize) {
        let t0 = {
            let aa = Float::with_val(self.bits, &self.h[m][m] * &self.h[m][m]);
            let bb = Float::with_val(self.bits, &self.h[m][m + 1] * &self.h[m][m + 1]);
            Float::with_val(self.bits, aa + bb).sqrt()
        };
        if t0.is_zero() {
            return;
        }
        let c = Float::with_val(self.bits, &self.h[m][m] / &t0);
        let s = Float::with_val(self.bits, &self.h[m][m + 1] / &t0);
        for i in m..self.n {
            let u = self.h[i][m].clone();
            let v = self.h[i][m + 1].clone();
            self.h[i][m] = Float::with_val(self.bits, &c * &u) + Float::with_val(self.bits, &s * &v);
            self.h[i][m + 1] =
                Float::with_val(self.bits, &c * &v) - Float::with_val(self.bits, &s * &u);
        }
    }

    /// Bounded Hermite reduction after a swap at row m.
    fn partial_reduction(&mut self, m: usize) {
        for i in m.max(1)..self.n {
            for j in (0..=(i - 1).min(m + 1).min(self.n - 2)).rev() {
                if self.h[j][j].is_zero() {
                    continue;
                }
                self.reduce_rows(i, j);
            }
        }
    }

    fn max_diag(&self) -> Float {
        let mut m = Float::new(self.bits);
        for j in 0..self.n - 1 {
            let a = self.h[j][j].clone().abs();
            if a > m {
                m = a;
            }
        }
        m
    }
}

/// Sign normalization: first nonzero coefficient positive.
fn normalize_sign(v: &mut [Integer]) {
    if let Some(first) = v.iter().find(|c| **c != 0) {
        if *first < 0 {
            for c in v.iter_mut() {
                *c = (-&*c).complete();
            }
        }
    }
}

pub(crate) fn pslq(
    x: &[Float],
    height: u64,
    bits: u32,
    detect_eps_log10: i64,
    residual_limit_log10: i64,
    max_iter: usize,
) -> Result<PslqOutcome> {
    let n = x.len();
    assert!(n >= 2);
    // gamma = sqrt(4/3), the smallest admissible pivot weight base
    let gamma = {
        let mut g = Float::with_val(bits, 4u32);
        g /= 3u32;
        g.sqrt()
    };
    let weights: Vec<Float> = (0..n - 1)
        .map(|i| gamma.clone().pow((i + 1) as u32))
        .collect();
    let eps = crate::arith::pow10(bits, detect_eps_log10);
    let residual_limit = crate::arith::pow10(bits, residual_limit_log10);
    let stop_bound = {
        let mut b = Float::with_val(bits, height);
        b *= Float::with_val(bits, n as u64).sqrt();
        b
    };

    let mut st = State::new(x, bits);
    st.full_reduction();

    for iter in 0..max_iter {
        // pivot: largest gamma^(i+1) |H_ii|, smallest index on ties
        let mut m = 0usize;
        let mut best = Float::new(bits);
        for (i, weight) in weights.iter().enumerate() {
            let w = Float::with_val(bits, weight * &st.h[i][i]).abs();
            if w > best {
                best = w;
                m = i;
            }
        }
        st.swap_rows(m);
        if m < n - 2 {
            st.corner(m);
        }
        st.partial_reduction(m);

        // detection sweep
        let mut candidates: Vec<Vec<Integer>> = Vec::new();
        for i in 0..n {
            if st.y[i].clone().abs() < eps {
                let col: Vec<Integer> = (0..n).map(|k| st.b[k][i].clone()).collect();
                if col.iter().any(|c| *c != 0) {
                    candidates.push(col);
                }
            }
        }
        if !candidates.is_empty() {
            let mut valid: Vec<(Vec<Integer>, Float)> = Vec::new();
            for mut cand in candidates {
                normalize_sign(&mut cand);
                let mut resid = Float::new(bits);
                for (c, xi) in cand.iter().zip(x.iter()) {
                    resid += Float::with_val(bits, c * xi);
                }
                let resid = resid.abs();
                if resid < residual_limit {
                    valid.push((cand, resid));
                }
            }
            if !valid.is_empty() {
                valid.sort_by(|(a, _), (b, _)| {
                    let na = a.iter().map(|c| c.clone().abs()).max().unwrap();
                    let nb = b.iter().map(|c| c.clone().abs()).max().unwrap();
                    na.cmp(&nb).then_with(|| a.cmp(b))
                });
                let (coefficients, residual) = valid.into_iter().next().unwrap();
                return Ok(PslqOutcome::Found {
                    coefficients,
                    residual,
                    iterations: iter + 1,
                });
            }
            return Err(Error::CrossCheckFailed(
                "relation candidate failed the residual check; precision exhausted".into(),
            ));
        }

        // norm bound: any relation r has |r|_2 >= 1 / max_j |H_jj|
        let maxh = st.max_diag();
        if !maxh.is_zero() {
            let bound = maxh.clone().recip();
            if bound > stop_bound {
                let nb = Float::with_val(bits, &bound / &Float::with_val(bits, n as u64).sqrt());
                return Ok(PslqOutcome::NoneBelowHeight {
                    norm_bound: nb.to_f64(),
                    iterations: iter + 1,
                });
            }
        }
    }
    Err(Error::CrossCheckFailed(format!(
        "PSLQ hit the iteration cap ({max_iter}) before a decision; raise precision"
    )))
}
