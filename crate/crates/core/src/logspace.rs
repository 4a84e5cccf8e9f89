//! Log-space arithmetic with a fixed combination order.
//!
//! Every reduction here is a deterministic function of its input slice: the
//! same slice always produces the same bits, whatever thread produced it.

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Pairwise (tree) summation. The tree shape depends only on the length.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Log-sum-exp over a slice of log-values, combined as a balanced tree.
pub fn log_sum_exp(logs: &[f64]) -> f64 {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let scaled: Vec<f64> = logs.iter().map(|&l| (l - max).exp()).collect();
    max + pairwise_sum(&scaled).ln()
}

/// Partial sums carried as `shift + ln(sum)` so that subtree results can be
/// merged without a second pass over the leaves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledSum {
    pub shift: f64,
    pub sum: f64,
}

impl ScaledSum {
    pub fn new(shift: f64) -> Self {
        Self { shift, sum: 0.0 }
    }

    #[inline]
    pub fn add_log(&mut self, log_term: f64) {
        self.sum += (log_term - self.shift).exp();
    }

    pub fn ln(&self) -> f64 {
        self.shift + self.sum.ln()
    }

    /// Merge partials that share one shift, pairwise and in slice order.
    pub fn merge(parts: &[ScaledSum]) -> ScaledSum {
        let shift = parts.first().map_or(0.0, |p| p.shift);
        debug_assert!(parts.iter().all(|p| p.shift == shift));
        let sums: Vec<f64> = parts.iter().map(|p| p.sum).collect();
        ScaledSum {
            shift,
            sum: pairwise_sum(&sums),
        }
    }
}
