//! Natural cubic spline through sampled values.

/// Interpolating cubic spline with zero second derivative at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    // second derivatives at the knots
    curvature: Vec<f64>,
}

impl CubicSpline {
    /// Knots must be strictly increasing and at least two.
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Self {
        let n = knots.len();
        assert!(n >= 2 && values.len() == n, "spline needs matching samples");
        assert!(
            knots.windows(2).all(|w| w[1] > w[0]),
            "spline knots must increase"
        );
        let mut curvature = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior equations.
            let m = n - 2;
            let mut diag = vec![0.0; m];
            let mut upper = vec![0.0; m];
            let mut rhs = vec![0.0; m];
            for k in 0..m {
                let i = k + 1;
                let h0 = knots[i] - knots[i - 1];
                let h1 = knots[i + 1] - knots[i];
                diag[k] = 2.0 * (h0 + h1);
                upper[k] = h1;
                rhs[k] = 6.0 * ((values[i + 1] - values[i]) / h1 - (values[i] - values[i - 1]) / h0);
            }
            for k in 1..m {
                let lower = knots[k + 1] - knots[k];
                let factor = lower / diag[k - 1];
                diag[k] -= factor * upper[k - 1];
                rhs[k] -= factor * rhs[k - 1];
            }
            let mut sol = vec![0.0; m];
            sol[m - 1] = rhs[m - 1] / diag[m - 1];
            for k in (0..m - 1).rev() {
                sol[k] = (rhs[k] - upper[k] * sol[k + 1]) / diag[k];
            }
            curvature[1..n - 1].copy_from_slice(&sol);
        }
        Self {
            knots,
            values,
            curvature,
        }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn segment(&self, t: f64) -> usize {
        let n = self.knots.len();
        match self.knots.partition_point(|&k| k <= t) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        }
    }

    /// Value at `t`; outside the knot range the end cubic is extended.
    pub fn eval(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let a = (x1 - t) / h;
        let b = (t - x0) / h;
        a * self.values[i]
            + b * self.values[i + 1]
            + ((a * a * a - a) * self.curvature[i] + (b * b * b - b) * self.curvature[i + 1]) * h * h
                / 6.0
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let a = (x1 - t) / h;
        let b = (t - x0) / h;
        (self.values[i + 1] - self.values[i]) / h
            + (-(3.0 * a * a - 1.0) * self.curvature[i] + (3.0 * b * b - 1.0) * self.curvature[i + 1])
                * h
                / 6.0
    }
}
