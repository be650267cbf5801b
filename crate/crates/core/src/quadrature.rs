//! Gauss-Legendre rules and cumulative line integrals on uniform lattices.

use num_traits::{Float, FloatConst, FromPrimitive};

/// Number of Gauss points per lattice cell used by the surface integrators.
pub const POINTS_PER_CELL: usize = 4;

/// An `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Float + FloatConst + FromPrimitive> GaussLegendre<T> {
    /// Nodes are roots of `P_n`, found by Newton iteration from Chebyshev guesses.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one point");
        let lit = |x: f64| T::from_f64(x).unwrap();
        let nf = lit(n as f64);
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        for k in 0..n.div_ceil(2) {
            let mut x = Float::cos(T::PI() * (lit(k as f64) + lit(0.75)) / (nf + lit(0.5)));
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if Float::abs(dx) <= T::epsilon() * lit(4.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = lit(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[k] = -x;
            nodes[n - 1 - k] = x;
            weights[k] = w;
            weights[n - 1 - k] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<V, F>(&self, a: T, b: T, mut f: F) -> V
    where
        V: std::ops::Add<Output = V> + std::ops::Mul<T, Output = V> + Default,
        F: FnMut(T) -> V,
    {
        let half = (b - a) / T::from_f64(2.0).unwrap();
        let mid = (a + b) / T::from_f64(2.0).unwrap();
        let mut acc = V::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * *x) * (*w * half);
        }
        acc
    }

    /// Fallible variant of [`GaussLegendre::integrate`].
    pub fn try_integrate<V, E, F>(&self, a: T, b: T, mut f: F) -> Result<V, E>
    where
        V: std::ops::Add<Output = V> + std::ops::Mul<T, Output = V> + Default,
        F: FnMut(T) -> Result<V, E>,
    {
        let half = (b - a) / T::from_f64(2.0).unwrap();
        let mid = (a + b) / T::from_f64(2.0).unwrap();
        let mut acc = V::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * *x)? * (*w * half);
        }
        Ok(acc)
    }
}

fn legendre_with_derivative<T: Float + FromPrimitive>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_usize(k).unwrap();
        let p2 = ((kf + kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nf = T::from_usize(n).unwrap();
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Running integrals `F_k = int_{t_0}^{t_k} f` over the sorted abscissae `ts`,
/// one Gauss-Legendre rule per consecutive pair, `F_0 = 0`.
pub fn cumulative<V, E, F>(rule: &GaussLegendre<f64>, ts: &[f64], mut f: F) -> Result<Vec<V>, E>
where
    V: std::ops::Add<Output = V> + std::ops::Mul<f64, Output = V> + Default + Copy,
    F: FnMut(f64) -> Result<V, E>,
{
    let mut out = Vec::with_capacity(ts.len());
    let mut acc = V::default();
    out.push(acc);
    for w in ts.windows(2) {
        acc = acc + rule.try_integrate(w[0], w[1], &mut f)?;
        out.push(acc);
    }
    Ok(out)
}

/// Composite Simpson weights for `n` uniform samples with spacing `h`.
///
/// Falls back to the trapezoid rule when `n - 1` is odd.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    assert!(n >= 2);
    let mut w = vec![0.0; n];
    if (n - 1) % 2 == 0 {
        for (k, wk) in w.iter_mut().enumerate() {
            *wk = if k == 0 || k == n - 1 {
                h / 3.0
            } else if k % 2 == 1 {
                4.0 * h / 3.0
            } else {
                2.0 * h / 3.0
            };
        }
    } else {
        for (k, wk) in w.iter_mut().enumerate() {
            *wk = if k == 0 || k == n - 1 { h / 2.0 } else { h };
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_point_rule_matches_closed_form() {
        let rule = GaussLegendre::<f64>::new(4);
        let a = (3.0 / 7.0 - 2.0 / 7.0 * (6.0f64 / 5.0).sqrt()).sqrt();
        let b = (3.0 / 7.0 + 2.0 / 7.0 * (6.0f64 / 5.0).sqrt()).sqrt();
        let wa = (18.0 + 30f64.sqrt()) / 36.0;
        let wb = (18.0 - 30f64.sqrt()) / 36.0;
        let expect_nodes = [-b, -a, a, b];
        let expect_weights = [wb, wa, wa, wb];
        for k in 0..4 {
            assert!((rule.nodes()[k] - expect_nodes[k]).abs() < 1e-15);
            assert!((rule.weights()[k] - expect_weights[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        for n in 1..8 {
            let rule = GaussLegendre::<f64>::new(n);
            let deg = 2 * n - 1;
            let got: f64 = rule.integrate(-0.3, 1.7, |x| x.powi(deg as i32));
            let exact = (1.7f64.powi(deg as i32 + 1) - (-0.3f64).powi(deg as i32 + 1))
                / (deg as f64 + 1.0);
            assert!((got - exact).abs() < 1e-13 * exact.abs().max(1.0), "n={n}");
        }
    }

    #[test]
    fn single_precision_rule() {
        let rule = GaussLegendre::<f32>::new(4);
        let got: f32 = rule.integrate(0.0, 1.0, |x| x * x * x);
        assert!((got - 0.25).abs() < 1e-6);
    }

    #[test]
    fn cumulative_integral_of_cosine() {
        let rule = GaussLegendre::new(POINTS_PER_CELL);
        let ts: Vec<f64> = (0..=32).map(|k| k as f64 * 0.1).collect();
        let acc: Vec<f64> = cumulative(&rule, &ts, |t| Ok::<_, ()>(t.cos())).unwrap();
        for (t, v) in ts.iter().zip(&acc) {
            assert!((v - t.sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn simpson_is_exact_for_cubics() {
        let n = 9;
        let h = 0.25;
        let w = simpson_weights(n, h);
        let s: f64 = (0..n).map(|k| w[k] * (k as f64 * h).powi(3)).sum();
        assert!((s - 2f64.powi(4) / 4.0).abs() < 1e-13);
    }
}
