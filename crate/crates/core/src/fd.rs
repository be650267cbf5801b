//! Finite-difference stencils.
//!
//! Weights come from Fornberg's recursion, so one routine covers central stencils in
//! the interior and shifted one-sided stencils near the edges of a lattice.

use num_traits::{Float, FromPrimitive};

/// Accuracy of the lattice stencils used by the surface analyzer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FdScheme {
    /// Second-order central differences with lattice spacing.
    #[default]
    Central2,
    /// Richardson extrapolation of `Central2` over spacings `h` and `2h`, i.e. the
    /// fourth-order central stencils.
    Richardson,
}

impl FdScheme {
    pub fn order(self) -> usize {
        match self {
            FdScheme::Central2 => 2,
            FdScheme::Richardson => 4,
        }
    }

    /// Half-width of the central stencil; nodes closer than this to an edge fall back
    /// to one-sided stencils.
    pub fn half_width(self) -> usize {
        self.order() / 2
    }

    /// Fewest lattice points along an axis for second derivatives.
    pub fn min_points(self) -> usize {
        self.order() + 2
    }
}

/// Weights `w_k` with `f^(m)(x0) ~ sum_k w_k f(x_k)`.
pub fn fornberg_weights<T: Float + FromPrimitive>(x0: T, xs: &[T], order: usize) -> Vec<T> {
    let n = xs.len();
    assert!(n > order, "stencil too small for derivative order");
    // c[j][k]: weight of x_j for the k-th derivative
    let mut c = vec![vec![T::zero(); order + 1]; n];
    let mut c1 = T::one();
    let mut c4 = xs[0] - x0;
    c[0][0] = T::one();
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 = c2 * c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    let kf = T::from_usize(k).unwrap();
                    c[i][k] = c1 * (kf * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                let kf = T::from_usize(k).unwrap();
                c[j][k] = (c4 * c[j][k] - kf * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Stencil for one lattice index: integer offsets and weights already divided by `h^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    pub offsets: Vec<isize>,
    pub weights: Vec<f64>,
}

impl Stencil {
    pub fn apply<V, F>(&self, index: usize, mut sample: F) -> V
    where
        V: std::ops::Add<Output = V> + std::ops::Mul<f64, Output = V> + Default,
        F: FnMut(usize) -> V,
    {
        let mut acc = V::default();
        for (o, w) in self.offsets.iter().zip(&self.weights) {
            acc = acc + sample((index as isize + o) as usize) * *w;
        }
        acc
    }
}

/// Stencils of derivative order `m` for every index of an `n`-point lattice with
/// spacing `h`.
pub fn lattice_stencils(n: usize, h: f64, m: usize, scheme: FdScheme) -> Vec<Stencil> {
    let w = scheme.half_width();
    let width = m + scheme.order();
    (0..n)
        .map(|i| {
            let (lo, hi) = if i >= w && i + w < n {
                (i - w, i + w)
            } else if i < w {
                (0, (width - 1).min(n - 1))
            } else {
                (n.saturating_sub(width), n - 1)
            };
            let offsets: Vec<isize> = (lo..=hi).map(|k| k as isize - i as isize).collect();
            let xs: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
            let scale = h.powi(m as i32);
            let weights = fornberg_weights(0.0, &xs, m)
                .into_iter()
                .map(|c| c / scale)
                .collect();
            Stencil { offsets, weights }
        })
        .collect()
}

/// Central difference `(f(x+h) - f(x-h)) / 2h`.
pub fn central<T, F>(f: F, x: T, h: T) -> T
where
    T: Float + FromPrimitive,
    F: Fn(T) -> T,
{
    (f(x + h) - f(x - h)) / (h + h)
}

/// Richardson-extrapolated central difference, `(4 D(h/2) - D(h)) / 3`.
pub fn richardson<T, F>(f: F, x: T, h: T) -> T
where
    T: Float + FromPrimitive,
    F: Fn(T) -> T,
{
    let two = T::from_f64(2.0).unwrap();
    let d_h = central(&f, x, h);
    let d_half = central(&f, x, h / two);
    (T::from_f64(4.0).unwrap() * d_half - d_h) / T::from_f64(3.0).unwrap()
}

/// Fallible variant of [`richardson`] for closures that can fail to evaluate.
pub fn try_richardson<E, F>(f: F, x: f64, h: f64) -> Result<f64, E>
where
    F: Fn(f64) -> Result<f64, E>,
{
    let d_h = (f(x + h)? - f(x - h)?) / (2.0 * h);
    let d_half = (f(x + 0.5 * h)? - f(x - 0.5 * h)?) / h;
    Ok((4.0 * d_half - d_h) / 3.0)
}
