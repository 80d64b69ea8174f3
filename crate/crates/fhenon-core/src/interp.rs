//! Local cubic interpolation on sorted nodes, with a cancellation-free
//! evaluation of differences p(a) - p(b) used by the singular quadratures.

/// Index of the cell containing x (clamped), for sorted xs.
fn cell_index(xs: &[f64], x: f64) -> usize {
    match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
        Ok(i) => i.min(xs.len() - 2),
        Err(0) => 0,
        Err(i) => (i - 1).min(xs.len() - 2),
    }
}

/// Four-point stencil start for a cell, clamped to the node range.
fn stencil_start(len: usize, cell: usize) -> usize {
    if len < 4 {
        return 0;
    }
    cell.saturating_sub(1).min(len - 4)
}

/// Newton divided-difference coefficients for the cubic through four points,
/// expanded in the power basis centered at the stencil mean.
fn centered_cubic(xs: &[f64; 4], ys: &[f64; 4]) -> (f64, [f64; 4]) {
    let center = 0.25 * (xs[0] + xs[1] + xs[2] + xs[3]);
    let z: Vec<f64> = xs.iter().map(|x| x - center).collect();

    let d01 = (ys[1] - ys[0]) / (z[1] - z[0]);
    let d12 = (ys[2] - ys[1]) / (z[2] - z[1]);
    let d23 = (ys[3] - ys[2]) / (z[3] - z[2]);
    let d012 = (d12 - d01) / (z[2] - z[0]);
    let d123 = (d23 - d12) / (z[3] - z[1]);
    let d0123 = (d123 - d012) / (z[3] - z[0]);

    // p(t) = y0 + d01 (t-z0) + d012 (t-z0)(t-z1) + d0123 (t-z0)(t-z1)(t-z2)
    let mut c = [ys[0], 0.0, 0.0, 0.0];
    c[0] += -d01 * z[0];
    c[1] += d01;
    c[0] += d012 * z[0] * z[1];
    c[1] += -d012 * (z[0] + z[1]);
    c[2] += d012;
    c[0] += -d0123 * z[0] * z[1] * z[2];
    c[1] += d0123 * (z[0] * z[1] + z[0] * z[2] + z[1] * z[2]);
    c[2] += -d0123 * (z[0] + z[1] + z[2]);
    c[3] += d0123;
    (center, c)
}

fn eval_centered(center: f64, c: &[f64; 4], x: f64) -> f64 {
    let t = x - center;
    ((c[3] * t + c[2]) * t + c[1]) * t + c[0]
}

/// p(a) - p(b) = (a-b) (c1 + c2 (a+b) + c3 (a^2 + ab + b^2)) in centered
/// coordinates; exact factoring of the difference avoids cancellation when
/// a and b are close.
fn diff_centered(center: f64, c: &[f64; 4], a: f64, b: f64) -> f64 {
    let ta = a - center;
    let tb = b - center;
    (ta - tb) * (c[1] + c[2] * (ta + tb) + c[3] * (ta * ta + ta * tb + tb * tb))
}

/// Piecewise local cubic through (xs, ys); linear when fewer than 4 nodes.
#[derive(Debug, Clone)]
pub struct CubicTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl CubicTable {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert_eq!(xs.len(), ys.len());
        assert!(xs.len() >= 2);
        debug_assert!(xs.windows(2).all(|w| w[0] < w[1]), "nodes must be strictly increasing");
        CubicTable { xs, ys }
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    fn stencil(&self, x: f64) -> (usize, [f64; 4], [f64; 4]) {
        let cell = cell_index(&self.xs, x);
        let s = stencil_start(self.xs.len(), cell);
        let xs: [f64; 4] = [self.xs[s], self.xs[s + 1], self.xs[s + 2], self.xs[s + 3]];
        let ys: [f64; 4] = [self.ys[s], self.ys[s + 1], self.ys[s + 2], self.ys[s + 3]];
        (s, xs, ys)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.xs.len() < 4 {
            let i = cell_index(&self.xs, x);
            let w = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
            return self.ys[i] * (1.0 - w) + self.ys[i + 1] * w;
        }
        let (_, xs, ys) = self.stencil(x);
        let (center, c) = centered_cubic(&xs, &ys);
        eval_centered(center, &c, x)
    }

    /// p(a) - p(b), computed on a single stencil when a and b are close
    /// enough to share one (the cancellation-critical case).
    pub fn eval_diff(&self, a: f64, b: f64) -> f64 {
        if self.xs.len() < 4 {
            return self.eval(a) - self.eval(b);
        }
        let mid = 0.5 * (a + b);
        let (s, xs, ys) = self.stencil(mid);
        let lo = self.xs[s];
        let hi = self.xs[s + 3];
        if a >= lo && a <= hi && b >= lo && b <= hi {
            let (center, c) = centered_cubic(&xs, &ys);
            diff_centered(center, &c, a, b)
        } else {
            self.eval(a) - self.eval(b)
        }
    }
}
