use super::{CertifiedPair, DegenerateError};
use crate::field::ScalarField;
use crate::poly::FloatPoly;

/// A square grid of `cells x cells` cells centered at `center`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub side: f64,
    pub cells: usize,
    pub center: [f64; 2],
}

impl GridSpec {
    pub fn new(side: f64, cells: usize) -> Result<Self, DegenerateError> {
        if !(side > 0.0 && side.is_finite()) {
            return Err(DegenerateError::InvalidParameter("grid side must be positive".into()));
        }
        if cells < 2 {
            return Err(DegenerateError::InvalidParameter("grid needs at least 2 cells per side".into()));
        }
        Ok(GridSpec { side, cells, center: [0.0, 0.0] })
    }

    pub fn h(&self) -> f64 {
        self.side / self.cells as f64
    }

    pub fn nodes_per_side(&self) -> usize {
        self.cells + 1
    }

    pub fn len(&self) -> usize {
        self.nodes_per_side().pow(2)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nodes_per_side() + i
    }

    pub fn coord(&self, i: usize, axis: usize) -> f64 {
        self.center[axis] - self.side / 2.0 + i as f64 * self.h()
    }

    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        [self.coord(i, 0), self.coord(j, 1)]
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.cells || j == self.cells
    }

    /// The same square with twice as many cells per side.
    pub fn refined(&self) -> GridSpec {
        GridSpec { cells: 2 * self.cells, ..*self }
    }
}

/// Node values on a [`GridSpec`]. `flagged` marks nodes whose value was not
/// determined by the equation (see [`super::assemble_solve`]).
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub spec: GridSpec,
    pub values: Vec<f64>,
    pub flagged: Vec<bool>,
}

impl GridField {
    pub fn from_fn<F: Fn(f64, f64) -> f64>(spec: GridSpec, f: F) -> Self {
        let n = spec.nodes_per_side();
        let mut values = Vec::with_capacity(spec.len());
        for j in 0..n {
            for i in 0..n {
                let [x, y] = spec.point(i, j);
                values.push(f(x, y));
            }
        }
        GridField { spec, values, flagged: vec![false; spec.len()] }
    }

    pub fn from_poly(spec: GridSpec, p: &FloatPoly) -> Self {
        GridField::from_fn(spec, |x, y| p.eval2(x, y))
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.spec.index(i, j)]
    }

    /// Interior nodes: everything off the square boundary.
    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        !self.spec.is_boundary(i, j)
    }

    /// Every other node, on the grid with half as many cells.
    pub fn coarsened(&self) -> Option<GridField> {
        if !self.spec.cells.is_multiple_of(2) || self.spec.cells < 4 {
            return None;
        }
        let spec = GridSpec { cells: self.spec.cells / 2, ..self.spec };
        let n = spec.nodes_per_side();
        let mut values = Vec::with_capacity(spec.len());
        let mut flagged = Vec::with_capacity(spec.len());
        for j in 0..n {
            for i in 0..n {
                let k = self.spec.index(2 * i, 2 * j);
                values.push(self.values[k]);
                flagged.push(self.flagged[k]);
            }
        }
        Some(GridField { spec, values, flagged })
    }

    pub fn max_abs_diff(&self, other: &GridField) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Bilinear interpolation; NaN outside the square.
    pub fn sample(&self, x: f64, y: f64) -> f64 {
        let h = self.spec.h();
        let fx = (x - self.spec.coord(0, 0)) / h;
        let fy = (y - self.spec.coord(0, 1)) / h;
        let n = self.spec.cells as f64;
        let eps = 1e-9;
        if !(fx >= -eps && fy >= -eps && fx <= n + eps && fy <= n + eps) {
            return f64::NAN;
        }
        let (fx, fy) = (fx.clamp(0.0, n), fy.clamp(0.0, n));
        let i = (fx.floor() as usize).min(self.spec.cells - 1);
        let j = (fy.floor() as usize).min(self.spec.cells - 1);
        let (tx, ty) = (fx - i as f64, fy - j as f64);
        (1.0 - tx) * (1.0 - ty) * self.at(i, j)
            + tx * (1.0 - ty) * self.at(i + 1, j)
            + (1.0 - tx) * ty * self.at(i, j + 1)
            + tx * ty * self.at(i + 1, j + 1)
    }
}

impl ScalarField for GridField {
    fn dim(&self) -> usize {
        2
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.sample(x[0], x[1])
    }
}

/// The ratio `w = v / u` on a grid: exact through `R`, plus the naive node
/// quotient where `|u| > 1e-8`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioField {
    pub exact: GridField,
    pub naive: Vec<Option<f64>>,
}

impl RatioField {
    /// Largest `|naive - exact|` over nodes with `|u| > threshold`.
    pub fn naive_discrepancy(&self, u: &FloatPoly, threshold: f64) -> f64 {
        let spec = self.exact.spec;
        let n = spec.nodes_per_side();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                let [x, y] = spec.point(i, j);
                let k = spec.index(i, j);
                if let Some(q) = self.naive[k] {
                    if u.eval2(x, y).abs() > threshold {
                        worst = worst.max((q - self.exact.values[k]).abs());
                    }
                }
            }
        }
        worst
    }
}

pub fn ratio_field(pair: &CertifiedPair, spec: GridSpec) -> RatioField {
    let r = FloatPoly::from(&pair.r);
    let u = FloatPoly::from(&pair.u);
    let v = FloatPoly::from(&pair.v);
    let exact = GridField::from_poly(spec, &r);
    let n = spec.nodes_per_side();
    let mut naive = Vec::with_capacity(spec.len());
    for j in 0..n {
        for i in 0..n {
            let [x, y] = spec.point(i, j);
            let uv = u.eval2(x, y);
            naive.push((uv.abs() > 1e-8).then(|| v.eval2(x, y) / uv));
        }
    }
    RatioField { exact, naive }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, sphere_ball_integral, Region};
    use crate::exact::rat;

    fn pair(u: &str, r: &str) -> CertifiedPair {
        let u = parse_polynomial(u, 2).unwrap();
        let r = parse_polynomial(r, 2).unwrap();
        let v = &u * &r;
        let u_norm_sq = sphere_ball_integral(&(&u * &u), &rat(1, 2), Region::Ball).unwrap();
        CertifiedPair { n0: 2, m: 2, seed: 0, attempts: 1, u, r, v, u_norm_sq }
    }

    #[test]
    fn exact_ratio_on_nodal_lines() {
        let spec = GridSpec::new(1.0, 64).unwrap();
        let f = ratio_field(&pair("2*x*y", "2*x^2 - 2*y^2"), spec);
        let mid = spec.cells / 2;
        // (0, 1/4) lies on Z(u)
        assert_eq!(f.exact.at(mid, mid + 16), -0.125);
        assert_eq!(f.naive[spec.index(mid, mid + 16)], None);
        let u = FloatPoly::from(&parse_polynomial("2*x*y", 2).unwrap());
        assert!(f.naive_discrepancy(&u, 1e-3) < 1e-6);
        let ones = ratio_field(&pair("x", "1"), spec);
        assert!(ones.exact.values.iter().all(|v| *v == 1.0));
    }

    #[test]
    fn sampling_and_coarsening() {
        let spec = GridSpec::new(1.0, 8).unwrap();
        let g = GridField::from_fn(spec, |x, y| 3.0 * x - y + 1.0);
        assert!((g.sample(0.123, -0.31) - (3.0 * 0.123 + 0.31 + 1.0)).abs() < 1e-12);
        assert!(g.sample(0.6, 0.0).is_nan());
        let c = g.coarsened().unwrap();
        assert_eq!(c.spec.cells, 4);
        assert_eq!(c.at(1, 1), g.at(2, 2));
        assert!(GridSpec::new(0.0, 4).is_err());
    }
}
