use super::{DegenerateError, GridField};
use crate::poly::{FloatPoly, Polynomial};

/// Relative residual at which conjugate gradients stop.
pub const CG_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub field: GridField,
    pub iterations: usize,
    pub relative_residual: f64,
    /// Interior nodes cut off from the boundary by zero-conductance faces.
    pub flagged_nodes: usize,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Finite-volume solve of `div(u^2 grad w) = 0` on the grid square with the
/// boundary values of `boundary` as Dirichlet data.
///
/// Each face carries the conductance `u(face midpoint)^2`; faces where that
/// vanishes exactly carry no flux. Interior nodes whose conductance graph
/// never reaches the boundary are set to the mean of their already-known
/// neighbours and flagged.
pub fn assemble_solve(u: &Polynomial, boundary: &GridField) -> Result<SolveReport, DegenerateError> {
    let spec = boundary.spec;
    let half_diag = spec.side / std::f64::consts::SQRT_2;
    if spec.center[0].hypot(spec.center[1]) + half_diag > 1.0 + 1e-12 {
        return Err(DegenerateError::DomainOutsideUnitBall);
    }
    let n = spec.nodes_per_side();
    let cells = spec.cells;
    for j in 0..n {
        for i in 0..n {
            if spec.is_boundary(i, j) && !boundary.at(i, j).is_finite() {
                return Err(DegenerateError::NonFiniteBoundary(i, j));
            }
        }
    }
    let fu = FloatPoly::from(u);
    let h = spec.h();
    // cx[k]: face between (i, j) and (i + 1, j); cy[k]: (i, j) and (i, j + 1)
    let mut cx = vec![0.0; n * n];
    let mut cy = vec![0.0; n * n];
    for j in 0..n {
        for i in 0..n {
            let [x, y] = spec.point(i, j);
            let k = spec.index(i, j);
            if i < cells {
                cx[k] = fu.eval2(x + h / 2.0, y).powi(2);
            }
            if j < cells {
                cy[k] = fu.eval2(x, y + h / 2.0).powi(2);
            }
        }
    }
    let mut dsu = Dsu((0..n * n).collect());
    for j in 0..n {
        for i in 0..n {
            let k = spec.index(i, j);
            if i < cells && cx[k] > 0.0 {
                dsu.union(k, k + 1);
            }
            if j < cells && cy[k] > 0.0 {
                dsu.union(k, k + n);
            }
        }
    }
    let mut anchored = vec![false; n * n];
    for j in 0..n {
        for i in 0..n {
            if spec.is_boundary(i, j) {
                let root = dsu.find(spec.index(i, j));
                anchored[root] = true;
            }
        }
    }
    let mut values = boundary.values.clone();
    let mut unknown = vec![usize::MAX; n * n];
    let mut order = Vec::new();
    let mut stranded = Vec::new();
    for j in 1..cells {
        for i in 1..cells {
            let k = spec.index(i, j);
            values[k] = 0.0;
            let root = dsu.find(k);
            if anchored[root] {
                unknown[k] = order.len();
                order.push(k);
            } else {
                stranded.push(k);
            }
        }
    }
    let neighbours = |k: usize| -> [(usize, f64); 4] {
        [(k + 1, cx[k]), (k - 1, cx[k - 1]), (k + n, cy[k]), (k - n, cy[k - n])]
    };
    let m = order.len();
    let mut diag = vec![0.0; m];
    let mut b = vec![0.0; m];
    for (row, &k) in order.iter().enumerate() {
        for (q, c) in neighbours(k) {
            diag[row] += c;
            if unknown[q] == usize::MAX && c > 0.0 {
                b[row] += c * values[q];
            }
        }
    }
    let apply = |x: &[f64], out: &mut [f64]| {
        for (row, &k) in order.iter().enumerate() {
            let mut acc = diag[row] * x[row];
            for (q, c) in neighbours(k) {
                let col = unknown[q];
                if col != usize::MAX {
                    acc -= c * x[col];
                }
            }
            out[row] = acc;
        }
    };
    let (mut sum, mut count) = (0.0, 0usize);
    for j in 0..n {
        for i in 0..n {
            if spec.is_boundary(i, j) {
                sum += boundary.at(i, j);
                count += 1;
            }
        }
    }
    let start = vec![sum / count as f64; m];
    let (solution, iterations, relative_residual) = pcg(&apply, &diag, &b, start)?;
    for (row, &k) in order.iter().enumerate() {
        values[k] = solution[row];
    }
    let mut flagged = vec![false; n * n];
    fill_stranded(&mut dsu, &stranded, &mut values, &mut flagged, n);
    Ok(SolveReport {
        field: GridField { spec, values, flagged },
        iterations,
        relative_residual,
        flagged_nodes: stranded.len(),
    })
}

/// Jacobi-preconditioned conjugate gradients; the residual is measured
/// relative to `|b|`.
fn pcg<A>(apply: &A, diag: &[f64], b: &[f64], mut x: Vec<f64>) -> Result<(Vec<f64>, usize, f64), DegenerateError>
where
    A: Fn(&[f64], &mut [f64]),
{
    let m = b.len();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut r = vec![0.0; m];
    apply(&x, &mut r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let bnorm = norm(b).max(f64::MIN_POSITIVE);
    if norm(&r) <= CG_TOL * bnorm {
        return Ok((x, 0, norm(&r) / bnorm));
    }
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; m];
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let max_iter = 20 * m + 1000;
    for it in 1..=max_iter {
        apply(&p, &mut ap);
        let alpha = rz / p.iter().zip(&ap).map(|(a, b)| a * b).sum::<f64>();
        for i in 0..m {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let res = norm(&r) / bnorm;
        if res <= CG_TOL {
            return Ok((x, it, res));
        }
        for i in 0..m {
            z[i] = r[i] / diag[i];
        }
        let rz_next: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..m {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(DegenerateError::NotConverged { iterations: max_iter, residual: norm(&r) / bnorm })
}

fn fill_stranded(dsu: &mut Dsu, stranded: &[usize], values: &mut [f64], flagged: &mut [bool], n: usize) {
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for &k in stranded {
        groups.entry(dsu.find(k)).or_default().push(k);
    }
    for members in groups.values() {
        let inside: std::collections::HashSet<usize> = members.iter().copied().collect();
        let (mut sum, mut count) = (0.0, 0usize);
        for &k in members {
            for q in [k + 1, k - 1, k + n, k - n] {
                if !inside.contains(&q) {
                    sum += values[q];
                    count += 1;
                }
            }
        }
        let mean = if count > 0 { sum / count as f64 } else { 0.0 };
        for &k in members {
            values[k] = mean;
            flagged[k] = true;
        }
    }
}

/// Largest five-point Laplacian of `u w` over interior nodes, divided by the
/// largest `|u w|` on the grid.
pub fn discrete_laplacian_residual(u: &Polynomial, w: &GridField) -> f64 {
    let spec = w.spec;
    let fu = FloatPoly::from(u);
    let prod = GridField::from_fn(spec, |x, y| fu.eval2(x, y));
    let n = spec.nodes_per_side();
    let uw: Vec<f64> = prod.values.iter().zip(&w.values).map(|(a, b)| a * b).collect();
    let scale = uw.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let h2 = spec.h().powi(2);
    let mut worst: f64 = 0.0;
    for j in 1..n - 1 {
        for i in 1..n - 1 {
            let k = spec.index(i, j);
            let lap = (uw[k + 1] + uw[k - 1] + uw[k + n] + uw[k - n] - 4.0 * uw[k]) / h2;
            worst = worst.max(lap.abs());
        }
    }
    worst / scale
}
