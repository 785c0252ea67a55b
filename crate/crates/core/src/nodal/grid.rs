//! Sign grids: flood-fill domain counting and marching-squares nodal
//! curves on a disk.

use rayon::prelude::*;

use crate::poly::FloatPoly;

/// Largest sub-division of one coarse cell.
const MAX_FACTOR: usize = 256;

/// A point around which the counting grid is refined locally.
///
/// Near the point the sign pattern is a fan of sectors of opening `wedge`,
/// pinched to a corridor of width `corridor` (zero at a singular point).
/// Cells at distance `d` are split until `max(corridor, d * wedge)` spans six
/// sub-cells, so every sector stays connected as it narrows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeaturePoint {
    pub x: f64,
    pub y: f64,
    pub wedge: f64,
    pub corridor: f64,
}

impl FeaturePoint {
    fn factor(&self, h: f64, d: f64) -> usize {
        let target = self.corridor.max(d * self.wedge) / 6.0;
        let mut f = 1;
        while h / f as f64 > target && f < MAX_FACTOR {
            f *= 2;
        }
        f
    }

    /// Distance beyond which no refinement is needed.
    fn reach(&self, h: f64) -> f64 {
        if self.corridor >= 6.0 * h {
            0.0
        } else {
            6.0 * h / self.wedge
        }
    }
}

#[inline]
fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut a: u32) -> u32 {
        while self.parent[a as usize] != a {
            let p = self.parent[a as usize];
            self.parent[a as usize] = self.parent[p as usize];
            a = p;
        }
        a
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}

/// Signs on an `(m+1) x (m+1)` node lattice over `[x0, x0+m*h] x [y0, y0+m*h]`,
/// row-major in `i` (x index).
fn node_signs(f: &FloatPoly, x0: f64, y0: f64, h: f64, m: usize) -> Vec<i8> {
    (0..=m)
        .into_par_iter()
        .flat_map_iter(|i| {
            let x = x0 + i as f64 * h;
            (0..=m).map(move |j| sign(f.eval2(x, y0 + j as f64 * h)))
        })
        .collect()
}

fn cell_sign(s: &[i8], stride: usize, i: usize, j: usize) -> i8 {
    let a = s[i * stride + j];
    if a != 0 && s[(i + 1) * stride + j] == a && s[i * stride + j + 1] == a && s[(i + 1) * stride + j + 1] == a {
        a
    } else {
        0
    }
}

struct Patch {
    factor: usize,
    offset: usize,
    signs: Vec<i8>,
    inside: Vec<bool>,
}

/// Number of connected components of `{f != 0}` in the disk of the given
/// radius, from a sign grid with `n` cells per side.
///
/// A cell belongs to a domain only when its four corners share a strict
/// sign; such cells are joined across shared edges. Cells near feature
/// points are split into `factor x factor` sub-cells first. Components lying
/// within `2h` of a singular feature, or only along patch edges facing a
/// coarser neighbour, are not counted. Boundary cells join the constant-sign
/// arc of the circle they touch, and each arc counts toward its component.
pub fn count_components(f: &FloatPoly, radius: f64, n: usize, features: &[FeaturePoint]) -> usize {
    let h = 2.0 * radius / n as f64;
    let origin = -radius;
    let nodes = node_signs(f, origin, origin, h, n);
    let stride = n + 1;
    let center = |k: usize| origin + (k as f64 + 0.5) * h;
    let inside_disk = |x: f64, y: f64| x * x + y * y <= radius * radius;

    // refinement assignment
    let mut factor = vec![1usize; n * n];
    for fp in features {
        let reach = fp.reach(h);
        if reach <= 0.0 {
            continue;
        }
        let lo_i = (((fp.x - reach - origin) / h).floor().max(0.0)) as usize;
        let hi_i = (((fp.x + reach - origin) / h).ceil().max(0.0) as usize).min(n);
        let lo_j = (((fp.y - reach - origin) / h).floor().max(0.0)) as usize;
        let hi_j = (((fp.y + reach - origin) / h).ceil().max(0.0) as usize).min(n);
        for i in lo_i..hi_i {
            for j in lo_j..hi_j {
                let (cx0, cy0) = (origin + i as f64 * h, origin + j as f64 * h);
                let dx = (cx0 - fp.x).max(0.0).max(fp.x - (cx0 + h));
                let dy = (cy0 - fp.y).max(0.0).max(fp.y - (cy0 + h));
                let d = dx.hypot(dy);
                if d <= reach {
                    let slot = &mut factor[i * n + j];
                    *slot = (*slot).max(fp.factor(h, d));
                }
            }
        }
    }
    let mut patch_of = vec![usize::MAX; n * n];
    let mut patches: Vec<Patch> = Vec::new();
    let mut total = n * n;
    for i in 0..n {
        for j in 0..n {
            let fct = factor[i * n + j];
            if fct <= 1 {
                continue;
            }
            let fh = h / fct as f64;
            let (x0, y0) = (origin + i as f64 * h, origin + j as f64 * h);
            let fine = node_signs(f, x0, y0, fh, fct);
            let mut signs = vec![0i8; fct * fct];
            let mut inside = vec![false; fct * fct];
            for a in 0..fct {
                for b in 0..fct {
                    signs[a * fct + b] = cell_sign(&fine, fct + 1, a, b);
                    inside[a * fct + b] = inside_disk(x0 + (a as f64 + 0.5) * fh, y0 + (b as f64 + 0.5) * fh);
                }
            }
            patch_of[i * n + j] = patches.len();
            patches.push(Patch { factor: fct, offset: total, signs, inside });
            total += fct * fct;
        }
    }

    let tips: Vec<(f64, f64)> = features.iter().filter(|fp| fp.corridor == 0.0).map(|fp| (fp.x, fp.y)).collect();
    let near_tip = |x: f64, y: f64| tips.iter().any(|&(a, b)| (x - a).hypot(y - b) <= 2.0 * h);
    let mut unit_sign = vec![0i8; total];
    let mut tip = vec![false; total];
    let mut seam = vec![false; total];
    for i in 0..n {
        for j in 0..n {
            if patch_of[i * n + j] == usize::MAX && inside_disk(center(i), center(j)) {
                unit_sign[i * n + j] = cell_sign(&nodes, stride, i, j);
                tip[i * n + j] = near_tip(center(i), center(j));
            }
        }
    }
    for (i, j) in (0..n).flat_map(|i| (0..n).map(move |j| (i, j))) {
        let pi = patch_of[i * n + j];
        if pi == usize::MAX {
            continue;
        }
        let p = &patches[pi];
        let fh = h / p.factor as f64;
        let (x0, y0) = (origin + i as f64 * h, origin + j as f64 * h);
        for (k, (&s, &ins)) in p.signs.iter().zip(&p.inside).enumerate() {
            if ins {
                unit_sign[p.offset + k] = s;
                let (a, b) = (k / p.factor, k % p.factor);
                tip[p.offset + k] = near_tip(x0 + (a as f64 + 0.5) * fh, y0 + (b as f64 + 0.5) * fh);
                let last = p.factor - 1;
                let coarser = |ni: Option<usize>, nj: Option<usize>| match (ni, nj) {
                    (Some(ni), Some(nj)) if ni < n && nj < n => factor[ni * n + nj] < p.factor,
                    _ => false,
                };
                seam[p.offset + k] = (a == 0 && coarser(i.checked_sub(1), Some(j)))
                    || (a == last && coarser(Some(i + 1), Some(j)))
                    || (b == 0 && coarser(Some(i), j.checked_sub(1)))
                    || (b == last && coarser(Some(i), Some(j + 1)));
            }
        }
    }

    let arcs = BoundaryArcs::new(f, radius, 16 * n);
    let mut dsu = Dsu::new(total + arcs.signs.len());
    let join = |a: usize, b: usize, dsu: &mut Dsu| {
        if unit_sign[a] != 0 && unit_sign[a] == unit_sign[b] {
            dsu.union(a as u32, b as u32);
        }
    };
    // units along one side of a coarse cell, as (unit id, start, end) in
    // fractions of the side
    let side_units = |i: usize, j: usize, side: Side| -> Vec<(usize, f64, f64)> {
        let pi = patch_of[i * n + j];
        if pi == usize::MAX {
            return vec![(i * n + j, 0.0, 1.0)];
        }
        let p = &patches[pi];
        let fct = p.factor;
        (0..fct)
            .map(|t| {
                let (a, b) = match side {
                    Side::Left => (0, t),
                    Side::Right => (fct - 1, t),
                    Side::Bottom => (t, 0),
                    Side::Top => (t, fct - 1),
                };
                (p.offset + a * fct + b, t as f64 / fct as f64, (t + 1) as f64 / fct as f64)
            })
            .collect()
    };
    for p in &patches {
        let fct = p.factor;
        for a in 0..fct {
            for b in 0..fct {
                let id = p.offset + a * fct + b;
                if a + 1 < fct {
                    join(id, id + fct, &mut dsu);
                }
                if b + 1 < fct {
                    join(id, id + 1, &mut dsu);
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for (ni, nj, s1, s2) in [(i + 1, j, Side::Right, Side::Left), (i, j + 1, Side::Top, Side::Bottom)] {
                if ni >= n || nj >= n {
                    continue;
                }
                if patch_of[i * n + j] == usize::MAX && patch_of[ni * n + nj] == usize::MAX {
                    join(i * n + j, ni * n + nj, &mut dsu);
                    continue;
                }
                let ua = side_units(i, j, s1);
                let ub = side_units(ni, nj, s2);
                for &(a, a0, a1) in &ua {
                    for &(b, b0, b1) in &ub {
                        if a0.max(b0) < a1.min(b1) {
                            join(a, b, &mut dsu);
                        }
                    }
                }
            }
        }
    }
    // units along the staircase edge of the disk attach to the boundary arc
    // they touch
    let attach = |id: usize, x: f64, y: f64, size: f64, dsu: &mut Dsu| {
        if unit_sign[id] != 0 && x.hypot(y) >= radius - 1.5 * size {
            if let Some(arc) = arcs.nearest(x, y, 2.0 * size, unit_sign[id]) {
                dsu.union(id as u32, (total + arc) as u32);
            }
        }
    };
    for i in 0..n {
        for j in 0..n {
            let pi = patch_of[i * n + j];
            if pi == usize::MAX {
                attach(i * n + j, center(i), center(j), h, &mut dsu);
                continue;
            }
            let p = &patches[pi];
            let fh = h / p.factor as f64;
            let (x0, y0) = (origin + i as f64 * h, origin + j as f64 * h);
            for k in 0..p.factor * p.factor {
                let (a, b) = (k / p.factor, k % p.factor);
                attach(p.offset + k, x0 + (a as f64 + 0.5) * fh, y0 + (b as f64 + 0.5) * fh, fh, &mut dsu);
            }
        }
    }
    // fragments at the tip of a singular fan, or cut off along the edge of
    // a patch by a coarser neighbour, are below grid resolution
    let mut roots: Vec<u32> = (0..total)
        .filter(|&k| unit_sign[k] != 0 && !tip[k] && !seam[k])
        .chain((0..arcs.signs.len()).map(|a| total + a))
        .map(|k| dsu.find(k as u32))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Maximal constant-sign arcs of the boundary circle, from `m` samples.
struct BoundaryArcs {
    radius: f64,
    samples: Vec<i8>,
    arc_of: Vec<usize>,
    signs: Vec<i8>,
}

impl BoundaryArcs {
    fn new(f: &FloatPoly, radius: f64, m: usize) -> Self {
        let step = std::f64::consts::TAU / m as f64;
        let mut samples: Vec<i8> = (0..m)
            .map(|k| {
                let t = k as f64 * step;
                sign(f.eval2(radius * t.cos(), radius * t.sin()))
            })
            .collect();
        // zeros take the sign of the previous nonzero sample
        if let Some(start) = samples.iter().position(|&s| s != 0) {
            for k in 1..=m {
                let idx = (start + k) % m;
                if samples[idx] == 0 {
                    samples[idx] = samples[(idx + m - 1) % m];
                }
            }
        }
        let mut arc_of = vec![usize::MAX; m];
        let mut signs = Vec::new();
        if samples.iter().all(|&s| s != 0) {
            let first = (0..m).find(|&k| samples[k] != samples[(k + m - 1) % m]).unwrap_or(0);
            for k in 0..m {
                let idx = (first + k) % m;
                if k == 0 || samples[idx] != samples[(idx + m - 1) % m] {
                    signs.push(samples[idx]);
                }
                arc_of[idx] = signs.len() - 1;
            }
        }
        BoundaryArcs { radius, samples, arc_of, signs }
    }

    /// Arc of the given sign closest in angle to `(x, y)`, within arc length `window`.
    fn nearest(&self, x: f64, y: f64, window: f64, s: i8) -> Option<usize> {
        if self.signs.is_empty() {
            return None;
        }
        let m = self.samples.len();
        let step = std::f64::consts::TAU / m as f64;
        let k0 = (y.atan2(x).rem_euclid(std::f64::consts::TAU) / step).round() as usize % m;
        let w = (window / (self.radius * step)).ceil() as usize;
        (0..=w).flat_map(|d| [(k0 + d) % m, (k0 + m - d % m) % m]).find(|&k| self.samples[k] == s).map(|k| self.arc_of[k])
    }
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

pub type Segment = [(f64, f64); 2];

/// Marching-squares approximation of `{f = 0}` clipped to the disk; zero
/// node values count as positive.
pub fn nodal_segments(f: &FloatPoly, radius: f64, n: usize) -> Vec<Segment> {
    let h = 2.0 * radius / n as f64;
    let o = -radius;
    let stride = n + 1;
    let vals: Vec<f64> = (0..=n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let x = o + i as f64 * h;
            (0..=n).map(move |j| f.eval2(x, o + j as f64 * h))
        })
        .collect();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let vals = &vals;
            (0..n).flat_map(move |j| {
                let (x0, y0) = (o + i as f64 * h, o + j as f64 * h);
                // corners counter-clockwise from bottom-left
                let c = [
                    (x0, y0, vals[i * stride + j]),
                    (x0 + h, y0, vals[(i + 1) * stride + j]),
                    (x0 + h, y0 + h, vals[(i + 1) * stride + j + 1]),
                    (x0, y0 + h, vals[i * stride + j + 1]),
                ];
                cell_segments(f, &c)
                    .into_iter()
                    .filter_map(move |s| clip(s, radius))
            })
        })
        .collect()
}

fn cell_segments(f: &FloatPoly, c: &[(f64, f64, f64); 4]) -> Vec<Segment> {
    let pos = |v: f64| v >= 0.0;
    let mut pts = Vec::with_capacity(4);
    for e in 0..4 {
        let (a, b) = (c[e], c[(e + 1) % 4]);
        if pos(a.2) != pos(b.2) {
            let t = a.2 / (a.2 - b.2);
            pts.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
        }
    }
    match pts.len() {
        2 => vec![[pts[0], pts[1]]],
        4 => {
            let (cx, cy) = ((c[0].0 + c[1].0) / 2.0, (c[0].1 + c[3].1) / 2.0);
            let center_pos = pos(f.eval2(cx, cy));
            // crossings sit on edges 0-1, 1-2, 2-3, 3-0; pair so that the
            // center joins the corners sharing its sign
            if center_pos == pos(c[0].2) {
                vec![[pts[0], pts[1]], [pts[2], pts[3]]]
            } else {
                vec![[pts[3], pts[0]], [pts[1], pts[2]]]
            }
        }
        _ => Vec::new(),
    }
}

fn clip(s: Segment, r: f64) -> Option<Segment> {
    let (a, b) = (s[0], s[1]);
    let inside = |p: (f64, f64)| p.0 * p.0 + p.1 * p.1 <= r * r;
    if inside(a) && inside(b) {
        return Some(s);
    }
    let d = (b.0 - a.0, b.1 - a.1);
    let qa = d.0 * d.0 + d.1 * d.1;
    if qa == 0.0 {
        return None;
    }
    let qb = 2.0 * (a.0 * d.0 + a.1 * d.1);
    let qc = a.0 * a.0 + a.1 * a.1 - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let t0 = ((-qb - sq) / (2.0 * qa)).max(0.0);
    let t1 = ((-qb + sq) / (2.0 * qa)).min(1.0);
    if t0 >= t1 {
        return None;
    }
    let at = |t: f64| (a.0 + t * d.0, a.1 + t * d.1);
    Some([at(t0), at(t1)])
}

pub fn total_length(segments: &[Segment]) -> f64 {
    segments
        .iter()
        .map(|s| (s[1].0 - s[0].0).hypot(s[1].1 - s[0].1))
        .sum()
}
