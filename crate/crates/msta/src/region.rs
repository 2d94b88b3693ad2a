//! Scans of the allowed region in the `(vbar2, vbar3)` plane at fixed
//! Bloch lengths, with the special states marked on its boundary.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::invariants::{
    b_function, b_within_slack, expansion_probabilities, special_invariants, special_state_exists,
    sudbery, InvariantSet3Q, SpecialStateKind, FEASIBILITY_SLACK,
};

/// One grid point of a scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    pub vbar2: f64,
    pub vbar3: f64,
    /// All eight expansion probabilities are nonnegative.
    pub p_ok: bool,
    pub b_value: f64,
    pub b_ok: bool,
    pub feasible: bool,
    /// Within half a cell diagonal of the feasible region (first-order
    /// distance for `B`, exact for the probability lines).
    pub resolved: bool,
    pub i6: f64,
}

/// A special state drawn on the scan: `A` seed, `B` minimum tangle, `C` maximum tangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Marker {
    pub label: char,
    pub kind: SpecialStateKind,
    pub vbar2: f64,
    pub vbar3: f64,
    pub b_value: f64,
    pub i6: f64,
}

/// A `grid x grid` scan; `points[i3 * grid + i2]`.
#[derive(Clone, Debug)]
pub struct RegionScan {
    pub v: [f64; 3],
    pub grid: usize,
    pub vbar2_range: (f64, f64),
    pub vbar3_range: (f64, f64),
    pub points: Vec<ScanPoint>,
    pub markers: Vec<Marker>,
}

/// Gradient of `B` in `(vbar2, vbar3)`.
fn b_gradient(inv: &InvariantSet3Q) -> (f64, f64) {
    let (al, be, ga) = (inv.alpha(), inv.beta(), inv.gamma());
    let (x, y) = (inv.vbar2, inv.vbar3);
    let dx = y * y + (2.0 * al * x - 2.0 * be) * y + 4.0 * x.powi(3) - 3.0 * al * x * x
        + 2.0 * (be - 2.0 * ga) * x
        - ga * (1.0 - al);
    let dy = -3.0 * y * y + 2.0 * (be + x) * y + al * x * x - 2.0 * be * x + ga * (1.0 - al);
    (dx, dy)
}

/// Evaluates the conditions at one point of the plane; `cell` is the grid
/// spacing `(h2, h3)` used for [`ScanPoint::resolved`].
pub fn scan_point(v: [f64; 3], vbar2: f64, vbar3: f64, cell: (f64, f64)) -> ScanPoint {
    let inv = InvariantSet3Q::new(v[0], v[1], v[2], vbar2, vbar3);
    let p = expansion_probabilities(&inv).expect("scan lengths are positive");
    let p_ok = p.iter().all(|&x| x >= -FEASIBILITY_SLACK);
    let b_value = b_function(&inv);
    let b_ok = b_within_slack(&inv, b_value);

    // Distances in cell units, compared against half the cell diagonal.
    let reach = std::f64::consts::FRAC_1_SQRT_2;
    let p_near = probability_half_planes(v).iter().zip(&p).all(|(h, &pk)| {
        let g = (h[0] * cell.0).hypot(h[1] * cell.1) / 8.0;
        pk >= -FEASIBILITY_SLACK - reach * g
    });
    let (dx, dy) = b_gradient(&inv);
    let b_near = b_within_slack(&inv, b_value - reach * (dx * cell.0).hypot(dy * cell.1));
    ScanPoint {
        vbar2,
        vbar3,
        p_ok,
        b_value,
        b_ok,
        feasible: p_ok && b_ok,
        resolved: p_near && b_near,
        i6: sudbery(&inv).i6,
    }
}

/// Special states present for the lengths `v`.
pub fn markers(v: [f64; 3]) -> Vec<Marker> {
    let sum: f64 = v.iter().sum();
    let minimum = if sum <= 1.0 {
        SpecialStateKind::NegativeSeed
    } else {
        SpecialStateKind::ZeroTangle
    };
    [
        ('A', SpecialStateKind::Seed),
        ('B', minimum),
        ('C', SpecialStateKind::MaxTangle),
    ]
    .into_iter()
    .filter(|&(_, kind)| special_state_exists(kind, v))
    .map(|(label, kind)| {
        let inv = special_invariants(kind, v);
        Marker {
            label,
            kind,
            vbar2: inv.vbar2,
            vbar3: inv.vbar3,
            b_value: b_function(&inv),
            i6: sudbery(&inv).i6,
        }
    })
    .collect()
}

/// The probability conditions as half-planes `a x + b y + c >= 0` in `(vbar2, vbar3)`.
fn probability_half_planes(v: [f64; 3]) -> Vec<[f64; 3]> {
    let [va, vb, vc] = v;
    (0..8)
        .map(|idx| {
            let s = |k: usize| if (idx >> (2 - k)) & 1 == 0 { 1.0 } else { -1.0 };
            let (i, j, k) = (s(0), s(1), s(2));
            [
                i * j / (va * vb) + i * k / (va * vc) + j * k / (vb * vc),
                i * j * k / (va * vb * vc),
                1.0 + i * va + j * vb + k * vc,
            ]
        })
        .collect()
}

/// Vertices of the polygon where all eight probabilities are nonnegative.
pub fn probability_polygon(v: [f64; 3]) -> Vec<(f64, f64)> {
    let planes = probability_half_planes(v);
    let mut out = Vec::new();
    for (m, p) in planes.iter().enumerate() {
        for q in &planes[m + 1..] {
            let det = p[0] * q[1] - p[1] * q[0];
            if det.abs() < 1e-300 {
                continue;
            }
            let x = (-p[2] * q[1] + q[2] * p[1]) / det;
            let y = (-p[0] * q[2] + q[0] * p[2]) / det;
            let scale = 1.0 + x.abs() + y.abs();
            if planes.iter().all(|h| {
                h[0] * x + h[1] * y + h[2] >= -1e-12 * scale * (1.0 + h[0].abs() + h[1].abs())
            }) {
                out.push((x, y));
            }
        }
    }
    out
}

fn bbox(points: impl Iterator<Item = (f64, f64)>) -> Option<((f64, f64), (f64, f64))> {
    points.fold(None, |acc, (x, y)| match acc {
        None => Some(((x, x), (y, y))),
        Some(((x0, x1), (y0, y1))) => Some(((x0.min(x), x1.max(x)), (y0.min(y), y1.max(y)))),
    })
}

fn pad(r: (f64, f64), frac: f64) -> (f64, f64) {
    let w = (r.1 - r.0).max(1e-6);
    (r.0 - frac * w, r.1 + frac * w)
}

const PRESCAN: usize = 401;

/// The feasible region's bounding box: the probability polygon is prescanned
/// for points that also satisfy `B <= 0`, then padded by 10% per side.
pub fn scan_bounds(v: [f64; 3]) -> Result<((f64, f64), (f64, f64))> {
    let poly = probability_polygon(v);
    let (xr, yr) = bbox(poly.iter().cloned())
        .ok_or_else(|| Error::Infeasible("probability polygon is empty".into()))?;
    let mut feasible = Vec::new();
    for i in 0..PRESCAN {
        for j in 0..PRESCAN {
            let x = xr.0 + (xr.1 - xr.0) * j as f64 / (PRESCAN - 1) as f64;
            let y = yr.0 + (yr.1 - yr.0) * i as f64 / (PRESCAN - 1) as f64;
            if scan_point(v, x, y, (0.0, 0.0)).feasible {
                feasible.push((x, y));
            }
        }
    }
    let marks = markers(v).into_iter().map(|m| (m.vbar2, m.vbar3));
    let (x, y) = bbox(feasible.into_iter().chain(marks)).unwrap_or((xr, yr));
    Ok((pad(x, 0.1), pad(y, 0.1)))
}

/// Scans a `grid x grid` lattice over [`scan_bounds`].
pub fn region_scan(v: [f64; 3], grid: usize) -> Result<RegionScan> {
    if let Some(&x) = v.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
        return Err(Error::BlochOutOfRange(x));
    }
    let grid = grid.max(2);
    let (xr, yr) = scan_bounds(v)?;
    let cell = (
        (xr.1 - xr.0) / (grid - 1) as f64,
        (yr.1 - yr.0) / (grid - 1) as f64,
    );
    let mut points = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        let y = yr.0 + (yr.1 - yr.0) * i as f64 / (grid - 1) as f64;
        for j in 0..grid {
            let x = xr.0 + (xr.1 - xr.0) * j as f64 / (grid - 1) as f64;
            points.push(scan_point(v, x, y, cell));
        }
    }
    Ok(RegionScan {
        v,
        grid,
        vbar2_range: xr,
        vbar3_range: yr,
        points,
        markers: markers(v),
    })
}

impl RegionScan {
    pub fn point(&self, i2: usize, i3: usize) -> &ScanPoint {
        &self.points[i3 * self.grid + i2]
    }

    pub fn feasible_count(&self) -> usize {
        self.points.iter().filter(|p| p.feasible).count()
    }

    /// Connected components of cells with `resolved == want`; 4-neighbours,
    /// or 8-neighbours when `diagonal`. With `outside`, a virtual ring of
    /// such cells surrounds the grid (so the exterior counts as one component).
    fn components(&self, want: bool, diagonal: bool, outside: bool) -> usize {
        let g = self.grid as isize + if outside { 2 } else { 0 };
        let off = if outside { 1 } else { 0 };
        let cell = |r: isize, c: isize| -> bool {
            let (i, j) = (r - off, c - off);
            if i < 0 || j < 0 || i >= self.grid as isize || j >= self.grid as isize {
                !want
            } else {
                self.point(j as usize, i as usize).resolved == want
            }
        };
        let mut seen = vec![false; (g * g) as usize];
        let mut count = 0;
        let steps: &[(isize, isize)] = if diagonal {
            &[
                (1, 0),
                (-1, 0),
                (0, 1),
                (0, -1),
                (1, 1),
                (1, -1),
                (-1, 1),
                (-1, -1),
            ]
        } else {
            &[(1, 0), (-1, 0), (0, 1), (0, -1)]
        };
        for start in 0..g * g {
            let (r0, c0) = (start / g, start % g);
            if seen[start as usize] || !cell(r0, c0) {
                continue;
            }
            count += 1;
            seen[start as usize] = true;
            let mut queue = VecDeque::from([(r0, c0)]);
            while let Some((r, c)) = queue.pop_front() {
                for (dr, dc) in steps {
                    let (nr, nc) = (r + dr, c + dc);
                    if nr < 0 || nc < 0 || nr >= g || nc >= g {
                        continue;
                    }
                    let k = (nr * g + nc) as usize;
                    if !seen[k] && cell(nr, nc) {
                        seen[k] = true;
                        queue.push_back((nr, nc));
                    }
                }
            }
        }
        count
    }

    /// Number of 8-connected components of the resolved region.
    pub fn feasible_components(&self) -> usize {
        self.components(true, true, false)
    }

    /// Number of 4-connected components outside the resolved region that
    /// are not joined to the exterior.
    pub fn holes(&self) -> usize {
        self.components(false, false, true) - 1
    }

    /// One resolved component without holes. The region is dilated by half
    /// a cell diagonal first, so cusps thinner than a cell stay connected.
    pub fn is_simply_connected(&self) -> bool {
        self.feasible_components() == 1 && self.holes() == 0
    }

    /// Grid cell nearest to `(vbar2, vbar3)`.
    pub fn nearest_cell(&self, vbar2: f64, vbar3: f64) -> (usize, usize) {
        let idx = |x: f64, (lo, hi): (f64, f64)| {
            (((x - lo) / (hi - lo) * (self.grid - 1) as f64)
                .round()
                .clamp(0.0, (self.grid - 1) as f64)) as usize
        };
        (idx(vbar2, self.vbar2_range), idx(vbar3, self.vbar3_range))
    }

    /// Whether cells both inside and outside the resolved region lie within
    /// `radius` cells of `(vbar2, vbar3)`.
    pub fn touches_boundary(&self, vbar2: f64, vbar3: f64, radius: usize) -> bool {
        let (c2, c3) = self.nearest_cell(vbar2, vbar3);
        let (mut inside, mut outside) = (false, false);
        for i3 in c3.saturating_sub(radius)..=(c3 + radius).min(self.grid - 1) {
            for i2 in c2.saturating_sub(radius)..=(c2 + radius).min(self.grid - 1) {
                if self.point(i2, i3).resolved {
                    inside = true;
                } else {
                    outside = true;
                }
            }
        }
        inside && outside
    }

    /// A marker lies on the boundary: `B` vanishes there and it touches
    /// both sides of the region at grid resolution.
    pub fn marker_on_boundary(&self, m: &Marker) -> bool {
        m.b_value.abs() < 1e-9 && self.touches_boundary(m.vbar2, m.vbar3, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_markers() {
        let t = 1.0 / 3.0;
        let m = markers([t; 3]);
        let at = |c: char| m.iter().find(|x| x.label == c).unwrap();
        assert!(
            (at('A').vbar2 - 1.0 / 27.0).abs() < 1e-15
                && (at('A').vbar3 - 1.0 / 27.0).abs() < 1e-15
        );
        assert!((at('B').vbar2 + 1.0 / 27.0).abs() < 1e-15);
        assert!(
            (at('C').vbar2 - 1.0 / 9.0).abs() < 1e-15 && (at('C').vbar3 - 1.0 / 81.0).abs() < 1e-15
        );
        let m = markers([2.0 / 3.0; 3]);
        assert_eq!(
            m.iter().find(|x| x.label == 'B').unwrap().kind,
            SpecialStateKind::ZeroTangle
        );
    }

    #[test]
    fn polygon_contains_seed() {
        let v = [0.3, 0.4, 0.5];
        let poly = probability_polygon(v);
        assert!(poly.len() >= 3);
        let s = 0.3 * 0.4 * 0.5;
        assert!(poly
            .iter()
            .any(|&(x, y)| (x - s).abs() < 1e-12 && (y - s).abs() < 1e-12));
    }

    #[test]
    fn scans_of_equal_lengths_are_simply_connected() {
        for v in [0.1, 1.0 / 3.0, 2.0 / 3.0] {
            let scan = region_scan([v; 3], 201).unwrap();
            assert!(scan.feasible_count() > 0);
            assert!(
                scan.is_simply_connected(),
                "v = {v}: {} components, {} holes",
                scan.feasible_components(),
                scan.holes()
            );
            for m in &scan.markers {
                assert!(scan.marker_on_boundary(m), "v = {v}, marker {}", m.label);
            }
        }
    }

    #[test]
    fn feasible_cells_solve_and_infeasible_cells_are_rejected() {
        use crate::error::Error;
        use crate::solver::{reconstruct, solve_invariants, standard_frames, SolveOptions};
        let opts = SolveOptions::default();
        for v in [[0.1; 3], [1.0 / 3.0; 3], [0.3, 0.5, 0.6]] {
            let scan = region_scan(v, 41).unwrap();
            for pt in &scan.points {
                let inv = InvariantSet3Q::new(v[0], v[1], v[2], pt.vbar2, pt.vbar3);
                match solve_invariants(&inv, &opts) {
                    Ok(sols) => {
                        assert!(pt.feasible, "solved an infeasible point {pt:?}");
                        let rho = reconstruct(&inv, &sols[0], &standard_frames()).unwrap();
                        let back = crate::invariants::invariants_3q(&rho).unwrap();
                        assert!(back.max_abs_diff(&inv) < 1e-8);
                    }
                    Err(Error::Infeasible(_)) => assert!(!pt.feasible),
                    Err(e) => panic!("{e} at {pt:?}"),
                }
            }
        }
    }

    #[test]
    fn out_of_range_lengths_rejected() {
        assert!(region_scan([0.0, 0.5, 0.5], 11).is_err());
        assert!(region_scan([1.0, 0.5, 0.5], 11).is_err());
    }
}
