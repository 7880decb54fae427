//! Rasterized slices of a tube by complex lines, and their digital topology.
//!
//! A complex line is written `s ↦ origin + s·direction` in the tube's chart.
//! The tube lies in the affine part of that chart, so the line's point at
//! infinity `[direction : 0]` is outside the closed tube and the slice is a
//! bounded region of the `s`-plane.

use std::collections::VecDeque;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::projective::ComplexPoint;
use crate::tube::{Membership, Tube};

/// Resolution of the window-fitting passes.
const COARSE: usize = 128;

/// Resolution of the local windows that settle apparent splits.
const BRIDGE: usize = 64;

/// Zoom levels tried before an apparent split is accepted.
const BRIDGE_DEPTH: usize = 4;

const FOUR: [(isize, isize); 4] = [(0, 1), (1, 0), (0, -1), (-1, 0)];
const EIGHT: [(isize, isize); 8] = [(0, 1), (1, 0), (0, -1), (-1, 0), (1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Component counts of a slice raster after splits finer than a cell are settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Topology {
    pub region: usize,
    pub complement: usize,
    /// Apparent extra components joined to the main one by a finer local raster.
    pub bridged: usize,
}

/// An `R × R` membership bitmap over a square window of the `s`-plane.
///
/// Cell `(row, col)` is centered at `center + h·((col − R/2) + i(R/2 − row))`
/// with `h = 2·half_width / R`, so row 0 is the top and cell `(R/2, R/2)` sits
/// exactly on `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceRaster {
    pub origin: DVector<Complex64>,
    pub direction: DVector<Complex64>,
    pub center: Complex64,
    pub half_width: f64,
    pub resolution: usize,
    pub cells: Vec<bool>,
}

impl SliceRaster {
    pub fn cell_size(&self) -> f64 {
        2.0 * self.half_width / self.resolution as f64
    }

    pub fn cell_center(&self, row: usize, col: usize) -> Complex64 {
        cell_center(self.center, self.cell_size(), self.resolution, row, col)
    }

    /// Chart point at line parameter `s`.
    pub fn point(&self, s: Complex64) -> DVector<Complex64> {
        line_point(&self.origin, &self.direction, s)
    }

    /// The line's point at infinity in the tube chart.
    pub fn infinity(&self, tube: &Tube) -> ComplexPoint {
        let inv = tube.chart().inverse();
        let n = self.direction.len();
        ComplexPoint::new(DVector::from_fn(n + 1, |k, _| (0..n).map(|j| self.direction[j] * inv[(k, j)]).sum())).expect("nonzero direction")
    }

    pub fn inside(&self, row: usize, col: usize) -> bool {
        self.cells[row * self.resolution + col]
    }

    pub fn inside_count(&self) -> usize {
        self.cells.iter().filter(|c| **c).count()
    }

    /// Membership of every cell center.
    pub fn rasterize(
        tube: &Tube,
        origin: &DVector<Complex64>,
        direction: &DVector<Complex64>,
        center: Complex64,
        half_width: f64,
        resolution: usize,
    ) -> Self {
        let h = 2.0 * half_width / resolution as f64;
        let mut cells = Vec::with_capacity(resolution * resolution);
        for row in 0..resolution {
            for col in 0..resolution {
                let s = cell_center(center, h, resolution, row, col);
                cells.push(tube.membership_chart(&line_point(origin, direction, s), 0.0) == Membership::Inside);
            }
        }
        Self { origin: origin.clone(), direction: direction.clone(), center, half_width, resolution, cells }
    }

    /// Rasterizes the slice in a window fitted to it.
    ///
    /// The first window is the `s`-disk cut out by the chart box containing the
    /// tube. Coarse passes shrink it to the occupied cells plus a margin; the
    /// final pass runs at `resolution`. A region still touching the frame is a
    /// [`Error::Resolution`].
    pub fn fit(tube: &Tube, origin: &DVector<Complex64>, direction: &DVector<Complex64>, resolution: usize) -> Result<Self> {
        let (center, half) = fitted_window(tube, origin, direction)?;
        let mut half = half;
        for _ in 0..3 {
            let r = Self::rasterize(tube, origin, direction, center, half, resolution);
            if !r.touches_frame() {
                return Ok(r);
            }
            half *= 1.25;
        }
        Err(Error::Resolution(format!("slice region touches the frame of a window of half-width {half}")))
    }

    /// True when some frame cell is inside the tube.
    pub fn touches_frame(&self) -> bool {
        let r = self.resolution;
        (0..r).any(|k| self.inside(0, k) || self.inside(r - 1, k) || self.inside(k, 0) || self.inside(k, r - 1))
    }

    /// Components of the region under 4-adjacency.
    pub fn region_components(&self) -> usize {
        let r = self.resolution;
        count_components(&self.cells, r, r, &FOUR)
    }

    /// Components of the complement under 8-adjacency, with an exterior ring
    /// around the window so that everything touching the frame is one piece.
    pub fn complement_components(&self) -> usize {
        let r = self.resolution;
        let w = r + 2;
        let mut grid = vec![true; w * w];
        for row in 0..r {
            for col in 0..r {
                grid[(row + 1) * w + col + 1] = !self.inside(row, col);
            }
        }
        count_components(&grid, w, w, &EIGHT)
    }

    /// Region and complement components, where every extra component is first
    /// tested against the main one on successively finer local rasters around
    /// the narrowest gap between them. A thin spike or channel whose width is
    /// below the cell size shows up as a split at one resolution only.
    pub fn topology(&self, tube: &Tube) -> Topology {
        let (region, b1) = self.settle(tube, true);
        let (complement, b2) = self.settle(tube, false);
        Topology { region, complement, bridged: b1 + b2 }
    }

    fn grid_of(&self, inside: bool) -> Vec<bool> {
        self.cells.iter().map(|c| *c == inside).collect()
    }

    fn center_of(&self, k: usize) -> Complex64 {
        self.cell_center(k / self.resolution, k % self.resolution)
    }

    /// The region (`inside`) or the complement, as `(components, bridged)`.
    fn settle(&self, tube: &Tube, inside: bool) -> (usize, usize) {
        let r = self.resolution;
        let steps: &[(isize, isize)] = if inside { &FOUR } else { &EIGHT };
        let (labels, n) = label(&self.grid_of(inside), r, r, steps);
        if n <= 1 {
            return (n, 0);
        }
        // The complement's main piece is the one holding the frame.
        let main = if !inside && labels[0] != 0 { labels[0] } else { largest(&labels, n) };
        let (mut remaining, mut bridged) = (1, 0);
        for (l, pair) in nearest_pairs(&labels, r, r, main, n).into_iter().enumerate() {
            let Some((a, b)) = pair else { continue };
            if l == main {
                continue;
            }
            if bridge(tube, &self.origin, &self.direction, self.center_of(a), self.center_of(b), inside, BRIDGE_DEPTH) {
                bridged += 1;
            } else {
                remaining += 1;
            }
        }
        (remaining, bridged)
    }

    /// Row-major bounding box `(row_min, row_max, col_min, col_max)` of the region.
    pub fn occupied_box(&self) -> Option<(usize, usize, usize, usize)> {
        let r = self.resolution;
        let mut b: Option<(usize, usize, usize, usize)> = None;
        for row in 0..r {
            for col in 0..r {
                if self.inside(row, col) {
                    b = Some(match b {
                        None => (row, row, col, col),
                        Some((r0, r1, c0, c1)) => (r0.min(row), r1.max(row), c0.min(col), c1.max(col)),
                    });
                }
            }
        }
        b
    }
}

fn cell_center(center: Complex64, h: f64, resolution: usize, row: usize, col: usize) -> Complex64 {
    let half = (resolution / 2) as f64;
    center + Complex64::new((col as f64 - half) * h, (half - row as f64) * h)
}

fn line_point(origin: &DVector<Complex64>, direction: &DVector<Complex64>, s: Complex64) -> DVector<Complex64> {
    origin + direction * s
}

/// A square window `(center, half_width)` of the `s`-plane containing the
/// slice with a margin of a few coarse cells.
pub fn fitted_window(tube: &Tube, origin: &DVector<Complex64>, direction: &DVector<Complex64>) -> Result<(Complex64, f64)> {
    // Dᵉ lies in the product of coordinate rectangles Re ζᵢ ∈ [loᵢ, hiᵢ],
    // |Im ζᵢ| ≤ r, with r half the bounding-box diagonal; each rectangle sits
    // in a disk, which pulls back to a disk of s.
    let (lo, hi) = tube.base().bbox();
    let r = 0.5 * (&hi - &lo).norm();
    let mut best: Option<(Complex64, f64)> = None;
    for i in 0..direction.len() {
        let di = direction[i];
        if di.norm() <= 1e-12 * direction.norm() {
            continue;
        }
        let mid = Complex64::from(0.5 * (lo[i] + hi[i]));
        let rho = (0.25 * (hi[i] - lo[i]).powi(2) + r * r).sqrt();
        let cand = ((mid - origin[i]) / di, rho / di.norm());
        if best.is_none_or(|b| cand.1 < b.1) {
            best = Some(cand);
        }
    }
    let (mut center, mut half) = best.ok_or_else(|| Error::Degenerate("zero line direction".into()))?;
    half *= 1.05;
    let origin_inside = tube.contains_chart(origin);
    for _ in 0..4 {
        let coarse = SliceRaster::rasterize(tube, origin, direction, center, half, COARSE);
        let h = coarse.cell_size();
        let mut bounds = coarse.occupied_box().map(|(r0, r1, c0, c1)| {
            let a = coarse.cell_center(r1, c0);
            let b = coarse.cell_center(r0, c1);
            (a.re, b.re, a.im, b.im)
        });
        if origin_inside {
            bounds = Some(match bounds {
                None => (0.0, 0.0, 0.0, 0.0),
                Some((x0, x1, y0, y1)) => (x0.min(0.0), x1.max(0.0), y0.min(0.0), y1.max(0.0)),
            });
        }
        let Some((x0, x1, y0, y1)) = bounds else {
            return Err(Error::Resolution("slice region not resolved".into()));
        };
        let new_center = Complex64::new(0.5 * (x0 + x1), 0.5 * (y0 + y1));
        let new_half = 0.5 * (x1 - x0).max(y1 - y0) + 3.0 * h;
        let shrinking = new_half < 0.8 * half;
        center = new_center;
        half = new_half;
        if !shrinking {
            break;
        }
    }
    Ok((center, half))
}

/// Whether `a` and `b` (points of the same set, region or complement) are
/// joined on a finer raster of the window around them. If not, the nearest
/// cells of their two pieces are tried one zoom level deeper.
fn bridge(tube: &Tube, origin: &DVector<Complex64>, direction: &DVector<Complex64>, a: Complex64, b: Complex64, inside: bool, depth: usize) -> bool {
    let gap = (a - b).norm();
    if gap == 0.0 {
        return true;
    }
    let local = SliceRaster::rasterize(tube, origin, direction, 0.5 * (a + b), 0.75 * gap, BRIDGE);
    let steps: &[(isize, isize)] = if inside { &FOUR } else { &EIGHT };
    let grid = local.grid_of(inside);
    let (labels, n) = label(&grid, BRIDGE, BRIDGE, steps);
    let nearest = |p: Complex64| {
        (0..grid.len()).filter(|k| grid[*k]).min_by(|i, j| (local.center_of(*i) - p).norm().total_cmp(&(local.center_of(*j) - p).norm()))
    };
    let (Some(ka), Some(kb)) = (nearest(a), nearest(b)) else { return false };
    if labels[ka] == labels[kb] {
        return true;
    }
    if depth == 0 {
        return false;
    }
    match nearest_pairs(&labels, BRIDGE, BRIDGE, labels[kb], n)[labels[ka]] {
        Some((a2, b2)) => bridge(tube, origin, direction, local.center_of(a2), local.center_of(b2), inside, depth - 1),
        None => false,
    }
}

fn neighbors(k: usize, rows: usize, cols: usize, steps: &[(isize, isize)]) -> impl Iterator<Item = usize> + '_ {
    let (r, c) = ((k / cols) as isize, (k % cols) as isize);
    steps.iter().filter_map(move |(dr, dc)| {
        let (nr, nc) = (r + dr, c + dc);
        (nr >= 0 && nc >= 0 && nr < rows as isize && nc < cols as isize).then(|| nr as usize * cols + nc as usize)
    })
}

/// Component labels (`0` outside the set, then `1..=n`) and the count `n`.
fn label(grid: &[bool], rows: usize, cols: usize, steps: &[(isize, isize)]) -> (Vec<usize>, usize) {
    let mut labels = vec![0; grid.len()];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..grid.len() {
        if !grid[start] || labels[start] != 0 {
            continue;
        }
        count += 1;
        labels[start] = count;
        queue.push_back(start);
        while let Some(k) = queue.pop_front() {
            for nk in neighbors(k, rows, cols, steps) {
                if grid[nk] && labels[nk] == 0 {
                    labels[nk] = count;
                    queue.push_back(nk);
                }
            }
        }
    }
    (labels, count)
}

fn count_components(grid: &[bool], rows: usize, cols: usize, steps: &[(isize, isize)]) -> usize {
    label(grid, rows, cols, steps).1
}

fn largest(labels: &[usize], n: usize) -> usize {
    let mut sizes = vec![0usize; n + 1];
    for l in labels {
        sizes[*l] += 1;
    }
    (1..=n).max_by_key(|l| sizes[*l]).unwrap_or(1)
}

/// For each label, its cell closest to component `target` in grid steps, with
/// the target cell it is closest to; indexed by label.
fn nearest_pairs(labels: &[usize], rows: usize, cols: usize, target: usize, n: usize) -> Vec<Option<(usize, usize)>> {
    let mut source = vec![usize::MAX; labels.len()];
    let mut queue = VecDeque::new();
    for (k, l) in labels.iter().enumerate() {
        if *l == target {
            source[k] = k;
            queue.push_back(k);
        }
    }
    let mut best: Vec<Option<(usize, usize)>> = vec![None; n + 1];
    // Breadth-first order visits cells by distance, so the first hit per label is nearest.
    while let Some(k) = queue.pop_front() {
        let l = labels[k];
        if l != 0 && l != target && best[l].is_none() {
            best[l] = Some((k, source[k]));
        }
        for nk in neighbors(k, rows, cols, &FOUR) {
            if source[nk] == usize::MAX {
                source[nk] = source[k];
                queue.push_back(nk);
            }
        }
    }
    best
}
