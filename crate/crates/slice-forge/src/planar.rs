//! Rasterized planar geometry in the closed upper half of the complexified
//! real plane: region construction from specs, boolean operations, connected
//! components, real-axis incidence, path queries and distance transforms.
//!
//! All verdicts produced here are "at resolution h": a region marks exactly
//! the cells whose center satisfies the defining predicate.

use serde::{Deserialize, Serialize};

use crate::algebra::CPoint;
use crate::error::{Error, Result};

/// A uniform cell grid over [alpha_min, alpha_max] x [0, beta_max]. Cell
/// (p, q) has center (alpha_min + (p + 1/2) h, (q + 1/2) h).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub beta_max: f64,
    pub h: f64,
    na: usize,
    nb: usize,
}

impl Grid {
    pub fn new(alpha_min: f64, alpha_max: f64, beta_max: f64, h: f64) -> Result<Grid> {
        if !(h > 0.0) || !(alpha_max > alpha_min) || !(beta_max > 0.0) {
            return Err(Error::EmptyGrid);
        }
        let na = ((alpha_max - alpha_min) / h).round() as usize;
        let nb = (beta_max / h).round() as usize;
        if na == 0 || nb == 0 {
            return Err(Error::EmptyGrid);
        }
        Ok(Grid {
            alpha_min,
            alpha_max,
            beta_max,
            h,
            na,
            nb,
        })
    }

    /// The default window for the built-in domains: [-2, 5] x [0, 8] at
    /// h = 1/16. Every feature of the built-ins is at least four cells wide.
    pub fn standard() -> Grid {
        Grid::new(-2.0, 5.0, 8.0, 1.0 / 16.0).unwrap()
    }

    /// Same window at a caller-chosen cell size.
    pub fn standard_with_h(h: f64) -> Result<Grid> {
        Grid::new(-2.0, 5.0, 8.0, h)
    }

    pub fn na(&self) -> usize {
        self.na
    }
    pub fn nb(&self) -> usize {
        self.nb
    }
    pub fn len(&self) -> usize {
        self.na * self.nb
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, p: usize, q: usize) -> usize {
        q * self.na + p
    }

    pub fn cell(&self, idx: usize) -> (usize, usize) {
        (idx % self.na, idx / self.na)
    }

    pub fn center(&self, p: usize, q: usize) -> (f64, f64) {
        (
            self.alpha_min + (p as f64 + 0.5) * self.h,
            (q as f64 + 0.5) * self.h,
        )
    }

    pub fn center_of(&self, idx: usize) -> (f64, f64) {
        let (p, q) = self.cell(idx);
        self.center(p, q)
    }

    /// The cell containing (alpha, beta), if inside the window. beta = 0 maps
    /// to row 0.
    pub fn cell_of(&self, alpha: f64, beta: f64) -> Option<(usize, usize)> {
        if beta < 0.0 {
            return None;
        }
        let p = ((alpha - self.alpha_min) / self.h).floor();
        let q = (beta / self.h).floor();
        if p < 0.0 || q < 0.0 {
            return None;
        }
        let (p, q) = (p as usize, q as usize);
        if p >= self.na || q >= self.nb {
            return None;
        }
        Some((p, q))
    }
}

/// A boolean combination of open axis-aligned rectangles and real-centered
/// half-disks, used to rasterize regions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionSpec {
    /// Open rectangle (a0, a1) x (b0, b1).
    Rect([f64; 4]),
    /// Union of open rectangles.
    Rects(Vec<[f64; 4]>),
    /// Open half-disk of the given [center, radius] around a real point.
    Halfdisk([f64; 2]),
    Union(Vec<RegionSpec>),
    Intersect(Vec<RegionSpec>),
    /// Difference of the two operands.
    Minus(Box<(RegionSpec, RegionSpec)>),
    Empty,
}

impl RegionSpec {
    pub fn rect(a0: f64, a1: f64, b0: f64, b1: f64) -> RegionSpec {
        RegionSpec::Rect([a0, a1, b0, b1])
    }

    pub fn contains(&self, a: f64, b: f64) -> bool {
        match self {
            RegionSpec::Rect(r) => a > r[0] && a < r[1] && b > r[2] && b < r[3],
            RegionSpec::Rects(rs) => rs
                .iter()
                .any(|r| a > r[0] && a < r[1] && b > r[2] && b < r[3]),
            RegionSpec::Halfdisk(cr) => {
                let da = a - cr[0];
                b >= 0.0 && da * da + b * b < cr[1] * cr[1]
            }
            RegionSpec::Union(parts) => parts.iter().any(|s| s.contains(a, b)),
            RegionSpec::Intersect(parts) => parts.iter().all(|s| s.contains(a, b)),
            RegionSpec::Minus(ab) => ab.0.contains(a, b) && !ab.1.contains(a, b),
            RegionSpec::Empty => false,
        }
    }
}

/// A rasterized open subset of the closed upper half-plane.
#[derive(Clone, PartialEq)]
pub struct PlanarRegion {
    grid: Grid,
    words: Vec<u64>,
}

impl std::fmt::Debug for PlanarRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PlanarRegion({} cells on {}x{} grid, h={})",
            self.count(),
            self.grid.na(),
            self.grid.nb(),
            self.grid.h
        )
    }
}

/// Marks the cells whose center satisfies the spec predicate.
pub fn rasterize(spec: &RegionSpec, grid: Grid) -> Result<PlanarRegion> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut region = PlanarRegion::empty(grid);
    for q in 0..grid.nb() {
        for p in 0..grid.na() {
            let (a, b) = grid.center(p, q);
            if spec.contains(a, b) {
                region.set(p, q);
            }
        }
    }
    Ok(region)
}

impl PlanarRegion {
    pub fn empty(grid: Grid) -> PlanarRegion {
        let words = vec![0u64; (grid.len() + 63) / 64];
        PlanarRegion { grid, words }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn set(&mut self, p: usize, q: usize) {
        let idx = self.grid.index(p, q);
        self.words[idx / 64] |= 1 << (idx % 64);
    }

    pub fn clear(&mut self, p: usize, q: usize) {
        let idx = self.grid.index(p, q);
        self.words[idx / 64] &= !(1 << (idx % 64));
    }

    pub fn get(&self, idx: usize) -> bool {
        self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub fn contains_cell(&self, p: usize, q: usize) -> bool {
        self.get(self.grid.index(p, q))
    }

    /// Whether the cell containing the point is marked.
    pub fn contains_point(&self, alpha: f64, beta: f64) -> bool {
        match self.grid.cell_of(alpha, beta) {
            Some((p, q)) => self.contains_cell(p, q),
            None => false,
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter_cells(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.grid.len()).filter(move |&i| self.get(i))
    }

    fn check_grid(&self, other: &PlanarRegion) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn union(&self, other: &PlanarRegion) -> Result<PlanarRegion> {
        self.check_grid(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        Ok(PlanarRegion {
            grid: self.grid,
            words,
        })
    }

    pub fn intersect(&self, other: &PlanarRegion) -> Result<PlanarRegion> {
        self.check_grid(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        Ok(PlanarRegion {
            grid: self.grid,
            words,
        })
    }

    pub fn minus(&self, other: &PlanarRegion) -> Result<PlanarRegion> {
        self.check_grid(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & !b)
            .collect();
        Ok(PlanarRegion {
            grid: self.grid,
            words,
        })
    }

    /// Complement within the grid window.
    pub fn complement(&self) -> PlanarRegion {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = self.grid.len() % 64;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        PlanarRegion {
            grid: self.grid,
            words,
        }
    }

    pub fn is_subset(&self, other: &PlanarRegion) -> Result<bool> {
        self.check_grid(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0))
    }

    /// 4-connected component labels, plus whether each component owns a
    /// row-0 cell.
    pub fn components(&self) -> ComponentLabels {
        let mut labels = vec![0u32; self.grid.len()];
        let mut meets_real = Vec::new();
        let mut count = 0u32;
        let mut stack = Vec::new();
        let na = self.grid.na();
        for start in 0..self.grid.len() {
            if !self.get(start) || labels[start] != 0 {
                continue;
            }
            count += 1;
            let mut touches = false;
            labels[start] = count;
            stack.push(start);
            while let Some(idx) = stack.pop() {
                let (p, q) = self.grid.cell(idx);
                if q == 0 {
                    touches = true;
                }
                let push = |n: usize, labels: &mut Vec<u32>, stack: &mut Vec<usize>| {
                    if self.get(n) && labels[n] == 0 {
                        labels[n] = count;
                        stack.push(n);
                    }
                };
                if p > 0 {
                    push(idx - 1, &mut labels, &mut stack);
                }
                if p + 1 < na {
                    push(idx + 1, &mut labels, &mut stack);
                }
                if q > 0 {
                    push(idx - na, &mut labels, &mut stack);
                }
                if idx + na < self.grid.len() {
                    push(idx + na, &mut labels, &mut stack);
                }
            }
            meets_real.push(touches);
        }
        ComponentLabels {
            labels,
            count: count as usize,
            meets_real,
        }
    }

    /// Whether two points lie in the same 4-connected component.
    pub fn path_exists(&self, from: CPoint, to: CPoint) -> Result<bool> {
        let a = self
            .grid
            .cell_of(from.alpha, from.beta)
            .filter(|&(p, q)| self.contains_cell(p, q))
            .ok_or(Error::PointOutsideRegion(from.alpha, from.beta))?;
        let b = self
            .grid
            .cell_of(to.alpha, to.beta)
            .filter(|&(p, q)| self.contains_cell(p, q))
            .ok_or(Error::PointOutsideRegion(to.alpha, to.beta))?;
        let labels = self.components();
        Ok(labels.labels[self.grid.index(a.0, a.1)] == labels.labels[self.grid.index(b.0, b.1)])
    }

    /// Squared Euclidean distance (in length units) from each cell center to
    /// the nearest complement cell center, by the exact two-pass transform.
    pub fn squared_dist_to_complement(&self) -> Vec<f64> {
        let (na, nb) = (self.grid.na(), self.grid.nb());
        const INF: f64 = 1e30;
        // pass 1: per column of cells, 1-D distance along beta to complement
        let mut g = vec![0.0f64; na * nb];
        for p in 0..na {
            let col: Vec<f64> = (0..nb)
                .map(|q| {
                    if self.get(self.grid.index(p, q)) {
                        INF
                    } else {
                        0.0
                    }
                })
                .collect();
            let d = dt_1d(&col);
            for q in 0..nb {
                g[self.grid.index(p, q)] = d[q];
            }
        }
        // pass 2: per row, lower envelope over alpha
        let mut out = vec![0.0f64; na * nb];
        for q in 0..nb {
            let row: Vec<f64> = (0..na).map(|p| g[self.grid.index(p, q)]).collect();
            let d = dt_1d(&row);
            let h2 = self.grid.h * self.grid.h;
            for p in 0..na {
                out[self.grid.index(p, q)] = d[p].min(INF) * h2;
            }
        }
        out
    }

    /// Union over real-axis cells of the maximal half-disk (centered on the
    /// axis) fitting inside the region, clipped back to the region.
    pub fn real_disk_union(&self) -> PlanarRegion {
        let sq = self.squared_dist_to_complement();
        let mut out = PlanarRegion::empty(self.grid);
        let na = self.grid.na();
        for p in 0..na {
            let idx = self.grid.index(p, 0);
            if !self.get(idx) {
                continue;
            }
            let rho2 = sq[idx];
            if rho2 <= 0.0 {
                continue;
            }
            let (ca, _) = self.grid.center(p, 0);
            let rho = rho2.sqrt();
            // only cells within the bounding square can be in the disk
            let pmin = self.grid.cell_of((ca - rho).max(self.grid.alpha_min), 0.0);
            let pmax = self
                .grid
                .cell_of((ca + rho).min(self.grid.alpha_max - self.grid.h * 0.5), 0.0);
            let (plo, phi) = match (pmin, pmax) {
                (Some((lo, _)), Some((hi, _))) => (lo, hi),
                _ => (0, na - 1),
            };
            let qmax = ((rho / self.grid.h) as usize + 1).min(self.grid.nb() - 1);
            for q in 0..=qmax {
                for pp in plo..=phi {
                    let (a, b) = self.grid.center(pp, q);
                    if (a - ca) * (a - ca) + b * b < rho2 {
                        out.set(pp, q);
                    }
                }
            }
        }
        out.intersect(self).expect("same grid")
    }

    pub fn meets_real_axis(&self) -> bool {
        (0..self.grid.na()).any(|p| self.contains_cell(p, 0))
    }

    /// Extent of the marked cells as [a0, a1, b0, b1] over full cell
    /// rectangles, or None when empty.
    pub fn bbox(&self) -> Option<[f64; 4]> {
        let mut out: Option<[usize; 4]> = None;
        for idx in self.iter_cells() {
            let (p, q) = self.grid.cell(idx);
            out = Some(match out {
                None => [p, p, q, q],
                Some([p0, p1, q0, q1]) => [p0.min(p), p1.max(p), q0.min(q), q1.max(q)],
            });
        }
        out.map(|[p0, p1, q0, q1]| {
            [
                self.grid.alpha_min + p0 as f64 * self.grid.h,
                self.grid.alpha_min + (p1 + 1) as f64 * self.grid.h,
                q0 as f64 * self.grid.h,
                (q1 + 1) as f64 * self.grid.h,
            ]
        })
    }

    /// Run-length encoding of each row as [start, len] cell spans, for golden
    /// files and reports.
    pub fn rle_rows(&self) -> Vec<Vec<[usize; 2]>> {
        let (na, nb) = (self.grid.na(), self.grid.nb());
        (0..nb)
            .map(|q| {
                let mut row = Vec::new();
                let mut run: Option<(usize, usize)> = None;
                for p in 0..na {
                    if self.contains_cell(p, q) {
                        run = Some(match run {
                            None => (p, 1),
                            Some((s, l)) => (s, l + 1),
                        });
                    } else if let Some((s, l)) = run.take() {
                        row.push([s, l]);
                    }
                }
                if let Some((s, l)) = run {
                    row.push([s, l]);
                }
                row
            })
            .collect()
    }
}

/// 1-D squared distance transform (lower envelope of parabolas), in units of
/// samples.
fn dt_1d(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0f64; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k = 0usize;
    v[0] = 0;
    z[0] = -1e30;
    z[1] = 1e30;
    for q in 1..n {
        let mut s;
        loop {
            let p = v[k];
            s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] {
                if k == 0 {
                    break;
                }
                k -= 1;
            } else {
                break;
            }
        }
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = 1e30;
    }
    let mut k = 0usize;
    for q in 0..n {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let dq = q as f64 - v[k] as f64;
        d[q] = dq * dq + f[v[k]];
    }
    d
}

/// Component labels from a flood fill: `labels[idx]` is 0 for unmarked cells
/// and 1..=count otherwise.
#[derive(Debug, Clone)]
pub struct ComponentLabels {
    pub labels: Vec<u32>,
    pub count: usize,
    pub meets_real: Vec<bool>,
}

impl ComponentLabels {
    pub fn label_of(&self, idx: usize) -> u32 {
        self.labels[idx]
    }

    pub fn component_meets_real(&self, label: u32) -> bool {
        label >= 1 && self.meets_real[(label - 1) as usize]
    }
}

/// The cap/tube radius dist/(ell + 1) guaranteeing that every unit within the
/// cap maps the tube neighborhood into the target open set.
pub fn tube_epsilon(complement_dist: f64, ell: f64) -> Result<f64> {
    if !(complement_dist > 0.0) {
        return Err(Error::NonpositiveDistance(complement_dist));
    }
    Ok(complement_dist / (ell + 1.0))
}
