//! Quaternionic domain model: latitude-parameterized axial domains built from
//! planar width profiles, sail attachments, per-unit half-slice regions,
//! speared/slice checks, spine and core, symmetric completion, and local
//! shrinking to a slice domain.
//!
//! An axial domain is determined by the trace of its half-slices: the trace
//! at a unit depends only on the unit's latitude (its k-coefficient), so all
//! sphere-level questions reduce to questions about latitude sets.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{decompose, Quaternion, Unit};
use crate::error::{Error, Result};
use crate::planar::{rasterize, tube_epsilon, Grid, PlanarRegion, RegionSpec};

pub const DEFAULT_N_LAT: usize = 129;

/// One piece of a piecewise width profile over [-1, 1]. JSON form:
/// {"interval": [r0, r1], "kind": {"affine": [a, b]} | {"constant": c} | "zero"}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthPiece {
    pub interval: [f64; 2],
    pub kind: WidthKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WidthKind {
    /// a*r + b on the piece.
    Affine([f64; 2]),
    Constant(f64),
    Zero,
}

/// A piecewise width profile w: [-1, 1] -> [0, 2] with w(+-1) = 0. Pieces are
/// evaluated on open intervals; at a shared endpoint the value is the minimum
/// of the adjacent limits (missing pieces count as zero), which encodes lower
/// semicontinuity for characteristic-function profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthFunction {
    pub pieces: Vec<WidthPiece>,
}

impl WidthFunction {
    pub fn new(pieces: Vec<WidthPiece>) -> Result<WidthFunction> {
        let w = WidthFunction { pieces };
        w.validate()?;
        Ok(w)
    }

    pub fn zero() -> WidthFunction {
        WidthFunction { pieces: vec![] }
    }

    fn validate(&self) -> Result<()> {
        for piece in &self.pieces {
            let [r0, r1] = piece.interval;
            if !(r0 < r1) || r0 < -1.0 - 1e-12 || r1 > 1.0 + 1e-12 {
                return Err(Error::InvalidWidth(format!(
                    "bad piece interval [{r0}, {r1}]"
                )));
            }
            for r in [r0, r1, 0.5 * (r0 + r1)] {
                let v = piece_value(piece, r);
                if !(-1e-9..=2.0 + 1e-9).contains(&v) {
                    return Err(Error::InvalidWidth(format!(
                        "value {v} at r = {r} outside [0, 2]"
                    )));
                }
            }
        }
        for r in [-1.0, 1.0] {
            if self.eval(r) > 1e-12 {
                return Err(Error::InvalidWidth(format!("w({r}) must vanish")));
            }
        }
        Ok(())
    }

    pub fn eval(&self, r: f64) -> f64 {
        let mut interior: Option<f64> = None;
        let mut endpoint: Option<f64> = None;
        let mut touching = 0usize;
        for piece in &self.pieces {
            let [r0, r1] = piece.interval;
            if r > r0 && r < r1 {
                interior = Some(interior.unwrap_or(0.0).max(piece_value(piece, r)));
            } else if r == r0 || r == r1 {
                touching += 1;
                let v = piece_value(piece, r);
                endpoint = Some(match endpoint {
                    None => v,
                    Some(e) => e.min(v),
                });
            }
        }
        match (interior, endpoint) {
            (Some(v), _) => v,
            // a junction keeps the minimum of the one-sided limits; an
            // endpoint bordering uncovered land has limit zero on that side
            (None, Some(e)) => {
                if touching >= 2 {
                    e
                } else {
                    0.0
                }
            }
            (None, None) => 0.0,
        }
    }

    /// The endpoints of all pieces, used to seed latitude sampling.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.pieces
            .iter()
            .flat_map(|p| p.interval.into_iter())
            .collect()
    }
}

fn piece_value(piece: &WidthPiece, r: f64) -> f64 {
    match piece.kind {
        WidthKind::Affine([a, b]) => a * r + b,
        WidthKind::Constant(c) => c,
        WidthKind::Zero => 0.0,
    }
}

/// An open latitude interval. `hi = 1` is treated inclusively so a sail can
/// cover a polar cap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatInterval {
    pub lo: f64,
    pub hi: f64,
}

impl LatInterval {
    pub fn new(lo: f64, hi: f64) -> LatInterval {
        LatInterval { lo, hi }
    }

    pub fn contains(&self, r: f64) -> bool {
        r > self.lo && (r < self.hi || (self.hi >= 1.0 && r >= 1.0))
    }
}

/// A congruent region glued above a set of latitudes. `d_prime` is the full
/// sail profile; `d` is the part that must already lie inside the base domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SailAttachment {
    #[serde(rename = "latitudes")]
    pub latitude_set: Vec<LatInterval>,
    #[serde(rename = "Dprime")]
    pub d_prime: RegionSpec,
    #[serde(rename = "D")]
    pub d: RegionSpec,
}

impl SailAttachment {
    pub fn contains_latitude(&self, r: f64) -> bool {
        self.latitude_set.iter().any(|iv| iv.contains(r))
    }
}

/// How the base half-slice trace depends on the latitude.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseProfile {
    /// The two-rectangles-with-strips family: the trace at latitude r is
    /// R union (-1, w1(r)) x (3, 4) union (2 - w2(r), 3) x (3, 4) with
    /// R = (-1, 0) x [0, 4) union (2, 3) x [0, 4).
    Widths {
        w1: WidthFunction,
        w2: WidthFunction,
    },
    /// The same half-disk at every latitude (a Euclidean ball with real
    /// center).
    HalfDisk { center: f64, radius: f64 },
    /// Explicit bands over a default trace (synthetic test domains).
    Table {
        default: RegionSpec,
        bands: Vec<(LatInterval, RegionSpec)>,
    },
}

impl BaseProfile {
    fn spec_at(&self, r: f64) -> RegionSpec {
        match self {
            BaseProfile::Widths { w1, w2 } => {
                let mut parts = vec![
                    RegionSpec::rect(-1.0, 0.0, -1.0, 4.0),
                    RegionSpec::rect(2.0, 3.0, -1.0, 4.0),
                ];
                let v1 = w1.eval(r);
                if v1 > 0.0 {
                    parts.push(RegionSpec::rect(-1.0, v1, 3.0, 4.0));
                }
                let v2 = w2.eval(r);
                if v2 > 0.0 {
                    parts.push(RegionSpec::rect(2.0 - v2, 3.0, 3.0, 4.0));
                }
                RegionSpec::Union(parts)
            }
            BaseProfile::HalfDisk { center, radius } => RegionSpec::Halfdisk([*center, *radius]),
            BaseProfile::Table { default, bands } => {
                let mut parts = vec![default.clone()];
                for (iv, spec) in bands {
                    if iv.contains(r) {
                        parts.push(spec.clone());
                    }
                }
                RegionSpec::Union(parts)
            }
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            BaseProfile::Widths { w1, w2 } => {
                let mut b = w1.breakpoints();
                b.extend(w2.breakpoints());
                b
            }
            BaseProfile::HalfDisk { .. } => vec![],
            BaseProfile::Table { bands, .. } => {
                bands.iter().flat_map(|(iv, _)| [iv.lo, iv.hi]).collect()
            }
        }
    }
}

/// A speared quaternionic domain encoded as a latitude-parameterized family
/// of planar regions plus optional attached sails.
#[derive(Debug, Clone)]
pub struct AxialDomain {
    grid: Grid,
    base: BaseProfile,
    sails: Vec<SailAttachment>,
    lats: Vec<f64>,
    regions: Vec<PlanarRegion>,
    name: Option<String>,
}

/// The latitude sample list: `n_lat` uniform samples over [-1, 1], the exact
/// points +-sqrt(2)/2, and every profile breakpoint shifted inward to each
/// side so characteristic-function pieces are probed strictly inside their
/// open intervals. The shift is at least one raster cell: a smaller offset
/// would create planar features narrower than a cell (strip gaps threading
/// between cell centers), which the raster cannot certify. The list is
/// symmetrized around 0.
pub fn latitude_samples(n_lat: usize, breakpoints: &[f64], h: f64) -> Vec<f64> {
    let step = 2.0 / (n_lat - 1) as f64;
    let shift = (0.5 * step).max(h);
    let mut lats: Vec<f64> = (0..n_lat).map(|i| -1.0 + step * i as f64).collect();
    let half = std::f64::consts::FRAC_1_SQRT_2;
    lats.push(half);
    lats.push(-half);
    for &e in breakpoints {
        for v in [e - shift, e + shift] {
            if (-1.0..=1.0).contains(&v) {
                lats.push(v);
            }
        }
    }
    let mirrored: Vec<f64> = lats.iter().map(|&r| -r).collect();
    lats.extend(mirrored);
    lats.sort_by(f64::total_cmp);
    lats.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    lats
}

impl AxialDomain {
    /// Realizes the two-rectangles-with-strips family, with optional sails.
    /// Sail validity conditions are checked at raster level.
    pub fn build_axial(
        w1: WidthFunction,
        w2: WidthFunction,
        sails: Vec<SailAttachment>,
        grid: Grid,
        n_lat: usize,
    ) -> Result<AxialDomain> {
        w1.validate()?;
        w2.validate()?;
        AxialDomain::from_profile(BaseProfile::Widths { w1, w2 }, sails, grid, n_lat, None)
    }

    /// A Euclidean ball with real center, as a constant-profile domain.
    pub fn ball(center: f64, radius: f64, grid: Grid, n_lat: usize) -> Result<AxialDomain> {
        AxialDomain::from_profile(
            BaseProfile::HalfDisk { center, radius },
            vec![],
            grid,
            n_lat,
            Some(format!("ball({center},{radius})")),
        )
    }

    /// Explicit latitude bands over a default trace, for synthetic domains.
    pub fn from_table(
        default: RegionSpec,
        bands: Vec<(LatInterval, RegionSpec)>,
        sails: Vec<SailAttachment>,
        grid: Grid,
        n_lat: usize,
    ) -> Result<AxialDomain> {
        AxialDomain::from_profile(BaseProfile::Table { default, bands }, sails, grid, n_lat, None)
    }

    fn from_profile(
        base: BaseProfile,
        sails: Vec<SailAttachment>,
        grid: Grid,
        n_lat: usize,
        name: Option<String>,
    ) -> Result<AxialDomain> {
        if n_lat < 33 || n_lat % 2 == 0 {
            return Err(Error::InvalidConfig(format!(
                "n_lat must be odd and at least 33 (got {n_lat})"
            )));
        }
        let mut breakpoints = base.breakpoints();
        for sail in &sails {
            breakpoints.extend(sail.latitude_set.iter().flat_map(|iv| [iv.lo, iv.hi]));
        }
        let lats = latitude_samples(n_lat, &breakpoints, grid.h);
        let mut dom = AxialDomain {
            grid,
            base,
            sails,
            lats,
            regions: Vec::new(),
            name,
        };
        dom.regions = dom
            .lats
            .iter()
            .map(|&r| dom.rasterize_at(r))
            .collect::<Result<Vec<_>>>()?;
        dom.validate_sails()?;
        Ok(dom)
    }

    pub fn with_name(mut self, name: &str) -> AxialDomain {
        self.name = Some(name.to_string());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn latitudes(&self) -> &[f64] {
        &self.lats
    }

    pub fn sails(&self) -> &[SailAttachment] {
        &self.sails
    }

    pub fn region_at(&self, lat_index: usize) -> &PlanarRegion {
        &self.regions[lat_index]
    }

    fn rasterize_at(&self, r: f64) -> Result<PlanarRegion> {
        let mut parts = vec![self.base.spec_at(r)];
        for sail in &self.sails {
            if sail.contains_latitude(r) {
                parts.push(sail.d_prime.clone());
            }
        }
        rasterize(&RegionSpec::Union(parts), self.grid)
    }

    /// The half-slice trace at latitude r, including any sail present there.
    pub fn slice_region(&self, r: f64) -> PlanarRegion {
        if let Ok(i) = self
            .lats
            .binary_search_by(|a| a.partial_cmp(&r).unwrap())
        {
            return self.regions[i].clone();
        }
        self.rasterize_at(r).expect("grid already validated")
    }

    /// Index of the sampled latitude nearest to r.
    pub fn nearest_lat_index(&self, r: f64) -> usize {
        match self.lats.binary_search_by(|a| a.partial_cmp(&r).unwrap()) {
            Ok(i) => i,
            Err(i) => {
                if i == 0 {
                    0
                } else if i >= self.lats.len() {
                    self.lats.len() - 1
                } else if (self.lats[i] - r).abs() < (r - self.lats[i - 1]).abs() {
                    i
                } else {
                    i - 1
                }
            }
        }
    }

    /// Whether the quaternion lies in the domain (raster check on its trace).
    pub fn contains(&self, x: Quaternion) -> bool {
        let d = decompose(x);
        let region = self.slice_region(d.unit.latitude());
        region.contains_point(d.alpha, d.beta)
    }

    /// Sail conditions, checked at raster level:
    /// 1. each latitude interval is a genuine band (nonempty, inside [-1, 1]);
    /// 2. D is a subset of D';
    /// 3. D meets every component of D', and some sampled latitude of each
    ///    band carries D inside the base trace;
    /// 4. the circularization of D' minus D misses the base domain.
    fn validate_sails(&self) -> Result<()> {
        for sail in &self.sails {
            let dp = rasterize(&sail.d_prime, self.grid)?;
            let d = rasterize(&sail.d, self.grid)?;
            for iv in &sail.latitude_set {
                if !(iv.lo < iv.hi) || iv.lo < -1.0 || iv.hi > 1.0 {
                    return Err(Error::InvalidSail {
                        condition: 1,
                        detail: format!("bad latitude interval ({}, {})", iv.lo, iv.hi),
                    });
                }
            }
            if !d.is_subset(&dp)? {
                return Err(Error::InvalidSail {
                    condition: 2,
                    detail: "D is not contained in D'".into(),
                });
            }
            let labels = dp.components();
            let mut touched = vec![false; labels.count];
            for idx in d.iter_cells() {
                let l = labels.label_of(idx);
                if l > 0 {
                    touched[(l - 1) as usize] = true;
                }
            }
            if labels.count == 0 || touched.iter().any(|&t| !t) {
                return Err(Error::InvalidSail {
                    condition: 3,
                    detail: "some component of D' does not meet D".into(),
                });
            }
            for iv in &sail.latitude_set {
                let anchored = self.lats.iter().any(|&r| {
                    iv.contains(r)
                        && d.is_subset(&rasterize(&self.base.spec_at(r), self.grid).unwrap())
                            .unwrap_or(false)
                });
                if !anchored {
                    return Err(Error::InvalidSail {
                        condition: 3,
                        detail: format!(
                            "no sampled latitude in ({}, {}) carries D inside the base trace",
                            iv.lo, iv.hi
                        ),
                    });
                }
            }
            let leftover = dp.minus(&d)?;
            for &r in self.lats.iter() {
                let base = rasterize(&self.base.spec_at(r), self.grid)?;
                if !leftover.intersect(&base)?.is_empty() {
                    return Err(Error::InvalidSail {
                        condition: 4,
                        detail: format!(
                            "circularization of D' minus D meets the base trace at latitude {r}"
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    /// True iff at every sampled latitude each component of the half-slice
    /// trace owns a real point. The witness is the offending latitude and the
    /// bounding box of the floating component.
    pub fn is_speared(&self) -> (bool, Option<SpearWitness>) {
        for (&r, region) in self.lats.iter().zip(&self.regions) {
            let labels = region.components();
            for label in 1..=labels.count as u32 {
                if !labels.component_meets_real(label) {
                    let mut comp = PlanarRegion::empty(self.grid);
                    for idx in region.iter_cells() {
                        if labels.label_of(idx) == label {
                            let (p, q) = self.grid.cell(idx);
                            comp.set(p, q);
                        }
                    }
                    return (
                        false,
                        Some(SpearWitness {
                            latitude: r,
                            component_bbox: comp.bbox().unwrap_or([0.0; 4]),
                        }),
                    );
                }
            }
        }
        (true, None)
    }

    /// True iff the domain meets the real axis and, for each sampled
    /// latitude, the full slice (upper trace at r glued to the reflected
    /// trace at -r along shared real cells) is connected.
    pub fn is_slice_domain(&self) -> bool {
        if !self
            .regions
            .iter()
            .any(|region| region.meets_real_axis())
        {
            return false;
        }
        for (&r, upper) in self.lats.iter().zip(&self.regions) {
            let lower = self.slice_region(-r);
            if !full_slice_connected(upper, &lower) {
                return false;
            }
        }
        true
    }

    /// The trace of the intersection of all half-slices, its real-meeting
    /// part (the core) and the union of maximal real-centered half-disks
    /// inside it (the spine).
    pub fn spine_core(&self) -> (PlanarRegion, PlanarRegion) {
        let mut inter = self.regions[0].clone();
        for region in &self.regions[1..] {
            inter = inter.intersect(region).expect("same grid");
        }
        let spine = inter.real_disk_union();
        let labels = inter.components();
        let mut core = PlanarRegion::empty(self.grid);
        for idx in inter.iter_cells() {
            if labels.component_meets_real(labels.label_of(idx)) {
                let (p, q) = self.grid.cell(idx);
                core.set(p, q);
            }
        }
        (spine, core)
    }

    /// The union of all half-slice traces: the planar trace of the symmetric
    /// completion.
    pub fn symmetric_completion_region(&self) -> PlanarRegion {
        let mut out = self.regions[0].clone();
        for region in &self.regions[1..] {
            out = out.union(region).expect("same grid");
        }
        out
    }

    /// Shrinks the domain to a slice domain around x0: a real-centered ball
    /// for real x0, otherwise a ball joined to a tube around a path from the
    /// ball to x0's trace, swept over a cap of units. The returned descriptor
    /// re-verifies as a slice domain contained in the domain.
    pub fn local_slice_domain(&self, x0: Quaternion) -> Result<LocalSliceDomain> {
        let d = decompose(x0);
        let lat = d.unit.latitude();
        let region = self.slice_region(lat);
        if !region.contains_point(d.alpha, d.beta) {
            return Err(Error::PointOutsideDomain);
        }
        let (_, inter) = self.spine_core();
        let inter_sq = inter.squared_dist_to_complement();

        if d.beta <= self.grid.h {
            // real (or raster-real) point: the maximal real-centered ball
            let (p, q) = self.grid.cell_of(d.alpha, 0.0).ok_or(Error::PointOutsideDomain)?;
            let idx = self.grid.index(p, q);
            let delta = inter_sq[idx].sqrt();
            if delta <= 0.0 {
                return Err(Error::PointOutsideDomain);
            }
            let (ca, _) = self.grid.center(p, q);
            return Ok(LocalSliceDomain {
                center: ca,
                delta,
                path: vec![],
                epsilon: 0.0,
                base_unit: d.unit,
            });
        }

        // path from a real-meeting anchor to the trace of x0
        let labels = region.components();
        let (p0, q0) = self
            .grid
            .cell_of(d.alpha, d.beta)
            .ok_or(Error::PointOutsideDomain)?;
        let target = self.grid.index(p0, q0);
        let label = labels.label_of(target);
        // pick the real cell of this component with the deepest ball in the
        // all-latitude intersection
        let mut anchor: Option<(usize, f64)> = None;
        for p in 0..self.grid.na() {
            let idx = self.grid.index(p, 0);
            if region.get(idx)
                && labels.label_of(idx) == label
                && inter_sq[idx] > 0.0
                && anchor.is_none_or(|(_, best)| inter_sq[idx] > best)
            {
                anchor = Some((idx, inter_sq[idx]));
            }
        }
        let (anchor_idx, delta_sq) = anchor.ok_or(Error::NotSpeared { latitude: lat })?;
        let delta = delta_sq.sqrt();
        let path = bfs_path(&region, anchor_idx, target)
            .ok_or(Error::PointOutsideDomain)?;
        // keep the part of the path from its last exit of the anchor disk
        let (ca, _) = self.grid.center_of(anchor_idx);
        let mut t0 = 0;
        for (i, &idx) in path.iter().enumerate() {
            let (a, b) = self.grid.center_of(idx);
            if (a - ca) * (a - ca) + b * b < delta * delta {
                t0 = i;
            }
        }
        let tail: Vec<usize> = path[t0..].to_vec();
        // distance from the swept path to the complement of the domain
        let mut dist = f64::INFINITY;
        let mut ell: f64 = 0.0;
        for &idx in &tail {
            let (a, b) = self.grid.center_of(idx);
            ell = ell.max(b);
            dist = dist.min(self.dist_to_complement(a, b, lat));
        }
        let epsilon = tube_epsilon(dist, ell)?;
        let out = LocalSliceDomain {
            center: ca,
            delta,
            path: tail.iter().map(|&i| self.grid.center_of(i)).collect(),
            epsilon,
            base_unit: d.unit,
        };
        self.verify_local(&out)?;
        Ok(out)
    }

    /// Distance from a trace point at a given latitude to the complement of
    /// the domain, minimized over sampled latitudes with the worst-case
    /// azimuth term. The quaternionic distance between points on units with
    /// latitude gap theta is sqrt((a-c)^2 + (b-d)^2 + 2bd(1-cos theta)).
    fn dist_to_complement(&self, a: f64, b: f64, lat: f64) -> f64 {
        // the same-latitude complement bounds the search window
        let own = self.nearest_lat_index(lat);
        let mut best = f64::INFINITY;
        for idx in 0..self.grid.len() {
            if self.regions[own].get(idx) {
                continue;
            }
            let (c, d) = self.grid.center_of(idx);
            let sq = (a - c) * (a - c) + (b - d) * (b - d);
            if sq < best {
                best = sq;
            }
        }
        let mut best = best.sqrt();
        let s0 = (1.0 - lat * lat).max(0.0).sqrt();
        for (&r, region) in self.lats.iter().zip(&self.regions) {
            let cos_gap = (lat * r + s0 * (1.0 - r * r).max(0.0).sqrt()).clamp(-1.0, 1.0);
            let kappa = 2.0 * b * (1.0 - cos_gap);
            // scan only the window that can still beat the current best
            let lo = self.grid.cell_of((a - best).max(self.grid.alpha_min), 0.0);
            let hi = self
                .grid
                .cell_of((a + best).min(self.grid.alpha_max - 0.5 * self.grid.h), 0.0);
            let (plo, phi) = match (lo, hi) {
                (Some((l, _)), Some((h, _))) => (l, h),
                _ => (0, self.grid.na() - 1),
            };
            let qlo = (((b - best) / self.grid.h).floor().max(0.0)) as usize;
            let qhi = (((b + best) / self.grid.h).ceil() as usize).min(self.grid.nb() - 1);
            for q in qlo..=qhi {
                for p in plo..=phi {
                    let idx = self.grid.index(p, q);
                    if region.get(idx) {
                        continue;
                    }
                    let (c, d) = self.grid.center_of(idx);
                    let sq = (a - c) * (a - c) + (b - d) * (b - d) + kappa * d;
                    if sq < best * best {
                        best = sq.sqrt();
                    }
                }
            }
        }
        // leaving the grid window also leaves the domain
        best.min(a - self.grid.alpha_min)
            .min(self.grid.alpha_max - a)
            .min(self.grid.beta_max - b)
    }

    fn verify_local(&self, local: &LocalSliceDomain) -> Result<()> {
        // the swept tube must stay inside every half-slice whose latitude
        // circle meets the cap, and must reach into the anchor ball
        let lat = local.base_unit.latitude();
        let eps2 = local.epsilon * local.epsilon;
        let mut reaches_ball = false;
        for &(a, b) in &local.path {
            if (a - local.center) * (a - local.center) + b * b < local.delta * local.delta {
                reaches_ball = true;
            }
        }
        if !local.path.is_empty() && !reaches_ball {
            return Err(Error::InternalInconsistency(
                "local tube does not meet its anchor ball".into(),
            ));
        }
        let s0 = (1.0 - lat * lat).max(0.0).sqrt();
        for (&r, region) in self.lats.iter().zip(&self.regions) {
            let chord_sq = 2.0 - 2.0 * (lat * r + s0 * (1.0 - r * r).max(0.0).sqrt());
            if chord_sq >= eps2 {
                continue;
            }
            for &(a, b) in &local.path {
                if !region.contains_point(a, b) {
                    return Err(Error::InternalInconsistency(format!(
                        "local tube leaves the half-slice at latitude {r}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Result of shrinking the domain around a point: ball center and radius on
/// the real axis, the tube path (empty for real points), and the cap radius.
#[derive(Debug, Clone, Serialize)]
pub struct LocalSliceDomain {
    pub center: f64,
    pub delta: f64,
    pub path: Vec<(f64, f64)>,
    pub epsilon: f64,
    #[serde(skip)]
    pub base_unit: Unit,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpearWitness {
    pub latitude: f64,
    pub component_bbox: [f64; 4],
}

/// Connectivity of the full slice: components of the upper and the reflected
/// lower trace glue along shared real cells.
fn full_slice_connected(upper: &PlanarRegion, lower: &PlanarRegion) -> bool {
    let lu = upper.components();
    let ll = lower.components();
    let total = lu.count + ll.count;
    if total == 0 {
        return true;
    }
    if lu.count == 0 || ll.count == 0 {
        // nothing to glue through: single-sided slice must be one component
        return lu.count.max(ll.count) == 1;
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut Vec<usize>, mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    let grid = upper.grid();
    for p in 0..grid.na() {
        let idx = grid.index(p, 0);
        let (a, b) = (lu.label_of(idx), ll.label_of(idx));
        if a > 0 && b > 0 {
            let (ra, rb) = (
                find(&mut parent, (a - 1) as usize),
                find(&mut parent, lu.count + (b - 1) as usize),
            );
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    let root = find(&mut parent, 0);
    (0..total).all(|i| find(&mut parent, i) == root)
}

fn bfs_path(region: &PlanarRegion, from: usize, to: usize) -> Option<Vec<usize>> {
    let grid = region.grid();
    let mut prev = vec![usize::MAX; grid.len()];
    let mut queue = std::collections::VecDeque::new();
    prev[from] = from;
    queue.push_back(from);
    while let Some(idx) = queue.pop_front() {
        if idx == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        let (p, q) = grid.cell(idx);
        let mut try_push = |n: usize| {
            if region.get(n) && prev[n] == usize::MAX {
                prev[n] = idx;
                queue.push_back(n);
            }
        };
        if p > 0 {
            try_push(idx - 1);
        }
        if p + 1 < grid.na() {
            try_push(idx + 1);
        }
        if q > 0 {
            try_push(idx - grid.na());
        }
        if idx + grid.na() < grid.len() {
            try_push(idx + grid.na());
        }
    }
    None
}

// ---------------------------------------------------------------------------
// built-in domains

/// Names of the eight classified built-ins, in table order.
pub const BUILTIN_NAMES: [&str; 8] = [
    "omega0", "omega1", "omega2", "omega3", "omega0p", "omega1p", "omega2p", "omega3p",
];

fn affine(r0: f64, r1: f64, a: f64, b: f64) -> WidthPiece {
    WidthPiece {
        interval: [r0, r1],
        kind: WidthKind::Affine([a, b]),
    }
}

fn constant(r0: f64, r1: f64, c: f64) -> WidthPiece {
    WidthPiece {
        interval: [r0, r1],
        kind: WidthKind::Constant(c),
    }
}

/// The tent profile 2 - 2|r|.
fn widths_omega0() -> (WidthFunction, WidthFunction) {
    let w = WidthFunction {
        pieces: vec![affine(-1.0, 0.0, 2.0, 2.0), affine(0.0, 1.0, -2.0, 2.0)],
    };
    (w.clone(), w)
}

/// The double-tent profile: both widths equal, sum exceeding 2 exactly on
/// (-3/4, -1/4) and (1/4, 3/4).
fn widths_omega1() -> (WidthFunction, WidthFunction) {
    let w = WidthFunction {
        pieces: vec![
            affine(-1.0, -0.5, 4.0, 4.0),
            affine(-0.5, 0.0, -4.0, 0.0),
            affine(0.0, 0.5, 4.0, 0.0),
            affine(0.5, 1.0, -4.0, 4.0),
        ],
    };
    (w.clone(), w)
}

/// Concave plateau profiles, mirrored: sum exceeds 2 exactly on (-2/3, 2/3).
fn widths_omega2() -> (WidthFunction, WidthFunction) {
    let w1 = WidthFunction {
        pieces: vec![
            affine(-1.0, -0.2, 2.0, 2.0),
            constant(-0.2, 0.6, 1.6),
            affine(0.6, 1.0, -4.0, 4.0),
        ],
    };
    let w2 = WidthFunction {
        pieces: vec![
            affine(-1.0, -0.6, 4.0, 4.0),
            constant(-0.6, 0.2, 1.6),
            affine(0.2, 1.0, -2.0, 2.0),
        ],
    };
    (w1, w2)
}

/// Characteristic-function profiles: left strip on (-3/4, -1/2) and
/// (-1/4, 1/4); right strip on (-1/4, 1/4) and (1/2, 3/4).
fn widths_omega3() -> (WidthFunction, WidthFunction) {
    let w1 = WidthFunction {
        pieces: vec![constant(-0.75, -0.5, 1.5), constant(-0.25, 0.25, 1.5)],
    };
    let w2 = WidthFunction {
        pieces: vec![constant(-0.25, 0.25, 1.5), constant(0.5, 0.75, 1.5)],
    };
    (w1, w2)
}

/// The single polar-cap sail used by the primed variants of the first three
/// built-ins: profile (2, 4) x (3, 4) anchored on the square (2, 3) x (3, 4).
fn cap_sail(rho: f64) -> SailAttachment {
    SailAttachment {
        latitude_set: vec![LatInterval::new(rho, 1.0)],
        d_prime: RegionSpec::rect(2.0, 4.0, 3.0, 4.0),
        d: RegionSpec::rect(2.0, 3.0, 3.0, 4.0),
    }
}

/// The identical pair of tall sails of the fourth primed built-in: profile
/// (1/2, 3/2) x (3, 6) anchored on (1/2, 3/2) x (3, 4), over the two bands
/// (-3/4, -1/2) and (1/2, 3/4).
fn double_sail() -> SailAttachment {
    SailAttachment {
        latitude_set: vec![LatInterval::new(-0.75, -0.5), LatInterval::new(0.5, 0.75)],
        d_prime: RegionSpec::rect(0.5, 1.5, 3.0, 6.0),
        d: RegionSpec::rect(0.5, 1.5, 3.0, 4.0),
    }
}

/// Builds a named built-in domain. Accepts the eight classified names plus
/// `ball(c,R)`.
pub fn builtin(name: &str, grid: Grid, n_lat: usize) -> Result<Arc<AxialDomain>> {
    let trimmed = name.trim();
    if let Some(args) = trimmed
        .strip_prefix("ball(")
        .and_then(|s| s.strip_suffix(')'))
    {
        let parts: Vec<&str> = args.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::InvalidConfig(format!("cannot parse `{name}`")));
        }
        let c: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad center in `{name}`")))?;
        let radius: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad radius in `{name}`")))?;
        return Ok(Arc::new(
            AxialDomain::ball(c, radius, grid, n_lat)?.with_name(trimmed),
        ));
    }
    let (widths, sail): ((WidthFunction, WidthFunction), Option<SailAttachment>) = match trimmed {
        "omega0" => (widths_omega0(), None),
        "omega1" => (widths_omega1(), None),
        "omega2" => (widths_omega2(), None),
        "omega3" => (widths_omega3(), None),
        "omega0p" => (widths_omega0(), Some(cap_sail(0.5))),
        "omega1p" => (widths_omega1(), Some(cap_sail(0.75))),
        "omega2p" => (widths_omega2(), Some(cap_sail(2.0 / 3.0))),
        "omega3p" => (widths_omega3(), Some(double_sail())),
        other => {
            return Err(Error::InvalidConfig(format!("unknown domain `{other}`")));
        }
    };
    let dom = AxialDomain::build_axial(
        widths.0,
        widths.1,
        sail.into_iter().collect(),
        grid,
        n_lat,
    )?;
    Ok(Arc::new(dom.with_name(trimmed)))
}

/// JSON form of a custom domain configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainConfig {
    pub w1: WidthFunction,
    pub w2: WidthFunction,
    #[serde(default)]
    pub sails: Vec<SailAttachment>,
    pub grid: Option<GridConfig>,
    pub n_lat: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridConfig {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub beta_max: f64,
    pub h: f64,
}

impl DomainConfig {
    pub fn build(self, default_grid: Grid, default_n_lat: usize) -> Result<Arc<AxialDomain>> {
        let grid = match self.grid {
            Some(g) => Grid::new(g.alpha_min, g.alpha_max, g.beta_max, g.h)?,
            None => default_grid,
        };
        let n_lat = self.n_lat.unwrap_or(default_n_lat);
        Ok(Arc::new(AxialDomain::build_axial(
            self.w1, self.w2, self.sails, grid, n_lat,
        )?))
    }
}
