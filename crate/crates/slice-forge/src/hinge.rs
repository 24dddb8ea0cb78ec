//! The combinatorial engine: shadowing and strong-hinging tests, the chain
//! equivalence closure over (cell, latitude-band) nodes, and the domain
//! classifiers (spear-simple, sphere-connected, main sail, hinged) aggregated
//! into one report.
//!
//! The closure replaces explicit chain enumeration with a union-find
//! fixpoint. Nodes are (trace cell, latitude band); all merges stay within
//! one cell, so classes refine spheres by construction. Three rules apply:
//! real-row identification, band identification (maximal latitude runs), and
//! the transfer rule: for a latitude pair and a connected component of the
//! intersection of the two half-slices, once one cell of the component has
//! its two latitudes identified, every cell of the component does. Components
//! owning a real cell transfer immediately (their real cells are pre-merged),
//! which is exactly strong hinging; components without real cells transfer
//! only through an already-merged witness, which is exactly a double step.
//! Every merge keeps its justification, so equivalences can be replayed as
//! explicit chain certificates.

use serde::Serialize;

use crate::algebra::{decompose, CPoint, Quaternion, Unit};
use crate::domains::AxialDomain;
use crate::error::{Error, Result};
use crate::planar::PlanarRegion;

/// Whether a path inside the intersection of the two half-slice traces joins
/// the two trace points.
pub fn shadow_test(
    dom: &AxialDomain,
    r: f64,
    r2: f64,
    z_from: CPoint,
    z_to: CPoint,
) -> Result<bool> {
    let e = dom.slice_region(r).intersect(&dom.slice_region(r2))?;
    e.path_exists(z_from, z_to)
}

/// Whether the component of the trace point inside the intersection of the
/// two half-slice traces reaches the real axis (a shared real anchor).
pub fn strongly_hinged_test(dom: &AxialDomain, r: f64, r2: f64, z: CPoint) -> Result<bool> {
    let e = dom.slice_region(r).intersect(&dom.slice_region(r2))?;
    if !e.contains_point(z.alpha, z.beta) {
        return Err(Error::PointOutsideRegion(z.alpha, z.beta));
    }
    let labels = e.components();
    let (p, q) = e.grid().cell_of(z.alpha, z.beta).unwrap();
    let label = labels.label_of(e.grid().index(p, q));
    Ok(labels.component_meets_real(label))
}

#[derive(Debug, Clone, Copy)]
pub struct ClosureOptions {
    /// Disable to keep only real-row and band identifications (no transfer
    /// rule, hence no strong hinging and no double steps).
    pub enable_transfer: bool,
    /// Shuffle the latitude-pair processing order; the final partition must
    /// not depend on it.
    pub pair_order_seed: Option<u64>,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            enable_transfer: true,
            pair_order_seed: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum EdgeKind {
    /// Bands of a real-row cell: the same quaternion point on every slice.
    RealRow,
    /// Transfer through a component owning the real anchor cell.
    StronglyHinged { anchor: usize },
    /// Transfer through an already-merged witness cell of a component with
    /// no real cells.
    Transfer { witness: usize },
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    node_a: u32,
    node_b: u32,
    /// Latitude sample indices justifying each side.
    lat_a: u32,
    lat_b: u32,
    kind: EdgeKind,
}

/// The union-find fixpoint over (cell, band) nodes, with merge provenance.
pub struct HingeClosure {
    lats: Vec<f64>,
    /// Maximal latitude-index runs per cell.
    bands: Vec<Vec<(u32, u32)>>,
    node_offset: Vec<u32>,
    parent: Vec<u32>,
    edges: Vec<Edge>,
    cell_edges: std::collections::HashMap<usize, Vec<u32>>,
    pub rounds: usize,
    pub converged: bool,
}

fn find(parent: &mut [u32], mut a: u32) -> u32 {
    while parent[a as usize] != a {
        parent[a as usize] = parent[parent[a as usize] as usize];
        a = parent[a as usize];
    }
    a
}

/// Computes the latitude bands of every cell: maximal runs of sampled
/// latitudes whose half-slice trace contains the cell.
fn cell_bands(dom: &AxialDomain) -> Vec<Vec<(u32, u32)>> {
    let grid = dom.grid();
    let m = dom.latitudes().len();
    let mut bands = vec![Vec::new(); grid.len()];
    for li in 0..m {
        let region = dom.region_at(li);
        for idx in region.iter_cells() {
            let runs: &mut Vec<(u32, u32)> = &mut bands[idx];
            match runs.last_mut() {
                Some(last) if last.1 + 1 == li as u32 => last.1 = li as u32,
                _ => runs.push((li as u32, li as u32)),
            }
        }
    }
    bands
}

/// Runs the closure with default options. Requires a speared domain.
pub fn hinge_closure(dom: &AxialDomain) -> Result<HingeClosure> {
    hinge_closure_with(dom, ClosureOptions::default())
}

pub fn hinge_closure_with(dom: &AxialDomain, opts: ClosureOptions) -> Result<HingeClosure> {
    let (speared, witness) = dom.is_speared();
    if !speared {
        return Err(Error::NotSpeared {
            latitude: witness.map(|w| w.latitude).unwrap_or(f64::NAN),
        });
    }
    let grid = dom.grid();
    let m = dom.latitudes().len();
    let bands = cell_bands(dom);
    let mut node_offset = vec![0u32; grid.len() + 1];
    for idx in 0..grid.len() {
        node_offset[idx + 1] = node_offset[idx] + bands[idx].len() as u32;
    }
    let node_count = node_offset[grid.len()] as usize;
    let mut closure = HingeClosure {
        lats: dom.latitudes().to_vec(),
        bands,
        node_offset,
        parent: (0..node_count as u32).collect(),
        edges: Vec::new(),
        cell_edges: std::collections::HashMap::new(),
        rounds: 0,
        converged: false,
    };

    // real-row identification
    for p in 0..grid.na() {
        let idx = grid.index(p, 0);
        for b in 1..closure.bands[idx].len() {
            let (la, lb) = (closure.bands[idx][b - 1].0, closure.bands[idx][b].0);
            closure.union(idx, b - 1, b, la, lb, EdgeKind::RealRow);
        }
    }

    if !opts.enable_transfer {
        closure.converged = true;
        return Ok(closure);
    }

    let mut pairs: Vec<(u32, u32)> = (0..m as u32)
        .flat_map(|i| (i + 1..m as u32).map(move |j| (i, j)))
        .collect();
    if let Some(seed) = opts.pair_order_seed {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        pairs.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    }

    const MAX_ROUNDS: usize = 64;
    for round in 0..MAX_ROUNDS {
        closure.rounds = round + 1;
        let mut merged_any = false;
        for &(li, lj) in &pairs {
            let e = dom
                .region_at(li as usize)
                .intersect(dom.region_at(lj as usize))
                .expect("same grid");
            if e.is_empty() {
                continue;
            }
            let comp = e.components();
            // group cells by component, ascending
            let mut cells_by_comp: Vec<Vec<u32>> = vec![Vec::new(); comp.count];
            for idx in e.iter_cells() {
                cells_by_comp[(comp.label_of(idx) - 1) as usize].push(idx as u32);
            }
            for (c, cells) in cells_by_comp.iter().enumerate() {
                let real_anchor = if comp.meets_real[c] {
                    cells
                        .iter()
                        .copied()
                        .find(|&idx| (idx as usize) < grid.na())
                } else {
                    None
                };
                let witness = match real_anchor {
                    Some(anchor) => Some((anchor, EdgeKind::StronglyHinged {
                        anchor: anchor as usize,
                    })),
                    None => cells
                        .iter()
                        .copied()
                        .find(|&idx| closure.same_node_class(idx as usize, li, lj))
                        .map(|w| (w, EdgeKind::Transfer { witness: w as usize })),
                };
                let Some((_, kind)) = witness else { continue };
                for &idx in cells {
                    if closure.merge_pair(idx as usize, li, lj, kind) {
                        merged_any = true;
                    }
                }
            }
        }
        if !merged_any {
            closure.converged = true;
            break;
        }
    }
    Ok(closure)
}

impl HingeClosure {
    pub fn latitudes(&self) -> &[f64] {
        &self.lats
    }

    fn band_index(&self, cell: usize, lat_idx: u32) -> Option<usize> {
        self.bands[cell]
            .iter()
            .position(|&(lo, hi)| lo <= lat_idx && lat_idx <= hi)
    }

    fn node(&self, cell: usize, band: usize) -> u32 {
        self.node_offset[cell] + band as u32
    }

    fn same_node_class(&self, cell: usize, li: u32, lj: u32) -> bool {
        match (self.band_index(cell, li), self.band_index(cell, lj)) {
            (Some(a), Some(b)) => {
                if a == b {
                    return true;
                }
                let (na, nb) = (self.node(cell, a), self.node(cell, b));
                // read-only find
                let mut x = na;
                while self.parent[x as usize] != x {
                    x = self.parent[x as usize];
                }
                let mut y = nb;
                while self.parent[y as usize] != y {
                    y = self.parent[y as usize];
                }
                x == y
            }
            _ => false,
        }
    }

    fn union(
        &mut self,
        cell: usize,
        band_a: usize,
        band_b: usize,
        lat_a: u32,
        lat_b: u32,
        kind: EdgeKind,
    ) -> bool {
        let (na, nb) = (self.node(cell, band_a), self.node(cell, band_b));
        let (ra, rb) = (find(&mut self.parent, na), find(&mut self.parent, nb));
        if ra == rb {
            return false;
        }
        self.parent[ra as usize] = rb;
        let edge_id = self.edges.len() as u32;
        self.edges.push(Edge {
            node_a: na,
            node_b: nb,
            lat_a,
            lat_b,
            kind,
        });
        self.cell_edges.entry(cell).or_default().push(edge_id);
        true
    }

    fn merge_pair(&mut self, cell: usize, li: u32, lj: u32, kind: EdgeKind) -> bool {
        let (Some(a), Some(b)) = (self.band_index(cell, li), self.band_index(cell, lj)) else {
            return false;
        };
        if a == b {
            return false;
        }
        self.union(cell, a, b, li, lj, kind)
    }

    /// Whether the two latitudes of the same trace point fall in one closure
    /// class.
    pub fn same_class(&self, grid: crate::planar::Grid, z: CPoint, r1: f64, r2: f64) -> Result<bool> {
        let (p, q) = grid
            .cell_of(z.alpha, z.beta)
            .ok_or(Error::PointOutsideRegion(z.alpha, z.beta))?;
        let cell = grid.index(p, q);
        let l1 = self
            .lat_index_near(cell, r1)
            .ok_or(Error::PointOutsideRegion(z.alpha, z.beta))?;
        let l2 = self
            .lat_index_near(cell, r2)
            .ok_or(Error::PointOutsideRegion(z.alpha, z.beta))?;
        Ok(self.same_node_class(cell, l1, l2))
    }

    /// The sampled latitude index nearest to r among those whose half-slice
    /// contains the cell.
    fn lat_index_near(&self, cell: usize, r: f64) -> Option<u32> {
        let mut best: Option<(f64, u32)> = None;
        for &(lo, hi) in &self.bands[cell] {
            for li in lo..=hi {
                let d = (self.lats[li as usize] - r).abs();
                if best.map_or(true, |(bd, _)| d < bd) {
                    best = Some((d, li));
                }
            }
        }
        best.map(|(_, li)| li)
    }

    /// Number of distinct classes among the bands of a cell.
    pub fn class_count_at(&mut self, cell: usize) -> usize {
        let n = self.bands[cell].len();
        let mut roots: Vec<u32> = (0..n)
            .map(|b| {
                let node = self.node_offset[cell] + b as u32;
                find(&mut self.parent, node)
            })
            .collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    /// The partition as stable signatures, for order-independence tests.
    pub fn partition_signature(&mut self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = (0..self.parent.len() as u32)
            .map(|n| (n, find(&mut self.parent, n)))
            .collect();
        // canonical root: smallest member of each class
        let mut min_of_root = std::collections::HashMap::new();
        for &(n, r) in &out {
            let e = min_of_root.entry(r).or_insert(n);
            if n < *e {
                *e = n;
            }
        }
        for entry in out.iter_mut() {
            entry.1 = min_of_root[&entry.1];
        }
        out
    }
}

/// Witness data for a failed classifier.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    SpearSimple {
        r: f64,
        r2: f64,
        component_bbox: [f64; 4],
    },
    SConnected {
        cell: [f64; 2],
        latitude_intervals: Vec<[f64; 2]>,
    },
    Hinged {
        cell: [f64; 2],
        r: f64,
        r2: f64,
    },
}

/// True iff every cell has all its latitude bands in one closure class.
pub fn is_hinged(dom: &AxialDomain, closure: &mut HingeClosure) -> (bool, Option<Witness>) {
    let grid = dom.grid();
    for cell in 0..grid.len() {
        if closure.bands[cell].len() > 1 && closure.class_count_at(cell) > 1 {
            let (p, q) = grid.cell(cell);
            let (a, b) = grid.center(p, q);
            // first two bands in distinct classes
            let b0 = closure.bands[cell][0];
            let mut r2 = closure.lats[closure.bands[cell][1].0 as usize];
            for band in &closure.bands[cell][1..] {
                if !closure.same_node_class(cell, b0.0, band.0) {
                    r2 = closure.lats[band.0 as usize];
                    break;
                }
            }
            return (
                false,
                Some(Witness::Hinged {
                    cell: [a, b],
                    r: closure.lats[b0.0 as usize],
                    r2,
                }),
            );
        }
    }
    (true, None)
}

/// True iff for every sampled latitude pair each component of the
/// intersection of the two half-slice traces reaches the real axis. The
/// distinguished marker latitudes (+-sqrt(2)/2, always in the sample set) are
/// scanned first, so when the verdict is negative the reported witness lands
/// on the documented configuration whenever that pair already fails.
pub fn is_spear_simple(dom: &AxialDomain) -> Result<(bool, Option<Witness>)> {
    let (speared, witness) = dom.is_speared();
    if !speared {
        return Err(Error::NotSpeared {
            latitude: witness.map(|w| w.latitude).unwrap_or(f64::NAN),
        });
    }
    let m = dom.latitudes().len();
    let grid = dom.grid();
    let marker = std::f64::consts::FRAC_1_SQRT_2;
    let marker_pair: Vec<(usize, usize)> = {
        let find = |r: f64| {
            dom.latitudes()
                .iter()
                .position(|&s| (s - r).abs() < 1e-12)
        };
        match (find(-marker), find(marker)) {
            (Some(a), Some(b)) => vec![(a, b)],
            _ => vec![],
        }
    };
    let pairs = marker_pair
        .into_iter()
        .chain((0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))));
    for (li, lj) in pairs {
        let e = dom.region_at(li).intersect(dom.region_at(lj))?;
        if e.is_empty() {
            continue;
        }
        let comp = e.components();
        for label in 1..=comp.count as u32 {
            if !comp.component_meets_real(label) {
                let mut floating = PlanarRegion::empty(grid);
                for idx in e.iter_cells() {
                    if comp.label_of(idx) == label {
                        let (p, q) = grid.cell(idx);
                        floating.set(p, q);
                    }
                }
                return Ok((
                    false,
                    Some(Witness::SpearSimple {
                        r: dom.latitudes()[li],
                        r2: dom.latitudes()[lj],
                        component_bbox: floating.bbox().unwrap_or([0.0; 4]),
                    }),
                ));
            }
        }
    }
    Ok((true, None))
}

/// True iff every cell's latitude set is one interval (the axial reduction of
/// sphere connectivity).
pub fn is_s_connected(dom: &AxialDomain) -> (bool, Option<Witness>) {
    let bands = cell_bands(dom);
    let grid = dom.grid();
    for (cell, runs) in bands.iter().enumerate() {
        if runs.len() > 1 {
            let (p, q) = grid.cell(cell);
            let (a, b) = grid.center(p, q);
            return (
                false,
                Some(Witness::SConnected {
                    cell: [a, b],
                    latitude_intervals: runs
                        .iter()
                        .map(|&(lo, hi)| {
                            [dom.latitudes()[lo as usize], dom.latitudes()[hi as usize]]
                        })
                        .collect(),
                }),
            );
        }
    }
    (true, None)
}

/// A sampled latitude whose half-slice trace contains every other, if any.
pub fn main_sail(dom: &AxialDomain) -> Option<f64> {
    let m = dom.latitudes().len();
    'candidate: for j in 0..m {
        let candidate = dom.region_at(j);
        for i in 0..m {
            if i != j && !dom.region_at(i).is_subset(candidate).unwrap_or(false) {
                continue 'candidate;
            }
        }
        return Some(dom.latitudes()[j]);
    }
    None
}

/// The aggregated verdicts of the four classifiers at the sampled resolution.
#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub spear_simple: bool,
    pub s_connected: bool,
    pub has_main_sail: bool,
    pub hinged: bool,
    pub main_sail_latitude: Option<f64>,
    pub witnesses: Vec<Witness>,
}

impl ClassReport {
    pub fn flags(&self) -> [bool; 4] {
        [
            self.spear_simple,
            self.s_connected,
            self.has_main_sail,
            self.hinged,
        ]
    }
}

/// Runs all four classifiers and enforces the implication invariants: each of
/// spear-simple, sphere-connectedness and a main sail forces hingedness.
pub fn classify(dom: &AxialDomain) -> Result<ClassReport> {
    let (spear_simple, ss_witness) = is_spear_simple(dom)?;
    let (s_connected, sc_witness) = is_s_connected(dom);
    let sail = main_sail(dom);
    let mut closure = hinge_closure(dom)?;
    let (hinged, h_witness) = is_hinged(dom, &mut closure);
    let mut witnesses = Vec::new();
    witnesses.extend(ss_witness);
    witnesses.extend(sc_witness);
    witnesses.extend(h_witness);
    let report = ClassReport {
        spear_simple,
        s_connected,
        has_main_sail: sail.is_some(),
        hinged,
        main_sail_latitude: sail,
        witnesses,
    };
    if !hinged && (spear_simple || s_connected || sail.is_some()) {
        return Err(Error::InternalInconsistency(format!(
            "hinged=false with spear_simple={spear_simple} s_connected={s_connected} main_sail={:?}",
            sail
        )));
    }
    Ok(report)
}

/// The reference classification of the eight built-ins, in the order
/// spear-simple, sphere-connected, main sail, hinged.
pub const GOLDEN_TABLE: [(&str, [bool; 4]); 8] = [
    ("omega0", [true, true, true, true]),
    ("omega1", [true, false, true, true]),
    ("omega2", [false, true, true, true]),
    ("omega3", [false, false, true, true]),
    ("omega0p", [true, true, false, true]),
    ("omega1p", [true, false, false, true]),
    ("omega2p", [false, true, false, true]),
    ("omega3p", [false, false, false, true]),
];

// ---------------------------------------------------------------------------
// chain certificates

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimpleKind {
    /// Within one connected component of the point's sphere.
    Sphere,
    /// Shadowed against a shared real anchor.
    StronglyHinged,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainStep {
    Simple {
        at: usize,
        kind: SimpleKind,
    },
    /// Double step spanning points[span0] .. points[span1 + 1], transferring
    /// equivalence along the shadowing pair through the witness trace point.
    Double {
        span: [usize; 2],
        witness: [f64; 2],
    },
}

/// An explicit chain: points with step annotations, replayable against the
/// shadowing and strong-hinging tests.
#[derive(Debug, Clone, Serialize)]
pub struct ChainCertificate {
    pub points: Vec<[f64; 4]>,
    pub steps: Vec<ChainStep>,
}

impl ChainCertificate {
    pub fn length(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    pub fn double_step_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, ChainStep::Double { .. }))
            .count()
    }
}

struct ChainBuilder<'a> {
    dom: &'a AxialDomain,
    closure: &'a HingeClosure,
    points: Vec<[f64; 4]>,
    steps: Vec<ChainStep>,
    /// Exact trace coordinates to use instead of the cell center (the query
    /// sphere).
    trace_override: std::collections::HashMap<usize, (f64, f64)>,
}

impl<'a> ChainBuilder<'a> {
    fn trace_of(&self, cell: usize) -> (f64, f64) {
        if let Some(&t) = self.trace_override.get(&cell) {
            return t;
        }
        let (p, q) = self.dom.grid().cell(cell);
        self.dom.grid().center(p, q)
    }

    fn point(&self, cell: usize, lat_idx: u32) -> [f64; 4] {
        let (a, b) = self.trace_of(cell);
        Unit::on_latitude(self.closure.lats[lat_idx as usize], 0.0)
            .phi(CPoint::new(a, b))
            .as_array()
    }

    /// Appends a band move (same sphere component) if the latitude changes.
    fn band_move(&mut self, cell: usize, to_lat: u32, current: &mut u32) {
        if *current == to_lat {
            return;
        }
        self.steps.push(ChainStep::Simple {
            at: self.points.len() - 1,
            kind: SimpleKind::Sphere,
        });
        self.points.push(self.point(cell, to_lat));
        *current = to_lat;
    }

    /// Emits the chain from the entry latitude to the exit latitude at one
    /// cell, using only merge edges older than `max_edge`. The entry point
    /// must already be the last emitted point.
    fn emit(&mut self, cell: usize, from_lat: u32, to_lat: u32, max_edge: u32) -> Result<()> {
        let from_band = self
            .closure
            .band_index(cell, from_lat)
            .ok_or(Error::PointOutsideDomain)?;
        let to_band = self
            .closure
            .band_index(cell, to_lat)
            .ok_or(Error::PointOutsideDomain)?;
        let mut current = from_lat;
        if from_band == to_band {
            self.band_move(cell, to_lat, &mut current);
            return Ok(());
        }
        let path = self
            .edge_path(cell, from_band, to_band, max_edge)
            .ok_or_else(|| {
                Error::InternalInconsistency("merged nodes without an edge path".into())
            })?;
        for (edge_id, forward) in path {
            let edge = self.closure.edges[edge_id as usize];
            let (el_from, el_to) = if forward {
                (edge.lat_a, edge.lat_b)
            } else {
                (edge.lat_b, edge.lat_a)
            };
            match edge.kind {
                EdgeKind::RealRow => {
                    // a real point is its own anchor on every slice
                    self.band_move(cell, el_from, &mut current);
                    self.steps.push(ChainStep::Simple {
                        at: self.points.len() - 1,
                        kind: SimpleKind::StronglyHinged,
                    });
                    self.points.push(self.point(cell, el_to));
                    current = el_to;
                }
                EdgeKind::StronglyHinged { .. } => {
                    self.band_move(cell, el_from, &mut current);
                    self.steps.push(ChainStep::Simple {
                        at: self.points.len() - 1,
                        kind: SimpleKind::StronglyHinged,
                    });
                    self.points.push(self.point(cell, el_to));
                    current = el_to;
                }
                EdgeKind::Transfer { witness } => {
                    self.band_move(cell, el_from, &mut current);
                    let span_start = self.points.len() - 1;
                    self.points.push(self.point(witness, el_from));
                    self.emit(witness, el_from, el_to, edge_id)?;
                    self.points.push(self.point(cell, el_to));
                    let (wp, wq) = self.dom.grid().cell(witness);
                    let (wa, wb) = self.dom.grid().center(wp, wq);
                    self.steps.push(ChainStep::Double {
                        span: [span_start, self.points.len() - 2],
                        witness: [wa, wb],
                    });
                    current = el_to;
                }
            }
        }
        self.band_move(cell, to_lat, &mut current);
        Ok(())
    }

    /// Breadth-first path between two bands of a cell through merge edges
    /// older than `max_edge`; edges are (id, traversed-forward).
    fn edge_path(
        &self,
        cell: usize,
        from_band: usize,
        to_band: usize,
        max_edge: u32,
    ) -> Option<Vec<(u32, bool)>> {
        let empty = Vec::new();
        let edge_ids = self.closure.cell_edges.get(&cell).unwrap_or(&empty);
        let n = self.closure.bands[cell].len();
        let offset = self.closure.node_offset[cell];
        let mut prev: Vec<Option<(usize, u32, bool)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        seen[from_band] = true;
        queue.push_back(from_band);
        while let Some(b) = queue.pop_front() {
            if b == to_band {
                let mut path = Vec::new();
                let mut cur = to_band;
                while cur != from_band {
                    let (pb, id, fwd) = prev[cur].unwrap();
                    path.push((id, fwd));
                    cur = pb;
                }
                path.reverse();
                return Some(path);
            }
            for &id in edge_ids {
                if id >= max_edge {
                    continue;
                }
                let edge = self.closure.edges[id as usize];
                let (ba, bb) = (
                    (edge.node_a - offset) as usize,
                    (edge.node_b - offset) as usize,
                );
                let step = if ba == b {
                    Some((bb, true))
                } else if bb == b {
                    Some((ba, false))
                } else {
                    None
                };
                if let Some((nb, fwd)) = step {
                    if !seen[nb] {
                        seen[nb] = true;
                        prev[nb] = Some((b, id, fwd));
                        queue.push_back(nb);
                    }
                }
            }
        }
        None
    }
}

/// Replays the closure's merge history into an explicit chain connecting the
/// two points, or None when their nodes sit in distinct classes (not
/// equivalent at this resolution).
pub fn chain_find(
    dom: &AxialDomain,
    closure: &HingeClosure,
    x: Quaternion,
    y: Quaternion,
) -> Result<Option<ChainCertificate>> {
    if !dom.contains(x) || !dom.contains(y) {
        return Err(Error::PointOutsideDomain);
    }
    let dx = decompose(x);
    let dy = decompose(y);
    let grid = dom.grid();
    let cx = grid
        .cell_of(dx.alpha, dx.beta)
        .ok_or(Error::PointOutsideDomain)?;
    let cy = grid
        .cell_of(dy.alpha, dy.beta)
        .ok_or(Error::PointOutsideDomain)?;
    if cx != cy {
        // equivalence refines spheres
        return Ok(None);
    }
    let cell = grid.index(cx.0, cx.1);
    let lx = closure
        .lat_index_near(cell, dx.unit.latitude())
        .ok_or(Error::PointOutsideDomain)?;
    let ly = closure
        .lat_index_near(cell, dy.unit.latitude())
        .ok_or(Error::PointOutsideDomain)?;
    if !closure.same_node_class(cell, lx, ly) {
        return Ok(None);
    }
    // one sphere component: a single simple step suffices
    if closure.band_index(cell, lx) == closure.band_index(cell, ly) {
        return Ok(Some(ChainCertificate {
            points: vec![x.as_array(), y.as_array()],
            steps: vec![ChainStep::Simple {
                at: 0,
                kind: SimpleKind::Sphere,
            }],
        }));
    }
    let mut builder = ChainBuilder {
        dom,
        closure,
        points: Vec::new(),
        steps: Vec::new(),
        trace_override: std::collections::HashMap::from([(cell, (dx.alpha, dx.beta))]),
    };
    builder.points.push(x.as_array());
    builder.emit(cell, lx, ly, u32::MAX)?;
    // land exactly on the requested endpoint
    let last = builder.points.last().unwrap();
    if (Quaternion::from_array(*last) - y).abs() > 1e-9 {
        builder.steps.push(ChainStep::Simple {
            at: builder.points.len() - 1,
            kind: SimpleKind::Sphere,
        });
        builder.points.push(y.as_array());
    }
    Ok(Some(ChainCertificate {
        points: builder.points,
        steps: builder.steps,
    }))
}

/// Re-validates a certificate against the shadowing and strong-hinging
/// tests: every simple step must hold at the sampled resolution, every double
/// step must carry a genuine shadowing path, the steps must cover all chain
/// indices, and double spans must be properly nested.
pub fn validate_chain(dom: &AxialDomain, cert: &ChainCertificate) -> Result<()> {
    let t = cert.length();
    if t == 0 {
        return Ok(());
    }
    // spheres are identified at raster resolution: traces within one cell
    let tol = dom.grid().h;
    let mut covered = vec![false; t];
    let trace = |p: [f64; 4]| {
        let d = decompose(Quaternion::from_array(p));
        (d.cpoint(), d.unit.latitude())
    };
    for step in &cert.steps {
        match step {
            ChainStep::Simple { at, kind } => {
                covered[*at] = true;
                let (za, ra) = trace(cert.points[*at]);
                let (zb, rb) = trace(cert.points[*at + 1]);
                if (za.alpha - zb.alpha).abs() > tol || (za.beta - zb.beta).abs() > tol {
                    return Err(Error::InternalInconsistency(
                        "simple step leaves the sphere".into(),
                    ));
                }
                match kind {
                    SimpleKind::Sphere => {
                        // the latitude interval between the two units must
                        // stay inside the trace: the band is one zone
                        let n = 8;
                        for s in 0..=n {
                            let r = ra + (rb - ra) * s as f64 / n as f64;
                            if !dom.slice_region(r).contains_point(za.alpha, za.beta) {
                                return Err(Error::InternalInconsistency(format!(
                                    "sphere step crosses a missing latitude {r}"
                                )));
                            }
                        }
                    }
                    SimpleKind::StronglyHinged => {
                        if !strongly_hinged_test(dom, ra, rb, za)? {
                            return Err(Error::InternalInconsistency(
                                "strong hinging does not hold".into(),
                            ));
                        }
                    }
                }
            }
            ChainStep::Double { span, witness } => {
                let [lo, hi] = *span;
                covered[lo] = true;
                covered[hi] = true;
                let (z_outer, r_out) = trace(cert.points[lo]);
                let (z_in, _) = trace(cert.points[lo + 1]);
                let (z_in2, _) = trace(cert.points[hi]);
                let (z_outer2, r_out2) = trace(cert.points[hi + 1]);
                if (z_outer.alpha - z_outer2.alpha).abs() > tol
                    || (z_outer.beta - z_outer2.beta).abs() > tol
                {
                    return Err(Error::InternalInconsistency(
                        "double step legs end on different spheres".into(),
                    ));
                }
                if (z_in.alpha - witness[0]).abs() > tol
                    || (z_in.beta - witness[1]).abs() > tol
                    || (z_in2.alpha - witness[0]).abs() > tol
                {
                    return Err(Error::InternalInconsistency(
                        "double step witness mismatch".into(),
                    ));
                }
                if !shadow_test(dom, r_out, r_out2, z_outer, z_in)? {
                    return Err(Error::InternalInconsistency(
                        "double step without a shadowing path".into(),
                    ));
                }
            }
        }
    }
    if !covered.iter().all(|&c| c) {
        return Err(Error::InternalInconsistency(
            "steps do not cover the chain".into(),
        ));
    }
    // proper nesting of double spans
    let doubles: Vec<[usize; 2]> = cert
        .steps
        .iter()
        .filter_map(|s| match s {
            ChainStep::Double { span, .. } => Some(*span),
            _ => None,
        })
        .collect();
    for a in 0..doubles.len() {
        for b in a + 1..doubles.len() {
            let (x, y) = (doubles[a], doubles[b]);
            let nested = (y[0] > x[0] && y[1] < x[1]) || (x[0] > y[0] && x[1] < y[1]);
            let disjoint = y[0] > x[1] || x[0] > y[1];
            if !nested && !disjoint {
                return Err(Error::InternalInconsistency(
                    "intertwined double steps".into(),
                ));
            }
        }
    }
    Ok(())
}
