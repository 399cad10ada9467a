//! Closed regions in an internal space `R^m x F`.
//!
//! A [`Region`] is a finite union of closed axis-aligned boxes, each attached
//! to a fiber (an element of the finite group `F`). All geometry is exact:
//! box corners are [`QuadExt`] scalars, and the three classification
//! primitives — point location, region comparison, and regularization — work
//! on the grid induced by the box corner coordinates, never on samples.
//!
//! The grid trick used throughout: collecting every box endpoint on every
//! axis cuts the fiber into cells that each box either fully contains or
//! misses entirely, so one exact interior point (a midpoint) decides a whole
//! cell. Degenerate boxes (zero width on some axis) are legal and behave as
//! the lower-dimensional closed sets they are.
//!
//! Real dimension is capped at 3: cell grids grow like the product of the
//! per-axis corner counts, which is the honest cost of exactness.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fingroup::{FinAbGroup, FinElem, FinHom};
use crate::numeric::QuadExt;

/// Largest supported real dimension for region geometry.
pub const MAX_REAL_DIM: usize = 3;

#[derive(Debug, Error)]
pub enum RegionError {
    #[error("real dimension {0} exceeds the supported maximum {MAX_REAL_DIM}")]
    DimTooLarge(usize),
    #[error("box has {got} intervals, region has real dimension {want}")]
    DimMismatch { got: usize, want: usize },
    #[error("interval with lo > hi on axis {0}")]
    EmptyInterval(usize),
    #[error("fiber element does not belong to the region's group")]
    ForeignFiber,
}

/// A point of the internal space: real coordinates plus a fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPoint {
    pub real: Vec<QuadExt>,
    pub fin: FinElem,
}

impl HPoint {
    pub fn new(real: Vec<QuadExt>, fin: FinElem) -> Self {
        HPoint { real, fin }
    }

    /// A purely real point (trivial fiber).
    pub fn real_only(real: Vec<QuadExt>) -> Self {
        HPoint { real, fin: FinElem(Vec::new()) }
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.real.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        if !self.fin.0.is_empty() {
            write!(f, "; {:?}", self.fin.0)?;
        }
        write!(f, ")")
    }
}

/// A closed axis-aligned box `[lo_1, hi_1] x ... x [lo_m, hi_m]`.
///
/// `lo == hi` on an axis is allowed (a degenerate box: a facet, segment, or
/// point). The empty box does not exist — construction rejects `lo > hi`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RBox(Vec<(QuadExt, QuadExt)>);

impl RBox {
    pub fn new(intervals: Vec<(QuadExt, QuadExt)>) -> Result<Self, RegionError> {
        for (a, (lo, hi)) in intervals.iter().enumerate() {
            if lo > hi {
                return Err(RegionError::EmptyInterval(a));
            }
        }
        Ok(RBox(intervals))
    }

    /// One-dimensional closed interval.
    pub fn interval(lo: QuadExt, hi: QuadExt) -> Result<Self, RegionError> {
        Self::new(vec![(lo, hi)])
    }

    /// The unique zero-dimensional box (the point of `R^0`).
    pub fn point0() -> Self {
        RBox(Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn intervals(&self) -> &[(QuadExt, QuadExt)] {
        &self.0
    }

    /// Closed containment of a real point.
    pub fn contains(&self, x: &[QuadExt]) -> bool {
        debug_assert_eq!(x.len(), self.0.len());
        self.0.iter().zip(x).all(|((lo, hi), v)| lo <= v && v <= hi)
    }

    /// True when every axis has positive width.
    pub fn is_full_dim(&self) -> bool {
        self.0.iter().all(|(lo, hi)| lo < hi)
    }

    /// Axis-wise containment of another box.
    pub fn contains_box(&self, other: &RBox) -> bool {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .all(|((lo, hi), (olo, ohi))| lo <= olo && ohi <= hi)
    }

    pub fn intersect(&self, other: &RBox) -> Option<RBox> {
        debug_assert_eq!(self.dim(), other.dim());
        let mut out = Vec::with_capacity(self.dim());
        for ((alo, ahi), (blo, bhi)) in self.0.iter().zip(&other.0) {
            let lo = alo.max_of(blo);
            let hi = ahi.min_of(bhi);
            if lo > hi {
                return None;
            }
            out.push((lo, hi));
        }
        Some(RBox(out))
    }

    pub fn translate(&self, shift: &[QuadExt]) -> RBox {
        debug_assert_eq!(shift.len(), self.dim());
        RBox(
            self.0
                .iter()
                .zip(shift)
                .map(|((lo, hi), s)| (lo + s, hi + s))
                .collect(),
        )
    }

    pub fn negate(&self) -> RBox {
        RBox(self.0.iter().map(|(lo, hi)| (-hi, -lo)).collect())
    }

    /// Pulls every face inward by `delta`; `None` when an axis collapses.
    pub fn shrink(&self, delta: &QuadExt) -> Option<RBox> {
        let mut out = Vec::with_capacity(self.dim());
        for (lo, hi) in &self.0 {
            let (nlo, nhi) = (lo + delta, hi - delta);
            if nlo > nhi {
                return None;
            }
            out.push((nlo, nhi));
        }
        Some(RBox(out))
    }

    /// Per-axis widths `hi - lo`.
    pub fn widths(&self) -> Vec<QuadExt> {
        self.0.iter().map(|(lo, hi)| hi - lo).collect()
    }
}

/// Exact classification of a point against a closed region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Location {
    Outside,
    Boundary,
    Interior,
}

/// Exact set-theoretic relation between two closed regions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionOrder {
    Equal,
    /// Proper subset: the left region is contained in the right one.
    ASubsetB,
    /// Proper superset: the right region is contained in the left one.
    BSubsetA,
    /// Nonempty on both sides with empty intersection.
    Disjoint,
    /// Overlapping, with points private to each side.
    Incomparable,
}

/// Extent summary of a region, for convergence checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionExtent {
    /// Largest single-axis extent of any nonempty fiber.
    pub extent: QuadExt,
    /// Number of nonempty fibers.
    pub fiber_count: usize,
}

/// A finite union of closed boxes attached to fibers of `F`, inside
/// `R^m x F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    m: usize,
    group: FinAbGroup,
    fibers: BTreeMap<FinElem, Vec<RBox>>,
}

impl Region {
    pub fn empty(m: usize, group: FinAbGroup) -> Result<Self, RegionError> {
        if m > MAX_REAL_DIM {
            return Err(RegionError::DimTooLarge(m));
        }
        Ok(Region { m, group, fibers: BTreeMap::new() })
    }

    /// Region made of a single box at a single fiber.
    pub fn single(
        m: usize,
        group: FinAbGroup,
        fiber: FinElem,
        bx: RBox,
    ) -> Result<Self, RegionError> {
        let mut r = Region::empty(m, group)?;
        r.add_box(fiber, bx)?;
        Ok(r)
    }

    /// A purely real region (trivial group) from one box.
    pub fn real_box(bx: RBox) -> Result<Self, RegionError> {
        Region::single(bx.dim(), FinAbGroup::trivial(), FinElem(Vec::new()), bx)
    }

    pub fn add_box(&mut self, fiber: FinElem, bx: RBox) -> Result<(), RegionError> {
        if !self.group.contains(&fiber) {
            return Err(RegionError::ForeignFiber);
        }
        if bx.dim() != self.m {
            return Err(RegionError::DimMismatch { got: bx.dim(), want: self.m });
        }
        self.fibers.entry(fiber).or_default().push(bx);
        self.canonicalize();
        Ok(())
    }

    pub fn real_dim(&self) -> usize {
        self.m
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.is_empty()
    }

    /// Iterates nonempty fibers with their box lists (sorted by fiber).
    pub fn fibers(&self) -> impl Iterator<Item = (&FinElem, &[RBox])> {
        self.fibers.iter().map(|(f, b)| (f, b.as_slice()))
    }

    pub fn boxes_at(&self, fiber: &FinElem) -> &[RBox] {
        self.fibers.get(fiber).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// The unique nonempty fiber, if there is exactly one.
    pub fn single_fiber(&self) -> Option<&FinElem> {
        let mut it = self.fibers.keys();
        match (it.next(), it.next()) {
            (Some(f), None) => Some(f),
            _ => None,
        }
    }

    /// True when some box has positive width on every axis (equivalently,
    /// the region has nonempty interior: a finite union of boxes has interior
    /// points exactly where a single full-dimensional box provides them).
    pub fn has_interior(&self) -> bool {
        if self.m == 0 {
            return !self.fibers.is_empty();
        }
        self.fibers.values().flatten().any(|b| b.is_full_dim())
    }

    /// Drops duplicate and absorbed boxes, empties, and sorts for canonical
    /// ordering. Idempotent; applied after every mutation.
    fn canonicalize(&mut self) {
        let mut dead_fibers = Vec::new();
        for (fiber, boxes) in self.fibers.iter_mut() {
            boxes.sort();
            boxes.dedup();
            let snapshot = boxes.clone();
            boxes.retain(|b| {
                !snapshot
                    .iter()
                    .any(|other| other != b && other.contains_box(b))
            });
            // A tie pair (equal boxes) was removed by dedup; among distinct
            // boxes absorption is antisymmetric, so retain keeps maximal ones.
            if boxes.is_empty() {
                dead_fibers.push(fiber.clone());
            }
        }
        for f in dead_fibers {
            self.fibers.remove(&f);
        }
    }

    /// Exact point classification: interior, boundary, or outside.
    ///
    /// Interior means some neighborhood of the point (within its fiber —
    /// fibers are discrete components) lies in the region; this is decided
    /// by probing the `2^m` grid cells incident to the point.
    pub fn locate(&self, p: &HPoint) -> Location {
        assert_eq!(p.real.len(), self.m, "point dimension mismatch");
        assert!(self.group.contains(&p.fin), "point fiber outside group");
        let Some(boxes) = self.fibers.get(&p.fin) else {
            return Location::Outside;
        };
        if !boxes.iter().any(|b| b.contains(&p.real)) {
            return Location::Outside;
        }
        if self.m == 0 {
            // A fiber point is open in the discrete factor.
            return Location::Interior;
        }
        // Per-axis sorted corner coordinates of this fiber's boxes.
        let coords: Vec<Vec<&QuadExt>> = (0..self.m)
            .map(|a| {
                let mut cs: Vec<&QuadExt> = boxes
                    .iter()
                    .flat_map(|b| {
                        let (lo, hi) = &b.intervals()[a];
                        [lo, hi]
                    })
                    .collect();
                cs.sort();
                cs.dedup();
                cs
            })
            .collect();
        // For each corner direction, probe the midpoint of the adjacent cell.
        let mut probe = vec![QuadExt::zero(); self.m];
        for dirs in 0..(1usize << self.m) {
            let mut escapes_hull = false;
            for a in 0..self.m {
                let v = &p.real[a];
                let neighbor = if dirs >> a & 1 == 1 {
                    coords[a].iter().find(|c| *c > &v).copied()
                } else {
                    coords[a].iter().rev().find(|c| *c < &v).copied()
                };
                match neighbor {
                    Some(w) => probe[a] = v.midpoint(w),
                    None => {
                        escapes_hull = true;
                        break;
                    }
                }
            }
            if escapes_hull || !boxes.iter().any(|b| b.contains(&probe)) {
                return Location::Boundary;
            }
        }
        Location::Interior
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        self.locate(p) != Location::Outside
    }

    pub fn contains_interior(&self, p: &HPoint) -> bool {
        self.locate(p) == Location::Interior
    }

    pub fn translate(&self, h: &HPoint) -> Region {
        assert_eq!(h.real.len(), self.m, "shift dimension mismatch");
        assert!(self.group.contains(&h.fin), "shift fiber outside group");
        let mut out = Region { m: self.m, group: self.group.clone(), fibers: BTreeMap::new() };
        for (fiber, boxes) in &self.fibers {
            let new_fiber = self.group.add(fiber, &h.fin);
            let shifted: Vec<RBox> = boxes.iter().map(|b| b.translate(&h.real)).collect();
            out.fibers.entry(new_fiber).or_default().extend(shifted);
        }
        out.canonicalize();
        out
    }

    /// Pointwise negation `-R`.
    pub fn negate(&self) -> Region {
        let mut out = Region { m: self.m, group: self.group.clone(), fibers: BTreeMap::new() };
        for (fiber, boxes) in &self.fibers {
            let new_fiber = self.group.neg(fiber);
            let negated: Vec<RBox> = boxes.iter().map(RBox::negate).collect();
            out.fibers.entry(new_fiber).or_default().extend(negated);
        }
        out.canonicalize();
        out
    }

    pub fn union(&self, other: &Region) -> Region {
        self.check_compatible(other);
        let mut out = self.clone();
        for (fiber, boxes) in &other.fibers {
            out.fibers.entry(fiber.clone()).or_default().extend(boxes.iter().cloned());
        }
        out.canonicalize();
        out
    }

    pub fn intersect(&self, other: &Region) -> Region {
        self.check_compatible(other);
        let mut out = Region { m: self.m, group: self.group.clone(), fibers: BTreeMap::new() };
        for (fiber, boxes) in &self.fibers {
            let Some(other_boxes) = other.fibers.get(fiber) else { continue };
            let mut pieces = Vec::new();
            for a in boxes {
                for b in other_boxes {
                    if let Some(c) = a.intersect(b) {
                        pieces.push(c);
                    }
                }
            }
            if !pieces.is_empty() {
                out.fibers.insert(fiber.clone(), pieces);
            }
        }
        out.canonicalize();
        out
    }

    fn check_compatible(&self, other: &Region) {
        assert_eq!(self.m, other.m, "region dimension mismatch");
        assert_eq!(self.group, other.group, "region group mismatch");
    }

    /// Exact set-theoretic comparison of two closed regions.
    ///
    /// Both regions are refined by the common corner grid; every grid face
    /// (a product of corner values and open gaps between consecutive
    /// corners) lies entirely inside or entirely outside each region, so one
    /// exact representative point per face decides it.
    pub fn compare(&self, other: &Region) -> RegionOrder {
        self.check_compatible(other);
        let mut a_only = false;
        let mut b_only = false;
        let mut both = false;
        let fibers: Vec<&FinElem> = {
            let mut fs: Vec<&FinElem> =
                self.fibers.keys().chain(other.fibers.keys()).collect();
            fs.sort();
            fs.dedup();
            fs
        };
        for fiber in fibers {
            let a_boxes = self.boxes_at(fiber);
            let b_boxes = other.boxes_at(fiber);
            if self.m == 0 {
                match (!a_boxes.is_empty(), !b_boxes.is_empty()) {
                    (true, true) => both = true,
                    (true, false) => a_only = true,
                    (false, true) => b_only = true,
                    (false, false) => {}
                }
                continue;
            }
            // Per-axis face representatives: corner values and gap midpoints.
            let reps: Vec<Vec<QuadExt>> = (0..self.m)
                .map(|a| {
                    let mut cs: Vec<&QuadExt> = a_boxes
                        .iter()
                        .chain(b_boxes)
                        .flat_map(|b| {
                            let (lo, hi) = &b.intervals()[a];
                            [lo, hi]
                        })
                        .collect();
                    cs.sort();
                    cs.dedup();
                    let mut faces = Vec::with_capacity(2 * cs.len());
                    for (i, c) in cs.iter().enumerate() {
                        faces.push((*c).clone());
                        if let Some(next) = cs.get(i + 1) {
                            faces.push(c.midpoint(next));
                        }
                    }
                    faces
                })
                .collect();
            // Odometer over the face lists.
            let mut idx = vec![0usize; self.m];
            let mut point = vec![QuadExt::zero(); self.m];
            'faces: loop {
                for a in 0..self.m {
                    point[a] = reps[a][idx[a]].clone();
                }
                let in_a = a_boxes.iter().any(|b| b.contains(&point));
                let in_b = b_boxes.iter().any(|b| b.contains(&point));
                match (in_a, in_b) {
                    (true, true) => both = true,
                    (true, false) => a_only = true,
                    (false, true) => b_only = true,
                    (false, false) => {}
                }
                // Early exit: nothing further can change the verdict.
                if a_only && b_only && both {
                    break;
                }
                for a in (0..self.m).rev() {
                    idx[a] += 1;
                    if idx[a] < reps[a].len() {
                        continue 'faces;
                    }
                    idx[a] = 0;
                }
                break;
            }
            if a_only && b_only && both {
                break;
            }
        }
        match (a_only, b_only, both) {
            (false, false, _) => RegionOrder::Equal,
            (false, true, _) => RegionOrder::ASubsetB,
            (true, false, _) => RegionOrder::BSubsetA,
            (true, true, false) => RegionOrder::Disjoint,
            (true, true, true) => RegionOrder::Incomparable,
        }
    }

    /// The closure of the interior, reassembled from grid cells into boxes,
    /// plus a flag telling whether the region was already regular (equal to
    /// that closure).
    ///
    /// Degenerate boxes and dangling lower-dimensional pieces disappear; the
    /// output is a region with the same interior whose boxes are all
    /// full-dimensional.
    pub fn regularize(&self) -> (Region, bool) {
        let mut out = Region { m: self.m, group: self.group.clone(), fibers: BTreeMap::new() };
        for (fiber, boxes) in &self.fibers {
            if self.m == 0 {
                out.fibers.insert(fiber.clone(), vec![RBox::point0()]);
                continue;
            }
            let coords: Vec<Vec<QuadExt>> = (0..self.m)
                .map(|a| {
                    let mut cs: Vec<QuadExt> = boxes
                        .iter()
                        .flat_map(|b| {
                            let (lo, hi) = &b.intervals()[a];
                            [lo.clone(), hi.clone()]
                        })
                        .collect();
                    cs.sort();
                    cs.dedup();
                    cs
                })
                .collect();
            let dims: Vec<usize> = coords.iter().map(|c| c.len().saturating_sub(1)).collect();
            let total: usize = dims.iter().product();
            if total == 0 {
                continue; // every box degenerate on some axis
            }
            let linear = |ix: &[usize]| -> usize {
                let mut v = 0;
                for a in 0..self.m {
                    v = v * dims[a] + ix[a];
                }
                v
            };
            // Mark cells whose (exact) midpoint lies in some box; the grid
            // includes every box corner, so midpoint coverage is cell
            // coverage.
            let mut covered = vec![false; total];
            let mut ix = vec![0usize; self.m];
            let mut mid = vec![QuadExt::zero(); self.m];
            loop {
                for a in 0..self.m {
                    mid[a] = coords[a][ix[a]].midpoint(&coords[a][ix[a] + 1]);
                }
                covered[linear(&ix)] = boxes.iter().any(|b| b.contains(&mid));
                if !advance(&mut ix, &dims) {
                    break;
                }
            }
            // Greedy reassembly into maximal-first boxes, in cell order.
            let mut used = vec![false; total];
            let mut pieces = Vec::new();
            let mut ix = vec![0usize; self.m];
            loop {
                let start = linear(&ix);
                if covered[start] && !used[start] {
                    let lo = ix.clone();
                    let mut hi = ix.clone();
                    for a in (0..self.m).rev() {
                        'grow: while hi[a] + 1 < dims[a] {
                            let mut slab_lo = lo.clone();
                            let mut slab_hi = hi.clone();
                            slab_lo[a] = hi[a] + 1;
                            slab_hi[a] = hi[a] + 1;
                            if !block_all(&slab_lo, &slab_hi, |cell| {
                                let k = linear(cell);
                                covered[k] && !used[k]
                            }) {
                                break 'grow;
                            }
                            hi[a] += 1;
                        }
                    }
                    block_all(&lo, &hi, |cell| {
                        used[linear(cell)] = true;
                        true
                    });
                    let intervals = (0..self.m)
                        .map(|a| (coords[a][lo[a]].clone(), coords[a][hi[a] + 1].clone()))
                        .collect();
                    pieces.push(RBox(intervals));
                }
                if !advance(&mut ix, &dims) {
                    break;
                }
            }
            if !pieces.is_empty() {
                out.fibers.insert(fiber.clone(), pieces);
            }
        }
        out.canonicalize();
        let was_regular = self.compare(&out) == RegionOrder::Equal;
        (out, was_regular)
    }

    /// Extent summary: `None` for the empty region.
    pub fn extent(&self) -> Option<RegionExtent> {
        if self.fibers.is_empty() {
            return None;
        }
        let mut best = QuadExt::zero();
        for boxes in self.fibers.values() {
            for a in 0..self.m {
                let mut lo: Option<QuadExt> = None;
                let mut hi: Option<QuadExt> = None;
                for b in boxes {
                    let (blo, bhi) = &b.intervals()[a];
                    lo = Some(match lo {
                        Some(cur) => cur.min_of(blo),
                        None => blo.clone(),
                    });
                    hi = Some(match hi {
                        Some(cur) => cur.max_of(bhi),
                        None => bhi.clone(),
                    });
                }
                let width = &hi.unwrap() - &lo.unwrap();
                best = best.max_of(&width);
            }
        }
        Some(RegionExtent { extent: best, fiber_count: self.fibers.len() })
    }

    /// Bounding box over all fibers; `None` for an empty region or `m = 0`.
    pub fn bounding_box(&self) -> Option<RBox> {
        if self.fibers.is_empty() || self.m == 0 {
            return None;
        }
        let mut acc: Option<Vec<(QuadExt, QuadExt)>> = None;
        for boxes in self.fibers.values() {
            for b in boxes {
                match &mut acc {
                    None => acc = Some(b.intervals().to_vec()),
                    Some(iv) => {
                        for (a, (lo, hi)) in iv.iter_mut().enumerate() {
                            let (blo, bhi) = &b.intervals()[a];
                            *lo = lo.min_of(blo);
                            *hi = hi.max_of(bhi);
                        }
                    }
                }
            }
        }
        acc.map(RBox)
    }

    /// Transports the region along a group map `hom : group -> G`, merging
    /// fibers that collide.
    pub fn push_fibers(&self, hom: &FinHom) -> Region {
        assert_eq!(hom.domain, self.group, "fiber map domain mismatch");
        let mut out =
            Region { m: self.m, group: hom.codomain.clone(), fibers: BTreeMap::new() };
        for (fiber, boxes) in &self.fibers {
            out.fibers
                .entry(hom.apply(fiber))
                .or_default()
                .extend(boxes.iter().cloned());
        }
        out.canonicalize();
        out
    }

    /// Pulls the region back along `hom : G -> group`: the fiber over `g`
    /// is the fiber over `hom(g)`.
    pub fn pull_fibers(&self, hom: &FinHom) -> Region {
        assert_eq!(hom.codomain, self.group, "fiber map codomain mismatch");
        let mut out = Region { m: self.m, group: hom.domain.clone(), fibers: BTreeMap::new() };
        for g in hom.domain.elements() {
            let boxes = self.boxes_at(&hom.apply(&g));
            if !boxes.is_empty() {
                out.fibers.insert(g, boxes.to_vec());
            }
        }
        out.canonicalize();
        out
    }
}

/// Odometer step over multi-indices below `dims`; false when exhausted.
fn advance(ix: &mut [usize], dims: &[usize]) -> bool {
    for a in (0..ix.len()).rev() {
        ix[a] += 1;
        if ix[a] < dims[a] {
            return true;
        }
        ix[a] = 0;
    }
    false
}

/// Applies `f` to every multi-index in the inclusive block `[lo, hi]`,
/// returning false as soon as `f` does.
fn block_all(lo: &[usize], hi: &[usize], mut f: impl FnMut(&[usize]) -> bool) -> bool {
    let mut ix = lo.to_vec();
    loop {
        if !f(&ix) {
            return false;
        }
        let mut a = ix.len();
        loop {
            if a == 0 {
                return true;
            }
            a -= 1;
            ix[a] += 1;
            if ix[a] <= hi[a] {
                break;
            }
            ix[a] = lo[a];
        }
    }
}

/// Wire form of a region fiber: group element plus its boxes.
#[derive(Serialize, Deserialize)]
struct FiberRepr {
    f: Vec<u64>,
    boxes: Vec<Vec<(QuadExt, QuadExt)>>,
}

/// Wire form: `{"m": .., "F": [orders], "fibers": [...]}`.
#[derive(Serialize, Deserialize)]
struct RegionRepr {
    m: usize,
    #[serde(rename = "F")]
    group: Vec<u64>,
    fibers: Vec<FiberRepr>,
}

impl Serialize for Region {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        RegionRepr {
            m: self.m,
            group: self.group.orders().to_vec(),
            fibers: self
                .fibers
                .iter()
                .map(|(f, boxes)| FiberRepr {
                    f: f.0.clone(),
                    boxes: boxes.iter().map(|b| b.0.clone()).collect(),
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = RegionRepr::deserialize(de)?;
        let group = FinAbGroup::new(repr.group).map_err(D::Error::custom)?;
        let mut region = Region::empty(repr.m, group).map_err(D::Error::custom)?;
        for fiber in repr.fibers {
            let f = FinElem(fiber.f);
            for raw in fiber.boxes {
                let bx = RBox::new(raw).map_err(D::Error::custom)?;
                region.add_box(f.clone(), bx).map_err(D::Error::custom)?;
            }
        }
        Ok(region)
    }
}
