//! Finite views of colored point sets in `R^d`, with the finite-scale
//! geometry checks: packing and covering radii, the Meyer difference
//! property, and repetitivity.
//!
//! A [`MultiPointSet`] is a family of point lists indexed by color, together
//! with a *carrier* box recording which part of space the view is conclusive
//! about. Every check here is honest about the edge: a property that needs
//! data outside the carrier is reported as inconclusive, never guessed.
//!
//! All distances use the max norm — exact in `Q(sqrt(D))`, no square roots.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::QuadExt;
use crate::region::RBox;

#[derive(Debug, Error)]
pub enum PointSetError {
    #[error("point has {got} coordinates, the set is {want}-dimensional")]
    DimMismatch { got: usize, want: usize },
    #[error("carrier box has dimension {got}, expected {want}")]
    CarrierDim { got: usize, want: usize },
    #[error("point lies outside the carrier box")]
    OutsideCarrier,
    #[error("the set has no points")]
    Empty,
    #[error("carrier is too small for the requested radius (need width >= {need} on every axis)")]
    CarrierTooSmall { need: String },
    #[error("sample step must be positive")]
    BadStep,
    #[error("dimension {0} is not supported by this check")]
    UnsupportedDim(usize),
}

/// A finite view of a colored point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPointSet {
    dim: usize,
    carrier: RBox,
    colors: BTreeMap<String, Vec<Vec<QuadExt>>>,
}

impl MultiPointSet {
    pub fn new(dim: usize, carrier: RBox) -> Result<Self, PointSetError> {
        if carrier.dim() != dim {
            return Err(PointSetError::CarrierDim { got: carrier.dim(), want: dim });
        }
        Ok(MultiPointSet { dim, carrier, colors: BTreeMap::new() })
    }

    /// Builds from full per-color lists; points are sorted and deduplicated.
    pub fn from_parts(
        dim: usize,
        carrier: RBox,
        colors: BTreeMap<String, Vec<Vec<QuadExt>>>,
    ) -> Result<Self, PointSetError> {
        let mut set = Self::new(dim, carrier)?;
        for (color, points) in colors {
            for p in points {
                set.add(&color, p)?;
            }
        }
        Ok(set)
    }

    /// Adds one point; the carrier must contain it (the view must be honest
    /// about its own extent).
    pub fn add(&mut self, color: &str, point: Vec<QuadExt>) -> Result<(), PointSetError> {
        if point.len() != self.dim {
            return Err(PointSetError::DimMismatch { got: point.len(), want: self.dim });
        }
        if !self.carrier.contains(&point) {
            return Err(PointSetError::OutsideCarrier);
        }
        let list = self.colors.entry(color.to_string()).or_default();
        if let Err(at) = list.binary_search(&point) {
            list.insert(at, point);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn carrier(&self) -> &RBox {
        &self.carrier
    }

    pub fn colors(&self) -> impl Iterator<Item = (&str, &[Vec<QuadExt>])> {
        self.colors.iter().map(|(c, v)| (c.as_str(), v.as_slice()))
    }

    pub fn color_names(&self) -> Vec<&str> {
        self.colors.keys().map(String::as_str).collect()
    }

    pub fn points(&self, color: &str) -> &[Vec<QuadExt>] {
        self.colors.get(color).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Total number of colored points (a point carried by two colors counts
    /// twice — this is a multiple set).
    pub fn len(&self) -> usize {
        self.colors.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The underlying uncolored support, sorted without duplicates.
    pub fn support(&self) -> Vec<Vec<QuadExt>> {
        let mut out: Vec<Vec<QuadExt>> =
            self.colors.values().flatten().cloned().collect();
        out.sort();
        out.dedup();
        out
    }

    /// Exact packing radius of the support in the max norm: half the minimum
    /// pairwise distance. `None` when fewer than two points exist.
    ///
    /// Plane-sweep on the first coordinate: once the first-coordinate gap
    /// reaches the current best distance, no later point can improve it.
    pub fn packing_radius(&self) -> Option<QuadExt> {
        let pts = self.support();
        if pts.len() < 2 {
            return None;
        }
        let mut best: Option<QuadExt> = None;
        for i in 0..pts.len() {
            for p in &pts[i + 1..] {
                let gap0 = &p[0] - &pts[i][0];
                if let Some(b) = &best {
                    if &gap0 >= b {
                        break; // sorted: later points only grow this gap
                    }
                }
                let d = inf_dist(&pts[i], p);
                if best.as_ref().map_or(true, |b| &d < b) {
                    best = Some(d);
                }
            }
        }
        best.map(|b| b / QuadExt::from_int(2))
    }

    /// Covering radius of the support relative to a box: the farthest any
    /// point of `over` gets from the support, in the max norm.
    ///
    /// Exact for `d = 1` (the extremes are gap midpoints and the box ends).
    /// For `d = 2, 3` the box is sampled with the given step: `lower` is a
    /// realized distance, and `upper = lower + step/2` is certified because
    /// every point of the box is within `step/2` of a sample.
    pub fn covering_radius(
        &self,
        over: &RBox,
        step: &QuadExt,
    ) -> Result<CoveringReport, PointSetError> {
        if over.dim() != self.dim {
            return Err(PointSetError::CarrierDim { got: over.dim(), want: self.dim });
        }
        let pts = self.support();
        if pts.is_empty() {
            return Err(PointSetError::Empty);
        }
        if self.dim == 1 {
            let (lo, hi) = over.intervals()[0].clone();
            let mut candidates: Vec<QuadExt> = vec![lo.clone(), hi.clone()];
            let inside: Vec<&QuadExt> = pts
                .iter()
                .map(|p| &p[0])
                .filter(|x| *x >= &lo && *x <= &hi)
                .collect();
            for w in inside.windows(2) {
                candidates.push(w[0].midpoint(w[1]));
            }
            let mut worst = QuadExt::zero();
            let mut witness = vec![lo.clone()];
            for c in candidates {
                let d = pts
                    .iter()
                    .map(|p| (&p[0] - &c).abs())
                    .min()
                    .expect("support nonempty");
                if d > worst {
                    worst = d;
                    witness = vec![c];
                }
            }
            return Ok(CoveringReport {
                lower: worst.clone(),
                upper: worst,
                exact: true,
                witness,
            });
        }
        if self.dim > crate::region::MAX_REAL_DIM {
            return Err(PointSetError::UnsupportedDim(self.dim));
        }
        if !step.is_positive() {
            return Err(PointSetError::BadStep);
        }
        // Sample grid: lo + k*step per axis, end included.
        let axes: Vec<Vec<QuadExt>> = over
            .intervals()
            .iter()
            .map(|(lo, hi)| {
                let mut vals = Vec::new();
                let mut v = lo.clone();
                while &v < hi {
                    vals.push(v.clone());
                    v = &v + step;
                }
                vals.push(hi.clone());
                vals
            })
            .collect();
        let mut worst = QuadExt::zero();
        let mut witness: Vec<QuadExt> = axes.iter().map(|a| a[0].clone()).collect();
        let dims: Vec<usize> = axes.iter().map(Vec::len).collect();
        let mut ix = vec![0usize; self.dim];
        loop {
            let sample: Vec<QuadExt> =
                (0..self.dim).map(|a| axes[a][ix[a]].clone()).collect();
            let d = pts
                .iter()
                .map(|p| inf_dist(p, &sample))
                .min()
                .expect("support nonempty");
            if d > worst {
                worst = d;
                witness = sample;
            }
            let mut a = self.dim;
            loop {
                if a == 0 {
                    let half = step / &QuadExt::from_int(2);
                    return Ok(CoveringReport {
                        upper: &worst + &half,
                        lower: worst,
                        exact: false,
                        witness,
                    });
                }
                a -= 1;
                ix[a] += 1;
                if ix[a] < dims[a] {
                    break;
                }
                ix[a] = 0;
            }
        }
    }

    /// Finite-scale Meyer check: is every difference of two support points
    /// explained as (support point) + (element of `correction`)?
    ///
    /// For each ordered pair difference `w = x - y`, the verdict is:
    /// * covered — some `w - f` is a support point;
    /// * inconclusive — no witness inside, but some `w - f` falls outside
    ///   the carrier, where the view has no information;
    /// * defect — every `w - f` lies inside the carrier and none is a
    ///   support point. Defects disprove `Λ - Λ ⊆ Λ + correction` as seen.
    ///
    /// `radius`, when given, takes differences only over pairs lying within
    /// that max-norm distance of the carrier center — the usual boundary
    /// correction when the carrier is much larger than the scale of
    /// interest. Witness lookups always use the full support.
    pub fn meyer_check(
        &self,
        correction: &[Vec<QuadExt>],
        radius: Option<&QuadExt>,
    ) -> MeyerReport {
        let all = self.support();
        let index: BTreeSet<&Vec<QuadExt>> = all.iter().collect();
        let pts: Vec<&Vec<QuadExt>> = match radius {
            None => all.iter().collect(),
            Some(r) => {
                let center: Vec<QuadExt> = self
                    .carrier
                    .intervals()
                    .iter()
                    .map(|(lo, hi)| (lo + hi) / &QuadExt::from_int(2))
                    .collect();
                all.iter().filter(|p| &inf_dist(p, &center) <= r).collect()
            }
        };
        // The verdict on a difference depends only on its value, so collect
        // the distinct values first (set union in parallel over rows of the
        // difference table), then classify each one once, in parallel.
        let unique: BTreeSet<Vec<QuadExt>> = pts
            .par_iter()
            .map(|x| {
                pts.iter()
                    .map(|y| {
                        x.iter().zip(y.iter()).map(|(a, b)| a - b).collect::<Vec<QuadExt>>()
                    })
                    .collect::<BTreeSet<_>>()
            })
            .reduce(BTreeSet::new, |mut a, b| {
                a.extend(b);
                a
            });
        let diffs: Vec<Vec<QuadExt>> = unique.into_iter().collect();

        enum Verdict {
            Covered,
            Inconclusive,
            Defect,
        }
        let verdicts: Vec<Verdict> = diffs
            .par_iter()
            .map(|w| {
                let mut escaped = false;
                for f in correction {
                    let probe: Vec<QuadExt> =
                        w.iter().zip(f).map(|(a, b)| a - b).collect();
                    if index.contains(&probe) {
                        return Verdict::Covered;
                    }
                    if !self.carrier.contains(&probe) {
                        escaped = true;
                    }
                }
                if escaped {
                    Verdict::Inconclusive
                } else {
                    Verdict::Defect
                }
            })
            .collect();

        let mut defects = Vec::new();
        let mut inconclusive = 0u64;
        for (w, v) in diffs.into_iter().zip(&verdicts) {
            match v {
                Verdict::Covered => {}
                Verdict::Inconclusive => inconclusive += 1,
                Verdict::Defect => defects.push(w),
            }
        }
        MeyerReport {
            differences_checked: verdicts.len() as u64,
            inconclusive,
            defects,
        }
    }

    /// Finite-scale repetitivity: how far apart can two occurrences of the
    /// same `r`-patch be?
    ///
    /// Patches are cut at every support point lying in the carrier shrunk by
    /// `r` (so each patch is fully visible) and compared exactly, colors
    /// included, as translated point configurations. For each patch class,
    /// every occurrence must have another occurrence nearby; the report's
    /// radius is the largest such nearest-repeat distance. Occurrences whose
    /// class appears only once in the view make the radius unknowable from
    /// this view and are listed as unmatched.
    pub fn repetition_radius(&self, r: &QuadExt) -> Result<RepetitivityReport, PointSetError> {
        if !r.is_positive() {
            return Err(PointSetError::BadStep);
        }
        let three_r = QuadExt::from_int(3) * r;
        if self.carrier.widths().iter().any(|w| w < &three_r) {
            return Err(PointSetError::CarrierTooSmall { need: three_r.to_string() });
        }
        let interior = self
            .carrier
            .shrink(r)
            .expect("carrier wide enough by the width check");
        let support = self.support();
        let centers: Vec<&Vec<QuadExt>> =
            support.iter().filter(|p| interior.contains(p)).collect();
        if centers.is_empty() {
            return Err(PointSetError::Empty);
        }
        type Patch = Vec<(String, Vec<QuadExt>)>;
        let mut classes: BTreeMap<Patch, Vec<Vec<QuadExt>>> = BTreeMap::new();
        for center in &centers {
            let mut patch: Patch = Vec::new();
            for (color, points) in &self.colors {
                for p in points {
                    if inf_dist(p, center) <= *r {
                        let rel: Vec<QuadExt> =
                            p.iter().zip(center.iter()).map(|(a, b)| a - b).collect();
                        patch.push((color.clone(), rel));
                    }
                }
            }
            patch.sort();
            classes.entry(patch).or_default().push((*center).clone());
        }
        let mut radius = QuadExt::zero();
        let mut unmatched = Vec::new();
        for occurrences in classes.values() {
            if occurrences.len() == 1 {
                unmatched.push(occurrences[0].clone());
                continue;
            }
            for s in occurrences {
                let nearest = occurrences
                    .iter()
                    .filter(|t| *t != s)
                    .map(|t| inf_dist(t, s))
                    .min()
                    .expect("at least one other occurrence");
                radius = radius.max_of(&nearest);
            }
        }
        Ok(RepetitivityReport {
            patch_radius: r.clone(),
            classes: classes.len(),
            centers: centers.len(),
            radius: if unmatched.is_empty() { Some(radius) } else { None },
            unmatched,
        })
    }
}

/// Result of a covering-radius computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringReport {
    /// A realized distance: some probed point is this far from the support.
    pub lower: QuadExt,
    /// Certified bound: no point of the probed box is farther than this.
    pub upper: QuadExt,
    /// Whether lower and upper coincide (always true for `d = 1`).
    pub exact: bool,
    /// Where the lower bound is attained.
    pub witness: Vec<QuadExt>,
}

/// Result of a finite-scale Meyer check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeyerReport {
    pub differences_checked: u64,
    /// Differences whose only possible witnesses fall outside the carrier.
    pub inconclusive: u64,
    /// Differences visibly violating the Meyer inclusion.
    pub defects: Vec<Vec<QuadExt>>,
}

impl MeyerReport {
    pub fn passed(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Result of a finite-scale repetitivity measurement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepetitivityReport {
    pub patch_radius: QuadExt,
    pub classes: usize,
    pub centers: usize,
    /// Largest nearest-repeat distance, when every class repeats in view.
    pub radius: Option<QuadExt>,
    /// Patch centers whose class has no second occurrence in the view.
    pub unmatched: Vec<Vec<QuadExt>>,
}

/// Max-norm distance between equal-length exact vectors.
pub fn inf_dist(x: &[QuadExt], y: &[QuadExt]) -> QuadExt {
    debug_assert_eq!(x.len(), y.len());
    let mut best = QuadExt::zero();
    for (a, b) in x.iter().zip(y) {
        best = best.max_of(&(a - b).abs());
    }
    best
}

/// Wire form: `{"dim", "carrier", "colors": {name: [[coords...]]}}`.
#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    dim: usize,
    carrier: Vec<(QuadExt, QuadExt)>,
    colors: BTreeMap<String, Vec<Vec<QuadExt>>>,
}

impl Serialize for MultiPointSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        PointSetRepr {
            dim: self.dim,
            carrier: self.carrier.intervals().to_vec(),
            colors: self.colors.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MultiPointSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = PointSetRepr::deserialize(de)?;
        let carrier = RBox::new(repr.carrier).map_err(D::Error::custom)?;
        MultiPointSet::from_parts(repr.dim, carrier, repr.colors).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QuadExt {
        QuadExt::from_int(n)
    }

    fn qf(p: i64, d: i64) -> QuadExt {
        QuadExt::from_frac(p, d)
    }

    /// The integers in [-w, w], one color.
    fn integer_line(w: i64) -> MultiPointSet {
        let carrier = RBox::interval(q(-w), q(w)).unwrap();
        let mut s = MultiPointSet::new(1, carrier).unwrap();
        for k in -w..=w {
            s.add("a", vec![q(k)]).unwrap();
        }
        s
    }

    #[test]
    fn construction_and_access() {
        let mut s = integer_line(5);
        assert_eq!(s.len(), 11);
        // Duplicate insertion is a no-op.
        s.add("a", vec![q(0)]).unwrap();
        assert_eq!(s.len(), 11);
        // Second color overlays the same position (multiple set).
        s.add("b", vec![q(0)]).unwrap();
        assert_eq!(s.len(), 12);
        assert_eq!(s.support().len(), 11);
        assert!(s.add("a", vec![q(99)]).is_err()); // outside carrier
        assert!(s.add("a", vec![q(0), q(0)]).is_err()); // wrong dim
    }

    #[test]
    fn packing_radius_of_integer_line() {
        let s = integer_line(10);
        assert_eq!(s.packing_radius().unwrap(), qf(1, 2));
        // One point: undefined.
        let mut single = MultiPointSet::new(1, RBox::interval(q(0), q(1)).unwrap()).unwrap();
        single.add("a", vec![q(0)]).unwrap();
        assert!(single.packing_radius().is_none());
    }

    #[test]
    fn packing_radius_sweep_matches_brute_force_2d() {
        // A slightly irregular finite 2-d set.
        let carrier = RBox::new(vec![(q(0), q(8)), (q(0), q(8))]).unwrap();
        let mut s = MultiPointSet::new(2, carrier).unwrap();
        let pts: Vec<(i64, i64, i64, i64)> =
            vec![(0, 1, 0, 1), (3, 1, 1, 1), (7, 2, 5, 1), (13, 2, 3, 1), (5, 1, 11, 2), (6, 1, 6, 1)];
        for (xn, xd, yn, yd) in pts {
            s.add("a", vec![qf(xn, xd), qf(yn, yd)]).unwrap();
        }
        let sweep = s.packing_radius().unwrap();
        let pts = s.support();
        let mut best: Option<QuadExt> = None;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d = inf_dist(&pts[i], &pts[j]);
                best = Some(match best {
                    Some(b) => b.min_of(&d),
                    None => d,
                });
            }
        }
        assert_eq!(sweep, best.unwrap() / q(2));
    }

    #[test]
    fn covering_radius_exact_on_line() {
        // Points 0, 1, 3 over [0, 3]: worst point is 2 (distance 1).
        let carrier = RBox::interval(q(0), q(3)).unwrap();
        let mut s = MultiPointSet::new(1, carrier.clone()).unwrap();
        for k in [0, 1, 3] {
            s.add("a", vec![q(k)]).unwrap();
        }
        let rep = s.covering_radius(&carrier, &q(1)).unwrap();
        assert!(rep.exact);
        assert_eq!(rep.lower, q(1));
        assert_eq!(rep.upper, q(1));
        assert_eq!(rep.witness, vec![q(2)]);
        // Box ends matter: over [-2, 3] the end -2 is at distance 2.
        let wide = RBox::interval(q(-2), q(3)).unwrap();
        let rep = s.covering_radius(&wide, &q(1)).unwrap();
        assert_eq!(rep.lower, q(2));
    }

    #[test]
    fn covering_radius_sampled_in_plane() {
        // Unit grid on [0,4]^2: covering radius is exactly 1/2 (max norm).
        let carrier = RBox::new(vec![(q(0), q(4)), (q(0), q(4))]).unwrap();
        let mut s = MultiPointSet::new(2, carrier.clone()).unwrap();
        for x in 0..=4 {
            for y in 0..=4 {
                s.add("a", vec![q(x), q(y)]).unwrap();
            }
        }
        let rep = s.covering_radius(&carrier, &qf(1, 2)).unwrap();
        assert!(!rep.exact);
        // The sample grid hits the deep holes exactly: lower = 1/2.
        assert_eq!(rep.lower, qf(1, 2));
        assert_eq!(rep.upper, qf(3, 4));
        // True covering radius is sandwiched.
        assert!(rep.lower <= qf(1, 2) && qf(1, 2) <= rep.upper);
    }

    #[test]
    fn meyer_check_on_lattice_is_clean() {
        // Z is a group: differences are already points; correction {0}.
        let s = integer_line(8);
        let report = s.meyer_check(&[vec![q(0)]], None);
        // Differences up to 8 are visible points; larger ones (e.g. 9 = 8 -
        // (-1)) land outside nothing — carrier is [-8, 8] and all
        // differences lie in [-16, 16]... those outside the carrier are
        // inconclusive, none is a certified defect.
        assert!(report.passed());
        assert!(report.inconclusive > 0);
        assert!(report.differences_checked > 0);
    }

    #[test]
    fn meyer_check_finds_planted_defect() {
        // Points {0, 1, 10}: difference 9 needs a witness 9 - f; with
        // correction {0} the probe 9 is inside the carrier and absent.
        let carrier = RBox::interval(q(-16), q(16)).unwrap();
        let mut s = MultiPointSet::new(1, carrier).unwrap();
        for k in [0, 1, 10] {
            s.add("a", vec![q(k)]).unwrap();
        }
        let report = s.meyer_check(&[vec![q(0)]], None);
        assert!(!report.passed());
        assert!(report.defects.contains(&vec![q(9)]));
        // Both signs need cover: 9 - (-1) = 10 and -9 - (-10) = 1.
        let fixed =
            s.meyer_check(&[vec![q(-1)], vec![q(0)], vec![q(1)], vec![q(-10)]], None);
        assert!(fixed.passed());
    }

    #[test]
    fn meyer_check_radius_limits_the_difference_pairs() {
        // Radius 2 around the carrier center 0: pairs from [-2, 2], so the
        // 9 differences -4..4, every probe a visible point — conclusive.
        let s = integer_line(8);
        let narrowed = s.meyer_check(&[vec![q(0)]], Some(&q(2)));
        assert_eq!(narrowed.differences_checked, 9);
        assert_eq!(narrowed.inconclusive, 0);
        assert!(narrowed.passed());
        let full = s.meyer_check(&[vec![q(0)]], None);
        assert!(full.differences_checked > narrowed.differences_checked);
    }

    #[test]
    fn repetition_radius_of_integer_line() {
        let s = integer_line(50);
        let rep = s.repetition_radius(&q(2)).unwrap();
        // One patch class (all interior points look alike), repeats at
        // distance 1.
        assert_eq!(rep.classes, 1);
        assert_eq!(rep.radius, Some(q(1)));
        assert!(rep.unmatched.is_empty());
    }

    #[test]
    fn repetition_radius_flags_unique_patch() {
        // Integers with one displaced point: its patch appears once.
        let carrier = RBox::interval(q(-10), q(10)).unwrap();
        let mut s = MultiPointSet::new(1, carrier).unwrap();
        for k in -10..=10 {
            if k == 0 {
                s.add("a", vec![qf(1, 3)]).unwrap();
            } else {
                s.add("a", vec![q(k)]).unwrap();
            }
        }
        let rep = s.repetition_radius(&q(1)).unwrap();
        assert!(rep.radius.is_none());
        assert!(!rep.unmatched.is_empty());
        // Carrier too small for the patch radius errors out.
        assert!(matches!(
            s.repetition_radius(&q(8)),
            Err(PointSetError::CarrierTooSmall { .. })
        ));
    }

    #[test]
    fn repetitivity_sees_colors() {
        // Same support, alternating colors: patches at even and odd points
        // differ, giving two classes with repeat distance 2.
        let carrier = RBox::interval(q(-20), q(20)).unwrap();
        let mut s = MultiPointSet::new(1, carrier).unwrap();
        for k in -20..=20i64 {
            let color = if k.rem_euclid(2) == 0 { "even" } else { "odd" };
            s.add(color, vec![q(k)]).unwrap();
        }
        let rep = s.repetition_radius(&q(1)).unwrap();
        assert_eq!(rep.classes, 2);
        assert_eq!(rep.radius, Some(q(2)));
    }

    #[test]
    fn serde_round_trip() {
        let mut s = integer_line(3);
        s.add("b", vec![qf(1, 2)]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        let back: MultiPointSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        // Compact hand-written form is accepted.
        let text = r#"{"dim":1,"carrier":[["-2","2"]],"colors":{"a":[["0"],["1/2"],["-1"]]}}"#;
        let parsed: MultiPointSet = serde_json::from_str(text).unwrap();
        assert_eq!(parsed.support().len(), 3);
    }
}
