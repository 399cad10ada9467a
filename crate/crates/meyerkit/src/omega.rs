//! Local parameter regions: how fast a patch pins down its internal origin.
//!
//! Every point `y` of a model multiple set constrains the internal parameter
//! `w` of the set: `y`'s star must lie in the window translated by `w`
//! (`s(z_y) ∈ V_i + w`), i.e. `w ∈ s(z_y) - V_i`. Intersecting these
//! constraints over the patch inside
//! a physical ball of radius `R` yields a region `Ω_R ∋ 0` that shrinks as
//! `R` grows — for an irredundant scheme with dense internal orbit it
//! converges to the redundancy subgroup, here `{0}`. The rate of that
//! shrinkage is a quantitative fingerprint of the window system, and the
//! resolved limit supports an exact same-local-pattern test for pairs of
//! points: disjoint parameter regions certify different patterns, mutually
//! resolved overlapping ones certify agreement within a stated bound.
//!
//! Everything here is exact: patches come from certified lattice
//! enumeration, constraints are box-union regions, and radii, tolerances
//! and extents are field elements.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cps::{CpsError, CutProjectScheme};
use crate::modelset::{ModelSetError, WindowFamily};
use crate::numeric::{qsign, QuadExt};
use crate::pointset::MultiPointSet;
use crate::region::{HPoint, RBox, Region};

#[derive(Debug, Error)]
pub enum OmegaError {
    #[error("no point of the multiple set lies within radius {radius} of the base point")]
    EmptyPatch { radius: String },
    #[error("the base point is not a point of the multiple set")]
    NotInSet,
    #[error("radii and tolerance must be positive, with initial <= max")]
    BadOptions,
    #[error("base point dimension does not match the scheme")]
    DimMismatch,
    #[error("patch color {0:?} has no window in the family")]
    UnknownColor(String),
    #[error("patch point {0} is not a projection of any structure-lattice point")]
    NotInLattice(String),
    #[error("empty patch carries no constraint")]
    NoConstraints,
    #[error(transparent)]
    ModelSet(#[from] ModelSetError),
    #[error(transparent)]
    Cps(#[from] CpsError),
}

/// Radius schedule and stopping rule for [`omega_point`] and [`srp_test`]:
/// start at `initial_radius`, double until resolved (extent at most
/// `tolerance` on a single fiber) or past `max_radius`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OmegaOptions {
    pub initial_radius: QuadExt,
    pub max_radius: QuadExt,
    pub tolerance: QuadExt,
}

impl OmegaOptions {
    fn check(&self) -> Result<(), OmegaError> {
        let ok = qsign(&self.initial_radius) > 0
            && qsign(&self.tolerance) > 0
            && self.initial_radius <= self.max_radius;
        if ok {
            Ok(())
        } else {
            Err(OmegaError::BadOptions)
        }
    }
}

/// The parameter region `Ω_R(x)`: intersection of `s(z) - V_i` over all
/// multiple-set points within max-norm distance `radius` of `x`, with `z`
/// their lattice lifts. Always contains the internal origin.
pub fn omega_region(
    scheme: &CutProjectScheme,
    family: &WindowFamily,
    x: &[QuadExt],
    radius: &QuadExt,
) -> Result<Region, OmegaError> {
    if x.len() != scheme.physical_dim() {
        return Err(OmegaError::DimMismatch);
    }
    let patch_box = ball_box(x, radius);
    let bbox = family.bounding_box();
    let lattice = scheme.enumerate_lattice(&patch_box, bbox.as_ref())?;
    let negated: Vec<Region> = family.iter().map(|w| w.region.negate()).collect();
    let mut acc: Option<Region> = None;
    for z in &lattice {
        let star = scheme.star(z);
        for (w, neg_region) in family.iter().zip(&negated) {
            if w.region.contains(&star) {
                let constraint = neg_region.translate(&star);
                acc = Some(match acc {
                    None => constraint,
                    Some(cur) => cur.intersect(&constraint),
                });
            }
        }
    }
    acc.ok_or_else(|| OmegaError::EmptyPatch { radius: radius.to_string() })
}

/// The parameter region of an explicitly given patch: for each colored
/// point, every lattice lift contributes `s(lift) - V_color`, lifts of one
/// point are unioned (any of them explains the point), and the per-point
/// constraints are intersected.
///
/// Unlike [`omega_region`], the patch is arbitrary — in particular it may be
/// a *translated* piece of the multiple set, whose stars fall outside the
/// windows. Translating every patch point by the physical part of a lattice
/// element `g` translates the result by exactly `s(g)`; in particular a
/// patch of the set translated by `-γ` has its region translated by
/// `-s(γ)`, matching the parameter of the translated pattern.
///
/// `search` bounds the internal part of candidate lifts when the physical
/// projection is not injective (several lattice points over one physical
/// position); injective schemes ignore it.
pub fn omega_of_patch(
    scheme: &CutProjectScheme,
    family: &WindowFamily,
    patch: &MultiPointSet,
    search: Option<&RBox>,
) -> Result<Region, OmegaError> {
    if patch.dim() != scheme.physical_dim() {
        return Err(OmegaError::DimMismatch);
    }
    let mut acc: Option<Region> = None;
    for (color, points) in patch.colors() {
        let window = family
            .get(color)
            .ok_or_else(|| OmegaError::UnknownColor(color.to_string()))?;
        let neg_window = window.negate();
        for p in points {
            let lifts = scheme.coordinates_in_lattice(p, search)?;
            if lifts.is_empty() {
                let shown: Vec<String> = p.iter().map(ToString::to_string).collect();
                return Err(OmegaError::NotInLattice(format!("({})", shown.join(", "))));
            }
            let mut constraint: Option<Region> = None;
            for z in &lifts {
                let star = scheme.star(z);
                let shifted = neg_window.translate(&star);
                constraint = Some(match constraint {
                    None => shifted,
                    Some(cur) => cur.union(&shifted),
                });
            }
            let constraint = constraint.expect("at least one lift");
            acc = Some(match acc {
                None => constraint,
                Some(cur) => cur.intersect(&constraint),
            });
        }
    }
    acc.ok_or(OmegaError::NoConstraints)
}

/// Outcome of growing the patch radius until the parameter region resolves.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OmegaPoint {
    /// The final parameter region.
    pub region: Region,
    /// The radius at which the schedule stopped.
    pub radius: QuadExt,
    /// Real extent of the final region (componentwise max spread).
    pub extent: QuadExt,
    /// Number of fibers still represented in the final region.
    pub fiber_count: usize,
    /// Did the region resolve (extent <= tolerance, a single fiber)?
    pub resolved: bool,
}

/// Grows `R` through the doubling schedule until `Ω_R(x)` has a single
/// fiber and real extent at most the tolerance, or the radius budget runs
/// out. The result records what was actually achieved.
pub fn omega_point(
    scheme: &CutProjectScheme,
    family: &WindowFamily,
    x: &[QuadExt],
    options: &OmegaOptions,
) -> Result<OmegaPoint, OmegaError> {
    options.check()?;
    let mut radius = options.initial_radius.clone();
    loop {
        let region = omega_region(scheme, family, x, &radius)?;
        let summary = region.extent().expect("omega regions contain the origin");
        let resolved = summary.fiber_count == 1 && summary.extent <= options.tolerance;
        if resolved || &radius * &QuadExt::from_int(2) > options.max_radius {
            return Ok(OmegaPoint {
                region,
                radius,
                extent: summary.extent,
                fiber_count: summary.fiber_count,
                resolved,
            });
        }
        radius = &radius * &QuadExt::from_int(2);
    }
}

/// Verdict of the same-local-pattern test for two points of the set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum SrpVerdict {
    /// The two parameter regions became disjoint: the points see provably
    /// different patterns.
    Distinct { radius: QuadExt },
    /// Both regions resolved to one fiber within tolerance and overlap:
    /// the local parameters agree within `bound`.
    SameWithin { radius: QuadExt, bound: QuadExt },
    /// The radius budget ran out first.
    Unresolved { radius: QuadExt },
}

/// Tests whether two points of the multiple set carry the same local
/// pattern, by anchoring each point's parameter region at the stars of its
/// set-lifts and growing the patch radius until the regions either separate
/// or both resolve.
pub fn srp_test(
    scheme: &CutProjectScheme,
    family: &WindowFamily,
    x: &[QuadExt],
    y: &[QuadExt],
    options: &OmegaOptions,
) -> Result<SrpVerdict, OmegaError> {
    options.check()?;
    let anchors_x = set_lift_stars(scheme, family, x)?;
    let anchors_y = set_lift_stars(scheme, family, y)?;
    let mut radius = options.initial_radius.clone();
    loop {
        let ax = anchored_region(scheme, family, x, &radius, &anchors_x)?;
        let ay = anchored_region(scheme, family, y, &radius, &anchors_y)?;
        if ax.intersect(&ay).is_empty() {
            return Ok(SrpVerdict::Distinct { radius });
        }
        let ex = ax.extent().expect("anchored regions are nonempty");
        let ey = ay.extent().expect("anchored regions are nonempty");
        let both_resolved = ex.fiber_count == 1
            && ey.fiber_count == 1
            && ex.extent <= options.tolerance
            && ey.extent <= options.tolerance;
        if both_resolved {
            return Ok(SrpVerdict::SameWithin { radius, bound: &ex.extent + &ey.extent });
        }
        if &radius * &QuadExt::from_int(2) > options.max_radius {
            return Ok(SrpVerdict::Unresolved { radius });
        }
        radius = &radius * &QuadExt::from_int(2);
    }
}

/// Stars of every lattice lift of `x` that lies in some window — the
/// internal anchors of `x` as a point of the multiple set.
fn set_lift_stars(
    scheme: &CutProjectScheme,
    family: &WindowFamily,
    x: &[QuadExt],
) -> Result<Vec<HPoint>, OmegaError> {
    if x.len() != scheme.physical_dim() {
        return Err(OmegaError::DimMismatch);
    }
    let bbox = family.bounding_box();
    let lifts = scheme.coordinates_in_lattice(x, bbox.as_ref())?;
    let mut anchors = Vec::new();
    for z in &lifts {
        let star = scheme.star(z);
        if family.iter().any(|w| w.region.contains(&star)) {
            anchors.push(star);
        }
    }
    if anchors.is_empty() {
        return Err(OmegaError::NotInSet);
    }
    Ok(anchors)
}

/// `Ω_R(x)` translated to each anchor star and unioned: the region of
/// internal parameters compatible with the patch, anchored at `x` itself.
fn anchored_region(
    scheme: &CutProjectScheme,
    family: &WindowFamily,
    x: &[QuadExt],
    radius: &QuadExt,
    anchors: &[HPoint],
) -> Result<Region, OmegaError> {
    let omega = omega_region(scheme, family, x, radius)?;
    let mut acc: Option<Region> = None;
    for a in anchors {
        let translated = omega.translate(a);
        acc = Some(match acc {
            None => translated,
            Some(cur) => cur.union(&translated),
        });
    }
    Ok(acc.expect("at least one anchor"))
}

/// The closed max-norm ball around `x` as a box.
fn ball_box(x: &[QuadExt], radius: &QuadExt) -> RBox {
    RBox::new(x.iter().map(|xi| (xi - radius, xi + radius)).collect())
        .expect("positive radius keeps lo <= hi")
}
