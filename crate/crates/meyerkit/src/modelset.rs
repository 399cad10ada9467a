//! Model multiple sets: windows, generation, and interpolation checking.
//!
//! A model multiple set is a family of windows `W_1, ..., W_s` in the
//! internal space; color `i` of the set collects the physical images of the
//! lattice points whose star falls in `W_i`. Generation is exact end to end:
//! lattice candidates come from the stacked inverse, window membership from
//! exact region location. The closed/interior distinction matters — a
//! multiple set `Λ` is *interpolated* by the family when
//! `P(int W_i) ⊆ Λ_i ⊆ P(W_i)` for every color — and both bounds are
//! computed here, point for point.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cps::{CpsError, CutProjectScheme};
use crate::numeric::QuadExt;
use crate::pointset::{inf_dist, MultiPointSet, PointSetError};
use crate::region::{RBox, Region, RegionError};

#[derive(Debug, Error)]
pub enum ModelSetError {
    #[error("window family is empty")]
    EmptyFamily,
    #[error("duplicate window color {0:?}")]
    DuplicateColor(String),
    #[error("windows live in different internal spaces")]
    MixedWindowSpaces,
    #[error("window space does not match the scheme's internal space")]
    WindowSchemeMismatch,
    #[error("point set does not match the scheme's physical dimension")]
    PointDimMismatch,
    #[error(transparent)]
    Cps(#[from] CpsError),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Points(#[from] PointSetError),
}

/// One window with its color label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedWindow {
    pub color: String,
    pub region: Region,
}

/// A family of windows over one internal space, with distinct colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowFamily {
    windows: Vec<NamedWindow>,
}

impl WindowFamily {
    pub fn new(windows: Vec<NamedWindow>) -> Result<Self, ModelSetError> {
        let Some(first) = windows.first() else {
            return Err(ModelSetError::EmptyFamily);
        };
        let (m, group) = (first.region.real_dim(), first.region.group().clone());
        let mut seen = std::collections::BTreeSet::new();
        for w in &windows {
            if !seen.insert(w.color.clone()) {
                return Err(ModelSetError::DuplicateColor(w.color.clone()));
            }
            if w.region.real_dim() != m || w.region.group() != &group {
                return Err(ModelSetError::MixedWindowSpaces);
            }
        }
        Ok(WindowFamily { windows })
    }

    pub fn single(color: &str, region: Region) -> Result<Self, ModelSetError> {
        Self::new(vec![NamedWindow { color: color.to_string(), region }])
    }

    pub fn iter(&self) -> impl Iterator<Item = &NamedWindow> {
        self.windows.iter()
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn get(&self, color: &str) -> Option<&Region> {
        self.windows.iter().find(|w| w.color == color).map(|w| &w.region)
    }

    pub fn real_dim(&self) -> usize {
        self.windows[0].region.real_dim()
    }

    pub fn group(&self) -> &crate::fingroup::FinAbGroup {
        self.windows[0].region.group()
    }

    /// Componentwise bounding box of all windows' real parts; `None` when
    /// `m = 0`.
    pub fn bounding_box(&self) -> Option<RBox> {
        let mut acc: Option<RBox> = None;
        for w in &self.windows {
            let Some(bb) = w.region.bounding_box() else { continue };
            acc = Some(match acc {
                None => bb,
                Some(cur) => {
                    let iv = cur
                        .intervals()
                        .iter()
                        .zip(bb.intervals())
                        .map(|((alo, ahi), (blo, bhi))| {
                            (alo.min_of(blo), ahi.max_of(bhi))
                        })
                        .collect();
                    RBox::new(iv).expect("componentwise hull is a box")
                }
            });
        }
        acc
    }

    /// Transforms every window with the same region map.
    pub fn map_regions(
        &self,
        mut f: impl FnMut(&Region) -> Region,
    ) -> Result<WindowFamily, ModelSetError> {
        WindowFamily::new(
            self.windows
                .iter()
                .map(|w| NamedWindow { color: w.color.clone(), region: f(&w.region) })
                .collect(),
        )
    }
}

/// Wire form: `{"windows": [{"color", "region"}]}`.
#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    windows: Vec<NamedWindow>,
}

impl Serialize for WindowFamily {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        FamilyRepr { windows: self.windows.clone() }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for WindowFamily {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = FamilyRepr::deserialize(de)?;
        WindowFamily::new(repr.windows).map_err(serde::de::Error::custom)
    }
}

/// Whether window membership uses the closed window or its interior.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WindowMode {
    Closed,
    Interior,
}

/// Generates the model multiple set of `windows` over `phys_box`.
///
/// Colors of the output are the window colors; the carrier is `phys_box`.
/// `Closed` mode produces `P(W_i)`, `Interior` mode `P(int W_i)`; the two
/// differ exactly at lattice points whose star hits a window boundary.
pub fn generate(
    scheme: &CutProjectScheme,
    windows: &WindowFamily,
    phys_box: &RBox,
    mode: WindowMode,
) -> Result<MultiPointSet, ModelSetError> {
    if windows.real_dim() != scheme.internal_real_dim()
        || windows.group() != scheme.internal_group()
    {
        return Err(ModelSetError::WindowSchemeMismatch);
    }
    if windows.iter().all(|w| w.region.is_empty()) {
        return Ok(MultiPointSet::new(scheme.physical_dim(), phys_box.clone())?);
    }
    let bbox = windows.bounding_box();
    let lattice = scheme.enumerate_lattice(phys_box, bbox.as_ref())?;
    let mut out = MultiPointSet::new(scheme.physical_dim(), phys_box.clone())?;
    for z in &lattice {
        let star = scheme.star(z);
        let mut phys: Option<Vec<QuadExt>> = None;
        for w in windows.iter() {
            let keep = match mode {
                WindowMode::Closed => w.region.contains(&star),
                WindowMode::Interior => w.region.contains_interior(&star),
            };
            if keep {
                let p = match &phys {
                    Some(p) => p.clone(),
                    None => {
                        let p = scheme.physical(z);
                        phys = Some(p.clone());
                        p
                    }
                };
                out.add(&w.color, p)?;
            }
        }
    }
    Ok(out)
}

/// Per-color outcome of an interpolation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorInterpolation {
    pub color: String,
    /// Points of `P(int W)` over the carrier that the set is missing.
    pub missing_interior: Vec<Vec<QuadExt>>,
    /// Points of the set that are not in `P(W)`.
    pub excess: Vec<Vec<QuadExt>>,
    /// Points of the set sitting exactly on the window boundary (legal).
    pub boundary_count: u64,
}

/// Result of checking `P(int W_i) ⊆ Λ_i ⊆ P(W_i)` color by color over the
/// set's carrier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpolationReport {
    pub colors: Vec<ColorInterpolation>,
    /// Colors in the set with no window, or windows with no color in the
    /// set; either direction breaks interpolation.
    pub unmatched_colors: Vec<String>,
}

impl InterpolationReport {
    pub fn passed(&self) -> bool {
        self.unmatched_colors.is_empty()
            && self
                .colors
                .iter()
                .all(|c| c.missing_interior.is_empty() && c.excess.is_empty())
    }
}

/// Checks interpolation of `set` by the window family over the set's own
/// carrier.
///
/// With `tolerance = None`, membership is exact point equality. With a
/// positive tolerance `t`, a point matches when some reference point lies
/// within max-norm distance `t` — for empirical data whose coordinates were
/// rounded on the way in. The boundary count is only tracked exactly.
pub fn check_interpolation(
    scheme: &CutProjectScheme,
    windows: &WindowFamily,
    set: &MultiPointSet,
    tolerance: Option<&QuadExt>,
) -> Result<InterpolationReport, ModelSetError> {
    if set.dim() != scheme.physical_dim() {
        return Err(ModelSetError::PointDimMismatch);
    }
    let closed = generate(scheme, windows, set.carrier(), WindowMode::Closed)?;
    let interior = generate(scheme, windows, set.carrier(), WindowMode::Interior)?;
    let mut unmatched: Vec<String> = set
        .color_names()
        .into_iter()
        .filter(|c| windows.get(c).is_none())
        .map(String::from)
        .collect();
    for w in windows.iter() {
        if set.points(&w.color).is_empty() && !closed.points(&w.color).is_empty() {
            // The window generates points here but the set has none at all
            // under that color; report unless the interior truly is empty.
            if !interior.points(&w.color).is_empty() {
                unmatched.push(w.color.clone());
            }
        }
    }
    let mut colors = Vec::new();
    for w in windows.iter() {
        let have = set.points(&w.color);
        let closed_pts = closed.points(&w.color);
        let interior_pts = interior.points(&w.color);
        let missing_interior: Vec<Vec<QuadExt>> = interior_pts
            .iter()
            .filter(|p| !matches_any(p, have, tolerance))
            .cloned()
            .collect();
        let excess: Vec<Vec<QuadExt>> = have
            .iter()
            .filter(|p| !matches_any(p, closed_pts, tolerance))
            .cloned()
            .collect();
        let boundary_count = have
            .iter()
            .filter(|p| {
                closed_pts.binary_search(p).is_ok() && interior_pts.binary_search(p).is_err()
            })
            .count() as u64;
        colors.push(ColorInterpolation {
            color: w.color.clone(),
            missing_interior,
            excess,
            boundary_count,
        });
    }
    unmatched.sort();
    unmatched.dedup();
    Ok(InterpolationReport { colors, unmatched_colors: unmatched })
}

/// Is `p` equal to some reference point (or within the tolerance of one)?
fn matches_any(p: &[QuadExt], reference: &[Vec<QuadExt>], tol: Option<&QuadExt>) -> bool {
    match tol {
        None => reference.binary_search_by(|r| r.as_slice().cmp(p)).is_ok(),
        Some(t) => reference.iter().any(|r| inf_dist(r, p) <= *t),
    }
}

/// Internal-space bounding box of a family plus a margin on every axis
/// (used by pipelines that need slightly enlarged enumeration bounds).
pub fn padded_bounding_box(family: &WindowFamily, pad: &QuadExt) -> Option<RBox> {
    family.bounding_box().map(|bb| {
        let iv = bb
            .intervals()
            .iter()
            .map(|(lo, hi)| (lo - pad, hi + pad))
            .collect();
        RBox::new(iv).expect("padding keeps lo <= hi")
    })
}
