//! Minimalization: the smallest model multiple set containing a given one.
//!
//! A model multiple set presented over an oversized internal space can be
//! re-presented over a smaller one without changing a single point. Three
//! independent reductions exist, and together they are exhaustive:
//!
//! 1. **Window regularization** — replace each window by the closure of its
//!    interior, dropping lower-dimensional debris that generic lattice stars
//!    never hit.
//! 2. **Redundancy quotient** — translations of the internal space fixing
//!    every window setwise form a subgroup; for bounded windows that
//!    subgroup is purely finite (a real translation moves the maximal box
//!    corner), so it can be found by exhausting `F` and factored out.
//! 3. **Structure-group shrink** — the lattice points whose stars actually
//!    land in a window may generate a proper sublattice `L`; restricting the
//!    scheme to `L` discards untouched cosets and trims the finite part to
//!    the image of `L`.
//!
//! The pipeline below runs the three stages in that order, transports the
//! windows exactly along every re-presentation, and produces an inclusion
//! certificate on a finite view box: the input and output multiple sets are
//! compared point for point, and the output is checked to be a fixed point
//! of the pipeline itself.
//!
//! The shrink stage reads the support from the view box, so its sublattice
//! is a certificate about the view: a too-small view can only make the
//! reported lattice smaller, never wrongly large, and the point-set
//! comparison would expose a wrong shrink immediately.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cps::{CpsError, CutProjectScheme, DensityVerdict, ValidationOptions};
use crate::fingroup::{subgroup_and_quotient, FinElem, GroupError, SubgroupQuotient};
use crate::modelset::{self, ModelSetError, WindowFamily, WindowMode};
use crate::numeric::{column_lattice_basis, IntMatrix, QuadExt};
use crate::pointset::MultiPointSet;
use crate::region::{HPoint, RBox, RegionOrder};

#[derive(Debug, Error)]
pub enum MinimalError {
    #[error("no lattice point hits any window over the view box")]
    EmptySupport,
    #[error("support generates a rank-{rank} sublattice of Z^{needed}; enlarge the view or check the input")]
    RankDeficientSupport { rank: usize, needed: usize },
    #[error("support basis entries exceed i64 range")]
    BasisOverflow,
    #[error(transparent)]
    ModelSet(#[from] ModelSetError),
    #[error(transparent)]
    Cps(#[from] CpsError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Controls for [`minimalize`]: the physical view box on which the support
/// is read and the certificate is checked.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinimalizeOptions {
    pub view: RBox,
}

/// Per-stage diagnostics of one pipeline run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineStages {
    /// Did regularization change any window?
    pub regularized: bool,
    /// Order of the redundancy subgroup (1 = already irredundant).
    pub redundancy_order: u64,
    /// The redundancy subgroup itself, as elements of the input group.
    pub redundancy_elements: Vec<FinElem>,
    /// Cyclic decomposition of the finite part before and after the
    /// redundancy quotient.
    pub group_before: Vec<u64>,
    pub group_after_quotient: Vec<u64>,
    /// Index of the support sublattice in the structure lattice (1 = full).
    pub support_index: i64,
    /// Columns of the support sublattice basis (Hermite staircase).
    pub support_basis: Vec<Vec<i64>>,
    /// Finite part of the final scheme.
    pub group_final: Vec<u64>,
    /// Density verdict for the final scheme's internal orbit.
    pub density_final: DensityVerdict,
    /// The view box the support was read from.
    pub view: RBox,
}

/// A minimal re-presentation: scheme, windows, and how it was reached.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Minimalization {
    pub scheme: CutProjectScheme,
    pub windows: WindowFamily,
    pub stages: PipelineStages,
}

/// Stage 1: replace every window by the closure of its interior.
pub fn star_closure_windows(family: &WindowFamily) -> Result<(WindowFamily, bool), MinimalError> {
    let mut changed = false;
    let out = family.map_regions(|r| {
        let (reg, was_regular) = r.regularize();
        changed |= !was_regular;
        reg
    })?;
    Ok((out, changed))
}

/// Stage 2 search: the subgroup of finite translations fixing every window.
///
/// For bounded windows a redundancy `(t, f)` must have `t = 0` — translating
/// by `t != 0` moves the componentwise-maximal box corner — so exhausting
/// the finite group is a complete search.
pub fn redundancy_subgroup(family: &WindowFamily) -> Result<SubgroupQuotient, MinimalError> {
    let group = family.group().clone();
    let m = family.real_dim();
    let zero_real = vec![QuadExt::zero(); m];
    let mut fixing: Vec<FinElem> = Vec::new();
    for f in group.elements() {
        let shift = HPoint::new(zero_real.clone(), f.clone());
        let fixes_all = family.iter().all(|w| {
            w.region.translate(&shift).compare(&w.region) == RegionOrder::Equal
        });
        if fixes_all {
            fixing.push(f);
        }
    }
    Ok(subgroup_and_quotient(&group, &fixing)?)
}

/// Stage 3 search: Hermite basis of the sublattice generated by all lattice
/// points whose star lies in some (closed) window, read over `view`.
pub fn support_lattice(
    scheme: &CutProjectScheme,
    family: &WindowFamily,
    view: &RBox,
) -> Result<IntMatrix, MinimalError> {
    if family.iter().all(|w| w.region.is_empty()) {
        return Err(MinimalError::EmptySupport);
    }
    let bbox = family.bounding_box();
    let lattice = scheme.enumerate_lattice(view, bbox.as_ref())?;
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for z in lattice {
        let star = scheme.star(&z);
        if family.iter().any(|w| w.region.contains(&star)) {
            cols.push(z);
        }
    }
    if cols.is_empty() {
        return Err(MinimalError::EmptySupport);
    }
    let n = scheme.lattice_rank();
    let m = IntMatrix::from_cols(cols).expect("lifts share the lattice rank");
    let basis = column_lattice_basis(&m);
    if basis.cols() < n {
        return Err(MinimalError::RankDeficientSupport { rank: basis.cols(), needed: n });
    }
    Ok(basis)
}

/// Hermite basis of the sublattice generated by the lifts of an empirical
/// point set. When the physical projection is not injective, every lift
/// inside `internal_box` is taken (pass the window bounding box).
pub fn support_lattice_from_points(
    scheme: &CutProjectScheme,
    set: &MultiPointSet,
    internal_box: Option<&RBox>,
) -> Result<IntMatrix, MinimalError> {
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for p in set.support() {
        cols.extend(scheme.coordinates_in_lattice(&p, internal_box)?);
    }
    if cols.is_empty() {
        return Err(MinimalError::EmptySupport);
    }
    let n = scheme.lattice_rank();
    let m = IntMatrix::from_cols(cols).expect("lifts share the lattice rank");
    let basis = column_lattice_basis(&m);
    if basis.cols() < n {
        return Err(MinimalError::RankDeficientSupport { rank: basis.cols(), needed: n });
    }
    Ok(basis)
}

/// Runs the full pipeline on a symbolically presented model multiple set.
///
/// The output generates exactly the same multiple set (checkable with
/// [`verify_minimal`]) over a scheme with no window debris, no redundancy,
/// and no untouched lattice cosets.
pub fn minimalize(
    scheme: &CutProjectScheme,
    family: &WindowFamily,
    options: &MinimalizeOptions,
) -> Result<Minimalization, MinimalError> {
    // Stage 1: regularize windows.
    let (v1, regularized) = star_closure_windows(family)?;
    let group_before = scheme.internal_group().orders().to_vec();

    // Stage 2: factor out the redundancy subgroup.
    let sq = redundancy_subgroup(&v1)?;
    let redundancy_order = sq.subgroup.len() as u64;
    let (s2, v2) = if redundancy_order > 1 {
        let s2 = scheme.map_fibers(&sq.projection)?;
        // Transport: push along the projection, then relabel into the new
        // scheme's presented group (its embedding targets the quotient).
        let embed = s2.group_embedding().clone();
        let v2 = v1.map_regions(|r| r.push_fibers(&sq.projection).pull_fibers(&embed))?;
        (s2, v2)
    } else {
        (scheme.clone(), v1)
    };
    let group_after_quotient = s2.internal_group().orders().to_vec();

    // Stage 3: restrict to the sublattice the support generates.
    let basis = support_lattice(&s2, &v2, &options.view)?;
    let (s3, v3, support_index, support_basis) = if basis.is_identity() {
        let n = s2.lattice_rank();
        (s2, v2, 1i64, identity_cols(n))
    } else {
        let index: i64 = i64::try_from(basis.det())
            .map_err(|_| MinimalError::BasisOverflow)?
            .abs();
        let cols = basis_cols(&basis)?;
        let s3 = s2.restrict_lattice(&basis)?;
        let embed = s3.group_embedding().clone();
        let v3 = v2.map_regions(|r| r.pull_fibers(&embed))?;
        (s3, v3, index, cols)
    };

    let group_final = s3.internal_group().orders().to_vec();
    let density_final = s3.validate(&ValidationOptions::default()).density;
    Ok(Minimalization {
        scheme: s3,
        windows: v3,
        stages: PipelineStages {
            regularized,
            redundancy_order,
            redundancy_elements: sq.subgroup.iter().cloned().collect(),
            group_before,
            group_after_quotient,
            support_index,
            support_basis,
            group_final,
            density_final,
            view: options.view.clone(),
        },
    })
}

fn identity_cols(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|j| (0..n).map(|i| i64::from(i == j)).collect())
        .collect()
}

fn basis_cols(basis: &IntMatrix) -> Result<Vec<Vec<i64>>, MinimalError> {
    (0..basis.cols())
        .map(|j| {
            basis
                .col(j)
                .into_iter()
                .map(|v| i64::try_from(v).map_err(|_| MinimalError::BasisOverflow))
                .collect()
        })
        .collect()
}

/// Which side of the comparison a witness point came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessKind {
    /// A point of the input multiple set that the minimal one lacks.
    MissingFromMinimal,
    /// A point of the minimal multiple set beyond the input one.
    ExcessInMinimal,
}

/// A concrete point where the two generations disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalWitness {
    pub color: String,
    pub point: Vec<QuadExt>,
    pub kind: WitnessKind,
}

/// Inclusion certificate for a pipeline result, checked exactly on the view.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinimalCertificate {
    /// Every input point is a point of the minimal set (closed windows).
    pub containment: bool,
    /// The minimal set adds no points over the input (closed windows).
    pub no_excess: bool,
    /// Interior-window generations agree as well.
    pub interior_matches: bool,
    /// Re-running the pipeline on the output changes nothing.
    pub idempotent: bool,
    pub witnesses: Vec<MinimalWitness>,
}

impl MinimalCertificate {
    pub fn passed(&self) -> bool {
        self.containment && self.no_excess && self.interior_matches && self.idempotent
    }
}

/// Certifies a [`Minimalization`] against its input on the stored view box:
/// generates both multiple sets exactly and compares them color by color,
/// then re-runs the pipeline on the output to confirm it is a fixed point.
pub fn verify_minimal(
    scheme: &CutProjectScheme,
    family: &WindowFamily,
    result: &Minimalization,
) -> Result<MinimalCertificate, MinimalError> {
    let view = &result.stages.view;
    let amb_closed = modelset::generate(scheme, family, view, WindowMode::Closed)?;
    let min_closed = modelset::generate(&result.scheme, &result.windows, view, WindowMode::Closed)?;
    let amb_open = modelset::generate(scheme, family, view, WindowMode::Interior)?;
    let min_open = modelset::generate(&result.scheme, &result.windows, view, WindowMode::Interior)?;

    let mut witnesses = Vec::new();
    let mut containment = true;
    let mut no_excess = true;
    for w in family.iter() {
        let a = amb_closed.points(&w.color);
        let b = min_closed.points(&w.color);
        for p in a {
            if b.binary_search(p).is_err() {
                containment = false;
                witnesses.push(MinimalWitness {
                    color: w.color.clone(),
                    point: p.clone(),
                    kind: WitnessKind::MissingFromMinimal,
                });
            }
        }
        for p in b {
            if a.binary_search(p).is_err() {
                no_excess = false;
                witnesses.push(MinimalWitness {
                    color: w.color.clone(),
                    point: p.clone(),
                    kind: WitnessKind::ExcessInMinimal,
                });
            }
        }
    }
    let interior_matches = family.iter().all(|w| {
        amb_open.points(&w.color) == min_open.points(&w.color)
    });

    let again = minimalize(
        &result.scheme,
        &result.windows,
        &MinimalizeOptions { view: view.clone() },
    )?;
    let idempotent = !again.stages.regularized
        && again.stages.redundancy_order == 1
        && again.stages.support_index == 1
        && again.scheme == result.scheme
        && again.windows == result.windows;

    Ok(MinimalCertificate { containment, no_excess, interior_matches, idempotent, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::modelset::WindowFamily;
    use crate::region::{RBox, Region};

    fn q(n: i64) -> QuadExt {
        QuadExt::from_int(n)
    }

    fn view(lo: i64, hi: i64) -> RBox {
        RBox::interval(q(lo), q(hi)).unwrap()
    }

    #[test]
    fn fibonacci_is_already_minimal() {
        let scheme = fixtures::fibonacci();
        let family = fixtures::fibonacci_window();
        let opts = MinimalizeOptions { view: view(-40, 40) };
        let res = minimalize(&scheme, &family, &opts).unwrap();
        assert!(!res.stages.regularized);
        assert_eq!(res.stages.redundancy_order, 1);
        assert_eq!(res.stages.support_index, 1);
        assert_eq!(res.scheme, scheme);
        assert_eq!(res.windows, family);
        let cert = verify_minimal(&scheme, &family, &res).unwrap();
        assert!(cert.passed(), "certificate: {cert:?}");
    }

    #[test]
    fn duplicated_parity_windows_collapse_to_plain_scheme() {
        // One window copied onto both parity fibers: the fiber carries no
        // information, and the pipeline deletes it.
        let scheme = fixtures::two_color();
        let family = fixtures::two_color_duplicated_windows();
        let opts = MinimalizeOptions { view: view(-30, 30) };
        let res = minimalize(&scheme, &family, &opts).unwrap();
        assert_eq!(res.stages.redundancy_order, 2);
        assert_eq!(res.stages.group_before, vec![2]);
        assert_eq!(res.stages.group_after_quotient, Vec::<u64>::new());
        assert_eq!(res.stages.support_index, 1);
        assert_eq!(res.scheme, fixtures::fibonacci());
        let min_region = res.windows.get("tile").unwrap();
        let fib_region = fixtures::fibonacci_window().get("tile").unwrap().clone();
        assert_eq!(min_region.compare(&fib_region), RegionOrder::Equal);
        let cert = verify_minimal(&scheme, &family, &res).unwrap();
        assert!(cert.passed(), "certificate: {cert:?}");
    }

    #[test]
    fn split_parity_windows_are_minimal() {
        // Different windows per fiber: no redundancy, full support lattice.
        let scheme = fixtures::two_color();
        let family = fixtures::two_color_split_windows();
        let opts = MinimalizeOptions { view: view(-30, 30) };
        let res = minimalize(&scheme, &family, &opts).unwrap();
        assert_eq!(res.stages.redundancy_order, 1);
        assert_eq!(res.stages.support_index, 1);
        assert_eq!(res.scheme, scheme);
        let cert = verify_minimal(&scheme, &family, &res).unwrap();
        assert!(cert.passed(), "certificate: {cert:?}");
    }

    #[test]
    fn single_fiber_window_shrinks_the_lattice() {
        // Only the even fiber carries a window, so only even-coordinate-sum
        // lattice points contribute: the support lattice has index 2, the
        // restricted finite component becomes trivial, and the point set is
        // reproduced exactly by the smaller scheme.
        let scheme = fixtures::two_color();
        let family = WindowFamily::new(vec![crate::modelset::NamedWindow {
            color: "even".into(),
            region: fixtures::two_color_split_windows().get("even").unwrap().clone(),
        }])
        .unwrap();
        let opts = MinimalizeOptions { view: view(-30, 30) };
        let res = minimalize(&scheme, &family, &opts).unwrap();
        assert_eq!(res.stages.redundancy_order, 1);
        assert_eq!(res.stages.support_index, 2);
        assert_eq!(res.stages.group_final, Vec::<u64>::new());
        assert_eq!(res.scheme.lattice_rank(), 2);
        let cert = verify_minimal(&scheme, &family, &res).unwrap();
        assert!(cert.passed(), "certificate: {cert:?}");
        // The shrunk window still is the golden window over the sole fiber.
        let region = res.windows.get("even").unwrap();
        let expected = Region::real_box(
            RBox::interval(q(-1), fixtures::golden_ratio() - q(1)).unwrap(),
        )
        .unwrap();
        assert_eq!(region.compare(&expected), RegionOrder::Equal);
    }

    #[test]
    fn degenerate_window_reports_empty_support() {
        // A degenerate box regularizes away; nothing is left to support.
        let scheme = fixtures::fibonacci();
        let family = WindowFamily::single(
            "dot",
            Region::real_box(RBox::interval(q(0), q(0)).unwrap()).unwrap(),
        )
        .unwrap();
        let opts = MinimalizeOptions { view: view(-10, 10) };
        match minimalize(&scheme, &family, &opts) {
            Err(MinimalError::EmptySupport) => {}
            other => panic!("expected EmptySupport, got {other:?}"),
        }
    }

    #[test]
    fn diagonal_support_is_rank_deficient() {
        // Rational toy scheme, window pinned to star 0 on the even fiber:
        // the lifts are exactly the diagonal (t, t), a rank-1 subgroup.
        let scheme = fixtures::rational_toy();
        let w = RBox::interval(QuadExt::from_frac(-1, 4), QuadExt::from_frac(1, 4)).unwrap();
        let family = WindowFamily::single(
            "diag",
            Region::single(1, scheme.internal_group().clone(), FinElem(vec![0]), w).unwrap(),
        )
        .unwrap();
        match support_lattice(&scheme, &family, &view(-10, 10)) {
            Err(MinimalError::RankDeficientSupport { rank: 1, needed: 2 }) => {}
            other => panic!("expected rank-deficient support, got {other:?}"),
        }
    }

    #[test]
    fn empirical_support_matches_symbolic() {
        let scheme = fixtures::fibonacci();
        let family = fixtures::fibonacci_window();
        let v = view(-20, 20);
        let symbolic = support_lattice(&scheme, &family, &v).unwrap();
        let set =
            modelset::generate(&scheme, &family, &v, WindowMode::Closed).unwrap();
        let empirical =
            support_lattice_from_points(&scheme, &set, family.bounding_box().as_ref())
                .unwrap();
        assert_eq!(symbolic, empirical);
        assert!(symbolic.is_identity());
    }

    #[test]
    fn pipeline_report_serializes() {
        let scheme = fixtures::two_color();
        let family = fixtures::two_color_duplicated_windows();
        let opts = MinimalizeOptions { view: view(-15, 15) };
        let res = minimalize(&scheme, &family, &opts).unwrap();
        let json = serde_json::to_string_pretty(&res).unwrap();
        let back: Minimalization = serde_json::from_str(&json).unwrap();
        assert_eq!(back.scheme, res.scheme);
        assert_eq!(back.windows, res.windows);
        assert_eq!(back.stages, res.stages);
        assert!(json.contains("\"redundancy_order\": 2"));
    }
}
