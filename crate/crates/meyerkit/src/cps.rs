//! Cut-and-project schemes with internal space `R^m x F`.
//!
//! A scheme couples the structure lattice `Z^n` (with `n = d + m`) to two
//! projections with entries in a fixed real quadratic field `Q(sqrt(D))`:
//! the physical map `A : Z^n -> R^d` and the internal map
//! `s(z) = (B z, c(z)) in R^m x F`, where `c` is a homomorphism onto a
//! finite abelian group. The stacked matrix `[A; B]` must be invertible, so
//! the lattice embeds in `R^d x R^m` with bounded cells; everything the
//! library computes rides on that inverse being exact.
//!
//! Construction normalizes `F` to the image of `c` (keeping an embedding of
//! the new presentation into the group that was given), records whether `A`
//! is injective on the lattice, and rejects mixed quadratic fields up front.
//! `A` failing to be injective is legal — some interesting schemes project
//! several lattice points to one physical position — but it changes how
//! physical coordinates lift, so it is tracked explicitly and reported by
//! [`CutProjectScheme::validate`].

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fingroup::{
    kernel_lattice, normalize_image, FinAbGroup, FinElem, FinHom, FreeHom, GroupError,
};
use crate::numeric::{
    clear_denominators, is_squarefree, rational_coordinate_stack, rational_coordinate_stack_vec,
    IntMatrix, QMatrix, QuadExt,
};
use crate::region::{HPoint, RBox};

/// Hard cap on how many lattice candidates a single enumeration may visit.
const ENUMERATION_CAP: u64 = 1 << 24;

#[derive(Debug, Error)]
pub enum CpsError {
    #[error("physical dimension must be at least 1")]
    NoPhysicalSpace,
    #[error("internal real dimension {0} exceeds the supported maximum 3")]
    InternalDimTooLarge(usize),
    #[error("discriminant {0} is not squarefree")]
    BadDiscriminant(u64),
    #[error("matrix {name} has shape {got_rows}x{got_cols}, expected {want_rows}x{want_cols}")]
    MatrixShape { name: &'static str, got_rows: usize, got_cols: usize, want_rows: usize, want_cols: usize },
    #[error("matrix entry lives in Q(sqrt({got})) but the scheme is over Q(sqrt({want}))")]
    ForeignField { got: u64, want: u64 },
    #[error("stacked projection matrix [A; B] is singular")]
    SingularEmbedding,
    #[error("finite component: {0}")]
    Group(#[from] GroupError),
    #[error("lattice enumeration needs a bounded internal box when m > 0")]
    UnboundedEnumeration,
    #[error("physical point has several lattice lifts; an internal box is required")]
    UnboundedPreimage,
    #[error("enumeration would visit more than {ENUMERATION_CAP} lattice candidates")]
    EnumerationTooLarge,
    #[error("sublattice basis must be square and nonsingular")]
    DegenerateSublattice,
    #[error("box has dimension {got}, expected {want}")]
    BoxDim { got: usize, want: usize },
}

/// Raw ingredients for a scheme, as they appear in configuration files.
#[derive(Clone, Debug)]
pub struct CpsParams {
    pub d: usize,
    pub m: usize,
    pub disc: u64,
    pub a_rows: Vec<Vec<QuadExt>>,
    pub b_rows: Vec<Vec<QuadExt>>,
    pub group: FinAbGroup,
    pub c_images: Vec<FinElem>,
    pub label: Option<String>,
}

/// A validated cut-and-project scheme.
#[derive(Clone)]
pub struct CutProjectScheme {
    d: usize,
    m: usize,
    disc: u64,
    a: QMatrix,
    b: QMatrix,
    /// Internal finite component, codomain already replaced by `im(c)`.
    c: FreeHom,
    /// Injection of the normalized group back into the group that was given.
    embed: FinHom,
    /// The finite group exactly as the caller presented it.
    given_group: FinAbGroup,
    /// Exact inverse of the stacked `[A; B]`.
    t_inv: QMatrix,
    a_injective: bool,
    label: Option<String>,
}

impl PartialEq for CutProjectScheme {
    /// Scheme identity: same projections and same (normalized) finite data.
    /// Labels and the originally-given group presentation do not count.
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d
            && self.m == other.m
            && self.disc == other.disc
            && self.a == other.a
            && self.b == other.b
            && self.c == other.c
    }
}

impl std::fmt::Debug for CutProjectScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CutProjectScheme")
            .field("label", &self.label)
            .field("d", &self.d)
            .field("m", &self.m)
            .field("disc", &self.disc)
            .field("F", &self.c.codomain.orders())
            .field("a_injective", &self.a_injective)
            .finish()
    }
}

impl CutProjectScheme {
    pub fn new(params: CpsParams) -> Result<Self, CpsError> {
        let CpsParams { d, m, disc, a_rows, b_rows, group, c_images, label } = params;
        if d == 0 {
            return Err(CpsError::NoPhysicalSpace);
        }
        if m > crate::region::MAX_REAL_DIM {
            return Err(CpsError::InternalDimTooLarge(m));
        }
        if !is_squarefree(disc) {
            return Err(CpsError::BadDiscriminant(disc));
        }
        let n = d + m;
        let check_shape = |name: &'static str, rows: &[Vec<QuadExt>], want_rows: usize| {
            if rows.len() != want_rows || rows.iter().any(|r| r.len() != n) {
                let got_cols = rows.first().map(|r| r.len()).unwrap_or(0);
                return Err(CpsError::MatrixShape {
                    name,
                    got_rows: rows.len(),
                    got_cols,
                    want_rows,
                    want_cols: n,
                });
            }
            Ok(())
        };
        check_shape("A", &a_rows, d)?;
        check_shape("B", &b_rows, m)?;
        for entry in a_rows.iter().chain(&b_rows).flatten() {
            if entry.disc() != 1 && entry.disc() != disc {
                return Err(CpsError::ForeignField { got: entry.disc(), want: disc });
            }
        }
        let a = QMatrix::from_rows(a_rows);
        let b = if m == 0 { QMatrix::zero(0, n) } else { QMatrix::from_rows(b_rows) };
        if c_images.len() != n {
            return Err(GroupError::HomImageCount { got: c_images.len(), want: n }.into());
        }
        let c_given = FreeHom::new(group.clone(), c_images)?;
        let stacked = a.stack(&b);
        let t_inv = stacked.inverse().ok_or(CpsError::SingularEmbedding)?;
        let norm = normalize_image(&c_given);
        let a_injective = rational_coordinate_stack(&a).rank() == n;
        Ok(CutProjectScheme {
            d,
            m,
            disc,
            a,
            b,
            c: norm.hom,
            embed: norm.embedding,
            given_group: group,
            t_inv,
            a_injective,
            label,
        })
    }

    pub fn physical_dim(&self) -> usize {
        self.d
    }

    pub fn internal_real_dim(&self) -> usize {
        self.m
    }

    /// Rank of the structure lattice (`d + m`).
    pub fn lattice_rank(&self) -> usize {
        self.d + self.m
    }

    pub fn disc(&self) -> u64 {
        self.disc
    }

    pub fn physical_matrix(&self) -> &QMatrix {
        &self.a
    }

    pub fn internal_matrix(&self) -> &QMatrix {
        &self.b
    }

    /// The finite component `c : Z^n -> F`, with `F = im(c)`.
    pub fn finite_component(&self) -> &FreeHom {
        &self.c
    }

    /// The internal finite group `F` (always the image of `c`).
    pub fn internal_group(&self) -> &FinAbGroup {
        &self.c.codomain
    }

    /// Injection of [`Self::internal_group`] into the group the scheme was
    /// constructed with; identity-like when nothing was shrunk.
    pub fn group_embedding(&self) -> &FinHom {
        &self.embed
    }

    pub fn given_group(&self) -> &FinAbGroup {
        &self.given_group
    }

    pub fn is_a_injective(&self) -> bool {
        self.a_injective
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn set_label(&mut self, label: Option<String>) {
        self.label = label;
    }

    /// Physical projection `A z`.
    pub fn physical(&self, z: &[BigInt]) -> Vec<QuadExt> {
        self.a.mul_int_vec(z)
    }

    /// Internal star map `s(z) = (B z, c(z))`.
    pub fn star(&self, z: &[BigInt]) -> HPoint {
        HPoint::new(self.b.mul_int_vec(z), self.c.apply(z))
    }

    /// All lattice points whose physical image lies in `phys_box` and whose
    /// internal real part lies in `internal_box`, in lexicographic order.
    ///
    /// The internal box is mandatory when `m > 0` (otherwise the fiber over
    /// any physical patch is infinite); the finite component is *not*
    /// filtered here — window logic happens at a higher level.
    pub fn enumerate_lattice(
        &self,
        phys_box: &RBox,
        internal_box: Option<&RBox>,
    ) -> Result<Vec<Vec<BigInt>>, CpsError> {
        if phys_box.dim() != self.d {
            return Err(CpsError::BoxDim { got: phys_box.dim(), want: self.d });
        }
        let internal = match (self.m, internal_box) {
            (0, _) => None,
            (_, None) => return Err(CpsError::UnboundedEnumeration),
            (_, Some(bx)) => {
                if bx.dim() != self.m {
                    return Err(CpsError::BoxDim { got: bx.dim(), want: self.m });
                }
                Some(bx)
            }
        };
        // w-intervals in R^n = R^d x R^m, mapped through [A; B]^{-1}.
        let mut intervals: Vec<(QuadExt, QuadExt)> = phys_box.intervals().to_vec();
        if let Some(bx) = internal {
            intervals.extend(bx.intervals().iter().cloned());
        }
        let bounds = interval_image(&self.t_inv, &intervals);
        let ranges = integer_ranges(&bounds)?;
        let mut out = Vec::new();
        let mut cursor: Vec<BigInt> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
        if ranges.iter().any(|(lo, hi)| lo > hi) {
            return Ok(out);
        }
        loop {
            let phys = self.a.mul_int_vec(&cursor);
            if box_contains(phys_box, &phys) {
                let keep = match internal {
                    None => true,
                    Some(bx) => box_contains(bx, &self.b.mul_int_vec(&cursor)),
                };
                if keep {
                    out.push(cursor.clone());
                }
            }
            // Lexicographic odometer over the integer ranges.
            let mut k = cursor.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                cursor[k] += 1;
                if cursor[k] <= ranges[k].1 {
                    break;
                }
                cursor[k] = ranges[k].0.clone();
            }
        }
    }

    /// All lattice points with physical image exactly `x`.
    ///
    /// When `A` is injective there is at most one lift and no box is needed.
    /// Otherwise lifts form a coset of the kernel sublattice of `A`, and a
    /// closed internal box must be supplied to make the answer finite: the
    /// returned lifts are those with `B z` inside it.
    pub fn coordinates_in_lattice(
        &self,
        x: &[QuadExt],
        internal_box: Option<&RBox>,
    ) -> Result<Vec<Vec<BigInt>>, CpsError> {
        assert_eq!(x.len(), self.d, "physical point dimension mismatch");
        let n = self.lattice_rank();
        // Exact rational system: split Q(sqrt(D)) coordinates over Q and
        // clear denominators jointly with the right-hand side.
        let stack = rational_coordinate_stack(&self.a);
        let rhs = rational_coordinate_stack_vec(x);
        let mut aug_rows: Vec<Vec<QuadExt>> = Vec::with_capacity(stack.rows());
        for i in 0..stack.rows() {
            let mut row = stack.row(i);
            row.push(rhs[i].clone());
            aug_rows.push(row);
        }
        let (aug_int, _) = clear_denominators(&QMatrix::from_rows(aug_rows));
        let mut m_rows: Vec<Vec<BigInt>> = Vec::with_capacity(aug_int.rows());
        let mut r_vec: Vec<BigInt> = Vec::with_capacity(aug_int.rows());
        for i in 0..aug_int.rows() {
            let full = aug_int.row(i);
            m_rows.push(full[..n].to_vec());
            r_vec.push(full[n].clone());
        }
        let m_int = IntMatrix::from_rows(m_rows).expect("uniform row length");
        let Some(sol) = crate::numeric::solve_integer(&m_int, &r_vec) else {
            return Ok(Vec::new());
        };
        if sol.kernel.is_empty() {
            return Ok(vec![sol.particular]);
        }
        // Several lifts: enumerate the kernel coset within the internal box.
        let Some(bx) = internal_box else {
            return Err(CpsError::UnboundedPreimage);
        };
        if bx.dim() != self.m {
            return Err(CpsError::BoxDim { got: bx.dim(), want: self.m });
        }
        let k = sol.kernel.len();
        let kernel = IntMatrix::from_cols(sol.kernel.clone()).expect("uniform kernel vectors");
        let bk = self.b.mul_int(&kernel); // m x k, injective on the kernel
        // Pick k rows of B*K forming an invertible square block.
        let mut chosen: Vec<usize> = Vec::new();
        for i in 0..self.m {
            if chosen.len() == k {
                break;
            }
            let mut trial = chosen.clone();
            trial.push(i);
            let sub = QMatrix::from_rows(trial.iter().map(|&r| bk.row(r)).collect());
            if sub.rank() == trial.len() {
                chosen = trial;
            }
        }
        assert_eq!(chosen.len(), k, "[A; B] invertible makes B injective on ker A");
        let sub = QMatrix::from_rows(chosen.iter().map(|&r| bk.row(r)).collect());
        let sub_inv = sub.inverse().expect("chosen block is invertible");
        let shift = self.b.mul_int_vec(&sol.particular);
        let t_intervals: Vec<(QuadExt, QuadExt)> = chosen
            .iter()
            .map(|&r| {
                let (lo, hi) = &bx.intervals()[r];
                (lo - &shift[r], hi - &shift[r])
            })
            .collect();
        let bounds = interval_image(&sub_inv, &t_intervals);
        let ranges = integer_ranges(&bounds)?;
        if ranges.iter().any(|(lo, hi)| lo > hi) {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut t: Vec<BigInt> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
        loop {
            let mut z = sol.particular.clone();
            for (j, tj) in t.iter().enumerate() {
                for (zi, kij) in z.iter_mut().zip(kernel.col(j)) {
                    *zi += tj * kij;
                }
            }
            if box_contains(bx, &self.b.mul_int_vec(&z)) {
                out.push(z);
            }
            let mut kk = t.len();
            loop {
                if kk == 0 {
                    out.sort();
                    return Ok(out);
                }
                kk -= 1;
                t[kk] += 1;
                if t[kk] <= ranges[kk].1 {
                    break;
                }
                t[kk] = ranges[kk].0.clone();
            }
        }
    }

    /// The scheme restricted to the sublattice spanned by the columns of
    /// `basis` (which must be square and nonsingular): new projections are
    /// `A L` and `B L`, and the finite component is re-normalized to its
    /// image on the sublattice.
    pub fn restrict_lattice(&self, basis: &IntMatrix) -> Result<CutProjectScheme, CpsError> {
        let n = self.lattice_rank();
        if basis.rows() != n || basis.cols() != n || basis.det().is_zero() {
            return Err(CpsError::DegenerateSublattice);
        }
        let a2 = self.a.mul_int(basis);
        let b2 = self.b.mul_int(basis);
        let c2 = self.c.restrict(basis);
        CutProjectScheme::new(CpsParams {
            d: self.d,
            m: self.m,
            disc: self.disc,
            a_rows: (0..self.d).map(|i| a2.row(i)).collect(),
            b_rows: (0..self.m).map(|i| b2.row(i)).collect(),
            group: c2.codomain.clone(),
            c_images: c2.images().to_vec(),
            label: self.label.clone(),
        })
    }

    /// The scheme with its finite component pushed through `hom` (for
    /// quotients by redundancy subgroups). Projections are unchanged.
    pub fn map_fibers(&self, hom: &FinHom) -> Result<CutProjectScheme, CpsError> {
        let c2 = self.c.then(hom)?;
        CutProjectScheme::new(CpsParams {
            d: self.d,
            m: self.m,
            disc: self.disc,
            a_rows: (0..self.d).map(|i| self.a.row(i)).collect(),
            b_rows: (0..self.m).map(|i| self.b.row(i)).collect(),
            group: c2.codomain.clone(),
            c_images: c2.images().to_vec(),
            label: self.label.clone(),
        })
    }

    /// Structural validation report; see [`ValidationReport`].
    pub fn validate(&self, opts: &ValidationOptions) -> ValidationReport {
        let n = self.lattice_rank();
        let det = self.a.stack(&self.b).det();
        // Density of s(Z^n) in R^m x F: with F already the image of c, the
        // question reduces to density of B(ker c) in R^m. A nonzero integer
        // functional k with k^T B K integral certifies NON-density (the
        // image stays in a discrete family of hyperplanes). Finding none up
        // to the height bound decides nothing — reported as such.
        let density = if self.m == 0 {
            DensityVerdict::Dense
        } else {
            let k0 = kernel_lattice(&self.c);
            let bk = self.b.mul_int(&k0);
            match nondensity_functional(&bk, opts.density_height) {
                Some(k) => DensityVerdict::CertifiedNonDense { functional: k },
                None => DensityVerdict::DenseUpToHeight { height: opts.density_height },
            }
        };
        // Exact embedding separation within the search radius: any lattice
        // point outside the box beats the radius, so a minimum found inside
        // is the global one.
        let r = &opts.separation_radius;
        let phys_box = RBox::new(vec![(-r, r.clone()); self.d]).expect("radius interval");
        let int_box = RBox::new(vec![(-r, r.clone()); self.m]).expect("radius interval");
        let separation = match self.enumerate_lattice(&phys_box, Some(&int_box)) {
            Err(_) => SeparationReport {
                radius: r.clone(),
                min_embedding_norm: None,
                certified: false,
            },
            Ok(points) => {
                let mut best: Option<QuadExt> = None;
                for z in points {
                    if z.iter().all(Zero::is_zero) {
                        continue;
                    }
                    let mut norm = QuadExt::zero();
                    let phys = self.a.mul_int_vec(&z);
                    let int_real = self.b.mul_int_vec(&z);
                    for v in phys.iter().chain(int_real.iter()) {
                        norm = norm.max_of(&v.abs());
                    }
                    best = Some(match best {
                        Some(b) => b.min_of(&norm),
                        None => norm,
                    });
                }
                SeparationReport {
                    radius: r.clone(),
                    certified: best.is_some(),
                    min_embedding_norm: best,
                }
            }
        };
        ValidationReport {
            label: self.label.clone(),
            physical_dim: self.d,
            internal_real_dim: self.m,
            lattice_rank: n,
            disc: self.disc,
            stacked_det: det,
            a_injective: self.a_injective,
            group_orders: self.c.codomain.orders().to_vec(),
            given_group_orders: self.given_group.orders().to_vec(),
            group_was_shrunk: self.c.codomain != self.given_group,
            density,
            separation,
        }
    }
}

/// Options for [`CutProjectScheme::validate`].
#[derive(Clone, Debug)]
pub struct ValidationOptions {
    /// Height bound for the non-density functional search.
    pub density_height: u64,
    /// Max-norm radius of the exact embedding-separation search.
    pub separation_radius: QuadExt,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions { density_height: 6, separation_radius: QuadExt::from_int(2) }
    }
}

/// Semi-decision of internal density.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum DensityVerdict {
    /// `m = 0`: density is exactly surjectivity of `c`, which normalization
    /// guarantees.
    Dense,
    /// A nonzero integer functional maps the internal lattice image into
    /// the integers — the image is certainly not dense.
    CertifiedNonDense { functional: Vec<i64> },
    /// No certificate up to the height bound; density is plausible but not
    /// decided by this finite search.
    DenseUpToHeight { height: u64 },
}

/// Exact minimum of `max(|Az|_inf, |Bz|_inf)` over nonzero lattice points in
/// the search box; `certified` says the box argument applies (a minimum was
/// found inside, hence is global).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub radius: QuadExt,
    pub min_embedding_norm: Option<QuadExt>,
    pub certified: bool,
}

/// Everything [`CutProjectScheme::validate`] can say about a scheme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub label: Option<String>,
    pub physical_dim: usize,
    pub internal_real_dim: usize,
    pub lattice_rank: usize,
    pub disc: u64,
    pub stacked_det: QuadExt,
    pub a_injective: bool,
    pub group_orders: Vec<u64>,
    pub given_group_orders: Vec<u64>,
    pub group_was_shrunk: bool,
    pub density: DensityVerdict,
    pub separation: SeparationReport,
}

/// Interval image `M * ([lo_1,hi_1] x ... )` by exact interval arithmetic,
/// one output interval per row.
fn interval_image(m: &QMatrix, intervals: &[(QuadExt, QuadExt)]) -> Vec<(QuadExt, QuadExt)> {
    assert_eq!(m.cols(), intervals.len(), "interval count mismatch");
    (0..m.rows())
        .map(|i| {
            let mut lo = QuadExt::zero();
            let mut hi = QuadExt::zero();
            for (j, (l, h)) in intervals.iter().enumerate() {
                let coef = &m[(i, j)];
                let (a, b) = (coef * l, coef * h);
                lo = lo + a.min_of(&b);
                hi = hi + a.max_of(&b);
            }
            (lo, hi)
        })
        .collect()
}

/// Inclusive integer ranges `[ceil(lo), floor(hi)]` with a global size cap.
fn integer_ranges(bounds: &[(QuadExt, QuadExt)]) -> Result<Vec<(BigInt, BigInt)>, CpsError> {
    let mut total = BigInt::one();
    let ranges: Vec<(BigInt, BigInt)> = bounds
        .iter()
        .map(|(lo, hi)| (lo.ceil_int(), hi.floor_int()))
        .collect();
    for (lo, hi) in &ranges {
        if hi >= lo {
            total *= hi - lo + 1;
        }
    }
    if total > BigInt::from(ENUMERATION_CAP) {
        return Err(CpsError::EnumerationTooLarge);
    }
    Ok(ranges)
}

fn box_contains(bx: &RBox, x: &[QuadExt]) -> bool {
    bx.contains(x)
}

/// Searches nonzero `k` with `|k|_inf <= height` such that `k^T M` has all
/// integer entries; `M` is `m x n` over the quadratic field. Only one of
/// each `{k, -k}` pair is tried.
fn nondensity_functional(m: &QMatrix, height: u64) -> Option<Vec<i64>> {
    let rows = m.rows();
    let h = height as i64;
    let mut k = vec![-h; rows];
    loop {
        // Skip zero and negated duplicates: first nonzero entry positive.
        let first_nonzero = k.iter().find(|&&v| v != 0);
        if matches!(first_nonzero, Some(&v) if v > 0) {
            let mut all_integer = true;
            'cols: for j in 0..m.cols() {
                let mut acc = QuadExt::zero();
                for (i, &ki) in k.iter().enumerate() {
                    acc = acc + &m[(i, j)] * QuadExt::from_int(ki);
                }
                if !acc.is_integer() {
                    all_integer = false;
                    break 'cols;
                }
            }
            if all_integer {
                return Some(k);
            }
        }
        let mut idx = rows;
        loop {
            if idx == 0 {
                return None;
            }
            idx -= 1;
            k[idx] += 1;
            if k[idx] <= h {
                break;
            }
            k[idx] = -h;
        }
    }
}

/// Wire form: `{"d", "m", "D", "F", "A", "B", "c", "label"}`.
#[derive(Serialize, Deserialize)]
struct CpsRepr {
    d: usize,
    m: usize,
    #[serde(rename = "D")]
    disc: u64,
    #[serde(rename = "F")]
    group: Vec<u64>,
    #[serde(rename = "A")]
    a: Vec<Vec<QuadExt>>,
    #[serde(rename = "B")]
    b: Vec<Vec<QuadExt>>,
    c: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl Serialize for CutProjectScheme {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        CpsRepr {
            d: self.d,
            m: self.m,
            disc: self.disc,
            group: self.c.codomain.orders().to_vec(),
            a: (0..self.d).map(|i| self.a.row(i)).collect(),
            b: (0..self.m).map(|i| self.b.row(i)).collect(),
            c: self.c.images().iter().map(|e| e.0.clone()).collect(),
            label: self.label.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for CutProjectScheme {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = CpsRepr::deserialize(de)?;
        let group = FinAbGroup::new(repr.group).map_err(D::Error::custom)?;
        let c_images = repr.c.into_iter().map(FinElem).collect();
        CutProjectScheme::new(CpsParams {
            d: repr.d,
            m: repr.m,
            disc: repr.disc,
            a_rows: repr.a,
            b_rows: repr.b,
            group,
            c_images,
            label: repr.label,
        })
        .map_err(D::Error::custom)
    }
}
