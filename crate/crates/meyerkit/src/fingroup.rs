//! Finite abelian groups as explicit products of cyclic groups.
//!
//! A [`FinAbGroup`] is `Z/q_1 x ... x Z/q_r` with the orders stored as given
//! (no silent re-decomposition), and a [`FinElem`] is a coordinate vector
//! with `0 <= x_j < q_j`. Everything is computed by exhaustion — element
//! enumeration, subgroup closure, kernels — which is why construction caps
//! the group order (default 2^16). Canonical cyclic decompositions, when a
//! new group must be *produced* (quotients, images, amalgam fibers), come
//! from the Smith normal form of a relation lattice and are returned with
//! ascending invariant factors, trivial factors dropped.
//!
//! Two homomorphism types cover the pipeline:
//! * [`FinHom`] — between finite groups, determined by the images of the
//!   domain's cyclic generators (well-definedness `q_j * image_j = 0` is
//!   checked at construction).
//! * [`FreeHom`] — from the structure group `Z^n` into a finite group,
//!   determined by the images of the standard basis (no constraint).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

use crate::numeric::{smith_with_transforms, IntMatrix};

/// Default cap on the order of any finite group handled by exhaustion.
pub const DEFAULT_ORDER_CAP: u64 = 1 << 16;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("cyclic factor order must be >= 1 (got {0})")]
    BadOrder(u64),
    #[error("group order {order} exceeds the exhaustion cap {cap}")]
    OrderCap { order: u64, cap: u64 },
    #[error("element has {got} coordinates, group has {want} factors")]
    ElemLength { got: usize, want: usize },
    #[error("coordinate {value} out of range for cyclic factor of order {order}")]
    ElemRange { value: u64, order: u64 },
    #[error("homomorphism image count {got} does not match domain rank {want}")]
    HomImageCount { got: usize, want: usize },
    #[error("not a homomorphism: order {order} generator maps to an element of nonzero order-multiple")]
    NotWellDefined { order: u64 },
    #[error("element does not belong to the stated group")]
    WrongGroup,
    #[error("generators given for a different group")]
    ForeignGenerators,
}

/// An element of a [`FinAbGroup`], as reduced coordinates per cyclic factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FinElem(pub Vec<u64>);

impl FinElem {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

/// A finite abelian group presented as a product of cyclic factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinAbGroup {
    orders: Vec<u64>,
}

impl FinAbGroup {
    /// The trivial group (no factors).
    pub fn trivial() -> Self {
        FinAbGroup { orders: Vec::new() }
    }

    pub fn new(orders: Vec<u64>) -> Result<Self, GroupError> {
        Self::new_with_cap(orders, DEFAULT_ORDER_CAP)
    }

    pub fn new_with_cap(orders: Vec<u64>, cap: u64) -> Result<Self, GroupError> {
        let mut total: u64 = 1;
        for &q in &orders {
            if q == 0 {
                return Err(GroupError::BadOrder(q));
            }
            total = total.saturating_mul(q);
        }
        if total > cap {
            return Err(GroupError::OrderCap { order: total, cap });
        }
        Ok(FinAbGroup { orders })
    }

    pub fn cyclic(q: u64) -> Result<Self, GroupError> {
        Self::new(vec![q])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn zero(&self) -> FinElem {
        FinElem(vec![0; self.orders.len()])
    }

    /// Validates membership (length and ranges).
    pub fn check(&self, x: &FinElem) -> Result<(), GroupError> {
        if x.0.len() != self.orders.len() {
            return Err(GroupError::ElemLength { got: x.0.len(), want: self.orders.len() });
        }
        for (&v, &q) in x.0.iter().zip(&self.orders) {
            if v >= q {
                return Err(GroupError::ElemRange { value: v, order: q });
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &FinElem) -> bool {
        self.check(x).is_ok()
    }

    pub fn add(&self, x: &FinElem, y: &FinElem) -> FinElem {
        debug_assert!(self.contains(x) && self.contains(y));
        FinElem(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.orders)
                .map(|((&a, &b), &q)| (a + b) % q)
                .collect(),
        )
    }

    pub fn neg(&self, x: &FinElem) -> FinElem {
        debug_assert!(self.contains(x));
        FinElem(x.0.iter().zip(&self.orders).map(|(&a, &q)| (q - a) % q).collect())
    }

    pub fn sub(&self, x: &FinElem, y: &FinElem) -> FinElem {
        self.add(x, &self.neg(y))
    }

    /// `k * x` for a (possibly negative or huge) integer `k`.
    pub fn scale(&self, k: &BigInt, x: &FinElem) -> FinElem {
        debug_assert!(self.contains(x));
        FinElem(
            x.0.iter()
                .zip(&self.orders)
                .map(|(&a, &q)| {
                    let qb = BigInt::from(q);
                    let m = (k * BigInt::from(a)).mod_floor(&qb);
                    m.to_u64().expect("reduced residue fits in u64")
                })
                .collect(),
        )
    }

    /// Enumerates all elements in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<FinElem> {
        let mut out = vec![self.zero()];
        for (axis, &q) in self.orders.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * q as usize);
            for base in &out {
                for v in 0..q {
                    let mut e = base.clone();
                    e.0[axis] = v;
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }

    /// Order of a single element.
    pub fn element_order(&self, x: &FinElem) -> u64 {
        self.orders
            .iter()
            .zip(&x.0)
            .map(|(&q, &a)| if a == 0 { 1 } else { q / q.gcd(&a) })
            .fold(1u64, |acc, o| acc.lcm(&o))
    }

    /// Closure of a generating set: the subgroup it generates, as a sorted
    /// element set.
    pub fn subgroup_generated(&self, gens: &[FinElem]) -> Result<BTreeSet<FinElem>, GroupError> {
        for g in gens {
            self.check(g)?;
        }
        let mut seen: BTreeSet<FinElem> = BTreeSet::new();
        seen.insert(self.zero());
        let mut frontier = vec![self.zero()];
        while let Some(cur) = frontier.pop() {
            for g in gens {
                let nxt = self.add(&cur, g);
                if seen.insert(nxt.clone()) {
                    frontier.push(nxt);
                }
            }
        }
        Ok(seen)
    }

    /// Verifies that a set of elements is closed under the group operations.
    pub fn is_subgroup(&self, set: &BTreeSet<FinElem>) -> bool {
        if !set.contains(&self.zero()) {
            return false;
        }
        for x in set {
            if !set.contains(&self.neg(x)) {
                return false;
            }
            for y in set {
                if !set.contains(&self.add(x, y)) {
                    return false;
                }
            }
        }
        true
    }
}

/// A homomorphism between finite abelian groups, stored as the images of the
/// domain's cyclic generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinHom {
    pub domain: FinAbGroup,
    pub codomain: FinAbGroup,
    images: Vec<FinElem>,
}

impl FinHom {
    /// Builds and checks well-definedness: the order of each domain generator
    /// must annihilate its image.
    pub fn new(
        domain: FinAbGroup,
        codomain: FinAbGroup,
        images: Vec<FinElem>,
    ) -> Result<Self, GroupError> {
        if images.len() != domain.rank() {
            return Err(GroupError::HomImageCount { got: images.len(), want: domain.rank() });
        }
        for (img, &q) in images.iter().zip(domain.orders()) {
            codomain.check(img)?;
            let scaled = codomain.scale(&BigInt::from(q), img);
            if scaled != codomain.zero() {
                return Err(GroupError::NotWellDefined { order: q });
            }
        }
        Ok(FinHom { domain, codomain, images })
    }

    pub fn identity(group: &FinAbGroup) -> Self {
        let images = (0..group.rank())
            .map(|j| {
                let mut e = group.zero();
                e.0[j] = if group.orders()[j] == 1 { 0 } else { 1 };
                e
            })
            .collect();
        FinHom { domain: group.clone(), codomain: group.clone(), images }
    }

    pub fn images(&self) -> &[FinElem] {
        &self.images
    }

    pub fn apply(&self, x: &FinElem) -> FinElem {
        debug_assert!(self.domain.contains(x));
        let mut acc = self.codomain.zero();
        for (&coef, img) in x.0.iter().zip(&self.images) {
            let t = self.codomain.scale(&BigInt::from(coef), img);
            acc = self.codomain.add(&acc, &t);
        }
        acc
    }

    /// Image subgroup (exhaustive).
    pub fn image(&self) -> BTreeSet<FinElem> {
        self.codomain
            .subgroup_generated(&self.images)
            .expect("images validated at construction")
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() as u64 == self.codomain.order()
    }

    /// Kernel subgroup (exhaustive over the domain).
    pub fn kernel(&self) -> BTreeSet<FinElem> {
        let zero = self.codomain.zero();
        self.domain
            .elements()
            .into_iter()
            .filter(|x| self.apply(x) == zero)
            .collect()
    }

    /// `self` after `first`: `(self.compose(first))(x) = self(first(x))`.
    pub fn compose(&self, first: &FinHom) -> Result<FinHom, GroupError> {
        if first.codomain != self.domain {
            return Err(GroupError::WrongGroup);
        }
        let images = first.images.iter().map(|img| self.apply(img)).collect();
        FinHom::new(first.domain.clone(), self.codomain.clone(), images)
    }
}

/// A homomorphism `Z^n -> F`, stored as the images of the standard basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeHom {
    pub codomain: FinAbGroup,
    images: Vec<FinElem>,
}

impl FreeHom {
    pub fn new(codomain: FinAbGroup, images: Vec<FinElem>) -> Result<Self, GroupError> {
        for img in &images {
            codomain.check(img)?;
        }
        Ok(FreeHom { codomain, images })
    }

    /// The zero map into the trivial group.
    pub fn trivial(n: usize) -> Self {
        FreeHom { codomain: FinAbGroup::trivial(), images: vec![FinElem(Vec::new()); n] }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[FinElem] {
        &self.images
    }

    pub fn apply(&self, z: &[BigInt]) -> FinElem {
        assert_eq!(z.len(), self.images.len(), "lattice vector length mismatch");
        let mut acc = self.codomain.zero();
        for (coef, img) in z.iter().zip(&self.images) {
            let t = self.codomain.scale(coef, img);
            acc = self.codomain.add(&acc, &t);
        }
        acc
    }

    pub fn apply_i64(&self, z: &[i64]) -> FinElem {
        let zz: Vec<BigInt> = z.iter().map(|&v| BigInt::from(v)).collect();
        self.apply(&zz)
    }

    /// Post-composition with a finite homomorphism.
    pub fn then(&self, hom: &FinHom) -> Result<FreeHom, GroupError> {
        if hom.domain != self.codomain {
            return Err(GroupError::WrongGroup);
        }
        FreeHom::new(hom.codomain.clone(), self.images.iter().map(|i| hom.apply(i)).collect())
    }

    /// Restriction to the sublattice spanned by the columns of `basis`:
    /// the images of the new basis vectors.
    pub fn restrict(&self, basis: &IntMatrix) -> FreeHom {
        assert_eq!(basis.rows(), self.images.len(), "basis row count mismatch");
        let images = (0..basis.cols()).map(|j| self.apply(&basis.col(j))).collect();
        FreeHom { codomain: self.codomain.clone(), images }
    }

    /// Image subgroup of the whole lattice (generated by the basis images).
    pub fn image(&self) -> BTreeSet<FinElem> {
        self.codomain
            .subgroup_generated(&self.images)
            .expect("images validated at construction")
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() as u64 == self.codomain.order()
    }
}

/// Lifts an element of `prod Z/q_j` to the integer vector of its coordinates.
fn lift(x: &FinElem) -> Vec<BigInt> {
    x.0.iter().map(|&v| BigInt::from(v)).collect()
}

/// Result of factoring a finite group by the subgroup its `gens` generate.
#[derive(Clone, Debug)]
pub struct SubgroupQuotient {
    /// The subgroup itself, as an explicit element set.
    pub subgroup: BTreeSet<FinElem>,
    /// Canonical cyclic decomposition of the quotient (ascending invariant
    /// factors > 1; trivial when the subgroup is everything).
    pub quotient: FinAbGroup,
    /// The projection homomorphism onto the quotient.
    pub projection: FinHom,
}

/// Computes the subgroup generated by `gens` inside `group` together with the
/// canonical quotient and projection.
///
/// The quotient of `Z^r / <q_j e_j, gens>` is decomposed by the Smith normal
/// form of the relation matrix; coordinates with invariant factor 1 are
/// dropped, so the returned orders are the canonical cyclic decomposition.
pub fn subgroup_and_quotient(
    group: &FinAbGroup,
    gens: &[FinElem],
) -> Result<SubgroupQuotient, GroupError> {
    let subgroup = group.subgroup_generated(gens)?;
    let r = group.rank();
    // Relation lattice columns: q_j e_j and the generators.
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..r {
        let mut col = vec![BigInt::zero(); r];
        col[j] = BigInt::from(group.orders()[j]);
        cols.push(col);
    }
    for g in gens {
        cols.push(lift(g));
    }
    let rel = IntMatrix::from_cols(cols).expect("uniform column length");
    let sd = smith_with_transforms(&rel);
    // The relation lattice has full rank r (it contains q_j e_j), so all r
    // invariant factors are positive.
    let factors = sd.factors();
    debug_assert_eq!(factors.len(), r);
    let kept: Vec<usize> = (0..r)
        .filter(|&i| factors[i] > BigInt::from(1u64))
        .collect();
    let quotient_orders: Vec<u64> = kept
        .iter()
        .map(|&i| factors[i].to_u64().expect("quotient order fits u64"))
        .collect();
    let quotient = FinAbGroup::new(quotient_orders).expect("quotient order divides group order");
    // Projection: x -> (U x) mod s on the kept coordinates.
    let images: Vec<FinElem> = (0..r)
        .map(|j| {
            let mut e = vec![BigInt::zero(); r];
            e[j] = BigInt::from(1);
            let y = sd.u.mul_vec(&e);
            FinElem(
                kept.iter()
                    .enumerate()
                    .map(|(t, &i)| {
                        let q = BigInt::from(quotient.orders()[t]);
                        y[i].mod_floor(&q).to_u64().expect("reduced residue fits u64")
                    })
                    .collect(),
            )
        })
        .collect();
    let projection = FinHom::new(group.clone(), quotient.clone(), images)?;
    // Sanity: the subgroup is exactly the kernel of the projection.
    debug_assert_eq!(projection.kernel(), subgroup);
    Ok(SubgroupQuotient { subgroup, quotient, projection })
}

/// A column basis of the kernel lattice `{z in Z^n : c(z) = 0}`.
///
/// The kernel always has full rank `n` (it contains `|F| Z^n`), so the
/// returned matrix is square `n x n` in column Hermite form.
pub fn kernel_lattice(c: &FreeHom) -> IntMatrix {
    let n = c.rank();
    let r = c.codomain.rank();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for img in c.images() {
        cols.push(lift(img));
    }
    for j in 0..r {
        let mut col = vec![BigInt::zero(); r];
        col[j] = -BigInt::from(c.codomain.orders()[j]);
        cols.push(col);
    }
    let m = IntMatrix::from_cols(cols).expect("uniform column length");
    let sd = smith_with_transforms(&m);
    let mut ker_cols: Vec<Vec<BigInt>> = Vec::new();
    for j in sd.rank()..(n + r) {
        ker_cols.push(sd.v.col(j)[..n].to_vec());
    }
    let f_order = BigInt::from(c.codomain.order());
    for j in 0..n {
        let mut col = vec![BigInt::zero(); n];
        col[j] = f_order.clone();
        ker_cols.push(col);
    }
    let ker = IntMatrix::from_cols(ker_cols).expect("uniform column length");
    let basis = crate::numeric::column_lattice_basis(&ker);
    debug_assert_eq!(basis.cols(), n);
    basis
}

/// Result of replacing a codomain by the image of a lattice homomorphism.
#[derive(Clone, Debug)]
pub struct ImageNormalization {
    /// Canonical presentation of the image subgroup.
    pub group: FinAbGroup,
    /// The original map rewritten into the image presentation.
    pub hom: FreeHom,
    /// Injection of the new presentation back into the original codomain;
    /// `embedding(hom(z)) == original(z)` for all `z`.
    pub embedding: FinHom,
    /// Whether anything changed (image was proper or presentation differed).
    pub changed: bool,
}

/// Replaces the codomain of `c : Z^n -> F` by the image subgroup `c(Z^n)`,
/// presented canonically, and rewrites `c` accordingly.
///
/// The image is `Z^n / ker(c)`; the kernel lattice is computed exactly
/// (solving `G z = D w` over the integers) and decomposed by the Smith normal
/// form, giving both the canonical orders and the rewritten map. An embedding
/// back into `F` witnesses that nothing but the presentation changed.
pub fn normalize_image(c: &FreeHom) -> ImageNormalization {
    let n = c.rank();
    let r = c.codomain.rank();
    // Kernel of c: project ker([G | -D]) in Z^(n+r) to the first n coords,
    // where G has the images as columns and D = diag(q_j).
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for img in c.images() {
        cols.push(lift(img));
    }
    for j in 0..r {
        let mut col = vec![BigInt::zero(); r];
        col[j] = -BigInt::from(c.codomain.orders()[j]);
        cols.push(col);
    }
    let m = IntMatrix::from_cols(cols).expect("uniform column length");
    let sd = smith_with_transforms(&m);
    let rank = sd.rank();
    // Kernel basis: columns of V beyond the rank, truncated to the first n
    // coordinates; these generate ker(c) as a sublattice of Z^n.
    let mut ker_cols: Vec<Vec<BigInt>> = Vec::new();
    for j in rank..(n + r) {
        let col = sd.v.col(j);
        ker_cols.push(col[..n].to_vec());
    }
    // ker(c) always contains |F| * Z^n; add those to be safe against the
    // degenerate n = 0 or full-kernel cases, then reduce to a basis.
    let f_order = BigInt::from(c.codomain.order());
    for j in 0..n {
        let mut col = vec![BigInt::zero(); n];
        col[j] = f_order.clone();
        ker_cols.push(col);
    }
    let ker_mat = IntMatrix::from_cols(ker_cols).expect("uniform column length");
    let ker_sd = smith_with_transforms(&ker_mat);
    // Z^n / ker has invariant factors s_i (full rank n because |F| Z^n is
    // inside the kernel).
    let factors = ker_sd.factors();
    debug_assert_eq!(factors.len(), n);
    let kept: Vec<usize> = (0..n).filter(|&i| factors[i] > BigInt::from(1u64)).collect();
    let orders: Vec<u64> = kept
        .iter()
        .map(|&i| factors[i].to_u64().expect("image order fits u64"))
        .collect();
    let group = FinAbGroup::new(orders).expect("image order divides |F|");
    // New map: z -> (U z) mod s on kept coordinates.
    let hom_images: Vec<FinElem> = (0..n)
        .map(|j| {
            let mut e = vec![BigInt::zero(); n];
            e[j] = BigInt::from(1);
            let y = ker_sd.u.mul_vec(&e);
            FinElem(
                kept.iter()
                    .enumerate()
                    .map(|(t, &i)| {
                        let q = BigInt::from(group.orders()[t]);
                        y[i].mod_floor(&q).to_u64().expect("residue fits u64")
                    })
                    .collect(),
            )
        })
        .collect();
    let hom = FreeHom::new(group.clone(), hom_images).expect("validated residues");
    // Embedding: generator t of the new group corresponds to z_t = U^(-1)
    // e_{kept[t]}; its image under the original map realizes the generator
    // inside F.
    let embed_images: Vec<FinElem> = kept
        .iter()
        .map(|&i| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(1);
            let z = ker_sd.u_inv.mul_vec(&e);
            c.apply(&z)
        })
        .collect();
    let embedding = FinHom::new(group.clone(), c.codomain.clone(), embed_images)
        .expect("generator orders annihilate their images");
    let changed = group != c.codomain || hom.images() != c.images();
    debug_assert!({
        // Spot-check the factorization on the standard basis.
        (0..n).all(|j| {
            let mut z = vec![BigInt::zero(); n];
            z[j] = BigInt::from(1);
            embedding.apply(&hom.apply(&z)) == c.apply(&z)
        })
    });
    ImageNormalization { group, hom, embedding, changed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn z2() -> FinAbGroup {
        FinAbGroup::cyclic(2).unwrap()
    }

    fn z4xz2() -> FinAbGroup {
        FinAbGroup::new(vec![4, 2]).unwrap()
    }

    #[test]
    fn construction_and_cap() {
        assert!(FinAbGroup::new(vec![0]).is_err());
        assert!(FinAbGroup::new(vec![1 << 17]).is_err());
        assert!(FinAbGroup::new_with_cap(vec![1 << 17], 1 << 18).is_ok());
        assert_eq!(FinAbGroup::trivial().order(), 1);
        assert_eq!(z4xz2().order(), 8);
    }

    #[test]
    fn arithmetic_and_enumeration() {
        let g = z4xz2();
        let x = FinElem(vec![3, 1]);
        let y = FinElem(vec![2, 1]);
        assert_eq!(g.add(&x, &y), FinElem(vec![1, 0]));
        assert_eq!(g.neg(&x), FinElem(vec![1, 1]));
        assert_eq!(g.scale(&BigInt::from(-3), &x), FinElem(vec![3, 1]));
        assert_eq!(g.elements().len(), 8);
        assert_eq!(g.element_order(&FinElem(vec![2, 0])), 2);
        assert_eq!(g.element_order(&FinElem(vec![1, 1])), 4);
    }

    #[test]
    fn subgroup_closure_and_lagrange() {
        // Exhaustive Lagrange check over every single-generator subgroup of
        // a few small groups.
        let groups = vec![
            z2(),
            z4xz2(),
            FinAbGroup::new(vec![6]).unwrap(),
            FinAbGroup::new(vec![2, 2, 2]).unwrap(),
            FinAbGroup::new(vec![3, 4]).unwrap(),
        ];
        for g in groups {
            for e in g.elements() {
                let sub = g.subgroup_generated(std::slice::from_ref(&e)).unwrap();
                assert!(g.is_subgroup(&sub));
                assert_eq!(
                    g.order() % sub.len() as u64,
                    0,
                    "Lagrange violated in {:?} by {:?}",
                    g.orders(),
                    e
                );
                assert_eq!(sub.len() as u64, g.element_order(&e));
            }
        }
    }

    #[test]
    fn quotient_canonical_decomposition() {
        // (Z/4 x Z/2) / <(2,0)> is Z/2 x Z/2.
        let g = z4xz2();
        let q = subgroup_and_quotient(&g, &[FinElem(vec![2, 0])]).unwrap();
        assert_eq!(q.subgroup.len(), 2);
        assert_eq!(q.quotient.orders(), &[2, 2]);
        assert!(q.projection.is_surjective());
        assert_eq!(q.projection.kernel(), q.subgroup);
    }

    #[test]
    fn quotient_by_everything_and_nothing() {
        let g = z4xz2();
        let all = subgroup_and_quotient(&g, &[FinElem(vec![1, 0]), FinElem(vec![0, 1])]).unwrap();
        assert!(all.quotient.is_trivial());
        let none = subgroup_and_quotient(&g, &[]).unwrap();
        assert_eq!(none.subgroup.len(), 1);
        assert_eq!(none.quotient.order(), 8);
        // Projection with trivial kernel is injective: distinct images.
        let imgs: BTreeSet<FinElem> =
            g.elements().iter().map(|e| none.projection.apply(e)).collect();
        assert_eq!(imgs.len(), 8);
    }

    #[test]
    fn hom_well_definedness() {
        // Z/2 -> Z/4 sending 1 to 1 is not a homomorphism (2*1 = 2 != 0).
        let bad = FinHom::new(z2(), FinAbGroup::cyclic(4).unwrap(), vec![FinElem(vec![1])]);
        assert!(bad.is_err());
        // Sending 1 to 2 is fine.
        let good =
            FinHom::new(z2(), FinAbGroup::cyclic(4).unwrap(), vec![FinElem(vec![2])]).unwrap();
        assert_eq!(good.apply(&FinElem(vec![1])), FinElem(vec![2]));
        assert_eq!(good.kernel().len(), 1);
        assert!(!good.is_surjective());
    }

    #[test]
    fn projection_first_isomorphism() {
        // |kernel| * |image| = |domain| for a batch of quotient projections.
        let g = FinAbGroup::new(vec![4, 4]).unwrap();
        for gen in g.elements() {
            let q = subgroup_and_quotient(&g, &[gen]).unwrap();
            let ker = q.projection.kernel().len() as u64;
            let img = q.projection.image().len() as u64;
            assert_eq!(ker * img, g.order());
        }
    }

    #[test]
    fn free_hom_parity() {
        let parity = FreeHom::new(z2(), vec![FinElem(vec![1]), FinElem(vec![1])]).unwrap();
        assert_eq!(parity.apply_i64(&[3, 4]), FinElem(vec![1]));
        assert_eq!(parity.apply_i64(&[-2, 4]), FinElem(vec![0]));
        assert!(parity.is_surjective());
        // Restrict to the even sublattice: the map dies.
        let basis = IntMatrix::from_i64_rows(&[&[1, 1], &[1, -1]]);
        let restricted = parity.restrict(&basis);
        assert_eq!(restricted.apply_i64(&[1, 0]), FinElem(vec![0]));
        assert!(!restricted.is_surjective());
    }

    #[test]
    fn image_normalization_shrinks_codomain() {
        // c : Z^2 -> Z/2, z -> 0 has trivial image.
        let zero = FreeHom::new(z2(), vec![FinElem(vec![0]), FinElem(vec![0])]).unwrap();
        let norm = normalize_image(&zero);
        assert!(norm.group.is_trivial());
        assert!(norm.changed);

        // Parity is surjective: presentation unchanged.
        let parity = FreeHom::new(z2(), vec![FinElem(vec![1]), FinElem(vec![1])]).unwrap();
        let norm = normalize_image(&parity);
        assert_eq!(norm.group, z2());
        assert!(!norm.changed);
        assert_eq!(norm.hom, parity);

        // c : Z^2 -> Z/4 hitting only {0, 2}: image is a Z/2.
        let half = FreeHom::new(
            FinAbGroup::cyclic(4).unwrap(),
            vec![FinElem(vec![2]), FinElem(vec![0])],
        )
        .unwrap();
        let norm = normalize_image(&half);
        assert_eq!(norm.group.orders(), &[2]);
        // Factorization property on a sample of lattice vectors.
        for z in [[0i64, 0], [1, 0], [0, 1], [3, -2], [7, 5]] {
            let zz: Vec<BigInt> = z.iter().map(|&v| BigInt::from(v)).collect();
            assert_eq!(norm.embedding.apply(&norm.hom.apply(&zz)), half.apply(&zz));
        }
    }

    #[test]
    fn kernel_lattice_of_parity() {
        // ker(parity on Z^2) is the even-sum sublattice, index 2.
        let parity = FreeHom::new(z2(), vec![FinElem(vec![1]), FinElem(vec![1])]).unwrap();
        let k = kernel_lattice(&parity);
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k.det().abs(), BigInt::from(2));
        // Every basis column is in the kernel.
        for j in 0..2 {
            assert_eq!(parity.apply(&k.col(j)), FinElem(vec![0]));
        }
        // Trivial-group kernel is everything.
        let t = FreeHom::trivial(3);
        let k = kernel_lattice(&t);
        assert!(k.is_identity());
    }

    #[test]
    fn image_normalization_of_wide_image() {
        // c : Z^3 -> Z/2 x Z/3 with images (1,0), (0,1), (1,2): surjective,
        // but the canonical presentation of Z/2 x Z/3 is Z/6.
        let g = FinAbGroup::new(vec![2, 3]).unwrap();
        let c = FreeHom::new(
            g.clone(),
            vec![FinElem(vec![1, 0]), FinElem(vec![0, 1]), FinElem(vec![1, 2])],
        )
        .unwrap();
        let norm = normalize_image(&c);
        assert_eq!(norm.group.orders(), &[6]);
        for z in [[0i64, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [5, -4, 3]] {
            let zz: Vec<BigInt> = z.iter().map(|&v| BigInt::from(v)).collect();
            assert_eq!(norm.embedding.apply(&norm.hom.apply(&zz)), c.apply(&zz));
        }
    }
}
