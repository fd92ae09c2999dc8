//! Balanced tensor products as explicit quotients, the tensor square
//! `A ⊗_B A`, the rings `S = End_B A_B` and `T = (A ⊗_B A)^B`, and spaces of
//! bimodule maps.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::AlgebraDesc;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{intertwiners, unflatten, Echelon, Matrix, Quotient, Rational, Subspace, Vector};
use crate::par;

/// `X ⊗_R Y` for a right action on `X` and a left action on `Y`.
///
/// The ambient space is `X ⊗ Y` with basis index `i * dim(Y) + j`; the
/// relations are `x·g ⊗ y − x ⊗ g·y` for every supplied generator `g`.
/// Generators of the acting algebra suffice: relations for products and
/// linear combinations follow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedTensor {
    left_dim: usize,
    right_dim: usize,
    quotient: Quotient,
}

fn sparse_kron(x: &[Rational], y: &[Rational], right_dim: usize) -> Vec<(usize, Rational)> {
    let mut out = Vec::new();
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            if !b.is_zero() {
                out.push((i * right_dim + j, a * b));
            }
        }
    }
    out
}

impl BalancedTensor {
    pub fn new(left_dim: usize, right_dim: usize, right_on_left: &[Matrix], left_on_right: &[Matrix]) -> Self {
        assert_eq!(
            right_on_left.len(),
            left_on_right.len(),
            "one matrix per generator on each side"
        );
        let rels: Vec<Vec<Vec<(usize, Rational)>>> = par::map_range(right_on_left.len(), |g| {
            let (rx, ly) = (&right_on_left[g], &left_on_right[g]);
            let mut out = Vec::with_capacity(left_dim * right_dim);
            for i in 0..left_dim {
                for j in 0..right_dim {
                    let mut e = Vec::new();
                    for k in 0..left_dim {
                        let x = rx.get(k, i);
                        if !x.is_zero() {
                            e.push((k * right_dim + j, x.clone()));
                        }
                    }
                    for k in 0..right_dim {
                        let y = ly.get(k, j);
                        if !y.is_zero() {
                            e.push((i * right_dim + k, -y.clone()));
                        }
                    }
                    out.push(e);
                }
            }
            out
        });
        let mut ech = Echelon::new(left_dim * right_dim);
        for r in rels.into_iter().flatten() {
            ech.insert_entries(r);
        }
        BalancedTensor {
            left_dim,
            right_dim,
            quotient: Quotient::from_echelon(ech),
        }
    }

    /// Plain `X ⊗ Y` over the ground field.
    pub fn free(left_dim: usize, right_dim: usize) -> Self {
        Self::new(left_dim, right_dim, &[], &[])
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.quotient.ambient_dim()
    }

    pub fn left_dim(&self) -> usize {
        self.left_dim
    }

    pub fn right_dim(&self) -> usize {
        self.right_dim
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn project(&self, v: &[Rational]) -> Vector {
        self.quotient.project(v)
    }

    pub fn section(&self, w: &[Rational]) -> Vector {
        self.quotient.section(w)
    }

    /// Projection of a sparse ambient vector.
    pub fn project_sparse(&self, entries: &[(usize, Rational)]) -> Vector {
        self.quotient.project_entries(entries.iter().map(|(j, x)| (*j, x)))
    }

    /// Class of `x ⊗ y`.
    pub fn class(&self, x: &[Rational], y: &[Rational]) -> Vector {
        self.project_sparse(&sparse_kron(x, y, self.right_dim))
    }

    pub fn class_basis(&self, i: usize, j: usize) -> Vector {
        let one = Rational::one();
        self.quotient.project_entries([(i * self.right_dim + j, &one)])
    }

    /// Lifted representative as `(i, j, coefficient)` for `e_i ⊗ f_j`.
    pub fn lift(&self, w: &[Rational]) -> Vec<(usize, usize, Rational)> {
        self.quotient
            .lift_entries(w)
            .into_iter()
            .map(|(p, c)| (p / self.right_dim, p % self.right_dim, c))
            .collect()
    }

    /// Matrix of the map induced by `f ⊗ g` into `target`.
    pub fn induced(&self, f: &Matrix, g: &Matrix, target: &BalancedTensor) -> Matrix {
        let fc = f.column_vectors();
        let gc = g.column_vectors();
        self.descend(target.dim(), |i, j| target.class(&fc[i], &gc[j]))
    }

    /// `f ⊗ id` on the same tensor.
    pub fn induced_left(&self, f: &Matrix) -> Matrix {
        self.induced(f, &Matrix::identity(self.right_dim), self)
    }

    /// `id ⊗ g` on the same tensor.
    pub fn induced_right(&self, g: &Matrix) -> Matrix {
        self.induced(&Matrix::identity(self.left_dim), g, self)
    }

    /// Matrix `V × dim` of a map defined on basis pairs `(i, j)` of the
    /// ambient space; the caller guarantees it vanishes on relations.
    pub fn descend(&self, out_dim: usize, f: impl Fn(usize, usize) -> Vector + Sync + Send) -> Matrix {
        let cols = par::map_slice(self.quotient.complement(), |&p| {
            f(p / self.right_dim, p % self.right_dim)
        });
        Matrix::from_columns(out_dim, &cols)
    }

    /// Whether a linear map given on ambient basis pairs vanishes on the
    /// relation space, i.e. descends to the quotient.
    pub fn vanishes_on_relations(&self, out_dim: usize, f: impl Fn(usize, usize) -> Vector + Sync + Send) -> bool {
        let rows = self.quotient.relation_rows();
        par::first_some(rows.len(), |r| {
            let mut acc = vec![Rational::zero(); out_dim];
            for (p, c) in &rows[r] {
                crate::linalg::axpy(&mut acc, c, &f(p / self.right_dim, p % self.right_dim));
            }
            (!crate::linalg::is_zero_vec(&acc)).then_some(())
        })
        .is_none()
    }
}

/// `W = A ⊗_B A` with its induced `A`-`A`-bimodule structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSquare {
    pub tensor: BalancedTensor,
    /// `w ↦ e_i · w`
    pub left_action: Vec<Matrix>,
    /// `w ↦ w · e_j`
    pub right_action: Vec<Matrix>,
    one_one: Vector,
}

impl TensorSquare {
    pub fn new(a: &AlgebraDesc, b_images: &[Vector]) -> Self {
        let rx: Vec<Matrix> = b_images.iter().map(|b| a.right_matrix(b)).collect();
        let ly: Vec<Matrix> = b_images.iter().map(|b| a.left_matrix(b)).collect();
        let tensor = BalancedTensor::new(a.dim(), a.dim(), &rx, &ly);
        let left_action = par::map_range(a.dim(), |i| tensor.induced_left(a.left_basis(i)));
        let right_action = par::map_range(a.dim(), |j| tensor.induced_right(a.right_basis(j)));
        let one_one = tensor.class(a.unit(), a.unit());
        TensorSquare {
            tensor,
            left_action,
            right_action,
            one_one,
        }
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    pub fn class(&self, x: &[Rational], y: &[Rational]) -> Vector {
        self.tensor.class(x, y)
    }

    pub fn one_one(&self) -> &Vector {
        &self.one_one
    }

    pub fn left_matrix(&self, x: &[Rational]) -> Matrix {
        combine_matrices(&self.left_action, x, self.dim())
    }

    pub fn right_matrix(&self, y: &[Rational]) -> Matrix {
        combine_matrices(&self.right_action, y, self.dim())
    }

    /// `x·w·y`
    pub fn sandwich(&self, x: &[Rational], w: &[Rational], y: &[Rational]) -> Vector {
        self.right_matrix(y).mul_vec(&self.left_matrix(x).mul_vec(w))
    }

    /// For a `B`-central `u`, the map `x ⊗ y ↦ x u¹ ⊗ u² y` on `W`.
    pub fn g_map(&self, a: &AlgebraDesc, u: &[Rational]) -> Matrix {
        let lifted = self.tensor.lift(u);
        let rm: Vec<(Matrix, Matrix, Rational)> = lifted
            .iter()
            .map(|(k, l, c)| (a.right_basis(*k).clone(), a.left_basis(*l).clone(), c.clone()))
            .collect();
        self.tensor.descend(self.dim(), |i, j| {
            let mut acc = vec![Rational::zero(); self.dim()];
            for (rk, ll, c) in &rm {
                let v = self.tensor.class(&rk.column(i), &ll.column(j));
                crate::linalg::axpy(&mut acc, c, &v);
            }
            acc
        })
    }
}

pub(crate) fn combine_matrices(mats: &[Matrix], x: &[Rational], d: usize) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    for (i, c) in x.iter().enumerate() {
        if !c.is_zero() {
            m = m.add(&mats[i].scale(c));
        }
    }
    m
}

/// `S = End_B A_B`, stored as matrices on `A`; the product is composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SRing {
    /// Flattened `n × n` matrices in canonical form.
    pub space: Subspace,
    pub basis: Vec<Matrix>,
    pub algebra: AlgebraDesc,
}

impl SRing {
    pub fn new(a: &AlgebraDesc, b_images: &[Vector]) -> Result<Self> {
        let n = a.dim();
        let mut mats = Vec::new();
        for b in b_images {
            mats.push(a.left_matrix(b));
            mats.push(a.right_matrix(b));
        }
        let refs: Vec<&Matrix> = mats.iter().collect();
        let space = crate::linalg::commutant(n, &refs);
        Self::from_space(space, n)
    }

    pub(crate) fn from_space(space: Subspace, n: usize) -> Result<Self> {
        let basis: Vec<Matrix> = space.basis().iter().map(|v| unflatten(n, n, v)).collect();
        let d = basis.len();
        let unit = space
            .coords(Matrix::identity(n).as_slice())
            .ok_or_else(|| Error::Verification("identity is not in End".into()))?;
        let products = par::map_range(d * d, |p| {
            space.coords(basis[p / d].mul(&basis[p % d]).as_slice())
        });
        let products: Vec<Vector> = products
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Verification("End is not closed under composition".into()))?;
        let names = (0..d).map(|i| format!("s{i}")).collect();
        let algebra = AlgebraDesc::from_products(names, unit, |i, j| products[i * d + j].clone())?;
        Ok(SRing { space, basis, algebra })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, m: &Matrix) -> Option<Vector> {
        self.space.coords(m.as_slice())
    }

    pub fn element(&self, c: &[Rational]) -> Matrix {
        let n = self.basis.first().map_or(0, Matrix::rows);
        unflatten(n, n, &self.space.combine(c))
    }
}

/// `T = (A ⊗_B A)^B` as a subspace of `W`, with `uv = v¹u¹ ⊗ u²v²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TRing {
    pub space: Subspace,
    pub algebra: AlgebraDesc,
}

impl TRing {
    pub fn new(a: &AlgebraDesc, w: &TensorSquare, b_images: &[Vector]) -> Result<Self> {
        let blocks: Vec<Matrix> = b_images
            .iter()
            .map(|b| w.left_matrix(b).sub(&w.right_matrix(b)))
            .collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let space = if refs.is_empty() {
            Subspace::full(w.dim())
        } else {
            Matrix::vstack(&refs).kernel()
        };
        let d = space.dim();
        let unit = space
            .coords(w.one_one())
            .ok_or_else(|| Error::Verification("1⊗1 is not B-central".into()))?;
        let gs: Vec<Matrix> = par::map_slice(space.basis(), |u| w.g_map(a, u));
        let products: Vec<Option<Vector>> =
            par::map_range(d * d, |p| space.coords(&gs[p / d].mul_vec(&space.basis()[p % d])));
        let products: Vec<Vector> = products
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Verification("T is not closed under its product".into()))?;
        let names = (0..d).map(|i| format!("t{i}")).collect();
        let algebra = AlgebraDesc::from_products(names, unit, |i, j| products[i * d + j].clone())?;
        Ok(TRing { space, algebra })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn coords(&self, w: &[Rational]) -> Option<Vector> {
        self.space.coords(w)
    }

    /// The `W`-vector with the given `T`-coordinates.
    pub fn element(&self, c: &[Rational]) -> Vector {
        self.space.combine(c)
    }
}

/// A bimodule: one matrix per basis element of each acting algebra. Right
/// actions are stored as `v ↦ v·y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleDesc {
    pub dim: usize,
    pub left_algebra: AlgebraDesc,
    pub right_algebra: AlgebraDesc,
    pub left_action: Vec<Matrix>,
    pub right_action: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BimoduleViolation {
    LeftUnit,
    RightUnit,
    LeftAssociativity { i: usize, j: usize },
    RightAssociativity { i: usize, j: usize },
    Commutation { i: usize, j: usize },
}

impl BimoduleDesc {
    pub fn new(
        left_algebra: AlgebraDesc,
        right_algebra: AlgebraDesc,
        dim: usize,
        left_action: Vec<Matrix>,
        right_action: Vec<Matrix>,
    ) -> Result<Self> {
        check_dim("left action count", left_algebra.dim(), left_action.len())?;
        check_dim("right action count", right_algebra.dim(), right_action.len())?;
        for m in left_action.iter().chain(&right_action) {
            check_dim("action matrix rows", dim, m.rows())?;
            check_dim("action matrix columns", dim, m.cols())?;
        }
        Ok(BimoduleDesc {
            dim,
            left_algebra,
            right_algebra,
            left_action,
            right_action,
        })
    }

    pub fn left(&self, x: &[Rational]) -> Matrix {
        combine_matrices(&self.left_action, x, self.dim)
    }

    pub fn right(&self, y: &[Rational]) -> Matrix {
        combine_matrices(&self.right_action, y, self.dim)
    }

    pub fn validate(&self) -> Vec<BimoduleViolation> {
        let id = Matrix::identity(self.dim);
        let mut out = Vec::new();
        if self.left(self.left_algebra.unit()) != id {
            out.push(BimoduleViolation::LeftUnit);
        }
        if self.right(self.right_algebra.unit()) != id {
            out.push(BimoduleViolation::RightUnit);
        }
        let (l, r) = (&self.left_algebra, &self.right_algebra);
        for i in 0..l.dim() {
            for j in 0..l.dim() {
                if self.left(&l.basis_product(i, j)) != self.left_action[i].mul(&self.left_action[j]) {
                    out.push(BimoduleViolation::LeftAssociativity { i, j });
                }
            }
        }
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                if self.right(&r.basis_product(i, j)) != self.right_action[j].mul(&self.right_action[i]) {
                    out.push(BimoduleViolation::RightAssociativity { i, j });
                }
            }
        }
        for i in 0..l.dim() {
            for j in 0..r.dim() {
                let (x, y) = (&self.left_action[i], &self.right_action[j]);
                if x.mul(y) != y.mul(x) {
                    out.push(BimoduleViolation::Commutation { i, j });
                }
            }
        }
        out
    }
}

/// A space of bimodule maps `M → N`, as flattened `dim N × dim M` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpace {
    pub source_dim: usize,
    pub target_dim: usize,
    pub space: Subspace,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis_maps(&self) -> Vec<Matrix> {
        self.space
            .basis()
            .iter()
            .map(|v| unflatten(self.target_dim, self.source_dim, v))
            .collect()
    }

    pub fn contains(&self, f: &Matrix) -> bool {
        f.rows() == self.target_dim && f.cols() == self.source_dim && self.space.contains(f.as_slice())
    }
}

pub fn hom_bimodule(m: &BimoduleDesc, n: &BimoduleDesc) -> Result<HomSpace> {
    if m.left_algebra != n.left_algebra || m.right_algebra != n.right_algebra {
        return Err(Error::InvalidInput("bimodules over different algebras".into()));
    }
    let mut pairs: Vec<(&Matrix, &Matrix)> = m.left_action.iter().zip(&n.left_action).collect();
    pairs.extend(m.right_action.iter().zip(&n.right_action));
    Ok(HomSpace {
        source_dim: m.dim,
        target_dim: n.dim,
        space: intertwiners(m.dim, n.dim, &pairs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn free_tensor_has_no_relations() {
        let t = BalancedTensor::free(2, 3);
        assert_eq!(t.dim(), 6);
        assert_eq!(t.project(&t.section(&[q(1), q(2), q(3), q(4), q(5), q(6)])), vec![
            q(1),
            q(2),
            q(3),
            q(4),
            q(5),
            q(6)
        ]);
    }

    #[test]
    fn tensor_over_whole_algebra_is_the_algebra() {
        // ℚ×ℚ over itself
        let a = AlgebraDesc::from_products(vec!["p".into(), "q".into()], vec![q(1), q(1)], |i, j| {
            let mut v = vec![q(0), q(0)];
            if i == j {
                v[i] = q(1);
            }
            v
        })
        .unwrap();
        let imgs = vec![a.basis(0), a.basis(1)];
        let w = TensorSquare::new(&a, &imgs);
        assert_eq!(w.dim(), 2);
        let t = TRing::new(&a, &w, &imgs).unwrap();
        assert_eq!(t.dim(), 2);
        assert!(t.algebra.is_valid());
        let s = SRing::new(&a, &imgs).unwrap();
        assert_eq!(s.dim(), 2);
    }
}
