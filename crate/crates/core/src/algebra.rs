//! Finite-dimensional unital associative algebras given by structure
//! constants, their homomorphisms, ideals, centralizers and modules.

use std::collections::VecDeque;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{axpy, unit_vec, zero_vec, Echelon, Matrix, Rational, Subspace, Vector};
use crate::par;

/// Structure constants `e_i · e_j = Σ_k c[i][j][k] e_k` plus a unit vector.
///
/// Left and right multiplication matrices of every basis element are cached
/// at construction, so products are matrix-vector multiplications.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDesc {
    dim: usize,
    basis_names: Vec<String>,
    structure: Vec<Rational>,
    unit: Vector,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraViolation {
    Associativity { i: usize, j: usize, l: usize },
    LeftUnit { i: usize },
    RightUnit { i: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapViolation {
    Unit,
    Multiplicative { i: usize, j: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleViolation {
    Unit,
    Associativity { i: usize, j: usize },
}

fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

impl AlgebraDesc {
    /// `structure` is the flattened tensor, index `(i * n + j) * n + k`.
    pub fn new(basis_names: Vec<String>, structure: Vec<Rational>, unit: Vector) -> Result<Self> {
        let n = basis_names.len();
        check_dim("structure constants", n * n * n, structure.len())?;
        check_dim("unit vector", n, unit.len())?;
        let left = (0..n)
            .map(|i| Matrix::from_fn(n, n, |k, j| structure[(i * n + j) * n + k].clone()))
            .collect();
        let right = (0..n)
            .map(|j| Matrix::from_fn(n, n, |k, i| structure[(i * n + j) * n + k].clone()))
            .collect();
        Ok(AlgebraDesc {
            dim: n,
            basis_names,
            structure,
            unit,
            left,
            right,
        })
    }

    /// Builds the tensor from a closure giving `e_i · e_j` as a vector.
    pub fn from_products(
        basis_names: Vec<String>,
        unit: Vector,
        product: impl Fn(usize, usize) -> Vector,
    ) -> Result<Self> {
        let n = basis_names.len();
        let mut structure = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let p = product(i, j);
                check_dim("basis product", n, p.len())?;
                structure.extend(p);
            }
        }
        Self::new(basis_names, structure, unit)
    }

    /// Nested `c[i][j][k]` form, as in the JSON schema.
    pub fn from_nested(basis_names: Vec<String>, table: &[Vec<Vec<Rational>>], unit: Vector) -> Result<Self> {
        let n = basis_names.len();
        check_dim("structure rows", n, table.len())?;
        let mut structure = Vec::with_capacity(n * n * n);
        for row in table {
            check_dim("structure columns", n, row.len())?;
            for entry in row {
                check_dim("structure entry", n, entry.len())?;
                structure.extend(entry.iter().cloned());
            }
        }
        Self::new(basis_names, structure, unit)
    }

    /// The one-dimensional algebra ℚ.
    pub fn field() -> Self {
        Self::new(vec!["1".into()], vec![Rational::one()], vec![Rational::one()]).expect("shape")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        check_dim("basis names", self.dim, names.len())?;
        self.basis_names = names;
        Ok(self)
    }

    pub fn structure(&self) -> &[Rational] {
        &self.structure
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.structure[(i * self.dim + j) * self.dim + k]
    }

    pub fn nested_structure(&self) -> Vec<Vec<Vec<Rational>>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.basis_product(i, j)).collect())
            .collect()
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn zero(&self) -> Vector {
        zero_vec(self.dim)
    }

    pub fn basis(&self, i: usize) -> Vector {
        unit_vec(self.dim, i)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vector {
        let n = self.dim;
        self.structure[(i * n + j) * n..(i * n + j + 1) * n].to_vec()
    }

    /// Matrix of `y ↦ e_i y`.
    pub fn left_basis(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    /// Matrix of `x ↦ x e_j`.
    pub fn right_basis(&self, j: usize) -> &Matrix {
        &self.right[j]
    }

    pub fn left_matrix(&self, x: &[Rational]) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.left[i].scale(c));
            }
        }
        m
    }

    pub fn right_matrix(&self, y: &[Rational]) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (j, c) in y.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.right[j].scale(c));
            }
        }
        m
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vector {
        let mut out = zero_vec(self.dim);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &self.left[i].mul_vec(y));
            }
        }
        out
    }

    pub fn mul3(&self, x: &[Rational], y: &[Rational], z: &[Rational]) -> Vector {
        self.mul(&self.mul(x, y), z)
    }

    /// Every associativity triple and unit failure, in index order.
    pub fn validate(&self) -> Vec<AlgebraViolation> {
        let n = self.dim;
        let mut out: Vec<AlgebraViolation> = par::map_range(n, |i| {
            let mut bad = Vec::new();
            for j in 0..n {
                let ij = self.basis_product(i, j);
                for l in 0..n {
                    let lhs = self.right[l].mul_vec(&ij);
                    let rhs = self.left[i].mul_vec(&self.basis_product(j, l));
                    if lhs != rhs {
                        bad.push(AlgebraViolation::Associativity { i, j, l });
                    }
                }
            }
            bad
        })
        .into_iter()
        .flatten()
        .collect();
        let lu = self.left_matrix(&self.unit);
        let ru = self.right_matrix(&self.unit);
        for i in 0..n {
            if lu.column(i) != unit_vec(n, i) {
                out.push(AlgebraViolation::LeftUnit { i });
            }
            if ru.column(i) != unit_vec(n, i) {
                out.push(AlgebraViolation::RightUnit { i });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn opposite(&self) -> AlgebraDesc {
        let names = self.basis_names.clone();
        AlgebraDesc::from_products(names, self.unit.clone(), |i, j| self.basis_product(j, i))
            .expect("same shape")
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// `self ⊗ other` with basis `e_i ⊗ f_j` at index `i * m + j`.
    pub fn tensor(&self, other: &AlgebraDesc) -> AlgebraDesc {
        let m = other.dim;
        let names = self
            .basis_names
            .iter()
            .flat_map(|a| other.basis_names.iter().map(move |b| format!("{a}⊗{b}")))
            .collect();
        let unit = crate::linalg::kron_vec(&self.unit, &other.unit);
        AlgebraDesc::from_products(names, unit, |p, r| {
            crate::linalg::kron_vec(
                &self.basis_product(p / m, r / m),
                &other.basis_product(p % m, r % m),
            )
        })
        .expect("tensor shape")
    }

    /// `{x : x s = s x for all s in gens}`.
    pub fn commutant_of(&self, gens: &[Vector]) -> Subspace {
        let n = self.dim;
        let blocks: Vec<Matrix> = gens
            .iter()
            .map(|g| self.right_matrix(g).sub(&self.left_matrix(g)))
            .collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        if refs.is_empty() {
            return Subspace::full(n);
        }
        Matrix::vstack(&refs).kernel()
    }

    pub fn center(&self) -> Subspace {
        let gens: Vec<Vector> = (0..self.dim).map(|i| self.basis(i)).collect();
        self.commutant_of(&gens)
    }

    /// Smallest subspace containing the unit and `gens`, closed under
    /// multiplication.
    pub fn generated_subalgebra(&self, gens: &[Vector]) -> Subspace {
        let mut ech = Echelon::new(self.dim);
        let mut queue: VecDeque<Vector> = VecDeque::new();
        for v in std::iter::once(&self.unit).chain(gens) {
            if ech.insert_dense(v) {
                queue.push_back(v.clone());
            }
        }
        while let Some(v) = queue.pop_front() {
            for g in gens {
                let p = self.mul(&v, g);
                if ech.insert_dense(&p) {
                    queue.push_back(p);
                }
            }
        }
        ech.into_subspace()
    }

    /// Restricts the algebra to a unital, multiplicatively closed subspace,
    /// using the subspace's canonical basis.
    pub fn subalgebra(&self, space: &Subspace, prefix: &str) -> Result<Subalgebra> {
        check_dim("subalgebra ambient", self.dim, space.ambient_dim())?;
        let unit = space
            .coords(&self.unit)
            .ok_or_else(|| Error::InvalidInput("subspace does not contain the unit".into()))?;
        let basis = space.basis();
        let d = basis.len();
        let mut products = Vec::with_capacity(d * d);
        for x in basis {
            for y in basis {
                let p = self.mul(x, y);
                let c = space
                    .coords(&p)
                    .ok_or_else(|| Error::InvalidInput("subspace is not multiplicatively closed".into()))?;
                products.push(c);
            }
        }
        let algebra =
            AlgebraDesc::from_products(default_names(prefix, d), unit, |i, j| products[i * d + j].clone())?;
        Ok(Subalgebra {
            embedding: Matrix::from_columns(self.dim, basis),
            space: space.clone(),
            algebra,
        })
    }

    /// Greedy list of basis indices generating the algebra together with
    /// the unit.
    pub fn algebra_generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut current = self.generated_subalgebra(&[]);
        for i in 0..self.dim {
            if current.dim() == self.dim {
                break;
            }
            if current.contains(&self.basis(i)) {
                continue;
            }
            gens.push(i);
            let vs: Vec<Vector> = gens.iter().map(|&g| self.basis(g)).collect();
            current = self.generated_subalgebra(&vs);
        }
        gens
    }

    /// Multiplicative inverse, when it exists.
    pub fn inverse(&self, x: &[Rational]) -> Option<Vector> {
        self.left_matrix(x).solve(&self.unit).ok().flatten().filter(|y| self.mul(y, x) == self.unit)
    }
}

/// A subalgebra presented by its canonical basis inside the ambient algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subalgebra {
    pub space: Subspace,
    pub algebra: AlgebraDesc,
    /// Ambient-dim × sub-dim; columns are the canonical basis vectors.
    pub embedding: Matrix,
}

impl Subalgebra {
    pub fn embed(&self, r: &[Rational]) -> Vector {
        self.embedding.mul_vec(r)
    }

    pub fn coords(&self, x: &[Rational]) -> Option<Vector> {
        self.space.coords(x)
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

/// A linear map between algebras, checked separately for being unital and
/// multiplicative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMapDesc {
    pub source: AlgebraDesc,
    pub target: AlgebraDesc,
    pub matrix: Matrix,
}

impl AlgebraMapDesc {
    pub fn new(source: AlgebraDesc, target: AlgebraDesc, matrix: Matrix) -> Result<Self> {
        check_dim("homomorphism rows", target.dim(), matrix.rows())?;
        check_dim("homomorphism columns", source.dim(), matrix.cols())?;
        Ok(AlgebraMapDesc { source, target, matrix })
    }

    pub fn identity(a: &AlgebraDesc) -> Self {
        AlgebraMapDesc {
            source: a.clone(),
            target: a.clone(),
            matrix: Matrix::identity(a.dim()),
        }
    }

    pub fn apply(&self, x: &[Rational]) -> Vector {
        self.matrix.mul_vec(x)
    }

    pub fn image_of_basis(&self, i: usize) -> Vector {
        self.matrix.column(i)
    }

    pub fn validate(&self) -> Vec<MapViolation> {
        check_hom(&self.source, &self.target, &self.matrix, false)
    }

    /// Checks the matrix as a homomorphism from the opposite of the source.
    pub fn validate_anti(&self) -> Vec<MapViolation> {
        check_hom(&self.source, &self.target, &self.matrix, true)
    }

    pub fn compose(&self, then: &AlgebraMapDesc) -> Result<AlgebraMapDesc> {
        check_dim("composition", self.target.dim(), then.source.dim())?;
        AlgebraMapDesc::new(self.source.clone(), then.target.clone(), then.matrix.mul(&self.matrix))
    }
}

/// Unit and multiplicativity check for `f: a → b`; `anti` swaps the source
/// product order.
pub fn check_hom(a: &AlgebraDesc, b: &AlgebraDesc, f: &Matrix, anti: bool) -> Vec<MapViolation> {
    let mut out = Vec::new();
    if f.mul_vec(a.unit()) != *b.unit() {
        out.push(MapViolation::Unit);
    }
    let n = a.dim();
    let cols = f.column_vectors();
    let rows: Vec<Vec<MapViolation>> = par::map_range(n, |i| {
        (0..n)
            .filter(|&j| {
                let p = if anti { a.basis_product(j, i) } else { a.basis_product(i, j) };
                f.mul_vec(&p) != b.mul(&cols[i], &cols[j])
            })
            .map(|j| MapViolation::Multiplicative { i, j })
            .collect()
    });
    out.extend(rows.into_iter().flatten());
    out
}

/// A two-sided ideal: its generators and the closure under multiplication
/// by basis elements on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealDesc {
    pub generators: Vec<Vector>,
    pub closure: Subspace,
}

pub fn ideal_closure(a: &AlgebraDesc, generators: &[Vector]) -> Result<IdealDesc> {
    let n = a.dim();
    for g in generators {
        check_dim("ideal generator", n, g.len())?;
    }
    let mut ech = Echelon::new(n);
    let mut queue: VecDeque<Vector> = VecDeque::new();
    for g in generators {
        if ech.insert_dense(g) {
            queue.push_back(g.clone());
        }
    }
    while let Some(v) = queue.pop_front() {
        for i in 0..n {
            for p in [a.left_basis(i).mul_vec(&v), a.right_basis(i).mul_vec(&v)] {
                if ech.insert_dense(&p) {
                    queue.push_back(p);
                }
            }
        }
    }
    Ok(IdealDesc {
        generators: generators.to_vec(),
        closure: ech.into_subspace(),
    })
}

/// `span{ x s : s in S, x in basis(A) }` for a subspace `S`, multiplying on
/// the left (`x·s`) or right (`s·x`).
pub fn product_space(a: &AlgebraDesc, s: &Subspace, left: bool) -> Subspace {
    let mut ech = Echelon::new(a.dim());
    for v in s.basis() {
        for i in 0..a.dim() {
            let p = if left {
                a.left_basis(i).mul_vec(v)
            } else {
                a.right_basis(i).mul_vec(v)
            };
            ech.insert_dense(&p);
        }
    }
    ech.into_subspace()
}

/// A finite-dimensional left module: one action matrix per algebra basis
/// element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftModuleDesc {
    pub dim: usize,
    pub action: Vec<Matrix>,
}

impl LeftModuleDesc {
    pub fn new(algebra: &AlgebraDesc, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        check_dim("module action count", algebra.dim(), action.len())?;
        for m in &action {
            check_dim("module action rows", dim, m.rows())?;
            check_dim("module action columns", dim, m.cols())?;
        }
        Ok(LeftModuleDesc { dim, action })
    }

    pub fn regular(a: &AlgebraDesc) -> Self {
        LeftModuleDesc {
            dim: a.dim(),
            action: (0..a.dim()).map(|i| a.left_basis(i).clone()).collect(),
        }
    }

    pub fn act(&self, x: &[Rational]) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.action[i].scale(c));
            }
        }
        m
    }

    pub fn validate(&self, a: &AlgebraDesc) -> Vec<ModuleViolation> {
        let mut out = Vec::new();
        if self.action.len() != a.dim() {
            return vec![ModuleViolation::Unit];
        }
        if self.act(a.unit()) != Matrix::identity(self.dim) {
            out.push(ModuleViolation::Unit);
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                if self.act(&a.basis_product(i, j)) != self.action[i].mul(&self.action[j]) {
                    out.push(ModuleViolation::Associativity { i, j });
                }
            }
        }
        out
    }

    /// Pulls the action back along an algebra map into the acting algebra.
    pub fn restrict(&self, f: &AlgebraMapDesc) -> LeftModuleDesc {
        LeftModuleDesc {
            dim: self.dim,
            action: (0..f.source.dim()).map(|k| self.act(&f.image_of_basis(k))).collect(),
        }
    }

    pub fn direct_sum(&self, other: &LeftModuleDesc) -> LeftModuleDesc {
        let d = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(x, y)| {
                Matrix::from_fn(d, d, |i, j| {
                    if i < self.dim && j < self.dim {
                        x.get(i, j).clone()
                    } else if i >= self.dim && j >= self.dim {
                        y.get(i - self.dim, j - self.dim).clone()
                    } else {
                        Rational::zero()
                    }
                })
            })
            .collect();
        LeftModuleDesc { dim: d, action }
    }

    /// `{f : f ρ(x) = ρ(x) f}` for all basis `x`, as flattened matrices.
    pub fn endomorphisms(&self) -> Subspace {
        let refs: Vec<&Matrix> = self.action.iter().collect();
        crate::linalg::commutant(self.dim, &refs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn m2() -> AlgebraDesc {
        // e_ij at index 2i + j
        let names = vec!["e11".into(), "e12".into(), "e21".into(), "e22".into()];
        let mut unit = zero_vec(4);
        unit[0] = q(1);
        unit[3] = q(1);
        AlgebraDesc::from_products(names, unit, |a, b| {
            let (i, j, k, l) = (a / 2, a % 2, b / 2, b % 2);
            if j == k {
                unit_vec(4, 2 * i + l)
            } else {
                zero_vec(4)
            }
        })
        .unwrap()
    }

    #[test]
    fn matrix_units_are_valid_and_perturbation_is_caught() {
        let a = m2();
        assert!(a.validate().is_empty());
        let mut s = a.structure().to_vec();
        s[0] += q(1);
        let bad = AlgebraDesc::new(a.basis_names().to_vec(), s, a.unit().clone()).unwrap();
        assert!(bad
            .validate()
            .iter()
            .any(|v| matches!(v, AlgebraViolation::Associativity { .. })));
    }

    #[test]
    fn homomorphism_checks() {
        let a = m2();
        assert!(AlgebraMapDesc::identity(&a).validate().is_empty());
        let zero = AlgebraMapDesc::new(a.clone(), a.clone(), Matrix::zeros(4, 4)).unwrap();
        assert!(zero.validate().contains(&MapViolation::Unit));
        // transpose: M2^op → M2
        let mut t = Matrix::zeros(4, 4);
        for (x, y) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            t.set(y, x, q(1));
        }
        let op = a.opposite();
        let tr = AlgebraMapDesc::new(op.clone(), a.clone(), t).unwrap();
        assert!(tr.validate().is_empty());
        assert_eq!(op.opposite(), a);
    }

    #[test]
    fn center_and_ideals() {
        let a = m2();
        assert_eq!(a.center().dim(), 1);
        let full = ideal_closure(&a, &[a.unit().clone()]).unwrap();
        assert_eq!(full.closure.dim(), 4);
        assert_eq!(ideal_closure(&a, &[zero_vec(4)]).unwrap().closure.dim(), 0);
        let gens = a.algebra_generators();
        assert_eq!(a.generated_subalgebra(&gens.iter().map(|&g| a.basis(g)).collect::<Vec<_>>()).dim(), 4);
    }

    #[test]
    fn module_endomorphisms_of_regular_module() {
        let a = m2();
        let reg = LeftModuleDesc::regular(&a);
        assert!(reg.validate(&a).is_empty());
        // End_A(A) ≅ A^op
        assert_eq!(reg.endomorphisms().dim(), 4);
    }
}
