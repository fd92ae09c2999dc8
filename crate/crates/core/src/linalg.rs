//! Exact linear algebra over the rationals.
//!
//! Everything downstream reduces to three primitives: reduced row-echelon
//! form, linear solves with free variables pinned to zero, and canonical
//! subspaces. Subspaces are stored as the nonzero rows of their unique RREF,
//! so two subspaces are equal exactly when their stored bases are equal.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};

pub type Rational = BigRational;
pub type Vector = Vec<Rational>;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`; the result is always in lowest terms with a
/// positive denominator.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = t.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn zero_vec(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Rational::one();
    v
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Rational], c: &Rational, v: &[Rational]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

pub fn add_vec(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(v: &[Rational], c: &Rational) -> Vector {
    v.iter().map(|x| x * c).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

/// Coordinates of `x ⊗ y` in the basis `e_i ⊗ e_j`, index `i * len(y) + j`.
pub fn kron_vec(x: &[Rational], y: &[Rational]) -> Vector {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for a in x {
        for b in y {
            if a.is_zero() || b.is_zero() {
                out.push(Rational::zero());
            } else {
                out.push(a * b);
            }
        }
    }
    out
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: zero_vec(rows * cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        check_dim("matrix entry count", rows * cols, data.len())?;
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics on ragged input; callers that take user data go through
    /// [`Matrix::from_vec`].
    pub fn from_rows(cols: usize, rows: &[Vector]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r.iter().cloned());
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_columns(rows: usize, cols: &[Vector]) -> Self {
        Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix {
            rows,
            cols,
            data: entries.iter().map(|&x| q(x)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Rational) {
        if !v.is_zero() {
            self.data[i * self.cols + j] += v;
        }
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column_vectors(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Row-major entries; the flattening used whenever a matrix is treated
    /// as a vector (endomorphism spaces, Hom spaces).
    pub fn as_slice(&self) -> &[Rational] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: add_vec(&self.data, &other.data),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: sub_vec(&self.data, &other.data),
        }
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: scale_vec(&self.data, c),
        }
    }

    /// `self ⊗ other` acting on `kron_vec` coordinates.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Matrix::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.first().map_or(0, |m| m.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Matrix { rows, cols, data }
    }

    /// Unique reduced row-echelon form and its strictly increasing pivot
    /// columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut ech = Echelon::new(self.cols);
        for i in 0..self.rows {
            ech.insert_dense(self.row(i));
        }
        let (rows, pivots) = ech.into_rref();
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r {
                m.set(i, *j, v.clone());
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.cols);
        for i in 0..self.rows {
            ech.insert_dense(self.row(i));
        }
        ech.rank()
    }

    /// Null space `{x : self·x = 0}` in canonical form.
    pub fn kernel(&self) -> Subspace {
        let mut ech = Echelon::new(self.cols);
        for i in 0..self.rows {
            ech.insert_dense(self.row(i));
        }
        let (rows, pivots) = ech.into_rref();
        kernel_from_rref(self.cols, &rows, &pivots)
    }

    pub fn row_space(&self) -> Subspace {
        Subspace::span(self.cols, self.row_vectors())
    }

    pub fn column_space(&self) -> Subspace {
        Subspace::span(self.rows, self.column_vectors())
    }

    /// Some `x` with `self·x = b` when `b` lies in the column space. Free
    /// variables are set to zero, so the answer is deterministic.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vector>> {
        check_dim("solve right-hand side", self.rows, b.len())?;
        let n = self.cols;
        let mut ech = Echelon::new(n + 1);
        for i in 0..self.rows {
            let mut r = self.row(i).to_vec();
            r.push(b[i].clone());
            ech.insert_dense(&r);
        }
        let (rows, pivots) = ech.into_rref();
        if pivots.last() == Some(&n) {
            return Ok(None);
        }
        let mut x = zero_vec(n);
        for (r, &p) in rows.iter().zip(&pivots) {
            if let Some((_, v)) = r.iter().find(|(j, _)| *j == n) {
                x[p] = v.clone();
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut ech = Echelon::new(2 * n);
        for i in 0..n {
            let mut r = self.row(i).to_vec();
            r.extend(unit_vec(n, i));
            ech.insert_dense(&r);
        }
        let (rows, pivots) = ech.into_rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r {
                if *j >= n {
                    inv.set(i, j - n, v.clone());
                }
            }
        }
        Some(inv)
    }
}

type SparseRow = Vec<(usize, Rational)>;

fn sparse_from_dense(v: &[Rational]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

fn sparse_get(row: &SparseRow, col: usize) -> Option<&Rational> {
    row.binary_search_by_key(&col, |(j, _)| *j)
        .ok()
        .map(|k| &row[k].1)
}

/// `a - c * b` on sparse rows.
fn sparse_sub_scaled(a: &SparseRow, c: &Rational, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incrementally maintained reduced row-echelon basis with sparse rows.
///
/// After every insertion the stored rows are fully reduced: each row is
/// monic at its pivot and zero at every other pivot column. Reducing a new
/// vector is therefore a single pass over its pivot entries.
#[derive(Clone, Debug)]
pub struct Echelon {
    ambient: usize,
    rows: Vec<SparseRow>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(ambient: usize) -> Self {
        Echelon {
            ambient,
            rows: Vec::new(),
            pivot_row: vec![None; ambient],
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_sparse(&self, v: SparseRow) -> SparseRow {
        let hits: Vec<(usize, Rational)> = v
            .iter()
            .filter_map(|(j, x)| self.pivot_row[*j].map(|r| (r, x.clone())))
            .collect();
        let mut out = v;
        for (r, c) in hits {
            out = sparse_sub_scaled(&out, &c, &self.rows[r]);
        }
        out
    }

    /// Residual of `v` modulo the current span (zero iff `v` is in the span).
    pub fn reduce(&self, v: &[Rational]) -> Vector {
        let r = self.reduce_sparse(sparse_from_dense(v));
        let mut out = zero_vec(self.ambient);
        for (j, x) in r {
            out[j] = x;
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce_sparse(sparse_from_dense(v)).is_empty()
    }

    pub fn insert_dense(&mut self, v: &[Rational]) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        self.insert_sparse(sparse_from_dense(v))
    }

    /// Inserts a vector given as `(index, value)` pairs; unsorted input and
    /// repeated indices are accepted. Returns whether the rank grew.
    pub fn insert_entries(&mut self, entries: impl IntoIterator<Item = (usize, Rational)>) -> bool {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (j, x) in entries {
            if x.is_zero() {
                continue;
            }
            *acc.entry(j).or_insert_with(Rational::zero) += x;
        }
        let row: SparseRow = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        self.insert_sparse(row)
    }

    fn insert_sparse(&mut self, v: SparseRow) -> bool {
        let r = self.reduce_sparse(v);
        let Some((lead, lead_val)) = r.first().cloned() else {
            return false;
        };
        let inv = lead_val.recip();
        let r: SparseRow = r.into_iter().map(|(j, x)| (j, x * &inv)).collect();
        for row in self.rows.iter_mut() {
            if let Some(c) = sparse_get(row, lead).cloned() {
                *row = sparse_sub_scaled(row, &c, &r);
            }
        }
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(r);
        true
    }

    /// Rows sorted by pivot, with the pivot list.
    pub fn into_rref(self) -> (Vec<SparseRow>, Vec<usize>) {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r[0].0);
        let pivots = rows.iter().map(|r| r[0].0).collect();
        (rows, pivots)
    }

    pub fn into_subspace(self) -> Subspace {
        let ambient = self.ambient;
        let (rows, pivots) = self.into_rref();
        let basis = rows
            .into_iter()
            .map(|r| {
                let mut v = zero_vec(ambient);
                for (j, x) in r {
                    v[j] = x;
                }
                v
            })
            .collect();
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }
}

fn kernel_from_rref(n: usize, rows: &[SparseRow], pivots: &[usize]) -> Subspace {
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut ech = Echelon::new(n);
    for f in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = zero_vec(n);
        v[f] = Rational::one();
        for (r, &p) in rows.iter().zip(pivots) {
            if let Some(x) = sparse_get(r, f) {
                v[p] = -x.clone();
            }
        }
        ech.insert_dense(&v);
    }
    ech.into_subspace()
}

/// A subspace of `Q^n` in canonical RREF form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) [", self.dim(), self.ambient)?;
        for v in &self.basis {
            let row: Vec<String> = v.iter().map(format_rational).collect();
            write!(f, " [{}]", row.join(","))?;
        }
        write!(f, " ]")
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|i| unit_vec(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span<I, V>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[Rational]>,
    {
        let mut ech = Echelon::new(ambient);
        for v in vectors {
            ech.insert_dense(v.as_ref());
        }
        ech.into_subspace()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the canonical basis, read off the pivot
    /// columns and then checked.
    pub fn coords(&self, v: &[Rational]) -> Option<Vector> {
        if v.len() != self.ambient {
            return None;
        }
        let c: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        (self.combine(&c) == v).then_some(c)
    }

    /// Like [`Subspace::coords`] but reports a dimension mismatch instead of
    /// treating it as non-membership.
    pub fn span_membership(&self, v: &[Rational]) -> Result<Option<Vector>> {
        check_dim("span membership", self.ambient, v.len())?;
        Ok(self.coords(v))
    }

    /// Coordinates without the membership check; only meaningful for `v` in
    /// the subspace.
    pub fn coords_unchecked(&self, v: &[Rational]) -> Vector {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn combine(&self, c: &[Rational]) -> Vector {
        let mut out = zero_vec(self.ambient);
        for (ci, b) in c.iter().zip(&self.basis) {
            axpy(&mut out, ci, b);
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coords(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        check_dim("subspace sum", self.ambient, other.ambient)?;
        Ok(Subspace::span(
            self.ambient,
            self.basis.iter().chain(other.basis.iter()),
        ))
    }

    /// `a ∩ b` via the kernel of `[A^T | -B^T]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        check_dim("subspace intersection", self.ambient, other.ambient)?;
        let (da, db) = (self.dim(), other.dim());
        let n = self.ambient;
        let stacked = Matrix::from_fn(n, da + db, |i, j| {
            if j < da {
                self.basis[j][i].clone()
            } else {
                -other.basis[j - da][i].clone()
            }
        });
        let ker = stacked.kernel();
        Ok(Subspace::span(
            n,
            ker.basis().iter().map(|k| self.combine(&k[..da])),
        ))
    }

    /// A basis vector of `self` that is not contained in `other`, if any.
    pub fn witness_not_in(&self, other: &Subspace) -> Option<Vector> {
        self.basis.iter().find(|b| !other.contains(b)).cloned()
    }

    pub fn to_echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.ambient);
        for b in &self.basis {
            e.insert_dense(b);
        }
        e
    }

    /// Image of the subspace under a linear map.
    pub fn image(&self, m: &Matrix) -> Subspace {
        Subspace::span(m.rows(), self.basis.iter().map(|b| m.mul_vec(b)))
    }
}

/// Coefficients `c` with `Σ c_i · generators_i = v`, free coefficients zero.
pub fn span_coefficients(generators: &[Vector], v: &[Rational]) -> Result<Option<Vector>> {
    let n = v.len();
    for g in generators {
        check_dim("span generator", n, g.len())?;
    }
    Matrix::from_columns(n, generators).solve(v)
}

/// The quotient `Q^n / K` presented by the standard basis vectors at the
/// non-pivot positions of `K`'s RREF.
///
/// `project` reduces modulo `K` and reads the complement coordinates;
/// `section` places coordinates back on those positions, so
/// `project ∘ section = id`. Only the complement part of each relation row
/// is kept, sparsely, since that is all a projection reads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    ambient: usize,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
    tails: Vec<Vec<(usize, Rational)>>,
    complement: Vec<usize>,
    slot: Vec<Option<usize>>,
}

impl Quotient {
    pub fn new(relations: Subspace) -> Self {
        Self::from_echelon(relations.to_echelon())
    }

    pub fn from_echelon(e: Echelon) -> Self {
        let ambient = e.ambient();
        let (rows, pivots) = e.into_rref();
        let mut pivot_row = vec![None; ambient];
        for (r, &p) in pivots.iter().enumerate() {
            pivot_row[p] = Some(r);
        }
        let complement: Vec<usize> = (0..ambient).filter(|&j| pivot_row[j].is_none()).collect();
        let mut slot = vec![None; ambient];
        for (k, &j) in complement.iter().enumerate() {
            slot[j] = Some(k);
        }
        let tails = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .filter_map(|(j, x)| slot[j].map(|k| (k, x)))
                    .collect()
            })
            .collect();
        Quotient {
            ambient,
            pivots,
            pivot_row,
            tails,
            complement,
            slot,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn relation_dim(&self) -> usize {
        self.pivots.len()
    }

    /// Ambient indices of the complement basis.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    pub fn project(&self, v: &[Rational]) -> Vector {
        assert_eq!(v.len(), self.ambient, "quotient projection shape");
        self.project_entries(v.iter().enumerate())
    }

    /// Projection of a vector given sparsely as `(index, value)` pairs;
    /// repeated indices add up.
    pub fn project_entries<'a>(&self, entries: impl IntoIterator<Item = (usize, &'a Rational)>) -> Vector {
        let mut out = zero_vec(self.dim());
        for (j, c) in entries {
            if c.is_zero() {
                continue;
            }
            match (self.slot[j], self.pivot_row[j]) {
                (Some(k), _) => out[k] += c,
                (None, Some(r)) => {
                    for (k, x) in &self.tails[r] {
                        out[*k] -= c * x;
                    }
                }
                (None, None) => unreachable!("every index is a pivot or a complement slot"),
            }
        }
        out
    }

    pub fn section(&self, w: &[Rational]) -> Vector {
        assert_eq!(w.len(), self.dim(), "quotient section shape");
        let mut out = zero_vec(self.ambient);
        for (k, &j) in self.complement.iter().enumerate() {
            out[j] = w[k].clone();
        }
        out
    }

    /// Sparse lift: `(ambient index, coefficient)` for the nonzero
    /// coordinates of `w`.
    pub fn lift_entries(&self, w: &[Rational]) -> Vec<(usize, Rational)> {
        w.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| (self.complement[k], x.clone()))
            .collect()
    }

    /// Canonical relation basis as sparse ambient rows.
    pub fn relation_rows(&self) -> Vec<Vec<(usize, Rational)>> {
        self.pivots
            .iter()
            .zip(&self.tails)
            .map(|(&p, tail)| {
                let mut row = vec![(p, Rational::one())];
                row.extend(tail.iter().map(|(k, x)| (self.complement[*k], x.clone())));
                row
            })
            .collect()
    }

    pub fn slot_of(&self, ambient_index: usize) -> Option<usize> {
        self.slot[ambient_index]
    }

    pub fn is_zero_class(&self, v: &[Rational]) -> bool {
        is_zero_vec(&self.project(v))
    }

    pub fn project_matrix(&self) -> Matrix {
        let n = self.ambient;
        let cols: Vec<Vector> = (0..n).map(|j| self.project(&unit_vec(n, j))).collect();
        Matrix::from_columns(self.dim(), &cols)
    }

    pub fn section_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.ambient, self.dim());
        for (k, &j) in self.complement.iter().enumerate() {
            m.set(j, k, Rational::one());
        }
        m
    }

    /// Matrix on the quotient induced by an ambient map that preserves the
    /// relation space, given on ambient basis vectors.
    pub fn induced(&self, ambient_map: impl Fn(usize) -> Vector + Sync + Send) -> Matrix {
        let cols = crate::par::map_slice(&self.complement, |&j| self.project(&ambient_map(j)));
        Matrix::from_columns(self.dim(), &cols)
    }
}

/// All `F` (flattened `dn × dm`, row-major) with `F·P = Q·F` for every pair
/// `(P on the source, Q on the target)`.
pub fn intertwiners(dm: usize, dn: usize, pairs: &[(&Matrix, &Matrix)]) -> Subspace {
    let mut ech = Echelon::new(dn * dm);
    for (p, qm) in pairs {
        for i in 0..dn {
            for j in 0..dm {
                let mut entries = Vec::new();
                for k in 0..dm {
                    let x = p.get(k, j);
                    if !x.is_zero() {
                        entries.push((i * dm + k, x.clone()));
                    }
                }
                for k in 0..dn {
                    let x = qm.get(i, k);
                    if !x.is_zero() {
                        entries.push((k * dm + j, -x.clone()));
                    }
                }
                ech.insert_entries(entries);
            }
        }
    }
    let (rows, pivots) = ech.into_rref();
    kernel_from_rref(dn * dm, &rows, &pivots)
}

/// Matrices commuting with every given `d × d` matrix, flattened.
pub fn commutant(d: usize, mats: &[&Matrix]) -> Subspace {
    let pairs: Vec<(&Matrix, &Matrix)> = mats.iter().map(|m| (*m, *m)).collect();
    intertwiners(d, d, &pairs)
}

/// Reads a flattened row-major matrix back.
pub fn unflatten(rows: usize, cols: usize, v: &[Rational]) -> Matrix {
    Matrix::from_vec(rows, cols, v.to_vec()).expect("flattened matrix shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: usize, cols: usize, e: &[i64]) -> Matrix {
        Matrix::from_i64(rows, cols, e)
    }

    fn v(e: &[i64]) -> Vector {
        e.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn rational_parse_and_format() {
        assert_eq!(parse_rational("6/-4").unwrap(), qr(-3, 2));
        assert_eq!(format_rational(&qr(-3, 2)), "-3/2");
        assert_eq!(format_rational(&q(5)), "5");
        assert_eq!(parse_rational(" 7 ").unwrap(), q(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        let r = parse_rational("10/4").unwrap();
        assert_eq!(r.numer(), &BigInt::from(5));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn rref_examples() {
        let (r, p) = Matrix::identity(3).rref();
        assert_eq!(r, Matrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);

        let (r, p) = Matrix::zeros(2, 2).rref();
        assert!(r.is_zero());
        assert!(p.is_empty());

        let (r, p) = m(2, 2, &[2, 4, 1, 2]).rref();
        assert_eq!(r, m(2, 2, &[1, 2, 0, 0]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn solve_examples() {
        let b = v(&[1, -2, 5]);
        assert_eq!(Matrix::identity(3).solve(&b).unwrap(), Some(b));
        assert_eq!(Matrix::zeros(2, 2).solve(&v(&[1, 0])).unwrap(), None);
        assert_eq!(m(1, 2, &[1, 1]).solve(&v(&[3])).unwrap(), Some(v(&[3, 0])));
        assert!(Matrix::identity(2).solve(&v(&[1])).is_err());
    }

    #[test]
    fn span_membership_examples() {
        let s = Subspace::span(2, [v(&[1, 0])]);
        assert_eq!(s.span_membership(&v(&[3, 0])).unwrap(), Some(v(&[3])));
        assert_eq!(s.span_membership(&v(&[0, 1])).unwrap(), None);
        assert!(s.span_membership(&v(&[1])).is_err());
        let gens = [v(&[1, 1]), v(&[0, 1])];
        assert_eq!(
            span_coefficients(&gens, &v(&[1, 0])).unwrap(),
            Some(v(&[1, -1]))
        );
    }

    #[test]
    fn sum_and_intersection_examples() {
        let a = Subspace::span(2, [v(&[1, 0])]);
        let b = Subspace::span(2, [v(&[0, 1])]);
        assert_eq!(a.sum(&a).unwrap(), a);
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(2));
        assert_eq!(a.intersect(&b).unwrap().dim(), 0);
        let c = Subspace::span(2, [v(&[1, 1])]);
        let d = Subspace::span(2, [v(&[1, -1])]);
        assert_eq!(c.sum(&d).unwrap().dim(), 2);
        assert_eq!(c.intersect(&d).unwrap().dim(), 0);
        assert!(a.sum(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn quotient_section_projection() {
        let rel = Subspace::span(3, [v(&[1, -1, 0])]);
        let quo = Quotient::new(rel);
        assert_eq!(quo.dim(), 2);
        assert_eq!(quo.relation_dim(), 1);
        assert!(quo.is_zero_class(&v(&[1, -1, 0])));
        let p = quo.project_matrix();
        let s = quo.section_matrix();
        assert_eq!(p.mul(&s), Matrix::identity(2));
        assert_eq!(quo.project(&v(&[1, 0, 0])), quo.project(&v(&[0, 1, 0])));
    }

    #[test]
    fn commutant_of_diagonal() {
        let d = m(2, 2, &[1, 0, 0, 2]);
        let c = commutant(2, &[&d]);
        assert_eq!(c, Subspace::span(4, [v(&[1, 0, 0, 0]), v(&[0, 0, 0, 1])]));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(2, 2, &[2, 1, 1, 1]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(2, 2, &[1, 2, 2, 4]).inverse().is_none());
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |e| Matrix::from_i64(r, c, &e))
        })
    }

    fn subspace_pair() -> impl Strategy<Value = (Subspace, Subspace)> {
        (1usize..5).prop_flat_map(|n| {
            let vecs = proptest::collection::vec(proptest::collection::vec(-2i64..3, n), 0..4);
            (vecs.clone(), vecs).prop_map(move |(a, b)| {
                let a: Vec<Vector> = a.iter().map(|x| v(x)).collect();
                let b: Vec<Vector> = b.iter().map(|x| v(x)).collect();
                (Subspace::span(n, a), Subspace::span(n, b))
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(a in small_matrix()) {
            let (r, p) = a.rref();
            let (r2, p2) = r.rref();
            prop_assert_eq!(r, r2);
            prop_assert_eq!(p.clone(), p2);
            prop_assert!(p.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn solve_has_zero_residual(a in small_matrix(), seed in proptest::collection::vec(-3i64..4, 4)) {
            let x0: Vector = (0..a.cols()).map(|i| q(seed[i % seed.len()])).collect();
            let b = a.mul_vec(&x0);
            let x = a.solve(&b).unwrap().expect("consistent system");
            prop_assert_eq!(a.mul_vec(&x), b);
        }

        #[test]
        fn dimension_formula((a, b) in subspace_pair()) {
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            prop_assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
            prop_assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
        }

        #[test]
        fn canonical_form_equality((a, b) in subspace_pair()) {
            let same = a.is_subspace_of(&b) && b.is_subspace_of(&a);
            prop_assert_eq!(same, a == b);
        }

        #[test]
        fn kernel_is_annihilated(a in small_matrix()) {
            let k = a.kernel();
            prop_assert_eq!(k.dim() + a.rank(), a.cols());
            for b in k.basis() {
                prop_assert!(is_zero_vec(&a.mul_vec(b)));
            }
        }
    }
}
