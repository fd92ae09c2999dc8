//! Finite-dimensional coalgebras and their maps: cotensor products,
//! quotient module coalgebras and the coGalois maps, codepth two decided
//! through the dual algebra extension and checked directly with coquasibases,
//! the isomorphism `A ⊗_B A ≅ (C □_D C)*`, and the anti-isomorphism
//! `End ^DC^D → End _BA_B`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{check_hom, AlgebraDesc, AlgebraMapDesc};
use crate::bialgebroid::{build_s_bialgebroid, right_tensor, verify_right_bialgebroid, AxiomReport, RightBialgebroidDesc};
use crate::bimodule::combine_matrices;
use crate::depth_two::{d2_check, Side};
use crate::error::{check_dim, Error, Result};
use crate::extension::ExtensionCtx;
use crate::hopf::HopfAlgebraDesc;
use crate::linalg::{axpy, dot, is_zero_vec, kron_vec, unit_vec, zero_vec, Matrix, Quotient, Rational, Subspace, Vector};
use crate::par;
use crate::smash::EndomorphismRing;

fn first_column_diff(a: &Matrix, b: &Matrix) -> Option<usize> {
    (0..a.cols()).find(|&j| a.column(j) != b.column(j))
}

/// A coalgebra: `Δ(c_i) = Σ d[i][j][k] c_j ⊗ c_k` stored as the `n² × n`
/// matrix with entry `(j·n + k, i)`, and the counit as a vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalgebraDesc {
    pub basis_names: Vec<String>,
    pub coproduct: Matrix,
    pub counit: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoalgebraViolation {
    Coassociativity { c: usize },
    LeftCounit { c: usize },
    RightCounit { c: usize },
}

impl CoalgebraDesc {
    pub fn new(basis_names: Vec<String>, coproduct: Matrix, counit: Vector) -> Result<Self> {
        let n = basis_names.len();
        check_dim("coproduct rows", n * n, coproduct.rows())?;
        check_dim("coproduct columns", n, coproduct.cols())?;
        check_dim("counit length", n, counit.len())?;
        Ok(CoalgebraDesc {
            basis_names,
            coproduct,
            counit,
        })
    }

    /// Nested `d[i][j][k]` form, as in the JSON schema.
    pub fn from_nested(basis_names: Vec<String>, table: &[Vec<Vec<Rational>>], counit: Vector) -> Result<Self> {
        let n = basis_names.len();
        check_dim("coproduct tensor", n, table.len())?;
        let mut m = Matrix::zeros(n * n, n);
        for (i, rows) in table.iter().enumerate() {
            check_dim("coproduct tensor row", n, rows.len())?;
            for (j, row) in rows.iter().enumerate() {
                check_dim("coproduct tensor entry", n, row.len())?;
                for (k, x) in row.iter().enumerate() {
                    m.set(j * n + k, i, x.clone());
                }
            }
        }
        Self::new(basis_names, m, counit)
    }

    pub fn nested_coproduct(&self) -> Vec<Vec<Vec<Rational>>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| self.coproduct.get(j * n + k, i).clone()).collect()).collect())
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    /// The one-dimensional coalgebra `ℚ`.
    pub fn field() -> Self {
        Self::new(vec!["1".into()], Matrix::identity(1), vec![Rational::one()]).expect("shape")
    }

    /// Underlying coalgebra of a Hopf algebra.
    pub fn of_hopf(h: &HopfAlgebraDesc) -> Self {
        Self::new(h.algebra.basis_names().to_vec(), h.coproduct.clone(), h.counit.clone()).expect("Hopf shapes")
    }

    /// `A*` for a finite-dimensional algebra: `Δ(φ_k) = Σ c_{ij}^k φ_i ⊗ φ_j`.
    pub fn dual_of_algebra(a: &AlgebraDesc) -> Self {
        let n = a.dim();
        let coproduct = Matrix::from_fn(n * n, n, |r, k| a.constant(r / n, r % n, k).clone());
        let names = a.basis_names().iter().map(|s| format!("{s}*")).collect();
        Self::new(names, coproduct, a.unit().clone()).expect("algebra shapes")
    }

    /// The convolution algebra `C*` in the dual basis.
    pub fn dual(&self) -> AlgebraDesc {
        let n = self.dim();
        let names = self.basis_names.iter().map(|s| format!("{s}*")).collect();
        AlgebraDesc::from_products(names, self.counit.clone(), |j, k| {
            (0..n).map(|i| self.coproduct.get(j * n + k, i).clone()).collect()
        })
        .expect("coalgebra shapes")
    }

    pub fn validate(&self) -> Vec<CoalgebraViolation> {
        let n = self.dim();
        let id = Matrix::identity(n);
        let d = &self.coproduct;
        let left = id.kronecker(d).mul(d);
        let right = d.kronecker(&id).mul(d);
        let eps = Matrix::from_rows(n, &[self.counit.clone()]);
        let lc = eps.kronecker(&id).mul(d);
        let rc = id.kronecker(&eps).mul(d);
        let mut out = Vec::new();
        if let Some(c) = first_column_diff(&left, &right) {
            out.push(CoalgebraViolation::Coassociativity { c });
        }
        if let Some(c) = first_column_diff(&lc, &id) {
            out.push(CoalgebraViolation::LeftCounit { c });
        }
        if let Some(c) = first_column_diff(&rc, &id) {
            out.push(CoalgebraViolation::RightCounit { c });
        }
        out
    }

    /// `(δ_x ⊗ id)Δ` for each basis functional `δ_x`.
    pub fn left_slices(&self) -> Vec<Matrix> {
        let n = self.dim();
        (0..n)
            .map(|x| Matrix::from_fn(n, n, |r, c| self.coproduct.get(x * n + r, c).clone()))
            .collect()
    }

    /// `(id ⊗ δ_x)Δ` for each basis functional `δ_x`.
    pub fn right_slices(&self) -> Vec<Matrix> {
        let n = self.dim();
        (0..n)
            .map(|x| Matrix::from_fn(n, n, |r, c| self.coproduct.get(r * n + x, c).clone()))
            .collect()
    }
}

/// A coalgebra map `g: C → D`, matrix `dim D × dim C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalgebraMapDesc {
    pub source: CoalgebraDesc,
    pub target: CoalgebraDesc,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoalgebraMapViolation {
    Comultiplicative { c: usize },
    Counit { c: usize },
}

impl CoalgebraMapDesc {
    pub fn new(source: CoalgebraDesc, target: CoalgebraDesc, matrix: Matrix) -> Result<Self> {
        check_dim("map rows", target.dim(), matrix.rows())?;
        check_dim("map columns", source.dim(), matrix.cols())?;
        Ok(CoalgebraMapDesc { source, target, matrix })
    }

    pub fn identity(c: &CoalgebraDesc) -> Self {
        Self::new(c.clone(), c.clone(), Matrix::identity(c.dim())).expect("shape")
    }

    /// The counit `C → ℚ`.
    pub fn counit_map(c: &CoalgebraDesc) -> Self {
        let m = Matrix::from_rows(c.dim(), &[c.counit.clone()]);
        Self::new(c.clone(), CoalgebraDesc::field(), m).expect("shape")
    }

    pub fn validate(&self) -> Vec<CoalgebraMapViolation> {
        let g = &self.matrix;
        let lhs = g.kronecker(g).mul(&self.source.coproduct);
        let rhs = self.target.coproduct.mul(g);
        let mut out = Vec::new();
        if let Some(c) = first_column_diff(&lhs, &rhs) {
            out.push(CoalgebraMapViolation::Comultiplicative { c });
        }
        let eps = Matrix::from_rows(self.target.dim(), &[self.target.counit.clone()]).mul(g);
        if let Some(c) = (0..self.source.dim()).find(|&c| eps.get(0, c) != &self.source.counit[c]) {
            out.push(CoalgebraMapViolation::Counit { c });
        }
        out
    }

    /// `g*: D* → C*`, `ψ ↦ ψ∘g`.
    pub fn dual(&self) -> Result<AlgebraMapDesc> {
        AlgebraMapDesc::new(self.target.dual(), self.source.dual(), self.matrix.transpose())
    }

    /// `ρ_L(c) = g(c₁) ⊗ c₂`, as `dim D · dim C × dim C`.
    pub fn left_coaction(&self) -> Matrix {
        self.matrix
            .kronecker(&Matrix::identity(self.source.dim()))
            .mul(&self.source.coproduct)
    }

    /// `ρ_R(c) = c₁ ⊗ g(c₂)`.
    pub fn right_coaction(&self) -> Matrix {
        Matrix::identity(self.source.dim())
            .kronecker(&self.matrix)
            .mul(&self.source.coproduct)
    }

    /// `(δ_d ⊗ id)ρ_L` for each basis functional of `D`.
    pub fn left_slices(&self) -> Vec<Matrix> {
        let (n, dd) = (self.source.dim(), self.target.dim());
        let rho = self.left_coaction();
        (0..dd).map(|d| Matrix::from_fn(n, n, |r, c| rho.get(d * n + r, c).clone())).collect()
    }

    /// `(id ⊗ δ_d)ρ_R` for each basis functional of `D`.
    pub fn right_slices(&self) -> Vec<Matrix> {
        let (n, dd) = (self.source.dim(), self.target.dim());
        let rho = self.right_coaction();
        (0..dd).map(|d| Matrix::from_fn(n, n, |r, c| rho.get(r * dd + d, c).clone())).collect()
    }
}

/// `C □_D C ⊆ C ⊗ C` with the four coactions written as slice operators on
/// cotensor coordinates: for a coaction `V → X ⊗ V` the slice at `x` is
/// `(δ_x ⊗ id)` applied after it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotensorCtx {
    pub n: usize,
    pub space: Subspace,
    /// `ρ_L ⊗ id` sliced by `D`.
    pub left_d: Vec<Matrix>,
    /// `id ⊗ ρ_R` sliced by `D`.
    pub right_d: Vec<Matrix>,
    /// `Δ ⊗ id` sliced by `C`.
    pub left_c: Vec<Matrix>,
    /// `id ⊗ Δ` sliced by `C`.
    pub right_c: Vec<Matrix>,
}

impl CotensorCtx {
    pub fn new(g: &CoalgebraMapDesc) -> Result<Self> {
        let n = g.source.dim();
        let id = Matrix::identity(n);
        let (gl, gr) = (g.left_slices(), g.right_slices());
        let blocks: Vec<Matrix> = gl
            .iter()
            .zip(&gr)
            .map(|(l, r)| r.kronecker(&id).sub(&id.kronecker(l)))
            .collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let space = if refs.is_empty() {
            Subspace::full(n * n)
        } else {
            Matrix::vstack(&refs).kernel()
        };
        let restrict = |m: &Matrix, what: &str| -> Result<Matrix> {
            let cols = space
                .basis()
                .iter()
                .map(|b| {
                    space
                        .coords(&m.mul_vec(b))
                        .ok_or_else(|| Error::Verification(format!("{what} leaves the cotensor product")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_columns(space.dim(), &cols))
        };
        let left_d = gl.iter().map(|l| restrict(&l.kronecker(&id), "left D-coaction")).collect::<Result<_>>()?;
        let right_d = gr.iter().map(|r| restrict(&id.kronecker(r), "right D-coaction")).collect::<Result<_>>()?;
        let left_c = g
            .source
            .left_slices()
            .iter()
            .map(|l| restrict(&l.kronecker(&id), "left C-coaction"))
            .collect::<Result<_>>()?;
        let right_c = g
            .source
            .right_slices()
            .iter()
            .map(|r| restrict(&id.kronecker(r), "right C-coaction"))
            .collect::<Result<_>>()?;
        Ok(CotensorCtx {
            n,
            space,
            left_d,
            right_d,
            left_c,
            right_c,
        })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis(&self) -> &[Vector] {
        self.space.basis()
    }

    /// Every left coaction commutes with every right coaction.
    pub fn coactions_commute(&self) -> bool {
        let lefts = self.left_d.iter().chain(&self.left_c);
        lefts
            .into_iter()
            .all(|l| self.right_d.iter().chain(&self.right_c).all(|r| l.mul(r) == r.mul(l)))
    }

    /// Space of functionals `η` (on cotensor coordinates) with
    /// `η((δ_d ⊗ id)ρ_L x) = η((id ⊗ δ_d)ρ_R x)`: the `D*`-central part of
    /// the dual.
    pub fn invariant_functionals(&self) -> Subspace {
        let blocks: Vec<Matrix> = self
            .left_d
            .iter()
            .zip(&self.right_d)
            .map(|(l, r)| l.sub(r).transpose())
            .collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        if refs.is_empty() {
            Subspace::full(self.dim())
        } else {
            Matrix::vstack(&refs).kernel()
        }
    }
}

/// Checks on `Δ̲: C → C □_D C` and its two splittings.
pub fn diagonal_checks(g: &CoalgebraMapDesc, cot: &CotensorCtx) -> AxiomReport {
    let c = &g.source;
    let n = c.dim();
    let mut rep = AxiomReport::default();
    let cols: Vec<Option<Vector>> = (0..n).map(|i| cot.space.coords(&c.coproduct.column(i))).collect();
    let outside = cols.iter().position(Option::is_none);
    rep.record("diagonal_in_cotensor", outside.map(|i| format!("c={i}")));
    if outside.is_some() {
        return rep;
    }
    let diag = Matrix::from_columns(cot.dim(), &cols.into_iter().map(Option::unwrap).collect::<Vec<_>>());
    let (lc, rc) = (c.left_slices(), c.right_slices());
    let bicomodule = (0..n).all(|x| diag.mul(&lc[x]) == cot.left_c[x].mul(&diag) && diag.mul(&rc[x]) == cot.right_c[x].mul(&diag));
    rep.record("diagonal_bicomodule_map", (!bicomodule).then(|| "Δ̲ not C-C-colinear".to_string()));
    let eps = Matrix::from_rows(n, &[c.counit.clone()]);
    let id = Matrix::identity(n);
    let basis = Matrix::from_columns(n * n, cot.basis());
    let split_left = eps.kronecker(&id).mul(&basis);
    let split_right = id.kronecker(&eps).mul(&basis);
    rep.record(
        "left_split_retracts",
        first_column_diff(&split_left.mul(&diag), &id).map(|i| format!("c={i}")),
    );
    rep.record(
        "right_split_retracts",
        first_column_diff(&split_right.mul(&diag), &id).map(|i| format!("c={i}")),
    );
    let (gl, gr) = (g.left_slices(), g.right_slices());
    let left_ok = (0..gl.len()).all(|d| gl[d].mul(&split_left) == split_left.mul(&cot.left_d[d]))
        && (0..n).all(|x| rc[x].mul(&split_left) == split_left.mul(&cot.right_c[x]));
    rep.record("left_split_d_c_colinear", (!left_ok).then(|| "c⊗c' ↦ ε(c)c'".to_string()));
    let right_ok = (0..gr.len()).all(|d| gr[d].mul(&split_right) == split_right.mul(&cot.right_d[d]))
        && (0..n).all(|x| lc[x].mul(&split_right) == split_right.mul(&cot.left_c[x]));
    rep.record("right_split_c_d_colinear", (!right_ok).then(|| "c⊗c' ↦ cε(c')".to_string()));
    rep
}

/// A right `K`-module coalgebra: one matrix `c ↦ c·h` per basis element of `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleCoalgebraDesc {
    pub coalgebra: CoalgebraDesc,
    pub hopf: HopfAlgebraDesc,
    pub action: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleCoalgebraViolation {
    Unit,
    Associativity { h: usize, k: usize },
    Comultiplicative { h: usize },
    Counit { h: usize },
}

impl ModuleCoalgebraDesc {
    pub fn new(coalgebra: CoalgebraDesc, hopf: HopfAlgebraDesc, action: Vec<Matrix>) -> Result<Self> {
        check_dim("action count", hopf.dim(), action.len())?;
        for m in &action {
            check_dim("action rows", coalgebra.dim(), m.rows())?;
            check_dim("action columns", coalgebra.dim(), m.cols())?;
        }
        Ok(ModuleCoalgebraDesc {
            coalgebra,
            hopf,
            action,
        })
    }

    /// `H` as a right module coalgebra over a Hopf subalgebra `K` by right
    /// multiplication; `inclusion` is `dim H × dim K`.
    pub fn hopf_subalgebra(h: &HopfAlgebraDesc, k: &HopfAlgebraDesc, inclusion: &Matrix) -> Result<Self> {
        check_dim("inclusion rows", h.dim(), inclusion.rows())?;
        check_dim("inclusion columns", k.dim(), inclusion.cols())?;
        if let Some(v) = check_hom(&k.algebra, &h.algebra, inclusion, false).first() {
            return Err(Error::InvalidInput(format!("inclusion is not an algebra map: {v:?}")));
        }
        if inclusion.kronecker(inclusion).mul(&k.coproduct) != h.coproduct.mul(inclusion) {
            return Err(Error::InvalidInput("inclusion does not preserve the coproduct".into()));
        }
        let action = (0..k.dim())
            .map(|j| h.algebra.right_matrix(&inclusion.column(j)))
            .collect();
        Self::new(CoalgebraDesc::of_hopf(h), k.clone(), action)
    }

    pub fn act(&self, h: &[Rational]) -> Matrix {
        combine_matrices(&self.action, h, self.coalgebra.dim())
    }

    pub fn validate(&self) -> Vec<ModuleCoalgebraViolation> {
        let (k, n) = (&self.hopf, self.coalgebra.dim());
        let mut out = Vec::new();
        if self.act(k.algebra.unit()) != Matrix::identity(n) {
            out.push(ModuleCoalgebraViolation::Unit);
        }
        let dk = k.dim();
        for h in 0..dk {
            for j in 0..dk {
                if self.act(&k.algebra.basis_product(h, j)) != self.action[j].mul(&self.action[h]) {
                    out.push(ModuleCoalgebraViolation::Associativity { h, k: j });
                }
            }
        }
        let d = &self.coalgebra.coproduct;
        for h in 0..dk {
            let mut rhs = Matrix::zeros(n * n, n * n);
            for (x, y, c) in k.sweedler(&unit_vec(dk, h)) {
                rhs = rhs.add(&self.action[x].kronecker(&self.action[y]).scale(&c));
            }
            if d.mul(&self.action[h]) != rhs.mul(d) {
                out.push(ModuleCoalgebraViolation::Comultiplicative { h });
            }
            let eps = Matrix::from_rows(n, &[self.coalgebra.counit.clone()]);
            if eps.mul(&self.action[h]) != eps.scale(&k.counit[h]) {
                out.push(ModuleCoalgebraViolation::Counit { h });
            }
        }
        out
    }
}

/// `C̄ = C/CK⁺` with the projection `p`.
pub fn quotient_module_coalgebra(mc: &ModuleCoalgebraDesc) -> Result<CoalgebraMapDesc> {
    if let Some(v) = mc.validate().first() {
        return Err(Error::InvalidInput(format!("not a module coalgebra: {v:?}")));
    }
    let c = &mc.coalgebra;
    let n = c.dim();
    let k = &mc.hopf;
    let mut rels = Vec::new();
    for h in 0..k.dim() {
        let shifted = mc.action[h].sub(&Matrix::identity(n).scale(&k.counit[h]));
        rels.extend(shifted.column_vectors());
    }
    let quotient = Quotient::new(Subspace::span(n, rels));
    let p = quotient.project_matrix();
    let pp = p.kronecker(&p);
    let descends = quotient
        .relation_rows()
        .iter()
        .all(|row| {
            let mut v = zero_vec(n);
            for (j, x) in row {
                v[*j] += x;
            }
            is_zero_vec(&pp.mul_vec(&c.coproduct.mul_vec(&v))) && dot(&c.counit, &v).is_zero()
        });
    if !descends {
        return Err(Error::InvalidInput("Δ does not descend to C/CK⁺".into()));
    }
    let comp = quotient.complement().to_vec();
    let coproduct = Matrix::from_columns(
        quotient.dim() * quotient.dim(),
        &comp.iter().map(|&i| pp.mul_vec(&c.coproduct.column(i))).collect::<Vec<_>>(),
    );
    let counit = comp.iter().map(|&i| c.counit[i].clone()).collect();
    let names = comp.iter().map(|&i| format!("[{}]", c.basis_names[i])).collect();
    let bar = CoalgebraDesc::new(names, coproduct, counit)?;
    if let Some(v) = bar.validate().first() {
        return Err(Error::Verification(format!("quotient coalgebra invalid: {v:?}")));
    }
    let map = CoalgebraMapDesc::new(c.clone(), bar, p)?;
    if let Some(v) = map.validate().first() {
        return Err(Error::Verification(format!("projection is not a coalgebra map: {v:?}")));
    }
    Ok(map)
}

/// `can(c ⊗ h) = c₁ ⊗ c₂h`, `can′(c ⊗ h) = c₁h ⊗ c₂` and the twist `Φ`,
/// all on `C ⊗ H` with index `c·dim H + h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoGaloisMaps {
    pub projection: CoalgebraMapDesc,
    pub cotensor: CotensorCtx,
    /// Into `C ⊗ C`.
    pub can: Matrix,
    pub can_prime: Matrix,
    pub twist: Matrix,
    pub twist_inverse: Matrix,
    pub report: AxiomReport,
}

pub fn cogalois_maps(mc: &ModuleCoalgebraDesc) -> Result<CoGaloisMaps> {
    let projection = quotient_module_coalgebra(mc)?;
    let cotensor = CotensorCtx::new(&projection)?;
    let c = &mc.coalgebra;
    let k = &mc.hopf;
    let (n, dk) = (c.dim(), k.dim());
    let id = Matrix::identity(n);
    let mut can = Matrix::zeros(n * n, n * dk);
    let mut can_prime = Matrix::zeros(n * n, n * dk);
    for x in 0..n {
        let dx = c.coproduct.column(x);
        for h in 0..dk {
            let a = id.kronecker(&mc.action[h]).mul_vec(&dx);
            let b = mc.action[h].kronecker(&id).mul_vec(&dx);
            for r in 0..n * n {
                can.set(r, x * dk + h, a[r].clone());
                can_prime.set(r, x * dk + h, b[r].clone());
            }
        }
    }
    let s_inv = match &k.antipode_inverse {
        Some(m) => m.clone(),
        None => k
            .antipode
            .inverse()
            .ok_or_else(|| Error::Hypothesis("antipode is not bijective".into()))?,
    };
    let mut twist = Matrix::zeros(n * dk, n * dk);
    let mut twist_inverse = Matrix::zeros(n * dk, n * dk);
    for x in 0..n {
        for h in 0..dk {
            for (h1, h2, coeff) in k.sweedler(&unit_vec(dk, h)) {
                let v = kron_vec(&mc.action[h1].column(x), &k.antipode.column(h2));
                let w = kron_vec(&mc.action[h2].column(x), &s_inv.column(h1));
                for r in 0..n * dk {
                    twist.add_at(r, x * dk + h, &(&coeff * &v[r]));
                    twist_inverse.add_at(r, x * dk + h, &(&coeff * &w[r]));
                }
            }
        }
    }
    let mut report = AxiomReport::default();
    let lands = |m: &Matrix| (0..m.cols()).find(|&j| !cotensor.space.contains(&m.column(j)));
    report.record("can_lands_in_cotensor", lands(&can).map(|j| format!("c⊗h={j}")));
    report.record("can_prime_lands_in_cotensor", lands(&can_prime).map(|j| format!("c⊗h={j}")));
    let bij = |m: &Matrix| {
        let r = m.rank();
        (r != cotensor.dim() || r != m.cols()).then(|| format!("rank {r}, cotensor {}, domain {}", cotensor.dim(), m.cols()))
    };
    report.record("can_bijective", bij(&can));
    report.record("can_prime_bijective", bij(&can_prime));
    let nd = n * dk;
    report.record(
        "twist_inverse",
        first_column_diff(&twist.mul(&twist_inverse), &Matrix::identity(nd))
            .or_else(|| first_column_diff(&twist_inverse.mul(&twist), &Matrix::identity(nd)))
            .map(|j| format!("c⊗h={j}")),
    );
    report.record(
        "can_prime_is_can_after_twist",
        first_column_diff(&can_prime, &can.mul(&twist)).map(|j| format!("c⊗h={j}")),
    );
    Ok(CoGaloisMaps {
        projection,
        cotensor,
        can,
        can_prime,
        twist,
        twist_inverse,
        report,
    })
}

/// The algebra extension `g*: D* → C*`.
pub fn dual_extension(g: &CoalgebraMapDesc) -> Result<ExtensionCtx> {
    if let Some(v) = g.source.validate().first() {
        return Err(Error::InvalidInput(format!("C is not a coalgebra: {v:?}")));
    }
    if let Some(v) = g.target.validate().first() {
        return Err(Error::InvalidInput(format!("D is not a coalgebra: {v:?}")));
    }
    if let Some(v) = g.validate().first() {
        return Err(Error::InvalidInput(format!("g is not a coalgebra map: {v:?}")));
    }
    ExtensionCtx::from_map(g.dual()?)
}

/// One summand `(η, α)`: `η` by its values on the cotensor basis, `α` a
/// matrix on `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoQuasibasePair {
    pub functional: Vector,
    pub map: Matrix,
}

/// Left: `c ⊗ c' = Σ η_i(c ⊗ c'₁) α_i(c'₂) ⊗ c'₃`. Right:
/// `c ⊗ c' = Σ c₁ ⊗ α_j(c₂) η_j(c₃ ⊗ c')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoQuasibase {
    pub side: Side,
    pub pairs: Vec<CoQuasibasePair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoQuasibaseFailure {
    FunctionalNotInvariant { pair: usize },
    MapNotBicolinear { pair: usize },
    Identity { element: usize },
}

/// Context for codepth two questions about one coalgebra map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoD2Ctx {
    pub map: CoalgebraMapDesc,
    pub cotensor: CotensorCtx,
    pub invariant_functionals: Subspace,
    /// `End ^DC^D` with composition.
    pub bicolinear: EndomorphismRing,
}

impl CoD2Ctx {
    pub fn new(g: &CoalgebraMapDesc) -> Result<Self> {
        let cotensor = CotensorCtx::new(g)?;
        let invariant_functionals = cotensor.invariant_functionals();
        let mut mats = g.left_slices();
        mats.extend(g.right_slices());
        let bicolinear = EndomorphismRing::commutant_of(g.source.dim(), &mats)?;
        Ok(CoD2Ctx {
            map: g.clone(),
            cotensor,
            invariant_functionals,
            bicolinear,
        })
    }

    /// Right-hand side of the quasibase identity for one pair, as a matrix
    /// from cotensor coordinates into `C ⊗ C`.
    fn pair_operator(&self, side: Side, eta: &[Rational], alpha: &Matrix) -> Matrix {
        let cot = &self.cotensor;
        let n = cot.n;
        let cols: Vec<Vector> = (0..cot.dim())
            .map(|k| {
                let x = unit_vec(cot.dim(), k);
                let mut acc = zero_vec(n * n);
                for p in 0..n {
                    for q in 0..n {
                        let (first, second) = match side {
                            Side::Left => (&cot.right_c[p], &cot.right_c[q]),
                            Side::Right => (&cot.left_c[q], &cot.left_c[p]),
                        };
                        let value = dot(eta, &first.mul(second).mul_vec(&x));
                        if value.is_zero() {
                            continue;
                        }
                        let v = match side {
                            Side::Left => kron_vec(&alpha.column(p), &unit_vec(n, q)),
                            Side::Right => kron_vec(&unit_vec(n, p), &alpha.column(q)),
                        };
                        axpy(&mut acc, &value, &v);
                    }
                }
                acc
            })
            .collect();
        Matrix::from_columns(n * n, &cols)
    }

    fn target(&self) -> Matrix {
        Matrix::from_columns(self.cotensor.n * self.cotensor.n, self.cotensor.basis())
    }

    pub fn failure(&self, qb: &CoQuasibase) -> Option<CoQuasibaseFailure> {
        for (i, p) in qb.pairs.iter().enumerate() {
            if p.functional.len() != self.cotensor.dim() || !self.invariant_functionals.contains(&p.functional) {
                return Some(CoQuasibaseFailure::FunctionalNotInvariant { pair: i });
            }
            if self.bicolinear.coords(&p.map).is_none() {
                return Some(CoQuasibaseFailure::MapNotBicolinear { pair: i });
            }
        }
        let n = self.cotensor.n;
        let mut total = Matrix::zeros(n * n, self.cotensor.dim());
        for p in &qb.pairs {
            total = total.add(&self.pair_operator(qb.side, &p.functional, &p.map));
        }
        first_column_diff(&total, &self.target()).map(|element| CoQuasibaseFailure::Identity { element })
    }

    pub fn verify(&self, qb: &CoQuasibase) -> bool {
        self.failure(qb).is_none()
    }

    /// Decides codepth two on the coalgebra side alone by solving for the
    /// coefficients of a coquasibase over products of basis functionals and
    /// basis bicomodule maps.
    pub fn direct(&self, side: Side) -> Result<(bool, Option<CoQuasibase>)> {
        let etas = self.invariant_functionals.basis();
        let alphas = &self.bicolinear.maps;
        let na = alphas.len();
        let cols: Vec<Vector> = par::map_range(etas.len() * na, |p| {
            self.pair_operator(side, &etas[p / na], &alphas[p % na]).into_vec()
        });
        let rows = self.cotensor.n * self.cotensor.n * self.cotensor.dim();
        let system = Matrix::from_columns(rows, &cols);
        let Some(coeffs) = system.solve(&self.target().into_vec())? else {
            return Ok((false, None));
        };
        let pairs = (0..na)
            .filter_map(|l| {
                let mut eta = zero_vec(self.cotensor.dim());
                for (k, e) in etas.iter().enumerate() {
                    axpy(&mut eta, &coeffs[k * na + l], e);
                }
                (!is_zero_vec(&eta)).then(|| CoQuasibasePair {
                    functional: eta,
                    map: alphas[l].clone(),
                })
            })
            .collect();
        let qb = CoQuasibase { side, pairs };
        if let Some(f) = self.failure(&qb) {
            return Err(Error::Verification(format!("direct coquasibase failed: {f:?}")));
        }
        Ok((true, Some(qb)))
    }
}

/// `π(a ⊗ c*)(c ⊗ d) = a(c)c*(d)` from `A ⊗_B A` (coordinates of the tensor
/// square of the dual extension) to functionals on the cotensor basis.
pub fn iovanov_map(ext: &ExtensionCtx, cot: &CotensorCtx) -> Matrix {
    let n = cot.n;
    let basis = cot.basis().to_vec();
    ext.w
        .tensor
        .descend(cot.dim(), |x, y| basis.iter().map(|b| b[x * n + y].clone()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IovanovIso {
    pub matrix: Matrix,
    pub report: AxiomReport,
}

pub fn iovanov_iso(ext: &ExtensionCtx, cot: &CotensorCtx) -> IovanovIso {
    let n = cot.n;
    let basis = cot.basis().to_vec();
    let matrix = iovanov_map(ext, cot);
    let mut report = AxiomReport::default();
    let well_defined = ext.w.tensor.vanishes_on_relations(cot.dim(), |x, y| {
        basis.iter().map(|b| b[x * n + y].clone()).collect()
    });
    report.record("well_defined", (!well_defined).then(|| "a functional of a relation is nonzero".to_string()));
    let r = matrix.rank();
    report.record(
        "bijective",
        (r != matrix.rows() || r != matrix.cols()).then(|| format!("rank {r}, {}×{}", matrix.rows(), matrix.cols())),
    );
    let left_bad = (0..n).find(|&a| matrix.mul(&ext.w.left_action[a]) != cot.left_c[a].transpose().mul(&matrix));
    report.record("left_a_linear", left_bad.map(|a| format!("a={a}")));
    let right_bad = (0..n).find(|&a| matrix.mul(&ext.w.right_action[a]) != cot.right_c[a].transpose().mul(&matrix));
    report.record("right_a_linear", right_bad.map(|a| format!("a={a}")));
    let t_image = Subspace::span(cot.dim(), ext.t.space.basis().iter().map(|t| matrix.mul_vec(t)));
    report.record(
        "centralizer_matches_invariant_functionals",
        (t_image != cot.invariant_functionals()).then(|| "π(T) differs from the D*-central functionals".to_string()),
    );
    IovanovIso { matrix, report }
}

/// Transport of an algebra-side quasibase: `η = π(t)`, `α = β^T`.
pub fn dualize_quasibase(ext: &ExtensionCtx, cot: &CotensorCtx, qb: &crate::depth_two::Quasibase) -> CoQuasibase {
    let pi = iovanov_map(ext, cot);
    let pairs = qb
        .pairs
        .iter()
        .map(|p| CoQuasibasePair {
            functional: pi.mul_vec(&p.tensor),
            map: p.map.transpose(),
        })
        .collect();
    CoQuasibase { side: qb.side, pairs }
}

/// Codepth two on one side, decided through `g*` and, when true, backed by
/// a dualized coquasibase that passed the direct identity check.
pub fn cod2_check(g: &CoalgebraMapDesc, side: Side) -> Result<(bool, Option<CoQuasibase>)> {
    let ext = dual_extension(g)?;
    let ctx = CoD2Ctx::new(g)?;
    let (ok, qb) = d2_check(&ext, side)?;
    if !ok {
        return Ok((false, None));
    }
    let cqb = dualize_quasibase(&ext, &ctx.cotensor, &qb.expect("quasibase on success"));
    if let Some(f) = ctx.failure(&cqb) {
        return Err(Error::Verification(format!("dualized {} coquasibase failed: {f:?}", side.as_str())));
    }
    Ok((true, Some(cqb)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SideDuality {
    pub side: &'static str,
    /// `g*` is D2 on this side.
    pub algebra_d2: bool,
    /// A coquasibase solved for on the coalgebra side alone.
    pub direct_cod2: bool,
    /// The dualized algebra quasibase satisfies the coquasibase identity.
    pub dualized_verified: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub sides: Vec<SideDuality>,
    pub iovanov: AxiomReport,
}

/// Compares the algebra-side verdict with the direct coalgebra-side one;
/// a disagreement is an error.
pub fn duality_theorem_check(g: &CoalgebraMapDesc) -> Result<DualityReport> {
    let ext = dual_extension(g)?;
    let ctx = CoD2Ctx::new(g)?;
    let iovanov = iovanov_iso(&ext, &ctx.cotensor).report;
    let mut sides = Vec::new();
    for side in [Side::Left, Side::Right] {
        let (algebra_d2, qb) = d2_check(&ext, side)?;
        let (direct_cod2, _) = ctx.direct(side)?;
        let dualized_verified = qb.map(|q| ctx.verify(&dualize_quasibase(&ext, &ctx.cotensor, &q)));
        if algebra_d2 != direct_cod2 || dualized_verified == Some(false) {
            return Err(Error::Verification(format!(
                "{} verdicts disagree: D2 {algebra_d2}, coD2 {direct_cod2}, dualized {dualized_verified:?}",
                side.as_str()
            )));
        }
        sides.push(SideDuality {
            side: side.as_str(),
            algebra_d2,
            direct_cod2,
            dualized_verified,
        });
    }
    Ok(DualityReport { sides, iovanov })
}

/// `α ↦ α̂ = (c* ↦ c*∘α)` from `End ^DC^D` to `S = End _BA_B`, with the
/// right bialgebroid on `End ^DC^D` obtained by transport.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntiIso {
    /// `S`-coordinates of `α̂` for each basis map `α`.
    pub matrix: Matrix,
    pub transported: RightBialgebroidDesc,
    pub report: AxiomReport,
    pub transported_axioms: AxiomReport,
}

pub fn anti_iso_bialgebroids(g: &CoalgebraMapDesc) -> Result<AntiIso> {
    let ext = dual_extension(g)?;
    let ctx = CoD2Ctx::new(g)?;
    let (_, right) = d2_check(&ext, Side::Right)?;
    let right = right.ok_or_else(|| Error::Hypothesis("g* is not right depth two".into()))?;
    let s_left = build_s_bialgebroid(&ext, &right)?;
    let end = &ctx.bicolinear;
    let a = &ext.a;
    let mut report = AxiomReport::default();
    let cols: Vec<Option<Vector>> = end.maps.iter().map(|al| ext.s.coords(&al.transpose())).collect();
    let outside = cols.iter().position(Option::is_none);
    report.record("image_in_s", outside.map(|l| format!("α{l}")));
    if outside.is_some() {
        return Err(Error::Verification("α̂ is not B-B-linear".into()));
    }
    let p = Matrix::from_columns(ext.s.dim(), &cols.into_iter().map(Option::unwrap).collect::<Vec<_>>());
    let p_inv = p.inverse();
    report.record(
        "bijective",
        p_inv.is_none().then(|| format!("{}×{} of rank {}", p.rows(), p.cols(), p.rank())),
    );
    let p_inv = p_inv.ok_or_else(|| Error::Verification("transpose map is not bijective".into()))?;
    let de = end.dim();
    let anti_bad = (0..de * de).find(|&q| {
        let (i, j) = (q / de, q % de);
        let lhs = end.maps[i].mul(&end.maps[j]).transpose();
        lhs != end.maps[j].transpose().mul(&end.maps[i].transpose())
            || p.mul_vec(&end.algebra.basis_product(i, j)) != ext.s.algebra.mul(&p.column(j), &p.column(i))
    });
    report.record("anti_multiplicative", anti_bad.map(|q| format!("α{}, β{}", q / de, q % de)));
    let eps = &g.source.counit;
    let counit_bad = (0..de).find(|&l| {
        let via_s = ext.r.embed(&s_left.counit.mul_vec(&p.column(l)));
        via_s != end.maps[l].transpose().mul_vec(eps)
    });
    report.record("counit", counit_bad.map(|l| format!("α{l}")));
    let coproduct_bad = (0..de).find(|&l| {
        let lift = s_left.tensor.lift(&s_left.coproduct.mul_vec(&p.column(l)));
        let hat = end.maps[l].transpose();
        (0..a.dim() * a.dim()).any(|q| {
            let (phi, eta) = (q / a.dim(), q % a.dim());
            let mut lhs = zero_vec(a.dim());
            for (k, m, c) in &lift {
                let x = ext.s.basis[*k].column(phi);
                let y = ext.s.basis[*m].column(eta);
                axpy(&mut lhs, c, &a.mul(&x, &y));
            }
            lhs != hat.mul_vec(&a.basis_product(phi, eta))
        })
    });
    report.record("coproduct", coproduct_bad.map(|l| format!("α{l}")));

    let r = s_left.to_right();
    let source = p_inv.mul(&r.source);
    let target = p_inv.mul(&r.target);
    let tensor = right_tensor(&end.algebra, &r.base, &source, &target);
    let coproduct = r.tensor.induced(&p_inv, &p_inv, &tensor).mul(&r.coproduct).mul(&p);
    let anchor = (0..de)
        .map(|l| combine_matrices(&r.anchor, &p.column(l), r.base.dim()))
        .collect();
    let counit = r.counit.mul(&p);
    let transported = RightBialgebroidDesc {
        total: end.algebra.clone(),
        base: r.base.clone(),
        source,
        target,
        tensor,
        coproduct,
        anchor,
        counit,
    };
    let transported_axioms = verify_right_bialgebroid(&transported)?;
    Ok(AntiIso {
        matrix: p,
        transported,
        report,
        transported_axioms,
    })
}

/// Greedy search for a basis of `H` as a free right `K`-module, `K ⊆ H` via
/// `inclusion`; candidates are the basis elements of `H` in order.
pub fn free_module_check(h: &AlgebraDesc, inclusion: &Matrix) -> Result<(bool, Vec<usize>)> {
    check_dim("inclusion rows", h.dim(), inclusion.rows())?;
    let dk = inclusion.cols();
    let mut span = Subspace::zero(h.dim());
    let mut chosen = Vec::new();
    for x in 0..h.dim() {
        let orbit: Vec<Vector> = (0..dk).map(|j| h.mul(&h.basis(x), &inclusion.column(j))).collect();
        let grown = span.sum(&Subspace::span(h.dim(), orbit))?;
        if grown.dim() == span.dim() + dk {
            span = grown;
            chosen.push(x);
        }
    }
    Ok((span.dim() == h.dim(), chosen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{coalgebra_fixture, h4_over_group_part, s3_over_a3_module_coalgebra, sweedler_h4};
    use crate::linalg::q;

    #[test]
    fn duals_round_trip() {
        let h = CoalgebraDesc::of_hopf(&sweedler_h4());
        assert!(h.validate().is_empty());
        let a = h.dual();
        assert!(a.validate().is_empty());
        assert_eq!(a.dim(), 4);
        let back = CoalgebraDesc::dual_of_algebra(&a);
        assert_eq!(back.coproduct, h.coproduct);
        assert_eq!(back.counit, h.counit);
        let m2 = crate::fixtures::matrix_algebra(2);
        assert!(CoalgebraDesc::dual_of_algebra(&m2).validate().is_empty());
    }

    #[test]
    fn perturbed_coproduct_fails() {
        let mut h = CoalgebraDesc::of_hopf(&sweedler_h4());
        h.coproduct.set(0, 1, q(1));
        assert!(!h.validate().is_empty());
    }

    #[test]
    fn cotensor_extremes() {
        let c = CoalgebraDesc::of_hopf(&sweedler_h4());
        let over_field = CotensorCtx::new(&CoalgebraMapDesc::counit_map(&c)).unwrap();
        assert_eq!(over_field.dim(), 16);
        let id = CoalgebraMapDesc::identity(&c);
        let over_self = CotensorCtx::new(&id).unwrap();
        assert_eq!(over_self.dim(), 4);
        for g in [CoalgebraMapDesc::counit_map(&c), id] {
            let cot = CotensorCtx::new(&g).unwrap();
            assert!(cot.coactions_commute());
            let rep = diagonal_checks(&g, &cot);
            assert!(rep.passed(), "{:?}", rep.failures());
        }
    }

    #[test]
    fn h4_quotient_is_cogalois() {
        let mc = h4_over_group_part();
        let maps = cogalois_maps(&mc).unwrap();
        assert_eq!(maps.projection.target.dim(), 2);
        assert_eq!(maps.cotensor.dim(), 8);
        assert!(maps.report.passed(), "{:?}", maps.report.failures());
        assert!(diagonal_checks(&maps.projection, &maps.cotensor).passed());
    }

    #[test]
    fn s3_quotient_has_dimension_two() {
        let maps = cogalois_maps(&s3_over_a3_module_coalgebra()).unwrap();
        assert_eq!(maps.projection.target.dim(), 2);
        assert!(maps.report.passed(), "{:?}", maps.report.failures());
    }

    #[test]
    fn free_bases() {
        let h = sweedler_h4();
        let inc = Matrix::from_i64(4, 2, &[1, 0, 0, 1, 0, 0, 0, 0]);
        assert_eq!(free_module_check(&h.algebra, &inc).unwrap(), (true, vec![0, 2]));
        let one = Matrix::from_columns(4, &[h.algebra.unit().clone()]);
        assert_eq!(free_module_check(&h.algebra, &one).unwrap(), (true, vec![0, 1, 2, 3]));
        let (a, _, iota) = crate::fixtures::group_algebra_extension(
            &crate::fixtures::S3_NAMES,
            &crate::fixtures::s3_table(),
            &crate::fixtures::A3_INDICES,
        )
        .unwrap();
        assert_eq!(free_module_check(&a, &iota).unwrap(), (true, vec![0, 1]));
    }

    #[test]
    fn cod2_verdicts_match_duality() {
        for (name, expected) in [("h4_quotient", true), ("s3_a3_quotient", true), ("s3_c2_dual", false), ("h4_identity", true), ("h4_counit", true)] {
            let g = coalgebra_fixture(name).unwrap();
            let rep = duality_theorem_check(&g).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(rep.iovanov.passed(), "{name}: {:?}", rep.iovanov.failures());
            for s in &rep.sides {
                assert_eq!(s.direct_cod2, expected, "{name} {}", s.side);
            }
            for side in [Side::Left, Side::Right] {
                let (ok, qb) = cod2_check(&g, side).unwrap();
                assert_eq!(ok, expected, "{name}");
                assert_eq!(qb.is_some(), expected);
            }
        }
    }

    #[test]
    fn damaged_coquasibase_is_rejected() {
        let g = coalgebra_fixture("h4_quotient").unwrap();
        let ctx = CoD2Ctx::new(&g).unwrap();
        let (_, qb) = cod2_check(&g, Side::Left).unwrap();
        let mut qb = qb.unwrap();
        qb.pairs.pop();
        assert!(matches!(ctx.failure(&qb), Some(CoQuasibaseFailure::Identity { .. })));
    }

    #[test]
    fn anti_isomorphism_on_h4_quotient() {
        for name in ["h4_quotient", "h4_identity"] {
            let g = coalgebra_fixture(name).unwrap();
            let iso = anti_iso_bialgebroids(&g).unwrap();
            assert!(iso.report.passed(), "{name}: {:?}", iso.report.failures());
            assert!(iso.transported_axioms.passed(), "{name}: {:?}", iso.transported_axioms.failures());
        }
    }

    #[test]
    fn anti_isomorphism_needs_right_depth_two() {
        let g = coalgebra_fixture("s3_c2_dual").unwrap();
        assert!(matches!(anti_iso_bialgebroids(&g), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn non_hopf_inclusion_is_rejected() {
        let h = sweedler_h4();
        let k = crate::fixtures::c2_hopf();
        let bad = Matrix::from_i64(4, 2, &[1, 0, 0, 0, 0, 1, 0, 0]);
        assert!(matches!(
            ModuleCoalgebraDesc::hopf_subalgebra(&h, &k, &bad),
            Err(Error::InvalidInput(_))
        ));
    }

    proptest::proptest! {
        #[test]
        fn convolution_is_dual_to_coproduct(
            phi in proptest::collection::vec(-3i64..4, 4),
            psi in proptest::collection::vec(-3i64..4, 4),
            c in proptest::collection::vec(-3i64..4, 4),
        ) {
            let h = CoalgebraDesc::of_hopf(&sweedler_h4());
            let (phi, psi, c): (Vector, Vector, Vector) =
                (phi.into_iter().map(q).collect(), psi.into_iter().map(q).collect(), c.into_iter().map(q).collect());
            let lhs = dot(&h.dual().mul(&phi, &psi), &c);
            let rhs = dot(&kron_vec(&phi, &psi), &h.coproduct.mul_vec(&c));
            proptest::prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn diagonal_lands_in_cotensor(c in proptest::collection::vec(-3i64..4, 4)) {
            let g = coalgebra_fixture("h4_quotient").unwrap();
            let cot = CotensorCtx::new(&g).unwrap();
            let c: Vector = c.into_iter().map(q).collect();
            proptest::prop_assert!(cot.space.contains(&g.source.coproduct.mul_vec(&c)));
        }
    }
}
