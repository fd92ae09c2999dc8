//! Modules over a depth two extension: the right `T`-action on
//! `𝓔 = End_B M`, the smash product `T ⋉ 𝓔` and its isomorphism with
//! `End_A(A ⊗_B M)`, the stability isomorphism `A ⊗_B M ≅ T ⊗_R M`, and the
//! comodule algebra structure on `E = End_A(A ⊗_B M)`.
//!
//! Every `T ⊗_R X` is formed with the right action `t·r = tσ(r) = t¹ ⊗ t²r`
//! of the `T` bialgebroid; the left `R`-action on `X` is named where each
//! tensor is built.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{AlgebraDesc, LeftModuleDesc};
use crate::bialgebroid::{build_t_bialgebroid, t_coords, AxiomReport, RightBialgebroidDesc};
use crate::bimodule::{combine_matrices, BalancedTensor, SRing};
use crate::depth_two::{balanced_check, d2_check, Quasibase, Side};
use crate::error::{check_dim, Error, Result};
use crate::extension::ExtensionCtx;
use crate::linalg::{axpy, commutant, unflatten, unit_vec, zero_vec, Matrix, Rational, Subspace, Vector};
use crate::par;

fn flatten(m: &Matrix) -> Vector {
    m.as_slice().to_vec()
}

fn first_index(n: usize, bad: impl Fn(usize) -> bool + Sync + Send) -> Option<usize> {
    par::first_some(n, |i| bad(i).then_some(())).map(|(i, ())| i)
}

fn first_column_diff(a: &Matrix, b: &Matrix) -> Option<usize> {
    (0..a.cols()).find(|&j| a.column(j) != b.column(j))
}

/// Endomorphisms of `ℚ^size` commuting with a family of matrices; the
/// product is composition `f·g = f∘g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndomorphismRing {
    pub size: usize,
    /// Flattened row-major matrices.
    pub space: Subspace,
    pub maps: Vec<Matrix>,
    pub algebra: AlgebraDesc,
}

impl EndomorphismRing {
    pub fn commutant_of(size: usize, mats: &[Matrix]) -> Result<Self> {
        let refs: Vec<&Matrix> = mats.iter().collect();
        let ring = SRing::from_space(commutant(size, &refs), size)?;
        Ok(EndomorphismRing {
            size,
            space: ring.space,
            maps: ring.basis,
            algebra: ring.algebra,
        })
    }

    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    pub fn coords(&self, m: &Matrix) -> Option<Vector> {
        self.space.coords(&flatten(m))
    }

    pub fn element(&self, c: &[Rational]) -> Matrix {
        unflatten(self.size, self.size, &self.space.combine(c))
    }

    /// Matrix on coordinates of `f ↦ op(f)`; `None` if an image leaves the ring.
    pub fn induced(&self, op: impl Fn(&Matrix) -> Matrix + Sync + Send) -> Option<Matrix> {
        let cols: Option<Vec<Vector>> = par::map_slice(&self.maps, |f| self.coords(&op(f))).into_iter().collect();
        cols.map(|c| Matrix::from_columns(self.dim(), &c))
    }
}

/// `N = A ⊗_B M` for a left `B`-module `M`, with the left `A`-action
/// `a'·(a ⊗ m) = a'a ⊗ m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedModuleCtx {
    pub dim_m: usize,
    /// Action of each basis element of `B` on `M`.
    pub b_action: Vec<Matrix>,
    pub tensor: BalancedTensor,
    /// Action of each basis element of `A` on `N`.
    pub action: Vec<Matrix>,
    /// `m ↦ 1 ⊗ m`.
    pub unit_map: Matrix,
}

impl InducedModuleCtx {
    pub fn new(ext: &ExtensionCtx, dim_m: usize, b_action: Vec<Matrix>) -> Result<Self> {
        let module = LeftModuleDesc::new(&ext.b, dim_m, b_action)?;
        if let Some(v) = module.validate(&ext.b).first() {
            return Err(Error::InvalidInput(format!("M is not a B-module: {v:?}")));
        }
        let a = &ext.a;
        let on_left: Vec<Matrix> = ext.b_images.iter().map(|b| a.right_matrix(b)).collect();
        let tensor = BalancedTensor::new(a.dim(), dim_m, &on_left, &module.action);
        let action = par::map_range(a.dim(), |i| tensor.induced_left(a.left_basis(i)));
        let cols: Vec<Vector> = (0..dim_m).map(|j| tensor.class(a.unit(), &unit_vec(dim_m, j))).collect();
        let unit_map = Matrix::from_columns(tensor.dim(), &cols);
        Ok(InducedModuleCtx {
            dim_m,
            b_action: module.action,
            tensor,
            action,
            unit_map,
        })
    }

    /// Induction of an `A`-module restricted to `B` along `ι`.
    pub fn from_a_module(ext: &ExtensionCtx, m: &LeftModuleDesc) -> Result<Self> {
        if let Some(v) = m.validate(&ext.a).first() {
            return Err(Error::InvalidInput(format!("M is not an A-module: {v:?}")));
        }
        Self::new(ext, m.dim, ext.b_images.iter().map(|b| m.act(b)).collect())
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    pub fn class(&self, a: &[Rational], m: &[Rational]) -> Vector {
        self.tensor.class(a, m)
    }

    pub fn act(&self, x: &[Rational]) -> Matrix {
        combine_matrices(&self.action, x, self.dim())
    }

    /// Whether left multiplication on the `A` factor preserves the
    /// relations `ab ⊗ m − a ⊗ bm`.
    pub fn action_descends(&self, ext: &ExtensionCtx) -> bool {
        let a = &ext.a;
        (0..a.dim()).all(|i| {
            self.tensor.vanishes_on_relations(self.dim(), |x, y| {
                self.class(&a.basis_product(i, x), &unit_vec(self.dim_m, y))
            })
        })
    }

    /// `m ↦ 1 ⊗ m` is injective, which over a field is what faithful
    /// flatness of `A` over `B` asks of `M`.
    pub fn unit_map_injective(&self) -> bool {
        self.unit_map.rank() == self.dim_m
    }

    /// `End_A N`, computed as a commutant.
    pub fn endomorphisms(&self) -> Result<EndomorphismRing> {
        EndomorphismRing::commutant_of(self.dim(), &self.action)
    }
}

/// The left quasibase of a left and right depth two extension together with
/// the `T` bialgebroid built from a right quasibase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TBase {
    pub left: Quasibase,
    /// `t_i` in `T`-coordinates.
    pub ts: Vec<Vector>,
    pub betas: Vec<Matrix>,
    pub bialgebroid: RightBialgebroidDesc,
    /// Algebra generators of `R` as elements of `A`, in the order used for
    /// every `⊗_R` relation.
    pub r_generators: Vec<Vector>,
    /// `ε(t_k)` as elements of `A`.
    pub counits: Vec<Vector>,
}

impl TBase {
    pub fn new(ext: &ExtensionCtx) -> Result<Self> {
        let (_, left) = d2_check(ext, Side::Left)?;
        let left = left.ok_or_else(|| Error::Hypothesis("extension is not left depth two".into()))?;
        let (_, right) = d2_check(ext, Side::Right)?;
        let right = right.ok_or_else(|| Error::Hypothesis("extension is not right depth two".into()))?;
        let bialgebroid = build_t_bialgebroid(ext, &right)?;
        let ts = left
            .pairs
            .iter()
            .map(|p| t_coords(ext, &p.tensor))
            .collect::<Result<_>>()?;
        let betas = left.pairs.iter().map(|p| p.map.clone()).collect();
        let base = &bialgebroid.base;
        let r_generators = base
            .algebra_generators()
            .into_iter()
            .map(|g| ext.r.embed(&base.basis(g)))
            .collect();
        let counits = (0..ext.t.dim())
            .map(|k| ext.r.embed(&bialgebroid.counit.column(k)))
            .collect();
        Ok(TBase {
            left,
            ts,
            betas,
            bialgebroid,
            r_generators,
            counits,
        })
    }

    pub fn t(&self) -> &AlgebraDesc {
        &self.bialgebroid.total
    }

    /// `T ⊗_R T`.
    pub fn square(&self) -> &BalancedTensor {
        &self.bialgebroid.tensor
    }

    fn source_right_mult(&self) -> Vec<Matrix> {
        let b = &self.bialgebroid;
        b.base
            .algebra_generators()
            .into_iter()
            .map(|g| b.total.right_matrix(&b.source.column(g)))
            .collect()
    }

    /// `T ⊗_R X` with `tσ(r) ⊗ x = t ⊗ r·x`; `r_on_x` gives the action of an
    /// element of `R ⊆ A` on `X`.
    pub fn tensor_with(&self, x_dim: usize, r_on_x: impl Fn(&[Rational]) -> Matrix) -> BalancedTensor {
        let on_right: Vec<Matrix> = self.r_generators.iter().map(|r| r_on_x(r)).collect();
        BalancedTensor::new(self.t().dim(), x_dim, &self.source_right_mult(), &on_right)
    }

    /// `(T ⊗_R T) ⊗_R X`, the right factor of `T ⊗_R T` carrying `σ`.
    pub fn triple_with(&self, x_dim: usize, r_on_x: impl Fn(&[Rational]) -> Matrix) -> BalancedTensor {
        let q = self.square();
        let on_left: Vec<Matrix> = self.source_right_mult().iter().map(|m| q.induced_right(m)).collect();
        let on_right: Vec<Matrix> = self.r_generators.iter().map(|r| r_on_x(r)).collect();
        BalancedTensor::new(q.dim(), x_dim, &on_left, &on_right)
    }

    /// `Δ ⊗ id: T ⊗_R X → T ⊗_R T ⊗_R X`.
    pub fn coproduct_on(&self, tx: &BalancedTensor, t3x: &BalancedTensor) -> Matrix {
        let delta = &self.bialgebroid.coproduct;
        let xd = tx.right_dim();
        tx.descend(t3x.dim(), |k, x| t3x.class(&delta.column(k), &unit_vec(xd, x)))
    }

    /// `id ⊗ φ: T ⊗_R Y → T ⊗_R T ⊗_R X` for `φ: Y → T ⊗_R X`.
    pub fn extend_coaction(&self, ty: &BalancedTensor, tx: &BalancedTensor, t3x: &BalancedTensor, phi: &Matrix) -> Matrix {
        let q = self.square();
        let xd = tx.right_dim();
        let lifts: Vec<Vec<(usize, usize, Rational)>> = (0..phi.cols()).map(|y| tx.lift(&phi.column(y))).collect();
        ty.descend(t3x.dim(), |k, y| {
            let mut acc = zero_vec(t3x.dim());
            for (i, x, c) in &lifts[y] {
                axpy(&mut acc, c, &t3x.class(&q.class_basis(k, *i), &unit_vec(xd, *x)));
            }
            acc
        })
    }

    /// `ε ⊗ id: T ⊗_R X → X`, `t ⊗ x ↦ ε(t)·x`.
    pub fn counit_on(&self, tx: &BalancedTensor, r_on_x: impl Fn(&[Rational]) -> Matrix) -> Matrix {
        let acts: Vec<Matrix> = self.counits.iter().map(|r| r_on_x(r)).collect();
        tx.descend(tx.right_dim(), |k, x| acts[k].column(x))
    }
}

/// `f ◁ t = t¹ f(t² −)` for `t` given as a vector of `A ⊗_B A`.
pub fn act_on_map(ext: &ExtensionCtx, m: &LeftModuleDesc, f: &Matrix, t: &[Rational]) -> Matrix {
    let mut acc = Matrix::zeros(m.dim, m.dim);
    for (x, y, c) in ext.w.tensor.lift(t) {
        acc = acc.add(&m.action[x].mul(f).mul(&m.action[y]).scale(&c));
    }
    acc
}

/// `𝓔 = End_B M` with the right `T`-action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TActionOnE {
    pub e: EndomorphismRing,
    /// Per basis element of `T`, the matrix of `f ↦ f ◁ t` on `𝓔`.
    pub action: Vec<Matrix>,
}

pub fn t_action_on_e(ext: &ExtensionCtx, m: &LeftModuleDesc) -> Result<TActionOnE> {
    let b_action: Vec<Matrix> = ext.b_images.iter().map(|b| m.act(b)).collect();
    let e = EndomorphismRing::commutant_of(m.dim, &b_action)?;
    let action = (0..ext.t.dim())
        .map(|k| {
            let t = &ext.t.space.basis()[k];
            e.induced(|f| act_on_map(ext, m, f, t))
                .ok_or_else(|| Error::Verification(format!("f ◁ t{k} is not B-linear")))
        })
        .collect::<Result<_>>()?;
    Ok(TActionOnE { e, action })
}

impl TActionOnE {
    /// `f ◁ t_k` for basis indices.
    pub fn act(&self, l: usize, k: usize) -> Matrix {
        self.e.element(&self.action[k].column(l))
    }

    /// First `(f, g, t)` of basis indices where `(f∘g)◁t = (f◁t₁)∘(g◁t₂)`
    /// fails.
    pub fn measuring_failure(&self, base: &TBase) -> Option<(usize, usize, usize)> {
        let (de, dt) = (self.e.dim(), self.action.len());
        let q = base.square();
        let lifts: Vec<Vec<(usize, usize, Rational)>> =
            (0..dt).map(|k| q.lift(&base.bialgebroid.coproduct.column(k))).collect();
        let acted: Vec<Matrix> = (0..de * dt).map(|p| self.act(p / dt, p % dt)).collect();
        par::first_some(de * de * dt, |p| {
            let (l, r, k) = (p / (de * dt), (p / dt) % de, p % dt);
            let fg = self.e.maps[l].mul(&self.e.maps[r]);
            let lhs = act_coords(&self.action[k], &self.e, &fg);
            let mut rhs = Matrix::zeros(self.e.size, self.e.size);
            for (i, j, c) in &lifts[k] {
                rhs = rhs.add(&acted[l * dt + i].mul(&acted[r * dt + j]).scale(c));
            }
            (lhs != rhs).then_some((l, r, k))
        })
        .map(|(_, w)| w)
    }
}

fn act_coords(action: &Matrix, e: &EndomorphismRing, f: &Matrix) -> Matrix {
    e.element(&action.mul_vec(&e.coords(f).expect("composite of B-linear maps")))
}

/// The subring of `T`-invariants of `𝓔` under both readings of
/// `φ ◁ t = ε(t)·φ`, and `End_A M` computed directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    /// `φ ◁ t = λ_{ε(t)} ∘ φ`: the value `φ(m)` is multiplied by `ε(t)`.
    pub lambda_reading: Subspace,
    /// `φ ◁ t = φ ∘ λ_{ε(t)}`.
    pub rho_reading: Subspace,
    pub end_a: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantsSummary {
    pub dim_lambda_reading: usize,
    pub dim_rho_reading: usize,
    pub dim_end_a: usize,
    pub lambda_equals_end_a: bool,
    pub readings_diverge: bool,
}

impl Invariants {
    pub fn summary(&self) -> InvariantsSummary {
        InvariantsSummary {
            dim_lambda_reading: self.lambda_reading.dim(),
            dim_rho_reading: self.rho_reading.dim(),
            dim_end_a: self.end_a.dim(),
            lambda_equals_end_a: self.lambda_reading == self.end_a,
            readings_diverge: self.lambda_reading != self.rho_reading,
        }
    }
}

pub fn invariants_e(ext: &ExtensionCtx, base: &TBase, m: &LeftModuleDesc) -> Result<Invariants> {
    let act = t_action_on_e(ext, m)?;
    let e = &act.e;
    let reading = |post: bool| -> Result<Subspace> {
        let blocks = (0..act.action.len())
            .map(|k| {
                let lam = m.act(&base.counits[k]);
                let twist = e
                    .induced(|f| if post { lam.mul(f) } else { f.mul(&lam) })
                    .ok_or_else(|| Error::Verification("ε(t) does not commute with B on M".into()))?;
                Ok(act.action[k].sub(&twist))
            })
            .collect::<Result<Vec<Matrix>>>()?;
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let kernel = if refs.is_empty() {
            Subspace::full(e.dim())
        } else {
            Matrix::vstack(&refs).kernel()
        };
        Ok(Subspace::span(
            m.dim * m.dim,
            kernel.basis().iter().map(|c| e.space.combine(c)),
        ))
    };
    Ok(Invariants {
        lambda_reading: reading(true)?,
        rho_reading: reading(false)?,
        end_a: m.endomorphisms(),
    })
}

/// An `A`-module with everything derived from it: `𝓔` with its `T`-action
/// and the induced module `N = A ⊗_B M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AModuleCtx {
    pub module: LeftModuleDesc,
    pub e_action: TActionOnE,
    pub induced: InducedModuleCtx,
}

impl AModuleCtx {
    pub fn new(ext: &ExtensionCtx, m: &LeftModuleDesc) -> Result<Self> {
        let induced = InducedModuleCtx::from_a_module(ext, m)?;
        Ok(AModuleCtx {
            module: m.clone(),
            e_action: t_action_on_e(ext, m)?,
            induced,
        })
    }

    pub fn e(&self) -> &EndomorphismRing {
        &self.e_action.e
    }
}

/// `T ⋉ 𝓔` on `T ⊗_R 𝓔` with `tσ(r) ⊗ f = t ⊗ λ_r∘f` and product
/// `(t ⋉ f)(u ⋉ g) = t u₁ ⋉ (f ◁ u₂)∘g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmashProductDesc {
    pub tensor: BalancedTensor,
    pub algebra: AlgebraDesc,
}

pub fn build_smash(base: &TBase, ctx: &AModuleCtx) -> Result<SmashProductDesc> {
    let (e, m) = (ctx.e(), &ctx.module);
    let t = base.t();
    let (dt, de) = (t.dim(), e.dim());
    let r_on_e = |r: &[Rational]| {
        let lam = m.act(r);
        e.induced(|f| lam.mul(f)).expect("λ_r commutes with B")
    };
    let tensor = base.tensor_with(de, r_on_e);
    let q = base.square();
    let lifts: Vec<Vec<(usize, usize, Rational)>> =
        (0..dt).map(|k| q.lift(&base.bialgebroid.coproduct.column(k))).collect();
    let comp: Vec<Vector> = par::map_range(de * dt * de, |p| {
        let (l, j, r) = (p / (dt * de), (p / de) % dt, p % de);
        e.coords(&ctx.e_action.act(l, j).mul(&e.maps[r])).expect("composite in 𝓔")
    });
    let basis: Vec<(usize, usize)> = tensor.quotient().complement().iter().map(|&p| (p / de, p % de)).collect();
    let d = basis.len();
    let products: Vec<Vector> = par::map_range(d * d, |p| {
        let ((k, l), (kk, ll)) = (basis[p / d], basis[p % d]);
        let mut amb = zero_vec(dt * de);
        for (i, j, c) in &lifts[kk] {
            let tu = t.basis_product(k, *i);
            let fg = &comp[(l * dt + j) * de + ll];
            for (a, x) in tu.iter().enumerate() {
                let cx = c * x;
                if cx.is_zero() {
                    continue;
                }
                axpy(&mut amb[a * de..(a + 1) * de], &cx, fg);
            }
        }
        tensor.project(&amb)
    });
    let unit = tensor.class(t.unit(), &e.coords(&Matrix::identity(m.dim)).expect("identity in 𝓔"));
    let names = (0..d).map(|i| format!("t{}⋉f{}", basis[i].0, basis[i].1)).collect();
    let algebra = AlgebraDesc::from_products(names, unit, |i, j| products[i * d + j].clone())?;
    if let Some(v) = algebra.validate().first() {
        return Err(Error::Verification(format!("smash product is not an algebra: {v:?}")));
    }
    Ok(SmashProductDesc { tensor, algebra })
}

/// `Ψ: T ⋉ 𝓔 → End_A N` and its inverse `Φ`, as matrices between the
/// smash basis and the coordinates of `End_A N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmashIso {
    pub smash: SmashProductDesc,
    pub end_n: EndomorphismRing,
    pub forward: Matrix,
    pub inverse: Matrix,
    pub report: AxiomReport,
}

/// `Ψ(t ⋉ f)(a ⊗ m) = a t¹ ⊗ t² f(m)`.
pub fn psi_map(ext: &ExtensionCtx, ctx: &AModuleCtx, t: &[Rational], f: &Matrix) -> Matrix {
    let (a, n, m) = (&ext.a, &ctx.induced, &ctx.module);
    let lift = ext.w.tensor.lift(t);
    let pieces: Vec<(usize, Rational, Matrix)> =
        lift.into_iter().map(|(x, y, c)| (x, c, m.action[y].mul(f))).collect();
    n.tensor.descend(n.dim(), |i, j| {
        let mut acc = zero_vec(n.dim());
        for (x, c, g) in &pieces {
            axpy(&mut acc, c, &n.class(&a.basis_product(i, *x), &g.column(j)));
        }
        acc
    })
}

/// `Φ(F) = Σ_j t_j ⊗ μ_M∘(β_j ⊗ id)∘F(1 ⊗ −)` in `T ⊗_R 𝓔`.
pub fn phi_map(base: &TBase, ctx: &AModuleCtx, tensor: &BalancedTensor, big_f: &Matrix) -> Result<Vector> {
    let (n, m, e) = (&ctx.induced, &ctx.module, ctx.e());
    let images: Vec<Vec<(usize, usize, Rational)>> = (0..m.dim)
        .map(|j| n.tensor.lift(&big_f.mul_vec(&n.unit_map.column(j))))
        .collect();
    let mut acc = zero_vec(tensor.dim());
    for (tj, beta) in base.ts.iter().zip(&base.betas) {
        let cols: Vec<Vector> = images
            .iter()
            .map(|lift| {
                let mut v = zero_vec(m.dim);
                for (x, y, c) in lift {
                    axpy(&mut v, c, &m.act(&beta.column(*x)).column(*y));
                }
                v
            })
            .collect();
        let g = Matrix::from_columns(m.dim, &cols);
        let gc = e
            .coords(&g)
            .ok_or_else(|| Error::Verification("Φ component is not B-linear".into()))?;
        axpy(&mut acc, &Rational::one(), &tensor.class(tj, &gc));
    }
    Ok(acc)
}

pub fn psi_iso(ext: &ExtensionCtx, base: &TBase, ctx: &AModuleCtx) -> Result<SmashIso> {
    let smash = build_smash(base, ctx)?;
    let end_n = ctx.induced.endomorphisms()?;
    let e = ctx.e();
    let de = e.dim();
    let basis: Vec<(usize, usize)> = smash.tensor.quotient().complement().iter().map(|&p| (p / de, p % de)).collect();
    let mut report = AxiomReport::default();
    report.record(
        "dimensions_agree",
        (basis.len() != end_n.dim()).then(|| format!("smash {} vs End_A N {}", basis.len(), end_n.dim())),
    );
    let psi_mats: Vec<Matrix> = par::map_slice(&basis, |&(k, l)| psi_map(ext, ctx, &ext.t.space.basis()[k], &e.maps[l]));
    let psi_cols: Vec<Option<Vector>> = psi_mats.iter().map(|f| end_n.coords(f)).collect();
    let outside = psi_cols.iter().position(|c| c.is_none());
    report.record("psi_lands_in_end_a", outside.map(|s| format!("basis element {s}")));
    if outside.is_some() {
        return Err(Error::Verification("Ψ leaves End_A N".into()));
    }
    let forward = Matrix::from_columns(end_n.dim(), &psi_cols.into_iter().map(Option::unwrap).collect::<Vec<_>>());
    let phi_cols = end_n
        .maps
        .iter()
        .map(|f| phi_map(base, ctx, &smash.tensor, f))
        .collect::<Result<Vec<_>>>()?;
    let inverse = Matrix::from_columns(smash.tensor.dim(), &phi_cols);
    let fi = inverse.mul(&forward);
    report.record(
        "inverse_after_forward",
        first_column_diff(&fi, &Matrix::identity(fi.cols())).map(|j| format!("smash basis {j}")),
    );
    let ff = forward.mul(&inverse);
    report.record(
        "forward_after_inverse",
        first_column_diff(&ff, &Matrix::identity(ff.cols())).map(|j| format!("End_A N basis {j}")),
    );
    let d = basis.len();
    let sa = &smash.algebra;
    let bad = par::first_some(d * d, |p| {
        let (i, j) = (p / d, p % d);
        let lhs = forward.mul_vec(&sa.basis_product(i, j));
        let rhs = end_n.coords(&psi_mats[i].mul(&psi_mats[j]));
        (rhs.as_ref() != Some(&lhs)).then_some((i, j))
    });
    report.record("multiplicative", bad.map(|(_, (i, j))| format!("x={i}, y={j}")));
    let unit_ok = forward.mul_vec(sa.unit()) == end_n.coords(&Matrix::identity(end_n.size)).expect("identity");
    report.record("unital", (!unit_ok).then(|| "Ψ(1) ≠ id".to_string()));
    Ok(SmashIso {
        smash,
        end_n,
        forward,
        inverse,
        report,
    })
}

/// `ρ_L(a) = Σ_i t_i ⊗_R β_i(a)` in `T ⊗_R A`, where `R` acts on `A` by
/// left multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoactionA {
    pub tensor: BalancedTensor,
    pub coaction: Matrix,
    pub report: AxiomReport,
}

pub fn coaction_a(ext: &ExtensionCtx, base: &TBase) -> Result<CoactionA> {
    let a = &ext.a;
    let tensor = base.tensor_with(a.dim(), |r| a.left_matrix(r));
    let cols: Vec<Vector> = par::map_range(a.dim(), |x| {
        let mut acc = zero_vec(tensor.dim());
        for (t, beta) in base.ts.iter().zip(&base.betas) {
            axpy(&mut acc, &Rational::one(), &tensor.class(t, &beta.column(x)));
        }
        acc
    });
    let coaction = Matrix::from_columns(tensor.dim(), &cols);
    let triple = base.triple_with(a.dim(), |r| a.left_matrix(r));
    let lhs = base.coproduct_on(&tensor, &triple).mul(&coaction);
    let rhs = base.extend_coaction(&tensor, &tensor, &triple, &coaction).mul(&coaction);
    let mut report = AxiomReport::default();
    report.record("coassociativity", first_column_diff(&lhs, &rhs).map(|x| format!("a={x}")));
    let counit = base.counit_on(&tensor, |r| a.left_matrix(r)).mul(&coaction);
    report.record(
        "counit",
        first_column_diff(&counit, &Matrix::identity(a.dim())).map(|x| format!("a={x}")),
    );
    Ok(CoactionA {
        tensor,
        coaction,
        report,
    })
}

/// `Δ_N(a ⊗ m) = Σ_i t_i ⊗_R (β_i(a) ⊗ m)` into `T ⊗_R N`, `R` acting on
/// `N` through `A`.
fn induced_coaction(base: &TBase, n: &InducedModuleCtx) -> (BalancedTensor, Matrix) {
    let tn = base.tensor_with(n.dim(), |r| n.act(r));
    let coaction = n.tensor.descend(tn.dim(), |x, y| {
        let mut acc = zero_vec(tn.dim());
        for (t, beta) in base.ts.iter().zip(&base.betas) {
            let inner = n.class(&beta.column(x), &unit_vec(n.dim_m, y));
            axpy(&mut acc, &Rational::one(), &tn.class(t, &inner));
        }
        acc
    });
    (tn, coaction)
}

/// Checks that `iso: N → T ⊗_R M` is bijective, `B`-linear, compatible with
/// `R` (left multiplication on `N`, `τ` on `T`) and `T`-colinear. `r_action`
/// gives the action of each basis element of `R` on `M`.
pub fn check_stability(
    ext: &ExtensionCtx,
    base: &TBase,
    n: &InducedModuleCtx,
    r_action: &[Matrix],
    iso: &Matrix,
) -> Result<AxiomReport> {
    let nr = ext.r.dim();
    check_dim("R action count", nr, r_action.len())?;
    let dm = n.dim_m;
    let r_on_m = |r: &[Rational]| {
        let c = ext.r.coords(r).expect("element of R");
        combine_matrices(r_action, &c, dm)
    };
    let tm = base.tensor_with(dm, r_on_m);
    check_dim("stability iso rows", tm.dim(), iso.rows())?;
    check_dim("stability iso columns", n.dim(), iso.cols())?;
    let mut report = AxiomReport::default();
    let r_alg = &ext.r.algebra;
    let module_bad = (0..nr * nr).find(|&p| {
        let (i, j) = (p / nr, p % nr);
        combine_matrices(r_action, &r_alg.basis_product(i, j), dm) != r_action[i].mul(&r_action[j])
    });
    let unit_bad = combine_matrices(r_action, r_alg.unit(), dm) != Matrix::identity(dm);
    report.record(
        "r_module",
        if unit_bad {
            Some("unit".into())
        } else {
            module_bad.map(|p| format!("r={}, r'={}", p / nr, p % nr))
        },
    );
    let commute_bad = (0..nr * n.b_action.len())
        .find(|&p| r_action[p / n.b_action.len()].mul(&n.b_action[p % n.b_action.len()]) != n.b_action[p % n.b_action.len()].mul(&r_action[p / n.b_action.len()]));
    report.record("r_commutes_with_b", commute_bad.map(|p| format!("r={}, b={}", p / n.b_action.len(), p % n.b_action.len())));
    report.record(
        "bijective",
        (iso.rows() != iso.cols() || iso.rank() != iso.cols()).then(|| format!("rank {} of {}", iso.rank(), iso.cols())),
    );
    let b_bad = first_index(ext.b_images.len(), |k| {
        let left = iso.mul(&n.act(&ext.b_images[k]));
        let right = tm.induced_right(&n.b_action[k]).mul(iso);
        left != right
    });
    report.record("b_linear", b_bad.map(|k| format!("b={k}")));
    let t = base.t();
    let tgt = &base.bialgebroid.target;
    let r_bad = first_index(nr, |k| {
        let r = ext.r.embed(&unit_vec(nr, k));
        let left = iso.mul(&n.act(&r));
        let right = tm.induced_left(&t.right_matrix(&tgt.column(k))).mul(iso);
        left != right
    });
    report.record("r_linear", r_bad.map(|k| format!("r={k}")));
    let t3m = base.triple_with(dm, r_on_m);
    let (tn, delta_n) = induced_coaction(base, n);
    let lhs = base.coproduct_on(&tm, &t3m).mul(iso);
    let rhs = base.extend_coaction(&tn, &tm, &t3m, iso).mul(&delta_n);
    report.record("colinear", first_column_diff(&lhs, &rhs).map(|j| format!("N basis {j}")));
    Ok(report)
}

/// `Ψ(a ⊗ m) = Σ_i t_i ⊗_R β_i(a)m` with inverse `t ⊗ m ↦ t¹ ⊗ t²m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityIso {
    pub tensor: BalancedTensor,
    pub forward: Matrix,
    pub inverse: Matrix,
    pub report: AxiomReport,
}

pub fn stability_iso(ext: &ExtensionCtx, base: &TBase, ctx: &AModuleCtx) -> Result<StabilityIso> {
    let (n, m) = (&ctx.induced, &ctx.module);
    let dm = m.dim;
    let tm = base.tensor_with(dm, |r| m.act(r));
    let forward = n.tensor.descend(tm.dim(), |x, y| {
        let mut acc = zero_vec(tm.dim());
        for (t, beta) in base.ts.iter().zip(&base.betas) {
            axpy(&mut acc, &Rational::one(), &tm.class(t, &m.act(&beta.column(x)).column(y)));
        }
        acc
    });
    let t_lifts: Vec<Vec<(usize, usize, Rational)>> =
        ext.t.space.basis().iter().map(|t| ext.w.tensor.lift(t)).collect();
    let inverse = tm.descend(n.dim(), |k, y| {
        let mut acc = zero_vec(n.dim());
        for (x, z, c) in &t_lifts[k] {
            axpy(&mut acc, c, &n.class(&ext.a.basis(*x), &m.action[*z].column(y)));
        }
        acc
    });
    let r_action: Vec<Matrix> = (0..ext.r.dim()).map(|k| m.act(&ext.r.embed(&unit_vec(ext.r.dim(), k)))).collect();
    let mut report = check_stability(ext, base, n, &r_action, &forward)?;
    let fi = inverse.mul(&forward);
    report.record(
        "inverse_after_forward",
        first_column_diff(&fi, &Matrix::identity(n.dim())).map(|j| format!("N basis {j}")),
    );
    let ff = forward.mul(&inverse);
    report.record(
        "forward_after_inverse",
        first_column_diff(&ff, &Matrix::identity(tm.dim())).map(|j| format!("T⊗M basis {j}")),
    );
    let (emb, wm) = embed_triple(ext, base, m);
    report.record(
        "embedding_injective",
        (emb.rank() != emb.cols()).then(|| format!("rank {} of {}", emb.rank(), emb.cols())),
    );
    let t3m = base.triple_with(dm, |r| m.act(r));
    let colinear_lhs = emb.mul(&base.coproduct_on(&tm, &t3m)).mul(&forward);
    let expected = n.tensor.descend(wm.dim(), |x, y| {
        wm.class(&ext.w.class(&ext.a.basis(x), ext.a.unit()), &unit_vec(dm, y))
    });
    report.record(
        "colinear_embedded",
        first_column_diff(&colinear_lhs, &expected).map(|j| format!("N basis {j}")),
    );
    Ok(StabilityIso {
        tensor: tm,
        forward,
        inverse,
        report,
    })
}

/// `T ⊗_R T ⊗_R M → A ⊗_B A ⊗_B M`, `t ⊗ u ⊗ m ↦ t¹ ⊗ t²u¹ ⊗ u²m`, with
/// the target realized as `W ⊗_B M`.
fn embed_triple(ext: &ExtensionCtx, base: &TBase, m: &LeftModuleDesc) -> (Matrix, BalancedTensor) {
    let (a, w) = (&ext.a, &ext.w);
    let on_left: Vec<Matrix> = ext.b_images.iter().map(|b| w.right_matrix(b)).collect();
    let on_right: Vec<Matrix> = ext.b_images.iter().map(|b| m.act(b)).collect();
    let wm = BalancedTensor::new(w.dim(), m.dim, &on_left, &on_right);
    let t3m = base.triple_with(m.dim, |r| m.act(r));
    let q = base.square();
    let t_lifts: Vec<Vec<(usize, usize, Rational)>> =
        ext.t.space.basis().iter().map(|t| w.tensor.lift(t)).collect();
    let emb = t3m.descend(wm.dim(), |p, y| {
        let mut acc = zero_vec(wm.dim());
        for (k, i, c) in q.lift(&unit_vec(q.dim(), p)) {
            for (x1, y1, c1) in &t_lifts[k] {
                for (x2, y2, c2) in &t_lifts[i] {
                    let coeff = &c * c1 * c2;
                    let left = w.class(&a.basis(*x1), &a.basis_product(*y1, *x2));
                    axpy(&mut acc, &coeff, &wm.class(&left, &m.action[*y2].column(y)));
                }
            }
        }
        acc
    });
    (emb, wm)
}

/// How `M` is known to be stable, which decides whether the coinvariant
/// identity is asserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    /// `M` is an `A`-module.
    Automatic,
    /// A supplied stability isomorphism passed [`check_stability`].
    Witnessed,
    /// No witness, or a witness that failed.
    Unverified,
}

/// A user-supplied stability isomorphism for a `B`-module: the `R`-action
/// on `M` (per basis element of `R`) and a matrix `A ⊗_B M → T ⊗_R M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityWitness {
    pub r_action: Vec<Matrix>,
    pub iso: Matrix,
}

/// `Δ_E: E → T ⊗_R E` on `E = End_A N`, where `r ∈ R` acts on `E` by
/// `F ↦ F ∘ (right multiplication by r on the A factor)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComoduleE {
    pub e: EndomorphismRing,
    pub tensor: BalancedTensor,
    pub coaction: Matrix,
    /// `{F : Δ_E(F) = 1 ⊗ F}`, flattened.
    pub coinvariants: Subspace,
    /// `{id ⊗ f : f ∈ End_B M}`, flattened.
    pub image_of_e: Subspace,
    pub stability: Stability,
    pub report: AxiomReport,
}

pub fn comodule_structure_e(ext: &ExtensionCtx, base: &TBase, m: &LeftModuleDesc) -> Result<ComoduleE> {
    let n = InducedModuleCtx::from_a_module(ext, m)?;
    comodule_structure_inner(ext, base, &n, Stability::Automatic, None)
}

/// Same construction for a `B`-module; the coinvariant identity is asserted
/// only when `witness` passes [`check_stability`].
pub fn comodule_structure_e_for_b_module(
    ext: &ExtensionCtx,
    base: &TBase,
    n: &InducedModuleCtx,
    witness: Option<&StabilityWitness>,
) -> Result<ComoduleE> {
    let (stability, witness_report) = match witness {
        Some(w) => {
            let rep = check_stability(ext, base, n, &w.r_action, &w.iso)?;
            let s = if rep.passed() {
                Stability::Witnessed
            } else {
                Stability::Unverified
            };
            (s, Some(rep))
        }
        None => (Stability::Unverified, None),
    };
    comodule_structure_inner(ext, base, n, stability, witness_report)
}

fn comodule_structure_inner(
    ext: &ExtensionCtx,
    base: &TBase,
    n: &InducedModuleCtx,
    stability: Stability,
    witness_report: Option<AxiomReport>,
) -> Result<ComoduleE> {
    if !balanced_check(ext) {
        return Err(Error::Hypothesis("A is not balanced over B".into()));
    }
    let a = &ext.a;
    let t = base.t();
    let e = n.endomorphisms()?;
    let (de, dn, dm) = (e.dim(), n.dim(), n.dim_m);
    let right_mult = |r: &[Rational]| n.tensor.induced_left(&a.right_matrix(r));
    let r_on_e = |r: &[Rational]| {
        let rho = right_mult(r);
        e.induced(|f| f.mul(&rho)).expect("right multiplication by R is A-linear on N")
    };
    let te = base.tensor_with(de, r_on_e);
    let (tn, delta_n) = induced_coaction(base, n);
    let theta = te.descend(tn.dim() * dm, |k, l| {
        let img = e.maps[l].mul(&n.unit_map);
        let cols: Vec<Vector> = (0..dm).map(|j| tn.class(&unit_vec(t.dim(), k), &img.column(j))).collect();
        flatten(&Matrix::from_columns(tn.dim(), &cols))
    });
    let mut report = witness_report.unwrap_or_default();
    report.record(
        "hom_identification_injective",
        (theta.rank() != te.dim()).then(|| format!("rank {} of {}", theta.rank(), te.dim())),
    );
    let cols = e
        .maps
        .iter()
        .enumerate()
        .map(|(l, f)| {
            let target = flatten(&delta_n.mul(f).mul(&n.unit_map));
            theta
                .solve(&target)?
                .ok_or_else(|| Error::Verification(format!("Δ_N∘F{l}(1⊗−) is outside T ⊗_R Hom(M, N)")))
        })
        .collect::<Result<Vec<_>>>()?;
    let coaction = Matrix::from_columns(te.dim(), &cols);

    let id_coords = e.coords(&Matrix::identity(dn)).expect("identity");
    let one_one = te.class(t.unit(), &id_coords);
    report.record(
        "unital",
        (coaction.mul_vec(&id_coords) != one_one).then(|| "Δ_E(1) ≠ 1 ⊗ 1".to_string()),
    );
    // `Δ_E(F∘G) = G₋₁F₋₁ ⊗ F₀∘G₀` with `G₋₁F₋₁` taken in `T^op`.
    let product = |x: &Vector, y: &Vector| -> Vector {
        let mut acc = zero_vec(te.dim());
        let ly = te.lift(y);
        for (k, p, c) in te.lift(x) {
            for (kk, pp, cc) in &ly {
                let tt = t.basis_product(k, *kk);
                let ff = e.coords(&e.maps[p].mul(&e.maps[*pp])).expect("composite");
                axpy(&mut acc, &(&c * cc), &te.class(&tt, &ff));
            }
        }
        acc
    };
    let mult_bad = (0..de * de).find(|&p| {
        let (i, j) = (p / de, p % de);
        let lhs = coaction.mul_vec(&e.algebra.basis_product(i, j));
        lhs != product(&coaction.column(i), &coaction.column(j))
    });
    report.record("multiplicative", mult_bad.map(|p| format!("F={}, G={}", p / de, p % de)));
    let t3e = base.triple_with(de, r_on_e);
    let lhs = base.coproduct_on(&te, &t3e).mul(&coaction);
    let rhs = base.extend_coaction(&te, &te, &t3e, &coaction).mul(&coaction);
    report.record("coassociativity", first_column_diff(&lhs, &rhs).map(|j| format!("F={j}")));
    let counit = base.counit_on(&te, r_on_e).mul(&coaction);
    report.record(
        "counit",
        first_column_diff(&counit, &Matrix::identity(de)).map(|j| format!("F={j}")),
    );
    let hopf_bad = hopf_module_failure(ext, base, n, &tn, &delta_n);
    report.record("hopf_module", hopf_bad.map(|(x, j)| format!("a={x}, n={j}")));

    let trivial = Matrix::from_columns(te.dim(), &(0..de).map(|l| te.class(t.unit(), &unit_vec(de, l))).collect::<Vec<_>>());
    let kernel = coaction.sub(&trivial).kernel();
    let coinvariants = Subspace::span(dn * dn, kernel.basis().iter().map(|c| e.space.combine(c)));
    let e_small = EndomorphismRing::commutant_of(dm, &n.b_action)?;
    let images: Vec<Vector> = e_small.maps.iter().map(|f| flatten(&n.tensor.induced_right(f))).collect();
    let image_of_e = Subspace::span(dn * dn, images.iter().cloned());
    if stability != Stability::Unverified {
        report.record(
            "coinvariants_contain_image",
            image_of_e.witness_not_in(&coinvariants).map(|_| "id ⊗ f not coinvariant".to_string()),
        );
        report.record(
            "image_contains_coinvariants",
            coinvariants.witness_not_in(&image_of_e).map(|_| "coinvariant outside id ⊗ 𝓔".to_string()),
        );
        report.record(
            "image_injective",
            (image_of_e.dim() != e_small.dim()).then(|| format!("rank {} of {}", image_of_e.dim(), e_small.dim())),
        );
    }
    Ok(ComoduleE {
        e,
        tensor: te,
        coaction,
        coinvariants,
        image_of_e,
        stability,
        report,
    })
}

/// First `(a, n)` where `Δ_N(a·n) = Σ a₋₁n₋₁ ⊗ a₀·n₀` fails, the product
/// taken in `T^op`.
fn hopf_module_failure(
    ext: &ExtensionCtx,
    base: &TBase,
    n: &InducedModuleCtx,
    tn: &BalancedTensor,
    delta_n: &Matrix,
) -> Option<(usize, usize)> {
    let a = &ext.a;
    let t = base.t();
    let ta = base.tensor_with(a.dim(), |r| a.left_matrix(r));
    let rho: Vec<Vec<(usize, usize, Rational)>> = (0..a.dim())
        .map(|x| {
            let mut acc = zero_vec(ta.dim());
            for (tt, beta) in base.ts.iter().zip(&base.betas) {
                axpy(&mut acc, &Rational::one(), &ta.class(tt, &beta.column(x)));
            }
            ta.lift(&acc)
        })
        .collect();
    let dn = n.dim();
    par::first_some(a.dim() * dn, |p| {
        let (x, j) = (p / dn, p % dn);
        let lhs = delta_n.mul_vec(&n.action[x].column(j));
        let mut rhs = zero_vec(tn.dim());
        for (k, y, c) in &rho[x] {
            for (kk, jj, cc) in tn.lift(&delta_n.column(j)) {
                let tt = t.basis_product(kk, *k);
                let v = n.action[*y].column(jj);
                axpy(&mut rhs, &(c * &cc), &tn.class(&tt, &v));
            }
        }
        (lhs != rhs).then_some((x, j))
    })
    .map(|(_, w)| w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{extension_fixture, regular_module, s3_sign_plus_trivial, s3_standard_module};

    fn s3() -> (ExtensionCtx, TBase) {
        let ext = extension_fixture("s3_a3").unwrap().build().unwrap();
        let base = TBase::new(&ext).unwrap();
        (ext, base)
    }

    #[test]
    fn unit_of_t_acts_trivially_and_identity_goes_to_counit() {
        let (ext, base) = s3();
        let m = regular_module(&ext.a);
        let act = t_action_on_e(&ext, &m).unwrap();
        let one = ext.t.coords(ext.w.one_one()).unwrap();
        let one_action = combine_matrices(&act.action, &one, act.e.dim());
        assert_eq!(one_action, Matrix::identity(act.e.dim()));
        let id = Matrix::identity(m.dim);
        for k in 0..ext.t.dim() {
            let acted = act_on_map(&ext, &m, &id, &ext.t.space.basis()[k]);
            assert_eq!(acted, m.act(&base.counits[k]), "t{k}");
        }
    }

    #[test]
    fn action_is_a_right_action_and_measuring() {
        let (ext, base) = s3();
        for m in [regular_module(&ext.a), s3_standard_module()] {
            let act = t_action_on_e(&ext, &m).unwrap();
            let t = base.t();
            let dt = t.dim();
            for k in 0..dt {
                for kk in 0..dt {
                    let lhs = act.action[kk].mul(&act.action[k]);
                    let rhs = combine_matrices(&act.action, &t.basis_product(k, kk), act.e.dim());
                    assert_eq!(lhs, rhs, "(f◁t{k})◁t{kk}");
                }
            }
            assert_eq!(act.measuring_failure(&base), None);
        }
    }

    #[test]
    fn invariants_are_end_a() {
        let (ext, base) = s3();
        let reg = invariants_e(&ext, &base, &regular_module(&ext.a)).unwrap().summary();
        assert_eq!(reg.dim_end_a, 6);
        assert!(reg.lambda_equals_end_a);
        let std = invariants_e(&ext, &base, &s3_standard_module()).unwrap().summary();
        assert_eq!(std.dim_end_a, 1);
        assert!(std.lambda_equals_end_a);
    }

    #[test]
    fn smash_is_end_of_induced_module() {
        let (ext, base) = s3();
        for (m, dim) in [(regular_module(&ext.a), 24), (s3_standard_module(), 4)] {
            let ctx = AModuleCtx::new(&ext, &m).unwrap();
            let iso = psi_iso(&ext, &base, &ctx).unwrap();
            assert_eq!(iso.smash.algebra.dim(), dim);
            assert!(iso.report.passed(), "{:?}", iso.report.failures());
        }
    }

    #[test]
    fn trivial_extension_smash() {
        let ext = extension_fixture("m2_m2").unwrap().build().unwrap();
        let base = TBase::new(&ext).unwrap();
        let ctx = AModuleCtx::new(&ext, &regular_module(&ext.a)).unwrap();
        let iso = psi_iso(&ext, &base, &ctx).unwrap();
        assert_eq!(iso.smash.algebra.dim(), ctx.induced.endomorphisms().unwrap().dim());
        assert!(iso.report.passed(), "{:?}", iso.report.failures());
    }

    #[test]
    fn coaction_on_a_is_coassociative_and_counital() {
        for name in ["s3_a3", "m2_m2", "q_m2"] {
            let ext = extension_fixture(name).unwrap().build().unwrap();
            let base = TBase::new(&ext).unwrap();
            let c = coaction_a(&ext, &base).unwrap();
            assert!(c.report.passed(), "{name}: {:?}", c.report.failures());
        }
    }

    #[test]
    fn every_a_module_is_stable() {
        let (ext, base) = s3();
        for m in [regular_module(&ext.a), s3_sign_plus_trivial(), s3_standard_module()] {
            let ctx = AModuleCtx::new(&ext, &m).unwrap();
            assert!(ctx.induced.action_descends(&ext));
            assert!(ctx.induced.unit_map_injective());
            let s = stability_iso(&ext, &base, &ctx).unwrap();
            assert!(s.report.passed(), "{:?}", s.report.failures());
        }
    }

    #[test]
    fn induced_module_comodule_algebra() {
        let (ext, base) = s3();
        for m in [regular_module(&ext.a), s3_standard_module()] {
            let c = comodule_structure_e(&ext, &base, &m).unwrap();
            assert!(c.report.passed(), "{:?}", c.report.failures());
            assert_eq!(c.coinvariants, c.image_of_e);
        }
    }

    #[test]
    fn b_module_without_witness_is_not_asserted() {
        let (ext, base) = s3();
        let m = s3_standard_module();
        let n = InducedModuleCtx::from_a_module(&ext, &m).unwrap();
        let c = comodule_structure_e_for_b_module(&ext, &base, &n, None).unwrap();
        assert_eq!(c.stability, Stability::Unverified);
        assert!(c.report.check("coinvariants_contain_image").is_none());
        let ctx = AModuleCtx::new(&ext, &m).unwrap();
        let s = stability_iso(&ext, &base, &ctx).unwrap();
        let r_action = (0..ext.r.dim()).map(|k| m.act(&ext.r.embed(&unit_vec(ext.r.dim(), k)))).collect();
        let witness = StabilityWitness { r_action, iso: s.forward.clone() };
        let c = comodule_structure_e_for_b_module(&ext, &base, &n, Some(&witness)).unwrap();
        assert_eq!(c.stability, Stability::Witnessed);
        assert!(c.report.passed(), "{:?}", c.report.failures());
        let bad = StabilityWitness { iso: s.forward.scale(&Rational::zero()), ..witness };
        let c = comodule_structure_e_for_b_module(&ext, &base, &n, Some(&bad)).unwrap();
        assert_eq!(c.stability, Stability::Unverified);
    }
}
