//! Finite-dimensional Hopf algebras and module algebras over them.

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::AlgebraDesc;
use crate::error::{check_dim, Result};
use crate::linalg::{axpy, dot, kron_vec, zero_vec, Matrix, Rational, Vector};

/// A Hopf algebra: algebra, coproduct `H → H⊗H` (index `i * n + j`),
/// counit functional, antipode and optionally its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfAlgebraDesc {
    pub algebra: AlgebraDesc,
    pub coproduct: Matrix,
    pub counit: Vector,
    pub antipode: Matrix,
    pub antipode_inverse: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HopfViolation {
    Coassociativity { h: usize },
    LeftCounit { h: usize },
    RightCounit { h: usize },
    CoproductUnit,
    CoproductMultiplicative { h: usize, k: usize },
    CounitMultiplicative { h: usize, k: usize },
    CounitUnit,
    LeftAntipode { h: usize },
    RightAntipode { h: usize },
    AntipodeInverse,
}

impl HopfAlgebraDesc {
    pub fn new(algebra: AlgebraDesc, coproduct: Matrix, counit: Vector, antipode: Matrix) -> Result<Self> {
        let n = algebra.dim();
        check_dim("coproduct rows", n * n, coproduct.rows())?;
        check_dim("coproduct columns", n, coproduct.cols())?;
        check_dim("counit", n, counit.len())?;
        check_dim("antipode rows", n, antipode.rows())?;
        check_dim("antipode columns", n, antipode.cols())?;
        let antipode_inverse = antipode.inverse();
        Ok(HopfAlgebraDesc {
            algebra,
            coproduct,
            counit,
            antipode,
            antipode_inverse,
        })
    }

    /// ℚ with the trivial Hopf structure.
    pub fn trivial() -> Self {
        let q1 = Rational::from_integer(1.into());
        HopfAlgebraDesc::new(
            AlgebraDesc::field(),
            Matrix::identity(1),
            vec![q1],
            Matrix::identity(1),
        )
        .expect("shape")
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn delta(&self, h: &[Rational]) -> Vector {
        self.coproduct.mul_vec(h)
    }

    /// `Δ(h)` as `(i, j, c)` with `h₁ ⊗ h₂ = Σ c e_i ⊗ e_j`.
    pub fn sweedler(&self, h: &[Rational]) -> Vec<(usize, usize, Rational)> {
        let n = self.dim();
        self.delta(h)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| (p / n, p % n, c))
            .collect()
    }

    /// `h₁ ⊗ h₂ ⊗ h₃` as `(i, j, k, c)`.
    pub fn sweedler3(&self, h: &[Rational]) -> Vec<(usize, usize, usize, Rational)> {
        let mut out = Vec::new();
        for (i, j, c) in self.sweedler(h) {
            for (k, l, d) in self.sweedler(&self.algebra.basis(j)) {
                out.push((i, k, l, &c * d));
            }
        }
        out
    }

    pub fn epsilon(&self, h: &[Rational]) -> Rational {
        dot(&self.counit, h)
    }

    pub fn validate(&self) -> Vec<HopfViolation> {
        let n = self.dim();
        let a = &self.algebra;
        let mut out = Vec::new();
        let id = Matrix::identity(n);
        let d_left = self.coproduct.kronecker(&id).mul(&self.coproduct);
        let d_right = id.kronecker(&self.coproduct).mul(&self.coproduct);
        let eps_row = Matrix::from_rows(n, &[self.counit.clone()]);
        let counit_left = eps_row.kronecker(&id).mul(&self.coproduct);
        let counit_right = id.kronecker(&eps_row).mul(&self.coproduct);
        for h in 0..n {
            if d_left.column(h) != d_right.column(h) {
                out.push(HopfViolation::Coassociativity { h });
            }
            if counit_left.column(h) != a.basis(h) {
                out.push(HopfViolation::LeftCounit { h });
            }
            if counit_right.column(h) != a.basis(h) {
                out.push(HopfViolation::RightCounit { h });
            }
        }
        let one = a.unit();
        if self.delta(one) != kron_vec(one, one) {
            out.push(HopfViolation::CoproductUnit);
        }
        if !(self.epsilon(one) - Rational::from_integer(1.into())).is_zero() {
            out.push(HopfViolation::CounitUnit);
        }
        let aa = a.tensor(a);
        for h in 0..n {
            for k in 0..n {
                let hk = a.basis_product(h, k);
                if self.delta(&hk) != aa.mul(&self.delta(&a.basis(h)), &self.delta(&a.basis(k))) {
                    out.push(HopfViolation::CoproductMultiplicative { h, k });
                }
                if self.epsilon(&hk) != &self.counit[h] * &self.counit[k] {
                    out.push(HopfViolation::CounitMultiplicative { h, k });
                }
            }
        }
        for h in 0..n {
            let mut left = zero_vec(n);
            let mut right = zero_vec(n);
            for (i, j, c) in self.sweedler(&a.basis(h)) {
                let si = self.antipode.column(i);
                let sj = self.antipode.column(j);
                axpy(&mut left, &c, &a.mul(&si, &a.basis(j)));
                axpy(&mut right, &c, &a.mul(&a.basis(i), &sj));
            }
            let expect: Vector = one.iter().map(|x| x * &self.counit[h]).collect();
            if left != expect {
                out.push(HopfViolation::LeftAntipode { h });
            }
            if right != expect {
                out.push(HopfViolation::RightAntipode { h });
            }
        }
        if let Some(inv) = &self.antipode_inverse {
            if self.antipode.mul(inv) != id || inv.mul(&self.antipode) != id {
                out.push(HopfViolation::AntipodeInverse);
            }
        }
        out
    }
}

/// An algebra with a left action of a Hopf algebra, one matrix per Hopf
/// basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleAlgebraDesc {
    pub hopf: HopfAlgebraDesc,
    pub algebra: AlgebraDesc,
    pub action: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleAlgebraViolation {
    ActionUnit,
    ActionAssociativity { h: usize, k: usize },
    Measuring { h: usize, a: usize, b: usize },
    UnitPreserved { h: usize },
}

impl ModuleAlgebraDesc {
    pub fn new(hopf: HopfAlgebraDesc, algebra: AlgebraDesc, action: Vec<Matrix>) -> Result<Self> {
        check_dim("module algebra action count", hopf.dim(), action.len())?;
        for m in &action {
            check_dim("module algebra action rows", algebra.dim(), m.rows())?;
            check_dim("module algebra action columns", algebra.dim(), m.cols())?;
        }
        Ok(ModuleAlgebraDesc { hopf, algebra, action })
    }

    /// Matrix of `a ↦ h ▷ a`.
    pub fn act(&self, h: &[Rational]) -> Matrix {
        crate::bimodule::combine_matrices(&self.action, h, self.algebra.dim())
    }

    pub fn validate(&self) -> Vec<ModuleAlgebraViolation> {
        let (h_alg, a) = (&self.hopf.algebra, &self.algebra);
        let mut out = Vec::new();
        if self.act(h_alg.unit()) != Matrix::identity(a.dim()) {
            out.push(ModuleAlgebraViolation::ActionUnit);
        }
        for h in 0..h_alg.dim() {
            for k in 0..h_alg.dim() {
                if self.act(&h_alg.basis_product(h, k)) != self.action[h].mul(&self.action[k]) {
                    out.push(ModuleAlgebraViolation::ActionAssociativity { h, k });
                }
            }
        }
        for h in 0..h_alg.dim() {
            let sw = self.hopf.sweedler(&h_alg.basis(h));
            for x in 0..a.dim() {
                for y in 0..a.dim() {
                    let lhs = self.action[h].mul_vec(&a.basis_product(x, y));
                    let mut rhs = zero_vec(a.dim());
                    for (i, j, c) in &sw {
                        let p = a.mul(&self.action[*i].column(x), &self.action[*j].column(y));
                        axpy(&mut rhs, c, &p);
                    }
                    if lhs != rhs {
                        out.push(ModuleAlgebraViolation::Measuring { h, a: x, b: y });
                    }
                }
            }
            let expect: Vector = a.unit().iter().map(|x| x * &self.hopf.counit[h]).collect();
            if self.action[h].mul_vec(a.unit()) != expect {
                out.push(ModuleAlgebraViolation::UnitPreserved { h });
            }
        }
        out
    }
}
