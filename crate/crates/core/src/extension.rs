//! An algebra extension `ι: B → A` with every derived structure built once:
//! the centralizer `R`, the tensor square `W`, and the rings `S` and `T`.

use crate::algebra::{AlgebraDesc, AlgebraMapDesc, Subalgebra};
use crate::bimodule::{BimoduleDesc, SRing, TRing, TensorSquare};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rational, Vector};

#[derive(Clone, Debug)]
pub struct ExtensionCtx {
    pub a: AlgebraDesc,
    pub b: AlgebraDesc,
    pub iota: AlgebraMapDesc,
    /// `ι(b_k)` for each basis element of `B`.
    pub b_images: Vec<Vector>,
    /// `R = C_A(ι(B))` in its canonical basis.
    pub r: Subalgebra,
    /// Algebra generators of `R`, embedded in `A`; enough to impose
    /// `⊗_R` relations.
    pub r_generators: Vec<Vector>,
    pub w: TensorSquare,
    pub s: SRing,
    pub t: TRing,
}

impl ExtensionCtx {
    /// Validates `A`, `B` and `ι`, then builds all cached structures.
    pub fn new(a: AlgebraDesc, b: AlgebraDesc, iota: Matrix) -> Result<Self> {
        let bad_a = a.validate();
        if !bad_a.is_empty() {
            return Err(Error::InvalidInput(format!("A is not an algebra: {:?}", bad_a[0])));
        }
        let bad_b = b.validate();
        if !bad_b.is_empty() {
            return Err(Error::InvalidInput(format!("B is not an algebra: {:?}", bad_b[0])));
        }
        let iota = AlgebraMapDesc::new(b, a, iota)?;
        let bad = iota.validate();
        if !bad.is_empty() {
            return Err(Error::InvalidInput(format!("ι is not a homomorphism: {:?}", bad[0])));
        }
        Self::from_map(iota)
    }

    pub fn from_map(iota: AlgebraMapDesc) -> Result<Self> {
        let a = iota.target.clone();
        let b = iota.source.clone();
        let b_images: Vec<Vector> = (0..b.dim()).map(|k| iota.image_of_basis(k)).collect();
        let r_space = a.commutant_of(&b_images);
        let r = a.subalgebra(&r_space, "r")?;
        let r_generators = r
            .algebra
            .algebra_generators()
            .into_iter()
            .map(|g| r.embed(&r.algebra.basis(g)))
            .collect();
        let w = TensorSquare::new(&a, &b_images);
        let s = SRing::new(&a, &b_images)?;
        let t = TRing::new(&a, &w, &b_images)?;
        Ok(ExtensionCtx {
            a,
            b,
            iota,
            b_images,
            r,
            r_generators,
            w,
            s,
            t,
        })
    }

    pub fn n(&self) -> usize {
        self.a.dim()
    }

    /// Element of `A` for `R`-coordinates.
    pub fn r_elem(&self, r: &[Rational]) -> Vector {
        self.r.embed(r)
    }

    /// `_B A_A`
    pub fn bimodule_b_a_a(&self) -> BimoduleDesc {
        let a = &self.a;
        BimoduleDesc {
            dim: a.dim(),
            left_algebra: self.b.clone(),
            right_algebra: a.clone(),
            left_action: self.b_images.iter().map(|x| a.left_matrix(x)).collect(),
            right_action: (0..a.dim()).map(|j| a.right_basis(j).clone()).collect(),
        }
    }

    /// `_B W_A`
    pub fn bimodule_b_w_a(&self) -> BimoduleDesc {
        BimoduleDesc {
            dim: self.w.dim(),
            left_algebra: self.b.clone(),
            right_algebra: self.a.clone(),
            left_action: self.b_images.iter().map(|x| self.w.left_matrix(x)).collect(),
            right_action: self.w.right_action.clone(),
        }
    }

    /// `_A A_B`
    pub fn bimodule_a_a_b(&self) -> BimoduleDesc {
        let a = &self.a;
        BimoduleDesc {
            dim: a.dim(),
            left_algebra: a.clone(),
            right_algebra: self.b.clone(),
            left_action: (0..a.dim()).map(|i| a.left_basis(i).clone()).collect(),
            right_action: self.b_images.iter().map(|x| a.right_matrix(x)).collect(),
        }
    }

    /// `_A W_B`
    pub fn bimodule_a_w_b(&self) -> BimoduleDesc {
        BimoduleDesc {
            dim: self.w.dim(),
            left_algebra: self.a.clone(),
            right_algebra: self.b.clone(),
            left_action: self.w.left_action.clone(),
            right_action: self.b_images.iter().map(|x| self.w.right_matrix(x)).collect(),
        }
    }

    /// The same extension of opposite algebras, `B^op → A^op`.
    pub fn opposite(&self) -> Result<Self> {
        ExtensionCtx::new(self.a.opposite(), self.b.opposite(), self.iota.matrix.clone())
    }
}

#[cfg(test)]
mod tests {
    use crate::bimodule::hom_bimodule;
    use crate::fixtures::{extension_fixture, extension_fixtures};
    use crate::linalg::Matrix;

    fn dims(name: &str) -> [usize; 5] {
        let e = extension_fixture(name).unwrap().build().unwrap();
        [e.r.dim(), e.w.dim(), e.s.dim(), e.t.dim(), e.a.dim()]
    }

    #[test]
    fn tensor_square_dimensions() {
        // B = A: A ⊗_A A ≅ A
        assert_eq!(dims("m2_m2")[1], 4);
        // B = ℚ: no relations
        assert_eq!(dims("q_m2")[1], 16);
        // ℚS₃ free of rank 2 over ℚA₃: 36 − rank of relations
        assert_eq!(dims("s3_a3")[1], 12);
    }

    #[test]
    fn centralizer_s_and_t_dimensions() {
        assert_eq!(dims("gmr_1111")[0], 2);
        assert_eq!(dims("m2_m2")[0], 1);
        assert_eq!(dims("s3_a3")[0], 4);
        assert_eq!(dims("m2_m2")[2], 1);
        assert_eq!(dims("gmr_1111")[2], 4);
        assert_eq!(dims("s3_a3")[2], 8);
        assert_eq!(dims("m2_m2")[3], 1);
        assert_eq!(dims("s3_a3")[3], 8);
    }

    #[test]
    fn s3_centralizer_is_the_expected_span() {
        use crate::linalg::{q, Subspace};
        let e = extension_fixture("s3_a3").unwrap().build().unwrap();
        // e, (12), (13), (23), (123), (132)
        let expected = Subspace::span(
            6,
            [
                vec![q(1), q(0), q(0), q(0), q(0), q(0)],
                vec![q(0), q(0), q(0), q(0), q(1), q(0)],
                vec![q(0), q(0), q(0), q(0), q(0), q(1)],
                vec![q(0), q(1), q(1), q(1), q(0), q(0)],
            ],
        );
        assert_eq!(e.r.space, expected);
    }

    #[test]
    fn structural_invariants_on_every_fixture() {
        for f in extension_fixtures() {
            let e = f.build().unwrap();
            assert!(e.r.algebra.validate().is_empty(), "{}", f.name);
            assert!(e.s.algebra.validate().is_empty(), "{}", f.name);
            assert!(e.t.algebra.validate().is_empty(), "{}", f.name);
            let p = e.w.tensor.quotient().project_matrix();
            let sec = e.w.tensor.quotient().section_matrix();
            assert_eq!(p.mul(&sec), Matrix::identity(e.w.dim()), "{}", f.name);
            let idem = sec.mul(&p);
            assert_eq!(idem.mul(&idem), idem, "{}", f.name);
            assert_eq!(idem.kernel().dim(), e.w.tensor.quotient().relation_dim(), "{}", f.name);
            assert!(e.bimodule_b_w_a().validate().is_empty(), "{}", f.name);
            let hom = hom_bimodule(&e.bimodule_b_a_a(), &e.bimodule_b_w_a()).unwrap();
            assert_eq!(hom.dim(), e.t.dim(), "{}", f.name);
            assert!(hom.contains(&Matrix::from_columns(
                e.w.dim(),
                &(0..e.n()).map(|x| e.w.class(e.a.unit(), &e.a.basis(x))).collect::<Vec<_>>()
            )));
        }
    }
}
