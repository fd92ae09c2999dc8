//! Deterministic generators for the desk-scale examples: matrix algebras,
//! generalized matrix rings, group algebras of `S₃`, Sweedler's `H₄` and a
//! few module algebras and modules.

use num_traits::Zero;

use crate::algebra::{AlgebraDesc, LeftModuleDesc};
use crate::bimodule::BimoduleDesc;
use crate::coalgebra::{quotient_module_coalgebra, CoalgebraDesc, CoalgebraMapDesc, ModuleCoalgebraDesc};
use crate::error::{Error, Result};
use crate::extension::ExtensionCtx;
use crate::hopf::{HopfAlgebraDesc, ModuleAlgebraDesc};
use crate::linalg::{q, unit_vec, zero_vec, Matrix, Rational, Vector};

/// `M_n(ℚ)` with matrix units `e_ij` at index `i * n + j`.
pub fn matrix_algebra(n: usize) -> AlgebraDesc {
    let d = n * n;
    let names = (0..d).map(|p| format!("e{}{}", p / n + 1, p % n + 1)).collect();
    let unit = (0..d).map(|p| if p / n == p % n { q(1) } else { q(0) }).collect();
    AlgebraDesc::from_products(names, unit, |a, b| {
        let (i, j, k, l) = (a / n, a % n, b / n, b % n);
        if j == k {
            unit_vec(d, i * n + l)
        } else {
            zero_vec(d)
        }
    })
    .expect("matrix algebra shape")
}

/// `A₁ × A₂`, basis of `A₁` first.
pub fn direct_product(a1: &AlgebraDesc, a2: &AlgebraDesc) -> AlgebraDesc {
    let (n1, n2) = (a1.dim(), a2.dim());
    let d = n1 + n2;
    let names = a1
        .basis_names()
        .iter()
        .map(|s| format!("{s}.1"))
        .chain(a2.basis_names().iter().map(|s| format!("{s}.2")))
        .collect();
    let unit = a1.unit().iter().chain(a2.unit()).cloned().collect();
    AlgebraDesc::from_products(names, unit, |i, j| {
        let mut v = zero_vec(d);
        if i < n1 && j < n1 {
            v[..n1].clone_from_slice(&a1.basis_product(i, j));
        } else if i >= n1 && j >= n1 {
            v[n1..].clone_from_slice(&a2.basis_product(i - n1, j - n1));
        }
        v
    })
    .expect("direct product shape")
}

/// `ℚ^k` with idempotent basis.
pub fn diagonal_algebra(k: usize) -> AlgebraDesc {
    let names = (0..k).map(|i| format!("p{i}")).collect();
    AlgebraDesc::from_products(names, vec![q(1); k], |i, j| {
        if i == j {
            unit_vec(k, i)
        } else {
            zero_vec(k)
        }
    })
    .expect("diagonal algebra shape")
}

/// Inputs of a generalized matrix ring `[[U, M], [N, V]]`.
///
/// `mn[p * dim N + s]` is the `U`-vector `m_p · n_s`; `nm[s * dim M + p]` is
/// the `V`-vector `n_s · m_p`. Absent pairings are zero.
#[derive(Clone, Debug)]
pub struct GeneralizedMatrixRing {
    pub u: AlgebraDesc,
    pub v: AlgebraDesc,
    /// `U`-`V`-bimodule
    pub m: BimoduleDesc,
    /// `V`-`U`-bimodule
    pub n: BimoduleDesc,
    pub mn: Option<Vec<Vector>>,
    pub nm: Option<Vec<Vector>>,
}

/// Block offsets of `U, M, N, V` in the basis of the generalized matrix ring.
pub fn gmr_offsets(g: &GeneralizedMatrixRing) -> [usize; 4] {
    let (du, dm, dn) = (g.u.dim(), g.m.dim, g.n.dim);
    [0, du, du + dm, du + dm + dn]
}

/// The algebra `A`, the block-diagonal `B = U × V` and `ι`. Fails when the
/// pairings break associativity.
pub fn generalized_matrix_ring(g: &GeneralizedMatrixRing) -> Result<(AlgebraDesc, AlgebraDesc, Matrix)> {
    let (du, dm, dn, dv) = (g.u.dim(), g.m.dim, g.n.dim, g.v.dim());
    let [ou, om, on, ov] = gmr_offsets(g);
    let d = du + dm + dn + dv;
    let block = |i: usize| -> (usize, usize) {
        if i < om {
            (0, i - ou)
        } else if i < on {
            (1, i - om)
        } else if i < ov {
            (2, i - on)
        } else {
            (3, i - ov)
        }
    };
    let place = |off: usize, v: &[Rational]| {
        let mut out = zero_vec(d);
        out[off..off + v.len()].clone_from_slice(v);
        out
    };
    let product = |i: usize, j: usize| -> Vector {
        match (block(i), block(j)) {
            ((0, a), (0, b)) => place(ou, &g.u.basis_product(a, b)),
            ((3, a), (3, b)) => place(ov, &g.v.basis_product(a, b)),
            ((0, a), (1, b)) => place(om, &g.m.left_action[a].column(b)),
            ((1, a), (3, b)) => place(om, &g.m.right_action[b].column(a)),
            ((3, a), (2, b)) => place(on, &g.n.left_action[a].column(b)),
            ((2, a), (0, b)) => place(on, &g.n.right_action[b].column(a)),
            ((1, a), (2, b)) => match &g.mn {
                Some(t) => place(ou, &t[a * dn + b]),
                None => zero_vec(d),
            },
            ((2, a), (1, b)) => match &g.nm {
                Some(t) => place(ov, &t[a * dm + b]),
                None => zero_vec(d),
            },
            _ => zero_vec(d),
        }
    };
    let names: Vec<String> = g
        .u
        .basis_names()
        .iter()
        .map(|s| format!("U.{s}"))
        .chain((0..dm).map(|i| format!("M.{i}")))
        .chain((0..dn).map(|i| format!("N.{i}")))
        .chain(g.v.basis_names().iter().map(|s| format!("V.{s}")))
        .collect();
    let mut unit = place(ou, g.u.unit());
    unit[ov..].clone_from_slice(g.v.unit());
    let a = AlgebraDesc::from_products(names, unit, product)?;
    if let Some(v) = a.validate().first() {
        return Err(Error::InvalidInput(format!(
            "generalized matrix ring data is inconsistent: {v:?}"
        )));
    }
    let b = direct_product(&g.u, &g.v);
    let iota = Matrix::from_fn(d, du + dv, |r, c| {
        let target = if c < du { ou + c } else { ov + c - du };
        if r == target {
            q(1)
        } else {
            q(0)
        }
    });
    Ok((a, b, iota))
}

fn scalar_bimodule(dim: usize) -> BimoduleDesc {
    let f = AlgebraDesc::field();
    BimoduleDesc::new(f.clone(), f, dim, vec![Matrix::identity(dim)], vec![Matrix::identity(dim)])
        .expect("scalar bimodule shape")
}

/// `U = V = ℚ` with `M`, `N` each `ℚ` or `0`, zero pairings. Basis names
/// follow the matrix-unit layout `e11, e12, e21, e22`.
pub fn gmr_rational(with_m: bool, with_n: bool) -> (AlgebraDesc, AlgebraDesc, Matrix) {
    let g = GeneralizedMatrixRing {
        u: AlgebraDesc::field(),
        v: AlgebraDesc::field(),
        m: scalar_bimodule(usize::from(with_m)),
        n: scalar_bimodule(usize::from(with_n)),
        mn: None,
        nm: None,
    };
    let (a, b, iota) = generalized_matrix_ring(&g).expect("zero pairings are consistent");
    let mut names = vec!["e11".to_string()];
    if with_m {
        names.push("e12".into());
    }
    if with_n {
        names.push("e21".into());
    }
    names.push("e22".into());
    let a = a.with_names(names).expect("name count");
    let b = b.with_names(vec!["e11".into(), "e22".into()]).expect("name count");
    (a, b, iota)
}

/// Group algebra from a Cayley table `table[i][j] = index of g_i g_j`.
pub fn group_algebra(names: &[&str], table: &[Vec<usize>]) -> Result<AlgebraDesc> {
    let n = names.len();
    if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
        return Err(Error::InvalidInput("Cayley table shape".into()));
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|j| table[e][j] == j && table[j][e] == j))
        .ok_or_else(|| Error::InvalidInput("Cayley table has no identity".into()))?;
    AlgebraDesc::from_products(
        names.iter().map(|s| s.to_string()).collect(),
        unit_vec(n, e),
        |i, j| unit_vec(n, table[i][j]),
    )
}

/// `ℚG ⊇ ℚH` for a subgroup given by element indices.
pub fn group_algebra_extension(
    names: &[&str],
    table: &[Vec<usize>],
    subgroup: &[usize],
) -> Result<(AlgebraDesc, AlgebraDesc, Matrix)> {
    let a = group_algebra(names, table)?;
    let closed = subgroup
        .iter()
        .all(|&h| subgroup.iter().all(|&k| subgroup.contains(&table[h][k])));
    if !closed {
        return Err(Error::InvalidInput("subgroup is not closed under multiplication".into()));
    }
    let (sub_names, sub_table) = subgroup_table(names, table, subgroup);
    let b = group_algebra(&sub_names, &sub_table)?;
    let iota = Matrix::from_fn(names.len(), subgroup.len(), |r, c| {
        if subgroup[c] == r {
            q(1)
        } else {
            q(0)
        }
    });
    Ok((a, b, iota))
}

fn subgroup_table<'a>(names: &[&'a str], table: &[Vec<usize>], subgroup: &[usize]) -> (Vec<&'a str>, Vec<Vec<usize>>) {
    let pos = |g: usize| subgroup.iter().position(|&h| h == g).expect("closed");
    let sub_names = subgroup.iter().map(|&h| names[h]).collect();
    let sub_table = subgroup
        .iter()
        .map(|&h| subgroup.iter().map(|&k| pos(table[h][k])).collect())
        .collect();
    (sub_names, sub_table)
}

/// Elements of `S₃` as images of `(0, 1, 2)`, in the fixed order
/// `e, (12), (13), (23), (123), (132)`.
pub const S3_PERMS: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
pub const S3_NAMES: [&str; 6] = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"];
pub const A3_INDICES: [usize; 3] = [0, 4, 5];
pub const C2_INDICES: [usize; 2] = [0, 1];

/// Cayley table of `S₃` with `(στ)(x) = σ(τ(x))`.
pub fn s3_table() -> Vec<Vec<usize>> {
    let idx = |p: [usize; 3]| S3_PERMS.iter().position(|&x| x == p).expect("closed");
    S3_PERMS
        .iter()
        .map(|s| S3_PERMS.iter().map(|t| idx([s[t[0]], s[t[1]], s[t[2]]])).collect())
        .collect()
}

pub fn s3_sign(i: usize) -> i64 {
    if (1..=3).contains(&i) {
        -1
    } else {
        1
    }
}

pub fn s3_algebra() -> AlgebraDesc {
    group_algebra(&S3_NAMES, &s3_table()).expect("S3 table")
}

pub fn regular_module(a: &AlgebraDesc) -> LeftModuleDesc {
    LeftModuleDesc::regular(a)
}

/// The 2-dimensional irreducible of `S₃` on `{x ∈ ℚ³ : Σx = 0}` with basis
/// `e₀ − e₁, e₁ − e₂`.
pub fn s3_standard_module() -> LeftModuleDesc {
    let action = S3_PERMS
        .iter()
        .map(|p| {
            let image = |k: usize| -> Vector {
                let mut w = zero_vec(3);
                w[p[k]] += q(1);
                w[p[k + 1]] -= q(1);
                // w = w0 v0 + (w0 + w1) v1
                vec![w[0].clone(), &w[0] + &w[1]]
            };
            Matrix::from_columns(2, &[image(0), image(1)])
        })
        .collect();
    LeftModuleDesc::new(&s3_algebra(), 2, action).expect("standard module shape")
}

/// Sign representation ⊕ trivial representation.
pub fn s3_sign_plus_trivial() -> LeftModuleDesc {
    let action = (0..6)
        .map(|i| Matrix::from_i64(2, 2, &[s3_sign(i), 0, 0, 1]))
        .collect();
    LeftModuleDesc::new(&s3_algebra(), 2, action).expect("sign plus trivial shape")
}

/// Group algebra as a Hopf algebra: grouplike basis, `S(g) = g⁻¹`.
pub fn group_hopf(names: &[&str], table: &[Vec<usize>]) -> Result<HopfAlgebraDesc> {
    let a = group_algebra(names, table)?;
    let n = a.dim();
    let e = a.unit().iter().position(|x| !x.is_zero()).expect("unit");
    let coproduct = Matrix::from_fn(n * n, n, |r, c| if r == c * n + c { q(1) } else { q(0) });
    let antipode = Matrix::from_fn(n, n, |r, c| if table[c][r] == e { q(1) } else { q(0) });
    HopfAlgebraDesc::new(a, coproduct, vec![q(1); n], antipode)
}

pub fn c2_hopf() -> HopfAlgebraDesc {
    group_hopf(&["e", "s"], &[vec![0, 1], vec![1, 0]]).expect("C2 table")
}

/// Sweedler's four-dimensional Hopf algebra, basis `1, g, x, gx`.
pub fn sweedler_h4() -> HopfAlgebraDesc {
    // g^a x^b at index a + 2b
    let names = vec!["1".into(), "g".into(), "x".into(), "gx".into()];
    let a = AlgebraDesc::from_products(names, unit_vec(4, 0), |i, j| {
        let (a1, b1, a2, b2) = (i % 2, i / 2, j % 2, j / 2);
        if b1 + b2 >= 2 {
            return zero_vec(4);
        }
        let sign = if b1 * a2 == 1 { -1 } else { 1 };
        let mut v = zero_vec(4);
        v[(a1 + a2) % 2 + 2 * (b1 + b2)] = q(sign);
        v
    })
    .expect("H4 shape");
    let mut coproduct = Matrix::zeros(16, 4);
    let at = |i: usize, j: usize| i * 4 + j;
    coproduct.set(at(0, 0), 0, q(1));
    coproduct.set(at(1, 1), 1, q(1));
    coproduct.set(at(2, 0), 2, q(1));
    coproduct.set(at(1, 2), 2, q(1));
    coproduct.set(at(3, 1), 3, q(1));
    coproduct.set(at(0, 3), 3, q(1));
    let antipode = Matrix::from_i64(4, 4, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0]);
    HopfAlgebraDesc::new(a, coproduct, vec![q(1), q(1), q(0), q(0)], antipode).expect("H4 shape")
}

/// `ℚC₂` acting on `ℚ × ℚ` by swapping the idempotents.
pub fn c2_swap_module_algebra() -> ModuleAlgebraDesc {
    let swap = Matrix::from_i64(2, 2, &[0, 1, 1, 0]);
    ModuleAlgebraDesc::new(c2_hopf(), diagonal_algebra(2), vec![Matrix::identity(2), swap])
        .expect("swap shape")
}

/// `H₄` acting on `ℚ[y]/(y²)`: `g ▷ y = −y`, `x ▷ y = 1`, `x ▷ 1 = 0`.
pub fn h4_dual_numbers_module_algebra() -> ModuleAlgebraDesc {
    let dual_numbers = AlgebraDesc::from_products(vec!["1".into(), "y".into()], unit_vec(2, 0), |i, j| {
        if i + j >= 2 {
            zero_vec(2)
        } else {
            unit_vec(2, i + j)
        }
    })
    .expect("dual numbers shape");
    let g = Matrix::from_i64(2, 2, &[1, 0, 0, -1]);
    let x = Matrix::from_i64(2, 2, &[0, 1, 0, 0]);
    let gx = g.mul(&x);
    ModuleAlgebraDesc::new(sweedler_h4(), dual_numbers, vec![Matrix::identity(2), g, x, gx])
        .expect("H4 module algebra shape")
}

/// Any Hopf algebra acting on `ℚ` through its counit.
pub fn trivial_module_algebra(h: HopfAlgebraDesc) -> ModuleAlgebraDesc {
    let action = h
        .counit
        .iter()
        .map(|c| Matrix::from_vec(1, 1, vec![c.clone()]).expect("1x1"))
        .collect();
    ModuleAlgebraDesc::new(h, AlgebraDesc::field(), action).expect("trivial action shape")
}

/// A named extension with its expected verdicts.
#[derive(Clone, Debug)]
pub struct ExtensionFixture {
    pub name: &'static str,
    pub description: &'static str,
    pub a: AlgebraDesc,
    pub b: AlgebraDesc,
    pub iota: Matrix,
    pub expect_left_d2: bool,
    pub expect_right_d2: bool,
}

impl ExtensionFixture {
    pub fn build(&self) -> Result<ExtensionCtx> {
        ExtensionCtx::new(self.a.clone(), self.b.clone(), self.iota.clone())
    }
}

fn fixture(
    name: &'static str,
    description: &'static str,
    parts: (AlgebraDesc, AlgebraDesc, Matrix),
    left: bool,
    right: bool,
) -> ExtensionFixture {
    ExtensionFixture {
        name,
        description,
        a: parts.0,
        b: parts.1,
        iota: parts.2,
        expect_left_d2: left,
        expect_right_d2: right,
    }
}

pub const EXTENSION_FIXTURE_NAMES: [&str; 9] = [
    "q_q",
    "m2_m2",
    "q_m2",
    "gmr_1111",
    "gmr_triangular",
    "gmr_diagonal",
    "s3_a3",
    "s3_c2",
    "azumaya_m2",
];

pub fn extension_fixture(name: &str) -> Option<ExtensionFixture> {
    let m2 = matrix_algebra(2);
    let same = |a: &AlgebraDesc| (a.clone(), a.clone(), Matrix::identity(a.dim()));
    Some(match name {
        "q_q" => fixture("q_q", "ℚ over itself", same(&AlgebraDesc::field()), true, true),
        "m2_m2" => fixture("m2_m2", "M₂(ℚ) over itself", same(&m2), true, true),
        "q_m2" => {
            let iota = Matrix::from_columns(4, &[m2.unit().clone()]);
            fixture("q_m2", "scalars in M₂(ℚ)", (m2, AlgebraDesc::field(), iota), true, true)
        }
        "gmr_1111" => fixture(
            "gmr_1111",
            "generalized matrix ring U=V=M=N=ℚ over its diagonal",
            gmr_rational(true, true),
            false,
            false,
        ),
        "gmr_triangular" => fixture(
            "gmr_triangular",
            "upper triangular 2×2 matrices over the diagonal",
            gmr_rational(true, false),
            false,
            false,
        ),
        "gmr_diagonal" => fixture(
            "gmr_diagonal",
            "generalized matrix ring with M=N=0, so A=B",
            gmr_rational(false, false),
            true,
            true,
        ),
        "s3_a3" => fixture(
            "s3_a3",
            "ℚS₃ over ℚA₃",
            group_algebra_extension(&S3_NAMES, &s3_table(), &A3_INDICES).expect("A3 ≤ S3"),
            true,
            true,
        ),
        "s3_c2" => fixture(
            "s3_c2",
            "ℚS₃ over ℚ⟨(12)⟩",
            group_algebra_extension(&S3_NAMES, &s3_table(), &C2_INDICES).expect("C2 ≤ S3"),
            false,
            false,
        ),
        "azumaya_m2" => {
            let a = direct_product(&m2, &m2);
            let iota = Matrix::from_fn(8, 4, |r, c| if r % 4 == c { q(1) } else { q(0) });
            fixture("azumaya_m2", "M₂(ℚ) diagonally in M₂(ℚ)×M₂(ℚ)", (a, m2, iota), true, true)
        }
        _ => return None,
    })
}

pub fn extension_fixtures() -> Vec<ExtensionFixture> {
    EXTENSION_FIXTURE_NAMES
        .iter()
        .map(|n| extension_fixture(n).expect("registered fixture"))
        .collect()
}

/// `H₄` as a right module coalgebra over `K = ℚ[g]`.
pub fn h4_over_group_part() -> ModuleCoalgebraDesc {
    let inclusion = Matrix::from_i64(4, 2, &[1, 0, 0, 1, 0, 0, 0, 0]);
    ModuleCoalgebraDesc::hopf_subalgebra(&sweedler_h4(), &c2_hopf(), &inclusion).expect("ℚ[g] ⊆ H₄")
}

/// `ℚS₃` as a right module coalgebra over `ℚA₃`.
pub fn s3_over_a3_module_coalgebra() -> ModuleCoalgebraDesc {
    let table = s3_table();
    let (sub_names, sub_table) = subgroup_table(&S3_NAMES, &table, &A3_INDICES);
    let h = group_hopf(&S3_NAMES, &table).expect("S3 table");
    let k = group_hopf(&sub_names, &sub_table).expect("A3 table");
    let (_, _, iota) = group_algebra_extension(&S3_NAMES, &table, &A3_INDICES).expect("A3 ≤ S3");
    ModuleCoalgebraDesc::hopf_subalgebra(&h, &k, &iota).expect("ℚA₃ ⊆ ℚS₃")
}

pub const COALGEBRA_FIXTURE_NAMES: [&str; 5] = ["h4_quotient", "s3_a3_quotient", "s3_c2_dual", "h4_identity", "h4_counit"];

/// Expected codepth two verdict (both sides) of a coalgebra fixture.
pub fn coalgebra_fixture_expected(name: &str) -> Option<bool> {
    match name {
        "h4_quotient" | "s3_a3_quotient" | "h4_identity" | "h4_counit" => Some(true),
        "s3_c2_dual" => Some(false),
        _ => None,
    }
}

pub const MODULE_ALGEBRA_FIXTURE_NAMES: [&str; 3] = ["c2_swap", "h4_dual_numbers", "trivial_h4"];

pub fn module_algebra_fixture(name: &str) -> Option<ModuleAlgebraDesc> {
    Some(match name {
        "c2_swap" => c2_swap_module_algebra(),
        "h4_dual_numbers" => h4_dual_numbers_module_algebra(),
        "trivial_h4" => trivial_module_algebra(sweedler_h4()),
        _ => return None,
    })
}

/// Coalgebra maps `g: C → D` used by the codepth two examples.
pub fn coalgebra_fixture(name: &str) -> Option<CoalgebraMapDesc> {
    let h4 = CoalgebraDesc::of_hopf(&sweedler_h4());
    Some(match name {
        "h4_quotient" => quotient_module_coalgebra(&h4_over_group_part()).expect("H₄/H₄K⁺"),
        "s3_a3_quotient" => quotient_module_coalgebra(&s3_over_a3_module_coalgebra()).expect("ℚS₃/ℚS₃(ℚA₃)⁺"),
        "s3_c2_dual" => {
            let (a, b, iota) = group_algebra_extension(&S3_NAMES, &s3_table(), &C2_INDICES).expect("C2 ≤ S3");
            let c = CoalgebraDesc::dual_of_algebra(&a);
            let d = CoalgebraDesc::dual_of_algebra(&b);
            CoalgebraMapDesc::new(c, d, iota.transpose()).expect("shape")
        }
        "h4_identity" => CoalgebraMapDesc::identity(&h4),
        "h4_counit" => CoalgebraMapDesc::counit_map(&h4),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_is_valid() {
        for f in extension_fixtures() {
            assert!(f.a.validate().is_empty(), "{}", f.name);
            assert!(f.b.validate().is_empty(), "{}", f.name);
            f.build().unwrap_or_else(|e| panic!("{}: {e}", f.name));
        }
        assert!(sweedler_h4().validate().is_empty());
        assert!(c2_hopf().validate().is_empty());
        assert!(c2_swap_module_algebra().validate().is_empty());
        assert!(h4_dual_numbers_module_algebra().validate().is_empty());
        assert!(trivial_module_algebra(sweedler_h4()).validate().is_empty());
        let a = s3_algebra();
        assert!(s3_standard_module().validate(&a).is_empty());
        assert!(s3_sign_plus_trivial().validate(&a).is_empty());
        for n in COALGEBRA_FIXTURE_NAMES {
            let g = coalgebra_fixture(n).unwrap();
            assert!(g.source.validate().is_empty(), "{n}");
            assert!(g.target.validate().is_empty(), "{n}");
            assert!(g.validate().is_empty(), "{n}");
        }
    }

    #[test]
    fn group_extension_rejects_non_subgroup() {
        assert!(group_algebra_extension(&S3_NAMES, &s3_table(), &[0, 1, 4]).is_err());
    }

    #[test]
    fn regeneration_is_identical() {
        for n in EXTENSION_FIXTURE_NAMES {
            let (x, y) = (extension_fixture(n).unwrap(), extension_fixture(n).unwrap());
            assert_eq!(x.a, y.a);
            assert_eq!(x.iota, y.iota);
        }
    }

    #[test]
    fn generalized_matrix_ring_shapes() {
        let (a, b, _) = gmr_rational(true, true);
        assert_eq!((a.dim(), b.dim()), (4, 2));
        let (t, _, _) = gmr_rational(true, false);
        assert_eq!(t.dim(), 3);
        let (d, b, _) = gmr_rational(false, false);
        assert_eq!(d.dim(), b.dim());
        // with M·N = U and N·M = V the ring is M₂(ℚ)
        let g = GeneralizedMatrixRing {
            u: AlgebraDesc::field(),
            v: AlgebraDesc::field(),
            m: scalar_bimodule(1),
            n: scalar_bimodule(1),
            mn: Some(vec![vec![q(1)]]),
            nm: Some(vec![vec![q(1)]]),
        };
        let (m2, _, _) = generalized_matrix_ring(&g).unwrap();
        assert_eq!(m2.center().dim(), 1);
    }
}
