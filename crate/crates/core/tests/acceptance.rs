//! Acceptance run: one PASS/FAIL line per criterion, each backed by a list
//! of named sub-checks. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use d2kit::algebra::ideal_closure;
use d2kit::bialgebroid::{
    build_aeh_bialgebroid, build_aha_bialgebroid, build_s_bialgebroid, build_t_bialgebroid, coproduct_independence,
    mapping_viewpoint_check, op_iso_aeh_aha, pairing_s_t, verify_left_bialgebroid, verify_right_bialgebroid,
};
use d2kit::cmd::cmd_report;
use d2kit::coalgebra::{
    anti_iso_bialgebroids, cod2_check, cogalois_maps, dual_extension, duality_theorem_check, free_module_check,
    iovanov_iso, CoD2Ctx,
};
use d2kit::depth_two::{
    azumaya_quasibase, d2_check, partial_invariance_test, semisimple_oracle, verify_quasibase, Side,
};
use d2kit::error::Result;
use d2kit::extension::ExtensionCtx;
use d2kit::fixtures::{
    c2_swap_module_algebra, coalgebra_fixture, extension_fixture, extension_fixtures, h4_dual_numbers_module_algebra,
    h4_over_group_part, regular_module, s3_standard_module, sweedler_h4,
};
use d2kit::linalg::{unit_vec, Matrix, Subspace, Vector};
use d2kit::smash::{comodule_structure_e, invariants_e, psi_iso, stability_iso, AModuleCtx, TBase};

type Checks = Vec<(String, bool)>;

fn ext(name: &str) -> Result<ExtensionCtx> {
    extension_fixture(name).expect("registered fixture").build()
}

fn span(n: usize, idx: &[usize]) -> Subspace {
    Subspace::span(n, idx.iter().map(|&i| unit_vec(n, i)))
}

fn ideal(e: &ExtensionCtx, idx: &[usize]) -> Result<d2kit::algebra::IdealDesc> {
    let gens: Vec<Vector> = idx.iter().map(|&i| e.a.basis(i)).collect();
    ideal_closure(&e.a, &gens)
}

fn both_sides(e: &ExtensionCtx) -> Result<(bool, bool)> {
    Ok((d2_check(e, Side::Left)?.0, d2_check(e, Side::Right)?.0))
}

fn generalized_matrix_ring() -> Result<Checks> {
    let mut c = Checks::new();
    // basis e11, e12, e21, e22; I = [[U, M], [N, 0]]
    let e = ext("gmr_1111")?;
    let pi = partial_invariance_test(&e, &ideal(&e, &[0])?)?;
    c.push(("I = [[U,M],[N,0]]".into(), pi.ideal == span(4, &[0, 1, 2])));
    c.push(("R∩I = [[U,0],[0,0]]".into(), pi.ideal_cap_r == span(4, &[0])));
    c.push(("A(R∩I) = [[U,0],[N,0]]".into(), pi.left_product == span(4, &[0, 2])));
    c.push(("(R∩I)A = [[U,M],[0,0]]".into(), pi.right_product == span(4, &[0, 1])));
    c.push(("both obstructions fire".into(), pi.left_witness.is_some() && pi.right_witness.is_some()));
    c.push(("gmr_1111 not D2 on either side".into(), both_sides(&e)? == (false, false)));
    // basis e11, e12, e22
    let t = ext("gmr_triangular")?;
    let top = partial_invariance_test(&t, &ideal(&t, &[0])?)?;
    c.push(("triangular: I blocks right D2 only".into(), top.left_ok && !top.right_ok));
    let bottom = partial_invariance_test(&t, &ideal(&t, &[2])?)?;
    c.push(("triangular: J blocks left D2 only".into(), !bottom.left_ok && bottom.right_ok));
    c.push(("triangular: quasibase searches fail on both sides".into(), both_sides(&t)? == (false, false)));
    Ok(c)
}

fn trivial_extensions() -> Result<Checks> {
    let mut c = Checks::new();
    for name in ["m2_m2", "q_m2"] {
        let e = ext(name)?;
        for side in [Side::Left, Side::Right] {
            let (ok, qb) = d2_check(&e, side)?;
            let verified = match qb {
                Some(qb) => verify_quasibase(&e, &qb)?,
                None => false,
            };
            c.push((format!("{name} {} D2 with verified quasibase", side.as_str()), ok && verified));
        }
    }
    Ok(c)
}

fn s3_extensions() -> Result<Checks> {
    let mut c = Checks::new();
    let e = ext("s3_a3")?;
    c.push(("S₃/A₃ left and right D2".into(), both_sides(&e)? == (true, true)));
    c.push(("S₃/A₃ oracle agrees".into(), semisimple_oracle(&e)? == Some((true, true))));
    let p = pairing_s_t(&e)?;
    c.push(("S ≅ Hom(T_R, R_R) via ⟨α,t⟩".into(), p.angle_bijective));
    c.push(("S ≅ Hom(_RT, _RR) via [α,t]".into(), p.bracket_bijective));
    let all = (0..e.s.dim()).all(|i| {
        (0..e.t.dim()).all(|j| mapping_viewpoint_check(&e, &e.s.basis[i], &e.t.element(&unit_vec(e.t.dim(), j))))
    });
    c.push(("mapping viewpoint on all S×T basis pairs".into(), all));
    let n = ext("s3_c2")?;
    c.push(("S₃/⟨(12)⟩ not D2".into(), both_sides(&n)? == (false, false)));
    c.push(("S₃/⟨(12)⟩ oracle agrees".into(), semisimple_oracle(&n)? == Some((false, false))));
    Ok(c)
}

fn bialgebroid_suites() -> Result<Checks> {
    let mut c = Checks::new();
    for f in extension_fixtures().into_iter().filter(|f| f.expect_right_d2) {
        let e = f.build()?;
        let (_, qb) = d2_check(&e, Side::Right)?;
        let qb = qb.expect("right D2 fixture");
        let t = build_t_bialgebroid(&e, &qb)?;
        c.push((format!("{} T axioms", f.name), verify_right_bialgebroid(&t)?.passed()));
        c.push((format!("{} T anchor↔counit", f.name), t.anchor_round_trip()?));
        let s = build_s_bialgebroid(&e, &qb)?;
        c.push((format!("{} S axioms", f.name), verify_left_bialgebroid(&s)?.passed()));
        c.push((format!("{} S anchor↔counit", f.name), s.anchor_round_trip()?));
        c.push((format!("{} Δ independent of quasibase", f.name), coproduct_independence(&e)? == Some(true)));
    }
    Ok(c)
}

fn smash_products() -> Result<Checks> {
    let mut c = Checks::new();
    let e = ext("s3_a3")?;
    let base = TBase::new(&e)?;
    for (label, m) in [("regular", regular_module(&e.a)), ("2-dim irreducible", s3_standard_module())] {
        let ctx = AModuleCtx::new(&e, &m)?;
        let iso = psi_iso(&e, &base, &ctx)?;
        for axiom in ["inverse_after_forward", "forward_after_inverse", "multiplicative", "unital"] {
            let ok = iso.report.check(axiom).is_some_and(|a| a.passed);
            c.push((format!("{label}: Ψ {axiom}"), ok));
        }
        c.push((
            format!("{label}: dim T⋉𝓔 = dim End_A(A⊗_B M) = {}", iso.end_n.dim()),
            iso.smash.algebra.dim() == iso.end_n.dim(),
        ));
        let inv = invariants_e(&e, &base, &m)?;
        c.push((format!("{label}: invariants = End_A M"), inv.lambda_reading == inv.end_a));
    }
    Ok(c)
}

fn stability() -> Result<Checks> {
    let mut c = Checks::new();
    let e = ext("s3_a3")?;
    let base = TBase::new(&e)?;
    for (label, m) in [("regular", regular_module(&e.a)), ("2-dim irreducible", s3_standard_module())] {
        let ctx = AModuleCtx::new(&e, &m)?;
        let st = stability_iso(&e, &base, &ctx)?;
        for axiom in ["bijective", "b_linear", "colinear"] {
            c.push((format!("{label}: stability {axiom}"), st.report.check(axiom).is_some_and(|a| a.passed)));
        }
        let co = comodule_structure_e(&e, &base, &m)?;
        c.push((format!("{label}: Δ_E comodule algebra"), co.report.passed()));
        c.push((format!("{label}: dim coinvariants = dim 𝓔"), co.coinvariants.dim() == co.image_of_e.dim()));
        c.push((format!("{label}: 𝓔 ⊆ coinvariants"), co.image_of_e.is_subspace_of(&co.coinvariants)));
        c.push((format!("{label}: coinvariants ⊆ 𝓔"), co.coinvariants.is_subspace_of(&co.image_of_e)));
    }
    Ok(c)
}

fn azumaya() -> Result<Checks> {
    let e = ext("azumaya_m2")?;
    let qb = azumaya_quasibase(&e)?;
    Ok(vec![
        ("M₂ diagonally in M₂×M₂ is D2".into(), both_sides(&e)? == (true, true)),
        ("constructive quasibase verifies".into(), verify_quasibase(&e, &qb)?),
    ])
}

fn coalgebra_suite() -> Result<Checks> {
    let mut c = Checks::new();
    let h = sweedler_h4();
    let inclusion = Matrix::from_i64(4, 2, &[1, 0, 0, 1, 0, 0, 0, 0]);
    let (free, basis) = free_module_check(&h.algebra, &inclusion)?;
    c.push(("H₄ free over ℚ[g] of rank 2".into(), free && basis.len() == 2));
    let maps = cogalois_maps(&h4_over_group_part())?;
    for axiom in ["can_bijective", "can_prime_bijective", "can_prime_is_can_after_twist"] {
        c.push((format!("H₄: {axiom}"), maps.report.check(axiom).is_some_and(|a| a.passed)));
    }
    let g = coalgebra_fixture("h4_quotient").expect("fixture");
    let ctx = CoD2Ctx::new(&g)?;
    for side in [Side::Left, Side::Right] {
        let (ok, qb) = cod2_check(&g, side)?;
        let dualized = qb.is_some_and(|q| ctx.verify(&q));
        let (direct, dq) = ctx.direct(side)?;
        let direct_ok = dq.is_some_and(|q| ctx.verify(&q));
        c.push((format!("p: H₄ → H₄/H₄K⁺ {} coD2, coquasibase verified", side.as_str()), ok && dualized && direct && direct_ok));
    }
    let d = duality_theorem_check(&g)?;
    c.push(("coD2 verdicts equal dual D2 verdicts".into(), d.sides.iter().all(|s| s.algebra_d2 == s.direct_cod2)));
    let pi = iovanov_iso(&dual_extension(&g)?, &ctx.cotensor);
    for axiom in ["well_defined", "bijective", "left_a_linear", "right_a_linear"] {
        c.push((format!("π {axiom}"), pi.report.check(axiom).is_some_and(|a| a.passed)));
    }
    let anti = anti_iso_bialgebroids(&g)?;
    for axiom in ["bijective", "anti_multiplicative", "counit", "coproduct"] {
        c.push((format!("End ^DC^D → S {axiom}"), anti.report.check(axiom).is_some_and(|a| a.passed)));
    }
    let n = coalgebra_fixture("s3_c2_dual").expect("fixture");
    let dual_d2 = both_sides(&dual_extension(&n)?)?;
    let cod2 = (cod2_check(&n, Side::Left)?.0, cod2_check(&n, Side::Right)?.0);
    c.push(("dual of S₃/⟨(12)⟩ not coD2, matching its D2 verdict".into(), cod2 == (false, false) && dual_d2 == cod2));
    c.push(("duality check agrees on the negative case".into(), duality_theorem_check(&n).is_ok()));
    Ok(c)
}

fn module_algebra_bialgebroids() -> Result<Checks> {
    let mut c = Checks::new();
    for (label, ma) in [("ℚC₂ swap", c2_swap_module_algebra()), ("H₄ on dual numbers", h4_dual_numbers_module_algebra())] {
        let aeh = build_aeh_bialgebroid(&ma)?;
        let aha = build_aha_bialgebroid(&ma)?;
        c.push((format!("{label}: A^e⋈H associative"), aeh.total.validate().is_empty()));
        c.push((format!("{label}: A⊙H⊙A associative"), aha.total.validate().is_empty()));
        c.push((format!("{label}: A^e⋈H left bialgebroid"), verify_left_bialgebroid(&aeh)?.passed()));
        c.push((format!("{label}: A⊙H⊙A left bialgebroid"), verify_left_bialgebroid(&aha)?.passed()));
        let (_, _, iso) = op_iso_aeh_aha(&ma)?;
        for a in &iso.report.checks {
            c.push((format!("{label}: isomorphism {}", a.axiom), a.passed));
        }
    }
    Ok(c)
}

fn determinism() -> Result<Checks> {
    let first = cmd_report(None)?;
    let second = cmd_report(None)?;
    Ok(vec![
        ("report --all passes".into(), first.passed()),
        (
            "two report --all runs are byte-identical".into(),
            first.without_timing().to_json() == second.without_timing().to_json(),
        ),
    ])
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Checks>); 10] = [
        ("generalized matrix ring obstructions", generalized_matrix_ring),
        ("trivial extensions", trivial_extensions),
        ("S₃ over A₃ and over ⟨(12)⟩", s3_extensions),
        ("bialgebroid axiom suites", bialgebroid_suites),
        ("smash product isomorphism and invariants", smash_products),
        ("stability and the comodule algebra End_A N", stability),
        ("Azumaya quasibase", azumaya),
        ("coalgebra suite", coalgebra_suite),
        ("module algebra bialgebroids", module_algebra_bialgebroids),
        ("report determinism", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, notes) = match run() {
            Ok(checks) => {
                let bad: Vec<String> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.clone()).collect();
                (bad.is_empty() && !checks.is_empty(), bad)
            }
            Err(e) => (false, vec![format!("error: {e}")]),
        };
        println!(
            "criterion {:>2}: {} {title} ({} ms)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            t.elapsed().as_millis()
        );
        for n in &notes {
            println!("    failed: {n}");
        }
        if !ok {
            failed += 1;
        }
    }
    println!("acceptance: {}/10 criteria passed in {} ms", 10 - failed, start.elapsed().as_millis());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
