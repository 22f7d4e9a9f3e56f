//! Acceptance suite: one PASS/FAIL line per criterion, failing at the end if
//! any criterion fails. Run with `--nocapture` to see the report.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use pbk_core::archimedean::*;
use pbk_core::cli::run_with;
use pbk_core::formula::*;
use pbk_core::numkernel::QuadratureSpec;
use pbk_core::oracle::lambda_oracle;
use pbk_core::padic::*;

type Outcome = Result<(bool, String), String>;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn loose() -> QuadratureSpec {
    QuadratureSpec::default().with_tol(1e-11, 1e-9)
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn criterion1() -> Outcome {
    let ms = [2, 3, 4, 5, 7, 9, 13];
    let r = verify_weight2_level11(&ms, 100_000, 1e-2).map_err(err)?;
    let worst = r.rows.iter().map(|row| row.abs_error).fold(0.0, f64::max);
    for row in &r.rows {
        let oracle = lambda_oracle(row.m).map_err(err)?;
        if row.lambda_oracle != oracle {
            return Ok((false, format!("oracle mismatch at m={}", row.m)));
        }
    }
    let f = GlobalTestFunction::of_level(11).map_err(err)?;
    let doubled = petersson2_geometric(&f, 1, 1, 200_000, DiagonalNormalization::Theorem).map_err(err)?;
    let shrink = r.g11_tail_majorant / doubled.tail_majorant;
    let pass = r.pass && worst <= 1e-2 && shrink >= 1.3;
    Ok((pass, format!("max |err| = {worst:.3e}, tail {:.4} -> {:.4} (factor {shrink:.3})", r.g11_tail_majorant, doubled.tail_majorant)))
}

fn criterion2() -> Outcome {
    let trivial = GlobalTestFunction::trivial();
    let mut worst_classical = 0.0f64;
    for c in 1..=50u64 {
        for m in 1..=10 {
            for n in 1..=10 {
                let h = kloosterman_generalized(&trivial, m, n, c).map_err(err)?;
                let s = kloosterman_classical(m, n, c);
                worst_classical = worst_classical.max((h.value.re() - s).abs()).max(h.value.im().abs());
            }
        }
    }
    let mut worst_factor = 0.0f64;
    let mut cases = 0;
    let mut bound_violations = 0;
    let mut scanned = 0;
    for level in [11u64, 12] {
        let f = GlobalTestFunction::of_level(level).map_err(err)?;
        let mut engine = KloostermanEngine::new(f.clone());
        let report = engine.validate_fast_path(&factorization_cases(level, 50), 1e-9).map_err(err)?;
        cases += report.cases.len();
        worst_factor = worst_factor.max(report.max_relative_error);
        if !report.pass {
            return Ok((false, format!("factorization failed at N={level}")));
        }
        for m in 1..=6i64 {
            for n in 1..=6i64 {
                let weil = KloostermanMajorant::new(&f, m, n).map_err(err)?;
                for c in 1..=(10 * level) {
                    let v = engine.exact_complex(m, n, c).map_err(err)?.norm();
                    scanned += 1;
                    let slack = 1.0 + 1e-9;
                    if v > trivial_bound(&f, c) * slack + 1e-9 || v > weil.kloosterman_bound(c) * slack + 1e-9 {
                        bound_violations += 1;
                    }
                }
            }
        }
    }
    let pass = worst_classical <= 1e-9 && worst_factor <= 1e-9 && cases >= 100 && bound_violations == 0;
    Ok((pass, format!(
        "classical gap {worst_classical:.1e}, factorization rel {worst_factor:.1e} on {cases} cases, {bound_violations} bound violations in {scanned} triples"
    )))
}

fn criterion3() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    // (a) the agreement metric is |K − I| <= 1e-6 (1 + |K|); the plain relative gap is printed too
    let mut worst_a = 0.0f64;
    let mut worst_plain = 0.0f64;
    for h in [ArchTestFunction::family2(5.0).map_err(err)?, ArchTestFunction::family1(200.0, 1.0).map_err(err)?] {
        for x in [0.5, 1.0, 5.0] {
            let k = h_minus_transform(&h, x, HMinusRoute::KForm, &spec()).map_err(err)?.value;
            let i = h_minus_transform(&h, x, HMinusRoute::IForm, &spec()).map_err(err)?.value;
            worst_a = worst_a.max((k - i).abs() / (1.0 + k.abs()));
            worst_plain = worst_plain.max((k - i).abs() / k.abs());
        }
    }
    pass &= worst_a <= 1e-6;
    notes.push(format!("(a) {worst_a:.1e} (plain rel {worst_plain:.1e})"));

    let h = ArchTestFunction::family2(3.0).map_err(err)?;
    let engine = ZagierEngine::new(&h, &loose()).map_err(err)?;
    let mut worst_b = 0.0f64;
    for t in [0.5, 1.5] {
        let p = engine.modified_zagier(t, ZagierRoute::Plane2d).map_err(err)?.value;
        let f = engine.modified_zagier(t, ZagierRoute::Fourier1d).map_err(err)?.value;
        worst_b = worst_b.max((p - f).abs());
    }
    pass &= worst_b <= 1e-4;
    notes.push(format!("(b) {worst_b:.1e}"));

    let mut worst_c = 0.0f64;
    for a in [0.05, 0.1, 0.5] {
        let hat = modified_zagier_hat(&h, a, &spec()).map_err(err)?.value;
        let hm = h_minus_transform(&h, 4.0 * PI * a, HMinusRoute::KForm, &spec()).map_err(err)?.value;
        worst_c = worst_c.max((2.0 * a * hat - hm).abs() / hm.abs());
    }
    pass &= worst_c <= 1e-8;
    notes.push(format!("(c) {worst_c:.1e}"));

    let fit = engine.prefactor_fit().map_err(err)?;
    pass &= fit.residual <= 1e-3;
    notes.push(format!("(d) C = {:.6} (π/2 = {:.6}), residual {:.1e}", fit.constant, PI / 2.0, fit.residual));

    let kernel = SelbergKernel::new(&h, &spec()).map_err(err)?;
    let mut worst_e = 0.0f64;
    for t in [0.0, 1.0, 2.0] {
        let back = kernel.forward(t, &loose()).map_err(err)?.value;
        worst_e = worst_e.max((back - h.eval(t)).abs());
    }
    pass &= worst_e <= 1e-4;
    notes.push(format!("(e) {worst_e:.1e}"));
    Ok((pass, notes.join(", ")))
}

fn criterion4() -> Outcome {
    let mut prev = f64::NEG_INFINITY;
    let mut monotone = true;
    let mut at12 = 0.0;
    for t in [1.0, 2.0, 4.0, 8.0, 12.0] {
        let v = lambda_t_discrete(&TruncationProfile::new(t).map_err(err)?, &spec()).map_err(err)?.value;
        monotone &= v >= prev && v <= 1.0 + 1e-12;
        prev = v;
        at12 = v;
    }
    let p4 = TruncationProfile::new(4.0).map_err(err)?;
    let along_t: Vec<f64> = [1.0, 2.0, 4.0]
        .iter()
        .map(|&t| lambda_t_principal(Complex64::new(t, 0.0), &p4, &loose()).map(|v| v.norm()))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let along_big_t: Vec<f64> = [3.0, 4.0, 5.0, 6.0]
        .iter()
        .map(|&big| {
            let p = TruncationProfile::new(big)?;
            lambda_t_principal(Complex64::new(1.0, 0.0), &p, &loose()).map(|v| v.norm())
        })
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let (dt, dbig) = (decreasing(&along_t), decreasing(&along_big_t));
    let pass = monotone && at12 >= 0.999 && dt && dbig;
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" ");
    Ok((pass, format!(
        "discrete monotone={monotone}, λ(12)={at12:.6}; |λ_4(t)| t=1,2,4: {} ({dt}); |λ_T(1)| T=3..6: {} ({dbig})",
        fmt(&along_t),
        fmt(&along_big_t)
    )))
}

fn criterion5() -> Outcome {
    let want = 4.0 * PI * 2.0 * (-6.0 * PI).exp();
    let first = first_cell_arch(1.0, 2.0).map_err(err)?;
    let first_q = first_cell_arch_quadrature(1.0, 2.0, &spec()).map_err(err)?.value;
    let first_ok = (first - want).abs() <= 1e-15 * want && (first_q - want).abs() <= 1e-8 * want;
    let mu = 1.0 / 121.0;
    let closed = second_cell_arch(mu, 1.0, 2.0, CellRoute::ClosedForm, &spec()).map_err(err)?.value;
    let quad = second_cell_arch(mu, 1.0, 2.0, CellRoute::Quadrature, &loose()).map_err(err)?.value;
    let rel = (quad - closed).abs() / closed.abs();
    let mut worst_ratio = 0.0f64;
    for mu in [1e-6, 1e-4, 1e-2, 1.0 / 121.0, 0.1, 0.5, 1.0] {
        let a = second_cell_abs_integral(mu, &spec()).map_err(err)?.value;
        worst_ratio = worst_ratio.max(a / mu);
    }
    let pass = first_ok && rel <= 1e-4 && worst_ratio <= PI * (1.0 + 1e-9);
    Ok((pass, format!("first cell exact={first_ok}, second cell rel {rel:.1e}, max |I|/μ = {worst_ratio:.4} (≤ π)")))
}

fn criterion6() -> Outcome {
    let f = GlobalTestFunction::of_level(11).map_err(err)?;
    let h = ArchTestFunction::family2(10.0).map_err(err)?;
    let r = parity_bound_demo(&f, &h, 1, 1100, &spec()).map_err(err)?;
    let demo_ok = r.pass && r.measured_constant <= 1e3 && r.main_term.is_finite() && r.main_term > 0.0;
    let mut ratios = Vec::new();
    for t in [5.0, 10.0, 20.0] {
        let v = f_infty_identity(&ArchTestFunction::family2(t).map_err(err)?, &spec()).map_err(err)?.value;
        ratios.push(v / (t * t));
    }
    let band_ok = ratios.iter().all(|r| (0.1..=10.0).contains(r));
    let shown = ratios.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" ");
    Ok((demo_ok && band_ok, format!(
        "C = {:.3e}, main term {:.4}; f∞(1)/T² at T=5,10,20: {shown} (band [0.1, 10]: {band_ok})",
        r.measured_constant, r.main_term
    )))
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut sink = Vec::new();
    let mut full = vec!["pbk"];
    full.extend_from_slice(args);
    let code = run_with(full, &mut out, &mut sink);
    (code, out)
}

fn criterion7() -> Outcome {
    let configs = [
        r#"{"schema_version": 1, "command": "kloosterman", "level": {"11": 1}, "m_list": [1, 2], "n_list": [1, 3], "c_max": 60}"#,
        r#"{"schema_version": 1, "command": "verify-petersson2", "m_list": [2, 3], "c_max": 20000, "tolerance": 0.05}"#,
        r#"{"schema_version": 1, "command": "bk-geometric", "c_max": 440}"#,
        r#"{"schema_version": 1, "command": "parity-demo", "c_max": 440}"#,
        r#"{"schema_version": 1, "command": "transforms"}"#,
    ];
    let mut checked = 0;
    for json in configs {
        let mut file = tempfile::NamedTempFile::new().map_err(err)?;
        file.write_all(json.as_bytes()).map_err(err)?;
        let path = file.path().to_str().ok_or("non-utf8 temp path")?.to_string();
        for format in ["csv", "json"] {
            let (c1, o1) = run_cli(&["--config", &path, "--format", format, "--threads", "1"]);
            let (c3, o3) = run_cli(&["--config", &path, "--format", format, "--threads", "3"]);
            if c1 != c3 || o1 != o3 || o1.is_empty() {
                return Ok((false, format!("{json} ({format}) differs: exit {c1} vs {c3}")));
            }
            checked += 1;
        }
    }
    Ok((true, format!("{checked} command/format pairs byte-identical at 1 and 3 threads")))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 level-11 Petersson verification", criterion1),
        ("2 Kloosterman exactness", criterion2),
        ("3 transform consistency", criterion3),
        ("4 truncation limit behaviour", criterion4),
        ("5 cell closed forms", criterion5),
        ("6 parity demo and f∞(1) scale", criterion6),
        ("7 thread-count determinism", criterion7),
    ];
    let mut failed = Vec::new();
    println!();
    for (name, check) in criteria {
        let (pass, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        println!("{} criterion {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
