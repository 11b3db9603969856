//! Acceptance checks against the published examples: one PASS/FAIL line per
//! criterion. Runs without the libtest harness so the report stays ordered.

mod common;

use common::*;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::SeedableRng;
use std::process::ExitCode;
use std::thread;
use std::time::Instant;
use volint::curve::{height_integrand, CurvePoint, MeromorphicForm};
use volint::padic::PadicElement;
use volint::tropical::Q;
use volint::vologodsky::{Config, Vologodsky};

type Outcome = Result<String, String>;

/// Compares to exactly n digits; reports the first disagreement.
fn check(name: &str, got: &PadicElement, want: &PadicElement, n: i64) -> Result<(), String> {
    if agree(got, want, n) {
        Ok(())
    } else {
        Err(format!("{name}: got {} want {}", got.truncate(n), want.truncate(n)))
    }
}

fn pt(v: &Vologodsky, (x, y): (i64, i64)) -> CurvePoint {
    v.curve.point_from_ints(x, y).unwrap()
}

fn vint(v: &Vologodsky, form: &MeromorphicForm, at: &CurvePoint) -> PadicElement {
    v.integrate(form, &at.involution(), at).unwrap().value
}

fn criterion1() -> Outcome {
    let v = ex71(Config::new(6));
    let g = golden71(v.field());
    let f = v.field().clone();
    let (p, r) = (pt(&v, EX71_P), pt(&v, EX71_R));
    check("V int third(P) over [-R,R]", &vint(&v, &height_integrand(&p, &v.curve).unwrap(), &r), &g.third_p_over_r, 6)?;
    check("V int omega0 over [-R,R]", &vint(&v, &MeromorphicForm::omega(&f, 0), &r), &g.w0_r, 6)?;
    check("V int omega1 over [-P,P]", &vint(&v, &MeromorphicForm::omega(&f, 1), &p), &g.w1_p, 6)?;
    // the printed P is 6-torsion: its omega0 integral must vanish
    let t = pt(&v, EX71_P_PRINTED);
    check("V int omega0 over [-T,T]", &vint(&v, &MeromorphicForm::omega(&f, 0), &t), &f.zero(), 6)?;
    Ok("3 values agree to O(43^6) with P=(2523,114912); the printed P=(-501,33264) is 6-torsion and gives V int omega0 = O(43^6)".into())
}

fn criterion2() -> Outcome {
    let v = ex71(Config::new(6));
    let g = golden71(v.field());
    let f = v.field().clone();
    let (p, r) = (pt(&v, EX71_P), pt(&v, EX71_R));
    check("h_p(P,R)", &v.coleman_gross_hp(&p, &r).unwrap(), &g.h, 6)?;
    check("h_p(R,P)", &v.coleman_gross_hp(&r, &p).unwrap(), &g.h, 6)?;
    check("V int third(R) over [-P,P]", &vint(&v, &height_integrand(&r, &v.curve).unwrap(), &p), &g.third_r_over_p, 6)?;
    check("V int omega1 over [-R,R]", &vint(&v, &MeromorphicForm::omega(&f, 1), &r), &g.w1_r, 6)?;
    let (tp, tr) = (pt(&v, (379, 9856)), pt(&v, EX71_P_PRINTED));
    let ht = v.coleman_gross_hp(&tp, &tr).unwrap();
    check("h_p torsion pair", &ht, &g.h_torsion, 6)?;
    // away-from-p part: -2/3 Log 2 + 2 Log 5 - 2/3 Log 11
    let lg = |n: i64| f.from_int(n).log().unwrap();
    let away = lg(2).mul(&f.from_ratio(-2, 3)).add(&lg(5).mul_int(2)).add(&lg(11).mul(&f.from_ratio(-2, 3)));
    check("away-from-p constant", &away, &g.away, 6)?;
    check("global height of torsion pair", &ht.add(&away), &f.zero(), 6)?;
    Ok("h_p symmetric, pieces and torsion pair agree to O(43^6); torsion h_p + away part = O(43^6)".into())
}

fn ex72_with_reference_points(cfg: Config) -> Vologodsky {
    // fix the reference points P_e1..P_e6 of the tables
    ex72(cfg)
}

fn criterion3() -> Outcome {
    let v = ex72_with_reference_points(Config::new(32));
    let f = v.field().clone();
    let gold = golden72(&f);
    let (s, r) = ex72_points(&v);
    for i in 0..4 {
        let lf = omega_local(&f, i);
        check(&format!("BC gamma omega{i}"), &v.bc_path_integral(&lf, &s, &gamma(), &r).unwrap(), &gold[0][i], 32)?;
        check(&format!("BC gamma1 omega{i}"), &v.bc_period(&lf, &c1()).unwrap(), &gold[1][i], 32)?;
        check(&format!("BC gamma2 omega{i}"), &v.bc_period(&lf, &c2()).unwrap(), &gold[2][i], 32)?;
        let fin = v.integrate_along(&MeromorphicForm::omega(&f, i), &s, &r, &gamma()).unwrap().value;
        check(&format!("V omega{i}"), &fin, &gold[3][i], 32)?;
    }
    let locs = (v.cov.locate(&s).unwrap(), v.cov.locate(&r).unwrap());
    if (v.cov.vertex_name(locs.0).as_str(), v.cov.vertex_name(locs.1).as_str()) != ("v0-", "v0+") {
        return Err(format!("S, R located in {locs:?}"));
    }
    Ok("16 Berkovich-Coleman values and 4 finals agree to O(a^32) = O(5^8)".into())
}

fn criterion4() -> Outcome {
    let v = ex72_with_reference_points(Config::new(32));
    let f = v.field().clone();
    let (s, r) = ex72_points(&v);
    let alt1 = vec![neg(E[3]), neg(E[2])];
    let alt2 = vec![E[4], E[5]];
    for i in 0..4 {
        let form = MeromorphicForm::omega(&f, i);
        let base = v.integrate_along(&form, &s, &r, &gamma()).unwrap().value;
        for (name, path) in [("(-e4)(-e3)", &alt1), ("e5 e6", &alt2)] {
            let other = v.integrate_along(&form, &s, &r, path).unwrap().value;
            check(&format!("omega{i} along {name}"), &other, &base, 32)?;
        }
    }
    Ok("finals along e1 e2, (-e4)(-e3), e5 e6 agree to O(a^32)".into())
}

fn run_many(name: &str, count: usize, seed: u64, f: impl Fn(&mut StdRng) -> Result<(), String>) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    for k in 0..count {
        f(&mut rng).map_err(|e| format!("{name} #{k}: {e}"))?;
    }
    Ok(())
}

fn criterion5() -> Outcome {
    let parts: Vec<(&str, Box<dyn Fn() -> Result<(), String> + Send + Sync>)> = vec![
        (
            "(a) ex71",
            Box::new(|| {
                let v = ex71(Config::new(8));
                run_many("axioms ex71 v0", 50, 1, |rng| axioms_in_vertex(&v, 0, rng))
            }),
        ),
        (
            "(a) ex72",
            Box::new(|| {
                let v = ex72(Config::new(8));
                thread::scope(|sc| {
                    let hs: Vec<_> = (0..5)
                        .map(|vx| {
                            let v = &v;
                            sc.spawn(move || run_many(&format!("axioms ex72 vertex {vx}"), 50, 10 + vx as u64, |rng| axioms_in_vertex(v, vx, rng)))
                        })
                        .collect();
                    hs.into_iter().try_for_each(|h| h.join().unwrap())
                })
            }),
        ),
        ("(b)", Box::new(|| run_many("dual basis", 100, 2, |rng| dual_basis_check(&random_graph(rng))))),
        (
            "(c)",
            Box::new(|| {
                let models = reduction_models();
                run_many("pole reduction", 50, 3, |rng| {
                    let m = &models[rand::Rng::gen_range(rng, 0..models.len())];
                    reduction_identity(m, rng, 16)
                })
            }),
        ),
        ("(d)", Box::new(doubling)),
        (
            "(e)",
            Box::new(|| {
                let v = tree(8);
                if v.cov.betti() != 0 || v.cov.vertices.len() < 2 {
                    return Err("tree example is not a tree".into());
                }
                run_many("tree case", 20, 5, |rng| tree_case(&v, rng))
            }),
        ),
        (
            "(f)",
            Box::new(|| {
                let a = ex71_curve().field;
                let b = ex72_curve().field;
                run_many("log Q_43", 100, 6, |rng| log_homomorphism(&a, rng))?;
                run_many("log Q_5(a)", 100, 7, |rng| log_homomorphism(&b, rng))
            }),
        ),
    ];
    let results: Vec<(&str, Result<(), String>)> = thread::scope(|sc| {
        let hs: Vec<_> = parts
            .iter()
            .map(|(n, f)| {
                (*n, sc.spawn(move || {
                    let t = Instant::now();
                    let r = f();
                    eprintln!("  criterion 5 {n}: {:.1}s", t.elapsed().as_secs_f64());
                    r
                }))
            })
            .collect();
        hs.into_iter().map(|(n, h)| (n, h.join().unwrap_or_else(|_| Err("panicked".into())))).collect()
    });
    let failed: Vec<String> = results.iter().filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n} {e}"))).collect();
    if failed.is_empty() {
        Ok("(a) 50 forms x 6 wide opens, (b) 100 graphs, (c) 50 reductions with deg g in {1,2,3}, (d) doubled truncation, (e) 20 tree cases, (f) 2 x 100 Log pairs".into())
    } else {
        Err(failed.join("; "))
    }
}

/// Doubling the truncation lengths leaves the golden values unchanged.
fn doubling() -> Result<(), String> {
    let mut cfg = Config::new(6);
    cfg.truncation_factor = 2;
    cfg.cap = Some(2 * Config::default_cap(6, 1));
    let v = ex71(cfg);
    let g = golden71(v.field());
    let (p, r) = (pt(&v, EX71_P), pt(&v, EX71_R));
    check("doubled h_p", &v.coleman_gross_hp(&p, &r).map_err(|e| e.to_string())?, &g.h, 6)?;
    let mut cfg = Config::new(32);
    cfg.truncation_factor = 2;
    cfg.cap = Some(2 * Config::default_cap(32, 4));
    let v = ex72(cfg);
    let f = v.field().clone();
    let gold = golden72(&f);
    let (s, r) = ex72_points(&v);
    let lf = omega_local(&f, 3);
    check("doubled BC gamma omega3", &v.bc_path_integral(&lf, &s, &gamma(), &r).map_err(|e| e.to_string())?, &gold[0][3], 32)?;
    check("doubled period omega3", &v.bc_period(&lf, &c2()).map_err(|e| e.to_string())?, &gold[2][3], 32)?;
    Ok(())
}

fn criterion6() -> Outcome {
    let v = ex71(Config::new(6));
    if v.cov.betti() != 1 {
        return Err(format!("the elliptic curve has h = {}", v.cov.betti()));
    }
    let v = ex72(Config::new(8));
    let (nv, ne, h) = (v.cov.vertices.len(), v.cov.edges.len(), v.cov.betti());
    if (nv, ne, h) != (5, 6, 2) {
        return Err(format!("the genus 2 graph has {nv} vertices, {ne} edges, h = {h}"));
    }
    // orientation of e1..e6 used by the tables, and the expected eta patterns
    let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let mut graph_edges = vec![(0, 0); 6];
    for (k, &(edge, sign)) in E.iter().enumerate() {
        let ed = &v.cov.edges[edge];
        graph_edges[k] = if sign > 0 { (ed.tail, ed.head) } else { (ed.head, ed.tail) };
    }
    let g = volint::tropical::Graph::new(nv, graph_edges);
    // in that orientation both cycles traverse their four edges forwards
    let chains: Vec<Vec<Q>> = [[0usize, 1, 2, 3], [2, 3, 4, 5]]
        .iter()
        .map(|idx| (0..6).map(|i| q(i64::from(idx.contains(&i)), 1)).collect())
        .collect();
    let etas = g.dual_basis(&chains).map_err(|e| e.to_string())?;
    let want = [
        vec![q(1, 3), q(1, 3), q(1, 6), q(1, 6), q(-1, 6), q(-1, 6)],
        vec![q(-1, 6), q(-1, 6), q(1, 6), q(1, 6), q(1, 3), q(1, 3)],
    ];
    if etas != want {
        return Err(format!("eta = {etas:?}"));
    }
    Ok("elliptic curve: h = 1; genus 2 curve: 5 vertices, 6 edges, h = 2, eta_1 = (1/3,1/3,1/6,1/6,-1/6,-1/6), eta_2 = (-1/6,-1/6,1/6,1/6,1/3,1/3)".into())
}

fn main() -> ExitCode {
    let criteria: [(usize, fn() -> Outcome); 6] = [
        (1, criterion1),
        (2, criterion2),
        (3, criterion3),
        (4, criterion4),
        (5, criterion5),
        (6, criterion6),
    ];
    let mut ok = true;
    for (k, run) in criteria {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        eprintln!("  criterion {k}: {:.1}s", t.elapsed().as_secs_f64());
        match outcome {
            Ok(msg) => println!("criterion {k}: PASS  {msg}"),
            Err(msg) => {
                ok = false;
                println!("criterion {k}: FAIL  {msg}");
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
