//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use parahoric::affine_weyl::Parahoric;
use parahoric::cli::{run_suite, RunConfig, Session, Suite, VerificationReport};
use parahoric::cones::{rvec, ConeContext, StdParabolic};
use parahoric::hecke::CentralElement;
use parahoric::laurent::{MLaurent, Q};
use parahoric::lattice::LatVec;
use parahoric::rootdata::{build_root_datum, DiagramAutomorphism};
use parahoric::spectral::{central_scalar, UnramifiedCharacter};

type Outcome = Result<String, String>;

const SPLIT: [&str; 10] = ["A1", "PGL2", "GL2", "A2", "B2", "C2", "G2", "GL3", "A3", "B3"];
const TWISTED: [(&str, &str, usize); 4] = [("A2", "flip", 2), ("A3", "flip", 2), ("GL3", "flip", 2), ("A2", "flip", 4)];

fn session(tag: &str, theta: &str, r: usize, tweak: impl FnOnce(&mut RunConfig)) -> Session {
    let mut cfg = RunConfig { type_tag: tag.into(), theta: theta.into(), r, timing: true, ..Default::default() };
    tweak(&mut cfg);
    Session::new(cfg).expect("session")
}

/// Requires every named check to be present and passing; returns total evaluations.
fn require(rep: &VerificationReport, names: &[&str]) -> Result<(usize, u128), String> {
    let mut n = 0;
    let mut ms = 0;
    for name in names {
        let c = rep.checks.iter().find(|c| c.name == *name).ok_or_else(|| format!("{}: check {name} missing", rep.config.echo()))?;
        if !c.passed {
            return Err(format!("{} [{}]: {}", name, rep.config.echo(), c.counterexample.clone().unwrap_or_default()));
        }
        n += c.evaluations;
        ms += c.millis.unwrap_or(0);
    }
    Ok((n, ms))
}

fn suite(s: &Session, which: Suite) -> Result<VerificationReport, String> {
    run_suite(which, s).map_err(|e| format!("{}: {e}", s.cfg.echo()))
}

fn criterion_1() -> Outcome {
    let mut evals = 0;
    let mut ms = 0;
    for tag in ["A1", "A2", "C2", "G2"] {
        let s = session(tag, "id", 1, |c| c.orbit_cutoff = 3);
        let rep = suite(&s, Suite::Bernstein)?;
        let (n, t) = require(&rep, &["bernstein-centrality", "bernstein-injectivity"])?;
        evals += n;
        ms += t;
    }
    if ms >= 300_000 {
        return Err(format!("centrality and injectivity took {ms} ms, over the five minute budget"));
    }
    Ok(format!("{evals} exact checks over A1, A2, C2, G2 in {:.1} s", ms as f64 / 1000.0))
}

fn criterion_2() -> Outcome {
    let mut evals = 0;
    for tag in ["A1", "A2", "C2", "G2"] {
        let s = session(tag, "id", 1, |c| c.orbit_cutoff = 3);
        evals += require(&suite(&s, Suite::Bernstein)?, &["scalar-action"])?.0;
    }
    // hand value for A1: z_{(1)} acts by s + s⁻¹ at every J
    let s = session("A1", "id", 1, |_| {});
    let alg = s.algebra().map_err(|e| e.to_string())?;
    let z = CentralElement::orbit_sum(s.datum(), &LatVec::from_slice(&[1]));
    let mut want = MLaurent::s_pow(1, 1);
    want += &MLaurent::s_pow(1, -1);
    for j in Parahoric::all(1) {
        let got = central_scalar(&alg, &z, &UnramifiedCharacter::generic(1), j).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("A1, J = {}: {got} instead of s + s⁻¹", j.label()));
        }
        evals += 1;
    }
    Ok(format!("{evals} symbolic scalar comparisons, zero tolerance"))
}

fn criterion_3() -> Outcome {
    let mut evals = 0;
    for tag in ["A1", "A2", "C2", "G2"] {
        let s = session(tag, "id", 1, |c| c.orbit_cutoff = 3);
        evals += require(&suite(&s, Suite::Satake)?, &["change-of-parahoric", "satake-scalar"])?.0;
    }
    Ok(format!("{evals} diagram evaluations along I ⊆ J ⊆ K"))
}

fn criterion_4() -> Outcome {
    let mut evals = 0;
    let diagrams = ["homomorphism", "spectral-characterization", "change-of-parahoric-diagram", "constant-term-diagram", "w-conjugation-diagram"];
    for (tag, r) in [("A1", 2), ("A1", 3), ("A2", 2), ("A2", 3), ("C2", 2), ("C2", 3), ("GL2", 2)] {
        let s = session(tag, "id", r, |_| {});
        let rep = suite(&s, Suite::Basechange)?;
        evals += require(&rep, &["split-base-change"])?.0;
        evals += require(&rep, &diagrams)?.0;
    }
    let s = session("A2", "flip", 2, |_| {});
    evals += require(&suite(&s, Suite::Basechange)?, &diagrams)?.0;
    // hand value: split A1, b(z_{(1)}) = z_{(r)}
    for r in [2usize, 3] {
        let s = session("A1", "id", r, |_| {});
        let ctx = s.base_change().map_err(|e| e.to_string())?;
        let bc = ctx
            .base_change(&CentralElement::orbit_sum(s.datum(), &LatVec::from_slice(&[1])), Parahoric::IWAHORI)
            .map_err(|e| e.to_string())?;
        let want = CentralElement::orbit_sum(s.datum(), &LatVec::from_slice(&[r as i64]));
        if bc != want {
            return Err(format!("A1, r = {r}: b(z_1) is not z_{r}"));
        }
        evals += 1;
    }
    Ok(format!("{evals} exact base-change evaluations, split r ∈ {{2,3}} and A2 flip"))
}

fn criterion_5() -> Outcome {
    let mut evals = 0;
    for tag in ["A1", "PGL2", "GL2", "A2", "B2", "C2", "G2", "GL3", "A3", "B3", "C3"] {
        let s = session(tag, "id", 1, |c| c.length_cutoff = 6);
        evals += require(&suite(&s, Suite::DescentCosets)?, &["coset-bijection", "v-lemma-trichotomy"])?.0;
    }
    for (tag, theta, r) in [("A2", "flip", 2), ("A3", "flip", 2), ("GL3", "flip", 2)] {
        let s = session(tag, theta, r, |c| c.length_cutoff = 6);
        evals += require(&suite(&s, Suite::DescentCosets)?, &["coset-bijection", "theta-fixed-representatives", "v-lemma-trichotomy"])?.0;
    }
    let s = session("C2", "id", 1, |c| c.length_cutoff = 6);
    evals += require(&suite(&s, Suite::DescentCosets)?, &["sp4-counterexample"])?.0;
    Ok(format!("{evals} coset, fixed-representative and trichotomy checks; Sp(4) counterexample reproduced"))
}

fn criterion_6() -> Outcome {
    let mut points = 0;
    let all: Vec<(&str, &str, usize)> = SPLIT.iter().map(|t| (*t, "id", 1)).chain(std::iter::once(("C3", "id", 1))).chain(TWISTED).collect();
    for (tag, theta, r) in all {
        let d = std::sync::Arc::new(build_root_datum(tag).map_err(|e| e.to_string())?);
        let th = DiagramAutomorphism::parse(&d, theta, r).map_err(|e| e.to_string())?;
        let ctx = ConeContext::new(d, th).map_err(|e| e.to_string())?;
        let tally = ctx.arthur_sweep(10_000, 1, 20);
        if let Some((q, h, v)) = tally.violations.first() {
            return Err(format!("{tag}: Q = {q}, H = {h}, sum = {v}"));
        }
        points += tally.points;
    }
    // rank one by hand: ϖ(H) = α(H)/⟨α, α^∨⟩, sum over Q = B is [α(H) > 0] − [ϖ(H) > 0]
    for tag in ["A1", "PGL2", "GL2"] {
        let d = std::sync::Arc::new(build_root_datum(tag).map_err(|e| e.to_string())?);
        let th = DiagramAutomorphism::parse(&d, "id", 1).map_err(|e| e.to_string())?;
        let ctx = ConeContext::new(d.clone(), th).map_err(|e| e.to_string())?;
        let alpha = d.simple_root(0);
        let pairing = alpha.dot(&d.simple_coroot(0));
        for a in -30i64..=30 {
            for b in -3i64..=3 {
                let mut x = vec![b; d.dim()];
                x[0] = a;
                let x = LatVec::from_slice(&x);
                let h = rvec(&x);
                let ah = Q::from_integer(alpha.dot(&x));
                let tau = ah > Q::from_integer(0);
                let tau_hat = ah / pairing > Q::from_integer(0);
                let hand_b = i64::from(tau) - i64::from(tau_hat);
                if ctx.tau(&StdParabolic::borel(), &h) != tau || ctx.tau_hat(&StdParabolic::borel(), &h) != tau_hat {
                    return Err(format!("{tag}: cone at {x}"));
                }
                if ctx.arthur_sum(&StdParabolic::borel(), &h) != hand_b || hand_b != 0 || ctx.arthur_sum(&StdParabolic::whole(1), &h) != 1 {
                    return Err(format!("{tag}: rank-one closed form at {x}"));
                }
            }
        }
    }
    Ok(format!("{points} seeded points across {} (type, θ) pairs, zero violations; rank-one closed form exact", SPLIT.len() + 1 + TWISTED.len()))
}

/// Counts sign vectors of the walls on a fine circle of directions.
fn sampled_chamber_count(walls: &[LatVec], dim: usize) -> usize {
    let dirs: Vec<LatVec> = if dim == 1 {
        vec![LatVec::from_slice(&[1]), LatVec::from_slice(&[-1])]
    } else {
        (0..20_000)
            .map(|k| {
                let t = (k as f64 + 0.5) * std::f64::consts::TAU / 20_000.0;
                LatVec::from_slice(&[(t.cos() * 1e6).round() as i64, (t.sin() * 1e6).round() as i64])
            })
            .collect()
    };
    let mut seen = BTreeSet::new();
    for x in dirs {
        let s: Vec<i64> = walls.iter().map(|w| w.dot(&x).signum()).collect();
        if !s.contains(&0) {
            seen.insert(s);
        }
    }
    seen.len()
}

fn criterion_7() -> Outcome {
    let mut summary = Vec::new();
    let mut evals = 0;
    let cases = [("A1", "id", 1), ("PGL2", "id", 1), ("GL2", "id", 1), ("A2", "id", 1), ("B2", "id", 1), ("C2", "id", 1), ("G2", "id", 1), ("A2", "flip", 2)];
    for (tag, theta, r) in cases {
        let d = std::sync::Arc::new(build_root_datum(tag).map_err(|e| e.to_string())?);
        let th = DiagramAutomorphism::parse(&d, theta, r).map_err(|e| e.to_string())?;
        let ctx = ConeContext::new(d.clone(), th).map_err(|e| e.to_string())?;
        let dec = ctx.hales_chambers(100, 1).map_err(|e| e.to_string())?;
        if !dec.exact {
            return Err(format!("{tag}: enumeration was not exact"));
        }
        let walls: Vec<LatVec> = dec.walls.iter().map(|w| w.0).collect();
        let oracle = sampled_chamber_count(&walls, d.dim());
        if oracle != dec.chambers.len() {
            return Err(format!("{tag} {theta}: {} chambers enumerated, {oracle} by sampling directions", dec.chambers.len()));
        }
        let rep = ctx.chamber_constancy(&dec).map_err(|e| e.to_string())?;
        if rep.violations > 0 || dec.chambers.iter().any(|c| c.samples().len() < 100) {
            return Err(format!("{tag} {theta}: {} violations", rep.violations));
        }
        evals += rep.evaluations;
        let wg = d.weyl();
        for c in &dec.chambers {
            for p in ctx.theta_stable_parabolics() {
                let set = ctx.wprime_set(&p, c).map_err(|e| e.to_string())?;
                for x in c.samples() {
                    let direct: Vec<usize> =
                        wg.elements().filter(|&w| ctx.chi_hat_n(&wg.apply(w, x), &p).unwrap_or(false)).collect();
                    if direct != set {
                        return Err(format!("{tag}: W'({p}) differs at {x}"));
                    }
                    evals += 1;
                }
            }
        }
        summary.push(format!("{tag}{} {}", if theta == "id" { String::new() } else { format!("/{theta}") }, dec.chambers.len()));
    }
    Ok(format!("chambers {}; {evals} evaluations, zero violations", summary.join(", ")))
}

fn criterion_8() -> Outcome {
    let mut pairs = 0;
    let all: Vec<(&str, &str, usize)> = SPLIT.iter().map(|t| (*t, "id", 1)).chain(std::iter::once(("C3", "id", 1))).chain(TWISTED).collect();
    for (tag, theta, r) in all {
        let s = session(tag, theta, r, |c| c.samples = Some(50));
        let rep = suite(&s, Suite::AtiyahBott)?;
        let mut names = vec!["fixed-point-count", "class-function"];
        if theta == "id" && s.datum().rank() == 1 {
            names.push("rank-one-two-term");
        }
        require(&rep, &names)?;
        // brute force: θ-fixed elements of W
        let wg = s.datum().weyl();
        let fixed = wg.elements().filter(|&w| s.theta().on_weyl(w) == w).count();
        let ctx = ConeContext::new(s.datum().clone(), s.theta().clone()).map_err(|e| e.to_string())?;
        if ctx.fixed_points_by_matrix().len() != fixed {
            return Err(format!("{tag} {theta}: {} fixed points, {fixed} θ-fixed Weyl elements", ctx.fixed_points_by_matrix().len()));
        }
        pairs += 1;
    }
    Ok(format!("{pairs} (type, θ) pairs: fixed points, W^θ invariance and rank-one hand formula"))
}

fn criterion_9() -> Outcome {
    let mut evals = 0;
    let mut worst: f64 = 0.0;
    for (tag, theta, r) in TWISTED.into_iter().chain([("GL2", "id", 2), ("A1", "id", 1)]) {
        let d = std::sync::Arc::new(build_root_datum(tag).map_err(|e| e.to_string())?);
        let th = DiagramAutomorphism::parse(&d, theta, r).map_err(|e| e.to_string())?;
        let ctx = ConeContext::new(d, th).map_err(|e| e.to_string())?;
        if theta != "id" && ctx.norm_kernel().is_empty() {
            return Err(format!("{tag} {theta}: norm kernel unexpectedly trivial"));
        }
        let rep = ctx.unitary_part_invariance(1000, 5, 1).map_err(|e| e.to_string())?;
        if rep.max_deviation.is_nan() || rep.max_deviation > 1e-10 {
            return Err(format!("{tag} {theta}: deviation {:e} at {:?}", rep.max_deviation, rep.worst));
        }
        evals += rep.evaluations;
        worst = worst.max(rep.max_deviation);
    }
    Ok(format!("{evals} evaluations over 10³ seeded characters per type, max deviation {worst:.1e}"))
}

fn run_cli(args: &[&str], cache: Option<&std::path::Path>) -> Result<(i32, Vec<u8>), String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_parahoric"));
    cmd.args(args).env_remove("PARAHORIC_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.arg("--cache-dir").arg(dir);
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cache = dir.path().join("cache");
    let runs: [&[&str]; 4] = [
        &["verify", "hecke", "--type", "A2", "--format", "json"],
        &["verify", "bernstein", "--type", "C2", "--orbit-cutoff", "2"],
        &["verify", "cones", "--type", "A2", "--samples", "500", "--seed", "7", "--format", "csv"],
        &["compute", "zmu", "--type", "G2", "--mu", "1,0", "--J", "K"],
    ];
    let mut bytes = 0;
    for args in runs {
        let (c0, plain) = run_cli(args, None)?;
        let (c1, cold) = run_cli(args, Some(&cache))?;
        let (c2, warm) = run_cli(args, Some(&cache))?;
        let (c3, again) = run_cli(args, None)?;
        if [c0, c1, c2, c3] != [0; 4] {
            return Err(format!("{}: exit codes {:?}", args.join(" "), [c0, c1, c2, c3]));
        }
        if cold != warm || plain != cold || again != plain {
            return Err(format!("{}: output differs between runs", args.join(" ")));
        }
        bytes += plain.len();
    }
    let (_, stat) = run_cli(&["cache", "stat"], Some(&cache))?;
    let stat = String::from_utf8_lossy(&stat);
    let entries: usize = stat.lines().next().and_then(|l| l.strip_prefix("entries: ")).and_then(|n| n.parse().ok()).unwrap_or(0);
    if entries == 0 {
        return Err("the cold runs left no cache records".into());
    }
    Ok(format!("{bytes} bytes identical across no-cache, cold and warm runs; {entries} cached products"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("Bernstein centrality and injectivity", criterion_1),
        ("scalar action equals closed-form orbit sum", criterion_2),
        ("Satake and change-of-parahoric compatibility", criterion_3),
        ("base change: split formula, spectral characterization, diagrams", criterion_4),
        ("descent combinatorics and the Sp(4) counterexample", criterion_5),
        ("Arthur's combinatorial identity", criterion_6),
        ("Hales chambers and constancy of χ̂_N", criterion_7),
        ("twisted Atiyah–Bott evaluator", criterion_8),
        ("unitary-part invariance", criterion_9),
        ("CLI determinism and cache transparency", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("PASS  criterion {:>2}: {title} ({note}; {secs:.1} s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {:>2}: {title} ({why}; {secs:.1} s)", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
