use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use clap::ValueEnum;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CheckResult, Session, VerificationReport};
use crate::affine_weyl::{AlcovePoint, Parahoric};
use crate::cones::{rvec, CompactTraceFunctional, ConeContext, StdParabolic};
use crate::error::{Error, Result};
use crate::hecke::CentralElement;
use crate::lattice::{integer_kernel, solve_rational, IntMat, LatVec};
use crate::laurent::{LaurentScalar, Q};
use crate::rootdata::{build_root_datum, fold};
use crate::spectral::{central_scalar, PrincipalSeriesModel, UnramifiedCharacter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Weyl,
    Hecke,
    Bernstein,
    Satake,
    Basechange,
    DescentCosets,
    Cones,
    AtiyahBott,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Weyl => "weyl",
            Suite::Hecke => "hecke",
            Suite::Bernstein => "bernstein",
            Suite::Satake => "satake",
            Suite::Basechange => "basechange",
            Suite::DescentCosets => "descent-cosets",
            Suite::Cones => "cones",
            Suite::AtiyahBott => "atiyah-bott",
            Suite::All => "all",
        }
    }

    pub const EACH: [Suite; 8] = [
        Suite::Weyl,
        Suite::Hecke,
        Suite::Bernstein,
        Suite::Satake,
        Suite::Basechange,
        Suite::DescentCosets,
        Suite::Cones,
        Suite::AtiyahBott,
    ];
}

pub fn run_suite(suite: Suite, s: &Session) -> Result<VerificationReport> {
    let checks = match suite {
        Suite::All => {
            let mut all = Vec::new();
            for each in Suite::EACH {
                for mut c in run_checks(each, s)? {
                    c.name = format!("{}/{}", each.name(), c.name);
                    all.push(c);
                }
            }
            all
        }
        one => run_checks(one, s)?,
    };
    Ok(VerificationReport { suite: suite.name().into(), config: s.cfg.clone(), checks, millis: None })
}

fn run_checks(suite: Suite, s: &Session) -> Result<Vec<CheckResult>> {
    match suite {
        Suite::Weyl => weyl(s),
        Suite::Hecke => hecke(s),
        Suite::Bernstein => bernstein(s),
        Suite::Satake => satake(s),
        Suite::Basechange => basechange(s),
        Suite::DescentCosets => descent(s),
        Suite::Cones => cones(s),
        Suite::AtiyahBott => atiyah_bott(s),
        Suite::All => unreachable!(),
    }
}

/// Collects failures; integrity errors count as failures, anything else aborts.
struct Tally {
    n: usize,
    bad: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { n: 0, bad: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.n += 1;
        if !ok {
            self.bad.push(what());
        }
    }

    fn attempt(&mut self, r: Result<bool>, what: impl FnOnce() -> String) -> Result<()> {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e @ (Error::Integrity(_) | Error::Arithmetic(_))) => {
                self.n += 1;
                self.bad.push(format!("{} ({e})", what()));
            }
            Err(e) => return Err(e),
        }
        Ok(())
    }

    fn finish(self, name: &str, statement: &str) -> CheckResult {
        CheckResult::from_failures(name, statement, self.n, &self.bad)
    }
}

fn timed(s: &Session, f: impl FnOnce() -> Result<CheckResult>) -> Result<CheckResult> {
    let t = Instant::now();
    let mut c = f()?;
    if s.cfg.timing {
        c.millis = Some(t.elapsed().as_millis());
    }
    Ok(c)
}

fn weyl(s: &Session) -> Result<Vec<CheckResult>> {
    let g = s.group()?;
    let d = s.datum().clone();
    let wg = d.weyl();
    let ball = g.ball(s.cfg.length_cutoff);
    let mut out = Vec::new();
    out.push(timed(s, || {
        let gens: Vec<usize> = (0..wg.rank()).map(|i| wg.gen(i)).collect();
        let n = wg.generated(&gens).len();
        let mut t = Tally::new();
        t.check(n == wg.order(), || format!("closure has {n} elements, table has {}", wg.order()));
        Ok(t.finish("weyl-closure", "simple reflections generate the whole finite Weyl group").with_detail(format!("|W| = {}", wg.order())))
    })?);
    out.push(timed(s, || {
        let mut t = Tally::new();
        for x in &ball {
            let (word, om) = g.reduced_word(x);
            t.check(word.len() == g.length(x) && g.from_word(&word, &om) == *x, || g.word_record(x));
        }
        Ok(t.finish("reduced-words", "reduced words have length ℓ(x) and multiply back to x"))
    })?);
    out.push(timed(s, || {
        let mut t = Tally::new();
        for x in &ball {
            t.check(g.length(&g.inv(x)) == g.length(x), || g.word_record(x));
            for j in 0..g.n_simple() {
                let l = g.length(&g.mul(&g.simple(j), x));
                t.check(l.abs_diff(g.length(x)) == 1, || format!("s{j}·{}", g.word_record(x)));
            }
        }
        Ok(t.finish("length-parity", "ℓ(x⁻¹) = ℓ(x) and ℓ(sx) = ℓ(x) ± 1"))
    })?);
    out.push(timed(s, || {
        let verts = g.alcove_vertices();
        let mut t = Tally::new();
        for j in s.parahorics()? {
            let pg = g.parahoric_group(j)?;
            let fin = g.parahoric_finite_part(j)?;
            t.check(pg.len() == fin.len(), || format!("J = {}: {} elements, image {}", j.label(), pg.len(), fin.len()));
            let set: HashSet<_> = pg.iter().copied().collect();
            for a in &pg {
                for b in &pg {
                    t.check(set.contains(&g.mul(a, b)), || format!("J = {}: not closed", j.label()));
                }
            }
            let facet: Vec<&AlcovePoint> = verts.iter().enumerate().filter(|(i, _)| !j.contains(*i)).map(|(_, v)| v).collect();
            let k = facet.len() as i64;
            let dim = d.dim();
            let bary = AlcovePoint {
                coords: (0..dim).map(|c| facet.iter().map(|p| p.coords[c]).sum::<Q>() / k).collect(),
            };
            for x in &pg {
                t.check(g.fixes_facet(x, &bary), || format!("J = {}: {} moves its facet", j.label(), g.word_record(x)));
            }
        }
        Ok(t.finish("parahoric-subgroups", "W̃_J is a finite group, isomorphic to its image in W, fixing its facet"))
    })?);
    Ok(out)
}

fn hecke(s: &Session) -> Result<Vec<CheckResult>> {
    let a = s.algebra()?;
    let g = a.group().clone();
    let d = s.datum().clone();
    let mut out = Vec::new();
    out.push(timed(s, || {
        let mut t = Tally::new();
        for j in 0..g.n_simple() {
            let ts = a.basis(&g.simple(j));
            let q = a.q_s(j);
            let mut rhs = ts.scale(&(&q - &LaurentScalar::one()));
            rhs.add_assign(&a.one().scale(&q));
            t.check(a.multiply(&ts, &ts)? == rhs, || format!("s{j}"));
        }
        Ok(t.finish("quadratic-relation", "T_s² = (q_s − 1)T_s + q_s"))
    })?);
    out.push(timed(s, || {
        let small = g.ball(s.cfg.length_cutoff.min(2));
        let mut t = Tally::new();
        for x in &small {
            for y in &small {
                let xy = a.multiply(&a.basis(x), &a.basis(y))?;
                for z in &small {
                    let l = a.multiply(&xy, &a.basis(z))?;
                    let r = a.multiply(&a.basis(x), &a.multiply(&a.basis(y), &a.basis(z))?)?;
                    t.check(l == r, || format!("{} {} {}", g.word_record(x), g.word_record(y), g.word_record(z)));
                }
            }
        }
        Ok(t.finish("associativity", "(T_x T_y) T_z = T_x (T_y T_z) on short elements"))
    })?);
    out.push(timed(s, || {
        let lams: BTreeSet<LatVec> = d.dominant_within(1).iter().flat_map(|m| d.weyl_orbit(m)).collect();
        let mut t = Tally::new();
        for l in &lams {
            for m in &lams {
                let prod = a.multiply(&a.theta(l), &a.theta(m))?;
                t.check(prod == *a.theta(&(*l + *m)), || format!("{l} {m}"));
            }
        }
        Ok(t.finish("theta-multiplicative", "θ_λ θ_μ = θ_{λ+μ}"))
    })?);
    out.push(timed(s, || {
        let mut t = Tally::new();
        for j in s.parahorics()? {
            let ind = a.indicator(j)?;
            let sq = a.right_mul_indicator(&ind, j)?;
            t.check(sq == ind.scale(&a.poincare(j)?), || j.label());
        }
        Ok(t.finish("indicator-square", "𝕀_J · 𝕀_J = P_J(q) 𝕀_J"))
    })?);
    out.push(timed(s, || {
        let mut t = Tally::new();
        for mu in d.dominant_within(s.cfg.orbit_cutoff.min(2)) {
            for j in s.parahorics()? {
                let (_, h) = a.bernstein_function(&mu, j)?;
                t.check(a.is_bi_invariant(&h, j), || format!("μ = {mu}, J = {}", j.label()));
            }
        }
        Ok(t.finish("bi-invariance", "z_μ · 𝕀_J is J-bi-invariant"))
    })?);
    out.push(timed(s, || {
        let mut t = Tally::new();
        let d = a.group().datum().clone();
        let wg = d.weyl();
        for mu in d.dominant_within(s.cfg.orbit_cutoff.min(2)) {
            let z = a.realize(&CentralElement::orbit_sum(&d, &mu));
            let dual = -wg.apply(wg.longest(), &mu);
            let want = a.realize(&CentralElement::orbit_sum(&d, &dual));
            t.check(a.iota(&z) == want, || format!("μ = {mu}"));
        }
        Ok(t.finish("anti-involution", "ι(T_x) = T_{x^{-1}} sends z_μ to z_{−w_0 μ}"))
    })?);
    Ok(out)
}

fn bernstein(s: &Session) -> Result<Vec<CheckResult>> {
    let a = s.algebra()?;
    let d = s.datum().clone();
    let mus = d.dominant_within(s.cfg.orbit_cutoff);
    let js = s.parahorics()?;
    let mut out = Vec::new();
    out.push(timed(s, || {
        let mut t = Tally::new();
        for mu in &mus {
            let h = a.realize(&CentralElement::orbit_sum(&d, mu));
            let defect = a.centrality_defect(&h);
            t.check(defect.is_none(), || format!("μ = {mu} fails against {}", defect.clone().unwrap_or_default()));
        }
        Ok(t.finish("bernstein-centrality", "z_μ commutes with every generator of the Iwahori–Hecke algebra")
            .with_detail(format!("{} orbits", mus.len())))
    })?);
    out.push(timed(s, || {
        let mut t = Tally::new();
        for &j in &js {
            let hs = mus.iter().map(|mu| Ok(a.bernstein_function(mu, j)?.1)).collect::<Result<Vec<_>>>()?;
            let r = a.generic_rank(&hs);
            t.check(r == mus.len(), || format!("J = {}: rank {r} of {}", j.label(), mus.len()));
        }
        Ok(t.finish("bernstein-injectivity", "z ↦ z · 𝕀_J is injective on the span of the z_μ"))
    })?);
    out.push(timed(s, || {
        let model = PrincipalSeriesModel::new(a.clone(), UnramifiedCharacter::generic(d.dim()))?;
        let mut t = Tally::new();
        let mut dims = Tally::new();
        for &j in &js {
            let cells = a.group().pgj_representatives(&[], j)?.len();
            for mu in &mus {
                let z = CentralElement::orbit_sum(&d, mu);
                match model.scalar_action(&z, j) {
                    Ok(sa) => {
                        t.check(sa.matches(), || format!("μ = {mu}, J = {}: {} vs {}", j.label(), sa.scalar, sa.closed_form));
                        dims.check(sa.image_dim == cells, || format!("J = {}: image {} vs {cells}", j.label(), sa.image_dim));
                    }
                    Err(e @ Error::Integrity(_)) => t.check(false, || format!("μ = {mu}, J = {}: {e}", j.label())),
                    Err(e) => return Err(e),
                }
            }
        }
        t.n += dims.n;
        t.bad.extend(dims.bad);
        Ok(t.finish("scalar-action", "z_μ · 𝕀_J acts on i(χ)^J by the orbit sum of χ°, image of dimension |W/W̄_J|"))
    })?);
    out.push(timed(s, || {
        let model = PrincipalSeriesModel::new(a.clone(), UnramifiedCharacter::generic(d.dim()))?;
        let rank = d.rank();
        let targets: Vec<Parahoric> = if s.cfg.j.is_some() { js.clone() } else { vec![Parahoric::IWAHORI, Parahoric::hyperspecial(rank)] };
        let mut t = Tally::new();
        for &j in &targets {
            for mu in mus.iter().filter(|m| m.l1() <= 2) {
                let (z, h) = a.bernstein_function(mu, j)?;
                t.attempt(model.bernstein_inverse(&h, j).map(|back| back == z), || format!("μ = {mu}, J = {}", j.label()))?;
            }
        }
        Ok(t.finish("bernstein-inverse", "the scalar of z_μ · 𝕀_J recovers z_μ"))
    })?);
    Ok(out)
}

fn satake(s: &Session) -> Result<Vec<CheckResult>> {
    let a = s.algebra()?;
    let d = s.datum().clone();
    let rank = d.rank();
    let k = Parahoric::hyperspecial(rank);
    let mus = d.dominant_within(s.cfg.orbit_cutoff);
    let inside: Vec<Parahoric> = s.parahorics()?.into_iter().filter(|j| j.is_subset(&k)).collect();
    let mut out = Vec::new();
    out.push(timed(s, || {
        let mut t = Tally::new();
        for mu in &mus {
            let (_, hi) = a.bernstein_function(mu, Parahoric::IWAHORI)?;
            let (_, hk) = a.bernstein_function(mu, k)?;
            for &j in &inside {
                let (_, hj) = a.bernstein_function(mu, j)?;
                t.attempt(a.change_parahoric(&hi, Parahoric::IWAHORI, j).map(|x| x == hj), || format!("μ = {mu}: I → {}", j.label()))?;
                t.attempt(a.change_parahoric(&hj, j, k).map(|x| x == hk), || format!("μ = {mu}: {} → K", j.label()))?;
            }
        }
        Ok(t.finish("change-of-parahoric", "(z 𝕀_{J1}) 𝕀_{J2} / P_{J1} = z 𝕀_{J2} along I ⊆ J ⊆ K"))
    })?);
    out.push(timed(s, || {
        let chi = UnramifiedCharacter::generic(d.dim());
        let mut t = Tally::new();
        for mu in &mus {
            let z = CentralElement::orbit_sum(&d, mu);
            let closed = chi.eval_relem_inverse(&z)?;
            for j in [Parahoric::IWAHORI, k] {
                t.attempt(central_scalar(&a, &z, &chi, j).map(|c| c == closed), || format!("μ = {mu}, J = {}", j.label()))?;
            }
        }
        Ok(t.finish("satake-scalar", "the spherical scalar of z_μ equals its Iwahori scalar and the Satake orbit sum"))
    })?);
    Ok(out)
}

fn stable_levis(s: &Session) -> Vec<Vec<usize>> {
    let rank = s.datum().rank();
    (0u32..1 << rank)
        .map(|m| (0..rank).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|l| l.iter().all(|&i| l.contains(&s.theta().perm()[i])))
        .collect()
}

fn basechange(s: &Session) -> Result<Vec<CheckResult>> {
    let ctx = s.base_change()?;
    let d = s.datum().clone();
    let rank = d.rank();
    let mus = d.dominant_within(s.cfg.orbit_cutoff.min(2));
    let stable: Vec<Parahoric> = s.parahorics()?.into_iter().filter(|j| j.is_theta_stable(s.theta())).collect();
    let light: Vec<Parahoric> = if s.cfg.j.is_some() {
        stable.clone()
    } else {
        stable.iter().copied().filter(|j| j.is_iwahori() || *j == Parahoric::hyperspecial(rank)).collect()
    };
    let check = |t: &mut Tally, r: Result<crate::basechange::Check>, what: String| -> Result<()> {
        match r {
            Ok(Ok(())) => t.check(true, String::new),
            Ok(Err(m)) => t.check(false, || format!("{what}: {} [{} vs {}]", m.what, m.left, m.right)),
            Err(e @ Error::Integrity(_)) => t.check(false, || format!("{what}: {e}")),
            Err(e) => return Err(e),
        }
        Ok(())
    };
    let mut out = Vec::new();
    if ctx.is_split() {
        out.push(timed(s, || {
            let mut t = Tally::new();
            for mu in &mus {
                for &j in &light {
                    check(&mut t, ctx.verify_split_formula(mu, j), format!("μ = {mu}, J = {}", j.label()))?;
                }
            }
            Ok(t.finish("split-base-change", "b(z_μ) = z_{rμ}"))
        })?);
    }
    out.push(timed(s, || {
        let mut t = Tally::new();
        for m in &mus {
            for n in &mus {
                check(&mut t, ctx.verify_homomorphism(m, n), format!("{m} {n}"))?;
            }
        }
        Ok(t.finish("homomorphism", "b(z_μ z_ν) = b(z_μ) b(z_ν)"))
    })?);
    out.push(timed(s, || {
        let t_f = ctx.generic_f_character();
        let mut t = Tally::new();
        for mu in &mus {
            let z = CentralElement::orbit_sum(&d, mu);
            for &j in &stable {
                check(&mut t, ctx.verify_spectral_characterization(&z, &t_f, j), format!("μ = {mu}, J = {}", j.label()))?;
            }
        }
        Ok(t.finish("spectral-characterization", "ch_t(bφ) = ch_{Nt}(φ), Fourier transforms related by C"))
    })?);
    out.push(timed(s, || {
        let mut t = Tally::new();
        for mu in &mus {
            let z = CentralElement::orbit_sum(&d, mu);
            for &j in stable.iter().filter(|j| !j.is_iwahori()) {
                check(&mut t, ctx.verify_bc_change_parahoric(&z, Parahoric::IWAHORI, j), format!("μ = {mu}, J = {}", j.label()))?;
            }
        }
        Ok(t.finish("change-of-parahoric-diagram", "base change commutes with I ⊆ J"))
    })?);
    out.push(timed(s, || {
        let mut t = Tally::new();
        for mu in &mus {
            let z = CentralElement::orbit_sum(&d, mu);
            for levi in stable_levis(s) {
                check(&mut t, ctx.verify_bc_constant_term(&z, &levi), format!("μ = {mu}, M = {levi:?}"))?;
            }
        }
        Ok(t.finish("constant-term-diagram", "base change commutes with constant terms to θ-stable Levis"))
    })?);
    out.push(timed(s, || {
        let mut t = Tally::new();
        for mu in mus.iter().filter(|m| m.l1() <= 1) {
            let z = CentralElement::orbit_sum(&d, mu);
            for w in ctx.f_weyl() {
                for &j in &light {
                    check(&mut t, ctx.verify_bc_w_conjugation(&z, w, j), format!("μ = {mu}, w = {}, J = {}", d.weyl().word_label(w), j.label()))?;
                }
            }
        }
        Ok(t.finish("w-conjugation-diagram", "base change commutes with conjugation by W(F)"))
    })?);
    Ok(out)
}

/// `|H\W/K|` by Burnside over `H × K` acting by `w ↦ h w k^{-1}`.
fn burnside_double_cosets(s: &Session, h: &[usize], k: &BTreeSet<usize>) -> usize {
    let wg = s.datum().weyl();
    let mut fixed = 0usize;
    for &a in h {
        for &b in k {
            let bi = wg.inv(b);
            fixed += wg.elements().filter(|&w| wg.mul(wg.mul(a, w), bi) == w).count();
        }
    }
    fixed / (h.len() * k.len())
}

fn descent(s: &Session) -> Result<Vec<CheckResult>> {
    let g = s.group()?;
    let d = s.datum().clone();
    let wg = d.weyl();
    let rank = d.rank();
    let theta = s.theta().clone();
    let all_levis: Vec<Vec<usize>> = (0u32..1 << rank).map(|m| (0..rank).filter(|i| m >> i & 1 == 1).collect()).collect();
    let mut out = Vec::new();
    out.push(timed(s, || {
        let mut t = Tally::new();
        for levi in &all_levis {
            for j in s.parahorics()? {
                let wbar = g.parahoric_finite_part(j)?;
                let reps = g.pgj_representatives(levi, j)?;
                let dc = g.double_cosets(levi, &wbar);
                let bs = burnside_double_cosets(s, &wg.parabolic(levi), &wbar);
                t.check(reps.len() == dc.len() && dc.len() == bs, || {
                    format!("M = {levi:?}, J = {}: {} reps, {} cosets, Burnside {bs}", j.label(), reps.len(), dc.len())
                });
                let mins: BTreeSet<usize> = g.min_coset_reps(levi).into_iter().collect();
                let owners: BTreeSet<usize> = reps
                    .representatives
                    .iter()
                    .map(|x| dc.iter().position(|c| c.contains(&(x.w as usize))).unwrap_or(usize::MAX))
                    .collect();
                t.check(owners.len() == dc.len() && reps.representatives.iter().all(|x| mins.contains(&(x.w as usize))), || {
                    format!("M = {levi:?}, J = {}: representatives not minimal or not distinct", j.label())
                });
            }
        }
        Ok(t.finish("coset-bijection", "W_M\\W/W̄_J has one minimal representative per P\\G/J cell"))
    })?);
    out.push(timed(s, || {
        let rel = fold(&d, &theta)?;
        let wf: BTreeSet<usize> = rel.relative_weyl().iter().copied().collect();
        let stable_js: Vec<Parahoric> = match &s.cfg.j {
            Some(_) => s.parahorics()?,
            None => std::iter::once(Parahoric::IWAHORI).chain((0..=rank).map(|k| Parahoric::from_indices(&[k]))).collect(),
        }
        .into_iter()
        .filter(|j| j.is_theta_stable(&theta))
        .collect();
        let mut t = Tally::new();
        for levi in stable_levis(s) {
            for &j in &stable_js {
                let what = || format!("M = {levi:?}, J = {}", j.label());
                match g.theta_fixed_reps(&levi, j, &theta) {
                    Ok(table) => {
                        let wbar = g.parahoric_finite_part(j)?;
                        let hf: Vec<usize> = wg.parabolic(&levi).into_iter().filter(|w| wf.contains(w)).collect();
                        let kf: BTreeSet<usize> = wbar.intersection(&wf).copied().collect();
                        let mut seen = BTreeSet::new();
                        let mut f_count = 0;
                        for &w in &wf {
                            if seen.insert(w) {
                                f_count += 1;
                                for &a in &hf {
                                    for &b in &kf {
                                        seen.insert(wg.mul(wg.mul(a, w), b));
                                    }
                                }
                            }
                        }
                        t.check(table.stable_count() == f_count, || format!("{}: {} θ-stable vs {f_count} over F", what(), table.stable_count()));
                        t.check(table.fixed_representatives().iter().all(|&w| theta.on_weyl(w) == w), what);
                    }
                    Err(e @ Error::Integrity(_)) => t.check(false, || format!("{}: {e}", what())),
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(t.finish("theta-fixed-representatives", "θ-stable double cosets have θ-fixed minimal representatives and match the F-side cosets"))
    })?);
    out.push(timed(s, || {
        let stable_js: Vec<Parahoric> = match &s.cfg.j {
            Some(_) => s.parahorics()?,
            None => std::iter::once(Parahoric::IWAHORI).chain((0..=rank).map(|k| Parahoric::from_indices(&[k]))).collect(),
        }
        .into_iter()
        .filter(|j| j.is_theta_stable(&theta))
        .collect();
        let mut t = Tally::new();
        for levi in stable_levis(s) {
            for &j in &stable_js {
                let (n, bad) = g.v_lemma_sweep(&levi, j, &theta, s.cfg.length_cutoff)?;
                t.n += n.saturating_sub(1);
                t.check(bad.is_empty(), || format!("M = {levi:?}, J = {}: {:?}", j.label(), bad.first()));
            }
        }
        Ok(t.finish("v-lemma-trichotomy", "cells of t_{−λ}τ₀w and t_ν τ θ(w) agree only when θ(w) = w, τ = τ₀, λ = −ν"))
    })?);
    if d.family() == 'C' && rank == 2 {
        out.push(timed(s, sp4_counterexample)?);
    }
    Ok(out)
}

/// Sp(4): `s_{α2}` fixes `½ω_1^∨` but not `s_{α1}(½ω_1^∨)`.
pub fn sp4_counterexample() -> Result<CheckResult> {
    let d = std::sync::Arc::new(build_root_datum("C2.sc")?);
    let g = crate::affine_weyl::AffineWeyl::new(d.clone());
    let rows: Vec<Vec<Q>> = (0..2).map(|i| rvec(&d.simple_root(i))).collect();
    let omega1 = solve_rational(&rows, &[Q::from_integer(1), Q::zero()]).ok_or_else(|| Error::Integrity("no ω_1^∨".into()))?;
    let half = AlcovePoint { coords: omega1.iter().map(|x| x / 2).collect() };
    let s1 = g.finite(d.weyl().gen(0));
    let s2 = g.finite(d.weyl().gen(1));
    let moved = g.act_point(&s1, &half);
    let mut t = Tally::new();
    t.check(d.cartan()[1][0] == -2, || "α_2 is not the long simple root".into());
    t.check(g.fixes_facet(&s2, &half), || "s_α2 does not fix ½ω_1^∨".into());
    t.check(!g.fixes_facet(&s2, &moved), || "s_α2 fixes s_α1(½ω_1^∨)".into());
    let vertex = g.alcove_vertices().into_iter().any(|v| v == half);
    t.check(vertex, || "½ω_1^∨ is not a vertex of the base alcove".into());
    Ok(t.finish("sp4-counterexample", "for Sp(4), J ∩ M ⊄ ^{s_α1}J at the vertex ½ω_1^∨"))
}

fn cones(s: &Session) -> Result<Vec<CheckResult>> {
    let ctx = ConeContext::new(s.datum().clone(), s.theta().clone())?;
    let d = s.datum().clone();
    let rank = d.rank();
    let n = d.dim();
    let samples = s.cfg.samples.unwrap_or(10_000);
    let seed = s.cfg.seed;
    let mut out = Vec::new();
    out.push(timed(s, || {
        let tally = ctx.arthur_sweep(samples, seed, 20);
        let bad: Vec<String> = tally.violations.iter().map(|(q, x, v)| format!("Q = {q}, H = {x}, sum = {v}")).collect();
        Ok(CheckResult::from_failures("arthur-identity", "Σ_{P⊇Q} (−1)^{a_P−a_G} τ̂_P τ^P_Q = δ_{Q,G}", tally.evaluations, &bad)
            .with_detail(format!("{} points, seed {seed}", tally.points)))
    })?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let points: Vec<LatVec> = (0..samples.min(2000))
        .map(|_| LatVec::from_slice(&(0..n).map(|_| rng.gen_range(-20..=20)).collect::<Vec<_>>()))
        .collect();
    if rank == 1 {
        out.push(timed(s, || {
            let mut t = Tally::new();
            let alpha = d.simple_root(0);
            for x in &points {
                let a = alpha.dot(x);
                // ϖ(H) = α(H)/2, so τ and τ̂ cut out the same half-line
                let direct = i64::from(a > 0) - i64::from(2 * a > 0);
                t.check(ctx.arthur_sum(&StdParabolic::borel(), &rvec(x)) == direct, || format!("{x}"));
                t.check(ctx.arthur_sum(&StdParabolic::whole(1), &rvec(x)) == 1, || format!("{x}"));
            }
            Ok(t.finish("arthur-rank-one", "rank one: τ(H) − τ̂(H) = 0 for Q = B, 1 for Q = G"))
        })?);
    }
    out.push(timed(s, || {
        let mut t = Tally::new();
        for x in &points {
            for p in ctx.all_parabolics() {
                let h = ctx.project(p.levi(), &rvec(x));
                t.check(!ctx.tau(&p, &h) || ctx.tau_hat(&p, &h), || format!("P = {p}, H = {x}"));
            }
        }
        Ok(t.finish("acute-in-obtuse", "on 𝔞_P, τ_P(H) = 1 implies τ̂_P(H) = 1"))
    })?);
    out.push(timed(s, || {
        let mut t = Tally::new();
        for p in ctx.theta_stable_parabolics() {
            let mut rows: Vec<Vec<i64>> =
                p.levi().iter().map(|&i| ctx.norm_matrix().pull_back(&d.simple_root(i)).as_slice().to_vec()).collect();
            rows.resize(n, vec![0; n]);
            let basis = integer_kernel(&IntMat::from_rows(&rows));
            for (k, x) in points.iter().enumerate() {
                let lam = basis.iter().enumerate().fold(LatVec::zero(n), |acc, (i, b)| acc + b.scale(x[(i + k) % n]));
                t.check(ctx.chi_n(&lam, &p)? == ctx.contracts_on_n(&lam, &p), || format!("P = {p}, λ = {lam}"));
            }
        }
        Ok(t.finish("chi-contraction", "on M-compact norms, χ_N = 1 exactly when ϖ^{Nλ} contracts Lie N"))
    })?);
    out.push(timed(s, || {
        let dec = ctx.hales_chambers(100, seed)?;
        let rep = ctx.chamber_constancy(&dec)?;
        let mut t = Tally::new();
        t.n = rep.evaluations;
        t.check(rep.violations == 0, || format!("{} violations", rep.violations));
        let whole = StdParabolic::whole(rank);
        for c in &dec.chambers {
            t.check(ctx.wprime_set(&whole, c)?.len() == d.weyl().order(), || format!("W'(G) at {}", c.representative));
        }
        Ok(t.finish("hales-chambers", "χ̂_N(w·) is constant on each chamber for every P and w")
            .with_detail(format!("{} walls, {} chambers, {}", dec.walls.len(), dec.chambers.len(), if dec.exact { "exact" } else { "sampled" })))
    })?);
    out.push(timed(s, || {
        let xi = UnramifiedCharacter::generic(n);
        let mut t = Tally::new();
        for mu in d.dominant_within(s.cfg.orbit_cutoff) {
            let whole = CompactTraceFunctional { parabolic: StdParabolic::whole(rank), xi: xi.clone(), eta: 0 };
            let full = ctx.compact_trace(&whole, &mu)?;
            t.check(full == xi.eval_relem(&CentralElement::orbit_sum(&d, &mu))?, || format!("P = G, μ = {mu}"));
            for p in ctx.theta_stable_parabolics().into_iter().filter(|p| !p.is_whole(rank)) {
                let f = CompactTraceFunctional { parabolic: p.clone(), xi: xi.clone(), eta: 0 };
                let v = ctx.compact_trace(&f, &mu)?;
                if mu.is_zero() {
                    t.check(v.is_zero(), || format!("P = {p}, μ = 0"));
                }
            }
        }
        Ok(t.finish("compact-trace", "the P = G functional is the full orbit sum and proper cones vanish at μ = 0"))
    })?);
    Ok(out)
}

fn atiyah_bott(s: &Session) -> Result<Vec<CheckResult>> {
    let ctx = ConeContext::new(s.datum().clone(), s.theta().clone())?;
    let d = s.datum().clone();
    let n = d.dim();
    let wg = d.weyl();
    let seed = s.cfg.seed;
    let mut out = Vec::new();
    let wf = fold(&d, s.theta())?.relative_weyl().to_vec();
    out.push(timed(s, || {
        let mut t = Tally::new();
        let a = ctx.fixed_points_by_matrix();
        let b = ctx.fixed_points_by_action();
        t.check(a == b, || format!("{} by matrices, {} by action", a.len(), b.len()));
        t.check(a.len() == wf.len(), || format!("{} fixed points, |W^θ| = {}", a.len(), wf.len()));
        Ok(t.finish("fixed-point-count", "tθ has |W^θ| fixed points on the flag variety").with_detail(format!("{} fixed points", a.len())))
    })?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xab);
    let mut nus = Vec::new();
    while nus.len() < 12 {
        let x = LatVec::from_slice(&(0..n).map(|_| rng.gen_range(-4..=4)).collect::<Vec<_>>());
        if ctx.is_theta_regular(&x) {
            nus.push(x);
        }
    }
    let xi = UnramifiedCharacter::generic(n);
    out.push(timed(s, || {
        let mut t = Tally::new();
        for nu in &nus {
            let base = ctx.atiyah_bott(&xi, nu)?.value;
            for &u in &wf {
                let moved = ctx.atiyah_bott(&xi, &wg.apply(u, nu))?.value;
                t.check(moved == base, || format!("ν = {nu}, u = {}", wg.word_label(u)));
            }
        }
        Ok(t.finish("class-function", "the twisted character is invariant under ν ↦ uν for u ∈ W^θ"))
    })?);
    if s.is_split() {
        out.push(timed(s, || {
            let mut t = Tally::new();
            for nu in &nus {
                let ab = ctx.atiyah_bott(&xi, nu)?;
                let ones = ab.terms.iter().filter(|x| x.denominator_v == 0).count();
                t.check(ones == 1, || format!("ν = {nu}: {ones} terms with denominator 1"));
            }
            Ok(t.finish("single-leading-term", "exactly one fixed point has denominator 1"))
        })?);
    }
    if s.is_split() && d.rank() == 1 {
        out.push(timed(s, || {
            let mut t = Tally::new();
            let alpha = d.simple_root(0);
            let r = s.cfg.r as i32;
            let sref = wg.gen(0);
            for nu in &nus {
                let a = alpha.dot(nu) as i32;
                let snu = wg.apply(sref, nu);
                // the fixed point whose negative root pairs negatively carries q^{r|a|}
                let (big, small) = if a > 0 { (*nu, snu) } else { (snu, *nu) };
                let aa = a.abs();
                let mut want = xi.eval(&big)?.mul_monomial(Q::from_integer(1), &v_exp(-3 * r * aa));
                want += &xi.eval(&small)?.mul_monomial(Q::from_integer(1), &v_exp(r * aa));
                t.check(ctx.atiyah_bott(&xi, nu)?.value == want, || format!("ν = {nu}"));
            }
            Ok(t.finish("rank-one-two-term", "rank one: δ^{1/2}ξ(ν)q^{−r|a|} + δ^{1/2}ξ(sν) with a = ⟨α, ν⟩"))
        })?);
    }
    out.push(timed(s, || {
        let count = s.cfg.samples.unwrap_or(1000);
        let rep = ctx.unitary_part_invariance(count, 5, seed)?;
        let mut c = CheckResult::pass("unitary-part", "|ξ(ϖ^ν)| = 1 for θ-fixed ξ and Nν = 0", rep.evaluations);
        if rep.max_deviation.is_nan() || rep.max_deviation > 1e-10 {
            c = CheckResult::fail("unitary-part", &c.statement, rep.evaluations, format!("{:?}", rep.worst));
        }
        Ok(c.with_detail(format!("{count} characters, seed {seed}, max deviation {:.1e}", rep.max_deviation)))
    })?);
    Ok(out)
}

fn v_exp(k: i32) -> crate::laurent::Exps {
    let mut e = [0; crate::laurent::NVARS];
    e[0] = k;
    e
}
