//! Acute and obtuse cones, the norm-composed cone functions, Hales chambers
//! and the twisted Atiyah–Bott evaluator.
//!
//! Vectors of `𝔞_0 = X ⊗ ℚ` are plain `Vec<Q>` in ambient coordinates.
//! A standard parabolic is given by the simple roots of its Levi factor.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{integer_kernel, solve_rational, IntMat, LatVec};
use crate::laurent::{MLaurent, Q};
use crate::rootdata::{fold, DiagramAutomorphism, RootDatum};
use crate::spectral::UnramifiedCharacter;

pub type RVec = Vec<Q>;

pub fn rvec(x: &LatVec) -> RVec {
    x.as_slice().iter().map(|&k| Q::from_integer(k)).collect()
}

fn rdot(a: &LatVec, h: &[Q]) -> Q {
    a.as_slice().iter().zip(h).map(|(&k, x)| x * k).sum()
}

/// Standard parabolic `P = MN`, recorded by `Δ_0 ∖ Δ_P`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StdParabolic {
    levi: Vec<usize>,
}

impl StdParabolic {
    pub fn new(mut levi: Vec<usize>) -> Self {
        levi.sort_unstable();
        levi.dedup();
        StdParabolic { levi }
    }

    pub fn borel() -> Self {
        StdParabolic { levi: vec![] }
    }

    pub fn whole(rank: usize) -> Self {
        StdParabolic { levi: (0..rank).collect() }
    }

    /// `B`, `G`, `alphaK` (Levi of the K-th simple root) or a list `1,2` of
    /// 1-based simple roots in the Levi.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        let t = text.trim();
        let levi = match t {
            "B" | "b" | "borel" => vec![],
            "G" | "g" => (0..rank).collect(),
            _ => {
                let body = t.strip_prefix("alpha").unwrap_or(t);
                body.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| match s.parse::<usize>() {
                        Ok(k) if (1..=rank).contains(&k) => Ok(k - 1),
                        _ => Err(Error::Parse(format!("bad parabolic {text:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        Ok(StdParabolic::new(levi))
    }

    pub fn levi(&self) -> &[usize] {
        &self.levi
    }

    /// `Δ_P`: simple roots outside the Levi.
    pub fn delta(&self, rank: usize) -> Vec<usize> {
        (0..rank).filter(|i| !self.levi.contains(i)).collect()
    }

    pub fn contains(&self, q: &StdParabolic) -> bool {
        q.levi.iter().all(|i| self.levi.contains(i))
    }

    pub fn is_whole(&self, rank: usize) -> bool {
        self.levi.len() == rank
    }
}

impl fmt::Display for StdParabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.levi.is_empty() {
            return write!(f, "B");
        }
        let s: Vec<String> = self.levi.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "M{{{}}}", s.join(","))
    }
}

pub struct ConeContext {
    datum: Arc<RootDatum>,
    theta: DiagramAutomorphism,
    a_g: Vec<LatVec>,
    /// `ϖ_α`: dual to the simple coroots, vanishing on `𝔞_G`.
    fund: Vec<RVec>,
    norm: IntMat,
}

impl ConeContext {
    pub fn new(datum: Arc<RootDatum>, theta: DiagramAutomorphism) -> Result<Self> {
        let n = datum.dim();
        let rank = datum.rank();
        let mut rows: Vec<Vec<i64>> = (0..rank).map(|i| datum.simple_root(i).as_slice().to_vec()).collect();
        rows.resize(n, vec![0; n]);
        let a_g = integer_kernel(&IntMat::from_rows(&rows));
        let mut cols: Vec<LatVec> = (0..rank).map(|i| datum.simple_coroot(i)).collect();
        cols.extend(a_g.iter().copied());
        if cols.len() != n {
            return Err(Error::Integrity("coroots and 𝔞_G do not span 𝔞_0".into()));
        }
        // rows of the system are the basis vectors: y · b_k = δ
        let sys: Vec<RVec> = cols.iter().map(rvec).collect();
        let fund = (0..rank)
            .map(|i| {
                let b: RVec = (0..n).map(|k| if k == i { Q::one() } else { Q::zero() }).collect();
                solve_rational(&sys, &b).ok_or_else(|| Error::Integrity("singular coroot system".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut norm = IntMat::from_rows(&vec![vec![0; n]; n]);
        for k in 0..theta.r() {
            norm = norm.add(&theta.power(k));
        }
        Ok(ConeContext { datum, theta, a_g, fund, norm })
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn theta(&self) -> &DiagramAutomorphism {
        &self.theta
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn a_g(&self) -> &[LatVec] {
        &self.a_g
    }

    pub fn fundamental_weight(&self, i: usize) -> &RVec {
        &self.fund[i]
    }

    /// `Σ_{i<r} θ^i` as a matrix.
    pub fn norm_matrix(&self) -> &IntMat {
        &self.norm
    }

    pub fn all_parabolics(&self) -> Vec<StdParabolic> {
        let rank = self.rank();
        (0u32..1 << rank)
            .map(|m| StdParabolic::new((0..rank).filter(|i| m >> i & 1 == 1).collect()))
            .collect()
    }

    pub fn is_theta_stable(&self, p: &StdParabolic) -> bool {
        p.levi.iter().all(|&i| p.levi.contains(&self.theta.perm()[i]))
    }

    /// Standard parabolics defined over `F`.
    pub fn theta_stable_parabolics(&self) -> Vec<StdParabolic> {
        self.all_parabolics().into_iter().filter(|p| self.is_theta_stable(p)).collect()
    }

    /// `a_P − a_G` counted on the `F`-side: θ-orbits in `Δ_P`.
    pub fn relative_corank(&self, p: &StdParabolic) -> usize {
        let delta = p.delta(self.rank());
        self.theta.simple_orbits().iter().filter(|o| o.iter().any(|i| delta.contains(i))).count()
    }

    fn apply_weyl(&self, w: usize, h: &[Q]) -> RVec {
        let m = self.datum.weyl().matrix(w);
        let n = h.len();
        (0..n).map(|i| (0..n).map(|j| h[j] * m.get(i, j)).sum()).collect()
    }

    /// Projection `𝔞_0 → 𝔞_M` by `W_M`-averaging.
    pub fn project(&self, levi: &[usize], h: &[Q]) -> RVec {
        let ws = self.datum.weyl().parabolic(levi);
        let mut acc = vec![Q::zero(); h.len()];
        for &w in &ws {
            for (a, x) in acc.iter_mut().zip(self.apply_weyl(w, h)) {
                *a += x;
            }
        }
        let k = Q::from_integer(ws.len() as i64);
        acc.into_iter().map(|x| x / k).collect()
    }

    /// `H_M(ϖ^λ)`, with the sign chosen so that positivity means contraction on `N`.
    pub fn h_map(&self, lambda: &LatVec, levi: &[usize]) -> RVec {
        self.project(levi, &rvec(lambda))
    }

    /// Coroot coordinates `c_α(H)` with `H ≡ Σ c_α α^∨ mod 𝔞_G`.
    pub fn coroot_coordinates(&self, h: &[Q]) -> RVec {
        self.fund.iter().map(|f| f.iter().zip(h).map(|(a, b)| a * b).sum()).collect()
    }

    /// Acute cone: `α(H) > 0` for all `α ∈ Δ_P`.
    pub fn tau(&self, p: &StdParabolic, h: &[Q]) -> bool {
        p.delta(self.rank()).iter().all(|&i| rdot(&self.datum.simple_root(i), h).is_positive())
    }

    /// Obtuse cone: `c_α(H) > 0` for all `α ∈ Δ_P`.
    pub fn tau_hat(&self, p: &StdParabolic, h: &[Q]) -> bool {
        let c = self.coroot_coordinates(h);
        p.delta(self.rank()).iter().all(|&i| c[i].is_positive())
    }

    /// `τ^P_Q(H)` evaluated on the projection of `H` to `𝔞_Q`.
    pub fn tau_relative(&self, q: &StdParabolic, p: &StdParabolic, h: &[Q]) -> bool {
        let hq = self.project(q.levi(), h);
        p.levi()
            .iter()
            .filter(|i| !q.levi.contains(i))
            .all(|&i| rdot(&self.datum.simple_root(i), &hq).is_positive())
    }

    pub fn norm_cochar(&self, lambda: &LatVec) -> LatVec {
        self.norm.apply(lambda)
    }

    fn require_stable(&self, p: &StdParabolic) -> Result<()> {
        if self.is_theta_stable(p) {
            Ok(())
        } else {
            Err(Error::NotThetaStable(format!("parabolic {p}")))
        }
    }

    pub fn chi_n(&self, lambda: &LatVec, p: &StdParabolic) -> Result<bool> {
        self.require_stable(p)?;
        Ok(self.tau(p, &self.h_map(&self.norm_cochar(lambda), p.levi())))
    }

    pub fn chi_hat_n(&self, lambda: &LatVec, p: &StdParabolic) -> Result<bool> {
        self.require_stable(p)?;
        Ok(self.tau_hat(p, &self.h_map(&self.norm_cochar(lambda), p.levi())))
    }

    /// Eigenvalue test on `Lie N`: `|α(ϖ^{Nλ})| < 1` for every `α ∈ Δ_P`.
    pub fn contracts_on_n(&self, lambda: &LatVec, p: &StdParabolic) -> bool {
        let nl = self.norm_cochar(lambda);
        p.delta(self.rank()).iter().all(|&i| self.datum.simple_root(i).dot(&nl) > 0)
    }

    /// `Σ_{P ⊇ Q} (−1)^{a_P − a_G} τ̂^G_P(H) τ^P_Q(H)`.
    pub fn arthur_sum(&self, q: &StdParabolic, h: &[Q]) -> i64 {
        let rank = self.rank();
        self.all_parabolics()
            .iter()
            .filter(|p| p.contains(q))
            .filter(|p| self.tau_relative(q, p, h) && self.tau_hat(p, h))
            .map(|p| if p.delta(rank).len() % 2 == 0 { 1 } else { -1 })
            .sum()
    }
}

/// Tally of the alternating-sum identity over random lattice points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArthurTally {
    pub points: usize,
    pub evaluations: usize,
    pub violations: Vec<(StdParabolic, LatVec, i64)>,
}

impl ConeContext {
    /// Evaluates the identity for every `Q` at `samples` seeded points in `[-bound, bound]^n`.
    pub fn arthur_sweep(&self, samples: usize, seed: u64, bound: i64) -> ArthurTally {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.datum.dim();
        let ps = self.all_parabolics();
        let rank = self.rank();
        let mut tally = ArthurTally { points: samples, evaluations: 0, violations: vec![] };
        for _ in 0..samples {
            let x = LatVec::from_slice(&(0..n).map(|_| rng.gen_range(-bound..=bound)).collect::<Vec<_>>());
            let h = rvec(&x);
            for q in &ps {
                let expect = i64::from(q.is_whole(rank));
                let got = self.arthur_sum(q, &h);
                tally.evaluations += 1;
                if got != expect {
                    tally.violations.push((q.clone(), x, got));
                }
            }
        }
        tally
    }
}

/// A wall functional of the chamber arrangement, as a primitive integer covector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wall(pub LatVec);

fn primitive(c: &[Q]) -> Option<LatVec> {
    let den = c.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = c.iter().map(|x| (x * den).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return None;
    }
    let sign = if ints.iter().find(|&&x| x != 0).copied().unwrap_or(1) < 0 { -1 } else { 1 };
    Some(LatVec::from_slice(&ints.iter().map(|x| sign * x / g).collect::<Vec<_>>()))
}

#[derive(Clone, Debug)]
pub struct Chamber {
    pub representative: LatVec,
    pub signs: Vec<i8>,
    /// For each θ-stable parabolic, `w ↦ χ̂_N(w·μ)` over `W`.
    pub patterns: BTreeMap<StdParabolic, Vec<bool>>,
    samples: Vec<LatVec>,
}

impl Chamber {
    pub fn samples(&self) -> &[LatVec] {
        &self.samples
    }
}

#[derive(Clone, Debug)]
pub struct ChamberDecomposition {
    pub walls: Vec<Wall>,
    pub chambers: Vec<Chamber>,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstancyReport {
    pub chambers: usize,
    pub points: usize,
    pub evaluations: usize,
    pub violations: usize,
}

fn half(d: &LatVec) -> u8 {
    if d[1] > 0 || (d[1] == 0 && d[0] > 0) {
        0
    } else {
        1
    }
}

fn angle_cmp(a: &LatVec, b: &LatVec) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| (b[0] * a[1]).cmp(&(a[0] * b[1])))
}

impl ConeContext {
    /// Root hyperplanes and every `W`-translate of the obtuse-cone walls.
    pub fn chamber_walls(&self) -> Result<Vec<Wall>> {
        let n = self.datum.dim();
        let wg = self.datum.weyl();
        let mut out = BTreeSet::new();
        for &k in self.datum.positive() {
            if let Some(p) = primitive(&rvec(&self.datum.root(k).covector)) {
                out.insert(Wall(p));
            }
        }
        for p in self.theta_stable_parabolics() {
            for i in p.delta(self.rank()) {
                let f = &self.fund[i];
                for w in wg.elements() {
                    let nw = self.norm.mul(wg.matrix(w));
                    let cov: RVec = (0..n).map(|j| (0..n).map(|a| f[a] * nw.get(a, j)).sum()).collect();
                    if let Some(c) = primitive(&cov) {
                        out.insert(Wall(c));
                    }
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    fn pattern(&self, x: &LatVec) -> Result<BTreeMap<StdParabolic, Vec<bool>>> {
        let wg = self.datum.weyl();
        self.theta_stable_parabolics()
            .into_iter()
            .map(|p| {
                let row = wg.elements().map(|w| self.chi_hat_n(&wg.apply(w, x), &p)).collect::<Result<Vec<_>>>()?;
                Ok((p, row))
            })
            .collect()
    }

    fn signs(walls: &[Wall], x: &LatVec) -> Vec<i8> {
        walls.iter().map(|w| w.0.dot(x).signum() as i8).collect()
    }

    /// Open chambers. Exact when `dim 𝔞_0 ≤ 2`, otherwise found by seeded sampling.
    pub fn hales_chambers(&self, per_chamber: usize, seed: u64) -> Result<ChamberDecomposition> {
        let walls = self.chamber_walls()?;
        let n = self.datum.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut raw: Vec<(LatVec, Vec<LatVec>)> = Vec::new();
        let exact = n <= 2;
        match n {
            1 => {
                for s in [1i64, -1] {
                    let pts = (0..per_chamber).map(|_| LatVec::from_slice(&[s * rng.gen_range(1..=1000)])).collect();
                    raw.push((LatVec::from_slice(&[s]), pts));
                }
            }
            2 => {
                let mut rays: Vec<LatVec> = Vec::new();
                for w in &walls {
                    let d = LatVec::from_slice(&[-w.0[1], w.0[0]]);
                    rays.push(d);
                    rays.push(-d);
                }
                rays.sort_by(angle_cmp);
                let k = rays.len();
                for i in 0..k {
                    let (a, b) = (rays[i], rays[(i + 1) % k]);
                    let (rep, inner) = if k == 2 {
                        // single line: the side is fixed by the normal
                        let nrm = LatVec::from_slice(&[a[1], -a[0]]);
                        (nrm, nrm)
                    } else {
                        (a + b, LatVec::zero(2))
                    };
                    let pts = (0..per_chamber)
                        .map(|_| {
                            if k == 2 {
                                inner.scale(rng.gen_range(1..=1000)) + a.scale(rng.gen_range(-1000..=1000))
                            } else {
                                a.scale(rng.gen_range(1..=1000)) + b.scale(rng.gen_range(1..=1000))
                            }
                        })
                        .collect();
                    raw.push((rep, pts));
                }
            }
            _ => {
                let mut seen: BTreeMap<Vec<i8>, usize> = BTreeMap::new();
                let draws = 4000 * walls.len().max(1);
                for _ in 0..draws {
                    let x = LatVec::from_slice(&(0..n).map(|_| rng.gen_range(-1000..=1000)).collect::<Vec<_>>());
                    let s = Self::signs(&walls, &x);
                    if s.contains(&0) {
                        continue;
                    }
                    match seen.get(&s) {
                        Some(&i) => {
                            if raw[i].1.len() < per_chamber {
                                raw[i].1.push(x);
                            }
                        }
                        None => {
                            seen.insert(s, raw.len());
                            raw.push((x, vec![]));
                        }
                    }
                }
            }
        }
        let chambers = raw
            .into_iter()
            .map(|(rep, samples)| {
                let signs = Self::signs(&walls, &rep);
                if signs.contains(&0) {
                    return Err(Error::Integrity(format!("chamber representative {rep} lies on a wall")));
                }
                Ok(Chamber { patterns: self.pattern(&rep)?, representative: rep, signs, samples })
            })
            .collect::<Result<Vec<_>>>()?;
        let distinct: BTreeSet<&Vec<i8>> = chambers.iter().map(|c| &c.signs).collect();
        if distinct.len() != chambers.len() {
            return Err(Error::Integrity("two chambers share a sign vector".into()));
        }
        Ok(ChamberDecomposition { walls, chambers, exact })
    }

    /// Checks that every sample has its chamber's sign vector and χ̂ pattern.
    pub fn chamber_constancy(&self, dec: &ChamberDecomposition) -> Result<ConstancyReport> {
        let mut rep = ConstancyReport { chambers: dec.chambers.len(), points: 0, evaluations: 0, violations: 0 };
        for c in &dec.chambers {
            for x in &c.samples {
                rep.points += 1;
                if Self::signs(&dec.walls, x) != c.signs {
                    rep.violations += 1;
                    continue;
                }
                let pat = self.pattern(x)?;
                for (p, row) in &pat {
                    rep.evaluations += row.len();
                    rep.violations += row.iter().zip(&c.patterns[p]).filter(|(a, b)| a != b).count();
                }
            }
        }
        Ok(rep)
    }

    /// `W'(P) = {w : χ̂_N(ϖ^{wμ}) = 1}` for `μ` in the chamber.
    pub fn wprime_set(&self, p: &StdParabolic, chamber: &Chamber) -> Result<Vec<usize>> {
        let row = chamber.patterns.get(p).ok_or_else(|| Error::NotThetaStable(format!("parabolic {p}")))?;
        Ok(row.iter().enumerate().filter(|(_, &b)| b).map(|(w, _)| w).collect())
    }

    /// Chamber containing a regular point, if any.
    pub fn locate<'a>(&self, dec: &'a ChamberDecomposition, x: &LatVec) -> Option<&'a Chamber> {
        let s = Self::signs(&dec.walls, x);
        dec.chambers.iter().find(|c| c.signs == s)
    }
}

/// `μ ↦ Σ_{λ ∈ Wμ} χ̂_N(ϖ^λ)(^ηξ)(ϖ^λ)`.
#[derive(Clone, Debug)]
pub struct CompactTraceFunctional {
    pub parabolic: StdParabolic,
    pub xi: UnramifiedCharacter,
    pub eta: usize,
}

impl ConeContext {
    pub fn compact_trace(&self, f: &CompactTraceFunctional, mu: &LatVec) -> Result<MLaurent> {
        if !self.datum.is_dominant(mu) {
            return Err(Error::Invalid(format!("{mu} is not dominant")));
        }
        let eta_xi = f.xi.conjugate(&self.datum, f.eta)?;
        let mut out = MLaurent::zero();
        for l in self.datum.weyl_orbit(mu) {
            if self.chi_hat_n(&l, &f.parabolic)? {
                out += &eta_xi.eval(&l)?;
            }
        }
        Ok(out)
    }
}

/// One fixed point of `tθ` on the flag variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointTerm {
    pub w: usize,
    /// `w^{-1}ν`.
    pub point: LatVec,
    /// Exponent of `v` in the denominator `|det(1 − d(tθ))|`.
    pub denominator_v: i32,
    pub value: MLaurent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtiyahBott {
    pub terms: Vec<FixedPointTerm>,
    pub value: MLaurent,
}

impl ConeContext {
    /// `W^θ` found by commuting matrices: `θ M_w = M_w θ`.
    pub fn fixed_points_by_matrix(&self) -> Vec<usize> {
        let wg = self.datum.weyl();
        let t = self.theta.matrix();
        wg.elements().filter(|&w| t.mul(wg.matrix(w)) == wg.matrix(w).mul(t)).collect()
    }

    /// `W^θ` found from the action on group elements: `w^{-1}θ(w) = e`.
    pub fn fixed_points_by_action(&self) -> Vec<usize> {
        let wg = self.datum.weyl();
        wg.elements().filter(|&w| wg.mul(wg.inv(w), self.theta.on_weyl(w)) == wg.identity()).collect()
    }

    /// Negative roots grouped into θ-orbits.
    pub fn negative_root_orbits(&self) -> Result<Vec<Vec<usize>>> {
        let roots = self.datum.roots();
        let t = self.theta.matrix();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for k in 0..roots.len() {
            if roots[k].is_positive() || seen.contains(&k) {
                continue;
            }
            let mut orbit = vec![];
            let mut j = k;
            while seen.insert(j) {
                orbit.push(j);
                j = self
                    .datum
                    .root_by_covector(&t.pull_back(&roots[j].covector))
                    .ok_or_else(|| Error::Integrity("θ does not permute the roots".into()))?;
            }
            out.push(orbit);
        }
        Ok(out)
    }

    pub fn is_theta_regular(&self, nu: &LatVec) -> bool {
        let n = self.norm_cochar(nu);
        self.datum.roots().iter().all(|r| r.covector.dot(&n) != 0)
    }

    /// Twisted Atiyah–Bott sum at the torus point `ϖ^ν`.
    pub fn atiyah_bott(&self, xi: &UnramifiedCharacter, nu: &LatVec) -> Result<AtiyahBott> {
        if !self.is_theta_regular(nu) {
            return Err(Error::Invalid(format!("{nu} is not θ-regular")));
        }
        let by_matrix = self.fixed_points_by_matrix();
        let by_action = self.fixed_points_by_action();
        if by_matrix != by_action {
            return Err(Error::Integrity("fixed-point criteria disagree".into()));
        }
        let wg = self.datum.weyl();
        let r = self.theta.r() as i32;
        let orbits = self.negative_root_orbits()?;
        let two_rho = self.datum.two_rho();
        let mut terms = Vec::new();
        let mut value = MLaurent::zero();
        for w in by_action {
            let point = wg.apply(wg.inv(w), nu);
            let mut den = 0i32;
            for o in &orbits {
                let e: i64 = o.iter().map(|&k| self.datum.root(k).covector.dot(&point)).sum();
                match e.cmp(&0) {
                    Ordering::Less => den -= 2 * r * e as i32,
                    Ordering::Greater => {}
                    Ordering::Equal => return Err(Error::Invalid(format!("{nu} has a unimodular orbit eigenvalue"))),
                }
            }
            let delta = -r * two_rho.dot(&point) as i32;
            let t = xi.eval(&point)?.mul_monomial(Q::one(), &v_exps(delta - den));
            value += &t;
            terms.push(FixedPointTerm { w, point, denominator_v: den, value: t });
        }
        Ok(AtiyahBott { terms, value })
    }
}

fn v_exps(k: i32) -> crate::laurent::Exps {
    let mut e = [0; crate::laurent::NVARS];
    e[0] = k;
    e
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryReport {
    pub characters: usize,
    pub evaluations: usize,
    pub max_deviation: f64,
    pub worst: Option<(Vec<Complex64>, LatVec)>,
}

impl ConeContext {
    /// Integer basis of `{ν : Nν = 0}`.
    pub fn norm_kernel(&self) -> Vec<LatVec> {
        integer_kernel(&self.norm)
    }

    /// Random θ-fixed numeric character `λ ↦ exp(z'(λ))`.
    pub fn random_theta_fixed_character(&self, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        let n = self.datum.dim();
        let z: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)))
            .collect();
        let ord = self.theta.order();
        (0..n)
            .map(|i| {
                let mut acc = Complex64::zero();
                for k in 0..ord {
                    let img = self.theta.power(k).apply(&LatVec::unit(n, i));
                    acc += img.as_slice().iter().zip(&z).map(|(&c, zz)| zz * c as f64).sum::<Complex64>();
                }
                (acc / ord as f64).exp()
            })
            .collect()
    }

    /// `|ξ(ϖ^ν)| = 1` and `ξ(ϖ^ν) = ξ_u(ϖ^ν)` for θ-fixed `ξ` and `Nν = 0`.
    pub fn unitary_part_invariance(&self, characters: usize, per_character: usize, seed: u64) -> Result<UnitaryReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kernel = self.norm_kernel();
        let n = self.datum.dim();
        let mut rep = UnitaryReport { characters, evaluations: 0, max_deviation: 0.0, worst: None };
        for _ in 0..characters {
            let coords = self.random_theta_fixed_character(&mut rng);
            let xi = UnramifiedCharacter::numeric(coords.clone(), 2.0)?;
            let xi_u = UnramifiedCharacter::numeric(coords.iter().map(|z| z / z.norm()).collect(), 2.0)?;
            for s in 0..per_character.max(1) {
                let nu = if s == 0 || kernel.is_empty() {
                    LatVec::zero(n)
                } else {
                    kernel.iter().fold(LatVec::zero(n), |acc, b| acc + b.scale(rng.gen_range(-3..=3)))
                };
                if !self.norm_cochar(&nu).is_zero() {
                    return Err(Error::Integrity(format!("{nu} has nonzero norm")));
                }
                let a = xi.eval_numeric(&nu)?;
                let b = xi_u.eval_numeric(&nu)?;
                let dev = (a.norm() - 1.0).abs().max((a - b).norm());
                rep.evaluations += 1;
                if dev > rep.max_deviation {
                    rep.max_deviation = dev;
                    rep.worst = Some((coords.clone(), nu));
                }
            }
        }
        Ok(rep)
    }
}

/// `W^θ` as recorded by the folding.
pub fn relative_weyl_order(datum: &RootDatum, theta: &DiagramAutomorphism) -> Result<usize> {
    Ok(fold(datum, theta)?.relative_weyl().len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::build_root_datum;

    fn ctx(tag: &str, theta: &str, r: usize) -> ConeContext {
        let d = build_root_datum(tag).unwrap();
        let t = DiagramAutomorphism::parse(&d, theta, r).unwrap();
        ConeContext::new(Arc::new(d), t).unwrap()
    }

    #[test]
    fn a2_two_term_average() {
        let c = ctx("A2", "id", 1);
        let a1 = c.datum().simple_coroot(0);
        let s1a1 = c.datum().weyl().apply(c.datum().weyl().gen(0), &a1);
        let want: RVec = rvec(&(a1 + s1a1)).into_iter().map(|x| x / 2).collect();
        assert_eq!(c.h_map(&a1, &[0]), want);
    }

    #[test]
    fn rank_one_cones() {
        let c = ctx("A1", "id", 1);
        let h = rvec(&c.datum().simple_coroot(0));
        assert!(c.tau(&StdParabolic::borel(), &h));
        assert!(c.tau_hat(&StdParabolic::borel(), &h));
        assert!(!c.tau(&StdParabolic::borel(), &rvec(&c.datum().zero())));
        assert!(c.tau(&StdParabolic::whole(1), &rvec(&c.datum().zero())));
    }
}
