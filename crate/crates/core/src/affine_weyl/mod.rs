//! The extended affine Weyl group `W̃ = X ⋊ W`, its length function, Bruhat
//! order, the length-zero subgroup Ω and parahoric subgroups `W̃_J`.
//!
//! An element `(λ, w)` acts on `X ⊗ ℚ` by `x ↦ λ + w x`. The base alcove is
//! `{0 < α(x) < 1 : α > 0}` and `s_0 = (θ̃^∨, s_θ̃)` for the highest root θ̃.

mod alcove;
mod cosets;

pub use alcove::AlcovePoint;
pub use cosets::{CosetKind, CosetTable, ThetaCosetEntry, ThetaCosetTable, TrichotomyViolation, VLemmaOutcome};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{smith_normal_form, IntMat, LatVec};
use crate::rootdata::{DiagramAutomorphism, RootDatum};

/// `(translation, finite part)`; the finite part indexes the datum's Weyl group.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffElem {
    pub t: LatVec,
    pub w: u16,
}

impl fmt::Debug for AffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{:?}·w{}", self.t, self.w)
    }
}

/// A subset `J` of the simple affine reflections, bit `j` for `s_j`
/// (bit 0 is the affine node).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Parahoric {
    mask: u8,
}

impl Parahoric {
    pub const IWAHORI: Parahoric = Parahoric { mask: 0 };

    pub fn from_indices(idx: &[usize]) -> Self {
        Parahoric { mask: idx.iter().fold(0u8, |m, &j| m | (1 << j)) }
    }

    pub fn hyperspecial(rank: usize) -> Self {
        Self::from_indices(&(1..=rank).collect::<Vec<_>>())
    }

    pub fn mask(&self) -> u8 {
        self.mask
    }

    pub fn contains(&self, j: usize) -> bool {
        self.mask & (1 << j) != 0
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..8).filter(|&j| self.contains(j)).collect()
    }

    pub fn is_subset(&self, other: &Parahoric) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn is_iwahori(&self) -> bool {
        self.mask == 0
    }

    /// All proper subsets of `{s_0, …, s_rank}`.
    pub fn all(rank: usize) -> Vec<Parahoric> {
        let full = (1u16 << (rank + 1)) - 1;
        (0..full).map(|m| Parahoric { mask: m as u8 }).collect()
    }

    pub fn image(&self, theta: &DiagramAutomorphism) -> Parahoric {
        Self::from_indices(&self.indices().iter().map(|&j| theta.on_affine_index(j)).collect::<Vec<_>>())
    }

    pub fn is_theta_stable(&self, theta: &DiagramAutomorphism) -> bool {
        self.image(theta) == *self
    }

    /// `iwahori`, `K`/`hyperspecial`, or a list such as `s0,s1` / `0,1`.
    pub fn parse(s: &str, rank: usize) -> Result<Self> {
        let t = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        let low = t.to_ascii_lowercase();
        let j = match low.as_str() {
            "" | "iwahori" | "i" | "empty" => Parahoric::IWAHORI,
            "k" | "hyperspecial" => Parahoric::hyperspecial(rank),
            _ => {
                let mut idx = Vec::new();
                for p in low.split(',') {
                    let p = p.trim().trim_start_matches('s');
                    let k: usize = p.parse().map_err(|_| Error::Parse(format!("bad parahoric {s:?}")))?;
                    if k > rank {
                        return Err(Error::InvalidParahoric(format!("s{k} is not a simple affine reflection")));
                    }
                    idx.push(k);
                }
                Parahoric::from_indices(&idx)
            }
        };
        if j.indices().len() == rank + 1 {
            return Err(Error::InvalidParahoric("J must be a proper subset of S_aff".into()));
        }
        Ok(j)
    }

    pub fn label(&self) -> String {
        if self.is_iwahori() {
            "iwahori".into()
        } else {
            self.indices().iter().map(|j| format!("s{j}")).collect::<Vec<_>>().join(",")
        }
    }
}

/// Ω ≅ X/Q^∨ with its realisation as length-zero elements.
#[derive(Clone, Debug)]
pub struct OmegaGroup {
    /// Invariant factors of X/Q^∨ (0 for a free summand), trivial ones dropped.
    pub invariants: Vec<i64>,
    /// Length-zero elements realising the generators.
    pub generators: Vec<AffElem>,
    /// All elements when Ω is finite, sorted.
    pub elements: Option<Vec<AffElem>>,
}

impl OmegaGroup {
    pub fn order(&self) -> Option<usize> {
        self.elements.as_ref().map(|e| e.len())
    }
}

pub struct AffineWeyl {
    datum: Arc<RootDatum>,
    simple: Vec<AffElem>,
    /// For each w: whether `w^{-1}β_p > 0` for the p-th positive root.
    inv_positive: Vec<Vec<bool>>,
    omega: OmegaGroup,
}

impl fmt::Debug for AffineWeyl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineWeyl({})", self.datum.label())
    }
}

impl AffineWeyl {
    pub fn new(datum: Arc<RootDatum>) -> Self {
        let wg = datum.weyl();
        let n = datum.rank();
        let hr = datum.highest_root();
        let refl = IntMat::from_columns(
            &(0..datum.dim())
                .map(|k| {
                    let e = LatVec::unit(datum.dim(), k);
                    e - hr.coroot.scale(hr.covector.dot(&e))
                })
                .collect::<Vec<_>>(),
        );
        let s_theta = wg.lookup(&refl).expect("reflection in the highest root");
        let mut simple = vec![AffElem { t: hr.coroot, w: s_theta as u16 }];
        for i in 0..n {
            simple.push(AffElem { t: datum.zero(), w: wg.gen(i) as u16 });
        }
        let inv_positive = wg
            .elements()
            .map(|w| {
                let wi = wg.inv(w);
                datum.positive().iter().map(|&k| datum.root(wg.root_image(wi, k)).is_positive()).collect()
            })
            .collect();
        let mut g = AffineWeyl {
            datum,
            simple,
            inv_positive,
            omega: OmegaGroup { invariants: vec![], generators: vec![], elements: None },
        };
        g.omega = g.compute_omega();
        g
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    /// Number of simple affine reflections (rank + 1).
    pub fn n_simple(&self) -> usize {
        self.simple.len()
    }

    pub fn simple(&self, j: usize) -> AffElem {
        self.simple[j]
    }

    pub fn identity(&self) -> AffElem {
        AffElem { t: self.datum.zero(), w: 0 }
    }

    pub fn translation(&self, lambda: &LatVec) -> AffElem {
        AffElem { t: *lambda, w: 0 }
    }

    pub fn finite(&self, w: usize) -> AffElem {
        AffElem { t: self.datum.zero(), w: w as u16 }
    }

    pub fn mul(&self, x: &AffElem, y: &AffElem) -> AffElem {
        let wg = self.datum.weyl();
        AffElem { t: x.t + wg.apply(x.w as usize, &y.t), w: wg.mul(x.w as usize, y.w as usize) as u16 }
    }

    pub fn inv(&self, x: &AffElem) -> AffElem {
        let wg = self.datum.weyl();
        let wi = wg.inv(x.w as usize);
        AffElem { t: -wg.apply(wi, &x.t), w: wi as u16 }
    }

    /// Iwahori–Matsumoto length.
    pub fn length(&self, x: &AffElem) -> usize {
        let flags = &self.inv_positive[x.w as usize];
        let mut l = 0i64;
        for (p, &k) in self.datum.positive().iter().enumerate() {
            let a = self.datum.root(k).covector.dot(&x.t);
            l += if flags[p] { a.abs() } else { (a - 1).abs() };
        }
        l as usize
    }

    pub fn is_left_descent(&self, j: usize, x: &AffElem) -> bool {
        self.length(&self.mul(&self.simple[j], x)) < self.length(x)
    }

    pub fn is_right_descent(&self, x: &AffElem, j: usize) -> bool {
        self.length(&self.mul(x, &self.simple[j])) < self.length(x)
    }

    /// Lexicographically smallest reduced word and the Ω-part:
    /// `x = s_{j1} ⋯ s_{jk} · ω`.
    pub fn reduced_word(&self, x: &AffElem) -> (Vec<usize>, AffElem) {
        let mut word = Vec::new();
        let mut y = *x;
        let mut l = self.length(&y);
        while l > 0 {
            let j = (0..self.n_simple())
                .find(|&j| self.length(&self.mul(&self.simple[j], &y)) < l)
                .expect("positive length has a left descent");
            word.push(j);
            y = self.mul(&self.simple[j], &y);
            l -= 1;
        }
        (word, y)
    }

    pub fn omega_part(&self, x: &AffElem) -> AffElem {
        self.reduced_word(x).1
    }

    pub fn from_word(&self, word: &[usize], omega: &AffElem) -> AffElem {
        let mut y = *omega;
        for &j in word.iter().rev() {
            y = self.mul(&self.simple[j], &y);
        }
        y
    }

    /// Canonical key: `(length, reduced word, Ω translation)`.
    pub fn shortlex_key(&self, x: &AffElem) -> (usize, Vec<usize>, LatVec) {
        let (w, o) = self.reduced_word(x);
        (w.len(), w, o.t)
    }

    /// Record form `j.j.j|λ` with `e` for the empty word; λ is the Ω translation.
    pub fn word_record(&self, x: &AffElem) -> String {
        let (w, o) = self.reduced_word(x);
        let ws = if w.is_empty() { "e".to_string() } else { w.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(".") };
        format!("{ws}|{}", o.t.to_csv())
    }

    pub fn parse_word_record(&self, s: &str) -> Result<AffElem> {
        let (ws, ts) = s.split_once('|').ok_or_else(|| Error::Parse(format!("bad element record {s:?}")))?;
        let t = if ts.is_empty() && self.datum.dim() == 0 {
            self.datum.zero()
        } else {
            LatVec::parse(ts).ok_or_else(|| Error::Parse(format!("bad translation {ts:?}")))?
        };
        let omega = self
            .omega_with_translation(&t)
            .ok_or_else(|| Error::Parse(format!("no length-zero element with translation {ts}")))?;
        let word: Vec<usize> = if ws == "e" {
            vec![]
        } else {
            ws.split('.')
                .map(|p| p.parse::<usize>().map_err(|_| Error::Parse(format!("bad word {ws:?}"))))
                .collect::<Result<_>>()?
        };
        if word.iter().any(|&j| j >= self.n_simple()) {
            return Err(Error::Parse(format!("bad word {ws:?}")));
        }
        Ok(self.from_word(&word, &omega))
    }

    /// Human-readable form such as `s0s1` or `s1·ω(1,0)`.
    pub fn label(&self, x: &AffElem) -> String {
        let (w, o) = self.reduced_word(x);
        let ws: String = w.iter().map(|j| format!("s{j}")).collect();
        match (ws.is_empty(), o.t.is_zero() && o.w == 0) {
            (true, true) => "e".into(),
            (false, true) => ws,
            (true, false) => format!("ω{}", o.t),
            (false, false) => format!("{ws}·ω{}", o.t),
        }
    }

    fn omega_with_translation(&self, t: &LatVec) -> Option<AffElem> {
        let wg = self.datum.weyl();
        wg.elements()
            .map(|w| AffElem { t: *t, w: w as u16 })
            .find(|x| self.length(x) == 0)
    }

    /// Bruhat order. Elements with different Ω-parts are incomparable.
    pub fn bruhat_leq(&self, x: &AffElem, y: &AffElem) -> bool {
        if self.omega_part(x) != self.omega_part(y) {
            return false;
        }
        self.bruhat_same_coset(*x, *y)
    }

    fn bruhat_same_coset(&self, mut x: AffElem, mut y: AffElem) -> bool {
        loop {
            if x == y {
                return true;
            }
            let ly = self.length(&y);
            let lx = self.length(&x);
            if lx >= ly {
                return false;
            }
            let j = (0..self.n_simple()).find(|&j| self.is_left_descent(j, &y)).unwrap();
            let sy = self.mul(&self.simple[j], &y);
            let sx = self.mul(&self.simple[j], &x);
            if self.length(&sx) < lx {
                x = sx;
            }
            y = sy;
        }
    }

    pub fn omega(&self) -> &OmegaGroup {
        &self.omega
    }

    fn compute_omega(&self) -> OmegaGroup {
        let d = &self.datum;
        let dim = d.dim();
        let rank = d.rank();
        let c: Vec<Vec<i64>> = (0..dim).map(|i| (0..rank).map(|j| d.simple_coroot(j)[i]).collect()).collect();
        let s = smith_normal_form(&c, rank);
        let col = |i: usize| LatVec::from_slice(&(0..dim).map(|r| s.u_inv[r][i]).collect::<Vec<_>>());
        let mut invariants = Vec::new();
        let mut gens = Vec::new();
        for i in 0..dim {
            let di = if i < s.d.len() { s.d[i] } else { 0 };
            if di == 1 {
                continue;
            }
            invariants.push(di);
            gens.push(col(i));
        }
        let generators: Vec<AffElem> = gens.iter().map(|l| self.omega_part(&self.translation(l))).collect();
        let elements = if invariants.iter().all(|&k| k > 0) {
            let mut els = BTreeSet::from([self.identity()]);
            let mut queue = VecDeque::from([self.identity()]);
            while let Some(x) = queue.pop_front() {
                for g in &generators {
                    let y = self.mul(&x, g);
                    if els.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
            Some(els.into_iter().collect())
        } else {
            None
        };
        OmegaGroup { invariants, generators, elements }
    }

    /// Permutation σ of the simple affine indices with `ω s_j ω^{-1} = s_{σ(j)}`.
    pub fn omega_action(&self, omega: &AffElem) -> Result<Vec<usize>> {
        if self.length(omega) != 0 {
            return Err(Error::Invalid("element does not have length zero".into()));
        }
        let oi = self.inv(omega);
        (0..self.n_simple())
            .map(|j| {
                let c = self.mul(&self.mul(omega, &self.simple[j]), &oi);
                self.simple
                    .iter()
                    .position(|s| *s == c)
                    .ok_or_else(|| Error::Integrity("Ω does not permute S_aff".into()))
            })
            .collect()
    }

    /// Elements of `W̃_J`, sorted by shortlex key.
    pub fn parahoric_group(&self, j: Parahoric) -> Result<Vec<AffElem>> {
        if j.indices().iter().any(|&k| k >= self.n_simple()) || j.indices().len() >= self.n_simple() {
            return Err(Error::InvalidParahoric(format!("{} is not a proper subset of S_aff", j.label())));
        }
        let gens: Vec<AffElem> = j.indices().iter().map(|&k| self.simple[k]).collect();
        let mut seen = BTreeSet::from([self.identity()]);
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = self.mul(&x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                    if seen.len() > 100_000 {
                        return Err(Error::InvalidParahoric("W̃_J is not finite".into()));
                    }
                }
            }
        }
        let mut v: Vec<AffElem> = seen.into_iter().collect();
        v.sort_by_cached_key(|x| self.shortlex_key(x));
        Ok(v)
    }

    /// Finite-part projection `W̄_J`.
    pub fn parahoric_finite_part(&self, j: Parahoric) -> Result<BTreeSet<usize>> {
        Ok(self.parahoric_group(j)?.iter().map(|x| x.w as usize).collect())
    }

    /// Action of θ: `(λ, w) ↦ (θλ, θwθ^{-1})`.
    pub fn theta_apply(&self, theta: &DiagramAutomorphism, x: &AffElem) -> AffElem {
        AffElem { t: theta.apply(&x.t), w: theta.on_weyl(x.w as usize) as u16 }
    }

    /// Canonical label of `x W̃_J`: minimal shortlex member of the coset.
    pub fn iwasawa_cell(&self, x: &AffElem, j: Parahoric) -> Result<AffElem> {
        let group = self.parahoric_group(j)?;
        Ok(self.iwasawa_cell_with(x, &group))
    }

    pub fn iwasawa_cell_with(&self, x: &AffElem, group: &[AffElem]) -> AffElem {
        let members: Vec<(usize, AffElem)> = group
            .iter()
            .map(|u| {
                let y = self.mul(x, u);
                (self.length(&y), y)
            })
            .collect();
        let lmin = members.iter().map(|m| m.0).min().unwrap();
        members
            .into_iter()
            .filter(|m| m.0 == lmin)
            .map(|m| m.1)
            .min_by_key(|y| self.shortlex_key(y))
            .unwrap()
    }

    /// All elements of length at most `cutoff`, by breadth-first search from Ω.
    pub fn ball(&self, cutoff: usize) -> Vec<AffElem> {
        let omegas: Vec<AffElem> = match &self.omega.elements {
            Some(e) => e.clone(),
            None => {
                // Ω ≅ ℤ^k × finite: powers of generators within a small window
                let mut set = BTreeSet::from([self.identity()]);
                for _ in 0..=cutoff.min(4) {
                    let cur: Vec<AffElem> = set.iter().copied().collect();
                    for x in cur {
                        for g in &self.omega.generators {
                            set.insert(self.mul(&x, g));
                            set.insert(self.mul(&x, &self.inv(g)));
                        }
                    }
                }
                set.into_iter().collect()
            }
        };
        let mut seen: BTreeSet<AffElem> = omegas.iter().copied().collect();
        let mut frontier: Vec<AffElem> = omegas;
        for _ in 0..cutoff {
            let mut next = Vec::new();
            for x in &frontier {
                for s in &self.simple {
                    let y = self.mul(s, x);
                    if self.length(&y) > self.length(x) && seen.insert(y) {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        let mut v: Vec<AffElem> = seen.into_iter().collect();
        v.sort_by_cached_key(|x| self.shortlex_key(x));
        v
    }

    /// Lattice vectors λ with `ℓ(t_λ) ≤ cutoff`.
    pub fn translations_within(&self, cutoff: usize) -> Vec<LatVec> {
        let d = &self.datum;
        let two_rho = d.two_rho();
        let mut out = Vec::new();
        let bound = cutoff as i64;
        let dim = d.dim();
        let mut coords = vec![-bound; dim];
        loop {
            let x = LatVec::from_slice(&coords);
            let (dom, _) = d.to_dominant(&x);
            if (two_rho.dot(&dom) as usize) <= cutoff {
                out.push(x);
            }
            let mut k = 0;
            loop {
                if k == dim {
                    out.sort();
                    return out;
                }
                coords[k] += 1;
                if coords[k] > bound {
                    coords[k] = -bound;
                    k += 1;
                } else {
                    break;
                }
            }
        }
    }
}
