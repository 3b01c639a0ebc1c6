//! Based root data of rank at most three, their finite Weyl groups, diagram
//! automorphisms and the folded (relative) data.
//!
//! Conventions: the Cartan matrix is `a_ij = ⟨α_i, α_j^∨⟩` in Bourbaki
//! numbering. Roots are covectors on the cocharacter lattice so that the
//! pairing is the dot product.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{smith_normal_form, solve_rational, IntMat, LatVec};

#[derive(Clone, Debug)]
pub struct Root {
    pub covector: LatVec,
    pub coroot: LatVec,
    /// Coordinates in the simple roots.
    pub coords: Vec<i64>,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }
}

/// Finite Weyl group stored as integer matrices, indexed `0..order` with
/// index 0 the identity. Words are ShortLex-minimal reduced words.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    mats: Vec<IntMat>,
    words: Vec<Vec<usize>>,
    lengths: Vec<usize>,
    mult: Vec<u16>,
    inverse: Vec<u16>,
    gens: Vec<usize>,
    index: HashMap<IntMat, usize>,
    /// `root_image[w][k]` is the index of `w·β_k`.
    root_image: Vec<Vec<u16>>,
    longest: usize,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.mats.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn matrix(&self, w: usize) -> &IntMat {
        &self.mats[w]
    }

    pub fn word(&self, w: usize) -> &[usize] {
        &self.words[w]
    }

    pub fn length(&self, w: usize) -> usize {
        self.lengths[w]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// Index of the simple reflection `s_i`.
    pub fn gen(&self, i: usize) -> usize {
        self.gens[i]
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn longest(&self) -> usize {
        self.longest
    }

    pub fn lookup(&self, m: &IntMat) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn root_image(&self, w: usize, k: usize) -> usize {
        self.root_image[w][k] as usize
    }

    pub fn apply(&self, w: usize, x: &LatVec) -> LatVec {
        self.mats[w].apply(x)
    }

    pub fn from_word(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |acc, &i| self.mul(acc, self.gens[i]))
    }

    /// Human-readable word, `e` for the identity, otherwise `s1s2...` (1-based).
    pub fn word_label(&self, w: usize) -> String {
        if self.words[w].is_empty() {
            "e".into()
        } else {
            self.words[w].iter().map(|i| format!("s{}", i + 1)).collect()
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// Elements of the standard parabolic subgroup generated by `subset`.
    pub fn parabolic(&self, subset: &[usize]) -> Vec<usize> {
        self.elements()
            .filter(|&w| self.words[w].iter().all(|i| subset.contains(i)))
            .collect()
    }

    /// Closure of a set of generators under multiplication.
    pub fn generated(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeKind {
    /// X = coroot lattice, basis the simple coroots.
    SimplyConnected,
    /// X = coweight lattice, basis the fundamental coweights.
    Adjoint,
    /// X = ℤⁿ with roots `e_i − e_{i+1}`.
    GeneralLinear,
}

#[derive(Clone)]
pub struct RootDatum {
    label: String,
    family: char,
    kind: LatticeKind,
    dim: usize,
    cartan: Vec<Vec<i64>>,
    simple_roots: Vec<LatVec>,
    simple_coroots: Vec<LatVec>,
    roots: Vec<Root>,
    root_index: HashMap<LatVec, usize>,
    positive: Vec<usize>,
    highest: usize,
    fundamental_coweights: Option<Vec<LatVec>>,
    weyl: WeylGroup,
}

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootDatum({})", self.label)
    }
}

fn cartan_matrix(family: char, n: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
        if i + 1 < n {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    match (family, n) {
        ('B', _) if n >= 2 => a[n - 2][n - 1] = -2,
        ('C', _) if n >= 2 => a[n - 1][n - 2] = -2,
        ('G', 2) => a[1][0] = -3,
        _ => {}
    }
    a
}

/// Builds a datum from a type tag such as `A1`, `PGL2`, `A2`, `C2`, `G2`,
/// `GL3`, optionally with `.sc` / `.ad` suffix.
pub fn build_root_datum(tag: &str) -> Result<RootDatum> {
    let raw = tag.trim();
    let upper = raw.to_ascii_uppercase();
    let (base, suffix) = match upper.split_once('.') {
        Some((b, s)) => (b.to_string(), Some(s.to_string())),
        None => (upper.clone(), None),
    };
    let bad = || Error::UnsupportedType(raw.to_string());
    let (family, n, kind) = match base.as_str() {
        "SL2" => ('A', 1, LatticeKind::SimplyConnected),
        "PGL2" => ('A', 1, LatticeKind::Adjoint),
        "GL2" => ('A', 1, LatticeKind::GeneralLinear),
        "GL3" => ('A', 2, LatticeKind::GeneralLinear),
        _ => {
            let mut chars = base.chars();
            let family = chars.next().ok_or_else(bad)?;
            let n: usize = chars.as_str().parse().map_err(|_| bad())?;
            let ok = matches!((family, n), ('A', 1..=3) | ('B', 2..=3) | ('C', 2..=3) | ('G', 2));
            if !ok {
                return Err(bad());
            }
            let kind = if family == 'A' && n == 1 { LatticeKind::SimplyConnected } else { LatticeKind::Adjoint };
            (family, n, kind)
        }
    };
    let kind = match suffix.as_deref() {
        None => kind,
        Some("SC") if kind != LatticeKind::GeneralLinear => LatticeKind::SimplyConnected,
        Some("AD") if kind != LatticeKind::GeneralLinear => LatticeKind::Adjoint,
        _ => return Err(bad()),
    };
    let label = match suffix {
        Some(_) => raw.to_string(),
        None => base.clone(),
    };
    RootDatum::new(label, family, n, kind)
}

impl RootDatum {
    fn new(label: String, family: char, n: usize, kind: LatticeKind) -> Result<Self> {
        let cartan = cartan_matrix(family, n);
        let (dim, simple_roots, simple_coroots) = match kind {
            LatticeKind::Adjoint => {
                let roots = (0..n).map(|i| LatVec::unit(n, i)).collect();
                let coroots = (0..n)
                    .map(|j| LatVec::from_slice(&(0..n).map(|i| cartan[i][j]).collect::<Vec<_>>()))
                    .collect();
                (n, roots, coroots)
            }
            LatticeKind::SimplyConnected => {
                let roots = (0..n).map(|i| LatVec::from_slice(&cartan[i])).collect();
                let coroots = (0..n).map(|j| LatVec::unit(n, j)).collect();
                (n, roots, coroots)
            }
            LatticeKind::GeneralLinear => {
                let d = n + 1;
                let v: Vec<LatVec> = (0..n).map(|i| LatVec::unit(d, i) - LatVec::unit(d, i + 1)).collect();
                (d, v.clone(), v)
            }
        };
        for i in 0..n {
            for j in 0..n {
                if simple_roots[i].dot(&simple_coroots[j]) != cartan[i][j] {
                    return Err(Error::Integrity(format!("Cartan entry ({i},{j}) mismatch")));
                }
            }
        }

        // roots by closure under simple reflections
        let mut roots: Vec<Root> = Vec::new();
        let mut root_index = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut coords = vec![0; n];
            coords[i] = 1;
            let r = Root { covector: simple_roots[i], coroot: simple_coroots[i], coords };
            root_index.insert(r.covector, roots.len());
            queue.push_back(roots.len());
            roots.push(r);
        }
        while let Some(k) = queue.pop_front() {
            for i in 0..n {
                let r = &roots[k];
                let p = r.covector.dot(&simple_coroots[i]);
                let covector = r.covector - simple_roots[i].scale(p);
                let coroot = r.coroot - simple_coroots[i].scale(simple_roots[i].dot(&r.coroot));
                let mut coords = r.coords.clone();
                coords[i] -= p;
                if let std::collections::hash_map::Entry::Vacant(e) = root_index.entry(covector) {
                    e.insert(roots.len());
                    queue.push_back(roots.len());
                    roots.push(Root { covector, coroot, coords });
                }
            }
        }
        // positive roots first, ordered by height then coordinates
        roots.sort_by(|a, b| {
            (!a.is_positive(), a.height().abs(), &a.coords).cmp(&(!b.is_positive(), b.height().abs(), &b.coords))
        });
        let root_index: HashMap<LatVec, usize> = roots.iter().enumerate().map(|(k, r)| (r.covector, k)).collect();
        let positive: Vec<usize> = (0..roots.len()).filter(|&k| roots[k].is_positive()).collect();
        let highest = *positive.iter().max_by_key(|&&k| roots[k].height()).unwrap();

        let weyl = Self::enumerate_weyl(dim, &simple_roots, &simple_coroots, &roots, &root_index);

        let fundamental_coweights = match kind {
            LatticeKind::Adjoint => Some((0..n).map(|i| LatVec::unit(n, i)).collect()),
            LatticeKind::GeneralLinear => Some(
                (0..n)
                    .map(|i| LatVec::from_slice(&(0..dim).map(|k| i64::from(k <= i)).collect::<Vec<_>>()))
                    .collect(),
            ),
            LatticeKind::SimplyConnected => {
                let a: Vec<Vec<Rational64>> = simple_roots
                    .iter()
                    .map(|r| r.as_slice().iter().map(|&x| Rational64::from_integer(x)).collect())
                    .collect();
                let mut out = Vec::new();
                for i in 0..n {
                    let b: Vec<Rational64> = (0..n).map(|j| Rational64::from_integer(i64::from(i == j))).collect();
                    let x = solve_rational(&a, &b).expect("simple roots independent");
                    if x.iter().all(|c| c.is_integer()) {
                        out.push(LatVec::from_slice(&x.iter().map(|c| c.to_integer()).collect::<Vec<_>>()));
                    }
                }
                (out.len() == n).then_some(out)
            }
        };

        Ok(RootDatum {
            label,
            family,
            kind,
            dim,
            cartan,
            simple_roots,
            simple_coroots,
            roots,
            root_index,
            positive,
            highest,
            fundamental_coweights,
            weyl,
        })
    }

    fn enumerate_weyl(
        dim: usize,
        simple_roots: &[LatVec],
        simple_coroots: &[LatVec],
        roots: &[Root],
        root_index: &HashMap<LatVec, usize>,
    ) -> WeylGroup {
        let n = simple_roots.len();
        let reflection = |i: usize| {
            let cols: Vec<LatVec> = (0..dim)
                .map(|j| {
                    let e = LatVec::unit(dim, j);
                    e - simple_coroots[i].scale(simple_roots[i].dot(&e))
                })
                .collect();
            IntMat::from_columns(&cols)
        };
        let gen_mats: Vec<IntMat> = (0..n).map(reflection).collect();
        let mut mats = vec![IntMat::identity(dim)];
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut index = HashMap::from([(IntMat::identity(dim), 0usize)]);
        let mut head = 0;
        while head < mats.len() {
            for i in 0..n {
                let m = mats[head].mul(&gen_mats[i]);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(m) {
                    let mut w = words[head].clone();
                    w.push(i);
                    e.insert(mats.len());
                    mats.push(m);
                    words.push(w);
                }
            }
            head += 1;
            assert!(mats.len() <= 1 << 12, "Weyl group closure did not terminate");
        }
        let order = mats.len();
        let mut mult = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                mult[a * order + b] = index[&mats[a].mul(&mats[b])] as u16;
            }
        }
        let inverse: Vec<u16> = (0..order)
            .map(|a| (0..order).find(|&b| mult[a * order + b] == 0).unwrap() as u16)
            .collect();
        let root_image: Vec<Vec<u16>> = (0..order)
            .map(|w| {
                let winv = &mats[inverse[w] as usize];
                roots.iter().map(|r| root_index[&winv.pull_back(&r.covector)] as u16).collect()
            })
            .collect();
        let lengths: Vec<usize> = (0..order)
            .map(|w| {
                roots
                    .iter()
                    .enumerate()
                    .filter(|(k, r)| r.is_positive() && !roots[root_image[w][*k] as usize].is_positive())
                    .count()
            })
            .collect();
        for w in 0..order {
            assert_eq!(lengths[w], words[w].len(), "BFS word length disagrees with inversion count");
        }
        let longest = (0..order).max_by_key(|&w| lengths[w]).unwrap();
        let gens = (0..n).map(|i| index[&gen_mats[i]]).collect();
        WeylGroup { mats, words, lengths, mult, inverse, gens, index, root_image, longest }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn family(&self) -> char {
        self.family
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    /// Rank of the lattice.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of simple roots.
    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn simple_root(&self, i: usize) -> LatVec {
        self.simple_roots[i]
    }

    pub fn simple_coroot(&self, i: usize) -> LatVec {
        self.simple_coroots[i]
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, k: usize) -> &Root {
        &self.roots[k]
    }

    pub fn root_by_covector(&self, c: &LatVec) -> Option<usize> {
        self.root_index.get(c).copied()
    }

    /// Indices of positive roots.
    pub fn positive(&self) -> &[usize] {
        &self.positive
    }

    pub fn highest_root(&self) -> &Root {
        &self.roots[self.highest]
    }

    pub fn fundamental_coweights(&self) -> Option<&[LatVec]> {
        self.fundamental_coweights.as_deref()
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn zero(&self) -> LatVec {
        LatVec::zero(self.dim)
    }

    /// `2ρ` as a covector: sum of positive roots.
    pub fn two_rho(&self) -> LatVec {
        self.positive.iter().fold(self.zero(), |acc, &k| acc + self.roots[k].covector)
    }

    /// `2ρ^∨`: sum of positive coroots.
    pub fn two_rho_check(&self) -> LatVec {
        self.positive.iter().fold(self.zero(), |acc, &k| acc + self.roots[k].coroot)
    }

    pub fn is_dominant(&self, x: &LatVec) -> bool {
        self.simple_roots.iter().all(|a| a.dot(x) >= 0)
    }

    pub fn is_regular(&self, x: &LatVec) -> bool {
        self.positive.iter().all(|&k| self.roots[k].covector.dot(x) != 0)
    }

    pub fn weyl_orbit(&self, x: &LatVec) -> BTreeSet<LatVec> {
        self.weyl.elements().map(|w| self.weyl.apply(w, x)).collect()
    }

    /// Dominant member of the orbit and an element carrying `x` to it.
    pub fn to_dominant(&self, x: &LatVec) -> (LatVec, usize) {
        let mut y = *x;
        let mut w = 0;
        'outer: loop {
            for i in 0..self.rank() {
                if self.simple_roots[i].dot(&y) < 0 {
                    let s = self.weyl.gen(i);
                    y = self.weyl.apply(s, &y);
                    w = self.weyl.mul(s, w);
                    continue 'outer;
                }
            }
            return (y, w);
        }
    }

    /// Orbit norm: ℓ¹-norm of the dominant representative in lattice coordinates.
    pub fn orbit_norm(&self, x: &LatVec) -> i64 {
        self.to_dominant(x).0.l1()
    }

    /// Dominant vectors of orbit norm at most `c`, in increasing order.
    pub fn dominant_within(&self, c: i64) -> Vec<LatVec> {
        let mut out = Vec::new();
        let d = self.dim;
        let mut coords = vec![-c; d];
        loop {
            let x = LatVec::from_slice(&coords);
            if x.l1() <= c && self.is_dominant(&x) {
                out.push(x);
            }
            let mut k = 0;
            loop {
                if k == d {
                    out.sort_by_key(|x| (x.l1(), *x));
                    return out;
                }
                coords[k] += 1;
                if coords[k] > c {
                    coords[k] = -c;
                    k += 1;
                } else {
                    break;
                }
            }
        }
    }

    /// Opposition permutation of simple indices: `−w_0 α_i = α_{π(i)}`.
    pub fn opposition(&self) -> Vec<usize> {
        let w0 = self.weyl.longest();
        (0..self.rank())
            .map(|i| {
                let k = self.root_by_covector(&self.simple_roots[i]).unwrap();
                let img = self.roots[self.weyl.root_image(w0, k)].covector;
                let neg = -img;
                (0..self.rank()).find(|&j| self.simple_roots[j] == neg).unwrap()
            })
            .collect()
    }

    /// Decomposition `λ = λ1 − λ2` with both parts dominant.
    pub fn dominant_split(&self, lambda: &LatVec) -> (LatVec, LatVec) {
        let lam2 = match &self.fundamental_coweights {
            Some(fw) => (0..self.rank()).fold(self.zero(), |acc, i| {
                let p = self.simple_roots[i].dot(lambda);
                acc + fw[i].scale((-p).max(0))
            }),
            None => {
                let worst = self.simple_roots.iter().map(|a| -a.dot(lambda)).max().unwrap_or(0).max(0);
                self.two_rho_check().scale((worst + 1) / 2)
            }
        };
        (*lambda + lam2, lam2)
    }

    /// Generators of the lattice by dominant vectors.
    pub fn dominant_generators(&self) -> Vec<LatVec> {
        let mut gens: Vec<LatVec> = match &self.fundamental_coweights {
            Some(fw) => fw.clone(),
            None => (0..self.dim).map(|i| self.dominant_split(&LatVec::unit(self.dim, i)).0).collect(),
        };
        if self.kind == LatticeKind::GeneralLinear {
            gens.push(LatVec::from_slice(&vec![1; self.dim]).scale(-1));
        }
        if self.fundamental_coweights.is_none() {
            gens.extend((0..self.dim).map(|i| self.dominant_split(&LatVec::unit(self.dim, i)).1));
        }
        gens
    }
}

/// A diagram automorphism θ of the based root datum, with extension degree `r`.
#[derive(Clone, Debug)]
pub struct DiagramAutomorphism {
    perm: Vec<usize>,
    matrix: IntMat,
    order: usize,
    r: usize,
    weyl_action: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn identity(datum: &RootDatum, r: usize) -> Result<Self> {
        Self::from_parts(datum, (0..datum.rank()).collect(), IntMat::identity(datum.dim()), r)
    }

    /// Parses `id`, `flip` or an explicit 1-based permutation such as `2,1`.
    pub fn parse(datum: &RootDatum, desc: &str, r: usize) -> Result<Self> {
        let d = desc.trim().to_ascii_lowercase();
        match d.as_str() {
            "" | "id" | "identity" | "none" => Self::identity(datum, r),
            "flip" => {
                let m = minus_w0(datum);
                if m.is_identity() {
                    return Err(Error::InvalidAutomorphism(format!("{} has no nontrivial flip", datum.label())));
                }
                Self::from_parts(datum, datum.opposition(), m, r)
            }
            _ => {
                let perm: std::result::Result<Vec<usize>, _> =
                    d.split(',').map(|p| p.trim().parse::<usize>().map(|k| k.wrapping_sub(1))).collect();
                let perm = perm.map_err(|_| Error::Parse(format!("bad permutation {desc:?}")))?;
                if perm.len() != datum.rank() || perm.iter().any(|&k| k >= datum.rank()) {
                    return Err(Error::InvalidAutomorphism(format!("{desc:?} is not a permutation of the simple roots")));
                }
                let ident: Vec<usize> = (0..datum.rank()).collect();
                let matrix = if perm == ident {
                    IntMat::identity(datum.dim())
                } else if perm == datum.opposition() {
                    minus_w0(datum)
                } else {
                    return Err(Error::InvalidAutomorphism(format!("{desc:?} does not preserve the Cartan matrix")));
                };
                Self::from_parts(datum, perm, matrix, r)
            }
        }
    }

    fn from_parts(datum: &RootDatum, perm: Vec<usize>, matrix: IntMat, r: usize) -> Result<Self> {
        let n = datum.rank();
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidAutomorphism("not a permutation".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if datum.cartan[perm[i]][perm[j]] != datum.cartan[i][j] {
                    return Err(Error::InvalidAutomorphism("permutation does not preserve the Cartan matrix".into()));
                }
            }
            if matrix.apply(&datum.simple_coroot(i)) != datum.simple_coroot(perm[i]) {
                return Err(Error::InvalidAutomorphism(format!("θ does not send α{}^∨ to α{}^∨", i + 1, perm[i] + 1)));
            }
            if matrix.pull_back(&datum.simple_root(perm[i])) != datum.simple_root(i) {
                return Err(Error::InvalidAutomorphism(format!("θ is not dual on α{}", i + 1)));
            }
        }
        let mut order = 1;
        let mut p = matrix;
        while !p.is_identity() {
            p = p.mul(&matrix);
            order += 1;
            if order > 12 {
                return Err(Error::InvalidAutomorphism("θ has infinite order".into()));
            }
        }
        if r == 0 || !r.is_multiple_of(order) {
            return Err(Error::InvalidAutomorphism(format!("order {order} of θ does not divide r = {r}")));
        }
        let inv = p_inverse(&matrix, order);
        let wg = datum.weyl();
        let weyl_action = wg
            .elements()
            .map(|w| {
                let m = matrix.mul(wg.matrix(w)).mul(&inv);
                wg.lookup(&m).ok_or_else(|| Error::InvalidAutomorphism("θ does not normalise W".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DiagramAutomorphism { perm, matrix, order, r, weyl_action })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn matrix(&self) -> &IntMat {
        &self.matrix
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn apply(&self, x: &LatVec) -> LatVec {
        self.matrix.apply(x)
    }

    pub fn power(&self, k: usize) -> IntMat {
        (0..k).fold(IntMat::identity(self.matrix.dim()), |acc, _| acc.mul(&self.matrix))
    }

    /// θ w θ^{-1}.
    pub fn on_weyl(&self, w: usize) -> usize {
        self.weyl_action[w]
    }

    /// Image of a simple affine index; 0 is the affine node and is fixed.
    pub fn on_affine_index(&self, j: usize) -> usize {
        if j == 0 {
            0
        } else {
            self.perm[j - 1] + 1
        }
    }

    /// `Σ_{i<r} θ^i x`.
    pub fn norm(&self, x: &LatVec) -> LatVec {
        let mut acc = LatVec::zero(x.dim());
        let mut y = *x;
        for _ in 0..self.r {
            acc += y;
            y = self.apply(&y);
        }
        acc
    }

    /// Orbits of θ on the simple indices.
    pub fn simple_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.perm.len()];
        let mut out = Vec::new();
        for i in 0..self.perm.len() {
            if seen[i] {
                continue;
            }
            let mut orbit = vec![];
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                orbit.push(j);
                j = self.perm[j];
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn describe(&self) -> String {
        if self.is_identity() {
            "id".into()
        } else {
            self.perm.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(",")
        }
    }
}

fn p_inverse(m: &IntMat, order: usize) -> IntMat {
    (0..order - 1).fold(IntMat::identity(m.dim()), |acc, _| acc.mul(m))
}

fn minus_w0(datum: &RootDatum) -> IntMat {
    datum.weyl().matrix(datum.weyl().longest()).scale(-1)
}

/// θ-fixed (relative) data.
#[derive(Clone, Debug)]
pub struct RelativeDatum {
    fixed_basis: Vec<LatVec>,
    to_fixed: Vec<Vec<i64>>,
    kernel_start: usize,
    relative_weyl: Vec<usize>,
    folded_generators: Vec<usize>,
    restricted_roots: Vec<LatVec>,
}

impl RelativeDatum {
    /// Basis of the fixed sublattice, in ambient coordinates.
    pub fn fixed_basis(&self) -> &[LatVec] {
        &self.fixed_basis
    }

    pub fn fixed_rank(&self) -> usize {
        self.fixed_basis.len()
    }

    /// Coordinates of a θ-fixed vector in the fixed basis.
    pub fn coordinates(&self, x: &LatVec) -> Option<LatVec> {
        let n = x.dim();
        let y: Vec<i64> = (0..n).map(|i| (0..n).map(|j| self.to_fixed[i][j] * x[j]).sum()).collect();
        if y[..self.kernel_start].iter().any(|&c| c != 0) {
            return None;
        }
        Some(LatVec::from_slice(&y[self.kernel_start..]))
    }

    pub fn from_coordinates(&self, c: &LatVec) -> LatVec {
        let n = self.fixed_basis.first().map_or(0, |b| b.dim());
        (0..c.dim()).fold(LatVec::zero(n), |acc, k| acc + self.fixed_basis[k].scale(c[k]))
    }

    /// Indices into W of the θ-commuting elements.
    pub fn relative_weyl(&self) -> &[usize] {
        &self.relative_weyl
    }

    /// Longest elements of the parabolic subgroups of the θ-orbits.
    pub fn folded_generators(&self) -> &[usize] {
        &self.folded_generators
    }

    /// Nonzero restrictions of roots, as covectors on fixed coordinates.
    pub fn restricted_roots(&self) -> &[LatVec] {
        &self.restricted_roots
    }
}

pub fn fold(datum: &RootDatum, theta: &DiagramAutomorphism) -> Result<RelativeDatum> {
    let n = datum.dim();
    let a = theta.matrix().sub(&IntMat::identity(n));
    let s = smith_normal_form(&a.rows(), n);
    let fixed_basis: Vec<LatVec> = (s.rank..n)
        .map(|j| LatVec::from_slice(&(0..n).map(|i| s.v[i][j]).collect::<Vec<_>>()))
        .collect();
    let wg = datum.weyl();
    let relative_weyl: Vec<usize> = wg
        .elements()
        .filter(|&w| wg.matrix(w).mul(theta.matrix()) == theta.matrix().mul(wg.matrix(w)))
        .collect();
    let folded_generators: Vec<usize> = theta
        .simple_orbits()
        .iter()
        .map(|orbit| {
            let sub = wg.parabolic(orbit);
            *sub.iter().max_by_key(|&&w| wg.length(w)).unwrap()
        })
        .collect();
    let generated = wg.generated(&folded_generators);
    let rel_set: BTreeSet<usize> = relative_weyl.iter().copied().collect();
    if generated != rel_set {
        return Err(Error::Integrity(format!(
            "folded generators give {} elements, commutation test gives {}",
            generated.len(),
            rel_set.len()
        )));
    }
    let mut restricted = BTreeSet::new();
    for r in datum.roots() {
        let c = LatVec::from_slice(&fixed_basis.iter().map(|b| r.covector.dot(b)).collect::<Vec<_>>());
        if !c.is_zero() {
            restricted.insert(c);
        }
    }
    let rel = RelativeDatum {
        fixed_basis,
        to_fixed: s.v_inv.clone(),
        kernel_start: s.rank,
        relative_weyl,
        folded_generators,
        restricted_roots: restricted.into_iter().collect(),
    };
    // stabilises the fixed lattice, acts faithfully on it
    let mut seen = BTreeSet::new();
    for &w in rel.relative_weyl() {
        let images: Vec<LatVec> = rel
            .fixed_basis
            .iter()
            .map(|b| {
                rel.coordinates(&wg.apply(w, b))
                    .ok_or_else(|| Error::Integrity("relative Weyl element leaves the fixed lattice".into()))
            })
            .collect::<Result<_>>()?;
        if !seen.insert(images) {
            return Err(Error::Integrity("relative Weyl group does not act faithfully".into()));
        }
    }
    Ok(rel)
}

/// Plain-text datum description: `type = "A2"`, `theta = "flip"`, `r = 2`.
#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
pub struct DatumSpec {
    #[serde(rename = "type")]
    pub type_tag: String,
    #[serde(default)]
    pub theta: Option<String>,
    #[serde(default)]
    pub r: Option<usize>,
}

impl DatumSpec {
    pub fn from_text(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn build(&self) -> Result<(Arc<RootDatum>, DiagramAutomorphism)> {
        let datum = build_root_datum(&self.type_tag)?;
        let r = self.r.unwrap_or(1);
        let theta = DiagramAutomorphism::parse(&datum, self.theta.as_deref().unwrap_or("id"), r)?;
        Ok((Arc::new(datum), theta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartan_pairings() {
        for tag in ["A1", "PGL2", "GL2", "GL3", "A2", "A3", "B2", "C2", "B3", "C3", "G2", "A2.sc", "C2.sc"] {
            let d = build_root_datum(tag).unwrap();
            for i in 0..d.rank() {
                assert_eq!(d.simple_root(i).dot(&d.simple_coroot(i)), 2, "{tag}");
            }
            for r in d.roots() {
                assert_eq!(r.covector.dot(&r.coroot), 2, "{tag}");
            }
        }
    }

    #[test]
    fn weyl_orders() {
        for (tag, n) in [("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("C2", 8), ("B3", 48), ("C3", 48), ("G2", 12)] {
            assert_eq!(build_root_datum(tag).unwrap().weyl().order(), n, "{tag}");
        }
    }

    #[test]
    fn a2_shortlex_words() {
        let d = build_root_datum("A2").unwrap();
        let labels: Vec<String> = d.weyl().elements().map(|w| d.weyl().word_label(w)).collect();
        assert_eq!(labels, ["e", "s1", "s2", "s1s2", "s2s1", "s1s2s1"]);
    }

    #[test]
    fn rejects_unknown() {
        assert!(build_root_datum("E8").is_err());
        assert!(build_root_datum("D4").is_err());
        let c2 = build_root_datum("C2").unwrap();
        assert!(DiagramAutomorphism::parse(&c2, "flip", 2).is_err());
        let a2 = build_root_datum("A2").unwrap();
        assert!(DiagramAutomorphism::parse(&a2, "flip", 3).is_err());
    }
}
