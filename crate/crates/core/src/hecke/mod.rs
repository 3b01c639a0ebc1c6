//! Iwahori–Hecke algebra of the extended affine Weyl group over `ℚ[v, v^{-1}]`
//! with `q_s = v^{2 k_s}`.

mod bernstein;
mod cache;
mod central;

pub use bernstein::{BernsteinForm, RElem};
pub use cache::{cache_summary, clear_cache, resolve_dir, CacheStats, ProductCache, CACHE_FILE};
pub use central::CentralElement;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use parking_lot::RwLock;

use crate::affine_weyl::{AffElem, AffineWeyl, Parahoric};
use crate::error::{Error, Result};
use crate::lattice::{rational_rank, LatVec};
use crate::laurent::{LaurentScalar, Q};

/// Finite T-basis expansion `Σ c_x T_x`.
#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElement {
    params: Arc<[i32]>,
    terms: BTreeMap<AffElem, LaurentScalar>,
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl HeckeElement {
    pub fn zero(params: Arc<[i32]>) -> Self {
        HeckeElement { params, terms: BTreeMap::new() }
    }

    pub fn params(&self) -> &[i32] {
        &self.params
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AffElem, &LaurentScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, x: &AffElem) -> LaurentScalar {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, x: AffElem, c: &LaurentScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(x).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn add_assign(&mut self, o: &HeckeElement) {
        for (x, c) in &o.terms {
            self.add_term(*x, c);
        }
    }

    pub fn sub_assign(&mut self, o: &HeckeElement) {
        for (x, c) in &o.terms {
            self.add_term(*x, &-c.clone());
        }
    }

    pub fn scale(&self, k: &LaurentScalar) -> HeckeElement {
        let mut out = HeckeElement::zero(self.params.clone());
        for (x, c) in &self.terms {
            out.add_term(*x, &(c * k));
        }
        out
    }

    pub fn div_exact(&self, d: &LaurentScalar) -> Result<HeckeElement> {
        let mut out = HeckeElement::zero(self.params.clone());
        for (x, c) in &self.terms {
            out.terms.insert(*x, c.div_exact(d)?);
        }
        Ok(out)
    }

    pub fn support(&self) -> BTreeSet<AffElem> {
        self.terms.keys().copied().collect()
    }
}

pub struct HeckeAlgebra {
    group: Arc<AffineWeyl>,
    params: Arc<[i32]>,
    products: ProductCache,
    thetas: RwLock<HashMap<LatVec, Arc<HeckeElement>>>,
}

impl fmt::Debug for HeckeAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeckeAlgebra({}, {})", self.group.datum().label(), self.param_tag())
    }
}

impl HeckeAlgebra {
    /// Equal parameters `q_s = q` for every simple affine reflection.
    pub fn new(group: Arc<AffineWeyl>) -> Self {
        let n = group.n_simple();
        Self::with_parameters(group, vec![1; n]).expect("equal parameters are valid")
    }

    /// Uniform parameters `q_s = q^k`.
    pub fn uniform(group: Arc<AffineWeyl>, k: i32) -> Self {
        let n = group.n_simple();
        Self::with_parameters(group, vec![k; n]).expect("uniform parameters are valid")
    }

    /// `k[j]` gives `q_{s_j} = v^{2 k[j]}`; must be constant on conjugacy classes.
    pub fn with_parameters(group: Arc<AffineWeyl>, k: Vec<i32>) -> Result<Self> {
        let n = group.n_simple();
        if k.len() != n {
            return Err(Error::ParameterMismatch(format!("expected {n} parameters, got {}", k.len())));
        }
        for a in 0..n {
            for b in a + 1..n {
                let st = group.mul(&group.simple(a), &group.simple(b));
                let mut p = st;
                let mut m = 1;
                while p != group.identity() && m <= 12 {
                    p = group.mul(&p, &st);
                    m += 1;
                }
                if m <= 12 && m % 2 == 1 && k[a] != k[b] {
                    return Err(Error::ParameterMismatch(format!("s{a} and s{b} are conjugate")));
                }
            }
        }
        let omegas: Vec<AffElem> = group.omega().generators.clone();
        for o in &omegas {
            let sigma = group.omega_action(o)?;
            for j in 0..n {
                if k[sigma[j]] != k[j] {
                    return Err(Error::ParameterMismatch(format!("Ω moves s{j} to s{}", sigma[j])));
                }
            }
        }
        let tag = format!("{}:{}", group.datum().label(), k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("."));
        Ok(HeckeAlgebra {
            group,
            params: k.into(),
            products: ProductCache::new(tag),
            thetas: RwLock::new(HashMap::new()),
        })
    }

    pub fn group(&self) -> &Arc<AffineWeyl> {
        &self.group
    }

    pub fn params(&self) -> &Arc<[i32]> {
        &self.params
    }

    pub fn param_tag(&self) -> String {
        self.params.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
    }

    pub fn cache(&self) -> &ProductCache {
        &self.products
    }

    /// Uniform exponent `k` when all parameters agree.
    pub fn uniform_k(&self) -> Option<i32> {
        let k = self.params[0];
        self.params.iter().all(|&x| x == k).then_some(k)
    }

    pub fn q_s(&self, j: usize) -> LaurentScalar {
        LaurentScalar::v_pow(2 * self.params[j])
    }

    /// Exponent of `v` in `q_x^{1/2}`.
    pub fn half_weight(&self, x: &AffElem) -> i32 {
        let (w, _) = self.group.reduced_word(x);
        w.iter().map(|&j| self.params[j]).sum()
    }

    pub fn q_x(&self, x: &AffElem) -> LaurentScalar {
        LaurentScalar::v_pow(2 * self.half_weight(x))
    }

    pub fn zero(&self) -> HeckeElement {
        HeckeElement::zero(self.params.clone())
    }

    pub fn one(&self) -> HeckeElement {
        self.basis(&self.group.identity())
    }

    pub fn basis(&self, x: &AffElem) -> HeckeElement {
        let mut h = self.zero();
        h.add_term(*x, &LaurentScalar::one());
        h
    }

    fn check(&self, h: &HeckeElement) -> Result<()> {
        if *h.params != *self.params {
            return Err(Error::ParameterMismatch("element belongs to a different parameter function".into()));
        }
        Ok(())
    }

    /// `h · T_{s_j}`.
    pub fn right_mul_simple(&self, h: &HeckeElement, j: usize) -> HeckeElement {
        let s = self.group.simple(j);
        let q = self.q_s(j);
        let qm1 = &q - &LaurentScalar::one();
        let mut out = self.zero();
        for (x, c) in &h.terms {
            let y = self.group.mul(x, &s);
            if self.group.length(&y) > self.group.length(x) {
                out.add_term(y, c);
            } else {
                out.add_term(*x, &(c * &qm1));
                out.add_term(y, &(c * &q));
            }
        }
        out
    }

    /// `T_{s_j} · h`.
    pub fn left_mul_simple(&self, j: usize, h: &HeckeElement) -> HeckeElement {
        let s = self.group.simple(j);
        let q = self.q_s(j);
        let qm1 = &q - &LaurentScalar::one();
        let mut out = self.zero();
        for (x, c) in &h.terms {
            let y = self.group.mul(&s, x);
            if self.group.length(&y) > self.group.length(x) {
                out.add_term(y, c);
            } else {
                out.add_term(*x, &(c * &qm1));
                out.add_term(y, &(c * &q));
            }
        }
        out
    }

    /// `h · T_{s_j}^{-1} = q^{-1} h T_s − (1 − q^{-1}) h`.
    pub fn right_mul_simple_inv(&self, h: &HeckeElement, j: usize) -> HeckeElement {
        let qi = LaurentScalar::v_pow(-2 * self.params[j]);
        let mut out = self.right_mul_simple(h, j).scale(&qi);
        out.sub_assign(&h.scale(&(&LaurentScalar::one() - &qi)));
        out
    }

    pub fn left_mul_simple_inv(&self, j: usize, h: &HeckeElement) -> HeckeElement {
        let qi = LaurentScalar::v_pow(-2 * self.params[j]);
        let mut out = self.left_mul_simple(j, h).scale(&qi);
        out.sub_assign(&h.scale(&(&LaurentScalar::one() - &qi)));
        out
    }

    /// `h · T_ω` for ω of length zero.
    pub fn right_mul_omega(&self, h: &HeckeElement, omega: &AffElem) -> HeckeElement {
        let mut out = self.zero();
        for (x, c) in &h.terms {
            out.terms.insert(self.group.mul(x, omega), c.clone());
        }
        out
    }

    pub fn left_mul_omega(&self, omega: &AffElem, h: &HeckeElement) -> HeckeElement {
        let mut out = self.zero();
        for (x, c) in &h.terms {
            out.terms.insert(self.group.mul(omega, x), c.clone());
        }
        out
    }

    /// `h · T_y`, generator by generator.
    pub fn right_mul_basis(&self, h: &HeckeElement, y: &AffElem) -> HeckeElement {
        let (word, omega) = self.group.reduced_word(y);
        let mut out = h.clone();
        for &j in &word {
            out = self.right_mul_simple(&out, j);
        }
        self.right_mul_omega(&out, &omega)
    }

    /// `T_y · h`.
    pub fn left_mul_basis(&self, y: &AffElem, h: &HeckeElement) -> HeckeElement {
        let (word, omega) = self.group.reduced_word(y);
        let mut out = self.left_mul_omega(&omega, h);
        for &j in word.iter().rev() {
            out = self.left_mul_simple(j, &out);
        }
        out
    }

    /// `h · T_y^{-1}`.
    pub fn right_mul_basis_inv(&self, h: &HeckeElement, y: &AffElem) -> HeckeElement {
        let (word, omega) = self.group.reduced_word(y);
        let mut out = self.right_mul_omega(h, &self.group.inv(&omega));
        for &j in word.iter().rev() {
            out = self.right_mul_simple_inv(&out, j);
        }
        out
    }

    /// `T_y^{-1} · h`.
    pub fn left_mul_basis_inv(&self, y: &AffElem, h: &HeckeElement) -> HeckeElement {
        let (word, omega) = self.group.reduced_word(y);
        let mut out = h.clone();
        for &j in &word {
            out = self.left_mul_simple_inv(j, &out);
        }
        self.left_mul_omega(&self.group.inv(&omega), &out)
    }

    /// Structure constant `T_x T_y`, memoised in the product cache.
    pub fn basis_product(&self, x: &AffElem, y: &AffElem) -> Arc<HeckeElement> {
        if let Some(h) = self.products.get(x, y) {
            return h;
        }
        let h = Arc::new(self.right_mul_basis(&self.basis(x), y));
        self.products.insert(*x, *y, h)
    }

    pub fn multiply(&self, a: &HeckeElement, b: &HeckeElement) -> Result<HeckeElement> {
        self.check(a)?;
        self.check(b)?;
        let mut out = self.zero();
        for (x, cx) in &a.terms {
            for (y, cy) in &b.terms {
                let c = cx * cy;
                for (z, cz) in &self.basis_product(x, y).terms {
                    out.add_term(*z, &(&c * cz));
                }
            }
        }
        Ok(out)
    }

    /// `θ_λ = q^{(ℓ(t_{λ2}) − ℓ(t_{λ1}))/2} T_{t_{λ1}} T_{t_{λ2}}^{-1}`.
    pub fn theta(&self, lambda: &LatVec) -> Arc<HeckeElement> {
        if let Some(h) = self.thetas.read().get(lambda) {
            return h.clone();
        }
        let (l1, l2) = self.group.datum().dominant_split(lambda);
        let h = Arc::new(self.theta_from_split(&l1, &l2));
        self.thetas.write().entry(*lambda).or_insert(h).clone()
    }

    /// θ for an explicit dominant decomposition `λ = l1 − l2`.
    pub fn theta_from_split(&self, l1: &LatVec, l2: &LatVec) -> HeckeElement {
        let t1 = self.group.translation(l1);
        let t2 = self.group.translation(l2);
        let e = self.half_weight(&t2) - self.half_weight(&t1);
        self.right_mul_basis_inv(&self.basis(&t1), &t2).scale(&LaurentScalar::v_pow(e))
    }

    /// `𝕀_J = Σ_{w ∈ W̃_J} T_w`.
    pub fn indicator(&self, j: Parahoric) -> Result<HeckeElement> {
        let mut h = self.zero();
        for x in self.group.parahoric_group(j)? {
            h.add_term(x, &LaurentScalar::one());
        }
        Ok(h)
    }

    /// `P_J(q) = Σ_{w ∈ W̃_J} q_w`.
    pub fn poincare(&self, j: Parahoric) -> Result<LaurentScalar> {
        let mut p = LaurentScalar::zero();
        for x in self.group.parahoric_group(j)? {
            p += self.q_x(&x);
        }
        Ok(p)
    }

    /// `h · 𝕀_J`, built by right multiplication along `W̃_J`.
    pub fn right_mul_indicator(&self, h: &HeckeElement, j: Parahoric) -> Result<HeckeElement> {
        let group = self.group.parahoric_group(j)?;
        let mut partial: HashMap<AffElem, HeckeElement> = HashMap::new();
        partial.insert(self.group.identity(), h.clone());
        let mut out = h.clone();
        for u in group.iter().skip(1) {
            let (word, _) = self.group.reduced_word(u);
            let (last, prefix) = word.split_last().unwrap();
            let prev = self.group.from_word(prefix, &self.group.identity());
            let hu = self.right_mul_simple(&partial[&prev], *last);
            out.add_assign(&hu);
            partial.insert(*u, hu);
        }
        Ok(out)
    }

    /// `𝕀_J · h`.
    pub fn left_mul_indicator(&self, j: Parahoric, h: &HeckeElement) -> Result<HeckeElement> {
        let group = self.group.parahoric_group(j)?;
        let mut out = self.zero();
        for u in &group {
            out.add_assign(&self.left_mul_basis(u, h));
        }
        Ok(out)
    }

    /// Commutes with every `T_s`, every Ω generator and θ of dominant lattice generators.
    pub fn is_central(&self, h: &HeckeElement) -> bool {
        self.centrality_defect(h).is_none()
    }

    /// First generator failing to commute with `h`, if any.
    pub fn centrality_defect(&self, h: &HeckeElement) -> Option<String> {
        for j in 0..self.group.n_simple() {
            if self.left_mul_simple(j, h) != self.right_mul_simple(h, j) {
                return Some(format!("T_s{j}"));
            }
        }
        for o in &self.group.omega().generators {
            if self.left_mul_omega(o, h) != self.right_mul_omega(h, o) {
                return Some(format!("T_ω{}", o.t));
            }
        }
        for lam in self.group.datum().dominant_generators() {
            let t = self.group.translation(&lam);
            if self.left_mul_basis(&t, h) != self.right_mul_basis(h, &t) {
                return Some(format!("θ{lam}"));
            }
        }
        None
    }

    /// Hecke realisation `Σ c_λ θ_λ` of an element of the group ring of X.
    pub fn realize(&self, z: &CentralElement) -> HeckeElement {
        let mut out = self.zero();
        for (lam, c) in z.terms() {
            out.add_assign(&self.theta(lam).scale(c));
        }
        out
    }

    /// Bernstein function `z_μ^J`: the orbit sum of μ realised and multiplied by `𝕀_J`.
    pub fn bernstein_function(&self, mu: &LatVec, j: Parahoric) -> Result<(CentralElement, HeckeElement)> {
        let z = CentralElement::orbit_sum(self.group.datum(), mu);
        let h = self.to_parahoric(&z, j)?;
        Ok((z, h))
    }

    /// `z · 𝕀_J`.
    pub fn to_parahoric(&self, z: &CentralElement, j: Parahoric) -> Result<HeckeElement> {
        if !z.is_weyl_invariant(self.group.datum()) {
            return Err(Error::NotInvariant("element is not W-invariant".into()));
        }
        self.right_mul_indicator(&self.realize(z), j)
    }

    /// `(h · 𝕀_{J2}) / P_{J1}(q)` for `h = z · 𝕀_{J1}` and `J1 ⊆ J2`.
    pub fn change_parahoric(&self, h: &HeckeElement, j1: Parahoric, j2: Parahoric) -> Result<HeckeElement> {
        self.check(h)?;
        if !j1.is_subset(&j2) {
            return Err(Error::InvalidParahoric(format!("{} is not contained in {}", j1.label(), j2.label())));
        }
        if j1 == j2 {
            return Ok(h.clone());
        }
        self.right_mul_indicator(h, j2)?.div_exact(&self.poincare(j1)?)
    }

    /// Anti-involution `ι(T_x) = T_{x^{-1}}`.
    pub fn iota(&self, h: &HeckeElement) -> HeckeElement {
        let mut out = self.zero();
        for (x, c) in h.terms() {
            out.add_term(self.group.inv(x), c);
        }
        out
    }

    /// `T_s h = q_s h = h T_s` for every `s ∈ J`.
    pub fn is_bi_invariant(&self, h: &HeckeElement, j: Parahoric) -> bool {
        j.indices().into_iter().all(|s| {
            let qh = h.scale(&self.q_s(s));
            self.left_mul_simple(s, h) == qh && self.right_mul_simple(h, s) == qh
        })
    }

    /// Rank over ℚ(v) of the coefficient matrix of a family of elements.
    /// Certified by specialising `v` to integers: a nonzero minor at one
    /// specialisation is a nonzero minor generically.
    pub fn generic_rank(&self, elems: &[HeckeElement]) -> usize {
        let support: BTreeSet<AffElem> = elems.iter().flat_map(|h| h.terms.keys().copied()).collect();
        let mut best = 0;
        for v in [3i64, 5, 7, 11] {
            let x = BigRational::from_integer(BigInt::from(v));
            let rows: Vec<Vec<BigRational>> = elems
                .iter()
                .map(|h| support.iter().map(|s| h.coeff(s).eval_big(&x)).collect())
                .collect();
            best = best.max(rational_rank(&rows));
            if best == elems.len() {
                break;
            }
        }
        best
    }

    /// Canonical text: one line per term `word<TAB>coefficient`.
    pub fn format(&self, h: &HeckeElement) -> String {
        let mut lines: Vec<(usize, Vec<usize>, LatVec, String)> = h
            .terms
            .iter()
            .map(|(x, c)| {
                let (l, w, o) = self.group.shortlex_key(x);
                (l, w, o, format!("{}\t{}", self.group.label(x), c))
            })
            .collect();
        lines.sort();
        lines.into_iter().map(|t| t.3 + "\n").collect()
    }

    /// Canonical machine form `word=c:e,...;word=...` sorted by element record.
    pub fn serialize(&self, h: &HeckeElement) -> String {
        let mut recs: Vec<String> =
            h.terms.iter().map(|(x, c)| format!("{}={}", self.group.word_record(x), c.serialize())).collect();
        recs.sort();
        recs.join(";")
    }

    pub fn deserialize(&self, s: &str) -> Result<HeckeElement> {
        let mut h = self.zero();
        if s.is_empty() {
            return Ok(h);
        }
        for rec in s.split(';') {
            let (w, c) = rec.split_once('=').ok_or_else(|| Error::Parse(format!("bad term {rec:?}")))?;
            h.add_term(self.group.parse_word_record(w)?, &LaurentScalar::deserialize(c)?);
        }
        Ok(h)
    }

    /// Coefficient-wise evaluation helper for tests: `Σ c_x(v0)`.
    pub fn coefficient_sum(&self, h: &HeckeElement) -> LaurentScalar {
        h.terms.values().fold(LaurentScalar::zero(), |acc, c| acc + c.clone())
    }

    pub fn scalar(&self, c: i64) -> LaurentScalar {
        LaurentScalar::monomial(Q::from_integer(c), 0)
    }
}
