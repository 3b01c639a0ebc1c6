use std::collections::BTreeMap;
use std::fmt;

use crate::lattice::LatVec;
use crate::laurent::LaurentScalar;
use crate::rootdata::RootDatum;

/// Element `Σ c_λ e^λ` of the group ring `ℚ[v^{±1}][X]`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct CentralElement {
    coeffs: BTreeMap<LatVec, LaurentScalar>,
}

impl fmt::Debug for CentralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

impl CentralElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(lambda: LatVec, c: LaurentScalar) -> Self {
        let mut z = Self::zero();
        z.add_term(lambda, &c);
        z
    }

    /// `Σ_{λ ∈ Wμ} e^λ`.
    pub fn orbit_sum(datum: &RootDatum, mu: &LatVec) -> Self {
        let mut z = Self::zero();
        for l in datum.weyl_orbit(mu) {
            z.add_term(l, &LaurentScalar::one());
        }
        z
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatVec, &LaurentScalar)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, l: &LatVec) -> LaurentScalar {
        self.coeffs.get(l).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, l: LatVec, c: &LaurentScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(l).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&l);
        }
    }

    pub fn add(&self, o: &CentralElement) -> CentralElement {
        let mut z = self.clone();
        for (l, c) in &o.coeffs {
            z.add_term(*l, c);
        }
        z
    }

    pub fn scale(&self, k: &LaurentScalar) -> CentralElement {
        let mut z = Self::zero();
        for (l, c) in &self.coeffs {
            z.add_term(*l, &(c * k));
        }
        z
    }

    /// Convolution product.
    pub fn mul(&self, o: &CentralElement) -> CentralElement {
        let mut z = Self::zero();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &o.coeffs {
                z.add_term(*a + *b, &(ca * cb));
            }
        }
        z
    }

    pub fn is_weyl_invariant(&self, datum: &RootDatum) -> bool {
        let wg = datum.weyl();
        (0..wg.rank()).all(|i| {
            let s = wg.gen(i);
            self.coeffs.iter().all(|(l, c)| self.coeff(&wg.apply(s, l)) == *c)
        })
    }

    /// Coefficients on dominant orbit representatives.
    pub fn orbit_coefficients(&self, datum: &RootDatum) -> BTreeMap<LatVec, LaurentScalar> {
        self.coeffs.iter().filter(|(l, _)| datum.is_dominant(l)).map(|(l, c)| (*l, c.clone())).collect()
    }

    /// Image under a lattice map `λ ↦ f(λ)`.
    pub fn map_lattice(&self, f: impl Fn(&LatVec) -> LatVec) -> CentralElement {
        let mut z = Self::zero();
        for (l, c) in &self.coeffs {
            z.add_term(f(l), c);
        }
        z
    }
}
