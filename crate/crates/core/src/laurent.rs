//! Exact Laurent polynomials: univariate in `v` (with `q = v²`) and
//! multivariate in `v, s1, s2, s3`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = Rational64;

/// Laurent polynomial in `v` with rational coefficients, stored densely
/// from exponent `lo`. Both ends are kept nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentScalar {
    lo: i32,
    c: Vec<Q>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        LaurentScalar { lo: 0, c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Q::one(), 0)
    }

    pub fn constant(k: i64) -> Self {
        Self::monomial(Q::from_integer(k), 0)
    }

    pub fn monomial(coeff: Q, exp: i32) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        LaurentScalar { lo: exp, c: vec![coeff] }
    }

    pub fn v_pow(e: i32) -> Self {
        Self::monomial(Q::one(), e)
    }

    /// `q^k = v^{2k}`.
    pub fn q_pow(k: i32) -> Self {
        Self::v_pow(2 * k)
    }

    fn normalize(mut self) -> Self {
        let first = self.c.iter().position(|x| !x.is_zero());
        match first {
            None => Self::zero(),
            Some(f) => {
                let last = self.c.iter().rposition(|x| !x.is_zero()).unwrap();
                self.c.truncate(last + 1);
                self.c.drain(..f);
                self.lo += f as i32;
                self
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.lo == 0 && self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn low_degree(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.lo)
    }

    pub fn high_degree(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.lo + self.c.len() as i32 - 1)
    }

    pub fn coeff(&self, e: i32) -> Q {
        let i = e - self.lo;
        if i < 0 || i as usize >= self.c.len() {
            Q::zero()
        } else {
            self.c[i as usize]
        }
    }

    /// Nonzero terms as (exponent, coefficient), increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i32, Q)> + '_ {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(move |(i, &x)| (self.lo + i as i32, x))
    }

    pub fn scale(&self, k: Q) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LaurentScalar { lo: self.lo, c: self.c.iter().map(|&x| x * k).collect() }
    }

    pub fn shift(&self, e: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentScalar { lo: self.lo + e, c: self.c.clone() }
    }

    /// Exact division; errors when `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentScalar) -> Result<LaurentScalar> {
        if d.is_zero() {
            return Err(Error::Arithmetic("division by zero Laurent polynomial".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let dl = d.c.len();
        let lead = *d.c.last().unwrap();
        let mut rem = self.c.clone();
        if rem.len() < dl {
            return Err(Error::Arithmetic(format!("{d} does not divide {self}")));
        }
        let qlen = rem.len() - dl + 1;
        let mut quot = vec![Q::zero(); qlen];
        for k in (0..qlen).rev() {
            let f = rem[k + dl - 1] / lead;
            quot[k] = f;
            if !f.is_zero() {
                for (j, &dj) in d.c.iter().enumerate() {
                    rem[k + j] -= f * dj;
                }
            }
        }
        if rem.iter().any(|x| !x.is_zero()) {
            return Err(Error::Arithmetic(format!("{d} does not divide {self}")));
        }
        Ok(LaurentScalar { lo: self.lo - d.lo, c: quot }.normalize())
    }

    /// Value at a rational point `v = x`.
    pub fn eval_big(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in self.terms() {
            let ce = BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()));
            acc += ce * pow_big(x, e);
        }
        acc
    }

    pub fn eval_f64(&self, v: f64) -> f64 {
        self.terms().map(|(e, c)| c.to_f64().unwrap() * v.powi(e)).sum()
    }

    /// Canonical text form `c:e,c:e,...` with increasing exponents; `0` for zero.
    pub fn serialize(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms().map(|(e, c)| format!("{c}:{e}")).collect::<Vec<_>>().join(",")
    }

    pub fn deserialize(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut acc = Self::zero();
        for part in s.split(',') {
            let (c, e) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad Laurent term {part:?}")))?;
            let c: Q = c.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?;
            let e: i32 = e.trim().parse().map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
            acc += Self::monomial(c, e);
        }
        Ok(acc)
    }
}

pub fn pow_big(x: &BigRational, e: i32) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "v")?,
                (_, true) => write!(f, "v^{e}")?,
                (1, false) => write!(f, "{a}*v")?,
                (_, false) => write!(f, "{a}*v^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl AddAssign<&LaurentScalar> for LaurentScalar {
    fn add_assign(&mut self, o: &LaurentScalar) {
        if o.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = o.clone();
            return;
        }
        let lo = self.lo.min(o.lo);
        let hi = self.high_degree().unwrap().max(o.high_degree().unwrap());
        if lo < self.lo {
            let pad = (self.lo - lo) as usize;
            let mut c = vec![Q::zero(); pad];
            c.extend_from_slice(&self.c);
            self.c = c;
            self.lo = lo;
        }
        let len = (hi - lo + 1) as usize;
        self.c.resize(len, Q::zero());
        let off = (o.lo - lo) as usize;
        for (i, &x) in o.c.iter().enumerate() {
            self.c[off + i] += x;
        }
        *self = std::mem::take(self).normalize();
    }
}

impl AddAssign for LaurentScalar {
    fn add_assign(&mut self, o: LaurentScalar) {
        *self += &o;
    }
}

impl SubAssign<&LaurentScalar> for LaurentScalar {
    fn sub_assign(&mut self, o: &LaurentScalar) {
        *self += &(-o.clone());
    }
}

impl Add for LaurentScalar {
    type Output = LaurentScalar;
    fn add(mut self, o: LaurentScalar) -> LaurentScalar {
        self += &o;
        self
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, o: &LaurentScalar) -> LaurentScalar {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl Sub for LaurentScalar {
    type Output = LaurentScalar;
    fn sub(mut self, o: LaurentScalar) -> LaurentScalar {
        self -= &o;
        self
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, o: &LaurentScalar) -> LaurentScalar {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(mut self) -> LaurentScalar {
        for x in &mut self.c {
            *x = -*x;
        }
        self
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, o: &LaurentScalar) -> LaurentScalar {
        if self.is_zero() || o.is_zero() {
            return LaurentScalar::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        LaurentScalar { lo: self.lo + o.lo, c }.normalize()
    }
}

impl Mul for LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, o: LaurentScalar) -> LaurentScalar {
        &self * &o
    }
}

/// Number of variable slots in [`MLaurent`]: `v, s1, s2, s3`.
pub const NVARS: usize = 4;
pub type Exps = [i32; NVARS];

/// Multivariate Laurent polynomial over ℚ in `v, s1, s2, s3`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct MLaurent {
    terms: BTreeMap<Exps, Q>,
}

impl MLaurent {
    pub fn zero() -> Self {
        MLaurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Q::one(), [0; NVARS])
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, [0; NVARS])
    }

    pub fn monomial(c: Q, e: Exps) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        MLaurent { terms }
    }

    /// Variable `s_i` (1-based) raised to `k`.
    pub fn s_pow(i: usize, k: i32) -> Self {
        let mut e = [0; NVARS];
        e[i] = k;
        Self::monomial(Q::one(), e)
    }

    pub fn from_laurent(l: &LaurentScalar) -> Self {
        let mut m = Self::zero();
        for (e, c) in l.terms() {
            m.terms.insert([e, 0, 0, 0], c);
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Exps) -> Q {
        self.terms.get(e).copied().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, e: Exps, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, k: Q) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        MLaurent { terms: self.terms.iter().map(|(e, &c)| (*e, c * k)).collect() }
    }

    pub fn mul_monomial(&self, c: Q, e: &Exps) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MLaurent {
            terms: self
                .terms
                .iter()
                .map(|(f, &d)| {
                    let mut g = *f;
                    for k in 0..NVARS {
                        g[k] += e[k];
                    }
                    (g, d * c)
                })
                .collect(),
        }
    }

    /// Leading term in lexicographic order of exponent vectors.
    fn leading(&self) -> Option<(Exps, Q)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, *c))
    }

    fn trailing(&self) -> Option<(Exps, Q)> {
        self.terms.iter().next().map(|(e, c)| (*e, *c))
    }

    /// Exact division. Lexicographic order is a group order on ℤ⁴, so the
    /// quotient's lowest term is the ratio of lowest terms; that bounds the
    /// reduction loop.
    pub fn div_exact(&self, d: &MLaurent) -> Result<MLaurent> {
        let (dl_e, dl_c) = d
            .leading()
            .ok_or_else(|| Error::Arithmetic("division by zero polynomial".into()))?;
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (al_e, _) = self.trailing().unwrap();
        let (dt_e, _) = d.trailing().unwrap();
        let floor = sub_exps(&al_e, &dt_e);
        let mut rem = self.clone();
        let mut quot = MLaurent::zero();
        let mut steps = 0usize;
        while let Some((re, rc)) = rem.leading() {
            let qe = sub_exps(&re, &dl_e);
            steps += 1;
            if qe < floor || steps > 1_000_000 {
                return Err(Error::Arithmetic(format!("{d} does not divide {self}")));
            }
            let qc = rc / dl_c;
            quot.add_term(qe, qc);
            rem -= &d.mul_monomial(qc, &qe);
        }
        Ok(quot)
    }

    /// Apply a monomial substitution: exponent vector `e` maps to `f(e)`.
    pub fn map_exponents(&self, f: impl Fn(&Exps) -> Exps) -> Self {
        let mut m = Self::zero();
        for (e, &c) in &self.terms {
            m.add_term(f(e), c);
        }
        m
    }

    /// Substitute values for every variable, numerically.
    pub fn eval_complex(&self, vals: &[Complex64; NVARS]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap(), 0.0);
            for k in 0..NVARS {
                if e[k] != 0 {
                    t *= vals[k].powi(e[k]);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitute rational values for every variable.
    pub fn eval_big(&self, vals: &[BigRational; NVARS]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()));
            for k in 0..NVARS {
                if e[k] != 0 {
                    t *= pow_big(&vals[k], e[k]);
                }
            }
            acc += t;
        }
        acc
    }

    /// Coefficients as Laurent polynomials in `v`, keyed by the `s`-exponents.
    pub fn by_s_monomial(&self) -> BTreeMap<[i32; NVARS - 1], LaurentScalar> {
        let mut out: BTreeMap<[i32; NVARS - 1], LaurentScalar> = BTreeMap::new();
        for (e, &c) in &self.terms {
            let key = [e[1], e[2], e[3]];
            *out.entry(key).or_default() += LaurentScalar::monomial(c, e[0]);
        }
        out
    }

    /// True when no `v` appears.
    pub fn is_v_free(&self) -> bool {
        self.terms.keys().all(|e| e[0] == 0)
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&[0; NVARS]).copied(),
            _ => None,
        }
    }
}

fn sub_exps(a: &Exps, b: &Exps) -> Exps {
    let mut r = [0; NVARS];
    for k in 0..NVARS {
        r[k] = a[k] - b[k];
    }
    r
}

const VAR_NAMES: [&str; NVARS] = ["v", "s1", "s2", "s3"];

impl fmt::Display for MLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono: Vec<String> = (0..NVARS)
                .filter(|&k| e[k] != 0)
                .map(|k| if e[k] == 1 { VAR_NAMES[k].to_string() } else { format!("{}^{}", VAR_NAMES[k], e[k]) })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl AddAssign<&MLaurent> for MLaurent {
    fn add_assign(&mut self, o: &MLaurent) {
        for (e, &c) in &o.terms {
            self.add_term(*e, c);
        }
    }
}

impl SubAssign<&MLaurent> for MLaurent {
    fn sub_assign(&mut self, o: &MLaurent) {
        for (e, &c) in &o.terms {
            self.add_term(*e, -c);
        }
    }
}

impl Add for &MLaurent {
    type Output = MLaurent;
    fn add(self, o: &MLaurent) -> MLaurent {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl Sub for &MLaurent {
    type Output = MLaurent;
    fn sub(self, o: &MLaurent) -> MLaurent {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl Neg for MLaurent {
    type Output = MLaurent;
    fn neg(self) -> MLaurent {
        self.scale(-Q::one())
    }
}

impl Mul for &MLaurent {
    type Output = MLaurent;
    fn mul(self, o: &MLaurent) -> MLaurent {
        let mut r = MLaurent::zero();
        for (e, &c) in &self.terms {
            for (f, &d) in &o.terms {
                r.add_term(
                    [e[0] + f[0], e[1] + f[1], e[2] + f[2], e[3] + f[3]],
                    c * d,
                );
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i32)]) -> LaurentScalar {
        let mut a = LaurentScalar::zero();
        for &(c, e) in terms {
            a += LaurentScalar::monomial(Q::from_integer(c), e);
        }
        a
    }

    #[test]
    fn quadratic_factor_divides() {
        // (q + 1)(q - 1) = q^2 - 1
        let a = lp(&[(1, 4), (-1, 0)]);
        let b = lp(&[(1, 2), (1, 0)]);
        assert_eq!(a.div_exact(&b).unwrap(), lp(&[(1, 2), (-1, 0)]));
        assert!(lp(&[(1, 2)]).div_exact(&b).is_err());
    }

    #[test]
    fn serialize_roundtrip() {
        let a = lp(&[(3, -2), (-1, 0), (7, 5)]);
        assert_eq!(a.serialize(), "3:-2,-1:0,7:5");
        assert_eq!(LaurentScalar::deserialize(&a.serialize()).unwrap(), a);
    }

    #[test]
    fn multivariate_division() {
        let x = MLaurent::s_pow(1, 1);
        let y = MLaurent::s_pow(2, -1);
        let a = &(&x + &y) * &(&x - &y);
        let q = a.div_exact(&(&x + &y)).unwrap();
        assert_eq!(q, &x - &y);
        assert!(x.div_exact(&(&x + &y)).is_err());
    }
}
