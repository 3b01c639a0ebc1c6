use num_rational::Rational64;
use num_traits::{One, Zero};

use super::{AffElem, AffineWeyl};
use crate::lattice::{solve_rational, LatVec};
use crate::rootdata::LatticeKind;

/// A rational point of `X ⊗ ℚ` in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlcovePoint {
    pub coords: Vec<Rational64>,
}

impl AlcovePoint {
    pub fn from_lattice(x: &LatVec, num: i64, den: i64) -> Self {
        AlcovePoint { coords: x.as_slice().iter().map(|&c| Rational64::new(c * num, den)).collect() }
    }

    pub fn pair(&self, covector: &LatVec) -> Rational64 {
        self.coords.iter().zip(covector.as_slice()).map(|(&a, &b)| a * b).sum()
    }

    fn add(&self, o: &AlcovePoint) -> AlcovePoint {
        AlcovePoint { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    fn scale(&self, k: Rational64) -> AlcovePoint {
        AlcovePoint { coords: self.coords.iter().map(|a| a * k).collect() }
    }
}

impl AffineWeyl {
    /// Vertices of the base alcove: the origin and, for each simple root,
    /// the point with `α_j = δ_ij / c_i` where `θ̃ = Σ c_i α_i`.
    pub fn alcove_vertices(&self) -> Vec<AlcovePoint> {
        let d = self.datum();
        let dim = d.dim();
        let n = d.rank();
        let c = &d.highest_root().coords;
        let mut rows: Vec<Vec<Rational64>> = (0..n)
            .map(|j| d.simple_root(j).as_slice().iter().map(|&x| Rational64::from_integer(x)).collect())
            .collect();
        if d.kind() == LatticeKind::GeneralLinear {
            rows.push(vec![Rational64::one(); dim]);
        }
        let mut out = vec![AlcovePoint { coords: vec![Rational64::zero(); dim] }];
        for i in 0..n {
            let mut b = vec![Rational64::zero(); rows.len()];
            b[i] = Rational64::new(1, c[i]);
            let x = solve_rational(&rows, &b).expect("alcove vertex system is nonsingular");
            out.push(AlcovePoint { coords: x });
        }
        out
    }

    pub fn alcove_barycenter(&self) -> AlcovePoint {
        let vs = self.alcove_vertices();
        let k = Rational64::new(1, vs.len() as i64);
        vs.iter().skip(1).fold(vs[0].clone(), |acc, v| acc.add(v)).scale(k)
    }

    pub fn act_point(&self, x: &AffElem, p: &AlcovePoint) -> AlcovePoint {
        let m = self.datum().weyl().matrix(x.w as usize);
        let dim = p.coords.len();
        let coords = (0..dim)
            .map(|i| Rational64::from_integer(x.t[i]) + (0..dim).map(|j| Rational64::from_integer(m.get(i, j)) * p.coords[j]).sum::<Rational64>())
            .collect();
        AlcovePoint { coords }
    }

    pub fn fixes_facet(&self, x: &AffElem, p: &AlcovePoint) -> bool {
        self.act_point(x, p) == *p
    }

    /// Strictly inside the base alcove: `0 < α(p) < 1` for every positive root.
    pub fn in_base_alcove(&self, p: &AlcovePoint) -> bool {
        let d = self.datum();
        d.positive().iter().all(|&k| {
            let a = p.pair(&d.root(k).covector);
            a > Rational64::zero() && a < Rational64::one()
        })
    }
}
