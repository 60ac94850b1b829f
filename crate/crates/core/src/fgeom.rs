//! Points of P(F₃⁵) and the standard quadratic form q(x) = Σ xᵢ².

use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("the zero vector does not define a projective point")]
    ZeroVector,
    #[error("point {0} is not in the enumeration")]
    Unknown(F3Vector),
}

/// Balanced residue of `x` modulo 3.
pub fn reduce(x: i64) -> i8 {
    match x.rem_euclid(3) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// A vector of F₃⁵ with coordinates in {0, 1, −1}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct F3Vector(pub [i8; 5]);

impl F3Vector {
    pub fn new(coords: [i64; 5]) -> Self {
        F3Vector(coords.map(reduce))
    }

    pub fn zero() -> Self {
        F3Vector([0; 5])
    }

    pub fn unit(i: usize) -> Self {
        let mut c = [0; 5];
        c[i] = 1;
        F3Vector(c)
    }

    pub fn coords(&self) -> [i8; 5] {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn nnz(&self) -> usize {
        self.0.iter().filter(|&&x| x != 0).count()
    }

    pub fn add(&self, other: &F3Vector) -> F3Vector {
        let mut c = [0; 5];
        for (i, slot) in c.iter_mut().enumerate() {
            *slot = reduce(i64::from(self.0[i]) + i64::from(other.0[i]));
        }
        F3Vector(c)
    }

    pub fn scale(&self, s: i8) -> F3Vector {
        F3Vector(self.0.map(|x| reduce(i64::from(x) * i64::from(s))))
    }

    pub fn neg(&self) -> F3Vector {
        self.scale(-1)
    }

    /// The representative of the line whose first nonzero coordinate is 1.
    pub fn normalized(&self) -> F3Vector {
        match self.0.iter().find(|&&x| x != 0) {
            Some(-1) => self.neg(),
            _ => *self,
        }
    }

    /// All 242 nonzero vectors.
    pub fn all_nonzero() -> impl Iterator<Item = F3Vector> {
        (1..243i64).map(|mut n| {
            let mut c = [0i8; 5];
            for slot in c.iter_mut().rev() {
                *slot = reduce(n % 3);
                n /= 3;
            }
            F3Vector(c)
        })
    }

    /// Key for the point enumeration order: lexicographic with 0 < 1 < −1.
    fn enum_key(&self) -> [u8; 5] {
        self.0.map(|x| match x {
            0 => 0,
            1 => 1,
            _ => 2,
        })
    }

    /// Key for the printed tables: number of nonzero entries, then the
    /// support pattern (zero before nonzero), then signs (+ before −).
    pub fn table_key(&self) -> (usize, [u8; 5], [u8; 5]) {
        let support = self.0.map(|x| u8::from(x != 0));
        let signs = self.0.map(|x| u8::from(x < 0));
        (self.nnz(), support, signs)
    }
}

impl PartialOrd for F3Vector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for F3Vector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.enum_key().cmp(&other.enum_key())
    }
}

impl fmt::Display for F3Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        write!(f, "({},{},{},{},{})", c[0], c[1], c[2], c[3], c[4])
    }
}

/// b(x, y) = Σ xᵢyᵢ.
pub fn bilinear(x: &F3Vector, y: &F3Vector) -> i8 {
    reduce(x.0.iter().zip(y.0.iter()).map(|(a, b)| i64::from(*a) * i64::from(*b)).sum())
}

pub fn quadratic(x: &F3Vector) -> i8 {
    bilinear(x, x)
}

pub fn perpendicular(x: &F3Vector, y: &F3Vector) -> bool {
    bilinear(x, y) == 0
}

/// Which of the three sets a point lies in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub enum QClass {
    /// q = 0
    Cusp,
    /// q = 1
    Tritangent,
    /// q = −1
    Boundary,
}

impl QClass {
    pub fn from_value(q: i8) -> QClass {
        match q {
            0 => QClass::Cusp,
            1 => QClass::Tritangent,
            _ => QClass::Boundary,
        }
    }

    pub fn value(self) -> i8 {
        match self {
            QClass::Cusp => 0,
            QClass::Tritangent => 1,
            QClass::Boundary => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QClass::Cusp => "cusp",
            QClass::Tritangent => "tritangent",
            QClass::Boundary => "boundary",
        }
    }

    pub const ALL: [QClass; 3] = [QClass::Cusp, QClass::Tritangent, QClass::Boundary];
}

/// A divisor of the compactification, indexed by its point in the sorted
/// enumeration of its class.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub enum DivisorId {
    Boundary(usize),
    Cusp(usize),
    Tritangent(usize),
}

impl DivisorId {
    pub fn class(&self) -> QClass {
        match self {
            DivisorId::Boundary(_) => QClass::Boundary,
            DivisorId::Cusp(_) => QClass::Cusp,
            DivisorId::Tritangent(_) => QClass::Tritangent,
        }
    }

    pub fn index(&self) -> usize {
        match *self {
            DivisorId::Boundary(i) | DivisorId::Cusp(i) | DivisorId::Tritangent(i) => i,
        }
    }

    pub fn new(class: QClass, index: usize) -> Self {
        match class {
            QClass::Boundary => DivisorId::Boundary(index),
            QClass::Cusp => DivisorId::Cusp(index),
            QClass::Tritangent => DivisorId::Tritangent(index),
        }
    }
}

/// A normalized point of P(F₃⁵).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub struct ProjectivePoint {
    rep: F3Vector,
    qclass: QClass,
}

impl ProjectivePoint {
    pub fn new(v: F3Vector) -> Result<Self, GeometryError> {
        if v.is_zero() {
            return Err(GeometryError::ZeroVector);
        }
        let rep = v.normalized();
        Ok(ProjectivePoint { rep, qclass: QClass::from_value(quadratic(&rep)) })
    }

    pub fn rep(&self) -> F3Vector {
        self.rep
    }

    pub fn qclass(&self) -> QClass {
        self.qclass
    }
}

/// The 121 points split by q-value, each part sorted by normalized
/// representative.
#[derive(Clone, Debug)]
pub struct PointSets {
    cusp: Vec<F3Vector>,
    tritangent: Vec<F3Vector>,
    boundary: Vec<F3Vector>,
}

pub fn enumerate_points() -> PointSets {
    let mut all: Vec<F3Vector> = F3Vector::all_nonzero().map(|v| v.normalized()).collect();
    all.sort();
    all.dedup();
    let pick = |c: QClass| all.iter().copied().filter(|v| QClass::from_value(quadratic(v)) == c).collect();
    PointSets { cusp: pick(QClass::Cusp), tritangent: pick(QClass::Tritangent), boundary: pick(QClass::Boundary) }
}

impl PointSets {
    pub fn get(&self, c: QClass) -> &[F3Vector] {
        match c {
            QClass::Cusp => &self.cusp,
            QClass::Tritangent => &self.tritangent,
            QClass::Boundary => &self.boundary,
        }
    }

    pub fn cusps(&self) -> &[F3Vector] {
        &self.cusp
    }

    pub fn tritangents(&self) -> &[F3Vector] {
        &self.tritangent
    }

    pub fn boundaries(&self) -> &[F3Vector] {
        &self.boundary
    }

    pub fn total(&self) -> usize {
        self.cusp.len() + self.tritangent.len() + self.boundary.len()
    }

    /// Class and index of the line through `v`.
    pub fn locate(&self, v: &F3Vector) -> Result<(QClass, usize), GeometryError> {
        if v.is_zero() {
            return Err(GeometryError::ZeroVector);
        }
        let n = v.normalized();
        let c = QClass::from_value(quadratic(&n));
        self.get(c).binary_search(&n).map(|i| (c, i)).map_err(|_| GeometryError::Unknown(n))
    }

    pub fn index_in(&self, c: QClass, v: &F3Vector) -> Option<usize> {
        match self.locate(v) {
            Ok((found, i)) if found == c => Some(i),
            _ => None,
        }
    }

    /// Indices of the isotropic lines in v⊥. When v is itself isotropic it
    /// is among them.
    pub fn isotropic_in_perp(&self, v: &F3Vector) -> Vec<usize> {
        (0..self.cusp.len()).filter(|&i| perpendicular(v, &self.cusp[i])).collect()
    }

    pub fn perp_indices(&self, v: &F3Vector, c: QClass) -> Vec<usize> {
        let v = v.normalized();
        self.get(c).iter().enumerate().filter(|(_, w)| **w != v && perpendicular(&v, w)).map(|(i, _)| i).collect()
    }
}

/// Counts of points of each class perpendicular to a point, the point
/// itself excluded.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct PerpProfile {
    pub cusp: usize,
    pub tritangent: usize,
    pub boundary: usize,
}

pub fn perp_profile(sets: &PointSets, p: &ProjectivePoint) -> PerpProfile {
    let v = p.rep();
    PerpProfile {
        cusp: sets.perp_indices(&v, QClass::Cusp).len(),
        tritangent: sets.perp_indices(&v, QClass::Tritangent).len(),
        boundary: sets.perp_indices(&v, QClass::Boundary).len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bilinear_examples() {
        let e1 = F3Vector::new([1, 0, 0, 0, 0]);
        assert_eq!(bilinear(&e1, &e1), 1);
        let h = F3Vector::new([1, 1, 1, 1, 1]);
        assert_eq!(bilinear(&h, &h), -1);
        assert_eq!(bilinear(&F3Vector::new([1, -1, 0, 0, 0]), &F3Vector::new([1, 1, 0, 0, 0])), 0);
    }

    #[test]
    fn set_sizes() {
        let s = enumerate_points();
        assert_eq!(s.cusps().len(), 40);
        assert_eq!(s.tritangents().len(), 45);
        assert_eq!(s.boundaries().len(), 36);
        assert_eq!(s.total(), 121);
        assert_eq!((3i64.pow(5) - 1) / 2, 121);
        let h = ProjectivePoint::new(F3Vector::new([1, 1, 1, 1, 1])).unwrap();
        assert_eq!(h.qclass(), QClass::Boundary);
    }

    #[test]
    fn zero_is_not_a_point() {
        assert_eq!(ProjectivePoint::new(F3Vector::zero()), Err(GeometryError::ZeroVector));
    }

    #[test]
    fn class_is_defined_on_lines() {
        for v in F3Vector::all_nonzero() {
            assert_eq!(quadratic(&v), quadratic(&v.neg()));
            assert_eq!(ProjectivePoint::new(v).unwrap(), ProjectivePoint::new(v.neg()).unwrap());
        }
    }

    #[test]
    fn profile_depends_only_on_class() {
        let s = enumerate_points();
        let expected = |c: QClass| match c {
            QClass::Boundary => PerpProfile { cusp: 10, tritangent: 15, boundary: 15 },
            QClass::Tritangent => PerpProfile { cusp: 16, tritangent: 12, boundary: 12 },
            QClass::Cusp => PerpProfile { cusp: 12, tritangent: 18, boundary: 9 },
        };
        for c in QClass::ALL {
            for v in s.get(c) {
                let p = ProjectivePoint::new(*v).unwrap();
                assert_eq!(perp_profile(&s, &p), expected(c), "{v}");
            }
        }
    }

    #[test]
    fn thirteen_isotropic_lines_in_each_cusp_perp() {
        let s = enumerate_points();
        for (i, v) in s.cusps().iter().enumerate() {
            let iso = s.isotropic_in_perp(v);
            assert_eq!(iso.len(), 13);
            assert!(iso.contains(&i));
        }
    }

    #[test]
    fn enumeration_is_sorted_and_locatable() {
        let s = enumerate_points();
        for c in QClass::ALL {
            let pts = s.get(c);
            assert!(pts.windows(2).all(|w| w[0] < w[1]));
            for (i, v) in pts.iter().enumerate() {
                assert_eq!(s.locate(&v.neg()).unwrap(), (c, i));
            }
        }
    }
}
