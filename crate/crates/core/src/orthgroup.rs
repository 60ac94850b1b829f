//! The reflection group of (F₃⁵, q) and its actions on the point sets.

use crate::exactmath::{int_rank, MathError};
use crate::fgeom::{bilinear, perpendicular, quadratic, F3Vector, PointSets, QClass};
use std::collections::{HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cannot reflect in the isotropic vector {0}")]
    Isotropic(F3Vector),
    #[error("matrix does not preserve q")]
    NotOrthogonal,
    #[error("matrix is not invertible")]
    Singular,
    #[error("group element {element} sends {point} outside the point set")]
    NotStabilized { element: usize, point: F3Vector },
    #[error(transparent)]
    Math(#[from] MathError),
}

/// A 5×5 matrix over F₃ that preserves q. Acts on column vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrthMatrix {
    m: [[i8; 5]; 5],
}

impl fmt::Debug for OrthMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.m.iter().map(|r| F3Vector(*r))).finish()
    }
}

fn trit(x: i32) -> i8 {
    match x.rem_euclid(3) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

impl OrthMatrix {
    /// Checks q(Mx) = q(x) on all nonzero vectors, and invertibility.
    pub fn from_rows(m: [[i8; 5]; 5]) -> Result<Self, GroupError> {
        let g = OrthMatrix { m: m.map(|r| r.map(|x| trit(i32::from(x)))) };
        if F3Vector::all_nonzero().any(|x| quadratic(&g.apply(&x)) != quadratic(&x)) {
            return Err(GroupError::NotOrthogonal);
        }
        if F3Vector::all_nonzero().any(|x| g.apply(&x).is_zero()) {
            return Err(GroupError::Singular);
        }
        Ok(g)
    }

    pub fn identity() -> Self {
        let mut m = [[0; 5]; 5];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        OrthMatrix { m }
    }

    pub fn neg_identity() -> Self {
        Self::identity().scaled(-1)
    }

    pub fn scaled(&self, s: i8) -> Self {
        OrthMatrix { m: self.m.map(|r| r.map(|x| trit(i32::from(x) * i32::from(s)))) }
    }

    pub fn rows(&self) -> [[i8; 5]; 5] {
        self.m
    }

    pub fn apply(&self, x: &F3Vector) -> F3Vector {
        let mut out = [0i8; 5];
        for (i, slot) in out.iter_mut().enumerate() {
            let s: i32 = (0..5).map(|j| i32::from(self.m[i][j]) * i32::from(x.0[j])).sum();
            *slot = trit(s);
        }
        F3Vector(out)
    }

    /// `self · other`, i.e. apply `other` first.
    pub fn mul(&self, other: &OrthMatrix) -> OrthMatrix {
        let mut m = [[0i8; 5]; 5];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let s: i32 = (0..5).map(|k| i32::from(self.m[i][k]) * i32::from(other.m[k][j])).sum();
                *slot = trit(s);
            }
        }
        OrthMatrix { m }
    }

    /// The 25 entries packed base 3.
    pub fn key(&self) -> u64 {
        self.m.iter().flatten().fold(0u64, |acc, &x| acc * 3 + (x.rem_euclid(3) as u64))
    }

    pub fn order(&self) -> usize {
        let id = Self::identity();
        let mut p = *self;
        let mut n = 1;
        while p != id {
            p = p.mul(self);
            n += 1;
        }
        n
    }
}

/// s_v(x) = x + q(v)·b(x, v)·v.
pub fn reflection(v: &F3Vector) -> Result<OrthMatrix, GroupError> {
    let q = quadratic(v);
    if q == 0 {
        return Err(GroupError::Isotropic(*v));
    }
    let mut m = [[0i8; 5]; 5];
    for j in 0..5 {
        let e = F3Vector::unit(j);
        let c = q * bilinear(&e, v);
        let img = e.add(&v.scale(c));
        for (i, row) in m.iter_mut().enumerate() {
            row[j] = img.0[i];
        }
    }
    Ok(OrthMatrix { m })
}

/// A finite matrix group listed in breadth-first order from the identity.
#[derive(Clone, Debug)]
pub struct GroupSet {
    elements: Vec<OrthMatrix>,
    generators: Vec<OrthMatrix>,
    index: HashMap<u64, usize>,
}

/// Closure of the generators under multiplication.
pub fn generate(gens: &[OrthMatrix]) -> GroupSet {
    let id = OrthMatrix::identity();
    let mut elements = vec![id];
    let mut index = HashMap::new();
    index.insert(id.key(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let e = elements[i];
        for g in gens {
            let p = g.mul(&e);
            let k = p.key();
            if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(k) {
                slot.insert(elements.len());
                queue.push_back(elements.len());
                elements.push(p);
            }
        }
    }
    GroupSet { elements, generators: gens.to_vec(), index }
}

impl GroupSet {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[OrthMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[OrthMatrix] {
        &self.generators
    }

    pub fn contains(&self, g: &OrthMatrix) -> bool {
        self.index.contains_key(&g.key())
    }

    /// The permutation each generator induces on `points` (projectively).
    /// Since the generators generate, stability under them is stability
    /// under every element.
    pub fn generator_perms(&self, points: &[F3Vector]) -> Result<Vec<Vec<usize>>, GroupError> {
        perms_on(&self.generators, points)
    }

    /// Checks every element maps `points` to itself.
    pub fn stabilizes(&self, points: &[F3Vector]) -> Result<(), GroupError> {
        perms_on(&self.elements, points).map(|_| ())
    }
}

fn perms_on(mats: &[OrthMatrix], points: &[F3Vector]) -> Result<Vec<Vec<usize>>, GroupError> {
    let lookup: HashMap<F3Vector, usize> = points.iter().enumerate().map(|(i, p)| (p.normalized(), i)).collect();
    mats.iter()
        .enumerate()
        .map(|(e, g)| {
            points
                .iter()
                .map(|p| {
                    let img = g.apply(p).normalized();
                    lookup.get(&img).copied().ok_or(GroupError::NotStabilized { element: e, point: *p })
                })
                .collect()
        })
        .collect()
}

/// Reflections in all 36 boundary points; they generate the W(E₆) image.
pub fn boundary_reflections(sets: &PointSets) -> Vec<OrthMatrix> {
    sets.boundaries().iter().map(|v| reflection(v).expect("boundary points are anisotropic")).collect()
}

pub fn reflection_group(sets: &PointSets) -> GroupSet {
    generate(&boundary_reflections(sets))
}

/// The reflection group with −I adjoined.
pub fn full_orthogonal_group(sets: &PointSets) -> GroupSet {
    let mut gens = boundary_reflections(sets);
    gens.push(OrthMatrix::neg_identity());
    generate(&gens)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let r = self.find(i);
            by_root[r].push(i);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }
}

/// Orbits of the group on `points`, as sorted index lists ordered by
/// smallest member.
pub fn orbits(g: &GroupSet, points: &[F3Vector]) -> Result<Vec<Vec<usize>>, GroupError> {
    let perms = g.generator_perms(points)?;
    let mut uf = UnionFind::new(points.len());
    for p in &perms {
        for (i, &j) in p.iter().enumerate() {
            uf.union(i, j);
        }
    }
    Ok(uf.classes())
}

/// Orbits on ordered pairs `a × b` under the diagonal action.
pub fn pair_orbits(g: &GroupSet, a: &[F3Vector], b: &[F3Vector]) -> Result<Vec<Vec<(usize, usize)>>, GroupError> {
    let pa = g.generator_perms(a)?;
    let pb = g.generator_perms(b)?;
    let nb = b.len();
    let mut uf = UnionFind::new(a.len() * nb);
    for (ga, gb) in pa.iter().zip(&pb) {
        for (i, &gi) in ga.iter().enumerate() {
            for (j, &gj) in gb.iter().enumerate() {
                uf.union(i * nb + j, gi * nb + gj);
            }
        }
    }
    Ok(uf.classes().into_iter().map(|c| c.into_iter().map(|x| (x / nb, x % nb)).collect()).collect())
}

pub fn pair_orbit_count(g: &GroupSet, a: &[F3Vector], b: &[F3Vector]) -> Result<usize, GroupError> {
    Ok(pair_orbits(g, a, b)?.len())
}

/// 0/1 matrix with a 1 where the two points are perpendicular.
pub fn incidence_matrix(a: &[F3Vector], b: &[F3Vector]) -> Vec<Vec<i64>> {
    a.iter().map(|x| b.iter().map(|y| i64::from(perpendicular(x, y))).collect()).collect()
}

pub fn incidence_rank(a: &[F3Vector], b: &[F3Vector]) -> usize {
    int_rank(&incidence_matrix(a, b))
}

/// Orbit statistics used by reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassOrbits {
    pub class: QClass,
    pub sizes: Vec<usize>,
}

pub fn class_orbits(g: &GroupSet, sets: &PointSets) -> Result<Vec<ClassOrbits>, GroupError> {
    QClass::ALL
        .iter()
        .map(|&c| {
            let o = orbits(g, sets.get(c))?;
            Ok(ClassOrbits { class: c, sizes: o.iter().map(Vec::len).collect() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgeom::enumerate_points;
    use std::sync::OnceLock;

    fn w() -> &'static (PointSets, GroupSet) {
        static G: OnceLock<(PointSets, GroupSet)> = OnceLock::new();
        G.get_or_init(|| {
            let s = enumerate_points();
            let g = reflection_group(&s);
            (s, g)
        })
    }

    #[test]
    fn reflection_examples() {
        let v = F3Vector::new([1, 1, 1, 1, 1]);
        let s = reflection(&v).unwrap();
        assert_eq!(s.apply(&v), v.neg());
        assert_eq!(s.apply(&F3Vector::new([1, 0, 0, 0, 0])), F3Vector::new([0, -1, -1, -1, -1]));
        let x = F3Vector::new([1, -1, 0, 0, 0]);
        assert_eq!(s.apply(&x), x);
        assert_eq!(s.mul(&s), OrthMatrix::identity());
        assert_eq!(reflection(&v.neg()).unwrap(), s);
        assert!(matches!(reflection(&F3Vector::new([1, 1, 1, 0, 0])), Err(GroupError::Isotropic(_))));
    }

    #[test]
    fn reflections_fix_the_perpendicular_hyperplane() {
        for v in F3Vector::all_nonzero().filter(|v| quadratic(v) != 0) {
            let s = reflection(&v).unwrap();
            for x in F3Vector::all_nonzero().filter(|x| perpendicular(x, &v)) {
                assert_eq!(s.apply(&x), x);
            }
        }
    }

    #[test]
    fn from_rows_rejects_non_isometries() {
        let mut m = OrthMatrix::identity().rows();
        m[0][1] = 1;
        assert_eq!(OrthMatrix::from_rows(m), Err(GroupError::NotOrthogonal));
        assert!(OrthMatrix::from_rows(OrthMatrix::identity().rows()).is_ok());
    }

    #[test]
    fn trivial_group() {
        let g = generate(&[OrthMatrix::identity()]);
        assert_eq!(g.order(), 1);
        let s = enumerate_points();
        let o = orbits(&g, s.boundaries()).unwrap();
        assert_eq!(o.len(), 36);
        assert!(o.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn weyl_image_order_and_transitivity() {
        let (s, g) = w();
        assert_eq!(g.order(), 51840);
        assert_eq!(51840, 2usize.pow(7) * 3usize.pow(4) * 5);
        assert!(!g.contains(&OrthMatrix::neg_identity()));
        for c in QClass::ALL {
            let o = orbits(g, s.get(c)).unwrap();
            assert_eq!(o.len(), 1, "{c:?}");
        }
    }

    #[test]
    fn every_element_preserves_q() {
        let (_, g) = w();
        let vs: Vec<F3Vector> = F3Vector::all_nonzero().collect();
        for e in g.elements() {
            assert!(vs.iter().all(|x| quadratic(&e.apply(x)) == quadratic(x)));
        }
    }

    #[test]
    fn negated_tritangent_reflections_are_involutions_in_the_group() {
        let (s, g) = w();
        for v in s.tritangents() {
            let m = reflection(v).unwrap().scaled(-1);
            assert!(g.contains(&m));
            assert_eq!(m.order(), 2);
        }
    }

    #[test]
    fn pair_orbit_counts() {
        let (s, g) = w();
        let (b, c, t) = (s.boundaries(), s.cusps(), s.tritangents());
        assert_eq!(pair_orbit_count(g, b, b).unwrap(), 3);
        assert_eq!(pair_orbit_count(g, c, c).unwrap(), 3);
        assert_eq!(pair_orbit_count(g, t, t).unwrap(), 3);
        assert_eq!(pair_orbit_count(g, b, c).unwrap(), 2);
        assert_eq!(pair_orbit_count(g, b, t).unwrap(), 2);
        assert_eq!(pair_orbit_count(g, c, t).unwrap(), 2);
        // Pair orbits never fewer than orbits on the set itself.
        assert!(pair_orbit_count(g, b, b).unwrap() >= orbits(g, b).unwrap().len());
    }

    #[test]
    fn distinct_tritangent_pairs() {
        let (s, g) = w();
        let t = s.tritangents();
        let mut sizes: Vec<usize> = pair_orbits(g, t, t)
            .unwrap()
            .into_iter()
            .filter(|o| o.iter().all(|(i, j)| i != j))
            .map(|o| o.len())
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![45 * 12, 45 * 32]);
    }

    #[test]
    fn incidence_ranks() {
        let s = enumerate_points();
        assert_eq!(incidence_rank(s.boundaries(), s.cusps()), 16);
        assert_eq!(incidence_rank(s.boundaries(), s.tritangents()), 21);
        assert_eq!(incidence_rank(s.cusps(), s.tritangents()), 25);
    }

    #[test]
    fn adjoining_minus_identity_doubles() {
        let s = enumerate_points();
        assert_eq!(full_orthogonal_group(&s).order(), 103680);
    }
}
