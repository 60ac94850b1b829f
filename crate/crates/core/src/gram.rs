//! Quadruple intersection numbers of boundary and cusp divisors, and ranks
//! of the resulting Gram matrices on degree-two classes.

use crate::exactmath::int_rank;
use crate::fgeom::{perpendicular, DivisorId, F3Vector, PointSets, QClass};
use crate::orthgroup::{reflection_group, GroupError, GroupSet};
use crate::roots::{CuspTriad, RootError, RootLabel, RootSystem};
use serde::Serialize;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GramError {
    #[error("monomial has degree {0}, expected 4")]
    Degree(usize),
    #[error("no quadruple numbers are available for tritangent divisors")]
    Tritangent,
    #[error("index {index} out of range for {class}")]
    Index { class: &'static str, index: usize },
    #[error("{what}: expected {expected}, got {got}")]
    Dimension { what: &'static str, expected: usize, got: usize },
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A multiset of divisors in canonical sorted order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct DivisorMonomial(Vec<DivisorId>);

impl DivisorMonomial {
    pub fn new(mut ids: Vec<DivisorId>) -> Self {
        ids.sort();
        DivisorMonomial(ids)
    }

    pub fn ids(&self) -> &[DivisorId] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &DivisorMonomial) -> DivisorMonomial {
        DivisorMonomial::new(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Distinct ids with multiplicities.
    pub fn counts(&self) -> Vec<(DivisorId, usize)> {
        let mut out: Vec<(DivisorId, usize)> = Vec::new();
        for &d in &self.0 {
            match out.last_mut() {
                Some((e, n)) if *e == d => *n += 1,
                _ => out.push((d, 1)),
            }
        }
        out
    }
}

impl fmt::Display for DivisorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts()
            .into_iter()
            .map(|(d, n)| {
                let base = match d {
                    DivisorId::Boundary(i) => format!("B{i}"),
                    DivisorId::Cusp(i) => format!("C{i}"),
                    DivisorId::Tritangent(i) => format!("T{i}"),
                };
                if n == 1 { base } else { format!("{base}^{n}") }
            })
            .collect();
        f.write_str(&parts.join("·"))
    }
}

fn point(sets: &PointSets, d: DivisorId) -> Result<F3Vector, GramError> {
    let pts = sets.get(d.class());
    pts.get(d.index()).copied().ok_or(GramError::Index { class: d.class().name(), index: d.index() })
}

/// The degree of a product of four boundary or cusp divisors.
pub fn quad_product(sets: &PointSets, m: &DivisorMonomial) -> Result<i64, GramError> {
    if m.degree() != 4 {
        return Err(GramError::Degree(m.degree()));
    }
    if m.ids().iter().any(|d| d.class() == QClass::Tritangent) {
        return Err(GramError::Tritangent);
    }
    let counts = m.counts();
    let pts: Vec<F3Vector> = counts.iter().map(|(d, _)| point(sets, *d)).collect::<Result<_, _>>()?;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if !perpendicular(&pts[i], &pts[j]) {
                return Ok(0);
            }
        }
    }
    let cusps: Vec<usize> = counts.iter().filter(|(d, _)| d.class() == QClass::Cusp).map(|(_, n)| *n).collect();
    let mut pattern: Vec<usize> = counts.iter().filter(|(d, _)| d.class() == QClass::Boundary).map(|(_, n)| *n).collect();
    pattern.sort_unstable_by(|a, b| b.cmp(a));
    Ok(match (cusps.as_slice(), pattern.as_slice()) {
        ([], [1, 1, 1, 1]) => 1,
        ([], [2, 1, 1]) => -1,
        ([], [2, 2]) => 1,
        ([], [3, 1]) => 1,
        ([], [4]) => -3,
        ([1], [1, 1, 1]) => 1,
        ([2], [1, 1]) => -1,
        ([3], [1]) => 2,
        ([4], []) => -6,
        ([2], [2]) | ([1], [2, 1]) | ([1], [3]) => 0,
        // Two distinct cusp divisors are disjoint.
        _ => 0,
    })
}

fn quad_of(sets: &PointSets, a: &DivisorMonomial, b: &DivisorMonomial) -> i64 {
    quad_product(sets, &a.mul(b)).expect("boundary and cusp monomials of degree 4")
}

/// Symmetric Gram matrix of a list of degree-two monomials.
pub fn gram_matrix(sets: &PointSets, monos: &[DivisorMonomial]) -> Vec<Vec<i64>> {
    let n = monos.len();
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = quad_of(sets, &monos[i], &monos[j]);
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    g
}

/// Σ of all quadruple products of B̂ = ΣBᵢ and Ĉ = ΣCⱼ:
/// B̂⁴, B̂³Ĉ, B̂²Ĉ², B̂Ĉ³, Ĉ⁴.
pub fn invariant_sums(sets: &PointSets) -> [i64; 5] {
    let nb = sets.boundaries().len();
    let nc = sets.cusps().len();
    let mut out = [0i64; 5];
    for (slot, out_k) in out.iter_mut().enumerate() {
        let (kb, kc) = (4 - slot, slot);
        for bs in multisets(nb, kb) {
            for cs in multisets(nc, kc) {
                let ids: Vec<DivisorId> =
                    bs.iter().map(|&i| DivisorId::Boundary(i)).chain(cs.iter().map(|&j| DivisorId::Cusp(j))).collect();
                let v = quad_product(sets, &DivisorMonomial::new(ids)).expect("degree 4");
                if v != 0 {
                    *out_k += v * arrangements(&bs) * arrangements(&cs);
                }
            }
        }
    }
    out
}

/// Sorted multisets of size k from 0..n.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Number of orderings of a sorted multiset.
fn arrangements(s: &[usize]) -> i64 {
    let fact = |n: usize| (1..=n as i64).product::<i64>();
    let mut denom = 1;
    let mut i = 0;
    while i < s.len() {
        let j = (i..s.len()).find(|&j| s[j] != s[i]).unwrap_or(s.len());
        denom *= fact(j - i);
        i = j;
    }
    fact(s.len()) / denom
}

fn b(i: usize) -> DivisorId {
    DivisorId::Boundary(i)
}

fn c(j: usize) -> DivisorId {
    DivisorId::Cusp(j)
}

/// Which root of each A₂ triple represents it in the cusp classes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TripleChoice {
    First,
    Last,
}

/// Data shared by the rank computations.
pub struct GramData {
    rs: RootSystem,
    triads: Vec<CuspTriad>,
}

impl GramData {
    pub fn new() -> Result<Self, GramError> {
        let rs = RootSystem::new()?;
        let triads = rs.cusp_triads()?;
        Ok(GramData { rs, triads })
    }

    pub fn sets(&self) -> &PointSets {
        self.rs.sets()
    }

    pub fn roots(&self) -> &RootSystem {
        &self.rs
    }

    /// Bᵢ² for the 36 boundary divisors.
    pub fn boundary_squares(&self) -> Vec<DivisorMonomial> {
        (0..self.sets().boundaries().len()).map(|i| DivisorMonomial::new(vec![b(i), b(i)])).collect()
    }

    /// The 270 intersections BᵢBⱼ of distinct meeting boundary divisors.
    pub fn boundary_pairs(&self) -> Vec<DivisorMonomial> {
        let pts = self.sets().boundaries();
        let mut out = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if perpendicular(&pts[i], &pts[j]) {
                    out.push(DivisorMonomial::new(vec![b(i), b(j)]));
                }
            }
        }
        out
    }

    /// The 306 generators of W: the 270 pairs followed by the 36 squares.
    pub fn w_basis(&self) -> Vec<DivisorMonomial> {
        let mut out = self.boundary_pairs();
        out.extend(self.boundary_squares());
        out
    }

    /// BᵢCⱼ with one boundary divisor per A₂ triple of each cusp.
    pub fn cusp_classes(&self, choice: TripleChoice) -> Vec<DivisorMonomial> {
        let mut out = Vec::new();
        for t in &self.triads {
            for triple in &t.triples {
                let root = match choice {
                    TripleChoice::First => triple[0],
                    TripleChoice::Last => triple[2],
                };
                out.push(DivisorMonomial::new(vec![b(self.rs.boundary_index(root)), c(t.index)]));
            }
        }
        out
    }

    fn boundary_of(&self, label: RootLabel) -> usize {
        self.rs.boundary_index(self.rs.index_of(label).expect("positive root"))
    }

    /// S_h⁺ − S_h⁻ as (monomial, coefficient) pairs: S_h⁺ sums B_{ij}B_{ijk},
    /// S_h⁻ sums B_{ij}B_{klm} with {k,l,m} disjoint from {i,j}.
    pub fn s_h(&self) -> Vec<(DivisorMonomial, i64)> {
        let triple = |mut t: [u8; 3]| {
            t.sort_unstable();
            RootLabel::Triple(t[0], t[1], t[2])
        };
        let mut out = Vec::new();
        for i in 1..=6u8 {
            for j in i + 1..=6 {
                let bij = self.boundary_of(RootLabel::Pair(i, j));
                for k in (1..=6).filter(|&k| k != i && k != j) {
                    let m = DivisorMonomial::new(vec![b(bij), b(self.boundary_of(triple([i, j, k])))]);
                    out.push((m, 1));
                }
                let rest: Vec<u8> = (1..=6).filter(|&k| k != i && k != j).collect();
                for skip in 0..4 {
                    let t: Vec<u8> = rest.iter().enumerate().filter(|(x, _)| *x != skip).map(|(_, &v)| v).collect();
                    let m = DivisorMonomial::new(vec![b(bij), b(self.boundary_of(triple([t[0], t[1], t[2]])))]);
                    out.push((m, -1));
                }
            }
        }
        out
    }

    /// Orbit of S_h, written in the W basis, under the reflection group.
    pub fn s_h_orbit(&self, g: &GroupSet) -> Result<Vec<Vec<i64>>, GramError> {
        let basis = self.w_basis();
        let index: HashMap<&DivisorMonomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut seed = vec![0i64; basis.len()];
        for (m, k) in self.s_h() {
            seed[index[&m]] += k;
        }
        let perms = g.generator_perms(self.sets().boundaries())?;
        let mono_perms: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| {
                basis
                    .iter()
                    .map(|m| {
                        let img = DivisorMonomial::new(m.ids().iter().map(|d| b(p[d.index()])).collect());
                        index[&img]
                    })
                    .collect()
            })
            .collect();
        Ok(orbit(seed, &mono_perms))
    }

    /// The seed relation among divisor classes, in coordinates
    /// (36 boundary, then 40 cusp).
    pub fn relation_seed(&self) -> Result<Vec<i64>, GramError> {
        let sets = self.sets();
        let v = sets.index_in(QClass::Cusp, &F3Vector::new([1, -1, 1, 0, 0])).ok_or(GramError::Index { class: "cusp", index: 0 })?;
        let w = sets.index_in(QClass::Cusp, &F3Vector::new([1, 1, -1, 0, 0])).ok_or(GramError::Index { class: "cusp", index: 1 })?;
        Ok(self.divisor_coords(&self.rs.lambda_relation(v, w)))
    }

    pub fn divisor_coords(&self, terms: &[(DivisorId, i64)]) -> Vec<i64> {
        let nb = self.sets().boundaries().len();
        let mut out = vec![0i64; nb + self.sets().cusps().len()];
        for &(d, k) in terms {
            match d {
                DivisorId::Boundary(i) => out[i] += k,
                DivisorId::Cusp(j) => out[nb + j] += k,
                DivisorId::Tritangent(_) => {}
            }
        }
        out
    }

    /// Permutations of the 76 divisor coordinates induced by the generators.
    pub fn divisor_perms(&self, g: &GroupSet) -> Result<Vec<Vec<usize>>, GramError> {
        let nb = self.sets().boundaries().len();
        let pb = g.generator_perms(self.sets().boundaries())?;
        let pc = g.generator_perms(self.sets().cusps())?;
        Ok(pb.iter().zip(&pc).map(|(x, y)| x.iter().copied().chain(y.iter().map(|&j| nb + j)).collect()).collect())
    }

    /// Degree-three monomials in boundary and cusp divisors that can pair
    /// nontrivially with a divisor.
    pub fn cubic_monomials(&self) -> Vec<DivisorMonomial> {
        let sets = self.sets();
        let nb = sets.boundaries().len();
        let ids: Vec<DivisorId> = (0..nb).map(b).chain((0..sets.cusps().len()).map(c)).collect();
        let mut out = Vec::new();
        for s in multisets(ids.len(), 3) {
            let m: Vec<DivisorId> = s.iter().map(|&i| ids[i]).collect();
            let mono = DivisorMonomial::new(m);
            let counts = mono.counts();
            if counts.iter().filter(|(d, _)| d.class() == QClass::Cusp).count() > 1 {
                continue;
            }
            let pts: Vec<F3Vector> = counts.iter().map(|(d, _)| point(sets, *d).expect("valid id")).collect();
            let ok = (0..pts.len()).all(|i| (i + 1..pts.len()).all(|j| perpendicular(&pts[i], &pts[j])));
            if ok {
                out.push(mono);
            }
        }
        out
    }

    /// Pairing of the 76 divisors with the given cubic monomials.
    pub fn pairing_matrix(&self, cubics: &[DivisorMonomial]) -> Vec<Vec<i64>> {
        let sets = self.sets();
        let nb = sets.boundaries().len();
        (0..nb + sets.cusps().len())
            .map(|i| {
                let d = if i < nb { b(i) } else { c(i - nb) };
                let dm = DivisorMonomial::new(vec![d]);
                cubics.iter().map(|m| quad_product(sets, &dm.mul(m)).expect("degree 4")).collect()
            })
            .collect()
    }
}

/// Orbit of an integer vector under coordinate permutations, in
/// breadth-first order.
pub fn orbit(seed: Vec<i64>, perms: &[Vec<usize>]) -> Vec<Vec<i64>> {
    let mut seen: HashSet<Vec<i64>> = HashSet::from([seed.clone()]);
    let mut out = vec![seed.clone()];
    let mut queue = VecDeque::from([seed]);
    while let Some(v) = queue.pop_front() {
        for p in perms {
            let mut img = vec![0i64; v.len()];
            for (i, &x) in v.iter().enumerate() {
                img[p[i]] = x;
            }
            if seen.insert(img.clone()) {
                out.push(img.clone());
                queue.push_back(img);
            }
        }
    }
    out
}

fn principal(g: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    g[..n].iter().map(|r| r[..n].to_vec()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rank306 {
    pub full: usize,
    pub pairs_only: usize,
    pub symmetric: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspRank {
    pub rank: usize,
    pub rank_last_root: usize,
    pub block_rank: usize,
    /// Every 3×3 diagonal block is [[0,−1,−1],[−1,0,−1],[−1,−1,0]] and all
    /// other entries vanish.
    pub block_structure: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub cusp: usize,
    pub squares_increase: usize,
    pub s_h_increase: usize,
    pub total: usize,
    pub orthogonal: bool,
    pub s_h_plus_terms: usize,
    pub s_h_minus_terms: usize,
    pub s_h_orbit: usize,
}

impl GramData {
    /// (BᵢBⱼ)-style matrix of the 36 squares: −3 on the diagonal, 1 where
    /// perpendicular.
    pub fn b2_matrix(&self) -> Vec<Vec<i64>> {
        gram_matrix(self.sets(), &self.boundary_squares())
    }

    pub fn rank_b2(&self) -> usize {
        int_rank(&self.b2_matrix())
    }

    pub fn matrix_306(&self) -> Vec<Vec<i64>> {
        gram_matrix(self.sets(), &self.w_basis())
    }

    pub fn rank_306(&self) -> Rank306 {
        let g = self.matrix_306();
        let symmetric = (0..g.len()).all(|i| (0..i).all(|j| g[i][j] == g[j][i]));
        Rank306 { full: int_rank(&g), pairs_only: int_rank(&principal(&g, 270)), symmetric }
    }

    pub fn cusp_matrix(&self, choice: TripleChoice) -> Vec<Vec<i64>> {
        gram_matrix(self.sets(), &self.cusp_classes(choice))
    }

    pub fn rank_cusp_classes(&self) -> CuspRank {
        let g = self.cusp_matrix(TripleChoice::First);
        let block = [[0, -1, -1], [-1, 0, -1], [-1, -1, 0]];
        let block_structure =
            (0..g.len()).all(|i| (0..g.len()).all(|j| g[i][j] == if i / 3 == j / 3 { block[i % 3][j % 3] } else { 0 }));
        CuspRank {
            rank: int_rank(&g),
            rank_last_root: int_rank(&self.cusp_matrix(TripleChoice::Last)),
            block_rank: int_rank(&block.iter().map(|r| r.to_vec()).collect::<Vec<_>>()),
            block_structure,
        }
    }

    /// Rank of the span of the orbit of the seed relation.
    pub fn relation_space_rank(&self, g: &GroupSet) -> Result<(usize, usize), GramError> {
        let vecs = orbit(self.relation_seed()?, &self.divisor_perms(g)?);
        Ok((int_rank(&vecs), vecs.len()))
    }

    /// Cusp classes, then the 36 squares, then the S_h orbit up to sign:
    /// ranks of the successive Gram matrices.
    pub fn decomposition(&self, g: &GroupSet) -> Result<Decomposition, GramError> {
        let sets = self.sets();
        let cusp = self.cusp_classes(TripleChoice::First);
        let w = self.w_basis();
        let mut basis = cusp.clone();
        basis.extend(w.iter().cloned());
        let big = gram_matrix(sets, &basis);
        let nc = cusp.len();
        let mut rows: Vec<Vec<(usize, i64)>> = (0..nc).map(|i| vec![(i, 1)]).collect();
        rows.extend((270..306).map(|k| vec![(nc + k, 1)]));
        let orbit_vecs = self.s_h_orbit(g)?;
        let mut reps: Vec<&Vec<i64>> = Vec::new();
        for v in &orbit_vecs {
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            if !reps.iter().any(|r| **r == neg) {
                reps.push(v);
            }
        }
        for v in &reps {
            rows.push(v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(k, &x)| (nc + k, x)).collect());
        }
        let n = basis.len();
        let xg: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| {
                let mut acc = vec![0i64; n];
                for &(k, x) in r {
                    for (a, &gv) in acc.iter_mut().zip(&big[k]) {
                        *a += x * gv;
                    }
                }
                acc
            })
            .collect();
        let gram: Vec<Vec<i64>> = xg.iter().map(|a| rows.iter().map(|r| r.iter().map(|&(k, x)| x * a[k]).sum()).collect()).collect();
        let r1 = int_rank(&principal(&gram, nc));
        let r2 = int_rank(&principal(&gram, nc + 36));
        let r3 = int_rank(&gram);
        let orthogonal = (0..nc).all(|i| (nc..nc + 36).all(|j| gram[i][j] == 0));
        let terms = self.s_h();
        Ok(Decomposition {
            cusp: r1,
            squares_increase: r2 - r1,
            s_h_increase: r3 - r2,
            total: r3,
            orthogonal,
            s_h_plus_terms: terms.iter().filter(|(_, k)| *k > 0).count(),
            s_h_minus_terms: terms.iter().filter(|(_, k)| *k < 0).count(),
            s_h_orbit: orbit_vecs.len(),
        })
    }

    /// Rank of the divisor/cubic pairing, computed as the rank of P·Pᵀ.
    pub fn pairing_rank(&self) -> usize {
        let p = self.pairing_matrix(&self.cubic_monomials());
        let ppt: Vec<Vec<i64>> = p.iter().map(|x| p.iter().map(|y| x.iter().zip(y).map(|(a, b)| a * b).sum()).collect()).collect();
        int_rank(&ppt)
    }
}

/// Every BᵢCⱼ·B_k² vanishes.
pub fn cusp_square_orthogonality(sets: &PointSets) -> bool {
    let (nb, nc) = (sets.boundaries().len(), sets.cusps().len());
    (0..nb).all(|i| {
        (0..nc).all(|j| (0..nb).all(|k| quad_product(sets, &DivisorMonomial::new(vec![b(i), c(j), b(k), b(k)])).expect("degree 4") == 0))
    })
}

/// Comma-separated rows.
pub fn to_csv(m: &[Vec<i64>]) -> String {
    let mut s = String::new();
    for r in m {
        let line: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

/// Group built from boundary reflections, for the orbit computations.
pub fn default_group(sets: &PointSets) -> GroupSet {
    reflection_group(sets)
}
