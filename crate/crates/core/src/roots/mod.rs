//! E₆ roots in the lattice Z·l ⊕ Z·e₁…e₆ with form diag(1,−1,…,−1), the
//! quotient map to F₃⁵, and the labels derived from it: tritangent symbols,
//! cusp triads, the sixteen surfaces and the divisors of λ and λ−1.

pub mod tables;

use crate::exactmath::{int, solve, BigRational, ExactMatrix};
use crate::fgeom::{bilinear, enumerate_points, perpendicular, quadratic, DivisorId, F3Vector, GeometryError, PointSets, QClass};
use crate::toricfan::{character_divisor, CharacterMonomial, FanError, LatticePoint, Plane, WeylFan};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("vector {0:?} is not in the root lattice")]
    NotInRootLattice([i64; 7]),
    #[error("no root matches {0}")]
    NoMatch(String),
    #[error("several roots match {0}")]
    Ambiguous(String),
    #[error("roots perpendicular to {0} do not split into three A2 triples")]
    TriadPartition(F3Vector),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// h_ij = eᵢ−eⱼ, h_ijk = l−eᵢ−eⱼ−eₖ, h = 2l−Σeᵢ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub enum RootLabel {
    Pair(u8, u8),
    Triple(u8, u8, u8),
    Top,
}

impl RootLabel {
    pub fn indices(&self) -> Vec<u8> {
        match *self {
            RootLabel::Pair(i, j) => vec![i, j],
            RootLabel::Triple(i, j, k) => vec![i, j, k],
            RootLabel::Top => vec![],
        }
    }

    pub fn vector(&self) -> [i64; 7] {
        let mut v = [0i64; 7];
        match *self {
            RootLabel::Pair(i, j) => {
                v[i as usize] = 1;
                v[j as usize] = -1;
            }
            RootLabel::Triple(..) => {
                v[0] = 1;
                for i in self.indices() {
                    v[i as usize] = -1;
                }
            }
            RootLabel::Top => {
                v = [2, -1, -1, -1, -1, -1, -1];
            }
        }
        v
    }

    /// Parses `h12`, `h123` or `h`.
    pub fn parse(s: &str) -> Option<RootLabel> {
        let digits: Vec<u8> = s.strip_prefix('h')?.bytes().map(|b| b.wrapping_sub(b'0')).collect();
        if digits.iter().any(|&d| !(1..=6).contains(&d)) || digits.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        match digits[..] {
            [] => Some(RootLabel::Top),
            [i, j] => Some(RootLabel::Pair(i, j)),
            [i, j, k] => Some(RootLabel::Triple(i, j, k)),
            _ => None,
        }
    }
}

impl fmt::Display for RootLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: String = self.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "h{d}")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct E6Root {
    pub label: RootLabel,
    pub vector: [i64; 7],
}

pub fn lattice_dot(a: &[i64; 7], b: &[i64; 7]) -> i64 {
    a[0] * b[0] - (1..7).map(|i| a[i] * b[i]).sum::<i64>()
}

/// K = −3l + Σeᵢ.
pub fn canonical_class() -> [i64; 7] {
    [-3, 1, 1, 1, 1, 1, 1]
}

/// The 36 positive roots: pairs, then triples, each lexicographic, then h.
pub fn positive_roots() -> Vec<E6Root> {
    let mut labels = Vec::new();
    for i in 1..=6 {
        for j in i + 1..=6 {
            labels.push(RootLabel::Pair(i, j));
        }
    }
    for i in 1..=6 {
        for j in i + 1..=6 {
            for k in j + 1..=6 {
                labels.push(RootLabel::Triple(i, j, k));
            }
        }
    }
    labels.push(RootLabel::Top);
    labels.into_iter().map(|label| E6Root { label, vector: label.vector() }).collect()
}

/// Simple roots in the order used for expansions, with their images.
pub const SIMPLE_ROOTS: [RootLabel; 6] = [
    RootLabel::Pair(1, 2),
    RootLabel::Triple(1, 2, 3),
    RootLabel::Pair(2, 3),
    RootLabel::Pair(3, 4),
    RootLabel::Pair(4, 5),
    RootLabel::Pair(5, 6),
];

const SIMPLE_IMAGES: [[i64; 5]; 6] = [
    [1, -1, 0, 0, 0],
    [0, 0, 0, 1, 1],
    [0, 1, -1, 0, 0],
    [0, 0, 1, -1, 0],
    [0, 0, 0, 1, -1],
    [1, 1, 1, 1, -1],
];

/// Positions in [`SIMPLE_ROOTS`] of the D₄ simple roots, in character
/// order (λ, ρ, ν, μ).
const D4_SIMPLE_POS: [usize; 4] = [2, 3, 4, 1];

/// D₄ simple roots in ε-coordinates, same order.
const D4_SIMPLE_EPS: [[i64; 4]; 4] = [[1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1], [0, 0, 1, 1]];

/// Symbol of a tritangent plane.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum TritangentLabel {
    /// ⟨aᵢ, bⱼ, c_ij⟩ with i ≠ j.
    Ordered(u8, u8),
    /// ⟨c_ij, c_kl, c_mn⟩, pairs sorted.
    Triple([(u8, u8); 3]),
}

impl TritangentLabel {
    pub fn all() -> Vec<TritangentLabel> {
        let mut out = Vec::new();
        for i in 1..=6 {
            for j in 1..=6 {
                if i != j {
                    out.push(TritangentLabel::Ordered(i, j));
                }
            }
        }
        for m in perfect_matchings() {
            out.push(TritangentLabel::Triple(m));
        }
        out
    }

    /// The three lines of the plane as classes in the Picard lattice.
    pub fn lines(&self) -> [[i64; 7]; 3] {
        let a = |i: u8| {
            let mut v = [2, -1, -1, -1, -1, -1, -1];
            v[i as usize] = 0;
            v
        };
        let b = |j: u8| {
            let mut v = [0; 7];
            v[j as usize] = 1;
            v
        };
        let c = |i: u8, j: u8| {
            let mut v = [1, 0, 0, 0, 0, 0, 0];
            v[i as usize] = -1;
            v[j as usize] = -1;
            v
        };
        match *self {
            TritangentLabel::Ordered(i, j) => [a(i), b(j), c(i, j)],
            TritangentLabel::Triple([p, q, r]) => [c(p.0, p.1), c(q.0, q.1), c(r.0, r.1)],
        }
    }
}

impl fmt::Display for TritangentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TritangentLabel::Ordered(i, j) => write!(f, "({i}{j})"),
            TritangentLabel::Triple(m) => write!(f, "({}{}.{}{}.{}{})", m[0].0, m[0].1, m[1].0, m[1].1, m[2].0, m[2].1),
        }
    }
}

/// The 15 partitions of {1..6} into pairs, each sorted.
fn perfect_matchings() -> Vec<[(u8, u8); 3]> {
    let mut out = Vec::new();
    for j in 2..=6u8 {
        let rest: Vec<u8> = (2..=6).filter(|&x| x != j).collect();
        for &l in &rest[1..] {
            let k = rest[0];
            let mn: Vec<u8> = rest.iter().copied().filter(|&x| x != k && x != l).collect();
            out.push([(1, j), (k, l), (mn[0], mn[1])]);
        }
    }
    out
}

/// Label of a cusp by its three orthogonal A₂'s.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum TriadLabel {
    /// [ijk.lmn]: the triple {h, h_ijk, h_lmn} is present.
    Split([u8; 3], [u8; 3]),
    /// [X.M.Y]: the pairs cycle X → M → Y → X.
    Cycle([u8; 2], [u8; 2], [u8; 2]),
}

impl fmt::Display for TriadLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriadLabel::Split(a, b) => write!(f, "[{}{}{}.{}{}{}]", a[0], a[1], a[2], b[0], b[1], b[2]),
            TriadLabel::Cycle(x, m, y) => write!(f, "[{}{}.{}{}.{}{}]", x[0], x[1], m[0], m[1], y[0], y[1]),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Tritangent {
    pub label: TritangentLabel,
    pub point: F3Vector,
    /// Index in N₁.
    pub index: usize,
    /// The 12 positive roots orthogonal to the three lines.
    pub d4: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CuspTriad {
    pub point: F3Vector,
    /// Index in N₀.
    pub index: usize,
    /// Root indices; each triple sorted, triples ordered by first root.
    pub triples: [[usize; 3]; 3],
    pub label: TriadLabel,
}

#[derive(Clone, Debug, Serialize)]
pub struct Surface {
    pub alpha: usize,
    pub beta: usize,
    pub characters: [CharacterMonomial; 2],
    pub cusp: F3Vector,
    pub cusp_index: usize,
    pub label: TriadLabel,
}

impl Surface {
    pub fn equation(&self) -> String {
        format!("{}={}=1", self.characters[0], self.characters[1])
    }

    pub fn plane(&self) -> Result<Plane, FanError> {
        Plane::from_characters(&self.characters[0], &self.characters[1])
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct D4RootRow {
    pub vector: LatticePoint,
    pub character: CharacterMonomial,
    pub root: usize,
    pub point: F3Vector,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShortRayRow {
    pub ray: LatticePoint,
    pub root: usize,
    pub point: F3Vector,
}

#[derive(Clone, Debug, Serialize)]
pub struct LongRayRow {
    pub ray: LatticePoint,
    pub cusp: F3Vector,
    pub cusp_index: usize,
    pub label: TriadLabel,
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaRow {
    pub ray: LatticePoint,
    pub multiplicity: i64,
    pub divisor: DivisorId,
    pub label: String,
    pub point: F3Vector,
}

/// Positive roots with cached expansions and images.
#[derive(Clone, Debug)]
pub struct RootSystem {
    roots: Vec<E6Root>,
    expansions: Vec<[i64; 6]>,
    images: Vec<F3Vector>,
    boundary: Vec<usize>,
    sets: PointSets,
}

impl RootSystem {
    pub fn new() -> Result<Self, RootError> {
        let roots = positive_roots();
        let sets = enumerate_points();
        let simple = simple_matrix();
        let mut expansions = Vec::new();
        let mut images = Vec::new();
        let mut boundary = Vec::new();
        for r in &roots {
            let c = expand_with(&simple, &r.vector)?;
            let img = image_of(&c).normalized();
            boundary.push(sets.index_in(QClass::Boundary, &img).ok_or(GeometryError::Unknown(img))?);
            expansions.push(c);
            images.push(img);
        }
        Ok(RootSystem { roots, expansions, images, boundary, sets })
    }

    pub fn roots(&self) -> &[E6Root] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &E6Root {
        &self.roots[i]
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn sets(&self) -> &PointSets {
        &self.sets
    }

    pub fn index_of(&self, label: RootLabel) -> Option<usize> {
        self.roots.iter().position(|r| r.label == label)
    }

    pub fn find_vector(&self, v: &[i64; 7]) -> Option<usize> {
        self.roots.iter().position(|r| r.vector == *v)
    }

    /// Coefficients in the simple roots, in [`SIMPLE_ROOTS`] order.
    pub fn expansion(&self, i: usize) -> [i64; 6] {
        self.expansions[i]
    }

    pub fn expand(&self, v: &[i64; 7]) -> Result<[i64; 6], RootError> {
        expand_with(&simple_matrix(), v)
    }

    /// Linear image of a root-lattice vector, not normalized.
    pub fn pi_vector(&self, v: &[i64; 7]) -> Result<F3Vector, RootError> {
        Ok(image_of(&self.expand(v)?))
    }

    /// Normalized image of a positive root.
    pub fn pi(&self, i: usize) -> F3Vector {
        self.images[i]
    }

    pub fn boundary_index(&self, i: usize) -> usize {
        self.boundary[i]
    }

    pub fn root_of_boundary(&self, j: usize) -> Option<usize> {
        self.boundary.iter().position(|&b| b == j)
    }

    pub fn is_d4(&self, i: usize) -> bool {
        let c = self.expansions[i];
        (0..6).all(|k| c[k] == 0 || D4_SIMPLE_POS.contains(&k))
    }

    /// The 12 positive roots of the D₄ spanned by h23, h34, h45, h123.
    pub fn d4_roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_d4(i)).collect()
    }

    /// The character of a D₄ root.
    pub fn character(&self, i: usize) -> Option<CharacterMonomial> {
        if !self.is_d4(i) {
            return None;
        }
        let c = self.expansions[i];
        Some(CharacterMonomial { exps: D4_SIMPLE_POS.map(|k| c[k]) })
    }

    /// The positive root of a short ray: the unique α with
    /// −(α·σ_k) = ⟨τ′, δ_k⟩ for the D₄ simple roots σ_k (lattice) and δ_k
    /// (ε-coordinates), where τ′ = −τ for half vectors with an even number
    /// of minus signs and τ′ = τ otherwise.
    pub fn root_for_short(&self, tau: &LatticePoint) -> Result<usize, RootError> {
        if tau.norm4() != 4 {
            return Err(RootError::NoMatch(format!("{tau} is not short")));
        }
        let d = tau.doubled();
        let flip = tau.is_half_vector() && d.iter().filter(|&&x| x < 0).count() % 2 == 0;
        let d = if flip { d.map(|x| -x) } else { d };
        let want: Vec<i64> = D4_SIMPLE_EPS.iter().map(|e| e.iter().zip(&d).map(|(a, b)| a * b).sum::<i64>() / 2).collect();
        let sigma: Vec<[i64; 7]> = D4_SIMPLE_POS.iter().map(|&k| SIMPLE_ROOTS[k].vector()).collect();
        let hits: Vec<usize> = (0..self.len())
            .filter(|&i| sigma.iter().zip(&want).all(|(s, &w)| -lattice_dot(&self.roots[i].vector, s) == w))
            .collect();
        match hits[..] {
            [i] => Ok(i),
            [] => Err(RootError::NoMatch(tau.to_string())),
            _ => Err(RootError::Ambiguous(tau.to_string())),
        }
    }

    /// The cusp of a long ray: the unique isotropic point perpendicular to
    /// the images of the roots of all short rays sharing a chamber with it.
    pub fn cusp_for_long(&self, w: &WeylFan, ray: usize) -> Result<usize, RootError> {
        let mut imgs = Vec::new();
        for n in w.fan().neighbours(ray) {
            if w.is_short(n) {
                imgs.push(self.pi(self.root_for_short(&w.points()[n])?));
            }
        }
        let hits: Vec<usize> = (0..self.sets.cusps().len())
            .filter(|&j| imgs.iter().all(|x| perpendicular(x, &self.sets.cusps()[j])))
            .collect();
        match hits[..] {
            [j] => Ok(j),
            [] => Err(RootError::NoMatch(w.points()[ray].to_string())),
            _ => Err(RootError::Ambiguous(w.points()[ray].to_string())),
        }
    }

    /// The divisor of the compactification attached to a ray.
    pub fn divisor_of_ray(&self, w: &WeylFan, ray: usize) -> Result<DivisorId, RootError> {
        if w.is_short(ray) {
            Ok(DivisorId::Boundary(self.boundary_index(self.root_for_short(&w.points()[ray])?)))
        } else {
            Ok(DivisorId::Cusp(self.cusp_for_long(w, ray)?))
        }
    }

    /// The 45 tritangent planes with their points, sorted in table order.
    pub fn tritangents(&self) -> Result<Vec<Tritangent>, RootError> {
        let mut out = Vec::new();
        for label in TritangentLabel::all() {
            let lines = label.lines();
            let d4: Vec<usize> =
                (0..self.len()).filter(|&i| lines.iter().all(|l| lattice_dot(&self.roots[i].vector, l) == 0)).collect();
            let imgs: Vec<F3Vector> = d4.iter().map(|&i| self.pi(i)).collect();
            let hits: Vec<F3Vector> = self
                .sets
                .tritangents()
                .iter()
                .chain(self.sets.cusps())
                .chain(self.sets.boundaries())
                .copied()
                .filter(|p| imgs.iter().all(|x| perpendicular(x, p)))
                .collect();
            let point = match hits[..] {
                [p] => p,
                [] => return Err(RootError::NoMatch(label.to_string())),
                _ => return Err(RootError::Ambiguous(label.to_string())),
            };
            let index = self.sets.index_in(QClass::Tritangent, &point).ok_or(GeometryError::Unknown(point))?;
            out.push(Tritangent { label, point, index, d4 });
        }
        out.sort_by_key(|t| t.point.table_key());
        Ok(out)
    }

    /// The 9 positive roots whose images are perpendicular to `v`.
    pub fn roots_perp(&self, v: &F3Vector) -> Vec<usize> {
        (0..self.len()).filter(|&i| perpendicular(&self.pi(i), v)).collect()
    }

    pub fn triad(&self, index: usize) -> Result<CuspTriad, RootError> {
        let v = self.sets.cusps()[index];
        let nine = self.roots_perp(&v);
        if nine.len() != 9 {
            return Err(RootError::TriadPartition(v));
        }
        let mut left = nine.clone();
        let mut triples = Vec::new();
        while let Some(&first) = left.first() {
            let group: Vec<usize> = left
                .iter()
                .copied()
                .filter(|&r| r == first || lattice_dot(&self.roots[r].vector, &self.roots[first].vector) != 0)
                .collect();
            if group.len() != 3 {
                return Err(RootError::TriadPartition(v));
            }
            left.retain(|r| !group.contains(r));
            triples.push([group[0], group[1], group[2]]);
        }
        for (a, ta) in triples.iter().enumerate() {
            for tb in &triples[a + 1..] {
                for &x in ta {
                    for &y in tb {
                        if lattice_dot(&self.roots[x].vector, &self.roots[y].vector) != 0 {
                            return Err(RootError::TriadPartition(v));
                        }
                    }
                }
            }
            for (i, &x) in ta.iter().enumerate() {
                for &y in &ta[i + 1..] {
                    if lattice_dot(&self.roots[x].vector, &self.roots[y].vector) == 0 {
                        return Err(RootError::TriadPartition(v));
                    }
                }
            }
        }
        let triples = [triples[0], triples[1], triples[2]];
        let label = self.triad_label(&v, &triples).ok_or(RootError::TriadPartition(v))?;
        Ok(CuspTriad { point: v, index, triples, label })
    }

    fn triad_label(&self, v: &F3Vector, triples: &[[usize; 3]; 3]) -> Option<TriadLabel> {
        let label = |i: usize| self.roots[i].label;
        if let Some(t) = triples.iter().find(|t| t.iter().any(|&r| label(r) == RootLabel::Top)) {
            let mut parts: Vec<[u8; 3]> = t
                .iter()
                .filter_map(|&r| match label(r) {
                    RootLabel::Triple(i, j, k) => Some([i, j, k]),
                    _ => None,
                })
                .collect();
            if parts.len() != 2 {
                return None;
            }
            parts.sort_by_key(|p| !p.contains(&1));
            return Some(TriadLabel::Split(parts[0], parts[1]));
        }
        let mut next: HashMap<[u8; 2], [u8; 2]> = HashMap::new();
        for t in triples {
            let pairs: Vec<[u8; 2]> = t
                .iter()
                .filter_map(|&r| match label(r) {
                    RootLabel::Pair(i, j) => Some([i, j]),
                    _ => None,
                })
                .collect();
            let trip: Vec<Vec<u8>> = t.iter().filter(|&&r| matches!(label(r), RootLabel::Triple(..))).map(|&r| label(r).indices()).collect();
            if pairs.len() != 1 || trip.len() != 2 {
                return None;
            }
            let q: Vec<u8> = trip[0].iter().copied().filter(|x| trip[1].contains(x)).collect();
            if q.len() != 2 {
                return None;
            }
            next.insert(pairs[0], [q[0], q[1]]);
        }
        let zeros: Vec<u8> = (0..5).filter(|&i| v.coords()[i] == 0).map(|i| i as u8 + 1).collect();
        if zeros.len() != 2 {
            return None;
        }
        let m = [zeros[0], zeros[1]];
        let y = *next.get(&m)?;
        let x = *next.iter().find(|(_, to)| **to == m)?.0;
        Some(TriadLabel::Cycle(x, m, y))
    }

    /// Triads of all 40 cusps, indexed like N₀.
    pub fn cusp_triads(&self) -> Result<Vec<CuspTriad>, RootError> {
        (0..self.sets.cusps().len()).map(|i| self.triad(i)).collect()
    }

    /// The 16 A₂ subsystems {α, β, α+β} of the D₄, sorted by their cusp in
    /// table order.
    pub fn surfaces(&self) -> Result<Vec<Surface>, RootError> {
        let d4 = self.d4_roots();
        let mut out = Vec::new();
        for (a, &alpha) in d4.iter().enumerate() {
            for &beta in &d4[a + 1..] {
                let (va, vb) = (self.roots[alpha].vector, self.roots[beta].vector);
                let sum: [i64; 7] = std::array::from_fn(|k| va[k] + vb[k]);
                if self.find_vector(&sum).is_none() {
                    continue;
                }
                let pa = self.pi_vector(&self.roots[alpha].vector)?;
                let pb = self.pi_vector(&self.roots[beta].vector)?;
                let cusp = [pa.add(&pb), pa.add(&pb.neg())]
                    .into_iter()
                    .find(|x| !x.is_zero() && quadratic(x) == 0)
                    .ok_or_else(|| RootError::NoMatch(format!("cusp for {}", self.roots[alpha].label)))?
                    .normalized();
                let cusp_index = self.sets.index_in(QClass::Cusp, &cusp).ok_or(GeometryError::Unknown(cusp))?;
                let label = self.triad(cusp_index)?.label;
                let characters = [self.character(alpha).unwrap_or_default(), self.character(beta).unwrap_or_default()];
                out.push(Surface { alpha, beta, characters, cusp, cusp_index, label });
            }
        }
        out.sort_by_key(|s| s.cusp.table_key());
        Ok(out)
    }

    pub fn d4_rows(&self) -> Vec<D4RootRow> {
        let mut rows: Vec<D4RootRow> = self
            .d4_roots()
            .into_iter()
            .map(|i| {
                let character = self.character(i).unwrap_or_default();
                let vector = LatticePoint::new(character.eps_coords().map(|x| 2 * x)).expect("even coordinates");
                D4RootRow { vector, character, root: i, point: self.pi(i) }
            })
            .collect();
        rows.sort_by_key(|r| r.point.table_key());
        rows
    }

    pub fn short_rows(&self, w: &WeylFan) -> Result<Vec<ShortRayRow>, RootError> {
        let mut rows = Vec::new();
        for (i, p) in w.points().iter().enumerate() {
            if w.is_short(i) {
                let root = self.root_for_short(p)?;
                rows.push(ShortRayRow { ray: *p, root, point: self.pi(root) });
            }
        }
        rows.sort_by_key(|r| r.point.table_key());
        Ok(rows)
    }

    pub fn long_rows(&self, w: &WeylFan) -> Result<Vec<LongRayRow>, RootError> {
        let mut rows = Vec::new();
        for (i, p) in w.points().iter().enumerate() {
            if !w.is_short(i) {
                let j = self.cusp_for_long(w, i)?;
                rows.push(LongRayRow { ray: *p, cusp: self.sets.cusps()[j], cusp_index: j, label: self.triad(j)?.label });
            }
        }
        rows.sort_by_key(|r| r.cusp.table_key());
        Ok(rows)
    }

    /// n_τ = ⟨λ, τ⟩ over all 48 rays, in fan order.
    pub fn divisor_of_lambda(&self, w: &WeylFan) -> Vec<(LatticePoint, i64)> {
        let n = character_divisor(w, &CharacterMonomial::lambda());
        w.points().iter().copied().zip(n).collect()
    }

    /// Rows with n_τ > 0: boundary rows first, then cusp rows, each in table
    /// order.
    pub fn lambda_rows(&self, w: &WeylFan) -> Result<Vec<LambdaRow>, RootError> {
        let mut rows = Vec::new();
        for (i, (ray, n)) in self.divisor_of_lambda(w).into_iter().enumerate() {
            if n <= 0 {
                continue;
            }
            let divisor = self.divisor_of_ray(w, i)?;
            let (label, point) = match divisor {
                DivisorId::Boundary(b) => {
                    let r = self.root_of_boundary(b).expect("boundary point of a root");
                    (self.roots[r].label.to_string(), self.sets.boundaries()[b])
                }
                DivisorId::Cusp(c) => (self.triad(c)?.label.to_string(), self.sets.cusps()[c]),
                DivisorId::Tritangent(_) => unreachable!("rays give boundary or cusp divisors"),
            };
            rows.push(LambdaRow { ray, multiplicity: n, divisor, label, point });
        }
        rows.sort_by_key(|r| (matches!(r.divisor, DivisorId::Cusp(_)), r.point.table_key()));
        Ok(rows)
    }

    /// The divisor of λ on the compactification, from the toric divisor.
    pub fn lambda_divisor(&self, w: &WeylFan) -> Result<Vec<(DivisorId, i64)>, RootError> {
        let mut acc: BTreeMap<DivisorId, i64> = BTreeMap::new();
        for (i, (_, n)) in self.divisor_of_lambda(w).into_iter().enumerate() {
            if n != 0 {
                *acc.entry(self.divisor_of_ray(w, i)?).or_default() += n;
            }
        }
        Ok(acc.into_iter().filter(|(_, n)| *n != 0).collect())
    }

    /// B_v: the nine boundary divisors of the triad of v.
    pub fn boundary_sum(&self, v: &F3Vector) -> Vec<(DivisorId, i64)> {
        self.roots_perp(v).into_iter().map(|r| (DivisorId::Boundary(self.boundary_index(r)), 1)).collect()
    }

    /// C_{v⊥}: the 13 cusp divisors in v⊥, v included.
    pub fn cusp_perp_sum(&self, v: &F3Vector) -> Vec<(DivisorId, i64)> {
        self.sets.isotropic_in_perp(v).into_iter().map(|j| (DivisorId::Cusp(j), 1)).collect()
    }

    /// B_v + C_{w⊥} + 3D_v − (B_w + C_{v⊥} + 3D_w).
    pub fn lambda_relation(&self, v: usize, w: usize) -> Vec<(DivisorId, i64)> {
        let (pv, pw) = (self.sets.cusps()[v], self.sets.cusps()[w]);
        let mut terms = Vec::new();
        terms.extend(self.boundary_sum(&pv));
        terms.extend(self.cusp_perp_sum(&pw));
        terms.push((DivisorId::Cusp(v), 3));
        for (d, n) in self.boundary_sum(&pw).into_iter().chain(self.cusp_perp_sum(&pv)) {
            terms.push((d, -n));
        }
        terms.push((DivisorId::Cusp(w), -3));
        combine(&terms)
    }

    /// E_v = B_v − C_{v⊥} + 3D_v.
    pub fn e_class(&self, v: usize) -> Vec<(DivisorId, i64)> {
        let pv = self.sets.cusps()[v];
        let mut terms = self.boundary_sum(&pv);
        terms.extend(self.cusp_perp_sum(&pv).into_iter().map(|(d, n)| (d, -n)));
        terms.push((DivisorId::Cusp(v), 3));
        combine(&terms)
    }

    /// The divisor of λ−1: zeros are the boundary divisor of the root of λ,
    /// the tritangent (16) over the blown-up identity, and the cusps of the
    /// four surfaces whose equations contain λ; poles are those of λ.
    pub fn lambda_minus_one_divisor(&self, w: &WeylFan) -> Result<Vec<(DivisorId, i64)>, RootError> {
        let mut terms = Vec::new();
        let h23 = self.index_of(RootLabel::Pair(2, 3)).expect("root exists");
        terms.push((DivisorId::Boundary(self.boundary_index(h23)), 1));
        let t = self
            .tritangents()?
            .into_iter()
            .find(|t| t.label == TritangentLabel::Ordered(1, 6))
            .ok_or_else(|| RootError::NoMatch("(16)".into()))?;
        terms.push((DivisorId::Tritangent(t.index), 1));
        let lambda = CharacterMonomial::lambda();
        for s in self.surfaces()? {
            if s.characters.contains(&lambda) {
                terms.push((DivisorId::Cusp(s.cusp_index), 1));
            }
        }
        for (d, n) in self.lambda_divisor(w)? {
            if n < 0 {
                terms.push((d, n));
            }
        }
        Ok(combine(&terms))
    }

    /// Checks that π(s_α β) and s_{π α}(π β) span the same line.
    pub fn intertwines(&self, a: usize, b: usize) -> Result<bool, RootError> {
        let (va, vb) = (self.roots[a].vector, self.roots[b].vector);
        let d = lattice_dot(&va, &vb);
        let mut r = [0i64; 7];
        for k in 0..7 {
            r[k] = vb[k] + d * va[k];
        }
        let lhs = self.pi_vector(&r)?;
        let rhs = crate::orthgroup::reflection(&self.pi(a)).map_err(|_| RootError::NoMatch("reflection".into()))?.apply(&self.pi(b));
        Ok(lhs.normalized() == rhs.normalized())
    }
}

fn combine(terms: &[(DivisorId, i64)]) -> Vec<(DivisorId, i64)> {
    let mut acc: BTreeMap<DivisorId, i64> = BTreeMap::new();
    for &(d, n) in terms {
        *acc.entry(d).or_default() += n;
    }
    acc.into_iter().filter(|(_, n)| *n != 0).collect()
}

fn simple_matrix() -> ExactMatrix {
    let cols: Vec<[i64; 7]> = SIMPLE_ROOTS.iter().map(|r| r.vector()).collect();
    ExactMatrix::from_fn(7, 6, |i, j| int(cols[j][i]))
}

fn expand_with(simple: &ExactMatrix, v: &[i64; 7]) -> Result<[i64; 6], RootError> {
    let rhs: Vec<BigRational> = v.iter().map(|&x| int(x)).collect();
    let sol = solve(simple, &rhs).map_err(|_| RootError::NotInRootLattice(*v))?;
    let mut out = [0i64; 6];
    for (o, s) in out.iter_mut().zip(&sol) {
        if !s.is_integer() {
            return Err(RootError::NotInRootLattice(*v));
        }
        *o = s.to_integer().to_i64().ok_or(RootError::NotInRootLattice(*v))?;
    }
    Ok(out)
}

fn image_of(c: &[i64; 6]) -> F3Vector {
    let mut v = [0i64; 5];
    for (k, img) in SIMPLE_IMAGES.iter().enumerate() {
        for m in 0..5 {
            v[m] += c[k] * img[m];
        }
    }
    F3Vector::new(v)
}

/// Coefficients of B̂, Ĉ, T̂ after replacing each divisor by the average of
/// its class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymmetrizedClass {
    pub b: BigRational,
    pub c: BigRational,
    pub t: BigRational,
}

impl SymmetrizedClass {
    pub fn new(b: BigRational, c: BigRational, t: BigRational) -> Self {
        SymmetrizedClass { b, c, t }
    }

    /// Total multiplicities over the boundary, cusp and tritangent divisors.
    pub fn from_counts(boundary: i64, cusp: i64, tritangent: i64) -> Self {
        SymmetrizedClass {
            b: BigRational::new(boundary.into(), 36.into()),
            c: BigRational::new(cusp.into(), 40.into()),
            t: BigRational::new(tritangent.into(), 45.into()),
        }
    }

    /// Coefficients of B̂ and Ĉ after substituting T̂ = (25B̂ + 27Ĉ)/4.
    pub fn eliminate_t(&self) -> (BigRational, BigRational) {
        let q = BigRational::new(1.into(), 4.into());
        (&self.b + &self.t * int(25) * &q, &self.c + &self.t * int(27) * &q)
    }

    pub fn is_zero(&self) -> bool {
        let (b, c) = self.eliminate_t();
        b.is_zero() && c.is_zero()
    }
}

impl fmt::Display for SymmetrizedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})B + ({})C + ({})T", self.b, self.c, self.t)
    }
}

pub fn symmetrize(d: &[(DivisorId, i64)]) -> SymmetrizedClass {
    let total = |c: QClass| d.iter().filter(|(x, _)| x.class() == c).map(|(_, n)| n).sum::<i64>();
    SymmetrizedClass::from_counts(total(QClass::Boundary), total(QClass::Cusp), total(QClass::Tritangent))
}

/// Sanity helper for tests and reports: b(π α, π β) for two roots.
pub fn image_pairing(rs: &RootSystem, a: usize, b: usize) -> i8 {
    bilinear(&rs.pi(a), &rs.pi(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use crate::toricfan::build_weyl_fan;

    fn rs() -> RootSystem {
        RootSystem::new().unwrap()
    }

    fn v(c: [i64; 5]) -> F3Vector {
        F3Vector::new(c)
    }

    #[test]
    fn positive_root_basics() {
        let r = positive_roots();
        assert_eq!(r.len(), 36);
        for x in &r {
            assert_eq!(lattice_dot(&x.vector, &x.vector), -2);
            assert_eq!(lattice_dot(&x.vector, &canonical_class()), 0);
        }
        let h12 = RootLabel::Pair(1, 2).vector();
        let h23 = RootLabel::Pair(2, 3).vector();
        assert_eq!(lattice_dot(&h12, &h23), 1);
        let s: Vec<i64> = (0..7).map(|k| RootLabel::Triple(1, 2, 3).vector()[k] + RootLabel::Triple(4, 5, 6).vector()[k]).collect();
        assert_eq!(s, RootLabel::Top.vector().to_vec());
        assert_eq!(RootLabel::parse("h145"), Some(RootLabel::Triple(1, 4, 5)));
        assert_eq!(RootLabel::parse("h"), Some(RootLabel::Top));
        assert_eq!(RootLabel::parse("h21"), None);
    }

    #[test]
    fn pi_examples() {
        let s = rs();
        let at = |l| s.pi(s.index_of(l).unwrap());
        assert_eq!(at(RootLabel::Top), v([1, 1, 1, 1, 1]));
        assert_eq!(at(RootLabel::Pair(1, 2)), v([1, -1, 0, 0, 0]));
        assert_eq!(at(RootLabel::Pair(3, 4)), v([0, 0, 1, -1, 0]));
        assert_eq!(at(RootLabel::Pair(5, 6)), v([1, 1, 1, 1, -1]));
    }

    #[test]
    fn pi_is_injective_and_preserves_orthogonality() {
        let s = rs();
        let mut seen: Vec<usize> = (0..36).map(|i| s.boundary_index(i)).collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 36);
        let mut pairs = 0;
        for a in 0..36 {
            for b in a + 1..36 {
                let orth = lattice_dot(&s.root(a).vector, &s.root(b).vector) == 0;
                assert_eq!(orth, image_pairing(&s, a, b) == 0);
                pairs += 1;
            }
        }
        assert_eq!(pairs, 630);
    }

    #[test]
    fn pi_intertwines_reflections() {
        let s = rs();
        for a in 0..36 {
            for b in 0..36 {
                assert!(s.intertwines(a, b).unwrap());
            }
        }
    }

    #[test]
    fn d4_rows_match_examples() {
        let s = rs();
        let rows = s.d4_rows();
        assert_eq!(rows.len(), 12);
        let row = rows.iter().find(|r| r.vector.to_string() == "e1+e2").unwrap();
        assert_eq!(row.character, CharacterMonomial::new(1, 2, 1, 1));
        assert_eq!(s.root(row.root).label, RootLabel::Triple(1, 4, 5));
        assert_eq!(row.point, v([0, 1, 1, 0, 0]));
        let first = &rows[0];
        assert_eq!((first.vector.to_string(), first.character.to_string()), ("e3+e4".into(), "μ".into()));
    }

    #[test]
    fn short_rows_match_examples() {
        let s = rs();
        let w = build_weyl_fan().unwrap();
        let rows = s.short_rows(&w).unwrap();
        assert_eq!(rows.len(), 24);
        let find = |d: [i64; 4]| rows.iter().find(|r| r.ray.doubled() == d).unwrap();
        let e1 = find([2, 0, 0, 0]);
        assert_eq!(s.root(e1.root).label, RootLabel::Triple(3, 4, 5));
        assert_eq!(e1.point, v([1, 1, 0, 0, 0]));
        let half = find([1, -1, 1, -1]);
        assert_eq!(s.root(half.root).label, RootLabel::Triple(2, 4, 6));
        assert_eq!(half.point, v([1, -1, 1, -1, 1]));
        let mut used: Vec<usize> = rows.iter().map(|r| r.root).chain(s.d4_roots()).collect();
        used.sort_unstable();
        used.dedup();
        assert_eq!(used.len(), 36);
    }

    #[test]
    fn tritangent_examples() {
        let s = rs();
        let t = s.tritangents().unwrap();
        assert_eq!(t.len(), 45);
        let mut idx: Vec<usize> = t.iter().map(|x| x.index).collect();
        idx.sort_unstable();
        idx.dedup();
        assert_eq!(idx.len(), 45);
        let at = |l: TritangentLabel| t.iter().find(|x| x.label == l).unwrap().point;
        assert_eq!(at(TritangentLabel::Ordered(5, 6)), v([0, 0, 0, 0, 1]));
        assert_eq!(at(TritangentLabel::Ordered(1, 6)), v([1, 0, 0, 0, 0]));
        assert_eq!(at(TritangentLabel::Triple([(1, 2), (3, 4), (5, 6)])), v([1, 1, -1, -1, 0]));
        assert_eq!(TritangentLabel::Ordered(6, 1).to_string(), "(61)");
        for x in &t {
            assert_eq!(x.d4.len(), 12);
        }
    }

    #[test]
    fn triad_examples() {
        let s = rs();
        let triads = s.cusp_triads().unwrap();
        assert_eq!(triads.len(), 40);
        let split = triads.iter().filter(|t| matches!(t.label, TriadLabel::Split(..))).count();
        assert_eq!((split, 40 - split), (10, 30));
        let at = |c| {
            let i = s.sets().index_in(QClass::Cusp, &v(c)).unwrap();
            triads[i].label.to_string()
        };
        assert_eq!(at([1, -1, 0, -1, 0]), "[24.35.16]");
        assert_eq!(at([0, 0, 1, 1, 1]), "[126.345]");
        assert_eq!(at([1, 1, 1, 0, 0]), "[123.456]");
    }

    #[test]
    fn sixteen_surfaces() {
        let s = rs();
        let surf = s.surfaces().unwrap();
        assert_eq!(surf.len(), 16);
        let first = &surf[0];
        assert_eq!(first.equation(), "ρ=ν=1");
        assert_eq!(first.label.to_string(), "[126.345]");
        let mut cusps: Vec<usize> = surf.iter().map(|x| x.cusp_index).collect();
        cusps.sort_unstable();
        cusps.dedup();
        assert_eq!(cusps.len(), 16);
    }

    #[test]
    fn long_rays_cover_remaining_cusps() {
        let s = rs();
        let w = build_weyl_fan().unwrap();
        let rows = s.long_rows(&w).unwrap();
        assert_eq!(rows.len(), 24);
        let mut all: Vec<usize> = rows.iter().map(|r| r.cusp_index).chain(s.surfaces().unwrap().iter().map(|x| x.cusp_index)).collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 40);
        let r = rows.iter().find(|r| r.ray.to_string() == "e1+e3").unwrap();
        assert_eq!(r.label.to_string(), "[24.35.16]");
    }

    #[test]
    fn lambda_divisor() {
        let s = rs();
        let w = build_weyl_fan().unwrap();
        let d = s.divisor_of_lambda(&w);
        let n = |x: [i64; 4]| d.iter().find(|(p, _)| p.doubled() == x).unwrap().1;
        assert_eq!(n([2, -2, 0, 0]), 2);
        assert_eq!(n([2, 0, 0, 0]), 1);
        assert_eq!(n([0, 0, 2, 2]), 0);
        for (p, k) in &d {
            assert_eq!(n(p.neg().doubled()), -k);
        }
        let rows = s.lambda_rows(&w).unwrap();
        assert_eq!(rows.len(), 15);
        assert_eq!(rows.iter().filter(|r| matches!(r.divisor, DivisorId::Boundary(_))).count(), 6);
    }

    #[test]
    fn lambda_relation_matches_toric_divisor() {
        let s = rs();
        let w = build_weyl_fan().unwrap();
        let vi = s.sets().index_in(QClass::Cusp, &v([1, -1, 1, 0, 0])).unwrap();
        let wi = s.sets().index_in(QClass::Cusp, &v([1, 1, -1, 0, 0])).unwrap();
        assert_eq!(s.lambda_relation(vi, wi), s.lambda_divisor(&w).unwrap());
        // E_v − E_w is the divisor of λ.
        let mut diff = s.e_class(vi);
        diff.extend(s.e_class(wi).into_iter().map(|(d, n)| (d, -n)));
        assert_eq!(combine(&diff), s.lambda_divisor(&w).unwrap());
    }

    #[test]
    fn symmetrization_identities() {
        let s = rs();
        let w = build_weyl_fan().unwrap();
        let l1 = symmetrize(&s.lambda_minus_one_divisor(&w).unwrap());
        assert_eq!(l1, SymmetrizedClass::from_counts(1 - 6, 4 - 10, 1));
        assert!(l1.is_zero());
        let k = SymmetrizedClass::from_counts(-24, -24 + 16, 3).eliminate_t();
        assert_eq!(k, (rat(-1, 4), rat(1, 4)));
        let h = SymmetrizedClass::from_counts(4, 24, 1).eliminate_t();
        assert_eq!(h, (rat(1, 4), rat(3, 4)));
        let e = symmetrize(&s.e_class(0)).eliminate_t();
        assert_eq!(e, (rat(1, 4), rat(-1, 4)));
    }
}
