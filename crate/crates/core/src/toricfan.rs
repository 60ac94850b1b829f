//! Smooth complete fans, in particular the fan of D₄ Weyl chambers.
//!
//! The weight lattice N = Z⁴ + Z·(½,½,½,½) is stored in doubled
//! coordinates. Fan computations use coordinates in the Z-basis
//! (ε₁, ε₂, ε₃, h) with h = (ε₁+ε₂+ε₃+ε₄)/2.

use crate::exactmath::{det_i64, gcd_i64, int, integer_kernel, inverse, mat_vec_i64, primitive, unimodular_to_e1, ExactMatrix};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("doubled coordinates {0:?} mix parities")]
    Parity([i64; 4]),
    #[error("cone {0:?} is not unimodular")]
    NotUnimodular(Vec<usize>),
    #[error("cone {0:?} has dependent rays")]
    Degenerate(Vec<usize>),
    #[error("ray orbit does not match the expected 48 rays")]
    RayOrbit,
    #[error("plane generators are not a basis of a saturated sublattice")]
    NotSaturated,
    #[error("plane generators are dependent")]
    DependentPlane,
    #[error("cone intersections do not form a complete fan: {0}")]
    NotAFan(String),
    #[error("two formulas for rank A^1 disagree: {betti} vs {edges}")]
    RankMismatch { betti: i64, edges: i64 },
    #[error("vector {0:?} lies in {1} maximal cones")]
    Coverage(Vec<i64>, usize),
    #[error("index {0} is not a ray of the fan")]
    NoSuchRay(usize),
    #[error("unknown character {0}")]
    UnknownCharacter(String),
}

/// A point of N stored as 2x.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct LatticePoint {
    doubled: [i64; 4],
}

impl LatticePoint {
    pub fn new(doubled: [i64; 4]) -> Result<Self, FanError> {
        let parity = doubled[0].rem_euclid(2);
        if doubled.iter().any(|x| x.rem_euclid(2) != parity) {
            return Err(FanError::Parity(doubled));
        }
        Ok(LatticePoint { doubled })
    }

    pub fn doubled(&self) -> [i64; 4] {
        self.doubled
    }

    /// Coordinates in the basis (ε₁, ε₂, ε₃, h).
    pub fn basis_coords(&self) -> [i64; 4] {
        let [x1, x2, x3, x4] = self.doubled;
        [(x1 - x4) / 2, (x2 - x4) / 2, (x3 - x4) / 2, x4]
    }

    pub fn from_basis_coords(c: &[i64]) -> Self {
        let d = c[3];
        LatticePoint { doubled: [2 * c[0] + d, 2 * c[1] + d, 2 * c[2] + d, d] }
    }

    /// Twice the squared length, times two again: Σ (2xᵢ)².
    pub fn norm4(&self) -> i64 {
        self.doubled.iter().map(|x| x * x).sum()
    }

    pub fn is_half_vector(&self) -> bool {
        self.doubled[0].rem_euclid(2) == 1
    }

    pub fn neg(&self) -> Self {
        LatticePoint { doubled: self.doubled.map(|x| -x) }
    }
}

impl fmt::Display for LatticePoint {
    /// `e1+e3`, `-e2`, or `(+-+-)` for half vectors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_half_vector() {
            let s: String = self.doubled.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect();
            return write!(f, "({s})");
        }
        let mut out = String::new();
        for (i, &x) in self.doubled.iter().enumerate() {
            let c = x / 2;
            if c == 0 {
                continue;
            }
            if c < 0 {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if c.abs() != 1 {
                out.push_str(&c.abs().to_string());
            }
            out.push_str(&format!("e{}", i + 1));
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

/// A character λ^a ρ^b ν^c μ^d of the torus, i.e. the element
/// a(e₁−e₂) + b(e₂−e₃) + c(e₃−e₄) + d(e₃+e₄) of the dual lattice.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Default)]
pub struct CharacterMonomial {
    /// Exponents of (λ, ρ, ν, μ).
    pub exps: [i64; 4],
}

impl CharacterMonomial {
    pub fn new(lambda: i64, rho: i64, nu: i64, mu: i64) -> Self {
        CharacterMonomial { exps: [lambda, rho, nu, mu] }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn lambda() -> Self {
        Self::new(1, 0, 0, 0)
    }

    pub fn rho() -> Self {
        Self::new(0, 1, 0, 0)
    }

    pub fn nu() -> Self {
        Self::new(0, 0, 1, 0)
    }

    pub fn mu() -> Self {
        Self::new(0, 0, 0, 1)
    }

    pub fn from_name(name: &str) -> Result<Self, FanError> {
        match name {
            "lambda" | "λ" => Ok(Self::lambda()),
            "rho" | "ρ" => Ok(Self::rho()),
            "nu" | "ν" => Ok(Self::nu()),
            "mu" | "μ" => Ok(Self::mu()),
            "1" | "trivial" => Ok(Self::trivial()),
            _ => Err(FanError::UnknownCharacter(name.to_string())),
        }
    }

    /// Coordinates with respect to ε₁…ε₄.
    pub fn eps_coords(&self) -> [i64; 4] {
        let [a, b, c, d] = self.exps;
        [a, b - a, c + d - b, d - c]
    }

    pub fn from_eps_coords(e: [i64; 4]) -> Self {
        // Inverse of eps_coords; e lies in the D₄ root lattice.
        let a = e[0];
        let b = e[1] + a;
        let s = e[2] + b; // c + d
        let t = e[3]; // d − c
        CharacterMonomial { exps: [a, b, (s - t) / 2, (s + t) / 2] }
    }

    /// The pairing ⟨m, x⟩.
    pub fn pair(&self, p: &LatticePoint) -> i64 {
        let e = self.eps_coords();
        e.iter().zip(p.doubled.iter()).map(|(a, b)| a * b).sum::<i64>() / 2
    }

    /// The same functional on basis coordinates (ε₁, ε₂, ε₃, h).
    pub fn functional(&self) -> Vec<i64> {
        let e = self.eps_coords();
        vec![e[0], e[1], e[2], (e[0] + e[1] + e[2] + e[3]) / 2]
    }

    pub fn mul(&self, other: &CharacterMonomial) -> Self {
        let mut exps = self.exps;
        for (x, y) in exps.iter_mut().zip(other.exps) {
            *x += y;
        }
        CharacterMonomial { exps }
    }
}

impl fmt::Display for CharacterMonomial {
    /// Factors printed in the order λ, μ, ν, ρ.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [l, r, n, m] = self.exps;
        let mut out = String::new();
        for (sym, e) in [("λ", l), ("μ", m), ("ν", n), ("ρ", r)] {
            match e {
                0 => {}
                1 => out.push_str(sym),
                _ => out.push_str(&format!("{sym}^{e}")),
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        write!(f, "{out}")
    }
}

/// A simplicial fan given by its rays and maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Cones are sorted and deduplicated; rays must be independent in each
    /// cone.
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Self, FanError> {
        let mut set = BTreeSet::new();
        for mut c in cones {
            c.sort_unstable();
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(FanError::NoSuchRay(bad));
            }
            let m: Vec<Vec<i64>> = c.iter().map(|&i| rays[i].clone()).collect();
            if crate::exactmath::int_rank(&m) != c.len() {
                return Err(FanError::Degenerate(c));
            }
            set.insert(c);
        }
        Ok(Fan { rank, rays, cones: set.into_iter().collect() })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    /// (d₀, …, d_n): number of cones of each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut faces: HashSet<Vec<usize>> = HashSet::new();
        for c in &self.cones {
            for mask in 0u32..(1 << c.len()) {
                let f: Vec<usize> = (0..c.len()).filter(|&i| mask & (1 << i) != 0).map(|i| c[i]).collect();
                faces.insert(f);
            }
        }
        let mut fv = vec![0; self.rank + 1];
        for f in faces {
            fv[f.len()] += 1;
        }
        fv
    }

    /// Number of maximal cones; the topological Euler characteristic of the
    /// toric variety when the fan is smooth and complete.
    pub fn euler(&self) -> i64 {
        self.cones.len() as i64
    }

    pub fn check_unimodular(&self) -> Result<(), FanError> {
        for c in &self.cones {
            if c.len() != self.rank {
                continue;
            }
            let m: Vec<Vec<i64>> = c.iter().map(|&i| self.rays[i].clone()).collect();
            if det_i64(&m).abs() != 1 {
                return Err(FanError::NotUnimodular(c.clone()));
            }
        }
        Ok(())
    }

    /// Ranks of A⁰ … Aⁿ from the f-vector:
    /// b_k = Σ_{i≥k} (−1)^{i−k} C(i,k) d_{n−i}.
    pub fn chow_ranks(&self) -> Result<Vec<i64>, FanError> {
        let n = self.rank;
        let d: Vec<i64> = self.f_vector().into_iter().map(|x| x as i64).collect();
        let ranks: Vec<i64> = (0..=n)
            .map(|k| (k..=n).map(|i| sign(i - k) * binom(i, k) * d[n - i]).sum())
            .collect();
        if n >= 1 {
            let edges = d[1] - n as i64;
            if ranks[1] != edges {
                return Err(FanError::RankMismatch { betti: ranks[1], edges });
            }
        }
        Ok(ranks)
    }

    pub fn cones_containing(&self, ray: usize) -> impl Iterator<Item = &Vec<usize>> {
        self.cones.iter().filter(move |c| c.contains(&ray))
    }

    /// Rays sharing a cone with `ray`.
    pub fn neighbours(&self, ray: usize) -> BTreeSet<usize> {
        self.cones_containing(ray).flatten().copied().filter(|&r| r != ray).collect()
    }

    pub fn ray_index(&self, v: &[i64]) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    /// Inverse ray matrices of the maximal cones (integer because the fan
    /// is smooth).
    fn cone_inverses(&self) -> Result<Vec<Vec<Vec<i64>>>, FanError> {
        self.check_unimodular()?;
        self.cones
            .iter()
            .map(|c| {
                let m = ExactMatrix::from_fn(self.rank, self.rank, |i, j| int(self.rays[c[j]][i]));
                let inv = inverse(&m).map_err(|_| FanError::Degenerate(c.clone()))?;
                Ok((0..self.rank)
                    .map(|i| (0..self.rank).map(|j| inv.get(i, j).to_integer().to_i64().unwrap()).collect())
                    .collect())
            })
            .collect()
    }

    /// Draws `samples` random integer vectors (seeded) and checks each lies
    /// in exactly one maximal cone. Vectors on a wall are redrawn. Returns
    /// the number of redraws.
    pub fn check_complete(&self, samples: usize, seed: u64) -> Result<usize, FanError> {
        let inv = self.cone_inverses()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut redraws = 0;
        let mut done = 0;
        while done < samples {
            let v: Vec<i64> = (0..self.rank).map(|_| rng.gen_range(-1_000_000..=1_000_000)).collect();
            let mut hits = 0;
            let mut wall = false;
            for m in &inv {
                let c = mat_vec_i64(m, &v);
                if c.iter().all(|&x| x >= 0) {
                    hits += 1;
                    wall |= c.contains(&0);
                }
            }
            if wall {
                redraws += 1;
                continue;
            }
            if hits != 1 {
                return Err(FanError::Coverage(v, hits));
            }
            done += 1;
        }
        Ok(redraws)
    }
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn binom(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// The fan of P¹.
pub fn p1_fan() -> Fan {
    Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).expect("valid fan")
}

/// The product fan of (P¹)ⁿ.
pub fn p1_power_fan(n: usize) -> Fan {
    let mut rays = Vec::new();
    for i in 0..n {
        for s in [1, -1] {
            let mut r = vec![0; n];
            r[i] = s;
            rays.push(r);
        }
    }
    let cones = (0..1usize << n).map(|mask| (0..n).map(|i| 2 * i + ((mask >> i) & 1)).collect()).collect();
    Fan::new(n, rays, cones).expect("valid fan")
}

/// The fan of Weyl chambers together with the lattice points of its rays.
#[derive(Clone, Debug)]
pub struct WeylFan {
    fan: Fan,
    points: Vec<LatticePoint>,
}

impl WeylFan {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn index_of(&self, p: &LatticePoint) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    /// Short rays have |τ|² = 1, long rays |τ|² = 2.
    pub fn is_short(&self, i: usize) -> bool {
        self.points[i].norm4() == 4
    }
}

/// Signed permutations of four coordinates with an even number of sign
/// changes: the Weyl group of D₄, of order 192.
pub fn d4_weyl_group() -> Vec<([usize; 4], [i64; 4])> {
    let mut out = Vec::new();
    let mut perm = [0usize, 1, 2, 3];
    let mut perms = Vec::new();
    permutations(&mut perm, 0, &mut perms);
    for p in perms {
        for mask in 0u32..16 {
            if mask.count_ones() % 2 == 0 {
                let s = [0, 1, 2, 3].map(|i| if mask & (1 << i) != 0 { -1 } else { 1 });
                out.push((p, s));
            }
        }
    }
    out
}

fn permutations(a: &mut [usize; 4], k: usize, out: &mut Vec<[usize; 4]>) {
    if k == a.len() {
        out.push(*a);
        return;
    }
    for i in k..a.len() {
        a.swap(k, i);
        permutations(a, k + 1, out);
        a.swap(k, i);
    }
}

fn act(g: &([usize; 4], [i64; 4]), x: [i64; 4]) -> [i64; 4] {
    let (p, s) = g;
    [0, 1, 2, 3].map(|i| s[i] * x[p[i]])
}

/// The 24 short vectors ±εᵢ, (±½,±½,±½,±½) and the 24 long vectors ±εᵢ±εⱼ,
/// in doubled coordinates.
pub fn short_and_long_rays() -> (Vec<LatticePoint>, Vec<LatticePoint>) {
    let mut short = Vec::new();
    let mut long = Vec::new();
    for i in 0..4 {
        for s in [2, -2] {
            let mut d = [0; 4];
            d[i] = s;
            short.push(LatticePoint { doubled: d });
        }
    }
    for mask in 0u32..16 {
        let d = [0, 1, 2, 3].map(|i| if mask & (1 << i) != 0 { -1 } else { 1 });
        short.push(LatticePoint { doubled: d });
    }
    for i in 0..4 {
        for j in i + 1..4 {
            for (a, b) in [(2, 2), (2, -2), (-2, 2), (-2, -2)] {
                let mut d = [0; 4];
                d[i] = a;
                d[j] = b;
                long.push(LatticePoint { doubled: d });
            }
        }
    }
    (short, long)
}

fn ray_order(a: &LatticePoint, b: &LatticePoint) -> Ordering {
    // Short before long, then by doubled coordinates descending.
    a.norm4().cmp(&b.norm4()).then_with(|| b.doubled.cmp(&a.doubled))
}

/// The 192 Weyl chambers: the orbit of the cone spanned by ε₁, ε₁+ε₂,
/// (ε₁+ε₂+ε₃−ε₄)/2 and (ε₁+ε₂+ε₃+ε₄)/2.
pub fn build_weyl_fan() -> Result<WeylFan, FanError> {
    let fundamental = [[2, 0, 0, 0], [2, 2, 0, 0], [1, 1, 1, -1], [1, 1, 1, 1]];
    let group = d4_weyl_group();
    let mut chambers: BTreeSet<Vec<[i64; 4]>> = BTreeSet::new();
    let mut ray_set: HashSet<[i64; 4]> = HashSet::new();
    for g in &group {
        let mut c: Vec<[i64; 4]> = fundamental.iter().map(|&r| act(g, r)).collect();
        c.sort_unstable();
        ray_set.extend(c.iter().copied());
        chambers.insert(c);
    }
    let (short, long) = short_and_long_rays();
    let expected: HashSet<[i64; 4]> = short.iter().chain(&long).map(|p| p.doubled).collect();
    if ray_set != expected {
        return Err(FanError::RayOrbit);
    }
    let mut points: Vec<LatticePoint> = short.into_iter().chain(long).collect();
    points.sort_by(ray_order);
    let idx: HashMap<[i64; 4], usize> = points.iter().enumerate().map(|(i, p)| (p.doubled, i)).collect();
    let rays = points.iter().map(|p| p.basis_coords().to_vec()).collect();
    let cones = chambers.iter().map(|c| c.iter().map(|r| idx[r]).collect()).collect();
    let fan = Fan::new(4, rays, cones)?;
    fan.check_unimodular()?;
    Ok(WeylFan { fan, points })
}

/// The fan of the orbit closure V(τ): images in N/⟨τ⟩ of the cones
/// containing τ.
pub fn star_fan(f: &Fan, ray: usize) -> Result<Fan, FanError> {
    let tau = f.rays.get(ray).ok_or(FanError::NoSuchRay(ray))?;
    let u = unimodular_to_e1(tau).map_err(|_| FanError::NotUnimodular(vec![ray]))?;
    let mut rays: Vec<Vec<i64>> = Vec::new();
    let mut cones = Vec::new();
    for c in f.cones_containing(ray) {
        let mut cone = Vec::new();
        for &r in c.iter().filter(|&&r| r != ray) {
            let img = primitive(&mat_vec_i64(&u, &f.rays[r])[1..]);
            let i = match rays.iter().position(|x| *x == img) {
                Some(i) => i,
                None => {
                    rays.push(img);
                    rays.len() - 1
                }
            };
            cone.push(i);
        }
        cones.push(cone);
    }
    let star = Fan::new(f.rank - 1, rays, cones)?;
    star.check_unimodular()?;
    Ok(star)
}

/// A rank-2 saturated sublattice of N, given by a basis in (ε₁, ε₂, ε₃, h)
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plane {
    basis: [Vec<i64>; 2],
}

impl Plane {
    /// The common kernel of two characters; kernels are always saturated.
    pub fn from_characters(a: &CharacterMonomial, b: &CharacterMonomial) -> Result<Self, FanError> {
        let k = integer_kernel(&[a.functional(), b.functional()], 4);
        if k.len() != 2 {
            return Err(FanError::DependentPlane);
        }
        Ok(Plane { basis: [k[0].clone(), k[1].clone()] })
    }

    pub fn from_generators(p: Vec<i64>, q: Vec<i64>) -> Result<Self, FanError> {
        let mut g = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                g = gcd_i64(g, p[i] * q[j] - p[j] * q[i]);
            }
        }
        match g {
            0 => Err(FanError::DependentPlane),
            1 => Ok(Plane { basis: [p, q] }),
            _ => Err(FanError::NotSaturated),
        }
    }

    pub fn basis(&self) -> &[Vec<i64>; 2] {
        &self.basis
    }

    pub fn point(&self, s: i64, t: i64) -> Vec<i64> {
        self.basis[0].iter().zip(&self.basis[1]).map(|(a, b)| s * a + t * b).collect()
    }
}

fn half_plane(v: &[i64]) -> u8 {
    u8::from(!(v[1] > 0 || (v[1] == 0 && v[0] > 0)))
}

fn angle_cmp(a: &[i64], b: &[i64]) -> Ordering {
    half_plane(a).cmp(&half_plane(b)).then_with(|| 0.cmp(&(a[0] * b[1] - a[1] * b[0])))
}

/// The fan in the plane formed by intersecting every maximal cone with it.
/// Only two-dimensional intersections are kept; the result must be a
/// complete smooth fan of rank 2.
pub fn subtorus_closure_fan(f: &Fan, plane: &Plane) -> Result<Fan, FanError> {
    if f.rank != 4 {
        return Err(FanError::NotAFan(format!("ambient rank {} is not 4", f.rank)));
    }
    let inv = f.cone_inverses()?;
    let cols = [&plane.basis[0], &plane.basis[1]];
    let mut rays: Vec<Vec<i64>> = Vec::new();
    let mut cones: BTreeSet<Vec<usize>> = BTreeSet::new();
    for m in &inv {
        // Row k gives the k-th cone coordinate as a linear form in (s, t).
        let forms: Vec<[i64; 2]> = m
            .iter()
            .map(|row| [0, 1].map(|c| row.iter().zip(cols[c]).map(|(a, b)| a * b).sum()))
            .collect();
        let mut feasible: Vec<Vec<i64>> = Vec::new();
        for &[a, b] in &forms {
            if a == 0 && b == 0 {
                continue;
            }
            for d in [primitive(&[b, -a]), primitive(&[-b, a])] {
                let ok = forms.iter().all(|&[x, y]| x * d[0] + y * d[1] >= 0);
                if ok && !feasible.contains(&d) {
                    feasible.push(d);
                }
            }
        }
        match feasible.len() {
            0 | 1 => continue,
            2 => {
                let (p, q) = (&feasible[0], &feasible[1]);
                if p[0] * q[1] - p[1] * q[0] == 0 {
                    continue;
                }
                let mut cone = Vec::new();
                for d in [p, q] {
                    let i = match rays.iter().position(|x| x == d) {
                        Some(i) => i,
                        None => {
                            rays.push(d.clone());
                            rays.len() - 1
                        }
                    };
                    cone.push(i);
                }
                cone.sort_unstable();
                cones.insert(cone);
            }
            n => return Err(FanError::NotAFan(format!("a chamber meets the plane in {n} boundary rays"))),
        }
    }
    let fan = Fan::new(2, rays, cones.into_iter().collect())?;
    fan.check_unimodular()?;
    // Completeness: consecutive rays in angular order bound a cone.
    let mut order: Vec<usize> = (0..fan.rays.len()).collect();
    order.sort_by(|&a, &b| angle_cmp(&fan.rays[a], &fan.rays[b]));
    let n = order.len();
    if n < 3 || fan.cones.len() != n {
        return Err(FanError::NotAFan(format!("{n} rays and {} cones", fan.cones.len())));
    }
    for k in 0..n {
        let mut pair = vec![order[k], order[(k + 1) % n]];
        pair.sort_unstable();
        if !fan.cones.contains(&pair) {
            return Err(FanError::NotAFan("gap between consecutive rays".into()));
        }
    }
    Ok(fan)
}

/// The divisor of a character: ray τ gets multiplicity ⟨m, τ⟩.
pub fn character_divisor(w: &WeylFan, m: &CharacterMonomial) -> Vec<i64> {
    w.points.iter().map(|p| m.pair(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weyl() -> WeylFan {
        build_weyl_fan().unwrap()
    }

    fn lp(d: [i64; 4]) -> LatticePoint {
        LatticePoint::new(d).unwrap()
    }

    #[test]
    fn weyl_fan_counts() {
        let w = weyl();
        assert_eq!(w.fan().rays().len(), 48);
        assert_eq!(w.fan().max_cones().len(), 192);
        assert!(w.fan().check_unimodular().is_ok());
        assert_eq!(d4_weyl_group().len(), 192);
        let fv = w.fan().f_vector();
        assert_eq!(fv[0], 1);
        assert_eq!(fv[1], 48);
        assert_eq!(fv[4], 192);
        assert_eq!(w.fan().chow_ranks().unwrap(), vec![1, 44, 102, 44, 1]);
        let alt: i64 = fv.iter().enumerate().map(|(i, &d)| sign(i) * d as i64).sum();
        // Alternating sum of cone counts of a complete 4-dimensional fan.
        assert_eq!(alt, 1);
    }

    #[test]
    fn betti_sum_is_euler() {
        for f in [weyl().fan().clone(), p1_fan(), p1_power_fan(3)] {
            assert_eq!(f.chow_ranks().unwrap().iter().sum::<i64>(), f.euler());
        }
    }

    #[test]
    fn small_fans() {
        assert_eq!(p1_power_fan(3).f_vector(), vec![1, 6, 12, 8]);
        assert_eq!(p1_power_fan(3).chow_ranks().unwrap(), vec![1, 3, 3, 1]);
        assert_eq!(p1_fan().chow_ranks().unwrap(), vec![1, 1]);
    }

    #[test]
    fn completeness() {
        let w = weyl();
        assert!(w.fan().check_complete(10_000, 17).is_ok());
        assert!(p1_power_fan(3).check_complete(500, 3).is_ok());
        // Dropping a chamber breaks coverage.
        let f = w.fan();
        let holed = Fan::new(4, f.rays().to_vec(), f.max_cones()[1..].to_vec()).unwrap();
        assert!(matches!(holed.check_complete(10_000, 17), Err(FanError::Coverage(_, 0))));
    }

    #[test]
    fn star_of_long_root() {
        let w = weyl();
        let i = w.index_of(&lp([2, 0, 2, 0])).unwrap();
        let s = star_fan(w.fan(), i).unwrap();
        assert_eq!(s.rays().len(), 6);
        assert_eq!(s.max_cones().len(), 8);
        for r in s.rays() {
            let neg: Vec<i64> = r.iter().map(|x| -x).collect();
            assert!(s.ray_index(&neg).is_some());
        }
        assert_eq!(s.chow_ranks().unwrap(), vec![1, 3, 3, 1]);
        for j in 0..48 {
            if !w.is_short(j) {
                assert_eq!(star_fan(w.fan(), j).unwrap().f_vector(), s.f_vector());
            }
        }
    }

    #[test]
    fn star_of_short_root() {
        let w = weyl();
        let i = w.index_of(&lp([2, 0, 0, 0])).unwrap();
        let s = star_fan(w.fan(), i).unwrap();
        assert_eq!(s.rays().len(), 14);
        assert_eq!(s.chow_ranks().unwrap()[1], 11);
        assert_eq!(s.euler(), 24);
        assert!(s.check_complete(2_000, 5).is_ok());
    }

    #[test]
    fn subtorus_nu_rho() {
        let w = weyl();
        let plane = Plane::from_characters(&CharacterMonomial::nu(), &CharacterMonomial::rho()).unwrap();
        for s in [-2, 0, 3] {
            for t in [-1, 1] {
                let p = LatticePoint::from_basis_coords(&plane.point(s, t)).doubled();
                assert!(p[1] == p[2] && p[2] == p[3]);
            }
        }
        let f = subtorus_closure_fan(w.fan(), &plane).unwrap();
        assert_eq!(f.rays().len(), 6);
        assert_eq!(f.euler(), 6);
        assert_eq!(f.chow_ranks().unwrap(), vec![1, 4, 1]);
    }

    #[test]
    fn non_saturated_plane_is_rejected() {
        // ε₁ and 2h span an index-2 sublattice of its saturation.
        assert_eq!(Plane::from_generators(vec![1, 0, 0, 0], vec![0, 0, 0, 2]), Err(FanError::NotSaturated));
        assert_eq!(Plane::from_generators(vec![1, 0, 0, 0], vec![2, 0, 0, 0]), Err(FanError::DependentPlane));
        assert!(Plane::from_generators(vec![1, 0, 0, 0], vec![0, 0, 0, 1]).is_ok());
    }

    #[test]
    fn character_pairings() {
        let w = weyl();
        assert!(character_divisor(&w, &CharacterMonomial::trivial()).iter().all(|&x| x == 0));
        let mu = character_divisor(&w, &CharacterMonomial::mu());
        for (i, p) in w.points().iter().enumerate() {
            let d = p.doubled();
            assert_eq!(mu[i] * 2, d[2] + d[3]);
            let j = w.index_of(&p.neg()).unwrap();
            assert_eq!(mu[j], -mu[i]);
        }
        let lam = CharacterMonomial::lambda();
        assert_eq!(lam.pair(&lp([2, -2, 0, 0])), 2);
        assert_eq!(lam.pair(&lp([2, 0, 0, 0])), 1);
        assert_eq!(lam.pair(&lp([0, 0, 2, 2])), 0);
    }

    #[test]
    fn character_round_trip_and_display() {
        let m = CharacterMonomial::new(1, 2, 1, 1);
        assert_eq!(m.eps_coords(), [1, 1, 0, 0]);
        assert_eq!(CharacterMonomial::from_eps_coords([1, 1, 0, 0]), m);
        assert_eq!(m.to_string(), "λμνρ^2");
        assert_eq!(CharacterMonomial::trivial().to_string(), "1");
    }

    #[test]
    fn lattice_point_display() {
        assert_eq!(lp([2, 0, 2, 0]).to_string(), "e1+e3");
        assert_eq!(lp([-2, -2, 0, 0]).to_string(), "-e1-e2");
        assert_eq!(lp([1, -1, 1, -1]).to_string(), "(+-+-)");
        assert!(LatticePoint::new([1, 0, 0, 0]).is_err());
    }

    #[test]
    fn basis_round_trip() {
        let (s, l) = short_and_long_rays();
        for p in s.iter().chain(&l) {
            assert_eq!(LatticePoint::from_basis_coords(&p.basis_coords()), *p);
        }
    }
}
