//! Chow-rank and Euler-characteristic bookkeeping through blow-ups and
//! contractions of smooth projective varieties with algebraic cohomology.

use crate::toricfan::{build_weyl_fan, subtorus_closure_fan, CharacterMonomial, FanError, Plane};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LedgerError {
    #[error("center of dimension {center} cannot be blown up in a variety of dimension {ambient}")]
    CenterTooLarge { center: usize, ambient: usize },
    #[error("contraction would make rank A^{degree} negative")]
    NegativeRank { degree: usize },
    #[error("stage {stage}: expected ranks {expected:?}, got {got:?}")]
    Milestone { stage: String, expected: Vec<i64>, got: Vec<i64> },
    #[error("stage {stage}: expected euler {expected}, got {got}")]
    Euler { stage: String, expected: i64, got: i64 },
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// Ranks of A⁰…A^dim and the topological Euler characteristic.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct VarietyState {
    pub chow_ranks: Vec<i64>,
    pub euler: i64,
}

impl VarietyState {
    pub fn new(chow_ranks: Vec<i64>, euler: i64) -> Self {
        VarietyState { chow_ranks, euler }
    }

    pub fn point() -> Self {
        Self::new(vec![1], 1)
    }

    /// Pⁿ.
    pub fn projective(n: usize) -> Self {
        Self::new(vec![1; n + 1], n as i64 + 1)
    }

    pub fn dim(&self) -> usize {
        self.chow_ranks.len() - 1
    }

    pub fn rank_sum(&self) -> i64 {
        self.chow_ranks.iter().sum()
    }

    /// Euler characteristic equals the sum of ranks, and ranks are
    /// palindromic.
    pub fn is_consistent(&self) -> bool {
        let r = &self.chow_ranks;
        self.euler == self.rank_sum() && r.iter().eq(r.iter().rev())
    }
}

/// `count` disjoint copies of a smooth center.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CenterData {
    pub name: String,
    pub count: i64,
    pub variety: VarietyState,
    pub provenance: &'static str,
}

impl CenterData {
    pub fn new(name: &str, count: i64, variety: VarietyState, provenance: &'static str) -> Self {
        CenterData { name: name.to_string(), count, variety, provenance }
    }
}

/// A^k gains ⊕_{j=1}^{c−1} A^{k−j}(Z) per center of codimension c; the Euler
/// characteristic gains χ(Z)·(c−1).
pub fn blow_up(s: &VarietyState, c: &CenterData) -> Result<VarietyState, LedgerError> {
    let (n, z) = (s.dim(), c.variety.dim());
    if z >= n {
        return Err(LedgerError::CenterTooLarge { center: z, ambient: n });
    }
    let codim = n - z;
    let mut ranks = s.chow_ranks.clone();
    for (k, r) in ranks.iter_mut().enumerate() {
        for j in 1..codim {
            if k >= j && k - j <= z {
                *r += c.count * c.variety.chow_ranks[k - j];
            }
        }
    }
    Ok(VarietyState::new(ranks, s.euler + c.count * c.variety.euler * (codim as i64 - 1)))
}

/// Contracts `count` divisors P¹×V onto copies of V: A^k loses A^{k−1}(V)
/// and the Euler characteristic loses χ(V) per copy.
pub fn contract(s: &VarietyState, c: &CenterData) -> Result<VarietyState, LedgerError> {
    let v = &c.variety;
    let mut ranks = s.chow_ranks.clone();
    for (k, r) in ranks.iter_mut().enumerate() {
        if k >= 1 && k - 1 <= v.dim() {
            *r -= c.count * v.chow_ranks[k - 1];
            if *r < 0 {
                return Err(LedgerError::NegativeRank { degree: k });
            }
        }
    }
    Ok(VarietyState::new(ranks, s.euler - c.count * v.euler))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum Step {
    Start,
    BlowUp(CenterData),
    Contract(CenterData),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Stage {
    pub name: String,
    pub step: Step,
    pub state: VarietyState,
}

/// Runs the pipeline with the start state and the surface data read off
/// the Weyl fan and the fan of the surface ν = ρ = 1.
pub fn run_pipeline() -> Result<Vec<Stage>, LedgerError> {
    let w = build_weyl_fan()?;
    let start = VarietyState::new(w.fan().chow_ranks()?, w.fan().euler());
    let plane = Plane::from_characters(&CharacterMonomial::nu(), &CharacterMonomial::rho())?;
    let s = subtorus_closure_fan(w.fan(), &plane)?;
    run_pipeline_from(start, VarietyState::new(s.chow_ranks()?, s.euler()))
}

/// The toric fourfold, then the blow-up of the identity point, of 12
/// rational curves, of 16 surfaces, and the contraction of 12 divisors
/// P¹×V. Each surface is `toric_surface` blown up at one point.
pub fn run_pipeline_from(start: VarietyState, toric_surface: VarietyState) -> Result<Vec<Stage>, LedgerError> {
    let surface = blow_up(&toric_surface, &CenterData::new("point", 1, VarietyState::point(), "derived"))?;
    // V: P² blown up in four points.
    let v = blow_up(&VarietyState::projective(2), &CenterData::new("point", 4, VarietyState::point(), "derived"))?;
    let line = VarietyState::projective(1);
    let steps = [
        ("identity point", Step::BlowUp(CenterData::new("point", 1, VarietyState::point(), "published"))),
        ("12 curves", Step::BlowUp(CenterData::new("rational curve", 12, line, "published"))),
        ("16 surfaces", Step::BlowUp(CenterData::new("surface", 16, surface, "derived"))),
        ("contraction", Step::Contract(CenterData::new("V", 12, v, "derived"))),
    ];
    let milestones: [(&[i64], i64); 4] = [
        (&[1, 45, 103, 45, 1], 195),
        (&[1, 57, 127, 57, 1], 243),
        (&[1, 73, 207, 73, 1], 355),
        (&[1, 61, 147, 61, 1], 271),
    ];
    if start.chow_ranks != [1, 44, 102, 44, 1] || start.euler != 192 {
        return Err(LedgerError::Milestone { stage: "toric variety".into(), expected: vec![1, 44, 102, 44, 1], got: start.chow_ranks });
    }
    let mut state = start;
    let mut stages = vec![Stage { name: "toric variety".into(), step: Step::Start, state: state.clone() }];
    for ((name, step), (ranks, euler)) in steps.into_iter().zip(milestones) {
        state = match &step {
            Step::BlowUp(c) => blow_up(&state, c)?,
            Step::Contract(c) => contract(&state, c)?,
            Step::Start => state,
        };
        if state.chow_ranks != ranks {
            return Err(LedgerError::Milestone { stage: name.into(), expected: ranks.to_vec(), got: state.chow_ranks });
        }
        if state.euler != euler {
            return Err(LedgerError::Euler { stage: name.into(), expected: euler, got: state.euler });
        }
        stages.push(Stage { name: name.into(), step, state: state.clone() });
    }
    Ok(stages)
}

/// The boundary divisor as V(ε₁) blown up at a point and then in 4 curves.
pub fn boundary_divisor_from_toric() -> Result<VarietyState, LedgerError> {
    let s = VarietyState::new(vec![1, 11, 11, 1], 24);
    let s = blow_up(&s, &CenterData::new("point", 1, VarietyState::point(), "derived"))?;
    blow_up(&s, &CenterData::new("rational curve", 4, VarietyState::projective(1), "derived"))
}

/// The boundary divisor as P³ blown up in 5 points and then 10 lines.
pub fn boundary_divisor_from_p3() -> Result<VarietyState, LedgerError> {
    let s = blow_up(&VarietyState::projective(3), &CenterData::new("point", 5, VarietyState::point(), "published"))?;
    blow_up(&s, &CenterData::new("line", 10, VarietyState::projective(1), "published"))
}

/// The tritangent divisor as P³ blown up in 12 points and 16 lines.
pub fn tritangent_divisor() -> Result<VarietyState, LedgerError> {
    let s = blow_up(&VarietyState::projective(3), &CenterData::new("point", 12, VarietyState::point(), "published"))?;
    blow_up(&s, &CenterData::new("line", 16, VarietyState::projective(1), "published"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(n: i64) -> CenterData {
        CenterData::new("point", n, VarietyState::point(), "test")
    }

    #[test]
    fn point_blow_up() {
        let s = VarietyState::new(vec![1, 44, 102, 44, 1], 192);
        let t = blow_up(&s, &pt(1)).unwrap();
        assert_eq!(t, VarietyState::new(vec![1, 45, 103, 45, 1], 195));
    }

    #[test]
    fn curve_and_surface_blow_ups() {
        let s = VarietyState::new(vec![1, 45, 103, 45, 1], 195);
        let t = blow_up(&s, &CenterData::new("c", 12, VarietyState::projective(1), "test")).unwrap();
        assert_eq!((t.chow_ranks[1] - 45, t.chow_ranks[2] - 103, t.euler - 195), (12, 24, 48));
        let surf = VarietyState::new(vec![1, 5, 1], 7);
        let u = blow_up(&t, &CenterData::new("s", 16, surf, "test")).unwrap();
        assert_eq!((u.chow_ranks[1] - t.chow_ranks[1], u.chow_ranks[2] - t.chow_ranks[2], u.euler - t.euler), (16, 80, 112));
    }

    #[test]
    fn contractions() {
        let s = VarietyState::new(vec![1, 73, 207, 73, 1], 355);
        let v = VarietyState::new(vec![1, 5, 1], 7);
        let t = contract(&s, &CenterData::new("V", 12, v.clone(), "test")).unwrap();
        assert_eq!(t, VarietyState::new(vec![1, 61, 147, 61, 1], 271));
        assert_eq!(contract(&s, &CenterData::new("V", 0, v.clone(), "test")).unwrap(), s);
        let one = contract(&s, &CenterData::new("V", 1, v, "test")).unwrap();
        assert_eq!(s.chow_ranks[2] - one.chow_ranks[2], 5);
    }

    #[test]
    fn pipeline() {
        let stages = run_pipeline().unwrap();
        let last = &stages.last().unwrap().state;
        assert_eq!(last.chow_ranks, vec![1, 61, 147, 61, 1]);
        assert_eq!(last.euler, 271);
        assert!(stages.iter().all(|s| s.state.is_consistent()));
        let pairs: Vec<(i64, i64)> = stages.iter().map(|s| (s.state.chow_ranks[1], s.state.chow_ranks[2])).collect();
        assert_eq!(pairs, vec![(44, 102), (45, 103), (57, 127), (73, 207), (61, 147)]);
    }

    #[test]
    fn wrong_surface_data_is_caught() {
        let start = VarietyState::new(vec![1, 44, 102, 44, 1], 192);
        let err = run_pipeline_from(start, VarietyState::new(vec![1, 5, 1], 7)).unwrap_err();
        assert!(matches!(err, LedgerError::Milestone { ref stage, .. } if stage == "16 surfaces"));
    }

    #[test]
    fn blown_up_surface_has_euler_seven() {
        let s = blow_up(&VarietyState::new(vec![1, 4, 1], 6), &pt(1)).unwrap();
        assert_eq!(s, VarietyState::new(vec![1, 5, 1], 7));
    }

    #[test]
    fn threefold_routes() {
        let a = boundary_divisor_from_toric().unwrap();
        let b = boundary_divisor_from_p3().unwrap();
        assert_eq!(a, b);
        assert_eq!(a, VarietyState::new(vec![1, 16, 16, 1], 34));
        assert_eq!(tritangent_divisor().unwrap(), VarietyState::new(vec![1, 29, 29, 1], 60));
    }

    #[test]
    fn oversized_center_is_rejected() {
        let s = VarietyState::projective(2);
        assert!(blow_up(&s, &CenterData::new("s", 1, VarietyState::projective(2), "test")).is_err());
    }

    proptest! {
        #[test]
        fn curve_blow_up_then_contract(a1 in 1i64..100, a2 in 1i64..200, count in 0i64..5) {
            let s = VarietyState::new(vec![1, a1, a2, a1, 1], 2 + 2 * a1 + a2);
            let c = CenterData::new("c", count, VarietyState::projective(1), "test");
            let t = contract(&blow_up(&s, &c).unwrap(), &c).unwrap();
            prop_assert_eq!(t.chow_ranks[1], a1);
            prop_assert_eq!(t.chow_ranks[2], a2 + count);
        }

        #[test]
        fn blow_ups_keep_consistency(a1 in 1i64..100, a2 in 1i64..200, pts in 0i64..20, curves in 0i64..20) {
            let s = VarietyState::new(vec![1, a1, a2, a1, 1], 2 + 2 * a1 + a2);
            let s = blow_up(&s, &pt(pts)).unwrap();
            let s = blow_up(&s, &CenterData::new("c", curves, VarietyState::projective(1), "test")).unwrap();
            prop_assert!(s.is_consistent());
        }
    }
}
