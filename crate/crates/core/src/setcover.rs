//! Greedy and depth-bounded exact Set Cover.
//!
//! On a ψ-dense instance (every element lies in at least `m/ψ` sets) each
//! greedy pick covers at least a `1/ψ` fraction of what is still uncovered,
//! so greedy stops after at most `ψ ln n` picks. That size in turn bounds the
//! depth of an exhaustive search for the optimum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratio::{Psi, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    ground_size: usize,
    sets: Vec<Vec<usize>>,
    occurrence: Vec<usize>,
}

impl SetCoverInstance {
    /// Sets are sorted and deduplicated. Fails on element ids `>= ground_size`.
    pub fn new(ground_size: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut occurrence = vec![0; ground_size];
        let mut clean = Vec::with_capacity(sets.len());
        for (i, mut set) in sets.into_iter().enumerate() {
            set.sort_unstable();
            set.dedup();
            for &x in &set {
                if x >= ground_size {
                    return Err(Error::input(format!(
                        "set {i} contains element {x} outside 0..{ground_size}"
                    )));
                }
                occurrence[x] += 1;
            }
            clean.push(set);
        }
        Ok(SetCoverInstance {
            ground_size,
            sets: clean,
            occurrence,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn occurrence(&self) -> &[usize] {
        &self.occurrence
    }

    pub fn is_feasible(&self) -> bool {
        self.first_uncoverable().is_none()
    }

    fn first_uncoverable(&self) -> Option<usize> {
        self.occurrence.iter().position(|&c| c == 0)
    }

    fn require_feasible(&self) -> Result<()> {
        match self.first_uncoverable() {
            Some(x) => Err(Error::Infeasible(x)),
            None => Ok(()),
        }
    }

    /// Whether the chosen set indices cover the ground set.
    pub fn covers(&self, chosen: &[usize]) -> bool {
        let mut hit = vec![false; self.ground_size];
        for &i in chosen {
            let Some(set) = self.sets.get(i) else {
                return false;
            };
            for &x in set {
                hit[x] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetCoverSolution {
    pub chosen: Vec<usize>,
}

impl SetCoverSolution {
    pub fn new(inst: &SetCoverInstance, mut chosen: Vec<usize>) -> Result<Self> {
        chosen.sort_unstable();
        chosen.dedup();
        if !inst.covers(&chosen) {
            return Err(Error::ContractViolation(
                "chosen sets do not cover the ground set".into(),
            ));
        }
        Ok(SetCoverSolution { chosen })
    }

    pub fn size(&self) -> usize {
        self.chosen.len()
    }
}

/// `m / min_x occurrence(x)`: the tightest ψ for which the instance is ψ-dense.
pub fn density_psi_sc(inst: &SetCoverInstance) -> Result<Rational> {
    inst.require_feasible()?;
    let min = inst.occurrence.iter().copied().min().unwrap_or(0);
    match Psi::quotient(inst.set_count() as u64, min as u64) {
        Psi::Finite(r) => Ok(r),
        // Empty ground set: every family covers it; report ψ = 1.
        Psi::Infinite => Ok(Rational::from_integer(1)),
    }
}

/// `ceil(ψ ln n)`, the greedy size bound for ψ-dense instances with ψ >= 2.
pub fn greedy_bound(psi: Rational, ground_size: usize) -> usize {
    if ground_size <= 1 {
        return ground_size;
    }
    (crate::ratio::to_f64(&psi) * (ground_size as f64).ln()).ceil() as usize
}

/// One greedy pick: the set index and how many new elements it covered, out
/// of how many were uncovered before the pick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GreedyStep {
    pub set: usize,
    pub gain: usize,
    pub uncovered_before: usize,
}

pub fn greedy_sc(inst: &SetCoverInstance) -> Result<SetCoverSolution> {
    Ok(SetCoverSolution {
        chosen: {
            let mut c: Vec<usize> = greedy_sc_trace(inst)?.iter().map(|s| s.set).collect();
            c.sort_unstable();
            c
        },
    })
}

/// Greedy picks in order. Ties go to the smallest set index.
pub fn greedy_sc_trace(inst: &SetCoverInstance) -> Result<Vec<GreedyStep>> {
    inst.require_feasible()?;
    let mut covered = vec![false; inst.ground_size];
    let mut uncovered = inst.ground_size;
    let mut used = vec![false; inst.set_count()];
    let mut steps = Vec::new();
    while uncovered > 0 {
        let (best, gain) = inst
            .sets
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, set)| (i, set.iter().filter(|&&x| !covered[x]).count()))
            .fold((usize::MAX, 0), |acc, (i, g)| if g > acc.1 { (i, g) } else { acc });
        debug_assert!(gain > 0, "feasible instance always has a useful set");
        used[best] = true;
        for &x in &inst.sets[best] {
            covered[x] = true;
        }
        steps.push(GreedyStep {
            set: best,
            gain,
            uncovered_before: uncovered,
        });
        uncovered -= gain;
    }
    Ok(steps)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ExactOutcome {
    Optimal {
        solution: SetCoverSolution,
        families_checked: u64,
    },
    /// The search space exceeded the budget; the greedy cover is attached
    /// but makes no optimality claim.
    BudgetExceeded {
        greedy: SetCoverSolution,
        required: u128,
        budget: u64,
    },
}

impl ExactOutcome {
    pub fn solution(&self) -> &SetCoverSolution {
        match self {
            ExactOutcome::Optimal { solution, .. } => solution,
            ExactOutcome::BudgetExceeded { greedy, .. } => greedy,
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, ExactOutcome::Optimal { .. })
    }
}

pub const DEFAULT_BUDGET: u64 = 50_000_000;

fn binomial_prefix_sum(m: usize, depth: usize) -> u128 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for k in 0..=depth.min(m) {
        total = total.saturating_add(c);
        c = c.saturating_mul((m - k) as u128) / (k as u128 + 1);
    }
    total
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn of(set: &[usize], words: usize) -> Bits {
        let mut b = vec![0u64; words];
        for &x in set {
            b[x / 64] |= 1 << (x % 64);
        }
        Bits(b)
    }

    fn or_into(&self, acc: &[u64], out: &mut [u64]) {
        for ((o, a), s) in out.iter_mut().zip(acc).zip(&self.0) {
            *o = a | s;
        }
    }
}

/// Searches families of size `1, 2, ..` up to the greedy size `D`; the first
/// covering family found is the lexicographically smallest minimum cover.
pub fn exact_bounded_sc(inst: &SetCoverInstance, budget: u64) -> Result<ExactOutcome> {
    let greedy = greedy_sc(inst)?;
    let depth = greedy.size();
    let required = binomial_prefix_sum(inst.set_count(), depth);
    if required > budget as u128 {
        return Ok(ExactOutcome::BudgetExceeded {
            greedy,
            required,
            budget,
        });
    }
    if inst.ground_size == 0 {
        return Ok(ExactOutcome::Optimal {
            solution: SetCoverSolution { chosen: Vec::new() },
            families_checked: 1,
        });
    }
    let words = inst.ground_size.div_ceil(64);
    let full: Vec<u64> = (0..words)
        .map(|w| {
            let bits = (inst.ground_size - w * 64).min(64);
            if bits == 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            }
        })
        .collect();
    let sets: Vec<Bits> = inst.sets.iter().map(|s| Bits::of(s, words)).collect();
    let mut checked = 0u64;
    for k in 1..=depth {
        let mut stack = vec![vec![0u64; words]; k + 1];
        let mut picks = Vec::with_capacity(k);
        if search(&sets, &full, k, 0, &mut stack, &mut picks, &mut checked) {
            return Ok(ExactOutcome::Optimal {
                solution: SetCoverSolution::new(inst, picks)?,
                families_checked: checked,
            });
        }
    }
    unreachable!("the greedy family of size {depth} covers the ground set")
}

fn search(
    sets: &[Bits],
    full: &[u64],
    k: usize,
    from: usize,
    stack: &mut [Vec<u64>],
    picks: &mut Vec<usize>,
    checked: &mut u64,
) -> bool {
    let level = picks.len();
    if level == k {
        *checked += 1;
        return stack[level] == full;
    }
    let need = k - level;
    for i in from..=sets.len().saturating_sub(need) {
        let (lo, hi) = stack.split_at_mut(level + 1);
        sets[i].or_into(&lo[level], &mut hi[0]);
        picks.push(i);
        if search(sets, full, k, i + 1, stack, picks, checked) {
            return true;
        }
        picks.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rational;

    fn four() -> SetCoverInstance {
        SetCoverInstance::new(4, vec![vec![0, 1], vec![2, 3], vec![0, 2], vec![1, 3]]).unwrap()
    }

    #[test]
    fn density_examples() {
        assert_eq!(density_psi_sc(&four()).unwrap(), rational(2, 1));
        let singletons = SetCoverInstance::new(5, (0..5).map(|x| vec![x]).collect()).unwrap();
        assert_eq!(density_psi_sc(&singletons).unwrap(), rational(5, 1));
        let with_x =
            SetCoverInstance::new(3, vec![vec![0, 1, 2], vec![1], vec![2, 0]]).unwrap();
        assert!(density_psi_sc(&with_x).unwrap() <= rational(3, 1));
        let infeasible = SetCoverInstance::new(3, vec![vec![0, 1]]).unwrap();
        assert_eq!(density_psi_sc(&infeasible), Err(Error::Infeasible(2)));
    }

    #[test]
    fn greedy_examples() {
        let sol = greedy_sc(&four()).unwrap();
        assert_eq!(sol.chosen, vec![0, 1]);
        assert!(sol.size() <= greedy_bound(rational(2, 1), 4));
        assert_eq!(greedy_bound(rational(2, 1), 4), 3);
        let whole = SetCoverInstance::new(6, vec![(0..6).collect()]).unwrap();
        assert_eq!(greedy_sc(&whole).unwrap().size(), 1);
        assert!(greedy_sc(&SetCoverInstance::new(2, vec![vec![0]]).unwrap()).is_err());
    }

    #[test]
    fn exact_examples() {
        let whole = SetCoverInstance::new(6, vec![(0..6).collect()]).unwrap();
        let out = exact_bounded_sc(&whole, DEFAULT_BUDGET).unwrap();
        assert!(out.is_optimal());
        assert_eq!(out.solution().size(), 1);
        let out = exact_bounded_sc(&four(), DEFAULT_BUDGET).unwrap();
        assert_eq!(out.solution().chosen, vec![0, 1]);
    }

    #[test]
    fn exact_beats_greedy_on_the_classic_trap() {
        // Greedy takes the 4-element middle set first and then needs both
        // halves anyway.
        let trap = SetCoverInstance::new(
            6,
            vec![vec![0, 1, 2], vec![3, 4, 5], vec![1, 2, 3, 4]],
        )
        .unwrap();
        let greedy = greedy_sc(&trap).unwrap();
        assert_eq!(greedy.chosen, vec![0, 1, 2]);
        assert_eq!(
            exact_bounded_sc(&trap, DEFAULT_BUDGET).unwrap().solution().chosen,
            vec![0, 1]
        );
    }

    #[test]
    fn budget_exceeded_keeps_greedy() {
        let out = exact_bounded_sc(&four(), 3).unwrap();
        match out {
            ExactOutcome::BudgetExceeded { greedy, required, .. } => {
                assert_eq!(greedy.size(), 2);
                assert_eq!(required, 1 + 4 + 6);
            }
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn greedy_ratio_integral_bound() {
        // 1/ln(ψ/(ψ-1)) < ψ since ln ψ - ln(ψ-1) = ∫_{ψ-1}^{ψ} dx/x > 1/ψ.
        for psi in [2.0f64, 3.0, 10.0, 100.0] {
            let gap = psi.ln() - (psi - 1.0).ln();
            assert!(gap > 1.0 / psi);
            assert!(1.0 / gap < psi);
            // and the integral is below the left-endpoint rectangle 1/(ψ-1)
            assert!(gap < 1.0 / (psi - 1.0));
        }
    }

    #[test]
    fn wide_ground_set_uses_multiple_words() {
        let n = 130;
        let sets = vec![(0..70).collect(), (60..130).collect(), (0..130).step_by(2).collect()];
        let inst = SetCoverInstance::new(n, sets).unwrap();
        let out = exact_bounded_sc(&inst, DEFAULT_BUDGET).unwrap();
        assert_eq!(out.solution().chosen, vec![0, 1]);
    }
}
