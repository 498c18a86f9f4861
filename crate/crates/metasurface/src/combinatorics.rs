//! Exact combinatorial parameters of classes and families.
//!
//! Everything here is exhaustive search over bit-encoded example sets. A
//! labeled example `(x, y)` occupies slot `2x + y` of a `u64` mask, a set of
//! examples is a mask, and a hypothesis is summarized by its misfit mask (the
//! examples it gets wrong). A set is realizable by a class iff some
//! hypothesis' misfit mask misses it entirely, so:
//!
//! - minimal non-realizable sets are the minimal transversals of the misfit
//!   masks, enumerated in size order with superset pruning;
//! - a set realizable by the family is a subset of some hypothesis' agree
//!   mask, which keeps the family-relative sweeps to `2^K` candidates per
//!   hypothesis instead of `2^(2K)`.
//!
//! Searches check their candidate counts against [`crate::budget`] and fail
//! loudly rather than run open-ended.

use crate::budget::current_budget;
use crate::rational::Rational;
use crate::universe::{
    ExampleSet, HypothesisClass, LabeledExample, MetaFamily, ModelError,
};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("enumeration needs {needed} candidates, budget is {budget} (raise METASURFACE_BUDGET)")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("epsilon must lie in [0,1], got {0}")]
    InvalidEpsilon(String),
    #[error("class index {index} outside family of {len} classes")]
    ClassIndex { index: usize, len: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Value of a dual-Helly style search: exact, or truncated by the size cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HellyValue {
    Exact(usize),
    ExceedsCap,
}

impl HellyValue {
    pub fn exact(&self) -> Option<usize> {
        match self {
            HellyValue::Exact(v) => Some(*v),
            HellyValue::ExceedsCap => None,
        }
    }
}

/// Result of a dual Helly computation. When present, the witness is a
/// minimal non-realizable set attaining the extremal size: it is
/// non-realizable by the queried class while every proper subset is
/// realizable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HellyResult {
    pub value: HellyValue,
    pub witness: Option<ExampleSet>,
    pub epsilon: Rational,
}

/// The optimal error function sampled at `m = 0..=m_max`; values are
/// nonincreasing and the final segment is constant once `m` passes the
/// largest witness size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorCurve {
    points: Vec<(usize, Rational)>,
}

impl ErrorCurve {
    pub fn breakpoints(&self) -> &[(usize, Rational)] {
        &self.points
    }

    pub fn m_max(&self) -> usize {
        self.points.len() - 1
    }

    /// Value at `m`, clamped to the last computed point beyond `m_max`.
    pub fn value_at(&self, m: usize) -> &Rational {
        let idx = m.min(self.points.len() - 1);
        &self.points[idx].1
    }
}

/// Outcome of the three non-triviality checkers. Witnesses re-validate
/// against the checker definitions: the weak/strong witness is an example
/// realizable by at least two / by all classes, and the domination pair is
/// `(dominating, dominated)` class indices with the dominating class'
/// hypothesis set containing the dominated one's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialityReport {
    pub weak_nonseparability: bool,
    pub weak_witness: Option<LabeledExample>,
    pub no_pairwise_domination: bool,
    pub domination_pair: Option<(usize, usize)>,
    pub strong_nonseparability: bool,
    pub strong_witness: Option<LabeledExample>,
}

// ---------------------------------------------------------------------------
// Bit-level helpers

struct ClassMasks {
    misfits: Vec<u64>,
}

impl ClassMasks {
    fn of(class: &HypothesisClass) -> Self {
        ClassMasks {
            misfits: class.hypotheses().iter().map(|h| h.misfit_mask()).collect(),
        }
    }

    fn realizable(&self, set: u64) -> bool {
        self.misfits.iter().any(|&m| set & m == 0)
    }

    fn min_errors(&self, set: u64) -> u32 {
        self.misfits
            .iter()
            .map(|&m| (set & m).count_ones())
            .min()
            .expect("class is nonempty")
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    num
}

/// Lexicographic combinations of `0..n` taken `k` at a time.
struct IndexCombinations {
    n: usize,
    k: usize,
    cur: Vec<usize>,
    started: bool,
    done: bool,
}

impl IndexCombinations {
    fn new(n: usize, k: usize) -> Self {
        IndexCombinations {
            n,
            k,
            cur: (0..k).collect(),
            started: false,
            done: k > n,
        }
    }

    fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.cur);
        }
        // Advance the rightmost index that still has room.
        let k = self.k;
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.cur[i] + (k - i) < self.n {
                self.cur[i] += 1;
                for j in i + 1..k {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                return Some(&self.cur);
            }
        }
    }
}

fn mask_of(slots: &[usize], chosen: &[usize]) -> u64 {
    chosen.iter().map(|&i| 1u64 << slots[i]).sum()
}

fn first_witness_inside(witnesses: &[u64], set: u64) -> Option<u64> {
    witnesses.iter().copied().find(|&w| w & set == w)
}

/// Keeps the witness list sorted by popcount (stable within a size).
fn insert_witness(witnesses: &mut Vec<u64>, w: u64) {
    let size = w.count_ones();
    let pos = witnesses.partition_point(|x| x.count_ones() <= size);
    witnesses.insert(pos, w);
}

fn check_budget(needed: u128) -> Result<(), SearchError> {
    let budget = current_budget();
    if needed > budget as u128 {
        return Err(SearchError::BudgetExceeded { needed, budget });
    }
    Ok(())
}

fn class_index_checked(family: &MetaFamily, index: usize) -> Result<(), SearchError> {
    if index >= family.len() {
        return Err(SearchError::ClassIndex {
            index,
            len: family.len(),
        });
    }
    Ok(())
}

fn check_epsilon(eps: &Rational) -> Result<(), SearchError> {
    if eps.is_negative() || *eps > Rational::one() {
        return Err(SearchError::InvalidEpsilon(
            crate::rational::format_rational(eps),
        ));
    }
    Ok(())
}

/// `min_errors/size > eps`, compared exactly without building rationals.
fn loss_exceeds(min_errors: u32, size: u32, eps: &Rational) -> bool {
    if let (Some(num), Some(den)) = (eps.numer().to_u128(), eps.denom().to_u128()) {
        (min_errors as u128) * den > num * (size as u128)
    } else {
        Rational::new((min_errors as i64).into(), (size as i64).into()) > *eps
    }
}

// ---------------------------------------------------------------------------
// Minimal non-realizable sets over the full example space

fn minimal_witnesses_full(
    masks: &ClassMasks,
    num_slots: usize,
    size_cap: usize,
) -> Result<Vec<u64>, SearchError> {
    let cap = size_cap.min(num_slots);
    let mut needed: u128 = 0;
    for s in 1..=cap {
        needed = needed.saturating_add(binomial(num_slots, s));
    }
    check_budget(needed)?;

    let slots: Vec<usize> = (0..num_slots).collect();
    let mut witnesses: Vec<u64> = Vec::new();
    for s in 1..=cap {
        let mut combos = IndexCombinations::new(num_slots, s);
        while let Some(chosen) = combos.next() {
            let mask = mask_of(&slots, chosen);
            // Any unpruned non-realizable set found in size order is minimal:
            // a smaller witness inside it would already have pruned it.
            if first_witness_inside(&witnesses, mask).is_some() {
                continue;
            }
            if !masks.realizable(mask) {
                witnesses.push(mask);
            }
        }
    }
    Ok(witnesses)
}

/// Is there a non-realizable set containing none of the known witnesses?
/// DFS over partial transversals of the misfit masks; `true` means the
/// capped witness search was incomplete.
fn exists_unwitnessed_nonrealizable(
    masks: &ClassMasks,
    witnesses: &[u64],
) -> Result<bool, SearchError> {
    fn dfs(
        set: u64,
        masks: &ClassMasks,
        witnesses: &[u64],
        nodes: &mut u64,
        budget: u64,
    ) -> Result<bool, SearchError> {
        *nodes += 1;
        if *nodes > budget {
            return Err(SearchError::BudgetExceeded {
                needed: *nodes as u128,
                budget,
            });
        }
        let Some(&uncovered) = masks.misfits.iter().find(|&&m| set & m == 0) else {
            return Ok(true);
        };
        let mut bits = uncovered;
        while bits != 0 {
            let slot = bits.trailing_zeros();
            bits &= bits - 1;
            let cand = set | (1u64 << slot);
            if first_witness_inside(witnesses, cand).is_some() {
                continue;
            }
            if dfs(cand, masks, witnesses, nodes, budget)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    let mut nodes = 0u64;
    dfs(0, masks, witnesses, &mut nodes, current_budget())
}

/// All minimal non-realizable sets of size at most `size_cap`, in size order.
/// Every returned set has positive loss while all of its proper subsets are
/// realizable.
pub fn minimal_nonrealizable_sets(
    class: &HypothesisClass,
    size_cap: usize,
) -> Result<Vec<ExampleSet>, SearchError> {
    let masks = ClassMasks::of(class);
    let witnesses = minimal_witnesses_full(&masks, 2 * class.universe_size(), size_cap)?;
    Ok(witnesses.into_iter().map(ExampleSet::from_mask).collect())
}

/// Dual Helly number of a class: the largest size among minimal
/// non-realizable sets. Returns `ExceedsCap` when minimal witnesses beyond
/// `cap` exist, and `Exact(0)` when no non-realizable set exists at all.
pub fn dual_helly(class: &HypothesisClass, cap: usize) -> Result<HellyResult, SearchError> {
    let num_slots = 2 * class.universe_size();
    let masks = ClassMasks::of(class);
    let witnesses = minimal_witnesses_full(&masks, num_slots, cap)?;
    if cap < num_slots && exists_unwitnessed_nonrealizable(&masks, &witnesses)? {
        return Ok(HellyResult {
            value: HellyValue::ExceedsCap,
            witness: None,
            epsilon: Rational::zero(),
        });
    }
    let best = witnesses
        .iter()
        .copied()
        .max_by_key(|w| w.count_ones())
        .map(|_| {
            // first witness of maximal size, in enumeration order
            let max = witnesses.iter().map(|w| w.count_ones()).max().unwrap();
            *witnesses.iter().find(|w| w.count_ones() == max).unwrap()
        });
    Ok(HellyResult {
        value: HellyValue::Exact(best.map_or(0, |w| w.count_ones() as usize)),
        witness: best.map(ExampleSet::from_mask),
        epsilon: Rational::zero(),
    })
}

/// ε dual Helly number of a single class, quantifying over *all* example
/// sets: the smallest `m` such that every set with loss above `eps` contains
/// a non-realizable subset of size at most `m`. Computed as the maximum,
/// over qualifying sets, of the smallest witness they contain.
pub fn eps_dual_helly_class(
    class: &HypothesisClass,
    eps: &Rational,
    cap: usize,
) -> Result<HellyResult, SearchError> {
    check_epsilon(eps)?;
    let num_slots = 2 * class.universe_size();
    check_budget(1u128 << num_slots)?;
    let masks = ClassMasks::of(class);
    let witnesses = minimal_witnesses_full(&masks, num_slots, cap)?;

    let mut best: Option<(u32, u64)> = None;
    for set in 1u64..(1u64 << num_slots) {
        let min_errors = masks.min_errors(set);
        if min_errors == 0 || !loss_exceeds(min_errors, set.count_ones(), eps) {
            continue;
        }
        match first_witness_inside(&witnesses, set) {
            None => {
                // This qualifying set is witnessed only above the cap.
                return Ok(HellyResult {
                    value: HellyValue::ExceedsCap,
                    witness: None,
                    epsilon: eps.clone(),
                });
            }
            Some(w) => {
                let size = w.count_ones();
                if best.map_or(true, |(b, _)| size > b) {
                    best = Some((size, w));
                }
            }
        }
    }
    Ok(HellyResult {
        value: HellyValue::Exact(best.map_or(0, |(s, _)| s as usize)),
        witness: best.map(|(_, w)| ExampleSet::from_mask(w)),
        epsilon: eps.clone(),
    })
}

// ---------------------------------------------------------------------------
// Family-relative sweeps
//
// A set realizable by the family is a subset of agree(h) for some hypothesis
// h of some class, so the sweep runs over those 2^K-sized lattices only.

struct ProfileEntry {
    mask: u64,
    loss_num: u32,
    loss_den: u32,
    min_witness_size: u32,
    min_witness_mask: u64,
}

impl ProfileEntry {
    fn loss(&self) -> Rational {
        Rational::new((self.loss_num as i64).into(), (self.loss_den as i64).into())
    }
}

/// Every family-realizable set that is non-realizable by the target class,
/// together with its exact loss and the smallest witness it contains.
fn class_profile(family: &MetaFamily, class_idx: usize) -> Result<Vec<ProfileEntry>, SearchError> {
    let k = family.universe().size();
    let masks = ClassMasks::of(family.class(class_idx));

    let mut bases: Vec<u64> = Vec::new();
    let mut seen_bases = HashSet::new();
    for class in family.classes() {
        for h in class.hypotheses() {
            let base = h.agree_mask();
            if seen_bases.insert(base) {
                bases.push(base);
            }
        }
    }
    check_budget((bases.len() as u128).saturating_mul(1u128 << k))?;

    let mut visited: HashSet<u64> = HashSet::new();
    let mut witnesses: Vec<u64> = Vec::new();
    let mut entries = Vec::new();

    for base in bases {
        let slots: Vec<usize> = (0..64)
            .filter(|&s| base & (1u64 << s) != 0)
            .collect();
        debug_assert_eq!(slots.len(), k);
        for s in 1..=k {
            let mut combos = IndexCombinations::new(k, s);
            while let Some(chosen) = combos.next() {
                let mask = mask_of(&slots, chosen);
                if !visited.insert(mask) {
                    continue;
                }
                let (w_size, w_mask) = match first_witness_inside(&witnesses, mask) {
                    Some(w) => (w.count_ones(), w),
                    None => {
                        if masks.realizable(mask) {
                            continue;
                        }
                        // New minimal witness: all smaller witnesses inside
                        // this base were already enumerated.
                        insert_witness(&mut witnesses, mask);
                        (mask.count_ones(), mask)
                    }
                };
                entries.push(ProfileEntry {
                    mask,
                    loss_num: masks.min_errors(mask),
                    loss_den: mask.count_ones(),
                    min_witness_size: w_size,
                    min_witness_mask: w_mask,
                });
            }
        }
    }
    Ok(entries)
}

/// ε dual Helly number of `class_idx` relative to the family: as
/// [`eps_dual_helly_class`] but quantifying only over sets realizable by
/// some class of the family.
pub fn eps_dual_helly_relative(
    family: &MetaFamily,
    class_idx: usize,
    eps: &Rational,
    cap: usize,
) -> Result<HellyResult, SearchError> {
    class_index_checked(family, class_idx)?;
    check_epsilon(eps)?;
    let entries = class_profile(family, class_idx)?;
    let mut best: Option<(u32, u64)> = None;
    for e in &entries {
        if !loss_exceeds(e.loss_num, e.loss_den, eps) {
            continue;
        }
        if best.map_or(true, |(b, _)| e.min_witness_size > b) {
            best = Some((e.min_witness_size, e.min_witness_mask));
        }
    }
    let value = best.map_or(0, |(s, _)| s as usize);
    if value > cap {
        return Ok(HellyResult {
            value: HellyValue::ExceedsCap,
            witness: None,
            epsilon: eps.clone(),
        });
    }
    Ok(HellyResult {
        value: HellyValue::Exact(value),
        witness: best.map(|(_, w)| ExampleSet::from_mask(w)),
        epsilon: eps.clone(),
    })
}

/// ε dual Helly number of the family: the maximum of
/// [`eps_dual_helly_relative`] over classes, with the attaining class index.
pub fn eps_dual_helly_family(
    family: &MetaFamily,
    eps: &Rational,
    cap: usize,
) -> Result<(HellyResult, Option<usize>), SearchError> {
    check_epsilon(eps)?;
    let mut best = HellyResult {
        value: HellyValue::Exact(0),
        witness: None,
        epsilon: eps.clone(),
    };
    let mut best_class = None;
    for idx in 0..family.len() {
        let r = eps_dual_helly_relative(family, idx, eps, cap)?;
        let better = match (&r.value, &best.value) {
            (HellyValue::ExceedsCap, HellyValue::ExceedsCap) => false,
            (HellyValue::ExceedsCap, _) => true,
            (_, HellyValue::ExceedsCap) => false,
            (HellyValue::Exact(a), HellyValue::Exact(b)) => a > b,
        };
        if better {
            best = r;
            best_class = Some(idx);
        }
    }
    Ok((best, best_class))
}

/// Optimal error curve of the family at `m = 0..=m_max`: for each `m`, the
/// least `ε` whose family ε dual Helly number is at most `m`. The infimum is
/// attained on the finite grid of achievable set losses.
pub fn optimal_error_curve(
    family: &MetaFamily,
    m_max: usize,
) -> Result<ErrorCurve, SearchError> {
    let mut entries = Vec::new();
    for idx in 0..family.len() {
        entries.extend(class_profile(family, idx)?);
    }
    if entries.is_empty() {
        return Ok(ErrorCurve {
            points: (0..=m_max).map(|m| (m, Rational::zero())).collect(),
        });
    }

    let mut pairs: Vec<(Rational, u32)> = entries
        .iter()
        .map(|e| (e.loss(), e.min_witness_size))
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));

    // suffix_max[i] = largest min-witness among entries with loss >= pairs[i]
    let mut suffix_max = vec![0u32; pairs.len() + 1];
    for i in (0..pairs.len()).rev() {
        suffix_max[i] = suffix_max[i + 1].max(pairs[i].1);
    }

    let mut grid: Vec<Rational> = pairs.iter().map(|(l, _)| l.clone()).collect();
    grid.dedup();
    // helly_above[g] = family ε dual Helly number for ε = grid[g]
    let helly_above: Vec<u32> = grid
        .iter()
        .map(|l| {
            let idx = pairs.partition_point(|(loss, _)| loss <= l);
            suffix_max[idx]
        })
        .collect();
    let helly_all = suffix_max[0];

    let mut points = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let eps = if helly_all as usize <= m {
            Rational::zero()
        } else {
            let g = helly_above
                .iter()
                .position(|&h| h as usize <= m)
                .expect("helly number above the largest loss is 0");
            grid[g].clone()
        };
        points.push((m, eps));
    }
    Ok(ErrorCurve { points })
}

/// A hard set for `class_idx`: realizable by the family, with loss above
/// `eps`, yet with every subset of size at most `m` realizable by the class.
/// `None` exactly when `m` is at least the relative ε dual Helly number.
pub fn find_hard_set(
    family: &MetaFamily,
    class_idx: usize,
    eps: &Rational,
    m: usize,
) -> Result<Option<ExampleSet>, SearchError> {
    class_index_checked(family, class_idx)?;
    check_epsilon(eps)?;
    let entries = class_profile(family, class_idx)?;
    for e in &entries {
        if loss_exceeds(e.loss_num, e.loss_den, eps) && e.min_witness_size as usize > m {
            return Ok(Some(ExampleSet::from_mask(e.mask)));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// VC dimension

fn exists_shattered_subset(class: &HypothesisClass, t: usize) -> bool {
    let k = class.universe_size();
    let want = 1usize << t;
    let mut combos = IndexCombinations::new(k, t);
    let mut seen = vec![false; want];
    while let Some(points) = combos.next() {
        seen.iter_mut().for_each(|b| *b = false);
        let mut count = 0;
        for h in class.hypotheses() {
            let mut pattern = 0usize;
            for (i, &p) in points.iter().enumerate() {
                pattern |= usize::from(h.label(p)) << i;
            }
            if !seen[pattern] {
                seen[pattern] = true;
                count += 1;
                if count == want {
                    return true;
                }
            }
        }
    }
    false
}

/// Largest `t <= cap` such that some `t`-subset of points is shattered.
pub fn vc_dimension(class: &HypothesisClass, cap: usize) -> usize {
    let max_t = cap.min(class.universe_size());
    let mut best = 0;
    for t in 1..=max_t {
        if exists_shattered_subset(class, t) {
            best = t;
        } else {
            break;
        }
    }
    best
}

/// `max` of [`vc_dimension`] over the family's classes.
pub fn family_vc(family: &MetaFamily) -> usize {
    family
        .classes()
        .iter()
        .map(|c| vc_dimension(c, family.universe().size()))
        .max()
        .expect("family is nonempty")
}

// ---------------------------------------------------------------------------
// Non-triviality checkers

/// Slots realizable by the class: union of its hypotheses' agree masks.
fn realizable_slots(class: &HypothesisClass) -> u64 {
    class
        .hypotheses()
        .iter()
        .fold(0u64, |acc, h| acc | h.agree_mask())
}

/// Is some labeled example realizable by at least two classes?
pub fn check_weak_nonseparability(family: &MetaFamily) -> (bool, Option<LabeledExample>) {
    let per_class: Vec<u64> = family.classes().iter().map(realizable_slots).collect();
    for slot in 0..family.universe().num_slots() {
        let bit = 1u64 << slot;
        if per_class.iter().filter(|&&m| m & bit != 0).count() > 1 {
            return (true, Some(LabeledExample::from_slot(slot)));
        }
    }
    (false, None)
}

/// Is some labeled example realizable by every class? Over a finite universe
/// this is equivalent to the existence of a domain realizable by all classes:
/// such a domain's support lies in an intersection of hypothesis graphs, and
/// that intersection is nonempty iff a single example is realizable by all.
pub fn check_strong_nonseparability(family: &MetaFamily) -> (bool, Option<LabeledExample>) {
    let per_class: Vec<u64> = family.classes().iter().map(realizable_slots).collect();
    let all = per_class
        .iter()
        .fold(family.universe().full_mask(), |acc, &m| acc & m);
    if all == 0 {
        (false, None)
    } else {
        let slot = all.trailing_zeros() as usize;
        (true, Some(LabeledExample::from_slot(slot)))
    }
}

/// Does no class' hypothesis set contain another's? Containment is
/// equivalent to domination over a finite universe: if `h'` belongs to the
/// candidate dominated class but not the dominating one, the point mass on
/// the uniform distribution over graph(h') separates them, and conversely a
/// contained class realizes everything its container realizes. Returns the
/// violating `(dominating, dominated)` pair when the check fails.
pub fn check_no_pairwise_domination(family: &MetaFamily) -> (bool, Option<(usize, usize)>) {
    let sets: Vec<HashSet<u32>> = family
        .classes()
        .iter()
        .map(|c| c.hypotheses().iter().map(|h| h.bits()).collect())
        .collect();
    for i in 0..family.len() {
        for j in 0..family.len() {
            if i != j && sets[j].is_subset(&sets[i]) {
                return (false, Some((i, j)));
            }
        }
    }
    (true, None)
}

pub fn triviality_report(family: &MetaFamily) -> TrivialityReport {
    let (weak, weak_witness) = check_weak_nonseparability(family);
    let (no_dom, pair) = check_no_pairwise_domination(family);
    let (strong, strong_witness) = check_strong_nonseparability(family);
    TrivialityReport {
        weak_nonseparability: weak,
        weak_witness,
        no_pairwise_domination: no_dom,
        domination_pair: pair,
        strong_nonseparability: strong,
        strong_witness,
    }
}
