//! Core data model for finite-universe meta-learning.
//!
//! Points are indices `0..K-1` over a [`PointUniverse`] of size `K`, labels
//! are bits, and a [`Hypothesis`] is a length-`K` label vector. Classes,
//! families, domains, and meta-distributions are finite compositions of
//! these, so every loss below is an exact [`Rational`] and every infimum is
//! attained.
//!
//! All types are immutable after construction and every operation is a pure
//! function, so values can be shared freely across workers.

use crate::rational::Rational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

/// Largest universe accepted by [`PointUniverse::new`]. Bit-level encodings
/// of labeled examples assume `2K` fits in a `u64` with room to spare.
pub const DEFAULT_UNIVERSE_CAP: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("universe size {size} outside 1..={cap}")]
    UniverseSize { size: usize, cap: usize },
    #[error("hypothesis must have between 1 and {cap} labels, got {len}")]
    HypothesisLength { len: usize, cap: usize },
    #[error("hypothesis bits 0x{bits:x} do not fit {len} labels")]
    HypothesisBits { bits: u32, len: usize },
    #[error("hypothesis label string may contain only '0' and '1'")]
    HypothesisParse,
    #[error("point {point} outside universe of size {size}")]
    UniverseMismatch { point: usize, size: usize },
    #[error("hypothesis class `{name}` must contain at least one hypothesis")]
    EmptyClass { name: String },
    #[error("class `{name}` mixes hypothesis lengths {a} and {b}")]
    MixedLengths { name: String, a: usize, b: usize },
    #[error("duplicate hypothesis `{hypothesis}` in class `{name}`")]
    DuplicateHypothesis { name: String, hypothesis: String },
    #[error("meta-family must contain at least one class")]
    EmptyFamily,
    #[error("duplicate class name `{name}` in meta-family")]
    DuplicateClassName { name: String },
    #[error("class `{name}` has universe size {found}, family expects {expected}")]
    ClassUniverseMismatch {
        name: String,
        found: usize,
        expected: usize,
    },
    #[error("distribution must have at least one atom")]
    EmptyDistribution,
    #[error("atom probabilities must be positive")]
    NonPositiveProbability,
    #[error("atom probabilities sum to {sum}, expected 1")]
    ProbabilitySum { sum: String },
    #[error("duplicate example ({point},{label}) in domain")]
    DuplicateAtom { point: usize, label: u8 },
    #[error("example set must be nonempty")]
    EmptySet,
    #[error("multi-sample rows must all have the same length")]
    RaggedSample,
    #[error("multi-sample has {rows} rows but {drawn} drawn domain indices")]
    SampleShape { rows: usize, drawn: usize },
    #[error("drawn domain index {index} outside meta-distribution with {len} domains")]
    DomainIndex { index: usize, len: usize },
    #[error("example ({point},{label}) outside the support of its drawn domain")]
    OutsideSupport { point: usize, label: u8 },
}

/// A finite, indexed example space: points `0..K-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PointUniverse {
    size: usize,
}

impl PointUniverse {
    pub fn new(size: usize) -> Result<Self, ModelError> {
        Self::with_cap(size, DEFAULT_UNIVERSE_CAP)
    }

    /// Like [`PointUniverse::new`] with an explicit size cap (still at most
    /// [`DEFAULT_UNIVERSE_CAP`]).
    pub fn with_cap(size: usize, cap: usize) -> Result<Self, ModelError> {
        let cap = cap.min(DEFAULT_UNIVERSE_CAP);
        if size == 0 || size > cap {
            return Err(ModelError::UniverseSize { size, cap });
        }
        Ok(PointUniverse { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn points(&self) -> impl Iterator<Item = usize> {
        0..self.size
    }

    /// All labeled examples in slot order: `(0,0), (0,1), (1,0), …`.
    pub fn examples(&self) -> impl Iterator<Item = LabeledExample> {
        (0..2 * self.size).map(LabeledExample::from_slot)
    }

    pub(crate) fn num_slots(&self) -> usize {
        2 * self.size
    }

    pub(crate) fn full_mask(&self) -> u64 {
        (1u64 << self.num_slots()) - 1
    }
}

/// A point together with a binary label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledExample {
    pub point: usize,
    pub label: bool,
}

impl LabeledExample {
    pub fn new(point: usize, label: bool) -> Self {
        LabeledExample { point, label }
    }

    /// Slot encoding used by all bit-level machinery: `2*point + label`.
    pub(crate) fn slot(&self) -> usize {
        2 * self.point + usize::from(self.label)
    }

    pub(crate) fn from_slot(slot: usize) -> Self {
        LabeledExample::new(slot / 2, slot % 2 == 1)
    }
}

impl fmt::Display for LabeledExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.point, u8::from(self.label))
    }
}

/// A classifier over the universe: one label bit per point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hypothesis {
    len: u8,
    bits: u32,
}

impl Hypothesis {
    pub fn from_bits(bits: u32, len: usize) -> Result<Self, ModelError> {
        if len == 0 || len > DEFAULT_UNIVERSE_CAP {
            return Err(ModelError::HypothesisLength {
                len,
                cap: DEFAULT_UNIVERSE_CAP,
            });
        }
        if bits >> len != 0 {
            return Err(ModelError::HypothesisBits { bits, len });
        }
        Ok(Hypothesis {
            len: len as u8,
            bits,
        })
    }

    pub fn from_labels(labels: &[bool]) -> Result<Self, ModelError> {
        let mut bits = 0u32;
        for (i, &l) in labels.iter().enumerate() {
            if l {
                bits |= 1 << i;
            }
        }
        Self::from_bits(bits, labels.len())
    }

    /// Parses a 0/1 string; character `i` is the label of point `i`.
    pub fn parse(s: &str) -> Result<Self, ModelError> {
        let mut labels = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => labels.push(false),
                '1' => labels.push(true),
                _ => return Err(ModelError::HypothesisParse),
            }
        }
        Self::from_labels(&labels)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// The label this hypothesis assigns to `point`.
    pub fn label(&self, point: usize) -> bool {
        debug_assert!(point < self.len());
        (self.bits >> point) & 1 == 1
    }

    /// Slots of the examples this hypothesis classifies correctly
    /// (its graph `{(x, h(x))}` has exactly one slot per point).
    pub(crate) fn agree_mask(&self) -> u64 {
        let mut mask = 0u64;
        for x in 0..self.len() {
            mask |= 1 << (2 * x + usize::from(self.label(x)));
        }
        mask
    }

    /// Slots of the examples this hypothesis gets wrong; complement of the
    /// agree mask within the universe's slots.
    pub(crate) fn misfit_mask(&self) -> u64 {
        self.agree_mask() ^ ((1u64 << (2 * self.len())) - 1)
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in 0..self.len() {
            write!(f, "{}", u8::from(self.label(x)))?;
        }
        Ok(())
    }
}

/// A named, nonempty, duplicate-free set of hypotheses over one universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisClass {
    name: String,
    hypotheses: Vec<Hypothesis>,
}

impl HypothesisClass {
    pub fn new(
        name: impl Into<String>,
        hypotheses: Vec<Hypothesis>,
    ) -> Result<Self, ModelError> {
        let name = name.into();
        let Some(first) = hypotheses.first() else {
            return Err(ModelError::EmptyClass { name });
        };
        let len = first.len();
        let mut seen = std::collections::HashSet::new();
        for h in &hypotheses {
            if h.len() != len {
                return Err(ModelError::MixedLengths {
                    name,
                    a: len,
                    b: h.len(),
                });
            }
            if !seen.insert(h.bits()) {
                return Err(ModelError::DuplicateHypothesis {
                    name,
                    hypothesis: h.to_string(),
                });
            }
        }
        Ok(HypothesisClass { name, hypotheses })
    }

    /// Convenience constructor from 0/1 strings.
    pub fn parse(name: impl Into<String>, patterns: &[&str]) -> Result<Self, ModelError> {
        let hypotheses = patterns
            .iter()
            .map(|p| Hypothesis::parse(p))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(name, hypotheses)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn hypotheses(&self) -> &[Hypothesis] {
        &self.hypotheses
    }

    pub fn universe_size(&self) -> usize {
        self.hypotheses[0].len()
    }

    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sorted hypothesis bit patterns; order-insensitive identity of the class.
    pub(crate) fn sorted_bits(&self) -> Vec<u32> {
        let mut bits: Vec<u32> = self.hypotheses.iter().map(|h| h.bits()).collect();
        bits.sort_unstable();
        bits
    }
}

/// A finite list of hypothesis classes over a shared universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaFamily {
    universe: PointUniverse,
    classes: Vec<HypothesisClass>,
}

impl MetaFamily {
    pub fn new(
        universe: PointUniverse,
        classes: Vec<HypothesisClass>,
    ) -> Result<Self, ModelError> {
        if classes.is_empty() {
            return Err(ModelError::EmptyFamily);
        }
        let mut names = std::collections::HashSet::new();
        for class in &classes {
            if class.universe_size() != universe.size() {
                return Err(ModelError::ClassUniverseMismatch {
                    name: class.name().to_string(),
                    found: class.universe_size(),
                    expected: universe.size(),
                });
            }
            if !names.insert(class.name().to_string()) {
                return Err(ModelError::DuplicateClassName {
                    name: class.name().to_string(),
                });
            }
        }
        Ok(MetaFamily { universe, classes })
    }

    pub fn universe(&self) -> PointUniverse {
        self.universe
    }

    pub fn classes(&self) -> &[HypothesisClass] {
        &self.classes
    }

    pub fn class(&self, index: usize) -> &HypothesisClass {
        &self.classes[index]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name() == name)
    }
}

/// A discrete distribution over labeled examples with exact probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    atoms: Vec<(LabeledExample, Rational)>,
}

impl Domain {
    pub fn new(atoms: Vec<(LabeledExample, Rational)>) -> Result<Self, ModelError> {
        if atoms.is_empty() {
            return Err(ModelError::EmptyDistribution);
        }
        let mut seen = std::collections::HashSet::new();
        let mut sum = Rational::zero();
        for (ex, p) in &atoms {
            if !p.is_positive() {
                return Err(ModelError::NonPositiveProbability);
            }
            if !seen.insert(*ex) {
                return Err(ModelError::DuplicateAtom {
                    point: ex.point,
                    label: u8::from(ex.label),
                });
            }
            sum += p;
        }
        if !sum.is_one() {
            return Err(ModelError::ProbabilitySum {
                sum: crate::rational::format_rational(&sum),
            });
        }
        Ok(Domain { atoms })
    }

    pub fn point_mass(example: LabeledExample) -> Self {
        Domain {
            atoms: vec![(example, Rational::one())],
        }
    }

    /// The uniform distribution over the elements of a nonempty example set.
    pub fn uniform(set: &ExampleSet) -> Result<Self, ModelError> {
        if set.is_empty() {
            return Err(ModelError::EmptySet);
        }
        let p = Rational::new(1.into(), (set.len() as i64).into());
        Ok(Domain {
            atoms: set.iter().map(|ex| (ex, p.clone())).collect(),
        })
    }

    pub fn atoms(&self) -> &[(LabeledExample, Rational)] {
        &self.atoms
    }

    pub fn support(&self) -> impl Iterator<Item = LabeledExample> + '_ {
        self.atoms.iter().map(|(ex, _)| *ex)
    }

    pub fn contains(&self, example: LabeledExample) -> bool {
        self.atoms.iter().any(|(ex, _)| *ex == example)
    }

    fn check_universe(&self, size: usize) -> Result<(), ModelError> {
        for (ex, _) in &self.atoms {
            if ex.point >= size {
                return Err(ModelError::UniverseMismatch {
                    point: ex.point,
                    size,
                });
            }
        }
        Ok(())
    }
}

/// A discrete distribution over domains with exact probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaDistribution {
    atoms: Vec<(Domain, Rational)>,
}

impl MetaDistribution {
    pub fn new(atoms: Vec<(Domain, Rational)>) -> Result<Self, ModelError> {
        if atoms.is_empty() {
            return Err(ModelError::EmptyDistribution);
        }
        let mut sum = Rational::zero();
        for (_, p) in &atoms {
            if !p.is_positive() {
                return Err(ModelError::NonPositiveProbability);
            }
            sum += p;
        }
        if !sum.is_one() {
            return Err(ModelError::ProbabilitySum {
                sum: crate::rational::format_rational(&sum),
            });
        }
        Ok(MetaDistribution { atoms })
    }

    pub fn point_mass(domain: Domain) -> Self {
        MetaDistribution {
            atoms: vec![(domain, Rational::one())],
        }
    }

    pub fn atoms(&self) -> &[(Domain, Rational)] {
        &self.atoms
    }

    pub fn domains(&self) -> impl Iterator<Item = &Domain> {
        self.atoms.iter().map(|(d, _)| d)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check_universe(&self, size: usize) -> Result<(), ModelError> {
        for (d, _) in &self.atoms {
            d.check_universe(size)?;
        }
        Ok(())
    }
}

/// A duplicate-free set of labeled examples, kept sorted by `(point, label)`.
/// May contain both labels of the same point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExampleSet {
    examples: Vec<LabeledExample>,
}

impl ExampleSet {
    pub fn new(examples: impl IntoIterator<Item = LabeledExample>) -> Self {
        let mut examples: Vec<LabeledExample> = examples.into_iter().collect();
        examples.sort_unstable();
        examples.dedup();
        ExampleSet { examples }
    }

    pub fn from_pairs(pairs: &[(usize, bool)]) -> Self {
        Self::new(pairs.iter().map(|&(p, l)| LabeledExample::new(p, l)))
    }

    pub fn examples(&self) -> &[LabeledExample] {
        &self.examples
    }

    pub fn iter(&self) -> impl Iterator<Item = LabeledExample> + '_ {
        self.examples.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn contains(&self, example: LabeledExample) -> bool {
        self.examples.binary_search(&example).is_ok()
    }

    pub fn is_subset_of(&self, other: &ExampleSet) -> bool {
        self.iter().all(|ex| other.contains(ex))
    }

    pub(crate) fn mask(&self) -> u64 {
        self.examples.iter().map(|ex| 1u64 << ex.slot()).sum()
    }

    pub(crate) fn from_mask(mut mask: u64) -> Self {
        let mut examples = Vec::with_capacity(mask.count_ones() as usize);
        while mask != 0 {
            let slot = mask.trailing_zeros() as usize;
            examples.push(LabeledExample::from_slot(slot));
            mask &= mask - 1;
        }
        ExampleSet { examples }
    }
}

/// An `n × m` grid of labeled examples drawn by the two-stage process:
/// row `i` holds `m` examples from the domain at index `domains_drawn[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSample {
    domains_drawn: Vec<usize>,
    examples: Vec<Vec<LabeledExample>>,
}

impl MultiSample {
    pub fn new(
        domains_drawn: Vec<usize>,
        examples: Vec<Vec<LabeledExample>>,
    ) -> Result<Self, ModelError> {
        if domains_drawn.len() != examples.len() {
            return Err(ModelError::SampleShape {
                rows: examples.len(),
                drawn: domains_drawn.len(),
            });
        }
        if let Some(first) = examples.first() {
            let m = first.len();
            if examples.iter().any(|row| row.len() != m) {
                return Err(ModelError::RaggedSample);
            }
        }
        Ok(MultiSample {
            domains_drawn,
            examples,
        })
    }

    pub fn num_domains(&self) -> usize {
        self.examples.len()
    }

    pub fn examples_per_domain(&self) -> usize {
        self.examples.first().map_or(0, |row| row.len())
    }

    pub fn domains_drawn(&self) -> &[usize] {
        &self.domains_drawn
    }

    pub fn rows(&self) -> &[Vec<LabeledExample>] {
        &self.examples
    }

    /// Checks the support invariant against the meta-distribution the sample
    /// was drawn from.
    pub fn validate_support(&self, q: &MetaDistribution) -> Result<(), ModelError> {
        for (row, &d) in self.examples.iter().zip(&self.domains_drawn) {
            let domain = &q
                .atoms()
                .get(d)
                .ok_or(ModelError::DomainIndex {
                    index: d,
                    len: q.len(),
                })?
                .0;
            for ex in row {
                if !domain.contains(*ex) {
                    return Err(ModelError::OutsideSupport {
                        point: ex.point,
                        label: u8::from(ex.label),
                    });
                }
            }
        }
        Ok(())
    }

    /// Union slot mask of row `i`; consistency of a hypothesis with the row
    /// only depends on this.
    pub(crate) fn row_mask(&self, i: usize) -> u64 {
        self.examples[i]
            .iter()
            .fold(0u64, |acc, ex| acc | (1 << ex.slot()))
    }
}

fn check_hypothesis_domain(h: &Hypothesis, d: &Domain) -> Result<(), ModelError> {
    d.check_universe(h.len())
}

/// `Pr[(x,y) ~ D](h(x) != y)`, exactly.
pub fn hypothesis_loss(h: &Hypothesis, d: &Domain) -> Result<Rational, ModelError> {
    check_hypothesis_domain(h, d)?;
    let mut loss = Rational::zero();
    for (ex, p) in d.atoms() {
        if h.label(ex.point) != ex.label {
            loss += p;
        }
    }
    Ok(loss)
}

/// Minimum hypothesis loss over the class (attained; the class is finite).
pub fn class_loss(class: &HypothesisClass, d: &Domain) -> Result<Rational, ModelError> {
    let mut best: Option<Rational> = None;
    for h in class.hypotheses() {
        let loss = hypothesis_loss(h, d)?;
        if loss.is_zero() {
            return Ok(loss);
        }
        best = Some(match best {
            Some(b) if b <= loss => b,
            _ => loss,
        });
    }
    Ok(best.expect("class is nonempty"))
}

/// `E[D ~ Q] class_loss(class, D)`, exactly.
pub fn meta_loss(class: &HypothesisClass, q: &MetaDistribution) -> Result<Rational, ModelError> {
    q.check_universe(class.universe_size())?;
    let mut loss = Rational::zero();
    for (d, p) in q.atoms() {
        loss += class_loss(class, d)? * p;
    }
    Ok(loss)
}

/// Class loss under the uniform distribution over the distinct elements of
/// `s`. Errors on an empty set.
pub fn set_loss(class: &HypothesisClass, s: &ExampleSet) -> Result<Rational, ModelError> {
    if s.is_empty() {
        return Err(ModelError::EmptySet);
    }
    for ex in s.iter() {
        if ex.point >= class.universe_size() {
            return Err(ModelError::UniverseMismatch {
                point: ex.point,
                size: class.universe_size(),
            });
        }
    }
    let mask = s.mask();
    let min_errors = class
        .hypotheses()
        .iter()
        .map(|h| (mask & h.misfit_mask()).count_ones())
        .min()
        .expect("class is nonempty");
    Ok(Rational::new(
        (min_errors as i64).into(),
        (s.len() as i64).into(),
    ))
}

/// Indices of classes that are consistent with every row of the sample: for
/// each row there must be one hypothesis in the class fitting all of the
/// row's examples. The result may be empty.
pub fn consistent_classes(
    family: &MetaFamily,
    sample: &MultiSample,
) -> Result<Vec<usize>, ModelError> {
    let size = family.universe().size();
    for row in sample.rows() {
        for ex in row {
            if ex.point >= size {
                return Err(ModelError::UniverseMismatch {
                    point: ex.point,
                    size,
                });
            }
        }
    }
    let row_masks: Vec<u64> = (0..sample.num_domains())
        .map(|i| sample.row_mask(i))
        .collect();
    let mut out = Vec::new();
    'class: for (idx, class) in family.classes().iter().enumerate() {
        let misfits: Vec<u64> = class.hypotheses().iter().map(|h| h.misfit_mask()).collect();
        for &row in &row_masks {
            if !misfits.iter().any(|&mf| row & mf == 0) {
                continue 'class;
            }
        }
        out.push(idx);
    }
    Ok(out)
}

/// `Some(index)` of the first class with meta-loss exactly zero, else `None`.
pub fn is_meta_realizable(
    family: &MetaFamily,
    q: &MetaDistribution,
) -> Result<Option<usize>, ModelError> {
    for (idx, class) in family.classes().iter().enumerate() {
        if meta_loss(class, q)?.is_zero() {
            return Ok(Some(idx));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ratio, Rational};

    fn h(pattern: &str) -> Hypothesis {
        Hypothesis::parse(pattern).unwrap()
    }

    fn ex(point: usize, label: u8) -> LabeledExample {
        LabeledExample::new(point, label == 1)
    }

    /// K=3 family with classes {100} and {010}.
    pub(crate) fn pair_singleton() -> MetaFamily {
        let universe = PointUniverse::new(3).unwrap();
        let a = HypothesisClass::parse("H_a", &["100"]).unwrap();
        let b = HypothesisClass::parse("H_b", &["010"]).unwrap();
        MetaFamily::new(universe, vec![a, b]).unwrap()
    }

    fn thresholds4() -> HypothesisClass {
        HypothesisClass::parse("thr", &["1111", "0111", "0011", "0001", "0000"]).unwrap()
    }

    /// Independent oracle: loss of a class on a uniform-over-set domain by
    /// direct integer counting over every hypothesis.
    fn uniform_loss_oracle(class: &HypothesisClass, examples: &[(usize, u8)]) -> Rational {
        let mut best = usize::MAX;
        for h in class.hypotheses() {
            let errors = examples
                .iter()
                .filter(|&&(p, l)| u8::from(h.label(p)) != l)
                .count();
            best = best.min(errors);
        }
        ratio(best as i64, examples.len() as i64)
    }

    #[test]
    fn universe_bounds() {
        assert!(PointUniverse::new(0).is_err());
        assert!(PointUniverse::new(25).is_err());
        assert_eq!(PointUniverse::new(24).unwrap().size(), 24);
    }

    #[test]
    fn hypothesis_parse_and_masks() {
        let hy = h("100");
        assert!(hy.label(0) && !hy.label(1) && !hy.label(2));
        // agree slots: (0,1)=1, (1,0)=2, (2,0)=4
        assert_eq!(hy.agree_mask(), 0b010110);
        assert_eq!(hy.misfit_mask(), 0b101001);
        assert!(Hypothesis::parse("10x").is_err());
    }

    #[test]
    fn class_rejects_duplicates_and_mixed_lengths() {
        assert!(HypothesisClass::parse("c", &["10", "10"]).is_err());
        assert!(HypothesisClass::parse("c", &["10", "100"]).is_err());
        assert!(HypothesisClass::parse("c", &[]).is_err());
    }

    #[test]
    fn domain_invariants() {
        let atoms = vec![(ex(0, 1), ratio(1, 2)), (ex(1, 1), ratio(1, 2))];
        assert!(Domain::new(atoms).is_ok());
        assert!(Domain::new(vec![(ex(0, 1), ratio(1, 2))]).is_err());
        assert!(Domain::new(vec![
            (ex(0, 1), ratio(1, 2)),
            (ex(0, 1), ratio(1, 2))
        ])
        .is_err());
        assert!(Domain::new(vec![
            (ex(0, 1), ratio(3, 2)),
            (ex(1, 1), ratio(-1, 2))
        ])
        .is_err());
    }

    #[test]
    fn hypothesis_loss_point_masses() {
        let hy = h("100");
        let d0 = Domain::point_mass(ex(0, 1));
        let d1 = Domain::point_mass(ex(1, 1));
        assert_eq!(hypothesis_loss(&hy, &d0).unwrap(), Rational::zero());
        assert_eq!(hypothesis_loss(&hy, &d1).unwrap(), ratio(1, 1));
        let half = Domain::new(vec![(ex(0, 1), ratio(1, 2)), (ex(1, 1), ratio(1, 2))]).unwrap();
        assert_eq!(hypothesis_loss(&hy, &half).unwrap(), ratio(1, 2));
    }

    #[test]
    fn hypothesis_loss_universe_mismatch() {
        let hy = h("10");
        let d = Domain::point_mass(ex(5, 1));
        assert!(matches!(
            hypothesis_loss(&hy, &d),
            Err(ModelError::UniverseMismatch { point: 5, .. })
        ));
    }

    #[test]
    fn class_loss_examples() {
        let class = HypothesisClass::parse("c", &["100", "010"]).unwrap();
        let d = Domain::point_mass(ex(1, 1));
        assert!(class_loss(&class, &d).unwrap().is_zero());

        let only = HypothesisClass::parse("c", &["100"]).unwrap();
        let half = Domain::new(vec![(ex(0, 1), ratio(1, 2)), (ex(1, 1), ratio(1, 2))]).unwrap();
        assert_eq!(class_loss(&only, &half).unwrap(), ratio(1, 2));

        // Thresholds on 4 points, uniform over {(0,1),(3,0)}: brute-force oracle.
        let thr = thresholds4();
        let atoms = vec![(ex(0, 1), ratio(1, 2)), (ex(3, 0), ratio(1, 2))];
        let d = Domain::new(atoms).unwrap();
        let expected = uniform_loss_oracle(&thr, &[(0, 1), (3, 0)]);
        assert_eq!(expected, ratio(1, 2));
        assert_eq!(class_loss(&thr, &d).unwrap(), expected);
    }

    #[test]
    fn meta_loss_examples() {
        let family = pair_singleton();
        let d = Domain::point_mass(ex(0, 1));
        let q = MetaDistribution::point_mass(d.clone());
        assert_eq!(
            meta_loss(family.class(0), &q).unwrap(),
            class_loss(family.class(0), &d).unwrap()
        );

        // Half mass on domain (0,1), half on (1,1): H_a errs only on the second.
        let q = MetaDistribution::new(vec![
            (Domain::point_mass(ex(0, 1)), ratio(1, 2)),
            (Domain::point_mass(ex(1, 1)), ratio(1, 2)),
        ])
        .unwrap();
        assert_eq!(meta_loss(family.class(0), &q).unwrap(), ratio(1, 2));

        // Point-mass Q realizable by the class: zero loss.
        let q = MetaDistribution::point_mass(Domain::point_mass(ex(2, 0)));
        assert!(meta_loss(family.class(0), &q).unwrap().is_zero());
    }

    #[test]
    fn meta_loss_is_affine_in_q() {
        let family = pair_singleton();
        let q1 = MetaDistribution::point_mass(Domain::point_mass(ex(0, 1)));
        let q2 = MetaDistribution::point_mass(Domain::point_mass(ex(1, 1)));
        let p = ratio(1, 3);
        let mix = MetaDistribution::new(vec![
            (Domain::point_mass(ex(0, 1)), p.clone()),
            (Domain::point_mass(ex(1, 1)), Rational::one() - p.clone()),
        ])
        .unwrap();
        for class in family.classes() {
            let lhs = meta_loss(class, &mix).unwrap();
            let rhs = meta_loss(class, &q1).unwrap() * p.clone()
                + meta_loss(class, &q2).unwrap() * (Rational::one() - p.clone());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn set_loss_examples() {
        let family = pair_singleton();
        let s = ExampleSet::from_pairs(&[(0, true)]);
        assert!(set_loss(family.class(0), &s).unwrap().is_zero());

        let s = ExampleSet::from_pairs(&[(0, true), (1, true)]);
        let expected = uniform_loss_oracle(family.class(0), &[(0, 1), (1, 1)]);
        assert_eq!(set_loss(family.class(0), &s).unwrap(), expected);
        assert_eq!(expected, ratio(1, 2));

        // Contradictory pair on one point.
        let c = HypothesisClass::parse("c", &["1000"]).unwrap();
        let s = ExampleSet::from_pairs(&[(0, false), (0, true)]);
        assert_eq!(set_loss(&c, &s).unwrap(), ratio(1, 2));

        assert!(set_loss(&c, &ExampleSet::new([])).is_err());
    }

    #[test]
    fn consistent_classes_examples() {
        let family = pair_singleton();
        let row = |e: LabeledExample| vec![e];

        let s = MultiSample::new(vec![0], vec![row(ex(0, 1))]).unwrap();
        assert_eq!(consistent_classes(&family, &s).unwrap(), vec![0]);

        let s = MultiSample::new(vec![0], vec![row(ex(2, 0))]).unwrap();
        assert_eq!(consistent_classes(&family, &s).unwrap(), vec![0, 1]);

        let s = MultiSample::new(vec![0, 1], vec![row(ex(0, 1)), row(ex(1, 1))]).unwrap();
        assert!(consistent_classes(&family, &s).unwrap().is_empty());
    }

    #[test]
    fn realizability_examples() {
        let family = pair_singleton();
        let q = MetaDistribution::point_mass(Domain::point_mass(ex(0, 1)));
        assert_eq!(is_meta_realizable(&family, &q).unwrap(), Some(0));

        let q = MetaDistribution::new(vec![
            (Domain::point_mass(ex(0, 1)), ratio(1, 2)),
            (Domain::point_mass(ex(1, 1)), ratio(1, 2)),
        ])
        .unwrap();
        assert_eq!(is_meta_realizable(&family, &q).unwrap(), None);

        let q = MetaDistribution::point_mass(Domain::point_mass(ex(2, 0)));
        assert_eq!(is_meta_realizable(&family, &q).unwrap(), Some(0));
    }

    #[test]
    fn class_loss_never_exceeds_hypothesis_loss() {
        let thr = thresholds4();
        let d = Domain::new(vec![
            (ex(0, 1), ratio(1, 4)),
            (ex(1, 0), ratio(1, 4)),
            (ex(2, 1), ratio(1, 4)),
            (ex(3, 0), ratio(1, 4)),
        ])
        .unwrap();
        let cl = class_loss(&thr, &d).unwrap();
        for h in thr.hypotheses() {
            assert!(cl <= hypothesis_loss(h, &d).unwrap());
        }
    }

    #[test]
    fn multisample_shape_checks() {
        assert!(MultiSample::new(vec![0], vec![vec![ex(0, 1)], vec![ex(1, 1)]]).is_err());
        assert!(MultiSample::new(vec![0, 0], vec![vec![ex(0, 1)], vec![]]).is_err());
        let q = MetaDistribution::point_mass(Domain::point_mass(ex(0, 1)));
        let good = MultiSample::new(vec![0], vec![vec![ex(0, 1)]]).unwrap();
        assert!(good.validate_support(&q).is_ok());
        let bad = MultiSample::new(vec![0], vec![vec![ex(1, 1)]]).unwrap();
        assert!(bad.validate_support(&q).is_err());
    }

    #[test]
    fn example_set_dedups_and_sorts() {
        let s = ExampleSet::from_pairs(&[(2, false), (0, true), (2, false)]);
        assert_eq!(s.len(), 2);
        assert_eq!(s.examples()[0], ex(0, 1));
        assert_eq!(ExampleSet::from_mask(s.mask()), s);
    }
}
