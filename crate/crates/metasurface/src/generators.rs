//! Deterministic constructors for the stock families.

use crate::rng::rng_from_seed;
use crate::universe::{
    Hypothesis, HypothesisClass, MetaFamily, ModelError, PointUniverse,
};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("parameter {name} = {value} outside {low}..={high}")]
    Bounds {
        name: &'static str,
        value: usize,
        low: usize,
        high: usize,
    },
    #[error("{0} must be nonempty")]
    EmptyInput(&'static str),
    #[error("points must be distinct (points {a} and {b} coincide)")]
    DuplicatePoints { a: usize, b: usize },
    #[error("vector {index} has dimension {found}, expected {expected}")]
    Dimension {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("cannot draw {requested} distinct hypotheses over a universe of size {k}")]
    Infeasible { requested: usize, k: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Kind-tagged generator parameters; this is the JSON document accepted by
/// the CLI `generate` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Singleton {
        k: usize,
        s: usize,
    },
    Halfspace {
        points: Vec<Vec<f64>>,
        normal_sets: Vec<Vec<Vec<f64>>>,
    },
    NearComplete {
        k: usize,
    },
    Random {
        k: usize,
        classes: usize,
        hyps_per_class: usize,
        seed: u64,
    },
}

pub fn generate(spec: &GeneratorSpec) -> Result<MetaFamily, GenError> {
    match spec {
        GeneratorSpec::Singleton { k, s } => gen_singleton_family(*k, *s),
        GeneratorSpec::Halfspace {
            points,
            normal_sets,
        } => gen_halfspace_family(points, normal_sets),
        GeneratorSpec::NearComplete { k } => gen_near_complete_family(*k),
        GeneratorSpec::Random {
            k,
            classes,
            hyps_per_class,
            seed,
        } => gen_random_family(*k, *classes, *hyps_per_class, *seed),
    }
}

/// The two-class family on three points with classes `{100}` and `{010}`:
/// the smallest family exercising all of the non-triviality conditions.
pub fn pair_singleton_family() -> MetaFamily {
    let universe = PointUniverse::new(3).expect("static size");
    MetaFamily::new(
        universe,
        vec![
            HypothesisClass::parse("H_a", &["100"]).expect("static class"),
            HypothesisClass::parse("H_b", &["010"]).expect("static class"),
        ],
    )
    .expect("static family")
}

/// One class per nonempty subset `X` of the points with `|X| <= s`; the
/// class for `X` holds the single-point indicators of its members. Classes
/// are ordered by (size, lexicographic) subset order and named `x{i}-{j}-…`.
pub fn gen_singleton_family(k: usize, s: usize) -> Result<MetaFamily, GenError> {
    let universe = PointUniverse::new(k)?;
    if s == 0 || s > k {
        return Err(GenError::Bounds {
            name: "s",
            value: s,
            low: 1,
            high: k,
        });
    }
    let mut classes = Vec::new();
    let mut subset_stack: Vec<Vec<usize>> = Vec::new();
    for size in 1..=s {
        subset_stack.clear();
        emit_subsets(k, size, &mut |subset| subset_stack.push(subset.to_vec()));
        for subset in &subset_stack {
            let hyps: Vec<Hypothesis> = subset
                .iter()
                .map(|&x| Hypothesis::from_bits(1 << x, k).expect("indicator fits"))
                .collect();
            let name = format!(
                "x{}",
                subset
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join("-")
            );
            classes.push(HypothesisClass::new(name, hyps)?);
        }
    }
    Ok(MetaFamily::new(universe, classes)?)
}

fn emit_subsets(n: usize, size: usize, f: &mut impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..size).collect();
    if size > n {
        return;
    }
    loop {
        f(&idx);
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] + (size - i) < n {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Half-space classes over a finite point set. For each normal set `V` the
/// class holds every distinct labeling of the points by `x -> [w·x >= b]`
/// with `w` in `V`. Sweeping `b` over midpoints between consecutive
/// projections plus one value below and one above enumerates all distinct
/// behaviors, so no real-valued search is needed.
pub fn gen_halfspace_family(
    points: &[Vec<f64>],
    normal_sets: &[Vec<Vec<f64>>],
) -> Result<MetaFamily, GenError> {
    if points.is_empty() {
        return Err(GenError::EmptyInput("points"));
    }
    if normal_sets.is_empty() {
        return Err(GenError::EmptyInput("normal_sets"));
    }
    let dim = points[0].len();
    if dim == 0 {
        return Err(GenError::EmptyInput("point coordinates"));
    }
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(GenError::Dimension {
                index: i,
                found: p.len(),
                expected: dim,
            });
        }
        for (j, q) in points.iter().enumerate().skip(i + 1) {
            if p == q {
                return Err(GenError::DuplicatePoints { a: i, b: j });
            }
        }
    }
    let k = points.len();
    let universe = PointUniverse::new(k)?;

    let mut classes = Vec::new();
    for (vi, normals) in normal_sets.iter().enumerate() {
        if normals.is_empty() {
            return Err(GenError::EmptyInput("normal set"));
        }
        let mut labelings: BTreeSet<u32> = BTreeSet::new();
        for (wi, w) in normals.iter().enumerate() {
            if w.len() != dim {
                return Err(GenError::Dimension {
                    index: wi,
                    found: w.len(),
                    expected: dim,
                });
            }
            let projections: Vec<f64> = points
                .iter()
                .map(|p| p.iter().zip(w).map(|(a, b)| a * b).sum())
                .collect();
            let mut distinct: Vec<f64> = projections.clone();
            distinct.sort_by(|a, b| a.partial_cmp(b).expect("finite projections"));
            distinct.dedup();
            let mut thresholds = vec![distinct[0] - 1.0];
            for pair in distinct.windows(2) {
                thresholds.push((pair[0] + pair[1]) / 2.0);
            }
            thresholds.push(distinct[distinct.len() - 1] + 1.0);
            for b in thresholds {
                let mut bits = 0u32;
                for (x, &proj) in projections.iter().enumerate() {
                    if proj >= b {
                        bits |= 1 << x;
                    }
                }
                labelings.insert(bits);
            }
        }
        let hyps: Vec<Hypothesis> = labelings
            .into_iter()
            .map(|bits| Hypothesis::from_bits(bits, k).expect("labeling fits"))
            .collect();
        classes.push(HypothesisClass::new(format!("v{vi}"), hyps)?);
    }
    Ok(MetaFamily::new(universe, classes)?)
}

/// Two classes over `k >= 2` points: `nc` holds every hypothesis except the
/// all-ones one, and `top` holds only the all-ones hypothesis.
pub fn gen_near_complete_family(k: usize) -> Result<MetaFamily, GenError> {
    let universe = PointUniverse::new(k)?;
    if k < 2 {
        return Err(GenError::Bounds {
            name: "k",
            value: k,
            low: 2,
            high: crate::universe::DEFAULT_UNIVERSE_CAP,
        });
    }
    let full = (1u32 << k) - 1;
    let nc: Vec<Hypothesis> = (0..full)
        .map(|bits| Hypothesis::from_bits(bits, k).expect("bits fit"))
        .collect();
    let top = vec![Hypothesis::from_bits(full, k).expect("bits fit")];
    Ok(MetaFamily::new(
        universe,
        vec![
            HypothesisClass::new("nc", nc)?,
            HypothesisClass::new("top", top)?,
        ],
    )?)
}

/// Random duplicate-free hypothesis sets, deterministic in the seed. Classes
/// are named `r0`, `r1`, … and each class' hypotheses are sorted.
pub fn gen_random_family(
    k: usize,
    num_classes: usize,
    hyps_per_class: usize,
    seed: u64,
) -> Result<MetaFamily, GenError> {
    let universe = PointUniverse::new(k)?;
    if num_classes == 0 {
        return Err(GenError::Bounds {
            name: "classes",
            value: 0,
            low: 1,
            high: usize::MAX,
        });
    }
    if hyps_per_class == 0 || (k < 32 && hyps_per_class as u64 > 1u64 << k) {
        return Err(GenError::Infeasible {
            requested: hyps_per_class,
            k,
        });
    }
    let mut rng = rng_from_seed(seed);
    let mut classes = Vec::with_capacity(num_classes);
    for c in 0..num_classes {
        let mut bits: Vec<u32> = if k <= 16 {
            let mut all: Vec<u32> = (0..1u32 << k).collect();
            all.shuffle(&mut rng);
            all.truncate(hyps_per_class);
            all
        } else {
            let mut seen = std::collections::HashSet::new();
            let mut out = Vec::with_capacity(hyps_per_class);
            while out.len() < hyps_per_class {
                let b: u32 = rng.random_range(0..1u32 << k);
                if seen.insert(b) {
                    out.push(b);
                }
            }
            out
        };
        bits.sort_unstable();
        let hyps: Vec<Hypothesis> = bits
            .into_iter()
            .map(|b| Hypothesis::from_bits(b, k).expect("bits fit"))
            .collect();
        classes.push(HypothesisClass::new(format!("r{c}"), hyps)?);
    }
    Ok(MetaFamily::new(universe, classes)?)
}
