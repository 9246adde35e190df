//! Vanishing conditions imposed by generic simple or 2-fat points on forms of
//! a given multidegree, and the resulting multigraded Hilbert function.
//!
//! A 2-fat point contributes one row per homogeneous coordinate `x_{j,i}`:
//! the partial derivative of every column monomial, evaluated at the point.
//! With every `a_i >= 1` the Euler relations make the value row redundant
//! and cap the rank of each point's block at `n + 1`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::combinat::{enumerate_monomials, MultiMonomial, Multidegree, Shape};
use crate::config::ComputeConfig;
use crate::error::{Error, Result};
use crate::modlinalg::{max_over_trials, trial_rng, FpMatrix, PrimeField, RankResult};

const MAX_RESAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Multiplicity {
    Simple,
    Double,
}

impl Multiplicity {
    pub fn order(self) -> u8 {
        match self {
            Multiplicity::Simple => 1,
            Multiplicity::Double => 2,
        }
    }
}

impl TryFrom<u8> for Multiplicity {
    type Error = Error;
    fn try_from(m: u8) -> Result<Self> {
        match m {
            1 => Ok(Multiplicity::Simple),
            2 => Ok(Multiplicity::Double),
            _ => Err(Error::Precondition(format!(
                "multiplicity {m} not in {{1, 2}}"
            ))),
        }
    }
}

impl From<Multiplicity> for u8 {
    fn from(m: Multiplicity) -> u8 {
        m.order()
    }
}

/// A point of `P^{n_1} x ... x P^{n_t}` in the chart where every `x_{0,i}`
/// is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointTuple {
    blocks: Vec<Vec<u64>>,
}

impl PointTuple {
    pub fn new(shape: &Shape, blocks: Vec<Vec<u64>>, field: PrimeField) -> Result<Self> {
        if blocks.len() != shape.len() {
            return Err(Error::LengthMismatch {
                expected: shape.len(),
                got: blocks.len(),
            });
        }
        for (b, &n) in blocks.iter().zip(shape.factors()) {
            if b.len() != n as usize + 1 {
                return Err(Error::Precondition(format!(
                    "block of length {} for a P^{n} factor",
                    b.len()
                )));
            }
            if b[0] != 1 {
                return Err(Error::Precondition(
                    "point is not chart-normalized (x_0 != 1)".into(),
                ));
            }
            if b.iter().any(|&x| x >= field.modulus()) {
                return Err(Error::Precondition("coordinate not reduced mod p".into()));
            }
        }
        Ok(PointTuple { blocks })
    }

    pub fn blocks(&self) -> &[Vec<u64>] {
        &self.blocks
    }

    /// All homogeneous coordinates, factor by factor.
    pub fn flat(&self) -> impl Iterator<Item = u64> + '_ {
        self.blocks.iter().flatten().copied()
    }

    pub fn random<R: Rng + ?Sized>(shape: &Shape, field: PrimeField, rng: &mut R) -> Self {
        let blocks = shape
            .factors()
            .iter()
            .map(|&n| {
                std::iter::once(1)
                    .chain((0..n).map(|_| field.random_element(rng)))
                    .collect()
            })
            .collect();
        PointTuple { blocks }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FatPointScheme {
    pub shape: Shape,
    pub points: Vec<PointTuple>,
    pub multiplicity: Multiplicity,
}

impl FatPointScheme {
    pub fn new(shape: Shape, points: Vec<PointTuple>, multiplicity: Multiplicity) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if p.blocks.len() != shape.len() {
                return Err(Error::LengthMismatch {
                    expected: shape.len(),
                    got: p.blocks.len(),
                });
            }
            if points[..i].contains(p) {
                return Err(Error::Precondition(format!(
                    "point {i} repeats an earlier point"
                )));
            }
        }
        Ok(FatPointScheme {
            shape,
            points,
            multiplicity,
        })
    }

    /// Length of the scheme: `s` for simple points, `s (n + 1)` for 2-fat.
    pub fn length(&self) -> u64 {
        let s = self.points.len() as u64;
        match self.multiplicity {
            Multiplicity::Simple => s,
            Multiplicity::Double => s * (self.shape.total_dim() as u64 + 1),
        }
    }
}

/// Draws `s` pairwise distinct chart-normalized points from `rng`.
pub fn sample_points<R: Rng + ?Sized>(
    shape: &Shape,
    s: usize,
    field: PrimeField,
    rng: &mut R,
) -> Result<Vec<PointTuple>> {
    let mut points: Vec<PointTuple> = Vec::with_capacity(s);
    while points.len() < s {
        let mut tries = 0;
        let p = loop {
            let p = PointTuple::random(shape, field, rng);
            if !points.contains(&p) {
                break p;
            }
            tries += 1;
            if tries >= MAX_RESAMPLES {
                return Err(Error::PointCollision(tries));
            }
        };
        points.push(p);
    }
    Ok(points)
}

/// `s` generic points drawn from the trial-0 stream of `seed`.
pub fn sample_scheme(
    shape: &Shape,
    s: usize,
    multiplicity: Multiplicity,
    seed: u64,
    field: PrimeField,
) -> Result<FatPointScheme> {
    let points = sample_points(shape, s, field, &mut trial_rng(seed, 0))?;
    Ok(FatPointScheme {
        shape: shape.clone(),
        points,
        multiplicity,
    })
}

/// Rows of conditions imposed by `points` on the monomial columns, given the
/// coordinates of each point and an exponent iterator per column. Shared
/// with the single-projective-space route, which uses different coordinates
/// and columns but the same row rule.
pub(crate) fn condition_rows<'a, C>(
    field: PrimeField,
    coords: impl Iterator<Item = Vec<u64>>,
    num_vars: usize,
    columns: &'a [C],
    exponents: impl Fn(&'a C) -> Vec<u32>,
    multiplicity: Multiplicity,
) -> FpMatrix {
    let cols = columns.len();
    let exps: Vec<Vec<u32>> = columns.iter().map(exponents).collect();
    let mut entries = Vec::new();
    let mut rows = 0;
    let mut terms = vec![0u64; num_vars];
    let mut prefix = vec![0u64; num_vars + 1];
    let mut suffix = vec![0u64; num_vars + 1];
    for x in coords {
        debug_assert_eq!(x.len(), num_vars);
        let block_start = entries.len();
        let width = match multiplicity {
            Multiplicity::Simple => 1,
            Multiplicity::Double => num_vars,
        };
        entries.resize(block_start + width * cols, 0);
        for (c, e) in exps.iter().enumerate() {
            for v in 0..num_vars {
                terms[v] = field.pow(x[v], e[v] as u64);
            }
            match multiplicity {
                Multiplicity::Simple => {
                    entries[block_start + c] = terms.iter().fold(1, |acc, &t| field.mul(acc, t));
                }
                Multiplicity::Double => {
                    prefix[0] = 1;
                    for v in 0..num_vars {
                        prefix[v + 1] = field.mul(prefix[v], terms[v]);
                    }
                    suffix[num_vars] = 1;
                    for v in (0..num_vars).rev() {
                        suffix[v] = field.mul(suffix[v + 1], terms[v]);
                    }
                    for v in 0..num_vars {
                        if e[v] == 0 {
                            continue;
                        }
                        let d = field.mul(e[v] as u64, field.pow(x[v], e[v] as u64 - 1));
                        let d = field.mul(d, field.mul(prefix[v], suffix[v + 1]));
                        entries[block_start + v * cols + c] = d;
                    }
                }
            }
        }
        rows += width;
    }
    FpMatrix::from_raw(field, rows, cols, entries)
}

/// Condition matrix of `scheme` in multidegree `degree`. Columns follow
/// [`enumerate_monomials`]; rows run over points, then factors, then the
/// variables of each factor.
pub fn conditions_matrix(
    scheme: &FatPointScheme,
    degree: &Multidegree,
    field: PrimeField,
    size_cap: usize,
) -> Result<FpMatrix> {
    let monomials = enumerate_monomials(&scheme.shape, degree, size_cap)?;
    Ok(conditions_matrix_on(scheme, &monomials, field))
}

pub(crate) fn conditions_matrix_on(
    scheme: &FatPointScheme,
    monomials: &[MultiMonomial],
    field: PrimeField,
) -> FpMatrix {
    condition_rows(
        field,
        scheme.points.iter().map(|p| p.flat().collect()),
        scheme.shape.num_variables(),
        monomials,
        |m: &MultiMonomial| m.flat().collect(),
        scheme.multiplicity,
    )
}

/// Hilbert function of `s` generic points of the given multiplicity at
/// `degree`, as a max-over-trials rank. The value is always a lower bound
/// for the generic one and equals it with overwhelming probability.
pub fn hilbert_function(
    shape: &Shape,
    s: usize,
    multiplicity: Multiplicity,
    degree: &Multidegree,
    config: &ComputeConfig,
) -> Result<RankResult> {
    let monomials = enumerate_monomials(shape, degree, config.size_cap)?;
    let ranks = max_over_trials(config.trials, |t| {
        let points = sample_points(
            shape,
            s,
            config.field,
            &mut trial_rng(config.seed, t as u64),
        )?;
        let scheme = FatPointScheme {
            shape: shape.clone(),
            points,
            multiplicity,
        };
        Ok(conditions_matrix_on(&scheme, &monomials, config.field).rank())
    })?;
    Ok(RankResult::from_trials(config.field, config.seed, ranks))
}
