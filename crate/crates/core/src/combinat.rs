//! Shapes, multidegrees and the monomial bases of multigraded pieces.
//!
//! Column order for every condition matrix in the crate comes from
//! [`enumerate_monomials`]: inside each factor the monomials of degree `a_i`
//! are listed lexicographically with `x_{0,i} > x_{1,i} > ...` (so `x_0^a`
//! comes first), and the full monomial list is the product of the per-factor
//! lists with the first factor varying slowest.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the number of monomials (matrix columns).
pub const DEFAULT_SIZE_CAP: usize = 200_000;

/// Dimensions `(n_1, ..., n_t)` of the projective factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Shape(Vec<u32>);

impl Shape {
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::InvalidShape(factors));
        }
        Ok(Shape(factors))
    }

    pub fn factors(&self) -> &[u32] {
        &self.0
    }

    /// Number of factors `t`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `n = n_1 + ... + n_t`, the dimension of the product.
    pub fn total_dim(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of homogeneous coordinates, `n + t`.
    pub fn num_variables(&self) -> usize {
        self.0.iter().map(|&n| n as usize + 1).sum()
    }

    /// Shape with one more factor appended.
    pub fn with_factor(&self, n: u32) -> Result<Self> {
        let mut f = self.0.clone();
        f.push(n);
        Shape::new(f)
    }
}

impl TryFrom<Vec<u32>> for Shape {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Shape::new(v)
    }
}

impl From<Shape> for Vec<u32> {
    fn from(s: Shape) -> Vec<u32> {
        s.0
    }
}

/// Degrees `(a_1, ..., a_t)`. Zero entries are allowed here; embeddings go
/// through [`VarietySpec`], which rejects them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(Vec<u32>);

impl Multidegree {
    pub fn new(degrees: Vec<u32>) -> Self {
        Multidegree(degrees)
    }

    pub fn zeros(t: usize) -> Self {
        Multidegree(vec![0; t])
    }

    pub fn degrees(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `a = a_1 + ... + a_t`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn all_positive(&self) -> bool {
        self.0.iter().all(|&a| a >= 1)
    }

    /// Entrywise `self >= other`.
    pub fn dominates(&self, other: &Multidegree) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn check_len(&self, shape: &Shape) -> Result<()> {
        if self.len() != shape.len() {
            return Err(Error::LengthMismatch {
                expected: shape.len(),
                got: self.len(),
            });
        }
        Ok(())
    }

    pub fn with_degree(&self, a: u32) -> Self {
        let mut d = self.0.clone();
        d.push(a);
        Multidegree(d)
    }
}

/// The Segre-Veronese variety `V_{n,a}` given by a shape and a positive
/// multidegree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "VarietySpecRepr", into = "VarietySpecRepr")]
pub struct VarietySpec {
    shape: Shape,
    degree: Multidegree,
    ambient_dim: u64,
}

#[derive(Serialize, Deserialize)]
struct VarietySpecRepr {
    factors: Vec<u32>,
    degree: Vec<u32>,
    #[serde(rename = "n")]
    variety_dim: u32,
    #[serde(rename = "N")]
    ambient_dim: u64,
}

impl TryFrom<VarietySpecRepr> for VarietySpec {
    type Error = Error;
    fn try_from(r: VarietySpecRepr) -> Result<Self> {
        let spec = VarietySpec::new(Shape::new(r.factors)?, Multidegree::new(r.degree))?;
        if spec.variety_dim() != r.variety_dim || spec.ambient_dim() != r.ambient_dim {
            return Err(Error::Precondition(
                "serialized n/N do not match shape and degree".into(),
            ));
        }
        Ok(spec)
    }
}

impl From<VarietySpec> for VarietySpecRepr {
    fn from(v: VarietySpec) -> Self {
        VarietySpecRepr {
            variety_dim: v.variety_dim(),
            ambient_dim: v.ambient_dim,
            factors: v.shape.0,
            degree: v.degree.0,
        }
    }
}

impl VarietySpec {
    pub fn new(shape: Shape, degree: Multidegree) -> Result<Self> {
        degree.check_len(&shape)?;
        if !degree.all_positive() {
            return Err(Error::NonPositiveDegree(degree.0));
        }
        let ambient_dim = multidegree_dimension(&shape, &degree)? - 1;
        Ok(VarietySpec {
            shape,
            degree,
            ambient_dim,
        })
    }

    /// Convenience constructor from raw vectors.
    pub fn from_parts(factors: &[u32], degree: &[u32]) -> Result<Self> {
        VarietySpec::new(
            Shape::new(factors.to_vec())?,
            Multidegree::new(degree.to_vec()),
        )
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn degree(&self) -> &Multidegree {
        &self.degree
    }

    /// `n`, the dimension of the variety.
    pub fn variety_dim(&self) -> u32 {
        self.shape.total_dim()
    }

    /// `N`, the dimension of the ambient projective space.
    pub fn ambient_dim(&self) -> u64 {
        self.ambient_dim
    }

    pub fn expected_secant_dim(&self, s: u64) -> u64 {
        expected_secant_dim(self.ambient_dim, self.variety_dim() as u64, s)
    }
}

/// One monomial of a multigraded piece: per factor, the exponents of
/// `x_{0,i}, ..., x_{n_i,i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiMonomial {
    pub exponents: Vec<Vec<u32>>,
}

impl MultiMonomial {
    /// Per-factor degrees.
    pub fn multidegree(&self) -> Multidegree {
        Multidegree(self.exponents.iter().map(|r| r.iter().sum()).collect())
    }

    /// Exponents flattened in variable order `x_{0,1}, ..., x_{n_t,t}`.
    pub fn flat(&self) -> impl Iterator<Item = u32> + '_ {
        self.exponents.iter().flatten().copied()
    }
}

/// Binomial coefficient with overflow detection.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc * (n as u128 - k as u128 + i) / i;
        if acc > u64::MAX as u128 {
            return Err(Error::Overflow("binomial coefficient"));
        }
    }
    Ok(acc as u64)
}

/// `dim R_a = prod C(n_i + a_i, n_i)`.
pub fn multidegree_dimension(shape: &Shape, degree: &Multidegree) -> Result<u64> {
    degree.check_len(shape)?;
    shape
        .factors()
        .iter()
        .zip(degree.degrees())
        .try_fold(1u64, |acc, (&n, &a)| {
            let c = binomial(n as u64 + a as u64, n as u64)?;
            acc.checked_mul(c)
                .ok_or(Error::Overflow("multidegree dimension"))
        })
}

/// Exponent vectors of length `n + 1` summing to `d`, in descending lex order.
pub fn factor_monomials(n: u32, d: u32) -> Vec<Vec<u32>> {
    fn rec(slots: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(slots - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(
        n as usize + 1,
        d,
        &mut Vec::with_capacity(n as usize + 1),
        &mut out,
    );
    out
}

/// All monomials of multidegree `degree`, in the crate-wide column order.
/// Fails with [`Error::SizeCap`] when there are more than `cap` of them.
pub fn enumerate_monomials(
    shape: &Shape,
    degree: &Multidegree,
    cap: usize,
) -> Result<Vec<MultiMonomial>> {
    let count = multidegree_dimension(shape, degree)?;
    if count > cap as u64 {
        return Err(Error::SizeCap {
            required: count,
            cap,
        });
    }
    let per_factor: Vec<Vec<Vec<u32>>> = shape
        .factors()
        .iter()
        .zip(degree.degrees())
        .map(|(&n, &a)| factor_monomials(n, a))
        .collect();

    let mut out = Vec::with_capacity(count as usize);
    let t = per_factor.len();
    let mut idx = vec![0usize; t];
    loop {
        out.push(MultiMonomial {
            exponents: idx
                .iter()
                .zip(&per_factor)
                .map(|(&j, list)| list[j].clone())
                .collect(),
        });
        // odometer, last factor fastest
        let mut f = t;
        loop {
            if f == 0 {
                debug_assert_eq!(out.len() as u64, count);
                return Ok(out);
            }
            f -= 1;
            idx[f] += 1;
            if idx[f] < per_factor[f].len() {
                break;
            }
            idx[f] = 0;
        }
    }
}

/// `min{N, s n + s - 1}`.
pub fn expected_secant_dim(ambient: u64, n: u64, s: u64) -> u64 {
    let naive = s.saturating_mul(n + 1).saturating_sub(1);
    ambient.min(naive)
}

/// `min{s n + (k+1)(s-k-1), (k+1)(N-k)}` for the Grassmann secant of
/// `k`-planes in spans of `s` points.
pub fn expected_grassmann_dim(ambient: u64, n: u64, k: u64, s: u64) -> Result<u64> {
    if s < k + 1 {
        return Err(Error::TooFewPoints {
            k: k as u32,
            s: s as u32,
        });
    }
    if k > ambient {
        return Err(Error::Precondition(format!(
            "no {k}-planes inside P^{ambient}"
        )));
    }
    let spans = s
        .checked_mul(n)
        .and_then(|x| x.checked_add((k + 1) * (s - k - 1)))
        .ok_or(Error::Overflow("grassmann expected dimension"))?;
    let grass = (k + 1)
        .checked_mul(ambient - k)
        .ok_or(Error::Overflow("grassmann expected dimension"))?;
    Ok(spans.min(grass))
}
