//! Secant and Grassmann secant dimensions, defects and splitting
//! certificates, plus closed-form classifications for `P^1 x P^1` and
//! `P^1 x P^1 x P^1` and the list of known defective families.

use serde::{Deserialize, Serialize};

use crate::combinat::{
    enumerate_monomials, expected_grassmann_dim, multidegree_dimension, Multidegree, Shape,
    VarietySpec,
};
use crate::config::{ComputeConfig, Method};
use crate::error::{Error, Result};
use crate::fatpoints::{
    conditions_matrix_on, hilbert_function, sample_points, FatPointScheme, Multiplicity,
};
use crate::modlinalg::{derive_seed, max_over_trials, trial_rng};
use crate::reduction::{claim_basis, reduced_conditions_matrix_on};

pub const CAVEAT: &str = "dimension is a max-over-trials rank over F_p at random points, hence a \
lower bound that equals the generic value with overwhelming probability; a defect is an upper \
bound unless backed by a certificate or a known classification";

const CERTIFICATE_TAG: u64 = 0xce47;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub prime: u64,
    pub seed: u64,
    pub trials: u32,
    pub per_trial_ranks: Vec<usize>,
    pub caveat: String,
}

/// `a = b + c` together with the dimensions of the degree-`b` and degree-`c`
/// forms through `s` generic simple points. When both are positive, the
/// product of two such forms vanishes doubly at every point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCertificate {
    pub b: Multidegree,
    pub c: Multidegree,
    pub dim_ib: u64,
    pub dim_ic: u64,
    /// True when the expected dimension is `N`, so the extra form really
    /// proves the secant variety is defective.
    pub proves_defect: bool,
}

impl SplitCertificate {
    pub fn forms_exist(&self) -> bool {
        self.dim_ib >= 1 && self.dim_ic >= 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecantReport {
    pub spec: VarietySpec,
    pub s: u32,
    pub hilbert: u64,
    pub dim_actual: u64,
    pub dim_expected: u64,
    pub defect: u64,
    pub method: Method,
    pub certificate: Option<SplitCertificate>,
    pub metadata: ReportMetadata,
}

impl SecantReport {
    pub fn is_defective(&self) -> bool {
        self.defect > 0
    }

    /// A certificate that both exists and proves defectivity.
    pub fn certified(&self) -> bool {
        self.certificate
            .as_ref()
            .is_some_and(|c| c.forms_exist() && c.proves_defect)
    }
}

/// `H(Z, a)` for `s` generic 2-fat points by the configured method(s).
/// With [`Method::Both`] the two routes run on the same points in every trial
/// and any disagreement is an error.
pub fn secant_hilbert(spec: &VarietySpec, s: u32, config: &ComputeConfig) -> Result<Vec<usize>> {
    let shape = spec.shape();
    let degree = spec.degree();
    let monomials = match config.method {
        Method::Direct | Method::Both => Some(enumerate_monomials(shape, degree, config.size_cap)?),
        Method::Reduced => None,
    };
    let basis = match config.method {
        Method::Reduced | Method::Both => Some(claim_basis(shape, degree, config.size_cap)?),
        Method::Direct => None,
    };
    max_over_trials(config.trials, |t| {
        let points = sample_points(
            shape,
            s as usize,
            config.field,
            &mut trial_rng(config.seed, t as u64),
        )?;
        let direct = monomials.as_ref().map(|m| {
            let scheme = FatPointScheme {
                shape: shape.clone(),
                points: points.clone(),
                multiplicity: Multiplicity::Double,
            };
            conditions_matrix_on(&scheme, m, config.field).rank()
        });
        let reduced = basis.as_ref().map(|b| {
            reduced_conditions_matrix_on(shape, b, &points, Multiplicity::Double, config.field)
                .rank()
        });
        match (direct, reduced) {
            (Some(d), Some(r)) if d != r => Err(Error::MethodDisagreement {
                direct: d,
                reduced: r,
                trial: t,
            }),
            (Some(d), _) => Ok(d),
            (None, Some(r)) => Ok(r),
            (None, None) => unreachable!(),
        }
    })
}

pub fn secant_dimension(
    spec: &VarietySpec,
    s: u32,
    config: &ComputeConfig,
) -> Result<SecantReport> {
    if s == 0 {
        return Err(Error::Precondition("s must be >= 1".into()));
    }
    let per_trial_ranks = secant_hilbert(spec, s, config)?;
    let hilbert = *per_trial_ranks.iter().max().expect("at least one trial") as u64;
    let dim_actual = hilbert - 1;
    let dim_expected = spec.expected_secant_dim(s as u64);
    debug_assert!(dim_actual <= dim_expected);
    let defect = dim_expected.saturating_sub(dim_actual);
    let certificate = if defect > 0 {
        let cfg = config.reseeded(derive_seed(config.seed, &[CERTIFICATE_TAG]));
        find_split_certificate(spec, s, &cfg)?
    } else {
        None
    };
    Ok(SecantReport {
        spec: spec.clone(),
        s,
        hilbert,
        dim_actual,
        dim_expected,
        defect,
        method: config.method,
        certificate,
        metadata: ReportMetadata {
            prime: config.field.modulus(),
            seed: config.seed,
            trials: per_trial_ranks.len() as u32,
            per_trial_ranks,
            caveat: CAVEAT.to_string(),
        },
    })
}

/// `dim (I_Y)_d` for `s` generic simple points `Y`, by rank.
pub fn simple_point_ideal_dim(
    shape: &Shape,
    degree: &Multidegree,
    s: u32,
    config: &ComputeConfig,
) -> Result<u64> {
    let cfg = config.reseeded(derive_seed(
        config.seed,
        degree
            .degrees()
            .iter()
            .map(|&d| d as u64)
            .collect::<Vec<_>>()
            .as_slice(),
    ));
    let h = hilbert_function(shape, s as usize, Multiplicity::Simple, degree, &cfg)?;
    Ok(multidegree_dimension(shape, degree)? - h.rank as u64)
}

/// Evaluates a given splitting `a = b + c`.
pub fn validate_split(
    spec: &VarietySpec,
    s: u32,
    b: &Multidegree,
    c: &Multidegree,
    config: &ComputeConfig,
) -> Result<SplitCertificate> {
    let a = spec.degree();
    b.check_len(spec.shape())?;
    c.check_len(spec.shape())?;
    if b.degrees()
        .iter()
        .zip(c.degrees())
        .zip(a.degrees())
        .any(|((x, y), z)| x + y != *z)
    {
        return Err(Error::Precondition(format!(
            "{:?} + {:?} != {:?}",
            b.degrees(),
            c.degrees(),
            a.degrees()
        )));
    }
    Ok(SplitCertificate {
        b: b.clone(),
        c: c.clone(),
        dim_ib: simple_point_ideal_dim(spec.shape(), b, s, config)?,
        dim_ic: simple_point_ideal_dim(spec.shape(), c, s, config)?,
        proves_defect: spec.expected_secant_dim(s as u64) == spec.ambient_dim(),
    })
}

/// All `b` with `0 < b < a` entrywise-bounded and `b >= a - b` in lex order,
/// so each unordered splitting appears once; listed in increasing lex order.
pub fn splittings(a: &Multidegree) -> Vec<(Multidegree, Multidegree)> {
    let t = a.len();
    let mut out = Vec::new();
    let mut b = vec![0u32; t];
    loop {
        let c: Vec<u32> = a.degrees().iter().zip(&b).map(|(x, y)| x - y).collect();
        if b.iter().any(|&x| x > 0) && c.iter().any(|&x| x > 0) && b >= c {
            out.push((Multidegree::new(b.clone()), Multidegree::new(c)));
        }
        let mut f = t;
        loop {
            if f == 0 {
                return out;
            }
            f -= 1;
            if b[f] < a.degrees()[f] {
                b[f] += 1;
                break;
            }
            b[f] = 0;
        }
    }
}

/// First splitting `a = b + c` for which forms of both degrees pass through
/// `s` generic simple points. The result is flagged by whether it proves
/// defectivity (`expected dimension = N`).
pub fn find_split_certificate(
    spec: &VarietySpec,
    s: u32,
    config: &ComputeConfig,
) -> Result<Option<SplitCertificate>> {
    let proves_defect = spec.expected_secant_dim(s as u64) == spec.ambient_dim();
    for (b, c) in splittings(spec.degree()) {
        let dim_ib = simple_point_ideal_dim(spec.shape(), &b, s, config)?;
        if dim_ib == 0 {
            continue;
        }
        let dim_ic = simple_point_ideal_dim(spec.shape(), &c, s, config)?;
        if dim_ic == 0 {
            continue;
        }
        return Ok(Some(SplitCertificate {
            b,
            c,
            dim_ib,
            dim_ic,
            proves_defect,
        }));
    }
    Ok(None)
}

/// Grassmann secant of `k`-planes in spans of `s` points, computed through
/// the `s`-th secant of `X x P^k` under its Segre embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrassmannReport {
    pub base_spec: VarietySpec,
    pub k: u32,
    pub s: u32,
    pub product_spec: VarietySpec,
    pub dim_expected: u64,
    pub product_defect: u64,
    pub dim_actual: u64,
    pub defect: u64,
    pub product_report: SecantReport,
}

/// `X x P^k` embedded by degree 1 on the new factor; `X` itself when `k = 0`.
pub fn grassmann_product_spec(base: &VarietySpec, k: u32) -> Result<VarietySpec> {
    if k == 0 {
        return Ok(base.clone());
    }
    VarietySpec::new(base.shape().with_factor(k)?, base.degree().with_degree(1))
}

pub fn grassmann_secant_dimension(
    spec: &VarietySpec,
    k: u32,
    s: u32,
    config: &ComputeConfig,
) -> Result<GrassmannReport> {
    if s < k + 1 {
        return Err(Error::TooFewPoints { k, s });
    }
    let dim_expected = expected_grassmann_dim(
        spec.ambient_dim(),
        spec.variety_dim() as u64,
        k as u64,
        s as u64,
    )?;
    let product_spec = grassmann_product_spec(spec, k)?;
    let product_report = secant_dimension(&product_spec, s, config)?;
    let defect = product_report.defect;
    let dim_actual = dim_expected
        .checked_sub(defect)
        .ok_or_else(|| Error::Precondition("product defect exceeds expected dimension".into()))?;
    Ok(GrassmannReport {
        base_spec: spec.clone(),
        k,
        s,
        product_spec,
        dim_expected,
        product_defect: defect,
        dim_actual,
        defect,
        product_report,
    })
}

/// A predicted `(dim V^s, defect)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub dim: u64,
    pub defect: u64,
}

fn expected_prediction(spec: &VarietySpec, s: u32) -> Prediction {
    Prediction {
        dim: spec.expected_secant_dim(s as u64),
        defect: 0,
    }
}

/// `P^1 x P^1` in bidegree `(a1, a2)`: expected dimension except
/// `(2d, 2)` with `s = 2d + 1`, where the secant variety is one short.
pub fn classify_p1xp1(a1: u32, a2: u32, s: u32) -> Result<Prediction> {
    let (a1, a2) = if a1 >= a2 { (a1, a2) } else { (a2, a1) };
    let spec = VarietySpec::from_parts(&[1, 1], &[a1, a2])?;
    let mut p = expected_prediction(&spec, s);
    if a2 == 2 && a1 % 2 == 0 && s == a1 + 1 {
        p = Prediction {
            dim: 3 * s as u64 - 2,
            defect: 1,
        };
    }
    Ok(p)
}

/// `P^1 x P^1 x P^1` in tridegree `(a1, a2, a3)` as classified in the
/// literature this crate reproduces: defect 2 at `(2,2,2)`, `s = 7`, and
/// defect 1 at `(2α,1,1)`, `s = 2α + 1`. The rank computation disagrees at
/// `(2,2,2)`, `s = 7`, where it finds defect 1.
pub fn classify_p1cubed(a1: u32, a2: u32, a3: u32, s: u32) -> Result<Prediction> {
    let mut a = [a1, a2, a3];
    a.sort_unstable_by(|x, y| y.cmp(x));
    let spec = VarietySpec::from_parts(&[1, 1, 1], &a)?;
    let expected = expected_prediction(&spec, s);
    if a == [2, 2, 2] && s == 7 {
        return Ok(Prediction {
            dim: expected.dim - 2,
            defect: 2,
        });
    }
    if a[0].is_multiple_of(2) && a[1] == 1 && a[2] == 1 && s == a[0] + 1 {
        return Ok(Prediction {
            dim: expected.dim - 1,
            defect: 1,
        });
    }
    Ok(expected)
}

/// Checks that `V^s` has dimension `s (n + 1) - 1` for some `s <= n_1 + 1`
/// (`n_1` the smallest factor), outside the bilinear two-factor case.
pub fn check_low_secant_regularity(
    shape: &Shape,
    degree: &Multidegree,
    s: u32,
    config: &ComputeConfig,
) -> Result<bool> {
    degree.check_len(shape)?;
    let mut pairs: Vec<(u32, u32)> = shape
        .factors()
        .iter()
        .copied()
        .zip(degree.degrees().iter().copied())
        .collect();
    pairs.sort();
    let n1 = pairs[0].0;
    if pairs.len() == 2 && pairs.iter().all(|p| p.1 == 1) {
        return Err(Error::Precondition(
            "two factors in bidegree (1,1) are excluded".into(),
        ));
    }
    if s == 0 || s > n1 + 1 {
        return Err(Error::Precondition(format!(
            "need 1 <= s <= n_1 + 1 = {}",
            n1 + 1
        )));
    }
    let spec = VarietySpec::new(
        Shape::new(pairs.iter().map(|p| p.0).collect())?,
        Multidegree::new(pairs.iter().map(|p| p.1).collect()),
    )?;
    let report = secant_dimension(&spec, s, config)?;
    Ok(report.dim_actual == s as u64 * (spec.variety_dim() as u64 + 1) - 1)
}

/// The defective families, in list order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DefectFamily {
    /// `P^1 x P^m`, `a = (2k, 2)`.
    P1PmEvenTwo,
    /// `P^2 x P^2`, `a = (2, 2)`, `s = 8`.
    P2P2,
    /// `P^1 x P^1 x P^m`, `a = (1, 1, 2)`.
    P1P1PmOneOneTwo,
    /// `P^1 x P^m x P^m`, `a = (2k, 1, 1)`.
    P1PmPmEvenOneOne,
    /// `P^1 x P^r x P^m`, `a = (r + m, 1, 1)`.
    P1PrPm,
    /// `P^1 x P^1 x P^m`, `a = (2, 2, 2)`, `m <= 3`.
    P1P1PmTwoTwoTwo,
    /// `P^2 x P^m x P^m`, `a = (2, 1, 1)`.
    P2PmPm,
    /// `P^1 x P^1 x P^2 x P^5`, `a = (2, 1, 1, 1)`, `s = 11`.
    P1P1P2P5,
    /// `P^1 x P^1 x P^1 x P^{2m-1}`, `a = (m, 1, 1, 1)`.
    P1P1P1OddLast,
    /// `P^1 x P^1 x P^1 x P^{2m}`, `a = (m, 1, 1, 1)`, `m >= 4`.
    P1P1P1EvenLast,
}

impl DefectFamily {
    pub const ALL: [DefectFamily; 10] = [
        DefectFamily::P1PmEvenTwo,
        DefectFamily::P2P2,
        DefectFamily::P1P1PmOneOneTwo,
        DefectFamily::P1PmPmEvenOneOne,
        DefectFamily::P1PrPm,
        DefectFamily::P1P1PmTwoTwoTwo,
        DefectFamily::P2PmPm,
        DefectFamily::P1P1P2P5,
        DefectFamily::P1P1P1OddLast,
        DefectFamily::P1P1P1EvenLast,
    ];

    /// Which of `(m, k, r)` the family depends on.
    pub fn parameters(self) -> (bool, bool, bool) {
        use DefectFamily::*;
        match self {
            P1PmEvenTwo | P1PmPmEvenOneOne => (true, true, false),
            P2P2 | P1P1P2P5 => (false, false, false),
            P1PrPm => (true, false, true),
            _ => (true, false, false),
        }
    }

    pub fn instantiate(self, params: FamilyParams) -> Result<DefectiveExample> {
        use DefectFamily::*;
        let FamilyParams { m, k, r } = params;
        let (uses_m, uses_k, uses_r) = self.parameters();
        if (uses_m && m == 0) || (uses_k && k == 0) || (uses_r && r == 0) {
            return Err(Error::Precondition(format!(
                "{self:?}: parameters must be >= 1"
            )));
        }
        let mut split_expected = true;
        let (shape, a, b, c, s): (Vec<u32>, Vec<u32>, Vec<u32>, Vec<u32>, u32) = match self {
            P1PmEvenTwo => (
                vec![1, m],
                vec![2 * k, 2],
                vec![k, 1],
                vec![k, 1],
                ((2 * k + 1) * (m + 1)).div_ceil(2),
            ),
            P2P2 => (vec![2, 2], vec![2, 2], vec![1, 1], vec![1, 1], 8),
            P1P1PmOneOneTwo => (
                vec![1, 1, m],
                vec![1, 1, 2],
                vec![1, 0, 1],
                vec![0, 1, 1],
                2 * m + 1,
            ),
            P1PmPmEvenOneOne => (
                vec![1, m, m],
                vec![2 * k, 1, 1],
                vec![k, 1, 0],
                vec![k, 0, 1],
                k * m + k + m,
            ),
            // forms of degree m on P^1 times linear forms on P^r, and symmetrically
            P1PrPm => (
                vec![1, r, m],
                vec![r + m, 1, 1],
                vec![m, 1, 0],
                vec![r, 0, 1],
                r * m + r + m,
            ),
            P1P1PmTwoTwoTwo => {
                if m > 3 {
                    return Err(Error::Precondition(format!("{self:?} needs m <= 3")));
                }
                (
                    vec![1, 1, m],
                    vec![2, 2, 2],
                    vec![1, 1, 1],
                    vec![1, 1, 1],
                    4 * m + 3,
                )
            }
            P2PmPm => (
                vec![2, m, m],
                vec![2, 1, 1],
                vec![1, 1, 0],
                vec![1, 0, 1],
                3 * m + 2,
            ),
            P1P1P2P5 => (
                vec![1, 1, 2, 5],
                vec![2, 1, 1, 1],
                vec![1, 1, 1, 0],
                vec![1, 0, 0, 1],
                11,
            ),
            P1P1P1OddLast => {
                // m = 1 is the four-factor Segre case: defective, but not by a splitting
                split_expected = m > 1;
                (
                    vec![1, 1, 1, 2 * m - 1],
                    vec![m, 1, 1, 1],
                    vec![m - 1, 1, 1, 0],
                    vec![1, 0, 0, 1],
                    4 * m - 1,
                )
            }
            P1P1P1EvenLast => {
                if m < 4 {
                    return Err(Error::Precondition(format!("{self:?} needs m >= 4")));
                }
                (
                    vec![1, 1, 1, 2 * m],
                    vec![m, 1, 1, 1],
                    vec![m - 1, 1, 1, 0],
                    vec![1, 0, 0, 1],
                    4 * m - 1,
                )
            }
        };
        Ok(DefectiveExample {
            family: self,
            params,
            spec: VarietySpec::from_parts(&shape, &a)?,
            s,
            b: Multidegree::new(b),
            c: Multidegree::new(c),
            split_expected,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub m: u32,
    pub k: u32,
    pub r: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectiveExample {
    pub family: DefectFamily,
    pub params: FamilyParams,
    pub spec: VarietySpec,
    pub s: u32,
    pub b: Multidegree,
    pub c: Multidegree,
    /// False for the one listed member whose defect does not come from the
    /// splitting.
    pub split_expected: bool,
}

/// Every family instantiated at `params`; families whose range excludes
/// `params` yield an error in their slot.
pub fn defective_example_table(
    params: FamilyParams,
) -> Vec<(DefectFamily, Result<DefectiveExample>)> {
    DefectFamily::ALL
        .iter()
        .map(|&f| (f, f.instantiate(params)))
        .collect()
}
