//! Fixed-range verification suites for the classification results, the
//! reduction equivalence, the defective families, the Grassmann corollaries
//! and general properties.
//!
//! Ranges are constants of this module. Every case draws its points from a
//! seed derived from the run seed, the suite and the case index, so a report
//! depends only on `(seed, prime, trials, method)` and not on scheduling.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinat::{multidegree_dimension, Multidegree, Shape, VarietySpec, DEFAULT_SIZE_CAP};
use crate::config::ComputeConfig;
use crate::error::{Error, Result};
use crate::fatpoints::{hilbert_function, sample_points, Multiplicity};
use crate::modlinalg::{derive_seed, trial_rng};
use crate::reduction::{check_reduction_equivalence, claim_basis};
use crate::secant::{
    check_low_secant_regularity, classify_p1cubed, classify_p1xp1, grassmann_secant_dimension,
    secant_dimension, validate_split, DefectFamily, FamilyParams,
};
use crate::tensor::embedding_invariants_hold;

/// Largest `a_1` (and `a_2 <= a_1`) for the `P^1 x P^1` classification.
pub const THM21_MAX_DEGREE: u32 = 8;
/// Largest `a_1` (and `a_3 <= a_2 <= a_1`) for the `(P^1)^3` classification.
pub const THM25_MAX_DEGREE: u32 = 4;
pub const THM11_INSTANCES: usize = 50;
/// Column cap for the random equivalence instances.
pub const THM11_MAX_COLUMNS: u64 = 4096;
/// Largest `r` and `k` for the `(k+1, 1)` embedding of `P^r x P^k`.
pub const PROP23_MAX: u32 = 3;
/// Largest factor and degree for the low-secant regularity grid.
pub const PROP32_MAX: u32 = 3;
pub const PROPERTY_MONOTONE_SPECS: usize = 12;
pub const PROPERTY_DEGREE_PAIRS: usize = 20;
pub const PROPERTY_CLAIM_SHAPES: usize = 100;
pub const PROPERTY_TENSOR_POINTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    #[serde(rename = "thm2.1")]
    Thm21,
    #[serde(rename = "thm2.5")]
    Thm25,
    #[serde(rename = "thm1.1")]
    Thm11,
    #[serde(rename = "prop2.3")]
    Prop23,
    #[serde(rename = "sec3")]
    Sec3,
    #[serde(rename = "prop3.2")]
    Prop32,
    #[serde(rename = "grassmann")]
    Grassmann,
    #[serde(rename = "properties")]
    Properties,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Thm21,
        Suite::Thm25,
        Suite::Thm11,
        Suite::Prop23,
        Suite::Sec3,
        Suite::Prop32,
        Suite::Grassmann,
        Suite::Properties,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm21 => "thm2.1",
            Suite::Thm25 => "thm2.5",
            Suite::Thm11 => "thm1.1",
            Suite::Prop23 => "prop2.3",
            Suite::Sec3 => "sec3",
            Suite::Prop32 => "prop3.2",
            Suite::Grassmann => "grassmann",
            Suite::Properties => "properties",
        }
    }

    fn tag(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).unwrap() as u64 + 1
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseResult {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

impl CaseResult {
    fn from_outcome(label: String, outcome: Result<(bool, String)>) -> Self {
        match outcome {
            Ok((pass, detail)) => CaseResult {
                label,
                pass,
                detail,
            },
            Err(e) => CaseResult {
                label,
                pass: false,
                detail: format!("error: {e}"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub prime: u64,
    pub seed: u64,
    pub trials: u32,
    pub cases: Vec<CaseResult>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

pub fn run_suite(suite: Suite, config: &ComputeConfig) -> Result<SuiteReport> {
    if config.trials == 0 {
        return Err(Error::NoTrials);
    }
    let cases = match suite {
        Suite::Thm21 => thm21(config),
        Suite::Thm25 => thm25(config),
        Suite::Thm11 => thm11(config),
        Suite::Prop23 => prop23(config),
        Suite::Sec3 => sec3(config),
        Suite::Prop32 => prop32(config),
        Suite::Grassmann => grassmann(config),
        Suite::Properties => properties(config),
    };
    let passed = cases.iter().filter(|c| c.pass).count();
    Ok(SuiteReport {
        suite,
        prime: config.field.modulus(),
        seed: config.seed,
        trials: config.trials,
        failed: cases.len() - passed,
        passed,
        cases,
    })
}

/// Runs `f` on every case with its own derived config; output keeps input order.
fn run_cases<P, F>(suite: Suite, config: &ComputeConfig, params: Vec<P>, f: F) -> Vec<CaseResult>
where
    P: Send,
    F: Fn(&P, &ComputeConfig) -> (String, Result<(bool, String)>) + Sync,
{
    params
        .into_par_iter()
        .enumerate()
        .map(|(i, p)| {
            let cfg = config.reseeded(derive_seed(config.seed, &[suite.tag(), i as u64]));
            let (label, outcome) = f(&p, &cfg);
            CaseResult::from_outcome(label, outcome)
        })
        .collect()
}

fn fmt_list(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn thm21(config: &ComputeConfig) -> Vec<CaseResult> {
    let mut params = Vec::new();
    for a1 in 1..=THM21_MAX_DEGREE {
        for a2 in 1..=a1 {
            let n_plus_1 = (a1 + 1) * (a2 + 1);
            for s in 1..=n_plus_1.div_ceil(3) + 1 {
                params.push((a1, a2, s));
            }
        }
    }
    run_cases(Suite::Thm21, config, params, |&(a1, a2, s), cfg| {
        let label = format!("a=({a1},{a2}) s={s}");
        let outcome = (|| {
            let r = secant_dimension(&VarietySpec::from_parts(&[1, 1], &[a1, a2])?, s, cfg)?;
            let p = classify_p1xp1(a1, a2, s)?;
            Ok((
                r.dim_actual == p.dim && r.defect == p.defect,
                format!(
                    "dim {} defect {}; predicted dim {} defect {}",
                    r.dim_actual, r.defect, p.dim, p.defect
                ),
            ))
        })();
        (label, outcome)
    })
}

fn thm25(config: &ComputeConfig) -> Vec<CaseResult> {
    let mut params = Vec::new();
    for a1 in 1..=THM25_MAX_DEGREE {
        for a2 in 1..=a1 {
            for a3 in 1..=a2 {
                let n_plus_1 = (a1 + 1) * (a2 + 1) * (a3 + 1);
                for s in 1..=n_plus_1.div_ceil(4) + 1 {
                    params.push((a1, a2, a3, s));
                }
            }
        }
    }
    run_cases(Suite::Thm25, config, params, |&(a1, a2, a3, s), cfg| {
        let label = format!("a=({a1},{a2},{a3}) s={s}");
        let outcome = (|| {
            let r = secant_dimension(&VarietySpec::from_parts(&[1, 1, 1], &[a1, a2, a3])?, s, cfg)?;
            let p = classify_p1cubed(a1, a2, a3, s)?;
            Ok((
                r.dim_actual == p.dim && r.defect == p.defect,
                format!(
                    "dim {} defect {}; predicted dim {} defect {}",
                    r.dim_actual, r.defect, p.dim, p.defect
                ),
            ))
        })();
        (label, outcome)
    })
}

/// The random instances; multiplicities alternate so both kinds are covered.
pub fn thm11_instances(seed: u64) -> Vec<(Shape, Multidegree, usize, Multiplicity)> {
    let mut rng = trial_rng(derive_seed(seed, &[Suite::Thm11.tag(), u64::MAX]), 0);
    let mut out = Vec::with_capacity(THM11_INSTANCES);
    while out.len() < THM11_INSTANCES {
        let t = rng.gen_range(1..=4usize);
        let factors: Vec<u32> = (0..t).map(|_| rng.gen_range(1..=3)).collect();
        let degrees: Vec<u32> = (0..t).map(|_| rng.gen_range(1..=3)).collect();
        let s = rng.gen_range(1..=8usize);
        let shape = Shape::new(factors).expect("factors are positive");
        let degree = Multidegree::new(degrees);
        match multidegree_dimension(&shape, &degree) {
            Ok(cols) if cols <= THM11_MAX_COLUMNS => {}
            _ => continue,
        }
        let mult = if out.len() % 2 == 0 {
            Multiplicity::Double
        } else {
            Multiplicity::Simple
        };
        out.push((shape, degree, s, mult));
    }
    out
}

fn thm11(config: &ComputeConfig) -> Vec<CaseResult> {
    run_cases(
        Suite::Thm11,
        config,
        thm11_instances(config.seed),
        |(shape, degree, s, mult), cfg| {
            let label = format!(
                "n=({}) a=({}) s={s} mult={}",
                fmt_list(shape.factors()),
                fmt_list(degree.degrees()),
                mult.order()
            );
            let outcome = check_reduction_equivalence(shape, degree, *s, *mult, cfg).map(|e| {
                (
                    e.agree,
                    format!("direct {} reduced {}", e.direct_rank, e.reduced_rank),
                )
            });
            (label, outcome)
        },
    )
}

fn prop23(config: &ComputeConfig) -> Vec<CaseResult> {
    let mut params = Vec::new();
    for r in 1..=PROP23_MAX {
        for k in 1..=PROP23_MAX {
            let smax = crate::combinat::binomial((r + k) as u64, k as u64).unwrap_or(0) as u32 + 1;
            for s in 1..=smax {
                params.push((r, k, s));
            }
        }
    }
    run_cases(Suite::Prop23, config, params, |&(r, k, s), cfg| {
        let label = format!("n=({r},{k}) a=({},1) s={s}", k + 1);
        let outcome = VarietySpec::from_parts(&[r, k], &[k + 1, 1])
            .and_then(|sp| secant_dimension(&sp, s, cfg))
            .map(|rep| {
                (
                    rep.defect == 0,
                    format!("dim {} expected {}", rep.dim_actual, rep.dim_expected),
                )
            });
        (label, outcome)
    })
}

/// Family instances of the defective list over the fixed parameter grid,
/// deduplicated, plus the last family at `m = 4`.
pub fn sec3_instances() -> Vec<crate::secant::DefectiveExample> {
    let mut out: Vec<crate::secant::DefectiveExample> = Vec::new();
    let mut grid = Vec::new();
    for m in 1..=3 {
        for k in 1..=2 {
            for r in 1..=2 {
                grid.push(FamilyParams { m, k, r });
            }
        }
    }
    grid.push(FamilyParams { m: 4, k: 1, r: 1 });
    for family in DefectFamily::ALL {
        let (um, uk, ur) = family.parameters();
        for &p in &grid {
            let key = FamilyParams {
                m: if um { p.m } else { 1 },
                k: if uk { p.k } else { 1 },
                r: if ur { p.r } else { 1 },
            };
            if p.m == 4 && family != DefectFamily::P1P1P1EvenLast {
                continue;
            }
            if out.iter().any(|e| e.family == family && e.params == key) {
                continue;
            }
            if let Ok(e) = family.instantiate(key) {
                out.push(e);
            }
        }
    }
    debug_assert!(DefectFamily::ALL
        .iter()
        .all(|f| out.iter().any(|e| e.family == *f)));
    out
}

fn sec3(config: &ComputeConfig) -> Vec<CaseResult> {
    run_cases(Suite::Sec3, config, sec3_instances(), |e, cfg| {
        let label = format!(
            "{:?} m={} k={} r={}: n=({}) a=({}) s={}",
            e.family,
            e.params.m,
            e.params.k,
            e.params.r,
            fmt_list(e.spec.shape().factors()),
            fmt_list(e.spec.degree().degrees()),
            e.s
        );
        let outcome = (|| {
            let rep = secant_dimension(&e.spec, e.s, cfg)?;
            let mut pass = rep.defect >= 1;
            let mut detail = format!(
                "dim {} expected {} defect {}",
                rep.dim_actual, rep.dim_expected, rep.defect
            );
            if !e.split_expected {
                pass &= rep.dim_actual == 13 && rep.dim_expected == 14;
                detail.push_str("; no splitting expected");
            } else if rep.dim_expected == e.spec.ambient_dim() {
                let cert = validate_split(&e.spec, e.s, &e.b, &e.c, cfg)?;
                pass &= cert.forms_exist();
                detail.push_str(&format!(
                    "; split b=({}) c=({}) dim I_b {} dim I_c {}",
                    fmt_list(e.b.degrees()),
                    fmt_list(e.c.degrees()),
                    cert.dim_ib,
                    cert.dim_ic
                ));
            } else {
                detail.push_str("; expected < N, split not required");
            }
            Ok((pass, detail))
        })();
        (label, outcome)
    })
}

fn prop32(config: &ComputeConfig) -> Vec<CaseResult> {
    let mut params: Vec<(Vec<u32>, Vec<u32>, u32)> = Vec::new();
    for n1 in 1..=PROP32_MAX {
        for n2 in n1..=PROP32_MAX {
            for a1 in 1..=PROP32_MAX {
                for a2 in 1..=PROP32_MAX {
                    if (a1, a2) == (1, 1) {
                        continue;
                    }
                    for s in 1..=n1 + 1 {
                        params.push((vec![n1, n2], vec![a1, a2], s));
                    }
                }
            }
        }
    }
    for s in 1..=2 {
        params.push((vec![1, 2, 2], vec![1, 1, 1], s));
    }
    run_cases(Suite::Prop32, config, params, |(n, a, s), cfg| {
        let label = format!("n=({}) a=({}) s={s}", fmt_list(n), fmt_list(a));
        let outcome = Shape::new(n.clone()).and_then(|sh| {
            check_low_secant_regularity(&sh, &Multidegree::new(a.clone()), *s, cfg)
                .map(|ok| (ok, format!("dim V^s = s(n+1)-1: {ok}")))
        });
        (label, outcome)
    })
}

struct GrassmannCase {
    factors: Vec<u32>,
    degree: Vec<u32>,
    k: u32,
    s: u32,
    defect: u64,
    /// Otherwise `defect` is a lower bound.
    exact: bool,
}

fn grassmann(config: &ComputeConfig) -> Vec<CaseResult> {
    let case = |factors: Vec<u32>, degree: Vec<u32>, k, s, defect, exact| GrassmannCase {
        factors,
        degree,
        k,
        s,
        defect,
        exact,
    };
    let mut params = Vec::new();
    for alpha in 1..=3 {
        params.push(case(
            vec![1, 1],
            vec![2 * alpha, 1],
            1,
            2 * alpha + 1,
            1,
            true,
        ));
    }
    // (k+1)-Veronese of P^2 with k = 2: every s from k+1 until the expected
    // dimension saturates
    let base = VarietySpec::from_parts(&[2], &[3]).expect("valid");
    let cap = 3 * (base.ambient_dim() - 2);
    let mut s = 3;
    loop {
        params.push(case(vec![2], vec![3], 2, s, 0, true));
        let e = crate::combinat::expected_grassmann_dim(base.ambient_dim(), 2, 2, s as u64)
            .unwrap_or(cap);
        if e >= cap {
            break;
        }
        s += 1;
    }
    for m in 2..=3 {
        params.push(case(
            vec![1, 1, 1],
            vec![m, 1, 1],
            2 * m - 1,
            4 * m - 1,
            1,
            false,
        ));
    }
    run_cases(Suite::Grassmann, config, params, |c, cfg| {
        let label = format!(
            "n=({}) a=({}) k={} s={}",
            fmt_list(&c.factors),
            fmt_list(&c.degree),
            c.k,
            c.s
        );
        let outcome = VarietySpec::from_parts(&c.factors, &c.degree)
            .and_then(|sp| grassmann_secant_dimension(&sp, c.k, c.s, cfg))
            .map(|g| {
                let pass = if c.exact {
                    g.defect == c.defect
                } else {
                    g.defect >= c.defect
                };
                (
                    pass,
                    format!(
                        "dim {} expected {} defect {}",
                        g.dim_actual, g.dim_expected, g.defect
                    ),
                )
            });
        (label, outcome)
    })
}

#[derive(Debug, Clone)]
enum PropertyCase {
    Monotone(VarietySpec),
    DegreeMonotone(VarietySpec, Multidegree, u32),
    ClaimBasis(Shape, Multidegree),
    Tensor(VarietySpec),
}

fn random_spec<R: Rng>(
    rng: &mut R,
    max_t: usize,
    max_n: u32,
    max_a: u32,
    max_cols: u64,
) -> VarietySpec {
    loop {
        let t = rng.gen_range(1..=max_t);
        let n: Vec<u32> = (0..t).map(|_| rng.gen_range(1..=max_n)).collect();
        let a: Vec<u32> = (0..t).map(|_| rng.gen_range(1..=max_a)).collect();
        if let Ok(sp) = VarietySpec::from_parts(&n, &a) {
            if sp.ambient_dim() < max_cols {
                return sp;
            }
        }
    }
}

fn property_cases(seed: u64) -> Vec<PropertyCase> {
    let mut rng = trial_rng(derive_seed(seed, &[Suite::Properties.tag(), u64::MAX]), 0);
    let mut out = Vec::new();
    for _ in 0..PROPERTY_MONOTONE_SPECS {
        out.push(PropertyCase::Monotone(random_spec(&mut rng, 3, 2, 3, 120)));
    }
    for _ in 0..PROPERTY_DEGREE_PAIRS {
        let sp = random_spec(&mut rng, 3, 2, 2, 60);
        let n = sp.variety_dim();
        let smax = ((sp.ambient_dim() + 1) / (n as u64 + 1)).max(2) as u32;
        let s = rng.gen_range(2..=smax);
        let b = Multidegree::new(
            sp.degree()
                .degrees()
                .iter()
                .map(|&x| x + rng.gen_range(0..=2))
                .collect(),
        );
        out.push(PropertyCase::DegreeMonotone(sp, b, s));
    }
    for _ in 0..PROPERTY_CLAIM_SHAPES {
        let sp = random_spec(&mut rng, 4, 3, 3, 20_000);
        out.push(PropertyCase::ClaimBasis(
            sp.shape().clone(),
            sp.degree().clone(),
        ));
    }
    for _ in 0..PROPERTY_TENSOR_POINTS {
        let sp = loop {
            let sp = random_spec(&mut rng, 3, 2, 3, 10_000);
            let entries: u64 = sp
                .shape()
                .factors()
                .iter()
                .zip(sp.degree().degrees())
                .map(|(&n, &a)| (n as u64 + 1).pow(a))
                .product();
            if entries <= 10_000 {
                break sp;
            }
        };
        out.push(PropertyCase::Tensor(sp));
    }
    out
}

fn spec_label(sp: &VarietySpec) -> String {
    format!(
        "n=({}) a=({})",
        fmt_list(sp.shape().factors()),
        fmt_list(sp.degree().degrees())
    )
}

fn properties(config: &ComputeConfig) -> Vec<CaseResult> {
    run_cases(
        Suite::Properties,
        config,
        property_cases(config.seed),
        |case, cfg| match case {
            PropertyCase::Monotone(sp) => {
                let label = format!("monotone in s, H bounds: {}", spec_label(sp));
                let outcome = (|| {
                    let n1 = sp.variety_dim() as u64 + 1;
                    let dim_r = sp.ambient_dim() + 1;
                    let smax = dim_r.div_ceil(n1) as u32 + 1;
                    let mut prev = 0u64;
                    let mut dims = Vec::new();
                    let mut ok = true;
                    for s in 1..=smax {
                        let r = secant_dimension(
                            sp,
                            s,
                            &cfg.reseeded(derive_seed(cfg.seed, &[s as u64])),
                        )?;
                        ok &= r.hilbert <= dim_r.min(s as u64 * n1);
                        if s > 1 {
                            ok &= r.dim_actual >= prev && r.dim_actual - prev <= n1;
                        }
                        prev = r.dim_actual;
                        dims.push(r.dim_actual.to_string());
                    }
                    Ok((ok, format!("dims {}", dims.join(","))))
                })();
                (label, outcome)
            }
            PropertyCase::DegreeMonotone(sp, b, s) => {
                let label = format!(
                    "degree monotone: {} -> b=({}) s={s}",
                    spec_label(sp),
                    fmt_list(b.degrees())
                );
                let outcome = (|| {
                    let len = *s as u64 * (sp.variety_dim() as u64 + 1);
                    let ha = hilbert_function(
                        sp.shape(),
                        *s as usize,
                        Multiplicity::Double,
                        sp.degree(),
                        cfg,
                    )?
                    .rank as u64;
                    if ha != len {
                        return Ok((
                            true,
                            format!("hypothesis fails (H(a) = {ha} < {len}); vacuous"),
                        ));
                    }
                    let hb =
                        hilbert_function(sp.shape(), *s as usize, Multiplicity::Double, b, cfg)?
                            .rank as u64;
                    Ok((hb == len, format!("H(a) = {ha}, H(b) = {hb}, length {len}")))
                })();
                (label, outcome)
            }
            PropertyCase::ClaimBasis(sh, a) => {
                let label = format!(
                    "claim basis size: n=({}) a=({})",
                    fmt_list(sh.factors()),
                    fmt_list(a.degrees())
                );
                let outcome = (|| {
                    let got = claim_basis(sh, a, DEFAULT_SIZE_CAP)?.len() as u64;
                    let want = multidegree_dimension(sh, a)?;
                    Ok((got == want, format!("{got} vs {want}")))
                })();
                (label, outcome)
            }
            PropertyCase::Tensor(sp) => {
                let label = format!("tensor invariants: {}", spec_label(sp));
                let outcome = (|| {
                    let pt = sample_points(sp.shape(), 1, cfg.field, &mut trial_rng(cfg.seed, 0))?
                        .remove(0);
                    let ok = embedding_invariants_hold(&pt, sp, cfg.field, DEFAULT_SIZE_CAP)?;
                    Ok((ok, format!("invariants hold: {ok}")))
                })();
                (label, outcome)
            }
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(
                serde_json::to_string(&s).unwrap(),
                format!("\"{}\"", s.name())
            );
        }
        assert!("thm9".parse::<Suite>().is_err());
    }

    #[test]
    fn sec3_covers_every_family() {
        let inst = sec3_instances();
        for f in DefectFamily::ALL {
            assert!(inst.iter().any(|e| e.family == f), "{f:?}");
        }
        let anomalous: Vec<_> = inst.iter().filter(|e| !e.split_expected).collect();
        assert_eq!(anomalous.len(), 1);
        assert_eq!(anomalous[0].spec.shape().factors(), &[1, 1, 1, 1]);
        assert_eq!(anomalous[0].s, 3);
    }

    #[test]
    fn thm11_instances_are_deterministic_and_capped() {
        let a = thm11_instances(5);
        assert_eq!(a, thm11_instances(5));
        assert_eq!(a.len(), THM11_INSTANCES);
        assert!(a.iter().any(|x| x.3 == Multiplicity::Simple));
        assert!(a.iter().all(|(sh, d, s, _)| {
            multidegree_dimension(sh, d).unwrap() <= THM11_MAX_COLUMNS && (1..=8).contains(s)
        }));
    }
}
