//! The same Hilbert function computed in a single projective space `P^n`.
//!
//! Points of the chart `x_{0,1} ... x_{0,t} != 0` are sent to
//! `(1, x_{1,1}, ..., x_{n_t,t})` in `P^n`, `n = n_1 + ... + n_t`. Forms of
//! multidegree `a` correspond to the degree-`a_1 + ... + a_t` forms spanned by
//! `z_0^{a - s_1 - ... - s_t} M_1 ... M_t` with each `M_i` a monomial of
//! degree `s_i <= a_i` in the factor-`i` variables; this restricted basis is
//! exactly the degree-`a` piece of the ideal of the fat linear spaces
//! `(a - a_i) Pi_i`, so those spaces never need to be built as ideals.

use serde::{Deserialize, Serialize};

use crate::combinat::{factor_monomials, multidegree_dimension, MultiMonomial, Multidegree, Shape};
use crate::config::ComputeConfig;
use crate::error::{Error, Result};
use crate::fatpoints::{
    condition_rows, conditions_matrix, sample_points, FatPointScheme, Multiplicity, PointTuple,
};
use crate::modlinalg::{trial_rng, FpMatrix, PrimeField};

/// Image of a chart-normalized point in `P^n`; `coords[0]` is `z_0 = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProjectedPoint {
    coords: Vec<u64>,
}

impl ProjectedPoint {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

pub fn project_point(pt: &PointTuple) -> ProjectedPoint {
    let coords = std::iter::once(1)
        .chain(pt.blocks().iter().flat_map(|b| b[1..].iter().copied()))
        .collect();
    ProjectedPoint { coords }
}

/// Monomials in `z_0, z_{1,1}, ..., z_{n_t,t}` of total degree `a` whose
/// factor-`i` degree `s_i` is at most `a_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimBasis {
    pub monomials: Vec<Vec<u32>>,
    pub source_degrees: Vec<Vec<u32>>,
}

impl ClaimBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

/// Sends a `P^n` monomial of the claim basis back to the multigraded
/// monomial it came from: `x_{0,i}` gets exponent `a_i - s_i`.
pub fn rehomogenize(shape: &Shape, degree: &Multidegree, z: &[u32]) -> MultiMonomial {
    let mut offset = 1;
    let exponents = shape
        .factors()
        .iter()
        .zip(degree.degrees())
        .map(|(&n, &a)| {
            let tail = &z[offset..offset + n as usize];
            offset += n as usize;
            let s: u32 = tail.iter().sum();
            std::iter::once(a - s).chain(tail.iter().copied()).collect()
        })
        .collect();
    MultiMonomial { exponents }
}

/// Builds the claim basis factor by factor (choose `s_i <= a_i`, then a
/// monomial `M_i` of degree `s_i`), then orders it so that position `k`
/// rehomogenizes to the `k`-th multigraded monomial of
/// [`crate::combinat::enumerate_monomials`].
pub fn claim_basis(shape: &Shape, degree: &Multidegree, size_cap: usize) -> Result<ClaimBasis> {
    degree.check_len(shape)?;
    if !degree.all_positive() {
        return Err(Error::NonPositiveDegree(degree.degrees().to_vec()));
    }
    let count = multidegree_dimension(shape, degree)?;
    if count > size_cap as u64 {
        return Err(Error::SizeCap {
            required: count,
            cap: size_cap,
        });
    }
    let total = degree.total();

    // per factor: every monomial in z_{1,i}..z_{n_i,i} of degree <= a_i
    let per_factor: Vec<Vec<Vec<u32>>> = shape
        .factors()
        .iter()
        .zip(degree.degrees())
        .map(|(&n, &a)| (0..=a).flat_map(|s| factor_monomials(n - 1, s)).collect())
        .collect();

    let mut monomials = Vec::with_capacity(count as usize);
    let mut stack: Vec<&Vec<u32>> = Vec::with_capacity(shape.len());
    fn rec<'a>(
        per_factor: &'a [Vec<Vec<u32>>],
        total: u32,
        stack: &mut Vec<&'a Vec<u32>>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if stack.len() == per_factor.len() {
            let used: u32 = stack.iter().map(|m| m.iter().sum::<u32>()).sum();
            let mut z = vec![total - used];
            z.extend(stack.iter().flat_map(|m| m.iter().copied()));
            out.push(z);
            return;
        }
        for m in &per_factor[stack.len()] {
            stack.push(m);
            rec(per_factor, total, stack, out);
            stack.pop();
        }
    }
    rec(&per_factor, total, &mut stack, &mut monomials);

    // crate column order is descending lex on the flattened multigraded exponents
    let mut keyed: Vec<(Vec<u32>, Vec<u32>)> = monomials
        .into_iter()
        .map(|z| (rehomogenize(shape, degree, &z).flat().collect(), z))
        .collect();
    keyed.sort_by(|a, b| b.0.cmp(&a.0));

    let monomials: Vec<Vec<u32>> = keyed.into_iter().map(|(_, z)| z).collect();
    let source_degrees = monomials.iter().map(|z| source_degrees(shape, z)).collect();
    Ok(ClaimBasis {
        monomials,
        source_degrees,
    })
}

fn source_degrees(shape: &Shape, z: &[u32]) -> Vec<u32> {
    let mut offset = 1;
    shape
        .factors()
        .iter()
        .map(|&n| {
            let s = z[offset..offset + n as usize].iter().sum();
            offset += n as usize;
            s
        })
        .collect()
}

/// Conditions imposed on the claim basis by the projected points: every
/// `z`-partial at each point for 2-fat points, a single evaluation row for
/// simple points.
pub fn reduced_conditions_matrix(
    shape: &Shape,
    degree: &Multidegree,
    points: &[PointTuple],
    multiplicity: Multiplicity,
    field: PrimeField,
    size_cap: usize,
) -> Result<FpMatrix> {
    let basis = claim_basis(shape, degree, size_cap)?;
    Ok(reduced_conditions_matrix_on(
        shape,
        &basis,
        points,
        multiplicity,
        field,
    ))
}

pub(crate) fn reduced_conditions_matrix_on(
    shape: &Shape,
    basis: &ClaimBasis,
    points: &[PointTuple],
    multiplicity: Multiplicity,
    field: PrimeField,
) -> FpMatrix {
    condition_rows(
        field,
        points.iter().map(|p| project_point(p).coords),
        shape.total_dim() as usize + 1,
        &basis.monomials,
        |z: &Vec<u32>| z.clone(),
        multiplicity,
    )
}

/// Outcome of running both routes on one shared point set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceCheck {
    pub agree: bool,
    pub direct_rank: usize,
    pub reduced_rank: usize,
}

/// Samples one point set from `config.seed` and ranks both the multigraded
/// and the reduced condition matrix on it. Disagreement is reported, not
/// resolved.
pub fn check_reduction_equivalence(
    shape: &Shape,
    degree: &Multidegree,
    s: usize,
    multiplicity: Multiplicity,
    config: &ComputeConfig,
) -> Result<EquivalenceCheck> {
    let points = sample_points(shape, s, config.field, &mut trial_rng(config.seed, 0))?;
    let scheme = FatPointScheme::new(shape.clone(), points, multiplicity)?;
    let direct_rank = conditions_matrix(&scheme, degree, config.field, config.size_cap)?.rank();
    let reduced_rank = reduced_conditions_matrix(
        shape,
        degree,
        &scheme.points,
        multiplicity,
        config.field,
        config.size_cap,
    )?
    .rank();
    Ok(EquivalenceCheck {
        agree: direct_rank == reduced_rank,
        direct_rank,
        reduced_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{enumerate_monomials, DEFAULT_SIZE_CAP};
    use proptest::prelude::*;

    fn f() -> PrimeField {
        PrimeField::default()
    }

    fn shape(v: &[u32]) -> Shape {
        Shape::new(v.to_vec()).unwrap()
    }

    fn deg(v: &[u32]) -> Multidegree {
        Multidegree::new(v.to_vec())
    }

    #[test]
    fn projection_examples() {
        let sh = shape(&[1, 1]);
        let p = PointTuple::new(&sh, vec![vec![1, 4], vec![1, 9]], f()).unwrap();
        assert_eq!(project_point(&p).coords(), &[1, 4, 9]);
        let sh = shape(&[2, 1]);
        let p = PointTuple::new(&sh, vec![vec![1, 2, 3], vec![1, 5]], f()).unwrap();
        assert_eq!(project_point(&p).coords(), &[1, 2, 3, 5]);
        let p = PointTuple::new(&sh, vec![vec![1, 1, 1], vec![1, 1]], f()).unwrap();
        assert_eq!(project_point(&p).coords(), &[1, 1, 1, 1]);
    }

    #[test]
    fn bilinear_claim_basis() {
        let b = claim_basis(&shape(&[1, 1]), &deg(&[1, 1]), DEFAULT_SIZE_CAP).unwrap();
        let mut got = b.monomials.clone();
        got.sort();
        // z1 z2, z0 z2, z0 z1, z0^2
        let mut want = vec![vec![2, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]];
        want.sort();
        assert_eq!(got, want);
        // order follows x0y0, x0y1, x1y0, x1y1
        assert_eq!(
            b.monomials,
            vec![vec![2, 0, 0], vec![1, 0, 1], vec![1, 1, 0], vec![0, 1, 1]]
        );
        assert_eq!(
            b.source_degrees,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn claim_basis_single_factor_is_full() {
        let b = claim_basis(&shape(&[1]), &deg(&[5]), DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(b.monomials, factor_monomials(1, 5));
        assert_eq!(
            claim_basis(&shape(&[1, 1]), &deg(&[2, 2]), DEFAULT_SIZE_CAP)
                .unwrap()
                .len(),
            9
        );
    }

    #[test]
    fn claim_basis_rejects_zero_degree() {
        assert!(claim_basis(&shape(&[1, 1]), &deg(&[1, 0]), DEFAULT_SIZE_CAP).is_err());
    }

    #[test]
    fn reduced_biquadric_rank() {
        let sh = shape(&[1, 1]);
        let pts = sample_points(&sh, 3, f(), &mut trial_rng(11, 0)).unwrap();
        let m2 = reduced_conditions_matrix(
            &sh,
            &deg(&[2, 2]),
            &pts,
            Multiplicity::Double,
            f(),
            DEFAULT_SIZE_CAP,
        )
        .unwrap();
        assert_eq!(m2.rank(), 8);
        let m1 = reduced_conditions_matrix(
            &sh,
            &deg(&[2, 2]),
            &pts,
            Multiplicity::Simple,
            f(),
            DEFAULT_SIZE_CAP,
        )
        .unwrap();
        assert_eq!(m1.rank(), 3);
        let m0 = reduced_conditions_matrix(
            &sh,
            &deg(&[2, 2]),
            &[],
            Multiplicity::Double,
            f(),
            DEFAULT_SIZE_CAP,
        )
        .unwrap();
        assert_eq!((m0.rows(), m0.cols(), m0.rank()), (0, 9, 0));
    }

    #[test]
    fn equivalence_examples() {
        let cfg = ComputeConfig::with_seed(21);
        let c = check_reduction_equivalence(
            &shape(&[1, 1]),
            &deg(&[2, 1]),
            2,
            Multiplicity::Double,
            &cfg,
        )
        .unwrap();
        assert!(c.agree);
        let c = check_reduction_equivalence(
            &shape(&[2, 3]),
            &deg(&[1, 2]),
            4,
            Multiplicity::Double,
            &cfg,
        )
        .unwrap();
        assert!(c.agree);
        let c = check_reduction_equivalence(
            &shape(&[1, 1, 1]),
            &deg(&[2, 1, 1]),
            3,
            Multiplicity::Double,
            &cfg,
        )
        .unwrap();
        assert!(c.agree);
        assert_eq!(c.direct_rank, 11);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn claim_basis_matches_multigraded_basis(
            factors in proptest::collection::vec(1u32..4, 1..4),
            degs in proptest::collection::vec(1u32..4, 3),
        ) {
            let sh = shape(&factors);
            let dg = deg(&degs[..factors.len()]);
            let b = claim_basis(&sh, &dg, DEFAULT_SIZE_CAP).unwrap();
            let multi = enumerate_monomials(&sh, &dg, DEFAULT_SIZE_CAP).unwrap();
            prop_assert_eq!(b.len(), multi.len());
            let a = dg.total();
            for (k, z) in b.monomials.iter().enumerate() {
                prop_assert_eq!(z.iter().sum::<u32>(), a);
                let s = &b.source_degrees[k];
                prop_assert!(s.iter().zip(dg.degrees()).all(|(si, ai)| si <= ai));
                prop_assert_eq!(z[0], a - s.iter().sum::<u32>());
                prop_assert_eq!(&rehomogenize(&sh, &dg, z), &multi[k]);
            }
        }

        #[test]
        fn projection_is_injective(seed in any::<u64>(), factors in proptest::collection::vec(1u32..3, 1..4)) {
            let sh = shape(&factors);
            let pts = sample_points(&sh, 12, f(), &mut trial_rng(seed, 0)).unwrap();
            let mut proj: Vec<_> = pts.iter().map(project_point).collect();
            proj.sort_by(|a, b| a.coords.cmp(&b.coords));
            proj.dedup();
            prop_assert_eq!(proj.len(), 12);
        }

        #[test]
        fn both_routes_agree(
            factors in proptest::collection::vec(1u32..3, 1..4),
            degs in proptest::collection::vec(1u32..3, 3),
            s in 0usize..8,
            double in any::<bool>(),
            seed in any::<u64>(),
        ) {
            let sh = shape(&factors);
            let dg = deg(&degs[..factors.len()]);
            let mult = if double { Multiplicity::Double } else { Multiplicity::Simple };
            let c = check_reduction_equivalence(&sh, &dg, s, mult, &ComputeConfig::with_seed(seed)).unwrap();
            prop_assert!(c.agree, "{:?}", c);
        }
    }
}
