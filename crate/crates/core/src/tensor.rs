//! Points of Segre-Veronese varieties as decomposable partially symmetric
//! tensors.
//!
//! A tensor for shape `n` and degree `a` has `a_1 + ... + a_t` axes: the first
//! `a_1` of size `n_1 + 1`, the next `a_2` of size `n_2 + 1`, and so on.
//! Entries are stored densely, symmetric positions included.

use serde::{Deserialize, Serialize};

use crate::combinat::{enumerate_monomials, MultiMonomial, Multidegree, Shape, VarietySpec};
use crate::error::{Error, Result};
use crate::fatpoints::PointTuple;
use crate::modlinalg::{FpMatrix, PrimeField};

/// Upper bound on stored tensor entries.
pub const TENSOR_ENTRY_CAP: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialSymTensor {
    shape: Shape,
    degree: Multidegree,
    field: PrimeField,
    entries: Vec<u64>,
}

impl PartialSymTensor {
    pub fn zeros(shape: &Shape, degree: &Multidegree, field: PrimeField) -> Result<Self> {
        degree.check_len(shape)?;
        let size = axis_dims(shape, degree)
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&n| n <= TENSOR_ENTRY_CAP)
            .ok_or_else(|| Error::InvalidTensor(format!("more than {TENSOR_ENTRY_CAP} entries")))?;
        Ok(PartialSymTensor {
            shape: shape.clone(),
            degree: degree.clone(),
            field,
            entries: vec![0; size],
        })
    }

    /// Dense row-major entries, reduced mod `p`.
    pub fn from_entries(
        shape: &Shape,
        degree: &Multidegree,
        field: PrimeField,
        entries: Vec<u64>,
    ) -> Result<Self> {
        let mut t = Self::zeros(shape, degree, field)?;
        if entries.len() != t.entries.len() {
            return Err(Error::InvalidTensor(format!(
                "expected {} entries, got {}",
                t.entries.len(),
                entries.len()
            )));
        }
        t.entries = entries.into_iter().map(|x| field.reduce(x)).collect();
        Ok(t)
    }

    pub fn axis_dims(&self) -> Vec<usize> {
        axis_dims(&self.shape, &self.degree)
    }

    pub fn num_axes(&self) -> usize {
        self.degree.total() as usize
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    fn offset(&self, idx: &[usize]) -> usize {
        let dims = self.axis_dims();
        idx.iter().zip(&dims).fold(0, |acc, (&i, &d)| {
            debug_assert!(i < d);
            acc * d + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> u64 {
        self.entries[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: u64) {
        let o = self.offset(idx);
        self.entries[o] = self.field.reduce(value);
    }

    pub fn add(&self, other: &PartialSymTensor) -> Result<PartialSymTensor> {
        if self.shape != other.shape || self.degree != other.degree || self.field != other.field {
            return Err(Error::InvalidTensor(
                "adding tensors of different formats".into(),
            ));
        }
        let f = self.field;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&x, &y)| f.add(x, y))
            .collect();
        Ok(PartialSymTensor {
            entries,
            ..self.clone()
        })
    }

    /// The monomial whose per-factor exponents count how often each index
    /// value occurs in that factor's block of `idx`.
    pub fn content_monomial(&self, idx: &[usize]) -> MultiMonomial {
        let mut pos = 0;
        let exponents = self
            .shape
            .factors()
            .iter()
            .zip(self.degree.degrees())
            .map(|(&n, &a)| {
                let mut e = vec![0u32; n as usize + 1];
                for &j in &idx[pos..pos + a as usize] {
                    e[j] += 1;
                }
                pos += a as usize;
                e
            })
            .collect();
        MultiMonomial { exponents }
    }

    /// Block `i` occupies axes `ranges[i]`.
    fn block_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.degree
            .degrees()
            .iter()
            .map(|&a| {
                let r = start..start + a as usize;
                start += a as usize;
                r
            })
            .collect()
    }
}

fn axis_dims(shape: &Shape, degree: &Multidegree) -> Vec<usize> {
    shape
        .factors()
        .iter()
        .zip(degree.degrees())
        .flat_map(|(&n, &a)| std::iter::repeat_n(n as usize + 1, a as usize))
        .collect()
}

/// Calls `f(index, flat_offset)` for every multi-index in row-major order.
fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize], usize)) {
    if dims.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; dims.len()];
    let mut flat = 0;
    loop {
        f(&idx, flat);
        flat += 1;
        let mut ax = dims.len();
        loop {
            if ax == 0 {
                return;
            }
            ax -= 1;
            idx[ax] += 1;
            if idx[ax] < dims[ax] {
                break;
            }
            idx[ax] = 0;
        }
    }
}

/// `v_1^{(x) a_1} (x) ... (x) v_t^{(x) a_t}`.
pub fn rank1_tensor(
    vectors: &[Vec<u64>],
    shape: &Shape,
    degree: &Multidegree,
    field: PrimeField,
) -> Result<PartialSymTensor> {
    if vectors.len() != shape.len() {
        return Err(Error::LengthMismatch {
            expected: shape.len(),
            got: vectors.len(),
        });
    }
    for (v, &n) in vectors.iter().zip(shape.factors()) {
        if v.len() != n as usize + 1 {
            return Err(Error::InvalidTensor(format!(
                "vector of length {} for a P^{n} factor",
                v.len()
            )));
        }
        if v.iter().all(|&x| field.reduce(x) == 0) {
            return Err(Error::InvalidTensor("zero vector".into()));
        }
    }
    let mut t = PartialSymTensor::zeros(shape, degree, field)?;
    let axis_vec: Vec<&Vec<u64>> = vectors
        .iter()
        .zip(degree.degrees())
        .flat_map(|(v, &a)| std::iter::repeat_n(v, a as usize))
        .collect();
    let dims = t.axis_dims();
    for_each_index(&dims, |idx, flat| {
        t.entries[flat] = idx
            .iter()
            .zip(&axis_vec)
            .fold(1, |acc, (&j, v)| field.mul(acc, field.reduce(v[j])));
    });
    Ok(t)
}

/// Invariance under every adjacent transposition inside each block, which
/// generate the product of the block symmetric groups.
pub fn is_partially_symmetric(t: &PartialSymTensor) -> bool {
    let dims = t.axis_dims();
    let ranges = t.block_ranges();
    let mut ok = true;
    let mut swapped = vec![0usize; dims.len()];
    for_each_index(&dims, |idx, flat| {
        if !ok {
            return;
        }
        for r in &ranges {
            for ax in r.start..r.end.saturating_sub(1) {
                if idx[ax] == idx[ax + 1] {
                    continue;
                }
                swapped.copy_from_slice(idx);
                swapped.swap(ax, ax + 1);
                if t.get(&swapped) != t.entries[flat] {
                    ok = false;
                    return;
                }
            }
        }
    });
    ok
}

/// The Segre-Veronese image of `pt`: its monomial coordinates in the crate
/// column order, and the corresponding rank-one tensor. Every tensor entry
/// equals the coordinate of its [`PartialSymTensor::content_monomial`].
pub fn embed_point(
    pt: &PointTuple,
    spec: &VarietySpec,
    field: PrimeField,
    size_cap: usize,
) -> Result<(Vec<u64>, PartialSymTensor)> {
    let monomials = enumerate_monomials(spec.shape(), spec.degree(), size_cap)?;
    let x: Vec<u64> = pt.flat().collect();
    let coords = monomials
        .iter()
        .map(|m| {
            m.flat()
                .zip(&x)
                .fold(1, |acc, (e, &xi)| field.mul(acc, field.pow(xi, e as u64)))
        })
        .collect();
    let tensor = rank1_tensor(pt.blocks(), spec.shape(), spec.degree(), field)?;
    Ok((coords, tensor))
}

/// Invariants of [`embed_point`] at `pt`:
/// - the tensor is partially symmetric
/// - every single-axis flattening has rank one
/// - each entry is the coordinate of its content monomial
pub fn embedding_invariants_hold(
    pt: &PointTuple,
    spec: &VarietySpec,
    field: PrimeField,
    size_cap: usize,
) -> Result<bool> {
    let (coords, t) = embed_point(pt, spec, field, size_cap)?;
    if !is_partially_symmetric(&t) {
        return Ok(false);
    }
    if t.num_axes() > 1 {
        for ax in 0..t.num_axes() {
            if flattening_rank(&t, &[ax])? != 1 {
                return Ok(false);
            }
        }
    }
    let monomials = enumerate_monomials(spec.shape(), spec.degree(), size_cap)?;
    let position: std::collections::HashMap<Vec<u32>, usize> = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.flat().collect(), i))
        .collect();
    let mut ok = true;
    for_each_index(&t.axis_dims(), |idx, flat| {
        let key: Vec<u32> = t.content_monomial(idx).flat().collect();
        ok &= position
            .get(&key)
            .is_some_and(|&i| coords[i] == t.entries[flat]);
    });
    Ok(ok)
}

/// Rank of the flattening with `row_axes` indexing rows and the remaining
/// axes indexing columns.
pub fn flattening_rank(t: &PartialSymTensor, row_axes: &[usize]) -> Result<usize> {
    let k = t.num_axes();
    let mut is_row = vec![false; k];
    for &ax in row_axes {
        if ax >= k || is_row[ax] {
            return Err(Error::InvalidTensor(format!("bad row axis {ax}")));
        }
        is_row[ax] = true;
    }
    if row_axes.is_empty() || row_axes.len() == k {
        return Err(Error::InvalidTensor(
            "row axes must be a nonempty proper subset".into(),
        ));
    }
    let dims = t.axis_dims();
    let (rows, cols) =
        dims.iter().zip(&is_row).fold(
            (1, 1),
            |(r, c), (&d, &row)| {
                if row {
                    (r * d, c)
                } else {
                    (r, c * d)
                }
            },
        );
    let mut m = vec![0u64; rows * cols];
    for_each_index(&dims, |idx, flat| {
        let (mut r, mut c) = (0, 0);
        for ax in 0..k {
            if is_row[ax] {
                r = r * dims[ax] + idx[ax];
            } else {
                c = c * dims[ax] + idx[ax];
            }
        }
        m[r * cols + c] = t.entries[flat];
    });
    Ok(FpMatrix::from_raw(t.field, rows, cols, m).rank())
}

/// Rank of the span of the tangent directions of the rank-one tensors at
/// `points`, i.e. the derivatives of `v_1^{(x) a_1} (x) ...` along every
/// coordinate of every `v_i`. This is the affine tangent space of the
/// secant variety computed in tensor space, so it should equal `dim V^s + 1`.
pub fn tangent_span_rank(
    points: &[PointTuple],
    spec: &VarietySpec,
    field: PrimeField,
) -> Result<usize> {
    let template = PartialSymTensor::zeros(spec.shape(), spec.degree(), field)?;
    let dims = template.axis_dims();
    let ranges = template.block_ranges();
    let size = template.len();
    let mut rows: Vec<u64> = Vec::new();
    let mut nrows = 0;
    for pt in points {
        let axis_vec: Vec<&Vec<u64>> = pt
            .blocks()
            .iter()
            .zip(spec.degree().degrees())
            .flat_map(|(v, &a)| std::iter::repeat_n(v, a as usize))
            .collect();
        for (i, range) in ranges.iter().enumerate() {
            for j in 0..=spec.shape().factors()[i] as usize {
                let start = rows.len();
                rows.resize(start + size, 0);
                for_each_index(&dims, |idx, flat| {
                    // product rule over the a_i axes of block i
                    let mut total = 0;
                    for ax in range.clone() {
                        if idx[ax] != j {
                            continue;
                        }
                        let term = (0..idx.len())
                            .filter(|&o| o != ax)
                            .fold(1, |acc, o| field.mul(acc, axis_vec[o][idx[o]]));
                        total = field.add(total, term);
                    }
                    rows[start + flat] = total;
                });
                nrows += 1;
            }
        }
    }
    Ok(FpMatrix::from_raw(field, nrows, size, rows).rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::DEFAULT_SIZE_CAP;
    use crate::fatpoints::sample_points;
    use crate::modlinalg::trial_rng;
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
    fn rank1_examples() {
        let t = rank1_tensor(&[vec![1, 0]], &shape(&[1]), &deg(&[2]), f()).unwrap();
        assert_eq!(t.entries(), &[1, 0, 0, 0]);
        let t = rank1_tensor(
            &[vec![1, 2], vec![1, 3]],
            &shape(&[1, 1]),
            &deg(&[1, 1]),
            f(),
        )
        .unwrap();
        assert_eq!(t.entries(), &[1, 3, 2, 6]);
        assert!(is_partially_symmetric(&t));
        assert!(rank1_tensor(&[vec![0, 0]], &shape(&[1]), &deg(&[2]), f()).is_err());
    }

    #[test]
    fn asymmetry_detected() {
        let sh = shape(&[1, 1]);
        let dg = deg(&[2, 1]);
        let mut t = PartialSymTensor::zeros(&sh, &dg, f()).unwrap();
        assert!(is_partially_symmetric(&t));
        t.set(&[0, 1, 0], 5);
        assert!(!is_partially_symmetric(&t));
        t.set(&[1, 0, 0], 5);
        assert!(is_partially_symmetric(&t));
        // the third axis is its own block: no symmetry with the others
        t.set(&[0, 0, 1], 7);
        assert!(is_partially_symmetric(&t));
    }

    #[test]
    fn embedding_coordinates() {
        let sh = shape(&[1, 1]);
        let sp = VarietySpec::new(sh.clone(), deg(&[2, 1])).unwrap();
        let (al, be) = (3, 7);
        let pt = PointTuple::new(&sh, vec![vec![1, al], vec![1, be]], f()).unwrap();
        let (coords, t) = embed_point(&pt, &sp, f(), DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(coords, vec![1, be, al, al * be, al * al, al * al * be]);
        assert_eq!(t.get(&[0, 1, 1]), al * be);
        assert_eq!(t.get(&[1, 0, 1]), al * be);

        let sh = shape(&[1]);
        let sp = VarietySpec::new(sh.clone(), deg(&[2])).unwrap();
        let pt = PointTuple::new(&sh, vec![vec![1, 10]], f()).unwrap();
        assert_eq!(
            embed_point(&pt, &sp, f(), DEFAULT_SIZE_CAP).unwrap().0,
            vec![1, 10, 100]
        );
    }

    #[test]
    fn flattening_examples() {
        let sh = shape(&[2, 1]);
        let dg = deg(&[2, 2]);
        let sp = VarietySpec::new(sh.clone(), dg.clone()).unwrap();
        let pts = sample_points(&sh, 2, f(), &mut trial_rng(3, 0)).unwrap();
        let t0 = embed_point(&pts[0], &sp, f(), DEFAULT_SIZE_CAP).unwrap().1;
        let t1 = embed_point(&pts[1], &sp, f(), DEFAULT_SIZE_CAP).unwrap().1;
        for split in [&[0][..], &[0, 1], &[0, 2], &[1, 3], &[0, 1, 2]] {
            assert_eq!(flattening_rank(&t0, split).unwrap(), 1);
        }
        let sum = t0.add(&t1).unwrap();
        assert!(is_partially_symmetric(&sum));
        assert_eq!(flattening_rank(&sum, &[0, 2]).unwrap(), 2);
        assert_eq!(flattening_rank(&sum, &[0, 1]).unwrap(), 2);
        let z = PartialSymTensor::zeros(&sh, &dg, f()).unwrap();
        assert_eq!(flattening_rank(&z, &[1]).unwrap(), 0);
        assert!(flattening_rank(&z, &[]).is_err());
        assert!(flattening_rank(&z, &[0, 1, 2, 3]).is_err());
        assert!(flattening_rank(&z, &[4]).is_err());
        assert!(flattening_rank(&z, &[1, 1]).is_err());
    }

    #[test]
    fn two_term_sum_by_brute_force() {
        // explicit 2x2 flattening of (1,2)(x)(1,3) + (1,5)(x)(1,1)
        let sh = shape(&[1, 1]);
        let dg = deg(&[1, 1]);
        let a = rank1_tensor(&[vec![1, 2], vec![1, 3]], &sh, &dg, f()).unwrap();
        let b = rank1_tensor(&[vec![1, 5], vec![1, 1]], &sh, &dg, f()).unwrap();
        let s = a.add(&b).unwrap();
        // [[2, 4], [7, 11]]: det = 22 - 28 != 0
        assert_eq!(s.entries(), &[2, 4, 7, 11]);
        assert_eq!(flattening_rank(&s, &[0]).unwrap(), 2);
    }

    #[test]
    fn tangent_span_matches_secant_rank() {
        use crate::config::ComputeConfig;
        use crate::secant::secant_hilbert;
        for (fa, a) in [
            (vec![1, 1], vec![2, 2]),
            (vec![1, 1], vec![2, 1]),
            (vec![1, 2], vec![1, 2]),
        ] {
            let sp = VarietySpec::from_parts(&fa, &a).unwrap();
            for s in 1..=3u32 {
                let cfg = ComputeConfig {
                    trials: 1,
                    ..ComputeConfig::with_seed(s as u64)
                };
                let pts = sample_points(sp.shape(), s as usize, f(), &mut trial_rng(cfg.seed, 0))
                    .unwrap();
                let h = secant_hilbert(&sp, s, &cfg).unwrap()[0];
                assert_eq!(
                    tangent_span_rank(&pts, &sp, f()).unwrap(),
                    h,
                    "{fa:?} {a:?} s={s}"
                );
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn embedded_points_satisfy_invariants(
            seed in any::<u64>(),
            factors in proptest::collection::vec(1u32..3, 1..4),
            degs in proptest::collection::vec(1u32..3, 3),
        ) {
            let sh = shape(&factors);
            let sp = VarietySpec::new(sh.clone(), deg(&degs[..factors.len()])).unwrap();
            let pt = &sample_points(&sh, 1, f(), &mut trial_rng(seed, 0)).unwrap()[0];
            prop_assert!(embedding_invariants_hold(pt, &sp, f(), DEFAULT_SIZE_CAP).unwrap());
        }

        #[test]
        fn flattening_rank_of_sum_is_subadditive(seed in any::<u64>(), s in 1usize..4) {
            let sh = shape(&[2, 2]);
            let sp = VarietySpec::new(sh.clone(), deg(&[2, 1])).unwrap();
            let pts = sample_points(&sh, s, f(), &mut trial_rng(seed, 0)).unwrap();
            let mut acc = PartialSymTensor::zeros(sp.shape(), sp.degree(), f()).unwrap();
            for p in &pts {
                acc = acc.add(&embed_point(p, &sp, f(), DEFAULT_SIZE_CAP).unwrap().1).unwrap();
            }
            prop_assert!(is_partially_symmetric(&acc));
            // 3x9 flattening: generic sums of s <= 3 terms have full rank s
            prop_assert_eq!(flattening_rank(&acc, &[2]).unwrap(), s);
            prop_assert!(flattening_rank(&acc, &[0]).unwrap() <= s);
        }
    }
}
