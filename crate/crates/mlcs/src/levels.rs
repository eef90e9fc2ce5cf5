//! Dyadic level bookkeeping for Haar coefficient vectors.
//!
//! A coefficient vector of length `n = 2^r` splits into `r` levels that
//! mirror the wavelet scales. With boundaries `M_0 = 0` and `M_j = 2^j`
//! (`j = 1..=r`), level `j` holds the entries with 1-based indices
//! `M_j + 1 ..= M_{j+1}` (0-based: `[2^j, 2^{j+1})` for `j >= 1`, and
//! `[0, 2)` for level 0, which stores the scaling coefficient next to the
//! coarsest wavelet coefficient). Levels are indexed `0..r`.
//!
//! On top of the partition this module provides the sparsity-in-levels
//! model: per-level sparsity budgets `k_j`, the projection onto the model
//! set (per-level hard thresholding), the l1 distance `sigma_km` to the
//! model set, and seeded generation of structured test signals.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::ops::Range;

use crate::error::{Error, Result};

/// Dyadic level layout of a coefficient vector of length `n = 2^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelStructure {
    r: usize,
    n: usize,
}

impl LevelStructure {
    /// Layout with `r >= 1` levels for vectors of length `2^r`.
    pub fn new(r: usize) -> Result<Self> {
        if r == 0 || r >= usize::BITS as usize {
            return Err(Error::InvalidParameter(format!(
                "level count r = {r} outside 1..{}",
                usize::BITS
            )));
        }
        Ok(Self { r, n: 1 << r })
    }

    /// Layout for vectors of length `n`; `n` must be a power of two, `n >= 2`.
    pub fn from_len(n: usize) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        Self::new(n.trailing_zeros() as usize)
    }

    /// Number of levels `r`.
    pub fn num_levels(&self) -> usize {
        self.r
    }

    /// Vector length `n = 2^r`.
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; a level structure has at least two entries.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Boundary `M_j` (`M_0 = 0`, `M_j = 2^j` for `j = 1..=r`).
    pub fn boundary(&self, j: usize) -> usize {
        assert!(j <= self.r, "boundary index {j} > r = {}", self.r);
        if j == 0 {
            0
        } else {
            1 << j
        }
    }

    /// Boundaries `M_0..=M_r` as a vector of length `r + 1`.
    pub fn boundaries(&self) -> Vec<usize> {
        (0..=self.r).map(|j| self.boundary(j)).collect()
    }

    /// 0-based index range occupied by level `j` (`0 <= j < r`).
    pub fn level_range(&self, j: usize) -> Result<Range<usize>> {
        if j >= self.r {
            return Err(Error::IndexOutOfRange {
                what: "level",
                value: j as i64,
                lo: 0,
                hi: self.r as i64 - 1,
            });
        }
        Ok(self.boundary(j)..self.boundary(j + 1))
    }

    /// Number of entries in level `j`: 2 for level 0, `2^j` otherwise.
    pub fn level_size(&self, j: usize) -> usize {
        if j == 0 {
            2
        } else {
            1 << j
        }
    }
}

/// Per-level sparsity budgets `k_0..k_{r-1}`.
///
/// Each `k_j` may not exceed the size of level `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityPattern {
    k: Vec<usize>,
}

impl SparsityPattern {
    pub fn new(k: Vec<usize>) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::InvalidParameter(
                "sparsity pattern must have at least one level".into(),
            ));
        }
        for (j, &kj) in k.iter().enumerate() {
            let size = if j == 0 { 2 } else { 1 << j };
            if kj > size {
                return Err(Error::InvalidParameter(format!(
                    "k_{j} = {kj} exceeds level size {size}"
                )));
            }
        }
        Ok(Self { k })
    }

    /// Number of levels the pattern describes.
    pub fn num_levels(&self) -> usize {
        self.k.len()
    }

    /// Budget for level `j`.
    pub fn level(&self, j: usize) -> usize {
        self.k[j]
    }

    /// All budgets.
    pub fn as_slice(&self) -> &[usize] {
        &self.k
    }

    /// Total sparsity `k_0 + ... + k_{r-1}`.
    pub fn total(&self) -> usize {
        self.k.iter().sum()
    }

    /// Errors unless the pattern has exactly `levels.num_levels()` entries.
    pub fn check_levels(&self, levels: &LevelStructure) -> Result<()> {
        if self.k.len() != levels.num_levels() {
            return Err(Error::SizeMismatch {
                what: "sparsity pattern levels",
                left: self.k.len(),
                right: levels.num_levels(),
            });
        }
        Ok(())
    }
}

/// A complex coefficient vector of length `2^r` together with its level layout.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    values: Vec<Complex64>,
    levels: LevelStructure,
}

impl CoefficientVector {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        let levels = LevelStructure::from_len(values.len())?;
        Ok(Self { values, levels })
    }

    pub fn zeros(levels: LevelStructure) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); levels.len()],
            levels,
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn levels(&self) -> &LevelStructure {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Entries of level `j`, i.e. the segment `[M_j, M_{j+1})` in 0-based terms.
    pub fn level_slice(&self, j: usize) -> Result<&[Complex64]> {
        let range = self.levels.level_range(j)?;
        Ok(&self.values[range])
    }

    /// l1 norm of the vector.
    pub fn norm_l1(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum()
    }

    /// l2 norm of the vector.
    pub fn norm_l2(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Per-level counts of entries with magnitude above `tol`.
    pub fn level_support_counts(&self, tol: f64) -> Vec<usize> {
        (0..self.levels.num_levels())
            .map(|j| {
                self.level_slice(j)
                    .expect("level in range")
                    .iter()
                    .filter(|v| v.norm() > tol)
                    .count()
            })
            .collect()
    }
}

/// Distribution of the nonzero values drawn by [`random_sparse_in_levels`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MagnitudeLaw {
    /// Unit-modulus complex values with uniform phase. Makes exact-recovery
    /// experiments scale-free.
    #[default]
    UnitModulus,
    /// Standard complex Gaussian (independent real and imaginary parts).
    ComplexGaussian,
}

/// Keeps the `k_j` largest-magnitude entries of each level and zeroes the rest.
///
/// This is the best approximation of `c` within the sparsity-in-levels model:
/// the l1 objective decouples across levels and coordinates, so per-level hard
/// thresholding attains the minimum. Magnitude ties are broken towards the
/// lower index so the result is deterministic.
pub fn project_sparse_in_levels(
    c: &CoefficientVector,
    k: &SparsityPattern,
) -> Result<CoefficientVector> {
    k.check_levels(c.levels())?;
    let mut out = CoefficientVector::zeros(*c.levels());
    for j in 0..k.num_levels() {
        let range = c.levels().level_range(j)?;
        let slice = &c.values()[range.clone()];
        let keep = k.level(j).min(slice.len());
        let mut order: Vec<usize> = (0..slice.len()).collect();
        order.sort_by(|&a, &b| {
            slice[b]
                .norm()
                .total_cmp(&slice[a].norm())
                .then(a.cmp(&b))
        });
        for &idx in order.iter().take(keep) {
            out.values_mut()[range.start + idx] = slice[idx];
        }
    }
    Ok(out)
}

/// l1 distance from `c` to the sparsity-in-levels model set:
/// the sum of the magnitudes dropped by [`project_sparse_in_levels`].
pub fn sigma_km(c: &CoefficientVector, k: &SparsityPattern) -> Result<f64> {
    let projected = project_sparse_in_levels(c, k)?;
    Ok(c.values()
        .iter()
        .zip(projected.values())
        .map(|(a, b)| (a - b).norm())
        .sum())
}

/// Draws a coefficient vector with exactly `k_j` nonzeros in level `j`.
///
/// Supports are uniform without replacement within each level; nonzero values
/// follow `law`. Both draws are deterministic functions of `seed`.
pub fn random_sparse_in_levels(
    levels: &LevelStructure,
    k: &SparsityPattern,
    seed: u64,
    law: MagnitudeLaw,
) -> Result<CoefficientVector> {
    k.check_levels(levels)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CoefficientVector::zeros(*levels);
    for j in 0..k.num_levels() {
        let range = levels.level_range(j)?;
        let size = range.len();
        let mut positions: Vec<usize> = (0..size).collect();
        // Partial Fisher-Yates: the first k_j slots end up a uniform draw
        // without replacement.
        for i in 0..k.level(j).min(size) {
            let pick = i + (rng.random_range(0..(size - i) as u64) as usize);
            positions.swap(i, pick);
        }
        for &pos in positions.iter().take(k.level(j)) {
            let value = match law {
                MagnitudeLaw::UnitModulus => {
                    let phase: f64 = rng.random_range(0.0..TAU);
                    Complex64::from_polar(1.0, phase)
                }
                MagnitudeLaw::ComplexGaussian => {
                    let re: f64 = rng.sample(rand_distr::StandardNormal);
                    let im: f64 = rng.sample(rand_distr::StandardNormal);
                    Complex64::new(re, im)
                }
            };
            out.values_mut()[range.start + pos] = value;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cvec(values: &[f64]) -> CoefficientVector {
        CoefficientVector::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
            .expect("power-of-two length")
    }

    #[test]
    fn boundaries_follow_dyadic_rule() {
        let levels = LevelStructure::new(3).unwrap();
        assert_eq!(levels.boundaries(), vec![0, 2, 4, 8]);
        assert_eq!(levels.level_range(0).unwrap(), 0..2);
        assert_eq!(levels.level_range(1).unwrap(), 2..4);
        assert_eq!(levels.level_range(2).unwrap(), 4..8);
        assert!(levels.level_range(3).is_err());
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(LevelStructure::from_len(0).is_err());
        assert!(LevelStructure::from_len(1).is_err());
        assert!(LevelStructure::from_len(6).is_err());
        assert!(CoefficientVector::new(vec![Complex64::new(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn level_slices() {
        // r = 3: level 0 -> (c_1, c_2), level 2 -> (c_5..c_8) in 1-based terms.
        let c = cvec(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        assert_eq!(
            c.level_slice(0).unwrap(),
            &[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]
        );
        assert_eq!(c.level_slice(2).unwrap().len(), 4);
        assert_eq!(c.level_slice(2).unwrap()[0], Complex64::new(5.0, 0.0));
        assert!(c.level_slice(3).is_err());

        // r = 1: single level covering the whole vector.
        let c = cvec(&[1.0, 2.0]);
        assert_eq!(c.level_slice(0).unwrap().len(), 2);
    }

    #[test]
    fn concatenating_slices_reproduces_vector() {
        let c = cvec(&[1.0, -2.0, 3.0, 0.5, -0.25, 4.0, 0.0, 9.0]);
        let mut joined = Vec::new();
        for j in 0..c.levels().num_levels() {
            joined.extend_from_slice(c.level_slice(j).unwrap());
        }
        assert_eq!(joined, c.values());
    }

    #[test]
    fn projection_keeps_per_level_largest() {
        let c = cvec(&[3.0, 1.0, 2.0, 5.0]);
        let k = SparsityPattern::new(vec![1, 1]).unwrap();
        let p = project_sparse_in_levels(&c, &k).unwrap();
        assert_eq!(
            p.values(),
            &[
                Complex64::new(3.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(5.0, 0.0)
            ]
        );
        assert_eq!(sigma_km(&c, &k).unwrap(), 3.0);
    }

    #[test]
    fn projection_with_full_budgets_is_identity() {
        let c = cvec(&[3.0, 1.0, 2.0, 5.0, 1.0, 0.0, -1.0, 2.0]);
        let k = SparsityPattern::new(vec![2, 2, 4]).unwrap();
        let p = project_sparse_in_levels(&c, &k).unwrap();
        assert_eq!(p.values(), c.values());
        assert_eq!(sigma_km(&c, &k).unwrap(), 0.0);
    }

    #[test]
    fn projection_ties_break_to_lower_index() {
        let c = cvec(&[2.0, 2.0, -2.0, 2.0]);
        let k = SparsityPattern::new(vec![1, 1]).unwrap();
        let p = project_sparse_in_levels(&c, &k).unwrap();
        // Both levels tie in magnitude; index 0 of each level wins.
        assert_eq!(p.values()[0], Complex64::new(2.0, 0.0));
        assert_eq!(p.values()[1], Complex64::new(0.0, 0.0));
        assert_eq!(p.values()[2], Complex64::new(-2.0, 0.0));
        assert_eq!(p.values()[3], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn pattern_rejects_oversized_budget() {
        assert!(SparsityPattern::new(vec![3, 1]).is_err());
        assert!(SparsityPattern::new(vec![2, 3]).is_err());
        assert!(SparsityPattern::new(vec![2, 2, 4]).is_ok());
    }

    #[test]
    fn random_sparse_hits_requested_supports() {
        let levels = LevelStructure::new(2).unwrap();
        let k = SparsityPattern::new(vec![2, 1]).unwrap();
        let c = random_sparse_in_levels(&levels, &k, 11, MagnitudeLaw::UnitModulus).unwrap();
        assert_eq!(c.level_support_counts(0.0), vec![2, 1]);
        // Level 0 fully dense, exactly one nonzero among indices 3..4 (1-based).
        assert!(c.values()[0].norm() > 0.0 && c.values()[1].norm() > 0.0);

        let zero = SparsityPattern::new(vec![0, 0]).unwrap();
        let z = random_sparse_in_levels(&levels, &zero, 5, MagnitudeLaw::UnitModulus).unwrap();
        assert!(z.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn random_sparse_is_seed_deterministic() {
        let levels = LevelStructure::new(4).unwrap();
        let k = SparsityPattern::new(vec![1, 2, 3, 4]).unwrap();
        let a = random_sparse_in_levels(&levels, &k, 42, MagnitudeLaw::UnitModulus).unwrap();
        let b = random_sparse_in_levels(&levels, &k, 42, MagnitudeLaw::UnitModulus).unwrap();
        let c = random_sparse_in_levels(&levels, &k, 43, MagnitudeLaw::UnitModulus).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        for v in a.values().iter().filter(|v| v.norm() > 0.0) {
            assert!((v.norm() - 1.0).abs() < 1e-15);
        }
    }
}
