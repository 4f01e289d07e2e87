//! Weakness sequences `tau = {t_k}`, the sparse family supported on a
//! subsequence, and diagnostics for the series criteria that govern
//! convergence of the weak algorithms.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Strictly increasing sequence of positive integers, used as the support
/// of sparse weakness sequences and as the subsequence in the block
/// criterion diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub enum IndexSequence {
    /// `n_k = base^k`, `base >= 2`.
    Geometric { base: u64 },
    /// `n_k = k^degree`, `degree >= 1`.
    Polynomial { degree: u32 },
    /// Explicit strictly increasing list.
    Explicit(Vec<u64>),
}

impl IndexSequence {
    pub fn geometric(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidParameter {
                what: "geometric index base must be >= 2",
            });
        }
        Ok(IndexSequence::Geometric { base })
    }

    pub fn polynomial(degree: u32) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidParameter {
                what: "polynomial index degree must be >= 1",
            });
        }
        Ok(IndexSequence::Polynomial { degree })
    }

    pub fn explicit(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if values[0] == 0 || values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter {
                what: "index list must be strictly increasing and positive",
            });
        }
        Ok(IndexSequence::Explicit(values))
    }

    /// `n_k` for `k >= 1`; `None` past the end of an explicit list or on
    /// integer overflow.
    pub fn nth(&self, k: usize) -> Option<u64> {
        if k == 0 {
            return None;
        }
        match self {
            IndexSequence::Geometric { base } => {
                let mut n: u64 = 1;
                for _ in 0..k {
                    n = n.checked_mul(*base)?;
                }
                Some(n)
            }
            IndexSequence::Polynomial { degree } => {
                let mut n: u64 = 1;
                let k = u64::try_from(k).ok()?;
                for _ in 0..*degree {
                    n = n.checked_mul(k)?;
                }
                Some(n)
            }
            IndexSequence::Explicit(v) => v.get(k - 1).copied(),
        }
    }

    /// Whether `n` belongs to the sequence.
    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        match self {
            IndexSequence::Geometric { base } => {
                let mut m = n;
                if m == 1 {
                    return false; // indices start at base^1
                }
                while m % base == 0 {
                    m /= base;
                }
                m == 1
            }
            IndexSequence::Polynomial { degree } => {
                if *degree == 1 {
                    return true;
                }
                let root = (n as f64).powf(1.0 / f64::from(*degree)).round() as u64;
                for r in root.saturating_sub(1)..=root + 1 {
                    if let Some(p) = checked_pow(r, *degree) {
                        if p == n {
                            return true;
                        }
                    }
                }
                false
            }
            IndexSequence::Explicit(v) => v.binary_search(&n).is_ok(),
        }
    }
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut out: u64 = 1;
    for _ in 0..exp {
        out = out.checked_mul(base)?;
    }
    Some(out)
}

/// Per-iteration relaxation factors `t_k` in `[0, 1]` for the weak greedy
/// step.
#[derive(Debug, Clone, PartialEq)]
pub enum WeaknessSequence {
    /// `t_k = t`.
    Constant { t: f64 },
    /// `t_k = k^(-theta)`, `theta >= 0`.
    Power { theta: f64 },
    /// `t_n = t` for `n` in the index sequence, `0` otherwise.
    Sparse { indices: IndexSequence, t: f64 },
    /// Finite explicit list; queries past the end are an error.
    Explicit { values: Vec<f64> },
}

impl WeaknessSequence {
    pub fn constant(t: f64) -> Result<Self> {
        check_unit_interval(t)?;
        Ok(WeaknessSequence::Constant { t })
    }

    pub fn power(theta: f64) -> Result<Self> {
        if !(theta >= 0.0 && theta.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "power weakness exponent must be finite and >= 0",
            });
        }
        Ok(WeaknessSequence::Power { theta })
    }

    pub fn sparse(indices: IndexSequence, t: f64) -> Result<Self> {
        check_unit_interval(t)?;
        if t == 0.0 {
            return Err(Error::InvalidParameter {
                what: "sparse weakness value must be in (0, 1]",
            });
        }
        Ok(WeaknessSequence::Sparse { indices, t })
    }

    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        for &v in &values {
            check_unit_interval(v)?;
        }
        Ok(WeaknessSequence::Explicit { values })
    }

    /// `t_k` for `k >= 1`.
    pub fn t_at(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Err(Error::InvalidParameter {
                what: "weakness sequence index starts at 1",
            });
        }
        match self {
            WeaknessSequence::Constant { t } => Ok(*t),
            WeaknessSequence::Power { theta } => Ok((k as f64).powf(-theta)),
            WeaknessSequence::Sparse { indices, t } => {
                Ok(if indices.contains(k as u64) { *t } else { 0.0 })
            }
            WeaknessSequence::Explicit { values } => {
                values.get(k - 1).copied().ok_or(Error::SequenceExhausted {
                    k,
                    len: values.len(),
                })
            }
        }
    }

    /// `t_1 ..= t_m` collected.
    pub fn values(&self, m: usize) -> Result<Vec<f64>> {
        (1..=m).map(|k| self.t_at(k)).collect()
    }

    /// True when `t_1 >= t_2 >= ... >= t_m`.
    pub fn is_nonincreasing(&self, m: usize) -> Result<bool> {
        match self {
            WeaknessSequence::Constant { .. } => Ok(true),
            WeaknessSequence::Power { .. } => Ok(true),
            _ => {
                let mut prev = f64::INFINITY;
                for k in 1..=m {
                    let t = self.t_at(k)?;
                    if t > prev {
                        return Ok(false);
                    }
                    prev = t;
                }
                Ok(true)
            }
        }
    }

    /// Evaluates the convergence-criterion series up to `horizon` and emits
    /// symbolic verdicts for closed-form families. `subsequence` overrides
    /// the index sequence used by the sparse-subsequence criterion (default:
    /// the sparse family's own support, or every index).
    pub fn diagnose(
        &self,
        subsequence: Option<&IndexSequence>,
        horizon: usize,
    ) -> Result<DiagnosticsReport> {
        if horizon < 16 {
            return Err(Error::InvalidParameter {
                what: "diagnostics horizon must be at least 16",
            });
        }
        let horizon = match self {
            WeaknessSequence::Explicit { values } => horizon.min(values.len()),
            _ => horizon,
        };

        let mut sum_t = 0.0;
        let mut sum_t_sq = 0.0;
        let mut sum_t_over_k = 0.0;
        let mut monotone = true;
        let mut prev = f64::INFINITY;
        for k in 1..=horizon {
            let t = self.t_at(k)?;
            sum_t += t;
            sum_t_sq += t * t;
            sum_t_over_k += t / k as f64;
            if t > prev {
                monotone = false;
            }
            prev = t;
        }

        // Dyadic block sums: sum_s (2^-s * sum_{k in [2^s, 2^{s+1})} t_k^2)^(1/2).
        let mut block_sum = 0.0;
        let mut s = 0u32;
        loop {
            let lo = 1usize << s;
            let hi = (1usize << (s + 1)) - 1;
            if hi > horizon {
                break;
            }
            let mut inner = 0.0;
            for k in lo..=hi {
                let t = self.t_at(k)?;
                inner += t * t;
            }
            block_sum += (inner / lo as f64).sqrt();
            s += 1;
        }

        let default_indices = IndexSequence::Polynomial { degree: 1 };
        let own = match self {
            WeaknessSequence::Sparse { indices, .. } => Some(indices),
            _ => None,
        };
        let indices = subsequence.or(own).unwrap_or(&default_indices);

        // Sparse-subsequence sum: sum_k (n_{k+1} - n_k)^(1/2) t_{n_k} / n_k.
        let mut sparse_sum = 0.0;
        let mut ratio_bound: Option<f64> = None;
        let mut k = 1usize;
        while let (Some(n), Some(n_next)) = (indices.nth(k), indices.nth(k + 1)) {
            if n_next as usize > horizon {
                break;
            }
            let t = self.t_at(n as usize)?;
            sparse_sum += ((n_next - n) as f64).sqrt() * t / n as f64;
            let ratio = n_next as f64 / n as f64;
            ratio_bound = Some(ratio_bound.map_or(ratio, |r: f64| r.max(ratio)));
            k += 1;
        }

        let verdicts = self.classify(subsequence, indices);

        Ok(DiagnosticsReport {
            horizon,
            sum_t,
            sum_t_sq,
            sum_t_over_k,
            block_sum,
            sparse_sum,
            ratio_bound,
            monotone,
            verdicts,
        })
    }

    /// Symbolic verdicts; anything outside the closed-form families is
    /// inconclusive so that no theorem-level claim is ever emitted falsely.
    fn classify(
        &self,
        subsequence: Option<&IndexSequence>,
        indices: &IndexSequence,
    ) -> CriteriaVerdicts {
        use Verdict::*;
        let inconclusive = CriteriaVerdicts {
            sum_t: Inconclusive,
            sum_t_squared: Inconclusive,
            sum_t_over_k: Inconclusive,
            dyadic_blocks: Inconclusive,
            sparse_subsequence: Inconclusive,
        };
        match self {
            WeaknessSequence::Explicit { .. } => inconclusive,
            WeaknessSequence::Constant { t } => {
                if *t == 0.0 {
                    CriteriaVerdicts {
                        sum_t: Converges,
                        sum_t_squared: Converges,
                        sum_t_over_k: Converges,
                        dyadic_blocks: Converges,
                        sparse_subsequence: Converges,
                    }
                } else {
                    CriteriaVerdicts {
                        sum_t: Diverges,
                        sum_t_squared: Diverges,
                        sum_t_over_k: Diverges,
                        dyadic_blocks: Diverges,
                        sparse_subsequence: subsequence_decay_verdict(indices, 0.0),
                    }
                }
            }
            WeaknessSequence::Power { theta } => CriteriaVerdicts {
                sum_t: series_verdict(*theta <= 1.0),
                sum_t_squared: series_verdict(2.0 * *theta <= 1.0),
                sum_t_over_k: series_verdict(*theta <= 0.0),
                dyadic_blocks: series_verdict(*theta <= 0.0),
                sparse_subsequence: subsequence_decay_verdict(indices, *theta),
            },
            WeaknessSequence::Sparse {
                indices: own_indices,
                ..
            } => {
                // Verdicts for a foreign subsequence over a sparse family are
                // not classified symbolically.
                let sparse_subsequence = if subsequence.is_some() && subsequence != Some(own_indices)
                {
                    Inconclusive
                } else {
                    subsequence_decay_verdict(own_indices, 0.0)
                };
                match own_indices {
                    IndexSequence::Explicit(_) => CriteriaVerdicts {
                        // Finite support: every series is a finite sum.
                        sum_t: Converges,
                        sum_t_squared: Converges,
                        sum_t_over_k: Converges,
                        dyadic_blocks: Converges,
                        sparse_subsequence: Converges,
                    },
                    IndexSequence::Geometric { .. } => CriteriaVerdicts {
                        sum_t: Diverges,
                        sum_t_squared: Diverges,
                        sum_t_over_k: Converges,
                        dyadic_blocks: Converges,
                        sparse_subsequence,
                    },
                    IndexSequence::Polynomial { degree } => CriteriaVerdicts {
                        sum_t: Diverges,
                        sum_t_squared: Diverges,
                        sum_t_over_k: series_verdict(*degree <= 1),
                        dyadic_blocks: series_verdict(*degree <= 1),
                        sparse_subsequence,
                    },
                }
            }
        }
    }
}

/// Verdict for `sum (n_{k+1}-n_k)^(1/2) t_{n_k} / n_k` when `t_{n_k}` decays
/// like `n_k^(-theta)` (power family) or is constant (`theta = 0`).
fn subsequence_decay_verdict(indices: &IndexSequence, theta: f64) -> Verdict {
    match indices {
        // Increments ~ d*k^(d-1): terms ~ k^((d-1)/2 - d(1+theta)).
        IndexSequence::Polynomial { degree } => {
            let d = f64::from(*degree);
            series_verdict((d - 1.0) / 2.0 - d * (1.0 + theta) >= -1.0)
        }
        // Terms ~ base^(-k(1/2 + theta)): geometric with ratio < 1.
        IndexSequence::Geometric { .. } => Verdict::Converges,
        IndexSequence::Explicit(_) => Verdict::Inconclusive,
    }
}

fn series_verdict(diverges: bool) -> Verdict {
    if diverges {
        Verdict::Diverges
    } else {
        Verdict::Converges
    }
}

fn check_unit_interval(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) || t.is_nan() {
        return Err(Error::InvalidParameter {
            what: "weakness values must lie in [0, 1]",
        });
    }
    Ok(())
}

/// Whether a criterion's defining series diverges (criterion satisfied),
/// converges (criterion fails), or cannot be decided symbolically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Diverges,
    Converges,
    Inconclusive,
}

/// Symbolic verdicts for the convergence-criterion series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CriteriaVerdicts {
    /// `sum t_k` (thresholding criterion over an orthonormal basis,
    /// restricted to the unit `A1` ball).
    pub sum_t: Verdict,
    /// `sum t_k^2` (orthonormal-basis convergence for the whole space).
    pub sum_t_squared: Verdict,
    /// `sum t_k / k` (all-dictionary convergence; criterion for monotone
    /// sequences).
    pub sum_t_over_k: Verdict,
    /// `sum_s (2^-s sum_{k in s-th dyadic block} t_k^2)^(1/2)`.
    pub dyadic_blocks: Verdict,
    /// `sum_k (n_{k+1}-n_k)^(1/2) t_{n_k} / n_k` over the subsequence.
    pub sparse_subsequence: Verdict,
}

/// Partial sums, the block and subsequence sums, the monotonicity flag and
/// the symbolic verdicts for one weakness sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub horizon: usize,
    pub sum_t: f64,
    pub sum_t_sq: f64,
    pub sum_t_over_k: f64,
    pub block_sum: f64,
    pub sparse_sum: f64,
    /// `sup n_{k+1}/n_k` over the inspected range, when at least two
    /// subsequence entries fall inside the horizon.
    pub ratio_bound: Option<f64>,
    pub monotone: bool,
    pub verdicts: CriteriaVerdicts,
}

/// Cesaro averages `b_n = (1/n) sum_{j<=n} a_j` of a nonnegative sequence,
/// together with the ratio `||b||_2 / ||a||_2` (at most 2 by Hardy's
/// inequality; 0 for the zero sequence).
pub fn hardy_average(a: &[f64]) -> Result<(Vec<f64>, f64)> {
    if a.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::InvalidParameter {
            what: "averaged sequence must be nonnegative and finite",
        });
    }
    let mut partial = 0.0;
    let mut b = Vec::with_capacity(a.len());
    for (i, &x) in a.iter().enumerate() {
        partial += x;
        b.push(partial / (i + 1) as f64);
    }
    let norm_a = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_b = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let ratio = if norm_a == 0.0 { 0.0 } else { norm_b / norm_a };
    Ok((b, ratio))
}

/// Falsifier hook for the general convergence criterion: the minimum over
/// `n` of `(a_n / t_n) * sum_{j<=n} a_j` realized on the horizon of the
/// candidate sequence. Indices with `t_n = 0` contribute only when
/// `a_n = 0`; returns infinity when no index contributes.
pub fn convergence_criterion_proxy(tau: &WeaknessSequence, a: &[f64]) -> Result<f64> {
    if a.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::InvalidParameter {
            what: "candidate sequence must be nonnegative and finite",
        });
    }
    let mut best = f64::INFINITY;
    let mut partial = 0.0;
    for (i, &x) in a.iter().enumerate() {
        partial += x;
        let t = tau.t_at(i + 1)?;
        if t > 0.0 {
            best = best.min(x / t * partial);
        } else if x == 0.0 {
            best = 0.0;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;
    use Verdict::*;

    #[test]
    fn t_at_families() {
        let tau = WeaknessSequence::constant(1.0).unwrap();
        assert_eq!(tau.t_at(7).unwrap(), 1.0);

        let tau = WeaknessSequence::power(0.5).unwrap();
        assert!((tau.t_at(4).unwrap() - 0.5).abs() <= 1e-15);

        let even = IndexSequence::explicit(vec![2, 4, 6, 8]).unwrap();
        let tau = WeaknessSequence::sparse(even, 0.3).unwrap();
        assert_eq!(tau.t_at(3).unwrap(), 0.0);
        assert_eq!(tau.t_at(4).unwrap(), 0.3);

        let tau = WeaknessSequence::explicit(vec![0.9, 0.1]).unwrap();
        assert!(matches!(tau.t_at(3), Err(Error::SequenceExhausted { .. })));
        assert!(tau.t_at(0).is_err());
    }

    #[test]
    fn index_sequences() {
        let geo = IndexSequence::geometric(2).unwrap();
        assert_eq!(geo.nth(3), Some(8));
        assert!(geo.contains(16));
        assert!(!geo.contains(12));
        assert!(!geo.contains(1));

        let sq = IndexSequence::polynomial(2).unwrap();
        assert_eq!(sq.nth(5), Some(25));
        assert!(sq.contains(49));
        assert!(!sq.contains(50));

        assert!(IndexSequence::explicit(vec![3, 3]).is_err());
        assert!(IndexSequence::explicit(vec![0, 2]).is_err());
    }

    #[test]
    fn verdicts_constant() {
        let tau = WeaknessSequence::constant(0.5).unwrap();
        let report = tau.diagnose(None, 1 << 10).unwrap();
        assert!(report.monotone);
        let v = report.verdicts;
        assert_eq!(
            (v.sum_t, v.sum_t_squared, v.sum_t_over_k, v.dyadic_blocks, v.sparse_subsequence),
            (Diverges, Diverges, Diverges, Diverges, Diverges)
        );
    }

    #[test]
    fn verdicts_power() {
        let cases = [
            // theta, sum_t, sum_t^2, sum_t/k, blocks
            (0.25, Diverges, Diverges, Converges, Converges),
            (0.5, Diverges, Diverges, Converges, Converges),
            (1.0, Diverges, Converges, Converges, Converges),
            (2.0, Converges, Converges, Converges, Converges),
        ];
        for (theta, st, st2, stk, blocks) in cases {
            let v = WeaknessSequence::power(theta)
                .unwrap()
                .diagnose(None, 1 << 10)
                .unwrap()
                .verdicts;
            assert_eq!(v.sum_t, st, "theta = {theta}");
            assert_eq!(v.sum_t_squared, st2, "theta = {theta}");
            assert_eq!(v.sum_t_over_k, stk, "theta = {theta}");
            assert_eq!(v.dyadic_blocks, blocks, "theta = {theta}");
        }
    }

    #[test]
    fn verdicts_sparse() {
        let geo = WeaknessSequence::sparse(IndexSequence::geometric(2).unwrap(), 1.0).unwrap();
        let v = geo.diagnose(None, 1 << 12).unwrap().verdicts;
        assert_eq!(v.sum_t, Diverges);
        assert_eq!(v.sparse_subsequence, Converges);
        assert_eq!(v.sum_t_over_k, Converges);

        let squares =
            WeaknessSequence::sparse(IndexSequence::polynomial(2).unwrap(), 1.0).unwrap();
        let v = squares.diagnose(None, 1 << 12).unwrap().verdicts;
        assert_eq!(v.sparse_subsequence, Converges);
        assert_eq!(v.sum_t_over_k, Converges);

        let all = WeaknessSequence::sparse(IndexSequence::polynomial(1).unwrap(), 0.5).unwrap();
        let v = all.diagnose(None, 1 << 12).unwrap().verdicts;
        assert_eq!(v.sparse_subsequence, Diverges);
        assert_eq!(v.sum_t_over_k, Diverges);
    }

    #[test]
    fn sparse_sum_matches_geometric_series() {
        // n_k = 2^k, t = 1: sum_k (2^k)^(1/2) / 2^k = sum 2^(-k/2).
        let tau = WeaknessSequence::sparse(IndexSequence::geometric(2).unwrap(), 1.0).unwrap();
        let report = tau.diagnose(None, 1 << 12).unwrap();
        let mut expected = 0.0;
        let mut k = 1;
        while (1u64 << (k + 1)) as usize <= (1 << 12) {
            expected += 2f64.powf(-(k as f64) / 2.0);
            k += 1;
        }
        assert!((report.sparse_sum - expected).abs() <= 1e-12);
        assert_eq!(report.ratio_bound, Some(2.0));
        assert!(!report.monotone);
    }

    #[test]
    fn explicit_family_is_inconclusive() {
        let tau = WeaknessSequence::explicit(vec![0.5; 64]).unwrap();
        let report = tau.diagnose(None, 1 << 10).unwrap();
        assert_eq!(report.horizon, 64);
        assert_eq!(report.verdicts.sum_t, Inconclusive);
        assert!((report.sum_t - 32.0).abs() <= 1e-12);
    }

    #[test]
    fn hardy_examples() {
        // a = (1, 0, 0, ...): b_n = 1/n.
        let mut a = vec![0.0; 256];
        a[0] = 1.0;
        let (b, ratio) = hardy_average(&a).unwrap();
        for (i, &bn) in b.iter().enumerate() {
            assert!((bn - 1.0 / (i + 1) as f64).abs() <= 1e-15);
        }
        assert!(ratio <= 2.0);

        let a = vec![0.7; 100];
        let (b, ratio) = hardy_average(&a).unwrap();
        assert!(b.iter().all(|&x| (x - 0.7).abs() <= 1e-12));
        assert!((ratio - 1.0).abs() <= 1e-12);

        assert!(hardy_average(&[1.0, -0.5]).is_err());
    }

    proptest! {
        // n * b_n is the partial sum of a nonnegative sequence, hence
        // nondecreasing.
        #[test]
        fn scaled_averages_nondecreasing(a in proptest::collection::vec(0.0f64..5.0, 1..80)) {
            let (b, ratio) = hardy_average(&a).unwrap();
            let mut prev = 0.0;
            for (i, &bn) in b.iter().enumerate() {
                let nbn = (i + 1) as f64 * bn;
                prop_assert!(nbn >= prev - 1e-12);
                prev = nbn;
            }
            prop_assert!(ratio <= 2.0 + 1e-12);
        }

        // Block bound relating averages along a bounded-ratio subsequence to
        // the l2 mass of the averages between consecutive entries.
        #[test]
        fn block_average_inequality(a in proptest::collection::vec(0.0f64..5.0, 64..256)) {
            let (b, _) = hardy_average(&a).unwrap();
            let indices = IndexSequence::geometric(2).unwrap();
            let c0 = 2.0f64;
            let mut k = 1;
            while let (Some(n), Some(n_next)) = (indices.nth(k), indices.nth(k + 1)) {
                let (n, n_next) = (n as usize, n_next as usize);
                if n_next > b.len() {
                    break;
                }
                let lhs = (n_next - n) as f64 * b[n - 1] * b[n - 1];
                let rhs: f64 = (n..n_next).map(|m| b[m - 1] * b[m - 1]).sum();
                prop_assert!(lhs <= c0 * c0 * rhs + 1e-12);
                k += 1;
            }
        }

        #[test]
        fn monotone_flag_matches_pairwise(theta in 0.0f64..3.0) {
            let tau = WeaknessSequence::power(theta).unwrap();
            let report = tau.diagnose(None, 64).unwrap();
            let values = tau.values(64).unwrap();
            let pairwise = values.windows(2).all(|w| w[1] <= w[0]);
            prop_assert_eq!(report.monotone, pairwise);
        }
    }

    #[test]
    fn criterion_proxy() {
        let tau = WeaknessSequence::constant(0.5).unwrap();
        // a = e_1: proxy hits 0 once a_n = 0 at an index with t_n > 0.
        let mut a = vec![0.0; 16];
        a[0] = 1.0;
        assert_eq!(convergence_criterion_proxy(&tau, &a).unwrap(), 0.0);

        let a = vec![1.0; 16];
        // min over n of (1/0.5) * n = 2.
        assert!((convergence_criterion_proxy(&tau, &a).unwrap() - 2.0).abs() <= 1e-12);
    }
}
