//! Closed-form phase boundaries, the `(delta, beta)` region map at constant
//! `p`, and the false-positive exponent of the clique estimator.

use serde::{Deserialize, Serialize};

use crate::combinatorics::binom_u64;
use crate::error::{Error, Result};

/// Distance from a dividing curve below which a point is labelled `Boundary`.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Largest `beta` at which the edge-count test still detects: `2(delta + alpha) - 1`.
///
/// Values outside `[0, 1]` mean detection holds for every `beta` (above 1) or
/// for none (below 0).
pub fn detection_boundary(delta: f64, alpha: f64) -> f64 {
    2.0 * (delta + alpha) - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionBoundary {
    /// `(d - 1) / (d + 1)`
    pub delta_star: f64,
    /// `2 delta / (d (d - 1)) + (d - 2) / d`
    pub beta_star: f64,
}

pub fn reconstruction_boundary(d: usize, delta: f64) -> ReconstructionBoundary {
    let df = d as f64;
    ReconstructionBoundary {
        delta_star: (df - 1.0) / (df + 1.0),
        beta_star: 2.0 * delta / (df * (df - 1.0)) + (df - 2.0) / df,
    }
}

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    /// The clique estimator recovers a positive fraction.
    I_Reconstructable,
    /// Reconstruction fails, yet detection against the density-matched null
    /// is still guaranteed.
    II_DetectOnlyMatchedNull,
    /// Only detection against `G(n, q)` is known to work.
    III_DetectSimpleNullOnly,
    Boundary,
}

impl RegionLabel {
    pub fn short(&self) -> &'static str {
        match self {
            RegionLabel::I_Reconstructable => "I",
            RegionLabel::II_DetectOnlyMatchedNull => "II",
            RegionLabel::III_DetectSimpleNullOnly => "III",
            RegionLabel::Boundary => "boundary",
        }
    }
}

/// Region of `(delta, beta)` at constant keep-probability (`alpha = 1`).
///
/// Region I is `delta < delta*` and `beta < beta*(delta)`. Matched-null
/// detection is guaranteed on the square `delta, beta < delta*`; region II is
/// that square minus region I and region III is everything else.
pub fn classify_region(d: usize, delta: f64, beta: f64, alpha: f64) -> Result<RegionLabel> {
    if alpha != 1.0 {
        return Err(Error::UnsupportedRegime(format!(
            "region map is defined for alpha = 1 only, got alpha = {alpha}"
        )));
    }
    if d < 3 {
        return Err(Error::UnsupportedArity(d));
    }
    if !(delta > 0.0 && delta < 1.0 && beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParams(format!(
            "need delta, beta in (0, 1), got delta = {delta}, beta = {beta}"
        )));
    }
    let ds = reconstruction_boundary(d, delta).delta_star;
    let bs = reconstruction_boundary(d, delta).beta_star;
    let near = |x: f64, y: f64| (x - y).abs() <= BOUNDARY_TOL;
    let le = |x: f64, y: f64| x <= y + BOUNDARY_TOL;

    // Region I outline: beta = beta*(delta) for delta <= delta*, and
    // delta = delta* for beta <= beta*(delta*) = delta*.
    // Square outline: delta = delta* or beta = delta*, each within the square.
    let on_curve = (near(beta, bs) && le(delta, ds))
        || (near(delta, ds) && le(beta, ds))
        || (near(beta, ds) && le(delta, ds));
    if on_curve {
        return Ok(RegionLabel::Boundary);
    }
    Ok(if delta < ds && beta < bs {
        RegionLabel::I_Reconstructable
    } else if delta < ds && beta < ds {
        RegionLabel::II_DetectOnlyMatchedNull
    } else {
        RegionLabel::III_DetectSimpleNullOnly
    })
}

/// Minimum of the false-positive weight over subset families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsePositiveExponent {
    pub min_omega: f64,
    /// Sizes of the minimizing family's subsets, ascending. Empty for the
    /// empty family.
    pub argmin_config: Vec<usize>,
    /// `min_omega > d - 1 - delta`
    pub passes: bool,
}

/// `omega(A_1..A_k) = sum(|A| - 1 - delta) + (1 - beta)(C(d,2) - sum C(|A|,2))_+`
/// minimized over families of distinct subsets with `2 <= |A| <= d - 1`.
pub fn false_positive_exponent(d: usize, delta: f64, beta: f64) -> Result<FalsePositiveExponent> {
    false_positive_exponent_with(d, delta, beta, false)
}

/// With `multiset`, each subset may appear up to twice.
///
/// `omega` only sees how many subsets of each size a family has, and every
/// count vector `k_m <= C(d, m)` is realized by some family of distinct
/// subsets, so minimizing over count vectors is exact. Ties keep the family
/// with the fewest subsets that is reached first, which makes the empty family
/// win whenever it is optimal.
pub fn false_positive_exponent_with(
    d: usize,
    delta: f64,
    beta: f64,
    multiset: bool,
) -> Result<FalsePositiveExponent> {
    if !(3..=5).contains(&d) {
        return Err(Error::UnsupportedArity(d));
    }
    let mult = if multiset { 2 } else { 1 };
    let sizes: Vec<usize> = (2..d).collect();
    let caps: Vec<u64> = sizes
        .iter()
        .map(|&m| mult * binom_u64(d as u64, m as u64).unwrap())
        .collect();
    let pairs = binom_u64(d as u64, 2).unwrap() as f64;

    let omega = |counts: &[u64]| {
        let mut linear = 0.0;
        let mut covered = 0.0;
        for (&m, &k) in sizes.iter().zip(counts) {
            linear += k as f64 * (m as f64 - 1.0 - delta);
            covered += k as f64 * (m * (m - 1) / 2) as f64;
        }
        linear + (1.0 - beta) * (pairs - covered).max(0.0)
    };

    let mut counts = vec![0u64; sizes.len()];
    let mut best = (omega(&counts), counts.clone());
    loop {
        // Odometer over the count box.
        let mut i = 0;
        while i < counts.len() {
            if counts[i] < caps[i] {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            break;
        }
        let w = omega(&counts);
        let size = counts.iter().sum::<u64>();
        if w < best.0 || (w == best.0 && size < best.1.iter().sum::<u64>()) {
            best = (w, counts.clone());
        }
    }

    let argmin_config = sizes
        .iter()
        .zip(&best.1)
        .flat_map(|(&m, &k)| std::iter::repeat_n(m, k as usize))
        .collect();
    Ok(FalsePositiveExponent {
        min_omega: best.0,
        argmin_config,
        passes: best.0 > d as f64 - 1.0 - delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detection_boundary_values() {
        assert!((detection_boundary(0.3, 1.0) - 1.6).abs() < 1e-15);
        assert!(detection_boundary(0.2, 0.3).abs() < 1e-15);
        assert_eq!(detection_boundary(0.0, 0.0), -1.0);
    }

    #[test]
    fn reconstruction_boundary_values() {
        let b = reconstruction_boundary(3, 0.3);
        assert_eq!(b.delta_star, 0.5);
        assert!((b.beta_star - 13.0 / 30.0).abs() < 1e-15);
        let b = reconstruction_boundary(4, 0.3);
        assert!((b.delta_star - 0.6).abs() < 1e-15);
        assert!((b.beta_star - 0.55).abs() < 1e-15);
    }

    #[test]
    fn beta_star_meets_delta_star_at_the_corner() {
        for d in 3..=6 {
            let b = reconstruction_boundary(d, reconstruction_boundary(d, 0.0).delta_star);
            assert!((b.beta_star - b.delta_star).abs() < 1e-15);
        }
    }

    #[test]
    fn region_examples() {
        use RegionLabel::*;
        assert_eq!(
            classify_region(3, 0.3, 0.3, 1.0).unwrap(),
            I_Reconstructable
        );
        assert_eq!(
            classify_region(3, 0.1, 0.45, 1.0).unwrap(),
            II_DetectOnlyMatchedNull
        );
        // delta above delta* is outside the matched-null square.
        assert_eq!(
            classify_region(3, 0.6, 0.3, 1.0).unwrap(),
            III_DetectSimpleNullOnly
        );
        assert_eq!(
            classify_region(3, 0.6, 0.6, 1.0).unwrap(),
            III_DetectSimpleNullOnly
        );
        assert_eq!(classify_region(3, 0.3, 13.0 / 30.0, 1.0).unwrap(), Boundary);
        assert_eq!(classify_region(3, 0.5, 0.2, 1.0).unwrap(), Boundary);
        assert_eq!(classify_region(3, 0.2, 0.5, 1.0).unwrap(), Boundary);
        // delta = delta* above the square is not a dividing curve.
        assert_eq!(
            classify_region(3, 0.5, 0.8, 1.0).unwrap(),
            III_DetectSimpleNullOnly
        );
        assert!(matches!(
            classify_region(3, 0.3, 0.3, 0.5),
            Err(Error::UnsupportedRegime(_))
        ));
        assert!(matches!(
            classify_region(2, 0.3, 0.3, 1.0),
            Err(Error::UnsupportedArity(2))
        ));
    }

    #[test]
    fn region_is_stable_under_tiny_perturbations() {
        for d in 3..=5 {
            for i in 1..40 {
                for j in 1..40 {
                    let (delta, beta) = (i as f64 / 40.0, j as f64 / 40.0);
                    let r = classify_region(d, delta, beta, 1.0).unwrap();
                    if r == RegionLabel::Boundary {
                        continue;
                    }
                    for (dx, dy) in [(1e-14, 0.0), (-1e-14, 0.0), (0.0, 1e-14), (0.0, -1e-14)] {
                        assert_eq!(classify_region(d, delta + dx, beta + dy, 1.0).unwrap(), r);
                    }
                }
            }
        }
    }

    #[test]
    fn exponent_examples() {
        let e = false_positive_exponent(3, 0.3, 0.4).unwrap();
        assert!((e.min_omega - 1.8).abs() < 1e-12);
        assert!(e.argmin_config.is_empty());
        assert!(e.passes);

        let e = false_positive_exponent(3, 0.3, 13.0 / 30.0).unwrap();
        assert!((e.min_omega - 1.7).abs() < 1e-12);

        let e = false_positive_exponent(3, 0.3, 0.5).unwrap();
        assert!((e.min_omega - 1.5).abs() < 1e-12);
        assert!(!e.passes);

        // Above delta*, covering every pair with 2-subsets is cheapest.
        let e = false_positive_exponent(3, 0.7, 0.1).unwrap();
        assert_eq!(e.argmin_config, vec![2, 2, 2]);
        assert!(!e.passes);

        assert!(matches!(
            false_positive_exponent(6, 0.3, 0.3),
            Err(Error::UnsupportedArity(6))
        ));
        assert!(matches!(
            false_positive_exponent(2, 0.3, 0.3),
            Err(Error::UnsupportedArity(2))
        ));
    }

    /// Brute force over all families of distinct subsets, as bitmasks.
    fn omega_by_families(d: usize, delta: f64, beta: f64) -> f64 {
        let subsets: Vec<usize> = (0u32..1 << d)
            .filter(|m| (2..d as u32).contains(&m.count_ones()))
            .map(|m| m.count_ones() as usize)
            .collect();
        let pairs = (d * (d - 1) / 2) as f64;
        let mut best = f64::INFINITY;
        for fam in 0u64..1 << subsets.len() {
            let mut lin = 0.0;
            let mut cov = 0.0;
            for (i, &m) in subsets.iter().enumerate() {
                if fam >> i & 1 == 1 {
                    lin += m as f64 - 1.0 - delta;
                    cov += (m * (m - 1) / 2) as f64;
                }
            }
            best = best.min(lin + (1.0 - beta) * (pairs - cov).max(0.0));
        }
        best
    }

    #[test]
    fn count_vectors_match_family_enumeration() {
        for d in [3, 4] {
            for (delta, beta) in [(0.1, 0.2), (0.5, 0.9), (0.7, 0.3), (0.3, 0.6), (0.9, 0.05)] {
                let fast = false_positive_exponent(d, delta, beta).unwrap().min_omega;
                let slow = omega_by_families(d, delta, beta);
                assert!(
                    (fast - slow).abs() < 1e-12,
                    "d={d} {delta} {beta}: {fast} vs {slow}"
                );
            }
        }
    }

    #[test]
    fn repeats_never_help() {
        for d in 3..=5 {
            for (delta, beta) in [(0.1, 0.2), (0.5, 0.9), (0.7, 0.3), (0.3, 0.6)] {
                let a = false_positive_exponent_with(d, delta, beta, false).unwrap();
                let b = false_positive_exponent_with(d, delta, beta, true).unwrap();
                assert!((a.min_omega - b.min_omega).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn beta_star_is_monotone() {
        for d in 3..=6 {
            let mut last = f64::NEG_INFINITY;
            for i in 0..100 {
                let b = reconstruction_boundary(d, i as f64 / 100.0).beta_star;
                assert!(b > last);
                last = b;
            }
        }
        for i in 0..100 {
            let delta = i as f64 / 100.0;
            for d in 3..6 {
                assert!(
                    reconstruction_boundary(d + 1, delta).beta_star
                        > reconstruction_boundary(d, delta).beta_star
                );
            }
        }
    }
}
