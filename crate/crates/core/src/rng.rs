//! Counter-based normal variates for reproducible, order-independent ensembles.
//!
//! Every draw is a pure function of `(seed, path, step, component)`, so paths
//! can run on any number of threads (or be replayed later, e.g. to reconstruct
//! the driving Brownian motion) without shared generator state.
//!
//! Splitting rule: the tuple is folded through the SplitMix64 finalizer one
//! field at a time, each field pre-multiplied by a distinct odd constant. Two
//! uniforms from adjacent component counters feed one Box-Muller pair.

/// SplitMix64 finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn key(seed: u64, path: u64, step: u64, counter: u64) -> u64 {
    let mut z = seed ^ 0x9e37_79b9_7f4a_7c15;
    z = mix64(z ^ path.wrapping_mul(0xd1b5_4a32_d192_ed03));
    z = mix64(z ^ step.wrapping_mul(0x8bb8_4b93_962e_acc9));
    mix64(z ^ counter.wrapping_mul(0x2545_f491_4f6c_dd1d))
}

/// Uniform draw in `(0, 1]` (open at zero so `ln` below is finite).
#[inline]
pub fn uniform_open01(seed: u64, path: u64, step: u64, counter: u64) -> f64 {
    let bits = key(seed, path, step, counter) >> 11; // 53 bits
    (bits as f64 + 1.0) * (1.0 / 9_007_199_254_740_992.0)
}

/// Box-Muller pair of independent standard normals.
#[inline]
pub fn normal_pair(seed: u64, path: u64, step: u64, pair: u64) -> (f64, f64) {
    let u1 = uniform_open01(seed, path, step, 2 * pair);
    let u2 = uniform_open01(seed, path, step, 2 * pair + 1);
    let radius = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    (radius * c, radius * s)
}

/// Standard normal for one spatial component of one step of one path.
#[inline]
pub fn standard_normal(seed: u64, path: u64, step: u64, component: u32) -> f64 {
    let (a, b) = normal_pair(seed, path, step, component as u64 / 2);
    if component % 2 == 0 {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = standard_normal(42, 3, 1000, 1);
        let b = standard_normal(42, 3, 1000, 1);
        assert_eq!(a.to_bits(), b.to_bits());
        assert_ne!(
            standard_normal(42, 3, 1000, 0).to_bits(),
            standard_normal(43, 3, 1000, 0).to_bits()
        );
    }

    #[test]
    fn moments_are_sane() {
        let n = 100_000u64;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for step in 0..n {
            let x = standard_normal(7, 0, step, 0);
            sum += x;
            sum_sq += x * x;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn paths_are_uncorrelated() {
        let n = 10_000u64;
        let mut dot = 0.0;
        for step in 0..n {
            dot += standard_normal(11, 0, step, 0) * standard_normal(11, 1, step, 0);
        }
        let corr = dot / n as f64;
        assert!(corr.abs() < 0.05, "lag-0 cross correlation {corr}");
    }

    #[test]
    fn uniform_stays_in_half_open_interval() {
        for c in 0..1000 {
            let u = uniform_open01(9, 2, 5, c);
            assert!(u > 0.0 && u <= 1.0);
        }
    }
}
