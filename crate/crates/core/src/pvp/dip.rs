//! Hartigan's dip statistic with a uniform-bootstrap p-value.

use crate::error::{Error, Result};
use crate::rng::UniformStream;
use crate::scalar::Real;

pub const DEFAULT_BOOTSTRAP: usize = 2000;
const MIN_SAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipResult<T> {
    pub dip: T,
    /// Fraction of uniform reference samples with a dip at least as large.
    pub p: T,
}

fn idx<T: Real>(i: usize) -> T {
    T::count(i)
}

/// Dip of a sorted sample: the greatest distance between the empirical CDF
/// and the closest unimodal CDF, found by alternating greatest convex
/// minorant / least concave majorant fits over a shrinking modal interval.
///
/// Indices below are 1-based to follow the classic formulation.
fn dip_sorted<T: Real>(sorted: &[T]) -> T {
    let n = sorted.len();
    let x = |i: usize| sorted[i - 1];
    let two_n = T::count(2 * n);
    // Distances are tracked in units of 1/n; the floor is half a step.
    let mut dip = T::one();
    if n < 2 || x(n) == x(1) {
        return dip / two_n;
    }

    let mut mn = vec![0usize; n + 1];
    mn[1] = 1;
    for j in 2..=n {
        mn[j] = j - 1;
        loop {
            let mnj = mn[j];
            let mnmnj = mn[mnj];
            if mnj == 1
                || (x(j) - x(mnj)) * idx::<T>(mnj - mnmnj) < (x(mnj) - x(mnmnj)) * idx::<T>(j - mnj)
            {
                break;
            }
            mn[j] = mnmnj;
        }
    }

    let mut mj = vec![0usize; n + 1];
    mj[n] = n;
    for k in (1..n).rev() {
        mj[k] = k + 1;
        loop {
            let mjk = mj[k];
            let mjmjk = mj[mjk];
            // Both index differences are negative; flip both sides.
            if mjk == n
                || (x(k) - x(mjk)) * idx::<T>(mjmjk - mjk) > (x(mjk) - x(mjmjk)) * idx::<T>(mjk - k)
            {
                break;
            }
            mj[k] = mjmjk;
        }
    }

    let mut gcm = vec![0usize; n + 2];
    let mut lcm = vec![0usize; n + 2];
    let (mut low, mut high) = (1usize, n);
    loop {
        let mut ic = 1;
        gcm[1] = high;
        while gcm[ic] > low {
            let prev = gcm[ic];
            ic += 1;
            gcm[ic] = mn[prev];
        }
        let l_gcm = ic;
        let mut ix = l_gcm - 1;
        let mut ig = l_gcm;

        ic = 1;
        lcm[1] = low;
        while lcm[ic] < high {
            let prev = lcm[ic];
            ic += 1;
            lcm[ic] = mj[prev];
        }
        let l_lcm = ic;
        let mut iv = 2;
        let mut ih = 2;

        let mut d = T::zero();
        if l_gcm != 2 || l_lcm != 2 {
            loop {
                let gcmix = gcm[ix];
                let lcmiv = lcm[iv];
                if gcmix > lcmiv {
                    let gcmi1 = gcm[ix + 1];
                    let dx = idx::<T>(lcmiv) - idx::<T>(gcmi1) + T::one()
                        - (x(lcmiv) - x(gcmi1)) * idx::<T>(gcmix - gcmi1) / (x(gcmix) - x(gcmi1));
                    iv += 1;
                    if dx >= d {
                        d = dx;
                        ig = ix + 1;
                        ih = iv - 1;
                    }
                } else {
                    let lcmiv1 = lcm[iv - 1];
                    let dx = (x(gcmix) - x(lcmiv1)) * idx::<T>(lcmiv - lcmiv1)
                        / (x(lcmiv) - x(lcmiv1))
                        - (idx::<T>(gcmix) - idx::<T>(lcmiv1) - T::one());
                    ix = ix.saturating_sub(1);
                    if dx >= d {
                        d = dx;
                        ig = ix + 1;
                        ih = iv;
                    }
                }
                ix = ix.max(1);
                iv = iv.min(l_lcm);
                if gcm[ix] == lcm[iv] {
                    break;
                }
            }
        } else {
            d = T::one();
        }

        if d < dip {
            break;
        }

        let mut dip_l = T::zero();
        for j in ig..l_gcm {
            let mut max_t = T::one();
            let (jb, je) = (gcm[j + 1], gcm[j]);
            if je - jb > 1 && x(je) != x(jb) {
                let slope = idx::<T>(je - jb) / (x(je) - x(jb));
                for jj in jb..=je {
                    let t = idx::<T>(jj + 1 - jb) - (x(jj) - x(jb)) * slope;
                    max_t = max_t.max(t);
                }
            }
            dip_l = dip_l.max(max_t);
        }

        let mut dip_u = T::zero();
        for j in ih..l_lcm {
            let mut max_t = T::one();
            let (jb, je) = (lcm[j], lcm[j + 1]);
            if je - jb > 1 && x(je) != x(jb) {
                let slope = idx::<T>(je - jb) / (x(je) - x(jb));
                for jj in jb..=je {
                    let t = (x(jj) - x(jb)) * slope - (idx::<T>(jj) - idx::<T>(jb) - T::one());
                    max_t = max_t.max(t);
                }
            }
            dip_u = dip_u.max(max_t);
        }

        dip = dip.max(dip_l.max(dip_u));

        if low == gcm[ig] && high == lcm[ih] {
            break;
        }
        low = gcm[ig];
        high = lcm[ih];
    }
    dip / two_n
}

fn sorted_copy<T: Real>(samples: &[T]) -> Result<Vec<T>> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InsufficientData {
            required: MIN_SAMPLES,
            found: samples.len(),
        });
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::Input("dip test samples must be finite".into()));
    }
    let mut v = samples.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(v)
}

/// Dip statistic of an unsorted sample. A constant sample has dip 0.
pub fn dip_statistic<T: Real>(samples: &[T]) -> Result<T> {
    let v = sorted_copy(samples)?;
    if v[0] == v[v.len() - 1] {
        return Ok(T::zero());
    }
    Ok(dip_sorted(&v))
}

/// Dip test of unimodality. The p-value is the share of `n_bootstrap`
/// uniform samples of the same size whose dip reaches the observed one;
/// bootstrap sample `b` uses the uniform stream `(seed, b)`.
pub fn dip_test<T: Real>(samples: &[T], n_bootstrap: usize, seed: u64) -> Result<DipResult<T>> {
    let v = sorted_copy(samples)?;
    if v[0] == v[v.len() - 1] {
        return Ok(DipResult {
            dip: T::zero(),
            p: T::one(),
        });
    }
    if n_bootstrap == 0 {
        return Err(Error::Config(
            "dip test needs at least one bootstrap sample".into(),
        ));
    }
    let dip = dip_sorted(&v);
    let n = v.len();
    let mut reference = vec![T::zero(); n];
    let mut exceed = 0usize;
    for b in 0..n_bootstrap {
        let mut u = UniformStream::new(seed, b as u64);
        for r in reference.iter_mut() {
            *r = T::lit(u.next_open01());
        }
        reference.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        if dip_sorted(&reference) >= dip {
            exceed += 1;
        }
    }
    Ok(DipResult {
        dip,
        p: T::count(exceed) / T::count(n_bootstrap),
    })
}

/// Deterministic sample of `m` times whose density follows `sigma(t)`:
/// midpoint quantiles of the piecewise-linear CDF of sigma over the grid.
/// This is one way to feed a profile to [`dip_test`].
pub fn profile_quantiles<T: Real>(t: &[T], sigma: &[T], m: usize) -> Result<Vec<T>> {
    if t.len() != sigma.len() || t.len() < 2 {
        return Err(Error::Input(
            "profile needs at least two matching points".into(),
        ));
    }
    let half = T::lit(0.5);
    let mut cum = vec![T::zero(); t.len()];
    for i in 1..t.len() {
        let area = half * (sigma[i] + sigma[i - 1]) * (t[i] - t[i - 1]);
        cum[i] = cum[i - 1] + area.max(T::zero());
    }
    let total = cum[t.len() - 1];
    if !(total > T::zero()) {
        return Err(Error::Input("profile has no spread to sample from".into()));
    }
    Ok((0..m)
        .map(|j| {
            let q = (T::count(j) + half) / T::count(m) * total;
            let i = cum.partition_point(|&c| c < q).clamp(1, t.len() - 1);
            let span = cum[i] - cum[i - 1];
            let frac = if span > T::zero() {
                (q - cum[i - 1]) / span
            } else {
                T::zero()
            };
            t[i - 1] + frac * (t[i] - t[i - 1])
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    // Values from the reference implementation of Hartigan's algorithm.
    #[test]
    fn reference_dips() {
        let a = [0.1, 0.4, 0.45, 1.3, 2.2, 2.3, 2.35, 5.0, 5.1, 5.3, 7.7, 8.0];
        assert!((dip_statistic::<f64>(&a).unwrap() - 0.11228813559322036).abs() < 1e-14);
        let b = [
            0.0, 0.01, 0.02, 0.03, 0.04, 10.0, 10.01, 10.02, 10.03, 10.04,
        ];
        assert!((dip_statistic::<f64>(&b).unwrap() - 0.249).abs() < 1e-14);
        let c = [
            0.345584, 0.821618, 0.330437, -1.303157, 0.905356, 0.446375, -0.536953, 0.581118,
            0.364572, 0.294132, 0.028422, 0.546713, -0.736454, -0.16291, -0.482119, 0.598846,
            0.039722, -0.292457, -0.781908, -0.257192, 0.008142, -0.275603, 1.294064, 1.006724,
            -2.711162,
        ];
        assert!((dip_statistic::<f64>(&c).unwrap() - 0.06071951570861369).abs() < 1e-14);
    }

    #[test]
    fn quantiles_of_flat_profile_are_uniform() {
        let t: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
        let q = profile_quantiles(&t, &[1.0; 11], 4).unwrap();
        for (got, want) in q.iter().zip([0.125, 0.375, 0.625, 0.875]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(profile_quantiles(&t, &[0.0; 11], 4).is_err());
    }

    #[test]
    fn too_few_samples() {
        assert!(matches!(
            dip_statistic(&[1.0, 2.0, 3.0]),
            Err(Error::InsufficientData {
                required: 10,
                found: 3
            })
        ));
    }

    #[test]
    fn constant_sample_is_degenerate() {
        let r = dip_test(&[2.5; 12], 100, 0).unwrap();
        assert_eq!(r.dip, 0.0);
        assert_eq!(r.p, 1.0);
    }

    #[test]
    fn dip_is_bounded() {
        let xs: Vec<f64> = (0..50).map(|i| ((i * 37) % 50) as f64 * 0.3).collect();
        let d = dip_statistic(&xs).unwrap();
        assert!((1.0 / 100.0..=0.25).contains(&d), "{d}");
    }
}
