// SPDX-License-Identifier: Apache-2.0

//! Estimating LFR benchmark parameters from a graph and a clustering.
//!
//! Power-law exponents come from a discrete maximum-likelihood fit with
//! `x_min` chosen by minimizing the Kolmogorov-Smirnov distance between the
//! empirical and fitted tails.

use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::Clustering;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Smallest sample accepted by [`fit_power_law_discrete`].
pub const MIN_SAMPLES: usize = 50;
/// Smallest tail considered when scanning `x_min`.
pub const MIN_TAIL: usize = 25;

const ALPHA_LO: f64 = 1.0 + 1e-6;
const ALPHA_HI: f64 = 12.0;

/// Hurwitz zeta `sum_{k>=0} (k + q)^-s` for `s > 1`, `q > 0`.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q > 0.0);
    // Euler-Maclaurin after summing N terms directly
    const N: usize = 12;
    // B_2k / (2k)!
    const COEF: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30_240.0,
        -1.0 / 1_209_600.0,
        1.0 / 47_900_160.0,
        -691.0 / 1_307_674_368_000.0,
        1.0 / 74_724_249_600.0,
    ];
    let mut sum = 0.0;
    for k in 0..N {
        sum += (q + k as f64).powf(-s);
    }
    let a = q + N as f64;
    let a_s = a.powf(-s);
    sum += a * a_s / (s - 1.0) + 0.5 * a_s;
    // rising product s (s+1) ... (s+2k-2) times a^(-s-2k+1)
    let mut fact = s;
    let mut pow = a_s / a;
    for (k, c) in COEF.iter().enumerate() {
        let term = c * fact * pow;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        let j = 2.0 * k as f64;
        fact *= (s + j + 1.0) * (s + j + 2.0);
        pow /= a * a;
    }
    sum
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub x_min: u64,
    pub ks_distance: f64,
    pub n_tail: usize,
}

/// Discrete MLE of `alpha` for the tail `x >= x_min`, given
/// `sum ln x` over that tail.
fn mle_alpha(x_min: u64, n_tail: usize, sum_ln: f64) -> f64 {
    let q = x_min as f64;
    let nt = n_tail as f64;
    // the log-likelihood is concave in alpha
    let neg_ll = |a: f64| nt * hurwitz_zeta(a, q).ln() + a * sum_ln;
    golden_section(neg_ll, ALPHA_LO, ALPHA_HI, 1e-9)
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// KS distance between the empirical tail and the fitted law. `tail` is
/// sorted ascending and starts at `x_min`.
fn ks_distance(tail: &[u64], alpha: f64) -> f64 {
    let x_min = tail[0];
    let z_min = hurwitz_zeta(alpha, x_min as f64);
    let n = tail.len() as f64;
    // z tracks zeta(alpha, x + 1) as x walks through distinct values
    let mut x = x_min;
    let mut z = z_min - (x_min as f64).powf(-alpha);
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < tail.len() {
        let v = tail[i];
        while i < tail.len() && tail[i] == v {
            i += 1;
        }
        if v > x {
            z = if v - x > 1000 {
                hurwitz_zeta(alpha, (v + 1) as f64)
            } else {
                (x + 1..=v).fold(z, |acc, k| acc - (k as f64).powf(-alpha))
            };
            x = v;
        }
        let model = 1.0 - z / z_min;
        let empirical = i as f64 / n;
        d = d.max((empirical - model).abs());
    }
    d
}

/// Fit a discrete power law to positive integer samples. Zeros are
/// ignored.
pub fn fit_power_law_discrete(samples: &[u64]) -> Result<PowerLawFit> {
    let mut xs: Vec<u64> = samples.iter().copied().filter(|&x| x > 0).collect();
    xs.sort_unstable();
    if let (Some(&first), Some(&last)) = (xs.first(), xs.last()) {
        if first == last {
            return Err(Error::DegenerateDistribution(first));
        }
    }
    if xs.len() < MIN_SAMPLES {
        return Err(Error::SampleSize {
            got: xs.len(),
            need: MIN_SAMPLES,
        });
    }
    // nearest-rank 90th percentile
    let rank = ((0.9 * xs.len() as f64).ceil() as usize).clamp(1, xs.len());
    let p90 = xs[rank - 1];

    // suffix sums of ln x
    let mut suffix_ln = vec![0.0; xs.len() + 1];
    for i in (0..xs.len()).rev() {
        suffix_ln[i] = suffix_ln[i + 1] + (xs[i] as f64).ln();
    }
    let mut starts = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        if x > p90 {
            break;
        }
        if i == 0 || xs[i - 1] != x {
            let n_tail = xs.len() - i;
            if n_tail >= MIN_TAIL && *xs.last().unwrap() > x {
                starts.push(i);
            }
        }
    }
    if starts.is_empty() {
        return Err(Error::SampleSize {
            got: xs.len(),
            need: MIN_TAIL,
        });
    }
    let fits: Vec<PowerLawFit> = starts
        .par_iter()
        .map(|&i| {
            let tail = &xs[i..];
            let alpha = mle_alpha(xs[i], tail.len(), suffix_ln[i]);
            PowerLawFit {
                alpha,
                x_min: xs[i],
                ks_distance: ks_distance(tail, alpha),
                n_tail: tail.len(),
            }
        })
        .collect();
    // first minimum, so ties go to the smallest x_min
    Ok(fits
        .into_iter()
        .reduce(|best, f| if f.ks_distance < best.ks_distance { f } else { best })
        .expect("nonempty"))
}

/// Mean over non-isolated nodes of the fraction of each node's edges that
/// leave its cluster. Unassigned nodes count as singleton clusters.
pub fn mixing_parameter(g: &Graph, c: &Clustering) -> Result<f64> {
    if c.node_count() != g.node_count() {
        return Err(Error::InvalidArgument("clustering does not match graph".into()));
    }
    if g.edge_count() == 0 {
        return Err(Error::InvalidArgument("mixing parameter of an edgeless graph".into()));
    }
    let (sum, count) = g
        .nodes()
        .filter(|&v| g.degree(v) > 0)
        .map(|v| {
            let home = c.cluster_of(v);
            let external = g
                .neighbors(v)
                .iter()
                .filter(|&&w| home.is_none() || c.cluster_of(w) != home)
                .count();
            external as f64 / g.degree(v) as f64
        })
        .fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    Ok(sum / count as f64)
}

/// Outcome of one power-law fit inside [`LfrParams`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimate {
    Fit(PowerLawFit),
    Error(String),
}

impl Estimate {
    fn from(r: Result<PowerLawFit>) -> Self {
        match r {
            Ok(f) => Estimate::Fit(f),
            Err(e) => Estimate::Error(e.to_string()),
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            Estimate::Fit(f) => Some(f.alpha),
            Estimate::Error(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LfrParams {
    #[serde(rename = "N")]
    pub n: usize,
    /// Average degree.
    pub k: f64,
    pub k_max: usize,
    /// Degree exponent.
    pub tau1: Estimate,
    /// Community size exponent.
    pub tau2: Estimate,
    pub c_min: usize,
    pub c_max: usize,
    pub mu: f64,
}

/// Estimate all eight parameters. Communities are the non-singleton
/// clusters of `c`; a failed exponent fit is reported in its own field.
pub fn estimate_params(g: &Graph, c: &Clustering) -> Result<LfrParams> {
    let sizes: Vec<u64> = c
        .clusters()
        .iter()
        .map(|cl| cl.nodes.len() as u64)
        .filter(|&s| s > 1)
        .collect();
    if sizes.is_empty() {
        return Err(Error::InvalidArgument("clustering has no non-singleton cluster".into()));
    }
    let mu = mixing_parameter(g, c)?;
    let degrees: Vec<u64> = g.nodes().map(|v| g.degree(v) as u64).collect();
    let n = g.node_count();
    Ok(LfrParams {
        n,
        k: 2.0 * g.edge_count() as f64 / n as f64,
        k_max: g.max_degree().unwrap_or(0),
        tau1: Estimate::from(fit_power_law_discrete(&degrees)),
        tau2: Estimate::from(fit_power_law_discrete(&sizes)),
        c_min: *sizes.iter().min().unwrap() as usize,
        c_max: *sizes.iter().max().unwrap() as usize,
        mu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;
    use crate::graph::NodeSet;
    use approx::assert_relative_eq;

    #[test]
    fn zeta_values() {
        // zeta(2) = pi^2 / 6, zeta(4) = pi^4 / 90
        let pi = std::f64::consts::PI;
        assert_relative_eq!(hurwitz_zeta(2.0, 1.0), pi * pi / 6.0, max_relative = 1e-13);
        assert_relative_eq!(hurwitz_zeta(4.0, 1.0), pi.powi(4) / 90.0, max_relative = 1e-13);
        // zeta(s, 1/2) = (2^s - 1) zeta(s)
        assert_relative_eq!(hurwitz_zeta(2.0, 0.5), 3.0 * pi * pi / 6.0, max_relative = 1e-13);
        // shift identity
        let (s, q) = (2.7, 3.0);
        assert_relative_eq!(
            hurwitz_zeta(s, q),
            hurwitz_zeta(s, q + 1.0) + q.powf(-s),
            max_relative = 1e-13
        );
        // against brute summation with an integral tail correction
        let s: f64 = 1.5;
        let direct: f64 = (0..200_000).map(|k| (5.0 + k as f64).powf(-s)).sum::<f64>()
            + (200_005f64).powf(1.0 - s) / (s - 1.0)
            + 0.5 * (200_005f64).powf(-s);
        assert_relative_eq!(hurwitz_zeta(s, 5.0), direct, max_relative = 1e-10);
    }

    #[test]
    fn mixing_examples() {
        let g = complete(4);
        let all = Clustering::from_sets(4, vec![NodeSet::full(4)]).unwrap();
        assert_eq!(mixing_parameter(&g, &all).unwrap(), 0.0);
        assert_eq!(mixing_parameter(&g, &Clustering::new(4)).unwrap(), 1.0);
        let p = path(4);
        let halves = Clustering::from_sets(
            4,
            vec![NodeSet::from_unsorted(vec![0, 1]), NodeSet::from_unsorted(vec![2, 3])],
        )
        .unwrap();
        assert_eq!(mixing_parameter(&p, &halves).unwrap(), 0.25);
        assert!(mixing_parameter(&Graph::from_edges(3, &[]), &Clustering::new(3)).is_err());
    }

    #[test]
    fn degenerate_and_small_samples() {
        assert!(matches!(fit_power_law_discrete(&[7; 500]), Err(Error::DegenerateDistribution(7))));
        assert!(matches!(fit_power_law_discrete(&[7; 5]), Err(Error::DegenerateDistribution(7))));
        let few: Vec<u64> = (1..40).collect();
        assert!(matches!(fit_power_law_discrete(&few), Err(Error::SampleSize { .. })));
    }

    #[test]
    fn two_cliques_params() {
        let g = disjoint_union(&[complete(12), complete(12)]);
        let c = Clustering::from_sets(
            24,
            vec![NodeSet::from_unsorted((0..12).collect()), NodeSet::from_unsorted((12..24).collect())],
        )
        .unwrap();
        let p = estimate_params(&g, &c).unwrap();
        assert_eq!((p.n, p.k, p.k_max, p.c_min, p.c_max, p.mu), (24, 11.0, 11, 12, 12, 0.0));
        assert!(matches!(&p.tau1, Estimate::Error(m) if m.contains("degenerate")));
        assert!(estimate_params(&g, &Clustering::new(24)).is_err());
    }
}
