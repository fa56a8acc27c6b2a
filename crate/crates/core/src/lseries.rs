//! Central values of weight-2 L-series by the smoothed functional equation,
//! with the sign (and, for twists, the conductor) fitted by agreement of two
//! evaluation parameters.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::arith::kronecker;
use crate::error::{Error, Result};

/// Second evaluation parameter; the first is `t = 1`.
const T_ALT: f64 = 1.2;
/// Target for the truncation tail.
const TAIL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct LValueEstimate {
    pub value: f64,
    pub error: f64,
    pub terms: usize,
    pub epsilon: i32,
    pub conductor: u128,
    /// Fitted `a_p` of the twist when its conductor is exactly divisible by `p`.
    pub a_p: Option<i32>,
    /// `|L(t=1) - L(t=T_ALT)|` at the chosen candidate.
    pub residual: f64,
}

/// One hypothesis for the analytic data of an L-series.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub conductor: u128,
    pub epsilon: i32,
    pub a_p: Option<i32>,
    pub coeffs: Vec<f64>,
}

/// Terms needed so that the tail `Σ_{n>X} 2 e^{-cn}` is below `TAIL` for
/// both evaluation parameters, with `|a_n/n| ≤ 2`.
pub fn terms_needed(conductor: u128) -> usize {
    let c = 2.0 * PI / (T_ALT * (conductor as f64).sqrt());
    let x = ((2.0 / (TAIL * (1.0 - (-c).exp()))).ln() / c).ceil();
    x.max(10.0) as usize
}

fn tail_bound(conductor: u128, terms: usize) -> f64 {
    let c = 2.0 * PI / (T_ALT * (conductor as f64).sqrt());
    2.0 * (-c * (terms as f64 + 1.0)).exp() / (1.0 - (-c).exp())
}

/// `Σ a_n/n (e^{-2πnt/√N} + ε e^{-2πn/(t√N)})`.
pub fn smoothed_sum(coeffs: &[f64], conductor: u128, epsilon: i32, t: f64, terms: usize) -> f64 {
    let s = (conductor as f64).sqrt();
    let (c1, c2) = (2.0 * PI * t / s, 2.0 * PI / (t * s));
    let eps = epsilon as f64;
    coeffs
        .iter()
        .enumerate()
        .take(terms + 1)
        .skip(1)
        .map(|(n, a)| {
            if *a == 0.0 {
                return 0.0;
            }
            let nf = n as f64;
            a / nf * ((-c1 * nf).exp() + eps * (-c2 * nf).exp())
        })
        .sum()
}

/// Chooses the candidate whose two evaluations agree best; fails when none
/// agrees within `tol` (relative to the size of the sum).
pub fn fit(candidates: &[Candidate], tol: f64) -> Result<LValueEstimate> {
    let evals: Vec<(f64, f64, f64, usize)> = candidates
        .par_iter()
        .map(|c| {
            let terms = terms_needed(c.conductor).min(c.coeffs.len().saturating_sub(1));
            let v1 = smoothed_sum(&c.coeffs, c.conductor, c.epsilon, 1.0, terms);
            let v2 = smoothed_sum(&c.coeffs, c.conductor, c.epsilon, T_ALT, terms);
            let scale: f64 = c
                .coeffs
                .iter()
                .enumerate()
                .take(terms + 1)
                .skip(1)
                .map(|(n, a)| a.abs() / n as f64 * (-2.0 * PI * n as f64 / (T_ALT * (c.conductor as f64).sqrt())).exp())
                .sum::<f64>()
                .max(1.0);
            (v1, (v1 - v2).abs(), scale, terms)
        })
        .collect();
    let mut best: Option<usize> = None;
    for (i, e) in evals.iter().enumerate() {
        if best.is_none_or(|b| e.1 / e.2 < evals[b].1 / evals[b].2) {
            best = Some(i);
        }
    }
    let b = best.ok_or_else(|| Error::FitFailure("no candidates".into()))?;
    let (value, residual, scale, terms) = evals[b];
    let c = &candidates[b];
    if residual / scale > tol {
        return Err(Error::FitFailure(format!(
            "best candidate (N = {}, ε = {}) disagrees by {:.3e}",
            c.conductor, c.epsilon, residual
        )));
    }
    if terms_needed(c.conductor) > c.coeffs.len().saturating_sub(1) {
        return Err(Error::Precision(format!(
            "{} coefficients supplied, {} needed for conductor {}",
            c.coeffs.len().saturating_sub(1),
            terms_needed(c.conductor),
            c.conductor
        )));
    }
    Ok(LValueEstimate {
        value,
        error: residual + tail_bound(c.conductor, terms),
        terms,
        epsilon: c.epsilon,
        conductor: c.conductor,
        a_p: c.a_p,
        residual,
    })
}

/// `n ↦ (D/n)` for `n ≤ n_max`, completely multiplicative.
pub fn character_table(disc: i128, n_max: usize) -> Vec<f64> {
    let spf = smallest_prime_factors(n_max);
    let mut chi = vec![0.0; n_max + 1];
    if n_max >= 1 {
        chi[1] = 1.0;
    }
    for n in 2..=n_max {
        let q = spf[n];
        chi[n] = if q == n {
            kronecker(disc, n as i128) as f64
        } else {
            chi[q] * chi[n / q]
        };
    }
    chi
}

pub fn smallest_prime_factors(n_max: usize) -> Vec<usize> {
    let mut spf: Vec<usize> = (0..=n_max).collect();
    let mut i = 2;
    while i * i <= n_max {
        if spf[i] == i {
            let mut j = i * i;
            while j <= n_max {
                if spf[j] == j {
                    spf[j] = i;
                }
                j += i;
            }
        }
        i += 1;
    }
    spf
}

/// Multiplicative extension of prime Hecke eigenvalues: `a_1 = 1`,
/// `a_{q^{k+1}} = a_q a_{q^k} - q a_{q^{k-1}}` for `q ∤ level`, and
/// `a_{q^k} = a_q^k` for `q | level`.
pub fn extend_multiplicative(prime_values: &dyn Fn(usize) -> f64, bad: &[usize], n_max: usize) -> Vec<f64> {
    let spf = smallest_prime_factors(n_max);
    let mut a = vec![0.0; n_max + 1];
    if n_max >= 1 {
        a[1] = 1.0;
    }
    for n in 2..=n_max {
        let q = spf[n];
        let mut m = n;
        let mut k = 0;
        while m % q == 0 {
            m /= q;
            k += 1;
        }
        let qk = n / m;
        if m > 1 {
            a[n] = a[qk] * a[m];
            continue;
        }
        let aq = prime_values(q);
        a[n] = if k == 1 {
            aq
        } else if bad.contains(&q) {
            aq * a[n / q]
        } else {
            aq * a[n / q] - q as f64 * a[n / (q * q)]
        };
    }
    a
}

/// Coefficients of the twist by `(D/·)` with `p ∤ D'` removed and `a_p` of
/// the twist replaced by `s` (0 when `p²` divides the conductor).
pub fn twist_coeffs(a: &[f64], chi: &[f64], p: usize, s: i32) -> Vec<f64> {
    let n_max = a.len().min(chi.len()) - 1;
    let mut out = vec![0.0; n_max + 1];
    for n in 1..=n_max {
        let mut m = n;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        out[n] = a[m] * chi[m] * (s as f64).powi(k);
    }
    out
}

/// `L(f, 1)` for a newform of level `p²` (`a_p = 0`), sign fitted.
pub fn central_value(a: &[f64], level: u128, tol: f64) -> Result<LValueEstimate> {
    let cands: Vec<Candidate> = [1, -1]
        .into_iter()
        .map(|e| Candidate {
            conductor: level,
            epsilon: e,
            a_p: None,
            coeffs: a.to_vec(),
        })
        .collect();
    fit(&cands, tol)
}

/// `L(f, D, 1)` for `D = D₀·(unit at p)` a fundamental discriminant with
/// `p | D`: conductor `p·m²` (with `a_p = ±1`) or `p²·m²` (with `a_p = 0`),
/// where `m = |D|/p`; sign fitted jointly.
pub fn twisted_value(a: &[f64], p: u64, disc: i128, tol: f64) -> Result<LValueEstimate> {
    let m = disc.unsigned_abs() / p as u128;
    let n_max = a.len() - 1;
    let chi = character_table(disc, n_max);
    let mut cands = Vec::new();
    for (cond, signs) in [(p as u128 * m * m, vec![1, -1]), (p as u128 * p as u128 * m * m, vec![0])] {
        for s in signs {
            let coeffs = twist_coeffs(a, &chi, p as usize, s);
            for e in [1, -1] {
                cands.push(Candidate {
                    conductor: cond,
                    epsilon: e,
                    a_p: (s != 0).then_some(s),
                    coeffs: coeffs.clone(),
                });
            }
        }
    }
    fit(&cands, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_give_zero() {
        let est = central_value(&vec![0.0; 200], 49, 1e-8).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn character_is_multiplicative() {
        let chi = character_table(-7, 100);
        for m in 1..10 {
            for n in 1..10 {
                assert_eq!(chi[m * n], chi[m] * chi[n]);
            }
        }
        assert_eq!(chi[2], 1.0);
        assert_eq!(chi[3], -1.0);
        assert_eq!(chi[7], 0.0);
    }

    #[test]
    fn recursion_matches_euler_factor() {
        let a = extend_multiplicative(&|q| if q == 2 { -1.0 } else { 0.0 }, &[], 64);
        assert_eq!(a[4], -1.0);
        assert_eq!(a[8], 3.0);
    }
}
