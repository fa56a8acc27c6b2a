//! Positive definite integral quadratic forms and exhaustive enumeration of
//! short vectors (LLL preconditioning, then Fincke–Pohst with exact integer
//! evaluation at the leaves).

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default cap on the estimated number of lattice points visited.
pub const DEFAULT_MAX_CANDIDATES: f64 = 4.0e9;

/// `Q(x) = ½ xᵀ G x` for an even symmetric integer Gram matrix `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadForm {
    gram: Vec<Vec<i128>>,
}

impl QuadForm {
    pub fn new(gram: Vec<Vec<i128>>) -> QuadForm {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            assert_eq!(row.len(), n, "Gram matrix must be square");
            assert!(row[i] % 2 == 0, "Gram diagonal must be even");
            for j in 0..n {
                assert_eq!(row[j], gram[j][i], "Gram matrix must be symmetric");
            }
        }
        QuadForm { gram }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i128>] {
        &self.gram
    }

    pub fn eval(&self, x: &[i128]) -> i128 {
        let n = self.dim();
        let mut s = 0;
        for i in 0..n {
            for j in 0..n {
                s += x[i] * self.gram[i][j] * x[j];
            }
        }
        s / 2
    }

    /// `r_0, ..., r_m_max` with the default candidate cap.
    pub fn theta(&self, m_max: usize) -> Result<Vec<u64>> {
        self.theta_limited(m_max, DEFAULT_MAX_CANDIDATES)
    }

    pub fn theta_limited(&self, m_max: usize, max_candidates: f64) -> Result<Vec<u64>> {
        let (reduced, _) = self.lll();
        let plan = Plan::new(&reduced, m_max, max_candidates)?;
        Ok(plan.count())
    }

    /// All vectors with `0 < Q(x) <= m_max`, in original coordinates, sorted.
    pub fn vectors(&self, m_max: usize) -> Result<Vec<(Vec<i128>, i128)>> {
        let (reduced, u) = self.lll();
        let plan = Plan::new(&reduced, m_max, DEFAULT_MAX_CANDIDATES)?;
        let n = self.dim();
        let mut out: Vec<(Vec<i128>, i128)> = plan
            .collect()
            .into_iter()
            .map(|(y, v)| {
                let x: Vec<i128> = (0..n).map(|k| (0..n).map(|i| y[i] * u[i][k]).sum()).collect();
                (x, v)
            })
            .collect();
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        Ok(out)
    }

    fn transformed(&self, u: &[Vec<i128>]) -> QuadForm {
        let n = self.dim();
        let mut g = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0;
                for k in 0..n {
                    if u[i][k] == 0 {
                        continue;
                    }
                    for l in 0..n {
                        s += u[i][k] * self.gram[k][l] * u[j][l];
                    }
                }
                g[i][j] = s;
            }
        }
        QuadForm { gram: g }
    }

    /// LLL-reduced equivalent form and the unimodular `U` with `G' = U G Uᵀ`.
    pub fn lll(&self) -> (QuadForm, Vec<Vec<i128>>) {
        let n = self.dim();
        let mut u: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
            .collect();
        let mut k = 1;
        let mut guard = 0;
        while k < n && guard < 10_000 {
            guard += 1;
            for j in (0..k).rev() {
                let (mu, _) = gso(&self.transformed(&u).gram);
                let r = mu[k][j].round() as i128;
                if r != 0 {
                    for c in 0..n {
                        u[k][c] -= r * u[j][c];
                    }
                }
            }
            let (mu, bstar) = gso(&self.transformed(&u).gram);
            if bstar[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
                k += 1;
            } else {
                u.swap(k, k - 1);
                k = (k - 1).max(1);
            }
        }
        (self.transformed(&u), u)
    }
}

/// Gram–Schmidt coefficients and squared lengths from a Gram matrix.
fn gso(g: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[i][j] as f64;
            for k in 0..j {
                s -= mu[j][k] * mu[i][k] * b[k];
            }
            mu[i][j] = s / b[j];
        }
        let mut s = g[i][i] as f64;
        for k in 0..i {
            s -= mu[i][k] * mu[i][k] * b[k];
        }
        b[i] = s;
    }
    (mu, b)
}

/// Fincke–Pohst enumeration of `{x : Q(x) <= m_max}`.
struct Plan<'a> {
    form: &'a QuadForm,
    m_max: usize,
    // q[i][i] diagonal weights, q[i][j] (j > i) Cholesky coefficients of Q.
    q: Vec<Vec<f64>>,
}

impl<'a> Plan<'a> {
    fn new(form: &'a QuadForm, m_max: usize, max_candidates: f64) -> Result<Plan<'a>> {
        let n = form.dim();
        let mut q: Vec<Vec<f64>> = form
            .gram
            .iter()
            .map(|r| r.iter().map(|&x| x as f64 / 2.0).collect())
            .collect();
        for i in 0..n {
            if q[i][i] <= 0.0 {
                return Err(Error::InvalidInput("form is not positive definite".into()));
            }
            for j in i + 1..n {
                q[j][i] = q[i][j];
                q[i][j] /= q[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    q[k][l] -= q[k][i] * q[i][l];
                }
            }
        }
        let det: f64 = (0..n).map(|i| q[i][i]).product();
        let unit_ball = std::f64::consts::PI.powf(n as f64 / 2.0)
            / libm_gamma(n as f64 / 2.0 + 1.0);
        let estimate = unit_ball * (m_max as f64).powf(n as f64 / 2.0) / det.sqrt();
        if estimate > max_candidates {
            return Err(Error::Resource(format!(
                "enumeration to {m_max} would visit about {estimate:.3e} vectors (cap {max_candidates:.3e})"
            )));
        }
        Ok(Plan { form, m_max, q })
    }

    /// Range of `x_i` given the partial centre and remaining budget.
    fn range(&self, i: usize, x: &[i128], budget: f64) -> (i128, i128) {
        let n = self.form.dim();
        let mut c = 0.0;
        for j in i + 1..n {
            c -= self.q[i][j] * x[j] as f64;
        }
        let r = (budget.max(0.0) / self.q[i][i]).sqrt() + 1e-9;
        ((c - r).ceil() as i128 - 1, (c + r).floor() as i128 + 1)
    }

    fn partial(&self, i: usize, x: &[i128]) -> f64 {
        let n = self.form.dim();
        let mut s = x[i] as f64;
        for j in i + 1..n {
            s += self.q[i][j] * x[j] as f64;
        }
        self.q[i][i] * s * s
    }

    fn count(&self) -> Vec<u64> {
        let n = self.form.dim();
        let bound = self.m_max as f64 * (1.0 + 1e-9) + 1e-6;
        let x = vec![0i128; n];
        let (lo, hi) = self.range(n - 1, &x, bound);
        let parts: Vec<Vec<u64>> = (lo..=hi)
            .into_par_iter()
            .map(|top| {
                let mut counts = vec![0u64; self.m_max + 1];
                let mut x = vec![0i128; n];
                x[n - 1] = top;
                let rest = bound - self.partial(n - 1, &x);
                if rest >= -1e-6 {
                    self.walk(n - 1, &mut x, rest, &mut |v, _| counts[v] += 1);
                }
                counts
            })
            .collect();
        let mut total = vec![0u64; self.m_max + 1];
        for p in parts {
            for (t, c) in total.iter_mut().zip(p) {
                *t += c;
            }
        }
        total
    }

    fn collect(&self) -> Vec<(Vec<i128>, i128)> {
        let n = self.form.dim();
        let bound = self.m_max as f64 * (1.0 + 1e-9) + 1e-6;
        let mut x = vec![0i128; n];
        let mut out = Vec::new();
        let (lo, hi) = self.range(n - 1, &x, bound);
        for top in lo..=hi {
            x[n - 1] = top;
            let rest = bound - self.partial(n - 1, &x);
            if rest >= -1e-6 {
                self.walk(n - 1, &mut x, rest, &mut |v, y| {
                    if v > 0 {
                        out.push((y.to_vec(), v as i128));
                    }
                });
            }
        }
        out
    }

    /// Coordinates `i..n` fixed; enumerate `i-1` down to 0.
    fn walk(&self, i: usize, x: &mut [i128], budget: f64, emit: &mut dyn FnMut(usize, &[i128])) {
        if i == 1 {
            self.leaves(x, budget, emit);
            return;
        }
        if i == 0 {
            let v = self.form.eval(x);
            if v >= 0 && v as usize <= self.m_max {
                emit(v as usize, x);
            }
            return;
        }
        let (lo, hi) = self.range(i - 1, x, budget);
        for t in lo..=hi {
            x[i - 1] = t;
            let rest = budget - self.partial(i - 1, x);
            if rest >= -1e-6 {
                self.walk(i - 1, x, rest, emit);
            }
        }
        x[i - 1] = 0;
    }

    /// Innermost coordinate with exact values `2Q = G00 x0² + 2 B x0 + R`.
    fn leaves(&self, x: &mut [i128], budget: f64, emit: &mut dyn FnMut(usize, &[i128])) {
        let g = &self.form.gram;
        let n = g.len();
        let mut b = 0i128;
        let mut r = 0i128;
        for j in 1..n {
            b += g[0][j] * x[j];
            for k in 1..n {
                r += x[j] * g[j][k] * x[k];
            }
        }
        let (lo, hi) = self.range(0, x, budget);
        let limit = 2 * self.m_max as i128;
        for t in lo..=hi {
            let v2 = g[0][0] * t * t + 2 * b * t + r;
            if v2 <= limit {
                x[0] = t;
                emit((v2 / 2) as usize, x);
            }
        }
        x[0] = 0;
    }
}

/// Gamma function at positive half-integers (all that unit-ball volumes need).
fn libm_gamma(s: f64) -> f64 {
    let twice = (2.0 * s).round() as i64;
    if twice % 2 == 0 {
        (1..(twice / 2)).map(|k| k as f64).product()
    } else {
        let mut g = std::f64::consts::PI.sqrt();
        let mut a = 0.5;
        while a < s - 0.25 {
            g *= a;
            a += 1.0;
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(form: &QuadForm, m_max: usize, box_size: i128) -> Vec<u64> {
        let n = form.dim();
        let mut counts = vec![0u64; m_max + 1];
        let total = (2 * box_size + 1).pow(n as u32);
        for idx in 0..total {
            let mut rem = idx;
            let x: Vec<i128> = (0..n)
                .map(|_| {
                    let c = rem % (2 * box_size + 1) - box_size;
                    rem /= 2 * box_size + 1;
                    c
                })
                .collect();
            let v = form.eval(&x);
            if (v as usize) <= m_max {
                counts[v as usize] += 1;
            }
        }
        counts
    }

    #[test]
    fn sum_of_four_squares() {
        // r_4(n) = 8 * sum of divisors not divisible by 4.
        let f = QuadForm::new((0..4).map(|i| (0..4).map(|j| if i == j { 2 } else { 0 }).collect()).collect());
        let t = f.theta(30).unwrap();
        assert_eq!(t[0], 1);
        for m in 1..=30u64 {
            let s: u64 = (1..=m).filter(|d| m % d == 0 && d % 4 != 0).sum();
            assert_eq!(t[m as usize], 8 * s, "m={m}");
        }
    }

    #[test]
    fn vectors_match_counts() {
        let f = QuadForm::new(vec![vec![2, 1, 0], vec![1, 4, 1], vec![0, 1, 6]]);
        let t = f.theta(12).unwrap();
        let v = f.vectors(12).unwrap();
        for m in 1..=12 {
            assert_eq!(v.iter().filter(|(_, q)| *q == m as i128).count() as u64, t[m]);
        }
        for (x, q) in &v {
            assert_eq!(f.eval(x), *q);
        }
    }

    #[test]
    fn resource_guard() {
        let f = QuadForm::new(vec![vec![2, 0], vec![0, 2]]);
        assert!(matches!(f.theta_limited(1_000_000, 1e3), Err(Error::Resource(_))));
    }

    proptest! {
        #[test]
        fn agrees_with_box_search(a in 1i128..6, b in 1i128..6, c in 1i128..6, x in -2i128..3, y in -2i128..3, z in -2i128..3) {
            // Strict diagonal dominance keeps the form definite.
            let g = vec![
                vec![2 * a + 2 * (x.abs() + y.abs()), x, y],
                vec![x, 2 * b + 2 * (x.abs() + z.abs()), z],
                vec![y, z, 2 * c + 2 * (y.abs() + z.abs())],
            ];
            let f = QuadForm::new(g);
            let m = 10;
            // every vector of value <= 10 has coordinates bounded by 10
            let t = f.theta(m).unwrap();
            prop_assert_eq!(t.clone(), brute(&f, m, 10));
            prop_assert_eq!(t[0], 1);
            for c in &t[1..] {
                prop_assert_eq!(c % 2, 0);
            }
        }
    }
}
