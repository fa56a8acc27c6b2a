//! Hecke eigencomponents of `M(Õ)`, the lift vector `e_{f,O'}`, and the
//! central-value table for the level-`p²` Gross-type formula.

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{is_fundamental_discriminant, kronecker, legendre, primes_up_to};
use crate::brandt::ClassModule;
use crate::error::{invariant, Error, Result};
use crate::linalg::{big, big_rat, nullspace, primitive_integer, to_i128_vec};
use crate::lseries::{self, LValueEstimate};
use crate::quaternion::Rat;
use crate::theta::LiftData;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub eigen: f64,
    pub fit: f64,
    pub ratio: f64,
    pub zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eigen: 1e-10,
            fit: 1e-8,
            ratio: 1e-3,
            zero: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Eisenstein,
    /// `λ_q = (q/p)(q+1)`.
    TwistedEisenstein,
    /// Eigenvalues of a cusp form on the maximal order.
    Old,
    /// One-dimensional cuspidal: a level-`p` form twisted by a quadratic character.
    QuadraticTwist,
    /// Two-dimensional cuspidal: not a twist of a level-`p` form.
    New,
}

impl ComponentKind {
    pub fn is_cuspidal(self) -> bool {
        !matches!(self, ComponentKind::Eisenstein | ComponentKind::TwistedEisenstein)
    }
    pub fn name(self) -> &'static str {
        match self {
            ComponentKind::Eisenstein => "eisenstein",
            ComponentKind::TwistedEisenstein => "twisted-eisenstein",
            ComponentKind::Old => "old",
            ComponentKind::QuadraticTwist => "quadratic-twist",
            ComponentKind::New => "new",
        }
    }
}

#[derive(Clone, Debug)]
pub struct IsotypicComponent {
    pub primes: Vec<u64>,
    pub eigenvalues: Vec<f64>,
    pub exact_eigenvalues: Option<Vec<i128>>,
    /// Basis in class coordinates.
    pub basis: Vec<Vec<f64>>,
    pub exact_basis: Option<Vec<Vec<Rat>>>,
    pub kind: ComponentKind,
    /// For one-dimensional cuspidal components: eigenvalues equal
    /// `(q/p)·λ_q` of some cusp form on the maximal order.
    pub twist_of_maximal: bool,
}

impl IsotypicComponent {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn is_exact(&self) -> bool {
        self.exact_basis.is_some()
    }
    pub fn eigenvalue(&self, q: u64) -> Option<f64> {
        self.primes.iter().position(|&r| r == q).map(|i| self.eigenvalues[i])
    }

    /// `α_f = 1/2` for dimension 2 and `p/(2(p-1))` for dimension 1.
    pub fn alpha(&self, p: i128) -> Result<Rat> {
        match (self.kind, self.dim()) {
            (ComponentKind::New, 2) => Ok(Rat::new(1, 2)),
            (ComponentKind::QuadraticTwist, 1) => Ok(Rat::new(p, 2 * (p - 1))),
            (k, d) => Err(Error::InvalidInput(format!(
                "α is defined for level-p² newform components only (got {} of dimension {d})",
                k.name()
            ))),
        }
    }
}

fn generic_weight(k: usize) -> f64 {
    ((k as f64 + 1.0) * 0.618_033_988_749_895).fract() + 0.5
}

/// Simultaneous eigenspaces of `B_q` for primes `q ≤ bound` not dividing the
/// discriminant. `reference` (the maximal-order components) separates old
/// forms from new ones.
pub fn decompose(
    module: &ClassModule,
    p: i128,
    bound: u64,
    tol: f64,
    reference: Option<&[IsotypicComponent]>,
) -> Result<Vec<IsotypicComponent>> {
    let n = module.dim();
    let primes: Vec<u64> = primes_up_to(bound as usize)
        .into_iter()
        .filter(|&q| module.disc() % q as i128 != 0)
        .collect();
    if primes.is_empty() {
        return Err(Error::InvalidInput(format!("no Hecke primes up to {bound}")));
    }
    let all = module.brandt_matrices(*primes.last().unwrap())?;
    let mats: Vec<Vec<Vec<i128>>> = primes.iter().map(|&q| all[q as usize - 1].entries.clone()).collect();
    for a in 0..mats.len() {
        for b in a + 1..mats.len() {
            invariant!(
                crate::linalg::mat_mul(&mats[a], &mats[b]) == crate::linalg::mat_mul(&mats[b], &mats[a]),
                "B_{} and B_{} do not commute",
                primes[a],
                primes[b]
            );
        }
    }
    let w: Vec<f64> = module.heights().iter().map(|&h| h as f64).collect();
    let sq: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
    let sym: Vec<DMatrix<f64>> = mats
        .iter()
        .map(|m| DMatrix::from_fn(n, n, |j, i| sq[j] * m[j][i] as f64 / sq[i]))
        .collect();
    let mut generic = DMatrix::zeros(n, n);
    for (k, s) in sym.iter().enumerate() {
        generic += s * generic_weight(k);
    }
    let generic = (&generic + generic.transpose()) * 0.5;
    let eig = SymmetricEigen::new(generic);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(c) if (eig.eigenvalues[i] - eig.eigenvalues[*c.last().unwrap()]).abs() < 1e-7 * scale => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    let mut out = Vec::new();
    for c in clusters {
        let u = DMatrix::from_fn(n, c.len(), |r, k| eig.eigenvectors[(r, c[k])]);
        let mut lambdas = Vec::with_capacity(primes.len());
        for (k, s) in sym.iter().enumerate() {
            let proj = u.transpose() * s * &u;
            let lam = proj.trace() / c.len() as f64;
            let resid = (s * &u - &u * lam).norm();
            let qscale = 2.0 * (primes[k] as f64 + 1.0) * (n as f64).sqrt();
            if resid > tol.max(1e-9) * qscale * 1e3 {
                return Err(Error::Precision(format!(
                    "cluster of size {} is not a joint eigenspace (residual {resid:.3e} at q = {})",
                    c.len(),
                    primes[k]
                )));
            }
            lambdas.push(lam);
        }
        let basis: Vec<Vec<f64>> = (0..c.len())
            .map(|k| (0..n).map(|r| u[(r, k)] / sq[r]).collect())
            .collect();
        let integral = lambdas.iter().all(|l| (l - l.round()).abs() < 1e-6);
        let (exact_eigenvalues, exact_basis) = if integral {
            let lam: Vec<i128> = lambdas.iter().map(|l| l.round() as i128).collect();
            let mut rows: Vec<Vec<BigRational>> = Vec::new();
            for (m, l) in mats.iter().zip(&lam) {
                for j in 0..n {
                    rows.push((0..n).map(|i| big(m[j][i] - if i == j { *l } else { 0 })).collect());
                }
            }
            let ns = nullspace(&rows, n);
            invariant!(
                ns.len() == c.len(),
                "exact eigenspace has dimension {} but the numerical cluster has {}",
                ns.len(),
                c.len()
            );
            let vecs = ns
                .iter()
                .map(|v| {
                    to_i128_vec(&primitive_integer(v))
                        .map(|x| x.into_iter().map(Rat::from).collect::<Vec<_>>())
                        .ok_or_else(|| Error::Resource("eigenvector entries exceed 128 bits".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            (Some(lam), Some(vecs))
        } else {
            (None, None)
        };
        let basis = match &exact_basis {
            Some(b) => b.iter().map(|v| v.iter().map(|x| rat_f64(*x)).collect()).collect(),
            None => basis,
        };
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-6);
        let eis: Vec<f64> = primes.iter().map(|&q| q as f64 + 1.0).collect();
        let twisted: Vec<f64> = primes.iter().map(|&q| legendre(q as i128, p) as f64 * (q as f64 + 1.0)).collect();
        let ref_cusp: Vec<&IsotypicComponent> = reference
            .unwrap_or(&[])
            .iter()
            .filter(|r| r.kind.is_cuspidal())
            .collect();
        let ref_values = |r: &IsotypicComponent| -> Vec<f64> { primes.iter().map(|&q| r.eigenvalue(q).unwrap_or(f64::NAN)).collect() };
        let is_old = ref_cusp.iter().any(|r| close(&lambdas, &ref_values(r)));
        let twist_of_maximal = ref_cusp.iter().any(|r| {
            let tw: Vec<f64> = ref_values(r)
                .iter()
                .zip(&primes)
                .map(|(l, &q)| l * legendre(q as i128, p) as f64)
                .collect();
            close(&lambdas, &tw)
        });
        let kind = if close(&lambdas, &eis) {
            ComponentKind::Eisenstein
        } else if close(&lambdas, &twisted) {
            ComponentKind::TwistedEisenstein
        } else if is_old {
            ComponentKind::Old
        } else if c.len() == 1 {
            ComponentKind::QuadraticTwist
        } else if c.len() == 2 {
            ComponentKind::New
        } else {
            return Err(Error::Invariant(format!(
                "cuspidal component of dimension {} (expected 1 or 2)",
                c.len()
            )));
        };
        out.push(IsotypicComponent {
            primes: primes.clone(),
            eigenvalues: lambdas,
            exact_eigenvalues,
            basis,
            exact_basis,
            kind,
            twist_of_maximal: c.len() == 1 && twist_of_maximal,
        });
    }
    let dims: usize = out.iter().map(|c| c.dim()).sum();
    invariant!(dims == n, "component dimensions sum to {dims}, not {n}");
    out.sort_by(|a, b| {
        let rank = |k: ComponentKind| match k {
            ComponentKind::Eisenstein => 0,
            ComponentKind::TwistedEisenstein => 1,
            _ => 2,
        };
        rank(a.kind).cmp(&rank(b.kind)).then_with(|| {
            a.eigenvalues
                .iter()
                .zip(&b.eigenvalues)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    Ok(out)
}

pub(crate) fn rat_f64(x: Rat) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Prime eigenvalues `λ_q` for all primes `q ≤ n_max` from one row of the
/// Brandt matrices applied to a component vector.
pub fn prime_eigenvalues(module: &ClassModule, comp: &IsotypicComponent, n_max: usize) -> Result<Vec<(u64, f64)>> {
    let v = &comp.basis[0];
    let i = (0..v.len())
        .max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()))
        .ok_or_else(|| Error::InvalidInput("empty component".into()))?;
    let table = module.representation_counts(n_max)?;
    let wi = module.heights()[i] as f64;
    Ok(primes_up_to(n_max)
        .into_iter()
        .map(|q| {
            let s: f64 = (0..v.len())
                .map(|j| table[i][j][q as usize] as f64 / (2.0 * wi) * v[j])
                .sum();
            (q, s / v[i])
        })
        .collect())
}

/// `a_1, …, a_{n_max}` of the newform attached to a cuspidal component, with
/// `a_{p^k} = 0`.
pub fn an_sequence(module: &ClassModule, comp: &IsotypicComponent, p: i128, n_max: usize) -> Result<Vec<f64>> {
    if !comp.kind.is_cuspidal() {
        return Err(Error::InvalidInput("a_n requested for an Eisenstein component".into()));
    }
    let lam = prime_eigenvalues(module, comp, n_max)?;
    let mut values = vec![0.0; n_max + 1];
    for (q, l) in lam {
        values[q as usize] = l;
    }
    for (q, l) in comp.primes.iter().zip(&comp.eigenvalues) {
        if (values[*q as usize] - l).abs() > 1e-6 {
            return Err(Error::Invariant(format!("λ_{q} differs between the component and the row evaluation")));
        }
    }
    values[p as usize] = 0.0;
    let exact = comp.exact_eigenvalues.is_some();
    if exact {
        for v in values.iter_mut() {
            *v = v.round();
        }
    }
    Ok(lseries::extend_multiplicative(&|q| values[q], &[p as usize], n_max))
}

/// `e_{f,O'}` and whether the lift of the component vanishes.
#[derive(Clone, Debug)]
pub struct LiftVector {
    pub exact: Option<Vec<Rat>>,
    pub float: Vec<f64>,
    pub zero: bool,
    pub kernel_dim: usize,
    pub depth: usize,
}

impl LiftVector {
    /// `c(d) = ½ Σ r_d(Q_i) e_i` for `d ≤ depth`.
    pub fn coefficients(&self, lift: &LiftData) -> Result<(Vec<f64>, Option<Vec<Rat>>)> {
        let rows = lift.coefficient_rows(self.depth)?;
        let float = rows
            .iter()
            .map(|r| 0.5 * r.iter().zip(&self.float).map(|(a, x)| *a as f64 * x).sum::<f64>())
            .collect();
        let exact = self.exact.as_ref().map(|e| {
            rows.iter()
                .map(|r| r.iter().zip(e).fold(Rat::zero(), |acc, (a, x)| acc + *x * Rat::from(*a)) / Rat::from(2))
                .collect()
        });
        Ok((float, exact))
    }
}

fn kernel_exact(rows: &[Vec<i128>], basis: &[Vec<Rat>]) -> Vec<Vec<BigRational>> {
    let k = basis.len();
    let m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            (0..k)
                .map(|c| r.iter().zip(&basis[c]).fold(BigRational::zero(), |acc, (a, x)| acc + big(*a) * big_rat(*x)))
                .collect()
        })
        .collect();
    nullspace(&m, k)
}

fn normalize_float(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let first = v.iter().find(|x| x.abs() > 1e-9 * max).copied().unwrap_or(1.0);
    let s = first.signum() / max;
    v.iter_mut().for_each(|x| *x *= s);
}

/// Kernel of `v ↦ Θ^Õ_{O'}(v)` on the component to `depth` (checked stable at
/// `2·depth`), and the height-orthogonal complement of the kernel.
pub fn e_f_vector(
    module: &ClassModule,
    comp: &IsotypicComponent,
    lift: &LiftData,
    depth: usize,
) -> Result<LiftVector> {
    let k = comp.dim();
    let w = module.heights();
    if let Some(basis) = &comp.exact_basis {
        let ker = kernel_exact(&lift.coefficient_rows(depth)?, basis);
        let ker2 = kernel_exact(&lift.coefficient_rows(2 * depth)?, basis);
        if ker.len() != ker2.len() {
            return Err(Error::Precision(format!(
                "lift kernel dimension changes from {} to {} when doubling depth {depth}",
                ker.len(),
                ker2.len()
            )));
        }
        let combine = |x: &[BigRational]| -> Vec<BigRational> {
            (0..basis[0].len())
                .map(|i| (0..k).fold(BigRational::zero(), |acc, c| acc + &x[c] * big_rat(basis[c][i])))
                .collect()
        };
        let (vec, zero) = if ker.len() == k {
            let mut x = vec![BigRational::zero(); k];
            x[0] = big(1);
            (combine(&x), true)
        } else if ker.len() + 1 == k {
            let g: Vec<Vec<BigRational>> = ker
                .iter()
                .map(|kv| {
                    let kvec = combine(kv);
                    (0..k)
                        .map(|c| {
                            (0..kvec.len()).fold(BigRational::zero(), |acc, i| {
                                acc + &kvec[i] * big_rat(basis[c][i]) * big(w[i])
                            })
                        })
                        .collect()
                })
                .collect();
            let x = nullspace(&g, k);
            invariant!(x.len() == 1, "orthogonal complement of the lift kernel is not a line");
            (combine(&x[0]), false)
        } else {
            return Err(Error::Invariant(format!(
                "lift has rank {} on a component (at most 1 expected)",
                k - ker.len()
            )));
        };
        let ints = to_i128_vec(&primitive_integer(&vec))
            .ok_or_else(|| Error::Resource("e_f entries exceed 128 bits".into()))?;
        let exact: Vec<Rat> = ints.into_iter().map(Rat::from).collect();
        let float = exact.iter().map(|x| rat_f64(*x)).collect();
        return Ok(LiftVector {
            exact: Some(exact),
            float,
            zero,
            kernel_dim: ker.len(),
            depth,
        });
    }
    let n = module.dim();
    let v = DMatrix::from_fn(n, k, |i, c| comp.basis[c][i]);
    let rank_at = |d: usize| -> Result<(usize, DMatrix<f64>)> {
        let rows = lift.coefficient_rows(d)?;
        let r = DMatrix::from_fn(rows.len(), n, |a, b| rows[a][b] as f64);
        let m = &r * &v;
        let svd = m.svd(false, true);
        let scale = r.norm().max(1.0) * v.norm().max(1.0);
        let rank = svd.singular_values.iter().filter(|s| **s > 1e-8 * scale).count();
        let vt = svd.v_t.ok_or_else(|| Error::Precision("SVD failed".into()))?;
        Ok((rank, vt))
    };
    let (rank, vt) = rank_at(depth)?;
    let (rank2, _) = rank_at(2 * depth)?;
    if rank != rank2 {
        return Err(Error::Precision(format!(
            "lift rank changes from {rank} to {rank2} when doubling depth {depth}"
        )));
    }
    let mut e = match rank {
        0 => comp.basis[0].clone(),
        1 if k == 1 => comp.basis[0].clone(),
        1 => {
            let wdiag = DMatrix::from_fn(n, n, |i, j| if i == j { w[i] as f64 } else { 0.0 });
            let kern = DMatrix::from_fn(k, k - 1, |c, r| vt[(r + 1, c)]);
            let g = (&v * kern).transpose() * &wdiag * &v;
            (&v * g_nullvector(&g)).iter().copied().collect()
        }
        r => {
            return Err(Error::Invariant(format!("lift has rank {r} on a component (at most 1 expected)")));
        }
    };
    normalize_float(&mut e);
    Ok(LiftVector {
        exact: None,
        float: e,
        zero: rank == 0,
        kernel_dim: k - rank,
        depth,
    })
}

fn g_nullvector(g: &DMatrix<f64>) -> nalgebra::DVector<f64> {
    let k = g.ncols();
    let sq = g.transpose() * g;
    let eig = SymmetricEigen::new(sq);
    let i = (0..k)
        .min_by(|&a, &b| eig.eigenvalues[a].abs().total_cmp(&eig.eigenvalues[b].abs()))
        .unwrap_or(0);
    eig.eigenvectors.column(i).into_owned()
}

/// Vanishing conditions for the lift of a level-`p²` newform.
#[derive(Clone, Debug)]
pub struct Conditions {
    pub alpha: Rat,
    pub epsilon_f: i32,
    pub l_f: LValueEstimate,
    pub pstar_twist: LValueEstimate,
    /// `f ⊗ p*` has level `p` and `ε(f, p*) = (-1/p)·σ`.
    pub cond_a: bool,
    /// `f ⊗ p*` has level `p²` and `ε(f, p*) = (-1/p)`.
    pub cond_b: bool,
}

impl Conditions {
    /// Whether the lift is forced to vanish.
    pub fn predicts_zero(&self) -> bool {
        self.epsilon_f == 1 && (self.cond_a || self.cond_b)
    }
}

/// `p* = (-1/p)·p`.
pub fn pstar(p: i128) -> i128 {
    legendre(-1, p) as i128 * p
}

pub fn alpha_and_conditions(comp: &IsotypicComponent, a: &[f64], p: i128, sigma: i32, tol: f64) -> Result<Conditions> {
    let alpha = comp.alpha(p)?;
    let l_f = lseries::central_value(a, (p * p) as u128, tol)?;
    let ps = pstar(p);
    let pstar_twist = lseries::twisted_value(a, p as u64, ps, tol)?;
    let m1 = legendre(-1, p);
    let level_p = pstar_twist.conductor == p as u128;
    let cond_a = level_p && pstar_twist.epsilon == m1 * sigma;
    let cond_b = !level_p && pstar_twist.epsilon == m1;
    Ok(Conditions {
        alpha,
        epsilon_f: l_f.epsilon,
        l_f,
        pstar_twist,
        cond_a,
        cond_b,
    })
}

/// `d ≤ d_max` with `-pd` fundamental and `(d/p) = σ`.
pub fn admissible(p: i128, sigma: i32, d_max: i128) -> Vec<i128> {
    (1..=d_max)
        .filter(|&d| is_fundamental_discriminant(-p * d) && kronecker(d, p) == sigma)
        .collect()
}

#[derive(Clone, Debug)]
pub struct GrossRow {
    pub d: i128,
    pub c: f64,
    pub c_exact: Option<Rat>,
    pub l_value: LValueEstimate,
    /// `L(f, -pd, 1)·√(pd) / c(d)²` when `c(d) ≠ 0`.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Pass,
    Fail(String),
    Inconclusive(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail(_) => "fail",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GrossReport {
    pub sigma: i32,
    pub lift: LiftVector,
    pub coefficients: Vec<f64>,
    pub exact_coefficients: Option<Vec<Rat>>,
    pub rows: Vec<GrossRow>,
    /// Mean of the ratio column over rows with `c(d) ≠ 0`.
    pub constant: Option<f64>,
    pub spread: Option<f64>,
    pub verdict: Verdict,
}

/// Gross-formula table for one component and one level-`p²` order.
#[allow(clippy::too_many_arguments)]
pub fn gross_table(
    module: &ClassModule,
    comp: &IsotypicComponent,
    lift: &LiftData,
    a: &[f64],
    l_f: &LValueEstimate,
    p: i128,
    d_max: i128,
    depth: usize,
    tol: &Tolerances,
) -> Result<GrossReport> {
    let depth = depth.max(d_max as usize);
    let ef = e_f_vector(module, comp, lift, depth)?;
    let (coeffs, exact) = ef.coefficients(lift)?;
    let ds = admissible(p, lift.sigma, d_max);
    let cmax = coeffs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let is_zero = |d: i128| -> bool {
        match &exact {
            Some(e) => e[d as usize].is_zero(),
            None => coeffs[d as usize].abs() <= 1e-6 * cmax.max(1e-300),
        }
    };
    let rows = ds
        .par_iter()
        .map(|&d| {
            let l_value = lseries::twisted_value(a, p as u64, -p * d, tol.fit)?;
            let c = coeffs[d as usize];
            let ratio = (!ef.zero && !is_zero(d)).then(|| l_value.value * ((p * d) as f64).sqrt() / (c * c));
            Ok(GrossRow {
                d,
                c,
                c_exact: exact.as_ref().map(|e| e[d as usize]),
                l_value,
                ratio,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let (constant, spread) = if ratios.is_empty() {
        (None, None)
    } else {
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let spread = ratios.iter().fold(0.0f64, |m, r| m.max((r - mean).abs())) / mean.abs();
        (Some(mean), Some(spread))
    };
    let verdict = if ef.zero {
        let bad: Vec<i128> = rows
            .iter()
            .filter(|r| (r.l_value.value * l_f.value).abs() >= tol.zero)
            .map(|r| r.d)
            .collect();
        if rows.is_empty() {
            Verdict::Inconclusive("no admissible d".into())
        } else if bad.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail(format!("zero lift but L(f,1)·L(f,-pd,1) ≠ 0 at d = {bad:?}"))
        }
    } else {
        let mismatch: Vec<i128> = rows
            .iter()
            .filter(|r| is_zero(r.d) != (r.l_value.value.abs() < tol.zero))
            .map(|r| r.d)
            .collect();
        if !mismatch.is_empty() {
            Verdict::Fail(format!("c(d) = 0 and L(f,-pd,1) = 0 disagree at d = {mismatch:?}"))
        } else if ratios.len() < 3 {
            Verdict::Inconclusive(format!("only {} rows with c(d) ≠ 0", ratios.len()))
        } else if spread.unwrap() <= tol.ratio {
            Verdict::Pass
        } else {
            Verdict::Fail(format!("ratio spread {:.3e} exceeds {:.1e}", spread.unwrap(), tol.ratio))
        }
    };
    Ok(GrossReport {
        sigma: lift.sigma,
        lift: ef,
        coefficients: coeffs,
        exact_coefficients: exact,
        rows,
        constant,
        spread,
        verdict,
    })
}

/// Largest conductor among the twists used by [`gross_table`] and the
/// conditions: `p²·d_max²`.
pub fn coefficients_needed(p: i128, d_max: i128) -> usize {
    let m = d_max.max(1) as u128;
    lseries::terms_needed((p * p) as u128 * m * m)
}
