//! Ternary forms on orders, special-point vectors `e_d`, and the theta maps
//! of weight 2 and weight 3/2 (including the level-`p²` lift).

use std::sync::{Arc, RwLock};

use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{gcd, kronecker};
use crate::brandt::ClassModule;
use crate::enumerate::QuadForm;
use crate::error::{invariant, Error, Result};
use crate::hnf::hnf;
use crate::lattice::{rho_generators, Lattice, LeftIdeal, Order};
use crate::orders::{ClassTower, LevelP2Order};
use crate::quaternion::{Quat, Rat};

/// `Q(x) = -Δ(x)/ω` on `O/Z`, realised on `ρ(O) = {x - x̄}` as `N(y)/ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryForm {
    pub form: QuadForm,
    pub basis: [Quat; 3],
    pub omega: i128,
    pub level: i128,
    /// `det(G)/2` for the even Gram matrix `G`.
    pub disc: i128,
}

impl TernaryForm {
    pub fn of_order(order: &Lattice) -> Result<TernaryForm> {
        let alg = order.algebra();
        let gens = rho_generators(order);
        let den = gens.iter().fold(1, |d, g| crate::arith::lcm(d, g.denominator()));
        let rows: Vec<Vec<i128>> = gens
            .iter()
            .map(|g| {
                let n = g.scale_int(den).numerators();
                let s = g.scale_int(den).denominator();
                vec![n[1] / s, n[2] / s, n[3] / s]
            })
            .collect();
        let h = hnf(&rows, 3)?;
        invariant!(h.len() == 3, "ρ(O) does not have rank 3");
        let basis: [Quat; 3] = std::array::from_fn(|r| alg.elt([0, h[r][0], h[r][1], h[r][2]], den));
        let omega = crate::lattice::norm_gcd(&basis);
        invariant!(omega.is_integer(), "ω = {omega} is not integral");
        let omega = omega.to_integer();
        let mut gram = vec![vec![0i128; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                let t = (basis[r] * basis[c].conj()).reduced_trace() / Rat::from(omega);
                invariant!(t.is_integer(), "ternary Gram entry {t} is not integral");
                gram[r][c] = t.to_integer();
            }
        }
        let content = (0..3).fold(0, |a, i| {
            (0..3).fold(a, |a, j| gcd(a, if i == j { gram[i][i] / 2 } else { gram[i][j] }))
        });
        invariant!(content == 1, "ternary form is not primitive");
        let det = det3(&gram);
        invariant!(det > 0 && det % 2 == 0, "ternary Gram determinant {det} is not positive even");
        let level = level_of(&gram, det);
        Ok(TernaryForm {
            form: QuadForm::new(gram),
            basis,
            omega,
            level,
            disc: det / 2,
        })
    }

    pub fn gram(&self) -> &[Vec<i128>] {
        self.form.gram()
    }

    /// `r_0, …, r_n_max`: counts of special points of discriminant `-nω`.
    pub fn theta(&self, n_max: usize) -> Result<Vec<u64>> {
        self.form.theta(n_max)
    }
}

pub(crate) fn det3(g: &[Vec<i128>]) -> i128 {
    g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
}

fn adjugate3(g: &[Vec<i128>]) -> [[i128; 3]; 3] {
    let m = |r: usize, c: usize| {
        let rs: Vec<usize> = (0..3).filter(|&x| x != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&x| x != c).collect();
        g[rs[0]][cs[0]] * g[rs[1]][cs[1]] - g[rs[0]][cs[1]] * g[rs[1]][cs[0]]
    };
    std::array::from_fn(|i| std::array::from_fn(|j| if (i + j) % 2 == 0 { m(j, i) } else { -m(j, i) }))
}

/// Least `N` with `N·G⁻¹` integral with even diagonal.
fn level_of(g: &[Vec<i128>], det: i128) -> i128 {
    let adj = adjugate3(g);
    let bound = 4 * det;
    (1..=bound)
        .filter(|n| bound % n == 0)
        .find(|&n| {
            (0..3).all(|i| {
                (0..3).all(|j| {
                    let v = n * adj[i][j];
                    v % det == 0 && (i != j || (v / det) % 2 == 0)
                })
            })
        })
        .unwrap_or(bound)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Two,
    ThreeHalves,
}

/// Truncated `q`-expansion `Σ c_n qⁿ`, `n ≤ depth`, with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    pub weight: Weight,
    pub level: i128,
    /// Modulus `D` of the character `n ↦ (D/n)`; 1 for trivial.
    pub character: i128,
    pub coeffs: Vec<Rat>,
}

impl QExpansion {
    pub fn depth(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Default expansion depth `⌈(3/4) p (p+1)⌉`.
pub fn default_depth(p: i128) -> usize {
    ((3 * p * (p + 1) + 3) / 4) as usize
}

/// Ternary forms of the right orders of a class set, with a shared table of
/// representation numbers.
#[derive(Debug)]
pub struct ThetaData {
    pub forms: Vec<TernaryForm>,
    pub omega: i128,
    pub level: i128,
    counts: RwLock<(usize, Arc<Vec<Vec<u64>>>)>,
}

impl ThetaData {
    pub fn from_ideals(ideals: &[LeftIdeal]) -> Result<ThetaData> {
        let forms = ideals
            .par_iter()
            .map(|a| TernaryForm::of_order(&a.lattice().side_order(crate::lattice::Side::Right)))
            .collect::<Result<Vec<_>>>()?;
        let first = forms
            .first()
            .ok_or_else(|| Error::InvalidInput("empty class set".into()))?;
        let (omega, level, disc) = (first.omega, first.level, first.disc);
        for f in &forms {
            invariant!(
                f.omega == omega && f.level == level && f.disc == disc,
                "ternary forms of one class set are not in one genus"
            );
        }
        Ok(ThetaData {
            forms,
            omega,
            level,
            counts: RwLock::new((0, Arc::new(Vec::new()))),
        })
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// `r_n(Q_i)` for `n ≤ n_max`, per class.
    pub fn counts(&self, n_max: usize) -> Result<Arc<Vec<Vec<u64>>>> {
        {
            let c = self.counts.read().expect("counts lock");
            if c.0 >= n_max && !c.1.is_empty() {
                return Ok(c.1.clone());
            }
        }
        let target = {
            let c = self.counts.read().expect("counts lock");
            n_max.max(2 * c.0)
        };
        let fresh = self
            .forms
            .par_iter()
            .map(|f| f.theta(target))
            .collect::<Result<Vec<_>>>()?;
        let fresh = Arc::new(fresh);
        let mut c = self.counts.write().expect("counts lock");
        if c.0 < target || c.1.is_empty() {
            *c = (target, fresh.clone());
        }
        Ok(fresh)
    }

    /// `e_d` as the functional `[a_i] ↦ a_d([a_i])`.
    pub fn special_vector(&self, d: i128) -> Result<Vec<i128>> {
        if d < 0 {
            return Err(Error::InvalidInput(format!("negative discriminant index {d}")));
        }
        let n = self.len();
        if d % self.omega != 0 || (-d).rem_euclid(4) > 1 {
            return Ok(vec![0; n]);
        }
        let m = (d / self.omega) as usize;
        let c = self.counts(m)?;
        Ok(c.iter().map(|r| r[m] as i128).collect())
    }

    /// `Θ(v) = ½ Σ ⟨e_{nω}, v⟩ qⁿ`.
    pub fn theta32(&self, v: &[Rat], depth: usize) -> Result<QExpansion> {
        if v.len() != self.len() {
            return Err(Error::InvalidInput("vector length differs from class count".into()));
        }
        let c = self.counts(depth)?;
        let coeffs = (0..=depth)
            .map(|n| {
                v.iter()
                    .zip(c.iter())
                    .fold(Rat::zero(), |acc, (x, r)| acc + *x * Rat::from(r[n] as i128))
                    / Rat::from(2)
            })
            .collect();
        Ok(QExpansion {
            weight: Weight::ThreeHalves,
            level: self.level,
            character: self.omega,
            coeffs,
        })
    }
}

/// Special-point data on the classes of `M(O)` themselves.
pub fn theta_data(module: &ClassModule) -> Result<ThetaData> {
    ThetaData::from_ideals(&module.classes().reps)
}

/// `φ(v, w) = Σ ⟨v, t_m w⟩ q^m` for a functional `v` (values on classes) and
/// a vector `w`.
pub fn phi2(module: &ClassModule, v: &[Rat], w: &[Rat], depth: usize) -> Result<QExpansion> {
    let n = module.dim();
    if v.len() != n || w.len() != n {
        return Err(Error::InvalidInput("vector length differs from module dimension".into()));
    }
    let eval = |x: &[Rat]| v.iter().zip(x).fold(Rat::zero(), |a, (f, y)| a + *f * *y);
    let mut coeffs = vec![eval(&module.t0(w))];
    if depth > 0 {
        for b in module.brandt_matrices(depth as u64)? {
            coeffs.push(eval(&b.apply(w)));
        }
    }
    Ok(QExpansion {
        weight: Weight::Two,
        level: module.classes().order.twolevel(),
        character: 1,
        coeffs,
    })
}

/// The level-`p²` lift `Θ^Õ_{O'}`: per Õ-class the ternary form of one
/// subideal under it, so that `c(d)` sits at exponent `d` (discriminant `-pd`).
#[derive(Debug)]
pub struct LiftData {
    pub sigma: i32,
    pub data: ThetaData,
}

impl LiftData {
    pub fn new(ct: &ClassTower, target: &LevelP2Order) -> Result<LiftData> {
        let subs = ct.subideal_per_class(target)?;
        let data = ThetaData::from_ideals(&subs)?;
        invariant!(data.omega == ct.tower.p, "ω(O') = {} differs from p", data.omega);
        Ok(LiftData {
            sigma: target.sigma,
            data,
        })
    }

    pub fn theta_p2(&self, v: &[Rat], depth: usize) -> Result<QExpansion> {
        let mut e = self.data.theta32(v, depth)?;
        e.character = self.data.omega;
        Ok(e)
    }

    /// Lift coefficients as integer rows: `rows[n][i] = r_n(Q_i)`, so that
    /// `c(n) = ½ Σ_i rows[n][i] v_i`.
    pub fn coefficient_rows(&self, depth: usize) -> Result<Vec<Vec<i128>>> {
        let c = self.data.counts(depth)?;
        Ok((0..=depth)
            .map(|n| c.iter().map(|r| r[n] as i128).collect())
            .collect())
    }
}

/// `e_d∘B_q - (e_{dq²} + (-d|q) e_d + q e_{d/q²})`, zero when the identity holds.
pub fn edhecke_defect(module: &ClassModule, theta: &ThetaData, d: i128, q: u64) -> Result<Vec<i128>> {
    let b = module.brandt_matrix(q)?;
    let n = module.dim();
    let qi = q as i128;
    let ed = theta.special_vector(d)?;
    let lhs: Vec<i128> = (0..n).map(|i| (0..n).map(|j| ed[j] * b.entries[j][i]).sum()).collect();
    let big = theta.special_vector(d * qi * qi)?;
    let small = if d % (qi * qi) == 0 {
        theta.special_vector(d / (qi * qi))?
    } else {
        vec![0; n]
    };
    let k = kronecker(-d, qi) as i128;
    Ok((0..n).map(|i| lhs[i] - big[i] - k * ed[i] - qi * small[i]).collect())
}

/// Theta series of an order's ternary form, for primitivity checks.
pub fn order_theta(order: &Order, n_max: usize) -> Result<Vec<u64>> {
    TernaryForm::of_order(order.lattice())?.theta(n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::z_plus_p;

    #[test]
    fn ternary_invariants_p7() {
        let ct = ClassTower::new(7).unwrap();
        let t = TernaryForm::of_order(ct.tower.tilde.lattice()).unwrap();
        assert_eq!(t.omega, 7);
        assert_eq!(t.level, 28);
        assert_eq!(t.level, ct.tower.tilde.level());
        let o = ct.tower.canonical(1).unwrap();
        let t2 = TernaryForm::of_order(o.order.lattice()).unwrap();
        assert_eq!((t2.omega, t2.level), (7, 196));
        for b in [2, 3] {
            let sub = z_plus_p(ct.tower.tilde.lattice(), b);
            let ts = TernaryForm::of_order(&sub).unwrap();
            assert_eq!(ts.theta(40).unwrap(), t.theta(40).unwrap());
        }
    }

    #[test]
    fn theta_and_phi_p7() {
        let ct = ClassTower::new(7).unwrap();
        let module = ClassModule::new(ct.tilde.clone()).unwrap();
        let td = theta_data(&module).unwrap();
        let th = td.theta32(&module.class_vector(0), 20).unwrap();
        assert_eq!(th.coeffs[0], Rat::new(1, 2));
        assert_eq!((th.level, th.character), (28, 7));
        let phi = phi2(&module, &module.class_vector(0), &module.class_vector(0), 10).unwrap();
        assert_eq!(phi.coeffs[0], Rat::new(1, 2));
        assert_eq!(phi.coeffs[1], Rat::from(1));
        for q in [2, 3, 5] {
            for d in 0..=60i128 {
                if (-d).rem_euclid(4) <= 1 {
                    assert!(edhecke_defect(&module, &td, d, q).unwrap().iter().all(|&x| x == 0), "d={d} q={q}");
                }
            }
        }
    }
}
