//! Full-rank lattices in a quaternion algebra, orders and left ideals.
//!
//! A [`Lattice`] is stored canonically: an integer HNF basis of `den·L`
//! together with the least positive `den` making it integral. Two
//! constructions of the same Z-span therefore compare equal, and the derived
//! `Ord` gives the lexicographic order used to pick canonical representatives.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::arith::{exact_sqrt, gcd, lcm};
use crate::enumerate::QuadForm;
use crate::error::{invariant, Error, Result};
use crate::hnf::{hnf, solve_in_hnf};
use crate::quaternion::{mul_num, Quat, QuaternionAlgebra, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    den: i128,
    rows: [[i128; 4]; 4],
    alg: QuaternionAlgebra,
}

impl Lattice {
    pub fn from_generators(gens: &[Quat]) -> Result<Lattice> {
        let alg = gens
            .first()
            .ok_or_else(|| Error::InvalidInput("no generators".into()))?
            .algebra();
        let den = gens.iter().fold(1, |d, g| lcm(d, g.denominator()));
        let int_rows: Vec<Vec<i128>> = gens
            .iter()
            .map(|g| {
                if g.algebra() != alg {
                    panic!("mixed algebras in lattice generators");
                }
                let s = den / g.denominator();
                g.numerators().iter().map(|x| x * s).collect()
            })
            .collect();
        Self::from_int_rows(alg, den, &int_rows)
    }

    fn from_int_rows(alg: QuaternionAlgebra, den: i128, rows: &[Vec<i128>]) -> Result<Lattice> {
        let h = hnf(rows, 4)?;
        let g = h.iter().flatten().fold(den, |g, &x| gcd(g, x));
        let mut out = [[0i128; 4]; 4];
        for (r, row) in h.iter().enumerate() {
            for c in 0..4 {
                out[r][c] = row[c] / g;
            }
        }
        Ok(Lattice {
            den: den / g,
            rows: out,
            alg,
        })
    }

    pub fn algebra(&self) -> QuaternionAlgebra {
        self.alg
    }
    pub fn denominator(&self) -> i128 {
        self.den
    }
    pub fn hnf_rows(&self) -> &[[i128; 4]; 4] {
        &self.rows
    }

    pub fn basis(&self) -> [Quat; 4] {
        std::array::from_fn(|r| Quat::new(self.alg, self.rows[r], self.den))
    }

    /// Basis as rational matrix rows, `(1,i,j,k)` coordinates.
    pub fn rational_rows(&self) -> [[Rat; 4]; 4] {
        std::array::from_fn(|r| std::array::from_fn(|c| Rat::new(self.rows[r][c], self.den)))
    }

    /// Integer coordinates of `x` in this basis, if `x` lies in the lattice.
    pub fn integer_coords(&self, x: &Quat) -> Option<[i128; 4]> {
        let scaled = x.coords().map(|c| c * Rat::from_integer(self.den));
        if scaled.iter().any(|c| !c.is_integer()) {
            return None;
        }
        let v: Vec<i128> = scaled.iter().map(|c| c.to_integer()).collect();
        let rows: Vec<Vec<i128>> = self.rows.iter().map(|r| r.to_vec()).collect();
        solve_in_hnf(&rows, &v).map(|y| [y[0], y[1], y[2], y[3]])
    }

    /// Rational coordinates of any element in this basis.
    pub fn rational_coords(&self, x: &Quat) -> [Rat; 4] {
        let mut rem = x.coords().map(|c| c * Rat::from_integer(self.den));
        let mut y = [Rat::zero(); 4];
        for c in 0..4 {
            y[c] = rem[c] / Rat::from_integer(self.rows[c][c]);
            for k in c..4 {
                rem[k] -= y[c] * Rat::from_integer(self.rows[c][k]);
            }
        }
        y
    }

    pub fn contains(&self, x: &Quat) -> bool {
        self.integer_coords(x).is_some()
    }

    pub fn is_subset_of(&self, other: &Lattice) -> bool {
        self.basis().iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut gens = self.basis().to_vec();
        gens.extend(other.basis());
        Lattice::from_generators(&gens).expect("sum of full-rank lattices")
    }

    /// Z-span of the 16 pairwise basis products.
    pub fn product(&self, other: &Lattice) -> Lattice {
        let den = self.den * other.den;
        let mut rows = Vec::with_capacity(16);
        for x in &self.rows {
            for y in &other.rows {
                rows.push(mul_num(self.alg, x, y).to_vec());
            }
        }
        Lattice::from_int_rows(self.alg, den, &rows).expect("product of full-rank lattices")
    }

    pub fn scale(&self, r: Rat) -> Lattice {
        let gens: Vec<Quat> = self.basis().iter().map(|b| b.scale(r)).collect();
        Lattice::from_generators(&gens).expect("nonzero scaling")
    }

    pub fn conj(&self) -> Lattice {
        let gens: Vec<Quat> = self.basis().iter().map(|b| b.conj()).collect();
        Lattice::from_generators(&gens).unwrap()
    }

    pub fn right_mul(&self, y: &Quat) -> Lattice {
        let gens: Vec<Quat> = self.basis().iter().map(|b| *b * *y).collect();
        Lattice::from_generators(&gens).expect("right multiplication by a unit")
    }

    /// `N(a) = gcd{N(x) : x ∈ a}` via norms and polarised cross terms.
    pub fn norm(&self) -> Rat {
        norm_gcd(&self.basis())
    }

    /// Covolume relative to `Z<1,i,j,k>` (absolute determinant of the basis).
    pub fn volume(&self) -> Rat {
        let d: i128 = (0..4).map(|i| self.rows[i][i]).product();
        Rat::new(d, self.den.pow(4))
    }

    /// `[self : sub]` for `sub ⊆ self`.
    pub fn index_of(&self, sub: &Lattice) -> Rat {
        sub.volume() / self.volume()
    }

    /// Bilinear Gram matrix `tr(b_i b̄_j) / N(a)` of the normalised norm form.
    pub fn normalized_gram(&self) -> [[Rat; 4]; 4] {
        let n = self.norm();
        let b = self.basis();
        std::array::from_fn(|i| {
            std::array::from_fn(|j| (b[i] * b[j].conj()).reduced_trace() / n)
        })
    }

    /// Normalised Gram and `disc(a)`, the positive square root of its determinant.
    pub fn gram_disc(&self) -> Result<([[Rat; 4]; 4], i128)> {
        let g = self.normalized_gram();
        let det = det4(&g);
        invariant!(det.is_integer(), "form determinant {det} not integral");
        let d = exact_sqrt(det.to_integer()).ok_or_else(|| {
            Error::Invariant(format!("form determinant {det} is not a square"))
        })?;
        Ok((g, d))
    }

    /// Integral quadratic form `N(x)/scale` on this lattice.
    pub fn norm_form(&self, scale: Rat) -> Result<QuadForm> {
        let b = self.basis();
        let mut gram = vec![vec![0i128; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let v = (b[i] * b[j].conj()).reduced_trace() / scale;
                invariant!(v.is_integer(), "norm form not integral on lattice");
                gram[i][j] = v.to_integer();
            }
        }
        Ok(QuadForm::new(gram))
    }

    /// `{x : a·x ⊆ a}` for `Side::Right`, `{x : x·a ⊆ a}` for `Side::Left`.
    pub fn side_order(&self, side: Side) -> Lattice {
        multiplier_lattice(self, self, side)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `{x : g·x ∈ target for g ∈ gens}` (`Right`) or `{x : x·g ∈ target}` (`Left`),
/// as the dual of the lattice of linear forms expressing membership.
pub fn multiplier_lattice(gens: &Lattice, target: &Lattice, side: Side) -> Lattice {
    let alg = gens.alg;
    let e: [Quat; 4] = [alg.one(), alg.i(), alg.j(), alg.k()];
    let mut forms: Vec<[Rat; 4]> = Vec::with_capacity(16);
    for g in gens.basis() {
        // column t of the map x -> coords_target(g x)
        let images: Vec<[Rat; 4]> = e
            .iter()
            .map(|ek| {
                let prod = match side {
                    Side::Right => g * *ek,
                    Side::Left => *ek * g,
                };
                target.rational_coords(&prod)
            })
            .collect();
        for t in 0..4 {
            forms.push(std::array::from_fn(|k| images[k][t]));
        }
    }
    dual_of_forms(alg, &forms)
}

/// `{x ∈ Q^4 : f·x ∈ Z for all f}` for a full-rank family of rational forms.
pub(crate) fn dual_of_forms(alg: QuaternionAlgebra, forms: &[[Rat; 4]]) -> Lattice {
    let as_quats: Vec<Quat> = forms.iter().map(|f| Quat::from_rats(alg, *f)).collect();
    let span = Lattice::from_generators(&as_quats).expect("forms of full rank");
    // Dual basis = columns of the inverse of the (upper-triangular) basis matrix.
    let inv = inverse_upper(&span.rational_rows());
    let cols: Vec<Quat> = (0..4)
        .map(|c| Quat::from_rats(alg, std::array::from_fn(|r| inv[r][c])))
        .collect();
    Lattice::from_generators(&cols).expect("dual of full-rank lattice")
}

fn inverse_upper(m: &[[Rat; 4]; 4]) -> [[Rat; 4]; 4] {
    let mut inv = [[Rat::zero(); 4]; 4];
    for col in 0..4 {
        // Solve m · x = e_col by back substitution.
        for r in (0..4).rev() {
            let mut s = if r == col { Rat::one() } else { Rat::zero() };
            for k in r + 1..4 {
                s -= m[r][k] * inv[k][col];
            }
            inv[r][col] = s / m[r][r];
        }
    }
    inv
}

pub(crate) fn det4(m: &[[Rat; 4]; 4]) -> Rat {
    let mut a = *m;
    let mut det = Rat::one();
    for c in 0..4 {
        let Some(p) = (c..4).find(|&r| !a[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..4 {
            let f = a[r][c] / a[c][c];
            for k in c..4 {
                let v = a[c][k];
                a[r][k] -= f * v;
            }
        }
    }
    det
}

/// gcd of `N` over the Z-span of `gens` (any generating set).
pub fn norm_gcd(gens: &[Quat]) -> Rat {
    let mut vals = Vec::new();
    for (i, x) in gens.iter().enumerate() {
        vals.push(x.reduced_norm());
        for y in &gens[i + 1..] {
            vals.push((*x * y.conj()).reduced_trace());
        }
    }
    rat_gcd(&vals)
}

pub fn rat_gcd(vals: &[Rat]) -> Rat {
    let den = vals.iter().fold(1, |d, v| lcm(d, *v.denom()));
    let g = vals
        .iter()
        .fold(0, |g, v| gcd(g, v.numer() * (den / v.denom())));
    Rat::new(g, den)
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.basis();
        write!(f, "<{}, {}, {}, {}>", b[0], b[1], b[2], b[3])
    }
}

/// An order with cached invariants `disc`, `n(O) = N(O♯)⁻¹` and `ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order {
    lattice: Lattice,
    disc: i128,
    twolevel: i128,
    omega: i128,
}

impl Order {
    pub fn new(lattice: Lattice) -> Result<Order> {
        let alg = lattice.alg;
        invariant!(lattice.contains(&alg.one()), "lattice does not contain 1");
        invariant!(
            lattice.basis().iter().all(|b| b.is_integral()),
            "lattice has non-integral basis elements"
        );
        invariant!(lattice.product(&lattice) == lattice, "lattice not closed under multiplication");
        let (_, disc) = lattice.gram_disc()?;
        let (_, twolevel) = dual_twolevel(&lattice)?;
        let omega = omega_of(&lattice)?;
        Ok(Order {
            lattice,
            disc,
            twolevel,
            omega,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }
    pub fn algebra(&self) -> QuaternionAlgebra {
        self.lattice.alg
    }
    pub fn disc(&self) -> i128 {
        self.disc
    }
    /// Weight-2 level `n(O)`.
    pub fn twolevel(&self) -> i128 {
        self.twolevel
    }
    /// `ω(O) = gcd{Δ(x)}` taken positive.
    pub fn omega(&self) -> i128 {
        self.omega
    }
    /// Weight-3/2 level `n₁(O) = 4 n(O) / ω(O)`.
    pub fn level(&self) -> i128 {
        4 * self.twolevel / self.omega
    }

    pub fn dual(&self) -> Lattice {
        dual_twolevel(&self.lattice).unwrap().0
    }

    pub fn contains(&self, x: &Quat) -> bool {
        self.lattice.contains(x)
    }
}

/// `O♯ = {x : tr(xO) ⊆ Z}` and `n(O) = N(O♯)⁻¹`.
pub fn dual_twolevel(order: &Lattice) -> Result<(Lattice, i128)> {
    let alg = order.alg;
    let forms: Vec<[Rat; 4]> = order
        .basis()
        .iter()
        .map(|b| {
            // tr(x b) as a linear form in the coordinates of x
            let e = [alg.one(), alg.i(), alg.j(), alg.k()];
            std::array::from_fn(|k| (e[k] * *b).reduced_trace())
        })
        .collect();
    let dual = dual_of_forms(alg, &forms);
    let n = dual.norm().recip();
    invariant!(n.is_integer() && n.is_positive(), "n(O) = {n} is not a positive integer");
    Ok((dual, n.to_integer()))
}

/// Generators of `ρ(O) = {x - x̄}`, a rank-3 lattice of pure quaternions.
pub(crate) fn rho_generators(order: &Lattice) -> Vec<Quat> {
    order
        .basis()
        .iter()
        .map(|b| *b - b.conj())
        .filter(|y| !y.is_zero())
        .collect()
}

fn omega_of(order: &Lattice) -> Result<i128> {
    let w = norm_gcd(&rho_generators(order));
    invariant!(w.is_integer(), "omega not integral");
    Ok(w.to_integer())
}

/// Canonical HNF lattice of a left ideal with its (shared) left order.
#[derive(Clone, Debug)]
pub struct LeftIdeal {
    lattice: Lattice,
    norm: Rat,
    left: Arc<Order>,
}

impl PartialEq for LeftIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice && self.left.lattice() == other.left.lattice()
    }
}
impl Eq for LeftIdeal {}

impl LeftIdeal {
    /// Wraps a lattice already known to be a locally principal ideal;
    /// checks `O·a = a`.
    pub fn new(lattice: Lattice, left: Arc<Order>) -> Result<LeftIdeal> {
        invariant!(
            left.lattice().product(&lattice) == lattice,
            "lattice is not a left module over its order"
        );
        let norm = lattice.norm();
        Ok(LeftIdeal { lattice, norm, left })
    }

    pub fn unit(left: Arc<Order>) -> LeftIdeal {
        let lattice = left.lattice().clone();
        LeftIdeal {
            lattice,
            norm: Rat::one(),
            left,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }
    pub fn norm(&self) -> Rat {
        self.norm
    }
    pub fn left_order(&self) -> &Arc<Order> {
        &self.left
    }

    pub fn right_order(&self) -> Result<Order> {
        Order::new(self.lattice.side_order(Side::Right))
    }

    /// `(ā, a⁻¹ = ā / N(a))`, checking `a·a⁻¹ = O_l(a)` and `a⁻¹·a = O_r(a)`.
    pub fn conjugate_and_inverse(&self) -> Result<(Lattice, Lattice)> {
        let bar = self.lattice.conj();
        let inv = bar.scale(self.norm.recip());
        invariant!(
            &self.lattice.product(&inv) == self.left.lattice(),
            "a·a⁻¹ differs from the left order; input not locally principal"
        );
        invariant!(
            inv.product(&self.lattice) == self.lattice.side_order(Side::Right),
            "a⁻¹·a differs from the right order; input not locally principal"
        );
        Ok((bar, inv))
    }

    pub fn right_mul(&self, y: &Quat) -> LeftIdeal {
        let lattice = self.lattice.right_mul(y);
        let norm = self.norm * y.reduced_norm();
        LeftIdeal {
            lattice,
            norm,
            left: self.left.clone(),
        }
    }

    /// `[a] = [b]`: some `x ∈ a⁻¹b` has `N(x) = N(b)/N(a)`.
    pub fn is_equivalent(&self, other: &LeftIdeal) -> Result<bool> {
        if self.lattice == other.lattice {
            return Ok(true);
        }
        Ok(self.connecting_form(other)?.theta(1)?[1] > 0)
    }

    /// Height `½ #O_r(a)^×`.
    pub fn height(&self) -> Result<i128> {
        let r1 = self.connecting_form(self)?.theta(1)?[1];
        invariant!(r1 >= 2 && r1 % 2 == 0, "unit count {r1} is not even");
        Ok(r1 as i128 / 2)
    }

    /// Integral form `N(x)/(N(a)N(b))` on the lattice `ā·b`, whose vectors of
    /// value `m` are the elements of `a⁻¹b` of normalised norm `m` (scaled by `N(a)`).
    pub fn connecting_form(&self, other: &LeftIdeal) -> Result<QuadForm> {
        let lat = self.lattice.conj().product(&other.lattice);
        lat.norm_form(self.norm * other.norm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::algebra_for_prime;

    #[test]
    fn canonical_form_is_order_independent() {
        let (alg, o) = algebra_for_prime(7).unwrap();
        let mut b = o.lattice().basis().to_vec();
        b.reverse();
        b.push(b[0] + b[1]);
        b.push(b[2] - b[3].scale_int(5));
        assert_eq!(&Lattice::from_generators(&b).unwrap(), o.lattice());
        let l = Lattice::from_generators(&b).unwrap();
        assert_eq!(Lattice::from_generators(&l.basis()).unwrap(), l);
        assert!(Lattice::from_generators(&[alg.one(), alg.i(), alg.j()]).is_err());
    }

    #[test]
    fn maximal_order_invariants_p7() {
        let (_, o) = algebra_for_prime(7).unwrap();
        assert_eq!(o.disc(), 7);
        assert_eq!(o.twolevel(), 7);
        assert_eq!(o.lattice().norm(), Rat::one());
        assert_eq!(o.lattice().product(o.lattice()), *o.lattice());
        assert_eq!(&o.lattice().side_order(Side::Right), o.lattice());
        assert_eq!(&o.lattice().side_order(Side::Left), o.lattice());
        let scaled = o.lattice().scale(Rat::from(7));
        assert_eq!(scaled.norm(), Rat::from(49));
    }

    #[test]
    fn unit_ideal_inverse() {
        let (_, o) = algebra_for_prime(7).unwrap();
        let o = Arc::new(o);
        let unit = LeftIdeal::unit(o.clone());
        let (bar, inv) = unit.conjugate_and_inverse().unwrap();
        assert_eq!(&bar, o.lattice());
        assert_eq!(&inv, o.lattice());
    }

    #[test]
    fn units_of_maximal_order_p7() {
        let (_, o) = algebra_for_prime(7).unwrap();
        let form = o.lattice().norm_form(Rat::one()).unwrap();
        let theta = form.theta(3).unwrap();
        assert_eq!(theta[0], 1);
        assert_eq!(theta[1], 4);
    }
}
