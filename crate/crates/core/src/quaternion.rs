//! Exact arithmetic in definite rational quaternion algebras `H(a, b)`.
//!
//! Elements are stored over the basis `(1, i, j, k)` with `i² = a`, `j² = b`,
//! `k = ij = -ji`, as four integer numerators over one positive common
//! denominator kept in lowest terms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::{gcd, hilbert_symbol, is_prime, legendre, lcm};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Order};

pub type Rat = num_rational::Ratio<i128>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuaternionAlgebra {
    pub a: i128,
    pub b: i128,
}

impl QuaternionAlgebra {
    pub fn new(a: i128, b: i128) -> Result<Self> {
        if a >= 0 || b >= 0 {
            return Err(Error::InvalidInput(format!(
                "H({a},{b}) is not definite"
            )));
        }
        Ok(QuaternionAlgebra { a, b })
    }

    /// Finite primes where the algebra ramifies, via Hilbert symbols.
    pub fn ramified_primes(&self) -> Vec<i128> {
        let mut candidates = vec![2i128];
        for n in [self.a.abs(), self.b.abs()] {
            for (q, _) in crate::arith::factorize(n as u64) {
                candidates.push(q as i128);
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        candidates
            .into_iter()
            .filter(|&q| hilbert_symbol(self.a, self.b, q) == -1)
            .collect()
    }

    pub fn one(&self) -> Quat {
        Quat::from_int(*self, [1, 0, 0, 0])
    }
    pub fn zero(&self) -> Quat {
        Quat::from_int(*self, [0, 0, 0, 0])
    }
    pub fn i(&self) -> Quat {
        Quat::from_int(*self, [0, 1, 0, 0])
    }
    pub fn j(&self) -> Quat {
        Quat::from_int(*self, [0, 0, 1, 0])
    }
    pub fn k(&self) -> Quat {
        Quat::from_int(*self, [0, 0, 0, 1])
    }

    /// `(x0 + x1 i + x2 j + x3 k) / den`.
    pub fn elt(&self, coords: [i128; 4], den: i128) -> Quat {
        Quat::new(*self, coords, den)
    }

    /// Polarised norm form `B(x, y) = tr(x ȳ) / 2` on numerator vectors.
    pub(crate) fn bilinear_num(&self, x: &[i128; 4], y: &[i128; 4]) -> i128 {
        x[0] * y[0] - self.a * x[1] * y[1] - self.b * x[2] * y[2]
            + self.a * self.b * x[3] * y[3]
    }
}

impl fmt::Display for QuaternionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({},{})", self.a, self.b)
    }
}

/// An element of a quaternion algebra with exact rational coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Quat {
    alg: QuaternionAlgebra,
    num: [i128; 4],
    den: i128,
}

impl Quat {
    pub fn new(alg: QuaternionAlgebra, num: [i128; 4], den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let mut q = Quat { alg, num, den };
        q.normalize();
        q
    }

    pub fn from_int(alg: QuaternionAlgebra, num: [i128; 4]) -> Self {
        Quat { alg, num, den: 1 }
    }

    pub fn from_rats(alg: QuaternionAlgebra, c: [Rat; 4]) -> Self {
        let den = c.iter().fold(1, |acc, r| lcm(acc, *r.denom()));
        let num = c.map(|r| r.numer() * (den / r.denom()));
        Quat::new(alg, num, den)
    }

    fn normalize(&mut self) {
        if self.den < 0 {
            self.den = -self.den;
            self.num = self.num.map(|x| -x);
        }
        let g = self.num.iter().fold(self.den, |g, &x| gcd(g, x));
        if g > 1 {
            self.den /= g;
            self.num = self.num.map(|x| x / g);
        }
    }

    pub fn algebra(&self) -> QuaternionAlgebra {
        self.alg
    }
    pub fn numerators(&self) -> [i128; 4] {
        self.num
    }
    pub fn denominator(&self) -> i128 {
        self.den
    }
    pub fn coords(&self) -> [Rat; 4] {
        self.num.map(|x| Rat::new(x, self.den))
    }

    pub fn is_zero(&self) -> bool {
        self.num == [0; 4]
    }
    pub fn is_rational(&self) -> bool {
        self.num[1] == 0 && self.num[2] == 0 && self.num[3] == 0
    }

    pub fn conj(&self) -> Quat {
        Quat {
            alg: self.alg,
            num: [self.num[0], -self.num[1], -self.num[2], -self.num[3]],
            den: self.den,
        }
    }

    pub fn reduced_trace(&self) -> Rat {
        Rat::new(2 * self.num[0], self.den)
    }

    pub fn reduced_norm(&self) -> Rat {
        Rat::new(
            self.alg.bilinear_num(&self.num, &self.num),
            self.den * self.den,
        )
    }

    /// `Δ(x) = tr(x)² - 4 N(x)`, the discriminant of the characteristic polynomial.
    pub fn discriminant(&self) -> Rat {
        let t = self.reduced_trace();
        t * t - Rat::from_integer(4) * self.reduced_norm()
    }

    /// `(tr, N, x̄, Δ)`.
    pub fn invariants(&self) -> (Rat, Rat, Quat, Rat) {
        (
            self.reduced_trace(),
            self.reduced_norm(),
            self.conj(),
            self.discriminant(),
        )
    }

    /// Integral means reduced trace and norm are integers.
    pub fn is_integral(&self) -> bool {
        self.reduced_trace().is_integer() && self.reduced_norm().is_integer()
    }

    pub fn scale(&self, r: Rat) -> Quat {
        Quat::new(
            self.alg,
            self.num.map(|x| x * r.numer()),
            self.den * r.denom(),
        )
    }

    pub fn scale_int(&self, n: i128) -> Quat {
        self.scale(Rat::from_integer(n))
    }

    pub fn inverse(&self) -> Result<Quat> {
        let n = self.reduced_norm();
        if n == Rat::from_integer(0) {
            return Err(Error::InvalidInput("zero is not invertible".into()));
        }
        Ok(self.conj().scale(n.recip()))
    }

    pub fn try_mul(&self, rhs: &Quat) -> Result<Quat> {
        if self.alg != rhs.alg {
            return Err(Error::InvalidInput(format!(
                "mixed algebras {} and {}",
                self.alg, rhs.alg
            )));
        }
        let num = mul_num(self.alg, &self.num, &rhs.num);
        Ok(Quat::new(self.alg, num, self.den * rhs.den))
    }

    pub fn pow(&self, e: u32) -> Quat {
        let mut r = self.alg.one();
        for _ in 0..e {
            r = r * *self;
        }
        r
    }

    pub fn tr_num(&self) -> i128 {
        2 * self.num[0]
    }
}

/// Product of numerator vectors in `H(a, b)`.
pub(crate) fn mul_num(alg: QuaternionAlgebra, x: &[i128; 4], y: &[i128; 4]) -> [i128; 4] {
    let (a, b) = (alg.a, alg.b);
    [
        x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] - a * b * x[3] * y[3],
        x[0] * y[1] + x[1] * y[0] - b * x[2] * y[3] + b * x[3] * y[2],
        x[0] * y[2] + x[2] * y[0] + a * x[1] * y[3] - a * x[3] * y[1],
        x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1],
    ]
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, rhs: Quat) -> Quat {
        self.try_mul(&rhs).expect("quaternion product")
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, rhs: Quat) -> Quat {
        assert_eq!(self.alg, rhs.alg, "mixed algebras");
        let den = lcm(self.den, rhs.den);
        let (s, t) = (den / self.den, den / rhs.den);
        let num = std::array::from_fn(|c| self.num[c] * s + rhs.num[c] * t);
        Quat::new(self.alg, num, den)
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, rhs: Quat) -> Quat {
        self + (-rhs)
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat {
            alg: self.alg,
            num: self.num.map(|x| -x),
            den: self.den,
        }
    }
}

impl fmt::Display for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "i", "j", "k"];
        let mut s = String::new();
        for (c, name) in self.num.iter().zip(names) {
            if *c == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push_str(if *c > 0 { "+" } else { "-" });
            } else if *c < 0 {
                s.push('-');
            }
            let abs = c.abs();
            if name.is_empty() || abs != 1 {
                s.push_str(&abs.to_string());
            }
            s.push_str(name);
        }
        if s.is_empty() {
            s.push('0');
        }
        if self.den == 1 {
            write!(f, "{s}")
        } else {
            write!(f, "({s})/{}", self.den)
        }
    }
}

/// Builds `H` ramified exactly at `{p, ∞}` together with a maximal order.
pub fn algebra_for_prime(p: i128) -> Result<(QuaternionAlgebra, Order)> {
    if p == 2 || !is_prime(p as i64) {
        return Err(Error::Construction(format!(
            "{p} is not an odd prime"
        )));
    }
    let (a, b) = match p.rem_euclid(8) {
        3 | 7 => (-1, -p),
        5 => (-2, -p),
        _ => {
            let q = (3..)
                .step_by(4)
                .find(|&q| is_prime(q as i64) && legendre(q, p) == -1)
                .ok_or_else(|| Error::Construction("no auxiliary prime".into()))?;
            (-q, -p)
        }
    };
    let alg = QuaternionAlgebra::new(a, b)?;
    if alg.ramified_primes() != vec![p] {
        return Err(Error::Construction(format!(
            "{alg} ramifies at {:?}, expected [{p}]",
            alg.ramified_primes()
        )));
    }
    let order = if p % 4 == 3 {
        let basis = [
            alg.one(),
            alg.i(),
            alg.elt([1, 0, 1, 0], 2),
            alg.elt([0, 1, 0, 1], 2),
        ];
        Order::new(Lattice::from_generators(&basis)?)?
    } else {
        saturate_to_maximal(alg, p)?
    };
    if order.disc() != p {
        return Err(Error::Construction(format!(
            "order has discriminant {}, expected {p}",
            order.disc()
        )));
    }
    Ok((alg, order))
}

/// Grows `Z<1,i,j,k>` by adjoining `x/ℓ` for primes `ℓ` dividing the excess
/// discriminant until the order has discriminant `p`.
fn saturate_to_maximal(alg: QuaternionAlgebra, p: i128) -> Result<Order> {
    let basis = [alg.one(), alg.i(), alg.j(), alg.k()];
    let mut order = Order::new(Lattice::from_generators(&basis)?)?;
    'grow: while order.disc() != p {
        let excess = order.disc() / p;
        let ell = crate::arith::factorize(excess as u64)[0].0 as i128;
        let b = order.lattice().basis();
        for mask in 1..ell.pow(4) {
            let mut c = [0i128; 4];
            let mut m = mask;
            for slot in c.iter_mut() {
                *slot = m % ell;
                m /= ell;
            }
            let mut x = alg.zero();
            for (ci, bi) in c.iter().zip(&b) {
                x = x + bi.scale_int(*ci);
            }
            let x = x.scale(Rat::new(1, ell));
            if !x.is_integral() || order.lattice().contains(&x) {
                continue;
            }
            if let Some(bigger) = ring_closure(order.lattice(), &x, ell) {
                if let Ok(o) = Order::new(bigger) {
                    if o.disc() < order.disc() {
                        order = o;
                        continue 'grow;
                    }
                }
            }
        }
        return Err(Error::Construction(format!(
            "saturation at {ell} failed for {alg}"
        )));
    }
    Ok(order)
}

/// Ring generated by a lattice and one extra element, if it stays integral.
fn ring_closure(base: &Lattice, x: &Quat, ell: i128) -> Option<Lattice> {
    let mut gens = base.basis().to_vec();
    gens.push(*x);
    let mut lat = Lattice::from_generators(&gens).ok()?;
    for _ in 0..8 {
        if lat.basis().iter().any(|b| !b.is_integral()) || lat.denominator() > ell * ell * 4 {
            return None;
        }
        let next = lat.product(&lat);
        if next == lat {
            return Some(lat);
        }
        lat = next.sum(&lat);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h7() -> QuaternionAlgebra {
        QuaternionAlgebra::new(-1, -7).unwrap()
    }

    #[test]
    fn defining_relations() {
        let h = h7();
        assert_eq!(h.i() * h.j(), h.k());
        assert_eq!(h.j() * h.i(), -h.k());
        assert_eq!(h.i() * h.i(), h.one().scale_int(-1));
        assert_eq!(h.k() * h.k(), h.one().scale_int(-7));
    }

    #[test]
    fn square_of_half_integral_element() {
        let h = h7();
        let x = h.elt([1, 2, 1, 0], 2);
        assert_eq!(x * x, h.elt([-5, 2, 1, 0], 2));
        assert_eq!(x * x, x - h.one().scale_int(3));
    }

    #[test]
    fn invariants_examples() {
        let h = h7();
        let (t, n, c, d) = h.i().invariants();
        assert_eq!((t, n, c, d), (Rat::from(0), Rat::from(1), -h.i(), Rat::from(-4)));
        let (t, n, c, d) = h.one().invariants();
        assert_eq!((t, n, c, d), (Rat::from(2), Rat::from(1), h.one(), Rat::from(0)));
        let x = h.elt([1, 2, 1, 0], 2);
        let (t, n, c, d) = x.invariants();
        assert_eq!(t, Rat::from(1));
        assert_eq!(n, Rat::from(3));
        assert_eq!(c, h.elt([1, -2, -1, 0], 2));
        assert_eq!(d, Rat::from(-11));
    }

    #[test]
    fn mixed_algebras_rejected() {
        let h = h7();
        let g = QuaternionAlgebra::new(-2, -5).unwrap();
        assert!(h.i().try_mul(&g.i()).is_err());
    }

    #[test]
    fn presentations_for_small_primes() {
        let (alg, o) = algebra_for_prime(7).unwrap();
        assert_eq!((alg.a, alg.b), (-1, -7));
        let expected = Lattice::from_generators(&[
            alg.one(),
            alg.i(),
            alg.elt([1, 0, 1, 0], 2),
            alg.elt([0, 1, 0, 1], 2),
        ])
        .unwrap();
        assert_eq!(o.lattice(), &expected);
        let (alg, o) = algebra_for_prime(11).unwrap();
        assert_eq!((alg.a, alg.b), (-1, -11));
        assert_eq!(o.disc(), 11);
        let (alg, o) = algebra_for_prime(5).unwrap();
        assert_eq!((alg.a, alg.b), (-2, -5));
        assert_eq!(o.disc(), 5);
        for p in [3, 13, 17, 19, 23, 29, 41, 73] {
            let (alg, o) = algebra_for_prime(p).unwrap();
            assert_eq!(alg.ramified_primes(), vec![p]);
            assert_eq!(o.disc(), p);
        }
    }

    #[test]
    fn bad_primes_rejected() {
        assert!(algebra_for_prime(2).is_err());
        assert!(algebra_for_prime(9).is_err());
        assert!(algebra_for_prime(1).is_err());
    }

    fn small_quat() -> impl Strategy<Value = Quat> {
        (prop::array::uniform4(-9i128..10), 1i128..5)
            .prop_map(|(c, d)| Quat::new(QuaternionAlgebra { a: -1, b: -7 }, c, d))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(x in small_quat(), y in small_quat()) {
            prop_assert_eq!((x * y).reduced_norm(), x.reduced_norm() * y.reduced_norm());
            prop_assert_eq!((x * y).conj(), y.conj() * x.conj());
            prop_assert_eq!(x.conj().reduced_trace(), x.reduced_trace());
        }

        #[test]
        fn associativity(x in small_quat(), y in small_quat(), z in small_quat()) {
            prop_assert_eq!((x * y) * z, x * (y * z));
        }

        #[test]
        fn discriminant_invariances(x in small_quat(), a in small_quat(), n in -5i128..6) {
            let h = x.algebra();
            prop_assert_eq!((x + h.one().scale_int(n)).discriminant(), x.discriminant());
            if !a.is_zero() {
                let conj = a * x * a.inverse().unwrap();
                prop_assert_eq!(conj.discriminant(), x.discriminant());
            }
            prop_assert!(x.discriminant() <= Rat::from(0));
            prop_assert_eq!(x.discriminant() == Rat::from(0), x.is_rational());
            prop_assert_eq!(x.reduced_norm() == Rat::from(0), x.is_zero());
        }
    }
}
