//! The tower `O ⊋ Õ ⊋ O' ⊋ Z + pO`, the subideal maps Ψ, the star action of
//! local units, and class sets of the three kinds of orders.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{legendre, mod_inv, valuation};
use crate::error::{invariant, Error, Result};
use crate::lattice::{multiplier_lattice, Lattice, LeftIdeal, Order, Side};
use crate::linalg::nullspace_mod_p;
use crate::quaternion::{algebra_for_prime, Quat, QuaternionAlgebra, Rat};

/// A level-`p²` order with its genus character and `m`-ideal.
#[derive(Clone, Debug)]
pub struct LevelP2Order {
    pub order: Arc<Order>,
    pub sigma: i32,
    pub m_ideal: Lattice,
}

#[derive(Clone, Debug)]
pub struct OrderTower {
    pub p: i128,
    pub alg: QuaternionAlgebra,
    pub maximal: Arc<Order>,
    pub tilde: Arc<Order>,
    /// `Z + pO`.
    pub base: Lattice,
    /// All `p + 1` level-`p²` orders, sorted by canonical basis.
    pub level_p2: Vec<LevelP2Order>,
}

impl OrderTower {
    pub fn new(p: i128) -> Result<OrderTower> {
        let (alg, maximal) = algebra_for_prime(p)?;
        let tilde = tilde_order(&maximal, p)?;
        let base = z_plus_p(maximal.lattice(), p);
        let mut level_p2 = Vec::new();
        for (order, sigma) in level_p2_orders(&tilde, &base, p)? {
            let m_ideal = m_ideal(&tilde, &order, p)?;
            level_p2.push(LevelP2Order {
                order: Arc::new(order),
                sigma,
                m_ideal,
            });
        }
        Ok(OrderTower {
            p,
            alg,
            maximal: Arc::new(maximal),
            tilde: Arc::new(tilde),
            base,
            level_p2,
        })
    }

    /// Canonical level-`p²` order of the given sign: least canonical basis.
    pub fn canonical(&self, sigma: i32) -> Result<&LevelP2Order> {
        self.level_p2
            .iter()
            .find(|o| o.sigma == sigma)
            .ok_or_else(|| Error::Construction(format!("no level-p² order with σ = {sigma}")))
    }

    pub fn find_level_p2(&self, lattice: &Lattice) -> Option<&LevelP2Order> {
        self.level_p2.iter().find(|o| o.order.lattice() == lattice)
    }
}

/// `Z + p·L`.
pub fn z_plus_p(lattice: &Lattice, p: i128) -> Lattice {
    let alg = lattice.algebra();
    let mut gens = vec![alg.one()];
    gens.extend(lattice.basis().iter().map(|b| b.scale_int(p)));
    Lattice::from_generators(&gens).expect("Z + pO has full rank")
}

/// Integer coordinates of every basis element of `sub` inside `lat`.
fn coords_in(lat: &Lattice, x: &Quat) -> Result<[i128; 4]> {
    lat.integer_coords(x)
        .ok_or_else(|| Error::Invariant(format!("{x} is not in {lat}")))
}

fn combine(basis: &[Quat; 4], c: &[i128]) -> Quat {
    let mut x = basis[0].algebra().zero();
    for (ci, bi) in c.iter().zip(basis) {
        if *ci != 0 {
            x = x + bi.scale_int(*ci);
        }
    }
    x
}

/// `Õ = {x ∈ O : p | Δ(x)}` as the radical of the polarised Δ-form on `O/pO`.
pub fn tilde_order(maximal: &Order, p: i128) -> Result<Order> {
    let b = maximal.lattice().basis();
    let form = |x: &Quat, y: &Quat| -> i128 {
        let v = Rat::from(2) * x.reduced_trace() * y.reduced_trace()
            - Rat::from(4) * (*x * y.conj()).reduced_trace();
        v.to_integer()
    };
    let rows: Vec<Vec<i128>> = (0..4).map(|i| (0..4).map(|j| form(&b[i], &b[j])).collect()).collect();
    let radical = nullspace_mod_p(&rows, p);
    invariant!(
        radical.len() == 3,
        "Δ-form radical has dimension {} modulo {p}, expected 3",
        radical.len()
    );
    let mut gens: Vec<Quat> = radical.iter().map(|v| combine(&b, v)).collect();
    gens.extend(b.iter().map(|x| x.scale_int(p)));
    let lat = Lattice::from_generators(&gens)?;
    invariant!(
        maximal.lattice().index_of(&lat) == Rat::from(p),
        "Õ does not have index p"
    );
    let tb = lat.basis();
    for (i, x) in tb.iter().enumerate() {
        invariant!((x.discriminant() / Rat::from(p)).is_integer(), "p ∤ Δ on Õ basis");
        for y in &tb[i + 1..] {
            invariant!(form(x, y) % p == 0, "Δ-form not divisible by p on Õ");
        }
    }
    Order::new(lat)
}

/// Two elements of `big` spanning `big / small ≅ F_p²`.
fn quotient_plane(big: &Lattice, small: &Lattice) -> Result<(Quat, Quat)> {
    let b = big.basis();
    let u = *b
        .iter()
        .find(|x| !small.contains(x))
        .ok_or_else(|| Error::Invariant("quotient is trivial".into()))?;
    let with_u = small.sum(&Lattice::from_generators(&[small.basis().to_vec(), vec![u]].concat())?);
    let v = *b
        .iter()
        .find(|x| !with_u.contains(x))
        .ok_or_else(|| Error::Invariant("quotient has dimension 1".into()))?;
    Ok((u, v))
}

/// The `p + 1` lattices strictly between `small` and `big` when
/// `big/small ≅ F_p²`, each with a generator outside `small`.
fn lines(big: &Lattice, small: &Lattice, p: i128) -> Result<Vec<(Lattice, Quat)>> {
    invariant!(big.index_of(small) == Rat::from(p * p), "quotient does not have order p²");
    let (u, v) = quotient_plane(big, small)?;
    let sb = small.basis().to_vec();
    let mut out = Vec::with_capacity(p as usize + 1);
    for t in 0..=p {
        let x = if t == p { v } else { u + v.scale_int(t) };
        let lat = Lattice::from_generators(&[sb.clone(), vec![x]].concat())?;
        out.push((lat, x));
    }
    Ok(out)
}

/// The `p + 1` orders of level `p²` with their σ, sorted by canonical basis.
pub fn level_p2_orders(tilde: &Order, base: &Lattice, p: i128) -> Result<Vec<(Order, i32)>> {
    let mut out = Vec::new();
    for (lat, x) in lines(tilde.lattice(), base, p)? {
        let order = Order::new(lat)?;
        let sigma = sigma_of(&x, p)?;
        out.push((order, sigma));
    }
    out.sort_by(|a, b| a.0.lattice().cmp(b.0.lattice()));
    invariant!(out.len() as i128 == p + 1, "expected p + 1 level-p² orders");
    Ok(out)
}

/// Genus character from a witness `x ∈ O' \ (Z + pO)`: the Legendre symbol
/// of `-Δ(x)/p` modulo `p`.
pub fn sigma_of(x: &Quat, p: i128) -> Result<i32> {
    let d = x.discriminant();
    invariant!(d.is_integer(), "Δ of witness not integral");
    let d = d.to_integer();
    invariant!(d != 0 && d % p == 0 && (d / p) % p != 0, "p does not exactly divide Δ(x) = {d}");
    Ok(legendre(-d / p, p))
}

/// σ of a level-`p²` order, from every basis element outside `Z + pO`
/// (all witnesses must agree).
pub fn sigma(order: &Order, base: &Lattice, p: i128) -> Result<i32> {
    let mut seen = BTreeSet::new();
    for x in order.lattice().basis() {
        if !base.contains(&x) {
            seen.insert(sigma_of(&x, p)?);
        }
        for y in order.lattice().basis() {
            let z = x + y;
            if !base.contains(&z) {
                seen.insert(sigma_of(&z, p)?);
            }
        }
    }
    invariant!(seen.len() == 1, "σ witnesses disagree: {seen:?}");
    Ok(*seen.iter().next().unwrap())
}

/// `m = {x : xÕ ⊆ O'}`, a two-sided Õ-ideal of index `p²`.
pub fn m_ideal(tilde: &Order, level_p2: &Order, p: i128) -> Result<Lattice> {
    let m = multiplier_lattice(tilde.lattice(), level_p2.lattice(), Side::Left);
    invariant!(
        tilde.lattice().index_of(&m) == Rat::from(p * p),
        "m has index {} in Õ",
        tilde.lattice().index_of(&m)
    );
    invariant!(tilde.lattice().product(&m) == m, "m is not a left Õ-module");
    invariant!(m.product(tilde.lattice()) == m, "m is not a right Õ-module");
    Ok(m)
}

/// All `k`-dimensional subspaces of `F_q^n`, as row-reduced bases.
pub fn subspaces(q: i128, n: usize, k: usize) -> Vec<Vec<Vec<i128>>> {
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    pivot_sets(n, k, 0, &mut pivots, &mut |piv| {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| (piv[r] + 1..n).filter(|c| !piv.contains(c)).map(move |c| (r, c)))
            .collect();
        let total = (q as usize).pow(free.len() as u32);
        for idx in 0..total {
            let mut m = vec![vec![0i128; n]; k];
            for r in 0..k {
                m[r][piv[r]] = 1;
            }
            let mut rem = idx;
            for &(r, c) in &free {
                m[r][c] = (rem % q as usize) as i128;
                rem /= q as usize;
            }
            out.push(m);
        }
    });
    out
}

fn pivot_sets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for c in start..n {
        cur.push(c);
        pivot_sets(n, k, c + 1, cur, f);
        cur.pop();
    }
}

/// Sublattices `q·a ⊆ b ⊆ a` with `b/qa` a given subspace.
fn sublattices(a: &Lattice, q: i128, k: usize) -> Vec<Lattice> {
    let basis = a.basis();
    let scaled: Vec<Quat> = basis.iter().map(|b| b.scale_int(q)).collect();
    subspaces(q, 4, k)
        .into_par_iter()
        .map(|w| {
            let mut gens: Vec<Quat> = w.iter().map(|row| combine(&basis, row)).collect();
            gens.extend(scaled.iter().copied());
            Lattice::from_generators(&gens).expect("full rank")
        })
        .collect()
}

/// `Ψ^O_Õ(a)`: index-`p` sublattices of `a` that are left Õ-ideals of norm `N(a)`.
pub fn psi_tilde(a: &LeftIdeal, tilde: &Arc<Order>, p: i128) -> Result<Vec<LeftIdeal>> {
    let norm = a.norm();
    let mut found: Vec<Lattice> = sublattices(a.lattice(), p, 3)
        .into_par_iter()
        .filter(|b| b.norm() == norm && tilde.lattice().product(b) == *b)
        .collect();
    found.sort();
    invariant!(
        found.len() as i128 == p + 1,
        "Ψ^O_Õ produced {} ideals, expected {}",
        found.len(),
        p + 1
    );
    found
        .into_iter()
        .map(|b| LeftIdeal::new(b, tilde.clone()))
        .collect()
}

/// `Ψ^Õ_O'(b)`: lattices strictly between `m·b` and `b` with norm `N(b)`.
pub fn psi_p2(b: &LeftIdeal, target: &LevelP2Order, p: i128) -> Result<Vec<LeftIdeal>> {
    let mb = target.m_ideal.product(b.lattice());
    let norm = b.norm();
    let mut found = Vec::new();
    for (c, _) in lines(b.lattice(), &mb, p)? {
        if c.norm() == norm && target.order.lattice().product(&c) == c {
            found.push(c);
        }
    }
    found.sort();
    invariant!(
        found.len() as i128 == p,
        "Ψ^Õ_O' produced {} ideals, expected {p}",
        found.len()
    );
    found
        .into_iter()
        .map(|c| LeftIdeal::new(c, target.order.clone()))
        .collect()
}

fn rat_valuation(r: Rat, p: i128) -> i64 {
    valuation(*r.numer(), p) as i64 - valuation(*r.denom(), p) as i64
}

/// `b ⋆ y`: right multiplication by the adele equal to `y` at `p` and 1
/// elsewhere, computed as `p^k b + b y'` with `y'` a `p`-adic approximation
/// of `y` lying in the right order away from `p`.
pub fn star_action(b: &LeftIdeal, y: &Quat, p: i128) -> Result<LeftIdeal> {
    if y.is_zero() {
        return Err(Error::InvalidInput("star action by zero".into()));
    }
    let right = b.lattice().side_order(Side::Right);
    let coords = right.rational_coords(y);
    let s = coords
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| valuation(*c.denom(), p) as i64)
        .max()
        .unwrap_or(0);
    let k = rat_valuation(y.reduced_norm(), p) + s;
    if k < 0 {
        return Err(Error::InvalidInput(format!("{y} is not integral enough at {p}")));
    }
    let rb = right.basis();
    let mut approx = y.algebra().zero();
    for (c, r) in coords.iter().zip(rb.iter()) {
        if c.is_zero() {
            continue;
        }
        let e = valuation(*c.denom(), p);
        let pe = p.pow(e);
        let dprime = c.denom() / pe;
        let modulus = p.pow(k as u32) * pe;
        let inv = mod_inv(dprime, modulus)
            .ok_or_else(|| Error::Invariant("denominator not invertible mod p^k".into()))?;
        let n = (c.numer().rem_euclid(modulus) * inv).rem_euclid(modulus);
        approx = approx + r.scale(Rat::new(n, pe));
    }
    let pk = Rat::from(p.pow(k as u32));
    let mut gens: Vec<Quat> = b.lattice().basis().iter().map(|x| x.scale(pk)).collect();
    gens.extend(b.lattice().basis().iter().map(|x| *x * approx));
    let lat = Lattice::from_generators(&gens)?;
    LeftIdeal::new(lat, b.left_order().clone())
}

/// Reduces an element of `O` modulo `pO` (coordinates in `[0, p)`).
fn reduce_mod_p(order: &Lattice, x: &Quat, p: i128) -> Result<Quat> {
    let c = coords_in(order, x)?;
    let r: Vec<i128> = c.iter().map(|v| v.rem_euclid(p)).collect();
    Ok(combine(&order.basis(), &r))
}

/// `u ~ v` in `Õ_p^× \ O_p^×` iff `p | Δ(u v̄)`.
pub fn same_gh_class(u: &Quat, v: &Quat, p: i128) -> bool {
    let d = (*u * v.conj()).discriminant();
    (d / Rat::from(p)).is_integer()
}

/// A unit of `O_p` whose powers `u⁰, …, u^p` represent the `p + 1` classes of
/// `Õ_p^× \ O_p^×`; searched by increasing coordinate height.
pub fn gh_generator(maximal: &Order, p: i128) -> Result<Quat> {
    let lat = maximal.lattice();
    let basis = lat.basis();
    for h in 1..=12i128 {
        let side = 2 * h + 1;
        for idx in 0..side.pow(4) {
            let mut rem = idx;
            let c: Vec<i128> = (0..4)
                .map(|_| {
                    let v = rem % side - h;
                    rem /= side;
                    v
                })
                .collect();
            if c.iter().map(|v| v.abs()).max() != Some(h) {
                continue;
            }
            let u = combine(&basis, &c);
            if is_gh_generator(lat, &u, p)? {
                return Ok(u);
            }
        }
    }
    Err(Error::Resource("no generator found within the search bound".into()))
}

pub fn is_gh_generator(order: &Lattice, u: &Quat, p: i128) -> Result<bool> {
    let n = u.reduced_norm();
    if !n.is_integer() || n.to_integer() % p == 0 {
        return Ok(false);
    }
    let mut powers = vec![u.algebra().one()];
    for _ in 0..p {
        let next = reduce_mod_p(order, &(*powers.last().unwrap() * *u), p)?;
        powers.push(next);
    }
    for i in 0..powers.len() {
        for j in i + 1..powers.len() {
            if same_gh_class(&powers[i], &powers[j], p) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    Maximal,
    Tilde,
    LevelP2 { sigma: i32 },
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderKind::Maximal => write!(f, "maximal"),
            OrderKind::Tilde => write!(f, "tilde"),
            OrderKind::LevelP2 { sigma } => write!(f, "p2{:+}", sigma),
        }
    }
}

/// Representatives of `I(O)` with heights and, for Õ and O', the index of
/// the parent class one level up.
#[derive(Clone, Debug)]
pub struct ClassSet {
    pub kind: OrderKind,
    pub order: Arc<Order>,
    pub reps: Vec<LeftIdeal>,
    pub heights: Vec<i128>,
    pub parents: Vec<usize>,
}

impl ClassSet {
    pub fn len(&self) -> usize {
        self.reps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Index of the class of `a`.
    pub fn locate(&self, a: &LeftIdeal) -> Result<usize> {
        for (i, r) in self.reps.iter().enumerate() {
            if r.is_equivalent(a)? {
                return Ok(i);
            }
        }
        Err(Error::Invariant("ideal is in no known class".into()))
    }

    /// `Σ 1/(2·height)`.
    pub fn mass(&self) -> Rat {
        self.heights
            .iter()
            .fold(Rat::zero(), |acc, &h| acc + Rat::new(1, 2 * h))
    }
}

fn neighbors(a: &LeftIdeal, order: &Arc<Order>, q: i128) -> Result<Vec<LeftIdeal>> {
    let norm = a.norm() * Rat::from(q);
    let mut found: Vec<Lattice> = sublattices(a.lattice(), q, 2)
        .into_iter()
        .filter(|b| b.norm() == norm && order.lattice().product(b) == *b)
        .collect();
    found.sort();
    invariant!(
        found.len() as i128 == q + 1,
        "found {} {q}-neighbours, expected {}",
        found.len(),
        q + 1
    );
    found.into_iter().map(|b| LeftIdeal::new(b, order.clone())).collect()
}

/// `I(O)` by breadth-first search over 2-neighbours, checked against the mass `(p-1)/24`.
pub fn maximal_class_set(tower: &OrderTower) -> Result<ClassSet> {
    let order = tower.maximal.clone();
    let target = Rat::new(tower.p - 1, 24);
    let unit = LeftIdeal::unit(order.clone());
    let mut reps = vec![unit.clone()];
    let mut heights = vec![unit.height()?];
    let mut queue = std::collections::VecDeque::from([unit]);
    let mass = |h: &[i128]| h.iter().fold(Rat::zero(), |acc, &x| acc + Rat::new(1, 2 * x));
    while let Some(a) = queue.pop_front() {
        if mass(&heights) == target {
            break;
        }
        for b in neighbors(&a, &order, 2)? {
            let mut known = false;
            for r in &reps {
                if r.is_equivalent(&b)? {
                    known = true;
                    break;
                }
            }
            if !known {
                heights.push(b.height()?);
                reps.push(b.clone());
                queue.push_back(b);
            }
        }
    }
    let m = mass(&heights);
    invariant!(m == target, "class set mass {m} differs from {target}");
    let n = reps.len();
    Ok(ClassSet {
        kind: OrderKind::Maximal,
        order,
        reps,
        heights,
        parents: vec![0; n],
    })
}

/// Ψ^O_Õ(a) ordered along the orbit of the G\H generator, starting from Õ
/// itself for the unit ideal and from the least element otherwise.
pub fn psi_tilde_orbit(a: &LeftIdeal, tower: &OrderTower, u: &Quat) -> Result<Vec<LeftIdeal>> {
    let p = tower.p;
    let psi = psi_tilde(a, &tower.tilde, p)?;
    let start = psi
        .iter()
        .find(|b| b.lattice() == tower.tilde.lattice())
        .unwrap_or(&psi[0])
        .clone();
    let mut orbit = vec![start];
    for _ in 0..p {
        let next = star_action(orbit.last().unwrap(), u, p)?;
        orbit.push(next);
    }
    let a_set: BTreeSet<&Lattice> = psi.iter().map(|b| b.lattice()).collect();
    let o_set: BTreeSet<&Lattice> = orbit.iter().map(|b| b.lattice()).collect();
    invariant!(a_set == o_set, "star-action orbit differs from the hyperplane filter");
    Ok(orbit)
}

/// `I(Õ)` as the disjoint union of classes of Ψ^O_Õ(a) over `[a] ∈ I(O)`.
pub fn tilde_class_set(tower: &OrderTower, maximal: &ClassSet) -> Result<ClassSet> {
    let u = gh_generator(&tower.maximal, tower.p)?;
    let mut reps: Vec<LeftIdeal> = Vec::new();
    let mut parents = Vec::new();
    for (ai, a) in maximal.reps.iter().enumerate() {
        for b in psi_tilde_orbit(a, tower, &u)? {
            let mut known = None;
            for (ri, r) in reps.iter().enumerate() {
                if r.is_equivalent(&b)? {
                    known = Some(ri);
                    break;
                }
            }
            match known {
                Some(ri) => invariant!(parents[ri] == ai, "Õ-classes under distinct O-classes coincide"),
                None => {
                    reps.push(b);
                    parents.push(ai);
                }
            }
        }
    }
    let heights = reps.iter().map(|r| r.height()).collect::<Result<Vec<_>>>()?;
    Ok(ClassSet {
        kind: OrderKind::Tilde,
        order: tower.tilde.clone(),
        reps,
        heights,
        parents,
    })
}

/// One element of Ψ^Õ_O'(b) per Õ-class (the target order itself under Õ).
pub fn psi_p2_first(b: &LeftIdeal, tower: &OrderTower, target: &LevelP2Order) -> Result<Vec<LeftIdeal>> {
    let mut psi = psi_p2(b, target, tower.p)?;
    if let Some(pos) = psi.iter().position(|c| c.lattice() == target.order.lattice()) {
        let first = psi.remove(pos);
        psi.insert(0, first);
    }
    Ok(psi)
}

/// `I(O')` as the union of Ψ^Õ_O'(b) over `[b] ∈ I(Õ)`, with pairwise
/// inequivalence verified.
pub fn level_p2_class_set(tower: &OrderTower, target: &LevelP2Order, tilde: &ClassSet) -> Result<ClassSet> {
    let mut reps = Vec::new();
    let mut parents = Vec::new();
    for (bi, b) in tilde.reps.iter().enumerate() {
        for c in psi_p2_first(b, tower, target)? {
            reps.push(c);
            parents.push(bi);
        }
    }
    let n = reps.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let clash = pairs
        .par_iter()
        .map(|&(i, j)| reps[i].is_equivalent(&reps[j]).map(|e| e.then_some((i, j))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    if let Some((i, j)) = clash {
        return Err(Error::Invariant(format!("O'-classes {i} and {j} are equivalent")));
    }
    let heights = reps
        .par_iter()
        .map(|r| r.height())
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassSet {
        kind: OrderKind::LevelP2 { sigma: target.sigma },
        order: target.order.clone(),
        reps,
        heights,
        parents,
    })
}

/// The three class sets of a tower for one chosen level-`p²` order.
#[derive(Clone, Debug)]
pub struct ClassTower {
    pub tower: OrderTower,
    pub maximal: ClassSet,
    pub tilde: ClassSet,
}

impl ClassTower {
    pub fn new(p: i128) -> Result<ClassTower> {
        let tower = OrderTower::new(p)?;
        let maximal = maximal_class_set(&tower)?;
        let tilde = tilde_class_set(&tower, &maximal)?;
        Ok(ClassTower { tower, maximal, tilde })
    }

    pub fn level_p2(&self, sigma: i32) -> Result<ClassSet> {
        let target = self.tower.canonical(sigma)?;
        level_p2_class_set(&self.tower, target, &self.tilde)
    }

    /// For each Õ-class, one ideal of Ψ^Õ_O'(b); all share one right order.
    pub fn subideal_per_class(&self, target: &LevelP2Order) -> Result<Vec<LeftIdeal>> {
        self.tilde
            .reps
            .iter()
            .map(|b| psi_p2_first(b, &self.tower, target).map(|v| v[0].clone()))
            .collect()
    }
}

/// Matrix of ψ^Õ_O' from class coordinates on M(Õ) to M(O').
pub fn psi_matrix(level_p2: &ClassSet, tilde_len: usize) -> Vec<Vec<i128>> {
    let mut m = vec![vec![0i128; tilde_len]; level_p2.len()];
    for (c, &parent) in level_p2.parents.iter().enumerate() {
        m[c][parent] = 1;
    }
    m
}
