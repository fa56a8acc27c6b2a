//! Row Hermite normal form of full-rank integer lattices.
//!
//! The output basis is upper triangular with positive pivots and every entry
//! above a pivot reduced into `[0, pivot)`. Once the partial basis reaches full
//! rank, incoming generators are reduced modulo its determinant `D`, which is
//! valid because `D·Z^n` lies in the lattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::xgcd;
use crate::error::{Error, Result};

pub fn hnf(gens: &[Vec<i128>], n: usize) -> Result<Vec<Vec<i128>>> {
    let mut rows: Vec<Option<Vec<i128>>> = vec![None; n];
    let mut modulus: Option<i128> = None;
    for g in gens {
        assert_eq!(g.len(), n, "generator dimension");
        if insert(&mut rows, g.clone(), &mut modulus).is_none() {
            return hnf_big(gens, n);
        }
    }
    if rows.iter().any(|r| r.is_none()) {
        return Err(Error::InvalidInput(format!("generators span rank < {n}")));
    }
    let mut h: Vec<Vec<i128>> = rows.into_iter().map(|r| r.unwrap()).collect();
    reduce_above(&mut h);
    Ok(h)
}

/// Same reduction in arbitrary precision, used when intermediate entries
/// overflow `i128` before the basis reaches full rank.
fn hnf_big(gens: &[Vec<i128>], n: usize) -> Result<Vec<Vec<i128>>> {
    let mut rows: Vec<Option<Vec<BigInt>>> = vec![None; n];
    let mut modulus: Option<BigInt> = None;
    for g in gens {
        let mut v: Vec<BigInt> = g.iter().map(|&x| BigInt::from(x)).collect();
        for c in 0..n {
            if let Some(d) = &modulus {
                for x in v.iter_mut().skip(c) {
                    *x = x.mod_floor(d);
                }
            }
            if v[c].is_zero() {
                continue;
            }
            match rows[c].take() {
                None => {
                    if v[c].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    rows[c] = Some(v);
                    break;
                }
                Some(r) => {
                    let e = r[c].extended_gcd(&v[c]);
                    let (rc, vc) = (&r[c] / &e.gcd, &v[c] / &e.gcd);
                    let mut pivot: Vec<BigInt> = (0..n).map(|k| &e.x * &r[k] + &e.y * &v[k]).collect();
                    let rest: Vec<BigInt> = (0..n).map(|k| &rc * &v[k] - &vc * &r[k]).collect();
                    if let Some(d) = &modulus {
                        for x in pivot.iter_mut().skip(c + 1) {
                            *x = x.mod_floor(d);
                        }
                    }
                    rows[c] = Some(pivot);
                    v = rest;
                }
            }
        }
        if rows.iter().all(|r| r.is_some()) {
            let det: BigInt = (0..n).map(|i| rows[i].as_ref().unwrap()[i].clone()).product();
            modulus = Some(det.abs());
        }
    }
    if rows.iter().any(|r| r.is_none()) {
        return Err(Error::InvalidInput(format!("generators span rank < {n}")));
    }
    let mut h = vec![vec![0i128; n]; n];
    for (i, r) in rows.into_iter().enumerate() {
        let mut r = r.unwrap();
        if let Some(d) = &modulus {
            for x in r.iter_mut().skip(i + 1) {
                *x = x.mod_floor(d);
            }
        }
        for (k, x) in r.iter().enumerate() {
            h[i][k] = x
                .to_i128()
                .ok_or_else(|| Error::Resource("HNF entry exceeds 128 bits".into()))?;
        }
    }
    reduce_above(&mut h);
    Ok(h)
}

fn insert(rows: &mut [Option<Vec<i128>>], mut v: Vec<i128>, modulus: &mut Option<i128>) -> Option<()> {
    let n = v.len();
    for c in 0..n {
        if let Some(d) = *modulus {
            for x in v.iter_mut().skip(c) {
                *x = x.rem_euclid(d);
            }
        }
        if v[c] == 0 {
            continue;
        }
        match rows[c].take() {
            None => {
                if v[c] < 0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                rows[c] = Some(v);
                break;
            }
            Some(r) => {
                let (g, s, t) = xgcd(r[c], v[c]);
                let (rc, vc) = (r[c] / g, v[c] / g);
                let mut pivot = Vec::with_capacity(n);
                let mut rest = Vec::with_capacity(n);
                for k in 0..n {
                    pivot.push(s.checked_mul(r[k])?.checked_add(t.checked_mul(v[k])?)?);
                    rest.push(rc.checked_mul(v[k])?.checked_sub(vc.checked_mul(r[k])?)?);
                }
                if let Some(d) = *modulus {
                    for x in pivot.iter_mut().skip(c + 1) {
                        *x = x.rem_euclid(d);
                    }
                }
                rows[c] = Some(pivot);
                v = rest;
            }
        }
    }
    if rows.iter().all(|r| r.is_some()) {
        let mut det: i128 = 1;
        for (i, r) in rows.iter().enumerate() {
            det = det.checked_mul(r.as_ref().unwrap()[i])?;
        }
        *modulus = Some(det.abs());
    }
    Some(())
}

fn reduce_above(h: &mut [Vec<i128>]) {
    let n = h.len();
    for j in 0..n {
        let pj = h[j][j];
        for i in 0..j {
            let q = h[i][j].div_euclid(pj);
            if q != 0 {
                for k in j..n {
                    h[i][k] -= q * h[j][k];
                }
            }
        }
    }
}

/// Coordinates of an integer vector in an HNF basis, if it is in the lattice.
pub fn solve_in_hnf(h: &[Vec<i128>], v: &[i128]) -> Option<Vec<i128>> {
    let n = h.len();
    let mut rem = v.to_vec();
    let mut y = vec![0i128; n];
    for c in 0..n {
        if rem[c] % h[c][c] != 0 {
            return None;
        }
        y[c] = rem[c] / h[c][c];
        if y[c] != 0 {
            for k in c..n {
                rem[k] -= y[c] * h[c][k];
            }
        }
    }
    Some(y)
}
