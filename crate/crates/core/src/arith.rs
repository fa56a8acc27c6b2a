//! Elementary integer arithmetic: gcd/xgcd, residue symbols, primes,
//! valuations and Hilbert symbols.

use num_integer::Integer;

pub fn gcd(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

pub fn lcm(a: i128, b: i128) -> i128 {
    if a == 0 || b == 0 {
        return 0;
    }
    a.lcm(&b)
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes `<= n` by a plain sieve.
pub fn primes_up_to(n: usize) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

/// Prime factorisation as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(mut n: i128, p: i128) -> u32 {
    assert!(n != 0, "valuation of zero");
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn mod_pow(base: i128, mut exp: u64, m: i128) -> i128 {
    let mut result = 1i128.rem_euclid(m);
    let mut b = base.rem_euclid(m);
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: i128, m: i128) -> Option<i128> {
    let (g, s, _) = xgcd(a.rem_euclid(m), m);
    (g == 1).then(|| s.rem_euclid(m))
}

/// Legendre symbol `(a | p)` for an odd prime `p`.
pub fn legendre(a: i128, p: i128) -> i32 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    if mod_pow(a, ((p - 1) / 2) as u64, p) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(a | n)` for `n >= 1`.
pub fn kronecker(a: i128, n: i128) -> i32 {
    assert!(n >= 1, "kronecker symbol needs a positive modulus");
    let mut result = 1;
    for (q, e) in factorize(n as u64) {
        let q = q as i128;
        let s = if q == 2 {
            if a % 2 == 0 {
                0
            } else {
                match a.rem_euclid(8) {
                    1 | 7 => 1,
                    _ => -1,
                }
            }
        } else {
            legendre(a, q)
        };
        if s == 0 {
            return 0;
        }
        if e % 2 == 1 {
            result *= s;
        }
    }
    result
}

/// Hilbert symbol `(a, b)_q` at a finite prime `q`, for nonzero integers.
pub fn hilbert_symbol(a: i128, b: i128, q: i128) -> i32 {
    assert!(a != 0 && b != 0);
    let alpha = valuation(a, q);
    let beta = valuation(b, q);
    let u = a / q.pow(alpha);
    let v = b / q.pow(beta);
    if q == 2 {
        let eps = |x: i128| ((x - 1) / 2).rem_euclid(2);
        let omega = |x: i128| ((x * x - 1) / 8).rem_euclid(2);
        let e = eps(u) * eps(v) + alpha as i128 * omega(v) + beta as i128 * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s = if (alpha * beta) % 2 == 1 && ((q - 1) / 2) % 2 == 1 {
            -1
        } else {
            1
        };
        if beta % 2 == 1 {
            s *= legendre(u, q);
        }
        if alpha % 2 == 1 {
            s *= legendre(v, q);
        }
        s
    }
}

/// Is `n` squarefree (n != 0)?
pub fn is_squarefree(n: i128) -> bool {
    n != 0 && factorize(n.unsigned_abs() as u64).iter().all(|&(_, e)| e == 1)
}

/// Is `d` a fundamental discriminant (of a quadratic field)?
pub fn is_fundamental_discriminant(d: i128) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// Integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xgcd_identity() {
        for a in -20..20 {
            for b in -20..20 {
                let (g, s, t) = xgcd(a, b);
                assert_eq!(s * a + t * b, g);
                assert_eq!(g, gcd(a, b));
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(5, 2), -1);
    }

    #[test]
    fn legendre_matches_euler_brute_force() {
        for p in [3i128, 5, 7, 11, 13] {
            for a in 1..p {
                let square = (1..p).any(|x| (x * x - a).rem_euclid(p) == 0);
                assert_eq!(legendre(a, p) == 1, square);
            }
        }
    }

    #[test]
    fn hilbert_product_formula() {
        // The number of places where (a,b) = -1 is even; for a,b < 0 the
        // infinite place contributes one.
        for a in [-1i128, -2, -3, -5, -7] {
            for b in [-1i128, -3, -5, -7, -11, -13, -17, -19] {
                let mut ram = 1;
                for q in [2i128, 3, 5, 7, 11, 13, 17, 19] {
                    if hilbert_symbol(a, b, q) == -1 {
                        ram += 1;
                    }
                }
                assert_eq!(ram % 2, 0, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn fundamental_discriminants() {
        assert!(is_fundamental_discriminant(-7));
        assert!(is_fundamental_discriminant(-8));
        assert!(is_fundamental_discriminant(-84));
        assert!(!is_fundamental_discriminant(-28));
        assert!(!is_fundamental_discriminant(-12 * 9));
        assert!(!is_fundamental_discriminant(-14));
    }
}
