//! One pass/fail line per acceptance criterion. Runs as a plain binary so the
//! lines always reach stdout; exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use quatlift::brandt::mat_mul;
use quatlift::orders::{psi_matrix, psi_p2, psi_tilde, psi_tilde_orbit, star_action, ClassTower};
use quatlift::spectral::{
    alpha_and_conditions, an_sequence, coefficients_needed, decompose, e_f_vector, gross_table, ComponentKind,
    IsotypicComponent, Tolerances, Verdict,
};
use quatlift::theta::{default_depth, edhecke_defect, theta_data, LiftData};
use quatlift::{ClassModule, Lattice, LeftIdeal, Quat, QuaternionAlgebra, Rat};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Ctx) -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

/// Parses `a+bi+cj+dk` or `(a+bi+cj+dk)/2`.
fn parse_elt(alg: QuaternionAlgebra, s: &str) -> Quat {
    let s = s.trim();
    let (body, den) = match s.strip_prefix('(') {
        Some(rest) => {
            let (b, d) = rest.split_once(")/").expect("closing denominator");
            (b, d.parse::<i128>().expect("denominator"))
        }
        None => (s, 1),
    };
    let mut c = [0i128; 4];
    for term in body.replace('-', "+-").split('+').filter(|t| !t.is_empty()) {
        let (num, slot) = match term.chars().last().unwrap() {
            'i' => (&term[..term.len() - 1], 1),
            'j' => (&term[..term.len() - 1], 2),
            'k' => (&term[..term.len() - 1], 3),
            _ => (term, 0),
        };
        c[slot] += match num {
            "" => 1,
            "-" => -1,
            n => n.parse::<i128>().expect("coefficient"),
        };
    }
    alg.elt(c, den)
}

fn parse_lattice(alg: QuaternionAlgebra, s: &str) -> Lattice {
    let gens: Vec<Quat> = s.split(',').map(|g| parse_elt(alg, g)).collect();
    Lattice::from_generators(&gens).expect("reference lattice has full rank")
}

/// `Ψ^O_Õ(O)` at p = 7, as `b_1..b_8`.
const SUBIDEALS_O: [&str; 8] = [
    "1, 7i, (1+j)/2, (7i+k)/2",
    "7, 4+i, (7+j)/2, (4+i+k)/2",
    "7, 1+i, (7+j)/2, (8+i+k)/2",
    "7, 2+i, (7+j)/2, (2+i+k)/2",
    "7, i, (7+j)/2, (i+k)/2",
    "7, 5+i, (7+j)/2, (12+i+k)/2",
    "7, 6+i, (7+j)/2, (6+i+k)/2",
    "7, 3+i, (7+j)/2, (10+i+k)/2",
];

const ORDER_PLUS: &str = "1, 7i, (1+j)/2, (7i+7k)/2";
const ORDER_MINUS: &str = "1, 7i, (1+7j)/2, (1+7i+5j+k)/2";

/// Subideals under `b_1..b_4`: `[i][row] = (plus, minus)`.
const SUBIDEALS_P2: [[(&str, &str); 7]; 4] = [
    [
        ("1, 7i, (1+j)/2, (7i+7k)/2", "1, 7i, (1+7j)/2, (1+7i+5j+k)/2"),
        ("7, 7i, (7+j)/2, (2+7i+k)/2", "7, 7i, (1+j)/2, (2+7i+k)/2"),
        ("7, 7i, (7+j)/2, (4+7i+k)/2", "7, 7i, (3+j)/2, (6+7i+k)/2"),
        ("7, 7i, (7+j)/2, (6+7i+k)/2", "7, 7i, (5+j)/2, (10+7i+k)/2"),
        ("7, 7i, (7+j)/2, (8+7i+k)/2", "7, 7i, (9+j)/2, (4+7i+k)/2"),
        ("7, 7i, (7+j)/2, (10+7i+k)/2", "7, 7i, (11+j)/2, (8+7i+k)/2"),
        ("7, 7i, (7+j)/2, (12+7i+k)/2", "7, 7i, (13+j)/2, (12+7i+k)/2"),
    ],
    [
        ("7, 4+i, (7+7j)/2, (11+i+3j+k)/2", "7, 4+i, (7+7j)/2, (4+i+k)/2"),
        ("7, 7i, (1+2i+j)/2, (4+i+k)/2", "7, 7i, (1+2i+j)/2, (7i+k)/2"),
        ("7, 7i, (3+6i+j)/2, (12+3i+k)/2", "7, 7i, (3+6i+j)/2, (7i+k)/2"),
        ("7, 7i, (5+10i+j)/2, (6+5i+k)/2", "7, 7i, (5+10i+j)/2, (7i+k)/2"),
        ("7, 7i, (9+4i+j)/2, (8+9i+k)/2", "7, 7i, (9+4i+j)/2, (7i+k)/2"),
        ("7, 7i, (11+8i+j)/2, (2+11i+k)/2", "7, 7i, (11+8i+j)/2, (7i+k)/2"),
        ("7, 7i, (13+12i+j)/2, (10+13i+k)/2", "7, 7i, (13+12i+j)/2, (7i+k)/2"),
    ],
    [
        ("7, 1+i, (7+7j)/2, (8+i+6j+k)/2", "7, 1+i, (7+7j)/2, (8+i+2j+k)/2"),
        ("7, 7i, (1+8i+j)/2, (8+i+k)/2", "7, 7i, (1+8i+j)/2, (12+5i+k)/2"),
        ("7, 7i, (3+10i+j)/2, (10+3i+k)/2", "7, 7i, (3+10i+j)/2, (8+i+k)/2"),
        ("7, 7i, (5+12i+j)/2, (12+5i+k)/2", "7, 7i, (5+12i+j)/2, (4+11i+k)/2"),
        ("7, 7i, (9+2i+j)/2, (2+9i+k)/2", "7, 7i, (9+2i+j)/2, (10+3i+k)/2"),
        ("7, 7i, (11+4i+j)/2, (4+11i+k)/2", "7, 7i, (11+4i+j)/2, (6+13i+k)/2"),
        ("7, 7i, (13+6i+j)/2, (6+13i+k)/2", "7, 7i, (13+6i+j)/2, (2+9i+k)/2"),
    ],
    [
        ("7, 2+i, (7+7j)/2, (9+i+5j+k)/2", "7, 2+i, (7+7j)/2, (9+i+j+k)/2"),
        ("7, 7i, (1+4i+j)/2, (2+i+k)/2", "7, 7i, (1+4i+j)/2, (6+3i+k)/2"),
        ("7, 7i, (3+12i+j)/2, (6+3i+k)/2", "7, 7i, (3+12i+j)/2, (4+9i+k)/2"),
        ("7, 7i, (5+6i+j)/2, (10+5i+k)/2", "7, 7i, (5+6i+j)/2, (2+i+k)/2"),
        ("7, 7i, (9+8i+j)/2, (4+9i+k)/2", "7, 7i, (9+8i+j)/2, (12+13i+k)/2"),
        ("7, 7i, (11+2i+j)/2, (8+11i+k)/2", "7, 7i, (11+2i+j)/2, (10+5i+k)/2"),
        ("7, 7i, (13+10i+j)/2, (12+13i+k)/2", "7, 7i, (13+10i+j)/2, (8+11i+k)/2"),
    ],
];

/// `q + 1 - #E(F_q)` for `y² + xy = x³ - x² - 2x - 1`, a conductor-49 curve.
fn ap_49(q: i64) -> i64 {
    let mut affine = 0;
    for x in 0..q {
        for y in 0..q {
            if (y * y + x * y - x * x * x + x * x + 2 * x + 1).rem_euclid(q) == 0 {
                affine += 1;
            }
        }
    }
    q - affine
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

struct Ctx {
    towers: Vec<(i128, ClassTower)>,
}

impl Ctx {
    fn tower(&self, p: i128) -> &ClassTower {
        &self.towers.iter().find(|(q, _)| *q == p).expect("tower built").1
    }
}

fn subideals_tilde(ctx: &Ctx) -> Outcome {
    let ct = ctx.tower(7);
    let alg = ct.tower.alg;
    let unit = LeftIdeal::unit(ct.tower.maximal.clone());
    let psi = psi_tilde(&unit, &ct.tower.tilde, 7).map_err(e)?;
    let got: BTreeSet<Lattice> = psi.iter().map(|b| b.lattice().clone()).collect();
    let want: BTreeSet<Lattice> = SUBIDEALS_O.iter().map(|s| parse_lattice(alg, s)).collect();
    ensure(psi.len() == 8 && got == want, || format!("Ψ gave {} ideals, {} match", psi.len(), got.intersection(&want).count()))?;
    let b: Vec<LeftIdeal> = SUBIDEALS_O
        .iter()
        .map(|s| LeftIdeal::new(parse_lattice(alg, s), ct.tower.tilde.clone()))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    for i in 0..4 {
        ensure(b[i].is_equivalent(&b[i + 4]).map_err(e)?, || format!("b{} ≢ b{}", i + 1, i + 5))?;
        for j in 0..i {
            ensure(!b[i].is_equivalent(&b[j]).map_err(e)?, || format!("b{} ≡ b{}", i + 1, j + 1))?;
        }
    }
    ensure(ct.tilde.len() == 4, || format!("|I(Õ)| = {}", ct.tilde.len()))?;
    Ok("8 ideals equal the reference list, b_i ≡ b_{4+i}, |I(Õ)| = 4".into())
}

fn subideals_p2(ctx: &Ctx) -> Outcome {
    let ct = ctx.tower(7);
    let alg = ct.tower.alg;
    let mut checked = 0;
    for (col, order) in [ORDER_PLUS, ORDER_MINUS].iter().enumerate() {
        let target = ct
            .tower
            .find_level_p2(&parse_lattice(alg, order))
            .ok_or_else(|| format!("order {order} is not a level-p² order"))?;
        let expected_sigma = if col == 0 { 1 } else { -1 };
        ensure(target.sigma == expected_sigma, || format!("σ({order}) = {}", target.sigma))?;
        for (i, rows) in SUBIDEALS_P2.iter().enumerate() {
            let b = LeftIdeal::new(parse_lattice(alg, SUBIDEALS_O[i]), ct.tower.tilde.clone()).map_err(e)?;
            let got: BTreeSet<Lattice> = psi_p2(&b, target, 7)
                .map_err(e)?
                .iter()
                .map(|c| c.lattice().clone())
                .collect();
            let want: BTreeSet<Lattice> = rows
                .iter()
                .map(|r| parse_lattice(alg, if col == 0 { r.0 } else { r.1 }))
                .collect();
            ensure(got.len() == 7 && got == want, || {
                format!("b{} σ={expected_sigma}: {} of 7 match", i + 1, got.intersection(&want).count())
            })?;
            checked += 7;
        }
    }
    Ok(format!("{checked} subideals equal the reference list"))
}

fn star(ctx: &Ctx) -> Outcome {
    let ct = ctx.tower(7);
    let alg = ct.tower.alg;
    let y = alg.elt([1, 2, 1, 0], 2);
    let b1 = LeftIdeal::unit(ct.tower.tilde.clone());
    let b2 = star_action(&b1, &y, 7).map_err(e)?;
    ensure(b2.lattice() == &parse_lattice(alg, SUBIDEALS_O[1]), || format!("b1 ⋆ y = {}", b2.lattice()))?;
    let unit = LeftIdeal::unit(ct.tower.maximal.clone());
    let orbit: BTreeSet<Lattice> = psi_tilde_orbit(&unit, &ct.tower, &y)
        .map_err(e)?
        .iter()
        .map(|b| b.lattice().clone())
        .collect();
    let filtered: BTreeSet<Lattice> = psi_tilde(&unit, &ct.tower.tilde, 7)
        .map_err(e)?
        .iter()
        .map(|b| b.lattice().clone())
        .collect();
    ensure(orbit.len() == 8 && orbit == filtered, || format!("orbit of {} differs from filter output", orbit.len()))?;
    Ok("b1 ⋆ (1+2i+j)/2 = b2; orbit of 8 equals hyperplane filter".into())
}

fn structure(ctx: &Ctx) -> Outcome {
    for p in [7, 11, 13] {
        let t = &ctx.tower(p).tower;
        ensure(t.maximal.disc() == p, || format!("p={p}: disc(O) = {}", t.maximal.disc()))?;
        let o = &t.tilde;
        ensure((o.twolevel(), o.level(), o.omega()) == (p * p, 4 * p, p), || {
            format!("p={p}: Õ has (n, n1, ω) = ({}, {}, {})", o.twolevel(), o.level(), o.omega())
        })?;
        ensure(t.level_p2.len() as i128 == p + 1, || format!("p={p}: {} level-p² orders", t.level_p2.len()))?;
        for o in &t.level_p2 {
            let o = &o.order;
            ensure((o.twolevel(), o.level(), o.omega()) == (p * p * p, 4 * p * p, p), || {
                format!("p={p}: O' has (n, n1, ω) = ({}, {}, {})", o.twolevel(), o.level(), o.omega())
            })?;
        }
    }
    Ok("n, n1, ω of Õ and all O'; disc(O) = p; p ∈ {7,11,13}".into())
}

const HECKE_MAX: u64 = 30;

fn hecke_suite(module: &ClassModule, label: &str) -> Result<(), String> {
    let disc = module.disc() as u64;
    let n = module.dim();
    let bs = module.brandt_matrices(HECKE_MAX).map_err(e)?;
    let b = |m: u64| &bs[m as usize - 1].entries;
    let id: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    ensure(b(1) == &id, || format!("{label}: B_1 ≠ I"))?;
    let good: Vec<u64> = (1..=12).filter(|&m| gcd(m, disc) == 1).collect();
    for &m in &good {
        ensure(bs[m as usize - 1].is_self_adjoint(module.heights()), || format!("{label}: B_{m} not self-adjoint"))?;
        for &k in &good {
            ensure(mat_mul(b(m), b(k)) == mat_mul(b(k), b(m)), || format!("{label}: B_{m}, B_{k} do not commute"))?;
            if m < k && gcd(m, k) == 1 && m * k <= HECKE_MAX {
                ensure(mat_mul(b(m), b(k)) == *b(m * k), || format!("{label}: B_{m}B_{k} ≠ B_{}", m * k))?;
            }
        }
    }
    for q in [2u64, 3] {
        if disc % q == 0 {
            continue;
        }
        let mut k = q * q;
        while k <= HECKE_MAX {
            let rec: Vec<Vec<i128>> = mat_mul(b(k / q), b(q))
                .iter()
                .zip(b(k / (q * q)))
                .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - q as i128 * y).collect())
                .collect();
            ensure(rec == *b(k), || format!("{label}: recursion fails at {k}"))?;
            k *= q;
        }
    }
    for q in [2u64, 3, 5, 7, 11] {
        if disc % q != 0 {
            ensure(bs[q as usize - 1].column_sums().iter().all(|&s| s == q as i128 + 1), || {
                format!("{label}: column sums of B_{q}")
            })?;
        }
    }
    Ok(())
}

fn hecke(ctx: &Ctx) -> Outcome {
    let mut count = 0;
    for p in [7, 11, 13] {
        let ct = ctx.tower(p);
        let m = ClassModule::new(ct.tilde.clone()).map_err(e)?;
        hecke_suite(&m, &format!("M(Õ) p={p}"))?;
        count += 1;
        for s in [1, -1] {
            let m = ClassModule::new(ct.level_p2(s).map_err(e)?).map_err(e)?;
            hecke_suite(&m, &format!("M(O'{s:+}) p={p}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} modules, B_m for m ≤ {HECKE_MAX}"))
}

fn edhecke_on(module: &ClassModule, label: &str) -> Result<usize, String> {
    let theta = theta_data(module).map_err(e)?;
    let mut n = 0;
    for q in [2u64, 3, 5] {
        if module.disc() % q as i128 == 0 {
            continue;
        }
        for d in 0..=200i128 {
            if (-d).rem_euclid(4) > 1 {
                continue;
            }
            let defect = edhecke_defect(module, &theta, d, q).map_err(e)?;
            ensure(defect.iter().all(|&x| x == 0), || format!("{label}: d={d} q={q} defect {defect:?}"))?;
            n += 1;
        }
    }
    Ok(n)
}

fn edhecke(ctx: &Ctx) -> Outcome {
    let mut n = 0;
    for p in [7, 11] {
        let ct = ctx.tower(p);
        n += edhecke_on(&ClassModule::new(ct.tilde.clone()).map_err(e)?, &format!("M(Õ) p={p}"))?;
        for s in [1, -1] {
            let m = ClassModule::new(ct.level_p2(s).map_err(e)?).map_err(e)?;
            n += edhecke_on(&m, &format!("M(O'{s:+}) p={p}"))?;
        }
    }
    Ok(format!("{n} identities (q ∈ {{2,3,5}}, d ≤ 200, -d ≡ 0,1 mod 4)"))
}

fn psi_commutation(ctx: &Ctx) -> Outcome {
    let mut n = 0;
    for p in [7i128, 11] {
        let ct = ctx.tower(p);
        let tilde = ClassModule::new(ct.tilde.clone()).map_err(e)?;
        let bt = tilde.brandt_matrices(20).map_err(e)?;
        for s in [1, -1] {
            let cs = ct.level_p2(s).map_err(e)?;
            let psi = psi_matrix(&cs, ct.tilde.len());
            let lower = ClassModule::new(cs).map_err(e)?;
            let bl = lower.brandt_matrices(20).map_err(e)?;
            for m in (1..=20u64).filter(|m| *m as i128 % p != 0) {
                let i = m as usize - 1;
                ensure(mat_mul(&bl[i].entries, &psi) == mat_mul(&psi, &bt[i].entries), || {
                    format!("p={p} σ={s}: t_{m}ψ ≠ ψt_{m}")
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} identities t_m∘ψ = ψ∘t_m"))
}

fn mass(ctx: &Ctx) -> Outcome {
    for p in [7, 11, 13] {
        let got = ctx.tower(p).maximal.mass();
        ensure(got == Rat::new(p - 1, 24), || format!("p={p}: mass {got}"))?;
    }
    Ok("Σ 1/(2w) = (p-1)/24 for p ∈ {7,11,13}".into())
}

fn components(ct: &ClassTower, p: i128) -> Result<(ClassModule, Vec<IsotypicComponent>), String> {
    let maximal = ClassModule::new(ct.maximal.clone()).map_err(e)?;
    let reference = decompose(&maximal, p, 40, 1e-10, None).map_err(e)?;
    let module = ClassModule::new(ct.tilde.clone()).map_err(e)?;
    let comps = decompose(&module, p, 40, 1e-10, Some(&reference)).map_err(e)?;
    Ok((module, comps))
}

fn eigen_oracle(ctx: &Ctx) -> Outcome {
    let (_, comps) = components(ctx.tower(7), 7)?;
    let primes = [2u64, 3, 5, 11, 13];
    let oracle: Vec<i128> = primes.iter().map(|&q| ap_49(q as i64) as i128).collect();
    let hit = comps.iter().any(|c| {
        c.kind.is_cuspidal()
            && c.exact_eigenvalues.as_ref().is_some_and(|ev| {
                primes
                    .iter()
                    .zip(&oracle)
                    .all(|(q, a)| c.primes.iter().position(|r| r == q).is_some_and(|k| ev[k] == *a))
            })
    });
    ensure(hit, || format!("no cuspidal component with λ_q = {oracle:?}"))?;
    Ok(format!("λ_q = {oracle:?} for q ∈ {primes:?}"))
}

fn gross(ctx: &Ctx) -> Outcome {
    let ct = ctx.tower(7);
    let (module, comps) = components(ct, 7)?;
    let f = comps
        .iter()
        .find(|c| c.kind == ComponentKind::New)
        .ok_or("no newform component at p = 7")?;
    let tol = Tolerances::default();
    let a = an_sequence(&module, f, 7, coefficients_needed(7, 150)).map_err(e)?;
    let mut report = Vec::new();
    let mut nonzero = 0;
    for s in [1, -1] {
        let lift = LiftData::new(ct, ct.tower.canonical(s).map_err(e)?).map_err(e)?;
        let cond = alpha_and_conditions(f, &a, 7, s, tol.fit).map_err(e)?;
        let rep = gross_table(&module, f, &lift, &a, &cond.l_f, 7, 150, default_depth(7), &tol).map_err(e)?;
        if rep.lift.zero {
            continue;
        }
        nonzero += 1;
        let used = rep.rows.iter().filter(|r| r.ratio.is_some()).count();
        ensure(used >= 5, || format!("σ={s}: only {used} rows with c(d) ≠ 0"))?;
        ensure(rep.verdict == Verdict::Pass, || format!("σ={s}: {:?}", rep.verdict))?;
        report.push(format!("σ={s:+}: {used} rows, spread {:.1e}", rep.spread.unwrap_or(0.0)));
    }
    ensure(nonzero > 0, || "both lifts vanish".into())?;
    Ok(report.join("; "))
}

fn vanishing(ctx: &Ctx) -> Outcome {
    let tol = Tolerances::default();
    let (mut predicted, mut pairs) = (0, 0);
    for p in [7i128, 11, 13, 17, 19] {
        let ct = ctx.tower(p);
        let (module, comps) = components(ct, p)?;
        let depth = default_depth(p).max(150);
        let lifts: Vec<LiftData> = [1, -1]
            .iter()
            .map(|&s| LiftData::new(ct, ct.tower.canonical(s)?))
            .collect::<Result<_, _>>()
            .map_err(e)?;
        for c in comps.iter().filter(|c| matches!(c.kind, ComponentKind::New | ComponentKind::QuadraticTwist)) {
            let a = an_sequence(&module, c, p, coefficients_needed(p, 1)).map_err(e)?;
            for lift in &lifts {
                pairs += 1;
                let cond = alpha_and_conditions(c, &a, p, lift.sigma, tol.fit).map_err(e)?;
                let v1 = e_f_vector(&module, c, lift, depth).map_err(e)?;
                if cond.predicts_zero() {
                    predicted += 1;
                    ensure(v1.zero, || format!("p={p} σ={}: conditions hold but lift is nonzero", lift.sigma))?;
                }
                let v2 = e_f_vector(&module, c, lift, 2 * depth).map_err(e)?;
                let (f1, x1) = v1.coefficients(lift).map_err(e)?;
                let (f2, x2) = v2.coefficients(lift).map_err(e)?;
                let stable = match (x1, x2) {
                    (Some(x1), Some(x2)) => x1[..=150] == x2[..=150],
                    _ => {
                        let scale = f1.iter().take(151).fold(1e-300f64, |m, x| m.max(x.abs()));
                        f1.iter().zip(&f2).take(151).all(|(x, y)| (x - y).abs() <= 1e-9 * scale)
                    }
                };
                ensure(v1.zero == v2.zero && stable, || {
                    format!("p={p} σ={}: c(d) changes between depth {depth} and {}", lift.sigma, 2 * depth)
                })?;
            }
        }
    }
    Ok(format!("{predicted} predicted zeros all vanish; {pairs} pairs depth-stable"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let towers: Vec<(i128, ClassTower)> = [7, 11, 13, 17, 19]
        .iter()
        .map(|&p| (p, ClassTower::new(p).unwrap_or_else(|err| panic!("class tower p={p}: {err}"))))
        .collect();
    let ctx = Ctx { towers };
    let criteria: [Criterion; 11] = [
        ("Õ-subideals of O and I(Õ)", subideals_tilde),
        ("O±-subideals", subideals_p2),
        ("star action", star),
        ("structure constants", structure),
        ("Hecke algebra", hecke),
        ("e_d Hecke identity", edhecke),
        ("ψ commutation", psi_commutation),
        ("mass formula", mass),
        ("eigenvalue oracle", eigen_oracle),
        ("Gross ratio at p = 7", gross),
        ("vanishing and depth stability", vanishing),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| f(&ctx))).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} ({secs:.1}s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail} ({secs:.1}s)", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
