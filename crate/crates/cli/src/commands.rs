use quatlift::brandt::mat_mul;
use quatlift::orders::psi_matrix;
use quatlift::spectral::{
    alpha_and_conditions, an_sequence, coefficients_needed, decompose, gross_table, ComponentKind, IsotypicComponent,
    Verdict,
};
use quatlift::theta::{edhecke_defect, theta_data, LiftData};
use quatlift::{ClassModule, ClassSet, ClassTower, Rat};

use crate::config::{Format, OrderArg, RunConfig};
use crate::report::*;
use crate::CliError;

/// Rendered artifact plus whether the run found a verification failure.
pub struct Artifact {
    pub body: String,
    pub failed: bool,
}

fn json<T: serde::Serialize>(value: &T, failed: bool) -> Result<Artifact, CliError> {
    let mut body = serde_json::to_string_pretty(value)?;
    body.push('\n');
    Ok(Artifact { body, failed })
}

fn json_only(cfg: &RunConfig, command: &str) -> Result<(), CliError> {
    if cfg.format == Format::Csv {
        return Err(CliError::Usage(format!("{command} writes JSON only; CSV is available for gross")));
    }
    Ok(())
}

fn class_set(ct: &ClassTower, cfg: &RunConfig) -> Result<ClassSet, CliError> {
    Ok(match cfg.order {
        OrderArg::Maximal => ct.maximal.clone(),
        OrderArg::Tilde => ct.tilde.clone(),
        OrderArg::P2 => ct.level_p2(cfg.sigma.expect("validated"))?,
    })
}

fn order_info(cs: &ClassSet, cfg: &RunConfig) -> OrderInfo {
    let o = &cs.order;
    OrderInfo {
        kind: cs.kind.to_string(),
        sigma: (cfg.order == OrderArg::P2).then_some(cfg.sigma).flatten(),
        basis: basis(o.lattice()),
        disc: o.disc(),
        level: o.twolevel(),
        theta_level: o.level(),
        omega: o.omega(),
    }
}

pub fn classes(cfg: &RunConfig) -> Result<Artifact, CliError> {
    json_only(cfg, "classes")?;
    let ct = ClassTower::new(cfg.p)?;
    let cs = class_set(&ct, cfg)?;
    let classes = cs
        .reps
        .iter()
        .enumerate()
        .map(|(i, a)| ClassEntry {
            index: i,
            basis: basis(a.lattice()),
            norm: rat(a.norm()),
            height: cs.heights[i],
            parent: (cfg.order != OrderArg::Maximal).then(|| cs.parents[i]),
        })
        .collect();
    json(
        &ClassesReport {
            meta: Meta::new("classes", cfg, 0),
            order: order_info(&cs, cfg),
            count: cs.len(),
            mass: rat(cs.mass()),
            classes,
        },
        false,
    )
}

pub fn brandt(cfg: &RunConfig, range: (u64, u64)) -> Result<Artifact, CliError> {
    json_only(cfg, "brandt")?;
    let ct = ClassTower::new(cfg.p)?;
    let cs = class_set(&ct, cfg)?;
    let info = order_info(&cs, cfg);
    let module = ClassModule::new(cs)?;
    let all = module.brandt_matrices(range.1)?;
    let matrices = all[range.0 as usize - 1..]
        .iter()
        .map(|b| MatrixEntry {
            m: b.m,
            column_sums: b.column_sums(),
            self_adjoint: b.is_self_adjoint(module.heights()),
            entries: b.entries.clone(),
        })
        .collect();
    json(
        &BrandtReport {
            meta: Meta::new("brandt", cfg, range.1 as usize),
            order: info,
            heights: module.heights().to_vec(),
            matrices,
        },
        false,
    )
}

pub fn theta(cfg: &RunConfig) -> Result<Artifact, CliError> {
    json_only(cfg, "theta")?;
    let depth = cfg.depth();
    let ct = ClassTower::new(cfg.p)?;
    let cs = class_set(&ct, cfg)?;
    let info = order_info(&cs, cfg);
    let module = ClassModule::new(cs)?;
    let data = theta_data(&module)?;
    let mut series = Vec::with_capacity(module.dim());
    let mut character = data.omega;
    for (i, form) in data.forms.iter().enumerate() {
        let e = data.theta32(&module.class_vector(i), depth)?;
        character = e.character;
        series.push(ThetaSeries {
            class: i,
            gram: form.gram().to_vec(),
            coefficients: rats(&e.coeffs),
        });
    }
    json(
        &ThetaReport {
            meta: Meta::new("theta", cfg, depth),
            order: info,
            weight: "3/2",
            level: data.level,
            character,
            series,
        },
        false,
    )
}

fn tilde_components(ct: &ClassTower, cfg: &RunConfig) -> Result<(ClassModule, Vec<IsotypicComponent>), CliError> {
    let maximal = ClassModule::new(ct.maximal.clone())?;
    let reference = decompose(&maximal, cfg.p, cfg.bound, cfg.tol.eigen, None)?;
    let module = ClassModule::new(ct.tilde.clone())?;
    let comps = decompose(&module, cfg.p, cfg.bound, cfg.tol.eigen, Some(&reference))?;
    Ok((module, comps))
}

pub fn eigen(cfg: &RunConfig) -> Result<Artifact, CliError> {
    json_only(cfg, "eigen")?;
    let ct = ClassTower::new(cfg.p)?;
    let (info, comps) = match cfg.order {
        OrderArg::Maximal => {
            let module = ClassModule::new(ct.maximal.clone())?;
            (order_info(&ct.maximal, cfg), decompose(&module, cfg.p, cfg.bound, cfg.tol.eigen, None)?)
        }
        OrderArg::Tilde => (order_info(&ct.tilde, cfg), tilde_components(&ct, cfg)?.1),
        OrderArg::P2 => return Err(CliError::Usage("eigen supports --order maximal or tilde".into())),
    };
    let components = comps
        .iter()
        .enumerate()
        .map(|(i, c)| ComponentEntry {
            index: i,
            kind: c.kind.name(),
            dim: c.dim(),
            primes: c.primes.clone(),
            eigenvalues: c.eigenvalues.clone(),
            exact_eigenvalues: c.exact_eigenvalues.clone(),
            basis: c.exact_basis.as_ref().map(|b| b.iter().map(|v| rats(v)).collect()),
            float_basis: (!c.is_exact()).then(|| c.basis.clone()),
            twist_of_maximal: c.twist_of_maximal,
        })
        .collect();
    json(
        &EigenReport {
            meta: Meta::new("eigen", cfg, 0),
            order: info,
            components,
        },
        false,
    )
}

fn gross_entries(ct: &ClassTower, cfg: &RunConfig) -> Result<(usize, Vec<GrossEntry>), CliError> {
    let (module, comps) = tilde_components(ct, cfg)?;
    let depth = cfg.depth().max(cfg.dmax as usize);
    let need = coefficients_needed(cfg.p, cfg.dmax);
    let lifts = cfg
        .sigmas()
        .into_iter()
        .map(|s| LiftData::new(ct, ct.tower.canonical(s)?))
        .collect::<quatlift::Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for (idx, comp) in comps.iter().enumerate() {
        if !matches!(comp.kind, ComponentKind::New | ComponentKind::QuadraticTwist) {
            continue;
        }
        let a = an_sequence(&module, comp, cfg.p, need)?;
        for lift in &lifts {
            let cond = alpha_and_conditions(comp, &a, cfg.p, lift.sigma, cfg.tol.fit)?;
            let rep = gross_table(&module, comp, lift, &a, &cond.l_f, cfg.p, cfg.dmax, depth, &cfg.tol)?;
            let keep = cfg.dmax as usize + 1;
            let detail = match &rep.verdict {
                Verdict::Pass => None,
                Verdict::Fail(s) | Verdict::Inconclusive(s) => Some(s.clone()),
            };
            out.push(GrossEntry {
                component: idx,
                kind: comp.kind.name(),
                dim: comp.dim(),
                eigenvalues: comp.eigenvalues.clone(),
                sigma: lift.sigma,
                conditions: ConditionFlags {
                    alpha: rat(cond.alpha),
                    epsilon_f: cond.epsilon_f,
                    l_f: (&cond.l_f).into(),
                    pstar_twist: (&cond.pstar_twist).into(),
                    cond_a: cond.cond_a,
                    cond_b: cond.cond_b,
                    predicts_zero: cond.predicts_zero(),
                },
                lift_zero: rep.lift.zero,
                e_f: rep.lift.float.clone(),
                e_f_exact: rep.lift.exact.as_ref().map(|v| rats(v)),
                coefficients: rep.coefficients.iter().take(keep).copied().collect(),
                exact_coefficients: rep.exact_coefficients.as_ref().map(|v| rats(&v[..keep.min(v.len())])),
                rows: rep
                    .rows
                    .iter()
                    .map(|r| RowEntry {
                        d: r.d,
                        c: r.c,
                        c_exact: r.c_exact.map(rat),
                        l_value: (&r.l_value).into(),
                        ratio: r.ratio,
                    })
                    .collect(),
                constant: rep.constant,
                spread: rep.spread,
                status: rep.verdict.label(),
                detail,
            });
        }
    }
    Ok((depth, out))
}

fn csv_opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(|v| v.to_string()).unwrap_or_default()
}

pub fn gross(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let ct = ClassTower::new(cfg.p)?;
    let (depth, reports) = gross_entries(&ct, cfg)?;
    let failed = reports.iter().any(|r| r.status == "fail");
    match cfg.format {
        Format::Json => json(
            &GrossReport {
                meta: Meta::new("gross", cfg, depth),
                reports,
            },
            failed,
        ),
        Format::Csv => {
            let mut body = String::from("component,kind,sigma,d,c,c_exact,l_value,l_error,conductor,epsilon,ratio,status\n");
            for r in &reports {
                for row in &r.rows {
                    body.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                        r.component,
                        r.kind,
                        r.sigma,
                        row.d,
                        row.c,
                        csv_opt(&row.c_exact),
                        row.l_value.value,
                        row.l_value.error,
                        row.l_value.conductor,
                        row.l_value.epsilon,
                        csv_opt(&row.ratio),
                        r.status
                    ));
                }
            }
            Ok(Artifact { body, failed })
        }
    }
}

fn check(name: impl Into<String>, result: Result<String, String>) -> Check {
    let (status, detail) = match result {
        Ok(d) => ("pass", d),
        Err(d) => ("fail", d),
    };
    Check {
        name: name.into(),
        status,
        detail,
    }
}

fn hecke_check(module: &ClassModule) -> quatlift::Result<Result<String, String>> {
    let disc = module.disc();
    let ms: Vec<u64> = (1..=12u64).filter(|&m| quatlift::arith::gcd(m as i128, disc) == 1).collect();
    let bs = module.brandt_matrices(12)?;
    let b = |m: u64| &bs[m as usize - 1];
    if b(1).entries != quatlift::linalg::identity(module.dim()) {
        return Ok(Err("B_1 is not the identity".into()));
    }
    for &m in &ms {
        if !b(m).is_self_adjoint(module.heights()) {
            return Ok(Err(format!("B_{m} is not self-adjoint")));
        }
        if quatlift::arith::is_prime(m as i64) && b(m).column_sums().iter().any(|&s| s != m as i128 + 1) {
            return Ok(Err(format!("column sums of B_{m} differ from {}", m + 1)));
        }
        for &k in &ms {
            if k > m && mat_mul(&b(m).entries, &b(k).entries) != mat_mul(&b(k).entries, &b(m).entries) {
                return Ok(Err(format!("B_{m} and B_{k} do not commute")));
            }
        }
    }
    Ok(Ok(format!("B_m for m ≤ 12 coprime to {disc}")))
}

fn edhecke_check(module: &ClassModule, dmax: i128) -> quatlift::Result<Result<String, String>> {
    let theta = theta_data(module)?;
    let mut n = 0;
    for q in [2u64, 3, 5] {
        if module.disc() % q as i128 == 0 {
            continue;
        }
        for d in (0..=dmax).filter(|d| (-d).rem_euclid(4) <= 1) {
            if edhecke_defect(module, &theta, d, q)?.iter().any(|&x| x != 0) {
                return Ok(Err(format!("identity fails at d = {d}, q = {q}")));
            }
            n += 1;
        }
    }
    Ok(Ok(format!("{n} identities")))
}

pub fn verify(cfg: &RunConfig) -> Result<Artifact, CliError> {
    json_only(cfg, "verify")?;
    let p = cfg.p;
    let ct = ClassTower::new(p)?;
    let mut checks = Vec::new();
    let mass = ct.maximal.mass();
    checks.push(check(
        "mass",
        if mass == Rat::new(p - 1, 24) {
            Ok(format!("{} classes, mass {}", ct.maximal.len(), rat(mass)))
        } else {
            Err(format!("mass {} differs from (p-1)/24", rat(mass)))
        },
    ));
    let tilde = ClassModule::new(ct.tilde.clone())?;
    checks.push(check("hecke tilde", hecke_check(&tilde)?));
    checks.push(check("edhecke tilde", edhecke_check(&tilde, cfg.dmax)?));
    let tb = tilde.brandt_matrices(20)?;
    for s in cfg.sigmas() {
        let cs = ct.level_p2(s)?;
        let psi = psi_matrix(&cs, ct.tilde.len());
        let module = ClassModule::new(cs)?;
        checks.push(check(format!("hecke p2{s:+}"), hecke_check(&module)?));
        checks.push(check(format!("edhecke p2{s:+}"), edhecke_check(&module, cfg.dmax)?));
        let lb = module.brandt_matrices(20)?;
        let bad: Vec<u64> = (1..=20u64)
            .filter(|m| *m as i128 % p != 0)
            .filter(|&m| {
                let i = m as usize - 1;
                mat_mul(&lb[i].entries, &psi) != mat_mul(&psi, &tb[i].entries)
            })
            .collect();
        checks.push(check(
            format!("psi commutation p2{s:+}"),
            if bad.is_empty() {
                Ok("t_m ψ = ψ t_m for m ≤ 20 prime to p".into())
            } else {
                Err(format!("fails for m = {bad:?}"))
            },
        ));
    }
    let (depth, reports) = gross_entries(&ct, cfg)?;
    for r in &reports {
        let label = format!("component {} p2{:+}", r.component, r.sigma);
        let vanish = if r.conditions.predicts_zero && !r.lift_zero {
            Err("vanishing conditions hold but the lift is nonzero".to_string())
        } else {
            Ok(format!("predicted zero: {}, lift zero: {}", r.conditions.predicts_zero, r.lift_zero))
        };
        checks.push(check(format!("vanishing {label}"), vanish));
        let detail = r.detail.clone().unwrap_or_else(|| format!("{} rows", r.rows.len()));
        checks.push(Check {
            name: format!("gross {label}"),
            status: r.status,
            detail,
        });
    }
    let failed = checks.iter().filter(|c| c.status == "fail").count();
    let passed = checks.iter().filter(|c| c.status == "pass").count();
    json(
        &VerifyReport {
            meta: Meta::new("verify", cfg, depth),
            checks,
            passed,
            failed,
        },
        failed > 0,
    )
}
