//! Serializable artifact types. Exact values are written as `"num/den"`.

use quatlift::lseries::LValueEstimate;
use quatlift::spectral::Tolerances;
use quatlift::{Lattice, Rat};
use serde::Serialize;

use crate::config::RunConfig;

pub fn rat(x: Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn rats(v: &[Rat]) -> Vec<String> {
    v.iter().map(|x| rat(*x)).collect()
}

pub fn basis(l: &Lattice) -> Vec<Vec<String>> {
    l.basis().iter().map(|b| rats(&b.coords())).collect()
}

#[derive(Serialize)]
pub struct TolSet {
    pub eigen: f64,
    pub fit: f64,
    pub ratio: f64,
    pub zero: f64,
}

impl From<Tolerances> for TolSet {
    fn from(t: Tolerances) -> Self {
        TolSet {
            eigen: t.eigen,
            fit: t.fit,
            ratio: t.ratio,
            zero: t.zero,
        }
    }
}

#[derive(Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: RunConfig,
    pub depth: usize,
    pub tolerances: TolSet,
    pub assumptions: Vec<&'static str>,
}

impl Meta {
    pub fn new(command: &'static str, cfg: &RunConfig, depth: usize) -> Meta {
        Meta {
            tool: "quatlift",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config: cfg.clone(),
            depth,
            tolerances: cfg.tol.into(),
            assumptions: vec![
                "a_(p^k) = 0 for k >= 1 at the ramified prime",
                "twist conductors and root numbers are fitted from two evaluation parameters",
                "irrational eigenvalue systems are handled in double precision",
            ],
        }
    }
}

#[derive(Serialize)]
pub struct OrderInfo {
    pub kind: String,
    pub sigma: Option<i32>,
    pub basis: Vec<Vec<String>>,
    pub disc: i128,
    pub level: i128,
    pub theta_level: i128,
    pub omega: i128,
}

#[derive(Serialize)]
pub struct ClassEntry {
    pub index: usize,
    pub basis: Vec<Vec<String>>,
    pub norm: String,
    pub height: i128,
    pub parent: Option<usize>,
}

#[derive(Serialize)]
pub struct ClassesReport {
    pub meta: Meta,
    pub order: OrderInfo,
    pub count: usize,
    pub mass: String,
    pub classes: Vec<ClassEntry>,
}

#[derive(Serialize)]
pub struct MatrixEntry {
    pub m: u64,
    pub entries: Vec<Vec<i128>>,
    pub column_sums: Vec<i128>,
    pub self_adjoint: bool,
}

#[derive(Serialize)]
pub struct BrandtReport {
    pub meta: Meta,
    pub order: OrderInfo,
    pub heights: Vec<i128>,
    pub matrices: Vec<MatrixEntry>,
}

#[derive(Serialize)]
pub struct ThetaSeries {
    pub class: usize,
    pub gram: Vec<Vec<i128>>,
    pub coefficients: Vec<String>,
}

#[derive(Serialize)]
pub struct ThetaReport {
    pub meta: Meta,
    pub order: OrderInfo,
    pub weight: &'static str,
    pub level: i128,
    pub character: i128,
    pub series: Vec<ThetaSeries>,
}

#[derive(Serialize)]
pub struct ComponentEntry {
    pub index: usize,
    pub kind: &'static str,
    pub dim: usize,
    pub primes: Vec<u64>,
    pub eigenvalues: Vec<f64>,
    pub exact_eigenvalues: Option<Vec<i128>>,
    pub basis: Option<Vec<Vec<String>>>,
    pub float_basis: Option<Vec<Vec<f64>>>,
    pub twist_of_maximal: bool,
}

#[derive(Serialize)]
pub struct EigenReport {
    pub meta: Meta,
    pub order: OrderInfo,
    pub components: Vec<ComponentEntry>,
}

#[derive(Serialize)]
pub struct LValue {
    pub value: f64,
    pub error: f64,
    pub conductor: u128,
    pub epsilon: i32,
    pub a_p: Option<i32>,
    pub terms: usize,
}

impl From<&LValueEstimate> for LValue {
    fn from(l: &LValueEstimate) -> Self {
        LValue {
            value: l.value,
            error: l.error,
            conductor: l.conductor,
            epsilon: l.epsilon,
            a_p: l.a_p,
            terms: l.terms,
        }
    }
}

#[derive(Serialize)]
pub struct ConditionFlags {
    pub alpha: String,
    pub epsilon_f: i32,
    pub l_f: LValue,
    pub pstar_twist: LValue,
    pub cond_a: bool,
    pub cond_b: bool,
    pub predicts_zero: bool,
}

#[derive(Serialize)]
pub struct RowEntry {
    pub d: i128,
    pub c: f64,
    pub c_exact: Option<String>,
    pub l_value: LValue,
    pub ratio: Option<f64>,
}

#[derive(Serialize)]
pub struct GrossEntry {
    pub component: usize,
    pub kind: &'static str,
    pub dim: usize,
    pub eigenvalues: Vec<f64>,
    pub sigma: i32,
    pub conditions: ConditionFlags,
    pub lift_zero: bool,
    pub e_f: Vec<f64>,
    pub e_f_exact: Option<Vec<String>>,
    pub coefficients: Vec<f64>,
    pub exact_coefficients: Option<Vec<String>>,
    pub rows: Vec<RowEntry>,
    pub constant: Option<f64>,
    pub spread: Option<f64>,
    pub status: &'static str,
    pub detail: Option<String>,
}

#[derive(Serialize)]
pub struct GrossReport {
    pub meta: Meta,
    pub reports: Vec<GrossEntry>,
}

#[derive(Serialize)]
pub struct Check {
    pub name: String,
    pub status: &'static str,
    pub detail: String,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub meta: Meta,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}
