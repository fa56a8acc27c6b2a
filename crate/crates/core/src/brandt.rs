//! The class module `M(O)` with its height pairing, Brandt matrices from
//! connecting-form theta series, and the Hecke recursions.

use std::sync::{Arc, RwLock};

use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::factorize;
use crate::enumerate::QuadForm;
use crate::error::{invariant, Error, Result};
use crate::orders::ClassSet;
use crate::quaternion::Rat;

pub type IntMatrix = Vec<Vec<i128>>;
/// `r_m` of each connecting form, indexed `[j][i][m]`.
pub type CountTable = Arc<Vec<Vec<Vec<u64>>>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrandtMatrix {
    pub m: u64,
    pub entries: IntMatrix,
}

impl BrandtMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// `w_j B[j][i] = w_i B[i][j]`.
    pub fn is_self_adjoint(&self, heights: &[i128]) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| heights[j] * self.entries[j][i] == heights[i] * self.entries[i][j]))
    }

    pub fn column_sums(&self) -> Vec<i128> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.entries[j][i]).sum()).collect()
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        apply_int(&self.entries, v)
    }
}

pub fn apply_int(m: &[Vec<i128>], v: &[Rat]) -> Vec<Rat> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Rat::zero(), |acc, (a, x)| acc + *x * Rat::from(*a)))
        .collect()
}

pub fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> IntMatrix {
    crate::linalg::mat_mul(a, b)
}

/// `M(O)` for one class set: heights, connecting forms, and a growing table
/// of their representation numbers.
#[derive(Debug)]
pub struct ClassModule {
    classes: ClassSet,
    disc: i128,
    forms: Vec<Vec<QuadForm>>,
    table: RwLock<(usize, CountTable)>,
}

impl ClassModule {
    pub fn new(classes: ClassSet) -> Result<ClassModule> {
        let n = classes.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
        let flat = pairs
            .par_iter()
            .map(|&(i, j)| classes.reps[j].connecting_form(&classes.reps[i]))
            .collect::<Result<Vec<_>>>()?;
        let mut forms = vec![Vec::new(); n];
        for (&(i, _), f) in pairs.iter().zip(flat) {
            forms[i].push(f);
        }
        let disc = classes.order.disc();
        Ok(ClassModule {
            classes,
            disc,
            forms,
            table: RwLock::new((0, Arc::new(Vec::new()))),
        })
    }

    pub fn classes(&self) -> &ClassSet {
        &self.classes
    }
    pub fn dim(&self) -> usize {
        self.classes.len()
    }
    pub fn heights(&self) -> &[i128] {
        &self.classes.heights
    }
    pub fn disc(&self) -> i128 {
        self.disc
    }

    /// `r_m` of the connecting form between classes `i` and `j`.
    pub fn representation_counts(&self, m_max: usize) -> Result<CountTable> {
        {
            let t = self.table.read().expect("theta table lock");
            if t.0 >= m_max && !t.1.is_empty() {
                return Ok(t.1.clone());
            }
        }
        let target = {
            let t = self.table.read().expect("theta table lock");
            m_max.max(2 * t.0)
        };
        let n = self.dim();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
        let counts = pairs
            .par_iter()
            .map(|&(i, j)| self.forms[i][j].theta(target))
            .collect::<Result<Vec<_>>>()?;
        let mut table = vec![vec![Vec::new(); n]; n];
        for (&(i, j), c) in pairs.iter().zip(counts) {
            table[j][i] = c.clone();
            table[i][j] = c;
        }
        let table = Arc::new(table);
        let mut t = self.table.write().expect("theta table lock");
        if t.0 < target || t.1.is_empty() {
            *t = (target, table.clone());
        }
        Ok(table)
    }

    /// `B_m[j][i] = ½ r_m(a_j⁻¹a_i) / w_j`, from the theta table.
    pub fn brandt_matrix(&self, m: u64) -> Result<BrandtMatrix> {
        let table = self.representation_counts(m as usize)?;
        self.matrix_from_table(&table, m)
    }

    /// All `B_1, …, B_{m_max}` from a single enumeration pass.
    pub fn brandt_matrices(&self, m_max: u64) -> Result<Vec<BrandtMatrix>> {
        let table = self.representation_counts(m_max as usize)?;
        (1..=m_max).map(|m| self.matrix_from_table(&table, m)).collect()
    }

    fn matrix_from_table(&self, table: &[Vec<Vec<u64>>], m: u64) -> Result<BrandtMatrix> {
        if m == 0 {
            return Err(Error::InvalidInput("B_0 is not a Brandt matrix; use t_0".into()));
        }
        let n = self.dim();
        let w = self.heights();
        let mut entries = vec![vec![0i128; n]; n];
        for j in 0..n {
            for i in 0..n {
                let r = table[j][i][m as usize] as i128;
                invariant!(r % (2 * w[j]) == 0, "B_{m}[{j}][{i}] = {r}/(2·{}) is not integral", w[j]);
                entries[j][i] = r / (2 * w[j]);
            }
        }
        Ok(BrandtMatrix { m, entries })
    }

    /// `e_0 = Σ [a_i]/w_i`, the vector pairing to 1 with every class.
    pub fn e0(&self) -> Vec<Rat> {
        self.heights().iter().map(|&w| Rat::new(1, w)).collect()
    }

    pub fn pairing(&self, u: &[Rat], v: &[Rat]) -> Result<Rat> {
        if u.len() != self.dim() || v.len() != self.dim() {
            return Err(Error::InvalidInput("vector length differs from module dimension".into()));
        }
        Ok(u.iter()
            .zip(v)
            .zip(self.heights())
            .fold(Rat::zero(), |acc, ((a, b), &w)| acc + *a * *b * Rat::from(w)))
    }

    pub fn degree(v: &[Rat]) -> Rat {
        v.iter().fold(Rat::zero(), |a, b| a + *b)
    }

    /// `t_0 v = (deg v / 2) e_0`.
    pub fn t0(&self, v: &[Rat]) -> Vec<Rat> {
        let half = Self::degree(v) / Rat::from(2);
        self.e0().into_iter().map(|e| e * half).collect()
    }

    /// `t_m` built from prime Brandt matrices by multiplicativity and the
    /// prime-power recursion; primes dividing the discriminant are refused.
    pub fn hecke_matrix(&self, m: u64) -> Result<IntMatrix> {
        if m == 0 {
            return Err(Error::InvalidInput("t_0 is not an integer matrix; use t0".into()));
        }
        let n = self.dim();
        let mut acc = crate::linalg::identity(n);
        for (q, k) in factorize(m) {
            if self.disc % q as i128 == 0 {
                return Err(Error::Unsupported(format!(
                    "t_{m} by recursion needs t_{q}, and {q} divides the discriminant {}",
                    self.disc
                )));
            }
            let bq = self.brandt_matrix(q)?.entries;
            let mut prev = crate::linalg::identity(n);
            let mut cur = bq.clone();
            for _ in 1..k {
                let next = sub_scaled(&mat_mul(&cur, &bq), &prev, q as i128);
                prev = cur;
                cur = next;
            }
            acc = mat_mul(&acc, &cur);
        }
        Ok(acc)
    }

    /// `t_m v`, including `m = 0`.
    pub fn hecke_apply(&self, v: &[Rat], m: u64) -> Result<Vec<Rat>> {
        if v.len() != self.dim() {
            return Err(Error::InvalidInput("vector length differs from module dimension".into()));
        }
        if m == 0 {
            return Ok(self.t0(v));
        }
        Ok(apply_int(&self.hecke_matrix(m)?, v))
    }

    /// Unit vector `[a_i]`.
    pub fn class_vector(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim()];
        v[i] = Rat::from(1);
        v
    }
}

/// `a − c·b`.
pub fn sub_scaled(a: &[Vec<i128>], b: &[Vec<i128>], c: i128) -> IntMatrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - c * y).collect())
        .collect()
}
