//! Matrix operators on a [`WeightedSpace`].
//!
//! Convention: `u(e_j) = sum_i a_ij e_i`, so entry `(i, j)` sits in row `i`
//! and column `j`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::sample;
use crate::scalar::{LogNorm, PadicScalar};
use crate::space::{PiStructure, Vector, WeightedSpace};

#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    space: WeightedSpace,
    entries: Vec<PadicScalar>,
}

impl Operator {
    pub fn from_row_major(space: &WeightedSpace, entries: Vec<PadicScalar>) -> Result<Self> {
        let n = space.dim();
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        if let Some(a) = entries.iter().find(|a| a.prime() != space.prime()) {
            return Err(Error::PrimeMismatch(space.prime(), a.prime()));
        }
        Ok(Operator {
            space: space.clone(),
            entries,
        })
    }

    pub fn from_rows(space: &WeightedSpace, rows: Vec<Vec<PadicScalar>>) -> Result<Self> {
        let n = space.dim();
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rows.len(),
            });
        }
        if let Some(row) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        Self::from_row_major(space, rows.into_iter().flatten().collect())
    }

    /// Row-major integer matrix, convenient for fixed examples.
    pub fn from_i64(space: &WeightedSpace, entries: &[i64]) -> Result<Self> {
        Self::from_row_major(space, entries.iter().map(|&a| space.scalar(a)).collect())
    }

    pub fn from_fn(space: &WeightedSpace, mut f: impl FnMut(usize, usize) -> PadicScalar) -> Self {
        let n = space.dim();
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Operator {
            space: space.clone(),
            entries,
        }
    }

    pub fn zero(space: &WeightedSpace) -> Self {
        let z = space.zero_scalar();
        Self::from_fn(space, |_, _| z)
    }

    pub fn identity(space: &WeightedSpace) -> Self {
        let (z, o) = (space.zero_scalar(), space.one_scalar());
        Self::from_fn(space, |i, j| if i == j { o } else { z })
    }

    pub fn diagonal(space: &WeightedSpace, diag: Vec<PadicScalar>) -> Result<Self> {
        if diag.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: diag.len(),
            });
        }
        if let Some(a) = diag.iter().find(|a| a.prime() != space.prime()) {
            return Err(Error::PrimeMismatch(space.prime(), a.prime()));
        }
        let z = space.zero_scalar();
        Ok(Self::from_fn(
            space,
            |i, j| if i == j { diag[i] } else { z },
        ))
    }

    pub fn space(&self) -> &WeightedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> &PadicScalar {
        &self.entries[i * self.dim() + j]
    }

    pub fn entries(&self) -> &[PadicScalar] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<PadicScalar>> {
        self.entries.chunks(self.dim()).map(<[_]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(PadicScalar::is_zero)
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        self.space.check_same(x.space())?;
        let n = self.dim();
        let coords = (0..n)
            .map(|i| {
                (0..n).fold(self.space.zero_scalar(), |acc, j| {
                    acc + *self.get(i, j) * *x.coord(j)
                })
            })
            .collect();
        self.space.vector(coords)
    }

    /// `self o other`.
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        self.space.check_same(&other.space)?;
        let n = self.dim();
        let zero = self.space.zero_scalar();
        Ok(Self::from_fn(&self.space, |i, j| {
            (0..n).fold(zero, |acc, k| acc + *self.get(i, k) * *other.get(k, j))
        }))
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.space.check_same(&other.space)?;
        Ok(Operator {
            space: self.space.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Operator {
        Operator {
            space: self.space.clone(),
            entries: self.entries.iter().map(|a| -*a).collect(),
        }
    }

    pub fn scale(&self, lambda: &PadicScalar) -> Result<Operator> {
        let entries = self
            .entries
            .iter()
            .map(|a| lambda.try_mul(a))
            .collect::<Result<_>>()?;
        Ok(Operator {
            space: self.space.clone(),
            entries,
        })
    }

    pub fn pow(&self, k: u32) -> Operator {
        let mut acc = Operator::identity(&self.space);
        for _ in 0..k {
            acc = acc.compose(self).expect("same space");
        }
        acc
    }

    /// `||u|| = max_ij |a_ij| ||e_i|| / ||e_j||`.
    pub fn op_norm(&self) -> LogNorm {
        let n = self.dim();
        LogNorm::max_of((0..n * n).map(|k| {
            let (i, j) = (k / n, k % n);
            self.entries[k]
                .abs()
                .mul(self.space.basis_norm(i))
                .div(self.space.basis_norm(j))
                .expect("basis norms are nonzero")
        }))
    }

    pub fn transpose(&self) -> Operator {
        Self::from_fn(&self.space, |i, j| *self.get(j, i))
    }

    /// Adjoint for `f_omega`: `b_ij = omega_i^(-1) omega_j a_ji`.
    pub fn adjoint_omega(&self) -> Operator {
        let omega = self.space.omega();
        Self::from_fn(&self.space, |i, j| {
            omega[i].inv().expect("nonzero weight") * omega[j] * *self.get(j, i)
        })
    }

    /// Adjoint for `f_pi`: `b_ij = pi^(2 (n_j - n_i)) a_ji`.
    pub fn adjoint_pi(&self, ps: &PiStructure) -> Result<Operator> {
        self.space.check_same(ps.space())?;
        let n = ps.exponents();
        Ok(Self::from_fn(&self.space, |i, j| {
            ps.pi_power(2 * (n[j] - n[i])) * *self.get(j, i)
        }))
    }

    /// `a_ji = omega_i omega_j^(-1) a_ij` for all `i, j`.
    pub fn is_self_adjoint(&self) -> bool {
        let omega = self.space.omega();
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                *self.get(j, i)
                    == omega[i] * omega[j].inv().expect("nonzero weight") * *self.get(i, j)
            })
        })
    }

    /// `pi^(2 n_i) a_ij = pi^(2 n_j) a_ji` for all `i, j`.
    pub fn is_self_adjoint_pi(&self, ps: &PiStructure) -> Result<bool> {
        self.space.check_same(ps.space())?;
        let e = ps.exponents();
        let n = self.dim();
        Ok((0..n).all(|i| {
            (0..n).all(|j| {
                ps.pi_power(2 * e[i]) * *self.get(i, j) == ps.pi_power(2 * e[j]) * *self.get(j, i)
            })
        }))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n * n).all(|k| k / n == k % n || self.entries[k].is_zero())
    }

    pub fn diagonal_entries(&self) -> Vec<PadicScalar> {
        (0..self.dim()).map(|i| *self.get(i, i)).collect()
    }

    pub fn commutes_with(&self, other: &Operator) -> Result<bool> {
        Ok(self.compose(other)? == other.compose(self)?)
    }

    /// Inverse of a unit lower- or upper-triangular operator by the finite
    /// Neumann series `sum_k (1 - u)^k`.
    pub fn unipotent_inverse(&self) -> Result<Operator> {
        let id = Operator::identity(&self.space);
        let nil = id.sub(self)?;
        let n = self.dim();
        if nil.pow(n as u32).is_zero()
            && self
                .diagonal_entries()
                .iter()
                .all(|d| *d == self.space.one_scalar())
        {
            let mut acc = id.clone();
            let mut term = id;
            for _ in 1..n {
                term = term.compose(&nil)?;
                acc = acc.add(&term)?;
            }
            Ok(acc)
        } else {
            Err(Error::InvalidInput("operator is not unipotent".into()))
        }
    }

    /// General inverse by Gaussian elimination.
    pub fn inverse(&self) -> Result<Operator> {
        let inv = linalg::inverse(&self.rows())?;
        Operator::from_rows(&self.space, inv)
    }

    /// Matrix of `self - lambda * id`.
    pub fn shifted(&self, lambda: &PadicScalar) -> Operator {
        Self::from_fn(&self.space, |i, j| {
            if i == j {
                *self.get(i, j) - *lambda
            } else {
                *self.get(i, j)
            }
        })
    }

    /// Basis of the kernel, as vectors.
    pub fn kernel(&self) -> Vec<Vector> {
        linalg::nullspace(&self.rows())
            .into_iter()
            .map(|v| self.space.vector(v).expect("matching dimension"))
            .collect()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.rows())
    }
}

/// Outcome of sampling the transposition algebra generated by a set of
/// operators.
#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub seed: u64,
    pub samples: usize,
    /// `(a+b)^t = a^t+b^t`, `(la)^t = l a^t`, `(ab)^t = b^t a^t`, `a^tt = a`.
    pub transposition: bool,
    /// `||a^t a|| = ||a||^2` on every sample.
    pub e_holds: bool,
    /// `||a^t a|| = ||a^2||` on every sample.
    pub s_holds: bool,
    pub e_counterexample: Option<Operator>,
    pub s_counterexample: Option<Operator>,
    pub t_counterexample: Option<(Operator, Operator)>,
}

impl AxiomReport {
    pub fn is_t_algebra(&self) -> bool {
        self.transposition
    }

    pub fn is_e_algebra(&self) -> bool {
        self.transposition && self.e_holds
    }

    pub fn is_s_algebra(&self) -> bool {
        self.transposition && self.s_holds
    }
}

/// Draws `samples` random linear combinations of words in the generators and
/// their transposes and tests the transposition laws and the E and S
/// conditions on them. The generators themselves are examined first.
pub fn check_algebra_axioms(
    generators: &[Operator],
    samples: usize,
    seed: u64,
) -> Result<AxiomReport> {
    let Some(first) = generators.first() else {
        return Err(Error::InvalidInput("no generators".into()));
    };
    let space = first.space().clone();
    for g in generators {
        space.check_same(g.space())?;
    }
    let mut letters: Vec<Operator> = generators.to_vec();
    letters.extend(generators.iter().map(Operator::transpose));

    let mut rng = sample::rng(seed);
    let (p, prec) = (space.prime(), space.precision());
    let word = |rng: &mut sample::SampleRng| -> Operator {
        let terms = rng.gen_range(1..=3);
        let mut acc = Operator::zero(&space);
        for _ in 0..terms {
            let len = rng.gen_range(1..=3);
            let mut w = letters[rng.gen_range(0..letters.len())].clone();
            for _ in 1..len {
                w = w
                    .compose(&letters[rng.gen_range(0..letters.len())])
                    .expect("same space");
            }
            let c = sample::nonzero_scalar(rng, p, prec, -1..=1);
            acc = acc
                .add(&w.scale(&c).expect("same field"))
                .expect("same space");
        }
        acc
    };

    let mut report = AxiomReport {
        seed,
        samples,
        transposition: true,
        e_holds: true,
        s_holds: true,
        e_counterexample: None,
        s_counterexample: None,
        t_counterexample: None,
    };
    let examine = |a: &Operator, b: &Operator, lambda: &PadicScalar, report: &mut AxiomReport| {
        let (at, bt) = (a.transpose(), b.transpose());
        let t_ok = a.add(b).unwrap().transpose() == at.add(&bt).unwrap()
            && a.scale(lambda).unwrap().transpose() == at.scale(lambda).unwrap()
            && a.compose(b).unwrap().transpose() == bt.compose(&at).unwrap()
            && at.transpose() == *a;
        if !t_ok && report.transposition {
            report.transposition = false;
            report.t_counterexample = Some((a.clone(), b.clone()));
        }
        let ata = at.compose(a).unwrap().op_norm();
        if ata != a.op_norm().square() && report.e_holds {
            report.e_holds = false;
            report.e_counterexample = Some(a.clone());
        }
        if ata != a.compose(a).unwrap().op_norm() && report.s_holds {
            report.s_holds = false;
            report.s_counterexample = Some(a.clone());
        }
    };

    let one = space.one_scalar();
    for (k, g) in generators.iter().enumerate() {
        let h = &generators[(k + 1) % generators.len()];
        examine(g, h, &one, &mut report);
    }
    for _ in 0..samples {
        let a = word(&mut rng);
        let b = word(&mut rng);
        let lambda = sample::nonzero_scalar(&mut rng, p, prec, -1..=1);
        examine(&a, &b, &lambda, &mut report);
    }
    Ok(report)
}
