//! Finite-dimensional free Banach spaces over `Q_p` with a weighted
//! orthogonal basis, the bilinear forms `f_omega` and `f_pi`, and
//! orthogonality of families.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sample::{self, SampleRng};
use crate::scalar::{validate_field, LogNorm, PadicScalar};

/// Dimension cap for every space.
pub const MAX_DIM: usize = 64;

#[derive(Debug)]
struct SpaceInner {
    prime: u32,
    precision: u32,
    omega: Vec<PadicScalar>,
}

/// `E_omega`: the space `K^n` with `||e_i|| = |omega_i|^(1/2)` and the form
/// `f_omega(x, y) = sum_i omega_i x_i y_i`.
///
/// Cloning is cheap; clones compare equal by identity first.
#[derive(Clone)]
pub struct WeightedSpace {
    inner: Arc<SpaceInner>,
}

impl fmt::Debug for WeightedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedSpace")
            .field("prime", &self.inner.prime)
            .field("precision", &self.inner.precision)
            .field("omega", &self.inner.omega)
            .finish()
    }
}

impl PartialEq for WeightedSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.prime == other.inner.prime
                && self.inner.precision == other.inner.precision
                && self.inner.omega == other.inner.omega)
    }
}

impl WeightedSpace {
    pub fn new(prime: u32, precision: u32, omega: Vec<PadicScalar>) -> Result<Self> {
        validate_field(prime, precision)?;
        if omega.is_empty() || omega.len() > MAX_DIM {
            return Err(Error::InvalidInput(format!(
                "dimension must lie in 1..={MAX_DIM}, got {}",
                omega.len()
            )));
        }
        for (i, w) in omega.iter().enumerate() {
            if w.prime() != prime {
                return Err(Error::PrimeMismatch(prime, w.prime()));
            }
            if w.is_zero() {
                return Err(Error::InvalidInput(format!("weight omega_{i} is zero")));
            }
        }
        Ok(WeightedSpace {
            inner: Arc::new(SpaceInner {
                prime,
                precision,
                omega,
            }),
        })
    }

    /// All weights equal to 1: the orthonormal case.
    pub fn orthonormal(prime: u32, precision: u32, dim: usize) -> Result<Self> {
        let one = PadicScalar::one(prime, precision)?;
        Self::new(prime, precision, vec![one; dim])
    }

    pub fn prime(&self) -> u32 {
        self.inner.prime
    }

    pub fn precision(&self) -> u32 {
        self.inner.precision
    }

    pub fn dim(&self) -> usize {
        self.inner.omega.len()
    }

    pub fn omega(&self) -> &[PadicScalar] {
        &self.inner.omega
    }

    /// `||e_i|| = |omega_i|^(1/2)`.
    pub fn basis_norm(&self, i: usize) -> LogNorm {
        LogNorm::from_half_exponent(self.inner.omega[i].valuation().expect("nonzero weight"))
    }

    /// True when every basis vector has norm 1.
    pub fn is_orthonormal(&self) -> bool {
        (0..self.dim()).all(|i| self.basis_norm(i) == LogNorm::ONE)
    }

    /// True when every weight equals 1, so `f_omega` is the dot product.
    pub fn has_unit_weights(&self) -> bool {
        let one = self.one_scalar();
        self.inner.omega.iter().all(|w| *w == one)
    }

    pub fn zero_scalar(&self) -> PadicScalar {
        PadicScalar::zero(self.prime(), self.precision()).expect("validated field")
    }

    pub fn one_scalar(&self) -> PadicScalar {
        PadicScalar::one(self.prime(), self.precision()).expect("validated field")
    }

    pub fn scalar(&self, n: i64) -> PadicScalar {
        PadicScalar::from_i64(self.prime(), self.precision(), n).expect("validated field")
    }

    pub fn vector(&self, coords: Vec<PadicScalar>) -> Result<Vector> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: coords.len(),
            });
        }
        if let Some(c) = coords.iter().find(|c| c.prime() != self.prime()) {
            return Err(Error::PrimeMismatch(self.prime(), c.prime()));
        }
        Ok(Vector {
            space: self.clone(),
            coords,
        })
    }

    pub fn vector_from_i64(&self, coords: &[i64]) -> Result<Vector> {
        self.vector(coords.iter().map(|&c| self.scalar(c)).collect())
    }

    pub fn zero_vector(&self) -> Vector {
        Vector {
            space: self.clone(),
            coords: vec![self.zero_scalar(); self.dim()],
        }
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = self.zero_vector();
        v.coords[i] = self.one_scalar();
        v
    }

    pub(crate) fn check_same(&self, other: &WeightedSpace) -> Result<()> {
        if self == other {
            Ok(())
        } else if self.dim() != other.dim() {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

/// An element of a [`WeightedSpace`], by coordinates in the weighted basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    space: WeightedSpace,
    coords: Vec<PadicScalar>,
}

impl Vector {
    pub fn space(&self) -> &WeightedSpace {
        &self.space
    }

    pub fn coords(&self) -> &[PadicScalar] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &PadicScalar {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(PadicScalar::is_zero)
    }

    /// `||x|| = max_i |x_i| ||e_i||`.
    pub fn norm(&self) -> LogNorm {
        LogNorm::max_of(
            self.coords
                .iter()
                .enumerate()
                .map(|(i, x)| x.abs().mul(self.space.basis_norm(i))),
        )
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.space.check_same(&other.space)?;
        Ok(Vector {
            space: self.space.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.add(&other.scale(&-self.space.one_scalar())?)
    }

    pub fn scale(&self, lambda: &PadicScalar) -> Result<Vector> {
        let coords = self
            .coords
            .iter()
            .map(|x| lambda.try_mul(x))
            .collect::<Result<_>>()?;
        Ok(Vector {
            space: self.space.clone(),
            coords,
        })
    }

    /// `f_omega(x, y) = sum_i omega_i x_i y_i`.
    pub fn f_omega(&self, other: &Vector) -> Result<PadicScalar> {
        self.space.check_same(&other.space)?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(self.space.omega())
            .fold(self.space.zero_scalar(), |acc, ((x, y), w)| {
                acc + *w * *x * *y
            }))
    }

    /// Pairing with `other` through the basis embedding `H -> H*`:
    /// `sum_i x_i y_i`.
    pub fn dot(&self, other: &Vector) -> Result<PadicScalar> {
        self.space.check_same(&other.space)?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .fold(self.space.zero_scalar(), |acc, (x, y)| acc + *x * *y))
    }

    /// Norm of `y -> sum_i x_i y_i` as a functional: `max_i |x_i| / ||e_i||`.
    pub fn dual_norm(&self) -> LogNorm {
        LogNorm::max_of(self.coords.iter().enumerate().map(|(i, x)| {
            x.abs()
                .div(self.space.basis_norm(i))
                .expect("basis norms are nonzero")
        }))
    }

    /// `x != 0` and `f_omega(x, x) = 0` at working precision.
    pub fn is_isotropic(&self) -> bool {
        !self.is_zero() && self.f_omega(self).expect("same space").is_zero()
    }
}

/// Integer exponents `n_i` with `|pi|^(n_i + 1) < ||e_i|| <= |pi|^(n_i)` for a
/// fixed `0 < |pi| < 1`, with the induced norm `||x||_pi` and form `f_pi`.
#[derive(Clone, Debug)]
pub struct PiStructure {
    space: WeightedSpace,
    pi: PadicScalar,
    exponents: Vec<i64>,
}

impl PiStructure {
    pub fn new(space: &WeightedSpace, pi: PadicScalar) -> Result<Self> {
        if pi.prime() != space.prime() {
            return Err(Error::PrimeMismatch(space.prime(), pi.prime()));
        }
        let s = match pi.valuation() {
            Some(s) if s > 0 => s,
            _ => return Err(Error::InvalidInput("pi must satisfy 0 < |pi| < 1".into())),
        };
        // ||e_i|| = p^(-h/2) and |pi|^n = p^(-s n): n = floor(h / 2s).
        let exponents = (0..space.dim())
            .map(|i| {
                let h = space.basis_norm(i).half_exponent().expect("nonzero weight");
                h.div_euclid(2 * s)
            })
            .collect();
        let ps = PiStructure {
            space: space.clone(),
            pi,
            exponents,
        };
        debug_assert!(ps.satisfies_bracketing());
        Ok(ps)
    }

    pub fn space(&self) -> &WeightedSpace {
        &self.space
    }

    pub fn pi(&self) -> &PadicScalar {
        &self.pi
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    /// `pi^k`.
    pub fn pi_power(&self, k: i64) -> PadicScalar {
        self.pi.pow(k).expect("pi is nonzero")
    }

    /// Checks `|pi|^(n_i + 1) < ||e_i|| <= |pi|^(n_i)` for every `i`.
    pub fn satisfies_bracketing(&self) -> bool {
        let abs_pi = self.pi.abs();
        self.exponents.iter().enumerate().all(|(i, &n)| {
            let e = self.space.basis_norm(i);
            abs_pi.powi_signed(n + 1) < e && e <= abs_pi.powi_signed(n)
        })
    }

    /// `||x||_pi = max_i |x_i| |pi|^(n_i)`.
    pub fn norm(&self, x: &Vector) -> Result<LogNorm> {
        self.space.check_same(x.space())?;
        let abs_pi = self.pi.abs();
        Ok(LogNorm::max_of(
            x.coords()
                .iter()
                .zip(&self.exponents)
                .map(|(c, &n)| c.abs().mul(abs_pi.powi_signed(n))),
        ))
    }

    /// `f_pi(x, y) = sum_i pi^(2 n_i) x_i y_i`.
    pub fn f_pi(&self, x: &Vector, y: &Vector) -> Result<PadicScalar> {
        self.space.check_same(x.space())?;
        self.space.check_same(y.space())?;
        Ok(x.coords()
            .iter()
            .zip(y.coords())
            .zip(&self.exponents)
            .fold(self.space.zero_scalar(), |acc, ((a, b), &n)| {
                acc + self.pi_power(2 * n) * *a * *b
            }))
    }
}

impl LogNorm {
    /// Integer power, negative exponents allowed for nonzero norms.
    pub fn powi_signed(self, k: i64) -> LogNorm {
        match self {
            LogNorm::Zero => {
                assert!(k >= 0, "zero norm raised to a negative power");
                if k == 0 {
                    LogNorm::ONE
                } else {
                    LogNorm::ZERO
                }
            }
            LogNorm::Power { halves } => LogNorm::from_half_exponent(halves * k),
        }
    }
}

/// Falsifier for `||sum a_j x_j|| = max_j ||a_j x_j||`.
///
/// Tries every coefficient tuple from `{0, 1, -1, p, 1/p}` when the family
/// has at most five members (every pair otherwise), then `samples` seeded
/// random tuples. Returns `false` on the first violation.
pub fn is_orthogonal_family(vectors: &[Vector], samples: usize, seed: u64) -> Result<bool> {
    let Some(first) = vectors.first() else {
        return Ok(true);
    };
    let space = first.space().clone();
    for v in vectors {
        space.check_same(v.space())?;
    }
    let pi = PadicScalar::prime_power(space.prime(), space.precision(), 1)?;
    let palette = [
        space.zero_scalar(),
        space.one_scalar(),
        -space.one_scalar(),
        pi,
        pi.inv()?,
    ];
    let holds = |coeffs: &[PadicScalar]| -> bool {
        let mut sum = space.zero_vector();
        let mut max = LogNorm::ZERO;
        for (a, x) in coeffs.iter().zip(vectors) {
            let term = x.scale(a).expect("same field");
            max = max.max(term.norm());
            sum = sum.add(&term).expect("same space");
        }
        sum.norm() == max
    };

    let k = vectors.len();
    if k <= 5 {
        let total = palette.len().pow(k as u32);
        for mut code in 0..total {
            let coeffs: Vec<PadicScalar> = (0..k)
                .map(|_| {
                    let c = palette[code % palette.len()];
                    code /= palette.len();
                    c
                })
                .collect();
            if !holds(&coeffs) {
                return Ok(false);
            }
        }
    } else {
        for i in 0..k {
            for j in (i + 1)..k {
                for a in &palette {
                    for b in &palette {
                        let mut coeffs = vec![space.zero_scalar(); k];
                        coeffs[i] = *a;
                        coeffs[j] = *b;
                        if !holds(&coeffs) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }

    let mut rng: SampleRng = sample::rng(seed);
    for _ in 0..samples {
        let coeffs: Vec<PadicScalar> = (0..k)
            .map(|_| sample::scalar(&mut rng, space.prime(), space.precision(), -2..=2, 0.2))
            .collect();
        if !holds(&coeffs) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5(n: i64) -> PadicScalar {
        PadicScalar::from_i64(5, 16, n).unwrap()
    }

    fn space(weights: &[i64]) -> WeightedSpace {
        WeightedSpace::new(5, 16, weights.iter().map(|&w| q5(w)).collect()).unwrap()
    }

    #[test]
    fn vector_norm_examples() {
        let s = space(&[1, 5]);
        // Oracle: max(|1| * 1, |1| * 5^(-1/2)) = 1.
        assert_eq!(s.vector_from_i64(&[1, 1]).unwrap().norm(), LogNorm::ONE);
        assert_eq!(s.zero_vector().norm(), LogNorm::ZERO);
        assert_eq!(
            s.vector_from_i64(&[0, 1]).unwrap().norm(),
            LogNorm::from_half_exponent(1)
        );
        assert_eq!(s.basis_norm(1).to_string(), "1/2");
    }

    #[test]
    fn f_omega_on_basis() {
        let s = space(&[3, 5, 50]);
        for i in 0..3 {
            for j in 0..3 {
                let f = s.basis_vector(i).f_omega(&s.basis_vector(j)).unwrap();
                if i == j {
                    assert_eq!(f, s.omega()[i]);
                } else {
                    assert!(f.is_zero());
                }
            }
        }
        let x = s.vector_from_i64(&[1, 2, 3]).unwrap();
        assert!(x.f_omega(&s.zero_vector()).unwrap().is_zero());
    }

    #[test]
    fn isotropic_witness() {
        let s = WeightedSpace::orthonormal(5, 16, 2).unwrap();
        let i = q5(-1).hensel_sqrt().unwrap();
        let x = s.vector(vec![q5(1), i]).unwrap();
        assert!(x.f_omega(&x).unwrap().is_zero());
        assert!(x.is_isotropic());
        // |f(x, x)| < ||x||^2 strictly.
        assert!(x.f_omega(&x).unwrap().abs() < x.norm().square());
        assert!(!s.basis_vector(0).is_isotropic());
        assert!(!s.zero_vector().is_isotropic());
    }

    #[test]
    fn space_validation() {
        assert!(WeightedSpace::new(5, 16, vec![q5(0)]).is_err());
        assert!(WeightedSpace::new(5, 16, vec![]).is_err());
        assert!(WeightedSpace::orthonormal(5, 16, MAX_DIM + 1).is_err());
        let s = space(&[1, 1]);
        assert!(matches!(
            s.vector_from_i64(&[1]),
            Err(Error::DimensionMismatch { .. })
        ));
        let t = space(&[1, 5]);
        let x = s.basis_vector(0);
        assert_eq!(x.f_omega(&t.basis_vector(0)), Err(Error::SpaceMismatch));
    }

    #[test]
    fn pi_structure_examples() {
        let on = WeightedSpace::orthonormal(5, 16, 3).unwrap();
        let ps = PiStructure::new(&on, q5(5)).unwrap();
        assert_eq!(ps.exponents(), &[0, 0, 0]);
        let x = on.vector_from_i64(&[1, 2, 3]).unwrap();
        let y = on.vector_from_i64(&[4, 5, 6]).unwrap();
        assert_eq!(ps.f_pi(&x, &y).unwrap(), x.dot(&y).unwrap());

        // ||e_2|| = 5^(-1/2): |5|^(n+1) < 5^(-1/2) <= |5|^n forces n = 0.
        let s = space(&[1, 5]);
        let ps = PiStructure::new(&s, q5(5)).unwrap();
        assert_eq!(ps.exponents(), &[0, 0]);
        assert!(ps.satisfies_bracketing());

        // ||e|| = 5^(-3/2) with pi = 5 gives n = 1; with pi = 25 gives n = 0.
        let s = space(&[125, 1, 5]);
        assert_eq!(PiStructure::new(&s, q5(5)).unwrap().exponents(), &[1, 0, 0]);
        let s = space(&[1, 625 * 5]);
        assert_eq!(PiStructure::new(&s, q5(25)).unwrap().exponents(), &[0, 1]);
    }

    #[test]
    fn pi_structure_rejects_bad_pi() {
        let s = space(&[1, 5]);
        assert!(PiStructure::new(&s, q5(0)).is_err());
        assert!(PiStructure::new(&s, q5(2)).is_err());
        assert!(PiStructure::new(&s, q5(5).inv().unwrap()).is_err());
    }

    #[test]
    fn negative_weight_exponents() {
        let w = PadicScalar::prime_power(5, 16, -3).unwrap();
        let s = WeightedSpace::new(5, 16, vec![w, q5(1)]).unwrap();
        let ps = PiStructure::new(&s, q5(5)).unwrap();
        // ||e_0|| = 5^(3/2): n_0 = floor(-3/2) = -2.
        assert_eq!(ps.exponents(), &[-2, 0]);
        assert!(ps.satisfies_bracketing());
    }

    #[test]
    fn orthogonal_family_examples() {
        let s = WeightedSpace::orthonormal(5, 16, 2).unwrap();
        let basis = vec![s.basis_vector(0), s.basis_vector(1)];
        assert!(is_orthogonal_family(&basis, 100, 1).unwrap());
        let pair = vec![
            s.vector_from_i64(&[1, 0]).unwrap(),
            s.vector_from_i64(&[1, 1]).unwrap(),
        ];
        assert!(is_orthogonal_family(&pair, 200, 2).unwrap());
        let x = s.vector_from_i64(&[3, 1]).unwrap();
        assert!(!is_orthogonal_family(&[x.clone(), x], 0, 3).unwrap());
        assert!(is_orthogonal_family(&[], 10, 4).unwrap());
    }

    #[test]
    fn weighted_basis_is_orthogonal() {
        let s = space(&[1, 5, 25, 3, 10, 7]);
        let basis: Vec<Vector> = (0..s.dim()).map(|i| s.basis_vector(i)).collect();
        assert!(is_orthogonal_family(&basis, 200, 9).unwrap());
    }

    #[test]
    fn dual_norm_bounds_pairing() {
        let mut rng = sample::rng(11);
        for _ in 0..200 {
            let s = sample::space(&mut rng, 5, 16, 4);
            let x = sample::vector(&mut rng, &s);
            let y = sample::vector(&mut rng, &s);
            assert!(x.dot(&y).unwrap().abs() <= x.norm().mul(y.dual_norm()));
        }
    }
}
