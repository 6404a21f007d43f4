//! Representations of step-function algebras, their spectral measures,
//! multiplication representations, faithfulness and spectral decomposition
//! of diagonal operators and commuting diagonal families.

use crate::error::{Error, Result};
use crate::linalg;
use crate::measure::{ClopenAlgebra, ClopenSet, KMeasure, ProjectionValuedMeasure, StepFunction};
use crate::operator::Operator;
use crate::scalar::{LogNorm, PadicScalar};
use crate::space::{Vector, WeightedSpace};

/// `f -> T_f = sum_a f(a) T(Ch_a)` on step functions over a finite algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteRepresentation {
    algebra: ClopenAlgebra,
    space: WeightedSpace,
    table: Vec<Operator>,
}

impl FiniteRepresentation {
    /// Builds the table without checking the representation laws; see
    /// [`FiniteRepresentation::validate`].
    pub fn new(algebra: ClopenAlgebra, space: WeightedSpace, table: Vec<Operator>) -> Result<Self> {
        if table.len() != algebra.atom_count() {
            return Err(Error::DimensionMismatch {
                expected: algebra.atom_count(),
                found: table.len(),
            });
        }
        for t in &table {
            space.check_same(t.space())?;
        }
        Ok(FiniteRepresentation {
            algebra,
            space,
            table,
        })
    }

    pub fn algebra(&self) -> &ClopenAlgebra {
        &self.algebra
    }

    pub fn space(&self) -> &WeightedSpace {
        &self.space
    }

    pub fn table(&self) -> &[Operator] {
        &self.table
    }

    /// Multiplicativity `T(Ch_a) T(Ch_b) = [a = b] T(Ch_a)`, unitality
    /// `T_1 = I` and `||T(Ch_a)|| <= 1`, which together give
    /// `T_(fg) = T_f T_g` and `||T_f|| <= ||f||` for every step function.
    pub fn validate(&self) -> Result<()> {
        let label = |a: usize| self.algebra.label(a);
        for (a, ta) in self.table.iter().enumerate() {
            for (b, tb) in self.table.iter().enumerate() {
                let prod = ta.compose(tb)?;
                let ok = if a == b { prod == *ta } else { prod.is_zero() };
                if !ok {
                    return Err(Error::InvalidInput(format!(
                        "representation is not multiplicative on atoms {:?} and {:?}",
                        label(a),
                        label(b)
                    )));
                }
            }
        }
        let total = self
            .table
            .iter()
            .try_fold(Operator::zero(&self.space), |acc, t| acc.add(t))?;
        if total != Operator::identity(&self.space) {
            return Err(Error::InvalidInput(
                "representation is not unital: T_1 != I".into(),
            ));
        }
        if let Some(a) = (0..self.table.len()).find(|&a| self.table[a].op_norm() > LogNorm::ONE) {
            return Err(Error::InvalidInput(format!(
                "representation is not contractive on atom {:?}",
                label(a)
            )));
        }
        Ok(())
    }

    pub fn eval(&self, f: &StepFunction) -> Result<Operator> {
        if *f.algebra() != self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        f.atom_values(self.space.zero_scalar())
            .iter()
            .zip(&self.table)
            .try_fold(Operator::zero(&self.space), |acc, (v, t)| {
                acc.add(&t.scale(v)?)
            })
    }
}

/// `T_f = integral of f dP`.
pub fn rep_from_pvm(pvm: &ProjectionValuedMeasure) -> FiniteRepresentation {
    FiniteRepresentation {
        algebra: pvm.algebra().clone(),
        space: pvm.space().clone(),
        table: pvm.projectors().to_vec(),
    }
}

/// Rebuilds `P(a)` entrywise from the scalar measures
/// `mu_(e_j, e_i)(a) = e*_i(T(Ch_a) e_j)`.
pub fn pvm_from_rep(rep: &FiniteRepresentation) -> Result<ProjectionValuedMeasure> {
    rep.validate()?;
    let space = &rep.space;
    let n = space.dim();
    let basis: Vec<Vector> = (0..n).map(|j| space.basis_vector(j)).collect();
    let projectors = rep
        .table
        .iter()
        .map(|t| {
            let columns = basis
                .iter()
                .map(|e| t.apply(e))
                .collect::<Result<Vec<_>>>()?;
            Ok(Operator::from_fn(space, |i, j| *columns[j].coord(i)))
        })
        .collect::<Result<Vec<_>>>()?;
    ProjectionValuedMeasure::new(rep.algebra.clone(), space.clone(), projectors)
}

/// Spectral decomposition `b = integral of x P(dx)` over the finite
/// spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    /// Distinct eigenvalues sorted by valuation then unit, zero last.
    pub support: Vec<PadicScalar>,
    /// Measure on atoms labelled by the eigenvalues.
    pub pvm: ProjectionValuedMeasure,
}

impl Decomposition {
    /// `x -> x` on the atoms.
    pub fn identity_function(&self) -> StepFunction {
        StepFunction::from_atom_values(self.pvm.algebra(), self.support.clone())
            .expect("one value per atom")
    }

    pub fn reconstruct(&self) -> Operator {
        crate::measure::spectral_integral(&self.identity_function(), &self.pvm)
            .expect("same algebra")
    }
}

fn sort_scalars(values: &mut [PadicScalar]) {
    values.sort_by_key(PadicScalar::sort_key);
}

/// Distinct values at working precision, in first-seen order.
fn distinct<T: Clone + PartialEq>(items: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

pub fn spectral_decompose_diagonal(b: &Operator) -> Result<Decomposition> {
    if !b.is_diagonal() {
        return Err(Error::Unsupported(
            "only diagonal operators are decomposed without a basis".into(),
        ));
    }
    let space = b.space();
    let diag = b.diagonal_entries();
    let mut support = distinct(diag.iter().copied());
    sort_scalars(&mut support);
    let algebra = ClopenAlgebra::finite(support.iter().map(ToString::to_string))?;
    let projectors = support
        .iter()
        .map(|lambda| {
            let d = diag
                .iter()
                .map(|x| {
                    if x == lambda {
                        space.one_scalar()
                    } else {
                        space.zero_scalar()
                    }
                })
                .collect();
            Operator::diagonal(space, d)
        })
        .collect::<Result<Vec<_>>>()?;
    let pvm = ProjectionValuedMeasure::new(algebra, space.clone(), projectors)?;
    Ok(Decomposition { support, pvm })
}

/// Decomposes `b` given a basis (the columns of `basis`) in which it is
/// diagonal: `P(l) = S P_D(l) S^-1` where `D = S^-1 b S`.
///
/// The projectors must be contractive, so the basis has to be compatible
/// with the norm of the space.
pub fn spectral_decompose_in_basis(b: &Operator, basis: &Operator) -> Result<Decomposition> {
    let inv = basis.inverse()?;
    let d = inv.compose(b)?.compose(basis)?;
    if !d.is_diagonal() {
        return Err(Error::InvalidInput(
            "operator is not diagonal in the given basis".into(),
        ));
    }
    let inner = spectral_decompose_diagonal(&d)?;
    let projectors = inner
        .pvm
        .projectors()
        .iter()
        .map(|p| basis.compose(p)?.compose(&inv))
        .collect::<Result<Vec<_>>>()?;
    let pvm =
        ProjectionValuedMeasure::new(inner.pvm.algebra().clone(), b.space().clone(), projectors)?;
    Ok(Decomposition {
        support: inner.support,
        pvm,
    })
}

/// Joint decomposition of a commuting family of diagonal operators.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDecomposition {
    /// Distinct tuples `(b_1[i,i], ..., b_k[i,i])`, sorted lexicographically.
    pub points: Vec<Vec<PadicScalar>>,
    pub pvm: ProjectionValuedMeasure,
    /// Coordinate function `f_b` of each member.
    pub coordinates: Vec<StepFunction>,
}

fn tuple_label(t: &[PadicScalar]) -> String {
    let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn simultaneous_decompose(family: &[Operator]) -> Result<JointDecomposition> {
    let Some(first) = family.first() else {
        return Err(Error::InvalidInput("empty family".into()));
    };
    let space = first.space();
    for (i, a) in family.iter().enumerate() {
        space.check_same(a.space())?;
        for (j, b) in family.iter().enumerate().skip(i + 1) {
            if !a.commutes_with(b)? {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    if let Some(k) = family.iter().position(|b| !b.is_diagonal()) {
        return Err(Error::Unsupported(format!(
            "member {k} is not diagonal; only diagonal families are decomposed"
        )));
    }
    let tuple_at = |i: usize| -> Vec<PadicScalar> { family.iter().map(|b| *b.get(i, i)).collect() };
    let mut points = distinct((0..space.dim()).map(tuple_at));
    points.sort_by(|x, y| {
        x.iter()
            .map(PadicScalar::sort_key)
            .cmp(y.iter().map(PadicScalar::sort_key))
    });
    let algebra = ClopenAlgebra::finite(points.iter().map(|t| tuple_label(t)))?;
    let projectors = points
        .iter()
        .map(|t| {
            let d = (0..space.dim())
                .map(|i| {
                    if tuple_at(i) == *t {
                        space.one_scalar()
                    } else {
                        space.zero_scalar()
                    }
                })
                .collect();
            Operator::diagonal(space, d)
        })
        .collect::<Result<Vec<_>>>()?;
    let pvm = ProjectionValuedMeasure::new(algebra.clone(), space.clone(), projectors)?;
    let coordinates = (0..family.len())
        .map(|k| StepFunction::from_atom_values(&algebra, points.iter().map(|t| t[k]).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(JointDecomposition {
        points,
        pvm,
        coordinates,
    })
}

/// For each eigenvalue atom `l` in `omega`: `b P(l) = l P(l)`, the range of
/// `P(l)` has the dimension of `ker(b - l)`, and `P(l)` fixes every kernel
/// vector. Together these say `range P(l) = ker(b - l)`.
pub fn eigenrange_check(
    b: &Operator,
    decomposition: &Decomposition,
    omega: &ClopenSet,
) -> Result<bool> {
    let pvm = &decomposition.pvm;
    if omega.universe() != pvm.algebra().atom_count() {
        return Err(Error::AlgebraMismatch);
    }
    b.space().check_same(pvm.space())?;
    for &atom in omega.atoms() {
        let lambda = &decomposition.support[atom];
        let p = pvm.atom_projector(atom);
        if b.compose(p)? != p.scale(lambda)? {
            return Ok(false);
        }
        let kernel = b.shifted(lambda).kernel();
        if kernel.len() != p.rank() {
            return Ok(false);
        }
        for v in &kernel {
            if p.apply(v)? != *v {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Pointwise multiplication on functions over the non-null atoms of a
/// measure, normed by `||f|| = max_x |f(x)| N_mu(x)`.
#[derive(Clone, Debug)]
pub struct MultiplicationRep {
    measure: KMeasure,
    /// Atoms kept as coordinates of `H`, in order.
    kept: Vec<usize>,
    rep: FiniteRepresentation,
}

/// Builds `H` with `omega_k = mu(x_k)^2`, so `||e_k|| = N_mu(x_k)`, and
/// `T(Ch_a) = ` multiplication by `Ch_a`. Null atoms are dropped.
pub fn multiplication_rep(mu: &KMeasure) -> Result<MultiplicationRep> {
    let algebra = mu.algebra();
    let values = mu.atom_values();
    let (kept, dropped): (Vec<usize>, Vec<usize>) =
        (0..values.len()).partition(|&a| !mu.n_mu_weight(a).is_zero());
    for &a in &dropped {
        log::warn!(
            "atom {:?} is null for the measure and is dropped",
            algebra.label(a)
        );
    }
    if kept.is_empty() {
        return Err(Error::InvalidInput(
            "every atom is null for the measure".into(),
        ));
    }
    let (p, prec) = (
        values[0].prime(),
        values.iter().map(PadicScalar::precision).max().unwrap_or(1),
    );
    let omega = kept.iter().map(|&a| values[a] * values[a]).collect();
    let space = WeightedSpace::new(p, prec, omega)?;
    let table = (0..algebra.atom_count())
        .map(|a| {
            let d = kept
                .iter()
                .map(|&k| {
                    if k == a {
                        space.one_scalar()
                    } else {
                        space.zero_scalar()
                    }
                })
                .collect();
            Operator::diagonal(&space, d)
        })
        .collect::<Result<Vec<_>>>()?;
    let rep = FiniteRepresentation::new(algebra.clone(), space, table)?;
    Ok(MultiplicationRep {
        measure: mu.clone(),
        kept,
        rep,
    })
}

impl MultiplicationRep {
    pub fn measure(&self) -> &KMeasure {
        &self.measure
    }

    pub fn kept_atoms(&self) -> &[usize] {
        &self.kept
    }

    pub fn space(&self) -> &WeightedSpace {
        self.rep.space()
    }

    pub fn representation(&self) -> &FiniteRepresentation {
        &self.rep
    }

    /// `(T_a f)(x) = a(x) f(x)`.
    pub fn apply(&self, a: &StepFunction, f: &Vector) -> Result<Vector> {
        self.space().check_same(f.space())?;
        let values = a.atom_values(self.space().zero_scalar());
        let coords = self
            .kept
            .iter()
            .zip(f.coords())
            .map(|(&atom, x)| values[atom] * *x)
            .collect();
        self.space().vector(coords)
    }

    /// `max_x |f(x)| N_mu(x)`.
    pub fn function_norm(&self, f: &Vector) -> LogNorm {
        f.norm()
    }

    /// `max |a|` over the non-null atoms.
    pub fn ess_sup(&self, a: &StepFunction) -> LogNorm {
        let values = a.atom_values(self.space().zero_scalar());
        LogNorm::max_of(self.kept.iter().map(|&k| values[k].abs()))
    }

    /// `P(W) f = Ch_W f` for every atom `W` and every basis function `f`,
    /// with `P` recovered from the representation.
    pub fn projections_are_multiplications(&self) -> Result<bool> {
        let pvm = pvm_from_rep(&self.rep)?;
        let space = self.space();
        let one = space.one_scalar();
        for w in 0..pvm.algebra().atom_count() {
            let ch = StepFunction::indicator(pvm.algebra(), pvm.algebra().singleton(w), one)?;
            for k in 0..space.dim() {
                let f = space.basis_vector(k);
                if pvm.atom_projector(w).apply(&f)? != self.apply(&ch, &f)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `||a f|| <= ||a||_inf ||f||`.
    pub fn bound_holds(&self, a: &StepFunction, f: &Vector) -> Result<bool> {
        Ok(self.function_norm(&self.apply(a, f)?) <= self.ess_sup(a).mul(self.function_norm(f)))
    }
}

/// Faithfulness of a representation computed two ways.
#[derive(Clone, Debug, PartialEq)]
pub struct FaithfulnessReport {
    /// `T_f = 0` only for `f = 0`, from the rank of the atom table.
    pub faithful: bool,
    /// The recovered measure has support `X`.
    pub full_support: bool,
    /// A nonzero step function in the kernel, when one exists.
    pub kernel_witness: Option<StepFunction>,
    pub support: ClopenSet,
}

impl FaithfulnessReport {
    pub fn consistent(&self) -> bool {
        self.faithful == self.full_support
    }
}

pub fn faithfulness(rep: &FiniteRepresentation) -> Result<FaithfulnessReport> {
    let n = rep.space.dim();
    let atoms = rep.table.len();
    // Columns are the flattened atom operators.
    let matrix: linalg::Matrix = (0..n * n)
        .map(|k| rep.table.iter().map(|t| t.entries()[k]).collect())
        .collect();
    let kernel = linalg::nullspace(&matrix);
    let faithful = kernel.is_empty();
    debug_assert_eq!(linalg::rank(&matrix) == atoms, faithful);
    let kernel_witness = kernel
        .into_iter()
        .next()
        .map(|v| StepFunction::from_atom_values(&rep.algebra, v))
        .transpose()?;
    let pvm = pvm_from_rep(rep)?;
    let support = pvm.support();
    Ok(FaithfulnessReport {
        faithful,
        full_support: support == rep.algebra.all(),
        kernel_witness,
        support,
    })
}

/// The diagonal of `u^k` vanishes for `1 <= k <= n`.
pub fn diagonal_image_vanishes(u: &Operator) -> bool {
    let mut power = u.clone();
    for _ in 0..u.dim() {
        if power.diagonal_entries().iter().any(|d| !d.is_zero()) {
            return false;
        }
        power = power.compose(u).expect("same space");
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::spectral_integral;
    use crate::sample;

    fn q5(n: i64) -> PadicScalar {
        PadicScalar::from_i64(5, 16, n).unwrap()
    }

    fn on(n: usize) -> WeightedSpace {
        WeightedSpace::orthonormal(5, 16, n).unwrap()
    }

    fn diag(s: &WeightedSpace, v: &[i64]) -> Operator {
        Operator::diagonal(s, v.iter().map(|&x| q5(x)).collect()).unwrap()
    }

    fn example() -> ProjectionValuedMeasure {
        let s = on(3);
        let alg = ClopenAlgebra::finite(["a", "b"]).unwrap();
        ProjectionValuedMeasure::new(
            alg,
            s.clone(),
            vec![diag(&s, &[1, 1, 0]), diag(&s, &[0, 0, 1])],
        )
        .unwrap()
    }

    #[test]
    fn rep_from_example_pvm() {
        let p = example();
        let t = rep_from_pvm(&p);
        t.validate().unwrap();
        let f = StepFunction::from_atom_values(p.algebra(), vec![q5(4), q5(9)]).unwrap();
        assert_eq!(t.eval(&f).unwrap(), diag(p.space(), &[4, 4, 9]));
        assert_eq!(pvm_from_rep(&t).unwrap(), p);
        assert_eq!(rep_from_pvm(&pvm_from_rep(&t).unwrap()), t);
    }

    #[test]
    fn single_atom_rep() {
        let s = on(2);
        let alg = ClopenAlgebra::finite(["x"]).unwrap();
        let t = FiniteRepresentation::new(alg.clone(), s.clone(), vec![Operator::identity(&s)])
            .unwrap();
        let p = pvm_from_rep(&t).unwrap();
        assert_eq!(p.atom_projector(0), &Operator::identity(&s));
        let f = StepFunction::from_atom_values(&alg, vec![q5(6)]).unwrap();
        assert_eq!(
            t.eval(&f).unwrap(),
            Operator::identity(&s).scale(&q5(6)).unwrap()
        );
        assert!(faithfulness(&t).unwrap().faithful);
    }

    #[test]
    fn invalid_reps_are_rejected() {
        let s = on(2);
        let alg = ClopenAlgebra::finite(["a", "b"]).unwrap();
        let degenerate = FiniteRepresentation::new(
            alg.clone(),
            s.clone(),
            vec![diag(&s, &[1, 0]), Operator::zero(&s)],
        )
        .unwrap();
        assert!(pvm_from_rep(&degenerate).is_err());
        let overlapping =
            FiniteRepresentation::new(alg, s.clone(), vec![diag(&s, &[1, 1]), diag(&s, &[0, 1])])
                .unwrap();
        assert!(matches!(
            pvm_from_rep(&overlapping),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn decompose_examples() {
        let s = on(3);
        let b = diag(&s, &[2, 2, 7]);
        let d = spectral_decompose_diagonal(&b).unwrap();
        assert_eq!(d.support, vec![q5(2), q5(7)]);
        assert_eq!(d.pvm.atom_projector(0), &diag(&s, &[1, 1, 0]));
        assert_eq!(d.pvm.atom_projector(1), &diag(&s, &[0, 0, 1]));
        assert_eq!(d.reconstruct(), b);
        assert_eq!(d.pvm.algebra().labels(), vec!["2", "7"]);

        let id = spectral_decompose_diagonal(&Operator::identity(&s)).unwrap();
        assert_eq!(id.support, vec![q5(1)]);
        assert_eq!(id.pvm.atom_projector(0), &Operator::identity(&s));

        let zero = spectral_decompose_diagonal(&Operator::zero(&s)).unwrap();
        assert_eq!(zero.support, vec![q5(0)]);
        assert_eq!(zero.pvm.atom_projector(0), &Operator::identity(&s));
        assert!(zero.reconstruct().is_zero());

        let nondiag = Operator::from_i64(&s, &[1, 1, 0, 0, 1, 0, 0, 0, 1]).unwrap();
        assert!(matches!(
            spectral_decompose_diagonal(&nondiag),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn support_sorted_by_valuation_then_unit() {
        let s = on(5);
        let b = diag(&s, &[0, 7, 5, 2, 7]);
        let d = spectral_decompose_diagonal(&b).unwrap();
        assert_eq!(d.support, vec![q5(2), q5(7), q5(5), q5(0)]);
        assert_eq!(d.reconstruct(), b);
    }

    #[test]
    fn decompose_in_basis() {
        let s = on(2);
        // b = S diag(2, 7) S^-1 with S = [[1, 1], [0, 1]].
        let basis = Operator::from_i64(&s, &[1, 1, 0, 1]).unwrap();
        let b = basis
            .compose(&diag(&s, &[2, 7]))
            .unwrap()
            .compose(&basis.inverse().unwrap())
            .unwrap();
        let d = spectral_decompose_in_basis(&b, &basis).unwrap();
        assert_eq!(d.support, vec![q5(2), q5(7)]);
        assert_eq!(d.reconstruct(), b);
        let omega = d.pvm.algebra().all();
        assert!(eigenrange_check(&b, &d, &omega).unwrap());
    }

    #[test]
    fn simultaneous_examples() {
        let s = on(3);
        let family = vec![diag(&s, &[2, 2, 7]), diag(&s, &[1, 3, 3])];
        let j = simultaneous_decompose(&family).unwrap();
        assert_eq!(
            j.points,
            vec![vec![q5(2), q5(1)], vec![q5(2), q5(3)], vec![q5(7), q5(3)]]
        );
        assert_eq!(j.pvm.algebra().labels(), vec!["(2, 1)", "(2, 3)", "(7, 3)"]);
        for p in j.pvm.projectors() {
            assert_eq!(p.rank(), 1);
        }
        for (b, f) in family.iter().zip(&j.coordinates) {
            assert_eq!(spectral_integral(f, &j.pvm).unwrap(), *b);
        }

        let single = simultaneous_decompose(&[Operator::identity(&s)]).unwrap();
        assert_eq!(single.points.len(), 1);

        let b = diag(&s, &[2, 3, 2]);
        let b2 = b.compose(&b).unwrap();
        let j = simultaneous_decompose(&[b, b2]).unwrap();
        let z = s.zero_scalar();
        let fb = j.coordinates[0].atom_values(z);
        let fb2 = j.coordinates[1].atom_values(z);
        for (x, y) in fb.iter().zip(&fb2) {
            assert_eq!(*x * *x, *y);
        }
    }

    #[test]
    fn non_commuting_family() {
        let s = on(2);
        let a = Operator::from_i64(&s, &[0, 1, 0, 0]).unwrap();
        let b = diag(&s, &[1, 2]);
        assert_eq!(
            simultaneous_decompose(&[diag(&s, &[1, 1]), a, b]),
            Err(Error::NonCommuting(1, 2))
        );
    }

    #[test]
    fn eigenrange_examples() {
        let s = on(3);
        let b = diag(&s, &[2, 2, 7]);
        let d = spectral_decompose_diagonal(&b).unwrap();
        let alg = d.pvm.algebra().clone();
        assert!(eigenrange_check(&b, &d, &alg.singleton(0)).unwrap());
        assert_eq!(d.pvm.atom_projector(0).rank(), 2);
        assert_eq!(b.shifted(&q5(2)).kernel().len(), 2);
        assert!(eigenrange_check(&b, &d, &alg.all()).unwrap());
        assert_eq!(d.pvm.eval(&alg.all()).unwrap(), Operator::identity(&s));
        assert!(eigenrange_check(&b, &d, &alg.empty()).unwrap());
        assert!(d.pvm.eval(&alg.empty()).unwrap().is_zero());

        // A wrong measure fails the check.
        let swapped = Decomposition {
            support: vec![q5(7), q5(2)],
            pvm: d.pvm.clone(),
        };
        assert!(!eigenrange_check(&b, &swapped, &alg.singleton(0)).unwrap());
    }

    #[test]
    fn multiplication_rep_examples() {
        let alg = ClopenAlgebra::finite(["a", "b"]).unwrap();
        let mu = KMeasure::new(&alg, vec![q5(1), q5(1)]).unwrap();
        let m = multiplication_rep(&mu).unwrap();
        assert!(m.space().is_orthonormal());
        let a_hat = StepFunction::from_atom_values(&alg, vec![q5(3), q5(8)]).unwrap();
        assert_eq!(
            m.representation().eval(&a_hat).unwrap(),
            diag(m.space(), &[3, 8])
        );
        assert!(m.projections_are_multiplications().unwrap());

        let mu = KMeasure::new(&alg, vec![q5(5), q5(1)]).unwrap();
        let m = multiplication_rep(&mu).unwrap();
        let f = m.space().vector_from_i64(&[1, 0]).unwrap();
        assert_eq!(m.function_norm(&f), LogNorm::from_exponent(1));
        let pvm = pvm_from_rep(m.representation()).unwrap();
        let pa = pvm.atom_projector(0);
        assert_eq!(pa.compose(pa).unwrap(), *pa);
        assert!(m.projections_are_multiplications().unwrap());
        let g = m.space().vector_from_i64(&[3, 10]).unwrap();
        assert!(m.bound_holds(&a_hat, &g).unwrap());
    }

    #[test]
    fn null_atoms_are_dropped() {
        let alg = ClopenAlgebra::finite(["a", "b", "c"]).unwrap();
        let mu = KMeasure::new(&alg, vec![q5(2), q5(0), q5(25)]).unwrap();
        let m = multiplication_rep(&mu).unwrap();
        assert_eq!(m.kept_atoms(), &[0, 2]);
        assert_eq!(m.space().dim(), 2);
        assert!(m.representation().table()[1].is_zero());
        assert!(m.projections_are_multiplications().unwrap());
        let all_null = KMeasure::new(&alg, vec![q5(0); 3]).unwrap();
        assert!(multiplication_rep(&all_null).is_err());
    }

    #[test]
    fn faithfulness_examples() {
        let p = example();
        let r = faithfulness(&rep_from_pvm(&p)).unwrap();
        assert!(r.faithful && r.full_support && r.kernel_witness.is_none());

        let s = p.space().clone();
        let alg = p.algebra().clone();
        let t = FiniteRepresentation::new(
            alg.clone(),
            s.clone(),
            vec![Operator::identity(&s), Operator::zero(&s)],
        )
        .unwrap();
        let r = faithfulness(&t).unwrap();
        assert!(!r.faithful);
        assert!(!r.full_support);
        assert_eq!(r.support, alg.singleton(0));
        let w = r.kernel_witness.unwrap();
        assert!(t.eval(&w).unwrap().is_zero());
        let values = w.atom_values(s.zero_scalar());
        assert!(values[0].is_zero() && !values[1].is_zero());
    }

    #[test]
    fn nilpotent_has_zero_diagonal_image() {
        let mut rng = sample::rng(3);
        for dim in 1..=6 {
            let s = sample::space(&mut rng, 5, 16, dim);
            let u = sample::strictly_upper(&mut rng, &s);
            assert!(diagonal_image_vanishes(&u));
            assert!(u.pow(dim as u32).is_zero());
        }
        let s = on(2);
        assert!(!diagonal_image_vanishes(
            &Operator::from_i64(&s, &[0, 1, 1, 0]).unwrap()
        ));
    }

    #[test]
    fn random_decompositions_reconstruct() {
        let mut rng = sample::rng(17);
        for k in 0..200 {
            let dim = 1 + k % 8;
            let s = sample::space(&mut rng, 5, 16, dim);
            let b = sample::diagonal_with_repeats(&mut rng, &s, 3);
            let d = spectral_decompose_diagonal(&b).unwrap();
            assert_eq!(d.reconstruct(), b);
            assert!(eigenrange_check(&b, &d, &d.pvm.algebra().all()).unwrap());
        }
    }
}
