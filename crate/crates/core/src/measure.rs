//! Finite clopen algebras, projection-valued measures, step functions,
//! spectral integrals and scalar measures.
//!
//! Every algebra is generated by finitely many atoms, so countable additivity
//! and the shrinking-family axiom hold vacuously, and every set is compact
//! and open.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{AxiomViolation, Error, Result};
use crate::operator::Operator;
use crate::scalar::{LogNorm, PadicScalar};
use crate::space::{Vector, WeightedSpace};

/// Largest resolution accepted for `Z_p` algebras.
pub const MAX_RESOLUTION: u32 = 4;
/// Largest atom count accepted by any algebra.
pub const MAX_ATOMS: usize = 4096;
/// Largest atom count for which subsets are enumerated.
pub const MAX_ENUMERABLE_ATOMS: usize = 16;

/// The algebra of subsets of a finite set of atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClopenAlgebra {
    /// Labelled points; every singleton is an atom.
    Finite { atoms: Vec<String> },
    /// `Z_p` cut into the balls `r + p^m Z_p`, `0 <= r < p^m`.
    Zp { prime: u32, resolution: u32 },
}

impl ClopenAlgebra {
    pub fn finite<S: Into<String>>(atoms: impl IntoIterator<Item = S>) -> Result<Self> {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(Error::InvalidInput(
                "an algebra needs at least one atom".into(),
            ));
        }
        if atoms.len() > MAX_ATOMS {
            return Err(Error::InvalidInput(format!("more than {MAX_ATOMS} atoms")));
        }
        let distinct: BTreeSet<&String> = atoms.iter().collect();
        if distinct.len() != atoms.len() {
            return Err(Error::InvalidInput("atom labels must be distinct".into()));
        }
        Ok(ClopenAlgebra::Finite { atoms })
    }

    pub fn zp(prime: u32, resolution: u32) -> Result<Self> {
        if !crate::scalar::is_prime(prime) {
            return Err(Error::InvalidPrime(prime));
        }
        if resolution > MAX_RESOLUTION {
            return Err(Error::InvalidInput(format!(
                "resolution {resolution} exceeds {MAX_RESOLUTION}"
            )));
        }
        let count = (prime as u64).checked_pow(resolution);
        if count.is_none_or(|c| c > MAX_ATOMS as u64) {
            return Err(Error::InvalidInput(format!("more than {MAX_ATOMS} atoms")));
        }
        Ok(ClopenAlgebra::Zp { prime, resolution })
    }

    /// Atoms labelled `prefix0, prefix1, ...`.
    pub fn numbered(prefix: &str, count: usize) -> Result<Self> {
        Self::finite((0..count).map(|k| format!("{prefix}{k}")))
    }

    pub fn atom_count(&self) -> usize {
        match self {
            ClopenAlgebra::Finite { atoms } => atoms.len(),
            ClopenAlgebra::Zp { prime, resolution } => (*prime as usize).pow(*resolution),
        }
    }

    pub fn label(&self, atom: usize) -> String {
        match self {
            ClopenAlgebra::Finite { atoms } => atoms[atom].clone(),
            ClopenAlgebra::Zp { .. } => atom.to_string(),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.atom_count()).map(|a| self.label(a)).collect()
    }

    pub fn atom(&self, label: &str) -> Result<usize> {
        let found = match self {
            ClopenAlgebra::Finite { atoms } => atoms.iter().position(|a| a == label),
            ClopenAlgebra::Zp { .. } => label
                .parse::<usize>()
                .ok()
                .filter(|&r| r < self.atom_count() && r.to_string() == label),
        };
        found.ok_or_else(|| Error::InvalidInput(format!("unknown atom {label:?}")))
    }

    pub fn set(&self, atoms: impl IntoIterator<Item = usize>) -> Result<ClopenSet> {
        let atoms: BTreeSet<usize> = atoms.into_iter().collect();
        if let Some(&a) = atoms.iter().find(|&&a| a >= self.atom_count()) {
            return Err(Error::InvalidInput(format!("atom index {a} out of range")));
        }
        Ok(ClopenSet {
            atoms: atoms.into_iter().collect(),
            universe: self.atom_count(),
        })
    }

    pub fn set_of_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<ClopenSet> {
        let atoms = labels
            .iter()
            .map(|l| self.atom(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.set(atoms)
    }

    pub fn all(&self) -> ClopenSet {
        self.set(0..self.atom_count()).expect("in range")
    }

    pub fn empty(&self) -> ClopenSet {
        self.set([]).expect("in range")
    }

    pub fn singleton(&self, atom: usize) -> ClopenSet {
        self.set([atom]).expect("in range")
    }

    /// Every set of the algebra, for at most [`MAX_ENUMERABLE_ATOMS`] atoms.
    pub fn all_sets(&self) -> Result<Vec<ClopenSet>> {
        let n = self.atom_count();
        if n > MAX_ENUMERABLE_ATOMS {
            return Err(Error::Unsupported(format!(
                "subset enumeration needs at most {MAX_ENUMERABLE_ATOMS} atoms, found {n}"
            )));
        }
        Ok((0u32..1 << n)
            .map(|mask| {
                self.set((0..n).filter(|a| mask >> a & 1 == 1))
                    .expect("in range")
            })
            .collect())
    }

    /// The ball `center + p^k Z_p` with `k <= resolution`.
    pub fn ball(&self, center: u64, k: u32) -> Result<ClopenSet> {
        let ClopenAlgebra::Zp { prime, resolution } = *self else {
            return Err(Error::Unsupported(
                "balls exist only in Z_p algebras".into(),
            ));
        };
        if k > resolution {
            return Err(Error::InvalidInput(format!(
                "radius p^-{k} is finer than the resolution {resolution}"
            )));
        }
        let modulus = (prime as u64).pow(k);
        let r = center % modulus;
        self.set((0..self.atom_count()).filter(|&a| a as u64 % modulus == r))
    }
}

/// A set of atoms in sorted canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClopenSet {
    atoms: Vec<usize>,
    universe: usize,
}

impl ClopenSet {
    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.atoms.binary_search(&atom).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    fn combine(&self, other: &ClopenSet, keep: impl Fn(bool, bool) -> bool) -> ClopenSet {
        assert_eq!(
            self.universe, other.universe,
            "sets from different algebras"
        );
        ClopenSet {
            atoms: (0..self.universe)
                .filter(|&a| keep(self.contains(a), other.contains(a)))
                .collect(),
            universe: self.universe,
        }
    }

    pub fn union(&self, other: &ClopenSet) -> ClopenSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &ClopenSet) -> ClopenSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn complement(&self) -> ClopenSet {
        ClopenSet {
            atoms: (0..self.universe).filter(|&a| !self.contains(a)).collect(),
            universe: self.universe,
        }
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn is_subset(&self, other: &ClopenSet) -> bool {
        self.atoms.iter().all(|&a| other.contains(a))
    }
}

/// Atom-indexed orthogonal idempotents on `H` summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionValuedMeasure {
    algebra: ClopenAlgebra,
    space: WeightedSpace,
    projectors: Vec<Operator>,
}

/// Checks idempotency, pairwise orthogonality, completeness and
/// contractivity of atom projectors, in that order.
pub fn check_pvm_axioms(
    algebra: &ClopenAlgebra,
    space: &WeightedSpace,
    projectors: &[Operator],
) -> Result<()> {
    if projectors.len() != algebra.atom_count() {
        return Err(Error::MeasureAxiom(AxiomViolation::AtomCount {
            expected: algebra.atom_count(),
            found: projectors.len(),
        }));
    }
    for p in projectors {
        space.check_same(p.space())?;
    }
    for (a, p) in projectors.iter().enumerate() {
        if p.compose(p)? != *p {
            return Err(Error::MeasureAxiom(AxiomViolation::NotIdempotent {
                atom: algebra.label(a),
            }));
        }
    }
    let nonzero: Vec<usize> = (0..projectors.len())
        .filter(|&a| !projectors[a].is_zero())
        .collect();
    for (k, &a) in nonzero.iter().enumerate() {
        for &b in &nonzero[k + 1..] {
            if !projectors[a].compose(&projectors[b])?.is_zero()
                || !projectors[b].compose(&projectors[a])?.is_zero()
            {
                return Err(Error::MeasureAxiom(AxiomViolation::NotOrthogonal {
                    first: algebra.label(a),
                    second: algebra.label(b),
                }));
            }
        }
    }
    let mut total = Operator::zero(space);
    for &a in &nonzero {
        total = total.add(&projectors[a])?;
    }
    if total != Operator::identity(space) {
        return Err(Error::MeasureAxiom(AxiomViolation::NotComplete));
    }
    for (a, p) in projectors.iter().enumerate() {
        if p.op_norm() > LogNorm::ONE {
            return Err(Error::MeasureAxiom(AxiomViolation::NotContractive {
                atom: algebra.label(a),
            }));
        }
    }
    Ok(())
}

impl ProjectionValuedMeasure {
    pub fn new(
        algebra: ClopenAlgebra,
        space: WeightedSpace,
        projectors: Vec<Operator>,
    ) -> Result<Self> {
        check_pvm_axioms(&algebra, &space, &projectors)?;
        Ok(ProjectionValuedMeasure {
            algebra,
            space,
            projectors,
        })
    }

    pub fn algebra(&self) -> &ClopenAlgebra {
        &self.algebra
    }

    pub fn space(&self) -> &WeightedSpace {
        &self.space
    }

    pub fn atom_projector(&self, atom: usize) -> &Operator {
        &self.projectors[atom]
    }

    pub fn projectors(&self) -> &[Operator] {
        &self.projectors
    }

    /// `P(A) = sum_(a in A) P(a)`.
    pub fn eval(&self, set: &ClopenSet) -> Result<Operator> {
        if set.universe() != self.algebra.atom_count() {
            return Err(Error::AlgebraMismatch);
        }
        set.atoms()
            .iter()
            .try_fold(Operator::zero(&self.space), |acc, &a| {
                acc.add(&self.projectors[a])
            })
    }

    /// Atoms with nonzero projector.
    pub fn support(&self) -> ClopenSet {
        self.algebra
            .set((0..self.projectors.len()).filter(|&a| !self.projectors[a].is_zero()))
            .expect("in range")
    }

    /// Regularity: on a finite algebra every set is compact and open, so
    /// inner and outer approximation are trivial.
    pub fn is_regular(&self) -> bool {
        true
    }
}

/// `sum_i l_i Ch_(B_i)` with pairwise-disjoint `B_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    algebra: ClopenAlgebra,
    pieces: Vec<(ClopenSet, PadicScalar)>,
}

impl StepFunction {
    pub fn new(algebra: &ClopenAlgebra, pieces: Vec<(ClopenSet, PadicScalar)>) -> Result<Self> {
        for (k, (set, value)) in pieces.iter().enumerate() {
            if set.universe() != algebra.atom_count() {
                return Err(Error::AlgebraMismatch);
            }
            if let Some((other, _)) = pieces[..k].iter().find(|(o, _)| !o.is_disjoint(set)) {
                let shared = other.intersection(set).atoms()[0];
                return Err(Error::InvalidInput(format!(
                    "pieces overlap on atom {:?}",
                    algebra.label(shared)
                )));
            }
            if let Some((_, v0)) = pieces.first() {
                if v0.prime() != value.prime() {
                    return Err(Error::PrimeMismatch(v0.prime(), value.prime()));
                }
            }
        }
        Ok(StepFunction {
            algebra: algebra.clone(),
            pieces,
        })
    }

    /// One piece per atom.
    pub fn from_atom_values(algebra: &ClopenAlgebra, values: Vec<PadicScalar>) -> Result<Self> {
        if values.len() != algebra.atom_count() {
            return Err(Error::DimensionMismatch {
                expected: algebra.atom_count(),
                found: values.len(),
            });
        }
        let pieces = values
            .into_iter()
            .enumerate()
            .map(|(a, v)| (algebra.singleton(a), v))
            .collect();
        Self::new(algebra, pieces)
    }

    pub fn indicator(algebra: &ClopenAlgebra, set: ClopenSet, one: PadicScalar) -> Result<Self> {
        Self::new(algebra, vec![(set, one)])
    }

    pub fn algebra(&self) -> &ClopenAlgebra {
        &self.algebra
    }

    pub fn pieces(&self) -> &[(ClopenSet, PadicScalar)] {
        &self.pieces
    }

    /// Value on each atom; `zero` off the pieces.
    pub fn atom_values(&self, zero: PadicScalar) -> Vec<PadicScalar> {
        let mut values = vec![zero; self.algebra.atom_count()];
        for (set, v) in &self.pieces {
            for &a in set.atoms() {
                values[a] = *v;
            }
        }
        values
    }

    fn pointwise(
        &self,
        other: &StepFunction,
        zero: PadicScalar,
        op: impl Fn(PadicScalar, PadicScalar) -> PadicScalar,
    ) -> Result<StepFunction> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let values = self
            .atom_values(zero)
            .into_iter()
            .zip(other.atom_values(zero))
            .map(|(a, b)| op(a, b))
            .collect();
        Self::from_atom_values(&self.algebra, values)
    }

    pub fn mul(&self, other: &StepFunction, zero: PadicScalar) -> Result<StepFunction> {
        self.pointwise(other, zero, |a, b| a * b)
    }

    pub fn add(&self, other: &StepFunction, zero: PadicScalar) -> Result<StepFunction> {
        self.pointwise(other, zero, |a, b| a + b)
    }

    pub fn scale(&self, lambda: &PadicScalar) -> StepFunction {
        StepFunction {
            algebra: self.algebra.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|(s, v)| (s.clone(), *lambda * *v))
                .collect(),
        }
    }

    /// `max |f|` over every atom.
    pub fn sup_norm(&self) -> LogNorm {
        LogNorm::max_of(
            self.pieces
                .iter()
                .filter(|(s, _)| !s.is_empty())
                .map(|(_, v)| v.abs()),
        )
    }

    /// `max |f|` over atoms that are not `P`-null.
    pub fn ess_sup_norm(&self, pvm: &ProjectionValuedMeasure) -> Result<LogNorm> {
        if self.algebra != pvm.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let support = pvm.support();
        Ok(LogNorm::max_of(
            self.pieces
                .iter()
                .filter(|(s, _)| !s.intersection(&support).is_empty())
                .map(|(_, v)| v.abs()),
        ))
    }

    /// True when the two functions agree on every atom outside `null`.
    pub fn agrees_off(
        &self,
        other: &StepFunction,
        null: &ClopenSet,
        space: &WeightedSpace,
    ) -> bool {
        let z = space.zero_scalar();
        self.atom_values(z)
            .iter()
            .zip(other.atom_values(z))
            .enumerate()
            .all(|(a, (x, y))| null.contains(a) || *x == y)
    }
}

/// `I(f) = sum_i l_i P(B_i)`.
pub fn spectral_integral(f: &StepFunction, pvm: &ProjectionValuedMeasure) -> Result<Operator> {
    if f.algebra != pvm.algebra {
        return Err(Error::AlgebraMismatch);
    }
    f.pieces
        .iter()
        .try_fold(Operator::zero(&pvm.space), |acc, (set, v)| {
            acc.add(&pvm.eval(set)?.scale(v)?)
        })
}

/// Additive `K`-valued set function given by its atom values.
#[derive(Clone, Debug, PartialEq)]
pub struct KMeasure {
    algebra: ClopenAlgebra,
    atom_values: Vec<PadicScalar>,
}

impl KMeasure {
    pub fn new(algebra: &ClopenAlgebra, atom_values: Vec<PadicScalar>) -> Result<Self> {
        if atom_values.len() != algebra.atom_count() {
            return Err(Error::DimensionMismatch {
                expected: algebra.atom_count(),
                found: atom_values.len(),
            });
        }
        if let Some(v) = atom_values
            .iter()
            .find(|v| v.prime() != atom_values[0].prime())
        {
            return Err(Error::PrimeMismatch(atom_values[0].prime(), v.prime()));
        }
        Ok(KMeasure {
            algebra: algebra.clone(),
            atom_values,
        })
    }

    pub fn algebra(&self) -> &ClopenAlgebra {
        &self.algebra
    }

    pub fn atom_values(&self) -> &[PadicScalar] {
        &self.atom_values
    }

    pub fn value(&self, set: &ClopenSet) -> PadicScalar {
        let first = &self.atom_values[0];
        let zero = PadicScalar::zero(first.prime(), first.precision()).expect("valid field");
        set.atoms()
            .iter()
            .fold(zero, |acc, &a| acc + self.atom_values[a])
    }

    /// `||A||_mu = max_(B in A) |mu(B)|`, attained on a single atom.
    pub fn measure_norm(&self, set: &ClopenSet) -> LogNorm {
        LogNorm::max_of(set.atoms().iter().map(|&a| self.atom_values[a].abs()))
    }

    /// `||A||_mu` by enumerating every subset of `A`.
    pub fn measure_norm_exhaustive(&self, set: &ClopenSet) -> Result<LogNorm> {
        let atoms = set.atoms();
        if atoms.len() > MAX_ENUMERABLE_ATOMS {
            return Err(Error::Unsupported(format!(
                "subset enumeration needs at most {MAX_ENUMERABLE_ATOMS} atoms"
            )));
        }
        Ok(LogNorm::max_of((0u32..1 << atoms.len()).map(|mask| {
            let sub = self
                .algebra
                .set(
                    (0..atoms.len())
                        .filter(|k| mask >> k & 1 == 1)
                        .map(|k| atoms[k]),
                )
                .expect("in range");
            self.value(&sub).abs()
        })))
    }

    /// `N_mu(x) = inf_(U contains x) ||U||_mu`, attained at the atom itself.
    pub fn n_mu_weight(&self, atom: usize) -> LogNorm {
        self.atom_values[atom].abs()
    }

    /// `N_mu(x)` by enumerating every clopen neighbourhood of the atom.
    pub fn n_mu_weight_exhaustive(&self, atom: usize) -> Result<LogNorm> {
        let mut best: Option<LogNorm> = None;
        for u in self.algebra.all_sets()? {
            if u.contains(atom) {
                let n = self.measure_norm_exhaustive(&u)?;
                best = Some(best.map_or(n, |b| b.min(n)));
            }
        }
        Ok(best.expect("the whole space contains every atom"))
    }
}

/// `mu(A) = e*_index(P(A) xi)`.
pub fn scalar_measure(
    pvm: &ProjectionValuedMeasure,
    xi: &Vector,
    index: usize,
) -> Result<KMeasure> {
    pvm.space.check_same(xi.space())?;
    if index >= pvm.space.dim() {
        return Err(Error::InvalidInput(format!(
            "basis index {index} out of range"
        )));
    }
    let values = pvm
        .projectors
        .iter()
        .map(|p| Ok(*p.apply(xi)?.coord(index)))
        .collect::<Result<_>>()?;
    KMeasure::new(&pvm.algebra, values)
}

/// `mu(A) = eta*(P(A) xi)` with `eta*(y) = sum_k eta_k y_k`.
pub fn functional_measure(
    pvm: &ProjectionValuedMeasure,
    xi: &Vector,
    eta: &Vector,
) -> Result<KMeasure> {
    pvm.space.check_same(xi.space())?;
    let values = pvm
        .projectors
        .iter()
        .map(|p| eta.dot(&p.apply(xi)?))
        .collect::<Result<_>>()?;
    KMeasure::new(&pvm.algebra, values)
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.atoms)
    }
}
