//! Coordinate projectors, the projector algebra `K id + sum_v K p_v`, its
//! characters and the Gelfand transform.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::sample;
use crate::scalar::{LogNorm, PadicScalar};
use crate::space::WeightedSpace;

/// `p_J = diag(Ch_J)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    space: WeightedSpace,
    subset: BTreeSet<usize>,
}

impl Projector {
    pub fn new(space: &WeightedSpace, subset: impl IntoIterator<Item = usize>) -> Result<Self> {
        let subset: BTreeSet<usize> = subset.into_iter().collect();
        if let Some(&i) = subset.iter().find(|&&i| i >= space.dim()) {
            return Err(Error::InvalidInput(format!(
                "index {i} out of range for dimension {}",
                space.dim()
            )));
        }
        Ok(Projector {
            space: space.clone(),
            subset,
        })
    }

    pub fn subset(&self) -> &BTreeSet<usize> {
        &self.subset
    }

    pub fn to_operator(&self) -> Operator {
        let diag = (0..self.space.dim())
            .map(|i| {
                if self.subset.contains(&i) {
                    self.space.one_scalar()
                } else {
                    self.space.zero_scalar()
                }
            })
            .collect();
        Operator::diagonal(&self.space, diag).expect("matching dimension")
    }

    /// `p_J p_L = p_(J n L)`.
    pub fn compose(&self, other: &Projector) -> Result<Projector> {
        self.space.check_same(&other.space)?;
        Ok(Projector {
            space: self.space.clone(),
            subset: self.subset.intersection(&other.subset).copied().collect(),
        })
    }

    pub fn complement(&self) -> Projector {
        Projector {
            space: self.space.clone(),
            subset: (0..self.space.dim())
                .filter(|i| !self.subset.contains(i))
                .collect(),
        }
    }
}

/// Result of testing a diagonal operator for idempotency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdempotentTest {
    NotDiagonal,
    NotIdempotent,
    /// `u = p_J` for the contained `J`.
    Projector(Vec<usize>),
}

pub fn is_idempotent_diagonal(u: &Operator) -> IdempotentTest {
    if !u.is_diagonal() {
        return IdempotentTest::NotDiagonal;
    }
    let one = u.space().one_scalar();
    let mut subset = Vec::new();
    for (i, d) in u.diagonal_entries().iter().enumerate() {
        if *d == one {
            subset.push(i);
        } else if !d.is_zero() {
            return IdempotentTest::NotIdempotent;
        }
    }
    IdempotentTest::Projector(subset)
}

/// `a_0 id + sum_v a_v p_(J_v)` for pairwise-disjoint nonempty blocks `J_v`
/// whose union misses at least one basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct BElement {
    space: WeightedSpace,
    partition: Vec<Vec<usize>>,
    alpha0: PadicScalar,
    alphas: Vec<PadicScalar>,
}

pub fn validate_partition(space: &WeightedSpace, partition: &[Vec<usize>]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for (v, block) in partition.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::InvalidInput(format!("block {v} is empty")));
        }
        for &i in block {
            if i >= space.dim() {
                return Err(Error::InvalidInput(format!(
                    "index {i} out of range for dimension {}",
                    space.dim()
                )));
            }
            if !seen.insert(i) {
                return Err(Error::InvalidInput(format!("index {i} lies in two blocks")));
            }
        }
    }
    if seen.len() == space.dim() {
        return Err(Error::InvalidInput(
            "blocks must leave at least one basis index uncovered".into(),
        ));
    }
    Ok(())
}

impl BElement {
    pub fn new(
        space: &WeightedSpace,
        partition: Vec<Vec<usize>>,
        alpha0: PadicScalar,
        alphas: Vec<PadicScalar>,
    ) -> Result<Self> {
        validate_partition(space, &partition)?;
        if alphas.len() != partition.len() {
            return Err(Error::PartitionMismatch {
                expected: partition.len(),
                found: alphas.len(),
            });
        }
        for a in std::iter::once(&alpha0).chain(&alphas) {
            if a.prime() != space.prime() {
                return Err(Error::PrimeMismatch(space.prime(), a.prime()));
            }
        }
        let partition = partition
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        Ok(BElement {
            space: space.clone(),
            partition,
            alpha0,
            alphas,
        })
    }

    /// `p_(J_v)` for block `v` of `partition`.
    pub fn block_projector(
        space: &WeightedSpace,
        partition: Vec<Vec<usize>>,
        v: usize,
    ) -> Result<Self> {
        let mut alphas = vec![space.zero_scalar(); partition.len()];
        if v >= alphas.len() {
            return Err(Error::InvalidInput(format!("no block {v}")));
        }
        alphas[v] = space.one_scalar();
        Self::new(space, partition, space.zero_scalar(), alphas)
    }

    pub fn identity(space: &WeightedSpace, partition: Vec<Vec<usize>>) -> Result<Self> {
        let alphas = vec![space.zero_scalar(); partition.len()];
        Self::new(space, partition, space.one_scalar(), alphas)
    }

    pub fn space(&self) -> &WeightedSpace {
        &self.space
    }

    pub fn partition(&self) -> &[Vec<usize>] {
        &self.partition
    }

    pub fn alpha0(&self) -> &PadicScalar {
        &self.alpha0
    }

    pub fn alphas(&self) -> &[PadicScalar] {
        &self.alphas
    }

    pub fn to_operator(&self) -> Operator {
        let mut diag = vec![self.alpha0; self.space.dim()];
        for (block, a) in self.partition.iter().zip(&self.alphas) {
            for &i in block {
                diag[i] = self.alpha0 + *a;
            }
        }
        Operator::diagonal(&self.space, diag).expect("matching dimension")
    }

    fn check_partition(&self, other: &BElement) -> Result<()> {
        self.space.check_same(&other.space)?;
        if self.partition != other.partition {
            return Err(Error::InvalidInput(
                "elements use different partitions".into(),
            ));
        }
        Ok(())
    }

    pub fn mul(&self, other: &BElement) -> Result<BElement> {
        self.check_partition(other)?;
        let a0 = self.alpha0 * other.alpha0;
        let alphas = self
            .alphas
            .iter()
            .zip(&other.alphas)
            .map(|(a, b)| (self.alpha0 + *a) * (other.alpha0 + *b) - a0)
            .collect();
        Ok(BElement {
            alpha0: a0,
            alphas,
            ..self.clone()
        })
    }

    pub fn add(&self, other: &BElement) -> Result<BElement> {
        self.check_partition(other)?;
        Ok(BElement {
            alpha0: self.alpha0 + other.alpha0,
            alphas: self
                .alphas
                .iter()
                .zip(&other.alphas)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, lambda: &PadicScalar) -> BElement {
        BElement {
            alpha0: *lambda * self.alpha0,
            alphas: self.alphas.iter().map(|a| *lambda * *a).collect(),
            ..self.clone()
        }
    }

    /// `max(|a_0|, max_v |a_0 + a_v|)`, checked against `max_v |a_v|` over
    /// `v` in `{0} u Lambda`.
    pub fn b_norm(&self) -> LogNorm {
        let (by_values, by_coefficients) = self.b_norm_formulas();
        assert_eq!(by_values, by_coefficients, "norm formulas disagree");
        by_values
    }

    /// The two closed forms of the norm: by block values and by coefficients.
    pub fn b_norm_formulas(&self) -> (LogNorm, LogNorm) {
        let by_values = LogNorm::max_of(
            std::iter::once(self.alpha0.abs())
                .chain(self.alphas.iter().map(|a| (self.alpha0 + *a).abs())),
        );
        let by_coefficients = LogNorm::max_of(
            std::iter::once(self.alpha0.abs()).chain(self.alphas.iter().map(PadicScalar::abs)),
        );
        (by_values, by_coefficients)
    }

    pub fn characters(&self) -> Vec<(Character, PadicScalar)> {
        all_characters(self.partition.len())
            .into_iter()
            .map(|c| (c, c.eval(self)))
            .collect()
    }
}

/// `chi_0(u) = a_0`, `chi_v(u) = a_0 + a_v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Character {
    Zero,
    Block(usize),
}

impl Character {
    pub fn eval(&self, u: &BElement) -> PadicScalar {
        match *self {
            Character::Zero => u.alpha0,
            Character::Block(v) => u.alpha0 + u.alphas[v],
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Character::Zero => write!(f, "chi_0"),
            Character::Block(v) => write!(f, "chi_{}", v + 1),
        }
    }
}

/// `chi_0` followed by one character per block.
pub fn all_characters(blocks: usize) -> Vec<Character> {
    std::iter::once(Character::Zero)
        .chain((0..blocks).map(Character::Block))
        .collect()
}

/// Seeded check that every character is unital and multiplicative on random
/// elements over `partition`.
pub fn characters_multiplicative(
    space: &WeightedSpace,
    partition: &[Vec<usize>],
    samples: usize,
    seed: u64,
) -> Result<bool> {
    validate_partition(space, partition)?;
    let mut rng = sample::rng(seed);
    let (p, prec) = (space.prime(), space.precision());
    let draw = |rng: &mut sample::SampleRng| {
        let alpha0 = sample::scalar(rng, p, prec, -2..=3, 0.15);
        let alphas = partition
            .iter()
            .map(|_| sample::scalar(rng, p, prec, -2..=3, 0.15))
            .collect();
        BElement::new(space, partition.to_vec(), alpha0, alphas)
    };
    let chars = all_characters(partition.len());
    let id = BElement::identity(space, partition.to_vec())?;
    if chars.iter().any(|c| c.eval(&id) != space.one_scalar()) {
        return Ok(false);
    }
    for _ in 0..samples {
        let u = draw(&mut rng)?;
        let v = draw(&mut rng)?;
        let uv = u.mul(&v)?;
        if chars.iter().any(|c| c.eval(&uv) != c.eval(&u) * c.eval(&v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Values of the Gelfand transform of an element, indexed by
/// [`all_characters`].
#[derive(Clone, Debug, PartialEq)]
pub struct GelfandTable {
    pub space: WeightedSpace,
    pub partition: Vec<Vec<usize>>,
    pub values: Vec<PadicScalar>,
}

impl GelfandTable {
    pub fn sup_norm(&self) -> LogNorm {
        LogNorm::max_of(self.values.iter().map(PadicScalar::abs))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GelfandTable) -> Result<GelfandTable> {
        if self.partition != other.partition || self.values.len() != other.values.len() {
            return Err(Error::PartitionMismatch {
                expected: self.values.len(),
                found: other.values.len(),
            });
        }
        Ok(GelfandTable {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
            ..self.clone()
        })
    }
}

pub fn gelfand(u: &BElement) -> GelfandTable {
    GelfandTable {
        space: u.space.clone(),
        partition: u.partition.clone(),
        values: u.characters().into_iter().map(|(_, v)| v).collect(),
    }
}

/// `u = f(chi_0) id + sum_v (f(chi_v) - f(chi_0)) p_v`.
pub fn gelfand_inverse(table: &GelfandTable) -> Result<BElement> {
    let expected = table.partition.len() + 1;
    if table.values.len() != expected {
        return Err(Error::PartitionMismatch {
            expected,
            found: table.values.len(),
        });
    }
    let f0 = table.values[0];
    BElement::new(
        &table.space,
        table.partition.clone(),
        f0,
        table.values[1..].iter().map(|f| *f - f0).collect(),
    )
}

/// Character `diag(l) -> l_i` of the diagonal algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiagonalCharacter(pub usize);

impl DiagonalCharacter {
    pub fn eval(&self, u: &Operator) -> Result<PadicScalar> {
        if !u.is_diagonal() {
            return Err(Error::InvalidInput("operator is not diagonal".into()));
        }
        Ok(*u.get(self.0, self.0))
    }
}

/// The characters of the diagonal algebra on a finite basis: one per index.
pub fn d_spectrum_finite(space: &WeightedSpace) -> Vec<DiagonalCharacter> {
    (0..space.dim()).map(DiagonalCharacter).collect()
}

/// Seeded check that each coordinate character is unital and multiplicative
/// on random diagonal operators.
pub fn d_characters_multiplicative(
    space: &WeightedSpace,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    let chars = d_spectrum_finite(space);
    let id = Operator::identity(space);
    for c in &chars {
        if c.eval(&id)? != space.one_scalar() {
            return Ok(false);
        }
    }
    let mut rng = sample::rng(seed);
    for _ in 0..samples {
        let u = sample::diagonal(&mut rng, space);
        let v = sample::diagonal(&mut rng, space);
        let uv = u.compose(&v)?;
        for c in &chars {
            if c.eval(&uv)? != c.eval(&u)? * c.eval(&v)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
