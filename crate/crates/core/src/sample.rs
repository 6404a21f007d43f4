//! Seeded random generators for property suites and tests.
//!
//! Every generator draws from a caller-supplied [`SampleRng`], so a
//! `(seed, sample index)` pair fully determines what a sample sees.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gelfand::BElement;
use crate::measure::{ClopenAlgebra, ProjectionValuedMeasure};
use crate::operator::Operator;
use crate::scalar::PadicScalar;
use crate::space::{Vector, WeightedSpace};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a stream index into a seed (splitmix64 finaliser).
pub fn sub_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform unit of `Z_p` modulo `p^precision`.
pub fn unit(rng: &mut SampleRng, prime: u32, precision: u32) -> PadicScalar {
    let p = prime as u64;
    let high = rng.gen_range(0..p.pow(precision - 1));
    let low = rng.gen_range(1..p);
    PadicScalar::from_parts(prime, precision, 0, high * p + low).expect("valid unit")
}

pub fn nonzero_scalar(
    rng: &mut SampleRng,
    prime: u32,
    precision: u32,
    valuations: RangeInclusive<i64>,
) -> PadicScalar {
    let v = rng.gen_range(valuations);
    let u = unit(rng, prime, precision);
    u.try_mul(&PadicScalar::prime_power(prime, precision, v).expect("valid field"))
        .expect("same field")
}

/// Zero with probability `zero_prob`, otherwise a nonzero scalar.
pub fn scalar(
    rng: &mut SampleRng,
    prime: u32,
    precision: u32,
    valuations: RangeInclusive<i64>,
    zero_prob: f64,
) -> PadicScalar {
    if rng.gen_bool(zero_prob) {
        PadicScalar::zero(prime, precision).expect("valid field")
    } else {
        nonzero_scalar(rng, prime, precision, valuations)
    }
}

/// A small integer, handy for step-function values and joint spectra.
pub fn small_int(
    rng: &mut SampleRng,
    prime: u32,
    precision: u32,
    range: RangeInclusive<i64>,
) -> PadicScalar {
    PadicScalar::from_i64(prime, precision, rng.gen_range(range)).expect("valid field")
}

/// Weighted space with weight valuations drawn from `-2..=2`.
pub fn space(rng: &mut SampleRng, prime: u32, precision: u32, dim: usize) -> WeightedSpace {
    let omega = (0..dim)
        .map(|_| nonzero_scalar(rng, prime, precision, -2..=2))
        .collect();
    WeightedSpace::new(prime, precision, omega).expect("valid space")
}

pub fn vector(rng: &mut SampleRng, space: &WeightedSpace) -> Vector {
    let coords = (0..space.dim())
        .map(|_| scalar(rng, space.prime(), space.precision(), -2..=3, 0.15))
        .collect();
    space.vector(coords).expect("matching dimension")
}

pub fn operator(rng: &mut SampleRng, space: &WeightedSpace) -> Operator {
    let n = space.dim();
    let entries = (0..n * n)
        .map(|_| scalar(rng, space.prime(), space.precision(), -2..=3, 0.2))
        .collect();
    Operator::from_row_major(space, entries).expect("square matrix")
}

pub fn diagonal(rng: &mut SampleRng, space: &WeightedSpace) -> Operator {
    let diag = (0..space.dim())
        .map(|_| scalar(rng, space.prime(), space.precision(), -2..=3, 0.15))
        .collect();
    Operator::diagonal(space, diag).expect("matching dimension")
}

/// Diagonal operator whose entries come from a pool of at most `pool` small
/// integers, so repeated eigenvalues are common.
pub fn diagonal_with_repeats(rng: &mut SampleRng, space: &WeightedSpace, pool: usize) -> Operator {
    let values: Vec<PadicScalar> = (0..pool.max(1))
        .map(|_| scalar(rng, space.prime(), space.precision(), -1..=2, 0.1))
        .collect();
    let diag = (0..space.dim())
        .map(|_| values[rng.gen_range(0..values.len())])
        .collect();
    Operator::diagonal(space, diag).expect("matching dimension")
}

/// Strictly upper-triangular operator.
pub fn strictly_upper(rng: &mut SampleRng, space: &WeightedSpace) -> Operator {
    let n = space.dim();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(if j > i {
                scalar(rng, space.prime(), space.precision(), -2..=3, 0.2)
            } else {
                space.zero_scalar()
            });
        }
    }
    Operator::from_row_major(space, entries).expect("square matrix")
}

/// Random partition of `0..dim` into `blocks` pairwise-disjoint nonempty
/// blocks that leaves at least one index uncovered.
pub fn partition(rng: &mut SampleRng, dim: usize, blocks: usize) -> Vec<Vec<usize>> {
    assert!(dim >= 1);
    let blocks = blocks.min(dim - 1);
    let mut order: Vec<usize> = (0..dim).collect();
    for i in (1..dim).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    // order[0] stays in the complement.
    let mut parts = vec![Vec::new(); blocks];
    for (k, &idx) in order[1..].iter().enumerate() {
        if k < blocks {
            parts[k].push(idx);
        } else if blocks > 0 && rng.gen_bool(0.6) {
            let b = rng.gen_range(0..blocks);
            parts[b].push(idx);
        }
    }
    for part in &mut parts {
        part.sort_unstable();
    }
    parts
}

pub fn belement(rng: &mut SampleRng, space: &WeightedSpace) -> BElement {
    let dim = space.dim();
    let blocks = if dim > 1 { rng.gen_range(0..dim) } else { 0 };
    let parts = partition(rng, dim, blocks);
    let (p, prec) = (space.prime(), space.precision());
    let alpha0 = scalar(rng, p, prec, -2..=3, 0.15);
    let alphas = parts
        .iter()
        .map(|_| scalar(rng, p, prec, -2..=3, 0.15))
        .collect();
    BElement::new(space, parts, alpha0, alphas).expect("valid element")
}

/// Isometry `L * R` of the space with `L` unit lower- and `R` unit
/// upper-triangular, both of norm at most 1; returns it with its inverse.
pub fn isometry(rng: &mut SampleRng, space: &WeightedSpace) -> (Operator, Operator) {
    let n = space.dim();
    let (p, prec) = (space.prime(), space.precision());
    let h: Vec<i64> = (0..n)
        .map(|i| space.basis_norm(i).half_exponent().expect("nonzero weight"))
        .collect();
    // |a_ij| * ||e_i|| / ||e_j|| <= 1  <=>  2 v(a_ij) >= h_j - h_i.
    let mut entry = |i: usize, j: usize| -> PadicScalar {
        let min_v = (h[j] - h[i] + 1).div_euclid(2);
        if rng.gen_bool(0.3) {
            return PadicScalar::zero(p, prec).expect("valid field");
        }
        // small units keep products exact at low precision
        let k = loop {
            let k = rng.gen_range(1..=2 * p as u64);
            if k % p as u64 != 0 {
                break k;
            }
        };
        PadicScalar::from_parts(p, prec, rng.gen_range(min_v..=min_v + 1), k).expect("valid field")
    };
    let one = space.one_scalar();
    let zero = space.zero_scalar();
    let mut lower = vec![zero; n * n];
    let mut upper = vec![zero; n * n];
    for i in 0..n {
        lower[i * n + i] = one;
        upper[i * n + i] = one;
        for j in 0..n {
            if j < i {
                lower[i * n + j] = entry(i, j);
            } else if j > i {
                upper[i * n + j] = entry(i, j);
            }
        }
    }
    let lower = Operator::from_row_major(space, lower).expect("square");
    let upper = Operator::from_row_major(space, upper).expect("square");
    let lower_inv = lower.unipotent_inverse().expect("unit lower triangular");
    let upper_inv = upper.unipotent_inverse().expect("unit upper triangular");
    let u = lower.compose(&upper).expect("same space");
    let u_inv = upper_inv.compose(&lower_inv).expect("same space");
    (u, u_inv)
}

/// Random atom assignment of coordinates: each basis index is sent to one
/// atom; atoms that receive nothing are null.
pub fn atom_assignment(rng: &mut SampleRng, dim: usize, atoms: usize) -> Vec<usize> {
    (0..dim).map(|_| rng.gen_range(0..atoms)).collect()
}

/// Projection-valued measure with coordinate projectors, optionally
/// conjugated by a random isometry so the projectors are not diagonal.
pub fn pvm(
    rng: &mut SampleRng,
    algebra: &ClopenAlgebra,
    space: &WeightedSpace,
    conjugate: bool,
) -> ProjectionValuedMeasure {
    let assignment = atom_assignment(rng, space.dim(), algebra.atom_count());
    let mut projectors: Vec<Operator> = (0..algebra.atom_count())
        .map(|a| {
            let diag = assignment
                .iter()
                .map(|&owner| {
                    if owner == a {
                        space.one_scalar()
                    } else {
                        space.zero_scalar()
                    }
                })
                .collect();
            Operator::diagonal(space, diag).expect("matching dimension")
        })
        .collect();
    if conjugate {
        let (u, u_inv) = isometry(rng, space);
        projectors = projectors
            .iter()
            .map(|d| {
                u.compose(d)
                    .and_then(|ud| ud.compose(&u_inv))
                    .expect("same space")
            })
            .collect();
    }
    ProjectionValuedMeasure::new(algebra.clone(), space.clone(), projectors).expect("valid measure")
}
