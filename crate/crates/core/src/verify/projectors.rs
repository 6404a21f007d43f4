use rand::Rng;

use super::{ensure, ensure_with, Check, Counterexample, Ctx};
use crate::error::Error;
use crate::gelfand::{
    all_characters, characters_multiplicative, d_characters_multiplicative, gelfand,
    gelfand_inverse, is_idempotent_diagonal, BElement, Character, DiagonalCharacter, GelfandTable,
    IdempotentTest, Projector,
};
use crate::operator::Operator;
use crate::sample::{self, SampleRng};
use crate::scalar::{LogNorm, PadicScalar};
use crate::space::{PiStructure, WeightedSpace};

type Outcome = std::result::Result<(), Counterexample>;

fn subset(rng: &mut SampleRng, n: usize) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

fn element_on(rng: &mut SampleRng, space: &WeightedSpace, partition: &[Vec<usize>]) -> BElement {
    let (p, prec) = (space.prime(), space.precision());
    let alpha0 = sample::scalar(rng, p, prec, -2..=3, 0.15);
    let alphas = partition
        .iter()
        .map(|_| sample::scalar(rng, p, prec, -2..=3, 0.15))
        .collect();
    BElement::new(space, partition.to_vec(), alpha0, alphas).expect("valid partition")
}

pub fn prop_4_1_1(ctx: &mut Ctx) -> Outcome {
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 8);
        let space = ctx.space(rng, n);
        let (j, l) = (subset(rng, n), subset(rng, n));
        let (pj, pl) = (
            Projector::new(&space, j.clone())?,
            Projector::new(&space, l.clone())?,
        );
        let meet: Vec<usize> = j.iter().copied().filter(|i| l.contains(i)).collect();
        let (oj, ol) = (pj.to_operator(), pl.to_operator());
        ensure_with(
            oj.compose(&ol)? == Projector::new(&space, meet.clone())?.to_operator()
                && pj.compose(&pl)?.to_operator() == oj.compose(&ol)?,
            "p_J p_L = p_(J n L)",
            &(&j, &l),
        )?;
        ensure_with(
            oj.add(&pj.complement().to_operator())? == Operator::identity(&space),
            "p_J + p_(J^c) = I",
            &j,
        )?;
        ensure_with(
            is_idempotent_diagonal(&oj) == IdempotentTest::Projector(j.clone()),
            "p_J is recognised with its index set",
            &j,
        )?;
        let expected_norm = if j.is_empty() {
            LogNorm::ZERO
        } else {
            LogNorm::ONE
        };
        ensure_with(
            oj.op_norm() == expected_norm,
            "||p_J|| = 1 for nonempty J",
            &j,
        )?;
        ensure_with(oj.adjoint_omega() == oj, "p_J is self-adjoint", &j)?;
        for (i, c) in (0..n).map(|i| (i, DiagonalCharacter(i))) {
            let want = if j.contains(&i) {
                space.one_scalar()
            } else {
                space.zero_scalar()
            };
            ensure_with(c.eval(&oj)? == want, "chi_i(p_J) = Ch_J(i)", &j)?;
        }

        // random diagonal with entries in {0, 1, 2, p}: idempotent iff d^2 = d
        let palette = [
            space.scalar(0),
            space.scalar(1),
            space.scalar(2),
            PadicScalar::prime_power(ctx.prime(), ctx.precision(), 1)?,
        ];
        let diag: Vec<PadicScalar> = (0..n)
            .map(|_| palette[rng.gen_range(0..palette.len())])
            .collect();
        let d = Operator::diagonal(&space, diag)?;
        let idempotent = d.compose(&d)? == d;
        let test = is_idempotent_diagonal(&d);
        ensure_with(
            matches!(test, IdempotentTest::Projector(_)) == idempotent,
            "idempotency test agrees with d^2 = d",
            &d,
        )?;
        if n > 1 {
            let mut u = d.clone();
            let off = Operator::from_fn(&space, |i, k| {
                if i == 0 && k == n - 1 {
                    space.one_scalar()
                } else {
                    space.zero_scalar()
                }
            });
            u = u.add(&off)?;
            ensure_with(
                is_idempotent_diagonal(&u) == IdempotentTest::NotDiagonal,
                "non-diagonal input is reported",
                &u,
            )?;
        }
        ensure_with(
            d_characters_multiplicative(&space, 3, rng.gen())?,
            "coordinate characters are multiplicative",
            &space,
        )
    })
}

pub fn lemma_4_4(ctx: &mut Ctx) -> Outcome {
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 8);
        let space = ctx.space(rng, n);
        let u = sample::belement(rng, &space);
        let (by_values, by_coefficients) = u.b_norm_formulas();
        ensure_with(by_values == by_coefficients, "norm formulas agree", &u)?;
        ensure_with(
            u.to_operator().op_norm() == by_values,
            "operator norm equals the closed form",
            &u,
        )
    })
}

pub fn lemma_4_5(ctx: &mut Ctx) -> Outcome {
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 8);
        let space = ctx.space(rng, n);
        let u = sample::belement(rng, &space);
        let op = u.to_operator();
        let sq = op.compose(&op)?;
        ensure_with(
            sq.op_norm() == op.op_norm().square(),
            "||u^2|| = ||u||^2 on B",
            &u,
        )?;
        ensure_with(
            u.mul(&u)?.to_operator() == sq,
            "product in B matches composition",
            &u,
        )?;
        let d = sample::diagonal(rng, &space);
        ensure_with(
            d.compose(&d)?.op_norm() == d.op_norm().square(),
            "||d^2|| = ||d||^2 on D",
            &d,
        )
    })
}

pub fn lemma_4_8(ctx: &mut Ctx) -> Outcome {
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 8);
        let space = ctx.space(rng, n);
        let pi = sample::nonzero_scalar(rng, ctx.prime(), ctx.precision(), 1..=3);
        let ps = PiStructure::new(&space, pi)?;
        let u = sample::belement(rng, &space).to_operator();
        ensure_with(u.adjoint_pi(&ps)? == u, "pi-adjoint fixes u", &u)?;
        ensure_with(u.is_self_adjoint_pi(&ps)?, "u is pi-self-adjoint", &u)?;
        ensure_with(
            u.compose(&u)?.op_norm() == u.op_norm().square(),
            "||u^2|| = ||u||^2",
            &u,
        )?;
        let d = sample::diagonal(rng, &space);
        ensure_with(
            d.adjoint_pi(&ps)? == d,
            "pi-adjoint fixes diagonal operators",
            &d,
        )
    })
}

pub fn prop_4_10(ctx: &mut Ctx) -> Outcome {
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 8);
        let space = ctx.space(rng, n);
        let blocks = rng.gen_range(0..n);
        let partition = sample::partition(rng, n, blocks);
        let k = partition.len();
        ensure_with(
            characters_multiplicative(&space, &partition, 3, rng.gen())?,
            "characters are unital and multiplicative",
            &partition,
        )?;
        let chars = all_characters(k);
        ensure(chars.len() == k + 1, "one character per block plus chi_0")?;
        for mu in 0..k {
            let p = BElement::block_projector(&space, partition.clone(), mu)?;
            for c in &chars {
                let want = match c {
                    Character::Block(v) if *v == mu => space.one_scalar(),
                    _ => space.zero_scalar(),
                };
                ensure_with(c.eval(&p) == want, "chi_v(p_mu) = [v = mu]", &partition)?;
            }
        }
        let (u, v) = (
            element_on(rng, &space, &partition),
            element_on(rng, &space, &partition),
        );
        let sum = u.add(&v)?;
        for c in &chars {
            ensure_with(
                c.eval(&sum) == c.eval(&u) + c.eval(&v),
                "characters are additive",
                &(&u, &v),
            )?;
        }
        Ok(())
    })
}

pub fn cor_4_11_1(ctx: &mut Ctx) -> Outcome {
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 8);
        let space = ctx.space(rng, n);
        let blocks = rng.gen_range(0..n);
        let partition = sample::partition(rng, n, blocks);
        let (u, v) = (
            element_on(rng, &space, &partition),
            element_on(rng, &space, &partition),
        );
        let (gu, gv) = (gelfand(&u), gelfand(&v));
        ensure_with(
            gelfand_inverse(&gu)? == u,
            "inverse transform recovers u",
            &u,
        )?;
        ensure_with(gu.sup_norm() == u.b_norm(), "transform is isometric", &u)?;
        ensure_with(
            gu.sup_norm() == u.to_operator().op_norm(),
            "sup of characters is the operator norm",
            &u,
        )?;
        ensure_with(
            gelfand(&u.mul(&v)?) == gu.mul(&gv)?,
            "transform is multiplicative",
            &(&u, &v),
        )?;
        let sum = gelfand(&u.add(&v)?);
        let pointwise: Vec<PadicScalar> = gu
            .values
            .iter()
            .zip(&gv.values)
            .map(|(a, b)| a + b)
            .collect();
        ensure_with(sum.values == pointwise, "transform is additive", &(&u, &v))?;
        truncated_table_is_rejected(&gu)
    })
}

fn truncated_table_is_rejected(table: &GelfandTable) -> Check {
    let mut short = table.clone();
    short.values.pop();
    ensure(
        matches!(
            gelfand_inverse(&short),
            Err(Error::PartitionMismatch { .. })
        ),
        "a table of the wrong length is rejected",
    )
}
