use rand::Rng;

use super::{ensure, ensure_with, Counterexample, Ctx};
use crate::operator::{check_algebra_axioms, Operator};
use crate::sample;
use crate::scalar::{LogNorm, PadicScalar, DEFAULT_PRECISION, DEFAULT_PRIME};
use crate::space::WeightedSpace;
use crate::theorems::diagonal_image_vanishes;

type Outcome = std::result::Result<(), Counterexample>;

pub fn operator_norm(ctx: &mut Ctx) -> Outcome {
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 8);
        let space = ctx.space(rng, n);
        let u = sample::operator(rng, &space);
        let v = sample::operator(rng, &space);
        let x = sample::vector(rng, &space);
        let lambda = sample::scalar(rng, ctx.prime(), ctx.precision(), -2..=2, 0.1);
        let norm = u.op_norm();
        let by_columns = LogNorm::max_of((0..n).map(|j| {
            let e = space.basis_vector(j);
            let col = u.apply(&e).expect("same space");
            col.norm().div(e.norm()).expect("nonzero basis vector")
        }));
        ensure_with(norm == by_columns, "norm is the largest column ratio", &u)?;
        ensure_with(
            u.apply(&x)?.norm() <= norm.mul(x.norm()),
            "||ux|| <= ||u|| ||x||",
            &(&u, &x),
        )?;
        ensure_with(
            u.compose(&v)?.op_norm() <= norm.mul(v.op_norm()),
            "submultiplicativity",
            &(&u, &v),
        )?;
        ensure_with(
            u.add(&v)?.op_norm() <= norm.max(v.op_norm()),
            "ultrametric sum bound",
            &(&u, &v),
        )?;
        ensure_with(
            u.scale(&lambda)?.op_norm() == lambda.abs().mul(norm),
            "homogeneity",
            &u,
        )?;
        let id = Operator::identity(&space);
        ensure(id.op_norm() == LogNorm::ONE, "||I|| = 1")?;
        ensure_with(
            id.compose(&u)? == u && u.compose(&id)? == u,
            "identity is neutral",
            &u,
        )?;
        ensure_with(
            u.transpose().transpose() == u,
            "transpose is an involution",
            &u,
        )?;
        ensure_with(
            u.compose(&v)?.transpose() == v.transpose().compose(&u.transpose())?,
            "(uv)^t = v^t u^t",
            &(&u, &v),
        )?;
        let flat = ctx.orthonormal(n);
        let w = sample::operator(rng, &flat);
        ensure_with(
            w.transpose().op_norm() == w.op_norm(),
            "||w^t|| = ||w|| on unit weights",
            &w,
        )
    })
}

pub fn cor_3_6(ctx: &mut Ctx) -> Outcome {
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 8);
        let space = ctx.space(rng, n);
        let u = sample::operator(rng, &space);
        let v = sample::operator(rng, &space);
        let lambda = sample::scalar(rng, ctx.prime(), ctx.precision(), -2..=2, 0.1);
        let (ua, va) = (u.adjoint_omega(), v.adjoint_omega());
        ensure_with(ua.op_norm() == u.op_norm(), "||u*|| = ||u||", &u)?;
        ensure_with(ua.adjoint_omega() == u, "u** = u", &u)?;
        ensure_with(
            u.compose(&v)?.adjoint_omega() == va.compose(&ua)?,
            "(uv)* = v* u*",
            &(&u, &v),
        )?;
        ensure_with(
            u.add(&v.scale(&lambda)?)?.adjoint_omega() == ua.add(&va.scale(&lambda)?)?,
            "(u + l v)* = u* + l v*",
            &(&u, &v, lambda),
        )
    })
}

pub fn thm_3_5_oracle(ctx: &mut Ctx) -> Outcome {
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 8);
        let space = ctx.space(rng, n);
        let u = sample::operator(rng, &space);
        let ua = u.adjoint_omega();
        let basis: Vec<_> = (0..n).map(|i| space.basis_vector(i)).collect();
        for ei in &basis {
            let uei = u.apply(ei)?;
            for ej in &basis {
                ensure_with(
                    uei.f_omega(ej)? == ei.f_omega(&ua.apply(ej)?)?,
                    "f(u e_i, e_j) = f(e_i, u* e_j)",
                    &u,
                )?;
            }
        }
        let (x, y) = (sample::vector(rng, &space), sample::vector(rng, &space));
        ensure_with(
            u.apply(&x)?.f_omega(&y)? == x.f_omega(&ua.apply(&y)?)?,
            "f(ux, y) = f(x, u* y)",
            &u,
        )?;
        let sym = u.add(&ua)?;
        ensure_with(sym.is_self_adjoint(), "u + u* is self-adjoint", &u)?;
        ensure_with(
            u.is_self_adjoint() == (ua == u),
            "self-adjointness agrees with the adjoint",
            &u,
        )?;
        let flat = ctx.orthonormal(n);
        let w = sample::operator(rng, &flat);
        ensure_with(
            w.adjoint_omega() == w.transpose(),
            "adjoint is the transpose on the orthonormal space",
            &w,
        )
    })
}

/// `u(e1) = e1 + i e2`, `u(e2) = i e1 - e2`, `u(e3) = p e3`, `u(e4) = 0`.
fn note_witness(space: &WeightedSpace) -> Option<Operator> {
    let s = |n| space.scalar(n);
    let i = s(-1).hensel_sqrt().ok()?;
    let (a, z) = (s(1), s(0));
    let c = PadicScalar::prime_power(space.prime(), space.precision(), 1).ok()?;
    Operator::from_rows(
        space,
        vec![
            vec![a, i, z, z],
            vec![i, -a, z, z],
            vec![z, z, c, z],
            vec![z, z, z, z],
        ],
    )
    .ok()
}

fn witness_space(ctx: &Ctx) -> crate::error::Result<WeightedSpace> {
    // The witness needs a square root of -1; fall back to Q_5 otherwise.
    match WeightedSpace::orthonormal(ctx.prime(), ctx.precision(), 4) {
        Ok(s) if s.scalar(-1).hensel_sqrt().is_ok() => Ok(s),
        _ => WeightedSpace::orthonormal(DEFAULT_PRIME, DEFAULT_PRECISION, 4),
    }
}

pub fn note_2_3(ctx: &mut Ctx) -> Outcome {
    let samples = ctx.samples();
    ctx.case(|ctx| {
        let u = note_witness(&witness_space(ctx)?).expect("square root of -1 exists");
        ensure_with(u.is_self_adjoint(), "witness is self-adjoint", &u)?;
        ensure_with(u.op_norm() == LogNorm::ONE, "||u|| = 1", &u)?;
        let u2 = u.compose(&u)?;
        ensure_with(
            u2.op_norm() == LogNorm::from_exponent(2),
            "||u^2|| = p^-2",
            &u2,
        )?;
        ensure_with(u2.op_norm() < u.op_norm().square(), "||u^2|| < ||u||^2", &u)?;
        let report = check_algebra_axioms(std::slice::from_ref(&u), samples, ctx.seed)?;
        ensure(report.is_t_algebra(), "transposition laws hold")?;
        ensure(!report.e_holds, "E condition must fail")?;
        ensure(
            report.e_counterexample.as_ref() == Some(&u),
            "E failure is witnessed by u",
        )?;
        ensure(
            report.is_s_algebra(),
            "polynomials in a symmetric u satisfy S",
        )
    })?;
    ctx.sampled(samples, |ctx, rng| {
        let space = witness_space(ctx)?;
        let u = note_witness(&space).expect("square root of -1 exists");
        let (p, prec) = (space.prime(), space.precision());
        let mut q = Operator::zero(&space);
        let mut power = Operator::identity(&space);
        for _ in 0..rng.gen_range(1..=4) {
            power = power.compose(&u)?;
            q = q.add(&power.scale(&sample::scalar(rng, p, prec, -1..=2, 0.3))?)?;
        }
        ensure_with(q.is_self_adjoint(), "polynomials in u are self-adjoint", &q)?;
        let qtq = q.transpose().compose(&q)?;
        ensure_with(
            qtq.op_norm() == q.compose(&q)?.op_norm(),
            "||q^t q|| = ||q^2||",
            &q,
        )?;
        ensure_with(
            q.compose(&q)?.op_norm() <= q.op_norm().square(),
            "||q^2|| <= ||q||^2",
            &q,
        )
    })
}

pub fn algebra_axioms(ctx: &mut Ctx) -> Outcome {
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 6);
        let flat = ctx.orthonormal(n);
        let gens: Vec<Operator> = (0..rng.gen_range(1..=3))
            .map(|_| sample::diagonal(rng, &flat))
            .collect();
        let report = check_algebra_axioms(&gens, 10, rng.gen())?;
        ensure_with(report.is_e_algebra(), "diagonal algebra satisfies E", &gens)?;
        ensure_with(report.is_s_algebra(), "diagonal algebra satisfies S", &gens)?;
        let space = ctx.space(rng, n);
        let gens: Vec<Operator> = (0..rng.gen_range(1..=2))
            .map(|_| sample::operator(rng, &space))
            .collect();
        let report = check_algebra_axioms(&gens, 10, rng.gen())?;
        ensure_with(
            report.is_t_algebra(),
            "transposition laws hold for any generators",
            &gens,
        )
    })
}

pub fn nilpotent_diagonal(ctx: &mut Ctx) -> Outcome {
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 8);
        let space = ctx.space(rng, n);
        let u = sample::strictly_upper(rng, &space);
        ensure_with(
            u.diagonal_entries().iter().all(PadicScalar::is_zero),
            "diagonal is zero",
            &u,
        )?;
        ensure_with(diagonal_image_vanishes(&u), "diagonal of u^k vanishes", &u)?;
        ensure_with(u.pow(n as u32).is_zero(), "u^n = 0", &u)
    })?;
    ctx.case(|ctx| {
        let space = ctx.orthonormal(2);
        let d = Operator::from_i64(&space, &[1, 1, 0, 0])?;
        ensure(
            !diagonal_image_vanishes(&d),
            "an idempotent has a nonzero diagonal image",
        )
    })
}
