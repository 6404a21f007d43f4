use rand::Rng;

use super::{ensure, ensure_with, Counterexample, Ctx};
use crate::error::Error;
use crate::sample::{self, SampleRng};
use crate::scalar::{LogNorm, PadicScalar};
use crate::space::{is_orthogonal_family, PiStructure, Vector, WeightedSpace};

type Outcome = std::result::Result<(), Counterexample>;

/// `v_p(n)` by repeated division.
fn naive_valuation(p: i64, mut n: i64) -> Option<i64> {
    if n == 0 {
        return None;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// Lowest absolute precision among the nonzero inputs.
fn absolute_floor(ctx: &Ctx, xs: &[PadicScalar]) -> i64 {
    xs.iter()
        .filter_map(PadicScalar::valuation)
        .min()
        .map_or(i64::MAX, |v| v + ctx.precision() as i64)
}

/// `computed` and `exact` differ by something of valuation at least `floor`.
fn agrees_to(computed: PadicScalar, exact: PadicScalar, floor: i64) -> bool {
    (computed - exact).valuation().is_none_or(|v| v >= floor)
}

fn draw(ctx: &Ctx, rng: &mut SampleRng, valuations: std::ops::RangeInclusive<i64>) -> PadicScalar {
    sample::scalar(rng, ctx.prime(), ctx.precision(), valuations, 0.05)
}

pub fn valuation_axioms(ctx: &mut Ctx) -> Outcome {
    let count = 10 * ctx.samples();
    ctx.sampled(count, |ctx, rng| {
        let x = draw(ctx, rng, -4..=4);
        let y = if rng.gen_bool(0.5) {
            // same valuation as x, so cancellation is exercised
            match x.valuation() {
                Some(v) => sample::nonzero_scalar(rng, ctx.prime(), ctx.precision(), v..=v),
                None => draw(ctx, rng, -4..=4),
            }
        } else {
            draw(ctx, rng, -4..=4)
        };
        let sum = x + y;
        ensure_with(
            sum.abs() <= x.abs().max(y.abs()),
            "strong triangle inequality",
            &(x, y),
        )?;
        if x.abs() != y.abs() {
            ensure_with(
                sum.abs() == x.abs().max(y.abs()),
                "equality case of the strong triangle",
                &(x, y),
            )?;
        }
        ensure_with(
            (x * y).abs() == x.abs().mul(y.abs()),
            "multiplicativity",
            &(x, y),
        )?;
        ensure_with(x.abs().is_zero() == x.is_zero(), "|x| = 0 iff x = 0", &x)?;
        ensure_with((-x).abs() == x.abs(), "|-x| = |x|", &x)?;
        if !x.is_zero() {
            ensure_with(x * x.inv()? == ctx.scalar(1), "x * x^-1 = 1", &x)?;
        }
        let floor = absolute_floor(ctx, &[x, y]);
        ensure_with(
            agrees_to(sum - y, x, floor),
            "(x + y) - y = x to working precision",
            &(x, y),
        )?;

        // integer oracle
        let p = ctx.prime() as i64;
        let a = rng.gen_range(-1_000_000i64..=1_000_000);
        let b = rng.gen_range(-1_000_000i64..=1_000_000);
        for n in [a, b, a + b, a * b] {
            let s = ctx.scalar(n);
            let expected = naive_valuation(p, n).map_or(LogNorm::ZERO, LogNorm::from_exponent);
            ensure_with(s.abs() == expected, "valuation of an integer", &n)?;
        }
        let floor = absolute_floor(ctx, &[ctx.scalar(a), ctx.scalar(b)]);
        ensure_with(
            agrees_to(ctx.scalar(a) + ctx.scalar(b), ctx.scalar(a + b), floor),
            "integer addition",
            &(a, b),
        )?;
        ensure_with(
            ctx.scalar(a) * ctx.scalar(b) == ctx.scalar(a * b),
            "integer multiplication",
            &(a, b),
        )
    })
}

pub fn hensel_sqrt(ctx: &mut Ctx) -> Outcome {
    if ctx.prime() == 2 {
        return ctx.case(|ctx| {
            ensure(
                matches!(ctx.scalar(1).hensel_sqrt(), Err(Error::Unsupported(_))),
                "p = 2 must be reported as unsupported",
            )
        });
    }
    let p = ctx.prime() as u64;
    let squares: Vec<bool> = {
        let mut s = vec![false; p as usize];
        for r in 1..p {
            s[((r * r) % p) as usize] = true;
        }
        s
    };
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let (prime, prec) = (ctx.prime(), ctx.precision());
        let u = sample::unit(rng, prime, prec);
        let v = rng.gen_range(-3i64..=3);
        let a = u * u * PadicScalar::prime_power(prime, prec, 2 * v)?;
        let r = a.hensel_sqrt()?;
        ensure_with(r * r == a, "root squares back", &a)?;
        let residue = r.unit().unwrap_or(0) % p;
        let smallest = (1..p).find(|s| (s * s) % p == a.unit().unwrap_or(0) % p);
        ensure_with(
            Some(residue) == smallest,
            "root lifts the smallest residue root",
            &a,
        )?;

        let w = sample::unit(rng, prime, prec);
        let is_residue = squares[(w.unit().unwrap_or(0) % p) as usize];
        match w.hensel_sqrt() {
            Ok(s) => ensure_with(is_residue && s * s == w, "root of a residue", &w)?,
            Err(Error::NoSquareRoot(_)) => {
                ensure_with(!is_residue, "a quadratic residue was rejected", &w)?
            }
            Err(e) => return Err(e.into()),
        }
        let odd = w * PadicScalar::prime_power(prime, prec, 2 * v + 1)?;
        ensure_with(
            matches!(odd.hensel_sqrt(), Err(Error::NoSquareRoot(_))),
            "odd valuation has no root",
            &odd,
        )
    })
}

pub fn f_omega_bounds(ctx: &mut Ctx) -> Outcome {
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 8);
        let space = ctx.space(rng, n);
        let x = sample::vector(rng, &space);
        let y = sample::vector(rng, &space);
        let z = sample::vector(rng, &space);
        let lambda = draw(ctx, rng, -2..=2);
        let fxy = x.f_omega(&y)?;
        ensure_with(
            fxy.abs() <= x.norm().mul(y.norm()),
            "|f(x, y)| <= ||x|| ||y||",
            &(&x, &y),
        )?;
        ensure_with(fxy == y.f_omega(&x)?, "symmetry", &(&x, &y))?;
        ensure_with(
            x.f_omega(&x)?.abs() <= x.norm().square(),
            "|f(x, x)| <= ||x||^2",
            &x,
        )?;
        let lhs = x.add(&z.scale(&lambda)?)?.f_omega(&y)?;
        ensure_with(
            lhs == fxy + lambda * z.f_omega(&y)?,
            "bilinearity",
            &(&x, &y, &z),
        )?;
        if !x.is_zero() {
            let witness = (0..n).any(|j| {
                !x.f_omega(&space.basis_vector(j))
                    .map_or(true, |s| s.is_zero())
            });
            ensure_with(witness, "nondegeneracy", &x)?;
        }
        Ok(())
    })?;
    ctx.case(|ctx| {
        let one = ctx.scalar(1);
        let space = WeightedSpace::new(ctx.prime(), ctx.precision(), vec![one, -one])?;
        let x = space.vector_from_i64(&[1, 1])?;
        ensure(
            x.is_isotropic() && !x.is_zero(),
            "isotropic witness on weights (1, -1)",
        )?;
        ensure(
            x.f_omega(&x)?.abs() < x.norm().square(),
            "strict inequality for the witness",
        )
    })?;
    ctx.case(|ctx| {
        let minus_one = ctx.scalar(-1);
        let Ok(i) = minus_one.hensel_sqrt() else {
            return Ok(());
        };
        let space = ctx.orthonormal(2);
        let x = space.vector(vec![ctx.scalar(1), i])?;
        ensure(
            x.is_isotropic(),
            "(1, i) is isotropic on the orthonormal plane",
        )
    })
}

pub fn pi_structure(ctx: &mut Ctx) -> Outcome {
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 8);
        let space = ctx.space(rng, n);
        let pi = sample::nonzero_scalar(rng, ctx.prime(), ctx.precision(), 1..=3);
        let ps = PiStructure::new(&space, pi)?;
        ensure_with(
            ps.satisfies_bracketing(),
            "bracketing of basis norms",
            &space,
        )?;
        let abs_pi = pi.abs();
        let x = sample::vector(rng, &space);
        let y = sample::vector(rng, &space);
        let (nx, ny) = (ps.norm(&x)?, ps.norm(&y)?);
        ensure_with(
            abs_pi.mul(nx) <= x.norm() && x.norm() <= nx,
            "norm equivalence",
            &x,
        )?;
        let f = ps.f_pi(&x, &y)?;
        ensure_with(
            f.abs() <= nx.mul(ny),
            "|f_pi(x, y)| <= ||x||_pi ||y||_pi",
            &(&x, &y),
        )?;
        ensure_with(
            f.abs() <= abs_pi.powi_signed(-2).mul(x.norm()).mul(y.norm()),
            "|f_pi(x, y)| <= |pi|^-2 ||x|| ||y||",
            &(&x, &y),
        )?;
        let u = sample::operator(rng, &space);
        let adj = u.adjoint_pi(&ps)?;
        ensure_with(
            ps.f_pi(&u.apply(&x)?, &y)? == ps.f_pi(&x, &adj.apply(&y)?)?,
            "f_pi(ux, y) = f_pi(x, u* y)",
            &u,
        )?;
        ensure_with(adj.adjoint_pi(&ps)? == u, "pi-adjoint is an involution", &u)
    })?;
    ctx.case(|ctx| {
        let space = ctx.orthonormal(1);
        ensure(
            PiStructure::new(&space, ctx.scalar(1)).is_err()
                && PiStructure::new(&space, ctx.scalar(0)).is_err(),
            "pi with |pi| >= 1 or pi = 0 is rejected",
        )
    })
}

pub fn orthogonal_families(ctx: &mut Ctx) -> Outcome {
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 4);
        let space = ctx.space(rng, n);
        let seed = rng.gen();
        let basis: Vec<Vector> = (0..n).map(|i| space.basis_vector(i)).collect();
        ensure_with(
            is_orthogonal_family(&basis, 20, seed)?,
            "standard basis is orthogonal",
            &space,
        )?;
        let (u, _) = sample::isometry(rng, &space);
        let columns: Vec<Vector> = basis.iter().map(|e| u.apply(e)).collect::<Result<_, _>>()?;
        ensure_with(
            is_orthogonal_family(&columns, 20, seed)?,
            "isometry columns are orthogonal",
            &u,
        )?;
        let x = sample::vector(rng, &space);
        if !x.is_zero() {
            let px = x.scale(&PadicScalar::prime_power(ctx.prime(), ctx.precision(), 1)?)?;
            ensure_with(
                !is_orthogonal_family(&[x.clone(), x.clone()], 0, seed)?,
                "{x, x} is not orthogonal",
                &x,
            )?;
            ensure_with(
                !is_orthogonal_family(&[x.clone(), px], 0, seed)?,
                "{x, p x} is not orthogonal",
                &x,
            )?;
        }
        Ok(())
    })?;
    ctx.case(|ctx| {
        let space = ctx.orthonormal(2);
        let family = [
            space.vector_from_i64(&[1, 0])?,
            space.vector_from_i64(&[1, 1])?,
        ];
        ensure(
            is_orthogonal_family(&family, 0, 0)?,
            "{(1, 0), (1, 1)} is orthogonal",
        )
    })
}

#[cfg(test)]
mod tests {
    use super::naive_valuation;

    #[test]
    fn naive_valuation_oracle() {
        assert_eq!(naive_valuation(5, 0), None);
        assert_eq!(naive_valuation(5, 250), Some(3));
        assert_eq!(naive_valuation(5, -7), Some(0));
        assert_eq!(naive_valuation(2, 96), Some(5));
    }
}
