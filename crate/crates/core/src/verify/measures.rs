use rand::Rng;

use super::{ensure, ensure_with, Check, Counterexample, Ctx};
use crate::error::Result;
use crate::measure::{
    functional_measure, scalar_measure, spectral_integral, ClopenAlgebra, ClopenSet, KMeasure,
    ProjectionValuedMeasure, StepFunction,
};
use crate::operator::Operator;
use crate::sample::{self, SampleRng};
use crate::scalar::{LogNorm, PadicScalar};
use crate::space::{Vector, WeightedSpace};

type Outcome = std::result::Result<(), Counterexample>;

/// A measure with every set evaluated once.
struct Table {
    pvm: ProjectionValuedMeasure,
    sets: Vec<ClopenSet>,
    values: Vec<Operator>,
}

impl Table {
    fn new(pvm: ProjectionValuedMeasure) -> Result<Self> {
        let sets = pvm.algebra().all_sets()?;
        let values = sets.iter().map(|s| pvm.eval(s)).collect::<Result<_>>()?;
        Ok(Table { pvm, sets, values })
    }

    fn space(&self) -> &WeightedSpace {
        self.pvm.space()
    }

    fn algebra(&self) -> &ClopenAlgebra {
        self.pvm.algebra()
    }

    fn zero(&self) -> PadicScalar {
        self.space().zero_scalar()
    }

    fn indicator(&self, set: &ClopenSet) -> StepFunction {
        StepFunction::indicator(self.algebra(), set.clone(), self.space().one_scalar())
            .expect("set of the algebra")
    }

    /// Every function with values in `{0, 1, p}`.
    fn small_functions(&self) -> Vec<StepFunction> {
        let s = self.space();
        let palette = [s.zero_scalar(), s.one_scalar(), p_scalar(s)];
        let k = self.algebra().atom_count();
        (0..palette.len().pow(k as u32))
            .map(|mut code| {
                let values = (0..k)
                    .map(|_| {
                        let v = palette[code % palette.len()];
                        code /= palette.len();
                        v
                    })
                    .collect();
                StepFunction::from_atom_values(self.algebra(), values).expect("one value per atom")
            })
            .collect()
    }

    fn integral(&self, f: &StepFunction) -> Result<Operator> {
        spectral_integral(f, &self.pvm)
    }
}

fn p_scalar(space: &WeightedSpace) -> PadicScalar {
    PadicScalar::prime_power(space.prime(), space.precision(), 1).expect("valid field")
}

fn diag(space: &WeightedSpace, values: &[i64]) -> Operator {
    Operator::diagonal(space, values.iter().map(|&v| space.scalar(v)).collect())
        .expect("matching dimension")
}

/// Fixed measures on at most four atoms, filtered by the dimension cap.
fn fixtures(ctx: &Ctx) -> Result<Vec<Table>> {
    let (p, prec) = (ctx.prime(), ctx.precision());
    let mut out = Vec::new();

    // diag example: P(a) = diag(1, 1, 0), P(b) = diag(0, 0, 1)
    if ctx.fits(3) {
        let s = ctx.orthonormal(3);
        let alg = ClopenAlgebra::finite(["a", "b"])?;
        out.push(ProjectionValuedMeasure::new(
            alg,
            s.clone(),
            vec![diag(&s, &[1, 1, 0]), diag(&s, &[0, 0, 1])],
        )?);
    }

    // weighted, with a null atom
    if ctx.fits(3) {
        let pi = PadicScalar::prime_power(p, prec, 1)?;
        let s = WeightedSpace::new(p, prec, vec![ctx.scalar(1), pi, pi * pi])?;
        let alg = ClopenAlgebra::finite(["a", "b", "c"])?;
        out.push(ProjectionValuedMeasure::new(
            alg,
            s.clone(),
            vec![
                diag(&s, &[1, 0, 0]),
                diag(&s, &[0, 1, 1]),
                diag(&s, &[0, 0, 0]),
            ],
        )?);
    }

    // conjugated by a unipotent isometry, with a null atom
    if ctx.fits(4) {
        let s = ctx.orthonormal(4);
        let pi = p_scalar(&s);
        let (one, zero) = (s.one_scalar(), s.zero_scalar());
        let u = Operator::from_rows(
            &s,
            vec![
                vec![one, one, zero, zero],
                vec![zero, one, zero, zero],
                vec![zero, zero, one, pi],
                vec![zero, zero, zero, one],
            ],
        )?;
        let u_inv = u.unipotent_inverse()?;
        let conj = |d: Operator| u.compose(&d).and_then(|ud| ud.compose(&u_inv));
        let alg = ClopenAlgebra::finite(["a", "b", "c", "d"])?;
        let projectors = vec![
            conj(diag(&s, &[1, 0, 0, 0]))?,
            conj(diag(&s, &[0, 1, 1, 0]))?,
            conj(diag(&s, &[0, 0, 0, 0]))?,
            conj(diag(&s, &[0, 0, 0, 1]))?,
        ];
        out.push(ProjectionValuedMeasure::new(alg, s, projectors)?);
    }
    out.into_iter().map(Table::new).collect()
}

fn random_table(ctx: &Ctx, rng: &mut SampleRng) -> Result<Table> {
    let atoms = rng.gen_range(2..=4);
    let n = ctx.dim(rng, 1, 6);
    let space = ctx.space(rng, n);
    let alg = ClopenAlgebra::numbered("x", atoms)?;
    let conjugate = rng.gen_bool(0.5);
    Table::new(sample::pvm(rng, &alg, &space, conjugate))
}

fn random_function(rng: &mut SampleRng, t: &Table) -> StepFunction {
    let s = t.space();
    let values = (0..t.algebra().atom_count())
        .map(|_| sample::scalar(rng, s.prime(), s.precision(), -1..=2, 0.25))
        .collect();
    StepFunction::from_atom_values(t.algebra(), values).expect("one value per atom")
}

/// Runs `exhaustive` on every fixture, then `sampled` on `samples` random
/// measures.
fn over_measures(
    ctx: &mut Ctx,
    exhaustive: impl Fn(&Ctx, &Table) -> Check,
    sampled: impl Fn(&Ctx, &mut SampleRng, &Table) -> Check,
) -> Outcome {
    let tables = fixtures(ctx).expect("fixtures are valid");
    for t in &tables {
        ctx.case(|ctx| exhaustive(ctx, t))?;
    }
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let t = random_table(ctx, rng)?;
        sampled(ctx, rng, &t)
    })
}

fn null_set(t: &Table) -> ClopenSet {
    t.pvm.support().complement()
}

pub fn prop_5_1_i(ctx: &mut Ctx) -> Outcome {
    over_measures(
        ctx,
        |_, t| {
            let fs = t.small_functions();
            let ints = fs
                .iter()
                .map(|f| t.integral(f))
                .collect::<Result<Vec<_>>>()?;
            let null = null_set(t);
            for (f, i) in fs.iter().zip(&ints) {
                for (g, j) in fs.iter().zip(&ints) {
                    ensure_with(
                        (i == j) == f.agrees_off(g, &null, t.space()),
                        "integrals agree iff the functions agree off null atoms",
                        &(f.atom_values(t.zero()), g.atom_values(t.zero())),
                    )?;
                }
            }
            Ok(())
        },
        |_, rng, t| {
            let f = random_function(rng, t);
            let mut values = f.atom_values(t.zero());
            let a = rng.gen_range(0..values.len());
            let s = t.space();
            values[a] = values[a] + sample::scalar(rng, s.prime(), s.precision(), -1..=2, 0.3);
            let g = StepFunction::from_atom_values(t.algebra(), values)?;
            let same = t.integral(&f)? == t.integral(&g)?;
            ensure_with(
                same == f.agrees_off(&g, &null_set(t), s),
                "integrals agree iff the functions agree off null atoms",
                &(&t.pvm, f.atom_values(t.zero()), g.atom_values(t.zero())),
            )
        },
    )
}

fn check_linear(t: &Table, f: &StepFunction, g: &StepFunction, lambda: &PadicScalar) -> Check {
    let lhs = t.integral(&f.add(&g.scale(lambda), t.zero())?)?;
    let rhs = t.integral(f)?.add(&t.integral(g)?.scale(lambda)?)?;
    ensure_with(
        lhs == rhs,
        "I(f + l g) = I(f) + l I(g)",
        &(f.atom_values(t.zero()), g.atom_values(t.zero()), lambda),
    )
}

pub fn prop_5_1_ii(ctx: &mut Ctx) -> Outcome {
    over_measures(
        ctx,
        |_, t| {
            let s = t.space();
            let lambdas = [s.one_scalar(), -s.one_scalar(), p_scalar(s)];
            for a in &t.sets {
                for b in &t.sets {
                    for l in &lambdas {
                        check_linear(t, &t.indicator(a), &t.indicator(b), l)?;
                    }
                }
            }
            Ok(())
        },
        |_, rng, t| {
            let (f, g) = (random_function(rng, t), random_function(rng, t));
            let s = t.space();
            let lambda = sample::scalar(rng, s.prime(), s.precision(), -2..=2, 0.1);
            check_linear(t, &f, &g, &lambda)
        },
    )
}

fn check_multiplicative(t: &Table, f: &StepFunction, g: &StepFunction) -> Check {
    let lhs = t.integral(&f.mul(g, t.zero())?)?;
    let rhs = t.integral(f)?.compose(&t.integral(g)?)?;
    ensure_with(
        lhs == rhs,
        "I(f g) = I(f) I(g)",
        &(f.atom_values(t.zero()), g.atom_values(t.zero())),
    )
}

pub fn prop_5_1_iii(ctx: &mut Ctx) -> Outcome {
    over_measures(
        ctx,
        |_, t| {
            let fs = t.small_functions();
            for f in &fs {
                for g in &fs {
                    check_multiplicative(t, f, g)?;
                }
            }
            Ok(())
        },
        |_, rng, t| {
            let (f, g) = (random_function(rng, t), random_function(rng, t));
            check_multiplicative(t, &f, &g)
        },
    )
}

fn check_norm(t: &Table, f: &StepFunction) -> Check {
    ensure_with(
        t.integral(f)?.op_norm() == f.ess_sup_norm(&t.pvm)?,
        "||I(f)|| = ess sup |f|",
        &(&t.pvm, f.atom_values(t.zero())),
    )?;
    ensure_with(
        f.ess_sup_norm(&t.pvm)? <= f.sup_norm(),
        "ess sup <= sup",
        &f.atom_values(t.zero()),
    )
}

pub fn prop_5_1_v(ctx: &mut Ctx) -> Outcome {
    over_measures(
        ctx,
        |_, t| {
            for f in t.small_functions() {
                check_norm(t, &f)?;
            }
            Ok(())
        },
        |_, rng, t| {
            let f = random_function(rng, t);
            check_norm(t, &f)
        },
    )
}

fn check_indicators(t: &Table) -> Check {
    for (a, pa) in t.sets.iter().zip(&t.values) {
        ensure_with(
            t.integral(&t.indicator(a))? == *pa,
            "I(Ch_A) = P(A)",
            &a.to_string(),
        )?;
    }
    let id = Operator::identity(t.space());
    ensure(t.pvm.eval(&t.algebra().all())? == id, "P(X) = I")?;
    ensure(t.pvm.eval(&t.algebra().empty())?.is_zero(), "P(empty) = 0")?;
    ensure(
        t.integral(&t.indicator(&t.algebra().all()))? == id,
        "I(1) = I",
    )
}

pub fn prop_5_1_vi(ctx: &mut Ctx) -> Outcome {
    over_measures(
        ctx,
        |_, t| check_indicators(t),
        |_, _, t| check_indicators(t),
    )
}

fn check_functionals(t: &Table, f: &StepFunction, xi: &Vector, eta: &Vector) -> Check {
    let mu = functional_measure(&t.pvm, xi, eta)?;
    let bound = xi.norm().mul(eta.dual_norm());
    for (a, pa) in t.sets.iter().zip(&t.values) {
        ensure_with(
            mu.value(a) == eta.dot(&pa.apply(xi)?)?,
            "mu(A) = eta*(P(A) xi)",
            &a.to_string(),
        )?;
        ensure_with(
            mu.value(a).abs() <= bound,
            "|mu(A)| <= ||xi|| ||eta*||",
            &(xi, eta),
        )?;
    }
    let lhs = eta.dot(&t.integral(f)?.apply(xi)?)?;
    let rhs = f
        .atom_values(t.zero())
        .iter()
        .zip(mu.atom_values())
        .fold(t.zero(), |acc, (v, m)| acc + *v * *m);
    ensure_with(
        lhs == rhs,
        "eta*(I(f) xi) = sum f dmu",
        &(xi, eta, f.atom_values(t.zero())),
    )
}

pub fn prop_5_1_vii(ctx: &mut Ctx) -> Outcome {
    over_measures(
        ctx,
        |_, t| {
            let s = t.space();
            let n = s.dim();
            let fs = t.small_functions();
            for j in 0..n {
                let xi = s.basis_vector(j);
                for i in 0..n {
                    let mu = scalar_measure(&t.pvm, &xi, i)?;
                    for (a, pa) in t.sets.iter().zip(&t.values) {
                        ensure_with(
                            mu.value(a) == *pa.get(i, j),
                            "mu_(e_j, e_i)(A) = P(A)_ij",
                            &(i, j, a.to_string()),
                        )?;
                    }
                    let eta = s.basis_vector(i);
                    for f in &fs {
                        check_functionals(t, f, &xi, &eta)?;
                    }
                }
            }
            Ok(())
        },
        |_, rng, t| {
            let f = random_function(rng, t);
            let (xi, eta) = (
                sample::vector(rng, t.space()),
                sample::vector(rng, t.space()),
            );
            check_functionals(t, &f, &xi, &eta)
        },
    )
}

pub fn prop_5_1_viii(ctx: &mut Ctx) -> Outcome {
    let commute = |t: &Table, f: &StepFunction| -> Check {
        let i = t.integral(f)?;
        for (a, pa) in t.sets.iter().zip(&t.values) {
            ensure_with(
                pa.commutes_with(&i)?,
                "P(A) commutes with I(f)",
                &(a.to_string(), f.atom_values(t.zero())),
            )?;
        }
        Ok(())
    };
    over_measures(
        ctx,
        |_, t| t.small_functions().iter().try_for_each(|f| commute(t, f)),
        |_, rng, t| {
            let f = random_function(rng, t);
            commute(t, &f)
        },
    )
}

fn check_products(t: &Table) -> Check {
    for (a, pa) in t.sets.iter().zip(&t.values) {
        for (b, pb) in t.sets.iter().zip(&t.values) {
            let meet = t.pvm.eval(&a.intersection(b))?;
            ensure_with(
                pa.compose(pb)? == meet && pb.compose(pa)? == meet,
                "P(A n B) = P(A) P(B) = P(B) P(A)",
                &(a.to_string(), b.to_string()),
            )?;
        }
    }
    Ok(())
}

pub fn lemma_5_7(ctx: &mut Ctx) -> Outcome {
    over_measures(ctx, |_, t| check_products(t), |_, _, t| check_products(t))
}

fn check_projections(t: &Table) -> Check {
    let id = Operator::identity(t.space());
    for (a, pa) in t.sets.iter().zip(&t.values) {
        let w = a.to_string();
        ensure_with(pa.compose(pa)? == *pa, "P(A)^2 = P(A)", &w)?;
        ensure_with(pa.op_norm() <= LogNorm::ONE, "||P(A)|| <= 1", &w)?;
        ensure_with(
            pa.add(&t.pvm.eval(&a.complement())?)? == id,
            "P(A) + P(A^c) = I",
            &w,
        )?;
        for (b, pb) in t.sets.iter().zip(&t.values) {
            if a.is_disjoint(b) {
                let w = (a.to_string(), b.to_string());
                ensure_with(
                    pa.compose(pb)?.is_zero(),
                    "disjoint sets give orthogonal projections",
                    &w,
                )?;
                ensure_with(t.pvm.eval(&a.union(b))? == pa.add(pb)?, "P is additive", &w)?;
            }
        }
    }
    Ok(())
}

pub fn cor_5_8(ctx: &mut Ctx) -> Outcome {
    over_measures(
        ctx,
        |_, t| check_projections(t),
        |_, _, t| check_projections(t),
    )
}

fn check_polarization(t: &Table, xi: &Vector, eta: &Vector) -> Check {
    let m = |x: &Vector, y: &Vector| functional_measure(&t.pvm, x, y);
    let sum = xi.add(eta)?;
    let (whole, xx, yy, xy, yx) = (
        m(&sum, &sum)?,
        m(xi, xi)?,
        m(eta, eta)?,
        m(xi, eta)?,
        m(eta, xi)?,
    );
    let symmetric = t.pvm.projectors().iter().all(|p| p.transpose() == *p);
    let two = t.space().scalar(2);
    for a in &t.sets {
        let lhs = whole.value(a) - xx.value(a) - yy.value(a);
        ensure_with(
            lhs == xy.value(a) + yx.value(a),
            "polarization identity",
            &(xi, eta, a.to_string()),
        )?;
        if symmetric {
            ensure_with(
                lhs == two * xy.value(a),
                "symmetric polarization",
                &(xi, eta, a.to_string()),
            )?;
        }
    }
    Ok(())
}

pub fn polarization(ctx: &mut Ctx) -> Outcome {
    over_measures(
        ctx,
        |_, t| {
            let s = t.space();
            for i in 0..s.dim() {
                for j in 0..s.dim() {
                    check_polarization(t, &s.basis_vector(i), &s.basis_vector(j))?;
                }
            }
            Ok(())
        },
        |_, rng, t| {
            let (xi, eta) = (
                sample::vector(rng, t.space()),
                sample::vector(rng, t.space()),
            );
            check_polarization(t, &xi, &eta)
        },
    )
}

pub fn measure_norms(ctx: &mut Ctx) -> Outcome {
    ctx.case(|ctx| {
        let pi = PadicScalar::prime_power(ctx.prime(), ctx.precision(), 1)?;
        let alg = ClopenAlgebra::finite(["a", "b"])?;
        let mu = KMeasure::new(&alg, vec![pi, ctx.scalar(1)])?;
        let a = alg.singleton(0);
        ensure(
            mu.measure_norm(&a) == LogNorm::from_exponent(1),
            "||{a}|| = |p|",
        )?;
        ensure(
            mu.measure_norm_exhaustive(&a)? == LogNorm::from_exponent(1),
            "||{a}|| by enumeration",
        )?;
        ensure(
            mu.n_mu_weight_exhaustive(0)? == LogNorm::from_exponent(1),
            "N(a) = |p|",
        )
    })?;
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let k = rng.gen_range(1..=5);
        let alg = ClopenAlgebra::numbered("x", k)?;
        let values = (0..k)
            .map(|_| sample::scalar(rng, ctx.prime(), ctx.precision(), -2..=2, 0.2))
            .collect();
        let mu = KMeasure::new(&alg, values)?;
        let sets = alg.all_sets()?;
        for a in &sets {
            let w = (mu.atom_values(), a.to_string());
            ensure_with(
                mu.measure_norm(a) == mu.measure_norm_exhaustive(a)?,
                "||A||_mu by enumeration",
                &w,
            )?;
            for b in &sets {
                if a.is_subset(b) {
                    ensure_with(
                        mu.measure_norm(a) <= mu.measure_norm(b),
                        "||.||_mu is monotone",
                        &w,
                    )?;
                }
            }
            ensure_with(
                mu.value(a).abs() <= mu.measure_norm(a),
                "|mu(A)| <= ||A||_mu",
                &w,
            )?;
        }
        for x in 0..k {
            ensure_with(
                mu.n_mu_weight(x) == mu.n_mu_weight_exhaustive(x)?,
                "N_mu by enumeration",
                &mu.atom_values(),
            )?;
        }
        Ok(())
    })
}
