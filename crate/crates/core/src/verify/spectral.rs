use rand::Rng;

use super::{ensure, ensure_with, Check, Counterexample, Ctx};
use crate::error::{Error, Result};
use crate::measure::{
    spectral_integral, ClopenAlgebra, KMeasure, ProjectionValuedMeasure, StepFunction,
};
use crate::operator::Operator;
use crate::sample::{self, SampleRng};
use crate::scalar::{LogNorm, PadicScalar};
use crate::space::WeightedSpace;
use crate::theorems::{
    eigenrange_check, faithfulness, multiplication_rep, pvm_from_rep, rep_from_pvm,
    simultaneous_decompose, spectral_decompose_diagonal, spectral_decompose_in_basis,
    FiniteRepresentation,
};

type Outcome = std::result::Result<(), Counterexample>;

type Small = [[i64; 2]; 2];

fn small(code: usize) -> Small {
    [
        [(code & 1) as i64, (code >> 1 & 1) as i64],
        [(code >> 2 & 1) as i64, (code >> 3 & 1) as i64],
    ]
}

fn small_mul(a: &Small, b: &Small) -> Small {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Integer oracle for a two-atom measure on the orthonormal plane with
/// 0/1 entries: both idempotent, mutually annihilating, summing to `I`.
fn small_pvm_valid(a: &Small, b: &Small) -> bool {
    let zero = [[0; 2]; 2];
    let sum = [
        [a[0][0] + b[0][0], a[0][1] + b[0][1]],
        [a[1][0] + b[1][0], a[1][1] + b[1][1]],
    ];
    small_mul(a, a) == *a
        && small_mul(b, b) == *b
        && small_mul(a, b) == zero
        && small_mul(b, a) == zero
        && sum == [[1, 0], [0, 1]]
}

fn to_operator(space: &WeightedSpace, m: &Small) -> Operator {
    Operator::from_i64(space, &[m[0][0], m[0][1], m[1][0], m[1][1]]).expect("2x2")
}

fn random_pvm(
    ctx: &Ctx,
    rng: &mut SampleRng,
    atoms: std::ops::RangeInclusive<usize>,
) -> Result<ProjectionValuedMeasure> {
    let k = rng.gen_range(atoms);
    let n = ctx.dim(rng, 1, 6);
    let space = ctx.space(rng, n);
    let alg = ClopenAlgebra::numbered("x", k)?;
    let conjugate = rng.gen_bool(0.5);
    Ok(sample::pvm(rng, &alg, &space, conjugate))
}

fn random_function(
    rng: &mut SampleRng,
    alg: &ClopenAlgebra,
    space: &WeightedSpace,
) -> StepFunction {
    let values = (0..alg.atom_count())
        .map(|_| sample::scalar(rng, space.prime(), space.precision(), -1..=2, 0.25))
        .collect();
    StepFunction::from_atom_values(alg, values).expect("one value per atom")
}

pub fn thm_5_12_roundtrip(ctx: &mut Ctx) -> Outcome {
    if ctx.fits(2) {
        ctx.case(|ctx| {
            let space = ctx.orthonormal(2);
            let alg = ClopenAlgebra::finite(["a", "b"])?;
            let mut valid: Vec<ProjectionValuedMeasure> = Vec::new();
            for ca in 0..16 {
                for cb in 0..16 {
                    let (a, b) = (small(ca), small(cb));
                    let table = vec![to_operator(&space, &a), to_operator(&space, &b)];
                    let pvm =
                        ProjectionValuedMeasure::new(alg.clone(), space.clone(), table.clone());
                    let rep = FiniteRepresentation::new(alg.clone(), space.clone(), table)?;
                    let oracle = small_pvm_valid(&a, &b);
                    ensure_with(
                        pvm.is_ok() == oracle,
                        "measure validation agrees with the integer oracle",
                        &(a, b),
                    )?;
                    ensure_with(
                        rep.validate().is_ok() == oracle,
                        "representation validation agrees with the oracle",
                        &(a, b),
                    )?;
                    if let Ok(pvm) = pvm {
                        valid.push(pvm);
                    }
                }
            }
            ensure(valid.len() == 4, "exactly four 0/1 measures on two atoms")?;
            for p in &valid {
                let rep = rep_from_pvm(p);
                let back = pvm_from_rep(&rep)?;
                ensure_with(back == *p, "pvm -> rep -> pvm is the identity", p)?;
                ensure_with(
                    rep_from_pvm(&back) == rep,
                    "rep -> pvm -> rep is the identity",
                    p,
                )?;
                let preimages = valid.iter().filter(|q| rep_from_pvm(q) == rep).count();
                ensure_with(
                    preimages == 1,
                    "the measure of a representation is unique",
                    p,
                )?;
            }
            Ok(())
        })?;
    }
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let pvm = random_pvm(ctx, rng, 1..=4)?;
        let rep = rep_from_pvm(&pvm);
        rep.validate()?;
        let back = pvm_from_rep(&rep)?;
        ensure_with(back == pvm, "pvm -> rep -> pvm is the identity", &pvm)?;
        ensure_with(
            rep_from_pvm(&back) == rep,
            "rep -> pvm -> rep is the identity",
            &pvm,
        )?;
        let (alg, space) = (pvm.algebra(), pvm.space());
        let (f, g) = (
            random_function(rng, alg, space),
            random_function(rng, alg, space),
        );
        let tfg = rep.eval(&f.mul(&g, space.zero_scalar())?)?;
        ensure_with(
            tfg == rep.eval(&f)?.compose(&rep.eval(&g)?)?,
            "T_(fg) = T_f T_g",
            &pvm,
        )?;
        ensure_with(
            rep.eval(&f)?.op_norm() <= f.sup_norm(),
            "||T_f|| <= ||f||",
            &pvm,
        )?;
        let one = StepFunction::indicator(alg, alg.all(), space.one_scalar())?;
        ensure_with(
            rep.eval(&one)? == Operator::identity(space),
            "T_1 = I",
            &pvm,
        )
    })
}

fn check_eigenranges(b: &Operator) -> Check {
    let dec = spectral_decompose_diagonal(b)?;
    let alg = dec.pvm.algebra();
    for a in 0..alg.atom_count() {
        ensure_with(
            eigenrange_check(b, &dec, &alg.singleton(a))?,
            "range P({l}) = ker(b - l)",
            b,
        )?;
    }
    if alg.atom_count() <= 4 {
        for omega in alg.all_sets()? {
            ensure_with(
                eigenrange_check(b, &dec, &omega)?,
                "eigenrange identity on a set of eigenvalues",
                b,
            )?;
        }
    }
    Ok(())
}

pub fn prop_5_14(ctx: &mut Ctx) -> Outcome {
    if ctx.fits(3) {
        ctx.case(|ctx| {
            let space = ctx.orthonormal(3);
            let b = Operator::diagonal(&space, vec![ctx.scalar(2), ctx.scalar(2), ctx.scalar(7)])?;
            check_eigenranges(&b)
        })?;
    }
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 8);
        let space = ctx.space(rng, n);
        let pool = rng.gen_range(1..=4);
        let b = sample::diagonal_with_repeats(rng, &space, pool);
        check_eigenranges(&b)
    })
}

pub fn thm_5_15_1(ctx: &mut Ctx) -> Outcome {
    ctx.case(|ctx| {
        let pi = PadicScalar::prime_power(ctx.prime(), ctx.precision(), 1)?;
        let alg = ClopenAlgebra::finite(["a", "b"])?;
        let mr = multiplication_rep(&KMeasure::new(&alg, vec![pi, ctx.scalar(1)])?)?;
        let f = mr.space().vector_from_i64(&[1, 0])?;
        ensure(
            mr.function_norm(&f) == LogNorm::from_exponent(1),
            "||(1, 0)|| = |p|",
        )
    })?;
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let k = rng.gen_range(1..=5);
        let alg = ClopenAlgebra::numbered("x", k)?;
        let values: Vec<PadicScalar> = (0..k)
            .map(|_| sample::scalar(rng, ctx.prime(), ctx.precision(), -2..=2, 0.2))
            .collect();
        let mu = KMeasure::new(&alg, values.clone())?;
        if values.iter().all(PadicScalar::is_zero) {
            return ensure(
                matches!(multiplication_rep(&mu), Err(Error::InvalidInput(_))),
                "all-null measure is rejected",
            );
        }
        let mr = multiplication_rep(&mu)?;
        let kept = mr.kept_atoms();
        ensure_with(
            kept.iter()
                .copied()
                .eq((0..k).filter(|&a| !values[a].is_zero())),
            "exactly the null atoms are dropped",
            &values,
        )?;
        for (i, &a) in kept.iter().enumerate() {
            ensure_with(
                mr.space().basis_norm(i) == mu.n_mu_weight(a),
                "||e_x|| = N_mu(x)",
                &values,
            )?;
        }
        mr.representation().validate()?;
        ensure_with(
            mr.projections_are_multiplications()?,
            "P(W) f = Ch_W f",
            &values,
        )?;
        let a = random_function(rng, &alg, mr.space());
        let f = sample::vector(rng, mr.space());
        ensure_with(
            mr.bound_holds(&a, &f)?,
            "||a f|| <= ||a||_inf ||f||",
            &(&values, a.atom_values(mr.space().zero_scalar()), &f),
        )?;
        ensure_with(
            mr.apply(&a, &f)? == mr.representation().eval(&a)?.apply(&f)?,
            "T_a acts by multiplication",
            &values,
        )
    })
}

/// Moves the operators of the atoms in `zeroed` onto the first other atom.
fn zero_atoms(rep: &FiniteRepresentation, zeroed: &[usize]) -> Result<FiniteRepresentation> {
    let k = rep.table().len();
    let target = (0..k)
        .find(|a| !zeroed.contains(a))
        .expect("an atom is kept");
    let mut table = rep.table().to_vec();
    for &z in zeroed {
        table[target] = table[target].add(&table[z])?;
        table[z] = Operator::zero(rep.space());
    }
    FiniteRepresentation::new(rep.algebra().clone(), rep.space().clone(), table)
}

fn check_faithfulness(rep: &FiniteRepresentation) -> Check {
    let report = faithfulness(rep)?;
    let labels = rep.algebra().labels();
    ensure_with(report.consistent(), "faithful iff full support", &labels)?;
    let support = pvm_from_rep(rep)?.support();
    ensure_with(
        report.support == support,
        "support is read off the recovered measure",
        &labels,
    )?;
    match &report.kernel_witness {
        Some(f) => {
            let zero = rep.space().zero_scalar();
            ensure(
                f.atom_values(zero).iter().any(|v| !v.is_zero()),
                "kernel witness is nonzero",
            )?;
            ensure(rep.eval(f)?.is_zero(), "kernel witness lies in ker T")?;
            ensure(!report.faithful, "a kernel witness means T is not faithful")
        }
        None => ensure(report.faithful, "no kernel witness means T is faithful"),
    }
}

fn three_atom_bases(ctx: &Ctx) -> Result<Vec<FiniteRepresentation>> {
    let mut out = Vec::new();
    let alg = ClopenAlgebra::finite(["a", "b", "c"])?;
    if ctx.fits(3) {
        let s = ctx.orthonormal(3);
        let table = (0..3)
            .map(|a| Operator::diagonal(&s, (0..3).map(|i| s.scalar((i == a) as i64)).collect()))
            .collect::<Result<Vec<_>>>()?;
        out.push(FiniteRepresentation::new(alg.clone(), s, table)?);
    }
    if ctx.fits(4) {
        let pi = PadicScalar::prime_power(ctx.prime(), ctx.precision(), 1)?;
        let s = WeightedSpace::new(
            ctx.prime(),
            ctx.precision(),
            vec![ctx.scalar(1), pi, ctx.scalar(1), pi * pi],
        )?;
        let mut rng = sample::rng(ctx.seed);
        let (u, u_inv) = sample::isometry(&mut rng, &s);
        let owner = [0usize, 1, 1, 2];
        let table = (0..3)
            .map(|a| {
                let d = Operator::diagonal(
                    &s,
                    owner.iter().map(|&o| s.scalar((o == a) as i64)).collect(),
                )?;
                u.compose(&d)?.compose(&u_inv)
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(FiniteRepresentation::new(alg, s, table)?);
    }
    Ok(out)
}

pub fn prop_5_16_1(ctx: &mut Ctx) -> Outcome {
    let bases = three_atom_bases(ctx).expect("fixtures are valid");
    for base in &bases {
        for mask in 0u32..8 {
            let zeroed: Vec<usize> = (0..3).filter(|a| mask >> a & 1 == 1).collect();
            ctx.case(|_| {
                if zeroed.len() == 3 {
                    let mut table = base.table().to_vec();
                    table
                        .iter_mut()
                        .for_each(|t| *t = Operator::zero(base.space()));
                    let rep = FiniteRepresentation::new(
                        base.algebra().clone(),
                        base.space().clone(),
                        table,
                    )?;
                    return ensure(
                        rep.validate().is_err(),
                        "zeroing every atom breaks unitality",
                    );
                }
                let rep = zero_atoms(base, &zeroed)?;
                rep.validate()?;
                check_faithfulness(&rep)?;
                let report = faithfulness(&rep)?;
                ensure_with(
                    report.faithful == zeroed.is_empty(),
                    "faithful iff no atom is zeroed",
                    &zeroed,
                )?;
                let expected = rep.algebra().set((0..3).filter(|a| !zeroed.contains(a)))?;
                ensure_with(
                    report.support == expected,
                    "support is the complement of the zeroed atoms",
                    &zeroed,
                )
            })?;
        }
    }
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let pvm = random_pvm(ctx, rng, 1..=4)?;
        check_faithfulness(&rep_from_pvm(&pvm))
    })
}

pub fn thm_5_17_1_diag(ctx: &mut Ctx) -> Outcome {
    let mut repeated = 0usize;
    let samples = ctx.samples();
    ctx.sampled(samples, |ctx, rng| {
        let n = ctx.dim(rng, 1, 8);
        let space = ctx.space(rng, n);
        let b = if rng.gen_bool(0.5) {
            let pool = rng.gen_range(1..=n);
            sample::diagonal_with_repeats(rng, &space, pool)
        } else {
            sample::diagonal(rng, &space)
        };
        let dec = spectral_decompose_diagonal(&b)?;
        if dec.support.len() < n {
            repeated += 1;
        }
        ensure_with(
            dec.reconstruct() == b,
            "integral of x dP reconstructs b",
            &b,
        )?;
        ensure_with(
            spectral_integral(&dec.identity_function(), &dec.pvm)? == b,
            "identity integrates to b",
            &b,
        )?;
        let keys: Vec<_> = dec.support.iter().map(PadicScalar::sort_key).collect();
        ensure_with(
            keys.windows(2).all(|w| w[0] < w[1]),
            "support is strictly sorted",
            &b,
        )?;
        ensure_with(
            dec.pvm.support() == dec.pvm.algebra().all(),
            "every eigenvalue atom carries mass",
            &b,
        )?;
        for (a, lambda) in dec.support.iter().enumerate() {
            ensure_with(
                eigenrange_check(&b, &dec, &dec.pvm.algebra().singleton(a))?,
                "eigenrange of each atom",
                &(&b, lambda),
            )?;
        }

        let (u, u_inv) = sample::isometry(rng, &space);
        let conj = u.compose(&b)?.compose(&u_inv)?;
        let dec = spectral_decompose_in_basis(&conj, &u)?;
        ensure_with(
            dec.reconstruct() == conj,
            "decomposition in an isometric basis reconstructs",
            &(&b, &u),
        )?;
        if !conj.is_diagonal() {
            ensure_with(
                matches!(
                    spectral_decompose_diagonal(&conj),
                    Err(Error::Unsupported(_))
                ),
                "non-diagonal input is unsupported without a basis",
                &conj,
            )?;
        }
        Ok(())
    })?;
    ctx.case(|_| {
        ensure(
            repeated * 10 >= samples,
            format!("repeated eigenvalues in {repeated} of {samples} samples, below 10%"),
        )
    })
}

pub fn thm_5_17_1_family(ctx: &mut Ctx) -> Outcome {
    ctx.sampled(ctx.samples(), |ctx, rng| {
        let n = ctx.dim(rng, 1, 8);
        let space = ctx.space(rng, n);
        let (pb, pc) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
        let b = sample::diagonal_with_repeats(rng, &space, pb);
        let c = sample::diagonal_with_repeats(rng, &space, pc);
        let (bc, sum) = (b.compose(&c)?, b.add(&c)?);
        let joint = simultaneous_decompose(&[b.clone(), c.clone(), bc.clone(), sum.clone()])?;
        let zero = space.zero_scalar();
        let [fb, fc, fbc, fsum] = [0, 1, 2, 3].map(|k| joint.coordinates[k].atom_values(zero));
        for x in 0..fb.len() {
            ensure_with(
                fbc[x] == fb[x] * fc[x],
                "f_bc = f_b f_c pointwise",
                &(&b, &c),
            )?;
            ensure_with(
                fsum[x] == fb[x] + fc[x],
                "f_(b+c) = f_b + f_c pointwise",
                &(&b, &c),
            )?;
        }
        let integrals = joint
            .coordinates
            .iter()
            .map(|f| spectral_integral(f, &joint.pvm))
            .collect::<Result<Vec<_>>>()?;
        for (got, want) in integrals.iter().zip([&b, &c, &bc, &sum]) {
            ensure_with(got == want, "integral of f_b dP = b", &(&b, &c))?;
        }
        for x in &integrals {
            for y in &integrals {
                ensure_with(
                    x.commutes_with(y)?,
                    "generated algebra is commutative",
                    &(&b, &c),
                )?;
            }
        }
        if n > 1 {
            let shift = Operator::from_fn(&space, |i, j| {
                if i == 0 && j == 1 {
                    space.one_scalar()
                } else {
                    space.zero_scalar()
                }
            });
            let outcome = simultaneous_decompose(&[b.clone(), shift.clone()]);
            let commute = b.commutes_with(&shift)?;
            ensure_with(
                matches!(outcome, Err(Error::NonCommuting(0, 1))) != commute,
                "non-commuting pairs are reported",
                &b,
            )?;
        }
        Ok(())
    })?;
    if ctx.fits(3) && ctx.prime() == 5 {
        ctx.case(|ctx| {
            let s = ctx.orthonormal(3);
            let d =
                |v: [i64; 3]| Operator::diagonal(&s, v.iter().map(|&x| ctx.scalar(x)).collect());
            let joint = simultaneous_decompose(&[d([2, 2, 7])?, d([1, 3, 3])?])?;
            ensure(
                joint.pvm.algebra().labels() == ["(2, 1)", "(2, 3)", "(7, 3)"],
                "joint spectrum of diag(2, 2, 7) and diag(1, 3, 3)",
            )
        })?;
    }
    Ok(())
}
