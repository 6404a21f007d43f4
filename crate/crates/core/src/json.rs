//! JSON wire formats.
//!
//! Each core type serializes through a plain wire struct and is validated on
//! the way back in, so malformed input surfaces as a deserialization error.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gelfand::{BElement, GelfandTable};
use crate::measure::{ClopenAlgebra, ProjectionValuedMeasure, StepFunction};
use crate::operator::Operator;
use crate::scalar::{LogNorm, PadicScalar};
use crate::space::{Vector, WeightedSpace};
use crate::theorems::{Decomposition, FiniteRepresentation};

macro_rules! via_wire {
    ($ty:ty, $wire:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                <$wire>::from(self).serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let wire = <$wire>::deserialize(d)?;
                <$ty>::try_from(wire).map_err(D::Error::custom)
            }
        }
    };
}

pub type Matrix = Vec<Vec<PadicScalar>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceWire {
    pub p: u32,
    pub precision: u32,
    pub omega: Vec<PadicScalar>,
}

impl From<&WeightedSpace> for SpaceWire {
    fn from(s: &WeightedSpace) -> Self {
        SpaceWire {
            p: s.prime(),
            precision: s.precision(),
            omega: s.omega().to_vec(),
        }
    }
}

impl TryFrom<SpaceWire> for WeightedSpace {
    type Error = Error;

    fn try_from(w: SpaceWire) -> Result<Self> {
        WeightedSpace::new(w.p, w.precision, w.omega)
    }
}

via_wire!(WeightedSpace, SpaceWire);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorWire {
    pub space: WeightedSpace,
    pub coords: Vec<PadicScalar>,
}

impl From<&Vector> for VectorWire {
    fn from(v: &Vector) -> Self {
        VectorWire {
            space: v.space().clone(),
            coords: v.coords().to_vec(),
        }
    }
}

impl TryFrom<VectorWire> for Vector {
    type Error = Error;

    fn try_from(w: VectorWire) -> Result<Self> {
        w.space.vector(w.coords)
    }
}

via_wire!(Vector, VectorWire);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorWire {
    pub space: WeightedSpace,
    pub entries: Matrix,
}

impl From<&Operator> for OperatorWire {
    fn from(u: &Operator) -> Self {
        OperatorWire {
            space: u.space().clone(),
            entries: u.rows(),
        }
    }
}

impl TryFrom<OperatorWire> for Operator {
    type Error = Error;

    fn try_from(w: OperatorWire) -> Result<Self> {
        Operator::from_rows(&w.space, w.entries)
    }
}

via_wire!(Operator, OperatorWire);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BElementWire {
    pub space: WeightedSpace,
    pub partition: Vec<Vec<usize>>,
    pub alpha0: PadicScalar,
    pub alphas: Vec<PadicScalar>,
}

impl From<&BElement> for BElementWire {
    fn from(u: &BElement) -> Self {
        BElementWire {
            space: u.space().clone(),
            partition: u.partition().to_vec(),
            alpha0: *u.alpha0(),
            alphas: u.alphas().to_vec(),
        }
    }
}

impl TryFrom<BElementWire> for BElement {
    type Error = Error;

    fn try_from(w: BElementWire) -> Result<Self> {
        BElement::new(&w.space, w.partition, w.alpha0, w.alphas)
    }
}

via_wire!(BElement, BElementWire);

/// Table indexed by `chi_0, chi_1, ...`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GelfandTableWire {
    pub space: WeightedSpace,
    pub partition: Vec<Vec<usize>>,
    pub values: Vec<PadicScalar>,
}

impl From<&GelfandTable> for GelfandTableWire {
    fn from(t: &GelfandTable) -> Self {
        GelfandTableWire {
            space: t.space.clone(),
            partition: t.partition.clone(),
            values: t.values.clone(),
        }
    }
}

impl TryFrom<GelfandTableWire> for GelfandTable {
    type Error = Error;

    fn try_from(w: GelfandTableWire) -> Result<Self> {
        crate::gelfand::validate_partition(&w.space, &w.partition)?;
        Ok(GelfandTable {
            space: w.space,
            partition: w.partition,
            values: w.values,
        })
    }
}

via_wire!(GelfandTable, GelfandTableWire);

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AlgebraWire {
    Finite { atoms: Vec<String> },
    Zp { p: u32, resolution: u32 },
}

impl From<&ClopenAlgebra> for AlgebraWire {
    fn from(a: &ClopenAlgebra) -> Self {
        match a {
            ClopenAlgebra::Finite { atoms } => AlgebraWire::Finite {
                atoms: atoms.clone(),
            },
            ClopenAlgebra::Zp { prime, resolution } => AlgebraWire::Zp {
                p: *prime,
                resolution: *resolution,
            },
        }
    }
}

impl TryFrom<AlgebraWire> for ClopenAlgebra {
    type Error = Error;

    fn try_from(w: AlgebraWire) -> Result<Self> {
        match w {
            AlgebraWire::Finite { atoms } => ClopenAlgebra::finite(atoms),
            AlgebraWire::Zp { p, resolution } => ClopenAlgebra::zp(p, resolution),
        }
    }
}

via_wire!(ClopenAlgebra, AlgebraWire);

/// Reads one entry per atom label from a label-keyed map.
fn by_label<T>(algebra: &ClopenAlgebra, mut map: BTreeMap<String, T>) -> Result<Vec<T>> {
    let values = algebra
        .labels()
        .iter()
        .map(|l| {
            map.remove(l)
                .ok_or_else(|| Error::InvalidInput(format!("missing entry for atom {l:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(extra) = map.keys().next() {
        return Err(Error::InvalidInput(format!("unknown atom {extra:?}")));
    }
    Ok(values)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PvmWire {
    pub algebra: ClopenAlgebra,
    pub space: WeightedSpace,
    pub projectors: BTreeMap<String, Matrix>,
}

impl From<&ProjectionValuedMeasure> for PvmWire {
    fn from(p: &ProjectionValuedMeasure) -> Self {
        PvmWire {
            algebra: p.algebra().clone(),
            space: p.space().clone(),
            projectors: p
                .algebra()
                .labels()
                .into_iter()
                .zip(p.projectors().iter().map(Operator::rows))
                .collect(),
        }
    }
}

impl TryFrom<PvmWire> for ProjectionValuedMeasure {
    type Error = Error;

    fn try_from(w: PvmWire) -> Result<Self> {
        let projectors = by_label(&w.algebra, w.projectors)?
            .into_iter()
            .map(|m| Operator::from_rows(&w.space, m))
            .collect::<Result<Vec<_>>>()?;
        ProjectionValuedMeasure::new(w.algebra, w.space, projectors)
    }
}

via_wire!(ProjectionValuedMeasure, PvmWire);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepWire {
    pub algebra: ClopenAlgebra,
    pub space: WeightedSpace,
    pub table: BTreeMap<String, Operator>,
}

impl From<&FiniteRepresentation> for RepWire {
    fn from(r: &FiniteRepresentation) -> Self {
        RepWire {
            algebra: r.algebra().clone(),
            space: r.space().clone(),
            table: r
                .algebra()
                .labels()
                .into_iter()
                .zip(r.table().iter().cloned())
                .collect(),
        }
    }
}

impl TryFrom<RepWire> for FiniteRepresentation {
    type Error = Error;

    fn try_from(w: RepWire) -> Result<Self> {
        let table = by_label(&w.algebra, w.table)?;
        FiniteRepresentation::new(w.algebra, w.space, table)
    }
}

via_wire!(FiniteRepresentation, RepWire);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionWire {
    pub support: Vec<PadicScalar>,
    pub pvm: ProjectionValuedMeasure,
}

impl From<&Decomposition> for DecompositionWire {
    fn from(d: &Decomposition) -> Self {
        DecompositionWire {
            support: d.support.clone(),
            pvm: d.pvm.clone(),
        }
    }
}

impl TryFrom<DecompositionWire> for Decomposition {
    type Error = Error;

    fn try_from(w: DecompositionWire) -> Result<Self> {
        if w.support.len() != w.pvm.algebra().atom_count() {
            return Err(Error::DimensionMismatch {
                expected: w.pvm.algebra().atom_count(),
                found: w.support.len(),
            });
        }
        Ok(Decomposition {
            support: w.support,
            pvm: w.pvm,
        })
    }
}

via_wire!(Decomposition, DecompositionWire);

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceWire {
    pub set: Vec<String>,
    pub value: PadicScalar,
}

/// Step function; set labels are resolved against an algebra supplied
/// separately.
#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepFunctionWire {
    pub pieces: Vec<PieceWire>,
}

impl StepFunctionWire {
    pub fn from_function(f: &StepFunction) -> Self {
        StepFunctionWire {
            pieces: f
                .pieces()
                .iter()
                .map(|(set, value)| PieceWire {
                    set: set.atoms().iter().map(|&a| f.algebra().label(a)).collect(),
                    value: *value,
                })
                .collect(),
        }
    }

    pub fn resolve(&self, algebra: &ClopenAlgebra) -> Result<StepFunction> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Ok((algebra.set_of_labels(&p.set)?, p.value)))
            .collect::<Result<Vec<_>>>()?;
        StepFunction::new(algebra, pieces)
    }
}

/// Input of a spectral integral: a measure and a step function over its
/// algebra.
#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrateRequest {
    pub pvm: ProjectionValuedMeasure,
    pub function: StepFunctionWire,
}

impl IntegrateRequest {
    pub fn integrate(&self) -> Result<Operator> {
        let f = self.function.resolve(self.pvm.algebra())?;
        crate::measure::spectral_integral(&f, &self.pvm)
    }
}

/// `{"norm":{"exponent":...}}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormReport {
    pub norm: LogNorm,
}

pub fn to_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("wire types always serialize")
}

pub fn from_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use crate::theorems::spectral_decompose_diagonal;

    fn q5(n: i64) -> PadicScalar {
        PadicScalar::from_i64(5, 16, n).unwrap()
    }

    fn roundtrip<T: Serialize + for<'de> Deserialize<'de> + PartialEq + std::fmt::Debug>(x: &T) {
        let text = to_string(x);
        let back: T = from_str(&text).unwrap();
        assert_eq!(&back, x);
        assert_eq!(to_string(&back), text);
    }

    #[test]
    fn space_encoding() {
        let s = WeightedSpace::new(5, 16, vec![q5(1), q5(5)]).unwrap();
        assert_eq!(
            to_string(&s),
            r#"{"p":5,"precision":16,"omega":[{"p":5,"precision":16,"valuation":0,"unit":"1"},{"p":5,"precision":16,"valuation":1,"unit":"1"}]}"#
        );
        roundtrip(&s);
        assert!(from_str::<WeightedSpace>(r#"{"p":5,"precision":16,"omega":[]}"#).is_err());
        assert!(from_str::<WeightedSpace>(
            r#"{"p":5,"precision":16,"omega":[{"p":5,"precision":16,"zero":true}]}"#
        )
        .is_err());
    }

    #[test]
    fn operator_encoding_is_row_major() {
        let s = WeightedSpace::orthonormal(5, 16, 2).unwrap();
        let u = Operator::from_i64(&s, &[0, 1, 0, 0]).unwrap();
        let v: serde_json::Value = serde_json::to_value(&u).unwrap();
        assert_eq!(v["entries"][0][1]["unit"], "1");
        assert_eq!(v["entries"][1][0]["zero"], true);
        roundtrip(&u);
        let bad = r#"{"space":{"p":5,"precision":16,"omega":[{"p":5,"precision":16,"valuation":0,"unit":"1"}]},"entries":[[]]}"#;
        assert!(from_str::<Operator>(bad).is_err());
    }

    #[test]
    fn random_roundtrips() {
        let mut rng = sample::rng(12);
        for dim in 1..=5 {
            let s = sample::space(&mut rng, 5, 16, dim);
            roundtrip(&s);
            roundtrip(&sample::vector(&mut rng, &s));
            roundtrip(&sample::operator(&mut rng, &s));
            let b = sample::belement(&mut rng, &s);
            roundtrip(&b);
            roundtrip(&crate::gelfand::gelfand(&b));
            let alg = ClopenAlgebra::numbered("x", 1 + dim % 3).unwrap();
            let p = sample::pvm(&mut rng, &alg, &s, true);
            roundtrip(&p);
            roundtrip(&crate::theorems::rep_from_pvm(&p));
            let d = spectral_decompose_diagonal(&sample::diagonal_with_repeats(&mut rng, &s, 2))
                .unwrap();
            roundtrip(&d);
        }
    }

    #[test]
    fn algebra_encoding() {
        let a = ClopenAlgebra::finite(["a", "b"]).unwrap();
        assert_eq!(to_string(&a), r#"{"kind":"finite","atoms":["a","b"]}"#);
        let z = ClopenAlgebra::zp(5, 2).unwrap();
        assert_eq!(to_string(&z), r#"{"kind":"zp","p":5,"resolution":2}"#);
        roundtrip(&a);
        roundtrip(&z);
        assert!(from_str::<ClopenAlgebra>(r#"{"kind":"zp","p":5,"resolution":9}"#).is_err());
    }

    #[test]
    fn pvm_rejects_missing_and_unknown_atoms() {
        let s = WeightedSpace::orthonormal(5, 16, 1).unwrap();
        let a = ClopenAlgebra::finite(["a"]).unwrap();
        let p = ProjectionValuedMeasure::new(a, s.clone(), vec![Operator::identity(&s)]).unwrap();
        let mut v = serde_json::to_value(&p).unwrap();
        let m = v["projectors"]["a"].clone();
        v["projectors"]["b"] = m;
        assert!(serde_json::from_value::<ProjectionValuedMeasure>(v.clone()).is_err());
        v["projectors"].as_object_mut().unwrap().remove("a");
        v["projectors"].as_object_mut().unwrap().remove("b");
        assert!(serde_json::from_value::<ProjectionValuedMeasure>(v).is_err());
    }

    #[test]
    fn step_function_encoding() {
        let a = ClopenAlgebra::finite(["a", "b"]).unwrap();
        let f =
            StepFunction::new(&a, vec![(a.singleton(0), q5(2)), (a.singleton(1), q5(7))]).unwrap();
        let w = StepFunctionWire::from_function(&f);
        let text = to_string(&w);
        assert!(text.starts_with(r#"{"pieces":[{"set":["a"],"value":"#));
        let back: StepFunctionWire = from_str(&text).unwrap();
        assert_eq!(back.resolve(&a).unwrap(), f);
        let unknown = StepFunctionWire {
            pieces: vec![PieceWire {
                set: vec!["c".into()],
                value: q5(1),
            }],
        };
        assert!(unknown.resolve(&a).is_err());
    }

    #[test]
    fn integrate_request() {
        let s = WeightedSpace::orthonormal(5, 16, 3).unwrap();
        let a = ClopenAlgebra::finite(["a", "b"]).unwrap();
        let d = |v: [i64; 3]| Operator::diagonal(&s, v.iter().map(|&x| q5(x)).collect()).unwrap();
        let pvm =
            ProjectionValuedMeasure::new(a.clone(), s.clone(), vec![d([1, 1, 0]), d([0, 0, 1])])
                .unwrap();
        let f =
            StepFunction::new(&a, vec![(a.singleton(0), q5(2)), (a.singleton(1), q5(7))]).unwrap();
        let req = IntegrateRequest {
            pvm,
            function: StepFunctionWire::from_function(&f),
        };
        let back: IntegrateRequest = from_str(&to_string(&req)).unwrap();
        assert_eq!(back.integrate().unwrap(), d([2, 2, 7]));
        assert!(from_str::<IntegrateRequest>(r#"{"pvm":null}"#).is_err());
    }

    #[test]
    fn norm_report_encoding() {
        let r = NormReport {
            norm: LogNorm::ZERO,
        };
        assert_eq!(to_string(&r), r#"{"norm":{"exponent":"inf"}}"#);
        assert_eq!(from_str::<NormReport>(&to_string(&r)).unwrap(), r);
    }
}
