//! Utility representations of ballots and the rationalizability machinery.

mod record;
mod utility;
mod witness;

pub use record::{
    extreme_points, pair_record, theorem3_check, theorem3_sweep, Disjunct, PairRecord,
    SweepSummary, Theorem3Verdict, Theorem3Witness, SUBSET_SWEEP_CAP,
};
pub use utility::{
    canonical_utility, is_representation, is_submodular, is_weakly_decreasing,
    rationalizability_class, relation_is_weakly_decreasing, submodularity_violation,
    RationalizabilityClass, UtilityAssignment,
};
pub use witness::{
    concave_witness, verify_concavity, ConcavityReport, ConcavityViolation, InequalityKind,
    SpatialWitness, CONCAVITY_TOLERANCE,
};

/// Exact utility values.
pub type Rational = num_rational::Rational64;

/// Serializes rationals as JSON integers when whole, else as `"p/q"` strings.
pub(crate) mod exact {
    use num_traits::ToPrimitive;
    use serde::ser::{SerializeMap, SerializeSeq};
    use serde::Serializer;

    use super::Rational;

    #[derive(serde::Serialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Text(String),
    }

    fn repr(value: &Rational) -> Repr {
        if value.is_integer() {
            Repr::Int(value.to_integer())
        } else {
            Repr::Text(value.to_string())
        }
    }

    pub fn serialize_vec<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&repr(v))?;
        }
        seq.end()
    }

    pub fn serialize_map<S, K>(
        values: &std::collections::BTreeMap<K, Rational>,
        s: S,
    ) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        K: serde::Serialize,
    {
        let mut map = s.serialize_map(Some(values.len()))?;
        for (k, v) in values {
            map.serialize_entry(k, &repr(v))?;
        }
        map.end()
    }

    pub fn serialize_vec_map<S, K>(
        values: &std::collections::BTreeMap<K, Vec<Rational>>,
        s: S,
    ) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        K: serde::Serialize,
    {
        let mut map = s.serialize_map(Some(values.len()))?;
        for (k, v) in values {
            let reprs: Vec<Repr> = v.iter().map(repr).collect();
            map.serialize_entry(k, &reprs)?;
        }
        map.end()
    }

    pub fn to_f64(value: &Rational) -> f64 {
        value.to_f64().expect("finite rational")
    }
}
