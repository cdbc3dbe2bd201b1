//! Spatial embedding whose negative squared distance to a peak is a strictly
//! concave utility that almost strictly rationalizes a ballot.
//!
//! Ranked candidate `i` sits at `(i - 1)·e₁`. The `m` unranked candidates sit
//! on the sphere of radius `k` (the number of ranked candidates) around the
//! origin, at the cross-polytope vertices `±k·e₂, ±k·e₃, …`, which keeps all
//! coordinates integral. The peak is the origin.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{exact, Rational, UtilityAssignment};
use crate::ballot::{CandidateId, RankedBallot};

/// Margin by which sampled strict inequalities must hold.
pub const CONCAVITY_TOLERANCE: f64 = 1e-9;

const MIN_SEPARATION: f64 = 1e-2;
const LAMBDA_RANGE: (f64, f64) = (0.01, 0.99);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpatialWitness {
    pub dimension: usize,
    #[serde(serialize_with = "exact::serialize_vec")]
    pub peak: Vec<Rational>,
    #[serde(serialize_with = "exact::serialize_vec_map")]
    pub points: BTreeMap<CandidateId, Vec<Rational>>,
}

impl SpatialWitness {
    /// `u(c) = -‖points(c) - peak‖²`, exact.
    pub fn utility(&self) -> UtilityAssignment {
        UtilityAssignment::new(
            self.points
                .iter()
                .map(|(c, p)| (c.clone(), -squared_distance(p, &self.peak)))
                .collect(),
        )
    }

    fn value_f64(&self, point: &[f64]) -> f64 {
        -point
            .iter()
            .zip(&self.peak)
            .map(|(x, p)| {
                let d = x - exact::to_f64(p);
                d * d
            })
            .sum::<f64>()
    }
}

fn squared_distance(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .fold(Rational::from_integer(0), |acc, v| acc + v)
}

pub fn concave_witness(ballot: &RankedBallot) -> SpatialWitness {
    let k = ballot.ranked().len() as i64;
    let m = ballot.unranked().len();
    let dimension = m.max(1);
    let zero = Rational::from_integer(0);
    let mut points = BTreeMap::new();
    for (i, c) in ballot.ranked().iter().enumerate() {
        let mut p = vec![zero; dimension];
        p[0] = Rational::from_integer(i as i64);
        points.insert(c.clone(), p);
    }
    for (j, c) in ballot.unranked().iter().enumerate() {
        let mut p = vec![zero; dimension];
        let sign = if j % 2 == 0 { 1 } else { -1 };
        p[1 + j / 2] = Rational::from_integer(sign * k);
        points.insert(c.clone(), p);
    }
    SpatialWitness {
        dimension,
        peak: vec![zero; dimension],
        points,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityKind {
    StrictConcavity,
    StrictQuasiconcavity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcavityViolation {
    pub kind: InequalityKind,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcavityReport {
    pub trials: usize,
    pub passed: bool,
    pub violation: Option<ConcavityViolation>,
}

/// Samples `trials` pairs of distinct points from the convex hull of the
/// embedding (a unit box around the peak when the embedding is a single
/// point) and checks, at the midpoint and at a random `λ`, that
///
/// * `u(λx + (1-λ)y) > λu(x) + (1-λ)u(y)` and
/// * `u(λx + (1-λ)y) > min(u(x), u(y))`
///
/// both hold with margin [`CONCAVITY_TOLERANCE`]. Pairs closer than `1e-2`
/// are resampled and `λ` is drawn from `[0.01, 0.99]`.
pub fn verify_concavity(witness: &SpatialWitness, trials: usize, seed: u64) -> ConcavityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices: Vec<Vec<f64>> = witness
        .points
        .values()
        .map(|p| p.iter().map(exact::to_f64).collect())
        .collect();
    let degenerate = vertices.windows(2).all(|w| w[0] == w[1]);

    let sample = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        if degenerate {
            witness
                .peak
                .iter()
                .map(|p| exact::to_f64(p) + rng.gen_range(-1.0..1.0))
                .collect()
        } else {
            let weights: Vec<f64> = vertices
                .iter()
                .map(|_| -(1.0 - rng.gen::<f64>()).ln())
                .collect();
            let total: f64 = weights.iter().sum();
            (0..witness.dimension)
                .map(|axis| {
                    vertices
                        .iter()
                        .zip(&weights)
                        .map(|(v, w)| v[axis] * w / total)
                        .sum()
                })
                .collect()
        }
    };

    for _ in 0..trials {
        let (x, y) = loop {
            let x = sample(&mut rng);
            let y = sample(&mut rng);
            let gap: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
            if gap.sqrt() >= MIN_SEPARATION {
                break (x, y);
            }
        };
        let random_lambda = rng.gen_range(LAMBDA_RANGE.0..=LAMBDA_RANGE.1);
        for lambda in [0.5, random_lambda] {
            if let Some(violation) = check_pair(witness, &x, &y, lambda) {
                return ConcavityReport {
                    trials,
                    passed: false,
                    violation: Some(violation),
                };
            }
        }
    }
    ConcavityReport {
        trials,
        passed: true,
        violation: None,
    }
}

fn check_pair(
    witness: &SpatialWitness,
    x: &[f64],
    y: &[f64],
    lambda: f64,
) -> Option<ConcavityViolation> {
    let mix: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
        .collect();
    let (ux, uy, um) = (
        witness.value_f64(x),
        witness.value_f64(y),
        witness.value_f64(&mix),
    );
    let checks = [
        (
            InequalityKind::StrictConcavity,
            lambda * ux + (1.0 - lambda) * uy,
        ),
        (InequalityKind::StrictQuasiconcavity, ux.min(uy)),
    ];
    checks
        .into_iter()
        .find(|&(_, rhs)| um - rhs <= CONCAVITY_TOLERANCE)
        .map(|(kind, rhs)| ConcavityViolation {
            kind,
            x: x.to_vec(),
            y: y.to_vec(),
            lambda,
            lhs: um,
            rhs,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballot::parse_ballot;
    use crate::representation::{pair_record, rationalizability_class, RationalizabilityClass};

    fn id(s: &str) -> CandidateId {
        CandidateId::new(s).unwrap()
    }

    fn utilities(text: &str) -> (SpatialWitness, Vec<(String, i64)>) {
        let b = parse_ballot(text, None).unwrap();
        let w = concave_witness(&b);
        let u = w.utility();
        let values = b
            .preference_order()
            .map(|c| (c.to_string(), u.get(c).unwrap().to_integer()))
            .collect();
        (w, values)
    }

    #[test]
    fn total_order_on_a_line() {
        let (w, u) = utilities("p>q>r");
        assert_eq!(w.dimension, 1);
        assert_eq!(w.points[&id("r")], vec![Rational::from_integer(2)]);
        let values: Vec<i64> = u.iter().map(|(_, v)| *v).collect();
        assert_eq!(values, vec![0, -1, -4]);
    }

    #[test]
    fn reference_ballot_values() {
        let (w, u) = utilities("x>y>z>a~b~c~d");
        assert_eq!(w.dimension, 4);
        let values: Vec<i64> = u.iter().map(|(_, v)| *v).collect();
        assert_eq!(values, vec![0, -1, -4, -9, -9, -9, -9]);
    }

    #[test]
    fn antipodal_pair() {
        let (w, u) = utilities("g>a~b");
        assert_eq!(w.dimension, 2);
        assert_eq!(
            w.points[&id("a")],
            vec![Rational::from_integer(0), Rational::from_integer(1)]
        );
        assert_eq!(
            w.points[&id("b")],
            vec![Rational::from_integer(0), Rational::from_integer(-1)]
        );
        let values: Vec<i64> = u.iter().map(|(_, v)| *v).collect();
        assert_eq!(values, vec![0, -1, -1]);
    }

    #[test]
    fn points_are_distinct() {
        let b = parse_ballot("x>a~b~c~d~e", None).unwrap();
        let w = concave_witness(&b);
        let distinct: std::collections::BTreeSet<_> = w.points.values().collect();
        assert_eq!(distinct.len(), w.points.len());
    }

    #[test]
    fn witness_almost_strictly_rationalizes() {
        for text in ["x>y>z>a~b~c~d", "g>a~b", "p>q>r", "a"] {
            let b = parse_ballot(text, None).unwrap();
            let class = rationalizability_class(&concave_witness(&b).utility(), &pair_record(&b));
            assert!(
                class.satisfies(RationalizabilityClass::AlmostStrict),
                "{text}: {class}"
            );
        }
    }

    #[test]
    fn sampled_concavity() {
        let b = parse_ballot("x>y>z>a~b~c~d", None).unwrap();
        let report = verify_concavity(&concave_witness(&b), 1000, 7);
        assert!(report.passed, "{report:?}");
        let single = parse_ballot("a", None).unwrap();
        assert!(verify_concavity(&concave_witness(&single), 100, 7).passed);
    }

    #[test]
    fn midpoint_inequality_is_strict() {
        let b = parse_ballot("p>q", None).unwrap();
        let w = concave_witness(&b);
        assert!(check_pair(&w, &[0.0], &[1.0], 0.5).is_none());
    }

    #[test]
    fn endpoint_mixture_is_flagged() {
        // λ = 1 collapses the mixture onto x, so no strict inequality holds.
        let b = parse_ballot("p>q", None).unwrap();
        let w = concave_witness(&b);
        let v = check_pair(&w, &[0.0], &[1.0], 1.0).unwrap();
        assert_eq!(v.kind, InequalityKind::StrictConcavity);
    }

    #[test]
    fn witness_json() {
        let b = parse_ballot("g>a~b", None).unwrap();
        assert_eq!(
            serde_json::to_string(&concave_witness(&b)).unwrap(),
            r#"{"dimension":2,"peak":[0,0],"points":{"a":[0,1],"b":[0,-1],"g":[0,0]}}"#
        );
    }
}
