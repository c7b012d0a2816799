//! Monomial orders: a positive rational weight vector refined by degree and a
//! lexicographic tie-break.

use std::cmp::Ordering;
use std::fmt;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Exponent;

/// How exponents with equal weight and equal total degree are ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    /// x₁ ≺ x₂ ≺ … : at the first differing position the larger exponent is smaller.
    Lex,
    /// x_d ≺ … ≺ x₁ : the same rule scanned from the last variable.
    InvLex,
}

/// Precomputed comparison key, see [`MonomialOrder::key`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderKey {
    weight: u128,
    degree: i64,
    tail: Vec<i64>,
}

/// Total order on ℕ^d: ℓ-weight first, then total degree, then the tie-break.
///
/// Compatible with addition because each stage is.
#[derive(Clone, Debug)]
pub struct MonomialOrder {
    weights: Vec<Rational>,
    tiebreak: TieBreak,
    // weights scaled by the lcm of their denominators
    scaled: Vec<u64>,
}

impl PartialEq for MonomialOrder {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights && self.tiebreak == other.tiebreak
    }
}

impl Eq for MonomialOrder {}

impl MonomialOrder {
    pub fn new(weights: Vec<Rational>, tiebreak: TieBreak) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("monomial order needs at least one weight".into()));
        }
        if weights.iter().any(|w| w.cmp0() != Ordering::Greater) {
            return Err(Error::InvalidArgument("order weights must be strictly positive".into()));
        }
        let lcm = weights
            .iter()
            .fold(Integer::from(1), |acc, w| acc.lcm(w.denom()));
        let mut scaled = Vec::with_capacity(weights.len());
        for w in &weights {
            let s = Integer::from(w.numer() * Integer::from(&lcm / w.denom()));
            let s = s
                .to_u64()
                .filter(|&v| v < (1 << 40))
                .ok_or_else(|| Error::InvalidArgument("order weights too large".into()))?;
            scaled.push(s);
        }
        Ok(MonomialOrder {
            weights,
            tiebreak,
            scaled,
        })
    }

    /// Integer weights with the lex tie-break.
    pub fn from_ints(weights: &[u64]) -> Result<Self> {
        MonomialOrder::new(
            weights.iter().map(|&w| Rational::from(w)).collect(),
            TieBreak::Lex,
        )
    }

    /// All weights one: graded order with the given tie-break.
    pub fn graded(dim: usize, tiebreak: TieBreak) -> Self {
        MonomialOrder::new(vec![Rational::from(1); dim], tiebreak).expect("unit weights are valid")
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn tiebreak(&self) -> TieBreak {
        self.tiebreak
    }

    /// ℓ(e) in units of the common denominator.
    pub fn scaled_weight(&self, e: &Exponent) -> u128 {
        e.iter()
            .zip(&self.scaled)
            .map(|(&a, &w)| u128::from(a) * u128::from(w))
            .sum()
    }

    /// ℓ(e) as an exact rational.
    pub fn weight(&self, e: &Exponent) -> Rational {
        e.iter()
            .zip(&self.weights)
            .fold(Rational::new(), |acc, (&a, w)| acc + Rational::from(w * a))
    }

    pub fn cmp(&self, a: &Exponent, b: &Exponent) -> Ordering {
        debug_assert_eq!(a.dim(), b.dim());
        self.scaled_weight(a)
            .cmp(&self.scaled_weight(b))
            .then_with(|| a.degree().cmp(&b.degree()))
            .then_with(|| {
                let pairs: Box<dyn Iterator<Item = (&u32, &u32)>> = match self.tiebreak {
                    TieBreak::Lex => Box::new(a.iter().zip(b.iter())),
                    TieBreak::InvLex => Box::new(a.iter().rev().zip(b.iter().rev())),
                };
                for (x, y) in pairs {
                    if x != y {
                        // larger exponent in an earlier variable comes first
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            })
    }

    /// Sort key whose natural order is this monomial order.
    pub fn key(&self, e: &Exponent) -> OrderKey {
        let tail: Vec<i64> = match self.tiebreak {
            TieBreak::Lex => e.iter().map(|&a| -i64::from(a)).collect(),
            TieBreak::InvLex => e.iter().rev().map(|&a| -i64::from(a)).collect(),
        };
        OrderKey {
            weight: self.scaled_weight(e),
            degree: e.degree(),
            tail,
        }
    }

    /// Parses `"w1,w2,…[:lex|:invlex]"`; weights may be `p/q`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (ws, tb) = match spec.split_once(':') {
            Some((w, t)) => (w, t.trim()),
            None => (spec, "lex"),
        };
        let tiebreak = match tb {
            "lex" => TieBreak::Lex,
            "invlex" => TieBreak::InvLex,
            other => return Err(Error::Parse(format!("unknown tie-break {other:?}"))),
        };
        let weights = ws
            .split(',')
            .map(|w| {
                w.trim()
                    .parse::<Rational>()
                    .map_err(|_| Error::Parse(format!("bad order weight {w:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        MonomialOrder::new(weights, tiebreak)
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        let tb = match self.tiebreak {
            TieBreak::Lex => "lex",
            TieBreak::InvLex => "invlex",
        };
        write!(f, "{}:{}", ws.join(","), tb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[u32]) -> Exponent {
        Exponent::new(v.to_vec())
    }

    #[test]
    fn weight_decides_first() {
        let ord = MonomialOrder::from_ints(&[1, 2]).unwrap();
        assert_eq!(ord.cmp(&e(&[3, 0]), &e(&[0, 2])), Ordering::Less);
    }

    #[test]
    fn tiebreak_directions() {
        let lex = MonomialOrder::graded(2, TieBreak::Lex);
        let inv = MonomialOrder::graded(2, TieBreak::InvLex);
        assert_eq!(lex.cmp(&e(&[1, 0]), &e(&[0, 1])), Ordering::Less);
        assert_eq!(inv.cmp(&e(&[1, 0]), &e(&[0, 1])), Ordering::Greater);
    }

    #[test]
    fn degree_breaks_weight_ties() {
        let ord = MonomialOrder::from_ints(&[1, 2]).unwrap();
        // both weigh 2
        assert_eq!(ord.cmp(&e(&[0, 1]), &e(&[2, 0])), Ordering::Less);
    }

    #[test]
    fn rejects_nonpositive_weights() {
        assert!(MonomialOrder::new(vec![Rational::from(1), Rational::new()], TieBreak::Lex).is_err());
        assert!(MonomialOrder::parse("1,-2").is_err());
    }

    #[test]
    fn parse_round_trip() {
        let ord = MonomialOrder::parse("1/2,3:invlex").unwrap();
        assert_eq!(ord.weights()[0], Rational::from((1, 2)));
        assert_eq!(ord.tiebreak(), TieBreak::InvLex);
        assert_eq!(MonomialOrder::parse(&ord.to_string()).unwrap(), ord);
    }

    #[test]
    fn key_agrees_with_cmp() {
        for spec in ["1,1:lex", "1,1:invlex", "1,2", "3/2,1,2:invlex"] {
            let ord = MonomialOrder::parse(spec).unwrap();
            let d = ord.dim();
            let pts: Vec<Exponent> = (0..27u32)
                .map(|n| e(&(0..d).map(|i| (n / 3u32.pow(i as u32)) % 3).collect::<Vec<_>>()))
                .collect();
            for x in &pts {
                for y in &pts {
                    assert_eq!(ord.cmp(x, y), ord.key(x).cmp(&ord.key(y)), "{spec} {x:?} {y:?}");
                }
            }
        }
    }

    #[test]
    fn compatible_with_addition() {
        let ord = MonomialOrder::parse("2,3,5/7").unwrap();
        let pts: Vec<Exponent> = (0..4u32)
            .flat_map(|a| (0..3u32).flat_map(move |b| (0..3u32).map(move |c| e(&[a, b, c]))))
            .collect();
        let g = e(&[1, 2, 1]);
        for x in &pts {
            for y in &pts {
                assert_eq!(ord.cmp(x, y), ord.cmp(&x.add(&g), &y.add(&g)));
            }
        }
    }
}
