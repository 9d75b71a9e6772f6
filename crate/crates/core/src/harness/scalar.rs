use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::JordanError;

/// Scalar functions whose perspectives give the primed bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarBoundFamily {
    RDelta,
    SDelta,
    Q,
    JDelta,
    KDelta,
}

impl ScalarBoundFamily {
    pub const ALL: [ScalarBoundFamily; 5] = [
        ScalarBoundFamily::RDelta,
        ScalarBoundFamily::SDelta,
        ScalarBoundFamily::Q,
        ScalarBoundFamily::JDelta,
        ScalarBoundFamily::KDelta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScalarBoundFamily::RDelta => "r_delta",
            ScalarBoundFamily::SDelta => "s_delta",
            ScalarBoundFamily::Q => "q",
            ScalarBoundFamily::JDelta => "j_delta",
            ScalarBoundFamily::KDelta => "k_delta",
        }
    }
}

impl fmt::Display for ScalarBoundFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScalarBoundFamily {
    type Err = JordanError;

    fn from_str(s: &str) -> Result<Self, JordanError> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| JordanError::UnknownId(s.to_string()))
    }
}

/// Evaluates the family member at `x > 0`.
pub fn scalar_bound_eval(family: ScalarBoundFamily, x: f64, alpha: f64, delta: f64) -> f64 {
    let xa = x.powf(alpha);
    let ld = delta.ln();
    let sd = delta.sqrt();
    match family {
        ScalarBoundFamily::RDelta => (ld + 2.0 * (1.0 - 2.0 * delta / (x + delta))) * xa,
        ScalarBoundFamily::SDelta => (ld + 4.0 - 8.0 * sd / (x.sqrt() + sd)) * xa,
        ScalarBoundFamily::Q => xa * x.ln(),
        ScalarBoundFamily::JDelta => x.powf(alpha + 0.5) / sd - x.powf(alpha - 0.5) * sd + xa * ld,
        ScalarBoundFamily::KDelta => {
            x.powf(alpha + 1.0) / (2.0 * delta) - x.powf(alpha - 1.0) * delta / 2.0 + xa * ld
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanish_at_one() {
        for f in ScalarBoundFamily::ALL {
            for alpha in [0.0, 0.5, 2.0] {
                assert!(scalar_bound_eval(f, 1.0, alpha, 1.0).abs() < 1e-15, "{f}");
            }
        }
    }

    #[test]
    fn values_at_two() {
        let v: Vec<f64> = ScalarBoundFamily::ALL
            .iter()
            .map(|&f| scalar_bound_eval(f, 2.0, 0.0, 1.0))
            .collect();
        let expected = [
            2.0 / 3.0,
            4.0 - 8.0 / (2f64.sqrt() + 1.0),
            2f64.ln(),
            2f64.sqrt() - 1.0 / 2f64.sqrt(),
            0.75,
        ];
        for (got, want) in v.iter().zip(expected) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
        assert!((v[1] - 0.6863).abs() < 1e-4);
    }

    #[test]
    fn names_round_trip() {
        for f in ScalarBoundFamily::ALL {
            assert_eq!(f.name().parse::<ScalarBoundFamily>().unwrap(), f);
        }
        assert!("p".parse::<ScalarBoundFamily>().is_err());
    }
}
