//! JSON series specifications.
//!
//! ```json
//! {"schema": 1, "p": 3, "prec": 62, "coeffs": [[5, 1], [6, 2]]}
//! {"p": 3, "prec": 30, "coeffs": [[5, "t"], [6, "t^2"]], "valued": true}
//! ```
//!
//! `coeffs` lists `(degree, coefficient)` pairs of `f(z) - z`. Integer
//! coefficients are reduced mod `p`; with `"valued": true` each coefficient
//! is a polynomial in `t` and the result is a [`ValuedPoly`].

use serde::{Deserialize, Serialize};

use crate::coeff::{Fp, FpUniPoly, Prime, RationalFunction};
use crate::error::{Error, Result};
use crate::newton::ValuedPoly;
use crate::wild::WildSeries;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffValue {
    Int(i64),
    Poly(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpec {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub p: u64,
    pub prec: usize,
    pub coeffs: Vec<(usize, CoeffValue)>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub valued: bool,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone)]
pub enum ParsedSeries {
    Wild(WildSeries<Fp>),
    Valued(ValuedPoly),
}

fn parse_error(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::ParseError {
        field: field.into(),
        message: message.into(),
    }
}

impl SeriesSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| parse_error("<document>", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    /// The spec of a series over `F_p`, listing its nonzero coefficients.
    pub fn from_wild(f: &WildSeries<Fp>) -> Self {
        let p = f.characteristic() as u64;
        let coeffs = (2..=f.prec())
            .filter_map(|d| {
                let c = f.coeff(d)?;
                (c.value() != 0).then(|| (d, CoeffValue::Int(c.value() as i64)))
            })
            .collect();
        SeriesSpec {
            schema: SCHEMA_VERSION,
            p,
            prec: f.prec(),
            coeffs,
            valued: false,
        }
    }

    /// The spec of a valued polynomial; `prec` is its degree.
    pub fn from_valued(f: &ValuedPoly) -> Self {
        let coeffs = f
            .coeffs()
            .iter()
            .enumerate()
            .skip(2)
            .filter(|(_, c)| c.valuation().is_some())
            .map(|(d, c)| (d, CoeffValue::Poly(c.to_string())))
            .collect();
        SeriesSpec {
            schema: SCHEMA_VERSION,
            p: f.prime().get() as u64,
            prec: f.degree(),
            coeffs,
            valued: true,
        }
    }

    fn validate(&self) -> Result<Prime> {
        if self.schema != SCHEMA_VERSION {
            return Err(parse_error(
                "schema",
                format!("unsupported schema {} (expected {SCHEMA_VERSION})", self.schema),
            ));
        }
        let p = Prime::new(self.p).map_err(|e| parse_error("p", e.to_string()))?;
        if self.prec < 1 {
            return Err(parse_error("prec", "precision must be at least 1"));
        }
        let mut last = 1usize;
        for (i, &(d, _)) in self.coeffs.iter().enumerate() {
            if d < 2 {
                return Err(Error::InvariantViolation(format!(
                    "coeffs[{i}]: degree {d} is below 2"
                )));
            }
            if d == last {
                return Err(Error::InvariantViolation(format!("coeffs[{i}]: duplicate degree {d}")));
            }
            if d < last {
                return Err(Error::InvariantViolation(format!(
                    "coeffs[{i}]: degree {d} follows {last}; degrees must increase"
                )));
            }
            if d > self.prec && !self.valued {
                return Err(Error::InvariantViolation(format!(
                    "coeffs[{i}]: degree {d} exceeds precision {}",
                    self.prec
                )));
            }
            last = d;
        }
        Ok(p)
    }

    pub fn parse(&self) -> Result<ParsedSeries> {
        let p = self.validate()?;
        if self.valued {
            self.parse_valued(p).map(ParsedSeries::Valued)
        } else {
            self.parse_wild(p).map(ParsedSeries::Wild)
        }
    }

    fn parse_wild(&self, p: Prime) -> Result<WildSeries<Fp>> {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, (d, c))| {
                let value = match c {
                    CoeffValue::Int(v) => Fp::from_i64(*v, p),
                    CoeffValue::Poly(s) => FpUniPoly::parse(s, p)
                        .map_err(|e| parse_error(format!("coeffs[{i}][1]"), e.to_string()))?
                        .as_constant()
                        .ok_or_else(|| {
                            parse_error(
                                format!("coeffs[{i}][1]"),
                                format!("{s:?} depends on t; set \"valued\": true"),
                            )
                        })?,
                };
                Ok((*d, value))
            })
            .collect::<Result<Vec<_>>>()?;
        WildSeries::from_terms(&Fp::zero(p), self.prec, terms)
    }

    fn parse_valued(&self, p: Prime) -> Result<ValuedPoly> {
        let top = self.coeffs.last().map_or(1, |&(d, _)| d);
        let mut coeffs = vec![RationalFunction::from_poly(FpUniPoly::zero(p)); top + 1];
        coeffs[1] = RationalFunction::from_poly(FpUniPoly::one(p));
        for (i, (d, c)) in self.coeffs.iter().enumerate() {
            let poly = match c {
                CoeffValue::Int(v) => FpUniPoly::constant(Fp::from_i64(*v, p)),
                CoeffValue::Poly(s) => {
                    FpUniPoly::parse(s, p).map_err(|e| parse_error(format!("coeffs[{i}][1]"), e.to_string()))?
                }
            };
            coeffs[*d] = RationalFunction::from_poly(poly);
        }
        ValuedPoly::new(coeffs)
    }
}

/// Parse a JSON series specification.
pub fn parse_series_spec(text: &str) -> Result<ParsedSeries> {
    SeriesSpec::from_json(text)?.parse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wild::multiplicity;
    use crate::series::Order;

    #[test]
    fn wild_example() {
        let parsed = parse_series_spec(r#"{"p":3,"prec":62,"coeffs":[[5,1],[6,2]]}"#).unwrap();
        let ParsedSeries::Wild(f) = parsed else { panic!("expected a wild series") };
        assert_eq!(f.prec(), 62);
        assert_eq!(f.q(), Some(4));
        assert_eq!(multiplicity(&f), Order::Finite(5));
        assert_eq!(f.coeff(6).unwrap().value(), 2);
    }

    #[test]
    fn valued_example() {
        let parsed =
            parse_series_spec(r#"{"p":3,"prec":30,"coeffs":[[5,"t"],[6,"t^2"]],"valued":true}"#).unwrap();
        let ParsedSeries::Valued(f) = parsed else { panic!("expected a valued polynomial") };
        assert_eq!(f.degree(), 6);
        assert_eq!(f.valuation(5), Some(1));
        assert_eq!(f.valuation(6), Some(2));
    }

    #[test]
    fn rejects_composite_prime() {
        let err = parse_series_spec(r#"{"p":4,"prec":10,"coeffs":[[3,1]]}"#).unwrap_err();
        assert!(matches!(err, Error::ParseError { ref field, .. } if field == "p"), "{err}");
    }

    #[test]
    fn reduces_values() {
        let ParsedSeries::Wild(f) = parse_series_spec(r#"{"p":5,"prec":8,"coeffs":[[3,-1],[4,12]]}"#).unwrap()
        else {
            panic!()
        };
        assert_eq!(f.coeff(3).unwrap().value(), 4);
        assert_eq!(f.coeff(4).unwrap().value(), 2);
    }

    #[test]
    fn degree_invariants() {
        for bad in [
            r#"{"p":3,"prec":10,"coeffs":[[3,1],[3,2]]}"#,
            r#"{"p":3,"prec":10,"coeffs":[[4,1],[3,2]]}"#,
            r#"{"p":3,"prec":10,"coeffs":[[1,1]]}"#,
            r#"{"p":3,"prec":10,"coeffs":[[11,1]]}"#,
        ] {
            assert!(matches!(parse_series_spec(bad), Err(Error::InvariantViolation(_))), "{bad}");
        }
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_series_spec("{\"p\":3,\n\"prec\":\"x\"}").unwrap_err();
        let Error::ParseError { message, .. } = err else { panic!() };
        assert!(message.contains("line 2"), "{message}");
    }

    #[test]
    fn t_dependent_coefficient_needs_valued() {
        let err = parse_series_spec(r#"{"p":3,"prec":10,"coeffs":[[3,"1+t"]]}"#).unwrap_err();
        assert!(matches!(err, Error::ParseError { ref field, .. } if field == "coeffs[0][1]"));
    }

    #[test]
    fn round_trip() {
        let text = r#"{"p":7,"prec":20,"coeffs":[[4,3],[9,6]]}"#;
        let spec = SeriesSpec::from_json(text).unwrap();
        let ParsedSeries::Wild(f) = spec.parse().unwrap() else { panic!() };
        assert_eq!(SeriesSpec::from_wild(&f), spec);
        let again = SeriesSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(again, spec);
    }
}
