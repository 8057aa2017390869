//! JSON output helpers. Every floating-point number in a report is rounded
//! to 10 significant digits so that reports compare byte for byte.

use serde::{Serialize, Serializer};

pub const SIGNIFICANT_DIGITS: usize = 10;

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap()
}

/// `serialize_with` adapter for `f64` fields.
pub fn sig<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x))
}

/// `serialize_with` adapter for `Vec<f64>` fields.
pub fn sig_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|&x| round_sig(x)))
}

/// `serialize_with` adapter for `Option<f64>` fields.
pub fn sig_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&round_sig(*v)),
        None => s.serialize_none(),
    }
}

/// `serialize_with` adapter printing a 0-based atom index 1-based.
pub fn one_based<S: Serializer>(i: &usize, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(*i as u64 + 1)
}

/// `serialize_with` adapter printing 0-based atom indices 1-based.
pub fn one_based_vec<S: Serializer>(xs: &[usize], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|&i| i + 1))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report types serialize infallibly");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_to_ten_significant_digits() {
        assert_eq!(round_sig(-1.1167143251234), -1.116714325);
        assert_eq!(round_sig(0.000123456789012345), 0.0001234567890);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(round_sig(-0.0).to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn adapters_emit_rounded_numbers() {
        #[derive(Serialize)]
        struct R {
            #[serde(serialize_with = "sig")]
            a: f64,
            #[serde(serialize_with = "sig_vec")]
            b: Vec<f64>,
        }
        let s = serde_json::to_string(&R {
            a: 1.0 / 3.0,
            b: vec![2.0 / 3.0],
        })
        .unwrap();
        assert_eq!(s, r#"{"a":0.3333333333,"b":[0.6666666667]}"#);
    }
}
