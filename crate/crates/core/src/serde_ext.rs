//! Serde helpers: complex numbers as `[re, im]` pairs and non-finite floats as tags.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub mod complex_pair {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Tagged {
    Num(f64),
    Tag(String),
}

fn to_tagged(x: f64) -> Tagged {
    if x.is_nan() {
        Tagged::Tag("nan".into())
    } else if x == f64::INFINITY {
        Tagged::Tag("inf".into())
    } else if x == f64::NEG_INFINITY {
        Tagged::Tag("-inf".into())
    } else {
        Tagged::Num(x)
    }
}

fn from_tagged<E: serde::de::Error>(t: Tagged) -> Result<f64, E> {
    match t {
        Tagged::Num(x) => Ok(x),
        Tagged::Tag(s) => match s.as_str() {
            "nan" => Ok(f64::NAN),
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            other => Err(E::custom(format!("unknown float tag {other:?}"))),
        },
    }
}

/// `f64` that writes infinities as `"inf"` / `"-inf"` and NaN as `"nan"`.
pub mod tagged_f64 {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        to_tagged(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_tagged(Tagged::deserialize(d)?)
    }
}

pub mod tagged_opt_f64 {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        x.map(to_tagged).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<Tagged>::deserialize(d)?
            .map(from_tagged::<D::Error>)
            .transpose()
    }
}
