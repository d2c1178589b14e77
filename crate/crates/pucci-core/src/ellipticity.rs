use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Ellipticity bounds `0 < lambda1 <= lambda2` shared by every operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ellipticity {
    l1: f64,
    l2: f64,
}

impl Ellipticity {
    pub fn new(lambda1: f64, lambda2: f64) -> Result<Self, Error> {
        if !(lambda1 > 0.0 && lambda2 >= lambda1 && lambda2.is_finite()) {
            return Err(Error::BadEllipticity(lambda1, lambda2));
        }
        Ok(Self {
            l1: lambda1,
            l2: lambda2,
        })
    }

    pub fn lambda1(&self) -> f64 {
        self.l1
    }

    pub fn lambda2(&self) -> f64 {
        self.l2
    }

    /// True when the two bounds coincide (the operator degenerates to a
    /// multiple of the Laplacian).
    pub fn is_isotropic(&self) -> bool {
        self.l1 == self.l2
    }
}

#[derive(Serialize, Deserialize)]
struct EllipticityRepr {
    lambda1: f64,
    lambda2: f64,
}

impl Serialize for Ellipticity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EllipticityRepr {
            lambda1: self.l1,
            lambda2: self.l2,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ellipticity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = EllipticityRepr::deserialize(d)?;
        Ellipticity::new(raw.lambda1, raw.lambda2).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_enforces_ordering() {
        assert!(Ellipticity::new(1.0, 2.0).is_ok());
        assert!(Ellipticity::new(1.0, 1.0).is_ok());
        assert!(Ellipticity::new(2.0, 1.0).is_err());
        assert!(Ellipticity::new(0.0, 1.0).is_err());
        assert!(Ellipticity::new(-1.0, 1.0).is_err());
        assert!(Ellipticity::new(1.0, f64::INFINITY).is_err());
        assert!(Ellipticity::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let ell = Ellipticity::new(0.5, 3.0).unwrap();
        let text = serde_json::to_string(&ell).unwrap();
        let back: Ellipticity = serde_json::from_str(&text).unwrap();
        assert_eq!(ell, back);
        assert!(serde_json::from_str::<Ellipticity>(r#"{"lambda1":2,"lambda2":1}"#).is_err());
    }
}
