use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::polyarith::{int_roots, IntPolynomial, RootConfig, RootSet};
use crate::potential::CompactSetModel;

/// An algebraic number, represented by its integer minimal polynomial
/// and the full set of conjugates.
///
/// Irreducibility is not checked: heights are evaluated formally from
/// the given polynomial.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    minpoly: IntPolynomial,
    conjugates: RootSet,
    warnings: Vec<String>,
}

impl AlgebraicNumber {
    /// Normalizes to content 1 and positive leading coefficient.
    pub fn from_minpoly(p: &IntPolynomial) -> Result<Self> {
        let d = p.degree().ok_or(Error::ZeroPolynomial)?;
        if d == 0 {
            return Err(Error::DegreeTooSmall { got: 0, min: 1 });
        }
        let mut warnings = Vec::new();
        if !p.content().is_one() {
            warnings.push(format!(
                "content {} divided out of the minimal polynomial",
                p.content()
            ));
        }
        let minpoly = p.primitive_part();
        if !minpoly.is_monic() {
            warnings.push(format!(
                "minimal polynomial has leading coefficient {}; not an algebraic integer",
                minpoly.coeff(d)
            ));
        }
        let conjugates = if d == 1 {
            let x = BigRational::new(-minpoly.coeff(0), minpoly.coeff(1));
            RootSet {
                roots: vec![Complex64::new(x.to_f64().unwrap_or(f64::NAN), 0.0)],
                residual_bound: 0.0,
            }
        } else {
            int_roots(&minpoly, &RootConfig::default())?
        };
        Ok(AlgebraicNumber {
            minpoly,
            conjugates,
            warnings,
        })
    }

    /// The rational `x`, with minimal polynomial `q z - p`.
    pub fn rational(x: &BigRational) -> Self {
        let p = IntPolynomial::new(vec![-x.numer().clone(), x.denom().clone()]);
        Self::from_minpoly(&p).expect("degree one")
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn conjugates(&self) -> &RootSet {
        &self.conjugates
    }

    pub fn degree(&self) -> usize {
        self.conjugates.len()
    }

    /// Positive leading coefficient of the minimal polynomial.
    pub fn leading(&self) -> BigInt {
        self.minpoly.coeff(self.degree())
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        (self.degree() == 1)
            .then(|| BigRational::new(-self.minpoly.coeff(0), self.minpoly.coeff(1)))
    }

    /// `max_j dist(α_j, Pc(E))`.
    pub fn conjugate_distance(&self, e: &CompactSetModel) -> f64 {
        self.conjugates
            .roots
            .iter()
            .map(|&z| e.distance_to_hull(z))
            .fold(0.0, f64::max)
    }
}

impl From<BigRational> for AlgebraicNumber {
    fn from(x: BigRational) -> Self {
        Self::rational(&x)
    }
}

impl From<&BigRational> for AlgebraicNumber {
    fn from(x: &BigRational) -> Self {
        Self::rational(x)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(x) if x.denom().is_one() => write!(f, "{}", x.numer()),
            Some(x) => write!(f, "{}/{}", x.numer(), x.denom()),
            None => write!(f, "root of [{}]", self.minpoly),
        }
    }
}
