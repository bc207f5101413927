//! Field strings, modulus strings, and construction dispatch.

use std::fmt;

use geomcode_core::constructions::ConstructionError;
use geomcode_core::field::FieldError;
use geomcode_core::{build_conic_structure, build_hyperbolic_structure, FieldSpec, IncidenceStructure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputError {
    BadFieldString(String),
    NotPrimePower(u64),
    BadModulus(String),
    Field(FieldError),
    Construction(ConstructionError),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::BadFieldString(s) => write!(f, "bad field '{}', expected p^k or a prime power", s),
            InputError::NotPrimePower(q) => write!(f, "{} is not a prime power", q),
            InputError::BadModulus(s) => {
                write!(f, "bad modulus '{}', expected comma-separated coefficients, constant term first", s)
            }
            InputError::Field(e) => write!(f, "{}", e),
            InputError::Construction(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for InputError {}

impl From<FieldError> for InputError {
    fn from(e: FieldError) -> Self {
        InputError::Field(e)
    }
}

impl From<ConstructionError> for InputError {
    fn from(e: ConstructionError) -> Self {
        InputError::Construction(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FamilyArg {
    Conic,
    Hyperbolic,
}

impl fmt::Display for FamilyArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyArg::Conic => "conic",
            FamilyArg::Hyperbolic => "hyperbolic",
        })
    }
}

/// Splits `q` into `(p, k)` with `q = p^k`, `p` prime.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..).take_while(|d| d * d <= q).find(|d| q % d == 0).unwrap_or(q);
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then(|| (p as u32, k))
}

/// Parses `"p^k"` or `"q"`.
pub fn parse_field_string(s: &str) -> Result<(u32, u32), InputError> {
    let bad = || InputError::BadFieldString(s.to_string());
    match s.trim().split_once('^') {
        Some((p, k)) => {
            let p: u32 = p.trim().parse().map_err(|_| bad())?;
            let k: u32 = k.trim().parse().map_err(|_| bad())?;
            Ok((p, k))
        }
        None => {
            let q: u64 = s.trim().parse().map_err(|_| bad())?;
            prime_power(q).ok_or(InputError::NotPrimePower(q))
        }
    }
}

pub fn parse_modulus(s: &str) -> Result<Vec<u32>, InputError> {
    s.split(',')
        .map(|c| c.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| InputError::BadModulus(s.to_string()))
}

pub fn parse_field(s: &str, modulus: Option<&str>) -> Result<FieldSpec, InputError> {
    let (p, k) = parse_field_string(s)?;
    let modulus = modulus.map(parse_modulus).transpose()?;
    Ok(FieldSpec::new(p, k, modulus.as_deref())?)
}

pub fn build_structure(family: FamilyArg, gf: &FieldSpec) -> Result<IncidenceStructure, InputError> {
    Ok(match family {
        FamilyArg::Conic => build_conic_structure(gf)?,
        FamilyArg::Hyperbolic => build_hyperbolic_structure(gf)?,
    })
}
