//! Numerical Ulrich conditions.
//!
//! A bundle `E` on `(S, h)` is Ulrich exactly when it is aCM, satisfies the
//! two equalities
//!
//! ```text
//! c1.h = rk/2 (3h^2 + hK)
//! c2   = (c1^2 - c1.K)/2 - rk (h^2 - chi(O_S))
//! ```
//!
//! and is initialized. Only the equalities are decidable from lattice data,
//! so every report here carries [`NUMERICAL_ONLY`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::invariants::{
    binomial2, chern_twist, chi_structure, derived_invariants, riemann_roch_chi, ChernData, InvariantsError,
    PolarizedSurface,
};
use crate::lattice::{DivisorClass, LatticeError};
use crate::serde_num;

pub const NUMERICAL_ONLY: &str = "numerical conditions only: aCM and h^0 vanishings are not decided from lattice data";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UlrichError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
    #[error("(5h^2 + 3hK)/2 is not an integer: 5h^2 + 3hK = {0}")]
    NonIntegralC2(BigInt),
    #[error("internal identity violated: {0}")]
    IdentityViolated(String),
}

/// Both sides of the linear and quadratic Ulrich equalities.
///
/// For a line bundle `O(D)` the quadratic clause compares `D^2` with
/// `2(h^2 - chi) + D.K`; for Chern data it compares `c2` with the value forced
/// by `c1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UlrichCheckReport {
    pub linear_ok: bool,
    pub quadratic_ok: bool,
    #[serde(serialize_with = "serde_num::rational")]
    pub required_linear: BigRational,
    #[serde(serialize_with = "serde_num::int")]
    pub actual_linear: BigInt,
    #[serde(serialize_with = "serde_num::rational")]
    pub required_c2: BigRational,
    #[serde(serialize_with = "serde_num::int")]
    pub actual_c2: BigInt,
    pub disclaimer: &'static str,
}

impl UlrichCheckReport {
    pub fn passed(&self) -> bool {
        self.linear_ok && self.quadratic_ok
    }

    fn new(required_linear: BigRational, actual_linear: BigInt, required_c2: BigRational, actual_c2: BigInt) -> Self {
        // a non-integral requirement can never equal an integer
        UlrichCheckReport {
            linear_ok: required_linear == BigRational::from_integer(actual_linear.clone()),
            quadratic_ok: required_c2 == BigRational::from_integer(actual_c2.clone()),
            required_linear,
            actual_linear,
            required_c2,
            actual_c2,
            disclaimer: NUMERICAL_ONLY,
        }
    }
}

fn half(v: BigInt) -> BigRational {
    BigRational::new(v, BigInt::from(2))
}

/// `(3h^2 + hK)/2`, the degree `D.h` of an Ulrich line bundle.
pub(crate) fn ulrich_line_degree(s: &PolarizedSurface) -> Result<BigRational, LatticeError> {
    let h2 = s.pair(s.h(), s.h())?;
    let hk = s.pair(s.h(), s.canonical())?;
    Ok(half(h2 * 3 + hk))
}

/// `2(h^2 - chi(O_S))`, the constant term of the line-bundle quadratic.
pub(crate) fn line_quadratic_constant(s: &PolarizedSurface) -> Result<BigInt, LatticeError> {
    let h2 = s.pair(s.h(), s.h())?;
    Ok((h2 - chi_structure(s.pg(), s.q())) * 2)
}

/// Checks `D^2 = 2(h^2 - chi) + D.K` and `D.h = (3h^2 + hK)/2`.
pub fn line_numeric_check(s: &PolarizedSurface, d: &DivisorClass) -> Result<UlrichCheckReport, UlrichError> {
    s.lattice().check(d)?;
    let required_linear = ulrich_line_degree(s)?;
    let actual_linear = s.pair(d, s.h())?;
    let dk = s.pair(d, s.canonical())?;
    let required_sq = line_quadratic_constant(s)? + dk;
    let actual_sq = s.pair(d, d)?;
    Ok(UlrichCheckReport::new(
        required_linear,
        actual_linear,
        BigRational::from_integer(required_sq),
        actual_sq,
    ))
}

/// Checks the rank-`r` equalities on `(rk, c1, c2)`.
pub fn rank_numeric_check(s: &PolarizedSurface, f: &ChernData) -> Result<UlrichCheckReport, UlrichError> {
    s.lattice().check(f.c1())?;
    let rank = BigInt::from(f.rank());
    let h2 = s.pair(s.h(), s.h())?;
    let hk = s.pair(s.h(), s.canonical())?;
    let required_linear = half(&rank * (&h2 * 3 + hk));
    let actual_linear = s.pair(f.c1(), s.h())?;
    let c1 = f.c1();
    let c1_adj = s.pair(c1, c1)? - s.pair(c1, s.canonical())?;
    let chi = chi_structure(s.pg(), s.q());
    let required_c2 = half(c1_adj) - BigRational::from_integer(rank * (h2 - chi));
    Ok(UlrichCheckReport::new(
        required_linear,
        actual_linear,
        required_c2,
        f.c2().clone(),
    ))
}

/// `3h + K`, the first Chern class of a special rank-2 bundle.
pub fn special_c1(s: &PolarizedSurface) -> DivisorClass {
    &(3 * s.h()) + s.canonical()
}

/// Chern data `(2, 3h + K, (5h^2 + 3hK)/2 + 2 chi)` of a special rank-2
/// Ulrich bundle.
///
/// With `p_g = q = 0` and `h` non-special such a bundle comes from a point
/// scheme `Z` of length `N + 2`, and `c2 = deg Z + 2h^2 + 2hK` is checked as
/// well.
pub fn special_rank2_chern(s: &PolarizedSurface) -> Result<ChernData, UlrichError> {
    let h2 = s.pair(s.h(), s.h())?;
    let hk = s.pair(s.h(), s.canonical())?;
    let numerator = &h2 * 5 + &hk * 3;
    let (half_value, rem) = num_integer::Integer::div_rem(&numerator, &BigInt::from(2));
    if !rem.is_zero() {
        return Err(UlrichError::NonIntegralC2(numerator));
    }
    let c2 = half_value + chi_structure(s.pg(), s.q()) * 2;
    if let Some(deg_z) = derived_invariants(s)?.deg_z {
        let via_points = deg_z + &h2 * 2 + &hk * 2;
        if via_points != c2 {
            return Err(UlrichError::IdentityViolated(format!(
                "c2 = {c2} but deg Z + 2h^2 + 2hK = {via_points}"
            )));
        }
    }
    Ok(ChernData::new(2, special_c1(s), c2)?)
}

/// Chern data of `E^∨(3h + K)`.
pub fn dual_twist(s: &PolarizedSurface, f: &ChernData) -> Result<ChernData, UlrichError> {
    s.lattice().check(f.c1())?;
    let d = special_c1(s);
    let rank = BigInt::from(f.rank());
    let d2 = s.pair(&d, &d)?;
    let c1d = s.pair(f.c1(), &d)?;
    let c1 = &d.scale(&rank) - f.c1();
    let c2 = binomial2(f.rank()) * d2 - (rank - 1) * c1d + f.c2();
    Ok(ChernData::new(f.rank(), c1, c2)?)
}

/// `3h + K - D`.
pub fn line_dual(s: &PolarizedSurface, d: &DivisorClass) -> Result<DivisorClass, UlrichError> {
    s.lattice().check(d)?;
    Ok(&special_c1(s) - d)
}

/// `chi(F(-h)) = chi(F(-2h)) = 0`.
pub fn chi_vanishing_check(s: &PolarizedSurface, f: &ChernData) -> Result<bool, UlrichError> {
    for t in [-1, -2] {
        let twisted = chern_twist(s, f, &BigInt::from(t))?;
        if !riemann_roch_chi(s, &twisted)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rank-one Chern data `(1, D, 0)` of a line bundle.
pub fn line_bundle(d: DivisorClass) -> ChernData {
    ChernData::new(1, d, BigInt::zero()).expect("rank one is positive")
}
