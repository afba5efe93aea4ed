//! Integer divisor classes satisfying the line-bundle Ulrich equalities
//!
//! ```text
//! D.h = (3h^2 + hK)/2,    D^2 - D.K = 2(h^2 - chi(O_S)).
//! ```
//!
//! On lattices of rank at most two the solution set is finite and found
//! exactly: the linear equation cuts out an integer line `D0 + t w`, on which
//! the quadratic becomes a univariate integer quadratic in `t`. In higher rank
//! only a bounded exhaustive search is offered.
//!
//! All results are numerical candidates; cohomological vanishing is not
//! checked.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::invariants::PolarizedSurface;
use crate::lattice::{DivisorClass, LatticeError};
use crate::ulrich::{line_numeric_check, line_quadratic_constant, ulrich_line_degree, UlrichError};

/// Default ceiling on the number of boxes visited by [`enumerate_bounded`].
pub const DEFAULT_ITERATION_CEILING: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Ulrich(#[from] UlrichError),
    #[error("exact enumeration needs rank <= 2, lattice has rank {0}")]
    RankTooHigh(usize),
    #[error("the linear form D -> D.h is identically zero")]
    DegenerateForm,
    #[error("the solution set is infinite (quadratic vanishes on the whole solution line)")]
    InfiniteSolutions,
    #[error("search box needs {iterations} iterations, ceiling is {ceiling}; shrink the bound")]
    BoxTooLarge { iterations: u128, ceiling: u128 },
    #[error("bound must be at least 1")]
    InvalidBound,
    #[error("polarization a xi + b f needs a, b >= 1, got ({a}, {b})")]
    InvalidPolarization { a: i64, b: i64 },
}

/// Right-hand side of the linear equation, or `None` when it is not an
/// integer (and the equation has no integer solutions).
fn linear_target(s: &PolarizedSurface) -> Result<Option<BigInt>, LatticeError> {
    let r = ulrich_line_degree(s)?;
    Ok(r.is_integer().then(|| r.to_integer()))
}

/// `D^2 - D.K - 2(h^2 - chi)`; zero exactly on the quadric.
fn quadratic_defect(s: &PolarizedSurface, d: &DivisorClass, constant: &BigInt) -> Result<BigInt, LatticeError> {
    Ok(s.pair(d, d)? - s.pair(d, s.canonical())? - constant)
}

/// Every integer class satisfying both equalities on a lattice of rank 1 or 2,
/// sorted lexicographically.
pub fn enumerate_rank2_exact(s: &PolarizedSurface) -> Result<Vec<DivisorClass>, EnumerateError> {
    let lattice = s.lattice();
    let rank = lattice.rank();
    if rank > 2 {
        return Err(EnumerateError::RankTooHigh(rank));
    }
    let form = lattice.linear_form(s.h())?;
    if form.iter().all(Zero::is_zero) {
        return Err(EnumerateError::DegenerateForm);
    }
    let Some(target) = linear_target(s)? else {
        return Ok(Vec::new());
    };
    let constant = line_quadratic_constant(s)?;

    let mut solutions = match rank {
        1 => {
            let (d, rem) = target.div_rem(&form[0]);
            let d = DivisorClass::new(vec![d]);
            if rem.is_zero() && quadratic_defect(s, &d, &constant)?.is_zero() {
                vec![d]
            } else {
                Vec::new()
            }
        }
        _ => solve_on_line(s, &form, &target, &constant)?,
    };
    solutions.sort();
    solutions.dedup();
    for d in &solutions {
        debug_assert!(line_numeric_check(s, d).map(|r| r.passed()).unwrap_or(false));
    }
    Ok(solutions)
}

fn solve_on_line(
    s: &PolarizedSurface,
    form: &[BigInt],
    target: &BigInt,
    constant: &BigInt,
) -> Result<Vec<DivisorClass>, EnumerateError> {
    let (alpha, beta) = (&form[0], &form[1]);
    let eg = alpha.extended_gcd(beta);
    let g = eg.gcd;
    let (scale, rem) = target.div_rem(&g);
    if !rem.is_zero() {
        return Ok(Vec::new());
    }
    // alpha x + beta y = g, so D0 = (R/g)(x, y) meets the linear equation and
    // w spans its integer kernel
    let base = DivisorClass::new(vec![&eg.x * &scale, &eg.y * &scale]);
    let step = DivisorClass::new(vec![beta / &g, -(alpha / &g)]);
    let k = s.canonical();

    let a = s.pair(&step, &step)?;
    let b: BigInt = s.pair(&base, &step)? * 2 - s.pair(&step, k)?;
    let c = quadratic_defect(s, &base, constant)?;

    let mut params = Vec::new();
    if a.is_zero() {
        if b.is_zero() {
            if c.is_zero() {
                return Err(EnumerateError::InfiniteSolutions);
            }
        } else {
            let (t, rem) = (-&c).div_rem(&b);
            if rem.is_zero() {
                params.push(t);
            }
        }
    } else {
        let disc = &b * &b - BigInt::from(4) * &a * &c;
        if !disc.is_negative() {
            let root = disc.sqrt();
            // integer coefficients: rational roots need a square discriminant
            if &root * &root == disc {
                let denom = &a * 2;
                for num in [-&b + &root, -&b - &root] {
                    let (t, rem) = num.div_rem(&denom);
                    if rem.is_zero() {
                        params.push(t);
                    }
                }
            }
        }
    }
    Ok(params.into_iter().map(|t| &base + &step.scale(&t)).collect())
}

/// The two Ulrich line bundles on `P^1 x P^1` polarized by `a xi + b f`:
/// `L = (a-1) xi + (2b-1) f` and `M = (2a-1) xi + (b-1) f`.
pub fn p1xp1_closed_form(a: i64, b: i64) -> Result<(DivisorClass, DivisorClass), EnumerateError> {
    if a < 1 || b < 1 {
        return Err(EnumerateError::InvalidPolarization { a, b });
    }
    Ok((
        DivisorClass::from_i64s(&[a - 1, 2 * b - 1]),
        DivisorClass::from_i64s(&[2 * a - 1, b - 1]),
    ))
}

/// Every solution with all coefficients in `[-bound, bound]`, sorted
/// lexicographically. Uses [`DEFAULT_ITERATION_CEILING`].
pub fn enumerate_bounded(s: &PolarizedSurface, bound: u64) -> Result<Vec<DivisorClass>, EnumerateError> {
    enumerate_bounded_with_ceiling(s, bound, DEFAULT_ITERATION_CEILING)
}

/// Exhaustive search over the box. One coordinate with a non-zero
/// coefficient in `D.h` is solved for exactly; the others are iterated.
pub fn enumerate_bounded_with_ceiling(
    s: &PolarizedSurface,
    bound: u64,
    ceiling: u128,
) -> Result<Vec<DivisorClass>, EnumerateError> {
    if bound < 1 {
        return Err(EnumerateError::InvalidBound);
    }
    let lattice = s.lattice();
    let rank = lattice.rank();
    let form = lattice.linear_form(s.h())?;
    let pivot = form
        .iter()
        .rposition(|c| !c.is_zero())
        .ok_or(EnumerateError::DegenerateForm)?;
    let side = 2 * u128::from(bound) + 1;
    let iterations = (0..rank - 1).try_fold(1u128, |acc, _| acc.checked_mul(side));
    match iterations {
        Some(n) if n <= ceiling => {}
        other => {
            return Err(EnumerateError::BoxTooLarge {
                iterations: other.unwrap_or(u128::MAX),
                ceiling,
            })
        }
    }
    let Some(target) = linear_target(s)? else {
        return Ok(Vec::new());
    };
    let constant = line_quadratic_constant(s)?;
    let bound_int = BigInt::from(bound);
    let free: Vec<usize> = (0..rank).filter(|&i| i != pivot).collect();
    let lo = -i64::try_from(bound).map_err(|_| EnumerateError::InvalidBound)?;
    let hi = -lo;
    let mut current = vec![lo; free.len()];
    let mut out = Vec::new();
    loop {
        let mut rest = target.clone();
        for (&i, &x) in free.iter().zip(&current) {
            rest -= &form[i] * x;
        }
        let (p, rem) = rest.div_rem(&form[pivot]);
        if rem.is_zero() && p.abs() <= bound_int {
            let mut coeffs = vec![BigInt::zero(); rank];
            for (&i, &x) in free.iter().zip(&current) {
                coeffs[i] = BigInt::from(x);
            }
            coeffs[pivot] = p;
            let d = DivisorClass::new(coeffs);
            if quadratic_defect(s, &d, &constant)?.is_zero() {
                out.push(d);
            }
        }
        // odometer over the free coordinates
        let mut i = 0;
        loop {
            if i == current.len() {
                out.sort();
                return Ok(out);
            }
            if current[i] < hi {
                current[i] += 1;
                break;
            }
            current[i] = lo;
            i += 1;
        }
    }
}

/// Largest absolute coefficient among the classes, or zero.
pub fn max_abs_coefficient(classes: &[DivisorClass]) -> u64 {
    classes
        .iter()
        .flat_map(|d| d.coeffs())
        .map(|c| c.abs().to_u64().unwrap_or(u64::MAX))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{HypothesisFlags, SurfaceKind};
    use crate::lattice::{blowup_p2_lattice, hirzebruch_lattice, make_lattice_i64};
    use crate::ulrich::line_dual;
    use proptest::prelude::*;

    fn class(c: &[i64]) -> DivisorClass {
        DivisorClass::from_i64s(c)
    }

    fn hirz(e: u64, a: u64, b: u64) -> PolarizedSurface {
        PolarizedSurface::new(
            "f",
            hirzebruch_lattice(e),
            class(&[a as i64, b as i64]),
            0,
            0,
            SurfaceKind::Hirzebruch { e, a, b },
            HypothesisFlags::default(),
        )
        .unwrap()
    }

    fn p2(lambda: u64) -> PolarizedSurface {
        PolarizedSurface::new(
            "p2",
            blowup_p2_lattice(0),
            class(&[lambda as i64]),
            0,
            0,
            SurfaceKind::P2 { lambda },
            HypothesisFlags::default(),
        )
        .unwrap()
    }

    /// Direct search over a box with no pruning at all.
    fn naive(s: &PolarizedSurface, bound: i64) -> Vec<DivisorClass> {
        let mut out = Vec::new();
        let rank = s.lattice().rank();
        let mut cur = vec![-bound; rank];
        loop {
            let d = class(&cur);
            if line_numeric_check(s, &d).unwrap().passed() {
                out.push(d);
            }
            let mut i = 0;
            loop {
                if i == rank {
                    out.sort();
                    return out;
                }
                if cur[i] < bound {
                    cur[i] += 1;
                    break;
                }
                cur[i] = -bound;
                i += 1;
            }
        }
    }

    #[test]
    fn plane_examples() {
        assert_eq!(enumerate_rank2_exact(&p2(1)).unwrap(), vec![class(&[0])]);
        for lambda in 2..=5 {
            assert!(
                enumerate_rank2_exact(&p2(lambda)).unwrap().is_empty(),
                "lambda = {lambda}"
            );
        }
        assert!(enumerate_bounded(&p2(2), 10).unwrap().is_empty());
    }

    #[test]
    fn f2_example_matches_hand_solution() {
        // u + v = 3 and -2u^2 + 2uv = 6 - 2v
        let s = hirz(2, 1, 3);
        let expected = vec![class(&[0, 3]), class(&[1, 2])];
        assert_eq!(enumerate_rank2_exact(&s).unwrap(), expected);
        assert_eq!(enumerate_bounded(&s, 5).unwrap(), expected);
        assert_eq!(naive(&s, 5), expected);
    }

    #[test]
    fn quadric_example() {
        let s = hirz(0, 2, 3);
        let expected = vec![class(&[1, 5]), class(&[3, 2])];
        assert_eq!(enumerate_rank2_exact(&s).unwrap(), expected);
        assert_eq!(enumerate_bounded(&s, 6).unwrap(), expected);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(p1xp1_closed_form(1, 1).unwrap(), (class(&[0, 1]), class(&[1, 0])));
        assert_eq!(p1xp1_closed_form(2, 3).unwrap(), (class(&[1, 5]), class(&[3, 2])));
        for a in 1..6 {
            let (l, m) = p1xp1_closed_form(a, a).unwrap();
            let swapped: Vec<_> = l.coeffs().iter().rev().cloned().collect();
            assert_eq!(DivisorClass::new(swapped), m);
        }
        assert!(matches!(
            p1xp1_closed_form(0, 2),
            Err(EnumerateError::InvalidPolarization { .. })
        ));
    }

    #[test]
    fn closed_form_solves_the_reduced_identities() {
        // (u+1)(v+1) = 2ab and a(v+1) + b(u+1) = 3ab
        for a in 1..10i64 {
            for b in 1..10i64 {
                let (l, m) = p1xp1_closed_form(a, b).unwrap();
                for d in [l, m] {
                    let u = d.coeffs()[0].to_i64().unwrap();
                    let v = d.coeffs()[1].to_i64().unwrap();
                    assert_eq!((u + 1) * (v + 1), 2 * a * b);
                    assert_eq!(a * (v + 1) + b * (u + 1), 3 * a * b);
                }
            }
        }
    }

    #[test]
    fn higher_rank_needs_the_bounded_search() {
        let l = blowup_p2_lattice(2);
        let s = PolarizedSurface::new(
            "x",
            l,
            class(&[3, -1, -1]),
            0,
            0,
            SurfaceKind::Abstract,
            HypothesisFlags::default(),
        )
        .unwrap();
        assert_eq!(enumerate_rank2_exact(&s).unwrap_err(), EnumerateError::RankTooHigh(3));
        let found = enumerate_bounded(&s, 4).unwrap();
        assert_eq!(found, naive(&s, 4));
        assert!(!found.is_empty());
        for d in &found {
            assert!(
                found.contains(&line_dual(&s, d).unwrap()) || max_abs_coefficient(&[line_dual(&s, d).unwrap()]) > 4
            );
        }
    }

    #[test]
    fn box_ceiling_is_enforced() {
        let l = blowup_p2_lattice(10);
        let mut h = vec![-1i64; 11];
        h[0] = 4;
        let s = PolarizedSurface::new(
            "b",
            l,
            class(&h),
            0,
            0,
            SurfaceKind::Abstract,
            HypothesisFlags::default(),
        )
        .unwrap();
        let err = enumerate_bounded(&s, 10).unwrap_err();
        assert!(matches!(err, EnumerateError::BoxTooLarge { .. }));
        assert!(enumerate_bounded_with_ceiling(&s, 1, 10).is_err());
        assert!(enumerate_bounded_with_ceiling(&s, 1, 3u128.pow(10)).is_ok());
        assert_eq!(enumerate_bounded(&p2(1), 0).unwrap_err(), EnumerateError::InvalidBound);
    }

    #[test]
    fn infinite_solution_lines_are_reported() {
        // degenerate pairing diag(2, 0), K = 3u, chi = 2: every (3, t) solves
        let l = make_lattice_i64(&[&[2, 0], &[0, 0]], &[3, 0], &["u", "v"]).unwrap();
        let s = PolarizedSurface::new(
            "x",
            l,
            class(&[1, 0]),
            1,
            0,
            SurfaceKind::Abstract,
            HypothesisFlags::default(),
        )
        .unwrap();
        assert_eq!(
            enumerate_rank2_exact(&s).unwrap_err(),
            EnumerateError::InfiniteSolutions
        );
        let boxed = enumerate_bounded(&s, 3).unwrap();
        assert_eq!(boxed, (-3..=3).map(|t| class(&[3, t])).collect::<Vec<_>>());
        assert_eq!(boxed, naive(&s, 3));
    }

    #[test]
    fn degenerate_linear_form_is_rejected() {
        let l = make_lattice_i64(&[&[0, 0], &[0, 0]], &[0, 0], &["u", "v"]).unwrap();
        // h^2 = 0 cannot be a polarization, so the form is never degenerate
        // for a valid surface; the check guards the solver contract anyway
        assert!(PolarizedSurface::new(
            "x",
            l,
            class(&[1, 0]),
            0,
            0,
            SurfaceKind::Abstract,
            HypothesisFlags::default()
        )
        .is_err());
    }

    fn hirz_strategy() -> impl Strategy<Value = PolarizedSurface> {
        (0u64..5, 1u64..4, 0u64..6).prop_map(|(e, a, extra)| hirz(e, a, a * e + 1 + extra))
    }

    proptest! {
        #[test]
        fn exact_solver_matches_naive_search(s in hirz_strategy()) {
            let exact = enumerate_rank2_exact(&s).unwrap();
            let bound = max_abs_coefficient(&exact) as i64 + 1;
            prop_assert_eq!(&exact, &naive(&s, bound.max(4)).into_iter().collect::<Vec<_>>());
            prop_assert_eq!(&exact, &enumerate_bounded(&s, bound as u64).unwrap());
            for d in &exact {
                prop_assert!(line_numeric_check(&s, d).unwrap().passed());
                prop_assert!(exact.contains(&line_dual(&s, d).unwrap()));
            }
        }
    }
}
