//! Picard lattices: a free abelian group with an integral symmetric pairing
//! and a distinguished canonical class.
//!
//! Every lattice built here satisfies the adjunction parity condition
//! `b^2 + b.K ≡ 0 (mod 2)` on each basis vector. That is enough for every
//! class: the map `D ↦ D^2 + D.K (mod 2)` is additive, because
//! `(D+E)^2 + (D+E).K = (D^2 + D.K) + (E^2 + E.K) + 2 D.E`, and
//! `(nD)^2 + nD.K ≡ n (D^2 + D.K)` since `n^2 ≡ n (mod 2)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice must have positive rank")]
    EmptyLattice,
    #[error("{what}: expected length {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("gram matrix is not symmetric at ({row}, {col})")]
    AsymmetricGram { row: usize, col: usize },
    #[error("basis class `{label}` has odd b^2 + b.K = {value}")]
    ParityViolation { index: usize, label: String, value: BigInt },
}

/// Integer coordinates of a divisor class in a lattice basis.
///
/// The derived ordering is lexicographic on the coefficient vector, which is
/// the ordering used for every enumeration result.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    coeffs: Vec<BigInt>,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        DivisorClass { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        DivisorClass {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass {
            coeffs: vec![BigInt::zero(); rank],
        }
    }

    /// The `index`-th basis vector.
    pub fn basis(rank: usize, index: usize) -> Self {
        let mut d = Self::zero(rank);
        d.coeffs[index] = BigInt::one();
        d
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &BigInt) -> DivisorClass {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    fn zip_with(&self, other: &DivisorClass, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        assert_eq!(
            self.rank(),
            other.rank(),
            "divisor classes from lattices of different rank"
        );
        DivisorClass {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

// Arithmetic panics on rank mismatch; lattice-level entry points check ranks
// and report `DimensionMismatch` before any arithmetic happens.
impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&DivisorClass> for &BigInt {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(&BigInt::from(self))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        crate::serde_num::int_slice(&self.coeffs, serializer)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionLattice {
    gram: Vec<Vec<BigInt>>,
    canonical: DivisorClass,
    labels: Vec<String>,
}

/// Validates and builds a lattice from its Gram matrix, canonical class and
/// basis labels.
pub fn make_lattice(
    gram: Vec<Vec<BigInt>>,
    canonical: Vec<BigInt>,
    labels: Vec<String>,
) -> Result<IntersectionLattice, LatticeError> {
    let rank = gram.len();
    if rank == 0 {
        return Err(LatticeError::EmptyLattice);
    }
    for row in &gram {
        if row.len() != rank {
            return Err(LatticeError::DimensionMismatch {
                what: "gram row",
                expected: rank,
                found: row.len(),
            });
        }
    }
    if canonical.len() != rank {
        return Err(LatticeError::DimensionMismatch {
            what: "canonical class",
            expected: rank,
            found: canonical.len(),
        });
    }
    if labels.len() != rank {
        return Err(LatticeError::DimensionMismatch {
            what: "basis labels",
            expected: rank,
            found: labels.len(),
        });
    }
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate().skip(i + 1) {
            if *v != gram[j][i] {
                return Err(LatticeError::AsymmetricGram { row: i, col: j });
            }
        }
    }
    let lattice = IntersectionLattice {
        gram,
        canonical: DivisorClass::new(canonical),
        labels,
    };
    for i in 0..rank {
        let b = DivisorClass::basis(rank, i);
        let value = &lattice.gram[i][i] + lattice.pair_unchecked(&b, &lattice.canonical);
        if value.is_odd() {
            return Err(LatticeError::ParityViolation {
                index: i,
                label: lattice.labels[i].clone(),
                value,
            });
        }
    }
    Ok(lattice)
}

/// Convenience wrapper around [`make_lattice`] for small literal data.
pub fn make_lattice_i64(
    gram: &[&[i64]],
    canonical: &[i64],
    labels: &[&str],
) -> Result<IntersectionLattice, LatticeError> {
    make_lattice(
        gram.iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
        canonical.iter().map(|&x| BigInt::from(x)).collect(),
        labels.iter().map(|s| s.to_string()).collect(),
    )
}

/// The Hirzebruch surface `F_e` with basis `(xi, f)`: `xi^2 = -e`, `xi.f = 1`,
/// `f^2 = 0`, `K = -2 xi - (e+2) f`.
pub fn hirzebruch_lattice(e: u64) -> IntersectionLattice {
    let e = BigInt::from(e);
    IntersectionLattice {
        gram: vec![vec![-e.clone(), BigInt::one()], vec![BigInt::one(), BigInt::zero()]],
        canonical: DivisorClass::new(vec![BigInt::from(-2), -(e + 2u32)]),
        labels: vec!["xi".into(), "f".into()],
    }
}

/// The blow-up of the plane at `m` points: basis `(l, e1, ..., em)` with
/// `diag(1, -1, ..., -1)` and `K = -3l + e1 + ... + em`.
pub fn blowup_p2_lattice(m: usize) -> IntersectionLattice {
    let labels = std::iter::once("l".to_string())
        .chain((1..=m).map(|i| format!("e{i}")))
        .collect();
    blowup_p2_lattice_labeled(labels)
}

/// Same lattice as [`blowup_p2_lattice`] with caller-chosen labels; the
/// first label names the line class.
pub(crate) fn blowup_p2_lattice_labeled(labels: Vec<String>) -> IntersectionLattice {
    let rank = labels.len();
    let gram = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| match (i, j) {
                    (0, 0) => BigInt::one(),
                    _ if i == j => -BigInt::one(),
                    _ => BigInt::zero(),
                })
                .collect()
        })
        .collect();
    let canonical = (0..rank)
        .map(|i| if i == 0 { BigInt::from(-3) } else { BigInt::one() })
        .collect();
    IntersectionLattice {
        gram,
        canonical: DivisorClass::new(canonical),
        labels,
    }
}

impl IntersectionLattice {
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn check(&self, d: &DivisorClass) -> Result<(), LatticeError> {
        if d.rank() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                what: "divisor class",
                expected: self.rank(),
                found: d.rank(),
            });
        }
        Ok(())
    }

    /// `D^T G E`.
    pub fn pair(&self, d: &DivisorClass, e: &DivisorClass) -> Result<BigInt, LatticeError> {
        self.check(d)?;
        self.check(e)?;
        Ok(self.pair_unchecked(d, e))
    }

    pub fn square(&self, d: &DivisorClass) -> Result<BigInt, LatticeError> {
        self.pair(d, d)
    }

    pub fn k_squared(&self) -> BigInt {
        self.pair_unchecked(&self.canonical, &self.canonical)
    }

    /// Coefficients of the linear form `X ↦ D.X`, i.e. `G D`.
    pub fn linear_form(&self, d: &DivisorClass) -> Result<Vec<BigInt>, LatticeError> {
        self.check(d)?;
        Ok(self
            .gram
            .iter()
            .map(|row| row.iter().zip(d.coeffs()).map(|(g, c)| g * c).sum())
            .collect())
    }

    pub(crate) fn pair_unchecked(&self, d: &DivisorClass, e: &DivisorClass) -> BigInt {
        let mut total = BigInt::zero();
        for (row, dc) in self.gram.iter().zip(d.coeffs()) {
            if dc.is_zero() {
                continue;
            }
            let row_dot: BigInt = row.iter().zip(e.coeffs()).map(|(g, c)| g * c).sum();
            total += dc * row_dot;
        }
        total
    }

    /// Renders a class in terms of the basis labels, e.g. `4l - e1 - e2`.
    pub fn format_class(&self, d: &DivisorClass) -> String {
        let mut out = String::new();
        for (c, label) in d.coeffs().iter().zip(&self.labels) {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if !magnitude.is_one() {
                out.push_str(&magnitude.to_string());
            }
            out.push_str(label);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}
