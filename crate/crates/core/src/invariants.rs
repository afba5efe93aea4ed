//! Numerical invariants of a polarized surface: holomorphic Euler
//! characteristic, Riemann–Roch for bundles given by Chern data, sectional
//! genus, embedding dimension and the elementary degree inequalities that a
//! non-special embedding must satisfy.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{blowup_p2_lattice, hirzebruch_lattice, DivisorClass, IntersectionLattice, LatticeError};
use crate::serde_num;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("polarization must have positive self-intersection, got h^2 = {0}")]
    NonPositiveDegree(BigInt),
    #[error("h^2 + h.K = {0} is odd, sectional genus is not an integer")]
    NonIntegralGenus(BigInt),
    #[error("c1.(c1 - K) = {0} is odd, Euler characteristic is not an integer")]
    NonIntegralChi(BigInt),
    #[error("missing hypothesis: {0}")]
    MissingHypothesis(&'static str),
    #[error("bundle rank must be positive")]
    ZeroRank,
    #[error("{field}: {reason}")]
    KindMismatch { field: &'static str, reason: String },
}

/// An asserted hypothesis: established, refuted, or not known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    True,
    False,
    #[default]
    Unknown,
}

impl TriState {
    pub fn is_true(self) -> bool {
        self == TriState::True
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TriState::True => "true",
            TriState::False => "false",
            TriState::Unknown => "unknown",
        }
    }

    /// Replaces `Unknown` with `derived`; explicit values win.
    fn or_derive(self, derived: Option<TriState>) -> TriState {
        match (self, derived) {
            (TriState::Unknown, Some(d)) => d,
            (s, _) => s,
        }
    }
}

impl From<bool> for TriState {
    fn from(b: bool) -> Self {
        if b {
            TriState::True
        } else {
            TriState::False
        }
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TriState {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "true" => Ok(TriState::True),
            "false" => Ok(TriState::False),
            "unknown" => Ok(TriState::Unknown),
            other => Err(format!("expected true, false or unknown, got `{other}`")),
        }
    }
}

/// Which family a surface belongs to. The family decides which cohomological
/// hypotheses can be filled in without being asserted, and settles the
/// stability question for surfaces of minimal degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    /// The plane polarized by `O(lambda)`.
    P2 {
        lambda: u64,
    },
    /// `F_e` polarized by `a xi + b f`.
    Hirzebruch {
        e: u64,
        a: u64,
        b: u64,
    },
    /// A blow-up of the plane in the `(l, e1, ...)` basis.
    BlowupP2 {
        anticanonical: bool,
    },
    Enriques,
    Abstract,
}

impl SurfaceKind {
    /// Rational surfaces with an effective anticanonical divisor.
    pub fn is_anticanonical_rational(self) -> bool {
        matches!(
            self,
            SurfaceKind::P2 { .. } | SurfaceKind::Hirzebruch { .. } | SurfaceKind::BlowupP2 { anticanonical: true }
        )
    }
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceKind::P2 { lambda } => write!(f, "p2(lambda={lambda})"),
            SurfaceKind::Hirzebruch { e, a, b } => write!(f, "hirzebruch(e={e},a={a},b={b})"),
            SurfaceKind::BlowupP2 { anticanonical } => write!(f, "blowup_p2(anticanonical={anticanonical})"),
            SurfaceKind::Enriques => f.write_str("enriques"),
            SurfaceKind::Abstract => f.write_str("abstract"),
        }
    }
}

impl FromStr for SurfaceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, params) = match s.find('(') {
            Some(open) => {
                let inner = s[open + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| format!("unbalanced parameter list in `{s}`"))?;
                (&s[..open], parse_params(inner)?)
            }
            None => (s, Vec::new()),
        };
        let get = |key: &str| -> Result<&str, String> {
            params
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| format!("`{head}` requires parameter `{key}`"))
        };
        let num = |key: &str| -> Result<u64, String> {
            get(key)?.parse::<u64>().map_err(|e| format!("parameter `{key}`: {e}"))
        };
        let expect_keys = |keys: &[&str]| -> Result<(), String> {
            match params.iter().find(|(k, _)| !keys.contains(k)) {
                Some((k, _)) => Err(format!("unexpected parameter `{k}` for `{head}`")),
                None => Ok(()),
            }
        };
        match head {
            "p2" => {
                expect_keys(&["lambda"])?;
                Ok(SurfaceKind::P2 { lambda: num("lambda")? })
            }
            "hirzebruch" => {
                expect_keys(&["e", "a", "b"])?;
                Ok(SurfaceKind::Hirzebruch {
                    e: num("e")?,
                    a: num("a")?,
                    b: num("b")?,
                })
            }
            "blowup_p2" => {
                expect_keys(&["anticanonical"])?;
                let anticanonical = if params.is_empty() {
                    false
                } else {
                    get("anticanonical")?
                        .parse::<bool>()
                        .map_err(|e| format!("parameter `anticanonical`: {e}"))?
                };
                Ok(SurfaceKind::BlowupP2 { anticanonical })
            }
            "enriques" | "abstract" => {
                expect_keys(&[])?;
                Ok(if head == "enriques" {
                    SurfaceKind::Enriques
                } else {
                    SurfaceKind::Abstract
                })
            }
            other => Err(format!("unknown surface kind `{other}`")),
        }
    }
}

fn parse_params(inner: &str) -> Result<Vec<(&str, &str)>, String> {
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{kv}`"))?;
            Ok((k.trim(), v.trim()))
        })
        .collect()
}

/// Cohomological hypotheses that cannot be computed from lattice data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisFlags {
    #[serde(default)]
    pub very_ample: TriState,
    /// `h^1(O_S(h)) = 0`.
    #[serde(default)]
    pub non_special: TriState,
    #[serde(default, rename = "h0_2K_minus_h_zero")]
    pub h0_2k_minus_h_zero: TriState,
    #[serde(default, rename = "h0_h_minus_K_zero")]
    pub h0_h_minus_k_zero: TriState,
}

impl HypothesisFlags {
    pub fn all_unknown() -> Self {
        Self::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarizedSurface {
    name: String,
    lattice: IntersectionLattice,
    h: DivisorClass,
    pg: u64,
    q: u64,
    kind: SurfaceKind,
    flags: HypothesisFlags,
    provenance: String,
}

impl PolarizedSurface {
    pub fn new(
        name: impl Into<String>,
        lattice: IntersectionLattice,
        h: DivisorClass,
        pg: u64,
        q: u64,
        kind: SurfaceKind,
        flags: HypothesisFlags,
    ) -> Result<Self, InvariantsError> {
        lattice.check(&h)?;
        let h2 = lattice.square(&h)?;
        if !h2.is_positive() {
            return Err(InvariantsError::NonPositiveDegree(h2));
        }
        check_kind(&lattice, &h, pg, q, kind)?;
        Ok(PolarizedSurface {
            name: name.into(),
            lattice,
            h,
            pg,
            q,
            kind,
            flags,
            provenance: String::new(),
        })
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lattice(&self) -> &IntersectionLattice {
        &self.lattice
    }

    pub fn h(&self) -> &DivisorClass {
        &self.h
    }

    pub fn canonical(&self) -> &DivisorClass {
        self.lattice.canonical()
    }

    pub fn pg(&self) -> u64 {
        self.pg
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    /// Flags exactly as asserted.
    pub fn flags(&self) -> HypothesisFlags {
        self.flags
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Asserted flags with the facts established for the surface's family
    /// filled into the `Unknown` slots.
    ///
    /// * Enriques and anticanonical rational surfaces: `h` is non-special,
    ///   `h^0(2K - h) = 0` and `h^0(h - K) != 0`.
    /// * `(P^2, O(lambda))` with `lambda >= 1` and `F_e` with `a >= 1`,
    ///   `b >= ae + 1` are very ample.
    pub fn effective_flags(&self) -> HypothesisFlags {
        let family_facts = matches!(self.kind, SurfaceKind::Enriques) || self.kind.is_anticanonical_rational();
        let very_ample = match self.kind {
            SurfaceKind::P2 { .. } | SurfaceKind::Hirzebruch { .. } => Some(TriState::True),
            _ => None,
        };
        let fact = |t: TriState| family_facts.then_some(t);
        HypothesisFlags {
            very_ample: self.flags.very_ample.or_derive(very_ample),
            non_special: self.flags.non_special.or_derive(fact(TriState::True)),
            h0_2k_minus_h_zero: self.flags.h0_2k_minus_h_zero.or_derive(fact(TriState::True)),
            h0_h_minus_k_zero: self.flags.h0_h_minus_k_zero.or_derive(fact(TriState::False)),
        }
    }

    /// `p_g = q = 0` with a non-special polarization: the setting in which
    /// the embedding dimension is determined by the lattice.
    pub fn has_regular_non_special(&self) -> bool {
        self.pg == 0 && self.q == 0 && self.effective_flags().non_special.is_true()
    }

    /// `has_regular_non_special` plus very ampleness: the standing
    /// hypotheses of the existence, stability and wildness results.
    pub fn has_standing_hypotheses(&self) -> bool {
        self.has_regular_non_special() && self.effective_flags().very_ample.is_true()
    }

    pub(crate) fn pair(&self, d: &DivisorClass, e: &DivisorClass) -> Result<BigInt, LatticeError> {
        self.lattice.pair(d, e)
    }
}

fn check_kind(
    lattice: &IntersectionLattice,
    h: &DivisorClass,
    pg: u64,
    q: u64,
    kind: SurfaceKind,
) -> Result<(), InvariantsError> {
    let mismatch = |field: &'static str, reason: String| Err(InvariantsError::KindMismatch { field, reason });
    let same_form =
        |model: &IntersectionLattice| model.gram() == lattice.gram() && model.canonical() == lattice.canonical();
    let regular = pg == 0 && q == 0;
    match kind {
        SurfaceKind::Abstract => return Ok(()),
        SurfaceKind::P2 { lambda } => {
            if lambda < 1 {
                return mismatch("kind", "p2 requires lambda >= 1".into());
            }
            if !same_form(&blowup_p2_lattice(0)) {
                return mismatch("gram", "p2 requires the rank-1 lattice l^2 = 1, K = -3l".into());
            }
            if h.coeffs()[0] != BigInt::from(lambda) {
                return mismatch("h", format!("p2(lambda={lambda}) requires h = {lambda}l"));
            }
        }
        SurfaceKind::Hirzebruch { e, a, b } => {
            // very ampleness of a xi + b f on F_e
            if a < 1 || b < a * e + 1 {
                return mismatch(
                    "kind",
                    format!("hirzebruch requires a >= 1 and b >= ae + 1, got e={e}, a={a}, b={b}"),
                );
            }
            if !same_form(&hirzebruch_lattice(e)) {
                return mismatch(
                    "gram",
                    format!("hirzebruch(e={e}) requires the F_{e} lattice in the (xi, f) basis"),
                );
            }
            if h.coeffs() != [BigInt::from(a), BigInt::from(b)] {
                return mismatch("h", format!("hirzebruch(a={a}, b={b}) requires h = ({a}, {b})"));
            }
        }
        SurfaceKind::BlowupP2 { .. } => {
            if !same_form(&blowup_p2_lattice(lattice.rank() - 1)) {
                return mismatch(
                    "gram",
                    "blowup_p2 requires diag(1, -1, ..., -1) with K = -3l + sum e_i".into(),
                );
            }
        }
        SurfaceKind::Enriques => {
            let k_form = lattice.linear_form(lattice.canonical())?;
            if k_form.iter().any(|c| !c.is_zero()) {
                return mismatch(
                    "K",
                    "an Enriques surface has numerically trivial canonical class".into(),
                );
            }
        }
    }
    if !regular {
        return mismatch("pg", format!("{kind} surfaces have p_g = q = 0"));
    }
    Ok(())
}

/// `chi(O_S) = 1 - q + p_g`.
pub fn chi_structure(pg: u64, q: u64) -> BigInt {
    BigInt::one() - BigInt::from(q) + BigInt::from(pg)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedInvariants {
    #[serde(serialize_with = "serde_num::int")]
    pub h2: BigInt,
    #[serde(rename = "hK", serialize_with = "serde_num::int")]
    pub hk: BigInt,
    #[serde(rename = "K2", serialize_with = "serde_num::int")]
    pub k2: BigInt,
    #[serde(serialize_with = "serde_num::int")]
    pub chi: BigInt,
    /// Sectional genus.
    #[serde(serialize_with = "serde_num::int")]
    pub pi: BigInt,
    /// Embedding dimension; present only for `p_g = q = 0` non-special data.
    #[serde(rename = "N", serialize_with = "serde_num::opt_int")]
    pub n: Option<BigInt>,
    #[serde(serialize_with = "serde_num::opt_int")]
    pub h0_h: Option<BigInt>,
    /// Length of the point scheme used in the rank-2 construction, `N + 2`.
    #[serde(rename = "degZ", serialize_with = "serde_num::opt_int")]
    pub deg_z: Option<BigInt>,
    #[serde(rename = "h0_h_plus_K", serialize_with = "serde_num::opt_int")]
    pub h0_h_plus_k: Option<BigInt>,
}

fn exact_half(v: BigInt, err: impl FnOnce(BigInt) -> InvariantsError) -> Result<BigInt, InvariantsError> {
    let (half, rem) = v.div_rem(&BigInt::from(2));
    if rem.is_zero() {
        Ok(half)
    } else {
        Err(err(v))
    }
}

pub fn derived_invariants(s: &PolarizedSurface) -> Result<DerivedInvariants, InvariantsError> {
    let h = s.h();
    let k = s.canonical();
    let h2 = s.pair(h, h)?;
    let hk = s.pair(h, k)?;
    let k2 = s.pair(k, k)?;
    let chi = chi_structure(s.pg(), s.q());
    let half_adj = exact_half(&h2 + &hk, InvariantsError::NonIntegralGenus)?;
    let pi = &half_adj + 1;
    let n = if s.has_regular_non_special() {
        // h2 - hK = (h2 + hK) - 2hK is even whenever h2 + hK is
        Some(exact_half(&h2 - &hk, InvariantsError::NonIntegralGenus)?)
    } else {
        None
    };
    // Kodaira vanishing: h^0(h + K) = chi(h + K) = (h^2 + hK)/2 + chi(O_S)
    let h0_h_plus_k = (pi >= BigInt::one()).then(|| &half_adj + &chi);
    Ok(DerivedInvariants {
        h0_h: n.as_ref().map(|n| n + 1),
        deg_z: n.as_ref().map(|n| n + 2),
        h2,
        hk,
        k2,
        chi,
        pi,
        n,
        h0_h_plus_k,
    })
}

/// `N = h^0(O_S(h)) - 1 = (h^2 - hK)/2`, defined for `p_g = q = 0` and a
/// non-special polarization.
pub fn embedding_dimension(s: &PolarizedSurface) -> Result<BigInt, InvariantsError> {
    derived_invariants(s)?.n.ok_or(InvariantsError::MissingHypothesis(
        "embedding dimension needs p_g = q = 0 and non-special h",
    ))
}

/// Numeric shadow of a vector bundle: rank and Chern classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ChernData {
    rank: u32,
    c1: DivisorClass,
    #[serde(serialize_with = "serde_num::int")]
    c2: BigInt,
}

impl ChernData {
    pub fn new(rank: u32, c1: DivisorClass, c2: BigInt) -> Result<Self, InvariantsError> {
        if rank == 0 {
            return Err(InvariantsError::ZeroRank);
        }
        Ok(ChernData { rank, c1, c2 })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn c1(&self) -> &DivisorClass {
        &self.c1
    }

    pub fn c2(&self) -> &BigInt {
        &self.c2
    }
}

impl fmt::Display for ChernData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(rank {}, c1 = {}, c2 = {})", self.rank, self.c1, self.c2)
    }
}

/// `rk * chi(O_S) + c1.(c1 - K)/2 - c2`.
pub fn riemann_roch_chi(s: &PolarizedSurface, f: &ChernData) -> Result<BigInt, InvariantsError> {
    s.lattice().check(f.c1())?;
    let c1 = f.c1();
    let adj = s.pair(c1, &(c1 - s.canonical()))?;
    let half = exact_half(adj, InvariantsError::NonIntegralChi)?;
    Ok(BigInt::from(f.rank()) * chi_structure(s.pg(), s.q()) + half - f.c2())
}

pub(crate) fn binomial2(r: u32) -> BigInt {
    let r = BigInt::from(r);
    &r * (&r - 1) / 2
}

/// Chern data of `F(th)`.
pub fn chern_twist(s: &PolarizedSurface, f: &ChernData, t: &BigInt) -> Result<ChernData, InvariantsError> {
    let h = s.h();
    let rank = BigInt::from(f.rank());
    let c1h = s.pair(f.c1(), h)?;
    let h2 = s.pair(h, h)?;
    let c1 = f.c1() + &(&(&rank * t) * h);
    let c2 = f.c2() + (&rank - 1) * t * c1h + binomial2(f.rank()) * t * t * h2;
    Ok(ChernData { rank: f.rank(), c1, c2 })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SanityCheck {
    pub clause: &'static str,
    /// False when the premise of an implication does not hold.
    pub applicable: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SanityReport {
    pub checks: Vec<SanityCheck>,
}

impl SanityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SanityCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Degree inequalities of a non-special embedding `S ⊆ P^N` with
/// `p_g = q = 0`: `N >= 2`; `N >= 3` unless `S` is a plane; `N >= 4` once
/// `h^2 >= 4`, since such surfaces in `P^3` have degree at most 3.
pub fn embedding_sanity(s: &PolarizedSurface) -> Result<SanityReport, InvariantsError> {
    let inv = derived_invariants(s)?;
    let n = inv.n.clone().ok_or(InvariantsError::MissingHypothesis(
        "embedding checks need p_g = q = 0 and non-special h",
    ))?;
    let (h2, hk) = (&inv.h2, &inv.hk);
    let int = BigInt::from;
    let unconditional = |clause, ok| SanityCheck {
        clause,
        applicable: true,
        passed: ok,
    };
    let implication = |clause, premise: bool, ok: bool| SanityCheck {
        clause,
        applicable: premise,
        passed: !premise || ok,
    };
    let deg2 = *h2 >= int(2);
    let deg4 = *h2 >= int(4);
    Ok(SanityReport {
        checks: vec![
            unconditional("h^2 = hK + 2N", *h2 == hk + &n * 2),
            unconditional("h^2 >= hK + 4", *h2 >= hk + 4),
            implication("h^2 >= 2 => N >= 3", deg2, n >= int(3)),
            implication("h^2 >= 2 => h^2 >= hK + 6", deg2, *h2 >= hk + 6),
            implication("h^2 >= 4 => N >= 4", deg4, n >= int(4)),
            implication("h^2 >= 4 => h^2 >= hK + 8", deg4, *h2 >= hk + 8),
        ],
    })
}
