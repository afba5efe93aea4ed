//! Decisions about special rank-2 Ulrich bundles on `(S, h)`: existence,
//! stability of the bundles built from general point sets, Ulrich-wildness,
//! and dimension statements for the component of the moduli space they fill.
//!
//! Verdicts are three-valued. `Unknown` means a hypothesis the result rests
//! on is not asserted (or not derivable from the surface's family); it never
//! stands for a computed negative answer.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::invariants::{
    derived_invariants, DerivedInvariants, InvariantsError, PolarizedSurface, SurfaceKind, TriState,
};
use crate::serde_num;
use crate::ulrich::{special_rank2_chern, UlrichError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
    #[error(transparent)]
    Ulrich(#[from] UlrichError),
    #[error("missing hypothesis: {0}")]
    MissingHypothesis(&'static str),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

/// A three-valued answer together with the reasoning that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub value: TriState,
    pub trace: Vec<String>,
}

impl Verdict {
    fn new(value: TriState, trace: impl IntoIterator<Item = String>) -> Self {
        Verdict {
            value,
            trace: trace.into_iter().collect(),
        }
    }
}

fn hypothesis_trace(s: &PolarizedSurface) -> Vec<String> {
    let flags = s.effective_flags();
    vec![
        format!("p_g = {}, q = {}", s.pg(), s.q()),
        format!("very ample: {}", flags.very_ample),
        format!("non-special: {}", flags.non_special),
    ]
}

/// Existence of a special rank-2 Ulrich bundle. True under `p_g = q = 0`
/// with a very ample non-special `h`; otherwise unknown. Never false: only
/// existence is known.
pub fn special_rank2_exists(s: &PolarizedSurface) -> Verdict {
    let mut trace = hypothesis_trace(s);
    let flags = s.effective_flags();
    let value = if s.pg() == 0 && s.q() == 0 && flags.very_ample.is_true() && flags.non_special.is_true() {
        trace.push("extension of I_Z(2h) by O(h + K) for a general Z of N + 2 points".into());
        TriState::True
    } else {
        trace.push("standing hypotheses not established".into());
        TriState::Unknown
    };
    Verdict::new(value, trace)
}

/// Whether the special bundles from general point sets are stable.
///
/// They never are on rational scrolls or on `(P^2, O(1))`; they are for
/// `(P^2, O(2))` and whenever the sectional genus is positive. A surface of
/// minimal degree whose family is not recorded stays unknown, since the
/// Veronese surface and a quartic scroll share every invariant used here.
pub fn stable_special_exists(s: &PolarizedSurface) -> Result<Verdict, ClassifyError> {
    if !special_rank2_exists(s).value.is_true() {
        return Err(ClassifyError::MissingHypothesis(
            "stability is decided only where special rank-2 Ulrich bundles are known to exist",
        ));
    }
    let inv = derived_invariants(s)?;
    let positive_genus = inv.pi >= BigInt::one();
    let (value, reason) = match s.kind() {
        SurfaceKind::P2 { lambda: 1 } => (TriState::False, "(P^2, O(1)): every such bundle is O^2".to_string()),
        SurfaceKind::P2 { lambda: 2 } => (
            TriState::True,
            "(P^2, O(2)): the bundle is Omega(3), and there are no Ulrich line bundles".to_string(),
        ),
        SurfaceKind::Hirzebruch { e, a, b } if a == 1 || (e == 0 && b == 1) => (
            TriState::False,
            format!("F_{e} embedded by ({a}, {b}) is a rational scroll"),
        ),
        _ if positive_genus => (TriState::True, format!("sectional genus {} >= 1", inv.pi)),
        SurfaceKind::BlowupP2 { .. } => blowup_minimal_degree(s.lattice().rank() - 1, &inv.h2),
        _ => (
            TriState::Unknown,
            "sectional genus 0 without a recorded family: scroll or Veronese cannot be told apart".to_string(),
        ),
    };
    let mut trace = vec![format!("pi = {}", inv.pi)];
    trace.push(reason);
    Ok(Verdict::new(value, trace))
}

/// Sectional genus zero on a blow-up of the plane at `m` points.
fn blowup_minimal_degree(m: usize, h2: &BigInt) -> (TriState, String) {
    if m >= 1 {
        return (
            TriState::False,
            format!("sectional genus 0 on a blow-up at {m} point(s): a rational scroll"),
        );
    }
    if *h2 == BigInt::one() {
        (TriState::False, "the plane with h^2 = 1 is (P^2, O(1))".into())
    } else if *h2 == BigInt::from(4) {
        (TriState::True, "the plane with h^2 = 4 is (P^2, O(2))".into())
    } else {
        (
            TriState::Unknown,
            format!("the plane with sectional genus 0 and h^2 = {h2}"),
        )
    }
}

/// Ulrich-wildness: under the standing hypotheses, wild exactly when
/// `pi >= 1`, or `pi = 0` and `h^2 >= 5`.
pub fn is_ulrich_wild(s: &PolarizedSurface) -> Result<Verdict, ClassifyError> {
    let mut trace = hypothesis_trace(s);
    if !s.has_standing_hypotheses() {
        trace.push("standing hypotheses not established".into());
        return Ok(Verdict::new(TriState::Unknown, trace));
    }
    let inv = derived_invariants(s)?;
    let value = if inv.pi >= BigInt::one() {
        trace.push(format!("pi = {} >= 1", inv.pi));
        TriState::True
    } else if inv.h2 >= BigInt::from(5) {
        trace.push(format!("pi = 0 and h^2 = {} >= 5", inv.h2));
        TriState::True
    } else {
        trace.push(format!("pi = 0 and h^2 = {} <= 4", inv.h2));
        TriState::False
    };
    Ok(Verdict::new(value, trace))
}

/// The direct sufficient condition `pi >= 1` and `h^2 + 1 >= K^2`, which
/// makes two general special bundles `E, G` satisfy
/// `h^1(E ⊗ G^∨) >= h^2 - K^2 + 4 >= 3`.
pub fn wild_via_lemma(s: &PolarizedSurface) -> Result<bool, ClassifyError> {
    if !s.has_standing_hypotheses() {
        return Ok(false);
    }
    let inv = derived_invariants(s)?;
    Ok(inv.pi >= BigInt::one() && &inv.h2 + 1 >= inv.k2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuliDims {
    /// `4 c2 - c1^2 - 3 chi = h^2 - K^2 + 5`.
    #[serde(serialize_with = "serde_num::int")]
    pub lower_chern: BigInt,
    /// `2(N + 2)`, when `h^0(h - K) = 0` makes the point-set map injective.
    #[serde(serialize_with = "serde_num::opt_int")]
    pub lower_injective: Option<BigInt>,
    /// Exact, generically smooth dimension when `h^0(2K - h) = 0`.
    #[serde(serialize_with = "serde_num::opt_int")]
    pub smooth: Option<BigInt>,
}

pub fn moduli_dims(s: &PolarizedSurface) -> Result<ModuliDims, ClassifyError> {
    if !stable_special_exists(s)?.value.is_true() {
        return Err(ClassifyError::MissingHypothesis(
            "moduli dimensions need stable special bundles",
        ));
    }
    let inv = derived_invariants(s)?;
    let lower_chern: BigInt = &inv.h2 - &inv.k2 + 5;
    let special = special_rank2_chern(s)?;
    let c1 = special.c1();
    let expected = special.c2() * 4 - s.lattice().pair(c1, c1).map_err(InvariantsError::from)? - &inv.chi * 3;
    if expected != lower_chern {
        return Err(ClassifyError::InvariantViolation(format!(
            "4c2 - c1^2 - 3chi = {expected} but h^2 - K^2 + 5 = {lower_chern}"
        )));
    }
    let flags = s.effective_flags();
    let lower_injective = match (flags.h0_h_minus_k_zero, &inv.n) {
        (TriState::True, Some(n)) => Some((n + 2) * 2),
        _ => None,
    };
    let smooth = flags.h0_2k_minus_h_zero.is_true().then(|| lower_chern.clone());
    Ok(ModuliDims {
        lower_chern,
        lower_injective,
        smooth,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub name: String,
    pub kind: String,
    pub invariants: DerivedInvariants,
    pub special_rank2_exists: TriState,
    pub stable_special_exists: TriState,
    pub ulrich_wild: TriState,
    pub wild_via_lemma: bool,
    /// Present when stable special bundles exist.
    #[serde(serialize_with = "serde_num::opt_int")]
    pub moduli_dim_lower_chern: Option<BigInt>,
    #[serde(serialize_with = "serde_num::opt_int")]
    pub moduli_dim_lower_injective: Option<BigInt>,
    #[serde(serialize_with = "serde_num::opt_int")]
    pub moduli_dim_smooth: Option<BigInt>,
    /// Sectional genus zero.
    pub minimal_degree: bool,
    pub notes: Vec<String>,
    pub trace: Traces,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Traces {
    pub special_rank2_exists: Vec<String>,
    pub stable_special_exists: Vec<String>,
    pub ulrich_wild: Vec<String>,
}

pub fn classify(s: &PolarizedSurface) -> Result<ClassificationReport, ClassifyError> {
    let inv = derived_invariants(s)?;
    let special = special_rank2_exists(s);
    let stable = match stable_special_exists(s) {
        Ok(v) => v,
        Err(ClassifyError::MissingHypothesis(why)) => Verdict::new(TriState::Unknown, [why.to_string()]),
        Err(e) => return Err(e),
    };
    let wild = is_ulrich_wild(s)?;
    let dims = if stable.value.is_true() {
        Some(moduli_dims(s)?)
    } else {
        None
    };

    if wild.value.is_true() && !special.value.is_true() {
        return Err(ClassifyError::InvariantViolation(
            "wild verdict without special rank-2 bundles".into(),
        ));
    }
    if let Some(d) = &dims {
        if d.smooth.as_ref().is_some_and(|v| *v != d.lower_chern) {
            return Err(ClassifyError::InvariantViolation(
                "smooth dimension differs from the Chern-class count".into(),
            ));
        }
    }

    let minimal_degree = inv.pi.is_zero();
    let mut notes = Vec::new();
    if s.kind().is_anticanonical_rational() {
        if let Some(d) = dims.as_ref().filter(|_| inv.pi >= BigInt::one()) {
            notes.push(format!(
                "anticanonical rational: moduli of stable special rank-2 Ulrich bundles irreducible, rational, smooth of dimension {}",
                d.lower_chern
            ));
        }
        let by_degree = inv.h2 >= BigInt::from(4);
        if wild.value != TriState::Unknown && wild.value.is_true() != by_degree {
            notes.push(format!(
                "the anticanonical criterion `wild iff h^2 >= 4` gives {by_degree} here; the verdict follows pi >= 1 or h^2 >= 5"
            ));
        }
    }
    if s.pg() == 0 && s.q() == 0 && inv.k2 > BigInt::from(9) {
        notes.push(format!(
            "K^2 = {} exceeds 9, impossible for minimal surfaces with p_g = q = 0",
            inv.k2
        ));
    }

    Ok(ClassificationReport {
        name: s.name().to_string(),
        kind: s.kind().to_string(),
        special_rank2_exists: special.value,
        stable_special_exists: stable.value,
        ulrich_wild: wild.value,
        wild_via_lemma: wild_via_lemma(s)?,
        moduli_dim_lower_chern: dims.as_ref().map(|d| d.lower_chern.clone()),
        moduli_dim_lower_injective: dims.as_ref().and_then(|d| d.lower_injective.clone()),
        moduli_dim_smooth: dims.as_ref().and_then(|d| d.smooth.clone()),
        minimal_degree,
        notes,
        trace: Traces {
            special_rank2_exists: special.trace,
            stable_special_exists: stable.trace,
            ulrich_wild: wild.trace,
        },
        invariants: inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::HypothesisFlags;
    use crate::lattice::{blowup_p2_lattice, hirzebruch_lattice, make_lattice_i64, DivisorClass};

    fn class(c: &[i64]) -> DivisorClass {
        DivisorClass::from_i64s(c)
    }

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn asserted() -> HypothesisFlags {
        HypothesisFlags {
            very_ample: TriState::True,
            non_special: TriState::True,
            ..HypothesisFlags::default()
        }
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

    fn del_pezzo_cubic() -> PolarizedSurface {
        let l = blowup_p2_lattice(6);
        let h = -l.canonical();
        PolarizedSurface::new(
            "dp3",
            l,
            h,
            0,
            0,
            SurfaceKind::BlowupP2 { anticanonical: true },
            asserted(),
        )
        .unwrap()
    }

    fn bordiga() -> PolarizedSurface {
        let mut h = vec![-1i64; 11];
        h[0] = 4;
        PolarizedSurface::new(
            "bordiga",
            blowup_p2_lattice(10),
            class(&h),
            0,
            0,
            SurfaceKind::BlowupP2 { anticanonical: false },
            asserted(),
        )
        .unwrap()
    }

    fn enriques(h2: i64) -> PolarizedSurface {
        let l = make_lattice_i64(&[&[0, 1], &[1, 0]], &[0, 0], &["u", "v"]).unwrap();
        let flags = HypothesisFlags {
            very_ample: TriState::True,
            ..HypothesisFlags::default()
        };
        PolarizedSurface::new("enriques", l, class(&[1, h2 / 2]), 0, 0, SurfaceKind::Enriques, flags).unwrap()
    }

    fn abstract_quartic(flags: HypothesisFlags) -> PolarizedSurface {
        // h^2 = 4, hK = -6: the numerics of (P^2, O(2)) and of a quartic scroll
        let l = make_lattice_i64(&[&[4, 1], &[1, 0]], &[-2, 2], &["h", "x"]).unwrap();
        PolarizedSurface::new("abstract", l, class(&[1, 0]), 0, 0, SurfaceKind::Abstract, flags).unwrap()
    }

    #[test]
    fn existence_examples() {
        assert_eq!(special_rank2_exists(&del_pezzo_cubic()).value, TriState::True);
        assert_eq!(special_rank2_exists(&enriques(10)).value, TriState::True);
        let unknown = HypothesisFlags {
            very_ample: TriState::True,
            ..HypothesisFlags::default()
        };
        assert_eq!(
            special_rank2_exists(&abstract_quartic(unknown)).value,
            TriState::Unknown
        );
    }

    #[test]
    fn stability_examples() {
        assert_eq!(stable_special_exists(&p2(1)).unwrap().value, TriState::False);
        assert_eq!(stable_special_exists(&p2(2)).unwrap().value, TriState::True);
        assert_eq!(stable_special_exists(&bordiga()).unwrap().value, TriState::True);
        assert_eq!(stable_special_exists(&hirz(0, 1, 2)).unwrap().value, TriState::False);
        assert_eq!(stable_special_exists(&hirz(0, 2, 1)).unwrap().value, TriState::False);
        assert_eq!(stable_special_exists(&hirz(0, 2, 2)).unwrap().value, TriState::True);
        assert_eq!(stable_special_exists(&hirz(3, 2, 7)).unwrap().value, TriState::True);
        assert_eq!(
            stable_special_exists(&abstract_quartic(asserted())).unwrap().value,
            TriState::Unknown
        );
        let missing = abstract_quartic(HypothesisFlags::default());
        assert!(matches!(
            stable_special_exists(&missing),
            Err(ClassifyError::MissingHypothesis(_))
        ));
    }

    #[test]
    fn stability_on_blown_up_planes_of_minimal_degree() {
        // cubic scroll: F_1 embedded by 2l - e1
        let s = PolarizedSurface::new(
            "scroll",
            blowup_p2_lattice(1),
            class(&[2, -1]),
            0,
            0,
            SurfaceKind::BlowupP2 { anticanonical: true },
            asserted(),
        )
        .unwrap();
        assert_eq!(derived_invariants(&s).unwrap().pi, int(0));
        assert_eq!(stable_special_exists(&s).unwrap().value, TriState::False);
        let veronese = PolarizedSurface::new(
            "v",
            blowup_p2_lattice(0),
            class(&[2]),
            0,
            0,
            SurfaceKind::BlowupP2 { anticanonical: true },
            asserted(),
        )
        .unwrap();
        assert_eq!(stable_special_exists(&veronese).unwrap().value, TriState::True);
        let plane = PolarizedSurface::new(
            "p",
            blowup_p2_lattice(0),
            class(&[1]),
            0,
            0,
            SurfaceKind::BlowupP2 { anticanonical: true },
            asserted(),
        )
        .unwrap();
        assert_eq!(stable_special_exists(&plane).unwrap().value, TriState::False);
    }

    #[test]
    fn wildness_examples() {
        assert_eq!(is_ulrich_wild(&p2(1)).unwrap().value, TriState::False);
        assert_eq!(is_ulrich_wild(&p2(2)).unwrap().value, TriState::False);
        assert_eq!(is_ulrich_wild(&hirz(0, 1, 2)).unwrap().value, TriState::False);
        assert_eq!(is_ulrich_wild(&hirz(0, 1, 3)).unwrap().value, TriState::True);
        assert_eq!(is_ulrich_wild(&hirz(2, 1, 4)).unwrap().value, TriState::True);
        assert_eq!(is_ulrich_wild(&bordiga()).unwrap().value, TriState::True);
        assert!(wild_via_lemma(&bordiga()).unwrap());
        assert!(!wild_via_lemma(&hirz(0, 1, 3)).unwrap());
        let unknown = abstract_quartic(HypothesisFlags::default());
        assert_eq!(is_ulrich_wild(&unknown).unwrap().value, TriState::Unknown);
        assert!(!wild_via_lemma(&unknown).unwrap());
    }

    #[test]
    fn moduli_examples() {
        let d = moduli_dims(&enriques(10)).unwrap();
        assert_eq!(d.lower_chern, int(15));
        assert_eq!(d.smooth, Some(int(15)));
        assert_eq!(d.lower_injective, None);
        assert_eq!(moduli_dims(&bordiga()).unwrap().lower_chern, int(12));
        let d = moduli_dims(&del_pezzo_cubic()).unwrap();
        assert_eq!(d.lower_chern, int(5));
        assert_eq!(d.lower_injective, None);
        assert!(matches!(moduli_dims(&p2(1)), Err(ClassifyError::MissingHypothesis(_))));

        let flags = HypothesisFlags {
            h0_h_minus_k_zero: TriState::True,
            ..asserted()
        };
        let mut h = vec![-1i64; 11];
        h[0] = 4;
        let s = PolarizedSurface::new(
            "b",
            blowup_p2_lattice(10),
            class(&h),
            0,
            0,
            SurfaceKind::BlowupP2 { anticanonical: false },
            flags,
        )
        .unwrap();
        // 2(N + 2) = h^2 - hK + 4
        assert_eq!(moduli_dims(&s).unwrap().lower_injective, Some(int(12)));
    }

    #[test]
    fn composite_reports() {
        let r = classify(&hirz(0, 1, 2)).unwrap();
        assert_eq!(r.ulrich_wild, TriState::False);
        assert_eq!(r.stable_special_exists, TriState::False);
        assert!(r.minimal_degree);
        assert_eq!(r.moduli_dim_lower_chern, None);

        let r = classify(&bordiga()).unwrap();
        assert_eq!(r.ulrich_wild, TriState::True);
        assert_eq!(r.stable_special_exists, TriState::True);
        assert_eq!(r.moduli_dim_lower_chern, Some(int(12)));
        assert!(!r.minimal_degree);

        let r = classify(&enriques(8)).unwrap();
        assert_eq!(r.ulrich_wild, TriState::True);
        assert_eq!(r.invariants.pi, int(5));
        assert_eq!(r.moduli_dim_smooth, Some(int(13)));

        let r = classify(&del_pezzo_cubic()).unwrap();
        assert!(r
            .notes
            .iter()
            .any(|n| n.contains("irreducible, rational, smooth of dimension 5")));

        // (P^2, O(2)) is where the anticanonical h^2 >= 4 criterion and the
        // scroll threshold disagree
        let r = classify(&p2(2)).unwrap();
        assert_eq!(r.ulrich_wild, TriState::False);
        assert!(r.notes.iter().any(|n| n.contains("h^2 >= 4")));

        let r = classify(&abstract_quartic(asserted())).unwrap();
        assert_eq!(r.stable_special_exists, TriState::Unknown);
        assert_eq!(r.ulrich_wild, TriState::False);
    }

    #[test]
    fn large_canonical_degree_is_noted() {
        // K^2 = 10 is not a minimal p_g = q = 0 surface; reported, not rejected
        let l = make_lattice_i64(&[&[2, 0], &[0, 10]], &[0, 1], &["h", "k"]).unwrap();
        let s = PolarizedSurface::new(
            "odd",
            l,
            class(&[1, 0]),
            0,
            0,
            SurfaceKind::Abstract,
            HypothesisFlags::default(),
        )
        .unwrap();
        let r = classify(&s).unwrap();
        assert!(r.notes.iter().any(|n| n.contains("K^2 = 10")));
    }
}
