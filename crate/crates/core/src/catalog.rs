//! Built-in polarized surfaces and the checks that pin their numbers down.
//!
//! Builtin names are kebab-case with their parameters inline:
//! `p2-2`, `p1xp1-2-3`, `hirzebruch-e2-a1-b3`, `del-pezzo-3`, `enriques-10`,
//! `kim-5-9`, `table1-row-4` and the alias `bordiga`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::invariants::{
    derived_invariants, HypothesisFlags, InvariantsError, PolarizedSurface, SurfaceKind, TriState,
};
use crate::lattice::{
    blowup_p2_lattice, blowup_p2_lattice_labeled, hirzebruch_lattice, make_lattice_i64, DivisorClass,
};
use crate::serde_num;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("verification failed:\n{}", .0.join("\n"))]
    VerificationFailure(Vec<String>),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

fn asserted() -> HypothesisFlags {
    HypothesisFlags {
        very_ample: TriState::True,
        non_special: TriState::True,
        ..HypothesisFlags::default()
    }
}

/// One row of the list of linearly normal non-special rational surfaces in
/// `P^4`: the plane blown up at `Q_1..Q_nq` (multiplicity `f_mult` in `h`)
/// and `P_1..P_np`, with `h = deg l - f_mult sum f_i - sum_{j <= e_in_h} e_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Table1Row {
    pub row: usize,
    pub nq: usize,
    pub np: usize,
    pub deg: i64,
    pub f_mult: i64,
    pub e_in_h: usize,
    pub k2: i64,
    pub h2: i64,
    pub hk: i64,
}

/// Expected data for the seven rows. Row 2 carries all five points in `h`.
pub const TABLE1_ROWS: [Table1Row; 7] = [
    Table1Row {
        row: 1,
        nq: 0,
        np: 1,
        deg: 2,
        f_mult: 0,
        e_in_h: 1,
        k2: 8,
        h2: 3,
        hk: -5,
    },
    Table1Row {
        row: 2,
        nq: 0,
        np: 5,
        deg: 3,
        f_mult: 0,
        e_in_h: 5,
        k2: 4,
        h2: 4,
        hk: -4,
    },
    Table1Row {
        row: 3,
        nq: 1,
        np: 7,
        deg: 4,
        f_mult: 2,
        e_in_h: 7,
        k2: 1,
        h2: 5,
        hk: -3,
    },
    Table1Row {
        row: 4,
        nq: 0,
        np: 10,
        deg: 4,
        f_mult: 0,
        e_in_h: 10,
        k2: -1,
        h2: 6,
        hk: -2,
    },
    Table1Row {
        row: 5,
        nq: 6,
        np: 5,
        deg: 6,
        f_mult: 2,
        e_in_h: 5,
        k2: -2,
        h2: 7,
        hk: -1,
    },
    Table1Row {
        row: 6,
        nq: 10,
        np: 1,
        deg: 7,
        f_mult: 2,
        e_in_h: 1,
        k2: -2,
        h2: 8,
        hk: 0,
    },
    Table1Row {
        row: 7,
        nq: 10,
        np: 0,
        deg: 13,
        f_mult: 4,
        e_in_h: 0,
        k2: -1,
        h2: 9,
        hk: 1,
    },
];

/// Row 2 with `h = 3l - (e1 + ... + e4)` on five blown-up points. Kept as a
/// regression fixture: it is not linearly normal in `P^4`.
pub const TABLE1_ROW2_PRINTED: Table1Row = Table1Row {
    row: 2,
    nq: 0,
    np: 5,
    deg: 3,
    f_mult: 0,
    e_in_h: 4,
    k2: 4,
    h2: 4,
    hk: -4,
};

impl Table1Row {
    pub fn surface(&self, name: impl Into<String>) -> Result<PolarizedSurface, CatalogError> {
        let labels = std::iter::once("l".to_string())
            .chain((1..=self.nq).map(|i| format!("f{i}")))
            .chain((1..=self.np).map(|j| format!("e{j}")))
            .collect();
        let lattice = blowup_p2_lattice_labeled(labels);
        let mut h = vec![self.deg];
        h.extend(std::iter::repeat_n(-self.f_mult, self.nq));
        h.extend((1..=self.np).map(|j| if j <= self.e_in_h { -1 } else { 0 }));
        let kind = SurfaceKind::BlowupP2 {
            anticanonical: self.h2 <= 5,
        };
        let s = PolarizedSurface::new(name, lattice, DivisorClass::from_i64s(&h), 0, 0, kind, asserted())?;
        Ok(s.with_provenance(format!(
            "non-special linearly normal rational surface of degree {} in P^4",
            self.h2
        )))
    }
}

/// Rows as surfaces, in order.
pub fn table1() -> Vec<PolarizedSurface> {
    TABLE1_ROWS
        .iter()
        .map(|r| {
            r.surface(format!("table1-row-{}", r.row))
                .expect("table rows are valid")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowCheck {
    pub row: usize,
    pub h: String,
    #[serde(serialize_with = "serde_num::int")]
    pub h2: BigInt,
    #[serde(rename = "hK", serialize_with = "serde_num::int")]
    pub hk: BigInt,
    #[serde(rename = "K2", serialize_with = "serde_num::int")]
    pub k2: BigInt,
    #[serde(rename = "N", serialize_with = "serde_num::opt_int")]
    pub n: Option<BigInt>,
    pub passed: bool,
    pub diffs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table1Report {
    pub rows: Vec<RowCheck>,
}

impl Table1Report {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn into_result(self) -> Result<Self, CatalogError> {
        if self.passed() {
            return Ok(self);
        }
        let diffs = self
            .rows
            .iter()
            .flat_map(|r| r.diffs.iter().map(move |d| format!("row {}: {d}", r.row)))
            .collect();
        Err(CatalogError::VerificationFailure(diffs))
    }
}

/// Checks each row for `N = 4` and the expected `h^2`, `hK`, `K^2`.
pub fn verify_rows(rows: &[Table1Row]) -> Result<Table1Report, CatalogError> {
    let mut checks = Vec::with_capacity(rows.len());
    for r in rows {
        let s = r.surface(format!("row-{}", r.row))?;
        let inv = derived_invariants(&s)?;
        let mut diffs = Vec::new();
        let mut expect = |what: &str, got: &BigInt, want: i64| {
            if *got != BigInt::from(want) {
                diffs.push(format!("{what} = {got}, expected {want}"));
            }
        };
        expect("h^2", &inv.h2, r.h2);
        expect("hK", &inv.hk, r.hk);
        expect("K^2", &inv.k2, r.k2);
        match &inv.n {
            Some(n) => expect("N", n, 4),
            None => diffs.push("N undefined".into()),
        }
        checks.push(RowCheck {
            row: r.row,
            h: s.lattice().format_class(s.h()),
            h2: inv.h2,
            hk: inv.hk,
            k2: inv.k2,
            n: inv.n,
            passed: diffs.is_empty(),
            diffs,
        });
    }
    Ok(Table1Report { rows: checks })
}

pub fn verify_table1() -> Result<Table1Report, CatalogError> {
    verify_rows(&TABLE1_ROWS)
}

/// The plane blown up at `9 - d` general points, polarized by `-K`.
pub fn del_pezzo(d: u32) -> Result<PolarizedSurface, CatalogError> {
    if !(3..=9).contains(&d) {
        return Err(CatalogError::InvalidDegree(format!(
            "del Pezzo degree {d} outside 3..=9"
        )));
    }
    let lattice = blowup_p2_lattice((9 - d) as usize);
    let h = -lattice.canonical();
    let s = PolarizedSurface::new(
        format!("del-pezzo-{d}"),
        lattice,
        h,
        0,
        0,
        SurfaceKind::BlowupP2 { anticanonical: true },
        asserted(),
    )?;
    Ok(s.with_provenance(format!("anticanonical del Pezzo surface of degree {d}")))
}

/// Numerical model of an Enriques surface with `h^2 = h2`: a hyperbolic
/// plane carrying `h = u + (h2/2) v`, `K = 0`. Only `h^2`, `hK = 0` and
/// `K^2 = 0` are encoded.
pub fn enriques_numeric(h2: u64) -> Result<PolarizedSurface, CatalogError> {
    if h2 < 8 || h2 % 2 == 1 {
        return Err(CatalogError::InvalidDegree(format!(
            "Enriques h^2 must be even and at least 8, got {h2}"
        )));
    }
    let half = i64::try_from(h2 / 2).map_err(|_| CatalogError::InvalidDegree(format!("h^2 = {h2} too large")))?;
    let lattice = make_lattice_i64(&[&[0, 1], &[1, 0]], &[0, 0], &["u", "v"]).expect("hyperbolic plane is valid");
    let flags = HypothesisFlags {
        very_ample: TriState::True,
        non_special: TriState::True,
        h0_2k_minus_h_zero: TriState::True,
        h0_h_minus_k_zero: TriState::Unknown,
    };
    let s = PolarizedSurface::new(
        format!("enriques-{h2}"),
        lattice,
        DivisorClass::from_i64s(&[1, half]),
        0,
        0,
        SurfaceKind::Enriques,
        flags,
    )?;
    Ok(s.with_provenance("numerical carrier of an Enriques surface"))
}

fn kim_range(a: u32, m: u32) -> Result<(), CatalogError> {
    if a < 4 || !(2..=9).contains(&m) {
        return Err(CatalogError::OutOfRange(format!(
            "need a >= 4 and 2 <= m <= 9, got a = {a}, m = {m}"
        )));
    }
    Ok(())
}

/// The plane blown up at `m` general points of a cubic, with
/// `h = a l - e1 - ... - em`.
pub fn kim_cubic(a: u32, m: u32) -> Result<PolarizedSurface, CatalogError> {
    kim_range(a, m)?;
    let mut h = vec![-1i64; m as usize + 1];
    h[0] = a.into();
    let s = PolarizedSurface::new(
        format!("kim-{a}-{m}"),
        blowup_p2_lattice(m as usize),
        DivisorClass::from_i64s(&h),
        0,
        0,
        SurfaceKind::BlowupP2 { anticanonical: true },
        asserted(),
    )?;
    Ok(s.with_provenance(format!("{m} general points on a plane cubic, h = {a}l - sum e_i")))
}

pub fn p2(lambda: u64) -> Result<PolarizedSurface, CatalogError> {
    if lambda == 0 {
        return Err(CatalogError::InvalidDegree("lambda must be positive".into()));
    }
    let l = i64::try_from(lambda).map_err(|_| CatalogError::InvalidDegree(format!("lambda = {lambda} too large")))?;
    let s = PolarizedSurface::new(
        format!("p2-{lambda}"),
        blowup_p2_lattice(0),
        DivisorClass::from_i64s(&[l]),
        0,
        0,
        SurfaceKind::P2 { lambda },
        HypothesisFlags::default(),
    )?;
    Ok(s.with_provenance(format!("the plane embedded by O({lambda})")))
}

/// `F_e` polarized by `a xi + b f`; very ample iff `a >= 1` and `b >= ae + 1`.
pub fn hirzebruch(e: u64, a: u64, b: u64) -> Result<PolarizedSurface, CatalogError> {
    let coeff = |x: u64| i64::try_from(x).map_err(|_| CatalogError::OutOfRange(format!("{x} too large")));
    let h = DivisorClass::from_i64s(&[coeff(a)?, coeff(b)?]);
    let s = PolarizedSurface::new(
        format!("hirzebruch-e{e}-a{a}-b{b}"),
        hirzebruch_lattice(e),
        h,
        0,
        0,
        SurfaceKind::Hirzebruch { e, a, b },
        HypothesisFlags::default(),
    )
    .map_err(|err| match err {
        InvariantsError::KindMismatch { reason, .. } => CatalogError::OutOfRange(reason),
        other => other.into(),
    })?;
    Ok(s.with_provenance(format!("F_{e} embedded by {a} xi + {b} f")))
}

/// The Bordiga surface: ten general points, `h = 4l - e1 - ... - e10`.
pub fn bordiga() -> PolarizedSurface {
    TABLE1_ROWS[3]
        .surface("bordiga")
        .expect("row 4 is valid")
        .with_provenance("Bordiga surface: ten general points, h = 4l - sum e_i")
}

/// Names shown by `catalog list`. Parameterized families accept other
/// parameters through [`builtin`] as well.
pub fn builtin_names() -> Vec<String> {
    let mut names: Vec<String> = (1..=5).map(|l| format!("p2-{l}")).collect();
    names.extend(["p1xp1-1-1", "p1xp1-1-2", "p1xp1-2-3"].map(String::from));
    for (e, a, b) in [
        (0, 1, 2),
        (0, 1, 3),
        (0, 2, 2),
        (1, 1, 2),
        (2, 1, 3),
        (2, 1, 4),
        (3, 2, 7),
    ] {
        names.push(format!("hirzebruch-e{e}-a{a}-b{b}"));
    }
    names.extend((3..=9).map(|d| format!("del-pezzo-{d}")));
    names.extend([8, 10, 12].map(|h2| format!("enriques-{h2}")));
    names.extend(["kim-4-9", "kim-5-2", "kim-5-9", "kim-6-2"].map(String::from));
    names.extend((1..=7).map(|r| format!("table1-row-{r}")));
    names.push("table1-row-2-printed".into());
    names.push("bordiga".into());
    names
}

fn numbers<const N: usize>(rest: &str, sep: char) -> Option<[u64; N]> {
    let parts: Vec<u64> = rest.split(sep).map(|p| p.parse().ok()).collect::<Option<_>>()?;
    parts.try_into().ok()
}

/// Looks up a builtin by name.
pub fn builtin(name: &str) -> Result<PolarizedSurface, CatalogError> {
    let unknown = || CatalogError::UnknownBuiltin(name.to_string());
    let small = |x: u64| u32::try_from(x).map_err(|_| CatalogError::OutOfRange(format!("{x} too large")));
    if name == "bordiga" {
        return Ok(bordiga());
    }
    if name == "table1-row-2-printed" {
        return TABLE1_ROW2_PRINTED.surface(name);
    }
    if let Some(rest) = name.strip_prefix("table1-row-") {
        let [r] = numbers::<1>(rest, '-').ok_or_else(unknown)?;
        let row = TABLE1_ROWS
            .get((r as usize).wrapping_sub(1))
            .ok_or_else(|| CatalogError::OutOfRange(format!("rows are numbered 1..=7, got {r}")))?;
        return row.surface(name);
    }
    if let Some(rest) = name.strip_prefix("p2-") {
        let [l] = numbers::<1>(rest, '-').ok_or_else(unknown)?;
        return p2(l);
    }
    if let Some(rest) = name.strip_prefix("p1xp1-") {
        let [a, b] = numbers::<2>(rest, '-').ok_or_else(unknown)?;
        let s = hirzebruch(0, a, b)?;
        return Ok(rename(s, name));
    }
    if let Some(rest) = name.strip_prefix("hirzebruch-e") {
        let (e, rest) = rest.split_once("-a").ok_or_else(unknown)?;
        let (a, b) = rest.split_once("-b").ok_or_else(unknown)?;
        let parse = |x: &str| x.parse::<u64>().map_err(|_| unknown());
        return hirzebruch(parse(e)?, parse(a)?, parse(b)?);
    }
    if let Some(rest) = name.strip_prefix("del-pezzo-") {
        let [d] = numbers::<1>(rest, '-').ok_or_else(unknown)?;
        return del_pezzo(small(d)?);
    }
    if let Some(rest) = name.strip_prefix("enriques-") {
        let [h2] = numbers::<1>(rest, '-').ok_or_else(unknown)?;
        return enriques_numeric(h2);
    }
    if let Some(rest) = name.strip_prefix("kim-") {
        let [a, m] = numbers::<2>(rest, '-').ok_or_else(unknown)?;
        return kim_cubic(small(a)?, small(m)?);
    }
    Err(unknown())
}

fn rename(s: PolarizedSurface, name: &str) -> PolarizedSurface {
    let provenance = s.provenance().to_string();
    PolarizedSurface::new(
        name,
        s.lattice().clone(),
        s.h().clone(),
        s.pg(),
        s.q(),
        s.kind(),
        s.flags(),
    )
    .expect("renaming keeps a valid surface")
    .with_provenance(provenance)
}

/// Clifford data for the curves `C` in `|3h + K|` on [`kim_cubic`]
/// surfaces, measured against the line bundle `L = O_C(h + K)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliffordReport {
    pub a: i64,
    pub m: i64,
    pub pi: i64,
    /// Genus of `C`.
    pub g: i64,
    #[serde(rename = "deg_L")]
    pub deg_l: i64,
    #[serde(rename = "h0_L")]
    pub h0_l: i64,
    #[serde(rename = "cliff_L")]
    pub cliff_l: i64,
    /// `3a - 7`: the lines through one point cut a `g^1_{3a-5}` on `C`.
    pub pencil_bound: i64,
    pub kim_hypothesis_plausible: bool,
}

/// Computes the report from the lattice and cross-checks it against the
/// closed forms in `a` and `m`.
pub fn clifford_report(a: u32, m: u32) -> Result<CliffordReport, CatalogError> {
    let s = kim_cubic(a, m)?;
    let lat = s.lattice();
    let h = s.h();
    let k = lat.canonical();
    let c = &(3 * h) + k;
    let l = h + k;
    let pair = |x: &DivisorClass, y: &DivisorClass| lat.pair(x, y).map_err(InvariantsError::from);
    let g = (pair(&c, &c)? + pair(&c, k)?) / 2 + 1;
    let deg_l = pair(&l, &c)?;
    // h^0(O_C(h+K)) = h^0(O_S(h+K)) = pi, since h^0 and h^1 of O_S(-2h) vanish
    let inv = derived_invariants(&s)?;
    let h0_l = inv
        .h0_h_plus_k
        .clone()
        .ok_or_else(|| CatalogError::InvariantViolation("h^0(h+K) undefined".into()))?;
    let cliff_l = &deg_l - &h0_l * 2 + 2;

    let small = |v: &BigInt| {
        v.to_i64()
            .ok_or_else(|| CatalogError::InvariantViolation(format!("{v} does not fit in i64")))
    };
    let (ai, mi) = (i64::from(a), i64::from(m));
    let report = CliffordReport {
        a: ai,
        m: mi,
        pi: small(&inv.pi)?,
        g: small(&g)?,
        deg_l: small(&deg_l)?,
        h0_l: small(&h0_l)?,
        cliff_l: small(&cliff_l)?,
        pencil_bound: 3 * ai - 7,
        kim_hypothesis_plausible: cliff_l <= BigInt::from(3 * ai - 7),
    };

    let closed = [
        ("pi", report.pi, (ai - 1) * (ai - 2) / 2),
        ("g", report.g, (3 * ai - 4) * (3 * ai - 5) / 2 - mi),
        ("deg_L", report.deg_l, 3 * (ai - 1) * (ai - 3)),
        ("h0_L", report.h0_l, (ai - 1) * (ai - 2) / 2),
        ("cliff_L", report.cliff_l, (2 * ai - 3) * (ai - 3)),
    ];
    for (what, got, want) in closed {
        if got != want {
            return Err(CatalogError::InvariantViolation(format!(
                "{what} = {got} from the lattice, {want} from the closed form"
            )));
        }
    }
    Ok(report)
}
