//! Report assembly for the command-line tool. Every report carries the
//! checks it ran; a report "holds" when all of them passed.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Pow, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::chromatic::{
    chromatic_number_capped, clique_cover_number, fractional_chromatic_capped, verify_coloring, ColoringCertificate,
};
use crate::config::Limits;
use crate::defect::{cd2, DefectResult};
use crate::error::{check_cap, Error, Result};
use crate::fractional::{
    fractional_invariant_capped, randomized_cover_with, verify_cover, BaseInvariant, CliqueCover, CoverCertificate,
    FractionalSolution, Independence, MinrankRealSandwich,
};
use crate::geometry::{
    borsuk_graph, borsuk_net, gale_points, hemisphere_lower_bounds, verify_hemisphere_capped, BorsukNet,
    HemisphereBounds, HemisphereCertificate,
};
use crate::graph::{
    clique_number, generalized_kneser_graph, independence_number_capped, kneser_family, schrijver_family, Graph,
    SetSystem,
};
use crate::lp::{fmt_rational, int, Rational};
use crate::rank::{
    bound_report, minrank_finite_capped, minrank_log_lower, verify_bi_representation, BiRepCertificate, BoundOptions,
    BoundReport, Check, FiniteFieldMatrix,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::InvalidParameters(format!(
                "unknown format `{s}` (json, csv, text)"
            ))),
        }
    }
}

pub trait Report: Serialize {
    fn checks(&self) -> Vec<Check>;

    /// Key/value summary used by the text and default CSV renderings.
    fn rows(&self) -> Vec<(String, String)>;

    fn all_held(&self) -> bool {
        self.checks().iter().all(|c| c.held)
    }

    fn csv_table(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let mut rows: Vec<Vec<String>> = self.rows().into_iter().map(|(k, v)| vec![k, v]).collect();
        rows.extend(check_rows(&self.checks()).into_iter().map(|(k, v)| vec![k, v]));
        (vec!["key".into(), "value".into()], rows)
    }

    fn text(&self) -> String {
        let mut rows = self.rows();
        rows.extend(check_rows(&self.checks()));
        let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
    }
}

fn check_rows(checks: &[Check]) -> Vec<(String, String)> {
    checks
        .iter()
        .map(|c| {
            (
                format!("check: {}", c.name),
                if c.held { "held" } else { "FAILED" }.to_string(),
            )
        })
        .collect()
}

fn check(name: impl Into<String>, held: bool) -> Check {
    Check {
        name: name.into(),
        held,
    }
}

pub fn render<R: Report>(report: &R, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Text => Ok(report.text()),
        Format::Csv => {
            let (header, rows) = report.csv_table();
            let mut w = csv::Writer::from_writer(Vec::new());
            let to_err = |e: csv::Error| Error::Internal(format!("csv: {e}"));
            w.write_record(&header).map_err(to_err)?;
            for row in rows {
                w.write_record(&row).map_err(to_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))?;
            String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
        }
    }
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "-".into(), T::to_string)
}

// ---------------------------------------------------------------- families

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Kneser,
    Schrijver,
}

impl FamilyKind {
    pub fn build(self, d: usize, s: usize) -> Result<SetSystem> {
        match self {
            FamilyKind::Kneser => kneser_family(d, s),
            FamilyKind::Schrijver => schrijver_family(d, s),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Kneser => "kneser",
            FamilyKind::Schrijver => "schrijver",
        })
    }
}

// ---------------------------------------------------------------- bounds

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub family: String,
    pub s: Option<usize>,
    pub report: BoundReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hemisphere: Option<HemisphereCertificate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsTable {
    pub rows: Vec<BoundsRow>,
}

pub const BOUNDS_COLUMNS: [&str; 12] = [
    "family",
    "d",
    "s",
    "n",
    "alpha",
    "chi_bar",
    "cd2",
    "xi_R_lo",
    "xi_R_hi",
    "xi_C_lo",
    "minrkR_lo",
    "minrk2",
];

impl BoundsRow {
    fn cells(&self) -> Vec<String> {
        let r = &self.report;
        let minrk2 = r
            .minrk_q
            .iter()
            .find(|b| b.q == 2)
            .map_or_else(|| "-".into(), |b| b.render());
        vec![
            self.family.clone(),
            r.d.to_string(),
            opt(&self.s),
            r.n.to_string(),
            opt(&r.alpha.as_ref().map(|a| a.value)),
            r.chi_bar.value.to_string(),
            r.cd2.value.to_string(),
            r.xi_r_lower.value.to_string(),
            r.xi_r_upper.value.to_string(),
            r.xi_c_lower.value.to_string(),
            r.minrk_r_lower.value.to_string(),
            minrk2,
        ]
    }
}

/// Bracket for one Kneser or Schrijver family. Schrijver families get a
/// moment-curve hemisphere certificate when the ground set is within the
/// enumeration cap.
pub fn bounds_row(
    kind: FamilyKind,
    d: usize,
    s: usize,
    fields: &[u64],
    limits: &Limits,
    transcript: bool,
) -> Result<BoundsRow> {
    let family = kind.build(d, s)?;
    let mut notes = Vec::new();
    let hemisphere = if kind == FamilyKind::Schrijver {
        if d <= limits.hemisphere_max_d {
            let cert = verify_hemisphere_capped(&gale_points(d, s)?, &family, limits.hemisphere_max_d)?;
            Some(if transcript { cert } else { cert.without_transcript() })
        } else {
            notes.push(format!(
                "hemisphere certificate skipped: d = {d} exceeds the sign enumeration cap {}",
                limits.hemisphere_max_d
            ));
            None
        }
    } else {
        None
    };
    let options = BoundOptions {
        hemisphere: hemisphere.as_ref(),
        fields: fields.to_vec(),
        limits: limits.clone(),
    };
    let report = bound_report(&family, &options)?;
    Ok(BoundsRow {
        family: kind.to_string(),
        s: Some(s),
        report,
        hemisphere,
        notes,
    })
}

/// Bracket for an arbitrary family read from a file.
pub fn bounds_row_for_family(family: &SetSystem, fields: &[u64], limits: &Limits) -> Result<BoundsRow> {
    let options = BoundOptions {
        hemisphere: None,
        fields: fields.to_vec(),
        limits: limits.clone(),
    };
    Ok(BoundsRow {
        family: family.label().unwrap_or("file").to_string(),
        s: None,
        report: bound_report(family, &options)?,
        hemisphere: None,
        notes: Vec::new(),
    })
}

pub fn cmd_bounds(
    kind: FamilyKind,
    pairs: &[(usize, usize)],
    fields: &[u64],
    limits: &Limits,
    transcript: bool,
) -> Result<BoundsTable> {
    let rows = pairs
        .iter()
        .map(|&(d, s)| bounds_row(kind, d, s, fields, limits, transcript))
        .collect::<Result<_>>()?;
    Ok(BoundsTable { rows })
}

impl Report for BoundsTable {
    fn checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        for row in &self.rows {
            for c in &row.report.checks {
                out.push(check(format!("{}: {}", row.report.label, c.name), c.held));
            }
            if let Some(cert) = &row.hemisphere {
                out.push(check(
                    format!("{}: hemisphere certificate verified", row.report.label),
                    cert.verified,
                ));
            }
        }
        out
    }

    fn rows(&self) -> Vec<(String, String)> {
        Vec::new()
    }

    fn csv_table(&self) -> (Vec<String>, Vec<Vec<String>>) {
        (
            BOUNDS_COLUMNS.iter().map(|c| c.to_string()).collect(),
            self.rows.iter().map(BoundsRow::cells).collect(),
        )
    }

    fn text(&self) -> String {
        let (header, rows) = self.csv_table();
        let mut out = aligned(&header, &rows);
        for row in &self.rows {
            let r = &row.report;
            out.push('\n');
            out.push_str(&format!("{} (complement of K(F), n = {})\n", r.label, r.n));
            let mut entries = vec![
                ("cd2", r.cd2.value.to_string(), r.cd2.provenance.clone()),
                ("chi_bar", r.chi_bar.value.to_string(), r.chi_bar.provenance.clone()),
                (
                    "xi_R >=",
                    r.xi_r_lower.value.to_string(),
                    r.xi_r_lower.provenance.clone(),
                ),
                (
                    "xi_R <=",
                    r.xi_r_upper.value.to_string(),
                    r.xi_r_upper.provenance.clone(),
                ),
                (
                    "xi_C >=",
                    r.xi_c_lower.value.to_string(),
                    r.xi_c_lower.provenance.clone(),
                ),
                (
                    "minrk_R >=",
                    r.minrk_r_lower.value.to_string(),
                    r.minrk_r_lower.provenance.clone(),
                ),
            ];
            if let Some(a) = &r.alpha {
                entries.insert(0, ("alpha", a.value.to_string(), a.provenance.clone()));
            }
            if let Some(h) = &r.hemisphere {
                entries.push(("hemisphere", h.to_string(), h.provenance.clone()));
            }
            for b in &r.minrk_q {
                entries.push((
                    "minrk_q",
                    format!("q={}: {}", b.q, b.render()),
                    format!("{}; {}", b.lower.provenance, b.upper.provenance),
                ));
            }
            for (k, v, p) in entries {
                out.push_str(&format!("  {k:<11} {v:<10} {p}\n"));
            }
            for note in &row.notes {
                out.push_str(&format!("  note: {note}\n"));
            }
            for c in &r.checks {
                out.push_str(&format!(
                    "  check: {} ... {}\n",
                    c.name,
                    if c.held { "held" } else { "FAILED" }
                ));
            }
        }
        out
    }
}

fn aligned(header: &[String], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|j| {
            rows.iter()
                .map(|r| r[j].len())
                .chain([header[j].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

// ---------------------------------------------------------------- cd2

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub label: String,
    pub d: usize,
    pub sets: usize,
    pub defect: DefectResult,
    pub verified: bool,
}

pub fn cmd_cd2(family: &SetSystem) -> DefectReport {
    let defect = cd2(family);
    DefectReport {
        label: family.label().unwrap_or("family").to_string(),
        d: family.d(),
        sets: family.len(),
        verified: defect.verify(family),
        defect,
    }
}

fn list(mask: u64) -> String {
    format!("{:?}", SetSystem::elements(mask))
}

impl Report for DefectReport {
    fn checks(&self) -> Vec<Check> {
        vec![check("witness coloring verifies", self.verified)]
    }

    fn rows(&self) -> Vec<(String, String)> {
        vec![
            ("family".into(), self.label.clone()),
            ("d".into(), self.d.to_string()),
            ("sets".into(), self.sets.to_string()),
            ("cd2".into(), self.defect.value.to_string()),
            ("white".into(), list(self.defect.white)),
            ("red".into(), list(self.defect.red)),
            ("blue".into(), list(self.defect.blue)),
        ]
    }
}

// ---------------------------------------------------------------- chromatic

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChromaticReport {
    pub label: String,
    pub n: usize,
    pub chromatic_number: usize,
    pub clique_number: usize,
    pub coloring: ColoringCertificate,
    #[serde(default, with = "opt_rational", skip_serializing_if = "Option::is_none")]
    pub fractional: Option<Rational>,
    pub checks: Vec<Check>,
}

mod opt_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::lp::{fmt_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&fmt_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_rational(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

pub fn cmd_chromatic(g: &Graph, fractional: bool, limits: &Limits) -> Result<ChromaticReport> {
    let (chi, coloring) = chromatic_number_capped(g, limits.chromatic_max_n)?;
    let omega = clique_number(g)?;
    let frac = if fractional {
        Some(fractional_chromatic_capped(g, limits.fractional_chromatic_max_n)?.value)
    } else {
        None
    };
    let mut checks = vec![
        check("coloring is proper", verify_coloring(g, &coloring)),
        check("palette equals the chromatic number", coloring.palette == chi),
        check("clique number <= chromatic number", omega <= chi),
    ];
    if let Some(f) = &frac {
        checks.push(check(
            "clique number <= fractional chromatic <= chromatic",
            int(omega as i64) <= *f && *f <= int(chi as i64),
        ));
    }
    Ok(ChromaticReport {
        label: g.label().unwrap_or("G").to_string(),
        n: g.n(),
        chromatic_number: chi,
        clique_number: omega,
        coloring,
        fractional: frac,
        checks,
    })
}

impl Report for ChromaticReport {
    fn checks(&self) -> Vec<Check> {
        self.checks.clone()
    }

    fn rows(&self) -> Vec<(String, String)> {
        let mut rows = vec![
            ("graph".into(), self.label.clone()),
            ("n".into(), self.n.to_string()),
            ("chromatic number".into(), self.chromatic_number.to_string()),
            ("clique number".into(), self.clique_number.to_string()),
            ("coloring".into(), format!("{:?}", self.coloring.colors)),
        ];
        if let Some(f) = &self.fractional {
            rows.push(("fractional chromatic number".into(), fmt_rational(f)));
        }
        rows
    }
}

// ---------------------------------------------------------------- fractional

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum InvariantKind {
    #[default]
    CliqueCover,
    Independence,
    MinrankSandwich,
}

impl InvariantKind {
    pub fn invariant(self) -> Box<dyn BaseInvariant> {
        match self {
            InvariantKind::CliqueCover => Box::new(CliqueCover),
            InvariantKind::Independence => Box::new(Independence),
            InvariantKind::MinrankSandwich => Box::new(MinrankRealSandwich),
        }
    }
}

impl FromStr for InvariantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clique-cover" => Ok(InvariantKind::CliqueCover),
            "independence" => Ok(InvariantKind::Independence),
            "minrank-sandwich" => Ok(InvariantKind::MinrankSandwich),
            _ => Err(Error::InvalidParameters(format!(
                "unknown invariant `{s}` (clique-cover, independence, minrank-sandwich)"
            ))),
        }
    }
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvariantKind::CliqueCover => "clique-cover",
            InvariantKind::Independence => "independence",
            InvariantKind::MinrankSandwich => "minrank-sandwich",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalReport {
    pub label: String,
    pub n: usize,
    pub invariant: InvariantKind,
    #[serde(with = "crate::serde_util::rational")]
    pub f_of_graph: Rational,
    pub solution: FractionalSolution,
    #[serde(default, with = "opt_rational", skip_serializing_if = "Option::is_none")]
    pub fractional_clique_cover: Option<Rational>,
    pub alpha: usize,
    pub checks: Vec<Check>,
}

pub fn cmd_fractional(g: &Graph, kind: InvariantKind, limits: &Limits) -> Result<FractionalReport> {
    let f = kind.invariant();
    let solution = fractional_invariant_capped(g, f.as_ref(), limits.fstar_max_n)?;
    let f_of_graph = f.eval(g)?;
    let alpha = independence_number_capped(g, limits.alpha_max_n)?;
    let chi_f_bar = if g.n() <= limits.fractional_chromatic_max_n {
        Some(fractional_chromatic_capped(&g.complement(), limits.fractional_chromatic_max_n)?.value)
    } else {
        None
    };
    let mut checks = vec![
        check("f* <= f(G)", solution.value <= f_of_graph),
        check("alpha <= f*", int(alpha as i64) <= solution.value),
    ];
    if let Some(c) = &chi_f_bar {
        checks.push(check(
            "f* <= fractional chromatic number of the complement",
            solution.value <= *c,
        ));
    }
    Ok(FractionalReport {
        label: g.label().unwrap_or("G").to_string(),
        n: g.n(),
        invariant: kind,
        f_of_graph,
        solution,
        fractional_clique_cover: chi_f_bar,
        alpha,
        checks,
    })
}

impl Report for FractionalReport {
    fn checks(&self) -> Vec<Check> {
        self.checks.clone()
    }

    fn rows(&self) -> Vec<(String, String)> {
        let mut rows = vec![
            ("graph".into(), self.label.clone()),
            ("n".into(), self.n.to_string()),
            ("invariant".into(), self.invariant.to_string()),
            ("f(G)".into(), fmt_rational(&self.f_of_graph)),
            ("f*(G)".into(), fmt_rational(&self.solution.value)),
            ("alpha".into(), self.alpha.to_string()),
            (
                "primal weights".into(),
                self.solution
                    .weights
                    .iter()
                    .map(fmt_rational)
                    .collect::<Vec<_>>()
                    .join(" "),
            ),
            ("dual support".into(), self.solution.dual.len().to_string()),
        ];
        if let Some(c) = &self.fractional_clique_cover {
            rows.push(("fractional chromatic of complement".into(), fmt_rational(c)));
        }
        rows
    }
}

// ---------------------------------------------------------------- cover

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    pub label: String,
    pub n: usize,
    pub invariant: InvariantKind,
    pub certificate: CoverCertificate,
    pub bound: f64,
    #[serde(with = "crate::serde_util::rational")]
    pub f_of_graph: Rational,
    pub checks: Vec<Check>,
}

pub fn cmd_cover(g: &Graph, kind: InvariantKind, seed: u64, limits: &Limits) -> Result<CoverReport> {
    let f = kind.invariant();
    let cert = randomized_cover_with(g, f.as_ref(), seed, limits.fstar_max_n, limits.cover_retries)?;
    let f_of_graph = f.eval(g)?;
    let bound = 6.0 * (3.0 * g.n() as f64).ln() * crate::lp::to_f64(&cert.fstar);
    let checks = vec![
        check("certificate re-verifies", verify_cover(g, f.as_ref(), &cert)),
        check("f(G) <= sum of f over the cover", f_of_graph <= cert.total),
    ];
    Ok(CoverReport {
        label: g.label().unwrap_or("G").to_string(),
        n: g.n(),
        invariant: kind,
        certificate: cert,
        bound,
        f_of_graph,
        checks,
    })
}

impl Report for CoverReport {
    fn checks(&self) -> Vec<Check> {
        self.checks.clone()
    }

    fn rows(&self) -> Vec<(String, String)> {
        let c = &self.certificate;
        vec![
            ("graph".into(), self.label.clone()),
            ("n".into(), self.n.to_string()),
            ("invariant".into(), self.invariant.to_string()),
            ("f*(G)".into(), fmt_rational(&c.fstar)),
            ("Q".into(), fmt_rational(&c.q_total)),
            ("t".into(), c.t.to_string()),
            ("total".into(), fmt_rational(&c.total)),
            ("6 ln(3n) f*".into(), format!("{:.6}", self.bound)),
            ("f(G)".into(), fmt_rational(&self.f_of_graph)),
            ("seed".into(), c.seed.to_string()),
            ("retries".into(), c.retries.to_string()),
            (
                "sets".into(),
                c.sets
                    .iter()
                    .map(|&s| format!("{:?}", crate::graph::BitIter(s).collect::<Vec<_>>()))
                    .collect::<Vec<_>>()
                    .join(" "),
            ),
        ]
    }
}

// ---------------------------------------------------------------- minrank

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinrankEntry {
    pub q: u64,
    pub rank: usize,
    pub lower: usize,
    pub log_lower: usize,
    pub upper: usize,
    pub searched: bool,
    pub witness: FiniteFieldMatrix,
    pub factorization: BiRepCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinrankReport {
    pub label: String,
    pub n: usize,
    pub entries: Vec<MinrankEntry>,
    pub checks: Vec<Check>,
}

pub fn cmd_minrank(g: &Graph, fields: &[u64], limits: &Limits) -> Result<MinrankReport> {
    let chi_bar = clique_cover_number(g)?.0;
    let mut entries = Vec::new();
    let mut checks = Vec::new();
    for &q in fields {
        let r = minrank_finite_capped(g, q, limits.minrank_max_free)?;
        let log_lower = minrank_log_lower(g, q)?;
        let (u, v) = r.witness.factor();
        let factorization = BiRepCertificate::finite(q, u, v);
        checks.push(check(
            format!("GF({q}): witness represents the graph"),
            crate::rank::represents(g, &r.witness),
        ));
        checks.push(check(
            format!("GF({q}): witness has the reported rank"),
            r.witness.rank() == r.rank,
        ));
        checks.push(check(
            format!("GF({q}): log_q of clique cover number <= minrank <= clique cover number"),
            log_lower <= r.rank && r.rank <= chi_bar,
        ));
        checks.push(check(
            format!("GF({q}): factorization is an orthogonal bi-representation"),
            verify_bi_representation(g, &factorization) && factorization.dimension() == r.rank,
        ));
        entries.push(MinrankEntry {
            q,
            rank: r.rank,
            lower: r.lower,
            log_lower,
            upper: r.upper,
            searched: r.searched,
            witness: r.witness,
            factorization,
        });
    }
    Ok(MinrankReport {
        label: g.label().unwrap_or("G").to_string(),
        n: g.n(),
        entries,
        checks,
    })
}

impl Report for MinrankReport {
    fn checks(&self) -> Vec<Check> {
        self.checks.clone()
    }

    fn rows(&self) -> Vec<(String, String)> {
        let mut rows = vec![("graph".into(), self.label.clone()), ("n".into(), self.n.to_string())];
        for e in &self.entries {
            rows.push((
                format!("minrank over GF({})", e.q),
                format!(
                    "{} (bounds {}..{}, {})",
                    e.rank,
                    e.lower,
                    e.upper,
                    if e.searched { "exhaustive search" } else { "bounds meet" }
                ),
            ));
            let matrix: Vec<String> = e
                .witness
                .entries
                .iter()
                .map(|row| row.iter().map(u64::to_string).collect::<Vec<_>>().join(""))
                .collect();
            rows.push((format!("witness over GF({})", e.q), matrix.join(" ")));
        }
        rows
    }
}

// ---------------------------------------------------------------- gale

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaleReport {
    pub family: FamilyKind,
    pub d: usize,
    pub s: usize,
    pub certificate: HemisphereCertificate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<HemisphereBounds>,
}

pub fn cmd_gale(kind: FamilyKind, d: usize, s: usize, limits: &Limits, transcript: bool) -> Result<GaleReport> {
    let family = kind.build(d, s)?;
    let cert = verify_hemisphere_capped(&gale_points(d, s)?, &family, limits.hemisphere_max_d)?;
    let bounds = hemisphere_lower_bounds(&cert).ok();
    Ok(GaleReport {
        family: kind,
        d,
        s,
        certificate: if transcript { cert } else { cert.without_transcript() },
        bounds,
    })
}

impl Report for GaleReport {
    fn checks(&self) -> Vec<Check> {
        vec![check(
            "every open hemisphere contains a member set",
            self.certificate.verified,
        )]
    }

    fn rows(&self) -> Vec<(String, String)> {
        let c = &self.certificate;
        let mut rows = vec![
            ("family".into(), format!("{}({},{})", self.family, self.d, self.s)),
            ("ambient dimension m".into(), c.points.m.to_string()),
            ("t".into(), c.t.to_string()),
            ("verified".into(), c.verified.to_string()),
            ("linear programs".into(), c.lp_calls.to_string()),
        ];
        if !c.violations.is_empty() {
            rows.push(("violations".into(), c.violations.join(" ")));
        }
        if let Some(b) = &self.bounds {
            rows.push(("lower bounds".into(), b.to_string()));
        }
        rows
    }
}

// ---------------------------------------------------------------- borsuk

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BorsukReport {
    pub net: BorsukNet,
    pub vertices: usize,
    pub edges: usize,
    pub xi_real_lower: usize,
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chromatic_number: Option<usize>,
    pub checks: Vec<Check>,
}

pub fn cmd_borsuk(d: usize, eps: f64, seed: u64, limits: &Limits) -> Result<BorsukReport> {
    let net = borsuk_net(d, eps, seed)?;
    let graph = borsuk_graph(&net, eps)?;
    let n = graph.graph.n();
    let chi = if n <= limits.chromatic_max_n.min(64) {
        Some(chromatic_number_capped(&graph.graph, limits.chromatic_max_n)?.0)
    } else {
        None
    };
    let mut checks = vec![
        check("pairwise distances >= eps", net.is_packing()),
        check("final probe round found no uncovered point", net.probe_rounds >= 1),
    ];
    if let Some(chi) = chi {
        // the chromatic number bounds the orthogonality dimension of the complement
        checks.push(check("chromatic number >= d + 1", chi > d));
    }
    Ok(BorsukReport {
        vertices: n,
        edges: graph.graph.edge_count(),
        xi_real_lower: graph.xi_real_lower,
        provenance: graph.provenance,
        chromatic_number: chi,
        net,
        checks,
    })
}

impl Report for BorsukReport {
    fn checks(&self) -> Vec<Check> {
        self.checks.clone()
    }

    fn rows(&self) -> Vec<(String, String)> {
        vec![
            ("d".into(), self.net.d.to_string()),
            ("eps".into(), self.net.eps.to_string()),
            ("seed".into(), self.net.seed.to_string()),
            ("net points".into(), self.vertices.to_string()),
            ("points added by probes".into(), self.net.probe_additions.to_string()),
            ("edges".into(), self.edges.to_string()),
            ("xi_R(complement) >=".into(), self.xi_real_lower.to_string()),
            ("chromatic number".into(), opt(&self.chromatic_number)),
        ]
    }
}

// ---------------------------------------------------------------- capacity

/// `r` with `r^k <= a < (r + 1)^k`.
pub fn integer_root(a: u64, k: u32) -> u64 {
    let mut r = (a as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|p| p > a) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|p| p <= a) {
        r += 1;
    }
    r
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    pub name: String,
    #[serde(with = "crate::serde_util::rational")]
    pub value: Rational,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub label: String,
    pub n: usize,
    pub k: usize,
    /// `α(G^k)`; the capacity is at least its `k`-th root
    pub alpha_power: u64,
    /// `α(G^k)^(1/k)` as text, e.g. `5^(1/2)`
    pub lower: String,
    /// integers bracketing the lower bound: `floor <= α(G^k)^(1/k) <= ceil`
    pub lower_floor: u64,
    pub lower_ceil: u64,
    pub upper: Vec<UpperBound>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
}

pub fn cmd_capacity(g: &Graph, k: usize, fields: &[u64], limits: &Limits) -> Result<CapacityReport> {
    if k == 0 {
        return Err(Error::InvalidParameters("k must be at least 1".into()));
    }
    let n = g.n();
    let size = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    check_cap(
        "vertices of the strong power",
        usize::try_from(size).unwrap_or(usize::MAX),
        limits.alpha_max_n.min(64),
    )?;
    let power = g.power(k)?;
    let a = independence_number_capped(&power, limits.alpha_max_n)? as u64;
    let r = integer_root(a, k as u32);
    let exact_root = r.pow(k as u32) == a;
    let lower = if k == 1 { a.to_string() } else { format!("{a}^(1/{k})") };

    let mut upper = Vec::new();
    let mut notes = Vec::new();
    let (chi_bar, _) = chromatic_number_capped(&g.complement(), limits.chromatic_max_n)?;
    upper.push(UpperBound {
        name: "clique cover number".into(),
        value: int(chi_bar as i64),
        provenance: "orthogonality dimension over any field is at most the clique cover number".into(),
    });
    if n <= limits.fractional_chromatic_max_n {
        let v = fractional_chromatic_capped(&g.complement(), limits.fractional_chromatic_max_n)?.value;
        upper.push(UpperBound {
            name: "fractional clique cover number".into(),
            value: v,
            provenance: "fractional chromatic number of the complement".into(),
        });
    } else {
        notes.push("fractional clique cover number skipped: above cap".into());
    }
    if n <= limits.fstar_max_n {
        let v = fractional_invariant_capped(g, &CliqueCover, limits.fstar_max_n)?.value;
        upper.push(UpperBound {
            name: "fractional clique cover invariant f*".into(),
            value: v,
            provenance: "fractional variant of a sub-multiplicative upper bound on alpha".into(),
        });
    } else {
        notes.push("f* skipped: above the subset enumeration cap".into());
    }
    for &q in fields {
        match minrank_finite_capped(g, q, limits.minrank_max_free) {
            Ok(r) => upper.push(UpperBound {
                name: format!("minrank over GF({q})"),
                value: int(r.rank as i64),
                provenance: "minrank is a sub-multiplicative upper bound on alpha".into(),
            }),
            Err(Error::TooLarge { .. }) => {
                notes.push(format!("minrank over GF({q}) skipped: above the free-entry cap"))
            }
            Err(e) => return Err(e),
        }
    }

    let a_rat = int(a as i64);
    let mut checks: Vec<Check> = upper
        .iter()
        .map(|u| {
            check(
                format!("alpha(G^{k}) <= ({})^{k}", u.name),
                a_rat <= Pow::pow(&u.value, k as u32),
            )
        })
        .collect();
    checks.push(check(
        "integer root bracket",
        r.pow(k as u32) <= a && (r + 1).pow(k as u32) > a,
    ));
    let _ = Rational::one();
    Ok(CapacityReport {
        label: g.label().unwrap_or("G").to_string(),
        n,
        k,
        alpha_power: a,
        lower,
        lower_floor: r,
        lower_ceil: if exact_root { r } else { r + 1 },
        upper,
        notes,
        checks,
    })
}

impl Report for CapacityReport {
    fn checks(&self) -> Vec<Check> {
        self.checks.clone()
    }

    fn rows(&self) -> Vec<(String, String)> {
        let mut rows = vec![
            ("graph".into(), self.label.clone()),
            ("n".into(), self.n.to_string()),
            ("k".into(), self.k.to_string()),
            (format!("alpha(G^{})", self.k), self.alpha_power.to_string()),
            (
                "capacity >=".into(),
                if self.lower_floor == self.lower_ceil {
                    format!("{} = {}", self.lower, self.lower_floor)
                } else {
                    format!("{} in [{}, {}]", self.lower, self.lower_floor, self.lower_ceil)
                },
            ),
        ];
        for u in &self.upper {
            rows.push((format!("capacity <= {}", u.name), fmt_rational(&u.value)));
        }
        for n in &self.notes {
            rows.push(("note".into(), n.clone()));
        }
        rows
    }
}

// ---------------------------------------------------------------- comm

fn log2_ceiling(x: usize) -> usize {
    // smallest b with 2^b >= x; 0 for x <= 1
    (0..).find(|&b| (1u128 << b) >= x as u128).expect("terminates")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommReport {
    pub d: usize,
    pub s: usize,
    pub chromatic_number: usize,
    pub classical_bits: usize,
    pub quantum_lower_bits: usize,
    pub quantum_upper_bits: usize,
    pub xi_c_lower: usize,
    pub xi_r_upper: usize,
    pub checks: Vec<Check>,
}

pub fn cmd_comm(d: usize, s: usize, limits: &Limits) -> Result<CommReport> {
    let family = kneser_family(d, s)?;
    let report = bound_report(
        &family,
        &BoundOptions {
            limits: limits.clone(),
            fields: Vec::new(),
            ..BoundOptions::default()
        },
    )?;
    let palette = d - 2 * s + 2;
    let chi = report.chi_bar.value;
    let classical = log2_ceiling(chi);
    let lo = log2_ceiling(report.xi_c_lower.value);
    let hi = log2_ceiling(report.xi_r_upper.value);
    let checks = vec![
        check("chromatic number of K(d,s) is exact", report.chi_bar_exact),
        check("chromatic number equals d-2s+2", chi == palette),
        check(
            "classical one-round bits = ceil(log2(d-2s+2))",
            classical == log2_ceiling(palette),
        ),
        check("quantum bracket lower <= upper", lo <= hi),
        check("quantum bracket width <= 1 bit", hi - lo <= 1),
        check("bound report checks held", report.all_held()),
    ];
    Ok(CommReport {
        d,
        s,
        chromatic_number: chi,
        classical_bits: classical,
        quantum_lower_bits: lo,
        quantum_upper_bits: hi,
        xi_c_lower: report.xi_c_lower.value,
        xi_r_upper: report.xi_r_upper.value,
        checks,
    })
}

impl Report for CommReport {
    fn checks(&self) -> Vec<Check> {
        self.checks.clone()
    }

    fn rows(&self) -> Vec<(String, String)> {
        vec![
            ("instance".into(), format!("K({},{})", self.d, self.s)),
            ("chromatic number".into(), self.chromatic_number.to_string()),
            ("classical one-round bits".into(), self.classical_bits.to_string()),
            (
                "quantum one-round bits".into(),
                format!("[{}, {}]", self.quantum_lower_bits, self.quantum_upper_bits),
            ),
            ("xi_C lower".into(), self.xi_c_lower.to_string()),
            ("xi_R upper".into(), self.xi_r_upper.to_string()),
        ]
    }
}

// ---------------------------------------------------------------- desk instance d = (2 + eps) s

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeskInstanceReport {
    pub s: usize,
    #[serde(with = "crate::serde_util::rational")]
    pub eps: Rational,
    pub d: usize,
    pub n: usize,
    pub log2_n: f64,
    /// `χ_f(K(d,s))`, which bounds `ξ*` and `minrk*` of the complement
    #[serde(with = "crate::serde_util::rational")]
    pub fractional_chromatic: Rational,
    /// `χ̄*` of the complement when small enough to enumerate
    #[serde(default, with = "opt_rational", skip_serializing_if = "Option::is_none")]
    pub clique_cover_fstar: Option<Rational>,
    pub xi_r: usize,
    pub xi_c_lower: usize,
    pub minrk_r_lower: usize,
    pub bounds: BoundReport,
    pub checks: Vec<Check>,
}

pub fn cmd_desk_instance(s: usize, eps: &Rational, limits: &Limits) -> Result<DeskInstanceReport> {
    if s == 0 || *eps <= int(0) {
        return Err(Error::InvalidParameters("need s >= 1 and eps > 0".into()));
    }
    let d_rat = (int(2) + eps) * int(s as i64);
    if !d_rat.is_integer() {
        return Err(Error::InvalidParameters(format!(
            "d = (2 + {}) * {s} = {} is not an integer",
            fmt_rational(eps),
            fmt_rational(&d_rat)
        )));
    }
    let d = d_rat
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::InvalidParameters("d out of range".into()))?;
    let family = kneser_family(d, s)?;
    let kf = generalized_kneser_graph(&family)?;
    let n = kf.n();
    let chi_f = fractional_chromatic_capped(&kf, limits.fractional_chromatic_max_n)?.value;
    let g = kf.complement();
    let fstar = if n <= limits.fstar_max_n {
        Some(fractional_invariant_capped(&g, &CliqueCover, limits.fstar_max_n)?.value)
    } else {
        None
    };
    let bounds = bound_report(
        &family,
        &BoundOptions {
            limits: limits.clone(),
            ..BoundOptions::default()
        },
    )?;
    let target = eps * int(s as i64) + int(2);
    let two_plus_eps = int(2) + eps;
    let mut checks = vec![
        check(
            "fractional chromatic number of K(d,s) = d/s",
            chi_f == Rational::new((d as i64).into(), (s as i64).into()),
        ),
        check("fractional chromatic number of K(d,s) = 2 + eps", chi_f == two_plus_eps),
        check("xi_R of the complement is pinned down", bounds.xi_r_exact().is_some()),
        check(
            "xi_R of the complement = d-2s+2 = eps*s+2",
            bounds
                .xi_r_exact()
                .is_some_and(|x| int(x as i64) == target && x == d - 2 * s + 2),
        ),
        check("bound report checks held", bounds.all_held()),
    ];
    if let Some(f) = &fstar {
        checks.push(check(
            "f* (clique cover) of the complement <= 2 + eps",
            *f <= two_plus_eps,
        ));
    }
    Ok(DeskInstanceReport {
        s,
        eps: eps.clone(),
        d,
        n,
        log2_n: (n as f64).log2(),
        fractional_chromatic: chi_f,
        clique_cover_fstar: fstar,
        xi_r: bounds.xi_r_upper.value,
        xi_c_lower: bounds.xi_c_lower.value,
        minrk_r_lower: bounds.minrk_r_lower.value,
        bounds,
        checks,
    })
}

impl Report for DeskInstanceReport {
    fn checks(&self) -> Vec<Check> {
        self.checks.clone()
    }

    fn rows(&self) -> Vec<(String, String)> {
        let mut rows = vec![
            ("s".into(), self.s.to_string()),
            ("eps".into(), fmt_rational(&self.eps)),
            ("d".into(), self.d.to_string()),
            ("n = C(d,s)".into(), self.n.to_string()),
            ("log2 n".into(), format!("{:.4}", self.log2_n)),
            (
                "xi*_R, minrk*_F <= chi_f(K(d,s))".into(),
                fmt_rational(&self.fractional_chromatic),
            ),
        ];
        if let Some(f) = &self.clique_cover_fstar {
            rows.push(("clique cover f* of the complement".into(), fmt_rational(f)));
        }
        rows.extend([
            ("xi_R(complement)".into(), self.xi_r.to_string()),
            ("xi_C(complement) >=".into(), self.xi_c_lower.to_string()),
            ("minrk_R(complement) >=".into(), self.minrk_r_lower.to_string()),
        ]);
        rows
    }
}
