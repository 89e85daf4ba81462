use serde::{Deserialize, Serialize};

use super::field::check_prime;
use super::minrank::{log_ceiling, minrank_finite_capped};
use crate::chromatic::{
    chromatic_number_capped, greedy_coloring, min_element_coloring, verify_coloring, ColoringCertificate,
};
use crate::config::Limits;
use crate::defect::{cd2, DefectResult};
use crate::error::{Error, Result};
use crate::geometry::{hemisphere_lower_bounds, sqrt_half_ceiling, HemisphereBounds, HemisphereCertificate};
use crate::graph::{clique_number, generalized_kneser_graph, SetSystem};

/// A bound together with the result it comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: usize,
    pub provenance: String,
}

impl Bound {
    fn new(value: usize, provenance: impl Into<String>) -> Self {
        Bound {
            value,
            provenance: provenance.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinrankBracket {
    pub q: u64,
    pub lower: Bound,
    pub upper: Bound,
    pub exact: Option<usize>,
}

impl MinrankBracket {
    /// `"k"` when pinned down, `"lo..hi"` otherwise.
    pub fn render(&self) -> String {
        match self.exact {
            Some(k) => k.to_string(),
            None => format!("{}..{}", self.lower.value, self.upper.value),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub held: bool,
}

/// Bracket for the orthogonality dimension and minrank of the complement
/// of `K(F)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub label: String,
    pub d: usize,
    /// vertices of `K(F)`, i.e. sets in the family
    pub n: usize,
    /// `α` of the complement, skipped above the exact cap
    pub alpha: Option<Bound>,
    /// `χ(K(F))`, the clique cover number of the complement
    pub chi_bar: Bound,
    pub chi_bar_exact: bool,
    pub cd2: Bound,
    pub hemisphere: Option<HemisphereBounds>,
    pub xi_r_lower: Bound,
    pub xi_r_upper: Bound,
    pub xi_c_lower: Bound,
    pub minrk_r_lower: Bound,
    pub minrk_q: Vec<MinrankBracket>,
    pub coloring: ColoringCertificate,
    pub defect: DefectResult,
    pub checks: Vec<Check>,
}

impl BoundReport {
    pub fn all_held(&self) -> bool {
        self.checks.iter().all(|c| c.held)
    }

    pub fn xi_r_exact(&self) -> Option<usize> {
        (self.xi_r_lower.value == self.xi_r_upper.value).then_some(self.xi_r_lower.value)
    }
}

#[derive(Clone, Debug)]
pub struct BoundOptions<'a> {
    pub hemisphere: Option<&'a HemisphereCertificate>,
    pub fields: Vec<u64>,
    pub limits: Limits,
}

impl Default for BoundOptions<'_> {
    fn default() -> Self {
        BoundOptions {
            hemisphere: None,
            fields: vec![2],
            limits: Limits::default(),
        }
    }
}

const DEFECT: &str = "2-colorability defect bound";

pub fn bound_report(family: &SetSystem, options: &BoundOptions<'_>) -> Result<BoundReport> {
    let limits = &options.limits;
    limits.validate()?;
    for &q in &options.fields {
        check_prime(q)?;
    }
    let kf = generalized_kneser_graph(family)?;
    let n = kf.n();
    let label = family
        .label()
        .map_or_else(|| format!("F(d={},|F|={n})", family.d()), str::to_string);

    let defect = cd2(family);
    let cd2_bound = Bound::new(defect.value, "exact 2-colorability defect (search over white sets)");

    let hemisphere = match options.hemisphere {
        Some(cert) => {
            if cert.family != *family {
                return Err(Error::Rejected(
                    "hemisphere certificate is for a different family".into(),
                ));
            }
            Some(hemisphere_lower_bounds(cert)?)
        }
        None => None,
    };
    let t = hemisphere.as_ref().map_or(0, |h| h.t);

    // independence number of the complement = clique number of K(F)
    let alpha = if n <= limits.alpha_max_n.min(64) {
        Some(Bound::new(
            clique_number(&kf)?,
            "independence number of the complement (exact branch and bound)",
        ))
    } else {
        None
    };

    let mut lower_terms = vec![(defect.value, DEFECT.to_string())];
    if let Some(h) = &hemisphere {
        lower_terms.push((h.xi_real, "hemisphere covering bound".into()));
    }
    if let Some(a) = &alpha {
        lower_terms.push((a.value, "independence number lower bound".into()));
    }
    let (lo, lo_src) = lower_terms.iter().max_by_key(|(v, _)| *v).cloned().expect("nonempty");
    let xi_r_lower = Bound::new(
        lo.max(1),
        format!("max of defect / hemisphere / independence bounds; attained by {lo_src}"),
    );

    // clique cover of the complement = proper coloring of K(F)
    let greedy = greedy_coloring(&kf);
    let min_elem = min_element_coloring(family);
    let mut coloring = if min_elem.palette <= greedy.palette {
        min_elem
    } else {
        greedy
    };
    let mut chi_bar_exact = coloring.palette == xi_r_lower.value;
    let mut chi_lower = xi_r_lower.value;
    if !chi_bar_exact && n <= limits.chromatic_max_n.min(64) {
        let (chi, cert) = chromatic_number_capped(&kf, limits.chromatic_max_n)?;
        coloring = cert;
        chi_bar_exact = true;
        chi_lower = chi;
    }
    if chi_bar_exact {
        chi_lower = coloring.palette;
    }
    let chi_bar = Bound::new(
        coloring.palette,
        if chi_bar_exact {
            "clique cover number of the complement (exact: coloring meets a lower bound)"
        } else {
            "clique cover number of the complement (upper bound from a proper coloring)"
        },
    );
    let xi_r_upper = Bound::new(
        coloring.palette,
        "orthogonality dimension is at most the clique cover number",
    );

    let c_base = defect.value.max(t);
    let xi_c_lower = Bound::new(
        c_base.div_ceil(2).max(1),
        "complex defect / hemisphere bound: half of max(cd2, t), rounded up by integrality",
    );
    let minrk_r_lower = Bound::new(
        sqrt_half_ceiling(c_base),
        "real minrank bound: square root of half of max(cd2, t), rounded up by integrality",
    );

    let mut minrk_q = Vec::new();
    for &q in &options.fields {
        let log_lower = log_ceiling(chi_lower, q);
        let alpha_lower = alpha.as_ref().map_or(1, |a| a.value);
        let lower = Bound::new(
            log_lower.max(alpha_lower),
            "max of independence number and log_q of the clique cover number",
        );
        let upper = Bound::new(coloring.palette, "minrank is at most the clique cover number");
        let free = 2 * (n * (n - 1) / 2 - kf.edge_count());
        let exact = if lower.value == upper.value {
            Some(lower.value)
        } else if n <= 64 && free <= limits.minrank_max_free {
            Some(minrank_finite_capped(&kf.complement(), q, limits.minrank_max_free)?.rank)
        } else {
            None
        };
        minrk_q.push(MinrankBracket { q, lower, upper, exact });
    }

    let mut checks = vec![
        Check {
            name: "coloring certificate is proper".into(),
            held: verify_coloring(&kf, &coloring),
        },
        Check {
            name: "defect witness verifies".into(),
            held: defect.verify(family),
        },
        Check {
            name: "xi_R lower <= xi_R upper".into(),
            held: xi_r_lower.value <= xi_r_upper.value,
        },
        Check {
            name: "xi_C lower <= xi_R upper".into(),
            held: xi_c_lower.value <= xi_r_upper.value,
        },
        Check {
            name: "minrk_R lower <= xi_R upper".into(),
            held: minrk_r_lower.value <= xi_r_upper.value,
        },
        Check {
            name: "all entries >= 1".into(),
            held: [&xi_r_lower, &xi_r_upper, &xi_c_lower, &minrk_r_lower, &chi_bar]
                .iter()
                .all(|b| b.value >= 1),
        },
    ];
    if let Some(a) = &alpha {
        checks.push(Check {
            name: "alpha <= clique cover number".into(),
            held: a.value <= chi_bar.value,
        });
    }
    if let Some(h) = &hemisphere {
        checks.push(Check {
            name: "hemisphere t <= xi_R upper".into(),
            held: h.t <= xi_r_upper.value,
        });
    }
    for b in &minrk_q {
        checks.push(Check {
            name: format!("minrank over GF({}) within its bracket", b.q),
            held: b.lower.value <= b.upper.value && b.exact.is_none_or(|k| b.lower.value <= k && k <= b.upper.value),
        });
    }

    Ok(BoundReport {
        label,
        d: family.d(),
        n,
        alpha,
        chi_bar,
        chi_bar_exact,
        cd2: cd2_bound,
        hemisphere,
        xi_r_lower,
        xi_r_upper,
        xi_c_lower,
        minrk_r_lower,
        minrk_q,
        coloring,
        defect,
        checks,
    })
}
