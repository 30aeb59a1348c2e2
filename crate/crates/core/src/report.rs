//! Term-level comparison of recomputed values against [`crate::fixtures`].

use serde::{Deserialize, Serialize};

use crate::diffpoly::{rat, DiffPoly, FieldRegistry, PowerProduct, Rational};
use crate::error::{Error, Result};
use crate::fixtures::{self, OperatorFixture, PolyFixture};
use crate::hierarchy::{
    conserved_density, flow_derivative, hamiltonian_flow_first, lax_flow_auto, primary_v3,
    second_order_form, to_primary_basis, HamiltonianDensity,
};
use crate::psido::{monomial_action, PsiDO};
use crate::roots::{nth_root, symmetrized_coefficients, LaxOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Match,
    Mismatch,
}

/// One monomial whose coefficients disagree. A zero coefficient means the
/// monomial is absent on that side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDiff {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<i32>,
    pub monomial: String,
    pub computed: String,
    pub reference: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub location: String,
    pub computed: String,
    pub reference: String,
    pub status: Status,
    pub terms_total: usize,
    pub terms_matching: usize,
    /// Monomials printed in the reference row.
    pub reference_terms: usize,
    /// Printed monomials whose coefficient is reproduced exactly.
    pub reference_terms_matching: usize,
    pub term_diffs: Vec<TermDiff>,
}

/// Outcome of an identity that certifies the computed side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub entries: Vec<ReportEntry>,
    pub oracles: Vec<OracleCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub entries: usize,
    pub matching: usize,
    pub mismatching: usize,
    pub terms_total: usize,
    pub terms_matching: usize,
    pub reference_terms: usize,
    pub reference_terms_matching: usize,
    pub oracles_passed: bool,
}

fn coeff_text(c: &Rational) -> String {
    c.to_string()
}

fn monomial_text(pp: &PowerProduct) -> String {
    pp.to_text()
}

fn reference_hits(computed: &DiffPoly, reference: &DiffPoly) -> (usize, usize) {
    let hits = reference
        .terms()
        .filter(|(pp, c)| computed.coeff(pp) == **c)
        .count();
    (reference.len(), hits)
}

impl ReportEntry {
    /// Compares two differential polynomials monomial by monomial.
    pub fn compare(location: &str, computed: &DiffPoly, reference: &DiffPoly) -> Self {
        let diffs: Vec<TermDiff> = computed
            .term_diff(reference)
            .into_iter()
            .map(|(pp, a, b)| TermDiff {
                degree: None,
                monomial: monomial_text(&pp),
                computed: coeff_text(&a),
                reference: coeff_text(&b),
            })
            .collect();
        let total = computed.union_len(reference);
        let (reference_terms, reference_terms_matching) = reference_hits(computed, reference);
        ReportEntry {
            location: location.to_string(),
            computed: computed.to_string(),
            reference: reference.to_string(),
            status: if diffs.is_empty() {
                Status::Match
            } else {
                Status::Mismatch
            },
            terms_total: total,
            terms_matching: total - diffs.len(),
            reference_terms,
            reference_terms_matching,
            term_diffs: diffs,
        }
    }

    /// Compares two operators degree by degree down to their common floor.
    pub fn compare_operators(location: &str, computed: &PsiDO, reference: &PsiDO) -> Self {
        let floor = computed.common_floor(reference);
        let keep = |d: i32| floor.is_none_or(|f| d >= f);
        let mut degrees: Vec<i32> = computed
            .terms()
            .map(|(d, _)| d)
            .chain(reference.terms().map(|(d, _)| d))
            .filter(|d| keep(*d))
            .collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        degrees.dedup();
        let mut diffs = Vec::new();
        let mut total = 0;
        let (mut reference_terms, mut reference_terms_matching) = (0, 0);
        for d in degrees {
            let a = computed.coeff(d);
            let b = reference.coeff(d);
            total += a.union_len(&b);
            let (r, m) = reference_hits(&a, &b);
            reference_terms += r;
            reference_terms_matching += m;
            diffs.extend(a.term_diff(&b).into_iter().map(|(pp, x, y)| TermDiff {
                degree: Some(d),
                monomial: monomial_text(&pp),
                computed: coeff_text(&x),
                reference: coeff_text(&y),
            }));
        }
        ReportEntry {
            location: location.to_string(),
            computed: computed.to_string(),
            reference: reference.to_string(),
            status: if diffs.is_empty() {
                Status::Match
            } else {
                Status::Mismatch
            },
            terms_total: total,
            terms_matching: total - diffs.len(),
            reference_terms,
            reference_terms_matching,
            term_diffs: diffs,
        }
    }

    pub fn is_match(&self) -> bool {
        self.status == Status::Match
    }
}

impl DiscrepancyReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, entry: ReportEntry) {
        self.entries.push(entry);
    }

    pub fn push_oracle(&mut self, name: &str, passed: bool) {
        self.oracles.push(OracleCheck {
            name: name.to_string(),
            passed,
        });
    }

    pub fn extend(&mut self, other: DiscrepancyReport) {
        self.entries.extend(other.entries);
        self.oracles.extend(other.oracles);
    }

    pub fn entry(&self, location: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.location == location)
    }

    /// Entries whose location starts with `prefix`.
    pub fn group<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a ReportEntry> + 'a {
        self.entries
            .iter()
            .filter(move |e| e.location.starts_with(prefix))
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.is_match())
    }

    pub fn is_clean(&self) -> bool {
        self.entries.iter().all(ReportEntry::is_match) && self.oracles.iter().all(|o| o.passed)
    }

    pub fn summary(&self) -> Summary {
        let matching = self.entries.iter().filter(|e| e.is_match()).count();
        Summary {
            entries: self.entries.len(),
            matching,
            mismatching: self.entries.len() - matching,
            terms_total: self.entries.iter().map(|e| e.terms_total).sum(),
            terms_matching: self.entries.iter().map(|e| e.terms_matching).sum(),
            reference_terms: self.entries.iter().map(|e| e.reference_terms).sum(),
            reference_terms_matching: self
                .entries
                .iter()
                .map(|e| e.reference_terms_matching)
                .sum(),
            oracles_passed: self.oracles.iter().all(|o| o.passed),
        }
    }

    /// JSON document with entries, oracles and a summary block.
    pub fn to_json_value(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["summary"] = serde_json::to_value(self.summary()).expect("summary serializes");
        v
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("report serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            entries: Vec<ReportEntry>,
            #[serde(default)]
            oracles: Vec<OracleCheck>,
        }
        let doc: Doc = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        Ok(DiscrepancyReport {
            entries: doc.entries,
            oracles: doc.oracles,
        })
    }

    /// One line per entry plus an indented line per differing term.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for o in &self.oracles {
            let mark = if o.passed { "ok" } else { "FAILED" };
            out.push_str(&format!("oracle {}: {mark}\n", o.name));
        }
        for e in &self.entries {
            let mark = match e.status {
                Status::Match => "match",
                Status::Mismatch => "MISMATCH",
            };
            out.push_str(&format!(
                "{}: {mark} ({}/{} terms)\n",
                e.location, e.terms_matching, e.terms_total
            ));
            for d in &e.term_diffs {
                let at = d.degree.map(|k| format!("[D^{k}] ")).unwrap_or_default();
                out.push_str(&format!(
                    "    {at}{}: computed {}, reference {}\n",
                    d.monomial, d.computed, d.reference
                ));
            }
        }
        let s = self.summary();
        out.push_str(&format!(
            "{} of {} entries match; {} of {} terms match\n",
            s.matching, s.entries, s.terms_matching, s.terms_total
        ));
        out
    }
}

/// Pairs `computed[i]` with `reference[i]` under `locations[i]`.
pub fn verify_table(
    locations: &[&str],
    computed: &[DiffPoly],
    reference: &[DiffPoly],
) -> Result<DiscrepancyReport> {
    if computed.len() != reference.len() || locations.len() != computed.len() {
        return Err(Error::InvalidArgument(format!(
            "table lengths differ: {} locations, {} computed, {} reference",
            locations.len(),
            computed.len(),
            reference.len()
        )));
    }
    let mut report = DiscrepancyReport::new();
    for ((loc, c), r) in locations.iter().zip(computed).zip(reference) {
        report.push(ReportEntry::compare(loc, c, r));
    }
    Ok(report)
}

fn parse_fixture(f: &PolyFixture) -> DiffPoly {
    f.parse()
        .unwrap_or_else(|e| panic!("fixture {} does not parse: {e}", f.location))
}

fn parse_operator_fixture(f: &OperatorFixture) -> PsiDO {
    f.parse()
        .unwrap_or_else(|e| panic!("fixture {} does not parse: {e}", f.location))
}

/// Root depth used for the square-root table; covers `b_10`.
pub const SL2_ROOT_DEPTH: usize = 9;
/// Root depth used for the cube-root table; covers `b_8`.
pub const SL3_ROOT_DEPTH: usize = 7;

/// `sl2` and `sl3` root rows and the symmetrized rows built from them.
pub fn verify_root_tables() -> DiscrepancyReport {
    let mut report = DiscrepancyReport::new();
    for (lax, depth, b_rows, a_rows, name) in [
        (
            LaxOperator::sl2(),
            SL2_ROOT_DEPTH,
            fixtures::SL2_ROOT,
            fixtures::SL2_SYMMETRIZED,
            "sl2",
        ),
        (
            LaxOperator::sl3(),
            SL3_ROOT_DEPTH,
            fixtures::SL3_ROOT,
            fixtures::SL3_SYMMETRIZED,
            "sl3",
        ),
    ] {
        // a_12 needs b up to b_12
        let a_max = a_rows.iter().map(|(i, _)| *i).max().unwrap_or(0);
        let depth = depth.max(a_max.saturating_sub(1));
        let root = nth_root(&lax, depth).expect("depth is positive");
        report.push_oracle(
            &format!("{name}.recomposition.depth{depth}"),
            root.recomposition_residual(&lax).is_zero(),
        );
        for (j, row) in b_rows.iter().enumerate() {
            let computed = root.b(j + 2).expect("within depth");
            report.push(ReportEntry::compare(
                row.location,
                computed,
                &parse_fixture(row),
            ));
        }
        let a = symmetrized_coefficients(root.b_table(), a_max + 1).expect("within depth");
        for (i, row) in a_rows {
            report.push(ReportEntry::compare(
                row.location,
                &a[*i],
                &parse_fixture(row),
            ));
        }
    }
    report
}

/// KdV and Boussinesq flows, the primary basis and the second-order form.
pub fn verify_flow_tables() -> DiscrepancyReport {
    let mut report = DiscrepancyReport::new();
    let sl2 = LaxOperator::sl2();
    let t = |k: u32| lax_flow_auto(&sl2, k).expect("sl2 flows are local");
    let kdv: Vec<_> = fixtures::SL2_FLOWS
        .iter()
        .map(|(k, _)| (*k, t(*k)))
        .collect();
    for ((_, row), (_, flow)) in fixtures::SL2_FLOWS.iter().zip(&kdv) {
        let u_t = flow.rhs("u").expect("u equation");
        report.push(ReportEntry::compare(row.location, u_t, &parse_fixture(row)));
    }
    report.push_oracle(
        "sl2.even_flows_vanish",
        [2, 4, 6].iter().all(|&k| t(k).is_zero()),
    );
    let res_route = kdv.iter().all(|(k, flow)| {
        let res = conserved_density(&sl2, *k, *k as usize).expect("depth");
        flow.rhs("u") == Some(&res.total_derivative().scale(&rat(2, 1)))
    });
    report.push_oracle("sl2.flow_equals_twice_residue_derivative", res_route);

    let sl3 = LaxOperator::sl3();
    let v3 = primary_v3();
    for (k, u2_row, v3_row) in fixtures::SL3_FLOWS {
        let flow = lax_flow_auto(&sl3, *k).expect("sl3 flows are local");
        let u2_t = flow.rhs("u2").expect("u2 equation");
        let v3_t = flow_derivative(&v3, &flow).expect("fields present");
        report.push(ReportEntry::compare(
            u2_row.location,
            u2_t,
            &parse_fixture(u2_row),
        ));
        report.push(ReportEntry::compare(
            v3_row.location,
            &v3_t,
            &parse_fixture(v3_row),
        ));
    }
    for (k, u2_row, v3_row) in fixtures::SL3_PRIMARY_FLOWS {
        let flow = to_primary_basis(&lax_flow_auto(&sl3, *k).expect("local"))
            .expect("sl3 flows have a primary basis");
        for row in [u2_row, v3_row] {
            let field = row.location.rsplit('.').next().expect("field suffix");
            let rhs = flow.rhs(field).expect("equation present");
            report.push(ReportEntry::compare(row.location, rhs, &parse_fixture(row)));
        }
    }
    let t2 = to_primary_basis(&lax_flow_auto(&sl3, 2).expect("local")).expect("sl3");
    let second = second_order_form(&t2).expect("v3 drops out at t2");
    let row = &fixtures::SL3_SECOND_ORDER;
    report.push(ReportEntry::compare(
        row.location,
        &second,
        &parse_fixture(row),
    ));

    let row = &fixtures::SL2_HAMILTONIAN_H3;
    let h = hamiltonian_flow_first(&HamiltonianDensity::kdv_h3());
    report.push(ReportEntry::compare(row.location, &h, &parse_fixture(row)));
    report
}

/// `∂^n ∘ u` expansions.
pub fn verify_leibniz_tables() -> DiscrepancyReport {
    let mut report = DiscrepancyReport::new();
    let u = FieldRegistry::sl2().field("u").expect("u").poly();
    for row in fixtures::LEIBNIZ {
        let computed = monomial_action(row.power, &u, row.floor).expect("floor given for n < 0");
        let reference = parse_operator_fixture(row);
        report.push(ReportEntry::compare_operators(
            row.location,
            &computed,
            &reference,
        ));
    }
    // ∂^n ∘ ∂^{-n} ∘ u = u identifies the computed side independently
    let inverse_ok = (1..=3).all(|n| {
        let back = PsiDO::d(n).compose(&monomial_action(-n, &u, Some(-n - 4)).expect("floor"));
        back.truncate(-4)
            .agrees_above(&PsiDO::constant(u.clone()), -4)
    });
    report.push_oracle("leibniz.inverse_round_trip", inverse_ok);
    report
}

/// Every fixture group.
pub fn verify_all() -> DiscrepancyReport {
    let mut report = verify_root_tables();
    report.extend(verify_flow_tables());
    report.extend(verify_leibniz_tables());
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2(src: &str) -> DiffPoly {
        DiffPoly::parse(src, &FieldRegistry::sl2()).unwrap()
    }

    #[test]
    fn identical_tables_have_no_discrepancies() {
        let t = vec![sl2("u/2"), sl2("-u'/4")];
        let r = verify_table(&["a", "b"], &t, &t).unwrap();
        assert_eq!(r.mismatches().count(), 0);
        assert!(r.is_clean());
    }

    #[test]
    fn differing_terms_are_listed() {
        let r = verify_table(&["x"], &[sl2("u/2 + u'")], &[sl2("u/2 + 2 u' + u''")]).unwrap();
        let e = r.entry("x").unwrap();
        assert_eq!(e.status, Status::Mismatch);
        assert_eq!(e.terms_total, 3);
        assert_eq!(e.terms_matching, 1);
        assert_eq!((e.reference_terms, e.reference_terms_matching), (3, 1));
        assert_eq!(e.term_diffs.len(), 2);
        assert_eq!(e.term_diffs[0].monomial, "u'");
        assert_eq!(e.term_diffs[0].computed, "1");
        assert_eq!(e.term_diffs[0].reference, "2");
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(verify_table(&["a"], &[sl2("u")], &[]).is_err());
    }

    #[test]
    fn empty_report() {
        let r = verify_table(&[], &[], &[]).unwrap();
        assert!(r.entries.is_empty());
        assert_eq!(r.summary().entries, 0);
    }

    #[test]
    fn json_round_trip() {
        let r = verify_table(&["x"], &[sl2("u")], &[sl2("2 u")]).unwrap();
        let back = DiscrepancyReport::from_json_str(&r.to_json_pretty()).unwrap();
        assert_eq!(back, r);
        let v = r.to_json_value();
        assert_eq!(v["entries"][0]["status"], "mismatch");
        assert_eq!(v["summary"]["mismatching"], 1);
    }

    #[test]
    fn operator_comparison_respects_floor() {
        let reg = FieldRegistry::sl2();
        let a = PsiDO::parse("u D^-1 - u' D^-2", &reg, Some(-2)).unwrap();
        let b = PsiDO::parse("u D^-1 - u' D^-2 + u'' D^-3", &reg, Some(-3)).unwrap();
        let e = ReportEntry::compare_operators("op", &a, &b);
        assert!(e.is_match());
        let c = PsiDO::parse("u D^-1 + u' D^-2", &reg, Some(-2)).unwrap();
        let e = ReportEntry::compare_operators("op", &a, &c);
        assert_eq!(e.term_diffs.len(), 1);
        assert_eq!(e.term_diffs[0].degree, Some(-2));
    }
}
