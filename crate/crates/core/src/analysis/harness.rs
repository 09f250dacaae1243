use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::factorize::{
    factorizations, irreducible_divisors_by_scan, is_irreducible, is_prime, PrimeVerdict,
};
use crate::rings::{divisors, gauge_u64, is_normal, nonunit_reps_up_to, Ring};
use crate::tau::{
    build_tau_graphs, condition_witness, tau_divides, ConditionVariant, ConditionVerdict,
    TauGraphs, TauRelation,
};

use super::{
    degrees_at, is_complete_undirected, is_connected_undirected, Degrees, DigraphPredicates,
};

/// Largest bound used for the bounded primality checks inside the harness.
const PRIME_BOUND_CAP: u64 = 36;
/// Largest gauge searched for Condition (**) witnesses inside the harness.
const CONDITION_BOUND_CAP: u64 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementVerdict {
    /// Graph predicates hold and nothing blocks the converse.
    Consistent,
    /// A graph predicate implied by unique factorization fails.
    NonUfdWitnessed,
    /// Graph predicates hold, but a Condition (**) witness means they do not
    /// imply unique factorization.
    InconclusiveConditionFails,
    Anomaly(String),
}

impl fmt::Display for ElementVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementVerdict::Consistent => f.write_str("consistent"),
            ElementVerdict::NonUfdWitnessed => f.write_str("non-UFD witnessed"),
            ElementVerdict::InconclusiveConditionFails => {
                f.write_str("inconclusive: Condition (**) fails")
            }
            ElementVerdict::Anomaly(d) => write!(f, "anomaly: {d}"),
        }
    }
}

impl Serialize for ElementVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BackendClass {
    /// Every sampled check is consistent with unique factorization.
    UfdConsistent,
    NonUfdWitnessed,
    InconclusiveConditionFails,
    /// Every τ-graph is finite and matches the divisor census.
    FiniteGraphs,
    Anomaly,
}

impl fmt::Display for BackendClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendClass::UfdConsistent => "UFD-consistent",
            BackendClass::NonUfdWitnessed => "non-UFD witnessed",
            BackendClass::InconclusiveConditionFails => "inconclusive: Condition (**) fails",
            BackendClass::FiniteGraphs => "all graphs finite, census consistent",
            BackendClass::Anomaly => "anomaly",
        })
    }
}

impl Serialize for BackendClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementRecord {
    pub element: String,
    pub vertices: usize,
    pub directed_edges: usize,
    pub undirected_edges: usize,
    pub max_indegl: usize,
    pub max_outdegl: usize,
    pub max_degl: usize,
    pub directed: DigraphPredicates,
    pub complete_undirected: bool,
    pub connected_undirected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census_vertices: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniqueness_violated: Option<bool>,
    pub verdict: ElementVerdict,
}

impl ElementRecord {
    /// The graph-level consequences of unique factorization: `Γ_τ(x)` a
    /// tournament and `G_τ(x)` complete.
    pub fn graph_predicates_hold(&self) -> bool {
        self.directed.tournament && self.complete_undirected
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeCheck {
    pub atom: String,
    pub bound: u64,
    /// `(a, b)` with `p | ab`, `p ∤ a`, `p ∤ b`.
    pub counterexample: Option<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub classification: BackendClass,
    pub elements: usize,
    pub max_vertex_count: usize,
    pub anomalies: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniqueness_witness: Option<(String, Vec<String>)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub prime_checks: Vec<PrimeCheck>,
    /// `(a, r, r′)` with `a·r = r′·a`, `r ≁ r′`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_witness: Option<(String, String, String)>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HarnessReport {
    pub harness: String,
    pub backend: String,
    pub relation: String,
    pub gauge_bound: u64,
    pub records: Vec<ElementRecord>,
    pub summary: Summary,
}

impl HarnessReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Human-readable table followed by the summary.
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{} harness: backend {}, relation {}, gauge bound {}\n",
            self.harness, self.backend, self.relation, self.gauge_bound
        );
        out += &format!(
            "{:<16} {:>4} {:>5} {:>5} {:>4} {:>4} {:>4}  {:<5} {:<5} {:<5} {:<5}  verdict\n",
            "element", "V", "E(Γ)", "E(G)", "in", "out", "deg", "tour", "unil", "weak", "compl"
        );
        let yn = |b: bool| if b { "yes" } else { "no" };
        for r in &self.records {
            out += &format!(
                "{:<16} {:>4} {:>5} {:>5} {:>4} {:>4} {:>4}  {:<5} {:<5} {:<5} {:<5}  {}\n",
                r.element,
                r.vertices,
                r.directed_edges,
                r.undirected_edges,
                r.max_indegl,
                r.max_outdegl,
                r.max_degl,
                yn(r.directed.tournament),
                yn(r.directed.unilaterally_connected),
                yn(r.directed.weakly_connected),
                yn(r.complete_undirected),
                r.verdict
            );
        }
        let s = &self.summary;
        out += &format!("classification: {}\n", s.classification);
        out += &format!(
            "elements: {}, max vertex count: {}\n",
            s.elements, s.max_vertex_count
        );
        if let Some(w) = &s.graph_witness {
            out += &format!("graph witness: {w}\n");
        }
        if let Some((x, classes)) = &s.uniqueness_witness {
            out += &format!("uniqueness witness: {x} = {}\n", classes.join(" = "));
        }
        for p in &s.prime_checks {
            match &p.counterexample {
                Some((a, b)) => {
                    out += &format!(
                        "prime check {}: not prime ({} | ({a})({b}))\n",
                        p.atom, p.atom
                    )
                }
                None => {
                    out += &format!(
                        "prime check {}: no counterexample up to gauge {}\n",
                        p.atom, p.bound
                    )
                }
            }
        }
        if let Some((a, r, r2)) = &s.condition_witness {
            out += &format!(
                "condition witness: ({a})({r}) = ({r2})({a}), {r} and {r2} not associated\n"
            );
        }
        for a in &s.anomalies {
            out += &format!("anomaly: {a}\n");
        }
        for n in &s.notes {
            out += &format!("note: {n}\n");
        }
        out
    }
}

fn graph_facts(x: &str, g: &TauGraphs) -> ElementRecord {
    let d = &g.directed;
    let u = &g.undirected;
    let mut max_in = 0;
    let mut max_out = 0;
    for v in 0..d.vertices.len() {
        if let Degrees::Directed {
            indegl, outdegl, ..
        } = degrees_at(d, v)
        {
            max_in = max_in.max(indegl);
            max_out = max_out.max(outdegl);
        }
    }
    let max_degl = (0..u.vertices.len())
        .map(|v| match degrees_at(u, v) {
            Degrees::Undirected { degl, .. } => degl,
            Degrees::Directed { .. } => 0,
        })
        .max()
        .unwrap_or(0);
    let directed = DigraphPredicates::of(d);
    let complete_undirected = is_complete_undirected(u);
    let connected_undirected = is_connected_undirected(u);
    let verdict = if !directed.chain_holds() {
        ElementVerdict::Anomaly("directed predicate chain broken".into())
    } else if complete_undirected && !connected_undirected {
        ElementVerdict::Anomaly("complete but disconnected".into())
    } else {
        ElementVerdict::Consistent
    };
    ElementRecord {
        element: x.to_owned(),
        vertices: d.vertices.len(),
        directed_edges: d.edges.len(),
        undirected_edges: u.edges.len(),
        max_indegl: max_in,
        max_outdegl: max_out,
        max_degl,
        directed,
        complete_undirected,
        connected_undirected,
        census_vertices: None,
        uniqueness_violated: None,
        verdict,
    }
}

/// Vertex census computed independently of the graph builder: a direct fiber
/// scan for τ = full, and per-candidate τ-divisibility tests otherwise.
fn census<R: Ring>(ring: &R, x: &R::Elem, rel: &TauRelation) -> Result<usize> {
    if matches!(rel, TauRelation::Full) {
        return Ok(irreducible_divisors_by_scan(ring, x)?.len());
    }
    let n = gauge_u64(ring, x)?;
    let mut count = 0;
    for m in divisors(n).into_iter().skip(1) {
        let reps: BTreeSet<_> = ring
            .elements_of_gauge(m)?
            .iter()
            .map(|e| crate::rings::canonical_rep(ring, e))
            .collect();
        for y in reps {
            if crate::tau::is_tau_irreducible(ring, &y, rel)? && tau_divides(ring, &y, x, rel)? {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn collect_records<R: Ring>(
    ring: &R,
    rel: &TauRelation,
    bound: u64,
    per_element: impl Fn(&R::Elem, &mut ElementRecord) -> Result<()> + Sync,
) -> Result<Vec<ElementRecord>> {
    let reps = nonunit_reps_up_to(ring, bound)?;
    reps.par_iter()
        .map(|x| {
            let g = build_tau_graphs(ring, x, rel)?;
            let mut rec = graph_facts(&x.to_string(), &g);
            per_element(x, &mut rec)?;
            Ok(rec)
        })
        .collect()
}

/// Builds `Γ_τ(x)` and `G_τ(x)` for every canonical nonunit with gauge at
/// most `bound`, records their sizes and loop-augmented degrees, and checks
/// the vertex count against an independent census.
pub fn ffd_sweep<R: Ring>(ring: &R, rel: &TauRelation, bound: u64) -> Result<HarnessReport> {
    let records = collect_records(ring, rel, bound, |x, rec| {
        let c = census(ring, x, rel)?;
        rec.census_vertices = Some(c);
        if c != rec.vertices && matches!(rec.verdict, ElementVerdict::Consistent) {
            rec.verdict = ElementVerdict::Anomaly(format!("census found {c} vertices"));
        }
        Ok(())
    })?;
    let anomalies = anomaly_list(&records);
    let summary = Summary {
        classification: if anomalies.is_empty() {
            BackendClass::FiniteGraphs
        } else {
            BackendClass::Anomaly
        },
        elements: records.len(),
        max_vertex_count: records.iter().map(|r| r.vertices).max().unwrap_or(0),
        anomalies,
        graph_witness: None,
        uniqueness_witness: None,
        prime_checks: Vec::new(),
        condition_witness: None,
        notes: vec!["every graph is finite: vertex sets are bounded by the divisor census".into()],
    };
    Ok(HarnessReport {
        harness: "ffd".into(),
        backend: ring.name(),
        relation: rel.to_string(),
        gauge_bound: bound,
        records,
        summary,
    })
}

fn anomaly_list(records: &[ElementRecord]) -> Vec<String> {
    records
        .iter()
        .filter_map(|r| match &r.verdict {
            ElementVerdict::Anomaly(d) => Some(format!("{}: {d}", r.element)),
            _ => None,
        })
        .collect()
}

/// Checks the graph-theoretic consequences of unique factorization on every
/// element up to `bound`, alongside direct uniqueness, bounded primality of
/// normal atoms, and the Condition (**) search.
///
/// Graph data alone never certifies unique factorization in a
/// noncommutative backend: the converse direction needs Condition (**), so
/// an element whose graphs pass is only "consistent" when no condition
/// witness was found.
pub fn ufd_harness<R: Ring>(ring: &R, rel: &TauRelation, bound: u64) -> Result<HarnessReport> {
    let condition = condition_witness(
        ring,
        bound.min(CONDITION_BOUND_CAP),
        ConditionVariant::StarStar,
        rel,
    )?;
    let condition_fails = matches!(condition, ConditionVerdict::Witness { .. });
    let mut records = collect_records(ring, rel, bound, |x, rec| {
        let classes = factorizations(ring, x)?;
        let groups: BTreeSet<_> = classes.iter().map(|c| c.sorted_atoms()).collect();
        rec.uniqueness_violated = Some(groups.len() > 1);
        if matches!(rec.verdict, ElementVerdict::Consistent) {
            rec.verdict = if !rec.graph_predicates_hold() {
                ElementVerdict::NonUfdWitnessed
            } else if condition_fails {
                ElementVerdict::InconclusiveConditionFails
            } else {
                ElementVerdict::Consistent
            };
        }
        Ok(())
    })?;

    let mut uniqueness_witness = None;
    for r in &records {
        if r.uniqueness_violated == Some(true) {
            let x = ring.parse(&r.element)?;
            let classes = factorizations(ring, &x)?
                .iter()
                .map(ToString::to_string)
                .collect();
            uniqueness_witness = Some((r.element.clone(), classes));
            break;
        }
    }
    let graph_witness = records
        .iter()
        .find(|r| !r.graph_predicates_hold())
        .map(|r| {
            let mut failed = Vec::new();
            if !r.directed.tournament {
                failed.push("Γ not a tournament");
            }
            if !r.complete_undirected {
                failed.push("G not complete");
            }
            if !r.connected_undirected {
                failed.push("G disconnected");
            }
            format!("{}: {}", r.element, failed.join(", "))
        });

    let prime_bound = bound.min(PRIME_BOUND_CAP);
    let mut prime_checks = Vec::new();
    for p in nonunit_reps_up_to(ring, bound.min(CONDITION_BOUND_CAP))? {
        if !is_irreducible(ring, &p)? || !is_normal(ring, &p)? || gauge_u64(ring, &p)? > prime_bound
        {
            continue;
        }
        let counterexample = match is_prime(ring, &p, prime_bound)? {
            PrimeVerdict::TrueUpToBound { .. } => None,
            PrimeVerdict::Counterexample { a, b } => Some((a.to_string(), b.to_string())),
        };
        prime_checks.push(PrimeCheck {
            atom: p.to_string(),
            bound: prime_bound,
            counterexample,
        });
    }

    let condition_triple = match &condition {
        ConditionVerdict::Witness { a, r, r_prime } => {
            Some((a.to_string(), r.to_string(), r_prime.to_string()))
        }
        ConditionVerdict::NoWitness { .. } => None,
    };
    let mut notes = Vec::new();
    if let Some((a, r, r2)) = &condition_triple {
        notes.push(format!(
            "inconclusive: Condition (**) fails: ({a})({r}) = ({r2})({a}) with {r} and {r2} not \
             associated, so passing graph predicates do not imply unique factorization"
        ));
    }
    let graphs_everywhere = graph_witness.is_none();
    if graphs_everywhere && !condition_fails && uniqueness_witness.is_some() {
        for r in records
            .iter_mut()
            .filter(|r| r.uniqueness_violated == Some(true))
        {
            r.verdict = ElementVerdict::Anomaly(
                "graph predicates hold everywhere and Condition (**) holds, yet uniqueness fails"
                    .into(),
            );
        }
    }
    let anomalies = anomaly_list(&records);
    let prime_failure = prime_checks.iter().any(|p| p.counterexample.is_some());
    let classification = if !anomalies.is_empty() {
        BackendClass::Anomaly
    } else if !graphs_everywhere || uniqueness_witness.is_some() || prime_failure {
        BackendClass::NonUfdWitnessed
    } else if condition_fails {
        BackendClass::InconclusiveConditionFails
    } else {
        BackendClass::UfdConsistent
    };
    if ring.is_commutative() && !graphs_everywhere {
        notes.push(
            "commutative backend: Condition (**) holds trivially, so a failing graph predicate \
             rules out unique factorization"
                .into(),
        );
    }

    Ok(HarnessReport {
        harness: "ufd".into(),
        backend: ring.name(),
        relation: rel.to_string(),
        gauge_bound: bound,
        summary: Summary {
            classification,
            elements: records.len(),
            max_vertex_count: records.iter().map(|r| r.vertices).max().unwrap_or(0),
            anomalies,
            graph_witness,
            uniqueness_witness,
            prime_checks,
            condition_witness: condition_triple,
            notes,
        },
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{Integers, Lipschitz, Quadratic};

    #[test]
    fn integers_are_ufd_consistent() {
        let rep = ufd_harness(&Integers, &TauRelation::Full, 60).unwrap();
        assert_eq!(rep.summary.classification, BackendClass::UfdConsistent);
        assert!(rep
            .records
            .iter()
            .all(|r| r.verdict == ElementVerdict::Consistent));
        assert!(rep.summary.condition_witness.is_none());
    }

    #[test]
    fn quadratic_five_is_witnessed() {
        let r = Quadratic::new(5).unwrap();
        let rep = ufd_harness(&r, &TauRelation::Full, 36).unwrap();
        assert_eq!(rep.summary.classification, BackendClass::NonUfdWitnessed);
        let six = rep.records.iter().find(|r| r.element == "6").unwrap();
        assert!(!six.connected_undirected);
        assert_eq!(six.uniqueness_violated, Some(true));
        assert_eq!(six.verdict, ElementVerdict::NonUfdWitnessed);
    }

    #[test]
    fn lipschitz_is_inconclusive_on_passing_graphs() {
        let r = Lipschitz::new();
        let rep = ufd_harness(&r, &TauRelation::Full, 8).unwrap();
        let x = rep.records.iter().find(|r| r.element == "1+i+j+k").unwrap();
        assert!(x.complete_undirected);
        assert_eq!(x.uniqueness_violated, Some(true));
        assert_eq!(x.verdict.to_string(), "inconclusive: Condition (**) fails");
        assert_eq!(
            rep.summary.condition_witness,
            Some(("1+i".into(), "1+j".into(), "1+k".into()))
        );
        assert!(rep
            .render_text()
            .contains("inconclusive: Condition (**) fails"));
    }

    #[test]
    fn ffd_census_matches() {
        let rep = ffd_sweep(&Lipschitz::new(), &TauRelation::Full, 16).unwrap();
        assert_eq!(
            rep.summary.classification,
            BackendClass::FiniteGraphs,
            "{:?}",
            rep.summary.anomalies
        );
        let rep = ffd_sweep(&Integers, &TauRelation::Empty, 30).unwrap();
        assert!(rep
            .records
            .iter()
            .all(|r| r.vertices == 1 && r.directed_edges == 0));
        assert_eq!(rep.summary.classification, BackendClass::FiniteGraphs);
    }
}
