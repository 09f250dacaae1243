use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use irrdiv_core::analysis::{
    corpus_checks, degrees_at, ffd_sweep, is_complete_digraph, is_complete_undirected,
    is_connected_undirected, is_strongly_connected, is_tournament, is_unilaterally_connected,
    is_weakly_connected, ufd_harness,
};
use irrdiv_core::complexes::{
    build_complex, build_graph, skeleton1_equals_graph, ComputedOracle, DeclaredOracle,
    DivisorOracle,
};
use irrdiv_core::declared::{corpus, load_declared_file};
use irrdiv_core::factorize::{
    factorization_representatives, is_irreducible, is_prime, is_ufd_sample, prefix_form,
};
use irrdiv_core::rings::{is_normal, nonunit_reps_up_to};
use irrdiv_core::tau::{
    condition_witness, declared_is_tau_irreducible, declared_tau_factorizations,
    declared_tau_graphs, is_associate_preserving, is_left_cancellative, is_left_multiplicative,
    is_refinable, is_right_cancellative, is_right_multiplicative, is_tau_irreducible,
    lemma_instance_check, single_vertex_iff_tau_irreducible, tau_accp_probe,
    tau_factorization_representatives, AccpVerdict, ConditionVariant, ConditionVerdict,
    PropertyVerdict,
};
use irrdiv_core::{
    with_ring, DeclaredSystem, DivisorGraph, Error, PrimeVerdict, Ring, RingHandle,
    SimplicialComplex, StandardVerdict, TauRelation, UfdVerdict,
};

/// Factorizations, irreducible divisor graphs and complexes, and τ-variants
/// over small noncommutative domains.
#[derive(Parser)]
#[command(name = "irrdiv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
struct Input {
    /// Ring backend: lipschitz, quadratic:<d>, integers or quat-poly.
    #[arg(long, default_value = "lipschitz")]
    ring: RingHandle,
    /// Declared system: a JSON file, or the name of a shipped corpus system.
    #[arg(long)]
    declared: Option<String>,
    /// Element literal(s) in the chosen ring.
    elements: Vec<String>,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct Direction {
    /// Build the directed graph Γ (default).
    #[arg(long, conflicts_with = "undirected")]
    directed: bool,
    /// Build the undirected graph G.
    #[arg(long)]
    undirected: bool,
}

impl Direction {
    fn directed(&self) -> bool {
        !self.undirected
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the factorization classes of an element.
    Factor {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    /// Build Γ(x) or G(x).
    Graph {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        dir: Direction,
        #[command(flatten)]
        out: Output,
    },
    /// Build S(x): faces, facets, and optionally a skeleton.
    Complex {
        #[command(flatten)]
        input: Input,
        /// Restrict to the l-skeleton.
        #[arg(long)]
        skeleton: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Build Γ_τ(x) or G_τ(x).
    TauGraph {
        #[command(flatten)]
        input: Input,
        /// Relation spec: empty, full, gauge-eq, degree-eq, subset:irreducible,
        /// subset:prime-bounded:<B>, pairs:<file>, left-multiples:<a>,<b>.
        #[arg(long, default_value = "full")]
        relation: String,
        #[command(flatten)]
        dir: Direction,
        /// Strip loops.
        #[arg(long)]
        reduced: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Check a property; exits 1 when a witness or violation is found.
    Check {
        property: Property,
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "full")]
        relation: String,
        /// Search bound on gauges.
        #[arg(long, default_value_t = 16)]
        gauge_bound: u64,
        /// Chain length limit for the ACCPr probe.
        #[arg(long, default_value_t = 64)]
        max_depth: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Sweep every element up to a gauge bound.
    Sweep {
        harness: Harness,
        #[arg(long, default_value = "lipschitz")]
        ring: RingHandle,
        #[arg(long, default_value = "full")]
        relation: String,
        #[arg(long, default_value_t = 16)]
        gauge_bound: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Run the golden checks on the shipped declared systems.
    Corpus {
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Harness {
    Ffd,
    Ufd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    CompleteDigraph,
    Tournament,
    StronglyConnected,
    UnilaterallyConnected,
    WeaklyConnected,
    Complete,
    Connected,
    StandardComplex,
    PowersetComplex,
    SkeletonGraph,
    Irreducible,
    Normal,
    Prime,
    Ufd,
    TauIrreducible,
    SingleVertex,
    AssociatePreserving,
    RightMultiplicative,
    LeftMultiplicative,
    RightCancellative,
    LeftCancellative,
    Refinable,
    ConditionStar,
    ConditionStarStar,
    Lemma,
    Accp,
}

/// Result of a command: text to print and whether a witness was found.
struct Outcome {
    text: String,
    witness: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            witness: false,
        }
    }

    fn verdict(holds: bool, text: String) -> Self {
        Outcome {
            text,
            witness: !holds,
        }
    }
}

type Res<T> = irrdiv_core::Result<T>;

fn load_system(spec: &str) -> Res<DeclaredSystem> {
    if Path::new(spec).exists() {
        return load_declared_file(spec);
    }
    let name = spec.strip_suffix(".json").unwrap_or(spec);
    let name = Path::new(name)
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or(name);
    corpus::load(name).map_err(|_| Error::Io(format!("{spec}: no such file or corpus system")))
}

enum Source<'a> {
    Declared(DeclaredSystem),
    Elements(&'a [String]),
}

fn source(input: &Input) -> Res<Source<'_>> {
    match (&input.declared, input.elements.is_empty()) {
        (Some(_), false) => Err(Error::Usage(
            "give either --declared or element literals, not both".into(),
        )),
        (Some(d), true) => Ok(Source::Declared(load_system(d)?)),
        (None, false) => Ok(Source::Elements(&input.elements)),
        (None, true) => Err(Error::Usage(
            "missing input: give an element literal or --declared".into(),
        )),
    }
}

fn single(elements: &[String]) -> Res<&str> {
    match elements {
        [x] => Ok(x),
        _ => Err(Error::Usage(format!(
            "expected exactly one element, got {}",
            elements.len()
        ))),
    }
}

fn graph_output(g: &DivisorGraph, format: Format) -> String {
    match format {
        Format::Dot => g.to_dot(),
        Format::Json => g.to_json() + "\n",
        Format::Text => {
            let mut s = format!(
                "{} graph, {} vertices\nvertices: {}\n",
                if g.directed { "directed" } else { "undirected" },
                g.vertices.len(),
                g.vertices.join(", ")
            );
            let arrow = if g.directed { "->" } else { "--" };
            for (a, b) in &g.edges {
                s += &format!("edge: {} {arrow} {}\n", g.vertices[*a], g.vertices[*b]);
            }
            for (v, n) in g.loop_map() {
                s += &format!("loops: {v} x{n}\n");
            }
            s
        }
    }
}

fn complex_output(s: &SimplicialComplex, format: Format) -> String {
    match format {
        Format::Json => s.to_json() + "\n",
        Format::Dot => s.one_skeleton_graph().to_dot(),
        Format::Text => {
            let face = |f: &Vec<String>| format!("{{{}}}", f.join(","));
            let mut out = format!("vertices: {}\n", s.vertices.join(", "));
            if let Some(d) = s.dimension() {
                for i in 0..=d {
                    let fs: Vec<String> = s.faces_of_dim(i).iter().map(face).collect();
                    out += &format!("F{i}: {}\n", fs.join(" "));
                }
            }
            let facets: Vec<String> = s.facets().iter().map(face).collect();
            out += &format!("facets: {}\n", facets.join(" "));
            for (v, n) in s.vertices.iter().zip(&s.loops).filter(|(_, n)| **n > 0) {
                out += &format!("loops: {v} x{n}\n");
            }
            out
        }
    }
}

fn no_dot(format: Format, what: &str) -> Res<()> {
    if format == Format::Dot {
        Err(Error::Usage(format!(
            "--format dot is only available for graphs, not {what}"
        )))
    } else {
        Ok(())
    }
}

fn cmd_factor(input: &Input, format: Format) -> Res<Outcome> {
    no_dot(format, "factorizations")?;
    match source(input)? {
        Source::Declared(sys) => {
            let text = match format {
                Format::Json => {
                    serde_json::to_string_pretty(&json!({
                        "target": sys.target,
                        "factorizations": sys.factorizations,
                    }))
                    .expect("json")
                        + "\n"
                }
                _ => {
                    let mut s = format!(
                        "{} has {} declared factorization(s)\n",
                        sys.target,
                        sys.factorizations.len()
                    );
                    for f in &sys.factorizations {
                        s += &f.iter().map(|a| format!("({a})")).collect::<String>();
                        s += "\n";
                    }
                    s
                }
            };
            Ok(Outcome::ok(text))
        }
        Source::Elements(els) => with_ring!(&input.ring, |ring| {
            let x = ring.parse(single(els)?)?;
            let reps = factorization_representatives(&ring, &x)?;
            let rows: Vec<(String, Option<String>, String)> = reps
                .iter()
                .map(|(c, f)| {
                    let exact = f.atoms.iter().map(|a| format!("({a})")).collect::<String>();
                    (
                        c.to_string(),
                        prefix_form(&ring, c, &x).map(|u| u.to_string()),
                        exact,
                    )
                })
                .collect();
            let text = match format {
                Format::Json => {
                    serde_json::to_string_pretty(&json!({
                        "ring": input.ring.to_string(),
                        "target": x.to_string(),
                        "classes": rows.iter().map(|(c, p, e)| json!({
                            "class": c, "unit_prefix": p, "exact": e,
                        })).collect::<Vec<_>>(),
                    }))
                    .expect("json")
                        + "\n"
                }
                _ => {
                    let mut s = format!("{x} has {} factorization class(es)\n", rows.len());
                    for (c, p, e) in &rows {
                        match p {
                            Some(u) => s += &format!("{c}    unit prefix {u}\n"),
                            None => s += &format!("{c}    exact {e}\n"),
                        }
                    }
                    s
                }
            };
            Ok(Outcome::ok(text))
        }),
    }
}

fn cmd_graph(input: &Input, directed: bool, format: Format) -> Res<Outcome> {
    let g = match source(input)? {
        Source::Declared(sys) => build_graph(&DeclaredOracle::new(&sys), directed)?,
        Source::Elements(els) => with_ring!(&input.ring, |ring| {
            let x = ring.parse(single(els)?)?;
            build_graph(&ComputedOracle::new(&ring, &x)?, directed)?
        }),
    };
    Ok(Outcome::ok(graph_output(&g, format)))
}

fn cmd_complex(input: &Input, skeleton: Option<usize>, format: Format) -> Res<Outcome> {
    let s = match source(input)? {
        Source::Declared(sys) => build_complex(&DeclaredOracle::new(&sys))?,
        Source::Elements(els) => with_ring!(&input.ring, |ring| {
            let x = ring.parse(single(els)?)?;
            build_complex(&ComputedOracle::new(&ring, &x)?)?
        }),
    };
    let s = match skeleton {
        Some(l) => s.skeleton(l),
        None => s,
    };
    Ok(Outcome::ok(complex_output(&s, format)))
}

fn tau_graphs(input: &Input, rel: &TauRelation) -> Res<irrdiv_core::TauGraphs> {
    match source(input)? {
        Source::Declared(sys) => declared_tau_graphs(&sys, rel),
        Source::Elements(els) => with_ring!(&input.ring, |ring| {
            let x = ring.parse(single(els)?)?;
            irrdiv_core::tau::build_tau_graphs(&ring, &x, rel)
        }),
    }
}

fn cmd_tau_graph(
    input: &Input,
    rel: &str,
    directed: bool,
    reduced: bool,
    format: Format,
) -> Res<Outcome> {
    let rel = TauRelation::parse_spec(rel)?;
    let g = tau_graphs(input, &rel)?;
    let chosen = match (directed, reduced) {
        (true, false) => g.directed,
        (true, true) => g.reduced_directed,
        (false, false) => g.undirected,
        (false, true) => g.reduced_undirected,
    };
    Ok(Outcome::ok(graph_output(&chosen, format)))
}

fn property_text(p: &PropertyVerdict, format: Format) -> Outcome {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(p).expect("json") + "\n",
        _ => match p {
            PropertyVerdict::NoCounterexample { sample_size } => {
                format!("no counterexample in a sample of {sample_size}\n")
            }
            PropertyVerdict::Witness { detail, elements } => {
                format!("witness: {detail}\nelements: {}\n", elements.join(", "))
            }
        },
    };
    Outcome::verdict(!p.is_witness(), text)
}

fn verdict_text(holds: bool, name: &str, detail: String, format: Format) -> Outcome {
    let text = match format {
        Format::Json => {
            serde_json::to_string_pretty(
                &json!({ "property": name, "holds": holds, "detail": detail }),
            )
            .expect("json")
                + "\n"
        }
        _ if detail.is_empty() => format!("{name}: {}\n", if holds { "holds" } else { "fails" }),
        _ => format!(
            "{name}: {}\n{detail}\n",
            if holds { "holds" } else { "fails" }
        ),
    };
    Outcome::verdict(holds, text)
}

fn graph_predicate(property: Property, g: &DivisorGraph) -> (bool, &'static str) {
    match property {
        Property::CompleteDigraph => (is_complete_digraph(g), "complete-digraph"),
        Property::Tournament => (is_tournament(g), "tournament"),
        Property::StronglyConnected => (is_strongly_connected(g), "strongly-connected"),
        Property::UnilaterallyConnected => (is_unilaterally_connected(g), "unilaterally-connected"),
        Property::WeaklyConnected => (is_weakly_connected(g), "weakly-connected"),
        Property::Complete => (is_complete_undirected(g), "complete"),
        Property::Connected => (is_connected_undirected(g), "connected"),
        _ => unreachable!("not a graph predicate"),
    }
}

struct CheckArgs<'a> {
    property: Property,
    input: &'a Input,
    relation: &'a str,
    bound: u64,
    max_depth: usize,
    format: Format,
}

fn graph_for_check(a: &CheckArgs) -> Res<DivisorGraph> {
    let rel = TauRelation::parse_spec(a.relation)?;
    let directed = matches!(
        a.property,
        Property::CompleteDigraph
            | Property::Tournament
            | Property::StronglyConnected
            | Property::UnilaterallyConnected
            | Property::WeaklyConnected
    );
    let g = tau_graphs(a.input, &rel)?;
    Ok(if directed { g.directed } else { g.undirected })
}

fn cmd_check(a: &CheckArgs) -> Res<Outcome> {
    use Property as P;
    let fmt = a.format;
    no_dot(fmt, "checks")?;
    match a.property {
        P::CompleteDigraph
        | P::Tournament
        | P::StronglyConnected
        | P::UnilaterallyConnected
        | P::WeaklyConnected
        | P::Complete
        | P::Connected => {
            let g = graph_for_check(a)?;
            let (holds, name) = graph_predicate(a.property, &g);
            let degrees: Vec<String> = (0..g.vertices.len())
                .map(|v| format!("{}: {:?}", g.vertices[v], degrees_at(&g, v)))
                .collect();
            Ok(verdict_text(holds, name, degrees.join("\n"), fmt))
        }
        P::StandardComplex | P::PowersetComplex | P::SkeletonGraph => {
            let (holds, detail) = complex_check(a)?;
            let name = match a.property {
                P::StandardComplex => "standard-complex",
                P::PowersetComplex => "powerset-complex",
                _ => "skeleton-graph",
            };
            Ok(verdict_text(holds, name, detail, fmt))
        }
        P::TauIrreducible | P::SingleVertex if a.input.declared.is_some() => {
            let Source::Declared(sys) = source(a.input)? else {
                unreachable!()
            };
            let rel = TauRelation::parse_spec(a.relation)?;
            let irr = declared_is_tau_irreducible(&sys, &rel)?;
            if a.property == P::TauIrreducible {
                let f = declared_tau_factorizations(&sys, &rel)?;
                let shown: Vec<String> = f
                    .iter()
                    .map(|s| s.iter().map(|x| format!("({x})")).collect())
                    .collect();
                Ok(verdict_text(
                    irr,
                    "tau-irreducible",
                    format!("τ-factorizations: {}", shown.join(" ")),
                    fmt,
                ))
            } else {
                let single = declared_tau_graphs(&sys, &rel)?.is_single_loopless_vertex();
                Ok(verdict_text(
                    single == irr,
                    "single-vertex",
                    format!("single loop-free vertex: {single}, τ-irreducible: {irr}"),
                    fmt,
                ))
            }
        }
        _ => with_ring!(&a.input.ring, |ring| ring_check(&ring, a)),
    }
}

fn complex_check(a: &CheckArgs) -> Res<(bool, String)> {
    let run = |o: &dyn DivisorOracle| -> Res<(bool, String)> {
        match a.property {
            Property::StandardComplex => match build_complex(o)?.is_standard() {
                StandardVerdict::Standard => Ok((true, String::new())),
                StandardVerdict::Witness { face, missing } => Ok((
                    false,
                    format!(
                        "witness: {{{}}} is a face but {{{}}} is not",
                        face.join(","),
                        missing.join(",")
                    ),
                )),
            },
            Property::PowersetComplex => {
                Ok((build_complex(o)?.is_powerset_complex(), String::new()))
            }
            _ => Ok((skeleton1_equals_graph(o)?, String::new())),
        }
    };
    match source(a.input)? {
        Source::Declared(sys) => run(&DeclaredOracle::new(&sys)),
        Source::Elements(els) => with_ring!(&a.input.ring, |ring| {
            let x = ring.parse(single(els)?)?;
            run(&ComputedOracle::new(&ring, &x)?)
        }),
    }
}

fn ring_check<R: Ring>(ring: &R, a: &CheckArgs) -> Res<Outcome> {
    use Property as P;
    let fmt = a.format;
    let rel = TauRelation::parse_spec(a.relation)?;
    let elements = match source(a.input) {
        Ok(Source::Elements(els)) => els.iter().map(|e| ring.parse(e)).collect::<Res<Vec<_>>>()?,
        Ok(Source::Declared(_)) => {
            return Err(Error::Usage(
                "this check needs a computed ring, not --declared".into(),
            ))
        }
        Err(_) => Vec::new(),
    };
    let one = || -> Res<&R::Elem> {
        match elements.as_slice() {
            [x] => Ok(x),
            _ => Err(Error::Usage("this check takes exactly one element".into())),
        }
    };
    let sample = || -> Res<Vec<R::Elem>> {
        if elements.is_empty() {
            nonunit_reps_up_to(ring, a.bound)
        } else {
            Ok(elements.clone())
        }
    };
    match a.property {
        P::Irreducible => {
            let x = one()?;
            let holds = is_irreducible(ring, x)?;
            let detail = if holds {
                String::new()
            } else {
                factorization_representatives(ring, x)?
                    .first()
                    .map(|(c, _)| format!("factorization: {c}"))
                    .unwrap_or_else(|| format!("{x} is a unit"))
            };
            Ok(verdict_text(holds, "irreducible", detail, fmt))
        }
        P::Normal => Ok(verdict_text(
            is_normal(ring, one()?)?,
            "normal",
            String::new(),
            fmt,
        )),
        P::Prime => {
            let p = one()?;
            match is_prime(ring, p, a.bound)? {
                PrimeVerdict::TrueUpToBound { bound } => Ok(verdict_text(
                    true,
                    "prime",
                    format!("no counterexample with gauges up to {bound}"),
                    fmt,
                )),
                PrimeVerdict::Counterexample { a: x, b: y } => Ok(verdict_text(
                    false,
                    "prime",
                    format!(
                        "witness: {p} divides ({x})({y}) = {} but neither factor",
                        ring.mul(&x, &y)
                    ),
                    fmt,
                )),
            }
        }
        P::Ufd => match is_ufd_sample(ring, a.bound)? {
            UfdVerdict::Consistent { checked } => Ok(verdict_text(
                true,
                "ufd",
                format!("{checked} elements checked"),
                fmt,
            )),
            UfdVerdict::Witness { x, classes } => {
                let shown: Vec<String> = classes.iter().map(ToString::to_string).collect();
                Ok(verdict_text(
                    false,
                    "ufd",
                    format!("witness: {x} = {}", shown.join(" = ")),
                    fmt,
                ))
            }
        },
        P::TauIrreducible => {
            let x = one()?;
            let holds = is_tau_irreducible(ring, x, &rel)?;
            let reps = tau_factorization_representatives(ring, x, &rel)?;
            let shown: Vec<String> = reps.iter().map(|(c, _)| c.to_string()).collect();
            Ok(verdict_text(
                holds,
                "tau-irreducible",
                format!("τ-factorizations: {}", shown.join(" ")),
                fmt,
            ))
        }
        P::SingleVertex => {
            let c = single_vertex_iff_tau_irreducible(ring, one()?, &rel)?;
            Ok(verdict_text(
                c.agrees(),
                "single-vertex",
                format!(
                    "single loop-free vertex: {}, τ-irreducible: {}",
                    c.single_vertex, c.tau_irreducible
                ),
                fmt,
            ))
        }
        P::AssociatePreserving => Ok(property_text(
            &is_associate_preserving(ring, &rel, &sample()?)?,
            fmt,
        )),
        P::RightMultiplicative => Ok(property_text(
            &is_right_multiplicative(ring, &rel, &sample()?)?,
            fmt,
        )),
        P::LeftMultiplicative => Ok(property_text(
            &is_left_multiplicative(ring, &rel, &sample()?)?,
            fmt,
        )),
        P::RightCancellative => Ok(property_text(
            &is_right_cancellative(ring, &rel, &sample()?)?,
            fmt,
        )),
        P::LeftCancellative => Ok(property_text(
            &is_left_cancellative(ring, &rel, &sample()?)?,
            fmt,
        )),
        P::Refinable => Ok(property_text(&is_refinable(ring, &rel, &sample()?)?, fmt)),
        P::Lemma => Ok(property_text(
            &lemma_instance_check(ring, &rel, a.bound)?,
            fmt,
        )),
        P::ConditionStar | P::ConditionStarStar => {
            let variant = if a.property == P::ConditionStar {
                ConditionVariant::Star
            } else {
                ConditionVariant::StarStar
            };
            match condition_witness(ring, a.bound, variant, &rel)? {
                ConditionVerdict::NoWitness { bound } => Ok(verdict_text(
                    true,
                    "condition",
                    format!("no witness with gauge up to {bound}"),
                    fmt,
                )),
                ConditionVerdict::Witness { a: x, r, r_prime } => Ok(verdict_text(
                    false,
                    "condition",
                    format!("witness: ({x})({r}) = ({r_prime})({x}) = {}, {r} and {r_prime} not associated", ring.mul(&x, &r)),
                    fmt,
                )),
            }
        }
        P::Accp => {
            let v = tau_accp_probe(ring, &rel, one()?, a.max_depth)?;
            let chain: Vec<String> = v.chain().iter().map(ToString::to_string).collect();
            let (holds, detail) = match &v {
                AccpVerdict::Stabilized { depth, .. } => (
                    true,
                    format!("stabilized after {depth} step(s): {}", chain.join(" > ")),
                ),
                AccpVerdict::DepthExceeded { .. } => (
                    false,
                    format!("depth {} exceeded: {}", a.max_depth, chain.join(" > ")),
                ),
            };
            Ok(verdict_text(holds, "accp", detail, fmt))
        }
        _ => unreachable!("handled by cmd_check"),
    }
}

fn cmd_sweep(h: Harness, ring: &RingHandle, rel: &str, bound: u64, format: Format) -> Res<Outcome> {
    no_dot(format, "sweep reports")?;
    let rel = TauRelation::parse_spec(rel)?;
    let report = with_ring!(ring, |r| match h {
        Harness::Ffd => ffd_sweep(&r, &rel, bound)?,
        Harness::Ufd => ufd_harness(&r, &rel, bound)?,
    });
    Ok(Outcome::ok(match format {
        Format::Json => report.to_json() + "\n",
        _ => report.render_text(),
    }))
}

fn cmd_corpus(format: Format) -> Res<Outcome> {
    no_dot(format, "corpus checks")?;
    let checks = corpus_checks()?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&checks).expect("json") + "\n",
        _ => {
            let mut s = String::new();
            for c in &checks {
                s += &format!(
                    "{} {:<14} {}{}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.system,
                    c.claim,
                    if c.detail.is_empty() || c.passed {
                        String::new()
                    } else {
                        format!(": {}", c.detail)
                    }
                );
            }
            s += &format!(
                "{} of {} checks passed\n",
                checks.len() - failed,
                checks.len()
            );
            s
        }
    };
    Ok(Outcome::verdict(failed == 0, text))
}

fn run(cli: Cli) -> Res<Outcome> {
    match cli.command {
        Command::Factor { input, out } => cmd_factor(&input, out.format),
        Command::Graph { input, dir, out } => cmd_graph(&input, dir.directed(), out.format),
        Command::Complex {
            input,
            skeleton,
            out,
        } => cmd_complex(&input, skeleton, out.format),
        Command::TauGraph {
            input,
            relation,
            dir,
            reduced,
            out,
        } => cmd_tau_graph(&input, &relation, dir.directed(), reduced, out.format),
        Command::Check {
            property,
            input,
            relation,
            gauge_bound,
            max_depth,
            out,
        } => {
            if gauge_bound == 0 {
                return Err(Error::Usage("--gauge-bound must be positive".into()));
            }
            cmd_check(&CheckArgs {
                property,
                input: &input,
                relation: &relation,
                bound: gauge_bound,
                max_depth,
                format: out.format,
            })
        }
        Command::Sweep {
            harness,
            ring,
            relation,
            gauge_bound,
            out,
        } => cmd_sweep(harness, &ring, &relation, gauge_bound, out.format),
        Command::Corpus { out } => cmd_corpus(out.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(u8::from(outcome.witness))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
