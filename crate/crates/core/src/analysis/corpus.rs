//! Golden checks for the shipped declared systems.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::complexes::{
    declared_complex, declared_facet_to_factorization, declared_graph, skeleton1_equals_graph,
    DeclaredOracle, StandardVerdict,
};
use crate::declared::{corpus, DeclaredSystem};
use crate::error::Result;
use crate::tau::{
    declared_is_tau_irreducible, declared_tau_graphs, declared_tau_product_divides, TauRelation,
};

#[derive(Clone, Debug, Serialize)]
pub struct GoldenCheck {
    pub system: String,
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

type Faces = BTreeSet<Vec<String>>;

fn faces(list: &[&[&str]]) -> Faces {
    list.iter()
        .map(|f| {
            let mut v: Vec<String> = f.iter().map(|s| s.to_string()).collect();
            v.sort();
            v
        })
        .collect()
}

fn show(f: &Faces) -> String {
    let parts: Vec<String> = f.iter().map(|x| format!("{{{}}}", x.join(","))).collect();
    format!("{{{}}}", parts.join(", "))
}

struct Checks {
    out: Vec<GoldenCheck>,
}

impl Checks {
    fn push(&mut self, system: &str, claim: &str, passed: bool, detail: String) {
        self.out.push(GoldenCheck {
            system: system.into(),
            claim: claim.into(),
            passed,
            detail,
        });
    }

    fn faces_eq(&mut self, system: &str, claim: &str, got: Faces, want: Faces) {
        let detail = if got == want {
            show(&got)
        } else {
            format!("got {}, expected {}", show(&got), show(&want))
        };
        self.push(system, claim, got == want, detail);
    }
}

fn weyl_g(c: &mut Checks, sys: &DeclaredSystem) -> Result<()> {
    let s = declared_complex(sys)?;
    c.faces_eq(
        "weyl-g",
        "F0",
        s.faces_of_dim(0),
        faces(&[&["x"], &["y"], &["1+y"]]),
    );
    c.faces_eq(
        "weyl-g",
        "F1",
        s.faces_of_dim(1),
        faces(&[&["x", "y"], &["x", "1+y"], &["y", "1+y"]]),
    );
    c.faces_eq(
        "weyl-g",
        "F2",
        s.faces_of_dim(2),
        faces(&[&["x", "y", "1+y"]]),
    );
    c.faces_eq("weyl-g", "facets", s.facets(), faces(&[&["x", "y", "1+y"]]));
    let d = declared_graph(sys, true)?;
    let want: BTreeSet<(String, String)> = [("x", "y"), ("y", "1+y"), ("x", "1+y"), ("1+y", "y")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let got = d.edge_labels();
    c.push("weyl-g", "directed edges", got == want, format!("{got:?}"));

    let rel = TauRelation::DegreeEq;
    let tg = declared_tau_graphs(sys, &rel)?;
    let same = tg.directed.same_as(&d) && tg.undirected.same_as(&declared_graph(sys, false)?);
    c.push(
        "weyl-g",
        "degree-eq τ-graphs equal ordinary graphs",
        same,
        String::new(),
    );
    let xy = declared_tau_product_divides(&["x", "y"], sys, &rel)?;
    c.push("weyl-g", "x·y τ-divides under degree-eq", xy, String::new());
    Ok(())
}

fn weyl_h(c: &mut Checks, sys: &DeclaredSystem) -> Result<()> {
    let v = declared_complex(sys)?.is_standard();
    let want = StandardVerdict::Witness {
        face: faces(&[&["x", "y", "1+x"]]).pop_first().unwrap_or_default(),
        missing: faces(&[&["x", "1+x"]]).pop_first().unwrap_or_default(),
    };
    c.push(
        "weyl-h",
        "not standard: {x,y,1+x} is a face, {x,1+x} is not",
        v == want,
        format!("{v:?}"),
    );
    Ok(())
}

fn q_f_nonnormal(c: &mut Checks, sys: &DeclaredSystem) -> Result<()> {
    let facets = declared_complex(sys)?.facets();
    c.faces_eq(
        "q-f-nonnormal",
        "facets",
        facets.clone(),
        faces(&[&["x", "y"], &["y", "1-x"]]),
    );
    let none = facets
        .iter()
        .all(|f| declared_facet_to_factorization(sys, f).is_none());
    c.push(
        "q-f-nonnormal",
        "no facet is the atom set of a factorization",
        none,
        String::new(),
    );
    Ok(())
}

fn quat_free_f(c: &mut Checks, sys: &DeclaredSystem) -> Result<()> {
    let s = declared_complex(sys)?;
    let pm = [("1+ix", "1-ix"), ("1+jx", "1-jx"), ("1+kx", "1-kx")];
    let atoms = ["1+ix", "1-ix", "1+jx", "1-jx", "1+kx", "1-kx"];
    let f0: Vec<Vec<&str>> = atoms.iter().chain(&["y", "z"]).map(|a| vec![*a]).collect();
    let mut f1: Vec<Vec<&str>> = pm.iter().map(|(a, b)| vec![*a, *b]).collect();
    f1.extend(atoms.iter().map(|a| vec![*a, "y"]));
    f1.push(vec!["y", "z"]);
    let mut f2: Vec<Vec<&str>> = pm.iter().map(|(a, b)| vec![*a, *b, "y"]).collect();
    f2.extend(atoms.iter().map(|a| vec![*a, "y", "z"]));
    let f3: Vec<Vec<&str>> = pm.iter().map(|(a, b)| vec![*a, *b, "y", "z"]).collect();
    let as_faces = |v: &[Vec<&str>]| faces(&v.iter().map(|f| f.as_slice()).collect::<Vec<_>>());
    c.faces_eq("quat-free-f", "F0", s.faces_of_dim(0), as_faces(&f0));
    c.faces_eq("quat-free-f", "F1", s.faces_of_dim(1), as_faces(&f1));
    c.faces_eq("quat-free-f", "F2", s.faces_of_dim(2), as_faces(&f2));
    c.faces_eq("quat-free-f", "F3", s.faces_of_dim(3), as_faces(&f3));
    c.faces_eq("quat-free-f", "facets", s.facets(), as_faces(&f3));
    Ok(())
}

fn tau_free_f(c: &mut Checks, sys: &DeclaredSystem) -> Result<()> {
    let rel = TauRelation::DegreeEq;
    let irreducible = declared_is_tau_irreducible(sys, &rel)?;
    c.push(
        "tau-free-f",
        "τ-irreducible under degree-eq",
        irreducible,
        String::new(),
    );
    let g = declared_tau_graphs(sys, &rel)?;
    c.push(
        "tau-free-f",
        "G_τ = Γ_τ is a single loop-free vertex",
        g.is_single_loopless_vertex() && g.undirected.edges.is_empty(),
        format!("{:?}", g.directed.vertices),
    );
    Ok(())
}

/// Every golden claim about the corpus, in a fixed order.
pub fn corpus_checks() -> Result<Vec<GoldenCheck>> {
    let mut c = Checks { out: Vec::new() };
    for (name, sys) in corpus::all()? {
        match name {
            "weyl-g" => weyl_g(&mut c, &sys)?,
            "weyl-h" => weyl_h(&mut c, &sys)?,
            "q-f-nonnormal" => q_f_nonnormal(&mut c, &sys)?,
            "quat-free-f" => quat_free_f(&mut c, &sys)?,
            "tau-free-f" => tau_free_f(&mut c, &sys)?,
            _ => {}
        }
        let sk = skeleton1_equals_graph(&DeclaredOracle::new(&sys))?;
        c.push(name, "1-skeleton of S equals G", sk, String::new());
        let full = declared_tau_graphs(&sys, &TauRelation::Full)?;
        let same = full.directed.same_as(&declared_graph(&sys, true)?)
            && full.undirected.same_as(&declared_graph(&sys, false)?);
        c.push(
            name,
            "τ = full graphs equal ordinary graphs",
            same,
            String::new(),
        );
        let empty = declared_tau_graphs(&sys, &TauRelation::Empty)?;
        c.push(
            name,
            "τ = ∅ graph is a single loop-free vertex",
            empty.is_single_loopless_vertex(),
            String::new(),
        );
    }
    Ok(c.out)
}
