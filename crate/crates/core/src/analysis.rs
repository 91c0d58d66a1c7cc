//! End-to-end pipeline and its self-checks.

use crate::automorphism::Automorphism;
use crate::error::{Error, Result};
use crate::pss::{PointKey, Pss};
use crate::sgraph::{self, ComponentSummary, SingularityGraph};
use crate::singularities::{Finder, Options, Singularity, Sweep};

#[derive(Clone, Debug)]
pub struct Analysis {
    pub phi: Automorphism,
    pub options: Options,
    pub sweep: Sweep,
    pub graph: SingularityGraph,
    pub components: Vec<ComponentSummary>,
    pub index_times_2: i64,
    pub max_rho_power: u64,
}

impl Analysis {
    pub fn singularities(&self) -> &[Singularity] {
        &self.sweep.singularities
    }

    pub fn complete(&self) -> bool {
        self.sweep.complete
    }

    pub fn index_text(&self) -> String {
        let x = self.index_times_2;
        if x % 2 == 0 {
            format!("{}", x / 2)
        } else {
            format!("{}/2", x)
        }
    }
}

pub fn analyze(phi: &Automorphism, opts: &Options) -> Result<Analysis> {
    let pss = Pss::new(phi);
    let sweep = Finder::new(&pss, opts.clone()).run()?;
    let graph = sgraph::build_graph(&pss, &sweep.singularities)?;
    let index_times_2 = sgraph::fo_index(&graph, &sweep.singularities, phi.rank())?;
    let components = sgraph::summarize(&pss, &graph, &sweep.singularities, opts.budget)?;
    let max_rho_power = sweep
        .singularities
        .iter()
        .flat_map(|s| s.points.iter())
        .map(|k| pss.rho_power(k))
        .max()
        .unwrap_or(0);
    Ok(Analysis {
        phi: phi.clone(),
        options: opts.clone(),
        sweep,
        graph,
        components,
        index_times_2,
        max_rho_power,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

fn check(name: &'static str, ok: bool, detail: String) -> Check {
    Check { name, ok, detail }
}

/// Recomputes the invariants of an analysis from its parts.
pub fn verify(a: &Analysis) -> Vec<Check> {
    let pss = Pss::new(&a.phi);
    let sings = a.singularities();
    let n = a.phi.rank() as i64;
    let mut out = Vec::new();

    let f1: i64 = sings.iter().map(|s| s.h_classes() as i64 - 2).sum();
    let f2 = sgraph::formula_two(sings);
    out.push(check(
        "index formulas agree",
        f2.as_ref().map(|&x| x == f1).unwrap_or(false) && f1 == a.index_times_2,
        format!("{f1} vs {f2:?}, reported {}", a.index_times_2),
    ));
    out.push(check(
        "index bound",
        a.index_times_2 <= 2 * (n - 1),
        format!("{} <= {}", a.index_times_2, 2 * (n - 1)),
    ));
    let comp_sum: i64 = a.components.iter().map(|c| c.index_times_2).sum();
    out.push(check(
        "component indices add up",
        comp_sum == a.index_times_2,
        format!("{comp_sum} vs {}", a.index_times_2),
    ));

    let mut edge_ok = true;
    for s in sings {
        let adj = a.graph.finite_edges.iter().filter(|e| e.from == s.id).count()
            + a.graph.finite_edges.iter().filter(|e| e.to == s.id).count();
        let inf = a.graph.infinite_edges.iter().filter(|e| e.node == s.id).count();
        edge_ok &= s.h_classes() == adj + inf;
    }
    out.push(check("classes equal adjacent edges", edge_ok, String::new()));

    let mut rank_ok = true;
    for c in &a.components {
        rank_ok &= c.rank == c.edges as i64 - c.nodes.len() as i64 + 1 && c.basis.len() as i64 == c.rank;
    }
    out.push(check("component ranks", rank_ok, String::new()));

    let mut fixed_ok = true;
    let mut detail = String::new();
    for s in sings {
        for (key, &h) in s.points.iter().zip(&s.point_powers) {
            if s.fixing_power % h != 0 {
                fixed_ok = false;
            }
            match pss.is_fixed(key, &s.label.w, s.label.k, h) {
                Ok(true) => {}
                other => {
                    fixed_ok = false;
                    detail = format!("singularity {} point {}: {other:?}", s.id, pss.key_display(key));
                }
            }
        }
    }
    out.push(check("points fixed", fixed_ok, detail));

    let mut distinct_ok = true;
    for s in sings {
        distinct_ok &= s.points.len() >= 2 && s.approx_classes() >= 2;
        if !s.label.w.is_empty() {
            let common = if s.label.w.is_pure_positive() { s.u_classes() } else { s.v_classes() };
            distinct_ok &= common.len() == 1;
        }
    }
    out.push(check("singularities well formed", distinct_ok, String::new()));

    let rho_ok = sings
        .iter()
        .flat_map(|s| s.points.iter())
        .all(|k| pss.rho_power(k) as i64 <= 4 * n - 4);
    out.push(check("rho powers bounded", rho_ok, format!("max {}", a.max_rho_power)));

    let mut label_ok = true;
    for e in &a.graph.finite_edges {
        label_ok &= e.label.is_pure_positive() && e.from != e.to;
    }
    let mut expand_ok = true;
    for s in sings {
        for (key, e) in s.points.iter().zip(&s.entries) {
            let from_key = pss.expand_key(key, 24);
            let from_anchor = pss.expand_point(&e.witness, 24, a.options.budget);
            expand_ok &= matches!((from_key, from_anchor), (Ok(x), Ok(y)) if x == y);
        }
    }
    out.push(check("edge labels positive", label_ok, String::new()));
    out.push(check("point expansions agree", expand_ok, String::new()));

    let mut basis_ok = true;
    for c in &a.components {
        for b in &c.basis {
            let image = a.phi.apply(b, c.phi_power as u32, crate::Direction::Forward, a.options.budget);
            basis_ok &= match image {
                Ok(img) => &c.conjugator.inverse().concat(&img).concat(&c.conjugator) == b,
                Err(_) => false,
            };
        }
    }
    out.push(check("basis words fixed", basis_ok, String::new()));
    out
}

/// Converts failed checks into an error.
pub fn require(checks: &[Check]) -> Result<()> {
    match checks.iter().find(|c| !c.ok) {
        None => Ok(()),
        Some(c) => Err(Error::Invariant(format!("{}: {}", c.name, c.detail))),
    }
}

pub fn periodic_count(a: &Analysis) -> usize {
    a.singularities()
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|k| matches!(k, PointKey::Periodic { .. }))
        .count()
}
