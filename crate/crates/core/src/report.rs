//! Serializable report of an analysis, with names resolved to text.

use serde::Serialize;

use crate::analysis::Analysis;
use crate::error::Result;
use crate::pss::{PointKey, Pss};
use crate::sgraph;
use crate::words::Word;

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct LabelReport {
    pub w: String,
    pub k: u32,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct PointReport {
    pub key: String,
    pub development: String,
    pub level: u32,
    pub anchor: String,
    pub shift: String,
    pub seed: Option<String>,
    #[serde(rename = "U0")]
    pub u0: String,
    #[serde(rename = "V0")]
    pub v0: String,
    pub fixing_h: u64,
    pub rho_power: u64,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct SingularityReport {
    pub id: usize,
    pub label: LabelReport,
    pub fixing_power: u64,
    pub phi_power: u64,
    pub h_classes: usize,
    pub approx_classes: usize,
    pub points: Vec<PointReport>,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct FiniteEdgeReport {
    pub from: usize,
    pub to: usize,
    pub label: String,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct InfiniteEdgeReport {
    pub node: usize,
    pub side: String,
    pub first_letter: String,
    pub point: String,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct GraphReport {
    pub finite_edges: Vec<FiniteEdgeReport>,
    pub infinite_edges: Vec<InfiniteEdgeReport>,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct AttractingReport {
    pub node: usize,
    pub side: String,
    pub first_letter: String,
    pub path: String,
    pub point: String,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub nodes: Vec<usize>,
    pub edges: usize,
    pub rank: i64,
    pub index_times_2: i64,
    pub label: LabelReport,
    pub fixing_power: u64,
    pub phi_power: u64,
    pub attracting_classes: Vec<AttractingReport>,
    pub basis: Vec<String>,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub rank: usize,
    pub fo_index_times_2: i64,
    pub fo_index: String,
    pub complete: bool,
    pub k_reached: u32,
    pub k_full: u32,
    pub truncation: Option<String>,
    pub max_rho_power: u64,
    pub singularities: Vec<SingularityReport>,
    pub graph: GraphReport,
    pub components: Vec<ComponentReport>,
}

impl Report {
    pub fn build(a: &Analysis) -> Result<Report> {
        let pss = Pss::new(&a.phi);
        let names = a.phi.names();
        let fmt = |w: &Word| w.display(names).to_string();
        let mut singularities = Vec::new();
        for s in a.singularities() {
            let mut points = Vec::new();
            for ((key, e), &h) in s.points.iter().zip(&s.entries).zip(&s.point_powers) {
                let development = match key {
                    PointKey::Generic(d) => pss.dev_display(d),
                    PointKey::Periodic { .. } => pss.key_display(key),
                };
                points.push(PointReport {
                    key: pss.key_display(key),
                    development,
                    level: e.witness.anchor.level,
                    anchor: e.witness.anchor.display(names),
                    shift: e.witness.shift.to_string(),
                    seed: e.witness.seed.map(|x| names[x].clone()),
                    u0: format!("{}^-1", names[e.u0]),
                    v0: names[e.v0].clone(),
                    fixing_h: h,
                    rho_power: pss.rho_power(key),
                });
            }
            singularities.push(SingularityReport {
                id: s.id,
                label: LabelReport { w: fmt(&s.label.w), k: s.label.k },
                fixing_power: s.fixing_power,
                phi_power: s.phi_power,
                h_classes: s.h_classes(),
                approx_classes: s.approx_classes(),
                points,
            });
        }
        let finite_edges = a
            .graph
            .finite_edges
            .iter()
            .map(|e| FiniteEdgeReport { from: e.from, to: e.to, label: fmt(&e.label) })
            .collect();
        let infinite_edges = a
            .graph
            .infinite_edges
            .iter()
            .map(|e| InfiniteEdgeReport {
                node: e.node,
                side: e.side.name().to_string(),
                first_letter: fmt(&Word::letter(e.first_letter)),
                point: pss.key_display(&e.point),
            })
            .collect();
        let components = a
            .components
            .iter()
            .map(|c| ComponentReport {
                nodes: c.nodes.clone(),
                edges: c.edges,
                rank: c.rank,
                index_times_2: c.index_times_2,
                label: LabelReport { w: fmt(&c.label.w), k: c.label.k },
                fixing_power: c.fixing_power,
                phi_power: c.phi_power,
                attracting_classes: c
                    .attracting
                    .iter()
                    .map(|r| AttractingReport {
                        node: r.node,
                        side: r.side.name().to_string(),
                        first_letter: fmt(&Word::letter(r.first_letter)),
                        path: fmt(&r.path),
                        point: pss.key_display(&r.point),
                    })
                    .collect(),
                basis: c.basis.iter().map(fmt).collect(),
            })
            .collect();
        Ok(Report {
            rank: a.phi.rank(),
            fo_index_times_2: a.index_times_2,
            fo_index: a.index_text(),
            complete: a.sweep.complete,
            k_reached: a.sweep.k_reached,
            k_full: a.sweep.max_k,
            truncation: a.sweep.truncation.as_ref().map(|e| e.to_string()),
            max_rho_power: a.max_rho_power,
            singularities,
            graph: GraphReport { finite_edges, infinite_edges },
            components,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn json(a: &Analysis) -> Result<String> {
    Ok(Report::build(a)?.to_json())
}

pub fn dot(a: &Analysis) -> String {
    let pss = Pss::new(&a.phi);
    sgraph::to_dot(&pss, &a.graph, a.singularities())
}
