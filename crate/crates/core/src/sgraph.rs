//! The singularity graph, its components, index formulas and fixed subgroups.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::automorphism::Direction;
use crate::error::{Error, Result};
use crate::gamma::Side;
use crate::pss::{Development, PointKey, Pss, Step};
use crate::singularities::{Label, Singularity};
use crate::words::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteEdge {
    pub from: usize,
    pub to: usize,
    pub label: Word,
}

/// An unclaimed class of `H_Ω/∼`; on the minus side `first_letter` is `U₀`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct InfiniteEdge {
    pub node: usize,
    pub side: Side,
    pub first_letter: Letter,
    pub point: PointKey,
}

#[derive(Clone, Debug, Default)]
pub struct SingularityGraph {
    pub nodes: usize,
    pub finite_edges: Vec<FiniteEdge>,
    pub infinite_edges: Vec<InfiniteEdge>,
    pub h_classes: Vec<usize>,
    pub self_edges_skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum OrbitKey {
    Periodic(u16, u16),
    Generic(Vec<Step>),
}

fn orbit_signature(d: &Development) -> Vec<Step> {
    let t = d.period.len();
    let p = d.pre.len();
    (0..t).map(|r| d.period[(r + t * (p + 1) - p) % t]).collect()
}

/// Builds finite edges from consecutive points of each shift orbit.
pub fn build_graph(pss: &Pss, sings: &[Singularity]) -> Result<SingularityGraph> {
    let mut orbits: BTreeMap<OrbitKey, Vec<(usize, &PointKey)>> = BTreeMap::new();
    for s in sings {
        for key in &s.points {
            let ok = match key {
                PointKey::Periodic { c, b, .. } => OrbitKey::Periodic(*c, *b),
                PointKey::Generic(d) => OrbitKey::Generic(orbit_signature(d)),
            };
            orbits.entry(ok).or_default().push((s.id, key));
        }
    }
    let mut edges = BTreeSet::new();
    let mut self_edges = 0;
    for (ok, members) in &orbits {
        let mut placed: Vec<(i128, usize, &PointKey)> = Vec::new();
        match ok {
            OrbitKey::Periodic(..) => {
                for &(id, key) in members {
                    if let PointKey::Periodic { offset, .. } = key {
                        placed.push((*offset, id, key));
                    }
                }
            }
            OrbitKey::Generic(sig) => {
                let t = sig.len();
                let maxpre = members
                    .iter()
                    .map(|(_, k)| match k {
                        PointKey::Generic(d) => d.pre.len(),
                        _ => 0,
                    })
                    .max()
                    .unwrap_or(0);
                let n = maxpre.div_ceil(t) * t;
                for &(id, key) in members {
                    if let PointKey::Generic(d) = key {
                        placed.push((pss.pos_n(d, n)?, id, key));
                    }
                }
            }
        }
        placed.sort();
        for w in placed.windows(2) {
            let (p0, id0, k0) = w[0];
            let (p1, id1, _) = w[1];
            if p0 == p1 {
                return Err(Error::Invariant(format!("point shared by singularities {id0} and {id1}")));
            }
            if id0 == id1 {
                log::warn!("consecutive orbit points both in singularity {id0}");
                self_edges += 1;
                continue;
            }
            let m = usize::try_from(p1 - p0).map_err(|_| Error::CapExceeded { cap: u64::MAX })?;
            let (_, v) = pss.expand_key(k0, m)?;
            edges.insert(FiniteEdge { from: id0, to: id1, label: v });
        }
    }
    let finite_edges: Vec<FiniteEdge> = edges.into_iter().collect();
    let mut infinite_edges = Vec::new();
    let mut h_classes = Vec::new();
    for s in sings {
        h_classes.push(s.h_classes());
        let claimed_v: BTreeSet<usize> =
            finite_edges.iter().filter(|e| e.from == s.id).map(|e| e.label.first().unwrap().idx()).collect();
        let claimed_u: BTreeSet<usize> =
            finite_edges.iter().filter(|e| e.to == s.id).map(|e| e.label.last().unwrap().idx()).collect();
        for u in s.u_classes() {
            if !claimed_u.contains(&u) {
                let i = s.entries.iter().position(|e| e.u0 == u).unwrap();
                infinite_edges.push(InfiniteEdge {
                    node: s.id,
                    side: Side::Minus,
                    first_letter: Letter::neg(u as u16),
                    point: s.points[i].clone(),
                });
            }
        }
        for v in s.v_classes() {
            if !claimed_v.contains(&v) {
                let i = s.entries.iter().position(|e| e.v0 == v).unwrap();
                infinite_edges.push(InfiniteEdge {
                    node: s.id,
                    side: Side::Plus,
                    first_letter: Letter::pos(v as u16),
                    point: s.points[i].clone(),
                });
            }
        }
    }
    Ok(SingularityGraph {
        nodes: sings.len(),
        finite_edges,
        infinite_edges,
        h_classes,
        self_edges_skipped: self_edges,
    })
}

/// Doubled index by both formulas; errors when they disagree.
pub fn fo_index(graph: &SingularityGraph, sings: &[Singularity], rank: usize) -> Result<i64> {
    let f1: i64 = graph.h_classes.iter().map(|&h| h as i64 - 2).sum();
    let f2 = formula_two(sings)?;
    if f1 != f2 {
        return Err(Error::FormulaMismatch { left: f1, right: f2 });
    }
    if f1 > 2 * (rank as i64 - 1) {
        return Err(Error::Invariant(format!("doubled index {f1} exceeds {}", 2 * (rank as i64 - 1))));
    }
    Ok(f1)
}

/// `(#H_{Ω_φ} − 2) + Σ (#(Ω/≈) − 1)`, doubled.
pub fn formula_two(sings: &[Singularity]) -> Result<i64> {
    let mut total = 0i64;
    for s in sings {
        if s.is_phi_fixed() {
            let mut cs = BTreeSet::new();
            let mut bs = BTreeSet::new();
            for k in &s.points {
                match k {
                    PointKey::Periodic { c, b, offset: 0 } => {
                        cs.insert(*c);
                        bs.insert(*b);
                    }
                    _ => return Err(Error::Invariant("non-periodic point fixed by a pure power".into())),
                }
            }
            total += (cs.len() + bs.len()) as i64 - 2;
        } else {
            total += s.approx_classes() as i64 - 1;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttractingRep {
    pub node: usize,
    pub side: Side,
    pub first_letter: Letter,
    /// Word read along the spanning tree from the component anchor to `node`.
    pub path: Word,
    pub point: PointKey,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSummary {
    pub nodes: Vec<usize>,
    pub edges: usize,
    pub rank: i64,
    pub infinite_edges: usize,
    pub index_times_2: i64,
    pub label: Label,
    pub fixing_power: u64,
    pub conjugator: Word,
    pub phi_power: u64,
    pub basis: Vec<Word>,
    pub attracting: Vec<AttractingRep>,
}

/// Connected components of the undirected underlying graph, sorted by least node.
pub fn components(graph: &SingularityGraph) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..graph.nodes).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    for e in &graph.finite_edges {
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..graph.nodes {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}

/// Spanning-tree path words from the least node, and the words of non-tree edges.
fn tree_words(graph: &SingularityGraph, nodes: &[usize]) -> (BTreeMap<usize, Word>, Vec<Word>) {
    let anchor = nodes[0];
    let set: BTreeSet<usize> = nodes.iter().copied().collect();
    let edges: Vec<(usize, &FiniteEdge)> =
        graph.finite_edges.iter().enumerate().filter(|(_, e)| set.contains(&e.from)).collect();
    let mut path: BTreeMap<usize, Word> = BTreeMap::new();
    path.insert(anchor, Word::empty());
    let mut used = BTreeSet::new();
    let mut queue = VecDeque::from([anchor]);
    while let Some(x) = queue.pop_front() {
        for &(i, e) in &edges {
            let (y, step) = if e.from == x {
                (e.to, e.label.clone())
            } else if e.to == x {
                (e.from, e.label.inverse())
            } else {
                continue;
            };
            if path.contains_key(&y) {
                continue;
            }
            let py = path[&x].concat(&step);
            path.insert(y, py);
            used.insert(i);
            queue.push_back(y);
        }
    }
    let mut basis = Vec::new();
    for &(i, e) in &edges {
        if !used.contains(&i) {
            basis.push(path[&e.from].concat(&e.label).concat(&path[&e.to].inverse()));
        }
    }
    (path, basis)
}

/// Summaries for every component, with verified fixed-subgroup bases.
pub fn summarize(
    pss: &Pss,
    graph: &SingularityGraph,
    sings: &[Singularity],
    budget: usize,
) -> Result<Vec<ComponentSummary>> {
    let phi = pss.phi();
    let mut out = Vec::new();
    for nodes in components(graph) {
        let set: BTreeSet<usize> = nodes.iter().copied().collect();
        let m = graph.finite_edges.iter().filter(|e| set.contains(&e.from)).count();
        let rank = m as i64 - nodes.len() as i64 + 1;
        let inf: Vec<&InfiniteEdge> = graph.infinite_edges.iter().filter(|e| set.contains(&e.node)).collect();
        let anchor = &sings[nodes[0]];
        let (paths, basis) = tree_words(graph, &nodes);
        let conjugator = phi.conjugator_power(&anchor.label.w, anchor.label.k, anchor.fixing_power as u32, budget)?;
        let power = anchor.phi_power as u32;
        for b in &basis {
            let image = phi.apply(b, power, Direction::Forward, budget)?;
            let fixed = conjugator.inverse().concat(&image).concat(&conjugator);
            if &fixed != b {
                return Err(Error::VerificationFailed(format!("basis word {} is not fixed", phi.fmt_word(b))));
            }
            if b.is_pure_positive() || b.is_pure_negative() {
                return Err(Error::VerificationFailed(format!("basis word {} is pure", phi.fmt_word(b))));
            }
        }
        let attracting = inf
            .iter()
            .map(|e| AttractingRep {
                node: e.node,
                side: e.side,
                first_letter: e.first_letter,
                path: paths[&e.node].clone(),
                point: e.point.clone(),
            })
            .collect();
        out.push(ComponentSummary {
            edges: m,
            rank,
            infinite_edges: inf.len(),
            index_times_2: 2 * rank + inf.len() as i64 - 2,
            label: anchor.label.clone(),
            fixing_power: anchor.fixing_power,
            conjugator,
            phi_power: anchor.phi_power,
            basis,
            attracting,
            nodes,
        });
    }
    Ok(out)
}

/// Graphviz rendering.
pub fn to_dot(pss: &Pss, graph: &SingularityGraph, sings: &[Singularity]) -> String {
    let names = pss.names();
    let mut s = String::from("digraph singularities {\n  rankdir=LR;\n");
    for x in sings {
        s.push_str(&format!(
            "  S{} [label=\"S{}\\n({}, {})\\n{} points\"];\n",
            x.id,
            x.id,
            x.label.w.display_compact(names),
            x.label.k,
            x.points.len()
        ));
    }
    for e in &graph.finite_edges {
        s.push_str(&format!("  S{} -> S{} [label=\"{}\"];\n", e.from, e.to, e.label.display_compact(names)));
    }
    for (i, e) in graph.infinite_edges.iter().enumerate() {
        let letter = Word::letter(e.first_letter);
        s.push_str(&format!("  I{i} [shape=point];\n"));
        s.push_str(&format!(
            "  S{} -> I{i} [style=dashed, side={}, label=\"{}\"];\n",
            e.node,
            e.side.name(),
            letter.display_compact(names)
        ));
    }
    s.push_str("}\n");
    s
}
