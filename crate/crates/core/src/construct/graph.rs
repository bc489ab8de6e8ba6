use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::numtheory::FactorBudget;
use crate::field::FieldCtx;
use crate::poly::{enumerate_irreducibles, factor, Poly};
use crate::qc::{root_pc_order, QcContext};

/// `G_n(Q_c)`: nodes are the monic irreducibles of degree `n`, with an edge
/// `f -> g` whenever `f` divides `g^{Q_c}`.
#[derive(Debug, Clone, Serialize)]
pub struct QcGraph {
    pub n: usize,
    pub nodes: Vec<Poly>,
    /// Index pairs `(from, to)`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// On a cycle, by cycle detection.
    pub periodic: Vec<bool>,
    /// From `gcd(ord(P_c(alpha)), D) = 1`; `None` when unresolved.
    pub periodic_by_order: Vec<Option<bool>>,
}

impl QcGraph {
    pub fn successor(&self, i: usize) -> Option<usize> {
        self.edges.iter().find(|e| e.0 == i).map(|e| e.1)
    }

    pub fn index_of(&self, f: &Poly) -> Option<usize> {
        self.nodes.binary_search(f).ok()
    }

    /// Graphviz text; periodic nodes are drawn as double circles.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n");
        for (i, f) in self.nodes.iter().enumerate() {
            let shape = if self.periodic[i] { "doublecircle" } else { "ellipse" };
            let _ = writeln!(out, "  n{i} [label=\"{f}\", shape={shape}];");
        }
        for (a, b) in &self.edges {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}

/// `budget` caps the number of degree-`n` candidates enumerated.
pub fn build_graph(ctx: &FieldCtx, n: usize, qc: &QcContext, budget: u64, factors: &FactorBudget) -> Result<QcGraph> {
    if ctx != qc.ctx() {
        return Err(Error::ContextMismatch);
    }
    if n == 0 {
        return Err(Error::pre("degree must be positive"));
    }
    let q = ctx.cardinality_u64().ok_or_else(|| Error::pre("field too large to enumerate"))?;
    let total = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: format!("degree-{n} polynomials over F_{q}"),
            needed: total.to_string(),
            budget,
        });
    }
    let nodes = enumerate_irreducibles(ctx, n)?;
    let incoming: Result<Vec<Vec<usize>>> = nodes
        .par_iter()
        .map(|g| {
            let t = qc.transform_monic(g)?;
            let mut from = Vec::new();
            for (f, _) in factor(&t)?.factors {
                if f.degree() == Some(n) {
                    let i = nodes
                        .binary_search(&f)
                        .map_err(|_| Error::internal(format!("{f} missing from the node list")))?;
                    from.push(i);
                }
            }
            Ok(from)
        })
        .collect();
    let mut edges = Vec::new();
    for (to, from) in incoming?.into_iter().enumerate() {
        edges.extend(from.into_iter().map(|f| (f, to)));
    }
    edges.sort();
    let mut succ = vec![None; nodes.len()];
    for &(a, b) in &edges {
        if succ[a].replace(b).is_some() {
            return Err(Error::internal(format!("{} has out-degree > 1", nodes[a])));
        }
    }
    let periodic = cycle_nodes(&succ);
    let periodic_by_order: Result<Vec<Option<bool>>> = if n >= 3 {
        nodes
            .par_iter()
            .map(|f| {
                let ord = root_pc_order(f, qc, factors)?;
                Ok(ord.map(|o| num_integer::Integer::gcd(&o, &qc.order().into()) == 1u32.into()))
            })
            .collect()
    } else {
        Ok(vec![None; nodes.len()])
    };
    let periodic_by_order = periodic_by_order?;
    for (i, p) in periodic_by_order.iter().enumerate() {
        if p.is_some_and(|p| p != periodic[i]) {
            return Err(Error::internal(format!(
                "periodicity of {} disagrees between cycle detection and P_c orders",
                nodes[i]
            )));
        }
    }
    Ok(QcGraph {
        n,
        nodes,
        edges,
        periodic,
        periodic_by_order,
    })
}

/// Nodes lying on a cycle of a partial function.
fn cycle_nodes(succ: &[Option<usize>]) -> Vec<bool> {
    // 0 unvisited, 1 on the current walk, 2 done.
    let mut state = vec![0u8; succ.len()];
    let mut on_cycle = vec![false; succ.len()];
    for start in 0..succ.len() {
        let mut path = Vec::new();
        let mut cur = Some(start);
        while let Some(v) = cur {
            match state[v] {
                0 => {
                    state[v] = 1;
                    path.push(v);
                    cur = succ[v];
                }
                1 => {
                    let pos = path.iter().position(|&u| u == v).expect("on path");
                    for &u in &path[pos..] {
                        on_cycle[u] = true;
                    }
                    break;
                }
                _ => break,
            }
        }
        for v in path {
            state[v] = 2;
        }
    }
    on_cycle
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qc::build_qc;

    #[test]
    fn cycles_of_partial_functions() {
        let succ = [Some(1), Some(2), Some(1), None, Some(3), Some(0)];
        assert_eq!(cycle_nodes(&succ), vec![false, true, true, false, false, false]);
        assert_eq!(cycle_nodes(&[Some(0)]), vec![true]);
    }

    #[test]
    fn quartics_over_f2() {
        let f2 = FieldCtx::prime(2).unwrap();
        let qc = build_qc(&f2, &f2.one()).unwrap();
        let g = build_graph(&f2, 4, &qc, 1 << 20, &FactorBudget::default()).unwrap();
        assert_eq!(g.nodes.len(), 3);
        assert_eq!(g.edges, vec![(0, 0), (1, 0), (2, 0)]);
        assert_eq!(g.periodic, vec![true, false, false]);
        assert_eq!(g.periodic_by_order, vec![Some(true), Some(false), Some(false)]);
        let dot = g.to_dot();
        assert!(dot.contains("n0 [label=\"x^4 + x + 1\", shape=doublecircle]"));
        assert!(dot.contains("n2 -> n0;"));
    }
}
