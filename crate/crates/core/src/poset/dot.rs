use std::fmt::Write;

use super::BidirectedGraph;
use crate::signed_set::Sign;

/// Graphviz text for a bidirected graph.
///
/// Nodes are the ground-set indices. An arc with opposite endpoint signs is
/// drawn from its `+` endpoint to its `-` endpoint; same-sign arcs go from the
/// smaller to the larger index; a selfloop is an edge `i -> i`. Every edge
/// carries its endpoint signs as `taillabel` and `headlabel`, and edges appear
/// in canonical arc order.
pub fn to_dot(g: &BidirectedGraph, name: &str) -> String {
    let label = |s: Sign| s.symbol();
    let mut out = String::new();
    writeln!(out, "digraph {name} {{").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for e in g.ground().elements() {
        writeln!(out, "  {e};").unwrap();
    }
    for a in g.arcs() {
        let (mut tail, mut head) = ((a.lo(), a.lo_sign()), (a.hi(), a.hi_sign()));
        if tail.1 == Sign::Minus && head.1 == Sign::Plus {
            std::mem::swap(&mut tail, &mut head);
        }
        writeln!(
            out,
            "  {} -> {} [taillabel=\"{}\", headlabel=\"{}\"];",
            tail.0,
            head.0,
            label(tail.1),
            label(head.1)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Arc;
    use crate::signed_set::GroundSet;

    #[test]
    fn label_scheme() {
        let g = BidirectedGraph::from_arcs(
            GroundSet::new(3).unwrap(),
            [
                Arc::tail_head(2, 1),
                Arc::selfloop(2, Sign::Minus),
                Arc::plus(1, 3),
                Arc::tail_head(1, 2),
            ],
        )
        .unwrap();
        let expected = "digraph H {
  node [shape=circle];
  1;
  2;
  3;
  1 -> 2 [taillabel=\"+\", headlabel=\"-\"];
  2 -> 1 [taillabel=\"+\", headlabel=\"-\"];
  1 -> 3 [taillabel=\"+\", headlabel=\"+\"];
  2 -> 2 [taillabel=\"-\", headlabel=\"-\"];
}
";
        assert_eq!(to_dot(&g, "H"), expected);
    }
}
