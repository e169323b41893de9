//! Built-in graphs and query instances used by the worked examples and the
//! differential test suites: the family-tree fragment, the pattern-semantics
//! example graph, the data-link encoding, the Hamiltonian reduction, and the
//! three-value chain constructions.

use crate::graph::{DataGraph, DataValue};

/// The family-tree fragment: k = 2 properties (name, age), labels
/// s(pouse), p(arent), f(riend). Only the nodes and edges touched by the
/// worked example are materialized; unnamed attributes are filled in.
pub fn fig3_graph() -> DataGraph {
    DataGraph::new(
        vec!["s".into(), "p".into(), "f".into()],
        2,
        vec![
            DataValue::new("07", vec!["Anna".into(), "66".into()]),
            DataValue::new("03", vec!["Mary".into(), "56".into()]),
            DataValue::new("05", vec!["John".into(), "60".into()]),
            DataValue::new("11", vec!["Tina".into(), "30".into()]),
            DataValue::new("24", vec!["Paul".into(), "5".into()]),
            DataValue::new("29", vec!["Paul".into(), "5".into()]),
        ],
        vec![
            ("03".into(), "s".into(), "05".into()),
            ("05".into(), "p".into(), "11".into()),
            ("11".into(), "p".into(), "24".into()),
            ("24".into(), "f".into(), "29".into()),
        ],
    )
    .expect("static graph is valid")
}

/// The seven-node pattern-semantics example graph over {a, b}: the b-cycle
/// n4 -> n5 -> n6 -> n7 -> n4 with exit n7 -> n3, the a-cycle n1 <-> n2 with
/// exit n2 -> n3, and entry edges n3 -> n4, n3 -> n1. Data: n1 = n2 = 0 and
/// ni = i for i >= 3.
pub fn fig5_graph() -> DataGraph {
    DataGraph::new(
        vec!["a".into(), "b".into()],
        1,
        vec![
            DataValue::new("n1", vec!["0".into()]),
            DataValue::new("n2", vec!["0".into()]),
            DataValue::new("n3", vec!["3".into()]),
            DataValue::new("n4", vec!["4".into()]),
            DataValue::new("n5", vec!["5".into()]),
            DataValue::new("n6", vec!["6".into()]),
            DataValue::new("n7", vec!["7".into()]),
        ],
        vec![
            ("n4".into(), "b".into(), "n5".into()),
            ("n5".into(), "b".into(), "n6".into()),
            ("n6".into(), "b".into(), "n7".into()),
            ("n7".into(), "b".into(), "n4".into()),
            ("n7".into(), "b".into(), "n3".into()),
            ("n2".into(), "b".into(), "n3".into()),
            ("n3".into(), "a".into(), "n4".into()),
            ("n3".into(), "a".into(), "n1".into()),
            ("n1".into(), "a".into(), "n2".into()),
            ("n2".into(), "a".into(), "n1".into()),
        ],
    )
    .expect("static graph is valid")
}

/// The pattern from the worked example, in the concrete surface syntax.
pub fn fig5_pattern_p() -> &'static str {
    "(x) -[a]-> () ( ( -[b]-> -[b]-> -[b]-> ){1..inf} + ( ( (y) ->{3..7} (z) )<y ~data z> ){1..1} ) () -[b]-> (x)"
}

/// The two-b-edges pattern from the same example.
pub fn fig5_pattern_q() -> &'static str {
    "-[b]-> -[b]->"
}

/// Encodes an ordinary directed graph as a sparsely connected data graph:
/// each source edge (u, w) becomes a fresh pair of lobe nodes p, q with a
/// shared fresh data value, an OUT edge p -> u and an IN edge q -> w. Two
/// original nodes are then data-linked exactly when the source graph has the
/// edge.
pub fn data_link_encoding(n: usize, edges: &[(usize, usize)]) -> DataGraph {
    assert!(n >= 1);
    let mut nodes = Vec::new();
    for v in 1..=n {
        nodes.push(DataValue::new(format!("v{v}"), vec!["node".into()]));
    }
    let mut graph_edges = Vec::new();
    for (i, &(u, w)) in edges.iter().enumerate() {
        assert!(u >= 1 && u <= n && w >= 1 && w <= n);
        let val = format!("e{i}");
        let p = format!("p{i}");
        let q = format!("q{i}");
        nodes.push(DataValue::new(p.clone(), vec![val.clone()]));
        nodes.push(DataValue::new(q.clone(), vec![val]));
        graph_edges.push((p, "OUT".to_string(), format!("v{u}")));
        graph_edges.push((q, "IN".to_string(), format!("v{w}")));
    }
    DataGraph::new(vec!["OUT".into(), "IN".into()], 1, nodes, graph_edges)
        .expect("encoding is valid")
}

/// The data-link example instance: five original nodes where (v1, v4) is an
/// edge of the source graph and (v3, v5) is not.
pub fn fig4_graph() -> DataGraph {
    data_link_encoding(5, &[(1, 4), (2, 4), (4, 5), (5, 2)])
}

/// The Hamiltonian-path reduction: layers i = 1..n of copies of the source
/// nodes, layer-to-layer edges following source edges, labeled `a` into the
/// second and last layers and `b` elsewhere, with the source node number as
/// the data value of every copy. The source graph has a Hamiltonian path iff
/// the result has a path whose labels match a b* a and whose data values
/// never repeat.
pub fn hamiltonian_reduction_graph(n: usize, edges: &[(usize, usize)]) -> DataGraph {
    assert!(n >= 3, "the reduction needs at least three source nodes");
    let mut nodes = Vec::new();
    for i in 1..=n {
        for v in 1..=n {
            nodes.push(DataValue::new(format!("{}", v + i * n), vec![format!("{v}")]));
        }
    }
    let mut out = Vec::new();
    for i in 2..=n {
        let lbl = if i == 2 || i == n { "a" } else { "b" };
        for &(v, w) in edges {
            assert!(v >= 1 && v <= n && w >= 1 && w <= n);
            out.push((
                format!("{}", v + (i - 1) * n),
                lbl.to_string(),
                format!("{}", w + i * n),
            ));
        }
    }
    DataGraph::new(vec!["a".into(), "b".into()], 1, nodes, out).expect("reduction is valid")
}

/// A chain of 3^l nodes whose data values cycle d1 d2 d3; the witness family
/// from the three-value separation argument.
pub fn three_value_chain(l: u32, values: [&str; 3]) -> DataGraph {
    let n = 3usize.pow(l);
    chain_with_values(&(0..n).map(|i| values[i % 3].to_string()).collect::<Vec<_>>())
}

/// A chain graph (single label "e") over the given data values, one node per
/// value, in order.
pub fn chain_with_values(values: &[String]) -> DataGraph {
    assert!(!values.is_empty());
    let nodes: Vec<DataValue> = values
        .iter()
        .enumerate()
        .map(|(i, v)| DataValue::new(format!("c{i:03}"), vec![v.clone()]))
        .collect();
    let edges: Vec<(String, String, String)> = (1..values.len())
        .map(|i| (format!("c{:03}", i - 1), "e".to_string(), format!("c{i:03}")))
        .collect();
    DataGraph::new(vec!["e".into()], 1, nodes, edges).expect("chain is valid")
}

/// Merges a middle segment [a, b] of one value sequence into another,
/// mirroring the merge step of the three-value separation argument.
pub fn merged_chain(base: &[String], other: &[String], a: usize, b: usize) -> DataGraph {
    assert_eq!(base.len(), other.len());
    assert!(a <= b && b < base.len());
    let values: Vec<String> = base
        .iter()
        .enumerate()
        .map(|(i, v)| if i >= a && i <= b { other[i].clone() } else { v.clone() })
        .collect();
    chain_with_values(&values)
}

/// The directed k-cycle as a data graph (ids c1..ck, single label "e",
/// one data property equal to the id).
pub fn directed_cycle(k: usize) -> DataGraph {
    assert!(k >= 1);
    let nodes: Vec<DataValue> =
        (1..=k).map(|i| DataValue::new(format!("c{i}"), vec![format!("{i}")])).collect();
    let edges: Vec<(String, String, String)> =
        (1..=k).map(|i| (format!("c{i}"), "e".to_string(), format!("c{}", i % k + 1))).collect();
    DataGraph::new(vec!["e".into()], 1, nodes, edges).expect("cycle is valid")
}

/// The out-star with k leaves: hub h with an edge to each leaf.
pub fn out_star(k: usize) -> DataGraph {
    let mut nodes = vec![DataValue::new("h", vec!["0".into()])];
    let mut edges = Vec::new();
    for i in 1..=k {
        nodes.push(DataValue::new(format!("s{i}"), vec![format!("{i}")]));
        edges.push(("h".to_string(), "e".to_string(), format!("s{i}")));
    }
    DataGraph::new(vec!["e".into()], 1, nodes, edges).expect("star is valid")
}

/// The complete directed graph on k nodes (no self loops), one label,
/// distinct data values.
pub fn complete_graph(k: usize) -> DataGraph {
    assert!(k >= 1);
    let nodes: Vec<DataValue> =
        (1..=k).map(|i| DataValue::new(format!("k{i}"), vec![format!("{i}")])).collect();
    let mut edges = Vec::new();
    for i in 1..=k {
        for j in 1..=k {
            if i != j {
                edges.push((format!("k{i}"), "e".to_string(), format!("k{j}")));
            }
        }
    }
    DataGraph::new(vec!["e".into()], 1, nodes, edges).expect("complete graph is valid")
}

/// Diamond with a short and a long route from s to t: s -> t and
/// s -> m -> t.
pub fn diamond_graph() -> DataGraph {
    DataGraph::new(
        vec!["e".into()],
        1,
        vec![
            DataValue::new("s", vec!["0".into()]),
            DataValue::new("m", vec!["1".into()]),
            DataValue::new("t", vec!["2".into()]),
        ],
        vec![
            ("s".into(), "e".into(), "t".into()),
            ("s".into(), "e".into(), "m".into()),
            ("m".into(), "e".into(), "t".into()),
        ],
    )
    .expect("diamond is valid")
}

/// Single directed edge v -> w.
pub fn single_edge_graph() -> DataGraph {
    DataGraph::new(
        vec!["e".into()],
        1,
        vec![DataValue::new("v", vec!["0".into()]), DataValue::new("w", vec!["1".into()])],
        vec![("v".into(), "e".into(), "w".into())],
    )
    .expect("edge is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig5_edges_match_reconstruction() {
        let g = fig5_graph();
        assert_eq!(g.node_count(), 7);
        assert_eq!(g.edges().count(), 10);
        let b = g.label_by_name("b").unwrap();
        assert!(g.has_edge(g.node_by_id("n7").unwrap(), b, g.node_by_id("n3").unwrap()));
    }

    #[test]
    fn reduction_layers_are_labeled_correctly() {
        let g = hamiltonian_reduction_graph(3, &[(1, 2), (2, 3), (3, 1)]);
        assert_eq!(g.node_count(), 9);
        // layer 2 and layer n edges are all `a`
        let a = g.label_by_name("a").unwrap();
        let b = g.label_by_name("b").unwrap();
        let edges: Vec<_> = g.edges().collect();
        assert!(edges.iter().any(|&(_, l, _)| l == a));
        // with n = 3 every layer is 2 or n, so no b edges at all
        assert!(edges.iter().all(|&(_, l, _)| l != b));
    }
}
