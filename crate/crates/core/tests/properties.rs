// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;

use treebar::coretree::{brute_force_core_tree, core_tree, CoreTree};
use treebar::ingest::{parse_bytes, preprocess, ParseOptions};
use treebar::kcore::{brute_force_coreness, compute_coreness, sort_edges_desc};
use treebar::layout::compute_layout;
use treebar::render::emit_svg;
use treebar::scale::{auto_scale, bar_count, collapse, naive_collapse};
use treebar::{synth, Graph, RenderConfig};

fn edge_lists() -> impl Strategy<Value = Vec<(u64, u64)>> {
    prop::collection::vec((0u64..40, 0u64..40), 1..160)
}

fn graph(pairs: &[(u64, u64)]) -> Option<Graph> {
    Graph::from_edges(pairs).ok()
}

fn stripped_tree(g: &Graph) -> CoreTree {
    core_tree(g, &compute_coreness(g), true).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn coreness_matches_peeling(pairs in edge_lists()) {
        if let Some(g) = graph(&pairs) {
            prop_assert_eq!(compute_coreness(&g), brute_force_coreness(&g));
        }
    }

    #[test]
    fn coreness_ignores_id_names(pairs in edge_lists(), shift in 1u64..1_000_000) {
        let Some(g) = graph(&pairs) else { return Ok(()) };
        // An order-preserving relabeling yields the same dense graph.
        let moved: Vec<(u64, u64)> = pairs.iter().map(|&(u, v)| (u * 3 + shift, v * 3 + shift)).collect();
        let h = graph(&moved).unwrap();
        prop_assert_eq!(compute_coreness(&g), compute_coreness(&h));
        prop_assert_eq!(stripped_tree(&g), stripped_tree(&h));
    }

    #[test]
    fn edge_order_is_descending(pairs in edge_lists()) {
        let Some(g) = graph(&pairs) else { return Ok(()) };
        let lab = compute_coreness(&g);
        let stream = sort_edges_desc(&g, &lab);
        prop_assert_eq!(stream.len(), g.m());
        prop_assert!(stream.edges().windows(2).all(|w| w[0].coreness >= w[1].coreness));
    }

    #[test]
    fn tree_matches_component_oracle(pairs in edge_lists()) {
        if let Some(g) = graph(&pairs) {
            let t = stripped_tree(&g);
            prop_assert!(t.validate().is_ok());
            prop_assert_eq!(t.n_vertices(), g.n());
            prop_assert_eq!(&t, &brute_force_core_tree(&g));
        }
    }

    #[test]
    fn unstripped_tree_has_one_leaf_per_vertex(pairs in edge_lists()) {
        let Some(g) = graph(&pairs) else { return Ok(()) };
        let full = core_tree(&g, &compute_coreness(&g), false).unwrap();
        prop_assert!(full.validate().is_ok());
        let leaves = full.nodes().iter().filter(|n| n.vertex.is_some()).count();
        prop_assert_eq!(leaves, g.n());
        prop_assert_eq!(full.non_leaf_count(), stripped_tree(&g).len());
    }

    #[test]
    fn tree_json_round_trips(pairs in edge_lists()) {
        let Some(g) = graph(&pairs) else { return Ok(()) };
        let t = stripped_tree(&g);
        prop_assert_eq!(&CoreTree::from_json(&t.to_json()).unwrap(), &t);
    }

    #[test]
    fn edge_list_text_round_trips(pairs in edge_lists()) {
        let Some(g) = graph(&pairs) else { return Ok(()) };
        let mut text = Vec::new();
        g.write_edge_list(&mut text).unwrap();
        let raw = parse_bytes(&text, &ParseOptions::default(), "mem").unwrap();
        prop_assert_eq!(preprocess(&raw).unwrap(), g);
    }

    #[test]
    fn collapse_agrees_with_unit_expansion(nodes in 1usize..60, span in 0u32..4, seed: u64, t in 1u32..9) {
        let tree = synth::random_core_tree(nodes, span, seed);
        let fast = collapse(&tree, t).unwrap();
        prop_assert!(fast.validate().is_ok());
        prop_assert_eq!(&fast, &naive_collapse(&tree, t).unwrap());
        prop_assert_eq!(fast.n_vertices(), tree.n_vertices());
        prop_assert!(fast.nodes().iter().skip(1).all(|n| n.min_c % t == 0));
    }

    #[test]
    fn auto_scale_is_minimal(nodes in 1usize..120, span in 0u32..4, seed: u64, target in 1usize..40) {
        let tree = synth::random_core_tree(nodes, span, seed);
        let got = auto_scale(&tree, target).unwrap();
        prop_assert!(got.bars <= target);
        for t in 1..got.scale.get() {
            prop_assert!(bar_count(&tree, t).unwrap() > target);
        }
    }

    #[test]
    fn svg_has_a_square_per_node(nodes in 1usize..80, span in 0u32..3, seed: u64) {
        let tree = synth::random_core_tree(nodes, span, seed);
        let doc = emit_svg(&compute_layout(&tree), &RenderConfig::default()).unwrap();
        prop_assert_eq!(doc.count_class("square"), tree.len());
        let with_children = tree.nodes().iter().filter(|n| !n.children.is_empty()).count();
        prop_assert_eq!(doc.count_class("container"), with_children);
    }
}
