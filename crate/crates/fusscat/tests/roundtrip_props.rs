//! Property-based round trips over randomly drawn instances.
//!
//! Usage: cargo test --test roundtrip_props

use proptest::prelude::*;

use fusscat::bijections::{
    contour_path, contour_path_inv, decode_marked, encode_marked, outdegree_path,
    outdegree_path_inv, reverse_contour_path, reverse_contour_path_inv, rotate, MarkedTree,
};
use fusscat::counting::fuss_catalan;
use fusscat::generate::gen_trees;
use fusscat::tree::TupletTree;
use fusscat::LatticePath;

/// Draw (d, n, tree) by indexing into the exhaustive enumeration.
fn any_tree() -> impl Strategy<Value = TupletTree> {
    (1usize..=3, 0usize..=5)
        .prop_flat_map(|(d, n)| {
            let count: u64 = fuss_catalan(d as u64, n as u64).try_into().expect("small");
            (Just(d), Just(n), 0..count)
        })
        .prop_map(|(d, n, idx)| {
            gen_trees(d, n)
                .expect("under cap")
                .nth(idx as usize)
                .expect("index within the family")
        })
}

fn any_marked_tree() -> impl Strategy<Value = MarkedTree> {
    (any_tree(), any::<proptest::sample::Index>()).prop_map(|(tree, which)| {
        let order = tree.preorder();
        let vertex = order[which.index(order.len())].clone();
        MarkedTree::new(tree, vertex).expect("preorder addresses are valid")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn boundary_encodings_round_trip(tree in any_tree()) {
        prop_assert_eq!(contour_path_inv(&contour_path(&tree)).unwrap(), tree.clone());
        prop_assert_eq!(reverse_contour_path_inv(&reverse_contour_path(&tree)).unwrap(), tree.clone());
        prop_assert_eq!(outdegree_path_inv(&outdegree_path(&tree)).unwrap(), tree);
    }

    #[test]
    fn tree_text_round_trips(tree in any_tree()) {
        prop_assert_eq!(TupletTree::parse(&tree.to_text()).unwrap(), tree);
    }

    #[test]
    fn path_text_round_trips(tree in any_tree()) {
        let path = contour_path(&tree);
        prop_assert_eq!(LatticePath::parse(&path.to_text()).unwrap(), path);
    }

    #[test]
    fn vertex_and_tuplet_counts_are_linked(tree in any_tree()) {
        let n = tree.tuplet_count();
        prop_assert_eq!(tree.vertex_count(), tree.d() * n + 1);
        prop_assert_eq!(tree.preorder().len(), tree.d() * n + 1);
        let outdegree_sum: usize = tree.outdegrees().iter().sum();
        prop_assert_eq!(outdegree_sum, n);
    }

    #[test]
    fn preorder_is_duplicate_free_and_level_monotone(tree in any_tree()) {
        let order = tree.preorder();
        let distinct: std::collections::BTreeSet<_> = order.iter().collect();
        prop_assert_eq!(distinct.len(), order.len());
        // Every prefix of an address is an ancestor with smaller level.
        for addr in &order {
            if let Some(parent) = addr.parent() {
                prop_assert!(parent.level() + 1 == addr.level());
                prop_assert!(parent.is_prefix_of(addr));
            }
        }
    }

    #[test]
    fn sibling_counts_balance(marked in any_marked_tree()) {
        let tree = marked.tree();
        let stats = tree.stats(marked.vertex()).unwrap();
        if let Some(parent) = marked.vertex().parent() {
            let parent_stats = tree.stats(&parent).unwrap();
            prop_assert_eq!(
                stats.global_elders + stats.global_youngers + 1,
                parent_stats.child_count
            );
            let last = marked.vertex().steps.last().unwrap();
            prop_assert_eq!(stats.tuplet_elders, last.pos);
        } else {
            prop_assert_eq!(stats.global_elders + stats.global_youngers, 0);
        }
    }

    #[test]
    fn rotation_is_a_group_action(tree in any_tree(), a in 0usize..20, b in 0usize..20) {
        let path = contour_path(&tree);
        prop_assume!(!path.is_empty());
        let two_steps = rotate(&rotate(&path, a).unwrap(), b).unwrap();
        let one_step = rotate(&path, a + b).unwrap();
        prop_assert_eq!(two_steps, one_step);
        prop_assert_eq!(rotate(&path, path.len()).unwrap(), path);
    }

    #[test]
    fn exchange_is_involutive(marked in any_marked_tree(), which in any::<proptest::sample::Index>()) {
        let tree = marked.tree();
        let order = tree.preorder();
        let v = marked.vertex();
        let w = &order[which.index(order.len())];
        prop_assume!(!v.is_prefix_of(w) && !w.is_prefix_of(v));
        let once = tree.exchange_subtrees(v, w).unwrap();
        prop_assert_eq!(once.tuplet_count(), tree.tuplet_count());
        prop_assert_eq!(&once.exchange_subtrees(v, w).unwrap(), tree);
    }

    #[test]
    fn main_bijection_round_trips(marked in any_marked_tree(), k_frac in 0.0f64..1.0, l_frac in 0.0f64..1.0) {
        let tree = marked.tree();
        let stats = tree.stats(marked.vertex()).unwrap();
        let k = (k_frac * (stats.outdegree + 1) as f64) as usize;
        let l = (l_frac * (stats.level + 1) as f64) as usize;
        prop_assume!(k <= stats.outdegree && l <= stats.level);
        let image = encode_marked(&marked, k, l).unwrap();
        prop_assert_eq!(image.digits.len(), l);
        let back = decode_marked(
            &image.digits,
            &image.path,
            tree.d(),
            tree.tuplet_count(),
            k,
            l,
        )
        .unwrap();
        prop_assert_eq!(back, marked);
    }
}
