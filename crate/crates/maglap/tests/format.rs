use maglap::format::{parse, serialize, serialize_mixed};
use maglap::generate::{er_signed, mixed_planted, PlantedParams};
use maglap_core::graph::Measure;
use maglap_core::MixedGraph;
use proptest::prelude::*;

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(seed in any::<u64>(), n in 1usize..15, k in 0u32..6, weighted in any::<bool>(), measures in any::<bool>()) {
        let g = er_signed(n, 0.4, (k > 0).then_some(k), weighted, seed).unwrap();
        let f = parse(&serialize(&g, None, measures)).unwrap();
        if g.num_edges() == 0 {
            // no line carries the group of an edgeless graph
            let h = f.signed(None, None).unwrap();
            prop_assert_eq!(h.num_vertices(), n);
            prop_assert_eq!(h.measures(), g.measures());
            return Ok(());
        }
        prop_assert!(f.signed(None, None).unwrap().same_as(&g));
        let names: Vec<String> = (0..n).map(|u| format!("n{}", n - u)).collect();
        let f = parse(&serialize(&g, Some(&names), measures)).unwrap();
        prop_assert_eq!(&f.names, &names);
        prop_assert!(f.signed(None, None).unwrap().same_as(&g));
    }

    #[test]
    fn conversion_ignores_arc_order(seed in any::<u64>(), k in 2u32..6, rot in any::<prop::sample::Index>()) {
        let (m, _) = mixed_planted(PlantedParams { k, size: 3, noise: 0.3, ..Default::default() }, seed).unwrap();
        let mut arcs = m.arcs().to_vec();
        let mut und = m.undirected().to_vec();
        if !arcs.is_empty() {
            let r = rot.index(arcs.len());
            arcs.rotate_left(r);
            arcs.reverse();
        }
        und.reverse();
        let shuffled = MixedGraph::new(m.num_vertices(), und, arcs).unwrap();
        let a = m.to_signed(k, Measure::Degree).unwrap();
        let b = shuffled.to_signed(k, Measure::Degree).unwrap();
        prop_assert!(a.same_as(&b));
    }

    #[test]
    fn mixed_text_round_trips(seed in any::<u64>()) {
        let (m, _) = mixed_planted(PlantedParams { noise: 0.2, ..Default::default() }, seed).unwrap();
        let f = parse(&serialize_mixed(&m, None)).unwrap();
        let again = f.mixed().unwrap();
        prop_assert!(again.to_signed(3, Measure::Unit).unwrap().same_as(&m.to_signed(3, Measure::Unit).unwrap()));
    }

    #[test]
    fn reversed_edges_carry_inverse_signatures(seed in any::<u64>(), k in 0u32..5) {
        let g = er_signed(8, 0.5, (k > 0).then_some(k), true, seed).unwrap();
        for u in 0..8 {
            for nb in g.neighbors(u) {
                let back = g.signature(nb.vertex, u).unwrap();
                prop_assert!((nb.signature.to_complex() * back.to_complex() - 1.0).norm() < 1e-12);
            }
        }
    }
}
