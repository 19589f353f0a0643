mod common;

use common::{fixture_text, load, random_progressive_graph, random_stack, shuffled, UPG_FIXTURES};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sha2::{Digest, Sha256};
use upo::interface::dot::export_dot;
use upo::interface::layers_format::{parse_layers, serialize_layers};
use upo::interface::upg::{parse_upg, serialize_upg, UpgDocument};

// Fixtures were transcribed by hand once; any edit must be
// deliberate and update this table.
const CHECKSUMS: &[(&str, &str)] = &[
    ("vee.upg", "e7ed522b7c440419503880e404035fd73b86c8352f12fa374e3dce313fd7b802"),
    ("fork.upg", "e36e91a3195b0173304eb9a4e8f54716c32a4ee2cfcb1c8c736a9234163d9ea3"),
    ("merge.upg", "226f49436d8bf6847117f7480f6263077c799d3402232c3d187311533026c03d"),
    ("wire.upg", "bb6d359af96d82db56a1a1ed9a1a63299a540ae8aaaf25fce052cb1b4ce0aa38"),
    ("boxed_example.upg", "1f1200a28a8bfddf34d70449a4d39dcf77e1789b7a9cae9f61e1fe757c22ca78"),
    ("wire_beside_sink.upg", "c2cec0ddd9403397c171ad50494efa590186e52f646711969b82095c638c98d7"),
    ("wire_inside_sink.upg", "49bfc56646b3f3c6e7223f2a9d6f8cf8edbbdd22dd8f3f51b433d862e24c404a"),
    ("isolated_vertices.upg", "72e11316732b1e1356051dd7e6684ca416babfa97dca989aab6f40a94af133d7"),
    ("closed_drawing.upg", "42496beee411fa9c2cd724ed414a046c0aace89e19638559fe266b218f475e56"),
    ("closed_drawing.layers", "c20c31a9faa01bfb02fd0d144dfebf58b48a4dc8b0dd757256f7cd57a30190d8"),
];

#[test]
fn fixtures_are_locked() {
    for (file, expected) in CHECKSUMS {
        let digest = Sha256::digest(fixture_text(file).as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(&hex, expected, "{file}");
    }
}

#[test]
fn fixtures_round_trip() {
    for name in UPG_FIXTURES {
        let doc = load(name);
        let text = serialize_upg(&doc);
        assert_eq!(parse_upg(&text).unwrap(), doc, "{name}");
        assert_eq!(serialize_upg(&parse_upg(&text).unwrap()), text, "{name}");
    }
    let layers = parse_layers(&fixture_text("closed_drawing.layers")).unwrap();
    let text = serialize_layers(&layers.stack);
    assert_eq!(parse_layers(&text).unwrap().stack, layers.stack);
}

#[test]
fn fork_over_merge_serializes_fused_ids() {
    let fork = common::load_upo("fork");
    let merge = common::load_upo("merge");
    let c = upo::compose(&fork, &merge).unwrap();
    let text = serialize_upg(&UpgDocument::new(c.graph, Some(c.order)));
    assert!(text.ends_with("order in o1 o2 out\n"), "{text}");
}

#[test]
fn wire_inside_sink_dot() {
    let dot = export_dot(&load("wire_inside_sink"));
    assert_eq!(dot.lines().filter(|l| l.contains(" -> ") && l.contains(", label=\"")).count(), 3);
    assert_eq!(dot.matches("[shape=circle,").count(), 1);
    assert_eq!(dot.matches("[shape=point,").count(), 4);
    assert_eq!(dot, export_dot(&load("wire_inside_sink")));
}

proptest! {
    #[test]
    fn random_documents_round_trip(seed in any::<u64>(), with_order in any::<bool>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_progressive_graph(&mut rng, 8);
        let order = with_order.then(|| shuffled(&mut rng, &g));
        let doc = UpgDocument::new(g, order);
        let text = serialize_upg(&doc);
        let back = parse_upg(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(serialize_upg(&back), text);
        prop_assert_eq!(export_dot(&back), export_dot(&doc));
    }

    #[test]
    fn random_stacks_round_trip(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let top = rng.gen_range(0..=3);
        let layers = rng.gen_range(0..=4);
        let stack = random_stack(&mut rng, top, layers);
        let text = serialize_layers(&stack);
        prop_assert_eq!(parse_layers(&text).unwrap().stack, stack);
    }
}
