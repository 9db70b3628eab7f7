use leastgrad_core::barrier::{barrier, component, region_membership, Barrier, GEOMETRY_TOL};
use leastgrad_core::cantor::{resolve, ArcAddress};
use leastgrad_core::chain::{chord_chain, chord_length, chord_lengths_consistent};
use leastgrad_core::planar::Point2;
use proptest::prelude::*;
use std::time::Instant;

#[test]
fn barriers_are_disjoint_and_nested_to_depth_eight() {
    let start = Instant::now();
    let mut previous: Option<Barrier> = None;
    for n in 1..=8 {
        let b = barrier(n).unwrap();
        assert_eq!(b.components().len(), 1 << n);
        assert_eq!(b.find_overlap(GEOMETRY_TOL), None, "overlap at depth {n}");
        if let Some(coarser) = &previous {
            assert_eq!(b.find_escape(coarser, GEOMETRY_TOL), None, "escape at depth {n}");
            assert!(b.area() < coarser.area());
        }
        previous = Some(b);
    }
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn chord_chains_follow_the_links() {
    for n in 1..=6 {
        assert!(chord_lengths_consistent(n, 1e-12).unwrap());
        for i in 0..1u64 << n {
            let addr = ArcAddress::from_index(n, i).unwrap();
            let chain = chord_chain(&addr).unwrap();
            let s = chain.parameter_length;
            assert!((s - chord_length(n)).abs() < 1e-12);
            assert_eq!(chain.links().len(), n + 1);
            for link in chain.links() {
                assert!(link.length() >= s - 1e-12);
            }
            let arc = resolve(&addr);
            for row in chain.samples(16) {
                assert_eq!(row.len(), 17);
            }
            // phi_0 lands on the arc, phi_1 on the chord
            for (t, p) in &chain.samples(16)[0] {
                assert!((p.norm() - 1.0).abs() < 1e-12, "t = {t}");
                assert!(arc.contains_angle(p.y.atan2(p.x)));
            }
            let comp = component(&addr).unwrap();
            assert!(comp.link_mismatch() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn membership_agrees_with_components(x in -1.0f64..1.0, y in 0.8f64..1.0, n in 1usize..5) {
        let p = Point2::new(x, y);
        let b = barrier(n).unwrap();
        let by_component = b.components().iter().any(|c| c.contains(p, 0.0));
        prop_assert_eq!(region_membership(p, n).unwrap(), by_component);
        if by_component && n > 1 {
            prop_assert!(region_membership(p, n - 1).unwrap());
        }
    }
}
