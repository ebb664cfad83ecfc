use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use qagait_core::geometry::{lean_label, normalize};
use qagait_core::qa::{max_connect_filter, shape_distance, QaConfig};
use qagait_core::qloss::{qatriplet_margin, quality_from_aggregates, DEFAULT_H};
use qagait_core::silcore::{hu_vector, moments};
use qagait_core::Silhouette;

fn grid(h: usize, w: usize) -> impl Strategy<Value = Silhouette> {
    proptest::collection::vec(any::<bool>(), h * w).prop_map(move |m| Silhouette::new(h, w, m).unwrap())
}

/// A few overlapping rectangles: nonempty, varied shapes.
fn body() -> impl Strategy<Value = Silhouette> {
    proptest::collection::vec((0usize..40, 0usize..70, 2usize..20, 4usize..40), 1..4).prop_map(|rects| {
        Silhouette::from_fn(80, 60, |x, y| {
            rects
                .iter()
                .any(|&(x0, y0, w, h)| (x0..x0 + w).contains(&x) && (y0..y0 + h).contains(&y))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        rng_seed: RngSeed::Fixed(0x9a17),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn max_connect_idempotent(sil in grid(24, 16)) {
        let cfg = QaConfig { eps: 0.01, ..QaConfig::default() };
        let first = max_connect_filter(&sil, &cfg);
        if let Some(cleaned) = first.cleaned {
            let second = max_connect_filter(&cleaned, &cfg);
            prop_assert_eq!(second.max_cc_ratio, 1.0);
            prop_assert_eq!(second.cleaned.unwrap(), cleaned);
        }
    }

    #[test]
    fn shape_distance_symmetric(a in body(), b in body()) {
        let (ha, hb) = (hu_vector(&moments(&a).unwrap()), hu_vector(&moments(&b).unwrap()));
        let (ab, ba) = (shape_distance(&ha, &hb), shape_distance(&hb, &ha));
        prop_assert_eq!(ab.clone(), ba);
        if let Ok(d) = ab {
            prop_assert!(d >= 0.0);
        }
        if let Ok(d) = shape_distance(&ha, &ha) {
            prop_assert_eq!(d, 0.0);
        }
    }

    #[test]
    fn normalize_idempotent(sil in body()) {
        let once = normalize(&sil, 64, 44).unwrap();
        prop_assert_eq!(normalize(&once, 64, 44).unwrap(), once);
    }

    #[test]
    fn lean_label_mirrors(sil in body(), p in 0.0f64..1.0) {
        // odd widths give the middle column to the right half
        let (x0, _, x1, _) = sil.bounding_box().unwrap();
        prop_assume!((x1 - x0 + 1) % 2 == 0);
        let l = lean_label(&sil, p).unwrap();
        prop_assert_eq!(lean_label(&sil.mirror_horizontal(), p).unwrap(), l.mirrored());
    }

    #[test]
    fn triplet_margin_bounds(pq in -1.0f64..=1.0, m2 in 0.01f64..1.0) {
        let m = qatriplet_margin(pq, m2);
        prop_assert!(m >= m2 && m <= 2.0 * m2);
    }

    #[test]
    fn quality_affine_invariant(
        aggs in proptest::collection::vec(0.1f64..10.0, 2..32),
        a in 0.01f64..100.0,
        b in -50.0f64..50.0,
    ) {
        let base = quality_from_aggregates(&aggs, DEFAULT_H).unwrap();
        let moved: Vec<f64> = aggs.iter().map(|x| a * x + b).collect();
        let after = quality_from_aggregates(&moved, DEFAULT_H).unwrap();
        for (x, y) in base.iter().zip(&after) {
            prop_assert!((-1.0..=1.0).contains(x));
            prop_assert!((x - y).abs() <= 1e-12, "{} vs {}", x, y);
        }
    }
}
