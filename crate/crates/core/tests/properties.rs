mod common;

use common::*;
use maglap_core::cheeger;
use maglap_core::frustration;
use maglap_core::multiway::{self, SpectralEmbedding};
use maglap_core::{spectral, Complex64, SignatureGroup, VertexSet};
use proptest::prelude::*;
use rand::Rng;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

/// `(seed, N, k)` with `k = 0` meaning `U(1)`.
fn instance(max_n: usize, ks: &'static [u32]) -> impl Strategy<Value = (u64, usize, u32)> {
    (any::<u64>(), 3..=max_n, prop::sample::select(ks))
}

fn opt_k(k: u32) -> Option<u32> {
    (k > 0).then_some(k)
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn spectrum_is_switching_invariant((seed, n, k) in instance(12, &[0, 2, 3, 5])) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.5, opt_k(k), true, seed % 2 == 0);
        let tau = random_switch(&mut r, n, g.group());
        let a = spectral::spectrum(&g).unwrap().values;
        let b = spectral::spectrum(&g.switch(&tau).unwrap()).unwrap().values;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn spectrum_within_bounds_and_min_max((seed, n, k) in instance(10, &[0, 2, 3, 4])) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.5, opt_k(k), true, seed % 2 == 1);
        let sp = spectral::spectrum(&g).unwrap();
        let dmu = g.max_mu_degree();
        prop_assert!(sp.values.iter().all(|&l| l >= -1e-9 && l <= 2.0 * dmu + 1e-9));
        for _ in 0..100 {
            let f = random_function(&mut r, n);
            prop_assert!(sp.values[0] <= spectral::rayleigh(&g, &f).unwrap() + 1e-9);
        }
    }

    #[test]
    fn eigenvalues_pair_under_negation((seed, n, k) in instance(10, &[0, 2, 4, 6])) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.6, opt_k(k), true, false);
        let a = spectral::spectrum(&g).unwrap().values;
        let b = spectral::spectrum(&g.negated().unwrap()).unwrap().values;
        let nv = a.len();
        for i in 0..nv {
            // isolated vertices have eigenvalue 0 in both spectra
            if g.degrees().iter().all(|&d| d > 0.0) {
                prop_assert!((2.0 - b[nv - 1 - i] - a[i]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn realification_doubles_the_spectrum((seed, n) in (any::<u64>(), 2usize..9)) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.6, None, true, false);
        let a = spectral::spectrum(&g).unwrap().values;
        let re = spectral::realified_spectrum(&g).unwrap();
        for (i, l) in a.iter().enumerate() {
            prop_assert!((re[2 * i] - l).abs() < 1e-9 && (re[2 * i + 1] - l).abs() < 1e-9);
        }
    }

    #[test]
    fn frustration_is_switching_invariant((seed, n, k) in instance(7, &[2, 3, 4])) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.6, Some(k), false, false);
        let tau = random_switch(&mut r, n, g.group());
        let set = VertexSet::new((0..n).filter(|_| r.gen_bool(0.7)));
        prop_assume!(!set.is_empty());
        let a = frustration::frustration_exact_cyclic(&g, &set).unwrap().value;
        let b = frustration::frustration_exact_cyclic(&g.switch(&tau).unwrap(), &set).unwrap().value;
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn zero_frustration_iff_balanced((seed, n, k) in instance(7, &[2, 3, 5]), sparse in any::<bool>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, if sparse { 0.3 } else { 0.6 }, Some(k), true, false);
        let g = if seed % 3 == 0 { trivialized(&g).switch(&random_switch(&mut r, n, g.group())).unwrap() } else { g };
        let set = VertexSet::new((0..n).filter(|_| r.gen_bool(0.8)));
        prop_assume!(!set.is_empty());
        let iota = frustration::frustration_exact_cyclic(&g, &set).unwrap().value;
        let balanced = frustration::balance_check_induced(&g, &set).unwrap().all_balanced();
        prop_assert_eq!(iota < 1e-12, balanced);
    }

    #[test]
    fn balance_witness_trivializes((seed, n, k) in instance(9, &[0, 2, 3])) {
        let mut r = rng(seed);
        let g = trivialized(&random_graph(&mut r, n, 0.4, opt_k(k), true, false));
        let g = g.switch(&random_switch(&mut r, n, g.group())).unwrap();
        for comp in frustration::balance_check(&g).components {
            prop_assert!(comp.balanced);
            let w = comp.witness.unwrap();
            for e in g.edges().iter().filter(|e| comp.vertices.contains(&e.u)) {
                let s = w.get(e.u).unwrap().mul(e.signature).mul(w.get(e.v).unwrap().inverse());
                prop_assert!(s.is_identity());
            }
        }
    }

    #[test]
    fn cheeger_sandwich((seed, n, k) in instance(8, &[2, 3, 4]), unit in any::<bool>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.5, Some(k), true, unit);
        let l1 = spectral::spectrum(&g).unwrap().values[0].max(0.0);
        let h = cheeger::h_exact(&g, 1).unwrap().value;
        prop_assert!(l1 / 2.0 <= h + 1e-9);
        prop_assert!(h <= 2.0 * (2.0 * g.max_mu_degree() * l1).sqrt() + 1e-9);
    }

    #[test]
    fn higher_order_lower_bound((seed, n, k) in instance(7, &[2, 3]), m in 1usize..=3) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.6, Some(k), true, false);
        prop_assume!(m <= n);
        let ln = spectral::spectrum(&g).unwrap().values[m - 1];
        prop_assert!(ln / 2.0 <= cheeger::h_exact(&g, m).unwrap().value + 1e-9);
    }

    #[test]
    fn balanced_signature_dominates((seed, n, k) in instance(7, &[2, 3, 4]), m in 1usize..=2) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.6, Some(k), true, seed % 2 == 0);
        let h = cheeger::h_exact(&g, m).unwrap().value;
        let h0 = cheeger::h_exact(&trivialized(&g), m).unwrap().value;
        prop_assert!(h0 <= h + 1e-12);
    }

    #[test]
    fn sweep_certificates_hold((seed, n, k) in instance(24, &[0, 2, 3, 4, 5])) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.3, opt_k(k), true, seed % 2 == 0);
        let sp = spectral::spectrum(&g).unwrap();
        prop_assume!(sp.vectors[0].iter().any(|z| z.norm() > 0.0));
        let c = cheeger::sweep_cut(&g, &sp.vectors[0]).unwrap();
        prop_assert!(c.is_certified(1e-9), "{} > {}", c.ratio, c.bound);
        prop_assert!((c.recompute(&g).unwrap() - c.ratio).abs() < 1e-9 || matches!(c.candidate, cheeger::Candidate::Partition(_)));
        if let cheeger::Candidate::Partition(p) = &c.candidate {
            prop_assert!((cheeger::k_partiteness_ratio(&g, p).unwrap() - c.ratio).abs() < 1e-9);
        }
    }

    #[test]
    fn coarea_inequality((seed, n, k) in instance(7, &[2, 3, 4])) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.6, Some(k), true, false);
        let f = random_function(&mut r, n);
        let (lhs, rhs) = cheeger::coarea_sides(&g, &f).unwrap();
        prop_assert!(rhs - lhs >= -1e-8, "{lhs} > {rhs}");
    }

    #[test]
    fn df_is_a_pseudometric((seed, dim, k) in (any::<u64>(), 1usize..4, prop::sample::select(&[0u32, 2, 3, 5][..]))) {
        let mut r = rng(seed);
        let group = opt_k(k).map_or(SignatureGroup::Circle, SignatureGroup::Cyclic);
        let pts: Vec<Vec<Complex64>> = (0..3).map(|_| random_function(&mut r, dim)).collect();
        let d = |a: &[Complex64], b: &[Complex64]| multiway::df_distance(a, b, group).unwrap();
        prop_assert_eq!(d(&pts[0], &pts[1]), d(&pts[1], &pts[0]));
        prop_assert!(d(&pts[0], &pts[0]) < 1e-10);
        prop_assert!(d(&pts[0], &pts[2]) <= d(&pts[0], &pts[1]) + d(&pts[1], &pts[2]) + 1e-10);
        let g = group.identity().mul(match group {
            SignatureGroup::Cyclic(k) => maglap_core::GroupElement::cyclic(k, 1),
            SignatureGroup::Circle => maglap_core::GroupElement::circle(r.gen_range(0.0..std::f64::consts::TAU)),
        });
        let scaled: Vec<Complex64> = pts[1].iter().map(|z| z * g.to_complex() * 2.5).collect();
        prop_assert!((d(&pts[0], &scaled) - d(&pts[0], &pts[1])).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn multiway_pipeline_bounds((seed, n, k) in instance(20, &[0, 2, 3]), m in 1usize..=3) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n.max(6), 0.4, opt_k(k), true, false);
        let rep = multiway::multiway_cluster(&g, m, seed).unwrap();
        let d = &rep.decomposition;
        prop_assert_eq!(d.parts.len(), m);
        for (i, a) in d.parts.iter().enumerate() {
            prop_assert!(!a.is_empty());
            for b in &d.parts[i + 1..] {
                prop_assert!(a.is_disjoint(b));
            }
        }
        prop_assert!(d.mass_fractions.iter().all(|&f| f >= 1.0 / (2.0 * m as f64) - 1e-12));
        prop_assert!(rep.key_slack <= 1e-10);
        prop_assert!(rep.localization_slack <= 1e-10);
        let emb = SpectralEmbedding::new(&g, m).unwrap();
        prop_assert!(d.max_cell_mass <= emb.total_mass() / (m as f64 * (1.0 - d.r * d.r)) + 1e-8);
        for c in &rep.certificates {
            prop_assert!(c.is_certified(1e-9));
        }
    }
}
