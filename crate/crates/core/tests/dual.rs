mod common;

use common::arb_q;
use proptest::prelude::*;
use wickrep::dual::*;
use wickrep::fock::fock_window;
use wickrep::multiindex::{QMatrix, TailSpec, Word};
use wickrep::tailrep::TailWindow;
use wickrep::window::RepWindow;

fn tail(r: &TailSpec, l: usize, q: &QMatrix<f64>) -> RepWindow<f64> {
    TailWindow::new(r, l, 4, q).unwrap().rep_window(q).unwrap()
}

fn windows(q: &QMatrix<f64>) -> Vec<RepWindow<f64>> {
    vec![
        fock_window(3, q),
        tail(&TailSpec::constant(2), 3, q),
        tail(&TailSpec::periodic([1, 2]).unwrap(), 3, q),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn duals_are_biorthogonal(q in arb_q(2, 0.7)) {
        for w in windows(&q) {
            let ds = DualSystem::new(&w).unwrap();
            for l in 0..w.max_depth {
                let r = biorthogonality_residual(&w, &ds, l).unwrap();
                prop_assert!(r.value < 1e-8, "{}: {r:?}", w.description);
            }
        }
    }

    #[test]
    fn complements_are_sound(q in arb_q(3, 0.7)) {
        let w = tail(&TailSpec::constant(1), 2, &q);
        let ds = DualSystem::new(&w).unwrap();
        for l in 0..2 {
            for j in 1..=3 {
                let c = complement_check(&w, ds.get(j, l)).unwrap();
                prop_assert!(c.containment < 1e-10);
                prop_assert_eq!(c.rank, c.expected_rank);
                prop_assert!(c.idempotence < 1e-10 && c.self_adjointness < 1e-10);
                prop_assert!(c.min_angle > 0.0);
            }
        }
    }

    #[test]
    fn pn_is_idempotent(q in arb_q(2, 0.7), mu in prop::collection::vec(1u8..=2, 1..=3)) {
        for w in windows(&q) {
            let ds = DualSystem::new(&w).unwrap();
            let p = pn_projection(&Word::from(mu.clone()), &w, &ds).unwrap();
            prop_assert!(p.idempotence_residual() < 1e-8);
        }
    }

    #[test]
    fn decay_across_classes(q in arb_q(2, 0.5)) {
        for (r, other) in [(TailSpec::constant(2), 1u8), (TailSpec::constant(1), 2u8)] {
            let w = tail(&r, 4, &q);
            let ds = DualSystem::new(&w).unwrap();
            let betas = w.level(3);
            for row in decay_table(|_| other, &betas, 4, &w, &ds).unwrap() {
                prop_assert!(row.windows(2).all(|p| p[1] <= p[0] + 1e-12), "{row:?}");
                prop_assert!(*row.last().unwrap() < 1e-6, "{row:?}");
            }
        }
    }
}

#[test]
fn pn_is_oblique_for_nonzero_q() {
    // P_n(μ) is an idempotent but, away from q = 0, not Gram-self-adjoint
    let r = TailSpec::constant(2);
    for (qv, oblique) in [(0.0, false), (0.5, true)] {
        let q = QMatrix::<f64>::real(2, qv).unwrap();
        let w = tail(&r, 3, &q);
        let ds = DualSystem::new(&w).unwrap();
        let p = pn_projection(&Word::from([2, 2]), &w, &ds).unwrap();
        assert!(p.idempotence_residual() < 1e-10);
        assert_eq!(p.self_adjoint_residual().unwrap() > 1e-3, oblique);
    }
}

#[test]
fn tail_windows_have_no_vacuum() {
    for qv in [0.3, 0.6, 0.9] {
        let q = QMatrix::<f64>::real(2, qv).unwrap();
        for r in [TailSpec::constant(2), TailSpec::periodic([1, 2]).unwrap()] {
            let v = vacuum_test(&tail(&r, 3, &q)).unwrap();
            assert_eq!(v.kernel_dim, 0);
            assert!(v.min_singular > 1e-3);
        }
        assert_eq!(vacuum_test(&fock_window(3, &q)).unwrap().kernel_dim, 1);
    }
}
