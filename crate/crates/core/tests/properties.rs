mod common;

use proptest::prelude::*;

use excisionlab::chain::{bar_boundary, boundary_b, canonicalize_cyclic, in_ideal_complex, Chain};
use excisionlab::demo::{demo_corpus, DemoExtension};
use excisionlab::excision::{self, Certificate};
use excisionlab::homology::{bounding_chain, Complex, Space, Variant};
use excisionlab::io;
use excisionlab::linalg::scalar;
use excisionlab::units::build_unit_schedule;

fn corpus() -> &'static [DemoExtension] {
    static CORPUS: std::sync::OnceLock<Vec<DemoExtension>> = std::sync::OnceLock::new();
    CORPUS.get_or_init(demo_corpus)
}

/// A random combination of basis cycles of `F_n C_n(A, I)`.
fn random_cycle(d: &DemoExtension, n: usize, seed: u64) -> Chain {
    use rand::Rng;
    let basis = common::filtered_cycles(&d.extension, n, n);
    let mut rng = common::rng(seed);
    let mut c = Chain::zero(n);
    for v in basis.iter().take(6) {
        c.axpy(&scalar(rng.gen_range(-2..=2)), v);
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boundaries_agree_with_the_oracle(which in 0usize..3, n in 1usize..=4, seed in any::<u64>()) {
        let ext = &corpus()[which].extension;
        let c = common::random_chain(ext, &mut common::rng(seed), n, Space::Algebra, 5);
        prop_assert_eq!(boundary_b(ext, &c).unwrap(), common::oracle_b(ext, &c, true));
        prop_assert_eq!(bar_boundary(ext, &c).unwrap(), common::oracle_b(ext, &c, false));
    }

    #[test]
    fn hochschild_inverse_is_certified(which in 0usize..3, n in 1usize..=2, seed in any::<u64>()) {
        let d = &corpus()[which];
        let phi = random_cycle(d, n, seed);
        let (psi, _, cert) = excision::inverse_excision_hochschild(&d.extension, &phi).unwrap();
        prop_assert!(in_ideal_complex(&d.extension, &psi));
        prop_assert!(boundary_b(&d.extension, &psi).unwrap().is_zero());
        prop_assert!(excision::verify_certificate(&d.extension, &Certificate::Boundary(cert)).is_ok());
    }

    #[test]
    fn inverse_formula_is_linear(which in 0usize..3, n in 1usize..=3, seed in any::<u64>()) {
        let d = &corpus()[which];
        let ext = &d.extension;
        let a = random_cycle(d, n, seed);
        let b = random_cycle(d, n, seed.wrapping_add(1));
        let sum = a.plus(&b);
        let tuples: Vec<_> = a.terms().chain(b.terms()).map(|(t, _)| t.clone()).collect();
        let schedule = build_unit_schedule(ext, &tuples, n).unwrap();
        let f = |c: &Chain| excision::apply_inverse_formula(ext, c, &schedule).unwrap();
        prop_assert_eq!(f(&sum), f(&a).plus(&f(&b)));
    }

    #[test]
    fn certificates_survive_serialization(which in 0usize..3, n in 1usize..=2, seed in any::<u64>()) {
        let d = &corpus()[which];
        let ext = &d.extension;
        let phi = random_cycle(d, n, seed);
        let tuples: Vec<_> = phi.terms().map(|(t, _)| t.clone()).collect();
        let schedule = build_unit_schedule(ext, &tuples, n).unwrap();
        let certs = excision::iterated_descent(ext, &phi, &schedule).unwrap();
        for cert in certs {
            let text = io::to_json(&io::certificate_to_doc(ext, &Certificate::Descent(cert)));
            let (ext2, back) = io::parse_certificate(&text).unwrap();
            prop_assert!(excision::verify_certificate(&ext2, &back).is_ok());
        }
    }

    #[test]
    fn boundaries_are_null_homologous(which in 0usize..3, n in 1usize..=2, seed in any::<u64>()) {
        // d(η) ≡ 0 for any η, and the solver recovers some witness for it.
        let ext = &corpus()[which].extension;
        let eta = common::random_chain(ext, &mut common::rng(seed), n + 1, Space::Relative, 3);
        let target = canonicalize_cyclic(&boundary_b(ext, &eta).unwrap()).into_chain();
        let context = Variant::new(Complex::Cyclic, Space::Relative);
        prop_assert!(bounding_chain(ext, context, &target).is_ok());
        let cert = excision::certify_homologous(ext, context, &target, &Chain::zero(n)).unwrap();
        prop_assert!(excision::verify_certificate(ext, &Certificate::Boundary(cert)).is_ok());
    }
}
