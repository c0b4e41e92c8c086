use btensor::classify::{
    b_tensor_forms, check_class, classify_all, ClassifyOptions, TensorClass, IMPLICATIONS,
};
use btensor::decompose::{decompose, pd_certify, CertifyOptions, DecomposeOptions, PdVerdict};
use btensor::generate::{layered_tensor, symmetric_from_orbits, z_projection};
use btensor::oracle::{lambda_min_estimate, sphere_minimize, OracleOptions};
use btensor::Tensor;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=4, 2usize..=3)
}

fn tensor() -> impl Strategy<Value = Tensor> {
    shape().prop_flat_map(|(m, n)| {
        prop::collection::vec(-2.0f64..2.0, n.pow(m as u32))
            .prop_map(move |e| Tensor::new(m, n, e).unwrap())
    })
}

/// Random tensors with a raised diagonal, so the class predicates are not
/// all false.
fn dominant_tensor() -> impl Strategy<Value = Tensor> {
    (tensor(), prop::collection::vec(0.0f64..1.0, 4)).prop_map(|(t, lift)| {
        let n = t.dim();
        let scale = 3.0 * t.row_len() as f64;
        let mut out = t.clone();
        for i in 1..=n {
            let mut idx = vec![i; t.order()];
            idx[0] = i;
            let unit = Tensor::from_sparse(t.order(), n, &[(idx.into(), 1.0)]).unwrap();
            out = out.linear_combine(&unit, lift[i - 1] * scale).unwrap();
        }
        out
    })
}

fn small_oracle() -> OracleOptions {
    OracleOptions {
        starts: 16,
        grid_points: 20_000,
        ..OracleOptions::default()
    }
}

fn holds(t: &Tensor, c: TensorClass, o: &ClassifyOptions) -> bool {
    check_class(t, c, o).map(|v| v.holds()).unwrap_or(false)
}

proptest! {
    #[test]
    fn symmetrize_is_symmetric_and_idempotent(t in tensor()) {
        let s = t.symmetrize();
        prop_assert!(s.is_symmetric());
        prop_assert!(s.symmetrize().max_abs_diff(&s).unwrap() < 1e-15);
    }

    #[test]
    fn form_only_sees_symmetric_part(t in tensor(), x in prop::collection::vec(-1.0f64..1.0, 3)) {
        let x = &x[..t.dim()];
        let a = t.form_value(x).unwrap();
        let b = t.symmetrize().form_value(x).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        let ax = t.apply(x).unwrap();
        let dot: f64 = ax.iter().zip(x).map(|(p, q)| p * q).sum();
        prop_assert!((dot - a).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn class_implications_hold(t in prop_oneof![tensor(), dominant_tensor()]) {
        let r = classify_all(&t, &ClassifyOptions::default());
        prop_assert!(r.implication_violations.is_empty());
        for (from, to) in IMPLICATIONS {
            prop_assert!(!r.holds(from) || r.holds(to), "{from} without {to}");
        }
    }

    #[test]
    fn b_tensor_forms_agree(t in prop_oneof![tensor(), dominant_tensor()]) {
        prop_assert!(b_tensor_forms(&t).agree());
    }

    #[test]
    fn margin_only_removes_members(t in dominant_tensor(), tau in 0.0f64..0.5) {
        let strict = ClassifyOptions::with_margin(tau);
        let plain = ClassifyOptions::default();
        for c in TensorClass::ALL {
            prop_assert!(!holds(&t, c, &strict) || holds(&t, c, &plain), "{c}");
        }
    }

    #[test]
    fn z_equivalences_on_positive_diagonal(t in dominant_tensor()) {
        let z = z_projection(&t);
        prop_assume!((1..=z.dim()).all(|i| z.diagonal(i) > 0.0));
        let o = ClassifyOptions::default();
        prop_assert_eq!(holds(&z, TensorClass::QuasiDoubleB, &o), holds(&z, TensorClass::Qdsdd, &o));
        if z.order() > 2 {
            prop_assert_eq!(holds(&z, TensorClass::DoubleB, &o), holds(&z, TensorClass::Dsdd, &o));
        }
    }

    #[test]
    fn decomposition_reconstructs(seed in any::<u64>(), m in prop::sample::select(vec![2usize, 3, 4]), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = layered_tensor(m, n, &mut rng);
        prop_assume!(holds(&l.tensor, TensorClass::QuasiDoubleB, &ClassifyOptions::default()));
        let d = decompose(&l.tensor, &DecomposeOptions::default()).unwrap();
        prop_assert!(d.s() <= n);
        prop_assert!(d.reconstruct().max_abs_diff(&l.tensor).unwrap() <= 1e-12);
        prop_assert!(d.residual.is_symmetric());
        for w in d.steps.windows(2) {
            prop_assert!(w[1].j_hat.is_proper_subset(&w[0].j_hat));
        }
        prop_assert!(d.steps.iter().all(|s| s.h > 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sphere_minimum_is_scale_equivariant(seed in any::<u64>(), n in 2usize..=3, c in 0.25f64..4.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = btensor::generate::uniform_symmetric(4, n, -1.0, 1.0, &mut rng);
        let a = sphere_minimize(&t, &small_oracle());
        let b = sphere_minimize(&t.scale(c).unwrap(), &small_oracle());
        let rel = (b.min_value - c * a.min_value).abs() / (1e-300 + (c * a.min_value).abs());
        prop_assert!(rel < 1e-10 || (b.min_value - c * a.min_value).abs() < 1e-13, "{} vs {}", b.min_value, c * a.min_value);
    }

    #[test]
    fn lambda_min_restricts_to_blocks(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let block = btensor::generate::uniform_symmetric(4, 2, -1.0, 1.0, &mut rng);
        // embed into dimension 3 with a unit-tensor third row
        let mut k = 0;
        let blk: Vec<f64> = block.entries().to_vec();
        let embedded = {
            let zero = Tensor::zeros(4, 3).unwrap();
            let mut e = vec![0.0; zero.len()];
            for (off, slot) in e.iter_mut().enumerate() {
                let idx = zero.multi_index(off);
                if idx.as_slice().iter().all(|&i| i <= 2) {
                    *slot = blk[k];
                    k += 1;
                } else if idx.as_slice().iter().all(|&i| i == 3) {
                    *slot = 1.0;
                }
            }
            Tensor::new(4, 3, e).unwrap()
        };
        prop_assert!(embedded.is_symmetric());
        let inner = lambda_min_estimate(&block, &small_oracle()).unwrap();
        let outer = lambda_min_estimate(&embedded, &small_oracle()).unwrap();
        prop_assert!((outer - inner.min(1.0)).abs() < 1e-8, "{outer} vs min({inner}, 1)");
    }

    #[test]
    fn certified_tensors_have_positive_minimum(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = layered_tensor(4, n, &mut rng);
        let c = pd_certify(&l.tensor, &CertifyOptions::default());
        prop_assume!(c.verdict == PdVerdict::PositiveDefinite);
        prop_assert!(sphere_minimize(&l.tensor, &small_oracle()).min_value > -1e-9);
    }

    #[test]
    fn oracle_witnesses_are_valid(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = symmetric_from_orbits(4, n, |d| if d { 0.5 } else { rand::Rng::gen_range(&mut rng, -1.0..1.0) });
        let opts = CertifyOptions { oracle_fallback: true, oracle: small_oracle(), ..CertifyOptions::default() };
        let c = pd_certify(&t, &opts);
        if c.verdict == PdVerdict::NotPositiveDefinite {
            let x = c.witness.unwrap();
            prop_assert!(t.form_value(&x).unwrap() <= 0.0);
            prop_assert_eq!(c.routes_fired, vec![btensor::decompose::Route::OracleWitness]);
        }
    }
}
