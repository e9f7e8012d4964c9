//! Randomized property tests: the structural identities that the
//! acceptance gate checks exhaustively on short words are checked here on
//! longer random elements, with a fixed seed for reproducibility.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stringtop::frobenius::{cp_model, product_model, sphere_model, FrobeniusAlgebra};
use stringtop::graded::koszul_sign;
use stringtop::hochschild::{
    chain_differential, cochain_differential, connes_b, Cochain, HochschildElement, Word,
};
use stringtop::scalar::{Field, Scalar};
use stringtop::serialize;

fn models() -> Vec<FrobeniusAlgebra> {
    let s3 = sphere_model(Field::Q, 3).unwrap();
    vec![
        sphere_model(Field::Q, 2).unwrap(),
        s3.clone(),
        cp_model(Field::Q, 2).unwrap(),
        product_model(&s3, &s3).unwrap(),
    ]
}

/// A random normalized word: nonunital entries in the shifted slots, any
/// entry in the module slot.
fn random_word(rng: &mut ChaCha8Rng, fr: &FrobeniusAlgebra, max_arity: usize) -> Word {
    let a = &fr.algebra;
    let nonunit: Vec<usize> = (0..a.dim()).filter(|i| *i != a.unit).collect();
    let arity = rng.gen_range(0..=max_arity);
    Word {
        tensor: (0..arity)
            .map(|_| *nonunit.choose(rng).unwrap())
            .collect(),
        module: rng.gen_range(0..a.dim()),
    }
}

fn random_chain(rng: &mut ChaCha8Rng, fr: &FrobeniusAlgebra, max_arity: usize) -> HochschildElement {
    // all terms share one degree so the element is homogeneous
    let mut x = HochschildElement::zero();
    let w0 = random_word(rng, fr, max_arity);
    let d0 = word_degree(fr, &w0);
    x.add_term(w0, random_scalar(rng, fr.field()));
    for _ in 0..8 {
        let w = random_word(rng, fr, max_arity);
        if word_degree(fr, &w) == d0 {
            x.add_term(w, random_scalar(rng, fr.field()));
        }
    }
    x
}

fn word_degree(fr: &FrobeniusAlgebra, w: &Word) -> i64 {
    let a = &fr.algebra;
    w.tensor.iter().map(|i| a.degree(*i) - 1).sum::<i64>() + a.degree(w.module)
}

fn random_scalar(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    Scalar::from_i64(field, rng.gen_range(-9..=9i64))
}

#[test]
fn chain_differential_squares_to_zero_on_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for fr in models() {
        for _ in 0..50 {
            let x = random_chain(&mut rng, &fr, 6);
            let dx = chain_differential(&fr.algebra, &x).unwrap();
            assert!(chain_differential(&fr.algebra, &dx).unwrap().is_zero());
        }
    }
}

#[test]
fn connes_operator_identities_on_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for fr in models() {
        for _ in 0..50 {
            let x = random_chain(&mut rng, &fr, 6);
            let bx = connes_b(&fr.algebra, &x).unwrap();
            assert!(connes_b(&fr.algebra, &bx).unwrap().is_zero(), "B² = 0");
            let dx = chain_differential(&fr.algebra, &x).unwrap();
            let anti = connes_b(&fr.algebra, &dx)
                .unwrap()
                .add(&chain_differential(&fr.algebra, &bx).unwrap());
            assert!(anti.is_zero(), "B∂ + ∂B = 0");
        }
    }
}

#[test]
fn cochain_differential_squares_to_zero_on_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for fr in models() {
        let a = &fr.algebra;
        for _ in 0..50 {
            let w = random_word(&mut rng, &fr, 4);
            let Ok(f) = Cochain::elementary(a, w.tensor, w.module) else { continue };
            let f = f.scale(&random_scalar(&mut rng, fr.field()));
            let df = cochain_differential(a, &f, 8).unwrap();
            assert!(cochain_differential(a, &df, 8).unwrap().is_zero());
        }
    }
}

#[test]
fn serialization_round_trips_on_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for fr in models() {
        let a = &fr.algebra;
        for _ in 0..50 {
            let x = random_chain(&mut rng, &fr, 5);
            let text = serialize::chain_to_json_string(a, &x);
            assert_eq!(serialize::chain_from_json_str(a, &text).unwrap(), x);

            let w = random_word(&mut rng, &fr, 3);
            if let Ok(f) = Cochain::elementary(a, w.tensor, w.module) {
                let f = f.scale(&random_scalar(&mut rng, fr.field()));
                let text = serialize::cochain_to_json_string(a, &f);
                if f.entries.is_empty() {
                    continue;
                }
                assert_eq!(serialize::cochain_from_json_str(a, &text).unwrap(), f);
            }
        }
    }
}

#[test]
fn koszul_sign_is_multiplicative_in_the_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.gen_range(2..7usize);
        let degrees: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=4i64)).collect();
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.shuffle(&mut rng);
        let mut tau: Vec<usize> = (0..n).collect();
        tau.shuffle(&mut rng);
        // applying σ and then τ puts original element σ[τ[i]] in slot i;
        // the composite sign is the sign of σ on the original degrees
        // times the sign of τ on the σ-permuted degrees
        let composite: Vec<usize> = (0..n).map(|i| sigma[tau[i]]).collect();
        let permuted: Vec<i64> = (0..n).map(|i| degrees[sigma[i]]).collect();
        let lhs = koszul_sign(&composite, &degrees).unwrap();
        let rhs =
            koszul_sign(&sigma, &degrees).unwrap() * koszul_sign(&tau, &permuted).unwrap();
        assert_eq!(lhs, rhs);
    }
}
