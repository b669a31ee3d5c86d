//! Property-based checks of the algebraic identities every other layer
//! leans on: the action law, the cocycle rule, pairing covariance, and the
//! formal degeneration operator.

use num_rational::Ratio;
use proptest::prelude::*;
use thetafay::chars::{CharTable, Characteristic, Parity};
use thetafay::relations::FormalThetaSum;
use thetafay::rep::SignedPermMatrix;
use thetafay::symplectic::{GeneratorSet, SymplecticF2};

fn word_to_element(g: usize, word: &[u8]) -> SymplecticF2 {
    let gens: Vec<SymplecticF2> = GeneratorSet::new(g).elements().cloned().collect();
    let mut acc = SymplecticF2::identity(g);
    for &i in word {
        acc = acc.mul(&gens[i as usize % gens.len()]).unwrap();
    }
    acc
}

fn char_from_bits(g: usize, bits: u32) -> Characteristic {
    Characteristic::from_code(g, bits & ((1 << (2 * g)) - 1))
}

proptest! {
    #[test]
    fn action_law(g in 1usize..=4, w1 in prop::collection::vec(0u8..8, 0..12),
                  w2 in prop::collection::vec(0u8..8, 0..12), bits in 0u32..65536) {
        let s = word_to_element(g, &w1);
        let t = word_to_element(g, &w2);
        let m = char_from_bits(g, bits);
        let st = s.mul(&t).unwrap();
        prop_assert_eq!(st.act(&m).unwrap(), s.act(&t.act(&m).unwrap()).unwrap());
    }

    #[test]
    fn parity_preserved_and_sign_is_a_cocycle(
        g in 1usize..=4, w1 in prop::collection::vec(0u8..8, 0..12),
        w2 in prop::collection::vec(0u8..8, 0..12), bits in 0u32..65536) {
        let sigma = word_to_element(g, &w1);
        let tau = word_to_element(g, &w2);
        let m = char_from_bits(g, bits);
        prop_assert_eq!(sigma.act(&m).unwrap().parity(), m.parity());
        let ts = tau.mul(&sigma).unwrap();
        prop_assert_eq!(
            ts.epsilon(&m).unwrap(),
            sigma.epsilon(&m).unwrap() * tau.epsilon(&sigma.act(&m).unwrap()).unwrap()
        );
    }

    #[test]
    fn pairing_symmetry_and_covariance(
        g in 1usize..=3, w in prop::collection::vec(0u8..8, 0..12),
        bm in 0u32..4096, bn in 0u32..4096) {
        let sigma = word_to_element(g, &w);
        let m = char_from_bits(g, bm);
        let n = char_from_bits(g, bn);
        prop_assert_eq!(m.pairing(&n).unwrap(), n.pairing(&m).unwrap());
        prop_assert_eq!(m.pairing(&m).unwrap(), 1);
        prop_assert_eq!(
            sigma.act(&m).unwrap().pairing(&sigma.act(&n).unwrap()).unwrap(),
            m.pairing(&n).unwrap() * sigma.epsilon(&m).unwrap() * sigma.epsilon(&n).unwrap()
        );
    }

    #[test]
    fn representation_is_multiplicative(
        g in 1usize..=3, even in any::<bool>(),
        w1 in prop::collection::vec(0u8..8, 0..10),
        w2 in prop::collection::vec(0u8..8, 0..10)) {
        let sector = if even { Parity::Even } else { Parity::Odd };
        let table = CharTable::new(g);
        let s = word_to_element(g, &w1);
        let t = word_to_element(g, &w2);
        let rs = SignedPermMatrix::rep_matrix(&s, sector, &table).unwrap();
        let rt = SignedPermMatrix::rep_matrix(&t, sector, &table).unwrap();
        let rst = SignedPermMatrix::rep_matrix(&s.mul(&t).unwrap(), sector, &table).unwrap();
        prop_assert_eq!(rs.compose(&rt), rst);
    }

    #[test]
    fn characteristic_text_roundtrip(g in 1usize..=4, bits in 0u32..65536) {
        let m = char_from_bits(g, bits);
        let back: Characteristic = m.to_string().parse().unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn degeneration_is_linear(
        terms in prop::collection::vec((0u32..16, -6i64..6, 1i64..4), 1..8),
        k in 1u32..13) {
        let g = 2;
        let mut a = FormalThetaSum::new(g, k).unwrap();
        let mut b = FormalThetaSum::new(g, k).unwrap();
        for (i, (bits, num, den)) in terms.iter().enumerate() {
            let m = char_from_bits(g, *bits);
            let c = Ratio::new(*num, *den);
            if i % 2 == 0 {
                a.add_term(&m, c).unwrap();
            } else {
                b.add_term(&m, c).unwrap();
            }
        }
        let lhs = a.add(&b).unwrap().phi(1).unwrap();
        let rhs = a.phi(1).unwrap().add(&b.phi(1).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let scaled = a.scale(Ratio::new(5, 3)).phi(1).unwrap();
        prop_assert_eq!(scaled, a.phi(1).unwrap().scale(Ratio::new(5, 3)));
    }
}
