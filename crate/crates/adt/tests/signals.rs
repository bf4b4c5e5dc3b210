use adt::channel::{backward_outputs, classify_regime, forward_outputs};
use adt::gf2::reconstruct_inputs;
use adt::{BitVector, ChannelConfig};
use proptest::prelude::*;

fn bits(len: usize) -> impl Strategy<Value = BitVector> {
    proptest::collection::vec(any::<bool>(), len).prop_map(|b| BitVector::from_bits(&b))
}

fn pair_of(len: usize) -> impl Strategy<Value = (BitVector, BitVector)> {
    (bits(len), bits(len))
}

fn levels() -> impl Strategy<Value = (usize, usize)> {
    (0usize..70, 0usize..70).prop_filter("non-empty", |(m, n)| m.max(n) > &0)
}

proptest! {
    #[test]
    fn shift_is_linear(
        ((a, b), s) in (1usize..150).prop_flat_map(|q| (pair_of(q), 0..=q))
    ) {
        let lhs = a.xor(&b).unwrap().shift_down(s).unwrap();
        let rhs = a.shift_down(s).unwrap().xor(&b.shift_down(s).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shift_by_length_is_zero(a in (0usize..200).prop_flat_map(bits)) {
        let q = a.len();
        prop_assert!(a.shift_down(q).unwrap().is_zero());
        let mut x = a.clone();
        for _ in 0..q {
            x = x.shift_down(1).unwrap();
        }
        prop_assert!(x.is_zero());
    }

    #[test]
    fn channel_is_linear(
        ((m, n), (a, b), (c, d)) in levels().prop_flat_map(|(m, n)| {
            let q = m.max(n);
            (Just((m, n)), pair_of(q), pair_of(q))
        })
    ) {
        for law in [forward_outputs, backward_outputs] {
            let (y1, y2) = law(&a, &b, m, n).unwrap();
            let (z1, z2) = law(&c, &d, m, n).unwrap();
            let (s1, s2) = law(&a.xor(&c).unwrap(), &b.xor(&d).unwrap(), m, n).unwrap();
            prop_assert_eq!(s1, y1.xor(&z1).unwrap());
            prop_assert_eq!(s2, y2.xor(&z2).unwrap());
        }
    }

    #[test]
    fn swapping_inputs_swaps_outputs(
        ((m, n), (a, b)) in levels().prop_flat_map(|(m, n)| (Just((m, n)), pair_of(m.max(n))))
    ) {
        let (y1, y2) = forward_outputs(&a, &b, m, n).unwrap();
        let (z1, z2) = forward_outputs(&b, &a, m, n).unwrap();
        prop_assert_eq!((y1, y2), (z2, z1));
    }

    #[test]
    fn outputs_invert_when_levels_differ(
        ((m, n), (a, b)) in levels()
            .prop_filter("m != n", |(m, n)| m != n)
            .prop_flat_map(|(m, n)| (Just((m, n)), pair_of(m.max(n))))
    ) {
        let (y1, y2) = forward_outputs(&a, &b, m, n).unwrap();
        prop_assert_eq!(reconstruct_inputs(&y1, &y2, m, n).unwrap(), (a, b));
    }

    #[test]
    fn mirrored_regime_is_primed(m in 0usize..12, n in 0usize..12, mt in 0usize..12, nt in 0usize..12) {
        let cfg = ChannelConfig::new(m, n, mt, nt);
        match (classify_regime(&cfg), classify_regime(&cfg.swapped())) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.label.mirror(), b.label),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }
}

#[test]
fn small_channels_invert_exhaustively() {
    for m in 0..=4usize {
        for n in 0..=4usize {
            if m == n {
                continue;
            }
            let q = m.max(n);
            let v = |u: usize| BitVector::from_bits(&(0..q).map(|i| u >> i & 1 == 1).collect::<Vec<_>>());
            for u in 0..1 << q {
                for w in 0..1 << q {
                    let (y1, y2) = forward_outputs(&v(u), &v(w), m, n).unwrap();
                    assert_eq!(reconstruct_inputs(&y1, &y2, m, n).unwrap(), (v(u), v(w)), "({m},{n})");
                }
            }
        }
    }
}
