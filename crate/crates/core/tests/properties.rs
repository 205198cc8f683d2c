use proptest::prelude::*;
use ramspace::forcing::{galvin_search, verify_certificate, Dichotomy, FrontFamily, GalvinParams, Verified};
use ramspace::ramsey::{
    classical_ramsey_number, dual_to_classical_encoding, gr_paramset_witness, verify_result, verify_witness, Mode,
    WitnessOutcome,
};
use ramspace::spaces::{enumerate_partitions, Ellentuck, EllentuckApprox};
use ramspace::{Space, Stem};

fn approx_on(ground: u32, max_len: usize) -> impl Strategy<Value = EllentuckApprox> {
    proptest::collection::btree_set(0..ground, 0..=max_len).prop_map(|s| EllentuckApprox::new(s.into_iter().collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn galvin_certificates_replay(members in proptest::collection::vec(approx_on(7, 2), 0..5)) {
        let sp = Ellentuck::new(7).unwrap();
        let a = Stem::new(&sp, sp.full()).unwrap();
        let f = FrontFamily::new(&sp, members, 2).unwrap();
        let r = galvin_search(&sp, &a, &f, &GalvinParams::new(2)).unwrap();
        let expected = match r.outcome {
            Dichotomy::Alt1 { .. } => Verified::Alt1,
            Dichotomy::Alt2 { .. } => Verified::Alt2,
            Dichotomy::Inconclusive { .. } => Verified::Inconclusive,
        };
        prop_assert_eq!(verify_certificate(&sp, &r.certificate).unwrap(), expected);
    }

    #[test]
    fn witnesses_are_monotone_in_the_bound(k in 1usize..3, extra in 0usize..2, bound in 3usize..7) {
        let n = k + extra + 1;
        let small = classical_ramsey_number(k, n, 2, bound, Mode::exhaustive()).unwrap();
        let large = classical_ramsey_number(k, n, 2, bound + 1, Mode::exhaustive()).unwrap();
        if let WitnessOutcome::Found(m) = small.outcome {
            prop_assert_eq!(large.outcome, WitnessOutcome::Found(m));
        }
    }

    #[test]
    fn flipping_a_pentagon_color_is_caught(i in 0usize..15) {
        let r = classical_ramsey_number(2, 3, 2, 5, Mode::exhaustive()).unwrap();
        let cert = r.certificate();
        let mut lines: Vec<String> = cert.lines().map(String::from).collect();
        let colors: Vec<usize> = (0..lines.len()).filter(|&j| lines[j].starts_with("color ")).collect();
        let j = colors[i % colors.len()];
        let flipped = if lines[j].ends_with(" 0") { "1" } else { "0" };
        let head = lines[j].rsplit_once(' ').unwrap().0.to_string();
        lines[j] = format!("{head} {flipped}");
        prop_assert!(verify_witness(&lines.join("\n")).is_err());
    }

    #[test]
    fn encoding_has_k_minima(n in 1usize..8, k in 1usize..5) {
        prop_assume!(k <= n);
        for t in enumerate_partitions(n, k, 1 << 20).unwrap() {
            let enc = dual_to_classical_encoding(&t);
            prop_assert_eq!(enc.len(), k - 1);
            for (b, m) in t.blocks().iter().skip(1).zip(enc.elements()) {
                prop_assert_eq!(b[0], *m);
            }
        }
    }
}

#[test]
fn paramset_witness_replays_with_search_fallback() {
    let r = gr_paramset_witness(2, 3, 2, 7, Mode::Backtracking { budget: 1 << 24 }).unwrap();
    assert_eq!(r.outcome, WitnessOutcome::Found(6));
    let v = verify_result(&r).unwrap();
    assert_eq!(v.bad_level, Some(5));
}

#[test]
fn lower_bound_from_budget_replays() {
    let r = classical_ramsey_number(2, 3, 2, 8, Mode::Backtracking { budget: 40 }).unwrap();
    let WitnessOutcome::LowerBound(v) = r.outcome else { panic!("{:?}", r.outcome) };
    let checked = verify_result(&r).unwrap();
    assert_eq!(checked.bad_level, (v >= 3).then_some(v));
}

#[test]
fn universe_reducts_are_below() {
    let sp = Ellentuck::new(6).unwrap();
    for a in sp.universe() {
        for b in sp.fin_below(&a) {
            assert!(sp.fin_leq(&b, &a));
        }
    }
}
