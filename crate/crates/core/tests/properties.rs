//! Property tests over randomly generated decks, hands and seeds.

use proptest::prelude::*;
use warlab::classic::{classic_step, TiePolicy};
use warlab::exact::{absorption_solve, enumerate_pwar, srw_oracle, uniform_level_average};
use warlab::fwar::{fwar_step, hand_strength, ReturnOrder};
use warlab::pwar::pwar_step;
use warlab::rules::{rule_bradley_terry, rule_coin, rule_powered, validate_rule};
use warlab::stats::summarize;
use warlab::*;

fn deck_spec() -> impl Strategy<Value = DeckSpec> {
    prop_oneof![
        (2u32..=10).prop_map(DeckSpec::distinct),
        (1u32..=5, 1u32..=3)
            .prop_filter("between 2 and 10 cards", |(r, c)| (2..=10).contains(&(r * c)))
            .prop_map(|(r, c)| DeckSpec::uniform(r, c)),
        prop::collection::vec(1u32..=6, 2..=8).prop_map(DeckSpec::Ranks),
    ]
}

fn builtin_rule() -> impl Strategy<Value = BuiltinRule> {
    prop_oneof![
        Just(BuiltinRule::Coin),
        Just(BuiltinRule::GreaterTieCoin),
        Just(BuiltinRule::Greater),
        Just(BuiltinRule::Powered),
        Just(BuiltinRule::BradleyTerry(Strength::Identity)),
        Just(BuiltinRule::BradleyTerry(Strength::Constant)),
        (0.1f64..2.0).prop_map(|l| BuiltinRule::BradleyTerry(Strength::Exponential(l))),
        Just(BuiltinRule::MaxHolder),
    ]
}

fn symmetric_rule() -> impl Strategy<Value = BuiltinRule> {
    builtin_rule().prop_filter("symmetric", |r| r.is_symmetric())
}

/// All `(a, b, S)` points of a deck.
fn matchups(deck: &Deck) -> Vec<(CardId, CardId, Vec<CardId>, Vec<CardId>)> {
    let mut out = Vec::new();
    for a in deck.ids() {
        for b in deck.ids().filter(|&b| b != a) {
            let others: Vec<CardId> = deck.ids().filter(|&c| c != a && c != b).collect();
            for mask in 0u32..1 << others.len() {
                let (ra, rb): (Vec<_>, Vec<_>) = others.iter().enumerate().partition(|(i, _)| mask >> i & 1 == 1);
                let strip = |v: Vec<(usize, &CardId)>| v.into_iter().map(|(_, &c)| c).collect();
                out.push((a, b, strip(ra), strip(rb)));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_builtin_rule_is_valid(spec in deck_spec(), rule in builtin_rule()) {
        let deck = Deck::new(&spec).unwrap();
        match validate_rule::<f64, _>(&rule, &deck) {
            Ok(report) => {
                prop_assert!(report.is_valid_rule, "{rule} on {spec}: {}", report.max_violation);
                prop_assert!(report.max_violation <= 1e-12);
                if rule.is_symmetric() {
                    prop_assert!(report.is_symmetric);
                }
            }
            Err(WarError::RuleDeckMismatch { .. }) => prop_assert!(deck.has_repeated_ranks()),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn constant_strength_is_the_coin(spec in deck_spec()) {
        let deck = Deck::new(&spec).unwrap();
        let bt = rule_bradley_terry(Strength::Constant);
        for (a, b, ra, rb) in matchups(&deck) {
            let m = Matchup { a, b, rest_a: &ra, rest_b: &rb, deck: &deck };
            let p: Exact = bt.win_prob(&m);
            let q: Exact = rule_coin().win_prob(&m);
            prop_assert_eq!(p, q);
        }
    }

    #[test]
    fn powered_is_exactly_symmetric(spec in deck_spec()) {
        let deck = Deck::new(&spec).unwrap();
        let report = validate_rule::<Exact, _>(&rule_powered(), &deck).unwrap();
        prop_assert!(report.is_symmetric);
        prop_assert_eq!(report.max_symmetry_violation, 0.0);
        prop_assert_eq!(report.max_violation, 0.0);
    }

    #[test]
    fn solver_matches_fair_walk(n in 2u32..=8, rule in symmetric_rule(), k in 0usize..=8) {
        let deck = Deck::new(&DeckSpec::distinct(n)).unwrap();
        let k = k.min(n as usize);
        let space = enumerate_pwar::<f64, _>(&deck, &rule).unwrap();
        let result = absorption_solve(&space).unwrap();
        let (w, t) = uniform_level_average(&space, &result, k).unwrap();
        let o = srw_oracle::<f64>(n as usize, k).unwrap();
        prop_assert!((w - o.win_prob).abs() <= 1e-9 && (t - o.expected_tau).abs() <= 1e-9);
    }

    #[test]
    fn pwar_steps_move_one_card(spec in deck_spec(), rule in builtin_rule(), seed in any::<u64>()) {
        let deck = Deck::new(&spec).unwrap();
        prop_assume!(WinningRule::<f64>::check_deck(&rule, &deck).is_ok());
        let mut rng = RngStream::new(seed, 0);
        let split = 1 + rng.index(deck.len() - 1);
        let mut state: GameState<HandSet> = deal_uniform(&deck, split, &mut rng).unwrap();
        for _ in 0..200 {
            if state.is_absorbing() {
                break;
            }
            let before = state.hand_a.len();
            let a_won = pwar_step(&mut state, &deck, &rule, &mut rng).unwrap();
            prop_assert!(state.conserves(deck.len()));
            prop_assert_eq!(state.hand_a.len(), if a_won { before + 1 } else { before - 1 });
        }
    }

    #[test]
    fn fwar_steps_track_strength(n in 2u32..=12, seed in any::<u64>(), lambda in 0.0f64..1.0) {
        let deck = Deck::new(&DeckSpec::distinct(n)).unwrap();
        let f = if lambda == 0.0 { Strength::Identity } else { Strength::Exponential(lambda) };
        let mut rng = RngStream::new(seed, 1);
        let mut state: GameState<HandSeq> = deal_uniform(&deck, n as usize / 2, &mut rng).unwrap();
        for _ in 0..200 {
            if state.is_absorbing() {
                break;
            }
            let m = hand_strength(state.hand_a.iter(), &deck, &f);
            let r = fwar_step(&mut state, &deck, &f, ReturnOrder::Random, &mut rng).unwrap();
            prop_assert!(state.conserves(deck.len()));
            let after = hand_strength(state.hand_a.iter(), &deck, &f);
            prop_assert!((after - m - r.delta_m).abs() <= 1e-9 * m.abs().max(1.0));
        }
    }

    #[test]
    fn classic_wars_conserve_cards(r in 1u32..=4, c in 2u32..=4, face_down in 1usize..=3, seed in any::<u64>()) {
        let deck = Deck::new(&DeckSpec::uniform(r, c)).unwrap();
        let mut rng = RngStream::new(seed, 2);
        let mut state: GameState<HandSeq> = deal_uniform(&deck, deck.len() / 2, &mut rng).unwrap();
        for _ in 0..500 {
            if state.is_absorbing() {
                break;
            }
            let round = classic_step(&mut state, &deck, &TiePolicy::war(face_down), &mut rng).unwrap();
            prop_assert!(state.conserves(deck.len()));
            if round.ended.is_some() {
                break;
            }
        }
    }

    #[test]
    fn identical_streams_give_identical_games(seed in any::<u64>(), stream in any::<u64>()) {
        let config = GameConfig { deck: DeckSpec::uniform(4, 2), ..GameConfig::default() };
        let game = config.prepare().unwrap();
        let a = game.play(&mut RngStream::new(seed, stream)).unwrap();
        let b = game.play(&mut RngStream::new(seed, stream)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn summaries_ignore_order(mut xs in prop::collection::vec(0u32..10_000, 1..200), seed in any::<u64>()) {
        let before = summarize(&xs.iter().map(|&x| x as f64).collect::<Vec<_>>()).unwrap();
        RngStream::new(seed, 0).shuffle(&mut xs);
        let after = summarize(&xs.iter().map(|&x| x as f64).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(before, after);
    }
}
