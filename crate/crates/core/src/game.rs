//! One validated description of a simulated game, shared by the command
//! line, the reproduction experiments and the determinism checks.

use crate::classic::{classic_run, ClassicOptions, TiePolicy};
use crate::deck::{Deck, DeckSpec};
use crate::error::{Result, WarError};
use crate::fwar::{deal_coin_split, deal_top_card_to_a, fwar_run, FwarOptions, ReturnOrder};
use crate::hand::{deal_uniform, GameState, HandSeq, HandSet};
use crate::pwar::{pwar_run, PwarOptions, DEFAULT_MAX_ROUNDS};
use crate::record::Winner;
use crate::rng::RngStream;
use crate::rules::{BuiltinRule, Strength, WinningRule};
use crate::stats::run_trials;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameKind {
    /// Random draw from each hand, winning rule decides.
    Pwar,
    /// Top card, Bradley-Terry outcome, random return order.
    Fwar,
    /// Top card, higher rank wins, ties by war round or coin.
    Classic,
}

pub const GAME_NAMES: &str = "pwar, fwar, classic";
pub const DEAL_NAMES: &str = "uniform, coin-split, top-card-to-a";

impl FromStr for GameKind {
    type Err = WarError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pwar" => Ok(GameKind::Pwar),
            "fwar" => Ok(GameKind::Fwar),
            "classic" => Ok(GameKind::Classic),
            _ => Err(WarError::UnknownName {
                kind: "game",
                name: s.into(),
                valid: GAME_NAMES.into(),
            }),
        }
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameKind::Pwar => "pwar",
            GameKind::Fwar => "fwar",
            GameKind::Classic => "classic",
        })
    }
}

/// How the initial hands are dealt.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DealKind {
    /// A gets a uniformly random hand of `split` cards.
    #[default]
    Uniform,
    /// Each card goes to A with probability 1/2.
    CoinSplit,
    /// The highest card goes to A, every other card with probability 1/2.
    TopCardToA,
}

impl FromStr for DealKind {
    type Err = WarError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(DealKind::Uniform),
            "coin-split" => Ok(DealKind::CoinSplit),
            "top-card-to-a" | "eq5" => Ok(DealKind::TopCardToA),
            _ => Err(WarError::UnknownName {
                kind: "deal",
                name: s.into(),
                valid: DEAL_NAMES.into(),
            }),
        }
    }
}

mod as_string {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use std::fmt::Display;
    use std::str::FromStr;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

mod opt_string {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use std::fmt::Display;
    use std::str::FromStr;

    pub fn serialize<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Option<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(D::Error::custom))
            .transpose()
    }
}

/// Everything needed to play one game, apart from the random stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GameConfig {
    pub game: GameKind,
    #[serde(with = "as_string")]
    pub deck: DeckSpec,
    /// Winning rule for random-draw games.
    #[serde(with = "opt_string", default)]
    pub rule: Option<BuiltinRule>,
    /// Strength function for Bradley-Terry games.
    #[serde(with = "opt_string", default)]
    pub strength: Option<Strength>,
    /// Tie handling for classic games.
    pub tie: TiePolicy,
    pub deal: DealKind,
    /// Size of A's hand under the uniform deal; half the deck when unset.
    pub split: Option<usize>,
    pub return_order: ReturnOrder,
    pub max_rounds: u64,
    /// The game ends once a hand holds at most this many cards.
    pub hand_floor: usize,
}

impl Default for GameConfig {
    fn default() -> Self {
        Self {
            game: GameKind::Pwar,
            deck: DeckSpec::distinct(52),
            rule: Some(BuiltinRule::Coin),
            strength: None,
            tie: TiePolicy::default(),
            deal: DealKind::Uniform,
            split: None,
            return_order: ReturnOrder::Random,
            max_rounds: DEFAULT_MAX_ROUNDS,
            hand_floor: 0,
        }
    }
}

/// Result of one game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameOutcome {
    pub tau: u64,
    pub winner: Winner,
}

/// A configuration that passed validation, with its deck built.
#[derive(Debug, Clone)]
pub struct PreparedGame {
    config: GameConfig,
    deck: Deck,
    split: usize,
}

impl GameConfig {
    /// Checks every field against the game kind and builds the deck.
    pub fn prepare(&self) -> Result<PreparedGame> {
        let deck = Deck::new(&self.deck)?;
        let n = deck.len();
        if n < 2 {
            return Err(WarError::InvalidDeck("a game needs at least two cards".into()));
        }
        if self.max_rounds == 0 {
            return Err(WarError::InvalidConfig("max_rounds must be at least 1".into()));
        }
        let split = self.split.unwrap_or(n / 2);
        if self.deal == DealKind::Uniform && (split == 0 || split >= n) {
            return Err(WarError::SizeOutOfRange { size: split, deck: n });
        }
        if self.hand_floor * 2 >= n {
            return Err(WarError::InvalidConfig(format!(
                "hand floor {} leaves no game on {n} cards",
                self.hand_floor
            )));
        }
        match self.game {
            GameKind::Pwar => {
                let rule = self
                    .rule
                    .ok_or_else(|| WarError::InvalidConfig("pwar needs a rule".into()))?;
                WinningRule::<f64>::check_deck(&rule, &deck)?;
                if let BuiltinRule::BradleyTerry(f) = rule {
                    f.check_deck(&deck)?;
                }
            }
            GameKind::Fwar => {
                let f = self
                    .strength
                    .ok_or_else(|| WarError::InvalidConfig("fwar needs a strength function".into()))?;
                f.check_deck(&deck)?;
                if self.hand_floor != 0 {
                    return Err(WarError::InvalidConfig(
                        "fwar games always play to an empty hand".into(),
                    ));
                }
            }
            GameKind::Classic => {
                if self.deal != DealKind::Uniform {
                    return Err(WarError::InvalidConfig("classic games use the uniform deal".into()));
                }
            }
        }
        Ok(PreparedGame {
            config: self.clone(),
            deck,
            split,
        })
    }

    /// Plays `n_trials` games; trial `i` uses stream `i` of `seed`.
    pub fn run(&self, n_trials: u64, seed: u64, workers: usize) -> Result<Vec<GameOutcome>> {
        let game = self.prepare()?;
        run_trials(n_trials, seed, workers, |rng| game.play(rng))
    }
}

impl PreparedGame {
    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn deck(&self) -> &Deck {
        &self.deck
    }

    fn deal<H: crate::hand::Hand>(&self, rng: &mut RngStream) -> Result<GameState<H>> {
        match self.config.deal {
            DealKind::Uniform => deal_uniform(&self.deck, self.split, rng),
            DealKind::CoinSplit => Ok(crate::hand::deal_bernoulli(&self.deck, None, rng)),
            DealKind::TopCardToA => {
                let top = self.deck.cards().iter().max_by_key(|c| c.rank).map(|c| c.id);
                Ok(crate::hand::deal_bernoulli(&self.deck, top, rng))
            }
        }
    }

    pub fn play(&self, rng: &mut RngStream) -> Result<GameOutcome> {
        let c = &self.config;
        let (tau, winner) = match c.game {
            GameKind::Pwar => {
                let init: GameState<HandSet> = self.deal(rng)?;
                let opts = PwarOptions {
                    max_rounds: c.max_rounds,
                    record_trajectory: false,
                    hand_floor: c.hand_floor,
                };
                let rule = c.rule.expect("validated");
                let r = pwar_run(init, &self.deck, &rule, rng, &opts);
                (r.tau, r.winner)
            }
            GameKind::Fwar => {
                let init: GameState<HandSeq> = match c.deal {
                    DealKind::CoinSplit => deal_coin_split(&self.deck, rng),
                    DealKind::TopCardToA => deal_top_card_to_a(&self.deck, rng),
                    DealKind::Uniform => self.deal(rng)?,
                };
                let opts = FwarOptions {
                    max_rounds: c.max_rounds,
                    record: false,
                    return_order: c.return_order,
                };
                let r = fwar_run(init, &self.deck, &c.strength.expect("validated"), rng, &opts);
                (r.tau, r.winner)
            }
            GameKind::Classic => {
                let init: GameState<HandSeq> = self.deal(rng)?;
                let opts = ClassicOptions {
                    tie: c.tie,
                    max_rounds: c.max_rounds,
                    hand_floor: c.hand_floor,
                    record_cards_won: false,
                };
                let r = classic_run(init, &self.deck, rng, &opts);
                (r.tau, r.winner)
            }
        };
        Ok(GameOutcome { tau, winner })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips_through_json() {
        let c = GameConfig {
            game: GameKind::Fwar,
            deck: DeckSpec::distinct(8),
            rule: None,
            strength: Some(Strength::Shifted(8)),
            deal: DealKind::CoinSplit,
            ..GameConfig::default()
        };
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains("\"deck\":\"8x1\""));
        assert!(text.contains("\"strength\":\"shifted:8\""));
        let back: GameConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let bt = GameConfig {
            rule: Some(BuiltinRule::BradleyTerry(Strength::Exponential(0.5))),
            ..GameConfig::default()
        };
        let back: GameConfig = serde_json::from_str(&serde_json::to_string(&bt).unwrap()).unwrap();
        assert_eq!(back, bt);
    }

    #[test]
    fn validation() {
        let bad_split = GameConfig {
            split: Some(52),
            ..GameConfig::default()
        };
        assert!(bad_split.prepare().is_err());
        let greater_on_suits = GameConfig {
            deck: DeckSpec::uniform(13, 4),
            rule: Some(BuiltinRule::Greater),
            ..GameConfig::default()
        };
        assert!(greater_on_suits.prepare().is_err());
        let fwar_without_strength = GameConfig {
            game: GameKind::Fwar,
            ..GameConfig::default()
        };
        assert!(fwar_without_strength.prepare().is_err());
        assert!("poker".parse::<GameKind>().is_err());
        assert_eq!("eq5".parse::<DealKind>().unwrap(), DealKind::TopCardToA);
    }

    #[test]
    fn runs_are_reproducible_across_workers() {
        for game in [GameKind::Pwar, GameKind::Fwar, GameKind::Classic] {
            let c = GameConfig {
                game,
                deck: DeckSpec::uniform(5, 2),
                rule: Some(BuiltinRule::GreaterTieCoin),
                strength: Some(Strength::Identity),
                ..GameConfig::default()
            };
            let one = c.run(200, 9, 1).unwrap();
            assert_eq!(one, c.run(200, 9, 4).unwrap(), "{game}");
            assert!(one.iter().all(|o| o.winner != Winner::Truncated));
        }
    }
}
