use crate::error::{Result, WarError};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Identity of a physical card within a deck; `0..deck.len()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CardId(pub u32);

impl CardId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for CardId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Card {
    pub id: CardId,
    pub rank: u32,
}

/// How a deck is built: `n_ranks` ranks `1..=n_ranks` with `copies` cards
/// each, or an explicit list of ranks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeckSpec {
    Uniform { n_ranks: u32, copies: u32 },
    Ranks(Vec<u32>),
}

impl DeckSpec {
    pub fn uniform(n_ranks: u32, copies: u32) -> Self {
        DeckSpec::Uniform { n_ranks, copies }
    }

    /// The single-suited deck `[n] = {1, ..., n}`.
    pub fn distinct(n: u32) -> Self {
        DeckSpec::Uniform { n_ranks: n, copies: 1 }
    }
}

impl fmt::Display for DeckSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeckSpec::Uniform { n_ranks, copies } => write!(f, "{n_ranks}x{copies}"),
            DeckSpec::Ranks(ranks) => {
                let list: Vec<String> = ranks.iter().map(u32::to_string).collect();
                write!(f, "ranks:{}", list.join(","))
            }
        }
    }
}

impl FromStr for DeckSpec {
    type Err = WarError;

    /// Accepts `RxC` (e.g. `13x4`), a bare rank count `R` (one copy each) or
    /// `ranks:r1,r2,...`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || WarError::InvalidDeck(format!("cannot parse deck `{s}`"));
        let s = s.trim();
        if let Some(list) = s.strip_prefix("ranks:") {
            let ranks = list
                .split(',')
                .map(|r| r.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(DeckSpec::Ranks(ranks));
        }
        match s.split_once(['x', 'X']) {
            Some((r, c)) => Ok(DeckSpec::Uniform {
                n_ranks: r.trim().parse().map_err(|_| bad())?,
                copies: c.trim().parse().map_err(|_| bad())?,
            }),
            None => Ok(DeckSpec::distinct(s.parse().map_err(|_| bad())?)),
        }
    }
}

/// The fixed multiset of cards in play. Card `i` has id `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deck {
    cards: Vec<Card>,
    spec: DeckSpec,
}

/// Builds a deck with ids `0..size` assigned rank-major.
pub fn build_deck(spec: &DeckSpec) -> Result<Deck> {
    let ranks: Vec<u32> = match spec {
        DeckSpec::Uniform { n_ranks, copies } => {
            if *n_ranks == 0 || *copies == 0 {
                return Err(WarError::InvalidDeck(format!(
                    "rank count and copy count must be positive, got {spec}"
                )));
            }
            (1..=*n_ranks)
                .flat_map(|r| std::iter::repeat_n(r, *copies as usize))
                .collect()
        }
        DeckSpec::Ranks(ranks) => {
            if ranks.is_empty() {
                return Err(WarError::InvalidDeck("empty rank list".into()));
            }
            if ranks.contains(&0) {
                return Err(WarError::InvalidDeck("ranks must be positive".into()));
            }
            ranks.clone()
        }
    };
    let cards = ranks
        .into_iter()
        .enumerate()
        .map(|(i, rank)| Card {
            id: CardId(i as u32),
            rank,
        })
        .collect();
    Ok(Deck {
        cards,
        spec: spec.clone(),
    })
}

impl Deck {
    pub fn new(spec: &DeckSpec) -> Result<Self> {
        build_deck(spec)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cards.is_empty()
    }

    #[inline]
    pub fn rank(&self, id: CardId) -> u32 {
        self.cards[id.index()].rank
    }

    pub fn cards(&self) -> &[Card] {
        &self.cards
    }

    pub fn ids(&self) -> impl Iterator<Item = CardId> + '_ {
        self.cards.iter().map(|c| c.id)
    }

    pub fn spec(&self) -> &DeckSpec {
        &self.spec
    }

    pub fn max_rank(&self) -> u32 {
        self.cards.iter().map(|c| c.rank).max().unwrap_or(0)
    }

    pub fn has_repeated_ranks(&self) -> bool {
        let mut ranks: Vec<u32> = self.cards.iter().map(|c| c.rank).collect();
        ranks.sort_unstable();
        ranks.windows(2).any(|w| w[0] == w[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_decks() {
        let distinct = build_deck(&DeckSpec::uniform(52, 1)).unwrap();
        assert_eq!(distinct.len(), 52);
        assert!(!distinct.has_repeated_ranks());

        let std = build_deck(&DeckSpec::uniform(13, 4)).unwrap();
        assert_eq!(std.len(), 52);
        assert_eq!(std.cards().iter().filter(|c| c.rank == 13).count(), 4);
        for (i, c) in std.cards().iter().enumerate() {
            assert_eq!(c.id.index(), i);
        }

        let pair = build_deck(&DeckSpec::uniform(1, 2)).unwrap();
        assert_eq!(pair.len(), 2);
        assert_eq!(pair.rank(CardId(0)), pair.rank(CardId(1)));
    }

    #[test]
    fn rejects_empty_specs() {
        assert!(build_deck(&DeckSpec::uniform(0, 4)).is_err());
        assert!(build_deck(&DeckSpec::uniform(13, 0)).is_err());
        assert!(build_deck(&DeckSpec::Ranks(vec![])).is_err());
        assert!(build_deck(&DeckSpec::Ranks(vec![1, 0])).is_err());
    }

    #[test]
    fn parses_specs() {
        assert_eq!("13x4".parse::<DeckSpec>().unwrap(), DeckSpec::uniform(13, 4));
        assert_eq!("6".parse::<DeckSpec>().unwrap(), DeckSpec::distinct(6));
        assert_eq!(
            "ranks:1,1,2,3".parse::<DeckSpec>().unwrap(),
            DeckSpec::Ranks(vec![1, 1, 2, 3])
        );
        assert!("13y4".parse::<DeckSpec>().is_err());
        let spec = DeckSpec::Ranks(vec![2, 2, 5]);
        assert_eq!(spec.to_string().parse::<DeckSpec>().unwrap(), spec);
    }
}
