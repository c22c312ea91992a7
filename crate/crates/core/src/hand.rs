use crate::deck::{CardId, Deck};
use crate::error::{Result, WarError};
use crate::rng::RngStream;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// Common surface of the two hand flavours.
pub trait Hand: Clone + Send + Sync {
    fn from_ids(ids: Vec<CardId>) -> Self;
    fn len(&self) -> usize;
    fn ids(&self) -> Vec<CardId>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Unordered hand used by random-draw war. Draw order inside the vector is
/// irrelevant to the game but fixed, so runs stay deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandSet {
    cards: Vec<CardId>,
}

impl HandSet {
    pub fn as_slice(&self) -> &[CardId] {
        &self.cards
    }

    pub fn contains(&self, id: CardId) -> bool {
        self.cards.contains(&id)
    }

    /// Moves the card at `i` to the back so `as_slice()[..len - 1]` is the
    /// rest of the hand.
    #[inline]
    pub(crate) fn move_to_back(&mut self, i: usize) {
        let last = self.cards.len() - 1;
        self.cards.swap(i, last);
    }

    #[inline]
    pub(crate) fn pop(&mut self) -> Option<CardId> {
        self.cards.pop()
    }

    #[inline]
    pub(crate) fn push(&mut self, id: CardId) {
        self.cards.push(id);
    }

    /// Bitmask of the hand for decks of at most 64 cards.
    pub fn mask(&self) -> u64 {
        self.cards.iter().fold(0u64, |m, c| m | (1u64 << c.0))
    }
}

impl Hand for HandSet {
    fn from_ids(ids: Vec<CardId>) -> Self {
        Self { cards: ids }
    }

    fn len(&self) -> usize {
        self.cards.len()
    }

    fn ids(&self) -> Vec<CardId> {
        self.cards.clone()
    }
}

/// Ordered hand: front is the next card played, back is the bottom.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandSeq {
    cards: VecDeque<CardId>,
}

impl HandSeq {
    pub fn front(&self) -> Option<CardId> {
        self.cards.front().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = CardId> + '_ {
        self.cards.iter().copied()
    }

    #[inline]
    pub(crate) fn pop_front(&mut self) -> Option<CardId> {
        self.cards.pop_front()
    }

    #[inline]
    pub(crate) fn push_back(&mut self, id: CardId) {
        self.cards.push_back(id);
    }

    pub(crate) fn drain_all(&mut self) -> impl Iterator<Item = CardId> + '_ {
        self.cards.drain(..)
    }
}

impl Hand for HandSeq {
    fn from_ids(ids: Vec<CardId>) -> Self {
        Self { cards: ids.into() }
    }

    fn len(&self) -> usize {
        self.cards.len()
    }

    fn ids(&self) -> Vec<CardId> {
        self.cards.iter().copied().collect()
    }
}

/// Partition of the deck between the two players.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState<H> {
    pub hand_a: H,
    pub hand_b: H,
    pub round: u64,
}

impl<H: Hand> GameState<H> {
    pub fn new(hand_a: H, hand_b: H) -> Self {
        Self {
            hand_a,
            hand_b,
            round: 0,
        }
    }

    pub fn from_ids(a: Vec<CardId>, b: Vec<CardId>) -> Self {
        Self::new(H::from_ids(a), H::from_ids(b))
    }

    pub fn is_absorbing(&self) -> bool {
        self.hand_a.is_empty() || self.hand_b.is_empty()
    }

    /// Absorbing under a hand floor: the game ends once either hand holds at
    /// most `floor` cards. `floor = 0` is the usual empty-hand rule.
    pub fn is_absorbing_at(&self, floor: usize) -> bool {
        self.hand_a.len() <= floor || self.hand_b.len() <= floor
    }

    /// True when the hands are disjoint and together hold every card of a
    /// deck of `deck_len` cards exactly once.
    pub fn conserves(&self, deck_len: usize) -> bool {
        if self.hand_a.len() + self.hand_b.len() != deck_len {
            return false;
        }
        let mut seen = vec![false; deck_len];
        for id in self.hand_a.ids().into_iter().chain(self.hand_b.ids()) {
            match seen.get_mut(id.index()) {
                Some(slot) if !*slot => *slot = true,
                _ => return false,
            }
        }
        true
    }
}

/// Deals a uniformly random hand of `size_a` cards to A and the rest to B.
/// Both hands come out in uniformly random order.
pub fn deal_uniform<H: Hand>(deck: &Deck, size_a: usize, rng: &mut RngStream) -> Result<GameState<H>> {
    if size_a > deck.len() {
        return Err(WarError::SizeOutOfRange {
            size: size_a,
            deck: deck.len(),
        });
    }
    let mut ids: Vec<CardId> = deck.ids().collect();
    rng.shuffle(&mut ids);
    let b = ids.split_off(size_a);
    Ok(GameState::from_ids(ids, b))
}

/// Gives each card to A independently with probability 1/2, except `forced`
/// which always goes to A, then shuffles both hands. Coins are drawn in id
/// order.
pub fn deal_bernoulli<H: Hand>(deck: &Deck, forced: Option<CardId>, rng: &mut RngStream) -> GameState<H> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for id in deck.ids() {
        if Some(id) == forced || rng.coin() {
            a.push(id);
        } else {
            b.push(id);
        }
    }
    rng.shuffle(&mut a);
    rng.shuffle(&mut b);
    GameState::from_ids(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deck::DeckSpec;

    #[test]
    fn uniform_deal_sizes_and_conservation() {
        let deck = Deck::new(&DeckSpec::uniform(13, 4)).unwrap();
        let mut rng = RngStream::new(5, 0);
        let s: GameState<HandSeq> = deal_uniform(&deck, 26, &mut rng).unwrap();
        assert_eq!(s.hand_a.len(), 26);
        assert_eq!(s.hand_b.len(), 26);
        assert_eq!(s.round, 0);
        assert!(s.conserves(52));

        let empty: GameState<HandSet> = deal_uniform(&deck, 0, &mut rng).unwrap();
        assert!(empty.hand_a.is_empty());
        assert!(empty.is_absorbing());

        assert!(deal_uniform::<HandSet>(&deck, 53, &mut rng).is_err());
    }

    #[test]
    fn conservation_detects_duplicates() {
        let s: GameState<HandSet> = GameState::from_ids(vec![CardId(0), CardId(1)], vec![CardId(1)]);
        assert!(!s.conserves(3));
        let s: GameState<HandSet> = GameState::from_ids(vec![CardId(0), CardId(2)], vec![CardId(1)]);
        assert!(s.conserves(3));
    }

    #[test]
    fn bernoulli_deal_forces_card() {
        let deck = Deck::new(&DeckSpec::distinct(5)).unwrap();
        for t in 0..200 {
            let mut rng = RngStream::new(11, t);
            let s: GameState<HandSeq> = deal_bernoulli(&deck, Some(CardId(4)), &mut rng);
            assert!(s.hand_a.iter().any(|c| c == CardId(4)));
            assert!(s.conserves(5));
        }
    }
}
