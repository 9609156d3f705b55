use rand::Rng;
use serde::{Deserialize, Serialize};

/// A trading action: sell, hold, or buy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(i8)]
pub enum Action {
    Sell = -1,
    Hold = 0,
    Buy = 1,
}

impl Action {
    pub const ALL: [Action; 3] = [Action::Sell, Action::Hold, Action::Buy];

    pub fn value(self) -> i64 {
        self as i8 as i64
    }

    pub fn from_value(v: i8) -> Option<Action> {
        match v {
            -1 => Some(Action::Sell),
            0 => Some(Action::Hold),
            1 => Some(Action::Buy),
            _ => None,
        }
    }

    pub fn opposite(self) -> Action {
        match self {
            Action::Sell => Action::Buy,
            Action::Hold => Action::Hold,
            Action::Buy => Action::Sell,
        }
    }
}

/// Symbols a history digit may take.
///
/// Without perturbation the move `0` ("stay") is possible and the alphabet is
/// quinary; with any perturbation the price change is never exactly zero and
/// only the four non-zero moves remain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alphabet {
    Quinary,
    Quaternary,
}

impl Alphabet {
    pub fn for_perturbation(pb: f64) -> Alphabet {
        if pb > 0.0 {
            Alphabet::Quaternary
        } else {
            Alphabet::Quinary
        }
    }

    pub fn symbols(self) -> &'static [i8] {
        match self {
            Alphabet::Quinary => &[-2, -1, 0, 1, 2],
            Alphabet::Quaternary => &[-2, -1, 1, 2],
        }
    }

    pub fn size(self) -> usize {
        self.symbols().len()
    }

    pub fn index_of(self, digit: i8) -> Option<usize> {
        match (self, digit) {
            (Alphabet::Quinary, -2..=2) => Some((digit + 2) as usize),
            (Alphabet::Quaternary, -2 | -1) => Some((digit + 2) as usize),
            (Alphabet::Quaternary, 1 | 2) => Some((digit + 1) as usize),
            _ => None,
        }
    }

    pub fn contains(self, digit: i8) -> bool {
        self.index_of(digit).is_some()
    }

    /// Number of distinct length-`memory` patterns.
    pub fn patterns(self, memory: usize) -> usize {
        self.size().pow(memory as u32)
    }

    /// Table index of a history tail, oldest digit most significant.
    ///
    /// Returns `None` if any digit lies outside the alphabet.
    pub fn pattern_index(self, tail: &[i8]) -> Option<usize> {
        tail.iter().try_fold(0usize, |acc, &d| {
            self.index_of(d).map(|i| acc * self.size() + i)
        })
    }

    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> i8 {
        let symbols = self.symbols();
        symbols[rng.random_range(0..symbols.len())]
    }
}

const TRITS_PER_BYTE: usize = 5;
const TRIT_BLOCKS: u8 = 243;

/// Base-3 digits of every byte value below 3^5, as actions.
static TRIT_TABLE: [[Action; TRITS_PER_BYTE]; TRIT_BLOCKS as usize] = {
    let mut out = [[Action::Hold; TRITS_PER_BYTE]; TRIT_BLOCKS as usize];
    let mut b = 0;
    while b < TRIT_BLOCKS as usize {
        let mut v = b;
        let mut k = 0;
        while k < TRITS_PER_BYTE {
            out[b][k] = match v % 3 {
                0 => Action::Sell,
                1 => Action::Hold,
                _ => Action::Buy,
            };
            v /= 3;
            k += 1;
        }
        b += 1;
    }
    out
};

/// A total lookup table from every length-`memory` history pattern to an action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    alphabet: Alphabet,
    memory: usize,
    table: Vec<Action>,
}

impl Strategy {
    /// Every entry drawn uniformly from {sell, hold, buy}.
    pub fn random<R: Rng + ?Sized>(alphabet: Alphabet, memory: usize, rng: &mut R) -> Self {
        let n = alphabet.patterns(memory);
        let mut table = Vec::with_capacity(n + TRITS_PER_BYTE);
        while table.len() < n {
            // Bytes below 3^5 map one-to-one onto five independent uniform trits.
            for byte in rng.next_u64().to_le_bytes() {
                if byte < TRIT_BLOCKS && table.len() < n {
                    table.extend_from_slice(&TRIT_TABLE[byte as usize]);
                }
            }
        }
        table.truncate(n);
        Self {
            alphabet,
            memory,
            table,
        }
    }

    /// Builds a table by evaluating `f` on each pattern (oldest digit first).
    pub fn from_fn(alphabet: Alphabet, memory: usize, mut f: impl FnMut(&[i8]) -> Action) -> Self {
        let n = alphabet.patterns(memory);
        let symbols = alphabet.symbols();
        let mut pattern = vec![0i8; memory];
        let table = (0..n)
            .map(|mut idx| {
                for slot in pattern.iter_mut().rev() {
                    *slot = symbols[idx % symbols.len()];
                    idx /= symbols.len();
                }
                f(&pattern)
            })
            .collect();
        Self {
            alphabet,
            memory,
            table,
        }
    }

    pub fn constant(alphabet: Alphabet, memory: usize, action: Action) -> Self {
        Self::from_fn(alphabet, memory, |_| action)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn entries(&self) -> &[Action] {
        &self.table
    }

    pub fn set(&mut self, tail: &[i8], action: Action) {
        let key = self.key(tail);
        self.table[key] = action;
    }

    /// Action for a pre-computed pattern index.
    #[inline]
    pub fn action_at(&self, key: usize) -> Action {
        self.table[key]
    }

    /// Recommended action for the last `memory` history digits.
    ///
    /// # Panics
    /// If the tail has the wrong length or contains a digit outside the
    /// alphabet; both mean the game was constructed inconsistently.
    pub fn recommend(&self, tail: &[i8]) -> Action {
        self.table[self.key(tail)]
    }

    fn key(&self, tail: &[i8]) -> usize {
        assert_eq!(
            tail.len(),
            self.memory,
            "history tail length does not match strategy memory"
        );
        self.alphabet
            .pattern_index(tail)
            .unwrap_or_else(|| panic!("history tail {tail:?} outside {:?} alphabet", self.alphabet))
    }
}
