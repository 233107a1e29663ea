use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// A monomial of the free algebra: a finite sequence of generator indices.
///
/// Letters are stored 0-based; display and text formats are 1-based.
/// Words are ordered graded-lexicographically (length first, then letters),
/// which is the canonical term order everywhere in the crate.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(SmallVec<[u8; 8]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn letter(i: usize) -> Self {
        let mut v = SmallVec::new();
        v.push(i as u8);
        Word(v)
    }

    pub fn from_letters<I: IntoIterator<Item = usize>>(letters: I) -> Self {
        Word(letters.into_iter().map(|l| l as u8).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&l| l as usize)
    }

    pub fn at(&self, pos: usize) -> usize {
        self.0[pos] as usize
    }

    pub fn max_letter(&self) -> Option<usize> {
        self.0.iter().max().map(|&l| l as usize)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `self[..start] ++ middle ++ self[end..]`.
    pub fn splice(&self, start: usize, end: usize, middle: &Word) -> Word {
        let mut v: SmallVec<[u8; 8]> = SmallVec::with_capacity(self.0.len() + middle.0.len());
        v.extend_from_slice(&self.0[..start]);
        v.extend_from_slice(&middle.0);
        v.extend_from_slice(&self.0[end..]);
        Word(v)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(SmallVec::from_slice(&self.0[..len]))
    }

    /// Exponent vector of the word in `n` commuting variables.
    pub fn exponents(&self, n: usize) -> Vec<u32> {
        let mut e = vec![0u32; n];
        for &l in &self.0 {
            e[l as usize] += 1;
        }
        e
    }

    /// Position of the word among all words of its degree in lex order,
    /// read as a base-`n` numeral.
    pub fn rank_in_degree(&self, n: usize) -> usize {
        self.0.iter().fold(0usize, |acc, &l| acc * n + l as usize)
    }

    /// Inverse of [`Word::rank_in_degree`].
    pub fn unrank(mut rank: usize, degree: usize, n: usize) -> Word {
        let mut v: SmallVec<[u8; 8]> = SmallVec::from_elem(0, degree);
        for slot in v.iter_mut().rev() {
            *slot = (rank % n) as u8;
            rank /= n;
        }
        Word(v)
    }

    /// All words of a fixed degree, in lex order.
    pub fn all_of_degree(n: usize, degree: usize) -> Vec<Word> {
        let count = n.pow(degree as u32);
        (0..count).map(|r| Word::unrank(r, degree, n)).collect()
    }

    /// All words of degree `<= max_degree`, in graded-lex order.
    pub fn all_up_to(n: usize, max_degree: usize) -> Vec<Word> {
        (0..=max_degree)
            .flat_map(|d| Word::all_of_degree(n, d))
            .collect()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|l| format!("x{}", l + 1)).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Number of words of degree `<= max_degree` in `n` letters.
pub fn count_up_to(n: usize, max_degree: usize) -> usize {
    (0..=max_degree).map(|d| n.pow(d as u32)).sum()
}
