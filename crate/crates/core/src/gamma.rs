//! The maps γ± on positive words, their bounds, and the matching search.

use std::collections::{BTreeMap, HashMap};

use crate::automorphism::{Automorphism, Direction};
use crate::error::{Error, Result};
use crate::words::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Minus => "minus",
            Side::Plus => "plus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GammaBound {
    pub level: u32,
    pub side: Side,
    pub bound: usize,
}

/// `γ₋(u) = φ^k(u_last)·u[..-1]`, `γ₊(u) = u[1..]·φ^k(u_0)`.
pub fn gamma(phi: &Automorphism, k: u32, side: Side, u: &Word, budget: usize) -> Result<Word> {
    if u.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !u.is_pure_positive() {
        return Err(Error::NotPositive { letter: phi.fmt_word(u) });
    }
    match side {
        Side::Minus => {
            let last = Word::letter(u.last().unwrap());
            let head = phi.apply(&last, k, Direction::Forward, budget)?;
            Ok(head.concat(&u.slice(0, u.len() - 1)))
        }
        Side::Plus => {
            let first = Word::letter(u.first().unwrap());
            let tail = phi.apply(&first, k, Direction::Forward, budget)?;
            Ok(u.slice(1, u.len()).concat(&tail))
        }
    }
}

/// Largest negative part of `φ^{-k}` of a strict suffix (minus) or prefix (plus)
/// of a letter image under `φ^k`.
pub fn gamma_bound(phi: &Automorphism, k: u32, side: Side, budget: usize) -> Result<GammaBound> {
    let fwd = phi.power_images(k, Direction::Forward, budget)?;
    let inv = phi.power_images(k, Direction::Inverse, budget)?;
    let mut best = 0usize;
    for w in &fwd {
        let ls = w.letters();
        match side {
            Side::Minus => {
                // reduced word, stored reversed
                let mut rev: Vec<Letter> = Vec::new();
                for t in (1..ls.len()).rev() {
                    for &l in inv[ls[t].idx()].letters().iter().rev() {
                        if rev.last() == Some(&l.inverse()) {
                            rev.pop();
                        } else {
                            rev.push(l);
                        }
                    }
                    if rev.len() > budget {
                        return Err(Error::BudgetExceeded { limit: budget });
                    }
                    let negs = rev.iter().rev().take_while(|l| !l.is_pos()).count();
                    let rest = &rev[..rev.len() - negs];
                    if !rest.is_empty() && rest.iter().all(|l| l.is_pos()) {
                        best = best.max(negs);
                    }
                }
            }
            Side::Plus => {
                let mut cur: Vec<Letter> = Vec::new();
                for t in 0..ls.len().saturating_sub(1) {
                    for &l in inv[ls[t].idx()].letters() {
                        if cur.last() == Some(&l.inverse()) {
                            cur.pop();
                        } else {
                            cur.push(l);
                        }
                    }
                    if cur.len() > budget {
                        return Err(Error::BudgetExceeded { limit: budget });
                    }
                    let negs = cur.iter().rev().take_while(|l| !l.is_pos()).count();
                    let rest = &cur[..cur.len() - negs];
                    if !rest.is_empty() && rest.iter().all(|l| l.is_pos()) {
                        best = best.max(negs);
                    }
                }
            }
        }
    }
    Ok(GammaBound { level: k, side, bound: best })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    pub i: usize,
    pub j: usize,
    pub w: Word,
}

const BASE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Consumed-letter stream of `x` under `γ`, with the lengths `|X_m|`.
///
/// `γ` drops the last letter of the left-infinite word `…φ^{2k}(x)·φ^k(x)·x`, and
/// `X_m` read backwards is the stream from offset `m` on, so iterates are slices.
#[derive(Default)]
struct Stream {
    letters: Vec<u16>,
    next: usize,
    lens: Vec<usize>,
    t: usize,
    i: Option<usize>,
    hash: Vec<u64>,
}

impl Stream {
    fn new(x: &[u16]) -> Self {
        Stream {
            letters: x.iter().rev().copied().collect(),
            lens: vec![x.len()],
            ..Stream::default()
        }
    }

    fn grow(&mut self, images: &[Vec<u16>]) {
        let c = self.letters[self.next] as usize;
        self.next += 1;
        self.letters.extend(images[c].iter().rev());
    }

    fn step(&mut self, images: &[Vec<u16>], g: usize) {
        let m = self.lens.len();
        while self.letters.len() < m {
            self.grow(images);
        }
        let c = self.letters[m - 1] as usize;
        self.lens.push(self.lens[m - 1] - 1 + images[c].len());
        while self.t < m && self.lens[m - self.t - 1] > self.t {
            self.t += 1;
        }
        if self.i.is_none() && self.t > g {
            self.i = Some(m);
        }
    }

    fn len_index_above(&mut self, images: &[Vec<u16>], g: usize, bound: usize) -> usize {
        while *self.lens.last().unwrap() <= bound {
            self.step(images, g);
        }
        self.lens.iter().position(|&l| l > bound).unwrap()
    }

    fn slice(&self, m: usize) -> &[u16] {
        &self.letters[m..m + self.lens[m]]
    }

    fn hashes(&mut self) {
        self.hash = Vec::with_capacity(self.letters.len() + 1);
        self.hash.push(0);
        for &c in &self.letters {
            let h = *self.hash.last().unwrap();
            self.hash.push(h.wrapping_mul(BASE).wrapping_add(c as u64 + 1));
        }
    }

    fn range_hash(&self, l: usize, r: usize, pow: &[u64]) -> u64 {
        self.hash[r].wrapping_sub(self.hash[l].wrapping_mul(pow[r - l]))
    }
}

/// Matching of positive words under one of `γ±`, at a fixed level.
///
/// The plus side runs the minus-side search on reversed words and images.
pub struct Matcher {
    side: Side,
    images: Vec<Vec<u16>>,
    g: usize,
    used: usize,
    budget: usize,
    pub cutoff_exceeded: usize,
}

impl Matcher {
    pub fn new(phi: &Automorphism, k: u32, side: Side, g: usize, budget: usize) -> Result<Self> {
        let imgs = phi.power_images(k, Direction::Forward, budget)?;
        let images = imgs
            .iter()
            .map(|w| {
                let mut v: Vec<u16> = w.letters().iter().map(|l| l.index).collect();
                if side == Side::Plus {
                    v.reverse();
                }
                v
            })
            .collect();
        Ok(Matcher { side, images, g, used: 0, budget, cutoff_exceeded: 0 })
    }

    /// Letters generated so far.
    pub fn work(&self) -> usize {
        self.used
    }

    fn orient(&self, x: &Word) -> Vec<u16> {
        let mut v: Vec<u16> = x.letters().iter().map(|l| l.index).collect();
        if self.side == Side::Plus {
            v.reverse();
        }
        v
    }

    fn charge(&mut self, n: usize) -> Result<()> {
        self.used += n;
        if self.used > self.budget {
            Err(Error::BudgetExceeded { limit: self.budget })
        } else {
            Ok(())
        }
    }

    fn stream_to_i(&self, x: &[u16]) -> Stream {
        let mut st = Stream::new(x);
        while st.i.is_none() {
            st.step(&self.images, self.g);
        }
        st
    }

    /// Smallest `(i, j)` with `γ^i(x) = γ^j(y)` for every pair of listed words that match.
    ///
    /// Keys are index pairs `(a, b)` with `a < b`. Empty words match only each other.
    /// A minimal match has `i < i_x` or `j < j_y`, so the iterates before `i_x` of every
    /// word are hashed first, then each stream is scanned against them one at a time.
    pub fn match_all(&mut self, words: &[Word]) -> Result<BTreeMap<(usize, usize), Match>> {
        let mut out = BTreeMap::new();
        let empties: Vec<usize> = (0..words.len()).filter(|&i| words[i].is_empty()).collect();
        for (n, &a) in empties.iter().enumerate() {
            for &b in &empties[n + 1..] {
                out.insert((a, b), Match { i: 0, j: 0, w: Word::empty() });
            }
        }
        let oriented: Vec<Vec<u16>> = words.iter().map(|w| self.orient(w)).collect();
        let mut pow: Vec<u64> = vec![1];
        let extend_pow = |pow: &mut Vec<u64>, n: usize| {
            while pow.len() <= n {
                let last = *pow.last().unwrap();
                pow.push(last.wrapping_mul(BASE));
            }
        };
        let mut heads: HashMap<(usize, u64), Vec<(usize, usize)>> = HashMap::new();
        let mut lmax = 0;
        for (id, x) in oriented.iter().enumerate() {
            if x.is_empty() {
                continue;
            }
            let mut st = self.stream_to_i(x);
            let i = st.i.unwrap();
            lmax = lmax.max(st.lens[i - 1]);
            while st.letters.len() < i - 1 + st.lens[i - 1] {
                st.grow(&self.images);
            }
            self.charge(st.letters.len())?;
            st.hashes();
            extend_pow(&mut pow, st.letters.len());
            for m in 0..i {
                let key = (st.lens[m], st.range_hash(m, m + st.lens[m], &pow));
                heads.entry(key).or_default().push((id, m));
            }
        }
        let mut hits: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for (y, ys) in oriented.iter().enumerate() {
            if ys.is_empty() {
                continue;
            }
            let mut st = self.stream_to_i(ys);
            st.len_index_above(&self.images, self.g, lmax);
            let top = st.lens.iter().rposition(|&l| l <= lmax).unwrap_or(0);
            while st.letters.len() < top + st.lens[top] {
                st.grow(&self.images);
            }
            self.charge(st.letters.len() + st.lens.len())?;
            st.hashes();
            extend_pow(&mut pow, st.letters.len());
            for n in 0..=top {
                let key = (st.lens[n], st.range_hash(n, n + st.lens[n], &pow));
                if let Some(list) = heads.get(&key) {
                    for &(x, m) in list {
                        if x != y {
                            let (k, v) = if x < y { ((x, y), (m, n)) } else { ((y, x), (n, m)) };
                            hits.entry(k).or_default().push(v);
                        }
                    }
                }
            }
        }
        for ((a, b), mut cands) in hits {
            cands.sort();
            cands.dedup();
            let mut sa = self.stream_to_i(&oriented[a]);
            let mut sb = self.stream_to_i(&oriented[b]);
            let mut found = None;
            for (i, j) in cands {
                for (st, m) in [(&mut sa, i), (&mut sb, j)] {
                    while st.lens.len() <= m {
                        st.step(&self.images, self.g);
                    }
                    while st.letters.len() < m + st.lens[m] {
                        st.grow(&self.images);
                    }
                }
                if sa.slice(i) == sb.slice(j) {
                    found = Some((i, j));
                    break;
                }
                log::warn!("hash collision between iterates {i} and {j}");
            }
            let Some((i, j)) = found else { continue };
            let (i0, j0) = self.reference_cutoffs(&mut sa, &mut sb);
            if i > i0 || j > j0 {
                self.cutoff_exceeded += 1;
                log::warn!("match ({i}, {j}) lies beyond the cutoffs ({i0}, {j0})");
            }
            let mut letters = sa.slice(i).to_vec();
            let w = match self.side {
                Side::Minus => {
                    letters.reverse();
                    Word::from_reduced(letters.into_iter().map(Letter::pos).collect())
                }
                Side::Plus => Word::from_reduced(letters.into_iter().map(Letter::pos).collect()).inverse(),
            };
            out.insert((a, b), Match { i, j, w });
        }
        Ok(out)
    }

    /// Smallest `(i, j)` with `γ^i(x) = γ^j(y)`, with the word `w` of the resulting label.
    pub fn match_words(&mut self, x: &Word, y: &Word) -> Result<Option<Match>> {
        if x == y {
            let w = match self.side {
                Side::Minus => x.clone(),
                Side::Plus => x.inverse(),
            };
            return Ok(Some(Match { i: 0, j: 0, w }));
        }
        let mut all = self.match_all(&[x.clone(), y.clone()])?;
        Ok(all.remove(&(0, 1)))
    }

    /// The cutoffs `(i0, j0)` from the length comparison of `X_i` and `Y_j`.
    fn reference_cutoffs(&self, sa: &mut Stream, sb: &mut Stream) -> (usize, usize) {
        let (imgs, g) = (&self.images, self.g);
        let (i, j) = (sa.i.unwrap(), sb.i.unwrap());
        let (li, lj) = (sa.lens[i], sb.lens[j]);
        use std::cmp::Ordering::*;
        match li.cmp(&lj) {
            Greater => (i, sb.len_index_above(imgs, g, li)),
            Less => (sa.len_index_above(imgs, g, lj), j),
            Equal => (sa.len_index_above(imgs, g, li), sb.len_index_above(imgs, g, lj)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = include_str!("../../../fixtures/three_letter.aut");
    const EX2: &str = include_str!("../../../fixtures/four_letter.aut");

    /// Bound recomputed by applying `φ^{-k}` to every suffix or prefix separately.
    fn naive_bound(phi: &Automorphism, k: u32, side: Side) -> usize {
        let mut best = 0;
        for w in phi.power_images(k, Direction::Forward, 1 << 20).unwrap() {
            for t in 1..w.len() {
                let part = match side {
                    Side::Minus => w.slice(t, w.len()),
                    Side::Plus => w.slice(0, t),
                };
                let y = phi.apply(&part, k, Direction::Inverse, 1 << 20).unwrap();
                let ls = y.letters();
                let negs = match side {
                    Side::Minus => ls.iter().take_while(|l| !l.is_pos()).count(),
                    Side::Plus => ls.iter().rev().take_while(|l| !l.is_pos()).count(),
                };
                let rest: Vec<_> = match side {
                    Side::Minus => ls[negs..].to_vec(),
                    Side::Plus => ls[..ls.len() - negs].to_vec(),
                };
                if !rest.is_empty() && rest.iter().all(|l| l.is_pos()) {
                    best = best.max(negs);
                }
            }
        }
        best
    }

    #[test]
    fn bound_examples() {
        let phi = Automorphism::parse(EX1).unwrap();
        assert_eq!(gamma_bound(&phi, 1, Side::Minus, 1000).unwrap().bound, 2);
        for k in 1..=3 {
            for side in [Side::Minus, Side::Plus] {
                assert_eq!(gamma_bound(&phi, k, side, 1 << 20).unwrap().bound, naive_bound(&phi, k, side));
            }
        }
        let phi2 = Automorphism::parse(EX2).unwrap();
        for side in [Side::Minus, Side::Plus] {
            assert_eq!(gamma_bound(&phi2, 1, side, 1 << 20).unwrap().bound, naive_bound(&phi2, 1, side));
        }
    }

    #[test]
    fn gamma_examples() {
        let phi = Automorphism::parse(EX1).unwrap();
        let u = phi.word("b a b a c").unwrap();
        assert_eq!(phi.fmt_compact(&gamma(&phi, 2, Side::Minus, &u, 100).unwrap()), "babacbaba");
        let phi2 = Automorphism::parse(EX2).unwrap();
        let s = phi2.word("d b d").unwrap();
        assert_eq!(phi2.fmt_compact(&gamma(&phi2, 1, Side::Plus, &s, 100).unwrap()), "bdacd");
        assert_eq!(gamma(&phi, 1, Side::Minus, &Word::empty(), 100), Err(Error::EmptyInput));
        let mixed = phi.word("a b^-1").unwrap();
        assert!(matches!(gamma(&phi, 1, Side::Minus, &mixed, 100), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn match_examples() {
        let phi = Automorphism::parse(EX1).unwrap();
        let g = gamma_bound(&phi, 2, Side::Minus, 1000).unwrap().bound;
        let mut m = Matcher::new(&phi, 2, Side::Minus, g, 1 << 20).unwrap();
        let x = phi.word("b a b a c").unwrap();
        let y = phi.word("b a b a c b a b a").unwrap();
        let r = m.match_words(&x, &y).unwrap().unwrap();
        assert_eq!((r.i, r.j), (1, 0));
        assert_eq!(phi.fmt_compact(&r.w), "babacbaba");
        let same = m.match_words(&y, &y).unwrap().unwrap();
        assert_eq!((same.i, same.j), (0, 0));
        assert_eq!(m.match_words(&Word::empty(), &Word::empty()).unwrap().unwrap().w, Word::empty());
        assert_eq!(m.match_words(&Word::empty(), &x).unwrap(), None);

        let phi2 = Automorphism::parse(EX2).unwrap();
        let g = gamma_bound(&phi2, 1, Side::Plus, 1000).unwrap().bound;
        let mut mp = Matcher::new(&phi2, 1, Side::Plus, g, 1 << 20).unwrap();
        let s1 = phi2.word("d b d").unwrap();
        let s2 = phi2.word("b d a c d").unwrap();
        let r = mp.match_words(&s1, &s2).unwrap().unwrap();
        assert_eq!((r.i, r.j), (1, 0));
        assert_eq!(phi2.fmt_compact(&r.w), phi2.fmt_compact(&s2.inverse()));
    }
}
