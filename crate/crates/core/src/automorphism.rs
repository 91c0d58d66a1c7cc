//! Positive automorphisms with a user supplied inverse.

use crate::error::{Error, Result};
use crate::words::{concat, parse_word, Letter, Word};

pub const DEFAULT_BUDGET: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Parsed but unchecked automorphism data.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub names: Vec<String>,
    pub images: Vec<Word>,
    pub inverse_images: Vec<Word>,
}

/// A validated positive primitive automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    names: Vec<String>,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

/// `m[a][b]` counts occurrences of letter `a` in the image of `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub m: Vec<Vec<u64>>,
}

impl IncidenceMatrix {
    pub fn of_images(images: &[Word]) -> Self {
        let n = images.len();
        let mut m = vec![vec![0u64; n]; n];
        for (b, img) in images.iter().enumerate() {
            for l in img.letters() {
                m[l.idx()][b] += 1;
            }
        }
        IncidenceMatrix { m }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = vec![vec![0u64; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        IncidenceMatrix { m }
    }

    /// Saturating product.
    pub fn mul(&self, other: &IncidenceMatrix) -> IncidenceMatrix {
        let n = self.m.len();
        let mut m = vec![vec![0u64; n]; n];
        for (row, out) in self.m.iter().zip(m.iter_mut()) {
            for (&a, orow) in row.iter().zip(&other.m) {
                if a == 0 {
                    continue;
                }
                for (cell, &b) in out.iter_mut().zip(orow) {
                    *cell = cell.saturating_add(a.saturating_mul(b));
                }
            }
        }
        IncidenceMatrix { m }
    }

    pub fn pow(&self, k: u32) -> IncidenceMatrix {
        let mut acc = IncidenceMatrix::identity(self.m.len());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn column_sums(&self) -> Vec<u64> {
        let n = self.m.len();
        (0..n).map(|j| (0..n).fold(0u64, |s, i| s.saturating_add(self.m[i][j]))).collect()
    }

    /// Wielandt test: some power `m ≤ (n-1)²+1` is entrywise positive.
    pub fn is_primitive(&self) -> bool {
        let n = self.m.len();
        let bound = (n.saturating_sub(1)).saturating_mul(n.saturating_sub(1)).saturating_add(1);
        let mut p = self.clone();
        for _ in 0..bound {
            if p.m.iter().all(|row| row.iter().all(|&x| x > 0)) {
                return true;
            }
            p = p.mul(self);
        }
        false
    }
}

fn substitute(images: &[Word], u: &Word, budget: usize) -> Result<Word> {
    let mut out = Word::empty();
    for &l in u.letters() {
        let img = &images[l.idx()];
        if l.is_pos() {
            for &x in img.letters() {
                out.push(x);
            }
        } else {
            for &x in img.letters().iter().rev() {
                out.push(x.inverse());
            }
        }
        if out.len() > budget {
            return Err(Error::BudgetExceeded { limit: budget });
        }
    }
    Ok(out)
}

impl Candidate {
    pub fn validate(self) -> Result<Automorphism> {
        validate(self)
    }
}

pub fn validate(c: Candidate) -> Result<Automorphism> {
    let n = c.names.len();
    assert_eq!(c.images.len(), n);
    assert_eq!(c.inverse_images.len(), n);
    for (i, img) in c.images.iter().enumerate() {
        if !img.is_pure_positive() {
            return Err(Error::NotPositive { letter: c.names[i].clone() });
        }
    }
    for i in 0..n {
        let g = Word::letter(Letter::pos(i as u16));
        let there = substitute(&c.images, &c.inverse_images[i], DEFAULT_BUDGET)?;
        if there != g {
            return Err(Error::NotInverse {
                letter: c.names[i].clone(),
                detail: format!("forward of inverse image is {}", there.display(&c.names)),
            });
        }
        let back = substitute(&c.inverse_images, &c.images[i], DEFAULT_BUDGET)?;
        if back != g {
            return Err(Error::NotInverse {
                letter: c.names[i].clone(),
                detail: format!("inverse of forward image is {}", back.display(&c.names)),
            });
        }
    }
    if !IncidenceMatrix::of_images(&c.images).is_primitive() {
        return Err(Error::NotPrimitive);
    }
    Ok(Automorphism { names: c.names, images: c.images, inverse_images: c.inverse_images })
}

/// Reads the line based `letters:` / `map x = ...` / `inv x = ...` format.
/// Missing `inv` lines leave an empty inverse image, which validation rejects.
pub fn parse_candidate(text: &str) -> Result<Candidate> {
    let mut names: Option<Vec<String>> = None;
    let mut images: Vec<Option<Word>> = Vec::new();
    let mut inverse: Vec<Option<Word>> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: String| Error::Parse { line: line_no, msg };
        if let Some(rest) = line.strip_prefix("letters:") {
            if names.is_some() {
                return Err(perr("duplicate `letters:` line".into()));
            }
            let ns: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if ns.len() < 2 {
                return Err(perr("need at least two letters".into()));
            }
            for (i, a) in ns.iter().enumerate() {
                if a == "1" || a.contains('^') || ns[..i].contains(a) {
                    return Err(perr(format!("bad or repeated letter name `{a}`")));
                }
            }
            images = vec![None; ns.len()];
            inverse = vec![None; ns.len()];
            names = Some(ns);
            continue;
        }
        let Some(ns) = names.as_ref() else {
            return Err(perr("`letters:` must come first".into()));
        };
        let (kind, rest) = if let Some(r) = line.strip_prefix("map ") {
            (0, r)
        } else if let Some(r) = line.strip_prefix("inv ") {
            (1, r)
        } else {
            return Err(perr(format!("unrecognised line `{line}`")));
        };
        let (lhs, rhs) = rest
            .split_once('=')
            .ok_or_else(|| perr("expected `=`".into()))?;
        let lhs = lhs.trim();
        let idx = ns
            .iter()
            .position(|n| n == lhs)
            .ok_or_else(|| perr(format!("unknown letter `{lhs}`")))?;
        let word = parse_word(rhs, ns).map_err(|e| perr(e.to_string()))?;
        let slot = if kind == 0 { &mut images[idx] } else { &mut inverse[idx] };
        if slot.is_some() {
            return Err(perr(format!("duplicate definition for `{lhs}`")));
        }
        *slot = Some(word);
    }
    let names = names.ok_or(Error::Parse { line: 0, msg: "missing `letters:` line".into() })?;
    let mut imgs = Vec::with_capacity(names.len());
    for (i, img) in images.into_iter().enumerate() {
        imgs.push(img.ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("missing `map {}` line", names[i]),
        })?);
    }
    let inverse_images = inverse.into_iter().map(|w| w.unwrap_or_default()).collect();
    Ok(Candidate { names, images: imgs, inverse_images })
}

impl Automorphism {
    pub fn parse(text: &str) -> Result<Self> {
        parse_candidate(text)?.validate()
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn image(&self, a: usize) -> &Word {
        &self.images[a]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse_images
    }

    pub fn incidence(&self) -> IncidenceMatrix {
        IncidenceMatrix::of_images(&self.images)
    }

    pub fn word(&self, text: &str) -> Result<Word> {
        parse_word(text, &self.names)
    }

    pub fn fmt_word(&self, w: &Word) -> String {
        w.display(&self.names).to_string()
    }

    pub fn fmt_compact(&self, w: &Word) -> String {
        w.display_compact(&self.names).to_string()
    }

    /// `φ^{±k}(u)`, failing once an intermediate word exceeds `budget` letters.
    pub fn apply(&self, u: &Word, k: u32, dir: Direction, budget: usize) -> Result<Word> {
        let imgs = match dir {
            Direction::Forward => &self.images,
            Direction::Inverse => &self.inverse_images,
        };
        let mut cur = u.clone();
        for _ in 0..k {
            cur = substitute(imgs, &cur, budget)?;
        }
        Ok(cur)
    }

    /// Images of every generator under `φ^{±k}`.
    pub fn power_images(&self, k: u32, dir: Direction, budget: usize) -> Result<Vec<Word>> {
        let base = match dir {
            Direction::Forward => &self.images,
            Direction::Inverse => &self.inverse_images,
        };
        let mut cur: Vec<Word> =
            (0..self.rank()).map(|i| Word::letter(Letter::pos(i as u16))).collect();
        for _ in 0..k {
            let mut total = 0usize;
            let mut next = Vec::with_capacity(cur.len());
            for w in &cur {
                let img = substitute(base, w, budget)?;
                total += img.len();
                if total > budget {
                    return Err(Error::BudgetExceeded { limit: budget });
                }
                next.push(img);
            }
            cur = next;
        }
        Ok(cur)
    }

    /// `w_h = φ^{k(h-1)}(w) ⋯ φ^k(w) w`, with `(i_w∘φ^k)^h = i_{w_h}∘φ^{kh}`.
    pub fn conjugator_power(&self, w: &Word, k: u32, h: u32, budget: usize) -> Result<Word> {
        assert!(h >= 1);
        let mut acc = w.clone();
        let mut term = w.clone();
        for _ in 1..h {
            term = self.apply(&term, k, Direction::Forward, budget)?;
            acc = concat(&term, &acc);
            if acc.len() > budget {
                return Err(Error::BudgetExceeded { limit: budget });
            }
        }
        Ok(acc)
    }

    /// `(i_w∘φ^k)(u) = w⁻¹ φ^k(u) w`.
    pub fn apply_conjugated(&self, w: &Word, k: u32, u: &Word, budget: usize) -> Result<Word> {
        let img = self.apply(u, k, Direction::Forward, budget)?;
        Ok(concat(&concat(&w.inverse(), &img), w))
    }

    pub fn first_letter_map(&self) -> Vec<usize> {
        self.images.iter().map(|w| w.first().unwrap().idx()).collect()
    }

    pub fn last_letter_map(&self) -> Vec<usize> {
        self.images.iter().map(|w| w.last().unwrap().idx()).collect()
    }
}

/// For a self map of letters, the cycle length of each letter lying on a cycle.
pub fn cycle_lengths(map: &[usize]) -> Vec<Option<u64>> {
    let n = map.len();
    (0..n)
        .map(|a| {
            let mut x = map[a];
            for step in 1..=n {
                if x == a {
                    return Some(step as u64);
                }
                x = map[x];
            }
            None
        })
        .collect()
}

/// `|φ^n(a)|` for growing `n`, saturating at `u128::MAX`.
#[derive(Clone, Debug)]
pub struct LengthTable {
    images: Vec<Vec<usize>>,
    rows: Vec<Vec<u128>>,
}

impl LengthTable {
    pub fn new(phi: &Automorphism) -> Self {
        let images = phi.images.iter().map(|w| w.letters().iter().map(|l| l.idx()).collect()).collect();
        LengthTable { images, rows: vec![vec![1; phi.rank()]] }
    }

    pub fn ensure(&mut self, n: usize) {
        while self.rows.len() <= n {
            let prev = self.rows.last().unwrap();
            let row = self
                .images
                .iter()
                .map(|img| img.iter().fold(0u128, |s, &b| s.saturating_add(prev[b])))
                .collect();
            self.rows.push(row);
        }
    }

    pub fn len(&mut self, n: usize, a: usize) -> u128 {
        self.ensure(n);
        self.rows[n][a]
    }

    /// `|φ^n(u)|` for a pure word `u`.
    pub fn word_len(&mut self, n: usize, u: &[Letter]) -> u128 {
        self.ensure(n);
        u.iter().fold(0u128, |s, l| s.saturating_add(self.rows[n][l.idx()]))
    }
}
