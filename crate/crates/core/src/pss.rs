//! Prefix-suffix developments, the shift action on them, and exact
//! symbolic points of the attracting subshift.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::fmt;

use crate::automorphism::{cycle_lengths, Automorphism, Direction, LengthTable};
use crate::error::{Error, Result};
use crate::words::{Letter, Word};

/// A level-`k` triplet `(p, a, s)` with `φ^k(parent) = p·a·s`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triplet {
    pub level: u32,
    pub parent: usize,
    pub p: Word,
    pub a: usize,
    pub s: Word,
}

impl Triplet {
    pub fn display(&self, names: &[String]) -> String {
        format!(
            "({}, {}, {})",
            self.p.display_compact(names),
            names[self.a],
            self.s.display_compact(names)
        )
    }

    pub fn is_loop(&self) -> bool {
        self.parent == self.a
    }
}

/// A level-1 triplet stored as the position of its letter in `φ(parent)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub parent: u16,
    pub pos: u16,
}

/// Eventually periodic level-1 development `pre · period^∞`, kept canonical.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Development {
    pub pre: Vec<Step>,
    pub period: Vec<Step>,
}

impl Development {
    pub fn step(&self, i: usize) -> Step {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.period[(i - self.pre.len()) % self.period.len()]
        }
    }

    pub fn canonical(mut self) -> Development {
        let t = self.period.len();
        for d in 1..=t {
            if t.is_multiple_of(d) && (d..t).all(|i| self.period[i] == self.period[i % d]) {
                self.period.truncate(d);
                break;
            }
        }
        while let (Some(&x), Some(&y)) = (self.pre.last(), self.period.last()) {
            if x != y {
                break;
            }
            self.pre.pop();
            self.period.rotate_right(1);
        }
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DevClass {
    Generic,
    DMin,
    DMax,
    DEps,
}

/// Exact identity of a point of the subshift.
///
/// `Periodic` is `S^offset` of the periodic point whose left half ends with
/// the letter `c` and whose right half starts with `b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointKey {
    Periodic { c: u16, b: u16, offset: i128 },
    Generic(Development),
}

/// `S^shift` of a point whose level-`k` development is the constant `anchor*`.
/// The seed completes the side on which the anchor has an empty word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolicPoint {
    pub anchor: Triplet,
    pub shift: i128,
    pub seed: Option<usize>,
}

impl SymbolicPoint {
    pub fn display(&self, names: &[String]) -> String {
        let mut s = format!("S^{}{}@{}", self.shift, self.anchor.display(names), self.anchor.level);
        if let Some(x) = self.seed {
            s.push_str(&format!(" seed {}", names[x]));
        }
        s
    }
}

fn to_i(x: u128) -> Result<i128> {
    i128::try_from(x).map_err(|_| Error::CapExceeded { cap: u64::MAX })
}

/// Prefix-suffix machinery bound to one automorphism.
pub struct Pss<'a> {
    phi: &'a Automorphism,
    img: Vec<Vec<u16>>,
    lens: RefCell<LengthTable>,
    first_cycle: Vec<Option<u64>>,
    last_cycle: Vec<Option<u64>>,
    factors: BTreeSet<(u16, u16)>,
}

impl<'a> Pss<'a> {
    pub fn new(phi: &'a Automorphism) -> Self {
        let img: Vec<Vec<u16>> =
            phi.images().iter().map(|w| w.letters().iter().map(|l| l.index).collect()).collect();
        let factors = two_factors_of(&img);
        Pss {
            phi,
            first_cycle: cycle_lengths(&phi.first_letter_map()),
            last_cycle: cycle_lengths(&phi.last_letter_map()),
            lens: RefCell::new(LengthTable::new(phi)),
            img,
            factors,
        }
    }

    pub fn phi(&self) -> &Automorphism {
        self.phi
    }

    pub fn names(&self) -> &[String] {
        self.phi.names()
    }

    pub fn len(&self, n: usize, a: usize) -> u128 {
        self.lens.borrow_mut().len(n, a)
    }

    fn ilen(&self, n: usize, a: usize) -> Result<i128> {
        let l = self.len(n, a);
        if l == u128::MAX {
            return Err(Error::CapExceeded { cap: u64::MAX });
        }
        to_i(l)
    }

    pub fn word_len(&self, n: usize, u: &Word) -> u128 {
        self.lens.borrow_mut().word_len(n, u.letters())
    }

    pub fn first_cycle(&self) -> &[Option<u64>] {
        &self.first_cycle
    }

    pub fn last_cycle(&self) -> &[Option<u64>] {
        &self.last_cycle
    }

    pub fn two_factors(&self) -> &BTreeSet<(u16, u16)> {
        &self.factors
    }

    pub fn admissible(&self, x: usize, y: usize) -> bool {
        self.factors.contains(&(x as u16, y as u16))
    }

    /// Letters `a` with `φ^k(a) = p·a·s`, one triplet per occurrence.
    pub fn loops(&self, k: u32, budget: usize) -> Result<Vec<Triplet>> {
        let imgs = self.phi.power_images(k, Direction::Forward, budget)?;
        let mut out = Vec::new();
        for (a, w) in imgs.iter().enumerate() {
            for (t, l) in w.letters().iter().enumerate() {
                if l.idx() == a {
                    out.push(Triplet {
                        level: k,
                        parent: a,
                        p: w.slice(0, t),
                        a,
                        s: w.slice(t + 1, w.len()),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Seed pairs `(c, b)` with `φ^k(c)` ending in `c`, `φ^k(b)` starting with `b`, `cb` admissible.
    pub fn periodic_seeds(&self, k: u32) -> Vec<(usize, usize)> {
        let fm = self.phi.first_letter_map();
        let lm = self.phi.last_letter_map();
        let iter = |m: &[usize], a: usize| (0..k).fold(a, |x, _| m[x]);
        let n = self.phi.rank();
        let mut out = Vec::new();
        for c in (0..n).filter(|&c| iter(&lm, c) == c) {
            for b in (0..n).filter(|&b| iter(&fm, b) == b) {
                if self.admissible(c, b) {
                    out.push((c, b));
                }
            }
        }
        out
    }

    /// Seeds completing the empty side of a constant development, drawn from
    /// every letter periodic under the first or last letter map.
    pub fn seeds_for(&self, t: &Triplet) -> Vec<usize> {
        let n = self.phi.rank();
        if t.p.is_empty() {
            (0..n).filter(|&c| self.last_cycle[c].is_some() && self.admissible(c, t.a)).collect()
        } else if t.s.is_empty() {
            (0..n).filter(|&b| self.first_cycle[b].is_some() && self.admissible(t.a, b)).collect()
        } else {
            Vec::new()
        }
    }

    pub fn step_letter(&self, s: Step) -> usize {
        self.img[s.parent as usize][s.pos as usize] as usize
    }

    pub fn step_prefix(&self, s: Step) -> Word {
        let v = &self.img[s.parent as usize][..s.pos as usize];
        Word::from_reduced(v.iter().map(|&x| Letter::pos(x)).collect())
    }

    pub fn step_suffix(&self, s: Step) -> Word {
        let v = &self.img[s.parent as usize][s.pos as usize + 1..];
        Word::from_reduced(v.iter().map(|&x| Letter::pos(x)).collect())
    }

    fn prefix_len(&self, level: usize, s: Step) -> u128 {
        let v = &self.img[s.parent as usize][..s.pos as usize];
        let mut lens = self.lens.borrow_mut();
        v.iter().fold(0u128, |acc, &x| acc.saturating_add(lens.len(level, x as usize)))
    }

    fn prefix_empty(&self, s: Step) -> bool {
        s.pos == 0
    }

    fn suffix_empty(&self, s: Step) -> bool {
        s.pos as usize + 1 == self.img[s.parent as usize].len()
    }

    pub fn step_display(&self, s: Step) -> String {
        let names = self.names();
        format!(
            "({}, {}, {})",
            self.step_prefix(s).display_compact(names),
            names[self.step_letter(s)],
            self.step_suffix(s).display_compact(names)
        )
    }

    pub fn dev_display(&self, d: &Development) -> String {
        let pre: Vec<String> = d.pre.iter().map(|&s| self.step_display(s)).collect();
        let per: Vec<String> = d.period.iter().map(|&s| self.step_display(s)).collect();
        format!("{}[{}]*", pre.join(""), per.join(""))
    }

    pub fn classify(&self, d: &Development) -> DevClass {
        let all_p = d.pre.iter().chain(&d.period).all(|&s| self.prefix_empty(s));
        let all_s = d.pre.iter().chain(&d.period).all(|&s| self.suffix_empty(s));
        if all_p {
            DevClass::DMin
        } else if all_s {
            DevClass::DMax
        } else if d.period.iter().all(|&s| self.prefix_empty(s))
            || d.period.iter().all(|&s| self.suffix_empty(s))
        {
            DevClass::DEps
        } else {
            DevClass::Generic
        }
    }

    /// Level-1 steps `0..n` of the point sitting at `pos` inside `φ^n(a)`.
    pub fn decode(&self, a: usize, n: usize, pos: u128) -> Vec<Step> {
        let mut out = vec![Step { parent: 0, pos: 0 }; n];
        let mut cur = a;
        let mut rem = pos;
        for level in (0..n).rev() {
            let mut acc = 0u128;
            let mut found = false;
            for (t, &x) in self.img[cur].iter().enumerate() {
                let l = self.len(level, x as usize);
                if rem < acc + l {
                    out[level] = Step { parent: cur as u16, pos: t as u16 };
                    rem -= acc;
                    cur = x as usize;
                    found = true;
                    break;
                }
                acc += l;
            }
            assert!(found, "decode position out of range");
        }
        out
    }

    /// Splits a level-`k` triplet into its `k` level-1 steps.
    pub fn desubstitute(&self, t: &Triplet) -> Vec<Step> {
        self.decode(t.parent, t.level as usize, t.p.len() as u128)
    }

    /// Inverse of [`Pss::desubstitute`].
    pub fn recompose(&self, steps: &[Step], budget: usize) -> Result<Triplet> {
        let k = steps.len();
        assert!(k >= 1);
        let mut q = Word::empty();
        let mut r = Word::empty();
        for (i, &st) in steps.iter().enumerate() {
            let pi = self.phi.apply(&self.step_prefix(st), i as u32, Direction::Forward, budget)?;
            q = pi.concat(&q);
            let si = self.phi.apply(&self.step_suffix(st), i as u32, Direction::Forward, budget)?;
            r = r.concat(&si);
        }
        Ok(Triplet {
            level: k as u32,
            parent: steps[k - 1].parent as usize,
            p: q,
            a: self.step_letter(steps[0]),
            s: r,
        })
    }

    /// Number of letters of `φ^n(a_n)` lying left of the origin.
    pub fn pos_n(&self, d: &Development, n: usize) -> Result<i128> {
        let mut acc = 0u128;
        for i in 0..n {
            acc = acc
                .checked_add(self.prefix_len(i, d.step(i)))
                .ok_or(Error::CapExceeded { cap: u64::MAX })?;
        }
        to_i(acc)
    }

    /// Development of `S^m` of the point with development `d`.
    pub fn shift_dev(&self, d: &Development, m: i128) -> Result<Development> {
        if m == 0 {
            return Ok(d.clone().canonical());
        }
        let limit = d.pre.len() + 64 * d.period.len() + 256;
        let mut pos: i128 = 0;
        for n in 0..limit {
            let st = d.step(n);
            let an = self.step_letter(st);
            let total = match self.ilen(n, an) {
                Ok(l) => l,
                Err(_) => break,
            };
            if let Some(target) = pos.checked_add(m) {
                if target >= 0 && target < total {
                    let head = self.decode(an, n, target as u128);
                    let nd = if n >= d.pre.len() {
                        let mut period = d.period.clone();
                        period.rotate_left((n - d.pre.len()) % d.period.len());
                        Development { pre: head, period }
                    } else {
                        let mut pre = head;
                        pre.extend_from_slice(&d.pre[n..]);
                        Development { pre, period: d.period.clone() }
                    };
                    return Ok(nd.canonical());
                }
            }
            let add = self.prefix_len(n, st);
            if add == u128::MAX {
                break;
            }
            pos = match pos.checked_add(to_i(add)?) {
                Some(p) => p,
                None => break,
            };
        }
        Err(Error::UndefinedShift)
    }

    /// Development of `∂²φ^k` of the point with development `d`.
    pub fn lift_dev(&self, d: &Development, k: u64) -> Development {
        let mut pre = Vec::with_capacity(d.pre.len() + k as usize);
        let mut a0 = self.step_letter(d.step(0));
        let mut added = Vec::with_capacity(k as usize);
        for _ in 0..k {
            added.push(Step { parent: a0 as u16, pos: 0 });
            a0 = self.img[a0][0] as usize;
        }
        added.reverse();
        pre.extend(added);
        pre.extend_from_slice(&d.pre);
        Development { pre, period: d.period.clone() }.canonical()
    }

    /// Letters `from..to` (clamped) of `φ^n(a)`.
    pub fn window(&self, a: usize, n: usize, from: i128, to: i128) -> Vec<u16> {
        let mut out = Vec::new();
        self.window_into(a, n, from, to, &mut out);
        out
    }

    fn window_into(&self, a: usize, n: usize, from: i128, to: i128, out: &mut Vec<u16>) {
        if to <= 0 || from >= to {
            return;
        }
        if n == 0 {
            if from <= 0 {
                out.push(a as u16);
            }
            return;
        }
        let mut acc: i128 = 0;
        for &x in &self.img[a] {
            if acc >= to {
                break;
            }
            let l = i128::try_from(self.len(n - 1, x as usize)).unwrap_or(i128::MAX);
            if acc.saturating_add(l) > from {
                self.window_into(x as usize, n - 1, from - acc, to - acc, out);
            }
            acc = acc.saturating_add(l);
        }
    }

    /// Letters at positions `from..to` of the periodic bi-infinite word `…c.b…`.
    fn periodic_range(&self, c: usize, b: usize, from: i128, to: i128) -> Result<Vec<u16>> {
        let mut out = Vec::new();
        if from < 0 {
            let hi = to.min(0);
            let m = self.last_cycle[c].ok_or_else(|| Error::Invariant("seed letter not periodic".into()))?;
            let mut n = 0usize;
            while self.ilen(n, c)? < -from {
                n += m as usize;
            }
            let l = self.ilen(n, c)?;
            out.extend(self.window(c, n, l + from, l + hi));
        }
        if to > 0 {
            let lo = from.max(0);
            let m = self.first_cycle[b].ok_or_else(|| Error::Invariant("seed letter not periodic".into()))?;
            let mut n = 0usize;
            while self.ilen(n, b)? < to {
                n += m as usize;
            }
            out.extend(self.window(b, n, lo, to));
        }
        Ok(out)
    }

    /// Letters at positions `-l..l` around the origin of the point.
    fn around(&self, key: &PointKey, l: i128) -> Result<Vec<u16>> {
        match key {
            PointKey::Periodic { c, b, offset } => {
                self.periodic_range(*c as usize, *b as usize, offset - l, offset + l)
            }
            PointKey::Generic(d) => {
                let limit = d.pre.len() + 64 * d.period.len() + 256;
                let mut pos: i128 = 0;
                for n in 0..limit {
                    let st = d.step(n);
                    let an = self.step_letter(st);
                    let total = self.ilen(n, an)?;
                    if pos >= l && total - pos >= l {
                        return Ok(self.window(an, n, pos - l, pos + l));
                    }
                    pos += to_i(self.prefix_len(n, st))?;
                }
                Err(Error::Invariant("development does not expand on both sides".into()))
            }
        }
    }

    /// First `l` letters of each half of the point.
    pub fn expand_key(&self, key: &PointKey, l: usize) -> Result<(Word, Word)> {
        let li = l as i128;
        let letters = self.around(key, li)?;
        Ok(halves(&letters, l))
    }

    /// `(U₀, V₀)` as letter indices; `U₀` is the inverse of the returned index.
    pub fn first_letters(&self, key: &PointKey) -> Result<(usize, usize)> {
        let v = self.around(key, 1)?;
        Ok((v[0] as usize, v[1] as usize))
    }

    /// Canonical identity of a symbolic point.
    pub fn key_of(&self, pt: &SymbolicPoint) -> Result<PointKey> {
        let t = &pt.anchor;
        match (t.p.is_empty(), t.s.is_empty()) {
            (false, false) => {
                let d = Development { pre: Vec::new(), period: self.desubstitute(t) }.canonical();
                Ok(PointKey::Generic(self.shift_dev(&d, pt.shift)?))
            }
            (true, false) => {
                let c = pt.seed.ok_or(Error::UndefinedShift)?;
                Ok(PointKey::Periodic { c: c as u16, b: t.a as u16, offset: pt.shift })
            }
            (false, true) => {
                let b = pt.seed.ok_or(Error::UndefinedShift)?;
                Ok(PointKey::Periodic { c: t.a as u16, b: b as u16, offset: pt.shift - 1 })
            }
            (true, true) => Err(Error::Invariant("triplet with empty prefix and suffix".into())),
        }
    }

    pub fn points_equal(&self, x: &SymbolicPoint, y: &SymbolicPoint) -> Result<bool> {
        Ok(self.key_of(x)? == self.key_of(y)?)
    }

    pub fn shift_key(&self, key: &PointKey, m: i128) -> Result<PointKey> {
        match key {
            PointKey::Periodic { c, b, offset } => Ok(PointKey::Periodic {
                c: *c,
                b: *b,
                offset: offset.checked_add(m).ok_or(Error::CapExceeded { cap: u64::MAX })?,
            }),
            PointKey::Generic(d) => Ok(PointKey::Generic(self.shift_dev(d, m)?)),
        }
    }

    /// `|φ^k(φ^n(a)[..j])|`.
    fn lifted_prefix(&self, a: usize, n: usize, j: i128, k: usize) -> Result<i128> {
        if j <= 0 {
            return Ok(0);
        }
        if n == 0 {
            return self.ilen(k, a);
        }
        let mut acc: i128 = 0;
        let mut total: i128 = 0;
        for &x in &self.img[a] {
            let l = self.ilen(n - 1, x as usize)?;
            if j >= acc + l {
                total = total
                    .checked_add(self.ilen(n - 1 + k, x as usize)?)
                    .ok_or(Error::CapExceeded { cap: u64::MAX })?;
                acc += l;
                if j == acc {
                    break;
                }
            } else {
                let part = self.lifted_prefix(x as usize, n - 1, j - acc, k)?;
                total = total.checked_add(part).ok_or(Error::CapExceeded { cap: u64::MAX })?;
                break;
            }
        }
        Ok(total)
    }

    /// `∂²φ^k` applied to the point.
    pub fn apply_key(&self, key: &PointKey, k: u64) -> Result<PointKey> {
        match key {
            PointKey::Periodic { c, b, offset } => {
                let (c, b) = (*c as usize, *b as usize);
                let lm = self.phi.last_letter_map();
                let fm = self.phi.first_letter_map();
                let c2 = (0..k).fold(c, |x, _| lm[x]);
                let b2 = (0..k).fold(b, |x, _| fm[x]);
                let ku = k as usize;
                let off = if *offset >= 0 {
                    let m = self.first_cycle[b].unwrap() as usize;
                    let mut n = 0;
                    while self.ilen(n, b)? < *offset {
                        n += m;
                    }
                    self.lifted_prefix(b, n, *offset, ku)?
                } else {
                    let m = self.last_cycle[c].unwrap() as usize;
                    let mut n = 0;
                    while self.ilen(n, c)? < -*offset {
                        n += m;
                    }
                    let l = self.ilen(n, c)?;
                    let whole = self.ilen(n + ku, c)?;
                    -(whole - self.lifted_prefix(c, n, l + *offset, ku)?)
                };
                Ok(PointKey::Periodic { c: c2 as u16, b: b2 as u16, offset: off })
            }
            PointKey::Generic(d) => Ok(PointKey::Generic(self.lift_dev(d, k))),
        }
    }

    /// Whether `∂²(i_w∘φ^k)^h` fixes the point, through `S^{±|w_h|}∘∂²φ^{kh}`.
    pub fn is_fixed(&self, key: &PointKey, w: &Word, k: u32, h: u64) -> Result<bool> {
        let mut wl: u128 = 0;
        for t in 0..h {
            wl = wl
                .checked_add(self.word_len((k as u64 * t) as usize, w))
                .ok_or(Error::CapExceeded { cap: h })?;
        }
        let m = to_i(wl)?;
        let m = if w.is_pure_negative() { -m } else { m };
        let lifted = self.apply_key(key, k as u64 * h)?;
        match self.shift_key(&lifted, m) {
            Ok(back) => Ok(&back == key),
            Err(Error::UndefinedShift) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Minimal `h ≤ cap` with the point fixed by `(i_w∘φ^k)^h`.
    pub fn fixing_h(&self, key: &PointKey, w: &Word, k: u32, cap: u64) -> Result<u64> {
        for h in 1..=cap {
            match self.is_fixed(key, w, k, h) {
                Ok(true) => return Ok(h),
                Ok(false) => {}
                Err(Error::CapExceeded { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        Err(Error::CapExceeded { cap })
    }

    /// Minimal period of the level-1 development of the point.
    pub fn rho_power(&self, key: &PointKey) -> u64 {
        match key {
            PointKey::Periodic { c, b, offset } => {
                if *offset >= 0 {
                    self.first_cycle[*b as usize].unwrap_or(0)
                } else {
                    self.last_cycle[*c as usize].unwrap_or(0)
                }
            }
            PointKey::Generic(d) => d.period.len() as u64,
        }
    }

    pub fn key_display(&self, key: &PointKey) -> String {
        let names = self.names();
        match key {
            PointKey::Periodic { c, b, offset } => {
                format!("S^{}(per {}.{})", offset, names[*c as usize], names[*b as usize])
            }
            PointKey::Generic(d) => self.dev_display(d),
        }
    }

    /// Expansion computed straight from the anchor's limit words, independent of [`PointKey`].
    pub fn expand_point(&self, pt: &SymbolicPoint, l: usize, budget: usize) -> Result<(Word, Word)> {
        let t = &pt.anchor;
        let k = t.level;
        let need = l + pt.shift.unsigned_abs() as usize + 1;
        let mut right: Vec<u16> = vec![t.a as u16];
        if !t.s.is_empty() {
            let mut piece = t.s.clone();
            while right.len() < need {
                right.extend(piece.letters().iter().map(|x| x.index));
                piece = self.phi.apply(&piece, k, Direction::Forward, budget)?;
            }
        } else {
            let b = pt.seed.ok_or(Error::UndefinedShift)?;
            right.extend(self.fixed_word(b, need, true, budget)?);
        }
        let mut left: Vec<u16> = Vec::new();
        if !t.p.is_empty() {
            let mut piece = t.p.clone();
            while left.len() < need {
                left.extend(piece.letters().iter().rev().map(|x| x.index));
                piece = self.phi.apply(&piece, k, Direction::Forward, budget)?;
            }
        } else {
            let c = pt.seed.ok_or(Error::UndefinedShift)?;
            let mut v = self.fixed_word(c, need, false, budget)?;
            v.reverse();
            left = v;
        }
        let at = |x: i128| -> u16 {
            if x >= 0 {
                right[x as usize]
            } else {
                left[(-x - 1) as usize]
            }
        };
        let j = pt.shift;
        let li = l as i128;
        let letters: Vec<u16> = (j - li..j + li).map(at).collect();
        Ok(halves(&letters, l))
    }

    /// A long enough prefix (or suffix) of the fixed word generated by a periodic letter.
    fn fixed_word(&self, x: usize, need: usize, forward: bool, budget: usize) -> Result<Vec<u16>> {
        let cyc = if forward { self.first_cycle[x] } else { self.last_cycle[x] };
        let m = cyc.ok_or_else(|| Error::Invariant("seed letter not periodic".into()))? as u32;
        let mut w = Word::letter(Letter::pos(x as u16));
        while w.len() < need {
            w = self.phi.apply(&w, m, Direction::Forward, budget)?;
        }
        let v: Vec<u16> = w.letters().iter().map(|l| l.index).collect();
        Ok(if forward { v[..need].to_vec() } else { v[v.len() - need..].to_vec() })
    }
}

fn halves(letters: &[u16], l: usize) -> (Word, Word) {
    let u = Word::from_reduced(letters[..l].iter().rev().map(|&x| Letter::neg(x)).collect());
    let v = Word::from_reduced(letters[l..].iter().map(|&x| Letter::pos(x)).collect());
    (u, v)
}

/// Closure of the 2-factors of letter images under substitution.
fn two_factors_of(img: &[Vec<u16>]) -> BTreeSet<(u16, u16)> {
    let mut set = BTreeSet::new();
    for w in img {
        for p in w.windows(2) {
            set.insert((p[0], p[1]));
        }
    }
    let n = img.len();
    for _ in 0..n * n + 2 {
        let mut next = set.clone();
        for &(x, y) in &set {
            let l = *img[x as usize].last().unwrap();
            let f = img[y as usize][0];
            next.insert((l, f));
        }
        if next.len() == set.len() {
            break;
        }
        set = next;
    }
    set
}

impl fmt::Display for DevClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DevClass::Generic => "generic",
            DevClass::DMin => "D_min",
            DevClass::DMax => "D_max",
            DevClass::DEps => "D_eps",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = "letters: a b c\nmap a = b a\nmap b = b a b a c\nmap c = b\ninv a = c^-1 a\ninv b = c\ninv c = a^-1 a^-1 b\n";
    const FIB: &str = "letters: a b\nmap a = a b\nmap b = a\ninv a = b\ninv b = b^-1 a\n";

    fn trip(phi: &Automorphism, t: &Triplet) -> String {
        t.display(phi.names())
    }

    #[test]
    fn loops_three_letter() {
        let phi = Automorphism::parse(EX1).unwrap();
        let pss = Pss::new(&phi);
        let got: Vec<String> = pss.loops(1, 1000).unwrap().iter().map(|t| trip(&phi, t)).collect();
        assert_eq!(got, vec!["(b, a, e)", "(e, b, abac)", "(ba, b, ac)"]);
    }

    #[test]
    fn loops_fibonacci() {
        let phi = Automorphism::parse(FIB).unwrap();
        let pss = Pss::new(&phi);
        let got: Vec<String> = pss.loops(1, 1000).unwrap().iter().map(|t| trip(&phi, t)).collect();
        assert_eq!(got, vec!["(e, a, b)"]);
    }

    /// Scans a long word for its 2-factors.
    fn scan_factors(phi: &Automorphism, depth: u32) -> BTreeSet<(u16, u16)> {
        let mut set = BTreeSet::new();
        for a in 0..phi.rank() {
            let w = phi.apply(&Word::letter(Letter::pos(a as u16)), depth, Direction::Forward, 1 << 20).unwrap();
            for p in w.letters().windows(2) {
                set.insert((p[0].index, p[1].index));
            }
        }
        set
    }

    #[test]
    fn two_factor_examples() {
        let phi = Automorphism::parse(EX1).unwrap();
        let pss = Pss::new(&phi);
        for pair in [(1, 0), (0, 1), (0, 2), (2, 1)] {
            assert!(pss.two_factors().contains(&pair));
        }
        assert_eq!(pss.two_factors(), &scan_factors(&phi, 6));
        let fib = Automorphism::parse(FIB).unwrap();
        let pf = Pss::new(&fib);
        let want: BTreeSet<(u16, u16)> = [(0, 1), (0, 0), (1, 0)].into_iter().collect();
        assert_eq!(pf.two_factors(), &want);
        assert_eq!(pf.two_factors(), &scan_factors(&fib, 12));
    }

    #[test]
    fn seeds() {
        let phi = Automorphism::parse(EX1).unwrap();
        let pss = Pss::new(&phi);
        assert_eq!(pss.periodic_seeds(2), vec![(0, 1), (1, 1), (2, 1)]);
        let fib = Automorphism::parse(FIB).unwrap();
        assert!(Pss::new(&fib).periodic_seeds(1).is_empty());
    }

    #[test]
    fn desubstitute_examples() {
        let phi = Automorphism::parse(EX1).unwrap();
        let pss = Pss::new(&phi);
        let t = Triplet { level: 2, parent: 0, p: phi.word("b a b a c b").unwrap(), a: 0, s: Word::empty() };
        let steps = pss.desubstitute(&t);
        let shown: Vec<String> = steps.iter().map(|&s| pss.step_display(s)).collect();
        assert_eq!(shown, vec!["(b, a, e)", "(b, a, e)"]);
        assert_eq!(pss.recompose(&steps, 1000).unwrap(), t);
        for l in pss.loops(1, 100).unwrap() {
            let st = pss.desubstitute(&l);
            assert_eq!(st.len(), 1);
            assert_eq!(pss.recompose(&st, 100).unwrap(), l);
        }
    }

    #[test]
    fn expand_examples() {
        let phi = Automorphism::parse(EX1).unwrap();
        let pss = Pss::new(&phi);
        let anchor = Triplet { level: 1, parent: 1, p: Word::empty(), a: 1, s: phi.word("a b a c").unwrap() };
        let pt = SymbolicPoint { anchor, shift: 0, seed: Some(0) };
        let (_, v) = pss.expand_point(&pt, 5, 1000).unwrap();
        assert_eq!(phi.fmt_compact(&v), "babac");
        let key = pss.key_of(&pt).unwrap();
        assert_eq!(pss.expand_key(&key, 5).unwrap(), pss.expand_point(&pt, 5, 1000).unwrap());
    }

    #[test]
    fn first_letters_example() {
        let phi = Automorphism::parse(EX1).unwrap();
        let pss = Pss::new(&phi);
        let anchor = Triplet {
            level: 2,
            parent: 0,
            p: phi.word("b").unwrap(),
            a: 0,
            s: phi.word("b a c b a").unwrap(),
        };
        let key = pss.key_of(&SymbolicPoint { anchor, shift: 0, seed: None }).unwrap();
        assert_eq!(pss.first_letters(&key).unwrap(), (1, 0));
    }

    #[test]
    fn six_letter_prefix() {
        let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/six_letter.aut")).unwrap();
        let phi = Automorphism::parse(&text).unwrap();
        let pss = Pss::new(&phi);
        let key = PointKey::Periodic { c: 0, b: 0, offset: 0 };
        let (u, _) = pss.expand_key(&key, 3).unwrap();
        let a = phi.word("a").unwrap();
        let long = phi.apply(&a, 12, Direction::Forward, 1 << 20).unwrap().inverse();
        assert_eq!(u, long.slice(0, 3));
    }

    #[test]
    fn shift_round_trip_and_backward_example() {
        let phi = Automorphism::parse(EX1).unwrap();
        let pss = Pss::new(&phi);
        let anchor = Triplet {
            level: 2,
            parent: 1,
            p: phi.word("b a b a c").unwrap(),
            a: 1,
            s: phi.word("a b a b a c b a b").unwrap(),
        };
        let pt = SymbolicPoint { anchor: anchor.clone(), shift: -1, seed: None };
        let key = pss.key_of(&pt).unwrap();
        let fwd = pss.shift_key(&key, 1).unwrap();
        let base = pss.key_of(&SymbolicPoint { anchor, shift: 0, seed: None }).unwrap();
        assert_eq!(fwd, base);
        for m in [-7i128, -1, 1, 3, 40] {
            let s = pss.shift_key(&base, m).unwrap();
            assert_eq!(pss.shift_key(&s, -m).unwrap(), base);
        }
    }

    #[test]
    fn lift_matches_periodic_fixedness() {
        let phi = Automorphism::parse(EX1).unwrap();
        let pss = Pss::new(&phi);
        for (c, b) in pss.periodic_seeds(2) {
            let key = PointKey::Periodic { c: c as u16, b: b as u16, offset: 0 };
            assert!(pss.is_fixed(&key, &Word::empty(), 2, 1).unwrap());
        }
    }
}
