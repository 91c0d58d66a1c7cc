//! Discovery, merging and fixing powers of singularities.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;

use crate::automorphism::Automorphism;
use crate::error::{Error, Result};
use crate::gamma::{gamma_bound, Match, Matcher, Side};
use crate::pss::{PointKey, Pss, SymbolicPoint, Triplet};
use crate::words::Word;

/// Label `(w, k)` of the automorphism `i_w∘φ^k` fixing a singularity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Label {
    pub w: Word,
    pub k: u32,
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.k, self.w.len(), &self.w).cmp(&(other.k, other.w.len(), &other.w))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub max_k: Option<u32>,
    pub early_exit: bool,
    pub budget: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_k: None, early_exit: false, budget: crate::DEFAULT_BUDGET }
    }
}

/// A point of a singularity with the witness it was found from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointEntry {
    pub witness: SymbolicPoint,
    /// Index of the letter `x` with `U₀ = x⁻¹`.
    pub u0: usize,
    pub v0: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSingularity {
    pub label: Label,
    pub points: BTreeMap<PointKey, PointEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Singularity {
    pub id: usize,
    pub label: Label,
    pub points: Vec<PointKey>,
    pub entries: Vec<PointEntry>,
    /// Per point, the least `h` with the point fixed by `(i_w∘φ^k)^h`.
    pub point_powers: Vec<u64>,
    pub fixing_power: u64,
    pub phi_power: u64,
}

impl Singularity {
    pub fn is_phi_fixed(&self) -> bool {
        self.label.w.is_empty()
    }

    pub fn u_classes(&self) -> BTreeSet<usize> {
        self.entries.iter().map(|e| e.u0).collect()
    }

    pub fn v_classes(&self) -> BTreeSet<usize> {
        self.entries.iter().map(|e| e.v0).collect()
    }

    /// `#(H_Ω/∼)`.
    pub fn h_classes(&self) -> usize {
        self.u_classes().len() + self.v_classes().len()
    }

    /// `#(Ω/≈)`.
    pub fn approx_classes(&self) -> usize {
        self.entries.iter().map(|e| (e.u0, e.v0)).collect::<BTreeSet<_>>().len()
    }
}

#[derive(Clone, Debug)]
pub struct Sweep {
    pub singularities: Vec<Singularity>,
    pub complete: bool,
    pub certified: bool,
    pub k_reached: u32,
    pub max_k: u32,
    pub truncation: Option<Error>,
    pub matches: usize,
    pub cutoff_exceeded: usize,
    pub work: usize,
}

/// Doubled running index from the second formula, on raw singularities.
fn running_index2(raw: &[RawSingularity]) -> Result<i64> {
    let mut total = 0i64;
    for s in raw {
        if s.label.w.is_empty() {
            let mut cs = BTreeSet::new();
            let mut bs = BTreeSet::new();
            for k in s.points.keys() {
                match k {
                    PointKey::Periodic { c, b, offset: 0 } => {
                        cs.insert(*c);
                        bs.insert(*b);
                    }
                    _ => return Err(Error::Invariant("non-periodic point fixed by a pure power".into())),
                }
            }
            total += (cs.len() + bs.len()) as i64 - 2;
        } else {
            let cls: BTreeSet<_> = s.points.values().map(|e| (e.u0, e.v0)).collect();
            total += cls.len() as i64 - 1;
        }
    }
    Ok(total)
}

pub struct Finder<'p, 'a> {
    pss: &'p Pss<'a>,
    opts: Options,
    raw: Vec<RawSingularity>,
    work: usize,
    matches: usize,
    cutoff_exceeded: usize,
}

impl<'p, 'a> Finder<'p, 'a> {
    pub fn new(pss: &'p Pss<'a>, opts: Options) -> Self {
        Finder { pss, opts, raw: Vec::new(), work: 0, matches: 0, cutoff_exceeded: 0 }
    }

    fn phi(&self) -> &Automorphism {
        self.pss.phi()
    }

    fn charge(&mut self, n: usize) -> Result<()> {
        self.work += n;
        if self.work > self.opts.budget {
            Err(Error::BudgetExceeded { limit: self.opts.budget })
        } else {
            Ok(())
        }
    }

    pub fn raw(&self) -> &[RawSingularity] {
        &self.raw
    }

    /// Processes every pair of loops at level `k`.
    pub fn level(&mut self, k: u32) -> Result<()> {
        let budget = self.opts.budget;
        let loops = self.pss.loops(k, budget)?;
        self.charge(loops.iter().map(|t| t.p.len() + t.s.len() + 1).sum())?;
        for side in [Side::Minus, Side::Plus] {
            let g = gamma_bound(self.phi(), k, side, budget)?.bound;
            let remaining = budget.saturating_sub(self.work);
            let mut matcher = Matcher::new(self.phi(), k, side, g, remaining)?;
            let res = self.level_side(k, side, &loops, &mut matcher);
            self.cutoff_exceeded += matcher.cutoff_exceeded;
            self.work += matcher.work();
            res?;
            if self.work > budget {
                return Err(Error::BudgetExceeded { limit: budget });
            }
        }
        Ok(())
    }

    fn level_side(&mut self, k: u32, side: Side, loops: &[Triplet], matcher: &mut Matcher) -> Result<()> {
        let part = |t: &Triplet| match side {
            Side::Minus => t.p.clone(),
            Side::Plus => t.s.clone(),
        };
        let mut distinct: Vec<Word> = loops.iter().map(part).collect();
        distinct.sort();
        distinct.dedup();
        let ids: Vec<usize> = loops.iter().map(|t| distinct.binary_search(&part(t)).unwrap()).collect();
        let found = matcher.match_all(&distinct)?;
        for (ia, a) in loops.iter().enumerate() {
            for (ib, b) in loops.iter().enumerate().skip(ia + 1) {
                let (p, q) = (ids[ia], ids[ib]);
                let m = if p == q {
                    matcher.match_words(&distinct[p], &distinct[p])?.unwrap()
                } else {
                    let Some(m) = found.get(&(p.min(q), p.max(q))) else { continue };
                    if p < q {
                        m.clone()
                    } else {
                        Match { i: m.j, j: m.i, w: m.w.clone() }
                    }
                };
                self.matches += 1;
                let (sa, sb) = match side {
                    Side::Minus => (-(m.i as i128), -(m.j as i128)),
                    Side::Plus => (m.i as i128 + 1, m.j as i128 + 1),
                };
                let mut raw = RawSingularity { label: Label { w: m.w, k }, points: BTreeMap::new() };
                for (t, sh) in [(a, sa), (b, sb)] {
                    self.instantiate(t, sh, &mut raw)?;
                }
                let firsts: BTreeSet<_> = raw.points.values().map(|e| (e.u0, e.v0)).collect();
                if raw.points.len() < 2 || firsts.len() < 2 {
                    log::warn!("match at level {k} gives fewer than two distinct points");
                    continue;
                }
                self.merge(raw)?;
            }
        }
        Ok(())
    }

    fn instantiate(&self, t: &Triplet, shift: i128, raw: &mut RawSingularity) -> Result<()> {
        let seeds: Vec<Option<usize>> = if t.p.is_empty() || t.s.is_empty() {
            self.pss.seeds_for(t).into_iter().map(Some).collect()
        } else {
            vec![None]
        };
        for seed in seeds {
            let witness = SymbolicPoint { anchor: t.clone(), shift, seed };
            let key = self.pss.key_of(&witness)?;
            let (u0, v0) = self.pss.first_letters(&key)?;
            let entry = PointEntry { witness, u0, v0 };
            match raw.points.get_mut(&key) {
                Some(e) if e.witness <= entry.witness => {}
                _ => {
                    raw.points.insert(key, entry);
                }
            }
        }
        Ok(())
    }

    /// Whether some powers of the two labelled automorphisms coincide.
    pub fn labels_compatible(&self, l1: &Label, l2: &Label) -> bool {
        labels_compatible(self.pss, l1, l2, self.opts.budget)
    }

    fn should_merge(&self, x: &RawSingularity, y: &RawSingularity) -> bool {
        if x.points.keys().any(|k| y.points.contains_key(k)) {
            return true;
        }
        if !self.labels_compatible(&x.label, &y.label) {
            return false;
        }
        if x.label.w.is_empty() {
            return true;
        }
        let all = x.points.values().chain(y.points.values());
        if x.label.w.is_pure_positive() {
            all.map(|e| e.u0).collect::<BTreeSet<_>>().len() == 1
        } else {
            all.map(|e| e.v0).collect::<BTreeSet<_>>().len() == 1
        }
    }

    /// Adds a singularity, merging it with every registered one describing the same set.
    pub fn merge(&mut self, mut new: RawSingularity) -> Result<()> {
        while let Some(pos) = self.raw.iter().position(|r| self.should_merge(r, &new)) {
            let old = self.raw.swap_remove(pos);
            if old.label < new.label {
                new.label = old.label;
            }
            for (k, e) in old.points {
                match new.points.get(&k) {
                    Some(cur) if cur.witness <= e.witness => {}
                    _ => {
                        new.points.insert(k, e);
                    }
                }
            }
        }
        self.raw.push(new);
        Ok(())
    }

    pub fn index2(&self) -> Result<i64> {
        running_index2(&self.raw)
    }

    /// Runs the sweep over levels and finalizes the singularities.
    pub fn run(mut self) -> Result<Sweep> {
        let n = self.phi().rank() as u32;
        let full = 4 * n - 4;
        let max_k = self.opts.max_k.unwrap_or(full).max(1);
        let target = 2 * (n as i64 - 1);
        let mut k_reached = 0;
        let mut truncation = None;
        let mut certified = false;
        for k in 1..=max_k {
            match self.level(k) {
                Ok(()) => {}
                Err(e @ Error::BudgetExceeded { .. }) => {
                    log::info!("sweep truncated at level {k}: {e}");
                    truncation = Some(e);
                    break;
                }
                Err(e) => return Err(e),
            }
            k_reached = k;
            let idx = self.index2()?;
            log::debug!("level {k}: {} singularities, doubled index {idx}", self.raw.len());
            if idx == target {
                certified = true;
                if self.opts.early_exit {
                    break;
                }
            }
        }
        let complete = certified || (truncation.is_none() && k_reached >= full);
        let singularities = finalize(self.pss, std::mem::take(&mut self.raw))?;
        Ok(Sweep {
            singularities,
            complete,
            certified,
            k_reached,
            max_k: full,
            truncation,
            matches: self.matches,
            cutoff_exceeded: self.cutoff_exceeded,
            work: self.work,
        })
    }
}

fn conj_len(pss: &Pss, w: &Word, k: u32, h: u64) -> u128 {
    (0..h).fold(0u128, |acc, t| acc.saturating_add(pss.word_len((k as u64 * t) as usize, w)))
}

/// Label compatibility: equal conjugators at the least common power.
pub fn labels_compatible(pss: &Pss, l1: &Label, l2: &Label, budget: usize) -> bool {
    if l1.w.is_empty() || l2.w.is_empty() {
        return l1.w.is_empty() && l2.w.is_empty();
    }
    if l1.w.is_pure_positive() != l2.w.is_pure_positive() {
        return false;
    }
    let l = l1.k.lcm(&l2.k);
    let (h1, h2) = ((l / l1.k) as u64, (l / l2.k) as u64);
    let n1 = conj_len(pss, &l1.w, l1.k, h1);
    if n1 != conj_len(pss, &l2.w, l2.k, h2) {
        return false;
    }
    let phi = pss.phi();
    if n1 <= budget as u128 {
        if let (Ok(a), Ok(b)) = (
            phi.conjugator_power(&l1.w, l1.k, h1 as u32, budget),
            phi.conjugator_power(&l2.w, l2.k, h2 as u32, budget),
        ) {
            return a == b;
        }
    }
    log::warn!("conjugator comparison over budget, comparing end letters only");
    let end = |w: &Word, k: u32, h: u64| {
        let top = phi.apply(w, k * (h as u32 - 1), crate::Direction::Forward, budget).ok();
        (top.and_then(|t| t.first()), w.last())
    };
    end(&l1.w, l1.k, h1) == end(&l2.w, l2.k, h2)
}

/// Search cap for per-point fixing powers.
pub fn power_cap(pss: &Pss) -> u64 {
    let n = pss.phi().rank() as u64;
    let l = pss
        .first_cycle()
        .iter()
        .chain(pss.last_cycle())
        .flatten()
        .fold(1u64, |acc, &c| acc.lcm(&c));
    l.saturating_mul(4 * n - 4).max(1)
}

/// Sorts, numbers and computes fixing powers.
pub fn finalize(pss: &Pss, raw: Vec<RawSingularity>) -> Result<Vec<Singularity>> {
    let mut raw = raw;
    raw.sort_by(|a, b| (&a.label, a.points.keys().next()).cmp(&(&b.label, b.points.keys().next())));
    let cap = power_cap(pss);
    let mut out = Vec::with_capacity(raw.len());
    for (id, r) in raw.into_iter().enumerate() {
        let mut point_powers = Vec::new();
        for key in r.points.keys() {
            let h = pss.fixing_h(key, &r.label.w, r.label.k, cap).map_err(|e| {
                Error::Invariant(format!("point {} of singularity {id} not fixed: {e}", pss.key_display(key)))
            })?;
            point_powers.push(h);
        }
        let fixing_power = point_powers.iter().fold(1u64, |a, &h| a.lcm(&h));
        let (points, entries) = r.points.into_iter().unzip();
        out.push(Singularity {
            id,
            phi_power: fixing_power * r.label.k as u64,
            label: r.label,
            points,
            entries,
            point_powers,
            fixing_power,
        });
    }
    Ok(out)
}

/// Full discovery sweep.
pub fn find_all(phi: &Automorphism, opts: &Options) -> Result<Sweep> {
    let pss = Pss::new(phi);
    Finder::new(&pss, opts.clone()).run()
}
