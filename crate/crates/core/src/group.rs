//! Enumeration and subgroup structure of `G = Sp(g, F_2)`.
//!
//! The group is enumerated by breadth-first closure of the standard
//! generators, with elements keyed by their `4g^2`-bit encoding (one `u64`
//! for `g <= 4`). The enumeration is the ground truth for the group order;
//! the classical order formula `2^(g^2) prod_(i=1..g) (4^i - 1)` serves as a
//! cross-check oracle, and any disagreement is reported as a hard error
//! rather than silently preferring either side.

use crate::chars::{CharTable, Characteristic, Parity};
use crate::error::{Error, Result};
use crate::symplectic::{GeneratorSet, SymplecticF2};
use std::collections::{HashMap, HashSet, VecDeque};
use std::io::{Read, Write};

/// Largest genus for which full enumeration is attempted.
pub const MAX_ENUM_GENUS: usize = 3;

/// The classical order of `Sp(g, F_2)`.
pub fn expected_order(g: usize) -> u64 {
    let mut n = 1u64 << (g * g);
    for i in 1..=g {
        n *= (1u64 << (2 * i)) - 1;
    }
    n
}

/// The full group as a sorted list of encoded elements, optionally with a
/// generator word per element (stored as compact BFS parent links).
pub struct GroupEnumeration {
    g: usize,
    codes: Vec<u64>,
    /// For each element (in `codes` order): predecessor position and the
    /// generator multiplied on the right, or `None` for the identity.
    words: Option<Vec<Option<(u32, u8)>>>,
}

impl GroupEnumeration {
    /// BFS closure of the generators. Guarded to `g <= 3`; the genus-4 group
    /// has ~1.4e10 elements and is out of desk range.
    pub fn enumerate(g: usize) -> Result<Self> {
        Self::enumerate_inner(g, false)
    }

    /// Like [`GroupEnumeration::enumerate`] but also records one generator
    /// word per element.
    pub fn enumerate_with_words(g: usize) -> Result<Self> {
        Self::enumerate_inner(g, true)
    }

    fn enumerate_inner(g: usize, track_words: bool) -> Result<Self> {
        if g == 0 || g > MAX_ENUM_GENUS {
            return Err(Error::GenusOutOfRange {
                what: "group enumeration",
                got: g,
                max: MAX_ENUM_GENUS,
            });
        }
        let gens: Vec<SymplecticF2> = GeneratorSet::new(g).elements().cloned().collect();
        let id = SymplecticF2::identity(g);
        // parent map keyed by encoding: (predecessor code, generator index)
        let mut parents: HashMap<u64, Option<(u64, u8)>> = HashMap::new();
        parents.insert(id.encode(), None);
        let mut frontier: VecDeque<SymplecticF2> = VecDeque::new();
        frontier.push_back(id);
        while let Some(x) = frontier.pop_front() {
            let xc = x.encode();
            for (k, h) in gens.iter().enumerate() {
                let y = x.mul(h).expect("same genus");
                if let std::collections::hash_map::Entry::Vacant(e) = parents.entry(y.encode()) {
                    e.insert(Some((xc, k as u8)));
                    frontier.push_back(y);
                }
            }
        }
        let mut codes: Vec<u64> = parents.keys().copied().collect();
        codes.sort_unstable();
        let words = if track_words {
            let position: HashMap<u64, u32> = codes
                .iter()
                .enumerate()
                .map(|(i, &c)| (c, i as u32))
                .collect();
            Some(
                codes
                    .iter()
                    .map(|c| parents[c].map(|(prev, k)| (position[&prev], k)))
                    .collect(),
            )
        } else {
            None
        };
        let out = GroupEnumeration { g, codes, words };
        let expected = expected_order(g);
        if out.order() as u64 != expected {
            return Err(Error::SpectrumFalsified(format!(
                "BFS closure found {} elements, order formula gives {}",
                out.order(),
                expected
            )));
        }
        Ok(out)
    }

    /// Generator indices whose left-to-right product is the element at
    /// `index`, when words were tracked.
    pub fn word_for(&self, index: usize) -> Option<Vec<usize>> {
        let words = self.words.as_ref()?;
        let mut out = Vec::new();
        let mut at = index;
        loop {
            match words[at] {
                None => break,
                Some((prev, k)) => {
                    out.push(k as usize);
                    at = prev as usize;
                }
            }
        }
        out.reverse();
        Some(out)
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn order(&self) -> usize {
        self.codes.len()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn contains(&self, sigma: &SymplecticF2) -> bool {
        self.codes.binary_search(&sigma.encode()).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = SymplecticF2> + '_ {
        self.codes.iter().map(|&c| SymplecticF2::decode(self.g, c))
    }

    /// Binary dump: `u32` genus, `u64` element count, then one record of
    /// `ceil(4g^2 / 8)` bytes per element (encoding bits, least significant
    /// byte first), in sorted encoding order.
    pub fn write_dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(&(self.g as u32).to_le_bytes())?;
        w.write_all(&(self.codes.len() as u64).to_le_bytes())?;
        let rec = record_len(self.g);
        for &c in &self.codes {
            w.write_all(&c.to_le_bytes()[..rec])?;
        }
        Ok(())
    }

    pub fn read_dump<R: Read>(mut r: R) -> std::io::Result<Self> {
        let mut four = [0u8; 4];
        r.read_exact(&mut four)?;
        let g = u32::from_le_bytes(four) as usize;
        let mut eight = [0u8; 8];
        r.read_exact(&mut eight)?;
        let count = u64::from_le_bytes(eight) as usize;
        let rec = record_len(g);
        let mut codes = Vec::with_capacity(count);
        for _ in 0..count {
            let mut buf = [0u8; 8];
            r.read_exact(&mut buf[..rec])?;
            codes.push(u64::from_le_bytes(buf));
        }
        Ok(GroupEnumeration { g, codes, words: None })
    }
}

fn record_len(g: usize) -> usize {
    (4 * g * g + 7) / 8
}

/// The stabilizer `H(m)` of a characteristic inside an enumeration.
pub struct Stabilizer {
    base: Characteristic,
    codes: Vec<u64>,
}

impl Stabilizer {
    pub fn compute(base: &Characteristic, group: &GroupEnumeration) -> Result<Self> {
        if base.genus() != group.genus() {
            return Err(Error::GenusMismatch(base.genus(), group.genus()));
        }
        let w = base.word();
        let codes = group
            .codes
            .iter()
            .copied()
            .filter(|&c| {
                SymplecticF2::decode(group.g, c).action().apply(w) == w
            })
            .collect();
        Ok(Stabilizer { base: *base, codes })
    }

    pub fn base(&self) -> &Characteristic {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.codes.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = SymplecticF2> + '_ {
        self.codes
            .iter()
            .map(move |&c| SymplecticF2::decode(self.base.genus(), c))
    }

    pub fn contains(&self, sigma: &SymplecticF2) -> bool {
        self.codes.binary_search(&sigma.encode()).is_ok()
    }
}

/// Finds `sigma` with `sigma{m} = target` by breadth-first search in the
/// orbit graph (vertices: characteristics of one parity, edges: generators).
/// Works for every genus the orbit fits in memory, independently of `|G|`.
pub fn transporter(m: &Characteristic, target: &Characteristic) -> Result<SymplecticF2> {
    if m.genus() != target.genus() {
        return Err(Error::GenusMismatch(m.genus(), target.genus()));
    }
    if m.parity() != target.parity() {
        return Err(Error::ParityMismatch {
            from: m.to_string(),
            to: target.to_string(),
        });
    }
    let g = m.genus();
    if *m == *target {
        return Ok(SymplecticF2::identity(g));
    }
    let gens: Vec<SymplecticF2> = GeneratorSet::new(g).elements().cloned().collect();
    let actions: Vec<_> = gens.iter().map(|s| s.action()).collect();
    // parent[w] = (previous word, generator index)
    let mut parent: HashMap<u64, (u64, usize)> = HashMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(m.word());
    parent.insert(m.word(), (m.word(), usize::MAX));
    while let Some(w) = queue.pop_front() {
        if w == target.word() {
            break;
        }
        for (k, act) in actions.iter().enumerate() {
            let v = act.apply(w);
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(v) {
                e.insert((w, k));
                queue.push_back(v);
            }
        }
    }
    if !parent.contains_key(&target.word()) {
        // cannot happen: the action is transitive on each parity sector
        return Err(Error::SpectrumFalsified(format!(
            "orbit of {m} does not reach {target}"
        )));
    }
    // reconstruct the word target <- ... <- m and compose generators
    let mut path = Vec::new();
    let mut w = target.word();
    while w != m.word() {
        let (prev, k) = parent[&w];
        path.push(k);
        w = prev;
    }
    let mut sigma = SymplecticF2::identity(g);
    for &k in &path {
        sigma = sigma.mul(&gens[k])?;
    }
    debug_assert_eq!(sigma.act(m)?, *target);
    Ok(sigma)
}

/// Number of `H(base) \ G / H(base)` double cosets, computed as the number
/// of orbits of `H(base)` on the characteristics of `parity(base)` (the coset
/// space `G / H(base)` in disguise).
pub fn double_coset_count(group: &GroupEnumeration, base: &Characteristic) -> Result<usize> {
    if base.genus() != group.genus() {
        return Err(Error::GenusMismatch(base.genus(), group.genus()));
    }
    let g = group.genus();
    let table = CharTable::new(g);
    let stab = Stabilizer::compute(base, group)?;
    let actions: Vec<_> = stab
        .codes
        .iter()
        .map(|&c| SymplecticF2::decode(g, c).action())
        .collect();
    let sector = table.sector(base.parity());
    let mut seen: HashSet<u64> = HashSet::new();
    let mut orbits = 0;
    for m in sector {
        if seen.contains(&m.word()) {
            continue;
        }
        orbits += 1;
        let mut frontier = vec![m.word()];
        seen.insert(m.word());
        while let Some(w) = frontier.pop() {
            for act in &actions {
                let v = act.apply(w);
                if seen.insert(v) {
                    frontier.push(v);
                }
            }
        }
    }
    Ok(orbits)
}

/// Orbit of a seed under the generator actions; `apply` maps a state by one
/// generator.
fn orbit_size<T: std::hash::Hash + Eq + Clone>(
    seed: T,
    apply: impl Fn(&T, usize) -> T,
    n_gens: usize,
) -> usize {
    let mut seen: HashSet<T> = HashSet::new();
    seen.insert(seed.clone());
    let mut frontier = vec![seed];
    while let Some(x) = frontier.pop() {
        for k in 0..n_gens {
            let y = apply(&x, k);
            if !seen.contains(&y) {
                seen.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    seen.len()
}

/// Orbit sizes certifying transitivity and double transitivity of the affine
/// action, computed in the orbit graphs of the generators (no group
/// enumeration needed).
#[derive(Clone, Debug, serde::Serialize)]
pub struct TransitivityReport {
    pub g: usize,
    pub even_orbit: usize,
    pub even_count: usize,
    pub odd_orbit: usize,
    pub odd_count: usize,
    pub even_pair_orbit: usize,
    pub even_pair_count: usize,
    pub odd_pair_orbit: usize,
    pub odd_pair_count: usize,
    pub mixed_pair_orbit: usize,
    pub mixed_pair_count: usize,
    pub transitive: bool,
}

pub fn transitivity_report(g: usize) -> Result<TransitivityReport> {
    if g == 0 || g > 4 {
        return Err(Error::GenusOutOfRange {
            what: "transitivity orbits",
            got: g,
            max: 4,
        });
    }
    let table = CharTable::new(g);
    let gens: Vec<_> = GeneratorSet::new(g).elements().cloned().collect();
    let actions: Vec<_> = gens.iter().map(|s| s.action()).collect();
    let even = table.sector(Parity::Even);
    let odd = table.sector(Parity::Odd);

    let single = |seed: u64| orbit_size(seed, |w, k| actions[k].apply(*w), actions.len());
    let pair = |seed: (u64, u64)| {
        orbit_size(
            seed,
            |&(v, w), k| (actions[k].apply(v), actions[k].apply(w)),
            actions.len(),
        )
    };

    let even_orbit = single(even[0].word());
    let odd_orbit = single(odd[0].word());
    let even_pair_orbit = if even.len() >= 2 {
        pair((even[0].word(), even[1].word()))
    } else {
        0
    };
    let odd_pair_orbit = if odd.len() >= 2 {
        pair((odd[0].word(), odd[1].word()))
    } else {
        0
    };
    let mixed_pair_orbit = pair((even[0].word(), odd[0].word()));

    let even_count = even.len();
    let odd_count = odd.len();
    let even_pair_count = even_count * (even_count.saturating_sub(1));
    let odd_pair_count = odd_count * (odd_count.saturating_sub(1));
    let mixed_pair_count = even_count * odd_count;
    let transitive = even_orbit == even_count
        && odd_orbit == odd_count
        && even_pair_orbit == even_pair_count
        && odd_pair_orbit == odd_pair_count
        && mixed_pair_orbit == mixed_pair_count;
    Ok(TransitivityReport {
        g,
        even_orbit,
        even_count,
        odd_orbit,
        odd_count,
        even_pair_orbit,
        even_pair_count,
        odd_pair_orbit,
        odd_pair_count,
        mixed_pair_orbit,
        mixed_pair_count,
        transitive,
    })
}

/// A pseudorandom element given as a word in the generators.
pub fn random_word<R: rand::Rng>(g: usize, len: usize, rng: &mut R) -> SymplecticF2 {
    let gens: Vec<_> = GeneratorSet::new(g).elements().cloned().collect();
    let mut acc = SymplecticF2::identity(g);
    for _ in 0..len {
        let k = rng.gen_range(0..gens.len());
        acc = acc.mul(&gens[k]).expect("same genus");
    }
    acc
}
