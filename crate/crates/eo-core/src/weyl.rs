//! Weyl groups of type B_m, D_m (as permutations of {1..N} commuting with
//! i -> N+1-i) and A_{g-1} (the symmetric group S_g).
//!
//! Elements are stored in one-line notation, `perm[i-1] = σ(i)`. The product
//! `a * b` is composition `a ∘ b`, so right multiplication by a simple
//! reflection permutes positions.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    D,
}

/// A Weyl group. For B and D, `rank` is m; for A it is the degree g of S_g.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylGroupSpec {
    family: Family,
    rank: usize,
    degree: usize,
}

/// Sequence of simple-reflection indices, 1-based.
pub type Word = Vec<usize>;

impl WeylGroupSpec {
    pub fn b(m: usize) -> Result<Self> {
        if m == 0 || 2 * m + 1 > u8::MAX as usize {
            return invalid(format!("B_{m} is not supported"));
        }
        Ok(WeylGroupSpec { family: Family::B, rank: m, degree: 2 * m + 1 })
    }

    pub fn d(m: usize) -> Result<Self> {
        if m < 2 || 2 * m > u8::MAX as usize {
            return invalid(format!("D_{m} is not supported"));
        }
        Ok(WeylGroupSpec { family: Family::D, rank: m, degree: 2 * m })
    }

    /// The symmetric group S_g, of type A_{g-1}.
    pub fn a(g: usize) -> Result<Self> {
        if g == 0 || g > u8::MAX as usize {
            return invalid(format!("S_{g} is not supported"));
        }
        Ok(WeylGroupSpec { family: Family::A, rank: g, degree: g })
    }

    /// Weyl group of SO(n,2): B_{(n+1)/2} for n odd, D_{n/2+1} for n even.
    pub fn orthogonal(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("n must be at least 1");
        }
        if n % 2 == 1 {
            Self::b(n.div_ceil(2))
        } else {
            Self::d(n / 2 + 1)
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The n with W = W(SO(n,2)), for B and D.
    pub fn orthogonal_n(&self) -> Option<usize> {
        match self.family {
            Family::A => None,
            _ => Some(self.degree - 2),
        }
    }

    pub fn num_simple(&self) -> usize {
        match self.family {
            Family::A => self.rank - 1,
            _ => self.rank,
        }
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement { group: *self, perm: (1..=self.degree as u8).collect() }
    }

    /// σ(i) + σ(N+1-i) = N+1 for B/D, plus the parity condition for D.
    fn admits(&self, perm: &[u8]) -> bool {
        let n = self.degree;
        if perm.len() != n {
            return false;
        }
        let mut seen = vec![false; n + 1];
        for &v in perm {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        if self.family == Family::A {
            return true;
        }
        if (0..n).any(|i| perm[i] as usize + perm[n - 1 - i] as usize != n + 1) {
            return false;
        }
        if self.family == Family::D {
            let m = self.rank;
            let big = perm[..m].iter().filter(|&&v| v as usize > m).count();
            return big % 2 == 0;
        }
        true
    }

    pub fn element(&self, perm: Vec<u8>) -> Result<WeylElement> {
        if !self.admits(&perm) {
            return invalid(format!("{perm:?} is not an element of {self}"));
        }
        Ok(WeylElement { group: *self, perm })
    }

    /// Element from a product of transpositions (1-based).
    pub fn from_transpositions(&self, ts: &[(usize, usize)]) -> Result<WeylElement> {
        let mut perm: Vec<u8> = (1..=self.degree as u8).collect();
        for &(a, b) in ts {
            if a == 0 || b == 0 || a > self.degree || b > self.degree {
                return invalid(format!("transposition ({a},{b}) out of range"));
            }
            perm.swap(a - 1, b - 1);
        }
        // disjoint transpositions: swapping entries of the identity is the same as composing
        self.element(perm)
    }

    pub fn simple_reflection(&self, i: usize) -> Result<WeylElement> {
        let k = self.num_simple();
        if i == 0 || i > k {
            return Err(Error::IndexOutOfRange { index: i, max: k });
        }
        let n = self.degree;
        let m = self.rank;
        let ts: Vec<(usize, usize)> = match self.family {
            Family::A => vec![(i, i + 1)],
            _ if i < m => vec![(i, i + 1), (n - i, n + 1 - i)],
            Family::B => vec![(m, m + 2)],
            Family::D => vec![(m - 1, m + 1), (m, m + 2)],
        };
        self.from_transpositions(&ts)
    }

    pub fn simple_reflections(&self) -> Vec<WeylElement> {
        (1..=self.num_simple()).map(|i| self.simple_reflection(i).unwrap()).collect()
    }

    pub fn from_word(&self, word: &[usize]) -> Result<WeylElement> {
        let mut w = self.identity();
        for &i in word {
            w = w.compose(&self.simple_reflection(i)?);
        }
        Ok(w)
    }

    /// All elements, by breadth-first search from the identity.
    pub fn enumerate(&self) -> Vec<WeylElement> {
        let gens = self.simple_reflections();
        let id = self.identity();
        let mut seen: HashSet<Vec<u8>> = HashSet::from([id.perm.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(w) = queue.pop_front() {
            for s in &gens {
                let x = w.compose(s);
                if seen.insert(x.perm.clone()) {
                    out.push(x.clone());
                    queue.push_back(x);
                }
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        let fact = |k: usize| (1..=k).product::<usize>();
        match self.family {
            Family::A => fact(self.rank),
            Family::B => (1 << self.rank) * fact(self.rank),
            Family::D => (1 << (self.rank - 1)) * fact(self.rank),
        }
    }

    /// Generators of the Levi Weyl group W_µ: the s_i with i >= 2 fixing 1.
    /// This is {2..m} except for D_2, where s_2 moves 1 and W_µ is trivial.
    pub fn levi_gens(&self) -> Vec<usize> {
        (2..=self.num_simple())
            .filter(|&i| self.simple_reflection(i).unwrap().apply(1) == 1)
            .collect()
    }

    pub fn longest_element(&self) -> WeylElement {
        let all: Vec<usize> = (1..=self.num_simple()).collect();
        self.longest_in(&all)
    }

    /// Longest element of the parabolic subgroup generated by `gens`,
    /// found by right-multiplying by ascents until none is left.
    pub fn longest_in(&self, gens: &[usize]) -> WeylElement {
        let mut w = self.identity();
        loop {
            match gens.iter().find(|&&i| !w.is_right_descent(i)) {
                Some(&i) => w = w.compose(&self.simple_reflection(i).unwrap()),
                None => return w,
            }
        }
    }
}

impl fmt::Display for WeylGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::A => write!(f, "S_{}", self.rank),
            Family::B => write!(f, "B_{}", self.rank),
            Family::D => write!(f, "D_{}", self.rank),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    group: WeylGroupSpec,
    perm: Vec<u8>,
}

impl WeylElement {
    pub fn group(&self) -> WeylGroupSpec {
        self.group
    }

    pub fn one_line(&self) -> &[u8] {
        &self.perm
    }

    /// σ(i), 1-based.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.perm[i - 1] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// Composition without the group check. Callers guarantee a shared group.
    pub(crate) fn compose(&self, rhs: &WeylElement) -> WeylElement {
        debug_assert_eq!(self.group, rhs.group);
        let perm = rhs.perm.iter().map(|&j| self.perm[j as usize - 1]).collect();
        WeylElement { group: self.group, perm }
    }

    pub fn mul(&self, rhs: &WeylElement) -> Result<WeylElement> {
        if self.group != rhs.group {
            return Err(Error::GroupMismatch);
        }
        Ok(self.compose(rhs))
    }

    pub fn inverse(&self) -> WeylElement {
        let mut perm = vec![0u8; self.perm.len()];
        for (i, &v) in self.perm.iter().enumerate() {
            perm[v as usize - 1] = (i + 1) as u8;
        }
        WeylElement { group: self.group, perm }
    }

    /// Whether ℓ(w s_i) < ℓ(w), read off the one-line notation.
    pub fn is_right_descent(&self, i: usize) -> bool {
        let m = self.group.rank;
        let s = |k: usize| self.perm[k - 1];
        match self.group.family {
            Family::A => s(i) > s(i + 1),
            _ if i < m => s(i) > s(i + 1),
            Family::B => s(m) > s(m + 2),
            Family::D => s(m - 1) > s(m + 1),
        }
    }

    pub fn is_left_descent(&self, i: usize) -> bool {
        self.inverse().is_right_descent(i)
    }

    pub fn right_descents(&self) -> Vec<usize> {
        (1..=self.group.num_simple()).filter(|&i| self.is_right_descent(i)).collect()
    }

    /// A reduced word, by stripping right descents.
    pub fn reduced_word(&self) -> Word {
        let mut w = self.clone();
        let mut word = Vec::new();
        let k = self.group.num_simple();
        while let Some(i) = (1..=k).find(|&i| w.is_right_descent(i)) {
            w = w.compose(&self.group.simple_reflection(i).unwrap());
            word.push(i);
        }
        word.reverse();
        word
    }

    pub fn length(&self) -> usize {
        self.reduced_word().len()
    }

    /// Multiply on the right by s_i.
    pub fn times_simple(&self, i: usize) -> WeylElement {
        self.compose(&self.group.simple_reflection(i).expect("valid simple index"))
    }

    /// Bruhat order by the lifting property: if s is a right descent of b then
    /// a <= b iff min(a, as) <= bs.
    pub fn bruhat_leq(&self, other: &WeylElement) -> Result<bool> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let k = self.group.num_simple();
        loop {
            let Some(i) = (1..=k).find(|&i| b.is_right_descent(i)) else {
                return Ok(a.is_identity());
            };
            b = b.times_simple(i);
            if a.is_right_descent(i) {
                a = a.times_simple(i);
            }
        }
    }

    /// Cycle notation, fixed points omitted.
    pub fn cycles(&self) -> String {
        let n = self.perm.len();
        let mut seen = vec![false; n + 1];
        let mut out = String::new();
        for start in 1..=n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut j = self.apply(start);
            while j != start {
                cyc.push(j);
                seen[j] = true;
                j = self.apply(j);
            }
            let parts: Vec<String> = cyc.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("({})", parts.join(",")));
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.group, self.cycles())
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycles())
    }
}

pub fn simple_reflection(group: WeylGroupSpec, i: usize) -> Result<WeylElement> {
    group.simple_reflection(i)
}

pub fn length(w: &WeylElement) -> usize {
    w.length()
}

pub fn bruhat_leq(a: &WeylElement, b: &WeylElement) -> Result<bool> {
    a.bruhat_leq(b)
}

/// (w_0, w_{0,µ}): longest elements of W and of the parabolic subgroup on `levi_gens`.
pub fn longest_elements(group: WeylGroupSpec, levi_gens: &[usize]) -> Result<(WeylElement, WeylElement)> {
    if let Some(&bad) = levi_gens.iter().find(|&&i| i == 0 || i > group.num_simple()) {
        return Err(Error::IndexOutOfRange { index: bad, max: group.num_simple() });
    }
    Ok((group.longest_element(), group.longest_in(levi_gens)))
}

/// The longest element written as a product of transpositions (i, N+1-i):
/// all i <= m for B and for D with m even, and i < m for D with m odd.
pub fn longest_element_formula(group: WeylGroupSpec) -> Option<WeylElement> {
    let n = group.degree;
    let m = group.rank;
    let top = match group.family {
        Family::A => return None,
        Family::B => m,
        Family::D if m.is_multiple_of(2) => m,
        Family::D => m - 1,
    };
    let ts: Vec<(usize, usize)> = (1..=top).map(|i| (i, n + 1 - i)).collect();
    group.from_transpositions(&ts).ok()
}

/// Minimal-length representatives of W_J \ W, J = `levi_gens`, sorted by
/// (length, one-line notation).
pub fn min_coset_reps(group: WeylGroupSpec, levi_gens: &[usize]) -> Result<Vec<WeylElement>> {
    if let Some(&bad) = levi_gens.iter().find(|&&i| i == 0 || i > group.num_simple()) {
        return Err(Error::IndexOutOfRange { index: bad, max: group.num_simple() });
    }
    let mut reps: Vec<(usize, WeylElement)> = group
        .enumerate()
        .into_iter()
        .filter(|w| {
            let winv = w.inverse();
            levi_gens.iter().all(|&i| !winv.is_right_descent(i))
        })
        .map(|w| (w.length(), w))
        .collect();
    reps.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.perm.cmp(&b.1.perm)));
    Ok(reps.into_iter().map(|(_, w)| w).collect())
}

/// The labelled words w_0..w_n (and w_{m-1}^† for n even) of ^µW for SO(n,2).
pub fn closed_form_muw(n: usize) -> Result<Vec<(String, Word)>> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let mut out = Vec::new();
    if n % 2 == 1 {
        let m = n.div_ceil(2);
        for i in 0..=n {
            let word: Word = if i <= m {
                (1..=i).collect()
            } else {
                (1..=m).chain((n - i + 1..m).rev()).collect()
            };
            out.push((format!("w_{i}"), word));
        }
    } else {
        let m = n / 2 + 1;
        for i in 0..=n {
            let word: Word = if i <= m {
                (1..=i).collect()
            } else {
                (1..=m).chain((n - i + 1..=m - 2).rev()).collect()
            };
            out.push((format!("w_{i}"), word));
            if i == m - 1 {
                let dagger: Word = (1..=m - 2).chain(std::iter::once(m)).collect();
                out.push((format!("w_{}^†", m - 1), dagger));
            }
        }
    }
    Ok(out)
}

/// Name of an element of ^µW for SO(n,2) in the w_i / w_{m-1}^† notation.
pub fn mu_w_name(w: &WeylElement) -> Option<String> {
    let n = w.group.orthogonal_n()?;
    closed_form_muw(n)
        .ok()?
        .into_iter()
        .find(|(_, word)| w.group.from_word(word).map(|x| &x == w).unwrap_or(false))
        .map(|(name, _)| name)
}

/// The cycle δ_a = (1 2 ... a+1) in S_g.
pub fn delta_cycle(g: usize, a: usize) -> Result<WeylElement> {
    if a >= g {
        return invalid(format!("a = {a} must be below g = {g}"));
    }
    let group = WeylGroupSpec::a(g)?;
    let mut perm: Vec<u8> = (1..=g as u8).collect();
    for (i, slot) in perm.iter_mut().enumerate().take(a + 1) {
        *slot = if i == a { 1 } else { (i + 2) as u8 };
    }
    group.element(perm)
}

/// EO index of a unitary stratum from its Weyl label. The label must be minimal
/// in its coset ⟨s_2, ..., s_{g-1}⟩ w, i.e. w⁻¹(2) < ... < w⁻¹(g); the index
/// is w⁻¹(1) - 1.
pub fn type_a_eo_index(w: &WeylElement) -> Result<usize> {
    if w.group.family != Family::A {
        return invalid("type A element expected");
    }
    let winv = w.inverse();
    let g = w.group.rank;
    if (2..g).any(|i| winv.apply(i) > winv.apply(i + 1)) {
        return invalid(format!("{w} is not a minimal coset representative"));
    }
    Ok(winv.apply(1) - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    /// Length as distance from the identity in the Cayley graph.
    fn bfs_lengths(group: WeylGroupSpec) -> HashMap<WeylElement, usize> {
        let gens = group.simple_reflections();
        let mut dist = HashMap::from([(group.identity(), 0)]);
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(w) = queue.pop_front() {
            let d = dist[&w];
            for s in &gens {
                let x = w.compose(s);
                if !dist.contains_key(&x) {
                    dist.insert(x.clone(), d + 1);
                    queue.push_back(x);
                }
            }
        }
        dist
    }

    /// Inversions over pairs of positions not on the anti-diagonal, halved.
    fn inversion_length(w: &WeylElement) -> usize {
        let n = w.group.degree;
        let mut inv = 0;
        for i in 1..=n {
            for j in i + 1..=n {
                let skip = w.group.family != Family::A && i + j == n + 1;
                if !skip && w.apply(i) > w.apply(j) {
                    inv += 1;
                }
            }
        }
        if w.group.family == Family::A {
            inv
        } else {
            inv / 2
        }
    }

    fn small_groups() -> Vec<WeylGroupSpec> {
        let mut gs = Vec::new();
        for m in 1..=4 {
            gs.push(WeylGroupSpec::b(m).unwrap());
        }
        for m in 2..=4 {
            gs.push(WeylGroupSpec::d(m).unwrap());
        }
        for g in 1..=5 {
            gs.push(WeylGroupSpec::a(g).unwrap());
        }
        gs
    }

    #[test]
    fn simple_reflection_examples() {
        let b2 = WeylGroupSpec::b(2).unwrap();
        assert_eq!(b2.simple_reflection(2).unwrap(), b2.from_transpositions(&[(2, 4)]).unwrap());
        let d2 = WeylGroupSpec::d(2).unwrap();
        assert_eq!(
            d2.simple_reflection(2).unwrap(),
            d2.from_transpositions(&[(1, 3), (2, 4)]).unwrap()
        );
        assert!(matches!(b2.simple_reflection(3), Err(Error::IndexOutOfRange { .. })));
        for g in small_groups() {
            for s in g.simple_reflections() {
                assert!(s.compose(&s).is_identity());
            }
        }
    }

    #[test]
    fn orders_match_enumeration() {
        for g in small_groups() {
            assert_eq!(g.enumerate().len(), g.order(), "{g}");
        }
    }

    #[test]
    fn braid_relation_b2() {
        let b2 = WeylGroupSpec::b(2).unwrap();
        assert_eq!(b2.from_word(&[1, 2, 1, 2]).unwrap(), b2.from_word(&[2, 1, 2, 1]).unwrap());
        assert_ne!(b2.from_word(&[1, 2, 1]).unwrap(), b2.from_word(&[2, 1, 2]).unwrap());
    }

    #[test]
    fn lengths_agree_with_bfs_and_inversions() {
        for g in small_groups() {
            for (w, d) in bfs_lengths(g) {
                assert_eq!(w.length(), d, "{w:?}");
                assert_eq!(inversion_length(&w), d, "{w:?}");
                assert_eq!(g.from_word(&w.reduced_word()).unwrap(), w);
            }
        }
    }

    #[test]
    fn descents_flip_length_by_one() {
        for g in small_groups() {
            for w in g.enumerate() {
                let l = w.length();
                for i in 1..=g.num_simple() {
                    let ws = w.times_simple(i);
                    let expected = if w.is_right_descent(i) { l - 1 } else { l + 1 };
                    assert_eq!(ws.length(), expected);
                }
            }
        }
    }

    #[test]
    fn longest_element_b2() {
        let b2 = WeylGroupSpec::b(2).unwrap();
        let w0 = b2.longest_element();
        assert_eq!(w0, b2.from_transpositions(&[(1, 5), (2, 4)]).unwrap());
        assert_eq!(w0.length(), 4);
        assert!(w0.compose(&w0).is_identity());
    }

    #[test]
    fn longest_element_matches_formula_and_bfs() {
        for g in small_groups() {
            let w0 = g.longest_element();
            let max = bfs_lengths(g).values().copied().max().unwrap();
            assert_eq!(w0.length(), max);
            assert!(w0.inverse() == w0);
            if let Some(f) = longest_element_formula(g) {
                assert_eq!(f, w0, "{g}");
            }
        }
    }

    #[test]
    fn d4_longest_element_is_minus_identity() {
        let d4 = WeylGroupSpec::d(4).unwrap();
        let w0 = d4.longest_element();
        assert_eq!(w0, d4.from_transpositions(&[(1, 8), (2, 7), (3, 6), (4, 5)]).unwrap());
        // (1,8)(2,7)(3,5)(4,6) is a valid element but not the longest one
        let other = d4.from_transpositions(&[(1, 8), (2, 7), (3, 5), (4, 6)]).unwrap();
        assert!(other.length() < w0.length());
    }

    #[test]
    fn bruhat_matches_subword_oracle() {
        fn subword_products(g: WeylGroupSpec, word: &[usize]) -> HashSet<WeylElement> {
            let mut out = HashSet::new();
            for mask in 0u32..(1 << word.len()) {
                let sub: Vec<usize> =
                    word.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i).collect();
                out.insert(g.from_word(&sub).unwrap());
            }
            out
        }
        for g in [
            WeylGroupSpec::b(2).unwrap(),
            WeylGroupSpec::b(3).unwrap(),
            WeylGroupSpec::d(3).unwrap(),
            WeylGroupSpec::a(4).unwrap(),
        ] {
            let all = g.enumerate();
            for b in &all {
                let below = subword_products(g, &b.reduced_word());
                for a in &all {
                    assert_eq!(a.bruhat_leq(b).unwrap(), below.contains(a), "{a:?} <= {b:?}");
                }
            }
        }
    }

    #[test]
    fn bruhat_is_partial_order() {
        for g in [WeylGroupSpec::b(3).unwrap(), WeylGroupSpec::d(3).unwrap()] {
            let all = g.enumerate();
            let leq: Vec<Vec<bool>> =
                all.iter().map(|a| all.iter().map(|b| a.bruhat_leq(b).unwrap()).collect()).collect();
            let n = all.len();
            for i in 0..n {
                assert!(leq[i][i]);
                for j in 0..n {
                    if i != j && leq[i][j] {
                        assert!(!leq[j][i]);
                    }
                    for k in 0..n {
                        if leq[i][j] && leq[j][k] {
                            assert!(leq[i][k]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn coset_reps_small_examples() {
        let b2 = WeylGroupSpec::b(2).unwrap();
        let reps = min_coset_reps(b2, &b2.levi_gens()).unwrap();
        let expected: Vec<WeylElement> =
            [vec![], vec![1], vec![1, 2], vec![1, 2, 1]].iter().map(|w| b2.from_word(w).unwrap()).collect();
        assert_eq!(reps, expected);

        let d2 = WeylGroupSpec::d(2).unwrap();
        assert!(d2.levi_gens().is_empty());
        let reps = min_coset_reps(d2, &d2.levi_gens()).unwrap();
        assert_eq!(reps.len(), 4);
        assert!(reps.contains(&d2.simple_reflection(2).unwrap()));
    }

    #[test]
    fn closed_forms_match_coset_reps() {
        for n in 1..=8 {
            let g = WeylGroupSpec::orthogonal(n).unwrap();
            let reps = min_coset_reps(g, &g.levi_gens()).unwrap();
            let expected_count = if n % 2 == 1 { n + 1 } else { n + 2 };
            assert_eq!(reps.len(), expected_count, "n={n}");
            let closed = closed_form_muw(n).unwrap();
            assert_eq!(closed.len(), expected_count);
            for (name, word) in &closed {
                let w = g.from_word(word).unwrap();
                assert_eq!(w.length(), word.len(), "{name} not reduced for n={n}");
                assert!(reps.contains(&w), "{name} for n={n}");
            }
        }
    }

    #[test]
    fn closed_form_word_examples() {
        let c3 = closed_form_muw(3).unwrap();
        assert_eq!(c3[3], ("w_3".to_string(), vec![1, 2, 1]));
        let c4 = closed_form_muw(4).unwrap();
        let w4 = c4.iter().find(|(l, _)| l == "w_4").unwrap();
        assert_eq!(w4.1, vec![1, 2, 3, 1]);
        let c2 = closed_form_muw(2).unwrap();
        assert!(c2.contains(&("w_1^†".to_string(), vec![2])));
    }

    #[test]
    fn coset_reps_are_unique_and_minimal() {
        for g in [
            WeylGroupSpec::b(2).unwrap(),
            WeylGroupSpec::b(3).unwrap(),
            WeylGroupSpec::d(3).unwrap(),
            WeylGroupSpec::d(4).unwrap(),
        ] {
            let levi = g.levi_gens();
            let reps = min_coset_reps(g, &levi).unwrap();
            let wmu: Vec<WeylElement> = {
                let mut set = HashSet::from([g.identity()]);
                let mut frontier = vec![g.identity()];
                while let Some(x) = frontier.pop() {
                    for &i in &levi {
                        let y = x.times_simple(i);
                        if set.insert(y.clone()) {
                            frontier.push(y);
                        }
                    }
                }
                set.into_iter().collect()
            };
            for w in g.enumerate() {
                let coset: Vec<WeylElement> = wmu.iter().map(|v| v.compose(&w)).collect();
                let hits: Vec<&WeylElement> = coset.iter().filter(|x| reps.contains(x)).collect();
                assert_eq!(hits.len(), 1);
                let min = coset.iter().map(|x| x.length()).min().unwrap();
                assert_eq!(hits[0].length(), min);
                assert_eq!(coset.iter().filter(|x| x.length() == min).count(), 1);
            }
        }
    }

    #[test]
    fn type_a_indices() {
        let a4 = WeylGroupSpec::a(4).unwrap();
        assert_eq!(type_a_eo_index(&a4.identity()).unwrap(), 0);
        for a in 0..4 {
            let d = delta_cycle(4, a).unwrap();
            assert_eq!(type_a_eo_index(&d).unwrap(), a);
            assert_eq!(d.length(), a);
        }
        assert_eq!(delta_cycle(4, 3).unwrap().cycles(), "(1,2,3,4)");
        let reps = min_coset_reps(a4, &[2, 3]).unwrap();
        let deltas: Vec<WeylElement> = (0..4).map(|a| delta_cycle(4, a).unwrap()).collect();
        assert_eq!(reps, deltas);
        assert!(type_a_eo_index(&a4.simple_reflection(2).unwrap()).is_err());
    }

    #[test]
    fn mixed_groups_are_rejected() {
        let b = WeylGroupSpec::b(2).unwrap();
        let d = WeylGroupSpec::d(3).unwrap();
        assert_eq!(b.identity().mul(&d.identity()), Err(Error::GroupMismatch));
        assert_eq!(b.identity().bruhat_leq(&d.identity()), Err(Error::GroupMismatch));
        assert!(d.element(vec![1, 2, 4, 3, 5, 6]).is_err());
        // odd number of sign changes is not in D
        assert!(d.element(vec![1, 2, 4, 3, 5, 6]).is_err());
        assert!(d.from_transpositions(&[(3, 4)]).is_err());
    }
}
