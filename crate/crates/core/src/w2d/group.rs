//! Subgroups of `W_2d` as explicit sorted element lists.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::perm::SignedPerm;

#[derive(Clone, Debug)]
pub struct SignedSubgroup {
    d: usize,
    elements: Vec<SignedPerm>,
    generators: Vec<SignedPerm>,
}

impl PartialEq for SignedSubgroup {
    fn eq(&self, o: &Self) -> bool {
        self.d == o.d && self.elements == o.elements
    }
}

impl Eq for SignedSubgroup {}

impl std::hash::Hash for SignedSubgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.d.hash(state);
        self.elements.hash(state);
    }
}

/// Order first, then the sorted element lists lexicographically.
impl Ord for SignedSubgroup {
    fn cmp(&self, o: &Self) -> Ordering {
        self.d
            .cmp(&o.d)
            .then(self.elements.len().cmp(&o.elements.len()))
            .then_with(|| self.elements.cmp(&o.elements))
    }
}

impl PartialOrd for SignedSubgroup {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

fn close(d: usize, gens: &[SignedPerm]) -> Vec<SignedPerm> {
    let id = SignedPerm::identity(d);
    let mut seen: BTreeSet<SignedPerm> = BTreeSet::new();
    seen.insert(id.clone());
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

impl SignedSubgroup {
    /// Subgroup generated by `gens`; generators are reduced to a short
    /// deterministic generating set.
    pub fn generate(d: usize, gens: &[SignedPerm]) -> SignedSubgroup {
        let elements = close(d, gens);
        let mut g = SignedSubgroup { d, elements, generators: Vec::new() };
        g.generators = g.small_generating_set();
        g
    }

    /// Build from a full element list assumed closed.
    pub fn from_elements(d: usize, mut elements: Vec<SignedPerm>) -> SignedSubgroup {
        elements.sort();
        elements.dedup();
        let mut g = SignedSubgroup { d, elements, generators: Vec::new() };
        g.generators = g.small_generating_set();
        g
    }

    pub fn trivial(d: usize) -> SignedSubgroup {
        SignedSubgroup { d, elements: vec![SignedPerm::identity(d)], generators: Vec::new() }
    }

    pub fn full(d: usize) -> SignedSubgroup {
        SignedSubgroup::from_elements(d, super::perm::all_elements(d))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SignedPerm] {
        &self.elements
    }

    pub fn generators(&self) -> &[SignedPerm] {
        &self.generators
    }

    pub fn contains(&self, g: &SignedPerm) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn contains_iota(&self) -> bool {
        self.contains(&SignedPerm::iota(self.d))
    }

    pub fn is_subgroup_of(&self, o: &SignedSubgroup) -> bool {
        self.elements.iter().all(|g| o.contains(g))
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = 2 * self.d;
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut orbit: Vec<usize> = self.elements.iter().map(|g| g.apply(s)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &x in &orbit {
                seen[x] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    pub fn conjugate_by(&self, g: &SignedPerm) -> SignedSubgroup {
        let elements: Vec<SignedPerm> = self.elements.iter().map(|x| x.conjugate_by(g)).collect();
        let generators = self.generators.iter().map(|x| x.conjugate_by(g)).collect();
        let mut elements = elements;
        elements.sort();
        SignedSubgroup { d: self.d, elements, generators }
    }

    pub fn relabel(&self, relabel: &[usize]) -> SignedSubgroup {
        let mut elements: Vec<SignedPerm> = self.elements.iter().map(|x| x.relabel(relabel)).collect();
        elements.sort();
        let generators = self.generators.iter().map(|x| x.relabel(relabel)).collect();
        SignedSubgroup { d: self.d, elements, generators }
    }

    /// Multiset of cycle types on the 2d symbols.
    pub fn cycle_types(&self) -> BTreeSet<Vec<usize>> {
        self.elements.iter().map(|g| g.cycle_type()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter().all(|a| gens.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    pub fn exponent(&self) -> usize {
        self.elements.iter().map(|g| g.order()).fold(1, num_integer::lcm)
    }

    pub fn is_cyclic(&self) -> bool {
        self.elements.iter().any(|g| g.order() == self.order())
    }

    fn order_counts(&self) -> HashMap<usize, usize> {
        let mut m = HashMap::new();
        for g in &self.elements {
            *m.entry(g.order()).or_insert(0) += 1;
        }
        m
    }

    /// Structural name: order plus abelian, cyclic and element-order data.
    pub fn iso_name(&self) -> String {
        let n = self.order();
        if n == (1usize << self.d) * (1..=self.d).product::<usize>() && self.d >= 1 {
            return format!("W{}", 2 * self.d);
        }
        if self.is_cyclic() {
            return format!("C{}", n);
        }
        let counts = self.order_counts();
        let invol = counts.get(&2).copied().unwrap_or(0);
        let abelian = self.is_abelian();
        let exp = self.exponent();
        let name = match (n, abelian) {
            (4, true) => "V4".to_string(),
            (6, false) => "S3".to_string(),
            (8, true) if exp == 2 => "C2^3".to_string(),
            (8, true) => "C2xC4".to_string(),
            (8, false) if invol == 5 => "D4".to_string(),
            (8, false) => "Q8".to_string(),
            (12, true) => "C2xC6".to_string(),
            (12, false) if invol == 7 => "D6".to_string(),
            (12, false) if invol == 3 => "A4".to_string(),
            (12, false) => "Dic3".to_string(),
            (16, true) if exp == 2 => "C2^4".to_string(),
            (16, false) if invol == 11 => "C2xD4".to_string(),
            (24, false) if invol == 9 => "S4".to_string(),
            (24, false) if invol == 7 && self.d == 3 && self.is_transitive() => "6T6".to_string(),
            (24, false) if invol == 7 => "C2xA4".to_string(),
            (24, false) if invol == 15 => "C2xD6".to_string(),
            _ => format!("G{}", n),
        };
        name
    }

    /// Lexicographically first generating set of minimal size found by a
    /// bounded search; falls back to a greedy set.
    fn small_generating_set(&self) -> Vec<SignedPerm> {
        let n = self.order();
        if n == 1 {
            return Vec::new();
        }
        if let Some(g) = self.elements.iter().find(|g| g.order() == n) {
            return vec![g.clone()];
        }
        let els = &self.elements;
        for (i, a) in els.iter().enumerate() {
            for b in &els[i + 1..] {
                if close(self.d, &[a.clone(), b.clone()]).len() == n {
                    return vec![a.clone(), b.clone()];
                }
            }
        }
        // greedy: add the first element not yet generated
        let mut gens: Vec<SignedPerm> = Vec::new();
        let mut span = close(self.d, &gens);
        for g in els {
            if span.binary_search(g).is_err() {
                gens.push(g.clone());
                span = close(self.d, &gens);
                if span.len() == n {
                    break;
                }
            }
        }
        gens
    }
}

impl fmt::Display for SignedSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return write!(f, "<id>");
        }
        let g: Vec<String> = self.generators.iter().map(|x| x.to_string()).collect();
        write!(f, "<{}>", g.join(", "))
    }
}

/// All subgroups of the group formed by `ambient` (closed, sorted), sorted
/// by the canonical order. Built by repeatedly joining known subgroups with
/// one more element.
pub fn enumerate_subgroups_of(d: usize, ambient: &[SignedPerm]) -> Vec<SignedSubgroup> {
    let n = ambient.len();
    assert!(n <= 128, "subgroup lattice only for ambient groups of order <= 128");
    let index: HashMap<&SignedPerm, usize> = ambient.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let table: Vec<Vec<u8>> = ambient
        .iter()
        .map(|a| ambient.iter().map(|b| index[&a.compose(b)] as u8).collect())
        .collect();
    let id = index[&SignedPerm::identity(d)];
    let closure = |start: u128, gens: &[usize]| -> u128 {
        let mut mask = start | (1u128 << id);
        let mut queue: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = table[g][x] as usize;
                if mask >> y & 1 == 0 {
                    mask |= 1u128 << y;
                    queue.push(y);
                }
            }
        }
        mask
    };
    let mut known: HashMap<u128, Vec<usize>> = HashMap::new();
    known.insert(1u128 << id, Vec::new());
    let mut frontier: Vec<u128> = vec![1u128 << id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for mask in frontier {
            let gens = known[&mask].clone();
            for g in 0..n {
                if mask >> g & 1 == 1 {
                    continue;
                }
                let mut new_gens = gens.clone();
                new_gens.push(g);
                let m = closure(mask, &new_gens);
                if let std::collections::hash_map::Entry::Vacant(e) = known.entry(m) {
                    e.insert(new_gens);
                    next.push(m);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<SignedSubgroup> = known
        .keys()
        .map(|&mask| {
            let els: Vec<SignedPerm> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| ambient[i].clone()).collect();
            SignedSubgroup::from_elements(d, els)
        })
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_sizes() {
        let w4 = SignedSubgroup::full(2);
        let subs = enumerate_subgroups_of(2, w4.elements());
        assert_eq!(subs.len(), 10);
        assert_eq!(subs.iter().filter(|h| h.is_transitive()).count(), 3);
        let w2 = SignedSubgroup::full(1);
        assert_eq!(enumerate_subgroups_of(1, w2.elements()).len(), 2);
    }

    #[test]
    fn names() {
        let c4 = SignedSubgroup::generate(2, &[SignedPerm::parse_cycles(2, "(1 2 b1 b2)").unwrap()]);
        assert_eq!(c4.iso_name(), "C4");
        assert!(c4.is_transitive() && c4.contains_iota());
        assert_eq!(SignedSubgroup::full(2).iso_name(), "W4");
        let d6 = SignedSubgroup::generate(
            3,
            &[
                SignedPerm::parse_cycles(3, "(1 b2 3 b1 2 b3)").unwrap(),
                SignedPerm::parse_cycles(3, "(2 3)(b2 b3)").unwrap(),
            ],
        );
        assert_eq!(d6.order(), 12);
        assert_eq!(d6.iso_name(), "D6");
    }
}
