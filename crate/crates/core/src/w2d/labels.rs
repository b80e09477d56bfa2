//! Subgroup atlas for `d <= 3` with deterministic labels `iso.2d.(t|nt).letter.k`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use super::group::{enumerate_subgroups_of, SignedSubgroup};
use super::perm::{all_elements, SignedPerm};
use super::W2dError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupLabel {
    pub iso: String,
    pub two_d: usize,
    pub transitive: bool,
    pub letter: String,
    pub k: usize,
}

impl fmt::Display for SubgroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}.{}.{}.{}.{}",
            self.iso,
            self.two_d,
            if self.transitive { "t" } else { "nt" },
            self.letter,
            self.k
        )
    }
}

impl SubgroupLabel {
    pub fn parse(s: &str) -> Result<SubgroupLabel, W2dError> {
        let parts: Vec<&str> = s.split('.').collect();
        let bad = || W2dError::BadLabel(s.to_string());
        if parts.len() != 5 {
            return Err(bad());
        }
        let transitive = match parts[2] {
            "t" => true,
            "nt" => false,
            _ => return Err(bad()),
        };
        Ok(SubgroupLabel {
            iso: parts[0].to_string(),
            two_d: parts[1].parse().map_err(|_| bad())?,
            transitive,
            letter: parts[3].to_string(),
            k: parts[4].parse().map_err(|_| bad())?,
        })
    }

    /// The class part of the label, without the tiebreaker.
    pub fn class_name(&self) -> String {
        format!("{}.{}.{}.{}", self.iso, self.two_d, if self.transitive { "t" } else { "nt" }, self.letter)
    }
}

/// Labels pinned to explicit generators; the generic order below only
/// labels groups outside this list.
pub const CALIBRATION: &[(&str, &[&str])] = &[
    ("W4.4.t.a.1", &["(1 2 b1 b2)", "(1 2)(b1 b2)"]),
    ("V4.4.t.a.1", &["(1 b1)(2 b2)", "(1 2)(b1 b2)"]),
    ("C4.4.t.a.1", &["(1 2 b1 b2)"]),
    ("V4.4.nt.a.1", &["(1 b1)", "(2 b2)"]),
    ("C2.4.nt.a.1", &["(1 b1)(2 b2)"]),
    ("C2.4.nt.b.1", &["(1 b1)"]),
    ("C2.4.nt.b.2", &["(2 b2)"]),
    ("C2.4.nt.c.1", &["(1 2)(b1 b2)"]),
    ("C2.4.nt.c.2", &["(1 b2)(b1 2)"]),
    ("C1.4.nt.a.1", &[]),
    ("W6.6.t.a.1", &["(1 2 3)(b1 b2 b3)", "(1 2)(b1 b2)", "(1 b1)"]),
    ("6T6.6.t.a.1", &["(1 2 3)(b1 b2 b3)", "(1 b1)", "(2 b2)", "(3 b3)"]),
    ("D6.6.t.a.1", &["(1 b2 3 b1 2 b3)", "(2 3)(b2 b3)"]),
    ("D6.6.t.a.2", &["(1 2 b3 b1 b2 3)", "(2 3)(b2 b3)"]),
    ("D6.6.t.a.3", &["(1 b2 b3 b1 2 3)", "(2 b3)(b2 3)"]),
    ("D6.6.t.a.4", &["(1 2 3 b1 b2 b3)", "(2 b3)(b2 3)"]),
    ("C6.6.t.a.1", &["(1 b2 3 b1 2 b3)"]),
    ("C6.6.t.a.2", &["(1 2 3 b1 b2 b3)"]),
    ("C6.6.t.a.3", &["(1 2 b3 b1 b2 3)"]),
    ("C6.6.t.a.4", &["(1 b2 b3 b1 2 3)"]),
];

pub fn calibrated_group(label: &str) -> Option<SignedSubgroup> {
    let (lab, gens) = CALIBRATION.iter().find(|(l, _)| *l == label)?;
    let parsed = SubgroupLabel::parse(lab).ok()?;
    let d = parsed.two_d / 2;
    let gens: Vec<SignedPerm> = gens.iter().map(|g| SignedPerm::parse_cycles(d, g).expect("valid calibration")).collect();
    Some(SignedSubgroup::generate(d, &gens))
}

/// All subgroups of `W_2d`, labelled.
#[derive(Debug)]
pub struct Atlas {
    pub d: usize,
    pub subgroups: Vec<SignedSubgroup>,
    pub labels: Vec<SubgroupLabel>,
    /// Index of the `W_2d`-conjugacy class of each subgroup.
    pub class_of: Vec<usize>,
    index: HashMap<SignedSubgroup, usize>,
    /// Calibrated rows whose generic label would differ.
    pub calibration_notes: Vec<String>,
}

fn letter(i: usize) -> String {
    let mut s = String::new();
    let mut n = i;
    loop {
        s.insert(0, (b'a' + (n % 26) as u8) as char);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    s
}

fn letter_index(s: &str) -> usize {
    s.bytes().fold(0usize, |acc, b| acc * 26 + (b - b'a') as usize + 1) - 1
}

impl Atlas {
    pub fn build(d: usize) -> Result<Atlas, W2dError> {
        if d == 0 || d > 3 {
            return Err(W2dError::UnsupportedDegree(d));
        }
        let w = all_elements(d);
        let subgroups = enumerate_subgroups_of(d, &w);
        let index: HashMap<SignedSubgroup, usize> =
            subgroups.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect();
        // conjugacy classes keyed by their minimal member
        let mut class_rep: Vec<usize> = Vec::with_capacity(subgroups.len());
        for h in &subgroups {
            let min = w.iter().map(|g| h.conjugate_by(g)).min().expect("nonempty");
            class_rep.push(index[&min]);
        }
        let mut reps: Vec<usize> = class_rep.clone();
        reps.sort_unstable();
        reps.dedup();
        let class_id: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let class_of: Vec<usize> = class_rep.iter().map(|r| class_id[r]).collect();

        let key = |i: usize| (subgroups[i].iso_name(), subgroups[i].is_transitive());
        // calibrated assignments
        let mut fixed: HashMap<usize, SubgroupLabel> = HashMap::new();
        let mut class_letter: HashMap<usize, String> = HashMap::new();
        for (lab, _) in CALIBRATION {
            let parsed = SubgroupLabel::parse(lab)?;
            if parsed.two_d != 2 * d {
                continue;
            }
            let h = calibrated_group(lab).expect("calibration row");
            let i = *index.get(&h).ok_or_else(|| W2dError::CalibrationMismatch(lab.to_string()))?;
            let (iso, t) = key(i);
            if iso != parsed.iso || t != parsed.transitive {
                return Err(W2dError::CalibrationMismatch(format!("{} computed as {} {}", lab, iso, t)));
            }
            match class_letter.get(&class_of[i]) {
                Some(l) if *l != parsed.letter => {
                    return Err(W2dError::CalibrationMismatch(format!("{} splits a conjugacy class", lab)))
                }
                _ => {}
            }
            class_letter.insert(class_of[i], parsed.letter.clone());
            fixed.insert(i, parsed);
        }
        // generic letters for the remaining classes, per (iso, transitivity)
        let mut by_key: BTreeMap<(String, bool), Vec<usize>> = BTreeMap::new();
        for &r in &reps {
            by_key.entry(key(r)).or_default().push(class_id[&r]);
        }
        let mut calibration_notes = Vec::new();
        for ((iso, t), classes) in &by_key {
            let used: Vec<usize> = classes.iter().filter_map(|c| class_letter.get(c)).map(|l| letter_index(l)).collect();
            let mut next = used.iter().max().map_or(0, |m| m + 1);
            for (generic_pos, c) in classes.iter().enumerate() {
                match class_letter.get(c) {
                    Some(l) => {
                        if letter_index(l) != generic_pos {
                            calibration_notes.push(format!(
                                "{}.{}.{}: class lettered {} sits at generic position {}",
                                iso,
                                2 * d,
                                if *t { "t" } else { "nt" },
                                l,
                                letter(generic_pos)
                            ));
                        }
                    }
                    None => {
                        class_letter.insert(*c, letter(next));
                        next += 1;
                    }
                }
            }
        }
        // tiebreakers
        let mut labels: Vec<Option<SubgroupLabel>> = vec![None; subgroups.len()];
        let mut next_k: HashMap<usize, usize> = HashMap::new();
        for (i, lab) in &fixed {
            labels[*i] = Some(lab.clone());
            let e = next_k.entry(class_of[*i]).or_insert(1);
            *e = (*e).max(lab.k + 1);
        }
        for i in 0..subgroups.len() {
            if labels[i].is_some() {
                continue;
            }
            let c = class_of[i];
            let k = next_k.entry(c).or_insert(1);
            let (iso, t) = key(i);
            labels[i] = Some(SubgroupLabel { iso, two_d: 2 * d, transitive: t, letter: class_letter[&c].clone(), k: *k });
            *k += 1;
        }
        let labels: Vec<SubgroupLabel> = labels.into_iter().map(|l| l.expect("labelled")).collect();
        Ok(Atlas { d, subgroups, labels, class_of, index, calibration_notes })
    }

    pub fn position(&self, h: &SignedSubgroup) -> Option<usize> {
        self.index.get(h).copied()
    }

    pub fn label_of(&self, h: &SignedSubgroup) -> Option<&SubgroupLabel> {
        self.position(h).map(|i| &self.labels[i])
    }

    pub fn find(&self, label: &str) -> Option<&SignedSubgroup> {
        self.labels.iter().position(|l| l.to_string() == label).map(|i| &self.subgroups[i])
    }

    /// Transitive subgroups containing complex conjugation.
    pub fn transitive_with_iota(&self) -> Vec<&SignedSubgroup> {
        self.subgroups.iter().filter(|h| h.is_transitive() && h.contains_iota()).collect()
    }

    pub fn conjugacy_class_count(&self, pred: impl Fn(&SignedSubgroup) -> bool) -> usize {
        let mut cs: Vec<usize> =
            self.subgroups.iter().zip(&self.class_of).filter(|(h, _)| pred(h)).map(|(_, &c)| c).collect();
        cs.sort_unstable();
        cs.dedup();
        cs.len()
    }
}

/// Shared atlases, built on first use.
pub fn atlas(d: usize) -> Result<&'static Atlas, W2dError> {
    static ATLASES: [OnceLock<Result<Atlas, W2dError>>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if d == 0 || d > 3 {
        return Err(W2dError::UnsupportedDegree(d));
    }
    ATLASES[d - 1].get_or_init(|| Atlas::build(d)).as_ref().map_err(|e| e.clone())
}

pub fn enumerate_subgroups(d: usize) -> Result<Vec<SignedSubgroup>, W2dError> {
    Ok(atlas(d)?.subgroups.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w4_labels_match_calibration() {
        let a = atlas(2).unwrap();
        assert_eq!(a.subgroups.len(), 10);
        for (lab, _) in CALIBRATION.iter().filter(|(l, _)| l.contains(".4.")) {
            let h = calibrated_group(lab).unwrap();
            assert_eq!(a.label_of(&h).unwrap().to_string(), *lab);
        }
    }

    #[test]
    fn w6_transitive_with_iota() {
        let a = atlas(3).unwrap();
        let t = a.transitive_with_iota();
        assert_eq!(t.len(), 10);
        assert_eq!(a.conjugacy_class_count(|h| h.is_transitive() && h.contains_iota()), 4);
        let mut isos: Vec<String> = t.iter().map(|h| h.iso_name()).collect();
        isos.sort();
        isos.dedup();
        assert_eq!(isos, vec!["6T6", "C6", "D6", "W6"]);
        let d6 = calibrated_group("D6.6.t.a.2").unwrap();
        assert_eq!(a.label_of(&d6).unwrap().to_string(), "D6.6.t.a.2");
    }

    #[test]
    fn labels_are_unique() {
        for d in 1..=3 {
            let a = atlas(d).unwrap();
            let mut l: Vec<String> = a.labels.iter().map(|x| x.to_string()).collect();
            l.sort();
            let n = l.len();
            l.dedup();
            assert_eq!(l.len(), n);
        }
        let a = atlas(1).unwrap();
        assert_eq!(a.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(), vec!["C1.2.nt.a.1", "W2.2.t.a.1"]);
    }

    #[test]
    fn letter_codes() {
        assert_eq!(letter(0), "a");
        assert_eq!(letter(25), "z");
        assert_eq!(letter(26), "aa");
        for i in 0..100 {
            assert_eq!(letter_index(&letter(i)), i);
        }
    }
}
