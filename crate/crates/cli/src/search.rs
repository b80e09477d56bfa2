//! Enumeration of Weil polynomials, looking for a witness of every
//! transitive class that contains complex conjugation.
//!
//! Candidates run lexicographically over `(r, a_1, ..., a_d)` with each
//! `a_j` from `-B_j` to `B_j`, `B_j = floor(C(2d, j) q^(j/2))`. Progress is
//! saved after every batch, so an interrupted run resumes where it stopped
//! and finds the same witnesses.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use abvar_core::classify::{classify_with, ClassifyOptions};
use abvar_core::intpoly::weil::coefficient_bound;
use abvar_core::intpoly::{honda_tate_e, is_irreducible, passes_trace_test, validate_weil, IntPolynomial};
use abvar_core::localfield::factor_over_qp;
use abvar_core::parallel::{map_with, Execution};
use abvar_core::w2d::{atlas, SubgroupLabel};
use abvar_lmfdb::codec::{full_coefficients, prime_power_parts};
use abvar_lmfdb::polynomial_to_label;

use crate::error::CliError;
use crate::records::{SearchClassRecord, SearchSummaryRecord};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub d: usize,
    pub p: u64,
    pub r_max: u32,
    pub height: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub bounds: SearchBounds,
    /// Next field exponent to work on; `r_max + 1` once finished.
    pub r: u32,
    /// Next candidate index within that field.
    pub next: u64,
    pub candidates: u64,
    pub weil: u64,
    pub irreducible: u64,
    /// Irreducible Weil polynomials whose simple class has larger dimension.
    pub higher_index: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
    /// Keyed by `newton type|group label`.
    pub found: BTreeMap<String, SearchClassRecord>,
}

impl Checkpoint {
    fn fresh(bounds: &SearchBounds) -> Self {
        Checkpoint {
            bounds: bounds.clone(),
            r: 1,
            next: 0,
            candidates: 0,
            weil: 0,
            irreducible: 0,
            higher_index: 0,
            failures: 0,
            first_failure: None,
            found: BTreeMap::new(),
        }
    }

    pub fn finished(&self) -> bool {
        self.r > self.bounds.r_max
    }

    fn load(path: &Path, bounds: &SearchBounds) -> Result<Self, CliError> {
        let err = |reason: String| CliError::Checkpoint { path: path.display().to_string(), reason };
        match fs::read_to_string(path) {
            Ok(text) => {
                let cp: Checkpoint = serde_json::from_str(&text).map_err(|e| err(e.to_string()))?;
                if &cp.bounds != bounds {
                    return Err(err(format!("written for {:?}, asked for {:?}", cp.bounds, bounds)));
                }
                Ok(cp)
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Checkpoint::fresh(bounds)),
            Err(e) => Err(err(e.to_string())),
        }
    }

    fn save(&self, path: &Path) -> Result<(), CliError> {
        let err = |reason: String| CliError::Checkpoint { path: path.display().to_string(), reason };
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => std::path::PathBuf::from("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| err(e.to_string()))?;
        let text = serde_json::to_string_pretty(&serde_json::to_value(self).expect("checkpoint serializes"))
            .expect("value serializes");
        tmp.write_all(text.as_bytes()).map_err(|e| err(e.to_string()))?;
        tmp.persist(path).map_err(|e| err(e.error.to_string()))?;
        Ok(())
    }
}

/// `B_j` for `j = 1..=d`, capped by `height`.
pub fn coefficient_bounds(d: usize, q: u64, height: Option<u64>) -> Vec<i64> {
    let q = BigInt::from(q);
    (1..=d)
        .map(|j| {
            let b = i64::try_from(coefficient_bound(2 * d, j, &q)).unwrap_or(i64::MAX);
            height.map_or(b, |h| b.min(h as i64))
        })
        .collect()
}

pub fn candidate_count(bounds: &[i64]) -> u64 {
    bounds.iter().map(|b| (2 * b + 1) as u64).product()
}

/// The `index`-th tuple `(a_1, ..., a_d)`, `a_1` most significant.
pub fn candidate_at(bounds: &[i64], mut index: u64) -> Vec<i64> {
    let mut out = vec![0; bounds.len()];
    for j in (0..bounds.len()).rev() {
        let width = (2 * bounds[j] + 1) as u64;
        out[j] = (index % width) as i64 - bounds[j];
        index /= width;
    }
    out
}

enum Outcome {
    NotWeil,
    Reducible,
    HigherIndex,
    Failed(String),
    Classified(Option<SearchClassRecord>),
}

fn evaluate(d: usize, p: u64, r: u32, leading: &[i64], options: &ClassifyOptions) -> Outcome {
    let q = p.pow(r);
    let descending = full_coefficients(d, q, leading);
    let poly = IntPolynomial::new(descending.into_iter().rev().collect());
    if !passes_trace_test(&poly, &BigInt::from(q)) {
        return Outcome::NotWeil;
    }
    if !is_irreducible(&poly) {
        return Outcome::Reducible;
    }
    let weil = match validate_weil(&poly, p, r) {
        Ok(w) => w,
        Err(e) => return Outcome::Failed(format!("{leading:?} over F_{q}: {e}")),
    };
    // h^e with e > 1 is the class of a variety of dimension e * d
    match factor_over_qp(&poly, p, options.padic_precision.max(1)) {
        Ok(local) if honda_tate_e(&poly, &local.local_data(r)) > 1 => return Outcome::HigherIndex,
        Ok(_) => {}
        Err(e) => return Outcome::Failed(format!("{leading:?} over F_{q}: {e}")),
    }
    let rec = match classify_with(&weil, options) {
        Ok(rec) => rec,
        Err(e) => return Outcome::Failed(format!("{leading:?} over F_{q}: {e}")),
    };
    let group = &rec.rep.group;
    if !(group.is_transitive() && group.contains_iota()) {
        return Outcome::Classified(None);
    }
    let (Some(label), Some(tag)) = (rec.group_label.clone(), rec.np_tag) else {
        return Outcome::Classified(None);
    };
    let class = SubgroupLabel::parse(&label).map(|l| l.class_name()).unwrap_or_else(|_| label.clone());
    let row = rec.verdict.row();
    Outcome::Classified(Some(SearchClassRecord {
        d,
        newton_type: tag.letter().to_string(),
        group_label: label,
        class,
        angle_rank: rec.angle_rank,
        witness: polynomial_to_label(&weil).map(|l| l.to_string()).unwrap_or_default(),
        q,
        table: row.map(|r| r.table),
        occurs_in_table: row.map(|r| r.occurs),
    }))
}

/// Transitive classes containing complex conjugation, by class name.
pub fn target_classes(d: usize) -> Result<BTreeSet<String>, CliError> {
    let a = atlas(d).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(a.transitive_with_iota().iter().filter_map(|h| a.label_of(h)).map(|l| l.class_name()).collect())
}

pub struct SearchReport {
    pub summary: SearchSummaryRecord,
    pub classes: Vec<SearchClassRecord>,
}

pub fn run_search(
    bounds: &SearchBounds,
    batch: u64,
    checkpoint: Option<&Path>,
    options: &ClassifyOptions,
    mode: Execution,
) -> Result<SearchReport, CliError> {
    Ok(run_search_for(bounds, batch, checkpoint, None, options, mode)?.expect("no batch limit"))
}

/// Like [`run_search`], but stops after `max_batches` batches and returns
/// `None` if work is left; the checkpoint then holds the progress.
pub fn run_search_for(
    bounds: &SearchBounds,
    batch: u64,
    checkpoint: Option<&Path>,
    max_batches: Option<u64>,
    options: &ClassifyOptions,
    mode: Execution,
) -> Result<Option<SearchReport>, CliError> {
    if bounds.d == 0 || bounds.d > 3 {
        return Err(CliError::Usage("search needs 1 <= d <= 3".into()));
    }
    match prime_power_parts(bounds.p) {
        Some((_, 1)) => {}
        _ => return Err(CliError::Usage(format!("--p {} is not prime", bounds.p))),
    }
    let mut state = match checkpoint {
        Some(path) => Checkpoint::load(path, bounds)?,
        None => Checkpoint::fresh(bounds),
    };
    let mut batches = 0u64;
    while !state.finished() {
        let q = bounds.p.checked_pow(state.r).ok_or_else(|| CliError::Usage("field size overflows".into()))?;
        let coeff_bounds = coefficient_bounds(bounds.d, q, bounds.height);
        let total = candidate_count(&coeff_bounds);
        while state.next < total {
            if max_batches.is_some_and(|m| batches >= m) {
                return Ok(None);
            }
            batches += 1;
            let end = (state.next + batch).min(total);
            let indices: Vec<u64> = (state.next..end).collect();
            let r = state.r;
            let outcomes = map_with(mode, &indices, |&i| {
                evaluate(bounds.d, bounds.p, r, &candidate_at(&coeff_bounds, i), options)
            });
            for outcome in outcomes {
                state.candidates += 1;
                match outcome {
                    Outcome::NotWeil => {}
                    Outcome::Reducible => state.weil += 1,
                    Outcome::HigherIndex => {
                        state.weil += 1;
                        state.irreducible += 1;
                        state.higher_index += 1;
                    }
                    Outcome::Failed(why) => {
                        state.weil += 1;
                        state.irreducible += 1;
                        state.failures += 1;
                        state.first_failure.get_or_insert(why);
                    }
                    Outcome::Classified(hit) => {
                        state.weil += 1;
                        state.irreducible += 1;
                        if let Some(hit) = hit {
                            let key = format!("{}|{}", hit.newton_type, hit.group_label);
                            state.found.entry(key).or_insert(hit);
                        }
                    }
                }
            }
            state.next = end;
            if let Some(path) = checkpoint {
                state.save(path)?;
            }
        }
        state.r += 1;
        state.next = 0;
        if let Some(path) = checkpoint {
            state.save(path)?;
        }
    }
    let realized: BTreeSet<String> = state.found.values().map(|c| c.class.clone()).collect();
    let missing = target_classes(bounds.d)?.difference(&realized).cloned().collect();
    Ok(Some(SearchReport {
        summary: SearchSummaryRecord {
            d: bounds.d,
            p: bounds.p,
            r_max: bounds.r_max,
            height: bounds.height,
            candidates: state.candidates,
            weil: state.weil,
            irreducible: state.irreducible,
            higher_index: state.higher_index,
            failures: state.failures,
            realized_classes: realized.into_iter().collect(),
            missing_classes: missing,
            seed: options.seed,
        },
        classes: state.found.into_values().collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_lexicographic() {
        let b = vec![2, 3];
        assert_eq!(candidate_count(&b), 35);
        assert_eq!(candidate_at(&b, 0), vec![-2, -3]);
        assert_eq!(candidate_at(&b, 1), vec![-2, -2]);
        assert_eq!(candidate_at(&b, 7), vec![-1, -3]);
        assert_eq!(candidate_at(&b, 34), vec![2, 3]);
    }

    #[test]
    fn weil_bounds() {
        // |a_1| <= 2 sqrt(q), |a_2| <= 6q for surfaces
        assert_eq!(coefficient_bounds(1, 2, None), vec![2]);
        assert_eq!(coefficient_bounds(2, 4, None), vec![8, 24]);
        assert_eq!(coefficient_bounds(2, 4, Some(5)), vec![5, 5]);
    }

    #[test]
    fn elliptic_search_realizes_w2() {
        let bounds = SearchBounds { d: 1, p: 2, r_max: 1, height: None };
        let report = run_search(&bounds, 4, None, &ClassifyOptions::default(), Execution::Sequential).unwrap();
        assert_eq!(report.summary.candidates, 5);
        assert_eq!(report.summary.missing_classes, Vec::<String>::new());
        assert!(report.classes.iter().any(|c| c.group_label == "W2.2.t.a.1" && c.newton_type == "ordinary"));
    }
}
