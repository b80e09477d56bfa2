//! One isogeny class per record, serialized as JSON with sorted keys.

use serde::{Deserialize, Serialize};

use abvar_core::intpoly::WeilPolynomial;

use crate::codec::{full_coefficients, label_to_polynomial, IsogenyClassLabel};
use crate::LmfdbError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceTag {
    Fixture,
    Live,
}

/// Invariants reported by the database. Kept for comparison only.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemoteMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_rank: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub galois_groups: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_rank: Option<u32>,
}

impl RemoteMetadata {
    pub fn is_empty(&self) -> bool {
        self == &RemoteMetadata::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFixture {
    pub label: String,
    /// Coefficients of `P`, leading term first (the database's `poly` order).
    pub coefficients: Vec<i64>,
    #[serde(default, skip_serializing_if = "RemoteMetadata::is_empty")]
    pub metadata: RemoteMetadata,
    pub source: SourceTag,
}

impl ClassFixture {
    /// Record built from the label alone.
    pub fn from_label(label: &IsogenyClassLabel, source: SourceTag) -> Result<Self, LmfdbError> {
        let leading = label.leading_coefficients()?;
        let coefficients = full_coefficients(label.g, label.q, &leading)
            .iter()
            .map(|c| i64::try_from(c).map_err(|_| LmfdbError::CoefficientOverflow(label.to_string())))
            .collect::<Result<_, _>>()?;
        Ok(ClassFixture { label: label.to_string(), coefficients, metadata: RemoteMetadata::default(), source })
    }

    pub fn parsed_label(&self) -> Result<IsogenyClassLabel, LmfdbError> {
        self.label.parse()
    }

    /// Validated polynomial, after checking the stored coefficients against
    /// the decoded label.
    pub fn polynomial(&self) -> Result<WeilPolynomial, LmfdbError> {
        let label = self.parsed_label()?;
        let expected = ClassFixture::from_label(&label, self.source)?;
        if expected.coefficients != self.coefficients {
            return Err(LmfdbError::RemoteMismatch {
                label: self.label.clone(),
                local: expected.coefficients,
                remote: self.coefficients.clone(),
            });
        }
        label_to_polynomial(&label)
    }

    /// Pretty JSON, keys sorted, trailing newline.
    pub fn to_canonical_text(&self) -> String {
        // serde_json's map is ordered by key unless preserve_order is enabled
        let value = serde_json::to_value(self).expect("record serializes");
        let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
        text.push('\n');
        text
    }

    pub fn from_text(text: &str) -> Result<Self, LmfdbError> {
        serde_json::from_str(text).map_err(|e| LmfdbError::CorruptRecord(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text_is_sorted_and_stable() {
        let label: IsogenyClassLabel = "2.2.ac_d".parse().unwrap();
        let mut rec = ClassFixture::from_label(&label, SourceTag::Live).unwrap();
        rec.metadata.p_rank = Some(2);
        rec.metadata.angle_rank = Some(2);
        let text = rec.to_canonical_text();
        let keys: Vec<usize> = ["\"coefficients\"", "\"label\"", "\"metadata\"", "\"source\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(text.find("angle_rank").unwrap() < text.find("p_rank").unwrap());
        let back = ClassFixture::from_text(&text).unwrap();
        assert_eq!(back, rec);
        assert_eq!(back.to_canonical_text(), text);
        assert_eq!(rec.coefficients, vec![1, -2, 3, -4, 4]);
    }

    #[test]
    fn tampered_coefficients_are_caught() {
        let label: IsogenyClassLabel = "1.2.ab".parse().unwrap();
        let mut rec = ClassFixture::from_label(&label, SourceTag::Fixture).unwrap();
        rec.polynomial().unwrap();
        rec.coefficients[1] = 1;
        assert!(matches!(rec.polynomial(), Err(LmfdbError::RemoteMismatch { .. })));
    }
}
