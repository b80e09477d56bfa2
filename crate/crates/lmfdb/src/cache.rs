//! On-disk record cache: `<dir>/<g>.<q>/<label>.txt`, one record per file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::codec::IsogenyClassLabel;
use crate::record::ClassFixture;
use crate::LmfdbError;

#[derive(Clone, Debug)]
pub struct DiskCache {
    root: PathBuf,
}

impl DiskCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        DiskCache { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_for(&self, label: &IsogenyClassLabel) -> PathBuf {
        self.root.join(label.family()).join(format!("{label}.txt"))
    }

    pub fn load(&self, label: &IsogenyClassLabel) -> Result<Option<ClassFixture>, LmfdbError> {
        let path = self.path_for(label);
        match fs::read_to_string(&path) {
            Ok(text) => ClassFixture::from_text(&text).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(LmfdbError::Io { path, source: e }),
        }
    }

    /// Write to a temporary file in the target directory, then rename it
    /// over the final path, so readers never see a partial record.
    pub fn store(&self, record: &ClassFixture) -> Result<PathBuf, LmfdbError> {
        let label = record.parsed_label()?;
        let path = self.path_for(&label);
        let dir = path.parent().expect("record path has a parent").to_path_buf();
        let io = |source| LmfdbError::Io { path: dir.clone(), source };
        fs::create_dir_all(&dir).map_err(io)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
        tmp.write_all(record.to_canonical_text().as_bytes()).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(&path).map_err(|e| LmfdbError::Io { path: path.clone(), source: e.error })?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::SourceTag;

    #[test]
    fn store_then_load_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path());
        let label: IsogenyClassLabel = "3.7.ak_bw_afv".parse().unwrap();
        assert!(cache.load(&label).unwrap().is_none());
        let rec = ClassFixture::from_label(&label, SourceTag::Live).unwrap();
        let path = cache.store(&rec).unwrap();
        assert!(path.ends_with("3.7/3.7.ak_bw_afv.txt"));
        let first = fs::read(&path).unwrap();
        let again = cache.load(&label).unwrap().unwrap();
        assert_eq!(again, rec);
        cache.store(&again).unwrap();
        assert_eq!(fs::read(&path).unwrap(), first);
        // only the final file remains in the directory
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
