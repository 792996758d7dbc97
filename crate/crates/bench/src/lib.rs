//! Fixture loading shared by the benchmarks.

use std::path::{Path, PathBuf};

use polyrep_core::{ChartSpec, Dataset};

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data")
}

/// Parses a spec from the core fixture directory and loads its data.
pub fn fixture(name: &str) -> (ChartSpec, Dataset) {
    let dir = data_dir();
    let bytes = std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    let spec = ChartSpec::parse(&bytes).expect("fixture spec parses");
    let data = spec.load_data(Some(&dir)).expect("fixture data loads");
    (spec, data)
}
