use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use embedmine::encoding::{parse_dataset, Dataset, LabelDictionary, ParseOptions};

use crate::error::CliError;

pub fn load_dataset(path: &Path, allow_distinct_ids: bool) -> Result<Dataset, CliError> {
    let file = File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))
        .map_err(CliError::Other)?;
    let opts = ParseOptions { allow_distinct_ids };
    parse_dataset(BufReader::new(file), opts)
        .map_err(|e| CliError::Parse(anyhow::anyhow!("{}: {e}", path.display())))
}

pub fn load_dictionary(path: &Path) -> Result<LabelDictionary, CliError> {
    let file = File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))
        .map_err(CliError::Other)?;
    LabelDictionary::read(BufReader::new(file))
        .map_err(|e| CliError::Parse(anyhow::anyhow!("{}: {e}", path.display())))
}

/// Stdout, or a buffered file when a path is given.
pub fn sink(path: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p)
                .with_context(|| format!("cannot create {}", p.display()))
                .map_err(CliError::Other)?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn display_name(path: &Path) -> String {
    path.display().to_string()
}
