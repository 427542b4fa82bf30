//! On-disk input formats. Everything is JSON with complex numbers spelled
//! as `[re, im]` pairs so fixtures stay diffable.

use std::fmt;
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use woven_core::sis::SpectrumSamples;
use woven_core::{C64, CMatrix};

/// A dense square matrix: `entries` is row-major with `n * n` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub n: usize,
    pub entries: Vec<[f64; 2]>,
}

/// A coordinate vector with `n` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub n: usize,
    pub entries: Vec<[f64; 2]>,
}

/// Spectrum samples: `shelves[s]` holds shelf `s - k_max` with one pair
/// per grid point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub grid_size: usize,
    pub k_max: usize,
    pub shelves: Vec<Vec<[f64; 2]>>,
}

/// A file-loading or validation failure, tagged with the offending path.
#[derive(Debug)]
pub struct FileError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for FileError {}

fn fail<T>(path: &Path, message: impl Into<String>) -> Result<T, FileError> {
    Err(FileError {
        path: path.display().to_string(),
        message: message.into(),
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, FileError> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(path, e.to_string()),
    };
    match serde_json::from_str(&text) {
        Ok(v) => Ok(v),
        Err(e) => fail(path, e.to_string()),
    }
}

fn check_pairs(path: &Path, what: &str, entries: &[[f64; 2]]) -> Result<(), FileError> {
    for (i, [re, im]) in entries.iter().enumerate() {
        if !re.is_finite() || !im.is_finite() {
            return fail(path, format!("{what} entry {i} is not finite"));
        }
    }
    Ok(())
}

pub fn load_matrix(path: &Path) -> Result<CMatrix, FileError> {
    let file: MatrixFile = read_json(path)?;
    if file.entries.len() != file.n * file.n {
        return fail(
            path,
            format!(
                "expected {} entries for a {}x{} matrix, found {}",
                file.n * file.n,
                file.n,
                file.n,
                file.entries.len()
            ),
        );
    }
    check_pairs(path, "matrix", &file.entries)?;
    let n = file.n;
    Ok(CMatrix::from_fn(n, n, |i, j| {
        let [re, im] = file.entries[i * n + j];
        Complex::new(re, im)
    }))
}

pub fn load_vector(path: &Path) -> Result<Vec<C64>, FileError> {
    let file: VectorFile = read_json(path)?;
    if file.entries.len() != file.n {
        return fail(
            path,
            format!(
                "expected {} entries, found {}",
                file.n,
                file.entries.len()
            ),
        );
    }
    check_pairs(path, "vector", &file.entries)?;
    Ok(file
        .entries
        .iter()
        .map(|&[re, im]| Complex::new(re, im))
        .collect())
}

pub fn load_spectrum(path: &Path) -> Result<SpectrumSamples, FileError> {
    let file: SpectrumFile = read_json(path)?;
    let shelves = 2 * file.k_max + 1;
    if file.shelves.len() != shelves {
        return fail(
            path,
            format!(
                "expected {} shelves for k_max {}, found {}",
                shelves,
                file.k_max,
                file.shelves.len()
            ),
        );
    }
    let mut values = Vec::with_capacity(shelves);
    for (s, shelf) in file.shelves.iter().enumerate() {
        if shelf.len() != file.grid_size {
            return fail(
                path,
                format!(
                    "shelf {s} has {} samples, grid size is {}",
                    shelf.len(),
                    file.grid_size
                ),
            );
        }
        check_pairs(path, "spectrum", shelf)?;
        values.push(
            shelf
                .iter()
                .map(|&[re, im]| Complex::new(re, im))
                .collect(),
        );
    }
    match SpectrumSamples::new(file.grid_size, file.k_max, values) {
        Ok(s) => Ok(s),
        Err(e) => fail(path, e.to_string()),
    }
}
