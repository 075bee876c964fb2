//! On-disk form of a family: one matrix text file per generator and a JSON
//! manifest next to them.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{FamilyError, GenRef, IdempotentFamily};
use crate::numerics::text::{format_matrix, parse_matrix};
use crate::numerics::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub kind: String,
    pub n: usize,
    /// `[re, im]`, or null when the family has no sum relation.
    pub lambda: Option<[f64; 2]>,
    pub dim: usize,
    pub interior: Option<Vec<usize>>,
    /// Generator files, relative to the manifest's directory.
    pub files: Vec<String>,
    #[serde(default)]
    pub params: Value,
    #[serde(default)]
    pub zero_products: Vec<(GenRef, GenRef)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builder: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub substitution_dim: Option<usize>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub big_n: Option<usize>,
}

impl Manifest {
    /// Manifest fields for `fam`, with an empty file list.
    pub fn describe(fam: &IdempotentFamily) -> Self {
        Manifest {
            kind: fam.kind.clone(),
            n: fam.n(),
            lambda: fam.lambda.map(|z| [z.re, z.im]),
            dim: fam.dim(),
            interior: fam.interior.clone(),
            files: Vec::new(),
            params: fam.params.clone(),
            zero_products: fam.zero_products.clone(),
            builder: None,
            substitution_dim: None,
            big_n: None,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> FamilyError + '_ {
    move |source| FamilyError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes `fam` with a default manifest at `path`.
pub fn save_family(fam: &IdempotentFamily, path: &Path) -> Result<Manifest, FamilyError> {
    save_family_with(fam, path, Manifest::describe(fam))
}

/// Writes the generators as `<stem>.q<i>.txt` beside `path` and the manifest
/// (with `files` filled in) at `path`.
pub fn save_family_with(
    fam: &IdempotentFamily,
    path: &Path,
    mut manifest: Manifest,
) -> Result<Manifest, FamilyError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| FamilyError::Manifest(format!("no file stem in {}", path.display())))?;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    manifest.files.clear();
    for (i, m) in fam.q.iter().enumerate() {
        let name = format!("{stem}.q{}.txt", i + 1);
        let file = dir.join(&name);
        fs::write(&file, format_matrix(m)).map_err(io_err(&file))?;
        manifest.files.push(name);
    }
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| FamilyError::Manifest(e.to_string()))?;
    fs::write(path, text + "\n").map_err(io_err(path))?;
    Ok(manifest)
}

/// Reads a manifest and its generator files.
pub fn load_family(path: &Path) -> Result<(IdempotentFamily, Manifest), FamilyError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let manifest: Manifest =
        serde_json::from_str(&text).map_err(|e| FamilyError::Manifest(e.to_string()))?;
    if manifest.files.len() != manifest.n {
        return Err(FamilyError::Manifest(format!(
            "n = {} but {} files listed",
            manifest.n,
            manifest.files.len()
        )));
    }
    let dir: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut q = Vec::with_capacity(manifest.n);
    for name in &manifest.files {
        let file = dir.join(name);
        let body = fs::read_to_string(&file).map_err(io_err(&file))?;
        q.push(parse_matrix(&body)?);
    }
    let mut fam = IdempotentFamily::from_parts(
        manifest.kind.clone(),
        manifest.params.clone(),
        manifest.lambda.map(|[a, b]| C64::new(a, b)),
        q,
    )?;
    if fam.dim() != manifest.dim {
        return Err(FamilyError::Manifest(format!(
            "dim = {} but matrices are {}x{}",
            manifest.dim,
            fam.dim(),
            fam.dim()
        )));
    }
    if let Some(ix) = &manifest.interior {
        if let Some(&bad) = ix.iter().find(|&&i| i >= manifest.dim) {
            return Err(FamilyError::Manifest(format!(
                "interior index {bad} out of range"
            )));
        }
        fam.interior = Some(ix.clone());
    }
    fam.zero_products = manifest.zero_products.clone();
    Ok((fam, manifest))
}
