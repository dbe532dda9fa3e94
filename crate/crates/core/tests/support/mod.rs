//! Shared helpers for the integration suites: the checked-in corpus and
//! its expectation headers.

pub mod gen;

use std::fs;
use std::path::{Path, PathBuf};

use lc_kernel::parse::parse_term;
use lc_kernel::typecheck::SystemFlavor;
use lc_kernel::{ProofTerm, Signature};

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub path: PathBuf,
    /// None means the file is an untyped reduction example.
    pub flavor: Option<SystemFlavor>,
    pub expected_type: Option<String>,
    pub expected_steps: Option<usize>,
    pub expected_normal: Option<String>,
    pub expected_witnesses: Option<Vec<String>>,
    pub source: String,
    pub term: ProofTerm,
}

impl CorpusEntry {
    pub fn is_typed(&self) -> bool {
        self.flavor.is_some()
    }
}

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn load_corpus() -> Vec<CorpusEntry> {
    let sig = Signature::standard();
    let root = corpus_dir();
    let mut files = Vec::new();
    collect_lct_files(&root, &mut files);
    files.sort();
    files
        .into_iter()
        .map(|path| load_entry(&path, &sig))
        .collect()
}

fn collect_lct_files(dir: &Path, out: &mut Vec<PathBuf>) {
    for entry in fs::read_dir(dir).expect("corpus directory") {
        let path = entry.expect("dir entry").path();
        if path.is_dir() {
            collect_lct_files(&path, out);
        } else if path.extension().map(|e| e == "lct").unwrap_or(false) {
            out.push(path);
        }
    }
}

fn load_entry(path: &Path, sig: &Signature) -> CorpusEntry {
    let source = fs::read_to_string(path).expect("readable corpus file");
    let mut flavor = None;
    let mut expected_type = None;
    let mut expected_steps = None;
    let mut expected_normal = None;
    let mut expected_witnesses = None;
    for line in source.lines() {
        let Some(rest) = line.strip_prefix("-- ") else {
            continue;
        };
        let Some((key, value)) = rest.split_once(':') else {
            continue;
        };
        let value = value.trim();
        match key.trim() {
            "flavor" => {
                flavor = match value {
                    "untyped" => None,
                    f => Some(f.parse::<SystemFlavor>().expect("flavor header")),
                }
            }
            "type" => expected_type = Some(value.to_owned()),
            "steps" => expected_steps = Some(value.parse().expect("steps header")),
            "normal" => expected_normal = Some(value.to_owned()),
            "witnesses" => {
                expected_witnesses =
                    Some(value.split(',').map(|w| w.trim().to_owned()).collect())
            }
            _ => {}
        }
    }
    let term = parse_term(&source, sig)
        .unwrap_or_else(|e| panic!("corpus file {} does not parse: {e}", path.display()));
    CorpusEntry {
        name: path
            .strip_prefix(corpus_dir())
            .unwrap_or(path)
            .display()
            .to_string(),
        path: path.to_owned(),
        flavor,
        expected_type,
        expected_steps,
        expected_normal,
        expected_witnesses,
        source,
        term,
    }
}
