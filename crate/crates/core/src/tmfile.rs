//! Machine files: one `name: <rule-index list>` per line, `#` comments.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::codec::{self, CodecError};
use crate::machine::Tm;

#[derive(Debug, Error)]
pub enum TmFileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: missing ':' between name and rule list")]
    MissingColon { line: usize },
    #[error("line {line}: empty machine name")]
    EmptyName { line: usize },
    #[error("line {line}: duplicate machine name {name:?}")]
    DuplicateName { line: usize, name: String },
    #[error("line {line}: {source}")]
    Codec {
        line: usize,
        #[source]
        source: CodecError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedMachine {
    pub name: String,
    pub machine: Tm,
    /// 1-based line number in the source text.
    pub line: usize,
}

pub fn parse(text: &str) -> Result<Vec<NamedMachine>, TmFileError> {
    let mut out: Vec<NamedMachine> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if content.is_empty() {
            continue;
        }
        let (name, list) = content
            .split_once(':')
            .ok_or(TmFileError::MissingColon { line })?;
        let name = name.trim();
        if name.is_empty() {
            return Err(TmFileError::EmptyName { line });
        }
        if out.iter().any(|m| m.name == name) {
            return Err(TmFileError::DuplicateName {
                line,
                name: name.to_string(),
            });
        }
        let machine = codec::decode(list).map_err(|source| TmFileError::Codec { line, source })?;
        out.push(NamedMachine {
            name: name.to_string(),
            machine,
            line,
        });
    }
    Ok(out)
}

pub fn load(path: impl AsRef<Path>) -> Result<Vec<NamedMachine>, TmFileError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| TmFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

pub fn render(machines: &[NamedMachine]) -> String {
    machines
        .iter()
        .map(|m| format!("{}: {}\n", m.name, codec::encode(&m.machine)))
        .collect()
}
