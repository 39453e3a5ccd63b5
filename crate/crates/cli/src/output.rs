//! Output directory handling. Files contain no timestamps so reruns with the
//! same config and seed are byte-identical.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::Format;

pub struct Sink {
    dir: PathBuf,
    csv: bool,
    json: bool,
    pub written: Vec<PathBuf>,
}

impl Sink {
    pub fn new(dir: &Path, formats: &[Format]) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            csv: formats.contains(&Format::Csv),
            json: formats.contains(&Format::Json),
            written: Vec::new(),
        })
    }

    /// Writes `name` through `f` when CSV output is enabled.
    pub fn csv(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>,
    ) -> io::Result<()> {
        if !self.csv {
            return Ok(());
        }
        let mut buf = Vec::new();
        f(&mut buf)?;
        self.put(name, &buf)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> io::Result<()> {
        if !self.json {
            return Ok(());
        }
        let mut buf = serde_json::to_vec_pretty(value).map_err(io::Error::other)?;
        buf.push(b'\n');
        self.put(name, &buf)
    }

    fn put(&mut self, name: &str, bytes: &[u8]) -> io::Result<()> {
        let path = self.dir.join(name);
        fs::File::create(&path)?.write_all(bytes)?;
        self.written.push(path);
        Ok(())
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("summaries contain only finite numbers and strings")
}
