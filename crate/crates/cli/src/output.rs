use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::CliResult;

/// Single writer for one run's artifacts.
pub(crate) struct Output {
    dir: PathBuf,
    formats: Vec<Format>,
    artifacts: Vec<String>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    core_version: &'static str,
    command_line: Vec<String>,
    config: &'a RunConfig,
    seeds: Vec<u64>,
    threads: usize,
    artifacts: &'a [String],
    wall_time_seconds: f64,
    timestamp_unix: u64,
}

impl Output {
    pub(crate) fn new(cfg: &RunConfig) -> CliResult<Self> {
        std::fs::create_dir_all(&cfg.out)?;
        Ok(Output {
            dir: cfg.out.clone(),
            formats: cfg.formats.clone(),
            artifacts: Vec::new(),
        })
    }

    fn create(&mut self, file: String) -> CliResult<BufWriter<File>> {
        let w = BufWriter::new(File::create(self.dir.join(&file))?);
        self.artifacts.push(file);
        Ok(w)
    }

    pub(crate) fn csv<F>(&mut self, name: &str, write: F) -> CliResult<()>
    where
        F: FnOnce(&mut BufWriter<File>) -> eberlein_core::Result<()>,
    {
        if self.formats.contains(&Format::Csv) {
            let mut w = self.create(format!("{name}.csv"))?;
            write(&mut w)?;
            w.flush()?;
        }
        Ok(())
    }

    pub(crate) fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let text = serde_json::to_string_pretty(value).map_err(eberlein_core::Error::from)?;
        self.json_raw(name, &text)
    }

    pub(crate) fn json_raw(&mut self, name: &str, text: &str) -> CliResult<()> {
        if self.formats.contains(&Format::Json) {
            let mut w = self.create(format!("{name}.json"))?;
            writeln!(w, "{text}")?;
            w.flush()?;
        }
        Ok(())
    }

    /// Gnuplot script over the CSV of the same name.
    pub(crate) fn gnuplot(&mut self, name: &str, body: &str) -> CliResult<()> {
        if self.formats.contains(&Format::Gnuplot) && self.formats.contains(&Format::Csv) {
            let mut w = self.create(format!("{name}.gp"))?;
            writeln!(w, "set datafile separator ','")?;
            writeln!(w, "set key autotitle columnhead")?;
            writeln!(w, "{body}")?;
            w.flush()?;
        }
        Ok(())
    }

    pub(crate) fn finish(
        mut self,
        cfg: &RunConfig,
        command_line: Vec<String>,
        seeds: Vec<u64>,
        wall_time_seconds: f64,
    ) -> CliResult<()> {
        let mut w = self.create("config.txt".into())?;
        w.write_all(cfg.to_kv().as_bytes())?;
        w.flush()?;
        self.artifacts.push("manifest.json".into());
        let manifest = Manifest {
            tool: "eberlein",
            version: env!("CARGO_PKG_VERSION"),
            core_version: eberlein_core::VERSION,
            command_line,
            config: cfg,
            seeds,
            threads: rayon::current_num_threads(),
            artifacts: &self.artifacts,
            wall_time_seconds,
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let text = serde_json::to_string_pretty(&manifest).map_err(eberlein_core::Error::from)?;
        std::fs::write(self.dir.join("manifest.json"), text + "\n")?;
        Ok(())
    }
}
