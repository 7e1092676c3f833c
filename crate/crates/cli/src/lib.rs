//! Scenario-driven front end for `composite-probe`: verify a trajectory,
//! synthesize a design, simulate, bound, recover, and reproduce the
//! reference figures as CSV (optionally SVG).

pub mod commands;
pub mod error;
pub mod figures;
pub mod scenario;
pub mod table;

use std::path::Path;

pub use commands::{Artifact, Payload, Report};
pub use error::{CliError, CliResult};
pub use figures::{Figure, FigureRegistry, RunOptions};
pub use scenario::Scenario;
pub use table::Table;

/// Writes every artifact under `out`, plus an SVG next to each table when
/// `svg` is set. Returns the paths written.
pub fn write_report(report: &Report, out: &Path, svg: bool) -> CliResult<Vec<std::path::PathBuf>> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    std::fs::create_dir_all(out).map_err(io(out))?;
    let mut written = Vec::new();
    for a in &report.artifacts {
        let path = out.join(&a.file);
        std::fs::write(&path, a.contents()).map_err(io(&path))?;
        written.push(path);
        if let (true, Payload::Table(t)) = (svg, &a.payload) {
            let path = out.join(Path::new(&a.file).with_extension("svg"));
            std::fs::write(&path, t.to_svg(&a.title)).map_err(io(&path))?;
            written.push(path);
        }
    }
    Ok(written)
}
