//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::batch::{self, Execution};
use crate::cubefile::{self, CubeFileError};
use crate::curve::{self, Depth, HilbertIndex, Point3, STEP_TABLES};
use crate::error::HilbertError;
use crate::lsystem::{self, MAX_WALK_DEPTH};
use crate::ordering::{self, Layout};
use crate::verify::{self, MAX_VERIFY_DEPTH};

pub const MAX_PATH_DEPTH: u8 = 10;
pub const MAX_PARTITION_DEPTH: u8 = 7;

const PATH_CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Whitespace-separated values, one record per line.
    #[default]
    Plain,
    /// Header row, then comma-separated values.
    Csv,
    /// One JSON object per line.
    Jsonl,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum PathSource {
    /// Digit-by-digit decoding of every index.
    #[default]
    Decode,
    /// Turtle walk of the L-system expansion.
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    ToHilbert,
    ToRowMajor,
}

#[derive(Debug, Parser)]
#[command(
    name = "hilbert3d",
    version,
    about = "3D Hilbert curve encoding, decoding and data reordering"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map a lattice point to its curve index.
    Encode {
        x: u64,
        y: u64,
        z: u64,
        #[arg(long, short = 'r')]
        depth: u64,
        /// Print the index in octal, one digit per level.
        #[arg(long)]
        octal: bool,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Map a curve index to its lattice point.
    Decode {
        h: u64,
        #[arg(long, short = 'r')]
        depth: u64,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Print every cell of the curve in order as `h x y z`.
    Path {
        #[arg(long, short = 'r')]
        depth: u64,
        #[arg(long, value_enum, default_value_t)]
        source: PathSource,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Run the exhaustive self-checks at a small depth.
    Verify {
        #[arg(long, short = 'r')]
        depth: u64,
    },
    /// Convert a cube file between row-major and curve order.
    Reorder {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
    },
    /// Split the curve into balanced contiguous parts and report locality.
    Partition {
        #[arg(long, short = 'r')]
        depth: u64,
        #[arg(long, short = 'p')]
        parts: u64,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(HilbertError),
    File(PathBuf, CubeFileError),
    Io(io::Error),
    VerificationFailed,
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed => 1,
            CliError::Io(e) if e.kind() == io::ErrorKind::BrokenPipe => 0,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Domain(e) => e.fmt(f),
            CliError::File(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::VerificationFailed => f.write_str("verification failed"),
        }
    }
}

impl From<HilbertError> for CliError {
    fn from(e: HilbertError) -> Self {
        CliError::Domain(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

enum Value {
    Int(u64),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => v.fmt(f),
            Value::Text(s) => f.write_str(s),
        }
    }
}

/// Writes records in the selected format.
struct Emitter<'a> {
    out: &'a mut dyn Write,
    format: OutputFormat,
    header_done: bool,
}

impl<'a> Emitter<'a> {
    fn new(out: &'a mut dyn Write, format: OutputFormat) -> Self {
        Emitter {
            out,
            format,
            header_done: false,
        }
    }

    fn record(&mut self, fields: &[(&str, Value)]) -> io::Result<()> {
        match self.format {
            OutputFormat::Plain => {
                let line: Vec<String> = fields.iter().map(|(_, v)| v.to_string()).collect();
                writeln!(self.out, "{}", line.join(" "))
            }
            OutputFormat::Csv => {
                if !self.header_done {
                    let names: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
                    writeln!(self.out, "{}", names.join(","))?;
                    self.header_done = true;
                }
                let line: Vec<String> = fields.iter().map(|(_, v)| v.to_string()).collect();
                writeln!(self.out, "{}", line.join(","))
            }
            OutputFormat::Jsonl => {
                let body: Vec<String> = fields
                    .iter()
                    .map(|(k, v)| {
                        let v = match v {
                            Value::Int(i) => serde_json::Value::from(*i),
                            Value::Text(s) => serde_json::Value::from(s.as_str()),
                        };
                        format!("{}:{v}", serde_json::Value::from(*k))
                    })
                    .collect();
                writeln!(self.out, "{{{}}}", body.join(","))
            }
        }
    }

    fn point(&mut self, h: u64, p: Point3) -> io::Result<()> {
        self.record(&[
            ("h", Value::Int(h)),
            ("x", Value::Int(p.x as u64)),
            ("y", Value::Int(p.y as u64)),
            ("z", Value::Int(p.z as u64)),
        ])
    }
}

fn depth_at_most(depth: u64, max: u8, what: &str) -> Result<Depth, CliError> {
    let d = Depth::new(depth)?;
    if d.get() > max {
        return Err(CliError::Usage(format!(
            "depth {depth} exceeds the limit {max} for {what}"
        )));
    }
    Ok(d)
}

fn point_arg(x: u64, y: u64, z: u64, depth: Depth) -> Result<Point3, CliError> {
    let bound = depth.side() as u64;
    for (axis, value) in [('x', x), ('y', y), ('z', z)] {
        if value >= bound {
            return Err(HilbertError::CoordinateOutOfRange { axis, value, bound }.into());
        }
    }
    Ok(Point3::new(x as u32, y as u32, z as u32))
}

fn cmd_path(depth: Depth, source: PathSource, em: &mut Emitter<'_>) -> Result<(), CliError> {
    match source {
        PathSource::Decode => {
            let total = depth.cells();
            let mut start = 0;
            while start < total {
                let end = (start + PATH_CHUNK).min(total);
                let cells = batch::decode_range(start..end, depth, Execution::Parallel)?;
                for (h, p) in (start..end).zip(cells) {
                    em.point(h, p)?;
                }
                start = end;
            }
        }
        PathSource::Oracle => {
            for (h, p) in lsystem::Walk::new(depth.get())?.enumerate() {
                em.point(h as u64, p)?;
            }
        }
    }
    Ok(())
}

fn cmd_reorder(input: PathBuf, output: PathBuf, direction: Direction) -> Result<(), CliError> {
    let cube = cubefile::read_file(&input).map_err(|e| CliError::File(input.clone(), e))?;
    let converted = match (direction, cube.layout()) {
        (Direction::ToHilbert, Layout::RowMajor) => {
            ordering::to_hilbert_order(&cube, Execution::Parallel)?
        }
        (Direction::ToRowMajor, Layout::Hilbert) => {
            ordering::from_hilbert_order(&cube, Execution::Parallel)?
        }
        (_, layout) => {
            return Err(CliError::Usage(format!(
                "{}: file is already in {layout} layout",
                input.display()
            )))
        }
    };
    cubefile::write_file(&output, &converted).map_err(|e| CliError::File(output, e.into()))?;
    Ok(())
}

fn cmd_partition(depth: Depth, parts: u64, em: &mut Emitter<'_>) -> Result<(), CliError> {
    let partition = ordering::partition(depth, parts)?;
    for (i, range) in partition.parts().enumerate() {
        let s = ordering::partition_stats(depth, range, Execution::Parallel)?;
        em.record(&[
            ("part", Value::Int(i as u64)),
            ("h_begin", Value::Int(s.begin)),
            ("h_end", Value::Int(s.end)),
            ("count", Value::Int(s.count)),
            ("bbox_volume", Value::Int(s.bbox_volume)),
            ("surface", Value::Int(s.surface)),
        ])?;
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Encode {
            x,
            y,
            z,
            depth,
            octal,
            format,
        } => {
            let depth = Depth::new(depth)?;
            let h = curve::encode(point_arg(x, y, z, depth)?, depth)?;
            let value = if octal {
                Value::Text(format!("{h:o}"))
            } else {
                Value::Int(h.0)
            };
            Emitter::new(out, format).record(&[("h", value)])?;
        }
        Command::Decode { h, depth, format } => {
            let depth = Depth::new(depth)?;
            let p = curve::decode(HilbertIndex(h), depth)?;
            let mut em = Emitter::new(out, format);
            em.record(&[
                ("x", Value::Int(p.x as u64)),
                ("y", Value::Int(p.y as u64)),
                ("z", Value::Int(p.z as u64)),
            ])?;
        }
        Command::Path {
            depth,
            source,
            format,
        } => {
            let depth = match source {
                PathSource::Decode => depth_at_most(depth, MAX_PATH_DEPTH, "the decode source")?,
                PathSource::Oracle => depth_at_most(depth, MAX_WALK_DEPTH, "the oracle source")?,
            };
            cmd_path(depth, source, &mut Emitter::new(out, format))?;
        }
        Command::Verify { depth } => {
            let depth = depth_at_most(depth, MAX_VERIFY_DEPTH, "exhaustive verification")?;
            let report = verify::run(&STEP_TABLES, depth, Execution::Parallel);
            writeln!(out, "{report}")?;
            if !report.passed() {
                return Err(CliError::VerificationFailed);
            }
        }
        Command::Reorder {
            input,
            output,
            direction,
        } => cmd_reorder(input, output, direction)?,
        Command::Partition {
            depth,
            parts,
            format,
        } => {
            let depth = depth_at_most(depth, MAX_PARTITION_DEPTH, "partition statistics")?;
            cmd_partition(depth, parts, &mut Emitter::new(out, format))?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return e.exit_code();
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            if !matches!(&e, CliError::Io(io) if io.kind() == io::ErrorKind::BrokenPipe) {
                let _ = writeln!(err, "error: {e}");
            }
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("hilbert3d").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn encode_formats() {
        assert_eq!(call(&["encode", "3", "3", "1", "--depth", "2"]).1, "51\n");
        assert_eq!(
            call(&["encode", "3", "3", "1", "--depth", "2", "--octal"]).1,
            "63\n"
        );
        assert_eq!(call(&["encode", "0", "0", "0", "--depth", "5"]).1, "0\n");
        assert_eq!(
            call(&["encode", "3", "3", "1", "-r", "2", "--format", "csv"]).1,
            "h\n51\n"
        );
        assert_eq!(
            call(&["encode", "3", "3", "1", "-r", "2", "--format", "jsonl", "--octal"]).1,
            "{\"h\":\"63\"}\n"
        );
    }

    #[test]
    fn decode_formats() {
        assert_eq!(call(&["decode", "37", "--depth", "2"]).1, "0 3 2\n");
        assert_eq!(call(&["decode", "0", "--depth", "3"]).1, "0 0 0\n");
        assert_eq!(call(&["decode", "63", "--depth", "2"]).1, "0 3 0\n");
        assert_eq!(
            call(&["decode", "37", "-r", "2", "--format", "jsonl"]).1,
            "{\"x\":0,\"y\":3,\"z\":2}\n"
        );
    }

    #[test]
    fn input_errors_exit_two() {
        let (code, out, err) = call(&["encode", "4", "0", "0", "--depth", "2"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.contains("x = 4 is out of range [0, 4)"), "{err}");

        let (code, _, err) = call(&["decode", "64", "--depth", "2"]);
        assert_eq!(code, 2);
        assert!(err.contains("[0, 64)"), "{err}");

        assert_eq!(call(&["decode", "0", "--depth", "0"]).0, 2);
        assert_eq!(call(&["decode", "0", "--depth", "21"]).0, 2);
        assert_eq!(call(&["encode", "-1", "0", "0", "--depth", "2"]).0, 2);
        assert_eq!(call(&["encode", "x", "0", "0", "--depth", "2"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["path", "--depth", "8", "--source", "oracle"]).0, 2);
        assert_eq!(call(&["path", "--depth", "11"]).0, 2);
        assert_eq!(call(&["verify", "--depth", "5"]).0, 2);
        assert_eq!(call(&["partition", "--depth", "1", "--parts", "9"]).0, 2);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("encode"));
    }

    #[test]
    fn path_sources_agree() {
        let (c1, decode, _) = call(&["path", "--depth", "2"]);
        let (c2, oracle, _) = call(&["path", "--depth", "2", "--source", "oracle"]);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(decode, oracle);
        let lines: Vec<&str> = decode.lines().collect();
        assert_eq!(lines.len(), 64);
        assert_eq!(lines[0], "0 0 0 0");
        assert_eq!(lines[37], "37 0 3 2");
        let (_, csv, _) = call(&["path", "--depth", "1", "--format", "csv"]);
        assert!(csv.starts_with("h,x,y,z\n0,0,0,0\n1,1,0,0\n"));
    }

    #[test]
    fn verify_small_depths() {
        for r in ["1", "2"] {
            let (code, out, _) = call(&["verify", "--depth", r]);
            assert_eq!(code, 0);
            assert!(out.contains("all checks passed"));
        }
    }

    #[test]
    fn partition_output() {
        let (code, out, _) = call(&["partition", "--depth", "1", "--parts", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out, "0 0 4 4 4 16\n1 4 8 4 4 16\n");
        let (_, out, _) = call(&["partition", "-r", "2", "-p", "8", "--format", "csv"]);
        let mut lines = out.lines();
        assert_eq!(
            lines.next(),
            Some("part,h_begin,h_end,count,bbox_volume,surface")
        );
        assert_eq!(lines.next(), Some("0,0,8,8,8,24"));
    }
}
