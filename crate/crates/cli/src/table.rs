//! CSV emission and the profile reader. Reals are written with 17
//! significant digits so every `f64` round-trips.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use ahext_core::geometry::{
    profile_level_mass, profile_level_mean_curvature, warped_scalar_curvature, ProfileCurve,
};

use crate::error::CliError;

pub const PROFILE_HEADER: [&str; 7] = ["s", "u", "u_prime", "u_double_prime", "R", "H", "hawking_mass"];

/// Cross-section dimension of every profile the CLI handles (3-manifolds).
pub const SPHERE_DIM: usize = 2;

pub fn real(x: f64) -> String {
    // + 0.0 folds −0 into 0
    format!("{:.16e}", x + 0.0)
}

/// `path` or stdout when `None`.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p).map_err(|e| CliError::io(p, e))?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub struct Table<W: Write> {
    writer: csv::Writer<W>,
}

impl<W: Write> Table<W> {
    pub fn new(out: W, header: &[&str]) -> Result<Self, CliError> {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        writer.write_record(header)?;
        Ok(Table { writer })
    }

    pub fn row(&mut self, values: &[f64]) -> Result<(), CliError> {
        self.writer.write_record(values.iter().map(|v| real(*v)))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.writer.flush().map_err(|e| CliError::Schema(format!("csv: {e}")))
    }
}

pub fn profile_row(f: f64, fp: f64, fpp: f64) -> Result<[f64; 6], CliError> {
    let r = warped_scalar_curvature(f, fp, fpp, SPHERE_DIM)?;
    Ok([f, fp, fpp, r, profile_level_mean_curvature(f, fp), profile_level_mass(f, fp)])
}

pub fn write_profile<W: Write>(out: W, p: &ProfileCurve<f64>) -> Result<(), CliError> {
    let mut table = Table::new(out, &PROFILE_HEADER)?;
    for i in 0..p.len() {
        let (f, fp, fpp) = p.sample(i)?;
        let mut values = vec![p.s()[i]];
        values.extend(profile_row(f, fp, fpp)?);
        table.row(&values)?;
    }
    table.finish()
}

/// A profile CSV as written by [`write_profile`], with the derived columns
/// kept for the consistency check.
pub struct ProfileTable {
    pub profile: ProfileCurve<f64>,
    pub derived: Vec<[f64; 3]>,
}

pub fn read_profile(path: &Path) -> Result<ProfileTable, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != PROFILE_HEADER {
        return Err(CliError::Schema(format!(
            "{}: expected header {}, got {}",
            path.display(),
            PROFILE_HEADER.join(","),
            header.join(",")
        )));
    }
    let mut columns: [Vec<f64>; 4] = Default::default();
    let mut derived = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let mut values = [0.0; 7];
        for (k, field) in record.iter().enumerate() {
            values[k] = field.trim().parse().map_err(|_| {
                CliError::Schema(format!("{}: row {}: bad number {field:?}", path.display(), line + 1))
            })?;
        }
        for k in 0..4 {
            columns[k].push(values[k]);
        }
        derived.push([values[4], values[5], values[6]]);
    }
    let [s, f, fp, fpp] = columns;
    let profile = ProfileCurve::new(s, f, fp, fpp, SPHERE_DIM)?;
    Ok(ProfileTable { profile, derived })
}
