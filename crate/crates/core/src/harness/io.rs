//! CSV formats: loss files (`t,dim,c1..cd`) and regret traces.
//!
//! Floats are written with 17 significant digits, which round-trips every
//! finite `f64` exactly.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

use super::experiment::RoundTrace;

/// Prediction columns are only written up to this dimension.
pub const MAX_PREDICTION_COLUMNS: usize = 16;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_losses<W: Write>(out: W, losses: &[Vec<f64>]) -> Result<()> {
    let dim = losses.first().map_or(0, Vec::len);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string(), "dim".to_string()];
    header.extend((1..=dim).map(|i| format!("c{i}")));
    w.write_record(&header)?;
    for (t, l) in losses.iter().enumerate() {
        if l.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: l.len() });
        }
        let mut row = vec![(t + 1).to_string(), dim.to_string()];
        row.extend(l.iter().map(|&x| fmt_f64(x)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_losses_file(path: &Path, losses: &[Vec<f64>]) -> Result<()> {
    write_losses(std::fs::File::create(path)?, losses)
}

pub fn parse_losses<R: std::io::Read>(input: R) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = r.headers()?.clone();
    let dim = header.len().checked_sub(2).ok_or_else(|| Error::Config("loss file header too short".into()))?;
    let ok = header.get(0) == Some("t")
        && header.get(1) == Some("dim")
        && (0..dim).all(|i| header.get(i + 2) == Some(format!("c{}", i + 1).as_str()));
    if !ok {
        return Err(Error::Config("loss file header must be t,dim,c1,...,cd".into()));
    }
    let mut losses = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let t: usize = rec[0].parse().map_err(|_| Error::Config(format!("loss file row {row}: bad t")))?;
        let d: usize = rec[1].parse().map_err(|_| Error::Config(format!("loss file row {row}: bad dim")))?;
        if t != row || d != dim {
            return Err(Error::Config(format!("loss file row {row}: expected t = {row}, dim = {dim}")));
        }
        let l = (0..dim)
            .map(|j| super::config::parse_f64("loss file", &rec[j + 2]))
            .collect::<Result<Vec<f64>>>()?;
        losses.push(l);
    }
    Ok(losses)
}

pub fn read_losses(path: &Path) -> Result<Vec<Vec<f64>>> {
    let f = std::fs::File::open(path).map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
    parse_losses(f)
}

pub fn write_trace<W: Write>(out: W, trace: &[RoundTrace], dim: usize) -> Result<()> {
    let with_w = dim <= MAX_PREDICTION_COLUMNS;
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> =
        ["t", "loss_norm", "inst_loss", "cum_loss", "regret", "scheme_scalar", "bound", "slack"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    if with_w {
        header.extend((1..=dim).map(|i| format!("w{i}")));
    }
    w.write_record(&header)?;
    for r in trace {
        let mut row = vec![r.t.to_string()];
        row.extend(
            [r.loss_dual_norm, r.inst_loss, r.cum_loss, r.regret, r.scheme_scalar, r.bound, r.bound - r.regret]
                .iter()
                .map(|&x| fmt_f64(x)),
        );
        if with_w {
            row.extend(r.prediction.iter().map(|&x| fmt_f64(x)));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace_file(path: &Path, trace: &[RoundTrace], dim: usize) -> Result<()> {
    write_trace(std::fs::File::create(path)?, trace, dim)
}
