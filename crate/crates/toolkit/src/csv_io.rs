//! CSV tables with a header row, `.` decimals and `inf` / `-inf` literals.

use std::io::{Read, Write};

use smp_core::characteristic::CharacteristicTable;
use smp_core::functions::{IncreasingFn, MonotoneTable};
use smp_core::radial::RadialFunction;

use crate::ToolError;

fn csv_err(e: csv::Error) -> ToolError {
    ToolError::Io(e.to_string())
}

/// Shortest round-trip decimal; `f64`'s `Display` already writes `inf` / `-inf`.
pub fn fmt(v: f64) -> String {
    format!("{v}")
}

fn parse(s: &str, line: usize) -> Result<f64, ToolError> {
    s.trim().parse::<f64>().map_err(|_| ToolError::Input(format!("line {line}: '{s}' is not a number")))
}

fn write_rows<W: Write>(out: W, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<(), ToolError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    w.flush().map_err(|e| ToolError::Io(e.to_string()))
}

fn read_columns<R: Read>(input: R, header: &[&str]) -> Result<Vec<Vec<f64>>, ToolError> {
    let mut r = csv::Reader::from_reader(input);
    let found: Vec<String> = r.headers().map_err(csv_err)?.iter().map(|h| h.trim().to_string()).collect();
    let idx: Vec<usize> = header
        .iter()
        .map(|h| found.iter().position(|f| f == h).ok_or_else(|| ToolError::Input(format!("missing column '{h}'"))))
        .collect::<Result<_, _>>()?;
    let mut cols = vec![Vec::new(); header.len()];
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        for (c, &i) in idx.iter().enumerate() {
            let cell = rec.get(i).ok_or_else(|| ToolError::Input(format!("line {}: short row", line + 2)))?;
            cols[c].push(parse(cell, line + 2)?);
        }
    }
    Ok(cols)
}

/// Columns `lambda,f`.
pub fn write_char_table<W: Write>(out: W, t: &CharacteristicTable) -> Result<(), ToolError> {
    write_rows(out, &["lambda", "f"], t.lambdas.iter().zip(&t.values).map(|(l, v)| vec![fmt(*l), fmt(*v)]))
}

/// Reads `lambda,f` into a tabulated increasing function.
pub fn read_f_table<R: Read>(input: R) -> Result<IncreasingFn, ToolError> {
    let mut cols = read_columns(input, &["lambda", "f"])?;
    let ys = cols.pop().unwrap_or_default();
    let xs = cols.pop().unwrap_or_default();
    Ok(IncreasingFn::Table(MonotoneTable::increasing(xs, ys)?))
}

/// Columns `t,psi,psi1,psi2,flag`.
pub fn write_radial<W: Write>(out: W, rf: &RadialFunction) -> Result<(), ToolError> {
    write_rows(
        out,
        &["t", "psi", "psi1", "psi2", "flag"],
        (0..rf.len()).map(|i| {
            vec![fmt(rf.ts[i]), fmt(rf.psi[i]), fmt(rf.psi1[i]), fmt(rf.psi2[i]), (rf.flags[i] as u8).to_string()]
        }),
    )
}

pub fn read_radial<R: Read>(input: R) -> Result<RadialFunction, ToolError> {
    let c = read_columns(input, &["t", "psi", "psi1", "psi2", "flag"])?;
    let flags = c[4].iter().map(|&f| f != 0.0).collect();
    Ok(RadialFunction::with_flags(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone(), flags, None)?)
}

/// Two named columns.
pub fn write_pairs<W: Write>(out: W, names: [&str; 2], xs: &[f64], ys: &[f64]) -> Result<(), ToolError> {
    write_rows(out, &names, xs.iter().zip(ys).map(|(x, y)| vec![fmt(*x), fmt(*y)]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinities_round_trip() {
        let mut buf = Vec::new();
        write_pairs(&mut buf, ["lambda", "f"], &[0.0, 1.0, 2.0], &[0.0, 0.5, f64::INFINITY]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text, "lambda,f\n0,0\n1,0.5\n2,inf\n");
        match read_f_table(buf.as_slice()).unwrap() {
            IncreasingFn::Table(t) => assert_eq!(t.ys, vec![0.0, 0.5, f64::INFINITY]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_cells_are_input_errors() {
        let text = "lambda,f\n0,zero\n";
        assert!(matches!(read_f_table(text.as_bytes()), Err(ToolError::Input(_))));
        assert!(matches!(read_f_table("x,y\n1,2\n".as_bytes()), Err(ToolError::Input(_))));
    }
}
