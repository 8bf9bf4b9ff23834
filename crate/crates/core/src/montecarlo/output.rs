//! JSON-lines and CSV result writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{PointResult, SweepHeader};

/// One line of a results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "lowercase")]
pub enum Record {
    Header(SweepHeader),
    Point(PointResult),
}

/// Receives sweep output as it is produced.
pub trait SweepSink {
    fn header(&mut self, header: &SweepHeader) -> io::Result<()>;
    fn point(&mut self, point: &PointResult) -> io::Result<()>;
}

impl SweepSink for () {
    fn header(&mut self, _: &SweepHeader) -> io::Result<()> {
        Ok(())
    }

    fn point(&mut self, _: &PointResult) -> io::Result<()> {
        Ok(())
    }
}

pub const CSV_HEADER: &str = "snr_db,ber,fer,frames,mean_iters";

/// Writes a JSONL stream and a CSV table side by side, flushing after every
/// point so an interrupted sweep keeps its completed prefix.
pub struct JsonlCsvSink<J: Write, C: Write> {
    jsonl: J,
    csv: C,
}

pub type FileSink = JsonlCsvSink<BufWriter<File>, BufWriter<File>>;

impl<J: Write, C: Write> JsonlCsvSink<J, C> {
    pub fn new(jsonl: J, csv: C) -> Self {
        JsonlCsvSink { jsonl, csv }
    }

    pub fn into_inner(self) -> (J, C) {
        (self.jsonl, self.csv)
    }
}

impl FileSink {
    pub fn create(jsonl: &Path, csv: &Path) -> io::Result<Self> {
        Ok(JsonlCsvSink::new(
            BufWriter::new(File::create(jsonl)?),
            BufWriter::new(File::create(csv)?),
        ))
    }
}

impl<J: Write, C: Write> SweepSink for JsonlCsvSink<J, C> {
    fn header(&mut self, header: &SweepHeader) -> io::Result<()> {
        write_record(&mut self.jsonl, &Record::Header(header.clone()))?;
        writeln!(self.csv, "{CSV_HEADER}")?;
        self.csv.flush()
    }

    fn point(&mut self, point: &PointResult) -> io::Result<()> {
        write_record(&mut self.jsonl, &Record::Point(point.clone()))?;
        writeln!(self.csv, "{}", csv_row(point))?;
        self.csv.flush()
    }
}

fn write_record(out: &mut impl Write, record: &Record) -> io::Result<()> {
    serde_json::to_writer(&mut *out, record)?;
    out.write_all(b"\n")?;
    out.flush()
}

/// Shortest round-trip decimal form of every float.
pub fn csv_row(p: &PointResult) -> String {
    format!(
        "{},{},{},{},{}",
        p.snr_db, p.ber, p.fer, p.frames_sent, p.mean_iterations
    )
}

/// Parses a results file back into records.
pub fn read_jsonl(text: &str) -> Result<Vec<Record>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}
