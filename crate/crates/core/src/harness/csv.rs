use std::io::Write;

use crate::bounds;

use super::{HarnessError, RatioReport};

pub const CSV_HEADER: [&str; 10] = [
    "decoder",
    "L",
    "gamma",
    "seed",
    "opt",
    "on",
    "ratio",
    "agreement",
    "bound",
    "wall_time_ms",
];

const NOT_AVAILABLE: &str = "n/a";

fn number(x: f64) -> String {
    if x.is_nan() {
        NOT_AVAILABLE.to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.12}")
    }
}

fn optional(x: Option<f64>) -> String {
    x.map_or_else(|| NOT_AVAILABLE.to_string(), number)
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn csv_error(e: csv::Error) -> HarnessError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => HarnessError::Io(io),
        other => HarnessError::InvalidInput(format!("{other:?}")),
    }
}

/// Writes `reports` as CSV, sorted by (decoder, L, seed). Reals use twelve
/// decimals; missing values are `n/a`.
pub fn write_csv<W: Write>(out: W, reports: &[RatioReport]) -> Result<(), HarnessError> {
    let mut rows: Vec<&RatioReport> = reports.iter().collect();
    rows.sort_by(|a, b| (&a.decoder, a.latency, a.seed).cmp(&(&b.decoder, b.latency, b.seed)));
    let mut w = writer(out);
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for r in rows {
        w.write_record([
            r.decoder.clone(),
            r.latency.to_string(),
            optional(r.gamma),
            r.seed.to_string(),
            number(r.opt),
            number(r.on),
            number(r.ratio),
            number(r.agreement),
            optional(r.bound),
            number(r.wall_time_ms),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(reports: &[RatioReport]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, reports).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

/// All bound formulas at one `(L, n, Δ, ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsRow {
    pub latency: usize,
    pub order: usize,
    pub diameter: usize,
    pub epsilon: f64,
    pub optimal_gamma: Option<f64>,
    pub peek_search_upper: Option<f64>,
    pub randomized_upper: Option<f64>,
    pub peek_reset_upper: Option<f64>,
    pub deterministic_lower: Option<f64>,
    pub randomized_lower: Option<f64>,
}

impl BoundsRow {
    /// Evaluates every formula; invalid input (zero order or diameter,
    /// `ε ∉ (0, 1]`) is an error, an inapplicable bound is `None`.
    pub fn compute(latency: usize, order: usize, diameter: usize, epsilon: f64) -> Result<Self, HarnessError> {
        use bounds::BoundError;
        fn keep(r: Result<f64, BoundError>) -> Result<Option<f64>, HarnessError> {
            match r {
                Ok(v) => Ok(Some(v)),
                Err(BoundError::Inapplicable { .. }) => Ok(None),
                Err(e) => Err(e.into()),
            }
        }
        Ok(Self {
            latency,
            order,
            diameter,
            epsilon,
            optimal_gamma: keep(bounds::optimal_gamma(latency, order, diameter))?,
            peek_search_upper: keep(bounds::peek_search_upper_bound(latency, order, diameter))?,
            randomized_upper: keep(bounds::randomized_upper_bound(latency, order, diameter))?,
            peek_reset_upper: keep(bounds::peek_reset_upper_bound(latency, order, diameter))?,
            deterministic_lower: keep(bounds::deterministic_lower_bound(latency, order, diameter))?,
            randomized_lower: keep(bounds::randomized_lower_bound(latency, order, diameter, epsilon))?,
        })
    }

    /// True if any formula did not apply.
    pub fn has_inapplicable(&self) -> bool {
        [
            self.optimal_gamma,
            self.peek_search_upper,
            self.randomized_upper,
            self.peek_reset_upper,
            self.deterministic_lower,
            self.randomized_lower,
        ]
        .iter()
        .any(Option::is_none)
    }
}

pub fn emit_bounds_csv(rows: &[BoundsRow]) -> String {
    let mut buf = Vec::new();
    {
        let mut w = writer(&mut buf);
        let header = [
            "L",
            "n",
            "delta",
            "epsilon",
            "optimal_gamma",
            "peek_search_upper",
            "randomized_upper",
            "peek_reset_upper",
            "deterministic_lower",
            "randomized_lower",
        ];
        w.write_record(header).expect("in-memory write");
        for r in rows {
            w.write_record([
                r.latency.to_string(),
                r.order.to_string(),
                r.diameter.to_string(),
                number(r.epsilon),
                optional(r.optimal_gamma),
                optional(r.peek_search_upper),
                optional(r.randomized_upper),
                optional(r.peek_reset_upper),
                optional(r.deterministic_lower),
                optional(r.randomized_lower),
            ])
            .expect("in-memory write");
        }
        w.flush().expect("in-memory write");
    }
    String::from_utf8(buf).expect("CSV output is UTF-8")
}
