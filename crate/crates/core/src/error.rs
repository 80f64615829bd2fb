use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("value {value} is not a positive finite number")]
    NotPositive { value: f64 },
    #[error("mantissa {mantissa} is outside [1, 10]")]
    MantissaOutOfBounds { mantissa: f64 },
    #[error("invalid magnitude range: e_min {e_min} > e_max {e_max}")]
    InvalidRange { e_min: i32, e_max: i32 },
    #[error("value {value} is outside the range [{low}, {high}]")]
    OutOfRange { value: f64, low: f64, high: f64 },
    #[error("exponent {exponent} has no palette entry")]
    ExponentOutOfPalette { exponent: i32 },
    #[error("band index {index} out of range for {bands} bands")]
    BandOutOfRange { index: usize, bands: usize },
    #[error("invalid palette: {0}")]
    InvalidPalette(&'static str),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("{0}")]
    Usage(String),
    #[error("no sample satisfies {task} condition {condition}")]
    Selection { task: &'static str, condition: u8 },
    #[error("could not generate a dataset for {trial} after {attempts} attempts")]
    Generation { trial: String, attempts: u32 },
    #[error("scoring error: {0}")]
    Scoring(String),
    #[error("invalid statistics input: {0}")]
    Statistics(&'static str),
}

impl Error {
    /// True for errors caused by malformed invocations rather than bad data.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_))
    }
}
