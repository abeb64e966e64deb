use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported velocity orientation: omega = ({0}, {1})")]
    UnsupportedVelocity(f64, f64),

    #[error("degenerate geometry")]
    DegenerateGeometry,

    #[error("stencil violation: block offset ({0}, {1}) carries a nonzero coupling")]
    StencilViolation(i64, i64),

    #[error("unsupported multiindex order |m| = {0}")]
    UnsupportedMultiindexOrder(u32),

    #[error("appendix system degenerate")]
    AppendixSystemDegenerate,

    #[error("eigensolver failed at xi = {xi}, phi = ({phi_x}, {phi_y})")]
    EigenFailure { xi: f64, phi_x: f64, phi_y: f64 },

    #[error("scan step {step} does not divide the range {range}")]
    InvalidScanStep { step: f64, range: f64 },

    #[error("blow-up at t = {0}")]
    BlowUp(f64),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
