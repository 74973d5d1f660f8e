//! Excluded-interval covers of `[0, 1]`, measure brackets, touching points
//! and isolation certificates.

mod cover;
mod isolate;
mod measure;

pub use cover::{
    build_cover, Bound, CoveredLength, Frac, IntervalCover, MergedInterval, NearTouch, TouchingPoint,
    MAX_Q,
};
pub use isolate::{
    certify_isolated, emptiness_certificate, CertifyFailure, EmptinessCertificate, IsolationCertificate,
};
pub use measure::{measure_bounds, tail_bound, MeasureBounds};

/// Touching points of the cover inside the band, in increasing order.
pub fn find_touching_points(cover: &IntervalCover) -> Vec<TouchingPoint> {
    cover.touching().to_vec()
}
