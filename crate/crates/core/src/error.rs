use thiserror::Error;

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("points are equal or antipodal within tolerance")]
    DegeneratePair,
    #[error("arc parameter {0} is outside [0, 1]")]
    ParameterOutOfRange(f64),
    #[error("point is a pole of the great circle")]
    PoleDegenerate,
    #[error("{name} = {value} is outside the open interval ({lo}, {hi})")]
    Domain {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("perpendiculars do not meet in the expected region")]
    NoIntersection,
    #[error("point does not lie on the arc")]
    NotOnArc,
    #[error("no open hemisphere strictly contains the points")]
    NoHemisphere,
    #[error("at least 3 points are required, got {0}")]
    TooFewPoints(usize),
    #[error("points lie on a single great circle")]
    DegenerateHull,
    #[error("diameter {0} is outside (pi/2, pi)")]
    DiameterOutOfRange(f64),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl GeometryError {
    pub(crate) fn domain(name: &'static str, value: f64, lo: f64, hi: f64) -> Self {
        GeometryError::Domain { name, value, lo, hi }
    }
}
