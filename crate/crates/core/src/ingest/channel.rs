//! Channel naming and 3D geometry for hand-tracking streams.
//!
//! A channel column is named `<side>_<body_part>[_<qualifier>]_<measurement>[_<axis>]`,
//! e.g. `right_palm_velocity_z` or `left_finger_joint_2_end_position_y`.
//! The schema is data driven: any column following this grammar is accepted.

use super::IngestError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BodyPart {
    Arm,
    Elbow,
    Wrist,
    Palm,
    Finger,
    FingerJoint,
}

impl BodyPart {
    pub fn as_str(self) -> &'static str {
        match self {
            BodyPart::Arm => "arm",
            BodyPart::Elbow => "elbow",
            BodyPart::Wrist => "wrist",
            BodyPart::Palm => "palm",
            BodyPart::Finger => "finger",
            BodyPart::FingerJoint => "finger_joint",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Measurement {
    Position,
    StartPosition,
    EndPosition,
    Velocity,
    Direction,
    Normal,
    Pitch,
    Yaw,
    Roll,
    Angle3d,
}

impl Measurement {
    pub fn as_str(self) -> &'static str {
        match self {
            Measurement::Position => "position",
            Measurement::StartPosition => "start_position",
            Measurement::EndPosition => "end_position",
            Measurement::Velocity => "velocity",
            Measurement::Direction => "direction",
            Measurement::Normal => "normal",
            Measurement::Pitch => "pitch",
            Measurement::Yaw => "yaw",
            Measurement::Roll => "roll",
            Measurement::Angle3d => "angle3d",
        }
    }

    /// Scalar measurements carry no axis suffix.
    pub fn is_scalar(self) -> bool {
        matches!(
            self,
            Measurement::Pitch | Measurement::Yaw | Measurement::Roll | Measurement::Angle3d
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
    Scalar,
}

impl Axis {
    pub fn suffix(self) -> Option<&'static str> {
        match self {
            Axis::X => Some("x"),
            Axis::Y => Some("y"),
            Axis::Z => Some("z"),
            Axis::Scalar => None,
        }
    }
}

/// Parsed identity of one stream column. `stable_name` is the exact column
/// header and the key used everywhere downstream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelDescriptor {
    pub side: Side,
    pub body_part: BodyPart,
    pub qualifier: Option<String>,
    pub measurement: Measurement,
    pub axis: Axis,
    pub stable_name: String,
}

impl ChannelDescriptor {
    pub fn new(
        side: Side,
        body_part: BodyPart,
        qualifier: Option<&str>,
        measurement: Measurement,
        axis: Axis,
    ) -> Self {
        let mut name = format!("{}_{}", side.as_str(), body_part.as_str());
        if let Some(q) = qualifier {
            name.push('_');
            name.push_str(q);
        }
        name.push('_');
        name.push_str(measurement.as_str());
        if let Some(s) = axis.suffix() {
            name.push('_');
            name.push_str(s);
        }
        ChannelDescriptor {
            side,
            body_part,
            qualifier: qualifier.map(str::to_string),
            measurement,
            axis,
            stable_name: name,
        }
    }
}

fn parse_side(token: &str) -> Option<Side> {
    match token {
        "left" => Some(Side::Left),
        "right" => Some(Side::Right),
        _ => None,
    }
}

fn parse_axis(token: &str) -> Option<Axis> {
    match token {
        "x" => Some(Axis::X),
        "y" => Some(Axis::Y),
        "z" => Some(Axis::Z),
        _ => None,
    }
}

const SCALAR_MEASUREMENTS: [(&str, Measurement); 4] = [
    ("pitch", Measurement::Pitch),
    ("yaw", Measurement::Yaw),
    ("roll", Measurement::Roll),
    ("angle3d", Measurement::Angle3d),
];

const VECTOR_MEASUREMENTS: [(&str, Measurement); 4] = [
    ("position", Measurement::Position),
    ("velocity", Measurement::Velocity),
    ("direction", Measurement::Direction),
    ("normal", Measurement::Normal),
];

/// Parses a column header into a descriptor. Fails with a schema error
/// naming the column when the grammar does not match.
pub fn parse_channel_name(name: &str) -> Result<ChannelDescriptor, IngestError> {
    let schema_err = || IngestError::Schema { column: name.to_string() };
    let tokens: Vec<&str> = name.split('_').collect();
    if tokens.len() < 3 {
        return Err(schema_err());
    }
    let side = parse_side(tokens[0]).ok_or_else(schema_err)?;

    let mut rest = &tokens[1..];
    let axis = match rest.last().and_then(|t| parse_axis(t)) {
        Some(a) => {
            rest = &rest[..rest.len() - 1];
            a
        }
        None => Axis::Scalar,
    };

    // Measurement is matched greedily from the tail; start/end position
    // span two tokens.
    let (measurement, body_end) = if rest.len() >= 2
        && rest[rest.len() - 1] == "position"
        && (rest[rest.len() - 2] == "start" || rest[rest.len() - 2] == "end")
    {
        let m = if rest[rest.len() - 2] == "start" {
            Measurement::StartPosition
        } else {
            Measurement::EndPosition
        };
        (m, rest.len() - 2)
    } else {
        let last = rest.last().ok_or_else(schema_err)?;
        let m = VECTOR_MEASUREMENTS
            .iter()
            .chain(SCALAR_MEASUREMENTS.iter())
            .find(|(t, _)| t == last)
            .map(|(_, m)| *m)
            .ok_or_else(schema_err)?;
        (m, rest.len() - 1)
    };

    if measurement.is_scalar() != (axis == Axis::Scalar) {
        return Err(schema_err());
    }

    let body_tokens = &rest[..body_end];
    let (body_part, qual_start) = if body_tokens.len() >= 2 && body_tokens[0] == "finger" && body_tokens[1] == "joint" {
        (BodyPart::FingerJoint, 2)
    } else {
        let part = match body_tokens.first() {
            Some(&"arm") => BodyPart::Arm,
            Some(&"elbow") => BodyPart::Elbow,
            Some(&"wrist") => BodyPart::Wrist,
            Some(&"palm") => BodyPart::Palm,
            Some(&"finger") => BodyPart::Finger,
            _ => return Err(schema_err()),
        };
        (part, 1)
    };
    if body_tokens.len() < qual_start {
        return Err(schema_err());
    }
    let qualifier = if body_tokens.len() > qual_start {
        Some(body_tokens[qual_start..].join("_"))
    } else {
        None
    };

    let descriptor = ChannelDescriptor::new(side, body_part, qualifier.as_deref(), measurement, axis);
    // Round-trip guard: a name that parses must rebuild to itself.
    if descriptor.stable_name != name {
        return Err(schema_err());
    }
    Ok(descriptor)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }
}

/// Angle between two 3D vectors, in radians within [0, pi].
/// Zero-magnitude input is rejected rather than returning NaN.
pub fn angle3d(a: Vec3, b: Vec3) -> Result<f64, IngestError> {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return Err(IngestError::DegenerateVector);
    }
    // Rounding can push the ratio just outside [-1, 1]; clamp keeps acos defined.
    let cos = (a.dot(b) / (na * nb)).clamp(-1.0, 1.0);
    Ok(cos.acos())
}
