//! JSON text format for schedules, circuits and reports.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), so every value
//! survives a parse/serialize round trip bit for bit and re-serializing a
//! parsed document reproduces the original bytes.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::architecture::{Circuit, Gate, StarArchitecture};
use crate::pulse::{Envelope, PulseSchedule, PulseSegment, SegmentKind, Shape};
use crate::single_qubit::RotationTarget;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "document", rename_all = "snake_case")]
pub enum Document {
    Schedule(ScheduleDoc),
    Circuit(CircuitDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDoc {
    pub n_register: usize,
    pub segments: Vec<SegmentDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SegmentDoc {
    Field {
        qubit: usize,
        beta: f64,
        shape: Shape,
        duration: f64,
        area: f64,
    },
    Coupling {
        pair: [usize; 2],
        mix_theta: f64,
        shape: Shape,
        duration: f64,
        area: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDoc {
    pub architecture: ArchitectureDoc,
    pub gates: Vec<GateDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchitectureDoc {
    pub n_register: usize,
    pub auxiliary_state: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GateDoc {
    Rot {
        qubit: usize,
        theta: f64,
        phi: f64,
        dphi: f64,
    },
    Ent {
        k: usize,
        l: usize,
        theta: f64,
    },
}

impl From<&PulseSchedule> for ScheduleDoc {
    fn from(s: &PulseSchedule) -> Self {
        let segments = s
            .segments()
            .iter()
            .map(|seg| {
                let env = seg.envelope();
                match seg.kind() {
                    SegmentKind::Field { qubit, beta } => SegmentDoc::Field {
                        qubit,
                        beta,
                        shape: env.shape(),
                        duration: env.duration(),
                        area: env.area(),
                    },
                    SegmentKind::Coupling { k, l, mix_theta } => SegmentDoc::Coupling {
                        pair: [k, l],
                        mix_theta,
                        shape: env.shape(),
                        duration: env.duration(),
                        area: env.area(),
                    },
                }
            })
            .collect();
        ScheduleDoc {
            n_register: s.n_register(),
            segments,
        }
    }
}

impl TryFrom<&ScheduleDoc> for PulseSchedule {
    type Error = Error;

    fn try_from(doc: &ScheduleDoc) -> Result<Self> {
        let segments = doc
            .segments
            .iter()
            .map(|s| match *s {
                SegmentDoc::Field {
                    qubit,
                    beta,
                    shape,
                    duration,
                    area,
                } => PulseSegment::field(qubit, beta, Envelope::new(shape, duration, area)?),
                SegmentDoc::Coupling {
                    pair: [k, l],
                    mix_theta,
                    shape,
                    duration,
                    area,
                } => PulseSegment::coupling(k, l, mix_theta, Envelope::new(shape, duration, area)?),
            })
            .collect::<Result<Vec<_>>>()?;
        PulseSchedule::from_segments(doc.n_register, segments)
    }
}

impl CircuitDoc {
    pub fn new(circuit: &Circuit, arch: &StarArchitecture) -> Self {
        let gates = circuit
            .gates()
            .iter()
            .map(|g| match *g {
                Gate::Rot { qubit, target } => GateDoc::Rot {
                    qubit,
                    theta: target.theta(),
                    phi: target.phi(),
                    dphi: target.dphi(),
                },
                Gate::Ent { k, l, mix_theta } => GateDoc::Ent {
                    k,
                    l,
                    theta: mix_theta,
                },
            })
            .collect();
        CircuitDoc {
            architecture: ArchitectureDoc {
                n_register: arch.n_register(),
                auxiliary_state: arch.auxiliary_state(),
            },
            gates,
        }
    }

    /// Validate into domain values.
    pub fn to_circuit(&self) -> Result<(Circuit, StarArchitecture)> {
        let arch = StarArchitecture::new(
            self.architecture.n_register,
            self.architecture.auxiliary_state,
        )?;
        let gates = self
            .gates
            .iter()
            .map(|g| match *g {
                GateDoc::Rot {
                    qubit,
                    theta,
                    phi,
                    dphi,
                } => Ok(Gate::Rot {
                    qubit,
                    target: RotationTarget::new(theta, phi, dphi)?,
                }),
                GateDoc::Ent { k, l, theta } => Gate::ent(k, l, theta),
            })
            .collect::<Result<Vec<_>>>()?;
        let circuit = Circuit::from_gates(gates);
        circuit.validate(&arch)?;
        Ok((circuit, arch))
    }
}

/// Pretty JSON with 17-significant-digit floats.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, LosslessFormatter::default());
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Parse(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_document(text: &str) -> Result<Document> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn schedule_to_json(schedule: &PulseSchedule) -> Result<String> {
    to_json(&Document::Schedule(schedule.into()))
}

pub fn circuit_to_json(circuit: &Circuit, arch: &StarArchitecture) -> Result<String> {
    to_json(&Document::Circuit(CircuitDoc::new(circuit, arch)))
}

pub fn parse_schedule(text: &str) -> Result<PulseSchedule> {
    match parse_document(text)? {
        Document::Schedule(doc) => PulseSchedule::try_from(&doc),
        Document::Circuit(_) => Err(Error::Parse("expected a schedule document".into())),
    }
}

pub fn parse_circuit(text: &str) -> Result<(Circuit, StarArchitecture)> {
    match parse_document(text)? {
        Document::Circuit(doc) => doc.to_circuit(),
        Document::Schedule(_) => Err(Error::Parse("expected a circuit document".into())),
    }
}

/// `{:.16e}` for finite values, `null` otherwise.
pub fn format_f64(value: f64) -> String {
    if value.is_finite() {
        format!("{value:.16e}")
    } else {
        "null".to_string()
    }
}

/// [`PrettyFormatter`] with lossless fixed-precision floats.
#[derive(Default)]
struct LosslessFormatter {
    inner: PrettyFormatter<'static>,
}

impl Formatter for LosslessFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}
