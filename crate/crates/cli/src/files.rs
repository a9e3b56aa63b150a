//! JSON file formats for orbits and groups.
//!
//! Real scalars are plain numbers, complex scalars are `[re, im]` pairs, and
//! floats are written with 17 significant digits so files round-trip exactly.

use std::io;
use std::path::Path;

use orbitsym::groupcore::MultiplicationTable;
use orbitsym::reconstruct::ConcreteGroup;
use orbitsym::{FieldTag, Matrix, Scalar, TolerancePolicy, Vector};
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldName {
    Real,
    Complex,
}

impl From<FieldTag> for FieldName {
    fn from(f: FieldTag) -> Self {
        match f {
            FieldTag::Real => FieldName::Real,
            FieldTag::Complex => FieldName::Complex,
        }
    }
}

impl From<FieldName> for FieldTag {
    fn from(f: FieldName) -> Self {
        match f {
            FieldName::Real => FieldTag::Real,
            FieldName::Complex => FieldTag::Complex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    fn encode(z: Scalar, field: FieldTag) -> Entry {
        match field {
            FieldTag::Real => Entry::Real(z.re),
            FieldTag::Complex => Entry::Complex([z.re, z.im]),
        }
    }

    fn decode(self, field: FieldTag) -> Result<Scalar, CliError> {
        match (self, field) {
            (Entry::Real(x), FieldTag::Real) => Ok(Scalar::new(x, 0.0)),
            (Entry::Complex([re, im]), FieldTag::Complex) => Ok(Scalar::new(re, im)),
            (Entry::Complex(_), FieldTag::Real) => Err(CliError::Usage("complex entry in a real file".into())),
            (Entry::Real(_), FieldTag::Complex) => Err(CliError::Usage("complex entries must be [re, im] pairs".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitFile {
    pub field: FieldName,
    pub dimension: usize,
    pub orbits: Vec<Vec<Vec<Entry>>>,
}

impl OrbitFile {
    pub fn from_orbits(field: FieldTag, dimension: usize, orbits: &[Vec<Vector>]) -> Self {
        let orbits = orbits
            .iter()
            .map(|o| o.iter().map(|p| p.entries().iter().map(|&z| Entry::encode(z, field)).collect()).collect())
            .collect();
        OrbitFile { field: field.into(), dimension, orbits }
    }

    pub fn to_orbits(&self) -> Result<Vec<Vec<Vector>>, CliError> {
        let field: FieldTag = self.field.into();
        if self.orbits.is_empty() || self.orbits.iter().any(Vec::is_empty) {
            return Err(CliError::Usage("orbit file has no points".into()));
        }
        let mut out = Vec::with_capacity(self.orbits.len());
        for orbit in &self.orbits {
            let mut points = Vec::with_capacity(orbit.len());
            for p in orbit {
                if p.len() != self.dimension {
                    return Err(CliError::Usage(format!(
                        "point has {} coordinates, expected {}",
                        p.len(),
                        self.dimension
                    )));
                }
                let entries = p.iter().map(|e| e.decode(field)).collect::<Result<Vec<_>, _>>()?;
                points.push(Vector::new(field, entries)?);
            }
            out.push(points);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub field: FieldName,
    pub dimension: usize,
    /// Each matrix as a list of rows.
    pub matrices: Vec<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    /// `table[i][j]` is the index of matrices[i]·matrices[j].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
}

impl GroupFile {
    pub fn from_group(group: &ConcreteGroup) -> Self {
        let field = group.field();
        let matrices = group
            .matrices()
            .iter()
            .map(|m| (0..m.rows()).map(|r| (0..m.cols()).map(|c| Entry::encode(m.get(r, c), field)).collect()).collect())
            .collect();
        GroupFile {
            field: field.into(),
            dimension: group.dimension(),
            matrices,
            names: None,
            table: Some(group.table().rows()),
        }
    }

    pub fn to_group(&self, policy: &TolerancePolicy) -> Result<ConcreteGroup, CliError> {
        let field: FieldTag = self.field.into();
        let d = self.dimension;
        if d == 0 || self.matrices.is_empty() {
            return Err(CliError::Usage("group file has no matrices".into()));
        }
        if let Some(names) = &self.names {
            if names.len() != self.matrices.len() {
                return Err(CliError::Usage("names and matrices differ in length".into()));
            }
        }
        let mut matrices = Vec::with_capacity(self.matrices.len());
        for rows in &self.matrices {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(CliError::Usage(format!("matrices must be {d}x{d}")));
            }
            let entries = rows.iter().flatten().map(|e| e.decode(field)).collect::<Result<Vec<_>, _>>()?;
            matrices.push(Matrix::from_row_major(d, d, &entries)?);
        }
        match &self.table {
            None => Ok(ConcreteGroup::from_matrices(field, d, matrices, policy)?),
            Some(rows) => {
                let n = matrices.len();
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(CliError::Usage("table shape does not match the matrix count".into()));
                }
                let identity = (0..n)
                    .find(|&e| (0..n).all(|j| rows[e][j] == j))
                    .ok_or_else(|| CliError::Usage("table has no identity element".into()))?;
                let table = MultiplicationTable::new(n, rows.iter().flatten().copied().collect(), identity)
                    .map_err(|e| CliError::Usage(format!("invalid table: {e}")))?;
                Ok(ConcreteGroup::new(field, d, matrices, table)?)
            }
        }
    }
}

/// Pretty JSON with every float at 17 significant digits.
struct ExactFloats<'a>(PrettyFormatter<'a>);

impl Formatter for ExactFloats<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("in-memory serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    std::fs::write(path, to_json(value)).map_err(|e| CliError::Io(path.display().to_string(), e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}
