//! Structured reports printed on standard output.

use std::collections::BTreeMap;

use orbitsym::gramgraph::GramInvariants;
use orbitsym::groupcore::GroupInvariants;
use orbitsym::reconstruct::{RecoveryReport, VerificationReport};
use orbitsym::reptheory::ThresholdReport;
use serde::Serialize;

use crate::files::{FieldName, GroupFile};

#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub status: &'static str,
    pub error: String,
    pub message: String,
}

#[derive(Debug, Serialize)]
pub struct SimulateReport {
    pub status: &'static str,
    pub group: String,
    pub order: usize,
    pub field: FieldName,
    pub dimension: usize,
    pub k: usize,
    pub seed: u64,
    pub orbit_file: String,
    pub group_file: String,
}

#[derive(Debug, Serialize)]
pub struct InvariantsReport {
    pub order: usize,
    pub order_histogram: BTreeMap<usize, usize>,
    pub abelian: bool,
    pub center_order: usize,
    pub abelianization: Vec<usize>,
}

impl From<GroupInvariants> for InvariantsReport {
    fn from(inv: GroupInvariants) -> Self {
        InvariantsReport {
            order: inv.order,
            order_histogram: inv.order_histogram.into_iter().collect(),
            abelian: inv.abelian,
            center_order: inv.center_order,
            abelianization: inv.abelianization,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GramReport {
    pub vertices: usize,
    pub labels: usize,
}

impl From<GramInvariants> for GramReport {
    fn from(g: GramInvariants) -> Self {
        GramReport { vertices: g.vertices, labels: g.labels }
    }
}

#[derive(Debug, Serialize)]
pub struct AbstractReport {
    pub status: &'static str,
    /// `cayley` for one complex orbit, `union_action` otherwise.
    pub method: &'static str,
    pub identified: String,
    pub insufficient: bool,
    pub invariants: InvariantsReport,
    pub gram: Vec<GramReport>,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize)]
pub struct ResidualReport {
    pub max_point_error: f64,
    pub isometry_defect: f64,
}

#[derive(Debug, Serialize)]
pub struct ConcreteReport {
    pub status: &'static str,
    pub order: usize,
    pub identified: String,
    pub span_rank: usize,
    pub codimension: usize,
    pub r: Option<usize>,
    pub ambiguous: bool,
    pub insufficient: bool,
    pub residuals: Vec<ResidualReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupFile>,
}

impl ConcreteReport {
    pub fn new(order: usize, identified: String, r: RecoveryReport) -> Self {
        ConcreteReport {
            status: "ok",
            order,
            identified,
            span_rank: r.span_rank,
            codimension: r.codimension,
            r: r.r_used,
            ambiguous: r.ambiguous,
            insufficient: r.insufficient,
            residuals: r
                .residuals
                .iter()
                .map(|e| ResidualReport { max_point_error: e.max_point_error, isometry_defect: e.isometry_defect })
                .collect(),
            group_file: None,
            group: None,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct IrrepReport {
    pub name: String,
    pub dim: usize,
    pub n_pi_v: usize,
    pub n_pi_r: usize,
    pub trivial: bool,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub status: &'static str,
    pub field: FieldName,
    pub order: usize,
    pub identified: String,
    pub irreps: Vec<IrrepReport>,
    /// Absent for the trivial group.
    pub r: Option<usize>,
    pub k_span: usize,
    pub k_recover: usize,
}

impl AnalyzeReport {
    pub fn new(order: usize, identified: String, t: ThresholdReport) -> Self {
        AnalyzeReport {
            status: "ok",
            field: t.field.into(),
            order,
            identified,
            irreps: t
                .irreps
                .into_iter()
                .map(|e| IrrepReport { name: e.name, dim: e.dim, n_pi_v: e.n_pi_v, n_pi_r: e.n_pi_r, trivial: e.trivial })
                .collect(),
            r: Some(t.r),
            k_span: t.k_span,
            k_recover: t.k_recover,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub status: &'static str,
    pub max_isometry_defect: f64,
    pub closure_defect: f64,
    pub invariance_defects: Vec<f64>,
    pub isometry_defects: Vec<f64>,
    pub tolerance: f64,
}

impl VerifyReport {
    pub fn new(v: VerificationReport, tolerance: f64) -> Self {
        VerifyReport {
            status: if v.passed { "pass" } else { "fail" },
            max_isometry_defect: v.max_isometry_defect,
            closure_defect: v.closure_defect,
            invariance_defects: v.invariance_defects,
            isometry_defects: v.isometry_defects,
            tolerance,
        }
    }
}
