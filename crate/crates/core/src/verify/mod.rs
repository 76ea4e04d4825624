//! Branch-and-bound sign verification over parameter boxes.

mod chart;
mod desing;
mod enclosure;
mod registry;

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::rigor::{Interval, Sign};

pub use chart::{inv_r, Chart, ParamBox};
pub use desing::{dw0_inv, nw0_inv_scaled, nw0_tilde_scaled, split_w_tilde, w0_over_ginv, w0_times_gtilde};
pub use enclosure::{enclosure_r, r34_enclosure, Enclosure};
pub use registry::{find_task, lemma_registry};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_BOXES: usize = 2_000_000;
/// Depth from which an ambiguous box is retried once at twice the precision.
pub const ESCALATION_DEPTH: u32 = 20;

pub type PredicateFn = dyn Fn(&ParamBox, u32) -> Result<Interval> + Send + Sync;

/// A named sign condition: `predicate(box, bits)` must have sign `want` on every point of `region`.
#[derive(Clone)]
pub struct VerificationTask {
    pub id: String,
    pub description: String,
    pub predicate: Arc<PredicateFn>,
    pub want: Sign,
    pub region: ParamBox,
    /// Region of the full-scale run; `None` when the smoke region is already the full one.
    pub full_region: Option<ParamBox>,
    /// Preferred y-width / x-width ratio.
    pub aspect_target: f64,
    pub tol: f64,
    pub precision_bits: u32,
    pub max_boxes: usize,
    /// Keep the certified leaves in the report.
    pub trace: bool,
}

impl std::fmt::Debug for VerificationTask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VerificationTask")
            .field("id", &self.id)
            .field("want", &self.want)
            .field("region", &self.region)
            .field("aspect_target", &self.aspect_target)
            .field("tol", &self.tol)
            .field("precision_bits", &self.precision_bits)
            .finish()
    }
}

impl VerificationTask {
    pub fn new<F>(id: &str, want: Sign, region: ParamBox, predicate: F) -> Self
    where
        F: Fn(&ParamBox, u32) -> Result<Interval> + Send + Sync + 'static,
    {
        let aspect_target = region.chart.default_aspect();
        VerificationTask {
            id: id.to_string(),
            description: String::new(),
            predicate: Arc::new(predicate),
            want,
            region,
            full_region: None,
            aspect_target,
            tol: DEFAULT_TOL,
            precision_bits: 128,
            max_boxes: DEFAULT_MAX_BOXES,
            trace: false,
        }
    }

    pub fn describe(mut self, text: &str) -> Self {
        self.description = text.to_string();
        self
    }

    pub fn with_full(mut self, full: ParamBox) -> Self {
        self.full_region = Some(full);
        self
    }

    pub fn with_region(mut self, region: ParamBox) -> Self {
        self.region = region;
        self
    }

    pub fn with_precision(mut self, bits: u32) -> Self {
        self.precision_bits = bits;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_boxes(mut self, n: usize) -> Self {
        self.max_boxes = n;
        self
    }

    pub fn with_trace(mut self, on: bool) -> Self {
        self.trace = on;
        self
    }

    /// Evaluate the predicate at one point of the region, in raw chart coordinates of that chart.
    pub fn eval_point(&self, x: f64, y: f64, bits: u32) -> Result<Interval> {
        let b = ParamBox::point(self.region.chart, x, y, bits);
        (self.predicate)(&b, bits)
    }
}

/// Endpoints as decimal strings.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BoxReport {
    pub chart: Chart,
    pub x: (String, String),
    pub y: (String, String),
    pub depth: u32,
    pub value: Option<(String, String)>,
}

impl BoxReport {
    fn new(b: &ParamBox, value: Option<&Interval>) -> Self {
        BoxReport {
            chart: b.chart,
            x: b.x.to_decimal_strings(20),
            y: b.y.to_decimal_strings(20),
            depth: b.depth,
            value: value.map(|v| v.to_decimal_strings(12)),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(tag = "kind")]
pub enum Status {
    Proved,
    Failed { counterexample: BoxReport },
    ToleranceExhausted { at: BoxReport, budget_hit: bool },
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Proved => 0,
            Status::Failed { .. } => 1,
            Status::ToleranceExhausted { .. } => 2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Proved => "Proved",
            Status::Failed { .. } => "Failed",
            Status::ToleranceExhausted { .. } => "ToleranceExhausted",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub task: String,
    pub status: Status,
    pub boxes_processed: usize,
    pub max_depth: u32,
    pub escalations: usize,
    pub precision_bits: u32,
    pub wall_time: f64,
    #[serde(skip)]
    pub leaves: Vec<ParamBox>,
}

impl VerificationReport {
    pub fn proved(&self) -> bool {
        self.status == Status::Proved
    }
}

enum Outcome {
    Certified { escalated: bool },
    Split(ParamBox, ParamBox),
    Counterexample(BoxReport),
    Exhausted(BoxReport),
}

fn opposite(s: Sign) -> Sign {
    match s {
        Sign::Positive => Sign::Negative,
        Sign::Negative => Sign::Positive,
        Sign::Ambiguous => Sign::Ambiguous,
    }
}

fn sign_of(v: &Result<Interval>) -> Sign {
    match v {
        Ok(iv) => iv.sign(),
        Err(_) => Sign::Ambiguous,
    }
}

fn process(task: &VerificationTask, b: &ParamBox) -> Outcome {
    let bits = task.precision_bits;
    let v = (task.predicate)(b, bits);
    let s = sign_of(&v);
    if s == task.want {
        return Outcome::Certified { escalated: false };
    }
    if s == opposite(task.want) {
        return Outcome::Counterexample(BoxReport::new(b, v.as_ref().ok()));
    }
    if b.depth >= ESCALATION_DEPTH {
        let hi = b.with_prec(2 * bits);
        if sign_of(&(task.predicate)(&hi, 2 * bits)) == task.want {
            return Outcome::Certified { escalated: true };
        }
    }
    // A certified wrong sign at the centre settles the task.
    let c = b.center();
    let vc = (task.predicate)(&c, bits);
    if sign_of(&vc) == opposite(task.want) {
        return Outcome::Counterexample(BoxReport::new(&c, vc.as_ref().ok()));
    }
    if b.max_width() <= task.tol {
        return Outcome::Exhausted(BoxReport::new(b, v.as_ref().ok()));
    }
    let (l, r) = b.split(task.aspect_target);
    Outcome::Split(l, r)
}

/// Runs the task on rayon's current pool. Boxes are processed level by level;
/// within a level the order is fixed, so the report is independent of scheduling.
pub fn branch_and_bound(task: &VerificationTask) -> VerificationReport {
    let start = Instant::now();
    let mut frontier = vec![task.region.with_prec(task.precision_bits)];
    let mut processed = 0usize;
    let mut max_depth = 0u32;
    let mut escalations = 0usize;
    let mut leaves = Vec::new();
    let finish = |status, processed, max_depth, escalations, leaves| VerificationReport {
        task: task.id.clone(),
        status,
        boxes_processed: processed,
        max_depth,
        escalations,
        precision_bits: task.precision_bits,
        wall_time: start.elapsed().as_secs_f64(),
        leaves,
    };
    while !frontier.is_empty() {
        if processed + frontier.len() > task.max_boxes {
            let at = BoxReport::new(&frontier[0], None);
            return finish(
                Status::ToleranceExhausted { at, budget_hit: true },
                processed,
                max_depth,
                escalations,
                leaves,
            );
        }
        let outcomes: Vec<Outcome> = frontier.par_iter().map(|b| process(task, b)).collect();
        processed += frontier.len();
        max_depth = max_depth.max(frontier[0].depth);
        let mut next = Vec::new();
        for (b, o) in frontier.into_iter().zip(outcomes) {
            match o {
                Outcome::Certified { escalated } => {
                    escalations += escalated as usize;
                    if task.trace {
                        leaves.push(b);
                    }
                }
                Outcome::Split(l, r) => {
                    next.push(l);
                    next.push(r);
                }
                Outcome::Counterexample(c) => {
                    return finish(Status::Failed { counterexample: c }, processed, max_depth, escalations, leaves);
                }
                Outcome::Exhausted(at) => {
                    return finish(
                        Status::ToleranceExhausted { at, budget_hit: false },
                        processed,
                        max_depth,
                        escalations,
                        leaves,
                    );
                }
            }
        }
        frontier = next;
    }
    finish(Status::Proved, processed, max_depth, escalations, leaves)
}

/// As [`branch_and_bound`] on a dedicated pool of `workers` threads.
pub fn branch_and_bound_with_workers(task: &VerificationTask, workers: usize) -> Result<VerificationReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| crate::error::Error::InvalidArgument(e.to_string()))?;
    Ok(pool.install(|| branch_and_bound(task)))
}

/// Interval minimum; positive exactly when every argument is.
pub fn all_positive(vals: &[Interval]) -> Interval {
    let mut it = vals.iter();
    let first = it.next().expect("at least one condition").clone();
    it.fold(first, |acc, v| {
        let lo = if acc.lo() < v.lo() { acc.lo().clone() } else { v.lo().clone() };
        let hi = if acc.hi() < v.hi() { acc.hi().clone() } else { v.hi().clone() };
        Interval::new(lo, hi).expect("ordered endpoints")
    })
}
