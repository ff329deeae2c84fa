//! The warehouse order transaction, rendered at desk scale with two items.

use crate::denotational::TraceSet;
use crate::equivalence::{check_standard, CheckError, Status};
use crate::parser::parse_standard;
use crate::syntax::{Terminal, Trace};

pub const WAREHOUSE: &str = "[ (AcceptOrder % RestockOrder) ; \
     ((BookCourier % CancelCourier) || (PackItem1 % UnpackItem1) || (PackItem2 % UnpackItem2) \
     || (CreditCheck % SKIP ; (Ok % SKIP [] NotOk % SKIP ; THROWW))) ]";

/// Forward action and the action that compensates it.
pub const COMPENSATIONS: [(&str, &str); 4] = [
    ("AcceptOrder", "RestockOrder"),
    ("BookCourier", "CancelCourier"),
    ("PackItem1", "UnpackItem1"),
    ("PackItem2", "UnpackItem2"),
];

/// Compensations of the first sequential step, and of the second.
const FIRST_STEP: [&str; 1] = ["RestockOrder"];
const SECOND_STEP: [&str; 3] = ["CancelCourier", "UnpackItem1", "UnpackItem2"];

const FAILURE: &str = "NotOk";

#[derive(Debug, Clone)]
pub struct WarehouseReport {
    pub term: String,
    pub status: Status,
    pub traces: TraceSet,
    /// (a) every trace ends with `✓`.
    pub all_succeed: bool,
    /// (b) in a failed order every performed action is compensated later.
    pub failures_compensated: bool,
    /// Successful orders perform no compensation.
    pub successes_uncompensated: bool,
    /// (c) compensations of the second step precede those of the first.
    pub reverse_order: bool,
    pub failed_orders: usize,
}

impl WarehouseReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Equal
            && self.all_succeed
            && self.failures_compensated
            && self.successes_uncompensated
            && self.reverse_order
    }
}

fn position(trace: &Trace, name: &str) -> Option<usize> {
    trace.events().iter().position(|e| e.name() == name)
}

fn compensated(trace: &Trace) -> bool {
    COMPENSATIONS.iter().all(|(fwd, comp)| match position(trace, fwd) {
        Some(i) => position(trace, comp).is_some_and(|j| j > i),
        None => true,
    })
}

fn uncompensated(trace: &Trace) -> bool {
    COMPENSATIONS.iter().all(|(_, comp)| position(trace, comp).is_none())
}

fn reverse_order(trace: &Trace) -> bool {
    FIRST_STEP.iter().filter_map(|c| position(trace, c)).all(|first| {
        SECOND_STEP.iter().filter_map(|c| position(trace, c)).all(|second| second < first)
    })
}

pub fn warehouse_example() -> Result<WarehouseReport, CheckError> {
    let term = parse_standard(WAREHOUSE).expect("bundled term parses");
    let verdict = check_standard(&term)?;
    let traces = verdict.operational;
    let (failed, succeeded): (Vec<&Trace>, Vec<&Trace>) =
        traces.iter().partition(|t| position(t, FAILURE).is_some());
    let all_succeed = traces.iter().all(|t| t.terminal() == Terminal::Tick);
    let failures_compensated = failed.iter().all(|t| compensated(t));
    let successes_uncompensated = succeeded.iter().all(|t| uncompensated(t));
    let reverse = failed.iter().all(|t| reverse_order(t));
    let failed_orders = failed.len();
    Ok(WarehouseReport {
        term: term.to_string(),
        status: verdict.status,
        all_succeed,
        failures_compensated,
        successes_uncompensated,
        reverse_order: reverse,
        failed_orders,
        traces,
    })
}
