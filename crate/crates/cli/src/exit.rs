//! Exit statuses and the mapping from library errors onto them.

use std::fmt;

use zmeasure::combinatorics::CombError;
use zmeasure::dpp::DppError;
use zmeasure::kernels::KernelError;
use zmeasure::limits::ScanError;
use zmeasure::measures::MeasureError;
use zmeasure::opkernels::OpError;
use zmeasure::specfun::SpecError;

pub const OK: i32 = 0;
pub const VERDICT_FAILED: i32 = 1;
pub const INVALID: i32 = 2;
pub const BUDGET: i32 = 3;

/// A truncation or budget limit hit by the command itself.
#[derive(Debug)]
pub struct BudgetError(pub String);

impl fmt::Display for BudgetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BudgetError {}

fn spec(e: &SpecError) -> bool {
    matches!(e, SpecError::NonConvergence { .. })
}

fn comb(e: &CombError) -> bool {
    matches!(e, CombError::BudgetExceeded(_))
}

fn measure(e: &MeasureError) -> bool {
    match e {
        MeasureError::TailTooLarge { .. } => true,
        MeasureError::Comb(c) => comb(c),
        _ => false,
    }
}

fn kernel(e: &KernelError) -> bool {
    match e {
        KernelError::Measure(m) => measure(m),
        KernelError::Spec(s) => spec(s),
        _ => false,
    }
}

fn op(e: &OpError) -> bool {
    match e {
        OpError::Measure(m) => measure(m),
        OpError::Spec(s) => spec(s),
        OpError::Precision { .. } | OpError::Divergent { .. } => true,
        _ => false,
    }
}

fn dpp(e: &DppError) -> bool {
    match e {
        DppError::Kernel(k) => kernel(k),
        DppError::WindowTooSmall { .. } | DppError::Spectrum { .. } => true,
        _ => false,
    }
}

fn scan(e: &ScanError) -> bool {
    match e {
        ScanError::Kernel(k) => kernel(k),
        ScanError::Measure(m) => measure(m),
        ScanError::Op(o) => op(o),
        ScanError::Coupling(_) => false,
    }
}

/// 3 for budget and truncation failures, 2 for everything else.
pub fn status_of(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        let budget = cause.is::<BudgetError>()
            || cause.downcast_ref::<SpecError>().is_some_and(spec)
            || cause.downcast_ref::<CombError>().is_some_and(comb)
            || cause.downcast_ref::<MeasureError>().is_some_and(measure)
            || cause.downcast_ref::<KernelError>().is_some_and(kernel)
            || cause.downcast_ref::<OpError>().is_some_and(op)
            || cause.downcast_ref::<DppError>().is_some_and(dpp)
            || cause.downcast_ref::<ScanError>().is_some_and(scan);
        if budget {
            return BUDGET;
        }
    }
    INVALID
}
