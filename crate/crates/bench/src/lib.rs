//! Shared inputs for the benchmarks.

use qtree_core::qnum::rat;
use qtree_core::{ParamSet, QContext};

/// The default parameters truncated to `h` leaves.
pub fn params(h: usize) -> ParamSet {
    let alphas = [rat(1, 2), rat(1, 3), rat(2, 3), rat(3, 5), rat(4, 7)];
    ParamSet::new(QContext::default_context(), alphas[..h].to_vec())
}
