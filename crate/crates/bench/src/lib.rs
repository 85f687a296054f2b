//! Fixtures shared by the benchmarks.

use central_curve::catalog::builtin;
use central_curve::LpInstance;

pub fn named(name: &str) -> LpInstance {
    builtin(name).expect("builtin example").to_instance().expect("valid example")
}
