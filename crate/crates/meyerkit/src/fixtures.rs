//! Bundled example schemes and window families.
//!
//! Small, hand-checkable inputs used across the test suite, the examples,
//! and the command-line walkthroughs. Each loader parses a JSON file shipped
//! with the crate — the same files double as format documentation, since
//! they exercise every accepted scalar spelling (bare integers, `p/q`
//! fractions and `p/q+r/s√D` surds).

use crate::cps::CutProjectScheme;
use crate::modelset::WindowFamily;
use crate::numeric::QuadExt;
use num_rational::BigRational;

/// Golden-ratio scheme: `d = m = 1`, `A = [1, φ]`, `B = [1, φ̄]`, trivial
/// finite part. Projecting `Z²` through the window `[-1, φ-1]` yields the
/// Fibonacci tiling's vertex set.
pub const FIB_SCHEME_JSON: &str = include_str!("../fixtures/fib.json");

/// The canonical Fibonacci window `[-1, φ-1]` as a one-window family.
pub const FIB_WINDOW_JSON: &str = include_str!("../fixtures/fib_window.json");

/// Golden-ratio scheme with a parity fiber: internal space `R × Z/2`,
/// finite component `z ↦ z₁ + z₂ mod 2`.
pub const TWO_COLOR_SCHEME_JSON: &str = include_str!("../fixtures/dec2.json");

/// Windows splitting the golden window across the two parity fibers —
/// color `even` over fiber `0`, color `odd` over fiber `1`.
pub const TWO_COLOR_SPLIT_WINDOWS_JSON: &str =
    include_str!("../fixtures/dec2_split_windows.json");

/// One window duplicated over both parity fibers. The finite translation
/// by `1 ∈ Z/2` fixes it, so its redundancy subgroup is all of `Z/2` and
/// minimalization collapses the fiber.
pub const TWO_COLOR_DUPLICATED_WINDOWS_JSON: &str =
    include_str!("../fixtures/dec2_dup_windows.json");

/// All-rational toy: `D = 1`, `A = [1, 1/2]`, `B = [1, -1]`, parity fiber.
/// Its internal orbit is certified non-dense (the functional `k = 1` takes
/// integer values on the kernel sublattice), and `A` is not injective on
/// `Z²`.
pub const RATIONAL_TOY_SCHEME_JSON: &str = include_str!("../fixtures/rat2.json");

/// A strictly smaller window `[-3/4, 1/2]` inside the golden window, used
/// to exercise structure-group shrinking.
pub const SUB_WINDOW_JSON: &str = include_str!("../fixtures/subwin_window.json");

fn scheme(json: &str) -> CutProjectScheme {
    serde_json::from_str(json).expect("bundled scheme fixture parses")
}

fn family(json: &str) -> WindowFamily {
    serde_json::from_str(json).expect("bundled window fixture parses")
}

/// The golden ratio `φ = (1 + √5)/2`.
pub fn golden_ratio() -> QuadExt {
    QuadExt::new(
        BigRational::new(1.into(), 2.into()),
        BigRational::new(1.into(), 2.into()),
        5,
    )
    .expect("5 is squarefree")
}

/// See [`FIB_SCHEME_JSON`].
pub fn fibonacci() -> CutProjectScheme {
    scheme(FIB_SCHEME_JSON)
}

/// See [`FIB_WINDOW_JSON`].
pub fn fibonacci_window() -> WindowFamily {
    family(FIB_WINDOW_JSON)
}

/// See [`TWO_COLOR_SCHEME_JSON`].
pub fn two_color() -> CutProjectScheme {
    scheme(TWO_COLOR_SCHEME_JSON)
}

/// See [`TWO_COLOR_SPLIT_WINDOWS_JSON`].
pub fn two_color_split_windows() -> WindowFamily {
    family(TWO_COLOR_SPLIT_WINDOWS_JSON)
}

/// See [`TWO_COLOR_DUPLICATED_WINDOWS_JSON`].
pub fn two_color_duplicated_windows() -> WindowFamily {
    family(TWO_COLOR_DUPLICATED_WINDOWS_JSON)
}

/// See [`RATIONAL_TOY_SCHEME_JSON`].
pub fn rational_toy() -> CutProjectScheme {
    scheme(RATIONAL_TOY_SCHEME_JSON)
}

/// See [`SUB_WINDOW_JSON`].
pub fn sub_window() -> WindowFamily {
    family(SUB_WINDOW_JSON)
}
