//! Reference matrices shared by the benchmark suite.

use rees_core::hb::hb_from_coeff_lists;
use rees_core::HBMatrix;

pub const P: u64 = 101;

/// Columns [x^2+y^2, xy, 0] and [0, y^4, x^4+y^4]: degrees (2, 4), d = 6.
pub fn mixed_24() -> HBMatrix {
    hb_from_coeff_lists(
        P,
        &[
            [&[1, 0, 1], &[0, 0, 0, 0, 0]],
            [&[0, 1, 0], &[1, 0, 0, 0, 0]],
            [&[0, 0, 0], &[1, 0, 0, 0, 1]],
        ],
    )
    .unwrap()
}

/// Columns [y^3, x^3, 0] and [0, y^3, x^3]: balanced degrees (3, 3), d = 6.
pub fn balanced_33() -> HBMatrix {
    hb_from_coeff_lists(
        P,
        &[
            [&[1, 0, 0, 0], &[0, 0, 0, 0]],
            [&[0, 0, 0, 1], &[1, 0, 0, 0]],
            [&[0, 0, 0, 0], &[0, 0, 0, 1]],
        ],
    )
    .unwrap()
}

/// Columns [y^3, x^3, 0] and [0, y^5, x^5]: degrees (3, 5), d = 8.
pub fn gz_35() -> HBMatrix {
    hb_from_coeff_lists(
        P,
        &[
            [&[1, 0, 0, 0], &[0, 0, 0, 0, 0, 0]],
            [&[0, 0, 0, 1], &[1, 0, 0, 0, 0, 0]],
            [&[0, 0, 0, 0], &[0, 0, 0, 0, 0, 1]],
        ],
    )
    .unwrap()
}
