//! Published convergence tables, used as reference data by `compare`.

use std::fmt;
use std::str::FromStr;

use curveflow_core::{CurveScheme, Example, TimeRule};

use crate::error::AppError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableId {
    T1L,
    T1R,
    T2L,
    T2R,
    T3,
    T4,
}

/// Relative tolerance on error cells and absolute tolerance on eoc cells.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub relative: f64,
    pub eoc: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceRow {
    pub elements: usize,
    pub steps: usize,
    /// `E_1..E_5`; `None` where the table has no column.
    pub errors: [Option<f64>; 5],
    pub eocs: [Option<f64>; 5],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceTable {
    pub id: TableId,
    pub example: Example,
    pub alpha: f64,
    pub scheme: CurveScheme,
    pub rows: &'static [ReferenceRow],
}

impl ReferenceTable {
    /// Error indices `i` with a column `E_i`.
    pub fn columns(&self) -> Vec<usize> {
        (1..=5)
            .filter(|&i| self.rows[0].errors[i - 1].is_some())
            .collect()
    }

    pub fn levels(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.elements).collect()
    }

    pub fn time_rule(&self) -> TimeRule {
        TimeRule::HSquared
    }
}

const fn row(
    elements: usize,
    steps: usize,
    errors: [Option<f64>; 5],
    eocs: [Option<f64>; 5],
) -> ReferenceRow {
    ReferenceRow {
        elements,
        steps,
        errors,
        eocs,
    }
}

const N: Option<f64> = None;

// Semicircle, α = 1.
const T1L: [ReferenceRow; 4] = [
    row(10, 40, [Some(4.672e-3), Some(20.16e-4), N, N, N], [N; 5]),
    row(
        20,
        160,
        [Some(0.3997e-3), Some(1.859e-4), N, N, N],
        [Some(3.55), Some(3.44), N, N, N],
    ),
    row(
        40,
        640,
        [Some(0.02726e-3), Some(0.1298e-4), N, N, N],
        [Some(3.87), Some(3.84), N, N, N],
    ),
    row(
        80,
        2560,
        [Some(0.001742e-3), Some(0.008347e-4), N, N, N],
        [Some(3.97), Some(3.96), N, N, N],
    ),
];

// Semicircle, α = 0.5.
const T1R: [ReferenceRow; 4] = [
    row(10, 40, [Some(1.589e-3), Some(8.884e-4), N, N, N], [N; 5]),
    row(
        20,
        160,
        [Some(0.1389e-3), Some(0.8302e-4), N, N, N],
        [Some(3.52), Some(3.42), N, N, N],
    ),
    row(
        40,
        640,
        [Some(0.009514e-3), Some(0.05798e-4), N, N, N],
        [Some(3.87), Some(3.84), N, N, N],
    ),
    row(
        80,
        2560,
        [Some(0.0006087e-3), Some(0.003729e-4), N, N, N],
        [Some(3.97), Some(3.96), N, N, N],
    ),
];

// Rotating diameter, α = 1.
const T2L: [ReferenceRow; 4] = [
    row(10, 50, [Some(1.440e-4), Some(3.040e-5), N, N, N], [N; 5]),
    row(
        20,
        200,
        [Some(0.09198e-4), Some(0.1925e-5), N, N, N],
        [Some(3.97), Some(3.98), N, N, N],
    ),
    row(
        40,
        800,
        [Some(0.005780e-4), Some(0.01207e-5), N, N, N],
        [Some(3.99), Some(4.00), N, N, N],
    ),
    row(
        80,
        3200,
        [Some(0.0003617e-4), Some(0.0007552e-5), N, N, N],
        [Some(4.00), Some(4.00), N, N, N],
    ),
];

// Rotating diameter, α = 0.5.
const T2R: [ReferenceRow; 4] = [
    row(10, 50, [Some(1.181e-4), Some(2.710e-5), N, N, N], [N; 5]),
    row(
        20,
        200,
        [Some(0.07459e-4), Some(0.1716e-5), N, N, N],
        [Some(3.98), Some(3.98), N, N, N],
    ),
    row(
        40,
        800,
        [Some(0.004674e-4), Some(0.01076e-5), N, N, N],
        [Some(4.00), Some(4.00), N, N, N],
    ),
    row(
        80,
        3200,
        [Some(0.0002923e-4), Some(0.0006727e-5), N, N, N],
        [Some(4.00), Some(4.00), N, N, N],
    ),
];

// Rotating diameter, α = 1, linear scheme.
const T3: [ReferenceRow; 4] = [
    row(
        10,
        50,
        [Some(43.83e-4), Some(76.20e-5), Some(5.771e-3), N, N],
        [N; 5],
    ),
    row(
        20,
        200,
        [Some(3.175e-4), Some(5.442e-5), Some(1.563e-3), N, N],
        [Some(3.79), Some(3.81), Some(0.94), N, N],
    ),
    row(
        40,
        800,
        [Some(0.2076e-4), Some(0.3542e-5), Some(0.3989e-3), N, N],
        [Some(3.93), Some(3.94), Some(0.99), N, N],
    ),
    row(
        80,
        3200,
        [Some(0.01317e-4), Some(0.02243e-5), Some(0.1003e-3), N, N],
        [Some(3.98), Some(3.98), Some(1.00), N, N],
    ),
];

// Coupled diameter and parabola, α = 0.5.
const T4: [ReferenceRow; 4] = [
    row(
        10,
        50,
        [
            Some(1.205e-4),
            Some(3.756e-5),
            N,
            Some(1.207e-6),
            Some(3.073e-6),
        ],
        [N; 5],
    ),
    row(
        20,
        200,
        [
            Some(0.07643e-4),
            Some(0.2453e-5),
            N,
            Some(0.07829e-6),
            Some(0.2010e-6),
        ],
        [Some(3.98), Some(3.94), N, Some(3.95), Some(3.93)],
    ),
    row(
        40,
        800,
        [
            Some(0.004795e-4),
            Some(0.01551e-5),
            N,
            Some(0.004937e-6),
            Some(0.01271e-6),
        ],
        [Some(3.99), Some(3.98), N, Some(3.99), Some(3.98)],
    ),
    row(
        80,
        3200,
        [
            Some(0.0003000e-4),
            Some(0.0009721e-5),
            N,
            Some(0.0003093e-6),
            Some(0.0007967e-6),
        ],
        [Some(4.00), Some(4.00), N, Some(4.00), Some(4.00)],
    ),
];

impl TableId {
    pub const ALL: [TableId; 6] = [
        TableId::T1L,
        TableId::T1R,
        TableId::T2L,
        TableId::T2R,
        TableId::T3,
        TableId::T4,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TableId::T1L => "t1l",
            TableId::T1R => "t1r",
            TableId::T2L => "t2l",
            TableId::T2R => "t2r",
            TableId::T3 => "t3",
            TableId::T4 => "t4",
        }
    }

    pub fn reference(&self) -> ReferenceTable {
        let (example, alpha, scheme, rows): (_, _, _, &'static [ReferenceRow]) = match self {
            TableId::T1L => (Example::Semicircle, 1.0, CurveScheme::Newton, &T1L),
            TableId::T1R => (Example::Semicircle, 0.5, CurveScheme::Newton, &T1R),
            TableId::T2L => (Example::Diameter, 1.0, CurveScheme::Newton, &T2L),
            TableId::T2R => (Example::Diameter, 0.5, CurveScheme::Newton, &T2R),
            TableId::T3 => (Example::Diameter, 1.0, CurveScheme::Linear, &T3),
            TableId::T4 => (Example::Coupled, 0.5, CurveScheme::Newton, &T4),
        };
        ReferenceTable {
            id: *self,
            example,
            alpha,
            scheme,
            rows,
        }
    }

    /// Acceptance tolerances for each table.
    pub fn default_tolerance(&self) -> Tolerance {
        match self {
            TableId::T1L | TableId::T1R => Tolerance {
                relative: 0.005,
                eoc: 0.02,
            },
            TableId::T2L | TableId::T2R | TableId::T4 => Tolerance {
                relative: 0.05,
                eoc: 0.05,
            },
            TableId::T3 => Tolerance {
                relative: 0.10,
                eoc: 0.1,
            },
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self, AppError> {
        TableId::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                AppError::Config(format!(
                    "unknown table '{s}' (expected t1l, t1r, t2l, t2r, t3 or t4)"
                ))
            })
    }
}
