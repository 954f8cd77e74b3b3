//! Published error tables used as regression references.

use thermoporo::steppers::Algorithm;

/// One published row: mesh `1/n`, step `1/dt_inv`, errors for
/// `(u, xi, p, T)` and the printed rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub n: usize,
    pub dt_inv: usize,
    pub errors: [f64; 4],
    pub rates: [f64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub algorithm: Algorithm,
    pub rows: &'static [Row],
}

/// One row of the timing table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingRow {
    pub algorithm: Algorithm,
    pub n: usize,
    pub dt_inv: usize,
    /// `(u, xi, p)`; the temperature error equals the pressure error.
    pub errors: [f64; 3],
    pub seconds: f64,
}

const fn row(n: usize, dt_inv: usize, errors: [f64; 4], rates: [f64; 4]) -> Row {
    Row {
        n,
        dt_inv,
        errors,
        rates,
    }
}

/// Published blocks for tables 1 to 6 (`index` 1-based).
pub fn table(index: usize) -> Option<&'static [Block; 3]> {
    match index {
        1 => Some(&T1),
        2 => Some(&T2),
        3 => Some(&T3),
        4 => Some(&T4),
        5 => Some(&T5),
        6 => Some(&T6),
        _ => None,
    }
}

pub fn block(index: usize, algorithm: Algorithm) -> Option<&'static Block> {
    table(index)?.iter().find(|b| b.algorithm == algorithm)
}

const fn timing(algorithm: Algorithm, n: usize, dt_inv: usize, errors: [f64; 3], seconds: f64) -> TimingRow {
    TimingRow {
        algorithm,
        n,
        dt_inv,
        errors,
        seconds,
    }
}

pub const TIMINGS: [TimingRow; 8] = [
    timing(Algorithm::Coupled, 40, 16, [1.24321e-2, 7.27150e-4, 4.79393e-2], 18.81),
    timing(Algorithm::Alg1, 40, 16, [6.39521e-3, 1.51777e-3, 3.20763e-2], 17.72),
    timing(Algorithm::Alg2, 40, 16, [6.03897e-3, 3.54112e-4, 3.21111e-2], 17.62),
    timing(Algorithm::Alg3, 40, 16, [6.35586e-3, 1.40841e-3, 3.21112e-2], 12.99),
    timing(Algorithm::Coupled, 80, 64, [3.07670e-3, 1.78298e-4, 1.82882e-2], 315.37),
    timing(Algorithm::Alg1, 80, 64, [1.59730e-3, 3.71409e-4, 1.60441e-2], 218.92),
    timing(Algorithm::Alg2, 80, 64, [1.51243e-3, 8.69072e-5, 1.60481e-2], 218.34),
    timing(Algorithm::Alg3, 80, 64, [1.89545e-3, 7.52876e-4, 1.60482e-2], 149.74),
];

const T1: [Block; 3] = [
    Block {
        algorithm: Algorithm::Alg1,
        rows: &[
            row(100, 4, [9.29453e-3, 6.56150e-3, 2.11256e-3, 2.11256e-3], [0.00, 0.00, 0.00, 0.00]),
            row(100, 8, [4.39597e-3, 3.10205e-3, 1.07128e-3, 1.07128e-3], [1.08, 1.08, 0.98, 0.98]),
            row(100, 16, [2.12920e-3, 1.50249e-3, 5.29565e-4, 5.29565e-4], [1.05, 1.05, 1.02, 1.02]),
            row(100, 32, [1.04795e-3, 7.39491e-4, 2.71087e-4, 2.71087e-4], [1.02, 1.02, 0.97, 0.97]),
        ],
    },
    Block {
        algorithm: Algorithm::Alg2,
        rows: &[
            row(100, 4, [1.95886e-4, 1.28501e-4, 5.66671e-3, 5.66671e-3], [0.00, 0.00, 0.00, 0.00]),
            row(100, 8, [8.99261e-5, 5.89748e-5, 2.59723e-3, 2.59723e-3], [1.12, 1.12, 1.13, 1.13]),
            row(100, 16, [4.29111e-5, 2.80573e-5, 1.23656e-3, 1.23656e-3], [1.07, 1.07, 1.07, 1.07]),
            row(100, 32, [2.11957e-5, 1.36906e-5, 6.05652e-4, 6.05652e-4], [1.02, 1.04, 1.03, 1.03]),
        ],
    },
    Block {
        algorithm: Algorithm::Alg3,
        rows: &[
            row(100, 4, [9.57140e-3, 6.73908e-3, 8.73308e-3, 8.73308e-3], [0.00, 0.00, 0.00, 0.00]),
            row(100, 8, [4.38019e-3, 3.09158e-3, 3.32851e-3, 3.32851e-3], [1.13, 1.12, 1.39, 1.39]),
            row(100, 16, [2.12228e-3, 1.49790e-3, 1.58728e-3, 1.58728e-3], [1.05, 1.05, 1.07, 1.07]),
            row(100, 32, [1.04475e-3, 7.37373e-4, 7.77336e-4, 7.77336e-4], [1.02, 1.02, 1.03, 1.03]),
        ],
    },
];

const T2: [Block; 3] = [
    Block {
        algorithm: Algorithm::Alg1,
        rows: &[
            row(4, 4, [5.29628e-1, 4.91620e-2, 3.02301e-1, 3.02301e-1], [0.00, 0.00, 0.00, 0.00]),
            row(8, 16, [1.45381e-1, 1.02735e-2, 1.57993e-1, 1.57993e-1], [1.87, 2.26, 0.94, 0.94]),
            row(16, 64, [3.73924e-2, 2.33722e-3, 7.99174e-2, 7.99174e-2], [1.96, 2.14, 0.98, 0.98]),
            row(32, 256, [9.42505e-3, 5.57864e-4, 4.00760e-2, 4.00760e-2], [1.99, 2.07, 1.00, 1.00]),
        ],
    },
    Block {
        algorithm: Algorithm::Alg2,
        rows: &[
            row(4, 4, [5.29605e-1, 4.90077e-2, 3.02384e-1, 3.02384e-1], [0.00, 0.00, 0.00, 0.00]),
            row(8, 16, [1.45382e-1, 1.02347e-2, 1.58000e-1, 1.58000e-1], [1.87, 2.26, 0.94, 0.94]),
            row(16, 64, [3.73916e-2, 2.32840e-3, 7.99183e-2, 7.99183e-2], [1.96, 2.14, 0.98, 0.98]),
            row(32, 256, [9.42474e-3, 5.55640e-4, 4.00761e-2, 4.00761e-2], [1.99, 2.07, 1.00, 1.00]),
        ],
    },
    Block {
        algorithm: Algorithm::Alg3,
        rows: &[
            row(4, 4, [5.29632e-1, 4.91909e-2, 3.02412e-1, 3.02412e-1], [0.00, 0.00, 0.00, 0.00]),
            row(8, 16, [1.45381e-1, 1.02732e-2, 1.58001e-1, 1.58001e-1], [1.87, 2.26, 0.94, 0.94]),
            row(16, 64, [3.73924e-2, 2.33712e-3, 7.99183e-2, 7.99183e-2], [1.96, 2.14, 0.98, 0.98]),
            row(32, 256, [9.42505e-3, 5.57838e-4, 4.00761e-2, 4.00761e-2], [1.99, 2.07, 1.00, 1.00]),
        ],
    },
];

const T3: [Block; 3] = [
    Block {
        algorithm: Algorithm::Alg1,
        rows: &[
            row(4, 4, [5.31500e-1, 8.12844e-2, 3.02292e-1, 3.02292e-1], [0.00, 0.00, 0.00, 0.00]),
            row(8, 16, [1.44893e-1, 1.69645e-2, 1.57992e-1, 1.57992e-1], [1.88, 2.26, 0.94, 0.94]),
            row(16, 64, [3.71832e-2, 3.85817e-3, 7.99173e-2, 7.99173e-2], [1.96, 2.14, 0.98, 0.98]),
            row(32, 256, [9.36341e-3, 9.20524e-4, 4.00760e-2, 4.00760e-2], [1.99, 2.07, 1.00, 1.00]),
        ],
    },
    Block {
        algorithm: Algorithm::Alg2,
        rows: &[
            row(4, 4, [5.31500e-1, 8.12848e-2, 3.02292e-1, 3.02292e-1], [0.00, 0.00, 0.00, 0.00]),
            row(8, 16, [1.44893e-1, 1.69645e-2, 1.57992e-1, 1.57992e-1], [1.88, 2.26, 0.94, 0.94]),
            row(16, 64, [3.71832e-2, 3.85817e-3, 7.99173e-2, 7.99173e-2], [1.96, 2.14, 0.98, 0.98]),
            row(32, 256, [9.36341e-3, 9.20525e-4, 4.00760e-2, 4.00760e-2], [1.99, 2.07, 1.00, 1.00]),
        ],
    },
    Block {
        algorithm: Algorithm::Alg3,
        rows: &[
            row(4, 4, [5.31500e-1, 8.12848e-2, 3.02292e-1, 3.02292e-1], [0.00, 0.00, 0.00, 0.00]),
            row(8, 16, [1.44893e-1, 1.69645e-2, 1.57992e-1, 1.57992e-1], [1.88, 2.26, 0.94, 0.94]),
            row(16, 64, [3.71832e-2, 3.85818e-3, 7.99173e-2, 7.99173e-2], [1.96, 2.14, 0.98, 0.98]),
            row(32, 256, [9.36341e-3, 9.20527e-4, 4.00760e-2, 4.00760e-2], [1.99, 2.07, 1.00, 1.00]),
        ],
    },
];

const T4: [Block; 3] = [
    Block {
        algorithm: Algorithm::Alg1,
        rows: &[
            row(4, 4, [5.31064e-1, 5.57542e-2, 1.45521e0, 1.45521e0], [0.00, 0.00, 0.00, 0.00]),
            row(8, 16, [1.45550e-1, 1.13585e-2, 3.47429e-1, 3.47429e-1], [1.87, 2.30, 2.07, 2.07]),
            row(16, 64, [3.74274e-2, 2.58736e-3, 1.18131e-1, 1.18131e-1], [1.96, 2.13, 1.56, 1.56]),
            row(32, 256, [9.43357e-3, 6.21199e-4, 4.87617e-2, 4.87617e-2], [1.99, 2.06, 1.28, 1.28]),
        ],
    },
    Block {
        algorithm: Algorithm::Alg2,
        rows: &[
            row(4, 4, [5.45108e-1, 9.82855e-2, 5.18007e0, 5.18007e0], [0.00, 0.00, 0.00, 0.00]),
            row(8, 16, [1.48831e-1, 2.36988e-2, 1.42800e0, 1.42800e0], [1.87, 2.05, 1.86, 1.86]),
            row(16, 64, [3.82371e-2, 5.89795e-3, 4.44011e-1, 4.44011e-1], [1.96, 2.01, 1.69, 1.69]),
            row(32, 256, [9.63697e-3, 1.48007e-3, 1.48932e-1, 1.48932e-1], [1.99, 1.99, 1.58, 1.58]),
        ],
    },
    Block {
        algorithm: Algorithm::Alg3,
        rows: &[
            row(4, 4, [5.46667e-1, 1.01699e-1, 5.51540e0, 5.51540e0], [0.00, 0.00, 0.00, 0.00]),
            row(8, 16, [1.49023e-1, 2.42561e-2, 1.43422e0, 1.43422e0], [1.88, 2.07, 1.94, 1.94]),
            row(16, 64, [3.82504e-2, 5.93879e-3, 4.44442e-1, 4.44442e-1], [1.96, 2.03, 1.69, 1.69]),
            row(32, 256, [9.63836e-3, 1.48426e-3, 1.48960e-1, 1.48960e-1], [1.99, 2.00, 1.58, 1.58]),
        ],
    },
];

const T5: [Block; 3] = [
    Block {
        algorithm: Algorithm::Alg1,
        rows: &[
            row(4, 4, [5.29627e-1, 4.91569e-2, 3.02304e-1, 3.02304e-1], [0.00, 0.00, 0.00, 0.00]),
            row(8, 16, [1.45381e-1, 1.02731e-2, 1.57994e-1, 1.57994e-1], [1.87, 2.26, 0.94, 0.94]),
            row(16, 64, [3.73924e-2, 2.33711e-3, 7.99175e-2, 7.99175e-2], [1.96, 2.14, 0.98, 0.98]),
            row(32, 256, [9.42505e-3, 5.57838e-4, 4.00760e-2, 4.00760e-2], [1.99, 2.07, 1.00, 1.00]),
        ],
    },
    Block {
        algorithm: Algorithm::Alg2,
        rows: &[
            row(4, 4, [5.29605e-1, 4.90075e-2, 3.02376e-1, 3.02376e-1], [0.00, 0.00, 0.00, 0.00]),
            row(8, 16, [1.45383e-1, 1.02348e-2, 1.58000e-1, 1.58000e-1], [1.87, 2.26, 0.94, 0.94]),
            row(16, 64, [3.73916e-2, 2.32842e-3, 7.99183e-2, 7.99183e-2], [1.96, 2.14, 0.98, 0.98]),
            row(32, 256, [9.42474e-3, 5.55646e-4, 4.00761e-2, 4.00761e-2], [1.99, 2.07, 1.00, 1.00]),
        ],
    },
    Block {
        algorithm: Algorithm::Alg3,
        rows: &[
            row(4, 4, [5.29631e-1, 4.91874e-2, 3.02416e-1, 3.02416e-1], [0.00, 0.00, 0.00, 0.00]),
            row(8, 16, [1.45381e-1, 1.02728e-2, 1.58001e-1, 1.58001e-1], [1.87, 2.26, 0.94, 0.94]),
            row(16, 64, [3.73924e-2, 2.33702e-3, 7.99183e-2, 7.99183e-2], [1.96, 2.14, 0.98, 0.98]),
            row(32, 256, [9.42505e-3, 5.57811e-4, 4.00761e-2, 4.00761e-2], [1.99, 2.07, 1.00, 1.00]),
        ],
    },
];

const T6: [Block; 3] = [
    Block {
        algorithm: Algorithm::Alg1,
        rows: &[
            row(4, 4, [8.09611e-2, 8.19948e-3, 4.56916e-2, 4.56916e-2], [0.00, 0.00, 0.00, 0.00]),
            row(8, 32, [9.88801e-3, 9.71218e-4, 1.20166e-2, 1.20166e-2], [3.03, 3.08, 1.93, 1.93]),
            row(16, 256, [1.21073e-3, 1.20517e-4, 3.06306e-3, 3.06306e-3], [3.03, 3.01, 1.97, 1.97]),
            row(32, 2048, [1.49978e-4, 1.50972e-5, 7.71742e-4, 7.71742e-4], [3.01, 3.00, 1.99, 1.99]),
        ],
    },
    Block {
        algorithm: Algorithm::Alg2,
        rows: &[
            row(4, 4, [8.05726e-2, 4.82364e-3, 4.64195e-2, 4.64195e-2], [0.00, 0.00, 0.00, 0.00]),
            row(8, 32, [9.83676e-3, 6.32308e-4, 1.20387e-2, 1.20387e-2], [3.03, 2.93, 1.95, 1.95]),
            row(16, 256, [1.20393e-3, 7.92300e-5, 3.06436e-3, 3.06436e-3], [3.03, 3.00, 1.97, 1.97]),
            row(32, 2048, [1.49112e-4, 9.95343e-6, 7.71822e-4, 7.71822e-4], [3.01, 2.99, 1.99, 1.99]),
        ],
    },
    Block {
        algorithm: Algorithm::Alg3,
        rows: &[
            row(4, 4, [8.09976e-2, 8.32873e-3, 4.64683e-2, 4.64683e-2], [0.00, 0.00, 0.00, 0.00]),
            row(8, 32, [9.88775e-3, 9.69498e-4, 1.20387e-2, 1.20387e-2], [3.03, 3.10, 1.95, 1.95]),
            row(16, 256, [1.21070e-3, 1.20323e-4, 3.06436e-3, 3.06436e-3], [3.03, 3.01, 1.97, 1.97]),
            row(32, 2048, [1.49973e-4, 1.50737e-5, 7.71822e-4, 7.71822e-4], [3.01, 3.00, 1.99, 1.99]),
        ],
    },
];
