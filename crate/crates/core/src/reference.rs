//! Published reference values, embedded so that reproduction needs no
//! external files. Each entry notes its table and row.

/// One row of Table 1: refined saddle and its asymptotic guess, as
/// `(re, im)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleRow {
    pub k: i64,
    pub refined: (f64, f64),
    pub approximate: (f64, f64),
}

pub const TABLE1_N: u32 = 1000;
pub const TABLE1_X: f64 = 2.0;

pub const TABLE1: [SaddleRow; 6] = [
    // Table 1, row k = 0
    SaddleRow {
        k: 0,
        refined: (0.0, 6.112742),
        approximate: (0.0, 6.323089),
    },
    // Table 1, row k = 1
    SaddleRow {
        k: 1,
        refined: (5.521734, 5.839316),
        approximate: (5.382118, 5.846300),
    },
    // Table 1, row k = 2
    SaddleRow {
        k: 2,
        refined: (11.427821, 5.387286),
        approximate: (11.372547, 5.323709),
    },
    // Table 1, row k = 3
    SaddleRow {
        k: 3,
        refined: (17.544733, 5.019893),
        approximate: (17.536813, 4.957375),
    },
    // Table 1, row k = 4
    SaddleRow {
        k: 4,
        refined: (23.741718, 4.737505),
        approximate: (23.757372, 4.684147),
    },
    // Table 1, row k = 5
    SaddleRow {
        k: 5,
        refined: (29.972889, 4.513009),
        approximate: (30.002189, 4.467837),
    },
];

/// A Table 2 column: relative errors for truncation `j = 0..=3` at `k = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorColumn {
    pub n: u32,
    pub x: f64,
    pub errors: [f64; 4],
}

pub const TABLE2: [ErrorColumn; 3] = [
    // Table 2, column n = 200, x = 1.10, rows j = 0..3
    ErrorColumn {
        n: 200,
        x: 1.10,
        errors: [1.338e-3, 1.913e-5, 3.197e-7, 3.053e-9],
    },
    // Table 2, column n = 400, x = 1.05, rows j = 0..3
    ErrorColumn {
        n: 400,
        x: 1.05,
        errors: [6.729e-4, 4.989e-6, 4.340e-8, 2.287e-10],
    },
    // Table 2, column n = 400, x = 1.50, rows j = 0..3
    ErrorColumn {
        n: 400,
        x: 1.50,
        errors: [5.802e-3, 1.716e-4, 2.179e-6, 4.686e-7],
    },
];

/// A Table 3 column: exact value, expansion, and the leading-order formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueColumn {
    pub n: u32,
    pub x: f64,
    pub exact: f64,
    pub asymptotic: f64,
    pub leading: f64,
}

pub const TABLE3: [ValueColumn; 4] = [
    // Table 3, column n = 200, x = 1.20 (rows: value, asymptotic, leading order)
    ValueColumn {
        n: 200,
        x: 1.20,
        exact: 8.562122063e9,
        asymptotic: 8.562122013e9,
        leading: 7.864432769e9,
    },
    // Table 3, column n = 200, x = 2
    ValueColumn {
        n: 200,
        x: 2.0,
        exact: 4.398555252e4,
        asymptotic: 4.398536817e4,
        leading: 4.712945605e4,
    },
    // Table 3, column n = 400, x = 1.10
    ValueColumn {
        n: 400,
        x: 1.10,
        exact: 9.488964463e18,
        asymptotic: 9.488964461e18,
        leading: 7.418083490e18,
    },
    // Table 3, column n = 1000, x = 2
    ValueColumn {
        n: 1000,
        x: 2.0,
        exact: 2.202064917e7,
        asymptotic: 2.202060088e7,
        leading: 2.370080869e7,
    },
];

/// A Table 4 column: `theta*/pi` for the pairs `(s_k, s_{k+1})`, `k = 1..=5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesColumn {
    pub n: u32,
    pub abs_x: f64,
    pub theta_pi: [f64; 5],
}

pub const TABLE4: [StokesColumn; 2] = [
    // Table 4, column n = 200, |x| = 2, rows s1 s2 .. s5 s6
    StokesColumn {
        n: 200,
        abs_x: 2.0,
        theta_pi: [0.12796, 0.05859, 0.03617, 0.02534, 0.01907],
    },
    // Table 4, column n = 100, |x| = 3, rows s1 s2 .. s5 s6
    StokesColumn {
        n: 100,
        abs_x: 3.0,
        theta_pi: [0.22172, 0.09844, 0.06070, 0.04264, 0.03220],
    },
];

pub const TABLE5_THETA_PI: [f64; 6] = [0.0, 0.10, 0.20, 0.30, 0.40, 0.50];

/// A Table 5 column: relative errors at the angles in [`TABLE5_THETA_PI`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexErrorColumn {
    pub n: u32,
    pub abs_x: f64,
    pub errors: [f64; 6],
}

pub const TABLE5: [ComplexErrorColumn; 3] = [
    // Table 5, column n = 200, |x| = 1.20, rows theta/pi = 0 .. 0.5
    ComplexErrorColumn {
        n: 200,
        abs_x: 1.20,
        errors: [5.919e-9, 3.391e-7, 4.315e-7, 3.856e-7, 2.808e-7, 5.379e-8],
    },
    // Table 5, column n = 200, |x| = 1.50
    ComplexErrorColumn {
        n: 200,
        abs_x: 1.50,
        errors: [5.329e-7, 1.303e-6, 3.413e-6, 1.077e-5, 7.425e-6, 4.089e-6],
    },
    // Table 5, column n = 1000, |x| = 2.00
    ComplexErrorColumn {
        n: 1000,
        abs_x: 2.0,
        errors: [2.206e-6, 3.564e-6, 3.216e-6, 6.450e-6, 1.029e-5, 2.245e-6],
    },
];

/// Figure 1: `n = 200`, `x = 2`, saddles with `|k| <= 2`.
pub const FIG1_N: u32 = 200;
pub const FIG1_X: f64 = 2.0;
pub const FIG1_K: (i64, i64) = (-2, 2);

/// Figure 2: `n = 100`, `x = 3 e^{i theta}`, saddles `-2 ..= 3` (`4` in panel d).
pub const FIG2_N: u32 = 100;
pub const FIG2_ABS_X: f64 = 3.0;
pub const FIG2_THETA_PI: [f64; 4] = [0.30, 0.22172, 0.18, 0.09844];

/// Figure 3: `log10 |J_k|` for `k <= 1`, `n = 200`, `theta = 0.4 pi`.
pub const FIG3_N: u32 = 200;
pub const FIG3_THETA_PI: f64 = 0.40;
pub const FIG3_ABS_X: [f64; 2] = [1.50, 1.10];
