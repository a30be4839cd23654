//! Published eigenvalues of `-u'' + e^x u = λ u`, `u(0) = u(π) = 0`.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceRow {
    pub index: usize,
    pub lambda: f64,
}

const fn row(index: usize, lambda: f64) -> ReferenceRow {
    ReferenceRow { index, lambda }
}

pub const EXP_ON_ZERO_PI: [ReferenceRow; 15] = [
    row(1, 4.8966693800),
    row(2, 10.045189893),
    row(3, 16.019267250),
    row(4, 23.266270940),
    row(5, 32.26370704),
    row(6, 43.2200196),
    row(7, 56.18159),
    row(8, 71.15299),
    row(9, 88.1321),
    row(10, 107.11),
    row(11, 128.10),
    row(17, 296.07),
    row(28, 791.05),
    row(43, 1856.05),
    row(50, 2507.0),
];
