use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Mul;

use crate::lattice::C64;

/// A 2×2 unitary acting on the coin of one site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinOperator {
    m: [[C64; 2]; 2],
}

impl CoinOperator {
    pub const fn from_entries(m: [[C64; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self::real([[1.0, 0.0], [0.0, 1.0]])
    }

    /// `(1/√2) [[1, 1], [1, −1]]`
    pub fn hadamard() -> Self {
        Self::real([[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]])
    }

    /// `R(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`, period 4π in θ.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = (0.5 * theta).sin_cos();
        Self::real([[c, -s], [s, c]])
    }

    fn real(m: [[f64; 2]; 2]) -> Self {
        Self {
            m: [
                [C64::new(m[0][0], 0.0), C64::new(m[0][1], 0.0)],
                [C64::new(m[1][0], 0.0), C64::new(m[1][1], 0.0)],
            ],
        }
    }

    pub fn entries(&self) -> &[[C64; 2]; 2] {
        &self.m
    }

    #[inline]
    pub fn apply(&self, v0: C64, v1: C64) -> (C64, C64) {
        (
            self.m[0][0] * v0 + self.m[0][1] * v1,
            self.m[1][0] * v0 + self.m[1][1] * v1,
        )
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self {
            m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]],
        }
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// `max |(C†C − I)_rs|`
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint() * *self;
        let id = Self::identity();
        let mut worst = 0.0_f64;
        for r in 0..2 {
            for s in 0..2 {
                worst = worst.max((p.m[r][s] - id.m[r][s]).norm());
            }
        }
        worst
    }
}

impl Mul for CoinOperator {
    type Output = CoinOperator;

    fn mul(self, rhs: CoinOperator) -> CoinOperator {
        let (a, b) = (&self.m, &rhs.m);
        let mut m = [[C64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for s in 0..2 {
                m[r][s] = a[r][0] * b[0][s] + a[r][1] * b[1][s];
            }
        }
        CoinOperator { m }
    }
}
