//! Single-qubit operator algebra.
//!
//! The nine named operators (the zero operator, the two projectors, the two
//! transition operators and the four Pauli matrices) close under
//! multiplication up to a coefficient in `{0, ±1, ±i}`. The product table is
//! stored explicitly; matrices exist only to check it.
//!
//! Matrices use the column convention `|1) = [1, 0]ᵀ`, `|0) = [0, 1]ᵀ`, so
//! row/column 0 is the "yes" component. Register code that works on integer
//! keys uses [`SiteOp::act`] instead and never touches these matrices.

use std::fmt;
use std::ops::Mul;

use nalgebra::Matrix2;
use num_complex::{Complex, Complex64};

/// Exact Gaussian-integer 2×2 matrix, rows/columns ordered `(|1), |0))`.
pub type ExactMatrix = [[Complex<i64>; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SiteOp {
    Zero,
    P0,
    P1,
    A,
    Aplus,
    Sigma0,
    Sigma1,
    Sigma2,
    Sigma3,
}

impl SiteOp {
    pub const ALL: [SiteOp; 9] = [
        SiteOp::Zero,
        SiteOp::P0,
        SiteOp::P1,
        SiteOp::A,
        SiteOp::Aplus,
        SiteOp::Sigma0,
        SiteOp::Sigma1,
        SiteOp::Sigma2,
        SiteOp::Sigma3,
    ];

    pub fn adjoint(self) -> SiteOp {
        match self {
            SiteOp::A => SiteOp::Aplus,
            SiteOp::Aplus => SiteOp::A,
            other => other,
        }
    }

    /// Circuit mnemonic. The zero operator has none.
    pub fn mnemonic(self) -> Option<&'static str> {
        Some(match self {
            SiteOp::Zero => return None,
            SiteOp::P0 => "P0",
            SiteOp::P1 => "P1",
            SiteOp::A => "A",
            SiteOp::Aplus => "A+",
            SiteOp::Sigma0 => "S0",
            SiteOp::Sigma1 => "S1",
            SiteOp::Sigma2 => "S2",
            SiteOp::Sigma3 => "S3",
        })
    }

    pub fn from_mnemonic(s: &str) -> Option<SiteOp> {
        Some(match s {
            "P0" => SiteOp::P0,
            "P1" => SiteOp::P1,
            "A" => SiteOp::A,
            "A+" => SiteOp::Aplus,
            "S0" => SiteOp::Sigma0,
            "S1" => SiteOp::Sigma1,
            "S2" => SiteOp::Sigma2,
            "S3" => SiteOp::Sigma3,
            _ => return None,
        })
    }

    /// Action on a single computational-basis bit: every named operator is
    /// monomial, so `op|bit)` is either zero or `coeff·|bit')`.
    pub fn act(self, bit: bool) -> Option<(bool, Unit)> {
        match (self, bit) {
            (SiteOp::Zero, _) => None,
            (SiteOp::P0, false) => Some((false, Unit::One)),
            (SiteOp::P0, true) => None,
            (SiteOp::P1, true) => Some((true, Unit::One)),
            (SiteOp::P1, false) => None,
            (SiteOp::A, true) => Some((false, Unit::One)),
            (SiteOp::A, false) => None,
            (SiteOp::Aplus, false) => Some((true, Unit::One)),
            (SiteOp::Aplus, true) => None,
            (SiteOp::Sigma0, b) => Some((b, Unit::One)),
            (SiteOp::Sigma1, b) => Some((!b, Unit::One)),
            (SiteOp::Sigma2, true) => Some((false, Unit::I)),
            (SiteOp::Sigma2, false) => Some((true, Unit::MinusI)),
            (SiteOp::Sigma3, true) => Some((true, Unit::One)),
            (SiteOp::Sigma3, false) => Some((false, Unit::MinusOne)),
        }
    }

    pub fn exact_matrix(self) -> ExactMatrix {
        let z = Complex::new(0, 0);
        let o = Complex::new(1, 0);
        let i = Complex::new(0, 1);
        match self {
            SiteOp::Zero => [[z, z], [z, z]],
            SiteOp::P0 => [[z, z], [z, o]],
            SiteOp::P1 => [[o, z], [z, z]],
            SiteOp::A => [[z, z], [o, z]],
            SiteOp::Aplus => [[z, o], [z, z]],
            SiteOp::Sigma0 => [[o, z], [z, o]],
            SiteOp::Sigma1 => [[z, o], [o, z]],
            SiteOp::Sigma2 => [[z, -i], [i, z]],
            SiteOp::Sigma3 => [[o, z], [z, -o]],
        }
    }

    pub fn matrix(self) -> Matrix2<Complex64> {
        exact_to_numeric(&self.exact_matrix())
    }
}

impl fmt::Display for SiteOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic().unwrap_or("0"))
    }
}

/// Coefficient from `{0, 1, i, -1, -i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    Zero,
    One,
    I,
    MinusOne,
    MinusI,
}

impl Unit {
    fn quarter_turns(self) -> Option<u8> {
        match self {
            Unit::Zero => None,
            Unit::One => Some(0),
            Unit::I => Some(1),
            Unit::MinusOne => Some(2),
            Unit::MinusI => Some(3),
        }
    }

    fn from_quarter_turns(k: u8) -> Unit {
        match k % 4 {
            0 => Unit::One,
            1 => Unit::I,
            2 => Unit::MinusOne,
            _ => Unit::MinusI,
        }
    }

    pub fn conj(self) -> Unit {
        match self {
            Unit::I => Unit::MinusI,
            Unit::MinusI => Unit::I,
            other => other,
        }
    }

    pub fn exact(self) -> Complex<i64> {
        match self {
            Unit::Zero => Complex::new(0, 0),
            Unit::One => Complex::new(1, 0),
            Unit::I => Complex::new(0, 1),
            Unit::MinusOne => Complex::new(-1, 0),
            Unit::MinusI => Complex::new(0, -1),
        }
    }

    pub fn to_complex(self) -> Complex64 {
        let e = self.exact();
        Complex64::new(e.re as f64, e.im as f64)
    }
}

impl Mul for Unit {
    type Output = Unit;

    // Phases multiply by adding quarter turns.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Unit) -> Unit {
        match (self.quarter_turns(), rhs.quarter_turns()) {
            (Some(a), Some(b)) => Unit::from_quarter_turns(a + b),
            _ => Unit::Zero,
        }
    }
}

/// A named operator with an exact unit coefficient. Zero is normalised to
/// `(Zero, Zero)` so that equality is structural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScaledSiteOp {
    coeff: Unit,
    op: SiteOp,
}

impl ScaledSiteOp {
    pub const ZERO: ScaledSiteOp = ScaledSiteOp {
        coeff: Unit::Zero,
        op: SiteOp::Zero,
    };

    pub fn new(coeff: Unit, op: SiteOp) -> Self {
        if coeff == Unit::Zero || op == SiteOp::Zero {
            Self::ZERO
        } else {
            ScaledSiteOp { coeff, op }
        }
    }

    pub fn coeff(&self) -> Unit {
        self.coeff
    }

    pub fn op(&self) -> SiteOp {
        self.op
    }

    pub fn is_zero(&self) -> bool {
        self.op == SiteOp::Zero
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.coeff.conj(), self.op.adjoint())
    }
}

impl From<SiteOp> for ScaledSiteOp {
    fn from(op: SiteOp) -> Self {
        ScaledSiteOp::new(Unit::One, op)
    }
}

impl Mul for ScaledSiteOp {
    type Output = ScaledSiteOp;

    fn mul(self, rhs: ScaledSiteOp) -> ScaledSiteOp {
        op_product(self, rhs)
    }
}

impl fmt::Display for ScaledSiteOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.coeff {
            Unit::Zero => return f.write_str("0"),
            Unit::One => "",
            Unit::I => "i",
            Unit::MinusOne => "-",
            Unit::MinusI => "-i",
        };
        write!(f, "{prefix}{}", self.op)
    }
}

/// Raw product table over the nine named kinds.
fn table(a: SiteOp, b: SiteOp) -> ScaledSiteOp {
    use SiteOp::*;
    use Unit::{MinusI as Mi, MinusOne as M, One as O, I};

    let s = ScaledSiteOp::new;
    match (a, b) {
        (Zero, _) | (_, Zero) => ScaledSiteOp::ZERO,
        (Sigma0, x) | (x, Sigma0) => s(O, x),

        (P0, P0) => s(O, P0),
        (P0, P1) => ScaledSiteOp::ZERO,
        (P0, A) => s(O, A),
        (P0, Aplus) => ScaledSiteOp::ZERO,
        (P0, Sigma1) => s(O, A),
        (P0, Sigma2) => s(I, A),
        (P0, Sigma3) => s(M, P0),

        (P1, P0) => ScaledSiteOp::ZERO,
        (P1, P1) => s(O, P1),
        (P1, A) => ScaledSiteOp::ZERO,
        (P1, Aplus) => s(O, Aplus),
        (P1, Sigma1) => s(O, Aplus),
        (P1, Sigma2) => s(Mi, Aplus),
        (P1, Sigma3) => s(O, P1),

        (A, P0) => ScaledSiteOp::ZERO,
        (A, P1) => s(O, A),
        (A, A) => ScaledSiteOp::ZERO,
        (A, Aplus) => s(O, P0),
        (A, Sigma1) => s(O, P0),
        (A, Sigma2) => s(Mi, P0),
        (A, Sigma3) => s(O, A),

        (Aplus, P0) => s(O, Aplus),
        (Aplus, P1) => ScaledSiteOp::ZERO,
        (Aplus, A) => s(O, P1),
        (Aplus, Aplus) => ScaledSiteOp::ZERO,
        (Aplus, Sigma1) => s(O, P1),
        (Aplus, Sigma2) => s(I, P1),
        (Aplus, Sigma3) => s(M, Aplus),

        (Sigma1, P0) => s(O, Aplus),
        (Sigma1, P1) => s(O, A),
        (Sigma1, A) => s(O, P1),
        (Sigma1, Aplus) => s(O, P0),
        (Sigma1, Sigma1) => s(O, Sigma0),
        (Sigma1, Sigma2) => s(I, Sigma3),
        (Sigma1, Sigma3) => s(Mi, Sigma2),

        (Sigma2, P0) => s(Mi, Aplus),
        (Sigma2, P1) => s(I, A),
        (Sigma2, A) => s(Mi, P1),
        (Sigma2, Aplus) => s(I, P0),
        (Sigma2, Sigma1) => s(Mi, Sigma3),
        (Sigma2, Sigma2) => s(O, Sigma0),
        (Sigma2, Sigma3) => s(I, Sigma1),

        (Sigma3, P0) => s(M, P0),
        (Sigma3, P1) => s(O, P1),
        (Sigma3, A) => s(M, A),
        (Sigma3, Aplus) => s(O, Aplus),
        (Sigma3, Sigma1) => s(I, Sigma2),
        (Sigma3, Sigma2) => s(Mi, Sigma1),
        (Sigma3, Sigma3) => s(O, Sigma0),
    }
}

/// Exact product `a·b` read from the table, coefficients multiplied.
pub fn op_product(a: ScaledSiteOp, b: ScaledSiteOp) -> ScaledSiteOp {
    let entry = table(a.op, b.op);
    ScaledSiteOp::new(a.coeff * b.coeff * entry.coeff, entry.op)
}

pub fn op_matrix_exact(a: ScaledSiteOp) -> ExactMatrix {
    let c = a.coeff.exact();
    let m = a.op.exact_matrix();
    [[c * m[0][0], c * m[0][1]], [c * m[1][0], c * m[1][1]]]
}

pub fn op_matrix(a: ScaledSiteOp) -> Matrix2<Complex64> {
    exact_to_numeric(&op_matrix_exact(a))
}

pub fn exact_matmul(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let mut out = [[Complex::new(0, 0); 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

fn exact_to_numeric(m: &ExactMatrix) -> Matrix2<Complex64> {
    let f = |z: Complex<i64>| Complex64::new(z.re as f64, z.im as f64);
    Matrix2::new(f(m[0][0]), f(m[0][1]), f(m[1][0]), f(m[1][1]))
}

/// Local rephasing `diag(e^{-iα}, e^{-iβ})` in `(|1), |0))` order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTransform {
    pub alpha: f64,
    pub beta: f64,
}

impl PhaseTransform {
    pub fn new(alpha: f64, beta: f64) -> Self {
        PhaseTransform { alpha, beta }
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        Matrix2::new(
            Complex64::from_polar(1.0, -self.alpha),
            zero,
            zero,
            Complex64::from_polar(1.0, -self.beta),
        )
    }

    /// `U·m·U⁺` for an arbitrary 2×2 matrix.
    pub fn conjugate(&self, m: &Matrix2<Complex64>) -> Matrix2<Complex64> {
        let u = self.matrix();
        u * m * u.adjoint()
    }
}

pub fn phase_conjugate(op: SiteOp, u: PhaseTransform) -> Matrix2<Complex64> {
    u.conjugate(&op.matrix())
}
