//! Coin matrices and the move-operator algebra.
//!
//! A coin is a 2×2 unitary U = \[\[a,b\],\[c,d\]\] acting on the chirality space
//! span{|L⟩, |R⟩}. Its rows generate the four move operators
//!
//! ```text
//! P = |L⟩⟨L|U    (keep the upper row: contribute to the site on the left)
//! Q = |R⟩⟨R|U    (keep the lower row: contribute to the site on the right)
//! R = |L⟩⟨R|U
//! S = |R⟩⟨L|U
//! ```
//!
//! with P + Q = U. Every n-step passage weight from the origin starts with
//! P₀ or Q₀ (the first factor uses the origin coin), and left-multiplying by
//! later moves never leaves the span of {P₀, Q₀, R₀, S₀}: the product rule
//!
//! ```text
//! (|i⟩⟨j|Uₓ)(|k⟩⟨l|U₀) = (Uₓ)ⱼₖ · |i⟩⟨l|U₀
//! ```
//!
//! closes the algebra, so a weight is just four complex coefficients
//! ([`PqrsWeight`]). [`pqrs_left_multiply`] applies one move in that
//! representation; [`pqrs_decompose`] recovers the coefficients of a dense
//! matrix. Both are exercised against dense arithmetic in the tests.

use num_complex::Complex64;

use crate::{Error, Result};

/// Entrywise tolerance for the unitarity check at coin construction.
pub const UNITARITY_TOL: f64 = 1e-12;

/// A general 2×2 complex matrix, row-major \[\[a,b\],\[c,d\]\].
///
/// Used for passage weights, generating-function values, and anything else
/// that is not necessarily unitary. Coins live in [`CoinMatrix`], which
/// validates on construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2::from_reals(0.0, 0.0, 0.0, 0.0);
    pub const IDENTITY: Mat2 = Mat2::from_reals(1.0, 0.0, 0.0, 1.0);

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2 { a, b, c, d }
    }

    /// Matrix with real entries, handy for constants.
    pub const fn from_reals(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 {
            a: Complex64::new(a, 0.0),
            b: Complex64::new(b, 0.0),
            c: Complex64::new(c, 0.0),
            d: Complex64::new(d, 0.0),
        }
    }

    /// Entry by (row, column), each in {0, 1}.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        match (row, col) {
            (0, 0) => self.a,
            (0, 1) => self.b,
            (1, 0) => self.c,
            (1, 1) => self.d,
            _ => panic!("Mat2 index out of range: ({row}, {col})"),
        }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat2 {
        Mat2 {
            a: self.a.conj(),
            b: self.c.conj(),
            c: self.b.conj(),
            d: self.d.conj(),
        }
    }

    pub fn scaled(&self, k: Complex64) -> Mat2 {
        Mat2 {
            a: k * self.a,
            b: k * self.b,
            c: k * self.c,
            d: k * self.d,
        }
    }

    /// Matrix-vector product on a chirality spinor ᵀ[ψ^L, ψ^R].
    pub fn apply(&self, psi: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.a * psi[0] + self.b * psi[1],
            self.c * psi[0] + self.d * psi[1],
        ]
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.a
            .norm()
            .max(self.b.norm())
            .max(self.c.norm())
            .max(self.d.norm())
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }
}

impl std::ops::Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2 {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            c: self.c + rhs.c,
            d: self.d + rhs.d,
        }
    }
}

impl std::ops::Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2 {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
            c: self.c - rhs.c,
            d: self.d - rhs.d,
        }
    }
}

impl std::ops::Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2 {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }
}

/// Angle pair (ω, ω̃) for the one-parameter-per-entry coin family
/// [`make_coin`], each angle in [0, 2π).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinAngles {
    omega: f64,
    omega_tilde: f64,
}

impl CoinAngles {
    /// Checked constructor; both angles must lie in [0, 2π).
    pub fn new(omega: f64, omega_tilde: f64) -> Result<Self> {
        let tau = 2.0 * std::f64::consts::PI;
        if !(0.0..tau).contains(&omega) {
            return Err(Error::AngleRange {
                name: "omega",
                value: omega,
            });
        }
        if !(0.0..tau).contains(&omega_tilde) {
            return Err(Error::AngleRange {
                name: "omega_tilde",
                value: omega_tilde,
            });
        }
        Ok(CoinAngles { omega, omega_tilde })
    }

    /// Constructor that first reduces both angles into [0, 2π).
    pub fn wrapped(omega: f64, omega_tilde: f64) -> Self {
        let tau = 2.0 * std::f64::consts::PI;
        let wrap = |t: f64| {
            let r = t.rem_euclid(tau);
            // rem_euclid can return tau itself when t is a tiny negative
            // number, due to rounding.
            if r >= tau {
                0.0
            } else {
                r
            }
        };
        CoinAngles {
            omega: wrap(omega),
            omega_tilde: wrap(omega_tilde),
        }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn omega_tilde(&self) -> f64 {
        self.omega_tilde
    }
}

/// A validated unitary coin \[\[a,b\],\[c,d\]\].
///
/// The default constructor additionally rejects zero entries, because the
/// weight algebra and the continued-fraction machinery divide by entries.
/// Coins that legitimately carry zeros (the semi-infinite reflector, say)
/// come through [`CoinMatrix::new_permitting_zeros`] and can be used with
/// the engine and dense arithmetic only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinMatrix {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl CoinMatrix {
    /// Builds a coin, checking unitarity (entrywise 1e-12) and that no
    /// entry vanishes.
    ///
    /// # Errors
    ///
    /// [`Error::NotUnitary`] when UU† deviates from the identity;
    /// [`Error::SingularBasis`] when an entry is zero.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let coin = Self::new_permitting_zeros(a, b, c, d)?;
        if coin.has_zero_entry() {
            return Err(Error::SingularBasis);
        }
        Ok(coin)
    }

    /// Builds a coin checking unitarity only, allowing zero entries.
    ///
    /// # Errors
    ///
    /// [`Error::NotUnitary`] when UU† deviates from the identity.
    pub fn new_permitting_zeros(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
    ) -> Result<Self> {
        // UU† = I for a 2×2 reduces to unit rows plus row orthogonality.
        let row0 = (a.norm_sqr() + b.norm_sqr() - 1.0).abs();
        let row1 = (c.norm_sqr() + d.norm_sqr() - 1.0).abs();
        let cross = (a * c.conj() + b * d.conj()).norm();
        let deviation = row0.max(row1).max(cross);
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(CoinMatrix { a, b, c, d })
    }

    /// The Hadamard coin (1/√2)\[\[1,1\],\[1,−1\]\].
    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        CoinMatrix {
            a: Complex64::new(h, 0.0),
            b: Complex64::new(h, 0.0),
            c: Complex64::new(h, 0.0),
            d: Complex64::new(-h, 0.0),
        }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn d(&self) -> Complex64 {
        self.d
    }

    /// Entry by (row, column), each in {0, 1}.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.to_mat2().entry(row, col)
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn has_zero_entry(&self) -> bool {
        self.a == Complex64::ZERO
            || self.b == Complex64::ZERO
            || self.c == Complex64::ZERO
            || self.d == Complex64::ZERO
    }

    pub fn to_mat2(&self) -> Mat2 {
        Mat2::new(self.a, self.b, self.c, self.d)
    }

    /// Move operator P = |L⟩⟨L|U (upper row, zero lower row).
    pub fn p_mat(&self) -> Mat2 {
        Mat2::new(self.a, self.b, Complex64::ZERO, Complex64::ZERO)
    }

    /// Move operator Q = |R⟩⟨R|U (lower row, zero upper row).
    pub fn q_mat(&self) -> Mat2 {
        Mat2::new(Complex64::ZERO, Complex64::ZERO, self.c, self.d)
    }

    /// Move operator R = |L⟩⟨R|U (lower row of U moved to the top).
    pub fn r_mat(&self) -> Mat2 {
        Mat2::new(self.c, self.d, Complex64::ZERO, Complex64::ZERO)
    }

    /// Move operator S = |R⟩⟨L|U (upper row of U moved to the bottom).
    pub fn s_mat(&self) -> Mat2 {
        Mat2::new(Complex64::ZERO, Complex64::ZERO, self.a, self.b)
    }
}

/// Builds the coin (1/√2)·[[e^{iω}, e^{iω̃}],[e^{−iω̃}, −e^{−iω}]].
///
/// This family has determinant −1 for every angle pair and no zero entries,
/// so the result supports the full weight algebra. (0, 0) gives Hadamard.
pub fn make_coin(angles: CoinAngles) -> CoinMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let ei = |t: f64| Complex64::from_polar(1.0, t);
    CoinMatrix {
        a: h * ei(angles.omega()),
        b: h * ei(angles.omega_tilde()),
        c: h * ei(-angles.omega_tilde()),
        d: -h * ei(-angles.omega()),
    }
}

/// The one-parameter defect coin (1/√2)[[1, e^{iω}],[e^{−iω}, −1]], i.e.
/// [`make_coin`] at angles (0, ω). Paired with a Hadamard bulk it is the
/// standard defect model studied throughout the crate.
pub fn defect_coin(omega: f64) -> CoinMatrix {
    make_coin(CoinAngles::wrapped(0.0, omega))
}

/// Splits a coin into its move parts (P, Q) with P + Q = U.
pub fn split_pq(coin: &CoinMatrix) -> (Mat2, Mat2) {
    (coin.p_mat(), coin.q_mat())
}

/// One of the four move operators derived from a coin's rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    P,
    Q,
    R,
    S,
}

impl Move {
    /// The (bra, ket) chirality indices (i, j) such that the operator is
    /// |i⟩⟨j|U, with L = 0 and R = 1.
    fn index_pair(self) -> (usize, usize) {
        match self {
            Move::P => (0, 0),
            Move::Q => (1, 1),
            Move::R => (0, 1),
            Move::S => (1, 0),
        }
    }

    /// The move operator as a dense matrix for the given coin.
    pub fn dense(self, coin: &CoinMatrix) -> Mat2 {
        match self {
            Move::P => coin.p_mat(),
            Move::Q => coin.q_mat(),
            Move::R => coin.r_mat(),
            Move::S => coin.s_mat(),
        }
    }
}

/// A matrix expressed in the defect-coin move basis:
/// p·P₀ + q·Q₀ + r·R₀ + s·S₀.
///
/// The coefficients alone define the value; pair with the defect coin via
/// [`PqrsWeight::dense`] to materialize it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PqrsWeight {
    pub p: Complex64,
    pub q: Complex64,
    pub r: Complex64,
    pub s: Complex64,
}

impl PqrsWeight {
    pub const ZERO: PqrsWeight = PqrsWeight {
        p: Complex64::new(0.0, 0.0),
        q: Complex64::new(0.0, 0.0),
        r: Complex64::new(0.0, 0.0),
        s: Complex64::new(0.0, 0.0),
    };

    pub fn new(p: Complex64, q: Complex64, r: Complex64, s: Complex64) -> Self {
        PqrsWeight { p, q, r, s }
    }

    /// The weight representing a single move operator of the defect coin.
    pub fn basis(mv: Move) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let mut w = PqrsWeight::ZERO;
        match mv {
            Move::P => w.p = one,
            Move::Q => w.q = one,
            Move::R => w.r = one,
            Move::S => w.s = one,
        }
        w
    }

    /// Coefficient on the basis element |i⟩⟨l|U₀ (L = 0, R = 1).
    fn coeff(&self, i: usize, l: usize) -> Complex64 {
        match (i, l) {
            (0, 0) => self.p,
            (1, 1) => self.q,
            (0, 1) => self.r,
            (1, 0) => self.s,
            _ => unreachable!(),
        }
    }

    /// Materializes p·P₀ + q·Q₀ + r·R₀ + s·S₀ for the given defect coin.
    pub fn dense(&self, defect: &CoinMatrix) -> Mat2 {
        defect.p_mat().scaled(self.p)
            + defect.q_mat().scaled(self.q)
            + defect.r_mat().scaled(self.r)
            + defect.s_mat().scaled(self.s)
    }

    /// Largest coefficient deviation from `other`.
    pub fn max_abs_diff(&self, other: &PqrsWeight) -> f64 {
        (self.p - other.p)
            .norm()
            .max((self.q - other.q).norm())
            .max((self.r - other.r).norm())
            .max((self.s - other.s).norm())
    }
}

/// Expresses a dense matrix in the move basis of `defect`.
///
/// Since the basis elements are |i⟩⟨l|U₀, the coefficient matrix is simply
/// W·U₀†: decomposition is one adjoint multiplication, which also makes the
/// round trip with [`PqrsWeight::dense`] exact to rounding.
///
/// # Errors
///
/// [`Error::SingularBasis`] when the defect coin has a zero entry; such
/// coins are excluded from the weight algebra (their move operators no
/// longer carry the intended left/right semantics).
pub fn pqrs_decompose(weight: &Mat2, defect: &CoinMatrix) -> Result<PqrsWeight> {
    if defect.has_zero_entry() {
        return Err(Error::SingularBasis);
    }
    let coeff = *weight * defect.to_mat2().adjoint();
    Ok(PqrsWeight {
        p: coeff.entry(0, 0),
        q: coeff.entry(1, 1),
        r: coeff.entry(0, 1),
        s: coeff.entry(1, 0),
    })
}

/// Left-multiplies a weight by one move operator of the coin at the current
/// site: w ↦ (|i⟩⟨j|Uₓ)·w.
///
/// Uses the product rule (|i⟩⟨j|Uₓ)(|k⟩⟨l|U₀) = (Uₓ)ⱼₖ·|i⟩⟨l|U₀: every
/// coefficient of `w` lands on the basis element keeping its own ket index
/// and taking the move's bra index.
pub fn pqrs_left_multiply(coin_at_x: &CoinMatrix, mv: Move, w: &PqrsWeight) -> PqrsWeight {
    let (i, j) = mv.index_pair();
    let mut acc = [[Complex64::ZERO; 2]; 2];
    for k in 0..2 {
        for l in 0..2 {
            acc[i][l] += coin_at_x.entry(j, k) * w.coeff(k, l);
        }
    }
    PqrsWeight {
        p: acc[0][0],
        q: acc[1][1],
        r: acc[0][1],
        s: acc[1][0],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// General 2×2 unitary from four real parameters, covering both
    /// determinant signs; used to probe the algebra off the coin family.
    fn unitary_from(theta: f64, chi1: f64, chi2: f64, phi: f64) -> CoinMatrix {
        let a = Complex64::from_polar(theta.cos(), chi1);
        let b = Complex64::from_polar(theta.sin(), chi2);
        let phase = Complex64::from_polar(1.0, phi);
        CoinMatrix::new_permitting_zeros(a, b, -phase * b.conj(), phase * a.conj()).unwrap()
    }

    #[test]
    fn coin_at_zero_angles_is_hadamard() {
        let u = make_coin(CoinAngles::new(0.0, 0.0).unwrap());
        assert_eq!(u.to_mat2(), CoinMatrix::hadamard().to_mat2());
    }

    #[test]
    fn coin_entries_match_the_family_formula() {
        let w = 0.9;
        let u = make_coin(CoinAngles::new(0.0, w).unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(u.a().re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(u.b().re, h * w.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(u.b().im, h * w.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(u.c().re, h * w.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(u.c().im, -h * w.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(u.d().re, -h, epsilon = 1e-15);
    }

    #[test]
    fn coin_at_omega_tilde_pi_has_sign_flipped_off_diagonal() {
        let u = make_coin(CoinAngles::new(0.0, std::f64::consts::PI).unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = Mat2::from_reals(h, -h, -h, -h);
        assert!(u.to_mat2().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn family_determinant_is_minus_one() {
        for i in 0..8 {
            for j in 0..8 {
                let angles =
                    CoinAngles::wrapped(0.7853981633974483 * i as f64, 0.7853981633974483 * j as f64);
                let det = make_coin(angles).det();
                assert_abs_diff_eq!(det.re, -1.0, epsilon = 1e-14);
                assert_abs_diff_eq!(det.im, 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn split_pq_of_hadamard() {
        let (p, q) = split_pq(&CoinMatrix::hadamard());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(p.max_abs_diff(&Mat2::from_reals(h, h, 0.0, 0.0)) < 1e-15);
        assert!(q.max_abs_diff(&Mat2::from_reals(0.0, 0.0, h, -h)) < 1e-15);
    }

    #[test]
    fn split_parts_sum_to_the_coin() {
        let u = make_coin(CoinAngles::wrapped(1.1, 2.2));
        let (p, q) = split_pq(&u);
        assert!((p + q).max_abs_diff(&u.to_mat2()) < 1e-15);
    }

    #[test]
    fn defect_coin_lower_row_at_omega_pi() {
        let u0 = defect_coin(std::f64::consts::PI);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(u0.q_mat().max_abs_diff(&Mat2::from_reals(0.0, 0.0, -h, -h)) < 1e-15);
    }

    #[test]
    fn angle_range_is_enforced() {
        assert!(matches!(
            CoinAngles::new(-0.1, 0.0),
            Err(Error::AngleRange { name: "omega", .. })
        ));
        assert!(matches!(
            CoinAngles::new(0.0, 6.3),
            Err(Error::AngleRange {
                name: "omega_tilde",
                ..
            })
        ));
    }

    #[test]
    fn non_unitary_matrix_is_rejected() {
        let err = CoinMatrix::new(c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(matches!(err, Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn zero_entry_coin_needs_the_permissive_constructor() {
        let (o, l) = (Complex64::ZERO, c(1.0, 0.0));
        assert!(matches!(CoinMatrix::new(o, l, l, o), Err(Error::SingularBasis)));
        let reflector = CoinMatrix::new_permitting_zeros(o, l, l, o).unwrap();
        assert!(reflector.has_zero_entry());
    }

    #[test]
    fn basis_weights_round_trip() {
        let u0 = defect_coin(1.3);
        for mv in [Move::P, Move::Q, Move::R, Move::S] {
            let w = PqrsWeight::basis(mv);
            let back = pqrs_decompose(&w.dense(&u0), &u0).unwrap();
            assert!(back.max_abs_diff(&w) < 1e-13);
        }
    }

    #[test]
    fn decompose_rejects_zero_entry_defect() {
        let (o, l) = (Complex64::ZERO, c(1.0, 0.0));
        let reflector = CoinMatrix::new_permitting_zeros(o, l, l, o).unwrap();
        assert!(matches!(
            pqrs_decompose(&Mat2::IDENTITY, &reflector),
            Err(Error::SingularBasis)
        ));
    }

    #[test]
    fn three_factor_product_decomposes_and_reconstructs() {
        // P₂Q₁Q₀ with every coin Hadamard: decompose the dense product and
        // reconstruct it.
        let h = CoinMatrix::hadamard();
        let dense = h.p_mat() * h.q_mat() * h.q_mat();
        let w = pqrs_decompose(&dense, &h).unwrap();
        assert!(w.dense(&h).max_abs_diff(&dense) < 1e-13);
    }

    #[test]
    fn left_multiply_matches_the_table_entries() {
        let ux = make_coin(CoinAngles::wrapped(0.4, 2.9));
        // Pₓ·R₀ = aₓ·R₀
        let pr = pqrs_left_multiply(&ux, Move::P, &PqrsWeight::basis(Move::R));
        assert!(pr.max_abs_diff(&PqrsWeight::new(
            Complex64::ZERO,
            Complex64::ZERO,
            ux.a(),
            Complex64::ZERO
        )) < 1e-15);
        // Qₓ·P₀ = cₓ·S₀
        let qp = pqrs_left_multiply(&ux, Move::Q, &PqrsWeight::basis(Move::P));
        assert!(qp.max_abs_diff(&PqrsWeight::new(
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
            ux.c()
        )) < 1e-15);
    }

    #[test]
    fn all_sixteen_products_match_dense_arithmetic() {
        let u0 = defect_coin(2.0);
        let ux = unitary_from(0.9, 0.3, 5.1, 1.7);
        for mv in [Move::P, Move::Q, Move::R, Move::S] {
            for basis in [Move::P, Move::Q, Move::R, Move::S] {
                let via_table = pqrs_left_multiply(&ux, mv, &PqrsWeight::basis(basis));
                let dense = mv.dense(&ux) * basis.dense(&u0);
                let via_dense = pqrs_decompose(&dense, &u0).unwrap();
                assert!(
                    via_table.max_abs_diff(&via_dense) < 1e-12,
                    "mismatch at {:?}·{:?}₀",
                    mv,
                    basis
                );
            }
        }
    }

    #[test]
    fn chained_weight_equals_dense_three_path_sum() {
        // The three passage products from the origin to x = 1 in three
        // steps: Q₀Q₋₁P₀ + Q₀P₁Q₀ + P₂Q₁Q₀, here with defect ω = π and
        // Hadamard bulk. Chain each path through the move algebra and
        // compare with dense products.
        let u0 = defect_coin(std::f64::consts::PI);
        let u = CoinMatrix::hadamard();

        let dense = u0.q_mat() * u.q_mat() * u0.p_mat()
            + u0.q_mat() * u.p_mat() * u0.q_mat()
            + u.p_mat() * u.q_mat() * u0.q_mat();

        let chain = |moves: &[(Move, &CoinMatrix)], start: Move| {
            let mut w = PqrsWeight::basis(start);
            for (mv, coin) in moves {
                w = pqrs_left_multiply(coin, *mv, &w);
            }
            w
        };
        // Paths are written first step first; the weight accumulates on the
        // left, matching the printed products above.
        let w = chain(&[(Move::Q, &u), (Move::Q, &u0)], Move::P); // Q₀Q₋₁P₀
        let w2 = chain(&[(Move::P, &u), (Move::Q, &u0)], Move::Q); // Q₀P₁Q₀
        let w3 = chain(&[(Move::Q, &u), (Move::P, &u)], Move::Q); // P₂Q₁Q₀
        let total = PqrsWeight::new(
            w.p + w2.p + w3.p,
            w.q + w2.q + w3.q,
            w.r + w2.r + w3.r,
            w.s + w2.s + w3.s,
        );
        assert!(total.dense(&u0).max_abs_diff(&dense) < 1e-13);
    }

    proptest! {
        #[test]
        fn family_coins_are_unitary(om in 0.0..6.283, ot in 0.0..6.283) {
            let u = make_coin(CoinAngles::new(om, ot).unwrap());
            let gram = u.to_mat2() * u.to_mat2().adjoint();
            prop_assert!(gram.max_abs_diff(&Mat2::IDENTITY) < 1e-12);
        }

        #[test]
        fn decompose_round_trips_random_weights(
            re in proptest::collection::vec(-2.0f64..2.0, 4),
            im in proptest::collection::vec(-2.0f64..2.0, 4),
            om in 0.001f64..6.28,
        ) {
            let u0 = defect_coin(om);
            let w = PqrsWeight::new(
                Complex64::new(re[0], im[0]),
                Complex64::new(re[1], im[1]),
                Complex64::new(re[2], im[2]),
                Complex64::new(re[3], im[3]),
            );
            let back = pqrs_decompose(&w.dense(&u0), &u0).unwrap();
            prop_assert!(back.max_abs_diff(&w) < 1e-12);
        }

        #[test]
        fn table_matches_dense_for_random_coins(
            theta in 0.05f64..1.52,
            chi1 in 0.0f64..6.28,
            chi2 in 0.0f64..6.28,
            phi in 0.0f64..6.28,
            om in 0.001f64..6.28,
        ) {
            let u0 = defect_coin(om);
            let ux = unitary_from(theta, chi1, chi2, phi);
            for mv in [Move::P, Move::Q, Move::R, Move::S] {
                for basis in [Move::P, Move::Q, Move::R, Move::S] {
                    let via_table = pqrs_left_multiply(&ux, mv, &PqrsWeight::basis(basis));
                    let dense = mv.dense(&ux) * basis.dense(&u0);
                    let via_dense = pqrs_decompose(&dense, &u0).unwrap();
                    prop_assert!(via_table.max_abs_diff(&via_dense) < 1e-12);
                }
            }
        }
    }
}
