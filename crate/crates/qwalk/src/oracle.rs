//! Brute-force passage weights by explicit path enumeration.
//!
//! The weight Ξ(x,n) of all n-step passages from the origin to x is the sum
//! over lattice paths of the ordered product of move operators, one factor
//! per step, each taken from the coin at the departure site, with later
//! factors multiplying from the left. Enumerating all 2ⁿ move sequences is
//! exponentially slow and completely transparent; this module exists to be
//! the ground truth that the O(n²) engine and the closed-form generating
//! functions are tested against.
//!
//! Columns of Ξ(x,n) are walk amplitudes: ‖Ξ(x,n)ψ₀‖² = μₙ(x) for any unit
//! ψ₀ started at the origin. [`xi_via_engine`] exploits exactly that to
//! reconstruct the same matrix from two engine runs.

use crate::coin::{pqrs_left_multiply, Mat2, Move, PqrsWeight};
use crate::engine::{evolve, Chirality, CoinField, CoinState, SpinorField, WalkConfig};
use crate::{Error, Result};

/// Default cap on the enumeration length (2¹⁶ move sequences).
pub const DEFAULT_N_MAX: usize = 16;

/// The matrix Ξ(x,n), optionally with its move-basis coefficients.
#[derive(Clone, Copy, Debug)]
pub struct PassageWeight {
    pub x: i64,
    pub n: usize,
    pub weight: Mat2,
    /// Coefficients in the defect move basis; `None` when the defect coin
    /// has a zero entry (the decomposition is then unavailable).
    pub pqrs: Option<PqrsWeight>,
}

/// Sums every n-step path from the origin to x, with the default length cap.
///
/// Parity-forbidden or out-of-cone requests return the zero matrix; only an
/// oversized `n` is an error.
///
/// # Errors
///
/// [`Error::TooLarge`] when `n` exceeds [`DEFAULT_N_MAX`].
pub fn enumerate_xi(x: i64, n: usize, config: &WalkConfig) -> Result<PassageWeight> {
    enumerate_xi_capped(x, n, config, DEFAULT_N_MAX)
}

/// [`enumerate_xi`] with an explicit length cap.
pub fn enumerate_xi_capped(
    x: i64,
    n: usize,
    config: &WalkConfig,
    n_max: usize,
) -> Result<PassageWeight> {
    if n > n_max {
        return Err(Error::TooLarge { n, n_max });
    }
    let track_pqrs = !config.defect.has_zero_entry();

    let out_of_support = x.unsigned_abs() as usize > n || (x + n as i64) % 2 != 0;
    if out_of_support {
        return Ok(PassageWeight {
            x,
            n,
            weight: Mat2::ZERO,
            pqrs: track_pqrs.then_some(PqrsWeight::ZERO),
        });
    }
    if n == 0 {
        return Ok(PassageWeight {
            x,
            n,
            weight: Mat2::IDENTITY,
            pqrs: None, // the identity is not a move product
        });
    }

    let rights_needed = ((n as i64 + x) / 2) as u32;
    let mut weight = Mat2::ZERO;
    let mut pqrs = PqrsWeight::ZERO;
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() != rights_needed {
            continue;
        }
        // Bit j set = step j moves right (lower coin row), clear = left.
        let mut pos = 0i64;
        let mut dense = Mat2::IDENTITY;
        let mut chain = PqrsWeight::basis(if mask & 1 != 0 { Move::Q } else { Move::P });
        for j in 0..n {
            let coin = config.coin_at(pos);
            let mv = if mask >> j & 1 != 0 { Move::Q } else { Move::P };
            dense = mv.dense(&coin) * dense;
            if track_pqrs && j > 0 {
                chain = pqrs_left_multiply(&coin, mv, &chain);
            }
            pos += if mv == Move::Q { 1 } else { -1 };
        }
        debug_assert_eq!(pos, x);
        weight = weight + dense;
        pqrs = PqrsWeight::new(
            pqrs.p + chain.p,
            pqrs.q + chain.q,
            pqrs.r + chain.r,
            pqrs.s + chain.s,
        );
    }
    Ok(PassageWeight {
        x,
        n,
        weight,
        pqrs: track_pqrs.then_some(pqrs),
    })
}

/// Reconstructs Ξ(x,n) from two engine runs: its columns are Ψₙ(x) for the
/// chirality basis initial spinors.
pub fn xi_via_engine(x: i64, n: usize, config: &WalkConfig) -> PassageWeight {
    let from_l = evolve(
        &SpinorField::origin(CoinState::basis(Chirality::Left)),
        config,
        n,
    );
    let from_r = evolve(
        &SpinorField::origin(CoinState::basis(Chirality::Right)),
        config,
        n,
    );
    let l = from_l.at(x);
    let r = from_r.at(x);
    let weight = Mat2::new(l[0], r[0], l[1], r[1]);
    let pqrs = if n > 0 && !config.defect.has_zero_entry() {
        crate::coin::pqrs_decompose(&weight, &config.defect).ok()
    } else {
        None
    };
    PassageWeight { x, n, weight, pqrs }
}
