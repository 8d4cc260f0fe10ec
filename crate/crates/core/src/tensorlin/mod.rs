//! Dense complex linear algebra on tensor powers `(ℂ^d)^{⊗t}`.

pub mod matrix;
pub mod perm;
pub mod projector;

pub use matrix::{kron, max_abs_diff, ComplexMatrix, C64, I, ONE, ZERO};
pub use perm::{
    factor_permutation_operator, tensor_index_map, validate_character_tables, Permutation,
    YoungDiagram,
};
pub use projector::{
    antisymmetric_projector, bell_projector, bell_vector, diagonal_pair_projector,
    symmetric_projector, young_projector, Projector, SectorProjector,
};

use crate::error::{Error, Result};

/// Largest `d^t` accepted by the dense machinery.
pub const MAX_TENSOR_DIM: usize = 4096;

/// Checks the validated `(d, t)` envelope: `t ≤ 4` and `d^t ≤ 4096`.
pub fn check_caps(d: usize, t: usize) -> Result<usize> {
    if t == 0 || t > perm::MAX_ORDER {
        return Err(Error::UnsupportedOrder {
            t,
            reason: "orders 1..=4 are supported",
        });
    }
    let n = (d as u128).pow(t as u32);
    if n > MAX_TENSOR_DIM as u128 {
        return Err(Error::CapExceeded {
            what: "tensor dimension d^t",
            size: n,
            cap: MAX_TENSOR_DIM as u128,
        });
    }
    Ok(n as usize)
}

/// Applies `u` to tensor slot `slot` of the row index of `m` (a `d^t × d^t` matrix).
fn apply_to_slot_left(
    u: &ComplexMatrix,
    t: usize,
    slot: usize,
    m: &ComplexMatrix,
) -> ComplexMatrix {
    let d = u.rows();
    let n = m.rows();
    let cols = m.cols();
    let stride = d.pow((t - 1 - slot) as u32);
    let mut out = ComplexMatrix::zeros(n, cols);
    for x in 0..n {
        let digit = (x / stride) % d;
        let base = x - digit * stride;
        let dst_off = x * cols;
        for k in 0..d {
            let coeff = u[(digit, k)];
            if coeff == ZERO {
                continue;
            }
            let src = base + k * stride;
            let (src_row, dst) = (src * cols, dst_off);
            for c in 0..cols {
                let v = m.data()[src_row + c];
                out.data_mut()[dst + c] += coeff * v;
            }
        }
    }
    out
}

/// `u^{⊗t} · m`, computed slot by slot.
pub fn tensor_power_left(u: &ComplexMatrix, t: usize, m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = m.clone();
    for slot in 0..t {
        out = apply_to_slot_left(u, t, slot, &out);
    }
    out
}

/// `u^{⊗t} · m · (u^{⊗t})†`.
pub fn conjugate_tensor_power(u: &ComplexMatrix, t: usize, m: &ComplexMatrix) -> ComplexMatrix {
    let left = tensor_power_left(u, t, m);
    // (L U^†) = (U L^†)^†
    tensor_power_left(u, t, &left.adjoint()).adjoint()
}
