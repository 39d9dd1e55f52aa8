use nalgebra::{DMatrix, DVector};

use crate::error::{CloakError, Result};

/// Assembles a dense matrix from a grid of blocks. `None` blocks are zero;
/// row heights and column widths are taken from `rows` and `cols`.
pub(crate) fn block_matrix(rows: &[usize], cols: &[usize], blocks: &[&[Option<&DMatrix<f64>>]]) -> DMatrix<f64> {
    let (nr, nc) = (rows.iter().sum(), cols.iter().sum());
    let mut m = DMatrix::zeros(nr, nc);
    let mut r0 = 0;
    for (bi, row) in blocks.iter().enumerate() {
        let mut c0 = 0;
        for (bj, blk) in row.iter().enumerate() {
            if let Some(b) = blk {
                debug_assert_eq!((b.nrows(), b.ncols()), (rows[bi], cols[bj]));
                m.view_mut((r0, c0), (rows[bi], cols[bj])).copy_from(b);
            }
            c0 += cols[bj];
        }
        r0 += rows[bi];
    }
    m
}

pub(crate) fn stack(parts: &[&[f64]]) -> DVector<f64> {
    DVector::from_iterator(parts.iter().map(|p| p.len()).sum(), parts.iter().flat_map(|p| p.iter().copied()))
}

/// LU solve with a relative residual check.
pub(crate) fn solve_dense(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let x = a.clone().lu().solve(b).ok_or(CloakError::Singular)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(CloakError::Singular);
    }
    let residual = (a * &x - b).amax() / b.amax().max(f64::MIN_POSITIVE);
    Ok((x, residual))
}

/// 2-norm condition number from the singular values.
pub(crate) fn condition_number(a: &DMatrix<f64>) -> f64 {
    let sv = a.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}
