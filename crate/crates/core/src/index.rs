//! Canonical indexing of functional positions.
//!
//! The position universe of an `n x m` space is read as `n`-digit numbers in
//! base `m`, most significant digit first. A position answering question `i`
//! with answer ordinal `a_i` (0-based) gets the 1-based index
//! `1 + sum_i a_i * m^(n-1-i)`.

use std::cmp::Ordering;

use thiserror::Error;

use crate::model::{Answers, ModelError, Position, Space, INLINE_ANSWERS as INLINE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("set-valued positions have no canonical index")]
    Joint,
    #[error(transparent)]
    Invalid(#[from] ModelError),
    #[error("index {index} is outside 1..={size}")]
    OutOfRange { index: u64, size: u64 },
    #[error("the position universe of a {0} space does not fit in 64 bits")]
    Overflow(String),
    #[error("positions do not belong to the same space")]
    SpaceMismatch,
}

#[inline]
fn universe(space: &Space) -> Result<u64, IndexError> {
    space
        .universe_size()
        .ok_or_else(|| IndexError::Overflow(space.to_string()))
}

/// The 1-based canonical index of a functional position.
#[inline]
pub fn canonical_index(space: &Space, position: &Position) -> Result<u64, IndexError> {
    let answers = match position {
        Position::Single(a) => a.as_slice(),
        Position::Joint(_) => return Err(IndexError::Joint),
    };
    let m = space.m();
    if answers.len() != space.n() {
        position.validate(space, 0)?;
    }
    universe(space)?;
    // no overflow: the result is below m^n, which fits
    let mut offset = 0u64;
    for &a in answers {
        if a >= m {
            position.validate(space, 0)?;
        }
        offset = offset * m as u64 + a as u64;
    }
    Ok(offset + 1)
}

/// Inverse of [`canonical_index`].
#[inline]
pub fn position_from_index(space: &Space, index: u64) -> Result<Position, IndexError> {
    let size = universe(space)?;
    if index == 0 || index > size {
        return Err(IndexError::OutOfRange { index, size });
    }
    let (n, m) = (space.n(), space.m() as u64);
    let fill = |digits: &mut [usize]| {
        let mut rest = index - 1;
        for slot in digits.iter_mut().rev() {
            if rest < m {
                // remaining leading digits are zero
                *slot = rest as usize;
                break;
            }
            *slot = (rest % m) as usize;
            rest /= m;
        }
    };
    let answers = if n <= INLINE {
        let mut buf = [0; INLINE];
        fill(&mut buf[..n]);
        Answers::from_buf_and_len(buf, n)
    } else {
        let mut digits = vec![0; n];
        fill(&mut digits);
        Answers::from_vec(digits)
    };
    Ok(Position::Single(answers))
}

/// Orders two positions of `space`.
///
/// Functional positions compare by canonical index. Set-valued positions have
/// no index and fall back to structural order.
pub fn compare_positions(
    space: &Space,
    p: &Position,
    q: &Position,
) -> Result<Ordering, IndexError> {
    if p.is_joint() != q.is_joint() {
        return Err(IndexError::SpaceMismatch);
    }
    for pos in [p, q] {
        pos.validate(space, 0).map_err(|e| match e {
            ModelError::WrongLength { .. } => IndexError::SpaceMismatch,
            other => IndexError::Invalid(other),
        })?;
    }
    match (p, q) {
        (Position::Single(_), Position::Single(_)) => {
            Ok(canonical_index(space, p)?.cmp(&canonical_index(space, q)?))
        }
        _ => Ok(p.cmp(q)),
    }
}
