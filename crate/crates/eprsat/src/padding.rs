//! Exponentially padded re-encoding: a payload of length `n` is inflated to
//! exactly `2^(n^k)` bytes by appending the reserved pseudo-blank byte.
//! Feasibility is enforced by a byte budget; the construction is measurable
//! only where it physically fits, and nothing here claims anything beyond
//! the transformation itself.

use thiserror::Error;

pub use crate::parser::PSEUDO_BLANK;

pub const DEFAULT_MAX_BYTES: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PaddingError {
    #[error("padded length 2^{exponent} exceeds the byte budget of {max_bytes}")]
    Overflow { exponent: u128, max_bytes: u64 },
    #[error("payload contains the reserved pseudo-blank byte at offset {0}")]
    ReservedByte(usize),
    #[error("malformed padding: {0}")]
    Malformed(String),
}

/// A payload together with its padding exponent. The serialized form is the
/// payload followed by pseudo-blanks up to a total of exactly `2^(n^k)`
/// bytes, where `n` is the payload length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedBlob {
    payload: Vec<u8>,
    k: u32,
    total_len: u64,
}

impl PaddedBlob {
    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn total_len(&self) -> u64 {
        self.total_len
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.total_len as usize);
        out.extend_from_slice(&self.payload);
        out.resize(self.total_len as usize, PSEUDO_BLANK);
        out
    }
}

/// `n^k` without overflow; saturates, which is already far beyond any byte
/// budget.
fn padded_exponent(n: usize, k: u32) -> u128 {
    (n as u128).saturating_pow(k)
}

/// Total padded length `2^(n^k)` if it fits in a u64.
fn padded_len(n: usize, k: u32) -> Option<u64> {
    let exponent = padded_exponent(n, k);
    if exponent >= 64 {
        None
    } else {
        Some(1u64 << exponent)
    }
}

/// Pads `payload` to exactly `2^(n^k)` bytes. `k` must be at least 1. The
/// payload must be free of the pseudo-blank byte, and the padded length
/// must fit within `max_bytes`.
pub fn pad(payload: &[u8], k: u32, max_bytes: u64) -> Result<PaddedBlob, PaddingError> {
    assert!(k >= 1, "padding exponent k must be positive");
    if let Some(offset) = payload.iter().position(|&b| b == PSEUDO_BLANK) {
        return Err(PaddingError::ReservedByte(offset));
    }
    let n = payload.len();
    match padded_len(n, k) {
        Some(total) if total <= max_bytes => Ok(PaddedBlob {
            payload: payload.to_vec(),
            k,
            total_len: total,
        }),
        _ => Err(PaddingError::Overflow {
            exponent: padded_exponent(n, k),
            max_bytes,
        }),
    }
}

/// Strips the trailing pseudo-blank run, then verifies the blob had exactly
/// the length `2^(n^k)` demanded by the recovered payload length `n` and
/// that the payload itself is pseudo-blank-free.
pub fn unpad(blob: &[u8], k: u32) -> Result<Vec<u8>, PaddingError> {
    assert!(k >= 1, "padding exponent k must be positive");
    let payload_len = blob
        .iter()
        .rposition(|&b| b != PSEUDO_BLANK)
        .map(|i| i + 1)
        .unwrap_or(0);
    let payload = &blob[..payload_len];
    if let Some(offset) = payload.iter().position(|&b| b == PSEUDO_BLANK) {
        return Err(PaddingError::Malformed(format!(
            "pseudo-blank byte inside the payload at offset {offset}"
        )));
    }
    match padded_len(payload_len, k) {
        Some(expected) if expected == blob.len() as u64 => Ok(payload.to_vec()),
        Some(expected) => Err(PaddingError::Malformed(format!(
            "blob length {} but a {payload_len}-byte payload with k={k} requires exactly {expected}",
            blob.len()
        ))),
        None => Err(PaddingError::Malformed(format!(
            "a {payload_len}-byte payload with k={k} has an unrepresentable padded length"
        ))),
    }
}

/// Output-side padding: extends `bytes` with pseudo-blanks up to
/// `target_len`. Content longer than the target is returned unchanged.
pub fn pad_to_length(mut bytes: Vec<u8>, target_len: u64) -> Vec<u8> {
    if (bytes.len() as u64) < target_len {
        bytes.resize(target_len as usize, PSEUDO_BLANK);
    }
    bytes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pad_length_four_k_one() {
        let blob = pad(b"abcd", 1, DEFAULT_MAX_BYTES).unwrap();
        assert_eq!(blob.total_len(), 16);
        let bytes = blob.to_bytes();
        assert_eq!(bytes.len(), 16);
        assert_eq!(&bytes[..4], b"abcd");
        assert!(bytes[4..].iter().all(|&b| b == PSEUDO_BLANK));
    }

    #[test]
    fn pad_length_one_k_three() {
        let blob = pad(b"x", 3, DEFAULT_MAX_BYTES).unwrap();
        assert_eq!(blob.total_len(), 2);
    }

    #[test]
    fn pad_overflow_reports_exponent() {
        let err = pad(b"12345678", 2, DEFAULT_MAX_BYTES).unwrap_err();
        assert_eq!(
            err,
            PaddingError::Overflow {
                exponent: 64,
                max_bytes: DEFAULT_MAX_BYTES
            }
        );
    }

    #[test]
    fn pad_rejects_reserved_byte() {
        assert_eq!(pad(b"a#b", 1, 1 << 10), Err(PaddingError::ReservedByte(1)));
    }

    #[test]
    fn unpad_inverts_pad() {
        for n in 0..=10usize {
            let payload: Vec<u8> = (0..n).map(|i| b'a' + i as u8).collect();
            let blob = pad(&payload, 1, DEFAULT_MAX_BYTES).unwrap();
            assert_eq!(unpad(&blob.to_bytes(), 1).unwrap(), payload);
        }
    }

    #[test]
    fn unpad_sixteen_byte_blob() {
        let mut blob = b"abcd".to_vec();
        blob.extend(std::iter::repeat_n(PSEUDO_BLANK, 12));
        assert_eq!(unpad(&blob, 1).unwrap(), b"abcd".to_vec());
    }

    #[test]
    fn unpad_rejects_wrong_length() {
        let mut blob = b"abc".to_vec();
        blob.extend(std::iter::repeat_n(PSEUDO_BLANK, 12)); // 15 bytes, not 2^3
        assert!(matches!(unpad(&blob, 1), Err(PaddingError::Malformed(_))));
    }

    #[test]
    fn unpad_rejects_unpadded_input() {
        assert!(matches!(unpad(b"abcd", 1), Err(PaddingError::Malformed(_))));
    }

    #[test]
    fn overflow_boundary_is_exact() {
        // With max_bytes = 256: n = 8 gives exactly 2^8 = 256 and fits;
        // n = 9 gives 512 and overflows.
        assert!(pad(b"12345678", 1, 256).is_ok());
        assert!(matches!(
            pad(b"123456789", 1, 256),
            Err(PaddingError::Overflow { exponent: 9, .. })
        ));
    }

    #[test]
    fn pad_to_length_extends_or_keeps() {
        assert_eq!(pad_to_length(b"ab".to_vec(), 4), b"ab##".to_vec());
        assert_eq!(pad_to_length(b"abcdef".to_vec(), 4), b"abcdef".to_vec());
    }
}
