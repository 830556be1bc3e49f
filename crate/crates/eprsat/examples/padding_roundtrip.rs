//! The exponential padding construction as a file transformation: payloads
//! of length n inflate to exactly 2^(n^k) bytes, recovery strips the
//! pseudo-blank run and re-checks the length equation, and infeasible
//! combinations are refused up front with the exact exponent.
//!
//! Run with: cargo run --example padding_roundtrip

use eprsat::padding::{pad, unpad, PaddingError, DEFAULT_MAX_BYTES};

fn main() {
    println!("k=1 lengths (payload n -> 2^n bytes):");
    for n in 1..=10usize {
        let payload = vec![b'x'; n];
        let blob = pad(&payload, 1, DEFAULT_MAX_BYTES).unwrap();
        let bytes = blob.to_bytes();
        assert_eq!(unpad(&bytes, 1).unwrap(), payload);
        println!("  n={n:2} -> {:7} bytes", bytes.len());
    }

    println!("\nhigher exponents grow double-exponentially:");
    for (n, k) in [(1usize, 3u32), (2, 2), (3, 2), (4, 2)] {
        match pad(&vec![b'x'; n], k, DEFAULT_MAX_BYTES) {
            Ok(blob) => println!("  n={n} k={k} -> {} bytes", blob.total_len()),
            Err(PaddingError::Overflow {
                exponent,
                max_bytes,
            }) => {
                println!("  n={n} k={k} -> refused: 2^{exponent} bytes > budget {max_bytes}")
            }
            Err(other) => println!("  n={n} k={k} -> {other}"),
        }
    }

    println!("\nmalformed blobs are rejected:");
    let fifteen = [b"abc".as_slice(), &[b'#'; 12]].concat();
    println!("  15-byte blob: {:?}", unpad(&fifteen, 1).unwrap_err());
    println!(
        "  unpadded text: {:?}",
        unpad(b"P(a) & Q(a)", 1).unwrap_err()
    );
}
