//! The classical Hamming construction, used as reference material by tests
//! and as the built-in seed for demonstration runs.

use crate::code::{Code, Parity};

/// The Hamming code of length `2^m - 1` for `2 <= m <= 4`: all words whose
/// syndrome under the parity-check matrix with columns `1, 2, ..., n`
/// vanishes. This is the unique linear 1-perfect code of its length.
pub fn hamming(m: u32) -> Code {
    assert!((2..=4).contains(&m), "hamming(m) supports 2 <= m <= 4");
    let n = (1usize << m) - 1;
    let words = (0u32..1 << n)
        .filter(|&w| {
            let mut syndrome = 0u32;
            let mut rest = w;
            while rest != 0 {
                let i = rest.trailing_zeros();
                rest &= rest - 1;
                syndrome ^= i + 1;
            }
            syndrome == 0
        })
        .collect();
    Code::new(n, words)
}

/// The even-parity extension of [`hamming`], a `(2^m, 2^(2^m - m - 1), 4)`
/// code.
pub fn extended_hamming(m: u32) -> Code {
    hamming(m).extend_parity(Parity::Even)
}
