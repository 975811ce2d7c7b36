//! The pinned pseudorandom stream behind keyed matrix generation.
//!
//! FNV-1a-64 folds the key into a seed, splitmix64 expands the seed into the
//! four state words of xoshiro256**. Any other implementation that follows
//! these three steps reproduces our matrices bit for bit.

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

#[derive(Debug, Clone)]
pub struct Xoshiro256StarStar {
    s: [u64; 4],
}

impl Xoshiro256StarStar {
    pub fn from_seed(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        Self {
            s: [sm.next_u64(), sm.next_u64(), sm.next_u64(), sm.next_u64()],
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }
}

/// Consumes generator outputs one bit at a time, most significant bit first.
pub(crate) struct MsbBits {
    rng: Xoshiro256StarStar,
    word: u64,
    left: u32,
}

impl MsbBits {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256StarStar::from_seed(seed),
            word: 0,
            left: 0,
        }
    }

    /// Next `n <= 64` bits in stream order, packed least-significant-first
    /// (stream bit `i` lands at bit `i` of the result).
    #[inline]
    pub fn take(&mut self, n: u32) -> u64 {
        debug_assert!(n <= 64);
        if n == 0 {
            return 0;
        }
        if self.left == 0 {
            self.word = self.rng.next_u64().reverse_bits();
            self.left = 64;
        }
        if n <= self.left {
            let out = if n == 64 { self.word } else { self.word & ((1u64 << n) - 1) };
            self.word = if n == 64 { 0 } else { self.word >> n };
            self.left -= n;
            out
        } else {
            let first = self.left;
            let lo = self.word;
            self.word = self.rng.next_u64().reverse_bits();
            self.left = 64;
            let rest = n - first;
            let hi = if rest == 64 { self.word } else { self.word & ((1u64 << rest) - 1) };
            self.word = if rest == 64 { 0 } else { self.word >> rest };
            self.left -= rest;
            lo | (hi << first)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_reference_vectors() {
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn splitmix_reference_vector() {
        // First output for seed 1234567 from the published reference code.
        let mut sm = SplitMix64::new(1234567);
        assert_eq!(sm.next_u64(), 6457827717110365317);
    }

    #[test]
    fn bit_stream_is_msb_first() {
        let mut rng = Xoshiro256StarStar::from_seed(7);
        let w = rng.next_u64();
        let mut bits = MsbBits::new(7);
        for i in (0..64).rev() {
            assert_eq!(bits.take(1), (w >> i) & 1);
        }
    }

    #[test]
    fn chunked_takes_match_single_bits() {
        let mut a = MsbBits::new(99);
        let mut b = MsbBits::new(99);
        for n in [3u32, 64, 17, 64, 1, 63, 64, 40] {
            let chunk = a.take(n);
            for i in 0..n {
                assert_eq!(chunk >> i & 1, b.take(1), "chunk {n} bit {i}");
            }
        }
    }
}
