//! Seeded pseudo-random stream for the simulator.
//!
//! The generator is xorshift64* (shifts 12/25/27, multiplier
//! 0x2545F4914F6CDD1D), seeded through one round of splitmix64 so any
//! 64-bit value — including 0 — is a valid seed. Both algorithms are
//! fixed here so that logs reproduce bit for bit across
//! implementations and platforms.

/// splitmix64 step: mixes a seed into a well-distributed state.
fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// xorshift64* stream.
#[derive(Debug, Clone)]
pub struct Xorshift64Star {
    state: u64,
}

impl Xorshift64Star {
    pub fn new(seed: u64) -> Self {
        let mixed = splitmix64(seed);
        Xorshift64Star {
            // xorshift state must be non-zero.
            state: if mixed == 0 { 0x6A09E667F3BCC909 } else { mixed },
        }
    }

    /// Derive an independent substream seed, e.g. one per game.
    pub fn derive(seed: u64, salt: u64) -> u64 {
        splitmix64(seed ^ splitmix64(salt))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
