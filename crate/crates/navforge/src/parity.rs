//! Word parity: 6 check bits per 30-bit word from a fixed 6x24 mod-2 check
//! matrix (a shortened Hamming scheme).
//!
//! Each parity bit is the mod-2 inner product of the 24 data bits with one
//! matrix row. The scheme is stateless: no bits from the previous word feed
//! in, so a generated stream is self-consistent under [`verify_word`] but is
//! not interoperable with receivers expecting inter-word parity chaining.
//!
//! Bit 1 is the first transmitted bit and the most significant bit of any
//! packed representation.

pub const DATA_BITS: usize = 24;
pub const PARITY_BITS: usize = 6;
pub const WORD_BITS: usize = 30;

/// The fixed check matrix, one 24-bit row mask per parity bit.
/// Every column is nonzero, so any single data-bit error flips at least one
/// check bit.
pub const CHECK_MATRIX: CheckMatrix = CheckMatrix {
    rows: [
        0b1110_1100_0111_1100_1101_0010,
        0b0111_0110_0011_1110_0110_1001,
        0b1011_1011_0001_1111_0011_0100,
        0b0101_1101_1000_1111_1001_1010,
        0b1010_1110_1100_0111_1100_1101,
        0b0010_1101_1110_1010_0010_0111,
    ],
};

/// 6 rows x 24 columns, each row packed with bit 1 in the top position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckMatrix {
    pub rows: [u32; PARITY_BITS],
}

impl CheckMatrix {
    /// Entry at `row` (1..=6), `col` (1..=24).
    pub fn entry(&self, row: usize, col: usize) -> u8 {
        ((self.rows[row - 1] >> (DATA_BITS - col)) & 1) as u8
    }

    /// True when every row fits in 24 bits and every column is nonzero.
    pub fn is_well_formed(&self) -> bool {
        let mut any = 0u32;
        for &row in &self.rows {
            if row >> DATA_BITS != 0 {
                return false;
            }
            any |= row;
        }
        any == (1 << DATA_BITS) - 1
    }
}

/// The 24 data bits of a word, bit 1 (first transmitted) in the top position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DataWord24(u32);

impl DataWord24 {
    pub fn new(value: u32) -> Self {
        debug_assert!(value >> DATA_BITS == 0, "data word wider than 24 bits");
        Self(value & 0x00FF_FFFF)
    }

    pub fn value(&self) -> u32 {
        self.0
    }

    /// Bit `k` for k in 1..=24.
    pub fn bit(&self, k: usize) -> u8 {
        debug_assert!((1..=DATA_BITS).contains(&k));
        ((self.0 >> (DATA_BITS - k)) & 1) as u8
    }
}

impl std::ops::BitXor for DataWord24 {
    type Output = DataWord24;
    fn bitxor(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

/// The 6 parity bits, transmitted as word bits 25..=30.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityVector(u8);

impl ParityVector {
    pub fn new(value: u8) -> Self {
        debug_assert!(value >> PARITY_BITS == 0);
        Self(value & 0x3F)
    }

    pub fn value(&self) -> u8 {
        self.0
    }

    /// Bit `k` for k in 1..=6 (word bit 24 + k).
    pub fn bit(&self, k: usize) -> u8 {
        debug_assert!((1..=PARITY_BITS).contains(&k));
        (self.0 >> (PARITY_BITS - k)) & 1
    }
}

/// A full 30-bit word: 24 data bits followed by 6 parity bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Word30 {
    pub data: DataWord24,
    pub parity: ParityVector,
}

impl Word30 {
    /// Packs data and parity into the low 30 bits, bit 1 at position 29.
    pub fn as_u32(&self) -> u32 {
        (self.data.value() << PARITY_BITS) | self.parity.value() as u32
    }

    /// Rebuild from a packed 30-bit value without recomputing parity.
    pub fn from_u32(raw: u32) -> Self {
        Self {
            data: DataWord24::new((raw >> PARITY_BITS) & 0x00FF_FFFF),
            parity: ParityVector::new((raw & 0x3F) as u8),
        }
    }

    /// Bit `k` for k in 1..=30.
    pub fn bit(&self, k: usize) -> u8 {
        if k <= DATA_BITS {
            self.data.bit(k)
        } else {
            self.parity.bit(k - DATA_BITS)
        }
    }
}

/// Mod-2 inner product of the data bits with each check-matrix row.
pub fn compute_parity(data: DataWord24) -> ParityVector {
    let mut bits = 0u8;
    for &row in &CHECK_MATRIX.rows {
        bits = (bits << 1) | ((row & data.value()).count_ones() & 1) as u8;
    }
    ParityVector::new(bits)
}

/// Append the computed parity to form a transmittable word.
pub fn append_parity(data: DataWord24) -> Word30 {
    Word30 {
        data,
        parity: compute_parity(data),
    }
}

/// True iff the stored parity matches the recomputed parity of the data bits.
pub fn verify_word(word: &Word30) -> bool {
    compute_parity(word.data) == word.parity
}
