//! Navigation-message framing: TLM and HOW words, parameter field placement,
//! and assembly of subframes, frames and the 25-frame superframe.
//!
//! Structure: a word is 30 bits (24 data + 6 parity), a subframe is 10 words
//! (300 bits, 6 seconds), a frame is 5 subframes (1500 bits), and the full
//! message cycles through 25 frames (37500 bits, 12.5 minutes). Every
//! subframe opens with the telemetry word (fixed preamble `10001011`) and the
//! handover word carrying the Z-count of the next subframe boundary plus the
//! subframe ID.
//!
//! Subframes 1..=3 carry clock and ephemeris parameters at positions given by
//! a data-driven [`LayoutRegistry`]; subframes 4 and 5 page through 25 opaque
//! 8-word payloads.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::gpstime::ZCount;
use crate::parity::{append_parity, DataWord24, Word30, DATA_BITS};

/// Fixed 8-bit synchronization preamble opening every subframe.
pub const PREAMBLE: u8 = 0b1000_1011;

pub const WORDS_PER_SUBFRAME: usize = 10;
pub const SUBFRAME_BITS: usize = 300;
pub const SUBFRAMES_PER_FRAME: usize = 5;
pub const FRAME_BITS: usize = 1500;
pub const FRAMES_PER_SUPERFRAME: usize = 25;
pub const SUPERFRAME_BITS: usize = FRAME_BITS * FRAMES_PER_SUPERFRAME;

/// Opaque 8-word data block for one of subframes 4/5 (24 data bits per word).
pub type PageBlock = [u32; 8];

/// Named field values consumed by the assemblers.
pub type FieldValues = BTreeMap<String, f64>;

#[derive(Debug, Error, PartialEq)]
pub enum FramingError {
    #[error("subframe id {0} outside 1..=5")]
    InvalidSubframeId(u8),
    #[error("field {field}: value {value} not representable in {width} bits")]
    FieldOverflow { field: String, value: f64, width: u8 },
    #[error("field {field} required by the subframe {subframe} layout is missing from the payload")]
    MissingField { field: String, subframe: u8 },
    #[error("layout for {field}: bits {start_bit}..{}+{width} fall outside data bits 1..=24 of word {word}", *start_bit as u16)]
    LayoutOutOfBounds {
        field: String,
        word: u8,
        start_bit: u8,
        width: u8,
    },
    #[error("layout for {second} overlaps {first} in subframe {subframe} word {word}")]
    LayoutOverlap {
        first: String,
        second: String,
        subframe: u8,
        word: u8,
    },
    #[error("layout for {field}: scale must be positive and finite")]
    BadScale { field: String },
    #[error("subframe {0} does not take an opaque page payload")]
    NotAPageSubframe(u8),
    #[error("unexpected character {0:?} in bitstream text")]
    InvalidBitChar(char),
}

/// Subframe identifier 1..=5; the 3-bit HOW encoding equals the number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubframeId(u8);

impl SubframeId {
    pub fn new(id: u8) -> Result<Self, FramingError> {
        if (1..=5).contains(&id) {
            Ok(Self(id))
        } else {
            Err(FramingError::InvalidSubframeId(id))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// 3-bit code placed in the HOW: 001 for subframe 1 through 101 for 5.
    pub fn code(self) -> u8 {
        self.0
    }
}

/// Telemetry word content: the fixed preamble plus 16 reserved bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TlmContent {
    pub reserved: u16,
}

impl TlmContent {
    pub fn to_word(self) -> Word30 {
        let data = ((PREAMBLE as u32) << 16) | self.reserved as u32;
        append_parity(DataWord24::new(data))
    }
}

/// Handover word content: 17-bit Z-count, 2 flag bits, 3-bit subframe ID.
/// Bits 23..=24 of the data field are zero filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HowContent {
    pub z: ZCount,
    pub flags: u8,
    pub subframe_id: SubframeId,
}

impl HowContent {
    pub fn to_word(self) -> Word30 {
        let data = (self.z.value() << 7)
            | ((self.flags as u32 & 0b11) << 5)
            | ((self.subframe_id.code() as u32) << 2);
        append_parity(DataWord24::new(data))
    }
}

/// First word of every subframe.
pub fn build_tlm(reserved: u16) -> Word30 {
    TlmContent { reserved }.to_word()
}

/// Second word of every subframe; flag bits zero.
pub fn build_how(z: ZCount, id: SubframeId) -> Word30 {
    HowContent {
        z,
        flags: 0,
        subframe_id: id,
    }
    .to_word()
}

/// Position and scaling of one parameter field inside a subframe.
///
/// `start_bit` is 1-based within the word's 24 data bits; fields never reach
/// into the parity bits. `scale` is the value of one least-significant bit.
/// `wrapping` fields store `floor(value / scale) mod 2^width` instead of
/// range-checking, which is how the data ages are carried.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldLayout {
    pub subframe: u8,
    pub word: u8,
    pub start_bit: u8,
    pub width: u8,
    pub scale: f64,
    pub signed: bool,
    pub wrapping: bool,
}

impl FieldLayout {
    pub fn new(subframe: u8, word: u8, start_bit: u8, width: u8, scale: f64, signed: bool) -> Self {
        Self {
            subframe,
            word,
            start_bit,
            width,
            scale,
            signed,
            wrapping: false,
        }
    }

    pub fn wrapping(subframe: u8, word: u8, start_bit: u8, width: u8, scale: f64) -> Self {
        Self {
            subframe,
            word,
            start_bit,
            width,
            scale,
            signed: false,
            wrapping: true,
        }
    }

    /// Left shift that brings the field's LSB to its position in the 24-bit
    /// data word.
    fn shift(&self) -> u32 {
        (DATA_BITS as u32 + 1) - (self.start_bit as u32 + self.width as u32)
    }

    fn bit_range(&self) -> std::ops::RangeInclusive<u8> {
        self.start_bit..=(self.start_bit + self.width - 1)
    }
}

/// Named field layouts, validated to stay inside the data bits and to never
/// overlap within a word.
#[derive(Debug, Clone, Default)]
pub struct LayoutRegistry {
    entries: Vec<(String, FieldLayout)>,
}

impl LayoutRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The default layout.
    ///
    /// Subframe 1 carries the clock block: `toc` in word 8 bits 9..=24 at
    /// scale 2^4, `a0` in word 9 bits 1..=8, `a1` in word 9 bits 9..=24 and
    /// `a2` in word 10 bits 1..=22, plus the clock data age in word 3.
    /// Subframes 2 and 3 carry the ephemeris parameters; their positions and
    /// scales are registry defaults chosen so that nominal GPS orbit values
    /// are representable. Angles are stored in radians.
    pub fn standard() -> Self {
        let mut reg = Self::empty();
        let entries = [
            // subframe 1: clock block
            ("iodc", FieldLayout::wrapping(1, 3, 1, 16, 1.0)),
            ("toc", FieldLayout::new(1, 8, 9, 16, 16.0, false)),
            ("a0", FieldLayout::new(1, 9, 1, 8, 2f64.powi(-31), true)),
            ("a1", FieldLayout::new(1, 9, 9, 16, 2f64.powi(-43), true)),
            ("a2", FieldLayout::new(1, 10, 1, 22, 2f64.powi(-55), true)),
            // subframe 2: first ephemeris block
            ("iode", FieldLayout::wrapping(2, 3, 1, 8, 1.0)),
            ("crs", FieldLayout::new(2, 3, 9, 16, 2f64.powi(-5), true)),
            ("deltan", FieldLayout::new(2, 4, 1, 16, 2f64.powi(-41), true)),
            ("m0", FieldLayout::new(2, 5, 1, 24, 2f64.powi(-20), true)),
            ("cuc", FieldLayout::new(2, 6, 1, 16, 2f64.powi(-29), true)),
            ("e", FieldLayout::new(2, 7, 1, 24, 2f64.powi(-24), false)),
            ("cus", FieldLayout::new(2, 8, 1, 16, 2f64.powi(-29), true)),
            ("sqrta", FieldLayout::new(2, 9, 1, 24, 2f64.powi(-11), false)),
            ("toe", FieldLayout::new(2, 10, 1, 16, 16.0, false)),
            // subframe 3: second ephemeris block
            ("cic", FieldLayout::new(3, 3, 1, 16, 2f64.powi(-29), true)),
            ("omega0", FieldLayout::new(3, 4, 1, 24, 2f64.powi(-20), true)),
            ("cis", FieldLayout::new(3, 5, 1, 16, 2f64.powi(-29), true)),
            ("i0", FieldLayout::new(3, 6, 1, 24, 2f64.powi(-20), true)),
            ("crc", FieldLayout::new(3, 7, 1, 16, 2f64.powi(-5), true)),
            ("omega", FieldLayout::new(3, 8, 1, 24, 2f64.powi(-20), true)),
            ("omegadot", FieldLayout::new(3, 9, 1, 24, 2f64.powi(-38), true)),
            ("idot", FieldLayout::new(3, 10, 1, 16, 2f64.powi(-41), true)),
        ];
        for (name, layout) in entries {
            reg.insert(name, layout).expect("default layout is valid");
        }
        reg
    }

    pub fn insert(&mut self, name: &str, layout: FieldLayout) -> Result<(), FramingError> {
        if !(1..=5).contains(&layout.subframe) {
            return Err(FramingError::InvalidSubframeId(layout.subframe));
        }
        let in_words = (3..=10).contains(&layout.word);
        let in_bits = layout.start_bit >= 1
            && layout.width >= 1
            && layout.start_bit as u16 + layout.width as u16 - 1 <= DATA_BITS as u16;
        if !in_words || !in_bits {
            return Err(FramingError::LayoutOutOfBounds {
                field: name.to_string(),
                word: layout.word,
                start_bit: layout.start_bit,
                width: layout.width,
            });
        }
        if !(layout.scale.is_finite() && layout.scale > 0.0) {
            return Err(FramingError::BadScale {
                field: name.to_string(),
            });
        }
        for (other, existing) in &self.entries {
            if existing.subframe == layout.subframe
                && existing.word == layout.word
                && existing.bit_range().start() <= layout.bit_range().end()
                && layout.bit_range().start() <= existing.bit_range().end()
            {
                return Err(FramingError::LayoutOverlap {
                    first: other.clone(),
                    second: name.to_string(),
                    subframe: layout.subframe,
                    word: layout.word,
                });
            }
        }
        self.entries.push((name.to_string(), layout));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&FieldLayout> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, l)| l)
    }

    pub fn fields_for(&self, subframe: u8) -> impl Iterator<Item = (&str, &FieldLayout)> {
        self.entries
            .iter()
            .filter(move |(_, l)| l.subframe == subframe)
            .map(|(n, l)| (n.as_str(), l))
    }
}

/// Scale, bound-check and position a field value.
///
/// The stored integer is `floor(value / scale)`, two's complement when the
/// layout is signed, and the result is returned already shifted to the
/// field's bit positions within the 24-bit data word.
pub fn encode_field(name: &str, value: f64, layout: &FieldLayout) -> Result<u32, FramingError> {
    let width = layout.width as u32;
    let scaled = (value / layout.scale).floor();
    let overflow = || FramingError::FieldOverflow {
        field: name.to_string(),
        value,
        width: layout.width,
    };
    if !scaled.is_finite() || scaled.abs() >= 9.0e18 {
        return Err(overflow());
    }
    let stored = scaled as i64;
    let mask = (1u32 << width) - 1;
    let bits = if layout.wrapping {
        stored.rem_euclid(1i64 << width) as u32
    } else if layout.signed {
        let half = 1i64 << (width - 1);
        if stored < -half || stored >= half {
            return Err(overflow());
        }
        (stored as u32) & mask
    } else {
        if stored < 0 || stored >= 1i64 << width {
            return Err(overflow());
        }
        stored as u32
    };
    Ok(bits << layout.shift())
}

/// Extract the stored integer of a field from a 24-bit data word
/// (sign-extended when the layout is signed).
pub fn decode_field(word_data: u32, layout: &FieldLayout) -> i64 {
    let mask = (1u32 << layout.width) - 1;
    let raw = (word_data >> layout.shift()) & mask;
    if layout.signed && (raw >> (layout.width - 1)) & 1 == 1 {
        raw as i64 - (1i64 << layout.width)
    } else {
        raw as i64
    }
}

/// Ten parity-protected words; word 1 is the TLM, word 2 the HOW.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subframe {
    pub id: SubframeId,
    pub words: [Word30; WORDS_PER_SUBFRAME],
}

impl Subframe {
    /// Append the 300 bits in transmission order as 0/1 values.
    pub fn extend_bits(&self, out: &mut Vec<u8>) {
        for word in &self.words {
            for k in 1..=30 {
                out.push(word.bit(k));
            }
        }
    }
}

/// Five subframes, 1500 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frame {
    pub subframes: [Subframe; SUBFRAMES_PER_FRAME],
}

/// The full 25-frame navigation data set.
///
/// Subframes 1..=3 are identical across frames for a fixed parameter set;
/// subframes 4 and 5 page through 25 payload pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Superframe {
    pub frames: Vec<Frame>,
}

impl Superframe {
    pub fn total_bits(&self) -> usize {
        self.frames.len() * FRAME_BITS
    }
}

/// Assemble one of subframes 1..=3 from registry-positioned field values.
///
/// Every field the registry defines for `id` must be present in `payload`;
/// unassigned data bits stay zero. Payload entries belonging to other
/// subframes are ignored.
pub fn assemble_subframe(
    registry: &LayoutRegistry,
    id: SubframeId,
    z: ZCount,
    payload: &FieldValues,
    tlm_reserved: u16,
) -> Result<Subframe, FramingError> {
    let mut data = [0u32; 8];
    for (name, layout) in registry.fields_for(id.value()) {
        let value = *payload.get(name).ok_or_else(|| FramingError::MissingField {
            field: name.to_string(),
            subframe: id.value(),
        })?;
        data[(layout.word - 3) as usize] |= encode_field(name, value, layout)?;
    }
    Ok(build_subframe(id, z, &data, tlm_reserved))
}

/// Assemble subframe 4 or 5 around an opaque 8-word payload block.
pub fn assemble_page_subframe(
    id: SubframeId,
    z: ZCount,
    block: &PageBlock,
    tlm_reserved: u16,
) -> Result<Subframe, FramingError> {
    if id.value() < 4 {
        return Err(FramingError::NotAPageSubframe(id.value()));
    }
    Ok(build_subframe(id, z, block, tlm_reserved))
}

fn build_subframe(id: SubframeId, z: ZCount, data: &[u32; 8], tlm_reserved: u16) -> Subframe {
    let mut words = [Word30::from_u32(0); WORDS_PER_SUBFRAME];
    words[0] = build_tlm(tlm_reserved);
    words[1] = build_how(z, id);
    for (i, &d) in data.iter().enumerate() {
        words[i + 2] = append_parity(DataWord24::new(d));
    }
    Subframe { id, words }
}

/// Assemble the 125 subframes of a superframe in transmission order.
///
/// HOW Z-counts run `start_z, start_z + 1, ...` wrapping at the week. Frame
/// `i` carries `pages[i]` in its subframes 4 and 5; `None` means all-zero
/// page payloads.
pub fn assemble_superframe(
    registry: &LayoutRegistry,
    start_z: ZCount,
    payload: &FieldValues,
    pages: Option<&[(PageBlock, PageBlock); FRAMES_PER_SUPERFRAME]>,
    tlm_reserved: u16,
) -> Result<Superframe, FramingError> {
    let zero_block: PageBlock = [0; 8];
    let mut z = start_z;
    let mut frames = Vec::with_capacity(FRAMES_PER_SUPERFRAME);
    for frame_index in 0..FRAMES_PER_SUPERFRAME {
        let (page4, page5) = match pages {
            Some(p) => (&p[frame_index].0, &p[frame_index].1),
            None => (&zero_block, &zero_block),
        };
        let mut subframes = Vec::with_capacity(SUBFRAMES_PER_FRAME);
        for id in 1..=5u8 {
            let id = SubframeId::new(id)?;
            let sf = match id.value() {
                1..=3 => assemble_subframe(registry, id, z, payload, tlm_reserved)?,
                4 => assemble_page_subframe(id, z, page4, tlm_reserved)?,
                _ => assemble_page_subframe(id, z, page5, tlm_reserved)?,
            };
            subframes.push(sf);
            z = z.next();
        }
        frames.push(Frame {
            subframes: subframes.try_into().expect("five subframes per frame"),
        });
    }
    Ok(Superframe { frames })
}

/// Output encodings for a serialized bitstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitstreamFormat {
    /// '0'/'1' characters, one line per 300-bit subframe.
    Text,
    /// MSB-first packed bytes, final byte zero padded.
    Packed,
}

/// Collect the bits of consecutive frames in transmission order.
pub fn frames_to_bits(frames: &[Frame]) -> Vec<u8> {
    let mut bits = Vec::with_capacity(frames.len() * FRAME_BITS);
    for frame in frames {
        for sf in &frame.subframes {
            sf.extend_bits(&mut bits);
        }
    }
    bits
}

/// Serialize frames to bytes in the requested format.
pub fn serialize_bits(frames: &[Frame], format: BitstreamFormat) -> Vec<u8> {
    let bits = frames_to_bits(frames);
    match format {
        BitstreamFormat::Text => {
            let mut out = Vec::with_capacity(bits.len() + bits.len() / SUBFRAME_BITS);
            for (i, b) in bits.iter().enumerate() {
                out.push(b'0' + b);
                if (i + 1) % SUBFRAME_BITS == 0 {
                    out.push(b'\n');
                }
            }
            out
        }
        BitstreamFormat::Packed => {
            let mut out = vec![0u8; bits.len().div_ceil(8)];
            for (i, b) in bits.iter().enumerate() {
                out[i / 8] |= b << (7 - i % 8);
            }
            out
        }
    }
}

/// Parse a text-format bitstream back into 0/1 values. Newlines and carriage
/// returns are ignored; any other character is an error.
pub fn parse_bits_text(text: &str) -> Result<Vec<u8>, FramingError> {
    let mut bits = Vec::new();
    for c in text.chars() {
        match c {
            '0' => bits.push(0),
            '1' => bits.push(1),
            '\n' | '\r' => {}
            other => return Err(FramingError::InvalidBitChar(other)),
        }
    }
    Ok(bits)
}

/// Week-relative start time of the subframe whose HOW announces Z-count `z`.
///
/// A HOW carries the count of the *next* subframe boundary, so that subframe
/// begins at `6 (z - 1)` seconds; its word `n` begins `0.6 (n - 1)` seconds
/// later. In particular word 3 begins at `6 z - 4.8`.
pub fn subframe_start_seconds(z: ZCount) -> f64 {
    6.0 * (z.value() as f64 - 1.0)
}

/// Start time of word `n` (1..=10) of the subframe announced by `z`.
pub fn word_start_seconds(z: ZCount, word: usize) -> f64 {
    debug_assert!((1..=WORDS_PER_SUBFRAME).contains(&word));
    subframe_start_seconds(z) + 0.6 * (word as f64 - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parity::verify_word;

    fn z(v: u32) -> ZCount {
        ZCount::new(v).unwrap()
    }

    fn word_bits(w: &Word30) -> String {
        (1..=30).map(|k| char::from(b'0' + w.bit(k))).collect()
    }

    #[test]
    fn tlm_layout() {
        let w = build_tlm(0);
        assert_eq!(&word_bits(&w)[..8], "10001011");
        assert_eq!(&word_bits(&w)[8..24], "0000000000000000");
        assert!(verify_word(&w));

        let ones = build_tlm(u16::MAX);
        assert_eq!(&word_bits(&ones)[..24], "100010111111111111111111");

        let x = build_tlm(0x1234);
        assert_eq!(x.data.value() & 0xFFFF, 0x1234);
    }

    #[test]
    fn how_layout() {
        let w = build_how(z(1), SubframeId::new(1).unwrap());
        let bits = word_bits(&w);
        assert_eq!(&bits[..17], "00000000000000001");
        assert_eq!(&bits[17..19], "00");
        assert_eq!(&bits[19..22], "001");
        assert_eq!(&bits[22..24], "00");

        let w = build_how(z(100_799), SubframeId::new(5).unwrap());
        let bits = word_bits(&w);
        assert_eq!(&bits[..17], "11000100110111111");
        assert_eq!(&bits[19..22], "101");
    }

    #[test]
    fn subframe_id_bounds() {
        assert!(SubframeId::new(0).is_err());
        assert_eq!(
            SubframeId::new(6),
            Err(FramingError::InvalidSubframeId(6))
        );
        assert_eq!(SubframeId::new(3).unwrap().code(), 0b011);
    }

    #[test]
    fn encode_field_examples() {
        let toc = FieldLayout::new(1, 8, 9, 16, 16.0, false);
        assert_eq!(encode_field("toc", 172_800.0, &toc).unwrap(), 10_800);

        let any = FieldLayout::new(1, 3, 1, 12, 0.5, true);
        assert_eq!(encode_field("x", 0.0, &any).unwrap(), 0);

        let signed8 = FieldLayout::new(1, 3, 1, 8, 2f64.powi(-31), true);
        let placed = encode_field("a0", -(2f64.powi(-31)), &signed8).unwrap();
        assert_eq!(placed >> signed8.shift(), 0b1111_1111);
    }

    #[test]
    fn encode_field_overflow() {
        let signed8 = FieldLayout::new(1, 3, 1, 8, 2f64.powi(-31), true);
        assert!(matches!(
            encode_field("a0", 1.0, &signed8),
            Err(FramingError::FieldOverflow { .. })
        ));
        let unsigned4 = FieldLayout::new(1, 3, 1, 4, 1.0, false);
        assert!(encode_field("u", -1.0, &unsigned4).is_err());
        assert!(encode_field("u", 16.0, &unsigned4).is_err());
        assert!(encode_field("u", 15.0, &unsigned4).is_ok());
    }

    #[test]
    fn wrapping_field_reduces() {
        let iodc = FieldLayout::wrapping(1, 3, 1, 8, 1.0);
        assert_eq!(encode_field("iodc", 300.0, &iodc).unwrap() >> iodc.shift(), 44);
        assert_eq!(encode_field("iodc", -1.0, &iodc).unwrap() >> iodc.shift(), 255);
    }

    #[test]
    fn decode_inverts_encode() {
        let layout = FieldLayout::new(2, 4, 3, 13, 0.25, true);
        for v in [-4096i64, -1, 0, 1, 4095] {
            let placed = encode_field("f", v as f64 * 0.25, &layout).unwrap();
            assert_eq!(decode_field(placed, &layout), v);
        }
    }

    #[test]
    fn registry_rejects_bad_layouts() {
        let mut reg = LayoutRegistry::empty();
        assert!(matches!(
            reg.insert("p", FieldLayout::new(1, 3, 20, 6, 1.0, false)),
            Err(FramingError::LayoutOutOfBounds { .. })
        ));
        assert!(reg.insert("tlm", FieldLayout::new(1, 1, 1, 8, 1.0, false)).is_err());
        reg.insert("a", FieldLayout::new(1, 3, 1, 8, 1.0, false)).unwrap();
        assert!(matches!(
            reg.insert("b", FieldLayout::new(1, 3, 8, 4, 1.0, false)),
            Err(FramingError::LayoutOverlap { .. })
        ));
        reg.insert("c", FieldLayout::new(1, 3, 9, 4, 1.0, false)).unwrap();
    }

    #[test]
    fn standard_registry_places_toc() {
        let reg = LayoutRegistry::standard();
        let toc = reg.get("toc").unwrap();
        assert_eq!((toc.subframe, toc.word, toc.start_bit, toc.width), (1, 8, 9, 16));
        assert_eq!(toc.scale, 16.0);
        let a1 = reg.get("a1").unwrap();
        assert_eq!((a1.word, a1.start_bit, a1.width), (9, 9, 16));
    }

    #[test]
    fn subframe_carries_toc() {
        let reg = LayoutRegistry::standard();
        let mut payload = FieldValues::new();
        for (name, _) in reg.fields_for(1) {
            payload.insert(name.to_string(), 0.0);
        }
        payload.insert("toc".into(), 172_800.0);
        let sf = assemble_subframe(&reg, SubframeId::new(1).unwrap(), z(5), &payload, 0).unwrap();
        let toc = reg.get("toc").unwrap();
        assert_eq!(decode_field(sf.words[7].data.value(), toc), 10_800);
        for w in &sf.words {
            assert!(verify_word(w));
        }
    }

    #[test]
    fn missing_field_reported() {
        let reg = LayoutRegistry::standard();
        let payload = FieldValues::new();
        let err = assemble_subframe(&reg, SubframeId::new(1).unwrap(), z(1), &payload, 0);
        assert!(matches!(err, Err(FramingError::MissingField { .. })));
    }

    #[test]
    fn empty_registry_zero_words() {
        let reg = LayoutRegistry::empty();
        let sf =
            assemble_subframe(&reg, SubframeId::new(2).unwrap(), z(9), &FieldValues::new(), 0)
                .unwrap();
        for w in &sf.words[2..] {
            assert_eq!(w.data.value(), 0);
        }
    }

    #[test]
    fn superframe_z_wraps() {
        let reg = LayoutRegistry::empty();
        let sf = assemble_superframe(&reg, z(100_798), &FieldValues::new(), None, 0).unwrap();
        let third = sf.frames[0].subframes[2].words[1];
        // Z-counts 100798, 100799, 0, ...
        assert_eq!(third.data.value() >> 7, 0);
        assert_eq!(sf.total_bits(), SUPERFRAME_BITS);
    }

    #[test]
    fn serialized_lengths() {
        let reg = LayoutRegistry::empty();
        let sf = assemble_superframe(&reg, z(0), &FieldValues::new(), None, 0).unwrap();
        let packed = serialize_bits(&sf.frames, BitstreamFormat::Packed);
        assert_eq!(packed.len(), 4688);
        let text = serialize_bits(&sf.frames, BitstreamFormat::Text);
        assert_eq!(text.len(), SUPERFRAME_BITS + 125);

        let round = parse_bits_text(std::str::from_utf8(&text).unwrap()).unwrap();
        assert_eq!(round, frames_to_bits(&sf.frames));
        assert!(parse_bits_text("01x").is_err());
    }

    #[test]
    fn word_timing_identity() {
        for v in [1u32, 17, 100_799] {
            let zc = z(v);
            let w3 = word_start_seconds(zc, 3);
            assert!((w3 - (6.0 * v as f64 - 4.8)).abs() < 1e-9);
            assert!(
                (word_start_seconds(zc, 1) - subframe_start_seconds(zc)).abs() < 1e-12
            );
        }
    }
}
