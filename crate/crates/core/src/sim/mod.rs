//! Monte Carlo sampling of noisy circuits.
//!
//! * [`frame`]: the bit-packed Pauli-frame sampler.
//! * [`tableau`]: a full stabilizer-tableau simulator used as an oracle.
//!
//! Records are flips relative to the noiseless circuit, so a fault-free shot
//! is all zeros.

pub mod frame;
pub mod tableau;

use std::io::{Read, Write};

pub use frame::{sample, Batch, FrameSampler};
pub use tableau::tableau_reference;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShotRecord {
    num_detectors: usize,
    bits: Vec<u64>,
    pub observable: bool,
}

impl ShotRecord {
    pub fn zero(num_detectors: usize) -> ShotRecord {
        ShotRecord {
            num_detectors,
            bits: vec![0; num_detectors.div_ceil(64)],
            observable: false,
        }
    }

    pub fn from_detectors(num_detectors: usize, fired: &[usize], observable: bool) -> ShotRecord {
        let mut r = ShotRecord::zero(num_detectors);
        for &d in fired {
            r.set_detector(d);
        }
        r.observable = observable;
        r
    }

    pub fn num_detectors(&self) -> usize {
        self.num_detectors
    }

    pub fn detector(&self, d: usize) -> bool {
        self.bits[d / 64] >> (d % 64) & 1 == 1
    }

    pub fn set_detector(&mut self, d: usize) {
        self.bits[d / 64] |= 1 << (d % 64);
    }

    /// Indices of fired detectors.
    pub fn fired(&self) -> Vec<usize> {
        (0..self.num_detectors).filter(|&d| self.detector(d)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        !self.observable && self.bits.iter().all(|&w| w == 0)
    }

    pub fn xor(&self, other: &ShotRecord) -> ShotRecord {
        ShotRecord {
            num_detectors: self.num_detectors,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
            observable: self.observable ^ other.observable,
        }
    }
}

/// Bytes per shot in the binary dump: detector `d` is bit `d % 8` of byte
/// `d / 8`, and the observable follows as bit number `num_detectors`.
pub fn bytes_per_shot(num_detectors: usize) -> usize {
    (num_detectors + 1).div_ceil(8)
}

pub fn write_shots(out: &mut impl Write, shots: &[ShotRecord]) -> Result<()> {
    for s in shots {
        let mut buf = vec![0u8; bytes_per_shot(s.num_detectors)];
        for d in s.fired() {
            buf[d / 8] |= 1 << (d % 8);
        }
        if s.observable {
            let d = s.num_detectors;
            buf[d / 8] |= 1 << (d % 8);
        }
        out.write_all(&buf)?;
    }
    Ok(())
}

pub fn read_shots(input: &mut impl Read, num_detectors: usize) -> Result<Vec<ShotRecord>> {
    let mut data = Vec::new();
    input.read_to_end(&mut data)?;
    let w = bytes_per_shot(num_detectors);
    if data.len() % w != 0 {
        return Err(Error::Parse {
            line: 0,
            msg: format!("{} bytes is not a whole number of {w}-byte shots", data.len()),
        });
    }
    Ok(data
        .chunks(w)
        .map(|c| {
            let bit = |i: usize| c[i / 8] >> (i % 8) & 1 == 1;
            let fired: Vec<usize> = (0..num_detectors).filter(|&d| bit(d)).collect();
            ShotRecord::from_detectors(num_detectors, &fired, bit(num_detectors))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn dump_round_trip(nd in 0usize..150, shots in prop::collection::vec((prop::collection::vec(any::<bool>(), 150), any::<bool>()), 0..20)) {
            let recs: Vec<ShotRecord> = shots.iter().map(|(bits, o)| {
                let fired: Vec<usize> = (0..nd).filter(|&d| bits[d]).collect();
                ShotRecord::from_detectors(nd, &fired, *o)
            }).collect();
            let mut buf = Vec::new();
            write_shots(&mut buf, &recs).unwrap();
            prop_assert_eq!(buf.len(), recs.len() * bytes_per_shot(nd));
            let back = read_shots(&mut buf.as_slice(), nd).unwrap();
            prop_assert_eq!(back, recs);
        }
    }

    #[test]
    fn layout_is_little_endian_bits() {
        let r = ShotRecord::from_detectors(9, &[0, 8], true);
        let mut buf = Vec::new();
        write_shots(&mut buf, &[r]).unwrap();
        assert_eq!(buf, vec![0b0000_0001, 0b0000_0011]);
        assert!(read_shots(&mut [0u8; 3].as_slice(), 9).is_err());
    }
}
