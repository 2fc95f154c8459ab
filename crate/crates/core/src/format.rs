//! Binary container formats, as pure byte transforms.
//!
//! Both files start with one line of JSON terminated by `\n`, followed by
//! little-endian `f64` payload. Complex values are interleaved `(re, im)`;
//! grids and arrays are row-major.
//!
//! * design: header, then the seven `N×N` transfer-function grids sampled
//!   at `ξ = π(−1 + 2k/N)`, channel 0 first;
//! * coefficients: header listing every array, then the arrays in the
//!   listed order (finest level first, channels 1 … 6, scaling last).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filterbank::{lattice_shape, CoeffArray, CoeffPyramid, Level};
use crate::lattice::IntMat2;
use crate::mfunc::{design, shannon_design, MFunctionSet, Phases, Profile, SmoothingConfig, Variant};
use crate::partition::REGIONS;

pub const MAGIC: &str = "qshear";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignHeader {
    pub magic: String,
    pub version: u32,
    pub kind: String,
    pub variant: Variant,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub profile: Option<Profile>,
    pub phases: Phases,
    pub gains: [f64; REGIONS],
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayInfo {
    /// 1-based level; the scaling array carries the coarsest level.
    pub level: usize,
    /// 0 for the scaling array.
    pub channel: usize,
    pub lattice: IntMat2,
    pub rows: usize,
    pub cols: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffHeader {
    pub magic: String,
    pub version: u32,
    pub kind: String,
    pub variant: Variant,
    pub n: usize,
    pub levels: usize,
    /// Sample range of the source image, when it came from an integer format.
    #[serde(default)]
    pub maxval: Option<u32>,
    pub arrays: Vec<ArrayInfo>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffFile {
    pub pyramid: CoeffPyramid,
    pub maxval: Option<u32>,
}

fn split_header(bytes: &[u8]) -> Result<(&[u8], &[u8])> {
    let pos = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::Format("missing header line".into()))?;
    Ok((&bytes[..pos], &bytes[pos + 1..]))
}

fn check_magic(magic: &str, version: u32, kind: &str, expected: &str) -> Result<()> {
    if magic != MAGIC || kind != expected {
        return Err(Error::Format(format!("not a {MAGIC} {expected} file")));
    }
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    Ok(())
}

fn push_complex(out: &mut Vec<u8>, values: &[Complex64]) {
    for v in values {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
}

fn read_complex(payload: &[u8], count: usize) -> Result<(Vec<Complex64>, &[u8])> {
    let len = count * 16;
    if payload.len() < len {
        return Err(Error::Format("payload truncated".into()));
    }
    let (head, rest) = payload.split_at(len);
    let values = head
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    Ok((values, rest))
}

fn header_line<T: Serialize>(header: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec(header).map_err(|e| Error::Format(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

/// Serializes a design together with its grids on an `n×n` lattice.
///
/// Designs carrying custom windows cannot be rebuilt from a header and are
/// rejected.
pub fn encode_design(set: &MFunctionSet, n: usize) -> Result<Vec<u8>> {
    if set.has_windows() {
        return Err(Error::Format("designs with custom windows are not serializable".into()));
    }
    let cfg = set.config();
    let header = DesignHeader {
        magic: MAGIC.into(),
        version: VERSION,
        kind: "design".into(),
        variant: set.variant(),
        epsilon: cfg.map(|c| c.epsilon),
        delta: cfg.map(|c| c.delta),
        profile: cfg.map(|c| c.profile),
        phases: set.phases(),
        gains: set.gains(),
        n,
    };
    let grids = set.sample_all(n)?;
    let mut out = header_line(&header)?;
    out.reserve(REGIONS * n * n * 16);
    for g in grids.iter() {
        push_complex(&mut out, g);
    }
    Ok(out)
}

/// Rebuilds the design described by the header and checks that the stored
/// grids are bit-identical to a fresh sampling.
pub fn decode_design(bytes: &[u8]) -> Result<(MFunctionSet, DesignHeader)> {
    let (line, mut payload) = split_header(bytes)?;
    let header: DesignHeader = serde_json::from_slice(line).map_err(|e| Error::Format(e.to_string()))?;
    check_magic(&header.magic, header.version, &header.kind, "design")?;
    let set = rebuild(&header)?;
    let n = header.n;
    let fresh = set.sample_all(n)?;
    for (j, g) in fresh.iter().enumerate() {
        let (stored, rest) = read_complex(payload, n * n)?;
        payload = rest;
        let same = stored
            .iter()
            .zip(g)
            .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
        if !same {
            return Err(Error::Format(format!("stored grid of channel {j} differs from the header's design")));
        }
    }
    if !payload.is_empty() {
        return Err(Error::Format("trailing bytes after grids".into()));
    }
    Ok((set, header))
}

fn rebuild(h: &DesignHeader) -> Result<MFunctionSet> {
    let base = match h.variant {
        Variant::Shannon => shannon_design(),
        v => {
            let (Some(epsilon), Some(delta)) = (h.epsilon, h.delta) else {
                return Err(Error::Format("smoothed design without epsilon/delta".into()));
            };
            let cfg = SmoothingConfig {
                epsilon,
                delta,
                profile: h.profile.unwrap_or(Profile::Meyer),
            };
            design(v, cfg)?
        }
    };
    let mut set = base;
    if set.phases() != h.phases {
        set = set.with_phases(h.phases);
    }
    if set.gains() != h.gains {
        set = set.with_gains(h.gains);
    }
    Ok(set)
}

fn array_infos(pyr: &CoeffPyramid) -> Vec<ArrayInfo> {
    let mut out = Vec::new();
    for (l, level) in pyr.levels.iter().enumerate() {
        for (j, a) in level.details.iter().enumerate() {
            out.push(ArrayInfo {
                level: l + 1,
                channel: j + 1,
                lattice: a.lattice,
                rows: a.rows,
                cols: a.cols,
            });
        }
    }
    out.push(ArrayInfo {
        level: pyr.levels.len(),
        channel: 0,
        lattice: pyr.scaling.lattice,
        rows: pyr.scaling.rows,
        cols: pyr.scaling.cols,
    });
    out
}

pub fn encode_coeffs(pyr: &CoeffPyramid, maxval: Option<u32>) -> Result<Vec<u8>> {
    let header = CoeffHeader {
        magic: MAGIC.into(),
        version: VERSION,
        kind: "coefficients".into(),
        variant: pyr.variant,
        n: pyr.n,
        levels: pyr.levels.len(),
        maxval,
        arrays: array_infos(pyr),
    };
    let mut out = header_line(&header)?;
    for a in pyr.arrays() {
        push_complex(&mut out, &a.data);
    }
    Ok(out)
}

/// Array list a pyramid of this shape must carry.
fn expected_infos(variant: Variant, n: usize, levels: usize) -> Result<Vec<ArrayInfo>> {
    let detail = if variant.is_orthonormal() { IntMat2::Q } else { IntMat2::D2 };
    let mut out = Vec::new();
    let mut m = n;
    for l in 1..=levels {
        let (rows, cols) = lattice_shape(&detail, m)?;
        for channel in 1..REGIONS {
            out.push(ArrayInfo { level: l, channel, lattice: detail, rows, cols });
        }
        m /= 2;
    }
    let lattice = if levels == 0 { IntMat2::IDENTITY } else { IntMat2::D2 };
    out.push(ArrayInfo { level: levels, channel: 0, lattice, rows: m, cols: m });
    Ok(out)
}

pub fn decode_coeffs(bytes: &[u8]) -> Result<CoeffFile> {
    let (line, mut payload) = split_header(bytes)?;
    let h: CoeffHeader = serde_json::from_slice(line).map_err(|e| Error::Format(e.to_string()))?;
    check_magic(&h.magic, h.version, &h.kind, "coefficients")?;
    let block = 1usize.checked_shl(h.levels as u32 + 1).unwrap_or(0);
    if block == 0 || h.n == 0 || !h.n.is_multiple_of(block) {
        return Err(Error::ImageSize { n: h.n, levels: h.levels });
    }
    if h.arrays != expected_infos(h.variant, h.n, h.levels)? {
        return Err(Error::Format("array list does not match variant, size and level count".into()));
    }
    let mut arrays = Vec::with_capacity(h.arrays.len());
    for info in &h.arrays {
        let (data, rest) = read_complex(payload, info.rows * info.cols)?;
        payload = rest;
        arrays.push(CoeffArray {
            lattice: info.lattice,
            rows: info.rows,
            cols: info.cols,
            data,
        });
    }
    if !payload.is_empty() {
        return Err(Error::Format("trailing bytes after arrays".into()));
    }
    let scaling = arrays.pop().unwrap();
    let mut levels = Vec::with_capacity(h.levels);
    let mut m = h.n;
    let mut it = arrays.into_iter();
    for _ in 0..h.levels {
        levels.push(Level {
            size: m,
            details: it.by_ref().take(REGIONS - 1).collect(),
        });
        m /= 2;
    }
    Ok(CoeffFile {
        pyramid: CoeffPyramid {
            variant: h.variant,
            n: h.n,
            levels,
            scaling,
        },
        maxval: h.maxval,
    })
}

/// Raw little-endian `f64` samples.
pub fn encode_f64(values: &[f64]) -> Vec<u8> {
    values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

pub fn decode_f64(bytes: &[u8]) -> Result<Vec<f64>> {
    if !bytes.len().is_multiple_of(8) {
        return Err(Error::Format("length is not a multiple of 8".into()));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filterbank::{analyze, Image};
    use crate::mfunc::smoothed_onb_design;

    #[test]
    fn design_round_trip() {
        let set = smoothed_onb_design(SmoothingConfig::default()).unwrap();
        let bytes = encode_design(&set, 64).unwrap();
        assert_eq!(bytes.len() - bytes.iter().position(|&b| b == b'\n').unwrap() - 1, 7 * 64 * 64 * 16);
        let (back, header) = decode_design(&bytes).unwrap();
        assert_eq!(header.n, 64);
        assert_eq!(back.variant(), set.variant());
        assert!(!back.is_tampered());
    }

    #[test]
    fn corrupted_grid_is_rejected() {
        let mut bytes = encode_design(&shannon_design(), 16).unwrap();
        let last = bytes.len() - 1;
        bytes[last] ^= 1;
        assert!(matches!(decode_design(&bytes), Err(Error::Format(_))));
    }

    #[test]
    fn tampered_design_round_trips() {
        let set = shannon_design().with_gain(1, 0.9).unwrap();
        let (back, _) = decode_design(&encode_design(&set, 16).unwrap()).unwrap();
        assert_eq!(back.gains()[1], 0.9);
        assert!(back.is_tampered());
    }

    #[test]
    fn coeff_round_trip() {
        let set = shannon_design();
        let pyr = analyze(&Image::random(32, 4), &set, 2).unwrap();
        let bytes = encode_coeffs(&pyr, Some(255)).unwrap();
        let back = decode_coeffs(&bytes).unwrap();
        assert_eq!(back.pyramid, pyr);
        assert_eq!(back.maxval, Some(255));
        assert!(decode_coeffs(&bytes[..bytes.len() - 8]).is_err());
    }

    #[test]
    fn raw_round_trip() {
        let v = vec![1.5, -0.0, f64::MIN_POSITIVE, 1e300];
        assert_eq!(decode_f64(&encode_f64(&v)).unwrap(), v);
        assert!(decode_f64(&[0u8; 7]).is_err());
    }
}
