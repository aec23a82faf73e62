//! Binary state snapshots.
//!
//! Layout, all little-endian:
//!
//! | bytes | content |
//! |---|---|
//! | 8 | magic `HLCSNAP\0` |
//! | 1 | format version, currently 1 |
//! | 4 | `u32` points per axis `n` |
//! | 8 × 2 | `f64` box length, dealias fraction |
//! | 8 × 3 | `f64` ν1, ν4, ν5 |
//! | 8 | `f64` time |
//! | 8 | `u64` step |
//! | 8 | `u64` seed |
//! | 8 × 4 | `f64` mean φ1, mean φ2, mean ∂tφ1, mean ∂tφ2 |
//! | 4 | `u32` field count, currently 5 |
//! | 16 n³ per field | `(re, im)` pairs of `v1, v2, v3, Φ1, Φ2` in storage order |

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multipliers::Coefficients;
use crate::physics::{FlowState, NormalizedWave};
use crate::spectral::{Grid3, SpectralField, VectorField3};
use crate::timestepper::SimulationState;

pub const SNAPSHOT_MAGIC: &[u8; 8] = b"HLCSNAP\0";
pub const SNAPSHOT_VERSION: u8 = 1;
const FIELD_COUNT: u32 = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub coefficients: Coefficients,
    pub seed: u64,
    pub state: SimulationState,
}

impl Snapshot {
    pub fn new(state: SimulationState, coefficients: Coefficients, seed: u64) -> Self {
        Self { coefficients, seed, state }
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        let s = &self.state;
        let g = s.grid();
        w.write_all(SNAPSHOT_MAGIC)?;
        w.write_all(&[SNAPSHOT_VERSION])?;
        let n = u32::try_from(g.n()).map_err(|_| Error::Snapshot("grid too large".into()))?;
        w.write_all(&n.to_le_bytes())?;
        let c = &self.coefficients;
        for x in [g.box_length(), g.dealias_fraction(), c.nu1(), c.nu4(), c.nu5(), s.t] {
            w.write_all(&x.to_le_bytes())?;
        }
        w.write_all(&s.step.to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        for x in s.mean_phi.iter().chain(&s.mean_dphi) {
            w.write_all(&x.to_le_bytes())?;
        }
        w.write_all(&FIELD_COUNT.to_le_bytes())?;
        let mut buf = Vec::with_capacity(16 * g.len());
        for f in s.flow.v.components().iter().chain(&s.wave.phi) {
            buf.clear();
            for z in f.coeffs() {
                buf.extend_from_slice(&z.re.to_le_bytes());
                buf.extend_from_slice(&z.im.to_le_bytes());
            }
            w.write_all(&buf)?;
        }
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        let mut magic = [0u8; 8];
        read_exact(r, &mut magic)?;
        if &magic != SNAPSHOT_MAGIC {
            return Err(Error::Snapshot("bad magic, not a snapshot file".into()));
        }
        let mut version = [0u8; 1];
        read_exact(r, &mut version)?;
        if version[0] != SNAPSHOT_VERSION {
            return Err(Error::Snapshot(format!(
                "unsupported format version {} (this build reads version {SNAPSHOT_VERSION})",
                version[0]
            )));
        }
        let n = read_u32(r)? as usize;
        let mut vals = [0.0; 6];
        for v in &mut vals {
            *v = read_f64(r)?;
        }
        let [box_length, dealias, nu1, nu4, nu5, t] = vals;
        let grid = Grid3::with_dealias(n, box_length, dealias).map_err(|e| Error::Snapshot(e.to_string()))?;
        let coefficients = Coefficients::new(nu1, nu4, nu5).map_err(|e| Error::Snapshot(e.to_string()))?;
        let step = read_u64(r)?;
        let seed = read_u64(r)?;
        let mut means = [0.0; 4];
        for m in &mut means {
            *m = read_f64(r)?;
        }
        let count = read_u32(r)?;
        if count != FIELD_COUNT {
            return Err(Error::Snapshot(format!("expected {FIELD_COUNT} fields, found {count}")));
        }
        let mut bytes = vec![0u8; 16 * grid.len()];
        let mut fields = Vec::with_capacity(FIELD_COUNT as usize);
        for _ in 0..FIELD_COUNT {
            read_exact(r, &mut bytes)?;
            let coeffs = bytes
                .chunks_exact(16)
                .map(|c| {
                    let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                    let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                    Complex64::new(re, im)
                })
                .collect();
            fields.push(SpectralField::from_coeffs(grid, coeffs)?);
        }
        let mut rest = [0u8; 1];
        if r.read(&mut rest)? != 0 {
            return Err(Error::Snapshot("trailing bytes after the last field".into()));
        }
        let [v1, v2, v3, p1, p2]: [SpectralField; 5] = fields.try_into().expect("five fields");
        let state = SimulationState {
            t,
            step,
            flow: FlowState { v: VectorField3::new([v1, v2, v3]) },
            wave: NormalizedWave { phi: [p1, p2] },
            mean_phi: [means[0], means[1]],
            mean_dphi: [means[2], means[3]],
        };
        Ok(Self { coefficients, seed, state })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read_from(&mut std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

fn read_exact(r: &mut impl Read, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Snapshot("truncated snapshot".into()),
        _ => Error::Io(e),
    })
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(f64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timestepper::{generate_initial_data, InitialDataSpec, Profile};

    fn sample() -> Snapshot {
        let g = Grid3::new(8, 1.5).unwrap();
        let mut s = generate_initial_data(&InitialDataSpec::new(1e-2, 3, [0.5, 2.0], Profile::RandomBand), g).unwrap();
        s.t = 0.1 + 0.2;
        s.step = 17;
        s.mean_phi = [1e-300, -0.0];
        Snapshot::new(s, Coefficients::new(0.5, 1.0, 0.2).unwrap(), 3)
    }

    #[test]
    fn roundtrip_is_bitwise() {
        let snap = sample();
        let mut bytes = Vec::new();
        snap.write_to(&mut bytes).unwrap();
        let back = Snapshot::read_from(&mut bytes.as_slice()).unwrap();
        let mut again = Vec::new();
        back.write_to(&mut again).unwrap();
        assert_eq!(bytes, again);
        assert_eq!(back.state.mean_phi[1].to_bits(), (-0.0f64).to_bits());
        assert_eq!(back, snap);
    }

    #[test]
    fn rejects_other_versions_and_truncation() {
        let mut bytes = Vec::new();
        sample().write_to(&mut bytes).unwrap();
        let mut bumped = bytes.clone();
        bumped[8] = SNAPSHOT_VERSION + 1;
        assert!(matches!(Snapshot::read_from(&mut bumped.as_slice()), Err(Error::Snapshot(m)) if m.contains("version")));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(Snapshot::read_from(&mut bad.as_slice()).is_err());
        assert!(Snapshot::read_from(&mut &bytes[..bytes.len() - 1]).is_err());
        let mut long = bytes.clone();
        long.push(0);
        assert!(Snapshot::read_from(&mut long.as_slice()).is_err());
    }
}
