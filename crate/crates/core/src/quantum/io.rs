//! Flat binary and CSV serialization of fields.
//!
//! Binary layout (all little-endian):
//!
//! | offset | type    | content                                   |
//! |--------|---------|-------------------------------------------|
//! | 0      | [u8; 4] | magic `QLZF`                              |
//! | 4      | u32     | format version (1)                        |
//! | 8      | u32     | kind: 1 wavefunction, 2 Wigner field      |
//! | 12     | u32     | dimension d                               |
//! | 16     | u32     | side L                                    |
//! | 20     | f64     | scale ε (1 for wavefunctions)             |
//! | 28     | u64     | number of f64 payload values              |
//! | 36     | f64[]   | payload, row-major                        |
//!
//! Wavefunction payloads interleave (re, im) per site in lattice order.
//! Wigner payloads hold W position-major, (2L−1)^d positions by L^d momenta.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::lattice::TorusLattice;
use super::wave::WaveFunction;
use super::wigner::{WignerField, WignerGrid};
use super::QuantumError;

pub const MAGIC: [u8; 4] = *b"QLZF";
pub const VERSION: u32 = 1;
const KIND_WAVE: u32 = 1;
const KIND_WIGNER: u32 = 2;

struct Header {
    kind: u32,
    dim: u32,
    side: u32,
    epsilon: f64,
    count: u64,
}

fn write_header<W: Write>(w: &mut W, h: &Header) -> std::io::Result<()> {
    w.write_all(&MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&h.kind.to_le_bytes())?;
    w.write_all(&h.dim.to_le_bytes())?;
    w.write_all(&h.side.to_le_bytes())?;
    w.write_all(&h.epsilon.to_le_bytes())?;
    w.write_all(&h.count.to_le_bytes())
}

fn read_header<R: Read>(r: &mut R) -> Result<Header, QuantumError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != MAGIC {
        return Err(QuantumError::Format("bad magic".into()));
    }
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    let mut u32_ = |r: &mut R| -> std::io::Result<u32> {
        r.read_exact(&mut b4)?;
        Ok(u32::from_le_bytes(b4))
    };
    let version = u32_(r)?;
    if version != VERSION {
        return Err(QuantumError::Format(format!("unsupported version {version}")));
    }
    let kind = u32_(r)?;
    let dim = u32_(r)?;
    let side = u32_(r)?;
    r.read_exact(&mut b8)?;
    let epsilon = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let count = u64::from_le_bytes(b8);
    Ok(Header { kind, dim, side, epsilon, count })
}

fn write_payload<W: Write>(w: &mut W, values: impl Iterator<Item = f64>) -> std::io::Result<()> {
    for v in values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_payload<R: Read>(r: &mut R, count: usize) -> Result<Vec<f64>, QuantumError> {
    let mut bytes = vec![0u8; count * 8];
    r.read_exact(&mut bytes)?;
    Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect())
}

pub fn write_wave<W: Write>(w: &mut W, psi: &WaveFunction) -> Result<(), QuantumError> {
    let lat = psi.lattice();
    write_header(
        w,
        &Header {
            kind: KIND_WAVE,
            dim: lat.dim() as u32,
            side: lat.side() as u32,
            epsilon: 1.0,
            count: 2 * lat.sites() as u64,
        },
    )?;
    write_payload(w, psi.amplitudes().iter().flat_map(|z| [z.re, z.im]))?;
    Ok(())
}

pub fn read_wave<R: Read>(r: &mut R) -> Result<WaveFunction, QuantumError> {
    let h = read_header(r)?;
    if h.kind != KIND_WAVE {
        return Err(QuantumError::Format(format!("expected a wavefunction, found kind {}", h.kind)));
    }
    let lat = TorusLattice::new(h.side as usize, h.dim as usize)?;
    if h.count != 2 * lat.sites() as u64 {
        return Err(QuantumError::Format("payload length does not match the lattice".into()));
    }
    let vals = read_payload(r, h.count as usize)?;
    let amps = vals.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
    WaveFunction::from_amplitudes(lat, amps)
}

pub fn write_wigner<W: Write>(w: &mut W, field: &WignerField) -> Result<(), QuantumError> {
    let lat = field.grid.lattice;
    write_header(
        w,
        &Header {
            kind: KIND_WIGNER,
            dim: lat.dim() as u32,
            side: lat.side() as u32,
            epsilon: field.grid.epsilon,
            count: field.values.len() as u64,
        },
    )?;
    write_payload(w, field.values.iter().copied())?;
    Ok(())
}

pub fn read_wigner<R: Read>(r: &mut R) -> Result<WignerField, QuantumError> {
    let h = read_header(r)?;
    if h.kind != KIND_WIGNER {
        return Err(QuantumError::Format(format!("expected a Wigner field, found kind {}", h.kind)));
    }
    let grid = WignerGrid { lattice: TorusLattice::new(h.side as usize, h.dim as usize)?, epsilon: h.epsilon };
    if h.count != grid.cells() as u64 {
        return Err(QuantumError::Format("payload length does not match the grid".into()));
    }
    Ok(WignerField { grid, values: read_payload(r, h.count as usize)? })
}

/// CSV with one row per site: signed coordinates, re, im.
pub fn write_wave_csv<W: Write>(w: &mut W, psi: &WaveFunction) -> Result<(), QuantumError> {
    let lat = psi.lattice();
    let axes: Vec<String> = (0..lat.dim()).map(|a| format!("x{a}")).collect();
    writeln!(w, "{},re,im", axes.join(","))?;
    for (i, z) in psi.amplitudes().iter().enumerate() {
        let c: Vec<String> = lat.signed_coords(i).iter().map(|v| v.to_string()).collect();
        writeln!(w, "{},{:e},{:e}", c.join(","), z.re, z.im)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::wigner;

    #[test]
    fn wave_round_trip() {
        let lat = TorusLattice::new(8, 2).unwrap();
        let psi = WaveFunction::gaussian_packet(lat, &[0.0, 1.0], 1.1, &[0.1, 0.2]).unwrap();
        let mut buf = Vec::new();
        write_wave(&mut buf, &psi).unwrap();
        assert_eq!(buf.len(), 36 + 16 * 64);
        let back = read_wave(&mut buf.as_slice()).unwrap();
        assert_eq!(back, psi);
    }

    #[test]
    fn wigner_round_trip_and_kind_check() {
        let lat = TorusLattice::new(8, 1).unwrap();
        let psi = WaveFunction::point_mass(lat, 3);
        let w = wigner(&psi).unwrap();
        let mut buf = Vec::new();
        write_wigner(&mut buf, &w).unwrap();
        assert_eq!(read_wigner(&mut buf.as_slice()).unwrap(), w);
        assert!(read_wave(&mut buf.as_slice()).is_err());
    }
}
