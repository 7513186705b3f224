//! Middlebury `.flo`: magic `202021.25` (f32), width and height (i32), then
//! `height * width` interleaved `(u, v)` f32 pairs, all little-endian.
//!
//! Components are stored as f32, so values are rounded on write.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::flow::FlowField;

pub const FLO_MAGIC: f32 = 202021.25;
const HEADER_LEN: usize = 12;

pub fn write_flo<W: Write>(flow: &FlowField, mut sink: W) -> Result<()> {
    let (w, h) = flow.dims();
    let too_big = |d: usize| {
        i32::try_from(d)
            .map_err(|_| Error::InvalidParameter(format!("dimension {d} exceeds .flo limits")))
    };
    let mut buf = Vec::with_capacity(HEADER_LEN + w * h * 8);
    buf.extend_from_slice(&FLO_MAGIC.to_le_bytes());
    buf.extend_from_slice(&too_big(w)?.to_le_bytes());
    buf.extend_from_slice(&too_big(h)?.to_le_bytes());
    for (u, v) in flow.u().iter().zip(flow.v()) {
        buf.extend_from_slice(&(*u as f32).to_le_bytes());
        buf.extend_from_slice(&(*v as f32).to_le_bytes());
    }
    sink.write_all(&buf)?;
    sink.flush()?;
    Ok(())
}

pub fn read_flo<R: Read>(mut source: R) -> Result<FlowField> {
    let mut header = [0u8; HEADER_LEN];
    let mut got = 0;
    while got < HEADER_LEN {
        match source.read(&mut header[got..])? {
            0 => break,
            n => got += n,
        }
    }
    if got < 4 {
        return Err(Error::Truncated {
            expected: HEADER_LEN,
            found: got,
        });
    }
    let magic = f32::from_le_bytes(header[0..4].try_into().unwrap());
    if magic != FLO_MAGIC {
        return Err(Error::BadMagic(magic));
    }
    if got < HEADER_LEN {
        return Err(Error::Truncated {
            expected: HEADER_LEN,
            found: got,
        });
    }
    let width = i32::from_le_bytes(header[4..8].try_into().unwrap());
    let height = i32::from_le_bytes(header[8..12].try_into().unwrap());
    if width <= 0 || height <= 0 {
        return Err(Error::InvalidDimensions {
            width: width as i64,
            height: height as i64,
        });
    }
    let (w, h) = (width as usize, height as usize);
    let payload_len =
        w.checked_mul(h)
            .and_then(|n| n.checked_mul(8))
            .ok_or(Error::InvalidDimensions {
                width: width as i64,
                height: height as i64,
            })?;
    // Read at most what the header promises without trusting it for allocation.
    let mut payload = Vec::new();
    source.take(payload_len as u64).read_to_end(&mut payload)?;
    if payload.len() < payload_len {
        return Err(Error::Truncated {
            expected: HEADER_LEN + payload_len,
            found: HEADER_LEN + payload.len(),
        });
    }
    let mut u = Vec::with_capacity(w * h);
    let mut v = Vec::with_capacity(w * h);
    for pair in payload.chunks_exact(8) {
        u.push(f32::from_le_bytes(pair[0..4].try_into().unwrap()) as f64);
        v.push(f32::from_le_bytes(pair[4..8].try_into().unwrap()) as f64);
    }
    FlowField::new(w, h, u, v)
}

pub fn write_flo_file(flow: &FlowField, path: impl AsRef<Path>) -> Result<()> {
    write_flo(flow, BufWriter::new(File::create(path)?))
}

pub fn read_flo_file(path: impl AsRef<Path>) -> Result<FlowField> {
    read_flo(BufReader::new(File::open(path)?))
}
