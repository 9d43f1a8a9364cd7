//! Binary PGM image files and a raw tensor container for perturbations.

use std::io::{BufRead, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::tensor::Tensor;

/// Writes an [H, W, 1] image as binary PGM (P5), rounding to u8.
pub fn write_pgm(path: &Path, image: &Tensor) -> Result<()> {
    let (h, w) = match *image.shape() {
        [h, w, 1] => (h, w),
        _ => {
            return Err(Error::ShapeMismatch(format!(
                "PGM wants [H, W, 1], got {:?}",
                image.shape()
            )))
        }
    };
    let file = std::fs::File::create(path)?;
    let mut out = std::io::BufWriter::new(file);
    write!(out, "P5\n{w} {h}\n255\n")?;
    let bytes: Vec<u8> = image
        .data()
        .iter()
        .map(|&v| v.clamp(0.0, 255.0).round() as u8)
        .collect();
    out.write_all(&bytes)?;
    out.flush()?;
    Ok(())
}

fn next_token(r: &mut impl BufRead) -> Result<String> {
    let mut tok = String::new();
    let mut in_comment = false;
    loop {
        let mut byte = [0u8; 1];
        match r.read(&mut byte)? {
            0 => {
                if tok.is_empty() {
                    return Err(Error::ImageFormat("unexpected end of header".into()));
                }
                return Ok(tok);
            }
            _ => {
                let c = byte[0] as char;
                if in_comment {
                    if c == '\n' {
                        in_comment = false;
                    }
                } else if c == '#' {
                    in_comment = true;
                } else if c.is_ascii_whitespace() {
                    if !tok.is_empty() {
                        return Ok(tok);
                    }
                } else {
                    tok.push(c);
                }
            }
        }
    }
}

/// Reads a binary PGM (P5) file into an [H, W, 1] tensor of f64 values.
pub fn read_pgm(path: &Path) -> Result<Tensor> {
    let file = std::fs::File::open(path)?;
    let mut r = std::io::BufReader::new(file);
    let magic = next_token(&mut r)?;
    if magic != "P5" {
        return Err(Error::ImageFormat(format!(
            "expected P5 magic, got {magic:?}"
        )));
    }
    let parse = |tok: String, what: &str| -> Result<usize> {
        tok.parse()
            .map_err(|_| Error::ImageFormat(format!("bad {what}: {tok:?}")))
    };
    let w = parse(next_token(&mut r)?, "width")?;
    let h = parse(next_token(&mut r)?, "height")?;
    let maxval = parse(next_token(&mut r)?, "maxval")?;
    if w == 0 || h == 0 {
        return Err(Error::ImageFormat(format!("empty image {w}x{h}")));
    }
    if !(1..=255).contains(&maxval) {
        return Err(Error::ImageFormat(format!(
            "unsupported maxval {maxval}; only single-byte samples are handled"
        )));
    }
    let mut bytes = vec![0u8; w * h];
    r.read_exact(&mut bytes)
        .map_err(|_| Error::ImageFormat(format!("pixel data shorter than {w}x{h}")))?;
    let data = bytes.iter().map(|&b| b as f64).collect();
    Tensor::from_vec(&[h, w, 1], data)
}

const TENSOR_MAGIC: [u8; 4] = *b"I2IT";

/// Raw tensor file: magic, u32 rank, u32 dims, little-endian f64 payload.
/// Used for perturbations, which do not fit an unsigned image format.
pub fn write_tensor(path: &Path, t: &Tensor) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut out = std::io::BufWriter::new(file);
    out.write_all(&TENSOR_MAGIC)?;
    out.write_all(&(t.shape().len() as u32).to_le_bytes())?;
    for &d in t.shape() {
        out.write_all(&(d as u32).to_le_bytes())?;
    }
    for &v in t.data() {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_tensor(path: &Path) -> Result<Tensor> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < 8 || bytes[..4] != TENSOR_MAGIC {
        return Err(Error::ImageFormat("not a tensor file".into()));
    }
    let rank = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    if rank == 0 || rank > 8 || bytes.len() < 8 + 4 * rank {
        return Err(Error::ImageFormat(format!("bad tensor rank {rank}")));
    }
    let mut shape = Vec::with_capacity(rank);
    for i in 0..rank {
        let at = 8 + 4 * i;
        shape.push(u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize);
    }
    let len: usize = shape.iter().product();
    let start = 8 + 4 * rank;
    if bytes.len() != start + 8 * len {
        return Err(Error::ImageFormat(format!(
            "tensor payload is {} bytes, want {}",
            bytes.len() - start,
            8 * len
        )));
    }
    let data = bytes[start..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Tensor::from_vec(&shape, data)
}
