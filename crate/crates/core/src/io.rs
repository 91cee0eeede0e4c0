//! Reading and writing PGM (P2/P5) and PNG images.
//!
//! The format is always detected from the leading magic bytes, never from
//! the file name. Color PNGs are reduced to luminance
//! `round(0.299 R + 0.587 G + 0.114 B)` and PGM samples with a maxval other
//! than 255 are rescaled with `round(v * 255 / maxval)`. Writing always uses
//! 8-bit samples.

use std::fs;
use std::io::Cursor;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::image::GrayImage;

const PNG_SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', 0x0d, 0x0a, 0x1a, 0x0a];

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("unsupported image format (magic bytes {0:02x?})")]
    UnsupportedMagic(Vec<u8>),
    #[error("malformed header at byte {offset}: {reason}")]
    MalformedHeader { offset: usize, reason: String },
    #[error("truncated pixel data at byte {offset}: expected {expected} samples, found {found}")]
    Truncated {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("sample {value} at byte {offset} exceeds maxval {maxval}")]
    SampleOutOfRange {
        offset: usize,
        value: u32,
        maxval: u32,
    },
    #[error("PNG decoding failed: {0}")]
    PngDecode(String),
    #[error("PNG encoding failed: {0}")]
    PngEncode(String),
}

pub type IoResult<T> = std::result::Result<T, IoError>;

/// On-disk image encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImageFileFormat {
    /// P2
    PgmAscii,
    /// P5
    PgmBinary,
    Png,
}

impl ImageFileFormat {
    /// Identifies the encoding from the first bytes of a file.
    pub fn detect(bytes: &[u8]) -> Option<Self> {
        if bytes.starts_with(&PNG_SIGNATURE) {
            Some(Self::Png)
        } else if bytes.starts_with(b"P2") {
            Some(Self::PgmAscii)
        } else if bytes.starts_with(b"P5") {
            Some(Self::PgmBinary)
        } else {
            None
        }
    }

    /// Output encoding suggested by a file extension: `.png` gives PNG and
    /// anything else binary PGM.
    pub fn for_output_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("png") => Self::Png,
            _ => Self::PgmBinary,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Self::PgmAscii | Self::PgmBinary => "pgm",
            Self::Png => "png",
        }
    }
}

pub fn load_image(path: impl AsRef<Path>) -> IoResult<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| IoError::Read {
        path: path.to_owned(),
        source,
    })?;
    decode(&bytes)
}

pub fn save_image(img: &GrayImage, path: impl AsRef<Path>, format: ImageFileFormat) -> IoResult<()> {
    let path = path.as_ref();
    let bytes = encode(img, format)?;
    fs::write(path, bytes).map_err(|source| IoError::Write {
        path: path.to_owned(),
        source,
    })
}

/// Decodes an in-memory PGM or PNG file.
pub fn decode(bytes: &[u8]) -> IoResult<GrayImage> {
    match ImageFileFormat::detect(bytes) {
        Some(ImageFileFormat::Png) => decode_png(bytes),
        Some(ImageFileFormat::PgmAscii) => decode_pgm(bytes, false),
        Some(ImageFileFormat::PgmBinary) => decode_pgm(bytes, true),
        None => Err(IoError::UnsupportedMagic(bytes.iter().take(8).copied().collect())),
    }
}

pub fn encode(img: &GrayImage, format: ImageFileFormat) -> IoResult<Vec<u8>> {
    match format {
        ImageFileFormat::PgmAscii => Ok(encode_pgm_ascii(img)),
        ImageFileFormat::PgmBinary => Ok(encode_pgm_binary(img)),
        ImageFileFormat::Png => encode_png(img),
    }
}

fn encode_pgm_binary(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

fn encode_pgm_ascii(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P2\n{} {}\n255\n", img.width(), img.height());
    for y in 0..img.height() {
        let row: Vec<String> = img.row(y).iter().map(u8::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}

/// Byte cursor over a netpbm header.
struct PgmReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PgmReader<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.pos < self.bytes.len() && !matches!(self.bytes[self.pos], b'\n' | b'\r') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Reads an unsigned decimal preceded by optional whitespace or comments.
    fn number(&mut self, what: &str) -> IoResult<u32> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value * 10 + (b - b'0') as u64;
            if value > u32::MAX as u64 {
                return Err(IoError::MalformedHeader {
                    offset: start,
                    reason: format!("{what} too large"),
                });
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(IoError::MalformedHeader {
                offset: start,
                reason: format!("expected {what}"),
            });
        }
        if let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_whitespace() && b != b'#' {
                return Err(IoError::MalformedHeader {
                    offset: self.pos,
                    reason: format!("unexpected byte {b:#04x} after {what}"),
                });
            }
        }
        Ok(value as u32)
    }
}

fn rescale(value: u32, maxval: u32) -> u8 {
    if maxval == 255 {
        return value as u8;
    }
    let (v, m) = (value as u64, maxval as u64);
    ((2 * v * 255 + m) / (2 * m)) as u8
}

fn decode_pgm(bytes: &[u8], binary: bool) -> IoResult<GrayImage> {
    let mut r = PgmReader { bytes, pos: 2 };
    let width = r.number("width")? as usize;
    let height = r.number("height")? as usize;
    if width == 0 || height == 0 {
        return Err(IoError::MalformedHeader {
            offset: r.pos,
            reason: format!("zero dimension {width}x{height}"),
        });
    }
    r.skip_whitespace_and_comments();
    let maxval_at = r.pos;
    let maxval = r.number("maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(IoError::MalformedHeader {
            offset: maxval_at,
            reason: format!("maxval {maxval} outside 1..=65535"),
        });
    }
    let expected = width.checked_mul(height).ok_or_else(|| IoError::MalformedHeader {
        offset: 2,
        reason: "image too large".into(),
    })?;

    let mut pixels = Vec::with_capacity(expected.min(bytes.len()));
    if binary {
        // exactly one whitespace byte separates the header from the raster
        let start = r.pos + 1;
        let sample_size = if maxval > 255 { 2 } else { 1 };
        let available = bytes.len().saturating_sub(start) / sample_size;
        if available < expected {
            return Err(IoError::Truncated {
                offset: bytes.len(),
                expected,
                found: available,
            });
        }
        for i in 0..expected {
            let offset = start + i * sample_size;
            let value = if sample_size == 2 {
                u16::from_be_bytes([bytes[offset], bytes[offset + 1]]) as u32
            } else {
                bytes[offset] as u32
            };
            if value > maxval {
                return Err(IoError::SampleOutOfRange {
                    offset,
                    value,
                    maxval,
                });
            }
            pixels.push(rescale(value, maxval));
        }
    } else {
        for found in 0..expected {
            r.skip_whitespace_and_comments();
            if r.pos >= bytes.len() {
                return Err(IoError::Truncated {
                    offset: r.pos,
                    expected,
                    found,
                });
            }
            let offset = r.pos;
            let value = r.number("sample")?;
            if value > maxval {
                return Err(IoError::SampleOutOfRange {
                    offset,
                    value,
                    maxval,
                });
            }
            pixels.push(rescale(value, maxval));
        }
    }
    Ok(GrayImage::new(width, height, pixels).expect("dimensions checked above"))
}

/// BT.601 luma, rounded half up.
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    ((299 * r as u32 + 587 * g as u32 + 114 * b as u32 + 500) / 1000) as u8
}

fn decode_png(bytes: &[u8]) -> IoResult<GrayImage> {
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
    let mut reader = decoder
        .read_info()
        .map_err(|e| IoError::PngDecode(e.to_string()))?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| IoError::PngDecode("image too large".into()))?;
    let mut buf = vec![0; size];
    let frame = reader
        .next_frame(&mut buf)
        .map_err(|e| IoError::PngDecode(e.to_string()))?;
    let (width, height) = (frame.width as usize, frame.height as usize);
    let data = &buf[..frame.buffer_size()];
    if frame.bit_depth != png::BitDepth::Eight {
        return Err(IoError::PngDecode(format!(
            "unsupported bit depth {:?}",
            frame.bit_depth
        )));
    }
    let pixels: Vec<u8> = match frame.color_type {
        png::ColorType::Grayscale => data.to_vec(),
        png::ColorType::GrayscaleAlpha => data.chunks_exact(2).map(|p| p[0]).collect(),
        png::ColorType::Rgb => data.chunks_exact(3).map(|p| luma(p[0], p[1], p[2])).collect(),
        png::ColorType::Rgba => data.chunks_exact(4).map(|p| luma(p[0], p[1], p[2])).collect(),
        png::ColorType::Indexed => {
            return Err(IoError::PngDecode("palette was not expanded".into()));
        }
    };
    GrayImage::new(width, height, pixels).map_err(|e| IoError::PngDecode(e.to_string()))
}

fn encode_png(img: &GrayImage) -> IoResult<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, img.width() as u32, img.height() as u32);
        encoder.set_color(png::ColorType::Grayscale);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder
            .write_header()
            .map_err(|e| IoError::PngEncode(e.to_string()))?;
        writer
            .write_image_data(img.pixels())
            .map_err(|e| IoError::PngEncode(e.to_string()))?;
        writer.finish().map_err(|e| IoError::PngEncode(e.to_string()))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rgb_png(w: u32, h: u32, color: png::ColorType, data: &[u8]) -> Vec<u8> {
        let mut out = Vec::new();
        let mut enc = png::Encoder::new(&mut out, w, h);
        enc.set_color(color);
        enc.set_depth(png::BitDepth::Eight);
        let mut wr = enc.write_header().unwrap();
        wr.write_image_data(data).unwrap();
        wr.finish().unwrap();
        out
    }

    #[test]
    fn minimal_ascii_pgm() {
        let img = decode(b"P2 2 2 255 0 0 255 255").unwrap();
        assert_eq!(img.dimensions(), (2, 2));
        assert_eq!(img.pixels(), &[0, 0, 255, 255]);
    }

    #[test]
    fn ascii_pgm_with_comments_and_rescale() {
        let img = decode(b"P2\n# made by hand\n3 1 # width height\n15\n0 # dark\n 8 15\n").unwrap();
        assert_eq!(img.pixels(), &[0, 136, 255]);
    }

    #[test]
    fn sixteen_bit_binary_rescale() {
        let mut bytes = b"P5\n1 1\n65535\n".to_vec();
        bytes.extend([0x80, 0x00]);
        assert_eq!(decode(&bytes).unwrap().pixels(), &[128]);
    }

    #[test]
    fn binary_pgm_bytes() {
        let img = GrayImage::new(1, 1, vec![0]).unwrap();
        let bytes = encode(&img, ImageFileFormat::PgmBinary).unwrap();
        assert_eq!(bytes, b"P5\n1 1\n255\n\x00");
    }

    #[test]
    fn binary_raster_may_start_with_whitespace_byte() {
        let bytes = b"P5 2 1 255\n\x0a\x20";
        assert_eq!(decode(bytes).unwrap().pixels(), &[10, 32]);
    }

    #[test]
    fn ascii_pgm_layout() {
        let img = GrayImage::new(3, 2, vec![1, 2, 3, 40, 50, 255]).unwrap();
        let text = String::from_utf8(encode(&img, ImageFileFormat::PgmAscii).unwrap()).unwrap();
        assert_eq!(text, "P2\n3 2\n255\n1 2 3\n40 50 255\n");
        assert_eq!(decode(text.as_bytes()).unwrap(), img);
    }

    #[test]
    fn color_png_to_luma() {
        let bytes = rgb_png(2, 1, png::ColorType::Rgb, &[255, 0, 0, 10, 200, 30]);
        let img = decode(&bytes).unwrap();
        // 0.299*10 + 0.587*200 + 0.114*30 = 123.81
        assert_eq!(img.pixels(), &[76, 124]);
        let bytes = rgb_png(1, 1, png::ColorType::Rgba, &[255, 0, 0, 0]);
        assert_eq!(decode(&bytes).unwrap().pixels(), &[76]);
        let bytes = rgb_png(1, 1, png::ColorType::GrayscaleAlpha, &[99, 7]);
        assert_eq!(decode(&bytes).unwrap().pixels(), &[99]);
    }

    #[test]
    fn png_round_trip() {
        let img = GrayImage::from_fn(13, 7, |x, y| (x * 19 + y * 31) as u8).unwrap();
        let bytes = encode(&img, ImageFileFormat::Png).unwrap();
        assert_eq!(ImageFileFormat::detect(&bytes), Some(ImageFileFormat::Png));
        assert_eq!(decode(&bytes).unwrap(), img);
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(decode(b"P6 1 1 255 abc"), Err(IoError::UnsupportedMagic(_))));
        assert!(matches!(decode(b"GIF89a"), Err(IoError::UnsupportedMagic(_))));
        assert!(matches!(
            decode(b"P5 x 1 255 "),
            Err(IoError::MalformedHeader { offset: 3, .. })
        ));
        assert!(matches!(
            decode(b"P5 0 1 255 "),
            Err(IoError::MalformedHeader { .. })
        ));
        assert!(matches!(
            decode(b"P5 1 1 70000 "),
            Err(IoError::MalformedHeader { offset: 7, .. })
        ));
        assert!(matches!(
            decode(b"P5 2 2 255\n\x01\x02"),
            Err(IoError::Truncated {
                expected: 4,
                found: 2,
                ..
            })
        ));
        assert!(matches!(
            decode(b"P2 2 2 255 1 2 3"),
            Err(IoError::Truncated { found: 3, .. })
        ));
        assert!(matches!(
            decode(b"P2 1 1 15 16"),
            Err(IoError::SampleOutOfRange {
                offset: 10,
                value: 16,
                maxval: 15
            })
        ));
        assert!(matches!(decode(b"P2 1 1 255 1x"), Err(IoError::MalformedHeader { .. })));
        let mut png = rgb_png(1, 1, png::ColorType::Grayscale, &[1]);
        png.truncate(20);
        assert!(matches!(decode(&png), Err(IoError::PngDecode(_))));
        assert!(matches!(
            load_image("/nonexistent/definitely/missing.pgm"),
            Err(IoError::Read { .. })
        ));
    }

    #[test]
    fn output_format_from_extension() {
        assert_eq!(
            ImageFileFormat::for_output_path(Path::new("a/b.PNG")),
            ImageFileFormat::Png
        );
        assert_eq!(
            ImageFileFormat::for_output_path(Path::new("a/b.pgm")),
            ImageFileFormat::PgmBinary
        );
    }
}
