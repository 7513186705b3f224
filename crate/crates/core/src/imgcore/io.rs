use std::path::Path;

use image::DynamicImage;

use super::Frame;
use crate::error::{Error, Result};

/// Interleaved 8-bit image with 1 or 3 channels, as decoded from disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image8 {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub data: Vec<u8>,
}

impl Image8 {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != width * height * channels {
            return Err(Error::BadLength {
                len: data.len(),
                width,
                height,
                channels,
            });
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }
}

/// BT.601 luma, `0.299 R + 0.587 G + 0.114 B`, on the `[0, 255]` scale.
pub fn to_grayscale(image: &Image8) -> Result<Frame> {
    if image.channels != 3 {
        return Err(Error::ChannelCount(image.channels));
    }
    if image.width < 3 || image.height < 3 {
        return Err(Error::TooSmall {
            width: image.width,
            height: image.height,
        });
    }
    let data = image
        .data
        .chunks_exact(3)
        .map(|p| 0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64)
        .collect();
    Frame::new(image.width, image.height, data)
}

/// Loads an 8-bit grayscale or RGB PNG/PGM/PPM as a frame. Color input is
/// converted with [`to_grayscale`].
pub fn load_frame(path: impl AsRef<Path>) -> Result<Frame> {
    let path = path.as_ref();
    let img = image::open(path)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    match img {
        DynamicImage::ImageLuma8(buf) => {
            Frame::new(w, h, buf.into_raw().into_iter().map(f64::from).collect())
        }
        DynamicImage::ImageRgb8(buf) => {
            log::info!(
                "{}: converting RGB input to grayscale (BT.601)",
                path.display()
            );
            to_grayscale(&Image8::new(w, h, 3, buf.into_raw())?)
        }
        other => Err(Error::UnsupportedImage(format!(
            "{}: {:?} (expected 8-bit gray or RGB)",
            path.display(),
            other.color()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solid(rgb: [u8; 3]) -> Image8 {
        Image8::new(3, 3, 3, rgb.repeat(9)).unwrap()
    }

    #[test]
    fn luma_examples() {
        assert!((to_grayscale(&solid([255, 255, 255])).unwrap().get(1, 1) - 255.0).abs() < 1e-9);
        assert_eq!(to_grayscale(&solid([0, 0, 0])).unwrap().get(1, 1), 0.0);
        let red = to_grayscale(&solid([255, 0, 0])).unwrap().get(0, 0);
        assert!((red - 76.245).abs() < 1e-9);
    }

    #[test]
    fn grayscale_errors() {
        let gray = Image8::new(3, 3, 1, vec![0; 9]).unwrap();
        assert!(matches!(to_grayscale(&gray), Err(Error::ChannelCount(1))));
        let tiny = Image8::new(2, 3, 3, vec![0; 18]).unwrap();
        assert!(matches!(to_grayscale(&tiny), Err(Error::TooSmall { .. })));
    }
}
