use std::fs::File;
use std::io::{BufRead, BufWriter, Seek, Write};
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::{ExtendedColorType, ImageEncoder, ImageFormat, ImageReader};

use super::EncodedImage;
use crate::error::{Error, Result};
use crate::imgcore::Frame;

/// Something that can be written as an 8-bit PNG.
pub trait PngImage {
    fn png_dims(&self) -> (usize, usize);
    fn png_color(&self) -> ExtendedColorType;
    fn png_bytes(&self) -> Vec<u8>;
}

impl PngImage for EncodedImage {
    fn png_dims(&self) -> (usize, usize) {
        (self.width(), self.height())
    }

    fn png_color(&self) -> ExtendedColorType {
        ExtendedColorType::Rgb8
    }

    fn png_bytes(&self) -> Vec<u8> {
        self.data().to_vec()
    }
}

/// Frames become grayscale: clamped to `[0, 255]`, rounded half away from zero.
impl PngImage for Frame {
    fn png_dims(&self) -> (usize, usize) {
        self.dims()
    }

    fn png_color(&self) -> ExtendedColorType {
        ExtendedColorType::L8
    }

    fn png_bytes(&self) -> Vec<u8> {
        self.data()
            .iter()
            .map(|v| v.clamp(0.0, 255.0).round() as u8)
            .collect()
    }
}

pub fn write_png<I: PngImage + ?Sized, W: Write>(image: &I, sink: W) -> Result<()> {
    let (w, h) = image.png_dims();
    PngEncoder::new(sink).write_image(&image.png_bytes(), w as u32, h as u32, image.png_color())?;
    Ok(())
}

pub fn write_png_file<I: PngImage + ?Sized>(image: &I, path: impl AsRef<Path>) -> Result<()> {
    let mut sink = BufWriter::new(File::create(path)?);
    write_png(image, &mut sink)?;
    sink.flush()?;
    Ok(())
}

/// Decodes an 8-bit RGB PNG.
pub fn read_png_rgb<R: BufRead + Seek>(source: R) -> Result<EncodedImage> {
    let img = ImageReader::with_format(source, ImageFormat::Png).decode()?;
    match img {
        image::DynamicImage::ImageRgb8(buf) => {
            let (w, h) = buf.dimensions();
            EncodedImage::new(w as usize, h as usize, buf.into_raw())
        }
        other => Err(Error::UnsupportedImage(format!(
            "{:?}, expected RGB8",
            other.color()
        ))),
    }
}
