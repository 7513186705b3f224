use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// How samples outside the image are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BorderPolicy {
    /// Clamp to the nearest edge pixel (`aaa|abcd|ddd`).
    #[default]
    Replicate,
    /// Mirror about the edge pixel without repeating it (`dcb|abcd|cba`).
    Reflect,
    /// Treat everything outside as zero.
    Zero,
}

impl BorderPolicy {
    /// Maps a possibly out-of-range coordinate onto `0..len`, or `None` when
    /// the sample is an implicit zero.
    #[inline]
    pub fn resolve(self, i: isize, len: usize) -> Option<usize> {
        let n = len as isize;
        if (0..n).contains(&i) {
            return Some(i as usize);
        }
        match self {
            BorderPolicy::Replicate => Some(i.clamp(0, n - 1) as usize),
            BorderPolicy::Zero => None,
            BorderPolicy::Reflect => {
                if n == 1 {
                    return Some(0);
                }
                let period = 2 * (n - 1);
                let mut m = i.rem_euclid(period);
                if m >= n {
                    m = period - m;
                }
                Some(m as usize)
            }
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BorderPolicy::Replicate => "replicate",
            BorderPolicy::Reflect => "reflect",
            BorderPolicy::Zero => "zero",
        }
    }
}

impl fmt::Display for BorderPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BorderPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "replicate" | "clamp" => Ok(BorderPolicy::Replicate),
            "reflect" | "mirror" => Ok(BorderPolicy::Reflect),
            "zero" | "constant" => Ok(BorderPolicy::Zero),
            other => Err(format!(
                "unknown border policy '{other}' (replicate|reflect|zero)"
            )),
        }
    }
}

/// A copy of one source row extended by `pad` samples on each side, so that
/// horizontal taps can run over contiguous memory.
pub(crate) struct PaddedRow {
    buf: Vec<f64>,
    pad: usize,
}

impl PaddedRow {
    pub(crate) fn new(width: usize, pad: usize) -> Self {
        Self {
            buf: vec![0.0; width + 2 * pad],
            pad,
        }
    }

    /// Load `row` (or zeros when `row` is `None`) and fill the margins.
    pub(crate) fn load(&mut self, row: Option<&[f64]>, border: BorderPolicy) {
        match row {
            None => self.buf.iter_mut().for_each(|v| *v = 0.0),
            Some(row) => {
                self.interior_mut().copy_from_slice(row);
                self.fill_margins(border);
            }
        }
    }

    /// The unpadded part, for writing a row in place.
    #[inline]
    pub(crate) fn interior_mut(&mut self) -> &mut [f64] {
        let w = self.buf.len() - 2 * self.pad;
        &mut self.buf[self.pad..self.pad + w]
    }

    /// Fill the margins from the interior.
    pub(crate) fn fill_margins(&mut self, border: BorderPolicy) {
        let pad = self.pad;
        let w = self.buf.len() - 2 * pad;
        for k in 0..pad {
            let left = -(pad as isize) + k as isize;
            let right = (w + k) as isize;
            self.buf[k] = border.resolve(left, w).map_or(0.0, |i| self.buf[pad + i]);
            self.buf[pad + w + k] = border.resolve(right, w).map_or(0.0, |i| self.buf[pad + i]);
        }
    }

    /// The whole buffer, margins included.
    #[inline]
    pub(crate) fn padded(&self) -> &[f64] {
        &self.buf
    }

    #[inline]
    pub(crate) fn shifted(&self, offset: isize, width: usize) -> &[f64] {
        let start = (self.pad as isize + offset) as usize;
        &self.buf[start..start + width]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolve_per_policy() {
        assert_eq!(BorderPolicy::Replicate.resolve(-2, 5), Some(0));
        assert_eq!(BorderPolicy::Replicate.resolve(7, 5), Some(4));
        assert_eq!(BorderPolicy::Reflect.resolve(-1, 5), Some(1));
        assert_eq!(BorderPolicy::Reflect.resolve(-2, 5), Some(2));
        assert_eq!(BorderPolicy::Reflect.resolve(5, 5), Some(3));
        assert_eq!(BorderPolicy::Reflect.resolve(11, 5), Some(3));
        assert_eq!(BorderPolicy::Zero.resolve(-1, 5), None);
        assert_eq!(BorderPolicy::Zero.resolve(3, 5), Some(3));
    }

    #[test]
    fn padded_row_margins() {
        let mut p = PaddedRow::new(4, 2);
        p.load(Some(&[1.0, 2.0, 3.0, 4.0]), BorderPolicy::Replicate);
        assert_eq!(p.shifted(-2, 8), &[1.0, 1.0, 1.0, 2.0, 3.0, 4.0, 4.0, 4.0]);
        p.load(Some(&[1.0, 2.0, 3.0, 4.0]), BorderPolicy::Reflect);
        assert_eq!(p.shifted(-2, 8), &[3.0, 2.0, 1.0, 2.0, 3.0, 4.0, 3.0, 2.0]);
        p.load(Some(&[1.0, 2.0, 3.0, 4.0]), BorderPolicy::Zero);
        assert_eq!(p.shifted(-2, 8), &[0.0, 0.0, 1.0, 2.0, 3.0, 4.0, 0.0, 0.0]);
    }

    #[test]
    fn default_and_parse() {
        assert_eq!(BorderPolicy::default(), BorderPolicy::Replicate);
        assert_eq!("reflect".parse::<BorderPolicy>(), Ok(BorderPolicy::Reflect));
        assert!("wrap".parse::<BorderPolicy>().is_err());
    }
}
