//! Row-parallel drivers and a small row cache for streaming stencils.

use rayon::prelude::*;

/// Output rows per parallel band in the streaming paths.
pub(crate) const BAND_ROWS: usize = 32;

/// Fills a `width * height` buffer row by row. Each row is produced
/// independently, so the result does not depend on the thread count.
pub(crate) fn par_rows<F>(width: usize, height: usize, fill: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let mut out = vec![0.0; width * height];
    out.par_chunks_mut(width)
        .enumerate()
        .for_each(|(y, row)| fill(y, row));
    out
}

/// Two-output variant of [`par_rows`].
pub(crate) fn par_rows2<F>(width: usize, height: usize, fill: F) -> (Vec<f64>, Vec<f64>)
where
    F: Fn(usize, &mut [f64], &mut [f64]) + Sync,
{
    let mut a = vec![0.0; width * height];
    let mut b = vec![0.0; width * height];
    a.par_chunks_mut(width)
        .zip(b.par_chunks_mut(width))
        .enumerate()
        .for_each(|(y, (ra, rb))| fill(y, ra, rb));
    (a, b)
}

/// Two outputs filled in bands of [`BAND_ROWS`] rows. `fill` receives the
/// first row index of the band and the two band buffers. Every pixel must be
/// computed the same way whatever band it falls in.
#[cfg(test)]
pub(crate) fn par_bands2<F>(width: usize, height: usize, fill: F) -> (Vec<f64>, Vec<f64>)
where
    F: Fn(usize, &mut [f64], &mut [f64]) + Sync,
{
    let mut a = vec![0.0; width * height];
    let mut b = vec![0.0; width * height];
    par_bands2_into(width, &mut a, &mut b, fill);
    (a, b)
}

/// [`par_bands2`] over caller-owned buffers of equal length.
pub(crate) fn par_bands2_into<F>(width: usize, a: &mut [f64], b: &mut [f64], fill: F)
where
    F: Fn(usize, &mut [f64], &mut [f64]) + Sync,
{
    debug_assert_eq!(a.len(), b.len());
    let chunk = width * BAND_ROWS;
    a.par_chunks_mut(chunk)
        .zip(b.par_chunks_mut(chunk))
        .enumerate()
        .for_each(|(band, (ra, rb))| fill(band * BAND_ROWS, ra, rb));
}

/// Cache of recently computed rows, each `channels * width` long, keyed by
/// row index modulo the slot count. Any set of rows that spans fewer
/// indices than there are slots can be held at once.
pub(crate) struct RowRing {
    stride: usize,
    tags: Vec<Option<usize>>,
    buf: Vec<f64>,
}

impl RowRing {
    pub(crate) fn new(slots: usize, channels: usize, width: usize) -> Self {
        let stride = channels * width;
        Self {
            stride,
            tags: vec![None; slots],
            buf: vec![0.0; slots * stride],
        }
    }

    /// Make `row` available, computing it with `fill` if it is not cached.
    /// `fill` must overwrite the whole buffer; it holds stale data.
    pub(crate) fn ensure(&mut self, row: usize, fill: impl FnOnce(&mut [f64])) {
        let slot = row % self.tags.len();
        if self.tags[slot] == Some(row) {
            return;
        }
        fill(&mut self.buf[slot * self.stride..(slot + 1) * self.stride]);
        self.tags[slot] = Some(row);
    }

    pub(crate) fn get(&self, row: usize) -> &[f64] {
        let slot = row % self.tags.len();
        assert_eq!(self.tags[slot], Some(row), "row {row} evicted from ring");
        &self.buf[slot * self.stride..(slot + 1) * self.stride]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_caches_and_evicts() {
        let mut ring = RowRing::new(3, 2, 2);
        let mut calls = 0;
        for row in [0, 1, 2, 1, 0] {
            ring.ensure(row, |d| {
                calls += 1;
                d.iter_mut().for_each(|v| *v = row as f64);
            });
        }
        assert_eq!(calls, 3);
        ring.ensure(3, |d| d.iter_mut().for_each(|v| *v = 7.0));
        assert_eq!(ring.get(3), &[7.0; 4]);
        assert_eq!(ring.get(1), &[1.0; 4]);
    }

    #[test]
    #[should_panic(expected = "evicted")]
    fn evicted_row_panics() {
        let mut ring = RowRing::new(2, 1, 1);
        ring.ensure(0, |_| {});
        ring.ensure(2, |_| {});
        ring.get(0);
    }

    #[test]
    fn bands_cover_every_row() {
        let h = BAND_ROWS * 2 + 5;
        let (a, b) = par_bands2(3, h, |y0, ra, rb| {
            for (i, (x, z)) in ra.iter_mut().zip(rb.iter_mut()).enumerate() {
                *x = (y0 * 3 + i) as f64;
                *z = 1.0;
            }
        });
        assert!(a.iter().enumerate().all(|(i, &v)| v == i as f64));
        assert!(b.iter().all(|&v| v == 1.0));
    }
}
