use num_complex::Complex64;

/// Batched one-dimensional complex DFT of a fixed length.
///
/// Both directions are unnormalized: `forward` uses the kernel
/// `exp(-2πi·jk/n)`, `inverse` uses `exp(+2πi·jk/n)`. Buffers passed in hold
/// one or more contiguous transforms of length [`FftBackend::len`].
#[allow(clippy::len_without_is_empty)]
pub trait FftBackend: Send + Sync {
    fn len(&self) -> usize;
    fn forward(&self, buf: &mut [Complex64]);
    fn inverse(&self, buf: &mut [Complex64]);
}

#[cfg(feature = "std")]
mod rust_fft {
    use super::FftBackend;
    use num_complex::Complex64;
    use rustfft::{Fft, FftPlanner};
    use std::sync::Arc;

    /// [`FftBackend`] backed by planned rustfft transforms.
    pub struct RustFftBackend {
        len: usize,
        forward: Arc<dyn Fft<f64>>,
        inverse: Arc<dyn Fft<f64>>,
    }

    impl RustFftBackend {
        pub fn new(len: usize) -> Self {
            let mut planner = FftPlanner::new();
            Self { len, forward: planner.plan_fft_forward(len), inverse: planner.plan_fft_inverse(len) }
        }
    }

    impl FftBackend for RustFftBackend {
        fn len(&self) -> usize {
            self.len
        }

        fn forward(&self, buf: &mut [Complex64]) {
            self.forward.process(buf);
        }

        fn inverse(&self, buf: &mut [Complex64]) {
            self.inverse.process(buf);
        }
    }

    impl core::fmt::Debug for RustFftBackend {
        fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
            f.debug_struct("RustFftBackend").field("len", &self.len).finish()
        }
    }
}

#[cfg(feature = "std")]
pub use rust_fft::RustFftBackend;
