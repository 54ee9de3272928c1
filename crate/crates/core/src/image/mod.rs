//! Image containers and the low-level operations every metric shares.

pub mod color;
pub mod fft;
pub mod filter;
pub mod histogram;
pub mod plane;
pub mod window;

pub use color::{to_grayscale, ColorImage};
pub use filter::{convolve3x3, sobel, GradientField, Kernel3};
pub use histogram::{histogram, joint_histogram, shannon_entropy, Histogram, JointHistogram};
pub use plane::{ensure_triple, GrayPlane, Plane};
pub use window::{window_stats, WindowSpec, WindowStats};
