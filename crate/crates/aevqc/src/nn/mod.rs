//! Minimal from-scratch classical stack: convolution, pooling, dense layer,
//! softmax cross-entropy, and Adam. Every forward op has a matching backward
//! checked against central finite differences in the test suites.

mod adam;
mod backbone;
mod conv;
mod dense;
mod loss;
mod pool;
mod tensor;

pub use adam::{adam_step, AdamState};
pub use backbone::{BackboneTrace, TinyConvNet};
pub use conv::{conv2d_backward, conv2d_forward, relu, relu_backward, ConvKernels};
pub use dense::{dense_backward, dense_forward, DenseParams};
pub use loss::softmax_ce;
pub use pool::{global_pool, global_pool_backward, pool2d, pool2d_backward, PoolMode};
pub use tensor::FeatureTensor;
