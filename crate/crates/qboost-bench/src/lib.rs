//! Benchmark fixtures for qboost.

use qboost::{BlockLabel, DeformationParameter, TensorBlock};

pub const PRECISION: usize = 128;

pub fn sample_q() -> DeformationParameter {
    DeformationParameter::from_ratio(5, 4).expect("positive")
}

pub fn block(twice_l: u32) -> BlockLabel {
    BlockLabel::from_twice(twice_l)
}

pub fn pair(twice_l2: u32, twice_l1: u32) -> TensorBlock {
    TensorBlock::new(block(twice_l2), block(twice_l1))
}
