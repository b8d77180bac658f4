mod common;

use common::grad::{agent_suite, layer_suite};

#[test]
fn each_layer_type() {
    for seed in 0..20 {
        layer_suite(seed).unwrap();
    }
}

#[test]
fn agent_architectures() {
    for seed in 0..20 {
        agent_suite(seed).unwrap();
    }
}
