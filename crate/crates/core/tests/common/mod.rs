#![allow(dead_code)]

pub mod interp;
pub mod perturb;
pub mod tree;
