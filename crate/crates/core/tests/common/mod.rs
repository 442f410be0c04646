#![allow(dead_code)]

pub mod profinite;
pub mod tree;
pub mod words;
