pub mod analysis;
pub mod bits;
pub mod codefile;
pub mod codeset;
pub mod components;
pub mod construction;
pub mod counting;
pub mod error;
pub mod gf2;
pub mod isometries;
pub mod scaffold;
pub mod selftest;
pub mod word;
