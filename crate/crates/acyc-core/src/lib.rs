//! Exact algebra for anticyclotomic theta elements: cyclotomic and p-adic
//! arithmetic, imaginary quadratic fields, class groups, Hecke characters,
//! theta series, Euler-factor congruences, finite Iwasawa algebras, definite
//! quaternion orders with Gross points, and Rankin L-value numerics.
#![no_std]
#![allow(unstable_name_collisions)]

extern crate alloc;

pub mod exactnum;
pub mod quadfield;
pub mod classfield;
pub mod heckechar;
pub mod thetamods;
pub mod normrel;
pub mod iwasawa;
pub mod quatgross;
pub mod lfun;
