//! Kobayashi-metric geometry of convex domains in C^d.
//!
//! Domains are built from a small catalog of planar and product pieces,
//! affine images, intersections and convex defining functions. On top of
//! that the crate provides certified distance brackets, midpoint and CAT(0)
//! comparison checks, boundary convexity diagnostics and scaling limits.

#![no_std]
// `!(x > 0.0)` deliberately rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
extern crate alloc;

pub mod cat0;
pub mod convexity;
pub mod domains;
pub mod error;
pub mod limits;
pub mod linalg;
pub mod metric;
pub mod numeric;
pub mod planar;
pub mod point;

pub use domains::{ConvexDomain, Node, PlanarSlice, RayHit};
pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use num_complex::Complex64;
pub use point::{c, CPoint};
