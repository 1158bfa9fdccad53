//! Image domains, Carleson-type measures and the cusp geometry.

pub mod blaschke;
pub mod domain;
pub mod measure;

pub use blaschke::{blaschke_certificate, BlaschkeCertificate, BlaschkeProduct, WindowGrid};
pub use domain::{CuspDomain, ImageDomain};
pub use measure::{
    annulus_area, big_m_functional, cusp_imaginary_law, default_t_grid, disk_inclusion_check,
    m_functional, mc_integral, sector_constant, window_area, zinc_upper_bound, CarlesonWindow,
    MFunctional, McParams, Method, RegionMeasure, ZincBound, ZincTable,
};
