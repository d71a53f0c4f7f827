pub mod ainfty;
pub mod complex;
pub mod cubical;
pub mod morse;
pub mod pathmod;
pub mod sng;
