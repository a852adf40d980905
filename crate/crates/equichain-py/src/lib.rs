//! Python bindings for the equichain toolkit.

use pyo3::prelude::*;

/// The extension module; populated with classes and functions as the crate
/// surface stabilizes.
#[pymodule]
fn equichain_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
