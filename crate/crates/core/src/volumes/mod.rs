//! Volume polynomials `V_{g,n}` via Mirzakhani's recursion, with a memo table and
//! an optional on-disk cache.

mod kernel;
mod recursion;
mod table;

pub use kernel::{bernoulli_numbers, kernel_moment, zeta_even_rational};
pub use recursion::{base_case, compute_volume, dependencies, is_base_case};
pub use table::{
    volume_table_in, volume_table_up_to, CacheEvent, ConfigKey, VolumeTable, CACHE_DIR_ENV,
    DEFAULT_MAX_DIM,
};
