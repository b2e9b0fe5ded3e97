//! Zero engine: Hardy's `Z`, Gram-block zero isolation, and zero tables.

mod hardy;
mod rs_coeffs;
mod search;
mod table;
mod theta;

pub use hardy::{hardy_z, hardy_z_riemann_siegel, zeta_critical_line, EULER_MACLAURIN_CUTOFF};
pub use search::{
    compute_table, find_zeros, GramBlock, SearchDiagnostic, ZeroSearch, COUNT_SLACK,
    MAX_SUBDIVISION, REFINE_WIDTH,
};
pub use table::{
    ingest_table, parse_table, verify_count, CountCheck, ZeroCache, ZeroSource, ZeroTable,
    HALF_COUNT_TOLERANCE, SUSPECT_DISCREPANCY,
};
pub use theta::{gram_point, riemann_siegel_theta, MAX_HEIGHT, MIN_HEIGHT};
