//! Published reference values for the anticanonical twist of P⁴.

use crate::scalar::{parse_rational, Rational};

/// N_1, …, N_8.
pub const GW_TABLE: [&str; 8] = [
    "-650",
    "-160625",
    "-337216250/3",
    "-217998840625/2",
    "-125251505498880",
    "-479299410776921825/3",
    "-1531227197616745455000/7",
    "-1260949629604284268280625/4",
];

/// Coefficients of q¹, …, q⁵.
pub const M_EU: [i64; 5] = [1, 770, 1014275, 1703916750, 3286569025625];
pub const M_LOC: [i64; 5] = [1, -120, 63900, -63148000, 85136103750];
/// The q⁴ entry is printed as −5377000; composing the two maps above gives −53770000.
pub const F_BAR: [i64; 5] = [1, -650, 50625, -53770000, -49529975000];
pub const F_BAR_PRINTED_Q4: i64 = -5377000;

/// Constant in Ǩ(T̃₀) = c·x⁻⁵·I₀^eu(t − 5 log x, 1).
pub const KCHECK_TTILDE_CONSTANT: i64 = 24;

pub fn gw_table() -> Vec<Rational> {
    GW_TABLE
        .iter()
        .map(|s| parse_rational(s).expect("well-formed constant"))
        .collect()
}
