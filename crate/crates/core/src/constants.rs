//! Mathematical constants used by both criteria and the primorial tables.

use std::sync::LazyLock;

use serde::Serialize;

use crate::dd::DoubleDouble;

const GAMMA_DEC: &str = "0.57721566490153286060651209008240243104";
const E_GAMMA_DEC: &str = "1.78107241799019798523650410310717954917";
const ZETA2_DEC: &str = "1.64493406684822643647241516664602518922";
const E_GAMMA_OVER_ZETA2_DEC: &str = "1.08276219326092458012218803819092657018";

/// Euler's constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// e^γ.
pub const E_GAMMA: f64 = 1.781_072_417_990_198;
/// ζ(2) = π²/6.
pub const ZETA2: f64 = 1.644_934_066_848_226_4;
/// e^γ / ζ(2), the limit of `ψ(N_n)/(N_n log p_n)`.
pub const E_GAMMA_OVER_ZETA2: f64 = 1.082_762_193_260_924_6;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Constants {
    pub gamma: DoubleDouble,
    pub e_gamma: DoubleDouble,
    pub zeta2: DoubleDouble,
    pub e_gamma_over_zeta2: DoubleDouble,
}

static CONSTANTS: LazyLock<Constants> = LazyLock::new(|| {
    let parse = |s: &str| DoubleDouble::from_decimal(s).expect("constant literal");
    Constants {
        gamma: parse(GAMMA_DEC),
        e_gamma: parse(E_GAMMA_DEC),
        zeta2: parse(ZETA2_DEC),
        e_gamma_over_zeta2: parse(E_GAMMA_OVER_ZETA2_DEC),
    }
});

impl Constants {
    pub fn get() -> &'static Constants {
        &CONSTANTS
    }

    /// The decimal literals the pairs were built from, in field order.
    pub fn literals() -> [(&'static str, &'static str); 4] {
        [
            ("gamma", GAMMA_DEC),
            ("e_gamma", E_GAMMA_DEC),
            ("zeta2", ZETA2_DEC),
            ("e_gamma_over_zeta2", E_GAMMA_OVER_ZETA2_DEC),
        ]
    }
}
