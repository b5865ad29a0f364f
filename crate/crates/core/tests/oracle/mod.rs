//! Independent arbitrary-precision oracle (256-bit binary floats, ~77
//! decimal digits). Shares no code with the double-double paths under test.

#![allow(dead_code)]

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use psirh_core::dd::DoubleDouble;

pub const PREC: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

pub const GAMMA_60: &str = "0.577215664901532860606512090082402431042159335939923598805767";

pub struct Oracle {
    cc: Consts,
}

impl Oracle {
    pub fn new() -> Self {
        Oracle {
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn parse(&mut self, s: &str) -> BigFloat {
        BigFloat::parse(s, Radix::Dec, PREC, RM, &mut self.cc)
    }

    pub fn int(&self, n: u128) -> BigFloat {
        let hi = BigFloat::from_u64((n >> 64) as u64, PREC);
        let lo = BigFloat::from_u64(n as u64, PREC);
        let shift = BigFloat::from_u64(1 << 32, PREC);
        let shift = shift.mul(&shift, PREC, RM);
        hi.mul(&shift, PREC, RM).add(&lo, PREC, RM)
    }

    pub fn dd(&self, x: DoubleDouble) -> BigFloat {
        BigFloat::from_f64(x.hi, PREC).add(&BigFloat::from_f64(x.lo, PREC), PREC, RM)
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(PREC, RM, &mut self.cc)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(PREC, RM, &mut self.cc)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(PREC, RM)
    }

    pub fn gamma(&mut self) -> BigFloat {
        self.parse(GAMMA_60)
    }

    pub fn e_gamma(&mut self) -> BigFloat {
        let g = self.gamma();
        self.exp(&g)
    }

    pub fn zeta2(&mut self) -> BigFloat {
        let pi = self.pi();
        pi.mul(&pi, PREC, RM)
            .div(&BigFloat::from_u64(6, PREC), PREC, RM)
    }

    pub fn as_f64(&mut self, x: &BigFloat) -> f64 {
        let s = x.format(Radix::Dec, RM, &mut self.cc).expect("format");
        s.parse().expect("decimal")
    }

    /// `(a − b)/b` as binary64.
    pub fn rel_err(&mut self, a: &BigFloat, b: &BigFloat) -> f64 {
        let d = a.sub(b, PREC, RM).div(b, PREC, RM);
        self.as_f64(&d).abs()
    }

    pub fn abs_err(&mut self, a: &BigFloat, b: &BigFloat) -> f64 {
        let d = a.sub(b, PREC, RM);
        self.as_f64(&d).abs()
    }
}

pub fn add(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, PREC, RM)
}

pub fn sub(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.sub(b, PREC, RM)
}

pub fn mul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, PREC, RM)
}

pub fn div(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.div(b, PREC, RM)
}
