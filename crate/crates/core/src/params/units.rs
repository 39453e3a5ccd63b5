//! Unit audit: SI exponents (kg, m, s, A) of every quantity the chain produces.

use std::ops::{Add, Div, Mul, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dim {
    pub kg: i8,
    pub m: i8,
    pub s: i8,
    pub a: i8,
}

impl Dim {
    pub const fn new(kg: i8, m: i8, s: i8, a: i8) -> Self {
        Self { kg, m, s, a }
    }

    pub const NONE: Dim = Dim::new(0, 0, 0, 0);

    pub fn pow(self, n: i8) -> Self {
        Dim::new(self.kg * n, self.m * n, self.s * n, self.a * n)
    }

    /// Square root; `None` when an exponent is odd.
    pub fn sqrt(self) -> Option<Self> {
        let even = |x: i8| x % 2 == 0;
        (even(self.kg) && even(self.m) && even(self.s) && even(self.a))
            .then(|| Dim::new(self.kg / 2, self.m / 2, self.s / 2, self.a / 2))
    }
}

impl Mul for Dim {
    type Output = Dim;
    fn mul(self, o: Dim) -> Dim {
        Dim::new(self.kg + o.kg, self.m + o.m, self.s + o.s, self.a + o.a)
    }
}

impl Div for Dim {
    type Output = Dim;
    fn div(self, o: Dim) -> Dim {
        Dim::new(self.kg - o.kg, self.m - o.m, self.s - o.s, self.a - o.a)
    }
}

// Addition and subtraction are only defined between equal dimensions.
impl Add for Dim {
    type Output = Option<Dim>;
    fn add(self, o: Dim) -> Option<Dim> {
        (self == o).then_some(self)
    }
}

impl Sub for Dim {
    type Output = Option<Dim>;
    fn sub(self, o: Dim) -> Option<Dim> {
        (self == o).then_some(self)
    }
}

pub const KG: Dim = Dim::new(1, 0, 0, 0);
pub const METER: Dim = Dim::new(0, 1, 0, 0);
pub const SECOND: Dim = Dim::new(0, 0, 1, 0);
pub const AMPERE: Dim = Dim::new(0, 0, 0, 1);

pub const CHARGE: Dim = Dim::new(0, 0, 1, 1);
pub const ENERGY: Dim = Dim::new(1, 2, -2, 0);
pub const ACTION: Dim = Dim::new(1, 2, -1, 0);
pub const VOLT: Dim = Dim::new(1, 2, -3, -1);
pub const TESLA: Dim = Dim::new(1, 0, -2, -1);
pub const RATE: Dim = Dim::new(0, 0, -1, 0);
pub const MAGNETIC_MOMENT: Dim = Dim::new(0, 2, 0, 1);
pub const PERMEABILITY: Dim = Dim::new(1, 1, -2, -2);
pub const PERMITTIVITY: Dim = Dim::new(-1, -3, 4, 2);
pub const VELOCITY: Dim = Dim::new(0, 1, -1, 0);
pub const FIELD: Dim = Dim::new(1, 1, -3, -1);
pub const CURVATURE: Dim = Dim::new(1, 0, -3, -1);
pub const INTENSITY: Dim = Dim::new(1, 0, -3, 0);
pub const ENERGY_LENGTH: Dim = Dim::new(1, 3, -2, 0);

/// Documented dimension of each reported quantity, keyed by report name.
pub const AUDIT_TABLE: &[(&str, Dim)] = &[
    ("Lambda", ENERGY_LENGTH),
    ("r_b", METER),
    ("B0", TESLA),
    ("omega_s", RATE),
    ("omega_x", RATE),
    ("omega_y", RATE),
    ("x0", METER),
    ("eta0", Dim::NONE),
    ("eta1", Dim::NONE),
    ("eta2", Dim::NONE),
    ("Delta_s", RATE),
    ("Delta_a", RATE),
    ("Delta_x", RATE),
    ("Omega_sz", RATE),
    ("Omega_sx1", RATE),
    ("Omega_sx2", RATE),
    ("B_tilde_z", TESLA),
    ("Omega_s", RATE),
    ("E_w", FIELD),
    ("P_w", INTENSITY),
    ("i0", AMPERE),
    ("u_nm", MAGNETIC_MOMENT),
    ("z11", METER),
    ("z12", METER),
    ("z22", METER),
    ("omega_a", RATE),
    ("E_z", FIELD),
    ("Q_xx", CURVATURE),
    ("J_dc", Dim::new(0, -2, 0, 1)),
];

pub fn lookup(name: &str) -> Option<Dim> {
    AUDIT_TABLE
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, d)| *d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(name: &str) -> Dim {
        lookup(name).unwrap_or_else(|| panic!("{name} missing from audit table"))
    }

    #[test]
    fn derived_unit_identities() {
        assert_eq!(VOLT, ENERGY / CHARGE);
        assert_eq!(TESLA, VOLT * SECOND / METER.pow(2));
        assert_eq!(ENERGY, ACTION * RATE);
    }

    #[test]
    fn every_formula_is_dimensionally_consistent() {
        // Lambda = e^2 / eps0
        assert_eq!(dim("Lambda"), CHARGE.pow(2) / PERMITTIVITY);
        // r_b = hbar^2 / (m_e Lambda)
        assert_eq!(dim("r_b"), ACTION.pow(2) / (KG * dim("Lambda")));
        // B0 = mu0 I / h
        assert_eq!(dim("B0"), PERMEABILITY * AMPERE / METER);
        // omega_s = u_b B0 / hbar
        assert_eq!(dim("omega_s"), MAGNETIC_MOMENT * dim("B0") / ACTION);
        // omega_x = sqrt(e Q / m_e)
        assert_eq!(Some(dim("omega_x")), (CHARGE * dim("Q_xx") / KG).sqrt());
        // x0 = sqrt(hbar / (m_e omega))
        assert_eq!(Some(dim("x0")), (ACTION / (KG * RATE)).sqrt());
        // eta = length / length
        assert_eq!(dim("eta0"), dim("x0") / METER);
        assert_eq!(dim("eta1"), dim("z11") / METER);
        // Delta_s = omega_s * eta
        assert_eq!(dim("Delta_s"), dim("omega_s") * dim("eta1"));
        // Omega_sz = Omega_12^2 / detuning
        assert_eq!(
            dim("Omega_sz"),
            RATE.pow(2) / (dim("Delta_a") - dim("Delta_s")).unwrap()
        );
        // Omega_sx = eta^2 omega_s^2 / (omega_x - omega_s)
        assert_eq!(
            dim("Omega_sx1"),
            dim("eta0").pow(2) * dim("omega_s").pow(2) / (dim("omega_x") - dim("omega_s")).unwrap()
        );
        // B_tilde = mu0 I0 / l, Omega_s = u_b B / hbar
        assert_eq!(dim("B_tilde_z"), PERMEABILITY * AMPERE / METER);
        assert_eq!(dim("Omega_s"), MAGNETIC_MOMENT * dim("B_tilde_z") / ACTION);
        // E_w = hbar Omega_12 / (e z12)
        assert_eq!(dim("E_w"), ACTION * RATE / (CHARGE * METER));
        // P_w = c eps0 E^2
        assert_eq!(dim("P_w"), VELOCITY * PERMITTIVITY * dim("E_w").pow(2));
        // i0 = e n_s omega_m S / D * dz
        assert_eq!(
            dim("i0"),
            CHARGE * METER.pow(-2) * RATE * METER.pow(2) / METER * METER
        );
        // u_nm = e z sqrt(hbar omega / m_e)
        assert_eq!(
            Some(dim("u_nm")),
            (ACTION * RATE / KG).sqrt().map(|v| CHARGE * METER * v)
        );
        // omega_a = energy / hbar; E_z field drives energy e z E_z
        assert_eq!(dim("omega_a"), ENERGY / ACTION);
        assert_eq!(ENERGY, CHARGE * METER * dim("E_z"));
        assert_eq!(dim("J_dc"), AMPERE / METER.pow(2));
    }

    #[test]
    fn mismatched_sum_is_rejected() {
        assert_eq!(RATE + METER, None);
        assert_eq!(RATE - RATE, Some(RATE));
    }
}
