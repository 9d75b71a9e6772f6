//! Octonions via the Cayley–Dickson construction over quaternion pairs:
//! `(a, b)(c, d) = (ac - d̄b, da + bc̄)`.

use std::ops::{Add, Mul, Neg, Sub};

type Quat = [f64; 4];

#[inline]
fn qmul(a: &Quat, b: &Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

#[inline]
fn qconj(a: &Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

/// An octonion in the basis `e0..e7`; `e0` is the unit.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Octonion(pub [f64; 8]);

impl Octonion {
    pub const ZERO: Octonion = Octonion([0.0; 8]);
    pub const ONE: Octonion = Octonion([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

    pub fn from_slice(s: &[f64]) -> Self {
        let mut c = [0.0; 8];
        c.copy_from_slice(&s[..8]);
        Octonion(c)
    }

    pub fn real(r: f64) -> Self {
        let mut c = [0.0; 8];
        c[0] = r;
        Octonion(c)
    }

    /// Basis unit `e_i`.
    pub fn basis(i: usize) -> Self {
        let mut c = [0.0; 8];
        c[i] = 1.0;
        Octonion(c)
    }

    pub fn re(&self) -> f64 {
        self.0[0]
    }

    pub fn conj(&self) -> Self {
        let mut c = self.0;
        for x in &mut c[1..] {
            *x = -*x;
        }
        Octonion(c)
    }

    /// Quadratic norm `n(x) = Σ xᵢ²`.
    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Octonion(self.0.map(|x| x * s))
    }

    fn halves(&self) -> (Quat, Quat) {
        let c = &self.0;
        ([c[0], c[1], c[2], c[3]], [c[4], c[5], c[6], c[7]])
    }
}

impl Mul for Octonion {
    type Output = Octonion;

    fn mul(self, rhs: Octonion) -> Octonion {
        let (a, b) = self.halves();
        let (c, d) = rhs.halves();
        let ac = qmul(&a, &c);
        let db = qmul(&qconj(&d), &b);
        let da = qmul(&d, &a);
        let bc = qmul(&b, &qconj(&c));
        Octonion([
            ac[0] - db[0],
            ac[1] - db[1],
            ac[2] - db[2],
            ac[3] - db[3],
            da[0] + bc[0],
            da[1] + bc[1],
            da[2] + bc[2],
            da[3] + bc[3],
        ])
    }
}

impl Add for Octonion {
    type Output = Octonion;

    fn add(self, rhs: Octonion) -> Octonion {
        let mut c = self.0;
        for (x, y) in c.iter_mut().zip(rhs.0) {
            *x += y;
        }
        Octonion(c)
    }
}

impl Sub for Octonion {
    type Output = Octonion;

    fn sub(self, rhs: Octonion) -> Octonion {
        let mut c = self.0;
        for (x, y) in c.iter_mut().zip(rhs.0) {
            *x -= y;
        }
        Octonion(c)
    }
}

impl Neg for Octonion {
    type Output = Octonion;

    fn neg(self) -> Octonion {
        Octonion(self.0.map(|x| -x))
    }
}
