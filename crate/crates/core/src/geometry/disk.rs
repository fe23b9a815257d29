//! Poincaré disk model of the hyperbolic plane.
//!
//! Geodesics are handled by moving one endpoint to the origin with a Möbius
//! isometry, where geodesics are diameters and hyperbolic arc length along a
//! ray is `2·artanh(r)`.

use crate::error::{Error, Result};
use crate::math::{atanh, hypot, tanh};

/// Largest Euclidean norm a disk point may have.
pub const MAX_NORM: f64 = 1.0 - 1e-9;

/// A point of the open unit disk with `|u| ≤ 1 - 10⁻⁹`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskPoint {
    x: f64,
    y: f64,
}

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::domain("disk point has non-finite coordinates"));
        }
        let n = hypot(x, y);
        if n > MAX_NORM {
            return Err(Error::domain(alloc::format!(
                "disk point ({x}, {y}) has norm {n}, beyond 1 - 1e-9"
            )));
        }
        Ok(DiskPoint { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn coords(&self) -> [f64; 2] {
        [self.x, self.y]
    }

    pub fn norm(&self) -> f64 {
        hypot(self.x, self.y)
    }

    fn c(&self) -> C {
        C(self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct C(pub f64, pub f64);

impl C {
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: C) -> C {
        C(self.0 - o.0, self.1 - o.1)
    }
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn conj(self) -> C {
        C(self.0, -self.1)
    }
    fn scale(self, s: f64) -> C {
        C(self.0 * s, self.1 * s)
    }
    fn abs(self) -> f64 {
        hypot(self.0, self.1)
    }
    fn div(self, o: C) -> C {
        let d = o.0 * o.0 + o.1 * o.1;
        C(
            (self.0 * o.0 + self.1 * o.1) / d,
            (self.1 * o.0 - self.0 * o.1) / d,
        )
    }
}

const ONE: C = C(1.0, 0.0);

/// Möbius isometry sending `a` to the origin: `z ↦ (z - a)/(1 - āz)`.
pub(crate) fn to_origin(a: C, z: C) -> C {
    z.sub(a).div(ONE.sub(a.conj().mul(z)))
}

/// Inverse of [`to_origin`]: `w ↦ (w + a)/(1 + āw)`.
pub(crate) fn from_origin(a: C, w: C) -> C {
    w.add(a).div(ONE.add(a.conj().mul(w)))
}

pub(crate) fn distance(u: &DiskPoint, v: &DiskPoint) -> f64 {
    if u == v {
        return 0.0;
    }
    let (a, b) = (u.c(), v.c());
    let delta = a.sub(b).abs() / ONE.sub(a.conj().mul(b)).abs();
    2.0 * atanh(delta.min(1.0))
}

pub(crate) fn interpolate(u: &DiskPoint, v: &DiskPoint, t: f64) -> Result<DiskPoint> {
    if t == 0.0 || u == v {
        return Ok(*u);
    }
    if t == 1.0 {
        return Ok(*v);
    }
    let a = u.c();
    let w = to_origin(a, v.c());
    let r = w.abs();
    let target = tanh(t * atanh(r));
    let z = from_origin(a, w.scale(target / r));
    DiskPoint::new(z.0, z.1)
}

/// Closest point to `x` on the geodesic segment `[p, q]`.
///
/// After moving `p` to the origin and rotating `q` onto the positive real
/// axis, the segment is part of a diameter. In the Klein model hyperbolic
/// perpendiculars to a diameter are Euclidean perpendiculars, so the foot of
/// `x` is read off from its Klein abscissa and clamped to the segment.
pub(crate) fn project_segment(p: &DiskPoint, q: &DiskPoint, x: &DiskPoint) -> Result<DiskPoint> {
    if p == q {
        return Ok(*p);
    }
    let a = p.c();
    let qq = to_origin(a, q.c());
    let len = qq.abs();
    let dir = qq.scale(1.0 / len);
    let xx = to_origin(a, x.c()).mul(dir.conj());
    let n2 = xx.0 * xx.0 + xx.1 * xx.1;
    let klein = 2.0 * xx.0 / (1.0 + n2);
    let foot = klein / (1.0 + crate::math::sqrt((1.0 - klein * klein).max(0.0)));
    let s = foot.clamp(0.0, len);
    if s == 0.0 {
        return Ok(*p);
    }
    if s == len {
        return Ok(*q);
    }
    let z = from_origin(a, dir.scale(s));
    DiskPoint::new(z.0, z.1)
}

/// The Möbius isometry taking the origin to `a`, applied to `w`.
pub(crate) fn translate(a: &DiskPoint, w: &DiskPoint) -> Result<DiskPoint> {
    let z = from_origin(a.c(), w.c());
    DiskPoint::new(z.0, z.1)
}
