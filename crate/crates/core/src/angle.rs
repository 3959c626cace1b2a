use std::fmt;
use std::ops::{Add, Sub};

/// A look angle on the unit circle, stored in degrees reduced to `[0, 360)`.
///
/// Arithmetic wraps circularly, so `LookAngle::new(350.0) + LookAngle::new(20.0)`
/// is `10°`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LookAngle(f64);

impl LookAngle {
    pub fn new(degrees: f64) -> Self {
        LookAngle(reduce(degrees))
    }

    pub fn degrees(self) -> f64 {
        self.0
    }

    pub fn radians(self) -> f64 {
        self.0.to_radians()
    }

    /// Shortest circular distance to `other`, in degrees, in `[0, 180]`.
    pub fn circular_distance(self, other: LookAngle) -> f64 {
        let d = (self.0 - other.0).abs();
        d.min(360.0 - d)
    }

    /// Arc length travelled going counter-clockwise from `self` to `other`,
    /// in `[0, 360)`.
    pub fn ccw_to(self, other: LookAngle) -> f64 {
        reduce(other.0 - self.0)
    }
}

fn reduce(degrees: f64) -> f64 {
    let r = degrees.rem_euclid(360.0);
    // rem_euclid can return 360.0 when degrees is a tiny negative number
    if r >= 360.0 {
        0.0
    } else {
        r
    }
}

impl Add for LookAngle {
    type Output = LookAngle;
    fn add(self, rhs: LookAngle) -> LookAngle {
        LookAngle::new(self.0 + rhs.0)
    }
}

impl Sub for LookAngle {
    type Output = LookAngle;
    fn sub(self, rhs: LookAngle) -> LookAngle {
        LookAngle::new(self.0 - rhs.0)
    }
}

impl From<f64> for LookAngle {
    fn from(degrees: f64) -> Self {
        LookAngle::new(degrees)
    }
}

impl fmt::Display for LookAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}°", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_into_range() {
        assert_eq!(LookAngle::new(360.0).degrees(), 0.0);
        assert_eq!(LookAngle::new(-90.0).degrees(), 270.0);
        assert_eq!(LookAngle::new(725.0).degrees(), 5.0);
        let tiny = LookAngle::new(-1e-18);
        assert!(tiny.degrees() >= 0.0 && tiny.degrees() < 360.0);
    }

    #[test]
    fn arithmetic_wraps() {
        assert_eq!((LookAngle::new(350.0) + LookAngle::new(20.0)).degrees(), 10.0);
        assert_eq!((LookAngle::new(10.0) - LookAngle::new(20.0)).degrees(), 350.0);
    }

    #[test]
    fn circular_distance_takes_short_way() {
        assert_eq!(LookAngle::new(10.0).circular_distance(LookAngle::new(350.0)), 20.0);
        assert_eq!(LookAngle::new(0.0).circular_distance(LookAngle::new(180.0)), 180.0);
    }
}
