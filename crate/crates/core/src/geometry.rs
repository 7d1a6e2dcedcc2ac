use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::Scalar;

/// Horizontal position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    /// Linear interpolation `self + t (other - self)`.
    pub fn lerp(self, other: Self, t: T) -> Self {
        Self::new(self.x + t * (other.x - self.x), self.y + t * (other.y - self.y))
    }

    pub fn at_height(self, z: T) -> Point3<T> {
        Point3 { x: self.x, y: self.y, z }
    }

    pub fn cast<U: Scalar>(self) -> Point2<U> {
        Point2::new(U::of(self.x.as_f64()), U::of(self.y.as_f64()))
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Scalar> Mul<T> for Point2<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        Self::new(self.x * rhs, self.y * rhs)
    }
}

/// Antenna position in meters, `z` above ground.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Point3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn distance(self, other: Self) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}
