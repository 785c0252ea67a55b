//! Scalar fields that can be sampled at points.

use crate::poly::{FloatPoly, Polynomial};

pub trait ScalarField: Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
}

impl ScalarField for FloatPoly {
    fn dim(&self) -> usize {
        FloatPoly::dim(self)
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x)
    }
}

impl ScalarField for Polynomial {
    fn dim(&self) -> usize {
        Polynomial::dim(self)
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.evaluate_f64(x).expect("point dimension matches")
    }
}
