//! Small polynomial expression language for smooth maps given in JSON.
//!
//! ```json
//! {"add": [{"var": 0}, {"const": "-1"}]}
//! {"mul": [{"const": "1/2"}, {"pow": [{"var": 1}, 2]}]}
//! ```

use num::{ToPrimitive, Zero};
use polyvar_geometry::scalar::serde_scalar;
use polyvar_geometry::Scalar;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expr {
    Const(#[serde(with = "serde_scalar")] Scalar),
    Var(usize),
    Add(Vec<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Vec<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn constant(c: Scalar) -> Expr {
        Expr::Const(c)
    }

    fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    /// Largest variable index plus one.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().map(Expr::arity).max().unwrap_or(0),
            Expr::Sub(a, b) => a.arity().max(b.arity()),
            Expr::Neg(a) | Expr::Pow(a, _) => a.arity(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => c.to_f64().unwrap_or(f64::NAN),
            Expr::Var(i) => x[*i],
            Expr::Add(xs) => xs.iter().map(|e| e.eval(x)).sum(),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(xs) => xs.iter().map(|e| e.eval(x)).product(),
            Expr::Neg(a) => -a.eval(x),
            Expr::Pow(a, k) => a.eval(x).powi(*k as i32),
        }
    }

    /// Symbolic partial derivative in variable `j`.
    pub fn diff(&self, j: usize) -> Expr {
        let zero = || Expr::Const(Scalar::zero());
        let d = match self {
            Expr::Const(_) => zero(),
            Expr::Var(i) => Expr::Const(Scalar::from_integer((*i == j).into())),
            Expr::Add(xs) => Expr::Add(xs.iter().map(|e| e.diff(j)).collect()),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.diff(j)), Box::new(b.diff(j))),
            Expr::Neg(a) => Expr::Neg(Box::new(a.diff(j))),
            Expr::Mul(xs) => {
                let mut terms = Vec::new();
                for k in 0..xs.len() {
                    let dk = xs[k].diff(j);
                    if dk.is_zero() {
                        continue;
                    }
                    let mut factors: Vec<Expr> = xs.clone();
                    factors[k] = dk;
                    terms.push(Expr::Mul(factors));
                }
                Expr::Add(terms)
            }
            Expr::Pow(a, k) => match k {
                0 => zero(),
                1 => a.diff(j),
                _ => Expr::Mul(vec![
                    Expr::Const(Scalar::from_integer((*k as i64).into())),
                    Expr::Pow(a.clone(), k - 1),
                    a.diff(j),
                ]),
            },
        };
        d.simplify()
    }

    fn simplify(self) -> Expr {
        match self {
            Expr::Add(xs) => {
                let xs: Vec<Expr> = xs.into_iter().map(Expr::simplify).filter(|e| !e.is_zero()).collect();
                match xs.len() {
                    0 => Expr::Const(Scalar::zero()),
                    1 => xs.into_iter().next().unwrap(),
                    _ => Expr::Add(xs),
                }
            }
            Expr::Mul(xs) => {
                let xs: Vec<Expr> = xs.into_iter().map(Expr::simplify).collect();
                if xs.iter().any(Expr::is_zero) {
                    Expr::Const(Scalar::zero())
                } else if xs.len() == 1 {
                    xs.into_iter().next().unwrap()
                } else {
                    Expr::Mul(xs)
                }
            }
            Expr::Neg(a) => match a.simplify() {
                Expr::Const(c) => Expr::Const(-c),
                a => Expr::Neg(Box::new(a)),
            },
            Expr::Sub(a, b) => {
                let (a, b) = (a.simplify(), b.simplify());
                if b.is_zero() {
                    a
                } else if a.is_zero() {
                    Expr::Neg(Box::new(b)).simplify()
                } else {
                    Expr::Sub(Box::new(a), Box::new(b))
                }
            }
            other => other,
        }
    }
}

/// A map `R^n -> R^k` given by one expression per component.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprMap {
    pub n: usize,
    pub components: Vec<Expr>,
    jacobian: Vec<Vec<Expr>>,
}

impl ExprMap {
    pub fn new(n: usize, components: Vec<Expr>) -> Result<Self> {
        if let Some(e) = components.iter().find(|e| e.arity() > n) {
            return Err(Error::Parse(format!("expression uses variable {} in dimension {n}", e.arity() - 1)));
        }
        let jacobian = components.iter().map(|e| (0..n).map(|j| e.diff(j)).collect()).collect();
        Ok(ExprMap { n, components, jacobian })
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|e| e.eval(x)).collect()
    }

    /// Row `i` is the gradient of component `i`.
    pub fn jacobian(&self, x: &[f64]) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.components.len(), self.n, |i, j| self.jacobian[i][j].eval(x))
    }

    pub fn jacobian_exprs(&self) -> &[Vec<Expr>] {
        &self.jacobian
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use polyvar_geometry::frac;

    #[test]
    fn parses_and_differentiates() {
        let e: Expr = serde_json::from_str(r#"{"add":[{"mul":[{"const":"1/2"},{"pow":[{"var":0},2]}]},{"mul":[{"var":0},{"var":1}]},{"const":-3}]}"#).unwrap();
        assert_eq!(e.arity(), 2);
        assert!((e.eval(&[2.0, 5.0]) - (2.0 + 10.0 - 3.0)).abs() < 1e-12);
        assert!((e.diff(0).eval(&[2.0, 5.0]) - 7.0).abs() < 1e-12);
        assert!((e.diff(1).eval(&[2.0, 5.0]) - 2.0).abs() < 1e-12);
        assert_eq!(e.diff(0).diff(0).diff(0), Expr::Const(frac(0, 1)));
    }

    #[test]
    fn map_jacobian() {
        let f = ExprMap::new(1, vec![Expr::Sub(Box::new(Expr::Var(0)), Box::new(Expr::Const(frac(1, 1))))]).unwrap();
        assert_eq!(f.eval(&[3.0]), vec![2.0]);
        assert_eq!(f.jacobian(&[3.0])[(0, 0)], 1.0);
        assert!(ExprMap::new(1, vec![Expr::Var(1)]).is_err());
    }
}
