use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::funcfield::{check_prime, parse_ratfunc, RatFunc};
use crate::linalg::Matrix;

/// A representation of a finite abelian group given by commuting generator matrices.
///
/// Generators have order `p` unless an explicit order is supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    p: u32,
    pub generators: Vec<String>,
    pub action: Vec<Matrix>,
    pub orders: Vec<u64>,
}

impl GModule {
    pub fn new(p: u32, generators: Vec<String>, action: Vec<Matrix>) -> Result<GModule> {
        let orders = vec![p as u64; generators.len()];
        GModule::with_orders(p, generators, action, orders)
    }

    pub fn with_orders(p: u32, generators: Vec<String>, action: Vec<Matrix>, orders: Vec<u64>) -> Result<GModule> {
        check_prime(p)?;
        if generators.len() != action.len() || orders.len() != action.len() {
            return Err(Error::input("generator names, actions and orders differ in length"));
        }
        if orders.contains(&0) {
            return Err(Error::input("generator order must be positive"));
        }
        let m = GModule { p, generators, action, orders };
        m.check()?;
        Ok(m)
    }

    /// `dim`-dimensional module where every generator acts trivially.
    pub fn trivial(p: u32, dim: usize, ngens: usize) -> GModule {
        let names = (1..=ngens).map(|i| format!("g{i}")).collect();
        GModule::new(p, names, vec![Matrix::identity(p, dim); ngens]).expect("identity action is valid")
    }

    /// The regular module `k[C_p^n]`, basis indexed by exponent vectors in base `p`.
    pub fn regular(p: u32, n: usize) -> GModule {
        let dim = (p as usize).pow(n as u32);
        let action = (0..n)
            .map(|m| {
                let stride = (p as usize).pow(m as u32);
                Matrix::from_fn(p, dim, dim, |r, c| {
                    let digit = (c / stride) % p as usize;
                    let image = c - digit * stride + ((digit + 1) % p as usize) * stride;
                    RatFunc::constant((r == image) as i64, p)
                })
            })
            .collect();
        let names = (1..=n).map(|i| format!("g{i}")).collect();
        GModule::new(p, names, action).expect("regular action is valid")
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.action.first().map_or(0, |m| m.rows())
    }

    pub fn group_order(&self) -> u128 {
        self.orders.iter().map(|&o| o as u128).product()
    }

    /// Generators of the Sylow p-subgroup with their orders.
    pub fn sylow(&self) -> Vec<(Matrix, u64)> {
        let p = self.p as u64;
        self.action
            .iter()
            .zip(&self.orders)
            .filter_map(|(g, &o)| {
                let mut q = 1;
                let mut rest = o;
                while rest % p == 0 {
                    rest /= p;
                    q *= p;
                }
                (q > 1).then(|| (g.pow(rest), q))
            })
            .collect()
    }

    /// Verifies `g^order = I` and pairwise commutation, reporting the first violation.
    pub fn check(&self) -> Result<()> {
        let n = self.dim();
        for (name, g) in self.generators.iter().zip(&self.action) {
            if g.rows() != n || g.cols() != n {
                return Err(Error::input(format!("action of {name} is not {n}x{n}")));
            }
        }
        for ((name, g), &o) in self.generators.iter().zip(&self.action).zip(&self.orders) {
            if !g.pow(o).is_identity() {
                return Err(Error::input(format!("action of {name} does not satisfy {name}^{o} = 1")));
            }
        }
        for a in 0..self.action.len() {
            for b in a + 1..self.action.len() {
                if &self.action[a] * &self.action[b] != &self.action[b] * &self.action[a] {
                    let (x, y) = (&self.generators[a], &self.generators[b]);
                    return Err(Error::input(format!("actions of {x} and {y} do not commute")));
                }
            }
        }
        Ok(())
    }

    /// `P^-1 g P` for every generator.
    pub fn conjugate(&self, pm: &Matrix) -> Result<GModule> {
        let inv = pm.inverse().ok_or_else(|| Error::pre("change of basis is singular"))?;
        let action = self.action.iter().map(|g| &(&inv * g) * pm).collect();
        GModule::with_orders(self.p, self.generators.clone(), action, self.orders.clone())
    }

    /// The outer tensor product over `G x G'`, with generators `g (x) 1` then `1 (x) g'`.
    pub fn tensor(&self, other: &GModule) -> GModule {
        let (i1, i2) = (Matrix::identity(self.p, self.dim()), Matrix::identity(self.p, other.dim()));
        let mut names = Vec::new();
        let mut action = Vec::new();
        for (n, g) in self.generators.iter().zip(&self.action) {
            names.push(format!("{n}_1"));
            action.push(g.kron(&i2));
        }
        for (n, g) in other.generators.iter().zip(&other.action) {
            names.push(format!("{n}_2"));
            action.push(i1.kron(g));
        }
        let orders = self.orders.iter().chain(&other.orders).copied().collect();
        GModule { p: self.p, generators: names, action, orders }
    }

    pub fn from_json(v: &Value) -> Result<GModule> {
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| Error::input("module: missing integer field \"p\""))? as u32;
        check_prime(p)?;
        let names: Vec<String> = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("module: missing array field \"generators\""))?
            .iter()
            .map(|g| g.as_str().map(String::from).ok_or_else(|| Error::input("module: generator names must be strings")))
            .collect::<Result<_>>()?;
        let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| Error::input("module: missing integer field \"dim\""))? as usize;
        let action_obj =
            v.get("action").and_then(Value::as_object).ok_or_else(|| Error::input("module: missing object field \"action\""))?;
        let mut action = Vec::new();
        for name in &names {
            let m = action_obj.get(name).ok_or_else(|| Error::input(format!("module: no action for generator {name}")))?;
            let m = parse_matrix(m, p).map_err(|e| Error::input(format!("module: action of {name}: {}", strip(e))))?;
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::input(format!("module: action of {name} is not {dim}x{dim}")));
            }
            action.push(m);
        }
        let orders = match v.get("orders") {
            None => vec![p as u64; names.len()],
            Some(o) => {
                let o = o.as_object().ok_or_else(|| Error::input("module: \"orders\" must be an object"))?;
                names
                    .iter()
                    .map(|n| match o.get(n) {
                        None => Ok(p as u64),
                        Some(x) => x.as_u64().ok_or_else(|| Error::input(format!("module: order of {n} must be an integer"))),
                    })
                    .collect::<Result<_>>()?
            }
        };
        GModule::with_orders(p, names, action, orders)
    }

    pub fn to_json(&self) -> Value {
        let mut action = Map::new();
        for (n, g) in self.generators.iter().zip(&self.action) {
            action.insert(n.clone(), json!(g.to_strings()));
        }
        let mut v = json!({ "p": self.p, "generators": self.generators, "dim": self.dim(), "action": action });
        if self.orders.iter().any(|&o| o != self.p as u64) {
            let orders: Map<String, Value> = self.generators.iter().zip(&self.orders).map(|(n, o)| (n.clone(), json!(o))).collect();
            v["orders"] = Value::Object(orders);
        }
        v
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::Input(s) => s,
        other => other.to_string(),
    }
}

/// A matrix given as a row-major array of rational-function strings (integers are accepted too).
pub fn parse_matrix(v: &Value, p: u32) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| Error::input("matrix must be an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| Error::input(format!("row {i} is not an array")))?;
        let mut r = Vec::with_capacity(row.len());
        for (j, x) in row.iter().enumerate() {
            let s = match x {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(Error::input(format!("entry ({i}, {j}) is not a string"))),
            };
            r.push(parse_ratfunc(&s, p).map_err(|e| Error::input(format!("entry ({i}, {j}): {}", strip(e))))?);
        }
        out.push(r);
    }
    let width = out.first().map_or(0, |r| r.len());
    if out.iter().any(|r| r.len() != width) {
        return Err(Error::input("matrix rows have different lengths"));
    }
    Ok(Matrix::from_rows(p, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_and_trivial_are_valid() {
        let r = GModule::regular(3, 2);
        assert_eq!(r.dim(), 9);
        assert_eq!(r.group_order(), 9);
        r.check().unwrap();
        GModule::trivial(3, 2, 3).check().unwrap();
    }

    #[test]
    fn wrong_order_is_rejected() {
        let swap = Matrix::from_ints(3, &[&[0, 1], &[1, 0]]);
        let err = GModule::new(3, vec!["s".into()], vec![swap.clone()]).unwrap_err();
        assert!(err.to_string().contains("s^3"));
        assert!(GModule::with_orders(3, vec!["s".into()], vec![swap], vec![2]).is_ok());
    }

    #[test]
    fn noncommuting_is_rejected() {
        let a = Matrix::from_ints(3, &[&[1, 1], &[0, 1]]);
        let b = Matrix::from_ints(3, &[&[1, 0], &[1, 1]]);
        let err = GModule::new(3, vec!["a".into(), "b".into()], vec![a, b]).unwrap_err();
        assert!(err.to_string().contains("do not commute"));
    }

    #[test]
    fn json_roundtrip() {
        let m = GModule::regular(3, 1);
        let back = GModule::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        let bad = json!({"p": 3, "generators": ["g"], "dim": 1, "action": {"g": [["t^"]]}});
        assert!(matches!(GModule::from_json(&bad), Err(Error::Input(_))));
    }
}
