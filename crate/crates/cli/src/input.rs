//! From parsed equations to graphs, and from coordinate lists to points.

use num_rational::BigRational;
use num_traits::{One, Zero};

use sphericity_core::hypersurface::{
    complexify, real_vars, theta_vars, ComplexGraph, RealGraph, SurfacePoint, MAX_DIM,
};
use sphericity_core::series::MAX_ORDER;
use sphericity_core::{Error, GaussianRational, Multidegree, TruncatedSeries, Vars};

use crate::expr::{BinOp, Equation, Expr};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    /// `w = Θ(z, conj(z), conj(w))`
    Complex,
    /// `v = ψ(x, y, u)`
    Real,
}

impl Form {
    pub fn name(self) -> &'static str {
        match self {
            Form::Complex => "complex",
            Form::Real => "real",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Input {
    pub form: Form,
    pub n: usize,
    pub graph: ComplexGraph,
}

/// Splits `z12` into (`z`, 12); bare names give index 0.
fn split_name(name: &str) -> (&str, usize) {
    let cut = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (stem, digits) = name.split_at(cut);
    (stem, digits.parse().unwrap_or(0))
}

fn collect_vars(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Var(s) => out.push(s.clone()),
        Expr::Conj(a) | Expr::Neg(a) | Expr::Pow(a, _) => collect_vars(a, out),
        Expr::Bin(_, a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        Expr::Int(_) | Expr::I => {}
    }
}

fn detect(eq: &Equation, dim: Option<usize>) -> Result<(Form, usize), Error> {
    let mut names = Vec::new();
    collect_vars(&eq.lhs, &mut names);
    collect_vars(&eq.rhs, &mut names);
    let mut complex = false;
    let mut real = false;
    let mut n = 1;
    for name in &names {
        let (stem, k) = split_name(name);
        let indexed = name.len() > stem.len();
        if indexed && k == 0 {
            return Err(Error::UnknownVariable(format!("{name} (indices start at 1)")));
        }
        match stem {
            "z" => complex = true,
            "w" if !indexed => complex = true,
            "x" | "y" => real = true,
            "u" | "v" if !indexed => real = true,
            _ => return Err(Error::UnknownVariable(name.clone())),
        }
        n = n.max(k);
    }
    if complex && real {
        return Err(Error::Parse(
            "equation mixes complex (z, w) and real (x, y, u, v) variables".into(),
        ));
    }
    let n = match dim {
        Some(d) if d < n => return Err(Error::Dimension(format!("--dim {d} but the equation uses index {n}"))),
        Some(d) => d,
        None => n,
    };
    if n == 0 || n > MAX_DIM {
        return Err(Error::Dimension(format!("n = {n} is outside 1..={MAX_DIM}")));
    }
    Ok((if real { Form::Real } else { Form::Complex }, n))
}

/// Evaluates expressions to series over a fixed variable list.
struct Evaluator {
    vars: Vars,
    /// User name → variable index.
    names: Vec<(String, usize)>,
    /// Variable permutation realizing `conj`.
    conj_perm: Vars,
    order: u32,
    exact: bool,
}

impl Evaluator {
    fn eval(&self, e: &Expr) -> Result<TruncatedSeries, Error> {
        let k = self.order;
        Ok(match e {
            Expr::Int(v) => TruncatedSeries::constant(
                &self.vars,
                GaussianRational::real(BigRational::from_integer(v.clone())),
                k,
            ),
            Expr::I => TruncatedSeries::constant(&self.vars, GaussianRational::i(), k),
            Expr::Var(name) => {
                let idx = self
                    .names
                    .iter()
                    .find(|(n, _)| n == name)
                    .map(|(_, i)| *i)
                    .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                TruncatedSeries::monomial(&self.vars, Multidegree::unit(idx, 1), GaussianRational::one(), k)
            }
            Expr::Conj(a) => self
                .eval(a)?
                .conj_coeffs()
                .relabel(&self.conj_perm)?
                .embed(&self.vars)?,
            Expr::Neg(a) => self.eval(a)?.neg(),
            Expr::Pow(a, p) => {
                if *p > MAX_ORDER {
                    return Err(Error::OrderTooLarge(*p));
                }
                self.eval(a)?.pow(*p)
            }
            Expr::Bin(op, a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                match op {
                    BinOp::Add => &x + &y,
                    BinOp::Sub => &x - &y,
                    BinOp::Mul => &x * &y,
                    BinOp::Div => {
                        if y.is_zero() {
                            return Err(Error::DivisionByZero);
                        }
                        if y.degree() == Some(0) {
                            x.scale(&y.constant_term().inv()?)
                        } else if self.exact {
                            return Err(Error::Parse(format!(
                                "division by the non-constant `{b}` is not polynomial; use --jet for a series input"
                            )));
                        } else {
                            &x * &y.invert()?
                        }
                    }
                }
            }
        })
    }
}

/// Removes the monomial `var` (coefficient 1) from `f = var − rest`, returning `rest`.
fn solved_for(f: &TruncatedSeries, var: usize, label: &str) -> Result<TruncatedSeries, Error> {
    let unit = Multidegree::unit(var, 1);
    if f.terms().any(|(m, _)| m.exponent(var) > 0 && *m != unit) || !f.coeff(&unit).is_one() {
        return Err(Error::Parse(format!(
            "the equation must have the form `{label} = …` with `{label}` absent from the right-hand side"
        )));
    }
    let var_term = TruncatedSeries::monomial(f.vars(), unit, GaussianRational::one(), f.order());
    Ok(&var_term - f)
}

/// Builds the graph of a defining equation. In exact mode the input is a
/// polynomial; with `jet` it is a jet known through `order`.
pub fn build_graph(eq: &Equation, dim: Option<usize>, order: u32, jet: bool) -> Result<Input, Error> {
    let (form, n) = detect(eq, dim)?;
    let exact = !jet;
    let eval_order = if exact { MAX_ORDER } else { order };
    match form {
        Form::Complex => {
            let tv = theta_vars(n);
            let mut names: Vec<String> = tv.names().to_vec();
            names.push("w".into());
            let vars = Vars::try_new(names.clone())?;
            let mut perm: Vec<String> = names[n..2 * n].to_vec();
            perm.extend(names[..n].iter().cloned());
            perm.push("w".into());
            perm.push(names[2 * n].clone());
            let mut user = Vec::new();
            for k in 0..n {
                user.push((format!("z{}", k + 1), k));
                if n == 1 {
                    user.push(("z".into(), 0));
                }
            }
            user.push(("w".into(), 2 * n + 1));
            let ev = Evaluator {
                vars: vars.clone(),
                names: user,
                conj_perm: Vars::try_new(perm)?,
                order: eval_order,
                exact,
            };
            let f = &ev.eval(&eq.lhs)? - &ev.eval(&eq.rhs)?;
            let theta = solved_for(&f, 2 * n + 1, "w")?.embed(&tv)?;
            let theta = finish_order(theta, order, exact)?;
            let graph = ComplexGraph::new(n, theta, exact)?;
            check_reality(&graph)?;
            Ok(Input { form, n, graph })
        }
        Form::Real => {
            let rv = real_vars(n);
            let mut names: Vec<String> = rv.names().to_vec();
            names.push("v".into());
            let vars = Vars::try_new(names.clone())?;
            let mut user = Vec::new();
            for k in 0..n {
                user.push((format!("x{}", k + 1), k));
                user.push((format!("y{}", k + 1), n + k));
                if n == 1 {
                    user.push(("x".into(), 0));
                    user.push(("y".into(), 1));
                }
            }
            user.push(("u".into(), 2 * n));
            user.push(("v".into(), 2 * n + 1));
            let ev = Evaluator {
                vars: vars.clone(),
                names: user,
                conj_perm: vars.clone(),
                order: eval_order,
                exact,
            };
            let f = &ev.eval(&eq.lhs)? - &ev.eval(&eq.rhs)?;
            let psi = solved_for(&f, 2 * n + 1, "v")?.embed(&rv)?;
            let psi = finish_order(psi, order, exact)?;
            let graph = complexify(&RealGraph::new(n, psi, exact)?)?;
            Ok(Input { form, n, graph })
        }
    }
}

/// Exact polynomials keep every term (order raised to the degree if
/// needed); jets are cut at `order`.
fn finish_order(s: TruncatedSeries, order: u32, exact: bool) -> Result<TruncatedSeries, Error> {
    if exact {
        let d = s.degree().unwrap_or(0);
        Ok(s.truncate(d.max(order)))
    } else {
        Ok(s.truncate(order))
    }
}

/// Conjugating the equation must give back the same hypersurface.
fn check_reality(g: &ComplexGraph) -> Result<(), Error> {
    let probe = if g.is_exact() {
        let d = g.theta().degree().unwrap_or(1);
        g.with_order((d * d).max(g.order()).min(MAX_ORDER))
    } else {
        g.clone()
    };
    let residual = probe.reality_residual()?;
    if let Some((m, c)) = residual.leading_low_term() {
        let names = probe.vars();
        let mono: Vec<String> = (0..names.len())
            .filter(|&v| m.exponent(v) > 0)
            .map(|v| format!("{}^{}", names.name(v), m.exponent(v)))
            .collect();
        return Err(Error::NotReal(format!(
            "conj(Θ)(conj(z), z, Θ) − conj(w) has coefficient {c} at {}",
            if mono.is_empty() {
                "1".to_string()
            } else {
                mono.join("*")
            }
        )));
    }
    Ok(())
}

/// Evaluates a constant coordinate expression exactly.
pub fn constant_value(e: &Expr) -> Result<GaussianRational, Error> {
    let vars = Vars::try_new(Vec::<String>::new())?;
    let ev = Evaluator {
        vars: vars.clone(),
        names: Vec::new(),
        conj_perm: vars,
        order: 0,
        exact: true,
    };
    Ok(ev.eval(e)?.constant_term())
}

/// `n + 1` coordinates `z₁, …, z_n, w`, checked to lie on the graph.
pub fn build_point(coords: &[Expr], g: &ComplexGraph) -> Result<SurfacePoint, Error> {
    let n = g.n();
    if coords.len() != n + 1 {
        return Err(Error::Dimension(format!(
            "a point needs {} coordinates (z1, …, z{n}, w), got {}",
            n + 1,
            coords.len()
        )));
    }
    let values = coords.iter().map(constant_value).collect::<Result<Vec<_>, _>>()?;
    let (z, w) = values.split_at(n);
    if values.iter().all(Zero::is_zero) {
        return Ok(SurfacePoint::origin(n));
    }
    SurfacePoint::new(g, z.to_vec(), w[0].clone())
}

/// Parses a rational such as `1/2` or `-3` (grid steps).
pub fn rational(e: &Expr) -> Result<BigRational, Error> {
    let v = constant_value(e)?;
    if !v.im().is_zero() {
        return Err(Error::Parse(format!("`{e}` is not real")));
    }
    Ok(v.re().clone())
}
