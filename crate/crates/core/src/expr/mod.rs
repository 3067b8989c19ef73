//! Scalar expression DAG over variables and expectation-value handles.
//!
//! Nodes are reference counted and immutable. Smart constructors fold
//! constants and drop neutral elements so repeated differentiation stays
//! small; differentiation memoizes on node identity, which keeps shared
//! subterms shared in the derivative.

mod parse;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

pub use parse::parse_expr;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("no value for variable {0}")]
    MissingVariable(Variable),
    #[error("no value for expectation handle {0}")]
    MissingHandle(usize),
    #[error("unresolved derivative of handle {0} with respect to {1}")]
    UnresolvedDerivative(usize, Variable),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{0} has no registered derivative")]
    NotDifferentiable(String),
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
}

/// A named variable; `label` separates otherwise identical names, e.g.
/// across rounds of a sequential solver.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    name: Arc<str>,
    label: Option<Arc<str>>,
}

impl Variable {
    pub fn new(name: impl AsRef<str>) -> Self {
        Variable { name: Arc::from(name.as_ref()), label: None }
    }

    pub fn with_label(name: impl AsRef<str>, label: impl AsRef<str>) -> Self {
        Variable { name: Arc::from(name.as_ref()), label: Some(Arc::from(label.as_ref())) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Same name, new label.
    pub fn relabeled(&self, label: impl AsRef<str>) -> Self {
        Variable::with_label(&*self.name, label)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "{}@{}", self.name, l),
            None => write!(f, "{}", self.name),
        }
    }
}

impl From<&str> for Variable {
    fn from(s: &str) -> Self {
        Variable::new(s)
    }
}

/// Values for variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Assignment(BTreeMap<Variable, f64>);

impl Assignment {
    pub fn new() -> Self {
        Assignment(BTreeMap::new())
    }

    pub fn get(&self, v: &Variable) -> Option<f64> {
        self.0.get(v).copied()
    }

    pub fn insert(&mut self, v: Variable, value: f64) -> Option<f64> {
        self.0.insert(v, value)
    }

    pub fn contains(&self, v: &Variable) -> bool {
        self.0.contains_key(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &f64)> {
        self.0.iter()
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.0.keys()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Copy with `other`'s entries taking precedence.
    pub fn merged(&self, other: &Assignment) -> Assignment {
        let mut out = self.clone();
        out.0.extend(other.0.iter().map(|(k, v)| (k.clone(), *v)));
        out
    }
}

impl<V: Into<Variable>> FromIterator<(V, f64)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (V, f64)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

/// A user-registered unary function with an optional derivative.
pub struct CustomFn {
    name: String,
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    derivative: Option<Arc<CustomFn>>,
}

impl CustomFn {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        CustomFn { name: name.into(), f: Box::new(f), derivative: None }
    }

    pub fn with_derivative(mut self, derivative: CustomFn) -> Self {
        self.derivative = Some(Arc::new(derivative));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for CustomFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomFn({})", self.name)
    }
}

#[derive(Debug, Clone)]
pub enum UnaryFn {
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Sqrt,
    Square,
    Neg,
    /// Not differentiable at 0: its derivative `sign` errors there.
    Abs,
    Sign,
    Custom(Arc<CustomFn>),
}

impl UnaryFn {
    pub fn name(&self) -> &str {
        match self {
            UnaryFn::Exp => "exp",
            UnaryFn::Log => "log",
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Tan => "tan",
            UnaryFn::Sqrt => "sqrt",
            UnaryFn::Square => "square",
            UnaryFn::Neg => "neg",
            UnaryFn::Abs => "abs",
            UnaryFn::Sign => "sign",
            UnaryFn::Custom(c) => &c.name,
        }
    }

    pub fn from_name(name: &str) -> Option<UnaryFn> {
        Some(match name {
            "exp" => UnaryFn::Exp,
            "log" => UnaryFn::Log,
            "sin" => UnaryFn::Sin,
            "cos" => UnaryFn::Cos,
            "tan" => UnaryFn::Tan,
            "sqrt" => UnaryFn::Sqrt,
            "square" => UnaryFn::Square,
            "abs" => UnaryFn::Abs,
            "sign" => UnaryFn::Sign,
            _ => return None,
        })
    }

    pub fn apply(&self, x: f64) -> Result<f64, ExprError> {
        let domain = |what: &str| Err(ExprError::Domain(format!("{what} at {x}")));
        Ok(match self {
            UnaryFn::Exp => x.exp(),
            UnaryFn::Log if x <= 0.0 => return domain("log"),
            UnaryFn::Log => x.ln(),
            UnaryFn::Sin => x.sin(),
            UnaryFn::Cos => x.cos(),
            UnaryFn::Tan => x.tan(),
            UnaryFn::Sqrt if x < 0.0 => return domain("sqrt"),
            UnaryFn::Sqrt => x.sqrt(),
            UnaryFn::Square => x * x,
            UnaryFn::Neg => -x,
            UnaryFn::Abs => x.abs(),
            UnaryFn::Sign if x == 0.0 => return domain("derivative of abs"),
            UnaryFn::Sign => x.signum(),
            UnaryFn::Custom(c) => (c.f)(x),
        })
    }

    /// `f'(u)` as an expression in `u`.
    fn derivative(&self, u: &Expr) -> Result<Expr, ExprError> {
        Ok(match self {
            UnaryFn::Exp => u.exp(),
            UnaryFn::Log => Expr::constant(1.0) / u.clone(),
            UnaryFn::Sin => u.cos(),
            UnaryFn::Cos => -u.sin(),
            UnaryFn::Tan => Expr::constant(1.0) / u.cos().square(),
            UnaryFn::Sqrt => Expr::constant(0.5) / u.sqrt(),
            UnaryFn::Square => Expr::constant(2.0) * u.clone(),
            UnaryFn::Neg => Expr::constant(-1.0),
            UnaryFn::Abs => u.apply(UnaryFn::Sign),
            UnaryFn::Sign => Expr::constant(0.0),
            UnaryFn::Custom(c) => match &c.derivative {
                Some(d) => u.apply(UnaryFn::Custom(d.clone())),
                None => return Err(ExprError::NotDifferentiable(c.name.clone())),
            },
        })
    }
}

impl PartialEq for UnaryFn {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (UnaryFn::Custom(a), UnaryFn::Custom(b)) => Arc::ptr_eq(a, b) || a.name == b.name,
            _ => std::mem::discriminant(self) == std::mem::discriminant(other),
        }
    }
}

impl Eq for UnaryFn {}

impl Hash for UnaryFn {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name().hash(state);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
        }
    }
}

#[derive(Debug)]
pub enum Node {
    Constant(f64),
    Variable(Variable),
    /// Leaf standing for expectation value number `id` of an objective.
    Handle(usize),
    /// `d E_id / d v`, resolved by the objective layer.
    HandleDerivative(usize, Variable),
    Unary(UnaryFn, Expr),
    Binary(BinaryOp, Expr, Expr),
}

/// Shared, immutable expression.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    fn from_node(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn constant(c: f64) -> Self {
        Self::from_node(Node::Constant(c))
    }

    pub fn variable(v: Variable) -> Self {
        Self::from_node(Node::Variable(v))
    }

    pub fn var(name: &str) -> Self {
        Self::variable(Variable::new(name))
    }

    pub fn handle(id: usize) -> Self {
        Self::from_node(Node::Handle(id))
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self.node() {
            Node::Constant(c) => Some(*c),
            _ => None,
        }
    }

    pub fn ptr_eq(&self, other: &Expr) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    fn identity_key(&self) -> *const Node {
        Arc::as_ptr(&self.0)
    }

    pub fn apply(&self, f: UnaryFn) -> Expr {
        if let Some(c) = self.as_constant() {
            if !matches!(f, UnaryFn::Custom(_)) {
                if let Ok(v) = f.apply(c) {
                    return Expr::constant(v);
                }
            }
        }
        if let (UnaryFn::Neg, Node::Unary(UnaryFn::Neg, inner)) = (&f, self.node()) {
            return inner.clone();
        }
        Self::from_node(Node::Unary(f, self.clone()))
    }

    pub fn binary(op: BinaryOp, a: Expr, b: Expr) -> Expr {
        let (ca, cb) = (a.as_constant(), b.as_constant());
        if let (Some(x), Some(y)) = (ca, cb) {
            let folded = match op {
                BinaryOp::Add => Some(x + y),
                BinaryOp::Sub => Some(x - y),
                BinaryOp::Mul => Some(x * y),
                BinaryOp::Div if y != 0.0 => Some(x / y),
                BinaryOp::Pow if x > 0.0 || y.fract() == 0.0 => Some(x.powf(y)),
                _ => None,
            };
            if let Some(v) = folded {
                return Expr::constant(v);
            }
        }
        match op {
            BinaryOp::Add if ca == Some(0.0) => return b,
            BinaryOp::Add | BinaryOp::Sub if cb == Some(0.0) => return a,
            BinaryOp::Sub if ca == Some(0.0) => return -b,
            BinaryOp::Mul if ca == Some(0.0) || cb == Some(0.0) => return Expr::constant(0.0),
            BinaryOp::Mul if ca == Some(1.0) => return b,
            BinaryOp::Mul | BinaryOp::Div if cb == Some(1.0) => return a,
            BinaryOp::Mul if ca == Some(-1.0) => return -b,
            BinaryOp::Mul if cb == Some(-1.0) => return -a,
            BinaryOp::Div if ca == Some(0.0) => return Expr::constant(0.0),
            BinaryOp::Pow if cb == Some(1.0) => return a,
            BinaryOp::Pow if cb == Some(0.0) => return Expr::constant(1.0),
            _ => {}
        }
        Self::from_node(Node::Binary(op, a, b))
    }

    pub fn pow(&self, exponent: impl Into<Expr>) -> Expr {
        Expr::binary(BinaryOp::Pow, self.clone(), exponent.into())
    }

    pub fn exp(&self) -> Expr {
        self.apply(UnaryFn::Exp)
    }

    pub fn log(&self) -> Expr {
        self.apply(UnaryFn::Log)
    }

    pub fn sin(&self) -> Expr {
        self.apply(UnaryFn::Sin)
    }

    pub fn cos(&self) -> Expr {
        self.apply(UnaryFn::Cos)
    }

    pub fn tan(&self) -> Expr {
        self.apply(UnaryFn::Tan)
    }

    pub fn sqrt(&self) -> Expr {
        self.apply(UnaryFn::Sqrt)
    }

    pub fn square(&self) -> Expr {
        self.apply(UnaryFn::Square)
    }

    pub fn abs(&self) -> Expr {
        self.apply(UnaryFn::Abs)
    }

    /// Balanced sum; keeps recursion depth logarithmic for long sums.
    pub fn sum(items: impl IntoIterator<Item = Expr>) -> Expr {
        let items: Vec<Expr> = items.into_iter().collect();
        fn go(xs: &[Expr]) -> Expr {
            match xs.len() {
                0 => Expr::constant(0.0),
                1 => xs[0].clone(),
                n => go(&xs[..n / 2]) + go(&xs[n / 2..]),
            }
        }
        go(&items)
    }

    pub fn evaluate(&self, vars: &Assignment, evals: &[f64]) -> Result<f64, ExprError> {
        self.evaluate_with(&|v| vars.get(v), &|id| evals.get(id).copied())
    }

    /// Evaluate with lookup closures for variables and handles.
    pub fn evaluate_with(
        &self,
        var: &dyn Fn(&Variable) -> Option<f64>,
        handle: &dyn Fn(usize) -> Option<f64>,
    ) -> Result<f64, ExprError> {
        Ok(match self.node() {
            Node::Constant(c) => *c,
            Node::Variable(v) => var(v).ok_or_else(|| ExprError::MissingVariable(v.clone()))?,
            Node::Handle(id) => handle(*id).ok_or(ExprError::MissingHandle(*id))?,
            Node::HandleDerivative(id, v) => return Err(ExprError::UnresolvedDerivative(*id, v.clone())),
            Node::Unary(f, a) => f.apply(a.evaluate_with(var, handle)?)?,
            Node::Binary(op, a, b) => {
                let x = a.evaluate_with(var, handle)?;
                let y = b.evaluate_with(var, handle)?;
                match op {
                    BinaryOp::Add => x + y,
                    BinaryOp::Sub => x - y,
                    BinaryOp::Mul => x * y,
                    BinaryOp::Div if y == 0.0 => return Err(ExprError::Domain(format!("division of {x} by zero"))),
                    BinaryOp::Div => x / y,
                    BinaryOp::Pow if x < 0.0 && y.fract() != 0.0 => {
                        return Err(ExprError::Domain(format!("{x} to non-integer power {y}")))
                    }
                    BinaryOp::Pow if x == 0.0 && y < 0.0 => {
                        return Err(ExprError::Domain(format!("zero to negative power {y}")))
                    }
                    BinaryOp::Pow => x.powf(y),
                }
            }
        })
    }

    /// Symbolic derivative. Handles differentiate to `HandleDerivative` markers.
    pub fn differentiate(&self, v: &Variable) -> Result<Expr, ExprError> {
        let mut memo = HashMap::new();
        self.diff_memo(v, &mut memo)
    }

    fn diff_memo(&self, v: &Variable, memo: &mut HashMap<*const Node, Expr>) -> Result<Expr, ExprError> {
        if let Some(d) = memo.get(&self.identity_key()) {
            return Ok(d.clone());
        }
        let zero = || Expr::constant(0.0);
        let d = match self.node() {
            Node::Constant(_) => zero(),
            Node::Variable(w) => Expr::constant(if w == v { 1.0 } else { 0.0 }),
            Node::Handle(id) => Self::from_node(Node::HandleDerivative(*id, v.clone())),
            Node::HandleDerivative(id, w) => {
                return Err(ExprError::UnresolvedDerivative(*id, w.clone()));
            }
            Node::Unary(f, a) => {
                let da = a.diff_memo(v, memo)?;
                if da.as_constant() == Some(0.0) {
                    zero()
                } else {
                    f.derivative(a)? * da
                }
            }
            Node::Binary(op, a, b) => {
                let da = a.diff_memo(v, memo)?;
                let db = b.diff_memo(v, memo)?;
                match op {
                    BinaryOp::Add => da + db,
                    BinaryOp::Sub => da - db,
                    BinaryOp::Mul => da * b.clone() + a.clone() * db,
                    BinaryOp::Div => (da * b.clone() - a.clone() * db) / b.square(),
                    BinaryOp::Pow => {
                        let mut out = zero();
                        if da.as_constant() != Some(0.0) {
                            out = b.clone() * a.pow(b.clone() - Expr::constant(1.0)) * da;
                        }
                        if db.as_constant() != Some(0.0) {
                            out = out + self.clone() * a.log() * db;
                        }
                        out
                    }
                }
            }
        };
        memo.insert(self.identity_key(), d.clone());
        Ok(d)
    }

    /// Rebuild bottom-up, replacing leaves through `leaf`. Shared subterms
    /// are rebuilt once.
    pub fn rewrite_leaves(&self, leaf: &mut dyn FnMut(&Node) -> Option<Expr>) -> Expr {
        let mut memo = HashMap::new();
        self.rewrite_memo(leaf, &mut memo)
    }

    fn rewrite_memo(&self, leaf: &mut dyn FnMut(&Node) -> Option<Expr>, memo: &mut HashMap<*const Node, Expr>) -> Expr {
        if let Some(e) = memo.get(&self.identity_key()) {
            return e.clone();
        }
        let out = match self.node() {
            Node::Unary(f, a) => {
                let na = a.rewrite_memo(leaf, memo);
                if na.ptr_eq(a) {
                    self.clone()
                } else {
                    na.apply(f.clone())
                }
            }
            Node::Binary(op, a, b) => {
                let na = a.rewrite_memo(leaf, memo);
                let nb = b.rewrite_memo(leaf, memo);
                if na.ptr_eq(a) && nb.ptr_eq(b) {
                    self.clone()
                } else {
                    Expr::binary(*op, na, nb)
                }
            }
            node => leaf(node).unwrap_or_else(|| self.clone()),
        };
        memo.insert(self.identity_key(), out.clone());
        out
    }

    pub fn map_variables(&self, renaming: &HashMap<Variable, Variable>) -> Expr {
        self.rewrite_leaves(&mut |n| match n {
            Node::Variable(v) => renaming.get(v).map(|w| Expr::variable(w.clone())),
            _ => None,
        })
    }

    /// Replace a variable by an expression.
    pub fn substitute(&self, v: &Variable, replacement: &Expr) -> Expr {
        self.rewrite_leaves(&mut |n| match n {
            Node::Variable(w) if w == v => Some(replacement.clone()),
            _ => None,
        })
    }

    /// Replace every assigned variable by its value.
    pub fn fix_variables(&self, values: &Assignment) -> Expr {
        self.rewrite_leaves(&mut |n| match n {
            Node::Variable(w) => values.get(w).map(Expr::constant),
            _ => None,
        })
    }

    pub fn map_handles(&self, map: &dyn Fn(usize) -> usize) -> Expr {
        self.rewrite_leaves(&mut |n| match n {
            Node::Handle(id) => Some(Expr::handle(map(*id))),
            Node::HandleDerivative(id, v) => Some(Self::from_node(Node::HandleDerivative(map(*id), v.clone()))),
            _ => None,
        })
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.visit(&mut |n| {
            if let Node::Variable(v) = n {
                out.insert(v.clone());
            }
        });
        out
    }

    pub fn handles(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.visit(&mut |n| match n {
            Node::Handle(id) | Node::HandleDerivative(id, _) => {
                out.insert(*id);
            }
            _ => {}
        });
        out
    }

    pub fn depends_on(&self, v: &Variable) -> bool {
        let mut found = false;
        self.visit(&mut |n| {
            if matches!(n, Node::Variable(w) if w == v) {
                found = true;
            }
        });
        found
    }

    /// Visit every distinct node once.
    pub fn visit(&self, f: &mut dyn FnMut(&Node)) {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.identity_key()) {
                continue;
            }
            f(e.node());
            match e.node() {
                Node::Unary(_, a) => stack.push(a.clone()),
                Node::Binary(_, a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                _ => {}
            }
        }
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        match (self.node(), other.node()) {
            (Node::Constant(a), Node::Constant(b)) => a.to_bits() == b.to_bits(),
            (Node::Variable(a), Node::Variable(b)) => a == b,
            (Node::Handle(a), Node::Handle(b)) => a == b,
            (Node::HandleDerivative(a, v), Node::HandleDerivative(b, w)) => a == b && v == w,
            (Node::Unary(f, a), Node::Unary(g, b)) => f == g && a == b,
            (Node::Binary(o, a1, b1), Node::Binary(p, a2, b2)) => o == p && a1 == a2 && b1 == b2,
            _ => false,
        }
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self.node() {
            Node::Constant(c) => {
                0u8.hash(state);
                c.to_bits().hash(state);
            }
            Node::Variable(v) => {
                1u8.hash(state);
                v.hash(state);
            }
            Node::Handle(id) => {
                2u8.hash(state);
                id.hash(state);
            }
            Node::HandleDerivative(id, v) => {
                3u8.hash(state);
                id.hash(state);
                v.hash(state);
            }
            Node::Unary(f, a) => {
                4u8.hash(state);
                f.hash(state);
                a.hash(state);
            }
            Node::Binary(op, a, b) => {
                5u8.hash(state);
                op.hash(state);
                a.hash(state);
                b.hash(state);
            }
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Constant(c) => write!(f, "{c:?}"),
            Node::Variable(v) => write!(f, "{v}"),
            Node::Handle(id) => write!(f, "E{id}"),
            Node::HandleDerivative(id, v) => write!(f, "dE{id}/d{v}"),
            Node::Unary(UnaryFn::Neg, a) => write!(f, "(-{a})"),
            Node::Unary(g, a) => write!(f, "{}({a})", g.name()),
            Node::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

impl From<f64> for Expr {
    fn from(c: f64) -> Self {
        Expr::constant(c)
    }
}

impl From<Variable> for Expr {
    fn from(v: Variable) -> Self {
        Expr::variable(v)
    }
}

impl From<&Variable> for Expr {
    fn from(v: &Variable) -> Self {
        Expr::variable(v.clone())
    }
}

impl From<&str> for Expr {
    fn from(name: &str) -> Self {
        Expr::var(name)
    }
}

impl From<&Expr> for Expr {
    fn from(e: &Expr) -> Self {
        e.clone()
    }
}

macro_rules! binary_ops {
    ($($tr:ident $method:ident $op:ident),*) => {$(
        impl<T: Into<Expr>> $tr<T> for Expr {
            type Output = Expr;
            fn $method(self, rhs: T) -> Expr {
                Expr::binary(BinaryOp::$op, self, rhs.into())
            }
        }
        impl<T: Into<Expr>> $tr<T> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: T) -> Expr {
                Expr::binary(BinaryOp::$op, self.clone(), rhs.into())
            }
        }
        impl $tr<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::binary(BinaryOp::$op, Expr::constant(self), rhs)
            }
        }
    )*};
}

binary_ops!(Add add Add, Sub sub Sub, Mul mul Mul, Div div Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.apply(UnaryFn::Neg)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.apply(UnaryFn::Neg)
    }
}
