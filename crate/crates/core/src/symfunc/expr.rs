use std::fmt;

/// Closed-form real function of one variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedExpr {
    Num(f64),
    Var,
    Pi,
    Add(Box<ClosedExpr>, Box<ClosedExpr>),
    Sub(Box<ClosedExpr>, Box<ClosedExpr>),
    Mul(Box<ClosedExpr>, Box<ClosedExpr>),
    Div(Box<ClosedExpr>, Box<ClosedExpr>),
    Pow(Box<ClosedExpr>, u32),
    Neg(Box<ClosedExpr>),
    Sin(Box<ClosedExpr>),
    Cos(Box<ClosedExpr>),
    Exp(Box<ClosedExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    UnknownIdentifier(String),
    BadNumber(String),
    TooDeep,
}

/// Parse failure at a 1-based character column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub column: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let col = self.column;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => {
                write!(f, "unexpected character {c:?} at column {col}")
            }
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected {t} at column {col}"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input at column {col}"),
            ParseErrorKind::UnknownIdentifier(id) => {
                write!(f, "unknown identifier '{id}' at column {col}")
            }
            ParseErrorKind::BadNumber(s) => write!(f, "bad number {s:?} at column {col}"),
            ParseErrorKind::TooDeep => write!(f, "expression nested too deeply at column {col}"),
        }
    }
}

impl std::error::Error for ParseError {}

const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Op(c) => format!("'{c}'"),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let s: String = chars[start..i].iter().collect();
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => out.push((Tok::Num(v), col)),
                _ => {
                    return Err(ParseError {
                        kind: ParseErrorKind::BadNumber(s),
                        column: col,
                    })
                }
            }
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(ParseError {
                kind: ParseErrorKind::UnexpectedChar(c),
                column: col,
            });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self) -> ParseError {
        let kind = match self.peek() {
            Tok::End => ParseErrorKind::UnexpectedEnd,
            t => ParseErrorKind::UnexpectedToken(t.describe()),
        };
        ParseError {
            kind,
            column: self.col(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == &Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError {
                kind: ParseErrorKind::TooDeep,
                column: self.col(),
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<ClosedExpr, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = ClosedExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = ClosedExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ClosedExpr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = ClosedExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Op('/') => {
                    self.bump();
                    lhs = ClosedExpr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ClosedExpr, ParseError> {
        if self.peek() == &Tok::Op('-') {
            self.bump();
            let literal = matches!(self.peek(), Tok::Num(_));
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(match inner {
                ClosedExpr::Num(v) if literal => ClosedExpr::Num(-v),
                other => ClosedExpr::Neg(Box::new(other)),
            });
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<ClosedExpr, ParseError> {
        let base = self.base()?;
        if self.peek() == &Tok::Op('^') {
            self.bump();
            let col = self.col();
            return match self.bump().0 {
                Tok::Num(v) if v.fract() == 0.0 && (0.0..=u32::MAX as f64).contains(&v) => {
                    Ok(ClosedExpr::Pow(Box::new(base), v as u32))
                }
                Tok::Num(v) => Err(ParseError {
                    kind: ParseErrorKind::BadNumber(format!("{v} is not a non-negative integer exponent")),
                    column: col,
                }),
                Tok::End => Err(ParseError {
                    kind: ParseErrorKind::UnexpectedEnd,
                    column: col,
                }),
                t => Err(ParseError {
                    kind: ParseErrorKind::UnexpectedToken(t.describe()),
                    column: col,
                }),
            };
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<ClosedExpr, ParseError> {
        let col = self.col();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(ClosedExpr::Num(v))
            }
            Tok::Op('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(id) => {
                self.bump();
                match id.as_str() {
                    "x" => Ok(ClosedExpr::Var),
                    "pi" => Ok(ClosedExpr::Pi),
                    "sin" | "cos" | "exp" => {
                        self.expect('(')?;
                        let arg = Box::new(self.expr()?);
                        self.expect(')')?;
                        Ok(match id.as_str() {
                            "sin" => ClosedExpr::Sin(arg),
                            "cos" => ClosedExpr::Cos(arg),
                            _ => ClosedExpr::Exp(arg),
                        })
                    }
                    _ => Err(ParseError {
                        kind: ParseErrorKind::UnknownIdentifier(id),
                        column: col,
                    }),
                }
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses `expr := term (('+'|'-') term)*`, `term := unary (('*'|'/') unary)*`,
/// `unary := '-' unary | factor`, `factor := base ('^' integer)?`,
/// `base := number | x | pi | (sin|cos|exp) '(' expr ')' | '(' expr ')'`.
pub fn parse_expr(text: &str) -> Result<ClosedExpr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return Err(p.unexpected());
    }
    Ok(e)
}

fn is_num(e: &ClosedExpr, v: f64) -> bool {
    matches!(e, ClosedExpr::Num(c) if *c == v)
}

fn finite(v: f64) -> Option<ClosedExpr> {
    v.is_finite().then_some(ClosedExpr::Num(v))
}

// Simplifying constructors used by the derivative.

fn add(a: ClosedExpr, b: ClosedExpr) -> ClosedExpr {
    match (&a, &b) {
        _ if is_num(&a, 0.0) => b,
        _ if is_num(&b, 0.0) => a,
        (ClosedExpr::Num(x), ClosedExpr::Num(y)) => {
            finite(x + y).unwrap_or(ClosedExpr::Add(Box::new(a), Box::new(b)))
        }
        (_, ClosedExpr::Neg(inner)) => sub(a, (**inner).clone()),
        _ => ClosedExpr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: ClosedExpr, b: ClosedExpr) -> ClosedExpr {
    match (&a, &b) {
        _ if is_num(&b, 0.0) => a,
        _ if is_num(&a, 0.0) => neg(b),
        (ClosedExpr::Num(x), ClosedExpr::Num(y)) => {
            finite(x - y).unwrap_or(ClosedExpr::Sub(Box::new(a), Box::new(b)))
        }
        _ => ClosedExpr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: ClosedExpr, b: ClosedExpr) -> ClosedExpr {
    match (&a, &b) {
        _ if is_num(&a, 0.0) || is_num(&b, 0.0) => ClosedExpr::Num(0.0),
        _ if is_num(&a, 1.0) => b,
        _ if is_num(&b, 1.0) => a,
        _ if is_num(&a, -1.0) => neg(b),
        _ if is_num(&b, -1.0) => neg(a),
        (ClosedExpr::Num(x), ClosedExpr::Num(y)) => {
            finite(x * y).unwrap_or(ClosedExpr::Mul(Box::new(a), Box::new(b)))
        }
        (ClosedExpr::Neg(x), _) => neg(mul((**x).clone(), b)),
        (_, ClosedExpr::Neg(y)) => neg(mul(a, (**y).clone())),
        // keep numeric factors in front
        (_, ClosedExpr::Num(_)) => ClosedExpr::Mul(Box::new(b), Box::new(a)),
        _ => ClosedExpr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: ClosedExpr, b: ClosedExpr) -> ClosedExpr {
    if is_num(&a, 0.0) {
        return ClosedExpr::Num(0.0);
    }
    if is_num(&b, 1.0) {
        return a;
    }
    ClosedExpr::Div(Box::new(a), Box::new(b))
}

fn pow(a: ClosedExpr, n: u32) -> ClosedExpr {
    match (&a, n) {
        (_, 0) => ClosedExpr::Num(1.0),
        (_, 1) => a,
        (ClosedExpr::Num(x), _) => {
            finite(x.powi(n as i32)).unwrap_or(ClosedExpr::Pow(Box::new(a), n))
        }
        _ => ClosedExpr::Pow(Box::new(a), n),
    }
}

fn neg(a: ClosedExpr) -> ClosedExpr {
    match a {
        ClosedExpr::Num(v) => ClosedExpr::Num(-v),
        ClosedExpr::Neg(inner) => *inner,
        other => ClosedExpr::Neg(Box::new(other)),
    }
}

impl ClosedExpr {
    pub fn eval(&self, x: f64) -> f64 {
        use ClosedExpr::*;
        match self {
            Num(v) => *v,
            Var => x,
            Pi => std::f64::consts::PI,
            Add(a, b) => a.eval(x) + b.eval(x),
            Sub(a, b) => a.eval(x) - b.eval(x),
            Mul(a, b) => a.eval(x) * b.eval(x),
            Div(a, b) => a.eval(x) / b.eval(x),
            Pow(a, n) => a.eval(x).powi(*n as i32),
            Neg(a) => -a.eval(x),
            Sin(a) => a.eval(x).sin(),
            Cos(a) => a.eval(x).cos(),
            Exp(a) => a.eval(x).exp(),
        }
    }

    /// First derivative in `x`, lightly simplified.
    pub fn derivative(&self) -> ClosedExpr {
        use ClosedExpr::*;
        match self {
            Num(_) | Pi => Num(0.0),
            Var => Num(1.0),
            Add(a, b) => add(a.derivative(), b.derivative()),
            Sub(a, b) => sub(a.derivative(), b.derivative()),
            Mul(a, b) => add(
                mul(a.derivative(), (**b).clone()),
                mul((**a).clone(), b.derivative()),
            ),
            Div(a, b) => div(
                sub(
                    mul(a.derivative(), (**b).clone()),
                    mul((**a).clone(), b.derivative()),
                ),
                pow((**b).clone(), 2),
            ),
            Pow(a, n) => match n {
                0 => Num(0.0),
                n => mul(
                    mul(Num(*n as f64), pow((**a).clone(), n - 1)),
                    a.derivative(),
                ),
            },
            Neg(a) => neg(a.derivative()),
            Sin(a) => mul(a.derivative(), Cos(a.clone())),
            Cos(a) => neg(mul(a.derivative(), Sin(a.clone()))),
            Exp(a) => mul(a.derivative(), Exp(a.clone())),
        }
    }

    fn precedence(&self) -> u8 {
        use ClosedExpr::*;
        match self {
            Add(..) | Sub(..) => 1,
            Mul(..) | Div(..) => 2,
            Neg(_) => 3,
            Num(v) if v.is_sign_negative() => 3,
            Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// `order`-fold derivative; order zero returns a copy.
pub fn expr_derivative(e: &ClosedExpr, order: u32) -> ClosedExpr {
    (0..order).fold(e.clone(), |acc, _| acc.derivative())
}

impl fmt::Display for ClosedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ClosedExpr::*;
        match self {
            Num(v) => write!(f, "{v}"),
            Var => f.write_str("x"),
            Pi => f.write_str("pi"),
            Add(a, b) | Sub(a, b) => {
                a.write_child(f, 1)?;
                f.write_str(if matches!(self, Add(..)) { " + " } else { " - " })?;
                b.write_child(f, 2)
            }
            Mul(a, b) | Div(a, b) => {
                a.write_child(f, 2)?;
                f.write_str(if matches!(self, Mul(..)) { "*" } else { "/" })?;
                b.write_child(f, 3)
            }
            Pow(a, n) => {
                a.write_child(f, 5)?;
                write!(f, "^{n}")
            }
            Neg(a) => {
                f.write_str("-")?;
                a.write_child(f, 3)
            }
            Sin(a) => write!(f, "sin({a})"),
            Cos(a) => write!(f, "cos({a})"),
            Exp(a) => write!(f, "exp({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use ClosedExpr::*;

    fn b(e: ClosedExpr) -> Box<ClosedExpr> {
        Box::new(e)
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(parse_expr("cos(pi*x)").unwrap(), Cos(b(Mul(b(Pi), b(Var)))));
        assert_eq!(parse_expr("1+x^2").unwrap(), Add(b(Num(1.0)), b(Pow(b(Var), 2))));
        assert_eq!(parse_expr("-2").unwrap(), Num(-2.0));
        assert_eq!(parse_expr("-x^2").unwrap(), Neg(b(Pow(b(Var), 2))));
    }

    #[test]
    fn unknown_identifier_position() {
        let err = parse_expr("cos(q*x)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("q".into()));
        assert_eq!(err.column, 5);
        assert_eq!(err.to_string(), "unknown identifier 'q' at column 5");
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "1+", "(x", "x)", "x^y", "x^1.5", "sin x", "2 $ 3", "1e999", "x x"] {
            assert!(parse_expr(bad).is_err(), "{bad:?}");
        }
        let deep = "(".repeat(10_000) + "x" + &")".repeat(10_000);
        assert_eq!(parse_expr(&deep).unwrap_err().kind, ParseErrorKind::TooDeep);
    }

    #[test]
    fn derivative_examples() {
        let e = parse_expr("cos(pi*x)").unwrap();
        assert_eq!(expr_derivative(&e, 1), Neg(b(Mul(b(Pi), b(Sin(b(Mul(b(Pi), b(Var)))))))));
        assert_eq!(expr_derivative(&e, 1).to_string(), "-(pi*sin(pi*x))");
        assert_eq!(expr_derivative(&e, 0), e);
        assert_eq!(expr_derivative(&parse_expr("x^2").unwrap(), 3), Num(0.0));
    }

    #[test]
    fn printer_examples() {
        for (src, out) in [
            ("1 + x^2", "1 + x^2"),
            ("(1+x)^2", "(1 + x)^2"),
            ("(-2)^2", "(-2)^2"),
        ] {
            assert_eq!(parse_expr(src).unwrap().to_string(), out);
        }
        assert_eq!(parse_expr("x-(1-x)").unwrap().to_string(), "x - (1 - x)");
        assert_eq!(parse_expr("x/(2*x)").unwrap().to_string(), "x/(2*x)");
    }

    fn arb_expr() -> impl Strategy<Value = ClosedExpr> {
        let leaf = prop_oneof![
            (-4i32..5).prop_map(|v| Num(v as f64 / 2.0)),
            Just(Var),
            Just(Pi),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, c)| Add(b(a), b(c))),
                (inner.clone(), inner.clone()).prop_map(|(a, c)| Sub(b(a), b(c))),
                (inner.clone(), inner.clone()).prop_map(|(a, c)| Mul(b(a), b(c))),
                (inner.clone(), 0u32..4).prop_map(|(a, n)| Pow(b(a), n)),
                inner.clone().prop_map(|a| Neg(b(a))),
                inner.clone().prop_map(|a| Sin(b(a))),
                inner.clone().prop_map(|a| Cos(b(a))),
                inner.prop_map(|a| Exp(b(Mul(b(Num(0.25)), b(a))))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_idempotent(e in arb_expr()) {
            let once = e.to_string();
            let reparsed = parse_expr(&once).unwrap();
            prop_assert_eq!(reparsed.to_string(), once);
            let x = 0.37;
            let (u, v) = (e.eval(x), reparsed.eval(x));
            prop_assert!((u - v).abs() <= 1e-12 * (1.0 + u.abs()) || (u.is_nan() && v.is_nan()));
        }

        #[test]
        fn derivative_matches_central_difference(e in arb_expr(), x in -1.0f64..1.0) {
            let h = 1e-5;
            let fd = (e.eval(x + h) - e.eval(x - h)) / (2.0 * h);
            let exact = e.derivative().eval(x);
            prop_assume!(exact.is_finite() && fd.is_finite() && exact.abs() < 1e6);
            prop_assert!((fd - exact).abs() <= 1e-6 * (1.0 + exact.abs()), "{} vs {}", fd, exact);
        }
    }
}
