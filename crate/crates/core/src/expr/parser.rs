use super::ast::Expr;
use super::lexer::{lex, Tok};
use super::ExprError;

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if let Some((at, t)) = p.toks.get(p.pos) {
        return Err(ExprError::Syntax {
            pos: *at,
            msg: format!("unexpected {t:?}"),
        });
    }
    Ok(e)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            pos: self.here(),
            msg: msg.to_string(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(&Tok::Slash) {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Tok::Int(_) | Tok::Ident(_) | Tok::LParen)) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let paren = self.eat(&Tok::LParen);
        let neg = self.eat(&Tok::Minus);
        let at = self.here();
        let n = match self.peek() {
            Some(Tok::Int(n)) => n.clone(),
            _ => return self.err("expected an integer exponent"),
        };
        self.pos += 1;
        if paren && !self.eat(&Tok::RParen) {
            return self.err("expected `)`");
        }
        let n = i32::try_from(n).map_err(|_| ExprError::Syntax {
            pos: at,
            msg: "exponent too large".into(),
        })?;
        Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Ident(s))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(t) => self.err(&format!("unexpected {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        let e = parse("1/2*p^2 - (q^2 + t/2)*p - b*q").unwrap();
        assert_eq!(e.to_string(), "1/2*p^2 - (q^2 + t/2)*p - b*q");
        assert_eq!(parse("a - b - c").unwrap().to_string(), "a - b - c");
        assert_eq!(parse("a - (b - c)").unwrap().to_string(), "a - (b - c)");
        assert_eq!(
            parse("-x^2").unwrap(),
            Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Ident("x".into())), 2)))
        );
        assert_eq!(parse("x^(-2)").unwrap(), parse("x^-2").unwrap());
    }

    #[test]
    fn juxtaposition_is_product() {
        assert_eq!(parse("2 q p").unwrap(), parse("2*q*p").unwrap());
        assert_eq!(parse("(q)(p)").unwrap(), parse("q*p").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse("q + ").unwrap_err(),
            ExprError::Syntax {
                pos: 4,
                msg: "unexpected end of input".into()
            }
        );
        assert!(matches!(
            parse("q $ p"),
            Err(ExprError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse("q^p"),
            Err(ExprError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(parse("(q"), Err(ExprError::Syntax { .. })));
    }
}
