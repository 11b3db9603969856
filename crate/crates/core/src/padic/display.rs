use super::element::PadicElement;
use super::residue::Fq;
use super::FieldKind;
use std::fmt;

impl PadicElement {
    /// Digit expansion `sum d_k pi^k`, k from the valuation up to the
    /// precision; digits are residues in F_q (lifted with coefficients in
    /// [0, p)).
    pub fn digits(&self) -> Vec<(i64, Fq)> {
        let ctx = self.field().clone();
        let mut out = Vec::new();
        let Some(v) = self.valuation() else {
            return out;
        };
        let mut y = self.shift_pi(-v);
        for k in v..self.prec() {
            let d = y.residue();
            if !ctx.residue.is_zero(&d) {
                out.push((k, d.clone()));
            }
            let lifted = PadicElement::lift_residue(&ctx, &d);
            y = y.sub(&lifted).shift_pi(-1);
        }
        out
    }

    fn uniformizer_name(&self) -> String {
        let ctx = self.field();
        match ctx.kind {
            FieldKind::Eisenstein => ctx.generator.clone(),
            _ => ctx.p.to_string(),
        }
    }

    fn digit_string(&self, d: &Fq) -> (String, bool) {
        let ctx = self.field();
        if ctx.kind != FieldKind::Unramified {
            return (d[0].to_string(), false);
        }
        let mut terms = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => ctx.generator.clone(),
                _ => format!("{}^{}", ctx.generator, i),
            };
            terms.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        let compound = terms.len() > 1;
        (terms.join(" + "), compound)
    }
}

impl fmt::Display for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pi = self.uniformizer_name();
        let power = |k: i64| match k {
            1 => pi.clone(),
            _ => format!("{pi}^{k}"),
        };
        let mut terms = Vec::new();
        for (k, d) in self.digits() {
            let (ds, compound) = self.digit_string(&d);
            let ds = if compound { format!("({ds})") } else { ds };
            terms.push(match (k, ds.as_str()) {
                (0, _) => ds.clone(),
                (_, "1") => power(k),
                _ => format!("{ds}*{}", power(k)),
            });
        }
        terms.push(format!("O({})", power(self.prec())));
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{FieldCtx, FieldSpec};

    #[test]
    fn qp_display() {
        let k = FieldCtx::new(&FieldSpec::qp(43), 6).unwrap();
        let x = k.from_int(29 * 43 + 43 * 43 * 43);
        assert_eq!(x.to_string(), "29*43 + 43^3 + O(43^6)");
        assert_eq!(k.zero().to_string(), "O(43^6)");
        assert_eq!(k.from_int(-1).to_string(), "42 + 42*43 + 42*43^2 + 42*43^3 + 42*43^4 + 42*43^5 + O(43^6)");
    }

    #[test]
    fn eisenstein_display() {
        let k = FieldCtx::new(&FieldSpec::extension(5, &[-5, 0, 0, 0, 1], "a"), 12).unwrap();
        let a = k.gen();
        let x = a.pow(4).mul_int(2).add(&k.from_int(1));
        assert_eq!(x.to_string(), "1 + 2*a^4 + O(a^12)");
        assert_eq!(a.pow(3).to_string(), "a^3 + O(a^12)");
    }

    #[test]
    fn unramified_display() {
        let k = FieldCtx::new(&FieldSpec::extension(7, &[1, 0, 1], "b"), 3).unwrap();
        let b = k.gen();
        let x = b.mul_int(2).add(&k.from_int(3)).mul_int(7);
        assert_eq!(x.to_string(), "(2*b + 3)*7 + O(7^3)");
    }
}
