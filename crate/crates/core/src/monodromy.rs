//! Monodromy words in `L`, `R` acting on the trace coordinates
//! `(x1, x2, x3) = (tr g, tr h, tr gh)` of the fiber group, and the torsion
//! polynomial `3 − tr(∂P_i/∂x_j)` of a word.

use std::fmt;
use std::str::FromStr;

use crate::chebyshev::cheb;
use crate::error::{Error, Result};
use crate::exactalg::TriPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    L,
    R,
}

/// `±` times a product of powers of `L` and `R`, stored run-length encoded.
/// Exponents are nonzero and neighbouring runs use different letters.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MonodromyWord {
    negative: bool,
    runs: Vec<(Letter, i64)>,
}

impl MonodromyWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_runs(negative: bool, runs: impl IntoIterator<Item = (Letter, i64)>) -> Self {
        let mut w = MonodromyWord {
            negative,
            runs: Vec::new(),
        };
        for (letter, e) in runs {
            w.push(letter, e);
        }
        w
    }

    /// `L R^{−(n+2)}`, the word of the bundle `M_n`.
    pub fn bundle(n: i64) -> Self {
        Self::from_runs(false, [(Letter::L, 1), (Letter::R, -(n + 2))])
    }

    /// `L R^k`.
    pub fn lr(k: i64) -> Self {
        Self::from_runs(false, [(Letter::L, 1), (Letter::R, k)])
    }

    fn push(&mut self, letter: Letter, e: i64) {
        if e == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some((l, x)) if *l == letter => {
                *x += e;
                if *x == 0 {
                    self.runs.pop();
                }
            }
            _ => self.runs.push((letter, e)),
        }
    }

    pub fn runs(&self) -> &[(Letter, i64)] {
        &self.runs
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self::from_runs(self.negative, self.runs.iter().rev().map(|&(l, e)| (l, -e)))
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self::from_runs(
            self.negative ^ other.negative,
            self.runs.iter().chain(other.runs.iter()).copied(),
        )
    }
}

impl FromStr for MonodromyWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_word(s)
    }
}

/// Parses `sign? term+` with `term := (L|R) (^ integer)?` and
/// `sign := -`. Whitespace between tokens is ignored; an empty string is the
/// identity.
pub fn parse_word(text: &str) -> Result<MonodromyWord> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let err = |pos: usize, msg: &str| Error::Parse {
        pos,
        msg: msg.to_string(),
    };

    skip_ws(&mut pos);
    let mut negative = false;
    if pos < bytes.len() && bytes[pos] == b'-' {
        negative = true;
        pos += 1;
        skip_ws(&mut pos);
        if pos == bytes.len() {
            return Err(err(pos, "sign must be followed by at least one letter"));
        }
    }
    let mut word = MonodromyWord {
        negative,
        runs: Vec::new(),
    };
    while pos < bytes.len() {
        let letter = match bytes[pos] {
            b'L' => Letter::L,
            b'R' => Letter::R,
            _ => return Err(err(pos, "expected `L` or `R`")),
        };
        pos += 1;
        skip_ws(&mut pos);
        let mut exp = 1i64;
        if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            skip_ws(&mut pos);
            let start = pos;
            if pos < bytes.len() && (bytes[pos] == b'-' || bytes[pos] == b'+') {
                pos += 1;
            }
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            exp = text[start..pos]
                .parse()
                .map_err(|_| err(start, "expected an integer exponent"))?;
        }
        word.push(letter, exp);
        skip_ws(&mut pos);
    }
    Ok(word)
}

impl fmt::Display for MonodromyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        let parts: Vec<String> = self
            .runs
            .iter()
            .map(|&(l, e)| {
                let c = match l {
                    Letter::L => 'L',
                    Letter::R => 'R',
                };
                if e == 1 {
                    c.to_string()
                } else {
                    format!("{c}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `(P1, P2, P3)` as polynomials in the trace coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceTriple(pub [TriPoly; 3]);

impl TraceTriple {
    pub fn identity() -> Self {
        TraceTriple([TriPoly::var(0), TriPoly::var(1), TriPoly::var(2)])
    }

    fn step(self, letter: Letter, forward: bool) -> Self {
        let [p1, p2, p3] = self.0;
        TraceTriple(match (letter, forward) {
            (Letter::L, true) => {
                let p3n = &(&p2 * &p3) - &p1;
                [p3, p2, p3n]
            }
            (Letter::R, true) => {
                let p3n = &(&p1 * &p3) - &p2;
                [p1, p3, p3n]
            }
            (Letter::L, false) => {
                let p1n = &(&p1 * &p2) - &p3;
                [p1n, p2, p1]
            }
            (Letter::R, false) => {
                let p2n = &(&p1 * &p2) - &p3;
                [p1, p2n, p2]
            }
        })
    }
}

/// Applies the letters of `w` in written order. The global sign acts
/// trivially on traces.
pub fn apply_word(w: &MonodromyWord, t: &TraceTriple) -> TraceTriple {
    let mut out = t.clone();
    for &(letter, e) in &w.runs {
        for _ in 0..e.unsigned_abs() {
            out = out.step(letter, e > 0);
        }
    }
    out
}

/// `(x3, x2 f_{k+1}(x3) − x1 f_k(x3), x2 f_{k+2}(x3) − x1 f_{k+1}(x3))`,
/// the image of the identity triple under `L R^k`.
pub fn closed_form_lr(k: i64) -> TraceTriple {
    let x1 = TriPoly::var(0);
    let x2 = TriPoly::var(1);
    let x3 = TriPoly::var(2);
    let f = |j: i64| TriPoly::from_unipoly(&cheb(j), 2);
    TraceTriple([
        x3,
        &(&x2 * &f(k + 1)) - &(&x1 * &f(k)),
        &(&x2 * &f(k + 2)) - &(&x1 * &f(k + 1)),
    ])
}

/// `3 − Σ_i ∂P_i^w / ∂x_i`.
pub fn torsion_polynomial(w: &MonodromyWord) -> TriPoly {
    let TraceTriple(ps) = apply_word(w, &TraceTriple::identity());
    let trace = ps
        .iter()
        .enumerate()
        .fold(TriPoly::zero(), |acc, (i, p)| &acc + &p.partial(i));
    &TriPoly::from_int(3) - &trace
}

/// `3 + f_{n+1}(x3) + x2 f_n'(x3) − x1 f_{n+1}'(x3)`: the torsion polynomial of
/// `L R^{−(n+2)}` written through the Chebyshev family.
pub fn bundle_torsion_polynomial(n: i64) -> TriPoly {
    let x1 = TriPoly::var(0);
    let x2 = TriPoly::var(1);
    let fx3 = |p: &crate::exactalg::UniPoly| TriPoly::from_unipoly(p, 2);
    let mut t = &TriPoly::from_int(3) + &fx3(&cheb(n + 1));
    t = &t + &(&x2 * &fx3(&cheb(n).derivative()));
    &t - &(&x1 * &fx3(&cheb(n + 1).derivative()))
}
