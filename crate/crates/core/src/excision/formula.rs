//! The inverse excision formula on a symbolic pure tensor `f₀⊗…⊗fₙ`,
//! derived by running the descent recursion on words in the letters
//! `f_i`, `e_i` rather than on concrete vectors.

use std::fmt;

use num_traits::One;

use crate::algebra::Extension;
use crate::chain::Chain;
use crate::linalg::{Scalar, SparseVector};
use crate::units::UnitSchedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    F(usize),
    E(usize),
}

/// A product of letters, read left to right.
pub type Word = Vec<Letter>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Choice {
    /// Upper branch `e_i ⊗ f_i·(…)`.
    Plus,
    /// Lower branch `f_i e_i ⊗ (…)`.
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicTerm {
    pub negative: bool,
    pub slots: Vec<Word>,
    /// `s₁ … sₙ`, indexed like the units they select.
    pub choices: Vec<Choice>,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::F(i) => write!(f, "f{i}"),
            Letter::E(i) => write!(f, "e{i}"),
        }
    }
}

impl fmt::Display for SymbolicTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for (k, w) in self.slots.iter().enumerate() {
            if k > 0 {
                f.write_str("⊗")?;
            }
            for l in w {
                write!(f, "{l}")?;
            }
        }
        Ok(())
    }
}

/// The `2ⁿ` signed terms of `ρ⁻¹(f₀⊗…⊗fₙ)`, ordered by their sign words
/// with `+` before `−`.
///
/// Step `i` of the recursion uses the unit `e_{n+1−i}` and removes the last
/// slot `term = f_{n+1−i}`:
/// `t ↦ (−1)^{n+1}(e ⊗ term·t⁽¹⁾ − term·e ⊗ t⁽¹⁾)`.
pub fn symbolic_inverse(n: usize) -> Vec<SymbolicTerm> {
    let outer_negative = n.is_multiple_of(2); // (−1)^{n+1}
    let mut terms = vec![SymbolicTerm {
        negative: false,
        slots: (0..=n).map(|i| vec![Letter::F(i)]).collect(),
        choices: Vec::new(),
    }];
    for step in 1..=n {
        let unit = Letter::E(n + 1 - step);
        let mut next = Vec::with_capacity(terms.len() * 2);
        for t in terms {
            let (last, rest) = t.slots.split_last().unwrap();
            let mut plus = vec![vec![unit]];
            plus.push(last.iter().chain(&rest[0]).copied().collect());
            plus.extend(rest[1..].iter().cloned());
            let mut minus = vec![last.iter().copied().chain([unit]).collect::<Word>()];
            minus.extend(rest.iter().cloned());
            for (slots, choice, flip) in [(plus, Choice::Plus, false), (minus, Choice::Minus, true)] {
                let mut choices = vec![choice];
                choices.extend(&t.choices);
                next.push(SymbolicTerm { negative: t.negative ^ outer_negative ^ flip, slots, choices });
            }
        }
        terms = next;
    }
    terms.sort_by(|a, b| a.choices.cmp(&b.choices));
    terms
}

/// Renders all terms as one signed sum, e.g. `+e1⊗f1f0-f1e1⊗f0`.
pub fn render(terms: &[SymbolicTerm]) -> String {
    terms.iter().map(|t| t.to_string()).collect()
}

/// Evaluates a symbolic term on a concrete pure tensor `coeff · f₀⊗…⊗fₙ`
/// (basis indices in split coordinates) with the units of `schedule`.
pub fn evaluate(ext: &Extension, term: &SymbolicTerm, tuple: &[usize], schedule: &UnitSchedule, coeff: &Scalar) -> Chain {
    let letter = |l: &Letter| match *l {
        Letter::F(i) => ext.basis_vector(tuple[i]),
        Letter::E(i) => schedule.unit(i).clone(),
    };
    let slots: Vec<SparseVector> = term
        .slots
        .iter()
        .map(|w| w[1..].iter().fold(letter(&w[0]), |acc, l| ext.mul(&acc, &letter(l))))
        .collect();
    let sign = if term.negative { -Scalar::one() } else { Scalar::one() };
    Chain::tensor(&slots, &(sign * coeff))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent construction: for each sign word, block i is `e_i ⊗ f_i·`
    // or `f_i e_i ⊗`, and the last open product closes with f₀.
    fn closed_form(n: usize) -> Vec<SymbolicTerm> {
        let mut out = Vec::new();
        for mask in 0..(1usize << n) {
            let choices: Vec<Choice> =
                (0..n).map(|i| if mask & (1 << (n - 1 - i)) != 0 { Choice::Minus } else { Choice::Plus }).collect();
            let mut slots: Vec<Word> = Vec::new();
            let mut open: Word = Vec::new();
            for (i, c) in choices.iter().enumerate() {
                let i = i + 1;
                match c {
                    Choice::Plus => {
                        open.push(Letter::E(i));
                        slots.push(std::mem::take(&mut open));
                        open.push(Letter::F(i));
                    }
                    Choice::Minus => {
                        open.extend([Letter::F(i), Letter::E(i)]);
                        slots.push(std::mem::take(&mut open));
                    }
                }
            }
            open.push(Letter::F(0));
            slots.push(open);
            let minus = choices.iter().filter(|&&c| c == Choice::Minus).count();
            out.push(SymbolicTerm { negative: minus % 2 == 1, slots, choices });
        }
        out
    }

    #[test]
    fn degree_one() {
        assert_eq!(render(&symbolic_inverse(1)), "+e1⊗f1f0-f1e1⊗f0");
    }

    fn rendered_terms(n: usize) -> Vec<String> {
        let mut v: Vec<String> = symbolic_inverse(n).iter().map(|t| t.to_string()).collect();
        v.sort();
        v
    }

    fn sorted(expected: &[&str]) -> Vec<String> {
        let mut v: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        v.sort();
        v
    }

    #[test]
    fn degree_two() {
        // Expected terms listed s₂-major; compare as signed sets.
        let expected = ["+e1⊗f1e2⊗f2f0", "-f1e1⊗e2⊗f2f0", "-e1⊗f1f2e2⊗f0", "+f1e1⊗f2e2⊗f0"];
        assert_eq!(rendered_terms(2), sorted(&expected));
    }

    #[test]
    fn degree_three() {
        let expected = concat!(
            "+e1⊗f1e2⊗f2e3⊗f3f0-e1⊗f1e2⊗f2f3e3⊗f0",
            "-e1⊗f1f2e2⊗e3⊗f3f0+e1⊗f1f2e2⊗f3e3⊗f0",
            "-f1e1⊗e2⊗f2e3⊗f3f0+f1e1⊗e2⊗f2f3e3⊗f0",
            "+f1e1⊗f2e2⊗e3⊗f3f0-f1e1⊗f2e2⊗f3e3⊗f0",
        );
        assert_eq!(render(&symbolic_inverse(3)), expected);
        assert_eq!(rendered_terms(3).len(), 8);
    }

    #[test]
    fn degree_zero_is_the_identity() {
        assert_eq!(render(&symbolic_inverse(0)), "+f0");
    }

    #[test]
    fn recursion_matches_closed_form() {
        for n in 0..=6 {
            let terms = symbolic_inverse(n);
            assert_eq!(terms.len(), 1 << n);
            assert_eq!(terms, closed_form(n));
            assert!(!terms[0].negative);
            assert!(terms[0].choices.iter().all(|&c| c == Choice::Plus));
        }
    }
}
