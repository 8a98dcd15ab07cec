use std::fmt;

use crate::bits::Bits;
use crate::coalgfun::SetFunctor;
use crate::error::{Error, Result};

/// Unary predicate liftings of the set functors, identified by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetLifting {
    /// Powerset: `{b | b ⊆ a}`. Monotone: `{W | a ∈ W}`.
    Box,
    /// Powerset: `{b | b ∩ a ≠ ∅}`. Monotone: `{W | X∖a ∉ W}`.
    Dia,
    /// Powerset: `{b | b ∩ a = ∅}`. Monotone: `{W | a ∉ W}`. Antitone.
    Avoid,
}

impl fmt::Display for SetLifting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl SetLifting {
    pub fn parse(name: &str) -> Result<SetLifting> {
        match name {
            "box" => Ok(SetLifting::Box),
            "dia" => Ok(SetLifting::Dia),
            "avoid" => Ok(SetLifting::Avoid),
            _ => Err(Error::UnknownLifting(name.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SetLifting::Box => "box",
            SetLifting::Dia => "dia",
            SetLifting::Avoid => "avoid",
        }
    }

    /// Is the base element `e` in `λ_n(a)` for a subset mask `a` of an `n`-set?
    pub fn holds(self, base: SetFunctor, n: usize, a: u64, e: u64) -> bool {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        match (base, self) {
            (SetFunctor::Powerset, SetLifting::Box) => e & !a == 0,
            (SetFunctor::Powerset, SetLifting::Dia) => e & a != 0,
            (SetFunctor::Powerset, SetLifting::Avoid) => e & a == 0,
            (SetFunctor::Monotone, SetLifting::Box) => e >> a & 1 == 1,
            (SetFunctor::Monotone, SetLifting::Dia) => e >> (full & !a) & 1 == 0,
            (SetFunctor::Monotone, SetLifting::Avoid) => e >> a & 1 == 0,
        }
    }

    /// `λ_n(a)` as a set of positions in `carrier`.
    pub fn image(self, base: SetFunctor, n: usize, carrier: &[u64], a: u64) -> Bits {
        (0..carrier.len()).filter(|&i| self.holds(base, n, a, carrier[i])).collect()
    }
}

/// The set-level code `λ_2({1}) ⊆ T 2` of a unary lifting, as element codes.
pub fn set_code(base: SetFunctor, l: SetLifting) -> Result<Vec<u64>> {
    let carrier = base.on_set(2)?;
    Ok(carrier.into_iter().filter(|&e| l.holds(base, 2, 0b10, e)).collect())
}

/// The lifting determined by a set-level code: `e ∈ λ_n(a)` iff `T χ_a (e) ∈ code`.
pub fn set_lifting_from_code(base: SetFunctor, code: &[u64], n: usize, a: u64, e: u64) -> bool {
    let chi: Vec<usize> = (0..n).map(|x| (a >> x & 1) as usize).collect();
    code.contains(&base.on_fun(&chi, 2, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kripke_diamond_code() {
        assert_eq!(set_code(SetFunctor::Powerset, SetLifting::Dia).unwrap(), vec![0b10, 0b11]);
    }

    #[test]
    fn set_codes_round_trip() {
        for base in [SetFunctor::Powerset, SetFunctor::Monotone] {
            for l in [SetLifting::Box, SetLifting::Dia, SetLifting::Avoid] {
                let code = set_code(base, l).unwrap();
                for n in 0..=3 {
                    for e in base.on_set(n).unwrap() {
                        for a in 0..1u64 << n {
                            assert_eq!(set_lifting_from_code(base, &code, n, a, e), l.holds(base, n, a, e));
                        }
                    }
                }
            }
        }
    }
}
