use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::finspace::render_set;

/// Largest set on which the powerset carrier is enumerated.
pub const MAX_POWERSET_POINTS: usize = 8;
/// Largest set on which the monotone carrier is enumerated.
pub const MAX_MONOTONE_POINTS: usize = 4;

/// Endofunctors on finite sets. Elements are `u64` codes: a subset mask for
/// the powerset, and for the monotone functor a mask over subset masks (bit
/// `u` set iff the subset `u` belongs to the collection).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetFunctor {
    Powerset,
    Monotone,
}

impl SetFunctor {
    pub fn parse(name: &str) -> Result<SetFunctor> {
        match name {
            "powerset" => Ok(SetFunctor::Powerset),
            "monotone" => Ok(SetFunctor::Monotone),
            _ => Err(Error::UnknownFunctor(name.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SetFunctor::Powerset => "powerset",
            SetFunctor::Monotone => "monotone",
        }
    }

    /// The carrier on an `n`-element set, in increasing code order.
    pub fn on_set(self, n: usize) -> Result<Vec<u64>> {
        match self {
            SetFunctor::Powerset => {
                if n > MAX_POWERSET_POINTS {
                    return Err(Error::resource("points for the powerset carrier", MAX_POWERSET_POINTS));
                }
                Ok((0..1u64 << n).collect())
            }
            SetFunctor::Monotone => {
                if n > MAX_MONOTONE_POINTS {
                    return Err(Error::resource("points for the monotone carrier", MAX_MONOTONE_POINTS));
                }
                Ok(up_closed_collections(n))
            }
        }
    }

    pub fn contains(self, n: usize, code: u64) -> bool {
        match self {
            SetFunctor::Powerset => n >= 64 || code >> n == 0,
            SetFunctor::Monotone => n < 6 && code >> (1u64 << n) == 0 && is_up_closed(n, code),
        }
    }

    /// Action on a function `f : n → m` given as an assignment.
    pub fn on_fun(self, f: &[usize], m: usize, code: u64) -> u64 {
        match self {
            SetFunctor::Powerset => Bits::from_u64(code).iter().fold(0, |acc, x| acc | 1 << f[x]),
            SetFunctor::Monotone => {
                let mut out = 0u64;
                for b in 0..1u64 << m {
                    if code >> preimage(f, b) & 1 == 1 {
                        out |= 1 << b;
                    }
                }
                out
            }
        }
    }

    pub fn render(self, names: &[String], code: u64) -> String {
        match self {
            SetFunctor::Powerset => render_set(names, Bits::from_u64(code)),
            SetFunctor::Monotone => render_collection(names, code),
        }
    }
}

/// `f⁻¹(b)` for a subset mask `b`.
pub(crate) fn preimage(f: &[usize], b: u64) -> u64 {
    f.iter().enumerate().filter(|(_, &y)| b >> y & 1 == 1).fold(0, |acc, (x, _)| acc | 1 << x)
}

/// Is the collection (mask over subset masks of an `n`-set) closed upwards?
pub(crate) fn is_up_closed(n: usize, w: u64) -> bool {
    Bits::from_u64(w).iter().all(|u| (0..n).all(|x| w >> (u as u64 | 1 << x) & 1 == 1))
}

fn up_closed_collections(n: usize) -> Vec<u64> {
    (0..1u64 << (1u64 << n)).filter(|&w| is_up_closed(n, w)).collect()
}

/// Render a collection of subsets, e.g. `{{x},{x,y}}`.
pub fn render_collection(names: &[String], w: u64) -> String {
    let parts: Vec<String> = Bits::from_u64(w).iter().map(|u| render_set(names, Bits::from_u64(u as u64))).collect();
    format!("{{{}}}", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carrier_sizes() {
        assert_eq!(SetFunctor::Powerset.on_set(0).unwrap(), vec![0]);
        let sizes: Vec<usize> = (0..=4).map(|n| SetFunctor::Monotone.on_set(n).unwrap().len()).collect();
        assert_eq!(sizes, vec![2, 3, 6, 20, 168]);
    }

    #[test]
    fn powerset_image() {
        // f : {x, y} → {z}
        assert_eq!(SetFunctor::Powerset.on_fun(&[0, 0], 1, 0b01), 0b1);
    }

    #[test]
    fn monotone_action_is_preimage_membership() {
        // the collection {{x}, {x,y}} on {x,y}, pushed along the swap
        let w = 1 << 0b01 | 1 << 0b11;
        let v = SetFunctor::Monotone.on_fun(&[1, 0], 2, w);
        assert_eq!(v, 1 << 0b10 | 1 << 0b11);
        assert!(SetFunctor::Monotone.contains(2, v));
    }

    #[test]
    fn functor_laws_on_small_sets() {
        for func in [SetFunctor::Powerset, SetFunctor::Monotone] {
            for n in 0..=3usize {
                let id: Vec<usize> = (0..n).collect();
                for &e in &func.on_set(n).unwrap() {
                    assert_eq!(func.on_fun(&id, n, e), e);
                }
                // every f : n → 2 followed by every g : 2 → 2
                for fm in 0..(1usize << n) {
                    let f: Vec<usize> = (0..n).map(|x| fm >> x & 1).collect();
                    for g in [[0, 0], [0, 1], [1, 0], [1, 1]] {
                        let gf: Vec<usize> = f.iter().map(|&y| g[y]).collect();
                        for &e in &func.on_set(n).unwrap() {
                            assert_eq!(func.on_fun(&g, 2, func.on_fun(&f, 2, e)), func.on_fun(&gf, 2, e));
                        }
                    }
                }
            }
        }
    }
}
