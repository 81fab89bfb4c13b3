//! Built-in deformation-type records and the dimension-4 Euler-characteristic
//! formula with singularity bookkeeping.

use crate::lattice::{Lattice, LatticeSpec};
use crate::scalar::Rat;
use crate::walls::WallNumerics;

/// One singularity class of an orbifold: an analytic kind label, its additive
/// Euler contribution s_x, and how many points carry it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Singularity {
    pub kind: String,
    pub s_x: i64,
    pub count: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypeFlags {
    pub projective_known: bool,
    pub b2_ge_5: bool,
    /// Set for the dimension-2 record (the K3 surface itself).
    pub surface: bool,
}

/// A named deformation type: its lattice, Betti numbers, singularity
/// inventory, and (when known) Fujiki constant and wall numerics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationType {
    pub name: String,
    pub lattice: LatticeSpec,
    pub b2: u32,
    /// None when the third Betti number is not recorded for the type.
    pub b3: Option<u32>,
    pub fujiki_constant: Option<Rat>,
    pub wall_numerics: Option<WallNumerics>,
    pub singularities: Vec<Singularity>,
    pub flags: TypeFlags,
}

impl DeformationType {
    pub fn lattice(&self) -> Lattice {
        Lattice::build(&self.lattice).expect("builtin lattice spec is valid")
    }
}

fn spec(s: &str) -> LatticeSpec {
    crate::lattice::parse_spec_string(s).expect("builtin spec parses")
}

/// The shipped records: K3 (surface), the Hilbert square type, M' and K'.
pub fn builtin_types() -> Vec<DeformationType> {
    vec![
        DeformationType {
            name: "K3".into(),
            lattice: spec("U(1)^3+E8(-1)^2"),
            b2: 22,
            b3: Some(0),
            fujiki_constant: None,
            wall_numerics: Some(WallNumerics::k3()),
            singularities: vec![],
            flags: TypeFlags {
                projective_known: false,
                b2_ge_5: true,
                surface: true,
            },
        },
        DeformationType {
            name: "K3[2]".into(),
            lattice: spec("U(1)^3+E8(-1)^2+(-2)"),
            b2: 23,
            b3: Some(0),
            fujiki_constant: None,
            wall_numerics: Some(WallNumerics::k3_hilb2()),
            singularities: vec![],
            flags: TypeFlags {
                projective_known: false,
                b2_ge_5: true,
                surface: false,
            },
        },
        DeformationType {
            name: "M'".into(),
            lattice: spec("U(2)^3+E8(-1)+(-2)^2"),
            b2: 16,
            b3: Some(0),
            fujiki_constant: None,
            wall_numerics: None,
            singularities: vec![Singularity {
                kind: "C4/±1".into(),
                s_x: -1,
                count: 28,
            }],
            flags: TypeFlags {
                projective_known: false,
                b2_ge_5: true,
                surface: false,
            },
        },
        DeformationType {
            name: "K'".into(),
            lattice: spec("U(3)^3+gram([[-5,-4],[-4,-5]])"),
            b2: 8,
            b3: None,
            fujiki_constant: None,
            wall_numerics: None,
            singularities: vec![],
            flags: TypeFlags {
                projective_known: false,
                b2_ge_5: true,
                surface: false,
            },
        },
    ]
}

pub fn find_builtin(name: &str) -> Option<DeformationType> {
    builtin_types().into_iter().find(|t| t.name == name)
}

/// chi = 48 + sum(s_x * count) + 12 b2 - 3 b3 (dimension-4 primitively
/// symplectic context; the caller vouches for applicability).
pub fn euler_characteristic(b2: i64, b3: i64, sing: &[(i64, u32)]) -> i64 {
    let s: i64 = sing.iter().map(|(sx, c)| sx * (*c as i64)).sum();
    48 + s + 12 * b2 - 3 * b3
}

/// Consistency diagnostics for a type record; empty means clean.
pub fn validate_type(t: &DeformationType) -> Vec<String> {
    let mut findings = Vec::new();
    let lat = match Lattice::build(&t.lattice) {
        Ok(l) => l,
        Err(e) => {
            findings.push(format!("lattice spec does not build: {e}"));
            return findings;
        }
    };
    if lat.rank() != t.b2 as usize {
        findings.push(format!(
            "rank mismatch: lattice rank {} but b2 = {}",
            lat.rank(),
            t.b2
        ));
    }
    match lat.signature_disc() {
        Ok((pos, neg, _disc)) => {
            if pos != 3 || neg + 3 != t.b2 as usize {
                findings.push(format!(
                    "signature ({pos}, {neg}) differs from (3, {})",
                    t.b2 as i64 - 3
                ));
            }
        }
        Err(_) => findings.push("lattice is degenerate".into()),
    }
    if let Some(num) = &t.wall_numerics {
        for r in &num.rules {
            if r.square >= 0 || r.square <= -(num.bound as i64) {
                findings.push(format!(
                    "rule exceeds bound: square {} with bound {}",
                    r.square, num.bound
                ));
            }
            if r.square % 2 != 0 {
                findings.push(format!("odd wall square {}", r.square));
            }
        }
    }
    findings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Int;
    use crate::walls::WallRule;

    #[test]
    fn builtin_records() {
        let types = builtin_types();
        assert_eq!(types.len(), 4);
        let mp = find_builtin("M'").unwrap();
        assert_eq!(mp.b2, 16);
        assert_eq!(mp.b3, Some(0));
        assert_eq!(mp.singularities.len(), 1);
        assert_eq!(mp.singularities[0].count, 28);
        assert_eq!(mp.singularities[0].s_x, -1);
        let hilb = find_builtin("K3[2]").unwrap();
        assert_eq!(hilb.wall_numerics.unwrap(), WallNumerics::k3_hilb2());
        let kp = find_builtin("K'").unwrap();
        assert_eq!(kp.lattice().rank(), 8);
    }

    #[test]
    fn builtin_discriminants() {
        let mp = find_builtin("M'").unwrap().lattice();
        assert_eq!(mp.signature_disc().unwrap(), (3, 13, Int::from(-256)));
        let kp = find_builtin("K'").unwrap().lattice();
        assert_eq!(kp.signature_disc().unwrap(), (3, 5, Int::from(-6561)));
    }

    #[test]
    fn euler_values() {
        assert_eq!(euler_characteristic(16, 0, &[(-1, 28)]), 212);
        assert_eq!(euler_characteristic(23, 0, &[]), 324);
        assert_eq!(euler_characteristic(0, 16, &[]), 0);
        // linear in the inventory
        let base = euler_characteristic(16, 0, &[]);
        assert_eq!(euler_characteristic(16, 0, &[(-1, 7)]), base - 7);
    }

    #[test]
    fn validation() {
        for t in builtin_types() {
            assert!(validate_type(&t).is_empty(), "{}: {:?}", t.name, validate_type(&t));
        }
        let mut bad = find_builtin("K'").unwrap();
        bad.b2 = 16;
        let findings = validate_type(&bad);
        assert!(findings.iter().any(|f| f.contains("rank mismatch")));
        let mut bad = find_builtin("K3").unwrap();
        bad.wall_numerics = Some(WallNumerics {
            bound: 12,
            rules: vec![WallRule { square: -20, div: None }],
        });
        let findings = validate_type(&bad);
        assert!(findings.iter().any(|f| f.contains("rule exceeds bound")));
    }
}
