//! Reference instances shared by the test and benchmark suites: the
//! constraint matrices of the worked biochemical examples, the reaction
//! networks they come from, and catalogued recurrence systems for the
//! corresponding partition functions.
//!
//! Each catalogued recurrence carries a frozen `verified` flag: `true`
//! means exact verification confirms it, `false` means it carries a
//! transcription error and exact verification produces a counterexample
//! (these are kept as regression inputs for the verifier and the
//! recurrence guesser, which must reject them and find replacements).

use crate::genfun::ConstraintMatrix;
use crate::poly::MultiPoly;
use crate::rational::BigRational;
use crate::recurrence::{PRecurrence, RecurrenceSystem};
use crate::crn::ReactionNetwork;

// ---------------------------------------------------------------------
// constraint matrices
// ---------------------------------------------------------------------

/// `A + B` total for the reversible isomerization `A <-> B`.
pub fn a_isomerization() -> ConstraintMatrix {
    ConstraintMatrix::parse("1 1").unwrap()
}

/// Association `X1 + X2 <-> X3`: totals `X1+X3` and `X2+X3`.
pub fn a_association() -> ConstraintMatrix {
    ConstraintMatrix::parse("1 0 1 ; 0 1 1").unwrap()
}

/// Combustion `2 X1 + X2 <-> 2 X3`: totals `X1+X3` and `2 X2+X3`.
pub fn a_combustion() -> ConstraintMatrix {
    ConstraintMatrix::parse("1 0 1 ; 0 2 1").unwrap()
}

/// Receptor–ligand cycle over (R1, R2, L, C1, C2): free+bound ligand and
/// total receptor.
pub fn a_receptor_ligand() -> ConstraintMatrix {
    ConstraintMatrix::parse("0 0 1 1 1 ; 1 1 0 1 1").unwrap()
}

/// Two-component phosphorelay chain over (R, ZP, ERP, Z, RP, EPR).
pub fn a_two_component() -> ConstraintMatrix {
    ConstraintMatrix::parse("1 0 1 0 1 1 ; 0 1 1 1 0 1").unwrap()
}

/// Futile phosphorylation cycle over (S, P, E, F, C, D): kinase,
/// phosphatase, and substrate totals.
pub fn a_futile_cycle() -> ConstraintMatrix {
    ConstraintMatrix::parse("0 0 1 0 1 0 ; 0 0 0 1 0 1 ; 1 1 0 0 1 1").unwrap()
}

/// Receptor-antagonist trap over (R, L, A, T, RL, RA, AT, LT): four
/// binding totals.
pub fn a_antagonist_trap() -> ConstraintMatrix {
    ConstraintMatrix::parse(
        "1 0 0 0 1 1 0 0 ; 0 1 0 0 1 0 0 1 ; 0 0 1 0 0 1 1 0 ; 0 0 0 1 0 0 1 1",
    )
    .unwrap()
}

// ---------------------------------------------------------------------
// reaction networks
// ---------------------------------------------------------------------

/// A reaction network in text form, its canonical species order, and the
/// conservation-law constraint matrix it induces (rows up to reordering).
pub struct NetworkFixture {
    pub name: &'static str,
    pub text: &'static str,
    pub species: &'static [&'static str],
    pub conservation: ConstraintMatrix,
}

impl NetworkFixture {
    pub fn network(&self) -> ReactionNetwork {
        ReactionNetwork::parse(self.text)
            .and_then(|n| n.reorder_species(self.species))
            .unwrap_or_else(|e| panic!("fixture `{}`: {e}", self.name))
    }
}

pub fn network_fixtures() -> Vec<NetworkFixture> {
    vec![
        NetworkFixture {
            name: "isomerization",
            text: "A <-> B @ k1=1, k2=1\n",
            species: &["A", "B"],
            conservation: a_isomerization(),
        },
        NetworkFixture {
            name: "association",
            text: "X1 + X2 <-> X3 @ k1=1, k2=1\n",
            species: &["X1", "X2", "X3"],
            conservation: a_association(),
        },
        NetworkFixture {
            name: "combustion",
            text: "2 X1 + X2 <-> 2 X3 @ k1=1, k2=1\n",
            species: &["X1", "X2", "X3"],
            conservation: a_combustion(),
        },
        NetworkFixture {
            name: "receptor-ligand",
            text: "R1 + L <-> C1 @ k21=1, k12=1\n\
                   C1 <-> C2 @ k24=1, k42=1\n\
                   C2 <-> R2 + L @ k34=1, k43=1\n\
                   R1 + L <-> R2 + L @ k31=1, k13=1\n",
            species: &["R1", "R2", "L", "C1", "C2"],
            conservation: a_receptor_ligand(),
        },
        NetworkFixture {
            name: "two-component",
            text: "R + Z <-> R + ZP @ k1=1, k2=1\n\
                   R + ZP <-> ERP @ k3=1, k4=1\n\
                   ERP <-> RP + Z @ k5=1, k6=1\n\
                   RP + Z <-> EPR @ k7=1, k8=1\n",
            species: &["R", "ZP", "ERP", "Z", "RP", "EPR"],
            conservation: a_two_component(),
        },
        NetworkFixture {
            name: "futile-cycle",
            text: "E + S <-> C @ k1=1, k2=1\n\
                   C <-> E + P @ k3=1, k4=1\n\
                   F + P <-> D @ k5=1, k6=1\n\
                   D <-> F + S @ k7=1, k8=1\n",
            species: &["S", "P", "E", "F", "C", "D"],
            conservation: a_futile_cycle(),
        },
        NetworkFixture {
            name: "antagonist-trap",
            text: "R + L <-> RL @ k1=1, k2=1\n\
                   R + A <-> RA @ k3=1, k4=1\n\
                   A + T <-> AT @ k5=1, k6=1\n\
                   L + T <-> LT @ k7=1, k8=1\n",
            species: &["R", "L", "A", "T", "RL", "RA", "AT", "LT"],
            conservation: a_antagonist_trap(),
        },
        NetworkFixture {
            name: "counter-example",
            text: "A -> B @ 1\n2 B -> 2 A @ 1\n",
            species: &["A", "B"],
            conservation: ConstraintMatrix::parse("1 1").unwrap(),
        },
    ]
}

pub fn network_fixture(name: &str) -> Option<NetworkFixture> {
    network_fixtures().into_iter().find(|f| f.name == name)
}

// ---------------------------------------------------------------------
// catalogued recurrences
// ---------------------------------------------------------------------

/// A catalogued recurrence for the partition function of `matrix`,
/// entered coefficient-by-coefficient as transcribed. `verified` is the
/// frozen outcome of exact verification.
pub struct ReferenceRecurrence {
    pub name: &'static str,
    pub matrix: ConstraintMatrix,
    pub recurrence: PRecurrence,
    pub verified: bool,
    pub note: &'static str,
}

fn add(ps: &[MultiPoly]) -> MultiPoly {
    let mut acc = ps[0].clone();
    for p in &ps[1..] {
        acc = acc.add(p).unwrap();
    }
    acc
}

fn mul(ps: &[MultiPoly]) -> MultiPoly {
    let mut acc = ps[0].clone();
    for p in &ps[1..] {
        acc = acc.mul(p).unwrap();
    }
    acc
}

/// Variable constructors for a system with `n` rates and `m` constraints.
struct V {
    vars: Vec<String>,
}

impl V {
    fn new(n: usize, m: usize) -> V {
        let mut vars: Vec<String> = (1..=n).map(|j| format!("lam{j}")).collect();
        vars.extend((1..=m).map(|i| format!("b{i}")));
        V { vars }
    }

    fn names(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    fn l(&self, j: usize) -> MultiPoly {
        MultiPoly::var(&self.names(), &format!("lam{j}")).unwrap()
    }

    fn b(&self, i: usize) -> MultiPoly {
        MultiPoly::var(&self.names(), &format!("b{i}")).unwrap()
    }

    fn c(&self, k: i64) -> MultiPoly {
        MultiPoly::constant(&self.names(), BigRational::from_integer(k.into()))
    }
}

/// `(1+b1) F0(b1+1) - (lam1+lam2) F0(b1) = 0` for the one-row total.
pub fn rec_isomerization() -> PRecurrence {
    let v = V::new(2, 1);
    let p0 = add(&[v.l(1), v.l(2)]).neg();
    let p1 = add(&[v.c(1), v.b(1)]);
    PRecurrence::new(1, vec![p0, p1]).unwrap()
}

/// Order-2 recurrences for the association matrix, one per direction.
pub fn rec_association(direction: usize) -> PRecurrence {
    let v = V::new(3, 2);
    let (own, oth, lam_own, lam_oth) = match direction {
        1 => (1, 2, 1, 2),
        2 => (2, 1, 2, 1),
        _ => panic!("direction must be 1 or 2"),
    };
    let p0 = mul(&[v.l(lam_own), v.l(3)]).neg();
    let p1 = add(&[
        mul(&[v.l(3), v.b(own)]),
        mul(&[v.l(3), v.b(oth)]).neg(),
        v.l(3),
        mul(&[v.l(1), v.l(2)]).neg(),
    ]);
    let p2 = mul(&[v.l(lam_oth), add(&[v.b(own), v.c(2)])]);
    PRecurrence::new(direction, vec![p0, p1, p2]).unwrap()
}

/// Order-3 recurrences for the combustion matrix. The first-direction
/// entry fails exact verification (transcription error); the second
/// passes.
pub fn rec_combustion(direction: usize) -> PRecurrence {
    let v = V::new(3, 2);
    match direction {
        1 => {
            let p0 = mul(&[v.l(1), v.l(3), v.l(3)]).neg();
            let p1 = add(&[
                mul(&[v.l(3), v.l(3)]),
                mul(&[v.b(2), v.l(3), v.l(3)]).neg(),
                mul(&[v.c(2), v.l(2), v.l(1), v.l(1)]),
                mul(&[v.b(1), v.l(3), v.l(3)]),
            ]);
            let p2 = mul(&[v.l(1), v.l(2), add(&[v.c(2), v.b(1)])]).neg();
            let p3 = mul(&[v.c(2), v.l(2), add(&[v.c(3), v.b(1)]), add(&[v.c(2), v.b(1)])]);
            PRecurrence::new(1, vec![p0, p1, p2, p3]).unwrap()
        }
        2 => {
            let p0 = mul(&[v.c(2), v.l(2), v.l(3)]).neg();
            let p1 = mul(&[v.c(2), v.l(1), v.l(2)]).neg();
            let p2 = mul(&[v.l(3), add(&[v.b(1), v.c(-2), v.b(2).neg()])]).neg();
            let p3 = mul(&[v.l(1), add(&[v.c(3), v.b(2)])]);
            PRecurrence::new(2, vec![p0, p1, p2, p3]).unwrap()
        }
        _ => panic!("direction must be 1 or 2"),
    }
}

/// Order-2 recurrences for the receptor–ligand matrix, one per direction.
pub fn rec_receptor_ligand(direction: usize) -> PRecurrence {
    let v = V::new(5, 2);
    match direction {
        1 => {
            let p0 = mul(&[v.l(3), add(&[v.l(5), v.l(4)])]).neg();
            let p1 = add(&[
                mul(&[v.b(2), v.l(5)]).neg(),
                mul(&[v.b(2), v.l(4)]).neg(),
                v.l(5),
                v.l(4),
                mul(&[v.l(1), v.l(3)]).neg(),
                mul(&[v.l(2), v.l(3)]).neg(),
                mul(&[v.b(1), v.l(5)]),
                mul(&[v.b(1), v.l(4)]),
            ]);
            let p2 = mul(&[add(&[v.l(1), v.l(2)]), add(&[v.c(2), v.b(1)])]);
            PRecurrence::new(1, vec![p0, p1, p2]).unwrap()
        }
        2 => {
            let p0 = mul(&[add(&[v.l(5), v.l(4)]), add(&[v.l(1), v.l(2)])]).neg();
            let p1 = add(&[
                v.l(5),
                v.l(4),
                mul(&[v.b(1), v.l(5)]).neg(),
                mul(&[v.b(1), v.l(4)]).neg(),
                mul(&[v.b(2), v.l(5)]),
                mul(&[v.b(2), v.l(4)]),
                mul(&[v.l(2), v.l(3)]).neg(),
                mul(&[v.l(1), v.l(3)]).neg(),
            ]);
            let p2 = mul(&[v.l(3), add(&[v.b(2), v.c(2)])]);
            PRecurrence::new(2, vec![p0, p1, p2]).unwrap()
        }
        _ => panic!("direction must be 1 or 2"),
    }
}

/// Order-2 recurrences for the two-component chain matrix, one per
/// direction.
pub fn rec_two_component(direction: usize) -> PRecurrence {
    let v = V::new(6, 2);
    match direction {
        1 => {
            let p0 = mul(&[add(&[v.l(3), v.l(6)]), add(&[v.l(5), v.l(1)])]).neg();
            let p1 = add(&[
                v.l(3),
                v.l(6),
                mul(&[v.l(5), v.l(4)]).neg(),
                mul(&[v.l(5), v.l(2)]).neg(),
                mul(&[v.b(1), v.l(3)]),
                mul(&[v.b(1), v.l(6)]),
                mul(&[v.l(1), v.l(4)]).neg(),
                mul(&[v.l(1), v.l(2)]).neg(),
                mul(&[v.b(2), v.l(3)]).neg(),
                mul(&[v.b(2), v.l(6)]).neg(),
            ]);
            let p2 = mul(&[add(&[v.l(4), v.l(2)]), add(&[v.c(2), v.b(1)])]);
            PRecurrence::new(1, vec![p0, p1, p2]).unwrap()
        }
        2 => {
            let p0 = mul(&[add(&[v.l(3), v.l(6)]), add(&[v.l(4), v.l(2)])]).neg();
            let p1 = add(&[
                mul(&[v.b(1), v.l(6)]),
                mul(&[v.b(1), v.l(3)]),
                mul(&[v.b(2), v.l(6)]).neg(),
                mul(&[v.b(2), v.l(3)]).neg(),
                mul(&[v.l(1), v.l(4)]),
                mul(&[v.l(5), v.l(4)]),
                mul(&[v.l(1), v.l(2)]),
                mul(&[v.l(5), v.l(2)]),
                v.l(6).neg(),
                v.l(3).neg(),
            ])
            .neg();
            let p2 = mul(&[add(&[v.b(2), v.c(2)]), add(&[v.l(5), v.l(1)])]);
            PRecurrence::new(2, vec![p0, p1, p2]).unwrap()
        }
        _ => panic!("direction must be 1 or 2"),
    }
}

/// Order-2 recurrences catalogued for the three-row futile-cycle matrix.
/// Both are two-argument recurrences whose coefficients never mention the
/// third constraint; exact verification rejects them (counterexamples at
/// the origin), so they are frozen with `verified = false`.
pub fn rec_futile_cycle(direction: usize) -> PRecurrence {
    let v = V::new(6, 3);
    match direction {
        1 => {
            let p0 = mul(&[add(&[v.l(6), v.l(3)]), add(&[v.l(1), v.l(5)])]).neg();
            let p1 = add(&[
                mul(&[v.b(2), v.l(6)]).neg(),
                mul(&[v.b(2), v.l(3)]).neg(),
                mul(&[v.l(1), v.l(2)]).neg(),
                mul(&[v.l(1), v.l(4)]).neg(),
                mul(&[v.l(5), v.l(2)]).neg(),
                mul(&[v.l(5), v.l(4)]).neg(),
                mul(&[v.b(1), v.l(6)]),
                mul(&[v.b(1), v.l(3)]),
                v.l(6),
                v.l(3),
            ]);
            let p2 = mul(&[add(&[v.l(2), v.l(4)]), add(&[v.c(2), v.b(1)])]);
            PRecurrence::new(1, vec![p0, p1, p2]).unwrap()
        }
        2 => {
            let p0 = mul(&[add(&[v.l(6), v.l(3)]), add(&[v.l(2), v.l(4)])]).neg();
            let p1 = add(&[
                mul(&[v.b(1), v.l(3)]),
                mul(&[v.b(1), v.l(6)]),
                v.l(3).neg(),
                v.l(6).neg(),
                mul(&[v.l(1), v.l(2)]),
                mul(&[v.l(5), v.l(2)]),
                mul(&[v.l(1), v.l(4)]),
                mul(&[v.l(5), v.l(4)]),
                mul(&[v.b(2), v.l(3)]).neg(),
                mul(&[v.b(2), v.l(6)]).neg(),
            ])
            .neg();
            let p2 = mul(&[add(&[v.b(2), v.c(2)]), add(&[v.l(1), v.l(5)])]);
            PRecurrence::new(2, vec![p0, p1, p2]).unwrap()
        }
        _ => panic!("direction must be 1 or 2"),
    }
}

/// Alternative order-2 first-direction recurrence for the association
/// matrix, derived from the single-sum form of the two-row partition
/// function (aggregate symbols instantiated per column class: `lam1` for
/// the first row alone, `lam2` for the second, `lam3` for both). Fails
/// exact verification — counterexample at `b = (1, 1)`.
pub fn rec_association_single_sum() -> PRecurrence {
    let v = V::new(3, 2);
    let p2 = add(&[
        mul(&[v.l(2), v.b(1), v.b(1)]),
        mul(&[v.c(4), v.l(2)]),
        mul(&[v.c(2), v.l(2), v.b(2)]).neg(),
        mul(&[v.c(4), v.l(2), v.b(1)]),
        mul(&[v.l(2), v.b(1), v.b(2)]).neg(),
    ]);
    let p1 = add(&[
        mul(&[v.l(3), v.b(1)]).neg(),
        v.l(3).neg(),
        mul(&[v.b(2), v.l(3)]),
        mul(&[v.b(2), v.l(2), v.l(1)]),
        mul(&[v.c(2), v.b(1), v.l(2), v.l(1)]).neg(),
        mul(&[v.c(3), v.l(1), v.l(2)]).neg(),
    ]);
    let p0 = add(&[mul(&[v.l(3), v.l(2)]), mul(&[v.l(1), v.l(2), v.l(2)])]);
    PRecurrence::new(1, vec![p0, p1, p2]).unwrap()
}

pub fn reference_recurrences() -> Vec<ReferenceRecurrence> {
    vec![
        ReferenceRecurrence {
            name: "isomerization-b1",
            matrix: a_isomerization(),
            recurrence: rec_isomerization(),
            verified: true,
            note: "order-1 recurrence for the binomial total",
        },
        ReferenceRecurrence {
            name: "association-b1",
            matrix: a_association(),
            recurrence: rec_association(1),
            verified: true,
            note: "order-2 recurrence in the first constraint",
        },
        ReferenceRecurrence {
            name: "association-b2",
            matrix: a_association(),
            recurrence: rec_association(2),
            verified: true,
            note: "order-2 recurrence in the second constraint",
        },
        ReferenceRecurrence {
            name: "combustion-b1",
            matrix: a_combustion(),
            recurrence: rec_combustion(1),
            verified: false,
            note: "order-3 recurrence as catalogued; exact verification finds a \
                   counterexample at the origin (transcription error)",
        },
        ReferenceRecurrence {
            name: "combustion-b2",
            matrix: a_combustion(),
            recurrence: rec_combustion(2),
            verified: true,
            note: "order-3 recurrence in the second constraint",
        },
        ReferenceRecurrence {
            name: "receptor-ligand-b1",
            matrix: a_receptor_ligand(),
            recurrence: rec_receptor_ligand(1),
            verified: true,
            note: "order-2 recurrence; rates enter through the aggregates \
                   lam1+lam2 and lam4+lam5",
        },
        ReferenceRecurrence {
            name: "receptor-ligand-b2",
            matrix: a_receptor_ligand(),
            recurrence: rec_receptor_ligand(2),
            verified: true,
            note: "order-2 recurrence; rates enter through the aggregates \
                   lam1+lam2 and lam4+lam5",
        },
        ReferenceRecurrence {
            name: "two-component-b1",
            matrix: a_two_component(),
            recurrence: rec_two_component(1),
            verified: true,
            note: "order-2 recurrence; rates enter through the aggregates \
                   lam1+lam5, lam2+lam4, lam3+lam6",
        },
        ReferenceRecurrence {
            name: "two-component-b2",
            matrix: a_two_component(),
            recurrence: rec_two_component(2),
            verified: true,
            note: "order-2 recurrence; rates enter through the aggregates \
                   lam1+lam5, lam2+lam4, lam3+lam6",
        },
        ReferenceRecurrence {
            name: "futile-cycle-b1",
            matrix: a_futile_cycle(),
            recurrence: rec_futile_cycle(1),
            verified: false,
            note: "catalogued coefficients ignore the third constraint and do \
                   not hold for this matrix (counterexample at the origin)",
        },
        ReferenceRecurrence {
            name: "futile-cycle-b2",
            matrix: a_futile_cycle(),
            recurrence: rec_futile_cycle(2),
            verified: false,
            note: "catalogued coefficients ignore the third constraint and do \
                   not hold for this matrix (counterexample at the origin)",
        },
        ReferenceRecurrence {
            name: "association-single-sum-b1",
            matrix: a_association(),
            recurrence: rec_association_single_sum(),
            verified: false,
            note: "alternative first-direction recurrence from the single-sum \
                   representation; fails exact verification at b = (1, 1)",
        },
    ]
}

pub fn reference_recurrence(name: &str) -> Option<ReferenceRecurrence> {
    reference_recurrences().into_iter().find(|r| r.name == name)
}

/// Complete marchable system for the isomerization matrix.
pub fn isomerization_system() -> RecurrenceSystem {
    RecurrenceSystem::new(a_isomerization(), vec![rec_isomerization()]).unwrap()
}

/// Complete marchable system for the association matrix.
pub fn association_system() -> RecurrenceSystem {
    RecurrenceSystem::new(a_association(), vec![rec_association(1), rec_association(2)]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crn::ConservationLaws;
    use crate::genfun::{self, Rates};
    use crate::rational::parse_rational;
    use crate::recurrence;

    fn rats(ss: &[&str]) -> Vec<BigRational> {
        ss.iter().map(|s| parse_rational(s).unwrap()).collect()
    }

    #[test]
    fn networks_parse_with_declared_species_order() {
        for f in network_fixtures() {
            let net = f.network();
            let got: Vec<&str> = net.species().iter().map(|s| s.as_str()).collect();
            assert_eq!(got, f.species, "fixture `{}`", f.name);
            assert_eq!(net.n_species(), f.conservation.cols(), "fixture `{}`", f.name);
        }
    }

    #[test]
    fn conservation_laws_match_fixture_matrices() {
        for f in network_fixtures() {
            let net = f.network();
            match net.conservation_matrix() {
                ConservationLaws::Constraints(a) => {
                    let mut got: Vec<Vec<u32>> = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
                    let mut want: Vec<Vec<u32>> =
                        (0..f.conservation.rows()).map(|i| f.conservation.row(i).to_vec()).collect();
                    got.sort();
                    want.sort();
                    assert_eq!(got, want, "fixture `{}`", f.name);
                }
                ConservationLaws::Basis(b) => {
                    panic!("fixture `{}`: expected constraint form, got basis {b:?}", f.name)
                }
            }
        }
    }

    #[test]
    fn structural_reports_are_frozen() {
        // (complexes, linkage classes, rank, deficiency, weakly reversible)
        let expected = [
            ("isomerization", (2, 1, 1, 0, true)),
            ("association", (2, 1, 1, 0, true)),
            ("combustion", (2, 1, 1, 0, true)),
            ("receptor-ligand", (4, 1, 3, 0, true)),
            ("two-component", (5, 1, 4, 0, true)),
            ("futile-cycle", (6, 2, 3, 1, true)),
            ("antagonist-trap", (8, 4, 4, 0, true)),
            ("counter-example", (4, 2, 1, 1, false)),
        ];
        for (name, want) in expected {
            let r = network_fixture(name).unwrap().network().analyze();
            assert_eq!(
                (r.complexes, r.linkage_classes, r.rank, r.deficiency as usize, r.weakly_reversible),
                want,
                "network `{name}`"
            );
        }
    }

    /// Every `verified` flag is re-checked here: numerically at two
    /// generic rational rate tuples for all entries, and symbolically
    /// (all rates at once) for the small systems.
    #[test]
    fn verified_flags_are_accurate() {
        for r in reference_recurrences() {
            let m = r.matrix.rows();
            let n = r.matrix.cols();
            let hi = match m {
                1 => vec![10u32],
                2 => vec![7, 7],
                _ => vec![4, 4, 3],
            };
            let lo = vec![0u32; m];
            for seed in 0..2u32 {
                let lam: Vec<BigRational> = (0..n)
                    .map(|j| {
                        let num = 2 + ((j as i64) * 3 + seed as i64 * 5) % 7;
                        let den = 1 + ((j as i64) + 2 * seed as i64) % 4;
                        BigRational::new(num.into(), den.into())
                    })
                    .collect();
                let rates = Rates::numeric(lam).unwrap();
                let out = recurrence::verify(&r.recurrence, &r.matrix, &rates, &lo, &hi).unwrap();
                assert_eq!(out.pass, r.verified, "fixture `{}` seed {seed}", r.name);
                if !r.verified {
                    assert!(out.counterexample.is_some(), "fixture `{}`", r.name);
                }
            }
        }
        // symbolic confirmation for the three-rate systems
        for name in ["isomerization-b1", "association-b1", "association-b2", "combustion-b2"] {
            let r = reference_recurrence(name).unwrap();
            let hi = if r.matrix.rows() == 1 { vec![8u32] } else { vec![6, 6] };
            let lo = vec![0u32; r.matrix.rows()];
            let out = recurrence::verify(
                &r.recurrence,
                &r.matrix,
                &Rates::Symbolic(r.matrix.cols()),
                &lo,
                &hi,
            )
            .unwrap();
            assert!(out.pass, "fixture `{name}` must pass symbolically");
        }
    }

    #[test]
    fn reference_systems_march() {
        let lam2 = rats(&["3/2", "2/3"]);
        let sys = isomerization_system();
        for b in [0u32, 1, 7, 40] {
            let got = recurrence::march(&sys, &lam2, &[b]).unwrap();
            let want = genfun::f0(&a_isomerization(), &Rates::Numeric(lam2.clone()), &[b])
                .unwrap()
                .unwrap_exact();
            assert_eq!(got, want, "isomerization at b = {b}");
        }

        let lam3 = rats(&["2/3", "5/7", "3"]);
        let sys = association_system();
        for b in [[0u32, 0], [5, 3], [12, 12], [25, 10]] {
            let got = recurrence::march(&sys, &lam3, &b).unwrap();
            let want = genfun::f0(&a_association(), &Rates::Numeric(lam3.clone()), &b)
                .unwrap()
                .unwrap_exact();
            assert_eq!(got, want, "association at b = {b:?}");
        }
    }
}
