//! Finite subgroups of GL2(Z): closure, invariant forms, classification into
//! the 13 conjugacy classes, and the normal-subgroup table.
//!
//! A matrix acts on monomials through its columns: `x_j ↦ x1^{a_1j} x2^{a_2j}`,
//! so the matrix of a composite map is the product of the matrices.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlzError {
    #[error("matrix {0} is not unimodular")]
    NotUnimodular(IntMatrix2),
    #[error("group generated by the given matrices has more than 12 elements")]
    InfiniteGroup,
    #[error("no conjugator found within the search bound")]
    ClassificationFailed,
    #[error("unknown conjugacy label `{0}`")]
    UnknownLabel(String),
}

/// Integer 2×2 matrix with determinant ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntMatrix2 {
    pub a11: i64,
    pub a12: i64,
    pub a21: i64,
    pub a22: i64,
}

impl IntMatrix2 {
    pub const IDENTITY: IntMatrix2 = IntMatrix2 { a11: 1, a12: 0, a21: 0, a22: 1 };
    pub const MINUS_I: IntMatrix2 = IntMatrix2 { a11: -1, a12: 0, a21: 0, a22: -1 };
    pub const LAMBDA: IntMatrix2 = IntMatrix2 { a11: 1, a12: 0, a21: 0, a22: -1 };
    pub const TAU: IntMatrix2 = IntMatrix2 { a11: 0, a12: 1, a21: 1, a22: 0 };
    pub const SIGMA: IntMatrix2 = IntMatrix2 { a11: 0, a12: -1, a21: 1, a22: 0 };
    pub const RHO: IntMatrix2 = IntMatrix2 { a11: 1, a12: -1, a21: 1, a22: 0 };

    pub fn new(a11: i64, a12: i64, a21: i64, a22: i64) -> Result<Self, GlzError> {
        let m = IntMatrix2 { a11, a12, a21, a22 };
        if m.det().abs() != 1 {
            return Err(GlzError::NotUnimodular(m));
        }
        Ok(m)
    }

    pub fn from_row_major(e: [i64; 4]) -> Result<Self, GlzError> {
        Self::new(e[0], e[1], e[2], e[3])
    }

    pub fn to_row_major(self) -> [i64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn det(&self) -> i64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        IntMatrix2 { a11: self.a22 * d, a12: -self.a12 * d, a21: -self.a21 * d, a22: self.a11 * d }
    }

    pub fn transpose(&self) -> Self {
        IntMatrix2 { a11: self.a11, a12: self.a21, a21: self.a12, a22: self.a22 }
    }

    pub fn neg(&self) -> Self {
        IntMatrix2 { a11: -self.a11, a12: -self.a12, a21: -self.a21, a22: -self.a22 }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::IDENTITY, |acc, _| acc * *self)
    }

    /// `p · self · p⁻¹`.
    pub fn conjugate_by(&self, p: &IntMatrix2) -> Self {
        *p * *self * p.inverse()
    }
}

impl Mul for IntMatrix2 {
    type Output = IntMatrix2;
    fn mul(self, r: IntMatrix2) -> IntMatrix2 {
        IntMatrix2 {
            a11: self.a11 * r.a11 + self.a12 * r.a21,
            a12: self.a11 * r.a12 + self.a12 * r.a22,
            a21: self.a21 * r.a11 + self.a22 * r.a21,
            a22: self.a21 * r.a12 + self.a22 * r.a22,
        }
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a11, self.a12, self.a21, self.a22)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConjugacyLabel {
    C1,
    C2_1,
    C2_2,
    C2_3,
    C3,
    C4,
    C6,
    V4_1,
    V4_2,
    S3_1,
    S3_2,
    D4,
    D6,
}

impl ConjugacyLabel {
    pub const ALL: [ConjugacyLabel; 13] = [
        ConjugacyLabel::C1,
        ConjugacyLabel::C2_1,
        ConjugacyLabel::C2_2,
        ConjugacyLabel::C2_3,
        ConjugacyLabel::C3,
        ConjugacyLabel::C4,
        ConjugacyLabel::C6,
        ConjugacyLabel::V4_1,
        ConjugacyLabel::V4_2,
        ConjugacyLabel::S3_1,
        ConjugacyLabel::S3_2,
        ConjugacyLabel::D4,
        ConjugacyLabel::D6,
    ];

    pub fn as_str(&self) -> &'static str {
        use ConjugacyLabel::*;
        match self {
            C1 => "C1",
            C2_1 => "C2_1",
            C2_2 => "C2_2",
            C2_3 => "C2_3",
            C3 => "C3",
            C4 => "C4",
            C6 => "C6",
            V4_1 => "V4_1",
            V4_2 => "V4_2",
            S3_1 => "S3_1",
            S3_2 => "S3_2",
            D4 => "D4",
            D6 => "D6",
        }
    }

    /// Generators of the representative group.
    pub fn generators(&self) -> Vec<IntMatrix2> {
        use ConjugacyLabel::*;
        use IntMatrix2 as M;
        match self {
            C1 => vec![],
            C2_1 => vec![M::MINUS_I],
            C2_2 => vec![M::LAMBDA],
            C2_3 => vec![M::TAU],
            C3 => vec![M::RHO.pow(2)],
            C4 => vec![M::SIGMA],
            C6 => vec![M::RHO],
            V4_1 => vec![M::LAMBDA, M::MINUS_I],
            V4_2 => vec![M::TAU, M::MINUS_I],
            S3_1 => vec![M::RHO.pow(2), M::TAU],
            S3_2 => vec![M::RHO.pow(2), M::TAU.neg()],
            D4 => vec![M::SIGMA, M::TAU],
            D6 => vec![M::RHO, M::TAU],
        }
    }

    pub fn order(&self) -> usize {
        use ConjugacyLabel::*;
        match self {
            C1 => 1,
            C2_1 | C2_2 | C2_3 => 2,
            C3 => 3,
            C4 | V4_1 | V4_2 => 4,
            C6 | S3_1 | S3_2 => 6,
            D4 => 8,
            D6 => 12,
        }
    }

    pub fn representative(&self) -> FiniteMatrixGroup {
        let mut g = close_group(&self.generators()).expect("representatives are finite");
        g.label = Some(*self);
        g
    }
}

impl fmt::Display for ConjugacyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConjugacyLabel {
    type Err = GlzError;
    fn from_str(s: &str) -> Result<Self, GlzError> {
        let norm: String = s.chars().filter(|c| !"_^(){} ".contains(*c)).collect::<String>().to_ascii_uppercase();
        ConjugacyLabel::ALL
            .into_iter()
            .find(|l| l.as_str().replace('_', "") == norm)
            .ok_or_else(|| GlzError::UnknownLabel(s.to_string()))
    }
}

/// Closed finite subgroup, elements sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMatrixGroup {
    pub elements: Vec<IntMatrix2>,
    pub generators: Vec<IntMatrix2>,
    pub label: Option<ConjugacyLabel>,
}

impl FiniteMatrixGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &IntMatrix2) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    pub fn same_elements(&self, other: &FiniteMatrixGroup) -> bool {
        self.elements == other.elements
    }

    /// `p · G · p⁻¹` as a set.
    pub fn conjugate_by(&self, p: &IntMatrix2) -> FiniteMatrixGroup {
        let mut elements: Vec<_> = self.elements.iter().map(|g| g.conjugate_by(p)).collect();
        elements.sort();
        FiniteMatrixGroup {
            elements,
            generators: self.generators.iter().map(|g| g.conjugate_by(p)).collect(),
            label: self.label,
        }
    }

    pub fn is_normal_in(&self, g: &FiniteMatrixGroup) -> bool {
        g.elements.iter().all(|x| self.conjugate_by(x).elements == self.elements)
    }

    pub fn is_subgroup_of(&self, g: &FiniteMatrixGroup) -> bool {
        self.elements.iter().all(|h| g.contains(h))
    }
}

/// Saturate the generators under multiplication.
pub fn close_group(gens: &[IntMatrix2]) -> Result<FiniteMatrixGroup, GlzError> {
    for g in gens {
        if g.det().abs() != 1 {
            return Err(GlzError::NotUnimodular(*g));
        }
    }
    let mut seen: BTreeSet<IntMatrix2> = BTreeSet::new();
    seen.insert(IntMatrix2::IDENTITY);
    let mut frontier = vec![IntMatrix2::IDENTITY];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x * *g;
            if seen.insert(y) {
                if seen.len() > 12 {
                    return Err(GlzError::InfiniteGroup);
                }
                frontier.push(y);
            }
        }
    }
    Ok(FiniteMatrixGroup { elements: seen.into_iter().collect(), generators: gens.to_vec(), label: None })
}

/// `Σ gᵀ g`, stored row-major as `[f11, f12, f21, f22]`.
pub fn invariant_form(g: &FiniteMatrixGroup) -> [i64; 4] {
    let mut f = [0i64; 4];
    for m in &g.elements {
        let p = m.transpose() * *m;
        f[0] += p.a11;
        f[1] += p.a12;
        f[2] += p.a21;
        f[3] += p.a22;
    }
    f
}

fn gram(f: &[i64; 4], q: &IntMatrix2) -> (i64, i64, i64) {
    let (a, b, c) = (f[0], f[1], f[3]);
    let quad = |x: i64, y: i64| a * x * x + 2 * b * x * y + c * y * y;
    let bil = |x1: i64, y1: i64, x2: i64, y2: i64| a * x1 * x2 + b * (x1 * y2 + y1 * x2) + c * y1 * y2;
    (quad(q.a11, q.a21), bil(q.a11, q.a21, q.a12, q.a22), quad(q.a12, q.a22))
}

/// Lagrange–Gauss reduction: returns `Q` whose columns form a reduced basis
/// for the form `f`.
pub fn reduce_form(f: &[i64; 4]) -> IntMatrix2 {
    let mut q = IntMatrix2::IDENTITY;
    loop {
        let (n1, b, n2) = gram(f, &q);
        if n2 < n1 {
            q = IntMatrix2 { a11: q.a12, a12: q.a11, a21: q.a22, a22: q.a21 };
            continue;
        }
        let mu = (2 * b + n1).div_euclid(2 * n1);
        if mu == 0 {
            return q;
        }
        q = IntMatrix2 { a11: q.a11, a12: q.a12 - mu * q.a11, a21: q.a21, a22: q.a22 - mu * q.a21 };
    }
}

fn finishing_transforms() -> Vec<IntMatrix2> {
    let mut out = Vec::new();
    for a in -3..=3 {
        for b in -3..=3 {
            for c in -3..=3 {
                for d in -3..=3 {
                    if let Ok(m) = IntMatrix2::new(a, b, c, d) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out.sort_by_key(|m| (m.to_row_major().iter().map(|e| e.abs()).sum::<i64>(), *m));
    out
}

/// Label and conjugator `P` with `P·G·P⁻¹` equal to the representative.
pub fn classify(g: &FiniteMatrixGroup) -> Result<(ConjugacyLabel, IntMatrix2), GlzError> {
    let candidates: Vec<(ConjugacyLabel, FiniteMatrixGroup)> = ConjugacyLabel::ALL
        .into_iter()
        .filter(|l| l.order() == g.order())
        .map(|l| (l, l.representative()))
        .collect();
    for (l, rep) in &candidates {
        if rep.same_elements(g) {
            return Ok((*l, IntMatrix2::IDENTITY));
        }
    }
    let q = reduce_form(&invariant_form(g));
    let reduced = g.conjugate_by(&q.inverse());
    for r in finishing_transforms() {
        let h = reduced.conjugate_by(&r);
        for (l, rep) in &candidates {
            if rep.same_elements(&h) {
                let p = r * q.inverse();
                debug_assert!(g.conjugate_by(&p).same_elements(rep));
                return Ok((*l, p));
            }
        }
    }
    Err(GlzError::ClassificationFailed)
}

/// Normal subgroups of the representative, named as in the classification
/// table.
pub fn normal_subgroup_table(label: ConjugacyLabel) -> Vec<(&'static str, FiniteMatrixGroup)> {
    use ConjugacyLabel::*;
    use IntMatrix2 as M;
    let (l, t, s, r, mi) = (M::LAMBDA, M::TAU, M::SIGMA, M::RHO, M::MINUS_I);
    let rows: Vec<(&'static str, Vec<IntMatrix2>)> = match label {
        C1 => vec![("1", vec![])],
        C2_1 => vec![("1", vec![]), ("-I", vec![mi])],
        C2_2 => vec![("1", vec![]), ("lambda", vec![l])],
        C2_3 => vec![("1", vec![]), ("tau", vec![t])],
        C3 => vec![("1", vec![]), ("rho^2", vec![r.pow(2)])],
        C4 => vec![("1", vec![]), ("sigma^2", vec![s.pow(2)]), ("sigma", vec![s])],
        C6 => vec![("1", vec![]), ("rho^3", vec![r.pow(3)]), ("rho^2", vec![r.pow(2)]), ("rho", vec![r])],
        V4_1 => vec![
            ("1", vec![]),
            ("-I", vec![mi]),
            ("lambda", vec![l]),
            ("-lambda", vec![l.neg()]),
            ("lambda,-I", vec![l, mi]),
        ],
        V4_2 => vec![
            ("1", vec![]),
            ("-I", vec![mi]),
            ("tau", vec![t]),
            ("-tau", vec![t.neg()]),
            ("tau,-I", vec![t, mi]),
        ],
        S3_1 => vec![("1", vec![]), ("rho^2", vec![r.pow(2)]), ("rho^2,tau", vec![r.pow(2), t])],
        S3_2 => vec![("1", vec![]), ("rho^2", vec![r.pow(2)]), ("rho^2,-tau", vec![r.pow(2), t.neg()])],
        D4 => vec![
            ("1", vec![]),
            ("-I", vec![mi]),
            ("-I,tau*sigma", vec![mi, t * s]),
            ("-I,tau", vec![mi, t]),
            ("sigma", vec![s]),
            ("sigma,tau", vec![s, t]),
        ],
        D6 => vec![
            ("1", vec![]),
            ("-I", vec![mi]),
            ("rho^2", vec![r.pow(2)]),
            ("rho", vec![r]),
            ("rho^2,tau", vec![r.pow(2), t]),
            ("rho^2,-tau", vec![r.pow(2), t.neg()]),
            ("rho,tau", vec![r, t]),
        ],
    };
    rows.into_iter()
        .map(|(name, gens)| (name, close_group(&gens).expect("table subgroups are finite")))
        .collect()
}

pub fn normal_subgroups(label: ConjugacyLabel) -> Vec<FiniteMatrixGroup> {
    normal_subgroup_table(label).into_iter().map(|(_, h)| h).collect()
}

/// Looks up a normal subgroup by its table name; spaces, angle brackets and
/// `{1}` spellings are accepted.
pub fn normal_subgroup_by_name(label: ConjugacyLabel, name: &str) -> Option<(&'static str, FiniteMatrixGroup)> {
    let norm: String = name.chars().filter(|c| !" <>{}".contains(*c)).collect();
    let norm = match norm.as_str() {
        "I" | "trivial" => "1".to_string(),
        "G" => return normal_subgroup_table(label).pop(),
        _ => norm,
    };
    normal_subgroup_table(label).into_iter().find(|(n, _)| *n == norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_between_named_matrices() {
        use IntMatrix2 as M;
        assert_eq!(M::SIGMA.pow(2), M::MINUS_I);
        assert_eq!(M::RHO.pow(3), M::MINUS_I);
        assert_eq!(M::TAU * M::SIGMA, M::LAMBDA);
    }

    #[test]
    fn closure_examples() {
        assert_eq!(close_group(&[IntMatrix2::RHO]).unwrap().order(), 6);
        assert_eq!(close_group(&[IntMatrix2::IDENTITY]).unwrap().order(), 1);
        let u = IntMatrix2::new(1, 1, 0, 1).unwrap();
        assert_eq!(close_group(&[u]).unwrap_err(), GlzError::InfiniteGroup);
        assert!(matches!(IntMatrix2::new(2, 0, 0, 1), Err(GlzError::NotUnimodular(_))));
    }

    #[test]
    fn invariant_forms() {
        assert_eq!(invariant_form(&ConjugacyLabel::C1.representative()), [1, 0, 0, 1]);
        assert_eq!(invariant_form(&ConjugacyLabel::C2_1.representative()), [2, 0, 0, 2]);
        assert_eq!(invariant_form(&ConjugacyLabel::C2_3.representative()), [2, 0, 0, 2]);
    }

    #[test]
    fn classify_examples() {
        let g = close_group(&[IntMatrix2::MINUS_I]).unwrap();
        assert_eq!(classify(&g).unwrap(), (ConjugacyLabel::C2_1, IntMatrix2::IDENTITY));
        let g = close_group(&[IntMatrix2::new(1, 1, 0, -1).unwrap()]).unwrap();
        let (l, p) = classify(&g).unwrap();
        assert_eq!(l, ConjugacyLabel::C2_3);
        assert!(g.conjugate_by(&p).same_elements(&ConjugacyLabel::C2_3.representative()));
        let g = close_group(&[IntMatrix2::SIGMA, IntMatrix2::TAU]).unwrap();
        assert_eq!(classify(&g).unwrap(), (ConjugacyLabel::D4, IntMatrix2::IDENTITY));
    }

    #[test]
    fn label_parsing() {
        assert_eq!("C2_3".parse::<ConjugacyLabel>().unwrap(), ConjugacyLabel::C2_3);
        assert_eq!("v4_1".parse::<ConjugacyLabel>().unwrap(), ConjugacyLabel::V4_1);
        assert_eq!("C_2^{(1)}".parse::<ConjugacyLabel>().unwrap(), ConjugacyLabel::C2_1);
        assert!("C5".parse::<ConjugacyLabel>().is_err());
    }

    #[test]
    fn subgroup_lookup() {
        let (n, h) = normal_subgroup_by_name(ConjugacyLabel::C4, "<sigma^2>").unwrap();
        assert_eq!(n, "sigma^2");
        assert_eq!(h.order(), 2);
        assert_eq!(normal_subgroup_by_name(ConjugacyLabel::D4, "G").unwrap().1.order(), 8);
        assert_eq!(normal_subgroup_by_name(ConjugacyLabel::D4, "{1}").unwrap().1.order(), 1);
    }
}
