//! JSON document types for core objects. Exact scalars travel as strings
//! (`"3/4"`, `"1/2-2 i"`); polynomials as `[exponents, coefficient]` term lists.

use std::fmt::Display;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use spheremap_core::bounds::{GroupBound, QBound, Rule, TableRow, WitnessId};
use spheremap_core::hodge::EquivarianceReport;
use spheremap_core::hopf::{ChainName, CliffordSystem, NormedBilinear};
use spheremap_core::linalg::Matrix;
use spheremap_core::maps::{Field, Group, MatrixPolyMap, PolynomialMap, SphereMap};
use spheremap_core::scalar::{parse_rational, Coeff};
use spheremap_core::wilson::{parse_word, word_to_string, ClassEntry, ClassWord, Collision, FlatBundle, SchottkyGroup};
use spheremap_core::{Error, GaussianRational, MultiPoly, Rational};

use crate::CliError;

/// Coefficients with an exact text form.
pub trait TextCoeff: Coeff + Display {
    fn parse_text(s: &str) -> Result<Self, Error>;
}

impl TextCoeff for Rational {
    fn parse_text(s: &str) -> Result<Self, Error> {
        parse_rational(s)
    }
}

impl TextCoeff for GaussianRational {
    fn parse_text(s: &str) -> Result<Self, Error> {
        GaussianRational::from_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub nvars: usize,
    pub terms: Vec<(Vec<u16>, String)>,
}

impl PolyDoc {
    pub fn from_poly<C: TextCoeff>(p: &MultiPoly<C>) -> Self {
        PolyDoc { nvars: p.nvars(), terms: p.terms().iter().map(|(m, c)| (m.exps().to_vec(), c.to_string())).collect() }
    }

    pub fn to_poly<C: TextCoeff>(&self) -> Result<MultiPoly<C>, Error> {
        let terms =
            self.terms.iter().map(|(e, c)| Ok((e.clone(), C::parse_text(c)?))).collect::<Result<Vec<_>, Error>>()?;
        MultiPoly::from_terms(self.nvars, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereMapDoc {
    pub source_dim: usize,
    pub target_dim: usize,
    pub coords: Vec<PolyDoc>,
}

impl From<&SphereMap> for SphereMapDoc {
    fn from(f: &SphereMap) -> Self {
        SphereMapDoc {
            source_dim: f.source_dim(),
            target_dim: f.target_dim(),
            coords: f.coords().iter().map(PolyDoc::from_poly).collect(),
        }
    }
}

impl SphereMapDoc {
    pub fn to_map(&self) -> Result<SphereMap, Error> {
        if self.coords.len() != self.target_dim + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for target S^{}",
                self.coords.len(),
                self.target_dim
            )));
        }
        let coords = self.coords.iter().map(PolyDoc::to_poly).collect::<Result<Vec<_>, _>>()?;
        SphereMap::new(self.source_dim, coords)
    }
}

fn matrix_doc<T: Clone, D>(m: &Matrix<T>, f: impl Fn(&T) -> D) -> Vec<Vec<D>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(&f).collect()).collect()
}

fn matrix_from_doc<T: Clone, D>(rows: &[Vec<D>], f: impl Fn(&D) -> Result<T, Error>) -> Result<Matrix<T>, Error> {
    let rows = rows.iter().map(|r| r.iter().map(&f).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixMapDoc {
    pub source_dim: usize,
    pub group: String,
    pub entries: Vec<Vec<PolyDoc>>,
    pub det_correction: Option<String>,
}

impl MatrixMapDoc {
    pub fn from_map<C: TextCoeff>(m: &MatrixPolyMap<C>) -> Self {
        MatrixMapDoc {
            source_dim: m.source_dim(),
            group: m.group().name().to_string(),
            entries: matrix_doc(m.entries(), PolyDoc::from_poly),
            det_correction: m.det_correction().map(ToString::to_string),
        }
    }

    pub fn to_map<C: TextCoeff>(&self) -> Result<MatrixPolyMap<C>, Error> {
        let entries = matrix_from_doc(&self.entries, PolyDoc::to_poly)?;
        let corr = self.det_correction.as_deref().map(C::parse_text).transpose()?;
        Ok(MatrixPolyMap::new(self.source_dim, Group::from_name(&self.group)?, entries)?.with_det_correction(corr))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordDoc {
    pub dim: usize,
    pub structures: Vec<Vec<Vec<i64>>>,
}

impl From<&CliffordSystem> for CliffordDoc {
    fn from(cs: &CliffordSystem) -> Self {
        CliffordDoc { dim: cs.dim(), structures: cs.structures().iter().map(|m| matrix_doc(m, |x| *x)).collect() }
    }
}

impl CliffordDoc {
    pub fn to_system(&self) -> Result<CliffordSystem, Error> {
        let structures =
            self.structures.iter().map(|m| matrix_from_doc(m, |x| Ok(*x))).collect::<Result<Vec<_>, _>>()?;
        CliffordSystem::new(self.dim, structures)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormedDoc {
    pub r: usize,
    pub s: usize,
    pub t: usize,
    /// Coefficient of `x_i y_j` in component `k` at index `(k r + i) s + j`.
    pub tensor: Vec<String>,
}

impl From<&NormedBilinear> for NormedDoc {
    fn from(f: &NormedBilinear) -> Self {
        let (r, s, t) = f.dims();
        NormedDoc { r, s, t, tensor: f.tensor().iter().map(ToString::to_string).collect() }
    }
}

impl NormedDoc {
    pub fn to_bilinear(&self) -> Result<NormedBilinear, Error> {
        let tensor = self.tensor.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>, _>>()?;
        NormedBilinear::new(self.r, self.s, self.t, tensor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessDoc {
    Identity { n: usize },
    Hopf { m: usize, n: usize },
    OddFibration { k: usize },
    Chain { chain: String, n: usize },
}

impl From<&WitnessId> for WitnessDoc {
    fn from(w: &WitnessId) -> Self {
        match *w {
            WitnessId::Identity { n } => WitnessDoc::Identity { n },
            WitnessId::Hopf { m, n } => WitnessDoc::Hopf { m, n },
            WitnessId::OddFibration { k } => WitnessDoc::OddFibration { k },
            WitnessId::Chain { chain, n } => WitnessDoc::Chain { chain: chain.name().to_string(), n },
        }
    }
}

impl WitnessDoc {
    pub fn to_id(&self) -> Result<WitnessId, Error> {
        Ok(match self {
            WitnessDoc::Identity { n } => WitnessId::Identity { n: *n },
            WitnessDoc::Hopf { m, n } => WitnessId::Hopf { m: *m, n: *n },
            WitnessDoc::OddFibration { k } => WitnessId::OddFibration { k: *k },
            WitnessDoc::Chain { chain, n } => WitnessId::Chain { chain: ChainName::from_name(chain)?, n: *n },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QBoundDoc {
    pub n: usize,
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub witness: Option<WitnessDoc>,
    pub witness_label: Option<String>,
    pub provenance: Vec<String>,
}

impl From<&QBound> for QBoundDoc {
    fn from(q: &QBound) -> Self {
        QBoundDoc {
            n: q.n,
            lower: q.lower,
            upper: q.upper,
            exact: q.exact,
            witness: q.witness.as_ref().map(WitnessDoc::from),
            witness_label: q.witness.as_ref().map(WitnessId::label),
            provenance: q.provenance.iter().map(|r| r.tag().to_string()).collect(),
        }
    }
}

impl QBoundDoc {
    pub fn to_bound(&self) -> Result<QBound, Error> {
        Ok(QBound {
            n: self.n,
            lower: self.lower,
            upper: self.upper,
            exact: self.exact,
            witness: self.witness.as_ref().map(WitnessDoc::to_id).transpose()?,
            provenance: self.provenance.iter().map(|t| Rule::from_tag(t)).collect::<Result<_, _>>()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalDoc {
    pub group: String,
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
}

impl From<&GroupBound> for IntervalDoc {
    fn from(g: &GroupBound) -> Self {
        IntervalDoc { group: g.group.label(), lower: g.lower, upper: g.upper, exact: g.exact }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRowDoc {
    pub q: QBoundDoc,
    pub q_so: IntervalDoc,
    pub q_u: IntervalDoc,
    pub m_r: (usize, usize),
    pub m_c: (usize, usize),
}

impl From<&TableRow> for TableRowDoc {
    fn from(r: &TableRow) -> Self {
        TableRowDoc {
            q: QBoundDoc::from(&r.q),
            q_so: IntervalDoc::from(&r.q_so),
            q_u: IntervalDoc::from(&r.q_u),
            m_r: r.m_r,
            m_c: r.m_c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivarianceDoc {
    pub trials: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeReportDoc {
    pub dim: usize,
    pub seed: u64,
    pub isometry: bool,
    pub equivariance: EquivarianceDoc,
    pub exterior_power_orthogonal: bool,
    /// Only defined in dimension 4.
    pub fiber_map_matches_hopf: Option<bool>,
}

impl HodgeReportDoc {
    pub fn new(dim: usize, seed: u64, r: &EquivarianceReport, fiber: Option<bool>) -> Self {
        HodgeReportDoc {
            dim,
            seed,
            isometry: r.isometry_failures == 0,
            equivariance: EquivarianceDoc { trials: r.trials, failures: r.failures },
            exterior_power_orthogonal: r.lambda_failures == 0,
            fiber_map_matches_hopf: fiber,
        }
    }

    pub fn pass(&self) -> bool {
        self.isometry
            && self.equivariance.failures == 0
            && self.exterior_power_orthogonal
            && self.fiber_map_matches_hopf != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub generators: Vec<Vec<Vec<String>>>,
}

impl From<&SchottkyGroup> for GroupDoc {
    fn from(g: &SchottkyGroup) -> Self {
        GroupDoc { generators: g.generators().iter().map(|m| matrix_doc(m, ToString::to_string)).collect() }
    }
}

impl GroupDoc {
    pub fn to_group(&self) -> Result<SchottkyGroup, Error> {
        let gens =
            self.generators.iter().map(|m| matrix_from_doc(m, |s| parse_rational(s))).collect::<Result<Vec<_>, _>>()?;
        SchottkyGroup::new(gens)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleDoc {
    /// `"R"` or `"C"`.
    pub field: String,
    pub images: Vec<Vec<Vec<String>>>,
}

pub fn field_name(f: Field) -> &'static str {
    match f {
        Field::Real => "R",
        Field::Complex => "C",
    }
}

pub fn field_from_name(s: &str) -> Result<Field, Error> {
    match s {
        "R" => Ok(Field::Real),
        "C" => Ok(Field::Complex),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

impl From<&FlatBundle> for BundleDoc {
    fn from(b: &FlatBundle) -> Self {
        BundleDoc {
            field: field_name(b.field()).to_string(),
            images: b.images().iter().map(|m| matrix_doc(m, ToString::to_string)).collect(),
        }
    }
}

impl BundleDoc {
    pub fn to_bundle(&self) -> Result<FlatBundle, Error> {
        let images = self
            .images
            .iter()
            .map(|m| matrix_from_doc(m, |s| GaussianRational::from_str(s)))
            .collect::<Result<Vec<_>, _>>()?;
        FlatBundle::new(field_from_name(&self.field)?, images)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassEntryDoc {
    pub word: String,
    pub primitive: bool,
    pub root: String,
    pub exponent: usize,
    pub length: f64,
    pub primitive_length: f64,
    pub wilson: String,
    pub dg_coeff: (f64, f64),
}

impl From<&ClassEntry> for ClassEntryDoc {
    fn from(e: &ClassEntry) -> Self {
        ClassEntryDoc {
            word: word_to_string(&e.class.word),
            primitive: e.primitive(),
            root: word_to_string(&e.class.root),
            exponent: e.class.exponent,
            length: e.length,
            primitive_length: e.primitive_length,
            wilson: e.wilson.to_string(),
            dg_coeff: e.dg_coeff,
        }
    }
}

impl ClassEntryDoc {
    pub fn to_entry(&self) -> Result<ClassEntry, Error> {
        let class = ClassWord::new(&parse_word(&self.word)?)?;
        if word_to_string(&class.word) != self.word {
            return Err(Error::Parse(format!("`{}` is not a canonical class word", self.word)));
        }
        Ok(ClassEntry {
            class,
            length: self.length,
            primitive_length: self.primitive_length,
            wilson: GaussianRational::from_str(&self.wilson)?,
            dg_coeff: self.dg_coeff,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollisionDoc {
    pub first: String,
    pub second: String,
    pub gap: f64,
}

impl From<&Collision> for CollisionDoc {
    fn from(c: &Collision) -> Self {
        CollisionDoc { first: word_to_string(&c.first), second: word_to_string(&c.second), gap: c.gap }
    }
}

/// Parses a JSON document, mapping failures to input errors.
pub fn from_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed {what}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use spheremap_core::hopf::{clifford_system, normed_bilinear_from_clifford, odd_sphere_fibration};
    use spheremap_core::maps::reflection_map;
    use spheremap_core::wilson::{enumerate_classes, evaluate_classes, perturbed_example};

    fn round_trip<T: Serialize + serde::de::DeserializeOwned + PartialEq + std::fmt::Debug>(doc: &T) {
        let text = serde_json::to_string(doc).unwrap();
        let back: T = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, doc);
    }

    #[test]
    fn sphere_map_round_trip() {
        let f = odd_sphere_fibration(1).unwrap();
        let doc = SphereMapDoc::from(&f);
        round_trip(&doc);
        assert_eq!(doc.to_map().unwrap(), f);
    }

    #[test]
    fn matrix_map_round_trip() {
        let m = reflection_map::<Rational>(3).unwrap();
        let doc = MatrixMapDoc::from_map(&m);
        round_trip(&doc);
        assert_eq!(doc.to_map::<Rational>().unwrap(), m);
        let u = reflection_map::<GaussianRational>(2).unwrap();
        let doc = MatrixMapDoc::from_map(&u);
        assert_eq!(doc.to_map::<GaussianRational>().unwrap(), u);
    }

    #[test]
    fn clifford_and_normed_round_trip() {
        let cs = clifford_system(16);
        let doc = CliffordDoc::from(&cs);
        round_trip(&doc);
        assert_eq!(doc.to_system().unwrap(), cs);
        let f = normed_bilinear_from_clifford(&clifford_system(8)).unwrap();
        let doc = NormedDoc::from(&f);
        round_trip(&doc);
        assert_eq!(doc.to_bilinear().unwrap(), f);
    }

    #[test]
    fn witness_round_trip() {
        for w in [
            WitnessId::Identity { n: 3 },
            WitnessId::Hopf { m: 4, n: 6 },
            WitnessId::OddFibration { k: 2 },
            WitnessId::Chain { chain: ChainName::S31ToS16, n: 25 },
        ] {
            let doc = WitnessDoc::from(&w);
            round_trip(&doc);
            assert_eq!(doc.to_id().unwrap(), w);
        }
    }

    #[test]
    fn group_bundle_and_entries_round_trip() {
        let g = perturbed_example();
        let doc = GroupDoc::from(&g);
        round_trip(&doc);
        assert_eq!(doc.to_group().unwrap(), g);
        let b = FlatBundle::random_unitary(2, 2, 5);
        let doc = BundleDoc::from(&b);
        round_trip(&doc);
        assert_eq!(doc.to_bundle().unwrap(), b);
        let entries = evaluate_classes(&g, &b, &enumerate_classes(2, 3).unwrap()).unwrap();
        for e in &entries {
            let doc = ClassEntryDoc::from(e);
            round_trip(&doc);
            assert_eq!(&doc.to_entry().unwrap(), e);
        }
    }

    #[test]
    fn bad_scalars_are_rejected() {
        let doc = PolyDoc { nvars: 1, terms: vec![(vec![1], "x/2".into())] };
        assert!(doc.to_poly::<Rational>().is_err());
        let doc = BundleDoc { field: "Q".into(), images: vec![] };
        assert!(doc.to_bundle().is_err());
    }
}
