//! Measure JSON and coupling CSV.
//!
//! A measure document is
//! `{"space": <space>, "atoms": [...], "weights": [...]}` where `<space>`
//! is `"line"`, `{"dim": n}` or `{"n": n, "d": [[...]]}`. Numbers may be
//! JSON numbers or strings such as `"1/3"`; number literals are parsed from
//! their source text so exact mode reads `0.1` as `1/10`.

use std::sync::Arc;

use serde_json::{json, Map, Number, Value};

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::metric::{Euclidean, FiniteMetric, MetricSpace, RealLine};
use crate::scalar::{Mode, Order, Rational, Scalar};
use crate::transport::{optimal_coupling, Coupling};

/// A measure on one of the supported spaces, in either numeric mode.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMeasure {
    FloatLine(Measure<f64, RealLine>),
    FloatEuclid(Measure<f64, Euclidean>),
    FloatMatrix(Measure<f64, FiniteMetric<f64>>),
    ExactLine(Measure<Rational, RealLine>),
    ExactMatrix(Measure<Rational, FiniteMetric<Rational>>),
}

fn scalar<S: Scalar>(v: &Value) -> Result<S> {
    match v {
        Value::Number(n) => S::parse(&n.to_string()),
        Value::String(s) => S::parse(s),
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("'{what}' must be an array")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field '{key}'")))
}

fn weights<S: Scalar>(doc: &Map<String, Value>) -> Result<Vec<S>> {
    array(field(doc, "weights")?, "weights")?.iter().map(scalar).collect()
}

fn matrix_space<S: Scalar>(decl: &Map<String, Value>) -> Result<FiniteMetric<S>> {
    let rows = array(field(decl, "d")?, "d")?
        .iter()
        .map(|row| array(row, "d")?.iter().map(scalar).collect::<Result<Vec<S>>>())
        .collect::<Result<Vec<_>>>()?;
    if let Some(n) = decl.get("n") {
        let n = n
            .as_u64()
            .ok_or_else(|| Error::Parse("'n' must be a non-negative integer".into()))?;
        if n as usize != rows.len() {
            return Err(Error::InvalidMetric(format!("n = {n} but d has {} rows", rows.len())));
        }
    }
    FiniteMetric::new(rows)
}

fn index(v: &Value) -> Result<usize> {
    v.as_u64()
        .map(|i| i as usize)
        .ok_or_else(|| Error::Parse(format!("matrix atom {v} is not an index")))
}

fn euclid_point(v: &Value) -> Result<Vec<f64>> {
    array(v, "atoms")?.iter().map(scalar::<f64>).collect()
}

/// Parses a measure document.
pub fn parse_measure(text: &str, mode: Mode) -> Result<AnyMeasure> {
    let doc: Value = serde_json::from_str(text)?;
    let doc = doc
        .as_object()
        .ok_or_else(|| Error::Parse("a measure must be a JSON object".into()))?;
    let atoms = array(field(doc, "atoms")?, "atoms")?;
    match field(doc, "space")? {
        Value::String(s) if s == "line" => match mode {
            Mode::Float => {
                let pts = atoms.iter().map(scalar).collect::<Result<_>>()?;
                Ok(AnyMeasure::FloatLine(Measure::new(Arc::new(RealLine), pts, weights(doc)?)?))
            }
            Mode::Exact => {
                let pts = atoms.iter().map(scalar).collect::<Result<_>>()?;
                Ok(AnyMeasure::ExactLine(Measure::new(Arc::new(RealLine), pts, weights(doc)?)?))
            }
        },
        Value::Object(decl) if decl.contains_key("dim") => {
            if mode == Mode::Exact {
                return Err(Error::Unsupported("Euclidean spaces need float mode".into()));
            }
            let dim = decl["dim"]
                .as_u64()
                .ok_or_else(|| Error::Parse("'dim' must be a positive integer".into()))?;
            let pts = atoms.iter().map(euclid_point).collect::<Result<_>>()?;
            let space = Arc::new(Euclidean::new(dim as usize)?);
            Ok(AnyMeasure::FloatEuclid(Measure::new(space, pts, weights(doc)?)?))
        }
        Value::Object(decl) if decl.contains_key("d") => {
            let pts = atoms.iter().map(index).collect::<Result<Vec<_>>>()?;
            match mode {
                Mode::Float => {
                    let space = Arc::new(matrix_space(decl)?);
                    Ok(AnyMeasure::FloatMatrix(Measure::new(space, pts, weights(doc)?)?))
                }
                Mode::Exact => {
                    let space = Arc::new(matrix_space(decl)?);
                    Ok(AnyMeasure::ExactMatrix(Measure::new(space, pts, weights(doc)?)?))
                }
            }
        }
        other => Err(Error::Parse(format!("unknown space {other}"))),
    }
}

fn number<S: Scalar>(x: &S) -> Value {
    let text = x.render();
    text.parse::<Number>()
        .map(Value::Number)
        .unwrap_or(Value::String(text))
}

/// Rendering of points in CSV headers and JSON.
trait PointText<S: Scalar>: MetricSpace<S> {
    fn point_text(&self, x: &Self::Point) -> String;
    fn point_json(&self, x: &Self::Point) -> Value;
}

impl<S: Scalar> PointText<S> for RealLine {
    fn point_text(&self, x: &S) -> String {
        x.render()
    }
    fn point_json(&self, x: &S) -> Value {
        number(x)
    }
}

impl PointText<f64> for Euclidean {
    fn point_text(&self, x: &Vec<f64>) -> String {
        let parts: Vec<String> = x.iter().map(Scalar::render).collect();
        format!("[{}]", parts.join(","))
    }
    fn point_json(&self, x: &Vec<f64>) -> Value {
        Value::Array(x.iter().map(number).collect())
    }
}

impl<S: Scalar> PointText<S> for FiniteMetric<S> {
    fn point_text(&self, x: &usize) -> String {
        x.to_string()
    }
    fn point_json(&self, x: &usize) -> Value {
        json!(x)
    }
}

fn space_json<S: Scalar, M: MetricSpace<S> + 'static>(space: &M) -> Value {
    let any: &dyn std::any::Any = space;
    if any.is::<RealLine>() {
        json!("line")
    } else if let Some(e) = any.downcast_ref::<Euclidean>() {
        json!({ "dim": e.dim() })
    } else if let Some(f) = any.downcast_ref::<FiniteMetric<S>>() {
        let rows: Vec<Value> = f
            .rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(number).collect()))
            .collect();
        json!({ "n": f.len(), "d": rows })
    } else {
        Value::Null
    }
}

fn measure_json<S: Scalar, M: PointText<S> + 'static>(mu: &Measure<S, M>) -> Value {
    let space = mu.space();
    json!({
        "space": space_json::<S, M>(space),
        "atoms": mu.atoms().iter().map(|a| space.point_json(a)).collect::<Vec<_>>(),
        "weights": mu.weights().iter().map(number).collect::<Vec<_>>(),
    })
}

macro_rules! each {
    ($m:expr, $mu:ident => $body:expr) => {
        match $m {
            AnyMeasure::FloatLine($mu) => $body,
            AnyMeasure::FloatEuclid($mu) => $body,
            AnyMeasure::FloatMatrix($mu) => $body,
            AnyMeasure::ExactLine($mu) => $body,
            AnyMeasure::ExactMatrix($mu) => $body,
        }
    };
}

macro_rules! pair {
    ($a:expr, $b:expr, ($x:ident, $y:ident) => $body:expr) => {
        match ($a, $b) {
            (AnyMeasure::FloatLine($x), AnyMeasure::FloatLine($y)) => $body,
            (AnyMeasure::FloatEuclid($x), AnyMeasure::FloatEuclid($y)) => $body,
            (AnyMeasure::FloatMatrix($x), AnyMeasure::FloatMatrix($y)) => $body,
            (AnyMeasure::ExactLine($x), AnyMeasure::ExactLine($y)) => $body,
            (AnyMeasure::ExactMatrix($x), AnyMeasure::ExactMatrix($y)) => $body,
            _ => Err(Error::SpaceMismatch),
        }
    };
}

impl AnyMeasure {
    pub fn mode(&self) -> Mode {
        match self {
            AnyMeasure::ExactLine(_) | AnyMeasure::ExactMatrix(_) => Mode::Exact,
            _ => Mode::Float,
        }
    }

    pub fn space_name(&self) -> &'static str {
        match self {
            AnyMeasure::FloatLine(_) | AnyMeasure::ExactLine(_) => "line",
            AnyMeasure::FloatEuclid(_) => "euclidean",
            AnyMeasure::FloatMatrix(_) | AnyMeasure::ExactMatrix(_) => "matrix",
        }
    }

    pub fn len(&self) -> usize {
        each!(self, mu => mu.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn total_mass(&self) -> String {
        each!(self, mu => mu.total_mass().render())
    }

    /// The measure in the input format (coalesced, sorted).
    pub fn to_json(&self) -> String {
        each!(self, mu => measure_json(mu).to_string())
    }

    fn atom_texts(&self) -> Vec<String> {
        each!(self, mu => mu.atoms().iter().map(|a| mu.space().point_text(a)).collect())
    }
}

/// Result of `distance`/`coupling`, rendered for output.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportSummary {
    pub p: Order,
    pub mode: Mode,
    /// `W_p^p`, exact in exact mode.
    pub cost_p: String,
    pub wp: f64,
    pub coupling_csv: String,
}

fn coupling_csv<S: Scalar, M: PointText<S>>(c: &Coupling<S, M>) -> Result<String> {
    let (rows, cols) = (c.row_measure(), c.col_measure());
    let space = rows.space();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(cols.atoms().iter().map(|a| space.point_text(a)));
    w.write_record(&header)?;
    for (i, a) in rows.atoms().iter().enumerate() {
        let mut rec = vec![space.point_text(a)];
        rec.extend((0..cols.len()).map(|j| c.entry(i, j).render()));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

fn summarize<S: Scalar, M: PointText<S>>(a: &Measure<S, M>, b: &Measure<S, M>, p: Order) -> Result<TransportSummary> {
    let res = optimal_coupling(a, b, p)?;
    Ok(TransportSummary {
        p,
        mode: S::MODE,
        cost_p: res.cost_p.render(),
        wp: res.wp,
        coupling_csv: coupling_csv(&res.coupling)?,
    })
}

/// Optimal transport between two parsed measures.
pub fn transport(a: &AnyMeasure, b: &AnyMeasure, p: Order) -> Result<TransportSummary> {
    pair!(a, b, (x, y) => summarize(x, y, p))
}

/// A coupling read back from CSV, entries still as text.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTable {
    pub row_atoms: Vec<String>,
    pub col_atoms: Vec<String>,
    /// Row-major.
    pub entries: Vec<String>,
}

pub fn read_coupling_csv(text: &str) -> Result<CouplingTable> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut records = r.records();
    let header = records
        .next()
        .ok_or_else(|| Error::Parse("empty coupling file".into()))??;
    let col_atoms: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut row_atoms = Vec::new();
    let mut entries = Vec::new();
    for rec in records {
        let rec = rec?;
        if rec.len() != col_atoms.len() + 1 {
            return Err(Error::Parse(format!(
                "row {} has {} cells, expected {}",
                row_atoms.len() + 1,
                rec.len(),
                col_atoms.len() + 1
            )));
        }
        row_atoms.push(rec[0].to_string());
        entries.extend(rec.iter().skip(1).map(str::to_string));
    }
    if row_atoms.is_empty() || col_atoms.is_empty() {
        return Err(Error::InvalidCoupling("no rows or columns".into()));
    }
    Ok(CouplingTable {
        row_atoms,
        col_atoms,
        entries,
    })
}

fn check_table<S: Scalar>(table: &CouplingTable) -> Result<Vec<S>> {
    let values = table.entries.iter().map(|e| S::parse(e)).collect::<Result<Vec<S>>>()?;
    if let Some(x) = values.iter().find(|x| **x < S::zero()) {
        return Err(Error::InvalidCoupling(format!("entry {} is negative", x.render())));
    }
    let total = values.iter().cloned().fold(S::zero(), |a, b| a + b);
    if (total.clone() - S::one()).abs() > S::marginal_tolerance() {
        return Err(Error::InvalidCoupling(format!("entries sum to {}", total.render())));
    }
    Ok(values)
}

fn check_against<S: Scalar, M: MetricSpace<S>>(
    values: Vec<S>,
    mu: &Measure<S, M>,
    nu: &Measure<S, M>,
) -> Result<()> {
    Coupling::new(mu.clone(), nu.clone(), values).map(|_| ())
}

/// Checks a coupling table: nonnegative entries of total mass one and, when
/// `marginals` are given, matching atoms and row/column sums.
pub fn validate_coupling(table: &CouplingTable, mode: Mode, marginals: Option<(&AnyMeasure, &AnyMeasure)>) -> Result<()> {
    let floats = match mode {
        Mode::Float => Some(check_table::<f64>(table)?),
        Mode::Exact => {
            check_table::<Rational>(table)?;
            None
        }
    };
    let Some((mu, nu)) = marginals else {
        return Ok(());
    };
    if mu.atom_texts() != table.row_atoms {
        return Err(Error::InvalidCoupling("row atoms differ from the first marginal".into()));
    }
    if nu.atom_texts() != table.col_atoms {
        return Err(Error::InvalidCoupling("column atoms differ from the second marginal".into()));
    }
    match (floats, mu, nu) {
        (Some(v), AnyMeasure::FloatLine(a), AnyMeasure::FloatLine(b)) => check_against(v, a, b),
        (Some(v), AnyMeasure::FloatEuclid(a), AnyMeasure::FloatEuclid(b)) => check_against(v, a, b),
        (Some(v), AnyMeasure::FloatMatrix(a), AnyMeasure::FloatMatrix(b)) => check_against(v, a, b),
        (None, AnyMeasure::ExactLine(a), AnyMeasure::ExactLine(b)) => {
            check_against(check_table::<Rational>(table)?, a, b)
        }
        (None, AnyMeasure::ExactMatrix(a), AnyMeasure::ExactMatrix(b)) => {
            check_against(check_table::<Rational>(table)?, a, b)
        }
        _ => Err(Error::SpaceMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DELTA2: &str = r#"{"space": "line", "atoms": [2], "weights": [1]}"#;
    const DELTA5: &str = r#"{"space": "line", "atoms": [5], "weights": [1]}"#;

    #[test]
    fn dirac_distance_both_modes() {
        for mode in [Mode::Float, Mode::Exact] {
            let a = parse_measure(DELTA2, mode).unwrap();
            let b = parse_measure(DELTA5, mode).unwrap();
            let s = transport(&a, &b, Order::ONE).unwrap();
            assert_eq!(s.cost_p, "3");
            assert_eq!(s.wp, 3.0);
        }
    }

    #[test]
    fn exact_decimals_and_fractions() {
        let doc = r#"{"space": "line", "atoms": [0.1, "1/3"], "weights": [0.7, "3/10"]}"#;
        let AnyMeasure::ExactLine(m) = parse_measure(doc, Mode::Exact).unwrap() else {
            panic!("expected an exact line measure");
        };
        assert_eq!(m.atoms(), &[Rational::from_ratio(1, 10), Rational::from_ratio(1, 3)]);
        assert_eq!(m.weights(), &[Rational::from_ratio(7, 10), Rational::from_ratio(3, 10)]);
    }

    #[test]
    fn normalization_error() {
        let bad = r#"{"space": "line", "atoms": [0, 1], "weights": [0.5, 0.4]}"#;
        for mode in [Mode::Float, Mode::Exact] {
            assert!(matches!(parse_measure(bad, mode), Err(Error::Normalization(_))));
        }
    }

    #[test]
    fn matrix_and_euclid_spaces() {
        let m = r#"{"space": {"n": 3, "d": [[0,1,2],[1,0,1],[2,1,0]]}, "atoms": [0, 2], "weights": ["1/2", "1/2"]}"#;
        let n = r#"{"space": {"n": 3, "d": [[0,1,2],[1,0,1],[2,1,0]]}, "atoms": [1], "weights": [1]}"#;
        let (a, b) = (parse_measure(m, Mode::Exact).unwrap(), parse_measure(n, Mode::Exact).unwrap());
        assert_eq!(transport(&a, &b, Order::TWO).unwrap().cost_p, "1");
        let bad = r#"{"space": {"n": 3, "d": [[0,5,1],[5,0,1],[1,1,0]]}, "atoms": [0], "weights": [1]}"#;
        assert!(matches!(parse_measure(bad, Mode::Float), Err(Error::InvalidMetric(_))));
        let e = r#"{"space": {"dim": 2}, "atoms": [[0, 0], [3, 4]], "weights": [0.5, 0.5]}"#;
        let o = r#"{"space": {"dim": 2}, "atoms": [[0, 0]], "weights": [1]}"#;
        let (a, b) = (parse_measure(e, Mode::Float).unwrap(), parse_measure(o, Mode::Float).unwrap());
        assert_eq!(transport(&a, &b, Order::ONE).unwrap().wp, 2.5);
        assert!(matches!(parse_measure(e, Mode::Exact), Err(Error::Unsupported(_))));
        assert!(matches!(transport(&a, &parse_measure(DELTA2, Mode::Float).unwrap(), Order::ONE), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn json_round_trip() {
        let docs = [
            r#"{"space": "line", "atoms": [0.1, 0.7, 0.1], "weights": [0.25, 0.5, 0.25]}"#,
            r#"{"space": {"dim": 2}, "atoms": [[0.5, 0.25], [1, 2]], "weights": [0.5, 0.5]}"#,
            r#"{"space": {"n": 2, "d": [[0, 0.5], [0.5, 0]]}, "atoms": [1, 0], "weights": [0.75, 0.25]}"#,
        ];
        for doc in docs {
            for mode in [Mode::Float, Mode::Exact] {
                let Ok(m) = parse_measure(doc, mode) else { continue };
                assert_eq!(parse_measure(&m.to_json(), mode).unwrap(), m);
            }
        }
    }

    #[test]
    fn coupling_csv_round_trip() {
        let a = r#"{"space": "line", "atoms": [0, 1, 2], "weights": ["1/3", "1/3", "1/3"]}"#;
        let b = r#"{"space": "line", "atoms": [0.5, 1.5], "weights": ["1/2", "1/2"]}"#;
        for mode in [Mode::Float, Mode::Exact] {
            let (x, y) = (parse_measure(a, mode).unwrap(), parse_measure(b, mode).unwrap());
            let s = transport(&x, &y, Order::TWO).unwrap();
            let table = read_coupling_csv(&s.coupling_csv).unwrap();
            assert_eq!(table.row_atoms.len(), 3);
            validate_coupling(&table, mode, Some((&x, &y))).unwrap();
            assert!(validate_coupling(&table, mode, Some((&y, &x))).is_err());
        }
        let exact = transport(
            &parse_measure(a, Mode::Exact).unwrap(),
            &parse_measure(b, Mode::Exact).unwrap(),
            Order::TWO,
        )
        .unwrap();
        assert!(exact.coupling_csv.contains("1/3") && exact.coupling_csv.contains("1/6"));
    }

    #[test]
    fn broken_coupling_tables() {
        assert!(read_coupling_csv("").is_err());
        let t = read_coupling_csv(",0,1\n0,0.5,0.6\n").unwrap();
        assert!(validate_coupling(&t, Mode::Float, None).is_err());
        let t = read_coupling_csv(",0,1\n0,-0.5,1.5\n").unwrap();
        assert!(validate_coupling(&t, Mode::Exact, None).is_err());
        assert!(read_coupling_csv(",0,1\n0,1\n").is_err());
    }
}
