//! Logged signals, integral criteria and their file formats.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observers::ObserverVariant;

/// How the integral criteria are reported.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriteriaScale {
    /// Raw integrals over the run.
    #[default]
    Integral,
    /// Integrals divided by the run length.
    Mean,
}

impl CriteriaScale {
    pub fn tag(&self) -> &'static str {
        match self {
            CriteriaScale::Integral => "integral",
            CriteriaScale::Mean => "mean",
        }
    }
}

impl std::str::FromStr for CriteriaScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "integral" => Ok(CriteriaScale::Integral),
            "mean" => Ok(CriteriaScale::Mean),
            other => Err(Error::config(
                "sim.criteria_scale",
                format!("expected `integral` or `mean`, got `{other}`"),
            )),
        }
    }
}

/// `J_e = ∫|e|`, `J_u = ∫τ²`, `J_f = ∫|f − f̂|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Criteria {
    pub je: f64,
    pub ju: f64,
    pub jf: f64,
}

/// Uniformly sampled signals of one run. `edot` is the true error rate; it is
/// not part of the CSV schema and is rebuilt by differencing when loaded.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Series {
    pub t: Vec<f64>,
    pub q: Vec<f64>,
    pub q_d: Vec<f64>,
    pub e: Vec<f64>,
    pub edot: Vec<f64>,
    pub y: Vec<f64>,
    pub e_hat: Vec<f64>,
    pub edot_hat: Vec<f64>,
    pub f_hat: Vec<f64>,
    pub f_true: Vec<f64>,
    pub tau: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    t: f64,
    q: f64,
    q_d: f64,
    e: f64,
    y: f64,
    e_hat: f64,
    edot_hat: f64,
    f_hat: f64,
    f_true: f64,
    tau: f64,
}

pub const CSV_HEADER: &str = "t,q,q_d,e,y,e_hat,edot_hat,f_hat,f_true,tau";

impl Series {
    pub fn with_capacity(n: usize) -> Self {
        let v = || Vec::with_capacity(n);
        Series {
            t: v(),
            q: v(),
            q_d: v(),
            e: v(),
            edot: v(),
            y: v(),
            e_hat: v(),
            edot_hat: v(),
            f_hat: v(),
            f_true: v(),
            tau: v(),
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Sample spacing, taken from the first interval.
    pub fn dt(&self) -> Result<f64> {
        if self.t.len() < 2 {
            return Err(Error::SeriesTooShort {
                needed: 2,
                found: self.t.len(),
            });
        }
        Ok(self.t[1] - self.t[0])
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        self.write_rows(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        self.write_rows(&mut w)?;
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
    }

    fn write_rows<W: std::io::Write>(&self, w: &mut csv::Writer<W>) -> Result<()> {
        if self.is_empty() {
            w.write_record(CSV_HEADER.split(','))?;
        }
        for k in 0..self.len() {
            w.serialize(CsvRow {
                t: self.t[k],
                q: self.q[k],
                q_d: self.q_d[k],
                e: self.e[k],
                y: self.y[k],
                e_hat: self.e_hat[k],
                edot_hat: self.edot_hat[k],
                f_hat: self.f_hat[k],
                f_true: self.f_true[k],
                tau: self.tau[k],
            })?;
        }
        Ok(())
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let rdr = csv::Reader::from_path(path)?;
        Series::from_reader(rdr)
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        Series::from_reader(csv::Reader::from_reader(s.as_bytes()))
    }

    fn from_reader<R: std::io::Read>(mut rdr: csv::Reader<R>) -> Result<Self> {
        let header = rdr.headers()?.clone();
        for name in CSV_HEADER.split(',') {
            if !header.iter().any(|h| h == name) {
                return Err(Error::MissingSignal(name.to_string()));
            }
        }
        let mut s = Series::default();
        for row in rdr.deserialize() {
            let r: CsvRow = row?;
            s.t.push(r.t);
            s.q.push(r.q);
            s.q_d.push(r.q_d);
            s.e.push(r.e);
            s.y.push(r.y);
            s.e_hat.push(r.e_hat);
            s.edot_hat.push(r.edot_hat);
            s.f_hat.push(r.f_hat);
            s.f_true.push(r.f_true);
            s.tau.push(r.tau);
        }
        if s.len() >= 5 {
            s.edot = five_point_derivative(&s.e, s.dt()?)?;
        }
        Ok(s)
    }

    /// Samples with `t ≥ from`.
    pub fn tail_from(&self, from: f64) -> Series {
        let start = self.t.partition_point(|&t| t < from);
        let cut = |v: &Vec<f64>| v.get(start..).map(<[f64]>::to_vec).unwrap_or_default();
        Series {
            t: cut(&self.t),
            q: cut(&self.q),
            q_d: cut(&self.q_d),
            e: cut(&self.e),
            edot: cut(&self.edot),
            y: cut(&self.y),
            e_hat: cut(&self.e_hat),
            edot_hat: cut(&self.edot_hat),
            f_hat: cut(&self.f_hat),
            f_true: cut(&self.f_true),
            tau: cut(&self.tau),
        }
    }
}

/// Trapezoidal integral of samples `v` over abscissae `t`.
pub fn trapezoid(t: &[f64], v: &[f64]) -> f64 {
    t.windows(2)
        .zip(v.windows(2))
        .map(|(tw, vw)| 0.5 * (tw[1] - tw[0]) * (vw[0] + vw[1]))
        .sum()
}

/// Integral criteria of a series.
pub fn criteria(s: &Series, scale: CriteriaScale) -> Result<Criteria> {
    if s.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            found: s.len(),
        });
    }
    let abs_e: Vec<f64> = s.e.iter().map(|e| e.abs()).collect();
    let tau2: Vec<f64> = s.tau.iter().map(|u| u * u).collect();
    let abs_f: Vec<f64> = s.f_true.iter().zip(&s.f_hat).map(|(f, fh)| (f - fh).abs()).collect();
    let norm = match scale {
        CriteriaScale::Integral => 1.0,
        CriteriaScale::Mean => s.t[s.len() - 1] - s.t[0],
    };
    Ok(Criteria {
        je: trapezoid(&s.t, &abs_e) / norm,
        ju: trapezoid(&s.t, &tau2) / norm,
        jf: trapezoid(&s.t, &abs_f) / norm,
    })
}

/// Derivative of uniformly sampled data: five-point central stencil inside,
/// second-order one-sided stencils at the two samples nearest each end.
pub fn five_point_derivative(v: &[f64], dt: f64) -> Result<Vec<f64>> {
    let n = v.len();
    if n < 5 {
        return Err(Error::SeriesTooShort { needed: 5, found: n });
    }
    let mut d = vec![0.0; n];
    for k in 2..n - 2 {
        d[k] = (v[k - 2] - 8.0 * v[k - 1] + 8.0 * v[k + 1] - v[k + 2]) / (12.0 * dt);
    }
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dt);
    d[1] = (v[2] - v[0]) / (2.0 * dt);
    d[n - 2] = (v[n - 1] - v[n - 3]) / (2.0 * dt);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dt);
    Ok(d)
}

/// Identification of the run that produced a series.
#[derive(Clone, Debug, PartialEq)]
pub struct RunMeta {
    pub observer: ObserverVariant,
    pub omega_o: f64,
    pub seed: u64,
    pub dt: f64,
    pub t_sim: f64,
    pub criteria_scale: CriteriaScale,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub meta: RunMeta,
    pub series: Series,
    /// `None` when the run diverged.
    pub criteria: Option<Criteria>,
    /// Time at which the state left the finite range, if it did.
    pub diverged_at: Option<f64>,
}

impl RunRecord {
    pub fn diverged(&self) -> bool {
        self.diverged_at.is_some()
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        let m = &self.meta;
        s.set("observer", m.observer.tag());
        s.set("observer_label", m.observer.label());
        s.set("omega_o", m.omega_o);
        s.set("seed", m.seed);
        s.set("dt", m.dt);
        s.set("t_sim", m.t_sim);
        s.set("criteria_scale", m.criteria_scale.tag());
        s.set("diverged", self.diverged());
        if let Some(t) = self.diverged_at {
            s.set("diverged_at", t);
        }
        match self.criteria {
            Some(c) => {
                s.set("J_e", c.je);
                s.set("J_u", c.ju);
                s.set("J_f", c.jf);
            }
            None => {
                for k in ["J_e", "J_u", "J_f"] {
                    s.set(k, "invalid");
                }
            }
        }
        s
    }

    /// Writes `run.csv` and `summary.txt` into `dir`.
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        self.series.write_csv(dir.join("run.csv"))?;
        self.summary().write(dir.join("summary.txt"))
    }
}

/// Ordered `key = value` lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Summary {
    entries: Vec<(String, String)>,
}

impl Summary {
    pub fn set(&mut self, key: &str, value: impl fmt::Display) {
        let value = value.to_string();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Result<f64> {
        let raw = self.get(key).ok_or_else(|| Error::MissingSignal(key.to_string()))?;
        raw.parse()
            .map_err(|_| Error::config(key, format!("not a number: `{raw}`")))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Summary::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("summary line {}", i + 1), "expected `key = value`")
            })?;
            s.set(k.trim(), v.trim());
        }
        Ok(s)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Summary::parse(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = fs::File::create(path)?;
        f.write_all(self.to_string().as_bytes())?;
        Ok(())
    }

    pub fn as_map(&self) -> BTreeMap<&str, &str> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect()
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize, dt: f64, f: impl Fn(f64) -> f64) -> (Vec<f64>, Vec<f64>) {
        let t: Vec<f64> = (0..n).map(|k| k as f64 * dt).collect();
        let v = t.iter().map(|&t| f(t)).collect();
        (t, v)
    }

    fn series_with(t: Vec<f64>, e: Vec<f64>, tau: Vec<f64>) -> Series {
        let n = t.len();
        Series {
            f_hat: vec![0.0; n],
            f_true: e.clone(),
            q: vec![0.0; n],
            q_d: vec![0.0; n],
            edot: vec![0.0; n],
            y: e.clone(),
            e_hat: vec![0.0; n],
            edot_hat: vec![0.0; n],
            t,
            e,
            tau,
        }
    }

    #[test]
    fn constant_integrands() {
        let (t, e) = uniform(2001, 1e-2, |_| 1.0);
        let tau = vec![2.0; t.len()];
        let s = series_with(t, e, tau);
        let c = criteria(&s, CriteriaScale::Mean).unwrap();
        assert!((c.je - 1.0).abs() < 1e-12);
        assert!((c.ju - 4.0).abs() < 1e-12);
        let c = criteria(&s, CriteriaScale::Integral).unwrap();
        assert!((c.je - 20.0).abs() < 1e-9);
    }

    #[test]
    fn mean_abs_sine_is_two_over_pi() {
        let amp = 0.7;
        let (t, e) = uniform(20_001, 1e-3, |t| amp * (std::f64::consts::PI * t).sin());
        let n = t.len();
        let s = series_with(t, e, vec![0.0; n]);
        let c = criteria(&s, CriteriaScale::Mean).unwrap();
        assert!((c.je - 2.0 / std::f64::consts::PI * amp).abs() < 1e-6, "{}", c.je);
    }

    #[test]
    fn criteria_reject_short_series() {
        assert!(criteria(&Series::default(), CriteriaScale::Integral).is_err());
    }

    #[test]
    fn derivative_stencil_is_exact_on_quartics() {
        let dt = 0.01;
        let (_, v) = uniform(50, dt, |t| t.powi(4) - 2.0 * t);
        let d = five_point_derivative(&v, dt).unwrap();
        for k in 2..48 {
            let t = k as f64 * dt;
            assert!((d[k] - (4.0 * t.powi(3) - 2.0)).abs() < 1e-9);
        }
        assert!(five_point_derivative(&v[..4], dt).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let (t, e) = uniform(64, 1e-3, |t| (7.0 * t).sin() / 3.0);
        let n = t.len();
        let s = series_with(t, e, (0..n).map(|k| 0.1 * k as f64).collect());
        let text = s.to_csv_string().unwrap();
        assert!(text.starts_with(CSV_HEADER));
        let back = Series::from_csv_str(&text).unwrap();
        assert_eq!(back.t, s.t);
        assert_eq!(back.e, s.e);
        assert_eq!(back.tau, s.tau);
        assert_eq!(back.f_true, s.f_true);
        assert_eq!(back.edot.len(), n);
    }

    #[test]
    fn csv_missing_column() {
        let err = Series::from_csv_str("t,q\n0,0\n").unwrap_err();
        assert!(matches!(err, Error::MissingSignal(_)));
    }

    #[test]
    fn summary_round_trip() {
        let mut s = Summary::default();
        s.set("J_e", 0.1_f64 + 0.2);
        s.set("observer", "eso3");
        let back = Summary::parse(&s.to_string()).unwrap();
        assert_eq!(back.get_f64("J_e").unwrap(), 0.1 + 0.2);
        assert_eq!(back.get("observer"), Some("eso3"));
        assert!(back.get_f64("J_u").is_err());
    }

    #[test]
    fn tail_selection() {
        let (t, e) = uniform(11, 1.0, |t| t);
        let s = series_with(t, e, vec![0.0; 11]);
        let tail = s.tail_from(7.5);
        assert_eq!(tail.t, vec![8.0, 9.0, 10.0]);
        assert_eq!(tail.e, vec![8.0, 9.0, 10.0]);
    }
}
