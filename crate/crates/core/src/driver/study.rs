use std::fmt::Write as _;
use std::str::FromStr;

use super::config::FixedPointConfig;
use super::run::{global_fixed_point, StudyRecord};
use crate::error::{invalid, Error, Result};

/// What a convergence study varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StudyKind {
    /// `n_I` and `n_T` fixed; the sweep lists `N_avg` values.
    FixedIntervals,
    /// `N_avg` and `n_I n_T` fixed; the sweep lists `n_I` values.
    FixedDensity,
}

impl FromStr for StudyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed-ni" | "fixed_ni" => Ok(Self::FixedIntervals),
            "fixed-navg" | "fixed_navg" => Ok(Self::FixedDensity),
            _ => invalid(format!("unknown study kind {s:?} (expected fixed-ni or fixed-navg)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyPoint {
    pub n_i: usize,
    pub n_t: usize,
    pub n_avg: f64,
    /// Totals of the last fixed-point iteration.
    pub n_st: usize,
    pub e: f64,
    /// `E` of every fixed-point iteration.
    pub history: Vec<f64>,
    pub records: Vec<StudyRecord>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyResult {
    pub points: Vec<StudyPoint>,
    /// `r` in `E ~ N_st^{−r/2}`.
    pub rate: f64,
    /// Number of trailing points the rate was fitted on.
    pub fitted: usize,
}

pub const SUMMARY_HEADER: &str = "point,n_I,n_T,N_avg,N_st,E";

impl StudyResult {
    pub fn summary_csv(&self) -> String {
        let mut s = format!("{SUMMARY_HEADER}\n");
        for (j, p) in self.points.iter().enumerate() {
            let _ = writeln!(s, "{j},{},{},{},{},{:.9e}", p.n_i, p.n_t, p.n_avg, p.n_st, p.e);
        }
        s
    }
}

/// Fits `log E = a + s log N_st` by least squares over the last ⌈2n/3⌉
/// points and returns `(r, used)` with `r = −2s`.
pub fn fit_rate(n_st: &[f64], e: &[f64]) -> Result<(f64, usize)> {
    let n = n_st.len();
    if n != e.len() {
        return invalid("fit_rate needs equally many N_st and E values");
    }
    if n < 3 {
        return Err(Error::InsufficientData(format!("{n} sweep points, need at least 3")));
    }
    if n_st.iter().chain(e).any(|&v| !(v > 0.0 && v.is_finite())) {
        return invalid("N_st and E must be positive for a log-log fit");
    }
    let used = (2 * n).div_ceil(3);
    let xs: Vec<f64> = n_st[n - used..].iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = e[n - used..].iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / used as f64;
    let my = ys.iter().sum::<f64>() / used as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all fitted points share one N_st".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok((-2.0 * sxy / sxx, used))
}

/// The configuration of every sweep point.
pub fn sweep_configs(base: &FixedPointConfig, kind: StudyKind, sweep: &[f64]) -> Result<Vec<FixedPointConfig>> {
    if sweep.len() < 3 {
        return Err(Error::InsufficientData(format!("{} sweep points, need at least 3", sweep.len())));
    }
    sweep
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            let mut cfg = base.clone();
            match kind {
                StudyKind::FixedIntervals => cfg.n_avg = v,
                StudyKind::FixedDensity => {
                    let total = base.n_i * base.n_t;
                    if !(v >= 1.0 && v.fract() == 0.0) || total % v as usize != 0 {
                        return invalid(format!("n_I = {v} does not divide n_I·n_T = {total}"));
                    }
                    cfg.n_i = v as usize;
                    cfg.n_t = total / cfg.n_i;
                }
            }
            cfg.output = base.output.as_ref().map(|d| d.join(format!("point_{j}")));
            cfg.validate()?;
            Ok(cfg)
        })
        .collect()
}

/// Runs the fixed-point algorithm for every sweep point and fits the rate.
pub fn convergence_study(base: &FixedPointConfig, kind: StudyKind, sweep: &[f64]) -> Result<StudyResult> {
    let configs = sweep_configs(base, kind, sweep)?;
    let mut points = Vec::with_capacity(configs.len());
    for cfg in &configs {
        let run = global_fixed_point(cfg)?;
        let last = run.last();
        log::info!("study point n_I={} n_T={} N_avg={}: N_st={} E={:.4e}", cfg.n_i, cfg.n_t, cfg.n_avg, last.n_st, last.e);
        points.push(StudyPoint {
            n_i: cfg.n_i,
            n_t: cfg.n_t,
            n_avg: cfg.n_avg,
            n_st: last.n_st,
            e: last.e,
            history: run.iterations.iter().map(|it| it.e).collect(),
            records: run.records.clone(),
        });
    }
    let n_st: Vec<f64> = points.iter().map(|p| p.n_st as f64).collect();
    let e: Vec<f64> = points.iter().map(|p| p.e).collect();
    let (rate, fitted) = fit_rate(&n_st, &e)?;
    let result = StudyResult { points, rate, fitted };
    if let Some(dir) = &base.output {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("summary.csv"), result.summary_csv())?;
        std::fs::write(dir.join("rate.txt"), format!("r = {rate:.6}\nfitted_points = {fitted}\n"))?;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_a_power_law() {
        let n: Vec<f64> = [1e3, 2e3, 4e3, 8e3, 16e3].to_vec();
        let e: Vec<f64> = n.iter().map(|x: &f64| 3.0 * x.powf(-0.8)).collect();
        let (r, used) = fit_rate(&n, &e).unwrap();
        assert!((r - 1.6).abs() < 1e-12, "{r}");
        assert_eq!(used, 4);
    }

    #[test]
    fn fit_uses_only_the_tail() {
        // A pre-asymptotic plateau in the first point is ignored.
        let n = [1e3, 2e3, 4e3, 8e3];
        let e = [0.5, 0.5, 0.125, 0.03125];
        let (r, used) = fit_rate(&n, &e).unwrap();
        assert_eq!(used, 3);
        assert!(r > 2.5, "{r}");
        let (r, _) = fit_rate(&n[1..], &e[1..]).unwrap();
        assert!(r > 2.5);
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(fit_rate(&[1.0, 2.0], &[1.0, 0.5]), Err(Error::InsufficientData(_))));
        let base = FixedPointConfig::default();
        assert!(matches!(
            sweep_configs(&base, StudyKind::FixedIntervals, &[1e3, 2e3]),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn fixed_density_keeps_the_time_step() {
        let base = FixedPointConfig { n_i: 2, n_t: 128, n_avg: 1e4, ..FixedPointConfig::default() };
        let cfgs = sweep_configs(&base, StudyKind::FixedDensity, &[2.0, 4.0, 8.0, 16.0, 32.0]).unwrap();
        for c in &cfgs {
            assert_eq!(c.n_i * c.n_t, 256);
            assert_eq!(c.dt(), 1.0 / 256.0);
            assert_eq!(c.n_avg, 1e4);
        }
        assert!(sweep_configs(&base, StudyKind::FixedDensity, &[2.0, 3.0, 4.0]).is_err());
        let cfgs = sweep_configs(&base, StudyKind::FixedIntervals, &[1e3, 2e3, 4e3]).unwrap();
        assert!(cfgs.iter().all(|c| c.n_i == 2 && c.n_t == 128));
    }

    #[test]
    fn kinds_parse() {
        assert_eq!("fixed-ni".parse::<StudyKind>().unwrap(), StudyKind::FixedIntervals);
        assert_eq!("fixed-navg".parse::<StudyKind>().unwrap(), StudyKind::FixedDensity);
        assert!("other".parse::<StudyKind>().is_err());
    }
}
