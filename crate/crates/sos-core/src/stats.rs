//! Inferential statistics implemented from scratch: Welch's t, one-way
//! ANOVA, Pearson correlation and simple linear regression.
//!
//! Exact p-values would need distribution CDFs; instead each result carries
//! its statistic and degrees of freedom plus an exceeds-critical-value check
//! against embedded α = 0.001 tables (two-tailed for t and r).

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatKind {
    WelchT,
    AnovaF,
    PearsonR,
    LinRegR2,
}

impl StatKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StatKind::WelchT => "welch_t",
            StatKind::AnovaF => "anova_f",
            StatKind::PearsonR => "pearson_r",
            StatKind::LinRegR2 => "linreg_r2",
        }
    }
}

/// Degrees of freedom; ANOVA carries a (between, within) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Df {
    One(f64),
    Two(f64, f64),
}

impl std::fmt::Display for Df {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Df::One(d) => write!(f, "{d:.1}"),
            Df::Two(a, b) => write!(f, "({a:.0}, {b:.0})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatResult {
    pub kind: StatKind,
    pub statistic: f64,
    pub df: Df,
}

impl StatResult {
    /// Whether the statistic clears the α = 0.001 critical value for its
    /// kind and degrees of freedom (two-tailed where applicable). Table
    /// lookups round df down, so the check errs toward "no".
    pub fn exceeds_p001(&self) -> bool {
        match (self.kind, self.df) {
            (StatKind::WelchT, Df::One(df)) => self.statistic.abs() > critical::t_p001(df),
            (StatKind::AnovaF, Df::Two(df1, df2)) => self.statistic > critical::f_p001(df1, df2),
            (StatKind::PearsonR, Df::One(df)) => {
                let r2 = (self.statistic * self.statistic).min(1.0);
                if r2 >= 1.0 {
                    return df >= 1.0;
                }
                (r2 * df / (1.0 - r2)).sqrt() > critical::t_p001(df)
            }
            (StatKind::LinRegR2, Df::One(df)) => {
                let r2 = self.statistic.clamp(0.0, 1.0);
                if r2 >= 1.0 {
                    return df >= 1.0;
                }
                (r2 * df / (1.0 - r2)).sqrt() > critical::t_p001(df)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatError {
    #[error("InsufficientData: need at least {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("DegenerateVariance: {0}")]
    DegenerateVariance(&'static str),
    #[error("LengthMismatch: series lengths {0} and {1} differ")]
    LengthMismatch(usize, usize),
}

/// Arithmetic mean and sample standard deviation (n−1 denominator).
pub fn mean_sd(xs: &[f64]) -> Result<(f64, f64), StatError> {
    if xs.len() < 2 {
        return Err(StatError::InsufficientData {
            needed: 2,
            got: xs.len(),
        });
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    Ok((mean, (ss / (xs.len() - 1) as f64).sqrt()))
}

/// Welch's unequal-variance t with Welch–Satterthwaite degrees of freedom.
pub fn welch_t(a: &[f64], b: &[f64]) -> Result<StatResult, StatError> {
    let (mean_a, sd_a) = mean_sd(a)?;
    let (mean_b, sd_b) = mean_sd(b)?;
    let sem_a = sd_a * sd_a / a.len() as f64;
    let sem_b = sd_b * sd_b / b.len() as f64;
    if sem_a + sem_b == 0.0 {
        return Err(StatError::DegenerateVariance(
            "both samples have zero variance",
        ));
    }
    let t = (mean_a - mean_b) / (sem_a + sem_b).sqrt();
    let df = (sem_a + sem_b) * (sem_a + sem_b)
        / (sem_a * sem_a / (a.len() - 1) as f64 + sem_b * sem_b / (b.len() - 1) as f64);
    Ok(StatResult {
        kind: StatKind::WelchT,
        statistic: t,
        df: Df::One(df),
    })
}

/// One-way ANOVA F with df (k−1, N−k).
pub fn anova_oneway(groups: &[Vec<f64>]) -> Result<StatResult, StatError> {
    if groups.len() < 2 {
        return Err(StatError::InsufficientData {
            needed: 2,
            got: groups.len(),
        });
    }
    for g in groups {
        if g.len() < 2 {
            return Err(StatError::InsufficientData {
                needed: 2,
                got: g.len(),
            });
        }
    }
    let n_total: usize = groups.iter().map(|g| g.len()).sum();
    let grand_mean = groups.iter().flatten().sum::<f64>() / n_total as f64;
    let mut ss_between = 0.0;
    let mut ss_within = 0.0;
    for g in groups {
        let mean = g.iter().sum::<f64>() / g.len() as f64;
        ss_between += g.len() as f64 * (mean - grand_mean) * (mean - grand_mean);
        ss_within += g.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
    }
    if ss_between == 0.0 && ss_within == 0.0 {
        return Err(StatError::DegenerateVariance(
            "no variance between or within groups",
        ));
    }
    let df_between = (groups.len() - 1) as f64;
    let df_within = (n_total - groups.len()) as f64;
    let f = (ss_between / df_between) / (ss_within / df_within);
    Ok(StatResult {
        kind: StatKind::AnovaF,
        statistic: f,
        df: Df::Two(df_between, df_within),
    })
}

/// Sample Pearson correlation with df = n − 2.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<StatResult, StatError> {
    if x.len() != y.len() {
        return Err(StatError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 3 {
        return Err(StatError::InsufficientData {
            needed: 3,
            got: x.len(),
        });
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        let dx = xi - mean_x;
        let dy = yi - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(StatError::DegenerateVariance("constant series"));
    }
    Ok(StatResult {
        kind: StatKind::PearsonR,
        statistic: cov / (var_x * var_y).sqrt(),
        df: Df::One(n - 2.0),
    })
}

/// Ordinary least-squares fit of y on x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinRegFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n: usize,
    /// Set when y is constant: SS_tot = 0 and R² is reported as 0.
    pub degenerate_y: bool,
}

impl LinRegFit {
    pub fn stat(&self) -> StatResult {
        StatResult {
            kind: StatKind::LinRegR2,
            statistic: self.r_squared,
            df: Df::One(self.n as f64 - 2.0),
        }
    }
}

/// Simple linear regression; R² = 1 − SS_res/SS_tot.
pub fn linreg_r2(x: &[f64], y: &[f64]) -> Result<LinRegFit, StatError> {
    if x.len() != y.len() {
        return Err(StatError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 3 {
        return Err(StatError::InsufficientData {
            needed: 3,
            got: x.len(),
        });
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        let dx = xi - mean_x;
        let dy = yi - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(StatError::DegenerateVariance("constant x"));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    if syy == 0.0 {
        return Ok(LinRegFit {
            slope: 0.0,
            intercept: mean_y,
            r_squared: 0.0,
            n: x.len(),
            degenerate_y: true,
        });
    }
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let e = yi - (slope * xi + intercept);
            e * e
        })
        .sum();
    Ok(LinRegFit {
        slope,
        intercept,
        r_squared: 1.0 - ss_res / syy,
        n: x.len(),
        degenerate_y: false,
    })
}

/// Critical values at α = 0.001, frozen from standard quantile tables.
/// Lookups take the largest tabulated df not exceeding the requested df, so
/// the returned value is never smaller than the true critical value.
pub mod critical {
    /// Two-tailed Student t critical values (upper 0.9995 quantile).
    const T_P001: &[(u32, f64)] = &[
        (1, 636.619249),
        (2, 31.599055),
        (3, 12.923979),
        (4, 8.610302),
        (5, 6.868827),
        (6, 5.958816),
        (7, 5.407883),
        (8, 5.041305),
        (9, 4.780913),
        (10, 4.586894),
        (11, 4.436979),
        (12, 4.317791),
        (13, 4.220832),
        (14, 4.140454),
        (15, 4.072765),
        (16, 4.014996),
        (17, 3.965126),
        (18, 3.921646),
        (19, 3.883406),
        (20, 3.849516),
        (21, 3.819277),
        (22, 3.792131),
        (23, 3.767627),
        (24, 3.745399),
        (25, 3.725144),
        (26, 3.706612),
        (27, 3.689592),
        (28, 3.673906),
        (29, 3.659405),
        (30, 3.645959),
        (40, 3.550966),
        (50, 3.496013),
        (60, 3.460200),
        (80, 3.416337),
        (100, 3.390491),
        (200, 3.339835),
        (500, 3.310091),
    ];

    /// Normal limit of the two-tailed t at α = 0.001.
    const T_P001_INF: f64 = 3.290527;

    const F_DF2: &[u32] = &[
        1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25,
        26, 27, 28, 29, 30, 40, 50, 60, 80, 100, 200, 500,
    ];

    /// Upper 0.999 quantiles of F(df1, df2), rows df1 = 1..=5 over `F_DF2`.
    const F_P001: [&[f64]; 5] = [
        &[
            405284.0679,
            998.5003,
            167.0292,
            74.1373,
            47.1808,
            35.5075,
            29.2452,
            25.4148,
            22.8571,
            21.0396,
            19.6868,
            18.6433,
            17.8154,
            17.1434,
            16.5874,
            16.1202,
            15.7222,
            15.3793,
            15.0808,
            14.8188,
            14.5869,
            14.3803,
            14.1950,
            14.0280,
            13.8767,
            13.7390,
            13.6131,
            13.4976,
            13.3912,
            13.2930,
            12.6094,
            12.2221,
            11.9730,
            11.6714,
            11.4954,
            11.1545,
            10.9567,
        ],
        &[
            499999.5000,
            999.0000,
            148.5000,
            61.2456,
            37.1223,
            27.0000,
            21.6890,
            18.4937,
            16.3871,
            14.9054,
            13.8116,
            12.9737,
            12.3127,
            11.7789,
            11.3391,
            10.9710,
            10.6584,
            10.3899,
            10.1568,
            9.9526,
            9.7723,
            9.6120,
            9.4685,
            9.3394,
            9.2225,
            9.1163,
            9.0194,
            8.9305,
            8.8488,
            8.7734,
            8.2508,
            7.9564,
            7.7678,
            7.5401,
            7.4077,
            7.1519,
            7.0041,
        ],
        &[
            540379.2016,
            999.1666,
            141.1085,
            56.1772,
            33.2025,
            23.7033,
            18.7723,
            15.8295,
            13.9018,
            12.5527,
            11.5611,
            10.8042,
            10.2089,
            9.7294,
            9.3353,
            9.0059,
            8.7269,
            8.4875,
            8.2799,
            8.0984,
            7.9383,
            7.7960,
            7.6688,
            7.5545,
            7.4511,
            7.3572,
            7.2715,
            7.1931,
            7.1210,
            7.0545,
            6.5945,
            6.3364,
            6.1712,
            5.9723,
            5.8568,
            5.6341,
            5.5057,
        ],
        &[
            562499.5833,
            999.2499,
            137.1004,
            53.4358,
            31.0850,
            21.9235,
            17.1980,
            14.3916,
            12.5603,
            11.2828,
            10.3461,
            9.6327,
            9.0727,
            8.6223,
            8.2527,
            7.9442,
            7.6831,
            7.4593,
            7.2655,
            7.0960,
            6.9467,
            6.8142,
            6.6957,
            6.5892,
            6.4931,
            6.4057,
            6.3261,
            6.2532,
            6.1863,
            6.1245,
            5.6981,
            5.4593,
            5.3067,
            5.1231,
            5.0167,
            4.8116,
            4.6935,
        ],
        &[
            576404.5558,
            999.2999,
            134.5800,
            51.7116,
            29.7524,
            20.8027,
            16.2058,
            13.4847,
            11.7137,
            10.4807,
            9.5784,
            8.8921,
            8.3541,
            7.9218,
            7.5674,
            7.2719,
            7.0219,
            6.8078,
            6.6225,
            6.4606,
            6.3179,
            6.1914,
            6.0783,
            5.9768,
            5.8851,
            5.8018,
            5.7259,
            5.6565,
            5.5927,
            5.5339,
            5.1283,
            4.9013,
            4.7565,
            4.5824,
            4.4815,
            4.2874,
            4.1756,
        ],
    ];

    const F_P001_INF: [f64; 5] = [10.8276, 6.9078, 5.4221, 4.6167, 4.1030];

    pub fn t_p001(df: f64) -> f64 {
        if df.is_nan() || df < 1.0 {
            return f64::INFINITY;
        }
        if df >= 1000.0 {
            return T_P001_INF;
        }
        let df = df.floor() as u32;
        let mut crit = T_P001[0].1;
        for &(d, c) in T_P001 {
            if d <= df {
                crit = c;
            } else {
                break;
            }
        }
        crit
    }

    pub fn f_p001(df1: f64, df2: f64) -> f64 {
        if df1.is_nan() || df2.is_nan() || df1 < 1.0 || df2 < 1.0 {
            return f64::INFINITY;
        }
        // critical values shrink as df1 grows; clamping to the df1 = 5 row
        // keeps the check conservative for wider designs
        let row = F_P001[(df1.floor() as usize - 1).min(4)];
        if df2 >= 1000.0 {
            return F_P001_INF[(df1.floor() as usize - 1).min(4)];
        }
        let df2 = df2.floor() as u32;
        let mut crit = row[0];
        for (i, &d) in F_DF2.iter().enumerate() {
            if d <= df2 {
                crit = row[i];
            } else {
                break;
            }
        }
        crit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn mean_sd_hand_values() {
        assert_eq!(mean_sd(&[1.0, 2.0, 3.0]).unwrap(), (2.0, 1.0));
        let (_, sd) = mean_sd(&[4.0, 4.0, 4.0]).unwrap();
        assert_eq!(sd, 0.0);
        // variance 32/7
        let (mean, sd) = mean_sd(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).unwrap();
        assert_eq!(mean, 5.0);
        assert!(close(sd, (32.0f64 / 7.0).sqrt(), 1e-12));
        assert!(mean_sd(&[1.0]).is_err());
    }

    #[test]
    fn welch_hand_values() {
        let a = [1.0, 2.0, 3.0];
        let b = [4.0, 5.0, 6.0];
        let r = welch_t(&a, &b).unwrap();
        assert!(close(r.statistic, -3.674, 1e-3));
        assert_eq!(r.df, Df::One(4.0));

        let same = welch_t(&a, &a.clone()).unwrap();
        assert_eq!(same.statistic, 0.0);

        // antisymmetry
        let rev = welch_t(&b, &a).unwrap();
        assert_eq!(r.statistic, -rev.statistic);

        assert!(matches!(
            welch_t(&[1.0, 1.0], &[1.0, 1.0]),
            Err(StatError::DegenerateVariance(_))
        ));
    }

    #[test]
    fn anova_hand_values() {
        let groups = vec![
            vec![1.0, 2.0, 3.0],
            vec![2.0, 3.0, 4.0],
            vec![3.0, 4.0, 5.0],
        ];
        let r = anova_oneway(&groups).unwrap();
        assert!(close(r.statistic, 3.0, 1e-12));
        assert_eq!(r.df, Df::Two(2.0, 6.0));

        let same = vec![vec![1.0, 2.0], vec![1.0, 2.0]];
        assert_eq!(anova_oneway(&same).unwrap().statistic, 0.0);

        // location invariance
        let shifted: Vec<Vec<f64>> = groups
            .iter()
            .map(|g| g.iter().map(|x| x + 17.5).collect())
            .collect();
        let r2 = anova_oneway(&shifted).unwrap();
        assert!(close(r.statistic, r2.statistic, 1e-9));

        assert!(matches!(
            anova_oneway(&[vec![2.0, 2.0], vec![2.0, 2.0]]),
            Err(StatError::DegenerateVariance(_))
        ));
    }

    #[test]
    fn pearson_hand_values() {
        let x = [1.0, 2.0, 3.0];
        assert!(close(pearson_r(&x, &x).unwrap().statistic, 1.0, 1e-12));

        let y: Vec<f64> = x.iter().map(|v| -2.0 * v + 7.0).collect();
        assert!(close(pearson_r(&x, &y).unwrap().statistic, -1.0, 1e-12));

        let r = pearson_r(&x, &[1.0, 2.0, 4.0]).unwrap();
        assert!(close(r.statistic, 0.9820, 1e-3));
        assert_eq!(r.df, Df::One(1.0));

        assert!(matches!(
            pearson_r(&x, &[5.0, 5.0, 5.0]),
            Err(StatError::DegenerateVariance(_))
        ));
    }

    #[test]
    fn linreg_hand_values() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let fit = linreg_r2(&x, &y).unwrap();
        assert!(close(fit.slope, 2.0, 1e-12));
        assert!(close(fit.intercept, 1.0, 1e-12));
        assert!(close(fit.r_squared, 1.0, 1e-12));

        let fit = linreg_r2(&x, &[3.0, 3.0, 3.0, 3.0]).unwrap();
        assert_eq!(fit.slope, 0.0);
        assert_eq!(fit.r_squared, 0.0);
        assert!(fit.degenerate_y);

        assert!(matches!(
            linreg_r2(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(StatError::DegenerateVariance(_))
        ));
    }

    #[test]
    fn r_squared_equals_pearson_squared() {
        let x = [1.0, 2.0, 3.0, 5.0, 8.0];
        let y = [2.0, 1.5, 4.0, 3.0, 7.0];
        let fit = linreg_r2(&x, &y).unwrap();
        let r = pearson_r(&x, &y).unwrap().statistic;
        assert!(close(fit.r_squared, r * r, 1e-12));
    }

    #[test]
    fn linreg_recovers_exact_lines() {
        let x: Vec<f64> = (0..50).map(|i| i as f64 * 0.25 - 3.0).collect();
        for (a, b) in [(2.0, 1.0), (-0.5, 4.0), (1e3, -2e2)] {
            let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            let fit = linreg_r2(&x, &y).unwrap();
            assert!(close(fit.slope, a, 1e-9 * a.abs().max(1.0)));
            assert!(close(fit.intercept, b, 1e-9 * b.abs().max(1.0)));
        }
    }

    #[test]
    fn critical_table_anchors() {
        assert!(close(critical::t_p001(10.0), 4.586894, 1e-5));
        assert!(close(critical::t_p001(1e7), 3.290527, 1e-5));
        // df between table rows falls back to the smaller (larger-crit) row
        assert!(close(critical::t_p001(45.0), 3.550966, 1e-5));
        assert!(close(critical::f_p001(2.0, 1e7), 6.9078, 1e-4));
        // F(2, 297) true value ≈ 7.07; table gives the df2=200 entry
        assert!(close(critical::f_p001(2.0, 297.0), 7.1519, 1e-4));
        assert!(critical::f_p001(2.0, 297.0) >= 7.0709);
    }

    #[test]
    fn exceeds_check() {
        let strong = StatResult {
            kind: StatKind::WelchT,
            statistic: -10.7,
            df: Df::One(37.4),
        };
        assert!(strong.exceeds_p001());
        let weak = StatResult {
            kind: StatKind::WelchT,
            statistic: 2.0,
            df: Df::One(37.4),
        };
        assert!(!weak.exceeds_p001());
        let f = StatResult {
            kind: StatKind::AnovaF,
            statistic: 2524.5,
            df: Df::Two(2.0, 297.0),
        };
        assert!(f.exceeds_p001());
        let r = StatResult {
            kind: StatKind::PearsonR,
            statistic: -0.746,
            df: Df::One(7970.0),
        };
        assert!(r.exceeds_p001());
    }
}
