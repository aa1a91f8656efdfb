//! Metric names and per-pair evaluation.
//!
//! Topological metrics are always named with the connectivity they were
//! computed under (`B0_A`, `BM1_D`, `VOI_D`, ...). Betti and Betti matching
//! errors exist only per dimension; summed variants cannot be requested.

use std::fmt;

use topocheck_core::{
    betti_number_error, build_contingency, cldice, dice, label_components, match_dim, rand_scores,
    variation_of_information, BinaryMask, Connectivity, ConnectivityPair, LogBase, Scope,
};

use crate::error::{Error, Result};

/// What a metric measures, independent of connectivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    /// Betti number error of one dimension.
    Betti(usize),
    /// Betti matching error of one dimension.
    Matching(usize),
    Voi,
    Are,
    Ari,
    Ri,
    Dice,
    ClDice,
}

impl MetricKind {
    /// Whether the value depends on the connectivity setting.
    pub fn is_topological(self) -> bool {
        !matches!(self, MetricKind::Dice | MetricKind::ClDice)
    }

    /// Whether larger values are better.
    pub fn higher_is_better(self) -> bool {
        matches!(
            self,
            MetricKind::Dice | MetricKind::ClDice | MetricKind::Ri | MetricKind::Ari
        )
    }

    /// Whether the metric is defined for masks of this dimensionality.
    pub fn defined_for(self, ndim: usize) -> bool {
        match self {
            MetricKind::Betti(d) => d < ndim,
            MetricKind::Matching(d) => d == 0 || d == ndim - 1,
            MetricKind::ClDice => ndim == 2,
            _ => true,
        }
    }

    fn base_name(self) -> String {
        match self {
            MetricKind::Betti(d) => format!("B{d}"),
            MetricKind::Matching(d) => format!("BM{d}"),
            MetricKind::Voi => "VOI".into(),
            MetricKind::Are => "ARE".into(),
            MetricKind::Ari => "ARI".into(),
            MetricKind::Ri => "RI".into(),
            MetricKind::Dice => "DICE".into(),
            MetricKind::ClDice => "CLDICE".into(),
        }
    }

    fn parse_base(token: &str) -> Result<MetricKind> {
        let t = token.to_ascii_lowercase();
        if t.contains('+')
            || t.contains("sum")
            || matches!(t.as_str(), "b" | "bm" | "betti" | "betti_matching")
        {
            return Err(Error::Metric(format!(
                "{token:?}: Betti and Betti matching errors are only reported per dimension; \
                 request e.g. b0,b1 or bm0,bm1 instead of an aggregate"
            )));
        }
        let dim = |rest: &str| rest.parse::<usize>().ok().filter(|d| *d <= 2);
        let kind = match t.as_str() {
            "voi" => MetricKind::Voi,
            "are" => MetricKind::Are,
            "ari" => MetricKind::Ari,
            "ri" => MetricKind::Ri,
            "dice" => MetricKind::Dice,
            "cldice" => MetricKind::ClDice,
            _ => {
                if let Some(d) = t.strip_prefix("bm").and_then(dim) {
                    MetricKind::Matching(d)
                } else if let Some(d) = t.strip_prefix('b').and_then(dim) {
                    MetricKind::Betti(d)
                } else {
                    return Err(Error::Metric(format!(
                        "unknown metric {token:?}; known: b0,b1,b2,bm0,bm1,bm2,voi,are,ari,ri,dice,cldice"
                    )));
                }
            }
        };
        Ok(kind)
    }
}

/// A metric bound to a connectivity setting (topological metrics only).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MetricKey {
    pub kind: MetricKind,
    pub connectivity: Option<Connectivity>,
}

impl MetricKey {
    pub fn new(kind: MetricKind, conn: Connectivity) -> Self {
        MetricKey {
            kind,
            connectivity: kind.is_topological().then_some(conn),
        }
    }

    /// Parses one requested name such as `b0`, `BM1_D` or `dice`.
    ///
    /// An explicit suffix must agree with `conn`.
    pub fn parse(token: &str, conn: Connectivity) -> Result<Self> {
        let token = token.trim();
        let (base, suffix) = match token.rsplit_once('_') {
            Some((b, s)) if s.eq_ignore_ascii_case("a") || s.eq_ignore_ascii_case("d") => {
                (b, Some(s.parse::<Connectivity>().expect("checked above")))
            }
            _ => (token, None),
        };
        let kind = MetricKind::parse_base(base)?;
        match suffix {
            Some(_) if !kind.is_topological() => Err(Error::Metric(format!(
                "{token:?}: {} does not depend on connectivity; drop the suffix",
                kind.base_name()
            ))),
            Some(s) if s != conn => Err(Error::Metric(format!(
                "{token:?} asks for connectivity {s} but the run uses {conn}"
            ))),
            _ => Ok(MetricKey::new(kind, conn)),
        }
    }

    /// Parses a comma separated list, rejecting duplicates.
    pub fn parse_list(list: &str, conn: Connectivity) -> Result<Vec<Self>> {
        let mut out: Vec<MetricKey> = Vec::new();
        for token in list.split(',').filter(|t| !t.trim().is_empty()) {
            let key = MetricKey::parse(token, conn)?;
            if out.contains(&key) {
                return Err(Error::Metric(format!("metric {key} requested twice")));
            }
            out.push(key);
        }
        if out.is_empty() {
            return Err(Error::Metric("empty metric list".into()));
        }
        Ok(out)
    }

    /// Metrics reported when none are requested.
    pub fn defaults(ndim: usize, conn: Connectivity) -> Vec<Self> {
        let mut kinds = vec![MetricKind::Dice];
        if ndim == 2 {
            kinds.push(MetricKind::ClDice);
        }
        kinds.extend((0..ndim).map(MetricKind::Betti));
        kinds.push(MetricKind::Matching(0));
        kinds.push(MetricKind::Matching(ndim - 1));
        kinds.extend([MetricKind::Voi, MetricKind::Are, MetricKind::Ari]);
        kinds.into_iter().map(|k| MetricKey::new(k, conn)).collect()
    }
}

impl fmt::Display for MetricKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.kind.base_name())?;
        if let Some(c) = self.connectivity {
            write!(f, "_{}", c.suffix())?;
        }
        Ok(())
    }
}

/// Settings shared by all pairs of an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub connectivity: Connectivity,
    pub voi_base: LogBase,
    pub scope: Scope,
}

/// Values of `metrics` for one pair; `None` where a metric is undefined.
pub fn evaluate_pair(
    pred: &BinaryMask,
    gt: &BinaryMask,
    metrics: &[MetricKey],
    opts: EvalOptions,
) -> Result<Vec<Option<f64>>> {
    pred.check_same_shape(gt)?;
    let conn = ConnectivityPair::from(opts.connectivity);
    let ndim = gt.ndim();
    let needs_partition = metrics.iter().any(|m| {
        matches!(
            m.kind,
            MetricKind::Voi | MetricKind::Are | MetricKind::Ari | MetricKind::Ri
        )
    });
    let table = if needs_partition {
        let lp = label_components(pred, conn);
        let lg = label_components(gt, conn);
        build_contingency(&lp, &lg, opts.scope).ok()
    } else {
        None
    };
    let rand = table.as_ref().and_then(|t| rand_scores(t).ok());

    let mut out = Vec::with_capacity(metrics.len());
    for m in metrics {
        if !m.kind.defined_for(ndim) {
            out.push(None);
            continue;
        }
        let v = match m.kind {
            MetricKind::Betti(d) => Some(betti_number_error(pred, gt, conn, d)? as f64),
            MetricKind::Matching(d) => Some(match_dim(pred, gt, conn, d)?.bm_error as f64),
            MetricKind::Voi => table
                .as_ref()
                .map(|t| variation_of_information(t, opts.voi_base)),
            MetricKind::Are => rand.map(|r| r.are),
            MetricKind::Ari => rand.map(|r| r.ari),
            MetricKind::Ri => rand.map(|r| r.ri),
            MetricKind::Dice => Some(dice(pred, gt)?),
            MetricKind::ClDice => cldice(pred, gt).ok(),
        };
        out.push(v);
    }
    Ok(out)
}
