use serde::{Deserialize, Serialize};

/// Chebyshev–Lobatto points on `[-radius, radius]` plus optional extra points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub radius: f64,
    pub points: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<f64>,
}

impl GridSpec {
    pub fn chebyshev(radius: f64, points: usize) -> Self {
        GridSpec { radius, points, extra: Vec::new() }
    }

    pub fn with_extra(mut self, extra: impl IntoIterator<Item = f64>) -> Self {
        self.extra.extend(extra);
        self
    }

    /// Same radius, `factor` times finer spacing; contains the original nodes.
    pub fn denser(&self, factor: usize) -> Self {
        let points = if self.points <= 1 { self.points } else { (self.points - 1) * factor + 1 };
        GridSpec { radius: self.radius, points, extra: self.extra.clone() }
    }

    /// Sorted, deduplicated nodes.
    pub fn nodes(&self) -> Vec<f64> {
        let mut v = chebyshev_lobatto(self.radius, self.points);
        v.extend(self.extra.iter().copied().filter(|x| x.is_finite()));
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::chebyshev(50.0, 201)
    }
}

/// `radius * sin(π (2j - (N-1)) / (2(N-1)))`, symmetric with an exact zero for odd `N`.
pub fn chebyshev_lobatto(radius: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let m = (n - 1) as f64;
            (0..n)
                .map(|j| {
                    let k = 2.0 * j as f64 - m;
                    if k == 0.0 {
                        0.0
                    } else {
                        radius * (std::f64::consts::PI * k / (2.0 * m)).sin()
                    }
                })
                .collect()
        }
    }
}
