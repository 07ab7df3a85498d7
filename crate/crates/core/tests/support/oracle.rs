//! Slow, obviously-correct reference implementations used as test oracles.

use msr_core::goal::{RefinementMode, Status};
use msr_core::series::Orientation;

/// Degradation interval as `(t_s, t_e, unrecovered)`.
pub type Interval = (f64, f64, bool);

/// Scans the series sample by sample: a sample is bad when it is strictly worse
/// than the benchmark. Each maximal bad run becomes an interval ending at the
/// first good sample after it, or at the last sample when the run never ends.
/// Runs whose gap (start of the next − end of the previous) is within
/// `merge_gap` are merged until none qualifies; short intervals are dropped last.
pub fn detect(
    times: &[f64],
    values: &[f64],
    bench: &dyn Fn(f64) -> f64,
    orientation: Orientation,
    merge_gap: f64,
    min_duration: f64,
) -> Vec<Interval> {
    let bad: Vec<bool> = times
        .iter()
        .zip(values)
        .map(|(&t, &v)| match orientation {
            Orientation::HigherIsBetter => v < bench(t),
            Orientation::LowerIsBetter => v > bench(t),
        })
        .collect();
    let n = times.len();
    let mut out: Vec<Interval> = Vec::new();
    for i in 0..n {
        if bad[i] && (i == 0 || !bad[i - 1]) {
            match (i + 1..n).find(|&j| !bad[j]) {
                Some(j) => out.push((times[i], times[j], false)),
                None => out.push((times[i], times[n - 1], true)),
            }
        }
    }
    loop {
        let pos = out.windows(2).position(|w| !w[0].2 && w[1].0 - w[0].1 <= merge_gap);
        match pos {
            Some(k) => {
                let next = out.remove(k + 1);
                out[k].1 = next.1;
                out[k].2 = next.2;
            }
            None => break,
        }
    }
    out.retain(|iv| iv.1 - iv.0 >= min_duration);
    out
}

/// Additive Holt–Winters written with one array per component over time.
pub struct HwReference {
    pub fitted: Vec<f64>,
    pub level: f64,
    pub trend: f64,
    seasonal: Vec<f64>,
    m: usize,
}

impl HwReference {
    pub fn run(y: &[f64], m: usize, alpha: f64, beta: f64, gamma: f64) -> Self {
        let n = y.len();
        let mut level = vec![0.0; n];
        let mut trend = vec![0.0; n];
        let mut season = vec![0.0; n];
        let l0: f64 = y[..m].iter().sum::<f64>() / m as f64;
        let mut b0 = 0.0;
        for i in 0..m {
            b0 += (y[m + i] - y[i]) / (m * m) as f64;
        }
        for i in 0..m {
            season[i] = y[i] - l0;
            level[i] = l0;
            trend[i] = b0;
        }
        let mut fitted: Vec<f64> = (0..m).map(|i| l0 + season[i]).collect();
        for t in m..n {
            fitted.push(level[t - 1] + trend[t - 1] + season[t - m]);
            level[t] = alpha * (y[t] - season[t - m]) + (1.0 - alpha) * (level[t - 1] + trend[t - 1]);
            trend[t] = beta * (level[t] - level[t - 1]) + (1.0 - beta) * trend[t - 1];
            season[t] = gamma * (y[t] - level[t]) + (1.0 - gamma) * season[t - m];
        }
        Self {
            fitted,
            level: level[n - 1],
            trend: trend[n - 1],
            seasonal: season[n - m..].to_vec(),
            m,
        }
    }

    /// `h >= 1` steps past the last observation.
    pub fn forecast(&self, h: usize) -> f64 {
        self.level + h as f64 * self.trend + self.seasonal[(h - 1) % self.m]
    }
}

/// A refinement structure over nodes `0..n`: `(parent, mode, children)` per group.
pub struct Refinements {
    pub n: usize,
    pub groups: Vec<(usize, RefinementMode, Vec<usize>)>,
    pub terminal: Vec<Option<Status>>,
}

/// Status of every node by enumerating all Boolean completions of the unknowns.
/// A node is satisfied (violated) when it is true (false) in every completion.
///
/// Unknown leaves: unrefined nodes with no terminal status or an `Unknown` one, and
/// refined nodes whose own terminal status is `Unknown`.
pub fn propagate_by_enumeration(r: &Refinements) -> Vec<Status> {
    let refined: Vec<bool> = (0..r.n).map(|i| r.groups.iter().any(|g| g.0 == i)).collect();
    let var_of: Vec<Option<usize>> = {
        let mut next = 0;
        (0..r.n)
            .map(|i| {
                let free = match r.terminal[i] {
                    Some(Status::Unknown) => true,
                    None => !refined[i],
                    Some(_) => false,
                };
                free.then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let k = var_of.iter().flatten().count();

    fn eval(
        i: usize,
        r: &Refinements,
        refined: &[bool],
        var_of: &[Option<usize>],
        bits: u32,
        memo: &mut [Option<bool>],
    ) -> bool {
        if let Some(b) = memo[i] {
            return b;
        }
        let own = match (r.terminal[i], var_of[i]) {
            (_, Some(v)) => bits >> v & 1 == 1,
            (Some(Status::Satisfied), None) => true,
            (Some(Status::Violated), None) => false,
            _ => true, // no own status: neutral for the conjunction below
        };
        let value = if refined[i] {
            let mut derived = false;
            for (_, mode, children) in r.groups.iter().filter(|g| g.0 == i) {
                let vals: Vec<bool> = children.iter().map(|&c| eval(c, r, refined, var_of, bits, memo)).collect();
                derived |= match mode {
                    RefinementMode::And => vals.iter().all(|&b| b),
                    RefinementMode::Or => vals.iter().any(|&b| b),
                };
            }
            own && derived
        } else {
            own
        };
        memo[i] = Some(value);
        value
    }

    let mut seen_true = vec![false; r.n];
    let mut seen_false = vec![false; r.n];
    for bits in 0..(1u32 << k) {
        let mut memo = vec![None; r.n];
        for i in 0..r.n {
            if eval(i, r, &refined, &var_of, bits, &mut memo) {
                seen_true[i] = true;
            } else {
                seen_false[i] = true;
            }
        }
    }
    (0..r.n)
        .map(|i| match (seen_true[i], seen_false[i]) {
            (true, false) => Status::Satisfied,
            (false, true) => Status::Violated,
            _ => Status::Unknown,
        })
        .collect()
}
