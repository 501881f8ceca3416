//! Weighted lattice-path counting by dynamic programming.
//!
//! Counts are pushed forward from the origin in order of increasing
//! potential, an integer functional that every step strictly increases.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, Shape};
use crate::riordan::RiordanArray;
use crate::series::Series;

/// Bound on `|dx|` and `|dy|` accepted from specs.
pub const MAX_STEP: i64 = 64;
/// Bound on the number of lattice points a single count may visit.
pub const MAX_POINTS: usize = 2_000_000;
const POTENTIAL_BOX: i64 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub dx: i64,
    pub dy: i64,
    #[serde(default = "unit_weight")]
    pub w: i64,
}

fn unit_weight() -> i64 {
    1
}

impl Step {
    pub fn new(dx: i64, dy: i64) -> Self {
        Step { dx, dy, w: 1 }
    }

    pub fn weighted(w: i64, dx: i64, dy: i64) -> Self {
        Step { dx, dy, w }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// `0 <= k <= n`
    #[default]
    Triangle,
    /// `n, k >= 0`
    Quadrant,
    /// `k >= 0`
    Halfplane,
    /// No constraint.
    Plane,
}

impl Region {
    pub fn contains(self, n: i64, k: i64) -> bool {
        match self {
            Region::Triangle => 0 <= k && k <= n,
            Region::Quadrant => n >= 0 && k >= 0,
            Region::Halfplane => k >= 0,
            Region::Plane => true,
        }
    }
}

/// Which level selects the step set for a step from level `k` to `k + dy`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelRule {
    /// The level the step ends on.
    #[default]
    Arrival,
    /// The level the step starts from.
    Departure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSpec {
    pub steps: Vec<Step>,
    #[serde(default)]
    pub region: Region,
    /// Step sets replacing `steps` at the given levels.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub levels: BTreeMap<i64, Vec<Step>>,
    #[serde(default)]
    pub level_rule: LevelRule,
}

/// `alpha * n + beta * k`, at least 1 on every step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Potential {
    pub alpha: i64,
    pub beta: i64,
}

impl Potential {
    pub fn at(self, n: i64, k: i64) -> i64 {
        self.alpha * n + self.beta * k
    }

    pub fn certifies(self, steps: &[Step]) -> bool {
        steps.iter().all(|s| self.at(s.dx, s.dy) >= 1)
    }
}

impl StepSpec {
    pub fn new(steps: Vec<Step>, region: Region) -> Result<Self> {
        let spec = StepSpec { steps, region, levels: BTreeMap::new(), level_rule: LevelRule::Arrival };
        spec.validate()?;
        Ok(spec)
    }

    /// Unit-weight steps from `(dx, dy)` pairs.
    pub fn from_pairs(pairs: &[(i64, i64)], region: Region) -> Result<Self> {
        Self::new(pairs.iter().map(|&(dx, dy)| Step::new(dx, dy)).collect(), region)
    }

    pub fn with_level(mut self, level: i64, steps: Vec<Step>) -> Result<Self> {
        self.levels.insert(level, steps);
        self.validate()?;
        Ok(self)
    }

    pub fn with_rule(mut self, rule: LevelRule) -> Self {
        self.level_rule = rule;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: StepSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps.is_empty() {
            return Err(Error::InvalidSteps("empty step list".into()));
        }
        if self.levels.len() > 256 {
            return Err(Error::InvalidSteps("more than 256 level overrides".into()));
        }
        for s in self.all_steps() {
            if s.dx == 0 && s.dy == 0 {
                return Err(Error::InvalidSteps("(0,0) is not a step".into()));
            }
            if s.dx.abs() > MAX_STEP || s.dy.abs() > MAX_STEP {
                return Err(Error::InvalidSteps(format!("step ({},{}) exceeds {MAX_STEP}", s.dx, s.dy)));
            }
        }
        Ok(())
    }

    fn all_steps(&self) -> impl Iterator<Item = &Step> {
        self.steps.iter().chain(self.levels.values().flatten())
    }

    /// Step sets indexed as `0 = steps`, `i + 1 = i`-th override.
    fn sets(&self) -> Vec<&[Step]> {
        std::iter::once(self.steps.as_slice()).chain(self.levels.values().map(Vec::as_slice)).collect()
    }

    fn set_index(&self, level: i64) -> usize {
        self.levels.keys().position(|&l| l == level).map_or(0, |i| i + 1)
    }

    /// `(alpha, beta)` with step polynomial `sum alpha_i x^i + y x sum beta_j x^j`,
    /// when every step is `(i, 0)` or `(j + 1, 1)` with `i, j + 1 >= 1`.
    pub fn proposition_form(&self) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
        if !self.levels.is_empty() {
            return None;
        }
        let mut alpha: Vec<BigInt> = Vec::new();
        let mut beta: Vec<BigInt> = Vec::new();
        for s in &self.steps {
            if s.dx < 1 || !(0..=1).contains(&s.dy) {
                return None;
            }
            let (v, i) = if s.dy == 0 { (&mut alpha, s.dx - 1) } else { (&mut beta, s.dx - 1) };
            let i = i as usize;
            if v.len() <= i {
                v.resize(i + 1, BigInt::zero());
            }
            v[i] += s.w;
        }
        Some((alpha, beta))
    }
}

/// Smallest `(alpha, beta)` by `|alpha| + |beta|`, then by `alpha`, with
/// `alpha dx + beta dy >= 1` on every step, searched in `[-8, 8]^2`.
pub fn find_potential(spec: &StepSpec) -> Result<Potential> {
    let steps: Vec<Step> = spec.all_steps().filter(|s| s.w != 0).cloned().collect();
    let mut best: Option<Potential> = None;
    for alpha in -POTENTIAL_BOX..=POTENTIAL_BOX {
        for beta in -POTENTIAL_BOX..=POTENTIAL_BOX {
            let p = Potential { alpha, beta };
            if !p.certifies(&steps) {
                continue;
            }
            let key = |p: Potential| (p.alpha.abs() + p.beta.abs(), p.alpha);
            if best.is_none_or(|b| key(p) < key(b)) {
                best = Some(p);
            }
        }
    }
    best.ok_or(Error::NoPotential(POTENTIAL_BOX))
}

/// Weighted path counts from the origin to every point of `targets`,
/// using the given potential to order the computation.
fn push_counts(
    spec: &StepSpec,
    potential: Potential,
    targets: impl Iterator<Item = (i64, i64)>,
) -> Result<HashMap<(i64, i64), BigInt>> {
    if !potential.certifies(&spec.all_steps().filter(|s| s.w != 0).cloned().collect::<Vec<_>>()) {
        return Err(Error::InvalidSteps(format!("{potential:?} does not increase along every step")));
    }
    let limit = targets.filter(|&(n, k)| spec.region.contains(n, k)).map(|(n, k)| potential.at(n, k)).max();
    let Some(limit) = limit else {
        return Ok(HashMap::new());
    };
    let sets = spec.sets();
    let mut counts: HashMap<(i64, i64), BigInt> = HashMap::new();
    let mut queue: BTreeSet<(i64, i64, i64)> = BTreeSet::new();
    if spec.region.contains(0, 0) {
        counts.insert((0, 0), BigInt::one());
        queue.insert((0, 0, 0));
    }
    while let Some((_, n, k)) = queue.pop_first() {
        let c = counts[&(n, k)].clone();
        if c.is_zero() {
            continue;
        }
        for (j, set) in sets.iter().enumerate() {
            if spec.level_rule == LevelRule::Departure && spec.set_index(k) != j {
                continue;
            }
            for s in set.iter().filter(|s| s.w != 0) {
                let (m, l) = (n + s.dx, k + s.dy);
                if spec.level_rule == LevelRule::Arrival && spec.set_index(l) != j {
                    continue;
                }
                let p = potential.at(m, l);
                if p > limit || !spec.region.contains(m, l) {
                    continue;
                }
                let entry = counts.entry((m, l)).or_insert_with(|| {
                    queue.insert((p, m, l));
                    BigInt::zero()
                });
                *entry += &c * s.w;
            }
        }
        if counts.len() > MAX_POINTS {
            return Err(Error::InvalidSteps(format!("more than {MAX_POINTS} reachable points")));
        }
    }
    Ok(counts)
}

/// The `size x size` block of path counts `t(n, k)`, `0 <= n, k < size`.
pub fn count_paths(spec: &StepSpec, size: usize) -> Result<IntMatrix> {
    count_paths_with(spec, size, find_potential(spec)?)
}

/// [`count_paths`] with a caller-chosen potential.
pub fn count_paths_with(spec: &StepSpec, size: usize, potential: Potential) -> Result<IntMatrix> {
    spec.validate()?;
    let s = size as i64;
    let window = (0..s).flat_map(|n| (0..s).map(move |k| (n, k)));
    let counts = push_counts(spec, potential, window)?;
    let shape = match spec.region {
        Region::Triangle => Shape::LowerTriangular,
        _ => Shape::Square,
    };
    let mut m = IntMatrix::zeros(size, size, shape);
    for n in 0..size {
        for k in 0..size {
            if let Some(v) = counts.get(&(n as i64, k as i64)) {
                m.set(n, k, v.clone());
            }
        }
    }
    Ok(m)
}

/// Row sums of [`count_paths`].
pub fn left_factors(spec: &StepSpec, len: usize) -> Result<Vec<BigInt>> {
    Ok(count_paths(spec, len)?.row_sums())
}

/// Checks that `(1 - h/y) / (1 - P(x, y))`, with `P` the step polynomial,
/// has no terms in negative powers of `y` inside `y_window` and agrees with
/// the matrix of `r` on the nonnegative ones, to `order_x` terms in `x`.
///
/// The coefficient of `y^k` in `1/(1 - P)` is the count of unrestricted
/// paths ending at level `k`, which is computed directly.
pub fn verify_factorization(
    r: &RiordanArray,
    spec: &StepSpec,
    h: &Series,
    order_x: usize,
    y_window: (i64, i64),
) -> Result<bool> {
    if !spec.levels.is_empty() {
        return Err(Error::InvalidSteps("factorization needs a single step set".into()));
    }
    if h.order() < order_x {
        return Err(Error::OrderExceeded { index: order_x - 1, order: h.order() });
    }
    let (lo, hi) = y_window;
    let plane = StepSpec { region: Region::Plane, ..spec.clone() };
    let potential = find_potential(&plane)?;
    let nx = order_x as i64;
    let targets = (0..nx).flat_map(|n| (lo..=hi + 1).map(move |k| (n, k)));
    let counts = push_counts(&plane, potential, targets)?;
    let level = |k: i64| {
        let coeffs: Vec<BigInt> = (0..nx).map(|n| counts.get(&(n, k)).cloned().unwrap_or_default()).collect();
        Series::from_bigints(&coeffs, order_x)
    };
    let m = r.matrix(order_x)?;
    let h = h.truncate(order_x);
    for k in lo..=hi {
        let c = &level(k) - &(&h * &level(k + 1));
        let expected: Vec<BigInt> = if k < 0 || k >= nx { vec![BigInt::zero(); order_x] } else { m.column(k as usize) };
        if c != Series::from_bigints(&expected, order_x) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    fn spec(pairs: &[(i64, i64)]) -> StepSpec {
        StepSpec::from_pairs(pairs, Region::Triangle).unwrap()
    }

    fn row(m: &IntMatrix, n: usize) -> Vec<i64> {
        m.row(n).iter().map(|v| i64::try_from(v).unwrap()).collect()
    }

    /// Backward recurrence over an explicit grid, for unit-weight steps
    /// with `dx >= 1`.
    fn naive(pairs: &[(i64, i64)], size: usize) -> Vec<Vec<i64>> {
        let mut t = vec![vec![0i64; size]; size];
        t[0][0] = 1;
        for n in 1..size {
            for k in 0..=n {
                t[n][k] = pairs
                    .iter()
                    .filter_map(|&(dx, dy)| {
                        let (m, l) = (n as i64 - dx, k as i64 - dy);
                        (m >= 0 && l >= 0 && l <= m).then(|| t[m as usize][l as usize])
                    })
                    .sum();
            }
        }
        t
    }

    #[test]
    fn potentials() {
        assert_eq!(find_potential(&spec(&[(1, 1), (0, -1)])).unwrap(), Potential { alpha: 2, beta: -1 });
        assert_eq!(find_potential(&spec(&[(1, 0), (1, 1), (2, 1)])).unwrap(), Potential { alpha: 1, beta: 0 });
        assert_eq!(find_potential(&spec(&[(1, 1), (-1, -2)])).unwrap(), Potential { alpha: 3, beta: -2 });
        assert_eq!(find_potential(&spec(&[(1, 0), (-1, 0)])), Err(Error::NoPotential(8)));
    }

    #[test]
    fn delannoy_and_catalan() {
        assert_eq!(row(&count_paths(&spec(&[(1, 0), (1, 1), (2, 1)]), 7).unwrap(), 4)[..5], [1, 7, 13, 7, 1]);
        assert_eq!(row(&count_paths(&spec(&[(1, 1), (0, -1)]), 7).unwrap(), 4)[..5], [14, 14, 9, 4, 1]);
        assert_eq!(row(&count_paths(&spec(&[(1, 1), (-1, -2)]), 7).unwrap(), 4)[..5], [55, 30, 12, 4, 1]);
    }

    #[test]
    fn agrees_with_naive_recurrence() {
        let pairs = [(1, 0), (2, 0), (1, 1), (3, 1), (2, 2)];
        let m = count_paths(&spec(&pairs), 10).unwrap();
        let t = naive(&pairs, 10);
        for (n, expected) in t.iter().enumerate() {
            assert_eq!(&row(&m, n), expected);
        }
    }

    #[test]
    fn any_valid_potential_gives_the_same_counts() {
        let s = spec(&[(1, 1), (0, -1), (1, 0)]);
        let a = count_paths(&s, 8).unwrap();
        let b = count_paths_with(&s, 8, Potential { alpha: 3, beta: -1 }).unwrap();
        assert_eq!(a, b);
        assert!(count_paths_with(&s, 8, Potential { alpha: 1, beta: 0 }).is_err());
    }

    #[test]
    fn delannoy_square() {
        let q = StepSpec::from_pairs(&[(1, 0), (0, 1), (1, 1)], Region::Quadrant).unwrap();
        assert_eq!(row(&count_paths(&q, 5).unwrap(), 2), vec![1, 5, 13, 25, 41]);
    }

    #[test]
    fn weighted_steps() {
        let s = StepSpec::new(vec![Step::new(1, 0), Step::weighted(2, 1, 1)], Region::Triangle).unwrap();
        assert_eq!(left_factors(&s, 5).unwrap(), [1, 3, 9, 27, 81].map(int).to_vec());
        let formal = StepSpec::new(
            vec![Step::new(1, 0), Step::new(1, 1), Step::weighted(-1, 2, 1), Step::new(0, -1)],
            Region::Triangle,
        )
        .unwrap();
        assert_eq!(row(&count_paths(&formal, 4).unwrap(), 3), vec![15, 10, 4, 1]);
    }

    #[test]
    fn left_factor_counts() {
        let s = spec(&[(1, 0), (2, 0), (1, 1), (2, 1)]);
        assert_eq!(left_factors(&s, 7).unwrap(), [1, 2, 6, 16, 44, 120, 328].map(int).to_vec());
        assert_eq!(left_factors(&spec(&[(1, 0)]), 4).unwrap(), vec![int(1); 4]);
    }

    #[test]
    fn uniform_levels_change_nothing() {
        let pairs = [(1, 1), (1, 0), (0, -1)];
        let plain = spec(&pairs);
        let steps: Vec<Step> = pairs.iter().map(|&(a, b)| Step::new(a, b)).collect();
        let levelled = plain.clone().with_level(0, steps.clone()).unwrap().with_level(2, steps).unwrap();
        assert_eq!(count_paths(&plain, 8).unwrap(), count_paths(&levelled, 8).unwrap());
        let departure = levelled.with_rule(LevelRule::Departure);
        assert_eq!(count_paths(&plain, 8).unwrap(), count_paths(&departure, 8).unwrap());
    }

    #[test]
    fn level_rules_differ() {
        // Level 1 admits only horizontal steps.
        let s = spec(&[(1, 0), (1, 1)]).with_level(1, vec![Step::new(1, 0)]).unwrap();
        let arrival = count_paths(&s, 4).unwrap();
        let departure = count_paths(&s.clone().with_rule(LevelRule::Departure), 4).unwrap();
        assert_eq!(row(&arrival, 3), vec![1, 0, 0, 0]);
        assert_eq!(row(&departure, 3), vec![1, 3, 0, 0]);
    }

    #[test]
    fn proposition_form() {
        let (a, b) = spec(&[(1, 0), (1, 1), (2, 1)]).proposition_form().unwrap();
        assert_eq!((a, b), (vec![int(1)], vec![int(1), int(1)]));
        assert!(spec(&[(1, 1), (0, -1)]).proposition_form().is_none());
    }

    #[test]
    fn factorizations() {
        let dyck = RiordanArray::parse("(1-sqrt(1-4*x^2))/(2*x^2)", "(1-sqrt(1-4*x^2))/(2*x)", 20).unwrap();
        let steps = spec(&[(1, 1), (1, -1)]);
        assert!(verify_factorization(&dyck, &steps, dyck.f(), 16, (-8, 16)).unwrap());
        assert!(!verify_factorization(&dyck, &steps, dyck.g(), 16, (-8, 16)).unwrap());
        let c = Series::parse("(1-sqrt(1-4*x))/(2*x)", 20).unwrap();
        let cat = RiordanArray::bell(c.clone()).unwrap();
        assert!(verify_factorization(&cat, &spec(&[(1, 1), (0, -1)]), &c, 16, (-8, 16)).unwrap());
    }

    #[test]
    fn json() {
        let s = StepSpec::from_json(
            r#"{"steps":[{"dx":1,"dy":1,"w":1},{"dx":0,"dy":-1}],"region":"quadrant","levels":{"0":[{"dx":1,"dy":0,"w":2}]}}"#,
        )
        .unwrap();
        assert_eq!(s.region, Region::Quadrant);
        assert_eq!(s.levels[&0], vec![Step::weighted(2, 1, 0)]);
        assert_eq!(StepSpec::from_json(&s.to_json()).unwrap(), s);
        assert!(StepSpec::from_json(r#"{"steps":[]}"#).is_err());
        assert!(StepSpec::from_json(r#"{"steps":[{"dx":0,"dy":0}]}"#).is_err());
        assert!(StepSpec::from_json(r#"{"steps":[{"dx":1000,"dy":0}]}"#).is_err());
        assert!(StepSpec::from_json(r#"{"steps":[{"dx":1,"dy":0}],"region":"disc"}"#).is_err());
    }
}
