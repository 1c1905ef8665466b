//! Redundancy maps: the general bound over a 1-D or 2-D grid of known
//! probabilities, with any further known probabilities held fixed.
//!
//! Each row carries the exact value, its decimal rendering and an identifier
//! of the best code, stable within one sweep, so regions where the same code
//! is optimal can be told apart.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::exec::Exec;
use crate::optimize::BoundResult;
use crate::prune::r_min_star;
use crate::source::SubSource;

#[derive(Debug, Clone)]
pub struct MapGrid {
    /// 1 for `p1` only, 2 for `(p1, p2)`.
    pub axes: usize,
    pub step: Rational,
    pub lo: Rational,
    pub hi: Rational,
    /// Known probabilities after the swept ones.
    pub fixed: Vec<Rational>,
}

impl MapGrid {
    /// Sweeps `step, 2·step, …` up to 1.
    pub fn new(axes: usize, step: Rational, fixed: Vec<Rational>) -> Self {
        MapGrid { axes, lo: step.clone(), step, hi: Rational::one(), fixed }
    }

    pub fn axis(&self) -> Result<Vec<Rational>> {
        if !self.step.is_positive() {
            return Err(Error::Domain(format!("grid step must be positive, got {}", self.step)));
        }
        if !self.lo.is_positive() || self.lo > self.hi {
            return Err(Error::Domain(format!("grid range [{}, {}] is empty or not positive", self.lo, self.hi)));
        }
        let count = ((&self.hi - &self.lo) / &self.step).floor().to_integer().to_usize().unwrap_or(0) + 1;
        Ok((0..count).map(|i| &self.lo + &self.step * Rational::from_integer(i.into())).collect())
    }

    /// Grid coordinates whose known probabilities form a valid sub-source
    /// admitting a binary code, in row-major order.
    pub fn points(&self) -> Result<Vec<Vec<Rational>>> {
        if !(1..=2).contains(&self.axes) {
            return Err(Error::Domain(format!("maps have 1 or 2 axes, got {}", self.axes)));
        }
        let axis = self.axis()?;
        let mut coords: Vec<Vec<Rational>> = axis.iter().map(|p| vec![p.clone()]).collect();
        if self.axes == 2 {
            coords = coords
                .into_iter()
                .flat_map(|c| axis.iter().map(move |p| vec![c[0].clone(), p.clone()]))
                .collect();
        }
        Ok(coords.into_iter().filter(|c| self.sub_source(c).is_some()).collect())
    }

    fn sub_source(&self, coords: &[Rational]) -> Option<SubSource> {
        let probs: Vec<Rational> = coords.iter().chain(&self.fixed).cloned().collect();
        let x = SubSource::known(&probs).ok()?;
        (!(x.is_complete() && x.len() < 2)).then_some(x)
    }
}

#[derive(Debug, Clone)]
pub struct MapRow {
    pub coords: Vec<Rational>,
    pub result: BoundResult,
    pub code_id: usize,
}

/// Computes the bound at every admissible grid point.
pub fn sweep(grid: &MapGrid, exec: Exec) -> Result<Vec<MapRow>> {
    let points = grid.points()?;
    let results = exec.map(&points, |c| r_min_star(&grid.sub_source(c).expect("filtered point")));
    let mut ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut rows = Vec::with_capacity(points.len());
    for (coords, result) in points.into_iter().zip(results) {
        let result = result?;
        let next = ids.len();
        let code_id = *ids.entry(result.best_code.to_string()).or_insert(next);
        rows.push(MapRow { coords, result, code_id });
    }
    Ok(rows)
}

/// `p1[,p2],exact,decimal,best_code_id,best_code` with exact rational
/// coordinates; the exact value and the code are quoted.
pub fn to_csv(rows: &[MapRow], axes: usize, digits: usize) -> String {
    let mut out = String::from(if axes == 2 { "p1,p2" } else { "p1" });
    out.push_str(",exact,decimal,best_code_id,best_code\n");
    for row in rows {
        let coords: Vec<String> = row.coords.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            out,
            "{},\"{}\",{},{},\"{}\"",
            coords.join(","),
            row.result.value,
            row.result.value.to_decimal(digits),
            row.code_id,
            row.result.best_code
        );
    }
    out
}
