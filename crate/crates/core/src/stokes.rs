//! Complex `x = |x| e^{i theta}`, `0 < theta <= pi/2`.
//!
//! Adjacent saddles `s_k`, `s_{k+1}` (`k >= 1`) become connected by a
//! steepest-descent path when `Im psi(s_k) = Im psi(s_{k+1})`. Each such
//! angle removes one saddle in `Re s > 0` from the expansion as `theta`
//! grows, so the number of contributing right-hand saddles `K(theta)` is one
//! plus the number of connection angles above `theta`.
//!
//! Saddles are followed in `theta` by continuation from `pi/2` downward;
//! fresh asymptotic guesses are only used at the starting angle.

use std::f64::consts::{FRAC_PI_2, PI};

use log::warn;
use num_complex::Complex64;
use serde::Serialize;

use crate::context::ProblemContext;
use crate::error::{Error, Result};
use crate::expansion::{
    self, ExpansionResult, RealExpansionOptions, SaddleContribution, Truncation,
};
use crate::saddles::{self, Saddle};

/// Number of sweep steps over `(0, pi/2]`; the grid is quadratic in the
/// step index so that it is finest near `theta = 0`.
pub const SWEEP_STEPS: usize = 800;
/// Width in `theta` at which bisection stops.
pub const THETA_TOL: f64 = 1e-13;
/// Bound on `|Im psi(s_k) - Im psi(s_{k+1})|` at an accepted angle.
pub const CONNECTION_TOL: f64 = 1e-10;

const MAX_PAIRS: u32 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StokesEvent {
    /// The pair `(k, k + 1)`.
    pub k: u32,
    pub theta_star: f64,
    /// `|Im(psi(s_k) - psi(s_{k+1}))|` at `theta_star`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StokesChart {
    pub n: u32,
    pub abs_x: f64,
    /// Ordered by `k`; `theta_star` strictly decreases along the list.
    pub events: Vec<StokesEvent>,
    pub k_pairs_max: u32,
}

impl StokesChart {
    pub fn smallest_theta(&self) -> Option<f64> {
        self.events.last().map(|e| e.theta_star)
    }
}

fn theta_grid(floor: f64) -> impl Iterator<Item = f64> {
    (0..=SWEEP_STEPS)
        .rev()
        .map(|j| {
            let t = j as f64 / SWEEP_STEPS as f64;
            FRAC_PI_2 * t * t
        })
        .take_while(move |&th| th >= floor && th > 0.0)
}

fn ctx_at(n: u32, abs_x: f64, theta: f64) -> Result<ProblemContext> {
    ProblemContext::polar(n, abs_x, theta)
}

/// Refine every saddle in `ks` from the previous locations.
fn track(ks: &[i64], seeds: &[Complex64], ctx: &ProblemContext) -> Result<Vec<Complex64>> {
    ks.iter()
        .zip(seeds)
        .map(|(&k, &seed)| saddles::saddle_refine(k, seed, ctx).map(|s| s.s))
        .collect()
}

fn gap(k_index: usize, locs: &[Complex64], ctx: &ProblemContext) -> Result<f64> {
    let a = crate::phase::psi(locs[k_index], ctx)?;
    let b = crate::phase::psi(locs[k_index + 1], ctx)?;
    Ok((a - b).im)
}

/// Bisect the sign change of `pair` between `lo < hi`; `seeds` are
/// the pair's locations at `hi`.
fn bisect(
    n: u32,
    abs_x: f64,
    pair: [i64; 2],
    seeds: [Complex64; 2],
    mut lo: f64,
    mut hi: f64,
    gap_hi: f64,
) -> Result<(f64, f64)> {
    let mut pair_seeds = seeds.to_vec();
    for _ in 0..200 {
        if hi - lo <= THETA_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let ctx = ctx_at(n, abs_x, mid)?;
        let locs = track(&pair, &pair_seeds, &ctx)?;
        let g = gap(0, &locs, &ctx)?;
        if g.signum() == gap_hi.signum() {
            hi = mid;
            pair_seeds = locs;
        } else {
            lo = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    let ctx = ctx_at(n, abs_x, theta)?;
    let locs = track(&pair, &pair_seeds, &ctx)?;
    Ok((theta, gap(0, &locs, &ctx)?.abs()))
}

/// Connection angles above `floor` for pairs `(1,2) .. (pairs, pairs+1)`.
/// Entry `i` is `None` when pair `i + 1` has no connection above `floor`.
fn sweep(n: u32, abs_x: f64, pairs: u32, floor: f64) -> Result<Vec<Option<StokesEvent>>> {
    if abs_x.is_nan() || abs_x <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "|x| = {abs_x} must exceed 1"
        )));
    }
    let ks: Vec<i64> = (1..=i64::from(pairs) + 1).collect();
    let start = ctx_at(n, abs_x, FRAC_PI_2)?;
    let mut locs: Vec<Complex64> = ks
        .iter()
        .map(|&k| saddles::saddle_guess(k, &start))
        .collect();
    locs = track(&ks, &locs, &start)?;
    let mut gaps: Vec<f64> = (0..pairs as usize)
        .map(|i| gap(i, &locs, &start))
        .collect::<Result<_>>()?;
    let mut events: Vec<Option<StokesEvent>> = vec![None; pairs as usize];
    let mut prev_theta = FRAC_PI_2;
    for theta in theta_grid(floor).skip(1) {
        let ctx = ctx_at(n, abs_x, theta)?;
        let next = track(&ks, &locs, &ctx)?;
        for i in 0..pairs as usize {
            if events[i].is_some() {
                continue;
            }
            let g = gap(i, &next, &ctx)?;
            if g.signum() != gaps[i].signum() {
                let (theta_star, residual) = bisect(
                    n,
                    abs_x,
                    [ks[i], ks[i + 1]],
                    [locs[i], locs[i + 1]],
                    theta,
                    prev_theta,
                    gaps[i],
                )?;
                events[i] = Some(StokesEvent {
                    k: i as u32 + 1,
                    theta_star,
                    residual,
                });
            }
            gaps[i] = g;
        }
        locs = next;
        prev_theta = theta;
        if events.iter().all(Option::is_some) {
            break;
        }
    }
    Ok(events)
}

/// The angle at which `s_k` and `s_{k+1}` connect, or `None` when the pair
/// never connects in `(0, pi/2)`.
pub fn stokes_angle(k: u32, n: u32, abs_x: f64) -> Result<Option<f64>> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "pair index k must be at least 1".into(),
        ));
    }
    Ok(sweep(n, abs_x, k, 0.0)?[k as usize - 1].map(|e| e.theta_star))
}

/// Connection angles for pairs `1 ..= k_pairs_max`.
pub fn stokes_chart(n: u32, abs_x: f64, k_pairs_max: u32) -> Result<StokesChart> {
    if k_pairs_max == 0 || k_pairs_max > MAX_PAIRS {
        return Err(Error::InvalidParameter(format!(
            "k_pairs_max = {k_pairs_max} outside 1..={MAX_PAIRS}"
        )));
    }
    let found = sweep(n, abs_x, k_pairs_max, 0.0)?;
    let mut events = Vec::with_capacity(found.len());
    for (i, e) in found.into_iter().enumerate() {
        match e {
            Some(e) => events.push(e),
            None => return Err(Error::StokesNotFound { k: i as u32 + 1 }),
        }
    }
    Ok(StokesChart {
        n,
        abs_x,
        events,
        k_pairs_max,
    })
}

/// `K(theta)`: one plus the number of connection angles strictly above
/// `theta`. A `theta` exactly on a connection angle gets the smaller count.
pub fn contributing_count(theta: f64, chart: &StokesChart) -> Result<u32> {
    if !(theta > 0.0 && theta <= FRAC_PI_2 + 1e-15) {
        return Err(Error::Domain(format!("theta = {theta} outside (0, pi/2]")));
    }
    match chart.smallest_theta() {
        Some(min) if theta >= min => {}
        _ => {
            return Err(Error::InsufficientChart {
                theta_pi: theta / PI,
                needed: chart.k_pairs_max + 1,
            })
        }
    }
    Ok(1 + chart.events.iter().filter(|e| e.theta_star > theta).count() as u32)
}

/// `K(theta)` without a precomputed chart: sweeps only down to `theta`.
pub fn contributing_count_at(ctx: &ProblemContext) -> Result<u32> {
    let theta = ctx.theta().abs();
    if theta == 0.0 {
        return Err(Error::Domain(
            "K(0) is unbounded; every saddle contributes".into(),
        ));
    }
    let mut pairs = 4;
    loop {
        let events = sweep(ctx.n(), ctx.abs_x(), pairs, theta)?;
        let above = events
            .iter()
            .flatten()
            .filter(|e| e.theta_star > theta)
            .count() as u32;
        if above < pairs || pairs >= MAX_PAIRS {
            return Ok(1 + above);
        }
        pairs *= 2;
    }
}

/// `P_n(x^-2) ~ sum_{k = k_min}^{K(theta)} J_k` for complex `x`.
///
/// `k_min` is adaptive: the downward sum stops once past the largest
/// contribution and `|J_k|` falls below `1e-16 max |J|`. Negative `theta` is
/// handled by conjugation; `theta = 0` takes the real-axis route with the
/// same order `j_max` at every saddle.
pub fn expand_complex(ctx: &ProblemContext, j_max: usize) -> Result<ExpansionResult> {
    let theta = ctx.theta();
    if theta == 0.0 {
        return expansion::expand_real_with(
            ctx,
            &RealExpansionOptions {
                truncation: Truncation::uniform(j_max),
                k_max: None,
            },
        );
    }
    if theta < 0.0 {
        let mut r = expand_complex(&ctx.conj(), j_max)?;
        r.total = r.total.conj();
        r.scaled_total = r.scaled_total.conj();
        for c in &mut r.contributions {
            c.value = c.value.conj();
            c.prefactor = c.prefactor.conj();
            c.log_prefactor = c.log_prefactor.conj();
            c.series_terms.iter_mut().for_each(|t| *t = t.conj());
        }
        r.truncation_note
            .push_str("; evaluated at conj(x) and conjugated");
        return Ok(r);
    }
    let k_top = i64::from(contributing_count_at(ctx)?);
    let contributions = sum_downward(ctx, k_top, j_max)?;
    let k_min = contributions.last().map_or(k_top, |c| c.k);
    let peak = contributions
        .iter()
        .max_by(|a, b| a.log10_magnitude().total_cmp(&b.log10_magnitude()))
        .map_or(k_top, |c| c.k);
    let mut note = format!("j <= {j_max} for every k in {k_min}..={k_top}; K(theta) = {k_top}");
    if peak == k_min {
        warn!("dominant contribution sits at the k_min boundary ({k_min})");
        note.push_str("; dominant saddle at k_min boundary");
    }
    let mut contributions = contributions;
    contributions.reverse();
    Ok(expansion::assemble(contributions, note))
}

const K_FLOOR: i64 = -2000;

fn sum_downward(ctx: &ProblemContext, k_top: i64, j_max: usize) -> Result<Vec<SaddleContribution>> {
    let threshold = expansion::NEGLIGIBLE.log10();
    let mut out: Vec<SaddleContribution> = Vec::new();
    let mut best = f64::NEG_INFINITY;
    let mut best_k = k_top;
    let mut prev: Option<Saddle> = None;
    let mut k = k_top;
    while k >= K_FLOOR {
        let seed = prev.map(|p| p.s - 2.0 * PI);
        let saddle = saddles::refine_with_fallback(k, seed, ctx)?;
        let c = expansion::contribution_at(&saddle, j_max, ctx)?;
        let mag = c.log10_magnitude();
        if mag > best {
            best = mag;
            best_k = k;
        }
        out.push(c);
        prev = Some(saddle);
        if k < best_k.min(0) && mag - best < threshold {
            break;
        }
        k -= 1;
    }
    Ok(out)
}

/// `(k, log10 |J_k|)` over `k_lo ..= k_hi` with the full order-3 series.
pub fn contribution_profile(ctx: &ProblemContext, k_lo: i64, k_hi: i64) -> Result<Vec<(i64, f64)>> {
    let cat = saddles::saddle_catalog(k_lo, k_hi, ctx)?;
    cat.iter()
        .map(|s| {
            expansion::contribution_at(s, expansion::MAX_ORDER, ctx)
                .map(|c| (s.k, c.log10_magnitude()))
        })
        .collect()
}
