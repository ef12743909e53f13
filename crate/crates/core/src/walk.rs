//! The reduced random walk in the half-plane: seeded trajectories with a
//! certified boundary arc for the limit `ζ`, batch sampling, and the
//! disk-model coupling experiment.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::ops::Range;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::hyperbolic::{arc_length, Arc, Boundary, HLine, HPoint, Side};
use crate::triangle::{contraction_constant, GroupElement, TriangleConfig, TriangleError};

/// Narrowest bracket a walk will try to reach. Below this the `f64` line
/// images are too close to the boundary for the arc ends to be reliable.
pub const WIDTH_FLOOR: f64 = 1e-10;

/// Line fingerprints round parameters to this grid.
pub const FINGERPRINT_QUANTUM: f64 = 1e-9;

/// Per-walk random stream: ChaCha8 keyed by the seed, with the walk index
/// as stream id and the step as block counter.
pub fn walk_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A crossed line of the arrangement, identified by its model form and
/// rounded parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LineRecord {
    Vertical(i64),
    Semicircle(i64, i64),
}

impl LineRecord {
    pub fn of(line: HLine) -> Self {
        let q = |v: f64| (v / FINGERPRINT_QUANTUM).round() as i64;
        match line {
            HLine::Vertical(x) => LineRecord::Vertical(q(x)),
            HLine::Semicircle(c, r) => LineRecord::Semicircle(q(c), q(r)),
        }
    }
}

/// A line crossed by the walk and the side it was crossed into.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub step: usize,
    pub line: LineRecord,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkState {
    pub step: usize,
    pub z: HPoint,
    pub element: GroupElement,
    pub crossed: Vec<Crossing>,
    /// Boundary arc (in Cayley angle) containing the limit.
    pub bracket: Arc,
    pub last_lazy: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkStatus {
    /// Bracket narrower than the requested width.
    Converged,
    /// Step budget used up first.
    BudgetExhausted,
    /// Bracket reached [`WIDTH_FLOOR`] before the (smaller) target.
    PrecisionFloor,
    /// A descent test fell inside the tolerance band.
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub step: usize,
    pub re: f64,
    pub im: f64,
    pub lazy: bool,
    pub bracket_lo: Boundary,
    pub bracket_hi: Boundary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkReport {
    pub seed: u64,
    pub stream: u64,
    pub steps_taken: usize,
    pub length: usize,
    pub status: WalkStatus,
    /// Bracket midpoint mapped back to the extended real line; `None` while
    /// the bracket is the whole circle.
    pub zeta_estimate: Option<Boundary>,
    /// The final bracket contains `∞`.
    pub unbounded_side: bool,
    pub bracket: Arc,
    pub bracket_width: f64,
    pub trajectory: Vec<TrajectoryPoint>,
}

impl WalkReport {
    /// `ζ` as an `f64`, `+∞` when the estimate is `∞` or missing.
    pub fn zeta_f64(&self) -> f64 {
        self.zeta_estimate.map_or(f64::INFINITY, Boundary::to_f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkOptions {
    pub max_steps: usize,
    pub target_width: f64,
    /// Record every `n`-th state in the trajectory (and the last one).
    pub trajectory_stride: Option<usize>,
}

impl WalkOptions {
    pub fn new(max_steps: usize, target_width: f64) -> Self {
        WalkOptions {
            max_steps,
            target_width,
            trajectory_stride: None,
        }
    }
}

/// A single walk advanced one step at a time.
pub struct Walker<'a> {
    config: &'a TriangleConfig,
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
    state: WalkState,
    far_points: [Boundary; 3],
}

impl<'a> Walker<'a> {
    pub fn new(config: &'a TriangleConfig, seed: u64, stream: u64) -> Self {
        let far_points = [1, 2, 3].map(|i| far_arc_point(config, i));
        Walker {
            config,
            seed,
            stream,
            rng: walk_rng(seed, stream),
            state: WalkState {
                step: 0,
                z: config.basepoint(),
                element: GroupElement::identity(),
                crossed: Vec::new(),
                bracket: Arc::full(),
                last_lazy: false,
            },
            far_points,
        }
    }

    pub fn state(&self) -> &WalkState {
        &self.state
    }

    /// Draws the next index and applies `u ← u ⋆ s_i`. Returns the index.
    pub fn step(&mut self) -> Result<usize, TriangleError> {
        let i: usize = self.rng.gen_range(1..=3);
        let w = &self.state.element;
        if self.config.right_descent(w, i)? {
            self.state.step += 1;
            self.state.last_lazy = true;
            return Ok(i);
        }
        let iso = *w.isometry();
        let line = self.config.line(i);
        let image = iso.apply_line(line)?;
        let (a, b) = line.ideal_points();
        let (alpha, beta) = (iso.apply_boundary(a).angle(), iso.apply_boundary(b).angle());
        let inside = iso.apply_boundary(self.far_points[i - 1]).angle();
        let forward = Arc {
            start: alpha,
            len: arc_length(alpha, beta),
        };
        let far = if forward.contains(inside) {
            forward
        } else {
            Arc {
                start: beta,
                len: arc_length(beta, alpha),
            }
        };
        self.config.extend(&mut self.state.element, i);
        let z = self.state.element.apply(self.config.basepoint());
        if let Some(b) = self.state.bracket.intersect(&far, inside) {
            self.state.bracket = b;
        }
        self.state.crossed.push(Crossing {
            step: self.state.step + 1,
            line: LineRecord::of(image),
            side: image.side_of(z),
        });
        self.state.z = z;
        self.state.step += 1;
        self.state.last_lazy = false;
        Ok(i)
    }

    fn trajectory_point(&self) -> TrajectoryPoint {
        let s = &self.state;
        TrajectoryPoint {
            step: s.step,
            re: s.z.re,
            im: s.z.im,
            lazy: s.last_lazy,
            bracket_lo: Boundary::from_angle(s.bracket.start),
            bracket_hi: Boundary::from_angle(s.bracket.end()),
        }
    }

    /// Runs until the bracket is narrower than the target, the floor is hit
    /// or the budget is used up.
    pub fn run(mut self, opts: &WalkOptions) -> WalkReport {
        let mut trajectory = Vec::new();
        let stride = opts.trajectory_stride;
        if stride.is_some() {
            trajectory.push(self.trajectory_point());
        }
        let status = loop {
            let width = self.state.bracket.len;
            if width < opts.target_width {
                break WalkStatus::Converged;
            }
            if width < WIDTH_FLOOR {
                break WalkStatus::PrecisionFloor;
            }
            if self.state.step >= opts.max_steps {
                break WalkStatus::BudgetExhausted;
            }
            if self.step().is_err() {
                break WalkStatus::Degenerate;
            }
            if let Some(n) = stride {
                if self.state.step % n.max(1) == 0 {
                    trajectory.push(self.trajectory_point());
                }
            }
        };
        if let Some(n) = stride {
            if self.state.step % n.max(1) != 0 {
                trajectory.push(self.trajectory_point());
            }
        }
        let bracket = self.state.bracket;
        let (zeta_estimate, unbounded_side) = if bracket.is_full() {
            (None, false)
        } else {
            (Some(Boundary::from_angle(bracket.midpoint())), bracket.contains(0.0))
        };
        WalkReport {
            seed: self.seed,
            stream: self.stream,
            steps_taken: self.state.step,
            length: self.state.element.length(),
            status,
            zeta_estimate,
            unbounded_side,
            bracket,
            bracket_width: bracket.len,
            trajectory,
        }
    }
}

/// A boundary point strictly on the far side of `L_i` from the basepoint.
fn far_arc_point(config: &TriangleConfig, i: usize) -> Boundary {
    let line = config.line(i);
    let (a, b) = line.ideal_points();
    let (alpha, beta) = (a.angle(), b.angle());
    let mid = Boundary::from_angle(alpha + arc_length(alpha, beta) / 2.0);
    if line.side_of_boundary(mid) == config.basepoint_side(i) {
        Boundary::from_angle(beta + arc_length(beta, alpha) / 2.0)
    } else {
        mid
    }
}

/// One walk on stream 0 of `seed`.
pub fn run_walk(config: &TriangleConfig, seed: u64, opts: &WalkOptions) -> WalkReport {
    run_walk_stream(config, seed, 0, opts)
}

pub fn run_walk_stream(config: &TriangleConfig, seed: u64, stream: u64, opts: &WalkOptions) -> WalkReport {
    Walker::new(config, seed, stream).run(opts)
}

/// Sorted sample with its step-function CDF.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut sample: Vec<f64>) -> Self {
        sample.sort_by(f64::total_cmp);
        EmpiricalCdf { sorted: sample }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sample(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of the sample `≤ x`.
    pub fn eval(&self, x: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }
}

/// Per-walk summary kept by batch runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WalkSummary {
    pub stream: u64,
    pub zeta: f64,
    pub status: WalkStatus,
    pub steps_taken: usize,
    pub bracket_width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchSample {
    pub walks: Vec<WalkSummary>,
    pub cdf: EmpiricalCdf,
}

impl BatchSample {
    pub fn count(&self, status: WalkStatus) -> usize {
        self.walks.iter().filter(|w| w.status == status).count()
    }
}

/// Walks with stream ids in `streams`, in order.
pub fn batch_walks(config: &TriangleConfig, base_seed: u64, streams: Range<u64>, opts: &WalkOptions) -> Vec<WalkSummary> {
    let opts = WalkOptions {
        trajectory_stride: None,
        ..*opts
    };
    streams
        .into_par_iter()
        .map(|stream| {
            let r = run_walk_stream(config, base_seed, stream, &opts);
            WalkSummary {
                stream,
                zeta: r.zeta_f64(),
                status: r.status,
                steps_taken: r.steps_taken,
                bracket_width: r.bracket_width,
            }
        })
        .collect()
}

/// `n_walks` independent walks (streams `0..n_walks`) and the empirical CDF
/// of their `ζ` estimates.
pub fn batch_sample(config: &TriangleConfig, base_seed: u64, n_walks: u64, opts: &WalkOptions) -> BatchSample {
    let walks = batch_walks(config, base_seed, 0..n_walks, opts);
    let cdf = EmpiricalCdf::new(walks.iter().map(|w| w.zeta).collect());
    BatchSample { walks, cdf }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CouplingRow {
    pub m: usize,
    pub mean: f64,
    pub std_error: f64,
    /// `2((C + 2)/3)^m`.
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingTable {
    pub contraction: f64,
    pub pairs: usize,
    pub rows: Vec<CouplingRow>,
}

/// Runs `n_pairs` coupled boundary chains `X_{m+1} = τ_{i_{m+1}}(X_m)`,
/// `Y_{m+1} = τ_{i_{m+1}}(Y_m)` in the normalized disk from uniform
/// starting points, and tabulates the mean chord distance for
/// `m = 0..=m_max`.
pub fn coupling_experiment(config: &TriangleConfig, seed: u64, m_max: usize, n_pairs: usize) -> Result<CouplingTable, TriangleError> {
    let contraction = contraction_constant(config)?;
    let disk = contraction.disk;
    let distances: Vec<Vec<f64>> = (0..n_pairs as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = walk_rng(seed, k);
            let mut x = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
            let mut y = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
            let mut out = Vec::with_capacity(m_max + 1);
            out.push((x - y).norm());
            for _ in 0..m_max {
                let i: usize = rng.gen_range(1..=3);
                x = disk.tau(i, x);
                y = disk.tau(i, y);
                x /= x.norm();
                y /= y.norm();
                out.push((x - y).norm());
            }
            out
        })
        .collect();
    let n = n_pairs.max(1) as f64;
    let ratio = (contraction.constant + 2.0) / 3.0;
    let rows = (0..=m_max)
        .map(|m| {
            let mean = distances.iter().map(|d| d[m]).sum::<f64>() / n;
            let var = distances.iter().map(|d| (d[m] - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
            CouplingRow {
                m,
                mean,
                std_error: (var / n).sqrt(),
                bound: 2.0 * ratio.powi(m as i32),
            }
        })
        .collect();
    Ok(CouplingTable {
        contraction: contraction.constant,
        pairs: n_pairs,
        rows,
    })
}

/// CSV with columns `step,re,im,lazy,bracket_lo,bracket_hi`.
pub fn trajectory_csv(points: &[TrajectoryPoint]) -> String {
    let mut out = String::from("step,re,im,lazy,bracket_lo,bracket_hi\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            p.step, p.re, p.im, p.lazy as u8, p.bracket_lo, p.bracket_hi
        );
    }
    out
}
