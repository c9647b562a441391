//! The flat surface with a Jenkins–Strebel differential glued from half-infinite
//! tiles over a weighted ribbon graph.
//!
//! Each dart `d` of arc `α` carries a tile `[0, w(α)] × [0, ∞]`. Bottom edges
//! are glued by `(u, 0, →α) ~ (w(α) − u, 0, ←α)` and vertical sides by
//! `(w, v, d) ~ (0, v, σ∞ d)`. The bottom edges form the critical graph `G`,
//! whose vertices are the `σ0`-orbits; the tiles over one `σ∞`-orbit close up
//! into a half-infinite cylinder around a point at infinity.

mod svg;

use std::ops::Add;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

pub use svg::render_svg;

use crate::ribbon::{Dart, RibbonError, RibbonStructure};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum StrebelError {
    #[error(transparent)]
    Ribbon(#[from] RibbonError),
    #[error("{weights} weights for {arcs} arcs")]
    WeightCount { weights: usize, arcs: usize },
    #[error("arc {arc} has a negative weight")]
    NegativeWeight { arc: usize },
    #[error("improper system: {0}")]
    ImproperSystem(String),
}

/// Weights the construction can run on: `f64` or exact rationals.
pub trait Weight: Clone + Zero + PartialOrd + Add<Output = Self> + ToPrimitive + std::fmt::Debug {}

impl<W> Weight for W where W: Clone + Zero + PartialOrd + Add<Output = W> + ToPrimitive + std::fmt::Debug {}

/// A proper arc system with positive weights. Arcs given weight zero are
/// dropped on construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedRibbonGraph<W> {
    #[serde(skip)]
    ribbon: RibbonStructure,
    weights: Vec<W>,
    /// Index of each arc in the input system.
    host_arcs: Vec<usize>,
}

impl<W: Weight> WeightedRibbonGraph<W> {
    pub fn new(ribbon: &RibbonStructure, weights: Vec<W>) -> Result<Self, StrebelError> {
        if weights.len() != ribbon.n_arcs() {
            return Err(StrebelError::WeightCount {
                weights: weights.len(),
                arcs: ribbon.n_arcs(),
            });
        }
        if let Some(arc) = (0..weights.len()).find(|&k| weights[k] < W::zero()) {
            return Err(StrebelError::NegativeWeight { arc });
        }
        let support: Vec<usize> = (0..weights.len()).filter(|&k| !weights[k].is_zero()).collect();
        let (restricted, hosts) = ribbon.restrict(&support)?;
        let report = restricted.classify_complement();
        if !report.proper {
            return Err(StrebelError::ImproperSystem(format!(
                "{} regions, {} arcs, {} boundary orbits on a surface with {} circles",
                report.vertices,
                report.edges,
                report.faces,
                restricted.signature().n_boundary()
            )));
        }
        let weights = hosts.iter().map(|&k| weights[k].clone()).collect();
        Ok(Self {
            ribbon: restricted,
            weights,
            host_arcs: hosts,
        })
    }

    pub fn ribbon(&self) -> &RibbonStructure {
        &self.ribbon
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn host_arcs(&self) -> &[usize] {
        &self.host_arcs
    }

    pub fn is_trivalent(&self) -> bool {
        self.ribbon.sigma0_perm().orbits().iter().all(|o| o.len() == 3)
    }
}

/// The tile `[0, w] × [0, ∞]` over one dart.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tile<W> {
    pub dart: Dart,
    pub width: W,
    /// Bottom edge glued with reversed parameter to this tile.
    pub bottom_partner: Dart,
    /// Right side glued to the left side of this tile.
    pub right_neighbor: Dart,
    /// Vertex of `G` at the bottom-left corner.
    pub left_vertex: usize,
}

/// A vertex of the critical graph, with the darts whose tiles have their
/// bottom-left corner there, in cyclic order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphVertex {
    pub darts: Vec<Dart>,
    pub valence: usize,
}

/// The edge `α*` of `G` dual to arc `α`; its flat length is `w(α)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphEdge<W> {
    pub arc: usize,
    pub host_arc: usize,
    pub length: W,
    /// Vertices at the start and end of the bottom edge of the `→α` tile.
    pub ends: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CylinderData<W> {
    pub circle: usize,
    pub circumference: W,
    /// Tiles around the cylinder, left to right.
    pub boundary_word: Vec<Dart>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlatTileComplex<W> {
    pub genus: usize,
    pub tiles: Vec<Tile<W>>,
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<GraphEdge<W>>,
    pub cylinders: Vec<CylinderData<W>>,
    #[serde(skip)]
    graph: WeightedRibbonGraph<W>,
}

/// Divisor of the differential: zero orders at vertices of `G` and the
/// double poles at the points at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorReport {
    pub valences: Vec<usize>,
    pub orders: Vec<i64>,
    pub zero_degree: i64,
    pub pole_count: usize,
    /// `4g − 4 + 2·#poles`, which `zero_degree` must equal.
    pub expected_zero_degree: i64,
}

impl DivisorReport {
    pub fn is_consistent(&self) -> bool {
        self.zero_degree == self.expected_zero_degree
    }
}

pub fn build_flat_surface<W: Weight>(g: &WeightedRibbonGraph<W>) -> Result<FlatTileComplex<W>, StrebelError> {
    let r = &g.ribbon;
    let mut vertex_of = vec![0; r.n_darts()];
    let vertices: Vec<GraphVertex> = r
        .sigma0_perm()
        .orbits()
        .into_iter()
        .enumerate()
        .map(|(v, orbit)| {
            for &d in &orbit {
                vertex_of[d] = v;
            }
            GraphVertex {
                valence: orbit.len(),
                darts: orbit.into_iter().map(Dart).collect(),
            }
        })
        .collect();
    let tiles = r
        .darts()
        .map(|d| Tile {
            dart: d,
            width: g.weights[d.arc()].clone(),
            bottom_partner: d.reversed(),
            right_neighbor: r.sigma_inf(d),
            left_vertex: vertex_of[d.index()],
        })
        .collect();
    let edges = (0..r.n_arcs())
        .map(|k| {
            let fwd = Dart::forward(k);
            GraphEdge {
                arc: k,
                host_arc: g.host_arcs[k],
                length: g.weights[k].clone(),
                ends: [vertex_of[fwd.index()], vertex_of[r.sigma_inf(fwd).index()]],
            }
        })
        .collect();
    let cylinders: Vec<CylinderData<W>> = r
        .sigma_inf_perm()
        .orbits()
        .into_iter()
        .map(|orbit| {
            let circumference = orbit
                .iter()
                .fold(W::zero(), |acc, &d| acc + g.weights[d / 2].clone());
            CylinderData {
                circle: r.circle_of_dart()[orbit[0]],
                circumference,
                boundary_word: orbit.into_iter().map(Dart).collect(),
            }
        })
        .collect();
    let genus = r.signature().genus();
    let closed_euler = vertices.len() as i64 - r.n_arcs() as i64 + cylinders.len() as i64;
    if closed_euler != 2 - 2 * genus as i64 || cylinders.len() != r.signature().n_boundary() {
        return Err(StrebelError::ImproperSystem(format!(
            "closed-up surface has Euler characteristic {closed_euler}"
        )));
    }
    Ok(FlatTileComplex {
        genus,
        tiles,
        vertices,
        edges,
        cylinders,
        graph: g.clone(),
    })
}

impl<W: Weight> FlatTileComplex<W> {
    pub fn graph(&self) -> &WeightedRibbonGraph<W> {
        &self.graph
    }

    pub fn circumferences(&self) -> Vec<W> {
        self.cylinders.iter().map(|c| c.circumference.clone()).collect()
    }

    /// Vertices of `G` plus the points at infinity, minus edges of `G`, plus
    /// the discs around the points at infinity cut along `G`: the closed-up
    /// surface has one face per cylinder.
    pub fn closed_euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.cylinders.len() as i64
    }

    pub fn zero_orders(&self) -> DivisorReport {
        let valences: Vec<usize> = self.vertices.iter().map(|v| v.valence).collect();
        let orders: Vec<i64> = valences.iter().map(|&k| k as i64 - 2).collect();
        let pole_count = self.cylinders.len();
        DivisorReport {
            zero_degree: orders.iter().sum(),
            orders,
            valences,
            pole_count,
            expected_zero_degree: 4 * self.genus as i64 - 4 + 2 * pole_count as i64,
        }
    }

    /// `−(p/2π)²` per cylinder: the coefficient of `du²/u²` with
    /// `u = exp(2πi z / p)`.
    pub fn quadratic_residues(&self) -> Vec<f64> {
        self.cylinders
            .iter()
            .map(|c| quadratic_residue(c.circumference.to_f64().unwrap_or(f64::NAN)))
            .collect()
    }

    /// The level set `y = height > 0` as closed loops, found by following
    /// right-side gluings from tile to tile.
    pub fn horizontal_loops(&self, height: f64) -> Vec<HorizontalLoop<W>> {
        assert!(height > 0.0, "level sets at y = 0 are the critical graph");
        let mut seen = vec![false; self.tiles.len()];
        let mut loops = Vec::new();
        for start in 0..self.tiles.len() {
            if seen[start] {
                continue;
            }
            let mut tiles = Vec::new();
            let mut length = W::zero();
            let mut t = start;
            while !seen[t] {
                seen[t] = true;
                tiles.push(self.tiles[t].dart);
                length = length + self.tiles[t].width.clone();
                t = self.tiles[t].right_neighbor.index();
            }
            // a level line must close up where it started
            assert_eq!(t, start, "right gluings do not form a permutation");
            loops.push(HorizontalLoop { tiles, length });
        }
        loops
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HorizontalLoop<W> {
    pub tiles: Vec<Dart>,
    pub length: W,
}

pub fn quadratic_residue(circumference: f64) -> f64 {
    -(circumference / (2.0 * std::f64::consts::PI)).powi(2)
}
