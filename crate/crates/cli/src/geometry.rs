//! The geometry document written by `construct`: the arcs of `C_n` and every
//! barrier component of `B_n`, with areas.

use std::path::Path;

use leastgrad_core::barrier::{Barrier, BarrierComponent};
use leastgrad_core::cantor::{arcs, cantor_measure, theta, ArcAddress, Branch};
use leastgrad_core::planar::Segment2D;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::io::{read_text, write_bytes};
use crate::number::{pair, Pair, F17};

pub const GEOMETRY_FORMAT: &str = "leastgrad-geometry/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryDoc {
    pub format: String,
    pub provenance: String,
    pub depth: usize,
    pub theta: F17,
    pub measure: F17,
    pub arcs: Vec<ArcDoc>,
    pub components: Vec<ComponentDoc>,
    pub areas: AreasDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcDoc {
    pub index: u64,
    /// Branch choices from the root, `L` counterclockwise and `R` clockwise.
    pub path: String,
    pub start: F17,
    pub end: F17,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub index: u64,
    pub path: String,
    /// `W(A)`, by the angles of its arc.
    pub segment: SegmentDoc,
    /// Vertices of `T_0(A), ..., T_{n-1}(A)`, counterclockwise.
    pub polygons: Vec<Vec<Pair>>,
    /// `L_1(A), ..., L_{n+1}(A)` as endpoint pairs, left to right.
    pub links: Vec<[Pair; 2]>,
    pub bottom: BottomDoc,
    pub area: F17,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentDoc {
    pub start: F17,
    pub end: F17,
    pub area: F17,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BottomDoc {
    pub x_lo: F17,
    pub x_hi: F17,
    pub cut_height: F17,
    pub area: F17,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AreasDoc {
    pub segments: F17,
    pub polygons: F17,
    pub bottoms: F17,
    pub total: F17,
}

pub fn path_string(addr: &ArcAddress) -> String {
    addr.path()
        .iter()
        .map(|b| match b {
            Branch::Left => 'L',
            Branch::Right => 'R',
        })
        .collect()
}

fn link_doc(link: &Segment2D) -> [Pair; 2] {
    [pair(link.p.x, link.p.y), pair(link.q.x, link.q.y)]
}

fn component_doc(comp: &BarrierComponent) -> ComponentDoc {
    ComponentDoc {
        index: comp.address.index(),
        path: path_string(&comp.address),
        segment: SegmentDoc {
            start: F17(comp.segment.start_angle),
            end: F17(comp.segment.end_angle),
            area: F17(comp.segment.area()),
        },
        polygons: comp
            .polygons
            .iter()
            .map(|poly| poly.vertices().iter().map(|v| pair(v.x, v.y)).collect())
            .collect(),
        links: comp.links.iter().map(link_doc).collect(),
        bottom: BottomDoc {
            x_lo: F17(comp.bottom.x_lo),
            x_hi: F17(comp.bottom.x_hi),
            cut_height: F17(comp.bottom.cut_height),
            area: F17(comp.bottom.area()),
        },
        area: F17(comp.area()),
    }
}

impl GeometryDoc {
    pub fn build(barrier: &Barrier, provenance: &str) -> Result<Self> {
        let n = barrier.depth();
        let arc_list = arcs(n)?;
        let arcs = arc_list
            .iter()
            .enumerate()
            .map(|(i, arc)| {
                let addr = ArcAddress::from_index(n, i as u64)?;
                Ok(ArcDoc {
                    index: i as u64,
                    path: path_string(&addr),
                    start: F17(arc.start_angle()),
                    end: F17(arc.end_angle()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let comps = barrier.components();
        let segments: f64 = comps.iter().map(|c| c.segment.area()).sum();
        let polygons: f64 = comps.iter().flat_map(|c| c.polygons.iter().map(|p| p.area())).sum();
        let bottoms: f64 = comps.iter().map(|c| c.bottom.area()).sum();
        Ok(GeometryDoc {
            format: GEOMETRY_FORMAT.to_string(),
            provenance: provenance.to_string(),
            depth: n,
            theta: F17(theta(n)),
            measure: F17(cantor_measure(n)),
            arcs,
            components: comps.iter().map(component_doc).collect(),
            areas: AreasDoc {
                segments: F17(segments),
                polygons: F17(polygons),
                bottoms: F17(bottoms),
                total: F17(barrier.area()),
            },
        })
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("geometry serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_bytes(path, self.to_json().as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let doc = Self::from_json(&read_text(path)?).map_err(|e| CliError::format(path, e))?;
        if doc.format != GEOMETRY_FORMAT {
            return Err(CliError::format(path, format!("unknown format {:?}", doc.format)));
        }
        Ok(doc)
    }
}
