//! Geometry export for fiber curves.
//!
//! A point `(t, y)` of the product of the circle and the sphere is embedded
//! in three-space as the radial shell `(1 + t) y`, so fibers over distinct
//! circle parameters land on distinct spheres. Curves are written either as
//! Wavefront OBJ (`v` records followed by `l` polylines, one object per
//! curve) or as JSON. All floats use a fixed nine-digit format so repeated
//! exports are byte-identical.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::fibering::FiberCurve;

#[derive(Clone, Debug)]
pub struct ExportCurve {
    pub label: String,
    pub samples: Vec<(f64, [f64; 3])>,
}

#[derive(Clone, Debug, Default)]
pub struct ExportScene {
    curves: Vec<ExportCurve>,
}

#[derive(Serialize, Deserialize)]
struct SceneJson {
    curves: Vec<CurveJson>,
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    label: String,
    t: Vec<f64>,
    points: Vec<[f64; 3]>,
}

fn embed(t: f64, y: [f64; 3]) -> [f64; 3] {
    let r = 1.0 + t;
    [r * y[0], r * y[1], r * y[2]]
}

impl ExportScene {
    pub fn new() -> ExportScene {
        ExportScene::default()
    }

    pub fn add_fiber(&mut self, label: &str, curve: &FiberCurve) {
        self.curves.push(ExportCurve {
            label: label.to_string(),
            samples: curve
                .samples()
                .iter()
                // the closing sample at t = 1 repeats t = 0 on the circle
                // and would leave the [1, 2) shell
                .filter(|&&(t, _)| t < 1.0)
                .map(|&(t, y)| (t, embed(t, y.0)))
                .collect(),
        });
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        let mut next_index = 1usize;
        for curve in &self.curves {
            writeln!(out, "o {}", curve.label).unwrap();
            for &(_, p) in &curve.samples {
                writeln!(out, "v {:.9} {:.9} {:.9}", p[0], p[1], p[2]).unwrap();
            }
            let indices: Vec<String> = (next_index..next_index + curve.samples.len())
                .map(|i| i.to_string())
                .collect();
            writeln!(out, "l {}", indices.join(" ")).unwrap();
            next_index += curve.samples.len();
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        let scene = SceneJson {
            curves: self
                .curves
                .iter()
                .map(|c| CurveJson {
                    label: c.label.clone(),
                    t: c.samples.iter().map(|&(t, _)| fix(t)).collect(),
                    points: c
                        .samples
                        .iter()
                        .map(|&(_, p)| [fix(p[0]), fix(p[1]), fix(p[2])])
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&scene).expect("scene serializes")
    }
}

/// Rounds to nine decimals so serialized output is stable across runs.
fn fix(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}
