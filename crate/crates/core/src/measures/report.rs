use serde::{Deserialize, Serialize};

use super::{
    delta_correlation, information, irreality, ji_bounds, joint_irreality, mutual_information,
    onesided_discord_min, symmetric_discord, von_neumann_entropy,
};
use crate::error::{Error, Result};
use crate::linalg::Side;
use crate::qstate::document::ResolvedObservable;
use crate::qstate::DensityMatrix;

/// Named scalar results for one `(rho, X[, Y])` input. Entropic quantities are
/// in bits; fields that do not apply to the input are `None`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MeasureReport {
    #[serde(rename = "S")]
    pub entropy: f64,
    #[serde(rename = "I")]
    pub information: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutual_information: Option<f64>,
    #[serde(rename = "irreality_X")]
    pub irreality_x: f64,
    #[serde(rename = "irreality_Y", skip_serializing_if = "Option::is_none")]
    pub irreality_y: Option<f64>,
    #[serde(rename = "JI", skip_serializing_if = "Option::is_none")]
    pub ji: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ji_per_info: Option<f64>,
    #[serde(rename = "D_AB_symmetric", skip_serializing_if = "Option::is_none")]
    pub d_ab_symmetric: Option<f64>,
    #[serde(rename = "delta_XY", skip_serializing_if = "Option::is_none")]
    pub delta_xy: Option<f64>,
    #[serde(rename = "delta_YX", skip_serializing_if = "Option::is_none")]
    pub delta_yx: Option<f64>,
    #[serde(rename = "delta_XY_signed", skip_serializing_if = "Option::is_none")]
    pub delta_xy_signed: Option<f64>,
    #[serde(rename = "delta_YX_signed", skip_serializing_if = "Option::is_none")]
    pub delta_yx_signed: Option<f64>,
    #[serde(rename = "script_D", skip_serializing_if = "Option::is_none")]
    pub script_d: Option<f64>,
    #[serde(rename = "D_onesided_A", skip_serializing_if = "Option::is_none")]
    pub d_onesided_a: Option<f64>,
    #[serde(rename = "D_onesided_B", skip_serializing_if = "Option::is_none")]
    pub d_onesided_b: Option<f64>,
    #[serde(rename = "D_onesided_avg", skip_serializing_if = "Option::is_none")]
    pub d_onesided_avg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ji_lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ji_upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlap_c: Option<f64>,
}

/// Below this information the per-unit ratio is left undefined.
const INFO_FLOOR: f64 = 1e-12;

impl MeasureReport {
    /// Computes every quantity that applies. `JI`, bounds and the `delta`
    /// family need `y`; the symmetric discord needs `x` and `y` to be local
    /// observables on opposite sides; one-sided discords need a bipartition
    /// with a qubit on the measured side.
    pub fn compute(
        rho: &DensityMatrix,
        x: &ResolvedObservable,
        y: Option<&ResolvedObservable>,
    ) -> Result<Self> {
        let mut r = MeasureReport {
            entropy: von_neumann_entropy(rho)?,
            information: information(rho)?,
            irreality_x: irreality(rho, &x.observable)?,
            ..Default::default()
        };
        let dims = rho.bipartition();
        if dims.is_some() {
            r.mutual_information = Some(mutual_information(rho)?);
        }
        if let Some(y) = y {
            let (xo, yo) = (&x.observable, &y.observable);
            r.irreality_y = Some(irreality(rho, yo)?);
            let ji = joint_irreality(rho, xo, yo)?;
            r.ji = Some(ji);
            if r.information > INFO_FLOOR {
                r.ji_per_info = Some(ji / r.information);
            }
            let b = ji_bounds(rho, xo, yo)?;
            r.ji_lower = Some(b.lower);
            r.ji_upper = Some(b.upper);
            r.overlap_c = Some(b.overlap_c);
            if dims.is_some() {
                let dxy = delta_correlation(rho, xo, yo)?;
                let dyx = delta_correlation(rho, yo, xo)?;
                r.delta_xy = Some(dxy.value);
                r.delta_yx = Some(dyx.value);
                r.delta_xy_signed = Some(dxy.signed);
                r.delta_yx_signed = Some(dyx.signed);
                r.script_d = Some(0.5 * (dxy.value + dyx.value));
                if let (Some(lx), Some(ly)) = (&x.local, &y.local) {
                    if Some(lx.dims) == dims {
                        match (lx.side, ly.side) {
                            (Side::A, Side::B) => {
                                r.d_ab_symmetric =
                                    Some(symmetric_discord(rho, &lx.observable, &ly.observable)?)
                            }
                            (Side::B, Side::A) => {
                                r.d_ab_symmetric =
                                    Some(symmetric_discord(rho, &ly.observable, &lx.observable)?)
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
        if let Some((da, db)) = dims {
            if da == 2 {
                r.d_onesided_a = Some(onesided_discord_min(rho, Side::A)?.value);
            }
            if db == 2 {
                r.d_onesided_b = Some(onesided_discord_min(rho, Side::B)?.value);
            }
            if let (Some(a), Some(b)) = (r.d_onesided_a, r.d_onesided_b) {
                r.d_onesided_avg = Some(0.5 * (a + b));
            }
        }
        Ok(r)
    }

    /// Stable `(name, value)` pairs in declaration order.
    pub fn fields(&self) -> Vec<(&'static str, Option<f64>)> {
        vec![
            ("S", Some(self.entropy)),
            ("I", Some(self.information)),
            ("mutual_information", self.mutual_information),
            ("irreality_X", Some(self.irreality_x)),
            ("irreality_Y", self.irreality_y),
            ("JI", self.ji),
            ("ji_per_info", self.ji_per_info),
            ("D_AB_symmetric", self.d_ab_symmetric),
            ("delta_XY", self.delta_xy),
            ("delta_YX", self.delta_yx),
            ("delta_XY_signed", self.delta_xy_signed),
            ("delta_YX_signed", self.delta_yx_signed),
            ("script_D", self.script_d),
            ("D_onesided_A", self.d_onesided_a),
            ("D_onesided_B", self.d_onesided_b),
            ("D_onesided_avg", self.d_onesided_avg),
            ("ji_lower", self.ji_lower),
            ("ji_upper", self.ji_upper),
            ("overlap_c", self.overlap_c),
        ]
    }

    /// Same report with entropic fields converted to nats. `ji_per_info` and
    /// `overlap_c` are dimensionless and left alone.
    pub fn in_nats(&self) -> Self {
        let k = std::f64::consts::LN_2;
        let s = |v: Option<f64>| v.map(|x| x * k);
        MeasureReport {
            entropy: self.entropy * k,
            information: self.information * k,
            mutual_information: s(self.mutual_information),
            irreality_x: self.irreality_x * k,
            irreality_y: s(self.irreality_y),
            ji: s(self.ji),
            ji_per_info: self.ji_per_info,
            d_ab_symmetric: s(self.d_ab_symmetric),
            delta_xy: s(self.delta_xy),
            delta_yx: s(self.delta_yx),
            delta_xy_signed: s(self.delta_xy_signed),
            delta_yx_signed: s(self.delta_yx_signed),
            script_d: s(self.script_d),
            d_onesided_a: s(self.d_onesided_a),
            d_onesided_b: s(self.d_onesided_b),
            d_onesided_avg: s(self.d_onesided_avg),
            ji_lower: s(self.ji_lower),
            ji_upper: s(self.ji_upper),
            overlap_c: self.overlap_c,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(format!("measure report: {e}")))
    }
}
