//! On-disk artifact formats.
//!
//! Every structured result that crosses the library boundary — spectral
//! fixtures, profile families, trajectories, sweep and inflation reports —
//! has a JSON document form here, built on [`crate::serialize::JsonDoc`]
//! (sorted keys, floats as 17-significant-digit decimal strings). Summary
//! tables additionally have CSV emitters with fixed column schemas.
//!
//! ## Conventions
//!
//! * every document carries a `kind` tag naming its schema, and readers
//!   reject documents of the wrong kind;
//! * complex scalars are `{re, im}` objects, complex arrays are stored as
//!   two parallel real arrays `re` / `im`;
//! * grids are stored with their full node array so that round trips are
//!   bit-exact (covering grids pin the critical node, which is generally
//!   not reconstructible as `lo + j·h`);
//! * readers validate structure (kinds, lengths, grid invariants, wall
//!   conditions), **not** semantics: whether, say, a constants document is
//!   spectrally consistent is the verification stage's job, so corrupted
//!   values load fine here and fail there.

use num_complex::Complex64;

use crate::eigen::Eigenpair;
use crate::error::{Error, Result};
use crate::evolve::{StateVector, Trajectory};
use crate::grid::Grid1D;
use crate::inflate::{DemoReport, InflationRecord, InflationReport};
use crate::prandtl::{
    PrandtlProfileSetK, PrandtlSpectral, PrandtlSweepTable, PrandtlTrajectory,
};
use crate::profile::ComplexProfile;
use crate::profiles::{ProfileSetK, SweepTable};
use crate::serialize::{fmt_f64, JsonDoc};
use crate::spectral::{Model, SpectralConstants, WProfile, XProfile};

/// Wire tag of a model.
pub fn model_tag(model: Model) -> &'static str {
    match model {
        Model::Hyperbolic => "hyperbolic",
        Model::Prandtl => "prandtl",
    }
}

/// Parse a model wire tag.
pub fn parse_model(tag: &str) -> Result<Model> {
    match tag {
        "hyperbolic" => Ok(Model::Hyperbolic),
        "prandtl" => Ok(Model::Prandtl),
        other => Err(Error::Serde(format!(
            "unknown model tag {other:?} (expected \"hyperbolic\" or \"prandtl\")"
        ))),
    }
}

fn expect_kind(doc: &JsonDoc, kind: &str) -> Result<()> {
    let got = doc.get_str("kind")?;
    if got != kind {
        return Err(Error::Serde(format!(
            "expected a {kind:?} document, found kind {got:?}"
        )));
    }
    Ok(())
}

/// Serialize a grid (full node array, bit-exact).
pub fn grid_to_doc(grid: &Grid1D) -> JsonDoc {
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "grid")
        .set_f64("lo", grid.lo())
        .set_f64("hi", grid.hi())
        .set_f64("h", grid.h())
        .set_f64_slice("nodes", grid.nodes());
    if let Some(ia) = grid.critical_index() {
        doc.set_u64("critical_index", ia as u64);
    }
    doc
}

/// Reconstruct a grid, revalidating the uniformity invariant.
pub fn grid_from_doc(doc: &JsonDoc) -> Result<Grid1D> {
    expect_kind(doc, "grid")?;
    let critical_index = if doc.contains("critical_index") {
        Some(doc.get_u64("critical_index")? as usize)
    } else {
        None
    };
    Grid1D::from_parts(
        doc.get_f64("lo")?,
        doc.get_f64("hi")?,
        doc.get_f64("h")?,
        doc.get_f64_slice("nodes")?,
        critical_index,
    )
}

/// Serialize a complex profile as a grid plus parallel `re` / `im` arrays.
pub fn profile_to_doc(profile: &ComplexProfile) -> JsonDoc {
    let re: Vec<f64> = profile.values().iter().map(|v| v.re).collect();
    let im: Vec<f64> = profile.values().iter().map(|v| v.im).collect();
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "profile")
        .set_doc("grid", grid_to_doc(profile.grid()))
        .set_f64_slice("re", &re)
        .set_f64_slice("im", &im);
    doc
}

/// Reconstruct a complex profile (lengths and grid invariants revalidated).
pub fn profile_from_doc(doc: &JsonDoc) -> Result<ComplexProfile> {
    expect_kind(doc, "profile")?;
    let grid = grid_from_doc(&doc.get_doc("grid")?)?;
    let re = doc.get_f64_slice("re")?;
    let im = doc.get_f64_slice("im")?;
    if re.len() != im.len() {
        return Err(Error::Serde(format!(
            "re/im arrays disagree in length: {} vs {}",
            re.len(),
            im.len()
        )));
    }
    let values: Vec<Complex64> = re
        .iter()
        .zip(&im)
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();
    ComplexProfile::new(std::sync::Arc::new(grid), values)
}

/// Serialize an eigenpair.
pub fn eigenpair_to_doc(eig: &Eigenpair) -> JsonDoc {
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "eigenpair")
        .set_f64("alpha", eig.alpha)
        .set_f64("alpha_doubled", eig.alpha_doubled)
        .set_f64("residual", eig.residual)
        .set_f64_slice("candidates", &eig.candidates)
        .set_doc("f", profile_to_doc(&eig.f));
    doc
}

/// Reconstruct an eigenpair.
pub fn eigenpair_from_doc(doc: &JsonDoc) -> Result<Eigenpair> {
    expect_kind(doc, "eigenpair")?;
    Ok(Eigenpair {
        alpha: doc.get_f64("alpha")?,
        alpha_doubled: doc.get_f64("alpha_doubled")?,
        f: profile_from_doc(&doc.get_doc("f")?)?,
        residual: doc.get_f64("residual")?,
        candidates: doc.get_f64_slice("candidates")?,
    })
}

/// Serialize a connecting solution `X`.
pub fn xprofile_to_doc(xp: &XProfile) -> JsonDoc {
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "xprofile")
        .set_c64("gamma", xp.gamma)
        .set_f64("matching_defect", xp.matching_defect)
        .set_c64("total_integral", xp.total_integral)
        .set_doc("x", profile_to_doc(&xp.x));
    doc
}

/// Reconstruct a connecting solution `X`.
pub fn xprofile_from_doc(doc: &JsonDoc) -> Result<XProfile> {
    expect_kind(doc, "xprofile")?;
    Ok(XProfile {
        x: profile_from_doc(&doc.get_doc("x")?)?,
        gamma: doc.get_c64("gamma")?,
        matching_defect: doc.get_f64("matching_defect")?,
        total_integral: doc.get_c64("total_integral")?,
    })
}

/// Serialize a transition profile `W`.
pub fn wprofile_to_doc(wp: &WProfile) -> JsonDoc {
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "wprofile")
        .set_c64("gamma", wp.gamma)
        .set_f64("ode_residual", wp.ode_residual)
        .set_doc("w", profile_to_doc(&wp.w))
        .set_doc("wprime", profile_to_doc(&wp.wprime));
    doc
}

/// Reconstruct a transition profile `W` (components must share a grid).
pub fn wprofile_from_doc(doc: &JsonDoc) -> Result<WProfile> {
    expect_kind(doc, "wprofile")?;
    let w = profile_from_doc(&doc.get_doc("w")?)?;
    let wprime = profile_from_doc(&doc.get_doc("wprime")?)?;
    if !w.grid().same_as(wprime.grid()) {
        return Err(Error::GridMismatch(
            "wprofile components live on different grids".into(),
        ));
    }
    Ok(WProfile {
        w,
        wprime,
        gamma: doc.get_c64("gamma")?,
        ode_residual: doc.get_f64("ode_residual")?,
    })
}

/// Serialize spectral constants.
pub fn constants_to_doc(sc: &SpectralConstants) -> JsonDoc {
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "constants")
        .set_str("model", model_tag(sc.model))
        .set_f64("alpha", sc.alpha)
        .set_c64("gamma", sc.gamma)
        .set_c64("tau", sc.tau)
        .set_f64("sigma0", sc.sigma0);
    doc
}

/// Reconstruct spectral constants.
///
/// Only structure is checked here; spectral consistency (sign structure,
/// `σ₀ = −Im τ`, the `γ`–`α` relation) is asserted by the verification
/// stage so that a corrupted document is reported as a failed check
/// rather than a parse error.
pub fn constants_from_doc(doc: &JsonDoc) -> Result<SpectralConstants> {
    expect_kind(doc, "constants")?;
    Ok(SpectralConstants {
        alpha: doc.get_f64("alpha")?,
        gamma: doc.get_c64("gamma")?,
        tau: doc.get_c64("tau")?,
        sigma0: doc.get_f64("sigma0")?,
        model: parse_model(doc.get_str("model")?)?,
    })
}

/// Serialize the diffusive spectral bundle.
pub fn prandtl_spectral_to_doc(ps: &PrandtlSpectral) -> JsonDoc {
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "prandtl_spectral")
        .set_doc("constants", constants_to_doc(&ps.constants))
        .set_doc("w", wprofile_to_doc(&ps.w))
        .set_f64("matching_defect", ps.matching_defect)
        .set_u64("secant_iterations", ps.secant_iterations as u64);
    doc
}

/// Reconstruct the diffusive spectral bundle.
pub fn prandtl_spectral_from_doc(doc: &JsonDoc) -> Result<PrandtlSpectral> {
    expect_kind(doc, "prandtl_spectral")?;
    Ok(PrandtlSpectral {
        constants: constants_from_doc(&doc.get_doc("constants")?)?,
        w: wprofile_from_doc(&doc.get_doc("w")?)?,
        matching_defect: doc.get_f64("matching_defect")?,
        secant_iterations: doc.get_u64("secant_iterations")? as usize,
    })
}

/// Serialize one frequency's profile family (hyperbolic model).
pub fn profile_set_to_doc(set: &ProfileSetK) -> JsonDoc {
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "profile_set")
        .set_str("model", model_tag(Model::Hyperbolic))
        .set_u64("k", set.k)
        .set_f64("alpha", set.alpha)
        .set_f64("norm_u", set.norm_u)
        .set_f64("norm_u_grad", set.norm_u_grad)
        .set_f64("k43_norm_r", set.k43_norm_r)
        .set_f64("v_route_discrepancy", set.v_route_discrepancy)
        .set_doc("u", profile_to_doc(&set.u))
        .set_doc("v", profile_to_doc(&set.v))
        .set_doc("r", profile_to_doc(&set.r))
        .set_doc("f1", profile_to_doc(&set.f1))
        .set_doc("f2", profile_to_doc(&set.f2));
    doc
}

/// Serialize one frequency's profile family (diffusive model).
pub fn prandtl_profile_set_to_doc(set: &PrandtlProfileSetK) -> JsonDoc {
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "profile_set")
        .set_str("model", model_tag(Model::Prandtl))
        .set_u64("k", set.k)
        .set_f64("alpha", set.alpha)
        .set_f64("norm_u", set.norm_u)
        .set_f64("norm_u_grad", set.norm_u_grad)
        .set_f64("k_norm_r", set.k_norm_r)
        .set_c64("tau_eff", set.tau_eff)
        .set_doc("u", profile_to_doc(&set.u))
        .set_doc("r", profile_to_doc(&set.r))
        .set_doc("f1", profile_to_doc(&set.f1))
        .set_doc("f2", profile_to_doc(&set.f2));
    doc
}

/// Serialize an instantaneous state `(u, ∂_t u)`.
pub fn state_to_doc(state: &StateVector) -> JsonDoc {
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "state")
        .set_f64("t", state.t)
        .set_doc("u", profile_to_doc(&state.u))
        .set_doc("w", profile_to_doc(&state.w));
    doc
}

/// Reconstruct a state, revalidating the wall condition.
pub fn state_from_doc(doc: &JsonDoc) -> Result<StateVector> {
    expect_kind(doc, "state")?;
    StateVector::new(
        profile_from_doc(&doc.get_doc("u")?)?,
        profile_from_doc(&doc.get_doc("w")?)?,
        doc.get_f64("t")?,
    )
}

/// Serialize a trajectory (hyperbolic model).
pub fn trajectory_to_doc(traj: &Trajectory) -> JsonDoc {
    let snapshots = traj.snapshots.iter().map(state_to_doc).collect();
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "trajectory")
        .set_str("model", model_tag(Model::Hyperbolic))
        .set_u64("k", traj.k)
        .set_f64("dt", traj.dt)
        .set_f64_slice("times", &traj.times)
        .set_f64_slice("norms", &traj.norms)
        .set_doc("final_state", state_to_doc(&traj.final_state))
        .set_docs("snapshots", snapshots);
    doc
}

/// Serialize a trajectory (diffusive model).
pub fn prandtl_trajectory_to_doc(traj: &PrandtlTrajectory) -> JsonDoc {
    let snapshots = traj.snapshots.iter().map(profile_to_doc).collect();
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "trajectory")
        .set_str("model", model_tag(Model::Prandtl))
        .set_u64("k", traj.k)
        .set_f64("dt", traj.dt)
        .set_f64_slice("times", &traj.times)
        .set_f64_slice("norms", &traj.norms)
        .set_doc("final_u", profile_to_doc(&traj.final_u))
        .set_docs("snapshots", snapshots);
    doc
}

fn inflation_record_to_doc(rec: &InflationRecord) -> JsonDoc {
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "inflation_record")
        .set_u64("k", rec.k)
        .set_f64("sigma", rec.sigma)
        .set_f64("window", rec.window)
        .set_f64("s_k", rec.s_k)
        .set_f64("t_argmax", rec.t_argmax)
        .set_f64("c_ref", rec.c_ref)
        .set_f64("nu", rec.nu);
    doc
}

/// Serialize an inflation report under the given model tag.
pub fn inflation_to_doc(report: &InflationReport, model: Model) -> JsonDoc {
    let records = report.records.iter().map(inflation_record_to_doc).collect();
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "inflation_report")
        .set_str("model", model_tag(model))
        .set_f64("sigma", report.sigma)
        .set_f64("sigma0", report.sigma0)
        .set_f64("alpha", report.alpha)
        .set_f64("exponent", report.exponent)
        .set_docs("records", records);
    doc
}

/// Serialize a demonstration report.
pub fn demo_to_doc(report: &DemoReport) -> JsonDoc {
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "demo_report")
        .set_bool("feasible", report.feasible)
        .set_f64("m", report.m)
        .set_f64("mu", report.mu)
        .set_f64("delta", report.delta)
        .set_f64("window", report.window)
        .set_f64("c_sigma", report.c_sigma)
        .set_f64("data_norm", report.data_norm)
        .set_f64("sup_norm", report.sup_norm)
        .set_f64("sup_mode_norm", report.sup_mode_norm)
        .set_f64("product", report.product)
        .set_f64("horizon_used", report.horizon_used);
    if let Some(k) = report.k {
        doc.set_u64("k", k);
    }
    doc
}

/// Serialize a bounds-sweep table (hyperbolic model).
pub fn sweep_to_doc(table: &SweepTable) -> JsonDoc {
    let rows = table
        .rows
        .iter()
        .map(|row| {
            let mut doc = JsonDoc::new();
            doc.set_u64("k", row.k)
                .set_f64("norm_u", row.norm_u)
                .set_f64("k43_norm_r", row.k43_norm_r)
                .set_f64("norm_u_minus_limit", row.norm_u_minus_limit)
                .set_f64("norm_u_grad", row.norm_u_grad);
            doc
        })
        .collect();
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "sweep")
        .set_str("model", model_tag(Model::Hyperbolic))
        .set_f64("alpha", table.alpha)
        .set_docs("rows", rows);
    doc
}

/// Serialize a bounds-sweep table (diffusive model).
pub fn prandtl_sweep_to_doc(table: &PrandtlSweepTable) -> JsonDoc {
    let rows = table
        .rows
        .iter()
        .map(|row| {
            let mut doc = JsonDoc::new();
            doc.set_u64("k", row.k)
                .set_f64("norm_u", row.norm_u)
                .set_f64("k_norm_r", row.k_norm_r)
                .set_f64("norm_u_minus_limit", row.norm_u_minus_limit)
                .set_f64("norm_u_grad", row.norm_u_grad);
            doc
        })
        .collect();
    let mut doc = JsonDoc::new();
    doc.set_str("kind", "sweep")
        .set_str("model", model_tag(Model::Prandtl))
        .set_f64("alpha", table.alpha)
        .set_docs("rows", rows);
    doc
}

/// CSV emission of a bounds-sweep table: columns `k, norm_U, k43_norm_R`.
pub fn sweep_csv(table: &SweepTable) -> String {
    let mut out = String::from("k,norm_U,k43_norm_R\n");
    for row in &table.rows {
        out.push_str(&format!(
            "{},{},{}\n",
            row.k,
            fmt_f64(row.norm_u),
            fmt_f64(row.k43_norm_r)
        ));
    }
    out
}

/// CSV emission of the diffusive bounds-sweep table: columns
/// `k, norm_U, k_norm_R` (the remainder scales with `k`, not `k^{4/3}`).
pub fn prandtl_sweep_csv(table: &PrandtlSweepTable) -> String {
    let mut out = String::from("k,norm_U,k_norm_R\n");
    for row in &table.rows {
        out.push_str(&format!(
            "{},{},{}\n",
            row.k,
            fmt_f64(row.norm_u),
            fmt_f64(row.k_norm_r)
        ));
    }
    out
}

/// CSV emission of an inflation report: columns `k, S_k, t_argmax, C_ref`.
pub fn inflation_csv(report: &InflationReport) -> String {
    let mut out = String::from("k,S_k,t_argmax,C_ref\n");
    for rec in &report.records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            rec.k,
            fmt_f64(rec.s_k),
            fmt_f64(rec.t_argmax),
            fmt_f64(rec.c_ref)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::profiles::SweepRow;

    fn sample_profile() -> ComplexProfile {
        let grid = Arc::new(Grid1D::covering_marked(0.0, 6.0, 0.07, 2.0).unwrap());
        let values = grid
            .nodes()
            .iter()
            .map(|&y| Complex64::new(0.0, y).exp() * (-0.3 * y).exp())
            .collect();
        ComplexProfile::new(grid, values).unwrap()
    }

    #[test]
    fn grid_round_trip_is_bit_exact() {
        for grid in [
            Grid1D::uniform(-4.0, 4.0, 37).unwrap(),
            Grid1D::covering_marked(0.0, 12.0, 0.0213, 2.0).unwrap(),
        ] {
            let back = grid_from_doc(&grid_to_doc(&grid)).unwrap();
            assert_eq!(back, grid);
        }
    }

    #[test]
    fn profile_round_trip_is_bit_exact() {
        let p = sample_profile();
        let back = profile_from_doc(&profile_to_doc(&p)).unwrap();
        assert_eq!(back.values(), p.values());
        assert_eq!(back.grid().nodes(), p.grid().nodes());
    }

    #[test]
    fn mismatched_component_lengths_are_rejected() {
        let p = sample_profile();
        let mut doc = profile_to_doc(&p);
        let re: Vec<f64> = p.values().iter().map(|v| v.re).collect();
        doc.set_f64_slice("re", &re[..re.len() - 1]);
        assert!(profile_from_doc(&doc).is_err());
    }

    #[test]
    fn kind_tags_are_enforced() {
        let p = sample_profile();
        let doc = profile_to_doc(&p);
        assert!(grid_from_doc(&doc).is_err());
        assert!(constants_from_doc(&doc).is_err());
    }

    #[test]
    fn constants_round_trip_both_models() {
        for model in [Model::Hyperbolic, Model::Prandtl] {
            let sc = SpectralConstants {
                alpha: 0.1 + 1.0,
                gamma: Complex64::new(-0.5, -0.8660254037844387),
                tau: Complex64::new(-0.39685, -0.687365),
                sigma0: 0.687365,
                model,
            };
            let back = constants_from_doc(&constants_to_doc(&sc)).unwrap();
            assert_eq!(back.alpha, sc.alpha);
            assert_eq!(back.gamma, sc.gamma);
            assert_eq!(back.tau, sc.tau);
            assert_eq!(back.sigma0, sc.sigma0);
            assert_eq!(back.model, sc.model);
        }
    }

    #[test]
    fn bad_model_tag_is_a_serde_error() {
        let sc = SpectralConstants {
            alpha: 1.0,
            gamma: Complex64::new(-0.5, -0.8),
            tau: Complex64::new(-0.5, -0.8),
            sigma0: 0.8,
            model: Model::Hyperbolic,
        };
        let mut doc = constants_to_doc(&sc);
        doc.set_str("model", "euler");
        let err = constants_from_doc(&doc).unwrap_err();
        assert!(matches!(err, Error::Serde(_)));
    }

    #[test]
    fn eigenpair_round_trip() {
        let eig = Eigenpair {
            alpha: 0.9999933209,
            alpha_doubled: 0.9999983302,
            f: sample_profile(),
            residual: 3.2e-9,
            candidates: vec![0.9999933209, 4.77],
        };
        let back = eigenpair_from_doc(&eigenpair_to_doc(&eig)).unwrap();
        assert_eq!(back.alpha, eig.alpha);
        assert_eq!(back.alpha_doubled, eig.alpha_doubled);
        assert_eq!(back.residual, eig.residual);
        assert_eq!(back.candidates, eig.candidates);
        assert_eq!(back.f.values(), eig.f.values());
    }

    #[test]
    fn wprofile_round_trip_and_grid_consistency() {
        let w = sample_profile();
        let wprime = sample_profile();
        let wp = WProfile {
            w,
            wprime,
            gamma: Complex64::new(-0.5, -0.87),
            ode_residual: 1.1e-9,
        };
        let back = wprofile_from_doc(&wprofile_to_doc(&wp)).unwrap();
        assert_eq!(back.gamma, wp.gamma);
        assert_eq!(back.w.values(), wp.w.values());
        assert_eq!(back.wprime.values(), wp.wprime.values());

        // Components on different grids must be rejected.
        let other = ComplexProfile::new(
            Arc::new(Grid1D::uniform(0.0, 6.0, 50).unwrap()),
            vec![Complex64::ZERO; 51],
        )
        .unwrap();
        let mut doc = wprofile_to_doc(&wp);
        doc.set_doc("wprime", profile_to_doc(&other));
        assert!(wprofile_from_doc(&doc).is_err());
    }

    #[test]
    fn state_round_trip_revalidates_wall_condition() {
        let grid = Arc::new(Grid1D::uniform(0.0, 6.0, 60).unwrap());
        let zeros = vec![Complex64::ZERO; grid.len()];
        let ones = vec![Complex64::new(1.0, 0.0); grid.len()];
        let u = ComplexProfile::new(Arc::clone(&grid), zeros).unwrap();
        let w = ComplexProfile::new(Arc::clone(&grid), ones.clone()).unwrap();
        let state = StateVector::new(u, w, 0.25).unwrap();
        let back = state_from_doc(&state_to_doc(&state)).unwrap();
        assert_eq!(back.t, 0.25);
        assert_eq!(back.u.values(), state.u.values());

        // A wall-violating `u` in the document fails reconstruction.
        let bad_u = ComplexProfile::new(Arc::clone(&grid), ones).unwrap();
        let mut doc = state_to_doc(&state);
        doc.set_doc("u", profile_to_doc(&bad_u));
        assert!(state_from_doc(&doc).is_err());
    }

    #[test]
    fn documents_serialize_deterministically() {
        let eig = Eigenpair {
            alpha: 1.0,
            alpha_doubled: 1.0,
            f: sample_profile(),
            residual: 1e-9,
            candidates: vec![1.0],
        };
        let a = eigenpair_to_doc(&eig).to_json();
        let b = eigenpair_to_doc(&eig).to_json();
        assert_eq!(a, b);
        // Parsing and re-serializing reproduces the bytes.
        let reparsed = JsonDoc::from_json(&a).unwrap().to_json();
        assert_eq!(reparsed, a);
    }

    #[test]
    fn sweep_csv_schema_is_fixed() {
        let table = SweepTable {
            rows: vec![
                SweepRow {
                    k: 64,
                    norm_u: 14.4453,
                    k43_norm_r: 93.85,
                    norm_u_minus_limit: 0.5,
                    norm_u_grad: 20.0,
                },
                SweepRow {
                    k: 128,
                    norm_u: 14.4452,
                    k43_norm_r: 93.80,
                    norm_u_minus_limit: 0.4,
                    norm_u_grad: 20.0,
                },
            ],
            alpha: 1.0,
        };
        let csv = sweep_csv(&table);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "k,norm_U,k43_norm_R");
        assert_eq!(
            lines[1],
            format!("64,{},{}", fmt_f64(14.4453), fmt_f64(93.85))
        );
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn inflation_csv_schema_is_fixed() {
        let report = InflationReport {
            records: vec![InflationRecord {
                k: 64,
                sigma: 0.34,
                window: 1.47,
                s_k: 1.93,
                t_argmax: 1.2,
                c_ref: 0.13,
                nu: 29.0,
            }],
            sigma: 0.34,
            sigma0: 0.68,
            alpha: 1.0,
            exponent: 0.53,
        };
        let csv = inflation_csv(&report);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,S_k,t_argmax,C_ref");
        assert_eq!(
            lines[1],
            format!(
                "64,{},{},{}",
                fmt_f64(1.93),
                fmt_f64(1.2),
                fmt_f64(0.13)
            )
        );
    }
}
