//! The four subcommands. Each returns its printed report and exit code so
//! that tests can drive them without a process.

use std::fmt::Write as _;
use std::path::Path;

use dodecatile::solver::{rigidity, solve_type, RigidityCertificate, RootTag, Scan2D};
use dodecatile::tilings::{builtin, validate_realization, AngleLabel};
use dodecatile::type5::{
    assemble_with_seed, classify_symmetry, is_isohedral_under, overlap_check, solve_pentagon_type5, symmetry_group, SymmetryClass, Type5Error,
    Type5Params, DEFAULT_SYMMETRY_TOL, OVERLAP_SAMPLES,
};

use crate::curves::CurveDocument;
use crate::document::TilingDocument;
use crate::mesh::Mesh;
use crate::{read_file, write_file, CliError};

pub const CONCLUSION: &str = "only geometrically realistic solution: regular dodecahedron";
/// Edge lengths closer than this count as equal when naming the class.
pub const LENGTH_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub report: String,
}

/// Problems with a two-equation scan, empty when it matches the expected
/// picture: four roots, one regular, the rest excluded.
pub fn scan_problems(type_id: u8, scan: &Scan2D) -> Vec<String> {
    let mut problems = Vec::new();
    if scan.roots.len() != 4 {
        problems.push(format!("expected 4 roots, found {}", scan.roots.len()));
    }
    let count = |tag| scan.roots.iter().filter(|r| r.tag == tag).count();
    let expected = match type_id {
        2 => [1, 1, 2],
        _ => [1, 0, 3],
    };
    let found = [count(RootTag::Regular), count(RootTag::ExcludedBoundary), count(RootTag::ExcludedUnrealistic)];
    if found != expected {
        problems.push(format!("tag counts (regular, boundary, unrealistic) = {found:?}, expected {expected:?}"));
    }
    if count(RootTag::Unclassified) > 0 {
        problems.push(format!("{} unclassified root(s)", count(RootTag::Unclassified)));
    }
    problems
}

pub fn cmd_solve(type_id: u8, grid_n: usize, tol: f64, out: Option<&Path>) -> Result<Outcome, CliError> {
    match type_id {
        2 | 3 => {
            let scan = solve_type(type_id, grid_n, tol).map_err(|e| CliError::Usage(e.to_string()))?;
            if let Some(path) = out {
                write_file(path, &CurveDocument::from_scan(type_id, &scan).to_text())?;
            }
            let mut report = format!("type {type_id}: {} roots (grid {grid_n})\n", scan.roots.len());
            for r in &scan.roots {
                let _ = writeln!(
                    report,
                    "  {} a = {:.12} beta = {:.12} {} residual {:.1e} condition {:.2e}",
                    r.label.unwrap_or('?'),
                    r.a.value(),
                    r.beta,
                    r.tag.name(),
                    r.residual_norm,
                    r.condition
                );
            }
            let problems = scan_problems(type_id, &scan);
            if problems.is_empty() {
                let _ = writeln!(report, "{CONCLUSION}");
                Ok(Outcome { code: 0, report })
            } else {
                for p in problems {
                    let _ = writeln!(report, "inconsistent: {p}");
                }
                Ok(Outcome { code: 2, report })
            }
        }
        1 | 4 => {
            let cert = rigidity(type_id).map_err(|e| CliError::Usage(e.to_string()))?;
            let text = certificate_text(&cert);
            if let Some(path) = out {
                write_file(path, &text)?;
            }
            let unique = cert.is_unique_regular();
            let mut report = format!(
                "type {type_id}: sign changes at {:?}; forced angles {:?}; edge {:.12}\n",
                cert.sign_changes, cert.forced_angles, cert.edge
            );
            if unique {
                let _ = writeln!(report, "rigid: the only admissible tile is the regular one (numerical sign scan)");
                Ok(Outcome { code: 0, report })
            } else {
                let _ = writeln!(report, "inconsistent: rigidity scan is ambiguous");
                Ok(Outcome { code: 2, report })
            }
        }
        t => Err(CliError::Usage(format!("--type must be 1, 2, 3 or 4 (got {t})"))),
    }
}

pub fn certificate_text(c: &RigidityCertificate) -> String {
    let mut s = String::from("dodecatile-rigidity 1\n");
    let _ = writeln!(s, "type {}", c.type_id);
    let _ = writeln!(s, "evidence numerical sign scan over epsilon, {} samples", c.samples.len());
    let _ = writeln!(s, "sign_changes {}", c.sign_changes.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" "));
    let _ = writeln!(s, "forced_angles {}", c.forced_angles.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" "));
    let _ = writeln!(s, "edge {:?}", c.edge);
    let _ = writeln!(s, "forced_closure_residual {:e}", c.forced_closure_residual);
    let _ = writeln!(s, "unique_regular {}", c.is_unique_regular());
    let _ = writeln!(s, "# epsilon alpha beta gamma delta beta-gamma delta-epsilon law closure realized");
    for x in &c.samples {
        let v = x.angles.values;
        let closure = x.closure_residual.map_or("-".to_string(), |r| format!("{r:.3e}"));
        let realized = x.realized_law.map_or("-".to_string(), |l| format!("{l:?}"));
        let _ = writeln!(
            s,
            "{:.6} {:.6} {:.6} {:.6} {:.6} {:+.6} {:+.6} {:?} {closure} {realized}",
            x.parameter, v[0], v[1], v[2], v[3], x.differences.0, x.differences.1, x.law
        );
    }
    s
}

fn fixture_corners() -> Result<Vec<[AngleLabel; 5]>, CliError> {
    Ok(builtin(5).map_err(|e| CliError::Usage(e.to_string()))?.tiles().iter().map(|t| t.corners).collect())
}

pub struct BuildArgs<'a> {
    pub beta: f64,
    pub gamma: f64,
    pub out: Option<&'a Path>,
    pub mesh: Option<&'a Path>,
    pub mesh_subdiv: u32,
    pub seed: u64,
}

pub fn cmd_build(args: &BuildArgs) -> Result<Outcome, CliError> {
    let params = Type5Params::new(args.beta, args.gamma);
    let unrealizable = |e: Type5Error| CliError::Unrealizable(e.to_string());
    let tile = solve_pentagon_type5(params).map_err(unrealizable)?;
    let tiling = assemble_with_seed(&tile, args.seed).map_err(unrealizable)?;
    let mut report = format!(
        "beta {} gamma {} delta {}{}\nlengths a {:.12} b {:.12} c {:.12}\n",
        params.beta,
        params.gamma,
        params.delta(),
        if params.convex() { "" } else { " (non-convex corner)" },
        tiling.lengths[0],
        tiling.lengths[1],
        tiling.lengths[2]
    );
    let group = symmetry_group(&tiling.tiles, DEFAULT_SYMMETRY_TOL).map_err(|e| CliError::Inconsistent(e.to_string()))?;
    let isohedral = is_isohedral_under(&tiling.tiles, &group, DEFAULT_SYMMETRY_TOL);
    let (class, mut code) = match classify_symmetry(&tiling, LENGTH_TOL) {
        Ok(c) => (c, 0),
        Err(e) => {
            let _ = writeln!(report, "inconsistent: {e}");
            (SymmetryClass::from_lengths(tiling.lengths, LENGTH_TOL), 2)
        }
    };
    if !isohedral {
        let _ = writeln!(report, "inconsistent: tiling is not isohedral");
        code = 2;
    }
    let _ = writeln!(report, "symmetry {} order {}\nisohedral {isohedral}", class.name(), group.len());
    let doc = TilingDocument::from_tiling(&tiling, &fixture_corners()?, (class, group.len()));
    if let Some(path) = args.out {
        write_file(path, &doc.to_text())?;
    }
    if let Some(path) = args.mesh {
        write_file(path, &Mesh::from_document(&doc, args.mesh_subdiv).to_obj())?;
    }
    Ok(Outcome { code, report })
}

pub fn cmd_verify(path: &Path, seed: u64) -> Result<Outcome, CliError> {
    let doc = TilingDocument::parse(&read_file(path)?)?;
    let ct = builtin(doc.type_id).map_err(|e| CliError::Parse(e.to_string()))?;
    let tiles = doc.tiles()?;
    let mut problems = Vec::new();
    if doc.faces.len() != ct.tiles().len() || doc.faces.iter().zip(ct.tiles()).any(|(f, t)| f.corners != t.corners || f.edges != t.edges) {
        problems.push("face labels differ from the fixture".to_string());
    }
    let report_v = validate_realization(&ct, &tiles).map_err(|e| CliError::Parse(e.to_string()))?;
    let mut report = report_v.to_text();
    if !report_v.valid {
        problems.push("realization is not valid".into());
    }
    let overlap = overlap_check(&tiles, OVERLAP_SAMPLES, seed);
    let _ = writeln!(report, "overlap_bad {} of {}", overlap.bad, overlap.samples);
    if overlap.bad > 0 {
        problems.push("tiles overlap or leave gaps".into());
    }
    match symmetry_group(&tiles, DEFAULT_SYMMETRY_TOL) {
        Ok(group) => {
            let isohedral = is_isohedral_under(&tiles, &group, DEFAULT_SYMMETRY_TOL);
            let _ = writeln!(report, "symmetry_order {}\nisohedral {isohedral}", group.len());
            if !isohedral {
                problems.push("tiling is not isohedral".into());
            }
            if group.len() != doc.symmetry.1 {
                problems.push(format!("document records order {}, detected {}", doc.symmetry.1, group.len()));
            }
        }
        Err(e) => problems.push(e.to_string()),
    }
    for p in &problems {
        let _ = writeln!(report, "inconsistent: {p}");
    }
    Ok(Outcome { code: if problems.is_empty() { 0 } else { 2 }, report })
}

pub fn cmd_curves(type_id: u8, resolution: usize, out: Option<&Path>, svg: Option<&Path>) -> Result<Outcome, CliError> {
    if resolution < 100 {
        return Err(CliError::Usage(format!("--resolution must be at least 100 (got {resolution})")));
    }
    if !matches!(type_id, 2 | 3) {
        return Err(CliError::Usage(format!("--type must be 2 or 3 (got {type_id})")));
    }
    let scan = solve_type(type_id, resolution, dodecatile::solver::NEWTON_TOL).map_err(|e| CliError::Usage(e.to_string()))?;
    let doc = CurveDocument::from_scan(type_id, &scan);
    if let Some(path) = out {
        write_file(path, &doc.to_text())?;
    }
    if let Some(path) = svg {
        write_file(path, &doc.to_svg())?;
    }
    let mut report = format!(
        "type {type_id}: {} polylines for r1, {} for r2, {} labelled roots\n",
        doc.curves[0].len(),
        doc.curves[1].len(),
        doc.roots.len()
    );
    for r in &doc.roots {
        let _ = writeln!(report, "  {} ({:.10}, {:.10}) {}", r.label, r.a, r.beta, r.tag.name());
    }
    let labelled = doc.roots.iter().filter(|r| r.label != '?').count();
    Ok(Outcome { code: if labelled == 4 && doc.roots.len() == 4 { 0 } else { 2 }, report })
}
