//! Checking a catalog entry against its expected data.

use serde::Serialize;

use crate::boundary::{build_boundary, checksum, pairing_sigma10, BoundaryError, BoundaryResult, PairingData};
use crate::catalog::{CatalogEntry, PairingSpec};
use crate::germ::{c_weighted_homogeneous, compute_report, InvariantReport, ReportOptions};
use crate::local::{Codim, DEFAULT_DEGREE_CAP};
use crate::plumbing::{graphs_equivalent, isomorphic};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    /// Could not be decided within the resource limits.
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub entry: String,
    pub checks: Vec<Check>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn status(&self) -> Status {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if self.checks.iter().any(|c| c.status == Status::Undecided) {
            Status::Undecided
        } else {
            Status::Pass
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub degree_cap: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { degree_cap: DEFAULT_DEGREE_CAP }
    }
}

/// The pairing of an entry with a curve.
pub fn entry_pairing(entry: &CatalogEntry) -> Option<Result<PairingData, BoundaryError>> {
    let curve = entry.curve.as_ref()?;
    Some(match &curve.pairing {
        PairingSpec::Explicit(p) => Ok(p.clone()),
        PairingSpec::Sigma10 => pairing_sigma10(entry.germ.as_ref()?, &curve.branches),
    })
}

/// Γ, ledger and Γ̂ of an entry with a curve.
pub fn entry_boundary(entry: &CatalogEntry) -> Option<Result<(PairingData, BoundaryResult), BoundaryError>> {
    let pairing = entry_pairing(entry)?;
    let curve = entry.curve.as_ref()?;
    Some(pairing.and_then(|p| build_boundary(&curve.branches, &p).map(|r| (p, r))))
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), status: if pass { Status::Pass } else { Status::Fail }, detail: detail.into() }
}

fn codim_check(name: &str, got: &Codim, want: &Codim) -> Check {
    match got {
        Codim::Undecided { .. } => Check { name: name.into(), status: Status::Undecided, detail: got.to_string() },
        _ => check(name, got == want, format!("{got} (expected {want})")),
    }
}

pub fn entry_report(entry: &CatalogEntry, opts: &VerifyOptions) -> Option<Result<InvariantReport, crate::germ::GermError>> {
    let g = entry.germ.as_ref()?;
    let ropts = ReportOptions { degree_cap: opts.degree_cap, lambda: entry.lambda.clone(), ..Default::default() };
    Some(compute_report(g, &ropts))
}

pub fn verify_entry(entry: &CatalogEntry, opts: &VerifyOptions) -> Verdict {
    let mut checks = Vec::new();

    if let Some([w1, w2, d1, d2, d3]) = entry.weights {
        let c = c_weighted_homogeneous(w1, w2, d1, d2, d3);
        checks.push(match c {
            Ok(c) => codim_check("C (weighted formula)", &Codim::Finite(c), &entry.expected_c),
            Err(e) => check("C (weighted formula)", false, e.to_string()),
        });
    }

    let mut c_value = None;
    if entry.germ.is_some() {
        match entry_report(entry, opts).unwrap() {
            Ok(r) => {
                checks.push(codim_check("C", &r.c, &entry.expected_c));
                c_value = r.c.finite();
                if let Some(t) = entry.expected_t {
                    let got = r.t.clone().unwrap_or(Codim::Undecided { cap: 0, reason: "no presentation".into() });
                    checks.push(codim_check("T", &got, &Codim::Finite(t)));
                }
                if let Some(c) = c_value {
                    checks.push(check("Omega = -C", r.derived.omega == Some(-(c as i64)), format!("{:?}", r.derived.omega)));
                }
                if let (Some(l), Some(want)) = (r.derived.l, entry.expected_l()) {
                    checks.push(check("L = C - 3T", l == want, format!("{l} (expected {want})")));
                }
            }
            Err(e) => checks.push(Check { name: "report".into(), status: Status::Fail, detail: e.to_string() }),
        }
    }
    let c_value = c_value.or(entry.expected_c.finite());

    if let Some(curve) = &entry.curve {
        if let (Some(g), false) = (&entry.germ, curve.model) {
            if let Some(d) = g.sigma10_curve() {
                let prod = curve.branches.iter().skip(1).fold(curve.branches[0].clone(), |a, b| &a * b);
                checks.push(check("branches multiply to d", prod.proportional(&d), format!("d = {d}")));
            }
        }
        match entry_boundary(entry).unwrap() {
            Ok((pairing, b)) => {
                let r = &b.resolution;
                let residual_zero = r.mult_residual().iter().flatten().all(|x| *x == 0);
                checks.push(check("multiplicity residual", residual_zero, ""));
                checks.push(check("negative definite", r.is_negative_definite(), ""));
                if let Some(want) = &entry.expected_resolution {
                    checks.push(check("resolution graph", isomorphic(&r.to_plumbing(), want), r.to_plumbing().to_text()));
                }
                for (k, want) in entry.expected_boundary.iter().enumerate() {
                    let name = format!("boundary graph #{}", k + 1);
                    checks.push(match graphs_equivalent(&b.graph, want) {
                        Ok(eq) => check(&name, eq, ""),
                        Err(e) => Check { name, status: Status::Undecided, detail: e.to_string() },
                    });
                }
                if entry.is_sigma10() {
                    if let Some(c) = c_value {
                        let cs = checksum(&b.ledger, c);
                        checks.push(check("checksum", cs.holds, format!("{} vs {}", cs.lhs, cs.rhs)));
                        let j = pairing.classes().len() as i64;
                        let l = pairing.branch_count() as i64;
                        let parity = (c as i64 - (2 * j - l)).rem_euclid(2) == 0;
                        checks.push(check("parity C = 2|J| - l mod 2", parity, format!("C = {c}, |J| = {j}, l = {l}")));
                    }
                }
            }
            Err(e) => checks.push(check("boundary", false, e.to_string())),
        }
    }
    Verdict { entry: entry.name.clone(), checks }
}
