//! The JSON analysis report: axioms, strong regularity, spectrum,
//! feasibility, alpha profiles, 2-ranks, distance bounds, girth and 6-cycles.

use serde::Serialize;

use geomcode_core::analysis::{
    alpha_profiles, check_gpg_axioms, feasibility_check, spectrum, strongly_regular_parameters, FeasibilityReport,
    PairProfile, PointGraph, SrgError,
};
use geomcode_core::gf2::{brouwer_predict, dimension_and_rate, BrouwerCase, RankKind, RankPrediction};
use geomcode_core::metrics::{incidence_bounds, six_cycles, tanner_girth, DistanceBounds, Girth};
use geomcode_core::{IncidenceStructure, SrgSpectrum, SrpgParams};

#[derive(Debug, Clone, Serialize)]
pub struct AxiomsJson {
    pub ok: bool,
    pub violation: Option<String>,
    pub s: Option<u64>,
    pub t: Option<u64>,
    pub alphas: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SrgJson {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumJson {
    pub delta: i64,
    pub sqrt_delta: i64,
    pub u1: i64,
    pub u2: i64,
    pub f1: u64,
    pub f2: u64,
    pub theta0: i64,
    pub theta1: i64,
    pub theta2: i64,
}

impl From<&SrgSpectrum> for SpectrumJson {
    fn from(s: &SrgSpectrum) -> Self {
        SpectrumJson {
            delta: s.delta,
            sqrt_delta: s.sqrt_delta,
            u1: s.u1,
            u2: s.u2,
            f1: s.f1,
            f2: s.f2,
            theta0: s.theta0,
            theta1: s.theta1,
            theta2: s.theta2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityJson {
    pub degree_matches_geometry: bool,
    pub order_formula: bool,
    pub mu_divides: bool,
    pub block_size_divides: bool,
    pub discriminant_square: bool,
    pub multiplicities_integral: bool,
    pub all_pass: bool,
}

impl From<&FeasibilityReport> for FeasibilityJson {
    fn from(r: &FeasibilityReport) -> Self {
        FeasibilityJson {
            degree_matches_geometry: r.degree_matches_geometry,
            order_formula: r.order_formula,
            mu_divides: r.mu_divides,
            block_size_divides: r.block_size_divides,
            discriminant_square: r.discriminant_square,
            multiplicities_integral: r.multiplicities_integral,
            all_pass: r.all_pass(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileJson {
    Constant(Vec<u64>),
    Varies { first: (usize, usize), witness: (usize, usize) },
    Absent,
}

impl From<&PairProfile> for ProfileJson {
    fn from(p: &PairProfile) -> Self {
        match p {
            PairProfile::Constant(c) => ProfileJson::Constant(c.clone()),
            PairProfile::Varies { first, witness } => ProfileJson::Varies {
                first: *first,
                witness: *witness,
            },
            PairProfile::Absent => ProfileJson::Absent,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfilesJson {
    pub adjacent: ProfileJson,
    pub non_adjacent: ProfileJson,
    pub lambda_from_profile: Option<i64>,
    pub mu_from_profile: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BrouwerJson {
    pub kind: &'static str,
    pub value: u64,
    pub case: String,
    pub agrees: bool,
}

fn kind_name(k: RankKind) -> &'static str {
    match k {
        RankKind::Exact => "exact",
        RankKind::LowerBound => "lower_bound",
        RankKind::UpperBound => "upper_bound",
    }
}

fn case_name(c: BrouwerCase) -> String {
    match c {
        BrouwerCase::NoneEven => "none_even".to_string(),
        BrouwerCase::OneEven(i) => format!("theta{}_even", i),
        BrouwerCase::Theta0And1Even => "theta0_theta1_even".to_string(),
        BrouwerCase::Theta0And2Even => "theta0_theta2_even".to_string(),
        BrouwerCase::Theta1And2Even => "theta1_theta2_even".to_string(),
    }
}

fn agrees(pred: &RankPrediction, rank: usize) -> bool {
    let r = rank as u64;
    match pred.kind {
        RankKind::Exact => r == pred.value,
        RankKind::UpperBound => r <= pred.value,
        RankKind::LowerBound => r >= pred.value,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsJson {
    /// Exact rationals as `"num/den"`.
    pub bit_oriented: String,
    pub parity_oriented: String,
    pub effective: u64,
    pub vacuous: bool,
}

impl From<&DistanceBounds> for BoundsJson {
    fn from(b: &DistanceBounds) -> Self {
        BoundsJson {
            bit_oriented: b.bit_oriented.to_string(),
            parity_oriented: b.parity_oriented.to_string(),
            effective: b.effective,
            vacuous: b.vacuous,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CyclesJson {
    pub formula: u64,
    pub enumerated: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CodeJson {
    pub length: usize,
    pub rank: usize,
    pub dimension: usize,
    pub rate: f64,
    pub simulable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub family: String,
    pub field: Option<String>,
    pub q: Option<u32>,
    pub v: usize,
    pub n: usize,
    pub axioms: AxiomsJson,
    pub srg: Option<SrgJson>,
    pub spectrum: Option<SpectrumJson>,
    pub feasibility: Option<FeasibilityJson>,
    pub profiles: Option<ProfilesJson>,
    pub rank2_m: usize,
    pub rank2_mmt: usize,
    pub brouwer: Option<BrouwerJson>,
    pub bounds: Option<BoundsJson>,
    /// A number, or `"inf"` for a forest.
    pub girth: serde_json::Value,
    pub six_cycles: Option<CyclesJson>,
    pub code: CodeJson,
    pub notices: Vec<String>,
    pub failures: Vec<String>,
}

impl AnalysisReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn girth_json(g: Girth) -> serde_json::Value {
    match g {
        Girth::Finite(x) => serde_json::Value::from(x),
        Girth::Infinite => serde_json::Value::from("inf"),
    }
}

/// Runs every check that the structure admits. Checks that depend on a
/// failed one are omitted and the failure is listed.
pub fn analyze(ic: &IncidenceStructure, field: Option<String>) -> AnalysisReport {
    let m = &ic.matrix;
    let code = dimension_and_rate(m);
    let mut notices = Vec::new();
    let mut failures = Vec::new();
    if code.is_trivial() {
        notices.push(format!(
            "rank2(M) = {} equals the number of columns; the code is {{0}} and is not simulated",
            code.rank
        ));
    }
    let mut report = AnalysisReport {
        family: ic.family.to_string(),
        field,
        q: ic.order,
        v: m.rows(),
        n: m.cols(),
        axioms: AxiomsJson {
            ok: false,
            violation: None,
            s: None,
            t: None,
            alphas: None,
        },
        srg: None,
        spectrum: None,
        feasibility: None,
        profiles: None,
        rank2_m: code.rank,
        rank2_mmt: m.gram2().rank2(),
        brouwer: None,
        bounds: None,
        girth: girth_json(tanner_girth(m)),
        six_cycles: None,
        code: CodeJson {
            length: code.length,
            rank: code.rank,
            dimension: code.dimension,
            rate: code.rate,
            simulable: !code.is_trivial(),
        },
        notices: Vec::new(),
        failures: Vec::new(),
    };
    let finish = |mut r: AnalysisReport, notices, failures| {
        r.notices = notices;
        r.failures = failures;
        r
    };

    let gpg = match check_gpg_axioms(ic) {
        Ok(g) => g,
        Err(e) => {
            report.axioms.violation = Some(e.to_string());
            failures.push(format!("axioms: {}", e));
            return finish(report, notices, failures);
        }
    };
    report.axioms = AxiomsJson {
        ok: true,
        violation: None,
        s: Some(gpg.s),
        t: Some(gpg.t),
        alphas: Some(gpg.alphas.clone()),
    };
    let graph = PointGraph::new(ic).expect("axiom (i) already verified");
    let srg = match strongly_regular_parameters(&graph) {
        Ok(s) => s,
        Err(SrgError::Degenerate { edgeless: true }) => {
            notices.push("degenerate: no two points share a block, so the point graph has no edges".to_string());
            failures.push("srg: point graph has no edges".to_string());
            return finish(report, notices, failures);
        }
        Err(e) => {
            failures.push(format!("srg: {}", e));
            return finish(report, notices, failures);
        }
    };
    report.srg = Some(SrgJson {
        v: srg.v,
        k: srg.k,
        lambda: srg.lambda,
        mu: srg.mu,
    });
    let params = SrpgParams::new(&gpg, &srg);
    let feas = feasibility_check(&params);
    report.feasibility = Some((&feas).into());
    if !feas.all_pass() {
        failures.push("feasibility: a necessary condition fails".to_string());
    }
    match alpha_profiles(ic, &params) {
        Ok(p) => {
            for (name, class) in [("adjacent", &p.adjacent), ("non-adjacent", &p.non_adjacent)] {
                if let PairProfile::Varies { first, witness } = class {
                    notices.push(format!(
                        "{} pairs {:?} and {:?} have different alpha profiles; the per-pair identity still holds",
                        name, first, witness
                    ));
                }
            }
            report.profiles = Some(ProfilesJson {
                adjacent: (&p.adjacent).into(),
                non_adjacent: (&p.non_adjacent).into(),
                lambda_from_profile: p.lambda_from_profile(params.s),
                mu_from_profile: p.mu_from_profile(),
            });
        }
        Err(e) => failures.push(format!("profiles: {}", e)),
    }
    let spec = match spectrum(&params) {
        Ok(s) => s,
        Err(e) => {
            failures.push(format!("spectrum: {}", e));
            return finish(report, notices, failures);
        }
    };
    report.spectrum = Some((&spec).into());
    let pred = brouwer_predict(&spec, params.t);
    let ok = agrees(&pred, report.rank2_mmt);
    if !ok {
        failures.push(format!(
            "rank: predicted rank2(MM^T) {} {}, eliminated {}",
            kind_name(pred.kind),
            pred.value,
            report.rank2_mmt
        ));
    }
    if report.rank2_m < report.rank2_mmt {
        failures.push("rank: rank2(M) is below rank2(MM^T)".to_string());
    }
    report.brouwer = Some(BrouwerJson {
        kind: kind_name(pred.kind),
        value: pred.value,
        case: case_name(pred.case),
        agrees: ok,
    });
    match incidence_bounds(&graph, &params, &spec) {
        Ok(b) => {
            if b.vacuous {
                notices.push("both distance bounds are at most 1".to_string());
            }
            report.bounds = Some((&b).into());
        }
        Err(e) => failures.push(format!("bounds: {}", e)),
    }
    match six_cycles(ic, &graph, &params) {
        Ok(c) => {
            if c.formula != c.enumerated {
                failures.push(format!(
                    "six_cycles: formula {} but enumeration found {}",
                    c.formula, c.enumerated
                ));
            }
            report.six_cycles = Some(CyclesJson {
                formula: c.formula,
                enumerated: c.enumerated,
            });
        }
        Err(e) => failures.push(format!("six_cycles: {}", e)),
    }
    finish(report, notices, failures)
}
