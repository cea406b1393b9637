//! The build → construct → certify → export pipeline behind the command line.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analysis::{
    export_code, export_graph, geometric_containment, intersection_counts, proof_case_counts,
    spectrum_from_counts, CodeSummary, ContainmentReport, GraphSummary, HyperplaneClasses,
    ProofCaseReport, Verdict, DEFAULT_SPOT_CHECKS,
};
use crate::construction::{
    algebraic_set, all_bijections, bijection_experiment, geometric_set, lambda_set, random_bijections,
    sets_equal, Construction, Correspondence, Provenance, TwoWeightSet,
};
use crate::error::{Error, Result};
use crate::field::{Tower, TowerOptions, DEFAULT_TABLE_CAP};
use crate::io;
use crate::projective::Space;
use crate::singer::SingerGeometry;

pub const OUT_DIR_ENV: &str = "TWOWEIGHT_OUT";
pub const DEFAULT_OUT_DIR: &str = "twoweight-out";
pub const DEFAULT_VERTEX_CAP: u64 = 5000;
pub const DEFAULT_MAX_BIJECTIONS: u64 = 5040;
const SPOT_CHECK_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructionChoice {
    Geometric,
    Algebraic,
    Both,
    /// The subspace Λ, a negative control.
    Lambda,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorrespondenceSource {
    Alpha,
    Exhaustive,
    Random { count: usize, seed: u64 },
    File(PathBuf),
}

impl std::str::FromStr for CorrespondenceSource {
    type Err = Error;

    /// `alpha`, `exhaustive`, `random:<count>[:<seed>]`, or a file path.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(Self::Alpha),
            "exhaustive" => Ok(Self::Exhaustive),
            _ if s.starts_with("random") => {
                let parts: Vec<&str> = s.split(':').collect();
                let num = |i: usize, default: u64| -> Result<u64> {
                    parts.get(i).map_or(Ok(default), |v| {
                        v.parse().map_err(|_| Error::Parse(format!("bad number {v:?} in {s:?}")))
                    })
                };
                if parts[0] != "random" || parts.len() > 3 {
                    return Err(Error::Parse(format!("expected random:<count>[:<seed>], got {s:?}")));
                }
                Ok(Self::Random {
                    count: num(1, 100)? as usize,
                    seed: num(2, 0)?,
                })
            }
            _ => Ok(Self::File(PathBuf::from(s))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub p: u32,
    pub e: u32,
    pub n: u32,
    pub modulus: Option<Vec<u32>>,
    pub construction: ConstructionChoice,
    pub correspondence: CorrespondenceSource,
    /// Certify this point file instead of constructing a set.
    pub input: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub vertex_cap: u64,
    /// 0 picks the rayon default.
    pub threads: usize,
    pub max_bijections: u64,
    pub table_cap: u64,
}

impl RunConfig {
    pub fn new(p: u32, e: u32, n: u32) -> RunConfig {
        RunConfig {
            p,
            e,
            n,
            modulus: None,
            construction: ConstructionChoice::Algebraic,
            correspondence: CorrespondenceSource::Alpha,
            input: None,
            out_dir: PathBuf::from(DEFAULT_OUT_DIR),
            vertex_cap: DEFAULT_VERTEX_CAP,
            threads: 0,
            max_bijections: DEFAULT_MAX_BIJECTIONS,
            table_cap: DEFAULT_TABLE_CAP,
        }
    }

    fn tower(&self) -> Result<Tower> {
        Tower::build(
            self.p,
            self.e,
            self.n,
            &TowerOptions {
                modulus: self.modulus.clone(),
                table_cap: self.table_cap,
            },
        )
    }

    fn prepare_out_dir(&self) -> Result<()> {
        fs::create_dir_all(&self.out_dir)?;
        Ok(())
    }

    fn out(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    /// Runs `f` on a pool of `threads` workers.
    pub fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}

/// Overall result of a command; the process exit code is 0 or 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

struct Context {
    space: Space,
    geom: Option<SingerGeometry>,
}

impl Context {
    fn new(cfg: &RunConfig) -> Result<Context> {
        Ok(Context {
            space: Space::new(cfg.tower()?)?,
            geom: None,
        })
    }

    fn ensure_geom(&mut self) -> Result<()> {
        if self.geom.is_none() {
            self.geom = Some(SingerGeometry::build(&self.space)?);
        }
        Ok(())
    }

    fn geom(&self) -> &SingerGeometry {
        self.geom.as_ref().expect("ensure_geom first")
    }

    fn correspondence(&mut self, src: &CorrespondenceSource) -> Result<Correspondence> {
        self.ensure_geom()?;
        match src {
            CorrespondenceSource::Alpha => Correspondence::alpha(&self.space, self.geom()),
            CorrespondenceSource::File(path) => {
                let map = io::parse_numbers(&fs::read_to_string(path)?)?;
                Correspondence::from_permutation(&self.space, self.geom(), map)
            }
            other => Err(Error::InvalidParams(format!(
                "correspondence {other:?} selects several bijections; use the experiment command"
            ))),
        }
    }

    fn geometric(&mut self, src: &CorrespondenceSource) -> Result<TwoWeightSet> {
        let corr = self.correspondence(src)?;
        geometric_set(&self.space, self.geom(), &corr)
    }

    /// The selected set; for `Both`, the algebraic set and whether the two
    /// constructions agree.
    fn construct(&mut self, cfg: &RunConfig) -> Result<(Vec<TwoWeightSet>, Option<bool>)> {
        Ok(match cfg.construction {
            ConstructionChoice::Algebraic => (vec![algebraic_set(&self.space)?], None),
            ConstructionChoice::Geometric => (vec![self.geometric(&cfg.correspondence)?], None),
            ConstructionChoice::Lambda => (vec![lambda_set(&self.space)], None),
            ConstructionChoice::Both => {
                let alg = algebraic_set(&self.space)?;
                let geo = self.geometric(&cfg.correspondence)?;
                let agree = sets_equal(&alg, &geo)?;
                (vec![alg, geo], Some(agree))
            }
        })
    }
}

fn construction_name(c: Construction) -> &'static str {
    match c {
        Construction::Geometric => "geometric",
        Construction::Algebraic => "algebraic",
        Construction::Lambda => "lambda",
        Construction::Imported => "imported",
    }
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct CertParams {
    pub p: u32,
    pub e: u32,
    pub n: u32,
    pub q: u32,
}

/// Derived constants as exponents of `beta`.
#[derive(Clone, Debug, Serialize)]
pub struct Constants {
    pub order: u64,
    pub gamma: u32,
    pub xi: u32,
    pub omega: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct BuiltSet {
    pub construction: Provenance,
    pub size: usize,
    pub file: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BuildReport {
    pub params: CertParams,
    pub modulus: Vec<u32>,
    pub sets: Vec<BuiltSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constructions_agree: Option<bool>,
}

fn cert_params(t: &Tower) -> CertParams {
    CertParams {
        p: t.p(),
        e: t.e(),
        n: t.n(),
        q: t.q(),
    }
}

/// Constructs the selected set(s) and writes them as point files.
pub fn cmd_build(cfg: &RunConfig) -> Result<(BuildReport, Outcome)> {
    cfg.run(|| {
        let mut ctx = Context::new(cfg)?;
        cfg.prepare_out_dir()?;
        let (sets, agree) = ctx.construct(cfg)?;
        let mut built = Vec::new();
        for set in &sets {
            let file = format!("set_{}.txt", construction_name(set.provenance.construction));
            write_file(&cfg.out(&file), |w| io::write_point_set(w, &ctx.space, set))?;
            built.push(BuiltSet {
                construction: set.provenance.clone(),
                size: set.len(),
                file,
            });
        }
        let t = ctx.space.tower();
        let report = BuildReport {
            params: cert_params(t),
            modulus: t.modulus().to_vec(),
            sets: built,
            constructions_agree: agree,
        };
        let outcome = if agree == Some(false) {
            Outcome::Fail
        } else {
            Outcome::Pass
        };
        Ok((report, outcome))
    })?
}

/// A report section that may be skipped for a stated reason.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Section<T> {
    Done(T),
    Skipped { skipped: String },
}

impl<T> Section<T> {
    fn skipped(reason: impl Into<String>) -> Section<T> {
        Section::Skipped {
            skipped: reason.into(),
        }
    }

    pub fn done(&self) -> Option<&T> {
        match self {
            Section::Done(t) => Some(t),
            Section::Skipped { .. } => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub params: CertParams,
    pub modulus: Vec<u32>,
    pub constants: Constants,
    pub construction: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constructions_agree: Option<bool>,
    pub set_size: usize,
    pub histogram: BTreeMap<u32, u64>,
    pub expected: [u64; 2],
    pub verdict: Verdict,
    pub hyperplane_classes: HyperplaneClasses,
    pub proof_case_report: Section<ProofCaseReport>,
    pub containment_report: Section<ContainmentReport>,
    pub code: Section<CodeSummary>,
    pub graph: Section<GraphSummary>,
}

impl Certificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// Full certification of one set; writes `certificate.json` and, when the
/// verdict passes, `generator.txt` and `edges.txt`.
pub fn cmd_certify(cfg: &RunConfig) -> Result<(Certificate, Outcome)> {
    cfg.run(|| certify_inner(cfg))?
}

fn certify_inner(cfg: &RunConfig) -> Result<(Certificate, Outcome)> {
    let mut ctx = Context::new(cfg)?;
    cfg.prepare_out_dir()?;
    let (set, agree) = match &cfg.input {
        Some(path) => {
            let file = io::read_point_set(BufReader::new(File::open(path)?))?;
            (file.into_set(&ctx.space)?, None)
        }
        None => {
            let (mut sets, agree) = ctx.construct(cfg)?;
            (sets.swap_remove(0), agree)
        }
    };
    let counts = intersection_counts(&ctx.space, &set.points);
    let spectrum = spectrum_from_counts(&ctx.space, &set, &counts)?;
    let pass = spectrum.passed();

    let default_points = algebraic_set(&ctx.space)?.points;
    let proof_case_report = if set.points == default_points {
        ctx.ensure_geom()?;
        Section::Done(proof_case_counts(&ctx.space, ctx.geom(), &set, &counts)?)
    } else {
        Section::skipped("set differs from the default construction")
    };
    let space = &ctx.space;
    let t = space.tower();
    let containment_report = Section::Done(geometric_containment(space, &set)?);

    let (code, graph) = if pass {
        let code = export_code(space, &set, &spectrum, &counts, DEFAULT_SPOT_CHECKS, SPOT_CHECK_SEED)?;
        write_file(&cfg.out("generator.txt"), |w| io::write_generator(w, &code))?;
        let graph = match export_graph(space, &set, cfg.vertex_cap, SPOT_CHECK_SEED) {
            Ok(g) => {
                write_file(&cfg.out("edges.txt"), |w| io::write_edges(w, &g))?;
                Section::Done(g.summary())
            }
            Err(Error::ResourceCap(msg)) => Section::skipped(msg),
            Err(e) => return Err(e),
        };
        (Section::Done(code.summary()), graph)
    } else {
        let reason = "spectrum verdict is fail";
        (Section::skipped(reason), Section::skipped(reason))
    };

    let proof_ok = proof_case_report.done().is_none_or(ProofCaseReport::all_ok);
    let outcome = if pass && proof_ok && agree != Some(false) {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    let log = |x: crate::field::Elem| x.log().expect("nonzero constant");
    let cert = Certificate {
        params: cert_params(t),
        modulus: t.modulus().to_vec(),
        constants: Constants {
            order: t.order() as u64,
            gamma: log(t.gamma()),
            xi: log(t.xi()),
            omega: log(t.omega()),
        },
        construction: set.provenance.clone(),
        constructions_agree: agree,
        set_size: spectrum.set_size,
        histogram: spectrum.histogram,
        expected: spectrum.expected,
        verdict: spectrum.verdict,
        hyperplane_classes: spectrum.classes,
        proof_case_report,
        containment_report,
        code,
        graph,
    };
    fs::write(cfg.out("certificate.json"), cert.to_json()?)?;
    Ok((cert, outcome))
}

#[derive(Clone, Debug, Serialize)]
pub struct BijectionRun {
    pub correspondence: Vec<u32>,
    pub anti_isomorphic: bool,
    pub two_weight: bool,
    pub support: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub params: CertParams,
    pub modulus: Vec<u32>,
    pub source: String,
    pub bijections: u64,
    pub two_weight: u64,
    pub anti_isomorphic: u64,
    pub anti_isomorphic_two_weight: u64,
    /// Histogram, rendered `size:count,...`, to number of bijections.
    pub spectra: BTreeMap<String, u64>,
    pub runs: Vec<BijectionRun>,
}

fn factorial_capped(n: u64, cap: u64) -> Option<u64> {
    (1..=n).try_fold(1u64, |acc, k| acc.checked_mul(k).filter(|&v| v <= cap))
}

/// Runs the cone construction over the selected bijections and tabulates
/// how many give two-weight sets. For `n = 2` every bijection must.
pub fn cmd_experiment(cfg: &RunConfig) -> Result<(ExperimentReport, Outcome)> {
    cfg.run(|| {
        let mut ctx = Context::new(cfg)?;
        cfg.prepare_out_dir()?;
        ctx.ensure_geom()?;
        let np = ctx.space.pi_count() as u64;
        let too_many =
            |count: u64| Error::ResourceCap(format!("{count} bijections exceed --max-bijections {}", cfg.max_bijections));
        let (maps, source): (Vec<Vec<u32>>, String) = match &cfg.correspondence {
            CorrespondenceSource::Exhaustive => {
                factorial_capped(np, cfg.max_bijections).ok_or_else(|| Error::ResourceCap(format!(
                    "{np}! bijections exceed --max-bijections {}",
                    cfg.max_bijections
                )))?;
                (all_bijections(&ctx.space).collect(), "exhaustive".into())
            }
            CorrespondenceSource::Random { count, seed } => {
                if *count as u64 > cfg.max_bijections {
                    return Err(too_many(*count as u64));
                }
                (random_bijections(&ctx.space, *count, *seed), format!("random:{count}:{seed}"))
            }
            src => {
                let corr = ctx.correspondence(src)?;
                let name = match src {
                    CorrespondenceSource::File(p) => p.display().to_string(),
                    _ => "alpha".into(),
                };
                (vec![corr.map().to_vec()], name)
            }
        };

        let space = &ctx.space;
        let geom = ctx.geom();
        let mut report = ExperimentReport {
            params: cert_params(space.tower()),
            modulus: space.tower().modulus().to_vec(),
            source,
            bijections: 0,
            two_weight: 0,
            anti_isomorphic: 0,
            anti_isomorphic_two_weight: 0,
            spectra: BTreeMap::new(),
            runs: Vec::with_capacity(maps.len()),
        };
        for map in maps {
            let corr = Correspondence::from_permutation(space, geom, map)?;
            let cert = bijection_experiment(space, geom, &corr)?;
            let two_weight = cert.passed();
            let anti = corr.anti_isomorphic();
            report.bijections += 1;
            report.two_weight += two_weight as u64;
            report.anti_isomorphic += anti as u64;
            report.anti_isomorphic_two_weight += (anti && two_weight) as u64;
            let key = cert
                .histogram
                .iter()
                .map(|(s, c)| format!("{s}:{c}"))
                .collect::<Vec<_>>()
                .join(",");
            *report.spectra.entry(key).or_insert(0) += 1;
            report.runs.push(BijectionRun {
                correspondence: corr.map().to_vec(),
                anti_isomorphic: anti,
                two_weight,
                support: cert.support(),
            });
        }
        fs::write(cfg.out("experiment.json"), serde_json::to_string_pretty(&report)? + "\n")?;
        let outcome = if space.n() == 2 && report.two_weight != report.bijections {
            Outcome::Fail
        } else {
            Outcome::Pass
        };
        Ok((report, outcome))
    })?
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(p: u32, n: u32, dir: &Path) -> RunConfig {
        let mut c = RunConfig::new(p, 1, n);
        c.out_dir = dir.to_path_buf();
        c
    }

    #[test]
    fn correspondence_parsing() {
        assert_eq!("alpha".parse::<CorrespondenceSource>().unwrap(), CorrespondenceSource::Alpha);
        assert_eq!(
            "random:10:3".parse::<CorrespondenceSource>().unwrap(),
            CorrespondenceSource::Random { count: 10, seed: 3 }
        );
        assert_eq!(
            "random".parse::<CorrespondenceSource>().unwrap(),
            CorrespondenceSource::Random { count: 100, seed: 0 }
        );
        assert!("random:x".parse::<CorrespondenceSource>().is_err());
        assert_eq!(
            "perm.txt".parse::<CorrespondenceSource>().unwrap(),
            CorrespondenceSource::File("perm.txt".into())
        );
    }

    #[test]
    fn factorial_cap() {
        assert_eq!(factorial_capped(4, 24), Some(24));
        assert_eq!(factorial_capped(4, 23), None);
        assert_eq!(factorial_capped(13, u64::MAX), Some(6_227_020_800));
    }

    #[test]
    fn build_both() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = config(2, 2, dir.path());
        c.construction = ConstructionChoice::Both;
        let (r, o) = cmd_build(&c).unwrap();
        assert_eq!(o, Outcome::Pass);
        assert_eq!(r.constructions_agree, Some(true));
        assert!(r.sets.iter().all(|s| s.size == 18));
        assert!(dir.path().join("set_geometric.txt").exists());
    }

    #[test]
    fn certify_lambda_fails() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = config(2, 2, dir.path());
        c.construction = ConstructionChoice::Lambda;
        let (cert, o) = cmd_certify(&c).unwrap();
        assert_eq!(o, Outcome::Fail);
        assert_eq!(cert.verdict, Verdict::Fail);
        assert!(cert.code.done().is_none());
    }

    #[test]
    fn certify_imported_file() {
        let dir = tempfile::tempdir().unwrap();
        let c = config(2, 2, dir.path());
        cmd_build(&c).unwrap();
        let mut c2 = c.clone();
        c2.input = Some(dir.path().join("set_algebraic.txt"));
        let (cert, o) = cmd_certify(&c2).unwrap();
        assert_eq!(o, Outcome::Pass);
        assert_eq!(cert.histogram, BTreeMap::from([(6, 18), (10, 45)]));
        assert!(cert.proof_case_report.done().is_some());
    }

    #[test]
    fn experiment_cap() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = config(3, 3, dir.path());
        c.correspondence = CorrespondenceSource::Exhaustive;
        assert!(matches!(cmd_experiment(&c), Err(Error::ResourceCap(_))));
    }
}
