//! Batch driver: reads DIMACS instances and runs the stages on each of them.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::bounds::{self, ColorBounds, Stage1Model, Stage2Backend};
use crate::graph::{parse_dimacs, Graph};
use crate::lp_format::export_lp;
use crate::model::{build_m1, build_m2};
use crate::report::{sort_records, RunRecord};
use crate::EngineError;

/// Default per-solve budget in seconds.
pub const DEFAULT_BUDGET_S: f64 = 1800.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
pub enum Stage1Choice {
    M1,
    #[default]
    M2,
    /// Race M1 against M2 and keep the smaller class bound.
    Both,
}

/// What to run on each instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Job {
    /// Stage 1 followed by stage 2.
    Bounds,
    Stage1,
    Stage2,
    /// Stage 1 with M1 and with M2 separately, one record each.
    Bench,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub instances: Vec<PathBuf>,
    pub stage1_model: Stage1Choice,
    pub stage2_backend: Stage2Backend,
    pub lb: Option<usize>,
    pub ub: Option<usize>,
    pub big_m: Option<usize>,
    /// Seconds per solve; stage 2 applies it to every `p` separately.
    pub budget_s: f64,
    pub workers: usize,
    /// When set, stage-1 models are written here as LP files and nothing is solved.
    pub export_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            instances: Vec::new(),
            stage1_model: Stage1Choice::default(),
            stage2_backend: Stage2Backend::default(),
            lb: None,
            ub: None,
            big_m: None,
            budget_s: DEFAULT_BUDGET_S,
            workers: 1,
            export_dir: None,
        }
    }
}

impl RunConfig {
    pub fn budget(&self) -> Duration {
        Duration::from_secs_f64(self.budget_s)
    }

    /// Checks the instance-independent parts of the configuration.
    pub fn validate(&self) -> Result<(), EngineError> {
        if !(self.budget_s > 0.0 && self.budget_s.is_finite()) {
            return Err(EngineError::OutOfRange(format!("budget {} s must be positive", self.budget_s)));
        }
        if self.workers == 0 {
            return Err(EngineError::OutOfRange("workers must be at least 1".into()));
        }
        if let (Some(lb), Some(ub)) = (self.lb, self.ub) {
            if lb < 1 || lb > ub {
                return Err(EngineError::OutOfRange(format!("lb {lb} and ub {ub} must satisfy 1 <= lb <= ub")));
            }
        }
        if self.big_m == Some(0) {
            return Err(EngineError::OutOfRange("big-M must be at least 1".into()));
        }
        Ok(())
    }

    /// Starting bounds for `g`: the defaults with any overrides applied.
    pub fn bounds_for(&self, g: &Graph) -> Result<ColorBounds, EngineError> {
        let d = bounds::default_bounds(g)?;
        ColorBounds::new(self.lb.unwrap_or(d.lb), self.ub.unwrap_or(d.ub), g.n())
    }
}

/// Reads a DIMACS file and names the graph after the file stem.
pub fn load_instance(path: &Path) -> Result<Graph, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let parsed = parse_dimacs(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(parsed.graph.with_name(instance_name(path)))
}

fn instance_name(path: &Path) -> String {
    let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    for ext in [".col", ".dimacs", ".txt"] {
        if let Some(stem) = file.strip_suffix(ext) {
            return stem.to_string();
        }
    }
    file
}

/// Runs `job` on every instance of `cfg`, `cfg.workers` instances at a time.
/// Per-instance failures become [`RunRecord::Failed`] and do not stop the batch.
pub fn run_batch(cfg: &RunConfig, job: Job) -> Result<Vec<RunRecord>, EngineError> {
    cfg.validate()?;
    let next = AtomicUsize::new(0);
    let out = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..cfg.workers.min(cfg.instances.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = cfg.instances.get(i) else { break };
                let records = run_instance(cfg, job, path);
                out.lock().expect("worker panicked").extend(records);
            });
        }
    });
    let mut records = out.into_inner().expect("worker panicked");
    sort_records(&mut records);
    Ok(records)
}

/// Full two-stage run on every instance.
pub fn run_bounds(cfg: &RunConfig) -> Result<Vec<RunRecord>, EngineError> {
    run_batch(cfg, Job::Bounds)
}

fn failed(instance: String, error: impl ToString) -> Vec<RunRecord> {
    vec![RunRecord::Failed { instance, error: error.to_string() }]
}

fn run_instance(cfg: &RunConfig, job: Job, path: &Path) -> Vec<RunRecord> {
    let g = match load_instance(path) {
        Ok(g) => g,
        Err(e) => return failed(instance_name(path), e),
    };
    match run_graph(cfg, job, &g) {
        Ok(records) => records,
        Err(e) => failed(g.name().to_string(), e),
    }
}

/// Runs `job` on an in-memory graph.
pub fn run_graph(cfg: &RunConfig, job: Job, g: &Graph) -> Result<Vec<RunRecord>, EngineError> {
    let start = cfg.bounds_for(g)?;
    if let Some(dir) = &cfg.export_dir {
        return export_stage1(cfg, g, start, dir);
    }
    let budget = cfg.budget();
    let stage1 = |model: Stage1Choice| match model {
        Stage1Choice::M1 => bounds::stage1_with_big_m(g, start, Stage1Model::M1, cfg.big_m, budget),
        Stage1Choice::M2 => bounds::stage1_with_big_m(g, start, Stage1Model::M2, cfg.big_m, budget),
        Stage1Choice::Both if cfg.big_m.is_none() => bounds::stage1_race(g, start, budget),
        Stage1Choice::Both => Err(EngineError::OutOfRange("big-M override needs a single stage-1 model".into())),
    };
    let mut records = Vec::new();
    match job {
        Job::Stage1 => records.push(RunRecord::Stage(stage1(cfg.stage1_model)?)),
        Job::Stage2 => records.push(RunRecord::Stage(bounds::stage2(g, start, budget, cfg.stage2_backend)?)),
        Job::Bounds => {
            let first = stage1(cfg.stage1_model)?;
            let next = first.bounds();
            records.push(RunRecord::Stage(first));
            match bounds::stage2(g, next, budget, cfg.stage2_backend) {
                Ok(second) => records.push(RunRecord::Stage(second)),
                Err(e) => records.extend(failed(g.name().to_string(), e)),
            }
        }
        Job::Bench => {
            for model in [Stage1Choice::M1, Stage1Choice::M2] {
                match stage1(model) {
                    Ok(r) => records.push(RunRecord::Stage(r)),
                    Err(e) => records.extend(failed(g.name().to_string(), e)),
                }
            }
        }
    }
    Ok(records)
}

fn export_stage1(cfg: &RunConfig, g: &Graph, start: ColorBounds, dir: &Path) -> Result<Vec<RunRecord>, EngineError> {
    let big_m = match cfg.big_m {
        Some(m) => m,
        None => bounds::big_m_value(g.n(), start.lb)?,
    };
    let models = match cfg.stage1_model {
        Stage1Choice::M1 => vec![build_m1(g, start.ub, big_m)?],
        Stage1Choice::M2 => vec![build_m2(g, start.ub, big_m)?],
        Stage1Choice::Both => vec![build_m1(g, start.ub, big_m)?, build_m2(g, start.ub, big_m)?],
    };
    let mut records = Vec::new();
    for m in models {
        let path = dir.join(format!("{}.{}.lp", g.name(), m.meta().kind));
        match export_lp(&m, &path) {
            Ok(()) => records.push(RunRecord::Exported {
                instance: g.name().to_string(),
                model: m.meta().kind,
                path: path.display().to_string(),
            }),
            Err(e) => records.extend(failed(g.name().to_string(), format!("{}: {e}", path.display()))),
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn path_p3_two_stages() {
        let cfg = RunConfig { budget_s: 10.0, ..RunConfig::default() };
        let records = run_graph(&cfg, Job::Bounds, &fixtures::path(3)).unwrap();
        let [RunRecord::Stage(s1), RunRecord::Stage(s2)] = records.as_slice() else { panic!("{records:?}") };
        assert_eq!((s1.beta0, s1.lb_star), (Some(2), 2));
        assert_eq!(s2.chi_eq_proved, Some(2));
    }

    #[test]
    fn batch_survives_a_bad_file() {
        let dir = tempfile::tempdir().unwrap();
        let good = write(dir.path(), "tri.col", "p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n");
        let bad = write(dir.path(), "bad.col", "p edge 3 1\ne 1 9\n");
        let cfg = RunConfig { instances: vec![good, bad], budget_s: 10.0, workers: 2, ..RunConfig::default() };
        let records = run_bounds(&cfg).unwrap();
        assert_eq!(records.len(), 3);
        assert!(matches!(&records[0], RunRecord::Failed { instance, .. } if instance == "bad"));
        assert!(matches!(&records[2], RunRecord::Stage(r) if r.chi_eq_proved == Some(3)));
    }

    #[test]
    fn export_only_writes_files() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            export_dir: Some(dir.path().to_path_buf()),
            stage1_model: Stage1Choice::Both,
            ..RunConfig::default()
        };
        let records = run_graph(&cfg, Job::Bounds, &fixtures::cycle(5).with_name("c5")).unwrap();
        assert_eq!(records.len(), 2);
        assert!(dir.path().join("c5.M1.lp").exists());
        assert!(dir.path().join("c5.M2.lp").exists());
    }

    #[test]
    fn config_errors() {
        assert!(RunConfig { budget_s: 0.0, ..RunConfig::default() }.validate().is_err());
        assert!(RunConfig { lb: Some(4), ub: Some(3), ..RunConfig::default() }.validate().is_err());
        let cfg = RunConfig { ub: Some(9), ..RunConfig::default() };
        assert!(cfg.bounds_for(&fixtures::path(3)).is_err());
    }
}
