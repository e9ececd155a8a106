//! `gen-graph`, `gen-dataset` and `verify`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Component, Path, PathBuf};

use anyhow::{anyhow, Context};
use tempqa_core::ratagen::{
    generate_graph, generate_instances_with, generate_knowledge_questions, import_path, verify_instance,
    GraphParams, InstanceConfig, TaskInstance,
};
use tempqa_core::seed::derive_seed;
use tempqa_core::tkg::estimate_tokens;
use tempqa_core::{Interval, QuestionType, Tkg};

use super::{emit, save_jsonl};
use crate::config::{parse_list, FileConfig};
use crate::{CliError, CliResult, GenDatasetArgs, GenGraphArgs, GraphShape, VerifyArgs};

pub const DEFAULT_PER_TYPE: usize = 10;

fn seed(flag: Option<u64>, cfg: &FileConfig) -> CliResult<u64> {
    match flag {
        Some(s) => Ok(s),
        None => cfg
            .get("seed")?
            .ok_or_else(|| CliError::Usage("--seed is required (or `seed` in the config file)".into())),
    }
}

fn graph_params(shape: &GraphShape, seed: u64) -> CliResult<GraphParams> {
    let d = GraphParams::default();
    let start = shape.start.unwrap_or(d.time_range.start());
    let end = shape.end.unwrap_or(d.time_range.end());
    let time_range =
        Interval::new(start, end).map_err(|e| CliError::Usage(format!("--start {start} --end {end}: {e}")))?;
    Ok(GraphParams {
        n_entities: shape.entities.unwrap_or(d.n_entities),
        n_relations: shape.relations.unwrap_or(d.n_relations),
        n_facts: shape.facts.unwrap_or(d.n_facts),
        time_range,
        max_episodes_per_triple: shape.episodes.unwrap_or(d.max_episodes_per_triple),
        seed,
    })
}

fn summary(g: &Tkg, seed: u64) -> String {
    let text = g.render_text(&Default::default(), derive_seed(seed, "render"));
    format!(
        "entities: {}, relations: {}, facts: {}, tokens: {}\n",
        g.entities().len(),
        g.relations().len(),
        g.len(),
        estimate_tokens(&text)
    )
}

pub fn gen_graph(a: &GenGraphArgs, cfg: &FileConfig) -> CliResult<()> {
    let seed = seed(a.seed, cfg)?;
    let g = generate_graph(&graph_params(&a.shape, seed)?).context("generating graph")?;
    std::fs::write(&a.out, g.to_jsonl()).with_context(|| format!("writing {}", a.out.display()))?;
    emit(&summary(&g, seed), None)
}

fn question_types(flag: Option<&str>, cfg: &FileConfig) -> CliResult<Vec<QuestionType>> {
    let types = match flag {
        Some(list) => Some(parse_list(list).map_err(|e| CliError::Usage(format!("--types: {e}")))?),
        None => cfg.list("types")?,
    };
    match types {
        Some(t) if t.is_empty() => Err(CliError::Usage("--types is empty".into())),
        Some(t) => Ok(t),
        None => Ok(QuestionType::ALL.to_vec()),
    }
}

/// Verify every instance, returning the failures as `id: reason` lines.
fn failures(instances: &[TaskInstance], base_dir: Option<&Path>) -> CliResult<Vec<String>> {
    let mut bad = Vec::new();
    for t in instances {
        let v = verify_instance(t, base_dir).with_context(|| format!("instance {}", t.id))?;
        if !v.passed() {
            bad.push(format!(
                "{}: gold {:?}, oracle {:?}, solver {:?}, answer type ok: {}",
                v.id, v.gold, v.oracle, v.dispatched, v.answer_type_ok
            ));
        }
    }
    Ok(bad)
}

pub fn gen_dataset(a: &GenDatasetArgs, cfg: &FileConfig) -> CliResult<()> {
    let seed = seed(a.seed, cfg)?;
    let g = match &a.graph {
        Some(p) => Tkg::load_path(p).with_context(|| format!("loading graph {}", p.display()))?,
        None => generate_graph(&graph_params(&a.shape, derive_seed(seed, "graph"))?).context("generating graph")?,
    };
    let per_type = cfg.pick(a.per_type, "per_type", DEFAULT_PER_TYPE)?;
    let types = question_types(a.types.as_deref(), cfg)?;
    let base_dir = a.out.parent().filter(|p| !p.as_os_str().is_empty());
    let tkg_path = if a.link_graph {
        let graph = a.graph.as_ref().expect("clap requires --graph");
        Some(link_path(graph, base_dir)?)
    } else {
        None
    };
    let icfg = InstanceConfig {
        types,
        tkg_path,
        ..InstanceConfig::new(per_type, seed)
    };
    let instances = generate_instances_with(&g, &icfg).context("generating instances")?;

    let bad = failures(&instances, base_dir)?;
    if !bad.is_empty() {
        return Err(anyhow!("{} of {} instances failed verification:\n{}", bad.len(), instances.len(), bad.join("\n")).into());
    }
    save_jsonl(&instances, &a.out)?;

    let mut templates: BTreeMap<QuestionType, BTreeSet<&str>> = BTreeMap::new();
    for t in &instances {
        templates.entry(t.question_type).or_default().insert(&t.template);
    }
    let min_templates = templates.values().map(BTreeSet::len).min().unwrap_or(0);
    let mut text = format!(
        "instances: {}, types: {}, verified: {}, min templates per type: {min_templates}\n",
        instances.len(),
        templates.len(),
        instances.len()
    );
    if let Some(path) = &a.confidence_out {
        let n = a.knowledge.unwrap_or(instances.len());
        let items = generate_knowledge_questions(&g, &instances, n, a.excerpt_lines, seed);
        save_jsonl(&items, path)?;
        text.push_str(&format!("confidence items: {}\n", items.len()));
    }
    emit(&text, None)
}

/// The graph path relative to the dataset's directory.
fn link_path(graph: &Path, base_dir: Option<&Path>) -> CliResult<String> {
    let abs = |p: &Path| -> CliResult<PathBuf> {
        Ok(std::fs::canonicalize(p).with_context(|| format!("resolving {}", p.display()))?)
    };
    let graph_abs = abs(graph)?;
    let base_abs = abs(base_dir.unwrap_or(Path::new(".")))?;
    let (g, b): (Vec<Component>, Vec<Component>) = (graph_abs.components().collect(), base_abs.components().collect());
    let common = g.iter().zip(&b).take_while(|(x, y)| x == y).count();
    let mut rel = PathBuf::new();
    for _ in common..b.len() {
        rel.push("..");
    }
    rel.extend(&g[common..]);
    rel.to_str()
        .map(str::to_string)
        .ok_or_else(|| CliError::Usage(format!("graph path {} is not valid UTF-8", rel.display())))
}

pub fn verify(a: &VerifyArgs, cfg: &FileConfig) -> CliResult<()> {
    let path = match &a.dataset {
        Some(p) => p.clone(),
        None => cfg
            .raw("dataset")
            .map(Into::into)
            .ok_or_else(|| CliError::Usage("--dataset is required (or `dataset` in the config file)".into()))?,
    };
    let instances = import_path(&path).with_context(|| format!("reading {}", path.display()))?;
    let base_dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let bad = failures(&instances, base_dir)?;
    emit(&format!("verified {} of {} instances\n", instances.len() - bad.len(), instances.len()), None)?;
    if bad.is_empty() {
        Ok(())
    } else {
        Err(anyhow!("verification failed:\n{}", bad.join("\n")).into())
    }
}
