//! Shared fixtures for the pipeline integration tests.

#![allow(dead_code)]

use tempqa_core::ratagen::{generate_graph, generate_instances, GraphParams, TaskInstance};
use tempqa_core::{QuestionType, Tkg};
use tempqa_pipeline::evalharness::{score_result, ScoredRow};
use tempqa_pipeline::orchestrator::{
    run_batch, BatchJob, ChatClient, OracleClient, PipelineConfig, PipelineResult, Technique,
};

pub fn dataset(per_type: usize, seed: u64) -> (Tkg, Vec<TaskInstance>) {
    let g = generate_graph(&GraphParams {
        seed,
        ..GraphParams::default()
    })
    .unwrap();
    let instances = generate_instances(&g, per_type, &QuestionType::ALL, seed).unwrap();
    (g, instances)
}

/// Run `tech` on every instance with a client built per instance.
pub fn run_all<'a>(
    g: &'a Tkg,
    instances: &'a [TaskInstance],
    tech: Technique,
    make: impl Fn(&TaskInstance) -> Box<dyn ChatClient + 'a> + Sync,
) -> Vec<PipelineResult> {
    let jobs: Vec<BatchJob> = instances
        .iter()
        .map(|instance| BatchJob {
            instance,
            graph: g,
            technique: tech,
        })
        .collect();
    run_batch(&jobs, |j| make(j.instance), &PipelineConfig::default(), 4)
        .into_iter()
        .map(|r| r.unwrap())
        .collect()
}

pub fn oracle_run(g: &Tkg, instances: &[TaskInstance], tech: Technique) -> Vec<PipelineResult> {
    run_all(g, instances, tech, |t| Box::new(OracleClient::new(t, g)))
}

pub fn scored(instances: &[TaskInstance], results: &[PipelineResult]) -> Vec<ScoredRow> {
    instances.iter().zip(results).map(|(t, r)| score_result(t, r)).collect()
}
