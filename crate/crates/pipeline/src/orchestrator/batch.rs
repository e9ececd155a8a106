//! Running many (instance, technique) pairs with a bounded number in flight.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use tempqa_core::ratagen::TaskInstance;
use tempqa_core::Tkg;

use super::client::ChatClient;
use super::{run, PipelineConfig, PipelineError, PipelineResult, Technique};

#[derive(Debug, Clone, Copy)]
pub struct BatchJob<'a> {
    pub instance: &'a TaskInstance,
    pub graph: &'a Tkg,
    pub technique: Technique,
}

/// Run every job, at most `parallelism` at a time. Each job gets its own
/// client from `make_client`. Results come back in job order.
pub fn run_batch<'a, F>(
    jobs: &[BatchJob<'a>],
    make_client: F,
    cfg: &PipelineConfig,
    parallelism: usize,
) -> Vec<Result<PipelineResult, PipelineError>>
where
    F: Fn(&BatchJob<'a>) -> Box<dyn ChatClient + 'a> + Sync,
{
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<PipelineResult, PipelineError>>>> =
        Mutex::new((0..jobs.len()).map(|_| None).collect());
    let workers = parallelism.clamp(1, jobs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let client = make_client(job);
                let r = run(job.instance, job.graph, job.technique, client.as_ref(), cfg);
                slots.lock().expect("result slots poisoned")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("result slots poisoned")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}
