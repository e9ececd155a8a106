mod common;

use proptest::prelude::*;
use tempqa_core::ratagen::TaskLabel;
use tempqa_core::{AnswerValue, QuestionType};
use tempqa_pipeline::evalharness::{
    aggregate, aggregate_with, confidence_report, score, token_bins, ConfidenceReport, Format, ScoredRow,
};
use tempqa_pipeline::orchestrator::{Answer, Technique};

fn row(id: usize, q: QuestionType, tech: Technique, correct: bool, time: f64, tokens: usize) -> ScoredRow {
    ScoredRow {
        instance_id: format!("i{id}"),
        question_type: q,
        technique: tech,
        correct,
        parse_error: false,
        wall_time: time,
        llm_calls: 1,
        token_estimate: tokens,
        associated: tech.uses_functions().then_some(id.is_multiple_of(2)),
        answer: Answer::Unparsed(String::new()),
        gold: AnswerValue::Count(0),
    }
}

fn rows() -> impl Strategy<Value = Vec<ScoredRow>> {
    prop::collection::vec(
        (0usize..30, 0usize..17, 0usize..8, any::<bool>(), 0.0f64..20.0, 0usize..5000),
        0..60,
    )
    .prop_map(|v| {
        v.into_iter()
            .map(|(id, q, t, c, time, tok)| row(id, QuestionType::ALL[q], Technique::ALL[t], c, time, tok))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn aggregate_ignores_row_order(rs in rows(), seed in any::<u64>()) {
        let mut shuffled = rs.clone();
        let mut state = seed;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        let a = aggregate(&rs);
        let b = aggregate(&shuffled);
        prop_assert_eq!(a.render(Format::Json), b.render(Format::Json));
    }

    #[test]
    fn totals_match_recomputation(rs in rows()) {
        let r = aggregate(&rs);
        for tr in &r.techniques {
            let mine: Vec<&ScoredRow> = rs.iter().filter(|x| x.technique == tr.technique).collect();
            let correct = mine.iter().filter(|x| x.correct).count();
            prop_assert_eq!(tr.questions, mine.len());
            prop_assert_eq!(tr.correct, correct);
            prop_assert!((tr.accuracy - correct as f64 * 100.0 / mine.len() as f64).abs() < 1e-9);
            let mean = mine.iter().map(|x| x.wall_time).sum::<f64>() / mine.len() as f64;
            prop_assert!((tr.mean_time - mean).abs() < 1e-9);
            let std = if mine.len() < 2 {
                0.0
            } else {
                (mine.iter().map(|x| (x.wall_time - mean).powi(2)).sum::<f64>() / (mine.len() - 1) as f64).sqrt()
            };
            prop_assert!((tr.std_time - std).abs() < 1e-9);
        }
        if let Some(total) = r.per_type.last() {
            prop_assert_eq!(&total.task, "Total");
            for tr in &r.techniques {
                prop_assert!((total.accuracy[&tr.technique] - tr.accuracy).abs() < 1e-9);
            }
        }
        if let Some(u) = &r.function_usage {
            prop_assert!((u.cells().iter().sum::<f64>() - 100.0).abs() < 1e-9);
        }
    }

    #[test]
    fn token_bins_partition_rows(rs in rows(), width in 1usize..3000) {
        let bins = token_bins(&rs, width);
        prop_assert_eq!(bins.iter().map(|b| b.total).sum::<usize>(), rs.len());
        prop_assert_eq!(
            bins.iter().map(|b| b.false_predictions).sum::<usize>(),
            rs.iter().filter(|r| !r.correct).count()
        );
        for b in &bins {
            prop_assert!(b.total > 0);
            prop_assert_eq!(b.hi - b.lo + 1, width);
            let inside = rs
                .iter()
                .filter(|r| r.technique == b.technique && (b.lo..=b.hi).contains(&r.token_estimate))
                .count();
            prop_assert_eq!(inside, b.total);
        }
    }

    #[test]
    fn confidence_accuracy_is_diagonal_share(m in prop::array::uniform4(0u64..2000)) {
        let r = ConfidenceReport::from_matrix([[m[0], m[1]], [m[2], m[3]]], 0.8, 0);
        let total = m.iter().sum::<u64>();
        match r.accuracy {
            None => prop_assert_eq!(total, 0),
            Some(a) => prop_assert!((a - (m[0] + m[3]) as f64 * 100.0 / total as f64).abs() < 1e-9),
        }
    }
}

#[test]
fn gold_answers_match_themselves() {
    let (_, instances) = common::dataset(3, 9);
    for t in &instances {
        assert!(score(&Answer::Parsed(t.gold.clone()), &t.gold, t.question_type), "{}", t.id);
    }
}

#[test]
fn all_parse_errors_score_zero() {
    let (_, instances) = common::dataset(1, 9);
    let rows: Vec<ScoredRow> = instances
        .iter()
        .map(|t| {
            let answer = Answer::Unparsed("I cannot tell".into());
            let correct = score(&answer, &t.gold, t.question_type);
            ScoredRow { correct, parse_error: true, answer, ..row(0, t.question_type, Technique::Cot, false, 1.0, 10) }
        })
        .collect();
    assert_eq!(aggregate(&rows).techniques[0].accuracy, 0.0);
}

#[test]
fn one_wrong_in_four_is_a_quarter() {
    let rs: Vec<ScoredRow> = (0..4)
        .map(|i| row(i, QuestionType::Timeline, Technique::Direct, i != 2, 1.0, 1500 + i))
        .collect();
    let bins = token_bins(&rs, 1000);
    assert_eq!(bins.len(), 1);
    assert_eq!((bins[0].lo, bins[0].hi, bins[0].rate), (1000, 1999, 25.0));
    assert_eq!(aggregate_with(&rs, 500).token_bins[0].rate, 25.0);
}

#[test]
fn confusion_table_accuracy() {
    let r = ConfidenceReport::from_matrix([[940, 60], [0, 1000]], 0.8, 0);
    assert_eq!(r.accuracy, Some(97.0));
    assert!(r.render_text().contains("Accuracy: 97.0%"));

    let mut items = Vec::new();
    items.extend((0..940).map(|_| (TaskLabel::Knowledge, Some(0.2))));
    items.extend((0..60).map(|_| (TaskLabel::Knowledge, Some(0.8))));
    items.extend((0..1000).map(|_| (TaskLabel::Temporal, Some(0.95))));
    assert_eq!(confidence_report(&items, 0.8), r);
}

#[test]
fn threshold_boundary() {
    let items = [
        (TaskLabel::Temporal, Some(0.8)),
        (TaskLabel::Knowledge, Some(0.799_999_9)),
        (TaskLabel::Temporal, Some(0.799_999_9)),
    ];
    let r = confidence_report(&items, 0.8);
    assert_eq!(r.matrix, [[1, 0], [1, 1]]);
}

#[test]
fn no_function_runs_render_na() {
    let rs = vec![row(0, QuestionType::Timeline, Technique::Cot, true, 1.0, 10)];
    let r = aggregate(&rs);
    assert!(r.function_usage.is_none());
    assert!(r.render_text().contains("n/a"));
    assert!(r.render_csv().contains("n/a"));
}

#[test]
fn text_report_lists_every_technique_and_type() {
    let rs: Vec<ScoredRow> = Technique::ALL
        .iter()
        .enumerate()
        .map(|(i, t)| row(i, QuestionType::ALL[i], *t, true, 1.0, 10))
        .collect();
    let text = aggregate(&rs).render_text();
    for t in Technique::ALL {
        assert!(text.contains(t.label()), "{}", t.label());
    }
    for q in &QuestionType::ALL[..8] {
        assert!(text.contains(q.name()));
    }
    assert!(text.contains("Total"));
}
