use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use ccsp::equivalence::campaign::{check_terms, random_terms, KindSelection};
use ccsp::equivalence::Enumerator;
use ccsp::operational::DEFAULT_STATE_CAP;
use ccsp::parallel::Strategy;
use ccsp::{Event, Term, TermKind};

fn alphabet() -> Vec<Event> {
    vec![Event::new("a").unwrap(), Event::new("b").unwrap()]
}

fn compare(c: &mut Criterion, group: &str, terms: &[Term]) {
    let mut g = c.benchmark_group(group);
    g.throughput(Throughput::Elements(terms.len() as u64));
    g.sample_size(10);
    for strategy in Strategy::available() {
        g.bench_with_input(BenchmarkId::from_parameter(strategy.name()), &strategy, |b, s| {
            b.iter(|| check_terms(black_box(terms), *s, DEFAULT_STATE_CAP))
        });
    }
    g.finish();
}

fn random(c: &mut Criterion) {
    let terms = random_terms(42, 2000, 5, &alphabet(), KindSelection::Both).unwrap();
    compare(c, "random_depth5", &terms);
}

fn enumerated(c: &mut Criterion) {
    let terms = Enumerator::new(&alphabet()).up_to(2, TermKind::Standard);
    compare(c, "enumerated_std_ops2", &terms);
    let terms = Enumerator::new(&alphabet()).with_pair_operand_ops(1).up_to(1, TermKind::Compensable);
    compare(c, "enumerated_comp_ops1", &terms);
}

criterion_group!(benches, random, enumerated);
criterion_main!(benches);
