use criterion::{criterion_group, criterion_main, Criterion};
use qcx_core::codes::{bacon_shor_3x3, extended_steane15, rm15};
use qcx_core::compat_graph::build_graph;
use qcx_core::partial_group::{partial_closure, si_avn};
use qcx_core::pauli::PauliOperator;
use qcx_core::scenario::{
    lp_noncontextuality, model_from_stabilizer_state, possibilistic_of, scenario_from_observables,
    state_dependent_avn, StabilizerState,
};
use qcx_core::switching::protocol_from_codes;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn square_set() -> Vec<PauliOperator> {
    ["X0", "X1", "Z0", "Z1"]
        .iter()
        .map(|s| PauliOperator::parse(s, 2).unwrap())
        .collect()
}

fn bench_closure(c: &mut Criterion) {
    let square = square_set();
    c.bench_function("partial closure of {X1,X2,Z1,Z2}", |b| {
        b.iter(|| partial_closure(&square, 32).unwrap())
    });

    let pauli3: Vec<PauliOperator> = ["XII", "IXI", "IIX", "ZII", "IZI", "IIZ"]
        .iter()
        .map(|s| PauliOperator::parse(s, 3).unwrap())
        .collect();
    c.bench_function("partial closure of the 3-qubit single-site set", |b| {
        b.iter(|| partial_closure(&pauli3, 128).unwrap())
    });
}

fn bench_cliques_and_theory(c: &mut Criterion) {
    let closure = partial_closure(&square_set(), 32).unwrap();
    c.bench_function("maximal cliques of the 20-element closure", |b| {
        b.iter(|| build_graph(closure.elements()).maximal_cliques())
    });
    c.bench_function("si-avn of the 20-element closure", |b| {
        b.iter(|| si_avn(&closure))
    });
}

fn bench_codes(c: &mut Criterion) {
    c.bench_function("derive Bacon-Shor 3x3", |b| b.iter(bacon_shor_3x3));
    c.bench_function("Steane-RM15 switching protocol", |b| {
        let ext = extended_steane15();
        let rm = rm15();
        b.iter(|| protocol_from_codes(&ext, &rm).unwrap())
    });
}

fn bench_deciders(c: &mut Criterion) {
    let closure = partial_closure(&square_set(), 32).unwrap();
    let scenario = scenario_from_observables(closure.elements()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let state = StabilizerState::random(2, 48, &mut rng);
    let model = model_from_stabilizer_state(&scenario, &state).unwrap();

    c.bench_function("stabilizer model on the closure scenario", |b| {
        b.iter(|| model_from_stabilizer_state(&scenario, &state).unwrap())
    });
    c.bench_function("state-dependent AvN on the closure model", |b| {
        let table = possibilistic_of(&model);
        b.iter(|| state_dependent_avn(&table))
    });
    c.bench_function("exact LP verdict on the closure model", |b| {
        b.iter(|| lp_noncontextuality(&model, 32).unwrap())
    });
}

criterion_group!(
    benches,
    bench_closure,
    bench_cliques_and_theory,
    bench_codes,
    bench_deciders
);
criterion_main!(benches);
