// Every example must run to completion.

#[allow(dead_code)]
mod atom_measurement {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/atom_measurement.rs"));
}

#[test]
fn atom_measurement_runs() {
    atom_measurement::run_example().expect("atom_measurement example should run");
}

#[allow(dead_code)]
mod coherent_qubit_basis {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/coherent_qubit_basis.rs"));
}

#[test]
fn coherent_qubit_basis_runs() {
    coherent_qubit_basis::run_example().expect("coherent_qubit_basis example should run");
}

#[allow(dead_code)]
mod coherent_states {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/coherent_states.rs"));
}

#[test]
fn coherent_states_runs() {
    coherent_states::run_example().expect("coherent_states example should run");
}

#[allow(dead_code)]
mod dispersive_gate {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/dispersive_gate.rs"));
}

#[test]
fn dispersive_gate_runs() {
    dispersive_gate::run_example().expect("dispersive_gate example should run");
}

#[allow(dead_code)]
mod entanglement_swap {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/entanglement_swap.rs"));
}

#[test]
fn entanglement_swap_runs() {
    entanglement_swap::run_example().expect("entanglement_swap example should run");
}

#[allow(dead_code)]
mod entanglement_transfer {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/entanglement_transfer.rs"));
}

#[test]
fn entanglement_transfer_runs() {
    entanglement_transfer::run_example().expect("entanglement_transfer example should run");
}

#[allow(dead_code)]
mod multipair {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/multipair.rs"));
}

#[test]
fn multipair_runs() {
    multipair::run_example().expect("multipair example should run");
}

#[allow(dead_code)]
mod parameter_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/parameter_sweep.rs"));
}

#[test]
fn parameter_sweep_runs() {
    parameter_sweep::run_example().expect("parameter_sweep example should run");
}

#[allow(dead_code)]
mod phase_discriminator {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/phase_discriminator.rs"));
}

#[test]
fn phase_discriminator_runs() {
    phase_discriminator::run_example().expect("phase_discriminator example should run");
}

#[allow(dead_code)]
mod qubit_transfer {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/qubit_transfer.rs"));
}

#[test]
fn qubit_transfer_runs() {
    qubit_transfer::run_example().expect("qubit_transfer example should run");
}

#[allow(dead_code)]
mod reciprocation {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/reciprocation.rs"));
}

#[test]
fn reciprocation_runs() {
    reciprocation::run_example().expect("reciprocation example should run");
}
