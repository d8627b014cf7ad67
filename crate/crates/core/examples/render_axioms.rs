//! Regenerate `corpus/axioms.izf` from the axiom table.
fn main() {
    print!("{}", izf_core::corpus::render_axioms_file());
}
