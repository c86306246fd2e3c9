#pragma once

#include <string>

#include "varqlab/pauli.hpp"
#include "varqlab/simulator.hpp"

namespace varqlab {

struct WeightedGraph;  // defined in qaoa.hpp

/// Textual observable format: one term per line,
///   <coeff> <axis><qubit>[*<axis><qubit>...]
/// with the constant written as "<coeff> I". Blank lines and '#' comments are
/// skipped. parse(format(obs)) reproduces obs exactly.
Observable parse_observable(const std::string& text, int n_qubits = 0);
std::string format_observable(const Observable& obs);
Observable load_observable(const std::string& path, int n_qubits = 0);

/// Circuit debug dump: one gate per line, e.g. "RY(1.5708) q0", "CNOT q0 q1".
/// The first line is "qubits <n>".
std::string format_circuit(const Circuit& circuit);
Circuit parse_circuit(const std::string& text);
Circuit load_circuit(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace varqlab
