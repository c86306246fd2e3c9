#include "varqlab/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace varqlab {

namespace {

std::vector<std::string> content_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.empty() || line[0] == '#') continue;
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

Observable parse_observable(const std::string& text, int n_qubits) {
    struct RawTerm {
        double coefficient;
        std::string spec;
    };
    std::vector<RawTerm> raw;
    int max_qubit = -1;
    for (const auto& line : content_lines(text)) {
        std::istringstream fields(line);
        double coefficient = 0.0;
        std::string spec;
        if (!(fields >> coefficient >> spec)) {
            throw std::invalid_argument("bad observable line '" + line +
                                        "', expected '<coeff> <term>'");
        }
        std::string extra;
        if (fields >> extra) {
            throw std::invalid_argument("trailing content on observable line '" + line + "'");
        }
        raw.push_back({coefficient, spec});
        // Peek at qubit indices to size the observable before building terms.
        const PauliString probe = PauliString::parse(spec, 0);
        if (!probe.is_identity()) max_qubit = std::max(max_qubit, probe.support().back());
    }
    if (raw.empty()) throw std::invalid_argument("observable text contains no terms");
    if (n_qubits == 0) n_qubits = std::max(1, max_qubit + 1);
    if (max_qubit >= n_qubits) {
        throw std::invalid_argument("observable mentions qubit " + std::to_string(max_qubit) +
                                    " but width is " + std::to_string(n_qubits));
    }
    Observable obs(n_qubits);
    for (const auto& term : raw) {
        obs.add_term(term.coefficient, PauliString::parse(term.spec, n_qubits));
    }
    return obs;
}

std::string format_observable(const Observable& obs) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& term : obs.terms()) {
        out << term.coefficient << " " << term.string.to_string() << "\n";
    }
    if (obs.constant() != 0.0 || obs.terms().empty()) {
        out << obs.constant() << " I\n";
    }
    return out.str();
}

Observable load_observable(const std::string& path, int n_qubits) {
    return parse_observable(read_file(path), n_qubits);
}

std::string format_circuit(const Circuit& circuit) {
    std::ostringstream out;
    out << "qubits " << circuit.n_qubits << "\n";
    for (const auto& gate : circuit.gates) out << gate.to_string() << "\n";
    return out.str();
}

Circuit parse_circuit(const std::string& text) {
    const auto lines = content_lines(text);
    if (lines.empty() || lines[0].rfind("qubits ", 0) != 0) {
        throw std::invalid_argument("circuit text must start with 'qubits <n>'");
    }
    const int n = std::stoi(lines[0].substr(7));
    Circuit circuit(n);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        std::string name;
        double angle = 0.0;
        std::size_t pos = 0;
        while (pos < line.size() && (std::isalpha(static_cast<unsigned char>(line[pos])) ||
                                     std::isdigit(static_cast<unsigned char>(line[pos])))) {
            name += line[pos];
            ++pos;
        }
        bool has_angle = false;
        if (pos < line.size() && line[pos] == '(') {
            const auto close = line.find(')', pos);
            if (close == std::string::npos) {
                throw std::invalid_argument("unterminated angle in circuit line '" + line + "'");
            }
            angle = std::stod(line.substr(pos + 1, close - pos - 1));
            has_angle = true;
            pos = close + 1;
        }
        std::istringstream rest(line.substr(pos));
        std::vector<int> qubits;
        std::string token;
        while (rest >> token) {
            if (token.size() < 2 || token[0] != 'q') {
                throw std::invalid_argument("bad qubit token '" + token + "' in '" + line + "'");
            }
            qubits.push_back(std::stoi(token.substr(1)));
        }
        GateKind kind;
        if (name == "H") kind = GateKind::H;
        else if (name == "X") kind = GateKind::X;
        else if (name == "Y") kind = GateKind::Y;
        else if (name == "Z") kind = GateKind::Z;
        else if (name == "RX") kind = GateKind::RX;
        else if (name == "RY") kind = GateKind::RY;
        else if (name == "RZ") kind = GateKind::RZ;
        else if (name == "PHASE") kind = GateKind::Phase;
        else if (name == "CNOT") kind = GateKind::CNOT;
        else if (name == "CZ") kind = GateKind::CZ;
        else if (name == "RZZ") kind = GateKind::RZZ;
        else throw std::invalid_argument("unknown gate '" + name + "' in '" + line + "'");
        if (gate_kind_has_angle(kind) != has_angle) {
            throw std::invalid_argument("angle mismatch for gate '" + name + "' in '" + line + "'");
        }
        const int expected = gate_kind_is_two_qubit(kind) ? 2 : 1;
        if (static_cast<int>(qubits.size()) != expected) {
            throw std::invalid_argument("gate '" + name + "' expects " + std::to_string(expected) +
                                        " qubit(s) in '" + line + "'");
        }
        Gate gate{kind, {qubits[0], expected == 2 ? qubits[1] : -1}, angle};
        circuit.append(gate);
    }
    return circuit;
}

Circuit load_circuit(const std::string& path) { return parse_circuit(read_file(path)); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << contents;
}

}  // namespace varqlab
