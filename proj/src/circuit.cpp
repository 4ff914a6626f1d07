#include "aprep/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>

#include "aprep/error.hpp"

namespace aprep {

namespace {

const char *gate_name(Gate g) {
    switch (g) {
        case Gate::kH: return "h";
        case Gate::kX: return "x";
        case Gate::kZ: return "z";
        case Gate::kS: return "s";
        case Gate::kCX: return "cx";
    }
    return "?";
}

std::optional<Gate> gate_from_name(std::string_view s) {
    if (s == "h") return Gate::kH;
    if (s == "x") return Gate::kX;
    if (s == "z") return Gate::kZ;
    if (s == "s") return Gate::kS;
    if (s == "cx") return Gate::kCX;
    return std::nullopt;
}

bool is_keyword(std::string_view s) {
    return s == "qreg" || s == "creg" || s == "measure" || s == "reset" || s == "if" ||
           s == "barrier";
}

std::string reg_name(const std::vector<Register> &regs, uint32_t index) {
    for (const auto &r : regs) {
        if (index >= r.offset && index < r.offset + r.width) {
            return r.name + "[" + std::to_string(index - r.offset) + "]";
        }
    }
    throw InvalidArgument("index " + std::to_string(index) + " not in any register");
}

}  // namespace

void AdaptiveCircuit::check_name(const std::string &name) const {
    if (name.empty()) {
        throw InvalidArgument("empty register name");
    }
    if (is_keyword(name)) {
        throw InvalidArgument("register name '" + name + "' is reserved");
    }
    for (const auto *regs : {&qregs_, &cregs_}) {
        for (const auto &r : *regs) {
            if (r.name == name) {
                throw InvalidArgument("duplicate declaration of '" + name + "'");
            }
        }
    }
}

uint32_t AdaptiveCircuit::add_qreg(const std::string &name, uint32_t width) {
    check_name(name);
    if (width == 0) {
        throw InvalidArgument("register '" + name + "' has zero width");
    }
    qregs_.push_back({name, num_qubits_, width});
    num_qubits_ += width;
    return qregs_.back().offset;
}

uint32_t AdaptiveCircuit::add_creg(const std::string &name, uint32_t width) {
    check_name(name);
    if (width == 0) {
        throw InvalidArgument("register '" + name + "' has zero width");
    }
    cregs_.push_back({name, num_cbits_, width});
    num_cbits_ += width;
    return cregs_.back().offset;
}

void AdaptiveCircuit::check_gate(const GateOp &g) const {
    for (size_t k = 0; k < g.arity(); ++k) {
        if (g.qubits[k] >= num_qubits_) {
            throw InvalidArgument("qubit " + std::to_string(g.qubits[k]) + " out of range");
        }
    }
    if (g.arity() == 2 && g.qubits[0] == g.qubits[1]) {
        throw InvalidArgument("gate has duplicate targets");
    }
    if (g.arity() == 1 && g.qubits[1] != 0) {
        throw InvalidArgument("single-qubit gate with a second operand");
    }
}

void AdaptiveCircuit::push(Instruction inst) {
    auto check_q = [&](uint32_t q) {
        if (q >= num_qubits_) throw InvalidArgument("qubit " + std::to_string(q) + " out of range");
    };
    auto check_c = [&](uint32_t c) {
        if (c >= num_cbits_) throw InvalidArgument("classical bit " + std::to_string(c) + " out of range");
    };
    std::visit(
        [&](const auto &op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, GateOp>) {
                check_gate(op);
            } else if constexpr (std::is_same_v<T, MeasureOp>) {
                check_q(op.qubit);
                check_c(op.cbit);
            } else if constexpr (std::is_same_v<T, ResetOp>) {
                check_q(op.qubit);
            } else if constexpr (std::is_same_v<T, CondGateOp>) {
                check_c(op.cbit);
                if (op.value > 1) throw InvalidArgument("condition value must be 0 or 1");
                check_gate(op.gate);
            } else if constexpr (std::is_same_v<T, AssignOp>) {
                check_c(op.cbit);
                if (op.terms.empty()) throw InvalidArgument("assignment needs at least one term");
                for (const auto &t : op.terms) {
                    if (t.is_constant) {
                        if (t.value > 1) throw InvalidArgument("classical constant must be 0 or 1");
                    } else {
                        check_c(t.value);
                    }
                }
            }
        },
        inst);
    instructions_.push_back(std::move(inst));
}

std::string AdaptiveCircuit::qubit_name(uint32_t q) const { return reg_name(qregs_, q); }
std::string AdaptiveCircuit::cbit_name(uint32_t c) const { return reg_name(cregs_, c); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { kIdent, kInt, kSymbol, kEnd };

struct Token {
    Tok kind = Tok::kEnd;
    std::string text;
    size_t line = 1;
    size_t column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_space_and_comments();
        Token t;
        t.line = line_;
        t.column = col_;
        if (pos_ >= src_.size()) {
            return t;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Tok::kIdent;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                t.text.push_back(advance());
            }
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            t.kind = Tok::kInt;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                t.text.push_back(advance());
            }
        } else {
            t.kind = Tok::kSymbol;
            t.text.push_back(advance());
            if ((c == '-' || c == '=') && pos_ < src_.size()) {
                char d = src_[pos_];
                if ((c == '-' && d == '>') || (c == '=' && d == '=')) {
                    t.text.push_back(advance());
                }
            }
        }
        return t;
    }

private:
    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    advance();
                }
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    size_t pos_ = 0;
    size_t line_ = 1;
    size_t col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) { cur_ = lex_.next(); }

    AdaptiveCircuit run() {
        while (cur_.kind != Tok::kEnd) {
            statement();
        }
        return std::move(circuit_);
    }

private:
    [[noreturn]] void fail(const Token &at, const std::string &msg) { throw ParseError(at.line, at.column, msg); }

    static std::string describe(const Token &t) {
        return t.kind == Tok::kEnd ? std::string("end of input") : "'" + t.text + "'";
    }

    Token take() {
        Token t = cur_;
        cur_ = lex_.next();
        return t;
    }

    void expect(std::string_view sym) {
        if (cur_.kind != Tok::kSymbol || cur_.text != sym) {
            fail(cur_, "expected '" + std::string(sym) + "', found " + describe(cur_));
        }
        take();
    }

    Token expect_ident() {
        if (cur_.kind != Tok::kIdent) {
            fail(cur_, "expected identifier, found " + describe(cur_));
        }
        return take();
    }

    uint32_t expect_int() {
        if (cur_.kind != Tok::kInt) {
            fail(cur_, "expected integer, found " + describe(cur_));
        }
        Token t = take();
        uint32_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc()) {
            fail(t, "integer out of range");
        }
        return v;
    }

    bool at_symbol(std::string_view s) const { return cur_.kind == Tok::kSymbol && cur_.text == s; }

    const Register *find(const std::vector<Register> &regs, const std::string &name) const {
        for (const auto &r : regs) {
            if (r.name == name) return &r;
        }
        return nullptr;
    }

    uint32_t operand(const Token &name, const std::vector<Register> &regs, const std::vector<Register> &other,
                     const char *kind) {
        const Register *r = find(regs, name.text);
        if (!r) {
            if (find(other, name.text)) {
                fail(name, "'" + name.text + "' is not a " + kind + " register");
            }
            fail(name, "undeclared register '" + name.text + "'");
        }
        expect("[");
        Token idx_tok = cur_;
        uint32_t idx = expect_int();
        expect("]");
        if (idx >= r->width) {
            fail(idx_tok, "index " + std::to_string(idx) + " out of range for " + r->name + "[" +
                              std::to_string(r->width) + "]");
        }
        return r->offset + idx;
    }

    uint32_t qarg() {
        Token name = expect_ident();
        return operand(name, circuit_.qregs(), circuit_.cregs(), "quantum");
    }

    uint32_t carg_named(const Token &name) { return operand(name, circuit_.cregs(), circuit_.qregs(), "classical"); }
    uint32_t carg() { return carg_named(expect_ident()); }

    GateOp gate_after_name(const Token &name, Gate g) {
        GateOp op{g, {0, 0}};
        op.qubits[0] = qarg();
        if (g == Gate::kCX) {
            expect(",");
            Token second = cur_;
            op.qubits[1] = qarg();
            if (op.qubits[0] == op.qubits[1]) {
                fail(second, "gate '" + name.text + "' has duplicate targets");
            }
        }
        return op;
    }

    void push(const Token &at, Instruction inst) {
        try {
            circuit_.push(std::move(inst));
        } catch (const InvalidArgument &e) {
            fail(at, e.what());
        }
    }

    void statement() {
        Token head = cur_;
        if (head.kind != Tok::kIdent) {
            fail(head, "expected statement, found " + describe(head));
        }
        take();
        const std::string &w = head.text;
        if (w == "qreg" || w == "creg") {
            Token name = expect_ident();
            expect("[");
            uint32_t width = expect_int();
            expect("]");
            expect(";");
            try {
                if (w == "qreg") {
                    circuit_.add_qreg(name.text, width);
                } else {
                    circuit_.add_creg(name.text, width);
                }
            } catch (const InvalidArgument &e) {
                fail(name, e.what());
            }
        } else if (auto g = gate_from_name(w); g && !at_symbol("[")) {
            // A gate name followed by '[' is a classical register that shares the name (s[0] = ...).
            GateOp op = gate_after_name(head, *g);
            expect(";");
            push(head, op);
        } else if (w == "measure") {
            uint32_t q = qarg();
            expect("->");
            uint32_t c = carg();
            expect(";");
            push(head, MeasureOp{q, c});
        } else if (w == "reset") {
            uint32_t q = qarg();
            expect(";");
            push(head, ResetOp{q});
        } else if (w == "barrier") {
            expect(";");
            push(head, BarrierOp{});
        } else if (w == "if") {
            expect("(");
            uint32_t c = carg();
            expect("==");
            Token vt = cur_;
            uint32_t v = expect_int();
            if (v > 1) {
                fail(vt, "condition value must be 0 or 1");
            }
            expect(")");
            Token gname = expect_ident();
            auto g = gate_from_name(gname.text);
            if (!g) {
                fail(gname, "expected gate after condition, found '" + gname.text + "'");
            }
            GateOp op = gate_after_name(gname, *g);
            expect(";");
            push(head, CondGateOp{c, static_cast<uint8_t>(v), op});
        } else {
            if (!at_symbol("[")) {
                fail(head, "unknown gate or statement '" + w + "'");
            }
            uint32_t target = carg_named(head);
            expect("=");
            AssignOp op{target, {}};
            while (true) {
                if (cur_.kind == Tok::kInt) {
                    Token ct = cur_;
                    uint32_t v = expect_int();
                    if (v > 1) {
                        fail(ct, "classical constant must be 0 or 1");
                    }
                    op.terms.push_back({true, v});
                } else {
                    op.terms.push_back({false, carg()});
                }
                if (!at_symbol("^")) {
                    break;
                }
                take();
            }
            expect(";");
            push(head, std::move(op));
        }
    }

    Lexer lex_;
    Token cur_;
    AdaptiveCircuit circuit_;
};

}  // namespace

AdaptiveCircuit parse_circuit(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string gate_text(const AdaptiveCircuit &c, const GateOp &g) {
    std::string s = gate_name(g.gate);
    s += " " + c.qubit_name(g.qubits[0]);
    if (g.arity() == 2) {
        s += "," + c.qubit_name(g.qubits[1]);
    }
    return s;
}

}  // namespace

std::string serialize(const AdaptiveCircuit &c) {
    std::ostringstream out;
    for (const auto &r : c.qregs()) out << "qreg " << r.name << "[" << r.width << "];\n";
    for (const auto &r : c.cregs()) out << "creg " << r.name << "[" << r.width << "];\n";
    for (const auto &inst : c.instructions()) {
        std::visit(
            [&](const auto &op) {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, GateOp>) {
                    out << gate_text(c, op) << ";\n";
                } else if constexpr (std::is_same_v<T, MeasureOp>) {
                    out << "measure " << c.qubit_name(op.qubit) << " -> " << c.cbit_name(op.cbit) << ";\n";
                } else if constexpr (std::is_same_v<T, ResetOp>) {
                    out << "reset " << c.qubit_name(op.qubit) << ";\n";
                } else if constexpr (std::is_same_v<T, CondGateOp>) {
                    out << "if (" << c.cbit_name(op.cbit) << "==" << int(op.value) << ") " << gate_text(c, op.gate)
                        << ";\n";
                } else if constexpr (std::is_same_v<T, AssignOp>) {
                    out << c.cbit_name(op.cbit) << " =";
                    for (size_t k = 0; k < op.terms.size(); ++k) {
                        out << (k ? " ^ " : " ");
                        const auto &t = op.terms[k];
                        if (t.is_constant) {
                            out << t.value;
                        } else {
                            out << c.cbit_name(t.value);
                        }
                    }
                    out << ";\n";
                } else {
                    out << "barrier;\n";
                }
            },
            inst);
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Analysis

size_t depth(const AdaptiveCircuit &c) {
    std::vector<size_t> level(c.num_qubits(), 0);
    size_t best = 0;
    auto visit_gate = [&](const GateOp &g) {
        if (g.arity() != 2) return;
        size_t l = std::max(level[g.qubits[0]], level[g.qubits[1]]) + 1;
        level[g.qubits[0]] = level[g.qubits[1]] = l;
        best = std::max(best, l);
    };
    for (const auto &inst : c.instructions()) {
        if (auto *g = std::get_if<GateOp>(&inst)) {
            visit_gate(*g);
        } else if (auto *cg = std::get_if<CondGateOp>(&inst)) {
            visit_gate(cg->gate);
        }
    }
    return best;
}

std::vector<uint32_t> Connectivity::neighbours(uint32_t q) const {
    std::vector<uint32_t> out;
    for (const auto &[a, b] : edges_) {
        if (a == q) out.push_back(b);
        if (b == q) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<size_t> validate_connectivity(const AdaptiveCircuit &c, const Connectivity &edges) {
    std::vector<size_t> bad;
    for (size_t i = 0; i < c.instructions().size(); ++i) {
        const GateOp *g = nullptr;
        if (auto *p = std::get_if<GateOp>(&c.instructions()[i])) g = p;
        if (auto *p = std::get_if<CondGateOp>(&c.instructions()[i])) g = &p->gate;
        if (g && g->arity() == 2 && !edges.contains(g->qubits[0], g->qubits[1])) {
            bad.push_back(i);
        }
    }
    return bad;
}

// ---------------------------------------------------------------------------
// Execution

namespace {

void apply_gate(StabilizerTableau &t, const GateOp &g, NoiseSampler *noise) {
    t.apply(g.gate, std::span<const uint32_t>(g.qubits.data(), g.arity()));
    if (noise) {
        if (g.arity() == 2) {
            noise->after_two(t, g.qubits[0], g.qubits[1]);
        } else {
            noise->after_single(t, g.qubits[0]);
        }
    }
}

}  // namespace

ExecutionResult execute(const AdaptiveCircuit &c, StabilizerTableau &state, ShotRng &rng, NoiseSampler *noise) {
    if (state.num_qubits() != c.num_qubits()) {
        throw InvalidArgument("state has " + std::to_string(state.num_qubits()) + " qubits, circuit needs " +
                              std::to_string(c.num_qubits()));
    }
    ExecutionResult res;
    res.cbits.assign(c.num_cbits(), 0);
    const auto &prog = c.instructions();
    for (size_t i = 0; i < prog.size(); ++i) {
        std::visit(
            [&](const auto &op) {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, GateOp>) {
                    apply_gate(state, op, noise);
                } else if constexpr (std::is_same_v<T, MeasureOp>) {
                    auto m = state.measure_qubit(op.qubit, Basis::kZ, rng);
                    bool bit = m.bit();
                    if (noise && noise->flip_measurement()) {
                        bit = !bit;
                    }
                    res.cbits[op.cbit] = bit;
                    res.measurements.push_back({i, op.qubit, op.cbit, m, bit});
                } else if constexpr (std::is_same_v<T, ResetOp>) {
                    state.reset(op.qubit, rng);
                    if (noise) {
                        noise->after_reset(state, op.qubit);
                    }
                } else if constexpr (std::is_same_v<T, CondGateOp>) {
                    if (res.cbits[op.cbit] == op.value) {
                        apply_gate(state, op.gate, noise);
                        res.fired_conditionals.push_back(i);
                    }
                } else if constexpr (std::is_same_v<T, AssignOp>) {
                    uint8_t v = 0;
                    for (const auto &t : op.terms) {
                        v ^= t.is_constant ? static_cast<uint8_t>(t.value) : res.cbits[t.value];
                    }
                    res.cbits[op.cbit] = v;
                }
            },
            prog[i]);
    }
    return res;
}

}  // namespace aprep
