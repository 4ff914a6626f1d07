#include "aprep/bound.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "aprep/error.hpp"
#include "aprep/fidelity.hpp"

namespace aprep {

std::vector<uint32_t> past_cone(const CodeLayout &layout, std::span<const uint32_t> support, unsigned depth) {
    const size_t n = layout.num_qubits();
    std::vector<int> dist(n, -1);
    std::deque<uint32_t> queue;
    for (uint32_t q : support) {
        if (q >= n) throw InvalidArgument("support qubit out of range");
        if (dist[q] < 0) {
            dist[q] = 0;
            queue.push_back(q);
        }
    }
    while (!queue.empty()) {
        uint32_t q = queue.front();
        queue.pop_front();
        if (static_cast<unsigned>(dist[q]) == depth) continue;
        for (uint32_t nb : layout.connectivity.neighbours(q)) {
            if (dist[nb] < 0) {
                dist[nb] = dist[q] + 1;
                queue.push_back(nb);
            }
        }
    }
    std::vector<uint32_t> out;
    for (uint32_t q = 0; q < n; ++q)
        if (dist[q] >= 0) out.push_back(q);
    return out;
}

ConeReport cones_disjoint(const CodeLayout &layout, unsigned depth) {
    ConeReport r;
    r.depth = depth;
    r.left = past_cone(layout, layout.logical_z_left, depth);
    r.right = past_cone(layout, layout.logical_z_right, depth);
    std::vector<uint32_t> common;
    std::set_intersection(r.left.begin(), r.left.end(), r.right.begin(), r.right.end(), std::back_inserter(common));
    r.disjoint = common.empty();
    return r;
}

nlohmann::json cone_report_to_json(const ConeReport &r, const CodeLayout &layout) {
    return {{"layout", layout.id()},
            {"depth", r.depth},
            {"disjoint", r.disjoint},
            {"cone_left", r.left},
            {"cone_right", r.right}};
}

static void check_distribution(const Distribution4 &p) {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= -1e-12) || !std::isfinite(v)) throw InvalidArgument("probability out of range");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InvalidArgument("probabilities do not sum to 1");
}

double bhattacharyya_bound(const Distribution4 &p, const Distribution4 &q) {
    check_distribution(p);
    check_distribution(q);
    double s = 0.0;
    for (size_t j = 0; j < 4; ++j) s += std::sqrt(std::max(0.0, p[j]) * std::max(0.0, q[j]));
    return s * s;
}

Distribution4 product_form(double a, double b) {
    if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) throw InvalidArgument("product_form needs a, b in [0, 1]");
    return {a * b, a * (1 - b), (1 - a) * b, (1 - a) * (1 - b)};
}

double product_form_bound_closed(double a, double b) {
    double s = std::sqrt(a * b) + std::sqrt((1 - a) * (1 - b));
    return 0.5 * s * s;
}

GridMaximum max_product_form_bound(double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 0.01)) throw InvalidArgument("grid step must lie in (0, 0.01]");
    const long steps = std::lround(std::ceil(1.0 / grid_step - 1e-9));
    GridMaximum best;
    best.value = -1.0;
    for (long i = 0; i <= steps; ++i) {
        double a = std::min(1.0, static_cast<double>(i) * grid_step);
        for (long j = 0; j <= steps; ++j) {
            double b = std::min(1.0, static_cast<double>(j) * grid_step);
            double v = bhattacharyya_bound(kIdealPovm, product_form(a, b));
            if (v > best.value) best = {v, a, b};
        }
    }
    return best;
}

Distribution4 povm_probabilities(const StabilizerTableau &t, const CodeLayout &layout) {
    auto zl = logical_z_left_operator(layout);
    auto zr = logical_z_right_operator(layout);
    auto zz = zl;
    zz *= zr;
    const double el = t.expectation(zl), er = t.expectation(zr), ezz = t.expectation(zz);
    return {(1 + el + er + ezz) / 4, (1 + el - er - ezz) / 4, (1 - el + er - ezz) / 4, (1 - el - er + ezz) / 4};
}

double connected_correlation(const StabilizerTableau &t, const CodeLayout &layout) {
    auto zl = logical_z_left_operator(layout);
    auto zr = logical_z_right_operator(layout);
    auto zz = zl;
    zz *= zr;
    return t.expectation(zz) - static_cast<double>(t.expectation(zl)) * t.expectation(zr);
}

// Two-qubit Clifford group -------------------------------------------------

namespace {

std::string tableau_key(const StabilizerTableau &t) {
    return t.destabilizer(0).str() + t.stabilizer(0).str() + t.destabilizer(1).str() + t.stabilizer(1).str();
}

}  // namespace

TwoQubitCliffords::TwoQubitCliffords() {
    const std::vector<Op> generators = {
        {Gate::kH, 0, 0},  {Gate::kH, 1, 0}, {Gate::kS, 0, 0}, {Gate::kS, 1, 0}, {Gate::kCX, 0, 1},
        {Gate::kCX, 1, 0}, {Gate::kX, 0, 0}, {Gate::kZ, 0, 0}, {Gate::kX, 1, 0}, {Gate::kZ, 1, 0},
    };
    auto &seen = index_;
    std::deque<std::pair<StabilizerTableau, size_t>> frontier;
    StabilizerTableau id(2);
    seen.emplace(tableau_key(id), 0);
    words_.push_back({});
    frontier.emplace_back(id, 0);
    while (!frontier.empty()) {
        auto [t, w] = frontier.front();
        frontier.pop_front();
        for (const Op &g : generators) {
            StabilizerTableau next = t;
            if (g.gate == Gate::kCX) {
                next.cx(g.q0, g.q1);
            } else {
                uint32_t q = g.q0;
                next.apply(g.gate, std::span<const uint32_t>(&q, 1));
            }
            auto key = tableau_key(next);
            if (seen.count(key)) continue;
            seen.emplace(key, words_.size());
            auto word = words_[w];
            word.push_back(g);
            words_.push_back(std::move(word));
            frontier.emplace_back(std::move(next), words_.size() - 1);
        }
    }
    if (words_.size() != 11520) throw InternalError("two-qubit Clifford enumeration produced " + std::to_string(words_.size()));

    StabilizerTableau t(2);
    linear_.push_back(static_cast<uint16_t>(find(t)));
    t.cx(0, 1);
    linear_.push_back(static_cast<uint16_t>(find(t)));
    t.cx(1, 0);
    linear_.push_back(static_cast<uint16_t>(find(t)));
    t.cx(0, 1);  // swap
    linear_.push_back(static_cast<uint16_t>(find(t)));
    StabilizerTableau u(2);
    u.cx(1, 0);
    linear_.push_back(static_cast<uint16_t>(find(u)));
    u.cx(0, 1);
    linear_.push_back(static_cast<uint16_t>(find(u)));
}

size_t TwoQubitCliffords::find(const StabilizerTableau &t) const {
    if (t.num_qubits() != 2) throw InvalidArgument("expected a two-qubit tableau");
    auto it = index_.find(tableau_key(t));
    if (it == index_.end()) throw InternalError("Clifford not in the enumerated group");
    return it->second;
}

const TwoQubitCliffords &TwoQubitCliffords::instance() {
    static const TwoQubitCliffords table;
    return table;
}

void TwoQubitCliffords::apply(StabilizerTableau &t, size_t index, uint32_t a, uint32_t b) const {
    if (index >= words_.size()) throw InvalidArgument("Clifford index out of range");
    const uint32_t map[2] = {a, b};
    for (const Op &op : words_[index]) {
        if (op.gate == Gate::kCX) {
            t.cx(map[op.q0], map[op.q1]);
        } else {
            uint32_t q = map[op.q0];
            t.apply(op.gate, std::span<const uint32_t>(&q, 1));
        }
    }
}

// Random local circuits ----------------------------------------------------

LocalCircuit random_local_circuit(const CodeLayout &layout, unsigned depth, ShotRng &rng) {
    const auto &table = TwoQubitCliffords::instance();
    const size_t n = layout.num_qubits();
    std::vector<std::pair<uint32_t, uint32_t>> edges(layout.connectivity.edges().begin(),
                                                     layout.connectivity.edges().end());
    LocalCircuit c;
    c.inputs.resize(n);
    for (auto &in : c.inputs) in = static_cast<ProductInput>(rng.below(6));
    for (unsigned d = 0; d < depth; ++d) {
        std::shuffle(edges.begin(), edges.end(), rng);
        std::vector<bool> used(n, false);
        std::vector<LocalGate> layer;
        for (auto [a, b] : edges) {
            if (used[a] || used[b]) continue;
            used[a] = used[b] = true;
            layer.push_back({a, b, static_cast<uint16_t>(rng.below(table.size()))});
        }
        c.layers.push_back(std::move(layer));
    }
    return c;
}

void check_local_circuit(const LocalCircuit &c, const CodeLayout &layout) {
    const size_t n = layout.num_qubits();
    if (c.inputs.size() != n) throw InvalidArgument("circuit input count does not match layout");
    for (const auto &layer : c.layers) {
        std::vector<bool> used(n, false);
        for (const auto &g : layer) {
            if (g.a >= n || g.b >= n || g.a == g.b) throw InvalidArgument("gate qubits out of range");
            if (!layout.connectivity.contains(g.a, g.b)) throw InvalidArgument("gate not on a connectivity edge");
            if (used[g.a] || used[g.b]) throw InvalidArgument("layer uses a qubit twice");
            used[g.a] = used[g.b] = true;
            if (g.clifford >= TwoQubitCliffords::instance().size()) throw InvalidArgument("Clifford index out of range");
        }
    }
}

StabilizerTableau run_local_circuit(const LocalCircuit &c, size_t num_qubits) {
    StabilizerTableau t(num_qubits);
    for (size_t q = 0; q < num_qubits; ++q) {
        switch (c.inputs.at(q)) {
            case ProductInput::kZero: break;
            case ProductInput::kOne: t.x(q); break;
            case ProductInput::kPlus: t.h(q); break;
            case ProductInput::kMinus: t.x(q), t.h(q); break;
            case ProductInput::kPlusI: t.h(q), t.s(q); break;
            case ProductInput::kMinusI: t.x(q), t.h(q), t.s(q); break;
        }
    }
    const auto &table = TwoQubitCliffords::instance();
    for (const auto &layer : c.layers)
        for (const auto &g : layer) table.apply(t, g.clifford, g.a, g.b);
    return t;
}

LocalCircuitSample evaluate_local_circuit(const LocalCircuit &c, const CodeLayout &layout) {
    auto t = run_local_circuit(c, layout.num_qubits());
    LocalCircuitSample s;
    s.fidelity = exact_fidelity(t, layout);
    s.povm = povm_probabilities(t, layout);
    s.bound = bhattacharyya_bound(kIdealPovm, s.povm);
    s.connected = connected_correlation(t, layout);
    return s;
}

// Moves stay inside CSS-type circuits: Z/X eigenstate inputs and CNOT/SWAP gates.
static void mutate(LocalCircuit &c, const CodeLayout &layout, ShotRng &rng) {
    const auto &linear = TwoQubitCliffords::instance().linear();
    const size_t n = layout.num_qubits();
    if (rng.below(4) == 0) {
        c.inputs[rng.below(n)] = static_cast<ProductInput>(rng.below(4));
        return;
    }
    auto &layer = c.layers[rng.below(c.layers.size())];
    const auto &edges = layout.connectivity.edges();
    auto it = edges.begin();
    std::advance(it, static_cast<long>(rng.below(edges.size())));
    auto [a, b] = *it;
    // Drop gates touching the chosen edge's qubits, then (usually) place a fresh one on it.
    std::erase_if(layer, [&](const LocalGate &g) { return g.a == a || g.a == b || g.b == a || g.b == b; });
    if (rng.below(5) != 0) layer.push_back({a, b, linear[1 + rng.below(linear.size() - 1)]});
}

BoundProbe probe_local_bound(const CodeLayout &layout, unsigned depth, size_t samples, size_t uniform_samples,
                             uint64_t seed) {
    if (uniform_samples == 0 || uniform_samples > samples) throw InvalidArgument("need 0 < uniform_samples <= samples");
    if (depth == 0) throw InvalidArgument("depth must be positive");
    BoundProbe probe;
    probe.samples = samples;
    probe.uniform_samples = uniform_samples;
    double best_f = -1.0;
    auto record = [&](const LocalCircuit &c, const LocalCircuitSample &s) {
        probe.max_fidelity = std::max(probe.max_fidelity, s.fidelity);
        probe.max_connected = std::max(probe.max_connected, std::abs(s.connected));
        probe.max_bound_excess = std::max(probe.max_bound_excess, s.fidelity - s.bound);
        if (s.fidelity > 0.5 + 1e-12) ++probe.above_half;
        if (s.fidelity > best_f) {
            best_f = s.fidelity;
            probe.best = c;
        }
    };
    for (size_t i = 0; i < uniform_samples; ++i) {
        ShotRng rng(seed, i, Stream::kCircuitSampling);
        auto c = random_local_circuit(layout, depth, rng);
        auto s = evaluate_local_circuit(c, layout);
        record(c, s);
        probe.max_uniform_fidelity = std::max(probe.max_uniform_fidelity, s.fidelity);
    }
    ShotRng rng(seed, uniform_samples, Stream::kCircuitSampling);
    LocalCircuit current;
    current.inputs.assign(layout.num_qubits(), ProductInput::kZero);
    current.layers.assign(depth, {});
    double current_f = evaluate_local_circuit(current, layout).fidelity;
    for (size_t i = uniform_samples; i < samples; ++i) {
        LocalCircuit cand = current;
        int moves = 1 + static_cast<int>(rng.below(3));
        for (int m = 0; m < moves; ++m) mutate(cand, layout, rng);
        auto s = evaluate_local_circuit(cand, layout);
        record(cand, s);
        if (s.fidelity >= current_f) {
            current = std::move(cand);
            current_f = s.fidelity;
        }
    }
    return probe;
}

}  // namespace aprep
