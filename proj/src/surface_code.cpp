#include "aprep/surface_code.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "aprep/error.hpp"

namespace aprep {

namespace {

Stabilizer make(std::string id, PauliType type, PlaquetteShape shape, uint32_t column,
                std::vector<uint32_t> support) {
    std::sort(support.begin(), support.end());
    return {std::move(id), type, shape, column, std::move(support)};
}

int layer_for(const Stabilizer &s, const CodeLayout &layout, uint32_t data) {
    const auto &d = layout.data[data];
    bool west = d.col == s.column;
    switch (s.shape) {
        case PlaquetteShape::kFull:
            if (d.row == 1) return west ? 1 : 2;
            return west ? 3 : 4;
        case PlaquetteShape::kTop: return west ? 1 : 2;
        case PlaquetteShape::kBottom: return west ? 3 : 4;
        default: break;
    }
    throw InternalError("no schedule rule for stabilizer " + s.id);
}

}  // namespace

size_t CodeLayout::z_position(const std::string &stabilizer_id) const {
    for (size_t k = 0; k < z_stabilizers.size(); ++k) {
        if (z_stabilizers[k].id == stabilizer_id) return k;
    }
    throw InvalidArgument("no Z stabilizer '" + stabilizer_id + "'");
}

CodeLayout build_strip(int length) {
    if (length < 1 || length % 2 == 0) {
        throw InvalidArgument("strip length must be odd and positive, got " + std::to_string(length));
    }
    CodeLayout lay;
    const uint32_t L = static_cast<uint32_t>(length);
    lay.length = L;
    for (uint32_t r = 0; r < 2; ++r) {
        for (uint32_t c = 0; c <= L; ++c) {
            lay.data.push_back({lay.data_index(r, c), r, c});
        }
    }
    auto d = [&](uint32_t r, uint32_t c) { return lay.data_index(r, c); };
    auto full = [&](uint32_t c, PauliType t) {
        return make("P" + std::to_string(c), t, PlaquetteShape::kFull, c, {d(0, c), d(0, c + 1), d(1, c), d(1, c + 1)});
    };
    auto top = [&](uint32_t c) {
        return make("T" + std::to_string(c), PauliType::kZ, PlaquetteShape::kTop, c, {d(1, c), d(1, c + 1)});
    };
    auto bottom = [&](uint32_t c) {
        return make("B" + std::to_string(c), PauliType::kZ, PlaquetteShape::kBottom, c, {d(0, c), d(0, c + 1)});
    };

    // Z stabilizers in correction-chain order: T1, P0, then per X plaquette k
    // its spine boundary stabilizer, P(k+1), and (k > 1) the other boundary one.
    if (L >= 3) lay.z_stabilizers.push_back(top(1));
    lay.z_stabilizers.push_back(full(0, PauliType::kZ));
    for (uint32_t k = 1; k + 2 <= L; k += 2) {
        bool spine_bottom = ((k - 1) / 2) % 2 == 0;
        lay.z_stabilizers.push_back(spine_bottom ? bottom(k) : top(k));
        lay.z_stabilizers.push_back(full(k + 1, PauliType::kZ));
        if (k > 1) lay.z_stabilizers.push_back(spine_bottom ? top(k) : bottom(k));
    }

    lay.x_stabilizers.push_back(make("XL", PauliType::kX, PlaquetteShape::kLeft, 0, {d(0, 0), d(1, 0)}));
    for (uint32_t k = 1; k + 2 <= L; k += 2) {
        lay.x_stabilizers.push_back(full(k, PauliType::kX));
    }
    lay.x_stabilizers.push_back(make("XR", PauliType::kX, PlaquetteShape::kRight, L, {d(0, L), d(1, L)}));

    for (uint32_t c = 0; c <= L; ++c) lay.logical_x.push_back(d(0, c));
    lay.logical_z_left = {d(0, 0), d(1, 0)};
    lay.logical_z_right = {d(0, L), d(1, L)};

    const uint32_t nd = static_cast<uint32_t>(lay.data.size());
    for (uint32_t k = 0; k < lay.z_stabilizers.size(); ++k) {
        const auto &s = lay.z_stabilizers[k];
        double x = s.column + 0.5;
        double y = s.shape == PlaquetteShape::kTop ? 1.5 : s.shape == PlaquetteShape::kBottom ? -0.5 : 0.5;
        uint32_t anc = nd + k;
        lay.ancillas.push_back({anc, k, x, y});
        for (uint32_t q : s.support) {
            lay.connectivity.add(q, anc);
            lay.schedule.push_back({q, anc, k, layer_for(s, lay, q)});
        }
    }
    std::stable_sort(lay.schedule.begin(), lay.schedule.end(),
                     [](const ScheduledCnot &a, const ScheduledCnot &b) { return a.layer < b.layer; });
    validate_layout(lay);
    return lay;
}

StabilizerSet stabilizer_generators(const CodeLayout &layout) {
    StabilizerSet out;
    const size_t n = layout.num_qubits();
    for (const auto &s : layout.x_stabilizers) out.x.push_back(PauliString::x_on(n, s.support));
    for (const auto &s : layout.z_stabilizers) out.z.push_back(PauliString::z_on(n, s.support));
    return out;
}

PauliString logical_x_operator(const CodeLayout &layout) {
    return PauliString::x_on(layout.num_qubits(), layout.logical_x);
}
PauliString logical_z_left_operator(const CodeLayout &layout) {
    return PauliString::z_on(layout.num_qubits(), layout.logical_z_left);
}
PauliString logical_z_right_operator(const CodeLayout &layout) {
    return PauliString::z_on(layout.num_qubits(), layout.logical_z_right);
}

std::vector<PauliString> plus_state_generators(const CodeLayout &layout) {
    auto set = stabilizer_generators(layout);
    std::vector<PauliString> out = set.x;
    out.insert(out.end(), set.z.begin(), set.z.end());
    out.push_back(logical_x_operator(layout));
    return out;
}

BitMatrix z_check_matrix(const CodeLayout &layout) {
    BitMatrix h(layout.z_stabilizers.size(), layout.num_data());
    for (size_t k = 0; k < layout.z_stabilizers.size(); ++k) {
        for (uint32_t q : layout.z_stabilizers[k].support) h.set(k, q, true);
    }
    return h;
}

double energy(const StabilizerTableau &t, const CodeLayout &layout) {
    if (t.num_qubits() != layout.num_qubits()) {
        throw InvalidArgument("tableau does not match layout qubit count");
    }
    auto set = stabilizer_generators(layout);
    double e = 0.0;
    for (const auto &s : set.x) e -= t.expectation(s);
    for (const auto &s : set.z) e -= t.expectation(s);
    return e;
}

std::vector<ScheduledCnot> measurement_schedule(const CodeLayout &layout) {
    std::map<int, std::set<uint32_t>> busy;
    std::set<std::pair<uint32_t, uint32_t>> seen;
    for (const auto &g : layout.schedule) {
        if (g.layer < 1 || g.layer > 4) {
            throw InternalError("schedule layer out of 1..4");
        }
        auto &b = busy[g.layer];
        if (!b.insert(g.data).second || !b.insert(g.ancilla).second) {
            throw InternalError("schedule layer " + std::to_string(g.layer) + " reuses a qubit");
        }
        if (!seen.insert({g.stabilizer, g.data}).second) {
            throw InternalError("schedule repeats a plaquette incidence");
        }
    }
    size_t incidences = 0;
    for (size_t k = 0; k < layout.z_stabilizers.size(); ++k) {
        for (uint32_t q : layout.z_stabilizers[k].support) {
            ++incidences;
            if (!seen.count({static_cast<uint32_t>(k), q})) {
                throw InternalError("schedule misses an incidence of " + layout.z_stabilizers[k].id);
            }
        }
    }
    if (incidences != layout.schedule.size()) {
        throw InternalError("schedule has extra CNOTs");
    }
    return layout.schedule;
}

AdaptiveCircuit schedule_circuit(const CodeLayout &layout) {
    AdaptiveCircuit c;
    c.add_qreg("q", static_cast<uint32_t>(layout.num_qubits()));
    for (const auto &g : measurement_schedule(layout)) c.cx(g.data, g.ancilla);
    return c;
}

void validate_layout(const CodeLayout &layout) {
    const size_t nd = layout.num_data();
    const uint32_t L = layout.length;
    auto fail = [](const std::string &m) { throw InternalError("layout invariant: " + m); };
    if (nd != 2 * (L + 1)) fail("data qubit count");
    if (layout.z_stabilizers.size() + layout.x_stabilizers.size() != nd - 1) fail("stabilizer count");
    if (layout.ancillas.size() != layout.z_stabilizers.size()) fail("one ancilla per Z stabilizer");

    auto set = stabilizer_generators(layout);
    std::vector<PauliString> all = set.x;
    all.insert(all.end(), set.z.begin(), set.z.end());
    for (size_t i = 0; i < all.size(); ++i) {
        for (size_t j = i + 1; j < all.size(); ++j) {
            if (!all[i].commutes(all[j])) fail("stabilizers anticommute");
        }
    }
    auto lx = logical_x_operator(layout);
    auto zl = logical_z_left_operator(layout);
    auto zr = logical_z_right_operator(layout);
    for (const auto &s : set.z) {
        if (!s.commutes(lx)) fail("logical X anticommutes with a Z stabilizer");
    }
    for (const auto &s : set.x) {
        if (!s.commutes(zl) || !s.commutes(zr)) fail("logical Z anticommutes with an X stabilizer");
    }
    if (lx.commutes(zl) || lx.commutes(zr)) fail("logical X commutes with logical Z");

    PauliString prod(layout.num_qubits());
    for (const auto &s : set.z) prod *= s;
    if (!prod.same_operator(zl * zr)) fail("product of Z stabilizers is not Z_L Z_R");

    size_t incidences = 0;
    for (size_t k = 0; k < layout.z_stabilizers.size(); ++k) {
        uint32_t anc = layout.ancillas[k].index;
        for (uint32_t q : layout.z_stabilizers[k].support) {
            ++incidences;
            if (!layout.connectivity.contains(q, anc)) fail("missing plaquette edge");
        }
    }
    if (incidences != layout.connectivity.size()) fail("edges beyond plaquette incidences");
    for (const auto &[a, b] : layout.connectivity.edges()) {
        if ((a < nd) == (b < nd)) fail("edge is not data-ancilla");
    }
    measurement_schedule(layout);
}

nlohmann::json layout_to_json(const CodeLayout &layout) {
    using nlohmann::json;
    auto stab_json = [](const Stabilizer &s) {
        static const char *kShape[] = {"full", "top", "bottom", "left", "right"};
        return json{{"id", s.id},
                    {"type", s.type == PauliType::kX ? "X" : "Z"},
                    {"shape", kShape[static_cast<int>(s.shape)]},
                    {"column", s.column},
                    {"support", s.support}};
    };
    json j;
    j["layout_id"] = layout.id();
    j["length"] = layout.length;
    j["num_data"] = layout.num_data();
    j["num_ancilla"] = layout.ancillas.size();
    j["data_qubits"] = json::array();
    for (const auto &d : layout.data) j["data_qubits"].push_back({{"index", d.index}, {"row", d.row}, {"col", d.col}});
    j["ancilla_qubits"] = json::array();
    for (const auto &a : layout.ancillas) {
        j["ancilla_qubits"].push_back({{"index", a.index},
                                       {"stabilizer", layout.z_stabilizers[a.stabilizer].id},
                                       {"x", a.x},
                                       {"y", a.y}});
    }
    j["z_stabilizers"] = json::array();
    for (size_t k = 0; k < layout.z_stabilizers.size(); ++k) {
        auto s = stab_json(layout.z_stabilizers[k]);
        s["ancilla"] = layout.ancillas[k].index;
        s["syndrome_bit"] = k;
        j["z_stabilizers"].push_back(s);
    }
    j["x_stabilizers"] = json::array();
    for (const auto &s : layout.x_stabilizers) j["x_stabilizers"].push_back(stab_json(s));
    j["logical_x"] = layout.logical_x;
    j["logical_z_left"] = layout.logical_z_left;
    j["logical_z_right"] = layout.logical_z_right;
    j["edges"] = json::array();
    for (const auto &[a, b] : layout.connectivity.edges()) j["edges"].push_back({a, b});
    j["schedule"] = json::array();
    for (const auto &g : layout.schedule) {
        j["schedule"].push_back({{"layer", g.layer},
                                 {"data", g.data},
                                 {"ancilla", g.ancilla},
                                 {"stabilizer", layout.z_stabilizers[g.stabilizer].id}});
    }
    j["chain_order"] = json::array();
    for (const auto &s : layout.z_stabilizers) j["chain_order"].push_back(s.id);
    return j;
}

}  // namespace aprep
