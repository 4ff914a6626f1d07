#include "aprep/adaptive_prep.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "aprep/error.hpp"
#include "aprep/version.hpp"

namespace aprep {

namespace {

uint32_t shared_qubit(const CodeLayout &layout, size_t a, size_t b) {
    const auto &sa = layout.z_stabilizers[a].support;
    const auto &sb = layout.z_stabilizers[b].support;
    std::vector<uint32_t> both;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(both));
    if (both.size() != 1) {
        throw InternalError("stabilizers " + layout.z_stabilizers[a].id + " and " + layout.z_stabilizers[b].id +
                            " do not share exactly one qubit");
    }
    return both[0];
}

}  // namespace

std::vector<ChainStep> correction_chain(const CodeLayout &layout) {
    const uint32_t L = layout.length;
    if (layout.num_data() != 2 * (L + 1) || L % 2 == 0) {
        throw InvalidArgument("correction chain needs a strip layout");
    }
    auto pos = [&](char kind, uint32_t col) {
        return static_cast<uint32_t>(layout.z_position(std::string(1, kind) + std::to_string(col)));
    };
    std::vector<ChainStep> chain;
    auto step = [&](uint32_t from, uint32_t to) { chain.push_back({shared_qubit(layout, from, to), from, to}); };
    if (L >= 3) {
        step(pos('T', 1), pos('P', 0));
    }
    for (uint32_t k = 1; k + 2 <= L; k += 2) {
        bool spine_bottom = ((k - 1) / 2) % 2 == 0;
        uint32_t spine = pos(spine_bottom ? 'B' : 'T', k);
        uint32_t before = pos('P', k - 1);
        uint32_t after = pos('P', k + 1);
        step(before, spine);
        step(spine, after);
        if (k > 1) {
            uint32_t leaf = pos(spine_bottom ? 'T' : 'B', k);
            step(after, leaf);
            step(leaf, after);
        }
    }
    chain.push_back({layout.data_index(0, L), pos('P', L - 1), std::nullopt});
    return chain;
}

ChainOutcome run_chain(const std::vector<ChainStep> &chain, const CodeLayout &layout,
                       const std::vector<uint8_t> &syndrome) {
    if (syndrome.size() != layout.z_stabilizers.size()) {
        throw InvalidArgument("syndrome length does not match Z stabilizer count");
    }
    ChainOutcome out;
    out.remaining = syndrome;
    BitVector flips(layout.num_data());
    for (const auto &s : chain) {
        if (out.remaining[s.left]) {
            flips.flip(s.data_qubit);
            out.remaining[s.left] = 0;
            if (s.right) {
                out.remaining[*s.right] ^= 1;
            }
        }
    }
    out.flips = flips.indices();
    return out;
}

std::vector<uint32_t> solve_correction_gf2(const CodeLayout &layout, const std::vector<uint8_t> &syndrome) {
    if (syndrome.size() != layout.z_stabilizers.size()) {
        throw InvalidArgument("syndrome length does not match Z stabilizer count");
    }
    BitVector b(syndrome.size());
    for (size_t k = 0; k < syndrome.size(); ++k) {
        if (syndrome[k] > 1) throw InvalidArgument("syndrome bits must be 0 or 1");
        b.set(k, syndrome[k]);
    }
    auto x = gf2_solve(z_check_matrix(layout), b);
    if (!x) {
        throw InternalError("Z check matrix is not full row rank");
    }
    return x->indices();
}

AdaptiveCircuit build_prep_circuit(const CodeLayout &layout, CorrectionStrategy strategy) {
    AdaptiveCircuit c;
    const uint32_t n = static_cast<uint32_t>(layout.num_qubits());
    const uint32_t nd = static_cast<uint32_t>(layout.num_data());
    const uint32_t nz = static_cast<uint32_t>(layout.z_stabilizers.size());
    c.add_qreg("q", n);
    const uint32_t s = c.add_creg("s", nz);
    for (uint32_t q = 0; q < n; ++q) c.reset(q);
    for (uint32_t q = 0; q < nd; ++q) c.gate(Gate::kH, q);
    for (const auto &g : measurement_schedule(layout)) c.cx(g.data, g.ancilla);
    for (uint32_t k = 0; k < nz; ++k) c.measure(layout.ancillas[k].index, s + k);
    for (uint32_t k = 0; k < nz; ++k) c.reset(layout.ancillas[k].index);

    if (strategy == CorrectionStrategy::kChain) {
        for (const auto &st : correction_chain(layout)) {
            c.push(CondGateOp{s + st.left, 1, GateOp{Gate::kX, {st.data_qubit, 0}}});
            if (st.right) {
                c.push(AssignOp{s + *st.right, {{false, s + *st.right}, {false, s + st.left}}});
            }
            c.push(AssignOp{s + st.left, {{true, 0}}});
        }
        return c;
    }

    // The zero-free-variable solution is linear in the syndrome: column k of the
    // map is the solution for the unit syndrome e_k.
    std::vector<std::vector<uint32_t>> depends(nd);
    for (uint32_t k = 0; k < nz; ++k) {
        std::vector<uint8_t> unit(nz, 0);
        unit[k] = 1;
        for (uint32_t q : solve_correction_gf2(layout, unit)) depends[q].push_back(k);
    }
    const uint32_t f = c.add_creg("f", nd);
    for (uint32_t q = 0; q < nd; ++q) {
        if (depends[q].empty()) continue;
        AssignOp a{f + q, {}};
        for (uint32_t k : depends[q]) a.terms.push_back({false, s + k});
        c.push(std::move(a));
        c.push(CondGateOp{f + q, 1, GateOp{Gate::kX, {q, 0}}});
    }
    return c;
}

// ---------------------------------------------------------------------------

PrepRunner::PrepRunner(CodeLayout layout, NoiseModel noise, CorrectionStrategy strategy)
    : layout_(std::move(layout)),
      noise_(noise),
      circuit_(build_prep_circuit(layout_, strategy)),
      target_(plus_state_generators(layout_)),
      num_syndrome_bits_(layout_.z_stabilizers.size()) {
    noise_.validate();
}

StabilizerTableau PrepRunner::prepare(uint64_t seed, uint64_t shot_index, ExecutionResult *trace) const {
    StabilizerTableau t(layout_.num_qubits());
    ShotRng rng(seed, shot_index, Stream::kMeasurement);
    NoiseSampler sampler(noise_, ShotRng(seed, shot_index, Stream::kNoise));
    auto res = execute(circuit_, t, rng, &sampler);
    if (trace) *trace = std::move(res);
    return t;
}

ShotRecord PrepRunner::run_shot(Basis basis, uint64_t seed, uint64_t shot_index, bool with_exact_fidelity) const {
    StabilizerTableau t(layout_.num_qubits());
    ShotRng rng(seed, shot_index, Stream::kMeasurement);
    NoiseSampler sampler(noise_, ShotRng(seed, shot_index, Stream::kNoise));
    auto res = execute(circuit_, t, rng, &sampler);

    ShotRecord rec;
    rec.shot_index = shot_index;
    rec.basis = basis;
    rec.rng_seed = seed;
    rec.syndrome.reserve(num_syndrome_bits_);
    for (size_t k = 0; k < num_syndrome_bits_; ++k) {
        rec.syndrome.push_back(res.measurements.at(k).recorded_bit);
    }
    BitVector corr(layout_.num_data());
    for (size_t idx : res.fired_conditionals) {
        const auto &cg = std::get<CondGateOp>(circuit_.instructions()[idx]);
        corr.flip(cg.gate.qubits[0]);
    }
    rec.correction_support = corr.indices();
    if (with_exact_fidelity) {
        rec.exact_fidelity = t.overlap(target_);
    }
    rec.final_bits.reserve(layout_.num_data());
    for (size_t q = 0; q < layout_.num_data(); ++q) {
        bool bit = t.measure_qubit(q, basis, rng).bit();
        if (sampler.flip_measurement()) bit = !bit;
        rec.final_bits.push_back(bit);
    }
    return rec;
}

std::vector<ShotRecord> PrepRunner::run_shots(uint64_t seed, uint64_t shots_x, uint64_t shots_z, unsigned threads,
                                              bool with_exact_fidelity) const {
    const uint64_t total = shots_x + shots_z;
    std::vector<ShotRecord> out(total);
    auto work = [&](uint64_t begin, uint64_t stride) {
        for (uint64_t i = begin; i < total; i += stride) {
            out[i] = run_shot(i < shots_x ? Basis::kX : Basis::kZ, seed, i, with_exact_fidelity);
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1 || total < 2) {
        work(0, 1);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                work(w, threads);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : pool) t.join();
    for (auto &e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

unsigned threads_from_env() {
    const char *v = std::getenv("ADAPTIVE_PREP_THREADS");
    if (!v || !*v) return 1;
    char *end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1) return 1;
    return static_cast<unsigned>(std::min<long>(n, 256));
}

// ---------------------------------------------------------------------------
// Records

namespace {

std::string bits_to_string(const std::vector<uint8_t> &bits) {
    std::string s;
    s.reserve(bits.size());
    for (uint8_t b : bits) s.push_back(b ? '1' : '0');
    return s;
}

std::vector<uint8_t> bits_from_string(const std::string &s, const char *field) {
    std::vector<uint8_t> out;
    out.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw DataError(std::string("field '") + field + "' must be a 0/1 string");
        out.push_back(c == '1');
    }
    return out;
}

nlohmann::json noise_json(const NoiseModel &n) { return {{"p1", n.p1}, {"p2", n.p2}, {"pm", n.pm}, {"pi", n.pi}}; }

}  // namespace

nlohmann::json shot_to_json(const ShotRecord &r) {
    nlohmann::json j{{"type", "shot"},
                     {"shot_index", r.shot_index},
                     {"basis", r.basis == Basis::kX ? "X" : "Z"},
                     {"syndrome", bits_to_string(r.syndrome)},
                     {"correction_support", r.correction_support},
                     {"final_bits", bits_to_string(r.final_bits)},
                     {"rng_seed", r.rng_seed}};
    if (r.exact_fidelity) j["exact_fidelity"] = *r.exact_fidelity;
    return j;
}

ShotRecord shot_from_json(const nlohmann::json &j) {
    try {
        ShotRecord r;
        r.shot_index = j.at("shot_index").get<uint64_t>();
        std::string basis = j.at("basis").get<std::string>();
        if (basis != "X" && basis != "Z") throw DataError("basis must be \"X\" or \"Z\"");
        r.basis = basis == "X" ? Basis::kX : Basis::kZ;
        r.syndrome = bits_from_string(j.at("syndrome").get<std::string>(), "syndrome");
        r.correction_support = j.at("correction_support").get<std::vector<uint32_t>>();
        r.final_bits = bits_from_string(j.at("final_bits").get<std::string>(), "final_bits");
        r.rng_seed = j.at("rng_seed").get<uint64_t>();
        if (j.contains("exact_fidelity")) r.exact_fidelity = j.at("exact_fidelity").get<double>();
        return r;
    } catch (const nlohmann::json::exception &e) {
        throw DataError(std::string("malformed shot record: ") + e.what());
    }
}

std::string layout_hash(const CodeLayout &layout) {
    std::string text = layout_to_json(layout).dump();
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string write_shot_stream(const RunManifest &m, const std::vector<ShotRecord> &records) {
    std::ostringstream out;
    nlohmann::json head{{"type", "manifest"},
                        {"format", "aprep-shots/1"},
                        {"version", m.version},
                        {"length", m.length},
                        {"layout_hash", m.layout_hash},
                        {"seed", m.seed},
                        {"noise", noise_json(m.noise)},
                        {"shots_x", m.shots_x},
                        {"shots_z", m.shots_z},
                        {"correction", m.correction},
                        {"rng", "philox4x32-10"}};
    out << head.dump() << '\n';
    for (const auto &r : records) out << shot_to_json(r).dump() << '\n';
    return out.str();
}

ShotStream read_shot_stream(std::string_view text) {
    ShotStream s;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        try {
            auto j = nlohmann::json::parse(line);
            if (!j.is_object()) throw DataError("record is not an object");
            std::string type = j.value("type", "shot");
            if (type == "manifest") {
                if (s.manifest || !s.records.empty()) throw DataError("manifest must be the first line");
                RunManifest m;
                m.version = j.value("version", "");
                m.length = j.at("length").get<int>();
                m.layout_hash = j.value("layout_hash", "");
                m.seed = j.value("seed", uint64_t{0});
                if (j.contains("noise")) {
                    const auto &n = j.at("noise");
                    m.noise = {n.value("p1", 0.0), n.value("p2", 0.0), n.value("pm", 0.0), n.value("pi", 0.0)};
                }
                m.shots_x = j.value("shots_x", uint64_t{0});
                m.shots_z = j.value("shots_z", uint64_t{0});
                m.correction = j.value("correction", "chain");
                s.manifest = m;
            } else if (type == "shot") {
                s.records.push_back(shot_from_json(j));
            } else {
                throw DataError("unknown record type '" + type + "'");
            }
        } catch (const nlohmann::json::exception &e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        } catch (const DataError &e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return s;
}

}  // namespace aprep
