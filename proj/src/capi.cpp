#include "aprep/aprep.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "aprep/adaptive_prep.hpp"
#include "aprep/bound.hpp"
#include "aprep/circuit.hpp"
#include "aprep/error.hpp"
#include "aprep/fidelity.hpp"
#include "aprep/oracle.hpp"
#include "aprep/surface_code.hpp"
#include "aprep/version.hpp"

struct aprep_layout {
    aprep::CodeLayout layout;
};

struct aprep_circuit {
    aprep::AdaptiveCircuit circuit;
};

namespace {

thread_local std::string g_last_error;

aprep_status fail(aprep_status s, const std::string &msg) {
    g_last_error = msg;
    return s;
}

template <class F>
aprep_status guarded(F &&f) {
    try {
        g_last_error.clear();
        f();
        return APREP_OK;
    } catch (const aprep::Error &e) {
        switch (e.kind()) {
            case aprep::ErrorKind::kInvalidArgument: return fail(APREP_ERR_USAGE, e.what());
            case aprep::ErrorKind::kData: return fail(APREP_ERR_DATA, e.what());
            case aprep::ErrorKind::kInternal: return fail(APREP_ERR_INTERNAL, e.what());
        }
        return fail(APREP_ERR_INTERNAL, e.what());
    } catch (const nlohmann::json::exception &e) {
        return fail(APREP_ERR_DATA, e.what());
    } catch (const std::bad_alloc &) {
        return fail(APREP_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return fail(APREP_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(APREP_ERR_INTERNAL, "unknown error");
    }
}

char *dup_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

void require(const void *p, const char *what) {
    if (!p) throw aprep::InvalidArgument(std::string(what) + " is null");
}

aprep::NoiseModel to_model(const aprep_noise &n) {
    aprep::NoiseModel m{n.p1, n.p2, n.pm, n.pi};
    m.validate();
    return m;
}

aprep::CorrectionStrategy to_strategy(aprep_correction c) {
    switch (c) {
        case APREP_CORRECTION_CHAIN: return aprep::CorrectionStrategy::kChain;
        case APREP_CORRECTION_GF2: return aprep::CorrectionStrategy::kGf2;
    }
    throw aprep::InvalidArgument("unknown correction strategy");
}

}  // namespace

extern "C" {

const char *aprep_version(void) { return aprep::kVersion; }

const char *aprep_last_error(void) { return g_last_error.c_str(); }

void aprep_string_free(char *s) { std::free(s); }

void aprep_prepare_options_default(aprep_prepare_options *opts) {
    if (!opts) return;
    *opts = aprep_prepare_options{};
    opts->shots_x = 1000;
    opts->shots_z = 1000;
    opts->correction = APREP_CORRECTION_CHAIN;
}

aprep_status aprep_layout_new_strip(int length, aprep_layout **out) {
    return guarded([&] {
        require(out, "out");
        *out = new aprep_layout{aprep::build_strip(length)};
    });
}

void aprep_layout_free(aprep_layout *layout) { delete layout; }

aprep_status aprep_layout_to_json(const aprep_layout *layout, char **out_json) {
    return guarded([&] {
        require(layout, "layout");
        require(out_json, "out_json");
        *out_json = dup_string(aprep::layout_to_json(layout->layout).dump());
    });
}

aprep_status aprep_layout_num_qubits(const aprep_layout *layout, size_t *out_data, size_t *out_total) {
    return guarded([&] {
        require(layout, "layout");
        if (out_data) *out_data = layout->layout.num_data();
        if (out_total) *out_total = layout->layout.num_qubits();
    });
}

aprep_status aprep_prepare(const aprep_layout *layout, const aprep_prepare_options *opts, char **out_stream) {
    return guarded([&] {
        require(layout, "layout");
        require(opts, "opts");
        require(out_stream, "out_stream");
        if (opts->shots_x == 0) throw aprep::InvalidArgument("zero shots in basis X");
        if (opts->shots_z == 0) throw aprep::InvalidArgument("zero shots in basis Z");
        auto noise = to_model(opts->noise);
        auto strategy = to_strategy(opts->correction);
        aprep::PrepRunner runner(layout->layout, noise, strategy);
        unsigned threads = opts->threads ? opts->threads : aprep::threads_from_env();
        auto records = runner.run_shots(opts->seed, opts->shots_x, opts->shots_z, threads, opts->with_exact_fidelity != 0);
        aprep::RunManifest m;
        m.version = aprep::kVersion;
        m.length = static_cast<int>(layout->layout.length);
        m.layout_hash = aprep::layout_hash(layout->layout);
        m.seed = opts->seed;
        m.noise = noise;
        m.shots_x = opts->shots_x;
        m.shots_z = opts->shots_z;
        m.correction = strategy == aprep::CorrectionStrategy::kChain ? "chain" : "gf2";
        *out_stream = dup_string(aprep::write_shot_stream(m, records));
    });
}

aprep_status aprep_estimate(const char *stream, int length, unsigned resamples, uint64_t seed, char **out_report) {
    return guarded([&] {
        require(stream, "stream");
        require(out_report, "out_report");
        if (resamples < 2) throw aprep::InvalidArgument("at least 2 bootstrap resamples are needed");
        auto parsed = aprep::read_shot_stream(stream);
        if (length == 0) {
            if (!parsed.manifest) throw aprep::DataError("shot stream has no manifest; the strip length must be given");
            length = parsed.manifest->length;
        }
        auto layout = aprep::build_strip(length);
        if (parsed.manifest && parsed.manifest->layout_hash != aprep::layout_hash(layout)) {
            throw aprep::DataError("shot stream was recorded on a different layout");
        }
        auto est = aprep::estimate_with_bootstrap(parsed.records, layout, resamples, seed);
        nlohmann::json report = aprep::estimate_to_json(est, layout);
        nlohmann::json table = nlohmann::json::array();
        for (const auto &[id, value] : est.per_stabilizer) {
            bool is_x = false;
            for (const auto &s : layout.x_stabilizers) is_x = is_x || s.id == id;
            table.push_back({{"stabilizer", id}, {"type", is_x ? "X" : "Z"}, {"fidelity", value}});
        }
        report["plaquettes"] = table;
        report["bootstrap_seed"] = seed;
        *out_report = dup_string(report.dump());
    });
}

aprep_status aprep_bound_report(int length, unsigned depth, double grid_step, char **out_report) {
    return guarded([&] {
        require(out_report, "out_report");
        auto layout = aprep::build_strip(length);
        auto cones = aprep::cones_disjoint(layout, depth);
        auto grid = aprep::max_product_form_bound(grid_step);
        nlohmann::json report = aprep::cone_report_to_json(cones, layout);
        report["grid_step"] = grid_step;
        report["max_product_form_bound"] = grid.value;
        report["argmax"] = {grid.a, grid.b};
        report["ceiling"] = cones.disjoint ? nlohmann::json(grid.value) : nlohmann::json(nullptr);
        *out_report = dup_string(report.dump());
    });
}

aprep_status aprep_bound_probe(int length, unsigned depth, uint64_t samples, uint64_t seed, char **out_report) {
    return guarded([&] {
        require(out_report, "out_report");
        auto layout = aprep::build_strip(length);
        auto probe = aprep::probe_local_bound(layout, depth, samples, samples, seed);
        nlohmann::json report = {{"layout", layout.id()},
                                 {"depth", depth},
                                 {"samples", probe.samples},
                                 {"max_fidelity", probe.max_fidelity},
                                 {"above_half", probe.above_half},
                                 {"max_bound_excess", probe.max_bound_excess},
                                 {"max_abs_connected", probe.max_connected}};
        *out_report = dup_string(report.dump());
    });
}

aprep_status aprep_oracle_check(int length, uint64_t shots, uint64_t seed, int inject_phase_bug, char **out_report,
                                int *out_passed) {
    return guarded([&] {
        require(out_report, "out_report");
        aprep::OracleOptions o;
        o.length = length;
        o.shots = shots;
        o.seed = seed;
        o.inject_phase_bug = inject_phase_bug != 0;
        auto rep = aprep::oracle_check(o);
        *out_report = dup_string(aprep::oracle_report_to_json(rep).dump());
        if (out_passed) *out_passed = rep.passed ? 1 : 0;
    });
}

aprep_status aprep_circuit_parse(const char *text, aprep_circuit **out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = new aprep_circuit{aprep::parse_circuit(text)};
    });
}

void aprep_circuit_free(aprep_circuit *circuit) { delete circuit; }

aprep_status aprep_circuit_serialize(const aprep_circuit *circuit, char **out_text) {
    return guarded([&] {
        require(circuit, "circuit");
        require(out_text, "out_text");
        *out_text = dup_string(aprep::serialize(circuit->circuit));
    });
}

aprep_status aprep_circuit_depth(const aprep_circuit *circuit, size_t *out_depth) {
    return guarded([&] {
        require(circuit, "circuit");
        require(out_depth, "out_depth");
        *out_depth = aprep::depth(circuit->circuit);
    });
}

aprep_status aprep_circuit_run(const aprep_circuit *circuit, uint64_t shots, uint64_t seed, const aprep_noise *noise,
                               char **out_trace) {
    return guarded([&] {
        require(circuit, "circuit");
        require(out_trace, "out_trace");
        const auto &c = circuit->circuit;
        aprep::NoiseModel model = noise ? to_model(*noise) : aprep::NoiseModel{};
        std::string out;
        if (c.instructions().empty() && c.num_cbits() == 0) {
            *out_trace = dup_string(out);
            return;
        }
        std::vector<uint64_t> ones(c.num_cbits(), 0);
        std::map<size_t, uint64_t> fired;
        for (uint64_t s = 0; s < shots; ++s) {
            aprep::StabilizerTableau t(c.num_qubits());
            aprep::ShotRng rng(seed, s, aprep::Stream::kMeasurement);
            aprep::NoiseSampler sampler(model, aprep::ShotRng(seed, s, aprep::Stream::kNoise));
            auto res = aprep::execute(c, t, rng, model.is_noiseless() ? nullptr : &sampler);
            nlohmann::json regs = nlohmann::json::object();
            for (const auto &r : c.cregs()) {
                std::string bits;
                for (uint32_t k = 0; k < r.width; ++k) bits.push_back(res.cbits[r.offset + k] ? '1' : '0');
                regs[r.name] = bits;
            }
            for (size_t k = 0; k < res.cbits.size(); ++k) ones[k] += res.cbits[k];
            for (size_t i : res.fired_conditionals) ++fired[i];
            out += nlohmann::json{{"type", "shot"}, {"shot_index", s}, {"registers", regs}}.dump() + "\n";
        }
        nlohmann::json ones_j = nlohmann::json::object();
        for (size_t k = 0; k < ones.size(); ++k) ones_j[c.cbit_name(static_cast<uint32_t>(k))] = ones[k];
        nlohmann::json fired_j = nlohmann::json::object();
        for (auto [i, n] : fired) fired_j[std::to_string(i)] = n;
        out += nlohmann::json{{"type", "summary"}, {"shots", shots}, {"seed", seed}, {"ones", ones_j}, {"fired", fired_j}}
                   .dump() +
               "\n";
        *out_trace = dup_string(out);
    });
}

aprep_status aprep_prep_circuit(const aprep_layout *layout, aprep_correction correction, aprep_circuit **out) {
    return guarded([&] {
        require(layout, "layout");
        require(out, "out");
        *out = new aprep_circuit{aprep::build_prep_circuit(layout->layout, to_strategy(correction))};
    });
}

}  // extern "C"
