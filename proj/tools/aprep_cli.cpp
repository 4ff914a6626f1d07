#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI/CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aprep/aprep.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct CliError {
    int code;
    std::string message;
};

void check(aprep_status s) {
    if (s != APREP_OK) throw CliError{static_cast<int>(s), aprep_last_error()};
}

struct Owned {
    char *p = nullptr;
    ~Owned() { aprep_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

struct LayoutHandle {
    aprep_layout *p = nullptr;
    ~LayoutHandle() { aprep_layout_free(p); }
};

struct CircuitHandle {
    aprep_circuit *p = nullptr;
    ~CircuitHandle() { aprep_circuit_free(p); }
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError{kExitData, "cannot read " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string &text, const std::string &out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError{kExitData, "cannot write " + out_path};
    out << text;
    if (!out) throw CliError{kExitData, "write failed for " + out_path};
}

std::string pretty(const std::string &json) { return nlohmann::json::parse(json).dump(2) + "\n"; }

aprep_noise parse_noise(const std::string &text) {
    aprep_noise n{0, 0, 0, 0};
    double *fields[] = {&n.p1, &n.p2, &n.pm, &n.pi};
    std::stringstream ss(text);
    std::string item;
    int k = 0;
    while (std::getline(ss, item, ',')) {
        if (k >= 4) throw CliError{kExitUsage, "--noise takes four comma-separated values p1,p2,pm,pi"};
        try {
            size_t used = 0;
            *fields[k] = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception &) {
            throw CliError{kExitUsage, "--noise: cannot parse '" + item + "'"};
        }
        ++k;
    }
    if (k == 1) {
        // A single value sets every channel.
        n.p2 = n.pm = n.pi = n.p1;
    } else if (k != 4) {
        throw CliError{kExitUsage, "--noise takes four comma-separated values p1,p2,pm,pi"};
    }
    return n;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Constant-depth adaptive preparation of the surface-code logical |+> on a strip"};
    app.set_version_flag("--version", std::string(aprep_version()));
    app.require_subcommand(1);

    int length = 5;
    uint64_t shots_x = 1000, shots_z = 1000, seed = 0;
    std::string noise_text = "0,0,0,0", out_path, correction = "chain";
    bool exact = false;
    auto *prepare = app.add_subcommand("prepare", "Run preparation shots and write a shot stream");
    prepare->add_option("--length", length, "Strip length L (odd)")->capture_default_str();
    prepare->add_option("--shots-x", shots_x, "Shots read out in the X basis")->capture_default_str();
    prepare->add_option("--shots-z", shots_z, "Shots read out in the Z basis")->capture_default_str();
    prepare->add_option("--noise", noise_text, "p1,p2,pm,pi")->capture_default_str();
    prepare->add_option("--seed", seed, "Master seed")->capture_default_str();
    prepare->add_option("--out", out_path, "Output file (default stdout)");
    prepare->add_option("--correction", correction, "chain or gf2")
        ->check(CLI::IsMember({"chain", "gf2"}))
        ->capture_default_str();
    prepare->add_flag("--exact", exact, "Attach the exact fidelity of each prepared state");

    std::string in_path;
    unsigned resamples = 100;
    int est_length = 0;
    uint64_t boot_seed = 0;
    auto *estimate = app.add_subcommand("estimate", "Fidelity lower bound from a shot stream");
    estimate->add_option("input", in_path, "Shot stream file")->required();
    estimate->add_option("--resamples", resamples, "Bootstrap resamples")->capture_default_str();
    estimate->add_option("--length", est_length, "Strip length (default: from the manifest)");
    auto *boot_opt = estimate->add_option("--bootstrap-seed", boot_seed, "Bootstrap seed (default: run seed)");
    estimate->add_option("--out", out_path, "Report file (default stdout)");

    unsigned depth = 4;
    double grid_step = 1e-3;
    uint64_t probe = 0;
    auto *bound = app.add_subcommand("bound", "Causal-cone verdict and fidelity ceiling");
    bound->add_option("--length", length, "Strip length L (odd)")->capture_default_str();
    bound->add_option("--depth", depth, "Circuit depth")->capture_default_str();
    bound->add_option("--grid-step", grid_step, "Grid step for the product-form maximum")->capture_default_str();
    bound->add_option("--probe", probe, "Also sample this many random local Clifford circuits");
    bound->add_option("--seed", seed, "Seed for --probe")->capture_default_str();
    bound->add_option("--out", out_path, "Report file (default stdout)");

    uint64_t shots = 10000;
    auto *oracle = app.add_subcommand("oracle-check", "Compare the tableau engine with the statevector oracle");
    oracle->add_option("--length", length, "Strip length L (odd, at most 5)")->capture_default_str();
    oracle->add_option("--shots", shots, "Sampled shots")->capture_default_str();
    oracle->add_option("--seed", seed, "Master seed")->capture_default_str();
    oracle->add_option("--out", out_path, "Report file (default stdout)");

    std::string qasm_path;
    uint64_t run_shots = 1;
    auto *run = app.add_subcommand("run-qasm", "Execute a circuit file and dump classical registers");
    run->add_option("file", qasm_path, "Circuit file")->required();
    run->add_option("--shots", run_shots, "Number of shots")->capture_default_str();
    run->add_option("--seed", seed, "Master seed")->capture_default_str();
    run->add_option("--noise", noise_text, "p1,p2,pm,pi")->capture_default_str();
    run->add_option("--out", out_path, "Trace file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*prepare) {
            LayoutHandle layout;
            check(aprep_layout_new_strip(length, &layout.p));
            aprep_prepare_options opts;
            aprep_prepare_options_default(&opts);
            opts.shots_x = shots_x;
            opts.shots_z = shots_z;
            opts.seed = seed;
            opts.noise = parse_noise(noise_text);
            opts.correction = correction == "gf2" ? APREP_CORRECTION_GF2 : APREP_CORRECTION_CHAIN;
            opts.with_exact_fidelity = exact ? 1 : 0;
            Owned stream;
            check(aprep_prepare(layout.p, &opts, &stream.p));
            emit(stream.str(), out_path);
        } else if (*estimate) {
            std::string text = read_file(in_path);
            if (boot_opt->count() == 0) {
                // Default bootstrap seed: the run seed recorded in the manifest.
                auto nl = text.find('\n');
                try {
                    auto first = nlohmann::json::parse(text.substr(0, nl));
                    if (first.value("type", "") == "manifest") boot_seed = first.at("seed").get<uint64_t>();
                } catch (const nlohmann::json::exception &) {
                    // Malformed input is reported by the library below.
                }
            }
            Owned report;
            check(aprep_estimate(text.c_str(), est_length, resamples, boot_seed, &report.p));
            emit(pretty(report.str()), out_path);
        } else if (*bound) {
            Owned report;
            check(aprep_bound_report(length, depth, grid_step, &report.p));
            auto j = nlohmann::json::parse(report.str());
            if (probe > 0) {
                Owned pr;
                check(aprep_bound_probe(length, depth, probe, seed, &pr.p));
                j["probe"] = nlohmann::json::parse(pr.str());
            }
            emit(j.dump(2) + "\n", out_path);
        } else if (*oracle) {
            Owned report;
            int passed = 0;
            check(aprep_oracle_check(length, shots, seed, 0, &report.p, &passed));
            emit(pretty(report.str()), out_path);
            if (!passed) {
                std::cerr << "error: tableau and statevector oracle disagree\n";
                return kExitInternal;
            }
        } else if (*run) {
            std::string text = read_file(qasm_path);
            CircuitHandle circuit;
            check(aprep_circuit_parse(text.c_str(), &circuit.p));
            aprep_noise noise = parse_noise(noise_text);
            Owned trace;
            check(aprep_circuit_run(circuit.p, run_shots, seed, &noise, &trace.p));
            emit(trace.str(), out_path);
        }
    } catch (const CliError &e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return 0;
}
