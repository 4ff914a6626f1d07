// One PASS/FAIL line per acceptance criterion.
//
// Exit status is 0 when every criterion passes, or, with --expect-fail, when
// the failing set is exactly the listed one (so an unexpected pass is also
// reported as a change).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI/CLI11.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include "aprep/adaptive_prep.hpp"
#include "aprep/bound.hpp"
#include "aprep/fidelity.hpp"
#include "aprep/gf2.hpp"
#include "aprep/oracle.hpp"

using namespace aprep;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

unsigned workers() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

double mean_exact(const std::vector<ShotRecord> &rs) {
    double s = 0;
    for (const auto &r : rs) s += *r.exact_fidelity;
    return s / static_cast<double>(rs.size());
}

NoiseModel scaled_noise(double p2) { return NoiseModel{p2 / 10, p2, p2 / 2, p2 / 10}; }

Verdict exact_preparation() {
    auto l = build_strip(5);
    PrepRunner runner(l, NoiseModel{});
    size_t exact = 0;
    for (uint64_t seed = 1; seed <= 100; ++seed) exact += exact_fidelity(runner.prepare(seed, 0), l) == 1.0;
    auto records = runner.run_shots(2024, 1000, 1000, workers());
    auto e = estimate(records, l);
    bool ok = l.num_qubits() == 19 && exact == 100 && e.lower_bound == 1.0;
    return {ok, fmt("%zu/100 seeds exact, lower bound %.6f over %llu+%llu shots", exact, e.lower_bound,
                    (unsigned long long)e.n_x, (unsigned long long)e.n_z)};
}

Verdict constant_depth() {
    std::string d;
    bool ok = true;
    for (int L : {1, 3, 5, 7, 9}) {
        size_t v = depth(build_prep_circuit(build_strip(L)));
        ok = ok && v == 4;
        d += fmt("L=%d:%zu ", L, v);
    }
    return {ok, d};
}

Verdict ceiling() {
    auto l = build_strip(5);
    auto grid = max_product_form_bound(1e-3);
    const size_t n = 1000;
    double max_f = 0;
    size_t above = 0;
    for (size_t i = 0; i < n; ++i) {
        ShotRng rng(3, i, Stream::kCircuitSampling);
        double f = evaluate_local_circuit(random_local_circuit(l, 4, rng), l).fidelity;
        max_f = std::max(max_f, f);
        above += f > 0.5 + 1e-12;
    }
    bool bounded = std::abs(grid.value - 0.5) <= 1e-9 && above == 0;
    bool tight = max_f >= 0.45;
    return {bounded && tight,
            fmt("grid max %.12f; %zu random depth-4 circuits: %zu above 1/2, max fidelity %.6g (needs >= 0.45)",
                grid.value, n, above, max_f)};
}

Verdict cones() {
    bool l5 = cones_disjoint(build_strip(5), 4).disjoint;
    bool l3 = cones_disjoint(build_strip(3), 4).disjoint;
    return {l5 && !l3, fmt("L=5 disjoint=%d, L=3 disjoint=%d", l5, l3)};
}

Verdict calibrated_noise() {
    auto l = build_strip(5);
    std::string scan;
    for (int k = 0; k <= 30; ++k) {
        double p2 = k * 1e-3;
        PrepRunner runner(l, scaled_noise(p2));
        auto records = runner.run_shots(5, 1000, 1000, workers(), true);
        auto e = estimate_with_bootstrap(records, l, kDefaultResamples, 5);
        scan += fmt("%.3f:%.3f ", p2, e.lower_bound);
        if (e.lower_bound < 0.72 || e.lower_bound > 0.82) continue;
        double f = mean_exact(records);
        bool ok = f >= e.lower_bound - 3 * e.sigma;
        return {ok, fmt("p2=%.3f lower bound %s, mean exact fidelity %.4f", p2,
                        format_with_uncertainty(e.lower_bound, e.sigma).c_str(), f)};
    }
    return {false, "no p2 in [0, 0.03] lands in [0.72, 0.82]; scan " + scan};
}

Verdict estimator_inequality() {
    auto l = build_strip(5);
    std::vector<NoiseModel> models = {NoiseModel{}, scaled_noise(0.005), scaled_noise(0.01), scaled_noise(0.02),
                                      NoiseModel{0.01, 0.0, 0.05, 0.0}, NoiseModel{0.0, 0.03, 0.0, 0.02}};
    bool ok = true;
    std::string d;
    for (size_t i = 0; i < models.size(); ++i) {
        PrepRunner runner(l, models[i]);
        auto records = runner.run_shots(100 + i, 1000, 1000, workers(), true);
        auto e = estimate_with_bootstrap(records, l, kDefaultResamples, 100 + i);
        double f = mean_exact(records);
        ok = ok && f >= e.lower_bound - 5 * e.sigma;
        d += fmt("[F=%.3f lb=%.3f s=%.3f] ", f, e.lower_bound, e.sigma);
    }
    return {ok, d};
}

Verdict correction_universality() {
    auto l = build_strip(5);
    auto chain = correction_chain(l);
    std::vector<BitVector> sector;
    for (const auto &s : l.x_stabilizers) sector.push_back(BitVector::from_indices(l.num_data(), s.support));
    sector.push_back(BitVector::from_indices(l.num_data(), l.logical_x));
    auto z = stabilizer_generators(l).z;
    size_t good = 0;
    for (uint32_t code = 0; code < 128; ++code) {
        std::vector<uint8_t> s(7);
        for (size_t k = 0; k < 7; ++k) s[k] = (code >> k) & 1u;
        // The pre-correction state for this syndrome: |+...+> projected onto it.
        StabilizerTableau pre(l.num_qubits());
        for (uint32_t q = 0; q < l.num_data(); ++q) pre.h(q);
        for (size_t k = 0; k < 7; ++k) pre.measure_forced(z[k], s[k] ? -1 : 1);
        auto walk = run_chain(chain, l, s);
        auto solved = solve_correction_gf2(l, s);
        auto a = pre, b = pre;
        for (uint32_t q : walk.flips) a.x(q);
        for (uint32_t q : solved) b.x(q);
        std::vector<PauliString> gb;
        for (size_t i = 0; i < b.num_qubits(); ++i) gb.push_back(b.stabilizer(i));
        bool clean = std::all_of(walk.remaining.begin(), walk.remaining.end(), [](uint8_t v) { return v == 0; });
        for (const auto &g : z) clean = clean && b.peek(g) == 1;
        auto diff = BitVector::from_indices(l.num_data(), walk.flips) ^ BitVector::from_indices(l.num_data(), solved);
        good += clean && a.overlap(gb) == 1.0 && exact_fidelity(a, l) == 1.0 && gf2_in_span(sector, diff);
    }
    return {good == 128, fmt("%zu/128 syndromes", good)};
}

Verdict syndrome_law() {
    auto l = build_strip(5);
    PrepRunner runner(l, NoiseModel{});
    const uint64_t n = 100000;
    std::vector<double> counts(128, 0);
    for (const auto &r : runner.run_shots(8, n, 0, workers())) {
        uint32_t code = 0;
        for (size_t k = 0; k < 7; ++k) code |= uint32_t{r.syndrome[k]} << k;
        counts[code] += 1;
    }
    double chi2 = 0, expect = static_cast<double>(n) / 128;
    for (double c : counts) chi2 += (c - expect) * (c - expect) / expect;
    double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(127), chi2));
    return {p > 0.001, fmt("chi2=%.1f on 127 dof, p=%.4f", chi2, p)};
}

Verdict oracle_equivalence() {
    bool ok = true;
    std::string d;
    for (int L : {1, 3, 5}) {
        OracleOptions o;
        o.length = L;
        o.shots = 10000;
        o.seed = 17;
        auto r = oracle_check(o);
        ok = ok && r.passed;
        d += fmt("[L=%d det.mismatch=%zu tvd=%.2g exact-tvd=%.2g dF=%.1g] ", L, r.deterministic_mismatches,
                 r.tvd_sampled, r.tvd_exact, r.max_fidelity_diff);
    }
    return {ok, d};
}

Verdict bootstrap() {
    auto l = build_strip(5);
    auto clean = estimate_with_bootstrap(PrepRunner(l, NoiseModel{}).run_shots(1, 1000, 1000, workers()), l);
    bool ok = clean.sigma == 0.0 && clean.n_resamples == 100;
    std::string d = fmt("noiseless sigma=%g; ", clean.sigma);
    for (double p2 : {0.01, 0.02}) {
        auto e = estimate_with_bootstrap(PrepRunner(l, scaled_noise(p2)).run_shots(2, 1000, 1000, workers()), l);
        double analytic = std::sqrt(e.px_hat * (1 - e.px_hat) / e.n_x + e.pz_hat * (1 - e.pz_hat) / e.n_z);
        double ratio = e.sigma / analytic;
        ok = ok && ratio >= 0.5 && ratio <= 2.0;
        d += fmt("p2=%.2f bootstrap/binomial=%.3f ", p2, ratio);
    }
    return {ok, d};
}

Verdict connected_correlation_check() {
    auto l = build_strip(5);
    PrepRunner runner(l, NoiseModel{});
    double ideal = connected_correlation(runner.prepare(1, 0), l);
    StabilizerTableau product(l.num_qubits());
    for (uint32_t q = 0; q < l.num_data(); ++q) product.h(q);
    double prod = connected_correlation(product, l);
    AdaptiveCircuit pre;
    for (const auto &r : runner.circuit().qregs()) pre.add_qreg(r.name, r.width);
    for (const auto &r : runner.circuit().cregs()) pre.add_creg(r.name, r.width);
    for (const auto &inst : runner.circuit().instructions()) {
        if (std::holds_alternative<CondGateOp>(inst)) break;
        pre.push(inst);
    }
    size_t agree = 0, odd = 0;
    for (uint64_t s = 0; s < 64; ++s) {
        StabilizerTableau t(l.num_qubits());
        ShotRng rng(12, s);
        auto res = execute(pre, t, rng);
        int parity = 0;
        for (size_t k = 0; k < 7; ++k) parity ^= res.cbits[k];
        odd += parity;
        agree += connected_correlation(t, l) == (parity ? -1.0 : 1.0);
    }
    bool ok = ideal == 1.0 && prod == 0.0 && agree == 64 && odd > 0 && odd < 64;
    return {ok, fmt("ideal %.3f, product %.3f, pre-correction %zu/64 match parity (%zu odd)", ideal, prod, agree, odd)};
}

Verdict energy_check() {
    auto l = build_strip(5);
    double ideal = energy(PrepRunner(l, NoiseModel{}).prepare(1, 0), l);
    StabilizerTableau product(l.num_qubits());
    for (uint32_t q = 0; q < l.num_data(); ++q) product.h(q);
    double prod = energy(product, l);
    return {ideal == -11.0 && prod == -4.0, fmt("ideal %.3f, product input %.3f", ideal, prod)};
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Acceptance checks"};
    std::vector<int> expect_fail;
    app.add_option("--expect-fail", expect_fail, "Criteria known to fail");
    CLI11_PARSE(app, argc, argv);

    struct Criterion {
        int id;
        const char *name;
        std::function<Verdict()> run;
        double budget_s;  // 0: none
    };
    const std::vector<Criterion> criteria = {
        {1, "exact preparation", exact_preparation, 10},
        {2, "constant depth", constant_depth, 0},
        {3, "fidelity ceiling", ceiling, 0},
        {4, "causal cones", cones, 0},
        {5, "calibrated noise", calibrated_noise, 60},
        {6, "estimator inequality", estimator_inequality, 0},
        {7, "correction universality", correction_universality, 0},
        {8, "syndrome law", syndrome_law, 0},
        {9, "oracle equivalence", oracle_equivalence, 0},
        {10, "bootstrap", bootstrap, 0},
        {11, "connected correlation", connected_correlation_check, 0},
        {12, "energy", energy_check, 0},
    };

    std::set<int> failed;
    for (const auto &c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && secs >= c.budget_s) {
            v.pass = false;
            v.detail += fmt(" (over the %.0f s budget)", c.budget_s);
        }
        if (!v.pass) failed.insert(c.id);
        std::printf("%s %2d %-24s %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
        std::fflush(stdout);
    }

    std::set<int> expected(expect_fail.begin(), expect_fail.end());
    std::printf("%zu/%zu criteria pass\n", criteria.size() - failed.size(), criteria.size());
    if (failed == expected) return 0;
    for (int id : failed)
        if (!expected.count(id)) std::printf("unexpected failure: %d\n", id);
    for (int id : expected)
        if (!failed.count(id)) std::printf("expected failure now passes: %d\n", id);
    return 1;
}
