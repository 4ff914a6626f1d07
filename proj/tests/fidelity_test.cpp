#include <gtest/gtest.h>

#include <cmath>
#include <regex>

#include "aprep/error.hpp"
#include "aprep/fidelity.hpp"

using namespace aprep;

namespace {

ShotRecord shot(uint64_t i, Basis b, std::vector<uint8_t> bits) {
    ShotRecord r;
    r.shot_index = i;
    r.basis = b;
    r.syndrome.assign(7, 0);
    r.final_bits = std::move(bits);
    return r;
}

// X shots all pass; the first `z_fail` Z shots carry a -1 on d(0,0).
std::vector<ShotRecord> synthetic(uint64_t nx, uint64_t nz, uint64_t z_fail) {
    std::vector<ShotRecord> out;
    for (uint64_t i = 0; i < nx; ++i) out.push_back(shot(i, Basis::kX, std::vector<uint8_t>(12, 0)));
    for (uint64_t i = 0; i < nz; ++i) {
        std::vector<uint8_t> bits(12, 0);
        bits[0] = i < z_fail;
        out.push_back(shot(nx + i, Basis::kZ, bits));
    }
    return out;
}

}  // namespace

TEST(Indicator, Examples) {
    auto l = build_strip(5);
    std::vector<std::vector<uint32_t>> xs;
    for (const auto &s : l.x_stabilizers) xs.push_back(s.support);
    xs.push_back(l.logical_x);
    std::vector<uint8_t> bits(12, 0);
    EXPECT_TRUE(projector_indicator(bits, xs));
    bits[0] = 1;
    EXPECT_FALSE(projector_indicator(bits, xs));
    // d(0,0) and d(1,0): XL sees both, X-bar sees one
    bits[l.data_index(1, 0)] = 1;
    EXPECT_FALSE(projector_indicator(bits, xs));
    std::vector<uint8_t> row(12, 0);
    for (uint32_t q : l.logical_x) row[q] = 1;
    EXPECT_FALSE(projector_indicator(row, xs));
    EXPECT_TRUE(projector_indicator(bits, std::vector<std::vector<uint32_t>>{}));
    EXPECT_THROW(projector_indicator(std::vector<uint8_t>(3, 0), xs), InvalidArgument);
}

TEST(Estimate, NoiselessIsOne) {
    auto l = build_strip(5);
    auto records = synthetic(1000, 1000, 0);
    auto e = estimate_with_bootstrap(records, l, 100, 3);
    EXPECT_EQ(e.px_hat, 1.0);
    EXPECT_EQ(e.pz_hat, 1.0);
    EXPECT_EQ(e.lower_bound, 1.0);
    EXPECT_EQ(e.sigma, 0.0);
    EXPECT_EQ(format_with_uncertainty(e.lower_bound, e.sigma), "1.000(0)");
    EXPECT_EQ(e.logical_x_fid, 1.0);
    EXPECT_EQ(e.per_stabilizer.size(), 11u);
}

TEST(Estimate, KnownProportions) {
    auto l = build_strip(5);
    auto records = synthetic(1000, 1000, 231);
    auto e = estimate_with_bootstrap(records, l, 100, 7);
    EXPECT_EQ(e.n_x, 1000u);
    EXPECT_EQ(e.n_z, 1000u);
    EXPECT_DOUBLE_EQ(e.lower_bound, 0.769);
    double binomial = std::sqrt(0.769 * 0.231 / 1000);
    EXPECT_GT(e.sigma, binomial / 2);
    EXPECT_LT(e.sigma, binomial * 2);
    EXPECT_TRUE(std::regex_match(format_with_uncertainty(e.lower_bound, e.sigma), std::regex(R"(0\.769\(\d{1,2}\))")));
    for (const auto &[id, v] : e.per_stabilizer) {
        if (id == "P0") EXPECT_DOUBLE_EQ(v, 0.769);
        else EXPECT_DOUBLE_EQ(v, 1.0) << id;
    }
}

TEST(Estimate, BootstrapIsSeeded) {
    auto l = build_strip(5);
    auto records = synthetic(200, 200, 50);
    EXPECT_EQ(bootstrap_sigma(records, l, 50, 11), bootstrap_sigma(records, l, 50, 11));
    EXPECT_NE(bootstrap_sigma(records, l, 50, 11), bootstrap_sigma(records, l, 50, 12));
}

TEST(Estimate, MissingBasisIsADataError) {
    auto l = build_strip(5);
    EXPECT_THROW(estimate(synthetic(10, 0, 0), l), DataError);
    EXPECT_THROW(estimate(synthetic(0, 10, 0), l), DataError);
    auto bad = synthetic(2, 2, 0);
    bad[1].final_bits.resize(5);
    EXPECT_THROW(estimate(bad, l), DataError);
}

TEST(Format, Rounding) {
    EXPECT_EQ(format_with_uncertainty(0.769, 0.0133), "0.769(13)");
    EXPECT_EQ(format_with_uncertainty(0.5, 0.00149), "0.5000(15)");
    EXPECT_EQ(format_with_uncertainty(12.3, 1.26), "12.3(13)");
    EXPECT_EQ(format_with_uncertainty(0.769, 0.0996), "0.77(10)");
    EXPECT_EQ(format_with_uncertainty(0.25, 0.0), "0.250(0)");
}

TEST(ExactFidelity, ProductStates) {
    auto l = build_strip(5);
    StabilizerTableau zero(l.num_qubits());
    EXPECT_DOUBLE_EQ(exact_fidelity(zero, l), std::ldexp(1.0, -5));
    StabilizerTableau plus(l.num_qubits());
    for (uint32_t q = 0; q < l.num_data(); ++q) plus.h(q);
    EXPECT_DOUBLE_EQ(exact_fidelity(plus, l), std::ldexp(1.0, -7));
}

TEST(ExactFidelity, SingleErrorsAndAncillas) {
    auto l = build_strip(5);
    PrepRunner runner(l, NoiseModel{});
    auto t = runner.prepare(1, 0);
    EXPECT_DOUBLE_EQ(exact_fidelity(t, l), 1.0);
    auto hit = t;
    hit.x(0);
    EXPECT_DOUBLE_EQ(exact_fidelity(hit, l), 0.0);
    auto xbar = t;
    for (uint32_t q : l.logical_x) xbar.x(q);
    EXPECT_DOUBLE_EQ(exact_fidelity(xbar, l), 1.0);
    auto zbar = t;
    for (uint32_t q : l.logical_z_left) zbar.z(q);
    EXPECT_DOUBLE_EQ(exact_fidelity(zbar, l), 0.0);
    auto anc = t;
    anc.h(static_cast<size_t>(l.num_data()));
    EXPECT_DOUBLE_EQ(exact_fidelity(anc, l), 1.0);
}

TEST(EstimateJson, Keys) {
    auto l = build_strip(5);
    auto j = estimate_to_json(estimate_with_bootstrap(synthetic(20, 20, 0), l, 10, 1), l);
    for (const char *k : {"layout_id", "px_hat", "pz_hat", "lower_bound", "sigma", "formatted", "per_stabilizer"})
        EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_EQ(j["layout_id"], "strip-L5");
}
