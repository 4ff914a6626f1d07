#include <gtest/gtest.h>

#include <memory>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "aprep/aprep.h"

namespace {

struct Str {
    char *p = nullptr;
    ~Str() { aprep_string_free(p); }
    std::string s() const { return p ? p : ""; }
};

using Json = nlohmann::json;

std::vector<Json> lines(const std::string &text) {
    std::vector<Json> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        if (!l.empty()) out.push_back(Json::parse(l));
    return out;
}

}  // namespace

TEST(CApi, VersionAndLayout) {
    EXPECT_STREQ(aprep_version(), "1.0.0");
    aprep_layout *l = nullptr;
    ASSERT_EQ(aprep_layout_new_strip(5, &l), APREP_OK);
    size_t data = 0, total = 0;
    ASSERT_EQ(aprep_layout_num_qubits(l, &data, &total), APREP_OK);
    EXPECT_EQ(data, 12u);
    EXPECT_EQ(total, 19u);
    Str js;
    ASSERT_EQ(aprep_layout_to_json(l, &js.p), APREP_OK);
    EXPECT_EQ(Json::parse(js.s())["length"], 5);
    aprep_layout_free(l);
}

TEST(CApi, ErrorsBecomeStatuses) {
    aprep_layout *l = nullptr;
    EXPECT_EQ(aprep_layout_new_strip(4, &l), APREP_ERR_USAGE);
    EXPECT_EQ(l, nullptr);
    EXPECT_NE(std::string(aprep_last_error()), "");
    EXPECT_EQ(aprep_layout_new_strip(5, nullptr), APREP_ERR_USAGE);
    Str r;
    EXPECT_EQ(aprep_estimate("{oops", 5, 100, 0, &r.p), APREP_ERR_DATA);
    EXPECT_NE(std::string(aprep_last_error()).find("line 1"), std::string::npos);
    aprep_circuit *c = nullptr;
    EXPECT_EQ(aprep_circuit_parse("qreg q[1];\nfoo q[0];\n", &c), APREP_ERR_DATA);
    EXPECT_NE(std::string(aprep_last_error()).find("2:"), std::string::npos) << aprep_last_error();
}

TEST(CApi, PrepareEstimateRoundTrip) {
    aprep_layout *l = nullptr;
    ASSERT_EQ(aprep_layout_new_strip(5, &l), APREP_OK);
    aprep_prepare_options o;
    aprep_prepare_options_default(&o);
    EXPECT_EQ(o.shots_x, 1000u);
    EXPECT_EQ(o.shots_z, 1000u);
    o.shots_x = o.shots_z = 100;
    o.seed = 42;
    Str a, b;
    ASSERT_EQ(aprep_prepare(l, &o, &a.p), APREP_OK);
    o.threads = 3;
    ASSERT_EQ(aprep_prepare(l, &o, &b.p), APREP_OK);
    EXPECT_EQ(a.s(), b.s());
    auto recs = lines(a.s());
    ASSERT_EQ(recs.size(), 201u);
    EXPECT_EQ(recs[0]["type"], "manifest");
    Str rep;
    ASSERT_EQ(aprep_estimate(a.p, 0, 100, 42, &rep.p), APREP_OK);
    auto j = Json::parse(rep.s());
    EXPECT_EQ(j["lower_bound"], 1.0);
    EXPECT_EQ(j["formatted"], "1.000(0)");
    EXPECT_EQ(j["plaquettes"].size(), 11u);
    Str wrong;
    EXPECT_EQ(aprep_estimate(a.p, 3, 100, 42, &wrong.p), APREP_ERR_DATA);
    o.shots_x = 0;
    Str z;
    EXPECT_EQ(aprep_prepare(l, &o, &z.p), APREP_ERR_USAGE);
    aprep_layout_free(l);
}

TEST(CApi, BoundReports) {
    Str r5, r3;
    ASSERT_EQ(aprep_bound_report(5, 4, 1e-3, &r5.p), APREP_OK);
    auto j5 = Json::parse(r5.s());
    EXPECT_EQ(j5["disjoint"], true);
    EXPECT_NEAR(j5["ceiling"].get<double>(), 0.5, 1e-9);
    ASSERT_EQ(aprep_bound_report(3, 4, 1e-2, &r3.p), APREP_OK);
    auto j3 = Json::parse(r3.s());
    EXPECT_EQ(j3["disjoint"], false);
    EXPECT_TRUE(j3["ceiling"].is_null());
    Str bad;
    EXPECT_EQ(aprep_bound_report(5, 4, 0.5, &bad.p), APREP_ERR_USAGE);
}

TEST(CApi, OracleCheck) {
    Str r;
    int passed = 0;
    ASSERT_EQ(aprep_oracle_check(1, 500, 1, 0, &r.p, &passed), APREP_OK);
    EXPECT_EQ(passed, 1);
    Str bad;
    ASSERT_EQ(aprep_oracle_check(1, 500, 1, 1, &bad.p, &passed), APREP_OK);
    EXPECT_EQ(passed, 0);
    Str big;
    EXPECT_EQ(aprep_oracle_check(7, 10, 1, 0, &big.p, &passed), APREP_ERR_USAGE);
}

TEST(CApi, CircuitRunFeedForward) {
    aprep_circuit *c = nullptr;
    ASSERT_EQ(aprep_circuit_parse("qreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\nmeasure q[1] -> c[0];\n"
                                  "if (c[0]==1) x q[0];\nif (c[0]==1) x q[1];\nmeasure q[0] -> c[1];\n",
                                  &c),
              APREP_OK);
    size_t d = 0;
    ASSERT_EQ(aprep_circuit_depth(c, &d), APREP_OK);
    EXPECT_EQ(d, 1u);
    Str trace;
    ASSERT_EQ(aprep_circuit_run(c, 400, 9, nullptr, &trace.p), APREP_OK);
    auto recs = lines(trace.s());
    ASSERT_EQ(recs.size(), 401u);
    for (size_t i = 0; i < 400; ++i) EXPECT_EQ(recs[i]["registers"]["c"].get<std::string>()[1], '0');
    auto ones = recs.back()["ones"]["c[0]"].get<uint64_t>();
    EXPECT_GT(ones, 150u);
    EXPECT_LT(ones, 250u);
    Str text;
    ASSERT_EQ(aprep_circuit_serialize(c, &text.p), APREP_OK);
    aprep_circuit *again = nullptr;
    ASSERT_EQ(aprep_circuit_parse(text.p, &again), APREP_OK);
    aprep_circuit_free(again);
    aprep_circuit_free(c);
}

TEST(CApi, EmptyProgramEmptyTrace) {
    aprep_circuit *c = nullptr;
    ASSERT_EQ(aprep_circuit_parse("", &c), APREP_OK);
    Str trace;
    ASSERT_EQ(aprep_circuit_run(c, 10, 1, nullptr, &trace.p), APREP_OK);
    EXPECT_EQ(trace.s(), "");
    aprep_circuit_free(c);
}

TEST(CApi, PrepCircuitDepth) {
    aprep_layout *l = nullptr;
    ASSERT_EQ(aprep_layout_new_strip(7, &l), APREP_OK);
    for (auto k : {APREP_CORRECTION_CHAIN, APREP_CORRECTION_GF2}) {
        aprep_circuit *c = nullptr;
        ASSERT_EQ(aprep_prep_circuit(l, k, &c), APREP_OK);
        size_t d = 0;
        aprep_circuit_depth(c, &d);
        EXPECT_EQ(d, 4u);
        aprep_circuit_free(c);
    }
    aprep_layout_free(l);
}
