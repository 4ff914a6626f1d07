#include <gtest/gtest.h>

#include <complex>

#include "aprep/pauli.hpp"
#include "aprep/rng.hpp"

using namespace aprep;
using Mat = std::vector<std::vector<std::complex<double>>>;

namespace {

// Dense matrix of a Pauli string; qubit 0 is the least-significant index bit.
Mat to_matrix(const PauliString &p) {
    const std::complex<double> I(0, 1);
    const Mat id = {{1, 0}, {0, 1}}, x = {{0, 1}, {1, 0}}, y = {{0, -I}, {I, 0}}, z = {{1, 0}, {0, -1}};
    const size_t n = p.size(), dim = size_t{1} << n;
    std::complex<double> phase = std::pow(I, static_cast<int>(p.phase_exp()));
    Mat m(dim, std::vector<std::complex<double>>(dim));
    for (size_t r = 0; r < dim; ++r)
        for (size_t c = 0; c < dim; ++c) {
            std::complex<double> v = phase;
            for (size_t q = 0; q < n; ++q) {
                const Mat *s = &id;
                switch (p.at(q)) {
                    case 'X': s = &x; break;
                    case 'Y': s = &y; break;
                    case 'Z': s = &z; break;
                    default: break;
                }
                v *= (*s)[(r >> q) & 1][(c >> q) & 1];
            }
            m[r][c] = v;
        }
    return m;
}

Mat matmul(const Mat &a, const Mat &b) {
    Mat out(a.size(), std::vector<std::complex<double>>(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t k = 0; k < a.size(); ++k)
            for (size_t j = 0; j < a.size(); ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

double distance(const Mat &a, const Mat &b) {
    double d = 0;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
    return d;
}

PauliString random_pauli(size_t n, ShotRng &rng) {
    PauliString p(n);
    for (size_t q = 0; q < n; ++q) p.set(q, rng.next_bit(), rng.next_bit());
    p.set_phase_exp(static_cast<uint8_t>(rng.below(4)));
    return p;
}

}  // namespace

TEST(Pauli, ParseAndPrint) {
    auto p = PauliString::parse("-XZ_Y");
    EXPECT_EQ(p.size(), 4u);
    EXPECT_EQ(p.sign(), -1);
    EXPECT_EQ(p.at(0), 'X');
    EXPECT_EQ(p.at(2), '_');
    EXPECT_EQ(p.at(3), 'Y');
    EXPECT_EQ(p.weight(), 3u);
    EXPECT_EQ(PauliString::parse(p.str()), p);
    auto q = PauliString::parse("iY");
    EXPECT_FALSE(q.is_hermitian());
    EXPECT_EQ(PauliString::parse(q.str()), q);
}

TEST(Pauli, YIsHermitian) {
    auto y = PauliString::parse("Y");
    EXPECT_TRUE(y.is_hermitian());
    auto m = to_matrix(y);
    EXPECT_NEAR(std::abs(m[0][1] - std::complex<double>(0, -1)), 0, 1e-15);
    EXPECT_NEAR(std::abs(m[1][0] - std::complex<double>(0, 1)), 0, 1e-15);
}

TEST(Pauli, SingleQubitProducts) {
    EXPECT_EQ(PauliString::parse("X") * PauliString::parse("Y"), PauliString::parse("iZ"));
    EXPECT_EQ(PauliString::parse("Y") * PauliString::parse("X"), PauliString::parse("-iZ"));
    EXPECT_EQ(PauliString::parse("Z") * PauliString::parse("X"), PauliString::parse("iY"));
    EXPECT_EQ(PauliString::parse("Y") * PauliString::parse("Y"), PauliString::parse("I"));
}

TEST(Pauli, ProductsMatchDenseMatrices) {
    ShotRng rng(2024, 0);
    for (int trial = 0; trial < 300; ++trial) {
        size_t n = 1 + rng.below(3);
        auto a = random_pauli(n, rng), b = random_pauli(n, rng);
        auto prod = a * b;
        EXPECT_LT(distance(to_matrix(prod), matmul(to_matrix(a), to_matrix(b))), 1e-12)
            << a.str() << " * " << b.str() << " = " << prod.str();
        bool commute = distance(matmul(to_matrix(a), to_matrix(b)), matmul(to_matrix(b), to_matrix(a))) < 1e-12;
        EXPECT_EQ(a.commutes(b), commute);
    }
}

TEST(Pauli, Builders) {
    std::vector<uint32_t> s = {0, 2};
    EXPECT_EQ(PauliString::x_on(3, s), PauliString::parse("X_X"));
    EXPECT_EQ(PauliString::z_on(3, s), PauliString::parse("Z_Z"));
    EXPECT_EQ(PauliString::single(3, 1, 'Y'), PauliString::parse("_Y_"));
}
