#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "gqlc/bp.hpp"
#include "gqlc/code.hpp"
#include "oracles.hpp"

using namespace gqlc;

namespace {

BitMatrix from_rows(const std::vector<std::vector<int>>& rows) {
    BitMatrix m(int(rows.size()), int(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[0].size(); ++c) m.set(int(r), int(c), rows[r][c] != 0);
    return m;
}

}  // namespace

TEST_CASE("all-zero input stays all-zero") {
    const auto h = from_rows({{1, 1, 1, 0}, {0, 1, 1, 1}});
    const auto res = bp_decode(h, std::vector<double>(4, 0.0), BpConfig{.iterations = 4});
    for (double x : res.lambda_out) CHECK(x == 0.0);
    CHECK(res.hard.popcount() == 0);  // ties decode to bit 0
}

TEST_CASE("single parity check, one iteration") {
    // frozen from the scalar formula: mu = 2*atanh(tanh(1)*tanh(-1))
    const double mu = 2.0 * std::atanh(std::tanh(1.0) * std::tanh(-1.0));
    const auto h = from_rows({{1, 1, 1}});
    const std::vector<double> llr = {2.0, 2.0, -2.0};
    const auto res = bp_decode(h, llr, BpConfig{.iterations = 1});
    CHECK(res.lambda_out[0] == doctest::Approx(2.0 + mu).epsilon(1e-12));
    CHECK(mu == doctest::Approx(-1.3250027474).epsilon(1e-9));
    CHECK(res.lambda_out[0] == doctest::Approx(0.6749972526).epsilon(1e-9));
}

TEST_CASE("degree-2 check forwards the other LLR") {
    // 2*atanh(tanh(x/2)) = x, so each side receives the other's LLR
    const auto h = from_rows({{1, 1}});
    const auto res = bp_decode(h, std::vector<double>{3.0, -1.0}, BpConfig{.iterations = 1});
    CHECK(res.lambda_out[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(res.lambda_out[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("matches the scalar sum-product oracle on random codes") {
    Rng rng(404);
    for (int t = 0; t < 60; ++t) {
        const int n = 4 + int(rng.next_below(9));
        const int k = 1 + int(rng.next_below(std::uint64_t(n - 1)));
        const auto h = sample_w({n, k}, {0.4}, rng.next_u64()).standard_form();
        std::vector<double> llr(std::size_t(n), 0.0);
        for (auto& x : llr) x = 4.0 * rng.next_unit() - 2.0;
        const int iters = 1 + int(rng.next_below(4));

        const auto res = bp_decode(h, llr, BpConfig{.iterations = iters});
        const auto ref = oracle::sum_product(oracle::to_int_matrix(h), llr, iters, 1e-7);
        for (int v = 0; v < n; ++v)
            CHECK(res.lambda_out[std::size_t(v)] == doctest::Approx(ref[std::size_t(v)]).epsilon(1e-9));
    }
}

TEST_CASE("sign symmetry: decode(-llr) = -decode(llr) on even-degree checks") {
    // negating every llr negates each leave-one-out product only when check
    // degrees are even (all-ones must be a codeword), so force that
    Rng rng(99);
    auto pcm = sample_w({12, 6}, {0.35}, 5);
    for (int c = 0; c < 6; ++c)
        if (pcm.w().row_weight(c) % 2 == 0) pcm.set_w_bit(c, 0, !pcm.w_bit(c, 0));
    const auto h = pcm.standard_form();
    for (int r = 0; r < 6; ++r) REQUIRE(h.row_weight(r) % 2 == 0);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> llr(12), neg(12);
        for (int v = 0; v < 12; ++v) {
            llr[std::size_t(v)] = 6.0 * rng.next_unit() - 3.0;
            neg[std::size_t(v)] = -llr[std::size_t(v)];
        }
        const auto a = bp_decode(h, llr, BpConfig{.iterations = 3});
        const auto b = bp_decode(h, neg, BpConfig{.iterations = 3});
        for (int v = 0; v < 12; ++v)
            CHECK(a.lambda_out[std::size_t(v)] ==
                  doctest::Approx(-b.lambda_out[std::size_t(v)]).epsilon(1e-12));
    }
}

TEST_CASE("messages stay finite for long runs") {
    Rng rng(1);
    const auto h = sample_w({16, 8}, {0.5}, 9).standard_form();
    std::vector<double> llr(16);
    for (auto& x : llr) x = 5.0 * (rng.next_unit() - 0.5);
    const auto res = bp_decode(h, llr, BpConfig{.iterations = 200});
    for (double x : res.lambda_out) CHECK(std::isfinite(x));
}

TEST_CASE("message clamp bounds check messages") {
    // unclamped the check message would be 2*atanh(1 - eps) ~ 16.8
    const auto h = from_rows({{1, 1}});
    const auto res =
        bp_decode(h, std::vector<double>{50.0, 50.0}, BpConfig{.iterations = 1, .message_clamp = 5.0});
    CHECK(res.lambda_out[0] == doctest::Approx(55.0).epsilon(1e-12));
}

TEST_CASE("noiseless codewords decode to themselves after one iteration") {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        const auto pcm = sample_w({12, 7}, {0.4}, rng.next_u64());
        const auto g = build_generator(pcm);
        BitVec u(7);
        for (int i = 0; i < 7; ++i) u.set(i, rng.next_bernoulli(0.5));
        const auto c = encode(g, u);
        std::vector<double> llr(12);
        for (int v = 0; v < 12; ++v) llr[std::size_t(v)] = c.get(v) ? -12.0 : 12.0;
        const auto res = bp_decode(pcm.codeword_form(), llr, BpConfig{.iterations = 1});
        CHECK(res.hard == c);
    }
}

TEST_CASE("hard decision tie breaks to zero") {
    const auto h = from_rows({{1, 1}});
    const auto res = bp_decode(h, std::vector<double>{0.0, 0.0}, BpConfig{.iterations = 1});
    CHECK(!res.hard.get(0));
    CHECK(!res.hard.get(1));
}

TEST_CASE("bad inputs throw") {
    const auto h = from_rows({{1, 1}});
    CHECK_THROWS_AS(bp_decode(h, std::vector<double>(3, 0.0), BpConfig{}), std::invalid_argument);
    CHECK_THROWS_AS(bp_decode(h, std::vector<double>(2, 0.0), BpConfig{.iterations = 0}),
                    std::invalid_argument);
}
