#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sccc/bounds.hpp"
#include "sccc/design.hpp"

using namespace sccc;

namespace {

// small complete design used across these tests
SCCCDesign toy_design(uint64_t interleaver_seed, std::vector<int> p_prime_del = {},
                      std::vector<int> p_ip_del = {}) {
    const int sections = 4;  // (1,5/7): 2 free + 2 termination
    auto p_o = PuncturePattern::from_list(8, {3, 7});  // N = 6
    auto p_prime = PuncturePattern::from_list(8, std::move(p_prime_del));
    auto p_ip = PuncturePattern::from_list(6, std::move(p_ip_del));
    return make_design("1,5/7", p_o, sections, "1,5/7", p_prime, p_ip,
                       random_interleaver(6, interleaver_seed));
}

EnumCaps full_caps{16, 40, 40, 8};

SCCCSpectrum compose_toy(const SCCCDesign& d, ComposeMode mode) {
    auto outer = design_outer_enumerator(d, full_caps);
    EnumCaps icaps = full_caps;
    auto inner = design_inner_enumerator(d, icaps);
    return compose_uniform(outer, inner, d.n, mode);
}

}  // namespace

TEST_CASE("exact composition equals the brute-force interleaver average") {
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
        auto d = toy_design(seed, {0, 4}, {2, 5});
        auto spec = compose_toy(d, ComposeMode::ExactBinomial);
        auto oracle = design_oracle_spectrum(d);
        for (const auto& [key, v] : oracle) {
            auto it = spec.coeff.find(key);
            BigRat got = it == spec.coeff.end() ? BigRat(0) : it->second;
            CHECK(got == v);
        }
        for (const auto& [key, v] : spec.coeff)
            if (v != 0) CHECK(oracle.count(key) == 1);
    }
}

TEST_CASE("paper-approx coefficients dominate the exact ones") {
    auto d = toy_design(5, {0}, {1, 3});
    auto exact = compose_toy(d, ComposeMode::ExactBinomial);
    auto approx = compose_toy(d, ComposeMode::PaperApprox);
    for (const auto& [key, v] : exact.coeff) {
        if (key.first == 0) continue;
        auto it = approx.coeff.find(key);
        REQUIRE(it != approx.coeff.end());
        CHECK(it->second >= v);
    }
}

TEST_CASE("disjoint weight support composes to an empty spectrum") {
    // outer table with l-support {3}, inner with iw-support {2} only
    JointWeightTable outer, inner;
    outer.caps = EnumCaps{4, 8, 8, 4};
    inner.caps = EnumCaps{4, 8, 0, 4};
    outer.free_sections = 10;
    inner.free_sections = 10;
    outer.entries.push_back(WeightEntry{2, 3, 3, 1, false, 5});
    inner.entries.push_back(WeightEntry{2, 4, 0, 1, false, 7});
    auto spec = compose_uniform(outer, inner, 10, ComposeMode::ExactBinomial);
    bool any = false;
    for (auto& [k, v] : spec.coeff) any = any || v != 0;
    CHECK(!any);
}

TEST_CASE("single-term spectrum gives the kernel curve exactly") {
    SCCCSpectrum spec;
    spec.n_interleaver = 10;
    spec.coeff[{1, 5}] = 1;
    const int k_info = 8;
    std::vector<double> grid{0.0, 2.0, 4.0};
    BigRat r(1, 2);
    auto bit = union_bound_bit(spec, r, k_info, grid, BoundKernel::Exponential);
    auto frame = union_bound_frame(spec, r, grid, BoundKernel::Exponential);
    for (size_t i = 0; i < grid.size(); ++i) {
        double x = 5 * 0.5 * std::pow(10.0, grid[i] / 10.0);
        CHECK(frame.points[i].second == doctest::Approx(std::exp(-x)).epsilon(1e-12));
        CHECK(bit.points[i].second ==
              doctest::Approx(std::exp(-x) / k_info).epsilon(1e-12));
    }
    auto erfc = union_bound_frame(spec, r, grid, BoundKernel::Erfc);
    for (size_t i = 0; i < grid.size(); ++i) {
        double x = 5 * 0.5 * std::pow(10.0, grid[i] / 10.0);
        CHECK(erfc.points[i].second ==
              doctest::Approx(0.5 * std::erfc(std::sqrt(x))).epsilon(1e-12));
        CHECK(erfc.points[i].second <= frame.points[i].second);  // Chernoff dominates
    }
}

TEST_CASE("bound curves decrease in Eb/N0 and the frame bound dominates the bit bound") {
    auto d = toy_design(9, {0, 2}, {1});
    auto spec = compose_toy(d, ComposeMode::ExactBinomial);
    std::vector<double> grid;
    for (double v = 0; v <= 8; v += 0.5) grid.push_back(v);
    auto bit = union_bound_bit(spec, d.r_sccc, d.k_info, grid, BoundKernel::Exponential);
    auto frame = union_bound_frame(spec, d.r_sccc, grid, BoundKernel::Exponential);
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        CHECK(frame.points[i].second > frame.points[i + 1].second);
        CHECK(bit.points[i].second > bit.points[i + 1].second);
    }
    for (size_t i = 0; i < grid.size(); ++i)
        CHECK(frame.points[i].second >= bit.points[i].second);
}

TEST_CASE("cumulative spectrum is zero below h_m and reaches the full mass") {
    auto d = toy_design(11, {4}, {0, 2});
    auto spec = compose_toy(d, ComposeMode::ExactBinomial);
    auto cum = cumulative_spectrum(spec);
    auto hm = spec.h_min();
    REQUIRE(hm.has_value());
    BigRat total;
    for (const auto& [key, v] : spec.coeff)
        if (key.first > 0) total += v;
    BigRat prev = 0;
    for (const auto& [d_val, v] : cum) {
        if (d_val < *hm) CHECK(v == 0);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(cum.back().second == total);
}

TEST_CASE("exponent support obeys the free-distance ceiling") {
    // alpha(h_m) <= 1 - d_f^{o'}; needs a frame long enough for closed events
    const int sections = 20;
    auto p_o = PuncturePattern::periodic(2 * sections, "1110");
    auto d = make_design("1,5/7", p_o, sections, "1,5/7",
                         PuncturePattern::from_list(2 * sections, {1, 4}),
                         PuncturePattern::from_list(p_o.num_kept(), {0, 3, 9}),
                         random_interleaver(p_o.num_kept(), 21));
    EnumCaps caps{8, 20, 20, 6};
    auto outer = design_outer_enumerator(d, caps);
    auto inner = design_inner_enumerator(d, caps);
    auto sup = exponent_support(outer, inner);
    auto sum = distance_summary(outer, inner, true);
    auto spec = compose_uniform(outer, inner, d.n, ComposeMode::ExactBinomial);
    auto hm = spec.h_min();
    REQUIRE(hm.has_value());
    REQUIRE(sup.alpha_of_h.count(*hm));
    CHECK(sup.alpha_of_h.at(*hm) <= 1 - sum.d_f_o_prime);
}

TEST_CASE("asymptotic report branch selection") {
    DistanceSummary s;
    s.d_f_eff_inner = 3;
    s.h_m3 = 2;

    SUBCASE("even free distance") {
        s.d_f_o_prime = 4;
        s.d_f_o_dprime = 2;
        s.d_odprime_at[4] = 3;
        s.d_odprime_at_dfoprime = 3;
        auto rep = asymptotic_report(s);
        CHECK(rep.alpha_m == -2);
        CHECK(rep.h_alpha_m == 4 * 3 / 2 + 3);
        CHECK(rep.h_alpha_m_lower == 4 * 3 / 2 + 2);
        CHECK(rep.branch == "even:l=d_f^{o'}");
    }
    SUBCASE("d_f = 3 takes the minimum over the three candidate weights") {
        s.d_f_o_prime = 3;
        s.d_f_o_dprime = 1;
        s.d_odprime_at[3] = 4;
        s.d_odprime_at[4] = 1;
        s.d_odprime_at_dfoprime = 4;
        auto rep = asymptotic_report(s);
        CHECK(rep.alpha_m == -2);
        // candidates: 2+4=6 (l=3), 2*3+1=7 (l=4), 3*3+8=17 (l=6)
        CHECK(rep.h_alpha_m == 6);
        CHECK(rep.branch == "odd:l=3");
        s.h_m3 = 6;
        auto rep2 = asymptotic_report(s);
        // now l=4 wins: min(6+4, 7, 9+8) = 7
        CHECK(rep2.h_alpha_m == 7);
        CHECK(rep2.branch == "odd:l=4");
    }
    SUBCASE("generic odd free distance") {
        s.d_f_o_prime = 5;
        s.d_f_o_dprime = 2;
        s.d_odprime_at[5] = 3;
        s.d_odprime_at_dfoprime = 3;
        auto rep = asymptotic_report(s);
        CHECK(rep.alpha_m == -3);
        CHECK(rep.h_alpha_m == (5 - 3) * 3 / 2 + 2 + 3);
    }
}

TEST_CASE("conservation of the composed spectrum per input weight") {
    auto d = toy_design(17, {0}, {3});
    auto spec = compose_toy(d, ComposeMode::ExactBinomial);
    std::map<int, BigRat> by_w;
    for (const auto& [key, v] : spec.coeff) by_w[key.first] += v;
    for (int w = 0; w <= d.k_info; ++w) CHECK(by_w[w] == BigRat(binomial(d.k_info, w)));
}
