#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sccc/trellis.hpp"

using namespace sccc;

namespace {

// independent reference: direct shift-register recursion over the feedback
// register values a_t
BitVec lfsr_encode(const GeneratorSpec& spec, const BitVec& info, bool terminate) {
    const int nu = spec.memory();
    std::vector<uint8_t> a_hist;  // a_{t-1} at back
    BitVec out;
    auto step = [&](int u_or_forced, bool forced) {
        uint8_t fb_taps = 0;
        for (int i = 1; i <= nu; ++i)
            if ((spec.feedback >> i) & 1u)
                fb_taps ^= a_hist.size() >= static_cast<size_t>(i)
                               ? a_hist[a_hist.size() - static_cast<size_t>(i)]
                               : 0;
        uint8_t u = forced ? fb_taps : static_cast<uint8_t>(u_or_forced);
        uint8_t a = u ^ fb_taps;
        if (spec.systematic) out.push_back(u);
        for (unsigned fwd : spec.forward) {
            uint8_t y = (fwd & 1u) ? a : 0;
            for (int i = 1; i <= nu; ++i)
                if ((fwd >> i) & 1u)
                    y ^= a_hist.size() >= static_cast<size_t>(i)
                             ? a_hist[a_hist.size() - static_cast<size_t>(i)]
                             : 0;
            out.push_back(y);
        }
        a_hist.push_back(a);
    };
    for (uint8_t u : info) step(u, false);
    if (terminate)
        for (int k = 0; k < nu; ++k) step(0, true);
    return out;
}

BitVec random_bits(size_t n, uint32_t& state) {
    BitVec v(n);
    for (auto& b : v) {
        state = state * 1664525u + 1013904223u;
        b = (state >> 16) & 1u;
    }
    return v;
}

}  // namespace

TEST_CASE("generator spec parsing") {
    auto s = GeneratorSpec::parse("1,5/7");
    CHECK(s.systematic);
    CHECK(s.feedback == 07);
    REQUIRE(s.forward.size() == 1);
    CHECK(s.forward[0] == 05);
    CHECK(s.memory() == 2);
    CHECK(s.n_out() == 2);

    auto s8 = GeneratorSpec::parse("1,17/15");
    CHECK(s8.memory() == 3);
    CHECK(build_trellis(s8).num_states() == 8);

    auto s1 = GeneratorSpec::parse("1,1/1");
    CHECK(s1.memory() == 0);
    CHECK(build_trellis(s1).num_states() == 1);

    CHECK_THROWS_AS(GeneratorSpec::parse("1,5/6"), ConfigError);  // even feedback
    CHECK_THROWS_AS(GeneratorSpec::parse("5/9"), ConfigError);    // 9 is not octal
}

TEST_CASE("memoryless code repeats its input") {
    auto t = build_trellis(GeneratorSpec::parse("1,1/1"));
    BitVec info{1, 0, 1, 1};
    auto cw = encode(t, info, true);
    REQUIRE(cw.bits.size() == 8);
    for (size_t i = 0; i < info.size(); ++i) {
        CHECK(cw.bits[2 * i] == info[i]);
        CHECK(cw.bits[2 * i + 1] == info[i]);
    }
}

TEST_CASE("all-zero input encodes to the all-zero terminated codeword") {
    auto t = build_trellis(GeneratorSpec::parse("1,5/7"));
    BitVec zeros(9, 0);
    auto cw = encode(t, zeros, true);
    CHECK(weight(cw.bits) == 0);
    CHECK(cw.sections == 11);
}

TEST_CASE("trellis encoding equals shift-register encoding") {
    uint32_t rng = 12345;
    for (const char* gens : {"1,5/7", "1,7/5", "1,17/15", "1,5/7,3/7", "1,35/23"}) {
        auto spec = GeneratorSpec::parse(gens);
        auto t = build_trellis(spec);
        for (int trial = 0; trial < 40; ++trial) {
            BitVec info = random_bits(1 + (rng >> 20) % 16, rng);
            for (bool term : {false, true}) {
                auto cw = encode(t, info, term);
                auto ref = lfsr_encode(spec, info, term);
                CHECK(cw.bits == ref);
            }
        }
    }
}

TEST_CASE("terminated encoding always ends in state zero") {
    uint32_t rng = 99;
    for (const char* gens : {"1,5/7", "1,17/15"}) {
        auto t = build_trellis(GeneratorSpec::parse(gens));
        for (int trial = 0; trial < 25; ++trial) {
            BitVec info = random_bits(3 + (rng >> 18) % 12, rng);
            auto cw = encode(t, info, true);
            // replay all sections including the tail through the trellis
            BitVec all_inputs;
            for (int sec = 0; sec < cw.sections; ++sec)
                all_inputs.push_back(cw.bits[static_cast<size_t>(sec) * 2]);  // systematic
            CHECK(encode_final_state(t, all_inputs) == 0);
        }
    }
}

TEST_CASE("recursive encoder: single one never returns to zero unterminated") {
    auto t = build_trellis(GeneratorSpec::parse("1,5/7"));
    BitVec info(6, 0);
    info[0] = 1;
    auto cw = encode(t, info, false);
    // parity keeps toggling: the IIR response never dies out
    int parity_weight = 0;
    for (size_t i = 1; i < cw.bits.size(); i += 2) parity_weight += cw.bits[i];
    CHECK(parity_weight >= 3);
    CHECK(encode_final_state(t, info) != 0);
}

TEST_CASE("linearity of terminated encoding") {
    uint32_t rng = 777;
    auto t = build_trellis(GeneratorSpec::parse("1,5/7"));
    for (int trial = 0; trial < 30; ++trial) {
        BitVec a = random_bits(12, rng), b = random_bits(12, rng), x(12);
        for (int i = 0; i < 12; ++i) x[static_cast<size_t>(i)] = a[static_cast<size_t>(i)] ^
                                                                 b[static_cast<size_t>(i)];
        auto ca = encode(t, a, true), cb = encode(t, b, true), cx = encode(t, x, true);
        for (size_t i = 0; i < cx.bits.size(); ++i)
            CHECK(cx.bits[i] == (ca.bits[i] ^ cb.bits[i]));
    }
}

TEST_CASE("golden codeword for a one-followed-by-zeros frame") {
    // frozen from the shift-register reference encoder
    auto t = build_trellis(GeneratorSpec::parse("1,5/7"));
    BitVec info{1, 0, 0, 0};
    auto ref = lfsr_encode(GeneratorSpec::parse("1,5/7"), info, true);
    auto cw = encode(t, info, true);
    CHECK(cw.bits == ref);
    CHECK(cw.bits == BitVec{1, 1, 0, 1, 0, 1, 0, 0, 1, 0, 1, 1});
}

TEST_CASE("single error event weights of the unpunctured code") {
    auto t = build_trellis(GeneratorSpec::parse("1,5/7"));
    auto ev = min_event_weights(t, 4, 12, 40);
    CHECK(ev.at(1).unbounded_at_cap);  // recursive: weight-1 events never close
    CHECK(ev.at(2).d == 6);            // effective free distance of the rate-1/2 code
    CHECK(ev.at(3).d == 5);            // the 111 event: 3 systematic + parity 101
    // parity-only view
    BitVec parity_mask(80, 0);
    for (size_t i = 1; i < parity_mask.size(); i += 2) parity_mask[i] = 1;
    auto evp = min_event_weights(t, 4, 12, 40, parity_mask);
    CHECK(evp.at(2).d == 4);
    CHECK(evp.at(3).d == 2);
    // deleting every parity bit leaves zero-weight events
    BitVec none(80, 0);
    auto ev0 = min_event_weights(t, 2, 12, 40, none);
    CHECK(ev0.at(2).d == 0);
    CHECK(ev0.at(2).multiplicity > 0);
}

TEST_CASE("folded trellis matches bitwise encoding") {
    auto t = build_trellis(GeneratorSpec::parse("1,5/7"));
    auto t2 = fold_trellis(t, 2);
    CHECK(t2.bits_per_step() == 2);
    CHECK(t2.out_per_step() == 4);
    uint32_t rng = 4242;
    for (int trial = 0; trial < 20; ++trial) {
        BitVec info = random_bits(10, rng);
        auto a = encode(t, info, false);
        auto b = encode(t2, info, false);
        CHECK(a.bits == b.bits);
    }
}
