#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sccc/simulator.hpp"

using namespace sccc;

namespace {

SCCCDesign small_design(uint64_t seed = 3) {
    const int sections = 24;
    auto p_o = PuncturePattern::periodic(2 * sections, "1110");
    auto p_prime = PuncturePattern::from_list(2 * sections, {1, 8});
    const int n = p_o.num_kept();
    auto p_ip = PuncturePattern::from_list(n, {0, 7, 11, 20});
    return make_design("1,5/7", p_o, sections, "1,5/7", p_prime, p_ip,
                       random_interleaver(n, seed));
}

}  // namespace

TEST_CASE("pinned rng produces stable substreams") {
    auto a = Xoshiro256pp::substream(123, 0);
    auto b = Xoshiro256pp::substream(123, 0);
    auto c = Xoshiro256pp::substream(123, 1);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 64; ++i) {
        uint64_t va = a.next(), vb = b.next(), vc = c.next();
        all_equal = all_equal && va == vb;
        any_diff = any_diff || va != vc;
    }
    CHECK(all_equal);
    CHECK(any_diff);

    auto u = Xoshiro256pp::from_seed(7);
    for (int i = 0; i < 1000; ++i) {
        double x = u.uniform01();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        CHECK(u.below(13) < 13);
    }
    // gaussian moments under a fixed seed
    auto g = Xoshiro256pp::from_seed(11);
    double sum = 0, sum2 = 0;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
        double x = g.gaussian();
        sum += x;
        sum2 += x * x;
    }
    CHECK(std::fabs(sum / trials) < 0.02);
    CHECK(std::fabs(sum2 / trials - 1.0) < 0.03);
}

TEST_CASE("channel zeroes punctured positions and flips no signs at high SNR") {
    auto d = small_design();
    BitVec info(static_cast<size_t>(d.k_info), 0);
    uint32_t lc = 5;
    for (auto& b : info) {
        lc = lc * 1664525u + 1013904223u;
        b = (lc >> 16) & 1u;
    }
    auto frame = encode_frame(d, info);
    auto rng = Xoshiro256pp::from_seed(1);
    auto obs = bpsk_awgn(d, frame.inner_out, 25.0, rng);
    const int n_out = d.inner.out_per_step();
    for (size_t pos = 0; pos < obs.llr.size(); ++pos) {
        int t = static_cast<int>(pos) / n_out, k = static_cast<int>(pos) % n_out;
        bool kept = k == 0 ? (t >= d.n || !d.p_i_s.deletes(t))
                           : (t >= d.n || !d.p_i_p.deletes(t));
        if (!kept) {
            CHECK(obs.llr[pos] == 0.0);
        } else {
            CHECK(obs.llr[pos] != 0.0);
            CHECK((obs.llr[pos] < 0) == (frame.inner_out[pos] != 0));
        }
    }
}

TEST_CASE("golden llr stream for a fixed seed") {
    // frozen once from this implementation; guards the rng/gaussian/stream
    // conventions against accidental change
    auto rng = Xoshiro256pp::substream(42, 0);
    double v0 = rng.gaussian();
    double v1 = rng.gaussian();
    double v2 = rng.gaussian();
    CHECK(v0 == doctest::Approx(0.71500761692834003).epsilon(1e-15));
    CHECK(v1 == doctest::Approx(-0.07569840961998453).epsilon(1e-15));
    CHECK(v2 == doctest::Approx(0.31790194815916745).epsilon(1e-15));
}

TEST_CASE("single-section map decoder equals the closed form") {
    // memoryless systematic code: posterior = prior + both observations
    auto t = build_trellis(GeneratorSpec::parse("1,1/1"));
    std::vector<double> in_prior{0.7};
    std::vector<double> out_prior{-0.4, 1.3};
    std::vector<double> in_total(1), out_total(2);
    DecoderConfig cfg;
    siso_map(t, 1, false, in_prior, out_prior, in_total, out_total, cfg);
    CHECK(in_total[0] == doctest::Approx(0.7 - 0.4 + 1.3).epsilon(1e-12));
}

TEST_CASE("zero inputs give zero extrinsics by symmetry") {
    auto t = build_trellis(GeneratorSpec::parse("1,5/7"));
    const int fs = 12;
    std::vector<double> in_prior(fs, 0.0), out_prior((fs + 2) * 2, 0.0);
    DecoderConfig cfg;
    auto ext = siso_decode(t, fs, true, in_prior, out_prior, cfg);
    for (double v : ext.input) CHECK(std::fabs(v) < 1e-9);
    for (double v : ext.output) CHECK(std::fabs(v) < 1e-9);
}

TEST_CASE("saturated noiseless observations reproduce the codeword signs") {
    auto t = build_trellis(GeneratorSpec::parse("1,5/7"));
    const int fs = 16;
    BitVec info(fs, 0);
    uint32_t lc = 77;
    for (auto& b : info) {
        lc = lc * 1664525u + 1013904223u;
        b = (lc >> 13) & 1u;
    }
    auto cw = encode(t, info, true);
    std::vector<double> in_prior(fs, 0.0), out_prior(cw.bits.size());
    for (size_t i = 0; i < cw.bits.size(); ++i) out_prior[i] = cw.bits[i] ? -20.0 : 20.0;
    std::vector<double> in_total(fs), out_total(cw.bits.size());
    DecoderConfig cfg;
    siso_map(t, fs, true, in_prior, out_prior, in_total, out_total, cfg);
    for (int i = 0; i < fs; ++i) CHECK((in_total[static_cast<size_t>(i)] < 0) == (info[static_cast<size_t>(i)] != 0));
    for (size_t i = 0; i < cw.bits.size(); ++i)
        CHECK((out_total[i] < 0) == (cw.bits[i] != 0));
}

TEST_CASE("extrinsic output is invariant to that bit's own prior") {
    auto t = build_trellis(GeneratorSpec::parse("1,5/7"));
    const int fs = 10;
    std::vector<double> in_prior(fs, 0.0), out_prior((fs + 2) * 2, 0.0);
    uint32_t lc = 31;
    for (auto& v : out_prior) {
        lc = lc * 1664525u + 1013904223u;
        v = (static_cast<double>(lc >> 8) / static_cast<double>(1u << 24) - 0.5) * 4.0;
    }
    DecoderConfig cfg;
    auto base = siso_decode(t, fs, true, in_prior, out_prior, cfg);
    in_prior[4] = 2.5;
    auto bumped = siso_decode(t, fs, true, in_prior, out_prior, cfg);
    CHECK(bumped.input[4] == doctest::Approx(base.input[4]).epsilon(1e-9));
}

TEST_CASE("max-log decisions match log-map on strong observations") {
    auto t = build_trellis(GeneratorSpec::parse("1,5/7"));
    const int fs = 12;
    BitVec info(fs, 0);
    info[3] = info[7] = 1;
    auto cw = encode(t, info, true);
    std::vector<double> in_prior(fs, 0.0), out_prior(cw.bits.size());
    for (size_t i = 0; i < cw.bits.size(); ++i) out_prior[i] = cw.bits[i] ? -8.0 : 8.0;
    std::vector<double> t1(fs), t2(fs), o1(cw.bits.size()), o2(cw.bits.size());
    DecoderConfig exact, maxlog;
    maxlog.siso = SisoKind::MaxLogMap;
    siso_map(t, fs, true, in_prior, out_prior, t1, o1, exact);
    siso_map(t, fs, true, in_prior, out_prior, t2, o2, maxlog);
    for (int i = 0; i < fs; ++i) CHECK((t1[static_cast<size_t>(i)] < 0) == (t2[static_cast<size_t>(i)] < 0));
}

TEST_CASE("noiseless iterative decoding recovers the frame in one iteration") {
    auto d = small_design();
    BitVec info(static_cast<size_t>(d.k_info), 0);
    uint32_t lc = 99;
    for (auto& b : info) {
        lc = lc * 1664525u + 1013904223u;
        b = (lc >> 20) & 1u;
    }
    auto frame = encode_frame(d, info);
    ChannelObservation obs;
    obs.llr.assign(frame.inner_out.size(), 0.0);
    const int n_out = d.inner.out_per_step();
    for (size_t pos = 0; pos < obs.llr.size(); ++pos) {
        int t = static_cast<int>(pos) / n_out, k = static_cast<int>(pos) % n_out;
        bool kept = k == 0 ? (t >= d.n || !d.p_i_s.deletes(t))
                           : (t >= d.n || !d.p_i_p.deletes(t));
        if (kept) obs.llr[pos] = frame.inner_out[pos] ? -18.0 : 18.0;
    }
    DecoderConfig cfg;
    cfg.iterations = 1;
    DecodeTelemetry telem;
    auto hat = sccc_iterative_decode(d, obs, cfg, &telem);
    CHECK(hat == info);
    CHECK(telem.iterations_used == 1);

    // all-zero transmission at moderate SNR decodes to all zero
    BitVec zeros(static_cast<size_t>(d.k_info), 0);
    auto zf = encode_frame(d, zeros);
    auto rng = Xoshiro256pp::from_seed(8);
    auto zobs = bpsk_awgn(d, zf.inner_out, 12.0, rng);
    cfg.iterations = 10;
    CHECK(sccc_iterative_decode(d, zobs, cfg) == zeros);
}

TEST_CASE("monte carlo runs are deterministic across reruns and thread counts") {
    auto d = small_design();
    DecoderConfig cfg;
    cfg.iterations = 4;
    SimStop stop;
    stop.min_frame_errors = 8;
    stop.max_frames = 400;
    auto r1 = run_monte_carlo(d, cfg, {1.0, 3.0}, stop, 99, 1, 32);
    auto r2 = run_monte_carlo(d, cfg, {1.0, 3.0}, stop, 99, 2, 32);
    auto r3 = run_monte_carlo(d, cfg, {1.0, 3.0}, stop, 99, 2, 32);
    REQUIRE(r1.points.size() == 2);
    for (size_t i = 0; i < 2; ++i) {
        CHECK(r1.points[i].frames == r2.points[i].frames);
        CHECK(r1.points[i].bit_errors == r2.points[i].bit_errors);
        CHECK(r1.points[i].frame_errors == r2.points[i].frame_errors);
        CHECK(r2.points[i].frame_errors == r3.points[i].frame_errors);
        CHECK(r1.points[i].ci_low <= r1.points[i].fer);
        CHECK(r1.points[i].ci_high >= r1.points[i].fer);
        CHECK(r1.points[i].fer * d.k_info >= r1.points[i].ber);
    }
    // noise-free surrogate: very high Eb/N0 gives a zero-error report
    SimStop quick;
    quick.min_frame_errors = 1;
    quick.max_frames = 50;
    auto clean = run_monte_carlo(d, cfg, {20.0}, quick, 5, 2, 16);
    CHECK(clean.points[0].frame_errors == 0);
    CHECK(clean.points[0].fer == 0.0);
}

TEST_CASE("early exit shortens clean decodes without changing the answer") {
    auto d = small_design();
    BitVec info(static_cast<size_t>(d.k_info), 0);
    auto frame = encode_frame(d, info);
    auto rng = Xoshiro256pp::from_seed(21);
    auto obs = bpsk_awgn(d, frame.inner_out, 9.0, rng);
    DecoderConfig cfg;
    cfg.iterations = 10;
    cfg.early_exit = true;
    DecodeTelemetry telem;
    auto hat = sccc_iterative_decode(d, obs, cfg, &telem);
    CHECK(hat == info);
    CHECK(telem.iterations_used < 10);
}
