#include "sccc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace sccc {

Xoshiro256pp Xoshiro256pp::from_seed(uint64_t seed) {
    SplitMix64 sm{seed};
    Xoshiro256pp r;
    for (auto& w : r.s_) w = sm.next();
    if (!(r.s_[0] | r.s_[1] | r.s_[2] | r.s_[3])) r.s_[0] = 1;
    return r;
}

Xoshiro256pp Xoshiro256pp::substream(uint64_t master_seed, uint64_t stream_id) {
    return from_seed(master_seed + (stream_id + 1) * 0x9e3779b97f4a7c15ull);
}

static inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

uint64_t Xoshiro256pp::next() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Xoshiro256pp::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

uint64_t Xoshiro256pp::below(uint64_t n) {
    const uint64_t threshold = (-n) % n;
    for (;;) {
        uint64_t r = next();
        if (r >= threshold) return r % n;
    }
}

double Xoshiro256pp::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
}

ChannelObservation bpsk_awgn(const SCCCDesign& d, const BitVec& inner_out, double ebno_db,
                             Xoshiro256pp& rng) {
    if (!std::isfinite(ebno_db)) throw ConfigError("Eb/N0 must be finite");
    const int n_out = d.inner.out_per_step();
    const int n_par = n_out - 1;
    const double ebno = std::pow(10.0, ebno_db / 10.0);
    const double rate = to_double(d.r_sccc);
    const double sigma = std::sqrt(1.0 / (2.0 * rate * ebno));
    const double scale = 4.0 * rate * ebno;  // llr = scale * y for unit-energy BPSK

    ChannelObservation obs;
    obs.llr.assign(inner_out.size(), 0.0);
    const int sections = static_cast<int>(inner_out.size()) / n_out;
    for (int t = 0; t < sections; ++t) {
        for (int k = 0; k < n_out; ++k) {
            bool kept;
            if (k == 0)
                kept = t >= d.n || !d.p_i_s.deletes(t);
            else
                kept = t >= d.n || !d.p_i_p.deletes(t * n_par + (k - 1));
            if (!kept) continue;
            const size_t pos = static_cast<size_t>(t) * n_out + k;
            const double x = inner_out[pos] ? -1.0 : 1.0;
            obs.llr[pos] = scale * (x + sigma * rng.gaussian());
        }
    }
    return obs;
}

namespace {

constexpr double kNegInf = -1e30;

inline double max_star(double a, double b, bool exact) {
    double m = a > b ? a : b;
    if (!exact) return m;
    double diff = a > b ? a - b : b - a;
    if (diff > 37.0 || m <= kNegInf / 2) return m;
    return m + std::log1p(std::exp(-diff));
}

}  // namespace

void siso_map(const TrellisCode& t, int free_sections, bool terminated,
              std::span<const double> in_prior, std::span<const double> out_prior,
              std::span<double> in_total, std::span<double> out_total,
              const DecoderConfig& cfg) {
    const int n_states = t.num_states();
    const int n_out = t.out_per_step();
    const int tail = terminated ? t.termination_sections() : 0;
    const int sections = free_sections + tail;
    const bool exact = cfg.siso == SisoKind::LogMap;
    if (t.bits_per_step() != 1) throw ConfigError("SISO supports one input bit per section");
    if (in_prior.size() != static_cast<size_t>(free_sections) ||
        out_prior.size() != static_cast<size_t>(sections) * n_out ||
        in_total.size() != in_prior.size() || out_total.size() != out_prior.size())
        throw ConfigError("SISO buffer sizes do not match the trellis");
    for (double v : in_prior)
        if (!std::isfinite(v)) throw ConfigError("non-finite input prior LLR");
    for (double v : out_prior)
        if (!std::isfinite(v)) throw ConfigError("non-finite output prior LLR");

    auto clip = [&](double v) { return std::clamp(v, -cfg.llr_clip, cfg.llr_clip); };

    // branch metrics; llr sign convention: positive favors bit 0
    std::vector<double> gamma(static_cast<size_t>(sections) * n_states * 2, kNegInf);
    for (int sec = 0; sec < sections; ++sec) {
        const bool forced = sec >= free_sections;
        const double lin = forced ? 0.0 : clip(in_prior[static_cast<size_t>(sec)]);
        for (int s = 0; s < n_states; ++s) {
            for (int u = 0; u < 2; ++u) {
                if (forced && u != t.tail_input(s)) continue;
                const Transition& tr = t.transition(s, u);
                double g = u ? -0.5 * lin : 0.5 * lin;
                for (int k = 0; k < n_out; ++k) {
                    const double lo = out_prior[static_cast<size_t>(sec) * n_out + k];
                    g += ((tr.out >> k) & 1u) ? -0.5 * lo : 0.5 * lo;
                }
                gamma[(static_cast<size_t>(sec) * n_states + s) * 2 + u] = g;
            }
        }
    }

    std::vector<double> alpha(static_cast<size_t>(sections + 1) * n_states, kNegInf);
    alpha[0] = 0.0;
    for (int sec = 0; sec < sections; ++sec) {
        double* a = alpha.data() + static_cast<size_t>(sec) * n_states;
        double* an = alpha.data() + static_cast<size_t>(sec + 1) * n_states;
        for (int s = 0; s < n_states; ++s) {
            if (a[s] <= kNegInf / 2) continue;
            for (int u = 0; u < 2; ++u) {
                double g = gamma[(static_cast<size_t>(sec) * n_states + s) * 2 + u];
                if (g <= kNegInf / 2) continue;
                int ns = t.transition(s, u).next;
                an[ns] = max_star(an[ns], a[s] + g, exact);
            }
        }
        double m = *std::max_element(an, an + n_states);
        if (m > kNegInf / 2)
            for (int s = 0; s < n_states; ++s) an[s] -= m;
    }

    std::vector<double> beta(static_cast<size_t>(sections + 1) * n_states, kNegInf);
    {
        double* bend = beta.data() + static_cast<size_t>(sections) * n_states;
        if (terminated)
            bend[0] = 0.0;
        else
            for (int s = 0; s < n_states; ++s) bend[s] = 0.0;
    }
    for (int sec = sections - 1; sec >= 0; --sec) {
        double* b = beta.data() + static_cast<size_t>(sec) * n_states;
        double* bn = beta.data() + static_cast<size_t>(sec + 1) * n_states;
        for (int s = 0; s < n_states; ++s) {
            for (int u = 0; u < 2; ++u) {
                double g = gamma[(static_cast<size_t>(sec) * n_states + s) * 2 + u];
                if (g <= kNegInf / 2) continue;
                int ns = t.transition(s, u).next;
                if (bn[ns] <= kNegInf / 2) continue;
                b[s] = max_star(b[s], g + bn[ns], exact);
            }
        }
        double m = *std::max_element(b, b + n_states);
        if (m > kNegInf / 2)
            for (int s = 0; s < n_states; ++s) b[s] -= m;
    }

    // per-bit totals from branch posteriors
    std::vector<double> out0(static_cast<size_t>(n_out)), out1(static_cast<size_t>(n_out));
    for (int sec = 0; sec < sections; ++sec) {
        const double* a = alpha.data() + static_cast<size_t>(sec) * n_states;
        const double* bn = beta.data() + static_cast<size_t>(sec + 1) * n_states;
        double in0 = kNegInf, in1 = kNegInf;
        std::fill(out0.begin(), out0.end(), kNegInf);
        std::fill(out1.begin(), out1.end(), kNegInf);
        for (int s = 0; s < n_states; ++s) {
            if (a[s] <= kNegInf / 2) continue;
            for (int u = 0; u < 2; ++u) {
                double g = gamma[(static_cast<size_t>(sec) * n_states + s) * 2 + u];
                if (g <= kNegInf / 2) continue;
                const Transition& tr = t.transition(s, u);
                if (bn[tr.next] <= kNegInf / 2) continue;
                const double p = a[s] + g + bn[tr.next];
                if (u)
                    in1 = max_star(in1, p, exact);
                else
                    in0 = max_star(in0, p, exact);
                for (int k = 0; k < n_out; ++k) {
                    if ((tr.out >> k) & 1u)
                        out1[static_cast<size_t>(k)] = max_star(out1[static_cast<size_t>(k)], p, exact);
                    else
                        out0[static_cast<size_t>(k)] = max_star(out0[static_cast<size_t>(k)], p, exact);
                }
            }
        }
        if (sec < free_sections) in_total[static_cast<size_t>(sec)] = in0 - in1;
        for (int k = 0; k < n_out; ++k) {
            double l0 = out0[static_cast<size_t>(k)], l1 = out1[static_cast<size_t>(k)];
            double v;
            if (l1 <= kNegInf / 2)
                v = cfg.llr_clip * 2;
            else if (l0 <= kNegInf / 2)
                v = -cfg.llr_clip * 2;
            else
                v = l0 - l1;
            out_total[static_cast<size_t>(sec) * n_out + k] = v;
        }
    }
}

SisoExtrinsics siso_decode(const TrellisCode& t, int free_sections, bool terminated,
                           std::span<const double> in_prior, std::span<const double> out_prior,
                           const DecoderConfig& cfg) {
    SisoExtrinsics ext;
    ext.input.resize(in_prior.size());
    ext.output.resize(out_prior.size());
    std::vector<double> in_total(in_prior.size()), out_total(out_prior.size());
    siso_map(t, free_sections, terminated, in_prior, out_prior, in_total, out_total, cfg);
    for (size_t i = 0; i < in_prior.size(); ++i) ext.input[i] = in_total[i] - in_prior[i];
    for (size_t i = 0; i < out_prior.size(); ++i) ext.output[i] = out_total[i] - out_prior[i];
    return ext;
}

BitVec sccc_iterative_decode(const SCCCDesign& d, const ChannelObservation& obs,
                             const DecoderConfig& cfg, DecodeTelemetry* telemetry) {
    const int n_out_i = d.inner.out_per_step();
    const int inner_sections = d.n + d.inner.termination_sections();
    if (obs.llr.size() != static_cast<size_t>(inner_sections) * n_out_i)
        throw ConfigError("observation length does not match the inner block");
    const int n_out_o = d.outer.out_per_step();
    const int outer_free = d.k_info;
    const int block = d.sections * n_out_o;

    std::vector<double> inner_in_prior(static_cast<size_t>(d.n), 0.0);
    std::vector<double> inner_in_total(static_cast<size_t>(d.n));
    std::vector<double> inner_out_total(obs.llr.size());
    std::vector<double> outer_in_prior(static_cast<size_t>(outer_free), 0.0);
    std::vector<double> outer_out_prior(static_cast<size_t>(block), 0.0);
    std::vector<double> outer_in_total(static_cast<size_t>(outer_free));
    std::vector<double> outer_out_total(static_cast<size_t>(block));
    std::vector<double> outer_code_ext(static_cast<size_t>(d.n), 0.0);

    if (telemetry) {
        telemetry->iterations_used = 0;
        telemetry->mean_abs_extrinsic.clear();
    }

    BitVec decision(static_cast<size_t>(outer_free), 0);
    auto clip = [&](double v) { return std::clamp(v, -cfg.llr_clip, cfg.llr_clip); };

    for (int it = 0; it < cfg.iterations; ++it) {
        // inner SISO: priors on its input bits come from the outer code-bit
        // extrinsics, channel LLRs ride on the output side
        {
            std::vector<double> in_prior_full(static_cast<size_t>(d.n));
            for (int i = 0; i < d.n; ++i)
                in_prior_full[static_cast<size_t>(d.interleaver[static_cast<size_t>(i)])] =
                    clip(outer_code_ext[static_cast<size_t>(i)]);
            inner_in_prior = std::move(in_prior_full);
            siso_map(d.inner, d.n, true, inner_in_prior, obs.llr, inner_in_total,
                     inner_out_total, cfg);
        }
        // what the outer sees on each surviving code bit: inner total minus
        // what the outer itself supplied (channel observation stays folded in)
        std::fill(outer_out_prior.begin(), outer_out_prior.end(), 0.0);
        for (int q = 0; q < block; ++q) {
            int i = d.mother_to_n[static_cast<size_t>(q)];
            if (i < 0) continue;
            int pos = d.interleaver[static_cast<size_t>(i)];
            outer_out_prior[static_cast<size_t>(q)] =
                clip(inner_in_total[static_cast<size_t>(pos)] -
                     inner_in_prior[static_cast<size_t>(pos)]);
        }
        siso_map(d.outer, outer_free, true, outer_in_prior, outer_out_prior, outer_in_total,
                 outer_out_total, cfg);
        double sum_abs = 0.0;
        for (int q = 0; q < block; ++q) {
            int i = d.mother_to_n[static_cast<size_t>(q)];
            if (i < 0) continue;
            double e = outer_out_total[static_cast<size_t>(q)] -
                       outer_out_prior[static_cast<size_t>(q)];
            outer_code_ext[static_cast<size_t>(i)] = e;
            sum_abs += std::fabs(e);
        }
        if (telemetry) {
            telemetry->mean_abs_extrinsic.push_back(sum_abs / d.n);
            telemetry->iterations_used = it + 1;
        }
        for (int i = 0; i < outer_free; ++i)
            decision[static_cast<size_t>(i)] = outer_in_total[static_cast<size_t>(i)] < 0.0;
        if (cfg.early_exit) {
            EncodedFrame re = encode_frame(d, decision);
            bool match = true;
            for (size_t pos = 0; pos < obs.llr.size() && match; ++pos) {
                if (obs.llr[pos] == 0.0) continue;
                bool hard = obs.llr[pos] < 0.0;
                match = (re.inner_out[pos] != 0) == hard;
            }
            if (match) break;
        }
    }
    return decision;
}

namespace {

struct BatchCounters {
    long frames = 0, bit_errors = 0, frame_errors = 0;
    long iterations = 0;
};

BatchCounters run_frames(const SCCCDesign& d, const DecoderConfig& cfg, double ebno_db,
                         uint64_t master_seed, uint64_t point_id, long first, long count) {
    BatchCounters c;
    BitVec info(static_cast<size_t>(d.k_info));
    for (long f = first; f < first + count; ++f) {
        Xoshiro256pp rng =
            Xoshiro256pp::substream(master_seed, (point_id << 32) | static_cast<uint64_t>(f));
        for (auto& b : info) b = static_cast<uint8_t>(rng.next() & 1u);
        EncodedFrame frame = encode_frame(d, info);
        ChannelObservation obs = bpsk_awgn(d, frame.inner_out, ebno_db, rng);
        DecodeTelemetry telem;
        BitVec hat = sccc_iterative_decode(d, obs, cfg, &telem);
        long errs = 0;
        for (int i = 0; i < d.k_info; ++i)
            errs += hat[static_cast<size_t>(i)] != info[static_cast<size_t>(i)];
        c.frames += 1;
        c.bit_errors += errs;
        c.frame_errors += errs > 0;
        c.iterations += telem.iterations_used;
    }
    return c;
}

}  // namespace

SimReport run_monte_carlo(const SCCCDesign& d, const DecoderConfig& cfg,
                          const std::vector<double>& ebno_db_grid, const SimStop& stop,
                          uint64_t master_seed, int threads, int batch) {
    if (stop.min_frame_errors < 1 || stop.max_frames < 1)
        throw ConfigError("stop thresholds must be positive");
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;

    SimReport report;
    report.master_seed = master_seed;
    report.threads = threads;
    for (size_t pi = 0; pi < ebno_db_grid.size(); ++pi) {
        SimPoint point;
        point.ebno_db = ebno_db_grid[pi];
        long frames = 0, bit_errors = 0, frame_errors = 0, iterations = 0;
        while (frames < stop.max_frames && frame_errors < stop.min_frame_errors) {
            long want = std::min<long>(batch, stop.max_frames - frames);
            // fixed frame-index ranges per worker keep totals scheduling-independent
            std::vector<BatchCounters> parts(static_cast<size_t>(threads));
            std::vector<std::thread> pool;
            long chunk = (want + threads - 1) / threads;
            for (int w = 0; w < threads; ++w) {
                long first = frames + w * chunk;
                long count = std::max<long>(0, std::min<long>(chunk, frames + want - first));
                if (count == 0) break;
                pool.emplace_back([&, w, first, count] {
                    parts[static_cast<size_t>(w)] = run_frames(
                        d, cfg, point.ebno_db, master_seed, static_cast<uint64_t>(pi), first,
                        count);
                });
            }
            for (auto& th : pool) th.join();
            for (const auto& p : parts) {
                frames += p.frames;
                bit_errors += p.bit_errors;
                frame_errors += p.frame_errors;
                iterations += p.iterations;
            }
        }
        point.frames = frames;
        point.bit_errors = bit_errors;
        point.frame_errors = frame_errors;
        point.ber = static_cast<double>(bit_errors) / (static_cast<double>(frames) * d.k_info);
        point.fer = static_cast<double>(frame_errors) / static_cast<double>(frames);
        const double p = point.fer;
        const double half = 1.959963984540054 * std::sqrt(std::max(p * (1.0 - p), 0.0) /
                                                          static_cast<double>(frames));
        point.ci_low = std::max(0.0, p - half);
        point.ci_high = std::min(1.0, p + half);
        point.avg_iterations = static_cast<double>(iterations) / static_cast<double>(frames);
        report.points.push_back(point);
    }
    return report;
}

}  // namespace sccc
