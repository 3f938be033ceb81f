#ifndef SCCC_SIMULATOR_HPP
#define SCCC_SIMULATOR_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sccc/common.hpp"
#include "sccc/design.hpp"

namespace sccc {

// Pinned platform-independent RNG: xoshiro256++ seeded with four SplitMix64
// outputs; substream k of master seed s starts SplitMix64 at
// s + (k+1) * 0x9e3779b97f4a7c15.  Gaussians use the Marsaglia polar method.
struct SplitMix64 {
    uint64_t state;
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

class Xoshiro256pp {
  public:
    static Xoshiro256pp from_seed(uint64_t seed);
    static Xoshiro256pp substream(uint64_t master_seed, uint64_t stream_id);
    uint64_t next();
    double uniform01();            // 53-bit mantissa in [0,1)
    uint64_t below(uint64_t n);    // unbiased via rejection
    double gaussian();

  private:
    uint64_t s_[4] = {1, 2, 3, 4};
    bool have_spare_ = false;
    double spare_ = 0.0;
};

enum class SisoKind { LogMap, MaxLogMap };

struct DecoderConfig {
    int iterations = 10;
    SisoKind siso = SisoKind::LogMap;
    double llr_clip = 30.0;
    bool early_exit = false;  // stop once re-encoding the decision matches
};

// LLRs over the serialized inner output block (sign > 0 means bit 0);
// punctured positions carry exactly zero.
struct ChannelObservation {
    std::vector<double> llr;
};

ChannelObservation bpsk_awgn(const SCCCDesign& d, const BitVec& inner_out, double ebno_db,
                             Xoshiro256pp& rng);

// Log-domain BCJR over a (possibly termination-forced) trellis.  in_prior has
// one entry per free section; out_prior covers all serialized output
// positions.  Outputs are total a posteriori LLRs.
void siso_map(const TrellisCode& t, int free_sections, bool terminated,
              std::span<const double> in_prior, std::span<const double> out_prior,
              std::span<double> in_total, std::span<double> out_total, const DecoderConfig& cfg);

// Extrinsic form of the spec'd SISO contract: subtracts the input-side priors
// (including the systematic channel observation folded into out_prior).
struct SisoExtrinsics {
    std::vector<double> input;
    std::vector<double> output;
};
SisoExtrinsics siso_decode(const TrellisCode& t, int free_sections, bool terminated,
                           std::span<const double> in_prior, std::span<const double> out_prior,
                           const DecoderConfig& cfg);

struct DecodeTelemetry {
    int iterations_used = 0;
    std::vector<double> mean_abs_extrinsic;  // outer code-bit extrinsics per iteration
};

BitVec sccc_iterative_decode(const SCCCDesign& d, const ChannelObservation& obs,
                             const DecoderConfig& cfg, DecodeTelemetry* telemetry = nullptr);

struct SimStop {
    long min_frame_errors = 100;
    long max_frames = 100000;
};

struct SimPoint {
    double ebno_db = 0;
    long frames = 0;
    long bit_errors = 0;
    long frame_errors = 0;
    double ber = 0, fer = 0;
    double ci_low = 0, ci_high = 0;  // 95% normal-approximation interval on FER
    double avg_iterations = 0;
};

struct SimReport {
    uint64_t master_seed = 0;
    int threads = 1;
    std::vector<SimPoint> points;
};

// Deterministic regardless of thread count: frame f of grid point i draws
// from substream (i << 32) | f and stopping is checked on fixed-size batch
// boundaries.
SimReport run_monte_carlo(const SCCCDesign& d, const DecoderConfig& cfg,
                          const std::vector<double>& ebno_db_grid, const SimStop& stop,
                          uint64_t master_seed, int threads = 0, int batch = 256);

}  // namespace sccc

#endif
