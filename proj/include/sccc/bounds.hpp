#ifndef SCCC_BOUNDS_HPP
#define SCCC_BOUNDS_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "sccc/common.hpp"
#include "sccc/enumerator.hpp"

namespace sccc {

enum class ComposeMode { ExactBinomial, PaperApprox };
enum class BoundKernel { Exponential, Erfc };
enum class CurveKind { Bit, Frame };

// Interleaver-averaged spectrum of the concatenation, A[w][h] with h = j + m.
struct SCCCSpectrum {
    int n_interleaver = 0;
    ComposeMode mode = ComposeMode::ExactBinomial;
    std::map<std::pair<int, int>, BigRat> coeff;  // (w, h) -> averaged multiplicity
    int w_cap = 0;
    int h_cap = 0;      // coefficients beyond this h are not represented
    bool truncated = false;

    std::optional<int> h_min() const;            // h_m
    BigRat multiplicity_at(int h) const;         // sum over w of A[w][h]
};

SCCCSpectrum compose_uniform(const JointWeightTable& outer, const JointWeightTable& inner,
                             int n_interleaver, ComposeMode mode);

struct BoundCurve {
    CurveKind kind = CurveKind::Frame;
    BoundKernel kernel = BoundKernel::Exponential;
    std::vector<std::pair<double, double>> points;  // (Eb/N0 dB, probability bound)
};

// Union bounds; the bit bound weights each term by w / (N R_c^{o'}) = w / K.
BoundCurve union_bound_bit(const SCCCSpectrum& spec, const BigRat& r_sccc, int k_info,
                           const std::vector<double>& ebno_db, BoundKernel kernel);
BoundCurve union_bound_frame(const SCCCSpectrum& spec, const BigRat& r_sccc,
                             const std::vector<double>& ebno_db, BoundKernel kernel);

// Cumulative distance spectrum: d -> sum_{h <= d} sum_w A[w][h].
std::vector<std::pair<int, BigRat>> cumulative_spectrum(const SCCCSpectrum& spec);

// Interleaver-exponent support: for each achievable h the maximum of
// n^{o''} + n^{i'} - l - 1 over complete-event coefficient pairs.
struct ExponentSupport {
    std::map<int, int> alpha_of_h;
    std::optional<int> alpha_max;
};
ExponentSupport exponent_support(const JointWeightTable& outer, const JointWeightTable& inner);

struct AsymptoticReport {
    int d_f_o_prime = 0;
    bool d_f_o_prime_even = false;
    int alpha_m = 0;                      // closed form -floor((d_f^{o'}+1)/2)
    std::optional<int> alpha_m_observed;  // max exponent over the enumerated support
    int h_alpha_m = 0;
    int h_alpha_m_lower = 0;              // with d_f^{o''} in place of d^{o''}(d_f^{o'})
    std::string branch;                   // which candidate attained the minimum
    std::map<int, int> alpha_of_h;
};

AsymptoticReport asymptotic_report(const DistanceSummary& summary,
                                   const ExponentSupport* support = nullptr);

}  // namespace sccc

#endif
