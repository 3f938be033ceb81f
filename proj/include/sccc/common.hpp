#ifndef SCCC_COMMON_HPP
#define SCCC_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace sccc {

using BitVec = std::vector<uint8_t>;
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Error categories map to CLI exit codes: config -> 2, cap/feasibility -> 3.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CapExceededError : std::runtime_error {
    explicit CapExceededError(const std::string& msg) : std::runtime_error(msg) {}
};

inline int weight(const BitVec& v) {
    int w = 0;
    for (uint8_t b : v) w += (b != 0);
    return w;
}

inline BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) {
        r *= (n - i);
        r /= (i + 1);
    }
    return r;
}

inline double to_double(const BigRat& r) {
    return static_cast<double>(boost::multiprecision::cpp_bin_float_oct(r));
}

}  // namespace sccc

#endif
