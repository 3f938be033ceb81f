#ifndef SCCC_PUNCTURING_HPP
#define SCCC_PUNCTURING_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sccc/common.hpp"

namespace sccc {

enum class PatternKind { List, Periodic };

// A set of deleted positions over [0, length).  Periodic patterns tile a
// keep/delete mask (mask[i % period] == '0' deletes position i).
class PuncturePattern {
  public:
    PuncturePattern() = default;
    static PuncturePattern none(int length);
    static PuncturePattern from_list(int length, std::vector<int> deleted);
    static PuncturePattern periodic(int length, const std::string& mask);

    int length() const { return length_; }
    PatternKind kind() const { return kind_; }
    const std::string& mask() const { return mask_; }
    const std::vector<int>& deleted() const { return deleted_; }  // sorted
    int num_deleted() const { return static_cast<int>(deleted_.size()); }
    int num_kept() const { return length_ - num_deleted(); }
    bool deletes(int pos) const { return flags_[static_cast<size_t>(pos)] != 0; }

    // Survivors in original order.
    BitVec apply(const BitVec& seq) const;
    std::vector<int> kept_positions() const;

  private:
    int length_ = 0;
    PatternKind kind_ = PatternKind::List;
    std::string mask_;            // periodic kind only
    std::vector<int> deleted_;
    BitVec flags_;                // 1 = deleted
};

// Ordered deletion sequence; the pattern deleting the first M positions
// realizes step M, so every prefix is nested inside the next (this is the
// rate-compatibility property).
struct PunctureLadder {
    int base_length = 0;
    std::vector<int> ordered_positions;

    int max_steps() const { return static_cast<int>(ordered_positions.size()); }
    PuncturePattern step(int m) const;
};

struct PermeabilityPair {
    BigRat rho_s = 1;
    BigRat rho_p = 1;
};

BigRat sccc_rate(const BigRat& r_o_prime, int n, const PermeabilityPair& rho);
BigRat rho_s_for_target(const BigRat& r_target, const BigRat& r_o_prime, int n,
                        const BigRat& rho_p);

// Position q is deleted in the image iff perm^-1(q) is deleted in p_prime,
// i.e. perm[i] gives the interleaved location of input position i.
PuncturePattern interleave_pattern(const PuncturePattern& p_prime,
                                   const std::vector<int>& perm);

struct RateCompatVerdict {
    bool compatible = true;
    int first = -1, second = -1;  // indices of the violating pair
    int witness_position = -1;    // deleted in first, not in second
    std::string message;
};

RateCompatVerdict check_rate_compatible(const std::vector<PuncturePattern>& patterns);

// Pattern file format: header "length=<L> kind=<list|periodic>"; list kind has
// one position per line in ladder order, periodic kind one keep/delete mask
// string line.  Round-trips bit-exactly.
void write_pattern_file(std::ostream& os, const PunctureLadder& ladder);
void write_pattern_file(std::ostream& os, const PuncturePattern& pattern);
PunctureLadder read_ladder_file(std::istream& is, const std::string& name = "<pattern>");
PuncturePattern read_pattern_file(std::istream& is, int steps = -1,
                                  const std::string& name = "<pattern>");
PunctureLadder load_ladder(const std::string& path);
PuncturePattern load_pattern(const std::string& path, int steps = -1);

}  // namespace sccc

#endif
