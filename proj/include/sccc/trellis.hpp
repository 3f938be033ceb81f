#ifndef SCCC_TRELLIS_HPP
#define SCCC_TRELLIS_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sccc/common.hpp"

namespace sccc {

// Systematic recursive convolutional encoder given by octal generators,
// e.g. "1,5/7" = systematic output plus parity 5/7 (forward/feedback).
struct GeneratorSpec {
    unsigned feedback = 07;              // polynomial bits, LSB = D^0 tap
    std::vector<unsigned> forward{05};   // one entry per parity stream
    bool systematic = true;

    int memory() const;
    // Output bits emitted per input bit: systematic first, then parities.
    int n_out() const { return (systematic ? 1 : 0) + static_cast<int>(forward.size()); }

    static GeneratorSpec parse(const std::string& text);  // "1,5/7" octal form
    std::string to_string() const;
};

struct Transition {
    uint16_t next = 0;
    uint32_t out = 0;  // output bits packed LSB-first
    uint32_t in = 0;   // input bits packed LSB-first
};

// Deterministic, total state machine; immutable once built.
class TrellisCode {
  public:
    TrellisCode() = default;
    TrellisCode(int memory, int bits_per_step, int out_per_step,
                std::vector<Transition> transitions);

    int num_states() const { return num_states_; }
    int memory() const { return memory_; }
    int bits_per_step() const { return bits_per_step_; }      // the symbol p
    int out_per_step() const { return out_per_step_; }
    int num_inputs() const { return 1 << bits_per_step_; }
    int termination_sections() const { return term_sections_; }

    const Transition& transition(int state, int input) const {
        return trans_[static_cast<size_t>(state) * num_inputs() + input];
    }
    // Input that steers one step along the zero-forcing path (p = 1 only).
    int tail_input(int state) const { return tail_in_[state]; }

  private:
    int memory_ = 0;
    int num_states_ = 1;
    int bits_per_step_ = 1;
    int out_per_step_ = 2;
    int term_sections_ = 0;
    std::vector<Transition> trans_;
    std::vector<int> tail_in_;
};

struct Codeword {
    BitVec bits;          // serialized outputs, systematic first within each step
    int frame_length = 0; // free information bits
    int sections = 0;     // total trellis sections, including termination
    int block_length() const { return static_cast<int>(bits.size()); }
};

TrellisCode build_trellis(const GeneratorSpec& spec);

// Combine p consecutive steps into one section (used to model symbol size p > 1).
TrellisCode fold_trellis(const TrellisCode& t, int p);

// Runs |info| free sections; with terminate, appends memory() zero-forcing
// sections whose inputs are data dependent and not counted in frame_length.
Codeword encode(const TrellisCode& t, std::span<const uint8_t> info, bool terminate);

// Final state of an unterminated run (used by tests and the tail logic).
int encode_final_state(const TrellisCode& t, std::span<const uint8_t> info);

struct EventWeight {
    int d = 0;        // minimum surviving output weight, valid when bounded
    BigInt multiplicity = 0;
    bool unbounded_at_cap = false;
};

// Minimum weights of single error events (leave state zero, first return to
// it) by input weight, over all start sections of a frame.  mask[pos] selects
// which serialized output positions count toward the weight; empty = all.
// Events that never close within `sections` are not counted; if for some w no
// closed event of weight <= h_cap exists the entry reports unbounded_at_cap.
std::map<int, EventWeight> min_event_weights(const TrellisCode& t, int w_max, int h_cap,
                                             int sections, const BitVec& mask = {});

}  // namespace sccc

#endif
