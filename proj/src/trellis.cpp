#include "sccc/trellis.hpp"

#include <algorithm>
#include <sstream>

namespace sccc {

namespace {

int poly_degree(unsigned p) {
    int d = 0;
    while (p >> (d + 1)) ++d;
    return d;
}

unsigned parse_octal(const std::string& s) {
    if (s.empty()) throw ConfigError("empty generator polynomial");
    unsigned v = 0;
    for (char c : s) {
        if (c < '0' || c > '7') throw ConfigError("generator polynomial must be octal: " + s);
        v = v * 8 + static_cast<unsigned>(c - '0');
    }
    return v;
}

}  // namespace

int GeneratorSpec::memory() const { return poly_degree(feedback); }

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
    GeneratorSpec spec;
    spec.systematic = false;
    spec.forward.clear();
    unsigned feedback = 0;
    std::stringstream ss(text);
    std::string tok;
    bool first = true;
    while (std::getline(ss, tok, ',')) {
        tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
        auto slash = tok.find('/');
        if (slash == std::string::npos) {
            if (tok != "1" || !first)
                throw ConfigError("only a leading systematic output '1' is supported: " + text);
            spec.systematic = true;
        } else {
            unsigned fwd = parse_octal(tok.substr(0, slash));
            unsigned fb = parse_octal(tok.substr(slash + 1));
            if (feedback != 0 && fb != feedback)
                throw ConfigError("all parity outputs must share one feedback polynomial: " + text);
            feedback = fb;
            spec.forward.push_back(fwd);
        }
        first = false;
    }
    if (spec.forward.empty()) throw ConfigError("no parity output in generator spec: " + text);
    spec.feedback = feedback;
    if (!(spec.feedback & 1u)) throw ConfigError("feedback polynomial must be odd (delay-free tap)");
    return spec;
}

std::string GeneratorSpec::to_string() const {
    std::ostringstream os;
    if (systematic) os << "1,";
    for (size_t i = 0; i < forward.size(); ++i) {
        if (i) os << ',';
        os << std::oct << forward[i] << "/" << feedback << std::dec;
    }
    return os.str();
}

TrellisCode::TrellisCode(int memory, int bits_per_step, int out_per_step,
                         std::vector<Transition> transitions)
    : memory_(memory),
      num_states_(1 << memory),
      bits_per_step_(bits_per_step),
      out_per_step_(out_per_step),
      trans_(std::move(transitions)) {
    // Zero-forcing tail: with a delay-free feedback tap there is, per state, a
    // unique input making the feedback bit zero; memory() such steps reach 0.
    term_sections_ = (bits_per_step_ == 1) ? memory_ : 0;
    tail_in_.assign(num_states_, 0);
    if (bits_per_step_ == 1) {
        for (int s = 0; s < num_states_; ++s) {
            int chosen = -1;
            for (int u = 0; u < 2; ++u) {
                int ns = transition(s, u).next;
                // the zero-forcing branch shifts a zero feedback bit in
                if (ns == ((s << 1) & (num_states_ - 1))) chosen = u;
            }
            tail_in_[s] = chosen >= 0 ? chosen : 0;
        }
    }
}

TrellisCode build_trellis(const GeneratorSpec& spec) {
    if (!(spec.feedback & 1u)) throw ConfigError("feedback polynomial must be odd");
    if (spec.forward.empty()) throw ConfigError("at least one parity output required");
    const int nu = spec.memory();
    const int n_states = 1 << nu;
    const int n_out = spec.n_out();
    std::vector<Transition> trans(static_cast<size_t>(n_states) * 2);
    for (int s = 0; s < n_states; ++s) {
        for (int u = 0; u < 2; ++u) {
            // state bit i holds the feedback register value a_{t-1-i}
            unsigned fb = static_cast<unsigned>(u);
            for (int i = 1; i <= nu; ++i)
                if ((spec.feedback >> i) & 1u) fb ^= (static_cast<unsigned>(s) >> (i - 1)) & 1u;
            uint32_t out = 0;
            int bit = 0;
            if (spec.systematic) out |= static_cast<uint32_t>(u) << bit++;
            for (unsigned fwd : spec.forward) {
                unsigned y = fwd & 1u ? fb : 0u;
                for (int i = 1; i <= nu; ++i)
                    if ((fwd >> i) & 1u) y ^= (static_cast<unsigned>(s) >> (i - 1)) & 1u;
                out |= (y & 1u) << bit++;
            }
            int next = nu == 0 ? 0 : static_cast<int>(((static_cast<unsigned>(s) << 1) | fb) & (n_states - 1u));
            trans[static_cast<size_t>(s) * 2 + u] = Transition{static_cast<uint16_t>(next), out,
                                                               static_cast<uint32_t>(u)};
        }
    }
    return TrellisCode(nu, 1, n_out, std::move(trans));
}

TrellisCode fold_trellis(const TrellisCode& t, int p) {
    if (p < 1) throw ConfigError("fold factor must be >= 1");
    if (t.bits_per_step() != 1) throw ConfigError("fold_trellis expects a one-bit-per-step trellis");
    const int n_states = t.num_states();
    const int n_in = 1 << p;
    std::vector<Transition> trans(static_cast<size_t>(n_states) * n_in);
    for (int s = 0; s < n_states; ++s) {
        for (int u = 0; u < n_in; ++u) {
            int cur = s;
            uint32_t out = 0;
            for (int k = 0; k < p; ++k) {
                const Transition& step = t.transition(cur, (u >> k) & 1);
                out |= step.out << (k * t.out_per_step());
                cur = step.next;
            }
            trans[static_cast<size_t>(s) * n_in + u] =
                Transition{static_cast<uint16_t>(cur), out, static_cast<uint32_t>(u)};
        }
    }
    return TrellisCode(t.memory(), p, t.out_per_step() * p, std::move(trans));
}

Codeword encode(const TrellisCode& t, std::span<const uint8_t> info, bool terminate) {
    if (info.empty()) throw ConfigError("cannot encode an empty frame");
    if (terminate && t.bits_per_step() != 1)
        throw ConfigError("termination only supported for one-bit-per-step trellises");
    const int p = t.bits_per_step();
    if (info.size() % static_cast<size_t>(p) != 0)
        throw ConfigError("frame length must be a multiple of bits_per_step");
    const int free_sections = static_cast<int>(info.size()) / p;
    const int tail = terminate ? t.termination_sections() : 0;
    Codeword cw;
    cw.frame_length = static_cast<int>(info.size());
    cw.sections = free_sections + tail;
    cw.bits.resize(static_cast<size_t>(cw.sections) * t.out_per_step());
    int state = 0;
    size_t pos = 0;
    for (int sec = 0; sec < cw.sections; ++sec) {
        int input = 0;
        if (sec < free_sections) {
            for (int k = 0; k < p; ++k) input |= (info[static_cast<size_t>(sec) * p + k] & 1) << k;
        } else {
            input = t.tail_input(state);
        }
        const Transition& tr = t.transition(state, input);
        for (int k = 0; k < t.out_per_step(); ++k) cw.bits[pos++] = (tr.out >> k) & 1u;
        state = tr.next;
    }
    return cw;
}

int encode_final_state(const TrellisCode& t, std::span<const uint8_t> info) {
    int state = 0;
    const int p = t.bits_per_step();
    for (size_t i = 0; i + p <= info.size(); i += p) {
        int input = 0;
        for (int k = 0; k < p; ++k) input |= (info[i + k] & 1) << k;
        state = t.transition(state, input).next;
    }
    return state;
}

std::map<int, EventWeight> min_event_weights(const TrellisCode& t, int w_max, int h_cap,
                                             int sections, const BitVec& mask) {
    if (w_max < 1) throw ConfigError("w_max must be >= 1");
    if (h_cap < 1) throw CapExceededError("h_cap too small to witness any event");
    const int n_states = t.num_states();
    const int n_in = t.num_inputs();
    const int n_out = t.out_per_step();
    if (!mask.empty() && mask.size() != static_cast<size_t>(sections) * n_out)
        throw ConfigError("mask length must cover all serialized output positions");

    auto masked_weight = [&](uint32_t out, int section) {
        int w = 0;
        for (int k = 0; k < n_out; ++k) {
            if (!((out >> k) & 1u)) continue;
            size_t pos = static_cast<size_t>(section) * n_out + k;
            if (mask.empty() || mask[pos]) ++w;
        }
        return w;
    };

    // active[s][w][h]: open events currently in nonzero state s
    const int W = w_max + 1, H = h_cap + 1;
    auto idx = [&](int s, int w, int h) { return (static_cast<size_t>(s) * W + w) * H + h; };
    std::vector<BigInt> active(static_cast<size_t>(n_states) * W * H, 0);
    std::vector<BigInt> closed(static_cast<size_t>(W) * H, 0);
    bool any_open_left = false;

    for (int sec = 0; sec < sections; ++sec) {
        std::vector<BigInt> next(active.size(), 0);
        // new departures from the zero state
        for (int u = 1; u < n_in; ++u) {
            const Transition& tr = t.transition(0, u);
            int dw = __builtin_popcount(tr.in);
            int dh = masked_weight(tr.out, sec);
            if (dw > w_max || dh > h_cap) continue;
            if (tr.next == 0) {
                if (dw > 0) closed[static_cast<size_t>(dw) * H + dh] += 1;  // one-section event (p > 1)
            } else {
                next[idx(tr.next, dw, dh)] += 1;
            }
        }
        // extensions of open events
        for (int s = 1; s < n_states; ++s) {
            for (int w = 0; w <= w_max; ++w) {
                for (int h = 0; h <= h_cap; ++h) {
                    const BigInt& c = active[idx(s, w, h)];
                    if (c == 0) continue;
                    for (int u = 0; u < n_in; ++u) {
                        const Transition& tr = t.transition(s, u);
                        int w2 = w + __builtin_popcount(tr.in);
                        int h2 = h + masked_weight(tr.out, sec);
                        if (w2 > w_max || h2 > h_cap) {
                            any_open_left = true;
                            continue;
                        }
                        if (tr.next == 0)
                            closed[static_cast<size_t>(w2) * H + h2] += c;
                        else
                            next[idx(tr.next, w2, h2)] += c;
                    }
                }
            }
        }
        active.swap(next);
    }
    (void)any_open_left;

    std::map<int, EventWeight> result;
    for (int w = 1; w <= w_max; ++w) {
        EventWeight ev;
        ev.unbounded_at_cap = true;
        for (int h = 0; h <= h_cap; ++h) {
            const BigInt& c = closed[static_cast<size_t>(w) * H + h];
            if (c != 0) {
                ev.d = h;
                ev.multiplicity = c;
                ev.unbounded_at_cap = false;
                break;
            }
        }
        result[w] = ev;
    }
    bool all_unbounded = true;
    for (auto& [w, ev] : result) all_unbounded = all_unbounded && ev.unbounded_at_cap;
    if (all_unbounded)
        throw CapExceededError("no error event closed within h_cap=" + std::to_string(h_cap));
    return result;
}

}  // namespace sccc
