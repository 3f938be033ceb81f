#include "sccc/puncturing.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sccc {

PuncturePattern PuncturePattern::none(int length) {
    return from_list(length, {});
}

PuncturePattern PuncturePattern::from_list(int length, std::vector<int> deleted) {
    if (length < 0) throw ConfigError("pattern length must be nonnegative");
    std::sort(deleted.begin(), deleted.end());
    PuncturePattern p;
    p.length_ = length;
    p.kind_ = PatternKind::List;
    p.flags_.assign(static_cast<size_t>(length), 0);
    for (size_t i = 0; i < deleted.size(); ++i) {
        int pos = deleted[i];
        if (pos < 0 || pos >= length)
            throw ConfigError("deleted position " + std::to_string(pos) + " outside [0," +
                              std::to_string(length) + ")");
        if (i > 0 && deleted[i - 1] == pos)
            throw ConfigError("duplicate deleted position " + std::to_string(pos));
        p.flags_[static_cast<size_t>(pos)] = 1;
    }
    p.deleted_ = std::move(deleted);
    return p;
}

PuncturePattern PuncturePattern::periodic(int length, const std::string& mask) {
    if (mask.empty()) throw ConfigError("periodic mask must be nonempty");
    for (char c : mask)
        if (c != '0' && c != '1') throw ConfigError("periodic mask must be a 0/1 string");
    std::vector<int> deleted;
    for (int i = 0; i < length; ++i)
        if (mask[static_cast<size_t>(i) % mask.size()] == '0') deleted.push_back(i);
    PuncturePattern p = from_list(length, std::move(deleted));
    p.kind_ = PatternKind::Periodic;
    p.mask_ = mask;
    return p;
}

BitVec PuncturePattern::apply(const BitVec& seq) const {
    if (seq.size() != static_cast<size_t>(length_))
        throw ConfigError("sequence length " + std::to_string(seq.size()) +
                          " does not match pattern length " + std::to_string(length_));
    BitVec out;
    out.reserve(seq.size() - deleted_.size());
    for (size_t i = 0; i < seq.size(); ++i)
        if (!flags_[i]) out.push_back(seq[i]);
    return out;
}

std::vector<int> PuncturePattern::kept_positions() const {
    std::vector<int> kept;
    kept.reserve(static_cast<size_t>(num_kept()));
    for (int i = 0; i < length_; ++i)
        if (!flags_[static_cast<size_t>(i)]) kept.push_back(i);
    return kept;
}

PuncturePattern PunctureLadder::step(int m) const {
    if (m < 0 || m > max_steps())
        throw ConfigError("ladder step " + std::to_string(m) + " outside [0," +
                          std::to_string(max_steps()) + "]");
    return PuncturePattern::from_list(
        base_length, std::vector<int>(ordered_positions.begin(), ordered_positions.begin() + m));
}

BigRat sccc_rate(const BigRat& r_o_prime, int n, const PermeabilityPair& rho) {
    BigRat denom = rho.rho_s + BigRat(n - 1) * rho.rho_p;
    if (denom == 0) throw ConfigError("degenerate code: rho_s + (n-1) rho_p = 0");
    return r_o_prime / denom;
}

BigRat rho_s_for_target(const BigRat& r_target, const BigRat& r_o_prime, int n,
                        const BigRat& rho_p) {
    if (r_target == 0) throw ConfigError("target rate must be nonzero");
    BigRat rho_s = r_o_prime / r_target - BigRat(n - 1) * rho_p;
    if (rho_s < 0 || rho_s > 1) {
        // valid rho_p interval from 0 <= rho_s <= 1
        BigRat lo = (r_o_prime / r_target - 1) / BigRat(n - 1);
        BigRat hi = (r_o_prime / r_target) / BigRat(n - 1);
        if (lo < 0) lo = 0;
        std::ostringstream os;
        os << "infeasible permeability: rho_s = " << rho_s << " outside [0,1]; rho_p must lie in ["
           << lo << ", " << hi << "]";
        throw ConfigError(os.str());
    }
    return rho_s;
}

PuncturePattern interleave_pattern(const PuncturePattern& p_prime, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != p_prime.length())
        throw ConfigError("permutation length does not match pattern length");
    std::vector<uint8_t> seen(perm.size(), 0);
    for (int v : perm) {
        if (v < 0 || v >= static_cast<int>(perm.size()) || seen[static_cast<size_t>(v)])
            throw ConfigError("permutation is not a bijection");
        seen[static_cast<size_t>(v)] = 1;
    }
    std::vector<int> deleted;
    deleted.reserve(static_cast<size_t>(p_prime.num_deleted()));
    for (int pos : p_prime.deleted()) deleted.push_back(perm[static_cast<size_t>(pos)]);
    return PuncturePattern::from_list(p_prime.length(), std::move(deleted));
}

RateCompatVerdict check_rate_compatible(const std::vector<PuncturePattern>& patterns) {
    RateCompatVerdict v;
    for (size_t i = 1; i < patterns.size(); ++i)
        if (patterns[i].length() != patterns[0].length())
            throw ConfigError("rate compatibility check requires equal pattern lengths");
    // sort by deletion count; inclusion must then hold along the chain
    std::vector<size_t> order(patterns.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return patterns[a].num_deleted() < patterns[b].num_deleted();
    });
    for (size_t k = 1; k < order.size(); ++k) {
        const PuncturePattern& small = patterns[order[k - 1]];
        const PuncturePattern& big = patterns[order[k]];
        for (int pos : small.deleted()) {
            if (!big.deletes(pos)) {
                v.compatible = false;
                v.first = static_cast<int>(order[k - 1]);
                v.second = static_cast<int>(order[k]);
                v.witness_position = pos;
                std::ostringstream os;
                os << "patterns " << v.first << " and " << v.second
                   << " are not nested: position " << pos << " deleted only in pattern "
                   << v.first;
                v.message = os.str();
                return v;
            }
        }
    }
    return v;
}

void write_pattern_file(std::ostream& os, const PunctureLadder& ladder) {
    os << "length=" << ladder.base_length << " kind=list\n";
    for (int pos : ladder.ordered_positions) os << pos << "\n";
}

void write_pattern_file(std::ostream& os, const PuncturePattern& pattern) {
    if (pattern.kind() == PatternKind::Periodic) {
        os << "length=" << pattern.length() << " kind=periodic\n" << pattern.mask() << "\n";
    } else {
        os << "length=" << pattern.length() << " kind=list\n";
        for (int pos : pattern.deleted()) os << pos << "\n";
    }
}

namespace {

struct PatternHeader {
    int length = 0;
    PatternKind kind = PatternKind::List;
};

PatternHeader read_header(std::istream& is, const std::string& name) {
    std::string line;
    do {
        if (!std::getline(is, line)) throw ConfigError(name + ": missing pattern header");
    } while (line.empty());
    PatternHeader h;
    std::istringstream ls(line);
    std::string tok;
    bool saw_length = false, saw_kind = false;
    while (ls >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ConfigError(name + ": malformed header token " + tok);
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "length") {
            h.length = std::stoi(val);
            saw_length = true;
        } else if (key == "kind") {
            if (val == "list")
                h.kind = PatternKind::List;
            else if (val == "periodic")
                h.kind = PatternKind::Periodic;
            else
                throw ConfigError(name + ": unknown pattern kind " + val);
            saw_kind = true;
        } else {
            throw ConfigError(name + ": unknown header key " + key);
        }
    }
    if (!saw_length || !saw_kind) throw ConfigError(name + ": header needs length= and kind=");
    return h;
}

}  // namespace

PunctureLadder read_ladder_file(std::istream& is, const std::string& name) {
    PatternHeader h = read_header(is, name);
    if (h.kind != PatternKind::List)
        throw ConfigError(name + ": a ladder file must have kind=list");
    PunctureLadder ladder;
    ladder.base_length = h.length;
    std::string line;
    std::vector<uint8_t> seen(static_cast<size_t>(h.length), 0);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        int pos = std::stoi(line);
        if (pos < 0 || pos >= h.length)
            throw ConfigError(name + ": position " + std::to_string(pos) + " out of range");
        if (seen[static_cast<size_t>(pos)])
            throw ConfigError(name + ": duplicate position " + std::to_string(pos));
        seen[static_cast<size_t>(pos)] = 1;
        ladder.ordered_positions.push_back(pos);
    }
    return ladder;
}

PuncturePattern read_pattern_file(std::istream& is, int steps, const std::string& name) {
    PatternHeader h = read_header(is, name);
    if (h.kind == PatternKind::Periodic) {
        std::string mask;
        if (!std::getline(is, mask)) throw ConfigError(name + ": missing periodic mask line");
        return PuncturePattern::periodic(h.length, mask);
    }
    PunctureLadder ladder;
    ladder.base_length = h.length;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        ladder.ordered_positions.push_back(std::stoi(line));
    }
    if (steps < 0) steps = ladder.max_steps();
    if (steps > ladder.max_steps())
        throw ConfigError(name + ": requested step " + std::to_string(steps) + " but only " +
                          std::to_string(ladder.max_steps()) + " positions listed");
    return ladder.step(steps);
}

PunctureLadder load_ladder(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open pattern file " + path);
    return read_ladder_file(is, path);
}

PuncturePattern load_pattern(const std::string& path, int steps) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open pattern file " + path);
    return read_pattern_file(is, steps, path);
}

}  // namespace sccc
