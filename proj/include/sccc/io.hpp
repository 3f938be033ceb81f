#ifndef SCCC_IO_HPP
#define SCCC_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "sccc/bounds.hpp"
#include "sccc/enumerator.hpp"
#include "sccc/optimizer.hpp"
#include "sccc/simulator.hpp"

namespace sccc {

// All writers format numbers with fixed printf specifiers so reruns are
// byte-identical.
std::string format_double(double v);
std::string format_rat(const BigRat& v);

void write_enumerator_csv(std::ostream& os, const JointWeightTable& table, bool outer_layout);
void write_spectrum_csv(std::ostream& os, const SCCCSpectrum& spec);
void write_curve_csv(std::ostream& os, const BoundCurve& curve);
void write_cumulative_csv(std::ostream& os, const std::vector<std::pair<int, BigRat>>& cum);
void write_sim_report_csv(std::ostream& os, const SimReport& report);

nlohmann::ordered_json summary_to_json(const DistanceSummary& s);
nlohmann::ordered_json asymptotic_to_json(const AsymptoticReport& rep, const SCCCSpectrum& spec);
nlohmann::ordered_json parity_trajectory_json(const ParityLadderResult& res);
nlohmann::ordered_json systematic_trajectory_json(const SystematicLadderResult& res);

}  // namespace sccc

#endif
