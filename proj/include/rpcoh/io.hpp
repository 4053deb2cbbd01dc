#pragma once

#include "rpcoh/compass.hpp"
#include "rpcoh/dynamics.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace rpcoh {

/// Shortest round-trip is not wanted here: every number is written with 15
/// significant digits, independent of the global locale.
std::string format_number(double v);

/// Columns: t, trace, p_S, C.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// Columns: phi, Y_S.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

inline constexpr std::string_view kEnsembleHeader =
    "seed_index,K_d,A_xx,A_yy,A_zz,J,phi_star,delta_Y_S,C_bar,Y_S,Y_T";

void write_ensemble_csv(std::ostream& out, std::span<const EnsembleRecord> records);
/// Throws ParseError naming the offending line.
std::vector<EnsembleRecord> read_ensemble_csv(std::istream& in);

nlohmann::json stats_to_json(const EnsembleStats& stats);
void write_stats_report(std::ostream& out, const EnsembleStats& stats);

}  // namespace rpcoh
