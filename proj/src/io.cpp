#include "rpcoh/io.hpp"

#include "rpcoh/errors.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace rpcoh {

namespace {

double parse_double(std::string_view field, std::size_t line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw ParseError("line " + std::to_string(line) + ": malformed number '" + std::string(field) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json histogram_json(const Histogram& h) {
  return {{"lo", h.lo}, {"hi", h.hi}, {"counts", h.counts}, {"mean", h.mean}, {"stddev", h.stddev}};
}

std::string optional_text(const std::optional<double>& v) { return v ? format_number(*v) : std::string("n/a"); }

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  if (traj.coherence.size() != traj.size()) throw ContractViolation("trajectory has no coherence series to export");
  out << "t,trace,p_S,C\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_number(traj.times[i]) << ',' << format_number(traj.trace[i]) << ','
        << format_number(traj.singlet_probability[i]) << ',' << format_number(traj.coherence[i]) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "phi,Y_S\n";
  for (std::size_t i = 0; i < sweep.phi.size(); ++i) {
    out << format_number(sweep.phi[i]) << ',' << format_number(sweep.singlet_yield[i]) << '\n';
  }
}

void write_ensemble_csv(std::ostream& out, std::span<const EnsembleRecord> records) {
  out << kEnsembleHeader << '\n';
  for (const auto& r : records) {
    out << r.sample;
    for (double v : {r.dephasing, r.a_xx, r.a_yy, r.a_zz, r.exchange, r.phi_star, r.delta_yield, r.mean_coherence,
                     r.singlet_yield, r.triplet_yield}) {
      out << ',' << format_number(v);
    }
    out << '\n';
  }
}

std::vector<EnsembleRecord> read_ensemble_csv(std::istream& in) {
  std::vector<EnsembleRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kEnsembleHeader) {
        throw ParseError("line " + std::to_string(line_no) + ": expected header '" + std::string(kEnsembleHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 11) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 11 fields, found " +
                       std::to_string(fields.size()));
    }
    std::size_t index = 0;
    const auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), index);
    if (ec != std::errc{} || ptr != fields[0].data() + fields[0].size() || fields[0].empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": malformed seed_index '" + std::string(fields[0]) + "'");
    }
    EnsembleRecord r;
    r.sample = index;
    double* targets[] = {&r.dephasing, &r.a_xx,         &r.a_yy,           &r.a_zz,          &r.exchange,
                         &r.phi_star,  &r.delta_yield, &r.mean_coherence, &r.singlet_yield, &r.triplet_yield};
    for (std::size_t f = 0; f < 10; ++f) *targets[f] = parse_double(fields[f + 1], line_no);
    records.push_back(r);
  }
  if (!header_seen) throw ParseError("line 1: empty ensemble file");
  return records;
}

nlohmann::json stats_to_json(const EnsembleStats& stats) {
  nlohmann::json j;
  j["per_dephasing"] = nlohmann::json::array();
  for (const auto& s : stats.per_dephasing) {
    j["per_dephasing"].push_back({{"K_d", s.dephasing},
                                  {"count", s.count},
                                  {"pearson", optional_number(s.pearson)},
                                  {"spearman", optional_number(s.spearman)},
                                  {"mean_delta_Y_S", s.mean_delta_yield},
                                  {"mean_C_bar", s.mean_coherence},
                                  {"mean_Y_S", s.mean_singlet},
                                  {"mean_Y_T", s.mean_triplet},
                                  {"stddev_Y_S", s.stddev_singlet},
                                  {"stderr_Y_S", s.stderr_singlet},
                                  {"hist_Y_S", histogram_json(s.singlet_hist)},
                                  {"hist_Y_T", histogram_json(s.triplet_hist)}});
  }
  j["mean_pair_correlation"] = optional_number(stats.mean_pair_correlation);
  if (stats.exchange) {
    const auto& e = *stats.exchange;
    nlohmann::json bins = nlohmann::json::array();
    for (const auto& b : e.bins) {
      bins.push_back({{"J_lo", b.lo},
                      {"J_hi", b.hi},
                      {"count", b.count},
                      {"pearson", optional_number(b.correlation)},
                      {"mean_delta_Y_S", b.mean_delta_yield},
                      {"flagged", b.flagged}});
    }
    nlohmann::json band = nlohmann::json::array();
    for (const auto& b : e.band_correlations) {
      band.push_back({{"K_d", b.dephasing}, {"count", b.count}, {"pearson", optional_number(b.correlation)}});
    }
    j["exchange"] = {{"K_d", e.dephasing}, {"bins", bins}, {"band", e.band}, {"band_correlations", band}};
  } else {
    j["exchange"] = nullptr;
  }
  return j;
}

void write_stats_report(std::ostream& out, const EnsembleStats& stats) {
  out << "K_d  count  pearson  spearman  <<dY_S>>  <<C_bar>>  <<Y_S>>  sd(Y_S)  <<Y_T>>\n";
  for (const auto& s : stats.per_dephasing) {
    out << format_number(s.dephasing) << "  " << s.count << "  " << optional_text(s.pearson) << "  "
        << optional_text(s.spearman) << "  " << format_number(s.mean_delta_yield) << "  "
        << format_number(s.mean_coherence) << "  " << format_number(s.mean_singlet) << "  "
        << format_number(s.stddev_singlet) << "  " << format_number(s.mean_triplet) << '\n';
  }
  out << "correlation of mean pairs: " << optional_text(stats.mean_pair_correlation) << '\n';
  if (stats.exchange) {
    const auto& e = *stats.exchange;
    out << "\nexchange bins at K_d = " << format_number(e.dephasing) << '\n';
    out << "J_lo  J_hi  count  pearson  <<dY_S>>\n";
    for (const auto& b : e.bins) {
      out << format_number(b.lo) << "  " << format_number(b.hi) << "  " << b.count << "  "
          << optional_text(b.correlation) << "  " << format_number(b.mean_delta_yield)
          << (b.flagged ? "  (flagged)" : "") << '\n';
    }
    out << "\n|J| < " << format_number(e.band) << " band\n";
    for (const auto& b : e.band_correlations) {
      out << "K_d = " << format_number(b.dephasing) << "  count " << b.count << "  pearson "
          << optional_text(b.correlation) << '\n';
    }
  }
}

}  // namespace rpcoh
