#pragma once

// CSV and JSON-shaped serialization of sequences, reports, plans and curves.

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wtl/model_spaces.hpp"
#include "wtl/numeric.hpp"
#include "wtl/sampler.hpp"
#include "wtl/tractability.hpp"
#include "wtl/transfer.hpp"

namespace wtl::io {

using nlohmann::ordered_json;

/// Writes each header line prefixed with "# ".
inline void write_comment_header(std::ostream& os, const std::vector<std::string>& lines) {
  for (const auto& l : lines) os << "# " << l << '\n';
}

/// `index,value` rows; index starts at `first_index`.
inline void write_index_value_csv(std::ostream& os, const std::vector<double>& values, std::size_t first_index) {
  os << "index,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) os << (first_index + i) << ',' << format_real(values[i]) << '\n';
}

inline void write_csv(std::ostream& os, const spaces::EigenSequence& eigs) {
  write_index_value_csv(os, eigs.values(), 1);
}

inline void write_csv(std::ostream& os, const spaces::WidthSequence& widths) {
  write_index_value_csv(os, widths.values(), 0);
}

inline ordered_json to_json(const transfer::BoundConstants& c) {
  return ordered_json{{"b", c.b}, {"r", c.r}, {"D", c.D}, {"idealized", c.idealized}};
}

inline ordered_json to_json(const transfer::ComplexityProfile& p) { return ordered_json{{"A", p.A}, {"B", p.B}}; }

inline ordered_json to_json(const transfer::TransferReport& r) {
  ordered_json table = ordered_json::array();
  for (const auto& row : r.bound_table)
    table.push_back(ordered_json{{"epsilon", row.epsilon.value()},
                                 {"ln_inv_epsilon", row.epsilon.log_inverse()},
                                 {"n_std_bound", row.n_std_bound},
                                 {"n_std_bound_real", row.n_std_bound_real},
                                 {"n_all_bound", row.n_all_bound}});
  return ordered_json{{"profile", to_json(r.profile)},
                      {"constants", to_json(r.constants)},
                      {"gelfand_bound", {{"scale", r.gelfand_scale}, {"A", r.profile.A}, {"B", r.profile.B}}},
                      {"linear_width_bound",
                       {{"scale", r.linear_scale}, {"power", 0.5}, {"A", r.profile.A}, {"B", r.profile.B}}},
                      {"n0", r.n0},
                      {"B0", r.B0},
                      {"R", r.R},
                      {"C", r.C},
                      {"C_proof", r.C_proof},
                      {"bound_table", table}};
}

/// `epsilon,ln_inv_epsilon,n_std_bound,n_std_bound_real,n_all_bound`.
inline void write_bound_table_csv(std::ostream& os, const transfer::TransferReport& r) {
  os << "epsilon,ln_inv_epsilon,n_std_bound,n_std_bound_real,n_all_bound\n";
  for (const auto& row : r.bound_table)
    os << format_real(row.epsilon.value()) << ',' << format_real(row.epsilon.log_inverse()) << ','
       << format_real(row.n_std_bound) << ',' << format_real(row.n_std_bound_real) << ','
       << format_real(row.n_all_bound) << '\n';
}

inline ordered_json to_json(const sampler::SamplingPlan& plan) {
  ordered_json pts = ordered_json::array();
  for (const auto& p : plan.points) pts.push_back(p);
  return ordered_json{{"seed", plan.seed}, {"m", plan.m}, {"points", pts}, {"weights", plan.weights}};
}

inline sampler::SamplingPlan plan_from_json(const ordered_json& j) {
  sampler::SamplingPlan plan;
  plan.seed = j.at("seed").get<std::uint64_t>();
  plan.m = j.at("m").get<std::size_t>();
  for (const auto& p : j.at("points")) plan.points.push_back(p.get<std::vector<double>>());
  plan.weights = j.at("weights").get<std::vector<double>>();
  if (plan.weights.size() != plan.points.size()) throw ValidationError("plan has mismatched points and weights");
  return plan;
}

/// `n,median_error,best_error,floor_sigma,ceiling_bound`, then m and the
/// truncation remainder.
inline void write_curve_csv(std::ostream& os, const std::vector<sampler::CurveRow>& rows) {
  os << "n,median_error,best_error,floor_sigma,ceiling_bound,m,truncation_remainder\n";
  for (const auto& r : rows)
    os << r.n << ',' << format_real(r.median_error) << ',' << format_real(r.best_error) << ','
       << format_real(r.floor_sigma) << ',' << format_real(r.ceiling_bound) << ',' << r.m << ','
       << format_real(r.remainder) << '\n';
}

inline ordered_json to_json(const tractability::ClassificationReport& r) {
  ordered_json implied = ordered_json::array();
  for (auto c : r.implied) implied.push_back(tractability::to_string(c));
  ordered_json fits = ordered_json::array();
  for (const auto& f : r.fits)
    fits.push_back(ordered_json{{"form", tractability::to_string(f.cls)},
                                {"coefficients", f.coefficients},
                                {"max_rel_residual", f.max_rel_residual}});
  ordered_json diags = ordered_json::array();
  for (const auto& d : r.diagnostics) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < d.ratios.size(); ++i)
      rows.push_back(ordered_json::array(
          {r.diagnostic_grid[i].d, r.diagnostic_grid[i].eps.log_inverse(), d.ratios[i]}));
    diags.push_back(ordered_json{{"alpha", d.alpha},
                                 {"beta", d.beta},
                                 {"columns", {"d", "ln_inv_epsilon", "ratio"}},
                                 {"ratios", rows},
                                 {"verdict", d.decreasing_to_zero ? "decreasing-to-zero trend" : "no trend"}});
  }
  return ordered_json{{"family", r.family},
                      {"class", tractability::to_string(r.cls)},
                      {"implied", implied},
                      {"fits", fits},
                      {"diagnostics", diags}};
}

/// Reads `d,epsilon,n` (or `d,ln_inv_epsilon,n`) rows; '#' lines are skipped.
inline std::vector<tractability::DataPoint> read_complexity_csv(std::istream& is) {
  std::vector<tractability::DataPoint> out;
  std::string line;
  bool log_column = false;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 3) throw ValidationError("line " + std::to_string(line_no) + ": expected 3 columns");
    if (!header_seen) {
      header_seen = true;
      if (cells[0] == "d") {
        if (cells[1] == "ln_inv_epsilon") log_column = true;
        else if (cells[1] != "epsilon") throw ValidationError("second column must be epsilon or ln_inv_epsilon");
        continue;
      }
    }
    try {
      const auto d = static_cast<std::uint64_t>(std::stoull(cells[0]));
      const double e = std::stod(cells[1]);
      const double n = std::stod(cells[2]);
      out.push_back({d, log_column ? Epsilon::from_log_inverse(e) : Epsilon::from_value(e), n});
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw ValidationError("line " + std::to_string(line_no) + ": not numeric");
    }
  }
  return out;
}

} // namespace wtl::io
