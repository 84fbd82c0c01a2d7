// wtl: experiments for transferring linear-information complexity bounds to
// function-value sampling. Subcommands: widths, transfer, sample, classify, verify.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wtl/io.hpp"
#include "wtl/model_spaces.hpp"
#include "wtl/sampler.hpp"
#include "wtl/tractability.hpp"
#include "wtl/transfer.hpp"
#include "wtl/verify.hpp"

namespace {

using namespace wtl;

struct Options {
  std::string out;
  std::uint64_t seed = 42;
  std::uint64_t b = 1;
  double r = 1.0;
  double D = 1.0;

  // model space
  std::string family = "geometric";
  double omega = 0.5;
  std::optional<double> c;
  double kappa = 1.0;
  std::string values;
  std::uint64_t d = 1;
  std::size_t count = 16;
  std::string basis = "trigonometric";

  // transfer / classify
  std::optional<double> A, B, p, q, t, h;
  std::uint64_t v0 = 1;
  double alpha = 1.0;
  double beta = 1.0;
  std::string eps_grid = "e^-1..e^-5";
  std::string csv;
  std::string form;
  std::string data;
  std::string uwt;
  int uwt_jmax = 10;
  bool std_bound = false;

  // sample
  std::string n_grid = "4,8,16,32";
  std::size_t trials = 5;
  std::size_t m = 0;
  double oversampling = 2.0;
  std::size_t truncation_factor = 4;
  std::string plan_out;

  // verify
  std::size_t samples = 0;
  bool inject_fault = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ValidationError("not a number: '" + s + "'");
  return v;
}

/// Accepts comma-separated items of the form `e^-k`, `e^-a..e^-b` (integer
/// steps) or plain decimals.
std::vector<Epsilon> parse_eps_grid(const std::string& spec) {
  std::vector<Epsilon> grid;
  auto exponent = [](const std::string& item) {
    if (item.rfind("e^-", 0) != 0) throw ValidationError("expected e^-k, got '" + item + "'");
    return parse_double(item.substr(3));
  };
  for (const auto& item : split(spec, ',')) {
    if (auto dots = item.find(".."); dots != std::string::npos) {
      const double lo = exponent(item.substr(0, dots));
      const double hi = exponent(item.substr(dots + 2));
      if (hi < lo) throw ValidationError("epsilon range must run from larger to smaller epsilon");
      for (double k = lo; k <= hi + 1e-12; k += 1.0) grid.push_back(Epsilon::from_log_inverse(k));
    } else if (item.rfind("e^-", 0) == 0) {
      grid.push_back(Epsilon::from_log_inverse(exponent(item)));
    } else {
      grid.push_back(Epsilon::from_value(parse_double(item)));
    }
  }
  if (grid.empty()) throw ValidationError("empty epsilon grid");
  return grid;
}

transfer::BoundConstants constants(const Options& o, bool idealized) {
  transfer::BoundConstants c{o.b, o.r, o.D, idealized};
  c.validate();
  return c;
}

spaces::ModelSpace model_space(const Options& o) {
  std::map<std::string, std::string> kv{{"family", o.family},
                                        {"omega", format_real(o.omega)},
                                        {"kappa", format_real(o.kappa)},
                                        {"d", std::to_string(o.d)},
                                        {"count", std::to_string(o.count)},
                                        {"basis", o.basis}};
  if (o.c) kv["c"] = format_real(*o.c);
  if (!o.values.empty()) kv["values"] = o.values;
  return spaces::model_space_from_config(kv).space;
}

double require(const std::optional<double>& v, const char* name) {
  if (!v) throw ValidationError(std::string("missing --") + name);
  return *v;
}

// ---------------------------------------------------------------------------

void cmd_widths(const Options& o, std::ostream& os) {
  const auto space = model_space(o);
  const auto eigs = spaces::tensor_top_eigenvalues(space, o.count);
  io::write_csv(os, spaces::widths_from_eigenvalues(eigs, spaces::WidthKind::gelfand));
}

void cmd_transfer(const Options& o, const transfer::BoundConstants& consts, std::ostream& os,
                  io::ordered_json& doc) {
  const auto grid = parse_eps_grid(o.eps_grid);
  transfer::ComplexityProfile profile{};
  io::ordered_json derivation;
  if (o.A || o.B) {
    profile = {require(o.A, "A"), require(o.B, "B")};
    derivation = {{"form", "profile"}};
  } else if (o.t) {
    const double c = require(o.c, "c");
    profile = transfer::quasi_polynomial_profile(c, *o.t, o.d);
    io::ordered_json display = io::ordered_json::array();
    std::vector<std::pair<std::uint64_t, Epsilon>> cal;
    for (const auto& e : grid) cal.emplace_back(o.d, e);
    const double C = transfer::calibrate_qpt_display_constant(c, *o.t, consts, cal);
    for (const auto& e : grid)
      display.push_back({{"epsilon", e.value()},
                         {"log_exact", transfer::log_n_std_bound_real(profile, consts, e)},
                         {"log_display", transfer::qpt_display_log_value(c, *o.t, o.d, e, C)}});
    derivation = {{"form", "quasi-polynomial"}, {"c", c}, {"t", *o.t}, {"d", o.d},
                  {"threshold", transfer::qpt_threshold(c, *o.t)}, {"display_constant", C},
                  {"display", display}};
  } else if (o.p) {
    const double c = require(o.c, "c");
    const double q = o.q.value_or(0.0);
    profile = transfer::polynomial_profile(c, *o.p, q, o.d);
    derivation = {{"form", "polynomial"}, {"c", c}, {"q", q}, {"p", *o.p}, {"d", o.d},
                  {"display_constant", transfer::corollary_display_constant(c, *o.p, q, consts)}};
  } else {
    throw ValidationError("transfer needs --A/--B, --c/--p[/--q] or --c/--t with --d");
  }

  const auto report = transfer::make_transfer_report(profile, consts, grid);
  doc["derivation"] = derivation;
  const auto report_json = io::to_json(report);
  for (const auto& [k, v] : report_json.items()) doc[k] = v;

  if (o.h) {
    io::ordered_json weak = io::ordered_json::array();
    for (const auto& e : grid) {
      const auto w = transfer::weak_transfer_bound(*o.h, o.v0, o.alpha, o.beta, consts, o.d, e);
      weak.push_back({{"epsilon", e.value()}, {"bound", w.count}, {"bound_real", w.real},
                      {"premise_threshold", w.premise_threshold}});
    }
    doc["weak_transfer"] = {{"h", *o.h}, {"v0", o.v0}, {"alpha", o.alpha}, {"beta", o.beta}, {"table", weak}};
  }

  if (!o.csv.empty()) {
    std::ostringstream csv;
    for (const auto& line : doc["config"]) csv << "# " << line.get<std::string>() << '\n';
    io::write_bound_table_csv(csv, report);
    std::ofstream f(o.csv, std::ios::binary);
    if (!f) throw ValidationError("cannot open " + o.csv);
    f << csv.str();
  }
  os << doc.dump(2) << '\n';
}

void cmd_sample(const Options& o, const transfer::BoundConstants& consts, std::ostream& os) {
  const auto space = model_space(o);
  std::vector<std::size_t> grid;
  for (const auto& s : split(o.n_grid, ',')) {
    const double v = parse_double(s);
    if (!(v >= 1.0) || v != std::floor(v)) throw ValidationError("n-grid entries must be positive integers");
    grid.push_back(static_cast<std::size_t>(v));
  }
  sampler::CurveOptions opts;
  opts.oversampling = o.oversampling;
  opts.fixed_m = o.m;
  opts.truncation_factor = o.truncation_factor;
  opts.constants = consts;
  const auto rows = sampler::e_n_empirical_curve(space, grid, o.trials, o.seed, opts);
  io::write_curve_csv(os, rows);

  if (!o.plan_out.empty()) {
    const std::size_t m = o.m ? o.m : sampler::basis_size_for(grid.front(), o.oversampling);
    const auto system = sampler::OrthonormalSystem::for_space(space, m);
    const auto plan = sampler::draw_plan(system, m, grid.front(), sampler::derive_seed(sampler::derive_seed(o.seed, 0), 0));
    std::ofstream f(o.plan_out, std::ios::binary);
    if (!f) throw ValidationError("cannot open " + o.plan_out);
    f << io::to_json(plan).dump(2) << '\n';
  }
}

void cmd_classify(const Options& o, const transfer::BoundConstants& consts, std::ostream& os,
                  io::ordered_json& doc) {
  using namespace tractability;
  ClassificationReport report;
  std::optional<ProfileFamily> family;
  if (o.form == "constant") family = ConstantForm{require(o.A, "A"), require(o.B, "B")};
  else if (o.form == "poly" || o.form == "polynomial")
    family = PolynomialForm{require(o.c, "c"), o.q.value_or(0.0), require(o.p, "p")};
  else if (o.form == "quasi" || o.form == "quasi-poly") family = QuasiPolynomialForm{require(o.c, "c"), require(o.t, "t")};
  else if (o.form != "data") throw ValidationError("--form must be constant, poly, quasi or data");

  if (family) {
    report.family = describe(*family);
    report.cls = classify(*family);
  } else {
    if (o.data.empty()) throw ValidationError("--form data needs --data <csv>");
    std::ifstream f(o.data);
    if (!f) throw ValidationError("cannot open " + o.data);
    const auto result = classify_data(io::read_complexity_csv(f));
    report.family = "data:" + o.data;
    report.cls = result.cls;
    report.fits = result.attempts;
  }
  if (report.cls != TractabilityClass::unclassified) report.implied = implied_classes(report.cls);

  if (!o.uwt.empty()) {
    if (!family) throw ValidationError("UWT diagnostics need a declared family");
    std::function<double(std::uint64_t, Epsilon)> log_n = [&](std::uint64_t d, Epsilon e) {
      return log_bound(*family, d, e);
    };
    if (o.std_bound) {
      log_n = [&, fam = *family](std::uint64_t d, Epsilon e) -> double {
        if (const auto* f = std::get_if<QuasiPolynomialForm>(&fam))
          return transfer::qpt_transfer_bound(f->c, f->t, consts, d, e).log_real;
        if (const auto* f = std::get_if<PolynomialForm>(&fam))
          return transfer::log_n_std_bound_real(transfer::polynomial_profile(f->c, f->p, f->q, d), consts, e);
        if (const auto* f = std::get_if<ConstantForm>(&fam))
          return transfer::log_n_std_bound_real({std::max(f->A, 1.0), f->B}, consts, e);
        throw ValidationError("no transfer for this family");
      };
    }
    report.diagnostic_grid = dyadic_grid(o.uwt_jmax);
    for (const auto& s : split(o.uwt, ',')) {
      const double a = parse_double(s);
      report.diagnostics.push_back(uwt_diagnostic(log_n, a, a, report.diagnostic_grid));
    }
  }
  const auto report_json = io::to_json(report);
  for (const auto& [k, v] : report_json.items()) doc[k] = v;
  os << doc.dump(2) << '\n';
}

int cmd_verify(const Options& o, std::ostream& os) {
  verify::VerifyOptions opt;
  opt.seed = o.seed;
  opt.samples = o.samples;
  if (o.inject_fault) opt.fault_scale = 0.9;
  const auto results = verify::run_all(opt);
  bool ok = true;
  os << "suite,cases,violations,status\n";
  for (const auto& r : results) {
    os << r.name << ',' << r.cases << ',' << r.violations << ','
       << (r.passed() ? "PASS" : "FAIL") << '\n';
    ok = ok && r.passed();
  }
  for (const auto& r : results)
    if (!r.passed()) os << "# counterexample [" << r.name << "] " << r.counterexample << '\n';
  return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer of linear-information complexity bounds to function-value sampling"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  Options o;

  app.set_config("--config", "", "Key-value configuration file");
  app.add_option("--out", o.out, "Output path (stdout when omitted)");
  app.add_option("--seed", o.seed, "PRNG seed");
  auto* opt_b = app.add_option("--b", o.b, "Universal constant b of the sampling-width inequality");
  auto* opt_r = app.add_option("--r", o.r, "Exponent r in (0,2)");
  auto* opt_D = app.add_option("--D", o.D, "Constant D of the weak transfer");

  app.add_option("--family", o.family, "geometric | stretched-exponential | explicit");
  app.add_option("--omega", o.omega, "Geometric ratio");
  app.add_option("--c", o.c, "Stretched-exponential rate, or the c of a polynomial/quasi-polynomial family");
  app.add_option("--kappa", o.kappa, "Stretched-exponential exponent");
  app.add_option("--values", o.values, "Explicit eigenvalues, comma separated");
  app.add_option("--d", o.d, "Dimension");
  app.add_option("--count", o.count, "Number of widths");
  app.add_option("--basis", o.basis, "trigonometric | legendre");

  app.add_option("--A", o.A, "Profile scale A");
  app.add_option("--B", o.B, "Profile exponent B");
  app.add_option("--p", o.p, "Polynomial family exponent p");
  app.add_option("--q", o.q, "Polynomial family degree q");
  app.add_option("--t", o.t, "Quasi-polynomial family exponent t");
  app.add_option("--h", o.h, "Weak transfer parameter h in (0,1/16]");
  app.add_option("--v0", o.v0, "Weak transfer premise index v0");
  app.add_option("--alpha", o.alpha, "Weak transfer alpha");
  app.add_option("--beta", o.beta, "Weak transfer beta");
  app.add_option("--eps-grid", o.eps_grid, "Accuracy grid, e.g. e^-1..e^-5");
  app.add_option("--csv", o.csv, "Also write the bound table as CSV");
  app.add_option("--form", o.form, "constant | poly | quasi | data");
  app.add_option("--data", o.data, "CSV of d,epsilon,n");
  app.add_option("--uwt", o.uwt, "Comma-separated alpha=beta values for UWT diagnostics");
  app.add_option("--uwt-jmax", o.uwt_jmax, "Diagnostic grid d=2^j, eps=e^{-2^j}, j=1..jmax");
  app.add_flag("--std", o.std_bound, "Diagnose the transferred standard-information bound");

  app.add_option("--n-grid", o.n_grid, "Sample counts, comma separated");
  app.add_option("--trials", o.trials, "Plans per grid point");
  app.add_option("--m", o.m, "Fixed basis size (default: from the oversampling rule)");
  app.add_option("--oversampling", o.oversampling, "n = ceil(factor * m ln(m+1))");
  app.add_option("--truncation-factor", o.truncation_factor, "Evaluation truncation M = factor * m");
  app.add_option("--plan-out", o.plan_out, "Write the first sampling plan as JSON");

  app.add_option("--samples", o.samples, "Random tuples per verification suite");
  app.add_flag("--inject-fault", o.inject_fault, "Lower every verified bound by 10% (harness self-test)");

  auto* widths = app.add_subcommand("widths", "Gelfand/linear widths of a model space as index,value CSV");
  auto* transfer_cmd = app.add_subcommand("transfer", "Standard-information bounds from a complexity profile");
  auto* sample = app.add_subcommand("sample", "Empirical worst-case errors of weighted least squares");
  auto* classify = app.add_subcommand("classify", "Exponential tractability classification");
  auto* verify_cmd = app.add_subcommand("verify", "Run the inequality verification suites");

  CLI11_PARSE(app, argc, argv);

  const bool idealized = opt_b->count() == 0 || opt_r->count() == 0 || opt_D->count() == 0;
  std::string command = app.get_subcommands().front()->get_name();

  // Explicitly supplied options first (a valid config file once the "# " is
  // stripped), then the defaults that were in effect.
  std::vector<std::string> header{"wtl " + command + (idealized ? " (idealized constants: b, r or D defaulted)" : "")};
  std::vector<std::string> defaults;
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "config" || name == "help") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      std::string value = res.empty() ? "true" : res.back();
      if (opt->get_type_size() == 0) value = "true";
      header.push_back(name + "=\"" + value + "\"");
    } else if (!opt->get_default_str().empty()) {
      defaults.push_back("(default) " + name + "=" + opt->get_default_str());
    }
  }
  header.insert(header.end(), defaults.begin(), defaults.end());

  std::ostringstream body;
  int status = 0;
  try {
    const auto consts = constants(o, idealized);
    io::ordered_json doc;
    doc["config"] = header;
    if (widths->parsed()) {
      io::write_comment_header(body, header);
      cmd_widths(o, body);
    } else if (transfer_cmd->parsed()) {
      cmd_transfer(o, consts, body, doc);
    } else if (sample->parsed()) {
      io::write_comment_header(body, header);
      cmd_sample(o, consts, body);
    } else if (classify->parsed()) {
      cmd_classify(o, consts, body, doc);
    } else if (verify_cmd->parsed()) {
      io::write_comment_header(body, header);
      status = cmd_verify(o, body);
    }
  } catch (const SingularityError& e) {
    std::cerr << "error: singular design: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  if (o.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot open " << o.out << '\n';
      return 1;
    }
    f << body.str();
  }
  return status;
}
