/*
 * Copyright 2026 The pebms Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pebms/cli.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "pebms/axiom_checker.hpp"
#include "pebms/core_spaces.hpp"
#include "pebms/errors.hpp"
#include "pebms/examples_gallery.hpp"
#include "pebms/fixed_point.hpp"
#include "pebms/fuzzer.hpp"
#include "pebms/sequence_diagnostics.hpp"

namespace pebms::cli {

using nlohmann::json;

namespace {

constexpr std::string_view kGalleryPrefix = "gallery:";
// Relative slack when comparing an observed distance with a proof bound.
constexpr double kBoundRelTol = 1e-12;
constexpr std::size_t kBanachPairLimit = 20;
constexpr std::size_t kReportedViolations = 20;

/// Thrown for usage problems detected after CLI11 parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedSpace {
  AnySpace space;
  std::optional<GalleryEntry> entry;
  std::string digest;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

LoadedSpace load_space(const std::string& input) {
  if (input.rfind(kGalleryPrefix, 0) == 0) {
    GalleryEntry e = build_example(input.substr(kGalleryPrefix.size()));
    const std::string canonical = space_to_json(e.space).dump();
    AnySpace space = e.space;
    return {std::move(space), std::move(e), input_digest(canonical)};
  }
  const std::string bytes = read_file(input);
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::parse_error& ex) {
    throw ParseError(input + ": " + ex.what());
  }
  return {space_from_json(j), std::nullopt, input_digest(bytes)};
}

const AxiomProfile& declared(const AnySpace& space) {
  return std::visit([](const auto& s) -> const AxiomProfile& { return s.declared(); }, space);
}

AxiomProfile resolve_profile(const RunConfig& c, const AnySpace& space) {
  if (c.profile.empty()) {
    if (c.s) throw UsageError("--s needs --profile");
    return declared(space);
  }
  return AxiomProfile::from_tag(c.profile, c.s);
}

json envelope(const RunConfig& c, const std::string& digest, json result) {
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"command", c.subcommand},
          {"config", to_json(c)},
          {"input_digest", digest},
          {"result", std::move(result)}};
}

std::string header_line(const RunConfig& c, const std::string& digest) {
  return std::string(kToolName) + " " + kToolVersion + "  " + c.subcommand +
         (c.input.empty() ? "" : "  input=" + c.input) + "  digest=" + digest + "\n";
}

double parse_real(const std::string& text, const char* what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw UsageError(std::string(what) + ": '" + text + "' is not a number");
  }
  return v;
}

std::size_t parse_point(const FiniteSpace& space, const std::string& text, const char* what) {
  const auto& labels = space.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == text) return i;
  }
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || v >= space.size()) {
    throw UsageError(std::string(what) + ": '" + text + "' is neither a label nor an index < " +
                     std::to_string(space.size()));
  }
  return v;
}

FiniteMap parse_finite_map(const FiniteSpace& space, const std::string& text) {
  std::vector<std::size_t> table;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) table.push_back(parse_point(space, item, "--map"));
  if (table.size() != space.size()) {
    throw UsageError("--map: expected " + std::to_string(space.size()) +
                     " comma-separated targets, got " + std::to_string(table.size()));
  }
  return FiniteMap(std::move(table), text);
}

// --- check -----------------------------------------------------------------

int cmd_check(const RunConfig& c, std::ostream& out) {
  const LoadedSpace loaded = load_space(c.input);
  const AxiomProfile profile = resolve_profile(c, loaded.space);
  const AxiomReport report = std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, FiniteSpace>) {
          return check_axioms(s, profile);
        } else {
          return check_axioms_sampled(s, c.grid_n, profile);
        }
      },
      loaded.space);

  if (c.format == "json") {
    out << envelope(c, loaded.digest, to_json(report)).dump(2) << '\n';
  } else if (c.format == "csv") {
    out << "# " << header_line(c, loaded.digest);
    out << "axiom,witness,lhs,rhs,margin\n";
    for (const auto& v : report.violations) {
      std::string w;
      for (std::size_t i = 0; i < v.witness.size(); ++i) w += (i ? " " : "") + std::to_string(v.witness[i]);
      out << axiom_name(v.axiom) << ',' << w << ',' << csv_real(v.lhs) << ',' << csv_real(v.rhs)
          << ',' << csv_real(v.margin) << '\n';
    }
  } else {
    out << header_line(c, loaded.digest);
    out << "profile " << profile.tag() << ": " << (report.passed ? "PASS" : "FAIL") << " ("
        << report.checks_run << " checks" << (report.grid_relative ? ", grid evidence" : "")
        << ")\n";
    std::size_t shown = 0;
    for (const auto& v : report.violations) {
      if (shown++ == kReportedViolations) {
        out << "  ... " << report.violations.size() - kReportedViolations << " more\n";
        break;
      }
      out << "  " << describe_violation(v) << '\n';
    }
  }
  return report.passed ? kExitOk : kExitFailure;
}

// --- solve -----------------------------------------------------------------

struct SolveOutcome {
  json result;
  std::string trace_csv;
  bool converged = false;
  bool preconditions = false;
  std::vector<std::string> warnings;
};

template <class Space, class Map>
SolveOutcome solve_on(const Space& space, const Map& map, const ContractionSpec& spec,
                      typename Space::point_type x0, const SolveOptions& opt) {
  const auto cs = certified_solve(space, map, spec, x0, opt);
  SolveOutcome o;
  o.converged = cs.solve.converged();
  o.preconditions = cs.preconditions_hold();
  o.trace_csv = trace_to_csv(cs.solve.trace);

  json pre = json::array();
  for (const auto& p : cs.preconditions) {
    pre.push_back(to_json(p));
    if (!p.verified) o.warnings.push_back("precondition " + p.name + " failed: " + p.detail);
  }
  if (!cs.contraction.passed) {
    o.warnings.push_back("smallest k admissible on the sample: " +
                         format_real(cs.contraction.worst_ratio));
  }
  json axioms{{"passed", cs.axioms.passed},
              {"checks_run", cs.axioms.checks_run},
              {"violations_total", cs.axioms.violations.size()}};
  json viol = json::array();
  for (std::size_t i = 0; i < cs.axioms.violations.size() && i < kReportedViolations; ++i) {
    viol.push_back(to_json(cs.axioms.violations[i]));
  }
  axioms["violations"] = viol;
  put_profile(axioms, opt.profile);

  o.result = {{"spec", to_json(spec)},
              {"preconditions", pre},
              {"preconditions_hold", o.preconditions},
              {"axioms", axioms},
              {"contraction", to_json(cs.contraction)},
              {"theta_condition", to_json(cs.theta)},
              {"suggested_k", cs.contraction.worst_ratio},
              {"converged", o.converged},
              {"iterations", cs.solve.trace.rows.size()},
              {"final_step", cs.solve.final_step}};
  o.result["certificate"] =
      cs.solve.certificate ? to_json(*cs.solve.certificate) : json(nullptr);
  if (!o.converged) {
    o.warnings.push_back("no certificate after " + std::to_string(opt.max_iter) +
                         " iterations (last step " + format_real(cs.solve.final_step) + ")");
  }
  return o;
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const LoadedSpace loaded = load_space(c.input);
  const std::optional<GalleryEntry>& entry = loaded.entry;

  ContractionFamily family;
  if (!c.family.empty()) {
    family = family_from_name(c.family);
  } else if (entry && entry->contraction) {
    family = entry->contraction->family;
  } else {
    throw UsageError("--family is required");
  }
  double k = 0.0;
  if (c.k) {
    k = *c.k;
  } else if (entry && entry->contraction && entry->contraction->family == family) {
    k = entry->contraction->k;
  } else {
    throw UsageError("--k is required");
  }
  const ContractionSpec spec = ContractionSpec::make(family, k);

  SolveOptions opt;
  opt.tol = c.tol;
  opt.max_iter = c.max_iter;
  opt.grid_n = c.grid_n;
  opt.horizon = c.horizon;
  opt.profile = resolve_profile(c, loaded.space);

  SolveOutcome o;
  if (const auto* fs = std::get_if<FiniteSpace>(&loaded.space)) {
    std::optional<FiniteMap> map;
    if (!c.map.empty()) {
      map = parse_finite_map(*fs, c.map);
    } else if (entry && entry->map) {
      map = std::get<FiniteMap>(*entry->map);
    } else {
      throw UsageError("--map is required");
    }
    if (c.x0.empty()) throw UsageError("--x0 is required");
    o = solve_on(*fs, *map, spec, parse_point(*fs, c.x0, "--x0"), opt);
  } else {
    const auto& as = std::get<AnalyticSpace>(loaded.space);
    std::optional<AnalyticMap> map;
    if (!c.map.empty()) {
      map.emplace(c.map, as.domain());
    } else if (entry && entry->map) {
      map = std::get<AnalyticMap>(*entry->map);
    } else {
      throw UsageError("--map is required");
    }
    double x0 = 0.0;
    if (!c.x0.empty()) {
      x0 = parse_real(c.x0, "--x0");
    } else if (entry && entry->start) {
      x0 = *entry->start;
    } else {
      throw UsageError("--x0 is required");
    }
    o = solve_on(as, *map, spec, x0, opt);
  }

  const json report = envelope(c, loaded.digest, o.result);
  if (!c.trace_out.empty()) write_file(c.trace_out, o.trace_csv);
  if (!c.cert_out.empty()) write_file(c.cert_out, report.dump(2) + "\n");
  for (const auto& w : o.warnings) err << "warning: " << w << '\n';

  if (c.format == "json") {
    out << report.dump(2) << '\n';
  } else if (c.format == "csv") {
    out << o.trace_csv;
  } else {
    out << header_line(c, loaded.digest);
    out << family_name(spec.family) << " k=" << format_real(spec.k) << "  preconditions "
        << (o.preconditions ? "hold" : "FAIL") << "  converged " << (o.converged ? "yes" : "no")
        << "  iterations " << o.result["iterations"].get<std::size_t>() << '\n';
    for (const auto& p : o.result["preconditions"]) {
      out << "  " << (p["verified"].get<bool>() ? "ok   " : "FAIL ") << p["name"].get<std::string>()
          << "  " << p["detail"].get<std::string>() << '\n';
    }
    if (o.converged) {
      const auto& cert = o.result["certificate"];
      out << "  u = " << cert["fixed_point"].dump() << "  p(Tu,u) = " << cert["residual"].dump()
          << "  p(u,u) = " << cert["self_distance"].dump() << '\n';
    }
  }
  if (!o.converged) return kExitNoConvergence;
  return o.preconditions ? kExitOk : kExitFailure;
}

// --- bound -----------------------------------------------------------------

struct BoundCheck {
  std::size_t n = 0;
  std::optional<std::size_t> m;
  std::string kind;
  double observed = 0.0;
  double bound = 0.0;
  bool holds = true;
};

bool within(double observed, double bound) {
  return observed <= bound + kBoundRelTol * std::fabs(bound);
}

template <class Space>
std::vector<BoundCheck> bound_checks(const Space& space, const std::vector<TraceCsvRow>& rows,
                                     const ContractionSpec& spec, const RunConfig& c) {
  using Point = typename Space::point_type;
  std::vector<Point> points;
  for (const auto& r : rows) {
    if constexpr (std::is_same_v<Point, std::size_t>) {
      if (!(r.x >= 0.0) || r.x != std::floor(r.x) || r.x >= static_cast<double>(space.size())) {
        throw UsageError("trace row " + std::to_string(r.n) + ": x is not a point index");
      }
      points.push_back(static_cast<std::size_t>(r.x));
    } else {
      points.push_back(r.x);
    }
  }
  const std::span<const Point> pts(points);
  std::vector<BoundCheck> out;
  auto add = [&](std::size_t n, std::optional<std::size_t> m, std::string kind, double obs,
                 double bound) { out.push_back({n, m, std::move(kind), obs, bound, within(obs, bound)}); };

  switch (spec.family) {
    case ContractionFamily::kBanach: {
      auto pair = [&](std::size_t n, std::size_t m) {
        const auto b = banach_tail_bound(pts, space, spec.k, n, m);
        add(n, m, "banach_tail", space.p(points[n], points[m]), b.value);
      };
      if (c.bound_n || c.bound_m) {
        if (!c.bound_n || !c.bound_m) throw UsageError("--n and --m go together");
        pair(*c.bound_n, *c.bound_m);
      } else {
        const std::size_t last = std::min(kBanachPairLimit, points.size() - 1);
        for (std::size_t m = 1; m <= last; ++m) {
          for (std::size_t n = 0; n < m; ++n) pair(n, m);
        }
      }
      break;
    }
    case ContractionFamily::kKannan: {
      const double p01 = rows.front().step_dist;
      for (const auto& r : rows) {
        if (c.bound_n && r.n != *c.bound_n) continue;
        add(r.n, std::nullopt, "kannan_step", r.step_dist, kannan_step_bound(spec.k, r.n, p01));
      }
      break;
    }
    case ContractionFamily::kModifiedKannan: {
      const std::size_t m = c.bound_m.value_or(1);
      for (std::size_t n = 0; n + 1 < points.size(); ++n) {
        if (c.bound_n && n != *c.bound_n) continue;
        add(n, std::nullopt, "modkannan_step", space.p(points[n + 1], points[n]),
            modkannan_step_bound(pts, space, spec.k, n));
        if (n >= 1 && n + m < points.size()) {
          const auto b = modkannan_bounds(pts, space, spec.k, n, m);
          add(n, m, "modkannan_window", space.p(points[n + m], points[n]), b.window_bound);
        }
      }
      break;
    }
  }
  if (out.empty()) throw UsageError("bound: nothing to evaluate for the requested indices");
  return out;
}

int cmd_bound(const RunConfig& c, std::ostream& out) {
  const LoadedSpace loaded = load_space(c.input);
  if (c.trace_in.empty()) throw UsageError("--trace is required");
  if (c.family.empty() || !c.k) throw UsageError("--family and --k are required");
  const ContractionSpec spec = ContractionSpec::make(family_from_name(c.family), *c.k);
  const std::string trace_bytes = read_file(c.trace_in);
  std::istringstream trace_stream(trace_bytes);
  const auto rows = read_trace_csv(trace_stream);
  if (rows.empty()) throw UsageError("trace '" + c.trace_in + "' has no rows");
  const std::string digest = input_digest(space_to_json(loaded.space).dump() + "\n" + trace_bytes);

  const auto checks =
      std::visit([&](const auto& s) { return bound_checks(s, rows, spec, c); }, loaded.space);
  const bool all = std::all_of(checks.begin(), checks.end(), [](const BoundCheck& b) { return b.holds; });

  if (c.format == "json") {
    json arr = json::array();
    for (const auto& b : checks) {
      json j{{"kind", b.kind}, {"n", b.n}, {"observed", b.observed}, {"bound", b.bound}, {"holds", b.holds}};
      if (b.m) j["m"] = *b.m;
      arr.push_back(j);
    }
    out << envelope(c, digest, {{"spec", to_json(spec)}, {"checks", arr}, {"all_hold", all}}).dump(2)
        << '\n';
  } else if (c.format == "csv") {
    out << "# " << header_line(c, digest);
    out << "kind,n,m,observed,bound,holds\n";
    for (const auto& b : checks) {
      out << b.kind << ',' << b.n << ',' << (b.m ? std::to_string(*b.m) : "") << ','
          << csv_real(b.observed) << ',' << csv_real(b.bound) << ',' << (b.holds ? 1 : 0) << '\n';
    }
  } else {
    out << header_line(c, digest);
    out << family_name(spec.family) << " k=" << format_real(spec.k) << ": "
        << (all ? "all bounds hold" : "BOUND VIOLATED") << " (" << checks.size() << " checks)\n";
    for (const auto& b : checks) {
      if (b.holds) continue;
      out << "  " << b.kind << " n=" << b.n << (b.m ? " m=" + std::to_string(*b.m) : "")
          << " observed " << format_real(b.observed) << " > bound " << format_real(b.bound) << '\n';
    }
  }
  return all ? kExitOk : kExitFailure;
}

// --- gallery / fuzz --------------------------------------------------------

int cmd_gallery(const RunConfig& c, std::ostream& out) {
  const GalleryReport report = run_gallery(c.grid_n, c.tol);
  const std::string digest = input_digest(to_json(c).dump());
  if (c.format == "json") {
    out << envelope(c, digest, to_json(report)).dump(2) << '\n';
  } else {
    out << header_line(c, digest) << to_text(report);
  }
  return report.passed() ? kExitOk : kExitFailure;
}

int cmd_fuzz(const RunConfig& c, std::ostream& out) {
  FuzzConfig fc;
  fc.trials = c.trials;
  fc.seed = c.seed;
  fc.n_min = c.n_min;
  fc.n_max = c.n_max;
  fc.mutation_factor = c.factor;
  fc.profile = c.profile.empty() ? AxiomProfile::pebm() : AxiomProfile::from_tag(c.profile, c.s);
  const FuzzStats stats = fuzz_campaign(fc);
  const std::string digest = input_digest(to_json(c).dump());

  if (!c.out_dir.empty()) {
    std::filesystem::create_directories(c.out_dir);
    for (std::size_t i = 0; i < stats.counterexamples.size(); ++i) {
      const auto& cex = stats.counterexamples[i];
      const std::string name = cex.origin + "_" + std::to_string(i) + ".json";
      write_file((std::filesystem::path(c.out_dir) / name).string(),
                 space_to_json(cex.space).dump(2) + "\n");
    }
  }
  if (c.format == "json") {
    out << envelope(c, digest, to_json(stats)).dump(2) << '\n';
  } else {
    out << header_line(c, digest);
    out << "trials " << fc.trials << "  seed " << fc.seed << "  n in [" << fc.n_min << ","
        << fc.n_max << "]\n";
    out << "generated: " << stats.generated_passed << " pass, " << stats.generated_failed
        << " fail\n";
    out << "mutations: " << stats.mutations_detected << " detected, " << stats.mutations_undetected
        << " undetected, " << stats.mutations_impossible << " impossible\n";
    for (const auto& a : stats.anomalies) {
      out << "  anomaly trial " << a.trial << " (" << a.kind << "): " << a.detail << '\n';
    }
    out << "campaign: " << (stats.consistent() ? "consistent" : "INCONSISTENT") << '\n';
  }
  return stats.consistent() ? kExitOk : kExitFailure;
}

void add_format(CLI::App* cmd, RunConfig& c, std::vector<std::string> allowed) {
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember(allowed));
}

}  // namespace

json to_json(const RunConfig& c) {
  json j{{"subcommand", c.subcommand},
         {"input", c.input},
         {"profile", c.profile.empty() ? "declared" : c.profile},
         {"tol", c.tol},
         {"max_iter", c.max_iter},
         {"grid_n", c.grid_n},
         {"seed", c.seed},
         {"format", c.format}};
  if (c.s) j["s"] = *c.s;
  if (c.subcommand == "solve" || c.subcommand == "bound") {
    j["map"] = c.map;
    j["family"] = c.family;
    j["k"] = c.k ? json(*c.k) : json(nullptr);
    j["x0"] = c.x0;
    j["horizon"] = c.horizon;
    if (c.subcommand == "bound") j["trace"] = c.trace_in;
  }
  if (c.subcommand == "fuzz") {
    j["trials"] = c.trials;
    j["n_min"] = c.n_min;
    j["n_max"] = c.n_max;
    j["mutation_factor"] = c.factor;
  }
  return j;
}

std::string input_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::ostringstream out_buf;
  std::ostringstream err_buf;
  RunConfig c;

  CLI::App app{"Partial extended b-metric space toolkit", kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  auto* check = app.add_subcommand("check", "Check the axioms of a space");
  check->add_option("space", c.input, "Space JSON file or gallery:<id>")->required();
  check->add_option("--profile", c.profile, "Axiom profile tag");
  check->add_option("--s", c.s, "Constant coefficient for b_metric / pbm");
  check->add_option("--grid-n", c.grid_n, "Grid size for analytic spaces")->check(CLI::Range(2, 100000));
  add_format(check, c, {"json", "csv", "text"});

  auto* solve = app.add_subcommand("solve", "Verify preconditions and run Picard iteration");
  solve->add_option("space", c.input, "Space JSON file or gallery:<id>")->required();
  solve->add_option("--map", c.map, "Expression in x, or comma-separated targets for finite spaces");
  solve->add_option("--family", c.family, "banach | kannan | modkannan");
  solve->add_option("--k", c.k, "Contraction constant");
  solve->add_option("--x0", c.x0, "Starting point (value, label or index)");
  solve->add_option("--tol", c.tol, "Stopping tolerance");
  solve->add_option("--max-iter", c.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  solve->add_option("--grid-n", c.grid_n, "Grid size for analytic evidence")->check(CLI::Range(2, 100000));
  solve->add_option("--horizon", c.horizon, "Orbit horizon for the Banach theta condition");
  solve->add_option("--profile", c.profile, "Axiom profile tag");
  solve->add_option("--s", c.s, "Constant coefficient for b_metric / pbm");
  solve->add_option("--trace-out", c.trace_out, "Write the iteration trace CSV here");
  solve->add_option("--cert-out", c.cert_out, "Write the certificate JSON here");
  add_format(solve, c, {"json", "csv", "text"});

  auto* gallery = app.add_subcommand("gallery", "Reproduce the built-in worked examples");
  gallery->add_option("--grid-n", c.grid_n, "Grid size")->check(CLI::Range(2, 100000));
  gallery->add_option("--tol", c.tol, "Solver tolerance");
  add_format(gallery, c, {"json", "text"});

  auto* fuzz = app.add_subcommand("fuzz", "Generator/checker round-trip campaign");
  fuzz->add_option("--trials", c.trials, "Number of trials")->check(CLI::PositiveNumber);
  fuzz->add_option("--seed", c.seed, "Campaign seed");
  fuzz->add_option("--n-min", c.n_min, "Smallest space size");
  fuzz->add_option("--n-max", c.n_max, "Largest space size");
  fuzz->add_option("--factor", c.factor, "Theta mutation factor in (0,1)");
  fuzz->add_option("--profile", c.profile, "Axiom profile tag");
  fuzz->add_option("--s", c.s, "Constant coefficient for b_metric / pbm");
  fuzz->add_option("--out-dir", c.out_dir, "Save counterexample spaces here");
  add_format(fuzz, c, {"json", "text"});

  auto* bound = app.add_subcommand("bound", "Evaluate proof bounds against a saved trace");
  bound->add_option("space", c.input, "Space JSON file or gallery:<id>")->required();
  bound->add_option("--trace", c.trace_in, "Trace CSV written by solve --trace-out")->required();
  bound->add_option("--family", c.family, "banach | kannan | modkannan")->required();
  bound->add_option("--k", c.k, "Contraction constant")->required();
  bound->add_option("--n", c.bound_n, "Restrict to this n");
  bound->add_option("--m", c.bound_m, "Second index (Banach pair end, modkannan window length)");
  add_format(bound, c, {"json", "csv", "text"});

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  int code = kExitOk;
  try {
    app.parse(reversed);
    c.subcommand = app.get_subcommands().front()->get_name();
    if (!(c.tol > 0.0)) throw UsageError("--tol must be positive");
    if (c.subcommand == "check") code = cmd_check(c, out_buf);
    if (c.subcommand == "solve") code = cmd_solve(c, out_buf, err_buf);
    if (c.subcommand == "gallery") code = cmd_gallery(c, out_buf);
    if (c.subcommand == "fuzz") code = cmd_fuzz(c, out_buf);
    if (c.subcommand == "bound") code = cmd_bound(c, out_buf);
  } catch (const CLI::ParseError& e) {
    out_buf.str("");
    const int rc = app.exit(e, out_buf, err_buf);
    code = rc == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err_buf << "error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const std::logic_error& e) {
    // DomainError, ArgumentError, ConfigError, LookupError, ParseError
    err_buf << "error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const std::runtime_error& e) {
    err_buf << "error: " << e.what() << '\n';
    code = kExitUsage;
  }
  if (code == kExitUsage) out_buf.str("");
  out << out_buf.str() << std::flush;
  err << err_buf.str() << std::flush;
  return code;
}

}  // namespace pebms::cli
