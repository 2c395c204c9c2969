#pragma once

// Command implementations for the spike_regions tool. run_cli() is the whole
// program; main() only forwards to it so the test suite can drive commands
// in-process.

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spike_regions/spike_regions.hpp"

#ifndef SPIKE_REGIONS_VERSION
#define SPIKE_REGIONS_VERSION "unknown"
#endif

namespace spike_regions::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitInternal = 1;

struct BuildOptions {
  std::string kind;
  std::string out;
  std::size_t n = 1, L = 1, n1 = 2;
  int T = 1;
  std::string eps, gamma = "1", box = "0,1", target = "ramp", value = "0";
  std::string spec, A, b;
};

struct RegionsOptions {
  std::string file, box, csv, out;
  bool exact2d = false;
  std::size_t sample = 0;
  std::optional<std::size_t> layer;
  std::uint64_t seed = 0;
};

struct ShiftOptions {
  std::string beta = "1", theta = "1", u0 = "0", z = "0.7", out;
  int T = 5;
};

struct ApproxOptions {
  std::string target = "ramp", gamma = "4", eps = "1", lo = "0", hi = "1", out;
  std::optional<std::size_t> n1;
  long K = 4;
};

struct Table1Options {
  std::uint64_t seed = 0;
  std::size_t nets = 5;
  std::string out;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

// "lo,hi" per coordinate, coordinates joined by 'x': "0,1x-1,1".
template <Scalar S>
Box<S> parse_box(const std::string& text) {
  Box<S> box;
  for (const auto& side : split(text, 'x')) {
    const auto ends = split(side, ',');
    if (ends.size() != 2) throw ValidationError("box side '" + side + "' must be lo,hi");
    Interval<S> iv{parse_scalar<S>(ends[0]), parse_scalar<S>(ends[1])};
    if (!(iv.lo < iv.hi)) throw ValidationError("box side '" + side + "' needs lo < hi");
    box.push_back(iv);
  }
  if (box.empty()) throw ValidationError("empty box");
  return box;
}

template <Scalar S>
std::vector<S> parse_list(const std::string& text) {
  std::vector<S> v;
  for (const auto& e : split(text, ',')) v.push_back(parse_scalar<S>(e));
  return v;
}

// Rows separated by ';', entries by ','.
template <Scalar S>
Matrix<S> parse_matrix(const std::string& text) {
  std::vector<std::vector<S>> rows;
  for (const auto& r : split(text, ';')) rows.push_back(parse_list<S>(r));
  if (rows.empty()) throw ValidationError("empty matrix");
  Matrix<S> m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw DimensionError("ragged matrix '" + text + "'");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    write_text_file(path, text);
}

struct Context {
  std::string command;
  Mode mode = Mode::Exact;
  std::ostream* out = &std::cout;
};

inline Json meta(const Context& ctx, const Json& config, std::optional<std::uint64_t> seed = std::nullopt) {
  return {{"tool", "spike_regions"},
          {"tool_version", SPIKE_REGIONS_VERSION},
          {"command", ctx.command},
          {"mode", to_string(ctx.mode)},
          {"seed", seed ? Json(*seed) : Json(nullptr)},
          {"config", config}};
}

// CSV artifacts carry their metadata on a leading comment line.
inline std::string csv_with_meta(const Json& m, const std::string& body) { return "# " + m.dump() + "\n" + body; }

inline std::string widths_string(const std::vector<std::size_t>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s;
}

template <Scalar S>
int cmd_build(const BuildOptions& o, const Context& ctx) {
  Network<S> net;
  Json config{{"kind", o.kind}};
  if (o.kind == "identity") {
    std::optional<S> eps;
    if (!o.eps.empty()) eps = parse_scalar<S>(o.eps);
    net = identity_network<S>(o.n, o.T, o.L, eps);
    config.update({{"n", o.n}, {"T", o.T}, {"L", o.L}, {"eps", o.eps.empty() ? Json(nullptr) : Json(o.eps)}});
  } else if (o.kind == "indicator") {
    PolyhedronSpec<S> P;
    if (!o.spec.empty()) {
      P = polyhedron_from_json<S>(read_json_file(o.spec));
      config["spec"] = o.spec;
    } else {
      if (o.A.empty() || o.b.empty()) throw ValidationError("indicator needs --spec or both --A and --b");
      P = {parse_matrix<S>(o.A), parse_list<S>(o.b)};
      config.update({{"A", o.A}, {"b", o.b}});
    }
    net = indicator_network(P);
  } else if (o.kind == "step") {
    if (o.spec.empty()) throw ValidationError("step needs --spec");
    net = step_network(step_spec_from_json<S>(read_json_file(o.spec)));
    config["spec"] = o.spec;
  } else if (o.kind == "lipschitz") {
    const S gamma = parse_scalar<S>(o.gamma);
    const S eps = parse_scalar<S>(o.eps.empty() ? std::string("1") : o.eps);
    const auto box = parse_box<S>(o.box);
    std::function<S(std::span<const S>)> f;
    if (o.target == "ramp") {
      f = [gamma](std::span<const S> x) { return S(gamma * x[0]); };
    } else if (o.target == "constant") {
      const S v = parse_scalar<S>(o.value);
      f = [v](std::span<const S>) { return v; };
    } else {
      throw ValidationError("lipschitz target must be ramp or constant");
    }
    net = lipschitz_network<S>(f, gamma, eps, box).net;
    config.update({{"gamma", o.gamma}, {"eps", o.eps.empty() ? "1" : o.eps}, {"box", o.box}, {"target", o.target}});
    if (o.target == "constant") config["value"] = o.value;
  } else if (o.kind == "general-position") {
    if constexpr (!ScalarTraits<S>::exact) throw ValidationError("general-position requires exact mode");
    net = general_position_layer<S>(o.n1, o.T);
    config.update({{"n1", o.n1}, {"T", o.T}});
  } else {
    throw ValidationError("unknown build kind '" + o.kind + "'");
  }
  save_network(o.out, net, meta(ctx, config));
  *ctx.out << "kind: " << o.kind << "\n"
           << "widths: " << widths_string(net.widths()) << "\n"
           << "T: " << net.T << "\n"
           << "n_in: " << net.input_dim() << "\n"
           << "mode: " << to_string(ctx.mode) << "\n"
           << "written: " << o.out << "\n";
  return kExitOk;
}

template <Scalar S>
int cmd_regions(const RegionsOptions& o, const Context& ctx) {
  const auto net = load_network<S>(o.file);
  if (o.exact2d == (o.sample > 0)) throw ValidationError("choose exactly one of --exact2d and --sample N");
  Json config{{"file", o.file}, {"box", o.box.empty() ? Json("auto") : Json(o.box)}};
  if (o.layer) config["layer"] = *o.layer;
  Json body;
  if (o.exact2d) {
    if (net.input_dim() != 2) throw DimensionError("--exact2d requires a network with n_in = 2");
    std::optional<Box2<S>> box;
    if (!o.box.empty()) {
      const auto b = parse_box<S>(o.box);
      if (b.size() != 2) throw DimensionError("--box must have two sides for --exact2d");
      box = Box2<S>{b[0].lo, b[0].hi, b[1].lo, b[1].hi};
    }
    const auto res = constant_regions_2d(net, box, o.layer);
    config["method"] = "exact2d";
    body = count_report_to_json(res.report);
    body["meta"] = meta(ctx, config);
    if (!o.csv.empty()) write_text_file(o.csv, csv_with_meta(body["meta"], cell_complex_csv(res.complex)));
  } else {
    Box<double> box;
    if (!o.box.empty()) {
      box = parse_box<double>(o.box);
    } else if (net.input_dim() == 2) {
      const auto lines = distinct_lines(first_layer_families(net));
      const auto b = enclosing_box(lines);
      box = {{scalar_cast<double>(b.xlo), scalar_cast<double>(b.xhi)},
             {scalar_cast<double>(b.ylo), scalar_cast<double>(b.yhi)}};
    } else {
      box.assign(net.input_dim(), Interval<double>{-1.0, 1.0});
    }
    config.update({{"method", "sampled"}, {"samples", o.sample}});
    const auto rep = sample_patterns(net, box, o.sample, o.seed, o.layer);
    body = count_report_to_json(rep);
    Json used = Json::array();
    for (const auto& iv : box) used.push_back({iv.lo, iv.hi});
    config["box_used"] = used;
    body["meta"] = meta(ctx, config, o.seed);
  }
  emit(dump_json(body), o.out, *ctx.out);
  return kExitOk;
}

template <Scalar S>
int cmd_shifts(const ShiftOptions& o, const Context& ctx) {
  const S beta = parse_scalar<S>(o.beta), theta = parse_scalar<S>(o.theta), u0 = parse_scalar<S>(o.u0),
          z = parse_scalar<S>(o.z);
  if (beta < S(0) || beta > S(1)) throw ValidationError("beta must lie in [0,1]");
  if (!(theta > S(0))) throw ValidationError("theta must be > 0");
  const auto steps = shift_trajectory(z, beta, theta, u0, o.T);
  std::ostringstream csv;
  csv << "t,history,z_star,spike,repeats_step\n";
  for (const auto& st : steps)
    csv << st.t << ',' << pattern_string(st.history) << ',' << format_scalar(st.threshold) << ','
        << (st.spike ? 1 : 0) << ',' << (st.repeats ? std::to_string(*st.repeats) : std::string()) << '\n';
  const Json config{{"beta", o.beta}, {"theta", o.theta}, {"u0", o.u0}, {"z", o.z}, {"T", o.T}};
  emit(csv_with_meta(meta(ctx, config), csv.str()), o.out, *ctx.out);
  return kExitOk;
}

template <Scalar S>
int cmd_partition(const ShiftOptions& o, const Context& ctx) {
  const S beta = parse_scalar<S>(o.beta), theta = parse_scalar<S>(o.theta), u0 = parse_scalar<S>(o.u0);
  if (beta < S(0) || beta > S(1)) throw ValidationError("beta must lie in [0,1]");
  if (!(theta > S(0))) throw ValidationError("theta must be > 0");
  const auto part = neuron_partition(beta, theta, u0, o.T);
  const Json config{{"beta", o.beta}, {"theta", o.theta}, {"u0", o.u0}, {"T", o.T}};
  emit(csv_with_meta(meta(ctx, config), partition_csv(part)), o.out, *ctx.out);
  return kExitOk;
}

template <Scalar S>
int cmd_approx(const ApproxOptions& o, const Context& ctx) {
  Json config{{"target", o.target}};
  ApproxReport<S> report;
  if (o.target == "ramp") {
    const S gamma = parse_scalar<S>(o.gamma), lo = parse_scalar<S>(o.lo), hi = parse_scalar<S>(o.hi);
    const Box<S> box{{lo, hi}};
    auto f = [gamma](std::span<const S> x) { return S(gamma * x[0]); };
    Network<S> net;
    if (o.n1) {
      if (*o.n1 < 2) throw ValidationError("--n1 must be >= 2");
      const auto spec = grid_approximant<S>(f, box, *o.n1 - 1);
      net = step_network(spec);
      report.n1 = *o.n1;
      report.n2 = *o.n1 - 1;
      report.cells_per_axis = *o.n1 - 1;
      report.breakpoints = spec.breakpoints;
      report.guaranteed_bound = gamma * (hi - lo) / S(static_cast<long>(2 * (*o.n1 - 1)));
      config["n1"] = *o.n1;
    } else {
      auto res = lipschitz_network<S>(f, gamma, parse_scalar<S>(o.eps), box);
      net = std::move(res.net);
      report = std::move(res.report);
      config["eps"] = o.eps;
    }
    const auto target = ramp_target(gamma, lo, hi);
    const Domain1D<S> dom{lo, hi};
    report.sup_error = sup_error_exact(net, target, dom);
    report.l2_error_sq = l2_error_exact(net, target, dom);
    config.update({{"gamma", o.gamma}, {"lo", o.lo}, {"hi", o.hi}});
  } else if (o.target == "staircase") {
    const S eps = parse_scalar<S>(o.eps);
    const auto net = staircase_net(o.K, eps);
    const auto target = staircase_target(o.K, eps);
    const Domain1D<S> dom{S(0), S(o.K), true};
    report.sup_error = sup_error_exact(net, target, dom);
    report.l2_error_sq = l2_error_exact(net, target, dom);
    report.n1 = static_cast<std::size_t>(o.K) + 1;
    report.n2 = static_cast<std::size_t>(o.K);
    report.cells_per_axis = report.n2;
    report.breakpoints = {std::vector<S>()};
    for (long k = 0; k <= o.K; ++k) report.breakpoints[0].push_back(S(k));
    report.guaranteed_bound = eps / S(2);  // one-sided jump of the literal ramp
    config.update({{"K", o.K}, {"eps", o.eps}});
  } else {
    throw ValidationError("approx target must be ramp or staircase");
  }
  Json body = approx_report_to_json(report);
  body["meta"] = meta(ctx, config);
  emit(dump_json(body), o.out, *ctx.out);
  return kExitOk;
}

template <Scalar S>
int cmd_table1(const Table1Options& o, const Context& ctx) {
  if (o.nets < 1) throw ValidationError("--nets must be >= 1");
  Rng seeder(o.seed);
  std::ostringstream csv, table;
  csv << "T,n1,theory,general_position,random_mean,random_min,random_max,random_seeds\n";
  table << std::setw(3) << "T" << std::setw(4) << "n1" << std::setw(8) << "theory" << std::setw(18) << "general_position"
        << std::setw(13) << "random_mean" << "  min..max over " << o.nets << " nets\n";
  for (int T : {1, 2})
    for (std::size_t n1 : {2, 3, 4}) {
      const BigInt theory = count_bound(static_cast<long>(n1), 2, T);
      const auto gp = count_exact_2d(first_layer_families(general_position_layer<Rational>(n1, T))).regions;
      std::uint64_t sum = 0, lo = ~std::uint64_t{0}, hi = 0;
      std::string seeds;
      for (std::size_t i = 0; i < o.nets; ++i) {
        const std::uint64_t s = seeder();
        Rng rng(s);
        const auto net = random_network<S>(rng, 2, {n1}, T);
        const auto c = count_exact_2d(first_layer_families(net)).regions;
        sum += c;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
        seeds += (i ? " " : "") + std::to_string(s);
      }
      std::ostringstream mean;
      mean << static_cast<double>(sum) / static_cast<double>(o.nets);
      csv << T << ',' << n1 << ',' << theory << ',' << gp << ',' << mean.str() << ',' << lo << ',' << hi << ','
          << seeds << '\n';
      table << std::setw(3) << T << std::setw(4) << n1 << std::setw(8) << theory << std::setw(18) << gp
            << std::setw(13) << mean.str() << "  " << lo << ".." << hi << "\n";
    }
  const Json config{{"nets_per_row", o.nets}, {"n_in", 2}};
  *ctx.out << table.str();
  if (!o.out.empty()) write_text_file(o.out, csv_with_meta(meta(ctx, config, o.seed), csv.str()));
  return kExitOk;
}

template <Scalar S>
int dispatch(const std::string& cmd, const Context& ctx, const BuildOptions& b, const RegionsOptions& r,
             const ShiftOptions& s, const ApproxOptions& a, const Table1Options& t) {
  if (cmd == "build") return cmd_build<S>(b, ctx);
  if (cmd == "regions") return cmd_regions<S>(r, ctx);
  if (cmd == "shifts") return cmd_shifts<S>(s, ctx);
  if (cmd == "partition") return cmd_partition<S>(s, ctx);
  if (cmd == "approx") return cmd_approx<S>(a, ctx);
  if (cmd == "table1") return cmd_table1<S>(t, ctx);
  throw ValidationError("unknown command '" + cmd + "'");
}

}  // namespace detail

/// Runs one command line. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Exact simulation, construction and region counting for discrete-time LIF spiking networks"};
  app.set_version_flag("--version", std::string(SPIKE_REGIONS_VERSION));
  app.require_subcommand(1);
  app.fallthrough();  // --mode may follow the subcommand
  std::string mode_flag;
  app.add_option("--mode", mode_flag, "Numeric mode: exact | float (default: $SPIKE_REGIONS_MODE, else exact)");

  BuildOptions b;
  auto* build = app.add_subcommand("build", "Construct a network and write it as JSON");
  build->require_subcommand(1);
  struct Kind {
    const char* name;
    const char* help;
  };
  for (const Kind& k : {Kind{"identity", "Spike-train identity network"},
                        Kind{"indicator", "Indicator of a polyhedron {Ax <= b}"},
                        Kind{"step", "Exact step-function network from a spec file"},
                        Kind{"lipschitz", "Grid approximant of a Lipschitz target"},
                        Kind{"general-position", "Single layer attaining the region bound on R^2"}}) {
    auto* sub = build->add_subcommand(k.name, k.help);
    sub->add_option("--out,-o", b.out, "Output network file")->required();
    const std::string name = k.name;
    if (name == "identity") {
      sub->add_option("--n", b.n, "Width")->capture_default_str();
      sub->add_option("--T", b.T, "Latency")->capture_default_str();
      sub->add_option("--L", b.L, "Depth")->capture_default_str();
      sub->add_option("--eps", b.eps, "Weight excess in (0, 1/T); default 1/(2T)");
    } else if (name == "indicator") {
      sub->add_option("--spec", b.spec, "Polyhedron JSON {A, b}");
      sub->add_option("--A", b.A, "Constraint matrix, rows ';'-separated, entries ','-separated");
      sub->add_option("--b", b.b, "Right-hand side, ','-separated");
    } else if (name == "step") {
      sub->add_option("--spec", b.spec, "Step-function JSON {breakpoints, values, outside_value}")->required();
    } else if (name == "lipschitz") {
      sub->add_option("--gamma", b.gamma, "Lipschitz constant")->capture_default_str();
      sub->add_option("--eps", b.eps, "Target sup error (default 1)");
      sub->add_option("--box", b.box, "Domain lo,hi per coordinate joined by 'x'")->capture_default_str();
      sub->add_option("--target", b.target, "ramp (gamma * x_1) | constant")->capture_default_str();
      sub->add_option("--value", b.value, "Value of the constant target")->capture_default_str();
    } else {
      sub->add_option("--n1", b.n1, "First-layer width (>= 2)")->capture_default_str();
      sub->add_option("--T", b.T, "Latency")->capture_default_str();
    }
    sub->callback([&b, sub] { b.kind = sub->get_name(); });
  }

  RegionsOptions r;
  auto* regions = app.add_subcommand("regions", "Count activation and constant regions of a network file");
  regions->add_option("file", r.file, "Network file")->required();
  regions->add_flag("--exact2d", r.exact2d, "Exact planar arrangement (n_in = 2)");
  regions->add_option("--sample", r.sample, "Number of quasi-random samples");
  regions->add_option("--layer", r.layer, "Layer for the constant-region key (default: last)");
  regions->add_option("--box", r.box, "Clip/sample box lo,hi per coordinate joined by 'x' (default: auto)");
  regions->add_option("--seed", r.seed, "Seed for the sample rotation")->capture_default_str();
  regions->add_option("--csv", r.csv, "Cell complex CSV output (exact2d)");
  regions->add_option("--out,-o", r.out, "Report JSON output (default: stdout)");

  ShiftOptions s;
  auto* shifts = app.add_subcommand("shifts", "Threshold locations along the trajectory at fixed drive z");
  ShiftOptions p;
  auto* partition = app.add_subcommand("partition", "Pre-activation intervals of one neuron");
  for (auto [sub, o] : {std::pair{shifts, &s}, std::pair{partition, &p}}) {
    sub->add_option("--beta", o->beta, "Leak in [0,1]")->capture_default_str();
    sub->add_option("--theta", o->theta, "Threshold > 0")->capture_default_str();
    sub->add_option("--u0", o->u0, "Initial potential")->capture_default_str();
    sub->add_option("--T", o->T, "Latency")->capture_default_str();
    sub->add_option("--out,-o", o->out, "CSV output (default: stdout)");
  }
  shifts->add_option("--z", s.z, "Drive <w,x> + b")->capture_default_str();

  ApproxOptions a;
  auto* approx = app.add_subcommand("approx", "Build an approximant and report exact errors");
  approx->add_option("--target", a.target, "ramp | staircase")->capture_default_str();
  approx->add_option("--gamma", a.gamma, "Ramp slope")->capture_default_str();
  approx->add_option("--eps", a.eps, "Ramp: target sup error; staircase: step height")->capture_default_str();
  approx->add_option("--n1", a.n1, "Ramp: first-layer width instead of --eps");
  approx->add_option("--lo", a.lo, "Ramp domain start")->capture_default_str();
  approx->add_option("--hi", a.hi, "Ramp domain end (excluded)")->capture_default_str();
  approx->add_option("--K", a.K, "Staircase length")->capture_default_str();
  approx->add_option("--out,-o", a.out, "Report JSON output (default: stdout)");

  Table1Options t;
  auto* table1 = app.add_subcommand("table1", "Region bound, general-position and random counts");
  table1->add_option("--seed", t.seed, "Seed for the random networks")->capture_default_str();
  table1->add_option("--nets", t.nets, "Random networks per row")->capture_default_str();
  table1->add_option("--out,-o", t.out, "CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    detail::Context ctx;
    ctx.out = &out;
    const char* env = std::getenv("SPIKE_REGIONS_MODE");
    std::optional<Mode> requested;
    if (!mode_flag.empty())
      requested = parse_mode(mode_flag);
    else if (env && *env)
      requested = parse_mode(env);
    ctx.command = app.get_subcommands().front()->get_name();
    if (ctx.command == "build") ctx.command += " " + b.kind;
    if (ctx.command == "regions") {
      // A loaded network keeps its recorded mode unless one was requested.
      const Mode file_mode = network_mode(read_json_file(r.file));
      if (requested && *requested != file_mode)
        throw ValidationError("network file is in " + to_string(file_mode) + " mode but " + to_string(*requested) +
                              " mode was requested");
      requested = file_mode;
    }
    ctx.mode = requested.value_or(Mode::Exact);
    const std::string cmd = app.get_subcommands().front()->get_name();
    const ShiftOptions& so = cmd == "partition" ? p : s;
    if (ctx.mode == Mode::Exact) return detail::dispatch<Rational>(cmd, ctx, b, r, so, a, t);
    return detail::dispatch<double>(cmd, ctx, b, r, so, a, t);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace spike_regions::cli
