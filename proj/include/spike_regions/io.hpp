#pragma once

// JSON (de)serialisation of networks, step-function specs and reports.
//
// Exact-mode scalars are written as strings "p/q" (or "p"); float-mode scalars
// as JSON numbers, which round-trip bit-exactly. On input both forms are
// accepted in either mode; a JSON number read in exact mode is taken at the
// decimal value of its literal, never through a double.

#include <json.hpp>

#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "spike_regions/constructors.hpp"
#include "spike_regions/network.hpp"
#include "spike_regions/regions.hpp"

namespace spike_regions {

using Json = nlohmann::json;

inline constexpr int kNetworkFormatVersion = 1;
inline constexpr const char* kNetworkFormatName = "spike_regions.network";

namespace detail {

inline const Json& require(const Json& j, const char* key) {
  if (!j.is_object()) throw FormatError(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace detail

template <Scalar S>
Json scalar_to_json(const S& v) {
  if constexpr (ScalarTraits<S>::exact) {
    return format_scalar(v);
  } else {
    if (!std::isfinite(v)) throw ValidationError("non-finite value cannot be serialised");
    return v;
  }
}

template <Scalar S>
S scalar_from_json(const Json& j) {
  if (j.is_string()) return parse_scalar<S>(j.get<std::string>());
  if (j.is_number()) {
    if constexpr (ScalarTraits<S>::exact) {
      return parse_scalar<S>(j.dump());
    } else {
      return j.get<double>();
    }
  }
  throw FormatError("expected a number, got " + j.dump());
}

template <Scalar S>
Json vector_to_json(const std::vector<S>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(scalar_to_json(x));
  return a;
}

template <Scalar S>
std::vector<S> vector_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("expected an array, got " + j.dump());
  std::vector<S> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(scalar_from_json<S>(e));
  return v;
}

template <Scalar S>
Json matrix_to_json(const Matrix<S>& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <Scalar S>
Matrix<S> matrix_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("expected a matrix (array of rows)");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  Matrix<S> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw FormatError("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = scalar_from_json<S>(j[r][c]);
  }
  return m;
}

template <Scalar S>
Json decoder_to_json(const DecoderSpec<S>& spec) {
  return std::visit(
      [](const auto& d) -> Json {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, MembranePotentialDecoder<S>>) {
          return {{"variant", "membrane_potential"},
                  {"a", vector_to_json(d.a)},
                  {"V", matrix_to_json(d.V)},
                  {"c", vector_to_json(d.c)}};
        } else if constexpr (std::is_same_v<D, RateDecoder>) {
          return {{"variant", "rate"}};
        } else if constexpr (std::is_same_v<D, CountDecoder>) {
          return {{"variant", "count"}};
        } else {
          Json j{{"variant", "first_spike_time"},
                 {"transform", d.transform == SpikeTimeTransform::Reciprocal ? "reciprocal" : "identity"}};
          if (d.f0) j["f0"] = scalar_to_json(*d.f0);
          return j;
        }
      },
      spec);
}

template <Scalar S>
DecoderSpec<S> decoder_from_json(const Json& j) {
  const auto variant = detail::require(j, "variant").get<std::string>();
  if (variant == "membrane_potential")
    return MembranePotentialDecoder<S>{vector_from_json<S>(detail::require(j, "a")),
                                       matrix_from_json<S>(detail::require(j, "V")),
                                       vector_from_json<S>(detail::require(j, "c"))};
  if (variant == "rate") return RateDecoder{};
  if (variant == "count") return CountDecoder{};
  if (variant == "first_spike_time") {
    FirstSpikeTimeDecoder<S> d;
    if (auto it = j.find("f0"); it != j.end() && !it->is_null()) d.f0 = scalar_from_json<S>(*it);
    const auto tr = j.value("transform", std::string("reciprocal"));
    if (tr == "reciprocal")
      d.transform = SpikeTimeTransform::Reciprocal;
    else if (tr == "identity")
      d.transform = SpikeTimeTransform::Identity;
    else
      throw FormatError("unknown spike-time transform '" + tr + "'");
    return d;
  }
  throw FormatError("unknown decoder variant '" + variant + "'");
}

template <Scalar S>
Json network_to_json(const Network<S>& net, const Json& meta = nullptr) {
  validate(net);
  Json layers = Json::array();
  for (const auto& l : net.layers)
    layers.push_back({{"W", matrix_to_json(l.W)},
                      {"b", vector_to_json(l.b)},
                      {"u0", vector_to_json(l.u0)},
                      {"beta", scalar_to_json(l.beta)},
                      {"theta", scalar_to_json(l.theta)}});
  Json j{{"format", kNetworkFormatName},
         {"version", kNetworkFormatVersion},
         {"mode", to_string(ScalarTraits<S>::mode)},
         {"T", net.T},
         {"encoder", {{"variant", "direct"}}},
         {"decoder", decoder_to_json(net.decoder)},
         {"layers", std::move(layers)}};
  if (!meta.is_null()) j["meta"] = meta;
  return j;
}

/// Mode recorded in a network file.
inline Mode network_mode(const Json& j) { return parse_mode(detail::require(j, "mode").get<std::string>()); }

template <Scalar S>
Network<S> network_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw FormatError("network file must hold a JSON object");
    if (auto it = j.find("format"); it != j.end() && *it != kNetworkFormatName)
      throw FormatError("not a network file (format " + it->dump() + ")");
    const auto& version = detail::require(j, "version");
    if (!version.is_number_integer() || version.get<int>() != kNetworkFormatVersion)
      throw FormatError("unsupported network format version " + version.dump() + " (expected " +
                        std::to_string(kNetworkFormatVersion) + ")");
    const Mode m = network_mode(j);
    if (m != ScalarTraits<S>::mode)
      throw FormatError("network file is in " + to_string(m) + " mode but " +
                        to_string(ScalarTraits<S>::mode) + " mode was requested");
    Network<S> net;
    const auto& T = detail::require(j, "T");
    if (!T.is_number_integer()) throw FormatError("T must be an integer");
    net.T = T.get<int>();
    const auto enc = detail::require(detail::require(j, "encoder"), "variant").get<std::string>();
    if (enc != "direct") throw FormatError("unsupported encoder '" + enc + "'");
    net.decoder = decoder_from_json<S>(detail::require(j, "decoder"));
    const auto& layers = detail::require(j, "layers");
    if (!layers.is_array()) throw FormatError("layers must be an array");
    for (const auto& l : layers)
      net.layers.push_back({matrix_from_json<S>(detail::require(l, "W")), vector_from_json<S>(detail::require(l, "b")),
                            vector_from_json<S>(detail::require(l, "u0")),
                            scalar_from_json<S>(detail::require(l, "beta")),
                            scalar_from_json<S>(detail::require(l, "theta"))});
    validate(net);
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed network file: ") + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

template <Scalar S>
void save_network(const std::string& path, const Network<S>& net, const Json& meta = nullptr) {
  write_text_file(path, dump_json(network_to_json(net, meta)));
}

template <Scalar S>
Network<S> load_network(const std::string& path) {
  return network_from_json<S>(read_json_file(path));
}

template <Scalar S>
Json step_spec_to_json(const StepFunctionSpec<S>& spec) {
  spec.validate();
  Json bps = Json::array();
  for (const auto& axis : spec.breakpoints) bps.push_back(vector_to_json(axis));
  return {{"breakpoints", std::move(bps)},
          {"values", vector_to_json(spec.values)},
          {"outside_value", scalar_to_json(spec.outside_value)}};
}

template <Scalar S>
StepFunctionSpec<S> step_spec_from_json(const Json& j) {
  try {
    StepFunctionSpec<S> spec;
    const auto& bps = detail::require(j, "breakpoints");
    if (!bps.is_array()) throw FormatError("breakpoints must be an array of arrays");
    for (const auto& axis : bps) spec.breakpoints.push_back(vector_from_json<S>(axis));
    spec.values = vector_from_json<S>(detail::require(j, "values"));
    if (auto it = j.find("outside_value"); it != j.end()) spec.outside_value = scalar_from_json<S>(*it);
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed step-function spec: ") + e.what());
  }
}

template <Scalar S>
PolyhedronSpec<S> polyhedron_from_json(const Json& j) {
  try {
    PolyhedronSpec<S> p{matrix_from_json<S>(detail::require(j, "A")), vector_from_json<S>(detail::require(j, "b"))};
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed polyhedron spec: ") + e.what());
  }
}

inline Json bigint_to_json(const BigInt& v) {
  if (v >= 0 && v <= BigInt(std::numeric_limits<std::uint64_t>::max())) return v.convert_to<std::uint64_t>();
  return v.str();
}

template <typename T>
Json optional_to_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json count_report_to_json(const CountReport& r) {
  return {{"layer_counts", r.layer_counts},
          {"distinct_outputs", r.distinct_outputs},
          {"connected_constant_regions", optional_to_json(r.connected_constant_regions)},
          {"bound", bigint_to_json(r.bound)},
          {"method", r.method},
          {"layer", r.layer},
          {"arrangement_regions", optional_to_json(r.arrangement_regions)},
          {"cells", optional_to_json(r.cells)},
          {"samples", optional_to_json(r.samples)},
          {"seed", optional_to_json(r.seed)}};
}

template <Scalar S>
Json approx_report_to_json(const ApproxReport<S>& r) {
  Json bps = Json::array();
  for (const auto& axis : r.breakpoints) bps.push_back(vector_to_json(axis));
  return {{"sup_error", r.sup_error ? scalar_to_json(*r.sup_error) : Json(nullptr)},
          {"l2_error_sq", r.l2_error_sq ? scalar_to_json(*r.l2_error_sq) : Json(nullptr)},
          {"widths", {r.n1, r.n2}},
          {"cells_per_axis", r.cells_per_axis},
          {"guaranteed_bound", scalar_to_json(r.guaranteed_bound)},
          {"breakpoints", std::move(bps)}};
}

}  // namespace spike_regions
