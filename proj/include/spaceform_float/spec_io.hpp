#pragma once

// JSON body/space specifications.
//
//   {"space": {"lambda": -1, "n": 2},
//    "body": {"type": "ball", "radius": 1.0, "center": [0, 0]},
//    "delta": 1e-3, "delta_grid": {"min": 1e-5, "max": 1e-2, "count": 8},
//    "directions": 2048, "resolution": 4096, "tol": 1e-2, "seed": 7}
//
// Body types: ball (geodesic radius about a model point), ellipsoid
// (semiaxes, optional center and planar rotation angle), polytope (vertices
// or halfspaces), smooth2d (support-function Fourier series) and clipped2d
// (a smooth base cut by halfspaces). "lambda" and "n" may also sit at the top
// level instead of inside "space".

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "spaceform_float/body.hpp"
#include "spaceform_float/errors.hpp"
#include "spaceform_float/floatarea.hpp"
#include "spaceform_float/spaceform.hpp"

namespace spaceform {

/// Malformed specification or command line.
class SpecError : public Error {
 public:
  using Error::Error;
};

struct BodySpec {
  double lambda = 0.0;
  int n = 2;
  std::optional<ConvexBody<2>> body2;  // set when n == 2
  std::optional<ConvexBody<3>> body3;  // set when n == 3
  std::optional<double> delta;
  std::vector<double> delta_grid;
  std::optional<int> directions;
  std::optional<int> resolution;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  nlohmann::json source;
};

/// "min:max:count" → geometric grid, largest first.
inline std::vector<double> parse_delta_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw SpecError("delta grid must be min:max:count");
  try {
    std::size_t used = 0;
    const double lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw SpecError("delta grid: bad min");
    const double hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw SpecError("delta grid: bad max");
    const int count = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw SpecError("delta grid: bad count");
    return geometric_grid(lo, hi, count);
  } catch (const std::logic_error&) {
    throw SpecError("delta grid must be min:max:count with numbers");
  } catch (const PreconditionError& e) {
    throw SpecError(e.what());
  }
}

namespace detail {

template <int Dim>
Vec<Dim> vec_from(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(Dim)) {
    throw SpecError(std::string(what) + ": expected an array of " + std::to_string(Dim) + " numbers");
  }
  Vec<Dim> v;
  for (int i = 0; i < Dim; ++i) {
    if (!j[i].is_number()) throw SpecError(std::string(what) + ": expected numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

inline double number_at(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw SpecError(std::string("missing numeric field '") + key + "'");
  return j[key].get<double>();
}

template <int Dim>
std::vector<Halfspace<Dim>> halfspaces_from(const nlohmann::json& arr) {
  if (!arr.is_array()) throw SpecError("halfspaces: expected an array");
  std::vector<Halfspace<Dim>> hs;
  for (const auto& h : arr) {
    Vec<Dim> n = vec_from<Dim>(h.at("normal"), "halfspace normal");
    const double len = n.norm();
    if (!(len > 0.0)) throw SpecError("halfspace normal must be nonzero");
    hs.push_back({n / len, number_at(h, "offset") / len});
  }
  return hs;
}

template <int Dim>
Ellipsoid<Dim> ellipsoid_from(const nlohmann::json& b, double lambda) {
  const std::string type = b.at("type").get<std::string>();
  const Vec<Dim> center = b.contains("center") ? vec_from<Dim>(b["center"], "center") : Vec<Dim>::Zero();
  if (type == "ball") {
    const SpaceForm<Dim> space(lambda);
    return Ellipsoid<Dim>::geodesic_ball(space, center, number_at(b, "radius"));
  }
  Ellipsoid<Dim> e = Ellipsoid<Dim>::axis_aligned(vec_from<Dim>(b.at("semiaxes"), "semiaxes"));
  if (b.contains("rotation")) {
    if constexpr (Dim == 2) {
      e = e.linear_image(rotation2(b["rotation"].get<double>()));
    } else {
      throw SpecError("ellipsoid rotation is only supported in the plane");
    }
  }
  Homogeneous<Dim> shift = Homogeneous<Dim>::Identity();
  shift.template topRightCorner<Dim, 1>() = center;
  return e.projective_image(shift);
}

inline SmoothBase smooth_base_from(const nlohmann::json& b, double lambda) {
  const std::string type = b.at("type").get<std::string>();
  if (type == "ball" || type == "ellipsoid") return SmoothBase(ellipsoid_from<2>(b, lambda));
  if (type == "smooth2d") {
    std::vector<FourierTerm> terms;
    if (b.contains("terms")) {
      for (const auto& t : b["terms"]) {
        terms.push_back({t.at("k").get<int>(), t.value("a", 0.0), t.value("b", 0.0)});
      }
    }
    return SmoothBase(Smooth2D(number_at(b, "a0"), std::move(terms)));
  }
  throw SpecError("unsupported smooth base type '" + type + "'");
}

template <int Dim>
ConvexBody<Dim> body_from(const nlohmann::json& b, double lambda) {
  if (!b.is_object() || !b.contains("type") || !b["type"].is_string()) throw SpecError("body: missing 'type'");
  const std::string type = b["type"].get<std::string>();
  if (type == "ball" || type == "ellipsoid") return ellipsoid_from<Dim>(b, lambda);
  if (type == "polytope") {
    if (b.contains("vertices")) {
      std::vector<Vec<Dim>> pts;
      for (const auto& p : b["vertices"]) pts.push_back(vec_from<Dim>(p, "vertex"));
      return Polytope<Dim>::from_vertices(pts);
    }
    if (b.contains("halfspaces")) return Polytope<Dim>::from_halfspaces(halfspaces_from<Dim>(b["halfspaces"]));
    throw SpecError("polytope: need 'vertices' or 'halfspaces'");
  }
  if constexpr (Dim == 2) {
    if (type == "smooth2d") return std::get<Smooth2D>(smooth_base_from(b, lambda).variant());
    if (type == "clipped2d") {
      return Clipped2D(smooth_base_from(b.at("base"), lambda), halfspaces_from<2>(b.at("cuts")));
    }
  }
  throw SpecError("unsupported body type '" + type + "' in dimension " + std::to_string(Dim));
}

}  // namespace detail

/// Parses a specification. A given `lambda_override` replaces the spec's
/// curvature before the body is built (geodesic radii depend on it). Library
/// errors raised while building the body (for example a body outside the
/// model) propagate unchanged.
inline BodySpec parse_spec(const nlohmann::json& j, std::optional<double> lambda_override = std::nullopt) {
  if (!j.is_object()) throw SpecError("spec must be a JSON object");
  BodySpec s;
  s.source = j;
  try {
    const nlohmann::json& space = j.contains("space") ? j["space"] : j;
    if (!space.is_object()) throw SpecError("spec: 'space' must be an object");
    s.lambda = lambda_override ? *lambda_override : space.value("lambda", 0.0);
    s.n = space.value("n", 2);
    if (s.n != 2 && s.n != 3) throw SpecError("n must be 2 or 3");
    if (!j.contains("body")) throw SpecError("spec: missing 'body'");
    if (j.contains("delta")) s.delta = j["delta"].get<double>();
    if (j.contains("delta_grid")) {
      const auto& g = j["delta_grid"];
      if (g.is_string()) {
        s.delta_grid = parse_delta_grid(g.get<std::string>());
      } else if (g.is_array()) {
        s.delta_grid = g.get<std::vector<double>>();
      } else {
        s.delta_grid = geometric_grid(detail::number_at(g, "min"), detail::number_at(g, "max"), g.at("count").get<int>());
      }
    }
    if (j.contains("directions")) s.directions = j["directions"].get<int>();
    if (j.contains("resolution")) s.resolution = j["resolution"].get<int>();
    if (j.contains("tol")) s.tol = j["tol"].get<double>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("spec: ") + e.what());
  }
  try {
    if (s.n == 2) {
      s.body2 = detail::body_from<2>(j["body"], s.lambda);
      require_in_model<2>(*s.body2, SpaceForm<2>(s.lambda));
    } else {
      s.body3 = detail::body_from<3>(j["body"], s.lambda);
      require_in_model<3>(*s.body3, SpaceForm<3>(s.lambda));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("body: ") + e.what());
  }
  return s;
}

inline BodySpec parse_spec_text(const std::string& text, std::optional<double> lambda_override = std::nullopt) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(std::string("malformed JSON: ") + e.what());
  }
  return parse_spec(j, lambda_override);
}

inline BodySpec load_spec(const std::string& path, std::optional<double> lambda_override = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str(), lambda_override);
}

}  // namespace spaceform
