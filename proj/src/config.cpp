// Copyright 2026 The fpif Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fpif/error.hpp"
#include "fpif/random.hpp"

namespace fpif::config {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError("config: " + path + ": " + msg);
}

std::string at(const std::string& path, const std::string& key) {
  return path + "." + key;
}

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  std::set<std::string> ok;
  for (const char* k : allowed) ok.insert(k);
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!ok.count(key)) fail(at(path, key), "unknown field");
  }
}

const json& required(const json& obj, const std::string& key,
                     const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail(at(path, key), "required field is missing");
  }
  return obj.at(key);
}

const json* optional_field(const json& obj, const std::string& key) {
  if (!obj.is_object() || !obj.contains(key)) return nullptr;
  return &obj.at(key);
}

double number(const json& j, const std::string& path, bool allow_inf = false) {
  if (j.is_number()) return j.get<double>();
  if (allow_inf) {
    if (j.is_null()) fail(path, "use \"inf\" or \"-inf\" for unbounded entries");
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s == "inf" || s == "+inf") return kInf;
      if (s == "-inf") return -kInf;
    }
  }
  fail(path, allow_inf ? "expected a number, \"inf\" or \"-inf\""
                       : "expected a number");
}

long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

// Array of n numbers, or one number broadcast to n entries.
Vector vector_of(const json& j, const std::string& path, Index n,
                 bool allow_inf = false) {
  if (!j.is_array()) {
    return Vector::Constant(n, number(j, path, allow_inf));
  }
  if (static_cast<Index>(j.size()) != n) {
    fail(path, "expected " + std::to_string(n) + " entries, got " +
                   std::to_string(j.size()));
  }
  Vector v(n);
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = number(j[i], at(path, i), allow_inf);
  }
  return v;
}

Vector free_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array");
  return vector_of(j, path, static_cast<Index>(j.size()));
}

struct Context {
  fs::path base;
  Rng* rng;
};

Matrix inline_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected an array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail(at(path, 0), "expected a nonempty row");
  Matrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      fail(at(path, r), "expected a row of " + std::to_string(cols) +
                            " numbers");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          number(j[r][c], at(at(path, r), c));
    }
  }
  return m;
}

Matrix random_payload(const json& j, const std::string& path, Index rows,
                      Index cols, Context& ctx) {
  check_keys(j, {"random", "rows", "cols"}, path);
  const std::string what = text(j.at("random"), at(path, "random"));
  if (const json* r = optional_field(j, "rows")) rows = integer(*r, at(path, "rows"));
  if (const json* c = optional_field(j, "cols")) cols = integer(*c, at(path, "cols"));
  if (rows <= 0 || cols <= 0) fail(path, "random matrix needs rows and cols");
  if (what == "gaussian") return random_matrix(*ctx.rng, rows, cols);
  if (rows != cols) fail(path, "random \"" + what + "\" matrices are square");
  if (what == "monotone") return random_monotone(*ctx.rng, rows);
  if (what == "spd") return random_spd(*ctx.rng, rows);
  if (what == "skew") return random_skew(*ctx.rng, rows);
  fail(at(path, "random"), "unknown kind \"" + what +
                               "\" (gaussian, monotone, spd, skew)");
}

// obj[key] as an inline matrix, {"file": ...}, {"random": ...}, or the
// sibling obj[key + "_file"]. rows/cols (when > 0) are enforced.
Matrix matrix_field(const json& obj, const std::string& key,
                    const std::string& path, Context& ctx, Index rows,
                    Index cols) {
  Matrix m;
  const std::string fpath = at(path, key);
  const json* file_sibling = optional_field(obj, key + "_file");
  const json* direct = optional_field(obj, key);
  if (file_sibling && direct) fail(fpath, "give either " + key + " or " + key + "_file");
  auto from_file = [&](const json& name, const std::string& p) {
    const fs::path file = ctx.base / text(name, p);
    try {
      return read_matrix_csv(file);
    } catch (const IoError& e) {
      fail(p, e.what());
    }
  };
  if (file_sibling) {
    m = from_file(*file_sibling, at(path, key + "_file"));
  } else if (!direct) {
    fail(fpath, "required field is missing");
  } else if (direct->is_object() && direct->contains("file")) {
    check_keys(*direct, {"file"}, fpath);
    m = from_file(direct->at("file"), at(fpath, "file"));
  } else if (direct->is_object() && direct->contains("random")) {
    m = random_payload(*direct, fpath, rows, cols, ctx);
  } else {
    m = inline_matrix(*direct, fpath);
  }
  if ((rows > 0 && m.rows() != rows) || (cols > 0 && m.cols() != cols)) {
    fail(fpath, "expected a " + (rows > 0 ? std::to_string(rows) : "?") + "x" +
                    (cols > 0 ? std::to_string(cols) : "?") + " matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  return m;
}

Space space_of(const json& obj, const std::string& path) {
  const json* dim = optional_field(obj, "dim");
  const json* metric = optional_field(obj, "metric");
  if (dim && metric) fail(path, "give either dim or metric, not both");
  if (metric) {
    const Vector w = free_vector(*metric, at(path, "metric"));
    for (Index i = 0; i < w.size(); ++i) {
      if (!(w(i) > 0.0)) fail(at(at(path, "metric"), static_cast<std::size_t>(i)), "metric weights must be > 0");
    }
    return Space(w);
  }
  if (!dim) fail(at(path, "dim"), "required field is missing (or give metric)");
  const long n = integer(*dim, at(path, "dim"));
  if (n <= 0) fail(at(path, "dim"), "must be >= 1");
  return Space(static_cast<Index>(n));
}

// Converts library exceptions raised while assembling a block into errors
// that carry the block's path.
template <typename F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind("config: ", 0) == 0) throw;
    fail(path, msg);
  } catch (const DimensionError& e) {
    fail(path, e.what());
  }
}

ResolventOp resolvent_of(const json& j, const Space& space,
                         const std::string& path, Context& ctx) {
  if (j.is_string()) {
    const std::string t = j.get<std::string>();
    if (t == "zero") return catalog::zero(space);
    if (t == "orthant") return catalog::nonnegative_orthant(space);
    fail(path, "unknown operator \"" + t + "\"");
  }
  const std::string type = text(required(j, "type", path), at(path, "type"));
  const Index n = space.dim();
  return guarded(path, [&]() -> ResolventOp {
    if (type == "zero") {
      check_keys(j, {"type"}, path);
      return catalog::zero(space);
    }
    if (type == "orthant") {
      check_keys(j, {"type"}, path);
      return catalog::nonnegative_orthant(space);
    }
    if (type == "box") {
      check_keys(j, {"type", "lower", "upper"}, path);
      const json* lo = optional_field(j, "lower");
      const json* hi = optional_field(j, "upper");
      Vector lower = lo ? vector_of(*lo, at(path, "lower"), n, true)
                        : Vector(Vector::Constant(n, -kInf));
      Vector upper = hi ? vector_of(*hi, at(path, "upper"), n, true)
                        : Vector(Vector::Constant(n, kInf));
      return catalog::box(space, std::move(lower), std::move(upper));
    }
    if (type == "point") {
      check_keys(j, {"type", "c"}, path);
      return catalog::point(space, vector_of(required(j, "c", path), at(path, "c"), n));
    }
    if (type == "halfspace") {
      check_keys(j, {"type", "a", "b"}, path);
      return catalog::halfspace(
          space, vector_of(required(j, "a", path), at(path, "a"), n),
          number(required(j, "b", path), at(path, "b")));
    }
    if (type == "affine_set") {
      check_keys(j, {"type", "L", "L_file", "rhs"}, path);
      Matrix l = matrix_field(j, "L", path, ctx, 0, n);
      const Index rows = l.rows();
      return catalog::affine_set(
          LinearMap(space, Space(rows), std::move(l)),
          vector_of(required(j, "rhs", path), at(path, "rhs"), rows));
    }
    if (type == "l1") {
      check_keys(j, {"type", "scale"}, path);
      const json* s = optional_field(j, "scale");
      return catalog::l1(space, s ? number(*s, at(path, "scale")) : 1.0);
    }
    if (type == "affine" || type == "linear") {
      if (type == "affine") {
        check_keys(j, {"type", "matrix", "matrix_file", "shift"}, path);
      } else {
        check_keys(j, {"type", "matrix", "matrix_file"}, path);
      }
      Matrix m = matrix_field(j, "matrix", path, ctx, n, n);
      const json* c = optional_field(j, "shift");
      Vector shift = c ? vector_of(*c, at(path, "shift"), n)
                       : Vector(Vector::Zero(n));
      return catalog::affine(space, std::move(m), std::move(shift));
    }
    if (type == "scaled_identity") {
      check_keys(j, {"type", "c"}, path);
      return catalog::scaled_identity(space, number(required(j, "c", path), at(path, "c")));
    }
    if (type == "inverse") {
      check_keys(j, {"type", "of"}, path);
      return catalog::inverse(
          resolvent_of(required(j, "of", path), space, at(path, "of"), ctx));
    }
    if (type == "scaled") {
      check_keys(j, {"type", "factor", "of"}, path);
      return catalog::scaled(
          resolvent_of(required(j, "of", path), space, at(path, "of"), ctx),
          number(required(j, "factor", path), at(path, "factor")));
    }
    if (type == "shifted") {
      check_keys(j, {"type", "shift", "of"}, path);
      return catalog::shifted(
          resolvent_of(required(j, "of", path), space, at(path, "of"), ctx),
          vector_of(required(j, "shift", path), at(path, "shift"), n));
    }
    if (type == "plus_identity") {
      check_keys(j, {"type", "alpha", "of"}, path);
      return catalog::plus_identity(
          resolvent_of(required(j, "of", path), space, at(path, "of"), ctx),
          number(required(j, "alpha", path), at(path, "alpha")));
    }
    fail(at(path, "type"),
         "unknown operator \"" + type +
             "\" (zero, orthant, box, point, halfspace, affine_set, l1, "
             "affine, linear, scaled_identity, inverse, scaled, shifted, "
             "plus_identity)");
  });
}

LipschitzMap lipschitz_of(const json& j, const Space& space,
                          const std::string& path, Context& ctx) {
  if (j.is_string()) {
    if (j.get<std::string>() == "zero") return lipschitz::zero(space);
    fail(path, "unknown map \"" + j.get<std::string>() + "\"");
  }
  const std::string type = text(required(j, "type", path), at(path, "type"));
  const Index n = space.dim();
  return guarded(path, [&]() -> LipschitzMap {
    if (type == "zero") {
      check_keys(j, {"type"}, path);
      return lipschitz::zero(space);
    }
    if (type == "affine" || type == "linear") {
      if (type == "affine") {
        check_keys(j, {"type", "matrix", "matrix_file", "shift"}, path);
      } else {
        check_keys(j, {"type", "matrix", "matrix_file"}, path);
      }
      Matrix m = matrix_field(j, "matrix", path, ctx, n, n);
      const json* c = optional_field(j, "shift");
      Vector shift = c ? vector_of(*c, at(path, "shift"), n)
                       : Vector(Vector::Zero(n));
      return lipschitz::affine(space, std::move(m), std::move(shift));
    }
    fail(at(path, "type"), "unknown map \"" + type + "\" (zero, affine, linear)");
  });
}

Projector projector_of(const json& j, const Space& space,
                       const std::string& path, Context& ctx) {
  if (j.is_string()) {
    const std::string t = j.get<std::string>();
    if (t == "full") return Projector::identity(space);
    if (t == "zero") return Projector::zero(space);
    fail(path, "unknown subspace \"" + t + "\" (full, zero, or an object)");
  }
  const std::string type = text(required(j, "type", path), at(path, "type"));
  const Index n = space.dim();
  return guarded(path, [&]() -> Projector {
    if (type == "full") return Projector::identity(space);
    if (type == "zero") return Projector::zero(space);
    if (type == "span") {
      check_keys(j, {"type", "vectors"}, path);
      const json& vs = required(j, "vectors", path);
      if (!vs.is_array()) fail(at(path, "vectors"), "expected an array of vectors");
      std::vector<Vector> basis;
      for (std::size_t i = 0; i < vs.size(); ++i) {
        if (!vs[i].is_array()) fail(at(at(path, "vectors"), i), "expected an array");
        basis.push_back(vector_of(vs[i], at(at(path, "vectors"), i), n));
      }
      return projector_from_basis(space, basis);
    }
    if (type == "coordinates") {
      check_keys(j, {"type", "indices"}, path);
      const json& idx = required(j, "indices", path);
      if (!idx.is_array()) fail(at(path, "indices"), "expected an array");
      std::vector<Vector> basis;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const long k = integer(idx[i], at(at(path, "indices"), i));
        if (k < 0 || k >= n) fail(at(at(path, "indices"), i), "index out of range");
        basis.push_back(Vector::Unit(n, k));
      }
      return projector_from_basis(space, basis);
    }
    if (type == "kernel") {
      check_keys(j, {"type", "matrix", "matrix_file"}, path);
      Matrix m = matrix_field(j, "matrix", path, ctx, 0, n);
      const Index rows = m.rows();
      return projector_from_kernel(LinearMap(space, Space(rows), std::move(m)));
    }
    if (type == "random") {
      check_keys(j, {"type", "rank"}, path);
      const long k = integer(required(j, "rank", path), at(path, "rank"));
      if (k < 0 || k > n) fail(at(path, "rank"), "must lie in [0, dim]");
      return random_subspace(*ctx.rng, space, k);
    }
    fail(at(path, "type"),
         "unknown subspace \"" + type + "\" (full, zero, span, coordinates, kernel, random)");
  });
}

Sequence sequence_of(const json& j, const std::string& path) {
  if (j.is_array()) {
    if (j.empty()) fail(path, "expected a nonempty array");
    std::vector<double> v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], at(path, i)));
    return Sequence::array(std::move(v));
  }
  return Sequence::constant(number(j, path));
}

struct Schedule {
  std::optional<double> gamma;
  std::optional<Sequence> delta;
  Sequence lambda = Sequence::constant(1.0);
  std::optional<double> epsilon;
};

Schedule schedule_of(const json& root, bool allow_delta,
                     const std::optional<double>& gamma_override) {
  Schedule s;
  const std::string path = "$.schedule";
  if (const json* j = optional_field(root, "schedule")) {
    if (allow_delta) {
      check_keys(*j, {"gamma", "delta", "lambda", "epsilon"}, path);
    } else {
      check_keys(*j, {"gamma", "lambda"}, path);
    }
    if (const json* g = optional_field(*j, "gamma")) s.gamma = number(*g, at(path, "gamma"));
    if (const json* d = optional_field(*j, "delta")) s.delta = sequence_of(*d, at(path, "delta"));
    if (const json* l = optional_field(*j, "lambda")) s.lambda = sequence_of(*l, at(path, "lambda"));
    if (const json* e = optional_field(*j, "epsilon")) s.epsilon = number(*e, at(path, "epsilon"));
  }
  if (gamma_override) s.gamma = gamma_override;
  return s;
}

StopRule stop_of(const json& root, const Overrides& ov) {
  StopRule stop;
  const std::string path = "$.stop";
  if (const json* j = optional_field(root, "stop")) {
    check_keys(*j, {"tol", "iterate_tol", "max_iter"}, path);
    if (const json* t = optional_field(*j, "tol")) {
      stop.residual_tol = number(*t, at(path, "tol"));
      stop.iterate_tol = stop.residual_tol;
    }
    if (const json* t = optional_field(*j, "iterate_tol")) {
      stop.iterate_tol = number(*t, at(path, "iterate_tol"));
    }
    if (const json* m = optional_field(*j, "max_iter")) {
      stop.max_iter = integer(*m, at(path, "max_iter"));
    }
  }
  if (ov.tol) {
    stop.residual_tol = *ov.tol;
    stop.iterate_tol = *ov.tol;
  }
  if (ov.max_iter) stop.max_iter = *ov.max_iter;
  try {
    stop.validate();
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
  return stop;
}

// initial.<key>: a vector, "random" (unit ball, seeded), or absent (zeros).
Vector initial_vector(const json& root, const std::string& key,
                      const Space& space, Context& ctx) {
  const json* init = optional_field(root, "initial");
  const std::string path = "$.initial." + key;
  if (!init) return Vector::Zero(space.dim());
  const json* j = optional_field(*init, key);
  if (!j) return Vector::Zero(space.dim());
  if (j->is_string() && j->get<std::string>() == "random") {
    return random_in_ball(*ctx.rng, space, 1.0);
  }
  return vector_of(*j, path, space.dim());
}

std::vector<Vector> initial_blocks(const json& root, const std::string& key,
                                   const std::vector<Space>& spaces,
                                   Context& ctx) {
  std::vector<Vector> out;
  const json* init = optional_field(root, "initial");
  const json* j = init ? optional_field(*init, key) : nullptr;
  const std::string path = "$.initial." + key;
  if (j && !(j->is_array() || (j->is_string() && j->get<std::string>() == "random"))) {
    fail(path, "expected an array of vectors or \"random\"");
  }
  if (j && j->is_array() && j->size() != spaces.size()) {
    fail(path, "expected " + std::to_string(spaces.size()) + " vectors, got " +
                   std::to_string(j->size()));
  }
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    if (!j) {
      out.push_back(Vector::Zero(spaces[i].dim()));
    } else if (j->is_string()) {
      out.push_back(random_in_ball(*ctx.rng, spaces[i], 1.0));
    } else {
      out.push_back(vector_of((*j)[i], at(path, i), spaces[i].dim()));
    }
  }
  return out;
}

void check_initial_keys(const json& root, std::initializer_list<const char*> keys) {
  if (const json* init = optional_field(root, "initial")) {
    check_keys(*init, keys, "$.initial");
  }
}

Grid grid_of(const json& j, const std::string& path) {
  check_keys(j, {"lower", "upper", "points", "rule"}, path);
  const double lower = number(required(j, "lower", path), at(path, "lower"));
  const double upper = number(required(j, "upper", path), at(path, "upper"));
  const long points = integer(required(j, "points", path), at(path, "points"));
  GridRule rule = GridRule::kTrapezoid;
  if (const json* r = optional_field(j, "rule")) {
    const std::string s = text(*r, at(path, "rule"));
    if (s == "midpoint") {
      rule = GridRule::kMidpoint;
    } else if (s != "trapezoid") {
      fail(at(path, "rule"), "expected \"trapezoid\" or \"midpoint\"");
    }
  }
  return guarded(path, [&] { return make_grid(lower, upper, points, rule); });
}

std::function<double(double, double)> kernel_function(const std::string& name,
                                                       const std::string& path) {
  if (name == "product") return [](double s, double t) { return s * t; };
  if (name == "squared_difference") {
    return [](double s, double t) { return (s - t) * (s - t); };
  }
  if (name == "difference") return [](double s, double t) { return s - t; };
  if (name == "zero") return [](double, double) { return 0.0; };
  fail(path, "unknown kernel function \"" + name +
                 "\" (product, squared_difference, difference, zero)");
}

TsengSetup tseng_setup(const json& root, const Overrides& ov, Context& ctx) {
  check_keys(root, {"kind", "seed", "space", "A", "B", "schedule", "stop",
                    "initial", "output"}, "$");
  check_initial_keys(root, {"z"});
  const Space space = space_of(required(root, "space", "$"), "$.space");
  ResolventOp a = resolvent_of(required(root, "A", "$"), space, "$.A", ctx);
  LipschitzMap b = optional_field(root, "B")
                       ? lipschitz_of(root.at("B"), space, "$.B", ctx)
                       : lipschitz::zero(space);
  Schedule s = schedule_of(root, true, ov.gamma);
  StepSchedule sched;
  if (s.delta) sched.delta = *s.delta;
  if (s.gamma) sched.delta = Sequence::constant(*s.gamma);
  sched.lambda = s.lambda;
  sched.epsilon = s.epsilon;
  Vector z0 = initial_vector(root, "z", space, ctx);
  return TsengSetup{std::move(a), std::move(b), std::move(sched), std::move(z0)};
}

FpifSetup fpif_setup(const json& root, const Overrides& ov, Context& ctx) {
  check_keys(root, {"kind", "seed", "space", "A", "B", "V", "schedule", "stop",
                    "initial", "output"}, "$");
  check_initial_keys(root, {"x", "y"});
  const Space space = space_of(required(root, "space", "$"), "$.space");
  ResolventOp a = resolvent_of(required(root, "A", "$"), space, "$.A", ctx);
  LipschitzMap b = optional_field(root, "B")
                       ? lipschitz_of(root.at("B"), space, "$.B", ctx)
                       : lipschitz::zero(space);
  Projector v = optional_field(root, "V")
                    ? projector_of(root.at("V"), space, "$.V", ctx)
                    : Projector::identity(space);
  Schedule s = schedule_of(root, true, ov.gamma);
  const double gamma = s.gamma.value_or(default_gamma(b.chi()));
  StepSchedule sched;
  if (s.delta) sched.delta = *s.delta;
  sched.lambda = s.lambda;
  sched.epsilon = s.epsilon;
  Vector x0 = initial_vector(root, "x", space, ctx);
  Vector y0 = initial_vector(root, "y", space, ctx);
  return FpifSetup{InclusionProblem{std::move(a), std::move(b), std::move(v), gamma},
                   std::move(sched), std::move(x0), std::move(y0)};
}

SumSetup sum_setup(const json& root, const Overrides& ov, Context& ctx) {
  check_keys(root, {"kind", "seed", "space", "ops", "B", "weights", "schedule",
                    "stop", "initial", "output"}, "$");
  check_initial_keys(root, {"z"});
  const Space space = space_of(required(root, "space", "$"), "$.space");
  const json& ops = required(root, "ops", "$");
  if (!ops.is_array() || ops.empty()) fail("$.ops", "expected a nonempty array of operators");
  SumProblem prob{{}, lipschitz::zero(space), {}, 1.0};
  for (std::size_t i = 0; i < ops.size(); ++i) {
    prob.ops.push_back(resolvent_of(ops[i], space, at("$.ops", i), ctx));
  }
  if (const json* b = optional_field(root, "B")) {
    prob.b = lipschitz_of(*b, space, "$.B", ctx);
  }
  if (const json* w = optional_field(root, "weights")) {
    const Vector wv = vector_of(*w, "$.weights", static_cast<Index>(ops.size()));
    prob.weights.assign(wv.data(), wv.data() + wv.size());
  }
  Schedule s = schedule_of(root, false, ov.gamma);
  prob.gamma = s.gamma.value_or(default_gamma(prob.b.chi()));
  guarded("$", [&] {
    prob.validate();
    return 0;
  });
  std::vector<Space> spaces(ops.size(), space);
  auto z0 = initial_blocks(root, "z", spaces, ctx);
  return SumSetup{std::move(prob), s.lambda, std::move(z0)};
}

PDSetup pd_setup(const json& root, const Overrides& ov, Context& ctx) {
  check_keys(root, {"kind", "seed", "space", "A", "U", "C", "z", "blocks",
                    "schedule", "stop", "initial", "output"}, "$");
  check_initial_keys(root, {"x", "u"});
  const Space h = space_of(required(root, "space", "$"), "$.space");
  const Index n = h.dim();
  ResolventOp a = optional_field(root, "A")
                      ? resolvent_of(root.at("A"), h, "$.A", ctx)
                      : catalog::zero(h);
  Projector u = optional_field(root, "U")
                    ? projector_of(root.at("U"), h, "$.U", ctx)
                    : Projector::identity(h);
  LipschitzMap c = optional_field(root, "C")
                       ? lipschitz_of(root.at("C"), h, "$.C", ctx)
                       : lipschitz::zero(h);
  Vector z = optional_field(root, "z") ? vector_of(root.at("z"), "$.z", n)
                                       : Vector(Vector::Zero(n));
  const json& blocks = required(root, "blocks", "$");
  if (!blocks.is_array() || blocks.empty()) {
    fail("$.blocks", "expected a nonempty array of blocks");
  }
  std::vector<PDBlock> out;
  std::vector<Space> gspaces;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string path = at("$.blocks", i);
    const json& bj = blocks[i];
    check_keys(bj, {"dim", "metric", "B", "D", "D_pinv", "L", "L_file", "V", "b"}, path);
    const Space g = space_of(bj, path);
    Matrix lm = matrix_field(bj, "L", path, ctx, g.dim(), n);
    LinearMap l(h, g, std::move(lm));
    Projector v = optional_field(bj, "V") ? projector_of(bj.at("V"), g, at(path, "V"), ctx)
                                          : Projector::identity(g);
    Vector b = optional_field(bj, "b") ? vector_of(bj.at("b"), at(path, "b"), g.dim())
                                       : Vector(Vector::Zero(g.dim()));
    ResolventOp b_op = optional_field(bj, "B")
                           ? resolvent_of(bj.at("B"), g, at(path, "B"), ctx)
                           : catalog::zero(g);
    const json* d = optional_field(bj, "D");
    const json* dp = optional_field(bj, "D_pinv");
    if (d && dp) fail(path, "give either D or D_pinv, not both");
    LipschitzMap d_partial = lipschitz::zero(g);
    if (dp) {
      d_partial = lipschitz_of(*dp, g, at(path, "D_pinv"), ctx);
    } else if (d) {
      const std::string dpath = at(path, "D");
      LipschitzMap dmap = lipschitz_of(*d, g, dpath, ctx);
      if (!dmap.affine()) fail(dpath, "D must be linear or affine");
      d_partial = guarded(dpath, [&] {
        const auto cert = certify_coercive_linear(g, dmap.affine()->matrix);
        return partial_inverse_map(dmap, cert, v.complement());
      });
    }
    out.push_back(guarded(path, [&] {
      return pd_block(b_op, std::move(d_partial), std::move(l), std::move(v),
                      std::move(b));
    }));
    gspaces.push_back(g);
  }
  PDProblem prob{std::move(a), std::move(u), std::move(c), std::move(z), std::move(out)};
  guarded("$", [&] {
    prob.validate_structure();
    return 0;
  });
  Schedule s = schedule_of(root, false, ov.gamma);
  const double gamma = s.gamma.value_or(default_gamma(prob.chi()));
  Vector x0 = initial_vector(root, "x", h, ctx);
  auto u0 = initial_blocks(root, "u", gspaces, ctx);
  return PDSetup{std::move(prob), gamma, s.lambda, std::move(x0), std::move(u0)};
}

MatrixGameSetup matrix_game_setup(const json& root, const Overrides& ov,
                                  Context& ctx) {
  check_keys(root, {"kind", "seed", "payoff", "payoff_file", "schedule", "stop",
                    "output"}, "$");
  Matrix f = matrix_field(root, "payoff", "$", ctx, 0, 0);
  Schedule s = schedule_of(root, false, ov.gamma);
  return MatrixGameSetup{MatrixGame{std::move(f)}, s.gamma, s.lambda};
}

GridGameSetup grid_game_setup(const json& root, const Overrides& ov,
                              Context& ctx) {
  check_keys(root, {"kind", "seed", "grid1", "grid2", "kernel", "kernel_file",
                    "kernel_function", "schedule", "stop", "output"}, "$");
  Grid g1 = grid_of(required(root, "grid1", "$"), "$.grid1");
  Grid g2 = grid_of(required(root, "grid2", "$"), "$.grid2");
  GridGame game;
  if (const json* fn = optional_field(root, "kernel_function")) {
    if (root.contains("kernel") || root.contains("kernel_file")) {
      fail("$.kernel_function", "give either kernel or kernel_function");
    }
    game = grid_game_from_function(
        std::move(g1), std::move(g2),
        kernel_function(text(*fn, "$.kernel_function"), "$.kernel_function"));
  } else {
    Matrix k = matrix_field(root, "kernel", "$", ctx, g1.nodes.size(),
                            g2.nodes.size());
    game = GridGame{std::move(g1), std::move(g2), std::move(k)};
  }
  Schedule s = schedule_of(root, false, ov.gamma);
  return GridGameSetup{std::move(game), s.gamma, s.lambda};
}

}  // namespace

Matrix read_matrix_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || cell.find_first_not_of(" \t\r", used) != std::string::npos) {
        throw IoError(path.string() + ":" + std::to_string(line_no) +
                      ": not a number: \"" + cell + "\"");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(rows.front().size()) + " columns, got " +
                    std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(path.string() + ": no data");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  return m;
}

ProblemConfig parse(const std::string& body, const fs::path& base_dir,
                    const Overrides& ov) {
  json root;
  try {
    root = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("$", "expected an object");
  ProblemConfig cfg;
  cfg.kind = text(required(root, "kind", "$"), "$.kind");
  if (const json* s = optional_field(root, "seed")) {
    if (!s->is_number_unsigned()) fail("$.seed", "expected a nonnegative integer");
    cfg.seed = s->get<std::uint64_t>();
  }
  if (ov.seed) cfg.seed = *ov.seed;
  cfg.stop = stop_of(root, ov);
  cfg.out_dir = "fpif-out";
  if (const json* o = optional_field(root, "output")) {
    check_keys(*o, {"dir"}, "$.output");
    if (const json* d = optional_field(*o, "dir")) {
      cfg.out_dir = base_dir / text(*d, "$.output.dir");
    }
  }
  if (ov.out_dir) cfg.out_dir = *ov.out_dir;

  Rng rng(cfg.seed);
  Context ctx{base_dir, &rng};
  if (cfg.kind == "tseng") {
    cfg.setup = tseng_setup(root, ov, ctx);
  } else if (cfg.kind == "fpif") {
    cfg.setup = fpif_setup(root, ov, ctx);
  } else if (cfg.kind == "sum-m") {
    cfg.setup = sum_setup(root, ov, ctx);
  } else if (cfg.kind == "primal-dual") {
    cfg.setup = pd_setup(root, ov, ctx);
  } else if (cfg.kind == "matrix-game") {
    cfg.setup = matrix_game_setup(root, ov, ctx);
  } else if (cfg.kind == "grid-game") {
    cfg.setup = grid_game_setup(root, ov, ctx);
  } else {
    fail("$.kind", "unknown kind \"" + cfg.kind +
                       "\" (tseng, fpif, sum-m, primal-dual, matrix-game, grid-game)");
  }
  return cfg;
}

ProblemConfig load(const fs::path& path, const Overrides& ov) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  ProblemConfig cfg = parse(ss.str(), path.parent_path(), ov);
  cfg.source = path;
  return cfg;
}

}  // namespace fpif::config
