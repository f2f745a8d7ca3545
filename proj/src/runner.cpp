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

#include "runner.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fpif/error.hpp"
#include "fpif/log.hpp"

namespace fpif::runner {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Vector& need(const Solution& sol, const std::string& name, Index dim) {
  const Vector* v = sol.find(name);
  if (!v) throw DimensionError("solution has no component \"" + name + "\"");
  if (v->size() != dim) {
    throw DimensionError("solution component \"" + name + "\" has " +
                         std::to_string(v->size()) + " entries, expected " +
                         std::to_string(dim));
  }
  return *v;
}

// Orthant feasibility of a strategy: distance to C and the affine residual.
std::pair<double, double> simplex_feasibility(const Space& space,
                                              const Vector& weights,
                                              const Vector& x) {
  const Vector neg = x.cwiseMin(0.0);
  return {space.norm(neg), std::abs(weights.dot(x) - 1.0)};
}

Residuals tseng_residuals(const config::TsengSetup& s, const Solution& sol) {
  const Space& space = s.a.space();
  const Vector& z = need(sol, "state", space.dim());
  const auto deltas = s.schedule.delta.values();
  const double delta = deltas.back();
  const Vector r = z - delta * s.b(z);
  const Vector p = s.a.resolvent(delta, r);
  const Vector t = p - delta * s.b(p);
  const double fp = space.norm(t - r);
  return {{"fixed_point", fp},
          {"relative", fp / std::max(1.0, space.norm(z))},
          {"forward_backward", space.norm(z - p)}};
}

Residuals fpif_residuals_of(const config::FpifSetup& s, const Solution& sol) {
  const Space& space = s.problem.a.space();
  const Vector* state = sol.find("state");
  Vector z;
  if (state) {
    z = need(sol, "state", space.dim());
  } else {
    z = need(sol, "x", space.dim()) + s.problem.gamma * need(sol, "y", space.dim());
  }
  const FpifResiduals r = fpif_residuals(s.problem, z);
  return {{"fixed_point", r.fixed_point},
          {"relative", r.relative},
          {"x_confinement", r.x_confinement},
          {"y_confinement", r.y_confinement},
          {"inclusion", r.inclusion}};
}

Residuals sum_residuals_of(const config::SumSetup& s, const Solution& sol) {
  const Index n = s.problem.ops.front().space().dim();
  const std::size_t m = s.problem.m();
  const Vector& flat = need(sol, "state", static_cast<Index>(m) * n);
  const SumResiduals r = sum_residuals(s.problem, unflatten(flat, m, n));
  return {{"fixed_point", r.fixed_point},
          {"relative", r.relative},
          {"certificate", r.certificate},
          {"consensus", r.consensus}};
}

Residuals pd_residuals_of(const config::PDSetup& s, const Solution& sol) {
  const PDProblem& prob = s.problem;
  const Index n = prob.a.space().dim();
  Vector x;
  std::vector<Vector> u;
  Index total = n;
  for (const auto& blk : prob.blocks) total += blk.v.space().dim();
  if (sol.find("state")) {
    const Vector& flat = need(sol, "state", total);
    x = flat.head(n);
    Index off = n;
    for (const auto& blk : prob.blocks) {
      const Index d = blk.v.space().dim();
      u.push_back(flat.segment(off, d));
      off += d;
    }
  } else {
    x = need(sol, "x", n);
    for (std::size_t i = 0; i < prob.blocks.size(); ++i) {
      u.push_back(need(sol, "u" + std::to_string(i + 1),
                       prob.blocks[i].v.space().dim()));
    }
  }
  const PDResiduals r = pd_residuals(prob, s.gamma, x, u);
  Residuals out{{"fixed_point", r.fixed_point},
                {"relative", r.relative},
                {"kkt", r.kkt}};
  for (std::size_t i = 0; i < r.dual.size(); ++i) {
    out.emplace_back("dual_residual_" + std::to_string(i + 1), r.dual[i]);
  }
  return out;
}

Residuals game_residuals(const SaddleProblem& prob, double gamma,
                         const MatrixGame& induced, const Vector& w1,
                         const Vector& w2, const Solution& sol) {
  const Space& s1 = prob.p1.space();
  const Space& s2 = prob.p2.space();
  const Vector& x1 = need(sol, "x1", s1.dim());
  const Vector& x2 = need(sol, "x2", s2.dim());
  Vector z1, z2;
  if (sol.find("state")) {
    const Vector& flat = need(sol, "state", s1.dim() + s2.dim());
    z1 = flat.head(s1.dim());
    z2 = flat.tail(s2.dim());
  } else {
    z1 = x1 - prob.p1.e;
    z2 = x2 - prob.p2.e;
  }
  const SaddleResiduals r = saddle_residuals(prob, gamma, z1, z2);
  const Vector q1 = w1.cwiseProduct(x1);
  const Vector q2 = w2.cwiseProduct(x2);
  const auto [pos1, aff1] = simplex_feasibility(s1, w1, x1);
  const auto [pos2, aff2] = simplex_feasibility(s2, w2, x2);
  return {{"fixed_point", r.fixed_point},
          {"relative", r.relative},
          {"gap", duality_gap(induced, q1, q2)},
          {"value", q1.dot(induced.payoff * q2)},
          {"positivity1", pos1},
          {"positivity2", pos2},
          {"affine1", aff1},
          {"affine2", aff2}};
}

double game_gamma(const std::optional<double>& gamma, double chi) {
  return gamma.value_or(default_gamma(chi));
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const Vector* Solution::find(const std::string& name) const {
  for (const auto& [key, value] : components) {
    if (key == name) return &value;
  }
  return nullptr;
}

Residuals evaluate(const config::ProblemConfig& cfg, const Solution& sol) {
  return std::visit(
      overloaded{
          [](const std::monostate&) -> Residuals {
            throw ConfigError("config: no problem assembled");
          },
          [&](const config::TsengSetup& s) { return tseng_residuals(s, sol); },
          [&](const config::FpifSetup& s) { return fpif_residuals_of(s, sol); },
          [&](const config::SumSetup& s) { return sum_residuals_of(s, sol); },
          [&](const config::PDSetup& s) { return pd_residuals_of(s, sol); },
          [&](const config::MatrixGameSetup& s) {
            const SaddleProblem prob = matrix_game_problem(s.game);
            return game_residuals(prob, game_gamma(s.gamma, prob.chi), s.game,
                                  Vector::Ones(s.game.payoff.rows()),
                                  Vector::Ones(s.game.payoff.cols()), sol);
          },
          [&](const config::GridGameSetup& s) {
            const SaddleProblem prob = grid_game_problem(s.game);
            return game_residuals(prob, game_gamma(s.gamma, prob.chi),
                                  grid_game_matrix(s.game),
                                  s.game.grid1.weights, s.game.grid2.weights,
                                  sol);
          }},
      cfg.setup);
}

void write_atomic(const fs::path& path, const std::string& body) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << body;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() +
                  ": " + ec.message());
  }
}

void write_solution(const fs::path& path, const Solution& sol) {
  std::string body = "component,index,value\n";
  for (const auto& [name, v] : sol.components) {
    for (Index i = 0; i < v.size(); ++i) {
      body += name + "," + std::to_string(i) + "," + format17(v(i)) + "\n";
    }
  }
  write_atomic(path, body);
}

Solution read_solution(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read solution " + path.string());
  std::string line;
  long line_no = 0;
  Solution sol;
  std::vector<std::pair<std::string, std::vector<double>>> parts;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "component,index,value") {
        throw IoError(path.string() + ": expected header component,index,value");
      }
      continue;
    }
    std::stringstream ss(line);
    std::string name, index, value;
    if (!std::getline(ss, name, ',') || !std::getline(ss, index, ',') ||
        !std::getline(ss, value)) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": expected component,index,value");
    }
    double v = 0.0;
    long k = 0;
    try {
      std::size_t used = 0;
      k = std::stol(index, &used);
      if (used != index.size()) throw std::invalid_argument(index);
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": malformed index or value");
    }
    if (parts.empty() || parts.back().first != name) {
      for (const auto& p : parts) {
        if (p.first == name) {
          throw IoError(path.string() + ":" + std::to_string(line_no) +
                        ": component \"" + name + "\" is not contiguous");
        }
      }
      parts.emplace_back(name, std::vector<double>{});
    }
    auto& vals = parts.back().second;
    if (k != static_cast<long>(vals.size())) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": expected index " + std::to_string(vals.size()));
    }
    vals.push_back(v);
  }
  for (auto& [name, vals] : parts) {
    sol.components.emplace_back(
        name, Eigen::Map<const Vector>(vals.data(), static_cast<Index>(vals.size())));
  }
  return sol;
}

std::string residuals_json(const Residuals& res) {
  ojson j = ojson::object();
  for (const auto& [k, v] : res) j[k] = v;
  return j.dump(2) + "\n";
}

RunReport run(const config::ProblemConfig& cfg) {
  RunReport rep;
  rep.kind = cfg.kind;
  SolveOptions opts;
  opts.keep_snapshots = false;
  const auto t0 = std::chrono::steady_clock::now();
  SolveTrace trace;
  Solution& sol = rep.solution;
  std::visit(
      overloaded{
          [](const std::monostate&) {
            throw ConfigError("config: no problem assembled");
          },
          [&](const config::TsengSetup& s) {
            auto [z, tr] = tseng_solve(s.a, s.b, s.z0, s.schedule, cfg.stop, opts);
            sol.components = {{"x", z}, {"state", z}};
            trace = std::move(tr);
          },
          [&](const config::FpifSetup& s) {
            FpifResult r = fpif_solve(s.problem, s.x0, s.y0, s.schedule, cfg.stop, opts);
            sol.components = {{"x", r.point.x}, {"y", r.point.y}, {"state", r.z}};
            trace = std::move(r.trace);
          },
          [&](const config::SumSetup& s) {
            SumResult r = sum_solve(s.problem, s.z0, s.lambda, cfg.stop, opts);
            sol.components = {{"x", r.x}, {"state", flatten(r.z)}};
            trace = std::move(r.trace);
          },
          [&](const config::PDSetup& s) {
            PDResult r = pd_solve(s.problem, s.gamma, s.x0, s.u0, s.lambda, cfg.stop, opts);
            sol.components.emplace_back("x", r.x);
            for (std::size_t i = 0; i < r.u.size(); ++i) {
              sol.components.emplace_back("u" + std::to_string(i + 1), r.u[i]);
            }
            std::vector<Vector> st{r.x_state};
            st.insert(st.end(), r.u_state.begin(), r.u_state.end());
            sol.components.emplace_back("state", flatten(st));
            trace = std::move(r.trace);
          },
          [&](const config::MatrixGameSetup& s) {
            GameResult r = matrix_game_solve(s.game, s.gamma, cfg.stop, s.lambda, opts);
            sol.components = {{"x1", r.x1}, {"x2", r.x2},
                              {"state", flatten({r.run.z1, r.run.z2})}};
            trace = std::move(r.run.trace);
          },
          [&](const config::GridGameSetup& s) {
            GameResult r = grid_game_solve(s.game, s.gamma, cfg.stop, s.lambda, opts);
            sol.components = {{"x1", r.x1}, {"x2", r.x2},
                              {"state", flatten({r.run.z1, r.run.z2})}};
            trace = std::move(r.run.trace);
          }},
      cfg.setup);
  rep.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.status = trace.status;
  rep.iterations = trace.iterations;
  rep.residual = trace.final_relative_residual;
  rep.residuals = evaluate(cfg, sol);

  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + cfg.out_dir.string() +
                  ": " + ec.message());
  }
  rep.solution_path = cfg.out_dir / "solution.csv";
  rep.trace_path = cfg.out_dir / "trace.csv";
  rep.report_path = cfg.out_dir / "report.json";
  write_solution(rep.solution_path, sol);
  write_atomic(rep.trace_path, trace.csv());

  ojson j;
  j["kind"] = rep.kind;
  j["status"] = to_string(rep.status);
  j["iterations"] = rep.iterations;
  j["residual"] = rep.residual;
  for (const auto& [k, v] : rep.residuals) {
    if (k == "value" || k == "gap") j[k] = v;
  }
  j["wall_time"] = rep.wall_time;
  j["seed"] = cfg.seed;
  j["solution"] = rep.solution_path.string();
  j["trace"] = rep.trace_path.string();
  ojson res = ojson::object();
  for (const auto& [k, v] : rep.residuals) res[k] = v;
  j["residuals"] = res;
  rep.report_json = j.dump(2) + "\n";
  write_atomic(rep.report_path, rep.report_json);
  log::info("run " + rep.kind + ": " + to_string(rep.status) + " after " +
            std::to_string(rep.iterations) + " iterations");
  return rep;
}

}  // namespace fpif::runner
