#include "mvce/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "mvce/random.hpp"

namespace mvce {

DesignVector::DesignVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw DimensionError("design vector is empty");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("design weights must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument("design weights sum to " + std::to_string(total) + ", expected 1");
  }
  for (double& w : weights_) w /= total;
}

std::vector<std::size_t> DesignVector::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] > kSupportTol) out.push_back(i);
  }
  return out;
}

DualState make_state(const DataMatrix& x, const DesignVector& u) {
  if (u.size() != x.rows()) throw DimensionError("design length does not match row count");
  DualState s;
  s.u = u;
  s.m = gram_matrix(x.values(), std::span<const double>(u.weights()));
  const SpdMatrix spd(s.m);
  s.m = spd.matrix();
  s.m_inv = spd.inverse();
  s.g = log_det(spd);
  RowMatrix w = spd.cholesky_lower()
                    .triangularView<Eigen::Lower>()
                    .solve(x.values().transpose())
                    .transpose();
  s.xi = w.rowwise().squaredNorm();
  return s;
}

std::string_view to_string(CertificateKind kind) {
  return kind == CertificateKind::approx_optimal ? "approx-optimal" : "primal-feasible";
}

double certificate_gap(double d, double delta) { return d * std::log1p(delta); }

namespace {

struct Extremes {
  std::size_t argmax = 0;
  std::size_t argmin_support = 0;
  double max_xi = 0.0;
  double min_support_xi = 0.0;
};

Extremes find_extremes(const DualState& s) {
  Extremes e;
  Eigen::Index imax = 0;
  e.max_xi = s.xi.maxCoeff(&imax);
  e.argmax = static_cast<std::size_t>(imax);
  e.min_support_xi = std::numeric_limits<double>::infinity();
  const auto& w = s.u.weights();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > kSupportTol && s.xi(static_cast<Eigen::Index>(i)) < e.min_support_xi) {
      e.min_support_xi = s.xi(static_cast<Eigen::Index>(i));
      e.argmin_support = i;
    }
  }
  return e;
}

Certificate classify(const DualState& s, double delta) {
  const auto e = find_extremes(s);
  const double d = static_cast<double>(s.dim());
  Certificate c;
  c.delta = delta;
  c.gap_bound = certificate_gap(d, delta);
  c.max_xi = e.max_xi;
  c.min_support_xi = e.min_support_xi;
  c.kind = e.min_support_xi >= (1.0 - delta) * d ? CertificateKind::approx_optimal
                                                  : CertificateKind::primal_feasible;
  return c;
}

bool feasible(const Certificate& c, double d) { return c.max_xi <= (1.0 + c.delta) * d; }

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

void check_delta(double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
}

}  // namespace

Certificate certify(const DualState& state, double delta) {
  check_delta(delta);
  Certificate c = classify(state, delta);
  if (!feasible(c, static_cast<double>(state.dim()))) {
    throw NotFeasible("max xi = " + std::to_string(c.max_xi) + " exceeds (1 + delta) d");
  }
  return c;
}

DesignVector init_khachiyan(std::size_t m) {
  if (m == 0) throw DimensionError("cannot initialize an empty design");
  return DesignVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

DesignVector init_kumar_yildirim(const DataMatrix& x, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(x.rows());
  const auto d = static_cast<Eigen::Index>(x.cols());
  const auto& xv = x.values();
  const double scale = xv.rowwise().norm().maxCoeff();
  if (!(scale > 0.0)) throw RankDeficient("all rows are zero");

  Rng rng(derive_seed(seed, 0));
  std::normal_distribution<double> normal;
  Matrix basis(d, 0);
  std::vector<std::size_t> chosen;

  auto project_out = [&](Vector v) {
    for (int pass = 0; pass < 2; ++pass) v -= basis * (basis.transpose() * v);
    return v;
  };
  auto take = [&](Eigen::Index i) {
    if (std::find(chosen.begin(), chosen.end(), static_cast<std::size_t>(i)) == chosen.end()) {
      chosen.push_back(static_cast<std::size_t>(i));
    }
    if (basis.cols() == d) return;
    Vector r = project_out(xv.row(i).transpose());
    const double norm = r.norm();
    if (norm > 1e-10 * scale) {
      basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
      basis.col(basis.cols() - 1) = r / norm;
    }
  };

  while (basis.cols() < d) {
    Vector b(d);
    for (Eigen::Index k = 0; k < d; ++k) b(k) = normal(rng);
    b = project_out(b);
    b /= b.norm();
    const Vector proj = xv * b;
    Eigen::Index imax = 0;
    Eigen::Index imin = 0;
    const double hi = proj.maxCoeff(&imax);
    const double lo = proj.minCoeff(&imin);
    if (std::max(hi, -lo) <= 1e-10 * scale) {
      throw RankDeficient("rows do not span R^" + std::to_string(d));
    }
    // The extreme with larger magnitude always extends the span.
    if (hi >= -lo) {
      take(imax);
      if (imin != imax) take(imin);
    } else {
      take(imin);
      if (imin != imax) take(imax);
    }
  }

  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  for (auto i : chosen) w[i] = 1.0 / static_cast<double>(chosen.size());
  return DesignVector(std::move(w));
}

SolveResult solve_wolfe_atwood(const DataMatrix& x, const DesignVector& u0,
                               const SolveOptions& options) {
  check_delta(options.delta);
  const auto start = std::chrono::steady_clock::now();
  const auto& xv = x.values();
  const double d = static_cast<double>(x.cols());
  const double delta = options.delta;
  const std::size_t refactor_every = std::max<std::size_t>(options.refactor_every, 1);

  SolveResult result;
  DualState& s = result.state;
  s = make_state(x, u0);
  std::vector<double> u = s.u.weights();
  std::size_t since_refactor = 0;
  std::size_t iter = 0;

  auto refactor = [&] {
    double total = std::accumulate(u.begin(), u.end(), 0.0);
    for (double& w : u) w /= total;
    s = make_state(x, DesignVector(u));
    since_refactor = 0;
  };
  auto commit = [&] { s.u = DesignVector(u); };

  if (options.record_trace) result.g_trace.push_back(s.g);

  while (true) {
    // Extremes over the live weights; s.u is only synced on refactor.
    Eigen::Index jp = 0;
    const double xi_max = s.xi.maxCoeff(&jp);
    std::size_t jm = 0;
    double xi_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double xi_i = s.xi(static_cast<Eigen::Index>(i));
      if (u[i] > kSupportTol && xi_i < xi_min) {
        xi_min = xi_i;
        jm = i;
      }
    }
    const double add_gain = xi_max / d - 1.0;
    const double away_gain = 1.0 - xi_min / d;

    if (add_gain <= delta && away_gain <= delta) {
      if (since_refactor == 0) break;
      refactor();
      continue;
    }
    if (iter >= options.max_iter) {
      commit();
      result.certificate = classify(s, delta);
      result.certificate.iterations = iter;
      result.certificate.runtime_ms = elapsed_ms(start);
      throw MaxIterations("Wolfe-Atwood did not reach delta = " + std::to_string(delta) +
                              " in " + std::to_string(iter) + " iterations",
                          std::move(result));
    }

    std::size_t j = 0;
    double lambda = 0.0;
    bool drop = false;
    if (add_gain >= away_gain) {
      j = static_cast<std::size_t>(jp);
      lambda = (xi_max - d) / (d * (xi_max - 1.0));
    } else {
      j = jm;
      const double floor = -u[j] / (1.0 - u[j]);
      lambda = xi_min > 1.0 ? (xi_min - d) / (d * (xi_min - 1.0)) : floor;
      if (lambda <= floor) {
        lambda = floor;
        drop = true;
      }
    }

    const auto jj = static_cast<Eigen::Index>(j);
    const double xi_j = s.xi(jj);
    const double denom = 1.0 - lambda + lambda * xi_j;
    if (!(denom > 1e-14)) {
      if (since_refactor == 0) throw RankDeficient("drop step annihilated the span of the support");
      refactor();
      continue;
    }

    const Vector v = s.m_inv * xv.row(jj).transpose();
    const Vector w = xv * v;
    const double coef = lambda / denom;
    const double shrink = 1.0 / (1.0 - lambda);
    s.m_inv = shrink * (s.m_inv - coef * v * v.transpose());
    s.m = (1.0 - lambda) * s.m + lambda * xv.row(jj).transpose() * xv.row(jj);
    s.xi = shrink * (s.xi.array() - coef * w.array().square()).matrix();
    s.g += (d - 1.0) * std::log1p(-lambda) + std::log(denom);

    bool zeroed = false;
    for (double& ui : u) {
      ui *= 1.0 - lambda;
      if (ui != 0.0 && ui < kSupportTol) {
        ui = 0.0;
        zeroed = true;
      }
    }
    u[j] = drop ? 0.0 : u[j] + lambda;
    ++iter;
    ++since_refactor;

    if (zeroed || since_refactor >= refactor_every) {
      refactor();
    } else if (iter % 64 == 0) {
      // Drift check on the trace identity sum u_i xi_i = d.
      double trace = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) trace += u[i] * s.xi(static_cast<Eigen::Index>(i));
      if (std::abs(trace - d) > 1e-8) refactor();
    }
    if (options.record_trace) result.g_trace.push_back(s.g);
  }

  result.certificate = classify(s, delta);
  result.certificate.iterations = iter;
  result.certificate.runtime_ms = elapsed_ms(start);
  return result;
}

SolveResult solve_fixed_point(const DataMatrix& x, const DesignVector& u0,
                              const SolveOptions& options) {
  check_delta(options.delta);
  const auto start = std::chrono::steady_clock::now();
  const double d = static_cast<double>(x.cols());
  SolveResult result;
  result.state = make_state(x, u0);
  if (options.record_trace) result.g_trace.push_back(result.state.g);
  std::size_t iter = 0;
  while (result.state.xi.maxCoeff() > (1.0 + options.delta) * d) {
    if (iter >= options.max_iter) {
      result.certificate = classify(result.state, options.delta);
      result.certificate.iterations = iter;
      result.certificate.runtime_ms = elapsed_ms(start);
      throw MaxIterations("fixed-point iteration did not reach delta = " +
                              std::to_string(options.delta),
                          std::move(result));
    }
    std::vector<double> u = result.state.u.weights();
    double total = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] *= result.state.xi(static_cast<Eigen::Index>(i)) / d;
      total += u[i];
    }
    for (double& ui : u) ui /= total;
    result.state = make_state(x, DesignVector(std::move(u)));
    ++iter;
    if (options.record_trace) result.g_trace.push_back(result.state.g);
  }
  result.certificate = classify(result.state, options.delta);
  result.certificate.iterations = iter;
  result.certificate.runtime_ms = elapsed_ms(start);
  return result;
}

double bound_initial_gap(double d, double s, double epsilon) {
  if (!(epsilon < 1.0)) return std::numeric_limits<double>::infinity();
  return d * std::log(s / (1.0 - epsilon));
}

double bound_final_gap(double d, double epsilon, double delta) {
  if (!(epsilon < 1.0)) return std::numeric_limits<double>::infinity();
  return d * (std::log1p(delta) - std::log1p(-epsilon));
}

}  // namespace mvce
