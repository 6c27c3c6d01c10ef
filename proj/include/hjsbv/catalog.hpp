#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hjsbv/hopf_lax.hpp"
#include "hjsbv/oracle_1d.hpp"

namespace hjsbv {

/// Built-in initial data for H = |p|^2 / 2 with gradients in [-1, 1]^n.
struct CatalogProblem {
  std::string name;
  std::function<double(const Point&)> u0;
  double lipschitz = 1.0;
  bool semiconcave = true;  // bounded semiconcavity constant independent of h
  std::optional<PwaData> pwa;
  std::optional<double> shock_time;
};

inline std::vector<std::string> catalog_names() {
  return {"flat", "affine", "concave-kink", "clamped-ramp", "riemann-shock", "cantor", "pwa"};
}

inline const PwaData& catalog_pwa() {
  static const PwaData d{{-0.6, -0.1, 0.3}, {0.5, -0.4, 0.2, -0.8}, 0.0};
  return d;
}

/// Fails with DomainError for unknown names. `cantor_level` only affects "cantor".
inline CatalogProblem catalog_problem(const std::string& name, int cantor_level = 8) {
  CatalogProblem p;
  p.name = name;
  auto from_pwa = [&](const PwaData& d, bool semiconcave) {
    p.u0 = d.sampler();
    p.lipschitz = d.lipschitz();
    p.semiconcave = semiconcave;
    p.pwa = d;
  };
  if (name == "flat") {
    from_pwa(PwaData{{}, {0.0}, 0.0}, true);
  } else if (name == "affine") {
    from_pwa(PwaData{{}, {0.5}, 0.0}, true);
  } else if (name == "concave-kink") {
    from_pwa(PwaData{{0.0}, {1.0, -1.0}, 0.0}, true);
  } else if (name == "clamped-ramp") {
    from_pwa(PwaData{{-1.0, 0.0, 1.0}, {0.0, -1.0, 1.0, 0.0}, 1.0}, false);
  } else if (name == "pwa") {
    from_pwa(catalog_pwa(), false);
  } else if (name == "cantor") {
    from_pwa(cantor_initial_data(cantor_level), false);
  } else if (name == "riemann-shock") {
    // -y^2 on |y| <= 1/2 joined C^1 to -|y| + 1/4: every characteristic from
    // the quadratic cap reaches x = 0 at t = 1/2
    p.u0 = [](const Point& y) { return std::abs(y[0]) <= 0.5 ? -y[0] * y[0] : -std::abs(y[0]) + 0.25; };
    p.lipschitz = 1.0;
    p.semiconcave = true;
    p.shock_time = riemann_shock_time(1.0, -1.0, 1.0, 1.0);
  } else {
    throw DomainError("unknown catalog problem: " + name);
  }
  return p;
}

inline HamiltonianModel catalog_hamiltonian(int dim = 1) {
  return HamiltonianModel::quadratic(Eigen::MatrixXd::Identity(dim, dim), 1.0);
}

/// Catalog runs: R = 0.5, T = 1, C' = max|DH| + 1.
inline HopfLaxSolution catalog_solution(const CatalogProblem& p, double h) {
  auto H = catalog_hamiltonian(1);
  return HopfLaxSolution(H, HopfLaxSolution::cone_domain(H, 0.5, 1.0, h), p.u0, p.lipschitz);
}

/// u0(y) = min_i  c_i + <b_i, y - m_i> + a_i |y - m_i|^2 / 2, semiconcave with
/// constant max(a_i, 0).
struct QuadraticMin {
  int dim = 1;
  struct Piece {
    double c, a;
    Point b, m;
  };
  std::vector<Piece> pieces;

  double operator()(const Point& y) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : pieces) {
      double lin = 0.0, sq = 0.0;
      for (int k = 0; k < dim; ++k) {
        const double d = y[k] - q.m[k];
        lin += q.b[k] * d;
        sq += d * d;
      }
      best = std::min(best, q.c + lin + 0.5 * q.a * sq);
    }
    return best;
  }

  double semiconcavity() const {
    double c = 0.0;
    for (const auto& q : pieces) c = std::max(c, q.a);
    return c;
  }

  /// Bound on |Du0| over the ball of the given radius.
  double gradient_bound(double radius) const {
    double g = 0.0;
    for (const auto& q : pieces) g = std::max(g, norm(q.b, dim) + std::abs(q.a) * (radius + norm(q.m, dim)));
    return g;
  }
};

inline QuadraticMin random_quadratic_min(std::mt19937_64& rng, int dim) {
  std::uniform_int_distribution<int> K(2, 4);
  std::uniform_real_distribution<double> C(-0.2, 0.2), B(-0.3, 0.3), A(-0.5, 1.0), M(-0.3, 0.3);
  QuadraticMin q;
  q.dim = dim;
  const int k = K(rng);
  for (int i = 0; i < k; ++i) {
    QuadraticMin::Piece p{C(rng), A(rng), {0, 0}, {0, 0}};
    for (int a = 0; a < dim; ++a) {
      p.b[a] = B(rng);
      p.m[a] = M(rng);
    }
    q.pieces.push_back(p);
  }
  return q;
}

/// Random semiconcave instance. The gradient box [-G, G]^n is the fixed
/// point of G = sup |Du0| over Omega_0, whose radius R + (sqrt(n) G + 1) T
/// itself depends on G.
struct RandomInstance {
  QuadraticMin data;
  std::unique_ptr<HopfLaxSolution> sol;
};

inline RandomInstance random_semiconcave_instance(std::uint64_t seed, int dim, double h, double radius = 0.3,
                                                  double horizon = 0.25) {
  std::mt19937_64 rng(seed);
  RandomInstance inst;
  inst.data = random_quadratic_min(rng, dim);
  double G = 1.0;
  for (int it = 0; it < 100; ++it) {
    const double half = radius + (std::sqrt(static_cast<double>(dim)) * G + 1.0) * horizon;
    G = std::max(1e-3, inst.data.gradient_bound(half));
  }
  auto H = HamiltonianModel::quadratic(Eigen::MatrixXd::Identity(dim, dim), G * 1.001);
  const double lip = G * 1.001;
  auto domain = HopfLaxSolution::cone_domain(H, radius, horizon, h);
  const QuadraticMin data = inst.data;
  inst.sol = std::make_unique<HopfLaxSolution>(H, domain, [data](const Point& y) { return data(y); }, lip);
  return inst;
}

/// Random piecewise-affine data with slopes in [-1, 1].
inline PwaData random_pwa(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> K(1, 6);
  std::uniform_real_distribution<double> S(-1.0, 1.0), B(-1.5, 1.5), V(-0.5, 0.5);
  PwaData d;
  const int m = K(rng);
  for (int i = 0; i < m; ++i) d.breakpoints.push_back(B(rng));
  std::sort(d.breakpoints.begin(), d.breakpoints.end());
  d.breakpoints.erase(std::unique(d.breakpoints.begin(), d.breakpoints.end()), d.breakpoints.end());
  for (std::size_t i = 0; i <= d.breakpoints.size(); ++i) d.slopes.push_back(S(rng));
  d.anchor = V(rng);
  return d;
}

}  // namespace hjsbv
