#include "fg/transport.hpp"

#include "fg/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace fg {

namespace {

struct Cell {
  int i;
  int j;
  double flow;
};

// Edges of the basis tree touching a node; rows are 0..m-1, columns m..m+n-1.
std::vector<std::vector<int>> tree_adjacency(const std::vector<Cell>& basis, int m, int n) {
  std::vector<std::vector<int>> adj(m + n);
  for (int e = 0; e < static_cast<int>(basis.size()); ++e) {
    adj[basis[e].i].push_back(e);
    adj[m + basis[e].j].push_back(e);
  }
  return adj;
}

}  // namespace

TransportPlan transportation_simplex(const Eigen::MatrixXd& cost, const std::vector<double>& supply,
                                     const std::vector<double>& demand) {
  const int m = static_cast<int>(supply.size());
  const int n = static_cast<int>(demand.size());
  if (m == 0 || n == 0 || cost.rows() != m || cost.cols() != n) throw DomainError("transport: shape mismatch");
  double sa = 0.0, sb = 0.0;
  for (double a : supply) sa += a;
  for (double b : demand) sb += b;
  if (std::abs(sa - sb) > 1e-9 * std::max(1.0, sa)) throw DomainError("transport: supply and demand differ");

  // Northwest corner: exactly m + n - 1 basic cells, some possibly zero.
  std::vector<Cell> basis;
  basis.reserve(m + n - 1);
  {
    std::vector<double> ra = supply, rb = demand;
    int i = 0, j = 0;
    while (i < m && j < n) {
      const double q = std::min(ra[i], rb[j]);
      basis.push_back({i, j, std::max(q, 0.0)});
      ra[i] -= q;
      rb[j] -= q;
      if (i == m - 1) {
        ++j;
      } else if (j == n - 1) {
        ++i;
      } else if (ra[i] <= rb[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  const double scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
  const int max_pivots = 50 * (m + n) * std::max(1, std::min(m, n));
  TransportPlan plan;
  std::vector<double> u(m), v(n);
  std::vector<char> seen(m + n);
  std::vector<int> via(m + n);
  for (;;) {
    const auto adj = tree_adjacency(basis, m, n);
    // Potentials u_i + v_j = c_ij on basic cells.
    std::fill(seen.begin(), seen.end(), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    u[0] = 0.0;
    while (!queue.empty()) {
      const int node = queue.front();
      queue.pop_front();
      for (int e : adj[node]) {
        const Cell& c = basis[e];
        const int other = node < m ? m + c.j : c.i;
        if (seen[other]) continue;
        seen[other] = 1;
        if (node < m) {
          v[c.j] = cost(c.i, c.j) - u[c.i];
        } else {
          u[c.i] = cost(c.i, c.j) - v[c.j];
        }
        queue.push_back(other);
      }
    }

    int ei = -1, ej = -1;
    double best = -1e-13 * scale;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        const double d = cost(i, j) - u[i] - v[j];
        if (d < best) {
          best = d;
          ei = i;
          ej = j;
        }
      }
    }
    if (ei < 0) break;
    if (++plan.pivots > max_pivots) throw SolverError("transport: simplex pivot limit reached");

    // Path in the tree from column ej to row ei; with the entering cell it closes the cycle.
    std::fill(seen.begin(), seen.end(), 0);
    std::fill(via.begin(), via.end(), -1);
    queue.assign(1, m + ej);
    seen[m + ej] = 1;
    while (!queue.empty() && !seen[ei]) {
      const int node = queue.front();
      queue.pop_front();
      for (int e : adj[node]) {
        const int other = node < m ? m + basis[e].j : basis[e].i;
        if (seen[other]) continue;
        seen[other] = 1;
        via[other] = e;
        queue.push_back(other);
      }
    }
    std::vector<int> path;
    for (int node = ei; node != m + ej;) {
      const int e = via[node];
      path.push_back(e);
      node = node < m ? m + basis[e].j : basis[e].i;
    }
    // path runs from row ei back to column ej: its first edge touches ei and
    // takes a minus sign, signs alternate from there.
    int leave = -1;
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      if (basis[path[k]].flow < theta) {
        theta = basis[path[k]].flow;
        leave = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) basis[path[k]].flow += (k % 2 == 0 ? -theta : theta);
    basis[leave] = {ei, ej, theta};
  }

  for (const auto& c : basis) {
    if (c.flow > 0.0) {
      plan.flows.push_back({static_cast<std::size_t>(c.i), static_cast<std::size_t>(c.j), c.flow});
      plan.cost += c.flow * cost(c.i, c.j);
    }
  }
  return plan;
}

TransportPlan quantile_coupling(const std::vector<double>& x, const std::vector<double>& a, const std::vector<double>& y,
                                const std::vector<double>& b, const std::function<double(double)>& cost) {
  if (x.size() != a.size() || y.size() != b.size()) throw DomainError("transport: shape mismatch");
  if (!std::is_sorted(x.begin(), x.end()) || !std::is_sorted(y.begin(), y.end())) {
    throw DomainError("transport: quantile coupling needs sorted points");
  }
  TransportPlan plan;
  std::size_t i = 0, j = 0;
  double ra = a.empty() ? 0.0 : a[0], rb = b.empty() ? 0.0 : b[0];
  while (i < x.size() && j < y.size()) {
    const double q = std::min(ra, rb);
    if (q > 0.0) {
      plan.flows.push_back({i, j, q});
      plan.cost += q * cost(y[j] - x[i]);
    }
    ra -= q;
    rb -= q;
    if (ra <= rb) {
      if (++i < x.size()) ra = a[i];
    } else {
      if (++j < y.size()) rb = b[j];
    }
  }
  return plan;
}

double w2_squared(const WeightedSpace& space, const ProbabilityVector& source, const ProbabilityVector& target,
                  std::size_t max_cells) {
  if (source.size() != space.size() || target.size() != space.size()) throw DomainError("transport: size mismatch");
  const auto& F = space.norm();
  const auto& d = space.domain();
  if (d.geometry == Geometry::Interval) {
    std::vector<double> x(space.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = space.coord(i, 0);
    const auto c = [&](double dx) {
      Vec v(1);
      v << dx;
      return std::pow(F.eval(v), 2);
    };
    return quantile_coupling(x, source.mass(), x, target.mass(), c).cost;
  }
  if (max_cells < 1) throw DomainError("transport: max_cells must be positive");

  // Merge nodes into contiguous blocks so that at most max_cells remain.
  const int dim = d.dim();
  std::array<int, 2> blocks{1, 1};
  if (dim == 1) {
    blocks[0] = static_cast<int>(std::min<std::size_t>(d.nodes[0], max_cells));
  } else {
    const int side = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(max_cells)))));
    blocks[0] = std::min(d.nodes[0], side);
    blocks[1] = std::min(d.nodes[1], side);
  }
  const std::size_t cells = static_cast<std::size_t>(blocks[0]) * blocks[1];
  std::vector<double> a(cells, 0.0), b(cells, 0.0);
  std::vector<Vec> centre(cells, Vec::Zero(dim));
  std::vector<int> count(cells, 0);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto mi = space.multi_index(i);
    std::size_t cell = 0;
    for (int k = dim - 1; k >= 0; --k) {
      const int bk = static_cast<int>(static_cast<long>(mi[k]) * blocks[k] / d.nodes[k]);
      cell = cell * blocks[k] + bk;
    }
    a[cell] += source[i];
    b[cell] += target[i];
    centre[cell] += space.position(i);
    ++count[cell];
  }
  for (std::size_t c = 0; c < cells; ++c) centre[c] /= count[c];

  Eigen::MatrixXd cost(cells, cells);
  for (std::size_t p = 0; p < cells; ++p) {
    for (std::size_t q = 0; q < cells; ++q) {
      const Vec diff = centre[q] - centre[p];
      double best = std::numeric_limits<double>::infinity();
      const int span = d.periodic() ? 1 : 0;
      for (int sx = -span; sx <= span; ++sx) {
        for (int sy = (dim == 2 ? -span : 0); sy <= (dim == 2 ? span : 0); ++sy) {
          Vec w = diff;
          w[0] += sx * d.length[0];
          if (dim == 2) w[1] += sy * d.length[1];
          best = std::min(best, F.eval(w));
        }
      }
      cost(p, q) = best * best;
    }
  }
  return transportation_simplex(cost, a, b).cost;
}

double relative_entropy(const WeightedSpace& space, const ProbabilityVector& mu) {
  if (mu.size() != space.size()) throw DomainError("entropy: size mismatch");
  double ent = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] == 0.0) continue;
    const double m = space.cell_mass()[i];
    if (m == 0.0) throw DomainError("entropy: measure is not absolutely continuous");
    ent += mu[i] * std::log(mu[i] / m);
  }
  return ent;
}

}  // namespace fg
