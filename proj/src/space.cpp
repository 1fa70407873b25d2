#include "fg/space.hpp"

#include "fg/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fg {

double Domain::spacing(int axis) const {
  const int n = nodes[axis];
  return periodic() ? length[axis] / n : length[axis] / (n - 1);
}

void Domain::validate() const {
  for (int a = 0; a < dim(); ++a) {
    if (nodes[a] < 8) throw DomainError("domain: resolution must be at least 8 nodes per axis");
    if (!(length[a] > 0.0) || !std::isfinite(length[a])) throw DomainError("domain: lengths must be positive");
  }
}

std::string Domain::describe() const {
  std::ostringstream os;
  static const char* names[] = {"Interval", "Circle", "Box", "Torus"};
  os << names[static_cast<int>(geometry)] << "(" << length[0];
  if (dim() == 2) os << "," << length[1];
  os << ")[" << nodes[0];
  if (dim() == 2) os << "x" << nodes[1];
  os << "]";
  return os.str();
}

WeightedSpace::WeightedSpace(Domain domain, MinkowskiNorm norm, ScalarField psi)
    : domain_(domain), norm_(std::move(norm)), psi_(std::move(psi)) {
  domain_.validate();
  if (norm_.dim() != domain_.dim()) {
    throw DomainError("space: norm dimension does not match domain dimension");
  }
  if (psi_.size() != domain_.size()) throw DomainError("space: weight sample has wrong length");
  if (!std::all_of(psi_.begin(), psi_.end(), [](double v) { return std::isfinite(v); })) {
    throw DomainError("space: weight Psi has non-finite values");
  }
  // Trapezoidal lumping on no-flux axes, uniform on periodic axes.
  const double psi_min = *std::min_element(psi_.begin(), psi_.end());
  mass_.resize(psi_.size());
  for (std::size_t i = 0; i < psi_.size(); ++i) {
    const auto mi = multi_index(i);
    double w = 1.0;
    for (int a = 0; a < domain_.dim(); ++a) {
      w *= domain_.spacing(a);
      if (!domain_.periodic() && (mi[a] == 0 || mi[a] == domain_.nodes[a] - 1)) w *= 0.5;
    }
    mass_[i] = w * std::exp(-(psi_[i] - psi_min));
  }
  const double total = std::accumulate(mass_.begin(), mass_.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) throw DomainError("space: total mass is zero");
  for (double& m : mass_) m /= total;
  if (std::any_of(mass_.begin(), mass_.end(), [](double m) { return !(m > 0.0); })) {
    throw DomainError("space: weight underflows to a zero cell mass");
  }
}

double WeightedSpace::coord(std::size_t i, int axis) const {
  const auto mi = multi_index(i);
  return domain_.origin(axis) + mi[axis] * domain_.spacing(axis);
}

Vec WeightedSpace::position(std::size_t i) const {
  Vec p(dim());
  for (int a = 0; a < dim(); ++a) p[a] = coord(i, a);
  return p;
}

ScalarField WeightedSpace::sample(const Expression& e) const {
  ScalarField out(size());
  for (std::size_t i = 0; i < size(); ++i) {
    out[i] = e(coord(i, 0), dim() == 2 ? coord(i, 1) : 0.0);
  }
  return out;
}

WeightedSpace build_space(const Domain& domain, const MinkowskiNorm& norm, const std::string& psi_expr) {
  domain.validate();
  const Expression psi(psi_expr);
  ScalarField samples(domain.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const int ix = static_cast<int>(i % domain.nodes[0]);
    const int iy = static_cast<int>(i / domain.nodes[0]);
    samples[i] = psi(domain.origin(0) + ix * domain.spacing(0),
                     domain.dim() == 2 ? domain.origin(1) + iy * domain.spacing(1) : 0.0);
  }
  return WeightedSpace(domain, norm, std::move(samples));
}

double integrate(const WeightedSpace& space, const ScalarField& f) {
  const auto& m = space.cell_mass();
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += f[i] * m[i];
  return s;
}

double asym_distance(const WeightedSpace& space, std::size_t x, std::size_t y) {
  const int d = space.dim();
  const Vec delta = space.position(y) - space.position(x);
  if (!space.domain().periodic()) return space.norm().eval(delta);
  double best = std::numeric_limits<double>::infinity();
  const int ky_max = d == 2 ? 1 : 0;
  for (int kx = -1; kx <= 1; ++kx) {
    for (int ky = -ky_max; ky <= ky_max; ++ky) {
      Vec v = delta;
      v[0] += kx * space.domain().length[0];
      if (d == 2) v[1] += ky * space.domain().length[1];
      best = std::min(best, space.norm().eval(v));
    }
  }
  return best;
}

ProbabilityVector::ProbabilityVector(std::vector<double> weights) : p_(std::move(weights)) {
  double total = 0.0;
  for (double w : p_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("probability: masses must be finite and nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw DomainError("probability: total mass is zero");
  for (double& w : p_) w /= total;
}

}  // namespace fg
