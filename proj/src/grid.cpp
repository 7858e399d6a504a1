#include "epdt/grid.hpp"

#include <cmath>
#include <sstream>

#include "epdt/errors.hpp"
#include "epdt/specfun.hpp"

namespace epdt {

double sphere_area(int n) {
    if (n < 1) throw DomainError("sphere_area: n must be >= 1");
    return 2.0 * std::pow(M_PI, 0.5 * n) / specfun::gamma_real(0.5 * n);
}

SpatialGrid::SpatialGrid(Geometry g, int n, double L, double dx)
    : geometry_(g), n_(n), L_(L), dx_(dx) {
    if (!(dx > 0.0) || !(L > 0.0) || !std::isfinite(L) || !std::isfinite(dx))
        throw ConfigError("grid: L and dx must be positive and finite");
    const double cells_d = std::round(L / dx);
    if (cells_d < 4.0 || cells_d > 5e7) throw ConfigError("grid: L/dx out of range");
    const auto cells = static_cast<std::size_t>(cells_d);
    // Snap L to a whole number of cells so that node spacing is exactly dx.
    L_ = static_cast<double>(cells) * dx;

    if (g == Geometry::line1d) {
        nodes_.resize(2 * cells + 1);
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            nodes_[i] = (static_cast<double>(i) - static_cast<double>(cells)) * dx;
        weights_.assign(nodes_.size(), dx);
        weights_.front() = weights_.back() = 0.5 * dx;
    } else {
        nodes_.resize(cells + 1);
        for (std::size_t i = 0; i < nodes_.size(); ++i) nodes_[i] = static_cast<double>(i) * dx;
        const double area = sphere_area(n);
        weights_.resize(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            weights_[i] = area * std::pow(nodes_[i], n - 1) * dx;
        weights_.front() *= 0.5;
        weights_.back() *= 0.5;
    }
}

SpatialGrid SpatialGrid::line(double L, double dx) { return {Geometry::line1d, 1, L, dx}; }

SpatialGrid SpatialGrid::radial(int n, double L, double dx) {
    if (n < 1) throw ConfigError("grid: n must be >= 1");
    return {Geometry::radial, n, L, dx};
}

SpatialGrid SpatialGrid::for_dimension(int n, double L, double dx) {
    return n == 1 ? line(L, dx) : radial(n, L, dx);
}

double SpatialGrid::radius(std::size_t i) const { return std::abs(nodes_[i]); }

double SpatialGrid::integrate(std::span<const double> f) const {
    if (f.size() != weights_.size()) throw ConfigError("grid: sample size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += weights_[i] * f[i];
    return s;
}

std::vector<double> SpatialGrid::sample(const std::function<double(double)>& radial_fn) const {
    std::vector<double> out(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) out[i] = radial_fn(radius(i));
    return out;
}

std::string SpatialGrid::describe() const {
    std::ostringstream os;
    os << (geometry_ == Geometry::line1d ? "line1d" : "radial") << "(n=" << n_ << ", L=" << L_
       << ", dx=" << dx_ << ", nodes=" << nodes_.size() << ")";
    return os.str();
}

}  // namespace epdt
