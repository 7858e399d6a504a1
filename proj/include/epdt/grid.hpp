#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace epdt {

enum class Geometry { line1d, radial };

// Uniform nodes on x in [-L, L] (line1d) or r in [0, L] (radial, dimension n).
// The last node of either end is an outer boundary where u = 0.
class SpatialGrid {
public:
    static SpatialGrid line(double L, double dx);
    static SpatialGrid radial(int n, double L, double dx);
    // line1d for n == 1, radial otherwise.
    static SpatialGrid for_dimension(int n, double L, double dx);

    Geometry geometry() const { return geometry_; }
    int dimension() const { return n_; }
    double L() const { return L_; }
    double dx() const { return dx_; }
    std::size_t size() const { return nodes_.size(); }
    std::span<const double> nodes() const { return nodes_; }
    double node(std::size_t i) const { return nodes_[i]; }
    // |x| for line1d, r for radial.
    double radius(std::size_t i) const;

    // Quadrature weights of the composite trapezoid rule for int_{R^n} f dx,
    // including omega_{n-1} r^{n-1} for radial grids.
    std::span<const double> weights() const { return weights_; }
    double integrate(std::span<const double> f) const;

    std::vector<double> sample(const std::function<double(double)>& radial_fn) const;

    std::string describe() const;

private:
    SpatialGrid(Geometry g, int n, double L, double dx);

    Geometry geometry_;
    int n_;
    double L_;
    double dx_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

// omega_{n-1} = 2 pi^{n/2} / Gamma(n/2), the area of the unit sphere in R^n.
double sphere_area(int n);

}  // namespace epdt
