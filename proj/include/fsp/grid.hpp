#ifndef FSP_GRID_HPP
#define FSP_GRID_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fsp {

struct UniformGrid {
    double x_min;
    double x_max;
    int n;

    UniformGrid(double xmin, double xmax, int npts) : x_min(xmin), x_max(xmax), n(npts) {
        if (n < 16) throw std::invalid_argument("grid needs n >= 16");
        if (!(x_min < x_max)) throw std::invalid_argument("grid needs x_min < x_max");
    }

    double dx() const { return (x_max - x_min) / (n - 1); }
    double x(int i) const { return x_min + i * dx(); }

    bool operator==(const UniformGrid& o) const {
        return x_min == o.x_min && x_max == o.x_max && n == o.n;
    }
};

// Constant far-field data on each side of the truncated domain; the nonlocal
// operator integrates against these constants in closed form beyond the grid.
struct ExteriorClosure {
    double left_value;
    double right_value;
};

struct Field {
    UniformGrid grid;
    std::vector<double> values;
    ExteriorClosure closure;

    Field(const UniformGrid& g, std::vector<double> v, const ExteriorClosure& c)
        : grid(g), values(std::move(v)), closure(c) {
        if (static_cast<int>(values.size()) != grid.n)
            throw std::invalid_argument("field length does not match grid");
        for (double x : values)
            if (!std::isfinite(x)) throw std::invalid_argument("field values must be finite");
    }

    // Piecewise-linear interpolant with a linear transition across one ghost
    // cell to the closure constant on each side, constant beyond. This is the
    // exact function the discrete operator acts on.
    double interp_extended(double x) const {
        const double dx = grid.dx();
        if (x <= grid.x_min - dx) return closure.left_value;
        if (x >= grid.x_max + dx) return closure.right_value;
        if (x < grid.x_min) {
            const double t = (x - (grid.x_min - dx)) / dx;
            return closure.left_value + t * (values.front() - closure.left_value);
        }
        if (x > grid.x_max) {
            const double t = (x - grid.x_max) / dx;
            return values.back() + t * (closure.right_value - values.back());
        }
        const double r = (x - grid.x_min) / dx;
        int j = static_cast<int>(std::floor(r));
        if (j >= grid.n - 1) j = grid.n - 2;
        const double t = r - j;
        return values[j] + t * (values[j + 1] - values[j]);
    }
};

}  // namespace fsp

#endif
