#include "vdlab/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "vdlab/littlewood_paley.hpp"

namespace vdlab::data {
namespace {

double bump(double s) {
  const double w = (1.0 - s * s) * (1.0 - s * s);
  return w * w * w;
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace

Family parse_family(const std::string& name) {
  if (name == "gaussian") return Family::gaussian;
  if (name == "annulus") return Family::annulus;
  if (name == "l1-bump") return Family::l1_bump;
  throw InputError("unknown initial-data family '" + name + "' (expected gaussian, annulus or l1-bump)");
}

std::string family_name(Family family) {
  switch (family) {
    case Family::gaussian:
      return "gaussian";
    case Family::annulus:
      return "annulus";
    case Family::l1_bump:
      return "l1-bump";
  }
  return "?";
}

double radial_transform(Family family, double amplitude, int dim, double r) {
  if (dim != 2 && dim != 3) throw InputError("dimension must be 2 or 3");
  switch (family) {
    case Family::gaussian:
      return amplitude * std::exp(-r * r);
    case Family::annulus:
      return amplitude * lp::phi(r);
    case Family::l1_bump: {
      using Rule = boost::math::quadrature::gauss<double, 64>;
      if (dim == 3) {
        // (2 pi)^{-3/2} 4 pi int_0^1 f(s) s^2 sin(rs)/(rs) ds
        const double v = Rule::integrate([r](double s) { return bump(s) * s * s * sinc(r * s); }, 0.0, 1.0);
        return amplitude * 4.0 * kPi * std::pow(2.0 * kPi, -1.5) * v;
      }
      // (2 pi)^{-1} 2 pi int_0^1 f(s) s J0(rs) ds
      return amplitude *
             Rule::integrate([r](double s) { return bump(s) * s * boost::math::cyl_bessel_j(0, r * s); }, 0.0, 1.0);
    }
  }
  return 0.0;
}

green::RadialProfile radial_profile(Family family, double amplitude, int dim) {
  if (dim != 2 && dim != 3) throw InputError("dimension must be 2 or 3");
  return [=](double r) {
    const double v = radial_transform(family, amplitude, dim, r);
    return std::array<double, 2>{v, v};
  };
}

SpectralField lattice_field(Family family, double amplitude, const Lattice& lattice) {
  const int n = lattice.dim();
  const double scale = std::pow(lattice.points() * 2.0 * kPi, 0.5 * n) / std::pow(lattice.period(), n);
  SpectralField f(lattice, true);
  std::map<double, double> cache;
  for (std::size_t m = 0; m < lattice.size(); ++m) {
    const double r = lattice.magnitude(m);
    auto it = cache.find(r);
    if (it == cache.end()) it = cache.emplace(r, radial_transform(family, amplitude, n, r)).first;
    f[m] = scale * it->second;
  }
  return f;
}

visco::State nonlinear_state(Family family, double amplitude, const Lattice& lattice) {
  SpectralField g = lattice_field(family, 1.0, lattice);
  g[0] = 0.0;
  double mx = 0.0;
  for (int j = 0; j < lattice.dim(); ++j) {
    for (double x : dft_inverse(partial(g, j))) mx = std::max(mx, std::abs(x));
  }
  if (mx == 0.0) throw InputError("initial-data family has no resolved modes on this lattice");
  g *= amplitude / mx;
  VectorField psi(lattice);
  VectorField v(lattice);
  for (int i = 0; i < lattice.dim(); ++i) {
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    psi[i] = sign * g;
    v[i] = sign * g;
  }
  return visco::init_from_displacement(psi, &v);
}

}  // namespace vdlab::data
