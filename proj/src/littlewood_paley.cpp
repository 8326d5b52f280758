#include "vdlab/littlewood_paley.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <string>

namespace vdlab::lp {
namespace {

double mollifier(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// 0 for x <= 0, 1 for x >= 1, smooth in between.
double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = mollifier(x);
  return a / (a + mollifier(1.0 - x));
}

constexpr double kInner = 0.75;
constexpr double kOuter = 4.0 / 3.0;
constexpr int kNoBlock = INT_MIN / 2;

}  // namespace

double chi(double r) { return 1.0 - smooth_step((r - kInner) / (kOuter - kInner)); }

double phi(double r) { return chi(0.5 * r) - chi(r); }

DyadicPartition::DyadicPartition(const Lattice& lattice)
    : lattice_(lattice),
      lower_(lattice.size(), kNoBlock),
      w_lower_(lattice.size(), 0.0),
      w_upper_(lattice.size(), 0.0),
      chi_(lattice.size(), 0.0) {
  q_min_ = INT_MAX;
  q_max_ = INT_MIN;
  chi_[0] = 1.0;
  for (std::size_t m = 1; m < lattice.size(); ++m) {
    const double r = lattice.magnitude(m);
    const int q0 = static_cast<int>(std::floor(std::log2(3.0 * r / 8.0))) + 1;
    lower_[m] = q0;
    w_lower_[m] = phi(std::ldexp(r, -q0));
    w_upper_[m] = phi(std::ldexp(r, -q0 - 1));
    chi_[m] = chi(r);
    if (w_lower_[m] > 0.0) {
      q_min_ = std::min(q_min_, q0);
      q_max_ = std::max(q_max_, q0);
    }
    if (w_upper_[m] > 0.0) {
      q_min_ = std::min(q_min_, q0 + 1);
      q_max_ = std::max(q_max_, q0 + 1);
    }
  }
  if (q_max_ - q_min_ + 1 < 3) {
    throw InputError("lattice hosts only " + std::to_string(std::max(0, q_max_ - q_min_ + 1)) +
                     " dyadic blocks; at least 3 are needed");
  }
}

DyadicPartition build_partition(const Lattice& lattice) { return DyadicPartition(lattice); }

PartitionDeviation partition_deviation(const DyadicPartition& partition) {
  const Lattice& lattice = partition.lattice();
  PartitionDeviation out;
  double worst = -1.0;
  for (std::size_t m = 0; m < lattice.size(); ++m) {
    const double r = lattice.magnitude(m);
    double inh = chi(r);
    for (int q = 0; q <= partition.q_max(); ++q) inh += phi(std::ldexp(r, -q));
    const double dev_inh = std::abs(inh - 1.0);
    out.inhomogeneous = std::max(out.inhomogeneous, dev_inh);
    double dev_hom = 0.0;
    if (m != 0) {
      double hom = 0.0;
      for (int q = partition.q_min(); q <= partition.q_max(); ++q) hom += phi(std::ldexp(r, -q));
      dev_hom = std::abs(hom - 1.0);
      out.homogeneous = std::max(out.homogeneous, dev_hom);
    }
    if (std::max(dev_inh, dev_hom) > worst) {
      worst = std::max(dev_inh, dev_hom);
      out.worst_mode = m;
      out.worst_radius = r;
    }
  }
  return out;
}

double DyadicPartition::weight(int q, std::size_t m) const {
  if (q == lower_[m]) return w_lower_[m];
  if (q == lower_[m] + 1) return w_upper_[m];
  return 0.0;
}

RealVector DyadicPartition::block_symbol(int q, bool homogeneous) const {
  RealVector sym(lattice_.size(), 0.0);
  if (!homogeneous && q == -1) return chi_;
  if (homogeneous ? (q < q_min_ || q > q_max_) : (q < 0 || q > q_max_)) return sym;
  for (std::size_t m = 0; m < sym.size(); ++m) sym[m] = weight(q, m);
  return sym;
}

SpectralField dyadic_block(const SpectralField& f, int q, const DyadicPartition& partition, bool homogeneous) {
  require_same_lattice(f.lattice(), partition.lattice(), "dyadic_block");
  return apply_real_symbol(f, partition.block_symbol(q, homogeneous));
}

SpectralField low_cutoff(const SpectralField& f, int q, const DyadicPartition& partition, bool homogeneous) {
  require_same_lattice(f.lattice(), partition.lattice(), "low_cutoff");
  const std::size_t n = f.size();
  RealVector sym(n, 0.0);
  if (homogeneous) {
    for (std::size_t m = 1; m < n; ++m) {
      const int lo = partition.lower_block(m);
      if (lo <= q - 1) sym[m] += partition.weight(lo, m);
      if (lo + 1 <= q - 1) sym[m] += partition.weight(lo + 1, m);
    }
  } else if (q >= 0) {
    for (std::size_t m = 0; m < n; ++m) {
      sym[m] = partition.low_weight(m);
      if (m == 0) continue;
      const int lo = partition.lower_block(m);
      if (lo >= 0 && lo <= q - 1) sym[m] += partition.weight(lo, m);
      if (lo + 1 >= 0 && lo + 1 <= q - 1) sym[m] += partition.weight(lo + 1, m);
    }
  }
  return apply_real_symbol(f, sym);
}

Components components_of(const SpectralField& f) { return {&f}; }

Components components_of(const VectorField& v) {
  Components c;
  for (int i = 0; i < v.size(); ++i) c.push_back(&v[i]);
  return c;
}

Components components_of(const MatrixField& m) {
  Components c;
  for (const auto& f : m.components()) c.push_back(&f);
  return c;
}

int first_block(const DyadicPartition& partition, bool homogeneous) {
  return homogeneous ? partition.q_min() : -1;
}

std::vector<double> block_norms(const Components& u, double p, const DyadicPartition& partition, bool homogeneous) {
  if (u.empty()) throw InputError("block_norms: no components");
  if (!(p >= 1.0)) throw InputError("Lebesgue exponent must lie in [1, inf]");
  const Lattice& lattice = partition.lattice();
  for (const auto* f : u) require_same_lattice(lattice, f->lattice(), "Besov norm");

  const int q0 = first_block(partition, homogeneous);
  const int count = partition.q_max() - q0 + 1;
  std::vector<double> norms(count, 0.0);
  const double cell = lattice.cell_volume();

  if (p == 2.0) {
    // Parseval: |Delta_q u|^2 = cell * sum_m w_q(m)^2 |c_m|^2.
    std::vector<double> energy(count, 0.0);
    for (const auto* f : u) {
      for (std::size_t m = 0; m < lattice.size(); ++m) {
        const double e = std::norm((*f)[m]);
        if (e == 0.0) continue;
        if (!homogeneous) {
          const double c = partition.low_weight(m);
          energy[0] += c * c * e;
        }
        if (m == 0) continue;
        const int lo = partition.lower_block(m);
        for (int q : {lo, lo + 1}) {
          const int slot = q - q0;
          if (q < (homogeneous ? q0 : 0) || slot >= count) continue;
          const double w = partition.weight(q, m);
          energy[slot] += w * w * e;
        }
      }
    }
    for (int k = 0; k < count; ++k) norms[k] = std::sqrt(cell * energy[k]);
    return norms;
  }

  for (const auto* f : u) {
    if (!f->hermitian()) throw InputError("L^p block norms with p != 2 need a real (hermitian) field");
  }
  RealVector pointwise(lattice.size());
  for (int k = 0; k < count; ++k) {
    const RealVector sym = partition.block_symbol(q0 + k, homogeneous);
    std::fill(pointwise.begin(), pointwise.end(), 0.0);
    for (const auto* f : u) {
      const RealVector block = dft_inverse(apply_real_symbol(*f, sym));
      for (std::size_t x = 0; x < block.size(); ++x) pointwise[x] += block[x] * block[x];
    }
    if (std::isinf(p)) {
      double mx = 0.0;
      for (double e2 : pointwise) mx = std::max(mx, std::sqrt(e2));
      norms[k] = mx;
    } else {
      double sum = 0.0;
      for (double e2 : pointwise) sum += std::pow(e2, 0.5 * p);
      norms[k] = std::pow(cell * sum, 1.0 / p);
    }
  }
  return norms;
}

double sequence_norm(std::span<const double> terms, double r) {
  if (!(r >= 1.0)) throw InputError("summation exponent must lie in [1, inf]");
  if (std::isinf(r)) {
    double mx = 0.0;
    for (double t : terms) mx = std::max(mx, std::abs(t));
    return mx;
  }
  double sum = 0.0;
  if (r == 1.0) {
    for (double t : terms) sum += std::abs(t);
    return sum;
  }
  for (double t : terms) sum += std::pow(std::abs(t), r);
  return std::pow(sum, 1.0 / r);
}

double besov_norm(const Components& u, const BesovSpec& spec, const DyadicPartition& partition) {
  const bool homogeneous = spec.homogeneity == Homogeneity::homogeneous;
  const auto norms = block_norms(u, spec.p, partition, homogeneous);
  const int q0 = first_block(partition, homogeneous);
  std::vector<double> terms(norms.size());
  for (std::size_t k = 0; k < norms.size(); ++k) terms[k] = std::exp2((q0 + static_cast<int>(k)) * spec.s) * norms[k];
  return sequence_norm(terms, spec.r);
}

double hybrid_norm(const Components& u, const HybridSpec& spec, const DyadicPartition& partition) {
  const auto low = block_norms(u, spec.p_low, partition, true);
  const auto high = spec.p_high == spec.p_low ? low : block_norms(u, spec.p_high, partition, true);
  const int q0 = partition.q_min();
  std::vector<double> terms(low.size());
  for (std::size_t k = 0; k < low.size(); ++k) {
    const int q = q0 + static_cast<int>(k);
    terms[k] = q <= spec.threshold ? std::exp2(q * spec.s_low) * low[k] : std::exp2(q * spec.s_high) * high[k];
  }
  return sequence_norm(terms, 1.0);
}

double chemin_lerner_norm(std::span<const SpectralField> snapshots, std::span<const double> times, double r,
                          const BesovSpec& spec, const DyadicPartition& partition) {
  if (snapshots.size() < 2) throw InputError("Chemin-Lerner norm needs at least two snapshots");
  if (snapshots.size() != times.size()) throw InputError("one time per snapshot is required");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw InputError("snapshot times must increase strictly");
  }
  if (!(r >= 1.0)) throw InputError("time exponent must lie in [1, inf]");
  for (const auto& s : snapshots) require_same_lattice(partition.lattice(), s.lattice(), "Chemin-Lerner norm");

  const bool homogeneous = spec.homogeneity == Homogeneity::homogeneous;
  std::vector<std::vector<double>> per_time;
  for (const auto& s : snapshots) per_time.push_back(block_norms(components_of(s), spec.p, partition, homogeneous));

  const int q0 = first_block(partition, homogeneous);
  const std::size_t blocks = per_time.front().size();
  std::vector<double> terms(blocks);
  for (std::size_t k = 0; k < blocks; ++k) {
    double value = 0.0;
    if (std::isinf(r)) {
      for (const auto& n : per_time) value = std::max(value, n[k]);
    } else {
      double integral = 0.0;
      for (std::size_t i = 1; i < times.size(); ++i) {
        integral += 0.5 * (times[i] - times[i - 1]) * (std::pow(per_time[i - 1][k], r) + std::pow(per_time[i][k], r));
      }
      value = std::pow(integral, 1.0 / r);
    }
    terms[k] = std::exp2((q0 + static_cast<int>(k)) * spec.s) * value;
  }
  return sequence_norm(terms, spec.r);
}

}  // namespace vdlab::lp
