#include "claw/entropy.hpp"

#include <cmath>
#include <sstream>

#include "claw/quadrature.hpp"

namespace claw {

std::string EntropyPair::label() const {
  std::ostringstream os;
  if (kind == EntropyKind::kruzkov)
    os << "kruzkov(k0=" << k0 << ")";
  else
    os << "smooth(n=" << n << ",k0=" << k0 << ")";
  return os.str();
}

Entropy smooth_entropy(double k0, int n) {
  const double inv_n = 1.0 / n;
  Entropy e;
  e.eta = [=](double k) { return std::sqrt((k - k0) * (k - k0) + inv_n); };
  e.eta_prime = [=](double k) { return (k - k0) / std::sqrt((k - k0) * (k - k0) + inv_n); };
  e.eta_second = [=](double k) {
    const double s = (k - k0) * (k - k0) + inv_n;
    return inv_n / (s * std::sqrt(s));
  };
  return e;
}

Point q_build_quadrature(const FluxSpec& flux, const RealMap& eta_prime, double k0, const Point& x,
                         double k) {
  Point out{};
  if (k == k0) return out;
  for (int i = 0; i < flux.dim; ++i) {
    out[i] = quad::integrate([&](double w) { return eta_prime(w) * flux.dk(x, w)[i]; }, k0, k);
  }
  return out;
}

Point q_build_ibp(const FluxSpec& flux, const Entropy& entropy, double k0, const Point& x, double k) {
  const Point fk = flux.eval(x, k);
  const Point f0 = flux.eval(x, k0);
  const double ek = entropy.eta_prime(k);
  const double e0 = entropy.eta_prime(k0);
  Point out{};
  for (int i = 0; i < flux.dim; ++i) {
    const double bulk =
        k == k0 ? 0.0
                : quad::integrate([&](double w) { return entropy.eta_second(w) * flux.eval(x, w)[i]; },
                                  k0, k);
    out[i] = -bulk + ek * fk[i] - e0 * f0[i];
  }
  return out;
}

double div_x_q_build_ibp(const FluxSpec& flux, const Entropy& entropy, double k0, const Point& x,
                         double k) {
  if (flux.homogeneous || k == k0) return 0.0;
  const Point xs = avoid_singular(flux, x);
  const double bulk =
      quad::integrate([&](double w) { return entropy.eta_second(w) * flux.div_x(xs, w); }, k0, k);
  return -bulk + entropy.eta_prime(k) * flux.div_x(xs, k) - entropy.eta_prime(k0) * flux.div_x(xs, k0);
}

EntropyPair make_smooth_pair(const FluxSpec& flux, double k0, int n) {
  EntropyPair p;
  p.kind = EntropyKind::smooth;
  p.n = n;
  p.k0 = k0;
  p.dim = flux.dim;
  p.entropy = smooth_entropy(k0, n);
  const RealMap eta_prime = p.entropy.eta_prime;
  const Entropy entropy = p.entropy;
  p.q = [flux, eta_prime, k0](const Point& x, double k) {
    return q_build_quadrature(flux, eta_prime, k0, x, k);
  };
  p.div_x_q = [flux, entropy, k0](const Point& x, double k) {
    return div_x_q_build_ibp(flux, entropy, k0, x, k);
  };
  return p;
}

EntropyPair make_kruzkov_pair(const FluxSpec& flux, double k0) {
  EntropyPair p;
  p.kind = EntropyKind::kruzkov;
  p.k0 = k0;
  p.dim = flux.dim;
  p.entropy.eta = [k0](double k) { return std::abs(k - k0); };
  p.entropy.eta_prime = [k0](double k) { return sign(k - k0); };
  p.q = [flux, k0](const Point& x, double k) {
    const double s = sign(k - k0);
    const Point fk = flux.eval(x, k);
    const Point f0 = flux.eval(x, k0);
    return Point{s * (fk[0] - f0[0]), s * (fk[1] - f0[1])};
  };
  p.div_x_q = [flux, k0](const Point& x, double k) {
    if (flux.homogeneous) return 0.0;
    const Point xs = avoid_singular(flux, x);
    return sign(k - k0) * (flux.div_x(xs, k) - flux.div_x(xs, k0));
  };
  return p;
}

std::vector<double> kruzkov_limit_deficit(const FluxSpec& flux, double k0, const Point& x, double k,
                                          const std::vector<int>& n_list) {
  const Point exact = make_kruzkov_pair(flux, k0).q(x, k);
  std::vector<double> out;
  for (int n : n_list) {
    const Point qn = q_build_quadrature(flux, smooth_entropy(k0, n).eta_prime, k0, x, k);
    out.push_back(norm(qn - exact));
  }
  return out;
}

std::vector<double> kruzkov_div_limit_deficit(const FluxSpec& flux, double k0, const Point& x,
                                              double k, const std::vector<int>& n_list) {
  const double exact = make_kruzkov_pair(flux, k0).div_x_q(x, k);
  std::vector<double> out;
  for (int n : n_list) out.push_back(std::abs(div_x_q_build_ibp(flux, smooth_entropy(k0, n), k0, x, k) - exact));
  return out;
}

std::vector<double> leibniz_check(const FluxSpec& flux, const RealMap& xi, double b_lo, double b_hi,
                                  const Point& x, const std::vector<double>& h_list) {
  auto weighted = [&](const Point& at, int i) {
    return quad::integrate([&](double w) { return xi(w) * flux.eval(at, w)[i]; }, b_lo, b_hi);
  };
  const Point xs = avoid_singular(flux, x);
  const double exact = quad::integrate([&](double w) { return xi(w) * flux.div_x(xs, w); }, b_lo, b_hi);
  std::vector<double> out;
  for (double h : h_list) {
    double fd = 0.0;
    for (int i = 0; i < flux.dim; ++i) {
      const Point e = unit(i);
      fd += (weighted(x + h * e, i) - weighted(x - h * e, i)) / (2.0 * h);
    }
    out.push_back(std::abs(fd - exact));
  }
  return out;
}

std::vector<double> kruzkov_k0_sweep(double state_bound, int n_k0) {
  std::vector<double> ks;
  if (n_k0 == 1) return {0.0};
  for (int i = 0; i < n_k0; ++i) ks.push_back(-state_bound + 2.0 * state_bound * i / (n_k0 - 1));
  return ks;
}

std::vector<EntropyPair> entropy_sweep(const FluxSpec& flux, double state_bound, int n_k0,
                                       const std::vector<int>& smooth_ns) {
  std::vector<EntropyPair> pairs;
  for (double k0 : kruzkov_k0_sweep(state_bound, n_k0)) pairs.push_back(make_kruzkov_pair(flux, k0));
  for (int n : smooth_ns) pairs.push_back(make_smooth_pair(flux, 0.0, n));
  return pairs;
}

}  // namespace claw
