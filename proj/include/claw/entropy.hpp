#ifndef CLAW_ENTROPY_HPP_
#define CLAW_ENTROPY_HPP_

#include <functional>
#include <string>
#include <vector>

#include "claw/flux.hpp"

namespace claw {

using RealMap = std::function<double(double)>;

// A convex entropy with its first two derivatives. eta_second may be empty
// for entropies that are only Lipschitz (the Kruzkov family).
struct Entropy {
  RealMap eta;
  RealMap eta_prime;
  RealMap eta_second;
};

enum class EntropyKind { smooth, kruzkov };

// An entropy pair (eta, q) anchored at k0, where
//   q(x, k) = int_{k0}^{k} eta'(w) d/dw f(x, w) dw.
struct EntropyPair {
  EntropyKind kind = EntropyKind::kruzkov;
  int n = 0;  // regularization index of the smooth family
  double k0 = 0.0;
  int dim = 1;
  Entropy entropy;
  FluxSpec::VectorMap q;
  FluxSpec::ScalarMap div_x_q;

  double eta(double k) const { return entropy.eta(k); }
  double eta_prime(double k) const { return entropy.eta_prime(k); }
  std::string label() const;
};

// eta_n(k) = sqrt((k - k0)^2 + 1/n), the smooth approximation of |k - k0|.
Entropy smooth_entropy(double k0, int n);

EntropyPair make_smooth_pair(const FluxSpec& flux, double k0, int n);
EntropyPair make_kruzkov_pair(const FluxSpec& flux, double k0);

// Entropy flux by adaptive quadrature of eta'(w) d/dw f(x, w) over [k0, k].
Point q_build_quadrature(const FluxSpec& flux, const RealMap& eta_prime, double k0, const Point& x,
                         double k);

// Entropy flux by the integration-by-parts representation
//   q = -int_{k0}^{k} eta''(w) f(x,w) dw + eta'(k) f(x,k) - eta'(k0) f(x,k0).
Point q_build_ibp(const FluxSpec& flux, const Entropy& entropy, double k0, const Point& x, double k);

// Divergence in x of the flux above, from the same representation with
// div_x f in place of f.
double div_x_q_build_ibp(const FluxSpec& flux, const Entropy& entropy, double k0, const Point& x,
                         double k);

// |q_n(x,k) - q_kruzkov(x,k)| for each n.
std::vector<double> kruzkov_limit_deficit(const FluxSpec& flux, double k0, const Point& x, double k,
                                          const std::vector<int>& n_list);

// |div_x q_n(x,k) - div_x q_kruzkov(x,k)| for each n.
std::vector<double> kruzkov_div_limit_deficit(const FluxSpec& flux, double k0, const Point& x,
                                              double k, const std::vector<int>& n_list);

// Finite-difference divergence of x -> int_B xi(w) f(x,w) dw against
// int_B xi(w) div_x f(x,w) dw, one discrepancy per step h.
std::vector<double> leibniz_check(const FluxSpec& flux, const RealMap& xi, double b_lo, double b_hi,
                                  const Point& x, const std::vector<double>& h_list);

// Finite proxy for "every entropy pair": Kruzkov pairs at n_k0 values of k0
// uniform in [-M, M], followed by smooth pairs at k0 = 0 for each n.
std::vector<EntropyPair> entropy_sweep(const FluxSpec& flux, double state_bound, int n_k0 = 9,
                                       const std::vector<int>& smooth_ns = {4, 16, 64});

std::vector<double> kruzkov_k0_sweep(double state_bound, int n_k0 = 9);

}  // namespace claw

#endif  // CLAW_ENTROPY_HPP_
