#include "advcsp/reduction.hpp"

#include <string>

#include "advcsp/errors.hpp"

namespace advcsp {

FourLinLift three_to_four_lin(const KLinInstance& phi, std::size_t t) {
  if (phi.arity() != 3) throw InputError("reduction needs a 3-Lin instance");
  if (t == 0) throw InputError("t must be at least 1");
  const std::size_t n = phi.num_vars();
  const std::size_t m = phi.num_constraints();
  FourLinLift out{KLinInstance(4, n + t), n, t};
  out.instance.reserve(m * t);
  std::uint32_t vars[4];
  for (std::size_t r = 0; r < t; ++r) {
    vars[3] = static_cast<std::uint32_t>(n + r);
    for (std::size_t c = 0; c < m; ++c) {
      const auto v = phi.vars(c);
      vars[0] = v[0];
      vars[1] = v[1];
      vars[2] = v[2];
      out.instance.add(std::span<const std::uint32_t>(vars, 4), phi.rhs(c), phi.weight(c));
    }
  }
  return out;
}

Assignment lift_assignment(const Assignment& sigma, std::size_t t) {
  if (t == 0) throw InputError("t must be at least 1");
  std::vector<Spin> out(sigma.values().begin(), sigma.values().end());
  out.resize(sigma.size() + t, 1);
  return Assignment(std::move(out));
}

Projection project_assignment(const Assignment& sigma_prime, const KLinInstance& phi) {
  const std::size_t n = phi.num_vars();
  if (sigma_prime.size() <= n) {
    throw InputError("lifted assignment has length " + std::to_string(sigma_prime.size()) + ", expected more than " +
                     std::to_string(n));
  }
  const std::size_t t = sigma_prime.size() - n;
  Projection best;
  std::vector<Spin> x(n);
  for (std::size_t r = 0; r < t; ++r) {
    const Spin y = sigma_prime[n + r];
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<Spin>(sigma_prime[i] * y);
    Assignment cand(x);
    const double w = evaluate(phi, cand).weight;
    if (r == 0 || w > best.weight) {
      best.x = std::move(cand);
      best.copy = r;
      best.weight = w;
    }
  }
  return best;
}

}  // namespace advcsp
