#include "advcsp/advice.hpp"

#include <cmath>
#include <string>

#include "advcsp/errors.hpp"
#include "advcsp/rng.hpp"

namespace advcsp {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw InputError("epsilon must lie in (0, 1], got " + std::to_string(epsilon));
  }
}

void validate(const SubsetAdvice& advice) {
  check_epsilon(advice.epsilon);
  if (advice.indices.size() != advice.values.size()) throw InputError("subset advice needs one value per index");
  for (std::size_t r = 0; r < advice.indices.size(); ++r) {
    if (advice.indices[r] >= advice.num_vars) throw InputError("subset advice index out of range");
    if (r > 0 && advice.indices[r] <= advice.indices[r - 1]) {
      throw InputError("subset advice indices must be sorted and distinct");
    }
    if (advice.values[r] != 1 && advice.values[r] != -1) throw InputError("subset advice values must be +1 or -1");
  }
}

LabelAdvice gen_label_advice(const Assignment& x_star, double epsilon, std::uint64_t seed) {
  check_epsilon(epsilon);
  CounterRng rng(seed);
  const double agree = (1.0 + epsilon) / 2.0;
  std::vector<Spin> out(x_star.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = rng.bernoulli(agree) ? x_star[i] : static_cast<Spin>(-x_star[i]);
  }
  return LabelAdvice{Assignment(std::move(out)), epsilon};
}

SubsetAdvice gen_subset_advice(const Assignment& x_star, double epsilon, std::uint64_t seed) {
  check_epsilon(epsilon);
  CounterRng rng(seed);
  SubsetAdvice out;
  out.num_vars = x_star.size();
  out.epsilon = epsilon;
  for (std::size_t i = 0; i < x_star.size(); ++i) {
    if (rng.bernoulli(epsilon)) {
      out.indices.push_back(static_cast<std::uint32_t>(i));
      out.values.push_back(x_star[i]);
    }
  }
  return out;
}

LabelAdvice subset_to_label(const SubsetAdvice& advice, std::uint64_t seed) {
  validate(advice);
  CounterRng rng(seed);
  std::vector<Spin> out(advice.num_vars);
  for (auto& v : out) v = static_cast<Spin>(rng.sign());
  for (std::size_t r = 0; r < advice.indices.size(); ++r) out[advice.indices[r]] = advice.values[r];
  return LabelAdvice{Assignment(std::move(out)), advice.epsilon};
}

double empirical_correlation(const LabelAdvice& advice, const Assignment& x_star) {
  if (advice.values.size() != x_star.size()) throw InputError("advice and ground truth differ in length");
  if (x_star.size() == 0) return 0.0;
  long long s = 0;
  for (std::size_t i = 0; i < x_star.size(); ++i) s += advice.values[i] * x_star[i];
  return static_cast<double>(s) / static_cast<double>(x_star.size());
}

}  // namespace advcsp
