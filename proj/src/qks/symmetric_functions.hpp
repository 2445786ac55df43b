#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qks/errors.hpp"
#include "qks/scalar.hpp"

namespace qks {

template <class C>
C elementary_symmetric(int l, std::span<const C> xs) {
    const int k = static_cast<int>(xs.size());
    if (l < 0 || l > k) return C(0);
    // e_l via the stable Newton-girard-free triangle: prod (1 + t x_i)
    std::vector<C> e(static_cast<std::size_t>(l) + 1, C(0));
    e[0] = C(1);
    for (int i = 0; i < k; ++i)
        for (int j = std::min(l, i + 1); j >= 1; --j) e[j] += xs[i] * e[j - 1];
    return e[l];
}

template <class C>
C power_sum(int m, std::span<const C> xs) {
    C acc(0);
    for (const auto& x : xs) acc += int_pow(x, m);
    return acc;
}

/// A symmetric Laurent polynomial presented as evaluable data.  Evaluation
/// is arity-polymorphic: the same spec can be fed k = 0..n arguments.
template <class C>
class SymmetricFunctionSpec {
  public:
    using Evaluator = std::function<C(std::span<const C>)>;

    static SymmetricFunctionSpec elementary(int l) {
        SymmetricFunctionSpec s;
        s.name_ = "e" + std::to_string(l);
        s.eval_ = [l](std::span<const C> xs) { return elementary_symmetric(l, xs); };
        return s;
    }
    static SymmetricFunctionSpec power_sum_fn(int m) {
        SymmetricFunctionSpec s;
        s.name_ = "p" + std::to_string(m);
        s.eval_ = [m](std::span<const C> xs) { return power_sum(m, xs); };
        return s;
    }
    /// prod_i (1 + w x_i)
    static SymmetricFunctionSpec weighted_exterior(const C& weight) {
        SymmetricFunctionSpec s;
        s.name_ = "wedge";
        s.eval_ = [weight](std::span<const C> xs) {
            C acc(1);
            for (const auto& x : xs) acc *= C(1) + weight * x;
            return acc;
        };
        return s;
    }
    static SymmetricFunctionSpec custom(std::string name, Evaluator f) {
        SymmetricFunctionSpec s;
        s.name_ = std::move(name);
        s.eval_ = std::move(f);
        return s;
    }

    C operator()(std::span<const C> xs) const { return eval_(xs); }
    C operator()(const std::vector<C>& xs) const { return eval_(std::span<const C>(xs)); }
    const std::string& name() const { return name_; }

  private:
    std::string name_ = "1";
    Evaluator eval_ = [](std::span<const C>) { return C(1); };
};

}  // namespace qks
