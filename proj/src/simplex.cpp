#include "lemnis/simplex.hpp"

#include "lemnis/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace lemnis {

const char* to_string(LPStatus status) {
  switch (status) {
    case LPStatus::optimal: return "optimal";
    case LPStatus::unbounded: return "unbounded";
    case LPStatus::infeasible: return "infeasible";
  }
  return "?";
}

namespace {

template <class T>
struct Arith;

template <>
struct Arith<Rational> {
  double tol = 0.0;
  bool positive(const Rational& x) const { return sgn(x) > 0; }
  bool negative(const Rational& x) const { return sgn(x) < 0; }
  bool zero(const Rational& x) const { return sgn(x) == 0; }
  bool less(const Rational& a, const Rational& b) const { return a < b; }
  bool equal(const Rational& a, const Rational& b) const { return a == b; }
};

template <>
struct Arith<double> {
  double tol = 1e-9;
  bool positive(double x) const { return x > tol; }
  bool negative(double x) const { return x < -tol; }
  bool zero(double x) const { return std::abs(x) <= tol; }
  bool less(double a, double b) const { return a < b - tol * (1.0 + std::abs(b)); }
  bool equal(double a, double b) const { return !less(a, b) && !less(b, a); }
};

template <class T>
void check_dimensions(const BasicLinearProgram<T>& lp) {
  const std::size_t n = lp.num_vars();
  if (n == 0) throw InputError("linear program needs at least one variable");
  if (lp.constraints.size() != lp.rhs.size()) {
    throw InputError("constraint matrix has " + std::to_string(lp.constraints.size()) +
                     " rows but rhs has " + std::to_string(lp.rhs.size()) + " entries");
  }
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    if (lp.constraints[i].size() != n) {
      throw InputError("constraint row " + std::to_string(i) + " has length " +
                       std::to_string(lp.constraints[i].size()) + ", expected " +
                       std::to_string(n));
    }
  }
}

// Dense tableau over columns [x+ (n) | x- (n) | slack (m) | artificial (k)] + rhs.
template <class T>
class Tableau {
public:
  Tableau(const BasicLinearProgram<T>& lp, Arith<T> arith) : arith_(arith), n_(lp.num_vars()) {
    const std::size_t m = lp.constraints.size();
    std::size_t artificial = 0;
    for (const auto& b : lp.rhs) {
      if (arith_.negative(b)) ++artificial;
    }
    first_art_ = 2 * n_ + m;
    cols_ = first_art_ + artificial;
    rows_.assign(m, std::vector<T>(cols_ + 1, T(0)));
    basis_.assign(m, 0);

    std::size_t next_art = first_art_;
    for (std::size_t i = 0; i < m; ++i) {
      auto& row = rows_[i];
      const bool flip = arith_.negative(lp.rhs[i]);
      const T sign = flip ? T(-1) : T(1);
      for (std::size_t j = 0; j < n_; ++j) {
        row[j] = sign * lp.constraints[i][j];
        row[n_ + j] = -row[j];
      }
      row[2 * n_ + i] = sign;
      row[cols_] = sign * lp.rhs[i];
      if (flip) {
        row[next_art] = T(1);
        basis_[i] = next_art++;
      } else {
        basis_[i] = 2 * n_ + i;
      }
    }
  }

  enum class Outcome { optimal, unbounded, iteration_cap };

  // Maximizes <cost, vars>; columns >= allowed_cols never enter.
  Outcome optimize(const std::vector<T>& cost, std::size_t allowed_cols, std::size_t& entering_out) {
    std::vector<T> reduced(cols_ + 1, T(0));
    for (std::size_t j = 0; j < cols_; ++j) reduced[j] = cost[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const T& cb = cost[basis_[i]];
      if (arith_.zero(cb)) continue;
      for (std::size_t j = 0; j <= cols_; ++j) reduced[j] -= cb * rows_[i][j];
    }

    const std::size_t cap = 200 * (cols_ + rows_.size() + 10);
    for (std::size_t iter = 0; iter < cap; ++iter) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (arith_.positive(reduced[j])) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return Outcome::optimal;

      std::size_t leave = rows_.size();
      T best_ratio(0);
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (!arith_.positive(rows_[i][enter])) continue;
        T ratio = rows_[i][cols_] / rows_[i][enter];
        if (leave == rows_.size() || arith_.less(ratio, best_ratio) ||
            (arith_.equal(ratio, best_ratio) && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == rows_.size()) {
        entering_out = enter;
        return Outcome::unbounded;
      }
      pivot(leave, enter, &reduced);
    }
    return Outcome::iteration_cap;
  }

  void pivot(std::size_t r, std::size_t e, std::vector<T>* reduced) {
    auto& prow = rows_[r];
    const T p = prow[e];
    for (auto& v : prow) v /= p;
    auto eliminate = [&](std::vector<T>& row) {
      const T f = row[e];
      if (arith_.zero(f)) {
        row[e] = T(0);
        return;
      }
      for (std::size_t j = 0; j <= cols_; ++j) row[j] -= f * prow[j];
      row[e] = T(0);
    };
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i != r) eliminate(rows_[i]);
    }
    if (reduced) eliminate(*reduced);
    basis_[r] = e;
  }

  // After phase 1: pivot zero-level artificials out, dropping redundant rows.
  void expel_artificials() {
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < first_art_) {
        ++i;
        continue;
      }
      std::size_t col = first_art_;
      for (std::size_t j = 0; j < first_art_; ++j) {
        if (!arith_.zero(rows_[i][j])) {
          col = j;
          break;
        }
      }
      if (col == first_art_) {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      pivot(i, col, nullptr);
      ++i;
    }
  }

  T objective_value(const std::vector<T>& cost) const {
    T v(0);
    for (std::size_t i = 0; i < rows_.size(); ++i) v += cost[basis_[i]] * rows_[i][cols_];
    return v;
  }

  std::vector<T> primal() const {
    std::vector<T> vars(cols_, T(0));
    for (std::size_t i = 0; i < rows_.size(); ++i) vars[basis_[i]] = rows_[i][cols_];
    std::vector<T> x(n_);
    for (std::size_t j = 0; j < n_; ++j) x[j] = vars[j] - vars[n_ + j];
    return x;
  }

  std::vector<T> ray(std::size_t enter) const {
    std::vector<T> dir(cols_, T(0));
    dir[enter] = T(1);
    for (std::size_t i = 0; i < rows_.size(); ++i) dir[basis_[i]] = -rows_[i][enter];
    std::vector<T> x(n_);
    for (std::size_t j = 0; j < n_; ++j) x[j] = dir[j] - dir[n_ + j];
    return x;
  }

  std::size_t cols() const { return cols_; }
  std::size_t first_artificial() const { return first_art_; }
  std::size_t n() const { return n_; }

private:
  Arith<T> arith_;
  std::size_t n_;
  std::size_t first_art_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<T>> rows_;
  std::vector<std::size_t> basis_;
};

template <class T>
BasicLPResult<T> solve(const BasicLinearProgram<T>& lp, Arith<T> arith) {
  check_dimensions(lp);
  Tableau<T> tab(lp, arith);
  BasicLPResult<T> result;
  std::size_t enter = 0;

  if (tab.first_artificial() < tab.cols()) {
    std::vector<T> phase1(tab.cols(), T(0));
    for (std::size_t j = tab.first_artificial(); j < tab.cols(); ++j) phase1[j] = T(-1);
    auto outcome = tab.optimize(phase1, tab.cols(), enter);
    if (outcome == Tableau<T>::Outcome::iteration_cap) {
      result.numerically_suspect = true;
      return result;
    }
    if (arith.negative(tab.objective_value(phase1))) {
      result.status = LPStatus::infeasible;
      return result;
    }
    tab.expel_artificials();
  }

  const std::size_t n = tab.n();
  std::vector<T> cost(tab.cols(), T(0));
  for (std::size_t j = 0; j < n; ++j) {
    cost[j] = lp.objective[j];
    cost[n + j] = -lp.objective[j];
  }
  auto outcome = tab.optimize(cost, tab.first_artificial(), enter);
  if (outcome == Tableau<T>::Outcome::iteration_cap) {
    result.numerically_suspect = true;
    result.status = LPStatus::infeasible;
    return result;
  }
  if (outcome == Tableau<T>::Outcome::unbounded) {
    result.status = LPStatus::unbounded;
    result.ray = tab.ray(enter);
    return result;
  }
  result.status = LPStatus::optimal;
  auto x = tab.primal();
  T value(0);
  for (std::size_t j = 0; j < n; ++j) value += lp.objective[j] * x[j];
  result.value = value;
  result.optimizer = std::move(x);
  return result;
}

FloatLinearProgram to_float(const LinearProgram& lp) {
  FloatLinearProgram f;
  f.objective = to_doubles(lp.objective);
  f.rhs = to_doubles(lp.rhs);
  for (const auto& row : lp.constraints) f.constraints.push_back(to_doubles(row));
  return f;
}

}  // namespace

LPResult solve_lp_exact(const LinearProgram& lp) { return solve(lp, Arith<Rational>{}); }

FloatLPResult solve_lp_float(const FloatLinearProgram& lp, double tol) {
  auto result = solve(lp, Arith<double>{tol});
  if (result.status == LPStatus::optimal) {
    const auto& x = *result.optimizer;
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
      double lhs = 0.0;
      double scale = std::abs(lp.rhs[i]);
      for (std::size_t j = 0; j < x.size(); ++j) {
        lhs += lp.constraints[i][j] * x[j];
        scale += std::abs(lp.constraints[i][j] * x[j]);
      }
      if (!std::isfinite(lhs) || lhs - lp.rhs[i] > 1e3 * tol * (1.0 + scale)) {
        result.numerically_suspect = true;
      }
    }
  }
  return result;
}

FloatLPResult solve_lp_float(const LinearProgram& lp, double tol) {
  check_dimensions(lp);
  return solve_lp_float(to_float(lp), tol);
}

bool cone_membership(const std::vector<RationalVector>& generators, const RationalVector& target) {
  const std::size_t n = target.size();
  for (const auto& g : generators) {
    if (g.size() != n) {
      throw InputError("cone generator has length " + std::to_string(g.size()) + ", target has " +
                       std::to_string(n));
    }
  }
  if (generators.empty()) {
    for (const auto& t : target) {
      if (sgn(t) != 0) return false;
    }
    return true;
  }

  // Phase-1 feasibility of  G^T y = target,  y >= 0.
  const std::size_t k = generators.size();
  LinearProgram lp;
  lp.objective.assign(k, Rational(0));
  for (std::size_t l = 0; l < n; ++l) {
    RationalVector row(k), neg(k);
    for (std::size_t i = 0; i < k; ++i) {
      row[i] = generators[i][l];
      neg[i] = -generators[i][l];
    }
    lp.constraints.push_back(std::move(row));
    lp.rhs.push_back(target[l]);
    lp.constraints.push_back(std::move(neg));
    lp.rhs.push_back(-target[l]);
  }
  for (std::size_t i = 0; i < k; ++i) {
    RationalVector row(k, Rational(0));
    row[i] = -1;
    lp.constraints.push_back(std::move(row));
    lp.rhs.push_back(0);
  }
  return solve_lp_exact(lp).status == LPStatus::optimal;
}

}  // namespace lemnis
