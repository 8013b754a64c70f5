#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "filtlab/errors.hpp"
#include "filtlab/matrix.hpp"
#include "filtlab/scalar.hpp"
#include "filtlab/transport.hpp"

namespace filtlab {

enum class ModelKind { Explicit, Stationary, Bratteli };

inline const char* model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Explicit: return "explicit";
    case ModelKind::Stationary: return "stationary";
    case ModelKind::Bratteli: return "bratteli";
  }
  return "?";
}

// One Bratteli edge bundle: `mult` parallel edges from state `from` at level n
// to state `to` at level n+1.
struct BratteliEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  long mult = 1;
};

// Inhomogeneous finite-state Markov chain carrying the tail filtration:
// level state spaces, row-stochastic forward kernels P_n (level n -> n+1)
// and the level-0 distribution. Stationary models store a single kernel and
// answer queries at any level up to `horizon`, so unbounded horizons cost
// O(1) memory. Models are immutable after build; every derived quantity is
// a pure function of (model, arguments).
template <class T>
class MarkovModel {
 public:
  ModelKind kind() const { return kind_; }
  std::size_t horizon() const { return horizon_; }

  std::size_t state_count(std::size_t n) const {
    check_level(n);
    if (kind_ == ModelKind::Stationary) return counts_[0];
    return counts_[n];
  }

  const Matrix<T>& kernel(std::size_t n) const {
    if (n + 1 > horizon_)
      throw Error(ErrorCode::HorizonExceeded, "kernel level " + std::to_string(n));
    if (kind_ == ModelKind::Stationary) return kernels_[0];
    return kernels_[n];
  }

  const std::vector<T>& initial() const { return initial_; }

  bool has_multiplicities() const { return !mults_.empty(); }
  // parallel-edge count from level-n state c to level-(n+1) state v; 1 for
  // plain chains wherever the kernel entry is positive
  long multiplicity(std::size_t n, std::size_t c, std::size_t v) const {
    if (mults_.empty()) return kernel(n)(c, v) > T(0) ? 1 : 0;
    return mults_[n](c, v);
  }

  static MarkovModel make_explicit(std::vector<Matrix<T>> kernels, std::vector<T> initial,
                                   std::vector<Matrix<long>> mults = {});
  static MarkovModel make_stationary(Matrix<T> kernel, std::vector<T> initial,
                                     std::size_t horizon);
  // Central measure: cotransitions from path counts; boundary weights at the
  // top level default to the uniform measure on all root-to-top paths.
  static MarkovModel make_bratteli(const std::vector<std::size_t>& level_sizes,
                                   const std::vector<std::vector<BratteliEdge>>& edges,
                                   const std::optional<std::vector<T>>& boundary = std::nullopt);
  // Measure given directly by cotransition kernels plus the top-level law.
  static MarkovModel make_bratteli_cotransitions(
      const std::vector<std::size_t>& level_sizes,
      const std::vector<std::vector<BratteliEdge>>& edges,
      const std::vector<Matrix<T>>& cotransitions, const std::vector<T>& top);

 private:
  MarkovModel() = default;

  // shared bratteli assembly: marginals backward from the top law, forward
  // kernels by Bayes inversion, then pruning via make_explicit
  static MarkovModel assemble_bratteli(const std::vector<std::size_t>& level_sizes,
                                       std::vector<Matrix<long>> mult,
                                       const std::vector<Matrix<T>>& cot,
                                       const std::vector<T>& top);

  void check_level(std::size_t n) const {
    if (n > horizon_)
      throw Error(ErrorCode::HorizonExceeded,
                  "level " + std::to_string(n) + " beyond horizon " + std::to_string(horizon_));
  }

  ModelKind kind_ = ModelKind::Explicit;
  std::size_t horizon_ = 0;            // largest level index answerable
  std::vector<std::size_t> counts_;    // per level (single entry if stationary)
  std::vector<Matrix<T>> kernels_;     // per level (single entry if stationary)
  std::vector<T> initial_;
  std::vector<Matrix<long>> mults_;    // bratteli only

  template <class U>
  friend MarkovModel<U> telescope(const MarkovModel<U>& m, const std::vector<std::size_t>&);
  template <class U>
  friend MarkovModel<U> rebase(const MarkovModel<U>& m, std::size_t);
};

// Distribution of the chain at one level.
template <class T>
struct LevelMeasure {
  std::size_t level = 0;
  std::vector<T> weights;
};

// Conditional law of the level-(n-1) state given the level-n state:
// Q_n(a,c) = mu_{n-1}(c) P_{n-1}(c,a) / mu_n(a).
template <class T>
struct CotransitionKernel {
  std::size_t level = 0;  // n >= 1
  Matrix<T> rows;         // state_count(n) x state_count(n-1)
  std::vector<char> supported;

  const Matrix<T>& matrix() const { return rows; }
  std::vector<T> row(std::size_t a) const {
    if (a >= rows.rows() || !supported[a])
      throw Error(ErrorCode::ZeroMassState,
                  "state " + std::to_string(a) + " not in support at level " +
                      std::to_string(level));
    return rows.row(a);
  }
};

namespace detail {

template <class T>
void validate_stochastic(const Matrix<T>& m, std::size_t level) {
  const T tol = scalar_traits<T>::tolerance();
  if (m.rows() == 0 || m.cols() == 0)
    throw Error(ErrorCode::EmptyLevel, "kernel at level " + std::to_string(level) + " is empty");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    T s(0);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) < -tol)
        throw Error(ErrorCode::NonStochasticRow,
                    "negative entry in row " + std::to_string(i) + " of kernel " +
                        std::to_string(level));
      s += m(i, j);
    }
    T dev = s - T(1);
    if (abs_val(dev) > tol)
      throw Error(ErrorCode::NonStochasticRow,
                  "row " + std::to_string(i) + " of kernel " + std::to_string(level) +
                      " sums to " + scalar_str(s));
  }
}

template <class T>
void validate_distribution(const std::vector<T>& v, const char* what) {
  const T tol = scalar_traits<T>::tolerance();
  if (v.empty()) throw Error(ErrorCode::EmptyLevel, std::string(what) + " is empty");
  T s(0);
  for (const T& x : v) {
    if (x < -tol)
      throw Error(ErrorCode::NotNormalized, std::string(what) + " has a negative entry");
    s += x;
  }
  T dev = s - T(1);
  if (abs_val(dev) > tol)
    throw Error(ErrorCode::NotNormalized, std::string(what) + " sums to " + scalar_str(s));
}

}  // namespace detail

template <class T>
LevelMeasure<T> level_marginal(const MarkovModel<T>& model, std::size_t n) {
  if (n > model.horizon())
    throw Error(ErrorCode::HorizonExceeded, "marginal at level " + std::to_string(n));
  std::vector<T> mu = model.initial();
  for (std::size_t k = 0; k < n; ++k) mu = vec_mat(mu, model.kernel(k));
  return LevelMeasure<T>{n, std::move(mu)};
}

template <class T>
CotransitionKernel<T> cotransitions(const MarkovModel<T>& model, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::LevelMissing, "cotransitions need a predecessor level");
  if (n > model.horizon())
    throw Error(ErrorCode::HorizonExceeded, "cotransitions at level " + std::to_string(n));
  const std::vector<T> prev = level_marginal(model, n - 1).weights;
  const Matrix<T>& p = model.kernel(n - 1);
  std::vector<T> cur = vec_mat(prev, p);

  CotransitionKernel<T> q;
  q.level = n;
  q.rows = Matrix<T>(cur.size(), prev.size(), T(0));
  q.supported.assign(cur.size(), 0);
  for (std::size_t a = 0; a < cur.size(); ++a) {
    if (cur[a] == T(0)) continue;
    q.supported[a] = 1;
    for (std::size_t c = 0; c < prev.size(); ++c) {
      if (prev[c] == T(0) || p(c, a) == T(0)) continue;
      q.rows(a, c) = prev[c] * p(c, a) / cur[a];
    }
  }
  return q;
}

// --- construction ------------------------------------------------------------

template <class T>
MarkovModel<T> MarkovModel<T>::make_explicit(std::vector<Matrix<T>> kernels,
                                             std::vector<T> initial,
                                             std::vector<Matrix<long>> mults) {
  detail::validate_distribution(initial, "initial distribution");
  std::size_t states = initial.size();
  for (std::size_t n = 0; n < kernels.size(); ++n) {
    detail::validate_stochastic(kernels[n], n);
    if (kernels[n].rows() != states)
      throw Error(ErrorCode::ShapeMismatch,
                  "kernel " + std::to_string(n) + " row count mismatch");
    states = kernels[n].cols();
  }
  if (!mults.empty() && mults.size() != kernels.size())
    throw Error(ErrorCode::ShapeMismatch, "multiplicity/kernel level mismatch");

  MarkovModel m;
  m.kind_ = ModelKind::Explicit;
  m.horizon_ = kernels.size();
  m.initial_ = std::move(initial);
  m.kernels_ = std::move(kernels);
  m.mults_ = std::move(mults);
  m.counts_.resize(m.horizon_ + 1);
  m.counts_[0] = m.initial_.size();
  for (std::size_t n = 0; n < m.horizon_; ++n) m.counts_[n + 1] = m.kernels_[n].cols();

  // prune states that carry no mass; conditional structure is undefined there
  std::vector<std::vector<std::size_t>> keep(m.horizon_ + 1);
  std::vector<T> mu = m.initial_;
  bool all_full = true;
  for (std::size_t n = 0;; ++n) {
    for (std::size_t a = 0; a < mu.size(); ++a)
      if (mu[a] > T(0)) keep[n].push_back(a);
    if (keep[n].empty()) throw Error(ErrorCode::EmptyLevel, "no mass at level " + std::to_string(n));
    if (keep[n].size() != mu.size()) all_full = false;
    if (n == m.horizon_) break;
    mu = vec_mat(mu, m.kernels_[n]);
  }
  if (all_full) return m;

  MarkovModel out;
  out.kind_ = ModelKind::Explicit;
  out.horizon_ = m.horizon_;
  out.counts_.resize(m.horizon_ + 1);
  out.initial_.reserve(keep[0].size());
  for (std::size_t a : keep[0]) out.initial_.push_back(m.initial_[a]);
  for (std::size_t n = 0; n <= m.horizon_; ++n) out.counts_[n] = keep[n].size();
  out.kernels_.reserve(m.horizon_);
  for (std::size_t n = 0; n < m.horizon_; ++n) {
    Matrix<T> k(keep[n].size(), keep[n + 1].size());
    for (std::size_t i = 0; i < keep[n].size(); ++i)
      for (std::size_t j = 0; j < keep[n + 1].size(); ++j)
        k(i, j) = m.kernels_[n](keep[n][i], keep[n + 1][j]);
    out.kernels_.push_back(std::move(k));
  }
  if (!m.mults_.empty()) {
    out.mults_.reserve(m.horizon_);
    for (std::size_t n = 0; n < m.horizon_; ++n) {
      Matrix<long> k(keep[n].size(), keep[n + 1].size());
      for (std::size_t i = 0; i < keep[n].size(); ++i)
        for (std::size_t j = 0; j < keep[n + 1].size(); ++j)
          k(i, j) = m.mults_[n](keep[n][i], keep[n + 1][j]);
      out.mults_.push_back(std::move(k));
    }
  }
  return out;
}

template <class T>
MarkovModel<T> MarkovModel<T>::make_stationary(Matrix<T> kernel, std::vector<T> initial,
                                               std::size_t horizon) {
  detail::validate_stochastic(kernel, 0);
  detail::validate_distribution(initial, "initial distribution");
  if (kernel.rows() != kernel.cols())
    throw Error(ErrorCode::ShapeMismatch, "stationary kernel must be square");
  if (kernel.rows() != initial.size())
    throw Error(ErrorCode::ShapeMismatch, "initial length does not match kernel");
  MarkovModel m;
  m.kind_ = ModelKind::Stationary;
  m.horizon_ = horizon;
  m.counts_ = {kernel.rows()};
  m.kernels_.push_back(std::move(kernel));
  m.initial_ = std::move(initial);
  return m;
}

template <class T>
MarkovModel<T> MarkovModel<T>::make_bratteli(
    const std::vector<std::size_t>& level_sizes,
    const std::vector<std::vector<BratteliEdge>>& edges,
    const std::optional<std::vector<T>>& boundary) {
  if (level_sizes.empty()) throw Error(ErrorCode::EmptyLevel, "bratteli diagram has no levels");
  if (edges.size() + 1 != level_sizes.size())
    throw Error(ErrorCode::ShapeMismatch, "edge level count must be level count - 1");
  const std::size_t depth = edges.size();
  for (std::size_t s : level_sizes)
    if (s == 0) throw Error(ErrorCode::EmptyLevel, "bratteli level with no vertices");

  std::vector<Matrix<long>> mult(depth);
  for (std::size_t n = 0; n < depth; ++n) {
    mult[n] = Matrix<long>(level_sizes[n], level_sizes[n + 1], 0);
    for (const BratteliEdge& e : edges[n]) {
      if (e.from >= level_sizes[n] || e.to >= level_sizes[n + 1] || e.mult <= 0)
        throw Error(ErrorCode::ShapeMismatch, "bad bratteli edge at level " + std::to_string(n));
      mult[n](e.from, e.to) += e.mult;
    }
  }

  // path counts from level 0 (dimensions); exact integers carried in T
  std::vector<std::vector<T>> dim(depth + 1);
  dim[0].assign(level_sizes[0], T(1));
  for (std::size_t n = 0; n < depth; ++n) {
    dim[n + 1].assign(level_sizes[n + 1], T(0));
    for (std::size_t c = 0; c < level_sizes[n]; ++c)
      for (std::size_t v = 0; v < level_sizes[n + 1]; ++v)
        if (mult[n](c, v) > 0) dim[n + 1][v] += T(mult[n](c, v)) * dim[n][c];
    for (std::size_t v = 0; v < level_sizes[n + 1]; ++v)
      if (dim[n + 1][v] == T(0))
        throw Error(ErrorCode::EmptyLevel,
                    "bratteli vertex unreachable from level 0 at level " + std::to_string(n + 1));
  }

  // top-level law: given boundary, or uniform over all root-to-top paths
  std::vector<T> top;
  if (boundary.has_value()) {
    top = *boundary;
    if (top.size() != level_sizes[depth])
      throw Error(ErrorCode::ShapeMismatch, "boundary weight length mismatch");
    detail::validate_distribution(top, "boundary weights");
  } else {
    T total(0);
    for (const T& d : dim[depth]) total += d;
    top.reserve(level_sizes[depth]);
    for (const T& d : dim[depth]) top.push_back(d / total);
  }

  // cotransitions from path counts, then marginals backward and kernels forward
  std::vector<Matrix<T>> cot(depth);
  for (std::size_t n = 0; n < depth; ++n) {
    cot[n] = Matrix<T>(level_sizes[n + 1], level_sizes[n], T(0));
    for (std::size_t v = 0; v < level_sizes[n + 1]; ++v)
      for (std::size_t c = 0; c < level_sizes[n]; ++c)
        if (mult[n](c, v) > 0) cot[n](v, c) = T(mult[n](c, v)) * dim[n][c] / dim[n + 1][v];
  }
  return assemble_bratteli(level_sizes, std::move(mult), cot, top);
}

template <class T>
MarkovModel<T> MarkovModel<T>::make_bratteli_cotransitions(
    const std::vector<std::size_t>& level_sizes,
    const std::vector<std::vector<BratteliEdge>>& edges,
    const std::vector<Matrix<T>>& cotransitions, const std::vector<T>& top) {
  if (level_sizes.empty()) throw Error(ErrorCode::EmptyLevel, "bratteli diagram has no levels");
  if (edges.size() + 1 != level_sizes.size())
    throw Error(ErrorCode::ShapeMismatch, "edge level count must be level count - 1");
  const std::size_t depth = edges.size();
  if (cotransitions.size() != depth)
    throw Error(ErrorCode::ShapeMismatch, "one cotransition kernel per edge level required");
  std::vector<Matrix<long>> mult(depth);
  for (std::size_t n = 0; n < depth; ++n) {
    mult[n] = Matrix<long>(level_sizes[n], level_sizes[n + 1], 0);
    for (const BratteliEdge& e : edges[n]) {
      if (e.from >= level_sizes[n] || e.to >= level_sizes[n + 1] || e.mult <= 0)
        throw Error(ErrorCode::ShapeMismatch, "bad bratteli edge at level " + std::to_string(n));
      mult[n](e.from, e.to) += e.mult;
    }
    const Matrix<T>& q = cotransitions[n];
    if (q.rows() != level_sizes[n + 1] || q.cols() != level_sizes[n])
      throw Error(ErrorCode::ShapeMismatch, "cotransition kernel shape at level " + std::to_string(n));
    detail::validate_stochastic(q, n);
    for (std::size_t v = 0; v < q.rows(); ++v)
      for (std::size_t c = 0; c < q.cols(); ++c)
        if (q(v, c) > T(0) && mult[n](c, v) == 0)
          throw Error(ErrorCode::ShapeMismatch,
                      "cotransition mass on a missing edge at level " + std::to_string(n));
  }
  std::vector<T> t = top;
  detail::validate_distribution(t, "top-level law");
  return assemble_bratteli(level_sizes, std::move(mult), cotransitions, t);
}

template <class T>
MarkovModel<T> MarkovModel<T>::assemble_bratteli(const std::vector<std::size_t>& level_sizes,
                                                 std::vector<Matrix<long>> mult,
                                                 const std::vector<Matrix<T>>& cot,
                                                 const std::vector<T>& top) {
  const std::size_t depth = mult.size();
  std::vector<std::vector<T>> mu(depth + 1);
  mu[depth] = top;
  for (std::size_t n = depth; n-- > 0;) {
    mu[n].assign(level_sizes[n], T(0));
    for (std::size_t v = 0; v < level_sizes[n + 1]; ++v) {
      if (mu[n + 1][v] == T(0)) continue;
      for (std::size_t c = 0; c < level_sizes[n]; ++c)
        if (cot[n](v, c) > T(0)) mu[n][c] += mu[n + 1][v] * cot[n](v, c);
    }
  }
  std::vector<Matrix<T>> kernels(depth);
  for (std::size_t n = 0; n < depth; ++n) {
    kernels[n] = Matrix<T>(level_sizes[n], level_sizes[n + 1], T(0));
    for (std::size_t c = 0; c < level_sizes[n]; ++c) {
      if (mu[n][c] == T(0)) {
        // zero-mass state: give it some row to keep the matrix stochastic;
        // it is pruned below
        bool placed = false;
        for (std::size_t v = 0; v < level_sizes[n + 1] && !placed; ++v)
          if (mult[n](c, v) > 0) {
            kernels[n](c, v) = T(1);
            placed = true;
          }
        if (!placed) kernels[n](c, 0) = T(1);
        continue;
      }
      for (std::size_t v = 0; v < level_sizes[n + 1]; ++v)
        if (cot[n](v, c) > T(0) && mu[n + 1][v] > T(0))
          kernels[n](c, v) = mu[n + 1][v] * cot[n](v, c) / mu[n][c];
    }
  }
  MarkovModel<T> m = MarkovModel<T>::make_explicit(std::move(kernels), mu[0], std::move(mult));
  m.kind_ = ModelKind::Bratteli;
  return m;
}

// --- derived operations -------------------------------------------------------

// New model whose level-k states are the original level-n_k states and whose
// kernels are the in-between products. Schedule must start at 0.
template <class T>
MarkovModel<T> telescope(const MarkovModel<T>& model, const std::vector<std::size_t>& schedule) {
  if (schedule.size() < 2 || schedule.front() != 0)
    throw Error(ErrorCode::BadSchedule, "schedule must start at 0 and have >= 2 entries");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1])
      throw Error(ErrorCode::BadSchedule, "schedule must be strictly increasing");
  if (schedule.back() > model.horizon())
    throw Error(ErrorCode::BadSchedule, "schedule exceeds model horizon");

  std::vector<Matrix<T>> kernels;
  kernels.reserve(schedule.size() - 1);
  for (std::size_t s = 0; s + 1 < schedule.size(); ++s) {
    Matrix<T> prod = model.kernel(schedule[s]);
    for (std::size_t n = schedule[s] + 1; n < schedule[s + 1]; ++n)
      prod = prod.multiply(model.kernel(n));
    kernels.push_back(std::move(prod));
  }
  return MarkovModel<T>::make_explicit(std::move(kernels), model.initial());
}

// Quotient view: levels shifted down by k, with mu_k as the new initial law.
template <class T>
MarkovModel<T> rebase(const MarkovModel<T>& model, std::size_t k) {
  if (k == 0) {
    MarkovModel<T> copy = model;
    return copy;
  }
  if (k > model.horizon())
    throw Error(ErrorCode::HorizonExceeded, "rebase level beyond horizon");
  std::vector<T> init = level_marginal(model, k).weights;
  if (model.kind() == ModelKind::Stationary)
    return MarkovModel<T>::make_stationary(model.kernel(0), std::move(init),
                                           model.horizon() - k);
  std::vector<Matrix<T>> kernels;
  std::vector<Matrix<long>> mults;
  for (std::size_t n = k; n < model.horizon(); ++n) {
    kernels.push_back(model.kernel(n));
    if (model.has_multiplicities()) {
      Matrix<long> mm(model.state_count(n), model.state_count(n + 1), 0);
      for (std::size_t c = 0; c < mm.rows(); ++c)
        for (std::size_t v = 0; v < mm.cols(); ++v) mm(c, v) = model.multiplicity(n, c, v);
      mults.push_back(std::move(mm));
    }
  }
  return MarkovModel<T>::make_explicit(std::move(kernels), std::move(init), std::move(mults));
}

// Dobrushin contraction coefficient of a cotransition kernel: the largest
// total-variation distance between two of its rows.
template <class T>
T dobrushin_coefficient(const CotransitionKernel<T>& q) {
  T best(0);
  for (std::size_t a = 0; a < q.rows.rows(); ++a) {
    if (!q.supported[a]) continue;
    for (std::size_t b = a + 1; b < q.rows.rows(); ++b) {
      if (!q.supported[b]) continue;
      T tv = total_variation(q.rows.row(a), q.rows.row(b));
      if (tv > best) best = tv;
    }
  }
  return best;
}

template <class T>
struct ErgodicityReport {
  std::vector<T> coefficients;  // levels 1..n
  std::vector<T> products;      // running products
  bool tail_trivial_certified = false;
};

// The standardness machinery assumes a trivial tail; this reports the usual
// sufficient certificate (product of contraction coefficients -> 0).
template <class T>
ErgodicityReport<T> ergodicity_diagnostic(const MarkovModel<T>& model, std::size_t n,
                                          double tol = 1e-6) {
  if (n > model.horizon()) throw Error(ErrorCode::HorizonExceeded, "diagnostic level");
  ErgodicityReport<T> r;
  T prod(1);
  for (std::size_t k = 1; k <= n; ++k) {
    T c = dobrushin_coefficient(cotransitions(model, k));
    prod *= c;
    r.coefficients.push_back(c);
    r.products.push_back(prod);
  }
  if (!r.products.empty()) {
    const T& last = r.products.back();
    r.tail_trivial_certified = (last == T(0)) || (to_double(last) <= tol);
  }
  return r;
}

// --- built-in generators (the paper's worked examples) ------------------------

template <class T>
MarkovModel<T> bernoulli_model(const T& p, std::size_t horizon = 64) {
  T q = T(1) - p;
  Matrix<T> m = Matrix<T>::from_rows({{p, q}, {p, q}});
  return MarkovModel<T>::make_stationary(std::move(m), {p, q}, horizon);
}

template <class T>
MarkovModel<T> symmetric_model(const T& p, std::size_t horizon = 64) {
  T q = T(1) - p;
  T half = T(1) / T(2);
  Matrix<T> m = Matrix<T>::from_rows({{p, q}, {q, p}});
  return MarkovModel<T>::make_stationary(std::move(m), {half, half}, horizon);
}

template <class T>
MarkovModel<T> periodic_model(std::size_t horizon = 64) {
  T half = T(1) / T(2);
  Matrix<T> m = Matrix<T>::from_rows({{T(0), T(1)}, {T(1), T(0)}});
  return MarkovModel<T>::make_stationary(std::move(m), {half, half}, horizon);
}

// Pascal graph truncated at `levels`, with the central measure (uniform on
// paths; equivalently the symmetric Bernoulli boundary weights).
template <class T>
MarkovModel<T> pascal_model(std::size_t levels) {
  std::vector<std::size_t> sizes;
  std::vector<std::vector<BratteliEdge>> edges;
  for (std::size_t n = 0; n <= levels; ++n) sizes.push_back(n + 1);
  for (std::size_t n = 0; n < levels; ++n) {
    std::vector<BratteliEdge> e;
    for (std::size_t k = 0; k <= n; ++k) {
      e.push_back({k, k, 1});
      e.push_back({k, k + 1, 1});
    }
    edges.push_back(std::move(e));
  }
  return MarkovModel<T>::make_bratteli(sizes, edges);
}

// Homogeneous dyadic diagram: one vertex per level, two parallel edges.
// Partition elements are uniform binary trees.
template <class T>
MarkovModel<T> dyadic_model(std::size_t levels) {
  std::vector<std::size_t> sizes(levels + 1, 1);
  std::vector<std::vector<BratteliEdge>> edges(levels, {BratteliEdge{0, 0, 2}});
  return MarkovModel<T>::make_bratteli(sizes, edges);
}

}  // namespace filtlab
